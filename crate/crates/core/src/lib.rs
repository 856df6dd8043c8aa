pub mod forms;
pub mod gf;
pub mod smoothness;
pub mod ledger;
pub mod census;
pub mod cli;
