//! Smoothness of `V(F)` over the algebraic closure, decided two ways.
//!
//! [`singular_search`] looks for a singular point over `GF(q^d)` for
//! `d = 1..=depth`; [`macaulay_test`] checks that the partials (and `F` in
//! characteristic 3) generate every form of the critical degree.
//! [`SmoothnessEngine`] caches the extension fields and tables so the census
//! can call it millions of times.

mod macaulay;
mod search;
mod upoly;

use std::fmt;

use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::forms::CubicForm;
use crate::gf::{FieldCtx, FieldError};

pub use macaulay::MacaulayRank;
pub use search::Witness;

use search::Searcher;

pub const DEFAULT_SEARCH_DEPTH: u32 = 4;

#[derive(Debug, Error)]
pub enum SmoothnessError {
    #[error("the zero form does not define a surface")]
    ZeroForm,
    #[error("singular search and Macaulay rank disagree on {coeffs}: search says {search_smooth}, rank {rank}/{target}")]
    OracleDisagreement {
        /// The form's coefficients in the canonical text format.
        coeffs: String,
        search_smooth: bool,
        rank: usize,
        target: usize,
    },
    #[error("this engine was built without extension fields for the singular search")]
    SearchUnavailable,
    #[error(transparent)]
    Field(#[from] FieldError),
}

#[derive(Clone, Copy, Debug, Default, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Strategy {
    Search,
    #[default]
    Macaulay,
    CrossCheck,
}

impl fmt::Display for Strategy {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            Strategy::Search => "search",
            Strategy::Macaulay => "macaulay",
            Strategy::CrossCheck => "cross_check",
        })
    }
}

impl std::str::FromStr for Strategy {
    type Err = String;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        match s {
            "search" => Ok(Strategy::Search),
            "macaulay" => Ok(Strategy::Macaulay),
            "cross_check" | "cross-check" => Ok(Strategy::CrossCheck),
            other => Err(format!("unknown strategy `{other}`")),
        }
    }
}

/// Which test produced a verdict.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Method {
    Search { depth: u32 },
    Macaulay,
    /// Both ran and agreed.
    Both { depth: u32 },
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct SmoothnessVerdict {
    pub smooth: bool,
    /// Present when a search found a singular point.
    pub witness: Option<Witness>,
    pub rank: Option<MacaulayRank>,
    pub method: Method,
}

/// Reusable smoothness tester over one base field.
pub struct SmoothnessEngine {
    ctx: FieldCtx,
    searcher: Searcher,
    strategy: Strategy,
}

impl SmoothnessEngine {
    pub fn new(ctx: &FieldCtx, strategy: Strategy) -> Result<Self, SmoothnessError> {
        Self::with_depth(ctx, strategy, DEFAULT_SEARCH_DEPTH)
    }

    pub fn with_depth(ctx: &FieldCtx, strategy: Strategy, depth: u32) -> Result<Self, SmoothnessError> {
        // only build extension fields when the search will run
        let depth = if strategy == Strategy::Macaulay { 0 } else { depth };
        Ok(SmoothnessEngine {
            ctx: ctx.clone(),
            searcher: Searcher::new(ctx, depth)?,
            strategy,
        })
    }

    pub fn ctx(&self) -> &FieldCtx {
        &self.ctx
    }

    pub fn strategy(&self) -> Strategy {
        self.strategy
    }

    fn check(&self, form: &CubicForm) -> Result<(), SmoothnessError> {
        if form.is_zero() {
            return Err(SmoothnessError::ZeroForm);
        }
        if form.ctx() != &self.ctx {
            return Err(FieldError::IncompatibleFields {
                from: form.ctx().q() as u64,
                to: self.ctx.q() as u64,
            }
            .into());
        }
        Ok(())
    }

    fn searcher(&self) -> Result<&Searcher, SmoothnessError> {
        if self.searcher.depth() == 0 {
            // engines built for the rank test carry no extension fields
            return Err(SmoothnessError::SearchUnavailable);
        }
        Ok(&self.searcher)
    }

    pub fn singular_search(&self, form: &CubicForm) -> Result<SmoothnessVerdict, SmoothnessError> {
        self.check(form)?;
        let searcher = self.searcher()?;
        let witness = searcher.search(form);
        Ok(SmoothnessVerdict {
            smooth: witness.is_none(),
            witness,
            rank: None,
            method: Method::Search {
                depth: searcher.depth(),
            },
        })
    }

    /// The literal point-by-point scan behind [`Self::singular_search`];
    /// slow, kept as a reference.
    pub fn singular_scan(&self, form: &CubicForm) -> Result<SmoothnessVerdict, SmoothnessError> {
        self.check(form)?;
        let searcher = self.searcher()?;
        let witness = searcher.scan(form);
        Ok(SmoothnessVerdict {
            smooth: witness.is_none(),
            witness,
            rank: None,
            method: Method::Search {
                depth: searcher.depth(),
            },
        })
    }

    pub fn macaulay_test(&self, form: &CubicForm) -> Result<SmoothnessVerdict, SmoothnessError> {
        self.check(form)?;
        let rank = macaulay::macaulay_rank(form);
        Ok(SmoothnessVerdict {
            smooth: rank.full(),
            witness: None,
            rank: Some(rank),
            method: Method::Macaulay,
        })
    }

    /// Runs the engine's strategy. With `CrossCheck`, a disagreement is
    /// logged and returned as an error.
    pub fn is_smooth(&self, form: &CubicForm) -> Result<SmoothnessVerdict, SmoothnessError> {
        match self.strategy {
            Strategy::Search => self.singular_search(form),
            Strategy::Macaulay => self.macaulay_test(form),
            Strategy::CrossCheck => {
                let by_rank = self.macaulay_test(form)?;
                let by_search = self.singular_search(form)?;
                let rank = by_rank.rank.expect("rank test reports its rank");
                if by_rank.smooth != by_search.smooth {
                    let err = SmoothnessError::OracleDisagreement {
                        coeffs: form.to_text(),
                        search_smooth: by_search.smooth,
                        rank: rank.rank,
                        target: rank.target,
                    };
                    log::error!("{err}");
                    return Err(err);
                }
                Ok(SmoothnessVerdict {
                    smooth: by_rank.smooth,
                    witness: by_search.witness,
                    rank: Some(rank),
                    method: Method::Both {
                        depth: self.searcher.depth(),
                    },
                })
            }
        }
    }
}

/// Searches for a singular point over `GF(q^d)`, `d = 1..=depth`.
pub fn singular_search(form: &CubicForm, depth: u32) -> Result<SmoothnessVerdict, SmoothnessError> {
    SmoothnessEngine::with_depth(form.ctx(), Strategy::Search, depth)?.singular_search(form)
}

pub fn macaulay_test(form: &CubicForm) -> Result<SmoothnessVerdict, SmoothnessError> {
    SmoothnessEngine::new(form.ctx(), Strategy::Macaulay)?.macaulay_test(form)
}

pub fn is_smooth(form: &CubicForm, strategy: Strategy) -> Result<SmoothnessVerdict, SmoothnessError> {
    SmoothnessEngine::new(form.ctx(), strategy)?.is_smooth(form)
}
