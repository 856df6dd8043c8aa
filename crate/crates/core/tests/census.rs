use std::collections::BTreeMap;
use std::sync::OnceLock;

use cubic_census::census::{
    count_monic, enum_monic_forms, merge, monic_form_at, run_census, run_census_until, sample_form, trace_from_count,
    verify_report, CensusConfig, CensusError, CensusReport, CheckStatus, Checkpoint, Finding, FindingKind, Mode,
    Partial, RunStatus, Tally,
};
use cubic_census::forms::CubicForm;
use cubic_census::gf::FieldCtx;
use cubic_census::ledger::{predict, predict_unchecked};
use cubic_census::smoothness::{is_smooth, Strategy};
use proptest::prelude::{prop_assert_eq, proptest, Strategy as _};

fn gf(q: u64) -> FieldCtx {
    FieldCtx::of_order(q).unwrap()
}

fn q2_report() -> &'static CensusReport {
    static R: OnceLock<CensusReport> = OnceLock::new();
    R.get_or_init(|| run_census(&CensusConfig::exhaustive(&gf(2)).with_lines(true)).unwrap())
}

fn status(r: &CensusReport, q: u64, id: &str) -> CheckStatus {
    let pred = predict_unchecked(q).unwrap();
    verify_report(r, &pred).check(id).unwrap().status
}

#[test]
fn traces_from_counts() {
    assert_eq!(trace_from_count(7, 2), Ok(0));
    assert_eq!(trace_from_count(1, 2), Ok(-3));
    assert_eq!(trace_from_count(15, 2), Ok(4));
    assert_eq!(trace_from_count(31 + 6 * 5, 5), Ok(6));
    assert!(trace_from_count(8, 2).is_err());
}

#[test]
fn monic_indexing_is_a_bijection() {
    assert_eq!(count_monic(2), Some((1 << 20) - 1));
    assert_eq!(count_monic(4), Some((4u64.pow(20) - 1) / 3));
    assert_eq!(count_monic(16), None);
    let ctx = gf(3);
    let n = count_monic(3).unwrap();
    assert!(monic_form_at(&ctx, n).is_none());
    for (i, f) in enum_monic_forms(&ctx).take(5000).enumerate() {
        assert_eq!(monic_form_at(&ctx, i as u64).unwrap(), f);
        assert_eq!(f.normalized(), f);
    }
    // the tail of the order, where the leading one sits late
    for i in n - 50..n {
        let f = monic_form_at(&ctx, i).unwrap();
        assert_eq!(f.normalized(), f);
    }
    assert_eq!(monic_form_at(&ctx, n - 1).unwrap().to_text(), format!("{}1", "0,".repeat(19)));
    let small = gf(2);
    assert_eq!(enum_monic_forms(&small).count() as u64, count_monic(2).unwrap());
}

#[test]
fn samples_are_reproducible_and_monic() {
    let ctx = gf(7);
    for i in 0..200 {
        let f = sample_form(&ctx, 11, i);
        assert_eq!(f, sample_form(&ctx, 11, i));
        assert_eq!(f.normalized(), f);
        assert!(!f.is_zero());
    }
    assert_ne!(sample_form(&ctx, 11, 0), sample_form(&ctx, 12, 0));
    assert_ne!(sample_form(&ctx, 11, 0), sample_form(&ctx, 11, 1));
}

#[test]
fn exhaustive_q2_report_verifies() {
    let r = q2_report();
    let v = verify_report(r, &predict(2).unwrap());
    assert!(v.passed(), "{v}");
    assert_eq!(r.smooth_count, 322_560);
    assert_eq!(r.point_sum, 2_257_920);
    let lines = r.line_histogram.as_ref().unwrap();
    assert_eq!(lines.values().sum::<u64>(), r.smooth_count);
    assert!(lines.keys().all(|&l| l <= 27));
    assert!(r.trace_csv().unwrap().starts_with("t,count\n-3,"));
    assert!(r.line_csv().unwrap().unwrap().starts_with("lines,count\n"));
}

#[test]
fn a_single_census_agrees_with_direct_classification() {
    let ctx = gf(5);
    let cfg = CensusConfig::sample(&ctx, 400, 8).with_lines(true);
    let r = run_census(&cfg).unwrap();
    let (mut smooth, mut points) = (0, 0);
    let mut traces = BTreeMap::new();
    for i in 0..400 {
        let f = sample_form(&ctx, 8, i);
        if is_smooth(&f, Strategy::Search).unwrap().smooth {
            let n = cubic_census::forms::count_points(&f).unwrap();
            smooth += 1;
            points += n;
            *traces.entry(trace_from_count(n, 5).unwrap()).or_insert(0u64) += 1;
        }
    }
    assert_eq!((r.smooth_count, r.point_sum), (smooth, points));
    assert_eq!(r.trace_histogram, traces);
    assert!(r.sample_stats.is_some());
}

#[test]
fn tampered_reports_fail_the_right_checks() {
    let base = q2_report();

    let mut r = base.clone();
    r.point_sum += 2;
    let v = verify_report(&r, &predict(2).unwrap());
    assert!(!v.passed());
    assert_eq!(v.check("ii").unwrap().status, CheckStatus::Fail);
    assert_eq!(v.check("i").unwrap().status, CheckStatus::Pass);

    let mut r = base.clone();
    *r.trace_histogram.get_mut(&0).unwrap() -= 1;
    r.trace_histogram.insert(5, 1);
    assert_eq!(status(&r, 2, "iii"), CheckStatus::Fail);

    let mut r = base.clone();
    r.trace_histogram.insert(6, 1);
    assert_eq!(status(&r, 2, "iv"), CheckStatus::Fail);

    let mut r = base.clone();
    r.line_histogram.as_mut().unwrap().insert(28, 1);
    assert_eq!(status(&r, 2, "v"), CheckStatus::Fail);

    let mut r = base.clone();
    r.smooth_count -= 1;
    assert_eq!(status(&r, 2, "identity-smooth"), CheckStatus::Fail);

    let mut r = base.clone();
    r.findings.oracle_disagreements = 1;
    assert!(!verify_report(&r, &predict(2).unwrap()).passed());
}

#[test]
fn t6_is_expected_at_q7() {
    let mut r = q2_report().clone();
    r.q = 7;
    r.p = 7;
    r.mode = Mode::Sample { count: 10, seed: 1 };
    r.trace_histogram = BTreeMap::from([(6, 1), (0, 2)]);
    r.smooth_count = 3;
    r.point_sum = (49 + 7 * 7 + 1) + 2 * (49 + 7 + 1);
    r.line_histogram = None;
    r.sample_stats = None;
    let v = verify_report(&r, &predict(7).unwrap());
    assert_eq!(v.check("iv").unwrap().status, CheckStatus::Pass);
    assert_eq!(v.check("iii").unwrap().status, CheckStatus::Pass);
    assert_eq!(v.check("i").unwrap().status, CheckStatus::Skipped);
    // absence in a sample is not evidence
    r.trace_histogram = BTreeMap::from([(0, 3)]);
    r.point_sum = 3 * 57;
    assert_eq!(status(&r, 7, "iv"), CheckStatus::Skipped);
}

#[test]
fn checkpoints_resume_to_the_same_report() {
    let dir = tempfile::tempdir().unwrap();
    let cp = dir.path().join("run.ckpt");
    let base = CensusConfig::sample(&gf(4), 3000, 5).with_lines(true);
    let whole = run_census(&base).unwrap();

    let first = base.clone().with_checkpoint(&cp, 500);
    let RunStatus::Paused { next_index } = run_census_until(&first, Some(1200)).unwrap() else {
        panic!("run did not pause");
    };
    assert_eq!(next_index, 1500);
    let stored = Checkpoint::load(&cp).unwrap();
    assert_eq!(stored.next_index().unwrap(), 1500);
    assert_eq!(stored.config_hash, base.config_hash());

    // resume with a different partition count
    let resumed = run_census(&base.clone().with_partitions(3).with_resume(&cp)).unwrap();
    assert_eq!(resumed.canonical_json(), whole.canonical_json());
    assert!(resumed.run.resumed);

    let other = CensusConfig::sample(&gf(4), 3000, 6).with_resume(&cp);
    assert!(matches!(run_census(&other), Err(CensusError::ResumeMismatch { .. })));
}

#[test]
fn partitions_do_not_change_the_report() {
    let base = CensusConfig::sample(&gf(8), 2000, 1).with_lines(true);
    let one = run_census(&base).unwrap().canonical_json();
    for parts in [2, 5, 16] {
        let mut cfg = base.clone().with_partitions(parts);
        cfg.checkpoint_interval = 333;
        assert_eq!(run_census(&cfg).unwrap().canonical_json(), one, "{parts} partitions");
    }
}

#[test]
fn reports_round_trip_through_files() {
    let dir = tempfile::tempdir().unwrap();
    let path = dir.path().join("report.json");
    let r = run_census(&CensusConfig::sample(&gf(5), 200, 2)).unwrap();
    r.save(&path).unwrap();
    assert_eq!(CensusReport::load(&path).unwrap(), r);
    assert!(matches!(
        CensusReport::load(&dir.path().join("missing.json")),
        Err(CensusError::Io { .. })
    ));
}

#[test]
fn configuration_is_validated() {
    let e = run_census(&CensusConfig::sample(&gf(3), 10, 1)).unwrap_err();
    assert!(matches!(e, CensusError::UnsupportedCharacteristic(3)));
    let mut cfg = CensusConfig::sample(&gf(9), 10, 1);
    cfg.allow_char_3 = true;
    let r = run_census(&cfg).unwrap();
    assert!(r.config.experimental);
    assert!(matches!(
        run_census(&CensusConfig::sample(&gf(5), 0, 1)),
        Err(CensusError::InvalidConfig(_))
    ));
    assert!(matches!(
        run_census(&CensusConfig::sample(&gf(5), 10, 1).with_partitions(0)),
        Err(CensusError::InvalidConfig(_))
    ));
    assert!(matches!(
        CensusConfig::exhaustive(&gf(16)).validate(),
        Err(CensusError::IndexOverflow(16))
    ));
}

#[test]
fn config_hash_tracks_content_only() {
    let a = CensusConfig::sample(&gf(4), 100, 1);
    assert_eq!(a.config_hash(), a.clone().with_partitions(8).config_hash());
    assert_ne!(a.config_hash(), CensusConfig::sample(&gf(4), 100, 2).config_hash());
    assert_ne!(a.config_hash(), a.clone().with_lines(true).config_hash());
    assert_ne!(a.config_hash(), a.clone().with_strategy(Strategy::Search).config_hash());
}

#[test]
fn merging_partials_checks_the_configuration() {
    let a = Partial {
        config_hash: "x".into(),
        tally: Tally::default(),
    };
    let b = Partial {
        config_hash: "y".into(),
        tally: Tally::default(),
    };
    assert!(matches!(merge(&a, &b), Err(CensusError::ConfigMismatch)));
    assert_eq!(merge(&a, &a).unwrap(), a);
}

fn tally() -> impl proptest::strategy::Strategy<Value = Tally> {
    (
        0u64..1000,
        proptest::collection::btree_map(-3i64..7, 0u64..50, 0..5),
        proptest::collection::btree_map(0u64..28, 0u64..50, 0..4),
        proptest::collection::vec(0u64..100_000, 0..20),
    )
        .prop_map(|(visited, traces, lines, finding_idx)| {
            let smooth = traces.values().sum();
            Tally {
                visited,
                smooth,
                point_sum: smooth * 3,
                point_square_sum: smooth * 9,
                traces,
                lines,
                non_integral: 0,
                disagreements: finding_idx.len() as u64,
                findings: {
                    let mut f: Vec<Finding> = finding_idx
                        .into_iter()
                        .map(|index| Finding {
                            index,
                            coeffs: String::new(),
                            kind: FindingKind::NonIntegralTrace { points: 0 },
                        })
                        .collect();
                    f.sort_by_key(|x| x.index);
                    f.dedup();
                    f.truncate(16);
                    f
                },
            }
        })
}

proptest! {
    #[test]
    fn tally_merge_is_commutative_and_associative(a in tally(), b in tally(), c in tally()) {
        let mut ab = a.clone();
        ab.merge(&b);
        let mut ba = b.clone();
        ba.merge(&a);
        prop_assert_eq!(&ab, &ba);

        let mut ab_c = ab.clone();
        ab_c.merge(&c);
        let mut bc = b.clone();
        bc.merge(&c);
        let mut a_bc = a.clone();
        a_bc.merge(&bc);
        prop_assert_eq!(&ab_c, &a_bc);

        let mut a0 = a.clone();
        a0.merge(&Tally::default());
        prop_assert_eq!(a0, a);
    }

    #[test]
    fn normalization_preserves_the_class(seed in 0u64..1000, i in 0u64..1000) {
        let ctx = gf(5);
        let f = sample_form(&ctx, seed, i);
        let g = f.scale(ctx.from_int(3));
        prop_assert_eq!(g.normalized(), f.clone());
        let _ = CubicForm::fermat(&ctx);
    }
}
