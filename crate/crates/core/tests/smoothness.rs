mod common;

use cubic_census::census::sample_form;
use cubic_census::forms::CubicForm;
use cubic_census::gf::{Elem, FieldCtx};
use cubic_census::smoothness::{is_smooth, macaulay_test, singular_search, SmoothnessEngine, SmoothnessError, Strategy};
use proptest::prelude::*;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

fn gf(q: u64) -> FieldCtx {
    FieldCtx::of_order(q).unwrap()
}

/// Random forms, half of them sparse so that singular ones are common.
fn mixed_forms(ctx: &FieldCtx, n: usize, seed: u64) -> Vec<CubicForm> {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let mut out = Vec::new();
    while out.len() < n {
        let sparse = out.len() % 2 == 1;
        let c: Vec<Elem> = (0..20)
            .map(|_| {
                if sparse && rng.gen_bool(0.75) {
                    Elem::ZERO
                } else {
                    Elem(rng.gen_range(0..ctx.q()))
                }
            })
            .collect();
        let f = CubicForm::from_slice(ctx, &c).unwrap();
        if !f.is_zero() {
            out.push(f);
        }
    }
    out
}

/// A singular point of a cubic surface is defined over an extension of
/// degree at most 4, so the union of these fields catches every singular form.
fn brute_singular(form: &CubicForm, extensions: &[FieldCtx]) -> bool {
    extensions.iter().any(|e| common::brute_singular_over(form, e))
}

#[test]
fn both_oracles_match_brute_force_over_gf2() {
    let ctx = gf(2);
    let ext = [gf(8), gf(16)];
    let forms = mixed_forms(&ctx, 150, 1);
    let mut singular = 0;
    for f in &forms {
        let expected = !brute_singular(f, &ext);
        singular += usize::from(!expected);
        assert_eq!(macaulay_test(f).unwrap().smooth, expected, "{f:?}");
        assert_eq!(singular_search(f, 4).unwrap().smooth, expected, "{f:?}");
    }
    assert!(singular > 30 && singular < 140, "{singular} singular of {}", forms.len());
}

#[test]
fn both_oracles_match_brute_force_in_characteristic_3() {
    let ctx = gf(3);
    let ext = [gf(27), gf(81)];
    for f in mixed_forms(&ctx, 6, 2) {
        let expected = !brute_singular(&f, &ext);
        assert_eq!(macaulay_test(&f).unwrap().smooth, expected, "{f:?}");
        assert_eq!(singular_search(&f, 4).unwrap().smooth, expected, "{f:?}");
    }
}

#[test]
fn witnesses_are_genuine_and_scan_agrees() {
    // the reference scan walks all of P^3(GF(q^depth)), so larger fields
    // are compared at a shallower depth
    for (q, depth) in [(2u64, 4u32), (3, 4), (4, 2), (5, 2), (7, 2)] {
        let ctx = gf(q);
        let engine = SmoothnessEngine::with_depth(&ctx, Strategy::Search, depth).unwrap();
        for f in mixed_forms(&ctx, 40, q) {
            let fast = engine.singular_search(&f).unwrap();
            let slow = engine.singular_scan(&f).unwrap();
            assert_eq!(fast, slow, "{f:?}");
            if let Some(w) = &fast.witness {
                assert!(w.recheck(&f));
                assert!(w.partial_values.iter().all(|v| v.is_zero()));
                assert!(w.form_value.is_zero());
                assert!((1..=depth).contains(&w.degree));
                assert_eq!(w.point.ctx().q() as u64, q.pow(w.degree));
            }
        }
    }
}

#[test]
fn singular_point_needing_an_extension() {
    // x0^2 x1 + x1^2 x2 + ... style forms can hide their nodes off the base
    // field; search depth 1 misses what depth 4 finds
    let ctx = gf(2);
    for f in mixed_forms(&ctx, 400, 9) {
        let shallow = singular_search(&f, 1).unwrap();
        let deep = singular_search(&f, 4).unwrap();
        if shallow.smooth && !deep.smooth {
            assert!(deep.witness.as_ref().unwrap().degree > 1);
            assert!(!macaulay_test(&f).unwrap().smooth);
            return;
        }
    }
    panic!("no form with only non-rational singular points among the samples");
}

#[test]
fn cross_check_agrees_on_samples() {
    for q in [2u64, 3, 4, 5, 7, 8, 9] {
        let ctx = gf(q);
        let engine = SmoothnessEngine::new(&ctx, Strategy::CrossCheck).unwrap();
        for i in 0..100 {
            engine.is_smooth(&sample_form(&ctx, 5, i)).unwrap();
        }
        for f in mixed_forms(&ctx, 50, q) {
            engine.is_smooth(&f).unwrap();
        }
    }
}

#[test]
fn errors() {
    let ctx = gf(5);
    assert!(matches!(
        is_smooth(&CubicForm::zero(&ctx), Strategy::Macaulay),
        Err(SmoothnessError::ZeroForm)
    ));
    let rank_only = SmoothnessEngine::new(&ctx, Strategy::Macaulay).unwrap();
    assert!(matches!(
        rank_only.singular_search(&CubicForm::fermat(&ctx)),
        Err(SmoothnessError::SearchUnavailable)
    ));
    assert!(rank_only.is_smooth(&CubicForm::fermat(&gf(7))).is_err());
    assert_eq!("cross-check".parse::<Strategy>(), Ok(Strategy::CrossCheck));
    assert!("fast".parse::<Strategy>().is_err());
}

#[test]
fn well_known_surfaces() {
    // Fermat is smooth away from characteristic 3
    for q in [2u64, 4, 5, 7, 8] {
        assert!(is_smooth(&CubicForm::fermat(&gf(q)), Strategy::CrossCheck).unwrap().smooth);
    }
    assert!(!is_smooth(&CubicForm::fermat(&gf(9)), Strategy::CrossCheck).unwrap().smooth);
    // Cayley's four-nodal cubic: x1x2x3 + x0x2x3 + x0x1x3 + x0x1x2
    for q in [2u64, 5, 7] {
        let ctx = gf(q);
        let f = CubicForm::from_terms(
            &ctx,
            &[(1, [0, 1, 1, 1]), (1, [1, 0, 1, 1]), (1, [1, 1, 0, 1]), (1, [1, 1, 1, 0])],
        );
        let v = is_smooth(&f, Strategy::CrossCheck).unwrap();
        assert!(!v.smooth);
        assert_eq!(v.witness.unwrap().degree, 1);
    }
}

fn invertible(ctx: &FieldCtx, raw: &[u32]) -> Option<[[Elem; 4]; 4]> {
    let g: [[Elem; 4]; 4] = std::array::from_fn(|i| std::array::from_fn(|j| Elem(raw[4 * i + j] % ctx.q())));
    let mut m = g;
    for col in 0..4 {
        let piv = (col..4).find(|&r| !m[r][col].is_zero())?;
        m.swap(col, piv);
        let inv = ctx.inv(m[col][col]).unwrap();
        for r in col + 1..4 {
            let f = ctx.mul(m[r][col], inv);
            for c in 0..4 {
                m[r][c] = ctx.sub(m[r][c], ctx.mul(f, m[col][c]));
            }
        }
    }
    Some(g)
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(48))]

    #[test]
    fn smoothness_is_invariant_under_linear_change_and_scaling(
        qi in 0usize..5,
        raw in proptest::collection::vec(0u32..1000, 20),
        mask in proptest::collection::vec(proptest::bool::weighted(0.6), 20),
        g in proptest::collection::vec(0u32..1000, 16),
        lambda in 1u32..1000,
    ) {
        let ctx = gf([2u64, 3, 4, 5, 7][qi]);
        let c: Vec<Elem> = raw.iter().zip(&mask).map(|(&r, &keep)| if keep { Elem(r % ctx.q()) } else { Elem::ZERO }).collect();
        let f = CubicForm::from_slice(&ctx, &c).unwrap();
        prop_assume!(!f.is_zero());
        let Some(g) = invertible(&ctx, &g) else { return Ok(()) };
        let lambda = Elem(1 + lambda % (ctx.q() - 1));
        let engine = SmoothnessEngine::new(&ctx, Strategy::CrossCheck).unwrap();
        let base = engine.is_smooth(&f).unwrap().smooth;
        prop_assert_eq!(engine.is_smooth(&f.compose_linear(&g)).unwrap().smooth, base);
        prop_assert_eq!(engine.is_smooth(&f.scale(lambda)).unwrap().smooth, base);
        prop_assert_eq!(engine.is_smooth(&f.normalized()).unwrap().smooth, base);
    }
}
