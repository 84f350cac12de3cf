mod common;

use proptest::prelude::*;
use rug::{Float, Rational};
use zerodensity::ball::{BallOrdering, ComplexBall, RealBall, RAD_PREC};
use zerodensity::fmodel::{lehman_bound, tail_bound_rh, ExpSum, Phi, Term};
use zerodensity::rigor::winding_number;
use zerodensity::search::{newton_scan, propose_contour, q0_condition, q0_estimate, FloatSum, ScanParams, RESIDUAL_TOL};
use zerodensity::zeros::{coefficient_for, ZeroTable};

use common::*;

fn config(cases: u32) -> ProptestConfig {
    ProptestConfig { cases, failure_persistence: None, ..ProptestConfig::default() }
}

proptest! {
    #![proptest_config(config(64))]

    #[test]
    fn containment_over_all_operations(seed in any::<u8>()) {
        let (checked, bad) = containment_fuzz(200, seed);
        prop_assert!(checked > 150);
        prop_assert!(bad.is_empty(), "{:?}", bad.first());
    }

    #[test]
    fn higher_precision_refines_point_results(x in 0.01f64..50.0, y in -5.0f64..5.0) {
        let eval = |prec: u32| {
            let z = ComplexBall::from_f64(prec, y, x);
            let e = z.exp().mul(&z).div(&z.add(&ComplexBall::from_f64(prec, 1.0, 0.0))).unwrap();
            (e, RealBall::from_f64(prec, x).log().unwrap().sin())
        };
        let (lo, lo_r) = eval(64);
        let (hi, hi_r) = eval(512);
        prop_assert!(lo.contains(&hi) && lo_r.contains(&hi_r));
        prop_assert!(hi.re.rad() <= lo.re.rad() && hi_r.rad() <= lo_r.rad());
    }

    #[test]
    fn compare_agrees_with_exact_order(p in -1000i64..1000, q in -1000i64..1000, d in 1i64..1000) {
        let (x, y) = (RealBall::from_ratio(128, p, d), RealBall::from_ratio(128, q, d));
        let want = Rational::from((p, d)).cmp(&Rational::from((q, d)));
        match x.compare(&y) {
            BallOrdering::Less => prop_assert_eq!(want, std::cmp::Ordering::Less),
            BallOrdering::Greater => prop_assert_eq!(want, std::cmp::Ordering::Greater),
            _ => {}
        }
    }

    #[test]
    fn winding_of_powers_on_assorted_circles(k in 1u32..=3, cx in -2.0f64..2.0, cy in -2.0f64..2.0, e in 0i32..12) {
        let prec = 128;
        let radius = Float::with_val(RAD_PREC, 2f64.powi(-e));
        let center = ComplexBall::from_f64(prec, cx, cy);
        // zeros of (z - c)^k at c, plus one far outside
        let shift = center.clone();
        let far = ComplexBall::from_f64(prec, cx + 10.0, cy);
        let f = move |z: &ComplexBall| {
            let u = z.sub(&shift);
            let mut p = u.clone();
            for _ in 1..k {
                p = p.mul(&u);
            }
            Ok(p.mul(&z.sub(&far)))
        };
        prop_assert_eq!(winding_number(f, &center, &radius, 16).unwrap(), k as i64);
    }
}

#[test]
fn table_round_trip_preserves_balls_and_digest() {
    let t = search_table();
    let again = ZeroTable::from_bytes(t.to_bytes().to_vec(), None).unwrap();
    assert_eq!(again.source_digest(), t.source_digest());
    // re-serialized text keeps the balls, and is itself stable
    let text = ZeroTable::from_bytes(t.to_text().into_bytes(), None).unwrap();
    let twice = ZeroTable::from_bytes(text.to_text().into_bytes(), None).unwrap();
    assert_eq!(text.source_digest(), twice.source_digest());
    for u in [&again, &text] {
        assert_eq!(u.len(), t.len());
        for n in [1, 2, 500, 1000] {
            let (a, b) = (t.ordinate(n, 256).unwrap(), u.ordinate(n, 256).unwrap());
            assert!(a.mid() == b.mid() && a.rad() == b.rad());
        }
    }
}

#[test]
fn coefficients_decay() {
    let t = search_table();
    let prec = 256;
    let g1 = t.ordinate(1, prec).unwrap();
    for n in 1..=t.len() {
        let (a, g) = t.coefficient(n, prec).unwrap();
        let abs = a.abs();
        assert!(abs.upper() < g.recip().unwrap().lower());
        assert!(abs.upper() <= g1.recip().unwrap().upper());
    }
}

proptest! {
    #![proptest_config(config(24))]

    #[test]
    fn truncation_difference_is_within_the_tail(x in 20.0f64..20000.0, y in 0.02f64..0.5, n in 10usize..200) {
        let t = search_table();
        let prec = 1024;
        let z = ComplexBall::from_f64(prec, x, y);
        // exact midpoints lie inside the table balls, so the tail bound still applies
        let at_mids = |order: usize| {
            let terms = (1..=order)
                .map(|k| {
                    let w = RealBall::exact(prec, t.ordinate(k, prec).unwrap().mid());
                    Term { a: coefficient_for(&w), w }
                })
                .collect();
            ExpSum::from_terms(prec, terms).eval(&z)
        };
        let diff = at_mids(1000).sub(&at_mids(n));
        let tail = tail_bound_rh(&t, n, &RealBall::from_f64(prec, y), prec).unwrap();
        prop_assert!(diff.abs().upper() <= tail.upper());
    }

    #[test]
    fn lehman_dominates_table_sums(seed in any::<u8>()) {
        let t = search_table();
        let bad = lehman_vs_brute_force(&t, 2, seed);
        prop_assert!(bad.is_empty(), "{:?}", bad);
    }

    #[test]
    fn conjugate_inputs_match_termwise(w in 1.0f64..1000.0, x in -10.0f64..10.0, y in 0.0f64..1.0) {
        // one term a e^{iwz}: at -conj(z) the value is conj(a) e^{iwz}-conjugate times a / conj(a)
        let prec = 256;
        let wb = RealBall::from_f64(prec, w);
        let a = coefficient_for(&wb);
        let sum = ExpSum::from_terms(prec, vec![Term { a: a.clone(), w: wb.clone() }]);
        let z = ComplexBall::from_f64(prec, x, y);
        let mz = ComplexBall::from_f64(prec, -x, y);
        let e = ComplexBall::new(RealBall::zero(prec), wb).mul(&z).exp();
        let want = a.mul(&e);
        let got = sum.eval(&z);
        prop_assert!(got.sub(&want).abs().upper() < 1e-60);
        // e^{iw(-conj z)} = conj(e^{iwz})
        let got_m = sum.eval(&mz);
        let want_m = a.mul(&e.conj());
        prop_assert!(got_m.sub(&want_m).abs().upper() < 1e-60);
    }

    #[test]
    fn central_differences_converge_quadratically(x in 10.0f64..1000.0, y in 0.05f64..0.3) {
        let prec = 512;
        let terms = search_table().ordinates_f64()[..20]
            .iter()
            .map(|&g| {
                let w = RealBall::from_f64(prec, g);
                Term { a: coefficient_for(&w), w }
            })
            .collect();
        let sum = ExpSum::from_terms(prec, terms);
        let z = ComplexBall::from_f64(prec, x, y);
        let d = sum.eval_deriv(&z);
        let err = |h: f64| {
            let h = ComplexBall::from_f64(prec, h, 0.0);
            let fd = sum.eval(&z.add(&h)).sub(&sum.eval(&z.sub(&h))).div(&h.add(&h)).unwrap();
            fd.sub(&d).abs().to_f64()
        };
        let (e1, e2) = (err(1e-4), err(5e-5));
        // halving h divides the error by about four
        prop_assert!(e2 < e1 / 3.0, "{e1} {e2}");
    }
}

proptest! {
    #![proptest_config(config(8))]

    #[test]
    fn scan_results_are_small_residual_and_deterministic(t in 1000.0f64..20000.0) {
        let table = search_table();
        let sum = FloatSum::from_table(&table, 1000).unwrap();
        let p = ScanParams::window(t, t + 3.0);
        let found = newton_scan(&sum, &p).unwrap();
        prop_assert_eq!(&found, &newton_scan(&sum, &p).unwrap());
        for c in &found {
            prop_assert!(c.position.im > 0.0 && c.position.im < 0.085);
            prop_assert!(sum.eval(c.position).norm() < RESIDUAL_TOL * 10.0);
        }
        for c in found.iter().take(2) {
            if let Ok(prop) = propose_contour(c, &table.ordinates_f64(), 11) {
                prop_assert!((prop.x1 - prop.x0 - 0.1).abs() < 1e-9);
                prop_assert!(prop.x0 < c.position.re && c.position.re < prop.x1);
                prop_assert!(prop.y0 < c.position.im && c.position.im < prop.y1);
            }
        }
    }
}

proptest! {
    #![proptest_config(config(200))]

    #[test]
    fn q0_estimate_is_minimal(a in 0.01f64..0.1, aw in 0.01f64..0.1, alpha in 0.001f64..0.02, b in 0.0f64..0.003, bw in 0.0f64..0.001) {
        if let Some(q) = q0_estimate(a, aw, alpha, b, bw) {
            prop_assert!(q0_condition(q, a, aw, alpha, b, bw));
            if q > 2 {
                prop_assert!(!q0_condition(q - 1, a, aw, alpha, b, bw));
            }
        } else {
            prop_assert!(alpha <= b + 2.0 * bw || !q0_condition(1_000_000, a, aw, alpha, b, bw));
        }
    }
}

#[test]
fn lehman_bound_covers_an_unbounded_tail() {
    // sum over the table beyond gamma_500 plus Lehman from gamma_1000 is dominated
    // by Lehman from gamma_500 alone
    let t = search_table();
    let prec = 256;
    let y = RealBall::from_f64(prec, 0.01);
    let phi = Phi::exp_over_t(y);
    let from = t.ordinate(500, prec).unwrap();
    let top = t.ordinate(1000, prec).unwrap();
    let mut sum = lehman_bound(&phi, &top, None, prec).unwrap().total;
    for n in 500..t.len() {
        sum = sum.add(&phi.eval(&t.ordinate(n, prec).unwrap()).unwrap());
    }
    let whole = lehman_bound(&phi, &from, None, prec).unwrap();
    assert!(sum.lower() <= whole.upper());
}
