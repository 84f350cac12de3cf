mod common;

use num_complex::Complex64;
use rug::Float;
use zerodensity::ball::{ComplexBall, RealBall, RAD_PREC};
use zerodensity::fmodel::{lehman_bound, ExpSum, Phi, Term};
use zerodensity::rigor::*;
use zerodensity::zeros::ZeroTable;

use common::*;

const PREC: u32 = 384;
const CAND_RE: f64 = 14685.516156148412;
const CAND_IM: f64 = 0.0798327;

fn certify_table() -> ZeroTable {
    ZeroTable::load(data("zeros_certify.txt"), None).unwrap()
}

fn reference_contour() -> Contour {
    Contour::new("14685.46615614841236", "14685.56615614841236", "0.0669574675", "0.121953870").unwrap()
}

fn radius() -> Float {
    Float::with_val(RAD_PREC, Float::i_exp(1, -20))
}

/// `1 - 2 e^{iz}`, with a zero at `i log 2`.
fn one_minus_two_exp() -> ExpSum {
    let t = |a: i64, w: i64| Term { a: ComplexBall::new(RealBall::from_int(PREC, a), RealBall::zero(PREC)), w: RealBall::from_int(PREC, w) };
    ExpSum::from_terms(PREC, vec![t(1, 0), t(-2, 1)])
}

#[test]
fn candidate_near_14685_is_verified() {
    let t = certify_table();
    let sum = ExpSum::from_table(&t, 4520, PREC).unwrap();
    let center = refine_candidate(Complex64::new(CAND_RE, CAND_IM), &sum).unwrap();
    let z = rouche_verify(&center, &sum, &t, &radius()).unwrap();
    assert_eq!(z.winding, 1);
    assert!(z.min_on_circle.lower() > 2.9e-7);
    assert!(z.tail_at_circle.upper() < 4e-176);
    assert!(z.min_on_circle.gt(&z.tail_at_circle));
    let inside = |b: &RealBall, lo: f64, hi: f64| b.lower() >= lo && b.upper() <= hi;
    assert!(inside(&z.xi.re, 14685.5161551, 14685.5161572) && inside(&z.xi.im, 0.0798317, 0.0798338), "{:?}", z.xi);
}

#[test]
fn shifted_centers_fail() {
    let t = certify_table();
    let sum = ExpSum::from_table(&t, 4520, PREC).unwrap();
    let center = refine_candidate(Complex64::new(CAND_RE, CAND_IM), &sum).unwrap();
    let off = center.add(&ComplexBall::from_f64(PREC, 1e-3, 0.0));
    match rouche_verify(&off, &sum, &t, &radius()) {
        Err(RigorError::Winding(0)) => {}
        other => panic!("{other:?}"),
    }
    // half a unit away, one Newton step does not reach a zero
    let far = refine_candidate(Complex64::new(CAND_RE + 0.5, CAND_IM), &sum);
    if let Ok(c) = far {
        assert!(rouche_verify(&c, &sum, &t, &radius()).is_err());
    }
}

#[test]
fn exact_zero_is_a_fixed_point() {
    let sum = one_minus_two_exp();
    let z = refine_candidate(Complex64::new(0.0, std::f64::consts::LN_2), &sum).unwrap();
    let ln2 = RealBall::from_int(PREC, 2).log().unwrap();
    assert!((z.im.mid().clone() - ln2.mid()).abs() < 1e-30);
    assert!(z.re.mid().clone().abs() < 1e-30);
    let v = rouche_verify_free(&z, &sum);
    assert_eq!(v, 1);
}

fn rouche_verify_free(center: &ComplexBall, sum: &ExpSum) -> i64 {
    winding_number(|z| Ok(sum.eval(z)), center, &Float::with_val(RAD_PREC, 1e-3), MIN_SEGMENTS).unwrap()
}

#[test]
fn contour_through_a_zero_is_inconclusive() {
    let sum = one_minus_two_exp();
    let c = Contour::new("-0.25", "0.25", "0.5", "0.6931471805599453").unwrap();
    for mode in [AlphaMode::Direct, AlphaMode::Expansion] {
        match contour_alpha(&sum, &c, "1e-3", mode) {
            Err(RigorError::ContourTouchesZero(_)) | Err(RigorError::Num(_)) => {}
            other => panic!("{mode:?}: {other:?}"),
        }
    }
    let clear = Contour::new("-0.25", "0.25", "0.5", "0.6").unwrap();
    assert!(contour_alpha(&sum, &clear, "1e-3", AlphaMode::Expansion).unwrap().alpha.is_positive());
}

#[test]
fn zero_width_rectangle_is_well_defined() {
    let sum = ExpSum::from_table(&search_table(), 11, PREC).unwrap();
    let c = Contour::new("14685.5", "14685.5", "0.0669574675", "0.121953870").unwrap();
    let r = contour_alpha(&sum, &c, "1e-4", AlphaMode::Direct).unwrap();
    assert!(r.alpha.is_positive());
}

#[test]
fn finer_subdivision_never_lowers_alpha() {
    let sum = ExpSum::from_table(&search_table(), 11, PREC).unwrap();
    let c = reference_contour();
    let coarse = contour_alpha(&sum, &c, "1e-4", AlphaMode::Expansion).unwrap();
    let fine = contour_alpha(&sum, &c, "5e-5", AlphaMode::Expansion).unwrap();
    assert!(fine.pieces > coarse.pieces);
    assert!(fine.alpha.lower() >= coarse.alpha.lower());
    // term-by-term pieces are slightly looser than the block models
    let direct = contour_alpha(&sum, &c, "1e-4", AlphaMode::Direct).unwrap();
    assert!(direct.alpha.lower() <= coarse.alpha.lower() * 1.0001f64);
    assert!(direct.alpha.lower() > 0.005);
}

#[test]
fn reference_constants_are_reproduced() {
    let t = certify_table();
    let c = reference_contour();
    let alpha = RealBall::from_decimal(PREC, "0.00517911").unwrap();
    // certified lower bound on Im xi
    let w = RealBall::from_decimal(PREC, "0.0798317935").unwrap();
    let b = contour_constants(&t, 11, &c, &alpha, &w, PREC).unwrap();
    assert!(b.a.upper() <= 0.0612946 && b.a_w.upper() <= 0.0463553);
    assert!(b.b.upper() <= 0.00212713 && b.b_w.upper() <= 0.000895455);
    assert!(b.b_w.upper() <= b.b.upper());
    assert_eq!(solve_q0(&b, PREC).unwrap(), 537);
    assert!(q0_fails(536, &b, PREC));
    assert!(matches!(solve_q0_legacy(&b, PREC), Err(RigorError::LegacyInfeasible)));
}

#[test]
fn constants_at_identical_heights_coincide() {
    let t = search_table();
    let c = Contour::new("100", "100.1", "0.08", "0.1").unwrap();
    let alpha = RealBall::from_decimal(PREC, "0.01").unwrap();
    let b = contour_constants(&t, 11, &c, &alpha, &RealBall::from_decimal(PREC, "0.08").unwrap(), PREC).unwrap();
    assert!(b.a.mid() == b.a_w.mid() && b.b.mid() == b.b_w.mid());

    // with every zero in the head the tail is Lehman beyond the table alone
    let full = contour_constants(&t, t.len(), &c, &alpha, &RealBall::from_decimal(PREC, "0.09").unwrap(), PREC).unwrap();
    let y0 = RealBall::from_decimal(PREC, "0.08").unwrap();
    let top = t.ordinate(t.len(), PREC).unwrap();
    let lehman = lehman_bound(&Phi::exp_over_t(y0), &top, None, PREC).unwrap();
    assert!(full.b.upper() >= lehman.upper());
    assert!(full.b.upper() <= lehman.upper() * 1.000001f64);
}

#[test]
fn q0_at_the_search_limit() {
    // 2 pi a / q = slack exactly at q = 10^6, a_w = 0
    let d = |s: &str| RealBall::from_decimal(PREC, s).unwrap();
    let slack = RealBall::pi(PREC).mul_2si(1).mul(&d("0.001")).div(&RealBall::from_int(PREC, 1_000_000)).unwrap();
    let alpha = RealBall::exact(PREC, &(slack.upper() + (slack.upper() >> 100u32)));
    let bounds = ContourBounds {
        contour: Contour::new("0", "0.1", "0.05", "0.1").unwrap(),
        n: 1,
        alpha,
        a: d("0.001"),
        b: RealBall::zero(PREC),
        a_w: RealBall::zero(PREC),
        b_w: RealBall::zero(PREC),
        w_lower: d("0.08"),
    };
    assert_eq!(solve_q0(&bounds, PREC).unwrap(), Q0_LIMIT);
}

#[test]
fn legacy_formula_at_its_smallest() {
    // alpha - 3b = 4 pi a gives floor(1) + 1
    let d = |s: &str| RealBall::from_decimal(PREC, s).unwrap();
    let a = d("0.001");
    let four_pi_a = RealBall::pi(PREC).mul_2si(2).mul(&a);
    let alpha = RealBall::exact(PREC, four_pi_a.mid());
    let bounds = ContourBounds {
        contour: Contour::new("0", "0.1", "0.05", "0.1").unwrap(),
        n: 1,
        alpha,
        a,
        b: RealBall::zero(PREC),
        a_w: RealBall::zero(PREC),
        b_w: RealBall::zero(PREC),
        w_lower: d("0.08"),
    };
    assert_eq!(solve_q0_legacy(&bounds, PREC).unwrap(), 2);
}
