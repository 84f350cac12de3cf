//! Midpoint-radius ball arithmetic over MPFR floats.
//!
//! A [`RealBall`] represents the closed interval `[mid - rad, mid + rad]`.
//! Midpoints are carried at the working precision and rounded to nearest;
//! radii are kept at [`RAD_PREC`] bits and always rounded upward, with the
//! rounding error of every midpoint operation folded back into the radius.
//! Every operation therefore returns a ball containing the exact image of
//! its input sets.

use std::cmp::Ordering;
use std::fmt;

use rug::float::{Constant, Round, Special};
use rug::ops::{AddAssignRound, AssignRound};
use rug::{Float, Rational};
use thiserror::Error;

/// Precision of radii, in bits.
pub const RAD_PREC: u32 = 64;
/// Default working precision of midpoints, in bits.
pub const DEFAULT_PREC: u32 = 384;
/// Last rung of the precision ladder.
pub const MAX_PREC: u32 = 8192;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum NumError {
    #[error("inconclusive enclosure: {0}")]
    Inconclusive(&'static str),
    #[error("precision exhausted at {0} bits")]
    PrecisionExhausted(u32),
    #[error("cannot parse {0:?} as a real number")]
    Parse(String),
}

/// Result of comparing two balls.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum BallOrdering {
    Less,
    Greater,
    Inconclusive,
}

fn round_to<T>(prec: u32, val: T, round: Round) -> (Float, Ordering)
where
    Float: AssignRound<T, Round = Round, Ordering = Ordering>,
{
    Float::with_val_round(prec, val, round)
}

fn up<T>(val: T) -> Float
where
    Float: AssignRound<T, Round = Round, Ordering = Ordering>,
{
    round_to(RAD_PREC, val, Round::Up).0
}

fn down<T>(val: T) -> Float
where
    Float: AssignRound<T, Round = Round, Ordering = Ordering>,
{
    round_to(RAD_PREC, val, Round::Down).0
}

fn rad_zero() -> Float {
    Float::new(RAD_PREC)
}

fn rad_inf() -> Float {
    Float::with_val(RAD_PREC, Special::Infinity)
}

/// One unit in the last place of `x` at its own precision; bounds the error
/// of any correctly rounded operation that produced `x`.
fn ulp(x: &Float) -> Float {
    let mut tiny = Float::new(RAD_PREC);
    tiny.next_up();
    match x.get_exp() {
        Some(e) if x.is_finite() => {
            let mut u = Float::with_val(RAD_PREC, 1);
            u <<= e - x.prec() as i32;
            if u.is_zero() {
                tiny
            } else {
                u
            }
        }
        // An inexact zero is an underflow: the exact value is below the
        // smallest positive float.
        _ if x.is_zero() => tiny,
        _ => rad_inf(),
    }
}

fn rounding_error(x: &Float, ord: Ordering) -> Float {
    if ord == Ordering::Equal {
        rad_zero()
    } else {
        ulp(x)
    }
}

/// Sum of non-negative radius terms, rounded up.
fn rad_sum(terms: &[&Float]) -> Float {
    let mut acc = rad_zero();
    for t in terms {
        acc.add_assign_round(*t, Round::Up);
    }
    acc
}

fn sanitize(mut mid: Float, rad: Float) -> RealBall {
    if !mid.is_finite() || rad.is_nan() {
        mid = Float::new(mid.prec());
        return RealBall { mid, rad: rad_inf() };
    }
    RealBall { mid, rad }
}

/// A closed real interval `[mid - rad, mid + rad]`.
#[derive(Clone, PartialEq)]
pub struct RealBall {
    mid: Float,
    rad: Float,
}

impl fmt::Debug for RealBall {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(
            f,
            "[{} +/- {}]",
            self.mid.to_string_radix(10, Some(20)),
            self.rad.to_string_radix(10, Some(6))
        )
    }
}

impl fmt::Display for RealBall {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        fmt::Debug::fmt(self, f)
    }
}

impl RealBall {
    pub fn zero(prec: u32) -> Self {
        RealBall { mid: Float::new(prec), rad: rad_zero() }
    }

    pub fn from_int(prec: u32, v: i64) -> Self {
        let (mid, ord) = round_to(prec, v, Round::Nearest);
        let rad = rounding_error(&mid, ord);
        RealBall { mid, rad }
    }

    pub fn from_f64(prec: u32, v: f64) -> Self {
        assert!(v.is_finite(), "ball from non-finite f64");
        let (mid, ord) = round_to(prec, v, Round::Nearest);
        let rad = rounding_error(&mid, ord);
        RealBall { mid, rad }
    }

    /// Ball enclosing the exact rational `num / den`.
    pub fn from_ratio(prec: u32, num: i64, den: i64) -> Self {
        assert!(den != 0, "zero denominator");
        let q = Rational::from((num, den));
        let (mid, ord) = round_to(prec, &q, Round::Nearest);
        let rad = rounding_error(&mid, ord);
        RealBall { mid, rad }
    }

    /// Point ball at an exactly representable value; the midpoint keeps the
    /// precision of `x` unless `prec` is larger.
    pub fn exact(prec: u32, x: &Float) -> Self {
        let p = prec.max(x.prec());
        RealBall { mid: Float::with_val(p, x), rad: rad_zero() }
    }

    /// Ball with the given midpoint and (upward-rounded) radius.
    pub fn with_radius(mid: Float, rad: &Float) -> Self {
        assert!(!rad.is_sign_negative() || rad.is_zero(), "negative radius");
        RealBall { mid, rad: up(rad) }
    }

    /// Parses a decimal literal such as `14.134725141734693790` or `3e10`
    /// into a ball that contains the exact decimal value.
    pub fn from_decimal(prec: u32, s: &str) -> Result<Self, NumError> {
        let parsed = Float::parse(s.trim()).map_err(|_| NumError::Parse(s.to_string()))?;
        let (mid, ord) = round_to(prec, parsed, Round::Nearest);
        if !mid.is_finite() {
            return Err(NumError::Parse(s.to_string()));
        }
        let rad = rounding_error(&mid, ord);
        Ok(RealBall { mid, rad })
    }

    /// Smallest ball (at `prec`) containing `[lo, hi]`.
    pub fn from_interval(prec: u32, lo: &Float, hi: &Float) -> Self {
        assert!(lo <= hi, "inverted interval");
        let (mut mid, _) = round_to(prec, lo + hi, Round::Nearest);
        mid >>= 1;
        let r_hi = up(&hi.clone() - &mid);
        let r_lo = up(&mid - lo);
        let rad = if r_hi > r_lo { r_hi } else { r_lo };
        RealBall { mid, rad }
    }

    pub fn pi(prec: u32) -> Self {
        let (mid, ord) = round_to(prec, Constant::Pi, Round::Nearest);
        let rad = rounding_error(&mid, ord);
        RealBall { mid, rad }
    }

    pub fn mid(&self) -> &Float {
        &self.mid
    }

    pub fn rad(&self) -> &Float {
        &self.rad
    }

    pub fn prec(&self) -> u32 {
        self.mid.prec()
    }

    pub fn is_finite(&self) -> bool {
        self.mid.is_finite() && self.rad.is_finite()
    }

    pub fn is_exact(&self) -> bool {
        self.rad.is_zero()
    }

    /// Lower endpoint, rounded down.
    pub fn lower(&self) -> Float {
        round_to(self.prec().max(RAD_PREC), &self.mid - &self.rad, Round::Down).0
    }

    /// Upper endpoint, rounded up.
    pub fn upper(&self) -> Float {
        round_to(self.prec().max(RAD_PREC), &self.mid + &self.rad, Round::Up).0
    }

    /// Upper bound on `|x|` over the ball.
    pub fn mag(&self) -> Float {
        up(&*self.mid.as_abs() + &self.rad)
    }

    /// Lower bound on `|x|` over the ball (0 when the ball touches 0).
    pub fn mig(&self) -> Float {
        let v = down(&*self.mid.as_abs() - &self.rad);
        if v.is_sign_negative() {
            rad_zero()
        } else {
            v
        }
    }

    pub fn contains_zero(&self) -> bool {
        *self.mid.as_abs() <= self.rad
    }

    /// Strictly positive on the whole ball.
    pub fn is_positive(&self) -> bool {
        self.lower() > 0
    }

    pub fn is_negative(&self) -> bool {
        self.upper() < 0
    }

    /// Exact membership test for a rational point.
    pub fn contains_rational(&self, q: &Rational) -> bool {
        if !self.is_finite() {
            return self.rad.is_infinite();
        }
        let mid = self.mid.to_rational().expect("finite");
        let rad = self.rad.to_rational().expect("finite");
        let d = Rational::from(q - &mid).abs();
        d <= rad
    }

    /// Exact test that every point of `other` lies in `self`.
    pub fn contains(&self, other: &RealBall) -> bool {
        if !self.is_finite() {
            return self.rad.is_infinite();
        }
        if !other.is_finite() {
            return false;
        }
        let m1 = self.mid.to_rational().expect("finite");
        let r1 = self.rad.to_rational().expect("finite");
        let m2 = other.mid.to_rational().expect("finite");
        let r2 = other.rad.to_rational().expect("finite");
        let d = Rational::from(&m2 - &m1).abs();
        d + &r2 <= r1
    }

    pub fn overlaps(&self, other: &RealBall) -> bool {
        self.compare(other) == BallOrdering::Inconclusive
    }

    /// Order verdict that is only given when the balls are disjoint.
    pub fn compare(&self, other: &RealBall) -> BallOrdering {
        if !self.is_finite() || !other.is_finite() {
            return BallOrdering::Inconclusive;
        }
        if self.upper() < other.lower() {
            BallOrdering::Less
        } else if self.lower() > other.upper() {
            BallOrdering::Greater
        } else {
            BallOrdering::Inconclusive
        }
    }

    /// Certified `self > other` on every pair of points.
    pub fn gt(&self, other: &RealBall) -> bool {
        self.compare(other) == BallOrdering::Greater
    }

    /// Certified `self < other` on every pair of points.
    pub fn lt(&self, other: &RealBall) -> bool {
        self.compare(other) == BallOrdering::Less
    }

    /// Same value set re-rounded to `prec` bits.
    pub fn set_prec(&self, prec: u32) -> Self {
        let (mid, ord) = round_to(prec, &self.mid, Round::Nearest);
        let err = rounding_error(&mid, ord);
        let rad = rad_sum(&[&self.rad, &err]);
        sanitize(mid, rad)
    }

    /// The same ball widened by `extra`.
    pub fn widen(&self, extra: &Float) -> Self {
        RealBall { mid: self.mid.clone(), rad: rad_sum(&[&self.rad, &up(&*extra.as_abs())]) }
    }

    fn binary_prec(&self, other: &RealBall) -> u32 {
        self.prec().max(other.prec())
    }

    pub fn add(&self, other: &RealBall) -> Self {
        let (mid, ord) = round_to(self.binary_prec(other), &self.mid + &other.mid, Round::Nearest);
        let err = rounding_error(&mid, ord);
        let rad = rad_sum(&[&self.rad, &other.rad, &err]);
        sanitize(mid, rad)
    }

    pub fn sub(&self, other: &RealBall) -> Self {
        let (mid, ord) = round_to(self.binary_prec(other), &self.mid - &other.mid, Round::Nearest);
        let err = rounding_error(&mid, ord);
        let rad = rad_sum(&[&self.rad, &other.rad, &err]);
        sanitize(mid, rad)
    }

    pub fn neg(&self) -> Self {
        RealBall { mid: Float::with_val(self.prec(), -&self.mid), rad: self.rad.clone() }
    }

    pub fn mul(&self, other: &RealBall) -> Self {
        let (mid, ord) = round_to(self.binary_prec(other), &self.mid * &other.mid, Round::Nearest);
        let err = rounding_error(&mid, ord);
        let t1 = up(&*self.mid.as_abs() * &other.rad);
        let t2 = up(&*other.mid.as_abs() * &self.rad);
        let t3 = up(&self.rad * &other.rad);
        let rad = rad_sum(&[&t1, &t2, &t3, &err]);
        sanitize(mid, rad)
    }

    /// `self * 2^k`, exact on the midpoint.
    pub fn mul_2si(&self, k: i32) -> Self {
        let mut mid = self.mid.clone();
        let mut rad = self.rad.clone();
        mid <<= k;
        rad <<= k;
        sanitize(mid, rad)
    }

    pub fn sqr(&self) -> Self {
        let (mid, ord) = round_to(self.prec(), self.mid.square_ref(), Round::Nearest);
        let err = rounding_error(&mid, ord);
        let t1 = up(&*self.mid.as_abs() * &self.rad);
        let t1 = up(t1 << 1u32);
        let t2 = up(self.rad.square_ref());
        let rad = rad_sum(&[&t1, &t2, &err]);
        // The exact image is non-negative; recenter if the ball dips below 0.
        let ball = sanitize(mid, rad);
        if ball.lower() < 0 {
            let hi = ball.upper();
            return RealBall::from_interval(ball.prec(), &Float::new(ball.prec()), &hi);
        }
        ball
    }

    pub fn recip(&self) -> Result<Self, NumError> {
        let one = RealBall::from_int(self.prec(), 1);
        one.div(self)
    }

    /// Division; fails when the divisor ball contains zero.
    pub fn div(&self, other: &RealBall) -> Result<Self, NumError> {
        if !other.is_finite() || !self.is_finite() {
            return Err(NumError::Inconclusive("division of an unbounded ball"));
        }
        let den_low = down(&*other.mid.as_abs() - &other.rad);
        if den_low <= 0 {
            return Err(NumError::Inconclusive("divisor ball contains zero"));
        }
        let (mid, ord) = round_to(self.binary_prec(other), &self.mid / &other.mid, Round::Nearest);
        let err = rounding_error(&mid, ord);
        // |x/y - mx/my| <= (|mx| ry + |my| rx) / (|my| (|my| - ry))
        let n1 = up(&*self.mid.as_abs() * &other.rad);
        let n2 = up(&*other.mid.as_abs() * &self.rad);
        let num = rad_sum(&[&n1, &n2]);
        let den = down(&*other.mid.as_abs() * &den_low);
        let prop = up(&num / &den);
        let rad = rad_sum(&[&prop, &err]);
        Ok(sanitize(mid, rad))
    }

    pub fn abs(&self) -> Self {
        if self.contains_zero() {
            let hi = self.mag();
            RealBall::from_interval(self.prec(), &Float::new(self.prec()), &hi)
        } else {
            RealBall { mid: Float::with_val(self.prec(), &*self.mid.as_abs()), rad: self.rad.clone() }
        }
    }

    pub fn exp(&self) -> Self {
        let (mid, ord) = round_to(self.prec(), self.mid.exp_ref(), Round::Nearest);
        let err = rounding_error(&mid, ord);
        if self.rad.is_zero() {
            return sanitize(mid, err);
        }
        // |e^(m+t) - e^m| <= e^m (e^r - 1)
        let em = up(self.mid.exp_ref());
        let er = up(self.rad.exp_m1_ref());
        let prop = up(&em * &er);
        let rad = rad_sum(&[&prop, &err]);
        sanitize(mid, rad)
    }

    pub fn sin_cos(&self) -> (Self, Self) {
        let prec = self.prec();
        let mut s = self.mid.clone();
        let mut c = Float::new(prec);
        let (os, oc) = s.sin_cos_round(&mut c, Round::Nearest);
        // sin and cos are 1-Lipschitz and bounded by 1 in magnitude.
        let two = Float::with_val(RAD_PREC, 2);
        let lip = if self.rad > two { two } else { self.rad.clone() };
        let rs = rad_sum(&[&lip, &rounding_error(&s, os)]);
        let rc = rad_sum(&[&lip, &rounding_error(&c, oc)]);
        (sanitize(s, rs), sanitize(c, rc))
    }

    pub fn sin(&self) -> Self {
        self.sin_cos().0
    }

    pub fn cos(&self) -> Self {
        self.sin_cos().1
    }

    /// Natural logarithm; the ball must be strictly positive.
    pub fn log(&self) -> Result<Self, NumError> {
        let low = down(&self.mid - &self.rad);
        if !(low > 0) || !self.is_finite() {
            return Err(NumError::Inconclusive("logarithm of a ball touching zero"));
        }
        let (mid, ord) = round_to(self.prec(), self.mid.ln_ref(), Round::Nearest);
        let err = rounding_error(&mid, ord);
        // |log(m+t) - log m| <= r / (m - r)
        let prop = up(&self.rad / &low);
        let rad = rad_sum(&[&prop, &err]);
        Ok(sanitize(mid, rad))
    }

    /// Square root; the ball must not extend below zero.
    pub fn sqrt(&self) -> Result<Self, NumError> {
        let low = down(&self.mid - &self.rad);
        if low.is_sign_negative() && !low.is_zero() {
            return Err(NumError::Inconclusive("square root of a ball extending below zero"));
        }
        let prec = self.prec();
        if !(low > 0) {
            let hi = round_to(prec, self.upper().sqrt_ref(), Round::Up).0;
            return Ok(RealBall::from_interval(prec, &Float::new(prec), &hi));
        }
        let (mid, ord) = round_to(prec, self.mid.sqrt_ref(), Round::Nearest);
        let err = rounding_error(&mid, ord);
        // |sqrt(m+t) - sqrt(m)| <= r / (sqrt(m - r) + sqrt(m)) <= r / sqrt(m - r)
        let sl = down(low.sqrt_ref());
        let prop = up(&self.rad / &sl);
        let rad = rad_sum(&[&prop, &err]);
        Ok(sanitize(mid, rad))
    }

    /// `self^k` by repeated squaring.
    pub fn powi(&self, mut k: u32) -> Self {
        let mut result = RealBall::from_int(self.prec(), 1);
        let mut base = self.clone();
        while k > 0 {
            if k & 1 == 1 {
                result = result.mul(&base);
            }
            k >>= 1;
            if k > 0 {
                base = base.sqr();
            }
        }
        result
    }

    /// Ball containing `max(x, y)` over the two sets.
    pub fn max(&self, other: &RealBall) -> Self {
        let lo = std::cmp::max_by(self.lower(), other.lower(), |a, b| a.partial_cmp(b).unwrap());
        let hi = std::cmp::max_by(self.upper(), other.upper(), |a, b| a.partial_cmp(b).unwrap());
        RealBall::from_interval(self.binary_prec(other), &lo, &hi)
    }

    /// Ball containing `min(x, y)` over the two sets.
    pub fn min(&self, other: &RealBall) -> Self {
        let lo = std::cmp::min_by(self.lower(), other.lower(), |a, b| a.partial_cmp(b).unwrap());
        let hi = std::cmp::min_by(self.upper(), other.upper(), |a, b| a.partial_cmp(b).unwrap());
        RealBall::from_interval(self.binary_prec(other), &lo, &hi)
    }

    /// Nearest f64 to the midpoint; diagnostics only.
    pub fn to_f64(&self) -> f64 {
        self.mid.to_f64()
    }

    /// Lower endpoint rounded down to `f64`.
    pub fn lower_f64(&self) -> f64 {
        self.lower().to_f64_round(Round::Down)
    }

    /// Upper endpoint rounded up to `f64`.
    pub fn upper_f64(&self) -> f64 {
        self.upper().to_f64_round(Round::Up)
    }
}

macro_rules! forward_binop {
    ($tr:ident, $method:ident) => {
        impl std::ops::$tr<&RealBall> for &RealBall {
            type Output = RealBall;
            fn $method(self, rhs: &RealBall) -> RealBall {
                RealBall::$method(self, rhs)
            }
        }
        impl std::ops::$tr<RealBall> for RealBall {
            type Output = RealBall;
            fn $method(self, rhs: RealBall) -> RealBall {
                RealBall::$method(&self, &rhs)
            }
        }
        impl std::ops::$tr<&ComplexBall> for &ComplexBall {
            type Output = ComplexBall;
            fn $method(self, rhs: &ComplexBall) -> ComplexBall {
                ComplexBall::$method(self, rhs)
            }
        }
        impl std::ops::$tr<ComplexBall> for ComplexBall {
            type Output = ComplexBall;
            fn $method(self, rhs: ComplexBall) -> ComplexBall {
                ComplexBall::$method(&self, &rhs)
            }
        }
    };
}

forward_binop!(Add, add);
forward_binop!(Sub, sub);
forward_binop!(Mul, mul);

impl std::ops::Neg for &RealBall {
    type Output = RealBall;
    fn neg(self) -> RealBall {
        RealBall::neg(self)
    }
}

/// Componentwise complex ball: a rectangle `re x im`.
#[derive(Clone, PartialEq)]
pub struct ComplexBall {
    pub re: RealBall,
    pub im: RealBall,
}

impl fmt::Debug for ComplexBall {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{:?} + {:?}i", self.re, self.im)
    }
}

impl ComplexBall {
    pub fn new(re: RealBall, im: RealBall) -> Self {
        ComplexBall { re, im }
    }

    pub fn zero(prec: u32) -> Self {
        ComplexBall { re: RealBall::zero(prec), im: RealBall::zero(prec) }
    }

    pub fn from_f64(prec: u32, re: f64, im: f64) -> Self {
        ComplexBall { re: RealBall::from_f64(prec, re), im: RealBall::from_f64(prec, im) }
    }

    pub fn from_real(re: RealBall) -> Self {
        let prec = re.prec();
        ComplexBall { re, im: RealBall::zero(prec) }
    }

    pub fn prec(&self) -> u32 {
        self.re.prec().max(self.im.prec())
    }

    pub fn is_finite(&self) -> bool {
        self.re.is_finite() && self.im.is_finite()
    }

    /// Point ball at the midpoints.
    pub fn midpoint(&self) -> Self {
        ComplexBall {
            re: RealBall::exact(self.re.prec(), self.re.mid()),
            im: RealBall::exact(self.im.prec(), self.im.mid()),
        }
    }

    pub fn set_prec(&self, prec: u32) -> Self {
        ComplexBall { re: self.re.set_prec(prec), im: self.im.set_prec(prec) }
    }

    /// Adds `extra` to both radii.
    pub fn widen(&self, extra: &Float) -> Self {
        ComplexBall { re: self.re.widen(extra), im: self.im.widen(extra) }
    }

    pub fn contains(&self, other: &ComplexBall) -> bool {
        self.re.contains(&other.re) && self.im.contains(&other.im)
    }

    pub fn contains_zero(&self) -> bool {
        self.re.contains_zero() && self.im.contains_zero()
    }

    pub fn add(&self, other: &ComplexBall) -> Self {
        ComplexBall { re: self.re.add(&other.re), im: self.im.add(&other.im) }
    }

    pub fn sub(&self, other: &ComplexBall) -> Self {
        ComplexBall { re: self.re.sub(&other.re), im: self.im.sub(&other.im) }
    }

    pub fn neg(&self) -> Self {
        ComplexBall { re: self.re.neg(), im: self.im.neg() }
    }

    pub fn conj(&self) -> Self {
        ComplexBall { re: self.re.clone(), im: self.im.neg() }
    }

    /// Multiplication by `i`.
    pub fn mul_i(&self) -> Self {
        ComplexBall { re: self.im.neg(), im: self.re.clone() }
    }

    pub fn mul_real(&self, r: &RealBall) -> Self {
        ComplexBall { re: self.re.mul(r), im: self.im.mul(r) }
    }

    pub fn mul(&self, other: &ComplexBall) -> Self {
        let re = self.re.mul(&other.re).sub(&self.im.mul(&other.im));
        let im = self.re.mul(&other.im).add(&self.im.mul(&other.re));
        ComplexBall { re, im }
    }

    /// Squared modulus as a real ball.
    pub fn norm_sqr(&self) -> RealBall {
        self.re.sqr().add(&self.im.sqr())
    }

    pub fn div(&self, other: &ComplexBall) -> Result<Self, NumError> {
        let den = other.norm_sqr();
        let num = self.mul(&other.conj());
        Ok(ComplexBall { re: num.re.div(&den)?, im: num.im.div(&den)? })
    }

    pub fn recip(&self) -> Result<Self, NumError> {
        let den = self.norm_sqr();
        let c = self.conj();
        Ok(ComplexBall { re: c.re.div(&den)?, im: c.im.div(&den)? })
    }

    /// Complex exponential `e^re (cos im + i sin im)`.
    pub fn exp(&self) -> Self {
        let e = self.re.exp();
        let (s, c) = self.im.sin_cos();
        ComplexBall { re: e.mul(&c), im: e.mul(&s) }
    }

    /// Modulus: `hypot(mid) +/- hypot(rad)` plus rounding.
    pub fn abs(&self) -> RealBall {
        let prec = self.prec();
        let mut mid = Float::with_val(prec, self.re.mid());
        let ord = mid.hypot_round(self.im.mid(), Round::Nearest);
        let err = rounding_error(&mid, ord);
        let mut spread = self.re.rad().clone();
        spread.hypot_round(self.im.rad(), Round::Up);
        let rad = rad_sum(&[&spread, &err]);
        let ball = sanitize(mid, rad);
        if ball.lower() < 0 {
            let hi = ball.upper();
            return RealBall::from_interval(prec, &Float::new(prec), &hi);
        }
        ball
    }

    /// Lower bound on `|z|` over the ball, `max(0, |mid| - rad)`.
    pub fn abs_lower(&self) -> Float {
        self.abs().mig()
    }

    /// Upper bound on `|z|` over the ball.
    pub fn abs_upper(&self) -> Float {
        self.abs().mag()
    }

    /// Principal argument, as long as the ball stays clear of zero and of
    /// the branch cut along the negative real axis.
    pub fn arg(&self) -> Result<RealBall, NumError> {
        let prec = self.prec();
        let mut modulus = Float::with_val(prec, self.re.mid());
        modulus.hypot_round(self.im.mid(), Round::Down);
        let mut spread = self.re.rad().clone();
        spread.hypot_round(self.im.rad(), Round::Up);
        if !(modulus > spread) || !self.is_finite() {
            return Err(NumError::Inconclusive("argument of a ball containing zero"));
        }
        // Every point lies within asin(spread/|mid|) <= (pi/2) spread/|mid|
        // of the direction of the midpoint.
        let ratio = up(&spread / &modulus);
        let half_pi = up(Constant::Pi) >> 1u32;
        let delta = up(&ratio * &half_pi);
        let mut mid = Float::with_val(prec, self.im.mid());
        let ord = mid.atan2_round(self.re.mid(), Round::Nearest);
        let err = rounding_error(&mid, ord);
        let rad = rad_sum(&[&delta, &err]);
        let reach = up(&*mid.as_abs() + &rad);
        let pi_low = down(Constant::Pi);
        if !(reach < pi_low) {
            return Err(NumError::Inconclusive("argument ball straddles the branch cut"));
        }
        Ok(sanitize(mid, rad))
    }
}

impl std::ops::Neg for &ComplexBall {
    type Output = ComplexBall;
    fn neg(self) -> ComplexBall {
        ComplexBall::neg(self)
    }
}

/// Runs `f` at `start` bits, doubling the precision on
/// [`NumError::Inconclusive`] until `max` bits, then gives up.
pub fn with_precision_ladder<T, E, F>(start: u32, max: u32, mut f: F) -> Result<(T, u32), E>
where
    F: FnMut(u32) -> Result<T, E>,
    E: From<NumError> + IsInconclusive,
{
    let mut prec = start;
    loop {
        match f(prec) {
            Ok(v) => return Ok((v, prec)),
            Err(e) if e.is_inconclusive() && prec < max => {
                prec = (prec * 2).min(max);
            }
            Err(e) if e.is_inconclusive() => return Err(NumError::PrecisionExhausted(prec).into()),
            Err(e) => return Err(e),
        }
    }
}

/// Errors that may go away at higher working precision.
pub trait IsInconclusive {
    fn is_inconclusive(&self) -> bool;
}

impl IsInconclusive for NumError {
    fn is_inconclusive(&self) -> bool {
        matches!(self, NumError::Inconclusive(_))
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn ball(m: f64, r: f64) -> RealBall {
        RealBall::with_radius(Float::with_val(DEFAULT_PREC, m), &Float::with_val(RAD_PREC, r))
    }

    #[test]
    fn integer_sum_is_exact() {
        let s = RealBall::from_int(64, 1).add(&RealBall::from_int(64, 2));
        assert_eq!(s.mid().to_f64(), 3.0);
        assert!(s.rad().is_zero());
    }

    #[test]
    fn product_covers_interval_endpoints() {
        let x = ball(1.0, 0.1);
        let p = x.mul(&x);
        assert!(p.contains_rational(&Rational::from((81, 100))));
        assert!(p.contains_rational(&Rational::from((121, 100))));
    }

    #[test]
    fn one_third_at_64_bits() {
        let q = RealBall::from_int(64, 1).div(&RealBall::from_int(64, 3)).unwrap();
        assert!(q.contains_rational(&Rational::from((1, 3))));
        assert!(*q.rad() <= Float::with_val(RAD_PREC, 1) >> 60u32);
        // a 1024-bit evaluation sits inside the 64-bit ball
        let hi = RealBall::from_int(1024, 1).div(&RealBall::from_int(1024, 3)).unwrap();
        assert!(q.contains(&hi));
    }

    #[test]
    fn division_by_ball_containing_zero_fails() {
        let err = RealBall::from_int(64, 1).div(&ball(0.0, 0.5)).unwrap_err();
        assert!(matches!(err, NumError::Inconclusive(_)));
    }

    #[test]
    fn exp_of_zero_is_one() {
        let z = ComplexBall::zero(128).exp();
        assert_eq!(z.re.mid().to_f64(), 1.0);
        assert!(z.re.rad().is_zero());
        assert!(z.im.mid().is_zero() && z.im.rad().is_zero());
    }

    #[test]
    fn euler_identity_tightens_with_precision() {
        let mut last = Float::with_val(RAD_PREC, 1);
        for prec in [64u32, 256, 1024] {
            let z = ComplexBall::new(RealBall::zero(prec), RealBall::pi(prec)).exp();
            assert!(z.re.contains_rational(&Rational::from(-1)));
            assert!(z.im.contains_rational(&Rational::from(0)));
            assert!(*z.re.rad() < last);
            last = z.re.rad().clone();
        }
    }

    #[test]
    fn exp_of_zero_free_exponent() {
        // e^{-0.0841 * gamma_1}; oracle from a 40-digit mpmath evaluation
        let prec = 256;
        let g1 = RealBall::from_decimal(prec, "14.134725141734693790457251983562470270784").unwrap();
        let y = RealBall::from_decimal(prec, "0.0841").unwrap();
        let e = g1.mul(&y).neg().exp();
        let oracle = Rational::from_str_radix(&format!("3046077534178995478811148940808936509138/1{}", "0".repeat(40)), 10).unwrap();
        let tol = RealBall::from_decimal(prec, "1e-39").unwrap();
        let window = RealBall::from_interval(prec, &Float::with_val(prec, &oracle), &Float::with_val(prec, &oracle)).widen(tol.mid());
        assert!(window.contains(&e), "{e:?}");
        assert!(*e.rad() < Float::with_val(RAD_PREC, 1e-70));
    }

    #[test]
    fn elementary_identities() {
        assert!(RealBall::zero(64).sin().mid().is_zero());
        let l = RealBall::from_int(64, 1).log().unwrap();
        assert!(l.mid().is_zero() && l.rad().is_zero());
        let m = ComplexBall::new(RealBall::from_int(64, 3), RealBall::from_int(64, 4)).abs();
        assert_eq!(m.mid().to_f64(), 5.0);
        assert!(m.rad().is_zero());
        assert!(ball(0.0, 0.1).log().is_err());
        assert!(ball(-1.0, 0.1).sqrt().is_err());
    }

    #[test]
    fn compare_verdicts() {
        assert_eq!(ball(1.0, 0.1).compare(&ball(2.0, 0.1)), BallOrdering::Less);
        assert_eq!(ball(1.0, 0.5).compare(&ball(1.2, 0.5)), BallOrdering::Inconclusive);
        assert_eq!(ball(0.00517911, 1e-9).compare(&ball(0.00391804, 1e-9)), BallOrdering::Greater);
    }

    #[test]
    fn argument_of_unit_points() {
        let prec = 128;
        let a = ComplexBall::from_f64(prec, 0.0, 1.0).arg().unwrap();
        assert!(a.contains(&RealBall::pi(prec).mul_2si(-1)) || a.overlaps(&RealBall::pi(prec).mul_2si(-1)));
        assert!(ComplexBall::from_f64(prec, -1.0, 0.0).arg().is_err());
        assert!(ComplexBall::new(ball(0.0, 0.1), ball(0.0, 0.1)).arg().is_err());
    }

    #[test]
    fn ladder_doubles_then_stops() {
        let mut seen = vec![];
        let r: Result<((), u32), NumError> = with_precision_ladder(384, 8192, |p| {
            seen.push(p);
            Err(NumError::Inconclusive("never"))
        });
        assert_eq!(seen, vec![384, 768, 1536, 3072, 6144, 8192]);
        assert_eq!(r.unwrap_err(), NumError::PrecisionExhausted(8192));
    }
}
