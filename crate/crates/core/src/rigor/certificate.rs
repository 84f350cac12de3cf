use rug::float::Round;
use rug::Float;
use serde::{Deserialize, Serialize};

use super::q0::{q0_condition, q0_fails, solve_q0_legacy};
use super::{Contour, ContourBounds, RigorError, VerifiedZero};
use crate::ball::{ComplexBall, NumError, RealBall, RAD_PREC};
use crate::zeros::{hex_digest, ZeroTable};

pub const CERTIFICATE_FORMAT: &str = "zerodensity-certificate/1";

/// A ball as two decimal strings that read back to the same binary values.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct BallJson {
    pub mid: String,
    pub rad: String,
}

impl BallJson {
    pub fn from_ball(b: &RealBall) -> Self {
        BallJson { mid: b.mid().to_string_radix(10, None), rad: b.rad().to_string_radix(10, None) }
    }

    /// Reads the ball back. Strings written by [`from_ball`](Self::from_ball)
    /// convert exactly; anything else is widened by its conversion error.
    pub fn to_ball(&self, prec: u32) -> Result<RealBall, NumError> {
        let bad = |s: &str| NumError::Parse(format!("bad ball component {s:?}"));
        let mid = Float::parse(&self.mid).map_err(|_| bad(&self.mid))?;
        let rad = Float::parse(&self.rad).map_err(|_| bad(&self.rad))?;
        let (mid, ord) = Float::with_val_round(prec, mid, Round::Nearest);
        let (rad, _) = Float::with_val_round(RAD_PREC, rad, Round::Up);
        if rad < 0 || !mid.is_finite() || !rad.is_finite() {
            return Err(NumError::Parse("malformed ball".into()));
        }
        // Canonical strings name their binary value exactly.
        let canonical = ord == std::cmp::Ordering::Equal || mid.to_string_radix(10, None) == self.mid;
        let ball = RealBall::with_radius(mid, &rad);
        if canonical {
            return Ok(ball);
        }
        let mut slack = Float::with_val(RAD_PREC, 1);
        slack <<= ball.mid().get_exp().unwrap_or(0) - prec as i32;
        Ok(ball.widen(&slack))
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct ZeroRecord {
    pub xi_re: BallJson,
    pub xi_im: BallJson,
    /// Decimal endpoints of the enclosure, rounded outward.
    pub xi_re_interval: [String; 2],
    pub xi_im_interval: [String; 2],
    pub center_re: String,
    pub center_im: String,
    pub radius_used: String,
    pub min_on_circle: BallJson,
    pub tail_at_circle: BallJson,
    pub m: usize,
    pub winding: i64,
    pub segments: usize,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct BoundsRecord {
    pub contour: Contour,
    pub n: usize,
    pub seg_len: String,
    pub alpha: BallJson,
    pub a: BallJson,
    pub b: BallJson,
    pub a_w: BallJson,
    pub b_w: BallJson,
    pub w_lower: BallJson,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct Certificate {
    pub format: String,
    pub precision_bits: u32,
    pub table_digest: String,
    pub table_declared_error: String,
    pub table_size: usize,
    pub rh_verified_height: BallJson,
    pub gamma1: BallJson,
    pub zero: ZeroRecord,
    pub bounds: BoundsRecord,
    pub q0: u64,
    /// Where the criterion's two sides meet for real `q`; diagnostics only.
    pub q0_crossing: String,
    pub kappa_lower: BallJson,
    pub two_kappa_lower: BallJson,
    pub final_constant: BallJson,
    pub legacy_q0: Option<u64>,
    pub legacy_note: Option<String>,
    /// sha256 of the certificate serialized with this field empty.
    pub digest: String,
}

fn interval(b: &RealBall, digits: usize) -> [String; 2] {
    [
        b.lower().to_string_radix_round(10, Some(digits), Round::Down),
        b.upper().to_string_radix_round(10, Some(digits), Round::Up),
    ]
}

fn crossing(bounds: &ContourBounds) -> f64 {
    let (a, aw, alpha) = (bounds.a.upper().to_f64(), bounds.a_w.upper().to_f64(), bounds.alpha.lower().to_f64());
    let (b, bw) = (bounds.b.upper().to_f64(), bounds.b_w.upper().to_f64());
    let gap = |q: f64| 2.0 * aw * (std::f64::consts::PI / q).sin() + 2.0 * std::f64::consts::PI * a / q - (alpha - b - 2.0 * bw);
    let (mut lo, mut hi) = (1.0, 1e12);
    if gap(hi) > 0.0 {
        return f64::INFINITY;
    }
    for _ in 0..200 {
        let mid = 0.5 * (lo + hi);
        if gap(mid) > 0.0 {
            lo = mid;
        } else {
            hi = mid;
        }
    }
    hi
}

/// `q0^-N` rounded down, as an exact ball.
fn kappa_for(q0: u64, n: usize, prec: u32) -> RealBall {
    let q = RealBall::from_int(prec, q0 as i64);
    let k = q.powi(n as u32).recip().expect("q0 >= 2");
    RealBall::exact(prec, &k.lower())
}

pub fn assemble_certificate(
    zero: &VerifiedZero,
    bounds: &ContourBounds,
    q0: u64,
    seg_len: &str,
    table: &ZeroTable,
    prec: u32,
) -> Result<Certificate, RigorError> {
    let kappa = kappa_for(q0, bounds.n, prec);
    let two_kappa = kappa.mul_2si(1);
    let gamma1 = table.ordinate(1, prec)?;
    let final_constant = gamma1.div(&RealBall::pi(prec))?.add(&two_kappa);
    let (legacy_q0, legacy_note) = match solve_q0_legacy(bounds, prec) {
        Ok(q) => (Some(q), None),
        Err(e) => (None, Some(e.to_string())),
    };
    let mut cert = Certificate {
        format: CERTIFICATE_FORMAT.into(),
        precision_bits: prec,
        table_digest: table.source_digest().into(),
        table_declared_error: table.declared_abs_error_text().into(),
        table_size: table.len(),
        rh_verified_height: BallJson::from_ball(table.rh_verified_height()),
        gamma1: BallJson::from_ball(&gamma1),
        zero: ZeroRecord {
            xi_re: BallJson::from_ball(&zero.xi.re),
            xi_im: BallJson::from_ball(&zero.xi.im),
            xi_re_interval: interval(&zero.xi.re, 15),
            xi_im_interval: interval(&zero.xi.im, 15),
            center_re: zero.center.re.mid().to_string_radix(10, None),
            center_im: zero.center.im.mid().to_string_radix(10, None),
            radius_used: zero.radius.to_string_radix(10, None),
            min_on_circle: BallJson::from_ball(&zero.min_on_circle),
            tail_at_circle: BallJson::from_ball(&zero.tail_at_circle),
            m: zero.m,
            winding: zero.winding,
            segments: zero.segments,
        },
        bounds: BoundsRecord {
            contour: bounds.contour.clone(),
            n: bounds.n,
            seg_len: seg_len.into(),
            alpha: BallJson::from_ball(&bounds.alpha),
            a: BallJson::from_ball(&bounds.a),
            b: BallJson::from_ball(&bounds.b),
            a_w: BallJson::from_ball(&bounds.a_w),
            b_w: BallJson::from_ball(&bounds.b_w),
            w_lower: BallJson::from_ball(&bounds.w_lower),
        },
        q0,
        q0_crossing: format!("{:.4}", crossing(bounds)),
        kappa_lower: BallJson::from_ball(&kappa),
        two_kappa_lower: BallJson::from_ball(&two_kappa),
        final_constant: BallJson::from_ball(&final_constant),
        legacy_q0,
        legacy_note,
        digest: String::new(),
    };
    cert.digest = cert.payload_digest();
    Ok(cert)
}

impl Certificate {
    /// Digest of everything except the digest field.
    pub fn payload_digest(&self) -> String {
        let mut copy = self.clone();
        copy.digest.clear();
        hex_digest(serde_json::to_string(&copy).expect("certificate serializes").as_bytes())
    }

    pub fn to_json(&self) -> String {
        serde_json::to_string_pretty(self).expect("certificate serializes") + "\n"
    }

    pub fn from_json(text: &str) -> Result<Self, serde_json::Error> {
        serde_json::from_str(text)
    }

    pub fn ball(&self, b: &BallJson) -> Result<RealBall, NumError> {
        b.to_ball(self.precision_bits)
    }

    /// The stored contour constants as balls.
    pub fn bounds(&self) -> Result<ContourBounds, NumError> {
        let r = &self.bounds;
        Ok(ContourBounds {
            contour: r.contour.clone(),
            n: r.n,
            alpha: self.ball(&r.alpha)?,
            a: self.ball(&r.a)?,
            b: self.ball(&r.b)?,
            a_w: self.ball(&r.a_w)?,
            b_w: self.ball(&r.b_w)?,
            w_lower: self.ball(&r.w_lower)?,
        })
    }
}

#[derive(Debug, Clone)]
pub struct CheckResult {
    pub name: &'static str,
    pub passed: bool,
    pub detail: String,
}

#[derive(Debug, Clone)]
pub struct VerifyReport {
    pub checks: Vec<CheckResult>,
}

impl VerifyReport {
    pub fn passed(&self) -> bool {
        self.checks.iter().all(|c| c.passed)
    }

    pub fn failures(&self) -> impl Iterator<Item = &CheckResult> {
        self.checks.iter().filter(|c| !c.passed)
    }
}

fn short(x: &Float) -> String {
    x.to_string_radix(10, Some(8))
}

/// Re-checks every inequality the certificate claims, from its stored balls.
/// `F` is never evaluated.
pub fn verify_certificate(cert: &Certificate) -> VerifyReport {
    let mut checks = Vec::new();
    let mut push = |name: &'static str, passed: bool, detail: String| checks.push(CheckResult { name, passed, detail });

    let digest = cert.payload_digest();
    push("digest", digest == cert.digest, format!("stored {} computed {}", cert.digest, digest));
    push("format", cert.format == CERTIFICATE_FORMAT, cert.format.clone());

    let parsed = (|| -> Result<_, RigorError> {
        let prec = cert.precision_bits;
        let z = &cert.zero;
        let xi = ComplexBall::new(cert.ball(&z.xi_re)?, cert.ball(&z.xi_im)?);
        let radius = Float::parse(&z.radius_used).map_err(|_| NumError::Parse("radius_used".into()))?;
        let radius = Float::with_val(RAD_PREC, radius);
        let center_re = Float::with_val(prec, Float::parse(&z.center_re).map_err(|_| NumError::Parse("center_re".into()))?);
        let center_im = Float::with_val(prec, Float::parse(&z.center_im).map_err(|_| NumError::Parse("center_im".into()))?);
        let min = cert.ball(&z.min_on_circle)?;
        let tail = cert.ball(&z.tail_at_circle)?;
        let bounds = cert.bounds()?;
        let kappa = cert.ball(&cert.kappa_lower)?;
        let two_kappa = cert.ball(&cert.two_kappa_lower)?;
        let final_constant = cert.ball(&cert.final_constant)?;
        let gamma1 = cert.ball(&cert.gamma1)?;
        Ok((prec, xi, radius, center_re, center_im, min, tail, bounds, kappa, two_kappa, final_constant, gamma1))
    })();
    let (prec, xi, radius, center_re, center_im, min, tail, bounds, kappa, two_kappa, final_constant, gamma1) = match parsed {
        Ok(v) => v,
        Err(e) => {
            push("parse", false, e.to_string());
            return VerifyReport { checks };
        }
    };

    push(
        "rouche gap",
        min.lower() > tail.upper(),
        format!("min |F_M| >= {} vs tail <= {}", short(&min.lower()), short(&tail.upper())),
    );
    push("winding number", cert.zero.winding == 1, format!("{}", cert.zero.winding));
    push(
        "enclosure radius",
        radius > 0 && *xi.re.rad() == radius && *xi.im.rad() == radius && *xi.re.mid() == center_re && *xi.im.mid() == center_im,
        format!("radius {} vs enclosure {} / {}", short(&radius), short(xi.re.rad()), short(xi.im.rad())),
    );
    let inside = bounds.contour.strictly_contains(&xi).unwrap_or(false);
    push("zero inside contour", inside, format!("{:?}", bounds.contour));
    let width_ok = bounds
        .contour
        .corners(prec)
        .map(|[x0, x1, _, _]| x1.sub(&x0).lt(&RealBall::from_int(prec, 1)))
        .unwrap_or(false);
    push("contour width below 1", width_ok, String::new());
    push(
        "w_lower bounds Im xi",
        bounds.w_lower.is_positive() && bounds.w_lower.upper() <= xi.im.lower(),
        format!("w_lower {} vs Im xi >= {}", short(&bounds.w_lower.upper()), short(&xi.im.lower())),
    );
    push("truncation orders", cert.zero.m >= bounds.n && bounds.n >= 1, format!("M = {}, N = {}", cert.zero.m, bounds.n));

    let rhs = RealBall::exact(prec, &bounds.alpha.lower())
        .sub(&RealBall::exact(prec, &bounds.b.upper()))
        .sub(&RealBall::exact(prec, &bounds.b_w.upper()).mul_2si(1));
    push("alpha > b + 2 b_w", rhs.is_positive(), format!("alpha - b - 2 b_w >= {}", short(&rhs.lower())));
    let y0_lower = bounds.contour.corners(prec).map(|c| c[2].lower()).ok();
    if let Some(y0) = y0_lower {
        if bounds.w_lower.lower() >= y0 {
            push("b_w <= b", bounds.b_w.upper() <= bounds.b.upper(), String::new());
        }
    }
    push("q0 criterion holds", cert.q0 >= 2 && q0_condition(cert.q0, &bounds, prec), format!("q0 = {}", cert.q0));
    push(
        "q0 minimal",
        cert.q0 == 2 || (cert.q0 > 2 && q0_fails(cert.q0 - 1, &bounds, prec)),
        format!("criterion at q0 - 1 = {}", cert.q0.saturating_sub(1)),
    );
    let kappa_ok = cert.q0 >= 2 && {
        let exact = RealBall::from_int(prec, cert.q0 as i64).powi(bounds.n as u32).recip();
        exact.map(|k| kappa.upper() <= k.lower()).unwrap_or(false)
    };
    push("kappa <= q0^-N", kappa_ok, format!("kappa >= {}", short(&kappa.lower())));
    push("two kappa = 2 kappa", two_kappa.upper() <= kappa.mul_2si(1).lower(), short(&two_kappa.lower()));
    let recomputed = gamma1.div(&RealBall::pi(prec)).map(|g| g.add(&two_kappa));
    push(
        "final constant",
        recomputed.map(|r| final_constant.lower() <= r.lower()).unwrap_or(false),
        format!(">= {}", final_constant.lower().to_string_radix(10, Some(12))),
    );
    let legacy = solve_q0_legacy(&bounds, prec).ok();
    push("legacy q0 record", legacy == cert.legacy_q0, format!("{:?}", cert.legacy_q0));

    VerifyReport { checks }
}
