//! Boundary holonomy along the elliptic part of the locus and the
//! slope/cover certificates built on it.
//!
//! On `(2, r1*)` the meridian trace satisfies `0 < T < 4`, so the meridian
//! has eigenvalue `M = e^{i theta}` and the longitude eigenvalue `L` is a
//! unit complex number `e^{i phi}`. A slope `m/l` is realized where
//! `m theta_eff + l phi = 0 (mod 2 pi)`; a branched cover of order `n`
//! where `n theta = pi`.

use std::f64::consts::PI;
use std::fmt;
use std::str::FromStr;

use num_complex::Complex64;
use serde::{Deserialize, Serialize};

use crate::config::ToleranceConfig;
use crate::error::{Error, Result};
use crate::knot::PretzelKnot;
use crate::representation::{build_representation, meridian_power_residual, Sign};
use crate::roots::{bisect, first_sign_change};
use crate::trace_locus::{cover_threshold, find_r1_star, solve_locus, LocusPoint};

const MIN_DENOMINATOR: f64 = 1e-14;

/// Number of times the march step is refined by 10 before giving up.
const MARCH_REFINEMENTS: u32 = 3;

/// Reduces an angle to `(-pi, pi]`.
pub fn wrap_phase(x: f64) -> f64 {
    let r = x.rem_euclid(2.0 * PI);
    if r > PI {
        r - 2.0 * PI
    } else {
        r
    }
}

/// Meridian and longitude eigenvalue data at one elliptic locus point.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct BoundaryHolonomy {
    pub sign: Sign,
    /// Meridian phase in `(0, pi/2)`, `sqrt(T) = 2 cos(theta)`.
    pub theta: f64,
    /// `theta` on the plus branch, `theta - pi` on the minus branch.
    pub theta_eff: f64,
    pub alpha: f64,
    pub beta: f64,
    /// Longitude eigenvalue.
    pub longitude: Complex64,
    /// Argument of the longitude eigenvalue, in `(0, pi)`.
    pub phi: f64,
    /// `-phi / theta_eff`.
    pub slope: f64,
}

/// Real and imaginary parts of `L` from the expanded formulas.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct LongitudeClosedForm {
    pub re: f64,
    pub im: f64,
    /// Same numerators over `alpha^2 + beta^2 - 2 alpha beta cos(theta)`.
    pub re_cos_theta_denominator: f64,
    pub im_cos_theta_denominator: f64,
}

impl BoundaryHolonomy {
    /// Meridian eigenvalue on this branch, `e^{i theta_eff}`.
    pub fn meridian(&self) -> Complex64 {
        Complex64::from_polar(1.0, self.theta_eff)
    }

    /// `|(1+L)(M+1/M)(sigma1+2-2 gamma) - (1-L)(M-1/M)(sigma1+2-2 t^2)|`.
    pub fn eigenvalue_equation_residual(&self, point: &LocusPoint) -> f64 {
        let m = self.meridian();
        let l = self.longitude;
        let lhs = (1.0 + l) * (m + m.inv()) * point.sigma_gamma_margin();
        let rhs = (1.0 - l) * (m - m.inv()) * (point.sigma1 + 2.0 - 2.0 * point.t_squared);
        (lhs - rhs).norm()
    }

    pub fn closed_form(&self) -> LongitudeClosedForm {
        let (a, b) = (self.alpha, self.beta);
        let cos2 = (2.0 * self.theta).cos();
        let sin2 = (2.0 * self.theta).sin();
        let re_num = 2.0 * a * b - (a * a + b * b) * cos2;
        let im_num = (a * a - b * b) * sin2;
        let den = a * a + b * b - 2.0 * a * b * cos2;
        let den_cos = a * a + b * b - 2.0 * a * b * self.theta.cos();
        LongitudeClosedForm {
            re: re_num / den,
            im: im_num / den,
            re_cos_theta_denominator: re_num / den_cos,
            im_cos_theta_denominator: im_num / den_cos,
        }
    }

    /// Largest gap between the direct `L` and the expanded formulas.
    pub fn closed_form_defect(&self) -> f64 {
        let cf = self.closed_form();
        (self.longitude.re - cf.re)
            .abs()
            .max((self.longitude.im - cf.im).abs())
    }

    /// Same gap for the variant with `cos(theta)` in the denominator.
    pub fn cos_theta_denominator_gap(&self) -> f64 {
        let cf = self.closed_form();
        (self.longitude.re - cf.re_cos_theta_denominator)
            .abs()
            .max((self.longitude.im - cf.im_cos_theta_denominator).abs())
    }
}

/// Longitude eigenvalue data at an elliptic locus point.
pub fn boundary_holonomy(point: &LocusPoint, sign: Sign) -> Result<BoundaryHolonomy> {
    let t_squared = point.t_squared;
    if !(t_squared > 0.0 && t_squared < 4.0) {
        return Err(Error::NotElliptic { t_squared });
    }
    let theta = (4.0 - t_squared).sqrt().atan2(t_squared.sqrt());
    let theta_eff = match sign {
        Sign::Plus => theta,
        Sign::Minus => theta - PI,
    };
    let m = Complex64::from_polar(1.0, theta_eff);
    let alpha = point.sigma1 + 2.0 - point.gamma - t_squared;
    let beta = point.gamma - t_squared;
    let den = alpha * m - beta * m.inv();
    if den.norm() < MIN_DENOMINATOR {
        return Err(Error::DegenerateDenominator {
            magnitude: den.norm(),
        });
    }
    let longitude = -(alpha * m.inv() - beta * m) / den;
    let phi = longitude.arg();
    Ok(BoundaryHolonomy {
        sign,
        theta,
        theta_eff,
        alpha,
        beta,
        longitude,
        phi,
        slope: -phi / theta_eff,
    })
}

/// A reduced surgery coefficient `m/l` with `l > 0`.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub struct SurgerySlope {
    pub m: i64,
    pub l: u64,
}

fn gcd(mut a: u64, mut b: u64) -> u64 {
    while b != 0 {
        (a, b) = (b, a % b);
    }
    a
}

impl SurgerySlope {
    /// Normalizes the sign into `m` and divides out the common factor.
    pub fn new(m: i64, l: i64) -> Result<Self> {
        if l == 0 {
            return Err(Error::InvalidInput("slope denominator is zero".into()));
        }
        let (m, l) = if l < 0 {
            (m.checked_neg(), l.checked_neg())
        } else {
            (Some(m), Some(l))
        };
        let (Some(m), Some(l)) = (m, l) else {
            return Err(Error::InvalidInput("slope overflows".into()));
        };
        let g = gcd(m.unsigned_abs(), l as u64).max(1);
        Ok(SurgerySlope {
            m: m / g as i64,
            l: l as u64 / g,
        })
    }

    pub fn value(&self) -> f64 {
        self.m as f64 / self.l as f64
    }
}

impl fmt::Display for SurgerySlope {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}/{}", self.m, self.l)
    }
}

impl FromStr for SurgerySlope {
    type Err = Error;

    /// Accepts `"m/l"` or a bare integer `"m"`; decimals are rejected.
    fn from_str(s: &str) -> Result<Self> {
        let malformed = || Error::InvalidInput(format!("malformed slope {s:?}, expected m/l"));
        let s = s.trim();
        let (num, den) = match s.split_once('/') {
            Some((n, d)) => (n.trim(), d.trim()),
            None => (s, "1"),
        };
        let m: i64 = num.parse().map_err(|_| malformed())?;
        let l: i64 = den.parse().map_err(|_| malformed())?;
        SurgerySlope::new(m, l)
    }
}

/// What a certificate certifies.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "lowercase")]
pub enum CertificateTarget {
    Slope { m: i64, l: u64 },
    Cover { n: u32 },
}

/// Numerical evidence that a representation with the required boundary
/// behaviour exists.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct Certificate {
    pub target: CertificateTarget,
    pub knot: PretzelKnot,
    pub r1: f64,
    pub sign: Sign,
    pub point: LocusPoint,
    pub holonomy: BoundaryHolonomy,
    /// `|m theta_eff + l phi|` or `|n theta - pi|`, reduced mod `2 pi`.
    pub phase_residual: f64,
    pub relation_residual: f64,
    pub determinant_residual: f64,
    pub trace_residual: f64,
    /// `max |X1^n + I|`, covers only.
    pub meridian_power_residual: Option<f64>,
    pub passed: bool,
}

impl Certificate {
    fn residuals(&self) -> impl Iterator<Item = f64> + '_ {
        [
            self.phase_residual,
            self.relation_residual,
            self.determinant_residual,
            self.trace_residual,
        ]
        .into_iter()
        .chain(self.meridian_power_residual)
    }

    /// Largest residual recorded on the certificate.
    pub fn worst_residual(&self) -> f64 {
        self.residuals().fold(0.0, f64::max)
    }
}

/// Finds a root of `g` on `(lo, hi)` by marching for a sign change and
/// bisecting the first bracket. The march step is refined down to
/// `march_step / 1000` before reporting `NoBracket`.
fn march_and_bisect<F>(mut g: F, lo: f64, hi: f64, cfg: &ToleranceConfig) -> Result<f64>
where
    F: FnMut(f64) -> Result<f64>,
{
    let mut step = cfg.march_step;
    for _ in 0..=MARCH_REFINEMENTS {
        let count = ((hi - lo) / step).ceil().max(1.0) as usize;
        let grid: Vec<f64> = (0..=count)
            .map(|i| if i == count { hi } else { lo + i as f64 * step })
            .collect();
        if let Some((a, b, ga)) = first_sign_change(&mut g, &grid)? {
            if ga == 0.0 {
                return Ok(a);
            }
            return bisect(&mut g, a, b, ga < 0.0, cfg.root_tol, cfg.max_iter);
        }
        step /= 10.0;
    }
    Err(Error::NoBracket)
}

fn certificate_at(
    knot: &PretzelKnot,
    target: CertificateTarget,
    r1: f64,
    sign: Sign,
    cfg: &ToleranceConfig,
) -> Result<Certificate> {
    let point = solve_locus(knot, r1, cfg)?;
    let holonomy = boundary_holonomy(&point, sign)?;
    let rep = build_representation(&point, sign, cfg)?;
    let (phase_residual, meridian_power) = match target {
        CertificateTarget::Slope { m, l } => (
            wrap_phase(m as f64 * holonomy.theta_eff + l as f64 * holonomy.phi).abs(),
            None,
        ),
        CertificateTarget::Cover { n } => (
            wrap_phase(n as f64 * holonomy.theta - PI).abs(),
            Some(meridian_power_residual(&rep, n)),
        ),
    };
    let mut cert = Certificate {
        target,
        knot: *knot,
        r1,
        sign,
        point,
        holonomy,
        phase_residual,
        relation_residual: rep.relation_residual,
        determinant_residual: rep.det_residuals().into_iter().fold(0.0, f64::max),
        trace_residual: rep.trace_residual(&point),
        meridian_power_residual: meridian_power,
        passed: false,
    };
    cert.passed =
        point.check().passed(cfg.residual_tol) && cert.worst_residual() <= cfg.residual_tol;
    Ok(cert)
}

/// Finds an elliptic representation whose boundary kills `mu^m lambda^l`.
///
/// Negative slopes use the plus branch, slopes in `(0, 1)` the minus
/// branch. Zero is excluded: that case needs no representation.
pub fn realize_slope(
    knot: &PretzelKnot,
    slope: SurgerySlope,
    cfg: &ToleranceConfig,
) -> Result<Certificate> {
    cfg.validate()?;
    let SurgerySlope { m, l } = slope;
    if m == 0 || m >= l as i64 {
        return Err(Error::OutOfRange(slope.to_string()));
    }
    let sign = if m < 0 { Sign::Plus } else { Sign::Minus };
    let r_star = find_r1_star(knot, cfg)?;
    let lo = 2.0 + cfg.boundary_eps;
    let hi = r_star - cfg.boundary_eps;
    let phase = |r1: f64| -> Result<f64> {
        let point = solve_locus(knot, r1, cfg)?;
        let h = boundary_holonomy(&point, sign)?;
        Ok(l as f64 * h.phi + m as f64 * h.theta_eff)
    };
    let r1 = march_and_bisect(phase, lo, hi, cfg)?;
    certificate_at(knot, CertificateTarget::Slope { m, l }, r1, sign, cfg)
}

/// Finds an elliptic representation on the plus branch with
/// `rho(mu)^n = -I`.
pub fn realize_cover(knot: &PretzelKnot, n: u32, cfg: &ToleranceConfig) -> Result<Certificate> {
    cfg.validate()?;
    let threshold = cover_threshold(knot);
    if n < threshold {
        return Err(Error::BelowThreshold { n, threshold });
    }
    let target = 4.0 * (PI / n as f64).cos().powi(2);
    let r_star = find_r1_star(knot, cfg)?;
    let gap = |r1: f64| -> Result<f64> { Ok(solve_locus(knot, r1, cfg)?.t_squared - target) };
    let r1 = march_and_bisect(gap, 2.0 + cfg.boundary_eps, r_star, cfg)?;
    certificate_at(knot, CertificateTarget::Cover { n }, r1, Sign::Plus, cfg)
}
