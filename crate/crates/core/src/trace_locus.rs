//! The real trace locus of an odd pretzel knot.
//!
//! For every `r1 > 2` there is a unique compatible pair `(r2, r3)` in
//! `(2, inf)^2`; from the triple follow `gamma`, the symmetric functions
//! `sigma_i`, `delta` and the squared meridian trace `T`. Everything near
//! the `r_j -> 2` corner is computed from the offsets `r_j - 2` so the
//! small quantities (`delta`, the `T` denominator) do not suffer
//! cancellation.

use std::f64::consts::PI;

use serde::{Deserialize, Serialize};

use crate::chebyshev::{cheb_cross, cheb_eval, cheb_ratio, ChebRatio};
use crate::config::ToleranceConfig;
use crate::error::{Error, Result};
use crate::knot::PretzelKnot;
use crate::roots::bisect;

/// Upper limit for the `T(r1) = 4` search.
const CROSSING_SEARCH_LIMIT: f64 = 1e6;

/// One point of the real trace locus.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct LocusPoint {
    pub knot: PretzelKnot,
    /// Trace of `x2 x3^-1`.
    pub r1: f64,
    /// Trace of `x3 x1^-1`.
    pub r2: f64,
    /// Trace of `x1 x2^-1`.
    pub r3: f64,
    /// `r_j - 2`, carried separately to full relative precision.
    pub excess: [f64; 3],
    pub p1: ChebRatio,
    pub p2: ChebRatio,
    pub p3: ChebRatio,
    pub gamma: f64,
    pub sigma1: f64,
    pub sigma2: f64,
    pub sigma3: f64,
    pub delta: f64,
    /// `gamma^2 - (sigma1 + 2) gamma + sigma2 + 4`, the factor multiplying
    /// `t^2` in the meridian equation.
    pub gamma_quadratic: f64,
    /// Squared meridian trace.
    #[serde(rename = "T")]
    pub t_squared: f64,
}

/// Outcome of the per-point invariant checks.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct LocusCheck {
    /// Largest cleared-denominator residual of the three `r_j` equations.
    pub equation_residual: f64,
    pub triangle: bool,
    pub delta_bound: bool,
    pub sigma_gamma_positive: bool,
    pub meridian_bounds: bool,
    /// Relative defect of the closed form for `gamma_quadratic`.
    pub lhs_identity_defect: f64,
    pub sigma_consistent: bool,
}

impl LocusCheck {
    pub fn passed(&self, residual_tol: f64) -> bool {
        self.equation_residual <= residual_tol
            && self.triangle
            && self.delta_bound
            && self.sigma_gamma_positive
            && self.meridian_bounds
            && self.lhs_identity_defect <= residual_tol
            && self.sigma_consistent
    }
}

impl LocusPoint {
    /// Assembles the derived quantities from a compatible triple given by
    /// its offsets `r_j - 2`.
    fn from_excess(knot: PretzelKnot, excess: [f64; 3]) -> LocusPoint {
        let [k1, k2, k3] = knot.k();
        let [e1, e2, e3] = excess;
        let (r1, r2, r3) = (2.0 + e1, 2.0 + e2, 2.0 + e3);
        let p1 = cheb_ratio(k1, r1);
        let p2 = cheb_ratio(k2, r2);
        let p3 = cheb_ratio(k3, r3);
        let (w1, v1) = p1.normalized();

        let gamma = (v1 * (r2 + r3) + w1 * (r1 + 2.0)) / (v1 + w1);
        let sigma1 = r1 + r2 + r3;
        let sigma2 = r1 * r2 + r2 * r3 + r3 * r1;
        let sigma3 = r1 * r2 * r3;

        let delta =
            e1 * e2 * e3 + 2.0 * (e1 * e2 + e2 * e3 + e3 * e1) - (e1 * e1 + e2 * e2 + e3 * e3);
        let spread = e2 + e3 - e1;
        let gamma_quadratic = e2 * e3 - spread * spread * w1 * v1 / ((w1 + v1) * (w1 + v1));
        let t_squared = delta / gamma_quadratic;

        LocusPoint {
            knot,
            r1,
            r2,
            r3,
            excess,
            p1,
            p2,
            p3,
            gamma,
            sigma1,
            sigma2,
            sigma3,
            delta,
            gamma_quadratic,
            t_squared,
        }
    }

    pub fn r(&self) -> [f64; 3] {
        [self.r1, self.r2, self.r3]
    }

    /// Copy with `r_index` shifted by `delta` and every other field left
    /// untouched. Only useful for negative controls.
    pub fn perturbed(&self, index: usize, delta: f64) -> LocusPoint {
        let mut out = *self;
        match index {
            0 => out.r1 += delta,
            1 => out.r2 += delta,
            2 => out.r3 += delta,
            _ => panic!("trace index {index} out of range"),
        }
        out.excess[index] += delta;
        out
    }

    /// Residuals of the three pairwise `r_j` equations with every `p_j`
    /// replaced by its unit-normalized projective pair.
    pub fn equation_residuals(&self) -> [f64; 3] {
        let [e1, e2, e3] = self.excess;
        let [k1, k2, k3] = self.knot.k();
        let norms = [self.p1, self.p2, self.p3].map(|p| p.w.hypot(p.v));
        let (w1, v1) = self.p1.normalized();
        let (w2, v2) = self.p2.normalized();
        let (w3, v3) = self.p3.normalized();
        let eq = |e: f64, d: f64, cross: f64, (wa, va): (f64, f64), (wb, vb): (f64, f64)| {
            (e * cross - d * (wa * wb - va * vb)).abs()
        };
        let cross23 = cheb_cross(k2, self.r2, k3, e3 - e2) / (norms[1] * norms[2]);
        let cross13 = cheb_cross(k1, self.r1, k3, e3 - e1) / (norms[0] * norms[2]);
        let cross12 = cheb_cross(k1, self.r1, k2, e2 - e1) / (norms[0] * norms[1]);
        [
            eq(e1, e2 - e3, cross23, (w2, v2), (w3, v3)),
            eq(e2, e1 - e3, cross13, (w1, v1), (w3, v3)),
            eq(e3, e1 - e2, cross12, (w1, v1), (w2, v2)),
        ]
    }

    /// `r1 + r2 - r3 - 2`, `r2 + r3 - r1 - 2`, `r3 + r1 - r2 - 2`.
    pub fn triangle_margins(&self) -> [f64; 3] {
        let [e1, e2, e3] = self.excess;
        [e1 + e2 - e3, e2 + e3 - e1, e3 + e1 - e2]
    }

    /// `(r1 - 2)(r2 - 2)(r3 - 2)`, a strict lower bound for `delta`.
    pub fn excess_product(&self) -> f64 {
        self.excess.iter().product()
    }

    /// `sigma1 + 2 - 2 gamma`.
    pub fn sigma_gamma_margin(&self) -> f64 {
        self.sigma1 + 2.0 - 2.0 * self.gamma
    }

    /// `gamma^2 - (sigma1 + 2) gamma + sigma2 + 4` evaluated term by term,
    /// with the sum of absolute term sizes.
    pub fn gamma_quadratic_direct(&self) -> (f64, f64) {
        let g = self.gamma;
        let terms = [g * g, -(self.sigma1 + 2.0) * g, self.sigma2, 4.0];
        (terms.iter().sum(), terms.iter().map(|t| t.abs()).sum())
    }

    pub fn check(&self) -> LocusCheck {
        let equation_residual = self.equation_residuals().into_iter().fold(0.0, f64::max);
        let triangle = self.triangle_margins().iter().all(|&m| m > 0.0);
        let lower = self.excess_product();
        let delta_bound = self.delta > lower && lower > 0.0;
        let sigma_gamma_positive = self.sigma_gamma_margin() > 0.0;
        let meridian_bounds = self.r1 - 2.0 < self.t_squared && self.t_squared < self.r1 + 2.0;
        let (direct, scale) = self.gamma_quadratic_direct();
        let lhs_identity_defect = (direct - self.gamma_quadratic).abs() / scale;
        let [r1, r2, r3] = self.r();
        let sigma_consistent = self.sigma1 == r1 + r2 + r3
            && self.sigma2 == r1 * r2 + r2 * r3 + r3 * r1
            && self.sigma3 == r1 * r2 * r3;
        LocusCheck {
            equation_residual,
            triangle,
            delta_bound,
            sigma_gamma_positive,
            meridian_bounds,
            lhs_identity_defect,
            sigma_consistent,
        }
    }
}

/// Returns `f(r3)` together with the `r2 - 2` it induces, given
/// `e1 = r1 - 2` and `gap = r1 - r3`.
///
/// The gap is the unknown rather than `r3`: `r2 - 2` is the gap times a
/// large factor when `r3` sits close to `r1`, so it needs the gap to full
/// relative precision. For the same reason `f` is assembled from pieces
/// that are each either gap-free or proportional to the gap.
fn residual_from_gap(knot: &PretzelKnot, e1: f64, gap: f64) -> (f64, f64) {
    let [k1, k2, k3] = knot.k();
    let z1 = 2.0 + e1;
    let p1 = cheb_ratio(k1, z1);
    let p3 = cheb_ratio(k3, z1 - gap);
    let q = cheb_ratio(k3, z1);
    let norm = |p: ChebRatio| p.w.hypot(p.v);
    let (w1, v1) = p1.normalized();
    let (w3, v3) = p3.normalized();
    let cross = cheb_cross(k1, z1, k3, -gap) / (norm(p1) * norm(p3));
    let e2 = gap * (w1 * w3 - v1 * v3) / cross;
    let p2 = cheb_ratio(k2, 2.0 + e2);

    // f = e3 g3(r3) - e1 g1(r1) - gap (1 + g2(r2)) with g = v / (w - v).
    // The first difference is split into a change of index at r1, which
    // is exact, and a change of argument, which carries a factor of gap.
    let g = |p: ChebRatio| p.v / (p.w - p.v);
    let index = cheb_eval(i64::from(k3) - i64::from(k1) - 1, z1) / ((q.w - q.v) * (p1.w - p1.v));
    let shift = cheb_cross(k3, z1, k3, -gap) / ((p3.w - p3.v) * (q.w - q.v));
    let f = e1 * (index + shift) - gap * (g(p3) + 1.0 + g(p2));
    (f, e2)
}

/// The strictly increasing function whose zero in `r3 in (2, r1)` fixes
/// the locus point over `r1`. Requires `k1 < k3`.
pub fn residual_f(knot: &PretzelKnot, r1: f64, r3: f64) -> Result<f64> {
    let [k1, _, k3] = knot.k();
    if k1 >= k3 {
        return Err(Error::InvalidInput(format!(
            "{knot} has k1 = k3; the locus is diagonal and has no residual function"
        )));
    }
    if k1 == 0 {
        return Err(Error::Unsupported {
            a1: knot.a()[0],
            a2: knot.a()[1],
            a3: knot.a()[2],
        });
    }
    if !(r3 > 2.0 && r3 < r1) {
        return Err(Error::DegenerateBracket { r1, r3 });
    }
    Ok(residual_from_gap(knot, r1 - 2.0, r1 - r3).0)
}

/// Solves the locus over `r1 > 2`.
pub fn solve_locus(knot: &PretzelKnot, r1: f64, cfg: &ToleranceConfig) -> Result<LocusPoint> {
    cfg.validate()?;
    if !(r1.is_finite() && r1 > 2.0) {
        return Err(Error::InvalidInput(format!("r1 = {r1} must exceed 2")));
    }
    let e1 = r1 - 2.0;
    if knot.is_symmetric() {
        return Ok(LocusPoint::from_excess(*knot, [e1; 3]));
    }
    if knot.k()[0] == 0 {
        let [a1, a2, a3] = knot.a();
        return Err(Error::Unsupported { a1, a2, a3 });
    }
    // f increases with r3, so it is positive at gap = 0.
    let gap = bisect(
        |gap| Ok(residual_from_gap(knot, e1, gap).0),
        0.0,
        e1,
        false,
        cfg.root_tol,
        cfg.max_iter,
    )?;
    let (_, e2) = residual_from_gap(knot, e1, gap);
    let e3 = e1 - gap;
    Ok(LocusPoint::from_excess(*knot, [e1, e2, e3]))
}

/// `T(r1)`.
pub fn meridian_trace_squared(knot: &PretzelKnot, r1: f64, cfg: &ToleranceConfig) -> Result<f64> {
    Ok(solve_locus(knot, r1, cfg)?.t_squared)
}

/// `lim_{r1 -> 2+} T = 4 - 4 / (1 + a1 a2 + a2 a3 + a3 a1)`.
pub fn limit_t(knot: &PretzelKnot) -> f64 {
    4.0 - 4.0 / knot.pair_sum() as f64
}

/// Limits of `(r2 - 2)/(r1 - 2)` and `(r3 - 2)/(r1 - 2)` as `r1 -> 2+`.
pub fn limit_ratios(knot: &PretzelKnot) -> (f64, f64) {
    let [k1, k2, k3] = knot.k().map(f64::from);
    let den = 1.0 + k2 + k3;
    ((1.0 + k1 + k3) / den, (1.0 + k1 + k2) / den)
}

/// Angle in `(0, pi/2)` with `4 cos^2(theta0) = limit_t`.
pub fn theta0(knot: &PretzelKnot) -> f64 {
    0.5 * (1.0 - 2.0 / knot.pair_sum() as f64).acos()
}

/// Smallest integer strictly above `pi / theta0`.
pub fn cover_threshold(knot: &PretzelKnot) -> u32 {
    let bound = PI / theta0(knot);
    let nearest = bound.round();
    // An exact integer bound (P(1,1,1) gives 6) must not round down.
    if (bound - nearest).abs() <= 1e-9 * nearest {
        nearest as u32 + 1
    } else {
        bound.floor() as u32 + 1
    }
}

/// First `r1 > 2` with `T(r1) = 4`.
pub fn find_r1_star(knot: &PretzelKnot, cfg: &ToleranceConfig) -> Result<f64> {
    cfg.validate()?;
    let start = 2.0 + cfg.boundary_eps;
    let t_minus_four = |r: f64| -> Result<f64> { Ok(meridian_trace_squared(knot, r, cfg)? - 4.0) };
    if t_minus_four(start)? >= 0.0 {
        return Err(Error::NoCrossing { limit: start });
    }
    let mut prev = start;
    for i in 1.. {
        let next = start + i as f64 * cfg.march_step;
        if next > CROSSING_SEARCH_LIMIT {
            return Err(Error::NoCrossing {
                limit: CROSSING_SEARCH_LIMIT,
            });
        }
        if t_minus_four(next)? >= 0.0 {
            return bisect(t_minus_four, prev, next, true, cfg.root_tol, cfg.max_iter);
        }
        prev = next;
    }
    unreachable!()
}
