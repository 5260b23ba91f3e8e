//! Explicit matrix representations of the knot group over a locus point.
//!
//! The images of the three Wirtinger meridians are put in the normal form
//!
//! ```text
//! X1 = [[m, u], [0, 1/m]]     X2 = [[m, 0], [-u, 1/m]]     u = sqrt(r3 - 2)
//! ```
//!
//! which forces `tr(X1 X2^-1) = r3`. The remaining trace conditions are
//! linear in the entries of `X3`; unimodularity of the solution is not
//! imposed and is checked afterwards as an independent certificate.

use num_complex::Complex64;
use serde::{Deserialize, Serialize};

use crate::config::ToleranceConfig;
use crate::error::{Error, Result};
use crate::knot::PretzelKnot;
use crate::matrix::Matrix2;
use crate::trace_locus::LocusPoint;

/// Condition estimate above which the trace system is treated as singular.
pub const MAX_CONDITION: f64 = 1e12;

/// Which square root of `T` is used as the meridian trace.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(into = "i8", try_from = "i8")]
pub enum Sign {
    Plus,
    Minus,
}

impl Sign {
    pub fn value(self) -> f64 {
        match self {
            Sign::Plus => 1.0,
            Sign::Minus => -1.0,
        }
    }
}

impl From<Sign> for i8 {
    fn from(sign: Sign) -> i8 {
        match sign {
            Sign::Plus => 1,
            Sign::Minus => -1,
        }
    }
}

impl TryFrom<i8> for Sign {
    type Error = String;

    fn try_from(v: i8) -> std::result::Result<Sign, String> {
        match v {
            1 => Ok(Sign::Plus),
            -1 => Ok(Sign::Minus),
            other => Err(format!("sign must be 1 or -1, got {other}")),
        }
    }
}

/// Matrix images of the three meridians.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct Representation {
    pub x1: Matrix2,
    pub x2: Matrix2,
    pub x3: Matrix2,
    pub sign: Sign,
    /// Meridian trace `sign * sqrt(T)`.
    pub t: f64,
    /// Eigenvalue of `X1` with `m + 1/m = t`.
    pub m: Complex64,
    /// Trace of `x1 x2 x3`: `t^3 + t - t gamma`.
    pub r_prod: f64,
    /// Off-diagonal scale `u` of the normal form.
    pub gauge: f64,
    pub relation_residual: f64,
}

/// Traces of the words that determine the representation up to conjugacy.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct TraceData {
    pub t: [Complex64; 3],
    pub r1: Complex64,
    pub r2: Complex64,
    pub r3: Complex64,
    pub r_prod: Complex64,
}

impl TraceData {
    fn all(&self) -> [Complex64; 7] {
        [
            self.t[0],
            self.t[1],
            self.t[2],
            self.r1,
            self.r2,
            self.r3,
            self.r_prod,
        ]
    }

    /// Largest imaginary part over all recorded traces.
    pub fn max_imag(&self) -> f64 {
        self.all().iter().map(|z| z.im.abs()).fold(0.0, f64::max)
    }
}

impl Representation {
    pub fn traces(&self) -> TraceData {
        TraceData {
            t: [self.x1.trace(), self.x2.trace(), self.x3.trace()],
            r1: (self.x2 * self.x3.inverse()).trace(),
            r2: (self.x3 * self.x1.inverse()).trace(),
            r3: (self.x1 * self.x2.inverse()).trace(),
            r_prod: (self.x1 * self.x2 * self.x3).trace(),
        }
    }

    /// Largest deviation of the recovered traces from the targets
    /// `(t, t, t, r1, r2, r3, r_prod)`.
    pub fn trace_residual(&self, point: &LocusPoint) -> f64 {
        let targets = [
            self.t,
            self.t,
            self.t,
            point.r1,
            point.r2,
            point.r3,
            self.r_prod,
        ];
        self.traces()
            .all()
            .iter()
            .zip(targets)
            .map(|(z, target)| (z - target).norm())
            .fold(0.0, f64::max)
    }

    /// `|det X_i - 1|` for each generator.
    pub fn det_residuals(&self) -> [f64; 3] {
        [self.x1, self.x2, self.x3].map(|x| (x.det() - 1.0).norm())
    }

    /// Argument of the eigenvalue `m` of `X1`.
    pub fn meridian_phase(&self) -> f64 {
        self.m.arg()
    }
}

/// Eigenvalue `m` with `m + 1/m = t`, given `t^2 = t_squared`.
///
/// Elliptic traces get `m = e^{i theta}` with `theta in (0, pi)`; hyperbolic
/// traces get the real root with `|m| > 1`.
fn meridian_eigenvalue(t: f64, t_squared: f64) -> Complex64 {
    if t_squared < 4.0 {
        Complex64::from_polar(1.0, (4.0 - t_squared).sqrt().atan2(t))
    } else {
        Complex64::new(0.5 * (t + t.signum() * (t_squared - 4.0).sqrt()), 0.0)
    }
}

/// Gaussian elimination with partial pivoting for a 4x4 complex system.
/// Returns the solution and the infinity-norm condition estimate.
fn solve4(a: [[Complex64; 4]; 4], rhs: [Complex64; 4]) -> Option<([Complex64; 4], f64)> {
    let zero = Complex64::new(0.0, 0.0);
    let one = Complex64::new(1.0, 0.0);
    // Augment with the identity to get the inverse for the condition number.
    let mut m = [[zero; 9]; 4];
    for i in 0..4 {
        m[i][..4].copy_from_slice(&a[i]);
        m[i][4 + i] = one;
        m[i][8] = rhs[i];
    }
    for col in 0..4 {
        let pivot = (col..4).max_by(|&x, &y| m[x][col].norm().total_cmp(&m[y][col].norm()))?;
        if m[pivot][col].norm() == 0.0 {
            return None;
        }
        m.swap(col, pivot);
        let p = m[col][col];
        m[col][col..].iter_mut().for_each(|x| *x /= p);
        let pivot_row = m[col];
        for (i, row) in m.iter_mut().enumerate() {
            let factor = row[col];
            if i != col && factor != zero {
                for (x, &y) in row[col..].iter_mut().zip(&pivot_row[col..]) {
                    *x -= factor * y;
                }
            }
        }
    }
    let row_norm = |row: &[Complex64]| row.iter().map(|z| z.norm()).sum::<f64>();
    let norm_a = a.iter().map(|r| row_norm(r)).fold(0.0, f64::max);
    let norm_inv = m.iter().map(|r| row_norm(&r[4..8])).fold(0.0, f64::max);
    let x = [m[0][8], m[1][8], m[2][8], m[3][8]];
    Some((x, norm_a * norm_inv))
}

/// Builds the matrices without checking `det X3 = 1`.
///
/// Used directly only for negative controls on perturbed points.
pub fn build_unchecked(point: &LocusPoint, sign: Sign) -> Result<Representation> {
    let t_squared = point.t_squared;
    if !(t_squared.is_finite() && t_squared > 0.0) {
        return Err(Error::InvalidInput(format!(
            "meridian trace squared {t_squared} must be positive"
        )));
    }
    let excess3 = point.excess[2];
    if !(excess3 > 0.0) {
        return Err(Error::InvalidInput(format!(
            "r3 - 2 = {excess3} must be positive"
        )));
    }
    let t = sign.value() * t_squared.sqrt();
    let m = meridian_eigenvalue(t, t_squared);
    let mi = m.inv();
    let u = excess3.sqrt();
    let cu = Complex64::new(u, 0.0);
    let zero = Complex64::new(0.0, 0.0);
    let one = Complex64::new(1.0, 0.0);
    let r_prod = t * t * t + t - t * point.gamma;

    let x1 = Matrix2::new(m, cu, zero, mi);
    let x2 = Matrix2::new(m, zero, -cu, mi);

    // Unknowns (a, b, c, d) of X3 = [[a, b], [c, d]].
    let system = [
        [one, zero, zero, one],
        [mi, zero, -cu, m],
        [mi, cu, zero, m],
        [m * m - u * u, -cu * mi, cu * mi, mi * mi],
    ];
    let rhs = [t, point.r2, point.r1, r_prod].map(|v| Complex64::new(v, 0.0));
    let (x, condition) = solve4(system, rhs).ok_or(Error::SingularSystem {
        condition: f64::INFINITY,
    })?;
    if !(condition <= MAX_CONDITION) {
        return Err(Error::SingularSystem { condition });
    }
    let x3 = Matrix2::new(x[0], x[1], x[2], x[3]);

    let mut rep = Representation {
        x1,
        x2,
        x3,
        sign,
        t,
        m,
        r_prod,
        gauge: u,
        relation_residual: 0.0,
    };
    rep.relation_residual = relation_residual(&rep, &point.knot);
    Ok(rep)
}

/// Materializes the representation over `point` on the chosen branch.
pub fn build_representation(
    point: &LocusPoint,
    sign: Sign,
    cfg: &ToleranceConfig,
) -> Result<Representation> {
    let rep = build_unchecked(point, sign)?;
    let residual = (rep.x3.det() - 1.0).norm();
    if !(residual <= cfg.residual_tol) {
        return Err(Error::NonUnimodular { residual });
    }
    Ok(rep)
}

/// Largest entrywise gap between the two sides of the three Wirtinger
/// relations of `P(a1, a2, a3)`.
pub fn relation_residual(rep: &Representation, knot: &PretzelKnot) -> f64 {
    let [k1, k2, k3] = knot.k().map(i64::from);
    let (x1, x2, x3) = (rep.x1, rep.x2, rep.x3);
    let w23 = x2 * x3.inverse();
    let w31 = x3 * x1.inverse();
    let w12 = x1 * x2.inverse();
    let sides = [
        (
            x3.conjugated_by_power(&w23, k1 + 1),
            x1.conjugated_by_power(&w12, k3),
        ),
        (
            x1.conjugated_by_power(&w31, k2 + 1),
            x2.conjugated_by_power(&w23, k1),
        ),
        (
            x2.conjugated_by_power(&w12, k3 + 1),
            x3.conjugated_by_power(&w31, k2),
        ),
    ];
    sides
        .iter()
        .map(|(lhs, rhs)| lhs.max_abs_diff(rhs))
        .fold(0.0, f64::max)
}

/// `max |(X1^n + I)_{ij}|`.
pub fn meridian_power_residual(rep: &Representation, n: u32) -> f64 {
    (rep.x1.pow(i64::from(n)) + Matrix2::identity()).max_abs()
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::trace_locus::solve_locus;

    fn point(a: [u32; 3], r1: f64) -> LocusPoint {
        let knot = PretzelKnot::new(a[0], a[1], a[2]).unwrap();
        solve_locus(&knot, r1, &ToleranceConfig::default()).unwrap()
    }

    #[test]
    fn trefoil_certificate() {
        let p = point([1, 1, 1], 2.5);
        let rep = build_representation(&p, Sign::Plus, &ToleranceConfig::default()).unwrap();
        assert!((rep.t - 3.5f64.sqrt()).abs() < 1e-15);
        assert!((rep.x3.det() - 1.0).norm() <= 1e-9);
        assert!(rep.relation_residual <= 1e-8);
        assert!(rep.trace_residual(&p) <= 1e-9);
    }

    #[test]
    fn symmetric_triple_product() {
        let p = point([3, 3, 3], 3.0);
        let rep = build_representation(&p, Sign::Plus, &ToleranceConfig::default()).unwrap();
        let t = (64.0f64 / 13.0).sqrt();
        assert!((rep.t - t).abs() < 1e-14);
        assert!((rep.r_prod - (t * t * t + t - 5.25 * t)).abs() < 1e-12);
        assert!(rep.trace_residual(&p) <= 1e-9);
    }

    #[test]
    fn equal_generators_satisfy_relations_exactly() {
        let c = |re: f64, im: f64| Complex64::new(re, im);
        let x = Matrix2::new(c(2.0, 0.0), c(1.0, 0.0), c(1.0, 0.0), c(1.0, 0.0));
        let rep = Representation {
            x1: x,
            x2: x,
            x3: x,
            sign: Sign::Plus,
            t: 0.0,
            m: c(1.0, 0.0),
            r_prod: 0.0,
            gauge: 1.0,
            relation_residual: 0.0,
        };
        let knot = PretzelKnot::new(3, 5, 7).unwrap();
        assert_eq!(relation_residual(&rep, &knot), 0.0);
    }

    #[test]
    fn perturbed_point_breaks_relations() {
        let p = point([3, 3, 5], 2.05).perturbed(2, 0.1);
        let rep = build_unchecked(&p, Sign::Plus).unwrap();
        assert!(rep.relation_residual > 1e-3);
        let err = build_representation(&p, Sign::Plus, &ToleranceConfig::default());
        assert!(matches!(err, Err(Error::NonUnimodular { .. })));
    }

    #[test]
    fn branches_share_pair_traces() {
        let p = point([3, 5, 7], 2.03);
        let cfg = ToleranceConfig::default();
        let plus = build_representation(&p, Sign::Plus, &cfg).unwrap();
        let minus = build_representation(&p, Sign::Minus, &cfg).unwrap();
        let (tp, tm) = (plus.traces(), minus.traces());
        assert!((tp.t[0] + tm.t[0]).norm() < 1e-12);
        for (a, b) in [(tp.r1, tm.r1), (tp.r2, tm.r2), (tp.r3, tm.r3)] {
            assert!((a - b).norm() < 1e-9);
        }
    }

    #[test]
    fn meridian_power_controls() {
        // Trefoil branch: T = r1 + 1, so r1 = 4cos^2(pi/7) - 1 gives t = 2cos(pi/7).
        let n = 7u32;
        let target = 4.0 * (std::f64::consts::PI / n as f64).cos().powi(2);
        let p = point([1, 1, 1], target - 1.0);
        let rep = build_representation(&p, Sign::Plus, &ToleranceConfig::default()).unwrap();
        assert!(meridian_power_residual(&rep, 7) <= 1e-8);
        assert!(meridian_power_residual(&rep, 3) >= 0.5);
        assert!(meridian_power_residual(&rep, 1) > 0.0);
    }

    #[test]
    fn sign_serializes_as_integer() {
        assert_eq!(serde_json::to_string(&Sign::Minus).unwrap(), "-1");
        assert_eq!(serde_json::from_str::<Sign>("1").unwrap(), Sign::Plus);
        assert!(serde_json::from_str::<Sign>("0").is_err());
    }
}
