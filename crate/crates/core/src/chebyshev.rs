//! Chebyshev polynomials of the second kind.
//!
//! `S_0 = 1`, `S_1 = z`, `S_j = z S_{j-1} - S_{j-2}`, extended to all
//! integers by the same recurrence (so `S_{-1} = 0` and
//! `S_{-j} = -S_{j-2}`).
//!
//! Ratios `S_k / S_{k-1}` are carried projectively as the pair
//! `(w, v) = (S_k, S_{k-1})` so that `k = 0` (where `v = 0`) needs no
//! special casing downstream.

use serde::{Deserialize, Serialize};

/// Evaluates `S_j(z)` by forward recurrence.
pub fn cheb_eval(j: i64, z: f64) -> f64 {
    if j < -1 {
        return -cheb_eval(-j - 2, z);
    }
    let (mut prev, mut cur) = (0.0, 1.0);
    if j == -1 {
        return prev;
    }
    for _ in 0..j {
        let next = z * cur - prev;
        prev = cur;
        cur = next;
    }
    cur
}

/// The pair `(S_k(z), S_{k-1}(z))`.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct ChebRatio {
    /// `S_k(z)`
    pub w: f64,
    /// `S_{k-1}(z)`
    pub v: f64,
    pub k: u32,
    pub z: f64,
}

/// Evaluates `S_k(z)` and `S_{k-1}(z)` in a single recurrence pass.
pub fn cheb_ratio(k: u32, z: f64) -> ChebRatio {
    let (mut v, mut w) = (0.0, 1.0);
    for _ in 0..k {
        let next = z * w - v;
        v = w;
        w = next;
    }
    ChebRatio { w, v, k, z }
}

/// `S_a(x) S_{b-1}(x + h) - S_b(x + h) S_{a-1}(x)` without the
/// cancellation of the direct product difference when `h` is small.
///
/// At `h = 0` this is `S_{b-a-1}(x)`. The `h`-dependent part is written
/// with divided differences `(S_j(x + h) - S_j(x)) / h`, which satisfy
/// `Q_j = (x + h) Q_{j-1} + S_{j-1}(x) - Q_{j-2}`.
pub fn cheb_cross(a: u32, x: f64, b: u32, h: f64) -> f64 {
    if a > b {
        return -cheb_cross(b, x + h, a, -h);
    }
    let y = x + h;
    // (S_j(x), S_{j-1}(x)) and (Q_j, Q_{j-1}), advanced together.
    let (mut s, mut s_prev) = (1.0, 0.0);
    let (mut q, mut q_prev) = (0.0, 0.0);
    let mut at_a = (0.0, 0.0);
    let mut q_b_minus_1 = 0.0;
    for j in 0..=b {
        if j == a {
            at_a = (s, s_prev);
        }
        if j + 1 == b {
            q_b_minus_1 = q;
        }
        if j == b {
            break;
        }
        let q_next = y * q + s - q_prev;
        let s_next = x * s - s_prev;
        (q_prev, q) = (q, q_next);
        (s_prev, s) = (s, s_next);
    }
    let (s_a, s_a_minus_1) = at_a;
    let base = cheb_eval(i64::from(b) - i64::from(a) - 1, x);
    base + h * (s_a * q_b_minus_1 - s_a_minus_1 * q)
}

impl ChebRatio {
    /// `S_k / S_{k-1}`, or `None` when the denominator is zero.
    pub fn ratio(&self) -> Option<f64> {
        if self.v == 0.0 {
            None
        } else {
            Some(self.w / self.v)
        }
    }

    /// Same projective point rescaled so that `w^2 + v^2 = 1`.
    ///
    /// For large `z` and `k` the raw values grow like `z^k`; normalizing
    /// keeps cleared-denominator residuals on a unit scale.
    pub fn normalized(&self) -> (f64, f64) {
        let n = self.w.hypot(self.v);
        (self.w / n, self.v / n)
    }

    /// `(S_k^2 - S_{k+1} S_{k-1}) - 1`, zero by the Cassini-type identity.
    pub fn cassini_defect(&self) -> f64 {
        let next = self.z * self.w - self.v;
        self.w * self.w - next * self.v - 1.0
    }

    /// `(S_k^2 + S_{k-1}^2 - z S_k S_{k-1}) - 1`.
    pub fn quadratic_defect(&self) -> f64 {
        self.w * self.w + self.v * self.v - self.z * self.w * self.v - 1.0
    }
}
