//! 2x2 complex matrices.

use std::ops::{Add, Mul, Neg, Sub};

use num_complex::Complex64;
use serde::{Deserialize, Serialize};

/// Row-major `[[a, b], [c, d]]`.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct Matrix2 {
    pub a: Complex64,
    pub b: Complex64,
    pub c: Complex64,
    pub d: Complex64,
}

impl Matrix2 {
    pub fn new(a: Complex64, b: Complex64, c: Complex64, d: Complex64) -> Self {
        Matrix2 { a, b, c, d }
    }

    pub fn identity() -> Self {
        let (zero, one) = (Complex64::new(0.0, 0.0), Complex64::new(1.0, 0.0));
        Matrix2::new(one, zero, zero, one)
    }

    pub fn det(&self) -> Complex64 {
        self.a * self.d - self.b * self.c
    }

    pub fn trace(&self) -> Complex64 {
        self.a + self.d
    }

    /// True inverse (adjugate over determinant).
    pub fn inverse(&self) -> Self {
        let det = self.det();
        Matrix2::new(self.d / det, -self.b / det, -self.c / det, self.a / det)
    }

    /// Integer power by repeated squaring; negative exponents invert first.
    pub fn pow(&self, exp: i64) -> Self {
        let mut base = if exp < 0 { self.inverse() } else { *self };
        let mut e = exp.unsigned_abs();
        let mut acc = Matrix2::identity();
        while e > 0 {
            if e & 1 == 1 {
                acc = acc * base;
            }
            base = base * base;
            e >>= 1;
        }
        acc
    }

    /// `W^e X W^-e`.
    pub fn conjugated_by_power(&self, w: &Matrix2, exp: i64) -> Self {
        w.pow(exp) * *self * w.pow(-exp)
    }

    pub fn entries(&self) -> [Complex64; 4] {
        [self.a, self.b, self.c, self.d]
    }

    pub fn max_abs(&self) -> f64 {
        self.entries().iter().map(|z| z.norm()).fold(0.0, f64::max)
    }

    pub fn max_abs_diff(&self, other: &Matrix2) -> f64 {
        (*self - *other).max_abs()
    }
}

impl Mul for Matrix2 {
    type Output = Matrix2;

    fn mul(self, o: Matrix2) -> Matrix2 {
        Matrix2::new(
            self.a * o.a + self.b * o.c,
            self.a * o.b + self.b * o.d,
            self.c * o.a + self.d * o.c,
            self.c * o.b + self.d * o.d,
        )
    }
}

impl Add for Matrix2 {
    type Output = Matrix2;

    fn add(self, o: Matrix2) -> Matrix2 {
        Matrix2::new(self.a + o.a, self.b + o.b, self.c + o.c, self.d + o.d)
    }
}

impl Sub for Matrix2 {
    type Output = Matrix2;

    fn sub(self, o: Matrix2) -> Matrix2 {
        Matrix2::new(self.a - o.a, self.b - o.b, self.c - o.c, self.d - o.d)
    }
}

impl Neg for Matrix2 {
    type Output = Matrix2;

    fn neg(self) -> Matrix2 {
        Matrix2::new(-self.a, -self.b, -self.c, -self.d)
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn c(re: f64, im: f64) -> Complex64 {
        Complex64::new(re, im)
    }

    #[test]
    fn inverse_and_powers() {
        let m = Matrix2::new(c(2.0, 1.0), c(1.0, 0.0), c(0.5, -0.5), c(1.0, 0.25));
        let id = Matrix2::identity();
        assert!((m * m.inverse()).max_abs_diff(&id) < 1e-14);
        assert!(m.pow(0).max_abs_diff(&id) == 0.0);
        assert!(m.pow(3).max_abs_diff(&(m * m * m)) < 1e-13);
        assert!((m.pow(-2) * m.pow(2)).max_abs_diff(&id) < 1e-13);
    }

    #[test]
    fn rotation_power() {
        let theta = std::f64::consts::PI / 7.0;
        let rot = Matrix2::new(
            c(theta.cos(), 0.0),
            c(-theta.sin(), 0.0),
            c(theta.sin(), 0.0),
            c(theta.cos(), 0.0),
        );
        assert!((rot.pow(7) + Matrix2::identity()).max_abs() < 1e-14);
        assert!((rot.det() - 1.0).norm() < 1e-15);
    }

    #[test]
    fn conjugation_preserves_trace() {
        let x = Matrix2::new(c(1.0, 2.0), c(0.0, 1.0), c(3.0, 0.0), c(-1.0, 0.5));
        let w = Matrix2::new(c(2.0, 0.0), c(1.0, 0.0), c(1.0, 0.0), c(1.0, 0.0));
        let y = x.conjugated_by_power(&w, 3);
        assert!((y.trace() - x.trace()).norm() < 1e-10);
    }
}
