//! Second-order two-variable jets.
//!
//! A [`Jet2`] carries a value together with its first and second partial
//! derivatives with respect to the chart coordinates `(x, y)`. Evaluating a
//! closed-form chart map on jets therefore yields its derivatives to machine
//! precision, with no finite-difference truncation error.

use core::ops::{Add, Div, Mul, Neg, Sub};

use num_traits::Float;

/// Value plus partials up to second order at a point of the chart.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Jet2 {
    pub v: f64,
    pub dx: f64,
    pub dy: f64,
    pub dxx: f64,
    pub dxy: f64,
    pub dyy: f64,
}

impl Jet2 {
    pub const fn constant(v: f64) -> Self {
        Jet2 { v, dx: 0.0, dy: 0.0, dxx: 0.0, dxy: 0.0, dyy: 0.0 }
    }

    /// The coordinate function `x` seeded at the point `(x, y)`.
    pub const fn var_x(x: f64) -> Self {
        Jet2 { v: x, dx: 1.0, dy: 0.0, dxx: 0.0, dxy: 0.0, dyy: 0.0 }
    }

    /// The coordinate function `y` seeded at the point `(x, y)`.
    pub const fn var_y(y: f64) -> Self {
        Jet2 { v: y, dx: 0.0, dy: 1.0, dxx: 0.0, dxy: 0.0, dyy: 0.0 }
    }

    pub fn recip(self) -> Self {
        let g = self;
        let v = 1.0 / g.v;
        let v2 = v * v;
        let v3 = v2 * v;
        Jet2 {
            v,
            dx: -g.dx * v2,
            dy: -g.dy * v2,
            dxx: (2.0 * g.dx * g.dx - g.v * g.dxx) * v3,
            dxy: (2.0 * g.dx * g.dy - g.v * g.dxy) * v3,
            dyy: (2.0 * g.dy * g.dy - g.v * g.dyy) * v3,
        }
    }

    pub fn sqrt(self) -> Self {
        let s = Float::sqrt(self.v);
        let inv2s = 0.5 / s;
        let inv4s3 = 0.25 / (s * s * s);
        Jet2 {
            v: s,
            dx: self.dx * inv2s,
            dy: self.dy * inv2s,
            dxx: self.dxx * inv2s - self.dx * self.dx * inv4s3,
            dxy: self.dxy * inv2s - self.dx * self.dy * inv4s3,
            dyy: self.dyy * inv2s - self.dy * self.dy * inv4s3,
        }
    }
}

impl Add for Jet2 {
    type Output = Jet2;
    fn add(self, o: Jet2) -> Jet2 {
        Jet2 {
            v: self.v + o.v,
            dx: self.dx + o.dx,
            dy: self.dy + o.dy,
            dxx: self.dxx + o.dxx,
            dxy: self.dxy + o.dxy,
            dyy: self.dyy + o.dyy,
        }
    }
}

impl Sub for Jet2 {
    type Output = Jet2;
    fn sub(self, o: Jet2) -> Jet2 {
        self + (-o)
    }
}

impl Neg for Jet2 {
    type Output = Jet2;
    fn neg(self) -> Jet2 {
        Jet2 {
            v: -self.v,
            dx: -self.dx,
            dy: -self.dy,
            dxx: -self.dxx,
            dxy: -self.dxy,
            dyy: -self.dyy,
        }
    }
}

impl Mul for Jet2 {
    type Output = Jet2;
    fn mul(self, o: Jet2) -> Jet2 {
        let (f, g) = (self, o);
        Jet2 {
            v: f.v * g.v,
            dx: f.dx * g.v + f.v * g.dx,
            dy: f.dy * g.v + f.v * g.dy,
            dxx: f.dxx * g.v + 2.0 * f.dx * g.dx + f.v * g.dxx,
            dxy: f.dxy * g.v + f.dx * g.dy + f.dy * g.dx + f.v * g.dxy,
            dyy: f.dyy * g.v + 2.0 * f.dy * g.dy + f.v * g.dyy,
        }
    }
}

impl Div for Jet2 {
    type Output = Jet2;
    fn div(self, o: Jet2) -> Jet2 {
        self * o.recip()
    }
}

/// Scalars a chart map can be evaluated over: plain values or jets.
pub trait ChartScalar:
    Copy
    + Add<Output = Self>
    + Sub<Output = Self>
    + Mul<Output = Self>
    + Div<Output = Self>
    + Neg<Output = Self>
{
    fn lift(v: f64) -> Self;
    fn sqrt(self) -> Self;
}

impl ChartScalar for f64 {
    fn lift(v: f64) -> Self {
        v
    }
    fn sqrt(self) -> Self {
        Float::sqrt(self)
    }
}

impl ChartScalar for Jet2 {
    fn lift(v: f64) -> Self {
        Jet2::constant(v)
    }
    fn sqrt(self) -> Self {
        Jet2::sqrt(self)
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use approx::assert_abs_diff_eq;

    fn sample(x: f64, y: f64) -> Jet2 {
        // f(x, y) = x^2 y + sqrt(y) / x
        let xj = Jet2::var_x(x);
        let yj = Jet2::var_y(y);
        xj * xj * yj + yj.sqrt() / xj
    }

    #[test]
    fn jet_matches_hand_derivatives() {
        let (x, y) = (1.3, 2.7);
        let j = sample(x, y);
        let sy = y.sqrt();
        assert_abs_diff_eq!(j.v, x * x * y + sy / x, epsilon = 1e-14);
        assert_abs_diff_eq!(j.dx, 2.0 * x * y - sy / (x * x), epsilon = 1e-13);
        assert_abs_diff_eq!(j.dy, x * x + 0.5 / (sy * x), epsilon = 1e-13);
        assert_abs_diff_eq!(j.dxx, 2.0 * y + 2.0 * sy / (x * x * x), epsilon = 1e-13);
        assert_abs_diff_eq!(j.dxy, 2.0 * x - 0.5 / (sy * x * x), epsilon = 1e-13);
        assert_abs_diff_eq!(j.dyy, -0.25 / (y * sy * x), epsilon = 1e-13);
    }
}
