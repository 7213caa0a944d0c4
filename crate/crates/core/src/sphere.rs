//! Complex numbers extended to the Riemann sphere.
//!
//! Plain field arithmetic comes from [`num_complex::Complex64`]. Division by
//! an exact zero yields a non-finite value there; [`SpherePoint::from_complex`]
//! is the single place where such values are promoted to the point at
//! infinity.

use std::f64::consts::PI;
use std::fmt;

pub use num_complex::Complex64 as Complex;

/// A point of the Riemann sphere.
#[derive(Clone, Copy, Debug, PartialEq)]
pub enum SpherePoint {
    Finite(Complex),
    Infinity,
}

impl SpherePoint {
    pub const ZERO: SpherePoint = SpherePoint::Finite(Complex::new(0.0, 0.0));

    /// Wraps a complex value, promoting any non-finite component
    /// (overflow, division by zero) to [`SpherePoint::Infinity`].
    #[inline]
    pub fn from_complex(z: Complex) -> Self {
        if z.re.is_finite() && z.im.is_finite() {
            SpherePoint::Finite(z)
        } else {
            SpherePoint::Infinity
        }
    }

    #[inline]
    pub fn finite(self) -> Option<Complex> {
        match self {
            SpherePoint::Finite(z) => Some(z),
            SpherePoint::Infinity => None,
        }
    }

    #[inline]
    pub fn is_infinite(self) -> bool {
        matches!(self, SpherePoint::Infinity)
    }

    /// The involution z -> 1/z, exchanging 0 and infinity.
    pub fn recip(self) -> Self {
        match self {
            SpherePoint::Infinity => SpherePoint::ZERO,
            SpherePoint::Finite(z) if z.re == 0.0 && z.im == 0.0 => SpherePoint::Infinity,
            SpherePoint::Finite(z) => SpherePoint::from_complex(z.inv()),
        }
    }

    /// Raises the point to a positive integer power.
    pub fn powu(self, n: u32) -> Self {
        match self {
            SpherePoint::Infinity => SpherePoint::Infinity,
            SpherePoint::Finite(z) => SpherePoint::from_complex(z.powu(n)),
        }
    }
}

impl From<Complex> for SpherePoint {
    fn from(z: Complex) -> Self {
        SpherePoint::from_complex(z)
    }
}

impl fmt::Display for SpherePoint {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            SpherePoint::Finite(z) => write!(f, "{}", format_complex(*z)),
            SpherePoint::Infinity => f.write_str("inf"),
        }
    }
}

/// Formats as `a+bi` / `a-bi`, the syntax accepted by [`crate::parse::parse_complex`].
pub fn format_complex(z: Complex) -> String {
    if z.im.is_sign_negative() {
        format!("{}-{}i", z.re, -z.im)
    } else {
        format!("{}+{}i", z.re, z.im)
    }
}

/// All `n` solutions of `z^n = w`.
///
/// The principal root (argument in `(-pi/n, pi/n]`) comes first, the rest
/// follow counter-clockwise. For `w = 0` every entry is zero.
pub fn nth_roots(w: Complex, n: u32) -> Vec<Complex> {
    assert!(n >= 1, "nth_roots requires n >= 1");
    let principal = principal_root(w, n);
    (0..n).map(|k| principal * unit_root(k, n)).collect()
}

/// Principal `n`-th root, argument in `(-pi/n, pi/n]`.
pub fn principal_root(w: Complex, n: u32) -> Complex {
    if w.re == 0.0 && w.im == 0.0 {
        return Complex::new(0.0, 0.0);
    }
    if n == 1 {
        return w;
    }
    let (r, theta) = w.to_polar();
    // atan2 returns -pi for (-x, -0.0); fold onto the (-pi, pi] branch.
    let theta = if theta == -PI { PI } else { theta };
    Complex::from_polar(r.powf(1.0 / f64::from(n)), theta / f64::from(n))
}

/// `exp(2 pi i k / n)`.
#[inline]
pub fn unit_root(k: u32, n: u32) -> Complex {
    let k = k % n;
    if k == 0 {
        return Complex::new(1.0, 0.0);
    }
    let t = 2.0 * PI * f64::from(k) / f64::from(n);
    Complex::new(t.cos(), t.sin())
}

/// Chordal metric on the sphere, `2|a-b| / (sqrt(1+|a|^2) sqrt(1+|b|^2))`.
pub fn chordal_distance(a: SpherePoint, b: SpherePoint) -> f64 {
    match (a, b) {
        (SpherePoint::Infinity, SpherePoint::Infinity) => 0.0,
        (SpherePoint::Finite(z), SpherePoint::Infinity)
        | (SpherePoint::Infinity, SpherePoint::Finite(z)) => 2.0 / 1f64.hypot(z.norm()),
        (SpherePoint::Finite(a), SpherePoint::Finite(b)) => {
            if a.norm() > 1.0 && b.norm() > 1.0 {
                // inversion is an isometry; keeps |a-b| from overflowing
                finite_chordal(a.inv(), b.inv())
            } else {
                finite_chordal(a, b)
            }
        }
    }
}

#[inline]
fn finite_chordal(a: Complex, b: Complex) -> f64 {
    2.0 * (a - b).norm() / (1f64.hypot(a.norm()) * 1f64.hypot(b.norm()))
}
