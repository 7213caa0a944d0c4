//! The Chebyshev-Halley iteration applied to `z^n - 1`.
//!
//! Written over the common denominator the operator reads
//!
//! ```text
//!            A + B w + C w^2
//!   O(z) = -------------------,   w = z^n,
//!          2n z^(n-1) (E + F w)
//! ```
//!
//! with coefficients depending on `n` and `alpha`. Every closed form in this
//! module is evaluated in `w = z^n` when `|z| <= 1` and in `v = z^-n` when
//! `|z| > 1`, so `z^n` is computed once and never overflows on the way to
//! infinity.

use std::fmt;

use crate::error::{Error, Result};
use crate::sphere::{principal_root, Complex, SpherePoint};

/// Absolute tolerance used to recognise the special parameter values.
pub const FORM_TOLERANCE: f64 = 1e-14;

/// One member `(n, alpha)` of the family.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct FamilyParams {
    n: u32,
    alpha: Complex,
}

impl FamilyParams {
    pub fn new(n: u32, alpha: Complex) -> Result<Self> {
        if n < 2 {
            return Err(Error::InvalidParameter(format!(
                "degree n must be >= 2, got {n}"
            )));
        }
        if !(alpha.re.is_finite() && alpha.im.is_finite()) {
            return Err(Error::InvalidParameter(format!(
                "alpha must be finite, got {alpha}"
            )));
        }
        Ok(FamilyParams { n, alpha })
    }

    #[inline]
    pub fn n(&self) -> u32 {
        self.n
    }

    #[inline]
    pub fn alpha(&self) -> Complex {
        self.alpha
    }

    pub fn form(&self) -> OperatorForm {
        classify_form(self)
    }

    pub fn degree(&self) -> u32 {
        operator_degree(self)
    }

    /// Same `n`, parameter replaced.
    pub fn with_alpha(&self, alpha: Complex) -> Result<Self> {
        FamilyParams::new(self.n, alpha)
    }
}

/// Which closed form the operator takes.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub enum OperatorForm {
    Generic,
    /// `alpha = 1/2`: degree drops to `n + 1`.
    HalleyDegenerate,
    /// `alpha = (2n-1)/(2n-2)`: degree drops to `2n - 1`.
    UpperDegenerate,
    /// `alpha = n/(n-1)`: degree stays `2n`, infinity is superattracting.
    NewtonLike,
}

impl OperatorForm {
    /// Forms for which the free critical points exist as a finite set of `n`
    /// points (possibly at infinity).
    pub fn has_free_critical_points(self) -> bool {
        matches!(self, OperatorForm::Generic | OperatorForm::NewtonLike)
    }
}

impl fmt::Display for OperatorForm {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            OperatorForm::Generic => "generic",
            OperatorForm::HalleyDegenerate => "halley-degenerate",
            OperatorForm::UpperDegenerate => "upper-degenerate",
            OperatorForm::NewtonLike => "newton-like",
        })
    }
}

pub(crate) fn halley_alpha() -> f64 {
    0.5
}

pub(crate) fn upper_degenerate_alpha(n: u32) -> f64 {
    let n = f64::from(n);
    (2.0 * n - 1.0) / (2.0 * n - 2.0)
}

pub(crate) fn newton_like_alpha(n: u32) -> f64 {
    let n = f64::from(n);
    n / (n - 1.0)
}

#[inline]
pub(crate) fn near(alpha: Complex, value: f64) -> bool {
    (alpha - Complex::new(value, 0.0)).norm() <= FORM_TOLERANCE
}

pub fn classify_form(p: &FamilyParams) -> OperatorForm {
    let a = p.alpha;
    if near(a, halley_alpha()) {
        OperatorForm::HalleyDegenerate
    } else if near(a, upper_degenerate_alpha(p.n)) {
        OperatorForm::UpperDegenerate
    } else if near(a, newton_like_alpha(p.n)) {
        OperatorForm::NewtonLike
    } else {
        OperatorForm::Generic
    }
}

/// Algebraic degree of the operator after cancellation.
pub fn operator_degree(p: &FamilyParams) -> u32 {
    match classify_form(p) {
        OperatorForm::Generic | OperatorForm::NewtonLike => 2 * p.n,
        OperatorForm::HalleyDegenerate => p.n + 1,
        OperatorForm::UpperDegenerate => 2 * p.n - 1,
    }
}

/// Coefficients of the generic closed form.
#[derive(Clone, Copy, Debug)]
pub(crate) struct GenericCoefficients {
    pub a: Complex,
    pub b: Complex,
    pub c: Complex,
    pub e: Complex,
    pub f: Complex,
    /// constant term of the free-critical factor of the derivative numerator
    pub g: Complex,
    /// linear term of the free-critical factor of the derivative numerator
    pub h: Complex,
}

impl GenericCoefficients {
    pub(crate) fn new(n: u32, alpha: Complex) -> Self {
        let nf = f64::from(n);
        let one = Complex::new(1.0, 0.0);
        let a = (one - 2.0 * alpha) * (nf - 1.0);
        let b = Complex::new(2.0 - 4.0 * nf, 0.0) + alpha * (-4.0 + 6.0 * nf - 2.0 * nf * nf);
        let c = (Complex::new(1.0 - 2.0 * nf, 0.0) + alpha * (2.0 * nf - 2.0)) * (nf - 1.0);
        let e = alpha * (1.0 - nf);
        let f = alpha * (nf - 1.0) - nf;
        let g = alpha * (one - 2.0 * alpha) * ((nf - 1.0) * (nf - 1.0));
        let h = (Complex::new(1.0 - 2.0 * nf, 0.0) + alpha * (2.0 * nf - 2.0)) * f;
        GenericCoefficients {
            a,
            b,
            c,
            e,
            f,
            g,
            h,
        }
    }
}

#[derive(Clone, Copy, Debug)]
enum Kernel {
    Generic(GenericCoefficients),
    Halley,
    Upper,
    NewtonLike,
}

/// A ready-to-iterate operator: parameters classified once, coefficients
/// precomputed.
#[derive(Clone, Copy, Debug)]
pub struct Operator {
    params: FamilyParams,
    form: OperatorForm,
    kernel: Kernel,
    nf: f64,
}

impl Operator {
    pub fn new(params: FamilyParams) -> Self {
        let form = classify_form(&params);
        let kernel = match form {
            OperatorForm::Generic => {
                Kernel::Generic(GenericCoefficients::new(params.n, params.alpha))
            }
            OperatorForm::HalleyDegenerate => Kernel::Halley,
            OperatorForm::UpperDegenerate => Kernel::Upper,
            OperatorForm::NewtonLike => Kernel::NewtonLike,
        };
        Operator {
            params,
            form,
            kernel,
            nf: f64::from(params.n),
        }
    }

    #[inline]
    pub fn params(&self) -> &FamilyParams {
        &self.params
    }

    #[inline]
    pub fn form(&self) -> OperatorForm {
        self.form
    }

    #[inline]
    pub fn n(&self) -> u32 {
        self.params.n
    }

    pub fn degree(&self) -> u32 {
        operator_degree(&self.params)
    }

    /// Image of infinity.
    pub fn image_of_infinity(&self) -> SpherePoint {
        match self.form {
            OperatorForm::UpperDegenerate => SpherePoint::ZERO,
            _ => SpherePoint::Infinity,
        }
    }

    /// `O(z)` on the sphere.
    #[inline]
    pub fn eval(&self, z: SpherePoint) -> SpherePoint {
        match z {
            SpherePoint::Infinity => self.image_of_infinity(),
            SpherePoint::Finite(z) => self.eval_finite(z),
        }
    }

    /// `O(z)` for a finite argument.
    pub fn eval_finite(&self, z: Complex) -> SpherePoint {
        let n = self.params.n;
        let nf = self.nf;
        let one = Complex::new(1.0, 0.0);
        if z.norm_sqr() <= 1.0 {
            let w = z.powu(n);
            if w.re == 0.0 && w.im == 0.0 {
                return self.eval_at_origin(z);
            }
            let value = match &self.kernel {
                Kernel::Generic(k) => {
                    z * (k.a + w * (k.b + w * k.c)) / (2.0 * nf * w * (k.e + k.f * w))
                }
                Kernel::NewtonLike => {
                    z * ((nf + 1.0) + w * (2.0 * (nf * nf - 1.0) - (nf - 1.0) * w))
                        / (2.0 * nf * nf * w)
                }
                Kernel::Halley => z * ((nf + 1.0) + (nf - 1.0) * w) / ((nf - 1.0) + (nf + 1.0) * w),
                Kernel::Upper => z * (one + (2.0 * nf - 1.0) * w) / (w * ((2.0 * nf - 1.0) + w)),
            };
            SpherePoint::from_complex(value)
        } else {
            let u = z.inv();
            let v = u.powu(n);
            let value = match &self.kernel {
                Kernel::Generic(k) => {
                    (k.c + v * (k.b + v * k.a)) / (2.0 * nf * u * (k.f + k.e * v))
                }
                Kernel::NewtonLike => {
                    (v * (2.0 * (nf * nf - 1.0) + (nf + 1.0) * v) - (nf - 1.0))
                        / (2.0 * nf * nf * u * v)
                }
                Kernel::Halley => {
                    ((nf + 1.0) * v + (nf - 1.0)) / (u * ((nf - 1.0) * v + (nf + 1.0)))
                }
                Kernel::Upper => {
                    u.powu(n - 1) * (v + (2.0 * nf - 1.0)) / ((2.0 * nf - 1.0) * v + one)
                }
            };
            SpherePoint::from_complex(value)
        }
    }

    /// Value when `z^n` is exactly zero (the origin, or `z` so small that the
    /// power underflows).
    fn eval_at_origin(&self, z: Complex) -> SpherePoint {
        match self.form {
            OperatorForm::HalleyDegenerate => {
                SpherePoint::from_complex(z * ((self.nf + 1.0) / (self.nf - 1.0)))
            }
            _ => SpherePoint::Infinity,
        }
    }

    /// `O'(z)` for finite `z`.
    ///
    /// Fails at the origin for the forms whose derivative has a pole there.
    /// At the other poles the result is non-finite.
    pub fn derivative(&self, z: Complex) -> Result<Complex> {
        let n = self.params.n;
        let nf = self.nf;
        let one = Complex::new(1.0, 0.0);
        if z.re == 0.0 && z.im == 0.0 {
            return match self.form {
                OperatorForm::HalleyDegenerate => Ok(Complex::new((nf + 1.0) / (nf - 1.0), 0.0)),
                _ => Err(Error::Domain(format!(
                    "derivative of the {} operator has a pole at z = 0",
                    self.form
                ))),
            };
        }
        let value = if z.norm_sqr() <= 1.0 {
            let w = z.powu(n);
            let wm1 = (w - 1.0) * (w - 1.0);
            match &self.kernel {
                Kernel::Generic(k) => {
                    let d = k.e + k.f * w;
                    wm1 * (nf - 1.0) * (k.g + k.h * w) / (2.0 * nf * w * d * d)
                }
                Kernel::NewtonLike => -wm1 * (nf * nf - 1.0) / (2.0 * nf * nf * w),
                Kernel::Halley => {
                    let d = (nf - 1.0) + (nf + 1.0) * w;
                    wm1 * (nf * nf - 1.0) / (d * d)
                }
                Kernel::Upper => {
                    let d = (2.0 * nf - 1.0) + w;
                    -wm1 * (2.0 * nf * nf - 3.0 * nf + 1.0) / (w * d * d)
                }
            }
        } else {
            let v = z.inv().powu(n);
            let vm1 = (one - v) * (one - v);
            match &self.kernel {
                Kernel::Generic(k) => {
                    let d = k.f + k.e * v;
                    vm1 * (nf - 1.0) * (k.h + k.g * v) / (2.0 * nf * d * d)
                }
                Kernel::NewtonLike => -vm1 * (nf * nf - 1.0) / (2.0 * nf * nf * v),
                Kernel::Halley => {
                    let d = (nf - 1.0) * v + (nf + 1.0);
                    vm1 * (nf * nf - 1.0) / (d * d)
                }
                Kernel::Upper => {
                    let d = (2.0 * nf - 1.0) * v + one;
                    -vm1 * v * (2.0 * nf * nf - 3.0 * nf + 1.0) / (d * d)
                }
            }
        };
        Ok(value)
    }

    /// Multiplier of infinity as a fixed point, read off the leading
    /// coefficients. `None` for the upper-degenerate form, where infinity
    /// is not fixed.
    pub fn multiplier_at_infinity(&self) -> Option<Complex> {
        let nf = self.nf;
        match &self.kernel {
            // O(z) ~ (C / 2nF) z near infinity
            Kernel::Generic(k) => Some(2.0 * nf * k.f / k.c),
            Kernel::NewtonLike => Some(Complex::new(0.0, 0.0)),
            Kernel::Halley => Some(Complex::new((nf + 1.0) / (nf - 1.0), 0.0)),
            Kernel::Upper => None,
        }
    }

    /// The map `S` with `S(z^n) = O(z)^n`, evaluated through the principal
    /// `n`-th root of `w`.
    pub fn reduced_map(&self, w: Complex) -> SpherePoint {
        let r = principal_root(w, self.params.n);
        self.eval_finite(r).powu(self.params.n)
    }
}

/// `O(z)` on the sphere.
pub fn eval(p: &FamilyParams, z: SpherePoint) -> SpherePoint {
    Operator::new(*p).eval(z)
}

/// `O'(z)` for finite `z`.
pub fn eval_derivative(p: &FamilyParams, z: Complex) -> Result<Complex> {
    Operator::new(*p).derivative(z)
}

/// The symmetry-reduced map `S`.
pub fn reduced_map(p: &FamilyParams, w: Complex) -> SpherePoint {
    Operator::new(*p).reduced_map(w)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::sphere::{chordal_distance, unit_root};
    use rand::{Rng, SeedableRng};
    use rand_chacha::ChaCha8Rng;

    fn c(re: f64, im: f64) -> Complex {
        Complex::new(re, im)
    }

    fn params(n: u32, a: Complex) -> FamilyParams {
        FamilyParams::new(n, a).unwrap()
    }

    /// Direct transcription of the iteration
    /// `z - (1 + L/(2(1 - alpha L))) f/f'` with `L = f f'' / f'^2`.
    fn iteration_oracle(n: u32, alpha: Complex, z: Complex) -> Complex {
        let nf = f64::from(n);
        let f = z.powu(n) - 1.0;
        let fp = nf * z.powu(n - 1);
        let fpp = nf * (nf - 1.0) * z.powu(n - 2);
        let l = f * fpp / (fp * fp);
        z - (1.0 + 0.5 * l / (1.0 - alpha * l)) * f / fp
    }

    #[test]
    fn rejects_small_degree() {
        assert!(FamilyParams::new(1, c(0.5, 0.0)).is_err());
    }

    #[test]
    fn classification_examples() {
        assert_eq!(
            classify_form(&params(3, c(0.5, 0.0))),
            OperatorForm::HalleyDegenerate
        );
        assert_eq!(
            classify_form(&params(3, c(1.25, 0.0))),
            OperatorForm::UpperDegenerate
        );
        assert_eq!(
            classify_form(&params(3, c(0.2, 1.4))),
            OperatorForm::Generic
        );
        assert_eq!(
            classify_form(&params(3, c(1.5, 0.0))),
            OperatorForm::NewtonLike
        );
        // close but not within tolerance
        assert_eq!(
            classify_form(&params(3, c(0.5 + 1e-12, 0.0))),
            OperatorForm::Generic
        );
    }

    #[test]
    fn degree_examples() {
        assert_eq!(operator_degree(&params(3, c(0.7, 0.0))), 6);
        assert_eq!(operator_degree(&params(3, c(0.5, 0.0))), 4);
        assert_eq!(operator_degree(&params(3, c(1.25, 0.0))), 5);
        assert_eq!(operator_degree(&params(3, c(1.5, 0.0))), 6);
    }

    #[test]
    fn roots_are_fixed() {
        let p = params(3, c(0.7, 0.0));
        let one = SpherePoint::Finite(c(1.0, 0.0));
        assert!(chordal_distance(eval(&p, one), one) < 1e-15);
    }

    #[test]
    fn origin_and_infinity_images() {
        let p = params(3, c(0.7, 0.0));
        assert_eq!(eval(&p, SpherePoint::ZERO), SpherePoint::Infinity);
        assert_eq!(eval(&p, SpherePoint::Infinity), SpherePoint::Infinity);

        let upper = params(3, c(1.25, 0.0));
        assert_eq!(eval(&upper, SpherePoint::ZERO), SpherePoint::Infinity);
        assert_eq!(eval(&upper, SpherePoint::Infinity), SpherePoint::ZERO);

        let halley = params(3, c(0.5, 0.0));
        assert_eq!(eval(&halley, SpherePoint::ZERO), SpherePoint::ZERO);
        assert_eq!(eval(&halley, SpherePoint::Infinity), SpherePoint::Infinity);

        let newton = params(2, c(2.0, 0.0));
        assert_eq!(eval(&newton, SpherePoint::ZERO), SpherePoint::Infinity);
    }

    #[test]
    fn tiny_and_huge_arguments_stay_on_the_sphere() {
        let p = params(10, c(0.3, 0.2));
        let tiny = eval(&p, SpherePoint::Finite(c(1e-40, 1e-40)));
        assert_eq!(tiny, SpherePoint::Infinity);
        let huge = eval(&p, SpherePoint::Finite(c(1e200, -1e200)));
        assert_eq!(huge, SpherePoint::Infinity);
        let big = eval(&p, SpherePoint::Finite(c(1e5, 0.0))).finite().unwrap();
        assert!(big.norm() > 1e4);
    }

    #[test]
    fn closed_forms_match_the_raw_iteration() {
        let mut rng = ChaCha8Rng::seed_from_u64(7);
        for &(n, a) in &[
            (2, c(0.7, 0.0)),
            (3, c(0.2, 1.592)),
            (5, c(-0.4, 0.3)),
            (3, c(0.5, 0.0)),
            (3, c(1.25, 0.0)),
            (4, c(4.0 / 3.0, 0.0)),
            (25, c(0.0, 2.0)),
        ] {
            let op = Operator::new(params(n, a));
            for _ in 0..200 {
                let z = c(rng.gen_range(-2.0..2.0), rng.gen_range(-2.0..2.0));
                if z.norm() < 0.2 {
                    continue;
                }
                let expected = iteration_oracle(n, a, z);
                let got = op.eval_finite(z).finite().unwrap();
                assert!(
                    (got - expected).norm() <= 1e-9 * (1.0 + expected.norm()),
                    "n={n} a={a} z={z}: {got} vs {expected}"
                );
            }
        }
    }

    #[test]
    fn derivative_examples() {
        let p = params(3, c(0.7, 0.0));
        assert!(eval_derivative(&p, c(1.0, 0.0)).unwrap().norm() < 1e-15);
        assert!(matches!(
            eval_derivative(&p, c(0.0, 0.0)),
            Err(Error::Domain(_))
        ));

        let halley = params(2, c(0.5, 0.0));
        for z in [c(1.0, 0.0), c(-1.0, 0.0)] {
            assert!(eval_derivative(&halley, z).unwrap().norm() < 1e-15);
        }
        assert!(eval_derivative(&halley, c(0.0, 0.0)).is_ok());

        // superattracting strange fixed point at alpha = (2n-1)/(n-1)
        let p = params(3, c(2.5, 0.0));
        let num = 1.0 - 2.0 * 2.5 - 3.0 + 2.0 * 2.5 * 3.0;
        let den = 1.0 - 2.0 * 2.5 - 9.0 + 2.0 * 2.5 * 3.0;
        let zstar = principal_root(c(num / den, 0.0), 3);
        assert!(eval_derivative(&p, zstar).unwrap().norm() < 1e-12);
    }

    #[test]
    fn reduced_map_examples() {
        let p = params(3, c(0.7, 0.0));
        let img = reduced_map(&p, c(1.0, 0.0)).finite().unwrap();
        assert!((img - c(1.0, 0.0)).norm() < 1e-15);
        assert_eq!(reduced_map(&p, c(0.0, 0.0)), SpherePoint::Infinity);
    }

    #[test]
    fn infinity_multiplier_matches_chart_derivative() {
        // g(u) = 1/O(1/u); g'(0) = lim O'(z) / (O(z)/z)^2
        for &(n, a) in &[(2, c(2.2, 0.1)), (3, c(0.2, 1.4)), (10, c(1.1, -0.3))] {
            let op = Operator::new(params(n, a));
            let z = c(1e7, 3e6);
            let oz = op.eval_finite(z).finite().unwrap();
            let chart = op.derivative(z).unwrap() / ((oz / z) * (oz / z));
            let lam = op.multiplier_at_infinity().unwrap();
            assert!(
                (chart - lam).norm() < 1e-5 * (1.0 + lam.norm()),
                "{chart} vs {lam}"
            );
        }
    }

    #[test]
    fn symmetry_spot_check() {
        let p = params(5, c(0.3, -0.7));
        let op = Operator::new(p);
        let z = c(0.4, 0.9);
        let xi = unit_root(2, 5);
        let lhs = op.eval_finite(xi * z);
        let rhs = SpherePoint::from_complex(xi * op.eval_finite(z).finite().unwrap());
        assert!(chordal_distance(lhs, rhs) < 1e-12);
    }
}
