//! Simultaneous polynomial root finding (Aberth-Ehrlich) and the preimage
//! equations of the operator.

use std::f64::consts::PI;

use crate::error::{Error, Result};
use crate::operator::{FamilyParams, GenericCoefficients, OperatorForm};
use crate::sphere::{Complex, SpherePoint};

/// Relative threshold below which leading coefficients are dropped.
const TRIM_TOLERANCE: f64 = 1e-30;
/// Sweep budget of the Aberth iteration.
pub const MAX_SWEEPS: usize = 500;
/// Acceptance bound on the scaled residual of a returned root.
pub const RESIDUAL_BOUND: f64 = 1e-10;

/// A polynomial with complex coefficients, lowest degree first.
#[derive(Clone, Debug, PartialEq)]
pub struct ComplexPolynomial {
    coefficients: Vec<Complex>,
}

impl ComplexPolynomial {
    /// Builds the polynomial, trimming negligible leading coefficients.
    pub fn new(mut coefficients: Vec<Complex>) -> Self {
        let max = coefficients.iter().map(|c| c.norm()).fold(0.0, f64::max);
        while coefficients.len() > 1 {
            let lead = coefficients[coefficients.len() - 1].norm();
            if lead <= TRIM_TOLERANCE * max {
                coefficients.pop();
            } else {
                break;
            }
        }
        if coefficients.is_empty() {
            coefficients.push(Complex::new(0.0, 0.0));
        }
        ComplexPolynomial { coefficients }
    }

    pub fn coefficients(&self) -> &[Complex] {
        &self.coefficients
    }

    pub fn degree(&self) -> usize {
        self.coefficients.len() - 1
    }

    pub fn max_coefficient(&self) -> f64 {
        self.coefficients
            .iter()
            .map(|c| c.norm())
            .fold(0.0, f64::max)
    }

    /// Horner evaluation.
    pub fn eval(&self, z: Complex) -> Complex {
        self.coefficients
            .iter()
            .rev()
            .fold(Complex::new(0.0, 0.0), |acc, &c| acc * z + c)
    }

    /// `|q(r)| / (max|c_k| max(1,|r|)^deg)`, computed without overflow.
    pub fn scaled_residual(&self, r: Complex) -> f64 {
        let max = self.max_coefficient();
        if max == 0.0 {
            return 0.0;
        }
        if r.norm() <= 1.0 {
            self.eval(r).norm() / max
        } else {
            // |q(r)| / |r|^d is the reversed polynomial at 1/r
            let y = r.inv();
            self.coefficients
                .iter()
                .fold(Complex::new(0.0, 0.0), |acc, &c| acc * y + c)
                .norm()
                / max
        }
    }

    /// Newton ratio `q(z)/q'(z)`, evaluated through the reversed polynomial
    /// when `|z| > 1`.
    fn newton_ratio(&self, z: Complex) -> Complex {
        let zero = Complex::new(0.0, 0.0);
        let d = self.degree() as f64;
        if z.norm() <= 1.0 {
            let mut p = zero;
            let mut dp = zero;
            for &c in self.coefficients.iter().rev() {
                dp = dp * z + p;
                p = p * z + c;
            }
            p / dp
        } else {
            // q(z) = z^d r(y), y = 1/z, r(y) = sum c_{d-k} y^k
            // q'/q = (d - y r'(y)/r(y)) / z
            let y = z.inv();
            let mut r = zero;
            let mut dr = zero;
            for &c in self.coefficients.iter() {
                dr = dr * y + r;
                r = r * y + c;
            }
            z / (d - y * dr / r)
        }
    }

    /// Exact division by `(z - root)`, discarding the remainder.
    pub fn deflate(&self, root: Complex) -> ComplexPolynomial {
        let d = self.degree();
        if d == 0 {
            return self.clone();
        }
        let mut quotient = vec![Complex::new(0.0, 0.0); d];
        let mut acc = Complex::new(0.0, 0.0);
        for k in (1..=d).rev() {
            acc = acc * root + self.coefficients[k];
            quotient[k - 1] = acc;
        }
        ComplexPolynomial {
            coefficients: quotient,
        }
    }
}

/// Radius of the root-free exterior: the unique positive root of
/// `|c_d| x^d = sum_{k<d} |c_k| x^k`.
pub fn cauchy_bound(q: &ComplexPolynomial) -> f64 {
    let d = q.degree();
    let lead = q.coefficients[d].norm();
    let ratios: Vec<f64> = q.coefficients[..d]
        .iter()
        .map(|c| c.norm() / lead)
        .collect();
    // f(x) = sum_k ratios[k] x^(k-d) is decreasing; find f(x) = 1 by bisection on log x
    let f = |lx: f64| -> f64 {
        ratios
            .iter()
            .enumerate()
            .filter(|(_, &r)| r > 0.0)
            .map(|(k, &r)| (r.ln() + (k as f64 - d as f64) * lx).exp())
            .sum()
    };
    if ratios.iter().all(|&r| r == 0.0) {
        return 0.0;
    }
    let (mut lo, mut hi) = (-1.0f64, 1.0f64);
    while f(lo) < 1.0 {
        lo -= 1.0 + lo.abs();
    }
    while f(hi) > 1.0 {
        hi += 1.0 + hi.abs();
    }
    for _ in 0..80 {
        let mid = 0.5 * (lo + hi);
        if f(mid) > 1.0 {
            lo = mid;
        } else {
            hi = mid;
        }
    }
    hi.exp()
}

/// All roots of `q`, with multiplicity.
///
/// Exact zero roots (vanishing low-order coefficients) are split off first;
/// the remaining factor is solved by the Aberth-Ehrlich iteration started on
/// a perturbed circle of radius [`cauchy_bound`] and finished with guarded
/// Newton steps.
pub fn all_roots(q: &ComplexPolynomial) -> Result<Vec<Complex>> {
    let d = q.degree();
    if d == 0 {
        return Err(Error::Domain(
            "all_roots needs a polynomial of degree >= 1".into(),
        ));
    }
    let zeros = q
        .coefficients
        .iter()
        .take_while(|c| c.re == 0.0 && c.im == 0.0)
        .count();
    let mut roots = vec![Complex::new(0.0, 0.0); zeros];
    let reduced = ComplexPolynomial {
        coefficients: q.coefficients[zeros..].to_vec(),
    };
    if reduced.degree() == 0 {
        return Ok(roots);
    }
    if reduced.degree() == 1 {
        let c = &reduced.coefficients;
        roots.push(-c[0] / c[1]);
        return Ok(roots);
    }

    let found = aberth(&reduced)?;
    roots.extend(found);
    Ok(roots)
}

fn aberth(q: &ComplexPolynomial) -> Result<Vec<Complex>> {
    let d = q.degree();
    let radius = cauchy_bound(q);
    // angular offset breaks the n-fold symmetry of the preimage equations
    let mut z: Vec<Complex> = (0..d)
        .map(|k| Complex::from_polar(radius, 2.0 * PI * k as f64 / d as f64 + 0.4))
        .collect();
    let mut done = vec![false; d];
    let eps = f64::EPSILON;
    let mut sweeps = 0;

    while sweeps < MAX_SWEEPS && done.iter().any(|&x| !x) {
        sweeps += 1;
        for i in 0..d {
            if done[i] {
                continue;
            }
            let zi = z[i];
            let ratio = q.newton_ratio(zi);
            if !(ratio.re.is_finite() && ratio.im.is_finite()) {
                // landed on a root exactly, or q' vanished
                if q.eval(zi).norm() == 0.0 {
                    done[i] = true;
                    continue;
                }
                z[i] = zi + Complex::from_polar(1e-8 * (1.0 + zi.norm()), 0.7 * i as f64);
                continue;
            }
            let repulsion: Complex = (0..d)
                .filter(|&j| j != i)
                .map(|j| {
                    let diff = zi - z[j];
                    if diff.norm() == 0.0 {
                        Complex::new(0.0, 0.0)
                    } else {
                        diff.inv()
                    }
                })
                .sum();
            let step = ratio / (Complex::new(1.0, 0.0) - ratio * repulsion);
            let next = zi - step;
            if next.re.is_finite() && next.im.is_finite() {
                z[i] = next;
            }
            if step.norm() <= 4.0 * eps * (1.0 + z[i].norm())
                || q.scaled_residual(z[i]) <= 1e-3 * RESIDUAL_BOUND
            {
                done[i] = true;
            }
        }
    }

    // guarded Newton polish: accept a step only if the residual drops
    for zi in z.iter_mut() {
        for _ in 0..3 {
            let ratio = q.newton_ratio(*zi);
            if !(ratio.re.is_finite() && ratio.im.is_finite()) {
                break;
            }
            let cand = *zi - ratio;
            if q.scaled_residual(cand) < q.scaled_residual(*zi) {
                *zi = cand;
            } else {
                break;
            }
        }
    }

    let residuals: Vec<f64> = z.iter().map(|&r| q.scaled_residual(r)).collect();
    let worst = residuals.iter().cloned().fold(0.0, f64::max);
    if worst > RESIDUAL_BOUND {
        return Err(Error::NoConvergence {
            sweeps,
            worst,
            roots: z,
            residuals,
        });
    }
    Ok(z)
}

/// Numerator and denominator of `O` as polynomials in `z`.
pub fn operator_polynomials(p: &FamilyParams) -> (ComplexPolynomial, ComplexPolynomial) {
    let n = p.n() as usize;
    let nf = f64::from(p.n());
    let zero = Complex::new(0.0, 0.0);
    let real = |x: f64| Complex::new(x, 0.0);
    let mut num = vec![zero; 2 * n + 1];
    let mut den = vec![zero; 2 * n + 1];
    match p.form() {
        OperatorForm::Generic => {
            let k = GenericCoefficients::new(p.n(), p.alpha());
            num[0] = k.a;
            num[n] = k.b;
            num[2 * n] = k.c;
            den[n - 1] = 2.0 * nf * k.e;
            den[2 * n - 1] = 2.0 * nf * k.f;
        }
        OperatorForm::NewtonLike => {
            num[0] = real(nf + 1.0);
            num[n] = real(2.0 * (nf * nf - 1.0));
            num[2 * n] = real(-(nf - 1.0));
            den[n - 1] = real(2.0 * nf * nf);
        }
        OperatorForm::HalleyDegenerate => {
            num[1] = real(nf + 1.0);
            num[n + 1] = real(nf - 1.0);
            den[0] = real(nf - 1.0);
            den[n] = real(nf + 1.0);
        }
        OperatorForm::UpperDegenerate => {
            num[0] = real(1.0);
            num[n] = real(2.0 * nf - 1.0);
            den[n - 1] = real(2.0 * nf - 1.0);
            den[2 * n - 1] = real(1.0);
        }
    }
    (ComplexPolynomial::new(num), ComplexPolynomial::new(den))
}

/// Polynomial whose roots are the finite solutions of `O(z) = w`.
pub fn preimage_polynomial(p: &FamilyParams, w: SpherePoint) -> ComplexPolynomial {
    let (num, den) = operator_polynomials(p);
    match w {
        SpherePoint::Infinity => den,
        SpherePoint::Finite(w) => {
            let len = num.coefficients.len().max(den.coefficients.len());
            let coeff = |poly: &ComplexPolynomial, k: usize| {
                poly.coefficients
                    .get(k)
                    .copied()
                    .unwrap_or(Complex::new(0.0, 0.0))
            };
            ComplexPolynomial::new(
                (0..len)
                    .map(|k| coeff(&num, k) - w * coeff(&den, k))
                    .collect(),
            )
        }
    }
}

/// All finite solutions of `O(z) = w`, with multiplicity.
pub fn preimages(p: &FamilyParams, w: SpherePoint) -> Result<Vec<Complex>> {
    all_roots(&preimage_polynomial(p, w))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::operator::Operator;
    use crate::sphere::{chordal_distance, nth_roots};
    use rand::{Rng, SeedableRng};
    use rand_chacha::ChaCha8Rng;

    fn c(re: f64, im: f64) -> Complex {
        Complex::new(re, im)
    }

    fn sorted(mut v: Vec<Complex>) -> Vec<Complex> {
        v.sort_by(|a, b| a.re.total_cmp(&b.re).then(a.im.total_cmp(&b.im)));
        v
    }

    #[test]
    fn trims_negligible_leading_terms() {
        let q = ComplexPolynomial::new(vec![c(1.0, 0.0), c(2.0, 0.0), c(1e-40, 0.0)]);
        assert_eq!(q.degree(), 1);
    }

    #[test]
    fn simple_roots() {
        let r = sorted(
            all_roots(&ComplexPolynomial::new(vec![
                c(1.0, 0.0),
                c(0.0, 0.0),
                c(1.0, 0.0),
            ]))
            .unwrap(),
        );
        assert!((r[0] - c(0.0, -1.0)).norm() < 1e-14);
        assert!((r[1] - c(0.0, 1.0)).norm() < 1e-14);

        let r = all_roots(&ComplexPolynomial::new(vec![
            c(-1.0, 0.0),
            c(0.0, 0.0),
            c(0.0, 0.0),
            c(1.0, 0.0),
        ]))
        .unwrap();
        for u in nth_roots(c(1.0, 0.0), 3) {
            assert!(r.iter().any(|x| (x - u).norm() < 1e-14));
        }
    }

    #[test]
    fn zero_roots_are_split_exactly() {
        let q = ComplexPolynomial::new(vec![
            c(0.0, 0.0),
            c(0.0, 0.0),
            c(-4.0, 0.0),
            c(0.0, 0.0),
            c(1.0, 0.0),
        ]);
        let r = all_roots(&q).unwrap();
        assert_eq!(r.iter().filter(|z| z.norm() == 0.0).count(), 2);
        assert_eq!(r.len(), 4);
    }

    #[test]
    fn preimage_of_zero_matches_numerator() {
        let a = c(0.3, 0.4);
        let p = FamilyParams::new(3, a).unwrap();
        let q = preimage_polynomial(&p, SpherePoint::ZERO);
        assert_eq!(q.degree(), 6);
        let n = 3.0;
        let k = q.coefficients();
        assert!((k[0] - (1.0 - 2.0 * a) * (n - 1.0)).norm() < 1e-15);
        assert!((k[3] - (2.0 - 4.0 * a - 4.0 * n + 6.0 * a * n - 2.0 * a * n * n)).norm() < 1e-14);
        assert!((k[6] - (n - 1.0) * (1.0 - 2.0 * a - 2.0 * n + 2.0 * a * n)).norm() < 1e-14);
    }

    #[test]
    fn preimages_of_infinity() {
        let a = c(0.3, 0.4);
        let p = FamilyParams::new(3, a).unwrap();
        let r = preimages(&p, SpherePoint::Infinity).unwrap();
        assert_eq!(r.len(), 5);
        assert_eq!(r.iter().filter(|z| z.norm() == 0.0).count(), 2);
        let target = -a * (1.0 - 3.0) / (a * (3.0 - 1.0) - 3.0);
        for u in nth_roots(target, 3) {
            assert!(r.iter().any(|x| (x - u).norm() < 1e-12));
        }
    }

    #[test]
    fn one_is_a_triple_preimage_of_itself() {
        let p = FamilyParams::new(2, c(0.7, 0.0)).unwrap();
        let r = preimages(&p, SpherePoint::Finite(c(1.0, 0.0))).unwrap();
        assert_eq!(r.len(), 4);
        assert_eq!(r.iter().filter(|z| (*z - 1.0).norm() < 1e-3).count(), 3);

        let p = FamilyParams::new(3, c(0.2, 1.592)).unwrap();
        let r = preimages(&p, SpherePoint::Finite(c(1.0, 0.0))).unwrap();
        assert_eq!(r.len(), 6);
        let q = preimage_polynomial(&p, SpherePoint::Finite(c(1.0, 0.0)));
        for z in &r {
            assert!(q.scaled_residual(*z) <= RESIDUAL_BOUND);
        }
        assert_eq!(r.iter().filter(|z| (*z - 1.0).norm() < 1e-3).count(), 3);
        assert_eq!(r.iter().filter(|z| (*z - 1.0).norm() > 1e-2).count(), 3);
    }

    #[test]
    fn deflation_divides_out_a_root() {
        let q = ComplexPolynomial::new(vec![c(-6.0, 0.0), c(11.0, 0.0), c(-6.0, 0.0), c(1.0, 0.0)]);
        let d = q.deflate(c(1.0, 0.0));
        assert_eq!(d.coefficients(), &[c(6.0, 0.0), c(-5.0, 0.0), c(1.0, 0.0)]);
    }

    #[test]
    fn cauchy_bound_encloses_roots() {
        let q = ComplexPolynomial::new(vec![c(-6.0, 0.0), c(11.0, 0.0), c(-6.0, 0.0), c(1.0, 0.0)]);
        let b = cauchy_bound(&q);
        assert!((3.0..20.0).contains(&b), "{b}");
    }

    #[test]
    fn random_polynomials() {
        let mut rng = ChaCha8Rng::seed_from_u64(11);
        for trial in 0..500 {
            let d = rng.gen_range(1..=60);
            let coeffs: Vec<Complex> = (0..=d)
                .map(|_| c(rng.gen_range(-1.0..1.0), rng.gen_range(-1.0..1.0)))
                .collect();
            let q = ComplexPolynomial::new(coeffs);
            let roots = all_roots(&q).unwrap_or_else(|e| panic!("trial {trial}: {e}"));
            assert_eq!(roots.len(), q.degree());
            for r in &roots {
                assert!(q.scaled_residual(*r) <= RESIDUAL_BOUND);
            }
            let k = q.coefficients();
            let dd = q.degree();
            let vieta = -k[dd - 1] / k[dd];
            let sum: Complex = roots.iter().sum();
            assert!(
                (sum - vieta).norm() <= 1e-8 * vieta.norm().max(1.0),
                "trial {trial}: {sum} vs {vieta}"
            );
        }
    }

    #[test]
    fn preimages_map_back_to_target() {
        let mut rng = ChaCha8Rng::seed_from_u64(5);
        for _ in 0..100 {
            let n = rng.gen_range(2..=12);
            let a = c(rng.gen_range(-1.0..3.0), rng.gen_range(-2.0..2.0));
            let p = FamilyParams::new(n, a).unwrap();
            let w = c(rng.gen_range(-2.0..2.0), rng.gen_range(-2.0..2.0));
            let op = Operator::new(p);
            let roots = preimages(&p, SpherePoint::Finite(w)).unwrap();
            assert_eq!(roots.len() as u32, p.degree());
            for r in roots {
                let d = chordal_distance(op.eval_finite(r), SpherePoint::Finite(w));
                assert!(d < 1e-7, "n={n} a={a} w={w} r={r} d={d}");
            }
        }
    }
}
