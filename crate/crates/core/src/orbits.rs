//! Orbit iteration, convergence to the roots, cycle detection and
//! convergence-order estimation.

use std::f64::consts::PI;

use crate::error::{Error, Result};
use crate::landmarks::{principal_free_critical, roots_of_unity};
use crate::operator::{FamilyParams, Operator};
use crate::polyroots::{operator_polynomials, ComplexPolynomial};
use crate::sphere::{chordal_distance, Complex, SpherePoint};

pub const DEFAULT_ROOT_TOLERANCE: f64 = 1e-4;
pub const DEFAULT_POINT_TOLERANCE: f64 = 1e-8;
/// Errors below this are too close to rounding noise to enter the order
/// estimate.
pub const ORDER_ERROR_FLOOR: f64 = 1e-13;

#[derive(Clone, Copy, Debug, PartialEq)]
pub struct IterationBudget {
    pub max_iterations: u32,
    pub root_tolerance: f64,
    pub cycle_detection: bool,
    pub point_tolerance: f64,
}

impl IterationBudget {
    /// 150 iterations, used for parameter-plane pictures.
    pub fn parameter_plane() -> Self {
        IterationBudget {
            max_iterations: 150,
            root_tolerance: DEFAULT_ROOT_TOLERANCE,
            cycle_detection: false,
            point_tolerance: DEFAULT_POINT_TOLERANCE,
        }
    }

    /// 75 iterations, used for dynamical-plane pictures.
    pub fn dynamical_plane() -> Self {
        IterationBudget {
            max_iterations: 75,
            ..Self::parameter_plane()
        }
    }

    pub fn with_max_iterations(self, max_iterations: u32) -> Self {
        IterationBudget {
            max_iterations,
            ..self
        }
    }

    pub fn with_cycle_detection(self, on: bool) -> Self {
        IterationBudget {
            cycle_detection: on,
            ..self
        }
    }
}

impl Default for IterationBudget {
    fn default() -> Self {
        Self::parameter_plane()
    }
}

#[derive(Clone, Copy, Debug, PartialEq)]
pub enum OrbitOutcome {
    ConvergedToRoot {
        root_index: usize,
        iterations: u32,
    },
    ConvergedToPoint {
        location: SpherePoint,
        iterations: u32,
    },
    CycleDetected {
        period: u32,
        representative: SpherePoint,
        multiplier_estimate: Complex,
    },
    MaxIterations {
        last: SpherePoint,
    },
}

impl OrbitOutcome {
    pub fn root_index(&self) -> Option<usize> {
        match self {
            OrbitOutcome::ConvergedToRoot { root_index, .. } => Some(*root_index),
            _ => None,
        }
    }
}

/// An operator together with its roots, reusable across many orbits.
#[derive(Clone, Debug)]
pub struct OrbitEngine {
    op: Operator,
    roots: Vec<Complex>,
    budget: IterationBudget,
}

impl OrbitEngine {
    pub fn new(p: FamilyParams, budget: IterationBudget) -> Self {
        OrbitEngine {
            op: Operator::new(p),
            roots: roots_of_unity(p.n()),
            budget,
        }
    }

    pub fn operator(&self) -> &Operator {
        &self.op
    }

    pub fn budget(&self) -> &IterationBudget {
        &self.budget
    }

    /// Index of the root within tolerance of `z`, if any. Only the root
    /// nearest in argument can qualify since the tolerance is far below the
    /// root spacing.
    #[inline]
    fn root_hit(&self, z: SpherePoint) -> Option<usize> {
        let z = z.finite()?;
        let n = self.roots.len();
        let k = (z.arg() * n as f64 / (2.0 * PI)).round() as i64;
        let k = k.rem_euclid(n as i64) as usize;
        if (z - self.roots[k]).norm() < self.budget.root_tolerance {
            Some(k)
        } else {
            None
        }
    }

    /// Iterates from `seed` until a root is hit, a fixed point or cycle is
    /// found, or the budget runs out.
    pub fn run(&self, seed: SpherePoint) -> OrbitOutcome {
        let b = &self.budget;
        let mut z = seed;
        if let Some(k) = self.root_hit(z) {
            return OrbitOutcome::ConvergedToRoot {
                root_index: k,
                iterations: 0,
            };
        }
        // Brent's cycle finding: the tortoise jumps to the hare at powers of two
        let mut tortoise = z;
        let mut power = 1u32;
        let mut lam = 0u32;
        for it in 1..=b.max_iterations {
            let prev = z;
            z = self.op.eval(z);
            if let Some(k) = self.root_hit(z) {
                return OrbitOutcome::ConvergedToRoot {
                    root_index: k,
                    iterations: it,
                };
            }
            // infinity is reported once it repeats
            if prev.is_infinite() && z.is_infinite() {
                return OrbitOutcome::ConvergedToPoint {
                    location: z,
                    iterations: it,
                };
            }
            if b.cycle_detection {
                lam += 1;
                if chordal_distance(tortoise, z) < b.point_tolerance {
                    let period = self.minimal_period(z, lam);
                    if period == 1 {
                        return OrbitOutcome::ConvergedToPoint {
                            location: z,
                            iterations: it,
                        };
                    }
                    return OrbitOutcome::CycleDetected {
                        period,
                        representative: z,
                        multiplier_estimate: self.cycle_multiplier(z, period),
                    };
                }
                if lam == power {
                    tortoise = z;
                    power *= 2;
                    lam = 0;
                }
            }
        }
        OrbitOutcome::MaxIterations { last: z }
    }

    fn iterate(&self, z: SpherePoint, k: u32) -> SpherePoint {
        (0..k).fold(z, |acc, _| self.op.eval(acc))
    }

    fn minimal_period(&self, z: SpherePoint, lam: u32) -> u32 {
        (1..lam)
            .filter(|d| lam.is_multiple_of(*d))
            .find(|&d| chordal_distance(self.iterate(z, d), z) < self.budget.point_tolerance)
            .unwrap_or(lam)
    }

    /// Product of derivatives along one period. Cycles through the origin or
    /// infinity fall back to a central difference of the return map in a
    /// chart around `z`.
    pub fn cycle_multiplier(&self, z: SpherePoint, period: u32) -> Complex {
        let mut product = Complex::new(1.0, 0.0);
        let mut w = z;
        for _ in 0..period {
            let d = match w {
                SpherePoint::Finite(x) => self.op.derivative(x).ok(),
                SpherePoint::Infinity => None,
            };
            match d {
                Some(d) if d.re.is_finite() && d.im.is_finite() && w != SpherePoint::ZERO => {
                    product *= d
                }
                _ => return self.chart_multiplier(z, period),
            }
            w = self.op.eval(w);
        }
        product
    }

    fn chart_multiplier(&self, z: SpherePoint, period: u32) -> Complex {
        let outer = match z {
            SpherePoint::Finite(x) => x.norm() > 1.0,
            SpherePoint::Infinity => true,
        };
        let base = match z {
            SpherePoint::Finite(x) if outer => x.inv(),
            SpherePoint::Finite(x) => x,
            SpherePoint::Infinity => Complex::new(0.0, 0.0),
        };
        let to_sphere = |t: Complex| {
            if outer {
                SpherePoint::Finite(t).recip()
            } else {
                SpherePoint::Finite(t)
            }
        };
        let to_chart = |s: SpherePoint| -> Complex {
            let s = if outer { s.recip() } else { s };
            s.finite().unwrap_or(Complex::new(f64::INFINITY, 0.0))
        };
        let h = 1e-7;
        let g = |t: Complex| to_chart(self.iterate(to_sphere(base + t), period));
        (g(Complex::new(h, 0.0)) - g(Complex::new(-h, 0.0))) / (2.0 * h)
    }
}

pub fn iterate_orbit(
    p: &FamilyParams,
    seed: SpherePoint,
    budget: &IterationBudget,
) -> OrbitOutcome {
    OrbitEngine::new(*p, *budget).run(seed)
}

/// Fate of the principal free critical point. By symmetry it stands for all
/// of the free critical points.
pub fn critical_orbit_fate(p: &FamilyParams, budget: &IterationBudget) -> Result<OrbitOutcome> {
    let c = principal_free_critical(p)?;
    Ok(iterate_orbit(p, c, budget))
}

/// Error map near the root 1: writing `z = 1 + eta`, returns
/// `O(z) - 1 = eta^3 R(z) / D(z)` with `R = (N - D) / (z - 1)^3`.
/// The factored form keeps full relative accuracy for tiny `eta`.
struct ErrorMap {
    r: ComplexPolynomial,
    d: ComplexPolynomial,
}

impl ErrorMap {
    fn new(p: &FamilyParams) -> Self {
        let (num, den) = operator_polynomials(p);
        let len = num.coefficients().len().max(den.coefficients().len());
        let get = |q: &ComplexPolynomial, k: usize| {
            q.coefficients()
                .get(k)
                .copied()
                .unwrap_or(Complex::new(0.0, 0.0))
        };
        let diff = ComplexPolynomial::new((0..len).map(|k| get(&num, k) - get(&den, k)).collect());
        let one = Complex::new(1.0, 0.0);
        let r = diff.deflate(one).deflate(one).deflate(one);
        ErrorMap { r, d: den }
    }

    fn apply(&self, eta: Complex) -> Complex {
        let z = Complex::new(1.0, 0.0) + eta;
        eta * eta * eta * self.r.eval(z) / self.d.eval(z)
    }
}

/// Error sequence and exponent estimates behind an order estimate.
#[derive(Clone, Debug, PartialEq)]
pub struct OrderEstimate {
    /// Median of `estimates`.
    pub order: f64,
    /// `e_k = |z_k - xi|`, starting from the seed.
    pub errors: Vec<f64>,
    /// `log(e_{k+1}/e_k) / log(e_k/e_{k-1})` for each usable triple.
    pub estimates: Vec<f64>,
}

/// Numerical order of convergence to the root `xi^root_index` from the seed
/// `xi (1 + initial_offset)`: the median of
/// `log(e_{k+1}/e_k) / log(e_k/e_{k-1})` over the triples whose middle error
/// is still above [`ORDER_ERROR_FLOOR`].
pub fn estimate_convergence_order(
    p: &FamilyParams,
    root_index: usize,
    initial_offset: f64,
) -> Result<f64> {
    Ok(convergence_order_details(p, root_index, initial_offset)?.order)
}

pub fn convergence_order_details(
    p: &FamilyParams,
    root_index: usize,
    initial_offset: f64,
) -> Result<OrderEstimate> {
    if !(initial_offset > 0.0 && initial_offset.is_finite()) {
        return Err(Error::InvalidParameter(
            "initial offset must be a positive real".into(),
        ));
    }
    let n = p.n() as usize;
    if root_index >= n {
        return Err(Error::InvalidParameter(format!(
            "root index {root_index} out of range for n = {n}"
        )));
    }
    let xi = roots_of_unity(p.n())[root_index];
    let seed = SpherePoint::Finite(xi * (1.0 + initial_offset));
    let budget = IterationBudget::parameter_plane();
    if iterate_orbit(p, seed, &budget).root_index() != Some(root_index) {
        return Err(Error::BasinEscape { root_index });
    }

    // by the rotation symmetry the error sequence does not depend on xi
    let map = ErrorMap::new(p);
    let mut eta = Complex::new(initial_offset, 0.0);
    let mut errors = vec![eta.norm()];
    while errors.len() < 40 {
        let last = *errors.last().unwrap();
        if last < ORDER_ERROR_FLOOR {
            break;
        }
        eta = map.apply(eta);
        let e = eta.norm();
        if !(e > 0.0 && e.is_finite()) {
            break;
        }
        errors.push(e);
    }

    let estimates: Vec<f64> = errors
        .windows(3)
        .filter(|w| w[1] >= ORDER_ERROR_FLOOR && w[0] > w[1] && w[1] > w[2])
        .map(|w| (w[2] / w[1]).ln() / (w[1] / w[0]).ln())
        .collect();
    if estimates.is_empty() {
        return Err(Error::Domain(format!(
            "no usable error triple from offset {initial_offset}; errors {errors:?}"
        )));
    }
    let mut sorted = estimates.clone();
    sorted.sort_by(f64::total_cmp);
    let m = sorted.len();
    let order = if m % 2 == 1 {
        sorted[m / 2]
    } else {
        0.5 * (sorted[m / 2 - 1] + sorted[m / 2])
    };
    Ok(OrderEstimate {
        order,
        errors,
        estimates,
    })
}
