//! Closed-form landmarks: fixed points, critical points, multipliers,
//! stability disks and the catalog of bifurcation parameters.

use std::fmt;

use crate::error::{Error, Result};
use crate::operator::{
    classify_form, halley_alpha, near, newton_like_alpha, upper_degenerate_alpha, FamilyParams,
    Operator, OperatorForm,
};
use crate::sphere::{nth_roots, principal_root, Complex, SpherePoint};

/// Threshold on `|multiplier|` used by [`StabilityClass::classify`].
pub const STABILITY_TOLERANCE: f64 = 1e-10;

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub enum StabilityClass {
    Superattracting,
    Attracting,
    Indifferent,
    Repelling,
}

impl StabilityClass {
    pub fn classify(multiplier: Complex) -> Self {
        let m = multiplier.norm();
        if m <= STABILITY_TOLERANCE {
            StabilityClass::Superattracting
        } else if m < 1.0 - STABILITY_TOLERANCE {
            StabilityClass::Attracting
        } else if (m - 1.0).abs() <= STABILITY_TOLERANCE {
            StabilityClass::Indifferent
        } else {
            StabilityClass::Repelling
        }
    }
}

impl fmt::Display for StabilityClass {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            StabilityClass::Superattracting => "superattracting",
            StabilityClass::Attracting => "attracting",
            StabilityClass::Indifferent => "indifferent",
            StabilityClass::Repelling => "repelling",
        })
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub enum FixedPointKind {
    Root,
    Strange,
    InfinityFixed,
}

impl fmt::Display for FixedPointKind {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            FixedPointKind::Root => "root",
            FixedPointKind::Strange => "strange",
            FixedPointKind::InfinityFixed => "infinity",
        })
    }
}

#[derive(Clone, Copy, Debug, PartialEq)]
pub struct FixedPointInfo {
    pub location: SpherePoint,
    pub multiplier: Complex,
    pub kind: FixedPointKind,
    pub stability: StabilityClass,
}

impl FixedPointInfo {
    fn new(location: SpherePoint, multiplier: Complex, kind: FixedPointKind) -> Self {
        FixedPointInfo {
            location,
            multiplier,
            kind,
            stability: StabilityClass::classify(multiplier),
        }
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub enum CriticalKind {
    RootCritical,
    FreeCritical,
    OriginCritical,
    /// Infinity as a critical point of the upper-degenerate form.
    InfinityCritical,
}

impl fmt::Display for CriticalKind {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            CriticalKind::RootCritical => "root",
            CriticalKind::FreeCritical => "free",
            CriticalKind::OriginCritical => "origin",
            CriticalKind::InfinityCritical => "infinity",
        })
    }
}

#[derive(Clone, Copy, Debug, PartialEq)]
pub struct CriticalPointInfo {
    pub location: SpherePoint,
    pub multiplicity: u32,
    pub kind: CriticalKind,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub enum DiskSubject {
    InfinityFixed,
    StrangeFixed,
}

/// Parameters strictly inside make the subject attracting.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct StabilityDisk {
    pub center: Complex,
    pub radius: f64,
    pub subject: DiskSubject,
}

impl StabilityDisk {
    pub fn contains(&self, alpha: Complex) -> bool {
        (alpha - self.center).norm() < self.radius
    }

    /// Point of the boundary circle at angle `theta`.
    pub fn boundary_point(&self, theta: f64) -> Complex {
        self.center + Complex::from_polar(self.radius, theta)
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub enum BifurcationLabel {
    Chebyshev,
    Halley,
    SuperHalley,
    Order4,
    UpperDegenerate,
    NewtonLike,
    SuperattractingStrange,
    PrecriticalPlus,
    PrecriticalMinus,
}

impl fmt::Display for BifurcationLabel {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            BifurcationLabel::Chebyshev => "Chebyshev",
            BifurcationLabel::Halley => "Halley",
            BifurcationLabel::SuperHalley => "SuperHalley",
            BifurcationLabel::Order4 => "Order4",
            BifurcationLabel::UpperDegenerate => "UpperDegenerate",
            BifurcationLabel::NewtonLike => "NewtonLike",
            BifurcationLabel::SuperattractingStrange => "SuperattractingStrange",
            BifurcationLabel::PrecriticalPlus => "PrecriticalPlus",
            BifurcationLabel::PrecriticalMinus => "PrecriticalMinus",
        })
    }
}

#[derive(Clone, Debug, PartialEq)]
pub struct BifurcationCatalogEntry {
    pub alpha: Complex,
    pub label: BifurcationLabel,
    pub description: String,
}

fn real(x: f64) -> Complex {
    Complex::new(x, 0.0)
}

/// The `n` roots of unity, in root-index order.
pub fn roots_of_unity(n: u32) -> Vec<Complex> {
    nth_roots(real(1.0), n)
}

/// Sorts by argument in `(-pi, pi]`.
fn sort_by_argument(points: &mut [Complex]) {
    points.sort_by(|a, b| a.arg().total_cmp(&b.arg()));
}

/// `z^n` of the strange fixed points: `(1-2a-n+2an)/(1-2a-3n+2an)`.
fn strange_power(p: &FamilyParams) -> Result<Complex> {
    let n = f64::from(p.n());
    let a = p.alpha();
    let num = real(1.0 - n) + a * (2.0 * n - 2.0);
    let den = real(1.0 - 3.0 * n) + a * (2.0 * n - 2.0);
    if den.norm() == 0.0 {
        return Err(Error::DegenerateParameter {
            alpha: a,
            reason: "strange fixed points merge with infinity (1-2a-3n+2an = 0)".into(),
        });
    }
    Ok(num / den)
}

/// Multiplier of every strange fixed point, `(4n-2-2a(n-1))/(n-1)`.
pub fn strange_multiplier(p: &FamilyParams) -> Complex {
    let n = f64::from(p.n());
    (real(4.0 * n - 2.0) - p.alpha() * (2.0 * (n - 1.0))) / (n - 1.0)
}

/// The `n` strange fixed points, sorted by argument.
pub fn strange_fixed_points(p: &FamilyParams) -> Result<Vec<Complex>> {
    let mut pts = nth_roots(strange_power(p)?, p.n());
    sort_by_argument(&mut pts);
    Ok(pts)
}

pub fn fixed_points(p: &FamilyParams) -> Result<Vec<FixedPointInfo>> {
    let n = p.n();
    let nf = f64::from(n);
    let op = Operator::new(*p);
    let zero = real(0.0);
    let mut out: Vec<FixedPointInfo> = roots_of_unity(n)
        .into_iter()
        .map(|r| FixedPointInfo::new(SpherePoint::Finite(r), zero, FixedPointKind::Root))
        .collect();

    match op.form() {
        OperatorForm::Generic | OperatorForm::NewtonLike => {
            let lambda = strange_multiplier(p);
            for z in strange_fixed_points(p)? {
                out.push(FixedPointInfo::new(
                    SpherePoint::Finite(z),
                    lambda,
                    FixedPointKind::Strange,
                ));
            }
            let lambda_inf = op.multiplier_at_infinity().expect("infinity is fixed");
            out.push(FixedPointInfo::new(
                SpherePoint::Infinity,
                lambda_inf,
                FixedPointKind::InfinityFixed,
            ));
        }
        OperatorForm::HalleyDegenerate => {
            // strange fixed points collapse onto the origin
            let lambda0 = real((nf + 1.0) / (nf - 1.0));
            out.push(FixedPointInfo::new(
                SpherePoint::ZERO,
                lambda0,
                FixedPointKind::Strange,
            ));
            let lambda_inf = op.multiplier_at_infinity().expect("infinity is fixed");
            out.push(FixedPointInfo::new(
                SpherePoint::Infinity,
                lambda_inf,
                FixedPointKind::InfinityFixed,
            ));
        }
        OperatorForm::UpperDegenerate => {
            // n-th roots of -1; infinity lies on the cycle {0, inf}
            let lambda = real((2.0 * nf - 1.0) / (nf - 1.0));
            let mut pts = nth_roots(real(-1.0), n);
            sort_by_argument(&mut pts);
            for z in pts {
                out.push(FixedPointInfo::new(
                    SpherePoint::Finite(z),
                    lambda,
                    FixedPointKind::Strange,
                ));
            }
        }
    }
    Ok(out)
}

/// `c^n` of the free critical points,
/// `a(n-1)^2(2a-1) / (n(2n-1) - a(4n-1)(n-1) + 2a^2(n-1)^2)`.
///
/// `Ok(None)` when the free critical points sit at infinity.
fn free_critical_power(p: &FamilyParams) -> Result<Option<Complex>> {
    let form = classify_form(p);
    if !form.has_free_critical_points() {
        return Err(Error::DegenerateParameter {
            alpha: p.alpha(),
            reason: format!("the {form} operator has no free critical points"),
        });
    }
    if form == OperatorForm::NewtonLike {
        return Ok(None);
    }
    let n = f64::from(p.n());
    let a = p.alpha();
    let num = a * (2.0 * a - 1.0) * ((n - 1.0) * (n - 1.0));
    let den = real(n * (2.0 * n - 1.0)) - a * ((4.0 * n - 1.0) * (n - 1.0))
        + a * a * (2.0 * (n - 1.0) * (n - 1.0));
    if den.norm() == 0.0 {
        return Err(Error::DegenerateParameter {
            alpha: a,
            reason: "free critical points are undefined (vanishing denominator)".into(),
        });
    }
    let power = num / den;
    if !(power.re.is_finite() && power.im.is_finite()) {
        return Err(Error::DegenerateParameter {
            alpha: a,
            reason: "free critical points overflow".into(),
        });
    }
    Ok(Some(power))
}

/// Free critical point on the principal branch (`xi = 1`).
pub fn principal_free_critical(p: &FamilyParams) -> Result<SpherePoint> {
    Ok(match free_critical_power(p)? {
        Some(w) => SpherePoint::Finite(principal_root(w, p.n())),
        None => SpherePoint::Infinity,
    })
}

/// All `n` free critical points, sorted by argument.
pub fn free_critical_points(p: &FamilyParams) -> Result<Vec<SpherePoint>> {
    Ok(match free_critical_power(p)? {
        Some(w) => {
            let mut pts = nth_roots(w, p.n());
            sort_by_argument(&mut pts);
            pts.into_iter().map(SpherePoint::Finite).collect()
        }
        None => vec![SpherePoint::Infinity; p.n() as usize],
    })
}

pub fn order4_alpha(n: u32) -> Complex {
    let n = f64::from(n);
    real((2.0 * n - 1.0) / (3.0 * n - 3.0))
}

/// Local degree of the roots as superattracting fixed points: 4 at the
/// order-4 parameter, 3 otherwise.
pub fn root_local_degree(p: &FamilyParams) -> u32 {
    if near(p.alpha(), order4_alpha(p.n()).re) {
        4
    } else {
        3
    }
}

/// Critical points with multiplicity.
///
/// Free critical points that coincide with another critical point (the
/// roots at the order-4 parameter, the origin at `alpha = 0`, infinity at
/// the Newton-like parameter) are merged into it, so that the
/// multiplicities always sum to `2 deg - 2`.
pub fn critical_points(p: &FamilyParams) -> Result<Vec<CriticalPointInfo>> {
    let n = p.n();
    let form = classify_form(p);
    let roots = roots_of_unity(n);
    let root_entry = |r: Complex, m: u32| CriticalPointInfo {
        location: SpherePoint::Finite(r),
        multiplicity: m,
        kind: CriticalKind::RootCritical,
    };

    match form {
        OperatorForm::HalleyDegenerate => Ok(roots.into_iter().map(|r| root_entry(r, 2)).collect()),
        OperatorForm::UpperDegenerate => {
            let mut out: Vec<_> = roots.into_iter().map(|r| root_entry(r, 2)).collect();
            if n > 2 {
                out.push(CriticalPointInfo {
                    location: SpherePoint::ZERO,
                    multiplicity: n - 2,
                    kind: CriticalKind::OriginCritical,
                });
                out.push(CriticalPointInfo {
                    location: SpherePoint::Infinity,
                    multiplicity: n - 2,
                    kind: CriticalKind::InfinityCritical,
                });
            }
            Ok(out)
        }
        OperatorForm::Generic | OperatorForm::NewtonLike => {
            let order4 = root_local_degree(p) == 4;
            let free_at_origin = form == OperatorForm::Generic && near(p.alpha(), 0.0);
            let root_mult = if order4 { 3 } else { 2 };
            let mut out: Vec<_> = roots
                .into_iter()
                .map(|r| root_entry(r, root_mult))
                .collect();

            let origin_mult = if free_at_origin { 2 * n - 2 } else { n - 2 };
            if origin_mult > 0 {
                out.push(CriticalPointInfo {
                    location: SpherePoint::ZERO,
                    multiplicity: origin_mult,
                    kind: CriticalKind::OriginCritical,
                });
            }
            if form == OperatorForm::NewtonLike {
                out.push(CriticalPointInfo {
                    location: SpherePoint::Infinity,
                    multiplicity: n,
                    kind: CriticalKind::FreeCritical,
                });
            } else if !order4 && !free_at_origin {
                for c in free_critical_points(p)? {
                    out.push(CriticalPointInfo {
                        location: c,
                        multiplicity: 1,
                        kind: CriticalKind::FreeCritical,
                    });
                }
            }
            Ok(out)
        }
    }
}

/// Stability disks of infinity and of the strange fixed points.
pub fn stability_disks(n: u32) -> (StabilityDisk, StabilityDisk) {
    let nf = f64::from(n);
    let infinity = StabilityDisk {
        center: real((1.0 - 4.0 * nf + 5.0 * nf * nf) / (2.0 * (nf - 1.0) * (2.0 * nf - 1.0))),
        radius: nf / (2.0 * (2.0 * nf - 1.0)),
        subject: DiskSubject::InfinityFixed,
    };
    let strange = StabilityDisk {
        center: real((2.0 * nf - 1.0) / (nf - 1.0)),
        radius: 0.5,
        subject: DiskSubject::StrangeFixed,
    };
    (infinity, strange)
}

/// The special parameters for degree `n`.
pub fn bifurcation_catalog(n: u32) -> Vec<BifurcationCatalogEntry> {
    let nf = f64::from(n);
    let s = (2.0 * (nf - 1.0)).sqrt() / (nf - 1.0);
    let base = 1.0 / (nf - 1.0);
    let origin_note = if n > 2 {
        format!(
            ", where the origin is already critical of multiplicity {}",
            n - 2
        )
    } else {
        String::new()
    };
    let entry = |alpha: Complex, label, description: String| BifurcationCatalogEntry {
        alpha,
        label,
        description,
    };
    vec![
        entry(
            real(0.0),
            BifurcationLabel::Chebyshev,
            format!("Chebyshev's method; free critical points collapse onto z=0{origin_note}, which maps to the fixed point infinity"),
        ),
        entry(
            real(halley_alpha()),
            BifurcationLabel::Halley,
            "Halley's method; degree drops to n+1 and the strange fixed points collapse onto 0 and infinity".into(),
        ),
        entry(real(1.0), BifurcationLabel::SuperHalley, "super-Halley method".into()),
        entry(
            order4_alpha(n),
            BifurcationLabel::Order4,
            "unique member with order of convergence 4; free critical points coincide with the roots".into(),
        ),
        entry(
            real(upper_degenerate_alpha(n)),
            BifurcationLabel::UpperDegenerate,
            if n > 2 {
                "degree drops to 2n-1; {0, infinity} is a superattracting 2-cycle".into()
            } else {
                "degree drops to 2n-1; {0, infinity} is a 2-cycle".into()
            },
        ),
        entry(
            real(newton_like_alpha(n)),
            BifurcationLabel::NewtonLike,
            "infinity is a superattracting fixed point; free critical points sit at infinity".into(),
        ),
        entry(
            real((2.0 * nf - 1.0) / (nf - 1.0)),
            BifurcationLabel::SuperattractingStrange,
            "strange fixed points are superattracting".into(),
        ),
        entry(
            Complex::new(base, s),
            BifurcationLabel::PrecriticalPlus,
            "free critical points map onto z=0, hence onto infinity".into(),
        ),
        entry(
            Complex::new(base, -s),
            BifurcationLabel::PrecriticalMinus,
            "free critical points map onto z=0, hence onto infinity".into(),
        ),
    ]
}
