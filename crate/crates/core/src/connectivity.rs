//! Numerical test of Julia-set connectivity through the immediate basin of
//! a root: the Julia set is disconnected exactly when that basin holds a
//! critical point other than the root and no preimage of the root besides
//! the root itself.

use std::fmt;

use crate::error::{Error, Result};
use crate::landmarks::principal_free_critical;
use crate::operator::FamilyParams;
use crate::orbits::{critical_orbit_fate, IterationBudget, OrbitEngine, OrbitOutcome};
use crate::parallel::{default_workers, fill_rows};
use crate::polyroots::preimages;
use crate::sphere::{unit_root, Complex, SpherePoint};

/// Roots of `O(z) = 1` closer than this to 1 belong to the self-preimage
/// cluster.
pub const CLUSTER_RADIUS: f64 = 1e-3;
/// Relative padding of the grid around the points of interest.
pub const REGION_MARGIN: f64 = 0.2;
/// How many times the resolution is doubled before giving up.
pub const MAX_DOUBLINGS: u32 = 3;
/// Pixels closer than this (in pixels) to a foreign label make a membership
/// test ambiguous.
pub const AMBIGUITY_RADIUS: usize = 2;

/// Budget used for basin labelling inside [`classify_julia`].
pub fn classifier_budget() -> IterationBudget {
    IterationBudget::dynamical_plane().with_max_iterations(250)
}

/// Axis-aligned rectangle of the complex plane.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct Region {
    pub center: Complex,
    pub width: f64,
    pub height: f64,
}

impl Region {
    pub fn new(center: Complex, width: f64, height: f64) -> Result<Self> {
        if !(width > 0.0 && height > 0.0 && width.is_finite() && height.is_finite()) {
            return Err(Error::InvalidParameter(format!(
                "degenerate region {width} x {height}"
            )));
        }
        Ok(Region {
            center,
            width,
            height,
        })
    }

    pub fn from_bounds(xmin: f64, xmax: f64, ymin: f64, ymax: f64) -> Result<Self> {
        Region::new(
            Complex::new(0.5 * (xmin + xmax), 0.5 * (ymin + ymax)),
            xmax - xmin,
            ymax - ymin,
        )
    }

    /// Smallest square holding `points`, padded by `margin` times its side
    /// on every edge.
    pub fn enclosing(points: &[Complex], margin: f64) -> Result<Self> {
        let (mut xmin, mut xmax) = (f64::INFINITY, f64::NEG_INFINITY);
        let (mut ymin, mut ymax) = (f64::INFINITY, f64::NEG_INFINITY);
        for z in points {
            xmin = xmin.min(z.re);
            xmax = xmax.max(z.re);
            ymin = ymin.min(z.im);
            ymax = ymax.max(z.im);
        }
        let side = (xmax - xmin).max(ymax - ymin).max(0.5);
        let side = side * (1.0 + 2.0 * margin);
        Region::new(
            Complex::new(0.5 * (xmin + xmax), 0.5 * (ymin + ymax)),
            side,
            side,
        )
    }

    pub fn xmin(&self) -> f64 {
        self.center.re - 0.5 * self.width
    }

    pub fn ymax(&self) -> f64 {
        self.center.im + 0.5 * self.height
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum BasinLabel {
    RootBasin(u32),
    NonConverged,
}

/// Per-pixel basin labels on a square pixel grid and their 4-connected
/// components.
#[derive(Clone, Debug)]
pub struct BasinGrid {
    pub region: Region,
    pub resolution: usize,
    pub labels: Vec<BasinLabel>,
    /// Component id per pixel, `None` on non-converged pixels.
    pub components: Vec<Option<u32>>,
}

impl BasinGrid {
    fn dx(&self) -> f64 {
        self.region.width / self.resolution as f64
    }

    fn dy(&self) -> f64 {
        self.region.height / self.resolution as f64
    }

    /// Center of pixel `(i, j)`; row 0 is the top edge.
    pub fn pixel_center(&self, i: usize, j: usize) -> Complex {
        pixel_center(&self.region, self.resolution, i, j)
    }

    /// Pixel containing `z`, if inside the region.
    pub fn pixel_of(&self, z: Complex) -> Option<(usize, usize)> {
        let fi = ((z.re - self.region.xmin()) / self.dx()).floor();
        let fj = ((self.region.ymax() - z.im) / self.dy()).floor();
        let r = self.resolution as f64;
        if fi >= 0.0 && fj >= 0.0 && fi < r && fj < r {
            Some((fi as usize, fj as usize))
        } else {
            None
        }
    }

    pub fn label(&self, i: usize, j: usize) -> BasinLabel {
        self.labels[j * self.resolution + i]
    }

    pub fn component(&self, i: usize, j: usize) -> Option<u32> {
        self.components[j * self.resolution + i]
    }

    pub fn component_of(&self, z: Complex) -> Option<u32> {
        self.pixel_of(z).and_then(|(i, j)| self.component(i, j))
    }

    /// Components built from interior pixels only (all 8 neighbours share
    /// the label). Two components of one basin that touch at a single
    /// Julia point are merged by plain pixel adjacency at any resolution;
    /// dropping the one-pixel rim keeps them apart.
    pub fn interior_components(&self) -> Vec<Option<u32>> {
        let res = self.resolution;
        components_where(&self.labels, res, |k| is_interior(&self.labels, res, k))
    }

    /// Whether a pixel within [`AMBIGUITY_RADIUS`] of the one holding `z`
    /// carries a different label (or `z` is off the grid).
    pub fn near_boundary(&self, z: Complex) -> bool {
        let Some((i, j)) = self.pixel_of(z) else {
            return true;
        };
        let own = self.label(i, j);
        if own == BasinLabel::NonConverged {
            return true;
        }
        let r = AMBIGUITY_RADIUS;
        let res = self.resolution;
        for jj in j.saturating_sub(r)..=(j + r).min(res - 1) {
            for ii in i.saturating_sub(r)..=(i + r).min(res - 1) {
                if self.label(ii, jj) != own {
                    return true;
                }
            }
        }
        false
    }
}

fn pixel_center(region: &Region, resolution: usize, i: usize, j: usize) -> Complex {
    let dx = region.width / resolution as f64;
    let dy = region.height / resolution as f64;
    Complex::new(
        region.xmin() + (i as f64 + 0.5) * dx,
        region.ymax() - (j as f64 + 0.5) * dy,
    )
}

struct UnionFind {
    parent: Vec<u32>,
}

impl UnionFind {
    fn new(n: usize) -> Self {
        UnionFind {
            parent: (0..n as u32).collect(),
        }
    }

    fn find(&mut self, mut x: u32) -> u32 {
        while self.parent[x as usize] != x {
            let up = self.parent[self.parent[x as usize] as usize];
            self.parent[x as usize] = up;
            x = up;
        }
        x
    }

    fn union(&mut self, a: u32, b: u32) {
        let (ra, rb) = (self.find(a), self.find(b));
        if ra != rb {
            let (lo, hi) = if ra < rb { (ra, rb) } else { (rb, ra) };
            self.parent[hi as usize] = lo;
        }
    }
}

/// Component ids over 4-adjacent pixels with equal root labels, numbered
/// in scan order. Pixels rejected by `keep` get no component.
fn components_where(
    labels: &[BasinLabel],
    res: usize,
    keep: impl Fn(usize) -> bool,
) -> Vec<Option<u32>> {
    let kept: Vec<bool> = (0..labels.len())
        .map(|k| labels[k] != BasinLabel::NonConverged && keep(k))
        .collect();
    let mut uf = UnionFind::new(labels.len());
    for j in 0..res {
        for i in 0..res {
            let k = j * res + i;
            if !kept[k] {
                continue;
            }
            if i + 1 < res && kept[k + 1] && labels[k + 1] == labels[k] {
                uf.union(k as u32, (k + 1) as u32);
            }
            if j + 1 < res && kept[k + res] && labels[k + res] == labels[k] {
                uf.union(k as u32, (k + res) as u32);
            }
        }
    }
    let mut ids = vec![u32::MAX; labels.len()];
    let mut next = 0;
    (0..labels.len())
        .map(|k| {
            if !kept[k] {
                return None;
            }
            let r = uf.find(k as u32) as usize;
            if ids[r] == u32::MAX {
                ids[r] = next;
                next += 1;
            }
            Some(ids[r])
        })
        .collect()
}

fn components(labels: &[BasinLabel], res: usize) -> Vec<Option<u32>> {
    components_where(labels, res, |_| true)
}

/// Whether all 8 neighbours of pixel `k` (inside the grid) share its label.
fn is_interior(labels: &[BasinLabel], res: usize, k: usize) -> bool {
    let (i, j) = (k % res, k / res);
    let own = labels[k];
    for jj in j.saturating_sub(1)..=(j + 1).min(res - 1) {
        for ii in i.saturating_sub(1)..=(i + 1).min(res - 1) {
            if labels[jj * res + ii] != own {
                return false;
            }
        }
    }
    true
}

/// Labels every pixel by the root its orbit reaches and groups equal labels
/// into 4-connected components.
pub fn label_basins(
    p: &FamilyParams,
    region: Region,
    resolution: usize,
    budget: &IterationBudget,
) -> Result<BasinGrid> {
    label_basins_with_workers(p, region, resolution, budget, default_workers())
}

pub fn label_basins_with_workers(
    p: &FamilyParams,
    region: Region,
    resolution: usize,
    budget: &IterationBudget,
    workers: usize,
) -> Result<BasinGrid> {
    if resolution < 64 {
        return Err(Error::InvalidParameter(format!(
            "resolution {resolution} is below 64"
        )));
    }
    let engine = OrbitEngine::new(*p, *budget);
    let mut labels = vec![BasinLabel::NonConverged; resolution * resolution];
    fill_rows(&mut labels, resolution, workers, |j, row| {
        for (i, cell) in row.iter_mut().enumerate() {
            let z = pixel_center(&region, resolution, i, j);
            if let Some(k) = engine.run(SpherePoint::Finite(z)).root_index() {
                *cell = BasinLabel::RootBasin(k as u32);
            }
        }
    });
    let components = components(&labels, resolution);
    Ok(BasinGrid {
        region,
        resolution,
        labels,
        components,
    })
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Confidence {
    Resolved,
    BoundaryAmbiguous,
}

impl fmt::Display for Confidence {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            Confidence::Resolved => "resolved",
            Confidence::BoundaryAmbiguous => "boundary-ambiguous",
        })
    }
}

#[derive(Clone, Copy, Debug, PartialEq)]
pub struct ConnectivityVerdict {
    pub julia_connected: bool,
    /// A critical point other than the root lies in the root's immediate basin.
    pub critical_in_immediate_basin: bool,
    pub extra_preimage_in_immediate_basin: bool,
    pub resolution_used: usize,
    pub confidence: Confidence,
}

impl ConnectivityVerdict {
    fn new(critical: bool, extra: bool, resolution_used: usize, confidence: Confidence) -> Self {
        ConnectivityVerdict {
            julia_connected: !(critical && !extra),
            critical_in_immediate_basin: critical,
            extra_preimage_in_immediate_basin: extra,
            resolution_used,
            confidence,
        }
    }

    pub fn verdict_word(&self) -> &'static str {
        if self.julia_connected {
            "connected"
        } else {
            "disconnected"
        }
    }

    pub const RECORD_HEADER: &'static str = "n,alpha_re,alpha_im,verdict,confidence,resolution";

    /// One comma-separated record matching [`Self::RECORD_HEADER`].
    pub fn to_record(&self, p: &FamilyParams) -> String {
        format!(
            "{},{},{},{},{},{}",
            p.n(),
            p.alpha().re,
            p.alpha().im,
            self.verdict_word(),
            self.confidence,
            self.resolution_used
        )
    }
}

/// Points the classifier needs for one root.
#[derive(Clone, Debug)]
pub struct BasinProbe {
    pub root: Complex,
    /// Free critical point whose orbit reaches `root`, unless it coincides
    /// with the root or no free critical orbit reaches a root.
    pub critical: Option<Complex>,
    /// Solutions of `O(z) = root` away from the root.
    pub extra_preimages: Vec<Complex>,
    pub cluster_size: usize,
}

/// Computes the critical point and extra preimages relevant for root
/// `root_index`.
pub fn basin_probe(p: &FamilyParams, root_index: usize) -> Result<BasinProbe> {
    let form = p.form();
    if !form.has_free_critical_points() {
        return Err(Error::DegenerateParameter {
            alpha: p.alpha(),
            reason: format!("the {form} operator has no free critical points"),
        });
    }
    let n = p.n();
    let xi = unit_root(root_index as u32, n);
    let pre = preimages(p, SpherePoint::Finite(Complex::new(1.0, 0.0)))?;
    let (cluster, extra): (Vec<Complex>, Vec<Complex>) = pre
        .into_iter()
        .partition(|z| (z - 1.0).norm() < CLUSTER_RADIUS);

    let budget = classifier_budget().with_cycle_detection(true);
    let critical = match principal_free_critical(p)? {
        SpherePoint::Infinity => None,
        SpherePoint::Finite(c1) => {
            match crate::orbits::iterate_orbit(p, SpherePoint::Finite(c1), &budget) {
                OrbitOutcome::ConvergedToRoot { root_index: k, .. } => {
                    // the rotated critical point xi^-k c1 is attracted to 1
                    let c = c1 * unit_root(n - k as u32, n);
                    if (c - 1.0).norm() < CLUSTER_RADIUS {
                        None
                    } else {
                        Some(c)
                    }
                }
                _ => None,
            }
        }
    };
    Ok(BasinProbe {
        root: xi,
        critical: critical.map(|c| c * xi),
        extra_preimages: extra.into_iter().map(|w| w * xi).collect(),
        cluster_size: cluster.len(),
    })
}

pub fn classify_julia(p: &FamilyParams, base_resolution: usize) -> Result<ConnectivityVerdict> {
    classify_julia_at(p, base_resolution, 0)
}

/// [`classify_julia`] evaluated at the basin of root `root_index`.
pub fn classify_julia_at(
    p: &FamilyParams,
    base_resolution: usize,
    root_index: usize,
) -> Result<ConnectivityVerdict> {
    let probe = basin_probe(p, root_index)?;
    let Some(critical) = probe.critical else {
        // no critical point other than the root reaches the basin
        return Ok(ConnectivityVerdict::new(
            false,
            false,
            0,
            Confidence::Resolved,
        ));
    };
    let mut points = vec![probe.root, critical];
    points.extend(probe.extra_preimages.iter().copied());
    let region = Region::enclosing(&points, REGION_MARGIN)?;
    let budget = classifier_budget();

    // membership pattern at the previous resolution
    let mut previous: Option<Vec<bool>> = None;
    let mut last = None;
    for step in 0..=MAX_DOUBLINGS {
        let res = base_resolution << step;
        let grid = label_basins(p, region, res, &budget)?;
        let comps = grid.interior_components();
        let comp_of = |z: Complex| grid.pixel_of(z).and_then(|(i, j)| comps[j * res + i]);
        let home = comp_of(probe.root);
        let member = |z: Complex| home.is_some() && comp_of(z) == home;

        let crit_in = member(critical);
        let crit_amb = grid.near_boundary(critical);
        let extras: Vec<(bool, bool)> = probe
            .extra_preimages
            .iter()
            .map(|&w| (member(w), grid.near_boundary(w)))
            .collect();
        let extra_in = extras.iter().any(|e| e.0);
        let extra_sure = extras.iter().any(|e| e.0 && !e.1);
        let extra_amb = extras.iter().any(|e| e.1);

        let pattern: Vec<bool> = std::iter::once(crit_in)
            .chain(extras.iter().map(|e| e.0))
            .collect();
        let clean = extra_sure || (!crit_amb && (!crit_in || !extra_amb));
        let stable = previous.as_ref() == Some(&pattern);
        if clean || stable {
            return Ok(ConnectivityVerdict::new(
                crit_in,
                extra_in,
                res,
                Confidence::Resolved,
            ));
        }
        previous = Some(pattern);
        last = Some(ConnectivityVerdict::new(
            crit_in,
            extra_in,
            res,
            Confidence::BoundaryAmbiguous,
        ));
    }
    Ok(last.expect("at least one resolution"))
}

/// Numerical proxy for the set of parameters whose free critical orbit
/// avoids the root basins: true unless the critical orbit reaches a root
/// within the budget.
pub fn cat_set_membership(p: &FamilyParams, budget: &IterationBudget) -> Result<bool> {
    Ok(critical_orbit_fate(p, budget)?.root_index().is_none())
}

#[cfg(test)]
mod tests {
    use super::*;

    fn c(re: f64, im: f64) -> Complex {
        Complex::new(re, im)
    }

    fn params(n: u32, a: Complex) -> FamilyParams {
        FamilyParams::new(n, a).unwrap()
    }

    #[test]
    fn union_find_on_a_pattern() {
        use BasinLabel::*;
        let a = RootBasin(0);
        let b = RootBasin(1);
        let x = NonConverged;
        #[rustfmt::skip]
        let labels = vec![
            a, a, x,
            x, b, a,
            a, x, a,
        ];
        let comp = components(&labels, 3);
        assert_eq!(
            comp,
            vec![
                Some(0),
                Some(0),
                None,
                None,
                Some(1),
                Some(2),
                Some(3),
                None,
                Some(2)
            ]
        );
    }

    #[test]
    fn diagonal_neighbours_stay_apart() {
        use BasinLabel::*;
        let a = RootBasin(0);
        let x = NonConverged;
        let comp = components(&[a, x, x, a], 2);
        assert_ne!(comp[0], comp[3]);
    }

    #[test]
    fn roots_sit_in_their_basins() {
        let p = params(2, c(0.7, 0.0));
        let region = Region::from_bounds(-2.0, 2.0, -2.0, 2.0).unwrap();
        let g = label_basins(&p, region, 64, &IterationBudget::dynamical_plane()).unwrap();
        let (i, j) = g.pixel_of(c(1.0, 0.0)).unwrap();
        assert_eq!(g.label(i, j), BasinLabel::RootBasin(0));
        let (i, j) = g.pixel_of(c(-1.0, 0.0)).unwrap();
        assert_eq!(g.label(i, j), BasinLabel::RootBasin(1));
    }

    #[test]
    fn rejects_small_resolution() {
        let p = params(2, c(0.7, 0.0));
        let region = Region::from_bounds(-2.0, 2.0, -2.0, 2.0).unwrap();
        assert!(label_basins(&p, region, 32, &IterationBudget::dynamical_plane()).is_err());
    }

    #[test]
    fn labels_do_not_depend_on_workers() {
        let p = params(3, c(0.3, 0.9));
        let region = Region::from_bounds(-2.0, 2.0, -2.0, 2.0).unwrap();
        let b = IterationBudget::dynamical_plane();
        let g1 = label_basins_with_workers(&p, region, 64, &b, 1).unwrap();
        let g4 = label_basins_with_workers(&p, region, 64, &b, 4).unwrap();
        assert_eq!(g1.labels, g4.labels);
        assert_eq!(g1.components, g4.components);
    }

    #[test]
    fn order4_parameter_has_no_free_critical_in_play() {
        let p = params(3, c(5.0 / 6.0, 0.0));
        let probe = basin_probe(&p, 0).unwrap();
        assert_eq!(probe.cluster_size, 4);
        assert!(probe.critical.is_none());
        assert!(classify_julia(&p, 64).unwrap().julia_connected);
    }

    #[test]
    fn record_format() {
        let p = params(3, c(0.2, 1.592));
        let v = ConnectivityVerdict::new(true, false, 512, Confidence::Resolved);
        assert!(!v.julia_connected);
        assert_eq!(v.to_record(&p), "3,0.2,1.592,disconnected,resolved,512");
    }

    #[test]
    fn cat_set_examples() {
        let b = IterationBudget::parameter_plane();
        assert!(cat_set_membership(&params(2, c(2.0, 0.0)), &b).unwrap());
        assert!(cat_set_membership(&params(3, c(2.5, 0.0)), &b).unwrap());
        assert!(!cat_set_membership(&params(3, c(5.0 / 6.0, 0.0)), &b).unwrap());
        assert!(cat_set_membership(&params(3, c(0.5, 0.0)), &b).is_err());
    }
}
