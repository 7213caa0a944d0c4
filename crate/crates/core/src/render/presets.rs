//! Named plane specs for the standard pictures of the family.

use super::{PlaneSpec, Rgb};
use crate::landmarks::{free_critical_points, order4_alpha};
use crate::operator::FamilyParams;
use crate::polyroots::preimages;
use crate::sphere::{Complex, SpherePoint};

/// Which overlay a preset asks for.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum MarkerSet {
    None,
    /// Free critical points (black), the root 1 (blue) and the other
    /// preimages of 1 (white).
    CriticalAndPreimages,
}

impl MarkerSet {
    /// Points and colors to mark for the parameter `p`. Points that do not
    /// exist for `p` are skipped.
    pub fn points(self, p: &FamilyParams) -> Vec<(Complex, Rgb)> {
        if self == MarkerSet::None {
            return Vec::new();
        }
        critical_and_preimage_marks(p)
    }
}

pub fn critical_and_preimage_marks(p: &FamilyParams) -> Vec<(Complex, Rgb)> {
    let one = Complex::new(1.0, 0.0);
    let mut out = Vec::new();
    if let Ok(pre) = preimages(p, SpherePoint::Finite(one)) {
        for w in pre.into_iter().filter(|w| (w - one).norm() > 1e-3) {
            out.push((w, [255, 255, 255]));
        }
    }
    if let Ok(cs) = free_critical_points(p) {
        out.extend(
            cs.into_iter()
                .filter_map(|c| c.finite())
                .map(|c| (c, [0, 0, 0])),
        );
    }
    out.push((one, [0, 0, 255]));
    out
}

#[derive(Clone, Debug, PartialEq)]
pub struct FigurePreset {
    pub id: String,
    pub spec: PlaneSpec,
    pub markers: MarkerSet,
    pub description: String,
}

const PARAM_NS: [u32; 6] = [2, 3, 5, 10, 25, 100];
const ZOOM_BIF_NS: [u32; 3] = [10, 25, 100];
const DYNAM_NS: [u32; 3] = [3, 10, 25];
const DYNAM_TAGS: [&str; 6] = [
    "order4",
    "halley",
    "chebyshev",
    "superhalley",
    "precrit",
    "a4i",
];

fn dynam_alpha(n: u32, tag: &str) -> Option<(Complex, &'static str)> {
    let nf = f64::from(n);
    Some(match tag {
        "order4" => (order4_alpha(n), "order-4 parameter (2n-1)/(3n-3)"),
        "halley" => (Complex::new(0.5, 0.0), "Halley's method"),
        "chebyshev" => (Complex::new(0.0, 0.0), "Chebyshev's method"),
        "superhalley" => (Complex::new(1.0, 0.0), "super-Halley method"),
        "precrit" => (
            Complex::new(1.0, (2.0 * (nf - 1.0)).sqrt()) / (nf - 1.0),
            "precritical parameter (1+i sqrt(2(n-1)))/(n-1)",
        ),
        "a4i" => (Complex::new(0.0, 4.0), "alpha = 4i"),
        _ => return None,
    })
}

/// All preset ids, in a stable order.
pub fn figure_ids() -> Vec<String> {
    let mut ids = Vec::new();
    ids.extend(PARAM_NS.iter().map(|n| format!("param-n{n}")));
    ids.extend(ZOOM_BIF_NS.iter().map(|n| format!("zoom-bif-n{n}")));
    ids.push("zoom-sing-n10".into());
    ids.push("zoom-sing-n25".into());
    ids.push("dynam-n3-a2.5".into());
    ids.push("dynam-n10-a19_9".into());
    ids.push("bottcher-n3".into());
    for (n, a) in [(3, "0.2+1.4i"), (3, "2i"), (25, "0.2+1.4i"), (25, "2i")] {
        ids.push(format!("discon-n{n}-a{a}"));
    }
    for n in DYNAM_NS {
        for tag in DYNAM_TAGS {
            ids.push(format!("dynam-n{n}-{tag}"));
        }
    }
    ids
}

fn preset(id: &str, spec: PlaneSpec, description: String) -> FigurePreset {
    FigurePreset {
        id: id.to_string(),
        spec,
        markers: MarkerSet::None,
        description,
    }
}

pub fn figure_preset(id: &str) -> Option<FigurePreset> {
    let c = Complex::new;
    let square = (-3.0, 3.0);
    let dynam = |n: u32, a: Complex, x: (f64, f64), y: (f64, f64)| {
        PlaneSpec::dynamical_plane(n, a, x, y, 1500, 1500)
    };

    if let Some(rest) = id.strip_prefix("param-n") {
        let n: u32 = rest.parse().ok().filter(|n| PARAM_NS.contains(n))?;
        let spec = PlaneSpec::parameter_plane(n, (-1.4, 4.6), (-2.0, 2.0), 1500, 1000);
        return Some(preset(id, spec, format!("parameter plane, n = {n}")));
    }
    if let Some(rest) = id.strip_prefix("zoom-bif-n") {
        let n: u32 = rest.parse().ok().filter(|n| ZOOM_BIF_NS.contains(n))?;
        let spec = PlaneSpec::parameter_plane(n, (-0.5, 0.7), (-1.0, 1.0), 1200, 2000);
        return Some(preset(
            id,
            spec,
            format!("parameter plane near the Collar bifurcations, n = {n}"),
        ));
    }
    match id {
        "zoom-sing-n10" => {
            let spec = PlaneSpec::parameter_plane(10, (1.0, 1.1), (-0.05, 0.05), 1500, 1500);
            return Some(preset(
                id,
                spec,
                "parameter plane near (2n-1)/(2n-2), n = 10".into(),
            ));
        }
        "zoom-sing-n25" => {
            let spec = PlaneSpec::parameter_plane(25, (0.95, 1.05), (-0.05, 0.05), 1500, 1500);
            return Some(preset(
                id,
                spec,
                "parameter plane near (2n-1)/(2n-2), n = 25".into(),
            ));
        }
        "dynam-n3-a2.5" => {
            let spec = dynam(3, c(2.5, 0.0), square, square);
            return Some(preset(
                id,
                spec,
                "dynamical plane, n = 3, superattracting strange fixed points".into(),
            ));
        }
        "dynam-n10-a19_9" => {
            let spec = dynam(10, c(19.0 / 9.0, 0.0), (0.0, 2.0), (-1.0, 1.0));
            return Some(preset(
                id,
                spec,
                "dynamical plane, n = 10, superattracting strange fixed points".into(),
            ));
        }
        "bottcher-n3" => {
            let spec = dynam(3, c(0.2, 1.592), (-1.0, 1.5), (-1.25, 1.25));
            let mut p = preset(
                id,
                spec,
                "dynamical plane, n = 3, multiply connected immediate basins".into(),
            );
            p.markers = MarkerSet::CriticalAndPreimages;
            return Some(p);
        }
        _ => {}
    }
    if let Some(rest) = id.strip_prefix("discon-n") {
        let (n, a) = rest.split_once("-a")?;
        let n: u32 = n.parse().ok()?;
        let alpha = match a {
            "0.2+1.4i" => c(0.2, 1.4),
            "2i" => c(0.0, 2.0),
            _ => return None,
        };
        if n != 3 && n != 25 {
            return None;
        }
        let spec = dynam(n, alpha, square, square);
        return Some(preset(
            id,
            spec,
            format!("dynamical plane with disconnected Julia set, n = {n}"),
        ));
    }
    if let Some(rest) = id.strip_prefix("dynam-n") {
        let (n, tag) = rest.split_once('-')?;
        let n: u32 = n.parse().ok().filter(|n| DYNAM_NS.contains(n))?;
        let (alpha, what) = dynam_alpha(n, tag)?;
        let spec = dynam(n, alpha, square, square);
        return Some(preset(
            id,
            spec,
            format!("dynamical plane, n = {n}, {what}"),
        ));
    }
    None
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::render::PlaneMode;

    #[test]
    fn every_id_resolves() {
        let ids = figure_ids();
        assert_eq!(ids.len(), 6 + 3 + 2 + 3 + 4 + 18);
        for id in &ids {
            let p = figure_preset(id).unwrap_or_else(|| panic!("{id}"));
            assert_eq!(&p.id, id);
            p.spec.validate().unwrap();
        }
        assert!(figure_preset("param-n4").is_none());
        assert!(figure_preset("dynam-n3-nope").is_none());
    }

    #[test]
    fn parameter_preset() {
        let p = figure_preset("param-n2").unwrap();
        assert_eq!(p.spec.mode, PlaneMode::ParameterPlane);
        assert_eq!((p.spec.width, p.spec.height), (1500, 1000));
        assert_eq!(p.spec.x_range, (-1.4, 4.6));
        assert_eq!(p.spec.y_range, (-2.0, 2.0));
        assert_eq!(p.spec.budget.max_iterations, 150);
    }

    #[test]
    fn dynamical_presets() {
        let p = figure_preset("dynam-n3-a2.5").unwrap();
        assert_eq!(p.spec.fixed_alpha, Some(Complex::new(2.5, 0.0)));
        assert_eq!(p.spec.budget.max_iterations, 75);
        let p = figure_preset("dynam-n10-precrit").unwrap();
        let a = p.spec.fixed_alpha.unwrap();
        assert!((a - Complex::new(1.0, 18f64.sqrt()) / 9.0).norm() < 1e-15);
        assert_eq!(
            figure_preset("bottcher-n3").unwrap().markers,
            MarkerSet::CriticalAndPreimages
        );
    }

    #[test]
    fn marks_for_the_multiply_connected_example() {
        let p = FamilyParams::new(3, Complex::new(0.2, 1.592)).unwrap();
        let marks = MarkerSet::CriticalAndPreimages.points(&p);
        assert_eq!(marks.iter().filter(|m| m.1 == [255, 255, 255]).count(), 3);
        assert_eq!(marks.iter().filter(|m| m.1 == [0, 0, 0]).count(), 3);
        assert_eq!(marks.iter().filter(|m| m.1 == [0, 0, 255]).count(), 1);
    }
}
