//! Parameter-plane and dynamical-plane rasterization.

mod image;
mod palette;
mod presets;

use std::fmt;

pub use self::image::{encode_ppm, write_image, write_rgb, write_sidecar, ImageFormat};
pub use self::palette::{Palette, Rgb};
pub use self::presets::{figure_ids, figure_preset, FigurePreset, MarkerSet};

use crate::error::{Error, Result};
use crate::landmarks::principal_free_critical;
use crate::operator::FamilyParams;
use crate::orbits::{IterationBudget, OrbitEngine, OrbitOutcome};
use crate::parallel::{default_workers, fill_rows};
use crate::sphere::{format_complex, Complex, SpherePoint};

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum PlaneMode {
    ParameterPlane,
    DynamicalPlane,
}

impl fmt::Display for PlaneMode {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            PlaneMode::ParameterPlane => "parameter",
            PlaneMode::DynamicalPlane => "dynamical",
        })
    }
}

#[derive(Clone, Copy, Debug, PartialEq)]
pub struct PlaneSpec {
    pub mode: PlaneMode,
    pub n: u32,
    /// The parameter of a dynamical plane; ignored for parameter planes.
    pub fixed_alpha: Option<Complex>,
    pub x_range: (f64, f64),
    pub y_range: (f64, f64),
    pub width: usize,
    pub height: usize,
    pub budget: IterationBudget,
}

impl PlaneSpec {
    pub fn parameter_plane(
        n: u32,
        x_range: (f64, f64),
        y_range: (f64, f64),
        width: usize,
        height: usize,
    ) -> Self {
        PlaneSpec {
            mode: PlaneMode::ParameterPlane,
            n,
            fixed_alpha: None,
            x_range,
            y_range,
            width,
            height,
            budget: IterationBudget::parameter_plane(),
        }
    }

    pub fn dynamical_plane(
        n: u32,
        alpha: Complex,
        x_range: (f64, f64),
        y_range: (f64, f64),
        width: usize,
        height: usize,
    ) -> Self {
        PlaneSpec {
            mode: PlaneMode::DynamicalPlane,
            n,
            fixed_alpha: Some(alpha),
            x_range,
            y_range,
            width,
            height,
            budget: IterationBudget::dynamical_plane(),
        }
    }

    pub fn with_size(self, width: usize, height: usize) -> Self {
        PlaneSpec {
            width,
            height,
            ..self
        }
    }

    pub fn with_max_iterations(self, max_iterations: u32) -> Self {
        PlaneSpec {
            budget: self.budget.with_max_iterations(max_iterations),
            ..self
        }
    }

    pub fn validate(&self) -> Result<()> {
        if self.n < 2 {
            return Err(Error::InvalidParameter(format!(
                "n must be at least 2, got {}",
                self.n
            )));
        }
        if self.width == 0 || self.height == 0 {
            return Err(Error::InvalidParameter(
                "image size must be at least 1x1".into(),
            ));
        }
        let ok = |r: (f64, f64)| r.0.is_finite() && r.1.is_finite() && r.0 < r.1;
        if !ok(self.x_range) || !ok(self.y_range) {
            return Err(Error::InvalidParameter(
                "ranges must be finite with min < max".into(),
            ));
        }
        if self.mode == PlaneMode::DynamicalPlane {
            let a = self
                .fixed_alpha
                .ok_or_else(|| Error::InvalidParameter("a dynamical plane needs alpha".into()))?;
            FamilyParams::new(self.n, a)?;
        }
        Ok(())
    }

    /// Point sampled by pixel `(i, j)`: pixel centers, row 0 at the top.
    pub fn pixel_point(&self, i: usize, j: usize) -> Complex {
        let dx = (self.x_range.1 - self.x_range.0) / self.width as f64;
        let dy = (self.y_range.1 - self.y_range.0) / self.height as f64;
        Complex::new(
            self.x_range.0 + (i as f64 + 0.5) * dx,
            self.y_range.1 - (j as f64 + 0.5) * dy,
        )
    }

    /// Pixel holding `z`, if inside the frame.
    pub fn pixel_of(&self, z: Complex) -> Option<(usize, usize)> {
        let fi = (z.re - self.x_range.0) / (self.x_range.1 - self.x_range.0) * self.width as f64;
        let fj = (self.y_range.1 - z.im) / (self.y_range.1 - self.y_range.0) * self.height as f64;
        if fi >= 0.0 && fj >= 0.0 && fi < self.width as f64 && fj < self.height as f64 {
            Some((fi as usize, fj as usize))
        } else {
            None
        }
    }

    /// `key = value` lines describing the plane.
    pub fn to_sidecar(&self) -> String {
        let mut s = String::new();
        let mut line = |k: &str, v: String| {
            s.push_str(k);
            s.push_str(" = ");
            s.push_str(&v);
            s.push('\n');
        };
        line("mode", self.mode.to_string());
        line("n", self.n.to_string());
        if let (PlaneMode::DynamicalPlane, Some(a)) = (self.mode, self.fixed_alpha) {
            line("alpha", format_complex(a));
        }
        line("x_min", self.x_range.0.to_string());
        line("x_max", self.x_range.1.to_string());
        line("y_min", self.y_range.0.to_string());
        line("y_max", self.y_range.1.to_string());
        line("width", self.width.to_string());
        line("height", self.height.to_string());
        line("max_iterations", self.budget.max_iterations.to_string());
        line("root_tolerance", self.budget.root_tolerance.to_string());
        line("cycle_detection", self.budget.cycle_detection.to_string());
        line("point_tolerance", self.budget.point_tolerance.to_string());
        s
    }
}

/// What the renderer keeps per pixel.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum PixelOutcome {
    Converged { root_index: u32, iterations: u32 },
    NotConverged,
}

impl PixelOutcome {
    fn from_orbit(o: OrbitOutcome) -> Self {
        match o {
            OrbitOutcome::ConvergedToRoot {
                root_index,
                iterations,
            } => PixelOutcome::Converged {
                root_index: root_index as u32,
                iterations,
            },
            _ => PixelOutcome::NotConverged,
        }
    }
}

#[derive(Clone, Debug, PartialEq)]
pub struct PlaneImage {
    pub spec: PlaneSpec,
    pub outcomes: Vec<PixelOutcome>,
    /// Row-major RGB8, top row first.
    pub raster: Vec<u8>,
}

impl PlaneImage {
    pub fn width(&self) -> usize {
        self.spec.width
    }

    pub fn height(&self) -> usize {
        self.spec.height
    }

    pub fn outcome(&self, i: usize, j: usize) -> PixelOutcome {
        self.outcomes[j * self.spec.width + i]
    }

    pub fn pixel(&self, i: usize, j: usize) -> Rgb {
        let k = 3 * (j * self.spec.width + i);
        [self.raster[k], self.raster[k + 1], self.raster[k + 2]]
    }

    /// RGBA8 copy of the raster with opaque alpha.
    pub fn to_rgba(&self) -> Vec<u8> {
        self.raster
            .chunks_exact(3)
            .flat_map(|c| [c[0], c[1], c[2], 255])
            .collect()
    }

    /// Copy of the raster with filled disks of radius [`MARKER_RADIUS`]
    /// drawn at the given points.
    pub fn marked_raster(&self, marks: &[(Complex, Rgb)]) -> Vec<u8> {
        let mut out = self.raster.clone();
        let (w, h) = (self.spec.width as i64, self.spec.height as i64);
        let r = MARKER_RADIUS as i64;
        for &(z, color) in marks {
            let Some((ci, cj)) = self.spec.pixel_of(z) else {
                continue;
            };
            let (ci, cj) = (ci as i64, cj as i64);
            for j in (cj - r).max(0)..=(cj + r).min(h - 1) {
                for i in (ci - r).max(0)..=(ci + r).min(w - 1) {
                    if (i - ci) * (i - ci) + (j - cj) * (j - cj) <= r * r {
                        let k = 3 * (j * w + i) as usize;
                        out[k..k + 3].copy_from_slice(&color);
                    }
                }
            }
        }
        out
    }
}

/// Marker disk radius in pixels.
pub const MARKER_RADIUS: usize = 3;

/// Colors outcomes with `palette`.
pub fn colorize(outcomes: &[PixelOutcome], max_iterations: u32, palette: &Palette) -> Vec<u8> {
    outcomes
        .iter()
        .flat_map(|o| match *o {
            PixelOutcome::Converged { iterations, .. } => {
                palette.iteration_color(iterations, max_iterations)
            }
            PixelOutcome::NotConverged => palette.non_converged(),
        })
        .collect()
}

/// Critical-orbit fate of one parameter. Parameters without free critical
/// points, or where they are undefined, count as not converged.
pub fn parameter_outcome(n: u32, alpha: Complex, budget: &IterationBudget) -> PixelOutcome {
    let Ok(p) = FamilyParams::new(n, alpha) else {
        return PixelOutcome::NotConverged;
    };
    if !p.form().has_free_critical_points() {
        return PixelOutcome::NotConverged;
    }
    match principal_free_critical(&p) {
        Ok(c) => PixelOutcome::from_orbit(OrbitEngine::new(p, *budget).run(c)),
        Err(_) => PixelOutcome::NotConverged,
    }
}

pub fn render_parameter_plane(spec: &PlaneSpec) -> Result<PlaneImage> {
    if spec.mode != PlaneMode::ParameterPlane {
        return Err(Error::InvalidParameter(
            "PlaneSpec is not a parameter plane".into(),
        ));
    }
    render_with(spec, &Palette::default(), default_workers())
}

pub fn render_dynamical_plane(spec: &PlaneSpec) -> Result<PlaneImage> {
    if spec.mode != PlaneMode::DynamicalPlane {
        return Err(Error::InvalidParameter(
            "PlaneSpec is not a dynamical plane".into(),
        ));
    }
    render_with(spec, &Palette::default(), default_workers())
}

/// Renders either kind of plane.
pub fn render(spec: &PlaneSpec) -> Result<PlaneImage> {
    render_with(spec, &Palette::default(), default_workers())
}

/// Renders with an explicit palette and worker count. The output does not
/// depend on `workers`.
pub fn render_with(spec: &PlaneSpec, palette: &Palette, workers: usize) -> Result<PlaneImage> {
    spec.validate()?;
    let mut outcomes = vec![PixelOutcome::NotConverged; spec.width * spec.height];
    match spec.mode {
        PlaneMode::ParameterPlane => {
            fill_rows(&mut outcomes, spec.width, workers, |j, row| {
                for (i, cell) in row.iter_mut().enumerate() {
                    *cell = parameter_outcome(spec.n, spec.pixel_point(i, j), &spec.budget);
                }
            });
        }
        PlaneMode::DynamicalPlane => {
            let p = FamilyParams::new(spec.n, spec.fixed_alpha.expect("validated"))?;
            let engine = OrbitEngine::new(p, spec.budget);
            fill_rows(&mut outcomes, spec.width, workers, |j, row| {
                for (i, cell) in row.iter_mut().enumerate() {
                    let z = SpherePoint::Finite(spec.pixel_point(i, j));
                    *cell = PixelOutcome::from_orbit(engine.run(z));
                }
            });
        }
    }
    let raster = colorize(&outcomes, spec.budget.max_iterations, palette);
    Ok(PlaneImage {
        spec: *spec,
        outcomes,
        raster,
    })
}

#[cfg(test)]
mod tests {
    use super::*;

    fn c(re: f64, im: f64) -> Complex {
        Complex::new(re, im)
    }

    #[test]
    fn pixel_centers() {
        let s = PlaneSpec::parameter_plane(2, (-1.0, 1.0), (-1.0, 1.0), 4, 2);
        assert_eq!(s.pixel_point(0, 0), c(-0.75, 0.5));
        assert_eq!(s.pixel_point(3, 1), c(0.75, -0.5));
        assert_eq!(s.pixel_of(c(-0.75, 0.5)), Some((0, 0)));
        assert_eq!(s.pixel_of(c(2.0, 0.0)), None);
    }

    #[test]
    fn parameter_pixels() {
        let b = IterationBudget::parameter_plane();
        assert_eq!(
            parameter_outcome(2, c(2.0, 0.0), &b),
            PixelOutcome::NotConverged
        );
        assert_eq!(
            parameter_outcome(3, c(5.0 / 6.0, 0.0), &b),
            PixelOutcome::Converged {
                root_index: 0,
                iterations: 0
            }
        );
        assert_eq!(
            parameter_outcome(3, c(0.5, 0.0), &b),
            PixelOutcome::NotConverged
        );
    }

    #[test]
    fn order4_pixel_is_red() {
        // 1x1 plane centered on 5/6
        let s =
            PlaneSpec::parameter_plane(3, (5.0 / 6.0 - 0.1, 5.0 / 6.0 + 0.1), (-0.1, 0.1), 1, 1);
        let img = render(&s).unwrap();
        assert_eq!(img.spec.pixel_point(0, 0), c(5.0 / 6.0, 0.0));
        assert_eq!(img.pixel(0, 0), [255, 0, 0]);
    }

    #[test]
    fn root_pixel_is_red_in_the_dynamical_plane() {
        let s = PlaneSpec::dynamical_plane(3, c(0.7, 0.0), (0.9, 1.1), (-0.1, 0.1), 1, 1);
        let img = render_dynamical_plane(&s).unwrap();
        assert_eq!(img.pixel(0, 0), [255, 0, 0]);
    }

    #[test]
    fn zero_infinity_cycle_is_black() {
        let s = PlaneSpec::dynamical_plane(3, c(1.25, 0.0), (-2.0, 2.0), (-2.0, 2.0), 41, 41);
        let img = render(&s).unwrap();
        assert_eq!(img.pixel(20, 20), [0, 0, 0]);
        assert_eq!(img.pixel(21, 20), [0, 0, 0]);
    }

    #[test]
    fn mode_mismatch_is_rejected() {
        let s = PlaneSpec::dynamical_plane(3, c(0.7, 0.0), (-1.0, 1.0), (-1.0, 1.0), 2, 2);
        assert!(render_parameter_plane(&s).is_err());
        let s = PlaneSpec::parameter_plane(3, (1.0, -1.0), (-1.0, 1.0), 2, 2);
        assert!(render(&s).is_err());
    }

    #[test]
    fn markers_paint_disks() {
        let s = PlaneSpec::dynamical_plane(3, c(0.7, 0.0), (-1.0, 1.0), (-1.0, 1.0), 21, 21);
        let img = render(&s).unwrap();
        let marked = img.marked_raster(&[(c(0.0, 0.0), [1, 2, 3])]);
        let at = |i: usize, j: usize| &marked[3 * (j * 21 + i)..3 * (j * 21 + i) + 3];
        assert_eq!(at(10, 10), &[1, 2, 3]);
        assert_eq!(at(13, 10), &[1, 2, 3]);
        assert_ne!(at(13, 13), &[1, 2, 3]);
    }

    #[test]
    fn sidecar_lists_the_plane_settings() {
        let s = PlaneSpec::dynamical_plane(3, c(2.5, 0.0), (-3.0, 3.0), (-3.0, 3.0), 10, 10);
        let text = s.to_sidecar();
        assert!(text.starts_with("mode = dynamical\nn = 3\nalpha = 2.5+0i\n"));
        assert!(text.contains("max_iterations = 75\n"));
    }
}
