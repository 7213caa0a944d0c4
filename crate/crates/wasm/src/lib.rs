//! Browser bindings: parameter-plane and dynamical-plane rasters as RGBA
//! bytes for a canvas, plus a text summary of one parameter.
//!
//! The `*_rgba` and [`summary`] functions are plain Rust so they can be
//! exercised natively; the `#[wasm_bindgen]` wrappers only convert errors.

use chdyn::connectivity::classify_julia;
use chdyn::landmarks::{fixed_points, root_local_degree, FixedPointKind};
use chdyn::orbits::{critical_orbit_fate, IterationBudget, OrbitOutcome};
use chdyn::parse::parse_complex;
use chdyn::render::{render_with, MarkerSet, Palette, PlaneSpec};
use chdyn::{Complex, FamilyParams};
use wasm_bindgen::prelude::*;

/// Threads are unavailable in the browser build.
const WORKERS: usize = 1;

/// Resolution used by the connectivity verdict in [`summary`].
const SUMMARY_RESOLUTION: usize = 256;

#[allow(clippy::too_many_arguments)]
pub fn parameter_plane_rgba(
    n: u32,
    x_min: f64,
    x_max: f64,
    y_min: f64,
    y_max: f64,
    width: usize,
    height: usize,
    max_iterations: u32,
) -> Result<Vec<u8>, String> {
    let spec = PlaneSpec::parameter_plane(n, (x_min, x_max), (y_min, y_max), width, height)
        .with_max_iterations(max_iterations);
    let img = render_with(&spec, &Palette::default(), WORKERS).map_err(|e| e.to_string())?;
    Ok(img.to_rgba())
}

#[allow(clippy::too_many_arguments)]
pub fn dynamical_plane_rgba(
    n: u32,
    alpha: Complex,
    x_min: f64,
    x_max: f64,
    y_min: f64,
    y_max: f64,
    width: usize,
    height: usize,
    max_iterations: u32,
    markers: bool,
) -> Result<Vec<u8>, String> {
    let spec = PlaneSpec::dynamical_plane(n, alpha, (x_min, x_max), (y_min, y_max), width, height)
        .with_max_iterations(max_iterations);
    let img = render_with(&spec, &Palette::default(), WORKERS).map_err(|e| e.to_string())?;
    if !markers {
        return Ok(img.to_rgba());
    }
    let p = FamilyParams::new(n, alpha).map_err(|e| e.to_string())?;
    let raster = img.marked_raster(&MarkerSet::CriticalAndPreimages.points(&p));
    Ok(raster
        .chunks_exact(3)
        .flat_map(|c| [c[0], c[1], c[2], 255])
        .collect())
}

/// Multi-line description of `(n, alpha)`: form, degree, attracting fixed
/// points, the free critical orbit and the connectivity verdict.
pub fn summary(n: u32, alpha: Complex) -> Result<String, String> {
    let p = FamilyParams::new(n, alpha).map_err(|e| e.to_string())?;
    let mut out = format!("n = {n}, alpha = {:.6}{:+.6}i\n", alpha.re, alpha.im);
    out += &format!("form: {}, degree {}\n", p.form(), p.degree());
    out += &format!("local degree at the roots: {}\n", root_local_degree(&p));
    if let Ok(fixed) = fixed_points(&p) {
        for f in fixed
            .iter()
            .filter(|f| f.kind != FixedPointKind::Root && f.multiplier.norm() < 1.0)
        {
            out += &format!(
                "attracting {} fixed point, |multiplier| = {:.4}\n",
                f.kind,
                f.multiplier.norm()
            );
        }
    }
    if !p.form().has_free_critical_points() {
        out += "no free critical points\n";
        return Ok(out);
    }
    let budget = IterationBudget::parameter_plane().with_cycle_detection(true);
    let fate = critical_orbit_fate(&p, &budget).map_err(|e| e.to_string())?;
    out += &match fate {
        OrbitOutcome::ConvergedToRoot {
            root_index,
            iterations,
        } => {
            format!("free critical orbit: root {root_index} after {iterations} steps\n")
        }
        OrbitOutcome::ConvergedToPoint {
            location,
            iterations,
        } => {
            format!("free critical orbit: fixed point {location} after {iterations} steps\n")
        }
        OrbitOutcome::CycleDetected {
            period,
            multiplier_estimate,
            ..
        } => {
            format!(
                "free critical orbit: {period}-cycle, |multiplier| = {:.4}\n",
                multiplier_estimate.norm()
            )
        }
        OrbitOutcome::MaxIterations { .. } => {
            "free critical orbit: undecided within the budget\n".into()
        }
    };
    let v = classify_julia(&p, SUMMARY_RESOLUTION).map_err(|e| e.to_string())?;
    out += &format!("julia set: {} ({})\n", v.verdict_word(), v.confidence);
    Ok(out)
}

fn js(e: String) -> JsError {
    JsError::new(&e)
}

#[wasm_bindgen]
#[allow(clippy::too_many_arguments)]
pub fn render_parameter_plane(
    n: u32,
    x_min: f64,
    x_max: f64,
    y_min: f64,
    y_max: f64,
    width: usize,
    height: usize,
    max_iterations: u32,
) -> Result<Vec<u8>, JsError> {
    parameter_plane_rgba(n, x_min, x_max, y_min, y_max, width, height, max_iterations).map_err(js)
}

#[wasm_bindgen]
#[allow(clippy::too_many_arguments)]
pub fn render_dynamical_plane(
    n: u32,
    alpha: &str,
    x_min: f64,
    x_max: f64,
    y_min: f64,
    y_max: f64,
    width: usize,
    height: usize,
    max_iterations: u32,
    markers: bool,
) -> Result<Vec<u8>, JsError> {
    let alpha = parse_complex(alpha).map_err(|e| js(e.to_string()))?;
    dynamical_plane_rgba(
        n,
        alpha,
        x_min,
        x_max,
        y_min,
        y_max,
        width,
        height,
        max_iterations,
        markers,
    )
    .map_err(js)
}

#[wasm_bindgen]
pub fn describe_parameter(n: u32, alpha: &str) -> Result<String, JsError> {
    let alpha = parse_complex(alpha).map_err(|e| js(e.to_string()))?;
    summary(n, alpha).map_err(js)
}
