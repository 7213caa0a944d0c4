use std::fs::File;
use std::io::{self, Write};
use std::path::{Path, PathBuf};

use chdyn::connectivity::{cat_set_membership, classify_julia_at, ConnectivityVerdict};
use chdyn::landmarks::{
    bifurcation_catalog, critical_points, fixed_points, root_local_degree, stability_disks,
    DiskSubject,
};
use chdyn::orbits::{
    convergence_order_details, critical_orbit_fate, IterationBudget, OrbitOutcome,
};
use chdyn::parallel::{default_workers, fill_rows};
use chdyn::render::{
    figure_preset, render_with, write_rgb, ImageFormat, MarkerSet, Palette, PlaneMode, PlaneSpec,
};
use chdyn::sphere::format_complex;
use chdyn::{Complex, Error, FamilyParams, Result, SpherePoint};

use crate::settings::Settings;

fn io_err(path: &Path) -> impl Fn(io::Error) -> Error + '_ {
    move |source| Error::Io {
        path: path.to_path_buf(),
        source,
    }
}

fn csv_err(path: &Path) -> impl Fn(csv::Error) -> Error + '_ {
    move |e| Error::Io {
        path: path.to_path_buf(),
        source: io::Error::other(e),
    }
}

fn echo(settings: &Settings) {
    eprint!("# resolved configuration\n{}", settings.echo());
}

fn family(s: &mut Settings) -> Result<FamilyParams> {
    let n = s.u32("n", None)?;
    let alpha = s.complex("alpha", None)?;
    FamilyParams::new(n, alpha)
}

fn fmt_point(z: SpherePoint) -> String {
    match z {
        SpherePoint::Finite(z) => format!("{:.12}{:+.12}i", z.re, z.im),
        SpherePoint::Infinity => "inf".into(),
    }
}

fn fmt_c(z: Complex) -> String {
    fmt_point(SpherePoint::Finite(z))
}

pub fn landmarks(mut s: Settings) -> Result<()> {
    let p = family(&mut s)?;
    let csv_path = s.opt_string("csv");
    echo(&s);

    let form = p.form();
    let mut out = String::new();
    out += &format!("n = {}, alpha = {}\n", p.n(), format_complex(p.alpha()));
    out += &format!("form: {form}\ndegree: {}\n", p.degree());
    if form != chdyn::OperatorForm::Generic {
        out += &format!(
            "degenerate form: {form} (degree {} instead of {})\n",
            p.degree(),
            2 * p.n()
        );
    }
    let local = root_local_degree(&p);
    out += &format!(
        "root local degree: {local}{}\n",
        if local == 4 {
            " (order of convergence 4)"
        } else {
            ""
        }
    );

    let fixed = fixed_points(&p)?;
    let crit = critical_points(&p)?;
    out += "\nfixed points\n";
    out += &format!(
        "  {:<36} {:<36} {:>14}  {:<16} {}\n",
        "location", "multiplier", "|multiplier|", "stability", "kind"
    );
    for f in &fixed {
        out += &format!(
            "  {:<36} {:<36} {:>14.6e}  {:<16} {}\n",
            fmt_point(f.location),
            fmt_c(f.multiplier),
            f.multiplier.norm(),
            f.stability.to_string(),
            f.kind
        );
    }
    out += "\ncritical points\n";
    out += &format!("  {:<36} {:>12}  {}\n", "location", "multiplicity", "kind");
    for c in &crit {
        out += &format!(
            "  {:<36} {:>12}  {}\n",
            fmt_point(c.location),
            c.multiplicity,
            c.kind
        );
    }
    out += "\nstability disks\n";
    let (inf, strange) = stability_disks(p.n());
    for d in [inf, strange] {
        let who = match d.subject {
            DiskSubject::InfinityFixed => "infinity attracting",
            DiskSubject::StrangeFixed => "strange fixed points attracting",
        };
        let inside = if d.contains(p.alpha()) {
            "alpha inside"
        } else {
            "alpha outside"
        };
        out += &format!(
            "  {who}: center {}, radius {} ({inside})\n",
            d.center.re, d.radius
        );
    }
    print!("{out}");

    if let Some(path) = csv_path {
        let path = PathBuf::from(path);
        let mut w = csv::Writer::from_path(&path).map_err(csv_err(&path))?;
        w.write_record([
            "section",
            "kind",
            "re",
            "im",
            "multiplier_re",
            "multiplier_im",
            "stability",
            "multiplicity",
        ])
        .map_err(csv_err(&path))?;
        let parts = |z: SpherePoint| match z {
            SpherePoint::Finite(z) => (z.re.to_string(), z.im.to_string()),
            SpherePoint::Infinity => ("inf".to_string(), "inf".to_string()),
        };
        for f in &fixed {
            let (re, im) = parts(f.location);
            w.write_record([
                "fixed".to_string(),
                f.kind.to_string(),
                re,
                im,
                f.multiplier.re.to_string(),
                f.multiplier.im.to_string(),
                f.stability.to_string(),
                String::new(),
            ])
            .map_err(csv_err(&path))?;
        }
        for c in &crit {
            let (re, im) = parts(c.location);
            w.write_record([
                "critical".to_string(),
                c.kind.to_string(),
                re,
                im,
                String::new(),
                String::new(),
                String::new(),
                c.multiplicity.to_string(),
            ])
            .map_err(csv_err(&path))?;
        }
        w.flush().map_err(io_err(&path))?;
    }
    Ok(())
}

pub fn catalog(mut s: Settings) -> Result<()> {
    let n = s.u32("n", None)?;
    let as_csv = s.bool("csv", false)?;
    echo(&s);
    if n < 2 {
        return Err(Error::InvalidParameter(format!(
            "n must be at least 2, got {n}"
        )));
    }
    let entries = bifurcation_catalog(n);
    if as_csv {
        let mut w = csv::Writer::from_writer(io::stdout());
        let path = Path::new("<stdout>");
        w.write_record(["label", "alpha_re", "alpha_im", "description"])
            .map_err(csv_err(path))?;
        for e in &entries {
            w.write_record([
                e.label.to_string(),
                e.alpha.re.to_string(),
                e.alpha.im.to_string(),
                e.description.clone(),
            ])
            .map_err(csv_err(path))?;
        }
        w.flush().map_err(io_err(path))?;
    } else {
        println!("n = {n}");
        for e in &entries {
            println!(
                "  {:<24} {:<40} {}",
                e.label.to_string(),
                fmt_c(e.alpha),
                e.description
            );
        }
    }
    Ok(())
}

pub fn classify(mut s: Settings) -> Result<()> {
    let p = family(&mut s)?;
    let resolution = s.usize("resolution", Some(512))?;
    let root = s.usize("root", Some(0))?;
    echo(&s);
    let v = classify_julia_at(&p, resolution, root)?;
    println!("verdict: {}", v.verdict_word());
    println!("julia_connected = {}", v.julia_connected);
    println!(
        "critical_in_immediate_basin = {}",
        v.critical_in_immediate_basin
    );
    println!(
        "extra_preimage_in_immediate_basin = {}",
        v.extra_preimage_in_immediate_basin
    );
    println!("resolution_used = {}", v.resolution_used);
    println!("confidence = {}", v.confidence);
    println!("{}", ConnectivityVerdict::RECORD_HEADER);
    println!("{}", v.to_record(&p));
    Ok(())
}

pub fn order(mut s: Settings) -> Result<()> {
    let p = family(&mut s)?;
    let root = s.usize("root", Some(0))?;
    let offset = s.f64("offset", Some(1e-2))?;
    echo(&s);
    let est = convergence_order_details(&p, root, offset)?;
    println!("errors:");
    for (k, e) in est.errors.iter().enumerate() {
        println!("  e_{k} = {e:.6e}");
    }
    println!("triple estimates:");
    for (k, q) in est.estimates.iter().enumerate() {
        println!("  ({k}, {}, {}) -> {q:.6}", k + 1, k + 2);
    }
    println!("order = {:.6}", est.order);
    Ok(())
}

fn parse_mode(s: &str) -> Result<PlaneMode> {
    match s {
        "param" | "parameter" => Ok(PlaneMode::ParameterPlane),
        "dynam" | "dynamical" => Ok(PlaneMode::DynamicalPlane),
        _ => Err(Error::InvalidParameter(format!(
            "unknown mode `{s}` (use param or dynam)"
        ))),
    }
}

fn parse_format(s: &str) -> Result<ImageFormat> {
    match s {
        "ppm" => Ok(ImageFormat::Ppm),
        "png" => Ok(ImageFormat::Png),
        _ => Err(Error::InvalidParameter(format!(
            "unknown format `{s}` (use ppm or png)"
        ))),
    }
}

pub fn render(mut s: Settings) -> Result<()> {
    let preset = match s.opt_string("figure") {
        Some(id) => Some(
            figure_preset(&id)
                .ok_or_else(|| Error::InvalidParameter(format!("unknown figure `{id}`")))?,
        ),
        None => None,
    };
    let base = preset.as_ref().map(|p| p.spec);
    let mode = parse_mode(&s.string(
        "mode",
        base.map(|b| {
            if b.mode == PlaneMode::ParameterPlane {
                "param"
            } else {
                "dynam"
            }
        }),
    )?)?;
    let n = s.u32("n", base.map(|b| b.n))?;
    let alpha = match mode {
        PlaneMode::DynamicalPlane => Some(s.complex("alpha", base.and_then(|b| b.fixed_alpha))?),
        PlaneMode::ParameterPlane => None,
    };
    let (dx, dy) = match mode {
        PlaneMode::ParameterPlane => ((-1.4, 4.6), (-2.0, 2.0)),
        PlaneMode::DynamicalPlane => ((-3.0, 3.0), (-3.0, 3.0)),
    };
    let x0 = s.f64("x_min", Some(base.map_or(dx.0, |b| b.x_range.0)))?;
    let x1 = s.f64("x_max", Some(base.map_or(dx.1, |b| b.x_range.1)))?;
    let y0 = s.f64("y_min", Some(base.map_or(dy.0, |b| b.y_range.0)))?;
    let y1 = s.f64("y_max", Some(base.map_or(dy.1, |b| b.y_range.1)))?;
    let width = s.usize("width", Some(base.map_or(1500, |b| b.width)))?;
    let height = s.usize(
        "height",
        Some(base.map_or(
            if mode == PlaneMode::ParameterPlane {
                1000
            } else {
                1500
            },
            |b| b.height,
        )),
    )?;
    let mut spec = match mode {
        PlaneMode::ParameterPlane => {
            PlaneSpec::parameter_plane(n, (x0, x1), (y0, y1), width, height)
        }
        PlaneMode::DynamicalPlane => PlaneSpec::dynamical_plane(
            n,
            alpha.expect("dynamical"),
            (x0, x1),
            (y0, y1),
            width,
            height,
        ),
    };
    let iters = s.u32(
        "max_iterations",
        Some(base.map_or(spec.budget.max_iterations, |b| b.budget.max_iterations)),
    )?;
    spec = spec.with_max_iterations(iters);
    let out = PathBuf::from(s.string("out", Some("plane.ppm"))?);
    let format = parse_format(&s.string(
        "format",
        Some(match ImageFormat::from_path(&out) {
            ImageFormat::Png => "png",
            ImageFormat::Ppm => "ppm",
        }),
    )?)?;
    let default_markers = preset
        .as_ref()
        .is_some_and(|p| p.markers != MarkerSet::None);
    let markers = s.bool("markers", default_markers)?;
    let workers = s.usize("workers", Some(default_workers()))?;
    echo(&s);

    let img = render_with(&spec, &Palette::default(), workers)?;
    let raster = if markers && mode == PlaneMode::DynamicalPlane {
        let p = FamilyParams::new(n, alpha.expect("dynamical"))?;
        img.marked_raster(&MarkerSet::CriticalAndPreimages.points(&p))
    } else {
        img.raster.clone()
    };
    write_rgb(spec.width, spec.height, &raster, &out, format)?;
    let sidecar = sidecar_path(&out);
    std::fs::write(&sidecar, spec.to_sidecar()).map_err(io_err(&sidecar))?;
    println!(
        "wrote {} ({}x{}) and {}",
        out.display(),
        spec.width,
        spec.height,
        sidecar.display()
    );
    Ok(())
}

/// `<image path>.txt`
pub fn sidecar_path(out: &Path) -> PathBuf {
    let mut s = out.as_os_str().to_owned();
    s.push(".txt");
    PathBuf::from(s)
}

/// One survey sample.
#[derive(Clone, Debug, Default)]
struct Sample {
    fields: Vec<String>,
}

pub fn survey(mut s: Settings) -> Result<()> {
    let n = s.u32("n", None)?;
    let x0 = s.f64("x_min", Some(-1.4))?;
    let x1 = s.f64("x_max", Some(4.6))?;
    let y0 = s.f64("y_min", Some(-2.0))?;
    let y1 = s.f64("y_max", Some(2.0))?;
    let cols = s.usize("cols", Some(200))?;
    let rows = s.usize("rows", Some(200))?;
    let iters = s.u32("max_iterations", Some(150))?;
    let with_verdict = s.bool("classify", false)?;
    let resolution = s.usize("resolution", Some(512))?;
    let out = s.string("out", Some("-"))?;
    let workers = s.usize("workers", Some(default_workers()))?;
    echo(&s);
    if n < 2 {
        return Err(Error::InvalidParameter(format!(
            "n must be at least 2, got {n}"
        )));
    }
    if !(x0 < x1 && y0 < y1) {
        return Err(Error::InvalidParameter(
            "survey ranges must satisfy min < max".into(),
        ));
    }

    let budget = IterationBudget::parameter_plane().with_max_iterations(iters);
    let mut samples = vec![Sample::default(); cols * rows];
    let dx = (x1 - x0) / cols.max(1) as f64;
    let dy = (y1 - y0) / rows.max(1) as f64;
    fill_rows(&mut samples, cols, workers, |j, row| {
        for (i, cell) in row.iter_mut().enumerate() {
            let alpha = Complex::new(x0 + (i as f64 + 0.5) * dx, y1 - (j as f64 + 0.5) * dy);
            cell.fields = survey_record(n, alpha, &budget, with_verdict.then_some(resolution));
        }
    });

    let mut header = vec!["n", "alpha_re", "alpha_im", "cat_set", "root", "iterations"];
    if with_verdict {
        header.extend(["verdict", "confidence", "resolution"]);
    }
    let path = PathBuf::from(&out);
    let sink: Box<dyn Write> = if out == "-" {
        Box::new(io::stdout())
    } else {
        Box::new(File::create(&path).map_err(io_err(&path))?)
    };
    let mut w = csv::Writer::from_writer(sink);
    w.write_record(&header).map_err(csv_err(&path))?;
    for smp in &samples {
        w.write_record(&smp.fields).map_err(csv_err(&path))?;
    }
    w.flush().map_err(io_err(&path))?;
    Ok(())
}

fn survey_record(
    n: u32,
    alpha: Complex,
    budget: &IterationBudget,
    resolution: Option<usize>,
) -> Vec<String> {
    let mut f = vec![n.to_string(), alpha.re.to_string(), alpha.im.to_string()];
    let p = match FamilyParams::new(n, alpha) {
        Ok(p) if p.form().has_free_critical_points() => p,
        _ => {
            f.extend(["degenerate".to_string(), String::new(), String::new()]);
            if resolution.is_some() {
                f.extend([String::new(), String::new(), String::new()]);
            }
            return f;
        }
    };
    match (
        cat_set_membership(&p, budget),
        critical_orbit_fate(&p, budget),
    ) {
        (Ok(member), Ok(fate)) => {
            f.push(member.to_string());
            match fate {
                OrbitOutcome::ConvergedToRoot {
                    root_index,
                    iterations,
                } => {
                    f.push(root_index.to_string());
                    f.push(iterations.to_string());
                }
                _ => f.extend([String::new(), String::new()]),
            }
        }
        _ => f.extend(["degenerate".to_string(), String::new(), String::new()]),
    }
    if let Some(res) = resolution {
        match classify_julia_at(&p, res, 0) {
            Ok(v) => f.extend([
                v.verdict_word().to_string(),
                v.confidence.to_string(),
                v.resolution_used.to_string(),
            ]),
            Err(_) => f.extend(["error".to_string(), String::new(), String::new()]),
        }
    }
    f
}
