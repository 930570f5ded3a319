use std::f64::consts::TAU;
use std::fs::{self, File};
use std::io::{BufReader, BufWriter, Write};
use std::path::{Path, PathBuf};

use fourvertex::analysis::{
    detect_vertices_default, min_enclosing_circle_seeded, osserman_check_seeded, ContactKind, OssermanReport, VertexReport,
};
use fourvertex::bicircle::{to_reduced, Configuration, ReducedConfigCoords};
use fourvertex::curvature::{AbabPoints, ExtremumKind, ScaleFactor};
use fourvertex::integrator::{error_vector, is_simple, PlanarCurve};
use fourvertex::io::{self, Format};
use fourvertex::moebius::{moebius_on_config, MoebiusParameter};
use fourvertex::solver::{compass_demo, reference_bicircle, synthesize, Diagnostics, SynthesisOptions};
use fourvertex::{Error, Result};
use num_complex::Complex64;
use serde::Serialize;

use crate::svg::Svg;
use crate::{AnalyzeArgs, Demo, RunConfig, SynthArgs};

fn open(path: &Path) -> Result<BufReader<File>> {
    File::open(path)
        .map(BufReader::new)
        .map_err(|e| Error::Io(format!("{}: {e}", path.display())))
}

fn out_path(run: &RunConfig, name: &str) -> Result<PathBuf> {
    fs::create_dir_all(&run.out_dir).map_err(|e| Error::Io(format!("{}: {e}", run.out_dir.display())))?;
    Ok(run.out_dir.join(name))
}

fn create(run: &RunConfig, name: &str) -> Result<(PathBuf, BufWriter<File>)> {
    let path = out_path(run, name)?;
    let f = File::create(&path).map_err(|e| Error::Io(format!("{}: {e}", path.display())))?;
    Ok((path, BufWriter::new(f)))
}

fn write_json<T: Serialize>(run: &RunConfig, name: &str, value: &T) -> Result<PathBuf> {
    let (path, mut w) = create(run, name)?;
    serde_json::to_writer_pretty(&mut w, value)?;
    w.write_all(b"\n")?;
    w.flush()?;
    Ok(path)
}

fn write_curve(run: &RunConfig, stem: &str, c: &PlanarCurve) -> Result<PathBuf> {
    let format: Format = run.format.into();
    let (path, mut w) = create(run, &format!("{stem}.{}", format.extension()))?;
    io::write_curve(&mut w, c, format)?;
    w.flush()?;
    Ok(path)
}

fn write_svg(run: &RunConfig, name: &str, svg: &Svg) -> Result<PathBuf> {
    let (path, mut w) = create(run, name)?;
    w.write_all(svg.finish(0.05).as_bytes())?;
    w.flush()?;
    Ok(path)
}

fn extent(pts: &[Complex64]) -> f64 {
    let (lo, hi) = pts.iter().fold(
        (Complex64::new(f64::INFINITY, f64::INFINITY), Complex64::new(f64::NEG_INFINITY, f64::NEG_INFINITY)),
        |(lo, hi), p| (Complex64::new(lo.re.min(p.re), lo.im.min(p.im)), Complex64::new(hi.re.max(p.re), hi.im.max(p.im))),
    );
    (hi.re - lo.re).max(hi.im - lo.im)
}

#[derive(Serialize)]
struct SynthReport<'a> {
    closed: bool,
    simple: bool,
    beta_star: MoebiusParameter,
    scale: ScaleFactor,
    eps_used: f64,
    sign_flipped: bool,
    abab: Option<AbabPoints>,
    diagnostics: &'a Diagnostics,
}

pub fn synth(run: &RunConfig, args: &SynthArgs) -> Result<()> {
    let k = io::read_curvature(open(&args.kappa_file)?, Format::from_path(&args.kappa_file), run.grid)?;
    let options = SynthesisOptions {
        eps0: args.eps0,
        r0: args.r0,
        max_rounds: args.max_rounds,
    };
    let res = synthesize(&k, &options)?;
    let curve_path = write_curve(run, "curve", &res.curve)?;
    let report = SynthReport {
        closed: res.curve.closed,
        simple: is_simple(&res.curve).0,
        beta_star: res.beta_star,
        scale: res.scale,
        eps_used: res.eps_used,
        sign_flipped: res.sign_flipped,
        abab: res.abab,
        diagnostics: &res.diagnostics,
    };
    let diag_path = write_json(run, "synth.json", &report)?;
    println!("closed curve, |E| = {:.3e}, beta* = {}", res.diagnostics.final_error, res.beta_star.beta());
    println!("rounds {}, eps {}, curvature error {:.3e}", res.diagnostics.rounds, res.eps_used, res.diagnostics.curvature_error);
    println!("wrote {}", curve_path.display());
    println!("wrote {}", diag_path.display());
    if run.svg {
        let pts = res.curve.positions();
        let mut svg = Svg::new();
        svg.polyline(&pts, "black", 1.5);
        svg.dot(pts[0], 0.01 * extent(&pts), "red");
        println!("wrote {}", write_svg(run, "curve.svg", &svg)?.display());
    }
    Ok(())
}

#[derive(Serialize)]
struct AnalysisReport {
    closed: bool,
    simple: bool,
    /// Indices of two crossing segments when the curve is not simple.
    crossing: Option<(usize, usize)>,
    constant_curvature: bool,
    vertices: Option<VertexReport>,
    osserman: Option<OssermanReport>,
}

pub fn analyze(run: &RunConfig, args: &AnalyzeArgs) -> Result<()> {
    let c = io::read_curve(open(&args.curve_file)?, Format::from_path(&args.curve_file))?;
    if !c.closed {
        return Err(Error::NotClosed {
            gap: error_vector(&c).norm(),
        });
    }
    let (simple, crossing) = is_simple(&c);
    let (vertices, constant) = match detect_vertices_default(&c) {
        Ok(v) => (Some(v), false),
        Err(Error::ConstantCurvature) => (None, true),
        Err(e) => return Err(e),
    };
    let osserman = if simple && !constant {
        Some(osserman_check_seeded(&c, run.seed)?)
    } else {
        None
    };
    let report = AnalysisReport {
        closed: true,
        simple,
        crossing,
        constant_curvature: constant,
        vertices,
        osserman,
    };
    let path = write_json(run, "report.json", &report)?;

    match (&report.vertices, constant) {
        (_, true) => println!("constant curvature: a circle, vertices undefined"),
        (Some(v), _) => println!("{} vertices", v.count),
        _ => {}
    }
    if !simple {
        println!("curve is not simple (segments {:?} cross)", crossing.unwrap_or_default());
    }
    if let Some(o) = &report.osserman {
        println!(
            "circumscribed radius {:.6}, {} contact components, vertex count >= 2n: {}",
            o.circle.radius, o.n, o.bound_2n_satisfied
        );
    }
    println!("wrote {}", path.display());

    if run.svg {
        let pts = c.positions();
        let mut svg = Svg::new();
        let circle = match &report.osserman {
            Some(o) => o.circle.clone(),
            None => min_enclosing_circle_seeded(&pts, run.seed)?,
        };
        let size = 0.012 * 2.0 * circle.radius;
        svg.circle(circle.center, circle.radius, "#888888", 1.0);
        svg.polyline(&pts, "black", 1.5);
        if let Some(o) = &report.osserman {
            for comp in &o.components {
                let p = pts[comp.index];
                match comp.kind {
                    ContactKind::Point => svg.dot(p, 1.5 * size, "#2a9d3a"),
                    ContactKind::Arc => {
                        let m = if c.closed { pts.len() - 1 } else { pts.len() };
                        let len = (comp.end_index + m - comp.start_index) % m + 1;
                        let run_pts: Vec<Complex64> = (0..len).map(|k| pts[(comp.start_index + k) % m]).collect();
                        svg.polyline(&run_pts, "#2a9d3a", 4.0);
                    }
                }
            }
        }
        if let Some(v) = &report.vertices {
            for x in &v.vertices {
                let color = if x.kind == ExtremumKind::Max { "#d62828" } else { "#1d4ed8" };
                svg.dot(pts[x.index], size, color);
            }
        }
        println!("wrote {}", write_svg(run, "analysis.svg", &svg)?.display());
    }
    Ok(())
}

pub fn demo(run: &RunConfig, which: &Demo) -> Result<()> {
    match *which {
        Demo::Bicircle { a, b } => demo_bicircle(run, a, b),
        Demo::Compass { n, r, a, b } => demo_compass(run, n, r, a, b),
        Demo::Tetrahedron { rings, spokes } => demo_tetrahedron(run, rings, spokes),
    }
}

fn demo_bicircle(run: &RunConfig, a: f64, b: f64) -> Result<()> {
    let c = reference_bicircle(a, b, run.grid)?;
    let e = error_vector(&c).norm();
    println!("bicircle a = {a}, b = {b}: |E| = {e:.3e}");
    println!("wrote {}", write_curve(run, "bicircle", &c)?.display());

    let pts = c.positions();
    let n = pts.len() - 1;
    let mut svg = Svg::new();
    for q in 0..4 {
        let arc = &pts[q * n / 4..=(q + 1) * n / 4];
        svg.polyline(arc, if q % 2 == 0 { "#1d4ed8" } else { "#d62828" }, 2.0);
    }
    println!("wrote {}", write_svg(run, "bicircle.svg", &svg)?.display());
    Ok(())
}

#[derive(Serialize)]
struct CompassPanelOut {
    beta: MoebiusParameter,
    error: Complex64,
}

#[derive(Serialize)]
struct CompassOut {
    a: f64,
    b: f64,
    r: f64,
    winding: i64,
    panels: Vec<CompassPanelOut>,
}

fn demo_compass(run: &RunConfig, n: usize, r: f64, a: f64, b: f64) -> Result<()> {
    let demo = compass_demo(a, b, r, n, run.grid)?;
    let size = demo
        .panels
        .iter()
        .map(|p| extent(&p.curve.positions()))
        .fold(0.0, f64::max);
    let ring = 1.6 * size;
    let emax = demo.panels.iter().map(|p| p.error.norm()).fold(0.0, f64::max).max(1e-300);

    let mut svg = Svg::new();
    for p in &demo.panels {
        let pts = p.curve.positions();
        let mid = pts.iter().sum::<Complex64>() / pts.len() as f64;
        let at = Complex64::from_polar(ring, p.beta.beta().arg());
        let moved: Vec<Complex64> = pts.iter().map(|z| z - mid + at).collect();
        svg.polyline(&moved, "black", 1.2);
        // the gap itself, from the start point to the end point
        svg.arrow(moved[0], moved[moved.len() - 1], 0.04 * size, "#d62828", 1.5);
        // the same vector drawn to scale at the center of the figure
        let tip = 0.45 * size * p.error / emax;
        svg.arrow(Complex64::new(0.0, 0.0), tip, 0.05 * size, "#d62828", 1.5);
    }
    svg.circle(Complex64::new(0.0, 0.0), 0.45 * size, "#bbbbbb", 0.8);
    svg.text(Complex64::new(-0.45 * size, -0.62 * size), 0.08 * size, &format!("winding {}", demo.winding));

    println!("compass a = {a}, b = {b}, r = {r}, {n} panels");
    for p in &demo.panels {
        println!("  beta = {:+.4} {:+.4}i  |E| = {:.4e}", p.beta.beta().re, p.beta.beta().im, p.error.norm());
    }
    println!("winding number {}", demo.winding);
    let out = CompassOut {
        a,
        b,
        r,
        winding: demo.winding,
        panels: demo
            .panels
            .iter()
            .map(|p| CompassPanelOut {
                beta: p.beta,
                error: p.error,
            })
            .collect(),
    };
    println!("wrote {}", write_json(run, "compass.json", &out)?.display());
    println!("wrote {}", write_svg(run, "compass.svg", &svg)?.display());
    Ok(())
}

/// Oblique view of reduced coordinates `(x, y, z)`.
pub fn project(p: [f64; 3]) -> Complex64 {
    Complex64::new(p[0] + 0.4 * p[1], 0.55 * p[1] + p[2])
}

#[derive(Serialize)]
struct TetrahedronOut {
    vertices: [[f64; 3]; 4],
    core_endpoints: [[f64; 3]; 2],
    core_endpoints_projected: [Complex64; 2],
    base_point: ReducedConfigCoords,
    rings: Vec<(f64, Vec<ReducedConfigCoords>)>,
}

fn demo_tetrahedron(run: &RunConfig, rings: usize, spokes: usize) -> Result<()> {
    if rings == 0 || spokes == 0 {
        return Err(Error::InvalidInput("need at least one ring and one spoke".into()));
    }
    let base = Configuration::quarters();
    let image = |beta: Complex64| -> Result<ReducedConfigCoords> {
        Ok(to_reduced(&moebius_on_config(MoebiusParameter::new(beta)?, &base)?).1)
    };
    let xyz = |c: &ReducedConfigCoords| [c.x, c.y, c.z];
    let radii: Vec<f64> = (1..=rings).map(|k| 1.0 - 0.5f64.powi(k as i32)).collect();
    let per_ring = 128;

    let mut svg = Svg::new();
    let v = [[0.0, 0.0, 0.0], [0.0, 0.0, 1.0], [0.0, 1.0, 1.0], [1.0, 1.0, 1.0]];
    for i in 0..4 {
        for j in i + 1..4 {
            svg.line(project(v[i]), project(v[j]), "#444444", 1.0);
        }
    }

    let mut ring_out = Vec::with_capacity(rings);
    for &r in &radii {
        let pts = (0..=per_ring)
            .map(|j| image(Complex64::from_polar(r, TAU * j as f64 / per_ring as f64)))
            .collect::<Result<Vec<_>>>()?;
        let proj: Vec<Complex64> = pts.iter().map(|c| project(xyz(c))).collect();
        svg.polyline(&proj, "#1d4ed8", 0.8);
        ring_out.push((r, pts[..per_ring].to_vec()));
    }
    let rmax = radii[rings - 1];
    for s in 0..spokes {
        let phi = TAU * s as f64 / spokes as f64;
        let proj = (0..=64)
            .map(|j| Ok(project(xyz(&image(Complex64::from_polar(rmax * j as f64 / 64.0, phi))?))))
            .collect::<Result<Vec<_>>>()?;
        svg.polyline(&proj, "#7aa2e3", 0.6);
    }

    let core = [[0.0, 0.5, 0.5], [0.5, 0.5, 1.0]];
    let ends = [project(core[0]), project(core[1])];
    svg.line(ends[0], ends[1], "#d62828", 2.0);
    for e in ends {
        svg.dot(e, 0.012, "#d62828");
    }
    let p0 = image(Complex64::new(0.0, 0.0))?;
    svg.dot(project(xyz(&p0)), 0.015, "black");

    println!(
        "core segment from (0, 1/2, 1/2) to (1/2, 1/2, 1), projected to ({:.4}, {:.4}) and ({:.4}, {:.4})",
        ends[0].re, ends[0].im, ends[1].re, ends[1].im
    );
    let out = TetrahedronOut {
        vertices: v,
        core_endpoints: core,
        core_endpoints_projected: ends,
        base_point: p0,
        rings: ring_out,
    };
    println!("wrote {}", write_json(run, "tetrahedron.json", &out)?.display());
    println!("wrote {}", write_svg(run, "tetrahedron.svg", &svg)?.display());
    Ok(())
}
