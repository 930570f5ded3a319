//! Acceptance criteria, each run at its stated tolerance and time budget.
//! Prints one PASS/FAIL line per criterion and fails if any criterion fails.

use std::f64::consts::{PI, TAU};
use std::time::{Duration, Instant};

use fourvertex::analysis::fixtures::{ellipse, ellipse_curvature, limacon, random_convex, random_star};
use fourvertex::analysis::{detect_vertices_default, osserman_check, ContactKind};
use fourvertex::bicircle::{closed_form_error, is_core, Configuration};
use fourvertex::curvature::{normalize_total, CurvatureProfile, ExtremumKind, Interp, StepSpec};
use fourvertex::integrator::{curvature_at_nodes, error_vector, integrate_curve, is_simple};
use fourvertex::moebius::{evaluation_inverse, moebius_on_config};
use fourvertex::solver::{synthesize, winding_at_radius, SynthesisOptions};
use num_complex::Complex64;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rayon::prelude::*;

struct Outcome {
    pass: bool,
    detail: String,
}

fn outcome(pass: bool, detail: String) -> Outcome {
    Outcome { pass, detail }
}

fn rotated<R: Rng>(rng: &mut R, c: &Configuration) -> Configuration {
    let r = Complex64::from_polar(1.0, rng.gen_range(0.0..TAU));
    Configuration::new(c.points().map(|z| z * r)).unwrap()
}

/// Error vector of the step curve through direct integration.
fn integrated_error(c: &Configuration, a: f64, b: f64, n: usize) -> Complex64 {
    let t = c.angles();
    let step = StepSpec::new(a, b, [0.0, t[1], t[2], t[3]]).unwrap();
    let (k, _) = normalize_total(&step.profile(n).unwrap()).unwrap();
    error_vector(&integrate_curve(&k).unwrap())
}

fn random_values<R: Rng>(rng: &mut R) -> (f64, f64) {
    let a = rng.gen_range(0.05..3.0);
    (a, a + rng.gen_range(0.05..3.0))
}

fn limacon_fixture() -> Outcome {
    let c = limacon(8192).unwrap();
    let v = detect_vertices_default(&c).unwrap();
    let lo = v.vertices.iter().filter(|x| x.kind == ExtremumKind::Min).map(|x| x.value).fold(f64::INFINITY, f64::min);
    let hi = v.vertices.iter().filter(|x| x.kind == ExtremumKind::Max).map(|x| x.value).fold(f64::NEG_INFINITY, f64::max);
    let (simple, crossing) = is_simple(&c);
    let pass = (lo - 5.0 / 9.0).abs() < 1e-4 && (hi - 3.0).abs() < 1e-4 && v.count == 2 && !simple && crossing.is_some();
    outcome(
        pass,
        format!("min {lo:.7} (5/9), max {hi:.7} (3), {} vertices, crossing {crossing:?}", v.count),
    )
}

fn closure_equivalence() -> Outcome {
    let mut rng = ChaCha8Rng::seed_from_u64(20);
    let (mut agree, mut closed_count) = (0, 0);
    let total = 1000;
    for j in 0..total {
        let c = if j % 2 == 0 {
            Configuration::random_core(&mut rng, 0.01)
        } else {
            Configuration::random_reduced(&mut rng, 0.01)
        };
        let (a, b) = random_values(&mut rng);
        let closes = integrated_error(&c, a, b, 256).norm() < 1e-9;
        let l = c.arc_lengths();
        let opposite = (l[0] - l[2]).abs() < 1e-9 && (l[1] - l[3]).abs() < 1e-9;
        let core = is_core(&c, 1e-9);
        if closes == opposite && opposite == core {
            agree += 1;
        }
        closed_count += closes as usize;
    }
    outcome(agree == total, format!("{agree}/{total} agree, {closed_count} closing"))
}

fn closed_form_matches_integration() -> Outcome {
    let mut rng = ChaCha8Rng::seed_from_u64(30);
    let mut worst = 0.0f64;
    for _ in 0..1000 {
        let c = Configuration::random_reduced(&mut rng, 0.01);
        let (a, b) = random_values(&mut rng);
        let d = (closed_form_error(&c, a, b).unwrap() - integrated_error(&c, a, b, 256)).norm();
        worst = worst.max(d);
    }
    outcome(worst < 1e-9, format!("max deviation {worst:.2e}"))
}

fn winding_on_circles() -> Outcome {
    let mut lines = Vec::new();
    let mut pass = true;
    for (a, b) in [(0.5, 2.0), (1.0, 3.0), (0.2, 0.9)] {
        let k0 = StepSpec::quarters(a, b).unwrap().profile(4096).unwrap();
        let ws: Vec<i64> = [0.05, 0.1, 0.2, 0.4]
            .par_iter()
            .map(|&r| winding_at_radius(&k0, r).unwrap_or(0))
            .collect();
        pass &= ws.iter().all(|w| w.abs() == 1) && ws.iter().all(|&w| w == ws[0]);
        lines.push(format!("({a},{b}): {ws:?}"));
    }
    outcome(pass, lines.join(", "))
}

fn evaluation_round_trip() -> Outcome {
    let mut rng = ChaCha8Rng::seed_from_u64(50);
    let (mut worst, mut worst_core, mut worst_beta) = (0.0f64, 0.0f64, 0.0f64);
    let mut failures = 0;
    for _ in 0..1000 {
        let base = Configuration::random_reduced(&mut rng, 0.01);
        let q = rotated(&mut rng, &base);
        match evaluation_inverse(&q) {
            Ok((core, m)) => {
                let back = moebius_on_config(m, &core).unwrap();
                let d = back.points().iter().zip(q.points()).map(|(x, y)| (x - y).norm()).fold(0.0, f64::max);
                worst = worst.max(d);
                worst_core = worst_core.max(core.alternating_sum().norm());
            }
            Err(_) => failures += 1,
        }
        let c = Configuration::random_core(&mut rng, 0.01);
        let c = rotated(&mut rng, &c);
        match evaluation_inverse(&c) {
            Ok((_, m)) => worst_beta = worst_beta.max(m.beta().norm()),
            Err(_) => failures += 1,
        }
    }
    outcome(
        failures == 0 && worst < 1e-9 && worst_core < 1e-9 && worst_beta < 1e-10,
        format!("reassembly {worst:.2e}, core residual {worst_core:.2e}, |beta| on core {worst_beta:.2e}, failures {failures}"),
    )
}

/// Arc-length configuration whose division points by tangent angle are at
/// `0, t1, t2, t3` for curvature values in the ratio `a : b`.
fn from_angle_config(t: [f64; 3], a: f64, b: f64) -> Configuration {
    let turns = [t[0], t[1] - t[0], t[2] - t[1], TAU - t[2]];
    let vals = [a, b, a, b];
    let raw: Vec<f64> = turns.iter().zip(vals).map(|(d, v)| d / v).collect();
    let total: f64 = raw.iter().sum();
    let l: Vec<f64> = raw.iter().map(|x| TAU * x / total).collect();
    Configuration::from_angles([0.0, l[0], l[0] + l[1], l[0] + l[1] + l[2]]).unwrap()
}

fn transversality() -> Outcome {
    let mut rng = ChaCha8Rng::seed_from_u64(60);
    let h = 1e-6;
    let (mut worst, mut min_det) = (0.0f64, f64::INFINITY);
    for _ in 0..100 {
        let (a, b) = random_values(&mut rng);
        let x = rng.gen_range(0.05..PI - 0.05);
        let t = [x, PI, PI + x];
        let e = |t: [f64; 3]| closed_form_error(&from_angle_config(t, a, b), a, b).unwrap();
        // factor (1/(i bP) − 1/(i aP)) at the base point
        let base = from_angle_config(t, a, b);
        let l = base.arc_lengths();
        let sigma = TAU / (a * (l[0] + l[2]) + b * (l[1] + l[3]));
        let i = Complex64::i();
        let factor = 1.0 / (i * b * sigma) - 1.0 / (i * a * sigma);
        let (q2, q3) = (Complex64::from_polar(1.0, t[0]), Complex64::from_polar(1.0, t[1]));
        let d2 = factor * (-i * q2);
        let d3 = factor * (i * q3);
        let fd2 = (e([t[0] + h, t[1], t[2]]) - e([t[0] - h, t[1], t[2]])) / (2.0 * h);
        let fd3 = (e([t[0], t[1] + h, t[2]]) - e([t[0], t[1] - h, t[2]])) / (2.0 * h);
        worst = worst.max((fd2 - d2).norm() / d2.norm()).max((fd3 - d3).norm() / d3.norm());
        let det = (d2.re * d3.im - d2.im * d3.re).abs();
        min_det = min_det.min(det);
    }
    outcome(worst < 1e-4 && min_det > 1e-6, format!("max relative FD error {worst:.2e}, min |det| {min_det:.2e}"))
}

fn synthesis_case(name: &str, f: impl Fn(f64) -> f64) -> (bool, String) {
    let k = CurvatureProfile::from_fn(&f, 4096, Interp::Linear).unwrap();
    let start = Instant::now();
    let res = match synthesize(&k, &SynthesisOptions::default()) {
        Ok(r) => r,
        Err(e) => return (false, format!("{name}: {e}")),
    };
    let elapsed = start.elapsed();
    let c = &res.curve;
    let scale = res.scale.value().abs();
    let gap = error_vector(c).norm() / scale;
    let simple = is_simple(c).0;
    let est = curvature_at_nodes(c).unwrap();
    let params = c.param.as_ref().expect("reparameterized curve");
    let (a, b) = res.abab.map(|p| (p.a, p.b)).unwrap_or((0.0, 0.0));
    let tol = if res.abab.is_some() { 0.05 * (b - a) } else { 1e-6 };
    // measure, in curve parameter normalized to [0, 2π], of samples whose
    // curvature misses the target
    let len = c.length();
    let m = c.samples.len() - 1;
    let bad: Vec<bool> = (0..m).map(|j| (est[j] - f(params[j])).abs() >= tol).collect();
    let mut measure = 0.0;
    for j in 0..m {
        if bad[j] || bad[(j + 1) % m] {
            measure += (c.samples[j + 1].s - c.samples[j].s) / len * TAU;
        }
    }
    let within = if res.abab.is_some() { measure < res.eps_used } else { measure == 0.0 };
    let pass = c.closed && gap < 1e-9 * TAU && simple && within && elapsed < Duration::from_secs(60);
    (
        pass,
        format!(
            "{name}: |E| {gap:.1e}, simple {simple}, mismatch set {measure:.3} vs eps {}, {:.2}s",
            res.eps_used,
            elapsed.as_secs_f64()
        ),
    )
}

fn full_synthesis() -> Outcome {
    let cases: Vec<(bool, String)> = vec![
        synthesis_case("1", |_| 1.0),
        synthesis_case("1.5+cos2t", |t| 1.5 + (2.0 * t).cos()),
        synthesis_case("cos2t+0.05", |t| (2.0 * t).cos() + 0.05),
        synthesis_case("-(1.5+cos2t)", |t| -(1.5 + (2.0 * t).cos())),
    ];
    outcome(cases.iter().all(|c| c.0), cases.into_iter().map(|c| c.1).collect::<Vec<_>>().join("; "))
}

fn corpus() -> Outcome {
    let results: Vec<Result<(usize, usize, bool), String>> = (0..1000u64)
        .into_par_iter()
        .map(|j| {
            let mut rng = ChaCha8Rng::seed_from_u64(80_000 + j);
            // few harmonics keep the vertex count near its lower bound
            let max_k = rng.gen_range(1..=6usize);
            let (c, _) = if j % 2 == 0 {
                random_convex(&mut rng, max_k.max(2), 0.9, 2048)
            } else {
                random_star(&mut rng, max_k, 0.4, 2048)
            }
            .map_err(|e| e.to_string())?;
            let r = osserman_check(&c).map_err(|e| format!("curve {j}: {e}"))?;
            Ok((r.vertex_count, r.n, r.contact_spans_semicircle))
        })
        .collect();
    let mut failures = Vec::new();
    let mut min_vertices = usize::MAX;
    let mut at_four = 0;
    for (j, r) in results.iter().enumerate() {
        match r {
            Ok((v, n, spans)) => {
                min_vertices = min_vertices.min(*v);
                at_four += (*v == 4) as usize;
                if *v < 4 || *v < 2 * n || !spans {
                    failures.push(format!("curve {j}: {v} vertices, n {n}, spans {spans}"));
                }
            }
            Err(e) => failures.push(e.clone()),
        }
    }
    outcome(
        failures.is_empty(),
        format!("{} failures of 1000, fewest vertices {min_vertices} ({at_four} curves with 4) {:?}", failures.len(), failures.iter().take(3).collect::<Vec<_>>()),
    )
}

fn ellipse_fixture() -> Outcome {
    let n = 8192;
    let c = ellipse(2.0, 1.0, n).unwrap();
    let r = osserman_check(&c).unwrap();
    let points = r.components.iter().all(|k| k.kind == ContactKind::Point);
    let antipodal = r.n == 2 && {
        let p = c.samples[r.components[0].index].pos - r.circle.center;
        let q = c.samples[r.components[1].index].pos - r.circle.center;
        (p + q).norm() < 1e-6
    };
    let values_ok = r.vertices.vertices.iter().all(|v| {
        let t = TAU * v.index as f64 / n as f64;
        let want = ellipse_curvature(2.0, 1.0, t);
        let expected = if v.kind == ExtremumKind::Max { 2.0 } else { 0.25 };
        (v.value - expected).abs() < 1e-4 && (want - expected).abs() < 1e-9
    });
    let pass = (r.circle.radius - 2.0).abs() < 1e-6 && points && antipodal && r.vertex_count == 4 && values_ok;
    outcome(
        pass,
        format!(
            "radius {:.9}, {} components (points {points}, antipodal {antipodal}), {} vertices {:?}",
            r.circle.radius,
            r.n,
            r.vertex_count,
            r.vertices.vertices.iter().map(|v| format!("{:.6}", v.value)).collect::<Vec<_>>()
        ),
    )
}

/// Name, check and optional time budget.
type Criterion = (&'static str, fn() -> Outcome, Option<Duration>);

fn main() {
    let criteria: Vec<Criterion> = vec![
        ("1 limacon fixture", limacon_fixture, Some(Duration::from_secs(1))),
        ("2 closure equivalence", closure_equivalence, Some(Duration::from_secs(10))),
        ("3 closed-form error map", closed_form_matches_integration, Some(Duration::from_secs(10))),
        ("4 winding on circles", winding_on_circles, Some(Duration::from_secs(30))),
        ("5 evaluation round trip", evaluation_round_trip, Some(Duration::from_secs(5))),
        ("6 core transversality", transversality, None),
        ("7 full synthesis", full_synthesis, None),
        ("8 vertex corpus", corpus, Some(Duration::from_secs(300))),
        ("9 ellipse fixture", ellipse_fixture, None),
    ];
    let total = criteria.len();
    let mut failed = Vec::new();
    for (name, run, budget) in criteria {
        let start = Instant::now();
        let mut o = run();
        let elapsed = start.elapsed();
        if let Some(limit) = budget {
            if elapsed >= limit {
                o.pass = false;
                o.detail.push_str(&format!("; over time budget {limit:?}"));
            }
        }
        println!(
            "criterion {name}: {} ({}) in {:.2}s",
            if o.pass { "PASS" } else { "FAIL" },
            o.detail,
            elapsed.as_secs_f64()
        );
        if !o.pass {
            failed.push(name);
        }
    }
    if !failed.is_empty() {
        eprintln!("failed criteria: {failed:?}");
        std::process::exit(1);
    }
    println!("all {total} criteria passed");
}
