//! Curvature and curve files in CSV and JSON.

use std::f64::consts::{PI, TAU};
use std::io::{Read, Write};

use num_complex::Complex64;
use serde::{Deserialize, Serialize};

use crate::curvature::{CurvatureProfile, Interp, ScaleFactor};
use crate::error::{Error, Result};
use crate::integrator::{CurveSample, PlanarCurve};

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Format {
    Csv,
    Json,
}

impl Format {
    /// Guesses the format from a file name, defaulting to CSV.
    pub fn from_path(path: &std::path::Path) -> Format {
        match path.extension().and_then(|e| e.to_str()) {
            Some(e) if e.eq_ignore_ascii_case("json") => Format::Json,
            _ => Format::Csv,
        }
    }

    pub fn extension(self) -> &'static str {
        match self {
            Format::Csv => "csv",
            Format::Json => "json",
        }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct CurvatureJson {
    pub n: usize,
    pub samples: Vec<f64>,
    pub interp: Interp,
}

#[derive(Debug, Deserialize)]
struct CurvatureRow {
    t: f64,
    kappa: f64,
}

#[derive(Debug, Serialize, Deserialize)]
struct CurveRow {
    s: f64,
    x: f64,
    y: f64,
    theta: f64,
}

/// Reads `t,kappa` rows with `t` strictly increasing in `[0, 2π)` and
/// resamples them periodically and linearly onto a grid of `n` points.
pub fn read_curvature_csv<R: Read>(reader: R, n: usize) -> Result<CurvatureProfile> {
    let mut rdr = csv::ReaderBuilder::new().trim(csv::Trim::All).from_reader(reader);
    let headers = rdr.headers()?.clone();
    if headers.iter().collect::<Vec<_>>() != ["t", "kappa"] {
        return Err(Error::Parse(format!("expected header `t,kappa`, found `{}`", headers.iter().collect::<Vec<_>>().join(","))));
    }
    let rows = rdr.deserialize().collect::<std::result::Result<Vec<CurvatureRow>, _>>()?;
    if rows.is_empty() {
        return Err(Error::Parse("curvature file has no rows".into()));
    }
    for (i, r) in rows.iter().enumerate() {
        if !(r.t.is_finite() && r.kappa.is_finite()) || r.t < 0.0 || r.t >= TAU {
            return Err(Error::Parse(format!("row {}: t must lie in [0, 2pi) and values be finite", i + 1)));
        }
        if i > 0 && r.t <= rows[i - 1].t {
            return Err(Error::Parse(format!("row {}: t must be strictly increasing", i + 1)));
        }
    }
    let m = rows.len();
    let value = |t: f64| {
        // last row with rows[j].t <= t, wrapping below the first
        let j = rows.partition_point(|r| r.t <= t);
        let (lo, hi) = if j == 0 {
            (&rows[m - 1], &rows[0])
        } else {
            (&rows[j - 1], &rows[j % m])
        };
        let mut span = hi.t - lo.t;
        let mut off = t - lo.t;
        if span <= 0.0 {
            span += TAU;
        }
        if off < 0.0 {
            off += TAU;
        }
        if m == 1 {
            lo.kappa
        } else {
            lo.kappa + (hi.kappa - lo.kappa) * off / span
        }
    };
    CurvatureProfile::from_fn(value, n, Interp::Linear)
}

/// Reads `{"n", "samples", "interp"}`, moved onto a grid of `n` points.
pub fn read_curvature_json<R: Read>(reader: R, n: usize) -> Result<CurvatureProfile> {
    let doc: CurvatureJson = serde_json::from_reader(reader)?;
    if doc.n != doc.samples.len() {
        return Err(Error::Parse(format!("n = {} but {} samples given", doc.n, doc.samples.len())));
    }
    let k = CurvatureProfile::sampled(doc.samples, doc.interp)?;
    if k.n() == n {
        Ok(k)
    } else {
        k.with_grid(n)
    }
}

pub fn read_curvature<R: Read>(reader: R, format: Format, n: usize) -> Result<CurvatureProfile> {
    match format {
        Format::Csv => read_curvature_csv(reader, n),
        Format::Json => read_curvature_json(reader, n),
    }
}

pub fn write_curvature_csv<W: Write>(writer: W, k: &CurvatureProfile) -> Result<()> {
    let mut w = csv::Writer::from_writer(writer);
    w.write_record(["t", "kappa"])?;
    for (t, v) in k.grid().into_iter().zip(k.samples()) {
        w.write_record([t.to_string(), v.to_string()])?;
    }
    w.flush()?;
    Ok(())
}

pub fn write_curvature_json<W: Write>(writer: W, k: &CurvatureProfile) -> Result<()> {
    let doc = CurvatureJson {
        n: k.n(),
        samples: k.samples(),
        interp: k.interp(),
    };
    serde_json::to_writer(writer, &doc)?;
    Ok(())
}

pub fn write_curve_csv<W: Write>(writer: W, c: &PlanarCurve) -> Result<()> {
    let mut w = csv::Writer::from_writer(writer);
    for p in &c.samples {
        w.serialize(CurveRow {
            s: p.s,
            x: p.pos.re,
            y: p.pos.im,
            theta: p.theta,
        })?;
    }
    w.flush()?;
    Ok(())
}

pub fn write_curve_json<W: Write>(writer: W, c: &PlanarCurve) -> Result<()> {
    serde_json::to_writer(writer, c)?;
    Ok(())
}

pub fn write_curve<W: Write>(writer: W, c: &PlanarCurve, format: Format) -> Result<()> {
    match format {
        Format::Csv => write_curve_csv(writer, c),
        Format::Json => write_curve_json(writer, c),
    }
}

/// Removes `2π` jumps so that consecutive tangent angles differ by less
/// than `π`.
fn relift(samples: &mut [CurveSample]) {
    for j in 1..samples.len() {
        let prev = samples[j - 1].theta;
        let d = samples[j].theta - prev;
        if d.abs() > PI {
            samples[j].theta -= TAU * (d / TAU).round();
        }
    }
}

/// Reads `s,x,y,theta` rows; the closed flag is recomputed from the data.
pub fn read_curve_csv<R: Read>(reader: R) -> Result<PlanarCurve> {
    let mut rdr = csv::ReaderBuilder::new().trim(csv::Trim::All).from_reader(reader);
    let headers = rdr.headers()?.clone();
    if headers.iter().collect::<Vec<_>>() != ["s", "x", "y", "theta"] {
        return Err(Error::Parse(format!("expected header `s,x,y,theta`, found `{}`", headers.iter().collect::<Vec<_>>().join(","))));
    }
    let mut samples = Vec::new();
    for row in rdr.deserialize() {
        let r: CurveRow = row?;
        samples.push(CurveSample {
            s: r.s,
            pos: Complex64::new(r.x, r.y),
            theta: r.theta,
        });
    }
    relift(&mut samples);
    PlanarCurve::new(samples, ScaleFactor::ONE)
}

/// Reads a serialized [`PlanarCurve`], revalidating it.
pub fn read_curve_json<R: Read>(reader: R) -> Result<PlanarCurve> {
    let raw: PlanarCurve = serde_json::from_reader(reader)?;
    let mut samples = raw.samples;
    relift(&mut samples);
    let c = PlanarCurve::new(samples, raw.scale)?;
    match raw.param {
        Some(p) => c.with_param(p),
        None => Ok(c),
    }
}

pub fn read_curve<R: Read>(reader: R, format: Format) -> Result<PlanarCurve> {
    match format {
        Format::Csv => read_curve_csv(reader),
        Format::Json => read_curve_json(reader),
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::integrator::integrate_curve;

    #[test]
    fn curvature_csv_resamples_linearly() {
        let text = "t,kappa\n0,1\n3.141592653589793,3\n";
        let k = read_curvature_csv(text.as_bytes(), 8).unwrap();
        let s = k.samples();
        assert!((s[0] - 1.0).abs() < 1e-12);
        assert!((s[2] - 2.0).abs() < 1e-12);
        assert!((s[4] - 3.0).abs() < 1e-12);
        // wraps back towards t = 2π
        assert!((s[6] - 2.0).abs() < 1e-12);
    }

    #[test]
    fn curvature_csv_round_trip() {
        let k = CurvatureProfile::from_fn(|t| 1.5 + (2.0 * t).cos(), 64, Interp::Linear).unwrap();
        let mut buf = Vec::new();
        write_curvature_csv(&mut buf, &k).unwrap();
        let back = read_curvature_csv(buf.as_slice(), 64).unwrap();
        assert_eq!(back.samples(), k.samples());
    }

    #[test]
    fn curvature_csv_rejects_bad_rows() {
        assert!(read_curvature_csv("t,kappa\n1,1\n0.5,2\n".as_bytes(), 16).is_err());
        assert!(read_curvature_csv("t,kappa\n7,1\n".as_bytes(), 16).is_err());
        assert!(read_curvature_csv("time,k\n0,1\n".as_bytes(), 16).is_err());
        assert!(read_curvature_csv("t,kappa\n".as_bytes(), 16).is_err());
        assert!(read_curvature_csv("t,kappa\n0,abc\n".as_bytes(), 16).is_err());
    }

    #[test]
    fn curvature_json() {
        let text = r#"{"n": 8, "samples": [1,2,3,4,5,6,7,8], "interp": "step"}"#;
        let k = read_curvature_json(text.as_bytes(), 8).unwrap();
        assert_eq!(k.interp(), Interp::Step);
        assert_eq!(k.samples()[3], 4.0);
        let bad = r#"{"n": 9, "samples": [1,2,3,4,5,6,7,8], "interp": "step"}"#;
        assert!(read_curvature_json(bad.as_bytes(), 8).is_err());
        let mut buf = Vec::new();
        write_curvature_json(&mut buf, &k).unwrap();
        assert_eq!(read_curvature_json(buf.as_slice(), 8).unwrap(), k);
    }

    #[test]
    fn curve_round_trips() {
        let c = integrate_curve(&CurvatureProfile::constant(1.0, 128).unwrap()).unwrap();
        for f in [Format::Csv, Format::Json] {
            let mut buf = Vec::new();
            write_curve(&mut buf, &c, f).unwrap();
            let back = read_curve(buf.as_slice(), f).unwrap();
            assert!(back.closed);
            assert_eq!(back.samples, c.samples);
        }
    }

    #[test]
    fn wrapped_angles_are_relifted() {
        let mut text = String::from("s,x,y,theta\n");
        let n = 64;
        for j in 0..=n {
            let t = TAU * j as f64 / n as f64;
            let theta = (t + PI / 2.0).rem_euclid(TAU);
            text.push_str(&format!("{t},{},{},{theta}\n", t.cos(), t.sin()));
        }
        let c = read_curve_csv(text.as_bytes()).unwrap();
        assert!((c.turning() - TAU).abs() < 1e-12);
    }
}
