//! Vertices, circumscribed circles and contact sets of closed curves.

pub mod fixtures;
mod mec;

use std::f64::consts::{PI, TAU};

use serde::{Deserialize, Serialize};

use crate::curvature::{find_extrema, Extremum};
use crate::error::{Error, Result};
use crate::integrator::{curvature_at_nodes, error_vector, is_simple, PlanarCurve};

pub use mec::{min_enclosing_circle, min_enclosing_circle_seeded, EnclosingCircle, DEFAULT_MEC_SEED};

/// Contact band as a fraction of the circumradius.
pub const DEFAULT_BAND_REL: f64 = 1e-5;
/// Plateau tolerance for vertices as a fraction of the largest curvature.
pub const VERTEX_PLATEAU_REL: f64 = 1e-7;
/// Allowance on `κ ≥ K` at contact components, as a fraction of `K`.
pub const CURVATURE_ALLOWANCE: f64 = 0.02;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum ContactKind {
    Point,
    Arc,
}

/// A maximal run of samples within the contact band.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct ContactComponent {
    /// Arc-length interval `[start, end]`, wrapping past the end of the
    /// curve when `wraps` is set.
    pub start: f64,
    pub end: f64,
    pub wraps: bool,
    pub start_index: usize,
    pub end_index: usize,
    /// Sample farthest from the center.
    pub index: usize,
    pub kind: ContactKind,
}

/// A vertex: a local extremum of curvature, possibly a plateau.
pub type Vertex = Extremum;

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct VertexReport {
    pub vertices: Vec<Vertex>,
    pub count: usize,
}

/// A sample offered as evidence for one of the curvature inequalities.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct Witness {
    pub index: usize,
    pub param: f64,
    pub curvature: f64,
    /// Whether the inequality holds at this sample.
    pub holds: bool,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct OssermanReport {
    pub circle: EnclosingCircle,
    /// Curvature `K = 1/R` of the circumscribed circle.
    pub circle_curvature: f64,
    pub components: Vec<ContactComponent>,
    pub n: usize,
    pub vertices: VertexReport,
    pub vertex_count: usize,
    pub bound_2n_satisfied: bool,
    /// Per gap between consecutive components: a sample with `κ < K`.
    pub per_gap_low_points: Vec<Witness>,
    /// Per component: a sample with `κ ≥ K` (up to the allowance).
    pub per_component_high_points: Vec<Witness>,
    pub bonus_vertices: usize,
    /// `vertex_count ≥ 2n + bonus`, checked when every component is an arc.
    pub bonus_satisfied: Option<bool>,
    /// A single component, where at least four vertices are expected.
    pub single_component: bool,
    pub contact_spans_semicircle: bool,
}

/// Samples of a closed curve without the repeated closing sample.
fn cyclic_len(c: &PlanarCurve) -> usize {
    if c.closed {
        c.samples.len() - 1
    } else {
        c.samples.len()
    }
}

/// Maximal cyclic runs of samples within `band` of the circle.
///
/// A run is an arc when it contains at least three consecutive samples
/// lying on the circle to within a thousandth of the band; otherwise the
/// curve only grazes the circle there and the run is a point.
pub fn contact_components(c: &PlanarCurve, circle: &EnclosingCircle, band: f64) -> Result<Vec<ContactComponent>> {
    if !(band > 0.0) {
        return Err(Error::InvalidInput(format!("contact band must be positive, got {band}")));
    }
    let m = cyclic_len(c);
    let depth: Vec<f64> = c.samples[..m]
        .iter()
        .map(|p| circle.radius - (p.pos - circle.center).norm())
        .collect();
    let inside: Vec<bool> = depth.iter().map(|&d| d < band).collect();
    let tight_band = (1e-3 * band).max(1e-12 * circle.radius);
    let kind_of = |idx: &[usize]| {
        let mut best = 0;
        let mut run = 0;
        for &j in idx {
            if depth[j] < tight_band {
                run += 1;
                best = best.max(run);
            } else {
                run = 0;
            }
        }
        if best >= 3 {
            ContactKind::Arc
        } else {
            ContactKind::Point
        }
    };
    let deepest = |idx: &[usize]| *idx.iter().min_by(|&&a, &&b| depth[a].total_cmp(&depth[b])).unwrap();

    let Some(gap) = inside.iter().position(|&x| !x) else {
        if m == 0 {
            return Err(Error::NoContact);
        }
        let all: Vec<usize> = (0..m).collect();
        return Ok(vec![ContactComponent {
            start: c.samples[0].s,
            end: c.samples[m - 1].s,
            wraps: false,
            start_index: 0,
            end_index: m - 1,
            index: deepest(&all),
            kind: kind_of(&all),
        }]);
    };

    let mut out = Vec::new();
    let mut run: Vec<usize> = Vec::new();
    for step in 1..=m {
        let j = (gap + step) % m;
        if inside[j] {
            run.push(j);
        }
        if (!inside[j] || step == m) && !run.is_empty() {
            let (a, b) = (run[0], run[run.len() - 1]);
            out.push(ContactComponent {
                start: c.samples[a].s,
                end: c.samples[b].s,
                wraps: a > b,
                start_index: a,
                end_index: b,
                index: deepest(&run),
                kind: kind_of(&run),
            });
            run.clear();
        }
    }
    if out.is_empty() {
        return Err(Error::NoContact);
    }
    out.sort_by_key(|k| k.start_index);
    Ok(out)
}

fn members(comp: &ContactComponent, m: usize) -> Vec<usize> {
    let len = (comp.end_index + m - comp.start_index) % m + 1;
    (0..len).map(|k| (comp.start_index + k) % m).collect()
}

/// Whether the contact set reaches around the center: no open half-plane
/// through the center contains it, up to an angular allowance derived
/// from the band.
pub fn contact_spans_semicircle(c: &PlanarCurve, circle: &EnclosingCircle, comps: &[ContactComponent], band: f64) -> bool {
    let m = cyclic_len(c);
    let mut angles: Vec<f64> = Vec::new();
    for comp in comps {
        match comp.kind {
            ContactKind::Point => angles.push((c.samples[comp.index].pos - circle.center).arg()),
            ContactKind::Arc => {
                for j in members(comp, m) {
                    angles.push((c.samples[j].pos - circle.center).arg());
                }
            }
        }
    }
    if angles.is_empty() {
        return false;
    }
    angles.sort_by(f64::total_cmp);
    let mut gap = angles[0] + TAU - angles[angles.len() - 1];
    for w in angles.windows(2) {
        gap = gap.max(w[1] - w[0]);
    }
    let tol = 4.0 * (band / circle.radius).sqrt();
    gap <= PI + tol
}

/// Local extrema of the estimated curvature of a closed curve, with
/// plateaus counted once.
pub fn detect_vertices(c: &PlanarCurve, plateau_tol: f64) -> Result<VertexReport> {
    if !c.closed {
        return Err(Error::NotClosed {
            gap: error_vector(c).norm(),
        });
    }
    let m = cyclic_len(c);
    let est = curvature_at_nodes(c)?;
    let params: Vec<f64> = c.samples[..m].iter().map(|p| p.s).collect();
    let ext = find_extrema(&params, &est[..m], plateau_tol);
    if ext.is_empty() {
        return Err(Error::ConstantCurvature);
    }
    let vertices = ext;
    Ok(VertexReport {
        count: vertices.len(),
        vertices,
    })
}

/// [`detect_vertices`] with a plateau tolerance relative to the largest
/// curvature.
pub fn detect_vertices_default(c: &PlanarCurve) -> Result<VertexReport> {
    let est = curvature_at_nodes(c)?;
    let scale = est.iter().fold(0.0f64, |m, v| m.max(v.abs()));
    detect_vertices(c, VERTEX_PLATEAU_REL * scale.max(1e-300))
}

/// Vertex counts against the number of components where the curve meets
/// its circumscribed circle.
pub fn osserman_check(c: &PlanarCurve) -> Result<OssermanReport> {
    osserman_check_seeded(c, DEFAULT_MEC_SEED)
}

/// [`osserman_check`] with an explicit shuffle seed for the circle.
pub fn osserman_check_seeded(c: &PlanarCurve, seed: u64) -> Result<OssermanReport> {
    if !c.closed {
        return Err(Error::NotClosed {
            gap: error_vector(c).norm(),
        });
    }
    if let (false, Some((i, j))) = is_simple(c) {
        return Err(Error::NotSimple(i, j));
    }
    let m = cyclic_len(c);
    let pts: Vec<_> = c.samples[..m].iter().map(|p| p.pos).collect();
    let circle = min_enclosing_circle_seeded(&pts, seed)?;
    let band = DEFAULT_BAND_REL * circle.radius;
    let components = contact_components(c, &circle, band)?;
    let vertices = detect_vertices_default(c)?;
    let spans = contact_spans_semicircle(c, &circle, &components, band);

    let big_k = circle.curvature();
    let orient = if c.turning() < 0.0 { -1.0 } else { 1.0 };
    let kappa: Vec<f64> = curvature_at_nodes(c)?.iter().map(|v| orient * v).collect();
    let witness = |idx: &mut dyn Iterator<Item = usize>, high: bool| -> Option<Witness> {
        let pick = idx.fold(None, |best: Option<usize>, j| match best {
            Some(b) if (high && kappa[b] >= kappa[j]) || (!high && kappa[b] <= kappa[j]) => Some(b),
            _ => Some(j),
        })?;
        let v = kappa[pick];
        Some(Witness {
            index: pick,
            param: c.samples[pick].s,
            curvature: v,
            holds: if high { v >= big_k * (1.0 - CURVATURE_ALLOWANCE) } else { v < big_k },
        })
    };

    let n = components.len();
    let mut high = Vec::with_capacity(n);
    let mut low = Vec::with_capacity(n);
    for (i, comp) in components.iter().enumerate() {
        // widen by two samples so that grazing contacts see their peak
        let len = (comp.end_index + m - comp.start_index) % m + 1;
        let mut span = (0..len + 4).map(|k| (comp.start_index + m - 2 + k) % m);
        if let Some(w) = witness(&mut span, true) {
            high.push(w);
        }
        let next = &components[(i + 1) % n];
        let from = (comp.end_index + 1) % m;
        let gap_len = (next.start_index + m - from) % m;
        if gap_len > 0 {
            let mut gap = (0..gap_len).map(|k| (from + k) % m);
            if let Some(w) = witness(&mut gap, false) {
                low.push(w);
            }
        }
    }

    let arcs = components.iter().filter(|k| k.kind == ContactKind::Arc).count();
    let bonus_vertices = 2 * arcs;
    let vertex_count = vertices.count;
    let bonus_satisfied = (arcs == n).then_some(vertex_count >= 2 * n + bonus_vertices);
    Ok(OssermanReport {
        circle_curvature: big_k,
        circle,
        n,
        vertex_count,
        bound_2n_satisfied: vertex_count >= 2 * n,
        per_gap_low_points: low,
        per_component_high_points: high,
        bonus_vertices,
        bonus_satisfied,
        single_component: n == 1,
        contact_spans_semicircle: spans,
        components,
        vertices,
    })
}
