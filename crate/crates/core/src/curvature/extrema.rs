use serde::{Deserialize, Serialize};

use super::CurvatureProfile;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum ExtremumKind {
    Max,
    Min,
}

/// A local extremum of a cyclic sequence, possibly spread over a plateau.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct Extremum {
    pub kind: ExtremumKind,
    pub value: f64,
    /// Index of the extreme sample.
    pub index: usize,
    /// Parameter interval `[start, end]` of the plateau.
    pub start: f64,
    pub end: f64,
    /// The plateau crosses the start of the period.
    pub wraps: bool,
}

/// Extrema of a sampled periodic profile on its uniform grid.
pub fn local_extrema(k: &CurvatureProfile, plateau_tol: f64) -> Vec<Extremum> {
    find_extrema(&k.grid(), &k.samples(), plateau_tol)
}

/// Extrema of the cyclic sequence `values` sampled at `params`.
///
/// Runs of samples that stay within `plateau_tol` of each other act as a
/// single plateau: a maximum is registered only once the sequence has
/// dropped more than `plateau_tol` below it, and likewise for minima. The
/// result alternates between maxima and minima, sorted by index. A sequence
/// whose range is within `plateau_tol` has no extrema.
pub fn find_extrema(params: &[f64], values: &[f64], plateau_tol: f64) -> Vec<Extremum> {
    let n = values.len();
    if n < 3 || params.len() != n {
        return Vec::new();
    }
    let (mut i0, mut vmax, mut vmin) = (0, f64::NEG_INFINITY, f64::INFINITY);
    for (i, &v) in values.iter().enumerate() {
        if v > vmax {
            vmax = v;
            i0 = i;
        }
        vmin = vmin.min(v);
    }
    if vmax - vmin <= plateau_tol {
        return Vec::new();
    }

    let at = |k: usize| values[(i0 + k) % n];
    let mut found: Vec<(usize, ExtremumKind, f64)> = vec![(i0, ExtremumKind::Max, vmax)];
    let mut seeking = ExtremumKind::Min;
    let (mut cand_k, mut cand_v) = (0usize, vmax);
    for k in 1..=n {
        let v = at(k);
        match seeking {
            ExtremumKind::Min => {
                if v < cand_v {
                    (cand_k, cand_v) = (k, v);
                } else if v > cand_v + plateau_tol {
                    found.push(((i0 + cand_k) % n, ExtremumKind::Min, cand_v));
                    seeking = ExtremumKind::Max;
                    (cand_k, cand_v) = (k, v);
                }
            }
            ExtremumKind::Max => {
                if v > cand_v {
                    (cand_k, cand_v) = (k, v);
                } else if v < cand_v - plateau_tol {
                    found.push(((i0 + cand_k) % n, ExtremumKind::Max, cand_v));
                    seeking = ExtremumKind::Min;
                    (cand_k, cand_v) = (k, v);
                }
            }
        }
    }
    // the pending candidate at the end is the starting maximum again

    let mut out: Vec<Extremum> = found
        .into_iter()
        .map(|(index, kind, value)| {
            let within = |j: usize| (values[j] - value).abs() <= plateau_tol;
            let mut left = 0;
            while left + 1 < n && within((index + n - left - 1) % n) {
                left += 1;
            }
            let mut right = 0;
            while right + 1 < n - left && within((index + right + 1) % n) {
                right += 1;
            }
            let lo = (index + n - left) % n;
            let hi = (index + right) % n;
            Extremum {
                kind,
                value,
                index,
                start: params[lo],
                end: params[hi],
                wraps: lo > hi,
            }
        })
        .collect();
    out.sort_by_key(|e| e.index);
    out
}
