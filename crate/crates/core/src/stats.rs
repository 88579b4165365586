//! Statistics over pixel-indexed spherical datasets.
//!
//! Every operation works on pixel centers (post-pixelation) and accepts an
//! optional window restricting the rows considered. Sums run in row order
//! so results are deterministic across runs and thread counts.

use crate::geom::{geodesic, sph2car, CartCoord, SphCoord, SphericalWindow};
use crate::{Error, Result, SphericalDataset};
use std::f64::consts::PI;

/// Which side of the ordered values `extrema` selects.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Side {
    Smallest,
    Largest,
}

/// Histogram bin count: fixed, or the Sturges rule `ceil(log2 n) + 1`.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum BinCount {
    Fixed(usize),
    Auto,
}

/// One extreme-value row: pixel, its center, and the value.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct ExtremaRow {
    pub pix: crate::PixelId,
    pub coord: SphCoord,
    pub value: f64,
}

/// Axis of an angular marginal histogram.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum HistAxis {
    Theta,
    Phi,
}

impl HistAxis {
    pub fn as_str(self) -> &'static str {
        match self {
            HistAxis::Theta => "theta",
            HistAxis::Phi => "phi",
        }
    }
}

/// Equal-width marginal histogram with per-bin counts and means.
#[derive(Debug, Clone, PartialEq)]
pub struct Histogram {
    pub axis: HistAxis,
    /// `bins + 1` strictly increasing edges covering the axis range.
    pub edges: Vec<f64>,
    pub counts: Vec<u64>,
    /// Mean of the value column per bin; NaN for empty bins.
    pub means: Vec<f64>,
}

/// Row indices selected by an optional window.
fn window_rows(ds: &SphericalDataset, w: Option<&SphericalWindow>) -> Vec<usize> {
    match w {
        None => (0..ds.len()).collect(),
        Some(w) => (0..ds.len())
            .filter(|&r| w.contains(ds.center(r)))
            .collect(),
    }
}

/// Arithmetic mean of a column.
pub fn mean_value(ds: &SphericalDataset, col: &str) -> Result<f64> {
    let v = ds.column(col)?;
    if v.is_empty() {
        return Err(Error::EmptySelection("mean of an empty dataset".into()));
    }
    Ok(v.iter().sum::<f64>() / v.len() as f64)
}

/// Exceedance probability: the fraction of (windowed) rows with value
/// strictly above `alpha`.
pub fn exprob(
    ds: &SphericalDataset,
    w: Option<&SphericalWindow>,
    col: &str,
    alpha: f64,
) -> Result<f64> {
    let v = ds.column(col)?;
    let rows = window_rows(ds, w);
    if rows.is_empty() {
        return Err(Error::EmptySelection(
            "exceedance over an empty window".into(),
        ));
    }
    let above = rows.iter().filter(|&&r| v[r] > alpha).count();
    Ok(above as f64 / rows.len() as f64)
}

/// The `n` most extreme rows on the chosen side, ordered by value
/// (ascending for smallest, descending for largest), ties broken by
/// ascending pixel index.
pub fn extrema(
    ds: &SphericalDataset,
    w: Option<&SphericalWindow>,
    n: usize,
    side: Side,
    col: &str,
) -> Result<Vec<ExtremaRow>> {
    let v = ds.column(col)?;
    let mut rows = window_rows(ds, w);
    if rows.len() < n {
        return Err(Error::InsufficientRows {
            needed: n,
            available: rows.len(),
        });
    }
    rows.sort_by(|&a, &b| {
        let ord = v[a].total_cmp(&v[b]);
        let ord = match side {
            Side::Smallest => ord,
            Side::Largest => ord.reverse(),
        };
        ord.then_with(|| ds.pix()[a].cmp(&ds.pix()[b]))
    });
    Ok(rows[..n]
        .iter()
        .map(|&r| ExtremaRow {
            pix: ds.pixel_id(r),
            coord: ds.center(r),
            value: v[r],
        })
        .collect())
}

/// Shannon entropy (natural log) of an equal-width histogram of the
/// (windowed) values. `Auto` bins follow Sturges; a window with a single
/// distinct value has zero entropy.
pub fn entropy(
    ds: &SphericalDataset,
    w: Option<&SphericalWindow>,
    col: &str,
    bins: BinCount,
) -> Result<f64> {
    let v = ds.column(col)?;
    let rows = window_rows(ds, w);
    if rows.is_empty() {
        return Err(Error::EmptySelection("entropy over an empty window".into()));
    }
    let k = match bins {
        BinCount::Fixed(k) if k >= 1 => k,
        BinCount::Fixed(k) => {
            return Err(Error::EmptyInput(format!("bin count {k} must be positive")))
        }
        BinCount::Auto => ceil_log2(rows.len()) + 1,
    };
    let lo = rows.iter().map(|&r| v[r]).fold(f64::INFINITY, f64::min);
    let hi = rows.iter().map(|&r| v[r]).fold(f64::NEG_INFINITY, f64::max);
    if lo == hi {
        return Ok(0.0);
    }
    let width = (hi - lo) / k as f64;
    let mut counts = vec![0u64; k];
    for &r in &rows {
        let idx = (((v[r] - lo) / width) as usize).min(k - 1);
        counts[idx] += 1;
    }
    let n = rows.len() as f64;
    Ok(counts
        .iter()
        .filter(|&&c| c > 0)
        .map(|&c| {
            let p = c as f64 / n;
            -p * p.ln()
        })
        .sum())
}

fn ceil_log2(n: usize) -> usize {
    if n <= 1 {
        0
    } else {
        (usize::BITS - (n - 1).leading_zeros()) as usize
    }
}

/// First Minkowski functional: the excursion-set area `{value >= level}`
/// in steradians, i.e. the count of qualifying rows times the pixel area.
/// Divide by `len * pixel_area` for the relative form.
pub fn fmf(ds: &SphericalDataset, level: f64, col: &str) -> Result<f64> {
    let v = ds.column(col)?;
    let count = v.iter().filter(|&&x| x >= level).count();
    Ok(count as f64 * ds.res().pixel_area())
}

/// Minimum pairwise geodesic distance between pixel centers: exact scan up
/// to 10^4 rows, iso-latitude ring pruning above (identical result).
pub fn min_dist(ds: &SphericalDataset) -> Result<f64> {
    if ds.len() <= 10_000 {
        min_dist_exact(ds)
    } else {
        min_dist_pruned(ds)
    }
}

struct CenterSet {
    coords: Vec<SphCoord>,
    vecs: Vec<CartCoord>,
}

fn center_set(ds: &SphericalDataset) -> Result<CenterSet> {
    if ds.len() < 2 {
        return Err(Error::InsufficientRows {
            needed: 2,
            available: ds.len(),
        });
    }
    let coords: Vec<SphCoord> = (0..ds.len()).map(|r| ds.center(r)).collect();
    let vecs = coords.iter().map(|&c| sph2car(c)).collect();
    Ok(CenterSet { coords, vecs })
}

/// Near-ties within this dot-product margin are all kept as candidates, so
/// the final minimum runs over every pair floating-point rounding could
/// promote to the front.
const DOT_TIE: f64 = 1e-12;

/// Tracks the largest dot products (smallest separations) seen, together
/// with every pair within [`DOT_TIE`] of the leader.
struct ClosestPairs {
    max_dot: f64,
    pairs: Vec<(usize, usize, f64)>,
}

impl ClosestPairs {
    fn new() -> Self {
        ClosestPairs {
            max_dot: f64::NEG_INFINITY,
            pairs: Vec::new(),
        }
    }

    fn offer(&mut self, i: usize, j: usize, dot: f64) {
        if dot < self.max_dot - DOT_TIE {
            return;
        }
        if dot > self.max_dot {
            self.max_dot = dot;
            let cutoff = self.max_dot - DOT_TIE;
            self.pairs.retain(|&(_, _, d)| d >= cutoff);
        }
        self.pairs.push((i, j, dot));
    }

    /// Minimum geodesic over the retained candidates; this is the same
    /// value a full per-pair `geodesic` scan would produce, because any
    /// non-candidate pair is farther by more than the tie margin.
    fn resolve(&self, centers: &CenterSet) -> f64 {
        self.pairs
            .iter()
            .map(|&(i, j, _)| geodesic(centers.coords[i], centers.coords[j]))
            .fold(f64::INFINITY, f64::min)
    }
}

/// Exhaustive pairwise scan.
pub fn min_dist_exact(ds: &SphericalDataset) -> Result<f64> {
    let centers = center_set(ds)?;
    let mut best = ClosestPairs::new();
    for i in 0..centers.vecs.len() {
        for j in (i + 1)..centers.vecs.len() {
            best.offer(i, j, centers.vecs[i].dot(centers.vecs[j]));
        }
    }
    Ok(best.resolve(&centers))
}

/// Ring-pruned scan: rows are bucketed by colatitude (iso-latitude rings)
/// and a ring pair whose colatitude gap exceeds the best distance found so
/// far is skipped, since the geodesic between two points is at least their
/// colatitude difference. Within a ring only azimuth-adjacent pairs are
/// candidates (spacing on a ring is slot-quantized, so nothing closer
/// exists). The slack keeps every within-rounding contender in play; the
/// result is identical to [`min_dist_exact`].
pub fn min_dist_pruned(ds: &SphericalDataset) -> Result<f64> {
    const SLACK: f64 = 1e-9;
    let centers = center_set(ds)?;
    let mut order: Vec<usize> = (0..centers.coords.len()).collect();
    order.sort_by(|&a, &b| {
        centers.coords[a]
            .theta()
            .total_cmp(&centers.coords[b].theta())
            .then_with(|| centers.coords[a].phi().total_cmp(&centers.coords[b].phi()))
    });
    let mut rings: Vec<(f64, Vec<usize>)> = Vec::new();
    for &row in &order {
        let theta = centers.coords[row].theta();
        match rings.last_mut() {
            Some((t, bucket)) if *t == theta => bucket.push(row),
            _ => rings.push((theta, vec![row])),
        }
    }
    let mut best = ClosestPairs::new();
    let mut best_angle = f64::INFINITY;
    for a in 0..rings.len() {
        let bucket = &rings[a].1;
        if bucket.len() >= 2 {
            for k in 0..bucket.len() {
                let i = bucket[k];
                let j = bucket[(k + 1) % bucket.len()];
                if i != j {
                    best.offer(i.min(j), i.max(j), centers.vecs[i].dot(centers.vecs[j]));
                }
            }
            best_angle = best.resolve(&centers);
        }
        for b in (a + 1)..rings.len() {
            let gap = rings[b].0 - rings[a].0;
            if gap - SLACK > best_angle {
                break;
            }
            for &i in &rings[a].1 {
                for &j in &rings[b].1 {
                    best.offer(i.min(j), i.max(j), centers.vecs[i].dot(centers.vecs[j]));
                }
            }
            best_angle = best.resolve(&centers);
        }
    }
    Ok(best.resolve(&centers))
}

/// Marginal distributions of the dataset over colatitude and azimuth:
/// equal-width bins over `[0, pi]` and `[0, 2*pi)` with per-bin row counts
/// and per-bin means of `col`.
pub fn ang_distribution(
    ds: &SphericalDataset,
    col: &str,
    bins_theta: usize,
    bins_phi: usize,
) -> Result<(Histogram, Histogram)> {
    let v = ds.column(col)?;
    if ds.is_empty() {
        return Err(Error::EmptySelection(
            "histogram of an empty dataset".into(),
        ));
    }
    if bins_theta == 0 || bins_phi == 0 {
        return Err(Error::EmptyInput("histogram needs at least one bin".into()));
    }
    let build = |axis: HistAxis, bins: usize, range: f64| -> Histogram {
        let edges: Vec<f64> = (0..=bins).map(|i| i as f64 * range / bins as f64).collect();
        let mut counts = vec![0u64; bins];
        let mut sums = vec![0.0f64; bins];
        for (r, &value) in v.iter().enumerate() {
            let c = ds.center(r);
            let x = match axis {
                HistAxis::Theta => c.theta(),
                HistAxis::Phi => c.phi(),
            };
            let idx = ((x / range * bins as f64) as usize).min(bins - 1);
            counts[idx] += 1;
            sums[idx] += value;
        }
        let means = counts
            .iter()
            .zip(&sums)
            .map(|(&c, &s)| if c > 0 { s / c as f64 } else { f64::NAN })
            .collect();
        Histogram {
            axis,
            edges,
            counts,
            means,
        }
    };
    Ok((
        build(HistAxis::Theta, bins_theta, PI),
        build(HistAxis::Phi, bins_phi, 2.0 * PI),
    ))
}

/// Mean of `col` inside the window divided by the mean over the whole
/// dataset (directional asymmetry of radial marks).
pub fn asymmetry_mean(ds: &SphericalDataset, w: &SphericalWindow, col: &str) -> Result<f64> {
    let v = ds.column(col)?;
    let rows = window_rows(ds, Some(w));
    if rows.is_empty() {
        return Err(Error::EmptySelection(
            "asymmetry over an empty window".into(),
        ));
    }
    let win_mean = rows.iter().map(|&r| v[r]).sum::<f64>() / rows.len() as f64;
    Ok(win_mean / mean_value(ds, col)?)
}

/// Mean of the `n` most extreme values inside the window, normalized by
/// the overall mean of `col`.
pub fn asymmetry_extrema(
    ds: &SphericalDataset,
    w: &SphericalWindow,
    n: usize,
    side: Side,
    col: &str,
) -> Result<f64> {
    if n == 0 {
        return Err(Error::EmptyInput("asymmetry needs n >= 1".into()));
    }
    let ext = extrema(ds, Some(w), n, side, col)?;
    let ext_mean = ext.iter().map(|e| e.value).sum::<f64>() / n as f64;
    Ok(ext_mean / mean_value(ds, col)?)
}
