//! Small numeric kernels shared by the analyses: vector algebra, rank
//! correlation, histograms and KL-divergence.

use crate::error::{Error, Result};

pub fn dot(a: &[f64], b: &[f64]) -> f64 {
    a.iter().zip(b).map(|(x, y)| x * y).sum()
}

pub fn norm(a: &[f64]) -> f64 {
    dot(a, a).sqrt()
}

pub fn squared_distance(a: &[f64], b: &[f64]) -> f64 {
    a.iter().zip(b).map(|(x, y)| (x - y) * (x - y)).sum()
}

pub fn distance(a: &[f64], b: &[f64]) -> f64 {
    squared_distance(a, b).sqrt()
}

/// Cosine similarity, `None` when either vector has zero norm. Clamped to
/// `[-1, 1]` against rounding.
pub fn cosine(a: &[f64], b: &[f64]) -> Option<f64> {
    let denom = norm(a) * norm(b);
    (denom > 0.0).then(|| (dot(a, b) / denom).clamp(-1.0, 1.0))
}

/// Unit vector in the direction of `a`, `None` for the zero vector.
pub fn normalized(a: &[f64]) -> Option<Vec<f64>> {
    let n = norm(a);
    (n > 0.0).then(|| a.iter().map(|x| x / n).collect())
}

/// Fractional ranks (1-based), ties get the average of their positions.
pub fn average_ranks(values: &[f64]) -> Vec<f64> {
    let mut order: Vec<usize> = (0..values.len()).collect();
    order.sort_by(|&i, &j| values[i].total_cmp(&values[j]));
    let mut ranks = vec![0.0; values.len()];
    let mut start = 0;
    while start < order.len() {
        let mut end = start + 1;
        while end < order.len() && values[order[end]] == values[order[start]] {
            end += 1;
        }
        // positions start+1 ..= end
        let rank = (start + 1 + end) as f64 / 2.0;
        for &i in &order[start..end] {
            ranks[i] = rank;
        }
        start = end;
    }
    ranks
}

/// Pearson correlation, `None` when either side has zero variance.
pub fn pearson(a: &[f64], b: &[f64]) -> Option<f64> {
    let n = a.len() as f64;
    let ma = a.iter().sum::<f64>() / n;
    let mb = b.iter().sum::<f64>() / n;
    let (mut cov, mut va, mut vb) = (0.0, 0.0, 0.0);
    for (x, y) in a.iter().zip(b) {
        cov += (x - ma) * (y - mb);
        va += (x - ma) * (x - ma);
        vb += (y - mb) * (y - mb);
    }
    (va > 0.0 && vb > 0.0).then(|| (cov / (va * vb).sqrt()).clamp(-1.0, 1.0))
}

/// Spearman rank correlation with average ranks for ties.
///
/// Returns `Ok(None)` when either list is constant (zero rank variance).
pub fn spearman_rho(a: &[f64], b: &[f64]) -> Result<Option<f64>> {
    if a.len() != b.len() {
        return Err(Error::invalid(format!("length mismatch: {} vs {}", a.len(), b.len())));
    }
    if a.len() < 2 {
        return Err(Error::invalid("spearman needs at least two observations"));
    }
    Ok(pearson(&average_ranks(a), &average_ranks(b)))
}

/// Equal-width histogram of counts over `[lo, hi]`; values outside the
/// range are clamped into the edge bins, `hi` itself lands in the last bin.
pub fn histogram(values: &[f64], bins: usize, lo: f64, hi: f64) -> Vec<f64> {
    assert!(bins > 0 && hi > lo);
    let mut counts = vec![0.0; bins];
    let width = (hi - lo) / bins as f64;
    for &v in values {
        let slot = ((v - lo) / width).floor();
        let slot = if slot.is_nan() { 0 } else { (slot.max(0.0) as usize).min(bins - 1) };
        counts[slot] += 1.0;
    }
    counts
}

/// Adds `epsilon` to every bin and rescales to unit mass.
pub fn smooth_and_normalize(weights: &[f64], epsilon: f64) -> Result<Vec<f64>> {
    if weights.iter().any(|w| !w.is_finite() || *w < 0.0) {
        return Err(Error::invalid("histogram weights must be finite and non-negative"));
    }
    let smoothed: Vec<f64> = weights.iter().map(|w| w + epsilon).collect();
    let total: f64 = smoothed.iter().sum();
    if total <= 0.0 {
        return Err(Error::invalid("histogram has no mass"));
    }
    Ok(smoothed.into_iter().map(|w| w / total).collect())
}

/// `D_KL(p || q) = Σ p_i (ln p_i − ln q_i)` after epsilon smoothing and
/// renormalization of both inputs. Terms with `p_i = 0` contribute zero.
pub fn kl_divergence(p: &[f64], q: &[f64], epsilon: f64) -> Result<f64> {
    if p.len() != q.len() {
        return Err(Error::invalid(format!("bin count mismatch: {} vs {}", p.len(), q.len())));
    }
    if p.is_empty() {
        return Err(Error::invalid("histograms have no bins"));
    }
    if !(epsilon >= 0.0) {
        return Err(Error::invalid("smoothing epsilon must be non-negative"));
    }
    let p = smooth_and_normalize(p, epsilon)?;
    let q = smooth_and_normalize(q, epsilon)?;
    let mut total = 0.0;
    for (&pi, &qi) in p.iter().zip(&q) {
        if pi == 0.0 {
            continue;
        }
        if qi == 0.0 {
            return Err(Error::invalid("q has an empty bin where p has mass; use epsilon > 0"));
        }
        total += pi * (pi.ln() - qi.ln());
    }
    // tiny negative values can appear from rounding when p == q
    Ok(total.max(0.0))
}

pub fn mean(values: &[f64]) -> Option<f64> {
    (!values.is_empty()).then(|| values.iter().sum::<f64>() / values.len() as f64)
}

/// Sample standard deviation (n − 1 denominator).
pub fn sample_std(values: &[f64]) -> Option<f64> {
    if values.len() < 2 {
        return None;
    }
    let m = mean(values)?;
    let ss: f64 = values.iter().map(|v| (v - m) * (v - m)).sum();
    Some((ss / (values.len() - 1) as f64).sqrt())
}
