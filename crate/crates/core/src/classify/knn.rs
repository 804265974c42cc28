use std::cmp::Ordering;

use super::model::{Params, StoredExample};
use super::standardize::Standardizer;
use super::LabeledExample;
use crate::features::FeatureVector;

pub(super) fn store(xs: &[FeatureVector], examples: &[LabeledExample]) -> Params {
    let stored = canonical_order(xs, examples)
        .into_iter()
        .map(|i| StoredExample {
            entity: examples[i].entity.clone(),
            label: examples[i].label,
            weight: examples[i].weight,
            features: xs[i].entries().to_vec(),
        })
        .collect();
    Params::Knn { examples: stored }
}

/// Example indices sorted by (entity, label, weight, features), so that
/// order-insensitive learners are bit-for-bit independent of input order.
pub(super) fn canonical_order(xs: &[FeatureVector], examples: &[LabeledExample]) -> Vec<usize> {
    let mut idx: Vec<usize> = (0..xs.len()).collect();
    idx.sort_by(|&a, &b| {
        let (ea, eb) = (&examples[a], &examples[b]);
        ea.entity
            .cmp(&eb.entity)
            .then(ea.label.cmp(&eb.label))
            .then(ea.weight.total_cmp(&eb.weight))
            .then_with(|| cmp_entries(xs[a].entries(), xs[b].entries()))
    });
    idx
}

fn cmp_entries(a: &[(u32, f64)], b: &[(u32, f64)]) -> Ordering {
    for (x, y) in a.iter().zip(b) {
        let o = x.0.cmp(&y.0).then(x.1.total_cmp(&y.1));
        if o != Ordering::Equal {
            return o;
        }
    }
    a.len().cmp(&b.len())
}

/// `(1 - cos)` over the sparse columns plus Euclidean distance over the
/// standardized dense columns. Two all-zero sparse parts are at distance 0;
/// one all-zero part is at distance 1.
pub(super) fn distance(q: &[(u32, f64)], x: &[(u32, f64)], dense: &Standardizer) -> f64 {
    let is_dense = |c: u32| dense.columns.iter().any(|d| d.0 == c as usize);
    let (mut dot, mut nq, mut nx, mut sq) = (0.0, 0.0, 0.0, 0.0);
    let (mut i, mut j) = (0, 0);
    while i < q.len() || j < x.len() {
        let (cq, vq) = q.get(i).copied().unwrap_or((u32::MAX, 0.0));
        let (cx, vx) = x.get(j).copied().unwrap_or((u32::MAX, 0.0));
        let c = cq.min(cx);
        let a = if cq == c { vq } else { 0.0 };
        let b = if cx == c { vx } else { 0.0 };
        if cq == c {
            i += 1;
        }
        if cx == c {
            j += 1;
        }
        if is_dense(c) {
            sq += (a - b) * (a - b);
        } else {
            dot += a * b;
            nq += a * a;
            nx += b * b;
        }
    }
    let cos_dist = match (nq > 0.0, nx > 0.0) {
        (false, false) => 0.0,
        (true, true) => (1.0 - dot / (nq.sqrt() * nx.sqrt())).max(0.0),
        _ => 1.0,
    };
    cos_dist + sq.sqrt()
}

/// Weighted vote of the `k` nearest stored examples, normalized to
/// [-1, 1]. Distance ties are broken by the stored order.
pub(super) fn vote(
    stored: &[StoredExample],
    q: &FeatureVector,
    k: usize,
    dense: &Standardizer,
) -> f64 {
    let mut ds: Vec<(f64, usize)> = stored
        .iter()
        .enumerate()
        .map(|(i, s)| (distance(q.entries(), &s.features, dense), i))
        .collect();
    ds.sort_by(|a, b| a.0.total_cmp(&b.0).then(a.1.cmp(&b.1)));
    let mut num = 0.0;
    let mut den = 0.0;
    for &(_, i) in ds.iter().take(k) {
        num += stored[i].weight * stored[i].label.sign();
        den += stored[i].weight;
    }
    num / den
}
