use std::collections::HashMap;

use num_traits::Zero;

use crate::model::{barycentric_subdivision, DualComplex, Subcomplex};
use crate::rational::{int, Rational};

use super::{check_input, TopologyError};

/// Rational Betti numbers `b_0, ..., b_n`. Profiles compare equal when they
/// differ only by trailing zeros.
#[derive(Debug, Clone, Eq)]
pub struct HomologyProfile {
    pub betti: Vec<usize>,
}

impl PartialEq for HomologyProfile {
    fn eq(&self, other: &Self) -> bool {
        (0..self.betti.len().max(other.betti.len())).all(|k| self.get(k) == other.get(k))
    }
}

impl HomologyProfile {
    pub fn euler_characteristic(&self) -> i64 {
        self.betti
            .iter()
            .enumerate()
            .map(|(k, &b)| if k % 2 == 0 { b as i64 } else { -(b as i64) })
            .sum()
    }

    pub fn get(&self, k: usize) -> usize {
        self.betti.get(k).copied().unwrap_or(0)
    }
}

type SparseRow = Vec<(usize, Rational)>;

/// `a - factor * b` on column-sorted sparse rows.
fn axpy(a: &SparseRow, factor: &Rational, b: &SparseRow) -> SparseRow {
    let mut out = Vec::with_capacity(a.len() + b.len());
    let (mut i, mut j) = (0, 0);
    while i < a.len() || j < b.len() {
        let take_a = j == b.len() || (i < a.len() && a[i].0 < b[j].0);
        let take_b = i == a.len() || (j < b.len() && b[j].0 < a[i].0);
        if take_a {
            out.push(a[i].clone());
            i += 1;
        } else if take_b {
            out.push((b[j].0, -(factor * &b[j].1)));
            j += 1;
        } else {
            let v = &a[i].1 - factor * &b[j].1;
            if !v.is_zero() {
                out.push((a[i].0, v));
            }
            i += 1;
            j += 1;
        }
    }
    out
}

/// Exact rank of a sparse integer matrix given by rows of `(column, value)`.
pub fn rank_over_rationals(rows: &[Vec<(usize, i64)>]) -> usize {
    let mut pivots: HashMap<usize, SparseRow> = HashMap::new();
    for row in rows {
        let mut r: SparseRow = row
            .iter()
            .filter(|(_, v)| *v != 0)
            .map(|&(c, v)| (c, int(v)))
            .collect();
        r.sort_by_key(|e| e.0);
        // merge duplicate columns
        let mut merged: SparseRow = Vec::with_capacity(r.len());
        for (c, v) in r {
            match merged.last_mut() {
                Some((lc, lv)) if *lc == c => *lv += v,
                _ => merged.push((c, v)),
            }
        }
        let mut r: SparseRow = merged.into_iter().filter(|(_, v)| !v.is_zero()).collect();
        while let Some((lead, value)) = r.first().cloned() {
            match pivots.get(&lead) {
                Some(p) => {
                    let factor = value / &p[0].1;
                    r = axpy(&r, &factor, p);
                }
                None => {
                    pivots.insert(lead, r);
                    break;
                }
            }
        }
    }
    pivots.len()
}

/// Betti numbers of `sub` over the rationals, computed from the simplicial
/// chain complex of its barycentric subdivision.
pub fn betti_numbers(
    complex: &DualComplex,
    sub: &Subcomplex,
) -> Result<HomologyProfile, TopologyError> {
    check_input(complex, sub)?;
    let sd = barycentric_subdivision(complex, sub);
    let n = sd.dimension().expect("nonempty");
    // rank[k] = rank of the boundary map out of k-chains
    let mut rank = vec![0usize; n + 2];
    for (k, r) in rank.iter_mut().enumerate().take(n + 1).skip(1) {
        *r = rank_over_rationals(&sd.boundary(k));
    }
    let betti = (0..=n)
        .map(|k| sd.count(k) - rank[k] - rank[k + 1])
        .collect();
    Ok(HomologyProfile { betti })
}

/// Whether the profile is that of an `n`-sphere: `b_0 = b_n = 1` and all
/// other Betti numbers vanish. For `n = 0` this means two points.
pub fn is_q_homology_sphere(profile: &HomologyProfile, n: usize) -> bool {
    let len = profile.betti.len().max(n + 1);
    (0..len).all(|k| {
        let b = profile.get(k);
        match k {
            0 if n == 0 => b == 2,
            0 => b == 1,
            k if k == n => b == 1,
            _ => b == 0,
        }
    })
}

