#![allow(dead_code)]

use std::collections::BTreeMap;

use num_traits::Zero;
use skeleta::rational::Rational;
use skeleta::{Component, DualComplex, StratifiedFiber, Stratum, Subcomplex};

pub fn cycle(n: usize) -> StratifiedFiber {
    let ids: Vec<String> = (0..n).map(|i| format!("C{i}")).collect();
    let mut f = StratifiedFiber {
        components: ids.iter().map(|c| Component::new(c.as_str(), 1)).collect(),
        strata: ids.iter().map(|c| Stratum::vertex(c.as_str(), c.as_str())).collect(),
    };
    for i in 0..n {
        let (a, b) = (ids[i].as_str(), ids[(i + 1) % n].as_str());
        f.strata.push(Stratum::new(format!("e{i}"), [a, b], [(a, b), (b, a)]));
    }
    f
}

pub fn chain(k: usize) -> StratifiedFiber {
    let mut f = cycle(k);
    f.strata.retain(|s| s.id.as_str() != format!("e{}", k - 1));
    f
}

pub fn i0star() -> StratifiedFiber {
    let mut f = StratifiedFiber {
        components: vec![Component::new("C", 2)],
        strata: vec![Stratum::vertex("C", "C")],
    };
    for i in 1..=4 {
        let t = format!("T{i}");
        f.components.push(Component::new(t.as_str(), 1));
        f.strata.push(Stratum::vertex(t.as_str(), t.as_str()));
        f.strata.push(Stratum::new(
            format!("e{i}"),
            ["C", t.as_str()],
            [("C", t.as_str()), (t.as_str(), "C")],
        ));
    }
    f
}

/// Adds the triangle over `{a, b, c}` (sorted) with its edges, creating
/// missing vertices and edges as needed.
pub fn add_triangle(f: &mut StratifiedFiber, id: &str, tri: [&str; 3], edge_ids: [&str; 3]) {
    for v in tri {
        if f.component(&v.into()).is_none() {
            f.components.push(Component::new(v, 1));
            f.strata.push(Stratum::vertex(v, v));
        }
    }
    let [a, b, c] = tri;
    let [ab, ac, bc] = edge_ids;
    for (e, x, y) in [(ab, a, b), (ac, a, c), (bc, b, c)] {
        if f.stratum(&e.into()).is_none() {
            f.strata.push(Stratum::new(e, [x, y], [(x, y), (y, x)]));
        }
    }
    f.strata
        .push(Stratum::new(id, [a, b, c], [(a, bc), (b, ac), (c, ab)]));
}

pub fn two_triangles_sharing_a_vertex() -> StratifiedFiber {
    let mut f = StratifiedFiber::default();
    add_triangle(&mut f, "ABC", ["A", "B", "C"], ["AB", "AC", "BC"]);
    add_triangle(&mut f, "CDE", ["C", "D", "E"], ["CD", "CE", "DE"]);
    f
}

/// Octahedron with north and south poles identified to one vertex `P`.
pub fn pinched_torus() -> StratifiedFiber {
    let mut f = StratifiedFiber::default();
    let eq = ["Q1", "Q2", "Q3", "Q4"];
    for hemi in ["n", "s"] {
        for i in 0..4 {
            let (x, y) = (eq[i], eq[(i + 1) % 4]);
            let (lo, hi) = if x < y { (x, y) } else { (y, x) };
            add_triangle(
                &mut f,
                &format!("{hemi}{i}"),
                ["P", lo, hi],
                [
                    &format!("{hemi}P{lo}"),
                    &format!("{hemi}P{hi}"),
                    &format!("{lo}{hi}"),
                ],
            );
        }
    }
    f
}

/// Rank over Q by dense Gauss–Jordan elimination.
pub fn dense_rank(mut m: Vec<Vec<Rational>>) -> usize {
    let rows = m.len();
    let cols = m.first().map_or(0, Vec::len);
    let mut rank = 0;
    for col in 0..cols {
        let Some(p) = (rank..rows).find(|&r| !m[r][col].is_zero()) else {
            continue;
        };
        m.swap(rank, p);
        let pivot = m[rank].clone();
        for (r, row) in m.iter_mut().enumerate() {
            if r != rank && !row[col].is_zero() {
                let factor = &row[col] / &pivot[col];
                for (x, p) in row.iter_mut().zip(&pivot).skip(col) {
                    *x -= &factor * p;
                }
            }
        }
        rank += 1;
    }
    rank
}

/// Betti numbers from the cellular chain complex of the Δ-complex itself,
/// with `∂σ = sum_i (-1)^i facet_i(σ)`.
pub fn cellular_betti(k: &DualComplex, sub: &Subcomplex) -> Vec<usize> {
    let n = sub.max_dimension(k).unwrap();
    let by_dim: Vec<Vec<skeleta::CellId>> = (0..=n)
        .map(|d| sub.iter().filter(|&c| k.cell(c).dimension() == d).collect())
        .collect();
    let pos: Vec<BTreeMap<skeleta::CellId, usize>> = by_dim
        .iter()
        .map(|cells| cells.iter().enumerate().map(|(i, &c)| (c, i)).collect())
        .collect();
    let mut rank = vec![0usize; n + 2];
    for d in 1..=n {
        let m: Vec<Vec<Rational>> = by_dim[d]
            .iter()
            .map(|&c| {
                let mut row = vec![Rational::zero(); by_dim[d - 1].len()];
                for (i, f) in k.cell(c).facets.iter().enumerate() {
                    let sign = if i % 2 == 0 { 1 } else { -1 };
                    row[pos[d - 1][f]] += Rational::from_integer(sign.into());
                }
                row
            })
            .collect();
        rank[d] = dense_rank(m);
    }
    (0..=n)
        .map(|d| by_dim[d].len() - rank[d] - rank[d + 1])
        .collect()
}
