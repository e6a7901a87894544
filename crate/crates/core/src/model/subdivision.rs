use std::collections::HashMap;

use super::{CellId, DualComplex, Subcomplex};

/// First barycentric subdivision of (a subcomplex of) a dual complex.
///
/// Vertices are cells; a `k`-simplex is a chain `c_0 < c_1 < ... < c_k` of
/// cells under the face relation, stored as vertex indices in that order.
/// The order fixes the orientation used by the boundary operator.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct SimplicialComplex {
    vertices: Vec<CellId>,
    simplices: Vec<Vec<Vec<usize>>>,
    index: Vec<HashMap<Vec<usize>, usize>>,
}

pub fn barycentric_subdivision(complex: &DualComplex, sub: &Subcomplex) -> SimplicialComplex {
    let vertices: Vec<CellId> = sub.iter().collect();
    let position: HashMap<CellId, usize> =
        vertices.iter().enumerate().map(|(i, &c)| (c, i)).collect();

    // proper cofaces inside `sub`, by vertex index
    let mut above: Vec<Vec<usize>> = vec![Vec::new(); vertices.len()];
    for (i, &c) in vertices.iter().enumerate() {
        for f in complex.closure_of(c) {
            if f != c {
                if let Some(&j) = position.get(&f) {
                    above[j].push(i);
                }
            }
        }
    }
    for a in &mut above {
        a.sort_unstable();
    }

    let mut simplices: Vec<Vec<Vec<usize>>> = Vec::new();
    if !vertices.is_empty() {
        simplices.push((0..vertices.len()).map(|i| vec![i]).collect());
        loop {
            let last = simplices.last().unwrap();
            let next: Vec<Vec<usize>> = last
                .iter()
                .flat_map(|chain| {
                    let top = *chain.last().unwrap();
                    above[top].iter().map(move |&v| {
                        let mut longer = chain.clone();
                        longer.push(v);
                        longer
                    })
                })
                .collect();
            if next.is_empty() {
                break;
            }
            simplices.push(next);
        }
    }

    let index = simplices
        .iter()
        .map(|level| {
            level
                .iter()
                .enumerate()
                .map(|(i, s)| (s.clone(), i))
                .collect()
        })
        .collect();

    SimplicialComplex {
        vertices,
        simplices,
        index,
    }
}

impl SimplicialComplex {
    /// The cell each vertex is the barycenter of.
    pub fn vertices(&self) -> &[CellId] {
        &self.vertices
    }

    /// `None` for the empty complex.
    pub fn dimension(&self) -> Option<usize> {
        self.simplices.len().checked_sub(1)
    }

    pub fn simplices(&self, dim: usize) -> &[Vec<usize>] {
        self.simplices.get(dim).map_or(&[], Vec::as_slice)
    }

    pub fn count(&self, dim: usize) -> usize {
        self.simplices(dim).len()
    }

    pub fn index_of(&self, simplex: &[usize]) -> Option<usize> {
        self.index.get(simplex.len().checked_sub(1)?)?.get(simplex).copied()
    }

    /// Cell chain of a simplex.
    pub fn cells_of(&self, simplex: &[usize]) -> Vec<CellId> {
        simplex.iter().map(|&v| self.vertices[v]).collect()
    }

    /// Sparse boundary `∂_dim`: for each `dim`-simplex, the signed indices of
    /// its `(dim-1)`-faces. Empty for `dim == 0`.
    pub fn boundary(&self, dim: usize) -> Vec<Vec<(usize, i64)>> {
        if dim == 0 {
            return vec![Vec::new(); self.count(0)];
        }
        let faces = &self.index[dim - 1];
        self.simplices(dim)
            .iter()
            .map(|s| {
                (0..s.len())
                    .map(|i| {
                        let mut face = s.clone();
                        face.remove(i);
                        let sign = if i % 2 == 0 { 1 } else { -1 };
                        (faces[&face], sign)
                    })
                    .collect()
            })
            .collect()
    }

    pub fn euler_characteristic(&self) -> i64 {
        self.simplices
            .iter()
            .enumerate()
            .map(|(d, s)| if d % 2 == 0 { s.len() as i64 } else { -(s.len() as i64) })
            .sum()
    }
}

#[cfg(test)]
mod tests {
    use super::super::fixtures::*;
    use super::super::{build_dual_complex, Component, StratifiedFiber, Stratum};
    use super::*;

    /// Chains enumerated from scratch over all ordered tuples of cells.
    fn brute_force_counts(k: &DualComplex) -> Vec<usize> {
        let n = k.len();
        let mut counts = vec![0usize; k.max_dimension() + 1];
        fn extend(k: &DualComplex, chain: &mut Vec<CellId>, counts: &mut [usize], n: usize) {
            counts[chain.len() - 1] += 1;
            let top = *chain.last().unwrap();
            for c in 0..n {
                let c = CellId(c);
                if c != top && k.is_face(top, c) {
                    chain.push(c);
                    extend(k, chain, counts, n);
                    chain.pop();
                }
            }
        }
        for c in 0..n {
            extend(k, &mut vec![CellId(c)], &mut counts, n);
        }
        counts
    }

    #[test]
    fn circle_subdivides_into_a_square() {
        let k = build_dual_complex(&i2()).unwrap();
        let sd = barycentric_subdivision(&k, &Subcomplex::full(&k));
        assert_eq!((sd.count(0), sd.count(1)), (4, 4));
        assert_eq!(sd.dimension(), Some(1));
    }

    #[test]
    fn single_vertex() {
        let f = StratifiedFiber {
            components: vec![Component::new("X", 3)],
            strata: vec![Stratum::vertex("X", "X")],
        };
        let k = build_dual_complex(&f).unwrap();
        let sd = barycentric_subdivision(&k, &Subcomplex::full(&k));
        assert_eq!(sd.count(0), 1);
        assert_eq!(sd.dimension(), Some(0));
    }

    #[test]
    fn triangle_counts_match_chain_oracle() {
        let k = build_dual_complex(&triangle()).unwrap();
        let sd = barycentric_subdivision(&k, &Subcomplex::full(&k));
        let counts: Vec<usize> = (0..3).map(|d| sd.count(d)).collect();
        assert_eq!(counts, vec![7, 12, 6]);
        assert_eq!(counts, brute_force_counts(&k));
    }

    #[test]
    fn tetrahedron_counts_match_chain_oracle() {
        let k = build_dual_complex(&doubled_tetrahedron()).unwrap();
        let sd = barycentric_subdivision(&k, &Subcomplex::full(&k));
        let counts: Vec<usize> = (0..=3).map(|d| sd.count(d)).collect();
        assert_eq!(counts, brute_force_counts(&k));
        assert_eq!(
            sd.euler_characteristic(),
            k.euler_characteristic(&Subcomplex::full(&k))
        );
    }

    #[test]
    fn boundary_squares_to_zero() {
        let k = build_dual_complex(&doubled_tetrahedron()).unwrap();
        let sd = barycentric_subdivision(&k, &Subcomplex::full(&k));
        for dim in 2..=3 {
            let outer = sd.boundary(dim);
            let inner = sd.boundary(dim - 1);
            for row in &outer {
                let mut acc: HashMap<usize, i64> = HashMap::new();
                for &(f, s) in row {
                    for &(g, t) in &inner[f] {
                        *acc.entry(g).or_default() += s * t;
                    }
                }
                assert!(acc.values().all(|&v| v == 0));
            }
        }
    }
}
