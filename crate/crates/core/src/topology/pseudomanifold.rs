use crate::model::{barycentric_subdivision, CellId, DualComplex, Subcomplex};

use super::{check_input, TopologyError};

#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub enum Classification {
    ClosedPseudoManifold,
    PseudoManifoldWithBoundary,
    NotPseudoManifold,
}

impl Classification {
    pub fn as_str(&self) -> &'static str {
        match self {
            Classification::ClosedPseudoManifold => "closed-pseudo-manifold",
            Classification::PseudoManifoldWithBoundary => "pseudo-manifold-with-boundary",
            Classification::NotPseudoManifold => "not-pseudo-manifold",
        }
    }
}

/// Simplices of the barycentric subdivision are written as chains of cells.
#[derive(Debug, Clone, PartialEq, Eq)]
pub enum Witness {
    /// A simplex that is not a face of any top-dimensional simplex.
    NonHomogeneous { simplex: Vec<CellId> },
    /// A codimension-one simplex lying in neither one nor two top simplices.
    Branching { simplex: Vec<CellId>, incidence: usize },
    /// Two top simplices that no gallery connects.
    Disconnected {
        first: Vec<CellId>,
        second: Vec<CellId>,
    },
}

impl Witness {
    pub fn kind(&self) -> &'static str {
        match self {
            Witness::NonHomogeneous { .. } => "non-homogeneous",
            Witness::Branching { .. } => "branching",
            Witness::Disconnected { .. } => "disconnected",
        }
    }
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct PseudoManifoldReport {
    pub dimension: usize,
    pub classification: Classification,
    pub witnesses: Vec<Witness>,
    /// Codimension-one simplices lying in exactly one top simplex.
    pub boundary: Vec<Vec<CellId>>,
}

fn find(parent: &mut [usize], mut x: usize) -> usize {
    while parent[x] != x {
        parent[x] = parent[parent[x]];
        x = parent[x];
    }
    x
}

/// Checks homogeneity, non-branching and strong connectedness on the first
/// barycentric subdivision of `sub`.
///
/// A single point counts as a closed pseudo-manifold of dimension 0.
pub fn classify_pseudo_manifold(
    complex: &DualComplex,
    sub: &Subcomplex,
) -> Result<PseudoManifoldReport, TopologyError> {
    check_input(complex, sub)?;
    let sd = barycentric_subdivision(complex, sub);
    let n = sd.dimension().expect("nonempty");
    let top = sd.simplices(n);
    let mut witnesses = Vec::new();

    // (1) homogeneity: mark every face of every top simplex
    let mut covered: Vec<Vec<bool>> = (0..=n).map(|d| vec![false; sd.count(d)]).collect();
    for s in top {
        for mask in 1u32..(1 << (n + 1)) {
            let face: Vec<usize> = (0..=n)
                .filter(|i| mask & (1 << i) != 0)
                .map(|i| s[i])
                .collect();
            let idx = sd.index_of(&face).expect("faces of simplices are simplices");
            covered[face.len() - 1][idx] = true;
        }
    }
    if let Some((d, i)) = (0..n)
        .rev()
        .find_map(|d| covered[d].iter().position(|c| !c).map(|i| (d, i)))
    {
        witnesses.push(Witness::NonHomogeneous {
            simplex: sd.cells_of(&sd.simplices(d)[i]),
        });
    }

    // (2) non-branching
    let mut boundary = Vec::new();
    let mut parent: Vec<usize> = (0..top.len()).collect();
    if n > 0 {
        let mut incidence = vec![0usize; sd.count(n - 1)];
        let mut first_top: Vec<Option<usize>> = vec![None; sd.count(n - 1)];
        for (t, row) in sd.boundary(n).iter().enumerate() {
            for &(f, _) in row {
                incidence[f] += 1;
                match first_top[f] {
                    None => first_top[f] = Some(t),
                    Some(u) => {
                        let (a, b) = (find(&mut parent, t), find(&mut parent, u));
                        parent[a] = b;
                    }
                }
            }
        }
        if let Some(f) = incidence.iter().position(|&c| c != 1 && c != 2) {
            witnesses.push(Witness::Branching {
                simplex: sd.cells_of(&sd.simplices(n - 1)[f]),
                incidence: incidence[f],
            });
        }
        boundary = incidence
            .iter()
            .enumerate()
            .filter(|(_, &c)| c == 1)
            .map(|(f, _)| sd.cells_of(&sd.simplices(n - 1)[f]))
            .collect();
    }

    // (3) strong connectedness; for n = 0 only a single point qualifies
    let root = find(&mut parent, 0);
    if let Some(t) = (1..top.len()).find(|&t| find(&mut parent, t) != root) {
        witnesses.push(Witness::Disconnected {
            first: sd.cells_of(&top[0]),
            second: sd.cells_of(&top[t]),
        });
    }

    let classification = if !witnesses.is_empty() {
        Classification::NotPseudoManifold
    } else if boundary.is_empty() {
        Classification::ClosedPseudoManifold
    } else {
        Classification::PseudoManifoldWithBoundary
    };
    Ok(PseudoManifoldReport {
        dimension: n,
        classification,
        witnesses,
        boundary,
    })
}
