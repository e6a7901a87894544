use std::collections::{BTreeMap, BTreeSet, HashMap};
use std::fmt;

use num_traits::{Signed, Zero};

use super::{validate_fiber, Component, ComponentId, ModelError, StratifiedFiber, StratumId};
use crate::rational::{int, is_one, Rational};

/// Index of a cell in a [`DualComplex`]. Cells are ordered by dimension, then
/// by stratum id.
#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct CellId(pub usize);

impl fmt::Display for CellId {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "#{}", self.0)
    }
}

/// A cell of the dual complex, with chart `{w >= 0, sum N_j w_j = 1}`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Cell {
    pub stratum: StratumId,
    /// Sorted component set `J`.
    pub components: Vec<ComponentId>,
    /// `N_j`, aligned with `components`.
    pub multiplicities: Vec<u64>,
    /// `facets[i]` is the face obtained by dropping `components[i]`.
    pub facets: Vec<CellId>,
}

impl Cell {
    pub fn dimension(&self) -> usize {
        self.components.len() - 1
    }

    pub fn multiplicity_of(&self, c: &ComponentId) -> Option<u64> {
        self.components
            .iter()
            .position(|x| x == c)
            .map(|i| self.multiplicities[i])
    }
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct DualComplex {
    components: Vec<Component>,
    cells: Vec<Cell>,
    cofacets: Vec<Vec<CellId>>,
    by_stratum: HashMap<StratumId, CellId>,
    vertex_of: BTreeMap<ComponentId, CellId>,
    max_dimension: usize,
}

/// Builds the dual Δ-complex of a valid fiber: one cell per stratum, glued
/// along the parent maps.
pub fn build_dual_complex(fiber: &StratifiedFiber) -> Result<DualComplex, ModelError> {
    let report = validate_fiber(fiber);
    if !report.is_valid() {
        return Err(ModelError::InvalidFiber(report));
    }

    let mult: HashMap<&ComponentId, u64> = fiber
        .components
        .iter()
        .map(|c| (&c.id, c.multiplicity))
        .collect();

    let mut order: Vec<usize> = (0..fiber.strata.len()).collect();
    order.sort_by(|&a, &b| {
        let (sa, sb) = (&fiber.strata[a], &fiber.strata[b]);
        sa.components
            .len()
            .cmp(&sb.components.len())
            .then_with(|| sa.id.cmp(&sb.id))
    });
    let by_stratum: HashMap<StratumId, CellId> = order
        .iter()
        .enumerate()
        .map(|(pos, &i)| (fiber.strata[i].id.clone(), CellId(pos)))
        .collect();

    let mut cells = Vec::with_capacity(order.len());
    for &i in &order {
        let s = &fiber.strata[i];
        let mut components = s.components.clone();
        components.sort();
        let multiplicities = components.iter().map(|c| mult[c]).collect();
        let facets = if components.len() == 1 {
            Vec::new()
        } else {
            components
                .iter()
                .map(|c| by_stratum[&s.parents[c]])
                .collect()
        };
        cells.push(Cell {
            stratum: s.id.clone(),
            components,
            multiplicities,
            facets,
        });
    }

    let mut cofacets = vec![Vec::new(); cells.len()];
    for (i, cell) in cells.iter().enumerate() {
        for f in &cell.facets {
            cofacets[f.0].push(CellId(i));
        }
    }

    let vertex_of = cells
        .iter()
        .enumerate()
        .filter(|(_, c)| c.components.len() == 1)
        .map(|(i, c)| (c.components[0].clone(), CellId(i)))
        .collect();
    let max_dimension = cells.iter().map(Cell::dimension).max().unwrap_or(0);

    let mut components = fiber.components.clone();
    components.sort_by(|a, b| a.id.cmp(&b.id));

    Ok(DualComplex {
        components,
        cells,
        cofacets,
        by_stratum,
        vertex_of,
        max_dimension,
    })
}

impl DualComplex {
    /// Components sorted by id.
    pub fn components(&self) -> &[Component] {
        &self.components
    }

    pub fn component(&self, id: &ComponentId) -> Option<&Component> {
        self.components
            .binary_search_by(|c| c.id.cmp(id))
            .ok()
            .map(|i| &self.components[i])
    }

    pub fn cells(&self) -> &[Cell] {
        &self.cells
    }

    pub fn cell(&self, id: CellId) -> &Cell {
        &self.cells[id.0]
    }

    pub fn len(&self) -> usize {
        self.cells.len()
    }

    pub fn is_empty(&self) -> bool {
        self.cells.is_empty()
    }

    pub fn cell_ids(&self) -> impl Iterator<Item = CellId> + '_ {
        (0..self.cells.len()).map(CellId)
    }

    pub fn max_dimension(&self) -> usize {
        self.max_dimension
    }

    pub fn cell_of_stratum(&self, id: &StratumId) -> Option<CellId> {
        self.by_stratum.get(id).copied()
    }

    pub fn vertex_cell(&self, id: &ComponentId) -> Option<CellId> {
        self.vertex_of.get(id).copied()
    }

    /// Cells having `id` as a codimension-one face.
    pub fn cofacets(&self, id: CellId) -> &[CellId] {
        &self.cofacets[id.0]
    }

    /// The face of `id` lying over `J \ removed`. Panics if that set is empty
    /// or `removed` is not contained in `J`.
    pub fn face_without(&self, id: CellId, removed: &[ComponentId]) -> CellId {
        let mut current = id;
        for c in removed {
            let cell = &self.cells[current.0];
            let i = cell
                .components
                .iter()
                .position(|x| x == c)
                .expect("component not in cell");
            current = cell.facets[i];
        }
        current
    }

    /// All faces of `id` including itself.
    pub fn closure_of(&self, id: CellId) -> BTreeSet<CellId> {
        let mut seen = BTreeSet::new();
        let mut stack = vec![id];
        while let Some(c) = stack.pop() {
            if seen.insert(c) {
                stack.extend(self.cells[c.0].facets.iter().copied());
            }
        }
        seen
    }

    /// Whether `face` is a face of `cell` (reflexive).
    pub fn is_face(&self, face: CellId, cell: CellId) -> bool {
        let (f, c) = (&self.cells[face.0], &self.cells[cell.0]);
        if f.components.len() > c.components.len()
            || !f.components.iter().all(|x| c.components.contains(x))
        {
            return false;
        }
        let removed: Vec<ComponentId> = c
            .components
            .iter()
            .filter(|x| !f.components.contains(x))
            .cloned()
            .collect();
        self.face_without(cell, &removed) == face
    }

    pub fn cells_of_dimension(&self, dim: usize) -> impl Iterator<Item = CellId> + '_ {
        self.cell_ids().filter(move |&c| self.cells[c.0].dimension() == dim)
    }

    /// Alternating count of the cells in `sub`.
    pub fn euler_characteristic(&self, sub: &Subcomplex) -> i64 {
        sub.iter()
            .map(|c| {
                if self.cells[c.0].dimension().is_multiple_of(2) {
                    1
                } else {
                    -1
                }
            })
            .sum()
    }
}

/// A face-closed set of cells.
#[derive(Debug, Clone, Default, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct Subcomplex {
    cells: BTreeSet<CellId>,
}

impl Subcomplex {
    pub fn empty() -> Self {
        Subcomplex::default()
    }

    pub fn full(complex: &DualComplex) -> Self {
        Subcomplex {
            cells: complex.cell_ids().collect(),
        }
    }

    /// Smallest subcomplex containing `cells`.
    pub fn closure(complex: &DualComplex, cells: impl IntoIterator<Item = CellId>) -> Self {
        let mut out = BTreeSet::new();
        for c in cells {
            if !out.contains(&c) {
                out.extend(complex.closure_of(c));
            }
        }
        Subcomplex { cells: out }
    }

    /// Wraps `cells` without closing it; check with [`Subcomplex::is_face_closed`].
    pub fn from_cells_unchecked(cells: impl IntoIterator<Item = CellId>) -> Self {
        Subcomplex {
            cells: cells.into_iter().collect(),
        }
    }

    pub fn is_face_closed(&self, complex: &DualComplex) -> bool {
        self.cells.iter().all(|&c| {
            c.0 < complex.len() && complex.cell(c).facets.iter().all(|f| self.cells.contains(f))
        })
    }

    pub fn contains(&self, id: CellId) -> bool {
        self.cells.contains(&id)
    }

    pub fn len(&self) -> usize {
        self.cells.len()
    }

    pub fn is_empty(&self) -> bool {
        self.cells.is_empty()
    }

    pub fn iter(&self) -> impl Iterator<Item = CellId> + '_ {
        self.cells.iter().copied()
    }

    pub fn cells(&self) -> &BTreeSet<CellId> {
        &self.cells
    }

    pub fn union(&self, other: &Subcomplex) -> Subcomplex {
        Subcomplex {
            cells: self.cells.union(&other.cells).copied().collect(),
        }
    }

    pub fn is_subset(&self, other: &Subcomplex) -> bool {
        self.cells.is_subset(&other.cells)
    }

    pub fn max_dimension(&self, complex: &DualComplex) -> Option<usize> {
        self.iter().map(|c| complex.cell(c).dimension()).max()
    }

    /// Stratum ids of the member cells, in cell order.
    pub fn strata<'a>(&'a self, complex: &'a DualComplex) -> impl Iterator<Item = &'a StratumId> {
        self.iter().map(move |c| &complex.cell(c).stratum)
    }
}

impl FromIterator<CellId> for Subcomplex {
    fn from_iter<T: IntoIterator<Item = CellId>>(iter: T) -> Self {
        Subcomplex::from_cells_unchecked(iter)
    }
}

#[derive(Debug, Clone, PartialEq, Eq, thiserror::Error)]
pub enum PointError {
    #[error("weights must be given for exactly the components of the carrier cell")]
    WrongSupport,
    #[error("weight of `{0}` is not positive")]
    NonPositive(ComponentId),
    #[error("weights violate sum N_j w_j = 1 (sum is {0})")]
    NotNormalized(Rational),
}

/// A point in the relative interior of a cell, in monomial coordinates.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct SkeletonPoint {
    cell: CellId,
    weights: BTreeMap<ComponentId, Rational>,
}

impl SkeletonPoint {
    pub fn new(
        complex: &DualComplex,
        cell: CellId,
        weights: BTreeMap<ComponentId, Rational>,
    ) -> Result<Self, PointError> {
        let c = complex.cell(cell);
        if weights.len() != c.components.len()
            || !c.components.iter().all(|j| weights.contains_key(j))
        {
            return Err(PointError::WrongSupport);
        }
        let mut total = Rational::zero();
        for (j, n) in c.components.iter().zip(&c.multiplicities) {
            let w = &weights[j];
            if !w.is_positive() {
                return Err(PointError::NonPositive(j.clone()));
            }
            total += w * int(*n as i64);
        }
        if !is_one(&total) {
            return Err(PointError::NotNormalized(total));
        }
        Ok(SkeletonPoint { cell, weights })
    }

    /// The point with barycentric coordinates proportional to `lambda`,
    /// mapped into the chart: `w_j = lambda_j / (N_j * sum lambda)`.
    pub fn from_barycentric(
        complex: &DualComplex,
        cell: CellId,
        lambda: &[Rational],
    ) -> Result<Self, PointError> {
        let c = complex.cell(cell);
        if lambda.len() != c.components.len() {
            return Err(PointError::WrongSupport);
        }
        let total: Rational = lambda.iter().cloned().sum();
        let weights = c
            .components
            .iter()
            .zip(&c.multiplicities)
            .zip(lambda)
            .map(|((j, n), l)| (j.clone(), l / (&total * int(*n as i64))))
            .collect();
        SkeletonPoint::new(complex, cell, weights)
    }

    pub fn barycenter(complex: &DualComplex, cell: CellId) -> Self {
        let k = complex.cell(cell).components.len();
        SkeletonPoint::from_barycentric(complex, cell, &vec![int(1); k])
            .expect("barycenter is a valid point")
    }

    /// The divisorial point `w_j = 1/N_j` of a component.
    pub fn vertex(complex: &DualComplex, component: &ComponentId) -> Option<Self> {
        let cell = complex.vertex_cell(component)?;
        Some(Self::barycenter(complex, cell))
    }

    pub fn cell(&self) -> CellId {
        self.cell
    }

    pub fn weights(&self) -> &BTreeMap<ComponentId, Rational> {
        &self.weights
    }
}
