use std::collections::HashSet;

use crate::model::{CellId, DualComplex, Subcomplex};

use super::TopologyError;

/// Removal of `free_face` together with its unique proper coface `coface`.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct CollapseStep {
    pub free_face: CellId,
    pub coface: CellId,
}

#[derive(Debug, Clone, Default, PartialEq, Eq)]
pub struct CollapseSequence {
    pub steps: Vec<CollapseStep>,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct CollapseSearch {
    /// Maximum number of elementary collapses tried, backtracked ones included.
    pub budget: u64,
}

impl Default for CollapseSearch {
    fn default() -> Self {
        CollapseSearch { budget: 1_000_000 }
    }
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub enum CollapseOutcome {
    Found(CollapseSequence),
    /// The bounded search failed. This does not prove that no sequence exists.
    NotFound { explored: u64, budget_exhausted: bool },
}

impl CollapseOutcome {
    pub fn sequence(&self) -> Option<&CollapseSequence> {
        match self {
            CollapseOutcome::Found(s) => Some(s),
            CollapseOutcome::NotFound { .. } => None,
        }
    }
}

struct Search<'a> {
    complex: &'a DualComplex,
    target: &'a Subcomplex,
    alive: Vec<bool>,
    remaining: usize,
    explored: u64,
    budget: u64,
    dead_ends: HashSet<Vec<bool>>,
    steps: Vec<CollapseStep>,
}

impl Search<'_> {
    fn alive_cofacets(&self, c: CellId) -> impl Iterator<Item = CellId> + '_ {
        self.complex
            .cofacets(c)
            .iter()
            .copied()
            .filter(|t| self.alive[t.0])
    }

    /// Free pairs in lexicographic order of (face, coface).
    fn free_pairs(&self) -> Vec<CollapseStep> {
        let mut out = Vec::new();
        for c in self.complex.cell_ids() {
            if !self.alive[c.0] || self.target.contains(c) {
                continue;
            }
            let mut up = self.alive_cofacets(c);
            let (Some(t), None) = (up.next(), up.next()) else {
                continue;
            };
            if self.alive_cofacets(t).next().is_none() {
                out.push(CollapseStep {
                    free_face: c,
                    coface: t,
                });
            }
        }
        out
    }

    fn run(&mut self) -> bool {
        if self.remaining == self.target.len() {
            return true;
        }
        if self.dead_ends.contains(&self.alive) {
            return false;
        }
        for step in self.free_pairs() {
            if self.explored >= self.budget {
                return false;
            }
            self.explored += 1;
            self.alive[step.free_face.0] = false;
            self.alive[step.coface.0] = false;
            self.remaining -= 2;
            self.steps.push(step);
            if self.run() {
                return true;
            }
            self.steps.pop();
            self.remaining += 2;
            self.alive[step.free_face.0] = true;
            self.alive[step.coface.0] = true;
        }
        if self.explored < self.budget {
            self.dead_ends.insert(self.alive.clone());
        }
        false
    }
}

/// Depth-first search, with backtracking, for elementary collapses taking the
/// whole complex down to `target`. Target cells are never removed.
pub fn find_collapse_sequence(
    complex: &DualComplex,
    target: &Subcomplex,
    search: CollapseSearch,
) -> Result<CollapseOutcome, TopologyError> {
    if !target.is_face_closed(complex) {
        return Err(TopologyError::TargetNotContained);
    }
    let mut s = Search {
        complex,
        target,
        alive: vec![true; complex.len()],
        remaining: complex.len(),
        explored: 0,
        budget: search.budget,
        dead_ends: HashSet::new(),
        steps: Vec::new(),
    };
    if s.run() {
        Ok(CollapseOutcome::Found(CollapseSequence { steps: s.steps }))
    } else {
        Ok(CollapseOutcome::NotFound {
            explored: s.explored,
            budget_exhausted: s.explored >= s.budget,
        })
    }
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct CollapseVerdict {
    pub valid: bool,
    pub first_bad_step: Option<usize>,
    pub reason: Option<String>,
    /// Cells left over that are not in the target (or target cells removed).
    pub residual: Vec<CellId>,
}

/// Replays `sequence` on the full complex and checks every step and the end
/// state. Independent of the search: cofaces are recomputed from the face
/// relation at each step.
pub fn verify_collapse_sequence(
    complex: &DualComplex,
    target: &Subcomplex,
    sequence: &CollapseSequence,
) -> CollapseVerdict {
    let bad = |step: Option<usize>, reason: String, residual: Vec<CellId>| CollapseVerdict {
        valid: false,
        first_bad_step: step,
        reason: Some(reason),
        residual,
    };
    if !target.is_face_closed(complex) {
        return bad(None, "target is not a subcomplex".into(), Vec::new());
    }
    let mut alive: Vec<bool> = vec![true; complex.len()];
    let proper_cofaces = |alive: &[bool], c: CellId| -> Vec<CellId> {
        complex
            .cell_ids()
            .filter(|&t| t != c && alive[t.0] && complex.is_face(c, t))
            .collect()
    };
    for (i, step) in sequence.steps.iter().enumerate() {
        let (f, t) = (step.free_face, step.coface);
        if f.0 >= complex.len() || t.0 >= complex.len() {
            return bad(Some(i), "unknown cell".into(), Vec::new());
        }
        if !alive[f.0] || !alive[t.0] {
            return bad(Some(i), "cell already removed".into(), Vec::new());
        }
        if target.contains(f) || target.contains(t) {
            return bad(Some(i), "step removes a target cell".into(), Vec::new());
        }
        let up = proper_cofaces(&alive, f);
        if up != [t] {
            return bad(
                Some(i),
                format!(
                    "{} has {} proper cofaces; a free face needs exactly one",
                    complex.cell(f).stratum,
                    up.len()
                ),
                Vec::new(),
            );
        }
        if !proper_cofaces(&alive, t).is_empty() {
            return bad(Some(i), "coface is not maximal".into(), Vec::new());
        }
        alive[f.0] = false;
        alive[t.0] = false;
    }
    let residual: Vec<CellId> = complex
        .cell_ids()
        .filter(|&c| alive[c.0] != target.contains(c))
        .collect();
    if !residual.is_empty() {
        return bad(
            None,
            "final cell set differs from the target".into(),
            residual,
        );
    }
    CollapseVerdict {
        valid: true,
        first_bad_step: None,
        reason: None,
        residual,
    }
}
