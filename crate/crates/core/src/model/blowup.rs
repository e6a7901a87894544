use std::collections::{BTreeMap, HashSet};

use super::{
    validate_fiber, Component, ComponentId, ModelError, StratifiedFiber, Stratum, StratumId,
};
use crate::weight::PluricanonicalForm;

/// Where to blow up a relative surface model.
#[derive(Debug, Clone, PartialEq, Eq)]
pub enum BlowupCenter {
    /// A general point of a component, away from all other components. In
    /// higher dimension, a smooth codimension-two center inside the
    /// component meeting no other component; the combinatorics agree.
    Interior(ComponentId),
    /// The point where two components meet.
    PointStratum(StratumId),
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct BlowupResult {
    pub fiber: StratifiedFiber,
    pub forms: Vec<PluricanonicalForm>,
    pub exceptional: ComponentId,
    /// For every stratum of the new fiber, the stratum of the old fiber whose
    /// cell contains its image.
    pub carrier: BTreeMap<StratumId, StratumId>,
}

fn fresh(base: &str, used: &HashSet<String>) -> String {
    if !used.contains(base) {
        return base.to_string();
    }
    (1..)
        .map(|i| format!("{base}{i}"))
        .find(|s| !used.contains(s))
        .unwrap()
}

/// Blows up a point of the special fiber of a relative surface model and
/// updates the multiplicities of the fiber and of every form.
///
/// With `E` the exceptional curve: an interior point of `c` gives
/// `N_E = N_c`, `a_E = a_c + m` and a pendant edge `{c, E}`; the point
/// stratum of `{i, j}` gives `N_E = N_i + N_j`, `a_E = a_i + a_j + m` and
/// subdivides that edge.
pub fn blowup_surface_model(
    fiber: &StratifiedFiber,
    forms: &[PluricanonicalForm],
    center: &BlowupCenter,
) -> Result<BlowupResult, ModelError> {
    let report = validate_fiber(fiber);
    if !report.is_valid() {
        return Err(ModelError::InvalidFiber(report));
    }
    let surface_only = matches!(center, BlowupCenter::PointStratum(_));
    if surface_only && fiber.max_stratum_size() > 2 {
        return Err(ModelError::UnsupportedDimension {
            dimension: fiber.max_stratum_size() - 1,
        });
    }

    let mut used: HashSet<String> = fiber.components.iter().map(|c| c.id.0.clone()).collect();
    used.extend(fiber.strata.iter().map(|s| s.id.0.clone()));
    let e_id = ComponentId(fresh("E", &used));
    used.insert(e_id.0.clone());

    let vertex_stratum = |c: &ComponentId| -> StratumId {
        fiber
            .strata
            .iter()
            .find(|s| s.components.len() == 1 && &s.components[0] == c)
            .map(|s| s.id.clone())
            .expect("valid fiber has a stratum per component")
    };
    let coefficient = |form: &PluricanonicalForm, c: &ComponentId| {
        form.vertical_mults
            .get(c)
            .copied()
            .ok_or_else(|| ModelError::IncompleteForm {
                form: form.name.clone(),
                component: c.clone(),
            })
    };

    let mut out = fiber.clone();
    let mut carrier: BTreeMap<StratumId, StratumId> = fiber
        .strata
        .iter()
        .map(|s| (s.id.clone(), s.id.clone()))
        .collect();
    let mut new_forms = forms.to_vec();

    let e_vertex = StratumId(e_id.0.clone());
    out.strata.push(Stratum::vertex(e_vertex.clone(), e_id.clone()));

    match center {
        BlowupCenter::Interior(c) => {
            let comp = fiber
                .component(c)
                .ok_or_else(|| ModelError::UnknownComponent(c.clone()))?;
            out.components.push(Component::new(e_id.clone(), comp.multiplicity));
            for (new, old) in new_forms.iter_mut().zip(forms) {
                let a = coefficient(old, c)? + old.degree as i64;
                new.vertical_mults.insert(e_id.clone(), a);
            }
            let cv = vertex_stratum(c);
            let edge = StratumId(fresh(&format!("{}-{}", c, e_id), &used));
            out.strata.push(Stratum::new(
                edge.clone(),
                [c.clone(), e_id.clone()],
                [(c.clone(), e_vertex.clone()), (e_id.clone(), cv.clone())],
            ));
            carrier.insert(e_vertex, cv.clone());
            carrier.insert(edge, cv);
        }
        BlowupCenter::PointStratum(sid) => {
            let s = fiber
                .stratum(sid)
                .ok_or_else(|| ModelError::UnknownStratum(sid.clone()))?;
            if s.components.len() != 2 {
                return Err(ModelError::NotPointStratum(sid.clone()));
            }
            let (i, j) = (&s.components[0], &s.components[1]);
            let (ci, cj) = (
                fiber.component(i).expect("validated"),
                fiber.component(j).expect("validated"),
            );
            out.components.push(Component::new(
                e_id.clone(),
                ci.multiplicity + cj.multiplicity,
            ));
            for (new, old) in new_forms.iter_mut().zip(forms) {
                let a = coefficient(old, i)? + coefficient(old, j)? + old.degree as i64;
                new.vertical_mults.insert(e_id.clone(), a);
            }
            out.strata.retain(|x| &x.id != sid);
            carrier.remove(sid);
            for end in [i, j] {
                let edge = StratumId(fresh(&format!("{sid}.{end}"), &used));
                used.insert(edge.0.clone());
                out.strata.push(Stratum::new(
                    edge.clone(),
                    [end.clone(), e_id.clone()],
                    [
                        (end.clone(), e_vertex.clone()),
                        (e_id.clone(), vertex_stratum(end)),
                    ],
                ));
                carrier.insert(edge, sid.clone());
            }
            carrier.insert(e_vertex, sid.clone());
        }
    }

    Ok(BlowupResult {
        fiber: out,
        forms: new_forms,
        exceptional: e_id,
        carrier,
    })
}
