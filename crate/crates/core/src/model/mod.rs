//! Input data for a special fiber and the dual complex built from it.

mod blowup;
mod complex;
mod random;
mod subdivision;

use std::collections::{BTreeMap, BTreeSet, HashMap};
use std::fmt;

use serde::{Deserialize, Serialize};
use thiserror::Error;

pub use blowup::{blowup_surface_model, BlowupCenter, BlowupResult};
pub use complex::{build_dual_complex, Cell, CellId, DualComplex, SkeletonPoint, Subcomplex};
pub use random::random_fiber;
pub use subdivision::{barycentric_subdivision, SimplicialComplex};

#[derive(Debug, Clone, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize, Deserialize)]
#[serde(transparent)]
pub struct ComponentId(pub String);

#[derive(Debug, Clone, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize, Deserialize)]
#[serde(transparent)]
pub struct StratumId(pub String);

macro_rules! id_impls {
    ($t:ident) => {
        impl From<&str> for $t {
            fn from(s: &str) -> Self {
                $t(s.to_string())
            }
        }

        impl From<String> for $t {
            fn from(s: String) -> Self {
                $t(s)
            }
        }

        impl fmt::Display for $t {
            fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
                f.write_str(&self.0)
            }
        }

        impl $t {
            pub fn as_str(&self) -> &str {
                &self.0
            }
        }
    };
}

id_impls!(ComponentId);
id_impls!(StratumId);

/// An irreducible component of the special fiber.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct Component {
    pub id: ComponentId,
    #[serde(default)]
    pub name: String,
    /// Multiplicity of the component in the special fiber.
    pub multiplicity: u64,
}

impl Component {
    pub fn new(id: impl Into<ComponentId>, multiplicity: u64) -> Self {
        let id = id.into();
        Component {
            name: id.0.clone(),
            id,
            multiplicity,
        }
    }
}

/// A connected component of the intersection of the components in `components`.
///
/// For `|components| >= 2`, `parents[j]` names the stratum over
/// `components \ {j}` that contains this one.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct Stratum {
    pub id: StratumId,
    pub components: Vec<ComponentId>,
    #[serde(default, skip_serializing_if = "BTreeMap::is_empty")]
    pub parents: BTreeMap<ComponentId, StratumId>,
}

impl Stratum {
    pub fn vertex(id: impl Into<StratumId>, component: impl Into<ComponentId>) -> Self {
        Stratum {
            id: id.into(),
            components: vec![component.into()],
            parents: BTreeMap::new(),
        }
    }

    pub fn new<C, S>(
        id: impl Into<StratumId>,
        components: impl IntoIterator<Item = C>,
        parents: impl IntoIterator<Item = (C, S)>,
    ) -> Self
    where
        C: Into<ComponentId>,
        S: Into<StratumId>,
    {
        Stratum {
            id: id.into(),
            components: components.into_iter().map(Into::into).collect(),
            parents: parents
                .into_iter()
                .map(|(c, s)| (c.into(), s.into()))
                .collect(),
        }
    }

    pub fn dimension(&self) -> usize {
        self.components.len().saturating_sub(1)
    }
}

#[derive(Debug, Clone, Default, PartialEq, Eq, Serialize, Deserialize)]
pub struct StratifiedFiber {
    pub components: Vec<Component>,
    pub strata: Vec<Stratum>,
}

impl StratifiedFiber {
    pub fn component(&self, id: &ComponentId) -> Option<&Component> {
        self.components.iter().find(|c| &c.id == id)
    }

    pub fn stratum(&self, id: &StratumId) -> Option<&Stratum> {
        self.strata.iter().find(|s| &s.id == id)
    }

    /// Largest `|J|` over all strata.
    pub fn max_stratum_size(&self) -> usize {
        self.strata
            .iter()
            .map(|s| s.components.len())
            .max()
            .unwrap_or(0)
    }
}

/// One broken invariant of a [`StratifiedFiber`].
#[derive(Debug, Clone, PartialEq, Eq)]
pub enum Violation {
    NoComponents,
    DuplicateComponent {
        component: ComponentId,
    },
    ZeroMultiplicity {
        component: ComponentId,
    },
    DuplicateStratum {
        stratum: StratumId,
    },
    EmptyStratum {
        stratum: StratumId,
    },
    RepeatedComponent {
        stratum: StratumId,
        component: ComponentId,
    },
    UnknownComponent {
        stratum: StratumId,
        component: ComponentId,
    },
    MissingComponentStratum {
        component: ComponentId,
    },
    DuplicateComponentStratum {
        component: ComponentId,
        strata: Vec<StratumId>,
    },
    MissingParent {
        stratum: StratumId,
        component: ComponentId,
    },
    ExtraneousParent {
        stratum: StratumId,
        component: ComponentId,
    },
    DanglingParent {
        stratum: StratumId,
        component: ComponentId,
        parent: StratumId,
    },
    ParentMismatch {
        stratum: StratumId,
        component: ComponentId,
        parent: StratumId,
    },
    DiamondViolation {
        stratum: StratumId,
        first: ComponentId,
        second: ComponentId,
    },
}

impl Violation {
    /// Stable machine-readable tag.
    pub fn kind(&self) -> &'static str {
        match self {
            Violation::NoComponents => "no-components",
            Violation::DuplicateComponent { .. } => "duplicate-component",
            Violation::ZeroMultiplicity { .. } => "zero-multiplicity",
            Violation::DuplicateStratum { .. } => "duplicate-stratum",
            Violation::EmptyStratum { .. } => "empty-stratum",
            Violation::RepeatedComponent { .. } => "repeated-component",
            Violation::UnknownComponent { .. } => "unknown-component",
            Violation::MissingComponentStratum { .. } => "missing-component-stratum",
            Violation::DuplicateComponentStratum { .. } => "duplicate-component-stratum",
            Violation::MissingParent { .. } => "missing-parent",
            Violation::ExtraneousParent { .. } => "extraneous-parent",
            Violation::DanglingParent { .. } => "dangling-parent",
            Violation::ParentMismatch { .. } => "parent-mismatch",
            Violation::DiamondViolation { .. } => "diamond-violation",
        }
    }

    /// The stratum the violation is attached to, if any.
    pub fn stratum(&self) -> Option<&StratumId> {
        match self {
            Violation::DuplicateStratum { stratum }
            | Violation::EmptyStratum { stratum }
            | Violation::RepeatedComponent { stratum, .. }
            | Violation::UnknownComponent { stratum, .. }
            | Violation::MissingParent { stratum, .. }
            | Violation::ExtraneousParent { stratum, .. }
            | Violation::DanglingParent { stratum, .. }
            | Violation::ParentMismatch { stratum, .. }
            | Violation::DiamondViolation { stratum, .. } => Some(stratum),
            _ => None,
        }
    }
}

impl fmt::Display for Violation {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Violation::NoComponents => write!(f, "fiber has no components"),
            Violation::DuplicateComponent { component } => {
                write!(f, "component id `{component}` is used more than once")
            }
            Violation::ZeroMultiplicity { component } => {
                write!(f, "component `{component}` has multiplicity 0")
            }
            Violation::DuplicateStratum { stratum } => {
                write!(f, "stratum id `{stratum}` is used more than once")
            }
            Violation::EmptyStratum { stratum } => {
                write!(f, "stratum `{stratum}` has no components")
            }
            Violation::RepeatedComponent { stratum, component } => {
                write!(f, "stratum `{stratum}` lists component `{component}` twice")
            }
            Violation::UnknownComponent { stratum, component } => {
                write!(f, "stratum `{stratum}` refers to unknown component `{component}`")
            }
            Violation::MissingComponentStratum { component } => {
                write!(f, "component `{component}` has no stratum of its own")
            }
            Violation::DuplicateComponentStratum { component, strata } => {
                let names: Vec<&str> = strata.iter().map(StratumId::as_str).collect();
                write!(
                    f,
                    "component `{component}` has several strata ({}); components must be irreducible",
                    names.join(", ")
                )
            }
            Violation::MissingParent { stratum, component } => {
                write!(f, "stratum `{stratum}` has no parent for `{component}`")
            }
            Violation::ExtraneousParent { stratum, component } => {
                write!(f, "stratum `{stratum}` has a parent entry for `{component}` that is not allowed")
            }
            Violation::DanglingParent {
                stratum,
                component,
                parent,
            } => write!(
                f,
                "stratum `{stratum}`: parent for `{component}` refers to unknown stratum `{parent}`"
            ),
            Violation::ParentMismatch {
                stratum,
                component,
                parent,
            } => write!(
                f,
                "stratum `{stratum}`: parent `{parent}` for `{component}` does not lie over the remaining components"
            ),
            Violation::DiamondViolation {
                stratum,
                first,
                second,
            } => write!(
                f,
                "stratum `{stratum}`: removing `{first}` then `{second}` and `{second}` then `{first}` reach different strata"
            ),
        }
    }
}

#[derive(Debug, Clone, Default, PartialEq, Eq)]
pub struct ValidationReport {
    pub violations: Vec<Violation>,
}

impl ValidationReport {
    pub fn is_valid(&self) -> bool {
        self.violations.is_empty()
    }
}

impl fmt::Display for ValidationReport {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.violations.is_empty() {
            return write!(f, "valid");
        }
        for (i, v) in self.violations.iter().enumerate() {
            if i > 0 {
                writeln!(f)?;
            }
            write!(f, "{v}")?;
        }
        Ok(())
    }
}

#[derive(Debug, Error)]
pub enum ModelError {
    #[error("invalid fiber: {0}")]
    InvalidFiber(ValidationReport),
    #[error("unknown component `{0}`")]
    UnknownComponent(ComponentId),
    #[error("unknown stratum `{0}`")]
    UnknownStratum(StratumId),
    #[error("blow-up needs a relative surface model, but the fiber has a cell of dimension {dimension}")]
    UnsupportedDimension { dimension: usize },
    #[error("stratum `{0}` is not a point stratum (intersection of two components)")]
    NotPointStratum(StratumId),
    #[error("form `{form}` has no multiplicity for component `{component}`")]
    IncompleteForm { form: String, component: ComponentId },
}

/// Checks every structural invariant of `fiber` and returns all violations.
pub fn validate_fiber(fiber: &StratifiedFiber) -> ValidationReport {
    let mut violations = Vec::new();

    if fiber.components.is_empty() {
        violations.push(Violation::NoComponents);
    }

    let mut components: HashMap<&ComponentId, &Component> = HashMap::new();
    for c in &fiber.components {
        if components.insert(&c.id, c).is_some() {
            violations.push(Violation::DuplicateComponent {
                component: c.id.clone(),
            });
        }
        if c.multiplicity == 0 {
            violations.push(Violation::ZeroMultiplicity {
                component: c.id.clone(),
            });
        }
    }

    let mut strata: HashMap<&StratumId, &Stratum> = HashMap::new();
    for s in &fiber.strata {
        if strata.insert(&s.id, s).is_some() {
            violations.push(Violation::DuplicateStratum {
                stratum: s.id.clone(),
            });
        }
    }

    // strata whose own component list is sound; parent checks rely on these
    let mut sound: HashMap<&StratumId, BTreeSet<&ComponentId>> = HashMap::new();
    let mut vertex_strata: BTreeMap<&ComponentId, Vec<StratumId>> = BTreeMap::new();
    for s in &fiber.strata {
        if s.components.is_empty() {
            violations.push(Violation::EmptyStratum {
                stratum: s.id.clone(),
            });
            continue;
        }
        let mut set = BTreeSet::new();
        let mut ok = true;
        for c in &s.components {
            if !set.insert(c) {
                violations.push(Violation::RepeatedComponent {
                    stratum: s.id.clone(),
                    component: c.clone(),
                });
                ok = false;
            }
            if !components.contains_key(c) {
                violations.push(Violation::UnknownComponent {
                    stratum: s.id.clone(),
                    component: c.clone(),
                });
                ok = false;
            }
        }
        if set.len() == 1 && ok {
            vertex_strata
                .entry(s.components.first().unwrap())
                .or_default()
                .push(s.id.clone());
        }
        if ok && !sound.contains_key(&s.id) {
            sound.insert(&s.id, set);
        }
    }

    for c in &fiber.components {
        match vertex_strata.get(&c.id) {
            None => violations.push(Violation::MissingComponentStratum {
                component: c.id.clone(),
            }),
            Some(list) if list.len() > 1 => violations.push(Violation::DuplicateComponentStratum {
                component: c.id.clone(),
                strata: list.clone(),
            }),
            _ => {}
        }
    }

    // parent pointers; `resolved` keeps strata whose parents are all correct
    let mut resolved: HashMap<&StratumId, bool> = HashMap::new();
    for s in &fiber.strata {
        let Some(set) = sound.get(&s.id) else {
            continue;
        };
        let mut ok = true;
        if set.len() == 1 {
            for c in s.parents.keys() {
                violations.push(Violation::ExtraneousParent {
                    stratum: s.id.clone(),
                    component: c.clone(),
                });
                ok = false;
            }
        } else {
            for c in s.parents.keys() {
                if !set.contains(c) {
                    violations.push(Violation::ExtraneousParent {
                        stratum: s.id.clone(),
                        component: c.clone(),
                    });
                    ok = false;
                }
            }
            for &j in set {
                let Some(parent) = s.parents.get(j) else {
                    violations.push(Violation::MissingParent {
                        stratum: s.id.clone(),
                        component: j.clone(),
                    });
                    ok = false;
                    continue;
                };
                let Some(parent_set) = sound.get(parent) else {
                    if !strata.contains_key(parent) {
                        violations.push(Violation::DanglingParent {
                            stratum: s.id.clone(),
                            component: j.clone(),
                            parent: parent.clone(),
                        });
                    }
                    ok = false;
                    continue;
                };
                let expected: BTreeSet<&ComponentId> =
                    set.iter().copied().filter(|c| *c != j).collect();
                if *parent_set != expected {
                    violations.push(Violation::ParentMismatch {
                        stratum: s.id.clone(),
                        component: j.clone(),
                        parent: parent.clone(),
                    });
                    ok = false;
                }
            }
        }
        resolved.insert(&s.id, ok);
    }

    // diamond condition, only where both two-step paths are well formed
    for s in &fiber.strata {
        if resolved.get(&s.id) != Some(&true) {
            continue;
        }
        let set = &sound[&s.id];
        if set.len() < 3 {
            continue;
        }
        let members: Vec<&ComponentId> = set.iter().copied().collect();
        for (a, &j) in members.iter().enumerate() {
            for &k in &members[a + 1..] {
                let pj = &s.parents[j];
                let pk = &s.parents[k];
                if resolved.get(pj) != Some(&true) || resolved.get(pk) != Some(&true) {
                    continue;
                }
                let via_j = &strata[pj].parents[k];
                let via_k = &strata[pk].parents[j];
                if via_j != via_k {
                    violations.push(Violation::DiamondViolation {
                        stratum: s.id.clone(),
                        first: j.clone(),
                        second: k.clone(),
                    });
                }
            }
        }
    }

    ValidationReport { violations }
}
