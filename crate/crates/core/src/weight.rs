//! Weight functions of pluricanonical forms on the dual complex and the
//! skeleta cut out by them.

use std::collections::BTreeMap;

use num_traits::{One, Zero};
use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::model::{Component, ComponentId, DualComplex, SkeletonPoint, Subcomplex};
use crate::rational::{format_rational, int, Rational};

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum WeightError {
    #[error("divisor has no coefficient for component `{0}`")]
    IncompleteDivisor(ComponentId),
    #[error("form `{form}` has no multiplicity for component `{component}`")]
    IncompleteForm { form: String, component: ComponentId },
    #[error("form `{0}` has degree 0")]
    ZeroDegree(String),
    #[error("at least one form is required")]
    MissingForms,
    #[error("delta assignment has no multiplicity for component `{0}`")]
    IncompleteDelta(ComponentId),
    #[error("delta multiplicity of `{component}` is {}, above 1: not a dlt log pullback", format_rational(.value))]
    DltViolation {
        component: ComponentId,
        value: Rational,
    },
}

/// An `m`-pluricanonical form, recorded through the multiplicities `a_j` of
/// the fiber components in its divisor.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct PluricanonicalForm {
    pub name: String,
    pub degree: u64,
    pub vertical_mults: BTreeMap<ComponentId, i64>,
}

impl PluricanonicalForm {
    pub fn new(
        name: impl Into<String>,
        degree: u64,
        mults: impl IntoIterator<Item = (ComponentId, i64)>,
    ) -> Self {
        PluricanonicalForm {
            name: name.into(),
            degree,
            vertical_mults: mults.into_iter().collect(),
        }
    }

    /// The form with `a_j = 0` on every component.
    pub fn trivial(name: impl Into<String>, degree: u64, complex: &DualComplex) -> Self {
        Self::new(
            name,
            degree,
            complex.components().iter().map(|c| (c.id.clone(), 0)),
        )
    }

    /// Checks degree and totality against the components of `complex`.
    pub fn check(&self, components: &[Component]) -> Result<(), WeightError> {
        if self.degree == 0 {
            return Err(WeightError::ZeroDegree(self.name.clone()));
        }
        for c in components {
            if !self.vertical_mults.contains_key(&c.id) {
                return Err(WeightError::IncompleteForm {
                    form: self.name.clone(),
                    component: c.id.clone(),
                });
            }
        }
        Ok(())
    }

    fn coefficient(&self, c: &ComponentId) -> Result<i64, WeightError> {
        self.vertical_mults
            .get(c)
            .copied()
            .ok_or_else(|| WeightError::IncompleteForm {
                form: self.name.clone(),
                component: c.clone(),
            })
    }

    /// `div(ω) + m (X_s)_red` as a vertical divisor.
    pub fn weight_divisor(&self) -> VerticalDivisor {
        VerticalDivisor {
            coeffs: self
                .vertical_mults
                .iter()
                .map(|(c, a)| (c.clone(), a + self.degree as i64))
                .collect(),
        }
    }

    /// The `d`-th tensor power: `(d m, d a)`.
    pub fn power(&self, d: u64) -> Self {
        PluricanonicalForm {
            name: self.name.clone(),
            degree: self.degree * d,
            vertical_mults: self
                .vertical_mults
                .iter()
                .map(|(c, a)| (c.clone(), a * d as i64))
                .collect(),
        }
    }

    /// Multiplication by `t^c`: `a_j + c N_j`.
    pub fn twist(&self, c: i64, components: &[Component]) -> Self {
        let mut out = self.clone();
        for comp in components {
            if let Some(a) = out.vertical_mults.get_mut(&comp.id) {
                *a += c * comp.multiplicity as i64;
            }
        }
        out
    }
}

/// A divisor supported on the special fiber.
#[derive(Debug, Clone, Default, PartialEq, Eq)]
pub struct VerticalDivisor {
    pub coeffs: BTreeMap<ComponentId, i64>,
}

impl VerticalDivisor {
    /// The special fiber itself, `sum N_j E_j`.
    pub fn special_fiber(complex: &DualComplex) -> Self {
        VerticalDivisor {
            coeffs: complex
                .components()
                .iter()
                .map(|c| (c.id.clone(), c.multiplicity as i64))
                .collect(),
        }
    }

    /// `(X_s)_red`.
    pub fn reduced_fiber(complex: &DualComplex) -> Self {
        VerticalDivisor {
            coeffs: complex
                .components()
                .iter()
                .map(|c| (c.id.clone(), 1))
                .collect(),
        }
    }

    pub fn add(&self, other: &VerticalDivisor) -> VerticalDivisor {
        let mut coeffs = self.coeffs.clone();
        for (c, d) in &other.coeffs {
            *coeffs.entry(c.clone()).or_default() += d;
        }
        VerticalDivisor { coeffs }
    }
}

/// Multiplicities of the log pullback of `(X_s)_red` along a morphism to a
/// dlt model.
#[derive(Debug, Clone, Default, PartialEq, Eq)]
pub struct DeltaAssignment {
    pub mults: BTreeMap<ComponentId, Rational>,
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct MinimalityResult {
    pub minimum: Rational,
    pub locus: Subcomplex,
}

/// `v_x(D) = sum_j w_j d_j` over the carrier cell.
pub fn monomial_valuation(
    point: &SkeletonPoint,
    divisor: &VerticalDivisor,
) -> Result<Rational, WeightError> {
    point
        .weights()
        .iter()
        .try_fold(Rational::zero(), |acc, (j, w)| {
            let d = divisor
                .coeffs
                .get(j)
                .ok_or_else(|| WeightError::IncompleteDivisor(j.clone()))?;
            Ok(acc + w * int(*d))
        })
}

/// `wt_ω(x) = v_x(div(ω) + m (X_s)_red) = sum_j w_j (a_j + m)`.
pub fn weight_at_point(
    point: &SkeletonPoint,
    form: &PluricanonicalForm,
) -> Result<Rational, WeightError> {
    point
        .weights()
        .iter()
        .try_fold(Rational::zero(), |acc, (j, w)| {
            let a = form.coefficient(j)?;
            Ok(acc + w * int(a + form.degree as i64))
        })
}

/// Weight at the divisorial point of `component`: `(a_j + m) / N_j`.
pub fn vertex_weight(
    component: &Component,
    form: &PluricanonicalForm,
) -> Result<Rational, WeightError> {
    let a = form.coefficient(&component.id)?;
    Ok(Rational::new(
        (a + form.degree as i64).into(),
        (component.multiplicity as i64).into(),
    ))
}

/// The Kontsevich–Soibelman skeleton of `form`: the union of the closed cells
/// on which the weight function attains its minimum.
///
/// The weight is affine on each cell, so its minimum over the complex is the
/// smallest vertex weight `λ`, and a cell lies in the locus exactly when all
/// of its vertices have weight `λ`.
pub fn minimality_locus(
    complex: &DualComplex,
    form: &PluricanonicalForm,
) -> Result<MinimalityResult, WeightError> {
    form.check(complex.components())?;
    let weights: BTreeMap<&ComponentId, Rational> = complex
        .components()
        .iter()
        .map(|c| vertex_weight(c, form).map(|w| (&c.id, w)))
        .collect::<Result<_, _>>()?;
    let minimum = weights
        .values()
        .min()
        .cloned()
        .expect("a dual complex has at least one component");
    let locus = complex
        .cell_ids()
        .filter(|&id| {
            complex
                .cell(id)
                .components
                .iter()
                .all(|j| weights[j] == minimum)
        })
        .collect();
    Ok(MinimalityResult { minimum, locus })
}

/// Union of the Kontsevich–Soibelman skeleta of `forms`.
pub fn essential_skeleton(
    complex: &DualComplex,
    forms: &[PluricanonicalForm],
) -> Result<Subcomplex, WeightError> {
    if forms.is_empty() {
        return Err(WeightError::MissingForms);
    }
    forms.iter().try_fold(Subcomplex::empty(), |acc, form| {
        Ok(acc.union(&minimality_locus(complex, form)?.locus))
    })
}

/// Skeleton of the dlt model whose log pullback is `delta`: the cells on
/// which `v_x(Δ) = v_x((Y_s)_red)`, i.e. all of whose components have
/// `δ_j = 1`.
pub fn lc_subcomplex(
    complex: &DualComplex,
    delta: &DeltaAssignment,
) -> Result<Subcomplex, WeightError> {
    let one = Rational::one();
    for c in complex.components() {
        let d = delta
            .mults
            .get(&c.id)
            .ok_or_else(|| WeightError::IncompleteDelta(c.id.clone()))?;
        if *d > one {
            return Err(WeightError::DltViolation {
                component: c.id.clone(),
                value: d.clone(),
            });
        }
    }
    Ok(complex
        .cell_ids()
        .filter(|&id| {
            complex
                .cell(id)
                .components
                .iter()
                .all(|j| delta.mults[j] == one)
        })
        .collect::<Subcomplex>())
}

/// Weight after a base change of ramification index `d`: `d·wt − d + 1`.
pub fn rescale_weight(wt: &Rational, d: u64) -> Rational {
    let d = int(d as i64);
    &d * wt - &d + Rational::one()
}

/// Cells of `complex` with their vertex weights for `form`, for reports.
pub fn vertex_weights(
    complex: &DualComplex,
    form: &PluricanonicalForm,
) -> Result<Vec<(ComponentId, Rational)>, WeightError> {
    complex
        .components()
        .iter()
        .map(|c| vertex_weight(c, form).map(|w| (c.id.clone(), w)))
        .collect()
}
