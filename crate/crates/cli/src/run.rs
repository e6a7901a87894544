//! Command dispatch: one command on one document yields one [`Report`].

use serde_json::{json, Value};
use skeleta::rational::{format_rational, Rational};
use skeleta::{
    betti_numbers, blowup_surface_model, build_dual_complex, classify_pseudo_manifold,
    essential_skeleton, find_collapse_sequence, is_q_homology_sphere, lc_subcomplex,
    minimality_locus, rescale_weight, validate_fiber, verify_collapse_sequence, BlowupCenter,
    CellId, CollapseOutcome, CollapseSearch, DeltaAssignment, DualComplex, ModelError,
    Subcomplex, TopologyError, WeightError, Witness,
};
use thiserror::Error;

use crate::corpus::CorpusError;
use crate::document::{DocumentError, ModelDocument};
use crate::report::Report;

/// Which subcomplex a topology command looks at.
#[derive(Debug, Clone, PartialEq, Eq)]
pub enum Subset {
    Full,
    Essential,
    /// The lc skeleton of the named delta assignment (or the only one).
    Lc(Option<String>),
}

impl Subset {
    fn label(&self) -> String {
        match self {
            Subset::Full => "full".into(),
            Subset::Essential => "essential".into(),
            Subset::Lc(None) => "lc".into(),
            Subset::Lc(Some(d)) => format!("lc --delta {d}"),
        }
    }
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub enum Command {
    Validate,
    DualComplex,
    Weights,
    KsSkeleton { form: String },
    Essential,
    LcSkeleton { delta: Option<String> },
    Classify { of: Subset },
    Homology { of: Subset },
    SphereCheck { of: Subset, n: Option<usize> },
    Collapse { target: Subset, budget: u64 },
    Blowup { center: BlowupCenter },
    Rescale { d: u64, value: Option<Rational> },
}

impl Command {
    /// Command line echoed into reports.
    pub fn echo(&self) -> String {
        match self {
            Command::Validate => "validate".into(),
            Command::DualComplex => "dual-complex".into(),
            Command::Weights => "weights".into(),
            Command::KsSkeleton { form } => format!("ks-skeleton --form {form}"),
            Command::Essential => "essential".into(),
            Command::LcSkeleton { delta: None } => "lc-skeleton".into(),
            Command::LcSkeleton { delta: Some(d) } => format!("lc-skeleton --delta {d}"),
            Command::Classify { of } => format!("classify --of {}", of.label()),
            Command::Homology { of } => format!("homology --of {}", of.label()),
            Command::SphereCheck { of, n } => match n {
                Some(n) => format!("sphere-check --of {} --n {n}", of.label()),
                None => format!("sphere-check --of {}", of.label()),
            },
            Command::Collapse { target, budget } => {
                format!("collapse --target {} --budget {budget}", target.label())
            }
            Command::Blowup { center } => match center {
                BlowupCenter::Interior(c) => format!("blowup --center component:{c}"),
                BlowupCenter::PointStratum(s) => format!("blowup --center stratum:{s}"),
            },
            Command::Rescale { d, value: None } => format!("rescale --d {d}"),
            Command::Rescale { d, value: Some(v) } => {
                format!("rescale --d {d} --value {}", format_rational(v))
            }
        }
    }
}

#[derive(Debug, Error)]
pub enum RunError {
    #[error(transparent)]
    Document(#[from] DocumentError),
    #[error(transparent)]
    Corpus(#[from] CorpusError),
    #[error(transparent)]
    Model(#[from] ModelError),
    #[error(transparent)]
    Weight(#[from] WeightError),
    #[error(transparent)]
    Topology(#[from] TopologyError),
    #[error("no form named `{0}`")]
    UnknownForm(String),
    #[error("no delta assignment named `{0}`")]
    UnknownDelta(String),
    #[error("the document has {0} delta assignments; pick one with --delta")]
    AmbiguousDelta(usize),
    #[error("ramification index must be at least 1")]
    ZeroRamification,
    #[error("collapse target must be `essential` or `lc`")]
    BadCollapseTarget,
}

impl RunError {
    /// Stable error code.
    pub fn code(&self) -> &'static str {
        match self {
            RunError::Document(e) => e.code(),
            RunError::Corpus(e) => e.code(),
            RunError::Model(e) => match e {
                ModelError::InvalidFiber(_) => "invalid-fiber",
                ModelError::UnknownComponent(_) => "unknown-component",
                ModelError::UnknownStratum(_) => "unknown-stratum",
                ModelError::UnsupportedDimension { .. } => "unsupported-dimension",
                ModelError::NotPointStratum(_) => "not-point-stratum",
                ModelError::IncompleteForm { .. } => "incomplete-form",
            },
            RunError::Weight(e) => match e {
                WeightError::IncompleteDivisor(_) => "incomplete-divisor",
                WeightError::IncompleteForm { .. } => "incomplete-form",
                WeightError::ZeroDegree(_) => "zero-degree",
                WeightError::MissingForms => "missing-forms",
                WeightError::IncompleteDelta(_) => "incomplete-delta",
                WeightError::DltViolation { .. } => "dlt-violation",
            },
            RunError::Topology(e) => match e {
                TopologyError::EmptyComplex => "empty-complex",
                TopologyError::NotFaceClosed => "not-face-closed",
                TopologyError::TargetNotContained => "target-not-contained",
            },
            RunError::UnknownForm(_) => "unknown-form",
            RunError::UnknownDelta(_) => "unknown-delta",
            RunError::AmbiguousDelta(_) => "ambiguous-delta",
            RunError::ZeroRamification => "zero-ramification",
            RunError::BadCollapseTarget => "bad-collapse-target",
        }
    }

    /// 2 for unreadable input, 1 for everything the input makes impossible.
    pub fn exit_code(&self) -> i32 {
        match self {
            RunError::Document(
                DocumentError::Io { .. }
                | DocumentError::Syntax { .. }
                | DocumentError::SchemaVersion(_),
            )
            | RunError::Corpus(_) => 2,
            _ => 1,
        }
    }
}

fn cells_json(k: &DualComplex, sub: &Subcomplex) -> Value {
    Value::Array(
        sub.iter()
            .map(|c| {
                let cell = k.cell(c);
                json!({
                    "id": cell.stratum.as_str(),
                    "dimension": cell.dimension(),
                    "components": cell.components.iter().map(|x| x.as_str()).collect::<Vec<_>>(),
                })
            })
            .collect(),
    )
}

fn chain_json(k: &DualComplex, chain: &[CellId]) -> Value {
    json!(chain.iter().map(|&c| k.cell(c).stratum.as_str()).collect::<Vec<_>>())
}

fn counts(k: &DualComplex, sub: &Subcomplex) -> Vec<usize> {
    let top = sub.max_dimension(k).map_or(0, |d| d + 1);
    (0..top)
        .map(|d| sub.iter().filter(|&c| k.cell(c).dimension() == d).count())
        .collect()
}

fn pick_delta<'a>(
    doc: &'a ModelDocument,
    name: &Option<String>,
) -> Result<(&'a str, &'a DeltaAssignment), RunError> {
    match name {
        Some(n) => doc
            .deltas
            .get_key_value(n)
            .map(|(k, v)| (k.as_str(), v))
            .ok_or_else(|| RunError::UnknownDelta(n.clone())),
        None if doc.deltas.len() == 1 => {
            let (k, v) = doc.deltas.iter().next().unwrap();
            Ok((k.as_str(), v))
        }
        None => Err(RunError::AmbiguousDelta(doc.deltas.len())),
    }
}

fn select(doc: &ModelDocument, k: &DualComplex, of: &Subset) -> Result<Subcomplex, RunError> {
    Ok(match of {
        Subset::Full => Subcomplex::full(k),
        Subset::Essential => essential_skeleton(k, &doc.forms)?,
        Subset::Lc(name) => lc_subcomplex(k, pick_delta(doc, name)?.1)?,
    })
}

fn witness_json(k: &DualComplex, w: &Witness) -> Value {
    match w {
        Witness::NonHomogeneous { simplex } => {
            json!({"kind": w.kind(), "simplex": chain_json(k, simplex)})
        }
        Witness::Branching { simplex, incidence } => json!({
            "kind": w.kind(),
            "simplex": chain_json(k, simplex),
            "incidence": incidence,
        }),
        Witness::Disconnected { first, second } => json!({
            "kind": w.kind(),
            "first": chain_json(k, first),
            "second": chain_json(k, second),
        }),
    }
}

/// Runs `command` on `doc`.
pub fn run(command: &Command, doc: &ModelDocument) -> Result<Report, RunError> {
    let mut report = Report {
        command: command.echo(),
        input_digest: doc.digest(),
        result: Value::Null,
        domain_failure: false,
    };

    if let Command::Validate = command {
        let fiber_report = validate_fiber(&doc.fiber);
        let mut violations: Vec<Value> = fiber_report
            .violations
            .iter()
            .map(|v| {
                json!({
                    "kind": v.kind(),
                    "stratum": v.stratum().map(|s| s.as_str()),
                    "message": v.to_string(),
                })
            })
            .collect();
        if fiber_report.is_valid() {
            if let Err(e) = doc.check() {
                violations.push(json!({"kind": e.code(), "stratum": null, "message": e.to_string()}));
            }
        }
        report.domain_failure = !violations.is_empty();
        report.result = json!({
            "valid": violations.is_empty(),
            "components": doc.fiber.components.len(),
            "strata": doc.fiber.strata.len(),
            "forms": doc.forms.len(),
            "violations": violations,
        });
        return Ok(report);
    }

    doc.check()?;
    let k = build_dual_complex(&doc.fiber)?;

    report.result = match command {
        Command::Validate => unreachable!(),
        Command::DualComplex => {
            let full = Subcomplex::full(&k);
            let cells: Vec<Value> = k
                .cell_ids()
                .map(|c| {
                    let cell = k.cell(c);
                    json!({
                        "id": cell.stratum.as_str(),
                        "dimension": cell.dimension(),
                        "components": cell.components.iter().map(|x| x.as_str()).collect::<Vec<_>>(),
                        "multiplicities": cell.multiplicities,
                        "faces": chain_json(&k, &cell.facets),
                    })
                })
                .collect();
            json!({
                "max_dimension": k.max_dimension(),
                "cell_counts": counts(&k, &full),
                "euler_characteristic": k.euler_characteristic(&full),
                "cells": cells,
            })
        }
        Command::Weights => {
            let mut forms = Vec::new();
            for form in &doc.forms {
                let r = minimality_locus(&k, form)?;
                let weights: serde_json::Map<String, Value> = skeleta::weight::vertex_weights(&k, form)?
                    .into_iter()
                    .map(|(c, w)| (c.0, Value::String(format_rational(&w))))
                    .collect();
                forms.push(json!({
                    "name": form.name,
                    "degree": form.degree,
                    "minimum": format_rational(&r.minimum),
                    "vertex_weights": weights,
                }));
            }
            json!({ "forms": forms })
        }
        Command::KsSkeleton { form } => {
            let f = doc
                .form(form)
                .ok_or_else(|| RunError::UnknownForm(form.clone()))?;
            let r = minimality_locus(&k, f)?;
            json!({
                "form": f.name,
                "minimum": format_rational(&r.minimum),
                "cell_counts": counts(&k, &r.locus),
                "cells": cells_json(&k, &r.locus),
            })
        }
        Command::Essential => {
            let sk = essential_skeleton(&k, &doc.forms)?;
            let mut minima = serde_json::Map::new();
            for f in &doc.forms {
                minima.insert(
                    f.name.clone(),
                    format_rational(&minimality_locus(&k, f)?.minimum).into(),
                );
            }
            json!({
                "minima": minima,
                "cell_counts": counts(&k, &sk),
                "cells": cells_json(&k, &sk),
            })
        }
        Command::LcSkeleton { delta } => {
            let (name, d) = pick_delta(doc, delta)?;
            let sub = lc_subcomplex(&k, d)?;
            json!({
                "delta": name,
                "cell_counts": counts(&k, &sub),
                "cells": cells_json(&k, &sub),
            })
        }
        Command::Classify { of } => {
            let sub = select(doc, &k, of)?;
            let r = classify_pseudo_manifold(&k, &sub)?;
            json!({
                "of": of.label(),
                "dimension": r.dimension,
                "classification": r.classification.as_str(),
                "witnesses": r.witnesses.iter().map(|w| witness_json(&k, w)).collect::<Vec<_>>(),
                "boundary": r.boundary.iter().map(|b| chain_json(&k, b)).collect::<Vec<_>>(),
            })
        }
        Command::Homology { of } => {
            let sub = select(doc, &k, of)?;
            let b = betti_numbers(&k, &sub)?;
            json!({
                "of": of.label(),
                "betti": b.betti,
                "euler_characteristic": b.euler_characteristic(),
            })
        }
        Command::SphereCheck { of, n } => {
            let sub = select(doc, &k, of)?;
            let b = betti_numbers(&k, &sub)?;
            let n = n.unwrap_or_else(|| sub.max_dimension(&k).unwrap_or(0));
            json!({
                "of": of.label(),
                "n": n,
                "betti": b.betti,
                "q_homology_sphere": is_q_homology_sphere(&b, n),
            })
        }
        Command::Collapse { target, budget } => {
            if *target == Subset::Full {
                return Err(RunError::BadCollapseTarget);
            }
            let t = select(doc, &k, target)?;
            let outcome = find_collapse_sequence(&k, &t, CollapseSearch { budget: *budget })?;
            match outcome {
                CollapseOutcome::Found(seq) => {
                    let verdict = verify_collapse_sequence(&k, &t, &seq);
                    let full = Subcomplex::full(&k);
                    let before = betti_numbers(&k, &full)?;
                    let after = if t.is_empty() { None } else { Some(betti_numbers(&k, &t)?) };
                    let steps: Vec<Value> = seq
                        .steps
                        .iter()
                        .map(|s| {
                            json!({
                                "free_face": k.cell(s.free_face).stratum.as_str(),
                                "coface": k.cell(s.coface).stratum.as_str(),
                            })
                        })
                        .collect();
                    json!({
                        "target": target.label(),
                        "found": true,
                        "verified": verdict.valid,
                        "steps": steps,
                        "betti_before": before.betti,
                        "betti_after": after.map(|b| b.betti),
                    })
                }
                CollapseOutcome::NotFound {
                    explored,
                    budget_exhausted,
                } => json!({
                    "target": target.label(),
                    "found": false,
                    "explored": explored,
                    "budget_exhausted": budget_exhausted,
                    "note": "bounded search failed; this does not prove the complex is not collapsible",
                }),
            }
        }
        Command::Blowup { center } => {
            let out = blowup_surface_model(&doc.fiber, &doc.forms, center)?;
            let mut new_doc = ModelDocument::new(out.fiber, out.forms);
            new_doc.metadata = doc.metadata.clone();
            let carrier: serde_json::Map<String, Value> = out
                .carrier
                .into_iter()
                .map(|(a, b)| (a.0, Value::String(b.0)))
                .collect();
            json!({
                "exceptional": out.exceptional.as_str(),
                "carrier": carrier,
                "document": new_doc.to_value(),
            })
        }
        Command::Rescale { d, value } => {
            if *d == 0 {
                return Err(RunError::ZeroRamification);
            }
            match value {
                Some(v) => json!({
                    "d": d,
                    "value": format_rational(v),
                    "rescaled": format_rational(&rescale_weight(v, *d)),
                }),
                None => {
                    let mut forms = Vec::new();
                    for f in &doc.forms {
                        let min = minimality_locus(&k, f)?.minimum;
                        forms.push(json!({
                            "name": f.name,
                            "minimum": format_rational(&min),
                            "rescaled_minimum": format_rational(&rescale_weight(&min, *d)),
                        }));
                    }
                    json!({ "d": d, "forms": forms })
                }
            }
        }
    };
    Ok(report)
}
