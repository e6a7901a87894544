//! Built-in degenerations.
//!
//! Entries are written `name` or `name(key=value, ...)`; `pendant_blowup_of`
//! takes another entry as its argument. Every entry also accepts
//! `degree=m` (default 1) and `twist=c`, which sets `a_j = c·N_j`
//! (default 0).

use std::collections::BTreeMap;
use std::fmt;

use skeleta::{
    blowup_surface_model, random_fiber, BlowupCenter, Component, PluricanonicalForm,
    StratifiedFiber, Stratum,
};
use thiserror::Error;

use crate::document::ModelDocument;

#[derive(Debug, Clone, PartialEq, Eq)]
pub enum CorpusSpec {
    /// `n` reduced components in a cycle.
    KodairaIn { n: usize },
    /// A double component with four reduced tails.
    KodairaI0Star,
    /// A chain of `n + 1` double components with two reduced tails at each end.
    KodairaInStar { n: usize },
    /// `k` reduced components in a row.
    Chain { k: usize },
    /// Octahedron with its two poles identified.
    PinchedTorus,
    /// The base entry blown up at a general point of its first component.
    PendantBlowupOf(Box<CorpusSpec>),
    Random { seed: u64, size: usize },
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct CorpusRequest {
    pub spec: CorpusSpec,
    pub degree: u64,
    pub twist: i64,
}

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum CorpusError {
    #[error("unknown corpus entry `{0}`")]
    UnknownName(String),
    #[error("invalid parameters for `{name}`: {reason}")]
    InvalidParams { name: String, reason: String },
    #[error("cannot parse corpus spec `{0}`")]
    Syntax(String),
}

impl CorpusError {
    pub fn code(&self) -> &'static str {
        match self {
            CorpusError::UnknownName(_) => "unknown-corpus",
            CorpusError::InvalidParams { .. } => "invalid-params",
            CorpusError::Syntax(_) => "corpus-syntax",
        }
    }
}

impl fmt::Display for CorpusSpec {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            CorpusSpec::KodairaIn { n } => write!(f, "kodaira_In(n={n})"),
            CorpusSpec::KodairaI0Star => write!(f, "kodaira_I0star"),
            CorpusSpec::KodairaInStar { n } => write!(f, "kodaira_Instar(n={n})"),
            CorpusSpec::Chain { k } => write!(f, "chain(k={k})"),
            CorpusSpec::PinchedTorus => write!(f, "pinched_torus"),
            CorpusSpec::PendantBlowupOf(base) => write!(f, "pendant_blowup_of({base})"),
            CorpusSpec::Random { seed, size } => write!(f, "random(seed={seed},size={size})"),
        }
    }
}

impl fmt::Display for CorpusRequest {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}", self.spec)?;
        if self.degree != 1 || self.twist != 0 {
            write!(f, "[degree={},twist={}]", self.degree, self.twist)?;
        }
        Ok(())
    }
}

/// Splits `a=1, b(c=2), d` at top-level commas.
fn split_args(s: &str) -> Vec<&str> {
    let mut out = Vec::new();
    let (mut depth, mut start) = (0i32, 0);
    for (i, ch) in s.char_indices() {
        match ch {
            '(' => depth += 1,
            ')' => depth -= 1,
            ',' if depth == 0 => {
                out.push(s[start..i].trim());
                start = i + 1;
            }
            _ => {}
        }
    }
    if !s[start..].trim().is_empty() {
        out.push(s[start..].trim());
    }
    out
}

fn parse_num<T: std::str::FromStr>(name: &str, key: &str, v: &str) -> Result<T, CorpusError> {
    v.parse().map_err(|_| CorpusError::InvalidParams {
        name: name.to_string(),
        reason: format!("`{key}` must be an integer, got `{v}`"),
    })
}

impl CorpusRequest {
    pub fn parse(text: &str) -> Result<Self, CorpusError> {
        let text = text.trim();
        let (name, args) = match text.find('(') {
            Some(i) if text.ends_with(')') => (&text[..i], &text[i + 1..text.len() - 1]),
            Some(_) => return Err(CorpusError::Syntax(text.to_string())),
            None => (text, ""),
        };
        let name = name.trim();
        let mut params: BTreeMap<&str, &str> = BTreeMap::new();
        let mut positional: Vec<&str> = Vec::new();
        for arg in split_args(args) {
            match arg.split_once('=') {
                Some((k, v)) if !k.contains('(') => {
                    params.insert(k.trim(), v.trim());
                }
                _ => positional.push(arg),
            }
        }
        let invalid = |reason: String| CorpusError::InvalidParams {
            name: name.to_string(),
            reason,
        };
        let mut take = |key: &str| params.remove(key);

        let degree = take("degree").map_or(Ok(1), |v| parse_num(name, "degree", v))?;
        let twist = take("twist").map_or(Ok(0), |v| parse_num(name, "twist", v))?;
        if degree == 0 {
            return Err(invalid("degree must be at least 1".into()));
        }
        let need = |v: Option<&str>, key: &str| -> Result<usize, CorpusError> {
            let v = v.ok_or_else(|| invalid(format!("missing `{key}`")))?;
            parse_num(name, key, v)
        };

        let spec = match name {
            "kodaira_In" => {
                let n = need(take("n").or(positional.pop()), "n")?;
                if n < 2 {
                    return Err(invalid(
                        "n must be at least 2; I_1 has a self-intersecting component".into(),
                    ));
                }
                CorpusSpec::KodairaIn { n }
            }
            "kodaira_I0star" => CorpusSpec::KodairaI0Star,
            "kodaira_Instar" => {
                let n = need(take("n").or(positional.pop()), "n")?;
                if n < 1 {
                    return Err(invalid("n must be at least 1; use kodaira_I0star for n = 0".into()));
                }
                CorpusSpec::KodairaInStar { n }
            }
            "chain" => {
                let k = need(take("k").or(positional.pop()), "k")?;
                if k < 2 {
                    return Err(invalid("k must be at least 2".into()));
                }
                CorpusSpec::Chain { k }
            }
            "pinched_torus" => CorpusSpec::PinchedTorus,
            "pendant_blowup_of" => {
                let base = take("base")
                    .or(positional.pop())
                    .ok_or_else(|| invalid("missing base entry".into()))?;
                let base = CorpusRequest::parse(base)?;
                if base.degree != 1 || base.twist != 0 {
                    return Err(invalid("put degree/twist on the outer entry".into()));
                }
                CorpusSpec::PendantBlowupOf(Box::new(base.spec))
            }
            "random" => {
                let seed = take("seed").map_or(Ok(0), |v| parse_num(name, "seed", v))?;
                let size = need(take("size"), "size")?;
                if size == 0 || size > 12 {
                    return Err(invalid("size must be between 1 and 12".into()));
                }
                CorpusSpec::Random { seed, size }
            }
            other => return Err(CorpusError::UnknownName(other.to_string())),
        };
        if let Some(k) = params.keys().next() {
            return Err(invalid(format!("unexpected parameter `{k}`")));
        }
        if !positional.is_empty() {
            return Err(invalid(format!("unexpected argument `{}`", positional[0])));
        }
        Ok(CorpusRequest {
            spec,
            degree,
            twist,
        })
    }
}

fn edge(id: String, a: &str, b: &str) -> Stratum {
    Stratum::new(id, [a, b], [(a, b), (b, a)])
}

fn with_vertices(components: Vec<Component>) -> StratifiedFiber {
    let strata = components
        .iter()
        .map(|c| Stratum::vertex(c.id.0.clone(), c.id.clone()))
        .collect();
    StratifiedFiber { components, strata }
}

fn kodaira_in(n: usize) -> StratifiedFiber {
    let ids: Vec<String> = (0..n).map(|i| format!("C{i}")).collect();
    let mut f = with_vertices(ids.iter().map(|c| Component::new(c.as_str(), 1)).collect());
    for i in 0..n {
        f.strata
            .push(edge(format!("e{i}"), &ids[i], &ids[(i + 1) % n]));
    }
    f
}

fn chain(k: usize) -> StratifiedFiber {
    let ids: Vec<String> = (0..k).map(|i| format!("C{i}")).collect();
    let mut f = with_vertices(ids.iter().map(|c| Component::new(c.as_str(), 1)).collect());
    for i in 0..k - 1 {
        f.strata.push(edge(format!("e{i}"), &ids[i], &ids[i + 1]));
    }
    f
}

/// Central chain `C0..Cn` of double components, tails `T1, T2` on `C0` and
/// `T3, T4` on `Cn`. For `n = 0` all four tails meet `C0`.
fn kodaira_instar(n: usize) -> StratifiedFiber {
    let central: Vec<String> = (0..=n).map(|i| format!("C{i}")).collect();
    let tails = ["T1", "T2", "T3", "T4"];
    let mut comps: Vec<Component> = central.iter().map(|c| Component::new(c.as_str(), 2)).collect();
    comps.extend(tails.iter().map(|t| Component::new(*t, 1)));
    let mut f = with_vertices(comps);
    for i in 0..n {
        f.strata
            .push(edge(format!("c{i}"), &central[i], &central[i + 1]));
    }
    for (i, t) in tails.iter().enumerate() {
        let host = if i < 2 { &central[0] } else { &central[n] };
        f.strata.push(edge(format!("t{}", i + 1), host, t));
    }
    f
}

fn pinched_torus() -> StratifiedFiber {
    let eq = ["Q1", "Q2", "Q3", "Q4"];
    let mut comps = vec![Component::new("P", 1)];
    comps.extend(eq.iter().map(|q| Component::new(*q, 1)));
    let mut f = with_vertices(comps);
    for i in 0..4 {
        let (a, b) = (eq[i], eq[(i + 1) % 4]);
        let (lo, hi) = if a < b { (a, b) } else { (b, a) };
        f.strata.push(edge(format!("{lo}{hi}"), lo, hi));
    }
    for hemi in ["n", "s"] {
        for q in eq {
            f.strata.push(edge(format!("{hemi}P{q}"), "P", q));
        }
        for i in 0..4 {
            let (a, b) = (eq[i], eq[(i + 1) % 4]);
            let (lo, hi) = if a < b { (a, b) } else { (b, a) };
            f.strata.push(Stratum::new(
                format!("{hemi}{i}"),
                ["P", lo, hi],
                [
                    ("P", format!("{lo}{hi}")),
                    (lo, format!("{hemi}P{hi}")),
                    (hi, format!("{hemi}P{lo}")),
                ],
            ));
        }
    }
    f
}

fn build(spec: &CorpusSpec, degree: u64, twist: i64) -> Result<ModelDocument, CorpusError> {
    let fiber = match spec {
        CorpusSpec::KodairaIn { n } => kodaira_in(*n),
        CorpusSpec::KodairaI0Star => kodaira_instar(0),
        CorpusSpec::KodairaInStar { n } => kodaira_instar(*n),
        CorpusSpec::Chain { k } => chain(*k),
        CorpusSpec::PinchedTorus => pinched_torus(),
        CorpusSpec::Random { seed, size } => random_fiber(*seed, *size, 3),
        CorpusSpec::PendantBlowupOf(base) => {
            let doc = build(base, degree, twist)?;
            let first = doc.fiber.components[0].id.clone();
            let out = blowup_surface_model(&doc.fiber, &doc.forms, &BlowupCenter::Interior(first))
                .map_err(|e| CorpusError::InvalidParams {
                    name: "pendant_blowup_of".into(),
                    reason: e.to_string(),
                })?;
            let mut doc = ModelDocument::new(out.fiber, out.forms);
            doc.metadata.insert("corpus".into(), spec.to_string().into());
            doc.metadata
                .insert("exceptional".into(), out.exceptional.0.clone().into());
            return Ok(doc);
        }
    };
    let form = PluricanonicalForm::new(
        "omega",
        degree,
        fiber
            .components
            .iter()
            .map(|c| (c.id.clone(), twist * c.multiplicity as i64)),
    );
    let mut doc = ModelDocument::new(fiber, vec![form]);
    doc.metadata.insert("corpus".into(), spec.to_string().into());
    Ok(doc)
}

/// Builds the document for a corpus entry given as text, e.g. `chain(k=3)`.
pub fn corpus(text: &str) -> Result<ModelDocument, CorpusError> {
    let req = CorpusRequest::parse(text)?;
    corpus_from(&req)
}

pub fn corpus_from(req: &CorpusRequest) -> Result<ModelDocument, CorpusError> {
    let mut doc = build(&req.spec, req.degree, req.twist)?;
    doc.metadata.insert("corpus".into(), req.to_string().into());
    Ok(doc)
}
