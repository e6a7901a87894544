//! Acceptance suite. Each criterion prints one PASS/FAIL line with its
//! wall-clock time against the allowed limit.
//!
//! Run with `cargo test -p skeleta-cli --test acceptance -- --nocapture`.

use std::collections::{BTreeMap, BTreeSet};
use std::time::{Duration, Instant};

use num_traits::{One, Zero};
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use skeleta::rational::{int, ratio};
use skeleta::{
    betti_numbers, blowup_surface_model, build_dual_complex, classify_pseudo_manifold,
    essential_skeleton, find_collapse_sequence, is_q_homology_sphere, lc_subcomplex,
    minimality_locus, random_fiber, rescale_weight, verify_collapse_sequence, BlowupCenter,
    Classification, CollapseSearch, ComponentId, DeltaAssignment, DualComplex,
    PluricanonicalForm, Rational, StratifiedFiber, StratumId, Subcomplex, WeightError,
};
use skeleta_cli::document::parse_model;
use skeleta_cli::{corpus, run, Command, ModelDocument, Subset};

type Outcome = Result<(), String>;
type Criterion = (&'static str, u64, fn() -> Outcome);

macro_rules! ensure {
    ($cond:expr, $($msg:tt)+) => {
        if !$cond {
            return Err(format!($($msg)+));
        }
    };
}

fn ok<T, E: std::fmt::Display>(r: Result<T, E>) -> Result<T, String> {
    r.map_err(|e| e.to_string())
}

const KODAIRA: &[&str] = &[
    "kodaira_In(n=2)",
    "kodaira_In(n=3)",
    "kodaira_In(n=5)",
    "kodaira_I0star",
    "kodaira_Instar(n=1)",
    "kodaira_Instar(n=2)",
    "kodaira_Instar(n=4)",
];

fn geometric_corpus() -> Vec<String> {
    let mut out: Vec<String> = KODAIRA.iter().map(|s| s.to_string()).collect();
    out.extend((2..=5).map(|k| format!("chain(k={k})")));
    out.push("pinched_torus".into());
    out
}

fn full_corpus() -> Vec<String> {
    let mut out = geometric_corpus();
    out.extend(geometric_corpus().iter().map(|s| format!("pendant_blowup_of({s})")));
    out.extend((0..4).map(|s| format!("random(seed={s}, size={})", 3 + s)));
    out
}

fn load(spec: &str) -> Result<(ModelDocument, DualComplex), String> {
    let doc = ok(corpus(spec))?;
    let k = ok(build_dual_complex(&doc.fiber))?;
    Ok((doc, k))
}

fn strata(k: &DualComplex, sub: &Subcomplex) -> BTreeSet<StratumId> {
    sub.strata(k).cloned().collect()
}

/// Vertex values `(a_j + m) / N_j` from the raw document data.
fn vertex_values(fiber: &StratifiedFiber, form: &PluricanonicalForm) -> BTreeMap<ComponentId, Rational> {
    fiber
        .components
        .iter()
        .map(|c| {
            let a = form.vertical_mults[&c.id] + form.degree as i64;
            (c.id.clone(), ratio(a, c.multiplicity as i64))
        })
        .collect()
}

/// The minimum and the cells where the weight at the barycenter equals it.
/// The barycenter of a cell with components J has w_j = 1/(|J| N_j), so its
/// weight is the mean of the vertex values; it equals the minimum exactly
/// when every vertex does.
fn oracle_locus(
    fiber: &StratifiedFiber,
    form: &PluricanonicalForm,
) -> (Rational, BTreeSet<StratumId>) {
    let values = vertex_values(fiber, form);
    let min = values.values().min().unwrap().clone();
    let locus = fiber
        .strata
        .iter()
        .filter(|s| {
            let total: Rational = s.components.iter().map(|c| values[c].clone()).sum();
            total / int(s.components.len() as i64) == min
        })
        .map(|s| s.id.clone())
        .collect();
    (min, locus)
}

fn criterion_1() -> Outcome {
    let (doc, k) = load("kodaira_In(n=2)")?;
    ensure!(k.cells_of_dimension(0).count() == 2, "vertex count");
    ensure!(k.cells_of_dimension(1).count() == 2, "edge count");
    ensure!(k.len() == 4, "extra cells");
    let ess = ok(essential_skeleton(&k, &doc.forms))?;
    ensure!(ess == Subcomplex::full(&k), "essential skeleton is not the whole complex");
    let r = ok(classify_pseudo_manifold(&k, &ess))?;
    ensure!(
        r.classification == Classification::ClosedPseudoManifold && r.dimension == 1,
        "classified as {:?} of dimension {}",
        r.classification,
        r.dimension
    );
    let b = ok(betti_numbers(&k, &ess))?;
    ensure!(b.betti == [1, 1], "betti {:?}", b.betti);
    ensure!(is_q_homology_sphere(&b, 1), "sphere check");
    Ok(())
}

fn criterion_2() -> Outcome {
    for n in 2..=10 {
        let (doc, k) = load(&format!("chain(k={n})"))?;
        let ess = ok(essential_skeleton(&k, &doc.forms))?;
        ensure!(ess == Subcomplex::full(&k), "k={n}: skeleton is not the chain");
        ensure!(ess.max_dimension(&k) == Some(1), "k={n}: dimension");
        let r = ok(classify_pseudo_manifold(&k, &ess))?;
        ensure!(r.classification == Classification::PseudoManifoldWithBoundary, "k={n}: {:?}", r.classification);
        ensure!(r.boundary.len() == 2, "k={n}: {} boundary simplices", r.boundary.len());
        ensure!(r.boundary.iter().all(|s| s.len() == 1), "k={n}: boundary is not vertices");
        let b = ok(betti_numbers(&k, &ess))?;
        ensure!(b.betti == [1, 0], "k={n}: betti {:?}", b.betti);
    }
    Ok(())
}

fn criterion_3() -> Outcome {
    let (doc, k) = load("kodaira_I0star")?;
    let form = &doc.forms[0];
    let (oracle_min, oracle_cells) = oracle_locus(&doc.fiber, form);
    let r = ok(minimality_locus(&k, form))?;
    ensure!(r.minimum == ratio(1, 2), "λ = {}", r.minimum);
    ensure!(r.minimum == oracle_min, "oracle minimum {oracle_min}");
    let ess = ok(essential_skeleton(&k, &doc.forms))?;
    ensure!(strata(&k, &ess) == oracle_cells, "locus differs from oracle");
    ensure!(ess.len() == 1 && ess.max_dimension(&k) == Some(0), "not a single vertex");
    let center = doc.fiber.components.iter().find(|c| c.multiplicity == 2).unwrap();
    ensure!(ess.contains(k.vertex_cell(&center.id).unwrap()), "vertex is not the central component");
    Ok(())
}

fn criterion_4() -> Outcome {
    let mut rng = ChaCha8Rng::seed_from_u64(4);
    for trial in 0..500 {
        let size = rng.gen_range(1..=6);
        let fiber = random_fiber(rng.gen(), size, 4);
        let k = ok(build_dual_complex(&fiber))?;
        let m = rng.gen_range(1..=3);
        let mults: BTreeMap<ComponentId, i64> = fiber
            .components
            .iter()
            .map(|c| (c.id.clone(), rng.gen_range(-5..=5)))
            .collect();
        let form = PluricanonicalForm::new("f", m, mults);
        let (min, cells) = oracle_locus(&fiber, &form);
        let r = ok(minimality_locus(&k, &form))?;
        ensure!(r.minimum == min, "trial {trial}: minimum {} vs {min}", r.minimum);
        ensure!(strata(&k, &r.locus) == cells, "trial {trial}: locus differs");
    }
    Ok(())
}

fn criterion_5() -> Outcome {
    for spec in KODAIRA {
        let (doc, k) = load(spec)?;
        let form = &doc.forms[0];
        let before = ok(minimality_locus(&k, form))?;
        let old = strata(&k, &before.locus);
        let values = vertex_values(&doc.fiber, form);
        let mut centers: Vec<BlowupCenter> = doc
            .fiber
            .components
            .iter()
            .map(|c| BlowupCenter::Interior(c.id.clone()))
            .collect();
        centers.extend(
            doc.fiber
                .strata
                .iter()
                .filter(|s| s.components.len() == 2)
                .map(|s| BlowupCenter::PointStratum(s.id.clone())),
        );
        for center in centers {
            let b = ok(blowup_surface_model(&doc.fiber, &doc.forms, &center))?;
            let k2 = ok(build_dual_complex(&b.fiber))?;
            let after = ok(minimality_locus(&k2, &b.forms[0]))?;
            ensure!(after.minimum == before.minimum, "{spec} {center:?}: λ changed");
            let image: BTreeSet<StratumId> =
                after.locus.strata(&k2).map(|s| b.carrier[s].clone()).collect();
            ensure!(image == old, "{spec} {center:?}: locus does not map onto the original");
            if let BlowupCenter::PointStratum(e) = &center {
                let edge = doc.fiber.strata.iter().find(|s| &s.id == e).unwrap();
                let (num, den) = edge.components.iter().fold(
                    (Rational::zero(), Rational::zero()),
                    |(num, den), c| {
                        let n = int(doc.fiber.component(c).unwrap().multiplicity as i64);
                        (num + &n * &values[c], den + n)
                    },
                );
                let new_values = vertex_values(&b.fiber, &b.forms[0]);
                ensure!(
                    new_values[&b.exceptional] == num / den,
                    "{spec} {center:?}: exceptional value is not the weighted average"
                );
            }
        }
    }
    Ok(())
}

fn criterion_6() -> Outcome {
    for base in geometric_corpus() {
        let spec = format!("pendant_blowup_of({base})");
        let (doc, k) = load(&spec)?;
        let ess = ok(essential_skeleton(&k, &doc.forms))?;
        let outcome = ok(find_collapse_sequence(&k, &ess, CollapseSearch::default()))?;
        let seq = outcome.sequence().ok_or_else(|| format!("{spec}: no collapse found"))?;
        ensure!(!seq.steps.is_empty(), "{spec}: pendant was not collapsed");
        let verdict = verify_collapse_sequence(&k, &ess, seq);
        ensure!(verdict.valid, "{spec}: verification failed: {:?}", verdict.reason);
        let before = ok(betti_numbers(&k, &Subcomplex::full(&k)))?;
        let after = ok(betti_numbers(&k, &ess))?;
        ensure!(before == after, "{spec}: betti {:?} vs {:?}", before.betti, after.betti);
    }
    Ok(())
}

fn criterion_7() -> Outcome {
    let mut rng = ChaCha8Rng::seed_from_u64(7);
    let not_one = |rng: &mut ChaCha8Rng| loop {
        let q = ratio(rng.gen_range(-6..=6), rng.gen_range(1..=6));
        if q < Rational::one() {
            return q;
        }
    };
    for spec in full_corpus() {
        let (_, k) = load(&spec)?;
        let comps: Vec<ComponentId> = k.components().iter().map(|c| c.id.clone()).collect();
        for trial in 0..200 {
            let places: BTreeSet<&ComponentId> = comps.iter().filter(|_| rng.gen_bool(0.6)).collect();
            let assign = |rng: &mut ChaCha8Rng| DeltaAssignment {
                mults: comps
                    .iter()
                    .map(|c| {
                        let v = if places.contains(c) { Rational::one() } else { not_one(rng) };
                        (c.clone(), v)
                    })
                    .collect(),
            };
            let first = assign(&mut rng);
            let second = assign(&mut rng);
            let a = ok(lc_subcomplex(&k, &first))?;
            let b = ok(lc_subcomplex(&k, &second))?;
            ensure!(a == b, "{spec} trial {trial}: output depends on non-lc values");
            let expected: BTreeSet<StratumId> = k
                .cells()
                .iter()
                .filter(|c| c.components.iter().all(|j| places.contains(j)))
                .map(|c| c.stratum.clone())
                .collect();
            ensure!(strata(&k, &a) == expected, "{spec} trial {trial}: wrong cells");

            let mut bad = first.clone();
            let j = &comps[rng.gen_range(0..comps.len())];
            bad.mults.insert(j.clone(), Rational::one() + ratio(1, rng.gen_range(1..=9)));
            match lc_subcomplex(&k, &bad) {
                Err(WeightError::DltViolation { .. }) => {}
                other => return Err(format!("{spec} trial {trial}: δ > 1 gave {other:?}")),
            }
        }
    }
    Ok(())
}

fn criterion_8() -> Outcome {
    for d in 1..=100u64 {
        ensure!(rescale_weight(&Rational::one(), d).is_one(), "d={d}: 1 is not fixed");
    }
    let mut rng = ChaCha8Rng::seed_from_u64(8);
    for _ in 0..500 {
        let d = rng.gen_range(1..=100);
        let x = ratio(rng.gen_range(-50..=50), rng.gen_range(1..=12));
        let at0 = rescale_weight(&Rational::zero(), d);
        let at1 = rescale_weight(&Rational::one(), d);
        let expected = &at0 + &x * (&at1 - &at0);
        ensure!(rescale_weight(&x, d) == expected, "d={d}, x={x}: not affine");
        ensure!(rescale_weight(&x, d) == int(d as i64) * (&x - Rational::one()) + Rational::one(), "d={d}, x={x}");
    }
    Ok(())
}

fn criterion_9() -> Outcome {
    for spec in full_corpus() {
        let (doc, k) = load(&spec)?;
        let form = &doc.forms[0];
        let base = ok(minimality_locus(&k, form))?;
        for d in 1..=3u64 {
            for c in -2..=2i64 {
                let g = form.power(d).twist(c, k.components());
                let r = ok(minimality_locus(&k, &g))?;
                ensure!(r.locus == base.locus, "{spec} d={d} c={c}: locus changed");
                let expected = int(d as i64) * &base.minimum + int(c);
                ensure!(r.minimum == expected, "{spec} d={d} c={c}: λ = {} not {expected}", r.minimum);
                let ess = ok(essential_skeleton(&k, &[g]))?;
                ensure!(ess == base.locus, "{spec} d={d} c={c}: essential skeleton changed");
            }
        }
    }
    Ok(())
}

fn criterion_10() -> Outcome {
    let commands = [
        Command::Validate,
        Command::DualComplex,
        Command::Weights,
        Command::Essential,
        Command::Classify { of: Subset::Essential },
        Command::Homology { of: Subset::Full },
        Command::SphereCheck { of: Subset::Essential, n: None },
        Command::Collapse { target: Subset::Essential, budget: 100_000 },
        Command::Rescale { d: 3, value: None },
    ];
    for spec in full_corpus() {
        let doc = ok(corpus(&spec))?;
        let text = doc.to_json();
        let back = ok(parse_model(text.as_bytes()))?;
        ensure!(back == doc, "{spec}: parse∘serialize is not the identity");
        ensure!(back.to_json() == text, "{spec}: serialization is not canonical");
        for c in &commands {
            let a = ok(run(c, &doc))?.to_json();
            let b = ok(run(c, &ok(corpus(&spec))?))?.to_json();
            let again = ok(run(c, &back))?.to_json();
            ensure!(a == b && b == again, "{spec}: `{}` is not deterministic", c.echo());
        }
    }
    Ok(())
}

#[test]
fn acceptance() {
    let criteria: [Criterion; 10] = [
        ("1  I_2 circle reproduction", 1, criterion_1),
        ("2  chain skeleta are intervals", 1, criterion_2),
        ("3  I_0* contracts to the central vertex", 1, criterion_3),
        ("4  minimality locus matches the oracle (500 fibers)", 30, criterion_4),
        ("5  blow-ups preserve the skeleton", 5, criterion_5),
        ("6  pendant blow-ups collapse onto the skeleton", 5, criterion_6),
        ("7  lc skeleton depends only on places with delta = 1", 5, criterion_7),
        ("8  base-change rescaling fixes 1 and is affine", 1, criterion_8),
        ("9  powers and twists keep the essential skeleton", 5, criterion_9),
        ("10 determinism and round-trip", 5, criterion_10),
    ];
    let mut failures = Vec::new();
    for (name, limit, check) in criteria {
        let limit = Duration::from_secs(limit);
        let start = Instant::now();
        let outcome = check();
        let elapsed = start.elapsed();
        let verdict = match (&outcome, elapsed <= limit) {
            (Ok(()), true) => "PASS".to_string(),
            (Ok(()), false) => format!("FAIL (over time limit of {limit:?})"),
            (Err(e), _) => format!("FAIL ({e})"),
        };
        println!("criterion {name}: {verdict} [{elapsed:.2?} / {limit:?}]");
        if !verdict.starts_with("PASS") {
            failures.push(name);
        }
    }
    assert!(failures.is_empty(), "failed: {failures:?}");
}
