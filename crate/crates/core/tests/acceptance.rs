//! Acceptance run: one line per criterion, non-zero exit if any fails.
//! Built with `harness = false`, so `cargo test --test acceptance` runs
//! `main` directly.

mod common;

use common::*;
use dgk_core::constructions::{
    affine_delta, canonical_embedding, factorized_delta, ring_unit_delta, s3_fixture, x3_delta,
};
use dgk_core::delta::{
    check_iki_kik, find_isomorphism, is_delta_morphism, trivial_delta, validate_delta, DeltaGroupoid, IsoSearch,
};
use dgk_core::finite_ring::{default_corpus, zmod};
use dgk_core::groupoid::{cyclic_group, pair_groupoid};
use dgk_core::homs::{count_ring_homs, hom_signature, HomBudget};
use dgk_core::presented::{
    check_certificate, check_certificate_pair, named_presentation, simplify, universal_property_check, universal_ring,
    CertificatePair, NamedPresentation, PresentedRing, Step,
};
use dgk_core::topo::{
    delta_independence_check, functor_g, same_component_relabelings, simply_connected_model, validate_topp_model,
    ToppModel,
};
use dgk_core::Error;
use num_bigint::BigInt;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use std::collections::BTreeMap;
use std::panic::{catch_unwind, AssertUnwindSafe};
use std::time::{Duration, Instant};

type Check = std::result::Result<String, String>;
type Criterion = fn() -> Check;

fn ensure(cond: bool, msg: impl FnOnce() -> String) -> std::result::Result<(), String> {
    if cond {
        Ok(())
    } else {
        Err(msg())
    }
}

fn within(t: Duration, limit_secs: u64) -> std::result::Result<(), String> {
    ensure(t.as_secs_f64() < limit_secs as f64, || format!("took {:.1}s, limit {limit_secs}s", t.as_secs_f64()))
}

fn named(s: &str) -> PresentedRing {
    named_presentation(&NamedPresentation::parse(s).unwrap()).unwrap()
}

fn axiom_suite() -> Vec<(String, DeltaGroupoid)> {
    let mut out = Vec::new();
    for n in 1..=5 {
        out.push((format!("x3({n})"), x3_delta(n)));
    }
    for n in 2..=13 {
        out.push((format!("units(zmod {n})"), ring_unit_delta(&zmod(n))));
    }
    for n in 2..=7 {
        out.push((format!("affine(zmod {n})"), affine_delta(&zmod(n))));
    }
    out.push(("S3 factorized".into(), factorized_delta(&s3_fixture()).unwrap()));
    for (name, g) in corpus_groupoids() {
        out.push((format!("trivial({name})"), trivial_delta(&g)));
    }
    out
}

fn criterion_1() -> Check {
    let start = Instant::now();
    let suite = axiom_suite();
    let mut pairs = 0;
    for (name, d) in &suite {
        let rep = validate_delta(d);
        ensure(rep.is_valid(), || format!("{name}: {}", rep.lines().join("; ")))?;
        ensure(delta_axioms_hold(d), || format!("{name}: oracle disagrees"))?;
        pairs += count_h_composable(d);
    }
    within(start.elapsed(), 10)?;
    Ok(format!("{} structures valid, {pairs} H-composable pairs, {:.2}s", suite.len(), start.elapsed().as_secs_f64()))
}

fn criterion_2() -> Check {
    let suite = axiom_suite();
    let mut mutations = 0;
    for (name, d) in &suite {
        ensure(check_iki_kik(d), || format!("{name}: iki ≠ kik"))?;
        let g = d.groupoid();
        let h: Vec<usize> = d.h().iter().copied().collect();
        let outside = (0..g.num_elements()).find(|x| !d.in_h(*x));
        for (pos, &x) in h.iter().enumerate() {
            let kx = d.k(x).unwrap();
            // Another element of h, and an element outside h.
            let other = (1..h.len()).map(|s| h[(pos + s) % h.len()]).find(|&y| y != kx);
            for y in other.into_iter().chain(outside) {
                let mut k = d.k_table().clone();
                k.insert(x, y);
                let bad = DeltaGroupoid::new(g.clone(), d.h().clone(), k);
                let rep = validate_delta(&bad);
                ensure(!rep.is_valid(), || {
                    format!("{name}: k({}) := {} not reported", g.element_id(x), g.element_id(y))
                })?;
                ensure(!delta_axioms_hold(&bad), || format!("{name}: oracle accepts a mutation"))?;
                mutations += 1;
            }
        }
    }
    Ok(format!("iki = kik on {} structures, {mutations} k-mutations all reported", suite.len()))
}

fn criterion_3() -> Check {
    let (mut corrupted, mut rejected) = (0, 0);
    for n in 2..=13 {
        let r = zmod(n);
        let (dom, cod) = (ring_unit_delta(&r), affine_delta(&r));
        let f = canonical_embedding(&r);
        ensure(is_delta_morphism(&dom, &cod, &f), || format!("zmod {n}: not a Δ-morphism"))?;
        ensure(is_delta_morphism_oracle(&dom, &cod, &f), || format!("zmod {n}: oracle disagrees"))?;
        // Every single-entry change of the map, judged by both checkers.
        let cod_size = cod.groupoid().num_elements();
        for x in 0..f.map.element_map.len() {
            for v in (0..cod_size).filter(|&v| v != f.map.element_map[x]) {
                let mut bad = f.clone();
                bad.map.element_map[x] = v;
                let lib = is_delta_morphism(&dom, &cod, &bad);
                ensure(lib == is_delta_morphism_oracle(&dom, &cod, &bad), || format!("zmod {n}: checkers disagree"))?;
                rejected += usize::from(!lib);
                corrupted += 1;
            }
        }
    }
    Ok(format!("x ↦ (x, 1 − x) is a Δ-morphism for zmod 2..13; {rejected} of {corrupted} corrupted maps rejected, in agreement with the oracle"))
}

fn criterion_4() -> Check {
    let start = Instant::now();
    let mut times = Vec::new();
    for n in 1..=4 {
        let t = Instant::now();
        let out = functor_g(&simply_connected_model(n)).map_err(|e| format!("n={n}: {e}"))?;
        ensure(out.report.passed(), || format!("n={n}: {}", out.report.lines().join("; ")))?;
        let target = x3_delta(n);
        let iso = find_isomorphism(&out.delta, &target, IsoSearch::default()).map_err(|e| e.to_string())?;
        let iso = iso.ok_or_else(|| format!("n={n}: not isomorphic to x3"))?;
        ensure(is_delta_morphism_oracle(&out.delta, &target, &iso), || format!("n={n}: iso fails the oracle"))?;
        times.push(format!("n={n} {:.2}s", t.elapsed().as_secs_f64()));
    }
    for (name, p) in [("pair3", pair_groupoid(&["a", "b", "c"])), ("C4", cyclic_group(4))] {
        let out = functor_g(&ToppModel::empty_subspace(p)).map_err(|e| e.to_string())?;
        ensure(out.delta.groupoid().num_objects() == 0 && out.report.passed(), || {
            format!("(X,∅) over {name} is not empty")
        })?;
    }
    let c4 = cyclic_group(4);
    let out = functor_g(&ToppModel::whole_space(c4.clone())).map_err(|e| e.to_string())?;
    let iso = find_isomorphism(&out.delta, &trivial_delta(&c4), IsoSearch::default()).map_err(|e| e.to_string())?;
    ensure(iso.is_some() && out.delta.h().is_empty(), || "(X,X) over C4 is not (C4, ∅)".into())?;
    within(start.elapsed(), 60)?;
    Ok(format!("g ≅ x3 for n=1..4 ({}), (X,∅) empty, (X,X) over C4 trivial", times.join(", ")))
}

fn criterion_5() -> Check {
    let mut rng = ChaCha8Rng::seed_from_u64(0x5eed);
    let (mut accepted, mut rejected, mut nonempty) = (0, 0, 0);
    let mut reasons: BTreeMap<String, usize> = BTreeMap::new();
    for i in 0..150 {
        let m = random_model(&mut rng);
        ensure(validate_topp_model(&m).is_valid(), || format!("model {i}: generator produced an invalid model"))?;
        match functor_g(&m) {
            Ok(out) => {
                ensure(out.report.delta.is_valid() && delta_axioms_hold(&out.delta), || {
                    format!("model {i}: accepted with invalid output: {}", out.report.lines().join("; "))
                })?;
                ensure(out.report.passed(), || format!("model {i}: {}", out.report.lines().join("; ")))?;
                accepted += 1;
                if !out.delta.h().is_empty() {
                    nonempty += 1;
                }
            }
            Err(Error::ModelRejected(msg)) => {
                let kind = msg.split_whitespace().next().unwrap_or("").to_string();
                ensure(!kind.is_empty() && msg.contains('['), || format!("model {i}: rejection cites nothing: {msg}"))?;
                *reasons.entry(kind).or_default() += 1;
                rejected += 1;
            }
            Err(e) => return Err(format!("model {i}: unexpected error {e}")),
        }
    }
    ensure(accepted >= 10 && nonempty >= 5, || format!("too few accepted models ({accepted}, {nonempty} with h ≠ ∅)"))?;
    let reasons: Vec<String> = reasons.iter().map(|(k, v)| format!("{k} {v}")).collect();
    Ok(format!(
        "150 models: {accepted} accepted with valid output ({nonempty} with h ≠ ∅), {rejected} rejected ({})",
        reasons.join(", ")
    ))
}

fn criterion_6() -> Check {
    let start = Instant::now();
    let corpus = default_corpus();
    let budget = HomBudget::default();
    let expected = [(1, "z"), (2, "zfree2"), (3, "localized-zfree4")];
    let mut sigs = Vec::new();
    for (n, name) in expected {
        let d = functor_g(&simply_connected_model(n)).map_err(|e| e.to_string())?.delta;
        let p = universal_ring(&d);
        let a = hom_signature(&p, &corpus, budget, 4).map_err(|e| e.to_string())?;
        let b = hom_signature(&named(name), &corpus, budget, 4).map_err(|e| e.to_string())?;
        ensure(a == b, || format!("n={n}: {a:?} vs {name} {b:?}"))?;
        sigs.push(format!("n={n} {a:?}"));
    }
    // The count 8 into zmod 3, by the search and by exhaustive assignment.
    let z3 = zmod(3);
    let loc = named("localized-zfree4");
    let d3 = functor_g(&simply_connected_model(3)).map_err(|e| e.to_string())?.delta;
    let r3 = universal_ring(&d3);
    let simplified = simplify(&r3).ring;
    let counts = [
        count_ring_homs(&r3, &z3, budget).map_err(|e| e.to_string())?,
        count_ring_homs(&loc, &z3, budget).map_err(|e| e.to_string())?,
        brute_force_hom_count(&loc, &z3, 1 << 22).ok_or("oracle refused")?,
        brute_force_hom_count(&simplified, &z3, 1 << 22).ok_or("oracle refused")?,
    ];
    ensure(counts.iter().all(|&c| c == 8), || format!("counts into zmod 3: {counts:?}"))?;
    within(start.elapsed(), 300)?;
    Ok(format!("{}; count into zmod 3 is 8 on both sides; {:.1}s", sigs.join("; "), start.elapsed().as_secs_f64()))
}

fn criterion_7() -> Check {
    let ds = [
        ("trivial(C2)", trivial_delta(&cyclic_group(2))),
        ("units(zmod 3)", ring_unit_delta(&zmod(3))),
        ("units(zmod 5)", ring_unit_delta(&zmod(5))),
        ("x3(3)", x3_delta(3)),
    ];
    let mut cells = Vec::new();
    for (name, d) in &ds {
        for n in [2, 3, 5] {
            let c = universal_property_check(d, &zmod(n), HomBudget::default()).map_err(|e| e.to_string())?;
            ensure(c.holds, || format!("{name} → zmod {n}: {c:?}"))?;
            cells.push(c.morphisms.to_string());
        }
    }
    Ok(format!("12 pairs hold; morphism counts {}", cells.join(",")))
}

/// Every trace in the pair, addressed so it can be mutated in place.
fn traces_mut(p: &mut CertificatePair) -> Vec<&mut Vec<Step>> {
    let mut out: Vec<&mut Vec<Step>> = Vec::new();
    for c in [&mut p.forward, &mut p.backward] {
        out.extend(c.traces.iter_mut());
        out.extend(c.lemmas.iter_mut().map(|l| &mut l.trace));
    }
    out.extend(p.round_trip_source.iter_mut());
    out.extend(p.round_trip_target.iter_mut());
    out
}

fn criterion_8() -> Check {
    let corpus = default_corpus();
    let budget = HomBudget::default();
    let mut inputs: Vec<(String, PresentedRing)> =
        delta_corpus().into_iter().map(|(name, d)| (name, universal_ring(&d))).collect();
    for name in ["z", "zero", "zfree2", "localized-zfree3"] {
        inputs.push((name.to_string(), named(name)));
    }
    let (mut certificates, mut mutations) = (0, 0);
    for (name, p) in &inputs {
        let s = simplify(p);
        let pair = &s.certificates;
        ensure(check_certificate(&pair.forward) && check_certificate(&pair.backward), || {
            format!("{name}: certificate fails")
        })?;
        ensure(check_certificate_pair(pair), || format!("{name}: round trip fails"))?;
        certificates += 2;
        let total: Vec<usize> = traces_mut(&mut pair.clone()).iter().map(|t| t.len()).collect();
        for (t, &len) in total.iter().enumerate() {
            for i in 0..len {
                for kind in 0..2 {
                    let mut bad = pair.clone();
                    let trace = traces_mut(&mut bad).swap_remove(t);
                    if kind == 0 {
                        trace.remove(i);
                    } else {
                        trace[i].coef += BigInt::from(1);
                    }
                    ensure(!check_certificate_pair(&bad), || {
                        format!("{name}: mutation {kind} of step {i} in trace {t} accepted")
                    })?;
                    mutations += 1;
                }
            }
        }
        let before = hom_signature(p, &corpus, budget, 4).map_err(|e| format!("{name}: {e}"))?;
        let after = hom_signature(&s.ring, &corpus, budget, 4).map_err(|e| format!("{name}: {e}"))?;
        ensure(before == after, || format!("{name}: signature {before:?} became {after:?}"))?;
    }
    Ok(format!(
        "{certificates} certificates over {} inputs check, {mutations} single-step mutations rejected, signatures preserved",
        inputs.len()
    ))
}

fn criterion_9() -> Check {
    let m = simply_connected_model(3);
    let relabelings = same_component_relabelings(3);
    for (i, r) in relabelings.iter().enumerate() {
        let same = delta_independence_check(&m, r, IsoSearch::default()).map_err(|e| format!("relabeling {i}: {e}"))?;
        ensure(same, || format!("relabeling {i}: outputs not isomorphic"))?;
    }
    Ok(format!("{} relabelings give isomorphic outputs", relabelings.len()))
}

fn main() {
    let criteria: [(u32, &str, Criterion); 9] = [
        (1, "axiom suite", criterion_1),
        (2, "iki = kik and k-mutations", criterion_2),
        (3, "canonical embeddings", criterion_3),
        (4, "functor end to end", criterion_4),
        (5, "random models", criterion_5),
        (6, "universal ring identifications", criterion_6),
        (7, "universal property", criterion_7),
        (8, "certificates", criterion_8),
        (9, "relabeling independence", criterion_9),
    ];
    let mut failed = 0;
    for (n, name, f) in criteria {
        let t = Instant::now();
        let result = catch_unwind(AssertUnwindSafe(f)).unwrap_or_else(|_| Err("panicked".into()));
        let secs = t.elapsed().as_secs_f64();
        match result {
            Ok(detail) => println!("criterion {n} ({name}): PASS [{secs:.2}s] {detail}"),
            Err(why) => {
                failed += 1;
                println!("criterion {n} ({name}): FAIL [{secs:.2}s] {why}");
            }
        }
    }
    println!("acceptance: {} of 9 criteria pass", 9 - failed);
    if failed > 0 {
        std::process::exit(1);
    }
}
