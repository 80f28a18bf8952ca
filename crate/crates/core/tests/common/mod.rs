//! Shared fixtures and brute-force oracles for the integration tests. The
//! oracles deliberately avoid the library's own search code.

#![allow(dead_code)]

use dgk_core::constructions::{affine_delta, factorized_delta, ring_unit_delta, s3_fixture, symmetric_group, x3_delta};
use dgk_core::delta::{trivial_delta, DeltaGroupoid, DeltaMorphism};
use dgk_core::finite_ring::zmod;
use dgk_core::finite_ring::FiniteRing;
use dgk_core::groupoid::{cyclic_group, disjoint_union, pair_groupoid, Groupoid};
use dgk_core::presented::PresentedRing;
use dgk_core::topo::ToppModel;
use num_bigint::BigInt;
use num_traits::ToPrimitive;
use rand::Rng;
use std::collections::{BTreeMap, BTreeSet};

/// Small groupoids of every shape the library builds.
pub fn corpus_groupoids() -> Vec<(String, Groupoid)> {
    let mut out = vec![("empty".to_string(), Groupoid::empty())];
    for n in 1..=6 {
        out.push((format!("C{n}"), cyclic_group(n)));
    }
    for n in 1..=4 {
        let pts: Vec<String> = (0..n).map(|i| format!("p{i}")).collect();
        out.push((format!("pair{n}"), pair_groupoid(&pts)));
    }
    out.push(("S3".into(), symmetric_group(3)));
    out.push(("C2+C3".into(), disjoint_union(&[cyclic_group(2), cyclic_group(3)])));
    out.push(("pair2+C2".into(), disjoint_union(&[pair_groupoid(&["a", "b"]), cyclic_group(2)])));
    out
}

/// Δ-groupoids fed to `universal_ring` by the certificate and signature
/// checks.
pub fn delta_corpus() -> Vec<(String, DeltaGroupoid)> {
    let mut out = Vec::new();
    for n in 1..=3 {
        out.push((format!("x3({n})"), x3_delta(n)));
    }
    for n in 2..=7 {
        out.push((format!("units(zmod {n})"), ring_unit_delta(&zmod(n))));
    }
    for n in 2..=4 {
        out.push((format!("affine(zmod {n})"), affine_delta(&zmod(n))));
    }
    out.push(("S3 factorized".into(), factorized_delta(&s3_fixture()).unwrap()));
    for (name, g) in corpus_groupoids() {
        if g.num_elements() <= 8 {
            out.push((format!("trivial({name})"), trivial_delta(&g)));
        }
    }
    out
}

/// Number of pairs `(x, y)` with `x, y, xy ∈ h`, counted over all pairs of
/// elements.
pub fn count_h_composable(d: &DeltaGroupoid) -> usize {
    let g = d.groupoid();
    let m = g.num_elements();
    let mut n = 0;
    for x in 0..m {
        for y in 0..m {
            if d.in_h(x) && d.in_h(y) {
                if let Some(z) = g.compose(x, y) {
                    if d.in_h(z) {
                        n += 1;
                    }
                }
            }
        }
    }
    n
}

/// The Δ-axioms checked literally: `h` inverse closed, `k` an involution
/// of `h`, and `k(xy)·ik(y) = k(k(x)·iki(y))` for H-composable `(x, y)`,
/// with both sides H-composable.
pub fn delta_axioms_hold(d: &DeltaGroupoid) -> bool {
    let g = d.groupoid();
    let m = g.num_elements();
    let hp = |a: usize, b: usize| -> Option<usize> {
        if d.in_h(a) && d.in_h(b) {
            g.compose(a, b).filter(|&c| d.in_h(c))
        } else {
            None
        }
    };
    for x in 0..m {
        if !d.in_h(x) {
            if d.k(x).is_some() {
                return false;
            }
            continue;
        }
        if !d.in_h(g.inv(x)) {
            return false;
        }
        match d.k(x) {
            Some(y) if d.in_h(y) && d.k(y) == Some(x) => {}
            _ => return false,
        }
    }
    let k = |x: usize| d.k(x).unwrap();
    let i = |x: usize| g.inv(x);
    for x in 0..m {
        for y in 0..m {
            let Some(xy) = hp(x, y) else { continue };
            let lhs = hp(k(xy), i(k(y)));
            let rhs = hp(k(x), i(k(i(y))));
            match (lhs, rhs) {
                (Some(l), Some(r)) if l == k(r) => {}
                _ => return false,
            }
        }
    }
    true
}

/// Functor laws on every composable pair, plus `f(h) ⊆ h'` and `f∘k = k'∘f`.
pub fn is_delta_morphism_oracle(dom: &DeltaGroupoid, cod: &DeltaGroupoid, f: &DeltaMorphism) -> bool {
    let (a, b) = (dom.groupoid(), cod.groupoid());
    let om = &f.map.object_map;
    let em = &f.map.element_map;
    if om.len() != a.num_objects() || em.len() != a.num_elements() {
        return false;
    }
    for x in 0..a.num_elements() {
        if b.src(em[x]) != om[a.src(x)] || b.tgt(em[x]) != om[a.tgt(x)] {
            return false;
        }
        for y in 0..a.num_elements() {
            if let Some(z) = a.compose(x, y) {
                if b.compose(em[x], em[y]) != Some(em[z]) {
                    return false;
                }
            }
        }
        if dom.in_h(x) && (!cod.in_h(em[x]) || cod.k(em[x]) != Some(em[dom.k(x).unwrap()])) {
            return false;
        }
    }
    (0..a.num_objects()).all(|o| em[a.unit(o)] == b.unit(om[o]))
}

fn scalar(r: &FiniteRing, c: &BigInt) -> usize {
    // Additive order of 1, then c·1 by repeated addition.
    let mut order = 1;
    let mut acc = r.one();
    while acc != r.zero() {
        acc = r.add(acc, r.one());
        order += 1;
    }
    let mut c = (c % BigInt::from(order)).to_i64().unwrap();
    if c < 0 {
        c += order as i64;
    }
    (0..c).fold(r.zero(), |v, _| r.add(v, r.one()))
}

/// Counts unital homs by trying every assignment of generator images and
/// evaluating every relation, including `g·g⁻¹ − 1`. Refuses above
/// `limit` assignments.
pub fn brute_force_hom_count(p: &PresentedRing, r: &FiniteRing, limit: u64) -> Option<u64> {
    let m = p.num_generators();
    let size = r.size() as u64;
    let total = size.checked_pow(m as u32)?;
    if total > limit {
        return None;
    }
    let rels: Vec<Vec<(usize, Vec<usize>)>> =
        p.all_relations().iter().map(|rel| rel.terms().map(|(w, c)| (scalar(r, c), w.0.clone())).collect()).collect();
    let mut values = vec![0usize; m];
    let mut count = 0;
    for mut code in 0..total {
        for v in values.iter_mut() {
            *v = (code % size) as usize;
            code /= size;
        }
        let ok = rels.iter().all(|terms| {
            let mut acc = r.zero();
            for (c, w) in terms {
                let v = w.iter().fold(*c, |v, &l| r.mul(v, values[l]));
                acc = r.add(acc, v);
            }
            acc == r.zero()
        });
        if ok {
            count += 1;
        }
    }
    Some(count)
}

/// A random valid model. Half are shaped like the simply connected family:
/// blocks of points form the subspace, each pair of blocks is joined by a
/// long arc with probability 0.85, arc endpoints are usually distinct but
/// sometimes shared, and a few points lie outside the subspace. The rest
/// take a pair groupoid (or a disjoint union of two) with random blocks
/// and a random inverse-closed set of long arcs.
pub fn random_model<R: Rng>(rng: &mut R) -> ToppModel {
    if rng.gen_bool(0.5) {
        structured_model(rng)
    } else {
        loose_model(rng)
    }
}

fn structured_model<R: Rng>(rng: &mut R) -> ToppModel {
    let nblocks: usize = rng.gen_range(1..=4);
    // (block, point) per point; None for points outside the subspace.
    let mut block: Vec<Option<usize>> = Vec::new();
    let mut endpoint = BTreeMap::new();
    for i in 0..nblocks {
        let mut last = None;
        for j in 0..nblocks {
            if i == j {
                continue;
            }
            let e = match last {
                Some(e) if rng.gen_bool(0.15) => e,
                _ => {
                    block.push(Some(i));
                    block.len() - 1
                }
            };
            endpoint.insert((i, j), e);
            last = Some(e);
        }
        for _ in 0..rng.gen_range(0..=1) {
            block.push(Some(i));
        }
    }
    for _ in 0..rng.gen_range(0..=1) {
        block.push(None);
    }
    let names: Vec<String> = (0..block.len()).map(|i| format!("q{i}")).collect();
    let p = pair_groupoid(&names);
    let n = names.len();
    let el = |a: usize, b: usize| a * n + b;
    let mut a_sub = BTreeSet::new();
    for a in 0..n {
        for b in 0..n {
            if block[a].is_some() && block[a] == block[b] {
                a_sub.insert(el(a, b));
            }
        }
    }
    let mut long_arcs = BTreeSet::new();
    for i in 0..nblocks {
        for j in i + 1..nblocks {
            if rng.gen_bool(0.85) {
                let (a, b) = (endpoint[&(i, j)], endpoint[&(j, i)]);
                long_arcs.insert(el(a, b));
                long_arcs.insert(el(b, a));
            }
        }
    }
    // Occasionally an arc touching a point outside the subspace.
    if let Some(out) = block.iter().position(Option::is_none) {
        if rng.gen_bool(0.5) {
            let a = rng.gen_range(0..n);
            if a != out {
                long_arcs.insert(el(a, out));
                long_arcs.insert(el(out, a));
            }
        }
    }
    ToppModel::new(p, a_sub, long_arcs)
}

fn loose_model<R: Rng>(rng: &mut R) -> ToppModel {
    let m: usize = rng.gen_range(1..=7);
    let names: Vec<String> = (0..m).map(|i| format!("q{i}")).collect();
    let split = if m >= 2 && rng.gen_bool(0.25) { rng.gen_range(1..m) } else { m };
    let p = if split == m {
        pair_groupoid(&names)
    } else {
        disjoint_union(&[pair_groupoid(&names[..split]), pair_groupoid(&names[split..])])
    };
    let space = |a: usize| usize::from(a >= split);
    let el = |a: usize, b: usize| -> usize {
        let id = format!("({},{})", names[a], names[b]);
        let id = if split == m { id } else { format!("{}:{id}", space(a)) };
        p.element_index(&id).expect("pair exists")
    };
    let nblocks = rng.gen_range(1..=m.min(4));
    let block: Vec<Option<usize>> =
        (0..m).map(|_| if rng.gen_bool(0.1) { None } else { Some(rng.gen_range(0..nblocks)) }).collect();
    let mut a_sub = BTreeSet::new();
    for a in 0..m {
        for b in 0..m {
            if space(a) == space(b) && block[a].is_some() && block[a] == block[b] {
                a_sub.insert(el(a, b));
            }
        }
    }
    let density = rng.gen_range(0.05..0.6);
    let mut long_arcs = BTreeSet::new();
    for a in 0..m {
        for b in a..m {
            if space(a) == space(b) && !a_sub.contains(&el(a, b)) && rng.gen_bool(density) {
                long_arcs.insert(el(a, b));
                long_arcs.insert(el(b, a));
            }
        }
    }
    ToppModel::new(p, a_sub, long_arcs)
}
