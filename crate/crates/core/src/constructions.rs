//! Concrete Δ-groupoids: the triple groupoid `X³`, unit groups of rings with
//! `k(x) = 1 − x`, the affine group `R* × R` with the coordinate swap, the
//! canonical morphism between the last two, and the Δ-group of a
//! symmetrically factorized group.

use crate::delta::{DeltaGroupoid, DeltaMorphism};
use crate::error::{Error, Result};
use crate::finite_ring::{units, FiniteRing};
use crate::groupoid::{group_groupoid, Groupoid, GroupoidData, GroupoidMorphism};
use serde::{Deserialize, Serialize};
use std::collections::{BTreeMap, BTreeSet, HashMap};

/// `X³` on `X = {1..n}`: elements `(a,b,c)` from object `(a,b)` to `(a,c)`,
/// `(a,b,c)(a,c,g) = (a,b,g)`, `h` the triples with pairwise distinct
/// entries and `k(a,b,c) = (c,b,a)`.
pub fn x3_delta(n: usize) -> DeltaGroupoid {
    assert!(n >= 1, "x3_delta needs n ≥ 1");
    let obj = |a: usize, b: usize| a * n + b;
    let el = |a: usize, b: usize, c: usize| (a * n + b) * n + c;
    let objects = (0..n * n).map(|o| format!("({},{})", o / n + 1, o % n + 1)).collect();
    let mut elements = Vec::with_capacity(n * n * n);
    let mut inv = Vec::with_capacity(n * n * n);
    for a in 0..n {
        for b in 0..n {
            for c in 0..n {
                elements.push((format!("({},{},{})", a + 1, b + 1, c + 1), obj(a, b), obj(a, c)));
                inv.push(el(a, c, b));
            }
        }
    }
    let units = (0..n * n).map(|o| el(o / n, o % n, o % n)).collect();
    let g = Groupoid::from_rule(objects, elements, inv, units, |x, y| {
        let (a, b) = (x / (n * n), (x / n) % n);
        let g = y % n;
        el(a, b, g)
    })
    .expect("X³ tables are well formed");
    let mut h = BTreeSet::new();
    let mut k = BTreeMap::new();
    for a in 0..n {
        for b in 0..n {
            for c in 0..n {
                if a != b && b != c && c != a {
                    h.insert(el(a, b, c));
                    k.insert(el(a, b, c), el(c, b, a));
                }
            }
        }
    }
    DeltaGroupoid::new(g, h, k)
}

/// The unit group `R*` as a one-object groupoid, with elements named after
/// the ring elements.
pub fn unit_group_groupoid(r: &FiniteRing) -> (Groupoid, Vec<usize>) {
    let u = units(r);
    let pos: HashMap<usize, usize> = u.elements.iter().enumerate().map(|(i, &x)| (x, i)).collect();
    let names = u.elements.iter().map(|&x| r.name(x).to_string()).collect();
    let g = group_groupoid(
        names,
        pos[&r.one()],
        |i| pos[&u.inverse[&u.elements[i]]],
        |i, j| pos[&r.mul(u.elements[i], u.elements[j])],
    );
    (g, u.elements)
}

/// `(R*, k(R*) ∩ R*, k)` with `k(x) = 1 − x`.
pub fn ring_unit_delta(r: &FiniteRing) -> DeltaGroupoid {
    let (g, elems) = unit_group_groupoid(r);
    let pos: HashMap<usize, usize> = elems.iter().enumerate().map(|(i, &x)| (x, i)).collect();
    let mut h = BTreeSet::new();
    let mut k = BTreeMap::new();
    for (i, &x) in elems.iter().enumerate() {
        if let Some(&j) = pos.get(&r.one_minus(x)) {
            h.insert(i);
            k.insert(i, j);
        }
    }
    DeltaGroupoid::new(g, h, k)
}

/// The group `R* × R` with `(x,y)(u,v) = (xu, xv + y)`, `h = R* × R*`, and
/// `k(x,y) = (y,x)`. Element `(x,y)` sits at index `ix · |R| + y`.
pub fn affine_delta(r: &FiniteRing) -> DeltaGroupoid {
    let u = units(r);
    let n = r.size();
    let upos: HashMap<usize, usize> = u.elements.iter().enumerate().map(|(i, &x)| (x, i)).collect();
    let idx = |x: usize, y: usize| upos[&x] * n + y;
    let split = |i: usize| (u.elements[i / n], i % n);
    let count = u.len() * n;
    let names = (0..count)
        .map(|i| {
            let (x, y) = split(i);
            format!("({},{})", r.name(x), r.name(y))
        })
        .collect();
    let g = group_groupoid(
        names,
        idx(r.one(), r.zero()),
        |i| {
            let (x, y) = split(i);
            let xi = u.inverse[&x];
            idx(xi, r.neg(r.mul(xi, y)))
        },
        |i, j| {
            let ((x, y), (a, b)) = (split(i), split(j));
            idx(r.mul(x, a), r.add(r.mul(x, b), y))
        },
    );
    let mut h = BTreeSet::new();
    let mut k = BTreeMap::new();
    for &x in &u.elements {
        for &y in &u.elements {
            h.insert(idx(x, y));
            k.insert(idx(x, y), idx(y, x));
        }
    }
    DeltaGroupoid::new(g, h, k)
}

/// `x ↦ (x, 1 − x)` from `ring_unit_delta(r)` to `affine_delta(r)`.
pub fn canonical_embedding(r: &FiniteRing) -> DeltaMorphism {
    let u = units(r);
    let n = r.size();
    let upos: HashMap<usize, usize> = u.elements.iter().enumerate().map(|(i, &x)| (x, i)).collect();
    DeltaMorphism {
        map: GroupoidMorphism {
            object_map: vec![0],
            element_map: u.elements.iter().map(|&x| upos[&x] * n + r.one_minus(x)).collect(),
        },
    }
}

/// A group `G` (one-object groupoid), a subgroup `G₊`, and an involution `θ`.
#[derive(Debug, Clone)]
pub struct FactorizedGroupData {
    pub group: Groupoid,
    pub g_plus: BTreeSet<usize>,
    pub theta: usize,
}

/// JSON form of [`FactorizedGroupData`].
#[derive(Debug, Clone, Default, PartialEq, Eq, Serialize, Deserialize)]
pub struct FactorizedGroupJson {
    pub group: GroupoidData,
    pub g_plus: Vec<String>,
    pub theta: String,
}

impl FactorizedGroupData {
    pub fn from_json(data: &FactorizedGroupJson) -> Result<Self> {
        let group = Groupoid::from_data(&data.group)?;
        let lookup =
            |s: &str| group.element_index(s).ok_or_else(|| Error::Parse(format!("unknown group element {s:?}")));
        let g_plus = data.g_plus.iter().map(|s| lookup(s)).collect::<Result<_>>()?;
        let theta = lookup(&data.theta)?;
        Ok(FactorizedGroupData { group, g_plus, theta })
    }

    pub fn to_json(&self) -> FactorizedGroupJson {
        FactorizedGroupJson {
            group: self.group.to_data(),
            g_plus: self.g_plus.iter().map(|&x| self.group.element_id(x).to_string()).collect(),
            theta: self.group.element_id(self.theta).to_string(),
        }
    }
}

/// The Δ-group on `G₊` with `h = G₊ ∩ G₋G₊θ ∩ θG₊G₋` (set products) and
/// `k(x) = ((θx⁻¹)₊)⁻¹`, where `G₋ = θG₊θ` and `g ↦ (g₊, g₋)` inverts the
/// multiplication bijection `G₊ × G₋ → G₊G₋`.
pub fn factorized_delta(fd: &FactorizedGroupData) -> Result<DeltaGroupoid> {
    let g = &fd.group;
    if g.num_objects() != 1 {
        return Err(Error::Factorization("the ambient structure must be a group (one object)".into()));
    }
    let name = |x: usize| g.element_id(x).to_string();
    let mul = |a: usize, b: usize| g.compose(a, b).expect("group elements always compose");
    let e = g.unit(0);
    let theta = fd.theta;
    if mul(theta, theta) != e {
        return Err(Error::Factorization(format!("θ = {} is not an involution", name(theta))));
    }
    let plus = &fd.g_plus;
    if !plus.contains(&e) {
        return Err(Error::Factorization("G₊ does not contain the identity".into()));
    }
    for &a in plus {
        if !plus.contains(&g.inv(a)) {
            return Err(Error::Factorization(format!("G₊ not closed under inverse at {}", name(a))));
        }
        for &b in plus {
            if !plus.contains(&mul(a, b)) {
                return Err(Error::Factorization(format!("G₊ not closed under product at ({}, {})", name(a), name(b))));
            }
        }
    }
    let minus: BTreeSet<usize> = plus.iter().map(|&a| mul(mul(theta, a), theta)).collect();
    let mut factor: HashMap<usize, (usize, usize)> = HashMap::new();
    for &a in plus {
        for &b in &minus {
            let m = mul(a, b);
            if let Some(&(a2, b2)) = factor.get(&m) {
                return Err(Error::Factorization(format!(
                    "multiplication G₊ × G₋ is not injective: {}·{} = {}·{} = {}",
                    name(a2),
                    name(b2),
                    name(a),
                    name(b),
                    name(m)
                )));
            }
            factor.insert(m, (a, b));
        }
    }
    let minus_plus_theta: BTreeSet<usize> =
        minus.iter().flat_map(|&b| plus.iter().map(move |&a| (b, a))).map(|(b, a)| mul(mul(b, a), theta)).collect();
    let theta_plus_minus: BTreeSet<usize> = factor.keys().map(|&m| mul(theta, m)).collect();
    let h_amb: BTreeSet<usize> =
        plus.iter().copied().filter(|x| minus_plus_theta.contains(x) && theta_plus_minus.contains(x)).collect();

    let (sub, old_of_new) = g.subgroupoid(plus)?;
    let new_of_old: HashMap<usize, usize> = old_of_new.iter().enumerate().map(|(i, &x)| (x, i)).collect();
    let mut h = BTreeSet::new();
    let mut k = BTreeMap::new();
    for &x in &h_amb {
        let w = mul(theta, g.inv(x));
        let &(w_plus, _) =
            factor.get(&w).ok_or_else(|| Error::Factorization(format!("θx⁻¹ ∉ G₊G₋ for x = {}", name(x))))?;
        h.insert(new_of_old[&x]);
        k.insert(new_of_old[&x], new_of_old[&g.inv(w_plus)]);
    }
    Ok(DeltaGroupoid::new(sub, h, k))
}

/// The symmetric group on `{1..n}` as a one-object groupoid. Elements are
/// named in cycle notation (`e`, `(12)`, `(123)`, ...). Products compose
/// left to right: `(x·y)(i) = y(x(i))`.
pub fn symmetric_group(n: usize) -> Groupoid {
    let mut perms: Vec<Vec<usize>> = Vec::new();
    permutations(&mut (0..n).collect(), 0, &mut perms);
    perms.sort();
    let index: HashMap<Vec<usize>, usize> = perms.iter().cloned().enumerate().map(|(i, p)| (p, i)).collect();
    let names = perms.iter().map(|p| cycle_name(p)).collect();
    let identity = index[&(0..n).collect::<Vec<_>>()];
    group_groupoid(
        names,
        identity,
        |i| {
            let p = &perms[i];
            let mut q = vec![0; n];
            for (a, &b) in p.iter().enumerate() {
                q[b] = a;
            }
            index[&q]
        },
        |i, j| {
            let (p, q) = (&perms[i], &perms[j]);
            index[&p.iter().map(|&a| q[a]).collect::<Vec<_>>()]
        },
    )
}

fn permutations(v: &mut Vec<usize>, k: usize, out: &mut Vec<Vec<usize>>) {
    if k == v.len() {
        out.push(v.clone());
        return;
    }
    for i in k..v.len() {
        v.swap(k, i);
        permutations(v, k + 1, out);
        v.swap(k, i);
    }
}

fn cycle_name(p: &[usize]) -> String {
    let mut seen = vec![false; p.len()];
    let mut s = String::new();
    for start in 0..p.len() {
        if seen[start] || p[start] == start {
            continue;
        }
        s.push('(');
        let mut i = start;
        while !seen[i] {
            seen[i] = true;
            s.push_str(&(i + 1).to_string());
            i = p[i];
        }
        s.push(')');
    }
    if s.is_empty() {
        "e".to_string()
    } else {
        s
    }
}

/// The S₃ fixture: `G₊ = ⟨(12)⟩`, `θ = (13)`.
pub fn s3_fixture() -> FactorizedGroupData {
    let group = symmetric_group(3);
    let id = |s: &str| group.element_index(s).expect("S₃ element");
    let g_plus = BTreeSet::from([id("e"), id("(12)")]);
    let theta = id("(13)");
    FactorizedGroupData { group, g_plus, theta }
}
