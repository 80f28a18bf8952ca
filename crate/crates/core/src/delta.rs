//! Δ-groupoids: a groupoid `G`, a subset `H` closed under inversion, and an
//! involution `k` on `H` such that for every H-composable pair `(x, y)` the
//! pairs `(k(xy), ik(y))` and `(k(x), iki(y))` are H-composable and
//!
//! ```text
//! k(xy) · ik(y) = k(k(x) · iki(y))
//! ```
//!
//! A pair is H-composable when both members lie in `H`, they compose in `G`,
//! and the product lies in `H` again.

use crate::error::{Error, Result};
use crate::groupoid::{
    check_groupoid_morphism, validate_groupoid, Groupoid, GroupoidData, GroupoidMorphism, MorphismData,
};
use crate::report::{Issue, IssueKind, ValidationReport};
use serde::{Deserialize, Serialize};
use std::collections::{BTreeMap, BTreeSet};

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct DeltaGroupoid {
    g: Groupoid,
    h: BTreeSet<usize>,
    k: BTreeMap<usize, usize>,
}

/// JSON form: the groupoid format plus `h` and the `k` table.
#[derive(Debug, Clone, Default, PartialEq, Eq, Serialize, Deserialize)]
pub struct DeltaGroupoidData {
    #[serde(flatten)]
    pub groupoid: GroupoidData,
    pub h: Vec<String>,
    pub k: Vec<[String; 2]>,
}

impl DeltaGroupoid {
    /// Stores the triple as given; nothing is checked until [`validate_delta`].
    pub fn new(g: Groupoid, h: BTreeSet<usize>, k: BTreeMap<usize, usize>) -> Self {
        DeltaGroupoid { g, h, k }
    }

    pub fn groupoid(&self) -> &Groupoid {
        &self.g
    }

    pub fn h(&self) -> &BTreeSet<usize> {
        &self.h
    }

    pub fn k_table(&self) -> &BTreeMap<usize, usize> {
        &self.k
    }

    pub fn in_h(&self, x: usize) -> bool {
        self.h.contains(&x)
    }

    pub fn k(&self, x: usize) -> Option<usize> {
        self.k.get(&x).copied()
    }

    /// `i∘k∘i`, where defined.
    pub fn j(&self, x: usize) -> Option<usize> {
        self.k(self.g.inv(x)).map(|y| self.g.inv(y))
    }

    pub fn num_elements(&self) -> usize {
        self.g.num_elements()
    }

    pub fn to_data(&self) -> DeltaGroupoidData {
        let id = |x: usize| self.g.element_id(x).to_string();
        DeltaGroupoidData {
            groupoid: self.g.to_data(),
            h: self.h.iter().map(|&x| id(x)).collect(),
            k: self.k.iter().map(|(&x, &y)| [id(x), id(y)]).collect(),
        }
    }

    pub fn from_data(data: &DeltaGroupoidData) -> Result<Self> {
        let g = Groupoid::from_data(&data.groupoid)?;
        let mut issues = Vec::new();
        let mut lookup = |s: &str| match g.element_index(s) {
            Some(x) => Some(x),
            None => {
                issues.push(Issue::new(IssueKind::DanglingId, vec![s.to_string()], "unknown element in h or k"));
                None
            }
        };
        let h: BTreeSet<usize> = data.h.iter().filter_map(|s| lookup(s)).collect();
        let mut k = BTreeMap::new();
        let mut repeated = Vec::new();
        for [x, y] in &data.k {
            if let (Some(a), Some(b)) = (lookup(x), lookup(y)) {
                if k.insert(a, b).is_some() {
                    repeated.push(Issue::new(IssueKind::KDomain, vec![x.clone()], "k listed twice"));
                }
            }
        }
        issues.extend(repeated);
        if issues.is_empty() {
            Ok(DeltaGroupoid { g, h, k })
        } else {
            Err(Error::Structural(issues))
        }
    }
}

/// `(G, ∅, 1_∅)`.
pub fn trivial_delta(g: &Groupoid) -> DeltaGroupoid {
    DeltaGroupoid::new(g.clone(), BTreeSet::new(), BTreeMap::new())
}

fn structural_issues(d: &DeltaGroupoid) -> Vec<Issue> {
    let g = &d.g;
    let id = |x: usize| g.element_id(x).to_string();
    let mut s = Vec::new();
    for &x in &d.h {
        match d.k(x) {
            None => s.push(Issue::new(IssueKind::KDomain, vec![id(x)], "k undefined on an element of h")),
            Some(y) if !d.in_h(y) => s.push(Issue::new(IssueKind::KDomain, vec![id(x), id(y)], "k(x) lies outside h")),
            Some(y) if d.k(y) != Some(x) => s.push(Issue::new(IssueKind::KNotInvolutive, vec![id(x)], "k(k(x)) ≠ x")),
            _ => {}
        }
    }
    for (&x, _) in d.k.iter().filter(|(x, _)| !d.in_h(**x)) {
        s.push(Issue::new(IssueKind::KDomain, vec![id(x)], "k defined outside h"));
    }
    s
}

/// Enumerates every H-composable pair and reports each failure of the
/// Δ-axiom. Non-composability of the two derived pairs is reported under its
/// own kind, separately from failures of the identity itself.
pub fn validate_delta(d: &DeltaGroupoid) -> ValidationReport {
    let mut report = validate_groupoid(&d.g);
    report.structural.extend(structural_issues(d));
    if !report.structural.is_empty() {
        report.canonicalize();
        return report;
    }
    let g = &d.g;
    let id = |x: usize| g.element_id(x).to_string();
    let v = &mut report.violations;
    for &x in &d.h {
        if !d.in_h(g.inv(x)) {
            v.push(Issue::new(IssueKind::HNotInverseClosed, vec![id(x)], "x⁻¹ ∉ h"));
        }
    }
    // H-composable in the sense used by the axiom.
    let h_product = |a: usize, b: usize| -> Option<usize> {
        if !d.in_h(a) || !d.in_h(b) {
            return None;
        }
        g.compose(a, b).filter(|&c| d.in_h(c))
    };
    let k = |x: usize| d.k(x).expect("k total on h after structural check");
    for &x in &d.h {
        for &y in g.outgoing(g.tgt(x)) {
            let Some(xy) = h_product(x, y) else { continue };
            let ik_y = g.inv(k(y));
            let lhs = h_product(k(xy), ik_y);
            if lhs.is_none() {
                v.push(Issue::new(
                    IssueKind::DerivedPairNotComposable,
                    vec![id(x), id(y)],
                    "(k(xy), ik(y)) is not H-composable",
                ));
            }
            let iki_y = d.in_h(g.inv(y)).then(|| k(g.inv(y))).map(|z| g.inv(z));
            let w = iki_y.and_then(|iki_y| h_product(k(x), iki_y));
            if w.is_none() {
                v.push(Issue::new(
                    IssueKind::DerivedPairNotComposable,
                    vec![id(x), id(y)],
                    "(k(x), iki(y)) is not H-composable",
                ));
            }
            if let (Some(lhs), Some(w)) = (lhs, w) {
                if lhs != k(w) {
                    v.push(Issue::new(
                        IssueKind::DeltaIdentity,
                        vec![id(x), id(y)],
                        format!("k(xy)ik(y) = {} but k(k(x)iki(y)) = {}", id(lhs), id(k(w))),
                    ));
                }
            }
        }
    }
    report.canonicalize();
    report
}

/// `i∘k∘i = k∘i∘k` pointwise on `h`. The axiom forces this at `i(y)` for
/// every right factor `y` of an H-composable pair; elements outside every
/// such pair are unconstrained, so a valid Δ-groupoid can fail it.
pub fn check_iki_kik(d: &DeltaGroupoid) -> bool {
    let g = &d.g;
    d.h.iter().all(|&x| {
        let iki = d.k(g.inv(x)).map(|y| g.inv(y));
        let kik = d.k(x).and_then(|y| d.k(g.inv(y)));
        iki.is_some() && iki == kik
    })
}

/// A morphism of Δ-groupoids; the domain and codomain are passed alongside
/// when checking.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct DeltaMorphism {
    pub map: GroupoidMorphism,
}

impl DeltaMorphism {
    pub fn identity(d: &DeltaGroupoid) -> Self {
        DeltaMorphism { map: GroupoidMorphism::identity(&d.g) }
    }

    pub fn then(&self, next: &DeltaMorphism) -> DeltaMorphism {
        DeltaMorphism { map: self.map.then(&next.map) }
    }
}

/// JSON form used by `morphism-check`.
#[derive(Debug, Clone, Default, PartialEq, Eq, Serialize, Deserialize)]
pub struct DeltaMorphismData {
    pub domain: DeltaGroupoidData,
    pub codomain: DeltaGroupoidData,
    #[serde(flatten)]
    pub map: MorphismData,
}

pub fn check_delta_morphism(dom: &DeltaGroupoid, cod: &DeltaGroupoid, f: &DeltaMorphism) -> Vec<Issue> {
    let mut issues = check_groupoid_morphism(&dom.g, &cod.g, &f.map);
    if issues.iter().any(|i| i.kind == IssueKind::DanglingId) {
        return issues;
    }
    let id = |x: usize| dom.g.element_id(x).to_string();
    for &x in &dom.h {
        let fx = f.map.element_map[x];
        if !cod.in_h(fx) {
            issues.push(Issue::new(IssueKind::MorphismH, vec![id(x)], "f(x) ∉ h′"));
            continue;
        }
        let fkx = dom.k(x).map(|y| f.map.element_map[y]);
        if fkx.is_none() || fkx != cod.k(fx) {
            issues.push(Issue::new(IssueKind::MorphismK, vec![id(x)], "k′(f(x)) ≠ f(k(x))"));
        }
    }
    issues.sort();
    issues
}

pub fn is_delta_morphism(dom: &DeltaGroupoid, cod: &DeltaGroupoid, f: &DeltaMorphism) -> bool {
    check_delta_morphism(dom, cod, f).is_empty()
}

/// Limits for [`find_isomorphism`].
#[derive(Debug, Clone, Copy)]
pub struct IsoSearch {
    /// Largest number of elements allowed on either side.
    pub element_cap: usize,
    /// Largest number of backtracking nodes.
    pub node_cap: u64,
}

impl Default for IsoSearch {
    fn default() -> Self {
        IsoSearch { element_cap: 64, node_cap: 1_000_000 }
    }
}

/// Per-element invariants preserved by every isomorphism.
fn signatures(d: &DeltaGroupoid) -> Vec<[usize; 9]> {
    let g = &d.g;
    let vertex_group = |o: usize| g.hom_set(o, o).count();
    (0..g.num_elements())
        .map(|x| {
            let (s, t) = (g.src(x), g.tgt(x));
            let kx = d.k(x);
            [
                g.is_unit(x) as usize,
                d.in_h(x) as usize,
                (g.inv(x) == x) as usize,
                (kx == Some(x)) as usize,
                (kx == Some(g.inv(x))) as usize,
                (s == t) as usize,
                g.hom_set(s, t).count(),
                g.outgoing(s).len(),
                vertex_group(s),
            ]
        })
        .collect()
}

struct IsoState<'a> {
    d1: &'a DeltaGroupoid,
    d2: &'a DeltaGroupoid,
    sig1: Vec<[usize; 9]>,
    sig2: Vec<[usize; 9]>,
    f: Vec<Option<usize>>,
    rev: Vec<Option<usize>>,
    fo: Vec<Option<usize>>,
    ro: Vec<Option<usize>>,
    trail: Vec<Undo>,
    nodes: u64,
    cap: u64,
}

enum Undo {
    Elem(usize),
    Obj(usize),
}

impl IsoState<'_> {
    fn map_object(&mut self, a: usize, b: usize) -> bool {
        match (self.fo[a], self.ro[b]) {
            (Some(x), _) => x == b,
            (None, Some(_)) => false,
            (None, None) => {
                self.fo[a] = Some(b);
                self.ro[b] = Some(a);
                self.trail.push(Undo::Obj(a));
                true
            }
        }
    }

    /// Maps `x ↦ y` and everything it forces (inverses, k-partners, units,
    /// products with already-mapped elements).
    fn assign(&mut self, x: usize, y: usize) -> bool {
        let (g1, g2) = (self.d1.groupoid(), self.d2.groupoid());
        let mut queue = vec![(x, y)];
        while let Some((a, b)) = queue.pop() {
            if let Some(fa) = self.f[a] {
                if fa != b {
                    return false;
                }
                continue;
            }
            if self.rev[b].is_some() || self.sig1[a] != self.sig2[b] {
                return false;
            }
            if !self.map_object(g1.src(a), g2.src(b)) || !self.map_object(g1.tgt(a), g2.tgt(b)) {
                return false;
            }
            self.f[a] = Some(b);
            self.rev[b] = Some(a);
            self.trail.push(Undo::Elem(a));
            queue.push((g1.inv(a), g2.inv(b)));
            if let (Some(ka), Some(kb)) = (self.d1.k(a), self.d2.k(b)) {
                queue.push((ka, kb));
            }
            queue.push((g1.unit(g1.src(a)), g2.unit(g2.src(b))));
            queue.push((g1.unit(g1.tgt(a)), g2.unit(g2.tgt(b))));
            for &c in g1.outgoing(g1.tgt(a)) {
                if let Some(fc) = self.f[c] {
                    match (g1.compose(a, c), g2.compose(b, fc)) {
                        (Some(ac), Some(bfc)) => queue.push((ac, bfc)),
                        _ => return false,
                    }
                }
            }
            for &c in g1.incoming(g1.src(a)) {
                if let Some(fc) = self.f[c] {
                    match (g1.compose(c, a), g2.compose(fc, b)) {
                        (Some(ca), Some(fcb)) => queue.push((ca, fcb)),
                        _ => return false,
                    }
                }
            }
        }
        true
    }

    fn undo_to(&mut self, len: usize) {
        while self.trail.len() > len {
            match self.trail.pop().expect("trail longer than len") {
                Undo::Elem(a) => {
                    let b = self.f[a].take().expect("mapped element");
                    self.rev[b] = None;
                }
                Undo::Obj(a) => {
                    let b = self.fo[a].take().expect("mapped object");
                    self.ro[b] = None;
                }
            }
        }
    }

    fn next_unmapped(&self) -> Option<usize> {
        let g1 = self.d1.groupoid();
        let mut fallback = None;
        for x in 0..g1.num_elements() {
            if self.f[x].is_none() {
                if self.fo[g1.src(x)].is_some() {
                    return Some(x);
                }
                fallback.get_or_insert(x);
            }
        }
        fallback
    }

    fn search(&mut self) -> Result<bool> {
        self.nodes += 1;
        if self.nodes > self.cap {
            return Err(Error::CapExceeded(format!("isomorphism search visited more than {} nodes", self.cap)));
        }
        let Some(x) = self.next_unmapped() else { return Ok(true) };
        let g2 = self.d2.groupoid();
        for y in 0..g2.num_elements() {
            if self.rev[y].is_some() || self.sig1[x] != self.sig2[y] {
                continue;
            }
            let mark = self.trail.len();
            if self.assign(x, y) && self.search()? {
                return Ok(true);
            }
            self.undo_to(mark);
        }
        Ok(false)
    }
}

/// Searches for a bijective Δ-morphism `d1 → d2` by backtracking over element
/// images, pruned by per-element invariants and forced propagation.
/// Returns `Ok(None)` when none exists and `Err(CapExceeded)` when the search
/// would exceed its limits.
pub fn find_isomorphism(d1: &DeltaGroupoid, d2: &DeltaGroupoid, limits: IsoSearch) -> Result<Option<DeltaMorphism>> {
    let (g1, g2) = (d1.groupoid(), d2.groupoid());
    if g1.num_elements() > limits.element_cap || g2.num_elements() > limits.element_cap {
        return Err(Error::CapExceeded(format!(
            "isomorphism search limited to {} elements per side ({} and {} given)",
            limits.element_cap,
            g1.num_elements(),
            g2.num_elements()
        )));
    }
    if g1.num_elements() != g2.num_elements() || g1.num_objects() != g2.num_objects() || d1.h.len() != d2.h.len() {
        return Ok(None);
    }
    let (sig1, sig2) = (signatures(d1), signatures(d2));
    let (mut s1, mut s2) = (sig1.clone(), sig2.clone());
    s1.sort();
    s2.sort();
    if s1 != s2 {
        return Ok(None);
    }
    let mut st = IsoState {
        d1,
        d2,
        sig1,
        sig2,
        f: vec![None; g1.num_elements()],
        rev: vec![None; g2.num_elements()],
        fo: vec![None; g1.num_objects()],
        ro: vec![None; g2.num_objects()],
        trail: Vec::new(),
        nodes: 0,
        cap: limits.node_cap,
    };
    if !st.search()? {
        return Ok(None);
    }
    let m = DeltaMorphism {
        map: GroupoidMorphism {
            object_map: st.fo.iter().map(|o| o.expect("all objects mapped")).collect(),
            element_map: st.f.iter().map(|x| x.expect("all elements mapped")).collect(),
        },
    };
    debug_assert!(is_delta_morphism(d1, d2, &m));
    Ok(Some(m))
}
