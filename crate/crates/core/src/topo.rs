//! Finite models of a topological pair with long arcs, and the functor `g`
//! computing a Δ-groupoid from them.
//!
//! A model is a groupoid `p` standing for the fundamental groupoid of the
//! space at the endpoint set, a subgroupoid `a_sub` of classes of paths in
//! the subspace, and an inverse-closed set of long arcs. The endpoint maps of
//! long arcs are their sources and targets.

use crate::delta::{find_isomorphism, validate_delta, DeltaGroupoid, IsoSearch};
use crate::error::{Error, Result};
use crate::groupoid::{
    congruence_labels, pair_groupoid, quotient_by_labels, validate_groupoid, Groupoid, GroupoidData,
};
use crate::report::{Issue, IssueKind, ValidationReport};
use serde::{Deserialize, Serialize};
use std::collections::{BTreeMap, BTreeSet, HashMap};

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct ToppModel {
    pub p: Groupoid,
    pub a_sub: BTreeSet<usize>,
    pub long_arcs: BTreeSet<usize>,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct ToppModelData {
    #[serde(flatten)]
    pub groupoid: GroupoidData,
    pub a_sub: Vec<String>,
    pub long_arcs: Vec<String>,
}

impl ToppModel {
    pub fn new(p: Groupoid, a_sub: BTreeSet<usize>, long_arcs: BTreeSet<usize>) -> Self {
        ToppModel { p, a_sub, long_arcs }
    }

    /// The subspace is the whole space and there are no long arcs.
    pub fn whole_space(p: Groupoid) -> Self {
        let all = (0..p.num_elements()).collect();
        ToppModel::new(p, all, BTreeSet::new())
    }

    /// The subspace is empty.
    pub fn empty_subspace(p: Groupoid) -> Self {
        ToppModel::new(p, BTreeSet::new(), BTreeSet::new())
    }

    pub fn to_data(&self) -> ToppModelData {
        let ids = |s: &BTreeSet<usize>| s.iter().map(|&x| self.p.element_id(x).to_string()).collect();
        ToppModelData { groupoid: self.p.to_data(), a_sub: ids(&self.a_sub), long_arcs: ids(&self.long_arcs) }
    }

    pub fn from_data(data: &ToppModelData) -> Result<Self> {
        let p = Groupoid::from_data(&data.groupoid)?;
        let mut issues = Vec::new();
        let mut lookup = |ids: &[String]| -> BTreeSet<usize> {
            ids.iter()
                .filter_map(|s| {
                    let x = p.element_index(s);
                    if x.is_none() {
                        issues.push(Issue::new(IssueKind::DanglingId, vec![s.clone()], "unknown element in model"));
                    }
                    x
                })
                .collect()
        };
        let a_sub = lookup(&data.a_sub);
        let long_arcs = lookup(&data.long_arcs);
        if issues.is_empty() {
            Ok(ToppModel { p, a_sub, long_arcs })
        } else {
            Err(Error::Structural(issues))
        }
    }
}

pub fn validate_topp_model(m: &ToppModel) -> ValidationReport {
    let mut rep = validate_groupoid(&m.p);
    if !rep.is_valid() {
        return rep;
    }
    let p = &m.p;
    let id = |x: usize| p.element_id(x).to_string();
    let mut v = Vec::new();
    for &x in &m.a_sub {
        for u in [p.unit(p.src(x)), p.unit(p.tgt(x)), p.inv(x)] {
            if !m.a_sub.contains(&u) {
                v.push(Issue::new(IssueKind::NotSubgroupoid, vec![id(x), id(u)], "a_sub is not closed"));
            }
        }
        for &y in p.outgoing(p.tgt(x)) {
            if m.a_sub.contains(&y) {
                let z = p.compose(x, y).expect("composable");
                if !m.a_sub.contains(&z) {
                    v.push(Issue::new(
                        IssueKind::NotSubgroupoid,
                        vec![id(x), id(y)],
                        "a_sub is not closed under composition",
                    ));
                }
            }
        }
    }
    for &l in &m.long_arcs {
        if m.a_sub.contains(&l) {
            v.push(Issue::new(IssueKind::LongArcInA, vec![id(l)], "long arc lies in a_sub"));
        }
        if !m.long_arcs.contains(&p.inv(l)) {
            v.push(Issue::new(IssueKind::LongArcsNotInverseClosed, vec![id(l)], "inverse of long arc is missing"));
        }
        if (p.src(l) == p.tgt(l)) != (p.inv(l) == l) {
            v.push(Issue::new(
                IssueKind::EndpointCondition,
                vec![id(l)],
                "endpoints agree exactly when the arc is its own inverse",
            ));
        }
    }
    rep.violations.extend(v);
    rep.canonicalize();
    rep
}

/// The long-arc triple of a short arc and all its `(y, z)` solutions.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct ArcWitness {
    pub arc: usize,
    pub alpha: usize,
    pub beta: usize,
    pub gamma: usize,
    pub solutions: Vec<(usize, usize)>,
}

#[derive(Debug, Clone, PartialEq, Eq, Default)]
pub struct ShortArcTable {
    /// Sorted by arc.
    pub arcs: Vec<ArcWitness>,
}

impl ShortArcTable {
    pub fn len(&self) -> usize {
        self.arcs.len()
    }

    pub fn is_empty(&self) -> bool {
        self.arcs.is_empty()
    }

    pub fn get(&self, x: usize) -> Option<&ArcWitness> {
        self.arcs.binary_search_by_key(&x, |w| w.arc).ok().map(|i| &self.arcs[i])
    }

    pub fn p0(&self, x: usize) -> Option<usize> {
        self.get(x).map(|w| w.alpha)
    }

    pub fn p1(&self, x: usize) -> Option<usize> {
        self.get(x).map(|w| w.beta)
    }

    pub fn p2(&self, x: usize) -> Option<usize> {
        self.get(x).map(|w| w.gamma)
    }

    /// `p0` depends only on the source of an arc, `p1` only on its target,
    /// and `p1` of any `z`-partner of `x` is `p1(x)⁻¹`.
    pub fn endpoint_issues(&self, p: &Groupoid) -> Vec<Issue> {
        let id = |x: usize| p.element_id(x).to_string();
        let mut issues = Vec::new();
        let mut by_src: BTreeMap<usize, usize> = BTreeMap::new();
        let mut by_tgt: BTreeMap<usize, usize> = BTreeMap::new();
        for w in &self.arcs {
            for (map, key, val, what) in
                [(&mut by_src, p.src(w.arc), w.alpha, "p0"), (&mut by_tgt, p.tgt(w.arc), w.beta, "p1")]
            {
                let first = *map.entry(key).or_insert(val);
                if first != val {
                    issues.push(Issue::new(
                        IssueKind::ArcEndpointMap,
                        vec![id(w.arc), id(first), id(val)],
                        format!("{what} is not determined by the endpoint"),
                    ));
                }
            }
            for &(_, z) in &w.solutions {
                if self.p1(z) != Some(p.inv(w.beta)) {
                    issues.push(Issue::new(
                        IssueKind::ArcEndpointMap,
                        vec![id(w.arc), id(z)],
                        "p1 of the k-partner is not the inverse of p1",
                    ));
                }
            }
        }
        issues
    }
}

/// Exhaustive search for `α·x·β = y·γ·z` over `x, y, z ∈ a_sub` and long
/// arcs `α, β, γ`.
pub fn short_arcs(m: &ToppModel) -> Result<ShortArcTable> {
    let p = &m.p;
    let id = |x: usize| p.element_id(x).to_string();
    let mut arcs = Vec::new();
    for &x in &m.a_sub {
        let mut found: Vec<(usize, usize, usize, usize, usize)> = Vec::new();
        for &alpha in p.incoming(p.src(x)).iter().filter(|a| m.long_arcs.contains(a)) {
            for &beta in p.outgoing(p.tgt(x)).iter().filter(|b| m.long_arcs.contains(b)) {
                let t = p.compose_all(&[alpha, x, beta]).expect("composable");
                for &y in p.outgoing(p.src(t)).iter().filter(|y| m.a_sub.contains(y)) {
                    for &gamma in p.outgoing(p.tgt(y)).iter().filter(|g| m.long_arcs.contains(g)) {
                        let yg = p.compose(y, gamma).expect("composable");
                        let z = match p.compose(p.inv(yg), t) {
                            Some(z) => z,
                            None => continue,
                        };
                        if m.a_sub.contains(&z) {
                            found.push((alpha, beta, gamma, y, z));
                        }
                    }
                }
            }
        }
        let Some(&(alpha, beta, gamma, _, _)) = found.first() else { continue };
        if let Some(&(a2, b2, g2, _, _)) = found.iter().find(|s| (s.0, s.1, s.2) != (alpha, beta, gamma)) {
            let issue = Issue::new(
                IssueKind::ShortArcNotUnique,
                vec![id(x), id(alpha), id(beta), id(gamma), id(a2), id(b2), id(g2)],
                "two long-arc triples solve the arc equation",
            );
            return Err(Error::ModelRejected(issue.to_string()));
        }
        let mut solutions: Vec<(usize, usize)> = found.iter().map(|s| (s.3, s.4)).collect();
        solutions.sort_unstable();
        solutions.dedup();
        arcs.push(ArcWitness { arc: x, alpha, beta, gamma, solutions });
    }
    Ok(ShortArcTable { arcs })
}

/// The finest partition of the arcs in which all `y`s of one arc are
/// identified, and all `z`s. Classes are sorted, each by smallest member.
pub fn equivalence_closure(t: &ShortArcTable) -> Vec<Vec<usize>> {
    let arcs: Vec<usize> = t.arcs.iter().map(|w| w.arc).collect();
    let pos: HashMap<usize, usize> = arcs.iter().enumerate().map(|(i, &x)| (x, i)).collect();
    let mut uf = crate::union_find::UnionFind::new(arcs.len());
    for w in &t.arcs {
        let (y0, z0) = w.solutions[0];
        for &(y, z) in &w.solutions[1..] {
            uf.union(pos[&y0], pos[&y]);
            uf.union(pos[&z0], pos[&z]);
        }
    }
    let labels = uf.min_labels();
    let mut classes: BTreeMap<usize, Vec<usize>> = BTreeMap::new();
    for (i, &x) in arcs.iter().enumerate() {
        classes.entry(labels[i]).or_default().push(x);
    }
    classes.into_values().collect()
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct GReport {
    pub short_arcs: usize,
    /// Classes of arcs after the closure.
    pub arc_classes: usize,
    /// Closure rounds until the quotient stopped changing.
    pub rounds: usize,
    /// Whether distinct arc classes stay distinct in the quotient groupoid.
    pub injective: bool,
    /// Per-instance checks of the construction (well-definedness and
    /// involutivity of `k`, the `i`/`k` identities, the arc equation with
    /// `j = iki`, endpoint maps).
    pub checks: Vec<Issue>,
    /// `validate_delta` on the output.
    pub delta: ValidationReport,
}

impl GReport {
    pub fn passed(&self) -> bool {
        self.checks.is_empty() && self.delta.is_valid()
    }

    pub fn lines(&self) -> Vec<String> {
        let mut out = vec![
            format!("short arcs: {}", self.short_arcs),
            format!("arc classes: {}", self.arc_classes),
            format!("closure rounds: {}", self.rounds),
            format!("arc classes embed: {}", self.injective),
        ];
        out.extend(self.checks.iter().map(|i| format!("check failed: {i}")));
        out.extend(self.delta.lines());
        out.push(format!("result: {}", if self.passed() { "pass" } else { "fail" }));
        out
    }
}

#[derive(Debug, Clone)]
pub struct GOutput {
    pub delta: DeltaGroupoid,
    pub table: ShortArcTable,
    pub report: GReport,
}

/// Computes `(G_X, H_X, k_X)`.
///
/// The model is rejected (an error citing the violated invariant) if it is
/// invalid, if a short arc has two long-arc triples, or if the closure would
/// identify non-parallel elements. Otherwise the output is returned together
/// with a report of every per-instance check; `report.passed()` is the
/// verdict.
///
/// Identifications are iterated to a fixpoint: arcs that become equal in the
/// quotient have their `y`s (and their `z`s) identified as well.
pub fn functor_g(m: &ToppModel) -> Result<GOutput> {
    let rep = validate_topp_model(m);
    if !rep.is_valid() {
        return Err(Error::ModelRejected(rep.lines().join("; ")));
    }
    let table = short_arcs(m)?;
    let p = &m.p;
    let (sub, old_of) = p.subgroupoid(&m.a_sub)?;
    let new_of: HashMap<usize, usize> = old_of.iter().enumerate().map(|(i, &x)| (x, i)).collect();
    let n = sub.num_elements();
    let sid = |x: usize| sub.element_id(x).to_string();

    let mut labels: Vec<usize> = (0..n).collect();
    let mut rounds = 0;
    loop {
        rounds += 1;
        let mut ys: BTreeMap<usize, Vec<usize>> = BTreeMap::new();
        let mut zs: BTreeMap<usize, Vec<usize>> = BTreeMap::new();
        for w in &table.arcs {
            let c = labels[new_of[&w.arc]];
            for &(y, z) in &w.solutions {
                ys.entry(c).or_default().push(new_of[&y]);
                zs.entry(c).or_default().push(new_of[&z]);
            }
        }
        let mut pairs = Vec::new();
        for group in ys.values().chain(zs.values()) {
            for &e in &group[1..] {
                if sub.src(e) != sub.src(group[0]) || sub.tgt(e) != sub.tgt(group[0]) {
                    let issue = Issue::new(
                        IssueKind::NonParallelIdentification,
                        vec![sid(group[0]), sid(e)],
                        "the closure identifies elements with different endpoints",
                    );
                    return Err(Error::ModelRejected(issue.to_string()));
                }
                pairs.push((group[0], e));
            }
        }
        let next = congruence_labels(&sub, &pairs);
        if next == labels {
            break;
        }
        labels = next;
    }
    let (q, proj) = quotient_by_labels(&sub, &labels);
    let cls = |x: usize| proj.element_map[new_of[&x]];
    let qid = |c: usize| q.element_id(c).to_string();

    let mut checks = Vec::new();
    let h: BTreeSet<usize> = table.arcs.iter().map(|w| cls(w.arc)).collect();
    let mut k: BTreeMap<usize, usize> = BTreeMap::new();
    for w in &table.arcs {
        let c = cls(w.arc);
        for &(_, z) in &w.solutions {
            let kz = cls(z);
            let first = *k.entry(c).or_insert(kz);
            if first != kz {
                checks.push(Issue::new(
                    IssueKind::KNotWellDefined,
                    vec![qid(c), qid(first), qid(kz)],
                    "k has two values",
                ));
            }
        }
    }
    for (&c, &kc) in &k {
        if k.get(&kc) != Some(&c) {
            checks.push(Issue::new(IssueKind::KNotInvolutive, vec![qid(c), qid(kc)], "k is not an involution"));
        }
    }
    let kk = |c: usize| k.get(&c).copied();
    let j = |c: usize| kk(q.inv(c)).map(|x| q.inv(x));
    for w in &table.arcs {
        let c = cls(w.arc);
        if j(c) != kk(c).and_then(|x| kk(q.inv(x))) {
            checks.push(Issue::new(IssueKind::DeltaIdentity, vec![qid(c)], "iki and kik differ"));
        }
        for &(y, z) in &w.solutions {
            let (cy, cz) = (cls(y), cls(z));
            if kk(q.inv(c)) != Some(q.inv(cy)) {
                checks.push(Issue::new(
                    IssueKind::KInverseRelation,
                    vec![qid(c), qid(cy)],
                    "k(i[x]) differs from i[y]",
                ));
            }
            if kk(cy) != Some(q.inv(cz)) {
                checks.push(Issue::new(IssueKind::KInverseRelation, vec![qid(cy), qid(cz)], "k[y] differs from i[z]"));
            }
            let lhs = p.compose_all(&[w.alpha, w.arc, w.beta]);
            let rhs = p.compose_all(&[y, w.gamma, z]);
            if lhs.is_none() || lhs != rhs || j(c) != Some(cy) || kk(c) != Some(cz) {
                checks.push(Issue::new(
                    IssueKind::ArcEquation,
                    vec![qid(c), qid(cy), qid(cz)],
                    "p0(x)·x·p1(x) = j(x)·p2(x)·k(x) fails",
                ));
            }
        }
    }
    checks.extend(table.endpoint_issues(p));
    checks.sort();
    checks.dedup();

    let arc_classes: BTreeSet<usize> = table.arcs.iter().map(|w| labels[new_of[&w.arc]]).collect();
    let injective = arc_classes.len() == h.len();
    let delta = DeltaGroupoid::new(q, h, k);
    let delta_report = validate_delta(&delta);
    let report = GReport {
        short_arcs: table.len(),
        arc_classes: arc_classes.len(),
        rounds,
        injective,
        checks,
        delta: delta_report,
    };
    Ok(GOutput { delta, table, report })
}

/// Point `j` of component `i`.
fn point(i: usize, j: usize) -> String {
    format!("v{i}_{j}")
}

/// Simply connected space, subspace with `n` simply connected components,
/// and one long arc per ordered pair of distinct components. Point
/// `v{i}_{j}` of component `i` is where the arc to (or from) component `j`
/// ends; `p` is the pair groupoid on all `n²` points.
pub fn simply_connected_model(n: usize) -> ToppModel {
    assert!(n >= 1);
    let points: Vec<String> = (0..n).flat_map(|i| (0..n).map(move |j| point(i, j))).collect();
    let p = pair_groupoid(&points);
    let at = |a: (usize, usize), b: (usize, usize)| (a.0 * n + a.1) * n * n + b.0 * n + b.1;
    let mut a_sub = BTreeSet::new();
    let mut long_arcs = BTreeSet::new();
    for i in 0..n {
        for j in 0..n {
            for l in 0..n {
                a_sub.insert(at((i, j), (i, l)));
            }
            if i != j {
                long_arcs.insert(at((i, j), (j, i)));
            }
        }
    }
    ToppModel::new(p, a_sub, long_arcs)
}

/// For each object `v`, an element `λ_v ∈ a_sub` from `v` to its new label.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Relabel {
    pub lambda: Vec<usize>,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct RelabelData {
    /// Object id ↦ element id of `λ_v`.
    pub lambda: BTreeMap<String, String>,
}

impl Relabel {
    pub fn identity(m: &ToppModel) -> Self {
        Relabel { lambda: (0..m.p.num_objects()).map(|o| m.p.unit(o)).collect() }
    }

    pub fn from_data(data: &RelabelData, m: &ToppModel) -> Result<Self> {
        let mut lambda = Vec::with_capacity(m.p.num_objects());
        for o in 0..m.p.num_objects() {
            let oid = m.p.object_id(o);
            let eid =
                data.lambda.get(oid).ok_or_else(|| Error::Precondition(format!("no λ given for object {oid}")))?;
            let x = m.p.element_index(eid).ok_or_else(|| Error::Precondition(format!("unknown element {eid}")))?;
            lambda.push(x);
        }
        Ok(Relabel { lambda })
    }

    pub fn to_data(&self, m: &ToppModel) -> RelabelData {
        RelabelData {
            lambda: self
                .lambda
                .iter()
                .enumerate()
                .map(|(o, &x)| (m.p.object_id(o).to_string(), m.p.element_id(x).to_string()))
                .collect(),
        }
    }
}

/// The model with every element `α` replaced by `λ̄_{src α}·α·λ_{tgt α}`.
pub fn transport(m: &ToppModel, r: &Relabel) -> Result<ToppModel> {
    let p = &m.p;
    if r.lambda.len() != p.num_objects() {
        return Err(Error::Precondition("one λ per object is required".into()));
    }
    let mut image = BTreeSet::new();
    for (v, &l) in r.lambda.iter().enumerate() {
        if l >= p.num_elements() || !m.a_sub.contains(&l) {
            return Err(Error::Precondition(format!("λ for {} is not in a_sub", p.object_id(v))));
        }
        if p.src(l) != v {
            return Err(Error::Precondition(format!("λ for {} does not start there", p.object_id(v))));
        }
        image.insert(p.tgt(l));
    }
    if image.len() != p.num_objects() {
        return Err(Error::Precondition("λ targets are not a permutation of the objects".into()));
    }
    let f = |a: usize| {
        let l0 = r.lambda[p.src(a)];
        let l1 = r.lambda[p.tgt(a)];
        p.compose_all(&[p.inv(l0), a, l1]).expect("composable")
    };
    Ok(ToppModel::new(p.clone(), m.a_sub.iter().map(|&x| f(x)).collect(), m.long_arcs.iter().map(|&x| f(x)).collect()))
}

/// Runs `functor_g` on the model and its transport and asks for an
/// isomorphism between the results.
pub fn delta_independence_check(m: &ToppModel, r: &Relabel, limits: IsoSearch) -> Result<bool> {
    let moved = transport(m, r)?;
    let a = functor_g(m)?;
    let b = functor_g(&moved)?;
    Ok(find_isomorphism(&a.delta, &b.delta, limits)?.is_some())
}

/// For the simply connected model on `n` components: every relabeling that
/// permutes the points of each component among themselves, `(n!)^n` in all.
pub fn same_component_relabelings(n: usize) -> Vec<Relabel> {
    let m = simply_connected_model(n);
    let perms = permutations(n);
    let mut out = Vec::new();
    let mut choice = vec![0usize; n];
    loop {
        let lambda = (0..n * n)
            .map(|v| {
                let (i, j) = (v / n, v % n);
                let target = point(i, perms[choice[i]][j]);
                let id = format!("({},{})", point(i, j), target);
                m.p.element_index(&id).expect("pair exists")
            })
            .collect();
        out.push(Relabel { lambda });
        let mut i = 0;
        loop {
            if i == n {
                return out;
            }
            choice[i] += 1;
            if choice[i] < perms.len() {
                break;
            }
            choice[i] = 0;
            i += 1;
        }
    }
}

fn permutations(n: usize) -> Vec<Vec<usize>> {
    if n == 0 {
        return vec![Vec::new()];
    }
    let mut out = Vec::new();
    for p in permutations(n - 1) {
        for pos in 0..n {
            let mut q = p.clone();
            q.insert(pos, n - 1);
            out.push(q);
        }
    }
    out.sort();
    out
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::constructions::x3_delta;
    use crate::delta::check_iki_kik;
    use crate::groupoid::cyclic_group;

    #[test]
    fn simply_connected_model_shapes() {
        for n in 1..=3 {
            let m = simply_connected_model(n);
            assert!(validate_topp_model(&m).is_valid());
            assert_eq!(m.a_sub.len(), n * n * n);
            assert_eq!(m.long_arcs.len(), n * (n - 1));
        }
    }

    #[test]
    fn short_arcs_of_three_components() {
        let m = simply_connected_model(3);
        let t = short_arcs(&m).unwrap();
        assert_eq!(t.len(), 6);
        let p = &m.p;
        for w in &t.arcs {
            assert_eq!(w.solutions.len(), 1);
            // (v_i_a, v_i_b) has y = (v_a_i, v_a_b) and z = (v_b_a, v_b_i).
            let name = p.element_id(w.arc);
            let (y, z) = w.solutions[0];
            let digits = |s: &str| s.chars().filter(char::is_ascii_digit).collect::<String>();
            let d = digits(name);
            let (i, a, b) = (&d[0..1], &d[1..2], &d[3..4]);
            assert_eq!(digits(p.element_id(y)), format!("{a}{i}{a}{b}"));
            assert_eq!(digits(p.element_id(z)), format!("{b}{a}{b}{i}"));
        }
        assert!(t.endpoint_issues(p).is_empty());
        assert_eq!(equivalence_closure(&t).len(), 6);
    }

    #[test]
    fn degenerate_families() {
        assert!(short_arcs(&simply_connected_model(1)).unwrap().is_empty());
        let g = functor_g(&ToppModel::empty_subspace(cyclic_group(3))).unwrap();
        assert_eq!(g.delta.groupoid().num_objects(), 0);
        let c4 = cyclic_group(4);
        let g = functor_g(&ToppModel::whole_space(c4.clone())).unwrap();
        assert!(g.report.passed());
        assert_eq!(g.delta.groupoid(), &c4);
        assert!(g.delta.h().is_empty());
    }

    #[test]
    fn functor_matches_x3() {
        for n in 1..=3 {
            let g = functor_g(&simply_connected_model(n)).unwrap();
            assert!(g.report.passed(), "{:?}", g.report.lines());
            assert_eq!(g.report.rounds, 1);
            assert!(check_iki_kik(&g.delta));
            let iso = find_isomorphism(&g.delta, &x3_delta(n), IsoSearch::default()).unwrap();
            assert!(iso.is_some(), "n = {n}");
        }
    }

    #[test]
    fn invalid_models_are_rejected() {
        let mut m = simply_connected_model(2);
        let l = *m.long_arcs.iter().next().unwrap();
        m.long_arcs.remove(&m.p.inv(l));
        assert!(validate_topp_model(&m).has(IssueKind::LongArcsNotInverseClosed));
        assert!(matches!(functor_g(&m), Err(Error::ModelRejected(_))));
    }

    #[test]
    fn self_inverse_arc_with_distinct_endpoints() {
        // In a one-object group the endpoint condition forces self-inverse
        // long arcs; in a pair groupoid no arc is self-inverse except units.
        let c2 = cyclic_group(2);
        let m = ToppModel::new(c2, [0].into(), [1].into());
        assert!(validate_topp_model(&m).is_valid());
        let p = pair_groupoid(&["a", "b"]);
        let u = p.unit(0);
        let m = ToppModel::new(p.clone(), BTreeSet::new(), [u].into());
        assert!(validate_topp_model(&m).is_valid());
        let mut m = simply_connected_model(2);
        // Swap in a unit as a "long arc" whose endpoints then agree but which
        // is also in a_sub.
        m.long_arcs.insert(m.p.unit(0));
        assert!(validate_topp_model(&m).has(IssueKind::LongArcInA));
    }

    #[test]
    fn two_long_arc_triples_reject_the_model() {
        // Components A = {a0, a1}, B = {ba, b0, b1}, C = {ca, c0, c1}; B and
        // C are joined by two long arcs, so γ is ambiguous for (a0, a1).
        let pts = ["a0", "a1", "ba", "b0", "b1", "ca", "c0", "c1"];
        let p = pair_groupoid(&pts);
        let e = |s: &str, t: &str| p.element_index(&format!("({s},{t})")).unwrap();
        let comps: [&[&str]; 3] = [&["a0", "a1"], &["ba", "b0", "b1"], &["ca", "c0", "c1"]];
        let mut a_sub = BTreeSet::new();
        for c in comps {
            for s in c {
                for t in c {
                    a_sub.insert(e(s, t));
                }
            }
        }
        let mut long = BTreeSet::new();
        for (s, t) in [("a0", "ba"), ("a1", "ca"), ("b0", "c0"), ("b1", "c1")] {
            long.insert(e(s, t));
            long.insert(e(t, s));
        }
        let m = ToppModel::new(p.clone(), a_sub, long);
        assert!(validate_topp_model(&m).is_valid());
        match functor_g(&m) {
            Err(Error::ModelRejected(msg)) => assert!(msg.contains("ShortArcNotUnique"), "{msg}"),
            other => panic!("expected rejection, got {other:?}"),
        }
    }

    #[test]
    fn closure_merges_second_coordinates() {
        let w = |arc, solutions| ArcWitness { arc, alpha: 0, beta: 0, gamma: 0, solutions };
        let t = ShortArcTable {
            arcs: vec![w(1, vec![(2, 3), (2, 4)]), w(2, vec![(1, 2)]), w(3, vec![(1, 1)]), w(4, vec![(1, 1)])],
        };
        assert_eq!(equivalence_closure(&t), vec![vec![1], vec![2], vec![3, 4]]);
    }

    #[test]
    fn relabelings() {
        let m = simply_connected_model(3);
        assert!(delta_independence_check(&m, &Relabel::identity(&m), IsoSearch::default()).unwrap());
        let fixture = same_component_relabelings(3);
        assert_eq!(fixture.len(), 216);
        assert!(delta_independence_check(&m, &fixture[100], IsoSearch::default()).unwrap());
        let mut bad = Relabel::identity(&m);
        bad.lambda[0] = *m.long_arcs.iter().find(|&&l| m.p.src(l) == 0).unwrap_or(&1);
        assert!(matches!(delta_independence_check(&m, &bad, IsoSearch::default()), Err(Error::Precondition(_))));
    }
}
