//! Finite groupoids given by explicit tables.
//!
//! Identifiers are opaque strings at the boundary; internally objects and
//! elements are dense indices and composition is a dense `n × n` table of
//! optional products. Every axiom is checked by enumeration.

use crate::error::{Error, Result};
use crate::report::{Issue, IssueKind, ValidationReport};
use crate::union_find::UnionFind;
use serde::{Deserialize, Serialize};
use std::collections::{BTreeMap, BTreeSet, HashMap};

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct ElementData {
    pub id: String,
    pub src: String,
    pub tgt: String,
    pub inv: String,
}

/// JSON interchange form of a groupoid. Compositions missing from `comp`
/// are undefined.
#[derive(Debug, Clone, Default, PartialEq, Eq, Serialize, Deserialize)]
pub struct GroupoidData {
    pub objects: Vec<String>,
    pub elements: Vec<ElementData>,
    pub units: BTreeMap<String, String>,
    pub comp: Vec<[String; 3]>,
}

/// Raw tables, indexed. `comp[x * n + y]` is the product `x·y` when defined.
#[derive(Debug, Clone, Default)]
pub struct GroupoidTables {
    pub objects: Vec<String>,
    pub elements: Vec<String>,
    pub src: Vec<usize>,
    pub tgt: Vec<usize>,
    pub inv: Vec<usize>,
    pub units: Vec<usize>,
    pub comp: Vec<Option<usize>>,
}

#[derive(Debug, Clone)]
pub struct Groupoid {
    objects: Vec<String>,
    elements: Vec<String>,
    src: Vec<usize>,
    tgt: Vec<usize>,
    inv: Vec<usize>,
    units: Vec<usize>,
    comp: Vec<Option<usize>>,
    out: Vec<Vec<usize>>,
    into: Vec<Vec<usize>>,
    obj_index: HashMap<String, usize>,
    elem_index: HashMap<String, usize>,
}

impl PartialEq for Groupoid {
    fn eq(&self, other: &Self) -> bool {
        self.objects == other.objects
            && self.elements == other.elements
            && self.src == other.src
            && self.tgt == other.tgt
            && self.inv == other.inv
            && self.units == other.units
            && self.comp == other.comp
    }
}

impl Eq for Groupoid {}

fn index_ids(ids: &[String], what: &str, issues: &mut Vec<Issue>) -> HashMap<String, usize> {
    let mut index = HashMap::with_capacity(ids.len());
    for (i, id) in ids.iter().enumerate() {
        if index.insert(id.clone(), i).is_some() {
            issues.push(Issue::new(IssueKind::DuplicateId, vec![id.clone()], format!("duplicate {what} id")));
        }
    }
    index
}

impl Groupoid {
    pub fn empty() -> Self {
        Groupoid::from_tables(GroupoidTables::default()).expect("empty tables are well formed")
    }

    /// Builds a groupoid from indexed tables. Only structural soundness is
    /// checked here (sizes, index ranges, unique ids); the axioms are the
    /// business of [`validate_groupoid`].
    pub fn from_tables(t: GroupoidTables) -> Result<Self> {
        let mut issues = Vec::new();
        let obj_index = index_ids(&t.objects, "object", &mut issues);
        let elem_index = index_ids(&t.elements, "element", &mut issues);
        let (no, ne) = (t.objects.len(), t.elements.len());
        if t.src.len() != ne || t.tgt.len() != ne || t.inv.len() != ne {
            issues.push(Issue::new(IssueKind::DanglingId, vec![], "src/tgt/inv tables have the wrong length"));
        }
        if t.units.len() != no {
            issues.push(Issue::new(IssueKind::MissingUnit, vec![], "units table has the wrong length"));
        }
        if t.comp.len() != ne * ne {
            issues.push(Issue::new(IssueKind::DanglingId, vec![], "composition table has the wrong size"));
        }
        if !issues.is_empty() {
            return Err(Error::Structural(issues));
        }
        let bad_obj = t.src.iter().chain(&t.tgt).any(|&o| o >= no);
        let bad_elem = t.inv.iter().chain(&t.units).any(|&x| x >= ne) || t.comp.iter().flatten().any(|&x| x >= ne);
        if bad_obj || bad_elem {
            issues.push(Issue::new(IssueKind::DanglingId, vec![], "table entry out of range"));
            return Err(Error::Structural(issues));
        }
        let mut out = vec![Vec::new(); no];
        let mut into = vec![Vec::new(); no];
        for x in 0..ne {
            out[t.src[x]].push(x);
            into[t.tgt[x]].push(x);
        }
        Ok(Groupoid {
            objects: t.objects,
            elements: t.elements,
            src: t.src,
            tgt: t.tgt,
            inv: t.inv,
            units: t.units,
            comp: t.comp,
            out,
            into,
            obj_index,
            elem_index,
        })
    }

    /// Builds a groupoid whose product is given by a rule, defined exactly on
    /// pairs with `tgt(x) = src(y)`.
    pub fn from_rule(
        objects: Vec<String>,
        elements: Vec<(String, usize, usize)>,
        inv: Vec<usize>,
        units: Vec<usize>,
        product: impl Fn(usize, usize) -> usize,
    ) -> Result<Self> {
        let n = elements.len();
        let (mut ids, mut src, mut tgt) = (Vec::with_capacity(n), Vec::with_capacity(n), Vec::with_capacity(n));
        for (id, s, t) in elements {
            ids.push(id);
            src.push(s);
            tgt.push(t);
        }
        let mut comp = vec![None; n * n];
        for x in 0..n {
            for y in 0..n {
                if tgt[x] == src[y] {
                    comp[x * n + y] = Some(product(x, y));
                }
            }
        }
        Groupoid::from_tables(GroupoidTables { objects, elements: ids, src, tgt, inv, units, comp })
    }

    /// Resolves the JSON form; dangling identifiers and missing units are
    /// reported as structural issues.
    pub fn from_data(data: &GroupoidData) -> Result<Self> {
        let mut issues = Vec::new();
        let obj_index = index_ids(&data.objects, "object", &mut issues);
        let ids: Vec<String> = data.elements.iter().map(|e| e.id.clone()).collect();
        let elem_index = index_ids(&ids, "element", &mut issues);
        let obj = |id: &str, issues: &mut Vec<Issue>| -> usize {
            match obj_index.get(id) {
                Some(&o) => o,
                None => {
                    issues.push(Issue::new(IssueKind::DanglingId, vec![id.to_string()], "unknown object"));
                    0
                }
            }
        };
        let elem = |id: &str, issues: &mut Vec<Issue>| -> usize {
            match elem_index.get(id) {
                Some(&x) => x,
                None => {
                    issues.push(Issue::new(IssueKind::DanglingId, vec![id.to_string()], "unknown element"));
                    0
                }
            }
        };
        let mut src = Vec::with_capacity(ids.len());
        let mut tgt = Vec::with_capacity(ids.len());
        let mut inv = Vec::with_capacity(ids.len());
        for e in &data.elements {
            src.push(obj(&e.src, &mut issues));
            tgt.push(obj(&e.tgt, &mut issues));
            inv.push(elem(&e.inv, &mut issues));
        }
        for key in data.units.keys() {
            if !obj_index.contains_key(key) {
                issues.push(Issue::new(IssueKind::DanglingId, vec![key.clone()], "unit declared for unknown object"));
            }
        }
        let mut units = Vec::with_capacity(data.objects.len());
        for o in &data.objects {
            match data.units.get(o) {
                Some(u) => units.push(elem(u, &mut issues)),
                None => {
                    issues.push(Issue::new(IssueKind::MissingUnit, vec![o.clone()], "object has no unit"));
                    units.push(0);
                }
            }
        }
        let n = ids.len();
        let mut comp = vec![None; n * n];
        for [x, y, z] in &data.comp {
            let (xi, yi, zi) = (elem(x, &mut issues), elem(y, &mut issues), elem(z, &mut issues));
            if n == 0 {
                continue;
            }
            let slot = &mut comp[xi * n + yi];
            if slot.is_some() {
                issues.push(Issue::new(
                    IssueKind::DuplicateComposition,
                    vec![x.clone(), y.clone()],
                    "composition listed twice",
                ));
            }
            *slot = Some(zi);
        }
        if !issues.is_empty() {
            issues.sort();
            issues.dedup();
            return Err(Error::Structural(issues));
        }
        Groupoid::from_tables(GroupoidTables {
            objects: data.objects.clone(),
            elements: ids,
            src,
            tgt,
            inv,
            units,
            comp,
        })
    }

    pub fn to_data(&self) -> GroupoidData {
        let n = self.num_elements();
        let mut comp = Vec::new();
        for x in 0..n {
            for y in 0..n {
                if let Some(z) = self.comp[x * n + y] {
                    comp.push([self.elements[x].clone(), self.elements[y].clone(), self.elements[z].clone()]);
                }
            }
        }
        GroupoidData {
            objects: self.objects.clone(),
            elements: (0..n)
                .map(|x| ElementData {
                    id: self.elements[x].clone(),
                    src: self.objects[self.src[x]].clone(),
                    tgt: self.objects[self.tgt[x]].clone(),
                    inv: self.elements[self.inv[x]].clone(),
                })
                .collect(),
            units: self
                .units
                .iter()
                .enumerate()
                .map(|(o, &u)| (self.objects[o].clone(), self.elements[u].clone()))
                .collect(),
            comp,
        }
    }

    pub fn tables(&self) -> GroupoidTables {
        GroupoidTables {
            objects: self.objects.clone(),
            elements: self.elements.clone(),
            src: self.src.clone(),
            tgt: self.tgt.clone(),
            inv: self.inv.clone(),
            units: self.units.clone(),
            comp: self.comp.clone(),
        }
    }

    pub fn num_objects(&self) -> usize {
        self.objects.len()
    }

    pub fn num_elements(&self) -> usize {
        self.elements.len()
    }

    pub fn is_empty(&self) -> bool {
        self.objects.is_empty() && self.elements.is_empty()
    }

    pub fn object_id(&self, o: usize) -> &str {
        &self.objects[o]
    }

    pub fn element_id(&self, x: usize) -> &str {
        &self.elements[x]
    }

    pub fn object_ids(&self) -> &[String] {
        &self.objects
    }

    pub fn element_ids(&self) -> &[String] {
        &self.elements
    }

    pub fn object_index(&self, id: &str) -> Option<usize> {
        self.obj_index.get(id).copied()
    }

    pub fn element_index(&self, id: &str) -> Option<usize> {
        self.elem_index.get(id).copied()
    }

    pub fn src(&self, x: usize) -> usize {
        self.src[x]
    }

    pub fn tgt(&self, x: usize) -> usize {
        self.tgt[x]
    }

    pub fn inv(&self, x: usize) -> usize {
        self.inv[x]
    }

    pub fn unit(&self, o: usize) -> usize {
        self.units[o]
    }

    pub fn is_unit(&self, x: usize) -> bool {
        self.units[self.src[x]] == x
    }

    pub fn compose(&self, x: usize, y: usize) -> Option<usize> {
        self.comp[x * self.num_elements() + y]
    }

    /// Product of a composable sequence, `None` as soon as a step is undefined.
    pub fn compose_all(&self, xs: &[usize]) -> Option<usize> {
        let (&first, rest) = xs.split_first()?;
        rest.iter().try_fold(first, |acc, &y| self.compose(acc, y))
    }

    /// Elements with the given source object.
    pub fn outgoing(&self, o: usize) -> &[usize] {
        &self.out[o]
    }

    /// Elements with the given target object.
    pub fn incoming(&self, o: usize) -> &[usize] {
        &self.into[o]
    }

    /// Elements from `a` to `b`.
    pub fn hom_set(&self, a: usize, b: usize) -> impl Iterator<Item = usize> + '_ {
        self.out[a].iter().copied().filter(move |&x| self.tgt[x] == b)
    }

    /// The full subgroupoid on a closed element set, together with the map
    /// from new element indices to old ones. Objects are those touched by the
    /// set, kept in their original order.
    pub fn subgroupoid(&self, keep: &BTreeSet<usize>) -> Result<(Groupoid, Vec<usize>)> {
        let mut objs: BTreeSet<usize> = BTreeSet::new();
        for &x in keep {
            objs.insert(self.src[x]);
            objs.insert(self.tgt[x]);
        }
        let obj_list: Vec<usize> = objs.into_iter().collect();
        let mut obj_new = vec![usize::MAX; self.num_objects()];
        for (i, &o) in obj_list.iter().enumerate() {
            obj_new[o] = i;
        }
        let elem_list: Vec<usize> = keep.iter().copied().collect();
        let mut elem_new = vec![usize::MAX; self.num_elements()];
        for (i, &x) in elem_list.iter().enumerate() {
            elem_new[x] = i;
        }
        let missing = |x: usize| Error::Precondition(format!("element set not closed at {}", self.elements[x]));
        let n = elem_list.len();
        let mut t = GroupoidTables {
            objects: obj_list.iter().map(|&o| self.objects[o].clone()).collect(),
            elements: elem_list.iter().map(|&x| self.elements[x].clone()).collect(),
            src: elem_list.iter().map(|&x| obj_new[self.src[x]]).collect(),
            tgt: elem_list.iter().map(|&x| obj_new[self.tgt[x]]).collect(),
            inv: Vec::with_capacity(n),
            units: Vec::with_capacity(obj_list.len()),
            comp: vec![None; n * n],
        };
        for &x in &elem_list {
            let i = self.inv[x];
            if elem_new[i] == usize::MAX {
                return Err(missing(i));
            }
            t.inv.push(elem_new[i]);
        }
        for &o in &obj_list {
            let u = self.units[o];
            if elem_new[u] == usize::MAX {
                return Err(missing(u));
            }
            t.units.push(elem_new[u]);
        }
        for (a, &x) in elem_list.iter().enumerate() {
            for (b, &y) in elem_list.iter().enumerate() {
                if let Some(z) = self.compose(x, y) {
                    if elem_new[z] == usize::MAX {
                        return Err(missing(z));
                    }
                    t.comp[a * n + b] = Some(elem_new[z]);
                }
            }
        }
        Ok((Groupoid::from_tables(t)?, elem_list))
    }
}

/// Checks every groupoid axiom instance by enumeration.
pub fn validate_groupoid(g: &Groupoid) -> ValidationReport {
    let mut report = ValidationReport::default();
    let v = &mut report.violations;
    let n = g.num_elements();
    let id = |x: usize| g.element_id(x).to_string();

    for o in 0..g.num_objects() {
        let u = g.unit(o);
        if g.src(u) != o || g.tgt(u) != o {
            v.push(Issue::new(
                IssueKind::UnitEndpoints,
                vec![g.object_id(o).to_string(), id(u)],
                "unit does not start and end at its object",
            ));
        }
    }
    for x in 0..n {
        for y in 0..n {
            let defined = g.compose(x, y);
            let composable = g.tgt(x) == g.src(y);
            match (composable, defined) {
                (true, None) => v.push(Issue::new(
                    IssueKind::CompositionDomain,
                    vec![id(x), id(y)],
                    "composable pair has no product",
                )),
                (false, Some(_)) => v.push(Issue::new(
                    IssueKind::CompositionDomain,
                    vec![id(x), id(y)],
                    "product defined on a non-composable pair",
                )),
                (true, Some(z)) if g.src(z) != g.src(x) || g.tgt(z) != g.tgt(y) => v.push(Issue::new(
                    IssueKind::ProductEndpoints,
                    vec![id(x), id(y), id(z)],
                    "product has the wrong endpoints",
                )),
                _ => {}
            }
        }
    }
    for x in 0..n {
        let (s, t) = (g.src(x), g.tgt(x));
        if g.compose(g.unit(s), x) != Some(x) {
            v.push(Issue::new(IssueKind::LeftUnit, vec![id(x)], "unit(src x)·x ≠ x"));
        }
        if g.compose(x, g.unit(t)) != Some(x) {
            v.push(Issue::new(IssueKind::RightUnit, vec![id(x)], "x·unit(tgt x) ≠ x"));
        }
        let i = g.inv(x);
        if g.src(i) != t || g.tgt(i) != s {
            v.push(Issue::new(IssueKind::InverseEndpoints, vec![id(x), id(i)], "inverse has the wrong endpoints"));
        }
        if g.compose(x, i) != Some(g.unit(s)) {
            v.push(Issue::new(IssueKind::InverseLaw, vec![id(x)], "x·x⁻¹ ≠ unit(src x)"));
        }
        if g.compose(i, x) != Some(g.unit(t)) {
            v.push(Issue::new(IssueKind::InverseLaw, vec![id(x)], "x⁻¹·x ≠ unit(tgt x)"));
        }
    }
    for x in 0..n {
        for &y in g.outgoing(g.tgt(x)) {
            let Some(xy) = g.compose(x, y) else { continue };
            for &z in g.outgoing(g.tgt(y)) {
                let Some(yz) = g.compose(y, z) else { continue };
                let lhs = g.compose(xy, z);
                let rhs = g.compose(x, yz);
                if lhs.is_none() || lhs != rhs {
                    v.push(Issue::new(IssueKind::Associativity, vec![id(x), id(y), id(z)], "(xy)z ≠ x(yz)"));
                }
            }
        }
    }
    report.canonicalize();
    report
}

/// Validates the JSON form, reporting dangling identifiers as structural.
pub fn validate_groupoid_data(data: &GroupoidData) -> ValidationReport {
    match Groupoid::from_data(data) {
        Ok(g) => validate_groupoid(&g),
        Err(Error::Structural(issues)) => ValidationReport { structural: issues, violations: Vec::new() },
        Err(e) => ValidationReport {
            structural: vec![Issue::new(IssueKind::DanglingId, vec![], e.to_string())],
            violations: Vec::new(),
        },
    }
}

/// The pair groupoid: one element `(a,b)` for every ordered pair of objects.
/// An empty object set yields the empty groupoid.
pub fn pair_groupoid<S: AsRef<str>>(objects: &[S]) -> Groupoid {
    let m = objects.len();
    let objs: Vec<String> = objects.iter().map(|s| s.as_ref().to_string()).collect();
    let idx = |a: usize, b: usize| a * m + b;
    let mut elements = Vec::with_capacity(m * m);
    for a in 0..m {
        for b in 0..m {
            elements.push((format!("({},{})", objs[a], objs[b]), a, b));
        }
    }
    let inv = (0..m * m).map(|x| idx(x % m, x / m)).collect();
    let units = (0..m).map(|a| idx(a, a)).collect();
    Groupoid::from_rule(objs, elements, inv, units, |x, y| idx(x / m, y % m))
        .expect("pair groupoid tables are well formed")
}

/// Disjoint union; ids are prefixed with the summand index as `i:id`.
pub fn disjoint_union(gs: &[Groupoid]) -> Groupoid {
    let mut t = GroupoidTables::default();
    let total: usize = gs.iter().map(Groupoid::num_elements).sum();
    t.comp = vec![None; total * total];
    let (mut obj_off, mut elem_off) = (0, 0);
    for (i, g) in gs.iter().enumerate() {
        t.objects.extend(g.objects.iter().map(|o| format!("{i}:{o}")));
        t.elements.extend(g.elements.iter().map(|x| format!("{i}:{x}")));
        t.src.extend(g.src.iter().map(|&o| o + obj_off));
        t.tgt.extend(g.tgt.iter().map(|&o| o + obj_off));
        t.inv.extend(g.inv.iter().map(|&x| x + elem_off));
        t.units.extend(g.units.iter().map(|&x| x + elem_off));
        let n = g.num_elements();
        for x in 0..n {
            for y in 0..n {
                if let Some(z) = g.compose(x, y) {
                    t.comp[(x + elem_off) * total + y + elem_off] = Some(z + elem_off);
                }
            }
        }
        obj_off += g.num_objects();
        elem_off += n;
    }
    Groupoid::from_tables(t).expect("disjoint union of well-formed tables")
}

/// A finite group given by a multiplication rule, as a one-object groupoid.
pub fn group_groupoid(
    elements: Vec<String>,
    identity: usize,
    inverse: impl Fn(usize) -> usize,
    product: impl Fn(usize, usize) -> usize,
) -> Groupoid {
    let n = elements.len();
    let inv = (0..n).map(&inverse).collect();
    let elems = elements.into_iter().map(|id| (id, 0, 0)).collect();
    Groupoid::from_rule(vec!["*".to_string()], elems, inv, vec![identity], product)
        .expect("group tables are well formed")
}

/// The cyclic group of order `n` with elements `t^0 .. t^(n-1)`.
pub fn cyclic_group(n: usize) -> Groupoid {
    assert!(n >= 1);
    let names = (0..n).map(|i| format!("t^{i}")).collect();
    group_groupoid(names, 0, |x| (n - x) % n, |x, y| (x + y) % n)
}

/// Smallest equivalence on elements that contains `pairs`, is closed under
/// inversion, and under multiplication by arbitrary elements on either side.
/// Returns, per element, the smallest index of its class.
pub(crate) fn congruence_labels(g: &Groupoid, pairs: &[(usize, usize)]) -> Vec<usize> {
    let mut uf = UnionFind::new(g.num_elements());
    let mut work: Vec<(usize, usize)> = Vec::new();
    for &(x, y) in pairs {
        if uf.union(x, y) {
            work.push((x, y));
        }
    }
    while let Some((x, y)) = work.pop() {
        let mut push = |uf: &mut UnionFind, a: usize, b: usize| {
            if uf.union(a, b) {
                work.push((a, b));
            }
        };
        push(&mut uf, g.inv(x), g.inv(y));
        for &b in g.outgoing(g.tgt(x)) {
            if let (Some(xb), Some(yb)) = (g.compose(x, b), g.compose(y, b)) {
                push(&mut uf, xb, yb);
            }
        }
        for &a in g.incoming(g.src(x)) {
            if let (Some(ax), Some(ay)) = (g.compose(a, x), g.compose(a, y)) {
                push(&mut uf, ax, ay);
            }
        }
    }
    uf.min_labels()
}

/// Quotient of `g` by the congruence generated by `pairs`. Objects are
/// unchanged; each class is named after its smallest member.
pub fn quotient_by_congruence(g: &Groupoid, pairs: &[(usize, usize)]) -> Result<(Groupoid, GroupoidMorphism)> {
    for &(x, y) in pairs {
        if g.src(x) != g.src(y) || g.tgt(x) != g.tgt(y) {
            return Err(Error::NonParallel(g.element_id(x).to_string(), g.element_id(y).to_string()));
        }
    }
    let labels = congruence_labels(g, pairs);
    Ok(quotient_by_labels(g, &labels))
}

/// Quotient along a precomputed congruence labelling (`labels[x]` is the
/// smallest member of the class of `x`).
pub(crate) fn quotient_by_labels(g: &Groupoid, labels: &[usize]) -> (Groupoid, GroupoidMorphism) {
    let reps: Vec<usize> = (0..g.num_elements()).filter(|&x| labels[x] == x).collect();
    let mut class = vec![0; g.num_elements()];
    let mut rep_pos = HashMap::new();
    for (i, &r) in reps.iter().enumerate() {
        rep_pos.insert(r, i);
    }
    for x in 0..g.num_elements() {
        class[x] = rep_pos[&labels[x]];
    }
    let elements = reps.iter().map(|&r| (g.element_id(r).to_string(), g.src(r), g.tgt(r))).collect();
    let inv = reps.iter().map(|&r| class[g.inv(r)]).collect();
    let units = (0..g.num_objects()).map(|o| class[g.unit(o)]).collect();
    let q = Groupoid::from_rule(g.objects.clone(), elements, inv, units, |a, b| {
        class[g.compose(reps[a], reps[b]).expect("composable representatives")]
    })
    .expect("quotient tables are well formed");
    let proj = GroupoidMorphism { object_map: (0..g.num_objects()).collect(), element_map: class };
    (q, proj)
}

/// A functor between two groupoids, stored as index maps. The groupoids
/// themselves are passed alongside when checking.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct GroupoidMorphism {
    pub object_map: Vec<usize>,
    pub element_map: Vec<usize>,
}

#[derive(Debug, Clone, Default, PartialEq, Eq, Serialize, Deserialize)]
pub struct MorphismData {
    pub object_map: BTreeMap<String, String>,
    pub element_map: BTreeMap<String, String>,
}

impl GroupoidMorphism {
    pub fn identity(g: &Groupoid) -> Self {
        GroupoidMorphism { object_map: (0..g.num_objects()).collect(), element_map: (0..g.num_elements()).collect() }
    }

    /// `self` followed by `next`.
    pub fn then(&self, next: &GroupoidMorphism) -> GroupoidMorphism {
        GroupoidMorphism {
            object_map: self.object_map.iter().map(|&o| next.object_map[o]).collect(),
            element_map: self.element_map.iter().map(|&x| next.element_map[x]).collect(),
        }
    }

    pub fn to_data(&self, dom: &Groupoid, cod: &Groupoid) -> MorphismData {
        MorphismData {
            object_map: self
                .object_map
                .iter()
                .enumerate()
                .map(|(o, &p)| (dom.object_id(o).to_string(), cod.object_id(p).to_string()))
                .collect(),
            element_map: self
                .element_map
                .iter()
                .enumerate()
                .map(|(x, &y)| (dom.element_id(x).to_string(), cod.element_id(y).to_string()))
                .collect(),
        }
    }

    pub fn from_data(data: &MorphismData, dom: &Groupoid, cod: &Groupoid) -> Result<Self> {
        let mut issues = Vec::new();
        let mut object_map = Vec::with_capacity(dom.num_objects());
        for o in dom.object_ids() {
            match data.object_map.get(o).and_then(|p| cod.object_index(p)) {
                Some(p) => object_map.push(p),
                None => {
                    issues.push(Issue::new(IssueKind::DanglingId, vec![o.clone()], "object image missing or unknown"))
                }
            }
        }
        let mut element_map = Vec::with_capacity(dom.num_elements());
        for x in dom.element_ids() {
            match data.element_map.get(x).and_then(|y| cod.element_index(y)) {
                Some(y) => element_map.push(y),
                None => {
                    issues.push(Issue::new(IssueKind::DanglingId, vec![x.clone()], "element image missing or unknown"))
                }
            }
        }
        if issues.is_empty() {
            Ok(GroupoidMorphism { object_map, element_map })
        } else {
            Err(Error::Structural(issues))
        }
    }
}

/// Every failure of `m` to be a functor `dom → cod`.
pub fn check_groupoid_morphism(dom: &Groupoid, cod: &Groupoid, m: &GroupoidMorphism) -> Vec<Issue> {
    let mut v = Vec::new();
    if m.object_map.len() != dom.num_objects()
        || m.element_map.len() != dom.num_elements()
        || m.object_map.iter().any(|&o| o >= cod.num_objects())
        || m.element_map.iter().any(|&x| x >= cod.num_elements())
    {
        v.push(Issue::new(IssueKind::DanglingId, vec![], "morphism tables do not match the groupoids"));
        return v;
    }
    let id = |x: usize| dom.element_id(x).to_string();
    for x in 0..dom.num_elements() {
        let fx = m.element_map[x];
        if cod.src(fx) != m.object_map[dom.src(x)] || cod.tgt(fx) != m.object_map[dom.tgt(x)] {
            v.push(Issue::new(IssueKind::MorphismEndpoints, vec![id(x)], "image has the wrong endpoints"));
        }
        if m.element_map[dom.inv(x)] != cod.inv(fx) {
            v.push(Issue::new(IssueKind::MorphismInverse, vec![id(x)], "f(x⁻¹) ≠ f(x)⁻¹"));
        }
    }
    for o in 0..dom.num_objects() {
        if m.element_map[dom.unit(o)] != cod.unit(m.object_map[o]) {
            v.push(Issue::new(IssueKind::MorphismUnit, vec![dom.object_id(o).to_string()], "unit not sent to a unit"));
        }
    }
    for x in 0..dom.num_elements() {
        for &y in dom.outgoing(dom.tgt(x)) {
            let Some(xy) = dom.compose(x, y) else { continue };
            if cod.compose(m.element_map[x], m.element_map[y]) != Some(m.element_map[xy]) {
                v.push(Issue::new(IssueKind::MorphismComposition, vec![id(x), id(y)], "f(xy) ≠ f(x)f(y)"));
            }
        }
    }
    v.sort();
    v
}

pub fn is_groupoid_morphism(dom: &Groupoid, cod: &Groupoid, m: &GroupoidMorphism) -> bool {
    check_groupoid_morphism(dom, cod, m).is_empty()
}

/// All functors `dom → cod` accepted by `accept`, in lexicographic order of
/// (object images, element images). The search visits at most `node_cap`
/// partial assignments.
pub fn enumerate_morphisms(
    dom: &Groupoid,
    cod: &Groupoid,
    node_cap: u64,
    mut accept: impl FnMut(&GroupoidMorphism) -> bool,
) -> Result<Vec<GroupoidMorphism>> {
    // Variables: objects first, then non-unit elements. A composition
    // triple is checked at the position of its last-assigned member.
    let no = dom.num_objects();
    let non_units: Vec<usize> = (0..dom.num_elements()).filter(|&x| !dom.is_unit(x)).collect();
    let mut pos = vec![0usize; dom.num_elements()];
    for o in 0..no {
        pos[dom.unit(o)] = o;
    }
    for (i, &x) in non_units.iter().enumerate() {
        pos[x] = no + i;
    }
    let total = no + non_units.len();
    let mut checks: Vec<Vec<(usize, usize, usize)>> = vec![Vec::new(); total];
    for x in 0..dom.num_elements() {
        for &y in dom.outgoing(dom.tgt(x)) {
            if let Some(z) = dom.compose(x, y) {
                let p = pos[x].max(pos[y]).max(pos[z]);
                checks[p].push((x, y, z));
            }
        }
    }
    let mut inverse_checks: Vec<Vec<usize>> = vec![Vec::new(); total];
    for x in 0..dom.num_elements() {
        let p = pos[x].max(pos[dom.inv(x)]);
        inverse_checks[p].push(x);
    }

    struct State<'a> {
        dom: &'a Groupoid,
        cod: &'a Groupoid,
        non_units: &'a [usize],
        checks: &'a [Vec<(usize, usize, usize)>],
        inverse_checks: &'a [Vec<usize>],
        m: GroupoidMorphism,
        nodes: u64,
        cap: u64,
        out: Vec<GroupoidMorphism>,
    }

    fn consistent(s: &State, p: usize) -> bool {
        let f = &s.m.element_map;
        s.checks[p].iter().all(|&(x, y, z)| s.cod.compose(f[x], f[y]) == Some(f[z]))
            && s.inverse_checks[p].iter().all(|&x| f[s.dom.inv(x)] == s.cod.inv(f[x]))
    }

    fn go(s: &mut State, p: usize, accept: &mut dyn FnMut(&GroupoidMorphism) -> bool) -> Result<()> {
        s.nodes += 1;
        if s.nodes > s.cap {
            return Err(Error::CapExceeded(format!("morphism search visited more than {} nodes", s.cap)));
        }
        let no = s.dom.num_objects();
        if p == no + s.non_units.len() {
            if accept(&s.m) {
                s.out.push(s.m.clone());
            }
            return Ok(());
        }
        if p < no {
            for c in 0..s.cod.num_objects() {
                s.m.object_map[p] = c;
                s.m.element_map[s.dom.unit(p)] = s.cod.unit(c);
                if consistent(s, p) {
                    go(s, p + 1, accept)?;
                }
            }
        } else {
            let x = s.non_units[p - no];
            let (a, b) = (s.m.object_map[s.dom.src(x)], s.m.object_map[s.dom.tgt(x)]);
            let cands: Vec<usize> = s.cod.hom_set(a, b).collect();
            for y in cands {
                s.m.element_map[x] = y;
                if consistent(s, p) {
                    go(s, p + 1, accept)?;
                }
            }
        }
        Ok(())
    }

    if no > 0 && cod.num_objects() == 0 {
        return Ok(Vec::new());
    }
    let mut state = State {
        dom,
        cod,
        non_units: &non_units,
        checks: &checks,
        inverse_checks: &inverse_checks,
        m: GroupoidMorphism { object_map: vec![0; no], element_map: vec![0; dom.num_elements()] },
        nodes: 0,
        cap: node_cap,
        out: Vec::new(),
    };
    go(&mut state, 0, &mut accept)?;
    Ok(state.out)
}
