//! Tietze-style simplification with certificates.
//!
//! A generator `g` is eliminated using a relation `C = a·g + rest` with
//! `a = ±1`, where `g` occurs only in that term and its formal inverse does
//! not occur at all, giving `g = E_g := −a·rest`:
//!
//! * non-invertible `g`: nothing else is needed;
//! * self-inverse `g`: the relation `E_g·E_g − 1` is added;
//! * `g` paired with `g'`: `rest` must be `b·w` with `b = ±1` and `w` a word
//!   in invertible letters, and `g'` is eliminated with `E_g' = c·w⁻¹`, so
//!   that the inverse relations of the pair become trivial.
//!
//! Every relation is tracked from its origin: the history records each
//! free reduction (citing an inverse relation) and each substitution (citing
//! the lemma `g − E_g`). Both certificates are read off these histories.

use super::certificate::{CertificatePair, Lemma, RingHomCertificate, Rule, Step};
use super::poly::{LinComb, Word};
use super::{Generator, PresentedRing};
use num_bigint::BigInt;
use num_traits::{One, Signed};
use std::collections::HashMap;

#[derive(Debug, Clone)]
pub struct Simplified {
    pub ring: PresentedRing,
    /// `forward`: original → simplified; `backward`: simplified → original.
    pub certificates: CertificatePair,
}

#[derive(Debug, Clone, Copy)]
enum Src {
    /// Inverse relation of a letter.
    Inv(usize),
    /// `g − E_g`.
    Elim(usize),
}

#[derive(Debug, Clone)]
struct RawStep {
    coef: BigInt,
    left: Vec<usize>,
    src: Src,
    right: Vec<usize>,
}

#[derive(Debug, Clone)]
struct Tracked {
    /// Index into the original `all_relations()`.
    source: usize,
    value: LinComb,
    history: Vec<RawStep>,
}

struct Old<'a> {
    ring: &'a PresentedRing,
    elim: Vec<Option<LinComb>>,
}

impl Old<'_> {
    fn rule(&self, src: Src) -> LinComb {
        match src {
            Src::Inv(a) => self.ring.inverse_relation(a).expect("invertible letter"),
            Src::Elim(g) => LinComb::letter(g).sub(self.elim[g].as_ref().expect("eliminated letter")),
        }
    }

    fn push(&self, t: &mut Tracked, step: RawStep) {
        t.value.add_scaled(&-step.coef.clone(), &step.left, &self.rule(step.src), &step.right);
        t.history.push(step);
    }

    fn reduce(&self, t: &mut Tracked) {
        while let Some((c, w, i)) = first_cancellation(self.ring, &t.value) {
            let step = RawStep { coef: c, left: w[..i].to_vec(), src: Src::Inv(w[i]), right: w[i + 2..].to_vec() };
            self.push(t, step);
        }
    }

    fn expand(&self, t: &mut Tracked, letters: &[usize]) {
        while let Some((c, w, i)) = first_occurrence(&t.value, |l| letters.contains(&l)) {
            let step = RawStep { coef: c, left: w[..i].to_vec(), src: Src::Elim(w[i]), right: w[i + 1..].to_vec() };
            self.push(t, step);
        }
    }
}

fn first_cancellation(ring: &PresentedRing, p: &LinComb) -> Option<(BigInt, Vec<usize>, usize)> {
    p.terms().find_map(|(w, c)| {
        w.0.windows(2).position(|pair| ring.partner(pair[0]) == Some(pair[1])).map(|i| (c.clone(), w.0.clone(), i))
    })
}

fn first_occurrence(p: &LinComb, pred: impl Fn(usize) -> bool) -> Option<(BigInt, Vec<usize>, usize)> {
    p.terms().find_map(|(w, c)| w.0.iter().position(|&l| pred(l)).map(|i| (c.clone(), w.0.clone(), i)))
}

fn inverse_word(ring: &PresentedRing, w: &[usize]) -> Vec<usize> {
    w.iter().rev().map(|&l| ring.partner(l).expect("invertible letter")).collect()
}

/// Replays steps against a fixed list of relations and lemma statements,
/// recording intermediate states.
struct Builder<'a> {
    state: LinComb,
    steps: Vec<Step>,
    relations: &'a [LinComb],
    lemmas: &'a [LinComb],
}

impl<'a> Builder<'a> {
    fn new(start: LinComb, relations: &'a [LinComb], lemmas: &'a [LinComb]) -> Self {
        Builder { state: start, steps: Vec::new(), relations, lemmas }
    }

    fn push(&mut self, coef: BigInt, left: Vec<usize>, rule: Rule, right: Vec<usize>) {
        let poly = match rule {
            Rule::Relation(i) => &self.relations[i],
            Rule::Lemma(j) => &self.lemmas[j],
        };
        let before = self.state.clone();
        self.state.add_scaled(&-coef.clone(), &left, poly, &right);
        // Steps that change nothing (e.g. citing a lemma whose statement is
        // 0) are left out; the checker refuses them.
        if self.state == before {
            return;
        }
        self.steps.push(Step { coef, left: Word(left), rule, right: Word(right), result: self.state.clone() });
    }

    /// `coef · P(left) · rule · P(right)` with polynomial contexts, one step
    /// per pair of context terms.
    fn push_expanded(&mut self, coef: &BigInt, left: &LinComb, rule: Rule, right: &LinComb) {
        for (u, a) in left.terms() {
            for (v, b) in right.terms() {
                self.push(coef * a * b, u.0.clone(), rule, v.0.clone());
            }
        }
    }

    fn reduce(&mut self, ring: &PresentedRing) {
        while let Some((c, w, i)) = first_cancellation(ring, &self.state) {
            let rule = Rule::Relation(ring.inverse_relation_index(w[i]).expect("invertible letter"));
            self.push(c, w[..i].to_vec(), rule, w[i + 2..].to_vec());
        }
    }

    fn expand(&mut self, lemma_of: &HashMap<usize, usize>) {
        while let Some((c, w, i)) = first_occurrence(&self.state, |l| lemma_of.contains_key(&l)) {
            self.push(c, w[..i].to_vec(), Rule::Lemma(lemma_of[&w[i]]), w[i + 1..].to_vec());
        }
    }

    fn finish(self) -> Vec<Step> {
        debug_assert!(self.state.is_zero(), "generated trace does not close");
        self.steps
    }
}

#[derive(Debug, Clone)]
struct Stage {
    relation: usize,
    snapshot: LinComb,
    history_len: usize,
    g: usize,
    a: BigInt,
    /// Partner letter, `c`, and `w` for a paired elimination.
    paired: Option<(usize, BigInt, Vec<usize>)>,
    /// Tracked index of the added `E_g·E_g − 1` relation.
    square: Option<usize>,
}

enum Candidate {
    Plain(LinComb),
    Paired(usize, BigInt, Vec<usize>),
}

fn find_candidate(ring: &PresentedRing, tracked: &[Tracked]) -> Option<(usize, usize, BigInt, Candidate)> {
    for (ti, t) in tracked.iter().enumerate() {
        let c = &t.value;
        if c.is_zero() {
            continue;
        }
        let mut letters: Vec<usize> = c.letters().collect();
        letters.sort_unstable();
        letters.dedup();
        for g in letters {
            let a = c.coefficient(&Word::letter(g));
            if !a.abs().is_one() || c.occurrences(g) != 1 {
                continue;
            }
            let mut rest = c.clone();
            rest.add_term(Word::letter(g), -a.clone());
            match ring.partner(g) {
                None => return Some((ti, g, a.clone(), Candidate::Plain(rest.neg().scaled(&a)))),
                Some(p) if p == g => return Some((ti, g, a.clone(), Candidate::Plain(rest.neg().scaled(&a)))),
                Some(p) => {
                    if c.mentions(p) || rest.len() != 1 {
                        continue;
                    }
                    let (w, b) = rest.terms().next().expect("one term");
                    if !b.abs().is_one() || w.0.iter().any(|&l| !ring.is_invertible(l)) {
                        continue;
                    }
                    return Some((ti, g, a.clone(), Candidate::Paired(p, -(&a * b), w.0.clone())));
                }
            }
        }
    }
    None
}

impl LinComb {
    fn scaled(&self, c: &BigInt) -> LinComb {
        LinComb::from_terms(self.terms().map(|(w, d)| (c * d, w.clone())))
    }
}

/// Best-effort simplification; the order of moves is fixed, so the output is
/// deterministic.
pub fn simplify(p: &PresentedRing) -> Simplified {
    let m = p.num_generators();
    let all = p.all_relations();
    let mut old = Old { ring: p, elim: vec![None; m] };
    let mut tracked: Vec<Tracked> =
        all.iter().enumerate().map(|(i, r)| Tracked { source: i, value: r.clone(), history: Vec::new() }).collect();
    for t in tracked.iter_mut() {
        old.reduce(t);
    }

    let mut stages: Vec<Stage> = Vec::new();
    while let Some((ti, g, a, cand)) = find_candidate(p, &tracked) {
        let mut stage = Stage {
            relation: ti,
            snapshot: tracked[ti].value.clone(),
            history_len: tracked[ti].history.len(),
            g,
            a,
            paired: None,
            square: None,
        };
        let mut letters = vec![g];
        match cand {
            Candidate::Plain(e) => {
                old.elim[g] = Some(e);
                if p.partner(g) == Some(g) {
                    let src = p.inverse_relation_index(g).expect("invertible letter");
                    tracked.push(Tracked { source: src, value: all[src].clone(), history: Vec::new() });
                    stage.square = Some(tracked.len() - 1);
                }
            }
            Candidate::Paired(q, c, w) => {
                old.elim[g] = Some(LinComb::monomial(c.clone(), Word(w.clone())));
                old.elim[q] = Some(LinComb::monomial(c.clone(), Word(inverse_word(p, &w))));
                letters.push(q);
                stage.paired = Some((q, c, w));
            }
        }
        for t in tracked.iter_mut() {
            old.expand(t, &letters);
            old.reduce(t);
        }
        stages.push(stage);
    }

    // The simplified ring.
    let survivors: Vec<usize> = (0..m).filter(|&g| old.elim[g].is_none()).collect();
    let mut new_index = vec![usize::MAX; m];
    for (i, &g) in survivors.iter().enumerate() {
        new_index[g] = i;
    }
    let gens: Vec<Generator> = survivors
        .iter()
        .map(|&g| Generator { name: p.name(g).to_string(), inverse: p.partner(g).map(|q| new_index[q]) })
        .collect();
    let bare = PresentedRing::new(gens.clone(), Vec::new()).expect("survivors keep their partners");
    let mut inverse_keys: HashMap<LinComb, usize> = HashMap::new();
    for n in 0..bare.num_generators() {
        if let Some(r) = bare.inverse_relation(n) {
            inverse_keys.entry(r).or_insert(n);
        }
    }
    let renamed: Vec<LinComb> = tracked.iter().map(|t| t.value.map_letters(&|l| new_index[l])).collect();
    let mut user: Vec<LinComb> = Vec::new();
    let mut user_index: HashMap<LinComb, usize> = HashMap::new();
    for v in &renamed {
        let key = v.sign_normalized();
        if !key.is_zero() && !inverse_keys.contains_key(&key) && !user_index.contains_key(&key) {
            user_index.insert(key.clone(), user.len());
            user.push(key);
        }
    }
    let new = PresentedRing::new(gens, user).expect("letters are survivors");
    // Where each tracked relation ended up: sign and index in new.all_relations().
    let location: Vec<Option<(BigInt, usize)>> = renamed
        .iter()
        .map(|v| {
            let key = v.sign_normalized();
            let sign = if &key == v { BigInt::one() } else { -BigInt::one() };
            if key.is_zero() {
                None
            } else if let Some(&j) = user_index.get(&key) {
                Some((sign, j))
            } else {
                let n = inverse_keys[&key];
                Some((sign, new.inverse_relation_index(n).expect("invertible")))
            }
        })
        .collect();

    let forward = forward_certificate(p, &new, &old, &stages, &tracked, &location, &survivors, &new_index);
    let (backward, lemma_of) = backward_certificate(p, &new, &old, &stages, &tracked, &location, &survivors);

    // backward ∘ forward fixes every original generator.
    let old_lemmas: Vec<LinComb> = backward.lemmas.iter().map(|l| l.statement.clone()).collect();
    let round_trip_source = (0..m)
        .map(|g| {
            let start = backward.apply(&forward.images[g]).sub(&LinComb::letter(g));
            let mut b = Builder::new(start, &all, &old_lemmas);
            if let Some(&j) = lemma_of.get(&g) {
                b.push(-BigInt::one(), Vec::new(), Rule::Lemma(j), Vec::new());
                b.expand(&lemma_of);
            }
            b.finish()
        })
        .collect();
    // forward ∘ backward is the identity on generators on the nose.
    let round_trip_target = vec![Vec::new(); new.num_generators()];

    Simplified { ring: new, certificates: CertificatePair { forward, backward, round_trip_source, round_trip_target } }
}

#[allow(clippy::too_many_arguments)]
fn forward_certificate(
    p: &PresentedRing,
    new: &PresentedRing,
    old: &Old,
    stages: &[Stage],
    tracked: &[Tracked],
    location: &[Option<(BigInt, usize)>],
    survivors: &[usize],
    new_index: &[usize],
) -> RingHomCertificate {
    let m = p.num_generators();
    let mut image = vec![LinComb::zero(); m];
    for &g in survivors {
        image[g] = LinComb::letter(new_index[g]);
    }
    for st in stages.iter().rev() {
        let mut letters = vec![st.g];
        letters.extend(st.paired.as_ref().map(|(q, _, _)| *q));
        for x in letters {
            let e = old.elim[x].as_ref().expect("eliminated");
            image[x] = e.substitute(&|l| image[l].clone());
        }
    }
    let image_word = |w: &[usize]| w.iter().fold(LinComb::one(), |acc, &l| acc.mul(&image[l]));
    let new_rels = new.all_relations();

    // Lemma per invertible original letter: image(x)·image(x⁻¹) − 1.
    // Survivors first, then eliminated letters, latest stage first, so that
    // every lemma only cites letters still present when its letter left.
    let mut lemma_order: Vec<usize> = survivors.iter().copied().filter(|&g| p.is_invertible(g)).collect();
    for st in stages.iter().rev() {
        if p.is_invertible(st.g) {
            lemma_order.push(st.g);
        }
        lemma_order.extend(st.paired.as_ref().map(|(q, _, _)| *q));
    }
    let stage_of: HashMap<usize, &Stage> = stages
        .iter()
        .flat_map(|st| {
            let mut v = vec![(st.g, st)];
            v.extend(st.paired.as_ref().map(|(q, _, _)| (*q, st)));
            v
        })
        .collect();
    let mut lemma_of: HashMap<usize, usize> = HashMap::new();
    let mut statements: Vec<LinComb> = Vec::new();
    let mut lemmas: Vec<Lemma> = Vec::new();
    for x in lemma_order {
        let xp = p.partner(x).expect("invertible");
        let statement = image[x].mul(&image[xp]).sub(&LinComb::one());
        let trace = {
            let mut b = Builder::new(statement.clone(), &new_rels, &statements);
            match stage_of.get(&x) {
                None => {
                    let n = new_index[x];
                    b.push(
                        BigInt::one(),
                        Vec::new(),
                        Rule::Relation(new.inverse_relation_index(n).unwrap()),
                        Vec::new(),
                    );
                }
                Some(st) => match &st.paired {
                    Some((q, _, w)) => {
                        let w = if x == st.g {
                            w.clone()
                        } else {
                            debug_assert_eq!(x, *q);
                            inverse_word(p, w)
                        };
                        for j in (0..w.len()).rev() {
                            let left = image_word(&w[..j]);
                            let right = image_word(&inverse_word(p, &w[..j]));
                            b.push_expanded(&BigInt::one(), &left, Rule::Lemma(lemma_of[&w[j]]), &right);
                        }
                    }
                    None => {
                        let d = st.square.expect("self-inverse elimination adds a square relation");
                        if let Some((s, j)) = &location[d] {
                            b.push(s.clone(), Vec::new(), Rule::Relation(*j), Vec::new());
                        }
                        for raw in &tracked[d].history {
                            if let Src::Inv(a) = raw.src {
                                let (l, r) = (image_word(&raw.left), image_word(&raw.right));
                                b.push_expanded(&raw.coef, &l, Rule::Lemma(lemma_of[&a]), &r);
                            }
                        }
                    }
                },
            }
            b.finish()
        };
        lemma_of.insert(x, lemmas.len());
        statements.push(statement.clone());
        lemmas.push(Lemma { statement, trace });
    }

    let all = p.all_relations();
    let traces = all
        .iter()
        .enumerate()
        .map(|(i, r)| {
            let start = r.substitute(&|l| image[l].clone());
            let mut b = Builder::new(start, &new_rels, &statements);
            if let Some((s, j)) = &location[i] {
                b.push(s.clone(), Vec::new(), Rule::Relation(*j), Vec::new());
            }
            for raw in &tracked[i].history {
                if let Src::Inv(a) = raw.src {
                    let (l, r) = (image_word(&raw.left), image_word(&raw.right));
                    b.push_expanded(&raw.coef, &l, Rule::Lemma(lemma_of[&a]), &r);
                }
            }
            b.finish()
        })
        .collect();

    RingHomCertificate { source: p.clone(), target: new.clone(), images: image, lemmas, traces }
}

/// Returns the certificate and, for each eliminated letter, the index of its
/// lemma `g − E_g`.
fn backward_certificate(
    p: &PresentedRing,
    new: &PresentedRing,
    old: &Old,
    stages: &[Stage],
    tracked: &[Tracked],
    location: &[Option<(BigInt, usize)>],
    survivors: &[usize],
) -> (RingHomCertificate, HashMap<usize, usize>) {
    let all = p.all_relations();
    let mut statements: Vec<LinComb> = Vec::new();
    let mut lemmas: Vec<Lemma> = Vec::new();
    let mut lemma_of: HashMap<usize, usize> = HashMap::new();

    let rule_of = |src: Src, lemma_of: &HashMap<usize, usize>| match src {
        Src::Inv(a) => Rule::Relation(p.inverse_relation_index(a).expect("invertible")),
        Src::Elim(g) => Rule::Lemma(lemma_of[&g]),
    };
    // Replays a tracked history backwards: `scale · value` reduced to zero.
    let replay = |b: &mut Builder, t: &Tracked, upto: usize, scale: &BigInt, lemma_of: &HashMap<usize, usize>| {
        b.push(scale.clone(), Vec::new(), Rule::Relation(t.source), Vec::new());
        for raw in &t.history[..upto] {
            b.push(-(scale * &raw.coef), raw.left.clone(), rule_of(raw.src, lemma_of), raw.right.clone());
        }
    };

    for st in stages {
        let t = &tracked[st.relation];
        let trace = {
            let mut b = Builder::new(st.snapshot.clone(), &all, &statements);
            replay(&mut b, t, st.history_len, &BigInt::one(), &lemma_of);
            b.finish()
        };
        let c_index = lemmas.len();
        statements.push(st.snapshot.clone());
        lemmas.push(Lemma { statement: st.snapshot.clone(), trace });

        let lg = LinComb::letter(st.g).sub(old.elim[st.g].as_ref().expect("eliminated"));
        let trace = {
            let mut b = Builder::new(lg.clone(), &all, &statements);
            b.push(st.a.clone(), Vec::new(), Rule::Lemma(c_index), Vec::new());
            b.finish()
        };
        lemma_of.insert(st.g, lemmas.len());
        statements.push(lg.clone());
        lemmas.push(Lemma { statement: lg, trace });

        if let Some((q, c, w)) = &st.paired {
            let lq = LinComb::letter(*q).sub(old.elim[*q].as_ref().expect("eliminated"));
            let trace = {
                let mut b = Builder::new(lq.clone(), &all, &statements);
                b.push(-c.clone(), vec![*q], Rule::Lemma(lemma_of[&st.g]), inverse_word(p, w));
                b.reduce(p);
                b.finish()
            };
            lemma_of.insert(*q, lemmas.len());
            statements.push(lq.clone());
            lemmas.push(Lemma { statement: lq, trace });
        }
    }

    let images: Vec<LinComb> = survivors.iter().map(|&g| LinComb::letter(g)).collect();
    let n_user = new.relations().len();
    let traces = new
        .all_relations()
        .iter()
        .enumerate()
        .map(|(j, r)| {
            let start = r.substitute(&|l| images[l].clone());
            let mut b = Builder::new(start, &all, &statements);
            if j < n_user {
                let (ti, (s, _)) = location
                    .iter()
                    .enumerate()
                    .find_map(|(ti, loc)| loc.as_ref().filter(|(_, k)| *k == j).map(|l| (ti, l)))
                    .expect("every user relation comes from a tracked relation");
                replay(&mut b, &tracked[ti], tracked[ti].history.len(), s, &lemma_of);
            } else {
                let n = (0..new.num_generators())
                    .find(|&n| new.inverse_relation_index(n) == Some(j))
                    .expect("inverse relation");
                let rule = Rule::Relation(p.inverse_relation_index(survivors[n]).expect("invertible"));
                b.push(BigInt::one(), Vec::new(), rule, Vec::new());
            }
            b.finish()
        })
        .collect();

    (RingHomCertificate { source: new.clone(), target: p.clone(), images, lemmas, traces }, lemma_of)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::presented::{check_certificate, named_presentation, verify_certificate_pair, NamedPresentation};

    fn ring(json: &str) -> PresentedRing {
        PresentedRing::from_data(&serde_json::from_str(json).unwrap()).unwrap()
    }

    #[test]
    fn free_ring_is_left_alone() {
        let f = named_presentation(&NamedPresentation::parse("zfree2").unwrap()).unwrap();
        let s = simplify(&f);
        assert_eq!(s.ring, f);
        verify_certificate_pair(&s.certificates, 10_000).unwrap();
    }

    #[test]
    fn eliminates_a_defined_generator() {
        // y = x·x, so the ring is ℤ[x].
        let p = ring(r#"{"generators":[{"id":"x"},{"id":"y"}],"relations":[[[1,["y"]],[-1,["x","x"]]]]}"#);
        let s = simplify(&p);
        assert_eq!(s.ring.names(), vec!["x"]);
        assert!(s.ring.relations().is_empty());
        verify_certificate_pair(&s.certificates, 10_000).unwrap();
    }

    #[test]
    fn paired_elimination_through_a_word() {
        // c = a·b in ℤF(a,b,c) leaves ℤF(a,b).
        let p = ring(
            r#"{"generators":[{"id":"a","invertible":true},{"id":"b","invertible":true},{"id":"c","invertible":true}],
                "relations":[[[1,["a","b"]],[-1,["c"]]]]}"#,
        );
        let s = simplify(&p);
        assert_eq!(s.ring.num_invertible_pairs(), 2);
        assert!(s.ring.relations().is_empty());
        verify_certificate_pair(&s.certificates, 10_000).unwrap();
    }

    #[test]
    fn self_inverse_elimination_keeps_the_square() {
        // s self-inverse with s = 1 − x: the relation (1 − x)² − 1 survives.
        let p = ring(
            r#"{"generators":[{"id":"s","invertible":true,"inverse":"s"},{"id":"x"}],
                "relations":[[[1,["s"]],[1,["x"]],[-1,[]]]]}"#,
        );
        let s = simplify(&p);
        assert_eq!(s.ring.names(), vec!["x"]);
        assert_eq!(s.ring.relations().len(), 1);
        assert_eq!(s.ring.render(&s.ring.relations()[0]), "x·x - 2x");
        assert!(check_certificate(&s.certificates.forward));
        assert!(check_certificate(&s.certificates.backward));
        verify_certificate_pair(&s.certificates, 10_000).unwrap();
    }

    #[test]
    fn coefficient_two_blocks_elimination() {
        let p = ring(r#"{"generators":[{"id":"x"}],"relations":[[[2,["x"]],[-1,[]]]]}"#);
        let s = simplify(&p);
        assert_eq!(s.ring, p);
        verify_certificate_pair(&s.certificates, 10_000).unwrap();
    }
}
