//! Ring homomorphism certificates between presentations and their checker.
//!
//! A trace starts from a polynomial in the target's free algebra and applies
//! steps `state ← state − coef · left · rule · right`, where `rule` is a
//! target relation or an already proven lemma. Each step records the state
//! it produces; the checker recomputes it and the trace must end at zero.

use super::poly::{Coef, LinComb, LinCombData, Word};
use super::PresentationData;
use super::PresentedRing;
use crate::error::{Error, Result};
use num_bigint::BigInt;
use serde::{Deserialize, Serialize};
use std::fmt;

/// Traces longer than this are rejected.
pub const DEFAULT_STEP_BOUND: usize = 10_000;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Rule {
    /// Index into the target's `all_relations()`.
    Relation(usize),
    /// Index into the certificate's lemma list.
    Lemma(usize),
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Step {
    pub coef: BigInt,
    pub left: Word,
    pub rule: Rule,
    pub right: Word,
    pub result: LinComb,
}

/// A polynomial in the target's free algebra proven to lie in its ideal.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Lemma {
    pub statement: LinComb,
    pub trace: Vec<Step>,
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct RingHomCertificate {
    pub source: PresentedRing,
    pub target: PresentedRing,
    /// Image of each source generator.
    pub images: Vec<LinComb>,
    pub lemmas: Vec<Lemma>,
    /// One trace per entry of `source.all_relations()`.
    pub traces: Vec<Vec<Step>>,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum TraceRef {
    Lemma(usize),
    Relation(usize),
    RoundTripSource(usize),
    RoundTripTarget(usize),
    Shape,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct CheckFailure {
    pub trace: TraceRef,
    /// Index of the failing step; equal to the trace length when the final
    /// state is nonzero.
    pub step: usize,
    pub reason: String,
}

impl fmt::Display for CheckFailure {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{:?} step {}: {}", self.trace, self.step, self.reason)
    }
}

fn fail(trace: TraceRef, step: usize, reason: impl Into<String>) -> CheckFailure {
    CheckFailure { trace, step, reason: reason.into() }
}

impl RingHomCertificate {
    /// Image of a source polynomial.
    pub fn apply(&self, p: &LinComb) -> LinComb {
        p.substitute(&|l| self.images[l].clone())
    }

    pub fn identity(p: &PresentedRing) -> Self {
        let n = p.all_relations().len();
        RingHomCertificate {
            source: p.clone(),
            target: p.clone(),
            images: (0..p.num_generators()).map(LinComb::letter).collect(),
            lemmas: Vec::new(),
            traces: (0..n)
                .map(|i| {
                    vec![Step {
                        coef: BigInt::from(1),
                        left: Word::unit(),
                        rule: Rule::Relation(i),
                        right: Word::unit(),
                        result: LinComb::zero(),
                    }]
                })
                .collect(),
        }
    }
}

/// Replays a trace. `lemma_limit` bounds which lemmas may be cited.
fn run_trace(
    start: LinComb,
    steps: &[Step],
    relations: &[LinComb],
    lemmas: &[Lemma],
    lemma_limit: usize,
    bound: usize,
    id: TraceRef,
) -> std::result::Result<(), CheckFailure> {
    if steps.len() > bound {
        return Err(fail(id, bound, format!("trace has {} steps, bound is {bound}", steps.len())));
    }
    let mut state = start;
    for (i, s) in steps.iter().enumerate() {
        let rule = match s.rule {
            Rule::Relation(r) if r < relations.len() => &relations[r],
            Rule::Lemma(j) if j < lemma_limit && j < lemmas.len() => &lemmas[j].statement,
            _ => return Err(fail(id, i, format!("step cites {:?}, which is not available", s.rule))),
        };
        let before = state.clone();
        state.add_scaled(&-s.coef.clone(), &s.left.0, rule, &s.right.0);
        if state == before {
            return Err(fail(id, i, "step does not change the polynomial"));
        }
        if state != s.result {
            return Err(fail(id, i, "recorded result does not match the rewrite"));
        }
    }
    if !state.is_zero() {
        return Err(fail(id, steps.len(), "trace does not end at zero"));
    }
    Ok(())
}

pub fn verify_certificate(c: &RingHomCertificate, bound: usize) -> std::result::Result<(), CheckFailure> {
    let shape = |msg: &str| fail(TraceRef::Shape, 0, msg);
    if c.images.len() != c.source.num_generators() {
        return Err(shape("one image per source generator is required"));
    }
    let m = c.target.num_generators();
    if c.images.iter().any(|p| p.letters().any(|l| l >= m)) {
        return Err(shape("an image mentions an undeclared target generator"));
    }
    let source_rels = c.source.all_relations();
    if c.traces.len() != source_rels.len() {
        return Err(shape("one trace per source relation is required"));
    }
    let target_rels = c.target.all_relations();
    for (j, lemma) in c.lemmas.iter().enumerate() {
        if lemma.statement.letters().any(|l| l >= m) {
            return Err(fail(TraceRef::Lemma(j), 0, "statement mentions an undeclared generator"));
        }
        run_trace(lemma.statement.clone(), &lemma.trace, &target_rels, &c.lemmas, j, bound, TraceRef::Lemma(j))?;
    }
    for (i, r) in source_rels.iter().enumerate() {
        let start = c.apply(r);
        run_trace(start, &c.traces[i], &target_rels, &c.lemmas, c.lemmas.len(), bound, TraceRef::Relation(i))?;
    }
    Ok(())
}

/// True iff every relation image reduces to zero along its recorded trace.
pub fn check_certificate(c: &RingHomCertificate) -> bool {
    verify_certificate(c, DEFAULT_STEP_BOUND).is_ok()
}

/// Homomorphisms in both directions plus traces showing that both
/// composites fix every generator modulo the relations.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct CertificatePair {
    pub forward: RingHomCertificate,
    pub backward: RingHomCertificate,
    /// `backward(forward(g)) − g` in the source ring, per source generator;
    /// may cite `backward`'s lemmas.
    pub round_trip_source: Vec<Vec<Step>>,
    /// `forward(backward(g)) − g` in the target ring, per target generator;
    /// may cite `forward`'s lemmas.
    pub round_trip_target: Vec<Vec<Step>>,
}

pub fn verify_certificate_pair(p: &CertificatePair, bound: usize) -> std::result::Result<(), CheckFailure> {
    let (f, b) = (&p.forward, &p.backward);
    if f.source != b.target || f.target != b.source {
        return Err(fail(TraceRef::Shape, 0, "the two certificates are not opposite"));
    }
    verify_certificate(f, bound)?;
    verify_certificate(b, bound)?;
    if p.round_trip_source.len() != f.source.num_generators() || p.round_trip_target.len() != f.target.num_generators()
    {
        return Err(fail(TraceRef::Shape, 0, "one round-trip trace per generator is required"));
    }
    let source_rels = f.source.all_relations();
    for (g, steps) in p.round_trip_source.iter().enumerate() {
        let start = b.apply(&f.images[g]).sub(&LinComb::letter(g));
        run_trace(start, steps, &source_rels, &b.lemmas, b.lemmas.len(), bound, TraceRef::RoundTripSource(g))?;
    }
    let target_rels = f.target.all_relations();
    for (g, steps) in p.round_trip_target.iter().enumerate() {
        let start = f.apply(&b.images[g]).sub(&LinComb::letter(g));
        run_trace(start, steps, &target_rels, &f.lemmas, f.lemmas.len(), bound, TraceRef::RoundTripTarget(g))?;
    }
    Ok(())
}

pub fn check_certificate_pair(p: &CertificatePair) -> bool {
    verify_certificate_pair(p, DEFAULT_STEP_BOUND).is_ok()
}

// JSON forms. Words and polynomials use generator names: left/right words
// and lemma statements in the target, images in the target.

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct StepData {
    pub coef: Coef,
    pub left: Vec<String>,
    pub rule: Rule,
    pub right: Vec<String>,
    pub result: LinCombData,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct LemmaData {
    pub statement: LinCombData,
    pub trace: Vec<StepData>,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct CertificateData {
    pub source: PresentationData,
    pub target: PresentationData,
    pub images: Vec<LinCombData>,
    pub lemmas: Vec<LemmaData>,
    pub traces: Vec<Vec<StepData>>,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct CertificatePairData {
    pub forward: CertificateData,
    pub backward: CertificateData,
    pub round_trip_source: Vec<Vec<StepData>>,
    pub round_trip_target: Vec<Vec<StepData>>,
}

fn steps_to_data(steps: &[Step], names: &[String]) -> Vec<StepData> {
    let word = |w: &Word| w.0.iter().map(|&l| names[l].clone()).collect();
    steps
        .iter()
        .map(|s| StepData {
            coef: Coef(s.coef.clone()),
            left: word(&s.left),
            rule: s.rule,
            right: word(&s.right),
            result: s.result.to_data(names),
        })
        .collect()
}

fn steps_from_data(steps: &[StepData], ring: &PresentedRing) -> Result<Vec<Step>> {
    let word = |w: &[String]| -> Result<Word> {
        w.iter()
            .map(|l| ring.generator_index(l).ok_or_else(|| Error::Parse(format!("unknown generator {l:?}"))))
            .collect::<Result<Vec<_>>>()
            .map(Word)
    };
    let lookup = |s: &str| ring.generator_index(s);
    steps
        .iter()
        .map(|s| {
            Ok(Step {
                coef: s.coef.0.clone(),
                left: word(&s.left)?,
                rule: s.rule,
                right: word(&s.right)?,
                result: LinComb::from_data(&s.result, &lookup).map_err(Error::Parse)?,
            })
        })
        .collect()
}

impl RingHomCertificate {
    pub fn to_data(&self) -> CertificateData {
        let names = self.target.names();
        CertificateData {
            source: self.source.to_data(),
            target: self.target.to_data(),
            images: self.images.iter().map(|p| p.to_data(&names)).collect(),
            lemmas: self
                .lemmas
                .iter()
                .map(|l| LemmaData { statement: l.statement.to_data(&names), trace: steps_to_data(&l.trace, &names) })
                .collect(),
            traces: self.traces.iter().map(|t| steps_to_data(t, &names)).collect(),
        }
    }

    pub fn from_data(data: &CertificateData) -> Result<Self> {
        let source = PresentedRing::from_data(&data.source)?;
        let target = PresentedRing::from_data(&data.target)?;
        let lookup = |s: &str| target.generator_index(s);
        let poly = |p: &LinCombData| LinComb::from_data(p, &lookup).map_err(Error::Parse);
        Ok(RingHomCertificate {
            images: data.images.iter().map(poly).collect::<Result<_>>()?,
            lemmas: data
                .lemmas
                .iter()
                .map(|l| Ok(Lemma { statement: poly(&l.statement)?, trace: steps_from_data(&l.trace, &target)? }))
                .collect::<Result<_>>()?,
            traces: data.traces.iter().map(|t| steps_from_data(t, &target)).collect::<Result<_>>()?,
            source,
            target,
        })
    }
}

impl CertificatePair {
    pub fn to_data(&self) -> CertificatePairData {
        let sn = self.forward.source.names();
        let tn = self.forward.target.names();
        CertificatePairData {
            forward: self.forward.to_data(),
            backward: self.backward.to_data(),
            round_trip_source: self.round_trip_source.iter().map(|t| steps_to_data(t, &sn)).collect(),
            round_trip_target: self.round_trip_target.iter().map(|t| steps_to_data(t, &tn)).collect(),
        }
    }

    pub fn from_data(data: &CertificatePairData) -> Result<Self> {
        let forward = RingHomCertificate::from_data(&data.forward)?;
        let backward = RingHomCertificate::from_data(&data.backward)?;
        let rs = data.round_trip_source.iter().map(|t| steps_from_data(t, &forward.source)).collect::<Result<_>>()?;
        let rt = data.round_trip_target.iter().map(|t| steps_from_data(t, &forward.target)).collect::<Result<_>>()?;
        Ok(CertificatePair { forward, backward, round_trip_source: rs, round_trip_target: rt })
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::presented::{named_presentation, NamedPresentation};

    #[test]
    fn identity_on_free_ring_checks() {
        let p = named_presentation(&NamedPresentation::ZFree(vec!["x".into()])).unwrap();
        let c = RingHomCertificate::identity(&p);
        assert!(check_certificate(&c));
        let back = RingHomCertificate::from_data(&c.to_data()).unwrap();
        assert_eq!(back, c);
    }

    #[test]
    fn deleting_a_step_is_caught() {
        let p = named_presentation(&NamedPresentation::ZFree(vec!["x".into()])).unwrap();
        let mut c = RingHomCertificate::identity(&p);
        c.traces[1].clear();
        let err = verify_certificate(&c, DEFAULT_STEP_BOUND).unwrap_err();
        assert_eq!(err.trace, TraceRef::Relation(1));
        assert_eq!(err.step, 0);
    }

    #[test]
    fn wrong_result_and_bound() {
        let p = named_presentation(&NamedPresentation::ZFree(vec!["x".into()])).unwrap();
        let mut c = RingHomCertificate::identity(&p);
        c.traces[0][0].result = LinComb::one();
        assert!(!check_certificate(&c));
        let c = RingHomCertificate::identity(&p);
        assert!(verify_certificate(&c, 0).is_err());
    }
}
