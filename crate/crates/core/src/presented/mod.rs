//! Finitely presented associative unital rings over `ℤ`.
//!
//! A generator may carry a formal inverse, which is another generator (or
//! itself). The relations `g·g⁻¹ − 1` are not stored with the user relations
//! but are always part of [`PresentedRing::all_relations`], after them and in
//! generator order; certificates index into that combined list.

mod certificate;
mod poly;
mod simplify;
mod universal;

pub use certificate::{
    check_certificate, check_certificate_pair, verify_certificate, verify_certificate_pair, CertificateData,
    CertificatePair, CertificatePairData, CheckFailure, Lemma, RingHomCertificate, Rule, Step, TraceRef,
    DEFAULT_STEP_BOUND,
};
pub use poly::{Coef, LinComb, LinCombData, Word};
pub use simplify::{simplify, Simplified};
pub use universal::{universal_property_check, universal_ring, UniversalCheck};

use crate::error::{Error, Result};
use num_bigint::BigInt;
use serde::{Deserialize, Serialize};
use std::collections::HashMap;

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Generator {
    pub name: String,
    /// Index of the formal inverse; `Some(self)` for an involution.
    pub inverse: Option<usize>,
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct PresentedRing {
    generators: Vec<Generator>,
    relations: Vec<LinComb>,
    inverse_rank: Vec<Option<usize>>,
}

impl PresentedRing {
    pub fn new(generators: Vec<Generator>, relations: Vec<LinComb>) -> Result<Self> {
        let m = generators.len();
        let mut seen = HashMap::new();
        for (i, g) in generators.iter().enumerate() {
            if seen.insert(g.name.as_str(), i).is_some() {
                return Err(Error::Parse(format!("generator {:?} declared twice", g.name)));
            }
            if let Some(p) = g.inverse {
                if p >= m || generators[p].inverse != Some(i) {
                    return Err(Error::Parse(format!("inverse of generator {:?} is not symmetric", g.name)));
                }
            }
        }
        for r in &relations {
            if let Some(l) = r.letters().find(|&l| l >= m) {
                return Err(Error::Parse(format!("relation mentions undeclared generator {l}")));
            }
        }
        let mut rank = 0;
        let inverse_rank = generators
            .iter()
            .map(|g| {
                g.inverse.map(|_| {
                    rank += 1;
                    rank - 1
                })
            })
            .collect();
        Ok(PresentedRing { generators, relations, inverse_rank })
    }

    /// The ring with one element, presented by the relation `1 = 0`.
    pub fn zero_ring() -> Self {
        PresentedRing::new(Vec::new(), vec![LinComb::one()]).expect("static presentation")
    }

    pub fn integers() -> Self {
        PresentedRing::new(Vec::new(), Vec::new()).expect("static presentation")
    }

    pub fn generators(&self) -> &[Generator] {
        &self.generators
    }

    pub fn num_generators(&self) -> usize {
        self.generators.len()
    }

    pub fn name(&self, g: usize) -> &str {
        &self.generators[g].name
    }

    pub fn names(&self) -> Vec<String> {
        self.generators.iter().map(|g| g.name.clone()).collect()
    }

    pub fn generator_index(&self, name: &str) -> Option<usize> {
        self.generators.iter().position(|g| g.name == name)
    }

    pub fn partner(&self, g: usize) -> Option<usize> {
        self.generators[g].inverse
    }

    pub fn is_invertible(&self, g: usize) -> bool {
        self.generators[g].inverse.is_some()
    }

    /// Number of invertible generators counted up to pairing with their
    /// formal inverses.
    pub fn num_invertible_pairs(&self) -> usize {
        (0..self.num_generators()).filter(|&g| matches!(self.partner(g), Some(p) if p >= g)).count()
    }

    /// User relations, without the materialized inverse relations.
    pub fn relations(&self) -> &[LinComb] {
        &self.relations
    }

    /// `g·g⁻¹ − 1`.
    pub fn inverse_relation(&self, g: usize) -> Option<LinComb> {
        self.partner(g).map(|p| {
            let mut r = LinComb::monomial(BigInt::from(1), Word(vec![g, p]));
            r.add_term(Word::unit(), BigInt::from(-1));
            r
        })
    }

    /// Position of `g`'s inverse relation in [`all_relations`](Self::all_relations).
    pub fn inverse_relation_index(&self, g: usize) -> Option<usize> {
        self.inverse_rank[g].map(|r| self.relations.len() + r)
    }

    pub fn all_relations(&self) -> Vec<LinComb> {
        let mut out = self.relations.clone();
        out.extend((0..self.num_generators()).filter_map(|g| self.inverse_relation(g)));
        out
    }

    /// Cancels adjacent `g·g⁻¹` pairs until none remain.
    pub fn free_reduce(&self, p: &LinComb) -> LinComb {
        LinComb::from_terms(p.terms().map(|(w, c)| (c.clone(), self.free_reduce_word(w))))
    }

    pub fn free_reduce_word(&self, w: &Word) -> Word {
        let mut out: Vec<usize> = Vec::with_capacity(w.len());
        for &l in &w.0 {
            match out.last() {
                Some(&prev) if self.partner(prev) == Some(l) => {
                    out.pop();
                }
                _ => out.push(l),
            }
        }
        Word(out)
    }

    pub fn render(&self, p: &LinComb) -> String {
        p.render(&|l| self.name(l).to_string())
    }

    /// One line per generator and relation, for reports.
    pub fn describe(&self) -> Vec<String> {
        let mut out = Vec::new();
        for (i, g) in self.generators.iter().enumerate() {
            match g.inverse {
                Some(p) if p == i => out.push(format!("generator {} (self-inverse)", g.name)),
                Some(p) => out.push(format!("generator {} (inverse {})", g.name, self.name(p))),
                None => out.push(format!("generator {}", g.name)),
            }
        }
        for r in &self.relations {
            out.push(format!("relation {} = 0", self.render(r)));
        }
        out
    }

    pub fn to_data(&self) -> PresentationData {
        let names = self.names();
        PresentationData {
            generators: self
                .generators
                .iter()
                .map(|g| GeneratorData {
                    id: g.name.clone(),
                    invertible: g.inverse.is_some(),
                    inverse: g.inverse.map(|p| names[p].clone()),
                })
                .collect(),
            relations: self.relations.iter().map(|r| r.to_data(&names)).collect(),
        }
    }

    /// Invertible generators listed without an explicit inverse get a fresh
    /// partner named `<id>^-1`, appended after the listed generators.
    pub fn from_data(data: &PresentationData) -> Result<Self> {
        let mut gens: Vec<Generator> =
            data.generators.iter().map(|g| Generator { name: g.id.clone(), inverse: None }).collect();
        let mut index: HashMap<String, usize> = HashMap::new();
        for (i, g) in gens.iter().enumerate() {
            if index.insert(g.name.clone(), i).is_some() {
                return Err(Error::Parse(format!("generator {:?} declared twice", g.name)));
            }
        }
        for (i, g) in data.generators.iter().enumerate() {
            if !g.invertible {
                if g.inverse.is_some() {
                    return Err(Error::Parse(format!("generator {:?} has an inverse but is not invertible", g.id)));
                }
                continue;
            }
            let pname = g.inverse.clone().unwrap_or_else(|| format!("{}^-1", g.id));
            let p = match index.get(&pname) {
                Some(&p) => p,
                None => {
                    gens.push(Generator { name: pname.clone(), inverse: None });
                    index.insert(pname, gens.len() - 1);
                    gens.len() - 1
                }
            };
            for (a, b) in [(i, p), (p, i)] {
                match gens[a].inverse {
                    Some(q) if q != b => {
                        return Err(Error::Parse(format!("conflicting inverses for generator {:?}", gens[a].name)))
                    }
                    _ => gens[a].inverse = Some(b),
                }
            }
        }
        let lookup = |s: &str| index.get(s).copied();
        let relations = data
            .relations
            .iter()
            .map(|r| LinComb::from_data(r, &lookup).map_err(Error::Parse))
            .collect::<Result<Vec<_>>>()?;
        PresentedRing::new(gens, relations)
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct GeneratorData {
    pub id: String,
    #[serde(default)]
    pub invertible: bool,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub inverse: Option<String>,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct PresentationData {
    pub generators: Vec<GeneratorData>,
    #[serde(default)]
    pub relations: Vec<LinCombData>,
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub enum NamedPresentation {
    Zero,
    Z,
    /// `ℤ` of the free group on the given letters.
    ZFree(Vec<String>),
    /// `ZFree(letters)` with the given element (a combination of the letters
    /// and their inverses) made invertible by a fresh generator `t`.
    LocalizedZFree(Vec<String>, LinCombData),
}

impl NamedPresentation {
    /// `z`, `zero`, `zfree<k>`, `localized-zfree<k>` (letters `x0..x{k-1}`,
    /// localized at `x0 − 1`).
    pub fn parse(s: &str) -> Result<Self> {
        let letters = |k: &str| -> Result<Vec<String>> {
            let k: usize = k.parse().map_err(|_| Error::Parse(format!("bad rank in presentation name {s:?}")))?;
            Ok((0..k).map(|i| format!("x{i}")).collect())
        };
        if s == "z" {
            Ok(NamedPresentation::Z)
        } else if s == "zero" {
            Ok(NamedPresentation::Zero)
        } else if let Some(k) = s.strip_prefix("localized-zfree") {
            let xs = letters(k)?;
            if xs.is_empty() {
                return Err(Error::Parse("localized-zfree needs at least one letter".into()));
            }
            let w = vec![(Coef(BigInt::from(1)), vec![xs[0].clone()]), (Coef(BigInt::from(-1)), vec![])];
            Ok(NamedPresentation::LocalizedZFree(xs, w))
        } else if let Some(k) = s.strip_prefix("zfree") {
            Ok(NamedPresentation::ZFree(letters(k)?))
        } else {
            Err(Error::Parse(format!("unknown presentation name {s:?}")))
        }
    }
}

pub fn named_presentation(spec: &NamedPresentation) -> Result<PresentedRing> {
    match spec {
        NamedPresentation::Zero => Ok(PresentedRing::zero_ring()),
        NamedPresentation::Z => Ok(PresentedRing::integers()),
        NamedPresentation::ZFree(s) => free_group_ring(s, Vec::new()),
        NamedPresentation::LocalizedZFree(s, w) => {
            let base = free_group_ring(s, Vec::new())?;
            let w = LinComb::from_data(w, &|l| base.generator_index(l)).map_err(Error::Parse)?;
            let mut gens = base.generators.clone();
            let t = gens.len();
            gens.push(Generator { name: "t".into(), inverse: None });
            let one = LinComb::one();
            let tl = LinComb::letter(t);
            let rels = vec![tl.mul(&w).sub(&one), w.mul(&tl).sub(&one)];
            PresentedRing::new(gens, rels)
        }
    }
}

fn free_group_ring(letters: &[String], relations: Vec<LinComb>) -> Result<PresentedRing> {
    let mut gens = Vec::new();
    for (i, s) in letters.iter().enumerate() {
        gens.push(Generator { name: s.clone(), inverse: Some(2 * i + 1) });
        gens.push(Generator { name: format!("{s}^-1"), inverse: Some(2 * i) });
    }
    PresentedRing::new(gens, relations)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn named_shapes() {
        let z = named_presentation(&NamedPresentation::Z).unwrap();
        assert_eq!(z.num_generators(), 0);
        assert!(z.all_relations().is_empty());
        let f2 = named_presentation(&NamedPresentation::parse("zfree2").unwrap()).unwrap();
        assert_eq!(f2.num_generators(), 4);
        assert_eq!(f2.num_invertible_pairs(), 2);
        assert_eq!(f2.all_relations().len(), 4);
        let loc = named_presentation(&NamedPresentation::parse("localized-zfree4").unwrap()).unwrap();
        assert_eq!(loc.num_generators(), 9);
        assert_eq!(loc.relations().len(), 2);
        assert_eq!(loc.render(&loc.relations()[0]), "t·x0 - t - 1");
        assert!(NamedPresentation::parse("zfreex").is_err());
    }

    #[test]
    fn free_reduction() {
        let f2 = named_presentation(&NamedPresentation::ZFree(vec!["a".into(), "b".into()])).unwrap();
        let w = Word(vec![0, 2, 3, 1, 2]);
        assert_eq!(f2.free_reduce_word(&w), Word(vec![2]));
    }

    #[test]
    fn json_round_trip_and_implicit_inverses() {
        let json = r#"{"generators":[{"id":"a","invertible":true},{"id":"s","invertible":true,"inverse":"s"},{"id":"t"}],
                       "relations":[[[2,["a","t"]],[-1,[]]],[["99999999999999999999",["s"]]]]}"#;
        let data: PresentationData = serde_json::from_str(json).unwrap();
        let p = PresentedRing::from_data(&data).unwrap();
        assert_eq!(p.names(), vec!["a", "s", "t", "a^-1"]);
        assert_eq!(p.partner(0), Some(3));
        assert_eq!(p.partner(1), Some(1));
        assert_eq!(p.inverse_relation_index(1), Some(3));
        let back = PresentedRing::from_data(&p.to_data()).unwrap();
        assert_eq!(back, p);
    }

    #[test]
    fn asymmetric_inverse_rejected() {
        let json = r#"{"generators":[{"id":"a","invertible":true,"inverse":"b"},{"id":"b","invertible":true,"inverse":"c"},{"id":"c","invertible":true,"inverse":"b"}]}"#;
        let data: PresentationData = serde_json::from_str(json).unwrap();
        assert!(PresentedRing::from_data(&data).is_err());
    }
}
