//! Words over generator indices and integer linear combinations of words.

use num_bigint::BigInt;
use num_traits::{One, Signed, Zero};
use serde::{Deserialize, Deserializer, Serialize, Serializer};
use std::cmp::Ordering;
use std::collections::BTreeMap;

/// A word in the generators; the empty word is the ring unit. Ordered by
/// degree, then lexicographically.
#[derive(Debug, Clone, PartialEq, Eq, Hash, Default)]
pub struct Word(pub Vec<usize>);

impl Ord for Word {
    fn cmp(&self, other: &Self) -> Ordering {
        self.0.len().cmp(&other.0.len()).then_with(|| self.0.cmp(&other.0))
    }
}

impl PartialOrd for Word {
    fn partial_cmp(&self, other: &Self) -> Option<Ordering> {
        Some(self.cmp(other))
    }
}

impl Word {
    pub fn unit() -> Self {
        Word(Vec::new())
    }

    pub fn letter(g: usize) -> Self {
        Word(vec![g])
    }

    pub fn len(&self) -> usize {
        self.0.len()
    }

    pub fn is_empty(&self) -> bool {
        self.0.is_empty()
    }

    pub fn concat(parts: &[&[usize]]) -> Word {
        Word(parts.concat())
    }
}

/// A finite `ℤ`-linear combination of words, kept normalized: like terms
/// combined, zero coefficients dropped.
#[derive(Debug, Clone, PartialEq, Eq, Hash, Default)]
pub struct LinComb {
    terms: BTreeMap<Word, BigInt>,
}

impl LinComb {
    pub fn zero() -> Self {
        LinComb::default()
    }

    pub fn one() -> Self {
        LinComb::monomial(BigInt::one(), Word::unit())
    }

    pub fn monomial(coef: BigInt, word: Word) -> Self {
        let mut p = LinComb::zero();
        p.add_term(word, coef);
        p
    }

    pub fn letter(g: usize) -> Self {
        LinComb::monomial(BigInt::one(), Word::letter(g))
    }

    pub fn from_terms(terms: impl IntoIterator<Item = (BigInt, Word)>) -> Self {
        let mut p = LinComb::zero();
        for (c, w) in terms {
            p.add_term(w, c);
        }
        p
    }

    pub fn is_zero(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn len(&self) -> usize {
        self.terms.len()
    }

    pub fn is_empty(&self) -> bool {
        self.terms.is_empty()
    }

    /// Terms in increasing word order.
    pub fn terms(&self) -> impl DoubleEndedIterator<Item = (&Word, &BigInt)> {
        self.terms.iter()
    }

    pub fn coefficient(&self, w: &Word) -> BigInt {
        self.terms.get(w).cloned().unwrap_or_default()
    }

    pub fn add_term(&mut self, word: Word, coef: BigInt) {
        if coef.is_zero() {
            return;
        }
        let slot = self.terms.entry(word).or_default();
        *slot += coef;
        if slot.is_zero() {
            self.terms.retain(|_, c| !c.is_zero());
        }
    }

    /// `self += coef · left · other · right`.
    pub fn add_scaled(&mut self, coef: &BigInt, left: &[usize], other: &LinComb, right: &[usize]) {
        for (w, c) in &other.terms {
            self.add_term(Word::concat(&[left, &w.0, right]), coef * c);
        }
    }

    pub fn neg(&self) -> LinComb {
        LinComb { terms: self.terms.iter().map(|(w, c)| (w.clone(), -c)).collect() }
    }

    pub fn add(&self, other: &LinComb) -> LinComb {
        let mut out = self.clone();
        out.add_scaled(&BigInt::one(), &[], other, &[]);
        out
    }

    pub fn sub(&self, other: &LinComb) -> LinComb {
        let mut out = self.clone();
        out.add_scaled(&-BigInt::one(), &[], other, &[]);
        out
    }

    pub fn mul(&self, other: &LinComb) -> LinComb {
        let mut out = LinComb::zero();
        for (w, c) in &self.terms {
            for (v, d) in &other.terms {
                out.add_term(Word::concat(&[&w.0, &v.0]), c * d);
            }
        }
        out
    }

    pub fn mentions(&self, g: usize) -> bool {
        self.terms.keys().any(|w| w.0.contains(&g))
    }

    /// Number of occurrences of letter `g` over all terms.
    pub fn occurrences(&self, g: usize) -> usize {
        self.terms.keys().map(|w| w.0.iter().filter(|&&l| l == g).count()).sum()
    }

    pub fn letters(&self) -> impl Iterator<Item = usize> + '_ {
        self.terms.keys().flat_map(|w| w.0.iter().copied())
    }

    /// Replaces every letter by its image (a linear combination).
    pub fn substitute(&self, image: &dyn Fn(usize) -> LinComb) -> LinComb {
        let mut out = LinComb::zero();
        for (w, c) in &self.terms {
            let mut prod = LinComb::monomial(c.clone(), Word::unit());
            for &l in &w.0 {
                prod = prod.mul(&image(l));
            }
            out = out.add(&prod);
        }
        out
    }

    /// Renames letters.
    pub fn map_letters(&self, f: &dyn Fn(usize) -> usize) -> LinComb {
        LinComb::from_terms(self.terms.iter().map(|(w, c)| (c.clone(), Word(w.0.iter().map(|&l| f(l)).collect()))))
    }

    /// Normalizes the sign so the leading (largest) term is positive.
    pub fn sign_normalized(&self) -> LinComb {
        match self.terms.iter().next_back() {
            Some((_, c)) if c.is_negative() => self.neg(),
            _ => self.clone(),
        }
    }

    /// Renders with the given generator names, largest term first.
    pub fn render(&self, names: &dyn Fn(usize) -> String) -> String {
        if self.is_zero() {
            return "0".to_string();
        }
        let mut s = String::new();
        for (i, (w, c)) in self.terms.iter().rev().enumerate() {
            let neg = c.is_negative();
            let mag = c.abs();
            if i == 0 {
                if neg {
                    s.push('-');
                }
            } else {
                s.push_str(if neg { " - " } else { " + " });
            }
            let word = w.0.iter().map(|&l| names(l)).collect::<Vec<_>>().join("·");
            match (mag.is_one(), word.is_empty()) {
                (true, true) => s.push('1'),
                (true, false) => s.push_str(&word),
                (false, true) => s.push_str(&mag.to_string()),
                (false, false) => s.push_str(&format!("{mag}{word}")),
            }
        }
        s
    }
}

/// An integer coefficient in JSON: a number when it fits in `i64`, a decimal
/// string otherwise.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Coef(pub BigInt);

impl Serialize for Coef {
    fn serialize<S: Serializer>(&self, s: S) -> Result<S::Ok, S::Error> {
        match i64::try_from(&self.0) {
            Ok(v) => s.serialize_i64(v),
            Err(_) => s.serialize_str(&self.0.to_string()),
        }
    }
}

impl<'de> Deserialize<'de> for Coef {
    fn deserialize<D: Deserializer<'de>>(d: D) -> Result<Self, D::Error> {
        #[derive(Deserialize)]
        #[serde(untagged)]
        enum Raw {
            Int(i64),
            Str(String),
        }
        match Raw::deserialize(d)? {
            Raw::Int(v) => Ok(Coef(BigInt::from(v))),
            Raw::Str(s) => s.parse().map(Coef).map_err(serde::de::Error::custom),
        }
    }
}

/// JSON form of a linear combination: a list of `[coef, [letters...]]`.
pub type LinCombData = Vec<(Coef, Vec<String>)>;

impl LinComb {
    pub fn to_data(&self, names: &[String]) -> LinCombData {
        self.terms.iter().map(|(w, c)| (Coef(c.clone()), w.0.iter().map(|&l| names[l].clone()).collect())).collect()
    }

    pub fn from_data(data: &LinCombData, index: &dyn Fn(&str) -> Option<usize>) -> Result<Self, String> {
        let mut p = LinComb::zero();
        for (c, letters) in data {
            let w = letters
                .iter()
                .map(|l| index(l).ok_or_else(|| format!("unknown generator {l:?}")))
                .collect::<Result<Vec<_>, _>>()?;
            p.add_term(Word(w), c.0.clone());
        }
        Ok(p)
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn int(v: i64) -> BigInt {
        BigInt::from(v)
    }

    #[test]
    fn deglex_order() {
        let mut ws = vec![Word(vec![2]), Word(vec![0, 1]), Word(vec![]), Word(vec![1])];
        ws.sort();
        assert_eq!(ws, vec![Word(vec![]), Word(vec![1]), Word(vec![2]), Word(vec![0, 1])]);
    }

    #[test]
    fn arithmetic_and_cancellation() {
        let x = LinComb::letter(0);
        let one = LinComb::one();
        let p = x.sub(&one).mul(&x.add(&one));
        // (x − 1)(x + 1) = x² − 1 in the free algebra
        assert_eq!(p, LinComb::from_terms([(int(1), Word(vec![0, 0])), (int(-1), Word::unit())]));
        assert!(p.sub(&p).is_zero());
    }

    #[test]
    fn substitution() {
        let p = LinComb::from_terms([(int(2), Word(vec![0, 1])), (int(-1), Word::unit())]);
        let q = p.substitute(&|l| if l == 0 { LinComb::one() } else { LinComb::letter(l) });
        assert_eq!(q, LinComb::from_terms([(int(2), Word(vec![1])), (int(-1), Word::unit())]));
        let names = |l: usize| ["g", "h"][l].to_string();
        assert_eq!(q.render(&names), "2h - 1");
    }

    #[test]
    fn big_coefficients_serialize_as_strings() {
        let big: BigInt = "123456789012345678901234567890".parse().unwrap();
        let s = serde_json::to_string(&Coef(big.clone())).unwrap();
        assert_eq!(s, "\"123456789012345678901234567890\"");
        let back: Coef = serde_json::from_str(&s).unwrap();
        assert_eq!(back.0, big);
        assert_eq!(serde_json::to_string(&Coef(int(-3))).unwrap(), "-3");
    }
}
