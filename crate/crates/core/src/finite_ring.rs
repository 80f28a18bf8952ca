//! Finite unital rings as addition/multiplication tables, their unit groups,
//! and a small literal syntax (`zmod:n`, `mat:k:<ring>`, `prod:<ring>,<ring>`)
//! for naming test rings.

use crate::error::{Error, Result};
use num_bigint::BigInt;
use num_traits::{ToPrimitive, Zero};
use serde::{Deserialize, Serialize};
use std::collections::BTreeMap;

pub use crate::homs::{count_ring_homs, enumerate_ring_homs, hom_signature, HomBudget};

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct FiniteRing {
    label: String,
    names: Vec<String>,
    add: Vec<usize>,
    mul: Vec<usize>,
    neg: Vec<usize>,
    zero: usize,
    one: usize,
    /// Exponent of the additive group.
    exponent: u64,
}

/// Table-given ring: entries are indices into `elements`.
#[derive(Debug, Clone, Default, PartialEq, Eq, Serialize, Deserialize)]
pub struct FiniteRingData {
    pub elements: Vec<String>,
    pub add: Vec<Vec<usize>>,
    pub mul: Vec<Vec<usize>>,
}

impl FiniteRing {
    /// Builds a ring from full tables and checks every ring axiom.
    pub fn from_tables(label: impl Into<String>, names: Vec<String>, add: Vec<usize>, mul: Vec<usize>) -> Result<Self> {
        let n = names.len();
        if n == 0 || add.len() != n * n || mul.len() != n * n || add.iter().chain(&mul).any(|&x| x >= n) {
            return Err(Error::Precondition("ring tables are not n × n over the element set".into()));
        }
        let zero = (0..n)
            .find(|&z| (0..n).all(|x| add[z * n + x] == x && add[x * n + z] == x))
            .ok_or_else(|| Error::Precondition("no additive identity".into()))?;
        let one = (0..n)
            .find(|&e| (0..n).all(|x| mul[e * n + x] == x && mul[x * n + e] == x))
            .ok_or_else(|| Error::Precondition("no multiplicative identity".into()))?;
        let mut neg = vec![usize::MAX; n];
        for x in 0..n {
            neg[x] = (0..n)
                .find(|&y| add[x * n + y] == zero)
                .ok_or_else(|| Error::Precondition(format!("{} has no additive inverse", names[x])))?;
        }
        let mut r = FiniteRing { label: label.into(), names, add, mul, neg, zero, one, exponent: 1 };
        let issues = ring_axiom_failures(&r);
        if let Some(first) = issues.first() {
            return Err(Error::Precondition(format!("not a unital ring: {first}")));
        }
        r.exponent = (0..n).map(|x| r.additive_order(x)).fold(1, lcm);
        Ok(r)
    }

    pub fn from_data(data: &FiniteRingData) -> Result<Self> {
        let n = data.elements.len();
        if data.add.len() != n || data.mul.len() != n || data.add.iter().chain(&data.mul).any(|row| row.len() != n) {
            return Err(Error::Parse("ring tables must be square over the element list".into()));
        }
        FiniteRing::from_tables("table", data.elements.clone(), data.add.concat(), data.mul.concat())
    }

    pub fn to_data(&self) -> FiniteRingData {
        let n = self.size();
        FiniteRingData {
            elements: self.names.clone(),
            add: self.add.chunks(n).map(<[usize]>::to_vec).collect(),
            mul: self.mul.chunks(n).map(<[usize]>::to_vec).collect(),
        }
    }

    pub fn with_label(mut self, label: impl Into<String>) -> Self {
        self.label = label.into();
        self
    }

    pub fn label(&self) -> &str {
        &self.label
    }

    pub fn size(&self) -> usize {
        self.names.len()
    }

    pub fn name(&self, x: usize) -> &str {
        &self.names[x]
    }

    pub fn index_of(&self, name: &str) -> Option<usize> {
        self.names.iter().position(|n| n == name)
    }

    pub fn zero(&self) -> usize {
        self.zero
    }

    pub fn one(&self) -> usize {
        self.one
    }

    pub fn add(&self, a: usize, b: usize) -> usize {
        self.add[a * self.size() + b]
    }

    pub fn mul(&self, a: usize, b: usize) -> usize {
        self.mul[a * self.size() + b]
    }

    pub fn neg(&self, a: usize) -> usize {
        self.neg[a]
    }

    pub fn sub(&self, a: usize, b: usize) -> usize {
        self.add(a, self.neg(b))
    }

    /// `1 − x`.
    pub fn one_minus(&self, x: usize) -> usize {
        self.sub(self.one, x)
    }

    fn additive_order(&self, x: usize) -> u64 {
        let mut acc = x;
        let mut k = 1;
        while acc != self.zero {
            acc = self.add(acc, x);
            k += 1;
        }
        k
    }

    /// `m·x` for a machine integer `m ≥ 0`, by doubling.
    fn times(&self, mut m: u64, x: usize) -> usize {
        let (mut acc, mut base) = (self.zero, x);
        while m > 0 {
            if m & 1 == 1 {
                acc = self.add(acc, base);
            }
            base = self.add(base, base);
            m >>= 1;
        }
        acc
    }

    /// Image of an integer under the unique unital map `ℤ → R`.
    pub fn scalar(&self, c: &BigInt) -> usize {
        let e = BigInt::from(self.exponent);
        let mut m = c % &e;
        if m < BigInt::zero() {
            m += &e;
        }
        self.times(m.to_u64().expect("reduced below the additive exponent"), self.one)
    }

    /// Multiplicative inverse, if `x` is a unit.
    pub fn inverse(&self, x: usize) -> Option<usize> {
        (0..self.size()).find(|&y| self.mul(x, y) == self.one && self.mul(y, x) == self.one)
    }

    pub fn is_unit(&self, x: usize) -> bool {
        self.inverse(x).is_some()
    }
}

fn gcd(a: u64, b: u64) -> u64 {
    if b == 0 {
        a
    } else {
        gcd(b, a % b)
    }
}

fn lcm(a: u64, b: u64) -> u64 {
    a / gcd(a, b) * b
}

/// Every failed ring-axiom instance, as human-readable lines (empty = ring).
pub fn ring_axiom_failures(r: &FiniteRing) -> Vec<String> {
    let n = r.size();
    let mut out = Vec::new();
    let nm = |x: usize| r.name(x);
    for a in 0..n {
        for b in 0..n {
            if r.add(a, b) != r.add(b, a) {
                out.push(format!("addition not commutative at ({}, {})", nm(a), nm(b)));
            }
            for c in 0..n {
                if r.add(r.add(a, b), c) != r.add(a, r.add(b, c)) {
                    out.push(format!("addition not associative at ({}, {}, {})", nm(a), nm(b), nm(c)));
                }
                if r.mul(r.mul(a, b), c) != r.mul(a, r.mul(b, c)) {
                    out.push(format!("multiplication not associative at ({}, {}, {})", nm(a), nm(b), nm(c)));
                }
                if r.mul(a, r.add(b, c)) != r.add(r.mul(a, b), r.mul(a, c)) {
                    out.push(format!("left distributivity fails at ({}, {}, {})", nm(a), nm(b), nm(c)));
                }
                if r.mul(r.add(a, b), c) != r.add(r.mul(a, c), r.mul(b, c)) {
                    out.push(format!("right distributivity fails at ({}, {}, {})", nm(a), nm(b), nm(c)));
                }
            }
        }
    }
    out
}

/// `ℤ/n`, elements named `0 .. n-1`.
pub fn zmod(n: usize) -> FiniteRing {
    assert!(n >= 2, "zmod needs n ≥ 2");
    let names = (0..n).map(|i| i.to_string()).collect();
    let mut add = Vec::with_capacity(n * n);
    let mut mul = Vec::with_capacity(n * n);
    for a in 0..n {
        for b in 0..n {
            add.push((a + b) % n);
            mul.push((a * b) % n);
        }
    }
    FiniteRing::from_tables(format!("zmod:{n}"), names, add, mul).expect("ℤ/n is a ring")
}

/// `k × k` matrices over `r`, elements named `[[..],[..]]` row by row.
pub fn matrix_ring(r: &FiniteRing, k: usize) -> FiniteRing {
    assert!(k >= 1, "matrix size must be positive");
    let q = r.size();
    let cells = k * k;
    let count = q.pow(cells as u32);
    let decode = |mut i: usize| -> Vec<usize> {
        let mut v = vec![0; cells];
        for c in (0..cells).rev() {
            v[c] = i % q;
            i /= q;
        }
        v
    };
    let encode = |v: &[usize]| v.iter().fold(0, |acc, &d| acc * q + d);
    let mats: Vec<Vec<usize>> = (0..count).map(decode).collect();
    let names = mats
        .iter()
        .map(|m| {
            let rows: Vec<String> = m
                .chunks(k)
                .map(|row| format!("[{}]", row.iter().map(|&x| r.name(x)).collect::<Vec<_>>().join(",")))
                .collect();
            format!("[{}]", rows.join(","))
        })
        .collect();
    let mut add = Vec::with_capacity(count * count);
    let mut mul = Vec::with_capacity(count * count);
    for a in &mats {
        for b in &mats {
            let sum: Vec<usize> = a.iter().zip(b).map(|(&x, &y)| r.add(x, y)).collect();
            add.push(encode(&sum));
            let mut prod = vec![r.zero(); cells];
            for i in 0..k {
                for j in 0..k {
                    let mut acc = r.zero();
                    for l in 0..k {
                        acc = r.add(acc, r.mul(a[i * k + l], b[l * k + j]));
                    }
                    prod[i * k + j] = acc;
                }
            }
            mul.push(encode(&prod));
        }
    }
    FiniteRing::from_tables(format!("mat:{k}:{}", r.label()), names, add, mul).expect("matrix ring is a ring")
}

/// Componentwise product `r1 × r2`, elements named `(a,b)`.
pub fn product_ring(r1: &FiniteRing, r2: &FiniteRing) -> FiniteRing {
    let (n1, n2) = (r1.size(), r2.size());
    let n = n1 * n2;
    let split = |i: usize| (i / n2, i % n2);
    let names = (0..n)
        .map(|i| {
            let (a, b) = split(i);
            format!("({},{})", r1.name(a), r2.name(b))
        })
        .collect();
    let mut add = Vec::with_capacity(n * n);
    let mut mul = Vec::with_capacity(n * n);
    for x in 0..n {
        for y in 0..n {
            let ((a, b), (c, d)) = (split(x), split(y));
            add.push(r1.add(a, c) * n2 + r2.add(b, d));
            mul.push(r1.mul(a, c) * n2 + r2.mul(b, d));
        }
    }
    FiniteRing::from_tables(format!("prod:{},{}", r1.label(), r2.label()), names, add, mul)
        .expect("product of rings is a ring")
}

/// The group of invertible elements with its inverse table.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct UnitGroup {
    /// Units in increasing element order.
    pub elements: Vec<usize>,
    pub inverse: BTreeMap<usize, usize>,
}

impl UnitGroup {
    pub fn len(&self) -> usize {
        self.elements.len()
    }

    pub fn is_empty(&self) -> bool {
        self.elements.is_empty()
    }

    pub fn contains(&self, x: usize) -> bool {
        self.inverse.contains_key(&x)
    }
}

pub fn units(r: &FiniteRing) -> UnitGroup {
    let mut inverse = BTreeMap::new();
    for x in 0..r.size() {
        if let Some(y) = r.inverse(x) {
            inverse.insert(x, y);
        }
    }
    UnitGroup { elements: inverse.keys().copied().collect(), inverse }
}

/// Parses one ring literal.
pub fn parse_ring(literal: &str) -> Result<FiniteRing> {
    let (ring, rest) = parse_prefix(literal.trim())?;
    if !rest.is_empty() {
        return Err(Error::Parse(format!("trailing input after ring literal: {rest:?}")));
    }
    Ok(ring)
}

/// Parses a comma-separated list of ring literals; commas inside `prod:`
/// literals are consumed by the product.
pub fn parse_ring_list(list: &str) -> Result<Vec<FiniteRing>> {
    let mut rest = list.trim();
    let mut out = Vec::new();
    while !rest.is_empty() {
        let (ring, tail) = parse_prefix(rest)?;
        out.push(ring);
        rest = match tail.strip_prefix(',') {
            Some(t) => t.trim_start(),
            None if tail.is_empty() => tail,
            None => return Err(Error::Parse(format!("expected ',' before {tail:?}"))),
        };
    }
    Ok(out)
}

fn parse_number(s: &str) -> Result<(usize, &str)> {
    let end = s.find(|c: char| !c.is_ascii_digit()).unwrap_or(s.len());
    let n = s[..end].parse().map_err(|_| Error::Parse(format!("expected a number at {s:?}")))?;
    Ok((n, &s[end..]))
}

fn parse_prefix(s: &str) -> Result<(FiniteRing, &str)> {
    if let Some(rest) = s.strip_prefix("zmod:") {
        let (n, rest) = parse_number(rest)?;
        if n < 2 {
            return Err(Error::Parse("zmod needs n ≥ 2".into()));
        }
        Ok((zmod(n), rest))
    } else if let Some(rest) = s.strip_prefix("mat:") {
        let (k, rest) = parse_number(rest)?;
        let rest = rest.strip_prefix(':').ok_or_else(|| Error::Parse("expected ':' after matrix size".into()))?;
        if k == 0 {
            return Err(Error::Parse("matrix size must be positive".into()));
        }
        let (base, rest) = parse_prefix(rest)?;
        Ok((matrix_ring(&base, k), rest))
    } else if let Some(rest) = s.strip_prefix("prod:") {
        let (a, rest) = parse_prefix(rest)?;
        let rest =
            rest.strip_prefix(',').ok_or_else(|| Error::Parse("prod needs two rings separated by ','".into()))?;
        let (b, rest) = parse_prefix(rest)?;
        Ok((product_ring(&a, &b), rest))
    } else {
        Err(Error::Parse(format!("unknown ring literal {s:?}")))
    }
}

/// Target rings used for hom-count signatures unless overridden.
pub const DEFAULT_CORPUS: &str = "zmod:2,zmod:3,zmod:4,zmod:5,zmod:6,zmod:7,mat:2:zmod:2,prod:zmod:2,zmod:3";

pub fn default_corpus() -> Vec<FiniteRing> {
    parse_ring_list(DEFAULT_CORPUS).expect("default corpus parses")
}
