//! Unital ring homomorphisms from a presented ring into a finite ring, by
//! backtracking over generator images.

use crate::error::{Error, Result};
use crate::finite_ring::{units, FiniteRing};
use crate::presented::PresentedRing;
use num_bigint::BigInt;

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct HomBudget {
    /// Maximum number of partial assignments visited.
    pub nodes: u64,
}

impl Default for HomBudget {
    fn default() -> Self {
        HomBudget { nodes: 10_000_000 }
    }
}

struct Compiled {
    /// (scalar image of the coefficient, word)
    terms: Vec<(usize, Vec<usize>)>,
}

struct Search<'a> {
    r: &'a FiniteRing,
    partner: Vec<Option<usize>>,
    candidates: Vec<Vec<usize>>,
    inverse: Vec<Option<usize>>,
    checks: Vec<Vec<Compiled>>,
    values: Vec<usize>,
    nodes: u64,
    budget: u64,
    naive: BigInt,
}

impl Search<'_> {
    fn holds(&self, rel: &Compiled) -> bool {
        let r = self.r;
        let mut acc = r.zero();
        for (c, w) in &rel.terms {
            let mut v = *c;
            for &l in w {
                v = r.mul(v, self.values[l]);
            }
            acc = r.add(acc, v);
        }
        acc == r.zero()
    }

    fn go(&mut self, g: usize, out: &mut dyn FnMut(&[usize])) -> Result<()> {
        if g == self.values.len() {
            out(&self.values);
            return Ok(());
        }
        let forced = match self.partner[g] {
            Some(p) if p < g => Some(self.inverse[self.values[p]].expect("partner image is a unit")),
            _ => None,
        };
        let cands: Vec<usize> = match forced {
            Some(v) => vec![v],
            None => self.candidates[g].clone(),
        };
        for v in cands {
            self.nodes += 1;
            if self.nodes > self.budget {
                return Err(Error::BudgetExceeded { budget: self.budget, required: self.naive.to_string() });
            }
            self.values[g] = v;
            if self.checks[g].iter().all(|rel| self.holds(rel)) {
                self.go(g + 1, out)?;
            }
        }
        Ok(())
    }
}

/// Calls `out` with each hom, as the tuple of generator images, in
/// lexicographic order of the tuples.
pub fn for_each_ring_hom(
    p: &PresentedRing,
    r: &FiniteRing,
    budget: HomBudget,
    out: &mut dyn FnMut(&[usize]),
) -> Result<()> {
    let m = p.num_generators();
    let u = units(r);
    let mut inverse = vec![None; r.size()];
    for (&x, &y) in &u.inverse {
        inverse[x] = Some(y);
    }
    let mut candidates = Vec::with_capacity(m);
    let mut naive = BigInt::from(1);
    for g in 0..m {
        let c: Vec<usize> = match p.partner(g) {
            None => (0..r.size()).collect(),
            Some(q) if q == g => u.elements.iter().copied().filter(|&x| inverse[x] == Some(x)).collect(),
            Some(_) => u.elements.clone(),
        };
        if !matches!(p.partner(g), Some(q) if q < g) {
            naive *= c.len();
        }
        candidates.push(c);
    }
    // Each relation is checked once all of its letters are assigned.
    let mut checks: Vec<Vec<Compiled>> = (0..m).map(|_| Vec::new()).collect();
    for rel in p.all_relations() {
        let compiled = Compiled { terms: rel.terms().map(|(w, c)| (r.scalar(c), w.0.clone())).collect() };
        match rel.letters().max() {
            Some(g) => checks[g].push(compiled),
            None => {
                let s = Search {
                    r,
                    partner: Vec::new(),
                    candidates: Vec::new(),
                    inverse: Vec::new(),
                    checks: Vec::new(),
                    values: Vec::new(),
                    nodes: 0,
                    budget: 0,
                    naive: BigInt::from(0),
                };
                if !s.holds(&compiled) {
                    return Ok(());
                }
            }
        }
    }
    let mut s = Search {
        r,
        partner: (0..m).map(|g| p.partner(g)).collect(),
        candidates,
        inverse,
        checks,
        values: vec![0; m],
        nodes: 0,
        budget: budget.nodes,
        naive,
    };
    s.go(0, out)
}

pub fn enumerate_ring_homs(p: &PresentedRing, r: &FiniteRing, budget: HomBudget) -> Result<Vec<Vec<usize>>> {
    let mut all = Vec::new();
    for_each_ring_hom(p, r, budget, &mut |v| all.push(v.to_vec()))?;
    Ok(all)
}

pub fn count_ring_homs(p: &PresentedRing, r: &FiniteRing, budget: HomBudget) -> Result<u64> {
    let mut n = 0u64;
    for_each_ring_hom(p, r, budget, &mut |_| n += 1)?;
    Ok(n)
}

/// Hom counts into each ring, in order. Rings are spread over at most
/// `jobs` worker threads; the result does not depend on `jobs`.
pub fn hom_signature(p: &PresentedRing, rings: &[FiniteRing], budget: HomBudget, jobs: usize) -> Result<Vec<u64>> {
    let jobs = jobs.max(1).min(rings.len().max(1));
    if jobs == 1 {
        return rings.iter().map(|r| count_ring_homs(p, r, budget)).collect();
    }
    let mut results: Vec<Option<Result<u64>>> = (0..rings.len()).map(|_| None).collect();
    std::thread::scope(|scope| {
        let chunk = rings.len().div_ceil(jobs);
        for (rs, slots) in rings.chunks(chunk).zip(results.chunks_mut(chunk)) {
            scope.spawn(move || {
                for (r, slot) in rs.iter().zip(slots.iter_mut()) {
                    *slot = Some(count_ring_homs(p, r, budget));
                }
            });
        }
    });
    results.into_iter().map(|x| x.expect("every ring counted")).collect()
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::finite_ring::{default_corpus, matrix_ring, zmod};
    use crate::presented::{named_presentation, NamedPresentation};

    fn named(s: &str) -> PresentedRing {
        named_presentation(&NamedPresentation::parse(s).unwrap()).unwrap()
    }

    #[test]
    fn integers_map_once_everywhere() {
        let z = named("z");
        for r in default_corpus() {
            assert_eq!(count_ring_homs(&z, &r, HomBudget::default()).unwrap(), 1);
        }
        assert_eq!(count_ring_homs(&named("zero"), &zmod(5), HomBudget::default()).unwrap(), 0);
    }

    #[test]
    fn free_group_ring_counts_are_unit_powers() {
        let f2 = named("zfree2");
        for r in default_corpus() {
            let u = units(&r).len() as u64;
            assert_eq!(count_ring_homs(&f2, &r, HomBudget::default()).unwrap(), u * u, "{}", r.label());
        }
        assert_eq!(count_ring_homs(&f2, &zmod(4), HomBudget::default()).unwrap(), 4);
    }

    #[test]
    fn localization_counts() {
        let loc = named("localized-zfree4");
        assert_eq!(count_ring_homs(&loc, &zmod(3), HomBudget::default()).unwrap(), 8);
        // x0 and x0 − 1 both invertible in zmod(2) is impossible.
        assert_eq!(count_ring_homs(&loc, &zmod(2), HomBudget::default()).unwrap(), 0);
        let homs = enumerate_ring_homs(&loc, &zmod(3), HomBudget::default()).unwrap();
        assert!(homs.iter().all(|h| h[0] == 2));
        let mut sorted = homs.clone();
        sorted.sort();
        assert_eq!(sorted, homs);
    }

    #[test]
    fn budget_refusal_names_the_naive_bound() {
        let f2 = named("zfree2");
        let err = count_ring_homs(&f2, &matrix_ring(&zmod(2), 2), HomBudget { nodes: 10 }).unwrap_err();
        match err {
            Error::BudgetExceeded { budget, required } => {
                assert_eq!(budget, 10);
                assert_eq!(required, "36");
            }
            e => panic!("unexpected {e}"),
        }
    }

    #[test]
    fn signature_independent_of_jobs() {
        let p = named("localized-zfree2");
        let corpus = default_corpus();
        let a = hom_signature(&p, &corpus, HomBudget::default(), 1).unwrap();
        let b = hom_signature(&p, &corpus, HomBudget::default(), 4).unwrap();
        assert_eq!(a, b);
    }
}
