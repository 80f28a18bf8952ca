//! The universal ring of a Δ-groupoid and a finite check of its universal
//! property.

use super::poly::{LinComb, Word};
use super::{Generator, PresentedRing};
use crate::constructions::ring_unit_delta;
use crate::delta::DeltaGroupoid;
use crate::error::Result;
use crate::finite_ring::{units, FiniteRing};
use crate::groupoid::enumerate_morphisms;
use crate::homs::{enumerate_ring_homs, HomBudget};
use num_bigint::BigInt;
use serde::Serialize;
use std::collections::BTreeSet;

/// `ℤ` of the universal group of the underlying groupoid, modulo
/// `k(x) + x − 1` for `x ∈ h`. One generator per element, with formal
/// inverse `inv(x)`; relations `u − 1` per unit, `x·y − z` per composable
/// pair, then the `h` relations (one per `k`-orbit). The empty Δ-groupoid
/// gives the zero ring.
pub fn universal_ring(d: &DeltaGroupoid) -> PresentedRing {
    let g = d.groupoid();
    if g.num_objects() == 0 {
        return PresentedRing::zero_ring();
    }
    let gens = (0..g.num_elements())
        .map(|x| Generator { name: g.element_id(x).to_string(), inverse: Some(g.inv(x)) })
        .collect();
    let one = BigInt::from(1);
    let minus = BigInt::from(-1);
    let mut rels = Vec::new();
    for x in 0..g.num_elements() {
        if g.is_unit(x) {
            rels.push(LinComb::from_terms([(one.clone(), Word::letter(x)), (minus.clone(), Word::unit())]));
        }
    }
    for x in 0..g.num_elements() {
        for &y in g.outgoing(g.tgt(x)) {
            let z = g.compose(x, y).expect("composable");
            rels.push(LinComb::from_terms([(one.clone(), Word(vec![x, y])), (minus.clone(), Word::letter(z))]));
        }
    }
    for &x in d.h() {
        let kx = d.k(x).expect("k defined on h");
        if x <= kx {
            rels.push(LinComb::from_terms([
                (one.clone(), Word::letter(kx)),
                (one.clone(), Word::letter(x)),
                (minus.clone(), Word::unit()),
            ]));
        }
    }
    PresentedRing::new(gens, rels).expect("well-formed by construction")
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct UniversalCheck {
    /// Δ-groupoid morphisms into `ring_unit_delta(r)`.
    pub morphisms: usize,
    /// Unital ring homs out of `universal_ring(d)`.
    pub homs: usize,
    /// Morphisms whose generator assignment violates a relation.
    pub not_extending: usize,
    /// Homs whose restriction is not a Δ-groupoid morphism.
    pub not_restricting: usize,
    pub holds: bool,
}

/// Compares Δ-groupoid morphisms `d → (R*, …, 1 − x)` with homs
/// `universal_ring(d) → R`, as sets of generator assignments. Since the
/// generators are the elements of `d`, a hom is determined by its
/// restriction, so set equality is the bijection of the universal property.
pub fn universal_property_check(d: &DeltaGroupoid, r: &FiniteRing, budget: HomBudget) -> Result<UniversalCheck> {
    let target = ring_unit_delta(r);
    let u = units(r);
    let morphisms = enumerate_morphisms(d.groupoid(), target.groupoid(), budget.nodes, |f| {
        d.h().iter().all(|&x| {
            let fx = f.element_map[x];
            target.in_h(fx) && target.k(fx) == d.k(x).map(|kx| f.element_map[kx])
        })
    })?;
    let from_morphisms: BTreeSet<Vec<usize>> =
        morphisms.iter().map(|f| f.element_map.iter().map(|&i| u.elements[i]).collect()).collect();
    let p = universal_ring(d);
    let homs: BTreeSet<Vec<usize>> = enumerate_ring_homs(&p, r, budget)?.into_iter().collect();
    let not_extending = from_morphisms.difference(&homs).count();
    let not_restricting = homs.difference(&from_morphisms).count();
    Ok(UniversalCheck {
        morphisms: morphisms.len(),
        homs: homs.len(),
        not_extending,
        not_restricting,
        holds: not_extending == 0 && not_restricting == 0 && morphisms.len() == homs.len(),
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::constructions::x3_delta;
    use crate::delta::trivial_delta;
    use crate::finite_ring::zmod;
    use crate::groupoid::cyclic_group;
    use crate::homs::count_ring_homs;
    use crate::presented::simplify;

    #[test]
    fn trivial_group_gives_integers() {
        let d = trivial_delta(&cyclic_group(1));
        let p = universal_ring(&d);
        assert_eq!(p.num_generators(), 1);
        let s = simplify(&p);
        assert_eq!(s.ring, PresentedRing::integers());
        let c = universal_property_check(&d, &zmod(5), HomBudget::default()).unwrap();
        assert_eq!((c.morphisms, c.homs, c.holds), (1, 1, true));
    }

    #[test]
    fn ring_unit_delta_of_z3() {
        let d = ring_unit_delta(&zmod(3));
        let p = universal_ring(&d);
        let homs = enumerate_ring_homs(&p, &zmod(3), HomBudget::default()).unwrap();
        assert_eq!(homs, vec![vec![1, 2]]);
        let s = simplify(&p);
        assert_eq!(s.ring.names(), vec!["2"]);
        let rels: BTreeSet<String> = s.ring.all_relations().iter().map(|r| s.ring.render(r)).collect();
        assert_eq!(rels, ["2·2 - 1".to_string(), "22 - 1".to_string()].into_iter().collect());
        let c = universal_property_check(&d, &zmod(3), HomBudget::default()).unwrap();
        assert!(c.holds);
    }

    #[test]
    fn x3_of_two_is_free_of_rank_two() {
        let p = universal_ring(&x3_delta(2));
        assert_eq!(p.num_generators(), 8);
        let s = simplify(&p);
        assert_eq!(s.ring.num_invertible_pairs(), 2);
        assert_eq!(s.ring.num_generators(), 4);
        assert!(s.ring.relations().is_empty());
        for n in [2, 3, 4, 5] {
            let r = zmod(n);
            let u = units(&r).len() as u64;
            assert_eq!(count_ring_homs(&p, &r, HomBudget::default()).unwrap(), u * u);
        }
    }

    #[test]
    fn empty_delta_gives_zero_ring() {
        let d = trivial_delta(&crate::groupoid::Groupoid::empty());
        assert_eq!(universal_ring(&d), PresentedRing::zero_ring());
        // One (empty) morphism but no hom out of the zero ring.
        let c = universal_property_check(&d, &zmod(2), HomBudget::default()).unwrap();
        assert_eq!((c.morphisms, c.homs, c.holds), (1, 0, false));
    }
}
