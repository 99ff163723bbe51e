//! Isomorphism invariants of a finite group: order, exponent, nilpotency
//! class, center / derived / Frattini orders, minimal generator count
//! d(G) = log_p [G : Φ(G)], the element-order census, and the invariant
//! factors of the abelianization. For p-groups the maximal subgroups are
//! exactly the preimages of hyperplanes of the elementary abelian quotient
//! G/Φ(G), which gives (p^d − 1)/(p − 1) of them.

use std::collections::BTreeMap;

use num_integer::Integer;

use super::{FiniteGroup, GroupError};

/// Invariants preserved by isomorphism. Two groups with different
/// fingerprints are non-isomorphic; equality is only a prefilter.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Fingerprint {
    pub order: u64,
    /// Least common multiple of element orders.
    pub exponent: u64,
    /// None when the group is not nilpotent (cannot happen for p-groups).
    pub nilpotency_class: Option<u32>,
    pub center_order: u64,
    pub derived_order: u64,
    /// Φ(G) = G′·Gᵖ; only defined in p-group mode.
    pub frattini_order: Option<u64>,
    /// d(G) = log_p [G : Φ(G)], the minimal number of generators.
    pub d: Option<u32>,
    /// element order → number of elements of that order.
    pub order_census: BTreeMap<u64, u64>,
    /// Invariant factors of G/G′, largest first, each dividing the previous.
    pub abelianization: Vec<u64>,
}

pub fn fingerprint(g: &FiniteGroup) -> Fingerprint {
    let mut order_census: BTreeMap<u64, u64> = BTreeMap::new();
    let mut exponent = 1u64;
    for a in g.elements() {
        let o = g.element_order(a);
        *order_census.entry(o).or_insert(0) += 1;
        exponent = exponent.lcm(&o);
    }
    let derived = g.derived_subgroup();
    let (frattini_order, d) = if g.is_p_group() {
        let phi = g.frattini().expect("p-group checked");
        let index = g.order() / phi.len() as u64;
        let mut dd = 0u32;
        let mut m = index;
        while m > 1 {
            m /= g.p();
            dd += 1;
        }
        (Some(phi.len() as u64), Some(dd))
    } else {
        (None, None)
    };
    Fingerprint {
        order: g.order(),
        exponent,
        nilpotency_class: nilpotency_class(g),
        center_order: g.center().len() as u64,
        derived_order: derived.len() as u64,
        frattini_order,
        d,
        order_census,
        abelianization: abelian_invariant_factors(g, &derived),
    }
}

/// Length of the lower central series G = γ₁ ⊵ γ₂ = [G,G] ⊵ … until
/// trivial; None if the series stabilises above the identity.
fn nilpotency_class(g: &FiniteGroup) -> Option<u32> {
    let mut gamma: Vec<u32> = g.elements().collect();
    let mut class = 0u32;
    loop {
        if gamma.len() == 1 {
            return Some(class);
        }
        let comms: Vec<u32> = gamma
            .iter()
            .flat_map(|&a| g.elements().map(move |b| g.commutator(a, b)))
            .collect();
        let next = g.span(&comms);
        if next.len() == gamma.len() {
            return None;
        }
        gamma = next;
        class += 1;
    }
}

/// Invariant factors of the abelianization G/G′, computed by repeatedly
/// splitting off a cyclic factor of maximal order.
fn abelian_invariant_factors(g: &FiniteGroup, derived: &[u32]) -> Vec<u64> {
    let (ab, _) = g
        .quotient(derived)
        .expect("the derived subgroup is always normal");
    let mut factors = Vec::new();
    let mut cur = ab;
    while cur.order() > 1 {
        let top = cur
            .elements()
            .map(|a| (cur.element_order(a), a))
            .max_by(|x, y| x.0.cmp(&y.0).then(y.1.cmp(&x.1)))
            .expect("nontrivial group");
        factors.push(top.0);
        let sub = cur.span(&[top.1]);
        let (next, _) = cur
            .quotient(&sub)
            .expect("every subgroup of an abelian group is normal");
        cur = next;
    }
    factors
}

/// Maximal subgroups of a p-group: preimages of the hyperplanes of the
/// elementary abelian quotient G/Φ(G). Deterministic order (hyperplane
/// normal vectors enumerated with leading coefficient 1, lexicographically).
pub fn maximal_subgroups(g: &FiniteGroup) -> Result<Vec<FiniteGroup>, GroupError> {
    Ok(maximal_subgroup_elements(g)?
        .into_iter()
        .map(|elems| {
            g.subgroup(&elems)
                .expect("hyperplane preimages are subgroups")
        })
        .collect())
}

/// Same subgroups as [`maximal_subgroups`], as sorted element lists in the
/// parent's indexing (needed to act with the original maps).
pub fn maximal_subgroup_elements(g: &FiniteGroup) -> Result<Vec<Vec<u32>>, GroupError> {
    let p = g.p();
    let phi = g.frattini()?;
    let (q, cmap) = g.quotient(&phi).expect("the Frattini subgroup is normal");
    // Greedy basis of the elementary abelian quotient.
    let mut basis: Vec<u32> = Vec::new();
    let mut span = vec![0u32];
    for x in q.elements().skip(1) {
        if span.binary_search(&x).is_err() {
            basis.push(x);
            span = q.span(&basis);
        }
    }
    let d = basis.len();
    // Coordinates of every quotient element relative to the basis.
    let mut coord_of = vec![vec![0u32; d]; q.order() as usize];
    let mut vector = vec![0u32; d];
    loop {
        let mut elem = q.identity();
        for (i, &v) in vector.iter().enumerate() {
            elem = q.mul(elem, q.pow(basis[i], v as i64));
        }
        coord_of[elem as usize] = vector.clone();
        // Odometer increment.
        let mut i = 0;
        loop {
            if i == d {
                break;
            }
            vector[i] += 1;
            if (vector[i] as u64) < p {
                break;
            }
            vector[i] = 0;
            i += 1;
        }
        if i == d {
            break;
        }
    }
    // Hyperplane functionals with first nonzero coefficient 1.
    let mut out = Vec::new();
    let mut functional = vec![0u32; d];
    for lead in 0..d {
        for f in &mut functional {
            *f = 0;
        }
        functional[lead] = 1;
        loop {
            let elems: Vec<u32> = g
                .elements()
                .filter(|&x| {
                    let coord = &coord_of[cmap[x as usize] as usize];
                    let dot: u64 = coord
                        .iter()
                        .zip(&functional)
                        .map(|(&c, &f)| c as u64 * f as u64)
                        .sum();
                    dot % p == 0
                })
                .collect();
            out.push(elems);
            // Odometer over the coefficients after the leading 1.
            let mut i = lead + 1;
            loop {
                if i == d {
                    break;
                }
                functional[i] += 1;
                if (functional[i] as u64) < p {
                    break;
                }
                functional[i] = 0;
                i += 1;
            }
            if i == d {
                break;
            }
        }
    }
    Ok(out)
}

#[cfg(test)]
mod tests {
    use super::super::constructions::{abelian, cyclic, ut3};
    use super::*;

    #[test]
    fn heisenberg_fingerprint() {
        let g = ut3(3);
        let fp = fingerprint(&g);
        assert_eq!(fp.order, 27);
        assert_eq!(fp.exponent, 3);
        assert_eq!(fp.nilpotency_class, Some(2));
        assert_eq!(fp.center_order, 3);
        assert_eq!(fp.derived_order, 3);
        assert_eq!(fp.frattini_order, Some(3));
        assert_eq!(fp.d, Some(2));
        assert_eq!(fp.order_census, BTreeMap::from([(1, 1), (3, 26)]));
        assert_eq!(fp.abelianization, vec![3, 3]);
    }

    #[test]
    fn abelian_fingerprints() {
        let g = abelian(3, &[2, 1]); // C9 × C3
        let fp = fingerprint(&g);
        assert_eq!(fp.order, 27);
        assert_eq!(fp.exponent, 9);
        assert_eq!(fp.nilpotency_class, Some(1));
        assert_eq!(fp.center_order, 27);
        assert_eq!(fp.derived_order, 1);
        assert_eq!(fp.d, Some(2));
        assert_eq!(fp.abelianization, vec![9, 3]);
        assert_eq!(fp.order_census, BTreeMap::from([(1, 1), (3, 8), (9, 18)]));

        let fp = fingerprint(&cyclic(3, 3)); // C27
        assert_eq!(fp.exponent, 27);
        assert_eq!(fp.d, Some(1));
        assert_eq!(fp.abelianization, vec![27]);
        assert_eq!(fp.frattini_order, Some(9));
    }

    #[test]
    fn trivial_group_fingerprint() {
        let g = cyclic(3, 0);
        let fp = fingerprint(&g);
        assert_eq!(fp.order, 1);
        assert_eq!(fp.exponent, 1);
        assert_eq!(fp.nilpotency_class, Some(0));
        assert_eq!(fp.d, Some(0));
        assert!(fp.abelianization.is_empty());
    }

    #[test]
    fn maximal_subgroups_of_two_generator_groups() {
        // d = 2 → p + 1 maximal subgroups, each of index p.
        let g = ut3(3);
        let maxes = maximal_subgroups(&g).unwrap();
        assert_eq!(maxes.len(), 4);
        for m in &maxes {
            assert_eq!(m.order(), 9);
            // Heisenberg maximal subgroups are elementary abelian of rank 2.
            assert!(m.is_abelian());
            assert_eq!(fingerprint(m).exponent, 3);
        }
        // Each is normal in the parent.
        for elems in maximal_subgroup_elements(&g).unwrap() {
            assert!(g.is_normal(&elems));
        }
    }

    #[test]
    fn cyclic_group_has_one_maximal_subgroup() {
        let g = cyclic(3, 3);
        let maxes = maximal_subgroups(&g).unwrap();
        assert_eq!(maxes.len(), 1);
        assert_eq!(maxes[0].order(), 9);
    }

    #[test]
    fn census_of_frattini_quotient_matches_d() {
        for g in [ut3(3), ut3(5), abelian(3, &[2, 1]), cyclic(7, 2)] {
            let fp = fingerprint(&g);
            let phi = g.frattini().unwrap();
            let (q, _) = g.quotient(&phi).unwrap();
            assert_eq!(q.order(), g.p().pow(fp.d.unwrap()));
            // The quotient is elementary abelian.
            assert!(q.is_abelian());
            assert!(q
                .elements()
                .all(|a| q.pow(a, g.p() as i64) == q.identity()));
        }
    }

    #[test]
    fn non_nilpotent_groups_report_no_class() {
        // S3 via permutation closure.
        let gens = vec![
            ("r".to_string(), vec![1u8, 2, 0]),
            ("s".to_string(), vec![1u8, 0, 2]),
        ];
        let g = FiniteGroup::closure(
            3,
            &gens,
            vec![0, 1, 2],
            |a: &Vec<u8>, b: &Vec<u8>| a.iter().map(|&i| b[i as usize]).collect(),
            16,
        )
        .unwrap()
        .group;
        let fp = fingerprint(&g);
        assert_eq!(fp.nilpotency_class, None);
        assert_eq!(fp.frattini_order, None);
        assert_eq!(fp.exponent, 6);
        assert_eq!(fp.abelianization, vec![2]);
    }
}
