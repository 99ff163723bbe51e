//! Finite groups as explicit multiplication tables, built by breadth-first
//! closure from generators (function-field maps, permutations, matrices, or
//! raw tables). The table form makes every structural computation — orders,
//! commutators, subgroup lattices, quotients — an exact, deterministic walk
//! over indices.
//!
//! Elements are indices 0..n with 0 the identity. The closure engine records
//! for every discovered element a parent edge (u, i) meaning elem = u·gᵢ;
//! the full table then fills column by column, with only the generator
//! columns needing fresh products in the underlying object: for every other
//! column b = u·gᵢ we have a·b = (a·u)·gᵢ, two table lookups.

use std::collections::HashMap;
use std::hash::Hash;

use thiserror::Error;

use crate::tower::FieldAuto;

pub mod action;
pub mod constructions;
pub mod fingerprint;
pub mod iso;
pub mod words;

pub use action::{affine_points, apply_at_point, semiregular_on, FixedPointReport};
pub use constructions::identify;
pub use fingerprint::{
    fingerprint, maximal_subgroup_elements, maximal_subgroups, Fingerprint,
};
pub use iso::{aut_order_bruteforce, is_isomorphic, minimal_generators};
pub use words::{parse_relator, presentation_check, PresentationReport, Word};

#[derive(Debug, Error, PartialEq, Eq)]
pub enum GroupError {
    /// Breadth-first closure exceeded the element cap without closing.
    #[error("closure exceeded the cap of {0} elements")]
    CapExceeded(usize),
    /// A generator map was passed to closure without a successful relation
    /// check; closure refuses to run on maps that may not be automorphisms.
    #[error("generator {0:?} has not been verified against the tower relations")]
    UnverifiedGenerator(String),
    /// Brute-force automorphism enumeration is capped at order 81.
    #[error("group of order {0} is too large for brute-force enumeration")]
    OrderTooLarge(u64),
    /// Quotients exist only by normal subgroups.
    #[error("subgroup is not normal")]
    NotNormal,
    /// The element set is not closed under the group operation.
    #[error("element set is not a subgroup")]
    NotClosed,
    /// A user-supplied multiplication table fails the group axioms.
    #[error("invalid multiplication table: {0}")]
    InvalidTable(String),
    /// An operation requiring a p-group was invoked on a group whose order
    /// is not a power of the configured prime.
    #[error("group order {0} is not a power of p = {1}")]
    NotAPGroup(u64, u64),
    /// A presentation image index is outside the group.
    #[error("image {0} is outside the group")]
    ImageNotInGroup(u64),
    /// A relator word references a generator with no assigned image.
    #[error("unknown generator {0:?} in word")]
    UnknownGenerator(String),
    /// A relator word could not be parsed.
    #[error("malformed word: {0}")]
    WordSyntax(String),
}

/// Where a group table came from.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Origin {
    FromMaps,
    FromPermutations,
    FromConstruction,
    FromTable,
}

/// A finite group as an explicit multiplication table, tagged with the prime
/// p used by the p-group-specific operations (Frattini quotients, maximal
/// subgroups, minimal generators).
#[derive(Clone, Debug)]
pub struct FiniteGroup {
    p: u64,
    n: usize,
    mul: Vec<u32>,
    inv: Vec<u32>,
    gens: Vec<u32>,
    gen_names: Vec<String>,
    origin: Origin,
}

/// Closure of a set of generator objects: the group table plus the
/// discovered objects in index order, and the element index of every input
/// generator (duplicates map to the same index).
#[derive(Clone, Debug)]
pub struct Closure<T> {
    pub group: FiniteGroup,
    pub elements: Vec<T>,
    pub gen_elements: Vec<u32>,
}

impl FiniteGroup {
    /// Breadth-first closure of `gens` under `op`, with `identity` as
    /// element 0. The cap bounds the number of elements ever stored.
    pub fn closure<T, F>(
        p: u64,
        gens: &[(String, T)],
        identity: T,
        op: F,
        cap: usize,
    ) -> Result<Closure<T>, GroupError>
    where
        T: Clone + Eq + Hash,
        F: Fn(&T, &T) -> T,
    {
        let mut elements: Vec<T> = vec![identity.clone()];
        let mut index: HashMap<T, u32> = HashMap::new();
        index.insert(identity, 0);
        // via[e] = (u, i) with elements[e] = elements[u]·gens[i]; the
        // identity carries a sentinel that is never read.
        let mut via: Vec<(u32, usize)> = vec![(0, usize::MAX)];

        let mut distinct_gens: Vec<(u32, usize)> = Vec::new(); // (elem idx, gens idx)
        let mut gen_elements = Vec::with_capacity(gens.len());
        for (i, (_, g)) in gens.iter().enumerate() {
            let idx = match index.get(g) {
                Some(&idx) => idx,
                None => {
                    let idx = elements.len() as u32;
                    if elements.len() + 1 > cap {
                        return Err(GroupError::CapExceeded(cap));
                    }
                    elements.push(g.clone());
                    index.insert(g.clone(), idx);
                    via.push((0, i));
                    distinct_gens.push((idx, i));
                    idx
                }
            };
            gen_elements.push(idx);
        }

        let mut head = 0usize;
        while head < elements.len() {
            let cur = elements[head].clone();
            for &(_, gi) in &distinct_gens {
                let next = op(&cur, &gens[gi].1);
                if !index.contains_key(&next) {
                    if elements.len() + 1 > cap {
                        return Err(GroupError::CapExceeded(cap));
                    }
                    let idx = elements.len() as u32;
                    elements.push(next.clone());
                    index.insert(next, idx);
                    via.push((head as u32, gi));
                }
            }
            head += 1;
        }

        let n = elements.len();
        let mut mul = vec![0u32; n * n];
        // Identity column and generator columns by direct products.
        for a in 0..n {
            mul[a * n] = a as u32;
        }
        for &(gidx, gi) in &distinct_gens {
            for a in 0..n {
                let prod = op(&elements[a], &gens[gi].1);
                mul[a * n + gidx as usize] = *index
                    .get(&prod)
                    .expect("closure is complete, so every product is known");
            }
        }
        // Remaining columns by the parent-edge recurrence, in discovery
        // order so the parent column is always ready.
        let gen_col: HashMap<usize, u32> =
            distinct_gens.iter().map(|&(idx, gi)| (gi, idx)).collect();
        for b in 1..n {
            let (u, gi) = via[b];
            let gcol = gen_col[&gi] as usize;
            if gcol == b {
                continue; // generator column, already filled
            }
            for a in 0..n {
                let au = mul[a * n + u as usize] as usize;
                mul[a * n + b] = mul[au * n + gcol];
            }
        }

        let mut inv = vec![0u32; n];
        for a in 0..n {
            let b = (0..n)
                .find(|&b| mul[a * n + b] == 0)
                .expect("every element of a finite closed set has an inverse");
            inv[a] = b as u32;
        }

        let group = FiniteGroup {
            p,
            n,
            mul,
            inv,
            gens: distinct_gens.iter().map(|&(idx, _)| idx).collect(),
            gen_names: distinct_gens.iter().map(|&(_, gi)| gens[gi].0.clone()).collect(),
            origin: Origin::FromConstruction,
        };
        Ok(Closure { group, elements, gen_elements })
    }

    /// Build from an explicit table (row-major, `table[a][b]` = a·b) with
    /// element 0 the identity. The table is fully validated: closure,
    /// identity, inverses, and associativity.
    pub fn from_mul_table(p: u64, table: &[Vec<u32>]) -> Result<FiniteGroup, GroupError> {
        let n = table.len();
        if n == 0 {
            return Err(GroupError::InvalidTable("empty table".into()));
        }
        if table.iter().any(|row| row.len() != n) {
            return Err(GroupError::InvalidTable("table is not square".into()));
        }
        let mut mul = vec![0u32; n * n];
        for (a, row) in table.iter().enumerate() {
            for (b, &v) in row.iter().enumerate() {
                if v as usize >= n {
                    return Err(GroupError::InvalidTable(format!(
                        "entry {}·{} = {} is out of range",
                        a, b, v
                    )));
                }
                mul[a * n + b] = v;
            }
        }
        for a in 0..n {
            if mul[a * n] != a as u32 || mul[a] != a as u32 {
                return Err(GroupError::InvalidTable(
                    "element 0 is not a two-sided identity".into(),
                ));
            }
        }
        let mut inv = vec![u32::MAX; n];
        for a in 0..n {
            match (0..n).find(|&b| mul[a * n + b] == 0) {
                Some(b) if mul[b * n + a] == 0 => inv[a] = b as u32,
                _ => {
                    return Err(GroupError::InvalidTable(format!(
                        "element {} has no two-sided inverse",
                        a
                    )))
                }
            }
        }
        for a in 0..n {
            for b in 0..n {
                let ab = mul[a * n + b] as usize;
                for c in 0..n {
                    let bc = mul[b * n + c] as usize;
                    if mul[ab * n + c] != mul[a * n + bc] {
                        return Err(GroupError::InvalidTable(format!(
                            "associativity fails at ({}, {}, {})",
                            a, b, c
                        )));
                    }
                }
            }
        }
        let mut g = FiniteGroup {
            p,
            n,
            mul,
            inv,
            gens: Vec::new(),
            gen_names: Vec::new(),
            origin: Origin::FromTable,
        };
        let gens = greedy_generators(&g);
        g.gen_names = (1..=gens.len()).map(|i| format!("g{}", i)).collect();
        g.gens = gens;
        Ok(g)
    }

    pub fn origin(&self) -> Origin {
        self.origin
    }

    /// Override the origin tag (used by the map- and permutation-closure
    /// entry points).
    pub fn with_origin(mut self, origin: Origin) -> FiniteGroup {
        self.origin = origin;
        self
    }

    pub fn order(&self) -> u64 {
        self.n as u64
    }

    pub fn p(&self) -> u64 {
        self.p
    }

    pub fn identity(&self) -> u32 {
        0
    }

    pub fn elements(&self) -> impl Iterator<Item = u32> {
        0..self.n as u32
    }

    pub fn mul(&self, a: u32, b: u32) -> u32 {
        self.mul[a as usize * self.n + b as usize]
    }

    pub fn inv(&self, a: u32) -> u32 {
        self.inv[a as usize]
    }

    pub fn pow(&self, a: u32, e: i64) -> u32 {
        let (base, e) = if e < 0 { (self.inv(a), -e as u64) } else { (a, e as u64) };
        let mut acc = 0u32;
        for _ in 0..e {
            acc = self.mul(acc, base);
        }
        acc
    }

    pub fn element_order(&self, a: u32) -> u64 {
        let mut cur = a;
        let mut ord = 1;
        while cur != 0 {
            cur = self.mul(cur, a);
            ord += 1;
        }
        ord
    }

    /// a⁻¹·b⁻¹·a·b.
    pub fn commutator(&self, a: u32, b: u32) -> u32 {
        self.mul(self.mul(self.inv(a), self.inv(b)), self.mul(a, b))
    }

    /// b⁻¹·a·b.
    pub fn conjugate(&self, a: u32, b: u32) -> u32 {
        self.mul(self.mul(self.inv(b), a), b)
    }

    pub fn is_abelian(&self) -> bool {
        (0..self.n as u32)
            .all(|a| (0..a).all(|b| self.mul(a, b) == self.mul(b, a)))
    }

    pub fn gens(&self) -> &[u32] {
        &self.gens
    }

    pub fn gen_names(&self) -> &[String] {
        &self.gen_names
    }

    /// True iff the order is a power of the configured prime (1 counts).
    pub fn is_p_group(&self) -> bool {
        let mut m = self.n as u64;
        while m % self.p == 0 {
            m /= self.p;
        }
        m == 1
    }

    /// Sorted element list of the subgroup generated by `seed`.
    pub fn span(&self, seed: &[u32]) -> Vec<u32> {
        let mut seen = vec![false; self.n];
        seen[0] = true;
        let mut stack: Vec<u32> = vec![0];
        let mut frontier: Vec<u32> = seed.to_vec();
        while let Some(x) = frontier.pop() {
            if !seen[x as usize] {
                seen[x as usize] = true;
                stack.push(x);
            }
        }
        let mut head = 0;
        while head < stack.len() {
            let a = stack[head];
            head += 1;
            for &g in seed {
                let t = self.mul(a, g);
                if !seen[t as usize] {
                    seen[t as usize] = true;
                    stack.push(t);
                }
            }
        }
        stack.sort_unstable();
        stack
    }

    /// The derived subgroup ⟨[a,b] : a,b ∈ G⟩ as a sorted element list.
    pub fn derived_subgroup(&self) -> Vec<u32> {
        let comms: Vec<u32> = (0..self.n as u32)
            .flat_map(|a| (0..self.n as u32).map(move |b| (a, b)))
            .map(|(a, b)| self.commutator(a, b))
            .collect();
        self.span(&comms)
    }

    /// The center {z : za = az for all a} as a sorted element list.
    pub fn center(&self) -> Vec<u32> {
        (0..self.n as u32)
            .filter(|&z| (0..self.n as u32).all(|a| self.mul(z, a) == self.mul(a, z)))
            .collect()
    }

    /// The Frattini subgroup of a p-group: ⟨G′ ∪ {x^p}⟩.
    pub fn frattini(&self) -> Result<Vec<u32>, GroupError> {
        if !self.is_p_group() {
            return Err(GroupError::NotAPGroup(self.n as u64, self.p));
        }
        let mut seed = self.derived_subgroup();
        seed.extend((0..self.n as u32).map(|a| self.pow(a, self.p as i64)));
        Ok(self.span(&seed))
    }

    /// True iff the sorted element list is closed under the operation.
    pub fn is_subgroup(&self, elems: &[u32]) -> bool {
        let inside = |x: u32| elems.binary_search(&x).is_ok();
        inside(0) && elems.iter().all(|&a| elems.iter().all(|&b| inside(self.mul(a, b))))
    }

    pub fn is_normal(&self, elems: &[u32]) -> bool {
        self.is_subgroup(elems)
            && (0..self.n as u32).all(|g| {
                elems
                    .iter()
                    .all(|&s| elems.binary_search(&self.conjugate(s, g)).is_ok())
            })
    }

    /// Extract a subgroup (given as a sorted element list) as a standalone
    /// group with reindexed table.
    pub fn subgroup(&self, elems: &[u32]) -> Result<FiniteGroup, GroupError> {
        if !self.is_subgroup(elems) {
            return Err(GroupError::NotClosed);
        }
        let m = elems.len();
        let local: HashMap<u32, u32> = elems
            .iter()
            .enumerate()
            .map(|(i, &e)| (e, i as u32))
            .collect();
        let mut mul = vec![0u32; m * m];
        for (i, &a) in elems.iter().enumerate() {
            for (j, &b) in elems.iter().enumerate() {
                mul[i * m + j] = local[&self.mul(a, b)];
            }
        }
        let inv = elems.iter().map(|&a| local[&self.inv(a)]).collect();
        let mut g = FiniteGroup {
            p: self.p,
            n: m,
            mul,
            inv,
            gens: Vec::new(),
            gen_names: Vec::new(),
            origin: self.origin,
        };
        let gens = greedy_generators(&g);
        g.gen_names = (1..=gens.len()).map(|i| format!("s{}", i)).collect();
        g.gens = gens;
        Ok(g)
    }

    /// Quotient by a normal subgroup: the quotient table plus the coset map
    /// (element → quotient element).
    pub fn quotient(&self, normal: &[u32]) -> Result<(FiniteGroup, Vec<u32>), GroupError> {
        if !self.is_normal(normal) {
            return Err(GroupError::NotNormal);
        }
        // Name each coset by its minimal member; sort the identity coset in
        // front so index 0 stays the identity.
        let mut coset_rep = vec![u32::MAX; self.n];
        let mut reps: Vec<u32> = Vec::new();
        for x in 0..self.n as u32 {
            if coset_rep[x as usize] != u32::MAX {
                continue;
            }
            let members: Vec<u32> = normal.iter().map(|&s| self.mul(x, s)).collect();
            let rep = *members.iter().min().expect("cosets are nonempty");
            for &y in &members {
                coset_rep[y as usize] = rep;
            }
            reps.push(rep);
        }
        reps.sort_unstable();
        debug_assert_eq!(reps[0], 0);
        let rep_index: HashMap<u32, u32> = reps
            .iter()
            .enumerate()
            .map(|(i, &r)| (r, i as u32))
            .collect();
        let cmap: Vec<u32> = (0..self.n)
            .map(|x| rep_index[&coset_rep[x]])
            .collect();
        let m = reps.len();
        let mut mul = vec![0u32; m * m];
        for (i, &a) in reps.iter().enumerate() {
            for (j, &b) in reps.iter().enumerate() {
                mul[i * m + j] = cmap[self.mul(a, b) as usize];
            }
        }
        let inv = reps.iter().map(|&a| cmap[self.inv(a) as usize]).collect();
        let gens: Vec<u32> = {
            let mut seen = Vec::new();
            for &g in &self.gens {
                let img = cmap[g as usize];
                if img != 0 && !seen.contains(&img) {
                    seen.push(img);
                }
            }
            seen
        };
        let gen_names = (1..=gens.len()).map(|i| format!("q{}", i)).collect();
        let q = FiniteGroup {
            p: self.p,
            n: m,
            mul,
            inv,
            gens,
            gen_names,
            origin: self.origin,
        };
        Ok((q, cmap))
    }
}

/// Deterministic small generating set: scan elements in index order, keeping
/// those that enlarge the span. Not guaranteed minimal for general groups,
/// but minimal for p-groups by the Burnside basis theorem when scanning
/// non-Frattini elements first — callers needing exact minimality use
/// [`iso::minimal_generators`].
pub(super) fn greedy_generators(g: &FiniteGroup) -> Vec<u32> {
    let mut gens: Vec<u32> = Vec::new();
    let mut span = vec![0u32];
    for x in 1..g.n as u32 {
        if span.binary_search(&x).is_err() {
            gens.push(x);
            span = g.span(&gens);
            if span.len() == g.n {
                break;
            }
        }
    }
    gens
}

/// Closure of verified function-field maps under composition. Every
/// generator must carry a successful relation check; the identity of the
/// ambient tower seeds the table.
pub fn closure_of_maps(gens: &[FieldAuto], cap: usize) -> Result<Closure<FieldAuto>, GroupError> {
    let tower = gens
        .first()
        .map(|g| g.tower().clone())
        .expect("closure needs at least one generator");
    for g in gens {
        if !g.verified() || !g.tower().same_tower(&tower) {
            return Err(GroupError::UnverifiedGenerator(g.name().to_string()));
        }
    }
    let named: Vec<(String, FieldAuto)> = gens
        .iter()
        .map(|g| (g.name().to_string(), g.clone()))
        .collect();
    let mut closure = FiniteGroup::closure(
        tower.p(),
        &named,
        FieldAuto::identity(&tower),
        |a, b| {
            a.compose(b)
                .expect("verified maps on a single tower always compose")
        },
        cap,
    )?;
    closure.group = closure.group.with_origin(Origin::FromMaps);
    Ok(closure)
}

#[cfg(test)]
mod tests {
    use super::*;

    /// C_p as residues under addition.
    fn cyclic_table(p: u64) -> FiniteGroup {
        let gens = vec![("a".to_string(), 1u64)];
        FiniteGroup::closure(p, &gens, 0u64, |a, b| (a + b) % p, 64)
            .unwrap()
            .group
    }

    #[test]
    fn cyclic_closure_has_the_right_table() {
        let g = cyclic_table(5);
        assert_eq!(g.order(), 5);
        assert_eq!(g.element_order(g.gens()[0]), 5);
        assert!(g.is_abelian());
        assert!(g.is_p_group());
        for a in g.elements() {
            assert_eq!(g.mul(a, g.inv(a)), 0);
        }
    }

    #[test]
    fn closure_respects_the_cap() {
        let gens = vec![("a".to_string(), 1u64)];
        assert_eq!(
            FiniteGroup::closure(7, &gens, 0u64, |a, b| (a + b) % 7, 5).unwrap_err(),
            GroupError::CapExceeded(5)
        );
    }

    #[test]
    fn duplicate_generators_collapse() {
        let gens = vec![
            ("a".to_string(), 1u64),
            ("b".to_string(), 1u64),
            ("c".to_string(), 2u64),
        ];
        let c = FiniteGroup::closure(3, &gens, 0u64, |a, b| (a + b) % 3, 64).unwrap();
        assert_eq!(c.group.order(), 3);
        assert_eq!(c.gen_elements[0], c.gen_elements[1]);
        assert_ne!(c.gen_elements[0], c.gen_elements[2]);
        assert_eq!(c.group.gens().len(), 2);
    }

    /// S3 as permutations of three points — a non-abelian, non-p-group
    /// exercise for the table machinery.
    fn sym3() -> FiniteGroup {
        let gens = vec![
            ("r".to_string(), vec![1u8, 2, 0]),
            ("s".to_string(), vec![1u8, 0, 2]),
        ];
        let compose = |a: &Vec<u8>, b: &Vec<u8>| -> Vec<u8> {
            // a then b
            a.iter().map(|&i| b[i as usize]).collect()
        };
        FiniteGroup::closure(3, &gens, vec![0, 1, 2], compose, 64)
            .unwrap()
            .group
    }

    #[test]
    fn symmetric_group_closure() {
        let g = sym3();
        assert_eq!(g.order(), 6);
        assert!(!g.is_abelian());
        assert!(!g.is_p_group());
        assert_eq!(g.derived_subgroup().len(), 3);
        assert_eq!(g.center(), vec![0]);
        // The table satisfies associativity wherever we poke it.
        for a in g.elements() {
            for b in g.elements() {
                for c in g.elements() {
                    assert_eq!(g.mul(g.mul(a, b), c), g.mul(a, g.mul(b, c)));
                }
            }
        }
    }

    #[test]
    fn quotient_of_cyclic_nine_by_three() {
        let g = cyclic_table(3 * 3); // C9 additively, but p must stay 3
        let g = FiniteGroup { p: 3, ..g };
        let sub = g.span(&[g.pow(g.gens()[0], 3)]);
        assert_eq!(sub.len(), 3);
        assert!(g.is_normal(&sub));
        let (q, cmap) = g.quotient(&sub).unwrap();
        assert_eq!(q.order(), 3);
        assert_eq!(cmap.len(), 9);
        // The coset map is a homomorphism.
        for a in g.elements() {
            for b in g.elements() {
                assert_eq!(
                    q.mul(cmap[a as usize], cmap[b as usize]),
                    cmap[g.mul(a, b) as usize]
                );
            }
        }
    }

    #[test]
    fn subgroup_extraction_and_frattini() {
        let g = cyclic_table(9);
        let g = FiniteGroup { p: 3, ..g };
        let phi = g.frattini().unwrap();
        assert_eq!(phi.len(), 3); // Φ(C9) = C3
        let sub = g.subgroup(&phi).unwrap();
        assert_eq!(sub.order(), 3);
        assert!(sub.is_abelian());
        // Non-closed sets are rejected.
        assert_eq!(g.subgroup(&[0, 1]).unwrap_err(), GroupError::NotClosed);
    }

    #[test]
    fn table_validation_catches_broken_input() {
        // Valid C2.
        let ok = FiniteGroup::from_mul_table(2, &[vec![0, 1], vec![1, 0]]).unwrap();
        assert_eq!(ok.order(), 2);
        // Identity broken.
        assert!(matches!(
            FiniteGroup::from_mul_table(2, &[vec![1, 0], vec![0, 1]]),
            Err(GroupError::InvalidTable(_))
        ));
        // Out-of-range entry.
        assert!(matches!(
            FiniteGroup::from_mul_table(2, &[vec![0, 1], vec![1, 7]]),
            Err(GroupError::InvalidTable(_))
        ));
        // Associativity violation: a Latin square with identity that is not
        // a group table (order-5 quasigroup).
        let quasi = vec![
            vec![0, 1, 2, 3, 4],
            vec![1, 0, 3, 4, 2],
            vec![2, 4, 0, 1, 3],
            vec![3, 2, 4, 0, 1],
            vec![4, 3, 1, 2, 0],
        ];
        assert!(matches!(
            FiniteGroup::from_mul_table(5, &quasi),
            Err(GroupError::InvalidTable(msg)) if msg.contains("associativity")
        ));
    }

    #[test]
    fn powers_and_orders() {
        let g = cyclic_table(7);
        let a = g.gens()[0];
        assert_eq!(g.pow(a, 3), g.mul(g.mul(a, a), a));
        assert_eq!(g.pow(a, -1), g.inv(a));
        assert_eq!(g.pow(a, 0), 0);
        assert_eq!(g.element_order(0), 1);
    }
}
