//! Exhaustive ℘-span membership: decide whether u = w^p − w for some w in
//! the F_{p^e}-span of a given list of basis functions. Because
//! ℘(Σ aᵢbᵢ) = Σ (aᵢ^p bᵢ^p − aᵢbᵢ) in characteristic p, the ℘-image of each
//! candidate is a sum of precomputed per-coordinate contributions, and the
//! enumeration keeps running partial sums so the innermost step is one
//! addition and one comparison.

use rayon::prelude::*;

use crate::field::{Fq, FqElem};

use super::{Tower, TowerElem, TowerError};

/// Hard ceiling on the number of candidate tuples a span search may
/// enumerate.
pub const WP_CANDIDATE_BUDGET: u128 = 100_000_000;

/// Result of one span-membership search.
#[derive(Clone, Debug)]
pub struct WpOutcome {
    /// Size of the search space: (p^e)^(basis length).
    pub candidates: u128,
    /// A solution w with w^p − w = u, when one exists (the first in
    /// coefficient-lexicographic order).
    pub witness: Option<TowerElem>,
    /// True iff some member of the span solves ℘(w) = u.
    pub in_image: bool,
}

/// The elements of the subfield F_{p^e} inside the constant field F_{p^k}
/// (requires e | k), in index order.
fn subfield_elements(fq: &Fq, ext: u32) -> Result<Vec<FqElem>, TowerError> {
    if ext == 0 || fq.k() % ext != 0 {
        return Err(TowerError::CoefficientFieldUnavailable { ext, k: fq.k() });
    }
    let pe = fq.p().pow(ext);
    let sub: Vec<FqElem> = fq.elements().filter(|z| z.pow(pe) == *z).collect();
    debug_assert_eq!(sub.len() as u64, pe);
    Ok(sub)
}

/// Depth-first walk over the remaining coefficient digits; `acc` is the
/// ℘-image of the partial candidate. Returns the lexicographically first
/// completion solving the target equation.
fn descend(
    contrib: &[Vec<TowerElem>],
    level: usize,
    acc: &TowerElem,
    target: &TowerElem,
    digits: &mut Vec<usize>,
) -> Option<Vec<usize>> {
    if level == contrib.len() {
        return (acc == target).then(|| digits.clone());
    }
    for (d, c) in contrib[level].iter().enumerate() {
        digits.push(d);
        let found = descend(contrib, level + 1, &acc.add(c), target, digits);
        if found.is_some() {
            return found;
        }
        digits.pop();
    }
    None
}

/// Decide whether u lies in ℘(V) where V is the set of F_{p^e}-linear
/// combinations of `basis`. The search is exhaustive and deterministic; it
/// refuses to start when the space exceeds [`WP_CANDIDATE_BUDGET`].
pub fn wp_image_test(
    u: &TowerElem,
    basis: &[TowerElem],
    coeff_ext: u32,
) -> Result<WpOutcome, TowerError> {
    let tower = u.tower().clone();
    if basis.iter().any(|b| !tower.same_tower(b.tower())) {
        return Err(TowerError::MixedTowers);
    }
    let fq = tower.fq().clone();
    let p = fq.p();
    let sub = subfield_elements(&fq, coeff_ext)?;
    let m = sub.len();

    let candidates = (m as u128)
        .checked_pow(basis.len() as u32)
        .unwrap_or(u128::MAX);
    if candidates > WP_CANDIDATE_BUDGET {
        return Err(TowerError::SearchSpaceTooLarge(candidates));
    }

    // contribution[i][d] = ℘(sub[d]·basis[i]) = sub[d]^p·basis[i]^p − sub[d]·basis[i].
    let contrib: Vec<Vec<TowerElem>> = basis
        .iter()
        .map(|b| {
            let bp = b.pow(p);
            sub.iter()
                .map(|a| bp.scale(&a.pow(p)).sub(&b.scale(a)))
                .collect()
        })
        .collect();

    let digits: Option<Vec<usize>> = if basis.is_empty() {
        u.is_zero().then(Vec::new)
    } else {
        // Parallel over the first digit; each branch walks its subtree in
        // lexicographic order, and the branches are collected in digit order,
        // so the overall winner is the lexicographically first solution.
        (0..m)
            .into_par_iter()
            .map(|d0| {
                let mut digits = vec![d0];
                descend(&contrib, 1, &contrib[0][d0], u, &mut digits)
            })
            .collect::<Vec<_>>()
            .into_iter()
            .flatten()
            .next()
    };

    let witness = digits.map(|ds| {
        ds.iter()
            .zip(basis)
            .fold(tower.zero(), |w, (&d, b)| w.add(&b.scale(&sub[d])))
    });
    Ok(WpOutcome { candidates, in_image: witness.is_some(), witness })
}

/// The span test specialized to the curve (x^p − x)(y^p − y) = c over
/// F_{p^e}: is u = x·y^p − x^p·y a ℘-value of the F_{p^e}-span of
/// {1, x, y, x·y}?
pub fn am_wp_exclusion(p: u64, c: i64, coeff_ext: u32) -> Result<WpOutcome, TowerError> {
    let fq = Fq::new(p, coeff_ext)?;
    let base = Tower::base(&fq);
    let xb = base.x();
    let phi = base.from_int(c).div(&xb.pow(p).sub(&xb))?;
    let tower = base.extend(&phi)?;
    let x = tower.x();
    let y = tower.gen(1);
    let basis = [tower.one(), x.clone(), y.clone(), x.mul(&y)];
    let u = x.mul(&y.pow(p)).sub(&x.pow(p).mul(&y));
    wp_image_test(&u, &basis, coeff_ext)
}
