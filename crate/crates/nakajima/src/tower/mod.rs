//! Iterated Artin–Schreier towers over F_q(x): fields
//! F_q(x)(t_1, …, t_m) with t_i^p − t_i = φ_i and each φ_i drawn from the
//! previous level. Elements are kept in normal form (degree < p in every
//! generator), so equality is structural. Depth is capped at 6 levels.

pub mod auto;
pub mod expr;
pub mod reduce;
pub mod wp;

use std::fmt;
use std::hash::{Hash, Hasher};
use std::sync::Arc;

use thiserror::Error;

use crate::field::{FieldError, Fq, FqElem, RatFunc};

/// Maximum number of Artin–Schreier steps a tower may stack.
pub const MAX_LEVELS: usize = 6;

#[derive(Debug, Error, PartialEq, Eq)]
pub enum TowerError {
    #[error(transparent)]
    Field(#[from] FieldError),
    /// Operands belong to different towers.
    #[error("elements come from different towers")]
    MixedTowers,
    /// Inversion hit a zero divisor: either dividing by zero or the tower is
    /// degenerate (some defining φ_i is of the form z^p − z, so the step is
    /// not a field extension).
    #[error("element is not invertible in this tower")]
    NotInvertible,
    #[error("tower depth {0} exceeds the supported maximum of {MAX_LEVELS}")]
    DepthLimit(usize),
    /// The defining function reduces to one with no poles at all, so the
    /// extension it defines is unramified everywhere and has no well-defined
    /// ramification data to feed the genus formula.
    #[error("defining function is everywhere unramified after reduction")]
    EverywhereUnramifiedInput,
    /// An exhaustive search would need more candidates than the hard budget
    /// allows; the caller must shrink the coefficient field or basis.
    #[error("search space too large: the test needs {0} candidates")]
    SearchSpaceTooLarge(u128),
    /// A defining relation t^p − t = 0 adjoins nothing (the right-hand side
    /// must be a nonzero function).
    #[error("defining relation has zero right-hand side")]
    ZeroRelation,
    /// Reduction of the zero function is meaningless: 0 is a ℘-image and has
    /// no pole data.
    #[error("cannot reduce the zero function")]
    ZeroInput,
    /// Span coefficients were requested from F_{p^e}, but that field does not
    /// embed in the constant field F_{p^k} (e must divide k).
    #[error("coefficient field F_p^{ext} does not embed in the constant field F_p^{k}")]
    CoefficientFieldUnavailable { ext: u32, k: u32 },
}

/// Normal-form representation: a base rational function at depth 0, or a
/// length-p coefficient vector (little-endian in the level's generator).
#[derive(Clone, PartialEq, Eq, Hash)]
pub(crate) enum Rep {
    Base(RatFunc),
    Ext(Vec<Rep>),
}

impl Rep {
    pub(crate) fn is_zero(&self) -> bool {
        match self {
            Rep::Base(r) => r.is_zero(),
            Rep::Ext(v) => v.iter().all(Rep::is_zero),
        }
    }
}

struct TowerData {
    fq: Fq,
    p: u64,
    /// phis[i] is the defining function of generator t_{i+1}, represented at
    /// depth i (an element of the field below the new generator).
    phis: Vec<Rep>,
}

/// An Artin–Schreier tower over F_q(x).
#[derive(Clone)]
pub struct Tower {
    data: Arc<TowerData>,
}

/// An element of a tower, always in normal form at full depth.
#[derive(Clone)]
pub struct TowerElem {
    tower: Tower,
    rep: Rep,
}

impl TowerData {
    fn zero_rep(&self, depth: usize) -> Rep {
        if depth == 0 {
            Rep::Base(RatFunc::zero(&self.fq))
        } else {
            Rep::Ext((0..self.p).map(|_| self.zero_rep(depth - 1)).collect())
        }
    }

    fn is_zero_rep(rep: &Rep) -> bool {
        match rep {
            Rep::Base(r) => r.is_zero(),
            Rep::Ext(v) => v.iter().all(Self::is_zero_rep),
        }
    }

    /// Embed a depth-d rep at depth `to` (constant in the new generators).
    fn lift_rep(&self, rep: Rep, from: usize, to: usize) -> Rep {
        let mut cur = rep;
        for d in from..to {
            let mut v = Vec::with_capacity(self.p as usize);
            v.push(cur);
            for _ in 1..self.p {
                v.push(self.zero_rep(d));
            }
            cur = Rep::Ext(v);
        }
        cur
    }

    fn add_rep(&self, a: &Rep, b: &Rep) -> Rep {
        match (a, b) {
            (Rep::Base(x), Rep::Base(y)) => Rep::Base(x.add(y)),
            (Rep::Ext(x), Rep::Ext(y)) => {
                Rep::Ext(x.iter().zip(y.iter()).map(|(u, v)| self.add_rep(u, v)).collect())
            }
            _ => unreachable!("depth mismatch in tower addition"),
        }
    }

    fn neg_rep(&self, a: &Rep) -> Rep {
        match a {
            Rep::Base(x) => Rep::Base(x.neg()),
            Rep::Ext(v) => Rep::Ext(v.iter().map(|u| self.neg_rep(u)).collect()),
        }
    }

    fn scale_rep(&self, a: &Rep, s: &FqElem) -> Rep {
        match a {
            Rep::Base(x) => Rep::Base(x.scale(s)),
            Rep::Ext(v) => Rep::Ext(v.iter().map(|u| self.scale_rep(u, s)).collect()),
        }
    }

    fn mul_rep(&self, depth: usize, a: &Rep, b: &Rep) -> Rep {
        match (a, b) {
            (Rep::Base(x), Rep::Base(y)) => Rep::Base(x.mul(y)),
            (Rep::Ext(x), Rep::Ext(y)) => {
                let p = self.p as usize;
                // Convolution in the level generator, then reduction by
                // t^p = t + φ (one pass: top degree is 2p−2 < 2p−1).
                let mut out: Vec<Rep> = (0..2 * p - 1).map(|_| self.zero_rep(depth - 1)).collect();
                for (i, xi) in x.iter().enumerate() {
                    if Self::is_zero_rep(xi) {
                        continue;
                    }
                    for (j, yj) in y.iter().enumerate() {
                        if Self::is_zero_rep(yj) {
                            continue;
                        }
                        let prod = self.mul_rep(depth - 1, xi, yj);
                        out[i + j] = self.add_rep(&out[i + j], &prod);
                    }
                }
                let phi = &self.phis[depth - 1];
                for j in (p..2 * p - 1).rev() {
                    if Self::is_zero_rep(&out[j]) {
                        continue;
                    }
                    let c = out[j].clone();
                    out[j - p + 1] = self.add_rep(&out[j - p + 1], &c);
                    let cphi = self.mul_rep(depth - 1, &c, phi);
                    out[j - p] = self.add_rep(&out[j - p], &cphi);
                }
                out.truncate(p);
                Rep::Ext(out)
            }
            _ => unreachable!("depth mismatch in tower multiplication"),
        }
    }

    fn pow_rep(&self, depth: usize, a: &Rep, mut e: u64) -> Rep {
        let mut acc = self.lift_rep(Rep::Base(RatFunc::one(&self.fq)), 0, depth);
        let mut base = a.clone();
        while e > 0 {
            if e & 1 == 1 {
                acc = self.mul_rep(depth, &acc, &base);
            }
            base = self.mul_rep(depth, &base, &base);
            e >>= 1;
        }
        acc
    }

    /// Invert by solving the p×p linear system (mul-by-a) · v = 1 over the
    /// field one level down; recurses down to rational functions.
    fn inv_rep(&self, depth: usize, a: &Rep) -> Result<Rep, TowerError> {
        match a {
            Rep::Base(x) => Ok(Rep::Base(x.inv().map_err(|_| TowerError::NotInvertible)?)),
            Rep::Ext(_) => {
                let p = self.p as usize;
                // Columns: a · t^j in normal form, j = 0..p−1.
                let mut cols: Vec<Vec<Rep>> = Vec::with_capacity(p);
                let mut tj = self.lift_rep(Rep::Base(RatFunc::one(&self.fq)), 0, depth);
                let tgen = {
                    let mut v: Vec<Rep> = (0..p).map(|_| self.zero_rep(depth - 1)).collect();
                    v[1] = self.lift_rep(Rep::Base(RatFunc::one(&self.fq)), 0, depth - 1);
                    Rep::Ext(v)
                };
                for j in 0..p {
                    if j > 0 {
                        tj = self.mul_rep(depth, &tj, &tgen);
                    }
                    let prod = self.mul_rep(depth, a, &tj);
                    let Rep::Ext(coeffs) = prod else { unreachable!() };
                    cols.push(coeffs);
                }
                // Augmented system M v = e0 with M[i][j] = cols[j][i].
                let mut m: Vec<Vec<Rep>> =
                    (0..p).map(|i| (0..p).map(|j| cols[j][i].clone()).collect()).collect();
                let mut rhs: Vec<Rep> = (0..p).map(|_| self.zero_rep(depth - 1)).collect();
                rhs[0] = self.lift_rep(Rep::Base(RatFunc::one(&self.fq)), 0, depth - 1);
                for col in 0..p {
                    let pivot = (col..p).find(|&r| !Self::is_zero_rep(&m[r][col]));
                    let Some(pr) = pivot else {
                        return Err(TowerError::NotInvertible);
                    };
                    m.swap(col, pr);
                    rhs.swap(col, pr);
                    let inv = self.inv_rep(depth - 1, &m[col][col])?;
                    for j in 0..p {
                        m[col][j] = self.mul_rep(depth - 1, &m[col][j], &inv);
                    }
                    rhs[col] = self.mul_rep(depth - 1, &rhs[col], &inv);
                    for r in 0..p {
                        if r == col || Self::is_zero_rep(&m[r][col]) {
                            continue;
                        }
                        let f = m[r][col].clone();
                        for j in 0..p {
                            let t = self.mul_rep(depth - 1, &f, &m[col][j]);
                            m[r][j] = self.add_rep(&m[r][j], &self.neg_rep(&t));
                        }
                        let t = self.mul_rep(depth - 1, &f, &rhs[col]);
                        rhs[r] = self.add_rep(&rhs[r], &self.neg_rep(&t));
                    }
                }
                Ok(Rep::Ext(rhs))
            }
        }
    }
}

impl Tower {
    /// The depth-0 tower: the rational function field F_q(x) itself.
    pub fn base(fq: &Fq) -> Tower {
        Tower { data: Arc::new(TowerData { fq: fq.clone(), p: fq.p(), phis: Vec::new() }) }
    }

    /// Adjoin one Artin–Schreier generator t with t^p − t = φ (φ ≠ 0).
    pub fn extend(&self, phi: &TowerElem) -> Result<Tower, TowerError> {
        if !self.same_tower(&phi.tower) {
            return Err(TowerError::MixedTowers);
        }
        if phi.is_zero() {
            return Err(TowerError::ZeroRelation);
        }
        if self.levels() + 1 > MAX_LEVELS {
            return Err(TowerError::DepthLimit(self.levels() + 1));
        }
        let mut phis = self.data.phis.clone();
        phis.push(phi.rep.clone());
        Ok(Tower {
            data: Arc::new(TowerData { fq: self.data.fq.clone(), p: self.data.p, phis }),
        })
    }

    pub fn fq(&self) -> &Fq {
        &self.data.fq
    }

    pub fn p(&self) -> u64 {
        self.data.p
    }

    /// Number of Artin–Schreier steps stacked on F_q(x).
    pub fn levels(&self) -> usize {
        self.data.phis.len()
    }

    /// Structural equality of towers (same constants, same relations).
    pub fn same_tower(&self, other: &Tower) -> bool {
        Arc::ptr_eq(&self.data, &other.data)
            || (self.data.fq.same_field(&other.data.fq) && self.data.phis == other.data.phis)
    }

    pub fn zero(&self) -> TowerElem {
        TowerElem { tower: self.clone(), rep: self.data.zero_rep(self.levels()) }
    }

    pub fn one(&self) -> TowerElem {
        self.from_ratfunc(&RatFunc::one(&self.data.fq))
    }

    pub fn constant(&self, c: &FqElem) -> TowerElem {
        self.from_ratfunc(&RatFunc::constant(c))
    }

    pub fn from_int(&self, n: i64) -> TowerElem {
        self.constant(&self.data.fq.from_int(n))
    }

    /// The transcendental x of the base rational function field.
    pub fn x(&self) -> TowerElem {
        self.from_ratfunc(&RatFunc::x(&self.data.fq))
    }

    pub fn from_ratfunc(&self, f: &RatFunc) -> TowerElem {
        let rep = self.data.lift_rep(Rep::Base(f.clone()), 0, self.levels());
        TowerElem { tower: self.clone(), rep }
    }

    /// Generator t_i (1-indexed, i ≤ levels).
    pub fn gen(&self, i: usize) -> TowerElem {
        assert!(i >= 1 && i <= self.levels(), "generator index out of range");
        let p = self.data.p as usize;
        let mut v: Vec<Rep> = (0..p).map(|_| self.data.zero_rep(i - 1)).collect();
        v[1] = self.data.lift_rep(Rep::Base(RatFunc::one(&self.data.fq)), 0, i - 1);
        let rep = self.data.lift_rep(Rep::Ext(v), i, self.levels());
        TowerElem { tower: self.clone(), rep }
    }

    /// The defining function φ_i of generator t_i, lifted into this tower.
    pub fn phi(&self, i: usize) -> TowerElem {
        assert!(i >= 1 && i <= self.levels(), "relation index out of range");
        let rep = self.data.lift_rep(self.data.phis[i - 1].clone(), i - 1, self.levels());
        TowerElem { tower: self.clone(), rep }
    }
}

impl TowerElem {
    pub fn tower(&self) -> &Tower {
        &self.tower
    }

    pub(crate) fn rep(&self) -> &Rep {
        &self.rep
    }

    pub fn is_zero(&self) -> bool {
        TowerData::is_zero_rep(&self.rep)
    }

    fn check(&self, other: &TowerElem) -> Result<(), TowerError> {
        if self.tower.same_tower(&other.tower) {
            Ok(())
        } else {
            Err(TowerError::MixedTowers)
        }
    }

    pub fn add(&self, other: &TowerElem) -> TowerElem {
        self.check(other).expect("tower mismatch");
        TowerElem {
            tower: self.tower.clone(),
            rep: self.tower.data.add_rep(&self.rep, &other.rep),
        }
    }

    pub fn sub(&self, other: &TowerElem) -> TowerElem {
        self.add(&other.neg())
    }

    pub fn neg(&self) -> TowerElem {
        TowerElem { tower: self.tower.clone(), rep: self.tower.data.neg_rep(&self.rep) }
    }

    pub fn mul(&self, other: &TowerElem) -> TowerElem {
        self.check(other).expect("tower mismatch");
        TowerElem {
            tower: self.tower.clone(),
            rep: self.tower.data.mul_rep(self.tower.levels(), &self.rep, &other.rep),
        }
    }

    pub fn scale(&self, s: &FqElem) -> TowerElem {
        TowerElem { tower: self.tower.clone(), rep: self.tower.data.scale_rep(&self.rep, s) }
    }

    pub fn pow(&self, e: u64) -> TowerElem {
        TowerElem {
            tower: self.tower.clone(),
            rep: self.tower.data.pow_rep(self.tower.levels(), &self.rep, e),
        }
    }

    pub fn inv(&self) -> Result<TowerElem, TowerError> {
        if self.is_zero() {
            return Err(TowerError::NotInvertible);
        }
        Ok(TowerElem {
            tower: self.tower.clone(),
            rep: self.tower.data.inv_rep(self.tower.levels(), &self.rep)?,
        })
    }

    pub fn div(&self, other: &TowerElem) -> Result<TowerElem, TowerError> {
        Ok(self.mul(&other.inv()?))
    }

    /// The Artin–Schreier operator ℘(z) = z^p − z.
    pub fn artin_schreier(&self) -> TowerElem {
        self.pow(self.tower.p()).sub(self)
    }

    /// When the element lies in the base rational function field, return it.
    pub fn as_base(&self) -> Option<RatFunc> {
        fn descend(rep: &Rep) -> Option<RatFunc> {
            match rep {
                Rep::Base(r) => Some(r.clone()),
                Rep::Ext(v) => {
                    for higher in &v[1..] {
                        if !TowerData::is_zero_rep(higher) {
                            return None;
                        }
                    }
                    descend(&v[0])
                }
            }
        }
        descend(&self.rep)
    }

    /// Evaluate at a point (x₀, t₁, …, t_m) with coordinates in the
    /// coefficient field; `coords` must have length levels+1. Errors when a
    /// base denominator vanishes at x₀ (the element has a pole there).
    pub fn eval_at(&self, coords: &[FqElem]) -> Result<FqElem, TowerError> {
        if coords.len() != self.tower.levels() + 1
            || coords.iter().any(|c| !c.field().same_field(self.tower.fq()))
        {
            return Err(TowerError::MixedTowers);
        }
        fn ev(rep: &Rep, depth: usize, coords: &[FqElem]) -> Result<FqElem, TowerError> {
            match rep {
                Rep::Base(rf) => Ok(rf.eval(&coords[0])?),
                Rep::Ext(v) => {
                    let t = &coords[depth];
                    let mut acc = t.field().zero();
                    for c in v.iter().rev() {
                        acc = acc.mul(t).add(&ev(c, depth - 1, coords)?);
                    }
                    Ok(acc)
                }
            }
        }
        ev(&self.rep, self.tower.levels(), coords)
    }
}

impl PartialEq for TowerElem {
    fn eq(&self, other: &Self) -> bool {
        self.tower.same_tower(&other.tower) && self.rep == other.rep
    }
}

impl Eq for TowerElem {}

impl Hash for TowerElem {
    fn hash<H: Hasher>(&self, state: &mut H) {
        self.rep.hash(state);
    }
}

impl fmt::Display for TowerElem {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        fn rec(rep: &Rep, depth: usize, f: &mut fmt::Formatter<'_>) -> fmt::Result {
            match rep {
                Rep::Base(r) => write!(f, "{}", r),
                Rep::Ext(v) => {
                    let mut first = true;
                    for (j, c) in v.iter().enumerate() {
                        if TowerData::is_zero_rep(c) {
                            continue;
                        }
                        if !first {
                            write!(f, " + ")?;
                        }
                        first = false;
                        write!(f, "(")?;
                        rec(c, depth - 1, f)?;
                        write!(f, ")")?;
                        match j {
                            0 => {}
                            1 => write!(f, "*t{}", depth)?,
                            _ => write!(f, "*t{}^{}", depth, j)?,
                        }
                    }
                    if first {
                        write!(f, "0")?;
                    }
                    Ok(())
                }
            }
        }
        rec(&self.rep, self.tower.levels(), f)
    }
}

impl fmt::Debug for TowerElem {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}", self)
    }
}

/// Convenience: build a tower from base-field relations given as rational
/// functions evaluated level by level by `next`, which receives the tower
/// built so far and returns the next defining function.
pub fn build_tower<F>(fq: &Fq, steps: usize, mut next: F) -> Result<Tower, TowerError>
where
    F: FnMut(&Tower, usize) -> Result<TowerElem, TowerError>,
{
    let mut t = Tower::base(fq);
    for i in 0..steps {
        let phi = next(&t, i)?;
        t = t.extend(&phi)?;
    }
    Ok(t)
}

// Re-exports for the rest of the crate.
pub use auto::FieldAuto;
pub use expr::{eval_expr, eval_str, idents, parse_expr, Expr, ExprError};
pub use reduce::{as_reduce, as_reduce_all, as_step_genus, AsReduced, PlaceReduction, StepGenus};
pub use wp::{am_wp_exclusion, wp_image_test, WpOutcome, WP_CANDIDATE_BUDGET};

#[cfg(test)]
mod tests {
    use super::*;

    /// Tower for (x^3−x)(y^3−y) = 1 over F_3, then z^3−z = x·y^3 − x^3·y.
    fn xc_tower_p3() -> Tower {
        let fq = Fq::new(3, 1).unwrap();
        let base = Tower::base(&fq);
        let x = base.x();
        let phi1 = base
            .one()
            .div(&x.pow(3).sub(&x))
            .unwrap();
        let t1 = base.extend(&phi1).unwrap();
        let x = t1.x();
        let y = t1.gen(1);
        let phi2 = x.mul(&y.pow(3)).sub(&x.pow(3).mul(&y));
        t1.extend(&phi2).unwrap()
    }

    #[test]
    fn generators_satisfy_their_relations() {
        let t = xc_tower_p3();
        for i in 1..=t.levels() {
            let g = t.gen(i);
            assert_eq!(g.artin_schreier(), t.phi(i), "relation for t{}", i);
        }
    }

    #[test]
    fn normal_form_keeps_degree_below_p() {
        let t = xc_tower_p3();
        let y = t.gen(1);
        let z = t.gen(2);
        // y^3 = y + φ1 exactly.
        assert_eq!(y.pow(3), y.add(&t.phi(1)));
        // A big product still lands in normal form and the relation preserves it.
        let w = y.add(&z).add(&t.x());
        let cube = w.pow(3);
        // Freshman's dream: (y + z + x)^3 = y^3 + z^3 + x^3 in characteristic 3.
        let expect = y.pow(3).add(&z.pow(3)).add(&t.x().pow(3));
        assert_eq!(cube, expect);
    }

    #[test]
    fn inverse_round_trips() {
        let t = xc_tower_p3();
        let x = t.x();
        let y = t.gen(1);
        let z = t.gen(2);
        let samples = vec![
            y.clone(),
            z.clone(),
            x.add(&y),
            y.mul(&z).add(&t.one()),
            x.mul(&y).sub(&z).add(&t.from_int(2)),
        ];
        for e in samples {
            let inv = e.inv().unwrap();
            assert_eq!(e.mul(&inv), t.one(), "e * e^-1 for {}", e);
        }
        assert_eq!(t.zero().inv(), Err(TowerError::NotInvertible));
    }

    #[test]
    fn product_inverse_is_reversed_product_of_inverses() {
        let t = xc_tower_p3();
        let a = t.gen(1).add(&t.x());
        let b = t.gen(2).add(&t.one());
        let lhs = a.mul(&b).inv().unwrap();
        let rhs = b.inv().unwrap().mul(&a.inv().unwrap());
        assert_eq!(lhs, rhs);
    }

    #[test]
    fn frobenius_is_additive() {
        let t = xc_tower_p3();
        let a = t.gen(1).mul(&t.x()).add(&t.gen(2));
        let b = t.x().inv().unwrap().add(&t.gen(1));
        assert_eq!(a.add(&b).pow(3), a.pow(3).add(&b.pow(3)));
    }

    #[test]
    fn depth_limit_is_enforced() {
        let fq = Fq::new(3, 1).unwrap();
        let mut t = Tower::base(&fq);
        for _ in 0..MAX_LEVELS {
            let phi = t.x();
            t = t.extend(&phi).unwrap();
        }
        let phi = t.x();
        match t.extend(&phi) {
            Err(TowerError::DepthLimit(n)) => assert_eq!(n, MAX_LEVELS + 1),
            _ => panic!("expected a depth-limit error"),
        }
    }

    #[test]
    fn mixed_tower_elements_are_rejected() {
        let fq = Fq::new(3, 1).unwrap();
        let base = Tower::base(&fq);
        let t1 = base.extend(&base.x()).unwrap();
        let t2 = base.extend(&base.x().inv().unwrap()).unwrap();
        let a = t1.gen(1);
        let b = t2.gen(1);
        assert!(std::panic::catch_unwind(std::panic::AssertUnwindSafe(|| a.add(&b))).is_err());
    }

    #[test]
    fn degenerate_tower_surfaces_not_invertible() {
        // φ = x^3 − x = ℘(x) makes t^3 − t − φ reducible: (t − x) divides it.
        // t − x is then a zero divisor and inversion must fail.
        let fq = Fq::new(3, 1).unwrap();
        let base = Tower::base(&fq);
        let phi = base.x().pow(3).sub(&base.x());
        let t = base.extend(&phi).unwrap();
        let zero_divisor = t.gen(1).sub(&t.x());
        assert!(!zero_divisor.is_zero());
        assert_eq!(zero_divisor.inv(), Err(TowerError::NotInvertible));
    }
}
