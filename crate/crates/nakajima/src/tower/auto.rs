//! Automorphisms of an Artin–Schreier tower, given by images of the base
//! transcendental x and of each generator t_i. Maps compose by substitution,
//! (σ∘τ)(f) = σ(τ(f)), and verification checks that the images satisfy every
//! defining relation ℘(σ(t_i)) = σ(φ_i), i.e. that the assignment extends to
//! a field homomorphism fixing the constants.

use std::collections::{HashSet, VecDeque};
use std::fmt;
use std::hash::{Hash, Hasher};

use super::{Rep, Tower, TowerElem, TowerError};

/// A (candidate) tower automorphism.
#[derive(Clone)]
pub struct FieldAuto {
    name: String,
    tower: Tower,
    image_x: TowerElem,
    image_t: Vec<TowerElem>,
    verified: bool,
}

impl FieldAuto {
    /// Assemble a map from generator images; no verification is performed.
    pub fn make(
        name: &str,
        tower: &Tower,
        image_x: TowerElem,
        image_t: Vec<TowerElem>,
    ) -> Result<FieldAuto, TowerError> {
        if !image_x.tower().same_tower(tower)
            || image_t.iter().any(|e| !e.tower().same_tower(tower))
        {
            return Err(TowerError::MixedTowers);
        }
        if image_t.len() != tower.levels() {
            return Err(TowerError::MixedTowers);
        }
        Ok(FieldAuto {
            name: name.to_string(),
            tower: tower.clone(),
            image_x,
            image_t,
            verified: false,
        })
    }

    /// The identity map (trivially verified).
    pub fn identity(tower: &Tower) -> FieldAuto {
        FieldAuto {
            name: "id".to_string(),
            tower: tower.clone(),
            image_x: tower.x(),
            image_t: (1..=tower.levels()).map(|i| tower.gen(i)).collect(),
            verified: true,
        }
    }

    pub fn name(&self) -> &str {
        &self.name
    }

    pub fn tower(&self) -> &Tower {
        &self.tower
    }

    pub fn image_x(&self) -> &TowerElem {
        &self.image_x
    }

    pub fn image_t(&self, i: usize) -> &TowerElem {
        &self.image_t[i - 1]
    }

    pub fn verified(&self) -> bool {
        self.verified
    }

    /// Apply the map to an element by substituting generator images.
    /// Errors if a substituted denominator vanishes (the images then do not
    /// define a field map at all).
    pub fn apply(&self, elem: &TowerElem) -> Result<TowerElem, TowerError> {
        if !elem.tower().same_tower(&self.tower) {
            return Err(TowerError::MixedTowers);
        }
        self.apply_rep(elem.rep(), self.tower.levels())
    }

    fn apply_rep(&self, rep: &Rep, depth: usize) -> Result<TowerElem, TowerError> {
        match rep {
            Rep::Base(rf) => {
                let num = self.eval_poly_at_image_x(rf.num())?;
                // A constant denominator inverts in the coefficient field;
                // a full tower inversion is only needed past degree zero.
                match rf.den().degree() {
                    Some(0) => {
                        let c = rf.den().coeff(0).inv().expect("nonzero constant");
                        Ok(num.scale(&c))
                    }
                    _ => {
                        let den = self.eval_poly_at_image_x(rf.den())?;
                        num.div(&den)
                    }
                }
            }
            Rep::Ext(coeffs) => {
                // Horner in the image of this level's generator, skipping
                // multiplications while the accumulator is still zero.
                let t_img = &self.image_t[depth - 1];
                let mut acc = self.tower.zero();
                for c in coeffs.iter().rev() {
                    if !acc.is_zero() {
                        acc = acc.mul(t_img);
                    }
                    if !c.is_zero() {
                        acc = acc.add(&self.apply_rep(c, depth - 1)?);
                    }
                }
                Ok(acc)
            }
        }
    }

    fn eval_poly_at_image_x(
        &self,
        poly: &crate::field::Poly,
    ) -> Result<TowerElem, TowerError> {
        let mut acc = self.tower.zero();
        let n = poly.raw().len();
        for i in (0..n).rev() {
            if !acc.is_zero() {
                acc = acc.mul(&self.image_x);
            }
            let c = poly.coeff(i);
            if !c.is_zero() {
                acc = acc.add(&self.tower.constant(&c));
            }
        }
        Ok(acc)
    }

    /// Check every defining relation ℘(σ(t_i)) = σ(φ_i); on success the map
    /// is marked verified. Returns the indices (1-based) of failed relations.
    pub fn verify(&mut self) -> Result<Vec<usize>, TowerError> {
        let mut failures = Vec::new();
        for i in 1..=self.tower.levels() {
            let lhs = self.image_t[i - 1].artin_schreier();
            let rhs = self.apply(&self.tower.phi(i))?;
            if lhs != rhs {
                failures.push(i);
            }
        }
        if failures.is_empty() {
            self.verified = true;
        }
        Ok(failures)
    }

    /// σ∘τ: apply σ to τ's generator images.
    pub fn compose(&self, other: &FieldAuto) -> Result<FieldAuto, TowerError> {
        if !self.tower.same_tower(&other.tower) {
            return Err(TowerError::MixedTowers);
        }
        let image_x = self.apply(&other.image_x)?;
        let image_t = other
            .image_t
            .iter()
            .map(|e| self.apply(e))
            .collect::<Result<Vec<_>, _>>()?;
        Ok(FieldAuto {
            name: if self.name.is_empty() || other.name.is_empty() {
                String::new()
            } else {
                format!("{}*{}", self.name, other.name)
            },
            tower: self.tower.clone(),
            image_x,
            image_t,
            verified: self.verified && other.verified,
        })
    }

    /// n-fold composition with itself (n = 0 gives the identity).
    pub fn pow(&self, n: u64) -> Result<FieldAuto, TowerError> {
        let mut acc = FieldAuto::identity(&self.tower);
        for _ in 0..n {
            acc = acc.compose(self)?;
        }
        Ok(acc)
    }

    /// True when every generator maps to itself.
    pub fn is_identity(&self) -> bool {
        self.image_x == self.tower.x()
            && self
                .image_t
                .iter()
                .enumerate()
                .all(|(i, e)| *e == self.tower.gen(i + 1))
    }

    /// Smallest n ∈ [1, cap] with σ^n = id, if any.
    pub fn order(&self, cap: u64) -> Result<Option<u64>, TowerError> {
        let mut acc = self.clone();
        for n in 1..=cap {
            if acc.is_identity() {
                return Ok(Some(n));
            }
            acc = acc.compose(self)?;
        }
        Ok(None)
    }
}

impl PartialEq for FieldAuto {
    fn eq(&self, other: &Self) -> bool {
        self.tower.same_tower(&other.tower)
            && self.image_x == other.image_x
            && self.image_t == other.image_t
    }
}

impl Eq for FieldAuto {}

impl Hash for FieldAuto {
    fn hash<H: Hasher>(&self, state: &mut H) {
        self.image_x.hash(state);
        self.image_t.hash(state);
    }
}

impl fmt::Debug for FieldAuto {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}: x -> {}", self.name, self.image_x)?;
        for (i, e) in self.image_t.iter().enumerate() {
            write!(f, ", t{} -> {}", i + 1, e)?;
        }
        Ok(())
    }
}

/// Closure of a generating set under composition (BFS). Returns `None` when
/// the closure grows past `cap` elements.
pub fn map_closure(
    gens: &[FieldAuto],
    cap: usize,
) -> Result<Option<Vec<FieldAuto>>, TowerError> {
    let Some(first) = gens.first() else {
        return Ok(Some(Vec::new()));
    };
    let tower = first.tower().clone();
    let id = FieldAuto::identity(&tower);
    let mut seen: HashSet<FieldAuto> = HashSet::new();
    let mut out: Vec<FieldAuto> = Vec::new();
    let mut queue: VecDeque<FieldAuto> = VecDeque::new();
    seen.insert(id.clone());
    out.push(id.clone());
    queue.push_back(id);
    while let Some(cur) = queue.pop_front() {
        for g in gens {
            let next = cur.compose(g)?;
            if seen.insert(next.clone()) {
                if out.len() + 1 > cap {
                    return Ok(None);
                }
                out.push(next.clone());
                queue.push_back(next);
            }
        }
    }
    Ok(Some(out))
}
