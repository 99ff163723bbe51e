//! Rational functions over F_q(x) kept in canonical form: numerator and
//! denominator coprime, denominator monic. Equality, hashing, and display all
//! act on the canonical representative, so two expressions for the same
//! function always compare equal.

use std::fmt;
use std::hash::{Hash, Hasher};

use super::fq::{FieldError, Fq, FqElem};
use super::poly::Poly;

/// An element of the rational function field F_q(x).
#[derive(Clone)]
pub struct RatFunc {
    num: Poly,
    den: Poly,
}

impl RatFunc {
    /// Build and canonicalize `num/den`; errors if `den` is zero.
    pub fn new(num: Poly, den: Poly) -> Result<RatFunc, FieldError> {
        if den.is_zero() {
            return Err(FieldError::DivisionByZero(num.field().q()));
        }
        let mut r = RatFunc { num, den };
        r.canonicalize();
        Ok(r)
    }

    pub fn from_poly(p: Poly) -> RatFunc {
        let one = Poly::one(p.field());
        RatFunc { num: p, den: one }
    }

    pub fn zero(field: &Fq) -> RatFunc {
        RatFunc { num: Poly::zero(field), den: Poly::one(field) }
    }

    pub fn one(field: &Fq) -> RatFunc {
        RatFunc { num: Poly::one(field), den: Poly::one(field) }
    }

    pub fn x(field: &Fq) -> RatFunc {
        RatFunc { num: Poly::x(field), den: Poly::one(field) }
    }

    pub fn constant(e: &FqElem) -> RatFunc {
        RatFunc { num: Poly::constant(e), den: Poly::one(e.field()) }
    }

    pub fn from_int(field: &Fq, n: i64) -> RatFunc {
        RatFunc::constant(&field.from_int(n))
    }

    fn canonicalize(&mut self) {
        if self.num.is_zero() {
            self.den = Poly::one(self.num.field());
            return;
        }
        let g = self.num.gcd(&self.den);
        if g.degree() != Some(0) {
            self.num = self.num.divrem(&g).expect("gcd divides").0;
            self.den = self.den.divrem(&g).expect("gcd divides").0;
        }
        let lead_inv = self.den.lead().inv().expect("nonzero denominator");
        self.num = self.num.scale(&lead_inv);
        self.den = self.den.scale(&lead_inv);
    }

    pub fn field(&self) -> &Fq {
        self.num.field()
    }

    pub fn num(&self) -> &Poly {
        &self.num
    }

    pub fn den(&self) -> &Poly {
        &self.den
    }

    pub fn is_zero(&self) -> bool {
        self.num.is_zero()
    }

    pub fn is_one(&self) -> bool {
        self.num.is_one() && self.den.is_one()
    }

    /// True when the denominator is 1.
    pub fn is_polynomial(&self) -> bool {
        self.den.is_one()
    }

    /// True when the function is a constant field element.
    pub fn is_constant(&self) -> bool {
        self.den.is_one() && self.num.degree().map_or(true, |d| d == 0)
    }

    /// The constant value, when `is_constant()`.
    pub fn as_constant(&self) -> Option<FqElem> {
        if self.is_constant() {
            Some(self.num.coeff(0))
        } else {
            None
        }
    }

    pub fn add(&self, other: &RatFunc) -> RatFunc {
        let num = self.num.mul(&other.den).add(&other.num.mul(&self.den));
        let den = self.den.mul(&other.den);
        let mut r = RatFunc { num, den };
        r.canonicalize();
        r
    }

    pub fn sub(&self, other: &RatFunc) -> RatFunc {
        self.add(&other.neg())
    }

    pub fn neg(&self) -> RatFunc {
        RatFunc { num: self.num.neg(), den: self.den.clone() }
    }

    pub fn mul(&self, other: &RatFunc) -> RatFunc {
        let mut r =
            RatFunc { num: self.num.mul(&other.num), den: self.den.mul(&other.den) };
        r.canonicalize();
        r
    }

    pub fn scale(&self, s: &FqElem) -> RatFunc {
        let mut r = RatFunc { num: self.num.scale(s), den: self.den.clone() };
        r.canonicalize();
        r
    }

    pub fn inv(&self) -> Result<RatFunc, FieldError> {
        if self.is_zero() {
            return Err(FieldError::DivisionByZero(self.field().q()));
        }
        let mut r = RatFunc { num: self.den.clone(), den: self.num.clone() };
        r.canonicalize();
        Ok(r)
    }

    pub fn div(&self, other: &RatFunc) -> Result<RatFunc, FieldError> {
        Ok(self.mul(&other.inv()?))
    }

    /// Integer power; negative exponents invert (zero base errors then).
    pub fn pow(&self, e: i64) -> Result<RatFunc, FieldError> {
        let base = if e < 0 { self.inv()? } else { self.clone() };
        let mut n = e.unsigned_abs();
        let mut acc = RatFunc::one(self.field());
        let mut b = base;
        while n > 0 {
            if n & 1 == 1 {
                acc = acc.mul(&b);
            }
            b = b.mul(&b);
            n >>= 1;
        }
        Ok(acc)
    }

    /// Evaluate at a field point; errors where the denominator vanishes.
    pub fn eval(&self, at: &FqElem) -> Result<FqElem, FieldError> {
        let d = self.den.eval(at);
        if d.is_zero() {
            return Err(FieldError::DivisionByZero(self.field().q()));
        }
        self.num.eval(at).div(&d)
    }

    /// Coefficientwise Frobenius x -> x with coefficients raised to the p-th
    /// power composed with the identity on x — i.e. f^p as a function equals
    /// `self.pow(p)`; this instead maps Σ a_i x^i to Σ a_i^p x^i.
    pub fn coeff_frobenius(&self) -> RatFunc {
        let map = |p: &Poly| {
            let elems: Vec<FqElem> =
                (0..p.raw().len()).map(|i| p.coeff(i).frobenius()).collect();
            Poly::from_elems(p.field(), &elems)
        };
        let mut r = RatFunc { num: map(&self.num), den: map(&self.den) };
        r.canonicalize();
        r
    }

    /// Substitute another rational function for x.
    pub fn compose(&self, inner: &RatFunc) -> Result<RatFunc, FieldError> {
        let eval_poly = |p: &Poly| -> RatFunc {
            let mut acc = RatFunc::zero(self.field());
            for i in (0..p.raw().len()).rev() {
                acc = acc.mul(inner).add(&RatFunc::constant(&p.coeff(i)));
            }
            acc
        };
        let den = eval_poly(&self.den);
        if den.is_zero() {
            return Err(FieldError::DivisionByZero(self.field().q()));
        }
        eval_poly(&self.num).div(&den)
    }
}

impl PartialEq for RatFunc {
    fn eq(&self, other: &Self) -> bool {
        self.num == other.num && self.den == other.den
    }
}

impl Eq for RatFunc {}

impl Hash for RatFunc {
    fn hash<H: Hasher>(&self, state: &mut H) {
        self.num.hash(state);
        self.den.hash(state);
    }
}

impl fmt::Display for RatFunc {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.den.is_one() {
            write!(f, "{}", self.num)
        } else {
            write!(f, "({})/({})", self.num, self.den)
        }
    }
}

impl fmt::Debug for RatFunc {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}", self)
    }
}
