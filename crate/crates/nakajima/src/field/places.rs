//! Places of the rational function field F_q(x) and their valuations: finite
//! places given by monic irreducible polynomials, plus the place at infinity.
//! Also the partial-fraction decomposition used to isolate pole contributions
//! place by place.
//!
//! Conventions: v_π(f) is the net multiplicity of π in f, v_∞(f) =
//! deg(den) − deg(num), and the zero function takes the distinguished
//! valuation +∞ at every place. With place degrees deg(π) (and 1 at ∞) every
//! nonzero f satisfies Σ_P deg(P)·v_P(f) = 0.

use std::fmt;

use super::fq::{FieldError, Fq};
use super::poly::Poly;
use super::ratfunc::RatFunc;

/// A place of F_q(x).
#[derive(Clone, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum Place {
    /// Finite place: a monic irreducible polynomial π.
    Finite(Poly),
    /// The place at infinity (pole of x).
    Infinite,
}

impl Place {
    /// Wrap a monic irreducible; panics on invalid input (callers validate
    /// user-facing data before reaching here).
    pub fn finite(pi: Poly) -> Place {
        assert!(pi.is_monic() && pi.is_irreducible(), "finite place needs a monic irreducible");
        Place::Finite(pi)
    }

    /// Residue field degree over F_q: deg π at a finite place, 1 at infinity.
    pub fn degree(&self) -> u64 {
        match self {
            Place::Finite(pi) => pi.deg_or_zero() as u64,
            Place::Infinite => 1,
        }
    }
}

impl fmt::Display for Place {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Place::Finite(pi) => write!(f, "({})", pi),
            Place::Infinite => write!(f, "infinity"),
        }
    }
}

impl fmt::Debug for Place {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}", self)
    }
}

/// Value of v_P: an integer for nonzero functions, +∞ for the zero function.
#[derive(Clone, Copy, PartialEq, Eq, Debug)]
pub enum Valuation {
    Finite(i64),
    PlusInfinity,
}

impl Valuation {
    pub fn finite(self) -> Option<i64> {
        match self {
            Valuation::Finite(v) => Some(v),
            Valuation::PlusInfinity => None,
        }
    }

    pub fn is_plus_infinity(self) -> bool {
        matches!(self, Valuation::PlusInfinity)
    }
}

impl fmt::Display for Valuation {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Valuation::Finite(v) => write!(f, "{}", v),
            Valuation::PlusInfinity => write!(f, "+infinity"),
        }
    }
}

/// v_P(f). The zero function reports +∞ at every place.
pub fn place_valuation(f: &RatFunc, place: &Place) -> Valuation {
    if f.is_zero() {
        return Valuation::PlusInfinity;
    }
    match place {
        Place::Infinite => {
            let dn = f.num().deg_or_zero() as i64;
            let dd = f.den().deg_or_zero() as i64;
            Valuation::Finite(dd - dn)
        }
        Place::Finite(pi) => {
            // Canonical form is coprime, so at most one of the two counts.
            let up = f.num().multiplicity(pi) as i64;
            let down = f.den().multiplicity(pi) as i64;
            Valuation::Finite(up - down)
        }
    }
}

/// All places where f has a pole, with pole orders (−v_P), sorted with finite
/// places first (by polynomial order) and infinity last.
pub fn pole_places(f: &RatFunc) -> Vec<(Place, u64)> {
    let mut out = Vec::new();
    if f.is_zero() {
        return out;
    }
    let (_, den_factors) = f.den().factor();
    for (pi, e) in den_factors {
        out.push((Place::Finite(pi), e as u64));
    }
    out.sort();
    let dn = f.num().deg_or_zero() as i64;
    let dd = f.den().deg_or_zero() as i64;
    if dn > dd {
        out.push((Place::Infinite, (dn - dd) as u64));
    }
    out
}

/// One proper term c/π^j of a partial-fraction decomposition, deg c < deg π.
#[derive(Clone, PartialEq, Eq, Debug)]
pub struct FractionTerm {
    pub pi: Poly,
    pub power: u32,
    pub numerator: Poly,
}

/// f split as a polynomial part plus proper terms c/π^j with deg c < deg π,
/// one term per (π, j) with nonzero digit, sorted by (π, j).
#[derive(Clone, PartialEq, Eq, Debug)]
pub struct PartialFractions {
    pub poly_part: Poly,
    pub terms: Vec<FractionTerm>,
}

impl PartialFractions {
    /// Reassemble the original function (used to validate decompositions).
    pub fn recombine(&self, field: &Fq) -> RatFunc {
        let mut acc = RatFunc::from_poly(self.poly_part.clone());
        for t in &self.terms {
            let den = t.pi.pow(t.power as u64);
            let term = RatFunc::new(t.numerator.clone(), den).expect("nonzero denominator");
            acc = acc.add(&term);
        }
        let _ = field;
        acc
    }
}

/// Partial-fraction decomposition of f over F_q(x).
pub fn partial_fractions(f: &RatFunc) -> Result<PartialFractions, FieldError> {
    let field = f.field().clone();
    if f.is_zero() {
        return Ok(PartialFractions { poly_part: Poly::zero(&field), terms: Vec::new() });
    }
    // Split off the polynomial part: num = q·den + r.
    let (poly_part, r) = f.num().divrem(f.den())?;
    if r.is_zero() {
        return Ok(PartialFractions { poly_part, terms: Vec::new() });
    }
    let (_, den_factors) = f.den().factor();
    // CRT: peel one prime-power component at a time. With den = π^e · M and
    // gcd(π, M) = 1, the π-component numerator is t = r·M^{-1} mod π^e.
    let mut terms: Vec<FractionTerm> = Vec::new();
    let mut rem_num = r;
    let mut rem_den = f.den().clone();
    for (pi, e) in &den_factors {
        let pie = pi.pow(*e as u64);
        let m = rem_den.divrem(&pie)?.0;
        let t = if m.is_one() {
            rem_num.rem(&pie)?
        } else {
            // Invert M modulo π^e.
            let (g, s, _) = m.xgcd(&pie);
            debug_assert!(g.is_one(), "denominator factors must be coprime");
            rem_num.mul(&s).rem(&pie)?
        };
        // Remaining fraction: (rem_num − t·M)/ (π^e · M) = ((rem_num − tM)/π^e) / M.
        let diff = rem_num.sub(&t.mul(&m));
        let (next_num, check) = diff.divrem(&pie)?;
        debug_assert!(check.is_zero(), "prime-power component must divide exactly");
        rem_num = next_num;
        rem_den = m;
        // π-adic digits of t: t = Σ a_i π^i, so t/π^e = Σ a_{e-j}/π^j.
        let mut digits = Vec::with_capacity(*e as usize);
        let mut cur = t;
        for _ in 0..*e {
            let (q, a) = cur.divrem(pi)?;
            digits.push(a);
            cur = q;
        }
        debug_assert!(cur.is_zero());
        for (i, a) in digits.into_iter().enumerate() {
            if !a.is_zero() {
                terms.push(FractionTerm {
                    pi: pi.clone(),
                    power: *e - i as u32,
                    numerator: a,
                });
            }
        }
    }
    debug_assert!(rem_num.is_zero(), "proper fraction fully distributed");
    terms.sort_by(|a, b| a.pi.cmp(&b.pi).then(a.power.cmp(&b.power)));
    Ok(PartialFractions { poly_part, terms })
}

#[cfg(test)]
mod tests {
    use super::*;

    fn f3() -> Fq {
        Fq::new(3, 1).unwrap()
    }

    fn rf(field: &Fq, num: &[i64], den: &[i64]) -> RatFunc {
        RatFunc::new(Poly::from_ints(field, num), Poly::from_ints(field, den)).unwrap()
    }

    #[test]
    fn valuations_at_finite_and_infinite_places() {
        let f = f3();
        let x_place = Place::finite(Poly::from_ints(&f, &[0, 1]));
        let x_minus_1 = Place::finite(Poly::from_ints(&f, &[-1, 1]));
        // g = (x^2 - 1)/x^3
        let g = rf(&f, &[-1, 0, 1], &[0, 0, 0, 1]);
        assert_eq!(place_valuation(&g, &x_place), Valuation::Finite(-3));
        assert_eq!(place_valuation(&g, &x_minus_1), Valuation::Finite(1));
        assert_eq!(place_valuation(&g, &Place::Infinite), Valuation::Finite(1));
        // x itself: simple zero at x, simple pole at infinity.
        let x = RatFunc::x(&f);
        assert_eq!(place_valuation(&x, &x_place), Valuation::Finite(1));
        assert_eq!(place_valuation(&x, &Place::Infinite), Valuation::Finite(-1));
    }

    #[test]
    fn zero_function_has_plus_infinity_everywhere() {
        let f = f3();
        let z = RatFunc::zero(&f);
        assert!(place_valuation(&z, &Place::Infinite).is_plus_infinity());
        let pl = Place::finite(Poly::from_ints(&f, &[0, 1]));
        assert!(place_valuation(&z, &pl).is_plus_infinity());
        assert!(pole_places(&z).is_empty());
    }

    #[test]
    fn degree_weighted_valuations_sum_to_zero() {
        // Σ_P deg(P)·v_P(f) = 0 for assorted nonzero functions, including one
        // whose zeros live at a quadratic place.
        let f = f3();
        let samples = vec![
            rf(&f, &[-1, 0, 1], &[0, 0, 0, 1]),
            rf(&f, &[1, 0, 1], &[0, -1, 0, 1]), // (x^2+1)/(x^3-x): x^2+1 irreducible
            rf(&f, &[2], &[1, 1]),
            rf(&f, &[0, 0, 0, 0, 1], &[1, 1, 1]),
        ];
        for g in samples {
            let mut total: i64 = 0;
            for poly in [g.num(), g.den()] {
                if poly.degree() == Some(0) {
                    continue;
                }
                let (_, factors) = poly.factor();
                for (pi, _) in factors {
                    let place = Place::Finite(pi);
                    let v = place_valuation(&g, &place).finite().unwrap();
                    total += place.degree() as i64 * v;
                }
            }
            total += place_valuation(&g, &Place::Infinite).finite().unwrap();
            assert_eq!(total, 0, "sum of deg·v over all places of {}", g);
        }
    }

    #[test]
    fn pole_places_orders() {
        let f = f3();
        // x^5/(x-1)^2 has a double pole at x=1 and a triple pole at infinity.
        let g = RatFunc::new(
            Poly::from_ints(&f, &[0, 0, 0, 0, 0, 1]),
            Poly::from_ints(&f, &[-1, 1]).pow(2),
        )
        .unwrap();
        let poles = pole_places(&g);
        assert_eq!(poles.len(), 2);
        assert_eq!(poles[0], (Place::Finite(Poly::from_ints(&f, &[-1, 1])), 2));
        assert_eq!(poles[1], (Place::Infinite, 3));
    }

    #[test]
    fn partial_fractions_two_simple_poles() {
        // 1/(x^2 - 1) = 2/(x - 1) + 1/(x + 1) over F_3.
        let f = f3();
        let g = rf(&f, &[1], &[-1, 0, 1]);
        let pf = partial_fractions(&g).unwrap();
        assert!(pf.poly_part.is_zero());
        assert_eq!(pf.terms.len(), 2);
        let expect = vec![
            FractionTerm {
                pi: Poly::from_ints(&f, &[1, 1]),
                power: 1,
                numerator: Poly::from_ints(&f, &[1]),
            },
            FractionTerm {
                pi: Poly::from_ints(&f, &[2, 1]),
                power: 1,
                numerator: Poly::from_ints(&f, &[2]),
            },
        ];
        assert_eq!(pf.terms, expect);
        assert_eq!(pf.recombine(&f), g);
    }

    #[test]
    fn partial_fractions_recombine_assorted() {
        let f = f3();
        let f9 = Fq::new(3, 2).unwrap();
        let samples = vec![
            rf(&f, &[1, 1, 0, 0, 1], &[1, 2, 1, 0, 0, 1]),
            rf(&f, &[0, 0, 0, 1], &[1, 1]), // improper: nonzero polynomial part
            rf(&f, &[1, 0, 1], &[0, 0, 1]), // repeated pole at x
            rf(&f9, &[1, 3, 5], &[0, 1, 0, 1]),
        ];
        for g in samples {
            let pf = partial_fractions(&g).unwrap();
            for t in &pf.terms {
                assert!(t.pi.is_monic() && t.pi.is_irreducible());
                assert!(t.numerator.deg_or_zero() < t.pi.deg_or_zero());
                assert!(!t.numerator.is_zero());
                assert!(t.power >= 1);
            }
            assert_eq!(pf.recombine(g.field()), g, "recombining {}", g);
        }
    }
}
