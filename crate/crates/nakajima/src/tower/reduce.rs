//! Artin–Schreier reduction over F_q(x): replace a defining function φ by a
//! canonical representative of φ + ℘(F_q(x)) whose pole orders are all
//! coprime to p, and read the genus of the degree-p step y^p − y = φ off the
//! resulting ramification data.
//!
//! At a finite place π (degree d) a pole of order m = p·s with leading Laurent
//! coefficient λ is lowered by subtracting ℘(ρ/π^s), where ρ is the p-th root
//! of λ in the residue field F_{q^d}; at infinity the correction is ρ·x^s with
//! ρ = λ^{q/p}. Either move strictly lowers the pole order at that place and
//! touches no other place, so the loop terminates with every pole order
//! prime-to-p (ramified) or zero (unramified).

use crate::field::{place_valuation, pole_places, Place, Poly, RatFunc};

use super::TowerError;

/// Canonical representative and its ramification data.
#[derive(Clone, Debug)]
pub struct AsReduced {
    /// φ with all p-divisible pole orders removed.
    pub reduced: RatFunc,
    /// Places where the reduced function has a pole, with the pole order m_P
    /// (every m_P is coprime to p). Finite places first, infinity last.
    pub ramified: Vec<(Place, u64)>,
    /// Accumulated correction w: reduced = φ − (w^p − w).
    pub witness: RatFunc,
}

/// Result of reducing at a single place.
#[derive(Clone, Debug)]
pub struct PlaceReduction {
    /// Final pole order m at the place: zero (pole removed entirely) or
    /// coprime to p. Equals −v_P(φ − ℘(w)).
    pub order: u64,
    /// The correction w, supported only at this place, with
    /// v_P(φ − (w^p − w)) = −m.
    pub witness: RatFunc,
}

/// Genus of one Artin–Schreier step together with the reduction that
/// produced it.
#[derive(Clone, Debug)]
pub struct StepGenus {
    pub genus: u64,
    pub reduction: AsReduced,
}

/// p-th root in the residue field F_q[x]/π: the p-power map is bijective on a
/// finite field of characteristic p, and its inverse is p-powering k·d − 1
/// times (q = p^k, d = deg π).
fn residue_pth_root(lambda: &Poly, pi: &Poly) -> Poly {
    let field = lambda.field();
    let p = field.p();
    let steps = field.k() as usize * pi.deg_or_zero();
    debug_assert!(steps >= 1);
    let mut r = lambda.rem(pi).expect("pi nonzero");
    for _ in 0..steps - 1 {
        r = r.powmod(p, pi).expect("pi nonzero");
    }
    debug_assert_eq!(r.powmod(p, pi).unwrap(), lambda.rem(pi).unwrap());
    r
}

/// Leading Laurent coefficient of f at the finite place π where f has a pole
/// of order m: the residue-class of f·π^m, an invertible element of F_q[x]/π.
fn leading_coefficient_at(f: &RatFunc, pi: &Poly, m: u64) -> Poly {
    // den = π^m · M with gcd(π, M) = 1, so f·π^m ≡ num · M^{-1} (mod π).
    let pie = pi.pow(m);
    let (m_part, rem) = f.den().divrem(&pie).expect("pi nonzero");
    debug_assert!(rem.is_zero(), "pole order mismatch");
    let (g, s, _) = m_part.xgcd(pi);
    debug_assert!(g.is_one(), "cofactor must be prime to pi");
    f.num().mul(&s).rem(pi).expect("pi nonzero")
}

/// One step of the reduction loop at a single place: repeatedly subtract
/// ℘-images supported at `place` until the pole order there is zero or
/// coprime to p. Returns the rewritten function, the final pole order, and
/// the accumulated correction.
fn reduce_at(phi: &RatFunc, place: &Place) -> (RatFunc, u64, RatFunc) {
    let field = phi.field().clone();
    let p = field.p();
    let mut f = phi.clone();
    let mut witness = RatFunc::zero(&field);
    loop {
        let m = match place_valuation(&f, place).finite() {
            Some(v) if v < 0 => (-v) as u64,
            _ => return (f, 0, witness),
        };
        if m % p != 0 {
            return (f, m, witness);
        }
        let s = m / p;
        let c = match place {
            Place::Finite(pi) => {
                let lambda = leading_coefficient_at(&f, pi, m);
                let rho = residue_pth_root(&lambda, pi);
                RatFunc::new(rho, pi.pow(s)).expect("nonzero denominator")
            }
            Place::Infinite => {
                let lambda = f.num().lead().div(&f.den().lead()).expect("nonzero lead");
                let rho = lambda.pth_root();
                RatFunc::from_poly(Poly::constant(&rho).mul(&Poly::x(&field).pow(s)))
            }
        };
        f = f.sub(&c.pow(p as i64).expect("positive power").sub(&c));
        witness = witness.add(&c);
        // The subtraction must strictly lower the pole order here.
        debug_assert!(
            place_valuation(&f, place).finite().map_or(true, |v| -v < m as i64),
            "pole order failed to drop at {}",
            place
        );
    }
}

/// Reduce φ at one place modulo ℘-images supported there: returns the final
/// pole order m (zero or coprime to p) and a correction w with poles only at
/// the given place such that v_P(φ − (w^p − w)) = −m. Corrections at one
/// place never disturb the valuation at any other.
pub fn as_reduce(phi: &RatFunc, place: &Place) -> Result<PlaceReduction, TowerError> {
    if phi.is_zero() {
        return Err(TowerError::ZeroInput);
    }
    let (_, order, witness) = reduce_at(phi, place);
    Ok(PlaceReduction { order, witness })
}

/// Reduce φ at every pole simultaneously, so that every remaining pole order
/// is coprime to p.
pub fn as_reduce_all(phi: &RatFunc) -> AsReduced {
    let mut f = phi.clone();
    let mut witness = RatFunc::zero(phi.field());
    for (place, _) in pole_places(phi) {
        let (g, _, w) = reduce_at(&f, &place);
        f = g;
        witness = witness.add(&w);
    }
    let ramified = pole_places(&f);
    debug_assert!(ramified.iter().all(|(_, m)| m % phi.field().p() != 0));
    AsReduced { reduced: f, ramified, witness }
}

/// Genus of the curve y^p − y = φ over F_q(x), via the ramification of the
/// reduced representative: 2g − 2 = −2p + Σ_P deg(P)·(p−1)·(m_P + 1).
/// Errors when the reduced function has no poles at all (the step is an
/// unramified — constant or trivial — extension with no curve behind it).
pub fn as_step_genus(phi: &RatFunc) -> Result<StepGenus, TowerError> {
    let reduction = as_reduce_all(phi);
    if reduction.ramified.is_empty() {
        return Err(TowerError::EverywhereUnramifiedInput);
    }
    let p = phi.field().p();
    // (p−1)(m+1) is even (p odd), so the sum below is an exact integer.
    let mut sum: u64 = 0;
    for (place, m) in &reduction.ramified {
        sum += place.degree() * (p - 1) * (m + 1) / 2;
    }
    let genus = 1 + sum - p;
    Ok(StepGenus { genus, reduction })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::field::Fq;

    fn rf(field: &Fq, num: &[i64], den: &[i64]) -> RatFunc {
        RatFunc::new(Poly::from_ints(field, num), Poly::from_ints(field, den)).unwrap()
    }

    #[test]
    fn genus_of_ax_plus_inverse_x_is_p_minus_1() {
        // φ = a·x + 1/x has simple poles at x and at infinity, giving genus
        // p − 1 for every a ≠ 0.
        for p in [3u64, 5, 7] {
            let f = Fq::new(p, 1).unwrap();
            for a in 1..p {
                let x = RatFunc::x(&f);
                let phi = x.scale(&f.from_int(a as i64)).add(&x.inv().unwrap());
                let out = as_step_genus(&phi).unwrap();
                assert_eq!(out.genus, p - 1, "p={}, a={}", p, a);
                assert_eq!(out.reduction.ramified.len(), 2);
                assert!(out.reduction.ramified.iter().all(|(_, m)| *m == 1));
            }
        }
    }

    #[test]
    fn genus_of_c_over_xp_minus_x_is_p_minus_1_squared() {
        // φ = c/(x^p − x) has p simple finite poles (one per element of F_p)
        // and no pole at infinity: genus (p − 1)^2.
        for p in [3u64, 5] {
            let f = Fq::new(p, 1).unwrap();
            for c in 1..p.min(4) {
                let x = RatFunc::x(&f);
                let den = x.pow(p as i64).unwrap().sub(&x);
                let phi = RatFunc::from_int(&f, c as i64).div(&den).unwrap();
                let out = as_step_genus(&phi).unwrap();
                assert_eq!(out.genus, (p - 1) * (p - 1), "p={}, c={}", p, c);
                assert_eq!(out.reduction.ramified.len(), p as usize);
            }
        }
    }

    #[test]
    fn genus_of_c_over_x_minus_x_is_2_for_p_3() {
        // φ = c/x − x: simple poles at x and infinity again, genus 2 when p=3.
        let f = Fq::new(3, 1).unwrap();
        for c in [1i64, 2] {
            let x = RatFunc::x(&f);
            let phi = RatFunc::from_int(&f, c).div(&x).unwrap().sub(&x);
            let out = as_step_genus(&phi).unwrap();
            assert_eq!(out.genus, 2);
        }
    }

    #[test]
    fn wholly_removable_functions_are_rejected() {
        let f = Fq::new(3, 1).unwrap();
        let x = RatFunc::x(&f);
        // φ = x^3 − x = ℘(x) reduces to zero, with witness x.
        let phi = x.pow(3).unwrap().sub(&x);
        let out = as_reduce_all(&phi);
        assert!(out.reduced.is_zero());
        assert!(out.ramified.is_empty());
        assert_eq!(out.witness, x);
        assert!(matches!(
            as_step_genus(&phi),
            Err(TowerError::EverywhereUnramifiedInput)
        ));
        // Constants have no poles either.
        assert!(matches!(
            as_step_genus(&RatFunc::from_int(&f, 2)),
            Err(TowerError::EverywhereUnramifiedInput)
        ));
    }

    #[test]
    fn cubic_pole_reduces_to_simple_pole() {
        // 1/x^3 = ℘(1/x) + 1/x, so the canonical representative is 1/x.
        let f = Fq::new(3, 1).unwrap();
        let phi = rf(&f, &[1], &[0, 0, 0, 1]);
        let out = as_reduce_all(&phi);
        assert_eq!(out.reduced, rf(&f, &[1], &[0, 1]));
        assert_eq!(out.ramified.len(), 1);
        assert_eq!(out.ramified[0].1, 1);
        assert_eq!(out.witness, rf(&f, &[1], &[0, 1]));
    }

    #[test]
    fn single_place_reduction_reports_order_and_witness() {
        let f = Fq::new(3, 1).unwrap();
        let x = RatFunc::x(&f);
        // a·x + 1/x has a simple pole at infinity: nothing to do there.
        let phi = x.add(&x.inv().unwrap());
        let out = as_reduce(&phi, &Place::Infinite).unwrap();
        assert_eq!(out.order, 1);
        assert!(out.witness.is_zero());
        // x^3 at infinity: subtracting ℘(x) leaves the simple pole of x.
        let out = as_reduce(&x.pow(3).unwrap(), &Place::Infinite).unwrap();
        assert_eq!(out.order, 1);
        assert_eq!(out.witness, x);
        // c/(x^3 − x) at the place (x): already a simple pole.
        let den = x.pow(3).unwrap().sub(&x);
        let phi = RatFunc::one(&f).div(&den).unwrap();
        let at_x = Place::finite(Poly::from_ints(&f, &[0, 1]));
        let out = as_reduce(&phi, &at_x).unwrap();
        assert_eq!(out.order, 1);
        assert!(out.witness.is_zero());
        // A place where the function has no pole at all reports order 0.
        let elsewhere = Place::finite(Poly::from_ints(&f, &[1, 0, 1]));
        let out = as_reduce(&phi, &elsewhere).unwrap();
        assert_eq!(out.order, 0);
        assert!(out.witness.is_zero());
    }

    #[test]
    fn zero_function_cannot_be_reduced() {
        let f = Fq::new(3, 1).unwrap();
        assert!(matches!(
            as_reduce(&RatFunc::zero(&f), &Place::Infinite),
            Err(TowerError::ZeroInput)
        ));
    }

    #[test]
    fn witness_reproduces_the_reduction() {
        // reduced = φ − ℘(witness) must hold exactly, for poles needing
        // several rounds of corrections.
        let f = Fq::new(3, 1).unwrap();
        let p = 3i64;
        for phi in [
            rf(&f, &[1], &[0, 0, 0, 0, 0, 0, 0, 0, 0, 1]), // 1/x^9
            rf(&f, &[2, 1], &[0, 0, 0, 1]),                // (x+2)/x^3
            rf(&f, &[0, 0, 0, 0, 0, 0, 1], &[1]),          // x^6
            rf(&f, &[1, 1], &[0, 0, 0, 2, 0, 0, 1]),       // mixed places
        ] {
            let out = as_reduce_all(&phi);
            let wp = out.witness.pow(p).unwrap().sub(&out.witness);
            assert_eq!(out.reduced, phi.sub(&wp), "phi = {}", phi);
        }
    }

    #[test]
    fn genus_is_invariant_under_adding_wp_images() {
        // φ and φ + ℘(h) define the same extension, hence the same genus.
        let f = Fq::new(3, 1).unwrap();
        let x = RatFunc::x(&f);
        let phi = x.inv().unwrap().add(&x.mul(&x));
        let g0 = as_step_genus(&phi).unwrap().genus;
        let hs = vec![
            x.clone(),
            x.div(&x.sub(&RatFunc::one(&f))).unwrap(),
            rf(&f, &[1, 2, 0, 1], &[0, 0, 1]),
        ];
        for h in hs {
            let shifted = phi.add(&h.pow(3).unwrap().sub(&h));
            assert_eq!(as_step_genus(&shifted).unwrap().genus, g0, "h = {}", h);
            // And the canonical representatives agree exactly.
            assert_eq!(
                as_reduce_all(&shifted).reduced,
                as_reduce_all(&phi).reduced,
                "h = {}",
                h
            );
        }
    }

    #[test]
    fn quadratic_place_contributes_its_degree() {
        // φ = 1/(x^2+1) over F_3: one ramified place of degree 2, m = 1,
        // genus = 1 − 3 + 2·(2·2)/2 = 2.
        let f = Fq::new(3, 1).unwrap();
        let phi = rf(&f, &[1], &[1, 0, 1]);
        let out = as_step_genus(&phi).unwrap();
        assert_eq!(out.genus, 2);
        assert_eq!(out.reduction.ramified.len(), 1);
        assert_eq!(out.reduction.ramified[0].0.degree(), 2);
    }

    #[test]
    fn reduction_takes_pth_roots_in_extension_constants() {
        // Over F_9 with u a generator: u/x^3 reduces to u^3/x (the p-th root
        // of u is u^3 since u^9 = u).
        let f9 = Fq::new(3, 2).unwrap();
        let u = f9.from_coeffs(&[0, 1]);
        let phi = RatFunc::constant(&u).div(&RatFunc::x(&f9).pow(3).unwrap()).unwrap();
        let out = as_reduce_all(&phi);
        let expected = RatFunc::constant(&u.pow(3)).div(&RatFunc::x(&f9)).unwrap();
        assert_eq!(out.reduced, expected);
    }

    #[test]
    fn pole_order_two_is_already_reduced() {
        let f = Fq::new(3, 1).unwrap();
        let phi = rf(&f, &[1], &[0, 0, 1]);
        let out = as_step_genus(&phi).unwrap();
        assert_eq!(out.reduction.reduced, phi);
        assert_eq!(out.genus, 1);
    }
}
