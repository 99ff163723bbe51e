//! Counting unramified p-extensions and bounding automorphism groups of
//! p-groups: the orbit-counting formula for extensions with a prescribed
//! Galois group, the Burnside–Hall bound and its Sylow weakening, and the
//! closed genus formulas for the two infinite families of curves. All
//! counts are exact `BigUint`s — the p = 5 cases overflow 64 bits.

use num_bigint::BigUint;
use num_traits::{One, Zero};
use thiserror::Error;

use crate::ramify::is_odd_prime;

pub use crate::group::aut_order_bruteforce;

#[derive(Debug, Error, PartialEq, Eq)]
pub enum CountError {
    #[error("|Aut| is unknown for this profile")]
    AlphaUnknown,
    #[error("the extension count is not an integer: inconsistent |Aut|")]
    NonIntegralCount,
    #[error("invalid profile: {0}")]
    BadProfile(String),
}

/// The numeric shape of a finite p-group: order pⁿ, minimal generator
/// count d, and automorphism-group order when known.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct GroupProfile {
    pub p: u64,
    pub n: u32,
    pub d: u32,
    pub alpha: Option<BigUint>,
}

impl GroupProfile {
    pub fn validate(&self) -> Result<(), CountError> {
        if !is_odd_prime(self.p) {
            return Err(CountError::BadProfile(format!(
                "p = {} is not an odd prime",
                self.p
            )));
        }
        if self.d < 1 || self.d > self.n {
            return Err(CountError::BadProfile(format!(
                "need 1 ≤ d ≤ n, got d = {}, n = {}",
                self.d, self.n
            )));
        }
        if matches!(&self.alpha, Some(a) if a.is_zero()) {
            return Err(CountError::BadProfile("|Aut| must be positive".into()));
        }
        Ok(())
    }
}

fn pw(p: u64, e: u32) -> BigUint {
    BigUint::from(p).pow(e)
}

/// Number of unramified extensions with group G over an ordinary curve of
/// p-rank γ:
///
///   p^{γ(n−d)} · (p^γ − 1)(p^γ − p) ⋯ (p^γ − p^{d−1}) / |Aut G|,
///
/// which is 0 when d > γ and must divide out exactly otherwise.
pub fn frbound_count(profile: &GroupProfile, gamma: u32) -> Result<BigUint, CountError> {
    profile.validate()?;
    if profile.d > gamma {
        return Ok(BigUint::zero());
    }
    let alpha = profile.alpha.as_ref().ok_or(CountError::AlphaUnknown)?;
    let mut num = pw(profile.p, gamma * (profile.n - profile.d));
    let pg = pw(profile.p, gamma);
    for j in 0..profile.d {
        num *= &pg - pw(profile.p, j);
    }
    if (&num % alpha) != BigUint::zero() {
        return Err(CountError::NonIntegralCount);
    }
    Ok(num / alpha)
}

/// Burnside–Hall bound on |Aut G| for a group of order pⁿ with d
/// generators: p^{d(n−d)} · ∏_{j<d} (p^d − p^j).
pub fn bh_bound(p: u64, n: u32, d: u32) -> Result<BigUint, CountError> {
    GroupProfile { p, n, d, alpha: None }.validate()?;
    let mut b = pw(p, d * (n - d));
    let pd = pw(p, d);
    for j in 0..d {
        b *= &pd - pw(p, j);
    }
    Ok(b)
}

/// Order of a Sylow p-subgroup of the Burnside–Hall bound:
/// p^{d(n−d) + d(d−1)/2}.
pub fn sylow_bh_bound(p: u64, n: u32, d: u32) -> Result<BigUint, CountError> {
    GroupProfile { p, n, d, alpha: None }.validate()?;
    Ok(pw(p, d * (n - d) + d * (d - 1) / 2))
}

/// True iff the count is coprime to p (a count of 1 always is).
pub fn not_div_p_check(count: &BigUint, p: u64) -> bool {
    !(count % p).is_zero()
}

/// |GL(d, Z/p^k)| = p^{d²(k−1)} · ∏_{j<d} (p^d − p^j).
pub fn gl_order_mod_pk(p: u64, d: u32, k: u32) -> Result<BigUint, CountError> {
    if k < 1 {
        return Err(CountError::BadProfile("need k ≥ 1".into()));
    }
    Ok(pw(p, d * d * (k - 1)) * bh_bound(p, d, d)?)
}

/// The two infinite families of curves with a fixed genus law.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Family {
    /// Towers over the genus-(p−1) base curve: g = p^{(p−1)N}·(p−2) + 1.
    BaseCurve,
    /// Towers over the Artin–Mumford curve: g = p^{N(p−1)²+1}·(p−2) + 1.
    ArtinMumford,
}

impl std::str::FromStr for Family {
    type Err = CountError;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        match s {
            "base-curve" => Ok(Family::BaseCurve),
            "artin-mumford" => Ok(Family::ArtinMumford),
            other => Err(CountError::BadProfile(format!("unknown family '{}'", other))),
        }
    }
}

impl std::fmt::Display for Family {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        f.write_str(match self {
            Family::BaseCurve => "base-curve",
            Family::ArtinMumford => "artin-mumford",
        })
    }
}

/// Genus of the N-th curve in the chosen family.
pub fn family_genus(p: u64, n_steps: u32, family: Family) -> Result<BigUint, CountError> {
    if !is_odd_prime(p) {
        return Err(CountError::BadProfile(format!(
            "p = {} is not an odd prime",
            p
        )));
    }
    if n_steps < 1 {
        return Err(CountError::BadProfile("need N ≥ 1".into()));
    }
    let pm1 = (p - 1) as u32;
    let exp = match family {
        Family::BaseCurve => pm1
            .checked_mul(n_steps)
            .ok_or_else(|| CountError::BadProfile("exponent overflow".into()))?,
        Family::ArtinMumford => pm1
            .checked_mul(pm1)
            .and_then(|e| e.checked_mul(n_steps))
            .and_then(|e| e.checked_add(1))
            .ok_or_else(|| CountError::BadProfile("exponent overflow".into()))?,
    };
    Ok(pw(p, exp) * (p - 2) + BigUint::one())
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::group::constructions;
    use crate::ramify::{ds_prank, CoverData};

    fn profile(p: u64, n: u32, d: u32, alpha: u64) -> GroupProfile {
        GroupProfile { p, n, d, alpha: Some(BigUint::from(alpha)) }
    }

    #[test]
    fn extension_counts() {
        // Elementary abelian of rank 2 over a curve of p-rank 2: unique.
        assert_eq!(frbound_count(&profile(3, 2, 2, 48), 2).unwrap(), BigUint::one());
        // Cyclic of order 3: the four index-3 subgroups of (Z/3)².
        assert_eq!(frbound_count(&profile(3, 1, 1, 2), 2).unwrap(), BigUint::from(4u32));
        // The order-27 Heisenberg group: again unique.
        assert_eq!(frbound_count(&profile(3, 3, 2, 432), 2).unwrap(), BigUint::one());
        // More generators than the p-rank allows: zero extensions.
        assert_eq!(frbound_count(&profile(3, 3, 3, 1), 2).unwrap(), BigUint::zero());
    }

    #[test]
    fn extension_count_error_paths() {
        assert_eq!(
            frbound_count(&profile(3, 2, 2, 7), 2).unwrap_err(),
            CountError::NonIntegralCount
        );
        let unknown = GroupProfile { p: 3, n: 2, d: 2, alpha: None };
        assert_eq!(frbound_count(&unknown, 2).unwrap_err(), CountError::AlphaUnknown);
        // d > γ short-circuits before alpha is needed.
        assert_eq!(frbound_count(&unknown, 1).unwrap(), BigUint::zero());
        assert!(matches!(
            frbound_count(&profile(3, 2, 3, 1), 5),
            Err(CountError::BadProfile(_))
        ));
    }

    #[test]
    fn burnside_hall_values() {
        assert_eq!(bh_bound(3, 4, 4).unwrap(), BigUint::from(24_261_120u64));
        assert_eq!(bh_bound(3, 3, 2).unwrap(), BigUint::from(432u32));
        assert_eq!(bh_bound(3, 2, 1).unwrap(), BigUint::from(6u32));
        assert_eq!(sylow_bh_bound(3, 3, 2).unwrap(), BigUint::from(27u32));
    }

    #[test]
    fn sylow_bound_divides_full_bound() {
        for p in [3u64, 5] {
            for n in 1..=4u32 {
                for d in 1..=n {
                    let bh = bh_bound(p, n, d).unwrap();
                    let sy = sylow_bh_bound(p, n, d).unwrap();
                    assert!((&bh % &sy).is_zero(), "p={} n={} d={}", p, n, d);
                    assert!(sy <= bh);
                }
            }
        }
    }

    #[test]
    fn brute_forced_aut_orders_respect_the_bound() {
        let pairs = [
            (constructions::abelian(3, &[1, 1]), 2u32, 2u32),
            (constructions::ut3(3), 3, 2),
            (constructions::cyclic(3, 2), 2, 1),
        ];
        for (g, n, d) in pairs {
            let alpha = BigUint::from(aut_order_bruteforce(&g).unwrap());
            let bound = bh_bound(3, n, d).unwrap();
            assert!((&bound % &alpha).is_zero(), "|Aut| must divide the bound");
        }
    }

    #[test]
    fn coprimality_when_d_equals_gamma() {
        for pf in [profile(3, 2, 2, 48), profile(3, 3, 2, 432)] {
            if pf.d == 2 {
                let c = frbound_count(&pf, 2).unwrap();
                assert!(not_div_p_check(&c, 3));
            }
        }
        assert!(not_div_p_check(&BigUint::from(1u32), 3));
        assert!(not_div_p_check(&BigUint::from(4u32), 3));
        assert!(!not_div_p_check(&BigUint::from(9u32), 3));
    }

    #[test]
    fn family_genus_values() {
        let fg = |p, n, f| family_genus(p, n, f).unwrap();
        assert_eq!(fg(3, 1, Family::BaseCurve), BigUint::from(10u32));
        assert_eq!(fg(3, 2, Family::BaseCurve), BigUint::from(82u32));
        assert_eq!(fg(3, 1, Family::ArtinMumford), BigUint::from(244u32));
        assert_eq!(fg(5, 1, Family::BaseCurve), BigUint::from(1876u32));
        // p = 5 in the second family leaves u64 range at N = 2:
        // g − 1 = 5^33 · 3.
        let big = fg(5, 2, Family::ArtinMumford);
        let expect = BigUint::from(5u32).pow(33) * 3u32 + BigUint::one();
        assert_eq!(big, expect);
        assert!(big > BigUint::from(u64::MAX));
    }

    #[test]
    fn family_genus_matches_the_prank_formula() {
        // An unramified extension of degree p^{(p−1)N} of the ordinary
        // genus-(p−1) base curve has p-rank equal to the family genus.
        for p in [3u64, 5] {
            for n_steps in [1u32, 2] {
                let order = p.pow((p - 1) as u32 * n_steps);
                let cover = CoverData {
                    p,
                    order,
                    gbar: p - 1,
                    gammabar: p - 1,
                    orbits: vec![],
                };
                let gamma = ds_prank(&cover).unwrap();
                assert_eq!(
                    family_genus(p, n_steps, Family::BaseCurve).unwrap(),
                    BigUint::from(gamma)
                );
            }
        }
    }

    #[test]
    fn gl_orders_mod_prime_powers() {
        // |GL(2, Z/9)| = 3^4 · 48 = 3888, and it is the automorphism count
        // of the rank-2 free module group.
        assert_eq!(gl_order_mod_pk(3, 2, 2).unwrap(), BigUint::from(3888u32));
        let g = constructions::abelian(3, &[2, 2]);
        assert_eq!(
            BigUint::from(aut_order_bruteforce(&g).unwrap()),
            gl_order_mod_pk(3, 2, 2).unwrap()
        );
        // k = 1 reduces to |GL(d, p)| = bh_bound(p, d, d).
        assert_eq!(gl_order_mod_pk(3, 4, 1).unwrap(), bh_bound(3, 4, 4).unwrap());
    }

    #[test]
    fn family_parsing() {
        assert_eq!("base-curve".parse::<Family>().unwrap(), Family::BaseCurve);
        assert_eq!("artin-mumford".parse::<Family>().unwrap(), Family::ArtinMumford);
        assert!("am".parse::<Family>().is_err());
        assert_eq!(Family::ArtinMumford.to_string(), "artin-mumford");
    }
}
