//! Ramification numerics for Galois p-covers of curves: different exponents
//! from ramification-group chains, the Hurwitz genus formula, the
//! Deuring–Shafarevich p-rank formula, the genus/automorphism bounds, the
//! extremality identity p(g−1) = (p−2)|S|, and the five-way case
//! classifier. Everything is exact integer or rational arithmetic; bounds
//! are compared by cross-multiplication, never floats.
//!
//! A cover is described numerically: the group order |S|, the quotient
//! genus ḡ and p-rank γ̄, and the short orbits, each carrying its length ℓ
//! and the chain of ramification-group orders |S_P⁽⁰⁾| ≥ |S_P⁽¹⁾| ≥ … ≥ 1.
//! In p-group mode the first two chain entries agree (wild ramification has
//! no tame part).

use num_rational::Rational64;
use serde::{Deserialize, Serialize};
use thiserror::Error;

#[derive(Debug, Error, PartialEq, Eq)]
pub enum RamifyError {
    #[error("invalid cover data: {0}")]
    InvalidCover(String),
    #[error("Hurwitz formula yields a non-integral or negative genus")]
    NonIntegralGenus,
    #[error("Deuring–Shafarevich formula yields a negative p-rank")]
    NonsensePRank,
    #[error("genus {0} is below 2")]
    GenusTooSmall(u64),
    #[error("p must be an odd prime, got {0}")]
    BadPrime(u64),
    #[error("order {0} is not an admissible power of p = {1}")]
    NotAPPower(u64, u64),
}

/// One short orbit of the group action: its length and the orders of the
/// higher ramification groups at any place in it.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct OrbitDatum {
    pub length: u64,
    pub chain: Vec<u64>,
}

impl OrbitDatum {
    /// d_P = Σᵢ (|S_P⁽ⁱ⁾| − 1).
    pub fn different_exponent(&self) -> u64 {
        self.chain.iter().map(|&c| c - 1).sum()
    }

    /// An orbit is short when it is smaller than the group.
    pub fn is_short(&self, group_order: u64) -> bool {
        self.length < group_order
    }
}

/// Numeric description of a p-cover X → X/S.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct CoverData {
    pub p: u64,
    pub order: u64,
    pub gbar: u64,
    pub gammabar: u64,
    #[serde(default)]
    pub orbits: Vec<OrbitDatum>,
}

pub(crate) fn is_odd_prime(p: u64) -> bool {
    if p < 3 || p % 2 == 0 {
        return false;
    }
    let mut f = 3;
    while f * f <= p {
        if p % f == 0 {
            return false;
        }
        f += 2;
    }
    true
}

fn is_p_power(mut n: u64, p: u64) -> bool {
    if n == 0 {
        return false;
    }
    while n % p == 0 {
        n /= p;
    }
    n == 1
}

impl CoverData {
    pub fn validate(&self) -> Result<(), RamifyError> {
        if !is_odd_prime(self.p) {
            return Err(RamifyError::BadPrime(self.p));
        }
        if !is_p_power(self.order, self.p) || self.order < self.p {
            return Err(RamifyError::NotAPPower(self.order, self.p));
        }
        if self.gammabar > self.gbar {
            return Err(RamifyError::InvalidCover(format!(
                "quotient p-rank {} exceeds quotient genus {}",
                self.gammabar, self.gbar
            )));
        }
        for (i, o) in self.orbits.iter().enumerate() {
            let chain = &o.chain;
            if chain.is_empty() || *chain.last().expect("nonempty") != 1 {
                return Err(RamifyError::InvalidCover(format!(
                    "orbit {}: chain must end at 1",
                    i
                )));
            }
            if chain.windows(2).any(|w| w[0] < w[1]) {
                return Err(RamifyError::InvalidCover(format!(
                    "orbit {}: chain must be non-increasing",
                    i
                )));
            }
            if chain.iter().any(|&c| !is_p_power(c, self.p) && c != 1) {
                return Err(RamifyError::InvalidCover(format!(
                    "orbit {}: chain entries must be powers of p",
                    i
                )));
            }
            if o.length == 0 || chain[0] * o.length != self.order {
                return Err(RamifyError::InvalidCover(format!(
                    "orbit {}: stabilizer order {} times length {} must equal |S| = {}",
                    i, chain[0], o.length, self.order
                )));
            }
            if chain[0] > 1 && (chain.len() < 2 || chain[1] != chain[0]) {
                return Err(RamifyError::InvalidCover(format!(
                    "orbit {}: wild ramification in a p-group needs chain[1] = chain[0]",
                    i
                )));
            }
        }
        Ok(())
    }
}

/// Genus of the cover from 2g−2 = |S|(2ḡ−2) + Σ ℓ·d_P.
pub fn hurwitz_genus(c: &CoverData) -> Result<u64, RamifyError> {
    c.validate()?;
    let mut rhs: i128 = c.order as i128 * (2 * c.gbar as i128 - 2);
    for o in &c.orbits {
        rhs += o.length as i128 * o.different_exponent() as i128;
    }
    if rhs < -2 || rhs % 2 != 0 {
        return Err(RamifyError::NonIntegralGenus);
    }
    Ok(((rhs + 2) / 2) as u64)
}

/// p-rank of the cover from γ−1 = |S|(γ̄−1) + Σ (|S| − ℓᵢ). Only orbit
/// lengths enter; the chains are irrelevant here.
pub fn ds_prank(c: &CoverData) -> Result<u64, RamifyError> {
    c.validate()?;
    let mut gamma: i128 = 1 + c.order as i128 * (c.gammabar as i128 - 1);
    for o in &c.orbits {
        gamma += (c.order - o.length) as i128;
    }
    if gamma < 0 {
        return Err(RamifyError::NonsensePRank);
    }
    Ok(gamma as u64)
}

/// The three bounds at (p, g, γ), as exact rationals.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct BoundSet {
    /// p/(p−1) · g — the bound when the group fixes a place.
    pub stichtenoth: Rational64,
    /// The Nakajima bound: g−1 for γ = 1, p/(p−2)·(γ−1) for γ ≥ 2;
    /// undefined (None) for γ = 0.
    pub nakajima: Option<Rational64>,
    /// p²/(p²−p−1) · (g−1) — the classifier's hypothesis threshold.
    pub hyp_threshold: Rational64,
}

pub fn bounds(p: u64, g: u64, gamma: u64) -> Result<BoundSet, RamifyError> {
    if !is_odd_prime(p) {
        return Err(RamifyError::BadPrime(p));
    }
    if g < 2 {
        return Err(RamifyError::GenusTooSmall(g));
    }
    if gamma > g {
        return Err(RamifyError::InvalidCover(format!(
            "p-rank {} exceeds genus {}",
            gamma, g
        )));
    }
    let p = p as i64;
    let g = g as i64;
    let gamma = gamma as i64;
    let nakajima = match gamma {
        0 => None,
        1 => Some(Rational64::from_integer(g - 1)),
        _ => Some(Rational64::new(p * (gamma - 1), p - 2)),
    };
    Ok(BoundSet {
        stichtenoth: Rational64::new(p * g, p - 1),
        nakajima,
        hyp_threshold: Rational64::new(p * p * (g - 1), p * p - p - 1),
    })
}

/// The extremality identity p(g−1) = (p−2)|S|; |S| must be a power of p
/// with |S| ≥ p².
pub fn extremal_check(p: u64, s_order: u64, g: u64) -> Result<bool, RamifyError> {
    if !is_odd_prime(p) {
        return Err(RamifyError::BadPrime(p));
    }
    if !is_p_power(s_order, p) || s_order < p * p {
        return Err(RamifyError::NotAPPower(s_order, p));
    }
    Ok((p as u128) * (g as u128 - 1) == (p as u128 - 2) * s_order as u128)
}

/// Outcome of the large-p-subgroup classification.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum PrincipalCase {
    /// |S| is not above the p²/(p²−p−1)·(g−1) threshold.
    HypothesisFails,
    /// γ = 0.
    CaseI,
    /// |S| = p on an ordinary curve of genus p−1 with a fixed place.
    CaseII,
    /// Ordinary extremal: p(g−1) = (p−2)|S| and γ = g.
    CaseIII,
    /// The input triple is not consistent with the classification.
    Contradiction,
}

impl std::fmt::Display for PrincipalCase {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        f.write_str(match self {
            PrincipalCase::HypothesisFails => "hypothesis-fails",
            PrincipalCase::CaseI => "i",
            PrincipalCase::CaseII => "ii",
            PrincipalCase::CaseIII => "iii",
            PrincipalCase::Contradiction => "contradiction",
        })
    }
}

/// Classify (|S|, g, γ): first the size hypothesis |S| > p²/(p²−p−1)·(g−1)
/// (by cross-multiplication), then the three cases in order.
pub fn classify_princ(
    p: u64,
    s_order: u64,
    g: u64,
    gamma: u64,
    fixes_point: bool,
) -> Result<PrincipalCase, RamifyError> {
    if !is_odd_prime(p) {
        return Err(RamifyError::BadPrime(p));
    }
    if g < 2 {
        return Err(RamifyError::GenusTooSmall(g));
    }
    if gamma > g {
        return Err(RamifyError::InvalidCover(format!(
            "p-rank {} exceeds genus {}",
            gamma, g
        )));
    }
    if !is_p_power(s_order, p) || s_order < p {
        return Err(RamifyError::NotAPPower(s_order, p));
    }
    let (pw, sw, gw) = (p as u128, s_order as u128, g as u128);
    if sw * (pw * pw - pw - 1) <= pw * pw * (gw - 1) {
        return Ok(PrincipalCase::HypothesisFails);
    }
    if gamma == 0 {
        return Ok(PrincipalCase::CaseI);
    }
    if s_order == p && g == gamma && g == p - 1 && fixes_point {
        return Ok(PrincipalCase::CaseII);
    }
    if s_order >= p * p && pw * (gw - 1) == (pw - 2) * sw && gamma == g {
        return Ok(PrincipalCase::CaseIII);
    }
    Ok(PrincipalCase::Contradiction)
}

/// Derived data for one quotient by a declared semiregular subgroup: the
/// cover X → X/M is then unramified, so ḡ−1 = (g−1)/|M| and
/// γ̄−1 = (γ−1)/|M| must both be integers with 0 ≤ γ̄ ≤ ḡ.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct QuotientCheck {
    pub subgroup_order: u64,
    pub quotient_genus: Option<u64>,
    pub quotient_prank: Option<u64>,
    pub ok: bool,
}

/// Cross-check of a cover record against expected invariants.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct ConsistencyReport {
    pub genus: u64,
    pub prank: u64,
    pub genus_matches: bool,
    pub prank_matches: bool,
    pub quotients: Vec<QuotientCheck>,
}

impl ConsistencyReport {
    pub fn ok(&self) -> bool {
        self.genus_matches && self.prank_matches && self.quotients.iter().all(|q| q.ok)
    }
}

fn unramified_quotient_value(total: u64, m: u64) -> Option<u64> {
    // v̄ − 1 = (v − 1)/m, integral and ≥ 0 required.
    let num = total as i128 - 1;
    if num % m as i128 != 0 {
        return None;
    }
    let vbar = num / m as i128 + 1;
    (vbar >= 0).then_some(vbar as u64)
}

/// Recompute genus and p-rank from the cover data, compare with the
/// expectations, and derive the quotient invariants for each declared
/// semiregular subgroup (given by order).
pub fn cover_consistency(
    c: &CoverData,
    expected_g: u64,
    expected_gamma: u64,
    semiregular_orders: &[u64],
) -> Result<ConsistencyReport, RamifyError> {
    let genus = hurwitz_genus(c)?;
    let prank = ds_prank(c)?;
    let quotients = semiregular_orders
        .iter()
        .map(|&m| {
            let qg = unramified_quotient_value(genus, m);
            let qp = unramified_quotient_value(prank, m);
            let ok = match (qg, qp) {
                (Some(g), Some(p)) => p <= g,
                _ => false,
            };
            QuotientCheck {
                subgroup_order: m,
                quotient_genus: qg,
                quotient_prank: qp,
                ok,
            }
        })
        .collect();
    Ok(ConsistencyReport {
        genus,
        prank,
        genus_matches: genus == expected_g,
        prank_matches: prank == expected_gamma,
        quotients,
    })
}

#[cfg(test)]
mod tests {
    use super::*;

    fn nakajima_shape(p: u64, order: u64) -> CoverData {
        CoverData {
            p,
            order,
            gbar: 0,
            gammabar: 0,
            orbits: vec![
                OrbitDatum { length: order / p, chain: vec![p, p, 1] },
                OrbitDatum { length: order / p, chain: vec![p, p, 1] },
            ],
        }
    }

    #[test]
    fn different_exponents() {
        assert_eq!(OrbitDatum { length: 3, chain: vec![3, 3, 1] }.different_exponent(), 4);
        assert_eq!(OrbitDatum { length: 9, chain: vec![1] }.different_exponent(), 0);
        assert_eq!(OrbitDatum { length: 1, chain: vec![9, 9, 1] }.different_exponent(), 16);
    }

    #[test]
    fn hurwitz_on_the_standard_covers() {
        // Two orbits of length 3 under a group of order 9 over a rational
        // base: genus 4.
        assert_eq!(hurwitz_genus(&nakajima_shape(3, 9)).unwrap(), 4);
        // Order 27, two orbits of length 9: genus 10.
        assert_eq!(hurwitz_genus(&nakajima_shape(3, 27)).unwrap(), 10);
        // Unramified over genus 2: g = n + 1.
        let unram = CoverData { p: 3, order: 27, gbar: 2, gammabar: 1, orbits: vec![] };
        assert_eq!(hurwitz_genus(&unram).unwrap(), 28);
    }

    #[test]
    fn hurwitz_rejects_impossible_data() {
        // A single short orbit over a rational base gives 2g−2 = −6 < −2.
        let c = CoverData {
            p: 3,
            order: 9,
            gbar: 0,
            gammabar: 0,
            orbits: vec![OrbitDatum { length: 3, chain: vec![3, 3, 1] }],
        };
        assert_eq!(hurwitz_genus(&c).unwrap_err(), RamifyError::NonIntegralGenus);
    }

    #[test]
    fn deuring_shafarevich_on_the_standard_covers() {
        assert_eq!(ds_prank(&nakajima_shape(3, 9)).unwrap(), 4);
        assert_eq!(ds_prank(&nakajima_shape(3, 81)).unwrap(), 28);
        let unram = CoverData { p: 3, order: 27, gbar: 2, gammabar: 1, orbits: vec![] };
        assert_eq!(ds_prank(&unram).unwrap(), 1);
        let nonsense = CoverData { p: 3, order: 9, gbar: 2, gammabar: 0, orbits: vec![] };
        assert_eq!(ds_prank(&nonsense).unwrap_err(), RamifyError::NonsensePRank);
    }

    #[test]
    fn ordinary_extremal_shape_for_small_orders() {
        for (p, orders) in [(3u64, vec![9u64, 27, 81, 243, 729]), (5, vec![25, 125])] {
            for order in orders {
                let c = nakajima_shape(p, order);
                let g = hurwitz_genus(&c).unwrap();
                let gamma = ds_prank(&c).unwrap();
                assert_eq!(g, gamma, "ordinary at |S| = {}", order);
                assert_eq!(g, 1 + order * (p - 2) / p);
                assert!(extremal_check(p, order, g).unwrap());
            }
        }
    }

    #[test]
    fn adding_an_orbit_never_decreases_genus() {
        let mut c = CoverData { p: 3, order: 27, gbar: 1, gammabar: 0, orbits: vec![] };
        let g0 = hurwitz_genus(&c).unwrap();
        c.orbits.push(OrbitDatum { length: 9, chain: vec![3, 3, 1] });
        let g1 = hurwitz_genus(&c).unwrap();
        c.orbits.push(OrbitDatum { length: 3, chain: vec![9, 9, 1] });
        let g2 = hurwitz_genus(&c).unwrap();
        assert!(g0 <= g1 && g1 <= g2);
    }

    #[test]
    fn validation_catches_malformed_orbits() {
        let base = CoverData { p: 3, order: 9, gbar: 0, gammabar: 0, orbits: vec![] };
        let bad = [
            OrbitDatum { length: 3, chain: vec![3, 3] },        // no trailing 1
            OrbitDatum { length: 3, chain: vec![3, 9, 1] },     // increasing
            OrbitDatum { length: 3, chain: vec![3, 1] },        // tame start
            OrbitDatum { length: 2, chain: vec![3, 3, 1] },     // 3·2 ≠ 9
            OrbitDatum { length: 3, chain: vec![5, 5, 1] },     // not a 3-power
        ];
        for orbit in bad {
            let c = CoverData { orbits: vec![orbit.clone()], ..base.clone() };
            assert!(
                matches!(c.validate(), Err(RamifyError::InvalidCover(_))),
                "expected rejection of {:?}",
                orbit
            );
        }
        assert_eq!(
            CoverData { p: 4, ..base.clone() }.validate().unwrap_err(),
            RamifyError::BadPrime(4)
        );
        assert_eq!(
            CoverData { order: 12, ..base }.validate().unwrap_err(),
            RamifyError::NotAPPower(12, 3)
        );
    }

    #[test]
    fn bound_values() {
        let b = bounds(3, 10, 10).unwrap();
        assert_eq!(b.stichtenoth, Rational64::new(30, 2));
        assert_eq!(b.nakajima, Some(Rational64::from_integer(27)));
        assert_eq!(b.hyp_threshold, Rational64::new(81, 5));

        let b = bounds(3, 4, 4).unwrap();
        assert_eq!(b.nakajima, Some(Rational64::from_integer(9)));

        let b = bounds(3, 5, 1).unwrap();
        assert_eq!(b.nakajima, Some(Rational64::from_integer(4)));

        let b = bounds(3, 5, 0).unwrap();
        assert_eq!(b.nakajima, None);

        assert_eq!(bounds(3, 1, 0).unwrap_err(), RamifyError::GenusTooSmall(1));
        assert!(matches!(bounds(3, 5, 6), Err(RamifyError::InvalidCover(_))));
    }

    #[test]
    fn extremality_identity() {
        assert!(extremal_check(3, 27, 10).unwrap());
        assert!(extremal_check(3, 81, 28).unwrap());
        assert!(extremal_check(5, 125, 76).unwrap());
        assert!(!extremal_check(3, 27, 11).unwrap());
        assert_eq!(
            extremal_check(3, 3, 2).unwrap_err(),
            RamifyError::NotAPPower(3, 3)
        );
        assert_eq!(
            extremal_check(3, 24, 9).unwrap_err(),
            RamifyError::NotAPPower(24, 3)
        );
    }

    #[test]
    fn classification_cases_in_order() {
        use PrincipalCase::*;
        assert_eq!(classify_princ(3, 3, 2, 2, true).unwrap(), CaseII);
        assert_eq!(classify_princ(3, 27, 10, 10, false).unwrap(), CaseIII);
        assert_eq!(classify_princ(3, 27, 30, 30, false).unwrap(), HypothesisFails);
        assert_eq!(classify_princ(3, 27, 10, 0, false).unwrap(), CaseI);
        // Genus-4 data with the right size but broken p-rank.
        assert_eq!(classify_princ(3, 27, 10, 5, false).unwrap(), Contradiction);
        // The fixed-point flag is load-bearing for case (ii).
        assert_eq!(classify_princ(3, 3, 2, 2, false).unwrap(), Contradiction);
        assert_eq!(
            classify_princ(3, 9, 1, 0, false).unwrap_err(),
            RamifyError::GenusTooSmall(1)
        );
    }

    #[test]
    fn display_strings_for_cases() {
        assert_eq!(PrincipalCase::HypothesisFails.to_string(), "hypothesis-fails");
        assert_eq!(PrincipalCase::CaseIII.to_string(), "iii");
    }

    #[test]
    fn consistency_report_with_semiregular_quotients() {
        // Genus-10 cover with a semiregular subgroup of order 9: the
        // quotient curve has ḡ = γ̄ = 2.
        let c = nakajima_shape(3, 27);
        let r = cover_consistency(&c, 10, 10, &[9]).unwrap();
        assert!(r.ok());
        assert_eq!(r.quotients[0].quotient_genus, Some(2));
        assert_eq!(r.quotients[0].quotient_prank, Some(2));

        // Genus-4 cover, semiregular order-3 subgroup: quotient genus 2.
        let am = nakajima_shape(3, 9);
        let r = cover_consistency(&am, 4, 4, &[3]).unwrap();
        assert!(r.ok());
        assert_eq!(r.quotients[0].quotient_genus, Some(2));

        // Wrong expectations are flagged, not silently accepted.
        let r = cover_consistency(&am, 5, 4, &[3]).unwrap();
        assert!(!r.genus_matches && r.prank_matches);
        assert!(!r.ok());

        // Non-divisible subgroup order breaks the quotient check.
        let r = cover_consistency(&am, 4, 4, &[9]).unwrap();
        assert_eq!(r.quotients[0].quotient_genus, None);
        assert!(!r.ok());
    }

    #[test]
    fn cover_data_round_trips_through_json() {
        let c = nakajima_shape(3, 27);
        let text = serde_json::to_string(&c).unwrap();
        let back: CoverData = serde_json::from_str(&text).unwrap();
        assert_eq!(back, c);
        // The documented field names are the wire format.
        assert!(text.contains("\"gbar\"") && text.contains("\"gammabar\""));
        // Unknown fields are rejected.
        let bad = r#"{"p":3,"order":9,"gbar":0,"gammabar":0,"orbits":[],"extra":1}"#;
        assert!(serde_json::from_str::<CoverData>(bad).is_err());
    }
}
