//! Reference constructions: concrete realizations of the small groups the
//! toolkit compares against — cyclic and abelian p-groups from exponent
//! vectors, the Heisenberg group UT(3,p) as triples, C3≀C3 as permutations
//! of nine points, the non-abelian group C_{p²}⋊C_p of exponent p², and the
//! two order-81 groups (Z₉⊕Z₃)⋊C₃ distinguished by the twisting
//! automorphism θ:
//!
//! ```text
//! s81(9):  θ(x,y) = (x+3y, −x+y)      s81(8):  θ(x,y) = (x+3y, x+y)
//! ```
//!
//! Small-group labels such as "S(81,9)" are names attached to these
//! in-code constructions, not lookups in any external database.

use super::fingerprint::fingerprint;
use super::iso::is_isomorphic;
use super::{FiniteGroup, Origin};

fn expect_closure<T, F>(
    p: u64,
    gens: &[(String, T)],
    identity: T,
    op: F,
    cap: usize,
) -> FiniteGroup
where
    T: Clone + Eq + std::hash::Hash,
    F: Fn(&T, &T) -> T,
{
    FiniteGroup::closure(p, gens, identity, op, cap)
        .unwrap_or_else(|e| panic!("reference construction failed to close: {}", e))
        .group
        .with_origin(Origin::FromConstruction)
}

/// Direct product ×ᵢ C_{p^{exps[i]}} as residue vectors; `abelian(p, &[])`
/// is the trivial group.
pub fn abelian(p: u64, exps: &[u32]) -> FiniteGroup {
    let moduli: Vec<u64> = exps.iter().map(|&e| p.pow(e)).collect();
    let gens: Vec<(String, Vec<u64>)> = moduli
        .iter()
        .enumerate()
        .map(|(i, _)| {
            let mut v = vec![0u64; moduli.len()];
            v[i] = 1;
            (format!("e{}", i + 1), v)
        })
        .collect();
    let identity = vec![0u64; moduli.len()];
    let cap = moduli.iter().product::<u64>() as usize + 1;
    let m2 = moduli.clone();
    expect_closure(
        p,
        &gens,
        identity,
        move |a, b| {
            a.iter()
                .zip(b)
                .zip(&m2)
                .map(|((&x, &y), &m)| (x + y) % m)
                .collect()
        },
        cap.max(2),
    )
}

/// C_{p^n}.
pub fn cyclic(p: u64, n: u32) -> FiniteGroup {
    if n == 0 {
        abelian(p, &[])
    } else {
        abelian(p, &[n])
    }
}

/// The Heisenberg group UT(3,p) of unitriangular 3×3 matrices over F_p,
/// stored as the off-diagonal triple (a, b, c) with
/// (a,b,c)·(a′,b′,c′) = (a+a′, b+b′+a·c′, c+c′). Non-abelian of order p³
/// and exponent p (p odd); generated by a = (1,0,0), b = (0,0,1).
pub fn ut3(p: u64) -> FiniteGroup {
    let gens = vec![
        ("a".to_string(), (1u64, 0u64, 0u64)),
        ("b".to_string(), (0u64, 0u64, 1u64)),
    ];
    expect_closure(
        p,
        &gens,
        (0, 0, 0),
        move |x, y| ((x.0 + y.0) % p, (x.1 + y.1 + x.0 * y.2) % p, (x.2 + y.2) % p),
        (p * p * p) as usize + 1,
    )
}

/// The non-abelian group C_{p²} ⋊ C_p of exponent p², with the generator
/// of C_p acting as multiplication by 1+p. For p = 3 this is C9⋊C3.
pub fn cp2_semi_cp(p: u64) -> FiniteGroup {
    let p2 = p * p;
    let unit = 1 + p;
    let gens = vec![
        ("a".to_string(), (1u64, 0u64)),
        ("c".to_string(), (0u64, 1u64)),
    ];
    expect_closure(
        p,
        &gens,
        (0, 0),
        move |x, y| {
            let mut scale = 1u64;
            for _ in 0..x.1 {
                scale = scale * unit % p2;
            }
            ((x.0 + scale * y.0) % p2, (x.1 + y.1) % p)
        },
        (p2 * p) as usize + 1,
    )
}

/// C3 ≀ C3 as permutations of nine points {0..8}: the base translation
/// (0 1 2) and the block rotation (0 3 6)(1 4 7)(2 5 8). Order 81.
pub fn wreath_c3() -> FiniteGroup {
    let b: Vec<u8> = vec![1, 2, 0, 3, 4, 5, 6, 7, 8];
    let r: Vec<u8> = vec![3, 4, 5, 6, 7, 8, 0, 1, 2];
    let gens = vec![("b".to_string(), b), ("r".to_string(), r)];
    let identity: Vec<u8> = (0..9).collect();
    expect_closure(
        3,
        &gens,
        identity,
        |a: &Vec<u8>, b: &Vec<u8>| a.iter().map(|&i| b[i as usize]).collect(),
        82,
    )
    .with_origin(Origin::FromPermutations)
}

/// The two groups (Z₉⊕Z₃)⋊C₃ of order 81 given by the presentations
/// a⁹ = b³ = c³ = 1, ab = ba, cbc⁻¹ = a³b, and
///   which = 9:  cac⁻¹ = ab⁻¹   (62 elements of order 3)
///   which = 8:  cac⁻¹ = ab     (26 elements of order 3)
/// realised as triples ((x mod 9, y mod 3), j mod 3) with c acting by θ.
pub fn s81(which: u8) -> FiniteGroup {
    assert!(which == 8 || which == 9, "only s81(8) and s81(9) exist here");
    let theta = move |x: u64, y: u64| -> (u64, u64) {
        let nx = (x + 3 * y) % 9;
        let ny = if which == 9 { (3 - x % 3 + y) % 3 } else { (x + y) % 3 };
        (nx, ny)
    };
    let gens = vec![
        ("a".to_string(), (1u64, 0u64, 0u64)),
        ("b".to_string(), (0u64, 1u64, 0u64)),
        ("c".to_string(), (0u64, 0u64, 1u64)),
    ];
    expect_closure(
        3,
        &gens,
        (0, 0, 0),
        move |u, v| {
            let (mut x, mut y) = (v.0, v.1);
            for _ in 0..u.2 {
                let t = theta(x, y);
                x = t.0;
                y = t.1;
            }
            ((u.0 + x) % 9, (u.1 + y) % 3, (u.2 + v.2) % 3)
        },
        82,
    )
}

/// The reference groups a given (p, order) is compared against by
/// [`identify`]; abelian groups are named directly from their invariant
/// factors and need no entry.
pub fn reference_groups(p: u64, order: u64) -> Vec<(String, FiniteGroup)> {
    let mut out = Vec::new();
    if order == p.pow(3) {
        out.push((format!("UT(3,{})", p), ut3(p)));
        out.push((format!("C{}:C{}", p * p, p), cp2_semi_cp(p)));
    }
    if p == 3 && order == 81 {
        out.push(("C3wrC3".to_string(), wreath_c3()));
        out.push(("S(81,8)".to_string(), s81(8)));
        out.push(("S(81,9)".to_string(), s81(9)));
    }
    out
}

/// Name the isomorphism type of `g` when it is abelian (exact, from
/// invariant factors) or matches a reference construction; otherwise an
/// explicit "unidentified" marker. Used to compare computed subgroup lists
/// against stated isomorphism types.
pub fn identify(g: &FiniteGroup) -> String {
    let fp = fingerprint(g);
    if fp.derived_order == 1 {
        if fp.order == 1 {
            return "C1".to_string();
        }
        return fp
            .abelianization
            .iter()
            .map(|q| format!("C{}", q))
            .collect::<Vec<_>>()
            .join("x");
    }
    for (label, h) in reference_groups(g.p(), g.order()) {
        if is_isomorphic(g, &h) {
            return label;
        }
    }
    format!("unidentified(order {})", g.order())
}

/// Expected count of order-p elements in a group of order p^{p+1} with
/// Frattini quotient of rank 2, given k = the number of maximal subgroups
/// of exponent p²: (p+1−k)(p^p − p^{p−1}) + p^{p−1} − 1.
pub fn order_p_count_by_maximals(p: u64, k: u64) -> u64 {
    (p + 1 - k) * (p.pow(p as u32) - p.pow(p as u32 - 1)) + p.pow(p as u32 - 1) - 1
}

#[derive(Debug, thiserror::Error, PartialEq, Eq)]
pub enum ConstructionError {
    #[error("unknown construction {0:?}")]
    Unknown(String),
}

/// Build a reference group by label (the names used in group files and on
/// the command line).
pub fn by_label(label: &str) -> Result<FiniteGroup, ConstructionError> {
    match label {
        "UT(3,3)" => Ok(ut3(3)),
        "UT(3,5)" => Ok(ut3(5)),
        "UT(3,7)" => Ok(ut3(7)),
        "C3wrC3" | "S(81,7)" => Ok(wreath_c3()),
        "S(81,8)" => Ok(s81(8)),
        "S(81,9)" => Ok(s81(9)),
        "C9:C3" => Ok(cp2_semi_cp(3)),
        "C25:C5" => Ok(cp2_semi_cp(5)),
        _ => {
            // Abelian types like "C9xC3": parse factor orders.
            let mut exps = Vec::new();
            let mut p = 0u64;
            for part in label.split('x') {
                let Some(rest) = part.strip_prefix('C') else {
                    return Err(ConstructionError::Unknown(label.to_string()));
                };
                let Ok(q) = rest.parse::<u64>() else {
                    return Err(ConstructionError::Unknown(label.to_string()));
                };
                // q must be a power of a single prime shared by all parts.
                let mut base = q;
                let mut e = 0u32;
                if q < 2 {
                    return Err(ConstructionError::Unknown(label.to_string()));
                }
                let prime = smallest_prime_factor(q);
                while base > 1 {
                    if base % prime != 0 {
                        return Err(ConstructionError::Unknown(label.to_string()));
                    }
                    base /= prime;
                    e += 1;
                }
                if p == 0 {
                    p = prime;
                } else if p != prime {
                    return Err(ConstructionError::Unknown(label.to_string()));
                }
                exps.push(e);
            }
            if p == 0 {
                return Err(ConstructionError::Unknown(label.to_string()));
            }
            Ok(abelian(p, &exps))
        }
    }
}

fn smallest_prime_factor(mut q: u64) -> u64 {
    for f in 2.. {
        if f * f > q {
            return q;
        }
        if q % f == 0 {
            while q % f == 0 && q > f {
                q /= f;
            }
            return f;
        }
    }
    unreachable!()
}

#[cfg(test)]
mod tests {
    use std::collections::BTreeMap;

    use super::super::words::presentation_check;
    use super::*;

    #[test]
    fn heisenberg_group_basics() {
        for p in [3u64, 5] {
            let g = ut3(p);
            assert_eq!(g.order(), p.pow(3));
            assert!(!g.is_abelian());
            assert!(g.is_p_group());
            assert_eq!(fingerprint(&g).exponent, p);
        }
    }

    #[test]
    fn heisenberg_presentation_holds() {
        let g = ut3(3);
        let a = g.gens()[0];
        let b = g.gens()[1];
        // Standard two-generator presentation, commutators written out.
        let relators = [
            "a^3",
            "b^3",
            "(a^-1 b^-1 a b)^3",
            "(a^-1 b^-1 a b)^-1 a^-1 (a^-1 b^-1 a b) a",
            "(a^-1 b^-1 a b)^-1 b^-1 (a^-1 b^-1 a b) b",
        ];
        let report = presentation_check(&g, &relators, &[("a", a), ("b", b)]).unwrap();
        assert!(report.holds(), "failed: {:?}", report.failed_relators);
    }

    #[test]
    fn wreath_census_matches_coordinate_sum_rule() {
        // In C3≀C3 = {(v; σ)}, an element with σ ≠ 1 has order 3 exactly
        // when the coordinate sum of v vanishes, so the counts are
        //   order 3: (27 − 1) + 2·9 = 44,   order 9: 2·(27 − 9) = 36.
        let g = wreath_c3();
        assert_eq!(g.order(), 81);
        let fp = fingerprint(&g);
        assert_eq!(
            fp.order_census,
            BTreeMap::from([(1, 1), (3, 44), (9, 36)])
        );
        assert_eq!(fp.exponent, 9);
        assert_eq!(fp.nilpotency_class, Some(3));
        assert_eq!(fp.d, Some(2));
    }

    #[test]
    fn s81_presentations_hold_and_censuses_differ() {
        for (which, order3) in [(9u8, 62u64), (8, 26)] {
            let g = s81(which);
            assert_eq!(g.order(), 81);
            let fp = fingerprint(&g);
            assert_eq!(
                fp.order_census.get(&3).copied().unwrap_or(0),
                order3,
                "s81({}) order-3 census",
                which
            );
            assert_eq!(
                fp.order_census.get(&9).copied().unwrap_or(0),
                81 - 1 - order3
            );
            let a = g.gens()[0];
            let b = g.gens()[1];
            let c = g.gens()[2];
            let conj = if which == 9 { "c a c^-1 = a b^-1" } else { "c a c^-1 = a b" };
            let relators = ["a^9", "b^3", "c^3", "a b = b a", conj, "c b c^-1 = a^3 b"];
            let report =
                presentation_check(&g, &relators, &[("a", a), ("b", b), ("c", c)]).unwrap();
            assert!(
                report.holds(),
                "s81({}) failed relators: {:?}",
                which,
                report.failed_relators
            );
        }
    }

    #[test]
    fn order_p_count_formula_reproduces_all_three_censuses() {
        // k = number of exponent-p² maximal subgroups.
        assert_eq!(order_p_count_by_maximals(3, 1), 62); // s81(9)
        assert_eq!(order_p_count_by_maximals(3, 3), 26); // s81(8)
        assert_eq!(order_p_count_by_maximals(3, 2), 44); // C3≀C3
    }

    #[test]
    fn exponent_p_squared_group() {
        let g = cp2_semi_cp(3);
        assert_eq!(g.order(), 27);
        assert!(!g.is_abelian());
        let fp = fingerprint(&g);
        assert_eq!(fp.exponent, 9);
        // Same census as the abelian C9×C3 — the census alone cannot
        // separate them.
        assert_eq!(
            fp.order_census,
            fingerprint(&abelian(3, &[2, 1])).order_census
        );
        assert_eq!(fp.derived_order, 3);
    }

    #[test]
    fn identify_names_the_catalog() {
        assert_eq!(identify(&cyclic(3, 2)), "C9");
        assert_eq!(identify(&abelian(3, &[1, 1, 1])), "C3xC3xC3");
        assert_eq!(identify(&ut3(3)), "UT(3,3)");
        assert_eq!(identify(&cp2_semi_cp(3)), "C9:C3");
        assert_eq!(identify(&wreath_c3()), "C3wrC3");
        assert_eq!(identify(&s81(9)), "S(81,9)");
        assert_eq!(identify(&s81(8)), "S(81,8)");
        assert_eq!(identify(&cyclic(3, 0)), "C1");
    }

    #[test]
    fn labels_round_trip() {
        for label in ["UT(3,3)", "C3wrC3", "S(81,9)", "C9:C3", "C9xC3", "C27"] {
            let g = by_label(label).unwrap();
            let named = identify(&g);
            let expect = if label == "C3wrC3" { "C3wrC3" } else { label };
            assert_eq!(named, expect, "label {}", label);
        }
        assert!(by_label("Q8").is_err());
        // Mixed-prime abelian labels are outside p-group mode.
        assert!(by_label("C6").is_err());
    }
}
