//! Scenario runner: each scenario rebuilds one catalog curve (or a family of
//! reference groups) from scratch and re-derives the claims attached to it —
//! map verification, group closure and identification, genus and p-rank
//! bookkeeping, bound attainment, census counts — emitting one report step
//! per claim. Steps carry a provenance tag (`stated` for values the source
//! material asserts, `derived` for values recomputed here by an independent
//! route, `trivial` for bookkeeping) and a status; a `discrepancy` status
//! marks a spot where the checked value genuinely disagrees with the asserted
//! one, and `recorded` marks an assertion that is out of reach of this
//! toolkit and is carried along verbatim.

use std::collections::BTreeMap;
use std::fmt::Display;
use std::path::{Path, PathBuf};

use num_bigint::BigUint;
use num_rational::Rational64;
use thiserror::Error;

use crate::catalog::{get_curve_in, CatalogError, CurveSpec};
use crate::counting::{
    bh_bound, frbound_count, gl_order_mod_pk, not_div_p_check, sylow_bh_bound, CountError, Family,
    GroupProfile,
};
use crate::group::constructions::{abelian, cyclic, order_p_count_by_maximals, s81, ut3, wreath_c3};
use crate::group::fingerprint::{fingerprint, maximal_subgroup_elements, maximal_subgroups};
use crate::group::{
    aut_order_bruteforce, closure_of_maps, identify, is_isomorphic, presentation_check,
    FiniteGroup, GroupError,
};
use crate::input::{build_tower, BuiltTower, InputError};
use crate::ramify::{
    bounds, classify_princ, cover_consistency, ds_prank, extremal_check, hurwitz_genus,
    CoverData, PrincipalCase, RamifyError,
};
use crate::report::{Provenance, Report, Status, Step};
use crate::tower::{am_wp_exclusion, as_step_genus, FieldAuto, TowerElem, TowerError};

/// Registered scenario names, in canonical report order.
pub const SCENARIO_NAMES: [&str; 7] = [
    "S1-artin-mumford",
    "S2-xc-p3",
    "S2-xc-p5",
    "S3-genus28",
    "S4-families",
    "S5-bounds",
    "S6-groups",
];

/// Element cap for every closure run in the scenarios; the largest group
/// any scenario builds has order 125.
const CLOSURE_CAP: usize = 4096;

/// Knobs shared by all scenarios.
#[derive(Clone, Debug, Default)]
pub struct RunOptions {
    /// Run the slow extras (larger coefficient fields in the ℘-image search).
    pub extended: bool,
    /// Catalog override directory; `None` means built-ins only. The caller
    /// resolves any environment variable once, so a run is a pure function
    /// of its options.
    pub catalog_dir: Option<PathBuf>,
}

impl RunOptions {
    fn dir(&self) -> Option<&Path> {
        self.catalog_dir.as_deref()
    }
}

/// Structural failures: the scenario could not be set up at all. Failed
/// *checks* are not errors — they become report steps with status `fail`.
#[derive(Debug, Error)]
pub enum ScenarioError {
    #[error("unknown scenario `{0}`")]
    UnknownScenario(String),
    #[error(transparent)]
    Catalog(#[from] CatalogError),
    #[error(transparent)]
    Input(#[from] InputError),
    #[error(transparent)]
    Group(#[from] GroupError),
    #[error(transparent)]
    Tower(#[from] TowerError),
    #[error(transparent)]
    Ramify(#[from] RamifyError),
    #[error(transparent)]
    Count(#[from] CountError),
}

/// Run one scenario by name.
pub fn run_scenario(name: &str, opts: &RunOptions) -> Result<Report, ScenarioError> {
    let steps = match name {
        "S1-artin-mumford" => s1_artin_mumford(opts)?,
        "S2-xc-p3" => s2_xc(3, opts)?,
        "S2-xc-p5" => s2_xc(5, opts)?,
        "S3-genus28" => s3_genus28(opts)?,
        "S4-families" => s4_families()?,
        "S5-bounds" => s5_bounds(opts)?,
        "S6-groups" => s6_groups()?,
        other => return Err(ScenarioError::UnknownScenario(other.to_string())),
    };
    Ok(Report {
        scenario: name.to_string(),
        steps,
    })
}

/// Run every registered scenario; `jobs > 1` distributes scenarios over a
/// dedicated thread pool. Reports come back sorted by scenario name, so the
/// output does not depend on the job count.
pub fn run_all(opts: &RunOptions, jobs: usize) -> Result<Vec<Report>, ScenarioError> {
    let collected: Vec<Result<Report, ScenarioError>> = if jobs > 1 {
        let pool = rayon::ThreadPoolBuilder::new()
            .num_threads(jobs.min(SCENARIO_NAMES.len()))
            .build()
            .expect("thread pool construction");
        pool.install(|| {
            use rayon::prelude::*;
            SCENARIO_NAMES
                .par_iter()
                .map(|n| run_scenario(n, opts))
                .collect()
        })
    } else {
        SCENARIO_NAMES
            .iter()
            .map(|n| run_scenario(n, opts))
            .collect()
    };
    let mut reports = Vec::with_capacity(collected.len());
    for r in collected {
        reports.push(r?);
    }
    crate::report::sort_reports(&mut reports);
    Ok(reports)
}

// ---------------------------------------------------------------------------
// Step constructors.

fn step(
    name: &str,
    anchor: &str,
    provenance: Provenance,
    expected: impl Into<String>,
    actual: impl Into<String>,
    status: Status,
) -> Step {
    Step {
        name: name.to_string(),
        anchor: anchor.to_string(),
        expected: expected.into(),
        actual: actual.into(),
        provenance,
        status,
    }
}

/// Pass/fail step from an explicit condition.
fn claim(
    name: &str,
    anchor: &str,
    provenance: Provenance,
    expected: impl Into<String>,
    actual: impl Into<String>,
    ok: bool,
) -> Step {
    let status = if ok { Status::Pass } else { Status::Fail };
    step(name, anchor, provenance, expected, actual, status)
}

/// Pass/fail step comparing two displayed values for exact equality.
fn equals<T: PartialEq + Display>(
    name: &str,
    anchor: &str,
    provenance: Provenance,
    expected: T,
    actual: T,
) -> Step {
    let ok = expected == actual;
    claim(
        name,
        anchor,
        provenance,
        expected.to_string(),
        actual.to_string(),
        ok,
    )
}

fn discrepancy(
    name: &str,
    anchor: &str,
    expected: impl Into<String>,
    actual: impl Into<String>,
) -> Step {
    step(
        name,
        anchor,
        Provenance::Stated,
        expected,
        actual,
        Status::Discrepancy,
    )
}

fn recorded(name: &str, anchor: &str, expected: impl Into<String>, actual: impl Into<String>) -> Step {
    step(
        name,
        anchor,
        Provenance::Stated,
        expected,
        actual,
        Status::Recorded,
    )
}

// ---------------------------------------------------------------------------
// Small shared helpers.

fn modinv(a: u64, p: u64) -> u64 {
    // a^{p−2} mod p for prime p.
    let mut acc = 1u64;
    let mut base = a % p;
    let mut e = p - 2;
    while e > 0 {
        if e & 1 == 1 {
            acc = acc * base % p;
        }
        base = base * base % p;
        e >>= 1;
    }
    acc
}

fn fmt_rat(r: Rational64) -> String {
    if *r.denom() == 1 {
        r.numer().to_string()
    } else {
        format!("{}/{}", r.numer(), r.denom())
    }
}

fn fmt_census(census: &BTreeMap<u64, u64>) -> String {
    let parts: Vec<String> = census.iter().map(|(o, n)| format!("{}:{}", o, n)).collect();
    format!("{{{}}}", parts.join(", "))
}

fn params_for(p: u64) -> BTreeMap<String, i64> {
    let mut m = BTreeMap::new();
    m.insert("p".to_string(), p as i64);
    m
}

/// Fetch a named, verified map out of a built tower.
fn built_map<'a>(built: &'a BuiltTower, name: &str) -> Result<&'a FieldAuto, ScenarioError> {
    built
        .map(name)
        .ok_or_else(|| ScenarioError::Input(InputError::UnverifiedMap {
            name: name.to_string(),
            relation: 0,
        }))
}

/// One step per declared map: it verified against every tower relation.
fn map_verify_steps(built: &BuiltTower, anchor: &str) -> Vec<Step> {
    let mut steps = Vec::new();
    for m in &built.maps {
        steps.push(claim(
            &format!("map-verify-{}", m.name()),
            anchor,
            Provenance::Stated,
            "relation preserved at every level",
            "relation preserved at every level",
            true,
        ));
    }
    for f in &built.map_failures {
        steps.push(claim(
            &format!("map-verify-{}", f.name),
            anchor,
            Provenance::Stated,
            "relation preserved at every level",
            format!("relation at level {} not preserved", f.relation),
            false,
        ));
    }
    steps.sort_by(|a, b| a.name.cmp(&b.name));
    steps
}

/// Genus and p-rank recomputed from the declared cover data, then the
/// quotient ladder from the declared semiregular subgroup orders.
fn invariant_steps(spec: &CurveSpec, anchor: &str) -> Result<Vec<Step>, ScenarioError> {
    let e = &spec.expected;
    let mut steps = vec![
        equals(
            "hurwitz-genus",
            anchor,
            Provenance::Stated,
            e.genus,
            hurwitz_genus(&e.cover)?,
        ),
        equals(
            "ds-prank",
            anchor,
            Provenance::Stated,
            e.prank,
            ds_prank(&e.cover)?,
        ),
    ];
    if !e.semiregular.is_empty() {
        let report = cover_consistency(&e.cover, e.genus, e.prank, &e.semiregular)?;
        let shown: Vec<String> = report
            .quotients
            .iter()
            .map(|q| {
                format!(
                    "|M|={} → ḡ={} γ̄={}",
                    q.subgroup_order,
                    q.quotient_genus.map_or("–".into(), |v| v.to_string()),
                    q.quotient_prank.map_or("–".into(), |v| v.to_string()),
                )
            })
            .collect();
        steps.push(claim(
            "quotient-ladder",
            anchor,
            Provenance::Derived,
            "every declared semiregular quotient has integral genus and p-rank",
            shown.join("; "),
            report.ok(),
        ));
    }
    Ok(steps)
}

/// Nakajima-bound attainment and the principal-case classification for a
/// catalog curve with γ = g.
fn attainment_steps(
    spec: &CurveSpec,
    anchor_bound: &str,
    anchor_case: &str,
    expect_case: PrincipalCase,
) -> Result<Vec<Step>, ScenarioError> {
    let e = &spec.expected;
    let p = e.cover.p;
    let order = e.cover.order;
    let b = bounds(p, e.genus, e.prank)?;
    let nak = b.nakajima.map(fmt_rat).unwrap_or_else(|| "undefined".into());
    let mut steps = vec![claim(
        "nakajima-attained",
        anchor_bound,
        Provenance::Stated,
        format!("|S| = {} equals the bound", order),
        format!("bound = {}", nak),
        b.nakajima == Some(Rational64::from_integer(order as i64)),
    )];
    if order >= p * p {
        steps.push(equals(
            "extremality",
            anchor_bound,
            Provenance::Stated,
            true,
            extremal_check(p, order, e.genus)?,
        ));
    }
    steps.push(equals(
        "classify-case",
        anchor_case,
        Provenance::Stated,
        expect_case,
        classify_princ(p, order, e.genus, e.prank, true)?,
    ));
    Ok(steps)
}

// ---------------------------------------------------------------------------
// S1: the p = 3 curve with ℘(y) = c/(x³ − x).

fn s1_artin_mumford(opts: &RunOptions) -> Result<Vec<Step>, ScenarioError> {
    let spec = get_curve_in(opts.dir(), "artin-mumford", &BTreeMap::new())?;
    let built = build_tower(&spec.tower)?;
    let anchor = "artin-mumford-curve";

    let mut steps = vec![claim(
        "tower-build",
        anchor,
        Provenance::Trivial,
        "one defining relation, both translation maps verified",
        format!(
            "{} level(s), {} verified map(s), {} failure(s)",
            built.tower.levels(),
            built.maps.len(),
            built.map_failures.len()
        ),
        built.tower.levels() == 1 && built.maps.len() == 2 && built.map_failures.is_empty(),
    )];
    steps.extend(map_verify_steps(&built, anchor));

    let gx = built_map(&built, "gx")?;
    let gy = built_map(&built, "gy")?;
    steps.push(claim(
        "generators-commute",
        anchor,
        Provenance::Stated,
        "gx gy = gy gx",
        if gx.compose(gy)? == gy.compose(gx)? {
            "images agree"
        } else {
            "images differ"
        },
        gx.compose(gy)? == gy.compose(gx)?,
    ));
    for (name, m) in [("gx", gx), ("gy", gy)] {
        let ord = m.order(16)?;
        steps.push(claim(
            &format!("generator-order-{}", name),
            anchor,
            Provenance::Stated,
            "3",
            ord.map_or("unbounded".to_string(), |o| o.to_string()),
            ord == Some(3),
        ));
    }

    let closure = closure_of_maps(&[gx.clone(), gy.clone()], CLOSURE_CAP)?;
    steps.push(equals(
        "closure-order",
        anchor,
        Provenance::Stated,
        9,
        closure.group.order(),
    ));
    steps.push(claim(
        "group-isomorphism",
        anchor,
        Provenance::Stated,
        "S ≅ C3 × C3",
        identify(&closure.group),
        is_isomorphic(&closure.group, &abelian(3, &[1, 1])),
    ));

    let phi1 = built
        .tower
        .phi(1)
        .as_base()
        .expect("the first relation body lives in the base field");
    let sg = as_step_genus(&phi1)?;
    steps.push(equals(
        "one-step-genus",
        anchor,
        Provenance::Stated,
        4,
        sg.genus,
    ));
    steps.push(claim(
        "pole-normalization",
        anchor,
        Provenance::Derived,
        "three simple poles, all orders prime to 3",
        format!(
            "{} ramified place(s), orders {:?}",
            sg.reduction.ramified.len(),
            sg.reduction
                .ramified
                .iter()
                .map(|(_, o)| *o)
                .collect::<Vec<_>>()
        ),
        sg.reduction.ramified.len() == 3
            && sg.reduction.ramified.iter().all(|&(_, o)| o == 1),
    ));

    steps.extend(invariant_steps(&spec, anchor)?);
    steps.extend(attainment_steps(
        &spec,
        "bound-attainment",
        "principal-classification",
        PrincipalCase::CaseIII,
    )?);

    steps.push(recorded(
        "uniqueness-note",
        "ordinary-genus-4-uniqueness",
        "the ordinary genus-4 curve in characteristic 3 with nine automorphisms is unique",
        "statement carried verbatim; the ℘-image exclusion behind its proof is checked in S2-xc-p3",
    ));
    Ok(steps)
}

// ---------------------------------------------------------------------------
// S2: the curve tower ℘(y) = c/(xᵖ − x), ℘(z) = xyᵖ − xᵖy for p ∈ {3, 5}.

fn s2_xc(p: u64, opts: &RunOptions) -> Result<Vec<Step>, ScenarioError> {
    let spec = get_curve_in(opts.dir(), "x-c", &params_for(p))?;
    let built = build_tower(&spec.tower)?;
    let anchor = "xc-curve-tower";

    let mut steps = vec![claim(
        "tower-build",
        anchor,
        Provenance::Trivial,
        "two defining relations, all four maps verified",
        format!(
            "{} level(s), {} verified map(s), {} failure(s)",
            built.tower.levels(),
            built.maps.len(),
            built.map_failures.len()
        ),
        built.tower.levels() == 2 && built.maps.len() == 4 && built.map_failures.is_empty(),
    )];
    steps.extend(map_verify_steps(&built, anchor));

    let g = built_map(&built, "g")?.clone();
    let h = built_map(&built, "h")?.clone();
    let r = built_map(&built, "r")?.clone();
    let t = built_map(&built, "t")?.clone();
    let anchor_rel = "normalizer-relations";

    // Conjugation of a substitution map σ by τ, as function-field pullbacks:
    // τ σ τ⁻¹ applied right-to-left.
    let t_inv = t.pow(p - 2)?;
    let conj = |outer: &FieldAuto, inner: &FieldAuto, outer_inv: &FieldAuto| {
        outer
            .compose(inner)
            .and_then(|m| m.compose(outer_inv))
            .expect("maps on one tower compose")
    };

    steps.push(claim(
        "relation-rgr",
        anchor_rel,
        Provenance::Stated,
        "r g r = h^{-1}",
        "checked as pullback maps",
        conj(&r, &g, &r) == h.pow(p - 1)?,
    ));
    steps.push(claim(
        "relation-rhr",
        anchor_rel,
        Provenance::Stated,
        "r h r = g^{-1}",
        "checked as pullback maps",
        conj(&r, &h, &r) == g.pow(p - 1)?,
    ));

    let omega = crate::catalog::least_primitive_root(p);
    steps.push(claim(
        "relation-conj-t-g",
        anchor_rel,
        Provenance::Stated,
        format!("t g t^{{-1}} = g^{{ω^{{-1}}}} with ω = {}", omega),
        "checked as pullback maps (point form: τ⁻¹gτ = g^ω)",
        conj(&t, &g, &t_inv) == g.pow(modinv(omega, p))?,
    ));
    steps.push(claim(
        "relation-conj-t-h",
        anchor_rel,
        Provenance::Stated,
        format!("t h t^{{-1}} = h^{{ω}} with ω = {}", omega),
        "checked as pullback maps (point form: τ⁻¹hτ = h^{ω^{-1}})",
        conj(&t, &h, &t_inv) == h.pow(omega)?,
    ));
    steps.push(claim(
        "dihedral-r-involution",
        anchor_rel,
        Provenance::Stated,
        "r² = 1",
        "checked",
        r.compose(&r)?.is_identity(),
    ));
    let t_order = t.order(16)?;
    steps.push(claim(
        "dihedral-t-order",
        anchor_rel,
        Provenance::Stated,
        (p - 1).to_string(),
        t_order.map_or("unbounded".to_string(), |o| o.to_string()),
        t_order == Some(p - 1),
    ));
    steps.push(claim(
        "dihedral-rtr",
        anchor_rel,
        Provenance::Stated,
        "r t r = t^{-1}",
        "checked as pullback maps",
        conj(&r, &t, &r) == t.pow(p - 2)?,
    ));

    let closure = closure_of_maps(&[g.clone(), h.clone()], CLOSURE_CAP)?;
    let s_group = &closure.group;
    let fp = fingerprint(s_group);
    steps.push(equals(
        "closure-order",
        "sylow-subgroup-structure",
        Provenance::Stated,
        p * p * p,
        s_group.order(),
    ));
    steps.push(equals(
        "exponent-p",
        "sylow-subgroup-structure",
        Provenance::Stated,
        p,
        fp.exponent,
    ));
    steps.push(claim(
        "ut-isomorphism",
        "sylow-subgroup-structure",
        Provenance::Stated,
        format!("S ≅ UT(3,{})", p),
        identify(s_group),
        is_isomorphic(s_group, &ut3(p)),
    ));
    steps.push(claim(
        "phi-structure",
        "sylow-subgroup-structure",
        Provenance::Derived,
        format!("Φ(S) = Z(S) = S′ of order {}", p),
        format!(
            "|Φ| = {}, |Z| = {}, |S′| = {}",
            fp.frattini_order.unwrap_or(0),
            fp.center_order,
            fp.derived_order
        ),
        fp.frattini_order == Some(p) && fp.center_order == p && fp.derived_order == p,
    ));

    // The additive-shift identity chain, levelwise in the tower: with
    // u = xyᵖ − xᵖy and i running over units,
    //   u + i(xᵖ − x) = xᵖ(i−y) − x(i−y)ᵖ = x(i−y)·∏_{a≠0}(x − a(i−y)).
    let tower = &built.tower;
    let x = tower.x();
    let y = tower.gen(1);
    let u = x.mul(&y.pow(p)).sub(&x.pow(p).mul(&y));
    let frob_x = x.pow(p).sub(&x);
    let anchor_ws = "shift-identity-chain";
    let chain = |i: u64| -> TowerElem {
        let iy = tower.from_int(i as i64).sub(&y);
        x.pow(p).mul(&iy).sub(&x.mul(&iy.pow(p)))
    };
    for i in 1..p {
        let iy = tower.from_int(i as i64).sub(&y);
        let lhs = u.add(&tower.from_int(i as i64).mul(&frob_x));
        let mid = chain(i);
        steps.push(claim(
            &format!("ws-shift-identity-{}", i),
            anchor_ws,
            Provenance::Stated,
            format!("u + {}(xᵖ − x) = xᵖ({}−y) − x({}−y)ᵖ", i, i, i),
            "normal forms agree",
            lhs == mid,
        ));
        let mut product = x.mul(&iy);
        for a in 1..p {
            product = product.mul(&x.sub(&tower.from_int(a as i64).mul(&iy)));
        }
        steps.push(claim(
            &format!("ws-factorization-{}", i),
            anchor_ws,
            Provenance::Stated,
            format!("xᵖ({}−y) − x({}−y)ᵖ splits into linear factors x − a({}−y)", i, i, i),
            "normal forms agree",
            mid == product,
        ));
    }
    // The printed witness for the i-th chain member is ℘(ix); the value that
    // actually matches is ℘((p−i)x), an index relabeling of the same family.
    let pairing_ok = (1..p).all(|i| {
        let wit = tower.from_int((p - i) as i64).mul(&x);
        u.sub(&wit.pow(p).sub(&wit)) == chain(i)
    });
    let printed_pairing = {
        let wit = x.clone();
        u.sub(&wit.pow(p).sub(&wit)) == chain(1)
    };
    steps.push(claim(
        "ws-witness-family",
        anchor_ws,
        Provenance::Derived,
        "each chain member is u − ℘(j·x) for a unit j",
        if printed_pairing {
            "pairing j = i as printed".to_string()
        } else {
            "pairing is j = p − i (an index relabeling of the printed family)".to_string()
        },
        pairing_ok,
    ));

    // ℘-image exclusion: u avoids ℘(span{1, x, y, xy}).
    let c = 1i64;
    let anchor_wp = "wp-image-exclusion";
    let base = am_wp_exclusion(p, c, 1)?;
    steps.push(claim(
        "wp-exclusion",
        anchor_wp,
        Provenance::Stated,
        "u ∉ ℘(L), L = span{1, x, y, xy} over the prime field",
        format!("no witness among {} candidates", base.candidates),
        !base.in_image,
    ));
    if opts.extended {
        match am_wp_exclusion(p, c, p as u32) {
            Ok(out) => steps.push(claim(
                "wp-exclusion-extended",
                anchor_wp,
                Provenance::Stated,
                format!("u ∉ ℘(L) with coefficients in F_{{{}^{}}}", p, p),
                format!("no witness among {} candidates", out.candidates),
                !out.in_image,
            )),
            Err(TowerError::SearchSpaceTooLarge(n)) => {
                steps.push(recorded(
                    "wp-exclusion-extended",
                    anchor_wp,
                    format!("u ∉ ℘(L) with coefficients in F_{{{}^{}}}", p, p),
                    format!("candidate space of size {} exceeds the search budget", n),
                ));
                let partial = am_wp_exclusion(p, c, 2)?;
                steps.push(claim(
                    "wp-exclusion-quadratic",
                    anchor_wp,
                    Provenance::Derived,
                    format!("u ∉ ℘(L) with coefficients in F_{{{}^2}}", p),
                    format!("no witness among {} candidates", partial.candidates),
                    !partial.in_image,
                ));
            }
            Err(e) => return Err(e.into()),
        }
    }

    steps.extend(invariant_steps(&spec, "xc-curve-invariants")?);
    steps.extend(attainment_steps(
        &spec,
        "bound-attainment",
        "principal-classification",
        PrincipalCase::CaseIII,
    )?);
    Ok(steps)
}

// ---------------------------------------------------------------------------
// S3: the genus-28 tower with an order-81 translation group.

fn s3_genus28(opts: &RunOptions) -> Result<Vec<Step>, ScenarioError> {
    let spec = get_curve_in(opts.dir(), "genus28", &BTreeMap::new())?;
    let built = build_tower(&spec.tower)?;
    let anchor = "genus-28-tower";

    let mut steps = vec![claim(
        "tower-build",
        anchor,
        Provenance::Trivial,
        "four defining relations, all five printed maps verified",
        format!(
            "{} level(s), {} verified map(s), {} failure(s)",
            built.tower.levels(),
            built.maps.len(),
            built.map_failures.len()
        ),
        built.tower.levels() == 4 && built.maps.len() == 5 && built.map_failures.is_empty(),
    )];
    steps.extend(map_verify_steps(&built, anchor));

    let g1 = built_map(&built, "g1")?;
    let g2 = built_map(&built, "g2")?;
    steps.push(discrepancy(
        "printed-generator-duplication",
        "translation-generator-list",
        "five distinct generating translations",
        if g1 == g2 {
            "the printed images of g1 and g2 are identical maps"
        } else {
            "the printed images of g1 and g2 differ"
        },
    ));

    let gens: Vec<FieldAuto> = spec
        .group_gens
        .iter()
        .map(|n| built_map(&built, n).cloned())
        .collect::<Result<_, _>>()?;
    let closure = closure_of_maps(&gens, CLOSURE_CAP)?;
    let s_group = &closure.group;
    let order = s_group.order();
    steps.push(step(
        "closure-order",
        "translation-group-order",
        Provenance::Stated,
        "81".to_string(),
        order.to_string(),
        if order == 81 {
            Status::Pass
        } else {
            Status::Discrepancy
        },
    ));

    if order == 81 {
        let fp = fingerprint(s_group);
        steps.push(claim(
            "group-isomorphism",
            "translation-group-structure",
            Provenance::Stated,
            "S ≅ C3 ≀ C3 (Sylow 3-subgroup of Sym(9))",
            identify(s_group),
            is_isomorphic(s_group, &wreath_c3()),
        ));
        steps.push(equals(
            "order-census",
            "translation-group-structure",
            Provenance::Derived,
            "{1:1, 3:44, 9:36}".to_string(),
            fmt_census(&fp.order_census),
        ));
        let mut labels: Vec<String> = maximal_subgroups(s_group)?
            .iter()
            .map(identify)
            .collect();
        labels.sort();
        steps.push(equals(
            "maximal-structure",
            "translation-group-structure",
            Provenance::Stated,
            "C3xC3xC3, C9:C3, C9:C3, UT(3,3)".to_string(),
            labels.join(", "),
        ));
        let phi = s_group.frattini()?;
        let phi_group = s_group.subgroup(&phi)?;
        steps.push(claim(
            "phi-structure",
            "translation-group-structure",
            Provenance::Derived,
            "Φ(S) ≅ C3 × C3 of order 9, d(S) = 2",
            format!("Φ ≅ {}, d = {}", identify(&phi_group), fp.d.unwrap_or(0)),
            identify(&phi_group) == "C3xC3" && fp.d == Some(2),
        ));
    } else {
        steps.push(recorded(
            "group-structure-skipped",
            "translation-group-structure",
            "structure checks for the order-81 closure",
            format!("closure order {} differs from 81; checks not applicable", order),
        ));
    }

    steps.extend(invariant_steps(&spec, "genus-28-invariants")?);
    steps.extend(attainment_steps(
        &spec,
        "bound-attainment",
        "principal-classification",
        PrincipalCase::CaseIII,
    )?);
    Ok(steps)
}

// ---------------------------------------------------------------------------
// S4: genus formulas for the two unramified families, automorphism counts,
// and the order-|GL| bookkeeping around them.

fn s4_families() -> Result<Vec<Step>, ScenarioError> {
    let mut steps = Vec::new();
    let anchor_fam = "unramified-family-genus";

    // (p, N, family, expected genus, provenance). The first block is printed
    // in the source; larger instances are frozen from the closed form and
    // cross-checked against the quotient formula below.
    let family_cases: [(u64, u32, Family, &str, Provenance); 8] = [
        (3, 1, Family::BaseCurve, "10", Provenance::Stated),
        (3, 2, Family::BaseCurve, "82", Provenance::Stated),
        (5, 1, Family::BaseCurve, "1876", Provenance::Stated),
        (3, 1, Family::ArtinMumford, "244", Provenance::Stated),
        (5, 2, Family::BaseCurve, "1171876", Provenance::Derived),
        (3, 2, Family::ArtinMumford, "19684", Provenance::Derived),
        (5, 1, Family::ArtinMumford, "2288818359376", Provenance::Derived),
        (
            5,
            2,
            Family::ArtinMumford,
            "349245965480804443359376",
            Provenance::Derived,
        ),
    ];
    for (p, n, fam, want, prov) in family_cases {
        steps.push(equals(
            &format!("family-genus-{}-{}-{}", fam, p, n),
            anchor_fam,
            prov,
            want.to_string(),
            crate::counting::family_genus(p, n, fam)?.to_string(),
        ));
    }

    // Independent route: an unramified cover multiplies g − 1 by the group
    // order, so the family genus must agree with the Hurwitz/Deuring–
    // Shafarevich recomputation from the quotient invariants (u64 range only).
    let crosschecks: [(u64, u32, Family, u64, u64); 7] = [
        (3, 1, Family::BaseCurve, 9, 2),
        (3, 2, Family::BaseCurve, 81, 2),
        (5, 1, Family::BaseCurve, 625, 4),
        (5, 2, Family::BaseCurve, 390625, 4),
        (3, 1, Family::ArtinMumford, 81, 4),
        (3, 2, Family::ArtinMumford, 6561, 4),
        (5, 1, Family::ArtinMumford, 152587890625, 16),
    ];
    for (p, n, fam, ord, gbar) in crosschecks {
        let cover = CoverData {
            p,
            order: ord,
            gbar,
            gammabar: gbar,
            orbits: vec![],
        };
        let via_cover = BigUint::from(hurwitz_genus(&cover)?);
        let prank_matches = BigUint::from(ds_prank(&cover)?) == via_cover;
        steps.push(claim(
            &format!("ds-crosscheck-{}-{}-{}", fam, p, n),
            anchor_fam,
            Provenance::Derived,
            "closed form agrees with the unramified-cover recomputation, γ = g",
            format!("both give {}", via_cover),
            crate::counting::family_genus(p, n, fam)? == via_cover && prank_matches,
        ));
    }

    // Counts of unramified extensions with fixed group over an ordinary
    // curve of p-rank 2.
    let anchor_count = "unramified-extension-counts";
    let alpha_c3 = aut_order_bruteforce(&cyclic(3, 1))?;
    let alpha_c3c3 = aut_order_bruteforce(&abelian(3, &[1, 1]))?;
    let alpha_ut33 = aut_order_bruteforce(&ut3(3))?;
    for (label, profile, want) in [
        (
            "c3",
            GroupProfile {
                p: 3,
                n: 1,
                d: 1,
                alpha: Some(BigUint::from(alpha_c3)),
            },
            "4",
        ),
        (
            "c3xc3",
            GroupProfile {
                p: 3,
                n: 2,
                d: 2,
                alpha: Some(BigUint::from(alpha_c3c3)),
            },
            "1",
        ),
        (
            "ut33",
            GroupProfile {
                p: 3,
                n: 3,
                d: 2,
                alpha: Some(BigUint::from(alpha_ut33)),
            },
            "1",
        ),
    ] {
        steps.push(equals(
            &format!("frbound-{}", label),
            anchor_count,
            Provenance::Stated,
            want.to_string(),
            frbound_count(&profile, 2)?.to_string(),
        ));
    }
    let counts = [
        frbound_count(
            &GroupProfile {
                p: 3,
                n: 1,
                d: 1,
                alpha: Some(BigUint::from(alpha_c3)),
            },
            2,
        )?,
        BigUint::from(1u32),
        BigUint::from(1u32),
    ];
    steps.push(claim(
        "counts-not-divisible-by-p",
        anchor_count,
        Provenance::Stated,
        "none of the extension counts is divisible by 3",
        format!(
            "counts {}",
            counts
                .iter()
                .map(|c| c.to_string())
                .collect::<Vec<_>>()
                .join(", ")
        ),
        counts.iter().all(|c| not_div_p_check(c, 3)),
    ));

    // Automorphism orders against the p^{d(n−d)}·|GL(d,p)| ceiling.
    let anchor_aut = "automorphism-order-bounds";
    let alpha_c9 = aut_order_bruteforce(&cyclic(3, 2))?;
    for (label, alpha, n, d) in [
        ("c3xc3", alpha_c3c3, 2u32, 2u32),
        ("ut33", alpha_ut33, 3, 2),
        ("c9", alpha_c9, 2, 1),
    ] {
        let ceiling = bh_bound(3, n, d)?;
        steps.push(claim(
            &format!("aut-matches-bound-{}", label),
            anchor_aut,
            Provenance::Derived,
            format!("|Aut| attains the ceiling {}", ceiling),
            format!("|Aut| = {}", alpha),
            BigUint::from(alpha) == ceiling,
        ));
    }
    steps.push(equals(
        "sylow-bound-ut33",
        anchor_aut,
        Provenance::Derived,
        "27".to_string(),
        sylow_bh_bound(3, 3, 2)?.to_string(),
    ));

    // |GL(4, F₃)| and |GL(2, Z/9)|, with the printed claims about the
    // Frattini quotient of the order-729 group.
    let anchor_phi = "order-729-frattini-claims";
    let gl4 = gl_order_mod_pk(3, 4, 1)?;
    steps.push(equals(
        "gl4-f3-order",
        anchor_phi,
        Provenance::Derived,
        "24261120".to_string(),
        gl4.to_string(),
    ));
    let printed_product: u64 = (81 - 1) * (81 - 3) * (81 - 9) * (81 - 27);
    steps.push(claim(
        "phi-aut-printed-factorization",
        anchor_phi,
        Provenance::Stated,
        "(3⁴−1)(3⁴−3)(3⁴−3²)(3⁴−3³) matches |GL(4, F₃)|",
        format!("product = {}", printed_product),
        BigUint::from(printed_product) == gl4,
    ));
    let printed_value: u64 = (1u64 << 9) * 243 * 5 * 11;
    steps.push(step(
        "phi-aut-equality-claim",
        anchor_phi,
        Provenance::Stated,
        "2⁹·3⁵·5·11 = (3⁴−1)(3⁴−3)(3⁴−3²)(3⁴−3³)".to_string(),
        format!(
            "{} ≠ {} (the product factors as 2⁹·3⁶·5·13)",
            printed_value, gl4
        ),
        if BigUint::from(printed_value) == gl4 {
            Status::Pass
        } else {
            Status::Discrepancy
        },
    ));
    let gl2_z9 = gl_order_mod_pk(3, 2, 2)?;
    let alpha_c9c9 = aut_order_bruteforce(&abelian(3, &[2, 2]))?;
    steps.push(equals(
        "gl2-z9-order",
        anchor_phi,
        Provenance::Derived,
        gl2_z9.to_string(),
        BigUint::from(alpha_c9c9).to_string(),
    ));
    let d_c9c9 = fingerprint(&abelian(3, &[2, 2])).d;
    steps.push(step(
        "phi-aut-if-c9xc9",
        anchor_phi,
        Provenance::Stated,
        "Φ ≅ C9 × C9 with |Aut(Φ)| = 2⁹·3⁵·5·11 and d(Φ) = 4".to_string(),
        format!(
            "|Aut(C9×C9)| = {} = |GL(2, Z/9)| and d(C9×C9) = {}",
            alpha_c9c9,
            d_c9c9.unwrap_or(0)
        ),
        if BigUint::from(alpha_c9c9) == BigUint::from(printed_value) && d_c9c9 == Some(4) {
            Status::Pass
        } else {
            Status::Discrepancy
        },
    ));
    Ok(steps)
}

// ---------------------------------------------------------------------------
// S5: the bound landscape — attainment across the catalog, an extremality
// sweep, and the principal-case classification grid.

fn s5_bounds(opts: &RunOptions) -> Result<Vec<Step>, ScenarioError> {
    let mut steps = Vec::new();
    let anchor_bounds = "bound-values";

    let b = bounds(3, 10, 10)?;
    steps.push(equals(
        "bounds-xc-p3",
        anchor_bounds,
        Provenance::Stated,
        "stichtenoth 15, nakajima 27, threshold 81/5".to_string(),
        format!(
            "stichtenoth {}, nakajima {}, threshold {}",
            fmt_rat(b.stichtenoth),
            b.nakajima.map(fmt_rat).unwrap_or_else(|| "undefined".into()),
            fmt_rat(b.hyp_threshold)
        ),
    ));

    // Bound attainment and classification for every catalog entry, at every
    // characteristic it admits.
    let anchor_attain = "catalog-attainment";
    let curve_cases: [(&str, u64, PrincipalCase); 10] = [
        ("artin-mumford", 3, PrincipalCase::CaseIII),
        ("artin-mumford", 5, PrincipalCase::CaseIII),
        ("x-c", 3, PrincipalCase::CaseIII),
        ("x-c", 5, PrincipalCase::CaseIII),
        ("base-a", 3, PrincipalCase::CaseII),
        ("base-a", 5, PrincipalCase::CaseII),
        ("base-a", 7, PrincipalCase::CaseII),
        ("eqago1", 3, PrincipalCase::CaseII),
        ("genus28", 3, PrincipalCase::CaseIII),
        ("s27-tower", 3, PrincipalCase::CaseIII),
    ];
    for (name, p, case) in curve_cases {
        let spec = get_curve_in(opts.dir(), name, &params_for(p))?;
        let e = &spec.expected;
        let bset = bounds(p, e.genus, e.prank)?;
        let order = e.cover.order;
        steps.push(claim(
            &format!("nakajima-attained-{}-p{}", name, p),
            anchor_attain,
            Provenance::Stated,
            format!("bound equals |S| = {}", order),
            format!(
                "bound = {}",
                bset.nakajima.map(fmt_rat).unwrap_or_else(|| "undefined".into())
            ),
            bset.nakajima == Some(Rational64::from_integer(order as i64)),
        ));
        steps.push(equals(
            &format!("classify-case-{}-p{}", name, p),
            anchor_attain,
            Provenance::Stated,
            case,
            classify_princ(p, order, e.genus, e.prank, true)?,
        ));
    }

    // Extremality sweep: 200 (p, |S|, g) triples in windows around the
    // catalog genera; the identity p(g−1) = (p−2)|S| should hold at exactly
    // the six catalog/family points inside the windows.
    let anchor_grid = "extremality-sweep";
    let windows: [(u64, u64, u64); 10] = [
        (3, 9, 2),
        (3, 27, 2),
        (3, 81, 21),
        (3, 243, 73),
        (3, 729, 235),
        (5, 125, 67),
        (5, 25, 17),
        (5, 625, 2),
        (7, 49, 2),
        (7, 343, 2),
    ];
    let mut total = 0u64;
    let mut hits = Vec::new();
    for (p, s, g0) in windows {
        for g in g0..g0 + 20 {
            total += 1;
            if extremal_check(p, s, g)? {
                hits.push(format!("({}, {}, {})", p, s, g));
            }
        }
    }
    steps.push(claim(
        "extremal-grid",
        anchor_grid,
        Provenance::Derived,
        "200 triples; extremal exactly at (3, 9, 4), (3, 27, 10), (3, 81, 28), \
         (3, 243, 82), (3, 729, 244), (5, 125, 76)",
        format!("{} triples; extremal at {}", total, hits.join(", ")),
        total == 200
            && hits
                == [
                    "(3, 9, 4)",
                    "(3, 27, 10)",
                    "(3, 81, 28)",
                    "(3, 243, 82)",
                    "(3, 729, 244)",
                    "(5, 125, 76)",
                ],
    ));

    // Classification grid at p = 3: all orders 3..3⁵ against genera 2..30
    // with γ = g and a fixed place.
    let mut tally: BTreeMap<String, u64> = BTreeMap::new();
    let mut case_cells: Vec<String> = Vec::new();
    for e in 1..=5u32 {
        let s =  3u64.pow(e);
        for g in 2..=30u64 {
            let case = classify_princ(3, s, g, g, true)?;
            *tally.entry(case.to_string()).or_insert(0) += 1;
            if matches!(case, PrincipalCase::CaseII | PrincipalCase::CaseIII) {
                case_cells.push(format!("{} at ({}, {})", case, s, g));
            }
        }
    }
    let tally_str: Vec<String> = ["contradiction", "hypothesis-fails", "i", "ii", "iii"]
        .iter()
        .map(|k| format!("{}: {}", k, tally.get(*k).copied().unwrap_or(0)))
        .collect();
    steps.push(equals(
        "classify-grid-counts",
        anchor_grid,
        Provenance::Derived,
        "contradiction: 73, hypothesis-fails: 68, i: 0, ii: 1, iii: 3".to_string(),
        tally_str.join(", "),
    ));
    steps.push(equals(
        "classify-grid-cells",
        anchor_grid,
        Provenance::Derived,
        "ii at (3, 2), iii at (9, 4), iii at (27, 10), iii at (81, 28)".to_string(),
        case_cells.join(", "),
    ));
    Ok(steps)
}

// ---------------------------------------------------------------------------
// S6: reference p-groups — presentations, censuses, maximal subgroups, and
// the exponent rules that separate realizable groups from excluded ones.

fn s6_groups() -> Result<Vec<Step>, ScenarioError> {
    let mut steps = Vec::new();

    let anchor_ut = "heisenberg-invariants";
    let u = ut3(3);
    let fp_ut = fingerprint(&u);
    steps.push(claim(
        "ut33-invariants",
        anchor_ut,
        Provenance::Stated,
        "order 27, exponent 3, class 2, |Z| = |S′| = 3, d = 2",
        format!(
            "order {}, exponent {}, class {:?}, |Z| = {}, |S′| = {}, d = {:?}",
            fp_ut.order,
            fp_ut.exponent,
            fp_ut.nilpotency_class,
            fp_ut.center_order,
            fp_ut.derived_order,
            fp_ut.d
        ),
        fp_ut.order == 27
            && fp_ut.exponent == 3
            && fp_ut.nilpotency_class == Some(2)
            && fp_ut.center_order == 3
            && fp_ut.derived_order == 3
            && fp_ut.d == Some(2),
    ));

    // Frattini structure of the five reference groups.
    let anchor_phi = "frattini-structure";
    let phi_cases: [(&str, FiniteGroup, &str); 5] = [
        ("ut33", ut3(3), "C3"),
        ("ut35", ut3(5), "C5"),
        ("wreath", wreath_c3(), "C3xC3"),
        ("s81-8", s81(8), "C3xC3"),
        ("s81-9", s81(9), "C3xC3"),
    ];
    for (label, g, want) in &phi_cases {
        let phi = g.frattini()?;
        let phi_group = g.subgroup(&phi)?;
        steps.push(equals(
            &format!("phi-structure-{}", label),
            anchor_phi,
            Provenance::Derived,
            (*want).to_string(),
            identify(&phi_group),
        ));
    }

    // Maximal-subgroup panoramas for the order-81 candidates.
    let anchor_max = "order-81-maximal-subgroups";
    let max_cases: [(&str, FiniteGroup, &str); 3] = [
        ("wreath", wreath_c3(), "C3xC3xC3, C9:C3, C9:C3, UT(3,3)"),
        ("s81-9", s81(9), "C9xC3, UT(3,3), UT(3,3), UT(3,3)"),
        ("s81-8", s81(8), "C9:C3, C9:C3, C9xC3, UT(3,3)"),
    ];
    let mut order3_census = BTreeMap::new();
    for (label, g, want) in &max_cases {
        let maxes = maximal_subgroups(g)?;
        let mut labels: Vec<String> = maxes.iter().map(identify).collect();
        labels.sort();
        steps.push(equals(
            &format!("maximal-structure-{}", label),
            anchor_max,
            if *label == "s81-8" {
                Provenance::Derived
            } else {
                Provenance::Stated
            },
            (*want).to_string(),
            labels.join(", "),
        ));
        let fp = fingerprint(g);
        order3_census.insert(
            label.to_string(),
            (
                fp.order_census.get(&3).copied().unwrap_or(0),
                maxes
                    .iter()
                    .filter(|m| fingerprint(m).exponent == 3)
                    .count() as u64,
                maxes.len() as u64,
            ),
        );
    }

    // Element-order censuses; the order-3 counts are the printed ones.
    let anchor_census = "order-3-censuses";
    for (label, want, prov) in [
        ("s81-9", 62u64, Provenance::Stated),
        ("s81-8", 26, Provenance::Stated),
        ("wreath", 44, Provenance::Derived),
    ] {
        steps.push(equals(
            &format!("order-census-{}", label),
            anchor_census,
            prov,
            want,
            order3_census[label].0,
        ));
    }

    // The census formula: a group of order 3⁴ and exponent 9 with k maximal
    // subgroups of exponent 9 has (4−k)·18 + 8 elements of order 3.
    steps.push(equals(
        "census-formula-values",
        anchor_census,
        Provenance::Stated,
        "k = 0..4 → 80, 62, 44, 26, 8".to_string(),
        format!(
            "k = 0..4 → {}",
            (0..=4u64)
                .map(|k| order_p_count_by_maximals(3, k).to_string())
                .collect::<Vec<_>>()
                .join(", ")
        ),
    ));
    for label in ["wreath", "s81-9", "s81-8"] {
        let (observed, exp3_max, total_max) = order3_census[label];
        let k = total_max - exp3_max;
        steps.push(claim(
            &format!("census-crosscheck-{}", label),
            anchor_census,
            Provenance::Derived,
            format!("census formula at k = {} matches the enumeration", k),
            format!(
                "k = {} → {}, enumerated {}",
                k,
                order_p_count_by_maximals(3, k),
                observed
            ),
            order_p_count_by_maximals(3, k) == observed,
        ));
    }

    // Exponent rules: realized groups of order ≤ pᵖ have exponent p; at
    // order pᵖ⁺¹ at least two maximal subgroups must have exponent p.
    let anchor_exp = "exponent-rules";
    let small = [
        ("C3xC3", fingerprint(&abelian(3, &[1, 1])).exponent, 3u64),
        ("UT(3,3)", fp_ut.exponent, 3),
        ("UT(3,5)", fingerprint(&ut3(5)).exponent, 5),
    ];
    steps.push(claim(
        "exponent-rule-small",
        anchor_exp,
        Provenance::Stated,
        "realized groups of order ≤ pᵖ have exponent p",
        small
            .iter()
            .map(|(l, e, _)| format!("{}: {}", l, e))
            .collect::<Vec<_>>()
            .join(", "),
        small.iter().all(|(_, e, want)| e == want),
    ));
    for (label, realized) in [("wreath", true), ("s81-9", true), ("s81-8", false)] {
        let (_, exp3_max, _) = order3_census[label];
        let (want, ok) = if realized {
            (
                "at least two maximal subgroups of exponent 3".to_string(),
                exp3_max >= 2,
            )
        } else {
            (
                "fewer than two maximal subgroups of exponent 3 (excluded from curve actions)"
                    .to_string(),
                exp3_max < 2,
            )
        };
        steps.push(claim(
            &format!("exponent-rule-81-{}", label),
            anchor_exp,
            Provenance::Stated,
            want,
            format!("{} maximal subgroup(s) of exponent 3", exp3_max),
            ok,
        ));
    }

    // All order-3 elements of the excluded candidate lie in its unique
    // exponent-3 maximal subgroup, which is the Heisenberg group. The
    // element sets keep the parent numbering, so membership is comparable.
    let s8 = s81(8);
    let exp3_sets: Vec<Vec<u32>> = maximal_subgroup_elements(&s8)?
        .into_iter()
        .filter(|elems| elems.iter().all(|&a| s8.element_order(a) <= 3))
        .collect();
    let (containment, label3) = match exp3_sets.as_slice() {
        [elems] => {
            let inside: std::collections::HashSet<u32> = elems.iter().copied().collect();
            let all_in = s8
                .elements()
                .filter(|&a| s8.element_order(a) == 3)
                .all(|a| inside.contains(&a));
            (all_in, identify(&s8.subgroup(elems)?))
        }
        _ => (false, "absent".to_string()),
    };
    steps.push(claim(
        "s81-8-order3-in-one-maximal",
        anchor_exp,
        Provenance::Stated,
        "all 26 order-3 elements lie in a single maximal subgroup ≅ UT(3,3)",
        format!(
            "{} exponent-3 maximal subgroup(s); containment {}; type {}",
            exp3_sets.len(),
            containment,
            label3
        ),
        containment && label3 == "UT(3,3)",
    ));

    // Nilpotency class of the order-81 groups is maximal (= 3).
    let classes: Vec<Option<u32>> = [wreath_c3(), s81(8), s81(9)]
        .iter()
        .map(|g| fingerprint(g).nilpotency_class)
        .collect();
    steps.push(claim(
        "maximal-class-81",
        anchor_exp,
        Provenance::Stated,
        "wreath, s81-8, s81-9 all have nilpotency class 3",
        format!("{:?}", classes),
        classes.iter().all(|c| *c == Some(3)),
    ));

    // Printed presentations of the two central order-81 candidates.
    let anchor_pres = "order-81-presentations";
    let images = [("a", "a"), ("b", "b"), ("c", "c")];
    for (label, which, third_relator) in
        [("s81-9", 9u8, "c a c^-1 = a b^-1"), ("s81-8", 8, "c a c^-1 = a b")]
    {
        let g = s81(which);
        let name_of = |wanted: &str| -> u32 {
            g.gen_names()
                .iter()
                .zip(g.gens())
                .find(|(n, _)| n.as_str() == wanted)
                .map(|(_, &i)| i)
                .expect("construction generator name")
        };
        let image_pairs: Vec<(&str, u32)> =
            images.iter().map(|(n, w)| (*n, name_of(w))).collect();
        let relators = ["a^9", "b^3", "c^3", "a b = b a", third_relator, "c b c^-1 = a^3 b"];
        let report = presentation_check(&g, &relators, &image_pairs)?;
        steps.push(claim(
            &format!("presentation-{}", label),
            anchor_pres,
            Provenance::Stated,
            "all six relators hold and the images generate",
            if report.holds() {
                "all relators hold; images generate".to_string()
            } else {
                format!("failing relators: {:?}", report.failed_relators)
            },
            report.holds(),
        ));
    }

    // Claims about groups this toolkit does not construct.
    let anchor_rec = "larger-groups-on-record";
    steps.push(recorded(
        "s81-10-note",
        anchor_rec,
        "the fourth order-81 candidate (C9⋊C3)⋊C3 has 8 order-3 elements, all inside an \
         elementary-abelian Frattini subgroup of order 9",
        "consistent with the census formula value at k = 4; group not constructed here",
    ));
    steps.push(recorded(
        "s243-26-note",
        anchor_rec,
        "genus-82 tower group of order 243: 170 order-3 elements; maximal subgroups \
         C9×C9 and three copies of the order-81 presentation group",
        "order-243 groups are not constructed here; the order-3⁴ census formula does not apply",
    ));
    steps.push(recorded(
        "s243-28-note",
        anchor_rec,
        "second order-243 candidate: 116 order-3 elements; maximal subgroups include \
         two copies of the order-81 presentation group",
        "order-243 groups are not constructed here",
    ));
    steps.push(recorded(
        "s243-numbering-note",
        anchor_rec,
        "the order-243 exclusion argument names one catalogue entry both as a candidate \
         and as excluded, and once refers to order 81 where 243 is meant",
        "editorial inconsistency in the source text; no computation can settle a naming clash",
    ));
    steps.push(recorded(
        "s729-34-note",
        anchor_rec,
        "the order-729 tower group has Frattini quotient data printed as C9 × C9 \
         with four generators",
        "group not constructed here; the printed automorphism-order equality is checked \
         (and fails) in S4-families",
    ));
    Ok(steps)
}

#[cfg(test)]
mod tests {
    use super::*;

    fn opts() -> RunOptions {
        RunOptions::default()
    }

    #[test]
    fn every_scenario_runs_without_failing_steps() {
        for name in SCENARIO_NAMES {
            if name == "S2-xc-p5" {
                continue; // covered separately; the p = 5 closure is the slowest build
            }
            let report = run_scenario(name, &opts()).unwrap();
            let failures: Vec<&str> = report
                .steps
                .iter()
                .filter(|s| s.status == Status::Fail)
                .map(|s| s.name.as_str())
                .collect();
            assert!(failures.is_empty(), "{}: failing steps {:?}", name, failures);
            assert!(report.passed());
        }
    }

    #[test]
    fn xc_p5_scenario_passes() {
        let report = run_scenario("S2-xc-p5", &opts()).unwrap();
        assert!(report.passed());
        assert_eq!(report.count(Status::Fail), 0);
    }

    #[test]
    fn s2_p3_has_no_discrepancies() {
        let report = run_scenario("S2-xc-p3", &opts()).unwrap();
        assert_eq!(report.count(Status::Discrepancy), 0);
        assert_eq!(report.count(Status::Fail), 0);
    }

    #[test]
    fn s3_surfaces_the_duplicate_generator() {
        let report = run_scenario("S3-genus28", &opts()).unwrap();
        let dup = report
            .steps
            .iter()
            .find(|s| s.name == "printed-generator-duplication")
            .unwrap();
        assert_eq!(dup.status, Status::Discrepancy);
        let closure = report
            .steps
            .iter()
            .find(|s| s.name == "closure-order")
            .unwrap();
        assert!(matches!(closure.status, Status::Pass | Status::Discrepancy));
    }

    #[test]
    fn s4_surfaces_the_aut_order_misprint() {
        let report = run_scenario("S4-families", &opts()).unwrap();
        let eq = report
            .steps
            .iter()
            .find(|s| s.name == "phi-aut-equality-claim")
            .unwrap();
        assert_eq!(eq.status, Status::Discrepancy);
        let if_ab = report
            .steps
            .iter()
            .find(|s| s.name == "phi-aut-if-c9xc9")
            .unwrap();
        assert_eq!(if_ab.status, Status::Discrepancy);
        assert!(report.passed(), "discrepancies must not fail the report");
    }

    #[test]
    fn unknown_scenario_is_rejected() {
        let err = run_scenario("S9-unknown", &opts()).unwrap_err();
        assert!(matches!(err, ScenarioError::UnknownScenario(_)));
    }

    #[test]
    fn run_all_is_sorted_and_complete() {
        let reports = run_all(&opts(), 4).unwrap();
        assert_eq!(reports.len(), SCENARIO_NAMES.len());
        let names: Vec<&str> = reports.iter().map(|r| r.scenario.as_str()).collect();
        let mut sorted = names.clone();
        sorted.sort();
        assert_eq!(names, sorted);
    }

    #[test]
    fn job_count_does_not_change_the_reports() {
        let seq = run_all(&opts(), 1).unwrap();
        let par = run_all(&opts(), 3).unwrap();
        assert_eq!(
            crate::report::reports_to_json(&seq),
            crate::report::reports_to_json(&par)
        );
    }
}

