//! JSON input formats: tower/map definition files, group definition files,
//! and cover-data files, together with the builders that turn them into
//! live towers, verified maps, and closed groups.
//!
//! A tower file lists AS relations in definition order; relation i defines
//! generator `t_i` through t_i^p − t_i = φ_i, and its expression may
//! mention only `x`, earlier generators, and named constants. An optional
//! `vars` list gives readable aliases (`y`, `z`, …) for `t1..tm`. The
//! constants `c` and `a` default to 1 and `omega` to the least primitive
//! root of the constant field; explicit `params` entries override them.
//!
//! Group files are a tagged union: `maps` (a tower file whose maps
//! generate the group), `permutations` (0-based cycle strings, composed
//! left to right), `matrices` (row-major entries mod p), or
//! `presentation` (relators checked against a named reference
//! construction).

use std::collections::{BTreeMap, HashMap, HashSet};
use std::path::Path;

use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::field::{FieldError, Fq};
use crate::group::constructions::by_label;
use crate::group::words::{eval_word, parse_relator, presentation_check, PresentationReport};
use crate::group::{closure_of_maps, FiniteGroup, GroupError, Origin};
use crate::ramify::CoverData;
use crate::tower::auto::FieldAuto;
use crate::tower::expr::{eval_expr, eval_str, idents, parse_expr, ExprError};
use crate::tower::{Tower, TowerElem, TowerError};

/// Element cap for group closures driven by input files; every group in
/// scope has order ≤ 3^6 = 729, so this is pure runaway protection.
pub const DEFAULT_CLOSURE_CAP: usize = 4096;

#[derive(Debug, Error)]
pub enum InputError {
    #[error("cannot read {path}: {source}")]
    Io {
        path: String,
        #[source]
        source: std::io::Error,
    },
    #[error("invalid JSON in {path}: {source}")]
    Json {
        path: String,
        #[source]
        source: serde_json::Error,
    },
    #[error(transparent)]
    Field(#[from] FieldError),
    #[error("relation {index}: {source}")]
    RelationExpr {
        index: usize,
        #[source]
        source: ExprError,
    },
    #[error("relation {index}: {source}")]
    Relation {
        index: usize,
        #[source]
        source: TowerError,
    },
    #[error("relation {index} references generator '{ident}', which is not defined until level {level}")]
    NonTriangular {
        index: usize,
        ident: String,
        level: usize,
    },
    #[error("map '{name}': {source}")]
    MapExpr {
        name: String,
        #[source]
        source: ExprError,
    },
    #[error("map '{name}': {source}")]
    Map {
        name: String,
        #[source]
        source: TowerError,
    },
    #[error("map '{name}' gives {got} generator images but the tower has {want} generators")]
    MapArity { name: String, got: usize, want: usize },
    #[error("map '{name}' fails its defining relation at level {relation}")]
    UnverifiedMap { name: String, relation: usize },
    #[error("group definition lists no generators")]
    NoGenerators,
    #[error("bad cycle notation: {0}")]
    BadCycles(String),
    #[error("bad matrix: {0}")]
    BadMatrix(String),
    #[error("duplicate or reserved name '{0}'")]
    DuplicateName(String),
    #[error("unknown realization '{0}'")]
    UnknownRealization(String),
    #[error(transparent)]
    Group(#[from] GroupError),
    #[error("invalid declaration: {0}")]
    BadSpec(String),
}

/// One named substitution map: images for `x` and for every generator, in
/// the expression grammar.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct MapSpec {
    pub name: String,
    pub image_x: String,
    pub image_t: Vec<String>,
}

/// Text form of a tower and its candidate automorphisms.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct TowerFileSpec {
    pub p: u64,
    pub k: u32,
    #[serde(default)]
    pub params: BTreeMap<String, i64>,
    /// Optional aliases for t1..tm, one per relation.
    #[serde(default)]
    pub vars: Vec<String>,
    pub relations: Vec<String>,
    #[serde(default)]
    pub maps: Vec<MapSpec>,
}

/// A map that failed verification: which relation broke first.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct MapFailure {
    pub name: String,
    pub relation: usize,
}

/// A fully built tower: the field, a name → element scope for further
/// expression evaluation, the maps that verified, and the ones that
/// did not.
pub struct BuiltTower {
    pub tower: Tower,
    pub scope: HashMap<String, TowerElem>,
    pub maps: Vec<FieldAuto>,
    pub map_failures: Vec<MapFailure>,
}

impl BuiltTower {
    /// The verified map with the given name, if any.
    pub fn map(&self, name: &str) -> Option<&FieldAuto> {
        self.maps.iter().find(|m| m.name() == name)
    }
}

impl std::fmt::Debug for BuiltTower {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        f.debug_struct("BuiltTower")
            .field("levels", &self.tower.levels())
            .field(
                "maps",
                &self.maps.iter().map(|m| m.name()).collect::<Vec<_>>(),
            )
            .field("map_failures", &self.map_failures)
            .finish()
    }
}

fn canonical_gen_index(name: &str) -> Option<usize> {
    let rest = name.strip_prefix('t')?;
    if rest.is_empty() || !rest.bytes().all(|b| b.is_ascii_digit()) {
        return None;
    }
    rest.parse().ok().filter(|&i| i >= 1)
}

fn check_names(spec: &TowerFileSpec) -> Result<(), InputError> {
    let mut seen: HashSet<&str> = HashSet::new();
    seen.insert("x");
    for alias in &spec.vars {
        if canonical_gen_index(alias).is_some() || !seen.insert(alias) {
            return Err(InputError::DuplicateName(alias.clone()));
        }
    }
    for name in spec.params.keys() {
        if canonical_gen_index(name).is_some() || !seen.insert(name) {
            return Err(InputError::DuplicateName(name.clone()));
        }
    }
    if !spec.vars.is_empty() && spec.vars.len() != spec.relations.len() {
        return Err(InputError::BadSpec(format!(
            "vars lists {} names for {} relations",
            spec.vars.len(),
            spec.relations.len()
        )));
    }
    Ok(())
}

/// Generator index (1-based) for a canonical name or declared alias.
fn gen_index(spec: &TowerFileSpec, name: &str) -> Option<usize> {
    canonical_gen_index(name)
        .filter(|&i| i <= spec.relations.len())
        .or_else(|| spec.vars.iter().position(|a| a == name).map(|i| i + 1))
}

/// Name → element scope at the current depth of `tower`: `x`, the
/// canonical and aliased generators, and the constants.
fn scope_at(spec: &TowerFileSpec, tower: &Tower) -> HashMap<String, TowerElem> {
    let mut scope = HashMap::new();
    scope.insert("x".to_string(), tower.x());
    for j in 1..=tower.levels() {
        let g = tower.gen(j);
        scope.insert(format!("t{}", j), g.clone());
        if let Some(alias) = spec.vars.get(j - 1) {
            scope.insert(alias.clone(), g);
        }
    }
    for (name, &value) in &spec.params {
        scope.insert(name.clone(), tower.from_int(value));
    }
    for default in ["c", "a"] {
        scope
            .entry(default.to_string())
            .or_insert_with(|| tower.one());
    }
    scope
        .entry("omega".to_string())
        .or_insert_with(|| tower.constant(&tower.fq().primitive_root()));
    scope
}

/// Build the tower and its maps from a file spec. Map verification
/// failures are collected, not fatal: the caller decides whether a failed
/// map is an error or a reportable outcome.
pub fn build_tower(spec: &TowerFileSpec) -> Result<BuiltTower, InputError> {
    check_names(spec)?;
    let fq = Fq::new(spec.p, spec.k)?;
    let mut tower = Tower::base(&fq);
    for (i, relation) in spec.relations.iter().enumerate() {
        let index = i + 1;
        let expr = parse_expr(relation)
            .map_err(|source| InputError::RelationExpr { index, source })?;
        for ident in idents(&expr) {
            if let Some(level) = gen_index(spec, ident) {
                if level >= index {
                    return Err(InputError::NonTriangular {
                        index,
                        ident: ident.to_string(),
                        level,
                    });
                }
            }
        }
        let scope = scope_at(spec, &tower);
        let phi = eval_expr(&expr, &tower, &scope)
            .map_err(|source| InputError::RelationExpr { index, source })?;
        tower = tower
            .extend(&phi)
            .map_err(|source| InputError::Relation { index, source })?;
    }

    let scope = scope_at(spec, &tower);
    let mut maps = Vec::new();
    let mut map_failures = Vec::new();
    let mut seen: HashSet<&str> = HashSet::new();
    for mspec in &spec.maps {
        if !seen.insert(&mspec.name) {
            return Err(InputError::DuplicateName(mspec.name.clone()));
        }
        if mspec.image_t.len() != tower.levels() {
            return Err(InputError::MapArity {
                name: mspec.name.clone(),
                got: mspec.image_t.len(),
                want: tower.levels(),
            });
        }
        let image_x = eval_str(&mspec.image_x, &tower, &scope).map_err(|source| {
            InputError::MapExpr { name: mspec.name.clone(), source }
        })?;
        let image_t = mspec
            .image_t
            .iter()
            .map(|src| eval_str(src, &tower, &scope))
            .collect::<Result<Vec<_>, _>>()
            .map_err(|source| InputError::MapExpr { name: mspec.name.clone(), source })?;
        let mut auto = FieldAuto::make(&mspec.name, &tower, image_x, image_t)
            .map_err(|source| InputError::Map { name: mspec.name.clone(), source })?;
        let failing = auto
            .verify()
            .map_err(|source| InputError::Map { name: mspec.name.clone(), source })?;
        if failing.is_empty() {
            maps.push(auto);
        } else {
            map_failures.push(MapFailure { name: mspec.name.clone(), relation: failing[0] });
        }
    }
    Ok(BuiltTower { tower, scope, maps, map_failures })
}

/// Close the verified maps of a tower spec into a finite group. Every
/// listed map must verify; an empty map list is an error.
pub fn group_from_tower_spec(
    spec: &TowerFileSpec,
    cap: usize,
) -> Result<(FiniteGroup, BuiltTower), InputError> {
    let built = build_tower(spec)?;
    if let Some(f) = built.map_failures.first() {
        return Err(InputError::UnverifiedMap {
            name: f.name.clone(),
            relation: f.relation,
        });
    }
    if built.maps.is_empty() {
        return Err(InputError::NoGenerators);
    }
    let closure = closure_of_maps(&built.maps, cap)?;
    Ok((closure.group, built))
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct NamedPerm {
    pub name: String,
    pub cycles: String,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct NamedMatrix {
    pub name: String,
    pub rows: Vec<Vec<u64>>,
}

/// Tagged group definition.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(tag = "type", rename_all = "kebab-case", deny_unknown_fields)]
pub enum GroupFileSpec {
    /// Closure of the verified maps of a tower file.
    Maps {
        tower: TowerFileSpec,
        #[serde(default)]
        cap: Option<usize>,
    },
    /// Closure of permutations of {0, …, degree−1} in cycle notation.
    Permutations {
        p: u64,
        degree: usize,
        gens: Vec<NamedPerm>,
        #[serde(default)]
        cap: Option<usize>,
    },
    /// Closure of dim×dim matrices over F_p.
    Matrices {
        p: u64,
        dim: usize,
        gens: Vec<NamedMatrix>,
        #[serde(default)]
        cap: Option<usize>,
    },
    /// Relators checked against a named reference construction, with each
    /// presentation generator sent to a word in the realization's
    /// generators.
    Presentation {
        realization: String,
        relators: Vec<String>,
        images: BTreeMap<String, String>,
    },
}

/// Result of building a group file.
pub enum BuiltGroup {
    Group(FiniteGroup),
    /// A presentation check: the realization and the verdict.
    Presentation {
        group: FiniteGroup,
        report: PresentationReport,
    },
}

impl BuiltGroup {
    pub fn group(&self) -> &FiniteGroup {
        match self {
            BuiltGroup::Group(g) => g,
            BuiltGroup::Presentation { group, .. } => group,
        }
    }
}

/// Parse cycle notation like `"(0 1 2)(3 4 5)"` into a permutation of
/// {0, …, degree−1}. Elements are 0-based; cycles are applied left to
/// right; an empty string is the identity.
pub fn parse_cycles(src: &str, degree: usize) -> Result<Vec<u32>, InputError> {
    let bad = |msg: String| InputError::BadCycles(msg);
    let mut perm: Vec<u32> = (0..degree as u32).collect();
    let mut it = src.chars().peekable();
    loop {
        while matches!(it.peek(), Some(c) if c.is_whitespace()) {
            it.next();
        }
        match it.next() {
            None => return Ok(perm),
            Some('(') => {}
            Some(other) => return Err(bad(format!("expected '(', found '{}'", other))),
        }
        let mut cycle: Vec<u32> = Vec::new();
        loop {
            while matches!(it.peek(), Some(c) if c.is_whitespace() || *c == ',') {
                it.next();
            }
            if matches!(it.peek(), Some(')')) {
                it.next();
                break;
            }
            let mut n: u32 = 0;
            let mut any = false;
            while let Some(d) = it.peek().and_then(|c| c.to_digit(10)) {
                n = n
                    .checked_mul(10)
                    .and_then(|n| n.checked_add(d))
                    .ok_or_else(|| bad("cycle entry overflows".to_string()))?;
                it.next();
                any = true;
            }
            if !any {
                return Err(bad(format!("unexpected character {:?}", it.peek())));
            }
            if n as usize >= degree {
                return Err(bad(format!("entry {} exceeds degree {}", n, degree)));
            }
            if cycle.contains(&n) {
                return Err(bad(format!("entry {} repeats within a cycle", n)));
            }
            cycle.push(n);
        }
        if cycle.is_empty() {
            return Err(bad("empty cycle".to_string()));
        }
        // Fold this cycle onto the permutation built so far (left to right:
        // the existing permutation acts first).
        let mut step: Vec<u32> = (0..degree as u32).collect();
        for w in 0..cycle.len() {
            step[cycle[w] as usize] = cycle[(w + 1) % cycle.len()];
        }
        for entry in perm.iter_mut() {
            *entry = step[*entry as usize];
        }
    }
}

fn close_named<T: Clone + Eq + std::hash::Hash>(
    p: u64,
    named: Vec<(String, T)>,
    identity: T,
    op: impl Fn(&T, &T) -> T,
    cap: usize,
    origin: Origin,
) -> Result<FiniteGroup, InputError> {
    if named.is_empty() {
        return Err(InputError::NoGenerators);
    }
    let closure = FiniteGroup::closure(p, &named, identity, op, cap)?;
    Ok(closure.group.with_origin(origin))
}

/// Build a finite group from a group definition.
pub fn build_group(spec: &GroupFileSpec) -> Result<BuiltGroup, InputError> {
    match spec {
        GroupFileSpec::Maps { tower, cap } => {
            let (group, _) =
                group_from_tower_spec(tower, cap.unwrap_or(DEFAULT_CLOSURE_CAP))?;
            Ok(BuiltGroup::Group(group))
        }
        GroupFileSpec::Permutations { p, degree, gens, cap } => {
            let named = gens
                .iter()
                .map(|g| Ok((g.name.clone(), parse_cycles(&g.cycles, *degree)?)))
                .collect::<Result<Vec<_>, InputError>>()?;
            let identity: Vec<u32> = (0..*degree as u32).collect();
            let group = close_named(
                *p,
                named,
                identity,
                |a, b| a.iter().map(|&i| b[i as usize]).collect(),
                cap.unwrap_or(DEFAULT_CLOSURE_CAP),
                Origin::FromPermutations,
            )?;
            Ok(BuiltGroup::Group(group))
        }
        GroupFileSpec::Matrices { p, dim, gens, cap } => {
            if *dim == 0 || *p < 2 {
                return Err(InputError::BadMatrix("need dim ≥ 1 and p ≥ 2".to_string()));
            }
            let d = *dim;
            let modulus = *p;
            let named = gens
                .iter()
                .map(|g| {
                    if g.rows.len() != d || g.rows.iter().any(|r| r.len() != d) {
                        return Err(InputError::BadMatrix(format!(
                            "matrix '{}' is not {}×{}",
                            g.name, d, d
                        )));
                    }
                    let flat: Vec<u64> = g.rows.iter().flatten().map(|&e| e % modulus).collect();
                    Ok((g.name.clone(), flat))
                })
                .collect::<Result<Vec<_>, InputError>>()?;
            let mut identity = vec![0u64; d * d];
            for i in 0..d {
                identity[i * d + i] = 1;
            }
            let group = close_named(
                *p,
                named,
                identity,
                |a, b| {
                    let mut out = vec![0u64; d * d];
                    for i in 0..d {
                        for k in 0..d {
                            let aik = a[i * d + k];
                            if aik == 0 {
                                continue;
                            }
                            for j in 0..d {
                                out[i * d + j] =
                                    (out[i * d + j] + aik * b[k * d + j]) % modulus;
                            }
                        }
                    }
                    out
                },
                cap.unwrap_or(DEFAULT_CLOSURE_CAP),
                Origin::FromConstruction,
            )?;
            Ok(BuiltGroup::Group(group))
        }
        GroupFileSpec::Presentation { realization, relators, images } => {
            let group = by_label(realization)
                .map_err(|_| InputError::UnknownRealization(realization.clone()))?;
            let env: HashMap<String, u32> = group
                .gen_names()
                .iter()
                .cloned()
                .zip(group.gens().iter().copied())
                .collect();
            let resolved = images
                .iter()
                .map(|(name, word_src)| {
                    let word = parse_relator(word_src)?;
                    let elem = eval_word(&group, &word, &env)?;
                    Ok((name.clone(), elem))
                })
                .collect::<Result<Vec<_>, GroupError>>()?;
            let image_refs: Vec<(&str, u32)> =
                resolved.iter().map(|(n, e)| (n.as_str(), *e)).collect();
            let relator_refs: Vec<&str> = relators.iter().map(String::as_str).collect();
            let report = presentation_check(&group, &relator_refs, &image_refs)?;
            Ok(BuiltGroup::Presentation { group, report })
        }
    }
}

/// Read and deserialize one JSON file, wrapping IO and syntax errors
/// with the offending path.
pub fn read_json_file<T: serde::de::DeserializeOwned>(path: &Path) -> Result<T, InputError> {
    let text = std::fs::read_to_string(path).map_err(|source| InputError::Io {
        path: path.display().to_string(),
        source,
    })?;
    serde_json::from_str(&text).map_err(|source| InputError::Json {
        path: path.display().to_string(),
        source,
    })
}

pub fn read_tower_file(path: &Path) -> Result<TowerFileSpec, InputError> {
    read_json_file(path)
}

pub fn read_group_file(path: &Path) -> Result<GroupFileSpec, InputError> {
    read_json_file(path)
}

pub fn read_cover_file(path: &Path) -> Result<CoverData, InputError> {
    let cover: CoverData = read_json_file(path)?;
    cover
        .validate()
        .map_err(|e| InputError::BadSpec(e.to_string()))?;
    Ok(cover)
}
