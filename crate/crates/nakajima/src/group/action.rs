//! Action of tower maps on affine rational points. A point is a coordinate
//! vector (x₀, t₁, …, t_m) over the coefficient field satisfying every
//! defining relation ℘(tᵢ) = φᵢ; applying a map evaluates its generator
//! images at the point (a right action, which is all that fixed-point
//! counting needs). A subgroup is semiregular on the set exactly when every
//! non-identity element is fixed-point-free.

use crate::field::FqElem;
use crate::tower::{FieldAuto, Tower, TowerError};

/// Enumerate all affine points of the tower over its coefficient field, in
/// lexicographic coordinate order. Base values where some φᵢ has a pole
/// contribute no points (the place is ramified or at infinity there).
pub fn affine_points(tower: &Tower) -> Vec<Vec<FqElem>> {
    let fq = tower.fq().clone();
    let m = tower.levels();
    let all: Vec<FqElem> = fq.elements().collect();
    let mut out = Vec::new();
    let mut coords: Vec<FqElem> = vec![fq.zero(); m + 1];

    fn rec(
        tower: &Tower,
        all: &[FqElem],
        level: usize,
        coords: &mut Vec<FqElem>,
        out: &mut Vec<Vec<FqElem>>,
    ) {
        if level > tower.levels() {
            out.push(coords.clone());
            return;
        }
        // φ_level only involves coordinates below `level`, so the zero
        // padding above it cannot influence the evaluation.
        let Ok(target) = tower.phi(level).eval_at(coords) else {
            return; // pole under this base value: no affine points here
        };
        for t in all {
            let wp = t.pow(tower.p()).sub(t);
            if wp == target {
                coords[level] = t.clone();
                rec(tower, all, level + 1, coords, out);
            }
        }
        coords[level] = coords[0].field().zero();
    }

    for x0 in &all {
        coords[0] = x0.clone();
        if m == 0 {
            out.push(coords.clone());
        } else {
            rec(tower, &all, 1, &mut coords, &mut out);
        }
    }
    out
}

/// Apply a map to a point by evaluating its generator images there. Errors
/// when an image has a pole at the point, i.e. the image leaves the affine
/// chart.
pub fn apply_at_point(map: &FieldAuto, point: &[FqElem]) -> Result<Vec<FqElem>, TowerError> {
    let tower = map.tower();
    let mut out = Vec::with_capacity(tower.levels() + 1);
    out.push(map.image_x().eval_at(point)?);
    for i in 1..=tower.levels() {
        out.push(map.image_t(i).eval_at(point)?);
    }
    Ok(out)
}

/// Fixed-point counts of a list of maps on a point set.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct FixedPointReport {
    /// (map name, number of fixed points), in input order.
    pub per_map: Vec<(String, u64)>,
    /// True when every non-identity map in the list is fixed-point-free.
    pub semiregular: bool,
}

/// Count the fixed points of each map; a point whose image leaves the
/// affine chart is counted as moved.
pub fn semiregular_on(maps: &[FieldAuto], points: &[Vec<FqElem>]) -> FixedPointReport {
    let mut per_map = Vec::with_capacity(maps.len());
    let mut semiregular = true;
    for map in maps {
        let fixed = points
            .iter()
            .filter(|pt| {
                apply_at_point(map, pt)
                    .map(|q| q[..] == pt[..])
                    .unwrap_or(false)
            })
            .count() as u64;
        if fixed > 0 && !map.is_identity() {
            semiregular = false;
        }
        per_map.push((map.name().to_string(), fixed));
    }
    FixedPointReport { per_map, semiregular }
}

#[cfg(test)]
mod tests {
    use crate::field::Fq;
    use crate::tower::Tower;

    use super::*;

    /// (x³−x)(y³−y) = 1 over F₉, as the tower ℘(y) = 1/(x³−x).
    fn am_tower() -> Tower {
        let fq = Fq::new(3, 2).unwrap();
        let base = Tower::base(&fq);
        let xb = base.x();
        let phi = base.from_int(1).div(&xb.pow(3).sub(&xb)).unwrap();
        base.extend(&phi).unwrap()
    }

    fn verified(
        tower: &Tower,
        name: &str,
        ix: crate::tower::TowerElem,
        it: crate::tower::TowerElem,
    ) -> FieldAuto {
        let mut m = FieldAuto::make(name, tower, ix, vec![it]).unwrap();
        assert!(m.verify().unwrap().is_empty(), "{} must verify", name);
        m
    }

    #[test]
    fn affine_point_count_over_f9() {
        let tower = am_tower();
        let pts = affine_points(&tower);
        // ℘(x) ∈ {±i} (6 base values, the F₃ ones are poles), and each
        // admits 3 choices of y: 18 points.
        assert_eq!(pts.len(), 18);
        // All distinct and genuinely on the curve.
        for pt in &pts {
            let x = &pt[0];
            let y = &pt[1];
            let vx = x.pow(3).sub(x);
            let vy = y.pow(3).sub(y);
            assert!(vx.mul(&vy).is_one());
        }
    }

    #[test]
    fn translation_and_diagonal_maps_are_fixed_point_free() {
        let tower = am_tower();
        let pts = affine_points(&tower);
        let x = tower.x();
        let y = tower.gen(1);
        let omega = tower.from_int(2);
        let g = verified(&tower, "g", x.add(&tower.one()), y.clone());
        let t = verified(
            &tower,
            "t",
            x.mul(&omega),
            y.mul(&omega), // ω⁻¹ = ω = −1 in F₃
        );
        let id = FieldAuto::identity(&tower);
        let report = semiregular_on(&[id, g.clone(), t.clone()], &pts);
        assert_eq!(
            report.per_map,
            vec![
                ("id".to_string(), 18),
                ("g".to_string(), 0),
                ("t".to_string(), 0),
            ]
        );
        assert!(report.semiregular);
    }

    #[test]
    fn a_composite_with_fixed_points_breaks_semiregularity() {
        let tower = am_tower();
        let pts = affine_points(&tower);
        let x = tower.x();
        let y = tower.gen(1);
        let omega = tower.from_int(2);
        let r = verified(&tower, "r", y.clone(), x.clone());
        let t = verified(&tower, "t", x.mul(&omega), y.mul(&omega));
        // t∘r sends the point (x, y) to (ω⁻¹y, ωx); with ω = −1 it fixes
        // exactly the 6 points with y = −x, where ℘(x)·℘(−x) = −℘(x)² = 1.
        let tr = t.compose(&r).unwrap();
        let report = semiregular_on(&[tr], &pts);
        assert_eq!(report.per_map[0].1, 6);
        assert!(!report.semiregular);
        // r itself is free on this point set: x = y needs ℘(x)² = 1, but
        // ℘ only takes the values ±i here.
        let rep_r = semiregular_on(&[r], &pts);
        assert_eq!(rep_r.per_map[0].1, 0);
    }

    #[test]
    fn point_images_stay_on_the_curve_and_permute() {
        let tower = am_tower();
        let pts = affine_points(&tower);
        let x = tower.x();
        let y = tower.gen(1);
        let g = verified(&tower, "g", x.add(&tower.one()), y.clone());
        let mut images: Vec<Vec<FqElem>> = pts
            .iter()
            .map(|pt| apply_at_point(&g, pt).expect("translation is polynomial"))
            .collect();
        images.sort_by_key(|pt| pt.iter().map(|c| c.index()).collect::<Vec<_>>());
        let mut sorted = pts.clone();
        sorted.sort_by_key(|pt| pt.iter().map(|c| c.index()).collect::<Vec<_>>());
        assert_eq!(images, sorted);
    }

    #[test]
    fn base_only_towers_enumerate_the_affine_line() {
        let fq = Fq::new(5, 1).unwrap();
        let tower = Tower::base(&fq);
        assert_eq!(affine_points(&tower).len(), 5);
    }
}
