//! Dense univariate polynomials over F_{p^k}: ring arithmetic, Euclidean
//! division, gcd/xgcd, evaluation, derivatives, and deterministic complete
//! factorization into monic irreducibles (squarefree decomposition plus
//! Berlekamp splitting with an exhaustive constant sweep, so the factor order
//! is reproducible on every run).

use std::fmt;
use std::hash::{Hash, Hasher};

use super::fq::{FieldError, Fq, FqElem};

/// A polynomial over one `Fq`, little-endian coefficients, no trailing zeros.
#[derive(Clone)]
pub struct Poly {
    field: Fq,
    /// Packed element indices; empty means the zero polynomial.
    c: Vec<u64>,
}

impl Poly {
    pub fn zero(field: &Fq) -> Poly {
        Poly { field: field.clone(), c: Vec::new() }
    }

    pub fn one(field: &Fq) -> Poly {
        Poly { field: field.clone(), c: vec![1] }
    }

    /// The indeterminate x.
    pub fn x(field: &Fq) -> Poly {
        Poly { field: field.clone(), c: vec![0, 1] }
    }

    pub fn constant(e: &FqElem) -> Poly {
        let mut p = Poly { field: e.field().clone(), c: vec![e.index()] };
        p.trim();
        p
    }

    /// From little-endian element coefficients.
    pub fn from_elems(field: &Fq, coeffs: &[FqElem]) -> Poly {
        let mut p = Poly { field: field.clone(), c: coeffs.iter().map(|e| e.index()).collect() };
        p.trim();
        p
    }

    /// From little-endian integer coefficients (reduced into the prime field).
    pub fn from_ints(field: &Fq, coeffs: &[i64]) -> Poly {
        let mut p = Poly {
            field: field.clone(),
            c: coeffs.iter().map(|&n| field.from_int(n).index()).collect(),
        };
        p.trim();
        p
    }

    fn trim(&mut self) {
        while self.c.last() == Some(&0) {
            self.c.pop();
        }
    }

    pub fn field(&self) -> &Fq {
        &self.field
    }

    pub fn is_zero(&self) -> bool {
        self.c.is_empty()
    }

    pub fn is_one(&self) -> bool {
        self.c == [1]
    }

    /// Degree; the zero polynomial reports -1 via `None`.
    pub fn degree(&self) -> Option<usize> {
        if self.c.is_empty() {
            None
        } else {
            Some(self.c.len() - 1)
        }
    }

    pub fn deg_or_zero(&self) -> usize {
        self.degree().unwrap_or(0)
    }

    pub fn coeff(&self, i: usize) -> FqElem {
        self.field.from_index(self.c.get(i).copied().unwrap_or(0))
    }

    pub fn lead(&self) -> FqElem {
        self.field.from_index(self.c.last().copied().unwrap_or(0))
    }

    pub(crate) fn raw(&self) -> &[u64] {
        &self.c
    }

    pub fn is_monic(&self) -> bool {
        self.c.last() == Some(&1)
    }

    pub fn add(&self, other: &Poly) -> Poly {
        let r = self.field.repr();
        let n = self.c.len().max(other.c.len());
        let mut out = Vec::with_capacity(n);
        for i in 0..n {
            let a = self.c.get(i).copied().unwrap_or(0);
            let b = other.c.get(i).copied().unwrap_or(0);
            out.push(r.add_idx(a, b));
        }
        let mut p = Poly { field: self.field.clone(), c: out };
        p.trim();
        p
    }

    pub fn sub(&self, other: &Poly) -> Poly {
        self.add(&other.neg())
    }

    pub fn neg(&self) -> Poly {
        let r = self.field.repr();
        Poly { field: self.field.clone(), c: self.c.iter().map(|&a| r.neg_idx(a)).collect() }
    }

    pub fn mul(&self, other: &Poly) -> Poly {
        if self.is_zero() || other.is_zero() {
            return Poly::zero(&self.field);
        }
        let r = self.field.repr();
        let mut out = vec![0u64; self.c.len() + other.c.len() - 1];
        for (i, &a) in self.c.iter().enumerate() {
            if a == 0 {
                continue;
            }
            for (j, &b) in other.c.iter().enumerate() {
                out[i + j] = r.add_idx(out[i + j], r.mul_idx(a, b));
            }
        }
        let mut p = Poly { field: self.field.clone(), c: out };
        p.trim();
        p
    }

    pub fn scale(&self, s: &FqElem) -> Poly {
        let r = self.field.repr();
        let sv = s.index();
        let mut p = Poly {
            field: self.field.clone(),
            c: self.c.iter().map(|&a| r.mul_idx(a, sv)).collect(),
        };
        p.trim();
        p
    }

    /// Multiply by x^n.
    pub fn shift(&self, n: usize) -> Poly {
        if self.is_zero() {
            return self.clone();
        }
        let mut c = vec![0u64; n];
        c.extend_from_slice(&self.c);
        Poly { field: self.field.clone(), c }
    }

    pub fn pow(&self, mut e: u64) -> Poly {
        let mut acc = Poly::one(&self.field);
        let mut base = self.clone();
        while e > 0 {
            if e & 1 == 1 {
                acc = acc.mul(&base);
            }
            base = base.mul(&base);
            e >>= 1;
        }
        acc
    }

    /// Euclidean division: (quotient, remainder) with deg r < deg divisor.
    pub fn divrem(&self, divisor: &Poly) -> Result<(Poly, Poly), FieldError> {
        if divisor.is_zero() {
            return Err(FieldError::DivisionByZero(self.field.q()));
        }
        let r = self.field.repr();
        let dlead_inv = divisor.lead().inv()?.index();
        let dd = divisor.c.len() - 1;
        let mut rem = self.c.clone();
        if rem.len() <= dd {
            return Ok((Poly::zero(&self.field), self.clone()));
        }
        let mut quot = vec![0u64; rem.len() - dd];
        for i in (dd..rem.len()).rev() {
            let lead = rem[i];
            if lead == 0 {
                continue;
            }
            let qc = r.mul_idx(lead, dlead_inv);
            quot[i - dd] = qc;
            for (j, &dc) in divisor.c.iter().enumerate() {
                let t = r.mul_idx(qc, dc);
                rem[i - dd + j] = r.sub_idx(rem[i - dd + j], t);
            }
        }
        let mut q = Poly { field: self.field.clone(), c: quot };
        let mut rr = Poly { field: self.field.clone(), c: rem };
        q.trim();
        rr.trim();
        Ok((q, rr))
    }

    pub fn rem(&self, divisor: &Poly) -> Result<Poly, FieldError> {
        Ok(self.divrem(divisor)?.1)
    }

    /// Monic associate (zero stays zero).
    pub fn monic(&self) -> Poly {
        if self.is_zero() {
            return self.clone();
        }
        self.scale(&self.lead().inv().expect("nonzero lead"))
    }

    /// Monic gcd.
    pub fn gcd(&self, other: &Poly) -> Poly {
        let mut a = self.clone();
        let mut b = other.clone();
        while !b.is_zero() {
            let r = a.rem(&b).expect("nonzero divisor");
            a = b;
            b = r;
        }
        a.monic()
    }

    /// Extended gcd: returns (g, s, t) monic with s*self + t*other = g.
    pub fn xgcd(&self, other: &Poly) -> (Poly, Poly, Poly) {
        let mut r0 = self.clone();
        let mut r1 = other.clone();
        let mut s0 = Poly::one(&self.field);
        let mut s1 = Poly::zero(&self.field);
        let mut t0 = Poly::zero(&self.field);
        let mut t1 = Poly::one(&self.field);
        while !r1.is_zero() {
            let (q, r) = r0.divrem(&r1).expect("nonzero divisor");
            let s = s0.sub(&q.mul(&s1));
            let t = t0.sub(&q.mul(&t1));
            r0 = r1;
            r1 = r;
            s0 = s1;
            s1 = s;
            t0 = t1;
            t1 = t;
        }
        if r0.is_zero() {
            return (r0, s0, t0);
        }
        let lead_inv = r0.lead().inv().expect("nonzero lead");
        (r0.scale(&lead_inv), s0.scale(&lead_inv), t0.scale(&lead_inv))
    }

    pub fn eval(&self, at: &FqElem) -> FqElem {
        let r = self.field.repr();
        let x = at.index();
        let mut acc = 0u64;
        for &c in self.c.iter().rev() {
            acc = r.add_idx(r.mul_idx(acc, x), c);
        }
        self.field.from_index(acc)
    }

    pub fn derivative(&self) -> Poly {
        if self.c.len() <= 1 {
            return Poly::zero(&self.field);
        }
        let r = self.field.repr();
        let p = self.field.p();
        let mut out = Vec::with_capacity(self.c.len() - 1);
        for (i, &c) in self.c.iter().enumerate().skip(1) {
            let m = (i as u64) % p;
            let mut acc = 0u64;
            for _ in 0..m {
                acc = r.add_idx(acc, c);
            }
            out.push(acc);
        }
        let mut d = Poly { field: self.field.clone(), c: out };
        d.trim();
        d
    }

    /// self^e mod m (m nonzero).
    pub fn powmod(&self, mut e: u64, m: &Poly) -> Result<Poly, FieldError> {
        let mut base = self.rem(m)?;
        let mut acc = Poly::one(&self.field).rem(m)?;
        while e > 0 {
            if e & 1 == 1 {
                acc = acc.mul(&base).rem(m)?;
            }
            base = base.mul(&base).rem(m)?;
            e >>= 1;
        }
        Ok(acc)
    }

    /// Multiplicity of the monic irreducible `pi` in self (self nonzero).
    pub fn multiplicity(&self, pi: &Poly) -> u32 {
        assert!(!self.is_zero(), "multiplicity of the zero polynomial");
        let mut f = self.clone();
        let mut m = 0;
        loop {
            let (q, r) = f.divrem(pi).expect("nonzero divisor");
            if !r.is_zero() {
                return m;
            }
            m += 1;
            f = q;
        }
    }

    /// Exact p-th root of a polynomial all of whose terms have exponents
    /// divisible by p (i.e. f = g^p); coefficientwise p-th roots.
    fn pth_root_poly(&self) -> Poly {
        let p = self.field.p() as usize;
        let mut out = Vec::new();
        for (i, &c) in self.c.iter().enumerate() {
            if i % p == 0 {
                out.push(self.field.from_index(c).pth_root().index());
            } else {
                debug_assert_eq!(c, 0, "pth_root_poly on a non-p-power polynomial");
            }
        }
        let mut r = Poly { field: self.field.clone(), c: out };
        r.trim();
        r
    }

    /// Complete factorization into monic irreducibles with multiplicities,
    /// sorted by (degree, coefficient tuple) for deterministic output.
    /// The leading coefficient is returned separately.
    pub fn factor(&self) -> (FqElem, Vec<(Poly, u32)>) {
        assert!(!self.is_zero(), "factoring the zero polynomial");
        let lead = self.lead();
        let f = self.monic();
        let mut factors: Vec<(Poly, u32)> = Vec::new();
        squarefree_decompose(&f, 1, &mut factors);
        let mut out: Vec<(Poly, u32)> = Vec::new();
        for (g, mult) in factors {
            for irr in berlekamp_split(&g) {
                match out.iter_mut().find(|(q, _)| q == &irr) {
                    Some((_, m)) => *m += mult,
                    None => out.push((irr, mult)),
                }
            }
        }
        out.sort_by(|a, b| {
            a.0.c.len().cmp(&b.0.c.len()).then_with(|| {
                a.0.c.iter().rev().collect::<Vec<_>>().cmp(&b.0.c.iter().rev().collect::<Vec<_>>())
            })
        });
        (lead, out)
    }

    /// Deterministic irreducibility test (monic input not required).
    pub fn is_irreducible(&self) -> bool {
        match self.degree() {
            None | Some(0) => false,
            Some(1) => true,
            Some(_) => {
                let (_, factors) = self.factor();
                factors.len() == 1 && factors[0].1 == 1
            }
        }
    }
}

/// Collect the squarefree parts of monic f: pushes (squarefree, multiplicity)
/// pairs; parts need not be irreducible yet.
fn squarefree_decompose(f: &Poly, outer_mult: u32, out: &mut Vec<(Poly, u32)>) {
    if f.is_one() {
        return;
    }
    let d = f.derivative();
    if d.is_zero() {
        // f = g^p exactly; recurse on the p-th root.
        let root = f.pth_root_poly();
        squarefree_decompose(&root, outer_mult * f.field().p() as u32, out);
        return;
    }
    let g = f.gcd(&d);
    // w holds the squarefree product of factors; pull each multiplicity off.
    let mut w = f.divrem(&g).expect("gcd divides").0;
    let mut rest = g;
    let mut mult = 1u32;
    while !w.is_one() {
        let y = w.gcd(&rest);
        let fac = w.divrem(&y).expect("gcd divides").0;
        if !fac.is_one() {
            out.push((fac.clone(), outer_mult * mult));
        }
        if !y.is_one() {
            rest = rest.divrem(&y).expect("gcd divides").0;
        }
        w = y;
        mult += 1;
    }
    if !rest.is_one() {
        squarefree_decompose(&rest, outer_mult, out);
    }
}

/// Berlekamp factorization of a monic squarefree polynomial into monic
/// irreducibles. Splitting constants are swept in element-index order, so the
/// algorithm is fully deterministic.
fn berlekamp_split(f: &Poly) -> Vec<Poly> {
    let deg = match f.degree() {
        None | Some(0) => return Vec::new(),
        Some(1) => return vec![f.clone()],
        Some(d) => d,
    };
    let field = f.field().clone();
    let q = field.q();
    // Build the Berlekamp matrix Q - I where row i is x^{qi} mod f.
    let xq = Poly::x(&field).powmod(q, f).expect("modulus nonzero");
    let mut rows: Vec<Vec<u64>> = Vec::with_capacity(deg);
    let mut cur = Poly::one(&field);
    for i in 0..deg {
        let mut row: Vec<u64> = (0..deg).map(|j| cur.coeff(j).index()).collect();
        let r = field.repr();
        row[i] = r.sub_idx(row[i], 1);
        rows.push(row);
        cur = cur.mul(&xq).rem(f).expect("modulus nonzero");
    }
    // Null space basis of the deg x deg matrix (row vectors v with vM = 0
    // where M is (Q - I)^T; equivalently kernel of the transpose).
    let basis = null_space(&field, rows, deg);
    if basis.len() == 1 {
        return vec![f.clone()];
    }
    // Split with gcd(f, v - c) sweeps; the subalgebra separates every pair of
    // irreducible factors, so sweeping all basis vectors splits completely.
    let mut factors = vec![f.clone()];
    for v in &basis {
        if factors.len() == basis.len() {
            break;
        }
        let mut vp = Poly { field: field.clone(), c: v.clone() };
        vp.trim();
        let mut next: Vec<Poly> = Vec::new();
        for g in factors {
            if g.degree() == Some(1) {
                next.push(g);
                continue;
            }
            let mut remaining = g;
            for cidx in 0..q {
                if remaining.is_one() {
                    break;
                }
                let c = field.from_index(cidx);
                let shifted = vp.sub(&Poly::constant(&c));
                let h = remaining.gcd(&shifted);
                if !h.is_one() && h.degree() < remaining.degree() {
                    remaining = remaining.divrem(&h).expect("gcd divides").0;
                    next.push(h);
                }
            }
            if !remaining.is_one() {
                next.push(remaining);
            }
        }
        factors = next;
    }
    factors
}

/// Row-reduce and return a basis of the left null space of the matrix
/// (vectors v with v * rows = 0). `rows` is a square matrix given by rows.
fn null_space(field: &Fq, mat: Vec<Vec<u64>>, n: usize) -> Vec<Vec<u64>> {
    let r = field.repr();
    // Transpose so we solve M^T v^T = 0 by column elimination on mat.
    let mut m: Vec<Vec<u64>> = (0..n).map(|i| (0..n).map(|j| mat[j][i]).collect()).collect();
    let mut pivot_col_of_row: Vec<Option<usize>> = vec![None; n];
    let mut used_cols = vec![false; n];
    for row in 0..n {
        let piv = (0..n).find(|&c| !used_cols[c] && m[row][c] != 0);
        let Some(col) = piv else { continue };
        used_cols[col] = true;
        pivot_col_of_row[row] = Some(col);
        let inv = r.inv_idx(m[row][col]).expect("pivot nonzero");
        for c in 0..n {
            m[row][c] = r.mul_idx(m[row][c], inv);
        }
        for rr in 0..n {
            if rr != row && m[rr][col] != 0 {
                let factor = m[rr][col];
                for c in 0..n {
                    let t = r.mul_idx(factor, m[row][c]);
                    m[rr][c] = r.sub_idx(m[rr][c], t);
                }
            }
        }
    }
    // Free columns give basis vectors.
    let mut basis = Vec::new();
    for free in 0..n {
        if used_cols[free] {
            continue;
        }
        let mut v = vec![0u64; n];
        v[free] = 1;
        for row in 0..n {
            if let Some(col) = pivot_col_of_row[row] {
                // col-entry satisfies: v[col] = -m[row][free] * v[free]
                v[col] = r.neg_idx(m[row][free]);
            }
        }
        basis.push(v);
    }
    // Put the all-ones-direction (constant vector) first when present for a
    // stable, readable order.
    basis.sort();
    basis
}

impl PartialEq for Poly {
    fn eq(&self, other: &Self) -> bool {
        self.field.same_field(&other.field) && self.c == other.c
    }
}

impl Eq for Poly {}

impl Hash for Poly {
    fn hash<H: Hasher>(&self, state: &mut H) {
        self.field.id().hash(state);
        self.c.hash(state);
    }
}

impl PartialOrd for Poly {
    fn partial_cmp(&self, other: &Self) -> Option<std::cmp::Ordering> {
        Some(self.cmp(other))
    }
}

impl Ord for Poly {
    /// Deterministic order: by degree, then big-endian coefficient tuple.
    fn cmp(&self, other: &Self) -> std::cmp::Ordering {
        self.c
            .len()
            .cmp(&other.c.len())
            .then_with(|| self.c.iter().rev().cmp(other.c.iter().rev()))
    }
}

impl fmt::Display for Poly {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.is_zero() {
            return write!(f, "0");
        }
        let mut first = true;
        for (i, &c) in self.c.iter().enumerate().rev() {
            if c == 0 {
                continue;
            }
            if !first {
                write!(f, " + ")?;
            }
            first = false;
            let ce = self.field.from_index(c);
            match i {
                0 => write!(f, "{}", ce)?,
                1 => {
                    if !ce.is_one() {
                        write!(f, "{}*", ce)?;
                    }
                    write!(f, "x")?;
                }
                _ => {
                    if !ce.is_one() {
                        write!(f, "{}*", ce)?;
                    }
                    write!(f, "x^{}", i)?;
                }
            }
        }
        Ok(())
    }
}

impl fmt::Debug for Poly {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}", self)
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn f3() -> Fq {
        Fq::new(3, 1).unwrap()
    }

    #[test]
    fn divrem_roundtrip() {
        let f = f3();
        let a = Poly::from_ints(&f, &[1, 0, 2, 0, 0, 1]); // x^5 + 2x^2 + 1
        let b = Poly::from_ints(&f, &[2, 1, 1]); // x^2 + x + 2
        let (q, r) = a.divrem(&b).unwrap();
        assert_eq!(q.mul(&b).add(&r), a);
        assert!(r.degree() < b.degree());
    }

    #[test]
    fn gcd_and_xgcd() {
        let f = f3();
        let a = Poly::from_ints(&f, &[2, 0, 1]); // x^2 + 2 = (x-1)(x+1)
        let b = Poly::from_ints(&f, &[2, 1]); // x + 2 = x - 1
        let g = a.gcd(&b);
        assert_eq!(g, Poly::from_ints(&f, &[2, 1]));
        let (g2, s, t) = a.xgcd(&b);
        assert_eq!(g2, g);
        assert_eq!(s.mul(&a).add(&t.mul(&b)), g);
    }

    #[test]
    fn factor_x3_minus_x_over_f3() {
        // x^3 - x = x(x-1)(x-2); all three linear factors, each multiplicity 1.
        let f = f3();
        let poly = Poly::from_ints(&f, &[0, -1, 0, 1]);
        let (lead, factors) = poly.factor();
        assert!(lead.is_one());
        let expected: Vec<Poly> = vec![
            Poly::from_ints(&f, &[0, 1]),
            Poly::from_ints(&f, &[1, 1]),
            Poly::from_ints(&f, &[2, 1]),
        ];
        assert_eq!(factors.len(), 3);
        for (fac, m) in &factors {
            assert_eq!(*m, 1);
            assert!(expected.contains(fac));
        }
    }

    #[test]
    fn factor_with_multiplicities_and_p_powers() {
        let f = f3();
        // (x+1)^3 * (x^2+1): x^2+1 is irreducible over F_3.
        let a = Poly::from_ints(&f, &[1, 1]).pow(3).mul(&Poly::from_ints(&f, &[1, 0, 1]));
        let (_, factors) = a.factor();
        let mut recombined = Poly::one(&f);
        for (fac, m) in &factors {
            assert!(fac.is_irreducible());
            recombined = recombined.mul(&fac.pow(*m as u64));
        }
        assert_eq!(recombined, a.monic());
        assert!(factors.iter().any(|(fac, m)| *m == 3 && fac == &Poly::from_ints(&f, &[1, 1])));
        assert!(factors.iter().any(|(fac, m)| *m == 1 && fac == &Poly::from_ints(&f, &[1, 0, 1])));
    }

    #[test]
    fn factor_over_extension_field() {
        // Over F_9, x^2+1 splits into two linears (i and -i live in F_9).
        let f9 = Fq::new(3, 2).unwrap();
        let a = Poly::from_ints(&f9, &[1, 0, 1]);
        let (_, factors) = a.factor();
        assert_eq!(factors.len(), 2);
        for (fac, m) in &factors {
            assert_eq!(*m, 1);
            assert_eq!(fac.degree(), Some(1));
        }
        let recombined = factors.iter().fold(Poly::one(&f9), |acc, (fac, _)| acc.mul(fac));
        assert_eq!(recombined, a);
    }

    #[test]
    fn factorization_is_deterministic_and_sorted() {
        let f = f3();
        let a = Poly::from_ints(&f, &[0, -1, 0, 1]).mul(&Poly::from_ints(&f, &[1, 0, 1]));
        let (_, f1) = a.factor();
        let (_, f2) = a.factor();
        let tuple = |v: &[(Poly, u32)]| {
            v.iter().map(|(p, m)| (p.raw().to_vec(), *m)).collect::<Vec<_>>()
        };
        assert_eq!(tuple(&f1), tuple(&f2));
        let degs: Vec<usize> = f1.iter().map(|(p, _)| p.deg_or_zero()).collect();
        let mut sorted = degs.clone();
        sorted.sort();
        assert_eq!(degs, sorted);
    }

    #[test]
    fn random_exercise_factor_recombine_f5() {
        // Deterministic pseudo-random polynomials over F_5: factor and
        // recombine must reproduce the monic associate.
        let f5 = Fq::new(5, 1).unwrap();
        let mut state = 0x12345678u64;
        let mut next = move || {
            state ^= state << 13;
            state ^= state >> 7;
            state ^= state << 17;
            state
        };
        for _ in 0..40 {
            let deg = 1 + (next() % 7) as usize;
            let coeffs: Vec<i64> = (0..=deg).map(|_| (next() % 5) as i64).collect();
            let poly = Poly::from_ints(&f5, &coeffs);
            if poly.is_zero() || poly.degree() == Some(0) {
                continue;
            }
            let (lead, factors) = poly.factor();
            let mut re = Poly::constant(&lead);
            for (fac, m) in &factors {
                assert!(fac.is_monic());
                re = re.mul(&fac.pow(*m as u64));
            }
            assert_eq!(re, poly);
        }
    }
}
