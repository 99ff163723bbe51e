//! Exact arithmetic in the finite field F_{p^k} for odd primes p.
//!
//! Fields are constructed with a deterministic modulus: the lexicographically
//! least monic irreducible polynomial of degree k over F_p, where candidate
//! coefficient tuples (c_{k-1}, ..., c_1, c_0) are scanned in ascending order.
//! This makes every computation in the toolkit reproducible bit-for-bit.
//!
//! Elements are stored as base-p packed digit strings (digit i = coefficient
//! of T^i). For q = p^k up to 2^16 a discrete-log table pair is precomputed,
//! making multiplication and inversion O(1); larger fields fall back to
//! schoolbook polynomial arithmetic modulo the field polynomial.

use std::fmt;
use std::hash::{Hash, Hasher};
use std::sync::atomic::{AtomicU64, Ordering};
use std::sync::Arc;

use thiserror::Error;

/// Largest q for which exp/log tables are built.
const TABLE_LIMIT: u64 = 1 << 16;

/// Cap on the prime so digit products never overflow u64 in schoolbook mode.
const PRIME_LIMIT: u64 = 1 << 20;

static NEXT_FIELD_ID: AtomicU64 = AtomicU64::new(1);

/// Errors from field construction and element arithmetic.
#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum FieldError {
    #[error("characteristic {0} is not prime")]
    NonPrime(u64),
    #[error("characteristic 2 is not supported; p must be odd")]
    EvenPrime,
    #[error("extension degree {0} out of range (1..=8)")]
    DegreeOutOfRange(u32),
    #[error("prime {0} exceeds the implementation cap {PRIME_LIMIT}")]
    PrimeTooLarge(u64),
    #[error("division by zero in F_{{{0}}}")]
    DivisionByZero(u64),
    #[error("elements belong to different fields (F_{{{0}}} vs F_{{{1}}})")]
    FieldMismatch(u64, u64),
}

/// Immutable descriptor of one F_{p^k}; shared behind `Fq`.
pub struct FqRepr {
    p: u64,
    k: u32,
    q: u64,
    /// Monic field polynomial, coefficients `modulus[i]` of T^i, length k+1.
    modulus: Vec<u64>,
    /// exp[i] = g^i for a fixed primitive g, length q-1 (empty when untabled).
    exp: Vec<u64>,
    /// log[packed] = discrete log base g, length q (entry 0 unused).
    log: Vec<u32>,
    id: u64,
}

/// A finite field F_{p^k}, cheaply cloneable.
#[derive(Clone)]
pub struct Fq(Arc<FqRepr>);

/// An element of a specific `Fq`, stored as packed base-p digits.
#[derive(Clone)]
pub struct FqElem {
    field: Fq,
    val: u64,
}

fn is_prime(n: u64) -> bool {
    if n < 2 {
        return false;
    }
    if n % 2 == 0 {
        return n == 2;
    }
    let mut d = 3;
    while d * d <= n {
        if n % d == 0 {
            return false;
        }
        d += 2;
    }
    true
}

/// Polynomial helpers over F_p used only for modulus selection.
/// Coefficient vectors are little-endian with no trailing zeros.
mod modp {
    pub fn trim(v: &mut Vec<u64>) {
        while v.last() == Some(&0) {
            v.pop();
        }
    }

    pub fn mul(a: &[u64], b: &[u64], p: u64) -> Vec<u64> {
        if a.is_empty() || b.is_empty() {
            return Vec::new();
        }
        let mut out = vec![0u64; a.len() + b.len() - 1];
        for (i, &ai) in a.iter().enumerate() {
            if ai == 0 {
                continue;
            }
            for (j, &bj) in b.iter().enumerate() {
                out[i + j] = (out[i + j] + ai * bj) % p;
            }
        }
        trim(&mut out);
        out
    }

    /// Remainder of `a` modulo the monic polynomial `m`.
    pub fn rem(a: &[u64], m: &[u64], p: u64) -> Vec<u64> {
        let mut r = a.to_vec();
        trim(&mut r);
        let dm = m.len() - 1;
        while r.len() > dm {
            let lead = *r.last().unwrap();
            let shift = r.len() - 1 - dm;
            for i in 0..dm {
                let t = (lead * m[i]) % p;
                let idx = shift + i;
                r[idx] = (r[idx] + p - t) % p;
            }
            r.pop();
            trim(&mut r);
        }
        r
    }

    /// x^e mod m, with x the indeterminate and m monic.
    pub fn x_powmod(mut e: u64, m: &[u64], p: u64) -> Vec<u64> {
        let mut base = rem(&[0, 1], m, p);
        let mut acc = vec![1u64];
        while e > 0 {
            if e & 1 == 1 {
                acc = rem(&mul(&acc, &base, p), m, p);
            }
            base = rem(&mul(&base, &base, p), m, p);
            e >>= 1;
        }
        acc
    }

    pub fn gcd(a: &[u64], b: &[u64], p: u64) -> Vec<u64> {
        let mut a = a.to_vec();
        let mut b = b.to_vec();
        trim(&mut a);
        trim(&mut b);
        while !b.is_empty() {
            // Make b monic before taking a remainder.
            let inv_lead = mod_inv(*b.last().unwrap(), p);
            let monic: Vec<u64> = b.iter().map(|&c| (c * inv_lead) % p).collect();
            let r = rem(&a, &monic, p);
            a = b;
            b = r;
        }
        a
    }

    pub fn mod_inv(a: u64, p: u64) -> u64 {
        // Fermat inverse; p prime and a != 0 mod p.
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

    /// Deterministic irreducibility test for a monic polynomial of degree k:
    /// x^{p^k} = x (mod f) and gcd(x^{p^{k/l}} - x, f) = 1 for prime l | k.
    pub fn is_irreducible(f: &[u64], p: u64) -> bool {
        let k = (f.len() - 1) as u32;
        if k == 0 {
            return false;
        }
        if k == 1 {
            return true;
        }
        let pk = p.pow(k);
        let xq = x_powmod(pk, f, p);
        // x^{p^k} - x must be 0 mod f.
        let mut diff = xq.clone();
        while diff.len() < 2 {
            diff.push(0);
        }
        diff[1] = (diff[1] + p - 1) % p;
        trim(&mut diff);
        if !diff.is_empty() {
            return false;
        }
        let mut primes = Vec::new();
        let mut kk = k;
        let mut d = 2;
        while d * d <= kk {
            if kk % d == 0 {
                primes.push(d);
                while kk % d == 0 {
                    kk /= d;
                }
            }
            d += 1;
        }
        if kk > 1 {
            primes.push(kk);
        }
        for l in primes {
            let e = p.pow(k / l);
            let mut g = x_powmod(e, f, p);
            while g.len() < 2 {
                g.push(0);
            }
            g[1] = (g[1] + p - 1) % p;
            trim(&mut g);
            let gc = gcd(f, &g, p);
            if gc.len() != 1 {
                return false;
            }
        }
        true
    }
}

/// The lexicographically least monic irreducible polynomial of degree k over
/// F_p, scanning coefficient tuples (c_{k-1}, ..., c_0) in ascending order.
fn least_irreducible(p: u64, k: u32) -> Vec<u64> {
    if k == 1 {
        // T itself: the first monic linear polynomial.
        return vec![0, 1];
    }
    let k = k as usize;
    let mut coeffs = vec![0u64; k]; // coeffs[i] multiplies T^i; scanned big-endian
    loop {
        let mut f = coeffs.clone();
        f.push(1);
        if modp::is_irreducible(&f, p) {
            return f;
        }
        // Increment the tuple (c_{k-1}, ..., c_0) as a base-p counter whose
        // most significant digit is c_{k-1}.
        let mut i = 0;
        loop {
            coeffs[i] += 1;
            if coeffs[i] < p {
                break;
            }
            coeffs[i] = 0;
            i += 1;
            assert!(i < k, "no irreducible polynomial found (impossible)");
        }
    }
}

impl Fq {
    /// Construct F_{p^k} with the deterministic least modulus.
    pub fn new(p: u64, k: u32) -> Result<Fq, FieldError> {
        if p == 2 {
            return Err(FieldError::EvenPrime);
        }
        if p > PRIME_LIMIT {
            return Err(FieldError::PrimeTooLarge(p));
        }
        if !is_prime(p) {
            return Err(FieldError::NonPrime(p));
        }
        if !(1..=8).contains(&k) {
            return Err(FieldError::DegreeOutOfRange(k));
        }
        let q = p.checked_pow(k).filter(|&q| q <= (1 << 52)).ok_or(FieldError::DegreeOutOfRange(k))?;
        let modulus = least_irreducible(p, k);
        let mut repr = FqRepr {
            p,
            k,
            q,
            modulus,
            exp: Vec::new(),
            log: Vec::new(),
            id: NEXT_FIELD_ID.fetch_add(1, Ordering::Relaxed),
        };
        if q <= TABLE_LIMIT {
            repr.build_tables();
        }
        Ok(Fq(Arc::new(repr)))
    }

    pub fn p(&self) -> u64 {
        self.0.p
    }

    pub fn k(&self) -> u32 {
        self.0.k
    }

    pub fn q(&self) -> u64 {
        self.0.q
    }

    pub fn id(&self) -> u64 {
        self.0.id
    }

    /// The field polynomial, little-endian coefficients, monic of degree k.
    pub fn modulus(&self) -> &[u64] {
        &self.0.modulus
    }

    pub fn same_field(&self, other: &Fq) -> bool {
        self.0.id == other.0.id
    }

    pub fn zero(&self) -> FqElem {
        FqElem { field: self.clone(), val: 0 }
    }

    pub fn one(&self) -> FqElem {
        FqElem { field: self.clone(), val: 1 }
    }

    /// Embed an integer via reduction mod p (the prime subfield).
    pub fn from_int(&self, n: i64) -> FqElem {
        let p = self.0.p as i64;
        let r = n.rem_euclid(p) as u64;
        FqElem { field: self.clone(), val: r }
    }

    /// Element from little-endian digit coefficients (each reduced mod p).
    pub fn from_coeffs(&self, coeffs: &[i64]) -> FqElem {
        let p = self.0.p as i64;
        let mut val = 0u64;
        for (i, &c) in coeffs.iter().enumerate().take(self.0.k as usize) {
            val += (c.rem_euclid(p) as u64) * self.0.p.pow(i as u32);
        }
        FqElem { field: self.clone(), val }
    }

    /// Element from its packed index in [0, q).
    pub fn from_index(&self, idx: u64) -> FqElem {
        assert!(idx < self.0.q, "element index out of range");
        FqElem { field: self.clone(), val: idx }
    }

    /// All elements in deterministic (index) order.
    pub fn elements(&self) -> impl Iterator<Item = FqElem> + '_ {
        (0..self.0.q).map(move |v| FqElem { field: self.clone(), val: v })
    }

    /// The primitive root with the smallest packed index: a deterministic
    /// generator of the multiplicative group F_q*.
    pub fn primitive_root(&self) -> FqElem {
        let target = self.0.q - 1;
        for e in self.elements().skip(1) {
            let mut pow = e.clone();
            let mut ord = 1;
            while !pow.is_one() {
                pow = pow.mul(&e);
                ord += 1;
            }
            if ord == target {
                return e;
            }
        }
        unreachable!("every finite field has a primitive root")
    }

    pub(crate) fn repr(&self) -> &FqRepr {
        &self.0
    }
}

impl FqRepr {
    pub fn p(&self) -> u64 {
        self.p
    }

    pub fn q(&self) -> u64 {
        self.q
    }

    fn unpack(&self, mut v: u64) -> [u64; 8] {
        let mut d = [0u64; 8];
        for slot in d.iter_mut().take(self.k as usize) {
            *slot = v % self.p;
            v /= self.p;
        }
        d
    }

    fn pack(&self, d: &[u64]) -> u64 {
        let mut v = 0u64;
        for i in (0..self.k as usize).rev() {
            v = v * self.p + d[i] % self.p;
        }
        v
    }

    pub(crate) fn add_idx(&self, a: u64, b: u64) -> u64 {
        if self.k == 1 {
            return (a + b) % self.p;
        }
        let da = self.unpack(a);
        let db = self.unpack(b);
        let mut out = [0u64; 8];
        for i in 0..self.k as usize {
            out[i] = (da[i] + db[i]) % self.p;
        }
        self.pack(&out)
    }

    pub(crate) fn sub_idx(&self, a: u64, b: u64) -> u64 {
        self.add_idx(a, self.neg_idx(b))
    }

    pub(crate) fn neg_idx(&self, a: u64) -> u64 {
        if self.k == 1 {
            return (self.p - a % self.p) % self.p;
        }
        let da = self.unpack(a);
        let mut out = [0u64; 8];
        for i in 0..self.k as usize {
            out[i] = (self.p - da[i]) % self.p;
        }
        self.pack(&out)
    }

    pub(crate) fn mul_idx(&self, a: u64, b: u64) -> u64 {
        if a == 0 || b == 0 {
            return 0;
        }
        if !self.exp.is_empty() {
            let la = self.log[a as usize] as u64;
            let lb = self.log[b as usize] as u64;
            return self.exp[((la + lb) % (self.q - 1)) as usize];
        }
        self.mul_slow(a, b)
    }

    fn mul_slow(&self, a: u64, b: u64) -> u64 {
        let da = self.unpack(a);
        let db = self.unpack(b);
        let k = self.k as usize;
        let mut prod = [0u64; 15];
        for i in 0..k {
            if da[i] == 0 {
                continue;
            }
            for j in 0..k {
                prod[i + j] += da[i] * db[j];
            }
        }
        for c in prod.iter_mut() {
            *c %= self.p;
        }
        // Reduce by the monic modulus.
        for i in (k..2 * k - 1).rev() {
            let lead = prod[i];
            if lead == 0 {
                continue;
            }
            prod[i] = 0;
            for j in 0..k {
                let t = lead * self.modulus[j] % self.p;
                prod[i - k + j] = (prod[i - k + j] + self.p - t) % self.p;
            }
        }
        self.pack(&prod[..k])
    }

    pub(crate) fn inv_idx(&self, a: u64) -> Option<u64> {
        if a == 0 {
            return None;
        }
        if !self.exp.is_empty() {
            let la = self.log[a as usize] as u64;
            return Some(self.exp[((self.q - 1 - la) % (self.q - 1)) as usize]);
        }
        Some(self.pow_idx(a, self.q - 2))
    }

    pub(crate) fn pow_idx(&self, a: u64, mut e: u64) -> u64 {
        let mut base = a;
        let mut acc = 1u64;
        while e > 0 {
            if e & 1 == 1 {
                acc = self.mul_idx(acc, base);
            }
            base = self.mul_idx(base, base);
            e >>= 1;
        }
        acc
    }

    fn build_tables(&mut self) {
        let q = self.q;
        // Find the least primitive element by index order.
        let mut factors = Vec::new();
        let mut m = q - 1;
        let mut d = 2;
        while d * d <= m {
            if m % d == 0 {
                factors.push(d);
                while m % d == 0 {
                    m /= d;
                }
            }
            d += 1;
        }
        if m > 1 {
            factors.push(m);
        }
        let gen = (2..q)
            .find(|&g| factors.iter().all(|&f| self.pow_idx(g, (q - 1) / f) != 1))
            .expect("finite field has a primitive element");
        let mut exp = vec![0u64; (q - 1) as usize];
        let mut log = vec![0u32; q as usize];
        let mut cur = 1u64;
        for (i, slot) in exp.iter_mut().enumerate() {
            *slot = cur;
            log[cur as usize] = i as u32;
            cur = self.mul_slow(cur, gen);
        }
        debug_assert_eq!(cur, 1);
        self.exp = exp;
        self.log = log;
    }
}

impl FqElem {
    pub fn field(&self) -> &Fq {
        &self.field
    }

    /// Packed index in [0, q): the base-p digit string of the coefficients.
    pub fn index(&self) -> u64 {
        self.val
    }

    pub fn is_zero(&self) -> bool {
        self.val == 0
    }

    pub fn is_one(&self) -> bool {
        self.val == 1
    }

    /// Little-endian coefficients over F_p, length k.
    pub fn coeffs(&self) -> Vec<u64> {
        let r = self.field.repr();
        r.unpack(self.val)[..r.k as usize].to_vec()
    }

    fn assert_same(&self, other: &FqElem) {
        assert!(
            self.field.same_field(&other.field),
            "element arithmetic across distinct fields"
        );
    }

    pub fn add(&self, other: &FqElem) -> FqElem {
        self.assert_same(other);
        FqElem { field: self.field.clone(), val: self.field.repr().add_idx(self.val, other.val) }
    }

    pub fn sub(&self, other: &FqElem) -> FqElem {
        self.assert_same(other);
        FqElem { field: self.field.clone(), val: self.field.repr().sub_idx(self.val, other.val) }
    }

    pub fn neg(&self) -> FqElem {
        FqElem { field: self.field.clone(), val: self.field.repr().neg_idx(self.val) }
    }

    pub fn mul(&self, other: &FqElem) -> FqElem {
        self.assert_same(other);
        FqElem { field: self.field.clone(), val: self.field.repr().mul_idx(self.val, other.val) }
    }

    pub fn inv(&self) -> Result<FqElem, FieldError> {
        self.field
            .repr()
            .inv_idx(self.val)
            .map(|v| FqElem { field: self.field.clone(), val: v })
            .ok_or(FieldError::DivisionByZero(self.field.q()))
    }

    pub fn div(&self, other: &FqElem) -> Result<FqElem, FieldError> {
        self.assert_same(other);
        Ok(self.mul(&other.inv()?))
    }

    pub fn pow(&self, e: u64) -> FqElem {
        FqElem { field: self.field.clone(), val: self.field.repr().pow_idx(self.val, e) }
    }

    /// The Frobenius a -> a^p.
    pub fn frobenius(&self) -> FqElem {
        self.pow(self.field.p())
    }

    /// The unique p-th root, a -> a^{p^{k-1}} (inverse of Frobenius).
    pub fn pth_root(&self) -> FqElem {
        self.pow(self.field.q() / self.field.p())
    }
}

impl PartialEq for FqElem {
    fn eq(&self, other: &Self) -> bool {
        self.field.same_field(&other.field) && self.val == other.val
    }
}

impl Eq for FqElem {}

impl Hash for FqElem {
    fn hash<H: Hasher>(&self, state: &mut H) {
        self.field.id().hash(state);
        self.val.hash(state);
    }
}

impl fmt::Debug for FqElem {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}", self)
    }
}

impl fmt::Display for FqElem {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.field.k() == 1 {
            write!(f, "{}", self.val)
        } else {
            write!(f, "[{}]", self.coeffs().iter().map(|c| c.to_string()).collect::<Vec<_>>().join(","))
        }
    }
}

impl fmt::Debug for Fq {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "F_{}^{}", self.p(), self.k())
    }
}
