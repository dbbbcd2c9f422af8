//! Exact arithmetic in `F_p` and its degree-`m` extension `F_{q^m}` (q = p).
//!
//! Elements of the extension are coefficient vectors in the polynomial
//! basis `1, x, ..., x^{m-1}` modulo a monic irreducible polynomial. The
//! same basis is the fixed basis of the expansion map `expand`/`contract`
//! between `F_{q^m}` and `F_q^m`, so ranks over `F_q` computed elsewhere
//! are all taken with respect to it.

use std::fmt;
use std::sync::Arc;

use crate::{Error, Result};

/// Parameters of `F_{q^m}`: a prime `p`, the extension degree `m >= 1`,
/// and a monic irreducible modulus of degree `m` over `F_p`, stored
/// constant term first.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct FieldParams {
    p: u64,
    m: usize,
    modulus: Vec<u64>,
}

/// An element of `F_{q^m}` as `m` residues mod p, constant term first.
///
/// Elements are plain values; all arithmetic goes through the owning
/// [`FieldParams`].
#[derive(Clone, PartialEq, Eq, Hash)]
pub struct ExtElem {
    coeffs: Vec<u64>,
}

impl fmt::Debug for ExtElem {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{:?}", self.coeffs)
    }
}

impl ExtElem {
    pub fn coeffs(&self) -> &[u64] {
        &self.coeffs
    }

    pub fn is_zero(&self) -> bool {
        self.coeffs.iter().all(|&c| c == 0)
    }
}

fn is_prime(p: u64) -> bool {
    if p < 2 {
        return false;
    }
    let mut d = 2;
    while d * d <= p {
        if p.is_multiple_of(d) {
            return false;
        }
        d += 1;
    }
    true
}

/// Remainder of `a` divided by monic `b` over `F_p`, both constant-first.
fn poly_rem(a: &[u64], b: &[u64], p: u64) -> Vec<u64> {
    let mut r: Vec<u64> = a.to_vec();
    let db = b.len() - 1;
    while r.len() > db {
        let lead = *r.last().unwrap() % p;
        let shift = r.len() - 1 - db;
        if lead != 0 {
            for (j, &bj) in b.iter().enumerate() {
                let idx = shift + j;
                r[idx] = (r[idx] + (p - lead) * bj) % p;
            }
        }
        r.pop();
    }
    r
}

fn poly_is_zero(a: &[u64]) -> bool {
    a.iter().all(|&c| c == 0)
}

/// Irreducibility by trial division over all monic polynomials of degree
/// up to `deg/2`.
fn is_irreducible(modulus: &[u64], p: u64) -> bool {
    let deg = modulus.len() - 1;
    if deg == 1 {
        return true;
    }
    for d in 1..=(deg / 2) {
        // all monic polynomials of degree d: odometer over d lower coeffs
        let mut div = vec![0u64; d + 1];
        div[d] = 1;
        loop {
            if poly_is_zero(&poly_rem(modulus, &div, p)) {
                return false;
            }
            // increment low coefficients
            let mut i = 0;
            loop {
                if i == d {
                    break;
                }
                div[i] += 1;
                if div[i] < p {
                    break;
                }
                div[i] = 0;
                i += 1;
            }
            if i == d {
                break;
            }
        }
    }
    true
}

impl FieldParams {
    /// Validates `p` prime and `modulus` monic irreducible of degree `m`.
    pub fn new(p: u64, m: usize, modulus: Vec<u64>) -> Result<Arc<Self>> {
        if !is_prime(p) {
            return Err(Error::InvalidField(format!("p = {p} is not prime")));
        }
        if m == 0 {
            return Err(Error::InvalidField("extension degree m must be >= 1".into()));
        }
        if modulus.len() != m + 1 {
            return Err(Error::InvalidField(format!(
                "modulus must have m + 1 = {} coefficients, got {}",
                m + 1,
                modulus.len()
            )));
        }
        if modulus.iter().any(|&c| c >= p) {
            return Err(Error::InvalidField("modulus coefficient out of range".into()));
        }
        if modulus[m] != 1 {
            return Err(Error::InvalidField("modulus must be monic".into()));
        }
        if !is_irreducible(&modulus, p) {
            return Err(Error::InvalidField("modulus is not irreducible".into()));
        }
        Ok(Arc::new(FieldParams { p, m, modulus }))
    }

    /// The field with the default modulus for `(p, m)`: the monic
    /// irreducible polynomial of degree `m` with the smallest value
    /// `c_0 + c_1 p + ... + p^m`.
    pub fn with_default_modulus(p: u64, m: usize) -> Result<Arc<Self>> {
        if !is_prime(p) {
            return Err(Error::InvalidField(format!("p = {p} is not prime")));
        }
        if m == 0 {
            return Err(Error::InvalidField("extension degree m must be >= 1".into()));
        }
        let mut low = vec![0u64; m];
        loop {
            let mut modulus = low.clone();
            modulus.push(1);
            if is_irreducible(&modulus, p) {
                return FieldParams::new(p, m, modulus);
            }
            // next candidate in increasing integer value: increment the
            // big-endian (c_{m-1}, ..., c_0) counter from the low end
            let mut i = 0;
            loop {
                if i == m {
                    break;
                }
                low[i] += 1;
                if low[i] < p {
                    break;
                }
                low[i] = 0;
                i += 1;
            }
            if i == m {
                return Err(Error::InvalidField(format!(
                    "no irreducible polynomial of degree {m} over F_{p}"
                )));
            }
        }
    }

    pub fn p(&self) -> u64 {
        self.p
    }

    /// The base field order q (= p here; prime base only).
    pub fn q(&self) -> u64 {
        self.p
    }

    pub fn m(&self) -> usize {
        self.m
    }

    pub fn modulus(&self) -> &[u64] {
        &self.modulus
    }

    /// q^m as u128.
    pub fn order(&self) -> u128 {
        (0..self.m).fold(1u128, |acc, _| acc * self.p as u128)
    }

    pub fn zero(&self) -> ExtElem {
        ExtElem { coeffs: vec![0; self.m] }
    }

    pub fn one(&self) -> ExtElem {
        let mut coeffs = vec![0; self.m];
        coeffs[0] = 1;
        ExtElem { coeffs }
    }

    /// The class of `x`, the polynomial-basis generator. Zero when m = 1.
    pub fn gen(&self) -> ExtElem {
        let mut coeffs = vec![0u64; self.m];
        if self.m >= 2 {
            coeffs[1] = 1;
        } else {
            // x ≡ -c_0 mod (x + c_0)
            coeffs[0] = (self.p - self.modulus[0]) % self.p;
        }
        ExtElem { coeffs }
    }

    /// Builds an element from exactly `m` residues, constant term first.
    pub fn elem(&self, coeffs: &[u64]) -> Result<ExtElem> {
        if coeffs.len() != self.m {
            return Err(Error::input(format!(
                "element needs {} coefficients, got {}",
                self.m,
                coeffs.len()
            )));
        }
        if coeffs.iter().any(|&c| c >= self.p) {
            return Err(Error::input("coefficient out of range"));
        }
        Ok(ExtElem { coeffs: coeffs.to_vec() })
    }

    /// Embeds a base-field residue as a constant.
    pub fn from_base(&self, c: u64) -> ExtElem {
        let mut coeffs = vec![0; self.m];
        coeffs[0] = c % self.p;
        ExtElem { coeffs }
    }

    fn check(&self, a: &ExtElem) {
        assert_eq!(a.coeffs.len(), self.m, "element/field degree mismatch");
    }

    pub fn add(&self, a: &ExtElem, b: &ExtElem) -> ExtElem {
        self.check(a);
        self.check(b);
        let coeffs = a
            .coeffs
            .iter()
            .zip(&b.coeffs)
            .map(|(&x, &y)| (x + y) % self.p)
            .collect();
        ExtElem { coeffs }
    }

    pub fn neg(&self, a: &ExtElem) -> ExtElem {
        self.check(a);
        let coeffs = a.coeffs.iter().map(|&x| (self.p - x) % self.p).collect();
        ExtElem { coeffs }
    }

    pub fn sub(&self, a: &ExtElem, b: &ExtElem) -> ExtElem {
        self.add(a, &self.neg(b))
    }

    pub fn mul(&self, a: &ExtElem, b: &ExtElem) -> ExtElem {
        self.check(a);
        self.check(b);
        let mut prod = vec![0u64; 2 * self.m - 1];
        for (i, &x) in a.coeffs.iter().enumerate() {
            if x == 0 {
                continue;
            }
            for (j, &y) in b.coeffs.iter().enumerate() {
                prod[i + j] = (prod[i + j] + x * y) % self.p;
            }
        }
        let mut rem = poly_rem(&prod, &self.modulus, self.p);
        rem.resize(self.m, 0);
        ExtElem { coeffs: rem }
    }

    /// Multiplies by a base-field scalar (no reduction needed).
    pub fn scale(&self, c: u64, a: &ExtElem) -> ExtElem {
        self.check(a);
        let c = c % self.p;
        let coeffs = a.coeffs.iter().map(|&x| (x * c) % self.p).collect();
        ExtElem { coeffs }
    }

    pub fn pow(&self, a: &ExtElem, e: u128) -> ExtElem {
        self.check(a);
        let mut base = a.clone();
        let mut acc = self.one();
        let mut e = e;
        while e > 0 {
            if e & 1 == 1 {
                acc = self.mul(&acc, &base);
            }
            base = self.mul(&base, &base);
            e >>= 1;
        }
        acc
    }

    pub fn inv(&self, a: &ExtElem) -> Result<ExtElem> {
        self.check(a);
        if a.is_zero() {
            return Err(Error::ZeroInverse);
        }
        Ok(self.pow(a, self.order() - 2))
    }

    /// `a^{q^i}`, the i-fold q-Frobenius.
    pub fn frobenius(&self, a: &ExtElem, i: usize) -> ExtElem {
        self.check(a);
        let i = i % self.m;
        let mut e = 1u128;
        for _ in 0..i {
            e *= self.q() as u128;
        }
        self.pow(a, e)
    }

    /// Expansion `φ_m` onto the polynomial basis: a length-`m` column of
    /// residues. Inverse of [`FieldParams::contract`].
    pub fn expand(&self, a: &ExtElem) -> Vec<u64> {
        self.check(a);
        a.coeffs.clone()
    }

    pub fn contract(&self, v: &[u64]) -> Result<ExtElem> {
        self.elem(v)
    }

    /// All q^m elements in lexicographic coefficient order (zero first).
    pub fn elements(&self) -> impl Iterator<Item = ExtElem> + '_ {
        CoeffOdometer::new(self.p, self.m).map(|coeffs| ExtElem { coeffs })
    }

    /// All vectors of `F_{q^m}^len`, in odometer order. `q^{m·len}` items.
    pub fn vectors(&self, len: usize) -> impl Iterator<Item = Vec<ExtElem>> + '_ {
        CoeffOdometer::new(self.p, self.m * len).map(move |flat| {
            flat.chunks(self.m)
                .map(|c| ExtElem { coeffs: c.to_vec() })
                .collect()
        })
    }
}

/// Odometer over `F_p^len`, lexicographic with the first coordinate
/// cycling fastest.
struct CoeffOdometer {
    p: u64,
    state: Vec<u64>,
    started: bool,
    done: bool,
}

impl CoeffOdometer {
    fn new(p: u64, len: usize) -> Self {
        CoeffOdometer { p, state: vec![0; len], started: false, done: false }
    }
}

impl Iterator for CoeffOdometer {
    type Item = Vec<u64>;

    fn next(&mut self) -> Option<Vec<u64>> {
        if self.done {
            return None;
        }
        if !self.started {
            self.started = true;
            return Some(self.state.clone());
        }
        let mut i = 0;
        loop {
            if i == self.state.len() {
                self.done = true;
                return None;
            }
            self.state[i] += 1;
            if self.state[i] < self.p {
                break;
            }
            self.state[i] = 0;
            i += 1;
        }
        Some(self.state.clone())
    }
}
