//! Arithmetic in `F_q`, `q = p^e`.
//!
//! Elements are stored as their index `Σ c_i p^i`, where `(c_0, …, c_{e-1})`
//! is the coefficient vector modulo the field's defining polynomial. This
//! integer order is the canonical element order used everywhere else in the
//! crate (vertex indexing, "smallest" primitive element, matrix rows).

use alloc::collections::BTreeMap;
use alloc::vec;
use alloc::vec::Vec;

use crate::{Error, Result};

/// Default upper bound on `q` accepted by [`Field::new`].
pub const DEFAULT_MAX_ORDER: u64 = 1 << 20;

/// An element of a [`Field`], identified by its index `Σ c_i p^i`.
#[derive(Clone, Copy, Debug, Default, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct Fe(pub(crate) u32);

impl Fe {
    pub const ZERO: Fe = Fe(0);
    pub const ONE: Fe = Fe(1);

    pub const fn index(self) -> u32 {
        self.0
    }

    pub const fn is_zero(self) -> bool {
        self.0 == 0
    }
}

/// Binary field operations, mirroring the arithmetic entry point
/// [`Field::arith`].
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum FieldOp {
    Add,
    Sub,
    Mul,
    Div,
    /// `a^k` where `k` is the index of `b` read as a nonnegative integer.
    Pow,
}

/// The finite field `F_{p^e}` with a fixed defining polynomial.
///
/// Multiplication goes through discrete log tables built from the smallest
/// primitive element, so construction costs `O(q)` time and memory.
#[derive(Clone, Debug)]
pub struct Field {
    p: u32,
    e: u32,
    q: u32,
    /// Monic, low degree first, length `e + 1`.
    modulus: Vec<u32>,
    generator: Fe,
    exp: Vec<u32>,
    log: Vec<u32>,
    /// `tr(x^i)` for `i < e`; the trace is linear so this determines it.
    basis_trace: Vec<u32>,
}

impl PartialEq for Field {
    fn eq(&self, other: &Self) -> bool {
        self.p == other.p && self.e == other.e && self.modulus == other.modulus
    }
}

impl Eq for Field {}

impl Field {
    /// Builds `F_{p^e}` with the default size bound.
    pub fn new(p: u32, e: u32) -> Result<Self> {
        Self::with_bound(p, e, DEFAULT_MAX_ORDER)
    }

    /// Builds `F_{p^e}`, rejecting `p^e > bound`.
    ///
    /// The defining polynomial is the lexicographically smallest monic
    /// irreducible of degree `e`, comparing `c_0` first, then `c_1`, and so on.
    pub fn with_bound(p: u32, e: u32, bound: u64) -> Result<Self> {
        if !is_prime(p as u64) {
            return Err(Error::NotPrime(p as u64));
        }
        if e == 0 {
            return Err(Error::ZeroExponent);
        }
        let order = (p as u64).checked_pow(e).unwrap_or(u64::MAX);
        let bound = bound.min(u32::MAX as u64);
        if order > bound {
            return Err(Error::TooLarge { order, bound });
        }
        let q = order as u32;
        let modulus = smallest_irreducible(p, e);
        let mut field = Field {
            p,
            e,
            q,
            modulus,
            generator: Fe::ONE,
            exp: Vec::new(),
            log: Vec::new(),
            basis_trace: Vec::new(),
        };
        field.generator = field.search_primitive();
        field.build_tables();
        field.basis_trace = (0..e)
            .map(|i| {
                let mut coeffs = vec![0; e as usize];
                coeffs[i as usize] = 1;
                let x_i = field.pack_coeffs(&coeffs);
                field.trace_frobenius(x_i)
            })
            .collect();
        Ok(field)
    }

    /// Builds `F_q` from the order alone.
    pub fn of_order(q: u64) -> Result<Self> {
        let (p, e) = prime_power(q).ok_or(Error::NotPrimePower(q))?;
        Self::new(p as u32, e)
    }

    pub fn characteristic(&self) -> u32 {
        self.p
    }

    pub fn degree(&self) -> u32 {
        self.e
    }

    pub fn order(&self) -> u32 {
        self.q
    }

    pub fn is_prime_field(&self) -> bool {
        self.e == 1
    }

    /// Coefficients of the defining polynomial, low degree first (monic).
    pub fn modulus(&self) -> &[u32] {
        &self.modulus
    }

    pub fn elements(&self) -> impl Iterator<Item = Fe> + Clone {
        (0..self.q).map(Fe)
    }

    pub fn nonzero_elements(&self) -> impl Iterator<Item = Fe> + Clone {
        (1..self.q).map(Fe)
    }

    /// The element with the given index, if it is below `q`.
    pub fn element(&self, index: u32) -> Option<Fe> {
        (index < self.q).then_some(Fe(index))
    }

    /// Element from a length-`e` coefficient vector with entries in `[0, p)`.
    pub fn from_coeffs(&self, coeffs: &[u32]) -> Option<Fe> {
        if coeffs.len() != self.e as usize || coeffs.iter().any(|&c| c >= self.p) {
            return None;
        }
        Some(self.pack_coeffs(coeffs))
    }

    fn pack_coeffs(&self, coeffs: &[u32]) -> Fe {
        Fe(coeffs.iter().rev().fold(0, |acc, &c| acc * self.p + c))
    }

    pub fn coeffs(&self, a: Fe) -> Vec<u32> {
        let mut x = a.0;
        (0..self.e)
            .map(|_| {
                let d = x % self.p;
                x /= self.p;
                d
            })
            .collect()
    }

    /// The image of an integer in the prime subfield.
    pub fn from_int(&self, n: i64) -> Fe {
        Fe(n.rem_euclid(self.p as i64) as u32)
    }

    /// The integer in `[0, p)` represented by `a`, if `a` lies in `F_p`.
    pub fn prime_value(&self, a: Fe) -> Option<u32> {
        (a.0 < self.p).then_some(a.0)
    }

    pub fn add(&self, a: Fe, b: Fe) -> Fe {
        if self.e == 1 {
            return Fe((a.0 + b.0) % self.p);
        }
        let (mut x, mut y) = (a.0, b.0);
        let (mut out, mut place) = (0, 1);
        while x > 0 || y > 0 {
            out += ((x % self.p + y % self.p) % self.p) * place;
            place *= self.p;
            x /= self.p;
            y /= self.p;
        }
        Fe(out)
    }

    pub fn neg(&self, a: Fe) -> Fe {
        if self.e == 1 {
            return Fe((self.p - a.0) % self.p);
        }
        let mut x = a.0;
        let (mut out, mut place) = (0, 1);
        while x > 0 {
            out += ((self.p - x % self.p) % self.p) * place;
            place *= self.p;
            x /= self.p;
        }
        Fe(out)
    }

    pub fn sub(&self, a: Fe, b: Fe) -> Fe {
        self.add(a, self.neg(b))
    }

    pub fn mul(&self, a: Fe, b: Fe) -> Fe {
        if a.is_zero() || b.is_zero() {
            return Fe::ZERO;
        }
        let n = self.q - 1;
        let k = (self.log[a.0 as usize] as u64 + self.log[b.0 as usize] as u64) % n as u64;
        Fe(self.exp[k as usize])
    }

    pub fn inv(&self, a: Fe) -> Result<Fe> {
        if a.is_zero() {
            return Err(Error::DivisionByZero);
        }
        let n = self.q - 1;
        Ok(Fe(self.exp[((n - self.log[a.0 as usize]) % n) as usize]))
    }

    pub fn div(&self, a: Fe, b: Fe) -> Result<Fe> {
        Ok(self.mul(a, self.inv(b)?))
    }

    /// `a^k`, with `0^0 = 1`.
    pub fn pow(&self, a: Fe, k: u64) -> Fe {
        if k == 0 {
            return Fe::ONE;
        }
        if a.is_zero() {
            return Fe::ZERO;
        }
        let n = (self.q - 1) as u64;
        let k = ((self.log[a.0 as usize] as u64) * (k % n)) % n;
        Fe(self.exp[k as usize])
    }

    /// Single entry point for the binary operations.
    pub fn arith(&self, a: Fe, b: Fe, op: FieldOp) -> Result<Fe> {
        match op {
            FieldOp::Add => Ok(self.add(a, b)),
            FieldOp::Sub => Ok(self.sub(a, b)),
            FieldOp::Mul => Ok(self.mul(a, b)),
            FieldOp::Div => self.div(a, b),
            FieldOp::Pow => Ok(self.pow(a, b.0 as u64)),
        }
    }

    pub fn square(&self, a: Fe) -> Fe {
        self.mul(a, a)
    }

    /// Evaluates `Σ coeffs[i] x^i`.
    pub fn eval(&self, coeffs: &[Fe], x: Fe) -> Fe {
        coeffs
            .iter()
            .rev()
            .fold(Fe::ZERO, |acc, &c| self.add(self.mul(acc, x), c))
    }

    /// Product by schoolbook polynomial multiplication modulo the defining
    /// polynomial. Independent of the log tables; used to build them.
    pub fn mul_reference(&self, a: Fe, b: Fe) -> Fe {
        let prod = poly::mul(&self.coeffs(a), &self.coeffs(b), self.p);
        let rem = poly::rem(&prod, &self.modulus, self.p);
        let mut coeffs = vec![0; self.e as usize];
        coeffs[..rem.len()].copy_from_slice(&rem);
        self.pack_coeffs(&coeffs)
    }

    fn pow_reference(&self, a: Fe, mut k: u64) -> Fe {
        let (mut base, mut acc) = (a, Fe::ONE);
        while k > 0 {
            if k & 1 == 1 {
                acc = self.mul_reference(acc, base);
            }
            base = self.mul_reference(base, base);
            k >>= 1;
        }
        acc
    }

    fn search_primitive(&self) -> Fe {
        let n = (self.q - 1) as u64;
        if n == 1 {
            return Fe::ONE;
        }
        let factors = prime_factors(n);
        (1..self.q)
            .map(Fe)
            .find(|&a| {
                factors
                    .iter()
                    .all(|&r| self.pow_reference(a, n / r) != Fe::ONE)
            })
            .expect("the multiplicative group of a finite field is cyclic")
    }

    fn build_tables(&mut self) {
        let n = (self.q - 1) as usize;
        self.exp = Vec::with_capacity(n);
        self.log = vec![0; self.q as usize];
        let mut x = Fe::ONE;
        for k in 0..n {
            self.exp.push(x.0);
            self.log[x.0 as usize] = k as u32;
            x = self.mul_reference(x, self.generator);
        }
        debug_assert_eq!(x, Fe::ONE);
    }

    /// The absolute trace `F_q → F_p`, returned as an integer in `[0, p)`.
    pub fn trace(&self, a: Fe) -> u32 {
        let mut x = a.0;
        let mut acc = 0u64;
        for &t in &self.basis_trace {
            acc += (x % self.p) as u64 * t as u64;
            x /= self.p;
        }
        (acc % self.p as u64) as u32
    }

    /// The trace as the Frobenius sum `a + a^p + … + a^{p^{e-1}}`.
    pub fn trace_frobenius(&self, a: Fe) -> u32 {
        let mut acc = Fe::ZERO;
        let mut conj = a;
        for _ in 0..self.e {
            acc = self.add(acc, conj);
            conj = self.pow_reference(conj, self.p as u64);
        }
        self.prime_value(acc)
            .expect("Frobenius sums lie in the prime subfield")
    }

    /// Smallest element of multiplicative order `q - 1`. Returns `1` for `q = 2`.
    pub fn primitive_element(&self) -> Fe {
        self.generator
    }

    /// Multiplicative order of a nonzero element.
    pub fn multiplicative_order(&self, a: Fe) -> Result<u64> {
        if a.is_zero() {
            return Err(Error::ZeroParameter("a"));
        }
        let n = (self.q - 1) as u64;
        let k = self.log[a.0 as usize] as u64;
        Ok(n / gcd(n, k))
    }

    /// The unique cube root of `a`; requires `q ≢ 1 (mod 3)`.
    pub fn cube_root(&self, a: Fe) -> Result<Fe> {
        let q = self.q as u64;
        if q % 3 == 1 {
            return Err(Error::CubingNotBijective { q });
        }
        let exponent = if self.p == 3 { q / 3 } else { (2 * q - 1) / 3 };
        Ok(self.pow(a, exponent))
    }

    /// `Σ_{a∈F} a^k` by direct summation, as an integer in `[0, p)`.
    pub fn moment_sum(&self, k: u64) -> u32 {
        let total = self
            .elements()
            .fold(Fe::ZERO, |acc, a| self.add(acc, self.pow(a, k)));
        self.prime_value(total)
            .expect("power sums over F lie in the prime subfield")
    }

    fn distinct_roots(&self, coeffs: &[Fe], skip_zero: bool) -> usize {
        let start = if skip_zero { 1 } else { 0 };
        (start..self.q)
            .filter(|&x| self.eval(coeffs, Fe(x)).is_zero())
            .count()
    }

    /// Counts the nonzero polynomials `a2 t² + a1 t + a0` by number of distinct
    /// roots in `F`.
    pub fn quadratic_root_profile(&self) -> RootProfile {
        let mut profile = RootProfile::default();
        for a2 in self.elements() {
            for a1 in self.elements() {
                for a0 in self.elements() {
                    if a0.is_zero() && a1.is_zero() && a2.is_zero() {
                        continue;
                    }
                    profile.record(self.distinct_roots(&[a0, a1, a2], false));
                }
            }
        }
        profile
    }

    /// Counts the nonzero polynomials `a3 t³ + a1 t + a0` by number of distinct
    /// nonzero roots. Characteristic 2 only.
    pub fn cubic_root_profile_even(&self) -> Result<RootProfile> {
        if self.p != 2 {
            return Err(Error::WrongParity {
                q: self.q as u64,
                expected: "even",
            });
        }
        let mut profile = RootProfile::default();
        for a3 in self.elements() {
            for a1 in self.elements() {
                for a0 in self.elements() {
                    if a0.is_zero() && a1.is_zero() && a3.is_zero() {
                        continue;
                    }
                    profile.record(self.distinct_roots(&[a0, a1, Fe::ZERO, a3], true));
                }
            }
        }
        Ok(profile)
    }
}

/// Number of polynomials `n_k` having exactly `k` distinct roots.
#[derive(Clone, Debug, Default, PartialEq, Eq)]
pub struct RootProfile {
    counts: BTreeMap<usize, u64>,
}

impl RootProfile {
    fn record(&mut self, k: usize) {
        *self.counts.entry(k).or_default() += 1;
    }

    pub fn from_counts(counts: impl IntoIterator<Item = (usize, u64)>) -> Self {
        RootProfile {
            counts: counts.into_iter().filter(|&(_, n)| n > 0).collect(),
        }
    }

    pub fn get(&self, k: usize) -> u64 {
        self.counts.get(&k).copied().unwrap_or(0)
    }

    pub fn total(&self) -> u64 {
        self.counts.values().sum()
    }

    pub fn iter(&self) -> impl Iterator<Item = (usize, u64)> + '_ {
        self.counts.iter().map(|(&k, &n)| (k, n))
    }

    /// Closed form for quadratics: `n_0 = (q-1)(q²-q+2)/2`, `n_1 = 2q(q-1)`,
    /// `n_2 = q(q-1)²/2`.
    pub fn quadratic_formula(q: u64) -> Self {
        Self::from_counts([
            (0, (q - 1) * (q * q - q + 2) / 2),
            (1, 2 * q * (q - 1)),
            (2, q * (q - 1) * (q - 1) / 2),
        ])
    }

    /// Closed form for `a3 t³ + a1 t + a0` over even `q`, counting nonzero
    /// roots: `n_0 = (q-1)(q²+8)/3`, `n_1 = (q-1)²(q+4)/2`,
    /// `n_3 = (q-1)²(q-2)/6`.
    pub fn cubic_even_formula(q: u64) -> Self {
        let m = (q - 1) * (q - 1);
        Self::from_counts([
            (0, (q - 1) * (q * q + 8) / 3),
            (1, m * (q + 4) / 2),
            (3, m * (q - 2) / 6),
        ])
    }
}

pub fn is_prime(n: u64) -> bool {
    if n < 2 {
        return false;
    }
    let mut d = 2;
    while d * d <= n {
        if n.is_multiple_of(d) {
            return false;
        }
        d += 1;
    }
    true
}

/// Distinct prime divisors in increasing order.
pub fn prime_factors(mut n: u64) -> Vec<u64> {
    let mut out = Vec::new();
    let mut d = 2;
    while d * d <= n {
        if n.is_multiple_of(d) {
            out.push(d);
            while n.is_multiple_of(d) {
                n /= d;
            }
        }
        d += 1;
    }
    if n > 1 {
        out.push(n);
    }
    out
}

/// `Some((p, e))` when `q = p^e` with `p` prime and `e >= 1`.
pub fn prime_power(q: u64) -> Option<(u64, u32)> {
    let factors = prime_factors(q);
    if factors.len() != 1 {
        return None;
    }
    let p = factors[0];
    let mut e = 0;
    let mut x = q;
    while x > 1 {
        x /= p;
        e += 1;
    }
    Some((p, e))
}

fn gcd(a: u64, b: u64) -> u64 {
    if b == 0 {
        a
    } else {
        gcd(b, a % b)
    }
}

fn smallest_irreducible(p: u32, e: u32) -> Vec<u32> {
    let count = (p as u64).pow(e);
    (0..count)
        .map(|n| {
            let mut coeffs: Vec<u32> = (0..e)
                .map(|i| ((n / (p as u64).pow(e - 1 - i)) % p as u64) as u32)
                .collect();
            coeffs.push(1);
            coeffs
        })
        .find(|f| poly::is_irreducible(f, p))
        .expect("irreducible polynomials exist in every degree")
}

/// Dense polynomials over `F_p`, low degree first, without trailing zeros.
pub(crate) mod poly {
    use alloc::vec;
    use alloc::vec::Vec;

    use super::prime_factors;

    fn trim(mut f: Vec<u32>) -> Vec<u32> {
        while f.last() == Some(&0) {
            f.pop();
        }
        f
    }

    fn inv_mod(a: u32, p: u32) -> u32 {
        let (mut acc, mut base, mut k) = (1u64, a as u64 % p as u64, p as u64 - 2);
        while k > 0 {
            if k & 1 == 1 {
                acc = acc * base % p as u64;
            }
            base = base * base % p as u64;
            k >>= 1;
        }
        acc as u32
    }

    pub fn mul(f: &[u32], g: &[u32], p: u32) -> Vec<u32> {
        if f.is_empty() || g.is_empty() {
            return Vec::new();
        }
        let mut out = vec![0u64; f.len() + g.len() - 1];
        for (i, &a) in f.iter().enumerate() {
            for (j, &b) in g.iter().enumerate() {
                out[i + j] = (out[i + j] + a as u64 * b as u64) % p as u64;
            }
        }
        trim(out.into_iter().map(|c| c as u32).collect())
    }

    pub fn sub(f: &[u32], g: &[u32], p: u32) -> Vec<u32> {
        let n = f.len().max(g.len());
        trim(
            (0..n)
                .map(|i| {
                    let a = f.get(i).copied().unwrap_or(0);
                    let b = g.get(i).copied().unwrap_or(0);
                    (a + p - b) % p
                })
                .collect(),
        )
    }

    pub fn rem(f: &[u32], m: &[u32], p: u32) -> Vec<u32> {
        let m = trim(m.to_vec());
        let mut r = trim(f.to_vec());
        let lead_inv = inv_mod(*m.last().expect("nonzero divisor"), p) as u64;
        while r.len() >= m.len() {
            let shift = r.len() - m.len();
            let c = (*r.last().unwrap() as u64 * lead_inv) % p as u64;
            for (i, &mi) in m.iter().enumerate() {
                let sub = (c * mi as u64) % p as u64;
                r[shift + i] = ((r[shift + i] as u64 + p as u64 - sub) % p as u64) as u32;
            }
            r = trim(r);
        }
        r
    }

    pub fn gcd(f: &[u32], g: &[u32], p: u32) -> Vec<u32> {
        let (mut a, mut b) = (trim(f.to_vec()), trim(g.to_vec()));
        while !b.is_empty() {
            let r = rem(&a, &b, p);
            a = b;
            b = r;
        }
        a
    }

    fn mul_mod(f: &[u32], g: &[u32], m: &[u32], p: u32) -> Vec<u32> {
        rem(&mul(f, g, p), m, p)
    }

    fn pow_mod(f: &[u32], mut k: u64, m: &[u32], p: u32) -> Vec<u32> {
        let mut acc = vec![1];
        let mut base = rem(f, m, p);
        while k > 0 {
            if k & 1 == 1 {
                acc = mul_mod(&acc, &base, m, p);
            }
            base = mul_mod(&base, &base, m, p);
            k >>= 1;
        }
        rem(&acc, m, p)
    }

    /// Rabin's test: a monic `f` of degree `n` is irreducible iff
    /// `x^{p^n} ≡ x (mod f)` and `gcd(x^{p^{n/r}} - x, f) = 1` for every prime
    /// `r | n`.
    pub fn is_irreducible(f: &[u32], p: u32) -> bool {
        let n = f.len() - 1;
        if n == 1 {
            return true;
        }
        let x = vec![0, 1];
        let frob_power = |k: usize| {
            let mut g = x.clone();
            for _ in 0..k {
                g = pow_mod(&g, p as u64, f, p);
            }
            g
        };
        if frob_power(n) != rem(&x, f, p) {
            return false;
        }
        prime_factors(n as u64).into_iter().all(|r| {
            let h = sub(&frob_power(n / r as usize), &x, p);
            gcd(&h, f, p).len() == 1
        })
    }
}
