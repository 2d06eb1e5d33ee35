//! The Galois ring `GR(9,e)`: characteristic 9, order `9^e`, residue field
//! `F_{3^e}`.
//!
//! The defining polynomial is the Hensel lift of the residue field's modulus
//! that divides `X^q - X`, so the class of `x` is itself a Teichmüller
//! element. Elements are indexed by `Σ c_i 9^i` with `c_i ∈ [0, 9)`.

use alloc::vec;
use alloc::vec::Vec;

use crate::ff::{Fe, Field, DEFAULT_MAX_ORDER};
use crate::Result;

#[derive(Clone, Copy, Debug, Default, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct RingElem(u64);

impl RingElem {
    pub const ZERO: RingElem = RingElem(0);
    pub const ONE: RingElem = RingElem(1);

    pub const fn index(self) -> u64 {
        self.0
    }
}

#[derive(Clone, Debug)]
pub struct GaloisRing9 {
    e: u32,
    residue: Field,
    /// Monic, low degree first, length `e + 1`, entries in `[0, 9)`.
    modulus: Vec<u8>,
    /// `teich[k]` is the Teichmüller representative of residue index `k`.
    teich: Vec<RingElem>,
    beta: RingElem,
}

impl GaloisRing9 {
    pub fn new(e: u32) -> Result<Self> {
        Self::with_bound(e, DEFAULT_MAX_ORDER)
    }

    /// Bounds the residue field order `q = 3^e`.
    pub fn with_bound(e: u32, bound: u64) -> Result<Self> {
        let residue = Field::with_bound(3, e, bound)?;
        let naive: Vec<u8> = residue.modulus().iter().map(|&c| c as u8).collect();
        let modulus = teichmuller_modulus(&naive, residue.order() as u64);
        debug_assert!(modulus
            .iter()
            .zip(residue.modulus())
            .all(|(&a, &b)| (a % 3) as u32 == b));
        let mut ring = GaloisRing9 {
            e,
            residue,
            modulus,
            teich: Vec::new(),
            beta: RingElem::ONE,
        };
        ring.build_teichmuller();
        Ok(ring)
    }

    fn build_teichmuller(&mut self) {
        let q = self.residue.order();
        let omega = self.residue.primitive_element();
        self.beta = self.pow(self.lift_naive(omega), q as u64);
        let mut teich = vec![RingElem::ZERO; q as usize];
        let mut x = RingElem::ONE;
        for _ in 0..q - 1 {
            teich[self.reduce(x).index() as usize] = x;
            x = self.mul(x, self.beta);
        }
        debug_assert_eq!(x, RingElem::ONE);
        self.teich = teich;
    }

    pub fn exponent(&self) -> u32 {
        self.e
    }

    /// `q = 3^e`, the order of the residue field.
    pub fn q(&self) -> u32 {
        self.residue.order()
    }

    pub fn residue_field(&self) -> &Field {
        &self.residue
    }

    pub fn modulus(&self) -> &[u8] {
        &self.modulus
    }

    /// Generator of the order-`(q-1)` subgroup of Teichmüller units.
    pub fn beta(&self) -> RingElem {
        self.beta
    }

    /// Teichmüller representatives, ordered by residue index.
    pub fn teichmuller(&self) -> &[RingElem] {
        &self.teich
    }

    pub fn teichmuller_lift(&self, a: Fe) -> RingElem {
        self.teich[a.index() as usize]
    }

    pub fn elements(&self) -> impl Iterator<Item = RingElem> {
        (0..9u64.pow(self.e)).map(RingElem)
    }

    pub fn from_coeffs(&self, coeffs: &[u8]) -> Option<RingElem> {
        if coeffs.len() != self.e as usize || coeffs.iter().any(|&c| c >= 9) {
            return None;
        }
        Some(RingElem(
            coeffs.iter().rev().fold(0, |acc, &c| acc * 9 + c as u64),
        ))
    }

    pub fn coeffs(&self, x: RingElem) -> Vec<u8> {
        let mut n = x.0;
        (0..self.e)
            .map(|_| {
                let d = (n % 9) as u8;
                n /= 9;
                d
            })
            .collect()
    }

    fn pack(&self, coeffs: &[u8]) -> RingElem {
        RingElem(coeffs.iter().rev().fold(0, |acc, &c| acc * 9 + c as u64))
    }

    pub fn from_int(&self, n: i64) -> RingElem {
        RingElem(n.rem_euclid(9) as u64)
    }

    /// The value in `[0, 9)` when `x` lies in `Z/9Z`.
    pub fn int_value(&self, x: RingElem) -> Option<u8> {
        (x.0 < 9).then_some(x.0 as u8)
    }

    /// Reduction `R → R/3R = F_q`.
    pub fn reduce(&self, x: RingElem) -> Fe {
        let coeffs: Vec<u32> = self.coeffs(x).iter().map(|&c| (c % 3) as u32).collect();
        self.residue.from_coeffs(&coeffs).expect("digits below 3")
    }

    /// Lifts a residue by reading its coefficients in `{0, 1, 2}`.
    pub fn lift_naive(&self, a: Fe) -> RingElem {
        let coeffs: Vec<u8> = self.residue.coeffs(a).iter().map(|&c| c as u8).collect();
        self.pack(&coeffs)
    }

    pub fn add(&self, x: RingElem, y: RingElem) -> RingElem {
        let (a, b) = (self.coeffs(x), self.coeffs(y));
        let sum: Vec<u8> = a.iter().zip(&b).map(|(&s, &t)| (s + t) % 9).collect();
        self.pack(&sum)
    }

    pub fn neg(&self, x: RingElem) -> RingElem {
        let out: Vec<u8> = self.coeffs(x).iter().map(|&c| (9 - c) % 9).collect();
        self.pack(&out)
    }

    pub fn sub(&self, x: RingElem, y: RingElem) -> RingElem {
        self.add(x, self.neg(y))
    }

    pub fn scale(&self, k: i64, x: RingElem) -> RingElem {
        let k = k.rem_euclid(9) as u32;
        let out: Vec<u8> = self
            .coeffs(x)
            .iter()
            .map(|&c| ((c as u32 * k) % 9) as u8)
            .collect();
        self.pack(&out)
    }

    pub fn mul(&self, x: RingElem, y: RingElem) -> RingElem {
        let prod = poly_mul(&self.coeffs(x), &self.coeffs(y));
        self.pack(&poly_rem(prod, &self.modulus))
    }

    pub fn pow(&self, x: RingElem, mut k: u64) -> RingElem {
        let (mut base, mut acc) = (x, RingElem::ONE);
        while k > 0 {
            if k & 1 == 1 {
                acc = self.mul(acc, base);
            }
            base = self.mul(base, base);
            k >>= 1;
        }
        acc
    }

    pub fn is_unit(&self, x: RingElem) -> bool {
        !self.reduce(x).is_zero()
    }

    pub fn eval(&self, coeffs: &[RingElem], x: RingElem) -> RingElem {
        coeffs
            .iter()
            .rev()
            .fold(RingElem::ZERO, |acc, &c| self.add(self.mul(acc, x), c))
    }

    /// The unique `(x0, x1)` with `x = x0 + 3 x1` and both parts Teichmüller.
    pub fn three_adic(&self, x: RingElem) -> (RingElem, RingElem) {
        let x0 = self.teichmuller_lift(self.reduce(x));
        let diff = self.coeffs(self.sub(x, x0));
        debug_assert!(diff.iter().all(|&c| c % 3 == 0));
        let carry: Vec<u32> = diff.iter().map(|&c| (c / 3) as u32).collect();
        let x1 = self.teichmuller_lift(self.residue.from_coeffs(&carry).expect("digits below 3"));
        (x0, x1)
    }

    /// The trace `R → Z/9Z`, `tr(x0 + 3x1) = Σ_k x0^{3^k} + 3 Σ_k x1^{3^k}`.
    pub fn trace(&self, x: RingElem) -> u8 {
        let (x0, x1) = self.three_adic(x);
        let frobenius_sum = |mut t: RingElem| {
            let mut acc = RingElem::ZERO;
            for _ in 0..self.e {
                acc = self.add(acc, t);
                t = self.pow(t, 3);
            }
            acc
        };
        let total = self.add(frobenius_sum(x0), self.scale(3, frobenius_sum(x1)));
        self.int_value(total)
            .expect("the trace of a Galois ring element lies in Z/9Z")
    }
}

fn poly_mul(f: &[u8], g: &[u8]) -> Vec<u8> {
    let mut out = vec![0u32; f.len() + g.len() - 1];
    for (i, &a) in f.iter().enumerate() {
        for (j, &b) in g.iter().enumerate() {
            out[i + j] = (out[i + j] + a as u32 * b as u32) % 9;
        }
    }
    out.into_iter().map(|c| c as u8).collect()
}

/// Remainder modulo a monic polynomial; the result has length `deg(m)`.
fn poly_rem(mut f: Vec<u8>, m: &[u8]) -> Vec<u8> {
    let d = m.len() - 1;
    while f.len() > d {
        let c = f.pop().unwrap() as u32;
        let shift = f.len() - d;
        for i in 0..d {
            let sub = (c * m[i] as u32) % 9;
            f[shift + i] = ((f[shift + i] as u32 + 9 - sub) % 9) as u8;
        }
    }
    f.resize(d, 0);
    f
}

/// Hensel lift of a monic `m̄` over `F_3` (given with digits in `{0,1,2}`)
/// to the monic `m` over `Z/9Z` with `m ≡ m̄ (mod 3)` and `m | X^q - X`.
///
/// In `Z/9[x]/(m̄)` the element `θ = x^q` is the Teichmüller lift of `x`; its
/// conjugates are `θ^{3^k}` and `m = Π_k (X - θ^{3^k})`.
fn teichmuller_modulus(naive: &[u8], q: u64) -> Vec<u8> {
    let e = naive.len() - 1;
    let reduce = |f: Vec<u8>| poly_rem(f, naive);
    let mul = |a: &[u8], b: &[u8]| reduce(poly_mul(a, b));
    let pow = |x: &[u8], mut k: u64| {
        let mut acc = reduce(vec![1]);
        let mut base = x.to_vec();
        while k > 0 {
            if k & 1 == 1 {
                acc = mul(&acc, &base);
            }
            base = mul(&base, &base);
            k >>= 1;
        }
        acc
    };
    let x = reduce(vec![0, 1]);
    let theta = pow(&x, q);
    // Polynomial in X with coefficients in Z/9[x]/(m̄), low degree first.
    let mut product: Vec<Vec<u8>> = vec![reduce(vec![1])];
    let mut root = theta;
    for _ in 0..e {
        let neg_root: Vec<u8> = root.iter().map(|&c| (9 - c) % 9).collect();
        let mut next = vec![vec![0u8; e]; product.len() + 1];
        for (i, coeff) in product.iter().enumerate() {
            for (k, &c) in coeff.iter().enumerate() {
                next[i + 1][k] = (next[i + 1][k] + c) % 9;
            }
            let scaled = mul(coeff, &neg_root);
            for (k, &c) in scaled.iter().enumerate() {
                next[i][k] = (next[i][k] + c) % 9;
            }
        }
        product = next;
        root = pow(&root, 3);
    }
    product
        .into_iter()
        .map(|coeff| {
            assert!(
                coeff[1..].iter().all(|&c| c == 0),
                "conjugate product must have coefficients in Z/9Z"
            );
            coeff[0]
        })
        .collect()
}

#[cfg(test)]
mod tests {
    use super::*;
    use std::collections::HashSet;

    #[test]
    fn z9_case() {
        let ring = GaloisRing9::new(1).unwrap();
        assert_eq!(ring.modulus(), &[0, 1]);
        let teich: Vec<u64> = ring.teichmuller().iter().map(|t| t.index()).collect();
        assert_eq!(teich, [0, 1, 8]);
        assert_eq!(ring.beta(), RingElem(8));
        assert_eq!(ring.mul(ring.beta(), ring.beta()), RingElem::ONE);
    }

    #[test]
    fn teichmuller_property() {
        for e in 1..=4 {
            let ring = GaloisRing9::new(e).unwrap();
            let q = ring.q() as u64;
            assert_eq!(ring.teichmuller().len() as u64, q);
            let distinct: HashSet<_> = ring.teichmuller().iter().collect();
            assert_eq!(distinct.len() as u64, q);
            for (k, &t) in ring.teichmuller().iter().enumerate() {
                assert_eq!(ring.pow(t, q), t);
                assert_eq!(ring.reduce(t).index() as usize, k);
            }
            assert_eq!(ring.pow(ring.beta(), q - 1), RingElem::ONE);
            // x itself is Teichmüller once the modulus is Hensel lifted.
            if e > 1 {
                let mut x = vec![0u8; e as usize];
                x[1] = 1;
                let x = ring.from_coeffs(&x).unwrap();
                assert_eq!(ring.pow(x, q), x);
            }
            for (a, b) in ring.modulus().iter().zip(ring.residue_field().modulus()) {
                assert_eq!((a % 3) as u32, *b);
            }
        }
    }

    #[test]
    fn three_adic_examples() {
        let ring = GaloisRing9::new(1).unwrap();
        assert_eq!(ring.three_adic(RingElem(5)), (RingElem(8), RingElem(8)));
        assert_eq!(ring.three_adic(RingElem(0)), (RingElem(0), RingElem(0)));
        assert_eq!(ring.three_adic(RingElem(1)), (RingElem(1), RingElem(0)));
    }

    #[test]
    fn three_adic_matches_exhaustive_search() {
        for e in 1..=2 {
            let ring = GaloisRing9::new(e).unwrap();
            let teich = ring.teichmuller();
            for x in ring.elements() {
                let found: Vec<_> = teich
                    .iter()
                    .flat_map(|&a| teich.iter().map(move |&b| (a, b)))
                    .filter(|&(a, b)| ring.add(a, ring.scale(3, b)) == x)
                    .collect();
                assert_eq!(found, [ring.three_adic(x)]);
            }
        }
    }

    #[test]
    fn trace_examples_and_properties() {
        let z9 = GaloisRing9::new(1).unwrap();
        assert_eq!(z9.trace(RingElem(5)), 5);
        let ring = GaloisRing9::new(2).unwrap();
        assert_eq!(ring.trace(RingElem::ONE), 2);
        let field = ring.residue_field();
        let elements: Vec<_> = ring.elements().collect();
        for &x in &elements {
            assert_eq!((ring.trace(x) % 3) as u32, field.trace(ring.reduce(x)));
            let (x0, x1) = ring.three_adic(x);
            let frobenius = ring.add(ring.pow(x0, 3), ring.scale(3, ring.pow(x1, 3)));
            assert_eq!(ring.trace(frobenius), ring.trace(x));
            for &y in &elements {
                assert_eq!(
                    ring.trace(ring.add(x, y)) as u32,
                    (ring.trace(x) as u32 + ring.trace(y) as u32) % 9
                );
            }
        }
    }

    #[test]
    fn zero_divisors_are_the_maximal_ideal() {
        for e in 1..=2 {
            let ring = GaloisRing9::new(e).unwrap();
            let elements: Vec<_> = ring.elements().collect();
            for &x in &elements {
                let zero_divisor = x != RingElem::ZERO
                    && elements
                        .iter()
                        .any(|&y| y != RingElem::ZERO && ring.mul(x, y) == RingElem::ZERO);
                let in_ideal = x != RingElem::ZERO && !ring.is_unit(x);
                assert_eq!(zero_divisor, in_ideal);
            }
        }
    }
}
