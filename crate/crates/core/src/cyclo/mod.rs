//! Cyclotomic integers in `Z[ζ_n]` for `n` a prime or `n = 9`.
//!
//! Values are kept in the power basis `1, ζ, …, ζ^{φ(n)-1}`, reduced modulo
//! the cyclotomic polynomial `Φ_n`. The reduced form is unique, so derived
//! equality is exact equality in `Z[ζ_n]`.

mod sums;

use alloc::vec;
use alloc::vec::Vec;
use core::f64::consts::TAU;
use core::ops::{Add, Mul, Neg, Sub};

use num_complex::Complex64;

use crate::ff::is_prime;
use crate::{Error, Result};

pub use sums::{
    exp_sum_cubic, exp_sum_field, exp_sum_gr, exp_sum_teichmuller_cubic, fibre_counts, weil_check,
    Cubic, WeilCheck, WEIL_SLACK,
};

/// The conductor `n` of `Z[ζ_n]`; a prime or 9.
#[derive(Clone, Copy, Debug, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct Conductor(u32);

impl Conductor {
    pub const NINE: Conductor = Conductor(9);

    pub fn new(n: u32) -> Result<Self> {
        if n == 9 || is_prime(n as u64) {
            Ok(Conductor(n))
        } else {
            Err(Error::UnsupportedConductor(n as u64))
        }
    }

    pub fn value(self) -> u32 {
        self.0
    }

    /// `φ(n)`, the length of the power basis.
    pub fn degree(self) -> usize {
        if self.0 == 9 {
            6
        } else {
            self.0 as usize - 1
        }
    }

    /// `Φ_n` coefficients, low degree first, monic.
    fn cyclotomic_poly(self) -> Vec<i64> {
        if self.0 == 9 {
            vec![1, 0, 0, 1, 0, 0, 1]
        } else {
            vec![1; self.0 as usize]
        }
    }

    /// The embedding `ζ_n ↦ e^{2πi/n}`; for `n = 9` this gives `ξ³ = ζ_3`.
    pub fn root_of_unity(self, k: u32) -> Complex64 {
        let angle = TAU * (k % self.0) as f64 / self.0 as f64;
        Complex64::new(libm::cos(angle), libm::sin(angle))
    }
}

/// An element of `Z[ζ_n]` in reduced power-basis form.
#[derive(Clone, Debug, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct CycInt {
    n: Conductor,
    coeffs: Vec<i64>,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum CycOp {
    Add,
    Sub,
    Mul,
}

impl CycInt {
    pub fn zero(n: Conductor) -> Self {
        CycInt {
            n,
            coeffs: vec![0; n.degree()],
        }
    }

    pub fn from_int(n: Conductor, k: i64) -> Self {
        let mut z = Self::zero(n);
        z.coeffs[0] = k;
        z
    }

    pub fn one(n: Conductor) -> Self {
        Self::from_int(n, 1)
    }

    /// `ζ_n^k`.
    pub fn root_power(n: Conductor, k: i64) -> Self {
        let mut counts = vec![0; n.value() as usize];
        counts[k.rem_euclid(n.value() as i64) as usize] = 1;
        Self::from_exponent_counts(n, &counts)
    }

    /// `Σ_k counts[k] ζ^k` for a length-`n` (group ring) coefficient vector.
    pub fn from_exponent_counts(n: Conductor, counts: &[i64]) -> Self {
        assert_eq!(counts.len(), n.value() as usize, "one count per power of ζ");
        let mut work = counts.to_vec();
        reduce(n, &mut work);
        work.truncate(n.degree());
        CycInt { n, coeffs: work }
    }

    /// Power-basis coefficients. Fails on the wrong length.
    pub fn from_power_basis(n: Conductor, coeffs: Vec<i64>) -> Result<Self> {
        if coeffs.len() != n.degree() {
            return Err(Error::CheckFailed(alloc::format!(
                "expected {} power-basis coefficients, got {}",
                n.degree(),
                coeffs.len()
            )));
        }
        Ok(CycInt { n, coeffs })
    }

    pub fn conductor(&self) -> Conductor {
        self.n
    }

    /// The same number in `Z[ζ_m]` via `ζ_n = ζ_m^{m/n}`; needs `n | m`.
    pub fn raise_conductor(&self, m: Conductor) -> Result<CycInt> {
        let (n, mv) = (self.n.value(), m.value());
        if mv % n != 0 {
            return Err(Error::MismatchedConductors(n as u64, mv as u64));
        }
        let mut counts = vec![0i64; mv as usize];
        for (k, &c) in self.coeffs.iter().enumerate() {
            counts[k * (mv / n) as usize] += c;
        }
        Ok(CycInt::from_exponent_counts(m, &counts))
    }

    pub fn coeffs(&self) -> &[i64] {
        &self.coeffs
    }

    pub fn is_zero(&self) -> bool {
        self.coeffs.iter().all(|&c| c == 0)
    }

    /// The rational integer this value equals, if any.
    pub fn as_integer(&self) -> Option<i64> {
        self.coeffs[1..]
            .iter()
            .all(|&c| c == 0)
            .then_some(self.coeffs[0])
    }

    fn check(&self, other: &CycInt) -> Result<()> {
        if self.n == other.n {
            Ok(())
        } else {
            Err(Error::MismatchedConductors(
                self.n.value() as u64,
                other.n.value() as u64,
            ))
        }
    }

    pub fn arith(&self, other: &CycInt, op: CycOp) -> Result<CycInt> {
        self.check(other)?;
        Ok(match op {
            CycOp::Add => self.zip_with(other, |a, b| a + b),
            CycOp::Sub => self.zip_with(other, |a, b| a - b),
            CycOp::Mul => self.mul_unchecked(other),
        })
    }

    fn zip_with(&self, other: &CycInt, f: impl Fn(i64, i64) -> i64) -> CycInt {
        CycInt {
            n: self.n,
            coeffs: self
                .coeffs
                .iter()
                .zip(&other.coeffs)
                .map(|(&a, &b)| f(a, b))
                .collect(),
        }
    }

    fn mul_unchecked(&self, other: &CycInt) -> CycInt {
        let n = self.n.value() as usize;
        let mut counts = vec![0i64; n];
        for (i, &a) in self.coeffs.iter().enumerate() {
            if a == 0 {
                continue;
            }
            for (j, &b) in other.coeffs.iter().enumerate() {
                counts[(i + j) % n] += a * b;
            }
        }
        Self::from_exponent_counts(self.n, &counts)
    }

    pub fn scale(&self, k: i64) -> CycInt {
        CycInt {
            n: self.n,
            coeffs: self.coeffs.iter().map(|&c| c * k).collect(),
        }
    }

    /// Complex conjugation `ζ ↦ ζ^{-1}`.
    pub fn conj(&self) -> CycInt {
        let n = self.n.value() as usize;
        let mut counts = vec![0i64; n];
        for (k, &c) in self.coeffs.iter().enumerate() {
            counts[(n - k) % n] += c;
        }
        Self::from_exponent_counts(self.n, &counts)
    }

    pub fn square(&self) -> CycInt {
        self.mul_unchecked(self)
    }

    /// Double-precision value under `ζ_n ↦ e^{2πi/n}`. The rounding error is
    /// at most `φ(n) · max|c_k| · 2^{-50}`.
    pub fn embed(&self) -> Complex64 {
        self.coeffs
            .iter()
            .enumerate()
            .fold(Complex64::new(0.0, 0.0), |acc, (k, &c)| {
                acc + self.n.root_of_unity(k as u32) * c as f64
            })
    }

    /// Documented bound on the rounding error of [`CycInt::embed`].
    pub fn embed_error_bound(&self) -> f64 {
        let max = self
            .coeffs
            .iter()
            .map(|c| c.unsigned_abs())
            .max()
            .unwrap_or(0);
        self.n.degree() as f64 * max.max(1) as f64 * libm::ldexp(1.0, -50)
    }

    /// Real part of the embedding; meant for values fixed by conjugation.
    pub fn to_f64(&self) -> f64 {
        self.embed().re
    }

    pub fn is_real(&self) -> bool {
        self.conj() == *self
    }
}

/// Reduces a group-ring coefficient vector modulo `Φ_n` in place; entries at
/// and above `φ(n)` end up zero.
fn reduce(n: Conductor, work: &mut [i64]) {
    let phi = n.cyclotomic_poly();
    let d = phi.len() - 1;
    for top in (d..work.len()).rev() {
        let c = work[top];
        if c == 0 {
            continue;
        }
        let shift = top - d;
        for (i, &m) in phi.iter().enumerate() {
            work[shift + i] -= c * m;
        }
    }
}

macro_rules! forward_binop {
    ($trait:ident, $method:ident, $op:expr) => {
        impl $trait<&CycInt> for &CycInt {
            type Output = CycInt;

            /// Panics if the conductors differ; use [`CycInt::arith`] to get an error instead.
            fn $method(self, rhs: &CycInt) -> CycInt {
                self.arith(rhs, $op).expect("matching conductors")
            }
        }

        impl $trait for CycInt {
            type Output = CycInt;

            fn $method(self, rhs: CycInt) -> CycInt {
                (&self).$method(&rhs)
            }
        }
    };
}

forward_binop!(Add, add, CycOp::Add);
forward_binop!(Sub, sub, CycOp::Sub);
forward_binop!(Mul, mul, CycOp::Mul);

impl Neg for &CycInt {
    type Output = CycInt;

    fn neg(self) -> CycInt {
        self.scale(-1)
    }
}

impl Neg for CycInt {
    type Output = CycInt;

    fn neg(self) -> CycInt {
        self.scale(-1)
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use proptest::prelude::*;

    fn c(n: u32) -> Conductor {
        Conductor::new(n).unwrap()
    }

    #[test]
    fn conductor_validation() {
        assert_eq!(Conductor::new(4), Err(Error::UnsupportedConductor(4)));
        assert!(Conductor::new(9).is_ok());
        assert!(Conductor::new(13).is_ok());
        assert_eq!(c(9).degree(), 6);
        assert_eq!(c(7).degree(), 6);
    }

    #[test]
    fn small_identities() {
        let n = c(5);
        let sum = (1..5).fold(CycInt::zero(n), |acc, k| acc + CycInt::root_power(n, k));
        assert_eq!(sum, CycInt::from_int(n, -1));
        assert_eq!(CycInt::root_power(n, 1).conj(), CycInt::root_power(n, 4));
        let nine = Conductor::NINE;
        assert_eq!(
            CycInt::root_power(nine, 1) * CycInt::root_power(nine, 8),
            CycInt::one(nine)
        );
        let a = CycInt::root_power(c(5), 1);
        assert!(a.arith(&CycInt::one(c(7)), CycOp::Add).is_err());
    }

    #[test]
    fn nine_reduction_matches_known_forms() {
        // ξ^8 = -ξ^5 - ξ^2 because ξ^6 + ξ^3 + 1 = 0.
        let nine = Conductor::NINE;
        let lhs = CycInt::from_exponent_counts(nine, &[1, 1, 0, 0, 0, 0, 0, 0, 1]);
        assert_eq!(lhs.coeffs(), &[1, 1, -1, 0, 0, -1]);
        let rhs = CycInt::from_exponent_counts(nine, &[1, 0, 1, 0, 0, 0, 0, 1, 0]);
        assert_eq!(rhs.coeffs(), &[1, -1, 1, 0, -1, 0]);
    }

    #[test]
    fn embeddings() {
        let three = c(3);
        let z = CycInt::from_exponent_counts(three, &[1, 1, 1]);
        assert!(z.embed().norm() < 1e-12);
        let five = c(5);
        let v = CycInt::root_power(five, 1) + CycInt::root_power(five, 4);
        assert!((v.to_f64() - 0.618_033_988_749_895).abs() < 1e-12);
        let xi3 = CycInt::root_power(Conductor::NINE, 3).embed();
        assert!((xi3 - c(3).root_of_unity(1)).norm() < 1e-12);
    }

    fn element(n: Conductor) -> impl Strategy<Value = CycInt> {
        prop::collection::vec(-20i64..20, n.degree())
            .prop_map(move |v| CycInt::from_power_basis(n, v).unwrap())
    }

    fn triple() -> impl Strategy<Value = (CycInt, CycInt, CycInt)> {
        prop::sample::select(vec![3u32, 5, 7, 9, 13]).prop_flat_map(|n| {
            let n = Conductor::new(n).unwrap();
            (element(n), element(n), element(n))
        })
    }

    proptest! {
        #[test]
        fn ring_axioms((a, b, c) in triple()) {
            prop_assert_eq!(&a * &(&b + &c), &(&a * &b) + &(&a * &c));
            prop_assert_eq!(&(&a * &b) * &c, &a * &(&b * &c));
            prop_assert_eq!((&a * &b).conj(), &a.conj() * &b.conj());
            prop_assert_eq!(a.conj().conj(), a.clone());
            let lhs = (&a * &b).embed();
            let rhs = a.embed() * b.embed();
            prop_assert!((lhs - rhs).norm() < 1e-6 * (1.0 + rhs.norm()));
            let z = (&a * &a.conj()).embed();
            prop_assert!(z.im.abs() < 1e-8 * (1.0 + z.re.abs()));
        }
    }
}
