//! Closed-form spectra of `Γ(4,q)` as exact multisets, the lift to
//! `D(4,q)`, and the prime-field representative and coincidence machinery.

use alloc::collections::BTreeMap;
use alloc::format;
use alloc::string::String;
use alloc::vec;
use alloc::vec::Vec;

use crate::cyclo::{
    exp_sum_cubic, exp_sum_teichmuller_cubic, weil_check, Conductor, Cubic, CycInt,
};
use crate::ff::{Fe, Field};
use crate::gr9::GaloisRing9;
use crate::graphs::GraphKind;
use crate::reps::CubicLabel;
use crate::{Error, Result};

/// An exact real eigenvalue.
#[derive(Clone, Debug, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub enum ExactValue {
    Int(i64),
    /// `sign · √radicand` with `radicand` positive and not a square.
    Sqrt {
        negative: bool,
        radicand: i64,
    },
    /// A real cyclotomic integer that is not rational.
    Cyc(CycInt),
}

impl ExactValue {
    /// Normalizes a cyclotomic value to `Int` when it is rational.
    pub fn from_cyc(x: CycInt) -> Self {
        match x.as_integer() {
            Some(k) => ExactValue::Int(k),
            None => ExactValue::Cyc(x),
        }
    }

    /// `±√r`, collapsing perfect squares to integers.
    pub fn signed_sqrt(negative: bool, r: i64) -> Result<Self> {
        if r < 0 {
            return Err(Error::NegativeRadicand(format!("{r}")));
        }
        let s = isqrt(r);
        Ok(if s * s == r {
            ExactValue::Int(if negative { -s } else { s })
        } else {
            ExactValue::Sqrt {
                negative,
                radicand: r,
            }
        })
    }

    pub fn approx(&self) -> f64 {
        match self {
            ExactValue::Int(k) => *k as f64,
            ExactValue::Sqrt { negative, radicand } => {
                let r = libm::sqrt(*radicand as f64);
                if *negative {
                    -r
                } else {
                    r
                }
            }
            ExactValue::Cyc(x) => x.to_f64(),
        }
    }

    pub fn as_integer(&self) -> Option<i64> {
        match self {
            ExactValue::Int(k) => Some(*k),
            _ => None,
        }
    }
}

fn isqrt(r: i64) -> i64 {
    let mut s = libm::sqrt(r as f64) as i64;
    while s * s > r {
        s -= 1;
    }
    while (s + 1) * (s + 1) <= r {
        s += 1;
    }
    s
}

/// How a cyclotomic entry relates to its exponential sum `ε`.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum EpsForm {
    /// `ε² - q`, an eigenvalue of `Γ(4,q)`.
    SquareMinusQ,
    /// `+ε`, an eigenvalue of `D(4,q)`.
    Plus,
    /// `-ε`, an eigenvalue of `D(4,q)`.
    Minus,
}

/// The cubics whose exponential sums produced an entry.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Witness {
    pub eps: CycInt,
    pub form: EpsForm,
    pub labels: Vec<CubicLabel>,
}

#[derive(Clone, Debug, PartialEq)]
pub struct SpectrumEntry {
    pub value: ExactValue,
    pub approx: f64,
    pub multiplicity: u64,
    pub witness: Option<Witness>,
}

impl SpectrumEntry {
    /// Human-readable exact expression.
    pub fn expression(&self) -> String {
        match (&self.value, &self.witness) {
            (ExactValue::Int(k), _) => format!("{k}"),
            (ExactValue::Sqrt { negative, radicand }, _) => {
                format!("{}sqrt({radicand})", if *negative { "-" } else { "" })
            }
            (ExactValue::Cyc(_), Some(w)) => String::from(match w.form {
                EpsForm::SquareMinusQ => "eps^2 - q",
                EpsForm::Plus => "eps",
                EpsForm::Minus => "-eps",
            }),
            (ExactValue::Cyc(x), None) => format!("{:?}", x.coeffs()),
        }
    }
}

/// Exact eigenvalue multiset of `Γ(4,q)` or `D(4,q)`, largest value first.
#[derive(Clone, Debug, PartialEq)]
pub struct SpectrumMultiset {
    pub graph: GraphKind,
    pub q: u64,
    pub entries: Vec<SpectrumEntry>,
}

impl SpectrumMultiset {
    pub fn total(&self) -> u64 {
        self.entries.iter().map(|e| e.multiplicity).sum()
    }

    /// `q⁴` for `Γ(4,q)`, `2q⁴` for `D(4,q)`.
    pub fn expected_total(&self) -> u64 {
        let n = self.q.pow(4);
        if self.graph == GraphKind::D4 {
            2 * n
        } else {
            n
        }
    }

    pub fn distinct_count(&self) -> usize {
        self.entries.len()
    }

    pub fn multiplicity_of(&self, value: &ExactValue) -> u64 {
        self.entries
            .iter()
            .find(|e| e.value == *value)
            .map_or(0, |e| e.multiplicity)
    }

    pub fn multiplicity_of_int(&self, k: i64) -> u64 {
        self.multiplicity_of(&ExactValue::Int(k))
    }

    /// Every eigenvalue repeated by multiplicity, ascending.
    pub fn expanded(&self) -> Vec<f64> {
        let mut out = Vec::with_capacity(self.total() as usize);
        for e in self.entries.iter().rev() {
            out.extend(core::iter::repeat_n(e.approx, e.multiplicity as usize));
        }
        out
    }

    /// `Σ m λ^k` in floating point.
    pub fn moment(&self, k: i32) -> f64 {
        self.entries
            .iter()
            .map(|e| e.multiplicity as f64 * libm::pow(e.approx, k as f64))
            .sum()
    }

    pub fn check_total(&self) -> Result<()> {
        if self.total() != self.expected_total() {
            return Err(Error::CheckFailed(format!(
                "q = {}: multiplicities total {}, expected {}",
                self.q,
                self.total(),
                self.expected_total()
            )));
        }
        Ok(())
    }

    /// The exponential sums behind the entries.
    pub fn epsilons(&self) -> impl Iterator<Item = &CycInt> {
        self.entries
            .iter()
            .filter_map(|e| e.witness.as_ref().map(|w| &w.eps))
    }

    /// Largest `|ε|` over all witnesses compared against `2√q`.
    pub fn weil_envelope_holds(&self) -> bool {
        self.epsilons()
            .all(|eps| weil_check(eps, self.q, 3).is_ok_and(|c| c.holds))
    }
}

/// Accumulates entries, merging exactly equal values.
#[derive(Clone, Debug)]
pub struct SpectrumBuilder {
    graph: GraphKind,
    q: u64,
    entries: Vec<SpectrumEntry>,
    index: BTreeMap<ExactValue, usize>,
}

impl SpectrumBuilder {
    pub fn new(graph: GraphKind, q: u64) -> Self {
        SpectrumBuilder {
            graph,
            q,
            entries: Vec::new(),
            index: BTreeMap::new(),
        }
    }

    pub fn add_int(&mut self, k: i64, multiplicity: u64) -> &mut Self {
        self.add(ExactValue::Int(k), multiplicity, None)
    }

    pub fn add(
        &mut self,
        value: ExactValue,
        multiplicity: u64,
        witness: Option<Witness>,
    ) -> &mut Self {
        if multiplicity == 0 {
            return self;
        }
        match self.index.get(&value) {
            Some(&i) => {
                let entry = &mut self.entries[i];
                entry.multiplicity += multiplicity;
                match (&mut entry.witness, witness) {
                    (Some(old), Some(new)) => old.labels.extend(new.labels),
                    (slot @ None, Some(new)) => *slot = Some(new),
                    _ => {}
                }
            }
            None => {
                self.index.insert(value.clone(), self.entries.len());
                self.entries.push(SpectrumEntry {
                    approx: value.approx(),
                    value,
                    multiplicity,
                    witness,
                });
            }
        }
        self
    }

    /// Adds `ε² - q` for the cubic `label`.
    pub fn add_epsilon(&mut self, label: CubicLabel, eps: CycInt, multiplicity: u64) -> &mut Self {
        let value = &eps.square() - &CycInt::from_int(eps.conductor(), self.q as i64);
        let witness = Witness {
            eps,
            form: EpsForm::SquareMinusQ,
            labels: vec![label],
        };
        self.add(ExactValue::from_cyc(value), multiplicity, Some(witness))
    }

    pub fn finish(self) -> SpectrumMultiset {
        let mut entries = self.entries;
        entries.sort_by(|a, b| b.approx.total_cmp(&a.approx));
        SpectrumMultiset {
            graph: self.graph,
            q: self.q,
            entries,
        }
    }
}

fn require_parity(field: &Field, even: bool) -> Result<()> {
    if (field.characteristic() == 2) != even {
        return Err(Error::WrongParity {
            q: field.order() as u64,
            expected: if even { "even" } else { "odd" },
        });
    }
    Ok(())
}

/// Exponents of the even-`q` characteristic polynomial of `Γ(4,q)` as
/// `(value, multiplicity)` pairs, counted from the character sums.
///
/// The all-zero `(β,γ,η)` block contributes `(x+q)^{q-1}`, so the `x` and
/// `x+q` exponents are `(q-1)(q³+8q)/3` and `(q-1)(3q(q-1)(q+2)+8)/8`.
pub fn even_exponents(q: u64) -> [(i64, u64); 5] {
    let qi = q as i64;
    [
        (qi * (qi - 1), 1),
        (3 * qi, q * (q - 1) * (q - 1) * (q - 2) / 24),
        (qi, q * (q - 1) * (q - 1) * (q + 4) / 4),
        (0, (q - 1) * (q * q * q + 8 * q) / 3),
        (-qi, (q - 1) * (3 * q * (q - 1) * (q + 2) + 8) / 8),
    ]
}

/// A defective variant of [`even_exponents`] that drops the `(x+q)^{q-1}`
/// block into the `x` exponent. The degree is still `q⁴` but the trace is
/// `q(q-1)`, so only a moment or oracle check can reject it.
pub fn even_exponents_defective(q: u64) -> [(i64, u64); 5] {
    let qi = q as i64;
    [
        (qi * (qi - 1), 1),
        (3 * qi, q * (q - 1) * (q - 1) * (q - 2) / 24),
        (qi, q * (q - 1) * (q - 1) * (q + 4) / 4),
        (0, (q - 1) * (q * q * q + 8 * q + 3) / 3),
        (-qi, 3 * q * (q - 1) * (q - 1) * (q + 2) / 8),
    ]
}

fn from_exponents(q: u64, exps: &[(i64, u64)]) -> SpectrumMultiset {
    let mut b = SpectrumBuilder::new(GraphKind::Gamma4, q);
    for &(value, m) in exps {
        b.add_int(value, m);
    }
    b.finish()
}

pub fn spectrum_even(field: &Field) -> Result<SpectrumMultiset> {
    require_parity(field, true)?;
    let q = field.order() as u64;
    let s = from_exponents(q, &even_exponents(q));
    s.check_total()?;
    Ok(s)
}

pub fn spectrum_even_defective(field: &Field) -> Result<SpectrumMultiset> {
    require_parity(field, true)?;
    let q = field.order() as u64;
    Ok(from_exponents(q, &even_exponents_defective(q)))
}

fn odd_base(q: u64, minus_q: u64) -> SpectrumBuilder {
    let qi = q as i64;
    let mut b = SpectrumBuilder::new(GraphKind::Gamma4, q);
    b.add_int(qi * (qi - 1), 1)
        .add_int(qi, q * (q - 1) * (q - 1))
        .add_int(0, 3 * q * (q - 1))
        .add_int(-qi, minus_q);
    b
}

/// `q ≡ 2 mod 3` assembly: `(x+q)^{(q-1)(2q²-2q+1)}` (absorbing `c = 0`)
/// times `ε_{t³+ct}² - q` for each `c ≠ 0` with the given per-class exponent.
///
/// The correct exponent is `q(q-1)²`; passing `q(q-1)` gives a multiset
/// whose degree falls short of `q⁴`.
pub fn spectrum_with_class_exponent(field: &Field, per_class: u64) -> Result<SpectrumMultiset> {
    require_parity(field, false)?;
    let q = field.order() as u64;
    if q % 3 != 2 {
        return Err(Error::CheckFailed(format!("q = {q} is not 2 mod 3")));
    }
    let mut b = odd_base(q, (q - 1) * (2 * q * q - 2 * q + 1));
    for c in field.nonzero_elements() {
        let f = Cubic::monic(c);
        b.add_epsilon(CubicLabel::Field(f), exp_sum_cubic(field, f), per_class);
    }
    Ok(b.finish())
}

/// Closed-form spectrum of `Γ(4,q)` for odd `q`.
pub fn spectrum_odd(field: &Field) -> Result<SpectrumMultiset> {
    require_parity(field, false)?;
    let q = field.order() as u64;
    let s = if field.characteristic() == 3 {
        let ring = GaloisRing9::new(field.degree())?;
        let mut b = odd_base(q, (q - 1) * (q * q - q + 1));
        for c in ring.residue_field().elements() {
            b.add_epsilon(
                CubicLabel::Teichmuller(c),
                exp_sum_teichmuller_cubic(&ring, c),
                q * (q - 1) * (q - 1),
            );
        }
        b.finish()
    } else if q % 3 == 2 {
        spectrum_with_class_exponent(field, q * (q - 1) * (q - 1))?
    } else {
        let mut b = odd_base(q, (q - 1) * (q * q - q + 1));
        for a in field.nonzero_elements() {
            for c in field.elements() {
                let f = Cubic::new(a, c);
                b.add_epsilon(CubicLabel::Field(f), exp_sum_cubic(field, f), q * (q - 1));
            }
        }
        b.finish()
    };
    s.check_total()?;
    Ok(s)
}

/// Closed-form spectrum for either parity.
pub fn spectrum(field: &Field) -> Result<SpectrumMultiset> {
    if field.characteristic() == 2 {
        spectrum_even(field)
    } else {
        spectrum_odd(field)
    }
}

fn require_prime_field(field: &Field) -> Result<()> {
    if !field.is_prime_field() {
        return Err(Error::NotPrimeField {
            q: field.order() as u64,
        });
    }
    Ok(())
}

/// Number of distinct roots of `φ` for an odd prime `p`.
pub fn expected_distinct_roots(p: u64) -> u64 {
    match p {
        3 => 7,
        5 => 6,
        _ if p % 3 == 2 => p + 3,
        _ => p + 6,
    }
}

/// The spectrum of `Γ(4,p)` assembled from the representative cubics, with
/// the distinct-root count checked.
pub fn spectrum_prime(field: &Field) -> Result<SpectrumMultiset> {
    require_prime_field(field)?;
    require_parity(field, false)?;
    let p = field.order() as u64;
    let s = if p == 3 {
        spectrum_odd(field)?
    } else {
        let reps = representatives(field)?;
        let m = p * (p - 1) * (p - 1);
        let mut b = odd_base(p, (p - 1) * (p * p - p + 1));
        for f in &reps.members {
            let mult = if p % 3 == 1 && f.c.is_zero() {
                m / 3
            } else {
                m
            };
            b.add_epsilon(CubicLabel::Field(*f), exp_sum_cubic(field, *f), mult);
        }
        b.finish()
    };
    s.check_total()?;
    let expected = expected_distinct_roots(p);
    if s.distinct_count() as u64 != expected {
        return Err(Error::CheckFailed(format!(
            "p = {p}: {} distinct roots, expected {expected}",
            s.distinct_count()
        )));
    }
    Ok(s)
}

/// The cubics `C̃` with one representative per exponential-sum class.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct RepresentativeSet {
    pub p: u64,
    /// A fixed non-cube; the `c = 0` classes are `ω^i t³`. Only for `p ≡ 1 mod 3`.
    pub omega: Option<Fe>,
    pub members: Vec<Cubic>,
}

impl RepresentativeSet {
    /// The member of `C̃` reached from `a t³ + c t` by `t ↦ λt`.
    pub fn representative_of(&self, field: &Field, f: Cubic) -> Result<Cubic> {
        if f.a.is_zero() {
            return Err(Error::ZeroParameter("a"));
        }
        match self.omega {
            None => {
                let lambda = field.inv(field.cube_root(f.a)?)?;
                Ok(Cubic::monic(field.mul(lambda, f.c)))
            }
            Some(omega) if f.c.is_zero() => {
                let e = (self.p - 1) / 3;
                (0..3)
                    .map(|i| field.pow(omega, i))
                    .find(|&w| field.pow(field.div(f.a, w).expect("w != 0"), e) == Fe::ONE)
                    .map(|w| Cubic::new(w, Fe::ZERO))
                    .ok_or_else(|| Error::CheckFailed(String::from("no cube class for a")))
            }
            Some(_) => {
                let c3 = field.pow(f.c, 3);
                Ok(Cubic::new(field.div(f.a, c3)?, Fe::ONE))
            }
        }
    }
}

/// Representatives for a prime field of characteristic `p ≥ 5`.
pub fn representatives(field: &Field) -> Result<RepresentativeSet> {
    require_prime_field(field)?;
    let p = field.order() as u64;
    if p.is_multiple_of(3) || p == 2 {
        return Err(Error::UnsupportedCharacteristic {
            p,
            reason: "representatives need p >= 5",
        });
    }
    if p % 3 == 2 {
        return Ok(RepresentativeSet {
            p,
            omega: None,
            members: field.elements().map(Cubic::monic).collect(),
        });
    }
    let omega = field.primitive_element();
    let mut members: Vec<Cubic> = (0..3)
        .map(|i| Cubic::new(field.pow(omega, i), Fe::ZERO))
        .collect();
    members.extend(field.nonzero_elements().map(|a| Cubic::new(a, Fe::ONE)));
    Ok(RepresentativeSet {
        p,
        omega: Some(omega),
        members,
    })
}

/// Pairs of distinct representatives with `ε_g = -ε_f ≠ 0`, which collapse
/// under squaring.
pub fn epsilon_square_coincidences(field: &Field) -> Result<Vec<(Cubic, Cubic)>> {
    let reps = representatives(field)?;
    let sums: Vec<CycInt> = reps
        .members
        .iter()
        .map(|f| exp_sum_cubic(field, *f))
        .collect();
    let mut out = Vec::new();
    for i in 0..sums.len() {
        for j in i + 1..sums.len() {
            if !sums[i].is_zero() && sums[j] == -&sums[i] {
                out.push((reps.members[i], reps.members[j]));
            }
        }
    }
    Ok(out)
}

/// `|f⁻¹(s)|` for `s = 0, …, p-1`.
pub fn fiber_profile(field: &Field, f: Cubic) -> Result<Vec<u32>> {
    require_prime_field(field)?;
    let mut counts = vec![0u32; field.order() as usize];
    for t in field.elements() {
        counts[f.eval(field, t).index() as usize] += 1;
    }
    Ok(counts)
}

/// `ε_{f(λt)} = ε_f`, checked exactly.
pub fn scale_invariance_check(field: &Field, f: Cubic, lambda: Fe) -> Result<bool> {
    if lambda.is_zero() {
        return Err(Error::ZeroParameter("lambda"));
    }
    Ok(exp_sum_cubic(field, f.rescale(field, lambda)) == exp_sum_cubic(field, f))
}

/// Eigenvalues of `D(4,q)` from those of `Γ(4,q)`: each `λ` gives `±√(q+λ)`
/// with the same multiplicity, and `λ = -q` gives `0` twice over.
pub fn lift_to_bipartite(s: &SpectrumMultiset) -> Result<SpectrumMultiset> {
    s.check_total()?;
    let q = s.q as i64;
    let mut b = SpectrumBuilder::new(GraphKind::D4, s.q);
    for e in &s.entries {
        match &e.value {
            ExactValue::Int(k) => {
                let r = q + k;
                if r < 0 {
                    return Err(Error::NegativeRadicand(format!("{r}")));
                }
                if r == 0 {
                    b.add_int(0, 2 * e.multiplicity);
                    continue;
                }
                b.add(ExactValue::signed_sqrt(false, r)?, e.multiplicity, None);
                b.add(ExactValue::signed_sqrt(true, r)?, e.multiplicity, None);
            }
            ExactValue::Sqrt { .. } => {
                return Err(Error::CheckFailed(String::from(
                    "input is not a Γ(4,q) spectrum",
                )));
            }
            ExactValue::Cyc(x) => {
                let w = e.witness.as_ref().ok_or_else(|| {
                    Error::CheckFailed(String::from("cyclotomic entry without its exponential sum"))
                })?;
                let shifted = x + &CycInt::from_int(x.conductor(), q);
                if w.eps.square() != shifted || !w.eps.is_real() {
                    return Err(Error::CheckFailed(String::from(
                        "witness does not square to q + λ",
                    )));
                }
                for (eps, form) in [(w.eps.clone(), EpsForm::Plus), (-&w.eps, EpsForm::Minus)] {
                    let witness = Witness {
                        eps: w.eps.clone(),
                        form,
                        labels: w.labels.clone(),
                    };
                    b.add(ExactValue::from_cyc(eps), e.multiplicity, Some(witness));
                }
            }
        }
    }
    let out = b.finish();
    out.check_total()?;
    Ok(out)
}

/// Integer coefficients of `Π (x - λ)` (leading coefficient first), when
/// the product is rational.
pub fn class_polynomial(values: &[CycInt]) -> Option<Vec<i64>> {
    let n: Conductor = values.first()?.conductor();
    let mut poly = vec![CycInt::one(n)];
    for v in values {
        let mut next = vec![CycInt::zero(n); poly.len() + 1];
        for (i, c) in poly.iter().enumerate() {
            next[i] = &next[i] + c;
            next[i + 1] = &next[i + 1] - &(c * v);
        }
        poly = next;
    }
    poly.iter().map(CycInt::as_integer).collect()
}

#[cfg(test)]
mod tests {
    use super::*;
    use proptest::prelude::*;

    fn f(q: u64) -> Field {
        Field::of_order(q).unwrap()
    }

    fn int_pairs(s: &SpectrumMultiset) -> Vec<(i64, u64)> {
        s.entries
            .iter()
            .filter_map(|e| e.value.as_integer().map(|k| (k, e.multiplicity)))
            .collect()
    }

    fn cyc_values(s: &SpectrumMultiset) -> Vec<(CycInt, u64)> {
        s.entries
            .iter()
            .filter_map(|e| match &e.value {
                ExactValue::Cyc(x) => Some((x.clone(), e.multiplicity)),
                _ => None,
            })
            .collect()
    }

    #[test]
    fn even_spectra() {
        let s2 = spectrum_even(&f(2)).unwrap();
        assert_eq!(int_pairs(&s2), [(2, 4), (0, 8), (-2, 4)]);
        let s4 = spectrum_even(&f(4)).unwrap();
        assert_eq!(int_pairs(&s4), [(12, 4), (4, 72), (0, 96), (-4, 84)]);
        let s8 = spectrum_even(&f(8)).unwrap();
        assert_eq!(
            int_pairs(&s8),
            [(56, 1), (24, 98), (8, 1176), (0, 1344), (-8, 1477)]
        );
        assert!(spectrum_even(&f(3)).is_err());
    }

    #[test]
    fn even_exponents_have_zero_trace() {
        for e in 1..=6 {
            let q = 1u64 << e;
            let s = spectrum_even(&f(q)).unwrap();
            assert_eq!(s.total(), q.pow(4));
            assert_eq!(s.moment(1), 0.0);
            // Σλ² = q⁴ · q(q-1), twice the edge count.
            assert_eq!(s.moment(2), (q.pow(4) * q * (q - 1)) as f64);
            let short = spectrum_even_defective(&f(q)).unwrap();
            assert_eq!(short.total(), q.pow(4));
            assert_eq!(short.moment(1), (q * (q - 1)) as f64);
        }
    }

    #[test]
    fn q3_matches_the_explicit_polynomial() {
        let s = spectrum_odd(&f(3)).unwrap();
        assert_eq!(int_pairs(&s), [(6, 1), (3, 12), (0, 18), (-3, 14)]);
        let cyc = cyc_values(&s);
        assert_eq!(cyc.len(), 3);
        assert!(cyc.iter().all(|(_, m)| *m == 12));
        let values: Vec<CycInt> = cyc.into_iter().map(|(x, _)| x).collect();
        assert_eq!(class_polynomial(&values), Some(vec![1, 0, -9, -9]));
        assert_eq!(s.distinct_count(), 7);
    }

    #[test]
    fn q5_matches_the_explicit_polynomial() {
        let s = spectrum_odd(&f(5)).unwrap();
        assert_eq!(int_pairs(&s), [(20, 1), (5, 80), (0, 220), (-5, 164)]);
        let cyc = cyc_values(&s);
        assert_eq!(cyc.len(), 2);
        assert!(cyc.iter().all(|(_, m)| *m == 80));
        let values: Vec<CycInt> = cyc.into_iter().map(|(x, _)| x).collect();
        assert_eq!(class_polynomial(&values), Some(vec![1, -5, -25]));
        let top = s
            .entries
            .iter()
            .find(|e| matches!(e.value, ExactValue::Cyc(_)))
            .unwrap();
        assert!((top.approx - (5.0 + libm::sqrt(125.0)) / 2.0).abs() < 1e-10);
    }

    #[test]
    fn short_class_exponent_fails_the_degree_count() {
        let field = f(5);
        let short = spectrum_with_class_exponent(&field, 5 * 4).unwrap();
        assert_eq!(short.total(), 385);
        assert!(short.check_total().is_err());
        let fixed = spectrum_with_class_exponent(&field, 5 * 16).unwrap();
        assert_eq!(fixed.total(), 625);
        assert!(spectrum_with_class_exponent(&f(7), 42).is_err());
    }

    #[test]
    fn odd_spectra_total_and_moments() {
        for q in [3u64, 5, 7, 9, 11, 13, 25, 27, 49] {
            let s = spectrum_odd(&f(q)).unwrap();
            assert_eq!(s.total(), q.pow(4));
            let n = q.pow(4) as f64;
            assert!(s.moment(1).abs() < 1e-6 * n, "q={q}");
            let two_e = n * (q * (q - 1)) as f64;
            assert!((s.moment(2) - two_e).abs() < 1e-9 * two_e, "q={q}");
            assert_eq!(s.entries[0].value, ExactValue::Int((q * (q - 1)) as i64));
            assert_eq!(s.entries[0].multiplicity, 1);
            assert!(s.weil_envelope_holds());
            for e in &s.entries {
                assert!((e.approx - e.value.approx()).abs() < 1e-10);
            }
        }
    }

    #[test]
    fn prime_spectra_have_the_stated_root_counts() {
        for p in [3u64, 5, 7, 11, 13, 17, 19] {
            let field = f(p);
            let s = spectrum_prime(&field).unwrap();
            assert_eq!(s.distinct_count() as u64, expected_distinct_roots(p));
            let odd = spectrum_odd(&field).unwrap();
            let key = |s: &SpectrumMultiset| -> Vec<(ExactValue, u64)> {
                let mut v: Vec<_> = s
                    .entries
                    .iter()
                    .map(|e| (e.value.clone(), e.multiplicity))
                    .collect();
                v.sort();
                v
            };
            assert_eq!(key(&s), key(&odd), "p={p}");
        }
        assert_eq!(expected_distinct_roots(7), 13);
        assert_eq!(expected_distinct_roots(11), 14);
        assert!(spectrum_prime(&f(9)).is_err());
    }

    #[test]
    fn q7_c_zero_classes() {
        let field = f(7);
        let s = spectrum_prime(&field).unwrap();
        let m = 7 * 36;
        let c_zero: Vec<_> = s
            .entries
            .iter()
            .filter(|e| {
                e.witness.as_ref().is_some_and(|w| {
                    w.labels
                        .iter()
                        .any(|l| matches!(l, CubicLabel::Field(c) if c.c.is_zero()))
                })
            })
            .collect();
        assert_eq!(c_zero.len(), 3);
        assert!(c_zero.iter().all(|e| e.multiplicity == m / 3));
    }

    #[test]
    fn representative_examples() {
        let f5 = f(5);
        let reps = representatives(&f5).unwrap();
        assert_eq!(reps.members.len(), 5);
        let cubic = Cubic::new(f5.from_int(2), Fe::ONE);
        assert_eq!(
            reps.representative_of(&f5, cubic).unwrap(),
            Cubic::monic(f5.from_int(2))
        );
        let g = Cubic::monic(f5.from_int(3));
        assert_eq!(reps.representative_of(&f5, g).unwrap(), g);
        let f7 = f(7);
        let reps7 = representatives(&f7).unwrap();
        assert_eq!(reps7.omega, Some(f7.from_int(3)));
        assert_eq!(reps7.members.len(), 9);
        let h = Cubic::new(f7.from_int(3), Fe::ZERO);
        assert_eq!(reps7.representative_of(&f7, h).unwrap(), h);
        assert!(representatives(&f(3)).is_err());
        assert!(representatives(&f(25)).is_err());
    }

    #[test]
    fn representatives_preserve_epsilon() {
        for p in [5u64, 7, 11, 13, 17, 19] {
            let field = f(p);
            let reps = representatives(&field).unwrap();
            assert_eq!(
                reps.members.len() as u64,
                if p % 3 == 2 { p } else { p + 2 }
            );
            for a in field.nonzero_elements() {
                for c in field.elements() {
                    let g = Cubic::new(a, c);
                    let r = reps.representative_of(&field, g).unwrap();
                    assert!(reps.members.contains(&r));
                    assert_eq!(exp_sum_cubic(&field, g), exp_sum_cubic(&field, r));
                    assert_eq!(
                        fiber_profile(&field, g)
                            .unwrap()
                            .iter()
                            .filter(|&&k| k > 0)
                            .count(),
                        fiber_profile(&field, r)
                            .unwrap()
                            .iter()
                            .filter(|&&k| k > 0)
                            .count()
                    );
                }
            }
        }
    }

    #[test]
    fn fiber_profiles() {
        let f5 = f(5);
        assert_eq!(
            fiber_profile(&f5, Cubic::monic(f5.from_int(2))).unwrap(),
            [1, 0, 2, 2, 0]
        );
        assert_eq!(
            fiber_profile(&f5, Cubic::monic(f5.from_int(3))).unwrap(),
            [1, 2, 0, 0, 2]
        );
        for p in [5u64, 11, 17] {
            let field = f(p);
            assert!(fiber_profile(&field, Cubic::monic(Fe::ZERO))
                .unwrap()
                .iter()
                .all(|&k| k == 1));
        }
        assert!(fiber_profile(&f(9), Cubic::monic(Fe::ONE)).is_err());
    }

    #[test]
    fn equal_fibers_iff_equal_epsilon_on_prime_fields() {
        for p in [5u64, 7, 11] {
            let field = f(p);
            let cubics: Vec<Cubic> = field
                .nonzero_elements()
                .flat_map(|a| field.elements().map(move |c| Cubic::new(a, c)))
                .collect();
            for x in &cubics {
                for y in &cubics {
                    let fibers =
                        fiber_profile(&field, *x).unwrap() == fiber_profile(&field, *y).unwrap();
                    assert_eq!(
                        fibers,
                        exp_sum_cubic(&field, *x) == exp_sum_cubic(&field, *y)
                    );
                }
            }
        }
    }

    #[test]
    fn coincidences() {
        let f5 = f(5);
        assert_eq!(
            epsilon_square_coincidences(&f5).unwrap(),
            [(Cubic::monic(f5.from_int(2)), Cubic::monic(f5.from_int(3)))]
        );
        for p in [7u64, 11, 13, 17, 19, 23] {
            assert!(
                epsilon_square_coincidences(&f(p)).unwrap().is_empty(),
                "p={p}"
            );
        }
    }

    #[test]
    fn scale_invariance() {
        let f5 = f(5);
        assert!(scale_invariance_check(&f5, Cubic::monic(Fe::ONE), f5.from_int(2)).unwrap());
        assert!(scale_invariance_check(&f5, Cubic::monic(Fe::ONE), Fe::ONE).unwrap());
        let f7 = f(7);
        assert!(scale_invariance_check(&f7, Cubic::monic(Fe::ZERO), f7.from_int(3)).unwrap());
        assert!(scale_invariance_check(&f7, Cubic::monic(Fe::ONE), Fe::ZERO).is_err());
    }

    #[test]
    fn lift_examples() {
        let s5 = spectrum_odd(&f(5)).unwrap();
        let d = lift_to_bipartite(&s5).unwrap();
        assert_eq!(d.total(), 1250);
        assert_eq!(d.multiplicity_of_int(5), 1);
        assert_eq!(d.multiplicity_of_int(-5), 1);
        assert_eq!(d.multiplicity_of_int(0), 2 * 164);
        let golden = d
            .entries
            .iter()
            .find(|e| (e.approx - 3.618_033_988_75).abs() < 1e-9)
            .unwrap();
        assert_eq!(golden.multiplicity, 80);
        assert_eq!(golden.witness.as_ref().unwrap().form, EpsForm::Plus);
        assert!(d
            .entries
            .iter()
            .any(|e| (e.approx + 3.618_033_988_75).abs() < 1e-9));
        let bad = SpectrumMultiset {
            graph: GraphKind::Gamma4,
            q: 1,
            entries: vec![SpectrumEntry {
                value: ExactValue::Int(-3),
                approx: -3.0,
                multiplicity: 1,
                witness: None,
            }],
        };
        assert!(matches!(
            lift_to_bipartite(&bad),
            Err(Error::NegativeRadicand(_))
        ));
    }

    #[test]
    fn lifts_are_symmetric() {
        for q in [2u64, 3, 4, 5, 7, 8, 9, 11, 13] {
            let d = lift_to_bipartite(&spectrum(&f(q)).unwrap()).unwrap();
            assert_eq!(d.total(), 2 * q.pow(4));
            let mut vals = d.expanded();
            let mut neg: Vec<f64> = vals.iter().map(|x| -x).collect();
            neg.sort_by(f64::total_cmp);
            vals.sort_by(f64::total_cmp);
            for (a, b) in vals.iter().zip(&neg) {
                assert!((a - b).abs() < 1e-9);
            }
            let q_f = q as f64;
            assert!(d.entries.iter().all(|e| e.approx.abs() <= q_f + 1e-9));
            let nontrivial = d
                .entries
                .iter()
                .filter(|e| (e.approx.abs() - q_f).abs() > 1e-9);
            assert!(nontrivial
                .into_iter()
                .all(|e| e.approx.abs() <= 2.0 * libm::sqrt(q_f) + 1e-6));
        }
    }

    #[test]
    fn thirteen_is_not_ramanujan() {
        let d = lift_to_bipartite(&spectrum_odd(&f(13)).unwrap()).unwrap();
        let lambda2 = d
            .entries
            .iter()
            .map(|e| e.approx)
            .filter(|&x| x < 13.0 - 1e-9)
            .fold(f64::MIN, f64::max);
        assert!((lambda2 - 6.9533).abs() < 1e-3);
        assert!(lambda2 > 2.0 * libm::sqrt(12.0) && lambda2 < 2.0 * libm::sqrt(13.0));
    }

    #[test]
    fn signed_sqrt_normalizes() {
        assert_eq!(
            ExactValue::signed_sqrt(true, 49).unwrap(),
            ExactValue::Int(-7)
        );
        assert_eq!(
            ExactValue::signed_sqrt(false, 10).unwrap(),
            ExactValue::Sqrt {
                negative: false,
                radicand: 10
            }
        );
        assert!(ExactValue::signed_sqrt(false, -1).is_err());
    }

    proptest! {
        #[test]
        fn scaling_preserves_epsilon(p in prop::sample::select(vec![5u64, 7, 11, 13]), a in 1u32..13, c in 0u32..13, l in 1u32..13) {
            let field = f(p);
            let pick = |k: u32| field.element(k % p as u32).unwrap();
            prop_assume!(!pick(a).is_zero() && !pick(l).is_zero());
            prop_assert!(scale_invariance_check(&field, Cubic::new(pick(a), pick(c)), pick(l)).unwrap());
        }

        #[test]
        fn merging_is_order_independent(seed in 0u64..1000) {
            let field = f(7);
            let mut labels: Vec<Cubic> = field
                .nonzero_elements()
                .flat_map(|a| field.elements().map(move |c| Cubic::new(a, c)))
                .collect();
            let n = labels.len() as u64;
            for i in 0..labels.len() {
                let j = ((seed.wrapping_mul(2654435761).wrapping_add(i as u64 * 40503)) % n) as usize;
                labels.swap(i, j);
            }
            let mut b = odd_base(7, 6 * 43);
            for f in &labels {
                b.add_epsilon(CubicLabel::Field(*f), exp_sum_cubic(&field, *f), 42);
            }
            let shuffled = b.finish();
            let reference = spectrum_odd(&field).unwrap();
            let key = |s: &SpectrumMultiset| -> Vec<(ExactValue, u64)> {
                s.entries.iter().map(|e| (e.value.clone(), e.multiplicity)).collect()
            };
            prop_assert_eq!(key(&shuffled), key(&reference));
        }
    }
}
