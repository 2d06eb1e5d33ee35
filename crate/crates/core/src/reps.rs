//! Characters and degree-`q` representations of `G`, evaluated on the
//! connection set `S`.
//!
//! Odd `q`: the linear characters `χ_{α,β,γ}(g) = ζ^{tr(αt+βu+γw)}` and the
//! monomial representations
//! `M_{α,β}(g(t,u,v,w))[i,j] = ζ^{tr(α(v-2iu)+βw)} δ_{i+t,j}`, rows and
//! columns indexed by `F` in element-index order.
//!
//! Even `q`: `G` is elementary abelian and every irreducible is a sign
//! character `(-1)^{tr(αt+βu+γv+ηw)}`.

use alloc::vec;
use alloc::vec::Vec;

use crate::cyclo::{exp_sum_cubic, exp_sum_teichmuller_cubic, Conductor, Cubic, CycInt};
use crate::ff::{Fe, Field};
use crate::gr9::GaloisRing9;
use crate::graphs::{connection_set, GroupElem};
use crate::{Error, Result};

/// Largest `q` for which the quartic-cost verification routines run.
pub const MAX_VERIFY_Q: u32 = 7;

fn zeta(field: &Field) -> Conductor {
    Conductor::new(field.characteristic()).expect("field characteristic is prime")
}

fn require_odd(field: &Field) -> Result<()> {
    if field.characteristic() == 2 {
        return Err(Error::WrongParity {
            q: field.order() as u64,
            expected: "odd",
        });
    }
    Ok(())
}

fn require_even(field: &Field) -> Result<()> {
    if field.characteristic() != 2 {
        return Err(Error::WrongParity {
            q: field.order() as u64,
            expected: "even",
        });
    }
    Ok(())
}

/// `χ_{α,β,γ}(S) = (m - 1) q` with `m = #{r : α + βr + γr² = 0}`.
pub fn linear_char_value(field: &Field, alpha: Fe, beta: Fe, gamma: Fe) -> Result<i64> {
    require_odd(field)?;
    let m = field
        .elements()
        .filter(|&r| field.eval(&[alpha, beta, gamma], r).is_zero())
        .count() as i64;
    Ok((m - 1) * field.order() as i64)
}

/// `χ_{α,β,γ}(S)` summed term by term over `S`.
pub fn linear_char_value_direct(field: &Field, alpha: Fe, beta: Fe, gamma: Fe) -> Result<CycInt> {
    require_odd(field)?;
    let mut counts = vec![0i64; field.characteristic() as usize];
    for g in connection_set(field) {
        let x = field.add(
            field.add(field.mul(alpha, g.t), field.mul(beta, g.u)),
            field.mul(gamma, g.w),
        );
        counts[field.trace(x) as usize] += 1;
    }
    Ok(CycInt::from_exponent_counts(zeta(field), &counts))
}

/// `χ_{α,β,γ,η}(S) = q Σ (-1)^{tr(αt)}` over `t ≠ 0` with `β²t + γ²t³ = η`.
///
/// Summing `(-1)^{tr(t(β + γt)r + ηtr²)}` over `r` uses `tr(x²) = tr(x)`,
/// which turns the condition `βt + γt² = √(ηt)` into the cubic above.
pub fn even_char_value(field: &Field, alpha: Fe, beta: Fe, gamma: Fe, eta: Fe) -> Result<i64> {
    require_even(field)?;
    let (b2, g2) = (field.square(beta), field.square(gamma));
    let sum: i64 = field
        .nonzero_elements()
        .filter(|&t| field.eval(&[Fe::ZERO, b2, Fe::ZERO, g2], t) == eta)
        .map(|t| {
            if field.trace(field.mul(alpha, t)) == 0 {
                1
            } else {
                -1
            }
        })
        .sum();
    Ok(sum * field.order() as i64)
}

pub fn even_char_value_direct(
    field: &Field,
    alpha: Fe,
    beta: Fe,
    gamma: Fe,
    eta: Fe,
) -> Result<i64> {
    require_even(field)?;
    Ok(connection_set(field)
        .iter()
        .map(|g| {
            let x = field.add(
                field.add(field.mul(alpha, g.t), field.mul(beta, g.u)),
                field.add(field.mul(gamma, g.v), field.mul(eta, g.w)),
            );
            if field.trace(x) == 0 {
                1
            } else {
                -1
            }
        })
        .sum())
}

/// Square matrix of cyclotomic integers, row-major.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct RepMatrix {
    size: usize,
    entries: Vec<CycInt>,
}

impl RepMatrix {
    pub fn from_fn(size: usize, mut f: impl FnMut(usize, usize) -> CycInt) -> Self {
        let mut entries = Vec::with_capacity(size * size);
        for i in 0..size {
            for j in 0..size {
                entries.push(f(i, j));
            }
        }
        RepMatrix { size, entries }
    }

    pub fn scalar(n: Conductor, size: usize, k: i64) -> Self {
        Self::from_fn(size, |i, j| CycInt::from_int(n, if i == j { k } else { 0 }))
    }

    pub fn size(&self) -> usize {
        self.size
    }

    pub fn get(&self, i: usize, j: usize) -> &CycInt {
        &self.entries[i * self.size + j]
    }

    pub fn entries(&self) -> &[CycInt] {
        &self.entries
    }

    pub fn mul(&self, other: &RepMatrix) -> RepMatrix {
        let n = self.get(0, 0).conductor();
        RepMatrix::from_fn(self.size, |i, j| {
            (0..self.size).fold(CycInt::zero(n), |acc, k| {
                acc + self.get(i, k) * other.get(k, j)
            })
        })
    }

    pub fn sub(&self, other: &RepMatrix) -> RepMatrix {
        RepMatrix::from_fn(self.size, |i, j| self.get(i, j) - other.get(i, j))
    }

    pub fn conj_transpose(&self) -> RepMatrix {
        RepMatrix::from_fn(self.size, |i, j| self.get(j, i).conj())
    }

    pub fn is_hermitian(&self) -> bool {
        *self == self.conj_transpose()
    }

    pub fn trace(&self) -> CycInt {
        let n = self.get(0, 0).conductor();
        (0..self.size).fold(CycInt::zero(n), |acc, i| &acc + self.get(i, i))
    }

    /// `tr(A^k)` for `k = 1..=k_max`; equal power sums up to the size pin down
    /// the eigenvalue multiset exactly.
    pub fn power_traces(&self, k_max: usize) -> Vec<CycInt> {
        let mut out = Vec::with_capacity(k_max);
        let mut power = self.clone();
        for k in 1..=k_max {
            out.push(power.trace());
            if k < k_max {
                power = power.mul(self);
            }
        }
        out
    }
}

/// `Σ_λ λ^k` for `k = 1..=k_max`.
pub fn power_sums(values: &[CycInt], k_max: usize) -> Vec<CycInt> {
    let n = values[0].conductor();
    let mut powers: Vec<CycInt> = values.to_vec();
    let mut out = Vec::with_capacity(k_max);
    for k in 1..=k_max {
        out.push(powers.iter().fold(CycInt::zero(n), |acc, x| &acc + x));
        if k < k_max {
            for (p, v) in powers.iter_mut().zip(values) {
                *p = &*p * v;
            }
        }
    }
    out
}

/// `M_{α,β}(g)` stored as a permutation plus one `ζ` exponent per row.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct MonomialRep {
    /// Column of the nonzero entry in each row.
    pub cols: Vec<u32>,
    /// Exponent of `ζ` in each row.
    pub exps: Vec<u32>,
    p: u32,
}

impl MonomialRep {
    pub fn of(field: &Field, alpha: Fe, beta: Fe, g: &GroupElem) -> MonomialRep {
        let q = field.order();
        let mut cols = Vec::with_capacity(q as usize);
        let mut exps = Vec::with_capacity(q as usize);
        let two_u = field.add(g.u, g.u);
        for i in field.elements() {
            cols.push(field.add(i, g.t).index());
            let x = field.add(
                field.mul(alpha, field.sub(g.v, field.mul(i, two_u))),
                field.mul(beta, g.w),
            );
            exps.push(field.trace(x));
        }
        MonomialRep {
            cols,
            exps,
            p: field.characteristic(),
        }
    }

    pub fn mul(&self, other: &MonomialRep) -> MonomialRep {
        let (cols, exps) = self
            .cols
            .iter()
            .zip(&self.exps)
            .map(|(&c, &e)| {
                (
                    other.cols[c as usize],
                    (e + other.exps[c as usize]) % self.p,
                )
            })
            .unzip();
        MonomialRep {
            cols,
            exps,
            p: self.p,
        }
    }

    pub fn trace(&self) -> CycInt {
        let mut counts = vec![0i64; self.p as usize];
        for (i, (&c, &e)) in self.cols.iter().zip(&self.exps).enumerate() {
            if c as usize == i {
                counts[e as usize] += 1;
            }
        }
        CycInt::from_exponent_counts(Conductor::new(self.p).expect("prime"), &counts)
    }

    pub fn to_matrix(&self) -> RepMatrix {
        let n = Conductor::new(self.p).expect("prime");
        RepMatrix::from_fn(self.cols.len(), |i, j| {
            if self.cols[i] as usize == j {
                CycInt::root_power(n, self.exps[i] as i64)
            } else {
                CycInt::zero(n)
            }
        })
    }
}

/// `M_{α,β}(S) = Σ_{g∈S} M_{α,β}(g)`, exactly.
pub fn build_m(field: &Field, alpha: Fe, beta: Fe) -> Result<RepMatrix> {
    require_odd(field)?;
    if alpha.is_zero() {
        return Err(Error::ZeroParameter("alpha"));
    }
    let q = field.order() as usize;
    let p = field.characteristic() as usize;
    let mut counts = vec![0i64; q * q * p];
    for g in connection_set(field) {
        let rep = MonomialRep::of(field, alpha, beta, &g);
        for (i, (&c, &e)) in rep.cols.iter().zip(&rep.exps).enumerate() {
            counts[(i * q + c as usize) * p + e as usize] += 1;
        }
    }
    let n = zeta(field);
    Ok(RepMatrix::from_fn(q, |i, j| {
        CycInt::from_exponent_counts(n, &counts[(i * q + j) * p..(i * q + j + 1) * p])
    }))
}

/// `U_{α,β}[i,j] = ζ^{tr(α i² j - β i j²)}`.
pub fn build_u(field: &Field, alpha: Fe, beta: Fe) -> Result<RepMatrix> {
    require_odd(field)?;
    let n = zeta(field);
    let elems: Vec<Fe> = field.elements().collect();
    Ok(RepMatrix::from_fn(elems.len(), |i, j| {
        let (x, y) = (elems[i], elems[j]);
        let xy = field.mul(x, y);
        let e = field.sub(
            field.mul(alpha, field.mul(xy, x)),
            field.mul(beta, field.mul(xy, y)),
        );
        CycInt::root_power(n, field.trace(e) as i64)
    }))
}

/// `U U* - q I`, the factored form of `M_{α,β}(S)`.
pub fn m_from_u(field: &Field, alpha: Fe, beta: Fe) -> Result<RepMatrix> {
    let u = build_u(field, alpha, beta)?;
    let q = field.order() as usize;
    Ok(u.mul(&u.conj_transpose())
        .sub(&RepMatrix::scalar(zeta(field), q, q as i64)))
}

/// `ψ_{α,β}(g) = tr M_{α,β}(g)`.
pub fn psi(field: &Field, alpha: Fe, beta: Fe, g: &GroupElem) -> CycInt {
    MonomialRep::of(field, alpha, beta, g).trace()
}

fn require_verify_size(field: &Field) -> Result<()> {
    require_odd(field)?;
    if field.order() > MAX_VERIFY_Q {
        return Err(Error::TooLarge {
            order: field.order() as u64,
            bound: MAX_VERIFY_Q as u64,
        });
    }
    Ok(())
}

/// Checks that `ψ_{α,β}` is `q ζ^{tr(αv+βw)}` on the center and 0 elsewhere,
/// and that `[ψ_{α,β}, ψ_{α',β'}]_G = δ` over all `α, α' ≠ 0`.
pub fn psi_orthogonality(field: &Field) -> Result<bool> {
    require_verify_size(field)?;
    let n = zeta(field);
    let q = field.order() as i64;
    let group: Vec<GroupElem> = (0..field.order().pow(4))
        .map(|i| GroupElem::from_index(field, i))
        .collect();
    let labels: Vec<(Fe, Fe)> = field
        .nonzero_elements()
        .flat_map(|a| field.elements().map(move |b| (a, b)))
        .collect();
    let mut tables = Vec::with_capacity(labels.len());
    for &(a, b) in &labels {
        let mut table = Vec::with_capacity(group.len());
        for g in &group {
            let value = psi(field, a, b, g);
            let expected = if g.t.is_zero() && g.u.is_zero() {
                let x = field.add(field.mul(a, g.v), field.mul(b, g.w));
                CycInt::root_power(n, field.trace(x) as i64).scale(q)
            } else {
                CycInt::zero(n)
            };
            if value != expected {
                return Ok(false);
            }
            table.push(value);
        }
        tables.push(table);
    }
    let order = q.pow(4);
    for (x, tx) in tables.iter().enumerate() {
        for (y, ty) in tables.iter().enumerate() {
            let sum = tx
                .iter()
                .zip(ty)
                .filter(|(a, b)| !a.is_zero() && !b.is_zero())
                .fold(CycInt::zero(n), |acc, (a, b)| acc + a * &b.conj());
            if sum != CycInt::from_int(n, if x == y { order } else { 0 }) {
                return Ok(false);
            }
        }
    }
    Ok(true)
}

/// Number of conjugacy classes of `G`, by orbit enumeration.
pub fn conjugacy_class_count(field: &Field) -> Result<usize> {
    require_verify_size(field)?;
    let size = field.order().pow(4);
    let group: Vec<GroupElem> = (0..size).map(|i| GroupElem::from_index(field, i)).collect();
    let mut seen = vec![false; size as usize];
    let mut classes = 0;
    for g in &group {
        if seen[g.index(field) as usize] {
            continue;
        }
        classes += 1;
        for h in &group {
            let c = h.inverse(field).mul(field, g).mul(field, h);
            seen[c.index(field) as usize] = true;
        }
    }
    Ok(classes)
}

/// Which cubic an exponential sum was taken over.
#[derive(Clone, Copy, Debug, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub enum CubicLabel {
    /// `a t³ + c t` over `F_q`.
    Field(Cubic),
    /// `t³ + 3ct` over the Teichmüller set of `GR(9,e)`, `c` the lift of the
    /// given residue.
    Teichmuller(Fe),
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct EpsilonEigen {
    pub label: CubicLabel,
    pub eps: CycInt,
    /// `ε² - q`.
    pub value: CycInt,
}

/// The eigenvalues `ε_f² - q` of `M_{α,β}(S)`, one per `c`, for `αβ ≠ 0`.
///
/// For `p ≥ 5` the family is `f = a t³ + c t` with `a = 1/(3αβ)`. For
/// `q = 3^e` every `M_{α,β}(S)` with `αβ ≠ 0` is similar to `M_{1,1}(S)` and
/// the family is `t³ + 3ct` over `GR(9,e)`.
pub fn eigen_via_epsilon(field: &Field, alpha: Fe, beta: Fe) -> Result<Vec<EpsilonEigen>> {
    require_odd(field)?;
    if alpha.is_zero() {
        return Err(Error::ZeroParameter("alpha"));
    }
    if beta.is_zero() {
        return Err(Error::ZeroParameter("beta"));
    }
    let q = field.order() as i64;
    let finish = |label, eps: CycInt| {
        let value = &eps.square() - &CycInt::from_int(eps.conductor(), q);
        EpsilonEigen { label, eps, value }
    };
    if field.characteristic() == 3 {
        let ring = GaloisRing9::new(field.degree())?;
        return Ok(ring
            .residue_field()
            .elements()
            .map(|c| {
                finish(
                    CubicLabel::Teichmuller(c),
                    exp_sum_teichmuller_cubic(&ring, c),
                )
            })
            .collect());
    }
    let three = field.from_int(3);
    let a = field.inv(field.mul(three, field.mul(alpha, beta)))?;
    Ok(field
        .elements()
        .map(|c| {
            let f = Cubic::new(a, c);
            finish(CubicLabel::Field(f), exp_sum_cubic(field, f))
        })
        .collect())
}

/// True when the exact eigenvalue list has the same power sums as `M`, so
/// the two multisets coincide.
pub fn eigenvalues_match(m: &RepMatrix, values: &[CycInt]) -> Result<bool> {
    if values.len() != m.size() {
        return Ok(false);
    }
    let target = values[0].conductor();
    let traces = m.power_traces(m.size());
    let sums = power_sums(values, m.size());
    for (t, s) in traces.iter().zip(&sums) {
        if t.raise_conductor(target)? != *s {
            return Ok(false);
        }
    }
    Ok(true)
}
