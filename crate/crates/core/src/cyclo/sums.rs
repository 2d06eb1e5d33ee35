//! Exponential sums `ε_f = Σ_a ζ^{tr f(a)}` over `F_q` and over the
//! Teichmüller set of `GR(9,e)`.

use alloc::vec;
use alloc::vec::Vec;

use super::{Conductor, CycInt};
use crate::ff::{Fe, Field};
use crate::gr9::{GaloisRing9, RingElem};
use crate::{Error, Result};

/// Numerical slack applied by [`weil_check`].
pub const WEIL_SLACK: f64 = 1e-9;

/// The odd cubic `a t³ + c t` over `F_q`.
#[derive(Clone, Copy, Debug, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct Cubic {
    pub a: Fe,
    pub c: Fe,
}

impl Cubic {
    pub fn new(a: Fe, c: Fe) -> Self {
        Cubic { a, c }
    }

    /// `t³ + c t`.
    pub fn monic(c: Fe) -> Self {
        Cubic { a: Fe::ONE, c }
    }

    /// Coefficients low degree first.
    pub fn coeffs(&self) -> [Fe; 4] {
        [Fe::ZERO, self.c, Fe::ZERO, self.a]
    }

    pub fn eval(&self, field: &Field, t: Fe) -> Fe {
        let t2 = field.mul(t, t);
        field.mul(t, field.add(field.mul(self.a, t2), self.c))
    }

    /// `f(λ t)`.
    pub fn rescale(&self, field: &Field, lambda: Fe) -> Cubic {
        Cubic {
            a: field.mul(self.a, field.pow(lambda, 3)),
            c: field.mul(self.c, lambda),
        }
    }
}

/// How many `a ∈ F` have `tr f(a) = s`, for each `s ∈ F_p`.
pub fn fibre_counts(field: &Field, f: impl Fn(Fe) -> Fe) -> Vec<i64> {
    let mut counts = vec![0i64; field.characteristic() as usize];
    for a in field.elements() {
        counts[field.trace(f(a)) as usize] += 1;
    }
    counts
}

/// `ε_f` for `f` given by its coefficients over `F_q`, low degree first.
pub fn exp_sum_field(field: &Field, f: &[Fe]) -> CycInt {
    let n = Conductor(field.characteristic());
    CycInt::from_exponent_counts(n, &fibre_counts(field, |a| field.eval(f, a)))
}

pub fn exp_sum_cubic(field: &Field, f: Cubic) -> CycInt {
    let n = Conductor(field.characteristic());
    CycInt::from_exponent_counts(n, &fibre_counts(field, |a| f.eval(field, a)))
}

/// `Σ_{i∈T} ξ^{tr f(i)}` with `ξ = e^{2πi/9}` and `T` the Teichmüller set.
pub fn exp_sum_gr(ring: &GaloisRing9, f: &[RingElem]) -> CycInt {
    let mut counts = vec![0i64; 9];
    for &i in ring.teichmuller() {
        counts[ring.trace(ring.eval(f, i)) as usize] += 1;
    }
    CycInt::from_exponent_counts(Conductor::NINE, &counts)
}

/// `ε_{t³ + 3ct}` for `c` the Teichmüller lift of `residue`.
pub fn exp_sum_teichmuller_cubic(ring: &GaloisRing9, residue: Fe) -> CycInt {
    let c = ring.teichmuller_lift(residue);
    let f = [
        RingElem::ZERO,
        ring.scale(3, c),
        RingElem::ZERO,
        RingElem::ONE,
    ];
    exp_sum_gr(ring, &f)
}

#[derive(Clone, Copy, Debug, PartialEq)]
pub struct WeilCheck {
    pub holds: bool,
    pub magnitude: f64,
    pub bound: f64,
    /// `bound - |ε|`; negative when the bound fails.
    pub margin: f64,
}

/// Tests `|ε| ≤ (d-1)√q` with slack [`WEIL_SLACK`].
pub fn weil_check(eps: &CycInt, q: u64, d: u32) -> Result<WeilCheck> {
    if d < 2 {
        return Err(Error::WeilDegree(d));
    }
    let magnitude = eps.embed().norm();
    let bound = (d - 1) as f64 * libm::sqrt(q as f64);
    Ok(WeilCheck {
        holds: magnitude <= bound + WEIL_SLACK,
        magnitude,
        bound,
        margin: bound - magnitude,
    })
}
