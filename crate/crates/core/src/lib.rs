//! Exact algebra behind the spectra of the graphs `D(4,q)` and their point
//! collinearity graphs `Γ(4,q)`.
//!
//! The crate is `no_std` (it needs `alloc`). Everything here is exact except
//! the complex embedding of cyclotomic integers, which is only used for
//! reporting magnitudes and float approximations.
//!
//! Layout:
//!
//! * [`ff`]: the finite field `F_q`, trace, primitive elements, cube roots and
//!   polynomial root counting.
//! * [`gr9`]: the Galois ring `GR(9,e)` with its Teichmüller set and trace to
//!   `Z/9Z`, needed when `q = 3^e`.
//! * [`cyclo`]: cyclotomic integers in `Z[ζ_p]` and `Z[ζ_9]` and the
//!   exponential sums `ε_f`.
//! * [`graphs`]: `D(4,q)`, `Γ(4,q)`, the group `G` acting regularly on points
//!   and the Cayley realization of `Γ(4,q)`.
//! * [`reps`]: characters and the degree-`q` representations of `G`.
//! * [`closedform`]: closed-form spectra as exact multisets.

#![no_std]

extern crate alloc;
#[cfg(test)]
extern crate std;

pub mod closedform;
pub mod cyclo;
mod error;
pub mod ff;
pub mod gr9;
pub mod graphs;
pub mod reps;

pub use error::{Error, Result};
