//! Exact computations around Edixhoven's filtration on Néron lft-models under
//! tame base change.
//!
//! The crate is `no_std` (it needs `alloc`) and splits into five layers:
//!
//! * [`dvr`]: truncated fractional power series over finite fields and Smith
//!   normal form over the resulting discrete valuation rings. This is the
//!   brute-force oracle that the closed d-jump formulas are checked against.
//! * [`glattice`]: finite groups, integral lattices with a group action, Tate
//!   cohomology in degrees −1 and 0, flasque detection and flasque resolutions.
//! * [`jumps`]: jump and d-jump multisets of the constructive group families,
//!   the order function, the tame base change conductor and its recurrences.
//! * [`weights`]: `ℤ/dℤ` weight multisets, scales and graded substitutions.
//! * [`zeta`]: Grothendieck-ring classes, truncated motivic zeta series and
//!   their closed rational forms.
#![no_std]
#![forbid(unsafe_code)]

extern crate alloc;

#[cfg(test)]
extern crate std;

pub mod arith;
pub mod dvr;
pub mod fq;
pub mod glattice;
pub mod intmat;
pub mod jumps;
pub mod weights;
pub mod zeta;

pub use arith::Rational;
