//! Bogolyubov invariants of elliptic operator pairs.
//!
//! Computes the bosonic and fermionic Bogolyubov invariants B_b(beta) and
//! B_f(beta) — the regularized number of particles created when a dynamical
//! operator jumps between two elliptic operators — from truncated spectral
//! data, by two independent routes:
//!
//! * direct spectral sums over eigenvalues and eigensection overlaps, and
//! * kernel integrals of the relative heat traces against h_f, h_b, h_0.
//!
//! On top of the invariants sit the small-beta asymptotics: a Mellin-transform
//! expansion engine, the leading local geometric coefficients, the momentum
//! integrals V_b / V_f they must reproduce, and fitting utilities that extract
//! the same coefficients from computed beta-sweeps.
//!
//! Module map:
//!
//! * [`specfun`] — statistical functions, heat-trace kernels, gamma/digamma;
//! * [`quadrature`] — adaptive semi-infinite and quadrant integration, plus
//!   the modified Mellin transforms with analytic continuation;
//! * [`spectral`] — operator-pair spectral data, model builders, validation,
//!   and the JSON interchange format;
//! * [`traces`] — classical, combined, generalized and relative heat traces;
//! * [`invariant`] — the Bogolyubov invariants, both routes, plus the formal
//!   truncated particle numbers, adiabatic limits, zeta function, V_b / V_f;
//! * [`asymptotics`] — the expansion engine and coefficient extraction;
//! * [`verify`] — the end-to-end verification suite driven by the CLI.

pub mod asymptotics;
pub mod error;
pub mod invariant;
pub mod quadrature;
pub mod specfun;
pub mod spectral;
pub mod sum;
pub mod traces;
pub mod verify;

pub use error::{Error, Result};

#[path = "/tmp/scratch_test.rs"]
mod scratch_mod;
