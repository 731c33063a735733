//! Green's functions of the Hill operator L[lambda]u = u'' + (a(t)+lambda)u
//! on [0,1] under periodic, Neumann, Dirichlet, and the two mixed boundary
//! conditions, together with the machinery built on top of them:
//!
//! - the ten basis solutions r1..r10 and their boundary-trace identities
//!   ([`basis`]);
//! - the 36 decomposition identities expressing each kernel through another
//!   plus rank-one corrections, the first-order-system boundary identities,
//!   and the sign-comparison theorems ([`identity`]);
//! - first eigenvalues, eigenvalue orderings, and oscillation counts
//!   ([`spectral`]);
//! - the nonlinear fixed-point program: bound constants, Picard iteration,
//!   and distance estimates between solutions under different boundary
//!   conditions ([`nonlinear`]).
//!
//! Everything rests on a fundamental pair phi1, phi2 integrated by RK4
//! ([`ode`]) and assembled into kernels in [`green`]. Potentials are constant,
//! sinusoidal, or sampled ([`potential`]); singular integrals use scaled
//! Gauss-Legendre panels ([`quad`]).

pub mod basis;
mod error;
pub mod green;
pub mod identity;
pub mod nonlinear;
pub mod ode;
pub mod potential;
pub mod quad;
pub mod spectral;

pub use error::{Error, Result};
