//! potlab: exterior Newtonian and Helmholtz potentials of 3-D domains,
//! harmonic-moment comparison, the geometric sphere characterization, and
//! the transparent-ball counterexamples for the Helmholtz kernel.
//!
//! Modules:
//! - [`specfun`]: spherical harmonics and spherical Bessel/Hankel functions
//! - [`geometry`]: domains, quadrature, surface meshes, rotations
//! - [`potentials`]: direct and multipole potential evaluation, closed forms
//! - [`moments`]: harmonic-moment gap, divergence identity, potential gap
//! - [`transparency`]: roots of tan x = x and transparent radii
//! - [`cli`]: command-line front end

pub mod cli;
pub mod error;
pub mod geometry;
pub mod moments;
pub mod par;
pub mod potentials;
pub mod specfun;
pub mod transparency;

pub use error::{PotlabError, Result};
