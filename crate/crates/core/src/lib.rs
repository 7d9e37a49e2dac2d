//! Discrete Dirac operators and Kasteleyn matrices on bipartite isoradial
//! graphs embedded in flat surfaces with cone singularities, together with
//! exact dimer-model enumeration to verify the determinant identities for
//! partition functions.
//!
//! The crate is organized around [`surface::RhombicSurface`], a purely
//! combinatorial encoding (rotation system + rhombus angles + radius) of a
//! bipartite graph isoradially embedded in a flat surface. On top of it:
//!
//! - [`homology`]: tree–cotree bases of H₁, dual cocycles, intersection form;
//! - [`cochain`]: unit-complex 1-cochains, Kasteleyn curvature and flatness;
//! - [`dbar`]: the discrete ∂̄ operator and the Morera identity;
//! - [`spin`]: the discrete canonical bundle, spin structures, quadratic
//!   forms and Arf invariants;
//! - [`dirac`]: ω_V, the Kasteleyn conditions, and the Dirac matrices;
//! - [`dimer`]: exhaustive matching enumeration and both sides of the
//!   partition-function identities;
//! - [`builders`]: the example surfaces;
//! - [`io`]: the JSON surface format shared by the CLI commands.

pub mod builders;
pub mod cochain;
pub mod dbar;
pub mod dimer;
pub mod dirac;
pub mod error;
pub mod homology;
pub mod io;
pub mod linalg;
pub mod spin;
pub mod surface;

pub use error::{Error, Result};
pub use surface::RhombicSurface;

pub mod cli;
