//! Asymptotic expansions of the discrete harmonic potential of planar lattice
//! walks, exact values on Z^2, and independent numeric oracles.

pub mod numeric;
pub mod scalar;
pub mod walk;
pub mod laplacian;
pub mod exact_values;
pub mod expansion;
pub mod oracle;
