//! Integrals over hyperbolic regions, totient sums, and weighted lattice sums.

mod integrals;
mod lattice;
mod quadrature;
mod totient;

pub use integrals::{
    integral_i, integral_in, section5_identity_check, EQUAL_EXPONENT_TOLERANCE, MAX_DIMENSION,
};
pub use lattice::{
    lattice_sum, CoordinateWeight, LatticeSumSpec, MAX_PLANAR_BOUND, MAX_SPATIAL_BOUND,
};
pub use quadrature::{integrate, Tolerance, MAX_SEGMENTS};
pub use totient::{
    totient_power_sum, totient_sum, totient_table, TotientTable, MAX_POWER_SUM_LIMIT,
    MAX_TOTIENT_LIMIT,
};
