//! Exact computations in the HOMFLYPT skein of the solid torus, the elliptic Hall
//! algebra, quantum tori and quantum cluster mutations.

pub mod annulus;
pub mod cli;
pub mod coeff;
pub mod finite_rank;
pub mod partitions;
pub mod quantum_cluster;
pub mod torus_skein;
pub mod wavefunction;
