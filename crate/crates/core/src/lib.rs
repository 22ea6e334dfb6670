pub mod cli;
pub mod error;
pub mod invariants;
pub mod lattice;
pub mod modular;
pub mod ptseries;
pub mod series;
