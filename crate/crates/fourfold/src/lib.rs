//! Genus, isogeny-kernel and monodromy bookkeeping for Galois covers of
//! curves whose group embeds in S4.

pub mod config;
pub mod cover;
pub mod decomposition;
pub mod genus;
pub mod golden;
pub mod monodromy;
pub mod perm;
pub mod report;
pub mod suite;
pub mod symplectic;
