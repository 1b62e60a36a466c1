//! Exact construction and verification of deformed Calogero-Moser-Sutherland
//! operators attached to generalized root systems.

pub mod exact;
pub mod rootsys;
pub mod par;
pub mod diffop;
pub mod integrals;
pub mod hc;
pub mod lambda;
pub mod macdiff;
pub mod cli;
