//! Finite valuation rings, their sum-product graphs, and exact checks of the
//! spectral machinery behind expansion bounds for two-variable functions.

pub mod experiment;
pub mod graph;
pub mod harness;
pub mod ring;
pub mod sets;
