//! Quantum circuit description: an extended circuit IR with scoped ancillas
//! and assertive termination, a procedural builder, structured quantum data,
//! whole-circuit transforms, reversible oracle synthesis from boolean
//! expressions, simulation, and text/ASCII/gate-count formats.

pub mod builder;
pub mod classical;
pub mod examples;
pub mod formats;
pub mod ir;
pub mod qdata;
pub mod sim;
pub mod transforms;
