//! Path-based traffic assignment with major/minor path compression.
//!
//! The pipeline: parse a TNTP network and trip table ([`netio`]), build a
//! working path set and its incidence system ([`pathgen`]), solve the
//! uncompressed user equilibrium for nominal flows ([`refsolve`]), partition
//! paths into major/minor and compress the minor block with a truncated SVD
//! ([`compress`]), solve the reduced program with an augmented Lagrangian
//! method ([`alm`]), and score the result against the reference ([`report`]).
//!
//! Gradient evaluation inside the solver is pluggable: see [`strategy`] for
//! the registry of interchangeable evaluation schemes.

pub mod alm;
pub mod compress;
pub mod netio;
pub mod pathgen;
pub mod refsolve;
pub mod report;
pub mod sparse;
pub mod strategy;
