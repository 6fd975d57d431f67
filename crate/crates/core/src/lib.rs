//! Combinatorial calculus of Morse-Smale complexes on the sphere, and its
//! geometric realization on convex bodies.
//!
//! The crate is organized in layers:
//!
//! * [`surface_map`] — rotation systems (combinatorial maps on oriented
//!   surfaces), canonical forms, and JSON serialization.
//! * [`quad_ms`] — the three equivalent representations of a spherical
//!   Morse-Smale complex (quasi-dual quadrangulation, primal complex,
//!   triangulated refinement) plus the planar-map bijection that drives
//!   most of the surgery code.
//! * [`genealogy`] — face contraction, vertex splitting, diagonal slides,
//!   exhaustive splitting enumeration, and the metagraph of all classes.
//! * [`mesh`] — triangle meshes of convex bodies, equilibrium detection on
//!   polyhedra, discrete Morse-Smale complex extraction, persistence-driven
//!   simplification, and the analytic ellipsoid solver.
//! * [`chipping`] — plane/sphere clipping of convex meshes, geometric
//!   realization of vertex splits by truncation, and chipping sequences
//!   tracked through the metagraph.
//! * [`oracle`] — slow, independent reference implementations used by the
//!   test suite to cross-check the fast paths.

pub mod chipping;
pub mod genealogy;
pub mod geometry;
pub mod mesh;
pub mod oracle;
pub mod par;
pub mod persistence;
pub mod quad_ms;
pub mod surface_map;
