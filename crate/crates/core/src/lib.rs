//! Bicircular matroids, lattice path matroids, and the recognition of
//! multigraphs whose bicircular matroid is a lattice path matroid.

pub mod bicircular;
pub mod catalog;
pub mod latticepath;
pub mod matroid;
pub mod multigraph;
pub mod recognizer;
