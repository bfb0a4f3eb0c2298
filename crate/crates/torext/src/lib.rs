//! Equivariant extensions of nef toric line bundles, computed exactly from
//! lattice-polyhedron input.
//!
//! Everything is exact: scalars are arbitrary-precision rationals, polyhedra
//! are converted between inequality and generator form by a double-description
//! method, and every derived object (connected components of a polytope
//! difference, graded section tables, extension sequences, filtration data of
//! the extension sheaf) is produced together with the checks that certify it.
//!
//! The crate is organised in layers:
//!
//! * [`exact_geometry`] — rational linear algebra, cones, polyhedra, lattices;
//! * [`fans_divisors`] — fans, normal fans, refinements, divisors of
//!   compatible polyhedra;
//! * [`difference_topology`] — cell complexes and connected components of a
//!   difference of polyhedra;
//! * [`koszul_engine`] — polyhedral functors, Koszul-type complexes and their
//!   exactness certificates;
//! * [`graded_cohomology`] — graded section/obstruction tables of a difference
//!   bundle and an independent cover-based oracle;
//! * [`klyachko_filtrations`] — filtration data of equivariant sheaves,
//!   lattice stretch/squish, pushouts, splitting and compatibility tests;
//! * [`extension_builder`] — the extension sequences themselves;
//! * [`cli_io`] — JSON schemas, deterministic serialization and the CLI
//!   entry points.

pub mod cli_io;
pub mod difference_topology;
mod error;
pub mod exact_geometry;
pub mod extension_builder;
pub mod fans_divisors;
pub mod graded_cohomology;
pub mod klyachko_filtrations;
pub mod koszul_engine;

pub use error::{Error, Result};
