//! Mesh evaluation toolkit: signed-distance sampling, isosurface extraction,
//! shape similarity metrics, viewer-centered pose handling, and
//! visibility-decomposed error analysis.
//!
//! The geometry core is generic over the scalar type through [`Real`]
//! (implemented for `f32` and `f64`); concrete aliases for the common
//! instantiations live at the crate root.

pub mod bvh;
pub mod distance;
pub mod error;
pub mod mesh;
pub mod pose;
pub mod primitives;
pub mod real;
pub mod rng;
pub mod sampling;
pub mod vec3;

#[cfg(test)]
pub(crate) mod testutil;

pub use error::{Error, Result};
pub use mesh::{bounding_box, normalize_to_unit_cube, Aabb, TriangleMesh, UnitCubeTransform};
pub use real::Real;

/// Single-precision mesh, the storage format of the binary artifacts.
pub type TriangleMeshF32 = TriangleMesh<f32>;
/// Double-precision mesh, the default for metric computation.
pub type TriangleMeshF64 = TriangleMesh<f64>;
pub type AabbF32 = Aabb<f32>;
pub type AabbF64 = Aabb<f64>;
