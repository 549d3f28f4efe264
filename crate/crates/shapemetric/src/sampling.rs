//! Area-weighted surface sampling and uniform volume sampling.
//!
//! Sampling is chunked: sample indices are split into fixed-size ranges and
//! each range draws from its own derived RNG stream. Chunks can therefore be
//! generated in parallel while the output stays identical for any thread
//! count, and identical to the sequential result.

use crate::mesh::TriangleMesh;
use crate::rng::{derive_seed, rng_from_seed};
use crate::vec3::{self, Vec3};
use crate::{Error, Real, Result};
use rand::Rng as _;
use rayon::prelude::*;

/// Samples per RNG chunk. Fixed: changing it changes every sampled artifact.
const CHUNK: usize = 16_384;

/// Points sampled on a mesh surface with their normals and source faces.
#[derive(Debug, Clone, PartialEq)]
pub struct SurfacePointSet<T: Real> {
    pub positions: Vec<Vec3<T>>,
    pub normals: Vec<Vec3<T>>,
    pub face_ids: Vec<u32>,
    pub source_mesh_id: String,
}

impl<T: Real> SurfacePointSet<T> {
    pub fn len(&self) -> usize {
        self.positions.len()
    }

    pub fn is_empty(&self) -> bool {
        self.positions.is_empty()
    }
}

/// How sample normals are derived from the mesh.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Default)]
pub enum NormalMode {
    /// The face normal of the sampled triangle. Well-defined for soups and
    /// the default for all metric computation.
    #[default]
    Flat,
    /// Barycentric blend of area-weighted vertex normals, for smooth-shading
    /// sensitivity studies.
    Interpolated,
}

/// Cumulative face-area table for inverse-CDF face selection.
///
/// Areas accumulate in f64 regardless of the mesh scalar so the prefix sums
/// of large meshes stay accurate. Zero-area faces occupy empty intervals and
/// are never selected.
pub struct FaceAreaTable {
    cumulative: Vec<f64>,
    total: f64,
}

impl FaceAreaTable {
    pub fn build<T: Real>(mesh: &TriangleMesh<T>) -> Result<Self> {
        if mesh.faces().is_empty() {
            return Err(Error::EmptyGeometry("cannot sample a mesh with no faces"));
        }
        let mut cumulative = Vec::with_capacity(mesh.faces().len());
        let mut total = 0.0f64;
        for fi in 0..mesh.faces().len() {
            total += mesh.face_area(fi).to64();
            cumulative.push(total);
        }
        if total <= 0.0 {
            return Err(Error::DegenerateGeometry(
                "mesh has zero total surface area",
            ));
        }
        Ok(Self { cumulative, total })
    }

    /// Face index for the uniform draw `u` in [0, total).
    #[inline]
    pub fn select(&self, u: f64) -> usize {
        self.cumulative.partition_point(|&c| c <= u)
    }

    pub fn total_area(&self) -> f64 {
        self.total
    }
}

/// Uniform area-weighted surface samples: a face chosen proportionally to
/// area, then a uniform barycentric point on it. Deterministic per seed and
/// per sample index, independent of thread count.
pub fn sample_surface<T: Real>(
    mesh: &TriangleMesh<T>,
    n: usize,
    rng_seed: u64,
) -> Result<SurfacePointSet<T>> {
    sample_surface_with(mesh, n, rng_seed, NormalMode::Flat)
}

pub fn sample_surface_with<T: Real>(
    mesh: &TriangleMesh<T>,
    n: usize,
    rng_seed: u64,
    normal_mode: NormalMode,
) -> Result<SurfacePointSet<T>> {
    let table = FaceAreaTable::build(mesh)?;
    let vertex_normals = match normal_mode {
        NormalMode::Flat => Vec::new(),
        NormalMode::Interpolated => mesh.vertex_normals(),
    };

    let n_chunks = n.div_ceil(CHUNK);
    let chunks: Vec<(Vec<Vec3<T>>, Vec<Vec3<T>>, Vec<u32>)> = (0..n_chunks)
        .into_par_iter()
        .map(|chunk| {
            let count = CHUNK.min(n - chunk * CHUNK);
            let mut rng = rng_from_seed(derive_seed(rng_seed, chunk as u64));
            let mut positions = Vec::with_capacity(count);
            let mut normals = Vec::with_capacity(count);
            let mut face_ids = Vec::with_capacity(count);
            for _ in 0..count {
                let fi = table.select(rng.random_range(0.0..table.total));
                let (b0, b1, b2) = uniform_barycentric(
                    rng.random_range(0.0..1.0),
                    rng.random_range(0.0..1.0),
                );
                let [a, b, c] = mesh.face_vertices(fi);
                let p = vec3::add(
                    vec3::scale(a, T::of(b0)),
                    vec3::add(vec3::scale(b, T::of(b1)), vec3::scale(c, T::of(b2))),
                );
                let normal = match normal_mode {
                    NormalMode::Flat => mesh.face_normals()[fi],
                    NormalMode::Interpolated => {
                        let [ia, ib, ic] = mesh.faces()[fi];
                        vec3::normalize(vec3::add(
                            vec3::scale(vertex_normals[ia as usize], T::of(b0)),
                            vec3::add(
                                vec3::scale(vertex_normals[ib as usize], T::of(b1)),
                                vec3::scale(vertex_normals[ic as usize], T::of(b2)),
                            ),
                        ))
                    }
                };
                positions.push(p);
                normals.push(normal);
                face_ids.push(fi as u32);
            }
            (positions, normals, face_ids)
        })
        .collect();

    let mut out = SurfacePointSet {
        positions: Vec::with_capacity(n),
        normals: Vec::with_capacity(n),
        face_ids: Vec::with_capacity(n),
        source_mesh_id: String::new(),
    };
    for (p, nn, f) in chunks {
        out.positions.extend(p);
        out.normals.extend(nn);
        out.face_ids.extend(f);
    }
    Ok(out)
}

/// Square-root warp mapping two uniforms to uniform barycentric weights.
#[inline]
fn uniform_barycentric(r1: f64, r2: f64) -> (f64, f64, f64) {
    let su = r1.sqrt();
    (1.0 - su, su * (1.0 - r2), su * r2)
}

/// `n` i.i.d. points uniform in the axis-aligned cube of side `side` about
/// `center`. Deterministic per seed, independent of thread count.
pub fn sample_volume_uniform<T: Real>(
    center: Vec3<T>,
    side: T,
    n: usize,
    rng_seed: u64,
) -> Result<Vec<Vec3<T>>> {
    if side <= T::zero() {
        return Err(Error::Domain("volume cube side must be positive".into()));
    }
    let half = side.to64() * 0.5;
    let c = [center[0].to64(), center[1].to64(), center[2].to64()];
    let n_chunks = n.div_ceil(CHUNK);
    let chunks: Vec<Vec<Vec3<T>>> = (0..n_chunks)
        .into_par_iter()
        .map(|chunk| {
            let count = CHUNK.min(n - chunk * CHUNK);
            let mut rng = rng_from_seed(derive_seed(rng_seed, chunk as u64));
            (0..count)
                .map(|_| {
                    let mut p = [T::zero(); 3];
                    for a in 0..3 {
                        p[a] = T::of(c[a] + half * rng.random_range(-1.0..1.0));
                    }
                    p
                })
                .collect()
        })
        .collect();
    Ok(chunks.into_iter().flatten().collect())
}
