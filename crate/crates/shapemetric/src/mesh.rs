//! Triangle meshes, bounding boxes, and unit-cube normalization.

use crate::vec3::{self, Mat3, Vec3};
use crate::{Error, Real, Result};
use serde::{Deserialize, Serialize};

/// Indexed triangle soup with derived per-face normals.
///
/// Faces are triples of vertex indices; every index is validated against the
/// vertex count at construction. Zero-area faces are legal and keep a zero
/// normal vector — callers that need area-weighted behavior skip them via
/// [`TriangleMesh::degenerate_faces`]. A mesh with zero faces is the "empty
/// mesh" state used to flag failed reconstructions.
#[derive(Debug, Clone, PartialEq)]
pub struct TriangleMesh<T: Real> {
    vertices: Vec<Vec3<T>>,
    faces: Vec<[u32; 3]>,
    face_normals: Vec<Vec3<T>>,
}

impl<T: Real> TriangleMesh<T> {
    /// Builds a mesh, validating indices and coordinate finiteness.
    pub fn new(vertices: Vec<Vec3<T>>, faces: Vec<[u32; 3]>) -> Result<Self> {
        let n = vertices.len() as u64;
        for (vi, v) in vertices.iter().enumerate() {
            if !vec3::is_finite(*v) {
                return Err(Error::Data(format!("vertex {vi} has non-finite coordinate")));
            }
        }
        for (fi, f) in faces.iter().enumerate() {
            for &idx in f {
                if u64::from(idx) >= n {
                    return Err(Error::Structure(format!(
                        "face {fi} references vertex {idx} but mesh has {n} vertices"
                    )));
                }
            }
        }
        let face_normals = compute_face_normals(&vertices, &faces);
        Ok(Self {
            vertices,
            faces,
            face_normals,
        })
    }

    /// Mesh with no vertices and no faces.
    pub fn empty() -> Self {
        Self {
            vertices: Vec::new(),
            faces: Vec::new(),
            face_normals: Vec::new(),
        }
    }

    pub fn vertices(&self) -> &[Vec3<T>] {
        &self.vertices
    }

    pub fn faces(&self) -> &[[u32; 3]] {
        &self.faces
    }

    /// Unit face normals; zero vectors for degenerate faces.
    pub fn face_normals(&self) -> &[Vec3<T>] {
        &self.face_normals
    }

    /// True when the mesh has zero faces (the empty-prediction state).
    pub fn is_empty_mesh(&self) -> bool {
        self.faces.is_empty()
    }

    /// The three corner positions of face `fi`.
    #[inline]
    pub fn face_vertices(&self, fi: usize) -> [Vec3<T>; 3] {
        let [a, b, c] = self.faces[fi];
        [
            self.vertices[a as usize],
            self.vertices[b as usize],
            self.vertices[c as usize],
        ]
    }

    #[inline]
    pub fn face_area(&self, fi: usize) -> T {
        let [a, b, c] = self.face_vertices(fi);
        vec3::triangle_area(a, b, c)
    }

    pub fn total_area(&self) -> T {
        (0..self.faces.len())
            .map(|fi| self.face_area(fi))
            .fold(T::zero(), |acc, a| acc + a)
    }

    /// Indices of zero-area faces.
    pub fn degenerate_faces(&self) -> Vec<u32> {
        (0..self.faces.len())
            .filter(|&fi| self.face_area(fi) == T::zero())
            .map(|fi| fi as u32)
            .collect()
    }

    /// Applies `v -> rot * (v - pivot) + pivot` to every vertex and
    /// recomputes face normals.
    pub(crate) fn transformed_about(&self, rot: &Mat3<T>, pivot: Vec3<T>) -> Self {
        let vertices: Vec<Vec3<T>> = self
            .vertices
            .iter()
            .map(|&v| vec3::add(vec3::mat_vec(rot, vec3::sub(v, pivot)), pivot))
            .collect();
        let face_normals = compute_face_normals(&vertices, &self.faces);
        Self {
            vertices,
            faces: self.faces.clone(),
            face_normals,
        }
    }

    /// Area-weighted per-vertex normals (used by interpolated-normal
    /// sampling; flat face normals are the metric-facing default).
    pub fn vertex_normals(&self) -> Vec<Vec3<T>> {
        let mut acc = vec![[T::zero(); 3]; self.vertices.len()];
        for (fi, f) in self.faces.iter().enumerate() {
            let [a, b, c] = self.face_vertices(fi);
            let av = vec3::triangle_area_vector(a, b, c);
            for &vi in f {
                acc[vi as usize] = vec3::add(acc[vi as usize], av);
            }
        }
        acc.into_iter().map(vec3::normalize).collect()
    }
}

fn compute_face_normals<T: Real>(vertices: &[Vec3<T>], faces: &[[u32; 3]]) -> Vec<Vec3<T>> {
    faces
        .iter()
        .map(|&[a, b, c]| {
            let (a, b, c) = (
                vertices[a as usize],
                vertices[b as usize],
                vertices[c as usize],
            );
            vec3::normalize(vec3::cross(vec3::sub(b, a), vec3::sub(c, a)))
        })
        .collect()
}

/// Axis-aligned bounding box.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct Aabb<T: Real> {
    pub min: Vec3<T>,
    pub max: Vec3<T>,
}

impl<T: Real> Aabb<T> {
    /// Requires `min <= max` componentwise.
    pub fn new(min: Vec3<T>, max: Vec3<T>) -> Result<Self> {
        for a in 0..3 {
            if !(min[a] <= max[a]) {
                return Err(Error::Domain(format!(
                    "aabb min {} exceeds max {} on axis {a}",
                    min[a].to64(),
                    max[a].to64()
                )));
            }
        }
        Ok(Self { min, max })
    }

    /// Cube of side `side` centered at `center`.
    pub fn cube(center: Vec3<T>, side: T) -> Self {
        let h = side * T::of(0.5);
        Self {
            min: vec3::sub(center, [h, h, h]),
            max: vec3::add(center, [h, h, h]),
        }
    }

    pub fn from_points(points: &[Vec3<T>]) -> Result<Self> {
        let first = *points
            .first()
            .ok_or(Error::EmptyGeometry("no points for bounding box"))?;
        let mut min = first;
        let mut max = first;
        for &p in &points[1..] {
            min = vec3::componentwise_min(min, p);
            max = vec3::componentwise_max(max, p);
        }
        Ok(Self { min, max })
    }

    #[inline]
    pub fn center(&self) -> Vec3<T> {
        vec3::scale(vec3::add(self.min, self.max), T::of(0.5))
    }

    #[inline]
    pub fn extent(&self) -> Vec3<T> {
        vec3::sub(self.max, self.min)
    }

    pub fn longest_side(&self) -> T {
        let e = self.extent();
        e[0].max(e[1]).max(e[2])
    }

    pub fn contains(&self, p: Vec3<T>) -> bool {
        (0..3).all(|a| p[a] >= self.min[a] && p[a] <= self.max[a])
    }

    /// Squared distance from `p` to the box (zero inside).
    #[inline]
    pub fn dist2(&self, p: Vec3<T>) -> T {
        let mut d2 = T::zero();
        for a in 0..3 {
            let d = if p[a] < self.min[a] {
                self.min[a] - p[a]
            } else if p[a] > self.max[a] {
                p[a] - self.max[a]
            } else {
                T::zero()
            };
            d2 = d2 + d * d;
        }
        d2
    }

    pub fn union(&self, other: &Self) -> Self {
        Self {
            min: vec3::componentwise_min(self.min, other.min),
            max: vec3::componentwise_max(self.max, other.max),
        }
    }
}

/// Tight axis-aligned bounds of a mesh. Errors on an empty vertex list.
pub fn bounding_box<T: Real>(mesh: &TriangleMesh<T>) -> Result<Aabb<T>> {
    Aabb::from_points(mesh.vertices())
}

/// Copy of `mesh` with every vertex shifted by `delta`.
pub fn translated<T: Real>(mesh: &TriangleMesh<T>, delta: Vec3<T>) -> TriangleMesh<T> {
    let vertices = mesh.vertices().iter().map(|&v| vec3::add(v, delta)).collect();
    TriangleMesh::new(vertices, mesh.faces().to_vec()).expect("translation preserves validity")
}

/// Copy of `mesh` with per-axis scale factors applied about the origin.
/// Normals are recomputed, so anisotropic factors stay correct.
pub fn scaled_axes<T: Real>(mesh: &TriangleMesh<T>, factors: Vec3<T>) -> TriangleMesh<T> {
    let vertices = mesh
        .vertices()
        .iter()
        .map(|&v| [v[0] * factors[0], v[1] * factors[1], v[2] * factors[2]])
        .collect();
    TriangleMesh::new(vertices, mesh.faces().to_vec()).expect("scaling preserves validity")
}

/// Disjoint union of two meshes (vertex indices of `b` are shifted).
pub fn concat<T: Real>(a: &TriangleMesh<T>, b: &TriangleMesh<T>) -> TriangleMesh<T> {
    let offset = a.vertices().len() as u32;
    let mut vertices = a.vertices().to_vec();
    vertices.extend_from_slice(b.vertices());
    let mut faces = a.faces().to_vec();
    faces.extend(
        b.faces()
            .iter()
            .map(|&[x, y, z]| [x + offset, y + offset, z + offset]),
    );
    TriangleMesh::new(vertices, faces).expect("concatenation preserves validity")
}

/// The similarity transform produced by [`normalize_to_unit_cube`]:
/// `v' = scale * (v + offset)`.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct UnitCubeTransform<T: Real> {
    pub scale: T,
    pub offset: Vec3<T>,
}

impl<T: Real> UnitCubeTransform<T> {
    #[inline]
    pub fn apply(&self, v: Vec3<T>) -> Vec3<T> {
        vec3::scale(vec3::add(v, self.offset), self.scale)
    }

    /// Maps a normalized-space point back to the original frame.
    #[inline]
    pub fn invert(&self, v: Vec3<T>) -> Vec3<T> {
        vec3::sub(vec3::scale(v, T::one() / self.scale), self.offset)
    }
}

/// Rescales a mesh so its bounding box is centered at the origin with the
/// longest side equal to 1, returning the transform that reproduces it.
///
/// Both meshes of an evaluation pair go through this before any metric is
/// computed, so thresholds expressed as a fraction of the reconstruction
/// volume are comparable across shapes.
pub fn normalize_to_unit_cube<T: Real>(
    mesh: &TriangleMesh<T>,
) -> Result<(TriangleMesh<T>, UnitCubeTransform<T>)> {
    if mesh.vertices().is_empty() {
        return Err(Error::EmptyGeometry("cannot normalize mesh with no vertices"));
    }
    let bbox = bounding_box(mesh)?;
    let longest = bbox.longest_side();
    if longest <= T::zero() {
        return Err(Error::DegenerateGeometry(
            "mesh has zero extent on every axis",
        ));
    }
    let transform = UnitCubeTransform {
        scale: T::one() / longest,
        offset: vec3::neg(bbox.center()),
    };
    let vertices = mesh
        .vertices()
        .iter()
        .map(|&v| transform.apply(v))
        .collect();
    let normalized = TriangleMesh::new(vertices, mesh.faces().to_vec())?;
    Ok((normalized, transform))
}
