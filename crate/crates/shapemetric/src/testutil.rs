//! Shared oracles for unit tests: brute-force and analytic references that
//! independent implementations are checked against.

use crate::mesh::TriangleMesh;
use crate::vec3::{self, Vec3};
use crate::Real;
use std::collections::HashMap;

/// Enclosed volume via the divergence theorem (sum of signed tetrahedra
/// against the origin). Positive for closed outward-oriented surfaces.
pub fn signed_volume<T: Real>(mesh: &TriangleMesh<T>) -> f64 {
    let mut v = 0.0;
    for fi in 0..mesh.faces().len() {
        let [a, b, c] = mesh.face_vertices(fi);
        let a = [a[0].to64(), a[1].to64(), a[2].to64()];
        let b = [b[0].to64(), b[1].to64(), b[2].to64()];
        let c = [c[0].to64(), c[1].to64(), c[2].to64()];
        v += vec3::dot(a, vec3::cross(b, c)) / 6.0;
    }
    v
}

/// Verifies the mesh is a closed surface with consistent orientation: every
/// undirected edge is used by exactly two faces, once per direction.
pub fn check_closed_oriented<T: Real>(mesh: &TriangleMesh<T>) -> Result<(), String> {
    // counts[(lo, hi)] = (lo->hi uses, hi->lo uses)
    let mut counts: HashMap<(u32, u32), (u32, u32)> = HashMap::new();
    for f in mesh.faces() {
        for k in 0..3 {
            let (a, b) = (f[k], f[(k + 1) % 3]);
            if a == b {
                return Err(format!("face {f:?} repeats vertex {a}"));
            }
            let entry = counts.entry((a.min(b), a.max(b))).or_insert((0, 0));
            if a < b {
                entry.0 += 1;
            } else {
                entry.1 += 1;
            }
        }
    }
    for (&(a, b), &(fwd, rev)) in &counts {
        if (fwd, rev) != (1, 1) {
            return Err(format!(
                "edge ({a},{b}) used {fwd} times forward and {rev} times backward"
            ));
        }
    }
    Ok(())
}

/// Euler characteristic V − E + F (2 per sphere-topology component,
/// 0 for a torus).
pub fn euler_characteristic<T: Real>(mesh: &TriangleMesh<T>) -> i64 {
    let mut edges: Vec<(u32, u32)> = Vec::with_capacity(mesh.faces().len() * 3);
    for f in mesh.faces() {
        for k in 0..3 {
            let (a, b) = (f[k], f[(k + 1) % 3]);
            edges.push((a.min(b), a.max(b)));
        }
    }
    edges.sort_unstable();
    edges.dedup();
    mesh.vertices().len() as i64 - edges.len() as i64 + mesh.faces().len() as i64
}

/// Index of the nearest point to `q` by scanning every candidate; ties break
/// to the lowest index. The kd-tree must agree exactly.
pub fn brute_force_nearest<T: Real>(points: &[Vec3<T>], q: Vec3<T>) -> usize {
    assert!(!points.is_empty());
    let mut best = 0usize;
    let mut best_d2 = vec3::dist2(points[0], q);
    for (i, &p) in points.iter().enumerate().skip(1) {
        let d2 = vec3::dist2(p, q);
        if d2 < best_d2 {
            best = i;
            best_d2 = d2;
        }
    }
    best
}

/// Unsigned distance from `q` to the mesh by scanning every triangle.
pub fn brute_force_mesh_distance<T: Real>(mesh: &TriangleMesh<T>, q: Vec3<T>) -> T {
    let mut best = T::infinity();
    for fi in 0..mesh.faces().len() {
        let [a, b, c] = mesh.face_vertices(fi);
        let cp = crate::distance::closest_point_on_triangle(q, a, b, c);
        best = best.min(vec3::dist(cp, q));
    }
    best
}
