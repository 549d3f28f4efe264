//! Procedural primitive meshes and the bundled 20-shape test corpus.
//!
//! Every generator emits a closed, consistently outward-oriented 2-manifold,
//! so the shapes are usable for occupancy and winding checks as well as
//! surface sampling.

use crate::mesh::{concat, scaled_axes, translated, TriangleMesh};
use crate::vec3::Vec3;
use crate::{Error, Real, Result};
use std::collections::HashMap;

/// Axis-aligned box with the given side lengths, centered at the origin.
pub fn box_mesh<T: Real>(dims: Vec3<T>) -> Result<TriangleMesh<T>> {
    for a in 0..3 {
        if dims[a] <= T::zero() {
            return Err(Error::Domain(format!("box dimension {a} must be positive")));
        }
    }
    let h = [
        dims[0] * T::of(0.5),
        dims[1] * T::of(0.5),
        dims[2] * T::of(0.5),
    ];
    let vertices: Vec<Vec3<T>> = (0..8)
        .map(|i| {
            [
                if i & 1 == 0 { -h[0] } else { h[0] },
                if i & 2 == 0 { -h[1] } else { h[1] },
                if i & 4 == 0 { -h[2] } else { h[2] },
            ]
        })
        .collect();
    // Outward-CCW quads per box side, split into triangles.
    let quads: [[u32; 4]; 6] = [
        [0, 4, 6, 2], // -x
        [1, 3, 7, 5], // +x
        [0, 1, 5, 4], // -y
        [2, 6, 7, 3], // +y
        [0, 2, 3, 1], // -z
        [4, 5, 7, 6], // +z
    ];
    let mut faces = Vec::with_capacity(12);
    for q in quads {
        faces.push([q[0], q[1], q[2]]);
        faces.push([q[0], q[2], q[3]]);
    }
    TriangleMesh::new(vertices, faces)
}

/// Regular tetrahedron with circumradius `radius`, centered at the origin.
pub fn tetrahedron<T: Real>(radius: T) -> Result<TriangleMesh<T>> {
    let s = radius / T::of(3.0f64.sqrt());
    let vertices = vec![
        [s, s, s],
        [s, -s, -s],
        [-s, s, -s],
        [-s, -s, s],
    ];
    let faces = vec![[0, 1, 2], [0, 2, 3], [0, 3, 1], [1, 3, 2]];
    TriangleMesh::new(vertices, faces)
}

/// Regular octahedron with circumradius `radius`, centered at the origin.
pub fn octahedron<T: Real>(radius: T) -> Result<TriangleMesh<T>> {
    let r = radius;
    let z = T::zero();
    let vertices = vec![
        [r, z, z],
        [-r, z, z],
        [z, r, z],
        [z, -r, z],
        [z, z, r],
        [z, z, -r],
    ];
    let faces = vec![
        [0, 2, 4],
        [2, 1, 4],
        [1, 3, 4],
        [3, 0, 4],
        [2, 0, 5],
        [1, 2, 5],
        [3, 1, 5],
        [0, 3, 5],
    ];
    TriangleMesh::new(vertices, faces)
}

/// Icosphere: icosahedron subdivided `subdivisions` times, every vertex
/// projected to `radius` around `center`.
///
/// Vertex/face counts follow the subdivision recurrence
/// V = 10·4^s + 2, F = 20·4^s (so s=3 gives 642 vertices, 1280 faces).
pub fn icosphere<T: Real>(subdivisions: u32, radius: T, center: Vec3<T>) -> Result<TriangleMesh<T>> {
    if radius <= T::zero() {
        return Err(Error::Domain("icosphere radius must be positive".into()));
    }
    if subdivisions > 8 {
        return Err(Error::Domain(format!(
            "icosphere subdivision {subdivisions} exceeds the supported maximum of 8"
        )));
    }
    let t = (1.0 + 5.0f64.sqrt()) / 2.0;
    let base: [[f64; 3]; 12] = [
        [-1.0, t, 0.0],
        [1.0, t, 0.0],
        [-1.0, -t, 0.0],
        [1.0, -t, 0.0],
        [0.0, -1.0, t],
        [0.0, 1.0, t],
        [0.0, -1.0, -t],
        [0.0, 1.0, -t],
        [t, 0.0, -1.0],
        [t, 0.0, 1.0],
        [-t, 0.0, -1.0],
        [-t, 0.0, 1.0],
    ];
    let inv = 1.0 / (1.0 + t * t).sqrt();
    let mut vertices: Vec<[f64; 3]> = base
        .iter()
        .map(|v| [v[0] * inv, v[1] * inv, v[2] * inv])
        .collect();
    let mut faces: Vec<[u32; 3]> = vec![
        [0, 11, 5],
        [0, 5, 1],
        [0, 1, 7],
        [0, 7, 10],
        [0, 10, 11],
        [1, 5, 9],
        [5, 11, 4],
        [11, 10, 2],
        [10, 7, 6],
        [7, 1, 8],
        [3, 9, 4],
        [3, 4, 2],
        [3, 2, 6],
        [3, 6, 8],
        [3, 8, 9],
        [4, 9, 5],
        [2, 4, 11],
        [6, 2, 10],
        [8, 6, 7],
        [9, 8, 1],
    ];

    for _ in 0..subdivisions {
        let mut midpoint: HashMap<(u32, u32), u32> = HashMap::new();
        let mut next_faces = Vec::with_capacity(faces.len() * 4);
        for &[a, b, c] in &faces {
            let mut mid = |x: u32, y: u32, verts: &mut Vec<[f64; 3]>| -> u32 {
                let key = (x.min(y), x.max(y));
                *midpoint.entry(key).or_insert_with(|| {
                    let (p, q) = (verts[x as usize], verts[y as usize]);
                    let m = [p[0] + q[0], p[1] + q[1], p[2] + q[2]];
                    let len = (m[0] * m[0] + m[1] * m[1] + m[2] * m[2]).sqrt();
                    verts.push([m[0] / len, m[1] / len, m[2] / len]);
                    (verts.len() - 1) as u32
                })
            };
            let ab = mid(a, b, &mut vertices);
            let bc = mid(b, c, &mut vertices);
            let ca = mid(c, a, &mut vertices);
            next_faces.push([a, ab, ca]);
            next_faces.push([b, bc, ab]);
            next_faces.push([c, ca, bc]);
            next_faces.push([ab, bc, ca]);
        }
        faces = next_faces;
    }

    let vertices: Vec<Vec3<T>> = vertices
        .into_iter()
        .map(|v| {
            [
                T::of(v[0]) * radius + center[0],
                T::of(v[1]) * radius + center[1],
                T::of(v[2]) * radius + center[2],
            ]
        })
        .collect();
    TriangleMesh::new(vertices, faces)
}

/// Capped cylinder along the Y axis, centered at the origin.
pub fn cylinder<T: Real>(segments: usize, radius: T, height: T) -> Result<TriangleMesh<T>> {
    if segments < 3 {
        return Err(Error::Domain(format!(
            "cylinder needs at least 3 segments, got {segments}"
        )));
    }
    if radius <= T::zero() || height <= T::zero() {
        return Err(Error::Domain("cylinder radius and height must be positive".into()));
    }
    let n = segments as u32;
    let hy = height * T::of(0.5);
    let mut vertices = Vec::with_capacity(segments * 2 + 2);
    for ring in 0..2 {
        let y = if ring == 0 { -hy } else { hy };
        for i in 0..segments {
            let th = 2.0 * std::f64::consts::PI * i as f64 / segments as f64;
            vertices.push([radius * T::of(th.cos()), y, radius * T::of(th.sin())]);
        }
    }
    let bottom_center = vertices.len() as u32;
    vertices.push([T::zero(), -hy, T::zero()]);
    let top_center = vertices.len() as u32;
    vertices.push([T::zero(), hy, T::zero()]);

    let mut faces = Vec::with_capacity(segments * 4);
    for i in 0..n {
        let j = (i + 1) % n;
        let (bi, bj, ti, tj) = (i, j, n + i, n + j);
        faces.push([bi, ti, tj]);
        faces.push([bi, tj, bj]);
        faces.push([bottom_center, bi, bj]);
        faces.push([top_center, tj, ti]);
    }
    TriangleMesh::new(vertices, faces)
}

/// Capped cone along the Y axis (base at −height/2, apex at +height/2).
pub fn cone<T: Real>(segments: usize, radius: T, height: T) -> Result<TriangleMesh<T>> {
    if segments < 3 {
        return Err(Error::Domain(format!(
            "cone needs at least 3 segments, got {segments}"
        )));
    }
    if radius <= T::zero() || height <= T::zero() {
        return Err(Error::Domain("cone radius and height must be positive".into()));
    }
    let n = segments as u32;
    let hy = height * T::of(0.5);
    let mut vertices = Vec::with_capacity(segments + 2);
    for i in 0..segments {
        let th = 2.0 * std::f64::consts::PI * i as f64 / segments as f64;
        vertices.push([radius * T::of(th.cos()), -hy, radius * T::of(th.sin())]);
    }
    let apex = vertices.len() as u32;
    vertices.push([T::zero(), hy, T::zero()]);
    let base_center = vertices.len() as u32;
    vertices.push([T::zero(), -hy, T::zero()]);

    let mut faces = Vec::with_capacity(segments * 2);
    for i in 0..n {
        let j = (i + 1) % n;
        faces.push([i, apex, j]);
        faces.push([base_center, i, j]);
    }
    TriangleMesh::new(vertices, faces)
}

/// Torus around the Y axis: tube radius `minor_radius` swept along a circle
/// of radius `major_radius` in the XZ plane.
pub fn torus<T: Real>(
    major_segments: usize,
    minor_segments: usize,
    major_radius: T,
    minor_radius: T,
) -> Result<TriangleMesh<T>> {
    if major_segments < 3 || minor_segments < 3 {
        return Err(Error::Domain("torus needs at least 3 segments per loop".into()));
    }
    if minor_radius <= T::zero() || major_radius <= minor_radius {
        return Err(Error::Domain(
            "torus requires 0 < minor_radius < major_radius".into(),
        ));
    }
    let (nu, nv) = (major_segments, minor_segments);
    let mut vertices = Vec::with_capacity(nu * nv);
    for i in 0..nu {
        let u = 2.0 * std::f64::consts::PI * i as f64 / nu as f64;
        for j in 0..nv {
            let v = 2.0 * std::f64::consts::PI * j as f64 / nv as f64;
            let s = major_radius + minor_radius * T::of(v.cos());
            vertices.push([
                s * T::of(u.cos()),
                minor_radius * T::of(v.sin()),
                s * T::of(u.sin()),
            ]);
        }
    }
    let idx = |i: usize, j: usize| (i % nu * nv + j % nv) as u32;
    let mut faces = Vec::with_capacity(nu * nv * 2);
    for i in 0..nu {
        for j in 0..nv {
            let (a, b, c, d) = (idx(i, j), idx(i + 1, j), idx(i + 1, j + 1), idx(i, j + 1));
            faces.push([a, d, b]);
            faces.push([b, d, c]);
        }
    }
    TriangleMesh::new(vertices, faces)
}

/// Capsule along the Y axis: cylinder of length `height` with hemispherical
/// ends of radius `radius`, centered at the origin.
pub fn capsule<T: Real>(
    slices: usize,
    stacks: usize,
    radius: T,
    height: T,
) -> Result<TriangleMesh<T>> {
    if slices < 3 || stacks < 1 {
        return Err(Error::Domain("capsule needs slices >= 3 and stacks >= 1".into()));
    }
    if radius <= T::zero() || height <= T::zero() {
        return Err(Error::Domain("capsule radius and height must be positive".into()));
    }
    let hy = height.to64() * 0.5;
    let r = radius.to64();
    let n = slices as u32;

    // Ring ladder from the south pole to the north pole. Each entry is
    // (y, ring radius); the two hemisphere equators sit exactly at ±height/2
    // so the straight side joins them.
    let mut rings: Vec<(f64, f64)> = Vec::new();
    for k in 1..=stacks {
        let phi = std::f64::consts::PI * (1.0 - 0.5 * k as f64 / stacks as f64);
        rings.push((-hy + r * phi.cos(), r * phi.sin()));
    }
    for k in 0..stacks {
        let phi = std::f64::consts::PI * (0.5 - 0.5 * k as f64 / stacks as f64);
        rings.push((hy + r * phi.cos(), r * phi.sin()));
    }

    let mut vertices: Vec<Vec3<T>> = Vec::with_capacity(rings.len() * slices + 2);
    let south = 0u32;
    vertices.push([T::zero(), T::of(-hy - r), T::zero()]);
    for &(y, rr) in &rings {
        for i in 0..slices {
            let th = 2.0 * std::f64::consts::PI * i as f64 / slices as f64;
            vertices.push([T::of(rr * th.cos()), T::of(y), T::of(rr * th.sin())]);
        }
    }
    let north = vertices.len() as u32;
    vertices.push([T::zero(), T::of(hy + r), T::zero()]);

    let ring_start = |ring: usize| 1 + (ring as u32) * n;
    let mut faces = Vec::new();
    for i in 0..n {
        let j = (i + 1) % n;
        faces.push([south, ring_start(0) + i, ring_start(0) + j]);
        let last = ring_start(rings.len() - 1);
        faces.push([north, last + j, last + i]);
    }
    for ring in 0..rings.len() - 1 {
        let (lo, hi) = (ring_start(ring), ring_start(ring + 1));
        for i in 0..n {
            let j = (i + 1) % n;
            faces.push([lo + i, hi + i, hi + j]);
            faces.push([lo + i, hi + j, lo + j]);
        }
    }
    TriangleMesh::new(vertices, faces)
}

/// The bundled test corpus: 20 closed primitive meshes with stable names,
/// covering boxes, platonic solids, spheres at several tessellations,
/// prisms, cones, tori, a capsule, and two multi-component shapes.
pub fn primitive_corpus<T: Real>() -> Vec<(String, TriangleMesh<T>)> {
    let z = [T::zero(); 3];
    let shapes: Vec<(&str, TriangleMesh<T>)> = vec![
        ("cube", box_mesh([T::of(1.0), T::of(1.0), T::of(1.0)]).unwrap()),
        ("slab", box_mesh([T::of(1.6), T::of(0.2), T::of(1.0)]).unwrap()),
        ("rod", box_mesh([T::of(0.15), T::of(1.8), T::of(0.15)]).unwrap()),
        ("tetrahedron", tetrahedron(T::of(0.9)).unwrap()),
        ("octahedron", octahedron(T::of(0.9)).unwrap()),
        ("icosahedron", icosphere(0, T::of(0.8), z).unwrap()),
        ("sphere_coarse", icosphere(1, T::of(0.8), z).unwrap()),
        ("sphere", icosphere(3, T::of(0.8), z).unwrap()),
        (
            "ellipsoid",
            scaled_axes(
                &icosphere(3, T::of(1.0), z).unwrap(),
                [T::of(0.9), T::of(0.5), T::of(0.3)],
            ),
        ),
        ("cylinder", cylinder(48, T::of(0.5), T::of(1.4)).unwrap()),
        ("prism_hex", cylinder(6, T::of(0.6), T::of(1.0)).unwrap()),
        ("prism_tri", cylinder(3, T::of(0.7), T::of(0.9)).unwrap()),
        ("disc", cylinder(64, T::of(0.9), T::of(0.12)).unwrap()),
        ("cone", cone(48, T::of(0.6), T::of(1.2)).unwrap()),
        ("pyramid", cone(4, T::of(0.8), T::of(1.0)).unwrap()),
        ("torus", torus(48, 24, T::of(0.6), T::of(0.25)).unwrap()),
        ("torus_thin", torus(64, 16, T::of(0.7), T::of(0.08)).unwrap()),
        ("capsule", capsule(32, 8, T::of(0.3), T::of(1.0)).unwrap()),
        ("two_spheres", {
            let s = icosphere(2, T::of(0.45), z).unwrap();
            concat(
                &translated(&s, [T::of(-0.55), T::zero(), T::zero()]),
                &translated(&s, [T::of(0.55), T::zero(), T::zero()]),
            )
        }),
        ("tower", {
            let base = translated(
                &box_mesh([T::of(1.2), T::of(0.3), T::of(1.2)]).unwrap(),
                [T::zero(), T::of(-0.35), T::zero()],
            );
            let post = translated(
                &box_mesh([T::of(0.5), T::of(0.8), T::of(0.5)]).unwrap(),
                [T::zero(), T::of(0.15), T::zero()],
            );
            concat(&base, &post)
        }),
    ];
    shapes
        .into_iter()
        .map(|(name, mesh)| (name.to_string(), mesh))
        .collect()
}
