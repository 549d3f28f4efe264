//! Generalized winding numbers for inside/outside classification.
//!
//! Two routes are kept deliberately: the exact per-triangle solid-angle sum,
//! and a hierarchy-accelerated far-field approximation (one dipole term per
//! node) that falls back to the exact near-field per subtree. The fast route
//! answers every bulk query; the exact route is its oracle in tests and its
//! fallback near the 0.5 decision boundary.

use crate::bvh::Bvh;
use crate::mesh::TriangleMesh;
use crate::vec3::{self, Vec3};
use crate::Real;

/// Far-field opening criterion: a node is far when the query is more than
/// `beta` node radii from the node's area centroid.
pub const DEFAULT_BETA: f64 = 2.0;

/// Half-width of the winding band around 0.5 inside which the fast estimate
/// is not trusted and the exact sum is used instead.
pub const EXACT_FALLBACK_BAND: f64 = 0.05;

/// Signed solid angle of triangle `abc` seen from `q`, in steradians.
/// Positive when the triangle's oriented normal faces away from `q`.
pub fn triangle_solid_angle<T: Real>(q: Vec3<T>, a: Vec3<T>, b: Vec3<T>, c: Vec3<T>) -> f64 {
    let to64 = |v: Vec3<T>| {
        [
            (v[0] - q[0]).to64(),
            (v[1] - q[1]).to64(),
            (v[2] - q[2]).to64(),
        ]
    };
    let (a, b, c) = (to64(a), to64(b), to64(c));
    let (la, lb, lc) = (vec3::norm(a), vec3::norm(b), vec3::norm(c));
    let numer = vec3::dot(a, vec3::cross(b, c));
    let denom = la * lb * lc
        + vec3::dot(a, b) * lc
        + vec3::dot(b, c) * la
        + vec3::dot(c, a) * lb;
    2.0 * numer.atan2(denom)
}

/// Exact generalized winding number: the solid-angle sum over every face,
/// divided by 4 pi. 1 deep inside a closed outward-oriented surface, 0
/// outside, fractional for open or self-intersecting geometry.
pub fn winding_number_exact<T: Real>(mesh: &TriangleMesh<T>, q: Vec3<T>) -> f64 {
    let mut total = 0.0;
    for fi in 0..mesh.faces().len() {
        let [a, b, c] = mesh.face_vertices(fi);
        total += triangle_solid_angle(q, a, b, c);
    }
    total / (4.0 * std::f64::consts::PI)
}

/// Fast winding number: far nodes contribute a single dipole term
/// `(c - q) . N / (4 pi d^3)`; near subtrees recurse down to exact
/// per-triangle solid angles at the leaves.
pub fn winding_number_fast<T: Real>(bvh: &Bvh<T>, q: Vec3<T>, beta: f64) -> f64 {
    let four_pi = 4.0 * std::f64::consts::PI;
    let mut total = 0.0;
    let mut stack: Vec<u32> = Vec::with_capacity(64);
    stack.push(0);
    while let Some(ni) = stack.pop() {
        let node = &bvh.nodes[ni as usize];
        let to_c = [
            (node.centroid[0] - q[0]).to64(),
            (node.centroid[1] - q[1]).to64(),
            (node.centroid[2] - q[2]).to64(),
        ];
        let d = vec3::norm(to_c);
        if d > beta * node.radius.to64() && d > 0.0 {
            let n = [
                node.area_vector[0].to64(),
                node.area_vector[1].to64(),
                node.area_vector[2].to64(),
            ];
            total += vec3::dot(to_c, n) / (four_pi * d * d * d);
        } else if node.is_leaf() {
            for t in &bvh.tris[node.start as usize..(node.start + node.count) as usize] {
                total += triangle_solid_angle(q, t.a, t.b, t.c) / four_pi;
            }
        } else {
            stack.push(node.left);
            stack.push(node.right);
        }
    }
    total
}

/// Winding number with the production policy: fast estimate, exact fallback
/// when the estimate is too close to the 0.5 boundary to trust.
pub fn winding_number<T: Real>(bvh: &Bvh<T>, mesh: &TriangleMesh<T>, q: Vec3<T>) -> f64 {
    let fast = winding_number_fast(bvh, q, DEFAULT_BETA);
    if (fast - 0.5).abs() < EXACT_FALLBACK_BAND {
        winding_number_exact(mesh, q)
    } else {
        fast
    }
}

/// Inside test: winding number above 0.5.
pub fn is_inside<T: Real>(bvh: &Bvh<T>, mesh: &TriangleMesh<T>, q: Vec3<T>) -> bool {
    winding_number(bvh, mesh, q) > 0.5
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::mesh::concat;
    use crate::primitives;
    use crate::rng::rng_from_seed;
    use crate::TriangleMesh;
    use rand::Rng as _;

    #[test]
    fn cube_center_subtends_the_full_sphere() {
        let mesh = primitives::box_mesh::<f64>([1.0, 1.0, 1.0]).unwrap();
        let w = winding_number_exact(&mesh, [0.0, 0.0, 0.0]);
        assert!((w - 1.0).abs() < 1e-12);
    }

    #[test]
    fn exact_winding_classifies_closed_shapes() {
        let shapes = [
            primitives::icosphere::<f64>(2, 0.5, [0.0; 3]).unwrap(),
            primitives::tetrahedron(0.8).unwrap(),
            primitives::torus(16, 8, 0.5, 0.2).unwrap(),
        ];
        for mesh in &shapes {
            assert!(winding_number_exact(mesh, [10.0, 0.0, 0.0]).abs() < 1e-9);
        }
        // torus: inside the tube vs inside the hole
        let torus = &shapes[2];
        assert!((winding_number_exact(torus, [0.5, 0.0, 0.0]) - 1.0).abs() < 1e-9);
        assert!(winding_number_exact(torus, [0.0, 0.0, 0.0]).abs() < 1e-9);
    }

    #[test]
    fn nested_shells_accumulate_winding() {
        let outer = primitives::icosphere::<f64>(2, 0.5, [0.0; 3]).unwrap();
        let inner = primitives::icosphere::<f64>(2, 0.25, [0.0; 3]).unwrap();
        let both = concat(&outer, &inner);
        let w = winding_number_exact(&both, [0.0, 0.0, 0.1]);
        assert!((w - 2.0).abs() < 1e-9, "winding {w}");
        let between = winding_number_exact(&both, [0.0, 0.0, 0.4]);
        assert!((between - 1.0).abs() < 1e-9);
    }

    #[test]
    fn degenerate_faces_contribute_nothing() {
        let mesh = TriangleMesh::<f64>::new(
            vec![[0.0, 0.0, 0.0], [1.0, 0.0, 0.0], [2.0, 0.0, 0.0]],
            vec![[0, 1, 2]],
        )
        .unwrap();
        assert_eq!(winding_number_exact(&mesh, [0.3, 0.8, -0.2]), 0.0);
    }

    #[test]
    fn open_meshes_degrade_gracefully() {
        let sphere = primitives::icosphere::<f64>(2, 0.5, [0.0; 3]).unwrap();
        // drop a few faces to open a hole
        let faces: Vec<[u32; 3]> = sphere.faces()[6..].to_vec();
        let open = TriangleMesh::new(sphere.vertices().to_vec(), faces).unwrap();
        let w_in = winding_number_exact(&open, [0.0, 0.0, 0.0]);
        let w_out = winding_number_exact(&open, [2.0, 0.0, 0.0]);
        assert!(w_in > 0.9, "deep interior stays clearly inside, got {w_in}");
        assert!(w_out.abs() < 0.1, "far exterior stays clearly outside, got {w_out}");
    }

    #[test]
    fn fast_winding_tracks_exact_away_from_the_surface() {
        let mesh = primitives::torus::<f64>(32, 16, 0.5, 0.2).unwrap();
        let bvh = Bvh::build(&mesh).unwrap();
        let mut rng = rng_from_seed(5);
        let mut checked = 0;
        for _ in 0..2000 {
            let q = [
                rng.random_range(-1.0..1.0),
                rng.random_range(-1.0..1.0),
                rng.random_range(-1.0..1.0),
            ];
            // stay off the surface so the classification is unambiguous
            if bvh.closest_point(q).distance < 1e-3 {
                continue;
            }
            let exact = winding_number_exact(&mesh, q);
            let fast = winding_number_fast(&bvh, q, DEFAULT_BETA);
            assert!(
                (exact - fast).abs() < 0.05,
                "at {q:?}: exact {exact} fast {fast}"
            );
            assert_eq!(
                is_inside(&bvh, &mesh, q),
                exact > 0.5,
                "classification differs at {q:?}"
            );
            checked += 1;
        }
        assert!(checked > 1900);
    }

    #[test]
    fn fallback_band_uses_the_exact_sum() {
        // a query in the torus hole plane: fast and policy must agree with
        // exact near the boundary region
        let mesh = primitives::torus::<f64>(16, 8, 0.5, 0.2).unwrap();
        let bvh = Bvh::build(&mesh).unwrap();
        for x in [0.28, 0.3, 0.32, 0.68, 0.7, 0.72] {
            let q = [x, 0.0, 0.0];
            let w = winding_number(&bvh, &mesh, q);
            let exact = winding_number_exact(&mesh, q);
            assert!((w - exact).abs() < 0.05, "x={x}: policy {w} exact {exact}");
        }
    }
}
