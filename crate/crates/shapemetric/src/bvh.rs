//! Bounding-volume hierarchy over mesh triangles: exact closest-point and
//! first-ray-hit queries, plus per-node area moments for the approximate
//! winding-number evaluation.

use crate::distance::{closest_point_on_triangle, ray_triangle, RayHit};
use crate::mesh::{Aabb, TriangleMesh};
use crate::vec3::{self, Vec3};
use crate::{Error, Real, Result};

const LEAF_SIZE: usize = 8;

#[derive(Debug, Clone)]
pub(crate) struct Tri<T: Real> {
    pub a: Vec3<T>,
    pub b: Vec3<T>,
    pub c: Vec3<T>,
    pub face_id: u32,
}

#[derive(Debug, Clone)]
pub(crate) struct Node<T: Real> {
    pub aabb: Aabb<T>,
    /// Child node indices for internal nodes; `start`/`count` range into the
    /// triangle array for leaves (`count > 0` marks a leaf).
    pub left: u32,
    pub right: u32,
    pub start: u32,
    pub count: u32,
    /// Sum of triangle area vectors in the subtree (dipole strength).
    pub area_vector: Vec3<T>,
    /// Area-weighted centroid of the subtree's triangles.
    pub centroid: Vec3<T>,
    /// Max distance from `centroid` to any subtree vertex.
    pub radius: T,
}

impl<T: Real> Node<T> {
    #[inline]
    pub fn is_leaf(&self) -> bool {
        self.count > 0
    }
}

/// Static triangle hierarchy built once per mesh.
pub struct Bvh<T: Real> {
    pub(crate) nodes: Vec<Node<T>>,
    pub(crate) tris: Vec<Tri<T>>,
}

/// Result of a closest-point query.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct ClosestHit<T: Real> {
    pub distance: T,
    pub point: Vec3<T>,
    pub face_id: u32,
}

impl<T: Real> Bvh<T> {
    /// Builds the hierarchy. Degenerate faces are kept: they are valid
    /// distance targets and contribute nothing to area moments.
    pub fn build(mesh: &TriangleMesh<T>) -> Result<Self> {
        if mesh.faces().is_empty() {
            return Err(Error::EmptyGeometry("cannot build a hierarchy over zero faces"));
        }
        let mut tris: Vec<Tri<T>> = (0..mesh.faces().len())
            .map(|fi| {
                let [a, b, c] = mesh.face_vertices(fi);
                Tri {
                    a,
                    b,
                    c,
                    face_id: fi as u32,
                }
            })
            .collect();
        let mut nodes = Vec::with_capacity(2 * tris.len() / LEAF_SIZE + 2);
        let n = tris.len();
        build_node(&mut nodes, &mut tris, 0, n);
        Ok(Self { nodes, tris })
    }

    pub fn n_faces(&self) -> usize {
        self.tris.len()
    }

    pub fn root_aabb(&self) -> &Aabb<T> {
        &self.nodes[0].aabb
    }

    /// Exact nearest point on the mesh surface: equal to the brute-force
    /// minimum over all triangles (same kernel, bound-based pruning only).
    pub fn closest_point(&self, q: Vec3<T>) -> ClosestHit<T> {
        let mut best = ClosestHit {
            distance: T::infinity(),
            point: q,
            face_id: u32::MAX,
        };
        let mut best_d2 = T::infinity();
        // manual stack: (node index, lower-bound dist2 of its aabb)
        let mut stack: Vec<(u32, T)> = Vec::with_capacity(64);
        stack.push((0, self.nodes[0].aabb.dist2(q)));
        while let Some((ni, bound)) = stack.pop() {
            if bound > best_d2 {
                continue;
            }
            let node = &self.nodes[ni as usize];
            if node.is_leaf() {
                for t in &self.tris[node.start as usize..(node.start + node.count) as usize] {
                    let cp = closest_point_on_triangle(q, t.a, t.b, t.c);
                    let d2 = vec3::dist2(cp, q);
                    if d2 < best_d2 {
                        best_d2 = d2;
                        best = ClosestHit {
                            distance: d2.sqrt(),
                            point: cp,
                            face_id: t.face_id,
                        };
                    }
                }
            } else {
                let (l, r) = (node.left, node.right);
                let dl = self.nodes[l as usize].aabb.dist2(q);
                let dr = self.nodes[r as usize].aabb.dist2(q);
                // push the farther child first so the nearer pops first
                if dl <= dr {
                    stack.push((r, dr));
                    stack.push((l, dl));
                } else {
                    stack.push((l, dl));
                    stack.push((r, dr));
                }
            }
        }
        best
    }

    /// First triangle crossing along the ray at parameter `t >= t_min`.
    pub fn ray_first_hit(
        &self,
        origin: Vec3<T>,
        dir: Vec3<T>,
        t_min: T,
    ) -> Option<(RayHit<T>, u32)> {
        let mut best: Option<(RayHit<T>, u32)> = None;
        let mut best_t = T::infinity();
        let mut stack: Vec<u32> = Vec::with_capacity(64);
        stack.push(0);
        while let Some(ni) = stack.pop() {
            let node = &self.nodes[ni as usize];
            match ray_aabb(&node.aabb, origin, dir) {
                Some((enter, exit)) if enter <= best_t && exit >= t_min => {}
                _ => continue,
            }
            if node.is_leaf() {
                for t in &self.tris[node.start as usize..(node.start + node.count) as usize] {
                    if let Some(hit) = ray_triangle(origin, dir, t.a, t.b, t.c, t_min) {
                        if hit.t < best_t {
                            best_t = hit.t;
                            best = Some((hit, t.face_id));
                        }
                    }
                }
            } else {
                stack.push(node.left);
                stack.push(node.right);
            }
        }
        best
    }
}

/// Ray/box overlap interval, exact for axis-parallel rays.
fn ray_aabb<T: Real>(b: &Aabb<T>, o: Vec3<T>, d: Vec3<T>) -> Option<(T, T)> {
    let mut t0 = T::neg_infinity();
    let mut t1 = T::infinity();
    for a in 0..3 {
        if d[a] == T::zero() {
            if o[a] < b.min[a] || o[a] > b.max[a] {
                return None;
            }
        } else {
            let inv = T::one() / d[a];
            let mut ta = (b.min[a] - o[a]) * inv;
            let mut tb = (b.max[a] - o[a]) * inv;
            if ta > tb {
                std::mem::swap(&mut ta, &mut tb);
            }
            t0 = t0.max(ta);
            t1 = t1.min(tb);
            if t0 > t1 {
                return None;
            }
        }
    }
    Some((t0, t1))
}

/// Recursively builds the subtree over `tris[start..start+count]`, returning
/// its node index. Splits at the spatial midpoint of the widest centroid
/// axis, falling back to the median when the midpoint puts everything on one
/// side.
fn build_node<T: Real>(
    nodes: &mut Vec<Node<T>>,
    tris: &mut [Tri<T>],
    start: usize,
    count: usize,
) -> u32 {
    let slice = &tris[start..start + count];
    let mut aabb = Aabb {
        min: slice[0].a,
        max: slice[0].a,
    };
    for t in slice {
        for p in [t.a, t.b, t.c] {
            aabb.min = vec3::componentwise_min(aabb.min, p);
            aabb.max = vec3::componentwise_max(aabb.max, p);
        }
    }
    let (area_vector, centroid, radius) = area_moments(slice, &aabb);

    let index = nodes.len() as u32;
    nodes.push(Node {
        aabb,
        left: 0,
        right: 0,
        start: start as u32,
        count: count as u32,
        area_vector,
        centroid,
        radius,
    });
    if count <= LEAF_SIZE {
        return index;
    }

    // centroid bounds pick the split axis
    let mut cmin = vec3::triangle_centroid(slice[0].a, slice[0].b, slice[0].c);
    let mut cmax = cmin;
    for t in slice {
        let c = vec3::triangle_centroid(t.a, t.b, t.c);
        cmin = vec3::componentwise_min(cmin, c);
        cmax = vec3::componentwise_max(cmax, c);
    }
    let ext = vec3::sub(cmax, cmin);
    let axis = if ext[0] >= ext[1] && ext[0] >= ext[2] {
        0
    } else if ext[1] >= ext[2] {
        1
    } else {
        2
    };

    let split = (cmin[axis] + cmax[axis]) * T::of(0.5);
    let slice = &mut tris[start..start + count];
    let mut mid = partition(slice, |t| {
        vec3::triangle_centroid(t.a, t.b, t.c)[axis] < split
    });
    if mid == 0 || mid == count {
        // midpoint failed (all centroids on one side): median split
        mid = count / 2;
        slice.select_nth_unstable_by(mid, |x, y| {
            let cx = vec3::triangle_centroid(x.a, x.b, x.c)[axis];
            let cy = vec3::triangle_centroid(y.a, y.b, y.c)[axis];
            cx.partial_cmp(&cy).unwrap_or(std::cmp::Ordering::Equal)
        });
    }

    let left = build_node(nodes, tris, start, mid);
    let right = build_node(nodes, tris, start + mid, count - mid);
    let node = &mut nodes[index as usize];
    node.left = left;
    node.right = right;
    node.count = 0;
    index
}

/// (area-vector sum, area-weighted centroid, bounding radius about it).
fn area_moments<T: Real>(tris: &[Tri<T>], aabb: &Aabb<T>) -> (Vec3<T>, Vec3<T>, T) {
    let mut area_vector = [T::zero(); 3];
    let mut weighted = [T::zero(); 3];
    let mut total_area = T::zero();
    for t in tris {
        let av = vec3::triangle_area_vector(t.a, t.b, t.c);
        area_vector = vec3::add(area_vector, av);
        let area = vec3::norm(av);
        weighted = vec3::add(weighted, vec3::scale(vec3::triangle_centroid(t.a, t.b, t.c), area));
        total_area += area;
    }
    let centroid = if total_area > T::zero() {
        vec3::scale(weighted, T::one() / total_area)
    } else {
        aabb.center()
    };
    let mut radius = T::zero();
    for t in tris {
        for p in [t.a, t.b, t.c] {
            radius = radius.max(vec3::dist(p, centroid));
        }
    }
    (area_vector, centroid, radius)
}

/// In-place stable-order-free partition; returns the boundary index.
fn partition<T, F: Fn(&T) -> bool>(slice: &mut [T], pred: F) -> usize {
    let mut i = 0;
    for j in 0..slice.len() {
        if pred(&slice[j]) {
            slice.swap(i, j);
            i += 1;
        }
    }
    i
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::primitives;
    use crate::rng::rng_from_seed;
    use crate::testutil::brute_force_mesh_distance;
    use rand::Rng as _;

    fn random_point(rng: &mut crate::rng::Rng, half: f64) -> [f64; 3] {
        [
            rng.random_range(-half..half),
            rng.random_range(-half..half),
            rng.random_range(-half..half),
        ]
    }

    #[test]
    fn closest_point_matches_brute_force() {
        let meshes = [
            primitives::icosphere(3, 0.5, [0.0; 3]).unwrap(),
            primitives::torus(24, 12, 0.5, 0.2).unwrap(),
            primitives::box_mesh([1.0, 0.3, 0.7]).unwrap(),
        ];
        let mut rng = rng_from_seed(31);
        for mesh in &meshes {
            let bvh = Bvh::build(mesh).unwrap();
            for _ in 0..300 {
                let q = random_point(&mut rng, 1.0);
                let hit = bvh.closest_point(q);
                let exact = brute_force_mesh_distance(mesh, q);
                assert!(
                    (hit.distance - exact).abs() <= 1e-9,
                    "hierarchy {} vs brute force {exact}",
                    hit.distance
                );
                // the returned point must realize the returned distance on
                // the returned face
                let [a, b, c] = mesh.face_vertices(hit.face_id as usize);
                let cp = closest_point_on_triangle(q, a, b, c);
                assert!((vec3::dist(cp, q) - hit.distance).abs() <= 1e-12);
            }
        }
    }

    #[test]
    fn closest_point_handles_degenerate_faces() {
        let mesh = crate::TriangleMesh::<f64>::new(
            vec![
                [0.0, 0.0, 0.0],
                [1.0, 0.0, 0.0],
                [0.0, 1.0, 0.0],
                [5.0, 5.0, 5.0],
                [6.0, 5.0, 5.0],
            ],
            vec![[0, 1, 2], [3, 3, 4], [3, 4, 4]],
        )
        .unwrap();
        let bvh = Bvh::build(&mesh).unwrap();
        // nearest geometry to this query is the degenerate segment at (5,5,5)
        let hit = bvh.closest_point([5.5, 5.1, 5.0]);
        assert!((hit.distance - 0.1).abs() < 1e-12);
    }

    #[test]
    fn surface_points_have_zero_distance() {
        let mesh = primitives::icosphere(2, 0.5, [0.1, -0.2, 0.0]).unwrap();
        let bvh = Bvh::build(&mesh).unwrap();
        for v in mesh.vertices().iter().step_by(7) {
            assert!(bvh.closest_point(*v).distance < 1e-9);
        }
    }

    #[test]
    fn ray_first_hit_matches_brute_force() {
        let mesh = primitives::torus(24, 12, 0.5, 0.2).unwrap();
        let bvh = Bvh::build(&mesh).unwrap();
        let mut rng = rng_from_seed(77);
        let mut hits = 0;
        for _ in 0..300 {
            let origin = random_point(&mut rng, 1.2);
            let dir = vec3::normalize(random_point(&mut rng, 1.0));
            if dir == [0.0; 3] {
                continue;
            }
            let got = bvh.ray_first_hit(origin, dir, 0.0);
            let mut expect: Option<(f64, u32)> = None;
            for fi in 0..mesh.faces().len() {
                let [a, b, c] = mesh.face_vertices(fi);
                if let Some(h) = crate::distance::ray_triangle(origin, dir, a, b, c, 0.0) {
                    if expect.is_none_or(|(t, _)| h.t < t) {
                        expect = Some((h.t, fi as u32));
                    }
                }
            }
            match (got, expect) {
                (None, None) => {}
                (Some((h, _)), Some((t, _))) => {
                    hits += 1;
                    assert!((h.t - t).abs() < 1e-9);
                }
                (got, expect) => panic!("hierarchy {got:?} vs brute force {expect:?}"),
            }
        }
        assert!(hits > 20, "ray test exercised only {hits} hits");
    }

    #[test]
    fn sphere_ray_hits_at_analytic_depth() {
        let mesh = primitives::icosphere::<f64>(4, 0.5, [0.0; 3]).unwrap();
        let bvh = Bvh::build(&mesh).unwrap();
        let (hit, _) = bvh.ray_first_hit([0.0, 0.0, 2.0], [0.0, 0.0, -1.0], 0.0).unwrap();
        assert!((hit.t - 1.5).abs() < 2e-3);
        // from inside: first crossing going +z is the near shell
        let (hit, _) = bvh.ray_first_hit([0.0, 0.0, 0.0], [0.0, 0.0, 1.0], 0.0).unwrap();
        assert!((hit.t - 0.5).abs() < 2e-3);
    }

    #[test]
    fn axis_parallel_rays_are_exact() {
        let mesh = primitives::box_mesh::<f64>([1.0, 1.0, 1.0]).unwrap();
        let bvh = Bvh::build(&mesh).unwrap();
        let (hit, _) = bvh.ray_first_hit([0.2, 0.3, 5.0], [0.0, 0.0, -1.0], 0.0).unwrap();
        assert!((hit.t - 4.5).abs() < 1e-12);
        assert!(bvh.ray_first_hit([2.0, 0.0, 5.0], [0.0, 0.0, -1.0], 0.0).is_none());
    }

    #[test]
    fn t_min_skips_nearer_geometry() {
        let mesh = primitives::box_mesh::<f64>([1.0, 1.0, 1.0]).unwrap();
        let bvh = Bvh::build(&mesh).unwrap();
        // entering face at t=4.5, exiting face at t=5.5
        let (hit, _) = bvh.ray_first_hit([0.2, 0.3, 5.0], [0.0, 0.0, -1.0], 4.6).unwrap();
        assert!((hit.t - 5.5).abs() < 1e-12);
    }

    #[test]
    fn empty_mesh_is_rejected() {
        assert!(matches!(
            Bvh::build(&crate::TriangleMesh::<f64>::empty()),
            Err(Error::EmptyGeometry(_))
        ));
    }

    #[test]
    fn root_moments_cover_the_whole_mesh() {
        let mesh = primitives::icosphere::<f64>(2, 0.5, [0.0; 3]).unwrap();
        let bvh = Bvh::build(&mesh).unwrap();
        let root = &bvh.nodes[0];
        // closed surface: area vectors cancel
        assert!(vec3::norm(root.area_vector) < 1e-9);
        // centroid near the center, radius about the sphere radius
        assert!(vec3::norm(root.centroid) < 1e-6);
        assert!((root.radius - 0.5).abs() < 0.01);
    }
}
