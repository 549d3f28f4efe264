//! Exact point-triangle and ray-triangle kernels.

use crate::vec3::{self, Vec3};
use crate::Real;

/// Closest point to `p` on segment `ab`.
pub fn closest_point_on_segment<T: Real>(p: Vec3<T>, a: Vec3<T>, b: Vec3<T>) -> Vec3<T> {
    let ab = vec3::sub(b, a);
    let len2 = vec3::norm2(ab);
    if len2 == T::zero() {
        return a;
    }
    let t = (vec3::dot(vec3::sub(p, a), ab) / len2)
        .max(T::zero())
        .min(T::one());
    vec3::add(a, vec3::scale(ab, t))
}

/// Closest point to `p` on triangle `abc` (Voronoi-region case analysis).
///
/// Degenerate triangles (collinear or coincident corners) fall back to the
/// nearest point over the three edges, so the result is always finite.
pub fn closest_point_on_triangle<T: Real>(
    p: Vec3<T>,
    a: Vec3<T>,
    b: Vec3<T>,
    c: Vec3<T>,
) -> Vec3<T> {
    let ab = vec3::sub(b, a);
    let ac = vec3::sub(c, a);
    let ap = vec3::sub(p, a);
    let d1 = vec3::dot(ab, ap);
    let d2 = vec3::dot(ac, ap);
    if d1 <= T::zero() && d2 <= T::zero() {
        return a;
    }

    let bp = vec3::sub(p, b);
    let d3 = vec3::dot(ab, bp);
    let d4 = vec3::dot(ac, bp);
    if d3 >= T::zero() && d4 <= d3 {
        return b;
    }

    let vc = d1 * d4 - d3 * d2;
    if vc <= T::zero() && d1 >= T::zero() && d3 <= T::zero() {
        let v = d1 / (d1 - d3);
        return vec3::add(a, vec3::scale(ab, v));
    }

    let cp = vec3::sub(p, c);
    let d5 = vec3::dot(ab, cp);
    let d6 = vec3::dot(ac, cp);
    if d6 >= T::zero() && d5 <= d6 {
        return c;
    }

    let vb = d5 * d2 - d1 * d6;
    if vb <= T::zero() && d2 >= T::zero() && d6 <= T::zero() {
        let w = d2 / (d2 - d6);
        return vec3::add(a, vec3::scale(ac, w));
    }

    let va = d3 * d6 - d5 * d4;
    if va <= T::zero() && d4 - d3 >= T::zero() && d5 - d6 >= T::zero() {
        let w = (d4 - d3) / ((d4 - d3) + (d5 - d6));
        return vec3::add(b, vec3::scale(vec3::sub(c, b), w));
    }

    // va+vb+vc equals |ab x ac|^2; zero means a degenerate triangle that
    // slipped past the edge-region tests.
    let sum = va + vb + vc;
    if !(sum > T::zero()) {
        let candidates = [
            closest_point_on_segment(p, a, b),
            closest_point_on_segment(p, b, c),
            closest_point_on_segment(p, c, a),
        ];
        let mut best = candidates[0];
        for &q in &candidates[1..] {
            if vec3::dist2(p, q) < vec3::dist2(p, best) {
                best = q;
            }
        }
        return best;
    }
    let denom = T::one() / sum;
    let v = vb * denom;
    let w = vc * denom;
    vec3::add(a, vec3::add(vec3::scale(ab, v), vec3::scale(ac, w)))
}

/// Squared distance from `p` to triangle `abc`.
#[inline]
pub fn point_triangle_dist2<T: Real>(p: Vec3<T>, a: Vec3<T>, b: Vec3<T>, c: Vec3<T>) -> T {
    vec3::dist2(p, closest_point_on_triangle(p, a, b, c))
}

/// A ray-triangle crossing: parameter along the ray plus barycentric
/// coordinates of the hit point (`u` toward `b`, `v` toward `c`).
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct RayHit<T> {
    pub t: T,
    pub u: T,
    pub v: T,
}

/// Two-sided ray-triangle intersection. Returns hits with `t >= t_min`;
/// rays parallel to the triangle plane are misses.
pub fn ray_triangle<T: Real>(
    origin: Vec3<T>,
    dir: Vec3<T>,
    a: Vec3<T>,
    b: Vec3<T>,
    c: Vec3<T>,
    t_min: T,
) -> Option<RayHit<T>> {
    let e1 = vec3::sub(b, a);
    let e2 = vec3::sub(c, a);
    let pvec = vec3::cross(dir, e2);
    let det = vec3::dot(e1, pvec);
    if det.abs() <= T::epsilon() {
        return None;
    }
    let inv_det = T::one() / det;
    let tvec = vec3::sub(origin, a);
    let u = vec3::dot(tvec, pvec) * inv_det;
    if u < T::zero() || u > T::one() {
        return None;
    }
    let qvec = vec3::cross(tvec, e1);
    let v = vec3::dot(dir, qvec) * inv_det;
    if v < T::zero() || u + v > T::one() {
        return None;
    }
    let t = vec3::dot(e2, qvec) * inv_det;
    if t < t_min {
        return None;
    }
    Some(RayHit { t, u, v })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::rng::rng_from_seed;
    use proptest::prelude::*;

    const A: [f64; 3] = [0.0, 0.0, 0.0];
    const B: [f64; 3] = [1.0, 0.0, 0.0];
    const C: [f64; 3] = [0.0, 1.0, 0.0];

    #[test]
    fn face_region_projects_onto_plane() {
        let p = closest_point_on_triangle([0.2, 0.3, 5.0], A, B, C);
        assert!(vec3::dist(p, [0.2, 0.3, 0.0]) < 1e-12);
    }

    #[test]
    fn vertex_and_edge_regions() {
        // beyond vertex a
        let p = closest_point_on_triangle([-1.0, -1.0, 0.5], A, B, C);
        assert_eq!(p, A);
        // beyond vertex b
        let p = closest_point_on_triangle([3.0, -0.5, 0.0], A, B, C);
        assert_eq!(p, B);
        // off edge ab
        let p = closest_point_on_triangle([0.5, -2.0, 1.0], A, B, C);
        assert!(vec3::dist(p, [0.5, 0.0, 0.0]) < 1e-12);
        // off hypotenuse bc: reflect across the line x+y=1
        let p = closest_point_on_triangle([1.0, 1.0, 0.0], A, B, C);
        assert!(vec3::dist(p, [0.5, 0.5, 0.0]) < 1e-12);
    }

    #[test]
    fn degenerate_triangle_matches_segment_distance() {
        // collinear "triangle" along x
        let (a, b, c) = ([0.0, 0.0, 0.0], [1.0, 0.0, 0.0], [2.0, 0.0, 0.0]);
        let q = [1.5, 2.0, 0.0];
        let p = closest_point_on_triangle(q, a, b, c);
        assert!(vec3::dist(p, [1.5, 0.0, 0.0]) < 1e-12);
        // fully collapsed
        let p = closest_point_on_triangle(q, a, a, a);
        assert_eq!(p, a);
    }

    /// Grid-search oracle: minimize over a fine barycentric lattice.
    fn grid_min_dist(p: [f64; 3], a: [f64; 3], b: [f64; 3], c: [f64; 3]) -> f64 {
        let n = 400;
        let mut best = f64::INFINITY;
        for i in 0..=n {
            for j in 0..=(n - i) {
                let u = i as f64 / n as f64;
                let v = j as f64 / n as f64;
                let q = vec3::add(
                    vec3::scale(a, 1.0 - u - v),
                    vec3::add(vec3::scale(b, u), vec3::scale(c, v)),
                );
                best = best.min(vec3::dist(p, q));
            }
        }
        best
    }

    #[test]
    fn closest_point_beats_grid_search() {
        let mut rng = rng_from_seed(7);
        for _ in 0..50 {
            let mut v = || {
                [
                    rng.random_range(-1.0..1.0),
                    rng.random_range(-1.0..1.0),
                    rng.random_range(-1.0..1.0),
                ]
            };
            let (a, b, c, p) = (v(), v(), v(), v());
            let exact = vec3::dist(p, closest_point_on_triangle(p, a, b, c));
            let grid = grid_min_dist(p, a, b, c);
            // the grid is a superset of candidate points only up to lattice
            // spacing, so exact must win by no more than the lattice gap
            assert!(exact <= grid + 1e-12);
            assert!(grid - exact < 0.02, "exact={exact} grid={grid}");
        }
    }

    #[test]
    fn ray_hits_centroid() {
        let origin = [1.0 / 3.0, 1.0 / 3.0, -2.0];
        let hit = ray_triangle(origin, [0.0, 0.0, 1.0], A, B, C, 0.0).unwrap();
        assert!((hit.t - 2.0).abs() < 1e-12);
        assert!((hit.u - 1.0 / 3.0).abs() < 1e-12);
        assert!((hit.v - 1.0 / 3.0).abs() < 1e-12);
    }

    #[test]
    fn ray_misses_outside_and_parallel() {
        assert!(ray_triangle([2.0, 2.0, -1.0], [0.0, 0.0, 1.0], A, B, C, 0.0).is_none());
        assert!(ray_triangle([0.2, 0.2, 1.0], [1.0, 0.0, 0.0], A, B, C, 0.0).is_none());
        // behind the origin
        assert!(ray_triangle([0.2, 0.2, 1.0], [0.0, 0.0, 1.0], A, B, C, 0.0).is_none());
    }

    #[test]
    fn ray_intersection_is_two_sided() {
        let front = ray_triangle([0.2, 0.2, -1.0], [0.0, 0.0, 1.0], A, B, C, 0.0).unwrap();
        let back = ray_triangle([0.2, 0.2, 1.0], [0.0, 0.0, -1.0], A, B, C, 0.0).unwrap();
        assert!((front.t - 1.0).abs() < 1e-12);
        assert!((back.t - 1.0).abs() < 1e-12);
    }

    proptest! {
        #[test]
        fn closest_point_is_no_farther_than_corners_and_edges(
            coords in proptest::collection::vec(-2.0f64..2.0, 12)
        ) {
            let a = [coords[0], coords[1], coords[2]];
            let b = [coords[3], coords[4], coords[5]];
            let c = [coords[6], coords[7], coords[8]];
            let p = [coords[9], coords[10], coords[11]];
            let d = vec3::dist(p, closest_point_on_triangle(p, a, b, c));
            prop_assert!(d.is_finite());
            for q in [a, b, c,
                      closest_point_on_segment(p, a, b),
                      closest_point_on_segment(p, b, c),
                      closest_point_on_segment(p, c, a)] {
                prop_assert!(d <= vec3::dist(p, q) + 1e-12);
            }
        }

        #[test]
        fn ray_hit_point_matches_barycentric_reconstruction(
            coords in proptest::collection::vec(-1.0f64..1.0, 9),
            u in 0.05f64..0.9,
            v_frac in 0.05f64..0.9,
        ) {
            let a = [coords[0], coords[1], coords[2]];
            let b = [coords[3], coords[4], coords[5]];
            let c = [coords[6], coords[7], coords[8]];
            let v = v_frac * (1.0 - u);
            let target = vec3::add(
                vec3::scale(a, 1.0 - u - v),
                vec3::add(vec3::scale(b, u), vec3::scale(c, v)),
            );
            let origin = vec3::add(target, [0.3, -1.1, 0.7]);
            let dir = vec3::sub(target, origin);
            // conditioning: how far the ray is from lying in the triangle plane
            let n = vec3::cross(vec3::sub(b, a), vec3::sub(c, a));
            let cosine = vec3::dot(dir, n).abs() / (vec3::norm(dir) * vec3::norm(n) + 1e-300);
            let well_conditioned = vec3::norm(n) > 1e-6 && cosine > 1e-3;
            match ray_triangle(origin, dir, a, b, c, 0.0) {
                Some(hit) if well_conditioned => {
                    // dir has length |target-origin|, so t must be ~1
                    prop_assert!((hit.t - 1.0).abs() < 1e-6);
                    prop_assert!((hit.u - u).abs() < 1e-6);
                    prop_assert!((hit.v - v).abs() < 1e-6);
                }
                Some(_) => {}
                // misses are legal only for degenerate or grazing geometry
                None => prop_assert!(!well_conditioned),
            }
        }
    }
}
