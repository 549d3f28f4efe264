//! Small fixed-size vector and matrix helpers over `[T; 3]` / `[[T; 3]; 3]`.
//!
//! Kept as free functions so every kernel stays generic over [`Real`](crate::Real)
//! without pulling trait-method ambiguity into the call sites.

use crate::Real;

pub type Vec3<T> = [T; 3];
/// Row-major 3x3 matrix; `m[r][c]`.
pub type Mat3<T> = [[T; 3]; 3];

#[inline]
pub fn add<T: Real>(a: Vec3<T>, b: Vec3<T>) -> Vec3<T> {
    [a[0] + b[0], a[1] + b[1], a[2] + b[2]]
}

#[inline]
pub fn sub<T: Real>(a: Vec3<T>, b: Vec3<T>) -> Vec3<T> {
    [a[0] - b[0], a[1] - b[1], a[2] - b[2]]
}

#[inline]
pub fn scale<T: Real>(a: Vec3<T>, s: T) -> Vec3<T> {
    [a[0] * s, a[1] * s, a[2] * s]
}

#[inline]
pub fn neg<T: Real>(a: Vec3<T>) -> Vec3<T> {
    [-a[0], -a[1], -a[2]]
}

#[inline]
pub fn dot<T: Real>(a: Vec3<T>, b: Vec3<T>) -> T {
    a[0] * b[0] + a[1] * b[1] + a[2] * b[2]
}

#[inline]
pub fn cross<T: Real>(a: Vec3<T>, b: Vec3<T>) -> Vec3<T> {
    [
        a[1] * b[2] - a[2] * b[1],
        a[2] * b[0] - a[0] * b[2],
        a[0] * b[1] - a[1] * b[0],
    ]
}

#[inline]
pub fn norm2<T: Real>(a: Vec3<T>) -> T {
    dot(a, a)
}

#[inline]
pub fn norm<T: Real>(a: Vec3<T>) -> T {
    norm2(a).sqrt()
}

#[inline]
pub fn dist2<T: Real>(a: Vec3<T>, b: Vec3<T>) -> T {
    norm2(sub(a, b))
}

#[inline]
pub fn dist<T: Real>(a: Vec3<T>, b: Vec3<T>) -> T {
    dist2(a, b).sqrt()
}

/// Returns the zero vector when `a` has zero length.
#[inline]
pub fn normalize<T: Real>(a: Vec3<T>) -> Vec3<T> {
    let n = norm(a);
    if n > T::zero() {
        scale(a, T::one() / n)
    } else {
        [T::zero(); 3]
    }
}

#[inline]
pub fn lerp<T: Real>(a: Vec3<T>, b: Vec3<T>, t: T) -> Vec3<T> {
    add(a, scale(sub(b, a), t))
}

#[inline]
pub fn componentwise_min<T: Real>(a: Vec3<T>, b: Vec3<T>) -> Vec3<T> {
    [a[0].min(b[0]), a[1].min(b[1]), a[2].min(b[2])]
}

#[inline]
pub fn componentwise_max<T: Real>(a: Vec3<T>, b: Vec3<T>) -> Vec3<T> {
    [a[0].max(b[0]), a[1].max(b[1]), a[2].max(b[2])]
}

#[inline]
pub fn is_finite<T: Real>(a: Vec3<T>) -> bool {
    a[0].is_finite() && a[1].is_finite() && a[2].is_finite()
}

/// Centroid of a triangle.
#[inline]
pub fn triangle_centroid<T: Real>(a: Vec3<T>, b: Vec3<T>, c: Vec3<T>) -> Vec3<T> {
    let third = T::one() / T::of(3.0);
    scale(add(add(a, b), c), third)
}

/// Area vector `0.5 * (b - a) x (c - a)`; its length is the triangle area and
/// its direction the (unnormalized) face normal.
#[inline]
pub fn triangle_area_vector<T: Real>(a: Vec3<T>, b: Vec3<T>, c: Vec3<T>) -> Vec3<T> {
    scale(cross(sub(b, a), sub(c, a)), T::of(0.5))
}

#[inline]
pub fn triangle_area<T: Real>(a: Vec3<T>, b: Vec3<T>, c: Vec3<T>) -> T {
    norm(triangle_area_vector(a, b, c))
}

pub fn mat_identity<T: Real>() -> Mat3<T> {
    let o = T::one();
    let z = T::zero();
    [[o, z, z], [z, o, z], [z, z, o]]
}

#[inline]
pub fn mat_vec<T: Real>(m: &Mat3<T>, v: Vec3<T>) -> Vec3<T> {
    [dot(m[0], v), dot(m[1], v), dot(m[2], v)]
}

pub fn mat_mul<T: Real>(a: &Mat3<T>, b: &Mat3<T>) -> Mat3<T> {
    let mut out = [[T::zero(); 3]; 3];
    for r in 0..3 {
        for c in 0..3 {
            out[r][c] = a[r][0] * b[0][c] + a[r][1] * b[1][c] + a[r][2] * b[2][c];
        }
    }
    out
}

pub fn mat_transpose<T: Real>(m: &Mat3<T>) -> Mat3<T> {
    let mut out = [[T::zero(); 3]; 3];
    for r in 0..3 {
        for c in 0..3 {
            out[r][c] = m[c][r];
        }
    }
    out
}

pub fn mat_det<T: Real>(m: &Mat3<T>) -> T {
    m[0][0] * (m[1][1] * m[2][2] - m[1][2] * m[2][1])
        - m[0][1] * (m[1][0] * m[2][2] - m[1][2] * m[2][0])
        + m[0][2] * (m[1][0] * m[2][1] - m[1][1] * m[2][0])
}

/// Rotation about +X by `angle` radians.
pub fn rot_x<T: Real>(angle: T) -> Mat3<T> {
    let (s, c) = (angle.sin(), angle.cos());
    let o = T::one();
    let z = T::zero();
    [[o, z, z], [z, c, -s], [z, s, c]]
}

/// Rotation about +Y by `angle` radians.
pub fn rot_y<T: Real>(angle: T) -> Mat3<T> {
    let (s, c) = (angle.sin(), angle.cos());
    let o = T::one();
    let z = T::zero();
    [[c, z, s], [z, o, z], [-s, z, c]]
}

/// Rotation about +Z by `angle` radians.
pub fn rot_z<T: Real>(angle: T) -> Mat3<T> {
    let (s, c) = (angle.sin(), angle.cos());
    let o = T::one();
    let z = T::zero();
    [[c, -s, z], [s, c, z], [z, z, o]]
}

/// Max absolute deviation of `m^T m` from the identity.
pub fn orthonormality_error<T: Real>(m: &Mat3<T>) -> T {
    let mtm = mat_mul(&mat_transpose(m), m);
    let id = mat_identity::<T>();
    let mut err = T::zero();
    for r in 0..3 {
        for c in 0..3 {
            err = err.max((mtm[r][c] - id[r][c]).abs());
        }
    }
    err
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn cross_follows_right_hand_rule() {
        let c = cross([1.0, 0.0, 0.0], [0.0, 1.0, 0.0]);
        assert_eq!(c, [0.0, 0.0, 1.0]);
    }

    #[test]
    fn rotations_are_orthonormal() {
        for &angle in &[0.3f64, -1.2, 2.9] {
            for m in [rot_x(angle), rot_y(angle), rot_z(angle)] {
                assert!(orthonormality_error(&m) < 1e-12);
                assert!((mat_det(&m) - 1.0).abs() < 1e-12);
            }
        }
    }

    #[test]
    fn mat_vec_rotates_x_to_z() {
        let m = rot_y(-std::f64::consts::FRAC_PI_2);
        let v = mat_vec(&m, [1.0, 0.0, 0.0]);
        assert!((v[0]).abs() < 1e-12 && (v[2] - 1.0).abs() < 1e-12);
    }
}
