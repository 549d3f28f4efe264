//! Rigid-pose sampling and application for the three view regimes:
//! object-centered (OC), 2-DOF viewer-centered (azimuth + elevation), and
//! 3-DOF viewer-centered (2-DOF on top of a uniform random base rotation).
//!
//! Convention: Y is up. Azimuth rotates about +Y, elevation about +X (the
//! camera-right axis), composed as `R = rot_y(azimuth) * rot_x(elevation)`.
//! Changing the convention means changing `pose_from_angles` and
//! `pose_angles` together; everything else goes through them.

use crate::mesh::{bounding_box, TriangleMesh};
use crate::rng::{derive_seed, rng_from_seed, Rng};
use crate::vec3::{self, Mat3, Vec3};
use crate::{Error, Real, Result};
use rand::Rng as _;

/// Which view regime produced a pose.
#[derive(Debug, Clone, Copy, PartialEq, Eq, serde::Serialize, serde::Deserialize)]
pub enum DofTag {
    /// Object-centered: canonical frame, identity rotation.
    Oc,
    /// Viewer-centered, azimuth + elevation.
    Vc2,
    /// Viewer-centered, azimuth + elevation over a random base rotation.
    Vc3,
}

impl DofTag {
    pub fn as_str(self) -> &'static str {
        match self {
            DofTag::Oc => "OC",
            DofTag::Vc2 => "VC2",
            DofTag::Vc3 => "VC3",
        }
    }

    pub fn parse(s: &str) -> Result<Self> {
        match s {
            "OC" => Ok(DofTag::Oc),
            "VC2" => Ok(DofTag::Vc2),
            "VC3" => Ok(DofTag::Vc3),
            other => Err(Error::Parse {
                path: String::new(),
                line: 0,
                message: format!("unknown dof tag {other:?} (expected OC, VC2, or VC3)"),
            }),
        }
    }
}

/// Point a pose rotates about.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum PivotMode {
    /// Center of the mesh bounding box.
    BboxCenter,
    /// The coordinate origin of the mesh file.
    FileOrigin,
}

/// A rotation about a pivot point.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct RigidPose<T: Real> {
    pub rotation: Mat3<T>,
    pub pivot: Vec3<T>,
    pub dof_tag: DofTag,
}

impl<T: Real> RigidPose<T> {
    /// Identity pose in the object-centered regime.
    pub fn identity() -> Self {
        Self {
            rotation: vec3::mat_identity(),
            pivot: [T::zero(); 3],
            dof_tag: DofTag::Oc,
        }
    }

    /// Checks `R^T R = I` and `det R = +1` within `tol`.
    pub fn validate(&self, tol: T) -> Result<()> {
        let err = vec3::orthonormality_error(&self.rotation);
        if err > tol {
            return Err(Error::Domain(format!(
                "pose rotation is not orthonormal (deviation {})",
                err.to64()
            )));
        }
        let det = vec3::mat_det(&self.rotation);
        if (det - T::one()).abs() > tol {
            return Err(Error::Domain(format!(
                "pose rotation determinant {} is not +1",
                det.to64()
            )));
        }
        Ok(())
    }
}

/// Azimuth/elevation pair in degrees.
#[derive(Debug, Clone, Copy, PartialEq, serde::Serialize, serde::Deserialize)]
pub struct ViewAngles {
    pub azimuth_deg: f64,
    pub elevation_deg: f64,
}

/// Rotation for the given view angles: `rot_y(azimuth) * rot_x(elevation)`.
pub fn pose_from_angles<T: Real>(angles: ViewAngles, dof_tag: DofTag) -> RigidPose<T> {
    let az = T::of(angles.azimuth_deg.to_radians());
    let el = T::of(angles.elevation_deg.to_radians());
    RigidPose {
        rotation: vec3::mat_mul(&vec3::rot_y(az), &vec3::rot_x(el)),
        pivot: [T::zero(); 3],
        dof_tag,
    }
}

/// Recovers view angles from a rotation of the `rot_y * rot_x` form.
/// Azimuth lands in [0°, 360°), elevation in [-90°, 90°].
pub fn pose_angles<T: Real>(rotation: &Mat3<T>) -> ViewAngles {
    let el = (-rotation[1][2].to64()).asin();
    let az = (-rotation[2][0].to64()).atan2(rotation[0][0].to64());
    ViewAngles {
        azimuth_deg: az.to_degrees().rem_euclid(360.0),
        elevation_deg: el.to_degrees(),
    }
}

/// Elevation limit used by the viewer-centered samplers, degrees.
pub const ELEVATION_RANGE_DEG: f64 = 50.0;

fn draw_view_angles(rng: &mut Rng) -> ViewAngles {
    ViewAngles {
        azimuth_deg: rng.random_range(0.0..360.0),
        elevation_deg: rng.random_range(-ELEVATION_RANGE_DEG..=ELEVATION_RANGE_DEG),
    }
}

/// 2-DOF viewer-centered pose: azimuth uniform in [0°, 360°), elevation
/// uniform in [-50°, 50°] (endpoints included).
pub fn sample_pose_2dof<T: Real>(rng_seed: u64) -> RigidPose<T> {
    let mut rng = rng_from_seed(rng_seed);
    pose_from_angles(draw_view_angles(&mut rng), DofTag::Vc2)
}

/// 3-DOF viewer-centered pose: a 2-DOF view rotation composed onto a
/// Haar-uniform base rotation, `R = R_view * R_base`. The base draw uses its
/// own derived stream so it can be held fixed across the views of one object
/// (see [`sample_object_views`]).
pub fn sample_pose_3dof<T: Real>(rng_seed: u64) -> RigidPose<T> {
    let base = random_rotation_haar(&mut rng_from_seed(derive_seed(rng_seed, 1)));
    let mut view_rng = rng_from_seed(derive_seed(rng_seed, 0));
    compose_3dof(draw_view_angles(&mut view_rng), &base)
}

fn compose_3dof<T: Real>(angles: ViewAngles, base: &Mat3<T>) -> RigidPose<T> {
    let view = pose_from_angles::<T>(angles, DofTag::Vc3);
    RigidPose {
        rotation: vec3::mat_mul(&view.rotation, base),
        pivot: [T::zero(); 3],
        dof_tag: DofTag::Vc3,
    }
}

/// The per-object view protocol: one base rotation per object seed (identity
/// except in the 3-DOF regime), then one view pose per view index. OC yields
/// identity poses; VC2 draws fresh angles per view; VC3 composes per-view
/// angles onto the shared base rotation.
pub fn sample_object_views<T: Real>(
    object_seed: u64,
    n_views: usize,
    dof_tag: DofTag,
) -> Vec<RigidPose<T>> {
    let base: Mat3<T> = match dof_tag {
        DofTag::Vc3 => random_rotation_haar(&mut rng_from_seed(derive_seed(object_seed, 1))),
        _ => vec3::mat_identity(),
    };
    (0..n_views)
        .map(|view| {
            if dof_tag == DofTag::Oc {
                return RigidPose::identity();
            }
            let mut rng = rng_from_seed(derive_seed(derive_seed(object_seed, 0), view as u64));
            let angles = draw_view_angles(&mut rng);
            match dof_tag {
                DofTag::Vc2 => pose_from_angles(angles, DofTag::Vc2),
                DofTag::Vc3 => compose_3dof(angles, &base),
                DofTag::Oc => unreachable!(),
            }
        })
        .collect()
}

/// Haar-uniform random rotation via the subgroup-algorithm quaternion draw:
/// three uniforms map to a uniform unit quaternion, which maps to SO(3).
pub fn random_rotation_haar<T: Real>(rng: &mut Rng) -> Mat3<T> {
    let u1: f64 = rng.random_range(0.0..1.0);
    let u2: f64 = rng.random_range(0.0..1.0);
    let u3: f64 = rng.random_range(0.0..1.0);
    let (s1, c1) = (2.0 * std::f64::consts::PI * u2).sin_cos();
    let (s2, c2) = (2.0 * std::f64::consts::PI * u3).sin_cos();
    let (r1, r2) = ((1.0 - u1).sqrt(), u1.sqrt());
    let (x, y, z, w) = (r1 * s1, r1 * c1, r2 * s2, r2 * c2);
    let m = [
        [
            1.0 - 2.0 * (y * y + z * z),
            2.0 * (x * y - z * w),
            2.0 * (x * z + y * w),
        ],
        [
            2.0 * (x * y + z * w),
            1.0 - 2.0 * (x * x + z * z),
            2.0 * (y * z - x * w),
        ],
        [
            2.0 * (x * z - y * w),
            2.0 * (y * z + x * w),
            1.0 - 2.0 * (x * x + y * y),
        ],
    ];
    let mut out = [[T::zero(); 3]; 3];
    for r in 0..3 {
        for c in 0..3 {
            out[r][c] = T::of(m[r][c]);
        }
    }
    out
}

/// Rotation angle of `r` in radians, in [0, pi].
pub fn rotation_angle<T: Real>(r: &Mat3<T>) -> T {
    let trace = r[0][0] + r[1][1] + r[2][2];
    let c = ((trace - T::one()) * T::of(0.5)).max(-T::one()).min(T::one());
    c.acos()
}

/// Rotates every vertex of `mesh` about the pivot selected by `pivot_mode`:
/// `v' = R (v - p) + p`. Face normals are recomputed.
pub fn apply_pose<T: Real>(
    mesh: &TriangleMesh<T>,
    pose: &RigidPose<T>,
    pivot_mode: PivotMode,
) -> Result<TriangleMesh<T>> {
    if mesh.vertices().is_empty() {
        return Err(Error::EmptyGeometry("cannot pose a mesh with no vertices"));
    }
    let pivot = match pivot_mode {
        PivotMode::BboxCenter => bounding_box(mesh)?.center(),
        PivotMode::FileOrigin => [T::zero(); 3],
    };
    Ok(mesh.transformed_about(&pose.rotation, pivot))
}
