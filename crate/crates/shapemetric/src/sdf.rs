//! Signed distance to a triangle mesh, the training-point sampling strategy,
//! occupancy conversion, and regular-grid evaluation.

use crate::bvh::Bvh;
use crate::mesh::{bounding_box, Aabb, TriangleMesh};
use crate::rng::{derive_seed, rng_from_seed};
use crate::sampling::FaceAreaTable;
use crate::vec3::{self, Vec3};
use crate::winding;
use crate::{Error, Real, Result};
use rand::Rng as _;
use rand_distr::{Distribution, StandardNormal};
use rayon::prelude::*;

/// Near-surface band half-widths and the volume-cube side used by
/// [`generate_training_samples`].
pub const NEAR_BAND_TIGHT: f64 = 0.03;
pub const NEAR_BAND_WIDE: f64 = 0.1;
pub const VOLUME_CUBE_SIDE: f64 = 1.2;

/// Slack for the normalized-mesh precondition: a unit-cube mesh may be
/// posed, so anything up to the cube diagonal is accepted.
const MAX_NORMALIZED_EXTENT: f64 = 1.7320508075688772 + 1e-6;

/// Signed-distance oracle for one mesh: hierarchy-accelerated unsigned
/// distance, sign from the generalized winding number.
pub struct SdfField<'m, T: Real> {
    mesh: &'m TriangleMesh<T>,
    bvh: Bvh<T>,
}

impl<'m, T: Real> SdfField<'m, T> {
    /// Requires a non-empty mesh, normalized to the unit cube (up to a
    /// rotation: the bounding box may not exceed the cube diagonal).
    pub fn new(mesh: &'m TriangleMesh<T>) -> Result<Self> {
        if mesh.is_empty_mesh() {
            return Err(Error::EmptyGeometry(
                "cannot evaluate signed distance of an empty mesh",
            ));
        }
        let bbox = bounding_box(mesh)?;
        let longest = bbox.longest_side().to64();
        if longest > MAX_NORMALIZED_EXTENT {
            return Err(Error::Domain(format!(
                "mesh extent {longest:.6} exceeds the normalized unit cube; \
                 normalize before evaluating signed distance"
            )));
        }
        let bvh = Bvh::build(mesh)?;
        Ok(Self { mesh, bvh })
    }

    pub fn bvh(&self) -> &Bvh<T> {
        &self.bvh
    }

    /// Unsigned distance to the closest triangle.
    pub fn unsigned_distance(&self, q: Vec3<T>) -> T {
        self.bvh.closest_point(q).distance
    }

    /// Signed distance: negative inside (winding number above 0.5).
    pub fn signed_distance(&self, q: Vec3<T>) -> T {
        let d = self.unsigned_distance(q);
        if winding::is_inside(&self.bvh, self.mesh, q) {
            -d
        } else {
            d
        }
    }

    /// Signed distances for a batch, evaluated in parallel. Each value
    /// depends only on its own query, so the output is order-stable.
    pub fn signed_distance_batch(&self, points: &[Vec3<T>]) -> Vec<T> {
        points
            .par_chunks(1024)
            .flat_map_iter(|chunk| {
                chunk
                    .iter()
                    .map(|&q| self.signed_distance(q))
                    .collect::<Vec<_>>()
            })
            .collect()
    }
}

/// Signed distances from `mesh` to each of `points`.
pub fn signed_distance<T: Real>(mesh: &TriangleMesh<T>, points: &[Vec3<T>]) -> Result<Vec<T>> {
    let field = SdfField::new(mesh)?;
    Ok(field.signed_distance_batch(points))
}

/// Training-sample bucket: which band of the 50/30/20 split a point belongs
/// to.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
#[repr(u8)]
pub enum Bucket {
    /// Within 0.03 of the surface.
    Near003 = 0,
    /// Within 0.1 of the surface (outside the tight band).
    Near01 = 1,
    /// Uniform in the volume cube of side 1.2.
    Volume = 2,
}

impl Bucket {
    pub fn from_u8(v: u8) -> Result<Self> {
        match v {
            0 => Ok(Bucket::Near003),
            1 => Ok(Bucket::Near01),
            2 => Ok(Bucket::Volume),
            other => Err(Error::Data(format!("invalid bucket tag {other}"))),
        }
    }
}

/// Scattered SDF training samples with their bucket provenance.
#[derive(Debug, Clone, PartialEq)]
pub struct SdfSampleSet<T: Real> {
    pub positions: Vec<Vec3<T>>,
    pub sdf_values: Vec<T>,
    pub bucket_tags: Vec<Bucket>,
}

impl<T: Real> SdfSampleSet<T> {
    pub fn len(&self) -> usize {
        self.positions.len()
    }

    pub fn is_empty(&self) -> bool {
        self.positions.is_empty()
    }

    pub fn bucket_counts(&self) -> [usize; 3] {
        let mut counts = [0usize; 3];
        for &b in &self.bucket_tags {
            counts[b as usize] += 1;
        }
        counts
    }
}

/// The training-point strategy: 50% of points within 0.03 of the surface,
/// 30% within 0.1, and the remaining 20% uniform in the cube of side 1.2.
/// Near-surface points are surface samples plus isotropic Gaussian offsets
/// (sigma = half the band width), resampled until they land inside their
/// band. Every sample carries its exact signed distance.
pub fn generate_training_samples<T: Real>(
    mesh: &TriangleMesh<T>,
    n: usize,
    rng_seed: u64,
) -> Result<SdfSampleSet<T>> {
    if n < 10 {
        return Err(Error::Domain(format!(
            "training-sample count {n} is below the minimum of 10"
        )));
    }
    let field = SdfField::new(mesh)?;
    let table = FaceAreaTable::build(mesh)?;

    let n_tight = (0.5 * n as f64).round() as usize;
    let n_wide = (0.3 * n as f64).round() as usize;
    let n_volume = n - n_tight - n_wide;

    let mut out = SdfSampleSet {
        positions: Vec::with_capacity(n),
        sdf_values: Vec::with_capacity(n),
        bucket_tags: Vec::with_capacity(n),
    };

    for (bucket, count, band) in [
        (Bucket::Near003, n_tight, NEAR_BAND_TIGHT),
        (Bucket::Near01, n_wide, NEAR_BAND_WIDE),
    ] {
        let stream = derive_seed(rng_seed, bucket as u64);
        let chunk = 4096usize;
        let n_chunks = count.div_ceil(chunk);
        let parts: Vec<Vec<(Vec3<T>, T)>> = (0..n_chunks)
            .into_par_iter()
            .map(|ci| {
                let take = chunk.min(count - ci * chunk);
                let mut rng = rng_from_seed(derive_seed(stream, ci as u64));
                let sigma = band * 0.5;
                let mut samples = Vec::with_capacity(take);
                for _ in 0..take {
                    let mut attempts = 0usize;
                    let (p, sdf) = loop {
                        attempts += 1;
                        if attempts > 10_000 {
                            // Gaussian offsets at sigma = band/2 land in the
                            // band most of the time; thousands of rejections
                            // mean the geometry or bands are broken.
                            panic!("near-surface rejection sampling stalled");
                        }
                        let fi = table.select(rng.random_range(0.0..table.total_area()));
                        let (b0, b1) = (
                            rng.random_range(0.0f64..1.0),
                            rng.random_range(0.0f64..1.0),
                        );
                        let su = b0.sqrt();
                        let (w0, w1, w2) = (1.0 - su, su * (1.0 - b1), su * b1);
                        let [a, b, c] = mesh.face_vertices(fi);
                        let surface = vec3::add(
                            vec3::scale(a, T::of(w0)),
                            vec3::add(vec3::scale(b, T::of(w1)), vec3::scale(c, T::of(w2))),
                        );
                        let offset: [f64; 3] = [
                            sigma * <StandardNormal as Distribution<f64>>::sample(&StandardNormal, &mut rng),
                            sigma * <StandardNormal as Distribution<f64>>::sample(&StandardNormal, &mut rng),
                            sigma * <StandardNormal as Distribution<f64>>::sample(&StandardNormal, &mut rng),
                        ];
                        let q = [
                            surface[0] + T::of(offset[0]),
                            surface[1] + T::of(offset[1]),
                            surface[2] + T::of(offset[2]),
                        ];
                        let sdf = field.signed_distance(q);
                        if sdf.abs().to64() <= band {
                            break (q, sdf);
                        }
                    };
                    samples.push((p, sdf));
                }
                samples
            })
            .collect();
        for part in parts {
            for (p, sdf) in part {
                out.positions.push(p);
                out.sdf_values.push(sdf);
                out.bucket_tags.push(bucket);
            }
        }
    }

    let volume_points = crate::sampling::sample_volume_uniform::<T>(
        [T::zero(); 3],
        T::of(VOLUME_CUBE_SIDE),
        n_volume,
        derive_seed(rng_seed, Bucket::Volume as u64),
    )?;
    let volume_sdf = field.signed_distance_batch(&volume_points);
    for (p, sdf) in volume_points.into_iter().zip(volume_sdf) {
        out.positions.push(p);
        out.sdf_values.push(sdf);
        out.bucket_tags.push(Bucket::Volume);
    }
    Ok(out)
}

/// Occupancy by thresholding: occupied iff `sdf <= iso`.
pub fn occupancy_from_sdf<T: Real>(sdf_values: &[T], iso: T) -> Vec<bool> {
    sdf_values.iter().map(|&v| v <= iso).collect()
}

/// Regular corner-aligned SDF lattice over an axis-aligned domain.
///
/// `values` is x-fastest: index = i + R*(j + R*k). Lattice point (i,j,k)
/// sits at `min + (i,j,k) * extent / (R-1)`, so the domain corners are grid
/// points.
#[derive(Debug, Clone, PartialEq)]
pub struct SdfGrid<T: Real> {
    resolution: usize,
    domain: Aabb<T>,
    values: Vec<T>,
}

impl<T: Real> SdfGrid<T> {
    pub fn new(resolution: usize, domain: Aabb<T>, values: Vec<T>) -> Result<Self> {
        if resolution < 2 {
            return Err(Error::Domain(format!(
                "grid resolution {resolution} is below the minimum of 2"
            )));
        }
        if values.len() != resolution * resolution * resolution {
            return Err(Error::Structure(format!(
                "grid value count {} does not match resolution {resolution}^3",
                values.len()
            )));
        }
        if values.iter().any(|v| !v.is_finite()) {
            return Err(Error::Data("grid contains non-finite values".into()));
        }
        Ok(Self {
            resolution,
            domain,
            values,
        })
    }

    pub fn resolution(&self) -> usize {
        self.resolution
    }

    pub fn domain(&self) -> &Aabb<T> {
        &self.domain
    }

    pub fn values(&self) -> &[T] {
        &self.values
    }

    #[inline]
    pub fn index(&self, i: usize, j: usize, k: usize) -> usize {
        i + self.resolution * (j + self.resolution * k)
    }

    #[inline]
    pub fn value(&self, i: usize, j: usize, k: usize) -> T {
        self.values[self.index(i, j, k)]
    }

    /// World position of lattice point (i, j, k).
    pub fn lattice_point(&self, i: usize, j: usize, k: usize) -> Vec3<T> {
        let ext = self.domain.extent();
        let denom = T::of((self.resolution - 1) as f64);
        [
            self.domain.min[0] + ext[0] * T::of(i as f64) / denom,
            self.domain.min[1] + ext[1] * T::of(j as f64) / denom,
            self.domain.min[2] + ext[2] * T::of(k as f64) / denom,
        ]
    }

    /// Cell edge lengths.
    pub fn cell_size(&self) -> Vec3<T> {
        let ext = self.domain.extent();
        let denom = T::of((self.resolution - 1) as f64);
        [ext[0] / denom, ext[1] / denom, ext[2] / denom]
    }
}

/// Evaluates the signed distance of `mesh` on a corner-aligned lattice.
/// Parallel over z-slabs; the result does not depend on thread count.
pub fn evaluate_grid<T: Real>(
    mesh: &TriangleMesh<T>,
    resolution: usize,
    domain: Aabb<T>,
) -> Result<SdfGrid<T>> {
    if !(2..=512).contains(&resolution) {
        return Err(Error::Domain(format!(
            "grid resolution {resolution} outside the supported range [2, 512]"
        )));
    }
    for a in 0..3 {
        if !(domain.max[a] > domain.min[a]) {
            return Err(Error::Domain(format!("grid domain is degenerate on axis {a}")));
        }
    }
    let field = SdfField::new(mesh)?;
    let r = resolution;
    let template = SdfGrid {
        resolution: r,
        domain,
        values: Vec::new(),
    };
    let slabs: Vec<Vec<T>> = (0..r)
        .into_par_iter()
        .map(|k| {
            let mut slab = Vec::with_capacity(r * r);
            for j in 0..r {
                for i in 0..r {
                    slab.push(field.signed_distance(template.lattice_point(i, j, k)));
                }
            }
            slab
        })
        .collect();
    let mut values = Vec::with_capacity(r * r * r);
    for slab in slabs {
        values.extend(slab);
    }
    SdfGrid::new(resolution, domain, values)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::primitives;
    use crate::testutil::brute_force_mesh_distance;
    use rand::Rng as _;

    fn sphere(subdiv: u32, r: f64) -> TriangleMesh<f64> {
        primitives::icosphere(subdiv, r, [0.0; 3]).unwrap()
    }

    #[test]
    fn sphere_signed_distance_matches_analytic() {
        let mesh = sphere(4, 0.5);
        let field = SdfField::new(&mesh).unwrap();
        let mut rng = crate::rng::rng_from_seed(3);
        for _ in 0..2000 {
            let q = [
                rng.random_range(-0.8..0.8),
                rng.random_range(-0.8..0.8),
                rng.random_range(-0.8..0.8),
            ];
            let analytic = vec3::norm(q) - 0.5;
            let got = field.signed_distance(q);
            assert!(
                (got - analytic).abs() < 2e-3,
                "at {q:?}: got {got}, analytic {analytic}"
            );
        }
    }

    #[test]
    fn named_sphere_queries() {
        let mesh = sphere(4, 0.5);
        let field = SdfField::new(&mesh).unwrap();
        assert!((field.signed_distance([0.0, 0.0, 0.0]) + 0.5).abs() < 2e-3);
        assert!((field.signed_distance([0.8, 0.0, 0.0]) - 0.3).abs() < 2e-3);
    }

    #[test]
    fn mesh_vertices_have_zero_distance() {
        let mesh = primitives::torus::<f64>(16, 8, 0.5, 0.2).unwrap();
        let field = SdfField::new(&mesh).unwrap();
        for v in mesh.vertices().iter().step_by(11) {
            assert!(field.signed_distance(*v).abs() < 1e-9);
        }
    }

    #[test]
    fn oversized_mesh_is_rejected() {
        let mesh = primitives::box_mesh::<f64>([4.0, 1.0, 1.0]).unwrap();
        assert!(matches!(SdfField::new(&mesh), Err(Error::Domain(_))));
        assert!(matches!(
            SdfField::new(&TriangleMesh::<f64>::empty()),
            Err(Error::EmptyGeometry(_))
        ));
    }

    #[test]
    fn signed_distance_is_lipschitz() {
        let mesh = primitives::torus::<f64>(16, 8, 0.4, 0.15).unwrap();
        let field = SdfField::new(&mesh).unwrap();
        let mut rng = crate::rng::rng_from_seed(8);
        for _ in 0..500 {
            let p = [
                rng.random_range(-0.8..0.8),
                rng.random_range(-0.8..0.8),
                rng.random_range(-0.8..0.8),
            ];
            let q = [
                p[0] + rng.random_range(-0.2..0.2),
                p[1] + rng.random_range(-0.2..0.2),
                p[2] + rng.random_range(-0.2..0.2),
            ];
            let lhs = (field.signed_distance(p) - field.signed_distance(q)).abs();
            assert!(lhs <= vec3::dist(p, q) + 1e-9);
        }
    }

    #[test]
    fn winding_sign_agrees_with_ray_parity() {
        // watertight meshes: winding-number sign must match crossing parity
        // along a ray for nearly all points (mismatches allowed only within
        // a hair of the surface)
        let meshes = [sphere(3, 0.5), primitives::torus(24, 12, 0.5, 0.2).unwrap()];
        for mesh in &meshes {
            let field = SdfField::new(mesh).unwrap();
            let mut rng = crate::rng::rng_from_seed(123);
            let n = 100_000;
            let mut disagree = 0usize;
            for _ in 0..n {
                let q = [
                    rng.random_range(-0.85..0.85),
                    rng.random_range(-0.85..0.85),
                    rng.random_range(-0.85..0.85),
                ];
                let dir = vec3::normalize([
                    rng.random_range(-1.0..1.0),
                    rng.random_range(-1.0..1.0),
                    rng.random_range(-1.0..1.0),
                ]);
                if dir == [0.0; 3] {
                    continue;
                }
                let mut crossings = 0usize;
                let mut t = 1e-9;
                while let Some((hit, _)) = field.bvh().ray_first_hit(q, dir, t) {
                    crossings += 1;
                    t = hit.t + 1e-9;
                    if crossings > 64 {
                        break;
                    }
                }
                let inside_parity = crossings % 2 == 1;
                let inside_winding = field.signed_distance(q) < 0.0;
                if inside_parity != inside_winding {
                    disagree += 1;
                    assert!(
                        field.unsigned_distance(q) < 1e-6,
                        "parity/winding disagreement far from surface at {q:?}"
                    );
                }
            }
            assert!(
                (disagree as f64) < 0.001 * n as f64,
                "{disagree} disagreements out of {n}"
            );
        }
    }

    #[test]
    fn occupancy_thresholding() {
        assert_eq!(
            occupancy_from_sdf(&[-0.1, 0.0, 0.1], 0.0),
            vec![true, true, false]
        );
        assert_eq!(
            occupancy_from_sdf(&[0.2, 0.3], 0.25),
            vec![true, false]
        );
        assert_eq!(
            occupancy_from_sdf(&[-5.0, 5.0], f64::INFINITY),
            vec![true, true]
        );
    }

    #[test]
    fn occupancy_is_monotone_in_iso() {
        let mesh = sphere(2, 0.5);
        let field = SdfField::new(&mesh).unwrap();
        let pts = crate::sampling::sample_volume_uniform::<f64>([0.0; 3], 1.2, 2000, 4).unwrap();
        let sdf = field.signed_distance_batch(&pts);
        let occ_a = occupancy_from_sdf(&sdf, -0.1);
        let occ_b = occupancy_from_sdf(&sdf, 0.0);
        let occ_c = occupancy_from_sdf(&sdf, 0.25);
        for i in 0..pts.len() {
            assert!(!occ_a[i] || occ_b[i]);
            assert!(!occ_b[i] || occ_c[i]);
        }
    }

    #[test]
    fn training_samples_honor_bucket_contract() {
        let mesh = sphere(3, 0.4);
        let set = generate_training_samples(&mesh, 1000, 77).unwrap();
        assert_eq!(set.len(), 1000);
        assert_eq!(set.bucket_counts(), [500, 300, 200]);
        for i in 0..set.len() {
            match set.bucket_tags[i] {
                Bucket::Near003 => assert!(set.sdf_values[i].abs() <= 0.0301),
                Bucket::Near01 => assert!(set.sdf_values[i].abs() <= 0.1001),
                Bucket::Volume => {
                    for a in 0..3 {
                        assert!(set.positions[i][a].abs() <= 0.6);
                    }
                }
            }
            // every stored value is the exact signed distance
            let field = SdfField::new(&mesh).unwrap();
            if i % 97 == 0 {
                let d = field.signed_distance(set.positions[i]);
                assert!((d - set.sdf_values[i]).abs() < 1e-12);
            }
        }
    }

    #[test]
    fn training_samples_are_deterministic() {
        let mesh = sphere(2, 0.4);
        let a = generate_training_samples(&mesh, 500, 9).unwrap();
        let b = generate_training_samples(&mesh, 500, 9).unwrap();
        assert_eq!(a, b);
        assert!(generate_training_samples(&mesh, 9, 0).is_err());
    }

    #[test]
    fn grid_res_two_hits_the_corners() {
        let mesh = sphere(1, 0.4);
        let domain = Aabb::cube([0.0; 3], 1.2);
        let grid = evaluate_grid(&mesh, 2, domain).unwrap();
        assert_eq!(grid.values().len(), 8);
        assert_eq!(grid.lattice_point(0, 0, 0), [-0.6, -0.6, -0.6]);
        assert_eq!(grid.lattice_point(1, 1, 1), [0.6, 0.6, 0.6]);
        // corner distance to sphere radius 0.4: sqrt(3*0.36) - 0.4
        let expect = (3.0f64 * 0.36).sqrt() - 0.4;
        let field = SdfField::new(&mesh).unwrap();
        let exact = field.signed_distance([-0.6, -0.6, -0.6]);
        assert!((grid.value(0, 0, 0) - exact).abs() < 1e-12);
        assert!((exact - expect).abs() < 0.02);
    }

    #[test]
    fn grid_center_voxel_matches_analytic_sphere() {
        let mesh = sphere(4, 0.5);
        let grid = evaluate_grid(&mesh, 65, Aabb::cube([0.0; 3], 1.2)).unwrap();
        // res 65 puts a lattice point exactly at the origin
        let center = grid.value(32, 32, 32);
        assert!((center + 0.5).abs() < 2e-3, "center value {center}");
    }

    #[test]
    fn grid_matches_brute_force_distances() {
        let mesh = primitives::torus::<f64>(12, 6, 0.4, 0.15).unwrap();
        let grid = evaluate_grid(&mesh, 16, Aabb::cube([0.0; 3], 1.2)).unwrap();
        let mut rng = crate::rng::rng_from_seed(55);
        for _ in 0..100 {
            let (i, j, k) = (
                rng.random_range(0..16usize),
                rng.random_range(0..16usize),
                rng.random_range(0..16usize),
            );
            let q = grid.lattice_point(i, j, k);
            let brute = brute_force_mesh_distance(&mesh, q);
            assert!(
                (grid.value(i, j, k).abs() - brute).abs() < 1e-9,
                "at ({i},{j},{k})"
            );
        }
    }

    #[test]
    fn grid_rejects_bad_parameters() {
        let mesh = sphere(1, 0.4);
        let dom = Aabb::cube([0.0; 3], 1.2);
        assert!(matches!(
            evaluate_grid(&mesh, 1, dom),
            Err(Error::Domain(_))
        ));
        assert!(matches!(
            evaluate_grid(&mesh, 600, dom),
            Err(Error::Domain(_))
        ));
        let degenerate = Aabb {
            min: [0.0; 3],
            max: [1.0, 0.0, 1.0],
        };
        assert!(matches!(
            evaluate_grid(&mesh, 8, degenerate),
            Err(Error::Domain(_))
        ));
    }

    #[test]
    fn grid_constructor_validates() {
        let dom = Aabb::cube([0.0_f64; 3], 1.0);
        assert!(SdfGrid::new(2, dom, vec![0.0; 8]).is_ok());
        assert!(matches!(
            SdfGrid::new(2, dom, vec![0.0; 7]),
            Err(Error::Structure(_))
        ));
        assert!(matches!(
            SdfGrid::new(2, dom, vec![f64::NAN; 8]),
            Err(Error::Data(_))
        ));
        assert!(matches!(
            SdfGrid::new(1, dom, vec![0.0; 1]),
            Err(Error::Domain(_))
        ));
    }
}
