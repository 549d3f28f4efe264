//! Marching-cubes isosurface extraction from a regular SDF lattice.
//!
//! Cell corner numbering (local offsets from cell origin (i,j,k)):
//! c0=(0,0,0) c1=(1,0,0) c2=(1,1,0) c3=(0,1,0)
//! c4=(0,0,1) c5=(1,0,1) c6=(1,1,1) c7=(0,1,1)
//! Cell edges, as corner pairs:
//! e0=(0,1) e1=(1,2) e2=(2,3) e3=(3,0) e4=(4,5) e5=(5,6) e6=(6,7) e7=(7,4)
//! e8=(0,4) e9=(1,5) e10=(2,6) e11=(3,7)
//! Case bit k is set when corner k's value is below the isovalue.
//!
//! Output vertices are welded by global edge identity (the lattice point at
//! the low end of the edge, plus the edge axis), and the interpolation is
//! always evaluated in that canonical low-to-high direction, so shared
//! vertices are bit-identical no matter which cell emits them first.

use crate::mc_tables::{EDGE_TABLE, TRI_TABLE};
use crate::mesh::TriangleMesh;
use crate::sdf::SdfGrid;
use crate::vec3::Vec3;
use crate::{Real, Result};
use rayon::prelude::*;
use std::collections::HashMap;

/// Local corner offsets, indexed by corner number.
const CORNER_OFFSET: [[usize; 3]; 8] = [
    [0, 0, 0],
    [1, 0, 0],
    [1, 1, 0],
    [0, 1, 0],
    [0, 0, 1],
    [1, 0, 1],
    [1, 1, 1],
    [0, 1, 1],
];

/// For each cell edge: the cell-local offset of its low-end lattice point
/// and the axis it runs along (0=x, 1=y, 2=z).
const EDGE_ORIGIN: [([usize; 3], usize); 12] = [
    ([0, 0, 0], 0), // e0: c0 -> c1
    ([1, 0, 0], 1), // e1: c1 -> c2
    ([0, 1, 0], 0), // e2: c3 -> c2, canonical low end c3
    ([0, 0, 0], 1), // e3: c0 -> c3
    ([0, 0, 1], 0), // e4: c4 -> c5
    ([1, 0, 1], 1), // e5: c5 -> c6
    ([0, 1, 1], 0), // e6: c7 -> c6, canonical low end c7
    ([0, 0, 1], 1), // e7: c4 -> c7
    ([0, 0, 0], 2), // e8: c0 -> c4
    ([1, 0, 0], 2), // e9: c1 -> c5
    ([1, 1, 0], 2), // e10: c2 -> c6
    ([0, 1, 0], 2), // e11: c3 -> c7
];

/// Globally unique edge identity: low-end lattice point plus axis.
#[inline]
fn edge_key(i: usize, j: usize, k: usize, edge: usize) -> u64 {
    let ([di, dj, dk], axis) = EDGE_ORIGIN[edge];
    ((i + di) as u64) | (((j + dj) as u64) << 16) | (((k + dk) as u64) << 32) | ((axis as u64) << 48)
}

#[inline]
fn unpack_key(key: u64) -> (usize, usize, usize, usize) {
    (
        (key & 0xffff) as usize,
        ((key >> 16) & 0xffff) as usize,
        ((key >> 32) & 0xffff) as usize,
        (key >> 48) as usize,
    )
}

/// Extracts the isosurface of `grid` at `iso`.
///
/// Triangles wind so that face normals point toward increasing SDF values
/// (outward, for a signed distance field with negative interior). A grid
/// with no sign crossing produces the empty mesh.
pub fn marching_cubes<T: Real>(grid: &SdfGrid<T>, iso: T) -> Result<TriangleMesh<T>> {
    let r = grid.resolution();
    let cells = r - 1;

    // Pass 1 (parallel over z-slabs): collect each cell's triangles as
    // global edge keys.
    let slabs: Vec<Vec<[u64; 3]>> = (0..cells)
        .into_par_iter()
        .map(|k| {
            let mut tris = Vec::new();
            for j in 0..cells {
                for i in 0..cells {
                    let mut case = 0usize;
                    for (corner, off) in CORNER_OFFSET.iter().enumerate() {
                        if grid.value(i + off[0], j + off[1], k + off[2]) < iso {
                            case |= 1 << corner;
                        }
                    }
                    if EDGE_TABLE[case] == 0 {
                        continue;
                    }
                    let row = &TRI_TABLE[case];
                    let mut e = 0;
                    while row[e] >= 0 {
                        // table order gives inward-facing triangles under
                        // this corner convention; swap to face outward
                        tris.push([
                            edge_key(i, j, k, row[e] as usize),
                            edge_key(i, j, k, row[e + 2] as usize),
                            edge_key(i, j, k, row[e + 1] as usize),
                        ]);
                        e += 3;
                    }
                }
            }
            tris
        })
        .collect();

    // Pass 2 (sequential, deterministic): weld vertices by edge key.
    let mut vertex_of: HashMap<u64, u32> = HashMap::new();
    let mut vertices: Vec<Vec3<T>> = Vec::new();
    let mut faces: Vec<[u32; 3]> = Vec::new();
    for tris in slabs {
        for tri in tris {
            let mut idx = [0u32; 3];
            for (slot, &key) in tri.iter().enumerate() {
                idx[slot] = *vertex_of.entry(key).or_insert_with(|| {
                    vertices.push(edge_vertex(grid, iso, key));
                    (vertices.len() - 1) as u32
                });
            }
            faces.push(idx);
        }
    }
    TriangleMesh::new(vertices, faces)
}

/// Interpolated crossing position on the edge `key`, always evaluated from
/// the low lattice end toward the high end.
fn edge_vertex<T: Real>(grid: &SdfGrid<T>, iso: T, key: u64) -> Vec3<T> {
    let (i, j, k, axis) = unpack_key(key);
    let (mut hi_i, mut hi_j, mut hi_k) = (i, j, k);
    match axis {
        0 => hi_i += 1,
        1 => hi_j += 1,
        _ => hi_k += 1,
    }
    let v_lo = grid.value(i, j, k);
    let v_hi = grid.value(hi_i, hi_j, hi_k);
    let t = (iso - v_lo) / (v_hi - v_lo);
    let p_lo = grid.lattice_point(i, j, k);
    let p_hi = grid.lattice_point(hi_i, hi_j, hi_k);
    crate::vec3::lerp(p_lo, p_hi, t)
}
