//! Generators for the standard test surfaces: platonic solids, icospheres,
//! tori, voxel surfaces of any genus, planar patches and open tubes.

use std::collections::HashMap;
use std::f64::consts::{PI, TAU};

use crate::geom::Vec3;
use crate::mesh::TriMesh;

fn build(positions: Vec<Vec3>, triangles: Vec<[usize; 3]>) -> TriMesh {
    TriMesh::new(positions, triangles).expect("generated mesh is valid")
}

/// Flip every triangle if the enclosed volume comes out negative.
fn orient_outward(positions: &[Vec3], triangles: &mut [[usize; 3]]) {
    let vol: f64 = triangles
        .iter()
        .map(|&[a, b, c]| positions[a].dot(&positions[b].cross(&positions[c])))
        .sum();
    if vol < 0.0 {
        for t in triangles.iter_mut() {
            t.swap(1, 2);
        }
    }
}

/// Closed surface of a union of unit voxels, each boundary square split into
/// two triangles, oriented outward.
pub fn voxel_surface(voxels: &[[i64; 3]]) -> TriMesh {
    let filled: std::collections::HashSet<[i64; 3]> = voxels.iter().copied().collect();
    let mut index: HashMap<[i64; 3], usize> = HashMap::new();
    let mut positions = Vec::new();
    let mut triangles = Vec::new();
    let mut vid = |p: [i64; 3], positions: &mut Vec<Vec3>| {
        *index.entry(p).or_insert_with(|| {
            positions.push(Vec3::new(p[0] as f64, p[1] as f64, p[2] as f64));
            positions.len() - 1
        })
    };
    for v in voxels {
        for axis in 0..3 {
            for side in [1i64, -1] {
                let mut nb = *v;
                nb[axis] += side;
                if filled.contains(&nb) {
                    continue;
                }
                let (b, c) = ((axis + 1) % 3, (axis + 2) % 3);
                let mut corners = [[0i64; 3]; 4];
                for (slot, (db, dc)) in corners.iter_mut().zip([(0, 0), (1, 0), (1, 1), (0, 1)]) {
                    let mut p = *v;
                    if side > 0 {
                        p[axis] += 1;
                    }
                    p[b] += db;
                    p[c] += dc;
                    *slot = p;
                }
                if side < 0 {
                    corners.reverse();
                }
                let ids: Vec<usize> = corners.iter().map(|&p| vid(p, &mut positions)).collect();
                triangles.push([ids[0], ids[1], ids[2]]);
                triangles.push([ids[0], ids[2], ids[3]]);
            }
        }
    }
    build(positions, triangles)
}

/// Unit cube `[0, 1]^3`: 8 vertices, 12 triangles.
pub fn cube() -> TriMesh {
    voxel_surface(&[[0, 0, 0]])
}

/// Closed genus-two surface: a 5 x 3 x 1 slab of voxels with two holes.
pub fn genus_two() -> TriMesh {
    let mut vox = Vec::new();
    for x in 0..5 {
        for y in 0..3 {
            if y == 1 && (x == 1 || x == 3) {
                continue;
            }
            vox.push([x, y, 0]);
        }
    }
    voxel_surface(&vox)
}

/// Regular tetrahedron with the given edge length.
pub fn tetrahedron(edge: f64) -> TriMesh {
    let s = edge / (2.0 * 2f64.sqrt());
    let positions = vec![
        Vec3::new(1.0, 1.0, 1.0) * s,
        Vec3::new(1.0, -1.0, -1.0) * s,
        Vec3::new(-1.0, 1.0, -1.0) * s,
        Vec3::new(-1.0, -1.0, 1.0) * s,
    ];
    let mut triangles = vec![[0, 1, 2], [0, 3, 1], [0, 2, 3], [1, 3, 2]];
    orient_outward(&positions, &mut triangles);
    build(positions, triangles)
}

/// Regular icosahedron inscribed in the unit sphere.
pub fn icosahedron() -> TriMesh {
    let phi = (1.0 + 5f64.sqrt()) / 2.0;
    let mut positions = Vec::with_capacity(12);
    for &(a, b) in &[(1.0, phi), (-1.0, phi), (1.0, -phi), (-1.0, -phi)] {
        positions.push(Vec3::new(0.0, a, b));
        positions.push(Vec3::new(a, b, 0.0));
        positions.push(Vec3::new(b, 0.0, a));
    }
    let edge = 2.0 / (1.0 + phi * phi).sqrt();
    for p in positions.iter_mut() {
        *p = p.normalize();
    }
    let close = |i: usize, j: usize| ((positions[i] - positions[j]).norm() - edge).abs() < 1e-9;
    let mut triangles = Vec::with_capacity(20);
    for i in 0..12 {
        for j in i + 1..12 {
            for k in j + 1..12 {
                if close(i, j) && close(j, k) && close(i, k) {
                    let n = (positions[j] - positions[i]).cross(&(positions[k] - positions[i]));
                    if n.dot(&positions[i]) > 0.0 {
                        triangles.push([i, j, k]);
                    } else {
                        triangles.push([i, k, j]);
                    }
                }
            }
        }
    }
    build(positions, triangles)
}

/// Icosahedron subdivided `level` times (1-to-4), vertices projected to the
/// unit sphere. Level `n` has `10 * 4^n + 2` vertices.
pub fn icosphere(level: usize) -> TriMesh {
    let base = icosahedron();
    let mut positions = base.positions().to_vec();
    let mut triangles = base.triangles().to_vec();
    for _ in 0..level {
        let mut mid: HashMap<(usize, usize), usize> = HashMap::new();
        let mut next = Vec::with_capacity(4 * triangles.len());
        let mut midpoint = |a: usize, b: usize, positions: &mut Vec<Vec3>| {
            *mid.entry((a.min(b), a.max(b))).or_insert_with(|| {
                positions.push(((positions[a] + positions[b]) * 0.5).normalize());
                positions.len() - 1
            })
        };
        for &[a, b, c] in &triangles {
            let ab = midpoint(a, b, &mut positions);
            let bc = midpoint(b, c, &mut positions);
            let ca = midpoint(c, a, &mut positions);
            next.extend_from_slice(&[[a, ab, ca], [b, bc, ab], [c, ca, bc], [ab, bc, ca]]);
        }
        triangles = next;
    }
    build(positions, triangles)
}

/// Torus of revolution with `nu` samples around the axis and `nv` around the
/// tube; `nu * nv` vertices, each of degree 6.
pub fn torus(nu: usize, nv: usize, major: f64, minor: f64) -> TriMesh {
    assert!(nu >= 3 && nv >= 3);
    let id = |i: usize, j: usize| (i % nu) * nv + (j % nv);
    let mut positions = Vec::with_capacity(nu * nv);
    for i in 0..nu {
        let u = TAU * i as f64 / nu as f64;
        for j in 0..nv {
            let v = TAU * j as f64 / nv as f64;
            let r = major + minor * v.cos();
            positions.push(Vec3::new(r * u.cos(), r * u.sin(), minor * v.sin()));
        }
    }
    let mut triangles = Vec::with_capacity(2 * nu * nv);
    for i in 0..nu {
        for j in 0..nv {
            triangles.push([id(i, j), id(i + 1, j), id(i + 1, j + 1)]);
            triangles.push([id(i, j), id(i + 1, j + 1), id(i, j + 1)]);
        }
    }
    orient_outward(&positions, &mut triangles);
    build(positions, triangles)
}

/// Flat `nx x ny` grid of squares in the `z = 0` plane, each split along the
/// same diagonal. Vertex `(i, j)` has id `j * (nx + 1) + i`.
pub fn planar_grid(nx: usize, ny: usize, spacing: f64) -> TriMesh {
    let id = |i: usize, j: usize| j * (nx + 1) + i;
    let mut positions = Vec::with_capacity((nx + 1) * (ny + 1));
    for j in 0..=ny {
        for i in 0..=nx {
            positions.push(Vec3::new(i as f64 * spacing, j as f64 * spacing, 0.0));
        }
    }
    let mut triangles = Vec::with_capacity(2 * nx * ny);
    for j in 0..ny {
        for i in 0..nx {
            triangles.push([id(i, j), id(i + 1, j), id(i + 1, j + 1)]);
            triangles.push([id(i, j), id(i + 1, j + 1), id(i, j + 1)]);
        }
    }
    build(positions, triangles)
}

/// Hexagonal patch of the equilateral triangular lattice with `rings` rings
/// around the central vertex (vertex 0 is the center).
pub fn hex_disk(rings: i64, spacing: f64) -> TriMesh {
    let inside = |q: i64, r: i64| q.abs() <= rings && r.abs() <= rings && (q + r).abs() <= rings;
    let mut coords: Vec<(i64, i64)> = Vec::new();
    for q in -rings..=rings {
        for r in -rings..=rings {
            if inside(q, r) {
                coords.push((q, r));
            }
        }
    }
    coords.sort_by_key(|&(q, r)| (q.abs().max(r.abs()).max((q + r).abs()), q, r));
    let index: HashMap<(i64, i64), usize> = coords.iter().enumerate().map(|(i, &c)| (c, i)).collect();
    let positions = coords
        .iter()
        .map(|&(q, r)| {
            Vec3::new(spacing * (q as f64 + 0.5 * r as f64), spacing * (r as f64) * 0.75f64.sqrt(), 0.0)
        })
        .collect();
    let mut triangles = Vec::new();
    for (q, r) in (-rings - 1..=rings).flat_map(|q| (-rings - 1..=rings).map(move |r| (q, r))) {
        let tri = |a: (i64, i64), b: (i64, i64), c: (i64, i64)| -> Option<[usize; 3]> {
            Some([*index.get(&a)?, *index.get(&b)?, *index.get(&c)?])
        };
        if let Some(t) = tri((q, r), (q + 1, r), (q, r + 1)) {
            triangles.push(t);
        }
        if let Some(t) = tri((q + 1, r), (q + 1, r + 1), (q, r + 1)) {
            triangles.push(t);
        }
    }
    build(positions, triangles)
}

/// Open cylinder of `rings` circles (`rings >= 2`) with `segments` vertices
/// each, spanning `z` in `[0, length]`, normals pointing away from the axis.
pub fn tube(rings: usize, segments: usize, radius: f64, length: f64) -> TriMesh {
    assert!(rings >= 2 && segments >= 3);
    let id = |k: usize, i: usize| k * segments + (i % segments);
    let mut positions = Vec::with_capacity(rings * segments);
    for k in 0..rings {
        let z = length * k as f64 / (rings - 1) as f64;
        for i in 0..segments {
            let a = TAU * i as f64 / segments as f64;
            positions.push(Vec3::new(radius * a.cos(), radius * a.sin(), z));
        }
    }
    let mut triangles = Vec::new();
    for k in 0..rings - 1 {
        for i in 0..segments {
            triangles.push([id(k, i), id(k, i + 1), id(k + 1, i + 1)]);
            triangles.push([id(k, i), id(k + 1, i + 1), id(k + 1, i)]);
        }
    }
    build(positions, triangles)
}

/// Cone over a closed polygon: apex is vertex 0, rim vertices follow in order.
pub fn cone(apex: Vec3, rim: &[Vec3]) -> TriMesh {
    let n = rim.len();
    let mut positions = vec![apex];
    positions.extend_from_slice(rim);
    let triangles = (0..n).map(|i| [0, 1 + i, 1 + (i + 1) % n]).collect();
    build(positions, triangles)
}

/// Regular `n`-gon of circumradius `r` in the `z = 0` plane, counterclockwise.
pub fn regular_polygon(n: usize, r: f64) -> Vec<Vec3> {
    (0..n)
        .map(|i| {
            let a = 2.0 * PI * i as f64 / n as f64;
            Vec3::new(r * a.cos(), r * a.sin(), 0.0)
        })
        .collect()
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn counts() {
        assert_eq!(icosahedron().face_count(), 20);
        for level in 0..4 {
            assert_eq!(icosphere(level).vertex_count(), 10 * 4usize.pow(level as u32) + 2);
        }
        assert_eq!(torus(6, 4, 2.0, 1.0).vertex_count(), 24);
        assert_eq!(hex_disk(1, 1.0).face_count(), 6);
        assert_eq!(hex_disk(2, 1.0).vertex_count(), 19);
    }

    #[test]
    fn closed_shapes_are_outward() {
        for m in [cube(), tetrahedron(1.0), icosahedron(), icosphere(2), torus(6, 4, 2.0, 1.0), genus_two()] {
            assert!(m.signed_volume() > 0.0);
            assert!(m.is_closed());
        }
        assert!((cube().signed_volume() - 1.0).abs() < 1e-15);
        let tet = tetrahedron(1.0);
        assert!((tet.signed_volume() - 1.0 / (6.0 * 2f64.sqrt())).abs() < 1e-15);
        assert!(((tet.position(0) - tet.position(1)).norm() - 1.0).abs() < 1e-15);
    }
}
