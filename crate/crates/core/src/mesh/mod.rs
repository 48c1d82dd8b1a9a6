//! Oriented triangle meshes with halfedge connectivity.
//!
//! Halfedge `h = 3 * f + k` runs from corner `k` to corner `k + 1` of
//! triangle `f`, so `next`, `prev` and `face` are pure index arithmetic and
//! only the twin map needs storage.

mod io;

pub use io::{parse_obj, parse_off, read_mesh, write_off, MeshFormat};

use std::collections::HashMap;

use crate::error::{Error, Result};
use crate::geom::{self, Vec3};

pub type VertexId = usize;
pub type EdgeId = usize;
pub type FaceId = usize;
pub type HalfedgeId = usize;

/// Triangles with area below `DEGENERATE_AREA_FACTOR * diag^2` are rejected,
/// where `diag` is the bounding-box diagonal.
pub const DEGENERATE_AREA_FACTOR: f64 = 1e-12;

#[inline]
pub fn face_of(h: HalfedgeId) -> FaceId {
    h / 3
}

#[inline]
pub fn next(h: HalfedgeId) -> HalfedgeId {
    3 * (h / 3) + (h % 3 + 1) % 3
}

#[inline]
pub fn prev(h: HalfedgeId) -> HalfedgeId {
    3 * (h / 3) + (h % 3 + 2) % 3
}

/// An undirected edge. `halfedge` is the first halfedge seen for it; `twin`
/// is the opposite halfedge for interior edges.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct Edge {
    pub vertices: [VertexId; 2],
    pub halfedge: HalfedgeId,
    pub twin: Option<HalfedgeId>,
}

impl Edge {
    pub fn is_boundary(&self) -> bool {
        self.twin.is_none()
    }
}

/// Indexed, consistently oriented, manifold triangle mesh.
///
/// Immutable after construction; geometry updates go through
/// [`TriMesh::with_positions`], which shares the validated connectivity.
#[derive(Debug, Clone)]
pub struct TriMesh {
    positions: Vec<Vec3>,
    triangles: Vec<[VertexId; 3]>,
    twin: Vec<Option<HalfedgeId>>,
    edge_of: Vec<EdgeId>,
    edges: Vec<Edge>,
    /// First outgoing halfedge of each vertex's fan (the boundary one, if any).
    fan_start: Vec<Option<HalfedgeId>>,
    boundary_vertex: Vec<bool>,
}

/// Combinatorial summary of a mesh.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct MeshTopology {
    pub vertices: usize,
    pub edges: usize,
    pub faces: usize,
    pub chi: i64,
    pub components: usize,
    pub boundary_loops: usize,
    pub is_closed: bool,
    /// Total genus; only defined for closed meshes.
    pub genus: Option<i64>,
}

/// Neighbors of a vertex in orientation order. Triangle `i` of the star is
/// `(center, neighbors[i], neighbors[(i + 1) % n])`. Boundary stars are open
/// fans with one more neighbor than triangles.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct VertexStar {
    pub center: VertexId,
    pub neighbors: Vec<VertexId>,
    pub triangles: Vec<FaceId>,
    /// Outgoing halfedge `center -> neighbors[i]` inside `triangles[i]`.
    pub spokes: Vec<HalfedgeId>,
    pub is_boundary: bool,
}

impl VertexStar {
    pub fn degree(&self) -> usize {
        self.neighbors.len()
    }

    /// Pairs `(p_i, p_{i+1})` spanning each star triangle.
    pub fn link_pairs(&self) -> impl Iterator<Item = (VertexId, VertexId)> + '_ {
        let n = self.neighbors.len();
        (0..self.triangles.len()).map(move |i| (self.neighbors[i], self.neighbors[(i + 1) % n]))
    }
}

impl TriMesh {
    /// Build and validate a mesh.
    pub fn new(positions: Vec<Vec3>, triangles: Vec<[VertexId; 3]>) -> Result<Self> {
        let n = positions.len();
        for (f, t) in triangles.iter().enumerate() {
            for &i in t {
                if i >= n {
                    return Err(Error::IndexOutOfRange { face: f, index: i, count: n });
                }
            }
            if t[0] == t[1] || t[1] == t[2] || t[0] == t[2] {
                return Err(Error::RepeatedVertex { face: f });
            }
        }
        check_degenerate(&positions, &triangles)?;

        let nh = 3 * triangles.len();
        let mut directed: HashMap<(VertexId, VertexId), HalfedgeId> = HashMap::with_capacity(nh);
        let mut undirected: HashMap<(VertexId, VertexId), EdgeId> = HashMap::with_capacity(nh);
        let mut twin = vec![None; nh];
        let mut edge_of = vec![usize::MAX; nh];
        let mut edges: Vec<Edge> = Vec::with_capacity(nh / 2 + 3);

        for h in 0..nh {
            let (a, b) = halfedge_ends(&triangles, h);
            let key = (a.min(b), a.max(b));
            match undirected.get(&key) {
                None => {
                    undirected.insert(key, edges.len());
                    edge_of[h] = edges.len();
                    edges.push(Edge { vertices: [a, b], halfedge: h, twin: None });
                    directed.insert((a, b), h);
                }
                Some(&e) => {
                    let edge = &mut edges[e];
                    if edge.twin.is_some() || directed.contains_key(&(a, b)) {
                        let count = triangles
                            .iter()
                            .filter(|t| t.contains(&key.0) && t.contains(&key.1))
                            .count();
                        if count > 2 {
                            return Err(Error::NonManifoldEdge { a: key.0, b: key.1, count });
                        }
                        return Err(Error::InconsistentOrientation { a: key.0, b: key.1 });
                    }
                    directed.insert((a, b), h);
                    edge.twin = Some(h);
                    twin[h] = Some(edge.halfedge);
                    twin[edge.halfedge] = Some(h);
                    edge_of[h] = e;
                }
            }
        }

        let mut incident = vec![0usize; n];
        let mut any_out: Vec<Option<HalfedgeId>> = vec![None; n];
        let mut boundary_out: Vec<Option<HalfedgeId>> = vec![None; n];
        for h in 0..nh {
            let (a, _) = halfedge_ends(&triangles, h);
            incident[a] += 1;
            any_out[a].get_or_insert(h);
            if twin[h].is_none() {
                if boundary_out[a].is_some() {
                    return Err(Error::NonManifoldVertex(a));
                }
                boundary_out[a] = Some(h);
            }
        }

        let mut fan_start = vec![None; n];
        let mut boundary_vertex = vec![false; n];
        for v in 0..n {
            let Some(first) = boundary_out[v].or(any_out[v]) else { continue };
            boundary_vertex[v] = boundary_out[v].is_some();
            let mut count = 1;
            let mut h = first;
            while let Some(t) = twin[prev(h)] {
                if t == first {
                    break;
                }
                h = t;
                count += 1;
                if count > incident[v] {
                    break;
                }
            }
            if count != incident[v] {
                return Err(Error::NonManifoldVertex(v));
            }
            fan_start[v] = Some(first);
        }

        Ok(TriMesh { positions, triangles, twin, edge_of, edges, fan_start, boundary_vertex })
    }

    /// Same connectivity, new vertex positions. Only the degeneracy check is rerun.
    pub fn with_positions(&self, positions: Vec<Vec3>) -> Result<Self> {
        if positions.len() != self.positions.len() {
            return Err(Error::InvalidParameter(format!(
                "expected {} positions, got {}",
                self.positions.len(),
                positions.len()
            )));
        }
        check_degenerate(&positions, &self.triangles)?;
        Ok(TriMesh { positions, ..self.clone() })
    }

    pub fn vertex_count(&self) -> usize {
        self.positions.len()
    }

    pub fn face_count(&self) -> usize {
        self.triangles.len()
    }

    pub fn edge_count(&self) -> usize {
        self.edges.len()
    }

    pub fn positions(&self) -> &[Vec3] {
        &self.positions
    }

    pub fn position(&self, v: VertexId) -> Vec3 {
        self.positions[v]
    }

    pub fn triangles(&self) -> &[[VertexId; 3]] {
        &self.triangles
    }

    pub fn triangle(&self, f: FaceId) -> [VertexId; 3] {
        self.triangles[f]
    }

    pub fn edges(&self) -> &[Edge] {
        &self.edges
    }

    pub fn edge(&self, e: EdgeId) -> Result<&Edge> {
        self.edges.get(e).ok_or(Error::InvalidEdge(e))
    }

    pub fn twin(&self, h: HalfedgeId) -> Option<HalfedgeId> {
        self.twin[h]
    }

    pub fn edge_of(&self, h: HalfedgeId) -> EdgeId {
        self.edge_of[h]
    }

    pub fn tail(&self, h: HalfedgeId) -> VertexId {
        self.triangles[h / 3][h % 3]
    }

    pub fn head(&self, h: HalfedgeId) -> VertexId {
        self.triangles[h / 3][(h % 3 + 1) % 3]
    }

    /// Vector from tail to head.
    pub fn halfedge_vector(&self, h: HalfedgeId) -> Vec3 {
        self.positions[self.head(h)] - self.positions[self.tail(h)]
    }

    pub fn check_vertex(&self, v: VertexId) -> Result<()> {
        if v < self.positions.len() {
            Ok(())
        } else {
            Err(Error::InvalidVertex(v))
        }
    }

    pub fn is_boundary_vertex(&self, v: VertexId) -> bool {
        self.boundary_vertex[v]
    }

    pub fn is_isolated(&self, v: VertexId) -> bool {
        self.fan_start[v].is_none()
    }

    pub fn is_closed(&self) -> bool {
        self.edges.iter().all(|e| e.twin.is_some())
    }

    /// Look up the edge joining `a` and `b`.
    pub fn find_edge(&self, a: VertexId, b: VertexId) -> Option<EdgeId> {
        let start = self.fan_start.get(a).copied().flatten()?;
        let mut h = start;
        loop {
            if self.head(h) == b {
                return Some(self.edge_of[h]);
            }
            // incoming side of the last triangle in an open fan
            if self.tail(prev(h)) == b {
                return Some(self.edge_of[prev(h)]);
            }
            match self.twin[prev(h)] {
                Some(t) if t != start => h = t,
                _ => return None,
            }
        }
    }

    pub fn face_cross(&self, f: FaceId) -> Vec3 {
        let [a, b, c] = self.triangles[f];
        geom::tri_cross(&self.positions[a], &self.positions[b], &self.positions[c])
    }

    pub fn face_normal(&self, f: FaceId) -> Vec3 {
        self.face_cross(f).normalize()
    }

    pub fn face_area(&self, f: FaceId) -> f64 {
        0.5 * self.face_cross(f).norm()
    }

    pub fn face_centroid(&self, f: FaceId) -> Vec3 {
        let [a, b, c] = self.triangles[f];
        (self.positions[a] + self.positions[b] + self.positions[c]) / 3.0
    }

    /// Interior angle of triangle `f` at corner `k`.
    pub fn corner_angle(&self, f: FaceId, k: usize) -> f64 {
        let t = self.triangles[f];
        let p = self.positions[t[k]];
        let u = self.positions[t[(k + 1) % 3]] - p;
        let v = self.positions[t[(k + 2) % 3]] - p;
        geom::angle_between(&u, &v)
    }

    /// Cotangent of the angle of triangle `f` at corner `k`.
    pub fn corner_cot(&self, f: FaceId, k: usize) -> Result<f64> {
        let t = self.triangles[f];
        let p = self.positions[t[k]];
        let u = self.positions[t[(k + 1) % 3]] - p;
        let v = self.positions[t[(k + 2) % 3]] - p;
        geom::cot_between(&u, &v).ok_or(Error::DegenerateAngle { face: f })
    }

    pub fn area(&self) -> f64 {
        (0..self.triangles.len()).map(|f| self.face_area(f)).sum()
    }

    /// Signed enclosed volume, `sum det(a, b, c) / 6`. Meaningful for closed meshes.
    pub fn signed_volume(&self) -> f64 {
        self.triangles
            .iter()
            .map(|&[a, b, c]| {
                self.positions[a].dot(&self.positions[b].cross(&self.positions[c]))
            })
            .sum::<f64>()
            / 6.0
    }

    pub fn bounding_box(&self) -> (Vec3, Vec3) {
        bounding_box(&self.positions)
    }

    pub fn bbox_diagonal(&self) -> f64 {
        let (lo, hi) = self.bounding_box();
        (hi - lo).norm()
    }

    pub fn mean_edge_length(&self) -> f64 {
        if self.edges.is_empty() {
            return 0.0;
        }
        self.edges
            .iter()
            .map(|e| (self.positions[e.vertices[1]] - self.positions[e.vertices[0]]).norm())
            .sum::<f64>()
            / self.edges.len() as f64
    }

    /// Star of `v` in orientation order; boundary stars start at the boundary
    /// edge whose triangle lies to its left.
    pub fn vertex_star(&self, v: VertexId) -> Result<VertexStar> {
        self.check_vertex(v)?;
        let start = self.fan_start[v].ok_or(Error::IsolatedVertex(v))?;
        let mut neighbors = Vec::new();
        let mut triangles = Vec::new();
        let mut spokes = Vec::new();
        let mut h = start;
        loop {
            neighbors.push(self.head(h));
            triangles.push(face_of(h));
            spokes.push(h);
            match self.twin[prev(h)] {
                Some(t) if t == start => break,
                Some(t) => h = t,
                None => {
                    neighbors.push(self.tail(prev(h)));
                    break;
                }
            }
        }
        Ok(VertexStar {
            center: v,
            neighbors,
            triangles,
            spokes,
            is_boundary: self.boundary_vertex[v],
        })
    }

    /// Number of edges at `v`.
    pub fn degree(&self, v: VertexId) -> Result<usize> {
        Ok(self.vertex_star(v)?.degree())
    }

    pub fn topology(&self) -> MeshTopology {
        let v = self.positions.len();
        let e = self.edges.len();
        let f = self.triangles.len();
        let chi = v as i64 - e as i64 + f as i64;

        let mut uf = UnionFind::new(v);
        for edge in &self.edges {
            uf.union(edge.vertices[0], edge.vertices[1]);
        }
        let components = (0..v).filter(|&i| uf.find(i) == i).count();

        let boundary_loops = self.boundary_loops().len();
        let is_closed = boundary_loops == 0;
        let genus = is_closed.then(|| (2 * components as i64 - chi) / 2);
        MeshTopology {
            vertices: v,
            edges: e,
            faces: f,
            chi,
            components,
            boundary_loops,
            is_closed,
            genus,
        }
    }

    /// Boundary loops as cycles of boundary halfedges, each following the
    /// orientation of its triangle.
    pub fn boundary_loops(&self) -> Vec<Vec<HalfedgeId>> {
        let nh = self.twin.len();
        let mut seen = vec![false; nh];
        let mut loops = Vec::new();
        for h0 in 0..nh {
            if self.twin[h0].is_some() || seen[h0] {
                continue;
            }
            let mut cycle = Vec::new();
            let mut h = h0;
            while !seen[h] {
                seen[h] = true;
                cycle.push(h);
                // the boundary halfedge leaving head(h) is the fan start there
                match self.fan_start[self.head(h)] {
                    Some(nh) if self.twin[nh].is_none() => h = nh,
                    _ => break,
                }
            }
            loops.push(cycle);
        }
        loops
    }

    pub fn euler_characteristic(&self) -> MeshTopology {
        self.topology()
    }

    /// Insert a vertex at `(1 - t) a + t b` on edge `e = (a, b)` and split the
    /// incident triangles. Returns the new mesh and the new vertex id.
    pub fn split_edge(&self, e: EdgeId, t: f64) -> Result<(TriMesh, VertexId)> {
        let edge = *self.edge(e)?;
        if !(t > 0.0 && t < 1.0) {
            return Err(Error::InvalidParameter(format!("split parameter {t} outside (0, 1)")));
        }
        let [a, b] = edge.vertices;
        let q = self.positions.len();
        let mut positions = self.positions.clone();
        positions.push(self.positions[a] * (1.0 - t) + self.positions[b] * t);
        let mut triangles = self.triangles.clone();
        for h in std::iter::once(edge.halfedge).chain(edge.twin) {
            let f = face_of(h);
            let (u, w) = (self.tail(h), self.head(h));
            let opp = self.tail(prev(h));
            triangles[f] = [u, q, opp];
            triangles.push([q, w, opp]);
        }
        Ok((TriMesh::new(positions, triangles)?, q))
    }
}

fn halfedge_ends(triangles: &[[VertexId; 3]], h: HalfedgeId) -> (VertexId, VertexId) {
    let t = triangles[h / 3];
    (t[h % 3], t[(h % 3 + 1) % 3])
}

pub(crate) fn bounding_box(points: &[Vec3]) -> (Vec3, Vec3) {
    let mut lo = Vec3::repeat(f64::INFINITY);
    let mut hi = Vec3::repeat(f64::NEG_INFINITY);
    for p in points {
        lo = lo.inf(p);
        hi = hi.sup(p);
    }
    (lo, hi)
}

fn check_degenerate(positions: &[Vec3], triangles: &[[VertexId; 3]]) -> Result<()> {
    if triangles.is_empty() {
        return Ok(());
    }
    let (lo, hi) = bounding_box(positions);
    let diag = (hi - lo).norm();
    let threshold = DEGENERATE_AREA_FACTOR * diag * diag;
    for (f, &[a, b, c]) in triangles.iter().enumerate() {
        let area = geom::tri_area(&positions[a], &positions[b], &positions[c]);
        if !(area >= threshold) || area == 0.0 {
            return Err(Error::DegenerateTriangle { face: f, area, threshold });
        }
    }
    Ok(())
}

struct UnionFind {
    parent: Vec<usize>,
}

impl UnionFind {
    fn new(n: usize) -> Self {
        UnionFind { parent: (0..n).collect() }
    }

    fn find(&mut self, mut i: usize) -> usize {
        while self.parent[i] != i {
            self.parent[i] = self.parent[self.parent[i]];
            i = self.parent[i];
        }
        i
    }

    fn union(&mut self, a: usize, b: usize) {
        let (ra, rb) = (self.find(a), self.find(b));
        if ra != rb {
            self.parent[ra.max(rb)] = ra.min(rb);
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::shapes;

    fn single_triangle() -> TriMesh {
        TriMesh::new(
            vec![Vec3::new(0.0, 0.0, 0.0), Vec3::new(1.0, 0.0, 0.0), Vec3::new(0.0, 1.0, 0.0)],
            vec![[0, 1, 2]],
        )
        .unwrap()
    }

    #[test]
    fn single_triangle_topology() {
        let m = single_triangle();
        let t = m.topology();
        assert_eq!((t.vertices, t.edges, t.faces, t.chi), (3, 3, 1, 1));
        assert_eq!(t.boundary_loops, 1);
        assert!(!t.is_closed);
        assert!(m.edges().iter().all(Edge::is_boundary));
        assert_eq!(t.genus, None);
    }

    #[test]
    fn corner_star_is_open_fan() {
        let m = single_triangle();
        let s = m.vertex_star(0).unwrap();
        assert!(s.is_boundary);
        assert_eq!(s.neighbors, vec![1, 2]);
        assert_eq!(s.triangles, vec![0]);
    }

    #[test]
    fn cube_topology() {
        let t = shapes::cube().topology();
        assert_eq!((t.vertices, t.edges, t.faces, t.chi), (8, 18, 12, 2));
        assert_eq!(t.genus, Some(0));
    }

    #[test]
    fn icosahedron_star_is_closed_five_cycle() {
        let m = shapes::icosahedron();
        for v in 0..m.vertex_count() {
            let s = m.vertex_star(v).unwrap();
            assert!(!s.is_boundary);
            assert_eq!(s.neighbors.len(), 5);
            assert_eq!(s.triangles.len(), 5);
            // orientation: each star triangle is (v, p_i, p_{i+1}) up to rotation
            for (i, (a, b)) in s.link_pairs().enumerate() {
                let t = m.triangle(s.triangles[i]);
                let k = t.iter().position(|&x| x == v).unwrap();
                assert_eq!((t[(k + 1) % 3], t[(k + 2) % 3]), (a, b));
            }
        }
    }

    #[test]
    fn grid_interior_vertex_has_six_neighbors() {
        let m = shapes::planar_grid(4, 4, 1.0);
        let center = 2 * 5 + 2;
        let s = m.vertex_star(center).unwrap();
        assert!(!s.is_boundary);
        assert_eq!(s.degree(), 6);
    }

    #[test]
    fn euler_characteristics() {
        for level in 0..3 {
            assert_eq!(shapes::icosphere(level).topology().chi, 2);
        }
        let torus = shapes::torus(6, 4, 2.0, 1.0);
        assert_eq!(torus.topology().chi, 0);
        assert_eq!(torus.topology().genus, Some(1));
        assert_eq!(shapes::hex_disk(2, 1.0).topology().chi, 1);
        let g2 = shapes::genus_two();
        assert_eq!(g2.topology().chi, -2);
        assert_eq!(g2.topology().genus, Some(2));
    }

    #[test]
    fn closed_mesh_edge_slots() {
        let m = shapes::icosphere(1);
        let t = m.topology();
        assert_eq!(3 * t.faces, 2 * t.edges);
        assert!(m.edges().iter().all(|e| !e.is_boundary()));
    }

    #[test]
    fn rejects_non_manifold_edge() {
        let p = vec![
            Vec3::new(0.0, 0.0, 0.0),
            Vec3::new(1.0, 0.0, 0.0),
            Vec3::new(0.0, 1.0, 0.0),
            Vec3::new(0.0, -1.0, 0.0),
            Vec3::new(0.0, 0.0, 1.0),
        ];
        let err = TriMesh::new(p, vec![[0, 1, 2], [1, 0, 3], [0, 1, 4]]).unwrap_err();
        assert!(matches!(err, Error::NonManifoldEdge { count: 3, .. }), "{err}");
    }

    #[test]
    fn rejects_flipped_neighbor() {
        let p = vec![
            Vec3::new(0.0, 0.0, 0.0),
            Vec3::new(1.0, 0.0, 0.0),
            Vec3::new(0.0, 1.0, 0.0),
            Vec3::new(0.0, -1.0, 0.0),
        ];
        let err = TriMesh::new(p, vec![[0, 1, 2], [0, 1, 3]]).unwrap_err();
        assert!(matches!(err, Error::InconsistentOrientation { .. }), "{err}");
    }

    #[test]
    fn rejects_degenerate_and_repeated() {
        let p = vec![Vec3::new(0.0, 0.0, 0.0), Vec3::new(1.0, 0.0, 0.0), Vec3::new(2.0, 0.0, 0.0)];
        assert!(matches!(
            TriMesh::new(p.clone(), vec![[0, 1, 2]]),
            Err(Error::DegenerateTriangle { .. })
        ));
        assert!(matches!(TriMesh::new(p.clone(), vec![[0, 1, 1]]), Err(Error::RepeatedVertex { .. })));
        assert!(matches!(TriMesh::new(p, vec![[0, 1, 7]]), Err(Error::IndexOutOfRange { .. })));
    }

    #[test]
    fn rejects_bowtie_vertex() {
        let p = vec![
            Vec3::new(0.0, 0.0, 0.0),
            Vec3::new(1.0, 0.0, 0.0),
            Vec3::new(1.0, 1.0, 0.0),
            Vec3::new(-1.0, 0.0, 0.0),
            Vec3::new(-1.0, -1.0, 0.0),
        ];
        let err = TriMesh::new(p, vec![[0, 1, 2], [0, 3, 4]]).unwrap_err();
        assert!(matches!(err, Error::NonManifoldVertex(0)));
    }

    #[test]
    fn isolated_vertex_star_errors() {
        let mut p = single_triangle().positions().to_vec();
        p.push(Vec3::new(5.0, 5.0, 5.0));
        let m = TriMesh::new(p, vec![[0, 1, 2]]).unwrap();
        assert!(matches!(m.vertex_star(3), Err(Error::IsolatedVertex(3))));
        assert!(matches!(m.vertex_star(9), Err(Error::InvalidVertex(9))));
    }

    #[test]
    fn split_edge_updates_counts() {
        let m = shapes::icosphere(1);
        let before = m.topology();
        let e = m.edges().iter().position(|e| !e.is_boundary()).unwrap();
        let (m2, q) = m.split_edge(e, 0.3).unwrap();
        let after = m2.topology();
        assert_eq!(q, before.vertices);
        assert_eq!(after.vertices, before.vertices + 1);
        assert_eq!(after.edges, before.edges + 3);
        assert_eq!(after.faces, before.faces + 2);
        assert_eq!(after.chi, before.chi);
        assert_eq!(m2.vertex_star(q).unwrap().degree(), 4);
    }

    #[test]
    fn find_edge_on_boundary_fan() {
        let m = shapes::planar_grid(2, 2, 1.0);
        for (id, e) in m.edges().iter().enumerate() {
            assert_eq!(m.find_edge(e.vertices[0], e.vertices[1]), Some(id));
            assert_eq!(m.find_edge(e.vertices[1], e.vertices[0]), Some(id));
        }
        assert_eq!(m.find_edge(0, 8), None);
    }
}
