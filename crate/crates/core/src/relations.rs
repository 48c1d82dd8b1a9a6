//! Boundary-integral identities on triangle patches, evaluated as
//! independent left and right hand sides.

use std::f64::consts::{PI, TAU};

use crate::curvature;
use crate::error::{Error, Result};
use crate::geom::Vec3;
use crate::mesh::{face_of, next, EdgeId, FaceId, HalfedgeId, TriMesh, VertexId};

/// Boundary halfedge of a patch, oriented as in its triangle.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct BoundarySegment {
    pub halfedge: HalfedgeId,
    pub a: Vec3,
    pub b: Vec3,
    /// Unit outward conormal in the incident triangle's plane.
    pub conormal: Vec3,
    pub length: f64,
}

impl BoundarySegment {
    pub fn midpoint(&self) -> Vec3 {
        (self.a + self.b) * 0.5
    }
}

/// A set of triangles `D` with its oriented boundary `∂D`.
#[derive(Debug, Clone)]
pub struct Patch {
    triangles: Vec<FaceId>,
    member: Vec<bool>,
    segments: Vec<BoundarySegment>,
    loops: Vec<Vec<usize>>,
    interior_edges: Vec<EdgeId>,
    vertices: Vec<VertexId>,
    euler: i64,
}

impl Patch {
    pub fn new(mesh: &TriMesh, triangles: impl IntoIterator<Item = FaceId>) -> Result<Self> {
        let mut member = vec![false; mesh.face_count()];
        for f in triangles {
            if f >= mesh.face_count() {
                return Err(Error::InvalidParameter(format!(
                    "triangle {f} out of range ({} triangles)",
                    mesh.face_count()
                )));
            }
            member[f] = true;
        }
        let triangles: Vec<FaceId> = (0..mesh.face_count()).filter(|&f| member[f]).collect();
        if triangles.is_empty() {
            return Err(Error::EmptyPatch);
        }
        let inside = |h: HalfedgeId| member[face_of(h)];
        let on_boundary = |h: HalfedgeId| mesh.twin(h).is_none_or(|t| !inside(t));

        let mut segments = Vec::new();
        let mut segment_of = std::collections::HashMap::new();
        for &f in &triangles {
            for k in 0..3 {
                let h = 3 * f + k;
                if !on_boundary(h) {
                    continue;
                }
                let a = mesh.position(mesh.tail(h));
                let b = mesh.position(mesh.head(h));
                let length = (b - a).norm();
                let mut conormal = ((b - a) / length).cross(&mesh.face_normal(f));
                if conormal.dot(&(a - mesh.face_centroid(f))) < 0.0 {
                    conormal = -conormal;
                }
                segment_of.insert(h, segments.len());
                segments.push(BoundarySegment { halfedge: h, a, b, conormal, length });
            }
        }

        // chain segments head to tail, turning around each shared vertex
        // through the triangles of D
        let mut used = vec![false; segments.len()];
        let mut loops = Vec::new();
        for start in 0..segments.len() {
            if used[start] {
                continue;
            }
            let mut lp = Vec::new();
            let mut s = start;
            while !used[s] {
                used[s] = true;
                lp.push(s);
                let mut h = next(segments[s].halfedge);
                while let Some(t) = mesh.twin(h).filter(|&t| inside(t)) {
                    h = next(t);
                }
                s = segment_of[&h];
            }
            loops.push(lp);
        }

        let mut interior_edges = Vec::new();
        let mut vertex_seen = vec![false; mesh.vertex_count()];
        let mut edge_count = 0i64;
        for (e, edge) in mesh.edges().iter().enumerate() {
            let a = inside(edge.halfedge);
            let b = edge.twin.is_some_and(inside);
            if a && b {
                interior_edges.push(e);
            }
            if a || b {
                edge_count += 1;
            }
        }
        for &f in &triangles {
            for v in mesh.triangle(f) {
                vertex_seen[v] = true;
            }
        }
        let vertices: Vec<VertexId> = (0..mesh.vertex_count()).filter(|&v| vertex_seen[v]).collect();
        // a vertex where D touches itself is counted once per fan of D
        let mut fans = vec![0i64; mesh.vertex_count()];
        for s in &segments {
            fans[mesh.tail(s.halfedge)] += 1;
        }
        let vertex_count: i64 = vertices.iter().map(|&v| fans[v].max(1)).sum();
        let euler = vertex_count - edge_count + triangles.len() as i64;
        Ok(Patch { triangles, member, segments, loops, interior_edges, vertices, euler })
    }

    /// All triangles of the mesh.
    pub fn whole(mesh: &TriMesh) -> Result<Self> {
        Self::new(mesh, 0..mesh.face_count())
    }

    /// Triangles incident to `v`.
    pub fn star(mesh: &TriMesh, v: VertexId) -> Result<Self> {
        let star = mesh.vertex_star(v)?;
        Self::new(mesh, star.triangles)
    }

    pub fn triangles(&self) -> &[FaceId] {
        &self.triangles
    }

    pub fn contains(&self, f: FaceId) -> bool {
        self.member.get(f).copied().unwrap_or(false)
    }

    pub fn segments(&self) -> &[BoundarySegment] {
        &self.segments
    }

    /// Boundary loops as indices into [`Patch::segments`].
    pub fn loops(&self) -> &[Vec<usize>] {
        &self.loops
    }

    /// Edges with both incident triangles in the patch.
    pub fn interior_edges(&self) -> &[EdgeId] {
        &self.interior_edges
    }

    pub fn vertices(&self) -> &[VertexId] {
        &self.vertices
    }

    /// `V - E + F`, with vertices where `D` is pinched counted once per
    /// triangle fan, so this is the Euler characteristic of the surface `D`.
    pub fn euler_characteristic(&self) -> i64 {
        self.euler
    }

    pub fn area(&self, mesh: &TriMesh) -> f64 {
        self.triangles.iter().map(|&f| mesh.face_area(f)).sum()
    }

    /// Largest distance between two patch vertices. Large patches use the
    /// bounding-box diagonal instead, which bounds it from above.
    pub fn diameter(&self, mesh: &TriMesh) -> f64 {
        let pts: Vec<Vec3> = self.vertices.iter().map(|&v| mesh.position(v)).collect();
        if pts.len() > 2048 {
            let (lo, hi) = crate::mesh::bounding_box(&pts);
            return (hi - lo).norm();
        }
        let mut d2: f64 = 0.0;
        for i in 0..pts.len() {
            for j in i + 1..pts.len() {
                d2 = d2.max((pts[i] - pts[j]).norm_squared());
            }
        }
        d2.sqrt()
    }
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub enum Quantity {
    Scalar(f64),
    Vector(Vec3),
}

impl Quantity {
    fn distance(&self, other: &Quantity) -> f64 {
        match (self, other) {
            (Quantity::Scalar(a), Quantity::Scalar(b)) => (a - b).abs(),
            (Quantity::Vector(a), Quantity::Vector(b)) => (a - b).norm(),
            _ => f64::INFINITY,
        }
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct RelationReport {
    pub name: &'static str,
    pub lhs: Quantity,
    pub rhs: Quantity,
    pub residual: f64,
    pub tol: f64,
    pub pass: bool,
}

impl RelationReport {
    pub fn new(name: &'static str, lhs: Quantity, rhs: Quantity, tol: f64) -> Self {
        let residual = lhs.distance(&rhs);
        RelationReport { name, lhs, rhs, residual, tol, pass: residual <= tol }
    }
}

fn edge_data(mesh: &TriMesh, e: EdgeId) -> Result<(Vec3, Vec3)> {
    let h = curvature::edge_mean_curvature(mesh, e)?.h_vec;
    let [a, b] = mesh.edges()[e].vertices;
    Ok(((mesh.position(a) + mesh.position(b)) * 0.5, h))
}

/// `Σ η |s|` over `∂D` against `Σ H_e` over interior edges.
pub fn check_force_balance(mesh: &TriMesh, patch: &Patch) -> Result<RelationReport> {
    let lhs: Vec3 = patch.segments.iter().map(|s| s.conormal * s.length).sum();
    let mut rhs = Vec3::zeros();
    for &e in &patch.interior_edges {
        rhs += edge_data(mesh, e)?.1;
    }
    let tol = 1e-12 * patch.diameter(mesh);
    Ok(RelationReport::new("force-balance", Quantity::Vector(lhs), Quantity::Vector(rhs), tol))
}

/// `Σ m_s × η |s|` against `Σ m_e × H_e`, with `m` segment and edge midpoints.
pub fn check_torque_balance(mesh: &TriMesh, patch: &Patch) -> Result<RelationReport> {
    let lhs: Vec3 = patch.segments.iter().map(|s| s.midpoint().cross(&s.conormal) * s.length).sum();
    let mut rhs = Vec3::zeros();
    for &e in &patch.interior_edges {
        let (m, h) = edge_data(mesh, e)?;
        rhs += m.cross(&h);
    }
    let tol = 1e-10 * patch.diameter(mesh).powi(2);
    Ok(RelationReport::new("torque", Quantity::Vector(lhs), Quantity::Vector(rhs), tol))
}

/// `Σ (m_s · η) |s|` against `Σ m_e · H_e + 2 Area(D)`.
pub fn check_position_relation(mesh: &TriMesh, patch: &Patch) -> Result<RelationReport> {
    let lhs: f64 = patch.segments.iter().map(|s| s.midpoint().dot(&s.conormal) * s.length).sum();
    let mut rhs = 2.0 * patch.area(mesh);
    for &e in &patch.interior_edges {
        let (m, h) = edge_data(mesh, e)?;
        rhs += m.dot(&h);
    }
    let tol = 1e-10 * patch.diameter(mesh).powi(2);
    Ok(RelationReport::new("position", Quantity::Scalar(lhs), Quantity::Scalar(rhs), tol))
}

/// `½ Σ a × b` over `∂D` against `Σ Area(T) ν_T` over `D`.
pub fn check_vector_area(mesh: &TriMesh, patch: &Patch) -> Result<RelationReport> {
    let lhs: Vec3 = patch.segments.iter().map(|s| s.a.cross(&s.b) * 0.5).sum();
    let rhs: Vec3 = patch.triangles.iter().map(|&f| mesh.face_cross(f) * 0.5).sum();
    let tol = 1e-12 * patch.diameter(mesh).powi(2);
    Ok(RelationReport::new("vector-area", Quantity::Vector(lhs), Quantity::Vector(rhs), tol))
}

/// Total curvature of `D`: interior angle defects plus the boundary turn
/// `π - Σθ` at every boundary visit, with `θ` the corner angles inside `D`.
pub fn patch_total_curvature(mesh: &TriMesh, patch: &Patch) -> Result<f64> {
    let mut on_boundary = vec![0usize; mesh.vertex_count()];
    for s in &patch.segments {
        on_boundary[mesh.tail(s.halfedge)] += 1;
    }
    let mut angle = vec![0.0; mesh.vertex_count()];
    for &f in &patch.triangles {
        let tri = mesh.triangle(f);
        for (k, &v) in tri.iter().enumerate() {
            angle[v] += mesh.corner_angle(f, k);
        }
    }
    let mut total = 0.0;
    for &v in &patch.vertices {
        total += match on_boundary[v] {
            0 => TAU - angle[v],
            n => n as f64 * PI - angle[v],
        };
    }
    Ok(total)
}

/// Whole mesh (`patch = None`): total curvature against `2πχ`, with mesh
/// boundary vertices contributing their turning angles. Disk patch: total
/// curvature of the patch against `2π`.
pub fn check_gauss_bonnet(mesh: &TriMesh, patch: Option<&Patch>) -> Result<RelationReport> {
    let (lhs, rhs) = match patch {
        None => {
            let whole = Patch::whole(mesh)?;
            let chi = mesh.euler_characteristic().chi;
            (patch_total_curvature(mesh, &whole)?, TAU * chi as f64)
        }
        Some(p) => {
            if p.euler != 1 {
                return Err(Error::PatchNotDisk { chi: p.euler });
            }
            (patch_total_curvature(mesh, p)?, TAU)
        }
    };
    let tol = if patch.is_none() { 1e-8 } else { 1e-10 };
    Ok(RelationReport::new("gauss-bonnet", Quantity::Scalar(lhs), Quantity::Scalar(rhs), tol))
}

/// Exterior-angle sum of a boundary loop measured in the surface: the sum of
/// `π - Σθ` over its vertices.
pub fn loop_turning(mesh: &TriMesh, patch: &Patch, lp: &[usize]) -> f64 {
    lp.iter()
        .map(|&s| {
            let h = patch.segments[s].halfedge;
            // corners of D at v between this segment and the previous one
            let mut theta = 0.0;
            let mut g = h;
            loop {
                let f = face_of(g);
                theta += mesh.corner_angle(f, g % 3);
                match mesh.twin(crate::mesh::prev(g)).filter(|&t| patch.contains(face_of(t))) {
                    Some(t) => g = t,
                    None => break,
                }
            }
            PI - theta
        })
        .sum()
}

/// `true` if every conormal is unit and orthogonal to its segment and
/// triangle normal within `tol`.
pub fn conormals_valid(mesh: &TriMesh, patch: &Patch, tol: f64) -> bool {
    patch.segments.iter().all(|s| {
        let n = mesh.face_normal(face_of(s.halfedge));
        let u = (s.b - s.a) / s.length;
        (s.conormal.norm() - 1.0).abs() <= tol && s.conormal.dot(&u).abs() <= tol && s.conormal.dot(&n).abs() <= tol
    })
}

#[cfg(test)]
mod tests;
