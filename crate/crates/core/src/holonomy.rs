//! Discrete bundles over meshes and polygons, the Levi-Civita ridge
//! rotations between neighboring facets, and loop holonomy.

use std::f64::consts::TAU;

use nalgebra::{Matrix2, Matrix3};

use crate::curvature;
use crate::curve::{self, PolyCurve};
use crate::error::{Error, Result};
use crate::geom::{self, Vec3};
use crate::mesh::{face_of, EdgeId, FaceId, TriMesh, VertexId};

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum BundleKind {
    Tangent,
    Normal,
    AmbientTrivial,
}

/// One orthonormal fiber basis per facet, stored in ambient coordinates.
#[derive(Debug, Clone)]
pub struct DiscreteBundle {
    pub kind: BundleKind,
    pub rank: usize,
    pub fibers: Vec<Vec<Vec3>>,
}

/// Simple rotation about an interior edge carrying facet `from` onto `to`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct RidgeTransport {
    pub edge: EdgeId,
    pub from: FaceId,
    pub to: FaceId,
    pub rotation: Matrix3<f64>,
}

/// Tangent and normal bundles of a mesh with their ridge rotations, indexed
/// by edge id; boundary edges carry none.
#[derive(Debug, Clone)]
pub struct LeviCivita {
    pub tangent: DiscreteBundle,
    pub normal: DiscreteBundle,
    pub transports: Vec<Option<RidgeTransport>>,
}

impl LeviCivita {
    /// Rotation carrying facet `from` across `edge` to its neighbor.
    pub fn transport(&self, edge: EdgeId, from: FaceId) -> Result<Matrix3<f64>> {
        let t = self.transports.get(edge).ok_or(Error::InvalidEdge(edge))?.ok_or(Error::BoundaryEdge(edge))?;
        if t.from == from {
            Ok(t.rotation)
        } else if t.to == from {
            Ok(t.rotation.transpose())
        } else {
            Err(Error::InvalidParameter(format!("triangle {from} is not incident to edge {edge}")))
        }
    }

    /// Ambient bundle `T ⊕ N`: the trivial rank-3 bundle with the same
    /// transports.
    pub fn ambient(&self) -> DiscreteBundle {
        let fibers = self
            .tangent
            .fibers
            .iter()
            .zip(&self.normal.fibers)
            .map(|(t, n)| vec![t[0], t[1], n[0]])
            .collect();
        DiscreteBundle { kind: BundleKind::AmbientTrivial, rank: 3, fibers }
    }
}

pub fn build_levi_civita(mesh: &TriMesh) -> LeviCivita {
    let mut tangent = Vec::with_capacity(mesh.face_count());
    let mut normal = Vec::with_capacity(mesh.face_count());
    for f in 0..mesh.face_count() {
        let h = (0..3).map(|k| 3 * f + k).min_by_key(|&h| mesh.edge_of(h)).unwrap();
        let n = mesh.face_normal(f);
        let b1 = mesh.halfedge_vector(h).normalize();
        tangent.push(vec![b1, n.cross(&b1)]);
        normal.push(vec![n]);
    }
    let transports = mesh
        .edges()
        .iter()
        .enumerate()
        .map(|(e, edge)| {
            let h2 = edge.twin?;
            let h1 = edge.halfedge;
            let (f1, f2) = (face_of(h1), face_of(h2));
            let axis = mesh.halfedge_vector(h1).normalize();
            let (n1, n2) = (mesh.face_normal(f1), mesh.face_normal(f2));
            let angle = n1.cross(&n2).dot(&axis).atan2(n1.dot(&n2));
            Some(RidgeTransport { edge: e, from: f1, to: f2, rotation: geom::rotation_about(&axis, angle) })
        })
        .collect();
    LeviCivita {
        tangent: DiscreteBundle { kind: BundleKind::Tangent, rank: 2, fibers: tangent },
        normal: DiscreteBundle { kind: BundleKind::Normal, rank: 1, fibers: normal },
        transports,
    }
}

#[derive(Debug, Clone, PartialEq)]
pub enum HolonomyLoop {
    /// Triangles of a vertex star in orientation order.
    VertexStar { vertex: VertexId, faces: Vec<FaceId> },
    /// Edges of a closed polygon.
    Curve { edges: usize },
}

#[derive(Debug, Clone, PartialEq)]
pub struct HolonomyResult {
    pub cycle: HolonomyLoop,
    /// Composite map on all of 3-space.
    pub ambient: Matrix3<f64>,
    /// Composite map in the starting fiber's basis.
    pub fiber: Matrix2<f64>,
    /// Rotation angle in `(-pi, pi]`.
    pub angle: f64,
    /// Axis left fixed by the composite: the starting facet normal for
    /// surfaces, the first tangent for curves.
    pub fixed_axis: Vec3,
    /// `|ambient * fixed_axis - fixed_axis|`.
    pub residual: f64,
}

fn fiber_map(m: &Matrix3<f64>, b1: &Vec3, b2: &Vec3) -> Matrix2<f64> {
    Matrix2::new(b1.dot(&(m * b1)), b1.dot(&(m * b2)), b2.dot(&(m * b1)), b2.dot(&(m * b2)))
}

/// Compose the ridge rotations once around the star of `v`, in orientation
/// order or reversed, starting and ending at the first star triangle.
pub fn star_composition(mesh: &TriMesh, conn: &LeviCivita, v: VertexId, reversed: bool) -> Result<Matrix3<f64>> {
    let star = mesh.vertex_star(v)?;
    if star.is_boundary {
        return Err(Error::BoundaryVertex(v));
    }
    let d = star.degree();
    let mut m = Matrix3::identity();
    for step in 0..d {
        // triangles i and i + 1 share the spoke to neighbor i + 1
        let (i, spoke) = if reversed { ((d - step) % d, (d - step) % d) } else { (step, (step + 1) % d) };
        let e = mesh.find_edge(v, star.neighbors[spoke]).ok_or(Error::InvalidVertex(v))?;
        let r = conn.transport(e, star.triangles[i])?;
        m = r * m;
    }
    Ok(m)
}

/// Tangent-bundle holonomy around an interior vertex, in the first star
/// triangle's fiber.
pub fn vertex_holonomy(mesh: &TriMesh, conn: &LeviCivita, v: VertexId) -> Result<HolonomyResult> {
    let m = star_composition(mesh, conn, v, false)?;
    let star = mesh.vertex_star(v)?;
    let f0 = star.triangles[0];
    let basis = &conn.tangent.fibers[f0];
    let fiber = fiber_map(&m, &basis[0], &basis[1]);
    let angle = geom::wrap_angle(fiber[(1, 0)].atan2(fiber[(0, 0)]));
    let n = conn.normal.fibers[f0][0];
    Ok(HolonomyResult {
        cycle: HolonomyLoop::VertexStar { vertex: v, faces: star.triangles },
        ambient: m,
        fiber,
        angle,
        fixed_axis: n,
        residual: (m * n - n).norm(),
    })
}

/// Product of the rank-one normal-bundle maps `ν_to · (R ν_from)` around
/// the star of `v`.
pub fn normal_bundle_holonomy(mesh: &TriMesh, conn: &LeviCivita, v: VertexId) -> Result<f64> {
    let star = mesh.vertex_star(v)?;
    if star.is_boundary {
        return Err(Error::BoundaryVertex(v));
    }
    let d = star.degree();
    let mut product = 1.0;
    for i in 0..d {
        let (a, b) = (star.triangles[i], star.triangles[(i + 1) % d]);
        let e = mesh.find_edge(v, star.neighbors[(i + 1) % d]).ok_or(Error::InvalidVertex(v))?;
        let r = conn.transport(e, a)?;
        product *= conn.normal.fibers[b][0].dot(&(r * conn.normal.fibers[a][0]));
    }
    Ok(product)
}

/// Codimension-2 angle defect `2π - Σβ`; on a surface the cells are
/// vertices and the `β` are corner angles.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct AngleDefectCodim2 {
    pub vertex: VertexId,
    pub defect: f64,
}

pub fn angle_defect_codim2(mesh: &TriMesh, v: VertexId) -> Result<AngleDefectCodim2> {
    let star = mesh.vertex_star(v)?;
    if star.is_boundary {
        return Err(Error::BoundaryVertex(v));
    }
    Ok(AngleDefectCodim2 { vertex: v, defect: TAU - curvature::angle_sum(mesh, v)? })
}

/// Per-vertex summary: holonomy angle next to the angle defect, which fixes
/// the winding the rotation alone cannot see.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct VertexHolonomyRow {
    pub vertex: VertexId,
    pub angle_mod_2pi: f64,
    pub angle_defect: f64,
    /// Circle distance between the two.
    pub residual: f64,
}

pub fn holonomy_table(mesh: &TriMesh) -> Result<Vec<VertexHolonomyRow>> {
    use rayon::prelude::*;
    let conn = build_levi_civita(mesh);
    (0..mesh.vertex_count())
        .into_par_iter()
        .filter(|&v| !mesh.is_boundary_vertex(v) && !mesh.is_isolated(v))
        .map(|v| {
            let h = vertex_holonomy(mesh, &conn, v)?;
            let k = curvature::gauss_curvature(mesh, v)?;
            Ok(VertexHolonomyRow {
                vertex: v,
                angle_mod_2pi: h.angle,
                angle_defect: k,
                residual: geom::angle_distance(h.angle, k),
            })
        })
        .collect()
}

/// Normal-bundle holonomy of a closed polygon: the corner rotations composed
/// once around, acting on the normal plane of the first edge.
pub fn curve_normal_holonomy(c: &PolyCurve) -> Result<HolonomyResult> {
    if !c.is_closed() {
        return Err(Error::OpenCurve);
    }
    let m_edges = c.edge_count();
    let mut m = Matrix3::identity();
    for i in (1..m_edges).chain(std::iter::once(0)) {
        m = curve::corner_rotation(c, i)? * m;
    }
    let t0 = c.tangent(0);
    let b1 = curve::default_seed_normal(c);
    let b2 = t0.cross(&b1);
    let fiber = fiber_map(&m, &b1, &b2);
    Ok(HolonomyResult {
        cycle: HolonomyLoop::Curve { edges: m_edges },
        ambient: m,
        fiber,
        angle: geom::wrap_angle(fiber[(1, 0)].atan2(fiber[(0, 0)])),
        fixed_axis: t0,
        residual: (m * t0 - t0).norm(),
    })
}
