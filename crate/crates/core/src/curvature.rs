//! Discrete curvature measures: angle defect (with its boundary turning
//! counterpart and the Brehm-Kuehnel positive/negative split), combinatorial
//! curvature, vector area, edge and vertex mean-curvature vectors, the
//! cotangent formula, Steiner edge curvature and two Willmore energies.

use std::f64::consts::{PI, TAU};

use rayon::prelude::*;

use crate::error::{Error, Result};
use crate::geom::{self, Vec3};
use crate::mesh::{face_of, EdgeId, TriMesh, VertexId};

/// Convexity of an interior edge relative to the mesh orientation.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Convexity {
    Convex,
    Flat,
    Concave,
}

impl Convexity {
    pub fn sign(self) -> i8 {
        match self {
            Convexity::Convex => 1,
            Convexity::Flat => 0,
            Convexity::Concave => -1,
        }
    }
}

/// Mean-curvature data of one interior edge.
#[derive(Debug, Clone, Copy)]
pub struct EdgeCurvature {
    pub edge: EdgeId,
    /// Exterior dihedral angle in `[0, pi)`.
    pub theta: f64,
    pub convexity: Convexity,
    /// Integrated vector mean curvature `e x (nu_2 - nu_1)`.
    pub h_vec: Vec3,
    /// Steiner scalar `theta * |e|`.
    pub h_steiner: f64,
    pub length: f64,
}

/// Cotangent weights `cot(alpha_i) + cot(beta_i)` for the spokes of a star,
/// aligned with [`crate::VertexStar::neighbors`]. Boundary spokes carry only
/// the one available angle.
#[derive(Debug, Clone)]
pub struct CotangentWeights {
    pub center: VertexId,
    pub neighbors: Vec<VertexId>,
    /// Angle opposite spoke `i` in star triangle `i`.
    pub alpha: Vec<Option<f64>>,
    /// Angle opposite spoke `i` in star triangle `i - 1`.
    pub beta: Vec<Option<f64>>,
    pub weights: Vec<f64>,
}

/// Both routes to the vertex mean-curvature vector.
#[derive(Debug, Clone, Copy)]
pub struct MeanCurvature {
    /// `1/2 * sum` of edge vectors over the interior edges at the vertex.
    pub edge_sum: Vec3,
    /// `1/2 * sum (cot a + cot b)(p_i - p)`, i.e. minus the area gradient.
    pub cotangent: Vec3,
    /// Set on boundary vertices: the edge sum misses the boundary edges and
    /// the force balance around the vertex is incomplete.
    pub boundary_incomplete: bool,
}

/// Brehm-Kuehnel split of the angle defect.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct CurvatureSplit {
    pub k_plus: f64,
    pub k_minus: f64,
    /// False when the vertex is not extreme on the hull of its star and the
    /// extended convention `K+ = 0, K- = -K` was applied.
    pub extreme: bool,
}

impl CurvatureSplit {
    pub fn absolute(&self) -> f64 {
        self.k_plus + self.k_minus
    }
}

/// Per-vertex curvature bundle.
#[derive(Debug, Clone)]
pub struct VertexCurvature {
    pub vertex: VertexId,
    pub is_boundary: bool,
    pub angle_sum: f64,
    /// Angle defect `2 pi - sum theta` (interior vertices).
    pub gauss: Option<f64>,
    /// Geodesic turn `pi - sum theta` (boundary vertices).
    pub boundary_turn: Option<f64>,
    pub split: Option<CurvatureSplit>,
    pub vector_area: Option<Vec3>,
    pub mean_curvature: Vec3,
    /// `Area(Star) / 3`.
    pub area: f64,
    /// `|H_p| / |A_p|`; `None` on boundary vertices or when `|A_p| = 0`.
    pub density: Option<f64>,
}

impl VertexCurvature {
    /// `K_p / A_p` with the one-third star area. Not a canonical density.
    pub fn gauss_density(&self) -> Option<f64> {
        self.gauss.map(|k| k / self.area)
    }
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct WillmoreEnergies {
    /// `sum h_p^2 A_p`.
    pub w_hp: f64,
    /// `sum |H_p|^2 / A_p`.
    pub w_legacy: f64,
    /// Interior vertices skipped because `|A_p| = 0`.
    pub skipped: usize,
}

/// Whole-mesh curvature tables, vertex rows in index order, edge rows for
/// interior edges in edge-id order.
#[derive(Debug, Clone)]
pub struct CurvatureReport {
    pub vertices: Vec<VertexCurvature>,
    pub edges: Vec<EdgeCurvature>,
    /// Sum of angle defects and boundary turns; equals `2 pi chi`.
    pub total_gauss: f64,
    pub willmore: WillmoreEnergies,
}

/// Sum of the interior angles at `v`.
pub fn angle_sum(mesh: &TriMesh, v: VertexId) -> Result<f64> {
    let star = mesh.vertex_star(v)?;
    Ok(star.spokes.iter().map(|&h| mesh.corner_angle(face_of(h), h % 3)).sum())
}

/// Angle defect `K_p = 2 pi - sum theta_i` at an interior vertex.
pub fn gauss_curvature(mesh: &TriMesh, v: VertexId) -> Result<f64> {
    let s = angle_sum(mesh, v)?;
    if mesh.is_boundary_vertex(v) {
        return Err(Error::BoundaryVertex(v));
    }
    Ok(TAU - s)
}

/// Geodesic turn `pi - sum theta_i` at a boundary vertex.
pub fn gauss_curvature_boundary(mesh: &TriMesh, v: VertexId) -> Result<f64> {
    let s = angle_sum(mesh, v)?;
    if !mesh.is_boundary_vertex(v) {
        return Err(Error::InteriorVertex(v));
    }
    Ok(PI - s)
}

/// `(pi / 3)(6 - deg v)`: the defect if every triangle were equilateral.
pub fn combinatorial_curvature(mesh: &TriMesh, v: VertexId) -> Result<f64> {
    mesh.check_vertex(v)?;
    let deg = match mesh.vertex_star(v) {
        Ok(s) => s.degree(),
        Err(Error::IsolatedVertex(_)) => 0,
        Err(e) => return Err(e),
    };
    Ok(PI / 3.0 * (6.0 - deg as f64))
}

/// Vector area `A_p = (1/6) sum p_i x p_{i+1}` of a closed star; the
/// gradient of the cone volume with respect to `p`.
pub fn vector_area(mesh: &TriMesh, v: VertexId) -> Result<Vec3> {
    let star = mesh.vertex_star(v)?;
    if star.is_boundary {
        return Err(Error::BoundaryVertex(v));
    }
    let p = mesh.positions();
    Ok(star.link_pairs().map(|(a, b)| p[a].cross(&p[b])).sum::<Vec3>() / 6.0)
}

/// `Area(Star(v)) / 3`.
pub fn star_area_third(mesh: &TriMesh, v: VertexId) -> Result<f64> {
    let star = mesh.vertex_star(v)?;
    Ok(star.triangles.iter().map(|&f| mesh.face_area(f)).sum::<f64>() / 3.0)
}

pub fn edge_mean_curvature(mesh: &TriMesh, e: EdgeId) -> Result<EdgeCurvature> {
    let edge = *mesh.edge(e)?;
    let h2 = edge.twin.ok_or(Error::BoundaryEdge(e))?;
    let h1 = edge.halfedge;
    let ev = mesh.halfedge_vector(h1);
    let n1 = mesh.face_normal(face_of(h1));
    let n2 = mesh.face_normal(face_of(h2));
    let cross = n1.cross(&n2);
    let theta = cross.norm().atan2(n1.dot(&n2));
    let length = ev.norm();
    let orient = cross.dot(&ev);
    let convexity = if theta <= 1e-14 || orient.abs() <= 1e-14 * length {
        Convexity::Flat
    } else if orient > 0.0 {
        Convexity::Convex
    } else {
        Convexity::Concave
    };
    Ok(EdgeCurvature {
        edge: e,
        theta,
        convexity,
        h_vec: ev.cross(&(n2 - n1)),
        h_steiner: theta * length,
        length,
    })
}

pub fn cotangent_weights(mesh: &TriMesh, v: VertexId) -> Result<CotangentWeights> {
    let star = mesh.vertex_star(v)?;
    let n = star.neighbors.len();
    let nt = star.triangles.len();
    let closed = !star.is_boundary;
    let p = mesh.positions();
    let cot_at = |apex: VertexId, a: VertexId, b: VertexId, face: usize| {
        geom::cot_between(&(p[a] - p[apex]), &(p[b] - p[apex])).ok_or(Error::DegenerateAngle { face })
    };
    let mut alpha = vec![None; n];
    let mut beta = vec![None; n];
    for t in 0..nt {
        let (a, b) = (star.neighbors[t], star.neighbors[(t + 1) % n]);
        let f = star.triangles[t];
        // triangle t = (v, a, b): angle at b faces spoke a, angle at a faces spoke b
        alpha[t] = Some(cot_at(b, v, a, f)?);
        let j = if closed { (t + 1) % n } else { t + 1 };
        beta[j] = Some(cot_at(a, v, b, f)?);
    }
    let weights = alpha
        .iter()
        .zip(&beta)
        .map(|(a, b)| a.unwrap_or(0.0) + b.unwrap_or(0.0))
        .collect();
    Ok(CotangentWeights { center: v, neighbors: star.neighbors, alpha, beta, weights })
}

/// Vertex mean-curvature vector `H_p`, by the edge sum `2 H_p = sum H_e`
/// and by the cotangent formula. On interior vertices the two agree to
/// rounding; on boundary vertices the cotangent route gives minus the area
/// gradient and the edge sum keeps only interior edges.
pub fn vertex_mean_curvature(mesh: &TriMesh, v: VertexId) -> Result<MeanCurvature> {
    let star = mesh.vertex_star(v)?;
    let mut edge_sum = Vec3::zeros();
    for &h in &star.spokes {
        let e = mesh.edge_of(h);
        if mesh.edges()[e].is_boundary() {
            continue;
        }
        let ec = edge_mean_curvature(mesh, e)?;
        edge_sum += ec.h_vec;
    }
    let w = cotangent_weights(mesh, v)?;
    let p = mesh.position(v);
    let cotangent = w
        .neighbors
        .iter()
        .zip(&w.weights)
        .map(|(&q, &wq)| (mesh.position(q) - p) * wq)
        .sum::<Vec3>()
        * 0.5;
    Ok(MeanCurvature { edge_sum: edge_sum * 0.5, cotangent, boundary_incomplete: star.is_boundary })
}

/// Brehm-Kuehnel split at an interior vertex: `K+` is the defect of the
/// convex hull of the star at `v`, `K- = K+ - K`.
pub fn brehm_kuehnel_split(mesh: &TriMesh, v: VertexId) -> Result<CurvatureSplit> {
    let k = gauss_curvature(mesh, v)?;
    let star = mesh.vertex_star(v)?;
    let p = mesh.position(v);
    let dirs: Vec<Vec3> = star.neighbors.iter().map(|&q| mesh.position(q) - p).collect();
    Ok(match cone_hull_defect(&dirs) {
        Some(k_plus) => CurvatureSplit { k_plus, k_minus: k_plus - k, extreme: true },
        None => CurvatureSplit { k_plus: 0.0, k_minus: -k, extreme: false },
    })
}

/// Defect `2 pi - sum(face angles)` at the apex of the convex cone spanned by
/// `dirs`, or `None` when the cone is not pointed (apex not extreme, or all
/// directions coplanar).
pub fn cone_hull_defect(dirs: &[Vec3]) -> Option<f64> {
    const SUPPORT_TOL: f64 = 1e-12;
    let units: Vec<Vec3> = dirs.iter().map(|d| d.normalize()).collect();
    let mut axis = Vec3::zeros();
    for i in 0..units.len() {
        for j in i + 1..units.len() {
            let c = units[i].cross(&units[j]);
            if c.norm() < 1e-12 {
                continue;
            }
            let n = c.normalize();
            let (lo, hi) = units
                .iter()
                .map(|u| u.dot(&n))
                .fold((f64::INFINITY, f64::NEG_INFINITY), |(lo, hi), d| (lo.min(d), hi.max(d)));
            if hi <= SUPPORT_TOL {
                axis -= n;
            }
            if lo >= -SUPPORT_TOL {
                axis += n;
            }
        }
    }
    if axis.norm() < 1e-9 {
        return None;
    }
    let axis = axis.normalize();
    if units.iter().any(|u| u.dot(&axis) <= 1e-9) {
        return None;
    }
    // central projection onto the plane one unit along the axis
    let helper = if axis.x.abs() < 0.9 { Vec3::x() } else { Vec3::y() };
    let bu = axis.cross(&helper).normalize();
    let bw = axis.cross(&bu);
    let pts: Vec<(f64, f64, usize)> = units
        .iter()
        .enumerate()
        .map(|(i, u)| {
            let q = u / u.dot(&axis);
            (q.dot(&bu), q.dot(&bw), i)
        })
        .collect();
    let hull = convex_hull_2d(pts);
    if hull.len() < 3 {
        return None;
    }
    let sum: f64 = (0..hull.len())
        .map(|k| geom::angle_between(&units[hull[k]], &units[hull[(k + 1) % hull.len()]]))
        .sum();
    Some(TAU - sum)
}

/// Monotone-chain hull, counterclockwise, collinear points dropped. Returns
/// the payload indices of the hull vertices.
fn convex_hull_2d(mut pts: Vec<(f64, f64, usize)>) -> Vec<usize> {
    pts.sort_by(|a, b| a.0.total_cmp(&b.0).then(a.1.total_cmp(&b.1)));
    pts.dedup_by(|a, b| (a.0 - b.0).abs() < 1e-14 && (a.1 - b.1).abs() < 1e-14);
    if pts.len() < 3 {
        return pts.iter().map(|p| p.2).collect();
    }
    let cross = |o: &(f64, f64, usize), a: &(f64, f64, usize), b: &(f64, f64, usize)| {
        (a.0 - o.0) * (b.1 - o.1) - (a.1 - o.1) * (b.0 - o.0)
    };
    let mut hull: Vec<(f64, f64, usize)> = Vec::with_capacity(2 * pts.len());
    for pass in 0..2 {
        let start = hull.len();
        let iter: Box<dyn Iterator<Item = &(f64, f64, usize)>> =
            if pass == 0 { Box::new(pts.iter()) } else { Box::new(pts.iter().rev()) };
        for p in iter {
            while hull.len() >= start + 2 && cross(&hull[hull.len() - 2], &hull[hull.len() - 1], p) <= 1e-15 {
                hull.pop();
            }
            hull.push(*p);
        }
        hull.pop();
    }
    hull.iter().map(|p| p.2).collect()
}

pub fn vertex_curvature(mesh: &TriMesh, v: VertexId) -> Result<VertexCurvature> {
    let sum = angle_sum(mesh, v)?;
    let is_boundary = mesh.is_boundary_vertex(v);
    let mean = vertex_mean_curvature(mesh, v)?;
    let area = star_area_third(mesh, v)?;
    if is_boundary {
        return Ok(VertexCurvature {
            vertex: v,
            is_boundary,
            angle_sum: sum,
            gauss: None,
            boundary_turn: Some(PI - sum),
            split: None,
            vector_area: None,
            mean_curvature: mean.edge_sum,
            area,
            density: None,
        });
    }
    let a = vector_area(mesh, v)?;
    let an = a.norm();
    Ok(VertexCurvature {
        vertex: v,
        is_boundary,
        angle_sum: sum,
        gauss: Some(TAU - sum),
        boundary_turn: None,
        split: Some(brehm_kuehnel_split(mesh, v)?),
        vector_area: Some(a),
        mean_curvature: mean.edge_sum,
        area,
        density: (an > 0.0).then(|| mean.edge_sum.norm() / an),
    })
}

/// Discrete Willmore energies over interior vertices.
pub fn willmore_energies(mesh: &TriMesh) -> Result<WillmoreEnergies> {
    let rows = (0..mesh.vertex_count())
        .into_par_iter()
        .filter(|&v| !mesh.is_isolated(v) && !mesh.is_boundary_vertex(v))
        .map(|v| {
            let h = vertex_mean_curvature(mesh, v)?.edge_sum;
            let a = vector_area(mesh, v)?;
            let area = star_area_third(mesh, v)?;
            Ok((h, a, area))
        })
        .collect::<Result<Vec<_>>>()?;
    Ok(willmore_from_rows(rows.into_iter()))
}

fn willmore_from_rows(rows: impl Iterator<Item = (Vec3, Vec3, f64)>) -> WillmoreEnergies {
    let mut w = WillmoreEnergies { w_hp: 0.0, w_legacy: 0.0, skipped: 0 };
    for (h, a, area) in rows {
        let h2 = h.norm_squared();
        w.w_legacy += h2 / area;
        let an2 = a.norm_squared();
        if an2 > 0.0 {
            w.w_hp += h2 / an2 * area;
        } else {
            w.skipped += 1;
        }
    }
    w
}

/// Split interior edge `e` at parameter `t` and return the new mesh and the
/// new vertex. The new vertex satisfies `2 H_new = H_e(old)` for every `t`.
pub fn subdivide_edge(mesh: &TriMesh, e: EdgeId, t: f64) -> Result<(TriMesh, VertexId)> {
    if mesh.edge(e)?.is_boundary() {
        return Err(Error::BoundaryEdge(e));
    }
    mesh.split_edge(e, t)
}

/// Length of the intrinsic circle of radius `eps` about interior vertex `v`,
/// measured by developing each star triangle into the plane. Requires `eps`
/// below the distance from `v` to every opposite link edge.
pub fn epsilon_circle_length(mesh: &TriMesh, v: VertexId, eps: f64) -> Result<f64> {
    let star = mesh.vertex_star(v)?;
    if star.is_boundary {
        return Err(Error::BoundaryVertex(v));
    }
    let p = mesh.position(v);
    let mut length = 0.0;
    for (a, b) in star.link_pairs() {
        let (u, w) = (mesh.position(a) - p, mesh.position(b) - p);
        let base = (w - u).norm();
        let altitude = u.cross(&w).norm() / base;
        if !(eps > 0.0 && eps < altitude) {
            return Err(Error::InvalidParameter(format!(
                "radius {eps} leaves the star (altitude {altitude})"
            )));
        }
        // developed triangle: u on the x axis, w at its true angle
        let (lu, lw) = (u.norm(), w.norm());
        let cos = u.dot(&w) / (lu * lw);
        let sin = u.cross(&w).norm() / (lu * lw);
        let w2 = (lw * cos, lw * sin);
        length += eps * w2.1.atan2(w2.0);
    }
    Ok(length)
}

/// Every per-vertex and per-edge quantity, computed in parallel with rows in
/// index order.
pub fn curvature_report(mesh: &TriMesh) -> Result<CurvatureReport> {
    let vertices = (0..mesh.vertex_count())
        .into_par_iter()
        .filter(|&v| !mesh.is_isolated(v))
        .map(|v| vertex_curvature(mesh, v))
        .collect::<Result<Vec<_>>>()?;
    let edges = (0..mesh.edge_count())
        .into_par_iter()
        .filter(|&e| !mesh.edges()[e].is_boundary())
        .map(|e| edge_mean_curvature(mesh, e))
        .collect::<Result<Vec<_>>>()?;
    let total_gauss = vertices.iter().map(|r| r.gauss.or(r.boundary_turn).unwrap_or(0.0)).sum();
    let willmore = willmore_from_rows(vertices.iter().filter_map(|r| {
        let a = r.vector_area?;
        Some((r.mean_curvature, a, r.area))
    }));
    Ok(CurvatureReport { vertices, edges, total_gauss, willmore })
}
