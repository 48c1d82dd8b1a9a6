//! Area and volume gradients, the Dirichlet energy of maps between meshes,
//! curvature residuals, and a projected gradient descent on area.

use rayon::prelude::*;

use crate::error::{Error, Result};
use crate::geom::Vec3;
use crate::mesh::{TriMesh, VertexId};

/// One vector per vertex.
pub type GradientField = Vec<Vec3>;

/// Per-triangle cotangent accumulation of `grad_p Area`, valid at boundary
/// vertices too.
pub fn area_gradient(mesh: &TriMesh) -> Result<GradientField> {
    let p = mesh.positions();
    let mut g = vec![Vec3::zeros(); mesh.vertex_count()];
    for f in 0..mesh.face_count() {
        let tri = mesh.triangle(f);
        for k in 0..3 {
            // the angle at corner k weighs the opposite edge bc
            let (b, c) = (tri[(k + 1) % 3], tri[(k + 2) % 3]);
            let d = (p[b] - p[c]) * (0.5 * mesh.corner_cot(f, k)?);
            g[b] += d;
            g[c] -= d;
        }
    }
    Ok(g)
}

/// `grad_p Area` from in-plane quarter turns: each triangle contributes
/// `½ ν × (c - b)` to its corner `a`.
pub fn area_gradient_rotation(mesh: &TriMesh) -> GradientField {
    let p = mesh.positions();
    let mut g = vec![Vec3::zeros(); mesh.vertex_count()];
    for f in 0..mesh.face_count() {
        let n = mesh.face_normal(f);
        let tri = mesh.triangle(f);
        for k in 0..3 {
            let (a, b, c) = (tri[k], tri[(k + 1) % 3], tri[(k + 2) % 3]);
            g[a] += n.cross(&(p[c] - p[b])) * 0.5;
        }
    }
    g
}

/// `grad_p Vol`, the vertex vector areas of a closed mesh.
pub fn volume_gradient(mesh: &TriMesh) -> Result<GradientField> {
    if !mesh.is_closed() {
        return Err(Error::OpenMesh);
    }
    let p = mesh.positions();
    let mut g = vec![Vec3::zeros(); mesh.vertex_count()];
    for &[a, b, c] in mesh.triangles() {
        g[a] += p[b].cross(&p[c]) / 6.0;
        g[b] += p[c].cross(&p[a]) / 6.0;
        g[c] += p[a].cross(&p[b]) / 6.0;
    }
    Ok(g)
}

fn check_image(domain: &TriMesh, f: &[Vec3]) -> Result<()> {
    if f.len() != domain.vertex_count() {
        return Err(Error::InvalidParameter(format!(
            "image has {} points for {} vertices",
            f.len(),
            domain.vertex_count()
        )));
    }
    if let Some(i) = f.iter().position(|x| !x.iter().all(|c| c.is_finite())) {
        return Err(Error::NonFinite(i));
    }
    Ok(())
}

/// `½ Σ_T |∇f_T|² Area(T)` for the piecewise-linear map sending domain
/// vertex `i` to `f[i]`; the identity has energy `Area`.
pub fn dirichlet_energy(domain: &TriMesh, f: &[Vec3]) -> Result<f64> {
    check_image(domain, f)?;
    let p = domain.positions();
    let mut e = 0.0;
    for t in 0..domain.face_count() {
        let tri = domain.triangle(t);
        let cross = domain.face_cross(t);
        let area2 = cross.norm();
        if area2 < crate::geom::COT_GUARD {
            return Err(Error::DegenerateAngle { face: t });
        }
        let n = cross / area2;
        // gradients of the barycentric hat functions
        let grads: Vec<Vec3> = (0..3)
            .map(|k| n.cross(&(p[tri[(k + 2) % 3]] - p[tri[(k + 1) % 3]])) / area2)
            .collect();
        let mut norm2 = 0.0;
        for i in 0..3 {
            for j in 0..3 {
                norm2 += f[tri[i]].dot(&f[tri[j]]) * grads[i].dot(&grads[j]);
            }
        }
        e += 0.5 * norm2 * 0.5 * area2;
    }
    Ok(e)
}

/// The same energy as the cotangent form `¼ Σ_T Σ_k cot θ_k |f_b - f_c|²`.
pub fn dirichlet_energy_cotangent(domain: &TriMesh, f: &[Vec3]) -> Result<f64> {
    check_image(domain, f)?;
    let mut e = 0.0;
    for t in 0..domain.face_count() {
        let tri = domain.triangle(t);
        for k in 0..3 {
            let d = f[tri[(k + 1) % 3]] - f[tri[(k + 2) % 3]];
            e += 0.25 * domain.corner_cot(t, k)? * d.norm_squared();
        }
    }
    Ok(e)
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub enum ResidualKind {
    /// `H_p`.
    Minimality,
    /// `H_p - H A_p`.
    Cmc { h: f64 },
    /// `R_p(f) = ½ Σ (cot α + cot β)(f(p_i) - f(p))`.
    Harmonic,
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct ResidualRow {
    pub vertex: VertexId,
    pub vector: Vec3,
    pub norm: f64,
}

/// Residual vectors at interior vertices with max and RMS of their norms.
#[derive(Debug, Clone, PartialEq)]
pub struct ResidualReport {
    pub kind: ResidualKind,
    pub rows: Vec<ResidualRow>,
    pub max: f64,
    pub rms: f64,
}

impl ResidualReport {
    fn new(kind: ResidualKind, rows: Vec<ResidualRow>) -> Self {
        let max = rows.iter().map(|r| r.norm).fold(0.0, f64::max);
        let rms = if rows.is_empty() {
            0.0
        } else {
            (rows.iter().map(|r| r.norm * r.norm).sum::<f64>() / rows.len() as f64).sqrt()
        };
        ResidualReport { kind, rows, max, rms }
    }
}

fn interior(mesh: &TriMesh) -> Vec<VertexId> {
    (0..mesh.vertex_count()).filter(|&v| !mesh.is_boundary_vertex(v) && !mesh.is_isolated(v)).collect()
}

/// Harmonic residual of the map `f` with cotangent weights from `domain`.
/// This is `-grad_f E`, so the identity map gives `R_p(id) = H_p`.
pub fn harmonic_residual(domain: &TriMesh, f: &[Vec3]) -> Result<ResidualReport> {
    check_image(domain, f)?;
    let mut r = vec![Vec3::zeros(); domain.vertex_count()];
    for t in 0..domain.face_count() {
        let tri = domain.triangle(t);
        for k in 0..3 {
            let (b, c) = (tri[(k + 1) % 3], tri[(k + 2) % 3]);
            let d = (f[c] - f[b]) * (0.5 * domain.corner_cot(t, k)?);
            r[b] += d;
            r[c] -= d;
        }
    }
    let rows = interior(domain)
        .into_iter()
        .map(|v| ResidualRow { vertex: v, vector: r[v], norm: r[v].norm() })
        .collect();
    Ok(ResidualReport::new(ResidualKind::Harmonic, rows))
}

/// `|H_p|` at interior vertices, `H_p = -grad_p Area`.
pub fn minimality_residual(mesh: &TriMesh) -> Result<ResidualReport> {
    let g = area_gradient(mesh)?;
    let rows = interior(mesh)
        .into_iter()
        .map(|v| ResidualRow { vertex: v, vector: -g[v], norm: g[v].norm() })
        .collect();
    Ok(ResidualReport::new(ResidualKind::Minimality, rows))
}

/// Least-squares `H` in `H_p = H A_p` over the given vertices.
pub fn estimate_cmc(mesh: &TriMesh, vertices: &[VertexId]) -> Result<f64> {
    let g = area_gradient(mesh)?;
    let a = volume_gradient(mesh)?;
    let num: f64 = vertices.iter().map(|&v| (-g[v]).dot(&a[v])).sum();
    let den: f64 = vertices.iter().map(|&v| a[v].norm_squared()).sum();
    if den == 0.0 {
        return Err(Error::InvalidParameter("vector areas vanish".into()));
    }
    Ok(num / den)
}

/// `|H_p - H A_p|` at every vertex of a closed mesh.
pub fn cmc_residual(mesh: &TriMesh, h: f64) -> Result<ResidualReport> {
    let g = area_gradient(mesh)?;
    let a = volume_gradient(mesh)?;
    let rows = interior(mesh)
        .into_iter()
        .map(|v| {
            let r = -g[v] - a[v] * h;
            ResidualRow { vertex: v, vector: r, norm: r.norm() }
        })
        .collect();
    Ok(ResidualReport::new(ResidualKind::Cmc { h }, rows))
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Constraint {
    None,
    Volume,
}

#[derive(Debug, Clone, PartialEq)]
pub struct FlowOptions {
    pub steps: usize,
    pub step_size: f64,
    pub constraint: Constraint,
    /// Stop once the largest residual over free interior vertices is below
    /// this: `|H_p|`, or `|H_p - H A_p|` with the volume constraint.
    pub tol: f64,
    pub fixed: Vec<VertexId>,
    pub max_halvings: usize,
}

impl Default for FlowOptions {
    fn default() -> Self {
        FlowOptions {
            steps: 1000,
            step_size: 0.05,
            constraint: Constraint::None,
            tol: 1e-8,
            fixed: Vec::new(),
            max_halvings: 20,
        }
    }
}

#[derive(Debug, Clone)]
pub struct FlowState {
    pub mesh: TriMesh,
    /// Accepted steps.
    pub iterations: usize,
    /// Step length used by the last accepted step.
    pub step_size: f64,
    /// Area before the first step and after each accepted step.
    pub area_trace: Vec<f64>,
    /// Signed volume alongside `area_trace`; for open meshes this is the
    /// volume of the cone from the origin.
    pub volume_trace: Vec<f64>,
    /// Residual alongside `area_trace`.
    pub residual_trace: Vec<f64>,
    /// Step length of each accepted step.
    pub step_trace: Vec<f64>,
    /// Area change of each accepted step, summed triangle by triangle.
    pub area_change: Vec<f64>,
    pub fixed: Vec<bool>,
    pub converged: bool,
    /// Estimated `H` of the final state when the volume is constrained.
    pub cmc_h: Option<f64>,
}

impl FlowState {
    pub fn max_residual(&self) -> f64 {
        *self.residual_trace.last().unwrap_or(&f64::NAN)
    }
}

/// Residual vector field of the flow and its largest norm over free
/// interior vertices.
fn flow_direction(mesh: &TriMesh, free: &[bool], constraint: Constraint) -> Result<(GradientField, f64, Option<f64>)> {
    let mut g = area_gradient(mesh)?;
    for (v, x) in g.iter_mut().enumerate() {
        if !free[v] {
            *x = Vec3::zeros();
        }
    }
    let mut h = None;
    if constraint == Constraint::Volume {
        let a = volume_gradient(mesh)?;
        let num: f64 = (0..g.len()).filter(|&v| free[v]).map(|v| g[v].dot(&a[v])).sum();
        let den: f64 = (0..g.len()).filter(|&v| free[v]).map(|v| a[v].norm_squared()).sum();
        let lambda = if den > 0.0 { num / den } else { 0.0 };
        for v in 0..g.len() {
            if free[v] {
                g[v] -= a[v] * lambda;
            }
        }
        h = Some(-lambda);
    }
    let max = (0..g.len())
        .filter(|&v| free[v] && !mesh.is_boundary_vertex(v) && !mesh.is_isolated(v))
        .map(|v| g[v].norm())
        .fold(0.0, f64::max);
    Ok((g, max, h))
}

/// `Area(new) - Area(old)` from per-triangle changes of the cross product,
/// accurate relative to the change rather than to the total area.
fn area_difference(old: &TriMesh, new: &TriMesh) -> f64 {
    let (p, q) = (old.positions(), new.positions());
    old.triangles()
        .par_iter()
        .map(|&[a, b, c]| {
            let (da, db, dc) = (q[a] - p[a], q[b] - p[b], q[c] - p[c]);
            let (e1, e2) = (p[b] - p[a], p[c] - p[a]);
            let (d1, d2) = (db - da, dc - da);
            let delta = e1.cross(&d2) + d1.cross(&e2) + d1.cross(&d2);
            let before = e1.cross(&e2);
            let after = before + delta;
            0.5 * delta.dot(&(before + after)) / (before.norm() + after.norm())
        })
        .sum()
}

fn volume_difference(old: &TriMesh, new: &[Vec3]) -> f64 {
    let p = old.positions();
    old.triangles()
        .iter()
        .map(|&[a, b, c]| (new[a].dot(&new[b].cross(&new[c])) - p[a].dot(&p[b].cross(&p[c]))) / 6.0)
        .sum()
}

/// Move `positions` along the volume gradient of the free vertices until
/// the volume matches `target`.
fn restore_volume(mesh: &TriMesh, positions: &mut [Vec3], free: &[bool], target: f64) -> Option<()> {
    let tol = 1e-10 * target.abs();
    for _ in 0..50 {
        let current = mesh.signed_volume() + volume_difference(mesh, positions);
        let dv = target - current;
        if dv.abs() < tol {
            return Some(());
        }
        let probe = mesh.with_positions(positions.to_vec()).ok()?;
        let a = volume_gradient(&probe).ok()?;
        let den: f64 = (0..a.len()).filter(|&v| free[v]).map(|v| a[v].norm_squared()).sum();
        if den == 0.0 {
            return None;
        }
        for v in 0..a.len() {
            if free[v] {
                positions[v] += a[v] * (dv / den);
            }
        }
    }
    None
}

/// Gradient descent on area over the free vertices, optionally holding the
/// enclosed volume fixed. Steps that raise the area or degenerate a
/// triangle are halved and retried.
pub fn minimize_area(mesh: &TriMesh, opts: &FlowOptions) -> Result<FlowState> {
    if !(opts.step_size > 0.0 && opts.step_size.is_finite()) {
        return Err(Error::InvalidParameter(format!("step size must be positive, got {}", opts.step_size)));
    }
    let mut fixed = vec![false; mesh.vertex_count()];
    for &v in &opts.fixed {
        mesh.check_vertex(v)?;
        fixed[v] = true;
    }
    match opts.constraint {
        Constraint::None if !fixed.iter().any(|&f| f) => {
            return Err(Error::InvalidParameter("unconstrained flow needs at least one fixed vertex".into()));
        }
        Constraint::Volume if !mesh.is_closed() => return Err(Error::OpenMesh),
        _ => {}
    }
    let free: Vec<bool> = (0..mesh.vertex_count()).map(|v| !fixed[v] && !mesh.is_isolated(v)).collect();
    let target = mesh.signed_volume();
    let constrained = opts.constraint == Constraint::Volume;

    let mut current = mesh.clone();
    let (mut dir, mut residual, mut h) = flow_direction(&current, &free, opts.constraint)?;
    let mut state = FlowState {
        mesh: current.clone(),
        iterations: 0,
        step_size: opts.step_size,
        area_trace: vec![current.area()],
        volume_trace: vec![target],
        residual_trace: vec![residual],
        step_trace: Vec::new(),
        area_change: Vec::new(),
        fixed,
        converged: false,
        cmc_h: None,
    };

    for iteration in 0..opts.steps {
        if residual < opts.tol {
            state.converged = true;
            break;
        }
        let mut step = opts.step_size;
        let mut accepted = None;
        for _ in 0..=opts.max_halvings {
            let mut positions: Vec<Vec3> = current.positions().to_vec();
            for v in 0..positions.len() {
                if free[v] {
                    positions[v] -= dir[v] * step;
                }
            }
            if !positions.iter().all(|p| p.iter().all(|c| c.is_finite())) {
                return Err(Error::NonFinite(iteration));
            }
            if constrained && restore_volume(&current, &mut positions, &free, target).is_none() {
                step *= 0.5;
                continue;
            }
            if let Ok(next) = current.with_positions(positions) {
                let change = area_difference(&current, &next);
                if change < 0.0 {
                    accepted = Some((next, change));
                    break;
                }
            }
            step *= 0.5;
        }
        let Some((next, change)) = accepted else {
            return Err(Error::StepAborted { iteration, halvings: opts.max_halvings });
        };
        current = next;
        (dir, residual, h) = flow_direction(&current, &free, opts.constraint)?;
        state.iterations += 1;
        state.step_size = step;
        state.step_trace.push(step);
        state.area_change.push(change);
        state.area_trace.push(current.area());
        state.residual_trace.push(residual);
        state.volume_trace.push(current.signed_volume());
    }
    if residual < opts.tol {
        state.converged = true;
    }
    state.cmc_h = h;
    state.mesh = current;
    Ok(state)
}

#[cfg(test)]
mod tests;
