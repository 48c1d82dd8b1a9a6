//! Volume of the `t`-neighborhood of a convex polyhedron: the Steiner
//! polynomial and a Monte Carlo estimate.

use std::f64::consts::PI;

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rayon::prelude::*;

use crate::curvature::{self, Convexity};
use crate::error::{Error, Result};
use crate::geom::{self, Vec3};
use crate::mesh::TriMesh;

const BLOCK: usize = 1 << 14;

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct SteinerEvaluation {
    pub t: f64,
    pub poly_volume: f64,
    pub mc_volume: f64,
    pub mc_stderr: f64,
    pub samples: usize,
    pub seed: u64,
}

/// Coefficients of `Vol + a1 t + a2 t^2 + a3 t^3`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct SteinerCoefficients {
    pub volume: f64,
    pub area: f64,
    /// `Σ θ_e |e|` over all edges.
    pub edge_curvature: f64,
}

impl SteinerCoefficients {
    pub fn eval(&self, t: f64) -> f64 {
        self.volume + t * self.area + 0.5 * t * t * self.edge_curvature + 4.0 * PI / 3.0 * t.powi(3)
    }
}

/// Face planes `(n, d)` with `n · x <= d` inside.
fn face_planes(mesh: &TriMesh) -> Vec<(Vec3, f64)> {
    let s = mesh.signed_volume().signum();
    (0..mesh.face_count())
        .map(|f| {
            let n = mesh.face_normal(f) * s;
            (n, n.dot(&mesh.position(mesh.triangle(f)[0])))
        })
        .collect()
}

/// Error unless `mesh` is closed and bounds a convex solid. Flat edges and
/// vertices lying inside a flat face region are allowed.
pub fn check_convex(mesh: &TriMesh) -> Result<()> {
    if !mesh.is_closed() {
        return Err(Error::OpenMesh);
    }
    let orient = mesh.signed_volume().signum();
    for e in 0..mesh.edge_count() {
        let c = curvature::edge_mean_curvature(mesh, e)?;
        let concave = match c.convexity {
            Convexity::Flat => false,
            Convexity::Convex => orient < 0.0,
            Convexity::Concave => orient > 0.0,
        };
        if concave {
            return Err(Error::NotConvex(format!("edge {e} is concave")));
        }
    }
    let tol = 1e-9 * mesh.bbox_diagonal();
    for (f, (n, d)) in face_planes(mesh).iter().enumerate() {
        if let Some(v) = (0..mesh.vertex_count()).find(|&v| n.dot(&mesh.position(v)) - d > tol) {
            return Err(Error::NotConvex(format!("vertex {v} lies outside the plane of triangle {f}")));
        }
    }
    Ok(())
}

pub fn steiner_coefficients(mesh: &TriMesh) -> Result<SteinerCoefficients> {
    check_convex(mesh)?;
    let mut edge_curvature = 0.0;
    for e in 0..mesh.edge_count() {
        edge_curvature += curvature::edge_mean_curvature(mesh, e)?.h_steiner;
    }
    Ok(SteinerCoefficients { volume: mesh.signed_volume().abs(), area: mesh.area(), edge_curvature })
}

/// Whether `p` lies within distance `t` of the convex solid bounded by `mesh`.
fn within(mesh: &TriMesh, planes: &[(Vec3, f64)], p: &Vec3, t: f64) -> bool {
    let outside = planes.iter().map(|(n, d)| n.dot(p) - d).fold(f64::NEG_INFINITY, f64::max);
    if outside <= 0.0 {
        return true;
    }
    if outside > t {
        return false;
    }
    (0..mesh.face_count()).any(|f| {
        let [a, b, c] = mesh.triangle(f);
        geom::point_triangle_distance(p, &mesh.position(a), &mesh.position(b), &mesh.position(c)) <= t
    })
}

/// Steiner polynomial at `t` and a Monte Carlo estimate of the same volume
/// from `samples` uniform points in the bounding box of the neighborhood.
/// Blocks of samples use independent streams of `seed`, so the result does
/// not depend on the thread count.
pub fn steiner_polynomial(mesh: &TriMesh, t: f64, samples: usize, seed: u64) -> Result<SteinerEvaluation> {
    if !(t > 0.0 && t.is_finite()) {
        return Err(Error::InvalidParameter(format!("t must be positive, got {t}")));
    }
    if samples == 0 {
        return Err(Error::InvalidParameter("samples must be positive".into()));
    }
    let coeffs = steiner_coefficients(mesh)?;
    let planes = face_planes(mesh);
    let (lo, hi) = mesh.bounding_box();
    let lo = lo - Vec3::repeat(t);
    let size = hi + Vec3::repeat(t) - lo;
    let blocks = samples.div_ceil(BLOCK);
    let hits: usize = (0..blocks)
        .into_par_iter()
        .map(|b| {
            let mut rng = ChaCha8Rng::seed_from_u64(seed);
            rng.set_stream(b as u64);
            let n = BLOCK.min(samples - b * BLOCK);
            (0..n)
                .filter(|_| {
                    let u = Vec3::new(rng.random(), rng.random(), rng.random());
                    within(mesh, &planes, &(lo + size.component_mul(&u)), t)
                })
                .count()
        })
        .sum();
    let box_volume = size.x * size.y * size.z;
    let p = hits as f64 / samples as f64;
    Ok(SteinerEvaluation {
        t,
        poly_volume: coeffs.eval(t),
        mc_volume: p * box_volume,
        mc_stderr: box_volume * (p * (1.0 - p) / samples as f64).sqrt(),
        samples,
        seed,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::shapes;

    #[test]
    fn cube_closed_form() {
        let c = steiner_coefficients(&shapes::cube()).unwrap();
        assert!((c.volume - 1.0).abs() < 1e-14);
        assert!((c.area - 6.0).abs() < 1e-14);
        assert!((c.edge_curvature - 6.0 * PI).abs() < 1e-12);
        let expected = 4.0 + 0.75 * PI + PI / 6.0;
        assert!((expected - 6.879793265790643).abs() < 1e-12);
        assert!((c.eval(0.5) - expected).abs() < 1e-12);
    }

    #[test]
    fn cube_monte_carlo() {
        let s = steiner_polynomial(&shapes::cube(), 0.5, 1_000_000, 42).unwrap();
        assert!((s.poly_volume - s.mc_volume).abs() <= 4.0 * s.mc_stderr, "{s:?}");
        assert!(s.mc_stderr < 0.01);
    }

    #[test]
    fn tetrahedron_monte_carlo() {
        let s = steiner_polynomial(&shapes::tetrahedron(1.0), 0.25, 400_000, 7).unwrap();
        assert!((s.poly_volume - s.mc_volume).abs() <= 4.0 * s.mc_stderr, "{s:?}");
    }

    #[test]
    fn small_t_tends_to_volume() {
        let m = shapes::icosphere(1);
        let c = steiner_coefficients(&m).unwrap();
        assert_eq!(c.eval(0.0), c.volume);
        assert!((c.eval(1e-12) - m.signed_volume()).abs() < 1e-10);
    }

    #[test]
    fn polynomial_is_monotone() {
        let c = steiner_coefficients(&shapes::icosphere(2)).unwrap();
        let mut prev = c.eval(0.0);
        for i in 1..100 {
            let v = c.eval(i as f64 * 0.05);
            assert!(v > prev);
            prev = v;
        }
    }

    #[test]
    fn deterministic_across_thread_counts() {
        let m = shapes::tetrahedron(2.0);
        let run = |threads| {
            rayon::ThreadPoolBuilder::new()
                .num_threads(threads)
                .build()
                .unwrap()
                .install(|| steiner_polynomial(&m, 0.3, 100_000, 11).unwrap())
        };
        assert_eq!(run(1), run(4));
    }

    #[test]
    fn rejects_bad_input() {
        let cube = shapes::cube();
        assert!(matches!(steiner_polynomial(&cube, 0.0, 10, 0), Err(Error::InvalidParameter(_))));
        assert!(matches!(steiner_polynomial(&cube, -1.0, 10, 0), Err(Error::InvalidParameter(_))));
        assert!(matches!(steiner_polynomial(&shapes::torus(8, 6, 2.0, 0.5), 0.1, 10, 0), Err(Error::NotConvex(_))));
        assert!(matches!(steiner_polynomial(&shapes::genus_two(), 0.1, 10, 0), Err(Error::NotConvex(_))));
        assert!(matches!(steiner_polynomial(&shapes::hex_disk(1, 1.0), 0.1, 10, 0), Err(Error::OpenMesh)));
    }
}
