use proptest::prelude::*;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use super::*;
use crate::{curvature, shapes};

fn jitter(mesh: &TriMesh, amount: f64, seed: u64) -> TriMesh {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let p = mesh
        .positions()
        .iter()
        .map(|p| p + Vec3::new(rng.random_range(-amount..amount), rng.random_range(-amount..amount), rng.random_range(-amount..amount)))
        .collect();
    mesh.with_positions(p).unwrap()
}

/// Central differences of `energy` in every coordinate of every vertex.
fn fd_gradient(mesh: &TriMesh, h: f64, energy: impl Fn(&TriMesh) -> f64) -> Vec<Vec3> {
    (0..mesh.vertex_count())
        .map(|v| {
            let mut g = Vec3::zeros();
            for k in 0..3 {
                let mut p = mesh.positions().to_vec();
                p[v][k] += h;
                let plus = energy(&mesh.with_positions(p.clone()).unwrap());
                p[v][k] -= 2.0 * h;
                let minus = energy(&mesh.with_positions(p).unwrap());
                g[k] = (plus - minus) / (2.0 * h);
            }
            g
        })
        .collect()
}

fn disk_with_bump() -> (TriMesh, Vec<VertexId>) {
    let flat = shapes::hex_disk(3, 0.5);
    let mut p = flat.positions().to_vec();
    p[0].z = 0.2;
    p[1].z = -0.1;
    let m = flat.with_positions(p).unwrap();
    let boundary = (0..m.vertex_count()).filter(|&v| m.is_boundary_vertex(v)).collect();
    (m, boundary)
}

#[test]
fn area_gradient_is_minus_mean_curvature() {
    for m in [jitter(&shapes::icosphere(2), 0.05, 1), jitter(&shapes::hex_disk(3, 1.0), 0.2, 2), shapes::genus_two()] {
        let g = area_gradient(&m).unwrap();
        for v in 0..m.vertex_count() {
            if m.is_boundary_vertex(v) {
                continue;
            }
            let h = curvature::vertex_mean_curvature(&m, v).unwrap();
            assert!((g[v] + h.cotangent).norm() < 1e-12);
        }
        let j = area_gradient_rotation(&m);
        for v in 0..m.vertex_count() {
            assert!((g[v] - j[v]).norm() < 1e-12 * (1.0 + g[v].norm()));
        }
    }
}

#[test]
fn planar_interior_vertices_have_no_gradient() {
    let m = shapes::hex_disk(2, 1.0);
    let g = area_gradient(&m).unwrap();
    for v in 0..m.vertex_count() {
        if !m.is_boundary_vertex(v) {
            assert!(g[v].norm() < 1e-14);
        }
    }
}

#[test]
fn equilateral_star_formulas_agree() {
    let m = shapes::cone(Vec3::new(0.0, 0.0, 0.7), &shapes::regular_polygon(6, 1.0));
    let (a, b) = (area_gradient(&m).unwrap(), area_gradient_rotation(&m));
    assert!((a[0] - b[0]).norm() < 1e-12);
    // symmetric star: the gradient pulls the apex straight up
    assert!(a[0].x.abs() < 1e-14 && a[0].y.abs() < 1e-14 && a[0].z > 0.0);
}

#[test]
fn gradients_match_finite_differences() {
    let m = jitter(&shapes::icosphere(2), 0.03, 3);
    let h = 1e-5 * m.bbox_diagonal();
    let area = area_gradient(&m).unwrap();
    let fd = fd_gradient(&m, h, |x| x.area());
    for v in 0..m.vertex_count() {
        assert!((area[v] - fd[v]).norm() <= 1e-5 * area[v].norm(), "area at {v}");
    }
    let vol = volume_gradient(&m).unwrap();
    let fd = fd_gradient(&m, h, |x| x.signed_volume());
    for v in 0..m.vertex_count() {
        assert!((vol[v] - fd[v]).norm() <= 1e-6 * vol[v].norm(), "volume at {v}");
    }
}

#[test]
fn volume_gradient_facts() {
    let cube = shapes::cube();
    let g = volume_gradient(&cube).unwrap();
    assert!(g.iter().sum::<Vec3>().norm() < 1e-15);
    // every level-1 vertex sits on a rotational symmetry axis
    let s = shapes::icosphere(1);
    let g = volume_gradient(&s).unwrap();
    for v in 0..s.vertex_count() {
        let p = s.position(v).normalize();
        assert!(g[v].normalize().cross(&p).norm() < 1e-12);
        assert!((g[v] - curvature::vector_area(&s, v).unwrap()).norm() < 1e-15);
    }
    assert!(matches!(volume_gradient(&shapes::hex_disk(1, 1.0)), Err(Error::OpenMesh)));
}

#[test]
fn dirichlet_energy_examples() {
    for m in [shapes::icosphere(2), jitter(&shapes::hex_disk(3, 1.0), 0.2, 4), shapes::genus_two()] {
        let id = m.positions().to_vec();
        let e = dirichlet_energy(&m, &id).unwrap();
        assert!((e - m.area()).abs() < 1e-10 * m.area().max(1.0));
        assert!((dirichlet_energy_cotangent(&m, &id).unwrap() - e).abs() < 1e-10 * e);
        let constant = vec![Vec3::new(1.0, 2.0, 3.0); m.vertex_count()];
        assert!(dirichlet_energy(&m, &constant).unwrap().abs() < 1e-12);
        let double: Vec<Vec3> = id.iter().map(|p| p * 2.0).collect();
        assert!((dirichlet_energy(&m, &double).unwrap() - 4.0 * m.area()).abs() < 1e-9);
    }
    let m = shapes::cube();
    assert!(dirichlet_energy(&m, &[Vec3::zeros()]).is_err());
}

#[test]
fn identity_residual_is_mean_curvature() {
    for m in [jitter(&shapes::icosphere(2), 0.05, 5), jitter(&shapes::hex_disk(3, 1.0), 0.2, 6), shapes::torus(10, 6, 2.0, 0.6)] {
        let r = harmonic_residual(&m, m.positions()).unwrap();
        for row in &r.rows {
            let h = curvature::vertex_mean_curvature(&m, row.vertex).unwrap();
            assert!((row.vector - h.cotangent).norm() < 1e-12);
        }
        let min = minimality_residual(&m).unwrap();
        assert!((min.max - r.max).abs() < 1e-12);
    }
}

#[test]
fn linear_maps_of_flat_domains_are_harmonic() {
    let m = jitter(&shapes::hex_disk(3, 1.0), 0.2, 7).with_positions(
        jitter(&shapes::hex_disk(3, 1.0), 0.2, 7).positions().iter().map(|p| Vec3::new(p.x, p.y, 0.0)).collect(),
    ).unwrap();
    let a = nalgebra::Matrix3::new(1.0, 2.0, -1.0, 0.5, 3.0, 0.0, 2.0, -1.0, 4.0);
    let b = Vec3::new(0.3, -2.0, 5.0);
    let f: Vec<Vec3> = m.positions().iter().map(|p| a * p + b).collect();
    let r = harmonic_residual(&m, &f).unwrap();
    assert!(r.max < 1e-12, "{}", r.max);
}

#[test]
fn residual_is_minus_energy_gradient() {
    let m = jitter(&shapes::icosphere(1), 0.05, 8);
    let mut rng = ChaCha8Rng::seed_from_u64(9);
    let f: Vec<Vec3> = m
        .positions()
        .iter()
        .map(|p| p + Vec3::new(rng.random_range(-0.1..0.1), rng.random_range(-0.1..0.1), rng.random_range(-0.1..0.1)))
        .collect();
    let r = harmonic_residual(&m, &f).unwrap();
    let h = 1e-5;
    for row in &r.rows {
        let mut fd = Vec3::zeros();
        for k in 0..3 {
            let mut g = f.clone();
            g[row.vertex][k] += h;
            let plus = dirichlet_energy(&m, &g).unwrap();
            g[row.vertex][k] -= 2.0 * h;
            let minus = dirichlet_energy(&m, &g).unwrap();
            fd[k] = (plus - minus) / (2.0 * h);
        }
        assert!((row.vector + fd).norm() <= 1e-5 * fd.norm().max(1e-3));
    }
}

#[test]
fn flat_disk_flow_reaches_the_plane() {
    let (m, boundary) = disk_with_bump();
    let opts = FlowOptions { steps: 1000, step_size: 0.05, tol: 1e-8, fixed: boundary, ..Default::default() };
    let s = minimize_area(&m, &opts).unwrap();
    assert!(s.converged, "residual {}", s.max_residual());
    assert!(minimality_residual(&s.mesh).unwrap().max < 1e-8);
    assert!(s.iterations <= 1000);
    assert!(s.area_change.iter().all(|&d| d < 0.0));
    for v in 0..m.vertex_count() {
        if s.fixed[v] {
            assert_eq!(s.mesh.position(v), m.position(v));
        } else {
            assert!(s.mesh.position(v).z.abs() < 1e-6);
        }
    }
}

#[test]
fn catenoid_between_fixed_rings() {
    let t = shapes::tube(7, 24, 1.0, 0.5);
    let boundary: Vec<_> = (0..t.vertex_count()).filter(|&v| t.is_boundary_vertex(v)).collect();
    let opts = FlowOptions { steps: 5000, step_size: 0.2, tol: 1e-6, fixed: boundary, ..Default::default() };
    let s = minimize_area(&t, &opts).unwrap();
    assert!(s.converged, "residual {}", s.max_residual());
    assert!(s.area_change.iter().all(|&d| d < 0.0));
    for w in s.area_trace.windows(2) {
        assert!(w[1] < w[0] + 1e-15 * w[0]);
    }
    // the waist pinches inward
    let waist = s.mesh.position(3 * 24).xy().norm();
    assert!(waist < 1.0);
}

#[test]
fn icosphere_with_fixed_volume_reaches_constant_mean_curvature() {
    let m = jitter(&shapes::icosphere(2), 0.03, 10);
    let v0 = m.signed_volume();
    let opts = FlowOptions { steps: 10000, step_size: 0.5, tol: 1e-7, constraint: Constraint::Volume, ..Default::default() };
    let s = minimize_area(&m, &opts).unwrap();
    assert!(s.converged, "residual {}", s.max_residual());
    for v in &s.volume_trace {
        assert!((v - v0).abs() <= 1e-10 * v0);
    }
    let h = s.cmc_h.unwrap();
    let all: Vec<_> = (0..m.vertex_count()).collect();
    assert!((estimate_cmc(&s.mesh, &all).unwrap() - h).abs() < 1e-8);
    let r = cmc_residual(&s.mesh, h).unwrap();
    for row in &r.rows {
        let hp = curvature::vertex_mean_curvature(&s.mesh, row.vertex).unwrap().cotangent;
        assert!(row.norm / hp.norm() < 1e-4);
    }
}

#[test]
fn flow_is_translation_equivariant() {
    let (m, boundary) = disk_with_bump();
    let c = Vec3::new(5.0, -3.0, 2.0);
    let moved = m.with_positions(m.positions().iter().map(|p| p + c).collect()).unwrap();
    let opts = FlowOptions { steps: 50, step_size: 0.05, tol: 0.0, fixed: boundary, ..Default::default() };
    let a = minimize_area(&m, &opts).unwrap();
    let b = minimize_area(&moved, &opts).unwrap();
    assert_eq!(a.iterations, b.iterations);
    for v in 0..m.vertex_count() {
        assert!((a.mesh.position(v) + c - b.mesh.position(v)).norm() < 1e-12);
    }
}

#[test]
fn flow_rejects_bad_options() {
    let m = shapes::icosphere(1);
    let free = FlowOptions::default();
    assert!(matches!(minimize_area(&m, &free), Err(Error::InvalidParameter(_))));
    let bad = FlowOptions { step_size: 0.0, fixed: vec![0], ..Default::default() };
    assert!(matches!(minimize_area(&m, &bad), Err(Error::InvalidParameter(_))));
    let open = FlowOptions { constraint: Constraint::Volume, ..Default::default() };
    assert!(matches!(minimize_area(&shapes::hex_disk(2, 1.0), &open), Err(Error::OpenMesh)));
    let out = FlowOptions { fixed: vec![99], ..Default::default() };
    assert!(minimize_area(&m, &out).is_err());
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(32))]

    #[test]
    fn dirichlet_dominates_area(seed in 0u64..100_000) {
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        let m = jitter(&shapes::hex_disk(2, 1.0), 0.2, seed);
        let f: Vec<Vec3> = m.positions().iter()
            .map(|p| Vec3::new(p.x + rng.random_range(-0.3..0.3), p.y * rng.random_range(0.5..1.5), rng.random_range(-0.5..0.5)))
            .collect();
        let e = dirichlet_energy(&m, &f).unwrap();
        let image_area: f64 = m.triangles().iter()
            .map(|&[a, b, c]| crate::geom::tri_area(&f[a], &f[b], &f[c]))
            .sum();
        prop_assert!(e - image_area >= -1e-10);
    }
}

