use std::collections::HashSet;
use std::f64::consts::{FRAC_PI_2, TAU};

use proptest::prelude::*;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use super::*;
use crate::{geom, shapes};

fn vec_of(q: Quantity) -> Vec3 {
    match q {
        Quantity::Vector(v) => v,
        Quantity::Scalar(_) => panic!("expected a vector"),
    }
}

fn scalar_of(q: Quantity) -> f64 {
    match q {
        Quantity::Scalar(s) => s,
        Quantity::Vector(_) => panic!("expected a scalar"),
    }
}

/// Grow a connected patch of `n` triangles from a random seed triangle.
fn random_patch(mesh: &TriMesh, n: usize, rng: &mut ChaCha8Rng) -> Vec<FaceId> {
    let mut chosen = vec![rng.random_range(0..mesh.face_count())];
    let mut set: HashSet<FaceId> = chosen.iter().copied().collect();
    while chosen.len() < n {
        let f = chosen[rng.random_range(0..chosen.len())];
        let h = 3 * f + rng.random_range(0..3);
        if let Some(t) = mesh.twin(h) {
            if set.insert(face_of(t)) {
                chosen.push(face_of(t));
            }
        }
    }
    chosen
}

fn unit_square() -> TriMesh {
    let p = vec![
        Vec3::new(0.0, 0.0, 0.0),
        Vec3::new(1.0, 0.0, 0.0),
        Vec3::new(1.0, 1.0, 0.0),
        Vec3::new(0.0, 1.0, 0.0),
    ];
    TriMesh::new(p, vec![[0, 1, 2], [0, 2, 3]]).unwrap()
}

#[test]
fn patch_boundary_structure() {
    let m = shapes::icosphere(1);
    let star = Patch::star(&m, 0).unwrap();
    assert_eq!(star.triangles().len(), 5);
    assert_eq!(star.segments().len(), 5);
    assert_eq!(star.loops().len(), 1);
    assert_eq!(star.interior_edges().len(), 5);
    assert_eq!(star.euler_characteristic(), 1);
    assert!(conormals_valid(&m, &star, 1e-12));
    // loops chain head to tail
    let segs = star.segments();
    let lp = &star.loops()[0];
    for w in 0..lp.len() {
        let (s, t) = (&segs[lp[w]], &segs[lp[(w + 1) % lp.len()]]);
        assert_eq!(m.head(s.halfedge), m.tail(t.halfedge));
    }

    let whole = Patch::whole(&m).unwrap();
    assert!(whole.segments().is_empty());
    assert_eq!(whole.euler_characteristic(), 2);
    assert!(matches!(Patch::new(&m, []), Err(Error::EmptyPatch)));
    assert!(Patch::new(&m, [m.face_count()]).is_err());
}

#[test]
fn annulus_has_two_loops() {
    let m = shapes::hex_disk(3, 1.0);
    let center: HashSet<FaceId> = m.vertex_star(0).unwrap().triangles.into_iter().collect();
    let annulus = Patch::new(&m, (0..m.face_count()).filter(|f| !center.contains(f))).unwrap();
    assert_eq!(annulus.loops().len(), 2);
    assert_eq!(annulus.euler_characteristic(), 0);
    assert!(matches!(check_gauss_bonnet(&m, Some(&annulus)), Err(Error::PatchNotDisk { chi: 0 })));
    let r = check_vector_area(&m, &annulus).unwrap();
    assert!(r.pass, "{r:?}");
    assert!(conormals_valid(&m, &annulus, 1e-12));
}

#[test]
fn force_balance_on_stars_is_twice_mean_curvature() {
    for m in [shapes::icosphere(2), shapes::torus(12, 8, 2.0, 0.7), shapes::genus_two()] {
        for v in 0..m.vertex_count() {
            let p = Patch::star(&m, v).unwrap();
            let r = check_force_balance(&m, &p).unwrap();
            assert!(r.pass, "{r:?}");
            let h = curvature::vertex_mean_curvature(&m, v).unwrap();
            assert!((vec_of(r.lhs) - 2.0 * h.edge_sum).norm() < 1e-12);
        }
    }
}

#[test]
fn single_triangle_balances_trivially() {
    let m = shapes::icosphere(1);
    let p = Patch::new(&m, [7]).unwrap();
    let r = check_force_balance(&m, &p).unwrap();
    assert_eq!(vec_of(r.rhs), Vec3::zeros());
    assert!(vec_of(r.lhs).norm() < 1e-15);
    assert!(r.pass);
}

#[test]
fn random_icosphere_patches() {
    let m = shapes::icosphere(3);
    let mut rng = ChaCha8Rng::seed_from_u64(5);
    for _ in 0..20 {
        let p = Patch::new(&m, random_patch(&m, 20, &mut rng)).unwrap();
        for r in [
            check_force_balance(&m, &p).unwrap(),
            check_torque_balance(&m, &p).unwrap(),
            check_position_relation(&m, &p).unwrap(),
            check_vector_area(&m, &p).unwrap(),
        ] {
            assert!(r.pass, "{r:?}");
        }
    }
}

#[test]
fn planar_patch_has_no_torque() {
    let m = shapes::hex_disk(2, 0.7);
    let p = Patch::whole(&m).unwrap();
    let r = check_torque_balance(&m, &p).unwrap();
    assert!(vec_of(r.lhs).norm() < 1e-13 && vec_of(r.rhs).norm() < 1e-13);
    assert!(r.pass);
}

#[test]
fn torque_on_icosahedron_star() {
    let m = shapes::icosahedron();
    for v in 0..12 {
        let r = check_torque_balance(&m, &Patch::star(&m, v).unwrap()).unwrap();
        assert!(r.pass, "{r:?}");
    }
}

#[test]
fn torque_translation_covariance() {
    let m = shapes::icosphere(2);
    let c = Vec3::new(3.0, -7.0, 11.0);
    let moved = m.with_positions(m.positions().iter().map(|p| p + c).collect()).unwrap();
    let p = Patch::star(&m, 4).unwrap();
    let q = Patch::star(&moved, 4).unwrap();
    let (a, b) = (check_torque_balance(&m, &p).unwrap(), check_torque_balance(&moved, &q).unwrap());
    let force = check_force_balance(&m, &p).unwrap();
    let da = vec_of(a.lhs) - vec_of(a.rhs);
    let db = vec_of(b.lhs) - vec_of(b.rhs);
    let df = vec_of(force.lhs) - vec_of(force.rhs);
    assert!((db - da - c.cross(&df)).norm() < 1e-12);
    assert_eq!(a.pass, b.pass);
}

#[test]
fn position_relation_flat_square() {
    let m = unit_square();
    let r = check_position_relation(&m, &Patch::whole(&m).unwrap()).unwrap();
    // x . eta is 1 on the right and top sides, 0 on the others
    assert!((scalar_of(r.lhs) - 2.0).abs() < 1e-15);
    assert!((scalar_of(r.rhs) - 2.0).abs() < 1e-15);
    assert!(r.residual < 1e-12);
}

#[test]
fn flat_patch_area_is_half_the_position_integral() {
    let m = shapes::hex_disk(3, 0.4);
    let p = Patch::whole(&m).unwrap();
    let r = check_position_relation(&m, &p).unwrap();
    assert!((p.area(&m) - 0.5 * scalar_of(r.lhs)).abs() < 1e-13);
}

#[test]
fn position_relation_on_icosphere_stars() {
    let m = shapes::icosphere(2);
    for v in 0..m.vertex_count() {
        let r = check_position_relation(&m, &Patch::star(&m, v).unwrap()).unwrap();
        assert!(r.pass, "{r:?}");
    }
    let r = check_position_relation(&m, &Patch::whole(&m).unwrap()).unwrap();
    assert!(r.pass, "{r:?}");
}

#[test]
fn vector_area_of_cones_ignores_the_apex() {
    let rim: Vec<Vec3> = shapes::regular_polygon(7, 1.0)
        .into_iter()
        .enumerate()
        .map(|(i, p)| p + Vec3::new(0.0, 0.0, 0.3 * (i as f64).sin()))
        .collect();
    let shoelace = geom::loop_vector_area(&rim);
    let mut rng = ChaCha8Rng::seed_from_u64(9);
    for _ in 0..100 {
        let apex = Vec3::new(rng.random_range(-0.5..0.5), rng.random_range(-0.5..0.5), rng.random_range(-2.0..2.0));
        let mut pts = vec![apex];
        pts.extend_from_slice(&rim);
        let tris = (0..7).map(|i| [0, 1 + i, 1 + (i + 1) % 7]).collect();
        let m = TriMesh::new(pts, tris).unwrap();
        let r = check_vector_area(&m, &Patch::whole(&m).unwrap()).unwrap();
        assert!(r.pass, "{r:?}");
        assert!((vec_of(r.lhs) - shoelace).norm() < 1e-12);
    }
}

#[test]
fn vector_area_planar_and_closed() {
    let m = unit_square();
    let r = check_vector_area(&m, &Patch::whole(&m).unwrap()).unwrap();
    assert!((vec_of(r.rhs) - Vec3::z()).norm() < 1e-15);
    assert!(r.pass);
    let s = shapes::icosphere(2);
    let r = check_vector_area(&s, &Patch::whole(&s).unwrap()).unwrap();
    assert_eq!(vec_of(r.lhs), Vec3::zeros());
    assert!(vec_of(r.rhs).norm() < 1e-14);
}

#[test]
fn gauss_bonnet_whole_meshes() {
    let r = check_gauss_bonnet(&shapes::icosphere(3), None).unwrap();
    assert!((scalar_of(r.lhs) - 2.0 * TAU).abs() < 1e-8 && r.pass);
    let t = shapes::torus(6, 4, 2.0, 1.0);
    assert_eq!(t.vertex_count(), 24);
    let r = check_gauss_bonnet(&t, None).unwrap();
    assert!(scalar_of(r.lhs).abs() < 1e-8 && r.pass);
    let r = check_gauss_bonnet(&shapes::genus_two(), None).unwrap();
    assert!((scalar_of(r.rhs) + 2.0 * TAU).abs() < 1e-15 && r.pass);
    let r = check_gauss_bonnet(&shapes::hex_disk(2, 1.0), None).unwrap();
    assert!(r.pass);
}

#[test]
fn cube_corner_disk() {
    let m = shapes::cube();
    let corner = (0..m.vertex_count()).find(|&v| m.degree(v).unwrap() == 3).unwrap_or(0);
    let p = Patch::star(&m, corner).unwrap();
    let interior = curvature::gauss_curvature(&m, corner).unwrap();
    assert!((interior - FRAC_PI_2).abs() < 1e-14);
    let turns = loop_turning(&m, &p, &p.loops()[0]);
    assert!((interior + turns - TAU).abs() < 1e-10);
    let r = check_gauss_bonnet(&m, Some(&p)).unwrap();
    assert!(r.pass, "{r:?}");
}

#[test]
fn patch_curvature_depends_only_on_the_collar() {
    let m = shapes::icosphere(2);
    let mut rng = ChaCha8Rng::seed_from_u64(3);
    let tris = random_patch(&m, 30, &mut rng);
    let p = Patch::new(&m, tris.iter().copied()).unwrap();
    let before = patch_total_curvature(&m, &p).unwrap();
    let e = p.interior_edges()[0];
    let (m2, _) = m.split_edge(e, 0.3).unwrap();
    // split faces keep their ids; the two new faces are appended
    let new_tris = tris.iter().copied().chain([m.face_count(), m.face_count() + 1]);
    let p2 = Patch::new(&m2, new_tris).unwrap();
    let after = patch_total_curvature(&m2, &p2).unwrap();
    assert!((before - after).abs() < 1e-10);
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(48))]

    #[test]
    fn relations_hold_under_random_noise(seed in 0u64..1_000_000, size in 1usize..40) {
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        let base = shapes::torus(10, 7, 2.0, 0.8);
        let jittered = base.positions().iter().map(|p| p + Vec3::new(
            rng.random_range(-0.05..0.05), rng.random_range(-0.05..0.05), rng.random_range(-0.05..0.05))).collect();
        let m = base.with_positions(jittered).unwrap();
        let p = Patch::new(&m, random_patch(&m, size, &mut rng)).unwrap();
        prop_assert!(conormals_valid(&m, &p, 1e-12));
        for r in [
            check_force_balance(&m, &p).unwrap(),
            check_torque_balance(&m, &p).unwrap(),
            check_position_relation(&m, &p).unwrap(),
            check_vector_area(&m, &p).unwrap(),
        ] {
            prop_assert!(r.pass, "{:?}", r);
        }
        let total = patch_total_curvature(&m, &p).unwrap();
        prop_assert!((total - TAU * p.euler_characteristic() as f64).abs() < 1e-9);
    }
}
