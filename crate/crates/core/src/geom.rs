//! Small vector helpers shared across modules.

use nalgebra::{Matrix3, Unit, Vector3};

pub type Vec3 = Vector3<f64>;

/// Relative threshold on `|u x v| / (|u||v|)` below which a cotangent is refused.
pub const COT_GUARD: f64 = 1e-14;

/// Unsigned angle between two vectors, in `[0, pi]`.
#[inline]
pub fn angle_between(u: &Vec3, v: &Vec3) -> f64 {
    u.cross(v).norm().atan2(u.dot(v))
}

/// `cot` of the angle between `u` and `v`, or `None` when the angle is within
/// the guard of 0 or pi.
#[inline]
pub fn cot_between(u: &Vec3, v: &Vec3) -> Option<f64> {
    let s = u.cross(v).norm();
    if s < COT_GUARD * u.norm() * v.norm() {
        None
    } else {
        Some(u.dot(v) / s)
    }
}

/// Twice the vector area of triangle `(a, b, c)`.
#[inline]
pub fn tri_cross(a: &Vec3, b: &Vec3, c: &Vec3) -> Vec3 {
    (b - a).cross(&(c - a))
}

#[inline]
pub fn tri_area(a: &Vec3, b: &Vec3, c: &Vec3) -> f64 {
    0.5 * tri_cross(a, b, c).norm()
}

#[inline]
pub fn tri_normal(a: &Vec3, b: &Vec3, c: &Vec3) -> Vec3 {
    tri_cross(a, b, c).normalize()
}

/// Vector area `1/2 sum a x b` of a closed polygon.
pub fn loop_vector_area(points: &[Vec3]) -> Vec3 {
    let n = points.len();
    (0..n).map(|i| points[i].cross(&points[(i + 1) % n])).sum::<Vec3>() * 0.5
}

/// Rotation by `angle` (right-handed) about the unit `axis`.
pub fn rotation_about(axis: &Vec3, angle: f64) -> Matrix3<f64> {
    *nalgebra::Rotation3::from_axis_angle(&Unit::new_normalize(*axis), angle).matrix()
}

/// Minimal rotation taking unit vector `from` onto unit vector `to`.
///
/// Returns `None` when the two are antiparallel (the axis is undefined).
pub fn minimal_rotation(from: &Vec3, to: &Vec3) -> Option<Matrix3<f64>> {
    let axis = from.cross(to);
    let s = axis.norm();
    let c = from.dot(to);
    if s < 1e-15 {
        return if c > 0.0 { Some(Matrix3::identity()) } else { None };
    }
    Some(rotation_about(&(axis / s), s.atan2(c)))
}

/// Minimum distance between segments `[p0, p1]` and `[q0, q1]`.
pub fn segment_distance(p0: &Vec3, p1: &Vec3, q0: &Vec3, q1: &Vec3) -> f64 {
    let d1 = p1 - p0;
    let d2 = q1 - q0;
    let r = p0 - q0;
    let a = d1.dot(&d1);
    let e = d2.dot(&d2);
    let f = d2.dot(&r);
    let (s, t);
    if a <= f64::EPSILON && e <= f64::EPSILON {
        return r.norm();
    }
    if a <= f64::EPSILON {
        s = 0.0;
        t = (f / e).clamp(0.0, 1.0);
    } else {
        let c = d1.dot(&r);
        if e <= f64::EPSILON {
            t = 0.0;
            s = (-c / a).clamp(0.0, 1.0);
        } else {
            let b = d1.dot(&d2);
            let denom = a * e - b * b;
            let mut s0 = if denom > 0.0 { ((b * f - c * e) / denom).clamp(0.0, 1.0) } else { 0.0 };
            let mut t0 = (b * s0 + f) / e;
            if t0 < 0.0 {
                t0 = 0.0;
                s0 = (-c / a).clamp(0.0, 1.0);
            } else if t0 > 1.0 {
                t0 = 1.0;
                s0 = ((b - c) / a).clamp(0.0, 1.0);
            }
            s = s0;
            t = t0;
        }
    }
    ((p0 + d1 * s) - (q0 + d2 * t)).norm()
}

/// Distance from `p` to the closed triangle `abc`.
pub fn point_triangle_distance(p: &Vec3, a: &Vec3, b: &Vec3, c: &Vec3) -> f64 {
    let ab = b - a;
    let ac = c - a;
    let ap = p - a;
    let d1 = ab.dot(&ap);
    let d2 = ac.dot(&ap);
    if d1 <= 0.0 && d2 <= 0.0 {
        return ap.norm();
    }
    let bp = p - b;
    let d3 = ab.dot(&bp);
    let d4 = ac.dot(&bp);
    if d3 >= 0.0 && d4 <= d3 {
        return bp.norm();
    }
    let vc = d1 * d4 - d3 * d2;
    if vc <= 0.0 && d1 >= 0.0 && d3 <= 0.0 {
        let v = d1 / (d1 - d3);
        return (p - (a + ab * v)).norm();
    }
    let cp = p - c;
    let d5 = ab.dot(&cp);
    let d6 = ac.dot(&cp);
    if d6 >= 0.0 && d5 <= d6 {
        return cp.norm();
    }
    let vb = d5 * d2 - d1 * d6;
    if vb <= 0.0 && d2 >= 0.0 && d6 <= 0.0 {
        let w = d2 / (d2 - d6);
        return (p - (a + ac * w)).norm();
    }
    let va = d3 * d6 - d5 * d4;
    if va <= 0.0 && d4 - d3 >= 0.0 && d5 - d6 >= 0.0 {
        let w = (d4 - d3) / ((d4 - d3) + (d5 - d6));
        return (p - (b + (c - b) * w)).norm();
    }
    let denom = 1.0 / (va + vb + vc);
    let v = vb * denom;
    let w = vc * denom;
    (p - (a + ab * v + ac * w)).norm()
}

/// Reduce an angle to `(-pi, pi]`.
pub fn wrap_angle(a: f64) -> f64 {
    use std::f64::consts::{PI, TAU};
    let mut r = a.rem_euclid(TAU);
    if r > PI {
        r -= TAU;
    }
    r
}

/// Distance between two angles on the circle.
pub fn angle_distance(a: f64, b: f64) -> f64 {
    wrap_angle(a - b).abs()
}

#[cfg(test)]
mod tests {
    use super::*;
    use std::f64::consts::PI;

    #[test]
    fn point_triangle_regions() {
        let (a, b, c) = (Vec3::zeros(), Vec3::x(), Vec3::y());
        let d = |p: Vec3| point_triangle_distance(&p, &a, &b, &c);
        assert!((d(Vec3::new(0.2, 0.2, 3.0)) - 3.0).abs() < 1e-15);
        assert!((d(Vec3::new(-1.0, -1.0, 0.0)) - 2f64.sqrt()).abs() < 1e-15);
        assert!((d(Vec3::new(2.0, 0.0, 0.0)) - 1.0).abs() < 1e-15);
        assert!((d(Vec3::new(0.5, -2.0, 0.0)) - 2.0).abs() < 1e-15);
        assert!((d(Vec3::new(1.0, 1.0, 0.0)) - 0.5f64.sqrt()).abs() < 1e-15);
        assert!((d(Vec3::new(-0.5, 0.5, 1.0)) - 1.25f64.sqrt()).abs() < 1e-15);
        assert!((d(Vec3::new(0.0, 3.0, 0.0)) - 2.0).abs() < 1e-15);
    }

    #[test]
    fn angles_near_extremes() {
        let u = Vec3::new(1.0, 0.0, 0.0);
        assert_eq!(angle_between(&u, &u), 0.0);
        assert!((angle_between(&u, &-u) - PI).abs() < 1e-15);
        let tiny = Vec3::new(1.0, 1e-9, 0.0);
        assert!((angle_between(&u, &tiny) - 1e-9).abs() < 1e-20);
        assert!(cot_between(&u, &-u).is_none());
    }

    #[test]
    fn minimal_rotation_maps_vectors() {
        let a = Vec3::new(1.0, 2.0, 3.0).normalize();
        let b = Vec3::new(-2.0, 0.5, 1.0).normalize();
        let r = minimal_rotation(&a, &b).unwrap();
        assert!((r * a - b).norm() < 1e-15);
        assert!(minimal_rotation(&a, &-a).is_none());
    }

    #[test]
    fn segment_distances() {
        let o = Vec3::zeros();
        let x = Vec3::x();
        let d = segment_distance(&o, &x, &Vec3::new(0.5, 1.0, 1.0), &Vec3::new(0.5, -1.0, 1.0));
        assert!((d - 1.0).abs() < 1e-15);
        let d = segment_distance(&o, &x, &Vec3::new(2.0, 0.0, 0.0), &Vec3::new(3.0, 0.0, 0.0));
        assert!((d - 1.0).abs() < 1e-15);
        let d = segment_distance(&o, &x, &Vec3::new(0.5, -1.0, 0.0), &Vec3::new(0.5, 1.0, 0.0));
        assert_eq!(d, 0.0);
    }

    #[test]
    fn wrapping() {
        assert!((wrap_angle(3.0 * PI) - PI).abs() < 1e-12);
        assert!(angle_distance(0.1, 0.1 + 2.0 * PI) < 1e-12);
    }
}
