//! Polygonal space curves: turning angles and their sine/tangent variants,
//! zero-twist (Bishop) frames, and writhe.

use std::f64::consts::PI;
use std::path::Path;

use crate::error::{Error, Result};
use crate::geom::{self, Vec3};

/// Ordered points, open or closed. A closed curve does not repeat its first
/// point at the end.
#[derive(Debug, Clone, PartialEq)]
pub struct PolyCurve {
    points: Vec<Vec3>,
    closed: bool,
}

impl PolyCurve {
    pub fn new(points: Vec<Vec3>, closed: bool) -> Result<Self> {
        if points.len() < 2 {
            return Err(Error::TooFewPoints { needed: 2, got: points.len() });
        }
        let c = PolyCurve { points, closed };
        for i in 0..c.edge_count() {
            if c.edge(i) == Vec3::zeros() {
                return Err(Error::ZeroLengthEdge(i));
            }
        }
        Ok(c)
    }

    pub fn points(&self) -> &[Vec3] {
        &self.points
    }

    pub fn is_closed(&self) -> bool {
        self.closed
    }

    pub fn len(&self) -> usize {
        self.points.len()
    }

    pub fn is_empty(&self) -> bool {
        self.points.is_empty()
    }

    pub fn edge_count(&self) -> usize {
        if self.closed {
            self.points.len()
        } else {
            self.points.len() - 1
        }
    }

    /// Edge `i` runs from point `i` to point `i + 1` (cyclically if closed).
    pub fn edge(&self, i: usize) -> Vec3 {
        self.points[(i + 1) % self.points.len()] - self.points[i]
    }

    pub fn tangent(&self, i: usize) -> Vec3 {
        self.edge(i).normalize()
    }

    pub fn length(&self) -> f64 {
        (0..self.edge_count()).map(|i| self.edge(i).norm()).sum()
    }

    /// Apply `f` to every point.
    pub fn map_points(&self, f: impl Fn(&Vec3) -> Vec3) -> Result<Self> {
        PolyCurve::new(self.points.iter().map(f).collect(), self.closed)
    }

    /// Indices of the vertices where the curve turns: all of them when
    /// closed, the interior ones otherwise. Vertex `i` sits between edges
    /// `i - 1` and `i`.
    pub fn turning_vertices(&self) -> std::ops::Range<usize> {
        if self.closed {
            0..self.points.len()
        } else {
            1..self.points.len() - 1
        }
    }

    fn incoming_edge(&self, vertex: usize) -> usize {
        (vertex + self.edge_count() - 1) % self.edge_count()
    }
}

/// `samples` points on the `(p, q)` torus knot around a torus of radii
/// `major`, `minor`; `(2, 3)` is the trefoil.
pub fn torus_knot(p: u32, q: u32, samples: usize, major: f64, minor: f64) -> Result<PolyCurve> {
    let points = (0..samples)
        .map(|k| {
            let t = std::f64::consts::TAU * k as f64 / samples as f64;
            let r = major + minor * (q as f64 * t).cos();
            Vec3::new(r * (p as f64 * t).cos(), r * (p as f64 * t).sin(), minor * (q as f64 * t).sin())
        })
        .collect();
    PolyCurve::new(points, true)
}

/// Read `x y z` triples, one per line; blank lines and `#` comments skipped.
pub fn parse_curve(text: &str, closed: bool) -> Result<PolyCurve> {
    let mut points = Vec::new();
    for (i, line) in text.lines().enumerate() {
        let line = line.split('#').next().unwrap_or("").trim();
        if line.is_empty() {
            continue;
        }
        let vals = line
            .split_whitespace()
            .map(|t| {
                t.parse::<f64>()
                    .map_err(|_| Error::Parse { line: i + 1, msg: format!("expected a number, got {t:?}") })
            })
            .collect::<Result<Vec<_>>>()?;
        if vals.len() != 3 {
            return Err(Error::Parse { line: i + 1, msg: "expected `x y z`".into() });
        }
        points.push(Vec3::new(vals[0], vals[1], vals[2]));
    }
    PolyCurve::new(points, closed)
}

pub fn read_curve(path: impl AsRef<Path>, closed: bool) -> Result<PolyCurve> {
    parse_curve(&std::fs::read_to_string(path)?, closed)
}

#[derive(Debug, Clone, PartialEq)]
pub struct TurningData {
    /// Vertex index for each entry of `angles`.
    pub vertices: Vec<usize>,
    /// Turning angle in `[0, pi]` at each turning vertex.
    pub angles: Vec<f64>,
    pub total: f64,
    /// `sum 2 sin(psi / 2)`.
    pub total_sin: f64,
    /// `sum 2 tan(psi / 2)`; infinite if some `psi = pi`.
    pub total_tan: f64,
}

pub fn turning_angles(curve: &PolyCurve) -> Result<TurningData> {
    if curve.len() < 3 {
        return Err(Error::TooFewPoints { needed: 3, got: curve.len() });
    }
    let vertices: Vec<usize> = curve.turning_vertices().collect();
    let angles: Vec<f64> = vertices
        .iter()
        .map(|&v| geom::angle_between(&curve.edge(curve.incoming_edge(v)), &curve.edge(v)))
        .collect();
    let total = angles.iter().sum();
    let total_sin = angles.iter().map(|a| 2.0 * (a / 2.0).sin()).sum();
    let total_tan = angles
        .iter()
        .map(|&a| if a >= PI { f64::INFINITY } else { 2.0 * (a / 2.0).tan() })
        .sum();
    Ok(TurningData { vertices, angles, total, total_sin, total_tan })
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Frame {
    pub tangent: Vec3,
    pub normal1: Vec3,
    pub normal2: Vec3,
}

#[derive(Debug, Clone, PartialEq)]
pub struct ParallelFrame {
    /// One frame per edge.
    pub frames: Vec<Frame>,
    /// Closed curves: signed angle, about the first tangent, from the seed
    /// normal to the normal transported once around.
    pub holonomy: Option<f64>,
}

/// Minimal rotation carrying edge `i - 1`'s tangent to edge `i`'s.
pub(crate) fn corner_rotation(curve: &PolyCurve, vertex: usize) -> Result<nalgebra::Matrix3<f64>> {
    let t0 = curve.tangent(curve.incoming_edge(vertex));
    let t1 = curve.tangent(vertex);
    if geom::angle_between(&t0, &t1) > PI - 1e-12 {
        return Err(Error::AntiparallelEdges(vertex));
    }
    geom::minimal_rotation(&t0, &t1).ok_or(Error::AntiparallelEdges(vertex))
}

/// Project `seed` off the first tangent and normalize it.
pub(crate) fn seed_normal(curve: &PolyCurve, seed: &Vec3) -> Result<Vec3> {
    let t = curve.tangent(0);
    let n = seed - t * t.dot(seed);
    if n.norm() < 1e-9 * seed.norm().max(1e-300) || !n.norm().is_finite() {
        return Err(Error::InvalidParameter("seed normal is parallel to the first edge".into()));
    }
    Ok(n.normalize())
}

/// Any unit vector orthogonal to the first edge.
pub fn default_seed_normal(curve: &PolyCurve) -> Vec3 {
    let t = curve.tangent(0);
    let helper = if t.x.abs() < 0.9 { Vec3::x() } else { Vec3::y() };
    t.cross(&helper).normalize()
}

/// Transport `seed_normal` along the curve with zero twist: at every corner
/// the frame is rotated about the corner binormal through the turning angle.
pub fn parallel_transport_frame(curve: &PolyCurve, seed_normal: &Vec3) -> Result<ParallelFrame> {
    let seed = self::seed_normal(curve, seed_normal)?;
    let m = curve.edge_count();
    let mut frames = Vec::with_capacity(m);
    let t0 = curve.tangent(0);
    frames.push(Frame { tangent: t0, normal1: seed, normal2: t0.cross(&seed) });
    let mut n1 = seed;
    for i in 1..m {
        let r = corner_rotation(curve, i)?;
        let t = curve.tangent(i);
        n1 = r * n1;
        // strip rounding drift so the triple stays orthonormal over long curves
        n1 = (n1 - t * t.dot(&n1)).normalize();
        frames.push(Frame { tangent: t, normal1: n1, normal2: t.cross(&n1) });
    }
    let holonomy = if curve.is_closed() {
        let r = corner_rotation(curve, 0)?;
        let back = r * n1;
        let back = (back - t0 * t0.dot(&back)).normalize();
        Some(seed.cross(&back).dot(&t0).atan2(seed.dot(&back)))
    } else {
        None
    };
    Ok(ParallelFrame { frames, holonomy })
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Writhe {
    /// Normal-bundle holonomy angle in `(-pi, pi]`.
    pub mod_2pi: f64,
    /// `2 pi Wr` from the Gauss double integral, for embedded curves.
    pub real: Option<f64>,
}

/// Writhe of a closed curve as an angle. `real` is only computed when
/// `with_real` is set, and requires the curve to be embedded.
pub fn writhe(curve: &PolyCurve, with_real: bool) -> Result<Writhe> {
    if !curve.is_closed() {
        return Err(Error::OpenCurve);
    }
    let frame = parallel_transport_frame(curve, &default_seed_normal(curve))?;
    let mod_2pi = geom::wrap_angle(frame.holonomy.expect("closed curve"));
    let real = if with_real { Some(gauss_writhe(curve)?) } else { None };
    Ok(Writhe { mod_2pi, real })
}

/// Error unless no two non-adjacent edges come within `1e-9 * length`.
pub fn check_embedded(curve: &PolyCurve) -> Result<()> {
    let m = curve.edge_count();
    let tol = 1e-9 * curve.length();
    let pts = curve.points();
    let n = pts.len();
    for i in 0..m {
        for j in i + 1..m {
            if adjacent(curve, i, j) {
                continue;
            }
            let d = geom::segment_distance(&pts[i], &pts[(i + 1) % n], &pts[j], &pts[(j + 1) % n]);
            if d <= tol {
                return Err(Error::SelfIntersecting(i, j));
            }
        }
    }
    Ok(())
}

fn adjacent(curve: &PolyCurve, i: usize, j: usize) -> bool {
    let m = curve.edge_count();
    j == i + 1 || (curve.is_closed() && i == 0 && j == m - 1)
}

/// Exact Gauss integral over one pair of segments: the signed solid angle
/// swept by the pair, in the form of Klenin and Langowski.
fn segment_pair_solid_angle(p1: &Vec3, p2: &Vec3, p3: &Vec3, p4: &Vec3) -> f64 {
    let r13 = p3 - p1;
    let r14 = p4 - p1;
    let r23 = p3 - p2;
    let r24 = p4 - p2;
    let unit = |v: Vec3| {
        let n = v.norm();
        if n > 0.0 {
            v / n
        } else {
            v
        }
    };
    let n1 = unit(r13.cross(&r14));
    let n2 = unit(r14.cross(&r24));
    let n3 = unit(r24.cross(&r23));
    let n4 = unit(r23.cross(&r13));
    let asin = |x: f64| x.clamp(-1.0, 1.0).asin();
    let omega = asin(n1.dot(&n2)) + asin(n2.dot(&n3)) + asin(n3.dot(&n4)) + asin(n4.dot(&n1));
    let s = (p4 - p3).cross(&(p2 - p1)).dot(&r13);
    if s > 0.0 {
        omega
    } else if s < 0.0 {
        -omega
    } else {
        0.0
    }
}

/// `2 pi Wr` of an embedded closed curve, summing the exact per-pair
/// solid angles.
pub fn gauss_writhe(curve: &PolyCurve) -> Result<f64> {
    if !curve.is_closed() {
        return Err(Error::OpenCurve);
    }
    check_embedded(curve)?;
    let pts = curve.points();
    let n = pts.len();
    let mut total = 0.0;
    for i in 0..n {
        for j in i + 1..n {
            if adjacent(curve, i, j) {
                continue;
            }
            total += segment_pair_solid_angle(&pts[i], &pts[(i + 1) % n], &pts[j], &pts[(j + 1) % n]);
        }
    }
    Ok(total)
}

/// `2 pi Wr` of an embedded closed curve by adaptive Gauss-Kronrod
/// quadrature of the Gauss double integral over every pair of segments.
/// `tol` is the absolute error target per segment pair.
pub fn gauss_writhe_quadrature(curve: &PolyCurve, tol: f64) -> Result<f64> {
    if !curve.is_closed() {
        return Err(Error::OpenCurve);
    }
    check_embedded(curve)?;
    let pts = curve.points();
    let n = pts.len();
    let mut total = 0.0;
    for i in 0..n {
        for j in i + 1..n {
            if adjacent(curve, i, j) {
                continue;
            }
            let (a1, e1) = (pts[i], pts[(i + 1) % n] - pts[i]);
            let (a2, e2) = (pts[j], pts[(j + 1) % n] - pts[j]);
            let c = e1.cross(&e2);
            let integrand = |s: f64, u: f64| {
                let d = (a1 + e1 * s) - (a2 + e2 * u);
                c.dot(&d) / d.norm().powi(3)
            };
            let outer = |s: f64| quad::adaptive(&|u| integrand(s, u), 0.0, 1.0, tol * 0.1);
            total += quad::adaptive(&outer, 0.0, 1.0, tol);
        }
    }
    Ok(total)
}

/// Adaptive Gauss-Kronrod (7, 15) quadrature.
#[allow(clippy::excessive_precision)]
pub mod quad {
    const XGK: [f64; 8] = [
        0.991455371120812639206854697526329,
        0.949107912342758524526189684047851,
        0.864864423359769072789712788640926,
        0.741531185599394439863864773280788,
        0.586087235467691130294144845693013,
        0.405845151377397166906606412076961,
        0.207784955007898467600689403773245,
        0.000000000000000000000000000000000,
    ];
    const WGK: [f64; 8] = [
        0.022935322010529224963732008058970,
        0.063092092629978553290700663189204,
        0.104790010322250183839876322541518,
        0.140653259715525918745189590510238,
        0.169004726639267902826583426598550,
        0.190350578064785409913256402421014,
        0.204432940075298892414161999234649,
        0.209482141084727828012999174891714,
    ];
    const WG: [f64; 4] = [
        0.129484966168869693270611432679082,
        0.279705391489276667901467771423780,
        0.381830050505118944950369775488975,
        0.417959183673469387755102040816327,
    ];

    /// One GK15 panel: (Kronrod estimate, |Kronrod - Gauss|).
    pub fn gk15(f: &dyn Fn(f64) -> f64, a: f64, b: f64) -> (f64, f64) {
        let c = 0.5 * (a + b);
        let h = 0.5 * (b - a);
        let fc = f(c);
        let mut k = fc * WGK[7];
        let mut g = fc * WG[3];
        for j in 0..7 {
            let x = h * XGK[j];
            let s = f(c - x) + f(c + x);
            k += WGK[j] * s;
            if j % 2 == 1 {
                g += WG[j / 2] * s;
            }
        }
        (k * h, ((k - g) * h).abs())
    }

    pub fn adaptive(f: &dyn Fn(f64) -> f64, a: f64, b: f64, tol: f64) -> f64 {
        fn rec(f: &dyn Fn(f64) -> f64, a: f64, b: f64, tol: f64, depth: u32) -> f64 {
            let (v, err) = gk15(f, a, b);
            if err <= tol || depth >= 40 {
                return v;
            }
            let m = 0.5 * (a + b);
            rec(f, a, m, 0.5 * tol, depth + 1) + rec(f, m, b, 0.5 * tol, depth + 1)
        }
        rec(f, a, b, tol, 0)
    }
}
