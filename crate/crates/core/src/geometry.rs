//! Planar geometry kernels used by the tract-variable transformation.
//!
//! All coordinates are millimetres in the occlusal frame: origin at the
//! maxillary incisor tip, x along the occlusal plane, posterior is negative x.

use std::ops::{Add, Mul, Neg, Sub};

use thiserror::Error;

use crate::model::PalatalTrace;

/// Relative collinearity threshold for [`circumcircle`].
pub const COLLINEAR_EPS: f64 = 1e-9;

#[derive(Clone, Copy, Debug, Default, PartialEq)]
pub struct Point {
    pub x: f64,
    pub y: f64,
}

impl Point {
    pub const NAN: Point = Point {
        x: f64::NAN,
        y: f64::NAN,
    };

    pub const fn new(x: f64, y: f64) -> Self {
        Point { x, y }
    }

    pub fn is_finite(self) -> bool {
        self.x.is_finite() && self.y.is_finite()
    }

    pub fn dot(self, o: Point) -> f64 {
        self.x * o.x + self.y * o.y
    }

    /// z-component of the 3-D cross product.
    pub fn cross(self, o: Point) -> f64 {
        self.x * o.y - self.y * o.x
    }

    pub fn norm_sq(self) -> f64 {
        self.dot(self)
    }

    pub fn norm(self) -> f64 {
        self.x.hypot(self.y)
    }

    pub fn dist(self, o: Point) -> f64 {
        (self - o).norm()
    }

    /// Counter-clockwise quarter turn.
    pub fn perp(self) -> Point {
        Point::new(-self.y, self.x)
    }

    pub fn lerp(self, o: Point, t: f64) -> Point {
        self + (o - self) * t
    }
}

impl Add for Point {
    type Output = Point;
    fn add(self, o: Point) -> Point {
        Point::new(self.x + o.x, self.y + o.y)
    }
}

impl Sub for Point {
    type Output = Point;
    fn sub(self, o: Point) -> Point {
        Point::new(self.x - o.x, self.y - o.y)
    }
}

impl Mul<f64> for Point {
    type Output = Point;
    fn mul(self, s: f64) -> Point {
        Point::new(self.x * s, self.y * s)
    }
}

impl Neg for Point {
    type Output = Point;
    fn neg(self) -> Point {
        Point::new(-self.x, -self.y)
    }
}

impl From<(f64, f64)> for Point {
    fn from((x, y): (f64, f64)) -> Self {
        Point::new(x, y)
    }
}

#[derive(Clone, Copy, Debug, PartialEq)]
pub struct Circle {
    pub center: Point,
    pub radius: f64,
}

impl Circle {
    pub fn new(center: Point, radius: f64) -> Result<Self, GeometryError> {
        if !center.is_finite() {
            return Err(GeometryError::NonFinite);
        }
        if !(radius.is_finite() && radius > 0.0) {
            return Err(GeometryError::InvalidParameter(format!(
                "circle radius {radius} must be finite and positive"
            )));
        }
        Ok(Circle { center, radius })
    }
}

/// A minimum distance together with the pair of points realising it.
///
/// `point_a` lies on the first object of the query, `point_b` on the second
/// (the polyline, for the palate queries).
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct DistanceWitness {
    pub distance: f64,
    pub point_a: Point,
    pub point_b: Point,
}

#[derive(Clone, Debug, PartialEq, Error)]
pub enum GeometryError {
    #[error("points are collinear")]
    Collinear,
    #[error("non-finite input coordinate")]
    NonFinite,
    #[error("degenerate polyline: {0}")]
    DegeneratePolyline(String),
    #[error("{0}")]
    InvalidParameter(String),
}

/// Circle through three points.
///
/// Returns [`GeometryError::Collinear`] when twice the triangle's signed area
/// is below `COLLINEAR_EPS` times the largest squared side length.
pub fn circumcircle(p1: Point, p2: Point, p3: Point) -> Result<Circle, GeometryError> {
    if !(p1.is_finite() && p2.is_finite() && p3.is_finite()) {
        return Err(GeometryError::NonFinite);
    }
    let b = p2 - p1;
    let c = p3 - p1;
    let area2 = b.cross(c);
    let extent = b.norm_sq().max(c.norm_sq()).max((p3 - p2).norm_sq());
    if area2.abs() <= COLLINEAR_EPS * extent {
        return Err(GeometryError::Collinear);
    }
    let d = 2.0 * area2;
    let (bb, cc) = (b.norm_sq(), c.norm_sq());
    let u = Point::new((c.y * bb - b.y * cc) / d, (b.x * cc - c.x * bb) / d);
    Ok(Circle {
        center: p1 + u,
        radius: u.norm(),
    })
}

fn check_polyline(poly: &[Point]) -> Result<(), GeometryError> {
    if poly.len() < 2 {
        return Err(GeometryError::DegeneratePolyline(format!(
            "{} point(s)",
            poly.len()
        )));
    }
    if poly.iter().any(|p| !p.is_finite()) {
        return Err(GeometryError::NonFinite);
    }
    if let Some(i) = poly.windows(2).position(|w| w[0] == w[1]) {
        return Err(GeometryError::DegeneratePolyline(format!(
            "points {i} and {} coincide",
            i + 1
        )));
    }
    Ok(())
}

fn check_resolution(resolution_mm: f64) -> Result<(), GeometryError> {
    if resolution_mm.is_finite() && resolution_mm > 0.0 {
        Ok(())
    } else {
        Err(GeometryError::InvalidParameter(format!(
            "resolution {resolution_mm} mm must be positive"
        )))
    }
}

/// Closest point to `p` on segment `a`–`b`.
pub fn closest_on_segment(p: Point, a: Point, b: Point) -> Point {
    let d = b - a;
    let len_sq = d.norm_sq();
    if len_sq == 0.0 {
        return a;
    }
    let t = ((p - a).dot(d) / len_sq).clamp(0.0, 1.0);
    a + d * t
}

/// Minimum distance from `p` to a polyline, by exact projection onto each
/// segment. `point_a` is `p` itself. Ties go to the earliest segment.
///
/// `resolution_mm` is validated but not needed by the exact projection.
pub fn point_polyline_distance(
    p: Point,
    poly: &[Point],
    resolution_mm: f64,
) -> Result<DistanceWitness, GeometryError> {
    check_resolution(resolution_mm)?;
    check_polyline(poly)?;
    if !p.is_finite() {
        return Err(GeometryError::NonFinite);
    }
    let mut best = DistanceWitness {
        distance: f64::INFINITY,
        point_a: p,
        point_b: poly[0],
    };
    for w in poly.windows(2) {
        let q = closest_on_segment(p, w[0], w[1]);
        let d = p.dist(q);
        if d < best.distance {
            best.distance = d;
            best.point_b = q;
        }
    }
    Ok(best)
}

/// Point of the circle nearest to `q`; the tie at the centre resolves to
/// the direction `fallback_dir`.
fn circle_point_toward(c: &Circle, q: Point, fallback_dir: Point) -> Point {
    let v = q - c.center;
    let n = v.norm();
    if n > f64::EPSILON * c.radius.max(1.0) {
        c.center + v * (c.radius / n)
    } else {
        c.center + fallback_dir * (c.radius / fallback_dir.norm())
    }
}

/// Exact minimum of `| |q - center| - radius |` for `q` on one segment.
fn circle_segment_witness(c: &Circle, a: Point, b: Point) -> DistanceWitness {
    let d = b - a;
    let normal = d.perp();
    let foot = closest_on_segment(c.center, a, b);
    let near = foot.dist(c.center);
    let (da, db) = (a.dist(c.center), b.dist(c.center));
    let far_pt = if db > da { b } else { a };
    let far = da.max(db);

    if near >= c.radius {
        // Segment entirely outside the circle.
        let on_circle = circle_point_toward(c, foot, normal);
        DistanceWitness {
            distance: near - c.radius,
            point_a: on_circle,
            point_b: foot,
        }
    } else if far <= c.radius {
        // Segment entirely inside; distance is attained at the far endpoint.
        let on_circle = circle_point_toward(c, far_pt, normal);
        DistanceWitness {
            distance: c.radius - far,
            point_a: on_circle,
            point_b: far_pt,
        }
    } else {
        // The segment crosses the circle: first crossing along a -> b.
        let f = a - c.center;
        let qa = d.norm_sq();
        let qb = 2.0 * f.dot(d);
        let qc = f.norm_sq() - c.radius * c.radius;
        let disc = (qb * qb - 4.0 * qa * qc).max(0.0).sqrt();
        let t1 = (-qb - disc) / (2.0 * qa);
        let t2 = (-qb + disc) / (2.0 * qa);
        let t = if (0.0..=1.0).contains(&t1) {
            t1
        } else {
            t2.clamp(0.0, 1.0)
        };
        let x = a + d * t;
        DistanceWitness {
            distance: 0.0,
            point_a: x,
            point_b: x,
        }
    }
}

/// Minimum distance between a circle and a polyline.
///
/// Each segment is minimised in closed form: the distance from a segment
/// point `q` to the circle is `| |q - center| - radius |`, and
/// `|q - center|` is convex along the segment. `point_a` is on the circle,
/// `point_b` on the polyline; where they cross both witnesses are the first
/// crossing in polyline order. When the nearest polyline point coincides
/// with the centre, the circle witness lies along the segment's left normal.
pub fn circle_polyline_distance(
    c: &Circle,
    poly: &[Point],
    resolution_mm: f64,
) -> Result<DistanceWitness, GeometryError> {
    check_resolution(resolution_mm)?;
    check_polyline(poly)?;
    let mut best: Option<DistanceWitness> = None;
    for w in poly.windows(2) {
        let cand = circle_segment_witness(c, w[0], w[1]);
        if best.map_or(true, |b| cand.distance < b.distance) {
            best = Some(cand);
        }
    }
    Ok(best.expect("polyline has at least one segment"))
}

/// Intersection point of two closed segments, if any.
fn segment_intersection(a0: Point, a1: Point, b0: Point, b1: Point) -> Option<Point> {
    let r = a1 - a0;
    let s = b1 - b0;
    let denom = r.cross(s);
    let qp = b0 - a0;
    if denom == 0.0 {
        return None;
    }
    let t = qp.cross(s) / denom;
    let u = qp.cross(r) / denom;
    ((0.0..=1.0).contains(&t) && (0.0..=1.0).contains(&u)).then(|| a0 + r * t)
}

/// Minimum distance between two polylines; `point_a` lies on `first`.
pub fn polyline_polyline_distance(
    first: &[Point],
    second: &[Point],
) -> Result<DistanceWitness, GeometryError> {
    check_polyline(first)?;
    check_polyline(second)?;
    let mut best = DistanceWitness {
        distance: f64::INFINITY,
        point_a: first[0],
        point_b: second[0],
    };
    let mut consider = |pa: Point, pb: Point| {
        let d = pa.dist(pb);
        if d < best.distance {
            best = DistanceWitness {
                distance: d,
                point_a: pa,
                point_b: pb,
            };
        }
    };
    for a in first.windows(2) {
        for b in second.windows(2) {
            if let Some(x) = segment_intersection(a[0], a[1], b[0], b[1]) {
                consider(x, x);
                continue;
            }
            consider(a[0], closest_on_segment(a[0], b[0], b[1]));
            consider(a[1], closest_on_segment(a[1], b[0], b[1]));
            consider(closest_on_segment(b[0], a[0], a[1]), b[0]);
            consider(closest_on_segment(b[1], a[0], a[1]), b[1]);
        }
    }
    Ok(best)
}

/// Parameters of the soft-palate and pharyngeal-wall continuation.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct PalateExtension {
    /// x of the anterior pharyngeal wall; must be posterior to the palate.
    pub wall_x: f64,
    /// Length of the vertical wall segment below the junction.
    pub wall_drop_mm: f64,
    /// Maximum spacing of the appended samples.
    pub step_mm: f64,
}

impl PalateExtension {
    pub const DEFAULT_WALL_DROP_MM: f64 = 30.0;
    pub const DEFAULT_STEP_MM: f64 = 1.0;

    pub fn new(wall_x: f64) -> Self {
        PalateExtension {
            wall_x,
            wall_drop_mm: Self::DEFAULT_WALL_DROP_MM,
            step_mm: Self::DEFAULT_STEP_MM,
        }
    }
}

/// Extends a hard-palate trace through the soft palate to the pharyngeal
/// wall.
///
/// The last palate segment is continued in a straight line until it reaches
/// `wall_x`, then a vertical segment descends `wall_drop_mm` from that
/// junction. Both pieces are sampled uniformly at spacing at most `step_mm`.
/// The input points are an exact prefix of the output.
pub fn extend_palatal_trace(
    palate: &PalatalTrace,
    ext: &PalateExtension,
) -> crate::Result<PalatalTrace> {
    let invalid = |msg: String| GeometryError::InvalidParameter(msg);
    if palate.is_extended() {
        return Err(invalid("palatal trace is already extended".into()).into());
    }
    if !(ext.step_mm.is_finite() && ext.step_mm > 0.0) {
        return Err(invalid(format!("step {} mm must be positive", ext.step_mm)).into());
    }
    if !(ext.wall_drop_mm.is_finite() && ext.wall_drop_mm >= 0.0) {
        return Err(invalid(format!("wall drop {} mm must be non-negative", ext.wall_drop_mm)).into());
    }
    let pts = palate.points();
    let last = pts[pts.len() - 1];
    let prev = pts[pts.len() - 2];
    if !(ext.wall_x.is_finite() && ext.wall_x < last.x) {
        return Err(invalid(format!(
            "wall x {} is not posterior to the palate end x {}",
            ext.wall_x, last.x
        ))
        .into());
    }
    let dir = last - prev;
    if dir.x >= 0.0 {
        return Err(invalid(
            "last palate segment does not point posteriorly; it cannot reach the wall".into(),
        )
        .into());
    }

    let mut junction = last + dir * ((ext.wall_x - last.x) / dir.x);
    junction.x = ext.wall_x;

    let mut out = pts.to_vec();
    let n = (last.dist(junction) / ext.step_mm).ceil().max(1.0) as usize;
    for k in 1..=n {
        out.push(if k == n {
            junction
        } else {
            last.lerp(junction, k as f64 / n as f64)
        });
    }
    if ext.wall_drop_mm > 0.0 {
        let m = (ext.wall_drop_mm / ext.step_mm).ceil().max(1.0) as usize;
        for k in 1..=m {
            let drop = ext.wall_drop_mm * k as f64 / m as f64;
            out.push(Point::new(junction.x, junction.y - drop));
        }
    }
    PalatalTrace::new(palate.speaker_id.clone(), out, true)
}

/// True when no two non-adjacent segments of the polyline touch.
pub fn is_simple_polyline(poly: &[Point]) -> bool {
    let n = poly.len();
    for i in 0..n.saturating_sub(1) {
        for j in (i + 2)..n.saturating_sub(1) {
            if segment_intersection(poly[i], poly[i + 1], poly[j], poly[j + 1]).is_some() {
                return false;
            }
        }
    }
    true
}
