//! Orientation determinants, capture tests and the convex hull of four
//! planar points.
//!
//! Determinants use plain floating point. A zero determinant (a point on an
//! edge, a collinear triple) never counts as a capture and makes
//! [`hull4_classify`] fail; under a continuous distribution these events have
//! probability zero.

use crate::error::{Error, Result};

#[derive(Debug, Clone, Copy, PartialEq, Default)]
pub struct Point2 {
    pub x: f64,
    pub y: f64,
}

impl Point2 {
    pub const fn new(x: f64, y: f64) -> Self {
        Self { x, y }
    }

    pub fn is_finite(&self) -> bool {
        self.x.is_finite() && self.y.is_finite()
    }

    pub fn distance(&self, other: &Point2) -> f64 {
        (self.x - other.x).hypot(self.y - other.y)
    }

    /// Rotation about the origin by `angle` radians.
    pub fn rotated(&self, angle: f64) -> Point2 {
        let (s, c) = angle.sin_cos();
        Point2::new(c * self.x - s * self.y, s * self.x + c * self.y)
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Default)]
pub struct Point3 {
    pub x: f64,
    pub y: f64,
    pub z: f64,
}

impl Point3 {
    pub const fn new(x: f64, y: f64, z: f64) -> Self {
        Self { x, y, z }
    }

    fn sub(&self, o: &Point3) -> [f64; 3] {
        [self.x - o.x, self.y - o.y, self.z - o.z]
    }
}

/// The determinant `|p 1; q 1; r 1|`: twice the signed area of `pqr`,
/// positive when the turn `p → q → r` is counterclockwise.
pub fn orient2d(p: Point2, q: Point2, r: Point2) -> f64 {
    (q.x - p.x) * (r.y - p.y) - (q.y - p.y) * (r.x - p.x)
}

/// The determinant `|a 1; b 1; c 1; d 1|` of the 4×4 homogeneous matrix,
/// equal to `det[a - d; b - d; c - d]`.
pub fn orient3d(a: Point3, b: Point3, c: Point3, d: Point3) -> f64 {
    let [a0, a1, a2] = a.sub(&d);
    let [b0, b1, b2] = b.sub(&d);
    let [c0, c1, c2] = c.sub(&d);
    a0 * (b1 * c2 - b2 * c1) - a1 * (b0 * c2 - b2 * c0) + a2 * (b0 * c1 - b1 * c0)
}

fn same_strict_sign(dets: &[f64]) -> bool {
    dets.iter().all(|&d| d > 0.0) || dets.iter().all(|&d| d < 0.0)
}

/// True iff `x` lies strictly inside triangle `abc`: the determinants with
/// each vertex replaced by `x` are all positive or all negative.
pub fn triangle_captures(a: Point2, b: Point2, c: Point2, x: Point2) -> bool {
    same_strict_sign(&[orient2d(x, b, c), orient2d(a, x, c), orient2d(a, b, x)])
}

/// True iff `x` lies strictly inside tetrahedron `abcd`.
pub fn tetra_captures(a: Point3, b: Point3, c: Point3, d: Point3, x: Point3) -> bool {
    same_strict_sign(&[
        orient3d(x, b, c, d),
        orient3d(a, x, c, d),
        orient3d(a, b, x, d),
        orient3d(a, b, c, x),
    ])
}

/// Shape of the convex hull of four points in general position.
///
/// Hull vertices are listed counterclockwise, starting from the
/// lexicographically smallest point.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum HullClass {
    /// All four points are hull vertices.
    Quadrilateral { order: [usize; 4] },
    /// The hull is a triangle; point `inner` lies inside it.
    DegenerateTriangle { inner: usize, order: [usize; 3] },
}

impl HullClass {
    pub fn order(&self) -> &[usize] {
        match self {
            HullClass::Quadrilateral { order } => order,
            HullClass::DegenerateTriangle { order, .. } => order,
        }
    }

    pub fn inner_index(&self) -> Option<usize> {
        match self {
            HullClass::Quadrilateral { .. } => None,
            HullClass::DegenerateTriangle { inner, .. } => Some(*inner),
        }
    }

    pub fn vertex_count(&self) -> usize {
        self.order().len()
    }

    pub fn is_quadrilateral(&self) -> bool {
        matches!(self, HullClass::Quadrilateral { .. })
    }
}

fn ccw_from_lexmin<const N: usize>(pts: &[Point2; 4], mut idx: [usize; N]) -> [usize; N] {
    let start = (0..N)
        .min_by(|&i, &j| {
            let (p, q) = (pts[idx[i]], pts[idx[j]]);
            (p.x, p.y).partial_cmp(&(q.x, q.y)).expect("finite points")
        })
        .expect("non-empty");
    idx.swap(0, start);
    let origin = pts[idx[0]];
    // Every other hull vertex lies in a half-plane seen from the lexicographic
    // minimum, so orientation is a strict angular order.
    idx[1..].sort_by(|&i, &j| {
        let o = orient2d(origin, pts[i], pts[j]);
        0.0.partial_cmp(&o).expect("finite points")
    });
    idx
}

/// Classifies the hull of four points as a quadrilateral or a triangle with
/// one inner point.
pub fn hull4_classify(a: Point2, b: Point2, c: Point2, d: Point2) -> Result<HullClass> {
    let pts = [a, b, c, d];
    if !pts.iter().all(Point2::is_finite) {
        return Err(Error::domain("hull4_classify", "non-finite coordinate"));
    }
    for skip in 0..4 {
        let [i, j, k] = others(skip);
        if orient2d(pts[i], pts[j], pts[k]) == 0.0 {
            return Err(Error::DegenerateInput("three of the four points are collinear"));
        }
    }
    for inner in 0..4 {
        let [i, j, k] = others(inner);
        if triangle_captures(pts[i], pts[j], pts[k], pts[inner]) {
            return Ok(HullClass::DegenerateTriangle {
                inner,
                order: ccw_from_lexmin(&pts, [i, j, k]),
            });
        }
    }
    Ok(HullClass::Quadrilateral {
        order: ccw_from_lexmin(&pts, [0, 1, 2, 3]),
    })
}

/// The three indices of `0..4` other than `skip`, in increasing order.
pub(crate) fn others(skip: usize) -> [usize; 3] {
    match skip {
        0 => [1, 2, 3],
        1 => [0, 2, 3],
        2 => [0, 1, 3],
        _ => [0, 1, 2],
    }
}

fn check_consistent(h: &HullClass, pts: &[Point2; 4]) -> Result<()> {
    let order = h.order();
    let mut seen = [false; 4];
    for &i in order.iter().chain(h.inner_index().iter()) {
        if i >= 4 || seen[i] {
            return Err(Error::Inconsistent("hull indices must be distinct and below four"));
        }
        seen[i] = true;
    }
    let n = order.len();
    for k in 0..n {
        let turn = orient2d(pts[order[k]], pts[order[(k + 1) % n]], pts[order[(k + 2) % n]]);
        if turn <= 0.0 {
            return Err(Error::Inconsistent("hull order is not a counterclockwise convex cycle"));
        }
    }
    Ok(())
}

/// Lengths of consecutive hull edges in hull order: three for a degenerate
/// quadrilateral, four otherwise.
pub fn hull_sides(h: &HullClass, pts: &[Point2; 4]) -> Result<Vec<f64>> {
    check_consistent(h, pts)?;
    Ok(sides_iter(h.order(), pts).collect())
}

pub(crate) fn sides_iter<'a>(order: &'a [usize], pts: &'a [Point2; 4]) -> impl Iterator<Item = f64> + 'a {
    let n = order.len();
    (0..n).map(move |k| pts[order[k]].distance(&pts[order[(k + 1) % n]]))
}

pub fn hull_perimeter(h: &HullClass, pts: &[Point2; 4]) -> Result<f64> {
    Ok(hull_sides(h, pts)?.iter().sum())
}

/// Shoelace area over the hull order; strictly positive for a valid hull.
pub fn hull_area(h: &HullClass, pts: &[Point2; 4]) -> Result<f64> {
    check_consistent(h, pts)?;
    Ok(shoelace(h.order(), pts))
}

pub(crate) fn shoelace(order: &[usize], pts: &[Point2; 4]) -> f64 {
    let n = order.len();
    let twice: f64 = (0..n)
        .map(|k| {
            let (p, q) = (pts[order[k]], pts[order[(k + 1) % n]]);
            p.x * q.y - q.x * p.y
        })
        .sum();
    0.5 * twice
}

/// Area of triangle `abc` (unsigned).
pub fn triangle_area(a: Point2, b: Point2, c: Point2) -> f64 {
    0.5 * orient2d(a, b, c).abs()
}
