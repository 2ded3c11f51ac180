//! Exact planar geometry: Gaussian rationals, primitive integer directions,
//! the projection orders `<_θ`, Stokes and anti-Stokes directions, angular
//! intervals and closed half-planes.
//!
//! Directions are primitive integer vectors, so every predicate reduces to a
//! sign of an exact rational expression.

use std::cmp::Ordering;
use std::fmt;
use std::str::FromStr;

use num_bigint::BigInt;
use num_integer::Integer;
use num_traits::{One, Signed, Zero};
use thiserror::Error;

use crate::Q;

/// Errors raised by geometric constructors.
#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum GeometryError {
    #[error("exponent configuration is empty")]
    Empty,
    #[error("exponents {0} and {1} coincide")]
    Duplicate(usize, usize),
    #[error("zero vector has no direction")]
    ZeroDirection,
    #[error("cannot parse `{0}`")]
    Parse(String),
}

/// A point `re + i·im` with rational coordinates.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct GaussianRational {
    pub re: Q,
    pub im: Q,
}

impl GaussianRational {
    pub fn new(re: Q, im: Q) -> Self {
        GaussianRational { re, im }
    }

    pub fn from_ints(re: i64, im: i64) -> Self {
        GaussianRational::new(crate::q(re), crate::q(im))
    }

    pub fn zero() -> Self {
        GaussianRational::new(Q::zero(), Q::zero())
    }

    pub fn add(&self, other: &Self) -> Self {
        GaussianRational::new(&self.re + &other.re, &self.im + &other.im)
    }

    pub fn sub(&self, other: &Self) -> Self {
        GaussianRational::new(&self.re - &other.re, &self.im - &other.im)
    }

    pub fn scale(&self, s: &Q) -> Self {
        GaussianRational::new(&self.re * s, &self.im * s)
    }

    /// Euclidean inner product of the underlying vectors.
    pub fn dot(&self, other: &Self) -> Q {
        &self.re * &other.re + &self.im * &other.im
    }

    /// `self.re * other.im - self.im * other.re`.
    pub fn cross(&self, other: &Self) -> Q {
        &self.re * &other.im - &self.im * &other.re
    }

    /// Inner product with a direction vector.
    pub fn dot_dir(&self, d: &Direction) -> Q {
        self.combine(&d.x, &d.y)
    }

    /// `cross(d, self)` for a direction vector `d`.
    pub fn dir_cross(&self, d: &Direction) -> Q {
        self.combine(&-&d.y, &d.x)
    }

    /// `s·re + t·im` over one common denominator.
    fn combine(&self, s: &BigInt, t: &BigInt) -> Q {
        let (a, b) = (&self.re, &self.im);
        if a.denom() == b.denom() {
            Q::new(a.numer() * s + b.numer() * t, a.denom().clone())
        } else {
            Q::new(a.numer() * s * b.denom() + b.numer() * t * a.denom(), a.denom() * b.denom())
        }
    }

    pub fn max_abs_coord(&self) -> Q {
        let a = self.re.abs();
        let b = self.im.abs();
        if a > b {
            a
        } else {
            b
        }
    }

    pub fn is_zero(&self) -> bool {
        self.re.is_zero() && self.im.is_zero()
    }
}

impl fmt::Display for GaussianRational {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "({}, {})", self.re, self.im)
    }
}

/// A direction in the plane, stored as a primitive integer vector.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct Direction {
    x: BigInt,
    y: BigInt,
}

impl Direction {
    /// The direction of `(x, y)`; `None` for the zero vector.
    pub fn new(x: i64, y: i64) -> Option<Self> {
        Direction::from_bigints(BigInt::from(x), BigInt::from(y))
    }

    pub fn from_bigints(x: BigInt, y: BigInt) -> Option<Self> {
        if x.is_zero() && y.is_zero() {
            return None;
        }
        let g = x.gcd(&y);
        Some(Direction { x: x / &g, y: y / &g })
    }

    /// The direction of a nonzero rational vector.
    pub fn from_vector(v: &GaussianRational) -> Option<Self> {
        let l = v.re.denom().lcm(v.im.denom());
        let x = (&v.re * Q::from_integer(l.clone())).to_integer();
        let y = (&v.im * Q::from_integer(l)).to_integer();
        Direction::from_bigints(x, y)
    }

    pub fn x(&self) -> &BigInt {
        &self.x
    }

    pub fn y(&self) -> &BigInt {
        &self.y
    }

    pub fn neg(&self) -> Self {
        Direction { x: -&self.x, y: -&self.y }
    }

    /// Rotation by a quarter turn counterclockwise.
    pub fn rot90(&self) -> Self {
        Direction { x: -&self.y, y: self.x.clone() }
    }

    /// Rotation by a quarter turn clockwise.
    pub fn rot_neg90(&self) -> Self {
        Direction { x: self.y.clone(), y: -&self.x }
    }

    pub fn as_point(&self) -> GaussianRational {
        GaussianRational::new(Q::from_integer(self.x.clone()), Q::from_integer(self.y.clone()))
    }

    pub fn cross(&self, other: &Direction) -> BigInt {
        &self.x * &other.y - &self.y * &other.x
    }

    pub fn dot(&self, other: &Direction) -> BigInt {
        &self.x * &other.x + &self.y * &other.y
    }

    pub fn norm_sq(&self) -> BigInt {
        self.dot(self)
    }

    /// `max(|x|, |y|)`.
    pub fn norm_inf(&self) -> BigInt {
        let a = self.x.abs();
        let b = self.y.abs();
        if a > b {
            a
        } else {
            b
        }
    }

    /// `|x| + |y|`.
    pub fn norm_one(&self) -> BigInt {
        self.x.abs() + self.y.abs()
    }

    /// Which half-turn of the circle, measured counterclockwise from `r`,
    /// contains `self`: 0 for angles in `[0, π)`, 1 for `[π, 2π)`.
    fn half_from(&self, r: &Direction) -> u8 {
        let c = r.cross(self);
        if c.is_positive() || (c.is_zero() && r.dot(self).is_positive()) {
            0
        } else {
            1
        }
    }
}

impl fmt::Display for Direction {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}/{}", self.x, self.y)
    }
}

impl FromStr for Direction {
    type Err = GeometryError;

    /// Parses `"x/y"` with integer components.
    fn from_str(s: &str) -> Result<Self, Self::Err> {
        let bad = || GeometryError::Parse(s.to_string());
        let (a, b) = s.split_once('/').ok_or_else(bad)?;
        let x: BigInt = a.trim().parse().map_err(|_| bad())?;
        let y: BigInt = b.trim().parse().map_err(|_| bad())?;
        Direction::from_bigints(x, y).ok_or(GeometryError::ZeroDirection)
    }
}

/// Compares the counterclockwise angles of `a` and `b` measured from `r`,
/// each taken in `[0, 2π)`.
pub fn ccw_cmp(r: &Direction, a: &Direction, b: &Direction) -> Ordering {
    let ha = a.half_from(r);
    let hb = b.half_from(r);
    if ha != hb {
        return ha.cmp(&hb);
    }
    let c = a.cross(b);
    if c.is_positive() {
        Ordering::Less
    } else if c.is_negative() {
        Ordering::Greater
    } else {
        Ordering::Equal
    }
}

/// Sorts directions counterclockwise starting at `r` (inclusive) and removes
/// duplicates.
pub fn sort_circular(mut dirs: Vec<Direction>, r: &Direction) -> Vec<Direction> {
    dirs.sort_by(|a, b| ccw_cmp(r, a, b));
    dirs.dedup();
    dirs
}

/// Whether `d` lies in the open counterclockwise arc from `start` to `end`.
/// When `start == end` the arc is the whole circle minus `start`.
pub fn in_open_arc(d: &Direction, start: &Direction, end: &Direction) -> bool {
    if d == start {
        return false;
    }
    if start == end {
        return true;
    }
    ccw_cmp(start, d, end) == Ordering::Less
}

/// Whether `d` lies in the half-open counterclockwise arc `[start, end)`.
pub fn in_half_open_arc(d: &Direction, start: &Direction, end: &Direction) -> bool {
    d == start || (d != end && in_open_arc(d, start, end))
}

/// Outcome of comparing two points along a direction.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub enum OrderCmp {
    Less,
    OnLine,
    Greater,
}

/// `a <_u b` iff `dot(b - a, u) > 0`.
pub fn cmp_order(a: &GaussianRational, b: &GaussianRational, u: &Direction) -> OrderCmp {
    let s = b.sub(a).dot_dir(u);
    if s.is_positive() {
        OrderCmp::Less
    } else if s.is_negative() {
        OrderCmp::Greater
    } else {
        OrderCmp::OnLine
    }
}

/// A finite nonempty set of pairwise distinct exponents `c_1..c_n`.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct ExponentConfig {
    points: Vec<GaussianRational>,
}

impl ExponentConfig {
    pub fn new(points: Vec<GaussianRational>) -> Result<Self, GeometryError> {
        if points.is_empty() {
            return Err(GeometryError::Empty);
        }
        for i in 0..points.len() {
            for j in (i + 1)..points.len() {
                if points[i] == points[j] {
                    return Err(GeometryError::Duplicate(i, j));
                }
            }
        }
        Ok(ExponentConfig { points })
    }

    pub fn len(&self) -> usize {
        self.points.len()
    }

    pub fn is_empty(&self) -> bool {
        self.points.is_empty()
    }

    pub fn points(&self) -> &[GaussianRational] {
        &self.points
    }

    pub fn get(&self, i: usize) -> &GaussianRational {
        &self.points[i]
    }

    pub fn index_of(&self, z: &GaussianRational) -> Option<usize> {
        self.points.iter().position(|c| c == z)
    }

    pub fn max_abs_coord(&self) -> Q {
        self.points
            .iter()
            .map(|c| c.max_abs_coord())
            .max()
            .unwrap_or_else(Q::zero)
    }

    /// Centroid of the exponents.
    pub fn centroid(&self) -> GaussianRational {
        let mut s = GaussianRational::zero();
        for c in &self.points {
            s = s.add(c);
        }
        s.scale(&Q::new(BigInt::one(), BigInt::from(self.points.len())))
    }

    /// Indices sorted ascending by `<_u`; ties keep index order.
    pub fn sorted_by(&self, u: &Direction) -> Vec<usize> {
        let mut idx: Vec<usize> = (0..self.len()).collect();
        idx.sort_by(|&a, &b| {
            let da = self.points[a].dot_dir(u);
            let db = self.points[b].dot_dir(u);
            da.cmp(&db).then(a.cmp(&b))
        });
        idx
    }
}

fn east() -> Direction {
    Direction::new(1, 0).expect("nonzero")
}

/// Directions where two exponents have equal projection, sorted
/// counterclockwise from `(1, 0)`.
pub fn stokes_directions(cfg: &ExponentConfig) -> Vec<Direction> {
    let mut out = Vec::new();
    let pts = cfg.points();
    for i in 0..pts.len() {
        for j in (i + 1)..pts.len() {
            let d = Direction::from_vector(&pts[i].sub(&pts[j])).expect("distinct").rot90();
            out.push(d.neg());
            out.push(d);
        }
    }
    sort_circular(out, &east())
}

/// Directions parallel to a difference of two exponents, sorted
/// counterclockwise from `(1, 0)`.
pub fn anti_stokes_directions(cfg: &ExponentConfig) -> Vec<Direction> {
    let mut out = Vec::new();
    let pts = cfg.points();
    for i in 0..pts.len() {
        for j in (i + 1)..pts.len() {
            let d = Direction::from_vector(&pts[i].sub(&pts[j])).expect("distinct");
            out.push(d.neg());
            out.push(d);
        }
    }
    sort_circular(out, &east())
}

pub fn is_stokes(cfg: &ExponentConfig, d: &Direction) -> bool {
    let pts = cfg.points();
    (0..pts.len()).any(|i| ((i + 1)..pts.len()).any(|j| pts[i].sub(&pts[j]).dot_dir(d).is_zero()))
}

pub fn is_anti_stokes(cfg: &ExponentConfig, d: &Direction) -> bool {
    let p = d.as_point();
    let pts = cfg.points();
    (0..pts.len()).any(|i| ((i + 1)..pts.len()).any(|j| p.cross(&pts[i].sub(&pts[j])).is_zero()))
}

/// Directions at which the boundary line through `xi` perpendicular to the
/// direction meets an exponent other than `xi`; sorted from `(1, 0)`.
pub fn crossing_directions(xi: &GaussianRational, cfg: &ExponentConfig) -> Vec<Direction> {
    let mut out = Vec::new();
    for c in cfg.points() {
        if let Some(d) = Direction::from_vector(&c.sub(xi)) {
            let p = d.rot90();
            out.push(p.neg());
            out.push(p);
        }
    }
    sort_circular(out, &east())
}

/// An open counterclockwise arc of directions from `start` to `end`.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct AngularInterval {
    pub start: Direction,
    pub end: Direction,
}

impl AngularInterval {
    pub fn new(start: Direction, end: Direction) -> Self {
        AngularInterval { start, end }
    }

    /// The open half-circle centred on `theta`.
    pub fn centered(theta: &Direction) -> Self {
        AngularInterval::new(theta.rot_neg90(), theta.rot90())
    }

    pub fn contains(&self, d: &Direction) -> bool {
        in_open_arc(d, &self.start, &self.end)
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub enum IntervalClass {
    /// Exactly one Stokes direction of every pair.
    Good,
    /// At most one Stokes direction of every pair.
    Small,
    Neither,
}

pub fn classify_interval(iv: &AngularInterval, cfg: &ExponentConfig) -> IntervalClass {
    let pts = cfg.points();
    let mut good = true;
    for i in 0..pts.len() {
        for j in (i + 1)..pts.len() {
            let d = Direction::from_vector(&pts[i].sub(&pts[j])).expect("distinct").rot90();
            let k = [d.clone(), d.neg()].iter().filter(|s| iv.contains(s)).count();
            if k > 1 {
                return IntervalClass::Neither;
            }
            good &= k == 1;
        }
    }
    if good {
        IntervalClass::Good
    } else {
        IntervalClass::Small
    }
}

/// A deterministic direction strictly inside the open counterclockwise arc
/// from `a` to `b` (the whole circle minus `a` when `a == b`).
pub fn interior_direction(a: &Direction, b: &Direction) -> Direction {
    if a == b {
        return a.neg();
    }
    let c = a.cross(b);
    if c.is_zero() {
        return a.rot90();
    }
    let sx = &a.x + &b.x;
    let sy = &a.y + &b.y;
    let s = Direction::from_bigints(sx, sy).expect("non-antipodal");
    if c.is_positive() {
        s
    } else {
        s.neg()
    }
}

/// A half-plane `{z : dot(z - anchor, normal) >= 0}` (or `> 0` when open).
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct HalfPlane {
    pub anchor: GaussianRational,
    pub normal: Direction,
    pub closed: bool,
}

impl HalfPlane {
    pub fn closed(anchor: GaussianRational, normal: Direction) -> Self {
        HalfPlane { anchor, normal, closed: true }
    }

    /// Whether `z` belongs to the half-plane.
    pub fn contains(&self, z: &GaussianRational) -> bool {
        match halfplane_side(self, z) {
            Side::Inside => true,
            Side::Boundary => self.closed,
            Side::Outside => false,
        }
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub enum Side {
    Inside,
    Boundary,
    Outside,
}

pub fn halfplane_side(h: &HalfPlane, z: &GaussianRational) -> Side {
    let s = z.sub(&h.anchor).dot_dir(&h.normal);
    if s.is_positive() {
        Side::Inside
    } else if s.is_zero() {
        Side::Boundary
    } else {
        Side::Outside
    }
}

/// The segment `[a, b]` passes through the apex of a ray.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct ThroughApex;

/// Whether `p` lies on the closed segment `[a, b]`.
pub fn on_segment(p: &GaussianRational, a: &GaussianRational, b: &GaussianRational) -> bool {
    let ab = b.sub(a);
    let ap = p.sub(a);
    ab.cross(&ap).is_zero() && !ap.dot(&p.sub(b)).is_positive()
}

/// Signed crossing of the segment `[a, b]` with the ray `apex + t·u`, `t > 0`.
///
/// Points on the ray's supporting line are attributed to its left side, so a
/// polyline whose vertices touch a ray is still classified consistently.
/// The sign is `+1` for a right-to-left passage (counterclockwise around the
/// apex) and `-1` otherwise.
pub fn segment_ray_crossing(
    a: &GaussianRational,
    b: &GaussianRational,
    apex: &GaussianRational,
    u: &Direction,
) -> Result<Option<i8>, ThroughApex> {
    if on_segment(apex, a, b) {
        return Err(ThroughApex);
    }
    let up = u.as_point();
    let ca = up.cross(&a.sub(apex));
    let cb = up.cross(&b.sub(apex));
    let la = !ca.is_negative();
    let lb = !cb.is_negative();
    if la == lb {
        return Ok(None);
    }
    let lambda = &ca / (&ca - &cb);
    let x = a.add(&b.sub(a).scale(&lambda));
    let t = x.sub(apex).dot(&up);
    if t.is_positive() {
        Ok(Some(if lb { 1 } else { -1 }))
    } else {
        Ok(None)
    }
}

/// The point `R·d / max(|d_x|, |d_y|)` on the boundary of the square
/// `[-R, R]²` in direction `d`.
pub fn square_point(r: &Q, d: &Direction) -> GaussianRational {
    let s = r / Q::from_integer(d.norm_inf());
    d.as_point().scale(&s)
}

fn corner_dirs() -> [Direction; 4] {
    [
        Direction::new(1, 1).expect("nonzero"),
        Direction::new(-1, 1).expect("nonzero"),
        Direction::new(-1, -1).expect("nonzero"),
        Direction::new(1, -1).expect("nonzero"),
    ]
}

/// Vertices of the counterclockwise path along the boundary of `[-R, R]²`
/// from the point in direction `from` to the point in direction `to`.
/// When `from == to` the path is the single point.
pub fn square_arc(r: &Q, from: &Direction, to: &Direction) -> Vec<GaussianRational> {
    let mut v = vec![square_point(r, from)];
    if from == to {
        return v;
    }
    let mut corners: Vec<Direction> =
        corner_dirs().into_iter().filter(|c| in_open_arc(c, from, to)).collect();
    corners.sort_by(|a, b| ccw_cmp(from, a, b));
    v.extend(corners.iter().map(|c| square_point(r, c)));
    v.push(square_point(r, to));
    v
}

/// Vertices of the full counterclockwise loop around `[-R, R]²` starting and
/// ending at the point in direction `from`.
pub fn square_loop(r: &Q, from: &Direction) -> Vec<GaussianRational> {
    let mut corners: Vec<Direction> =
        corner_dirs().into_iter().filter(|c| c != from).collect();
    corners.sort_by(|a, b| ccw_cmp(from, a, b));
    let mut v = vec![square_point(r, from)];
    v.extend(corners.iter().map(|c| square_point(r, c)));
    v.push(square_point(r, from));
    v
}
