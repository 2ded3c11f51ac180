//! Parallel transport of the local system on the punctured plane.
//!
//! Coordinates live on the plane cut along the rays `c_i + t·u`, `t > 0`, with
//! `u` the presentation's cut direction. Crossing the ray of `c_i` from its
//! right side to its left side (a counterclockwise passage around `c_i`)
//! multiplies coordinates by `elementary_matrix(i)`; the opposite passage
//! multiplies by its inverse. Points on a ray's supporting line belong to its
//! left side. A segment that starts or ends at `c_k` ignores the ray of `c_k`,
//! since the stalk there is fixed by the local monodromy.
//!
//! The fibre at the base point `square_point(R0, base_direction)` is the
//! reference fibre `V`. A point `x` beyond every exponent in direction `θ`
//! reaches it along the segment to `square_point(R0, θ)` followed by the
//! counterclockwise square arc back to the base point.

use std::collections::HashMap;
use std::sync::Mutex;

use num_traits::{One, Signed, Zero};
use thiserror::Error;

use crate::exactplane::{
    in_half_open_arc, segment_ray_crossing, square_arc, square_point, Direction, GaussianRational,
    HalfPlane,
};
use crate::linalg::{column_factor_inverse, BlockStructure, MatQ, Subspace};
use crate::presentation::{crossing_param, Constr0Presentation};
use crate::{q, Q};

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum TransportError {
    #[error("degenerate path: {0}")]
    DegeneratePath(String),
}

/// A path given by its vertices; consecutive vertices are distinct.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct Polyline {
    vertices: Vec<GaussianRational>,
}

impl Polyline {
    /// `None` when empty or when two consecutive vertices coincide.
    pub fn new(vertices: Vec<GaussianRational>) -> Option<Self> {
        if vertices.is_empty() || vertices.windows(2).any(|w| w[0] == w[1]) {
            return None;
        }
        Some(Polyline { vertices })
    }

    pub fn from_ints(pts: &[(i64, i64)]) -> Option<Self> {
        Polyline::new(pts.iter().map(|&(a, b)| GaussianRational::from_ints(a, b)).collect())
    }

    pub fn vertices(&self) -> &[GaussianRational] {
        &self.vertices
    }

    pub fn reversed(&self) -> Polyline {
        let mut v = self.vertices.clone();
        v.reverse();
        Polyline { vertices: v }
    }

    /// Concatenation; the last vertex of `self` must be the first of `other`.
    pub fn concat(&self, other: &Polyline) -> Option<Polyline> {
        if self.vertices.last() != other.vertices.first() {
            return None;
        }
        let mut v = self.vertices.clone();
        v.extend(other.vertices[1..].iter().cloned());
        Some(Polyline { vertices: v })
    }
}

/// Signed cut crossings along `poly`, in traversal order.
pub fn segment_crossings(
    p: &Constr0Presentation,
    poly: &Polyline,
) -> Result<Vec<(usize, i8)>, TransportError> {
    Transport::new(p).crossings(poly.vertices(), &[])
}

/// Transport matrix along `poly`, first crossing applied first.
pub fn transport_matrix(p: &Constr0Presentation, poly: &Polyline) -> Result<MatQ, TransportError> {
    Transport::new(p).matrix(poly.vertices(), &[])
}

/// Sections over a closed half-plane, as a subspace of the reference fibre.
pub fn halfplane_sections(p: &Constr0Presentation, h: &HalfPlane) -> Result<Subspace, TransportError> {
    Transport::new(p).halfplane_sections(h)
}

/// A crossing word: ray indices with signs, first crossing first.
pub type Word = Vec<(usize, i8)>;

/// The word of the reversed path.
pub fn inverse_word(word: &[(usize, i8)]) -> Word {
    word.iter().rev().map(|&(k, s)| (k, -s)).collect()
}

/// Per-direction results cached on a [`Transport`].
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub(crate) enum Memo {
    Splitting,
    EmbeddedStalks,
}

/// Cached transport data for one presentation.
#[derive(Debug)]
pub struct Transport {
    p: Constr0Presentation,
    blocks: BlockStructure,
    cols: Vec<MatQ>,
    inv_cols: Vec<MatQ>,
    radius: Q,
    monodromy: MatQ,
    monodromy_inv: MatQ,
    /// `cross(u, c_k)` for the cut direction `u`.
    ray_keys: Vec<Q>,
    arcs: Mutex<HashMap<Direction, Word>>,
    sections: Mutex<HashMap<HalfPlane, Subspace>>,
    memo: Mutex<HashMap<(Memo, Direction), Vec<Subspace>>>,
}

impl Clone for Transport {
    fn clone(&self) -> Self {
        Transport {
            p: self.p.clone(),
            blocks: self.blocks.clone(),
            cols: self.cols.clone(),
            inv_cols: self.inv_cols.clone(),
            radius: self.radius.clone(),
            monodromy: self.monodromy.clone(),
            monodromy_inv: self.monodromy_inv.clone(),
            ray_keys: self.ray_keys.clone(),
            arcs: Mutex::new(self.arcs.lock().expect("arc cache").clone()),
            sections: Mutex::new(self.sections.lock().expect("section cache").clone()),
            memo: Mutex::new(self.memo.lock().expect("memo").clone()),
        }
    }
}

impl Transport {
    /// Precomputes elementary columns; `p` must be valid.
    pub fn new(p: &Constr0Presentation) -> Transport {
        let blocks = p.blocks();
        let cols: Vec<MatQ> = (0..p.n()).map(|k| p.elementary_column(k)).collect();
        let inv_cols = (0..p.n())
            .map(|k| {
                let f = column_factor_inverse(&blocks, k, &cols[k]).expect("invertible diagonal");
                f.block(0, blocks.total(), blocks.offset(k), blocks.offset(k) + blocks.dim(k))
            })
            .collect();
        let monodromy = p.total_monodromy();
        let monodromy_inv = monodromy.inverse().expect("invertible monodromy");
        Transport {
            p: p.clone(),
            blocks,
            cols,
            inv_cols,
            radius: p.frame_radius(),
            monodromy,
            monodromy_inv,
            ray_keys: p.exponents.iter().map(|c| c.dir_cross(&p.cut_direction)).collect(),
            arcs: Mutex::new(HashMap::new()),
            sections: Mutex::new(HashMap::new()),
            memo: Mutex::new(HashMap::new()),
        }
    }

    pub fn presentation(&self) -> &Constr0Presentation {
        &self.p
    }

    pub fn blocks(&self) -> &BlockStructure {
        &self.blocks
    }

    pub fn dim(&self) -> usize {
        self.blocks.total()
    }

    /// Radius `R0` of the square carrying the base point.
    pub fn radius(&self) -> &Q {
        &self.radius
    }

    /// The total monodromy `M` around the big counterclockwise loop.
    pub fn monodromy(&self) -> &MatQ {
        &self.monodromy
    }

    pub fn monodromy_inv(&self) -> &MatQ {
        &self.monodromy_inv
    }

    /// Signed crossings along the vertex path. The apexes of the rays listed
    /// in `ignore` may be vertices; such a ray is skipped on the segments
    /// ending at its apex.
    pub fn crossings(
        &self,
        vertices: &[GaussianRational],
        ignore: &[usize],
    ) -> Result<Vec<(usize, i8)>, TransportError> {
        let u = &self.p.cut_direction;
        let mut out = Vec::new();
        for w in vertices.windows(2) {
            let mut hits: Vec<(Q, usize, i8)> = Vec::new();
            let ka = w[0].dir_cross(u);
            let kb = w[1].dir_cross(u);
            for (k, c) in self.p.exponents.iter().enumerate() {
                // Both endpoints strictly on one side of the ray's line.
                let key = &self.ray_keys[k];
                if ka.cmp(key) == kb.cmp(key) && ka != *key {
                    continue;
                }
                if ignore.contains(&k) && (w[0] == *c || w[1] == *c) {
                    continue;
                }
                match segment_ray_crossing(&w[0], &w[1], c, u) {
                    Err(_) => {
                        return Err(TransportError::DegeneratePath(format!(
                            "segment {} -> {} meets the singular point {}",
                            w[0], w[1], c
                        )))
                    }
                    Ok(Some(s)) => hits.push((crossing_param(&w[0], &w[1], c, u), k, s)),
                    Ok(None) => {}
                }
            }
            hits.sort_by(|a, b| a.0.cmp(&b.0));
            out.extend(hits.into_iter().map(|(_, k, s)| (k, s)));
        }
        if let Some(v) = vertices.iter().find(|v| {
            self.p.exponents.iter().enumerate().any(|(k, c)| !ignore.contains(&k) && *v == c)
        }) {
            return Err(TransportError::DegeneratePath(format!("vertex {v} is a singular point")));
        }
        Ok(out)
    }

    /// `E_k^{±1}·x`, touching only block-row `k` of `x`.
    pub fn apply_elementary(&self, k: usize, sign: i8, x: &MatQ) -> MatQ {
        let mut out = x.clone();
        self.apply_elementary_mut(k, sign, &mut out);
        out
    }

    fn apply_elementary_mut(&self, k: usize, sign: i8, x: &mut MatQ) {
        let r = self.blocks.range(k);
        let col = if sign > 0 { &self.cols[k] } else { &self.inv_cols[k] };
        let xk = x.block(r.start, r.end, 0, x.cols());
        for i in 0..x.rows() {
            let inside = r.contains(&i);
            for j in 0..x.cols() {
                let mut acc = if inside { Q::zero() } else { x[(i, j)].clone() };
                for t in 0..r.len() {
                    let (a, b) = (&col[(i, t)], &xk[(t, j)]);
                    if !a.is_zero() && !b.is_zero() {
                        acc += a * b;
                    }
                }
                x[(i, j)] = acc;
            }
        }
    }

    /// Applies a crossing word to `x`, first crossing first.
    pub fn apply_word(&self, word: &[(usize, i8)], x: &MatQ) -> MatQ {
        let mut out = x.clone();
        for &(k, s) in word {
            self.apply_elementary_mut(k, s, &mut out);
        }
        out
    }

    /// `y·W` for the transport matrix `W` of `word`.
    pub fn apply_word_right(&self, word: &[(usize, i8)], y: &MatQ) -> MatQ {
        let mut out = y.clone();
        for &(k, s) in word.iter().rev() {
            let r = self.blocks.range(k);
            let col = if s > 0 { &self.cols[k] } else { &self.inv_cols[k] };
            let yk = out.mul(col);
            out.set_block(0, r.start, &yk);
        }
        out
    }

    /// Transport matrix along the vertex path; see [`Transport::crossings`].
    pub fn matrix(&self, vertices: &[GaussianRational], ignore: &[usize]) -> Result<MatQ, TransportError> {
        let word = self.crossings(vertices, ignore)?;
        Ok(self.apply_word(&word, &MatQ::identity(self.dim())))
    }

    /// The point of the base square in direction `theta`.
    pub fn far_point(&self, theta: &Direction) -> GaussianRational {
        square_point(&self.radius, theta)
    }

    /// Whether every exponent lies strictly below `x` in direction `theta`.
    pub fn beyond_all(&self, x: &GaussianRational, theta: &Direction) -> bool {
        let t = x.dot_dir(theta);
        self.p.exponents.iter().all(|c| c.dot_dir(theta) < t)
    }

    /// Transport along the counterclockwise square arc from direction `theta`
    /// to the base direction.
    pub fn arc_to_base(&self, theta: &Direction) -> MatQ {
        self.apply_word(&self.arc_word(theta), &MatQ::identity(self.dim()))
    }

    /// Crossing word of the arc in [`Transport::arc_to_base`].
    pub fn arc_word(&self, theta: &Direction) -> Word {
        if let Some(w) = self.arcs.lock().expect("arc cache").get(theta) {
            return w.clone();
        }
        let arc = square_arc(&self.radius, theta, &self.p.base_direction);
        let w = self.crossings(&arc, &[]).expect("the base square avoids every singular point");
        self.arcs.lock().expect("arc cache").insert(theta.clone(), w.clone());
        w
    }

    /// Transport from a point `x` beyond every exponent in direction `theta`
    /// into the reference fibre.
    pub fn far_to_base(&self, x: &GaussianRational, theta: &Direction) -> Result<MatQ, TransportError> {
        Ok(self.apply_word(&self.far_word(x, theta)?, &MatQ::identity(self.dim())))
    }

    /// Crossing word of the path in [`Transport::far_to_base`].
    pub fn far_word(&self, x: &GaussianRational, theta: &Direction) -> Result<Word, TransportError> {
        if !self.beyond_all(x, theta) {
            return Err(TransportError::DegeneratePath(format!(
                "{x} is not beyond every exponent in direction {theta}"
            )));
        }
        let fp = self.far_point(theta);
        let mut w = if *x == fp { Vec::new() } else { self.crossings(&[x.clone(), fp], &[])? };
        w.extend(self.arc_word(theta));
        Ok(w)
    }

    /// Change from reference coordinates reached through direction `alpha` to
    /// those reached through `beta`, moving counterclockwise from `alpha` to
    /// `beta`: the total monodromy when the base direction lies in
    /// `[alpha, beta)`, otherwise nothing.
    pub fn twist(&self, alpha: &Direction, beta: &Direction) -> Option<&MatQ> {
        if alpha != beta && in_half_open_arc(&self.p.base_direction, alpha, beta) {
            Some(&self.monodromy)
        } else {
            None
        }
    }

    /// Change from reference coordinates reached through `from` to those
    /// reached through `to`, moving along the shorter arc; the two directions
    /// must not be opposite.
    pub fn chart_change(&self, from: &Direction, to: &Direction) -> Option<&MatQ> {
        let c = from.cross(to);
        if c.is_positive() {
            self.twist(from, to)
        } else if c.is_negative() && in_half_open_arc(&self.p.base_direction, to, from) {
            Some(&self.monodromy_inv)
        } else {
            None
        }
    }

    /// `f()`, cached under `(kind, theta)` when it succeeds.
    pub(crate) fn memoized<E>(
        &self,
        kind: Memo,
        theta: &Direction,
        f: impl FnOnce() -> Result<Vec<Subspace>, E>,
    ) -> Result<Vec<Subspace>, E> {
        let key = (kind, theta.clone());
        if let Some(v) = self.memo.lock().expect("memo").get(&key) {
            return Ok(v.clone());
        }
        let v = f()?;
        self.memo.lock().expect("memo").insert(key, v.clone());
        Ok(v)
    }

    /// Sections over the closed half-plane `h`, in the reference fibre.
    pub fn halfplane_sections(&self, h: &HalfPlane) -> Result<Subspace, TransportError> {
        if let Some(s) = self.sections.lock().expect("section cache").get(h) {
            return Ok(s.clone());
        }
        let s = self.compute_sections(h)?;
        self.sections.lock().expect("section cache").insert(h.clone(), s.clone());
        Ok(s)
    }

    fn compute_sections(&self, h: &HalfPlane) -> Result<Subspace, TransportError> {
        let nu = &h.normal;
        let m = self
            .p
            .exponents
            .iter()
            .map(|c| c.max_abs_coord())
            .chain(std::iter::once(h.anchor.max_abs_coord()))
            .max()
            .unwrap_or_else(Q::zero);
        let r = Q::one() + m * q(2);
        let qp = square_point(&r, nu);
        let n_tot = self.dim();
        let mut rows: Vec<Vec<Q>> = Vec::new();
        for (k, c) in self.p.exponents.iter().enumerate() {
            if !h.contains(c) {
                continue;
            }
            let word = self.path_inside(h, &qp, k)?;
            let r = self.blocks.range(k);
            let pk = MatQ::identity(n_tot).block(r.start, r.end, 0, n_tot);
            let mk = self.apply_word_right(&word, &pk);
            rows.extend((0..mk.rows()).map(|i| mk.row(i)));
        }
        let local = if rows.is_empty() {
            Subspace::full(n_tot)
        } else {
            Subspace::span(&MatQ::from_rows(rows).kernel())
        };
        let word = self.far_word(&qp, nu)?;
        Ok(Subspace::span(&self.apply_word(&word, local.basis())))
    }

    /// The crossing word of a path from `start` to `c_k` inside `h` that
    /// meets no other singular point.
    fn path_inside(
        &self,
        h: &HalfPlane,
        start: &GaussianRational,
        k: usize,
    ) -> Result<Vec<(usize, i8)>, TransportError> {
        let target = self.p.exponents[k].clone();
        let straight = vec![start.clone(), target.clone()];
        if let Ok(word) = self.crossings(&straight, &[k]) {
            return Ok(word);
        }
        let mid = start.add(&target).scale(&crate::qf(1, 2));
        let perp = Direction::from_vector(&target.sub(start)).expect("distinct").rot90().as_point();
        let mut eps = Q::one();
        for _ in 0..200 {
            for sgn in [1, -1] {
                let w = mid.add(&perp.scale(&(&eps * q(sgn))));
                if h.contains(&w) {
                    let path = vec![start.clone(), w, target.clone()];
                    if let Ok(word) = self.crossings(&path, &[k]) {
                        return Ok(word);
                    }
                }
            }
            eps /= q(2);
        }
        Err(TransportError::DegeneratePath(format!("no clean path to {target}")))
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn e2() -> Constr0Presentation {
        Constr0Presentation::two_point_example()
    }

    #[test]
    fn crossings_below_both_points() {
        let poly = Polyline::from_ints(&[(-1, -1), (2, -1)]).unwrap();
        assert_eq!(segment_crossings(&e2(), &poly).unwrap(), vec![(0, 1), (1, 1)]);
        assert_eq!(
            transport_matrix(&e2(), &poly).unwrap(),
            MatQ::from_i64(&[&[7, 1], &[15, 3]])
        );
        let above = Polyline::from_ints(&[(-1, 1), (2, 1)]).unwrap();
        assert!(segment_crossings(&e2(), &above).unwrap().is_empty());
        assert!(transport_matrix(&e2(), &above).unwrap().is_identity());
    }

    #[test]
    fn small_loop_around_first_point() {
        let h = crate::qf(1, 2);
        let z = |a: &Q, b: &Q| GaussianRational::new(a.clone(), b.clone());
        let mh = -h.clone();
        let poly = Polyline::new(vec![z(&mh, &mh), z(&h, &mh), z(&h, &h), z(&mh, &h), z(&mh, &mh)]).unwrap();
        assert_eq!(segment_crossings(&e2(), &poly).unwrap(), vec![(0, 1)]);
        assert_eq!(transport_matrix(&e2(), &poly).unwrap(), e2().elementary_matrix(0));
    }

    #[test]
    fn through_singular_point_is_degenerate() {
        let poly = Polyline::from_ints(&[(-1, 0), (2, 0)]).unwrap();
        assert!(matches!(
            segment_crossings(&e2(), &poly),
            Err(TransportError::DegeneratePath(_))
        ));
    }

    #[test]
    fn halfplane_examples() {
        let p = e2();
        let z = |a, b| GaussianRational::from_ints(a, b);
        let d = |x, y| Direction::new(x, y).unwrap();
        let both = HalfPlane::closed(z(-5, 0), d(1, 0));
        assert!(halfplane_sections(&p, &both).unwrap().is_zero());
        let neither = HalfPlane::closed(z(5, 0), d(1, 0));
        assert_eq!(halfplane_sections(&p, &neither).unwrap().dim(), 2);
        let left = HalfPlane::closed(GaussianRational::new(crate::qf(1, 2), Q::zero()), d(-1, 0));
        assert_eq!(halfplane_sections(&p, &left).unwrap().dim(), 1);
    }
}
