//! Stokes structures read off a presentation: filtration stalks, the cellular
//! model of `L_{<ξ}` on the circle and its cohomology, the splitting over the
//! good interval `I_θ`, and the passage between presentations and Stokes
//! data.
//!
//! Every subspace lives in the reference fibre `V`, reached from direction
//! `θ` through the counterclockwise square arc to the base direction. These
//! coordinates are continuous on the circle cut at the base direction;
//! crossing the cut counterclockwise multiplies them by the total monodromy.
//! Exponents in `I_θ` are listed in the order of their projections on `θ`
//! turned a quarter clockwise, which is the order near the start of `I_θ`.

use num_traits::{One, Zero};
use thiserror::Error;

use crate::exactplane::{
    ccw_cmp, crossing_directions, in_open_arc, interior_direction, is_anti_stokes, is_stokes,
    sort_circular, stokes_directions, Direction, GaussianRational, HalfPlane,
};
use crate::linalg::{block_lu, peel_factors, BlockStructure, LinalgError, MatQ, Subspace};
use crate::presentation::{Constr0Presentation, PresentationError};
use crate::transport::{Memo, Transport, TransportError};
use crate::Q;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum CostokesError {
    #[error(transparent)]
    Transport(#[from] TransportError),
    #[error(transparent)]
    Presentation(#[from] PresentationError),
    #[error("invalid subsheaf: {0}")]
    InvalidSubsheaf(String),
    #[error("split failure: {0}")]
    SplitFailure(String),
    #[error("singular pivot in block {0}")]
    SingularPivot(usize),
    #[error("bad direction: {0}")]
    BadDirection(String),
    #[error("invalid Stokes data: {0}")]
    InvalidStokesData(String),
}

impl From<LinalgError> for CostokesError {
    fn from(e: LinalgError) -> Self {
        match e {
            LinalgError::SingularPivot(k) => CostokesError::SingularPivot(k),
            other => CostokesError::InvalidStokesData(other.to_string()),
        }
    }
}

/// `L_{<ξ,θ}` (strict) or `L_{≤ξ,θ}` as a subspace of the reference fibre.
pub fn filtration_stalk(
    p: &Constr0Presentation,
    xi: &GaussianRational,
    theta: &Direction,
    strict: bool,
) -> Result<Subspace, CostokesError> {
    filtration_stalk_with(&Transport::new(p), xi, theta, strict)
}

pub fn filtration_stalk_with(
    t: &Transport,
    xi: &GaussianRational,
    theta: &Direction,
    strict: bool,
) -> Result<Subspace, CostokesError> {
    let anchor = if strict { xi.clone() } else { nudged_anchor(t.presentation(), xi, theta) };
    Ok(t.halfplane_sections(&HalfPlane::closed(anchor, theta.clone()))?)
}

/// `xi` moved along `theta` by half the smallest positive projection gap to
/// an exponent, so that exponents level with `xi` fall strictly below it.
fn nudged_anchor(p: &Constr0Presentation, xi: &GaussianRational, theta: &Direction) -> GaussianRational {
    let base = xi.dot_dir(theta);
    let gap = p
        .exponents
        .iter()
        .map(|c| c.dot_dir(theta) - &base)
        .filter(|g| g > &Q::zero())
        .min()
        .unwrap_or_else(Q::one);
    let norm = Q::from_integer(theta.norm_sq());
    xi.add(&theta.as_point().scale(&(gap / (norm * crate::q(2)))))
}

/// The sheaf `L_{<ξ}` on the circle as a cellular object: jump directions
/// `φ_1..φ_m` in counterclockwise order after the base direction, arc
/// subspaces `W_0..W_m` and point subspaces `P_1..P_m`.
///
/// `W_0` lies just after the base direction and `W_m` just before it, so the
/// two ends are glued by `W_0 = M·W_m`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct ArcSubsheaf {
    pub ambient: usize,
    pub wrap: MatQ,
    pub base_direction: Direction,
    pub jumps: Vec<Direction>,
    pub arcs: Vec<Subspace>,
    pub points: Vec<Subspace>,
}

pub fn build_arc_subsheaf(p: &Constr0Presentation, xi: &GaussianRational) -> Result<ArcSubsheaf, CostokesError> {
    build_arc_subsheaf_with(&Transport::new(p), xi)
}

pub fn build_arc_subsheaf_with(t: &Transport, xi: &GaussianRational) -> Result<ArcSubsheaf, CostokesError> {
    let p = t.presentation();
    let tb = &p.base_direction;
    let mut jumps = sort_circular(crossing_directions(xi, &p.cfg()), tb);
    if jumps.first() == Some(tb) {
        let first = jumps.remove(0);
        jumps.push(first);
    }
    let m = jumps.len();
    let mut arcs = Vec::with_capacity(m + 1);
    if m == 0 {
        arcs.push(filtration_stalk_with(t, xi, &interior_direction(tb, tb), true)?);
    } else {
        for k in 0..=m {
            let from = if k == 0 { tb } else { &jumps[k - 1] };
            let to = if k == m { tb } else { &jumps[k] };
            if from == to {
                // The last jump is the base direction itself: the final arc is
                // the first one seen from before the cut.
                arcs.push(arcs[0].image(t.monodromy_inv()));
            } else {
                arcs.push(filtration_stalk_with(t, xi, &interior_direction(from, to), true)?);
            }
        }
    }
    let points = jumps
        .iter()
        .map(|phi| filtration_stalk_with(t, xi, phi, true))
        .collect::<Result<Vec<_>, _>>()?;
    Ok(ArcSubsheaf {
        ambient: t.dim(),
        wrap: t.monodromy().clone(),
        base_direction: tb.clone(),
        jumps,
        arcs,
        points,
    })
}

/// Cohomology of the cellular complex `C⁰ → C¹`. `H⁰` is a subspace of `C⁰`
/// and `H¹ = C¹ / image`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct CircleCohomology {
    pub c0_dim: usize,
    pub c1_dim: usize,
    pub h0: Subspace,
    pub image: Subspace,
}

impl CircleCohomology {
    pub fn h0_dim(&self) -> usize {
        self.h0.dim()
    }

    pub fn h1_dim(&self) -> usize {
        self.c1_dim - self.image.dim()
    }
}

fn coords_in(w: &Subspace, v: &[Q], what: &str) -> Result<Vec<Q>, CostokesError> {
    w.coordinates(v)
        .ok_or_else(|| CostokesError::InvalidSubsheaf(format!("{what} is not contained in its arc")))
}

pub fn circle_cohomology(a: &ArcSubsheaf) -> Result<CircleCohomology, CostokesError> {
    let m = a.jumps.len();
    if a.arcs.len() != m + 1 || a.points.len() != m {
        return Err(CostokesError::InvalidSubsheaf("cell counts do not match the jumps".into()));
    }
    let wrap_last = a.arcs[m].image(&a.wrap);
    if wrap_last != a.arcs[0] {
        return Err(CostokesError::InvalidSubsheaf("the ends of the circle do not glue".into()));
    }
    if m == 0 {
        let w = &a.arcs[0];
        let b = w.basis();
        let mut cols = Vec::with_capacity(w.dim());
        for j in 0..w.dim() {
            let v = b.col(j);
            let mut c = coords_in(w, &a.wrap.mul_vec(&v), "monodromy image")?;
            c[j] -= Q::one();
            cols.push(c);
        }
        let d = MatQ::from_columns(w.dim(), &cols);
        return Ok(CircleCohomology {
            c0_dim: w.dim(),
            c1_dim: w.dim(),
            h0: Subspace::span(&d.kernel()),
            image: Subspace::span(&d),
        });
    }
    // C¹ cells: index 0 is the arc through the cut, in W_0 coordinates;
    // index k is the arc between jumps k and k + 1.
    let arc_dims: Vec<usize> = (0..m).map(|k| a.arcs[k].dim()).collect();
    let mut arc_off = vec![0; m];
    for k in 1..m {
        arc_off[k] = arc_off[k - 1] + arc_dims[k - 1];
    }
    let c1 = arc_dims.iter().sum::<usize>();
    let c0 = a.points.iter().map(|s| s.dim()).sum::<usize>();
    let mut cols: Vec<Vec<Q>> = Vec::with_capacity(c0);
    for k in 0..m {
        let pk = &a.points[k];
        for j in 0..pk.dim() {
            let v = pk.basis().col(j);
            let mut col = vec![Q::zero(); c1];
            let mut put = |cell: usize, coords: Vec<Q>, sign: bool| {
                for (i, x) in coords.into_iter().enumerate() {
                    if sign {
                        col[arc_off[cell] + i] += x;
                    } else {
                        col[arc_off[cell] + i] -= x;
                    }
                }
            };
            // Jump k ends arc k and starts arc k + 1; the arc through the cut
            // starts at the last jump, seen through the monodromy.
            put(k, coords_in(&a.arcs[k], &v, "point stalk")?, true);
            coords_in(&a.arcs[k + 1], &v, "point stalk")?;
            if k == m - 1 {
                put(0, coords_in(&a.arcs[0], &a.wrap.mul_vec(&v), "wrapped point stalk")?, false);
            } else {
                put(k + 1, coords_in(&a.arcs[k + 1], &v, "point stalk")?, false);
            }
            cols.push(col);
        }
    }
    let d = MatQ::from_columns(c1, &cols);
    Ok(CircleCohomology { c0_dim: c0, c1_dim: c1, h0: Subspace::span(&d.kernel()), image: Subspace::span(&d) })
}

/// The two sampling directions just inside the ends of `I_θ`.
fn interval_samples(p: &Constr0Presentation, theta: &Direction) -> Option<(Direction, Direction)> {
    let start = theta.rot_neg90();
    let end = theta.rot90();
    let inside: Vec<Direction> =
        stokes_directions(&p.cfg()).into_iter().filter(|s| in_open_arc(s, &start, &end)).collect();
    let first = inside.iter().min_by(|a, b| ccw_cmp(&start, a, b))?;
    let last = inside.iter().max_by(|a, b| ccw_cmp(&start, a, b))?;
    Some((interior_direction(&start, first), interior_direction(last, &end)))
}

/// The order of exponents near the start of `I_θ`.
pub fn interval_order(p: &Constr0Presentation, theta: &Direction) -> Vec<usize> {
    p.cfg().sorted_by(&theta.rot_neg90())
}

/// The unique splitting `V = ⊕ V_i` over `I_θ`, indexed like the exponents.
pub fn good_interval_splitting(p: &Constr0Presentation, theta: &Direction) -> Result<Vec<Subspace>, CostokesError> {
    good_interval_splitting_with(&Transport::new(p), theta)
}

pub fn good_interval_splitting_with(t: &Transport, theta: &Direction) -> Result<Vec<Subspace>, CostokesError> {
    t.memoized(Memo::Splitting, theta, || compute_splitting(t, theta))
}

fn compute_splitting(t: &Transport, theta: &Direction) -> Result<Vec<Subspace>, CostokesError> {
    let p = t.presentation();
    if is_anti_stokes(&p.cfg(), theta) {
        return Err(CostokesError::BadDirection(format!("{theta} is anti-Stokes")));
    }
    let n = p.n();
    if n == 1 {
        return Ok(vec![Subspace::full(t.dim())]);
    }
    let (ta, te) = interval_samples(p, theta).expect("every pair has a Stokes direction in I_θ");
    let mut lower = Vec::with_capacity(n);
    let mut upper = Vec::with_capacity(n);
    for c in &p.exponents {
        let mut a = filtration_stalk_with(t, c, &ta, false)?;
        if let Some(m) = t.chart_change(&ta, theta) {
            a = a.image(m);
        }
        let mut b = filtration_stalk_with(t, c, &te, false)?;
        if let Some(m) = t.chart_change(&te, theta) {
            b = b.image(m);
        }
        lower.push(a);
        upper.push(b);
    }
    let v: Vec<Subspace> =
        (0..n).map(|i| lower[i].intersect(&upper[i]).expect("same ambient")).collect();
    for i in 0..n {
        if v[i].dim() != p.dims[i] {
            return Err(CostokesError::SplitFailure(format!(
                "piece {} has dimension {}, expected {}",
                i + 1,
                v[i].dim(),
                p.dims[i]
            )));
        }
    }
    let mut acc = Subspace::zero(t.dim());
    for k in interval_order(p, theta) {
        acc = acc.sum(&v[k]).expect("same ambient");
        if acc != lower[k] {
            return Err(CostokesError::SplitFailure(format!(
                "the flag at exponent {} is not refined by the pieces",
                k + 1
            )));
        }
    }
    if acc.dim() != t.dim() {
        return Err(CostokesError::SplitFailure("the pieces do not span".into()));
    }
    Ok(v)
}

/// Stokes data at a direction `θ`: exponents in the order near the start of
/// `I_θ`, graded dimensions, and `T_∞ = S·Q` with `S` block upper
/// unitriangular and `Q` block lower triangular.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct StokesData {
    pub theta: Direction,
    pub exponents: Vec<GaussianRational>,
    pub dims: Vec<usize>,
    pub q: MatQ,
    pub s: MatQ,
}

impl StokesData {
    pub fn blocks(&self) -> BlockStructure {
        BlockStructure::new(self.dims.clone()).expect("validated data")
    }

    /// `S·Q`.
    pub fn monodromy(&self) -> MatQ {
        self.s.mul(&self.q)
    }

    pub fn validate(&self) -> Result<(), CostokesError> {
        let bad = |s: String| Err(CostokesError::InvalidStokesData(s));
        if self.exponents.is_empty() || self.exponents.len() != self.dims.len() {
            return bad("exponent and dimension counts differ".into());
        }
        let cfg = crate::exactplane::ExponentConfig::new(self.exponents.clone())
            .map_err(|e| CostokesError::InvalidStokesData(e.to_string()))?;
        if is_stokes(&cfg, &self.theta) || is_anti_stokes(&cfg, &self.theta) {
            return bad(format!("{} is a Stokes or anti-Stokes direction", self.theta));
        }
        if cfg.sorted_by(&self.theta.rot_neg90()) != (0..self.dims.len()).collect::<Vec<_>>() {
            return bad("exponents are not in interval order".into());
        }
        let b = BlockStructure::new(self.dims.clone())
            .map_err(|e| CostokesError::InvalidStokesData(e.to_string()))?;
        let n_tot = b.total();
        for (name, m) in [("Q", &self.q), ("S", &self.s)] {
            if m.rows() != n_tot || m.cols() != n_tot {
                return bad(format!("{name} has the wrong shape"));
            }
        }
        for i in 0..b.len() {
            for j in 0..b.len() {
                let qb = b.get(&self.q, i, j);
                let sb = b.get(&self.s, i, j);
                if i < j && !qb.is_zero() {
                    return bad("Q is not block lower triangular".into());
                }
                if i > j && !sb.is_zero() {
                    return bad("S is not block upper triangular".into());
                }
                if i == j && !sb.is_identity() {
                    return bad("S is not unitriangular".into());
                }
                if i == j && qb.det().is_zero() {
                    return bad(format!("Q_{}{} is singular", i + 1, i + 1));
                }
            }
        }
        Ok(())
    }
}

/// A basis of `V` adapted to the splitting at `θ`, in interval order.
pub fn adapted_basis_with(t: &Transport, theta: &Direction) -> Result<(Vec<usize>, MatQ), CostokesError> {
    let p = t.presentation();
    let v = good_interval_splitting_with(t, theta)?;
    let order = interval_order(p, theta);
    let mut b = MatQ::zeros(t.dim(), 0);
    for &k in &order {
        b = b.hstack(v[k].basis());
    }
    Ok((order, b))
}

/// Stokes data of `p` at `θ`.
pub fn extract_stokes_data(p: &Constr0Presentation, theta: &Direction) -> Result<StokesData, CostokesError> {
    extract_stokes_data_with(&Transport::new(p), theta)
}

pub fn extract_stokes_data_with(t: &Transport, theta: &Direction) -> Result<StokesData, CostokesError> {
    let p = t.presentation();
    if is_stokes(&p.cfg(), theta) {
        return Err(CostokesError::BadDirection(format!("{theta} is a Stokes direction")));
    }
    let (order, b) = adapted_basis_with(t, theta)?;
    let a = b.inverse().expect("adapted basis").mul(t.monodromy()).mul(&b);
    let dims: Vec<usize> = order.iter().map(|&k| p.dims[k]).collect();
    let blocks = BlockStructure::new(dims.clone()).expect("positive dims");
    let (s, q) = block_lu(&a, &blocks)?;
    Ok(StokesData {
        theta: theta.clone(),
        exponents: order.iter().map(|&k| p.exponents[k].clone()).collect(),
        dims,
        q,
        s,
    })
}

/// The presentation realizing `d`, with the given cut and base directions.
pub fn realize_presentation(
    d: &StokesData,
    cut: &Direction,
    base: &Direction,
) -> Result<Constr0Presentation, CostokesError> {
    d.validate()?;
    let b = d.blocks();
    let factors = peel_factors(&d.monodromy(), &b)?;
    let n = d.dims.len();
    let maps = (0..n)
        .map(|j| {
            (0..n)
                .map(|k| factors[k].block(b.offset(j), b.offset(j) + b.dim(j), b.offset(k), b.offset(k) + b.dim(k)))
                .collect()
        })
        .collect();
    let p = Constr0Presentation::new(d.exponents.clone(), d.dims.clone(), maps, cut.clone(), base.clone())?;
    if p.monodromy_order() != (0..n).collect::<Vec<_>>() {
        return Err(CostokesError::BadDirection(format!(
            "base direction {base} orders the exponents differently from the data"
        )));
    }
    Ok(p)
}

/// Realization with base direction `θ` and cuts pointing along `-θ`.
pub fn realize_default(d: &StokesData) -> Result<Constr0Presentation, CostokesError> {
    realize_presentation(d, &d.theta.neg(), &d.theta)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::q;

    fn d(x: i64, y: i64) -> Direction {
        Direction::new(x, y).unwrap()
    }

    fn z(a: i64, b: i64) -> GaussianRational {
        GaussianRational::from_ints(a, b)
    }

    #[test]
    fn filtration_examples() {
        let p = Constr0Presentation::two_point_example();
        assert_eq!(filtration_stalk(&p, &z(10, 10), &d(1, 1), true).unwrap(), Subspace::full(2));
        assert!(filtration_stalk(&p, &z(0, 0), &d(1, 1), true).unwrap().is_zero());
        assert_eq!(filtration_stalk(&p, &z(0, 0), &d(-1, -1), true).unwrap().dim(), 1);
        assert_eq!(filtration_stalk(&p, &z(0, 0), &d(1, 1), false).unwrap().dim(), 1);
    }

    #[test]
    fn arc_subsheaf_at_first_exponent() {
        let p = Constr0Presentation::two_point_example();
        let a = build_arc_subsheaf(&p, &z(0, 0)).unwrap();
        assert_eq!(a.jumps.len(), 2);
        assert!(a.points.iter().all(|s| s.is_zero()));
        let dims: Vec<usize> = a.arcs.iter().map(|s| s.dim()).collect();
        assert_eq!(dims.iter().filter(|&&x| x == 1).count() + dims.iter().filter(|&&x| x == 0).count(), dims.len());
        let h = circle_cohomology(&a).unwrap();
        assert_eq!(h.h0_dim(), 0);
        assert_eq!(h.h1_dim(), 1);
    }

    #[test]
    fn arc_subsheaf_nonsingular() {
        let p = Constr0Presentation::two_point_example();
        let a = build_arc_subsheaf(&p, &z(5, 0)).unwrap();
        assert_eq!(a.jumps.len(), 2);
        let a = build_arc_subsheaf(&p, &z(5, 1)).unwrap();
        assert_eq!(a.jumps.len(), 4);
        let h = circle_cohomology(&a).unwrap();
        assert_eq!((h.h0_dim(), h.h1_dim()), (0, 2));
    }

    #[test]
    fn constant_sheaf_cohomology() {
        let a = ArcSubsheaf {
            ambient: 3,
            wrap: MatQ::identity(3),
            base_direction: d(1, 0),
            jumps: vec![],
            arcs: vec![Subspace::full(3)],
            points: vec![],
        };
        let h = circle_cohomology(&a).unwrap();
        assert_eq!((h.h0_dim(), h.h1_dim()), (3, 3));
        let zero = ArcSubsheaf { arcs: vec![Subspace::zero(3)], ..a };
        let h = circle_cohomology(&zero).unwrap();
        assert_eq!((h.h0_dim(), h.h1_dim()), (0, 0));
    }

    #[test]
    fn example_stokes_data() {
        let p = Constr0Presentation::two_point_example();
        let sd = extract_stokes_data(&p, &d(1, 1)).unwrap();
        assert_eq!(sd.q[(0, 0)], q(2));
        assert_eq!(sd.q[(1, 1)], q(3));
        let back = realize_default(&sd).unwrap();
        assert_eq!(extract_stokes_data(&back, &d(1, 1)).unwrap(), sd);
    }

    #[test]
    fn example_realization() {
        let sd = StokesData {
            theta: d(1, 1),
            exponents: vec![z(0, 0), z(1, 0)],
            dims: vec![1, 1],
            q: MatQ::from_rows(vec![vec![q(2), q(0)], vec![q(15), q(3)]]),
            s: MatQ::from_rows(vec![vec![q(1), crate::qf(1, 3)], vec![q(0), q(1)]]),
        };
        let p = realize_default(&sd).unwrap();
        let e2 = Constr0Presentation::two_point_example();
        assert_eq!(p.maps, e2.maps);
    }
}
