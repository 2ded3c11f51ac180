//! Decompositions of the reference fibre attached to a direction `θ`: the
//! Stokes decomposition from the splitting over `I_θ`, the vanishing cycle
//! decomposition from straight paths in direction `θ`, their comparison, the
//! stability of the Stokes decomposition under transport between far points,
//! and the certificate that trivial monodromy forces trivial data.
//!
//! The far point in direction `θ` is `g + R0·θ`, with `g` the centroid of the
//! exponents and `R0` the radius of the base square.

use num_traits::{One, Zero};
use thiserror::Error;

use crate::costokes::{good_interval_splitting_with, interval_order, CostokesError};
use crate::exactplane::{in_open_arc, is_anti_stokes, Direction, GaussianRational};
use crate::linalg::{BlockStructure, MatQ, Subspace};
use crate::presentation::{Constr0Presentation, PresentationError};
use crate::transport::{inverse_word, Memo, Transport, TransportError};
use crate::Q;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum DecompError {
    #[error(transparent)]
    Costokes(#[from] CostokesError),
    #[error(transparent)]
    Transport(#[from] TransportError),
    #[error(transparent)]
    Presentation(#[from] PresentationError),
    #[error("bad direction: {0}")]
    BadDirection(String),
    #[error("precondition violated: {0}")]
    Precondition(String),
    #[error("not a direct sum: {0}")]
    NotDirect(String),
}

/// Components `W_1..W_n` of a direct sum decomposition, indexed like the
/// exponents.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct Decomposition {
    pub ambient: usize,
    pub components: Vec<Subspace>,
}

impl Decomposition {
    pub fn dims(&self) -> Vec<usize> {
        self.components.iter().map(|w| w.dim()).collect()
    }

    /// Whether the components are independent and span the ambient space.
    pub fn is_direct(&self) -> bool {
        let total: usize = self.dims().iter().sum();
        let mut acc = Subspace::zero(self.ambient);
        for w in &self.components {
            acc = acc.sum(w).expect("same ambient");
        }
        total == self.ambient && acc.dim() == self.ambient
    }

    /// `⊕_{k≠i} W_k`.
    pub fn complement_sum(&self, i: usize) -> Subspace {
        let mut acc = Subspace::zero(self.ambient);
        for (k, w) in self.components.iter().enumerate() {
            if k != i {
                acc = acc.sum(w).expect("same ambient");
            }
        }
        acc
    }
}

fn check_direction(t: &Transport, theta: &Direction) -> Result<(), DecompError> {
    if is_anti_stokes(&t.presentation().cfg(), theta) {
        return Err(DecompError::BadDirection(format!("{theta} is anti-Stokes")));
    }
    Ok(())
}

/// The far point `g + R0·θ`.
pub fn far_point(t: &Transport, theta: &Direction) -> GaussianRational {
    t.presentation().cfg().centroid().add(&theta.as_point().scale(t.radius()))
}

pub fn stokes_decomposition(p: &Constr0Presentation, theta: &Direction) -> Result<Decomposition, DecompError> {
    stokes_decomposition_with(&Transport::new(p), theta)
}

pub fn stokes_decomposition_with(t: &Transport, theta: &Direction) -> Result<Decomposition, DecompError> {
    check_direction(t, theta)?;
    Ok(Decomposition { ambient: t.dim(), components: good_interval_splitting_with(t, theta)? })
}

/// The point `c_i + s·θ` just beyond every exponent in direction `θ`.
fn ray_end(t: &Transport, i: usize, theta: &Direction) -> GaussianRational {
    let p = t.presentation();
    let ci = &p.exponents[i];
    let norm = Q::from_integer(theta.norm_sq());
    let reach = p
        .exponents
        .iter()
        .map(|c| c.sub(ci).dot_dir(theta) / &norm)
        .max()
        .unwrap_or_else(Q::zero);
    ci.add(&theta.as_point().scale(&(reach + Q::one())))
}

/// The stalks `F_{c_i}` carried to the reference fibre along the straight
/// path from `c_i` in direction `θ` and on to the far point.
pub fn embedded_stalks_with(t: &Transport, theta: &Direction) -> Result<Vec<Subspace>, DecompError> {
    t.memoized(Memo::EmbeddedStalks, theta, || compute_embedded_stalks(t, theta))
}

fn compute_embedded_stalks(t: &Transport, theta: &Direction) -> Result<Vec<Subspace>, DecompError> {
    check_direction(t, theta)?;
    let p = t.presentation();
    let xi = far_point(t, theta);
    let to_base = t.far_word(&xi, theta)?;
    let mut out = Vec::with_capacity(p.n());
    for i in 0..p.n() {
        let end = ray_end(t, i, theta);
        let mut path = vec![p.exponents[i].clone(), end];
        if path[1] != xi {
            path.push(xi.clone());
        }
        let mut word = t.crossings(&path, &[i])?;
        word.extend(to_base.iter().copied());
        out.push(Subspace::span(&t.apply_word(&word, p.singular_stalk(i).basis())));
    }
    Ok(out)
}

pub fn vanishing_cycle_decomposition(
    p: &Constr0Presentation,
    theta: &Direction,
) -> Result<Decomposition, DecompError> {
    vanishing_cycle_decomposition_with(&Transport::new(p), theta)
}

pub fn vanishing_cycle_decomposition_with(t: &Transport, theta: &Direction) -> Result<Decomposition, DecompError> {
    let stalks = embedded_stalks_with(t, theta)?;
    let n = stalks.len();
    let eqs: Vec<MatQ> = stalks.iter().map(Subspace::equations).collect();
    let components = (0..n)
        .map(|i| {
            let joint = (0..n)
                .filter(|&j| j != i)
                .fold(MatQ::zeros(0, t.dim()), |acc, j| acc.vstack(&eqs[j]));
            Subspace::cut_out(&joint)
        })
        .collect();
    let d = Decomposition { ambient: t.dim(), components };
    if !d.is_direct() {
        return Err(DecompError::NotDirect("vanishing cycle components".into()));
    }
    Ok(d)
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub enum Comparison {
    Agree,
    /// Indices of the components that differ.
    Disagree(Vec<usize>),
}

pub fn compare_decompositions(p: &Constr0Presentation, theta: &Direction) -> Result<Comparison, DecompError> {
    compare_decompositions_with(&Transport::new(p), theta)
}

pub fn compare_decompositions_with(t: &Transport, theta: &Direction) -> Result<Comparison, DecompError> {
    let s = stokes_decomposition_with(t, theta)?;
    let v = vanishing_cycle_decomposition_with(t, theta)?;
    let bad: Vec<usize> = (0..s.components.len()).filter(|&i| s.components[i] != v.components[i]).collect();
    Ok(if bad.is_empty() { Comparison::Agree } else { Comparison::Disagree(bad) })
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Stability {
    Preserved,
    Violated,
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct StabilityReport {
    pub verdict: Stability,
    /// Components not carried onto themselves.
    pub failing: Vec<usize>,
    /// Whether the angular hypothesis for transverse segments holds; `None`
    /// when `q - p` points along `θ` or `p = q`.
    pub hypothesis: Option<bool>,
}

pub fn transport_stability(
    p: &Constr0Presentation,
    theta: &Direction,
    a: &GaussianRational,
    b: &GaussianRational,
) -> Result<StabilityReport, DecompError> {
    transport_stability_with(&Transport::new(p), theta, a, b)
}

/// Carries the Stokes decomposition at `a` along `[a, b]` and compares it
/// with the one at `b`; both points must lie beyond every exponent in
/// direction `θ`.
pub fn transport_stability_with(
    t: &Transport,
    theta: &Direction,
    a: &GaussianRational,
    b: &GaussianRational,
) -> Result<StabilityReport, DecompError> {
    check_direction(t, theta)?;
    for x in [a, b] {
        if !t.beyond_all(x, theta) {
            return Err(DecompError::Precondition(format!(
                "{x} is not beyond every exponent in direction {theta}"
            )));
        }
    }
    let split = good_interval_splitting_with(t, theta)?;
    let fa = t.far_to_base(a, theta)?;
    let fb = t.far_to_base(b, theta)?;
    let fa_inv = fa.inverse().expect("transport is invertible");
    let fb_inv = fb.inverse().expect("transport is invertible");
    let along = if a == b { MatQ::identity(t.dim()) } else { t.matrix(&[a.clone(), b.clone()], &[])? };
    let moved = along.mul(&fa_inv);
    let failing: Vec<usize> = split
        .iter()
        .enumerate()
        .filter(|(_, v)| v.image(&moved) != v.image(&fb_inv))
        .map(|(i, _)| i)
        .collect();
    Ok(StabilityReport {
        verdict: if failing.is_empty() { Stability::Preserved } else { Stability::Violated },
        failing,
        hypothesis: angular_hypothesis(t, theta, a, b),
    })
}

fn angular_hypothesis(
    t: &Transport,
    theta: &Direction,
    a: &GaussianRational,
    b: &GaussianRational,
) -> Option<bool> {
    let step = Direction::from_vector(&b.sub(a))?;
    if step == *theta {
        return None;
    }
    let split = step.rot90();
    let far = theta.neg();
    if !in_open_arc(&split, theta, &far) {
        return Some(false);
    }
    let side = |x: &GaussianRational, c: &GaussianRational| -> Option<bool> {
        let phi = Direction::from_vector(&x.sub(c))?.rot90();
        if phi == split {
            None
        } else {
            Some(in_open_arc(&phi, theta, &split))
        }
    };
    Some(t.presentation().exponents.iter().all(|c| match (side(a, c), side(b, c)) {
        (Some(x), Some(y)) => x == y,
        _ => false,
    }))
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub enum TrivialCheck {
    /// The total monodromy is not the identity.
    NotApplicable,
    Pass,
    /// The first block that is not trivial.
    Fail { block: (usize, usize) },
}

/// When the total monodromy is the identity, every `T_ii` must be the
/// identity and every `T_ij` with `i ≠ j` must vanish.
pub fn trivial_stokes_check(p: &Constr0Presentation) -> TrivialCheck {
    if !p.total_monodromy().is_identity() {
        return TrivialCheck::NotApplicable;
    }
    for i in 0..p.n() {
        for j in 0..p.n() {
            let m = &p.maps[i][j];
            let ok = if i == j { m.is_identity() } else { m.is_zero() };
            if !ok {
                return TrivialCheck::Fail { block: (i, j) };
            }
        }
    }
    TrivialCheck::Pass
}

/// The same sheaf presented with base direction `θ` and cuts along `-θ`:
/// loops around each exponent along straight paths in direction `θ`,
/// expressed in the basis given by the vanishing cycle decomposition.
pub fn rebase_presentation(p: &Constr0Presentation, theta: &Direction) -> Result<Constr0Presentation, DecompError> {
    rebase_presentation_with(&Transport::new(p), theta)
}

pub fn rebase_presentation_with(t: &Transport, theta: &Direction) -> Result<Constr0Presentation, DecompError> {
    let p = t.presentation();
    let dec = vanishing_cycle_decomposition_with(t, theta)?;
    let order = interval_order(p, theta);
    let mut basis = MatQ::zeros(t.dim(), 0);
    for &k in &order {
        basis = basis.hstack(dec.components[k].basis());
    }
    let basis_inv = basis.inverse().expect("direct sum");
    let xi = far_point(t, theta);
    let to_base = t.far_word(&xi, theta)?;
    let from_base = inverse_word(&to_base);
    let dims: Vec<usize> = order.iter().map(|&k| p.dims[k]).collect();
    let blocks = BlockStructure::new(dims.clone()).expect("positive dims");
    let l1 = Q::from_integer(theta.norm_one());
    let th = theta.as_point();
    let rot = theta.rot90().as_point();
    // Block column `b` of each loop matrix.
    let mut loops = Vec::with_capacity(order.len());
    for &k in &order {
        let c = &p.exponents[k];
        let gap = p
            .exponents
            .iter()
            .filter(|x| *x != c)
            .map(|x| x.sub(c).max_abs_coord())
            .min()
            .unwrap_or_else(Q::one);
        let eps = gap / (&l1 * crate::q(2));
        let at = |v: &GaussianRational, s: i64| c.add(&v.scale(&(&eps * crate::q(s))));
        let start = at(&th, 1);
        let diamond = vec![start.clone(), at(&rot, 1), at(&th, -1), at(&rot, -1), start.clone()];
        let lead = vec![xi.clone(), ray_end(t, k, theta), start];
        let s = t.crossings(&lead, &[])?;
        let mut word = s.clone();
        word.extend(t.crossings(&diamond, &[])?);
        word.extend(inverse_word(&s));
        word.extend(to_base.iter().copied());
        let local = t.apply_word(&from_base, dec.components[k].basis());
        loops.push(basis_inv.mul(&t.apply_word(&word, &local)));
    }
    let n = order.len();
    let maps = (0..n)
        .map(|a| {
            (0..n)
                .map(|b| {
                    let r = blocks.range(a);
                    loops[b].block(r.start, r.end, 0, blocks.dim(b))
                })
                .collect()
        })
        .collect();
    Ok(Constr0Presentation::new(
        order.iter().map(|&k| p.exponents[k].clone()).collect(),
        dims,
        maps,
        theta.neg(),
        theta.clone(),
    )?)
}
