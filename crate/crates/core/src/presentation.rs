//! Linear-algebra presentation of a constructible sheaf with vanishing
//! cohomology: blocks `U_i`, maps `T_ij`, and the reference system (branch-cut
//! direction and base direction) that fixes every path-dependent choice.
//!
//! The fibre at the base point is `V = U_1 ⊕ … ⊕ U_n` and the stalk at `c_i`
//! is the coordinate subspace `⊕_{k≠i} U_k`. The monodromy around `c_k` is the
//! elementary matrix that equals the identity outside block-column `k`.

use num_traits::{One, Zero};
use thiserror::Error;

use crate::exactplane::{
    is_anti_stokes, is_stokes, segment_ray_crossing, square_loop, square_point, Direction,
    ExponentConfig, GaussianRational, GeometryError,
};
use crate::linalg::{column_factor, BlockStructure, MatQ, Subspace};
use crate::Q;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum PresentationError {
    #[error("no exponents")]
    Empty,
    #[error("exponents {0} and {1} coincide")]
    DuplicateExponent(usize, usize),
    #[error("diagonal block {0} is singular")]
    SingularDiagonalBlock(usize),
    #[error("shape mismatch: {0}")]
    ShapeMismatch(String),
    #[error("bad reference direction: {0}")]
    BadReferenceDirection(String),
}

/// The presentation data. Fields are public so that invalid data can be
/// represented and rejected by [`Constr0Presentation::validate`].
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct Constr0Presentation {
    pub exponents: Vec<GaussianRational>,
    pub dims: Vec<usize>,
    /// `maps[i][j]` is `T_ij`, of shape `d_i × d_j`.
    pub maps: Vec<Vec<MatQ>>,
    pub cut_direction: Direction,
    pub base_direction: Direction,
}

impl Constr0Presentation {
    /// Builds and validates.
    pub fn new(
        exponents: Vec<GaussianRational>,
        dims: Vec<usize>,
        maps: Vec<Vec<MatQ>>,
        cut_direction: Direction,
        base_direction: Direction,
    ) -> Result<Self, PresentationError> {
        let p = Constr0Presentation { exponents, dims, maps, cut_direction, base_direction };
        p.validate()?;
        Ok(p)
    }

    /// The presentation with `T_ii = I` and `T_ij = 0`.
    pub fn trivial(
        exponents: Vec<GaussianRational>,
        dims: Vec<usize>,
        cut_direction: Direction,
        base_direction: Direction,
    ) -> Result<Self, PresentationError> {
        let maps = (0..dims.len())
            .map(|i| {
                (0..dims.len())
                    .map(|j| if i == j { MatQ::identity(dims[i]) } else { MatQ::zeros(dims[i], dims[j]) })
                    .collect()
            })
            .collect();
        Constr0Presentation::new(exponents, dims, maps, cut_direction, base_direction)
    }

    /// Two exponents `0, 1`, one-dimensional blocks, `T_11 = 2`, `T_22 = 3`,
    /// `T_12 = 1`, `T_21 = 5`, cuts pointing down, base direction `(1, 1)`.
    pub fn two_point_example() -> Self {
        let m = |x: i64| MatQ::from_i64(&[&[x]]);
        Constr0Presentation::new(
            vec![GaussianRational::from_ints(0, 0), GaussianRational::from_ints(1, 0)],
            vec![1, 1],
            vec![vec![m(2), m(1)], vec![m(5), m(3)]],
            Direction::new(0, -1).expect("nonzero"),
            Direction::new(1, 1).expect("nonzero"),
        )
        .expect("valid example")
    }

    pub fn n(&self) -> usize {
        self.exponents.len()
    }

    /// Total dimension `N`.
    pub fn total_dim(&self) -> usize {
        self.dims.iter().sum()
    }

    /// The exponent configuration; panics on unvalidated duplicate data.
    pub fn cfg(&self) -> ExponentConfig {
        ExponentConfig::new(self.exponents.clone()).expect("validated presentation")
    }

    pub fn blocks(&self) -> BlockStructure {
        BlockStructure::new(self.dims.clone()).expect("validated presentation")
    }

    /// Radius of the square on which the base point and all far paths live.
    pub fn frame_radius(&self) -> Q {
        let m = self
            .exponents
            .iter()
            .map(|c| c.max_abs_coord())
            .max()
            .unwrap_or_else(Q::zero);
        Q::one() + m * crate::q(2)
    }

    /// The base point near infinity.
    pub fn base_point(&self) -> GaussianRational {
        square_point(&self.frame_radius(), &self.base_direction)
    }

    /// The direction whose projection order lists the factors of the total
    /// monodromy: the base direction turned a quarter clockwise.
    pub fn order_direction(&self) -> Direction {
        self.base_direction.rot_neg90()
    }

    /// Exponent indices in the order in which the big counterclockwise loop
    /// from the base point meets their cuts.
    pub fn monodromy_order(&self) -> Vec<usize> {
        self.cfg().sorted_by(&self.order_direction())
    }

    pub fn validate(&self) -> Result<(), PresentationError> {
        let n = self.exponents.len();
        if n == 0 {
            return Err(PresentationError::Empty);
        }
        let cfg = ExponentConfig::new(self.exponents.clone()).map_err(|e| match e {
            GeometryError::Duplicate(i, j) => PresentationError::DuplicateExponent(i, j),
            _ => PresentationError::Empty,
        })?;
        if self.dims.len() != n {
            return Err(PresentationError::ShapeMismatch(format!(
                "{} block dimensions for {} exponents",
                self.dims.len(),
                n
            )));
        }
        if let Some(i) = self.dims.iter().position(|&d| d == 0) {
            return Err(PresentationError::ShapeMismatch(format!("block {i} has dimension 0")));
        }
        if self.maps.len() != n || self.maps.iter().any(|r| r.len() != n) {
            return Err(PresentationError::ShapeMismatch("maps must form an n×n array".into()));
        }
        for i in 0..n {
            for j in 0..n {
                let t = &self.maps[i][j];
                if t.rows() != self.dims[i] || t.cols() != self.dims[j] {
                    return Err(PresentationError::ShapeMismatch(format!(
                        "T_{}{} is {}x{}, expected {}x{}",
                        i + 1,
                        j + 1,
                        t.rows(),
                        t.cols(),
                        self.dims[i],
                        self.dims[j]
                    )));
                }
            }
        }
        for i in 0..n {
            if self.maps[i][i].det().is_zero() {
                return Err(PresentationError::SingularDiagonalBlock(i));
            }
        }
        if is_anti_stokes(&cfg, &self.cut_direction) {
            return Err(PresentationError::BadReferenceDirection(
                "cut direction is anti-Stokes".into(),
            ));
        }
        if is_stokes(&cfg, &self.base_direction) || is_anti_stokes(&cfg, &self.base_direction) {
            return Err(PresentationError::BadReferenceDirection(
                "base direction is Stokes or anti-Stokes".into(),
            ));
        }
        let seen = self.loop_crossings();
        let expected: Vec<(usize, i8)> =
            cfg.sorted_by(&self.order_direction()).into_iter().map(|k| (k, 1)).collect();
        if seen != expected {
            return Err(PresentationError::BadReferenceDirection(
                "the loop from the base point does not meet the cuts in projection order".into(),
            ));
        }
        Ok(())
    }

    /// Signed cut crossings of the big counterclockwise loop from the base
    /// point.
    fn loop_crossings(&self) -> Vec<(usize, i8)> {
        let lp = square_loop(&self.frame_radius(), &self.base_direction);
        let mut out = Vec::new();
        for w in lp.windows(2) {
            let mut hits: Vec<(Q, usize, i8)> = Vec::new();
            for (k, c) in self.exponents.iter().enumerate() {
                if let Ok(Some(s)) = segment_ray_crossing(&w[0], &w[1], c, &self.cut_direction) {
                    hits.push((crossing_param(&w[0], &w[1], c, &self.cut_direction), k, s));
                }
            }
            hits.sort_by(|a, b| a.0.cmp(&b.0));
            out.extend(hits.into_iter().map(|(_, k, s)| (k, s)));
        }
        out
    }

    /// Block-column `k` of the monodromy around `c_k`, stacked `T_jk`.
    pub fn elementary_column(&self, k: usize) -> MatQ {
        let b = self.blocks();
        let mut col = MatQ::zeros(b.total(), self.dims[k]);
        for j in 0..self.n() {
            col.set_block(b.offset(j), 0, &self.maps[j][k]);
        }
        col
    }

    /// The identity except block-column `k`, whose `(j, k)` block is `T_jk`.
    pub fn elementary_matrix(&self, k: usize) -> MatQ {
        column_factor(&self.blocks(), k, &self.elementary_column(k))
    }

    /// Product of the elementary matrices in monodromy order, first factor
    /// acting first.
    pub fn total_monodromy(&self) -> MatQ {
        let mut m = MatQ::identity(self.total_dim());
        for k in self.monodromy_order() {
            m = self.elementary_matrix(k).mul(&m);
        }
        m
    }

    /// The stalk at `xi` inside the fibre of the chart near `xi`.
    pub fn stalk(&self, xi: &GaussianRational) -> Subspace {
        let n_tot = self.total_dim();
        match self.exponents.iter().position(|c| c == xi) {
            Some(i) => self.singular_stalk(i),
            None => Subspace::full(n_tot),
        }
    }

    /// `⊕_{k≠i} U_k`.
    pub fn singular_stalk(&self, i: usize) -> Subspace {
        let b = self.blocks();
        Subspace::coordinate(b.total(), (0..self.n()).filter(|&k| k != i).flat_map(|k| b.range(k)))
    }

    /// The same data with exponents listed in the order `perm`.
    pub fn permuted(&self, perm: &[usize]) -> Constr0Presentation {
        Constr0Presentation {
            exponents: perm.iter().map(|&k| self.exponents[k].clone()).collect(),
            dims: perm.iter().map(|&k| self.dims[k]).collect(),
            maps: perm.iter().map(|&i| perm.iter().map(|&j| self.maps[i][j].clone()).collect()).collect(),
            cut_direction: self.cut_direction.clone(),
            base_direction: self.base_direction.clone(),
        }
    }

    /// Whether all off-diagonal maps vanish and all diagonal maps are the
    /// identity.
    pub fn is_trivial(&self) -> bool {
        (0..self.n()).all(|i| {
            (0..self.n()).all(|j| if i == j { self.maps[i][j].is_identity() } else { self.maps[i][j].is_zero() })
        })
    }
}

/// Position along `[a, b]` where it meets the supporting line of the ray.
pub(crate) fn crossing_param(
    a: &GaussianRational,
    b: &GaussianRational,
    apex: &GaussianRational,
    u: &Direction,
) -> Q {
    let up = u.as_point();
    let ca = up.cross(&a.sub(apex));
    let cb = up.cross(&b.sub(apex));
    &ca / (&ca - &cb)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn example_validates_and_assembles() {
        let p = Constr0Presentation::two_point_example();
        assert_eq!(p.validate(), Ok(()));
        assert_eq!(p.elementary_matrix(0), MatQ::from_i64(&[&[2, 0], &[5, 1]]));
        assert_eq!(p.elementary_matrix(1), MatQ::from_i64(&[&[1, 1], &[0, 3]]));
        assert_eq!(p.total_monodromy(), MatQ::from_i64(&[&[7, 1], &[15, 3]]));
    }

    #[test]
    fn validation_errors() {
        let mut p = Constr0Presentation::two_point_example();
        p.exponents[1] = GaussianRational::from_ints(0, 0);
        assert_eq!(p.validate(), Err(PresentationError::DuplicateExponent(0, 1)));
        let mut p = Constr0Presentation::two_point_example();
        p.maps[0][0] = MatQ::from_i64(&[&[0]]);
        assert_eq!(p.validate(), Err(PresentationError::SingularDiagonalBlock(0)));
        let mut p = Constr0Presentation::two_point_example();
        p.maps[0][1] = MatQ::from_i64(&[&[1, 2]]);
        assert!(matches!(p.validate(), Err(PresentationError::ShapeMismatch(_))));
        let mut p = Constr0Presentation::two_point_example();
        p.cut_direction = Direction::new(1, 0).unwrap();
        assert!(matches!(p.validate(), Err(PresentationError::BadReferenceDirection(_))));
        let mut p = Constr0Presentation::two_point_example();
        p.base_direction = Direction::new(0, 1).unwrap();
        assert!(matches!(p.validate(), Err(PresentationError::BadReferenceDirection(_))));
    }

    #[test]
    fn stalks() {
        let p = Constr0Presentation::two_point_example();
        assert_eq!(p.stalk(&GaussianRational::from_ints(5, 0)), Subspace::full(2));
        assert_eq!(p.stalk(&GaussianRational::from_ints(0, 0)), Subspace::coordinate(2, [1]));
        assert_eq!(p.stalk(&GaussianRational::from_ints(1, 0)), Subspace::coordinate(2, [0]));
    }

    #[test]
    fn trivial_and_single() {
        let d = |x, y| Direction::new(x, y).unwrap();
        let t = Constr0Presentation::trivial(
            vec![GaussianRational::from_ints(0, 0), GaussianRational::from_ints(2, 1)],
            vec![2, 1],
            d(-1, -1),
            d(1, 1),
        )
        .unwrap();
        assert!(t.total_monodromy().is_identity());
        let one = Constr0Presentation::new(
            vec![GaussianRational::from_ints(3, -2)],
            vec![2],
            vec![vec![MatQ::from_i64(&[&[1, 4], &[2, 3]])]],
            d(0, -1),
            d(1, 0),
        )
        .unwrap();
        assert_eq!(one.total_monodromy(), MatQ::from_i64(&[&[1, 4], &[2, 3]]));
    }
}
