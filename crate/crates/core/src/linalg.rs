//! Dense matrices over the rationals, canonical subspaces, block-LU
//! factorization and elementary-factor peeling.

use std::fmt;

use num_bigint::BigInt;
use num_integer::Integer;
use num_traits::{One, Zero};
use thiserror::Error;

use crate::Q;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum LinalgError {
    #[error("dimension mismatch: {0}")]
    DimensionMismatch(String),
    #[error("singular pivot block {0}")]
    SingularPivot(usize),
    #[error("block dimensions must be positive")]
    EmptyBlock,
}

/// A dense row-major matrix with rational entries.
#[derive(Clone, PartialEq, Eq, Hash)]
pub struct MatQ {
    rows: usize,
    cols: usize,
    data: Vec<Q>,
}

impl fmt::Debug for MatQ {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "[")?;
        for i in 0..self.rows {
            if i > 0 {
                write!(f, ", ")?;
            }
            write!(f, "[")?;
            for j in 0..self.cols {
                if j > 0 {
                    write!(f, ", ")?;
                }
                write!(f, "{}", self[(i, j)])?;
            }
            write!(f, "]")?;
        }
        write!(f, "]")
    }
}

impl std::ops::Index<(usize, usize)> for MatQ {
    type Output = Q;
    fn index(&self, (i, j): (usize, usize)) -> &Q {
        &self.data[i * self.cols + j]
    }
}

impl std::ops::IndexMut<(usize, usize)> for MatQ {
    fn index_mut(&mut self, (i, j): (usize, usize)) -> &mut Q {
        &mut self.data[i * self.cols + j]
    }
}

impl MatQ {
    pub fn zeros(rows: usize, cols: usize) -> Self {
        MatQ { rows, cols, data: vec![Q::zero(); rows * cols] }
    }

    pub fn identity(n: usize) -> Self {
        let mut m = MatQ::zeros(n, n);
        for i in 0..n {
            m[(i, i)] = Q::one();
        }
        m
    }

    /// Builds a matrix from rows; panics on ragged input.
    pub fn from_rows(rows: Vec<Vec<Q>>) -> Self {
        let r = rows.len();
        let c = rows.first().map_or(0, |x| x.len());
        assert!(rows.iter().all(|x| x.len() == c), "ragged rows");
        MatQ { rows: r, cols: c, data: rows.into_iter().flatten().collect() }
    }

    pub fn from_i64(rows: &[&[i64]]) -> Self {
        MatQ::from_rows(rows.iter().map(|r| r.iter().map(|&x| crate::q(x)).collect()).collect())
    }

    /// The matrix whose columns are the given vectors, with `rows` rows.
    pub fn from_columns(rows: usize, cols: &[Vec<Q>]) -> Self {
        let mut m = MatQ::zeros(rows, cols.len());
        for (j, c) in cols.iter().enumerate() {
            assert_eq!(c.len(), rows, "column length");
            for (i, x) in c.iter().enumerate() {
                m[(i, j)] = x.clone();
            }
        }
        m
    }

    pub fn rows(&self) -> usize {
        self.rows
    }

    pub fn cols(&self) -> usize {
        self.cols
    }

    pub fn is_square(&self) -> bool {
        self.rows == self.cols
    }

    pub fn row(&self, i: usize) -> Vec<Q> {
        self.data[i * self.cols..(i + 1) * self.cols].to_vec()
    }

    pub fn col(&self, j: usize) -> Vec<Q> {
        (0..self.rows).map(|i| self[(i, j)].clone()).collect()
    }

    pub fn to_rows(&self) -> Vec<Vec<Q>> {
        (0..self.rows).map(|i| self.row(i)).collect()
    }

    pub fn is_identity(&self) -> bool {
        self.is_square()
            && (0..self.rows).all(|i| {
                (0..self.cols).all(|j| {
                    let x = &self[(i, j)];
                    if i == j {
                        x.is_one()
                    } else {
                        x.is_zero()
                    }
                })
            })
    }

    pub fn is_zero(&self) -> bool {
        self.data.iter().all(|x| x.is_zero())
    }

    pub fn transpose(&self) -> Self {
        let mut t = MatQ::zeros(self.cols, self.rows);
        for i in 0..self.rows {
            for j in 0..self.cols {
                t[(j, i)] = self[(i, j)].clone();
            }
        }
        t
    }

    pub fn mul(&self, other: &MatQ) -> MatQ {
        assert_eq!(self.cols, other.rows, "product shape");
        let mut out = MatQ::zeros(self.rows, other.cols);
        for i in 0..self.rows {
            for k in 0..self.cols {
                let a = &self[(i, k)];
                if a.is_zero() {
                    continue;
                }
                for j in 0..other.cols {
                    let b = &other[(k, j)];
                    if !b.is_zero() {
                        out[(i, j)] += a * b;
                    }
                }
            }
        }
        out
    }

    pub fn mul_vec(&self, v: &[Q]) -> Vec<Q> {
        assert_eq!(self.cols, v.len(), "vector length");
        (0..self.rows)
            .map(|i| {
                let mut s = Q::zero();
                for (j, x) in v.iter().enumerate() {
                    if !x.is_zero() {
                        s += &self[(i, j)] * x;
                    }
                }
                s
            })
            .collect()
    }

    pub fn add(&self, other: &MatQ) -> MatQ {
        assert_eq!((self.rows, self.cols), (other.rows, other.cols), "sum shape");
        let data = self.data.iter().zip(&other.data).map(|(a, b)| a + b).collect();
        MatQ { rows: self.rows, cols: self.cols, data }
    }

    pub fn sub(&self, other: &MatQ) -> MatQ {
        assert_eq!((self.rows, self.cols), (other.rows, other.cols), "difference shape");
        let data = self.data.iter().zip(&other.data).map(|(a, b)| a - b).collect();
        MatQ { rows: self.rows, cols: self.cols, data }
    }

    pub fn scale(&self, s: &Q) -> MatQ {
        MatQ { rows: self.rows, cols: self.cols, data: self.data.iter().map(|x| x * s).collect() }
    }

    /// The submatrix with rows `r0..r1` and columns `c0..c1`.
    pub fn block(&self, r0: usize, r1: usize, c0: usize, c1: usize) -> MatQ {
        let mut m = MatQ::zeros(r1 - r0, c1 - c0);
        for i in r0..r1 {
            for j in c0..c1 {
                m[(i - r0, j - c0)] = self[(i, j)].clone();
            }
        }
        m
    }

    /// Overwrites the submatrix with top-left corner `(r0, c0)`.
    pub fn set_block(&mut self, r0: usize, c0: usize, b: &MatQ) {
        for i in 0..b.rows {
            for j in 0..b.cols {
                self[(r0 + i, c0 + j)] = b[(i, j)].clone();
            }
        }
    }

    /// Side-by-side concatenation.
    pub fn hstack(&self, other: &MatQ) -> MatQ {
        assert_eq!(self.rows, other.rows, "hstack rows");
        let mut m = MatQ::zeros(self.rows, self.cols + other.cols);
        m.set_block(0, 0, self);
        m.set_block(0, self.cols, other);
        m
    }

    /// Vertical concatenation.
    pub fn vstack(&self, other: &MatQ) -> MatQ {
        assert_eq!(self.cols, other.cols, "vstack cols");
        let mut data = self.data.clone();
        data.extend(other.data.iter().cloned());
        MatQ { rows: self.rows + other.rows, cols: self.cols, data }
    }

    /// Reduced row echelon form and pivot columns.
    pub fn rref(&self) -> (MatQ, Vec<usize>) {
        // Fraction-free elimination on primitive integer rows.
        let w = self.cols;
        let mut rows: Vec<Vec<BigInt>> =
            (0..self.rows).map(|i| integer_row(&self.data[i * w..(i + 1) * w])).collect();
        let mut pivots = Vec::new();
        let mut r = 0;
        for c in 0..w {
            if r == rows.len() {
                break;
            }
            let Some(p) = (r..rows.len()).find(|&i| !rows[i][c].is_zero()) else {
                continue;
            };
            rows.swap(p, r);
            let pivot_row = rows[r].clone();
            for (i, row) in rows.iter_mut().enumerate() {
                if i == r || row[c].is_zero() {
                    continue;
                }
                let g = pivot_row[c].gcd(&row[c]);
                let a = &pivot_row[c] / &g;
                let b = &row[c] / &g;
                for (x, y) in row.iter_mut().zip(&pivot_row) {
                    if y.is_zero() {
                        if !x.is_zero() {
                            *x *= &a;
                        }
                    } else {
                        *x = &*x * &a - y * &b;
                    }
                }
                if row.iter().any(|x| x.bits() > 64) {
                    make_primitive(row);
                }
            }
            pivots.push(c);
            r += 1;
        }
        let mut m = MatQ::zeros(self.rows, w);
        for (i, &c) in pivots.iter().enumerate() {
            let d = rows[i][c].clone();
            for j in 0..w {
                if !rows[i][j].is_zero() {
                    m[(i, j)] = Q::new(rows[i][j].clone(), d.clone());
                }
            }
        }
        (m, pivots)
    }

    pub fn rank(&self) -> usize {
        self.rref().1.len()
    }

    /// Basis of the right kernel as columns of an `cols × k` matrix.
    pub fn kernel(&self) -> MatQ {
        let (r, pivots) = self.rref();
        let free: Vec<usize> = (0..self.cols).filter(|c| !pivots.contains(c)).collect();
        let mut k = MatQ::zeros(self.cols, free.len());
        for (t, &f) in free.iter().enumerate() {
            k[(f, t)] = Q::one();
            for (row, &p) in pivots.iter().enumerate() {
                k[(p, t)] = -r[(row, f)].clone();
            }
        }
        k
    }

    pub fn inverse(&self) -> Option<MatQ> {
        if !self.is_square() {
            return None;
        }
        let n = self.rows;
        let (r, pivots) = self.hstack(&MatQ::identity(n)).rref();
        if pivots.len() < n || pivots[n - 1] != n - 1 {
            return None;
        }
        Some(r.block(0, n, n, 2 * n))
    }

    pub fn det(&self) -> Q {
        assert!(self.is_square(), "determinant of a non-square matrix");
        let mut m = self.clone();
        let n = m.rows;
        let mut det = Q::one();
        for c in 0..n {
            let Some(p) = (c..n).find(|&i| !m[(i, c)].is_zero()) else {
                return Q::zero();
            };
            if p != c {
                for j in 0..n {
                    m.data.swap(p * n + j, c * n + j);
                }
                det = -det;
            }
            let piv = m[(c, c)].clone();
            det *= &piv;
            for i in (c + 1)..n {
                if m[(i, c)].is_zero() {
                    continue;
                }
                let f = &m[(i, c)] / &piv;
                for j in c..n {
                    let v = &m[(c, j)] * &f;
                    m[(i, j)] -= v;
                }
            }
        }
        det
    }

    pub fn trace(&self) -> Q {
        (0..self.rows.min(self.cols)).map(|i| self[(i, i)].clone()).sum()
    }

    /// Conjugates by a permutation: entry `(i, j)` of the result is entry
    /// `(perm[i], perm[j])` of `self`.
    pub fn permute(&self, perm: &[usize]) -> MatQ {
        let mut m = MatQ::zeros(self.rows, self.cols);
        for i in 0..self.rows {
            for j in 0..self.cols {
                m[(i, j)] = self[(perm[i], perm[j])].clone();
            }
        }
        m
    }
}

/// A linear subspace of `Q^N`, stored by its unique reduced column-echelon
/// basis, so that structural equality is subspace equality.
#[derive(Clone, PartialEq, Eq, Hash)]
pub struct Subspace {
    ambient: usize,
    basis: MatQ,
}

impl fmt::Debug for Subspace {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "Subspace(ambient {}, basis {:?})", self.ambient, self.basis)
    }
}

impl Subspace {
    /// The column span of `m`.
    pub fn span(m: &MatQ) -> Subspace {
        let (r, pivots) = m.transpose().rref();
        let basis = r.block(0, pivots.len(), 0, m.rows()).transpose();
        Subspace { ambient: m.rows(), basis }
    }

    pub fn from_vectors(ambient: usize, vs: &[Vec<Q>]) -> Subspace {
        Subspace::span(&MatQ::from_columns(ambient, vs))
    }

    pub fn zero(ambient: usize) -> Subspace {
        Subspace { ambient, basis: MatQ::zeros(ambient, 0) }
    }

    pub fn full(ambient: usize) -> Subspace {
        Subspace { ambient, basis: MatQ::identity(ambient) }
    }

    /// The span of the standard basis vectors with indices in `idx`.
    pub fn coordinate(ambient: usize, idx: impl IntoIterator<Item = usize>) -> Subspace {
        let mut idx: Vec<usize> = idx.into_iter().collect();
        idx.sort_unstable();
        idx.dedup();
        let mut b = MatQ::zeros(ambient, idx.len());
        for (t, &i) in idx.iter().enumerate() {
            b[(i, t)] = Q::one();
        }
        Subspace { ambient, basis: b }
    }

    pub fn ambient(&self) -> usize {
        self.ambient
    }

    pub fn dim(&self) -> usize {
        self.basis.cols()
    }

    pub fn is_zero(&self) -> bool {
        self.dim() == 0
    }

    /// Canonical basis as columns.
    pub fn basis(&self) -> &MatQ {
        &self.basis
    }

    /// Re-canonicalizes; the identity on values built through this API.
    pub fn canonicalize(&self) -> Subspace {
        Subspace::span(&self.basis)
    }

    fn check(&self, other: &Subspace) -> Result<(), LinalgError> {
        if self.ambient != other.ambient {
            return Err(LinalgError::DimensionMismatch(format!(
                "ambient {} vs {}",
                self.ambient, other.ambient
            )));
        }
        Ok(())
    }

    pub fn sum(&self, other: &Subspace) -> Result<Subspace, LinalgError> {
        self.check(other)?;
        Ok(Subspace::span(&self.basis.hstack(&other.basis)))
    }

    pub fn intersect(&self, other: &Subspace) -> Result<Subspace, LinalgError> {
        self.check(other)?;
        if self.is_zero() || other.is_zero() {
            return Ok(Subspace::zero(self.ambient));
        }
        let joint = self.basis.hstack(&other.basis.scale(&-Q::one()));
        let k = joint.kernel();
        let coeffs = k.block(0, self.dim(), 0, k.cols());
        Ok(Subspace::span(&self.basis.mul(&coeffs)))
    }

    /// Decides `A + span(M) = B + span(M)`.
    pub fn quotient_compare(&self, other: &Subspace, m: &MatQ) -> Result<bool, LinalgError> {
        self.check(other)?;
        if m.rows() != self.ambient {
            return Err(LinalgError::DimensionMismatch("modulus rows".into()));
        }
        let ms = Subspace::span(m);
        Ok(self.sum(&ms)? == other.sum(&ms)?)
    }

    pub fn contains_vec(&self, v: &[Q]) -> bool {
        self.coordinates(v).is_some()
    }

    pub fn is_subspace_of(&self, other: &Subspace) -> bool {
        self.ambient == other.ambient
            && (0..self.dim()).all(|j| other.contains_vec(&self.basis.col(j)))
    }

    /// Coordinates of `v` in the canonical basis, if `v` lies in the span.
    pub fn coordinates(&self, v: &[Q]) -> Option<Vec<Q>> {
        assert_eq!(v.len(), self.ambient, "vector length");
        // In column-echelon form each basis column has a leading one in a
        // pivot row where all other columns vanish.
        let mut coords = Vec::with_capacity(self.dim());
        for j in 0..self.dim() {
            let p = (0..self.ambient).find(|&i| !self.basis[(i, j)].is_zero()).expect("nonzero");
            coords.push(v[p].clone());
        }
        let recon = self.basis.mul_vec(&coords);
        if recon.as_slice() == v {
            Some(coords)
        } else {
            None
        }
    }

    /// Rows spanning the linear forms that vanish on `self`.
    pub fn equations(&self) -> MatQ {
        if self.is_zero() {
            return MatQ::identity(self.ambient);
        }
        self.basis.transpose().kernel().transpose()
    }

    /// The common zero set of the rows of `eqs`.
    pub fn cut_out(eqs: &MatQ) -> Subspace {
        if eqs.rows() == 0 {
            return Subspace::full(eqs.cols());
        }
        Subspace::span(&eqs.kernel())
    }

    /// The image under a linear map.
    pub fn image(&self, m: &MatQ) -> Subspace {
        assert_eq!(m.cols(), self.ambient, "image shape");
        Subspace::span(&m.mul(&self.basis))
    }

    /// `{v : m v ∈ self}` for a square invertible or general map `m`.
    pub fn preimage(&self, m: &MatQ) -> Subspace {
        assert_eq!(m.rows(), self.ambient, "preimage shape");
        // v ↦ m v ∈ span(B)  ⟺  [m | -B] (v, w) = 0.
        let joint = m.hstack(&self.basis.scale(&-Q::one()));
        let k = joint.kernel();
        Subspace::span(&k.block(0, m.cols(), 0, k.cols()))
    }
}

/// The row scaled to a primitive integer vector.
fn integer_row(row: &[Q]) -> Vec<BigInt> {
    let l = row.iter().fold(BigInt::one(), |l, x| l.lcm(x.denom()));
    let mut v: Vec<BigInt> = row.iter().map(|x| x.numer() * (&l / x.denom())).collect();
    make_primitive(&mut v);
    v
}

fn make_primitive(v: &mut [BigInt]) {
    let g = v.iter().fold(BigInt::zero(), |g, x| g.gcd(x));
    if !g.is_zero() && !g.is_one() {
        for x in v.iter_mut() {
            *x /= &g;
        }
    }
}

/// Free-standing form of the subspace operations.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum SubspaceOp {
    Sum,
    Intersect,
}

pub fn subspace_algebra(op: SubspaceOp, a: &Subspace, b: &Subspace) -> Result<Subspace, LinalgError> {
    match op {
        SubspaceOp::Sum => a.sum(b),
        SubspaceOp::Intersect => a.intersect(b),
    }
}

/// Block sizes `d_1..d_n`, all positive.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct BlockStructure {
    dims: Vec<usize>,
    offsets: Vec<usize>,
}

impl BlockStructure {
    pub fn new(dims: Vec<usize>) -> Result<Self, LinalgError> {
        if dims.iter().any(|&d| d == 0) {
            return Err(LinalgError::EmptyBlock);
        }
        let mut offsets = Vec::with_capacity(dims.len() + 1);
        let mut s = 0;
        offsets.push(0);
        for &d in &dims {
            s += d;
            offsets.push(s);
        }
        Ok(BlockStructure { dims, offsets })
    }

    pub fn dims(&self) -> &[usize] {
        &self.dims
    }

    pub fn len(&self) -> usize {
        self.dims.len()
    }

    pub fn is_empty(&self) -> bool {
        self.dims.is_empty()
    }

    pub fn total(&self) -> usize {
        *self.offsets.last().expect("offsets")
    }

    pub fn dim(&self, k: usize) -> usize {
        self.dims[k]
    }

    pub fn offset(&self, k: usize) -> usize {
        self.offsets[k]
    }

    pub fn range(&self, k: usize) -> std::ops::Range<usize> {
        self.offsets[k]..self.offsets[k + 1]
    }

    /// Block `(i, j)` of `m`.
    pub fn get(&self, m: &MatQ, i: usize, j: usize) -> MatQ {
        let r = self.range(i);
        let c = self.range(j);
        m.block(r.start, r.end, c.start, c.end)
    }

    /// The block structure listed in the order `perm`.
    pub fn permuted(&self, perm: &[usize]) -> BlockStructure {
        BlockStructure::new(perm.iter().map(|&k| self.dims[k]).collect()).expect("positive")
    }

    /// Scalar index permutation induced by listing blocks in the order `perm`.
    pub fn scalar_permutation(&self, perm: &[usize]) -> Vec<usize> {
        perm.iter().flat_map(|&k| self.range(k)).collect()
    }

    fn check_square(&self, t: &MatQ) -> Result<(), LinalgError> {
        if !t.is_square() || t.rows() != self.total() {
            return Err(LinalgError::DimensionMismatch(format!(
                "{}x{} matrix for total dimension {}",
                t.rows(),
                t.cols(),
                self.total()
            )));
        }
        Ok(())
    }
}

/// Factors `T = S·Q` with `S` block upper unitriangular and `Q` block lower
/// triangular, eliminating from the last block upwards.
pub fn block_lu(t: &MatQ, b: &BlockStructure) -> Result<(MatQ, MatQ), LinalgError> {
    b.check_square(t)?;
    let n_tot = b.total();
    let mut s = MatQ::identity(n_tot);
    let mut qm = MatQ::zeros(n_tot, n_tot);
    let mut rest = t.clone();
    for k in (0..b.len()).rev() {
        let r = b.range(k);
        let head = r.start;
        // Block row k of Q is block row k of the current remainder.
        qm.set_block(r.start, 0, &rest.block(r.start, r.end, 0, r.end));
        if head == 0 {
            break;
        }
        let pivot = rest.block(r.start, r.end, r.start, r.end);
        let pinv = pivot.inverse().ok_or(LinalgError::SingularPivot(k))?;
        let upper_col = rest.block(0, head, r.start, r.end);
        let s_col = upper_col.mul(&pinv);
        s.set_block(0, r.start, &s_col);
        let lower_row = rest.block(r.start, r.end, 0, head);
        let lead = rest.block(0, head, 0, head).sub(&s_col.mul(&lower_row));
        let mut next = MatQ::zeros(n_tot, n_tot);
        next.set_block(0, 0, &lead);
        rest = next;
    }
    Ok((s, qm))
}

/// The identity except block-column `k`, which is `col`.
pub fn column_factor(b: &BlockStructure, k: usize, col: &MatQ) -> MatQ {
    let mut m = MatQ::identity(b.total());
    m.set_block(0, b.offset(k), col);
    m
}

/// Inverse of a factor that is the identity except block-column `k`, given
/// that column; `None` when the diagonal block is singular.
pub fn column_factor_inverse(b: &BlockStructure, k: usize, col: &MatQ) -> Option<MatQ> {
    let r = b.range(k);
    let dkk = col.block(r.start, r.end, 0, col.cols());
    let inv = dkk.inverse()?;
    let mut c = col.mul(&inv).scale(&-Q::one());
    c.set_block(r.start, 0, &inv);
    Some(column_factor(b, k, &c))
}

/// Splits `T = T_n ⋯ T_1` into factors that are the identity outside one
/// block-column each; `T_1` acts first on column vectors.
pub fn peel_factors(t: &MatQ, b: &BlockStructure) -> Result<Vec<MatQ>, LinalgError> {
    b.check_square(t)?;
    let mut rest = t.clone();
    let mut out = vec![MatQ::zeros(0, 0); b.len()];
    for k in (0..b.len()).rev() {
        let r = b.range(k);
        let col = rest.block(0, b.total(), r.start, r.end);
        let inv = column_factor_inverse(b, k, &col).ok_or(LinalgError::SingularPivot(k))?;
        out[k] = column_factor(b, k, &col);
        rest = inv.mul(&rest);
    }
    Ok(out)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::{q, qf};

    #[test]
    fn intersect_example() {
        let a = Subspace::coordinate(3, [0, 1]);
        let b = Subspace::coordinate(3, [1, 2]);
        assert_eq!(a.intersect(&b).unwrap(), Subspace::coordinate(3, [1]));
    }

    #[test]
    fn sum_with_zero_and_scaling() {
        let a = Subspace::from_vectors(3, &[vec![q(1), q(2), q(3)]]);
        assert_eq!(a.sum(&Subspace::zero(3)).unwrap(), a);
        let x = Subspace::from_vectors(2, &[vec![q(1), q(1)]]);
        let y = Subspace::from_vectors(2, &[vec![q(2), q(2)]]);
        assert_eq!(x, y);
    }

    #[test]
    fn dimension_mismatch_is_an_error() {
        let a = Subspace::zero(2);
        let b = Subspace::zero(3);
        assert!(matches!(a.sum(&b), Err(LinalgError::DimensionMismatch(_))));
        assert!(matches!(
            subspace_algebra(SubspaceOp::Intersect, &a, &b),
            Err(LinalgError::DimensionMismatch(_))
        ));
    }

    #[test]
    fn quotient_compare_example() {
        let a = Subspace::coordinate(3, [0]);
        let b = Subspace::from_vectors(3, &[vec![q(1), q(0), q(5)]]);
        let m = MatQ::from_i64(&[&[0], &[0], &[1]]);
        assert!(a.quotient_compare(&b, &m).unwrap());
        assert!(!a.quotient_compare(&b, &MatQ::zeros(3, 1)).unwrap());
    }

    #[test]
    fn block_lu_examples() {
        let b = BlockStructure::new(vec![1, 1]).unwrap();
        let t = MatQ::from_i64(&[&[7, 1], &[15, 3]]);
        let (s, qm) = block_lu(&t, &b).unwrap();
        assert_eq!(s, MatQ::from_rows(vec![vec![q(1), qf(1, 3)], vec![q(0), q(1)]]));
        assert_eq!(qm, MatQ::from_i64(&[&[2, 0], &[15, 3]]));
        let (s, qm) = block_lu(&MatQ::identity(2), &b).unwrap();
        assert!(s.is_identity() && qm.is_identity());
        let swap = MatQ::from_i64(&[&[0, 1], &[1, 0]]);
        assert!(matches!(block_lu(&swap, &b), Err(LinalgError::SingularPivot(_))));
    }

    #[test]
    fn peel_examples() {
        let b = BlockStructure::new(vec![1, 1]).unwrap();
        let t = MatQ::from_i64(&[&[7, 1], &[15, 3]]);
        let f = peel_factors(&t, &b).unwrap();
        assert_eq!(f[1], MatQ::from_i64(&[&[1, 1], &[0, 3]]));
        assert_eq!(f[0], MatQ::from_i64(&[&[2, 0], &[5, 1]]));
        let one = BlockStructure::new(vec![3]).unwrap();
        let m = MatQ::from_i64(&[&[1, 2, 0], &[0, 1, 4], &[5, 0, 1]]);
        assert_eq!(peel_factors(&m, &one).unwrap(), vec![m]);
    }

    #[test]
    fn kernel_inverse_det() {
        let m = MatQ::from_i64(&[&[1, 2], &[2, 4]]);
        let k = m.kernel();
        assert_eq!(k.cols(), 1);
        assert!(m.mul(&k).is_zero());
        assert!(m.inverse().is_none());
        assert_eq!(m.det(), q(0));
        let a = MatQ::from_i64(&[&[2, 1], &[1, 1]]);
        assert!(a.mul(&a.inverse().unwrap()).is_identity());
        assert_eq!(a.det(), q(1));
    }

    #[test]
    fn preimage_and_coordinates() {
        let s = Subspace::coordinate(2, [1]);
        let m = MatQ::from_i64(&[&[1, 1], &[0, 1]]);
        let p = s.preimage(&m);
        assert_eq!(p, Subspace::from_vectors(2, &[vec![q(1), q(-1)]]));
        assert_eq!(p.image(&m), s);
        let a = Subspace::from_vectors(3, &[vec![q(1), q(0), q(2)], vec![q(0), q(1), q(3)]]);
        assert_eq!(a.coordinates(&[q(2), q(5), q(19)]), Some(vec![q(2), q(5)]));
        assert_eq!(a.coordinates(&[q(2), q(5), q(0)]), None);
    }
}
