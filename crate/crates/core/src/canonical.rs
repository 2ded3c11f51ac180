//! Similarity invariants over the rationals: characteristic polynomials,
//! invariant factors and the rational canonical form.

use num_traits::{One, Zero};

use crate::linalg::MatQ;
use crate::Q;

/// A polynomial with rational coefficients, lowest degree first, with no
/// trailing zeros.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct Poly(Vec<Q>);

impl Poly {
    pub fn new(mut c: Vec<Q>) -> Poly {
        while c.last().is_some_and(|x| x.is_zero()) {
            c.pop();
        }
        Poly(c)
    }

    pub fn zero() -> Poly {
        Poly(Vec::new())
    }

    pub fn constant(c: Q) -> Poly {
        Poly::new(vec![c])
    }

    /// The polynomial `x`.
    pub fn x() -> Poly {
        Poly(vec![Q::zero(), Q::one()])
    }

    pub fn coeffs(&self) -> &[Q] {
        &self.0
    }

    pub fn is_zero(&self) -> bool {
        self.0.is_empty()
    }

    /// Degree; `None` for the zero polynomial.
    pub fn degree(&self) -> Option<usize> {
        self.0.len().checked_sub(1)
    }

    fn lead(&self) -> &Q {
        self.0.last().expect("nonzero polynomial")
    }

    pub fn add(&self, o: &Poly) -> Poly {
        let n = self.0.len().max(o.0.len());
        let z = Q::zero();
        Poly::new((0..n).map(|i| self.0.get(i).unwrap_or(&z) + o.0.get(i).unwrap_or(&z)).collect())
    }

    pub fn sub(&self, o: &Poly) -> Poly {
        self.add(&o.scale(&-Q::one()))
    }

    pub fn scale(&self, s: &Q) -> Poly {
        Poly::new(self.0.iter().map(|x| x * s).collect())
    }

    pub fn mul(&self, o: &Poly) -> Poly {
        if self.is_zero() || o.is_zero() {
            return Poly::zero();
        }
        let mut c = vec![Q::zero(); self.0.len() + o.0.len() - 1];
        for (i, a) in self.0.iter().enumerate() {
            for (j, b) in o.0.iter().enumerate() {
                c[i + j] += a * b;
            }
        }
        Poly::new(c)
    }

    /// Euclidean division; panics on a zero divisor.
    pub fn div_rem(&self, d: &Poly) -> (Poly, Poly) {
        let dd = d.degree().expect("division by zero polynomial");
        let mut r = self.0.clone();
        let mut qc = vec![Q::zero(); self.0.len().saturating_sub(dd)];
        let inv = Q::one() / d.lead();
        while r.len() > dd {
            let k = r.len() - 1 - dd;
            let f = r.last().expect("nonempty") * &inv;
            for (i, c) in d.0.iter().enumerate() {
                r[k + i] -= c * &f;
            }
            qc[k] = f;
            r.pop();
            while r.last().is_some_and(|x| x.is_zero()) {
                r.pop();
            }
        }
        (Poly::new(qc), Poly::new(r))
    }

    pub fn monic(&self) -> Poly {
        if self.is_zero() {
            return Poly::zero();
        }
        self.scale(&(Q::one() / self.lead()))
    }
}

/// Characteristic polynomial `det(xI - A)` by the Faddeev-LeVerrier
/// recurrence.
pub fn char_poly(a: &MatQ) -> Poly {
    assert!(a.is_square(), "characteristic polynomial of a non-square matrix");
    let n = a.rows();
    let mut coeffs = vec![Q::zero(); n + 1];
    coeffs[n] = Q::one();
    let mut m = MatQ::identity(n);
    for k in 1..=n {
        let am = a.mul(&m);
        let c = -am.trace() / Q::from_integer((k as i64).into());
        coeffs[n - k] = c.clone();
        m = am.add(&MatQ::identity(n).scale(&c));
    }
    Poly::new(coeffs)
}

/// Monic invariant factors of `A` (the non-unit diagonal of the Smith form of
/// `xI - A` over `Q[x]`), in divisibility order.
pub fn invariant_factors(a: &MatQ) -> Vec<Poly> {
    assert!(a.is_square(), "invariant factors of a non-square matrix");
    let n = a.rows();
    let mut m: Vec<Vec<Poly>> = (0..n)
        .map(|i| {
            (0..n)
                .map(|j| {
                    let mut p = Poly::constant(-a[(i, j)].clone());
                    if i == j {
                        p = p.add(&Poly::x());
                    }
                    p
                })
                .collect()
        })
        .collect();
    let mut diag = Vec::with_capacity(n);
    for t in 0..n {
        loop {
            // Move an entry of minimal degree to (t, t).
            let mut best: Option<(usize, usize, usize)> = None;
            for i in t..n {
                for j in t..n {
                    if let Some(d) = m[i][j].degree() {
                        if best.is_none_or(|b| d < b.2) {
                            best = Some((i, j, d));
                        }
                    }
                }
            }
            let Some((bi, bj, _)) = best else {
                break;
            };
            m.swap(t, bi);
            for row in m.iter_mut() {
                row.swap(t, bj);
            }
            let mut dirty = false;
            for i in (t + 1)..n {
                let (qq, _) = m[i][t].div_rem(&m[t][t]);
                for j in t..n {
                    let v = m[i][j].sub(&qq.mul(&m[t][j]));
                    m[i][j] = v;
                }
                dirty |= !m[i][t].is_zero();
            }
            for j in (t + 1)..n {
                let (qq, _) = m[t][j].div_rem(&m[t][t]);
                for i in t..n {
                    let v = m[i][j].sub(&qq.mul(&m[i][t]));
                    m[i][j] = v;
                }
                dirty |= !m[t][j].is_zero();
            }
            if dirty {
                continue;
            }
            // The pivot must divide every remaining entry.
            let mut fixed = true;
            'scan: for i in (t + 1)..n {
                for j in (t + 1)..n {
                    if !m[i][j].div_rem(&m[t][t]).1.is_zero() {
                        for k in t..n {
                            let v = m[t][k].add(&m[i][k]);
                            m[t][k] = v;
                        }
                        fixed = false;
                        break 'scan;
                    }
                }
            }
            if fixed {
                break;
            }
        }
        diag.push(m[t][t].monic());
    }
    diag.into_iter().filter(|p| p.degree().is_some_and(|d| d > 0)).collect()
}

/// Companion matrix of a monic polynomial of positive degree.
pub fn companion(p: &Poly) -> MatQ {
    let d = p.degree().expect("nonzero");
    let mut m = MatQ::zeros(d, d);
    for i in 1..d {
        m[(i, i - 1)] = Q::one();
    }
    for i in 0..d {
        m[(i, d - 1)] = -p.coeffs()[i].clone();
    }
    m
}

/// Block-diagonal matrix of companion matrices of the invariant factors.
pub fn rational_canonical_form(a: &MatQ) -> MatQ {
    let n = a.rows();
    let mut out = MatQ::zeros(n, n);
    let mut off = 0;
    for p in invariant_factors(a) {
        let c = companion(&p);
        out.set_block(off, off, &c);
        off += c.rows();
    }
    debug_assert_eq!(off, n);
    out
}

/// Whether two square matrices are similar over the rationals.
pub fn similar(a: &MatQ, b: &MatQ) -> bool {
    a.rows() == b.rows() && a.is_square() && b.is_square() && invariant_factors(a) == invariant_factors(b)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::q;

    fn poly(c: &[i64]) -> Poly {
        Poly::new(c.iter().map(|&x| q(x)).collect())
    }

    #[test]
    fn char_poly_small() {
        let a = MatQ::from_i64(&[&[7, 1], &[15, 3]]);
        assert_eq!(char_poly(&a), poly(&[6, -10, 1]));
    }

    #[test]
    fn scalar_versus_jordan_block() {
        let i2 = MatQ::identity(2);
        let j = MatQ::from_i64(&[&[1, 1], &[0, 1]]);
        assert_eq!(invariant_factors(&i2), vec![poly(&[-1, 1]), poly(&[-1, 1])]);
        assert_eq!(invariant_factors(&j), vec![poly(&[1, -2, 1])]);
        assert!(!similar(&i2, &j));
        assert_eq!(char_poly(&i2), char_poly(&j));
    }

    #[test]
    fn conjugates_are_similar() {
        let a = MatQ::from_i64(&[&[2, 1, 0], &[0, 2, 0], &[0, 0, 3]]);
        let p = MatQ::from_i64(&[&[1, 2, 3], &[0, 1, 4], &[5, 6, 0]]);
        let b = p.inverse().unwrap().mul(&a).mul(&p);
        assert!(similar(&a, &b));
        assert_eq!(rational_canonical_form(&a), rational_canonical_form(&b));
    }

    #[test]
    fn division() {
        let (qq, r) = poly(&[-1, 0, 1]).div_rem(&poly(&[-1, 1]));
        assert_eq!(qq, poly(&[1, 1]));
        assert!(r.is_zero());
    }
}
