//! Exact rational matrices and symplectic matrices in the basis where
//! `J = [[0, I], [-I, 0]]`.

use std::cmp::Ordering;

use num_traits::{Signed, Zero};

use super::poly::Poly;
use crate::arith::{qi, Q};
use crate::error::{invalid, Error, Result};

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct QMat {
    n: usize,
    m: usize,
    a: Vec<Q>,
}

impl QMat {
    pub fn zeros(n: usize, m: usize) -> QMat {
        QMat { n, m, a: vec![Q::zero(); n * m] }
    }

    pub fn identity(n: usize) -> QMat {
        let mut x = QMat::zeros(n, n);
        for i in 0..n {
            x.set(i, i, qi(1));
        }
        x
    }

    pub fn from_rows(rows: Vec<Vec<Q>>) -> Result<QMat> {
        let n = rows.len();
        let m = rows.first().map_or(0, Vec::len);
        if rows.iter().any(|r| r.len() != m) {
            return Err(invalid("ragged matrix rows"));
        }
        Ok(QMat { n, m, a: rows.into_iter().flatten().collect() })
    }

    pub fn from_ints(rows: &[&[i64]]) -> QMat {
        QMat::from_rows(rows.iter().map(|r| r.iter().map(|&x| qi(x)).collect()).collect())
            .expect("rectangular")
    }

    /// `[[0, I], [-I, 0]]` of size `2d`.
    pub fn j(d: usize) -> QMat {
        let mut x = QMat::zeros(2 * d, 2 * d);
        for i in 0..d {
            x.set(i, d + i, qi(1));
            x.set(d + i, i, qi(-1));
        }
        x
    }

    pub fn rows(&self) -> usize {
        self.n
    }

    pub fn cols(&self) -> usize {
        self.m
    }

    pub fn get(&self, i: usize, j: usize) -> &Q {
        &self.a[i * self.m + j]
    }

    pub fn set(&mut self, i: usize, j: usize, v: Q) {
        self.a[i * self.m + j] = v;
    }

    pub fn row(&self, i: usize) -> &[Q] {
        &self.a[i * self.m..(i + 1) * self.m]
    }

    pub fn to_rows(&self) -> Vec<Vec<Q>> {
        (0..self.n).map(|i| self.row(i).to_vec()).collect()
    }

    pub fn transpose(&self) -> QMat {
        let mut t = QMat::zeros(self.m, self.n);
        for i in 0..self.n {
            for j in 0..self.m {
                t.set(j, i, self.get(i, j).clone());
            }
        }
        t
    }

    pub fn mul(&self, o: &QMat) -> QMat {
        assert_eq!(self.m, o.n);
        let mut r = QMat::zeros(self.n, o.m);
        for i in 0..self.n {
            for k in 0..self.m {
                let x = self.get(i, k);
                if x.is_zero() {
                    continue;
                }
                for j in 0..o.m {
                    let y = o.get(k, j);
                    if !y.is_zero() {
                        r.a[i * o.m + j] += x * y;
                    }
                }
            }
        }
        r
    }

    pub fn add(&self, o: &QMat) -> QMat {
        assert_eq!((self.n, self.m), (o.n, o.m));
        QMat { n: self.n, m: self.m, a: self.a.iter().zip(&o.a).map(|(x, y)| x + y).collect() }
    }

    pub fn sub(&self, o: &QMat) -> QMat {
        self.add(&o.scale(&qi(-1)))
    }

    pub fn scale(&self, k: &Q) -> QMat {
        QMat { n: self.n, m: self.m, a: self.a.iter().map(|x| x * k).collect() }
    }

    pub fn trace(&self) -> Q {
        (0..self.n.min(self.m)).map(|i| self.get(i, i).clone()).sum()
    }

    /// `(self + selfᵀ) / 2`
    pub fn symmetric_part(&self) -> QMat {
        self.add(&self.transpose()).scale(&crate::arith::q(1, 2))
    }

    /// `p(self)` by Horner's rule.
    pub fn eval_poly(&self, p: &Poly) -> QMat {
        let id = QMat::identity(self.n);
        p.coeffs()
            .iter()
            .rev()
            .fold(QMat::zeros(self.n, self.n), |acc, c| acc.mul(self).add(&id.scale(c)))
    }

    /// Reduced row echelon form and pivot columns.
    fn rref(&self) -> (QMat, Vec<usize>) {
        let mut x = self.clone();
        let mut pivots = Vec::new();
        let mut r = 0;
        for c in 0..x.m {
            if r == x.n {
                break;
            }
            let Some(p) = (r..x.n).find(|&i| !x.get(i, c).is_zero()) else {
                continue;
            };
            for j in 0..x.m {
                x.a.swap(r * x.m + j, p * x.m + j);
            }
            let inv = qi(1) / x.get(r, c);
            for j in 0..x.m {
                let v = x.get(r, j) * &inv;
                x.set(r, j, v);
            }
            for i in 0..x.n {
                if i != r && !x.get(i, c).is_zero() {
                    let f = x.get(i, c).clone();
                    for j in 0..x.m {
                        let v = x.get(i, j) - &f * x.get(r, j);
                        x.set(i, j, v);
                    }
                }
            }
            pivots.push(c);
            r += 1;
        }
        (x, pivots)
    }

    pub fn rank(&self) -> usize {
        self.rref().1.len()
    }

    /// Columns spanning the right null space.
    pub fn kernel(&self) -> QMat {
        let (r, pivots) = self.rref();
        let free: Vec<usize> = (0..self.m).filter(|c| !pivots.contains(c)).collect();
        let mut k = QMat::zeros(self.m, free.len());
        for (col, &f) in free.iter().enumerate() {
            k.set(f, col, qi(1));
            for (row, &p) in pivots.iter().enumerate() {
                k.set(p, col, -r.get(row, f).clone());
            }
        }
        k
    }

    pub fn column(&self, j: usize) -> Vec<Q> {
        (0..self.n).map(|i| self.get(i, j).clone()).collect()
    }

    /// Characteristic polynomial `det(λI - A)` (Faddeev–LeVerrier).
    pub fn charpoly(&self) -> Poly {
        assert_eq!(self.n, self.m);
        let n = self.n;
        let mut c = vec![Q::zero(); n + 1];
        c[n] = qi(1);
        let id = QMat::identity(n);
        let mut mk = QMat::zeros(n, n);
        for k in 1..=n {
            mk = self.mul(&mk).add(&id.scale(&c[n - k + 1]));
            c[n - k] = -self.mul(&mk).trace() / qi(k as i64);
        }
        Poly::new(c)
    }

    /// `(positive, negative)` inertia of a symmetric matrix.
    pub fn inertia(&self) -> (usize, usize) {
        assert_eq!(self.n, self.m);
        let mut x = self.clone();
        let mut n = x.n;
        let (mut pos, mut neg) = (0, 0);
        while n > 0 {
            // bring a non-zero diagonal entry to position (0, 0) of the block
            let diag = (0..n).find(|&i| !x.get(i, i).is_zero());
            let p = match diag {
                Some(p) => p,
                None => {
                    let off = (0..n).flat_map(|i| (0..n).map(move |j| (i, j))).find(|&(i, j)| i != j && !x.get(i, j).is_zero());
                    let Some((i, j)) = off else { break };
                    // row/col i += row/col j makes the (i,i) entry 2 x_ij
                    for c in 0..n {
                        let v = x.get(i, c) + x.get(j, c);
                        x.set(i, c, v);
                    }
                    for r in 0..n {
                        let v = x.get(r, i) + x.get(r, j);
                        x.set(r, i, v);
                    }
                    i
                }
            };
            let piv = x.get(p, p).clone();
            match piv.cmp(&Q::zero()) {
                Ordering::Greater => pos += 1,
                Ordering::Less => neg += 1,
                Ordering::Equal => unreachable!(),
            }
            let mut y = QMat::zeros(n - 1, n - 1);
            let rest: Vec<usize> = (0..n).filter(|&i| i != p).collect();
            for (a, &i) in rest.iter().enumerate() {
                for (b, &j) in rest.iter().enumerate() {
                    let v = x.get(i, j) - x.get(i, p) * x.get(p, j) / &piv;
                    y.set(a, b, v);
                }
            }
            x = y;
            n -= 1;
        }
        (pos, neg)
    }

    pub fn is_zero(&self) -> bool {
        self.a.iter().all(Zero::is_zero)
    }

    pub fn max_abs(&self) -> Q {
        self.a.iter().map(|x| x.abs()).max().unwrap_or_else(Q::zero)
    }
}

/// `xᵀ J y` for the standard `J`.
pub fn omega(x: &[Q], y: &[Q]) -> Q {
    let d = x.len() / 2;
    let mut s = Q::zero();
    for i in 0..d {
        s += &x[i] * &y[d + i] - &x[d + i] * &y[i];
    }
    s
}

pub fn mat_vec(a: &QMat, v: &[Q]) -> Vec<Q> {
    (0..a.rows())
        .map(|i| a.row(i).iter().zip(v).map(|(x, y)| x * y).sum())
        .collect()
}

/// A `2d × 2d` rational matrix with `MᵀJM = J`.
#[derive(Clone, Debug, PartialEq)]
pub struct SymplecticMatrix {
    d: usize,
    m: QMat,
}

impl SymplecticMatrix {
    pub fn new(m: QMat) -> Result<Self> {
        if m.rows() != m.cols() || m.rows() % 2 != 0 || m.rows() == 0 {
            return Err(invalid(format!("expected a square matrix of even size, got {}x{}", m.rows(), m.cols())));
        }
        let d = m.rows() / 2;
        let j = QMat::j(d);
        if m.transpose().mul(&j).mul(&m) != j {
            return Err(Error::NotSymplectic);
        }
        Ok(SymplecticMatrix { d, m })
    }

    pub fn d(&self) -> usize {
        self.d
    }

    pub fn matrix(&self) -> &QMat {
        &self.m
    }

    /// `M⁻¹ = -J Mᵀ J`
    pub fn inverse(&self) -> SymplecticMatrix {
        let j = QMat::j(self.d);
        let inv = j.mul(&self.m.transpose()).mul(&j).scale(&qi(-1));
        SymplecticMatrix { d: self.d, m: inv }
    }

    pub fn mul(&self, o: &SymplecticMatrix) -> SymplecticMatrix {
        assert_eq!(self.d, o.d);
        SymplecticMatrix { d: self.d, m: self.m.mul(&o.m) }
    }

    /// `P⁻¹ M P`
    pub fn conjugate(&self, p: &SymplecticMatrix) -> SymplecticMatrix {
        p.inverse().mul(self).mul(p)
    }

    /// Symplectic direct sum: the first `d₁` coordinates of each half come
    /// from `self`, the rest from `other`.
    pub fn diamond(&self, o: &SymplecticMatrix) -> SymplecticMatrix {
        let (d1, d2) = (self.d, o.d);
        let d = d1 + d2;
        let mut r = QMat::zeros(2 * d, 2 * d);
        let place = |i: usize, dd: usize, off: usize| if i < dd { off + i } else { d + off + i - dd };
        for i in 0..2 * d1 {
            for j in 0..2 * d1 {
                r.set(place(i, d1, 0), place(j, d1, 0), self.m.get(i, j).clone());
            }
        }
        for i in 0..2 * d2 {
            for j in 0..2 * d2 {
                r.set(place(i, d2, d1), place(j, d2, d1), o.m.get(i, j).clone());
            }
        }
        SymplecticMatrix { d, m: r }
    }

    /// Shear `[[I, S], [0, I]]` for symmetric `S`.
    pub fn upper_shear(s: &QMat) -> Result<SymplecticMatrix> {
        Self::shear(s, true)
    }

    /// Shear `[[I, 0], [S, I]]` for symmetric `S`.
    pub fn lower_shear(s: &QMat) -> Result<SymplecticMatrix> {
        Self::shear(s, false)
    }

    fn shear(s: &QMat, upper: bool) -> Result<SymplecticMatrix> {
        if s.rows() != s.cols() || s != &s.transpose() {
            return Err(invalid("shear needs a symmetric square block"));
        }
        let d = s.rows();
        let mut r = QMat::identity(2 * d);
        for i in 0..d {
            for j in 0..d {
                if upper {
                    r.set(i, d + j, s.get(i, j).clone());
                } else {
                    r.set(d + i, j, s.get(i, j).clone());
                }
            }
        }
        Ok(SymplecticMatrix { d, m: r })
    }

    pub fn charpoly(&self) -> Poly {
        self.m.charpoly()
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::arith::q;

    #[test]
    fn charpoly_and_rank() {
        let a = QMat::from_ints(&[&[2, 1], &[1, 2]]);
        assert_eq!(a.charpoly(), Poly::from_ints(&[3, -4, 1]));
        assert_eq!(a.rank(), 2);
        let b = QMat::from_ints(&[&[1, 2, 3], &[2, 4, 6]]);
        assert_eq!(b.rank(), 1);
        let k = b.kernel();
        assert_eq!(k.cols(), 2);
        assert!(b.mul(&k).is_zero());
    }

    #[test]
    fn inertia_counts() {
        let a = QMat::from_ints(&[&[0, 1], &[1, 0]]);
        assert_eq!(a.inertia(), (1, 1));
        let b = QMat::from_ints(&[&[2, 0, 0], &[0, -3, 0], &[0, 0, 0]]);
        assert_eq!(b.inertia(), (1, 1));
        let c = QMat::from_ints(&[&[4, 2], &[2, 4]]);
        assert_eq!(c.inertia(), (2, 0));
    }

    #[test]
    fn symplectic_checks() {
        let r = QMat::from_ints(&[&[0, -1], &[1, 0]]);
        let m = SymplecticMatrix::new(r).unwrap();
        assert_eq!(m.mul(&m.inverse()).matrix(), &QMat::identity(2));
        assert_eq!(SymplecticMatrix::new(QMat::from_ints(&[&[2, 0], &[0, 1]])), Err(Error::NotSymplectic));
        let s = SymplecticMatrix::upper_shear(&QMat::from_rows(vec![vec![q(1, 2)]]).unwrap()).unwrap();
        let big = m.diamond(&s);
        assert!(SymplecticMatrix::new(big.matrix().clone()).is_ok());
        let c = big.conjugate(&SymplecticMatrix::lower_shear(&QMat::from_ints(&[&[1, 2], &[2, -1]])).unwrap());
        assert!(SymplecticMatrix::new(c.matrix().clone()).is_ok());
        assert_eq!(c.charpoly(), big.charpoly());
    }

    #[test]
    fn omega_is_standard() {
        assert_eq!(omega(&[qi(1), qi(0)], &[qi(0), qi(1)]), qi(1));
    }
}
