//! Rational subspaces of `Q^d` and of square matrix spaces over a [`Field`].
//!
//! Matrix spaces are always `Q`-spans, so over `Qi` they model real Lie
//! algebras and their dimension is the real dimension.

use std::fmt;

use crate::matrix::Mat;
use crate::scalar::{Field, Q};

/// A subspace of `Q^d` kept in reduced row-echelon form.
#[derive(Clone, PartialEq, Eq)]
pub struct Subspace {
    d: usize,
    rows: Vec<Vec<Q>>,
    pivots: Vec<usize>,
}

impl Subspace {
    pub fn zero(d: usize) -> Self {
        Subspace { d, rows: Vec::new(), pivots: Vec::new() }
    }

    pub fn full(d: usize) -> Self {
        Subspace::span(d, (0..d).map(|i| unit(d, i)).collect())
    }

    pub fn span(d: usize, vecs: Vec<Vec<Q>>) -> Self {
        if vecs.is_empty() {
            return Subspace::zero(d);
        }
        let m = Mat::from_rows(vecs).expect("equal lengths");
        assert_eq!(m.cols(), d, "vector length");
        let (r, pivots) = m.rref();
        let rows = (0..pivots.len()).map(|i| r.row(i).to_vec()).collect();
        Subspace { d, rows, pivots }
    }

    /// `{x : c·x = 0 for every constraint row c}`.
    pub fn from_constraints(d: usize, cons: Vec<Vec<Q>>) -> Self {
        if cons.is_empty() {
            return Subspace::full(d);
        }
        let m = Mat::from_rows(cons).expect("equal lengths");
        Subspace::span(d, m.nullspace())
    }

    pub fn ambient(&self) -> usize {
        self.d
    }

    pub fn dim(&self) -> usize {
        self.rows.len()
    }

    pub fn basis(&self) -> &[Vec<Q>] {
        &self.rows
    }

    /// Remainder of `v` after reduction by the echelon basis; zero iff `v` is inside.
    pub fn residual(&self, v: &[Q]) -> Vec<Q> {
        let mut r = v.to_vec();
        for (row, &p) in self.rows.iter().zip(&self.pivots) {
            if r[p].is_zero() {
                continue;
            }
            let f = r[p].clone();
            for (x, y) in r.iter_mut().zip(row) {
                if !y.is_zero() {
                    *x = &*x - &(&f * y);
                }
            }
        }
        r
    }

    pub fn contains(&self, v: &[Q]) -> bool {
        self.residual(v).iter().all(Q::is_zero)
    }

    /// Coordinates of `v` in the echelon basis, if `v` lies in the space.
    pub fn coords(&self, v: &[Q]) -> Option<Vec<Q>> {
        if !self.contains(v) {
            return None;
        }
        Some(self.pivots.iter().map(|&p| v[p].clone()).collect())
    }

    pub fn sum(&self, o: &Subspace) -> Subspace {
        Subspace::span(self.d, self.rows.iter().chain(&o.rows).cloned().collect())
    }

    pub fn intersect(&self, o: &Subspace) -> Subspace {
        // Solve Σ a_k r_k ∈ o.
        let k = self.dim();
        if k == 0 {
            return self.clone();
        }
        let images: Vec<Vec<Q>> = self.rows.iter().map(|r| o.residual(r)).collect();
        let m = Mat::from_fn(self.d, k, |i, j| images[j][i].clone());
        let combos = m.nullspace();
        Subspace::span(self.d, combos.iter().map(|c| combine(&self.rows, c)).collect())
    }

    pub fn is_subspace_of(&self, o: &Subspace) -> bool {
        self.rows.iter().all(|r| o.contains(r))
    }

    /// Adds `v` to the span, keeping the basis reduced. Returns whether the dimension grew.
    pub fn insert(&mut self, v: &[Q]) -> bool {
        let mut r = self.residual(v);
        let Some(p) = r.iter().position(|x| !x.is_zero()) else {
            return false;
        };
        let inv = r[p].inv().expect("pivot is nonzero");
        for x in r.iter_mut().filter(|x| !x.is_zero()) {
            *x = &*x * &inv;
        }
        for row in &mut self.rows {
            if row[p].is_zero() {
                continue;
            }
            let f = row[p].clone();
            for (x, y) in row.iter_mut().zip(&r) {
                if !y.is_zero() {
                    *x = &*x - &(&f * y);
                }
            }
        }
        let at = self.pivots.partition_point(|&q| q < p);
        self.rows.insert(at, r);
        self.pivots.insert(at, p);
        true
    }
}

fn unit(d: usize, i: usize) -> Vec<Q> {
    let mut v = vec![Q::zero(); d];
    v[i] = Q::one();
    v
}

fn combine(rows: &[Vec<Q>], c: &[Q]) -> Vec<Q> {
    let d = rows.first().map_or(0, Vec::len);
    let mut out = vec![Q::zero(); d];
    for (row, a) in rows.iter().zip(c) {
        if a.is_zero() {
            continue;
        }
        for (x, y) in out.iter_mut().zip(row) {
            *x = &*x + &(a * y);
        }
    }
    out
}

impl fmt::Debug for Subspace {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "Subspace(dim {} in Q^{})", self.dim(), self.d)
    }
}

/// Flattened rational coordinates of a matrix.
pub fn flatten<F: Field>(m: &Mat<F>) -> Vec<Q> {
    m.entries().iter().flat_map(|x| x.coords()).collect()
}

pub fn unflatten<F: Field>(n: usize, v: &[Q]) -> Mat<F> {
    Mat::from_fn(n, n, |i, j| {
        let k = (i * n + j) * F::COORDS;
        F::from_coords(&v[k..k + F::COORDS])
    })
}

/// A `Q`-subspace of `n×n` matrices over `F`.
#[derive(Clone, PartialEq, Eq)]
pub struct MatSpace<F> {
    n: usize,
    sub: Subspace,
    _f: std::marker::PhantomData<F>,
}

impl<F: Field> MatSpace<F> {
    fn wrap(n: usize, sub: Subspace) -> Self {
        MatSpace { n, sub, _f: std::marker::PhantomData }
    }

    fn d(n: usize) -> usize {
        n * n * F::COORDS
    }

    pub fn zero(n: usize) -> Self {
        Self::wrap(n, Subspace::zero(Self::d(n)))
    }

    /// All `n×n` matrices over `F`.
    pub fn full(n: usize) -> Self {
        Self::wrap(n, Subspace::full(Self::d(n)))
    }

    pub fn span(n: usize, mats: &[Mat<F>]) -> Self {
        Self::wrap(n, Subspace::span(Self::d(n), mats.iter().map(flatten).collect()))
    }

    pub fn from_subspace(n: usize, sub: Subspace) -> Self {
        assert_eq!(sub.ambient(), Self::d(n));
        Self::wrap(n, sub)
    }

    pub fn subspace(&self) -> &Subspace {
        &self.sub
    }

    pub fn size(&self) -> usize {
        self.n
    }

    pub fn dim(&self) -> usize {
        self.sub.dim()
    }

    pub fn basis(&self) -> Vec<Mat<F>> {
        self.sub.basis().iter().map(|v| unflatten(self.n, v)).collect()
    }

    pub fn contains(&self, m: &Mat<F>) -> bool {
        self.sub.contains(&flatten(m))
    }

    pub fn sum(&self, o: &Self) -> Self {
        Self::wrap(self.n, self.sub.sum(&o.sub))
    }

    pub fn intersect(&self, o: &Self) -> Self {
        Self::wrap(self.n, self.sub.intersect(&o.sub))
    }

    pub fn is_subspace_of(&self, o: &Self) -> bool {
        self.sub.is_subspace_of(&o.sub)
    }

    /// `{x ∈ self : f(x) = 0}` for a `Q`-linear `f`.
    pub fn kernel_of(&self, f: impl Fn(&Mat<F>) -> Vec<Q>) -> Self {
        let basis = self.basis();
        if basis.is_empty() {
            return self.clone();
        }
        let images: Vec<Vec<Q>> = basis.iter().map(&f).collect();
        let rows = images.first().map_or(0, Vec::len);
        if rows == 0 {
            return self.clone();
        }
        let m = Mat::from_fn(rows, basis.len(), |i, j| images[j][i].clone());
        let combos = m.nullspace();
        let vecs = combos.iter().map(|c| combine(self.sub.basis(), c)).collect();
        Self::wrap(self.n, Subspace::span(Self::d(self.n), vecs))
    }

    /// Image of a `Q`-linear map into `m×m` matrices.
    pub fn image(&self, m: usize, f: impl Fn(&Mat<F>) -> Mat<F>) -> Self {
        MatSpace::span(m, &self.basis().iter().map(f).collect::<Vec<_>>())
    }

    /// `[A, B] = span{[a, b]}`.
    pub fn bracket(&self, o: &Self) -> Self {
        let (a, b) = (self.basis(), o.basis());
        let same = self == o;
        let mut sub = Subspace::zero(self.sub.ambient());
        for (k, x) in a.iter().enumerate() {
            // [x, y] = −[y, x]: for a space with itself, half the pairs suffice.
            let ys = if same { &b[k + 1..] } else { &b[..] };
            for y in ys {
                let c = x.commutator(y);
                if !c.is_zero() {
                    sub.insert(&flatten(&c));
                }
            }
        }
        Self::wrap(self.n, sub)
    }

    pub fn derived(&self) -> Self {
        self.bracket(self)
    }

    pub fn is_closed(&self) -> bool {
        let b = self.basis();
        b.iter().enumerate().all(|(k, x)| b[k + 1..].iter().all(|y| self.contains(&x.commutator(y))))
    }

    pub fn is_abelian(&self) -> bool {
        self.derived().dim() == 0
    }

    pub fn derived_series(&self) -> Vec<Self> {
        let mut out = vec![self.clone()];
        loop {
            let next = out.last().unwrap().derived();
            if next.dim() == out.last().unwrap().dim() {
                return out;
            }
            let done = next.dim() == 0;
            out.push(next);
            if done {
                return out;
            }
        }
    }

    pub fn is_solvable(&self) -> bool {
        self.derived_series().last().unwrap().dim() == 0
    }

    /// Elements of `self` commuting with every element of `o`.
    pub fn centralizer_of(&self, o: &Self) -> Self {
        let ob = o.basis();
        self.kernel_of(|x| ob.iter().flat_map(|y| flatten(&x.commutator(y))).collect())
    }

    /// Elements `x` of `self` with `[x, o] ⊆ target`.
    pub fn bracket_into(&self, o: &Self, target: &Self) -> Self {
        let ob = o.basis();
        self.kernel_of(|x| ob.iter().flat_map(|y| target.sub.residual(&flatten(&x.commutator(y)))).collect())
    }

    pub fn center(&self) -> Self {
        self.centralizer_of(self)
    }
}

impl<F: Field> fmt::Debug for MatSpace<F> {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "MatSpace(n={}, dim={})", self.n, self.dim())
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::scalar::Qi;

    fn upper(n: usize) -> MatSpace<Q> {
        let mut v = Vec::new();
        for i in 0..n {
            for j in i..n {
                v.push(Mat::unit(n, i, j));
            }
        }
        MatSpace::span(n, &v)
    }

    #[test]
    fn borel_is_solvable() {
        let b = upper(4);
        assert_eq!(b.dim(), 10);
        assert!(b.is_closed());
        assert!(b.is_solvable());
        assert!(!MatSpace::<Q>::full(2).is_solvable());
        assert_eq!(b.center().dim(), 1);
    }

    #[test]
    fn intersection_dimension() {
        let b = upper(3);
        let lower = MatSpace::span(3, &b.basis().iter().map(Mat::transpose).collect::<Vec<_>>());
        assert_eq!(b.intersect(&lower).dim(), 3);
        assert_eq!(b.sum(&lower).dim(), 9);
    }

    #[test]
    fn gaussian_spaces_are_real() {
        // u(1) inside gl(1, Qi): the span of i.
        let u1 = MatSpace::span(1, &[Mat::diag(&[Qi::i()])]);
        assert_eq!(u1.dim(), 1);
        assert!(!u1.contains(&Mat::identity(1)));
        assert_eq!(MatSpace::<Qi>::full(2).dim(), 8);
        let skew = MatSpace::<Qi>::full(2).kernel_of(|m| flatten(&m.add(&m.adjoint())));
        assert_eq!(skew.dim(), 4);
    }
}
