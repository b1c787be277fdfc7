//! Dense exact matrices over a [`Field`].
//!
//! Text dump format, one matrix per block:
//!
//! ```text
//! matrix <rows> <cols> <ring>
//! <entry> <entry> ...
//! ```
//!
//! with one line per row and entries written by the scalar `Display`.

use std::fmt;

use crate::error::{Error, Result};
use crate::scalar::{Field, Ring, Q};

#[derive(Clone, PartialEq, Eq, Hash)]
pub struct Mat<F> {
    rows: usize,
    cols: usize,
    data: Vec<F>,
}

impl<F: Field> Mat<F> {
    pub fn zeros(rows: usize, cols: usize) -> Self {
        Mat { rows, cols, data: vec![F::zero(); rows * cols] }
    }

    pub fn identity(n: usize) -> Self {
        let mut m = Self::zeros(n, n);
        for i in 0..n {
            m.set(i, i, F::one());
        }
        m
    }

    /// Elementary matrix `E_ij` of size `n`.
    pub fn unit(n: usize, i: usize, j: usize) -> Self {
        let mut m = Self::zeros(n, n);
        m.set(i, j, F::one());
        m
    }

    pub fn from_rows(rows: Vec<Vec<F>>) -> Result<Self> {
        let r = rows.len();
        let c = rows.first().map_or(0, Vec::len);
        if rows.iter().any(|row| row.len() != c) {
            return Err(Error::Dimension("ragged rows".into()));
        }
        Ok(Mat { rows: r, cols: c, data: rows.into_iter().flatten().collect() })
    }

    pub fn from_fn(rows: usize, cols: usize, f: impl Fn(usize, usize) -> F) -> Self {
        let mut data = Vec::with_capacity(rows * cols);
        for i in 0..rows {
            for j in 0..cols {
                data.push(f(i, j));
            }
        }
        Mat { rows, cols, data }
    }

    pub fn diag(d: &[F]) -> Self {
        let mut m = Self::zeros(d.len(), d.len());
        for (i, x) in d.iter().enumerate() {
            m.set(i, i, x.clone());
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

    pub fn get(&self, i: usize, j: usize) -> &F {
        &self.data[i * self.cols + j]
    }

    pub fn set(&mut self, i: usize, j: usize, x: F) {
        self.data[i * self.cols + j] = x;
    }

    pub fn row(&self, i: usize) -> &[F] {
        &self.data[i * self.cols..(i + 1) * self.cols]
    }

    pub fn entries(&self) -> &[F] {
        &self.data
    }

    pub fn is_zero(&self) -> bool {
        self.data.iter().all(F::is_zero)
    }

    pub fn map<G: Field>(&self, f: impl Fn(&F) -> G) -> Mat<G> {
        Mat { rows: self.rows, cols: self.cols, data: self.data.iter().map(f).collect() }
    }

    fn same_shape(&self, o: &Self) -> Result<()> {
        if self.rows != o.rows || self.cols != o.cols {
            return Err(Error::Dimension(format!(
                "{}x{} vs {}x{}",
                self.rows, self.cols, o.rows, o.cols
            )));
        }
        Ok(())
    }

    pub fn add(&self, o: &Self) -> Self {
        self.same_shape(o).expect("matrix add shape");
        let data = self.data.iter().zip(&o.data).map(|(a, b)| a.add(b)).collect();
        Mat { rows: self.rows, cols: self.cols, data }
    }

    pub fn sub(&self, o: &Self) -> Self {
        self.same_shape(o).expect("matrix sub shape");
        let data = self.data.iter().zip(&o.data).map(|(a, b)| a.sub(b)).collect();
        Mat { rows: self.rows, cols: self.cols, data }
    }

    pub fn neg(&self) -> Self {
        self.map(F::neg)
    }

    /// Left scalar multiple `c·self`.
    pub fn scale(&self, c: &F) -> Self {
        self.map(|x| c.mul(x))
    }

    pub fn mul(&self, o: &Self) -> Self {
        assert_eq!(self.cols, o.rows, "matrix product shape");
        let mut out = Self::zeros(self.rows, o.cols);
        for i in 0..self.rows {
            for k in 0..self.cols {
                let a = self.get(i, k);
                if a.is_zero() {
                    continue;
                }
                for j in 0..o.cols {
                    let b = o.get(k, j);
                    if !b.is_zero() {
                        let v = out.get(i, j).add(&a.mul(b));
                        out.set(i, j, v);
                    }
                }
            }
        }
        out
    }

    pub fn checked_mul(&self, o: &Self) -> Result<Self> {
        if self.cols != o.rows {
            return Err(Error::Dimension(format!(
                "cannot multiply {}x{} by {}x{}",
                self.rows, self.cols, o.rows, o.cols
            )));
        }
        Ok(self.mul(o))
    }

    pub fn mul_vec(&self, v: &[F]) -> Vec<F> {
        (0..self.rows)
            .map(|i| {
                self.row(i)
                    .iter()
                    .zip(v)
                    .fold(F::zero(), |acc, (a, b)| acc.add(&a.mul(b)))
            })
            .collect()
    }

    /// `[self, o] = self·o − o·self`.
    pub fn commutator(&self, o: &Self) -> Self {
        self.mul(o).sub(&o.mul(self))
    }

    pub fn transpose(&self) -> Self {
        Self::from_fn(self.cols, self.rows, |i, j| self.get(j, i).clone())
    }

    /// Entrywise conjugate of the transpose.
    pub fn adjoint(&self) -> Self {
        Self::from_fn(self.cols, self.rows, |i, j| self.get(j, i).conj())
    }

    pub fn conj(&self) -> Self {
        self.map(F::conj)
    }

    pub fn trace(&self) -> F {
        (0..self.rows.min(self.cols)).fold(F::zero(), |acc, i| acc.add(self.get(i, i)))
    }

    /// Principal submatrix on the given rows/columns.
    pub fn select(&self, rows: &[usize], cols: &[usize]) -> Self {
        Self::from_fn(rows.len(), cols.len(), |i, j| self.get(rows[i], cols[j]).clone())
    }

    /// Block-diagonal sum.
    pub fn direct_sum(&self, o: &Self) -> Self {
        let mut m = Self::zeros(self.rows + o.rows, self.cols + o.cols);
        for i in 0..self.rows {
            for j in 0..self.cols {
                m.set(i, j, self.get(i, j).clone());
            }
        }
        for i in 0..o.rows {
            for j in 0..o.cols {
                m.set(self.rows + i, self.cols + j, o.get(i, j).clone());
            }
        }
        m
    }

    pub fn pow(&self, k: u32) -> Self {
        let mut out = Self::identity(self.rows);
        for _ in 0..k {
            out = out.mul(self);
        }
        out
    }

    pub fn is_nilpotent(&self) -> bool {
        self.pow(self.rows as u32).is_zero()
    }

    /// Row-reduced echelon form and pivot columns.
    pub fn rref(&self) -> (Self, Vec<usize>) {
        let mut m = self.clone();
        let mut pivots = Vec::new();
        let mut r = 0;
        for c in 0..m.cols {
            if r == m.rows {
                break;
            }
            let Some(p) = (r..m.rows).find(|&i| !m.get(i, c).is_zero()) else {
                continue;
            };
            m.swap_rows(r, p);
            let inv = m.get(r, c).inv().expect("nonzero pivot");
            for j in c..m.cols {
                let v = inv.mul(m.get(r, j));
                m.set(r, j, v);
            }
            for i in 0..m.rows {
                if i == r || m.get(i, c).is_zero() {
                    continue;
                }
                let f = m.get(i, c).clone();
                for j in c..m.cols {
                    let v = m.get(i, j).sub(&f.mul(m.get(r, j)));
                    m.set(i, j, v);
                }
            }
            pivots.push(c);
            r += 1;
        }
        (m, pivots)
    }

    fn swap_rows(&mut self, a: usize, b: usize) {
        if a == b {
            return;
        }
        for j in 0..self.cols {
            self.data.swap(a * self.cols + j, b * self.cols + j);
        }
    }

    pub fn rank(&self) -> usize {
        self.rref().1.len()
    }

    /// Basis of `{x : self·x = 0}`.
    pub fn nullspace(&self) -> Vec<Vec<F>> {
        let (r, pivots) = self.rref();
        let free: Vec<usize> = (0..self.cols).filter(|c| !pivots.contains(c)).collect();
        free.iter()
            .map(|&f| {
                let mut v = vec![F::zero(); self.cols];
                v[f] = F::one();
                for (k, &p) in pivots.iter().enumerate() {
                    v[p] = r.get(k, f).neg();
                }
                v
            })
            .collect()
    }

    /// Determinant by elimination; meaningful for commutative fields.
    pub fn det(&self) -> Result<F> {
        if !self.is_square() {
            return Err(Error::Dimension("determinant of non-square matrix".into()));
        }
        let mut m = self.clone();
        let n = m.rows;
        let mut det = F::one();
        for c in 0..n {
            let Some(p) = (c..n).find(|&i| !m.get(i, c).is_zero()) else {
                return Ok(F::zero());
            };
            if p != c {
                m.swap_rows(p, c);
                det = det.neg();
            }
            let piv = m.get(c, c).clone();
            det = det.mul(&piv);
            let inv = piv.inv().expect("nonzero pivot");
            for i in c + 1..n {
                if m.get(i, c).is_zero() {
                    continue;
                }
                let f = m.get(i, c).mul(&inv);
                for j in c..n {
                    let v = m.get(i, j).sub(&f.mul(m.get(c, j)));
                    m.set(i, j, v);
                }
            }
        }
        Ok(det)
    }

    pub fn inverse(&self) -> Option<Self> {
        if !self.is_square() {
            return None;
        }
        let n = self.rows;
        let mut aug = Self::zeros(n, 2 * n);
        for i in 0..n {
            for j in 0..n {
                aug.set(i, j, self.get(i, j).clone());
            }
            aug.set(i, n + i, F::one());
        }
        let (r, pivots) = aug.rref();
        if pivots.len() < n || pivots[n - 1] != n - 1 {
            return None;
        }
        Some(Self::from_fn(n, n, |i, j| r.get(i, n + j).clone()))
    }

    pub fn dump(&self) -> String {
        let mut s = format!("matrix {} {} {}\n", self.rows, self.cols, F::RING);
        for i in 0..self.rows {
            let line: Vec<String> = self.row(i).iter().map(|x| x.to_string()).collect();
            s.push_str(&line.join(" "));
            s.push('\n');
        }
        s
    }

    /// Parses one dumped matrix; returns it and the unread remainder.
    pub fn parse_dump(src: &str) -> Result<(Self, &str)> {
        let src = src.trim_start();
        let (header, mut rest) = src.split_once('\n').unwrap_or((src, ""));
        let parts: Vec<&str> = header.split_whitespace().collect();
        if parts.len() != 4 || parts[0] != "matrix" {
            return Err(Error::Parse(format!("bad matrix header `{header}`")));
        }
        let dim = |s: &str| s.parse::<usize>().map_err(|_| Error::Parse(format!("bad dimension `{s}`")));
        let (r, c) = (dim(parts[1])?, dim(parts[2])?);
        let ring: Ring = parts[3].parse()?;
        if ring != F::RING {
            return Err(Error::RingMismatch(format!("dump is over {ring}, expected {}", F::RING)));
        }
        let mut rows = Vec::with_capacity(r);
        for i in 0..r {
            let (line, tail) = rest.split_once('\n').unwrap_or((rest, ""));
            rest = tail;
            let row = line
                .split_whitespace()
                .map(F::parse_str)
                .collect::<Result<Vec<F>>>()?;
            if row.len() != c {
                return Err(Error::Parse(format!("row {i} has {} entries, expected {c}", row.len())));
            }
            rows.push(row);
        }
        let m = if r == 0 { Self::zeros(0, c) } else { Self::from_rows(rows)? };
        Ok((m, rest))
    }

    /// Parses every matrix in a multi-matrix dump.
    pub fn parse_dump_all(mut src: &str) -> Result<Vec<Self>> {
        let mut out = Vec::new();
        while !src.trim().is_empty() {
            let (m, rest) = Self::parse_dump(src)?;
            out.push(m);
            src = rest;
        }
        Ok(out)
    }
}

impl Mat<Q> {
    pub fn from_ints(rows: &[&[i64]]) -> Self {
        Mat::from_rows(rows.iter().map(|r| r.iter().map(|&x| Q::from(x)).collect()).collect())
            .expect("rectangular")
    }
}

impl<F: Field> fmt::Debug for Mat<F> {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}", self.dump())
    }
}

impl<F: Field> fmt::Display for Mat<F> {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        for i in 0..self.rows {
            let line: Vec<String> = self.row(i).iter().map(|x| x.to_string()).collect();
            writeln!(f, "[{}]", line.join(" "))?;
        }
        Ok(())
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::scalar::Qi;
    use proptest::prelude::*;

    fn small() -> impl Strategy<Value = Mat<Q>> {
        (1usize..5).prop_flat_map(|n| {
            prop::collection::vec(-3i64..4, n * n)
                .prop_map(move |v| Mat::from_fn(n, n, |i, j| Q::from(v[i * n + j])))
        })
    }

    #[test]
    fn rref_and_nullspace() {
        let m = Mat::from_ints(&[&[1, 2, 3], &[2, 4, 6], &[1, 0, 1]]);
        assert_eq!(m.rank(), 2);
        let ns = m.nullspace();
        assert_eq!(ns.len(), 1);
        assert!(m.mul_vec(&ns[0]).iter().all(Q::is_zero));
    }

    #[test]
    fn determinant_examples() {
        assert_eq!(Mat::from_ints(&[&[2, 1], &[1, 1]]).det().unwrap(), Q::one());
        assert_eq!(Mat::from_ints(&[&[0, 1], &[1, 0]]).det().unwrap(), Q::from(-1));
        let z = Mat::<Qi>::diag(&[Qi::i(), Qi::i()]);
        assert_eq!(z.det().unwrap(), Qi::from_i64(-1));
    }

    #[test]
    fn dump_roundtrip_gaussian() {
        let m = Mat::from_rows(vec![
            vec![Qi::new(Q::new(1, 2), Q::from(-3)), Qi::zero()],
            vec![Qi::i(), Qi::from_i64(7)],
        ])
        .unwrap();
        let text = format!("{}{}", m.dump(), m.dump());
        let back = Mat::<Qi>::parse_dump_all(&text).unwrap();
        assert_eq!(back, vec![m.clone(), m]);
        assert!(Mat::<Q>::parse_dump(&back[0].dump()).is_err());
    }

    proptest! {
        #[test]
        fn inverse_and_det(m in small()) {
            let d = m.det().unwrap();
            match m.inverse() {
                Some(inv) => {
                    prop_assert!(!d.is_zero());
                    prop_assert_eq!(m.mul(&inv), Mat::identity(m.rows()));
                    prop_assert_eq!(inv.det().unwrap().mul(&d), Q::one());
                }
                None => prop_assert!(d.is_zero()),
            }
        }

        #[test]
        fn dump_roundtrip(m in small()) {
            let text = m.dump();
            let (back, rest) = Mat::<Q>::parse_dump(&text).unwrap();
            prop_assert_eq!(back, m);
            prop_assert!(rest.is_empty());
        }

        #[test]
        fn det_multiplicative(a in small(), seed in 0i64..50) {
            let n = a.rows();
            let b = Mat::from_fn(n, n, |i, j| Q::from((seed + 3 * i as i64 - j as i64) % 5));
            prop_assert_eq!(a.mul(&b).det().unwrap(), a.det().unwrap().mul(&b.det().unwrap()));
        }
    }
}
