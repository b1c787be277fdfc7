//! Univariate polynomials over a commutative exact field.

use std::fmt;

use crate::matrix::Mat;
use crate::scalar::Field;

/// Coefficients from the constant term up; no trailing zeros.
#[derive(Clone, PartialEq, Eq)]
pub struct Poly<F> {
    c: Vec<F>,
}

impl<F: Field> Poly<F> {
    pub fn new(mut c: Vec<F>) -> Self {
        while c.last().is_some_and(F::is_zero) {
            c.pop();
        }
        Poly { c }
    }

    pub fn zero() -> Self {
        Poly { c: Vec::new() }
    }

    pub fn constant(a: F) -> Self {
        Poly::new(vec![a])
    }

    pub fn x() -> Self {
        Poly::new(vec![F::zero(), F::one()])
    }

    pub fn is_zero(&self) -> bool {
        self.c.is_empty()
    }

    /// Degree; `None` for the zero polynomial.
    pub fn degree(&self) -> Option<usize> {
        self.c.len().checked_sub(1)
    }

    pub fn coeffs(&self) -> &[F] {
        &self.c
    }

    pub fn lead(&self) -> Option<&F> {
        self.c.last()
    }

    pub fn add(&self, o: &Self) -> Self {
        let n = self.c.len().max(o.c.len());
        let z = F::zero();
        Poly::new(
            (0..n)
                .map(|i| self.c.get(i).unwrap_or(&z).add(o.c.get(i).unwrap_or(&z)))
                .collect(),
        )
    }

    pub fn sub(&self, o: &Self) -> Self {
        self.add(&o.scale(&F::one().neg()))
    }

    pub fn scale(&self, a: &F) -> Self {
        Poly::new(self.c.iter().map(|x| a.mul(x)).collect())
    }

    pub fn mul(&self, o: &Self) -> Self {
        if self.is_zero() || o.is_zero() {
            return Poly::zero();
        }
        let mut c = vec![F::zero(); self.c.len() + o.c.len() - 1];
        for (i, a) in self.c.iter().enumerate() {
            for (j, b) in o.c.iter().enumerate() {
                c[i + j] = c[i + j].add(&a.mul(b));
            }
        }
        Poly::new(c)
    }

    /// Quotient and remainder; panics on division by zero.
    pub fn divrem(&self, d: &Self) -> (Self, Self) {
        let dd = d.degree().expect("division by zero polynomial");
        let inv = d.lead().unwrap().inv().unwrap();
        let mut r = self.c.clone();
        if r.len() <= dd {
            return (Poly::zero(), self.clone());
        }
        let mut q = vec![F::zero(); r.len() - dd];
        for k in (0..q.len()).rev() {
            let f = r[k + dd].mul(&inv);
            if f.is_zero() {
                continue;
            }
            for (j, b) in d.c.iter().enumerate() {
                r[k + j] = r[k + j].sub(&f.mul(b));
            }
            q[k] = f;
        }
        r.truncate(dd);
        (Poly::new(q), Poly::new(r))
    }

    pub fn rem(&self, d: &Self) -> Self {
        self.divrem(d).1
    }

    pub fn monic(&self) -> Self {
        match self.lead() {
            Some(l) => self.scale(&l.inv().unwrap()),
            None => Poly::zero(),
        }
    }

    pub fn gcd(&self, o: &Self) -> Self {
        let (mut a, mut b) = (self.clone(), o.clone());
        while !b.is_zero() {
            let r = a.rem(&b);
            a = b;
            b = r;
        }
        a.monic()
    }

    /// `(g, s, t)` with `s·self + t·o = g = gcd`.
    pub fn ext_gcd(&self, o: &Self) -> (Self, Self, Self) {
        let (mut r0, mut r1) = (self.clone(), o.clone());
        let (mut s0, mut s1) = (Poly::constant(F::one()), Poly::zero());
        let (mut t0, mut t1) = (Poly::zero(), Poly::constant(F::one()));
        while !r1.is_zero() {
            let (q, r) = r0.divrem(&r1);
            let s = s0.sub(&q.mul(&s1));
            let t = t0.sub(&q.mul(&t1));
            r0 = std::mem::replace(&mut r1, r);
            s0 = std::mem::replace(&mut s1, s);
            t0 = std::mem::replace(&mut t1, t);
        }
        match r0.lead().cloned() {
            Some(l) => {
                let inv = l.inv().unwrap();
                (r0.scale(&inv), s0.scale(&inv), t0.scale(&inv))
            }
            None => (r0, s0, t0),
        }
    }

    /// Inverse of `self` modulo `m`, when coprime.
    pub fn inv_mod(&self, m: &Self) -> Option<Self> {
        let (g, s, _) = self.ext_gcd(m);
        (g.degree() == Some(0)).then(|| s.rem(m))
    }

    pub fn derivative(&self) -> Self {
        Poly::new(
            self.c
                .iter()
                .enumerate()
                .skip(1)
                .map(|(i, a)| F::from_i64(i as i64).mul(a))
                .collect(),
        )
    }

    /// Product of the distinct monic irreducible factors.
    pub fn squarefree_part(&self) -> Self {
        if self.degree().unwrap_or(0) == 0 {
            return self.monic();
        }
        self.divrem(&self.gcd(&self.derivative())).0.monic()
    }

    pub fn is_squarefree(&self) -> bool {
        self.gcd(&self.derivative()).degree().unwrap_or(0) == 0
    }

    pub fn eval(&self, x: &F) -> F {
        self.c.iter().rev().fold(F::zero(), |acc, a| acc.mul(x).add(a))
    }

    /// `self(m)` by Horner's rule.
    pub fn eval_mat(&self, m: &Mat<F>) -> Mat<F> {
        let n = m.rows();
        let mut acc = Mat::zeros(n, n);
        for a in self.c.iter().rev() {
            acc = acc.mul(m).add(&Mat::identity(n).scale(a));
        }
        acc
    }

    /// `self(g) mod m`.
    pub fn compose_mod(&self, g: &Self, m: &Self) -> Self {
        let mut acc = Poly::zero();
        for a in self.c.iter().rev() {
            acc = acc.mul(g).add(&Poly::constant(a.clone())).rem(m);
        }
        acc
    }

    /// Characteristic polynomial `det(x·I − m)` (Faddeev–LeVerrier).
    pub fn charpoly(m: &Mat<F>) -> Self {
        let n = m.rows();
        let mut c = vec![F::zero(); n + 1];
        c[n] = F::one();
        let mut mk = Mat::zeros(n, n);
        for k in 1..=n {
            mk = m.mul(&mk.add(&Mat::identity(n).scale(&c[n + 1 - k])));
            let tr = mk.trace();
            c[n - k] = tr.neg().mul(&F::from_i64(k as i64).inv().unwrap());
        }
        Poly::new(c)
    }

    /// Minimal polynomial of `m`, from the first linear dependency among its powers.
    pub fn minpoly(m: &Mat<F>) -> Self {
        let n = m.rows();
        let mut powers: Vec<Vec<F>> = vec![Mat::<F>::identity(n).entries().to_vec()];
        let mut cur = Mat::identity(n);
        for d in 1..=n {
            cur = cur.mul(m);
            powers.push(cur.entries().to_vec());
            let cols = Mat::from_fn(n * n, d + 1, |i, j| powers[j][i].clone());
            let ns = cols.nullspace();
            if let Some(v) = ns.first() {
                return Poly::new(v.clone()).monic();
            }
        }
        Poly::charpoly(m)
    }
}

impl<F: Field> fmt::Debug for Poly<F> {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.c.is_empty() {
            return f.write_str("0");
        }
        let terms: Vec<String> = self
            .c
            .iter()
            .enumerate()
            .filter(|(_, a)| !a.is_zero())
            .map(|(i, a)| match i {
                0 => format!("({a})"),
                1 => format!("({a})x"),
                _ => format!("({a})x^{i}"),
            })
            .collect();
        f.write_str(&terms.join(" + "))
    }
}
