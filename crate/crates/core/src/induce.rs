//! Characters of `P = MAN`, algebraically induced modules at a window, and
//! the character utilities `ψ_B` and the Voiculescu positivity test.
//!
//! The induced module `U(g_C) ⊗_p E_κ` is realized on the PBW basis
//! `y^α ⊗ e` of `U(n⁻) ⊗ E_κ`, where `n⁻ = θ(n)` is the opposite nilradical.

use std::collections::BTreeMap;

use crate::error::{Error, Result};
use crate::matrix::Mat;
use crate::realform::{theta, ManDecomp};
use crate::scalar::{Field, Q, Qi};
use crate::space::MatSpace;

/// Coordinates with respect to a `C`-basis of complex matrices.
#[derive(Clone, Debug)]
pub struct Solver {
    basis: Vec<Mat<Qi>>,
    rows: Vec<(usize, usize)>,
    inv: Mat<Qi>,
}

impl Solver {
    pub fn new(basis: Vec<Mat<Qi>>) -> Result<Solver> {
        let Some(first) = basis.first() else {
            return Ok(Solver { basis, rows: Vec::new(), inv: Mat::zeros(0, 0) });
        };
        let c = first.rows();
        let entries: Vec<(usize, usize)> = (0..c).flat_map(|i| (0..c).map(move |j| (i, j))).collect();
        // Columns of `at` are entries; its pivots pick independent entries.
        let at = Mat::from_fn(basis.len(), entries.len(), |k, e| basis[k].get(entries[e].0, entries[e].1).clone());
        let (_, pivots) = at.rref();
        if pivots.len() < basis.len() {
            return Err(Error::Invalid("matrices are not linearly independent over C".into()));
        }
        let rows: Vec<(usize, usize)> = pivots.iter().map(|&p| entries[p]).collect();
        let sq = Mat::from_fn(basis.len(), basis.len(), |r, k| basis[k].get(rows[r].0, rows[r].1).clone());
        let inv = sq.inverse().expect("pivot entries give an invertible system");
        Ok(Solver { basis, rows, inv })
    }

    pub fn len(&self) -> usize {
        self.basis.len()
    }

    pub fn is_empty(&self) -> bool {
        self.basis.is_empty()
    }

    pub fn basis(&self) -> &[Mat<Qi>] {
        &self.basis
    }

    /// `None` when `x` is outside the complex span.
    pub fn coords(&self, x: &Mat<Qi>) -> Option<Vec<Qi>> {
        if self.basis.is_empty() {
            return x.is_zero().then(Vec::new);
        }
        let rhs: Vec<Qi> = self.rows.iter().map(|&(i, j)| x.get(i, j).clone()).collect();
        let z = self.inv.mul_vec(&rhs);
        let back = z.iter().zip(&self.basis).fold(Mat::zeros(x.rows(), x.cols()), |acc, (c, b)| acc.add(&b.scale(c)));
        (&back == x).then_some(z)
    }
}

// ------------------------------------------------------------ characters

/// `σ` on the `a`-basis of a [`ManDecomp`] and `κ` given by the images of
/// its `m`-basis (`None`: the trivial one-dimensional representation).
#[derive(Clone, Debug)]
pub struct CharacterSpec {
    pub sigma: Vec<Q>,
    pub kappa: Option<Vec<Mat<Qi>>>,
}

impl CharacterSpec {
    pub fn trivial(sigma: Vec<Q>) -> CharacterSpec {
        CharacterSpec { sigma, kappa: None }
    }

    pub fn dim(&self) -> usize {
        self.kappa.as_ref().and_then(|k| k.first()).map_or(1, Mat::rows)
    }

    fn kappa_of(&self, k: usize) -> Mat<Qi> {
        match &self.kappa {
            Some(ims) => ims[k].clone(),
            None => Mat::zeros(1, 1),
        }
    }

    /// Shapes, and `κ[x,y] = [κx, κy]` on the `m`-basis.
    pub fn validate(&self, man: &ManDecomp) -> Result<()> {
        if self.sigma.len() != man.a.dim() {
            return Err(Error::Dimension(format!("σ has {} entries, a has dimension {}", self.sigma.len(), man.a.dim())));
        }
        let mb = man.m.basis();
        let Some(ims) = &self.kappa else {
            // The trivial κ must vanish on [m, m]; m/[m,m] acts by zero too.
            return Ok(());
        };
        if ims.len() != mb.len() {
            return Err(Error::Dimension(format!("κ has {} images, m has dimension {}", ims.len(), mb.len())));
        }
        let e = self.dim();
        if ims.iter().any(|k| k.rows() != e || k.cols() != e) {
            return Err(Error::Dimension("κ images must share one square size".into()));
        }
        let solver = Solver::new(mb.clone())?;
        for i in 0..mb.len() {
            for j in i + 1..mb.len() {
                let c = solver
                    .coords(&mb[i].commutator(&mb[j]))
                    .ok_or_else(|| Error::Invalid("m is not closed".into()))?;
                let lhs = c.iter().zip(ims).fold(Mat::zeros(e, e), |acc, (c, k)| acc.add(&k.scale(c)));
                if lhs != ims[i].commutator(&ims[j]) {
                    return Err(Error::Invalid(format!("κ is not a homomorphism on m-basis pair ({i},{j})")));
                }
            }
        }
        Ok(())
    }
}

/// `p_C` basis ordered `m`, `a`, `n`, and `dη` on it.
fn p_basis(man: &ManDecomp, spec: &CharacterSpec) -> (Vec<Mat<Qi>>, Vec<Mat<Qi>>) {
    let e = spec.dim();
    let mut basis = Vec::new();
    let mut eta = Vec::new();
    for (k, x) in man.m.basis().into_iter().enumerate() {
        basis.push(x);
        eta.push(spec.kappa_of(k));
    }
    for (k, x) in man.a.basis().into_iter().enumerate() {
        basis.push(x);
        let s = Qi::new(Q::zero(), spec.sigma[k].clone());
        eta.push(Mat::identity(e).scale(&s));
    }
    for x in man.n.basis() {
        basis.push(x);
        eta.push(Mat::zeros(e, e));
    }
    (basis, eta)
}

/// `dη(ξ) = κ(m-part) + iσ(a-part)·1`; the `n`-part acts by zero.
pub fn p_character(man: &ManDecomp, spec: &CharacterSpec, xi: &Mat<Qi>) -> Result<Mat<Qi>> {
    spec.validate(man)?;
    let (basis, eta) = p_basis(man, spec);
    let c = Solver::new(basis)?.coords(xi).ok_or_else(|| Error::Invalid("ξ is not in the p-window".into()))?;
    let e = spec.dim();
    Ok(c.iter().zip(&eta).fold(Mat::zeros(e, e), |acc, (c, m)| acc.add(&m.scale(c))))
}

// ------------------------------------------------------------ induced module

/// A PBW monomial (sorted letters of `n⁻`) tensored with a basis vector of `E_κ`.
pub type Term = (Vec<usize>, usize);
/// A finite combination of [`Term`]s.
pub type Vector = BTreeMap<Term, Qi>;

fn add_into(out: &mut Vector, v: &Vector, c: &Qi) {
    for (t, x) in v {
        let y = x.mul(c);
        let e = out.entry(t.clone()).or_insert_with(Qi::zero);
        *e = e.add(&y);
        if e.is_zero() {
            out.remove(t);
        }
    }
}

pub fn unit(word: Vec<usize>, e: usize) -> Vector {
    let mut v = Vector::new();
    v.insert((word, e), Qi::one());
    v
}

/// Action of one element on the truncated basis; columns whose image
/// leaves the degree bound are listed in `overflow` and their
/// out-of-range terms are not in `matrix`.
#[derive(Clone, Debug)]
pub struct ActionMatrix {
    pub matrix: Mat<Qi>,
    pub overflow: Vec<usize>,
}

#[derive(Clone, Debug)]
pub struct InducedModule {
    pub degree: usize,
    /// `n⁻` basis in PBW order, with heights.
    pub neg: Vec<Mat<Qi>>,
    pub heights: Vec<usize>,
    /// `p_C` basis (`m`, `a`, `n`) and `dη` on it.
    pub p: Vec<Mat<Qi>>,
    pub eta: Vec<Mat<Qi>>,
    pub e_dim: usize,
    /// Monomials of degree at most `degree`, by degree then lexicographically.
    pub basis: Vec<Term>,
    solver: Solver,
    /// Coordinates of `[b_a, b_b]` for the combined basis `n⁻ ∪ p`.
    table: Vec<Vec<Vec<Qi>>>,
}

fn complex_span(v: &[Mat<Qi>], n: usize) -> MatSpace<Qi> {
    let mut all = v.to_vec();
    all.extend(v.iter().map(|x| x.scale(&Qi::i())));
    MatSpace::span(n, &all)
}

/// `C`-basis of `n⁻` adapted to its lower central series, lowest height first.
fn adapted_basis(neg_real: &[Mat<Qi>], n: usize) -> (Vec<Mat<Qi>>, Vec<usize>) {
    let mut series = vec![complex_span(neg_real, n)];
    loop {
        let next = series[0].bracket(series.last().unwrap());
        if next.dim() == 0 {
            break;
        }
        series.push(next);
    }
    let mut chosen: Vec<(Mat<Qi>, usize)> = Vec::new();
    for (k, s) in series.iter().enumerate().rev() {
        for x in s.basis() {
            let have: Vec<Mat<Qi>> = chosen.iter().map(|(m, _)| m.clone()).collect();
            if !complex_span(&have, n).contains(&x) {
                chosen.push((x, k + 1));
            }
        }
    }
    chosen.sort_by_key(|(_, h)| *h);
    chosen.into_iter().unzip()
}

fn monomials(r: usize, d: usize) -> Vec<Vec<usize>> {
    let mut out = vec![Vec::new()];
    let mut layer = vec![Vec::new()];
    for _ in 0..d {
        let mut next = Vec::new();
        for w in &layer {
            let lo = w.last().copied().unwrap_or(0);
            for j in lo..r {
                let mut x: Vec<usize> = w.clone();
                x.push(j);
                next.push(x);
            }
        }
        out.extend(next.iter().cloned());
        layer = next;
    }
    out
}

impl InducedModule {
    pub fn new(man: &ManDecomp, spec: &CharacterSpec, degree: usize) -> Result<InducedModule> {
        spec.validate(man)?;
        let n = man.p.size();
        let neg_real: Vec<Mat<Qi>> = man.n.basis().iter().map(theta).collect();
        let (neg, heights) = adapted_basis(&neg_real, n);
        let (p, eta) = p_basis(man, spec);
        let mut all = neg.clone();
        all.extend(p.iter().cloned());
        let solver = Solver::new(all)?;
        let b = solver.basis().to_vec();
        let mut table = Vec::with_capacity(b.len());
        for x in &b {
            let mut row = Vec::with_capacity(b.len());
            for y in &b {
                let c = solver
                    .coords(&x.commutator(y))
                    .ok_or_else(|| Error::Invalid("n⁻ ⊕ p is not closed under brackets".into()))?;
                row.push(c);
            }
            table.push(row);
        }
        let e_dim = spec.dim();
        let basis = monomials(neg.len(), degree).into_iter().flat_map(|w| (0..e_dim).map(move |e| (w.clone(), e))).collect();
        Ok(InducedModule { degree, neg, heights, p, eta, e_dim, basis, solver, table })
    }

    fn r(&self) -> usize {
        self.neg.len()
    }

    /// Coordinates of `x` in `n⁻ ∪ p`.
    pub fn coords(&self, x: &Mat<Qi>) -> Result<Vec<Qi>> {
        self.solver.coords(x).ok_or_else(|| Error::Invalid("element outside the window algebra".into()))
    }

    fn act_coords(&self, x: &[Qi], v: &Vector) -> Vector {
        let mut out = Vector::new();
        for (k, c) in x.iter().enumerate().filter(|(_, c)| !c.is_zero()) {
            for ((w, e), a) in v {
                let r = self.act_basis(k, w, *e);
                add_into(&mut out, &r, &a.mul(c));
            }
        }
        out
    }

    fn act_basis(&self, k: usize, w: &[usize], e: usize) -> Vector {
        if k < self.r() {
            self.mul_left(k, w, e)
        } else {
            self.act_p(k, w, e)
        }
    }

    /// `y_j · (y^w ⊗ e)`, straightened.
    fn mul_left(&self, j: usize, w: &[usize], e: usize) -> Vector {
        if w.first().is_none_or(|&i| j <= i) {
            let mut x = vec![j];
            x.extend_from_slice(w);
            return unit(x, e);
        }
        let (i, rest) = (w[0], &w[1..]);
        // y_j y_i R = y_i (y_j R) + [y_j, y_i] R
        let mut out = Vector::new();
        for ((w2, e2), c) in self.mul_left(j, rest, e) {
            add_into(&mut out, &self.mul_left(i, &w2, e2), &c);
        }
        let br = self.act_coords(&self.table[j][i], &unit(rest.to_vec(), e));
        add_into(&mut out, &br, &Qi::one());
        out
    }

    /// `p_k · (y^w ⊗ e)`: commute `p_k` to the right, then apply `dη`.
    fn act_p(&self, k: usize, w: &[usize], e: usize) -> Vector {
        let Some((&i, rest)) = w.split_first() else {
            let m = &self.eta[k - self.r()];
            let mut out = Vector::new();
            for f in 0..self.e_dim {
                let c = m.get(f, e);
                if !c.is_zero() {
                    out.insert((Vec::new(), f), c.clone());
                }
            }
            return out;
        };
        // p y_i R = [p, y_i] R + y_i (p R)
        let mut out = self.act_coords(&self.table[k][i], &unit(rest.to_vec(), e));
        for ((w2, e2), c) in self.act_p(k, rest, e) {
            add_into(&mut out, &self.mul_left(i, &w2, e2), &c);
        }
        out
    }

    /// `dπ(x) v`, exact (no truncation).
    pub fn act(&self, x: &Mat<Qi>, v: &Vector) -> Result<Vector> {
        Ok(self.act_coords(&self.coords(x)?, v))
    }

    pub fn action_matrix(&self, x: &Mat<Qi>) -> Result<ActionMatrix> {
        let c = self.coords(x)?;
        let index: BTreeMap<&Term, usize> = self.basis.iter().enumerate().map(|(k, t)| (t, k)).collect();
        let n = self.basis.len();
        let mut matrix = Mat::zeros(n, n);
        let mut overflow = Vec::new();
        for (col, (w, e)) in self.basis.iter().enumerate() {
            let img = self.act_coords(&c, &unit(w.clone(), *e));
            for (t, a) in img {
                match index.get(&t) {
                    Some(&row) => matrix.set(row, col, a),
                    None => {
                        if overflow.last() != Some(&col) {
                            overflow.push(col);
                        }
                    }
                }
            }
        }
        Ok(ActionMatrix { matrix, overflow })
    }

    /// All generators: `n⁻` then `p`.
    pub fn generators(&self) -> Vec<Mat<Qi>> {
        self.solver.basis().to_vec()
    }

    /// `[dπ(x), dπ(y)] = dπ([x, y])` on every basis vector of degree below the bound.
    pub fn check_commutation(&self, x: &Mat<Qi>, y: &Mat<Qi>) -> Result<bool> {
        let (cx, cy) = (self.coords(x)?, self.coords(y)?);
        let cb = self.coords(&x.commutator(y))?;
        for (w, e) in self.basis.iter().filter(|(w, _)| w.len() < self.degree) {
            let v = unit(w.clone(), *e);
            let mut lhs = self.act_coords(&cx, &self.act_coords(&cy, &v));
            add_into(&mut lhs, &self.act_coords(&cy, &self.act_coords(&cx, &v)), &Qi::from_i64(-1));
            if lhs != self.act_coords(&cb, &v) {
                return Ok(false);
            }
        }
        Ok(true)
    }

    /// `dπ(ξ)(η ⊗ e) = Ad(ξ)η ⊗ e + η ⊗ dη(ξ)e` for `ξ ∈ p`, with `Ad(ξ)η`
    /// expanded letter by letter.
    pub fn check_ad_twist(&self, xi: &Mat<Qi>, word: &[usize], e: usize) -> Result<bool> {
        let c = self.coords(xi)?;
        let r = self.r();
        if c[..r].iter().any(|x| !x.is_zero()) {
            return Err(Error::Invalid("ξ is not in p".into()));
        }
        let mut w = word.to_vec();
        w.sort_unstable();
        let lhs = self.act_coords(&c, &unit(w.clone(), e));
        let mut rhs = Vector::new();
        for t in 0..w.len() {
            let bracket = self.coords(&xi.commutator(&self.neg[w[t]]))?;
            let mut v = self.act_coords(&bracket, &unit(w[t + 1..].to_vec(), e));
            for &letter in w[..t].iter().rev() {
                let mut next = Vector::new();
                for ((w2, e2), a) in &v {
                    add_into(&mut next, &self.mul_left(letter, w2, *e2), a);
                }
                v = next;
            }
            add_into(&mut rhs, &v, &Qi::one());
        }
        let eta = c[r..].iter().zip(&self.eta).fold(Mat::zeros(self.e_dim, self.e_dim), |acc, (c, m)| acc.add(&m.scale(c)));
        for f in 0..self.e_dim {
            let a = eta.get(f, e);
            if !a.is_zero() {
                add_into(&mut rhs, &unit(w.clone(), f), a);
            }
        }
        Ok(lhs == rhs)
    }

    /// Dimension of each degree piece of the filtration `U_k(n⁻)·(1 ⊗ E)`,
    /// generated by repeated action rather than read off the PBW basis.
    pub fn graded_dims(&self) -> Vec<usize> {
        let index: BTreeMap<&Term, usize> = self.basis.iter().enumerate().map(|(k, t)| (t, k)).collect();
        let n = self.basis.len();
        let to_row = |v: &Vector| -> Vec<Qi> {
            let mut row = vec![Qi::zero(); n];
            for (t, a) in v {
                row[index[t]] = a.clone();
            }
            row
        };
        let mut span: Vec<Vector> = (0..self.e_dim).map(|e| unit(Vec::new(), e)).collect();
        let mut dims = vec![self.e_dim];
        let mut rank = self.e_dim;
        for _ in 0..self.degree {
            let mut cand = span.clone();
            for v in &span {
                for j in 0..self.r() {
                    let mut out = Vector::new();
                    for ((w, e), a) in v {
                        add_into(&mut out, &self.mul_left(j, w, *e), a);
                    }
                    cand.push(out);
                }
            }
            let m = Mat::from_rows(cand.iter().map(&to_row).collect()).expect("equal rows");
            let (red, piv) = m.rref();
            span = (0..piv.len())
                .map(|i| {
                    let mut v = Vector::new();
                    for (k, x) in red.row(i).iter().enumerate() {
                        if !x.is_zero() {
                            v.insert(self.basis[k].clone(), x.clone());
                        }
                    }
                    v
                })
                .collect();
            dims.push(piv.len() - rank);
            rank = piv.len();
        }
        dims
    }
}

// ------------------------------------------------------------ ψ_B and Voiculescu

fn principal_minors_nonneg(m: &Mat<Qi>) -> Result<bool> {
    let n = m.rows();
    for mask in 1u32..(1 << n) {
        let idx: Vec<usize> = (0..n).filter(|i| mask & (1 << i) != 0).collect();
        let d = m.select(&idx, &idx).det()?;
        if d.coords()[0].is_negative() {
            return Ok(false);
        }
    }
    Ok(true)
}

/// Data of a factor representation: a hermitian `0 ≤ B ≤ 1` or a finitely
/// supported bilateral sequence.
#[derive(Clone, Debug)]
pub enum FactorRepData {
    B(Mat<Qi>),
    Sequence(BTreeMap<i64, Q>),
}

impl FactorRepData {
    /// Certifies `B = B*` and `0 ≤ B ≤ 1` by the principal minors of `B` and `1 − B`.
    pub fn operator(b: Mat<Qi>) -> Result<FactorRepData> {
        if !b.is_square() || b.adjoint() != b {
            return Err(Error::Invalid("B must be a hermitian square matrix".into()));
        }
        let rest = Mat::identity(b.rows()).sub(&b);
        if !principal_minors_nonneg(&b)? || !principal_minors_nonneg(&rest)? {
            return Err(Error::Invalid("B is not between 0 and 1".into()));
        }
        Ok(FactorRepData::B(b))
    }
}

/// `ψ_B(x) = det((1 − B) + Bx)`.
pub fn psi_b(b: &Mat<Qi>, x: &Mat<Qi>) -> Result<Qi> {
    if !b.is_square() || b.rows() != x.rows() || x.rows() != x.cols() {
        return Err(Error::Dimension(format!("B is {}×{}, x is {}×{}", b.rows(), b.cols(), x.rows(), x.cols())));
    }
    Mat::identity(b.rows()).sub(b).add(&b.mul(x)).det()
}

#[derive(Clone, Debug, PartialEq)]
pub struct VoiculescuReport {
    pub sum: Q,
    /// A tuple `m₁ ≥ … ≥ m_N` with a negative minor, and that minor.
    pub witness: Option<(Vec<i64>, Q)>,
}

impl VoiculescuReport {
    pub fn accepted(&self) -> bool {
        self.sum == Q::one() && self.witness.is_none()
    }
}

fn nonincreasing(lo: i64, hi: i64, len: usize, prefix: &mut Vec<i64>, f: &mut dyn FnMut(&[i64]) -> bool) -> bool {
    if prefix.len() == len {
        return f(prefix);
    }
    let top = prefix.last().copied().unwrap_or(hi);
    for m in (lo..=top).rev() {
        prefix.push(m);
        let stop = nonincreasing(lo, hi, len, prefix, f);
        prefix.pop();
        if stop {
            return true;
        }
    }
    false
}

/// `Σ c_n = 1` and `det(c_{m_i + j − i}) ≥ 0` for every `N ≤ max_n` and every
/// `m₁ ≥ … ≥ m_N` in the range where the minor can be nonzero.
pub fn voiculescu_check(c: &BTreeMap<i64, Q>, max_n: usize) -> VoiculescuReport {
    let sum = c.values().fold(Q::zero(), |a, x| &a + x);
    let get = |k: i64| c.get(&k).cloned().unwrap_or_else(Q::zero);
    let (lo, hi) = match (c.keys().next(), c.keys().next_back()) {
        (Some(&a), Some(&b)) => (a, b),
        _ => (0, 0),
    };
    let mut witness = None;
    for n in 1..=max_n {
        let span = n as i64 - 1;
        let found = nonincreasing(lo - span, hi + span, n, &mut Vec::new(), &mut |ms: &[i64]| {
            let m = Mat::from_fn(n, n, |i, j| get(ms[i] + j as i64 - i as i64));
            let d = m.det().expect("square");
            if d.is_negative() {
                witness = Some((ms.to_vec(), d));
                return true;
            }
            false
        });
        if found {
            break;
        }
    }
    VoiculescuReport { sum, witness }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::realform::{man_decompose, RealParabolic};

    fn sl_borel(n: usize) -> ManDecomp {
        let members = (1..n).map(|k| (0..k).collect()).collect();
        let p = RealParabolic::from_members("sl(inf;R)".parse().unwrap(), n, members).unwrap();
        man_decompose(&p).unwrap()
    }

    #[test]
    fn sl2_verma_pattern() {
        let man = sl_borel(2);
        let h = man.a.basis()[0].clone();
        let s = Q::new(3, 2);
        let module = InducedModule::new(&man, &CharacterSpec::trivial(vec![s.clone()]), 5).unwrap();
        // h·(1⊗1) = iσ(h); λ is the eigenvalue of h on the lowest vector.
        let lam = Qi::new(Q::zero(), s);
        let f = module.neg[0].clone();
        let e = theta(&f).neg();
        let hv = module.act(&h, &unit(vec![], 0)).unwrap();
        assert_eq!(hv, unit(vec![], 0).into_keys().map(|t| (t, lam.clone())).collect());
        // With [h, f] = c·f the lowering operator shifts the h-eigenvalue by c.
        let c = module.coords(&h.commutator(&f)).unwrap()[0].clone();
        let efk = module.act(&e, &unit(vec![0, 0, 0], 0)).unwrap();
        // e f^k v = f^{k-1} (Σ_t [e,f] shifted): with [e,f] = g, g f^t v = (λ + t c) f^t v.
        let g = e.commutator(&f);
        let gc = module.coords(&g).unwrap();
        let mut expect = Qi::zero();
        for t in 0..3 {
            let ev = module.act_coords(&gc, &unit(vec![0; t], 0));
            expect = expect.add(&ev[&(vec![0; t], 0)]);
        }
        assert_eq!(efk.len(), 1);
        assert_eq!(efk[&(vec![0, 0], 0)], expect);
        assert!(!c.is_zero());
    }

    #[test]
    fn graded_dims_sl3() {
        let man = sl_borel(3);
        let sigma = vec![Q::from(1), Q::zero()];
        let module = InducedModule::new(&man, &CharacterSpec::trivial(sigma), 4).unwrap();
        assert_eq!(module.graded_dims(), vec![1, 3, 6, 10, 15]);
        assert_eq!(module.heights, vec![1, 1, 2]);
        let gens = module.generators();
        for x in &gens {
            for y in &gens {
                assert!(module.check_commutation(x, y).unwrap());
            }
        }
    }

    #[test]
    fn character_examples() {
        let man = sl_borel(2);
        let spec = CharacterSpec::trivial(vec![Q::one()]);
        let n = man.n.basis()[0].clone();
        assert!(p_character(&man, &spec, &n).unwrap().is_zero());
        let h = man.a.basis()[0].clone();
        assert_eq!(p_character(&man, &spec, &h).unwrap(), Mat::identity(1).scale(&Qi::i()));
        assert!(p_character(&man, &spec, &theta(&n)).is_err());
    }

    #[test]
    fn overflow_is_marked() {
        let man = sl_borel(2);
        let module = InducedModule::new(&man, &CharacterSpec::trivial(vec![Q::zero()]), 2).unwrap();
        let f = module.neg[0].clone();
        let am = module.action_matrix(&f).unwrap();
        assert_eq!(am.overflow, vec![2]);
    }

    #[test]
    fn psi_b_examples() {
        let x = Mat::diag(&[Qi::from_i64(2), Qi::from_i64(5)]);
        assert_eq!(psi_b(&Mat::zeros(2, 2), &x).unwrap(), Qi::one());
        assert_eq!(psi_b(&Mat::identity(2), &x).unwrap(), Qi::from_i64(10));
        let b = Mat::diag(&[Qi::one(), Qi::zero()]);
        assert_eq!(psi_b(&b, &x).unwrap(), Qi::from_i64(2));
        assert!(FactorRepData::operator(Mat::diag(&[Qi::from_i64(2)])).is_err());
        assert!(psi_b(&b, &Mat::identity(3)).is_err());
    }

    #[test]
    fn voiculescu_examples() {
        let delta: BTreeMap<i64, Q> = [(0, Q::one())].into();
        assert!(voiculescu_check(&delta, 3).accepted());
        let two: BTreeMap<i64, Q> = [(0, Q::one()), (1, Q::one())].into();
        assert!(!voiculescu_check(&two, 3).accepted());
        let neg: BTreeMap<i64, Q> = [(0, Q::from(2)), (1, Q::from(-1))].into();
        let r = voiculescu_check(&neg, 3);
        assert_eq!(r.witness, Some((vec![1], Q::from(-1))));
    }
}
