//! Dual systems `(V, W)`, finitely supported vectors, finite-rank operators,
//! annihilators and Mackey closures of basis-aligned subspaces.
//!
//! Convention: one bilinear pairing `β(v_i, w_j)`; the rank-one operator
//! `v ⊗ w` acts by `x ↦ β(x, w)·v`. An operator is stored by its coefficient
//! map `C`, meaning `Σ C_ij v_i ⊗ w_j`. For the supported kernels the
//! functionals `β(·, w_j)` are linearly independent, so `C` is canonical.

use std::collections::{BTreeMap, BTreeSet};
use std::fmt;

use crate::cut::{Card, CutSet, Ray};
use crate::error::{Error, Result};
use crate::index::{Index, IndexDomain, Window};
use crate::matrix::Mat;
use crate::scalar::{Field, Ring, Scalar, Q};

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum Side {
    V,
    W,
}

impl Side {
    pub fn other(self) -> Side {
        match self {
            Side::V => Side::W,
            Side::W => Side::V,
        }
    }
}

impl fmt::Display for Side {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            Side::V => "V",
            Side::W => "W",
        })
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub enum FormKind {
    Symmetric,
    Alternating,
    Hermitian,
}

impl fmt::Display for FormKind {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            FormKind::Symmetric => "symmetric",
            FormKind::Alternating => "alternating",
            FormKind::Hermitian => "hermitian",
        })
    }
}

/// A form in adapted position on `Nat`: indices `2k−1, 2k` for `k ≤ pairs`
/// are hyperbolic pairs, every later index is a definite `+1` vector.
/// `pairs = None` means every index is paired.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub struct Form {
    pub kind: FormKind,
    pub pairs: Option<u64>,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub enum Kernel {
    /// `β(v_i, w_j) = δ_ij`.
    Delta,
    /// `β(v_q, w_r) = 1` if `q > r`, else `0`.
    OrderStep,
    /// `W` is identified with `V` through a form.
    Form(Form),
}

#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct DualSystem {
    pub domain: IndexDomain,
    pub ring: Ring,
    pub kernel: Kernel,
    /// Finite dimension (`Nat` only): indices `1..=rank`.
    pub rank: Option<u64>,
}

impl DualSystem {
    pub fn delta(domain: IndexDomain) -> DualSystem {
        DualSystem { domain, ring: Ring::Rational, kernel: Kernel::Delta, rank: None }
    }

    pub fn order_step() -> DualSystem {
        DualSystem {
            domain: IndexDomain::Rat,
            ring: Ring::Rational,
            kernel: Kernel::OrderStep,
            rank: None,
        }
    }

    pub fn form(kind: FormKind, pairs: Option<u64>, rank: Option<u64>) -> Result<DualSystem> {
        if kind == FormKind::Alternating {
            let ok = match (pairs, rank) {
                (None, None) => true,
                (None, Some(r)) => r % 2 == 0,
                (Some(p), Some(r)) => 2 * p == r,
                (Some(_), None) => false,
            };
            if !ok {
                return Err(Error::Invalid("an alternating form has no definite part".into()));
            }
        }
        if let (Some(p), Some(r)) = (pairs, rank) {
            if 2 * p > r {
                return Err(Error::Invalid(format!("{p} pairs do not fit in rank {r}")));
            }
        }
        let ring = if kind == FormKind::Hermitian { Ring::Gaussian } else { Ring::Rational };
        Ok(DualSystem {
            domain: IndexDomain::Nat,
            ring,
            kernel: Kernel::Form(Form { kind, pairs }),
            rank,
        })
    }

    pub fn form_data(&self) -> Option<Form> {
        match self.kernel {
            Kernel::Form(f) => Some(f),
            _ => None,
        }
    }

    /// The index set of the basis.
    pub fn universe(&self) -> CutSet {
        match self.rank {
            Some(r) => CutSet::ray(Ray::Le, Index::Nat(r)),
            None => CutSet::full(self.domain),
        }
    }

    fn check_index(&self, i: &Index) -> Result<()> {
        if i.domain() != self.domain {
            return Err(Error::DomainMismatch(format!("{i} not in {}", self.domain)));
        }
        if !self.universe().contains(i)? {
            return Err(Error::Invalid(format!("index {i} outside the basis")));
        }
        Ok(())
    }

    fn check_set(&self, s: &CutSet) -> Result<()> {
        if s.domain() != self.domain {
            return Err(Error::DomainMismatch(format!("{} set in {} system", s.domain(), self.domain)));
        }
        Ok(())
    }

    /// Partner of a basis index under the form.
    pub fn partner(&self, i: &Index) -> Result<Index> {
        let f = self.form_data().ok_or(Error::MissingForm("bilinear"))?;
        let Index::Nat(n) = *i else {
            return Err(Error::DomainMismatch(format!("{i}")));
        };
        let paired = f.pairs.is_none_or(|p| n <= 2 * p);
        Ok(Index::Nat(match (paired, n % 2) {
            (false, _) => n,
            (true, 1) => n + 1,
            (true, _) => n - 1,
        }))
    }

    /// Image of an index set under the partner map.
    pub fn partner_set(&self, s: &CutSet) -> Result<CutSet> {
        let f = self.form_data().ok_or(Error::MissingForm("bilinear"))?;
        self.check_set(s)?;
        // Pairs straddling a boundary are handled one element at a time;
        // everything else is a union of whole pairs or definite indices.
        let mut straddle = Vec::new();
        for b in s.boundary_points() {
            let Index::Nat(n) = b else { continue };
            if n % 2 == 0 && f.pairs.is_none_or(|p| n <= 2 * p) {
                straddle.push(Index::Nat(n - 1));
                straddle.push(Index::Nat(n));
            }
        }
        let edge = CutSet::fin(self.domain, &straddle)?;
        let mut out = s.diff(&edge)?;
        for i in &straddle {
            if s.contains(i)? {
                out = out.union(&CutSet::singleton(self.partner(i)?)?)?;
            }
        }
        Ok(out)
    }

    /// `β(v_i, w_j)` on basis vectors.
    pub fn pair_basis(&self, i: &Index, j: &Index) -> Q {
        match self.kernel {
            Kernel::Delta => {
                if i == j {
                    Q::one()
                } else {
                    Q::zero()
                }
            }
            Kernel::OrderStep => {
                if i > j {
                    Q::one()
                } else {
                    Q::zero()
                }
            }
            Kernel::Form(f) => {
                let p = self.partner(i).expect("form system");
                if &p != j {
                    return Q::zero();
                }
                if p == *i {
                    return Q::one();
                }
                let Index::Nat(n) = *i else { unreachable!() };
                match (f.kind, n % 2) {
                    (FormKind::Alternating, 0) => Q::from(-1),
                    _ => Q::one(),
                }
            }
        }
    }

    pub fn pair(&self, v: &SVec, w: &SVec) -> Result<Scalar> {
        if v.side != Side::V || w.side != Side::W {
            return Err(Error::SideMismatch(format!("pair expects (V, W), got ({}, {})", v.side, w.side)));
        }
        let mut acc = Scalar::zero();
        for (i, a) in &v.coeffs {
            for (j, b) in &w.coeffs {
                let g = self.pair_basis(i, j);
                if !g.is_zero() {
                    let ab = match self.kernel {
                        Kernel::Form(Form { kind: FormKind::Hermitian, .. }) => a.conj().mul(b),
                        _ => a.mul(b),
                    };
                    acc = acc.add(&ab.mul(&Scalar::from(g)));
                }
            }
        }
        acc.lift(self.ring)
    }

    /// Gram block `B[a][b] = β(v_{w_a}, w_{w_b})` on a window.
    pub fn gram(&self, w: &Window) -> Result<Mat<Q>> {
        if w.domain != self.domain {
            return Err(Error::DomainMismatch(format!("window {} vs {}", w.domain, self.domain)));
        }
        let ix = w.indices();
        Ok(Mat::from_fn(ix.len(), ix.len(), |a, b| self.pair_basis(&ix[a], &ix[b])))
    }

    pub fn basis_vec(&self, side: Side, i: Index) -> Result<SVec> {
        self.check_index(&i)?;
        Ok(SVec { side, coeffs: BTreeMap::from([(i, Scalar::one().lift(self.ring)?)]) })
    }

    pub fn vector(&self, side: Side, coeffs: Vec<(Index, Scalar)>) -> Result<SVec> {
        let mut map: BTreeMap<Index, Scalar> = BTreeMap::new();
        for (i, a) in coeffs {
            self.check_index(&i)?;
            let a = a.lift(self.ring)?;
            let e = map.entry(i).or_insert_with(Scalar::zero);
            *e = e.add(&a);
        }
        map.retain(|_, a| !a.is_zero());
        Ok(SVec { side, coeffs: map })
    }

    // ------------------------------------------------------------ operators

    pub fn zero_op(&self) -> FinOp {
        FinOp { ring: self.ring, c: BTreeMap::new() }
    }

    /// `v ⊗ w`.
    pub fn rank_one(&self, v: &SVec, w: &SVec) -> Result<FinOp> {
        if v.side != Side::V || w.side != Side::W {
            return Err(Error::SideMismatch("rank-one term expects v ∈ V, w ∈ W".into()));
        }
        let mut c = BTreeMap::new();
        for (i, a) in &v.coeffs {
            for (j, b) in &w.coeffs {
                c.insert((i.clone(), j.clone()), a.mul(b).lift(self.ring)?);
            }
        }
        Ok(FinOp::from_map(self.ring, c))
    }

    /// `v_i ⊗ w_j` on basis vectors.
    pub fn unit_op(&self, i: Index, j: Index) -> Result<FinOp> {
        self.check_index(&i)?;
        self.check_index(&j)?;
        Ok(FinOp::from_map(self.ring, BTreeMap::from([((i, j), Scalar::one().lift(self.ring)?)])))
    }

    pub fn from_terms(&self, terms: &[(SVec, SVec)]) -> Result<FinOp> {
        let mut acc = self.zero_op();
        for (v, w) in terms {
            acc = acc.add(&self.rank_one(v, w)?);
        }
        Ok(acc)
    }

    /// Operator with the given coefficient matrix over a window.
    pub fn op_from_coeffs(&self, w: &Window, c: &Mat<Q>) -> Result<FinOp> {
        let ix = w.indices();
        let mut map = BTreeMap::new();
        for a in 0..ix.len() {
            for b in 0..ix.len() {
                let x = c.get(a, b);
                if !x.is_zero() {
                    map.insert((ix[a].clone(), ix[b].clone()), Scalar::from(x.clone()).lift(self.ring)?);
                }
            }
        }
        Ok(FinOp::from_map(self.ring, map))
    }

    pub fn apply(&self, op: &FinOp, x: &SVec) -> Result<SVec> {
        if x.side != Side::V {
            return Err(Error::SideMismatch("apply expects a vector of V".into()));
        }
        let mut out: BTreeMap<Index, Scalar> = BTreeMap::new();
        for ((i, j), c) in &op.c {
            let wj = self.basis_vec(Side::W, j.clone())?;
            let p = self.pair(x, &wj)?;
            if p.is_zero() {
                continue;
            }
            let e = out.entry(i.clone()).or_insert_with(Scalar::zero);
            *e = e.add(&c.mul(&p));
        }
        out.retain(|_, a| !a.is_zero());
        Ok(SVec { side: Side::V, coeffs: out })
    }

    /// Composition `a ∘ b`.
    pub fn compose(&self, a: &FinOp, b: &FinOp) -> FinOp {
        let mut out: BTreeMap<(Index, Index), Scalar> = BTreeMap::new();
        for ((i, j), x) in &a.c {
            for ((k, l), y) in &b.c {
                let g = self.pair_basis(k, j);
                if g.is_zero() {
                    continue;
                }
                let e = out.entry((i.clone(), l.clone())).or_insert_with(Scalar::zero);
                *e = e.add(&x.mul(&Scalar::from(g)).mul(y));
            }
        }
        FinOp::from_map(self.ring, out)
    }

    pub fn bracket(&self, a: &FinOp, b: &FinOp) -> FinOp {
        self.compose(a, b).sub(&self.compose(b, a))
    }

    pub fn trace(&self, op: &FinOp) -> Scalar {
        let mut acc = Scalar::zero();
        for ((i, j), c) in &op.c {
            let g = self.pair_basis(i, j);
            if !g.is_zero() {
                acc = acc.add(&c.mul(&Scalar::from(g)));
            }
        }
        acc.lift(self.ring).expect("trace stays in ring")
    }

    /// `Λ(v, v') = v⊗v' − v'⊗v`, an element of `so(V)`.
    pub fn skew(&self, v: &SVec, v2: &SVec) -> Result<FinOp> {
        self.need_form(FormKind::Symmetric)?;
        let (a, b) = self.form_terms(v, v2)?;
        Ok(a.sub(&b))
    }

    /// `S(v, v') = v⊗v' + v'⊗v`, an element of `sp(V)`.
    pub fn symm(&self, v: &SVec, v2: &SVec) -> Result<FinOp> {
        self.need_form(FormKind::Alternating)?;
        let (a, b) = self.form_terms(v, v2)?;
        Ok(a.add(&b))
    }

    fn need_form(&self, kind: FormKind) -> Result<()> {
        match self.form_data() {
            Some(f) if f.kind == kind => Ok(()),
            _ => Err(Error::MissingForm(match kind {
                FormKind::Symmetric => "symmetric",
                FormKind::Alternating => "alternating",
                FormKind::Hermitian => "hermitian",
            })),
        }
    }

    fn form_terms(&self, v: &SVec, v2: &SVec) -> Result<(FinOp, FinOp)> {
        let as_w = |x: &SVec| SVec { side: Side::W, coeffs: x.coeffs.clone() };
        Ok((self.rank_one(v, &as_w(v2))?, self.rank_one(v2, &as_w(v))?))
    }

    /// Operator matrix on a window: `M = C·Bᵀ`. Errors if the support leaves the window.
    pub fn truncate(&self, op: &FinOp, w: &Window) -> Result<Mat<Scalar>> {
        let c = self.coeff_matrix(op, w)?;
        let b = self.gram(w)?.map(|q| Scalar::from(q.clone()));
        Ok(c.mul(&b.transpose()))
    }

    /// Rational operator matrix on a window.
    pub fn truncate_q(&self, op: &FinOp, w: &Window) -> Result<Mat<Q>> {
        let m = self.truncate(op, w)?;
        let entries = m
            .entries()
            .iter()
            .map(|x| x.to_q().ok_or_else(|| Error::RingMismatch(format!("{x} is not rational"))))
            .collect::<Result<Vec<_>>>()?;
        Ok(Mat::from_fn(m.rows(), m.cols(), |i, j| entries[i * m.cols() + j].clone()))
    }

    /// Coefficient matrix of `op` on a window.
    pub fn coeff_matrix(&self, op: &FinOp, w: &Window) -> Result<Mat<Scalar>> {
        let n = w.len();
        let mut c = Mat::zeros(n, n);
        for ((i, j), x) in &op.c {
            match (w.position(i), w.position(j)) {
                (Some(a), Some(b)) => c.set(a, b, x.clone()),
                _ => return Err(Error::OutsideWindow(format!("({i}, {j}) vs {w}"))),
            }
        }
        Ok(c)
    }

    pub fn truncate_subspace(&self, s: &SubspaceDesc, w: &Window) -> Result<Vec<Index>> {
        self.check_set(&s.set)?;
        s.set.elements_in(w)
    }

    // ------------------------------------------------------------ subspaces

    pub fn subspace(&self, side: Side, set: CutSet) -> Result<SubspaceDesc> {
        self.check_set(&set)?;
        Ok(SubspaceDesc { side, set: set.inter(&self.universe())? })
    }

    pub fn full_subspace(&self, side: Side) -> SubspaceDesc {
        SubspaceDesc { side, set: self.universe() }
    }

    /// Aligned description of the annihilator on the other side.
    pub fn annihilator(&self, s: &SubspaceDesc) -> Result<SubspaceDesc> {
        self.check_set(&s.set)?;
        let u = self.universe();
        let set = match self.kernel {
            Kernel::Delta => u.diff(&s.set)?,
            Kernel::Form(_) => u.diff(&self.partner_set(&s.set)?)?,
            Kernel::OrderStep => order_annihilator(s)?,
        };
        Ok(SubspaceDesc { side: s.side.other(), set })
    }

    /// Mackey closure `S^⊥⊥`.
    pub fn closure(&self, s: &SubspaceDesc) -> Result<SubspaceDesc> {
        self.annihilator(&self.annihilator(s)?)
    }

    pub fn is_closed(&self, s: &SubspaceDesc) -> Result<bool> {
        Ok(self.closure(s)? == *s)
    }

    /// Whether the aligned span of `s` is isotropic for the form.
    pub fn is_isotropic(&self, s: &CutSet) -> Result<bool> {
        self.partner_set(s)?.is_disjoint(s)
    }

    /// Whether `s ⊇ s^⊥` for the form.
    pub fn is_coisotropic(&self, s: &CutSet) -> Result<bool> {
        let perp = self.annihilator(&SubspaceDesc { side: Side::V, set: s.clone() })?;
        perp.set.is_subset(s)
    }

    /// Linear conditions, over coefficients indexed by `support`, expressing
    /// that the functional `Σ a_j β(·, w_j)` (side `V`) or `Σ a_i β(v_i, ·)`
    /// (side `W`) vanishes on the aligned span of `s`.
    pub fn vanishing_rows(&self, side: Side, support: &[Index], s: &CutSet) -> Result<Vec<Vec<Q>>> {
        self.check_set(s)?;
        let n = support.len();
        let unit = |k: usize| {
            let mut r = vec![Q::zero(); n];
            r[k] = Q::one();
            r
        };
        let mut rows = Vec::new();
        match self.kernel {
            Kernel::Delta => {
                for (k, j) in support.iter().enumerate() {
                    if s.contains(j)? {
                        rows.push(unit(k));
                    }
                }
            }
            Kernel::Form(_) => {
                for (k, j) in support.iter().enumerate() {
                    if s.contains(&self.partner(j)?)? {
                        rows.push(unit(k));
                    }
                }
            }
            Kernel::OrderStep => {
                let mut order: Vec<usize> = (0..n).collect();
                order.sort_by(|&a, &b| support[a].cmp(&support[b]));
                let pts: Vec<&Index> = order.iter().map(|&k| &support[k]).collect();
                // Piece k collects the arguments that see exactly the first k
                // support points (side V) or all but the first k (side W).
                for k in 0..=n {
                    let piece = match side {
                        Side::V => {
                            // arguments x with pts[k-1] < x <= pts[k]
                            let lo = if k == 0 { CutSet::full(self.domain) } else { CutSet::ray(Ray::Gt, pts[k - 1].clone()) };
                            let hi = if k == n { CutSet::full(self.domain) } else { CutSet::ray(Ray::Le, pts[k].clone()) };
                            lo.inter(&hi)?
                        }
                        Side::W => {
                            // arguments t with pts[k-1] <= t < pts[k]
                            let lo = if k == 0 { CutSet::full(self.domain) } else { CutSet::ray(Ray::Ge, pts[k - 1].clone()) };
                            let hi = if k == n { CutSet::full(self.domain) } else { CutSet::ray(Ray::Lt, pts[k].clone()) };
                            lo.inter(&hi)?
                        }
                    };
                    if piece.is_disjoint(s)? {
                        continue;
                    }
                    let mut r = vec![Q::zero(); n];
                    let range: Vec<usize> = match side {
                        Side::V => (0..k).collect(),
                        Side::W => (k..n).collect(),
                    };
                    if range.is_empty() {
                        continue;
                    }
                    for m in range {
                        r[order[m]] = Q::one();
                    }
                    rows.push(r);
                }
            }
        }
        Ok(rows)
    }
}

fn order_annihilator(s: &SubspaceDesc) -> Result<CutSet> {
    let d = s.set.domain();
    if s.set.is_empty() {
        return Ok(CutSet::full(d));
    }
    if s.set.is_full() {
        return Ok(CutSet::empty(d));
    }
    let not_aligned = || {
        Error::Unsupported(format!(
            "annihilator of {} in {} is not basis-aligned for the order kernel",
            s.set, s.side
        ))
    };
    let pts = s.set.boundary_points();
    if pts.len() != 1 {
        return Err(not_aligned());
    }
    let c = pts[0].clone();
    let down = s.set.contains(&c.some_below().ok_or_else(not_aligned)?)?;
    match (s.side, down) {
        (Side::V, true) => {
            // Upper bounds of a down-set.
            let max = if s.set.contains(&c)? { Some(c.clone()) } else { max_below(&c) };
            Ok(CutSet::ray(Ray::Ge, max.unwrap_or(c)))
        }
        (Side::W, false) => {
            // Lower bounds of an up-set.
            Ok(CutSet::ray(Ray::Le, c))
        }
        _ => Err(not_aligned()),
    }
}

/// Immediate predecessor in a discrete domain.
fn max_below(c: &Index) -> Option<Index> {
    match c {
        Index::Nat(n) if *n > 1 => Some(Index::Nat(n - 1)),
        Index::Col(i, a) if *i > 1 => Some(Index::Col(i - 1, *a)),
        _ => None,
    }
}

/// A finitely supported vector of `V` or `W`.
#[derive(Clone, PartialEq, Eq)]
pub struct SVec {
    pub side: Side,
    coeffs: BTreeMap<Index, Scalar>,
}

impl SVec {
    pub fn coeffs(&self) -> &BTreeMap<Index, Scalar> {
        &self.coeffs
    }

    pub fn is_zero(&self) -> bool {
        self.coeffs.is_empty()
    }

    pub fn support(&self) -> Vec<Index> {
        self.coeffs.keys().cloned().collect()
    }
}

impl fmt::Debug for SVec {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.coeffs.is_empty() {
            return write!(f, "0");
        }
        let name = if self.side == Side::V { "v" } else { "w" };
        let terms: Vec<String> = self.coeffs.iter().map(|(i, a)| format!("{a}·{name}{i}")).collect();
        f.write_str(&terms.join(" + "))
    }
}

/// A finite-rank operator `Σ C_ij v_i ⊗ w_j`.
#[derive(Clone, PartialEq, Eq, Hash)]
pub struct FinOp {
    ring: Ring,
    c: BTreeMap<(Index, Index), Scalar>,
}

impl FinOp {
    fn from_map(ring: Ring, mut c: BTreeMap<(Index, Index), Scalar>) -> FinOp {
        c.retain(|_, a| !a.is_zero());
        for a in c.values_mut() {
            *a = a.lift(ring).expect("coefficient in ring");
        }
        FinOp { ring, c }
    }

    pub fn coeffs(&self) -> &BTreeMap<(Index, Index), Scalar> {
        &self.c
    }

    pub fn coeff(&self, i: &Index, j: &Index) -> Scalar {
        self.c.get(&(i.clone(), j.clone())).cloned().unwrap_or_else(Scalar::zero)
    }

    pub fn is_zero(&self) -> bool {
        self.c.is_empty()
    }

    pub fn add(&self, o: &FinOp) -> FinOp {
        let mut c = self.c.clone();
        for (k, a) in &o.c {
            let e = c.entry(k.clone()).or_insert_with(Scalar::zero);
            *e = e.add(a);
        }
        FinOp::from_map(self.ring.max(o.ring), c)
    }

    pub fn scale(&self, s: &Scalar) -> FinOp {
        let ring = self.ring.max(s.ring());
        FinOp::from_map(ring, self.c.iter().map(|(k, a)| (k.clone(), s.mul(a))).collect())
    }

    pub fn neg(&self) -> FinOp {
        self.scale(&Scalar::from(-1))
    }

    pub fn sub(&self, o: &FinOp) -> FinOp {
        self.add(&o.neg())
    }

    /// Indices `i` with a nonzero row.
    pub fn vsupport(&self) -> Vec<Index> {
        self.c.keys().map(|(i, _)| i.clone()).collect::<BTreeSet<_>>().into_iter().collect()
    }

    /// Indices `j` with a nonzero column.
    pub fn wsupport(&self) -> Vec<Index> {
        self.c.keys().map(|(_, j)| j.clone()).collect::<BTreeSet<_>>().into_iter().collect()
    }

    /// All indices touched by the operator.
    pub fn support(&self) -> Vec<Index> {
        self.c
            .keys()
            .flat_map(|(i, j)| [i.clone(), j.clone()])
            .collect::<BTreeSet<_>>()
            .into_iter()
            .collect()
    }

    /// Row `i` as the functional `Σ_j C_ij w_j`.
    pub fn row(&self, i: &Index) -> Vec<(Index, Scalar)> {
        self.c
            .iter()
            .filter(|((a, _), _)| a == i)
            .map(|((_, j), x)| (j.clone(), x.clone()))
            .collect()
    }

    /// Column `j` as the vector `Σ_i C_ij v_i`.
    pub fn col(&self, j: &Index) -> Vec<(Index, Scalar)> {
        self.c
            .iter()
            .filter(|((_, b), _)| b == j)
            .map(|((i, _), x)| (i.clone(), x.clone()))
            .collect()
    }

    /// Rank-one decomposition: one term `v_i ⊗ (Σ_j C_ij w_j)` per nonzero row.
    pub fn terms(&self) -> Vec<(SVec, SVec)> {
        self.vsupport()
            .into_iter()
            .map(|i| {
                let v = SVec { side: Side::V, coeffs: BTreeMap::from([(i.clone(), Scalar::one())]) };
                let w = SVec { side: Side::W, coeffs: self.row(&i).into_iter().collect() };
                (v, w)
            })
            .collect()
    }
}

impl fmt::Debug for FinOp {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.c.is_empty() {
            return write!(f, "0");
        }
        let terms: Vec<String> =
            self.c.iter().map(|((i, j), a)| format!("{a}·v{i}⊗w{j}")).collect();
        f.write_str(&terms.join(" + "))
    }
}

/// A basis-aligned subspace: the span of the basis vectors indexed by `set`.
#[derive(Clone, PartialEq, Eq, Hash)]
pub struct SubspaceDesc {
    pub side: Side,
    pub set: CutSet,
}

impl SubspaceDesc {
    pub fn dim(&self) -> Card {
        self.set.card()
    }
}

impl fmt::Debug for SubspaceDesc {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}{}", self.side, self.set)
    }
}

/// Matrix of the `W`-action `N = Cᵀ·B` on a window (the transpose action).
pub fn w_action(c: &Mat<Q>, gram: &Mat<Q>) -> Mat<Q> {
    c.transpose().mul(gram)
}

/// Scalar field coercion used by window computations.
pub fn scalar_to_q(x: &Scalar) -> Result<Q> {
    x.to_q().ok_or_else(|| Error::RingMismatch(format!("{x} is not rational")))
}

impl Field for Scalar {
    const COORDS: usize = 4;
    const RING: Ring = Ring::Quaternion;

    fn zero() -> Self {
        Scalar::zero()
    }
    fn one() -> Self {
        Scalar::one()
    }
    fn is_zero(&self) -> bool {
        Scalar::is_zero(self)
    }
    fn add(&self, o: &Self) -> Self {
        Scalar::add(self, o)
    }
    fn sub(&self, o: &Self) -> Self {
        Scalar::sub(self, o)
    }
    fn mul(&self, o: &Self) -> Self {
        Scalar::mul(self, o)
    }
    fn neg(&self) -> Self {
        Scalar::neg(self)
    }
    fn inv(&self) -> Option<Self> {
        Scalar::inv(self)
    }
    fn conj(&self) -> Self {
        Scalar::conj(self)
    }
    fn from_q(q: &Q) -> Self {
        Scalar::Rational(q.clone())
    }
    fn coords(&self) -> Vec<Q> {
        let h = self.to_quat();
        vec![h.a, h.b, h.c, h.d]
    }
    fn from_coords(c: &[Q]) -> Self {
        let h = crate::scalar::Quat::new(c[0].clone(), c[1].clone(), c[2].clone(), c[3].clone());
        let s = Scalar::Quaternion(h);
        [Ring::Rational, Ring::Gaussian]
            .iter()
            .find_map(|r| s.lift(*r).ok())
            .unwrap_or(s)
    }
    fn parse_str(s: &str) -> Result<Self> {
        Scalar::parse(s, Ring::Quaternion).map(|x| Field::from_coords(&Field::coords(&x)))
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use proptest::prelude::*;

    fn nat(n: u64) -> Index {
        Index::Nat(n)
    }

    fn delta() -> DualSystem {
        DualSystem::delta(IndexDomain::Nat)
    }

    #[test]
    fn pairing_examples() {
        let s = delta();
        let v1 = s.basis_vec(Side::V, nat(1)).unwrap();
        let w1 = s.basis_vec(Side::W, nat(1)).unwrap();
        let w2 = s.basis_vec(Side::W, nat(2)).unwrap();
        assert_eq!(s.pair(&v1, &w1).unwrap(), Scalar::one());
        assert_eq!(s.pair(&v1, &w2).unwrap(), Scalar::zero());
        assert!(s.pair(&w1, &v1).is_err());

        let o = DualSystem::order_step();
        let v = o.basis_vec(Side::V, Index::rat(1, 2)).unwrap();
        let w = o.basis_vec(Side::W, Index::rat(1, 3)).unwrap();
        assert_eq!(o.pair(&v, &w).unwrap(), Scalar::one());
        let v = o.basis_vec(Side::V, Index::rat(1, 3)).unwrap();
        let w = o.basis_vec(Side::W, Index::rat(1, 2)).unwrap();
        assert_eq!(o.pair(&v, &w).unwrap(), Scalar::zero());
    }

    #[test]
    fn apply_and_bracket_examples() {
        let s = delta();
        let op = s.unit_op(nat(1), nat(2)).unwrap();
        let v2 = s.basis_vec(Side::V, nat(2)).unwrap();
        let v3 = s.basis_vec(Side::V, nat(3)).unwrap();
        assert_eq!(s.apply(&op, &v2).unwrap(), s.basis_vec(Side::V, nat(1)).unwrap());
        assert!(s.apply(&op, &v3).unwrap().is_zero());
        let b = s.bracket(&op, &s.unit_op(nat(2), nat(1)).unwrap());
        let want = s.unit_op(nat(1), nat(1)).unwrap().sub(&s.unit_op(nat(2), nat(2)).unwrap());
        assert_eq!(b, want);
        assert!(s.bracket(&op, &op).is_zero());
        assert_eq!(s.trace(&s.unit_op(nat(1), nat(1)).unwrap()), Scalar::one());

        let o = DualSystem::order_step();
        let z = Index::rat(0, 1);
        let op = o.unit_op(z.clone(), z.clone()).unwrap();
        for (q, hit) in [((1, 2), true), ((0, 1), false), ((-1, 1), false)] {
            let x = o.basis_vec(Side::V, Index::rat(q.0, q.1)).unwrap();
            let y = o.apply(&op, &x).unwrap();
            assert_eq!(!y.is_zero(), hit);
        }
        assert_eq!(o.trace(&o.unit_op(Index::rat(1, 1), z.clone()).unwrap()), Scalar::one());
        assert_eq!(o.trace(&o.unit_op(z.clone(), Index::rat(1, 1)).unwrap()), Scalar::zero());
    }

    #[test]
    fn truncation_examples() {
        let s = delta();
        let m = s.truncate_q(&s.unit_op(nat(1), nat(2)).unwrap(), &Window::nat(3)).unwrap();
        assert_eq!(m, Mat::unit(3, 0, 1));
        assert!(s.truncate(&s.unit_op(nat(1), nat(4)).unwrap(), &Window::nat(3)).is_err());
        let o = DualSystem::order_step();
        let w = Window::from_indices(IndexDomain::Rat, vec![Index::rat(-1, 1), Index::rat(0, 1), Index::rat(1, 1)]).unwrap();
        let sub = o.subspace(Side::V, CutSet::ray(Ray::Le, Index::rat(0, 1))).unwrap();
        assert_eq!(o.truncate_subspace(&sub, &w).unwrap(), vec![Index::rat(-1, 1), Index::rat(0, 1)]);
    }

    #[test]
    fn annihilator_examples() {
        let s = delta();
        let one = s.subspace(Side::V, CutSet::fin(IndexDomain::Nat, &[nat(1)]).unwrap()).unwrap();
        let ann = s.annihilator(&one).unwrap();
        assert_eq!(ann.side, Side::W);
        assert_eq!(ann.set, CutSet::fin(IndexDomain::Nat, &[nat(1)]).unwrap().complement());
        let zero = s.subspace(Side::V, CutSet::empty(IndexDomain::Nat)).unwrap();
        assert!(s.annihilator(&zero).unwrap().set.is_full());

        let o = DualSystem::order_step();
        let up = o.subspace(Side::W, CutSet::ray(Ray::Ge, Index::rat(0, 1))).unwrap();
        assert_eq!(o.annihilator(&up).unwrap().set, CutSet::ray(Ray::Le, Index::rat(0, 1)));
        let neg = o.subspace(Side::V, CutSet::ray(Ray::Lt, Index::rat(0, 1))).unwrap();
        assert_eq!(o.closure(&neg).unwrap().set, CutSet::ray(Ray::Le, Index::rat(0, 1)));
        assert!(o.closure(&o.full_subspace(Side::V)).unwrap().set.is_full());
        let fin = o.subspace(Side::V, CutSet::fin(IndexDomain::Rat, &[Index::rat(0, 1)]).unwrap()).unwrap();
        assert!(matches!(o.annihilator(&fin), Err(Error::Unsupported(_))));
    }

    #[test]
    fn forms_and_partners() {
        let s = DualSystem::form(FormKind::Symmetric, Some(2), None).unwrap();
        assert_eq!(s.partner(&nat(3)).unwrap(), nat(4));
        assert_eq!(s.partner(&nat(5)).unwrap(), nat(5));
        let l = CutSet::fin(IndexDomain::Nat, &[nat(1), nat(3)]).unwrap();
        assert!(s.is_isotropic(&l).unwrap());
        assert_eq!(s.partner_set(&l).unwrap(), CutSet::fin(IndexDomain::Nat, &[nat(2), nat(4)]).unwrap());
        let all = DualSystem::form(FormKind::Alternating, None, None).unwrap();
        let odd_start = CutSet::ray(Ray::Ge, nat(2));
        assert_eq!(all.partner_set(&odd_start).unwrap(), CutSet::fin(IndexDomain::Nat, &[nat(2)]).unwrap().complement());
        assert!(DualSystem::form(FormKind::Alternating, Some(1), None).is_err());
    }

    #[test]
    fn skew_and_symm_preserve_forms() {
        let so = DualSystem::form(FormKind::Symmetric, None, Some(4)).unwrap();
        let e = |i| so.basis_vec(Side::V, nat(i)).unwrap();
        assert!(so.skew(&e(1), &e(1)).unwrap().is_zero());
        let w = Window::nat(4);
        let g = so.gram(&w).unwrap();
        let x = so.truncate_q(&so.skew(&e(1), &e(2)).unwrap(), &w).unwrap();
        assert!(x.transpose().mul(&g).add(&g.mul(&x)).is_zero());
        assert!(so.symm(&e(1), &e(2)).is_err());

        let sp = DualSystem::form(FormKind::Alternating, None, Some(4)).unwrap();
        let f = |i| sp.basis_vec(Side::V, nat(i)).unwrap();
        let a = sp.symm(&f(1), &f(3)).unwrap();
        assert!(a.sub(&sp.symm(&f(3), &f(1)).unwrap()).is_zero());
        let g = sp.gram(&w).unwrap();
        for (i, j) in [(1, 2), (1, 3), (2, 4), (3, 3)] {
            let x = sp.truncate_q(&sp.symm(&f(i), &f(j)).unwrap(), &w).unwrap();
            assert!(x.transpose().mul(&g).add(&g.mul(&x)).is_zero(), "{i} {j}");
        }
    }

    fn arb_op(n: u64) -> impl Strategy<Value = Vec<(u64, u64, i64)>> {
        prop::collection::vec((1..=n, 1..=n, -3i64..4), 0..6)
    }

    fn build(s: &DualSystem, terms: &[(u64, u64, i64)]) -> FinOp {
        terms.iter().fold(s.zero_op(), |acc, &(i, j, c)| {
            acc.add(&s.unit_op(nat(i), nat(j)).unwrap().scale(&Scalar::from(c)))
        })
    }

    fn rat_build(s: &DualSystem, terms: &[(u64, u64, i64)]) -> FinOp {
        let q = |k: u64| Index::rat(k as i64 - 3, 2);
        terms.iter().fold(s.zero_op(), |acc, &(i, j, c)| {
            acc.add(&s.unit_op(q(i), q(j)).unwrap().scale(&Scalar::from(c)))
        })
    }

    proptest! {
        #![proptest_config(ProptestConfig::with_cases(100))]

        #[test]
        fn jacobi(a in arb_op(4), b in arb_op(4), c in arb_op(4)) {
            for s in [delta(), DualSystem::form(FormKind::Symmetric, Some(1), None).unwrap()] {
                let (x, y, z) = (build(&s, &a), build(&s, &b), build(&s, &c));
                let j = s.bracket(&x, &s.bracket(&y, &z))
                    .add(&s.bracket(&y, &s.bracket(&z, &x)))
                    .add(&s.bracket(&z, &s.bracket(&x, &y)));
                prop_assert!(j.is_zero());
            }
        }

        #[test]
        fn truncation_is_functorial(a in arb_op(5), b in arb_op(5)) {
            let s = delta();
            let w = Window::nat(5);
            let (x, y) = (build(&s, &a), build(&s, &b));
            let mx = s.truncate_q(&x, &w).unwrap();
            let my = s.truncate_q(&y, &w).unwrap();
            prop_assert_eq!(s.truncate_q(&s.bracket(&x, &y), &w).unwrap(), mx.commutator(&my));
            prop_assert_eq!(s.trace(&x).to_q().unwrap(), mx.trace());
            prop_assert!(s.trace(&s.bracket(&x, &y)).is_zero());
            // Nested windows agree.
            let big = Window::nat(7);
            let mb = s.truncate_q(&x, &big).unwrap();
            prop_assert_eq!(mb.select(&[0, 1, 2, 3, 4], &[0, 1, 2, 3, 4]), mx);
        }

        #[test]
        fn order_truncation_is_functorial(a in arb_op(5), b in arb_op(5)) {
            let s = DualSystem::order_step();
            let idx: Vec<Index> = (1..=5).map(|k| Index::rat(k as i64 - 3, 2)).collect();
            let w = Window::from_indices(IndexDomain::Rat, idx).unwrap();
            let (x, y) = (rat_build(&s, &a), rat_build(&s, &b));
            let mx = s.truncate_q(&x, &w).unwrap();
            let my = s.truncate_q(&y, &w).unwrap();
            prop_assert_eq!(s.truncate_q(&s.bracket(&x, &y), &w).unwrap(), mx.commutator(&my));
            prop_assert_eq!(s.trace(&x).to_q().unwrap(), mx.trace());
        }

        #[test]
        fn apply_matches_terms(a in arb_op(4), k in 1u64..5) {
            let s = delta();
            let x = build(&s, &a);
            let v = s.basis_vec(Side::V, nat(k)).unwrap();
            let mut acc = s.vector(Side::V, vec![]).unwrap();
            for (tv, tw) in x.terms() {
                let p = s.pair(&v, &tw).unwrap();
                let scaled: Vec<(Index, Scalar)> = tv.coeffs().iter().map(|(i, c)| (i.clone(), c.mul(&p))).collect();
                let mut all: Vec<(Index, Scalar)> = acc.coeffs().iter().map(|(i, c)| (i.clone(), c.clone())).collect();
                all.extend(scaled);
                acc = s.vector(Side::V, all).unwrap();
            }
            prop_assert_eq!(s.apply(&x, &v).unwrap(), acc);
        }
    }
}
