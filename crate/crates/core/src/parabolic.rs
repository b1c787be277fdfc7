//! Parabolic subalgebras as stabilizers of taut couples or self-taut flags,
//! cut down by finitely many infinite trace conditions.

use std::fmt;

use crate::cut::{Card, CutSet};
use crate::error::{Error, Result};
use crate::flags::{self, column, level_window, Atom, GenFlag, Order, SelfTautFlag, TautCouple, Verdict};
use crate::index::{Index, IndexDomain, Window};
use crate::linear::{DualSystem, FinOp, FormKind, Kernel, Side, SubspaceDesc};
use crate::matrix::Mat;
use crate::scalar::{Ring, Scalar, Q};
use crate::space::MatSpace;

#[derive(Clone, Debug, PartialEq, Eq)]
pub enum Couple {
    Taut(TautCouple),
    SelfTaut(SelfTautFlag),
}

/// The classical algebra the parabolic lives in.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub enum Ambient {
    Gl,
    So,
    Sp,
}

impl fmt::Display for Ambient {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            Ambient::Gl => "gl",
            Ambient::So => "so",
            Ambient::Sp => "sp",
        })
    }
}

/// The trace of the action on a quotient `F''/F'`, with `X = F''∖F'` and
/// `Y` the matching gap of annihilators.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct BlockFunctional {
    pub id: String,
    pub x: CutSet,
    pub y: CutSet,
}

impl BlockFunctional {
    pub fn total(sys: &DualSystem) -> BlockFunctional {
        let u = sys.universe();
        BlockFunctional { id: "total".into(), x: u.clone(), y: u }
    }

    /// `Σ_{i ∈ X} Σ_j C_ij β(v_i, w_j)`.
    pub fn eval(&self, sys: &DualSystem, op: &FinOp) -> Result<Scalar> {
        let mut acc = Scalar::zero();
        for ((i, j), c) in op.coeffs() {
            if !self.x.contains(i)? {
                continue;
            }
            let g = sys.pair_basis(i, j);
            if !g.is_zero() {
                acc = acc.add(&c.mul(&Scalar::from(g)));
            }
        }
        acc.lift(sys.ring)
    }

    /// The functional as a row over coefficient matrices on `w`.
    fn coeff_row(&self, sys: &DualSystem, w: &Window) -> Result<Vec<Q>> {
        let ix = w.indices();
        let n = ix.len();
        let mut r = vec![Q::zero(); n * n];
        for (a, i) in ix.iter().enumerate() {
            if self.x.contains(i)? {
                for (b, j) in ix.iter().enumerate() {
                    r[a * n + b] = sys.pair_basis(i, j);
                }
            }
        }
        Ok(r)
    }

    /// The functional as a row over operator matrices on `w`.
    fn matrix_row(&self, w: &Window) -> Result<Vec<Q>> {
        let ix = w.indices();
        let n = ix.len();
        let mut r = vec![Q::zero(); n * n];
        for (a, i) in ix.iter().enumerate() {
            if self.x.contains(i)? {
                r[a * n + a] = Q::one();
            }
        }
        Ok(r)
    }
}

/// `Σ coeff · functional = 0`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct TraceRow(pub Vec<(BlockFunctional, Q)>);

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct ParabolicDesc {
    pub system: DualSystem,
    pub couple: Couple,
    pub trace_rows: Vec<TraceRow>,
}

impl ParabolicDesc {
    pub fn new(system: DualSystem, couple: Couple) -> Result<ParabolicDesc> {
        let flags: Vec<&GenFlag> = match &couple {
            Couple::Taut(c) => vec![&c.v, &c.w],
            Couple::SelfTaut(s) => {
                system.form_data().ok_or(Error::MissingForm("bilinear"))?;
                vec![&s.flag]
            }
        };
        for f in flags {
            if f.domain != system.domain {
                return Err(Error::DomainMismatch(format!("{} flag in a {} system", f.domain, system.domain)));
            }
        }
        Ok(ParabolicDesc { system, couple, trace_rows: Vec::new() })
    }

    pub fn from_couple(system: DualSystem, c: TautCouple) -> Result<ParabolicDesc> {
        ParabolicDesc::new(system, Couple::Taut(c))
    }

    pub fn from_selftaut(system: DualSystem, f: SelfTautFlag) -> Result<ParabolicDesc> {
        ParabolicDesc::new(system, Couple::SelfTaut(f))
    }

    /// Adds a trace condition; every functional must be the total trace or the
    /// trace of a quotient of two members of the `V` flag.
    pub fn with_trace_row(mut self, row: TraceRow) -> Result<ParabolicDesc> {
        for (b, _) in &row.0 {
            if !self.is_block(&b.x)? {
                return Err(Error::Invalid(format!("trace functional {} does not match a quotient of the flag", b.id)));
            }
        }
        self.trace_rows.push(row);
        Ok(self)
    }

    /// `p ∩ sl`: total trace zero.
    pub fn with_sl(self) -> Result<ParabolicDesc> {
        let t = BlockFunctional::total(&self.system);
        self.with_trace_row(TraceRow(vec![(t, Q::one())]))
    }

    pub fn v_flag(&self) -> &GenFlag {
        match &self.couple {
            Couple::Taut(c) => &c.v,
            Couple::SelfTaut(s) => &s.flag,
        }
    }

    /// The flag on `W`: the second flag, or the self-taut flag read through the form.
    pub fn w_flag(&self) -> GenFlag {
        match &self.couple {
            Couple::Taut(c) => c.w.clone(),
            Couple::SelfTaut(s) => s.flag.with_side(Side::W),
        }
    }

    pub fn ambient(&self) -> Ambient {
        match (&self.couple, self.system.form_data().map(|f| f.kind)) {
            (Couple::SelfTaut(_), Some(FormKind::Symmetric)) => Ambient::So,
            (Couple::SelfTaut(_), Some(FormKind::Alternating)) => Ambient::Sp,
            _ => Ambient::Gl,
        }
    }

    fn is_block(&self, x: &CutSet) -> Result<bool> {
        if *x == self.system.universe() {
            return Ok(true);
        }
        let f = self.v_flag();
        let Some(first) = first_in(f, x)? else {
            return Ok(false);
        };
        let lo = f.lower(&first)?;
        let hi = lo.union(x)?;
        Ok(lo.is_disjoint(x)? && f.has_member(&lo)? && f.has_member(&hi)?)
    }

    /// Verifies tautness (or self-tautness) at `level`.
    pub fn check_taut(&self, level: u64) -> Result<Verdict> {
        match &self.couple {
            Couple::Taut(c) => flags::is_taut_couple(&self.system, c, level),
            Couple::SelfTaut(s) => flags::is_selftaut(&self.system, s, level),
        }
    }
}

/// The element of `x` that enters the flag first.
fn first_in(f: &GenFlag, x: &CutSet) -> Result<Option<Index>> {
    let mut best: Option<(Index, CutSet)> = None;
    let mut cands: Vec<Index> = x.boundary_points();
    cands.extend(x.any_element());
    for c in cands {
        if !x.contains(&c)? {
            continue;
        }
        let lo = f.lower(&c)?;
        let better = match &best {
            None => true,
            Some((_, b)) => lo.is_subset(b)? && lo != *b,
        };
        if better {
            best = Some((c, lo));
        }
    }
    Ok(best.map(|(c, _)| c))
}

// ------------------------------------------------------------ membership

fn dot(row: &[Q], vals: &[Scalar]) -> Scalar {
    row.iter()
        .zip(vals)
        .filter(|(r, _)| !r.is_zero())
        .fold(Scalar::zero(), |acc, (r, v)| acc.add(&v.mul(&Scalar::from(r.clone()))))
}

/// Whether the functional with coefficients `coeffs` (over `support`) vanishes on `s`.
fn vanishes(sys: &DualSystem, side: Side, coeffs: &[(Index, Scalar)], s: &CutSet) -> Result<bool> {
    if s.is_empty() || coeffs.is_empty() {
        return Ok(true);
    }
    let support: Vec<Index> = coeffs.iter().map(|(i, _)| i.clone()).collect();
    let vals: Vec<Scalar> = coeffs.iter().map(|(_, a)| a.clone()).collect();
    Ok(sys.vanishing_rows(side, &support, s)?.iter().all(|r| dot(r, &vals).is_zero()))
}

/// Exact membership of a finite-rank operator in the parabolic.
pub fn stabilizer_contains(op: &FinOp, p: &ParabolicDesc) -> Result<bool> {
    let sys = &p.system;
    match p.ambient() {
        Ambient::Gl => {}
        amb => {
            let sign = if amb == Ambient::So { Scalar::one() } else { Scalar::one().neg() };
            for ((i, j), c) in op.coeffs() {
                if !c.add(&op.coeff(j, i).mul(&sign)).is_zero() {
                    return Ok(false);
                }
            }
        }
    }
    let vf = p.v_flag();
    for i in op.vsupport() {
        if !vanishes(sys, Side::V, &op.row(&i), &vf.lower(&i)?)? {
            return Ok(false);
        }
    }
    if let Couple::Taut(c) = &p.couple {
        for j in op.wsupport() {
            if !vanishes(sys, Side::W, &op.col(&j), &c.w.lower(&j)?)? {
                return Ok(false);
            }
        }
    }
    for TraceRow(terms) in &p.trace_rows {
        let mut acc = Scalar::zero();
        for (b, k) in terms {
            acc = acc.add(&b.eval(sys, op)?.mul(&Scalar::from(k.clone())));
        }
        if !acc.is_zero() {
            return Ok(false);
        }
    }
    Ok(true)
}

// ------------------------------------------------------------ truncation

/// The parabolic cut down to operators supported in a window.
#[derive(Clone, Debug)]
pub struct Truncation {
    /// Support window of the operators.
    pub support: Window,
    /// Window the matrices act on; contains `support`.
    pub window: Window,
    /// Basis of coefficient matrices on `support`.
    pub coeffs: Vec<Mat<Q>>,
    /// The same basis as operator matrices on `window`.
    pub algebra: MatSpace<Q>,
}

impl Truncation {
    pub fn dim(&self) -> usize {
        self.algebra.dim()
    }

    /// Matrix of `op` on the truncation window.
    pub fn matrix_of(&self, sys: &DualSystem, op: &FinOp) -> Result<Mat<Q>> {
        let c = sys.coeff_matrix(op, &self.support)?;
        let c = c.map(|x| x.to_q().expect("rational coefficient"));
        act_matrix(sys, &self.support, &self.window, &c)
    }

    pub fn contains(&self, sys: &DualSystem, op: &FinOp) -> Result<bool> {
        Ok(self.algebra.contains(&self.matrix_of(sys, op)?))
    }
}

/// The action of the coefficient matrix `c` (on `support`) on the span of `window`.
pub(crate) fn act_matrix(sys: &DualSystem, support: &Window, window: &Window, c: &Mat<Q>) -> Result<Mat<Q>> {
    let n = window.len();
    let pos: Vec<usize> = support.indices().iter().map(|i| window.position(i).expect("subwindow")).collect();
    let b = sys.gram(window)?;
    // Column x of the result is the image of v_x: Σ_ij C_ij β(v_x, w_j) v_i.
    Ok(Mat::from_fn(n, n, |r, x| {
        let Some(a) = pos.iter().position(|&p| p == r) else {
            return Q::zero();
        };
        let mut acc = Q::zero();
        for (bb, &pj) in pos.iter().enumerate() {
            let g = b.get(x, pj);
            if !g.is_zero() {
                acc = &acc + &(c.get(a, bb) * g);
            }
        }
        acc
    }))
}

/// Window on which the supported operators act faithfully.
pub(crate) fn faithful_window(sys: &DualSystem, w: &Window) -> Result<Window> {
    match sys.kernel {
        Kernel::OrderStep => {
            // One point above each support point separates the functionals.
            let ix = w.indices();
            let mut extra = Vec::new();
            for (k, i) in ix.iter().enumerate() {
                extra.push(match ix.get(k + 1) {
                    Some(next) => i.between(next).expect("dense order"),
                    None => i.some_above(),
                });
            }
            Window::new(w.domain, 0, &[ix, &extra].concat())
        }
        Kernel::Form(_) => {
            let mut ix = w.indices().to_vec();
            for i in w.indices() {
                ix.push(sys.partner(i)?);
            }
            Window::from_indices(w.domain, ix)
        }
        Kernel::Delta => Ok(w.clone()),
    }
}

/// Basis of the parabolic among operators supported in `w`.
///
/// For the delta kernel and forms this solves the literal conditions on
/// operator matrices (each truncated member is invariant). The order kernel
/// is not faithful on `w`, so there the exact vanishing conditions are solved
/// in coefficient space and mapped to a faithful larger window.
pub fn stabilizer_truncation(p: &ParabolicDesc, w: &Window) -> Result<Truncation> {
    let sys = &p.system;
    if sys.ring != Ring::Rational {
        return Err(Error::RingMismatch("window stabilizers are computed over Q".into()));
    }
    let support = faithful_window(sys, w)?;
    let support = if sys.kernel == Kernel::OrderStep { w.clone() } else { support };
    let window = faithful_window(sys, &support)?;
    let coeffs = match sys.kernel {
        Kernel::OrderStep => coefficient_solve(p, &support)?,
        _ => literal_solve(p, &support)?,
    };
    let mats = coeffs.iter().map(|c| act_matrix(sys, &support, &window, c)).collect::<Result<Vec<_>>>()?;
    let algebra = MatSpace::span(window.len(), &mats);
    if !algebra.is_closed() {
        return Err(Error::Invalid(format!("truncated stabilizer on {w} is not closed under brackets")));
    }
    Ok(Truncation { support, window, coeffs, algebra })
}

fn coefficient_solve(p: &ParabolicDesc, w: &Window) -> Result<Vec<Mat<Q>>> {
    let sys = &p.system;
    let n = w.len();
    let mut rows = flags::stab_rows(sys, p.v_flag(), w)?;
    if let Couple::Taut(c) = &p.couple {
        rows.extend(flags::stab_rows(sys, &c.w, w)?);
    }
    rows.extend(ambient_coeff_rows(p.ambient(), n));
    for TraceRow(terms) in &p.trace_rows {
        let mut r = vec![Q::zero(); n * n];
        for (b, k) in terms {
            for (x, y) in r.iter_mut().zip(b.coeff_row(sys, w)?) {
                *x = &*x + &(k * &y);
            }
        }
        rows.push(r);
    }
    Ok(flags::solve_coeffs(n, rows))
}

fn ambient_coeff_rows(amb: Ambient, n: usize) -> Vec<Vec<Q>> {
    let sign = match amb {
        Ambient::Gl => return Vec::new(),
        Ambient::So => Q::one(),
        Ambient::Sp => Q::from(-1),
    };
    let mut rows = Vec::new();
    for a in 0..n {
        for b in a..n {
            let mut r = vec![Q::zero(); n * n];
            r[a * n + b] = &r[a * n + b] + &Q::one();
            r[b * n + a] = &r[b * n + a] + &sign;
            if r.iter().any(|x| !x.is_zero()) {
                rows.push(r);
            }
        }
    }
    rows
}

/// Invariance of the truncated members, solved on operator matrices `M`.
fn literal_solve(p: &ParabolicDesc, w: &Window) -> Result<Vec<Mat<Q>>> {
    let sys = &p.system;
    let ix = w.indices();
    let n = ix.len();
    let mut rows: Vec<Vec<Q>> = Vec::new();
    let cell = |a: usize, b: usize| {
        let mut r = vec![Q::zero(); n * n];
        r[a * n + b] = Q::one();
        r
    };
    // M maps span(F ∩ w) into itself: M_ab = 0 for a ∉ F, b ∈ F.
    let mut invariant = |set: &CutSet, transpose: bool| -> Result<()> {
        for (b, j) in ix.iter().enumerate() {
            if !set.contains(j)? {
                continue;
            }
            for (a, i) in ix.iter().enumerate() {
                if !set.contains(i)? {
                    rows.push(if transpose { cell(b, a) } else { cell(a, b) });
                }
            }
        }
        Ok(())
    };
    for m in p.v_flag().members_near(w)? {
        invariant(&m, false)?;
    }
    if let Couple::Taut(c) = &p.couple {
        if sys.kernel != Kernel::Delta {
            return Err(Error::UnsupportedKernel("couples over a form use the coefficient route".into()));
        }
        // The W-action of M is its transpose.
        for m in c.w.members_near(w)? {
            invariant(&m, true)?;
        }
    }
    let g = sys.gram(w)?;
    if p.ambient() != Ambient::Gl {
        // Mᵀ G + G M = 0.
        for a in 0..n {
            for b in 0..n {
                let mut r = vec![Q::zero(); n * n];
                for k in 0..n {
                    let gkb = g.get(k, b);
                    if !gkb.is_zero() {
                        r[k * n + a] = &r[k * n + a] + gkb;
                    }
                    let gak = g.get(a, k);
                    if !gak.is_zero() {
                        r[k * n + b] = &r[k * n + b] + gak;
                    }
                }
                rows.push(r);
            }
        }
    }
    for TraceRow(terms) in &p.trace_rows {
        let mut r = vec![Q::zero(); n * n];
        for (bf, k) in terms {
            for (x, y) in r.iter_mut().zip(bf.matrix_row(w)?) {
                *x = &*x + &(k * &y);
            }
        }
        rows.push(r);
    }
    let ms = flags::solve_coeffs(n, rows);
    // Back to coefficients: M = C·Gᵀ.
    let gti = g.transpose().inverse().ok_or_else(|| Error::Invalid(format!("pairing degenerate on {w}")))?;
    Ok(ms.iter().map(|m| m.mul(&gti)).collect())
}

/// Truncated stabilizers of the same parabolic are compared as matrix spaces.
pub fn truncation_space(p: &ParabolicDesc, w: &Window) -> Result<MatSpace<Q>> {
    Ok(stabilizer_truncation(p, w)?.algebra)
}

// ------------------------------------------------------------ trace functionals

/// Quotient traces available on the `V` flag, listing schema families up to `bound`.
pub fn infinite_trace_functionals(p: &ParabolicDesc, bound: u64) -> Result<Vec<BlockFunctional>> {
    let sys = &p.system;
    let f = p.v_flag();
    let mut out = Vec::new();
    let mut push = |x: CutSet, id: String| -> Result<()> {
        let first = first_in(f, &x)?.expect("nonempty block");
        let lo = f.lower(&first)?;
        let hi = lo.union(&x)?;
        let y = match (
            sys.annihilator(&SubspaceDesc { side: f.side, set: lo }),
            sys.annihilator(&SubspaceDesc { side: f.side, set: hi }),
        ) {
            (Ok(a), Ok(b)) => a.set.diff(&b.set)?,
            _ => x.clone(),
        };
        out.push(BlockFunctional { id, x, y });
        Ok(())
    };
    let selftaut = matches!(p.couple, Couple::SelfTaut(_));
    for (k, atom) in f.atoms().iter().enumerate() {
        match atom {
            Atom::Block(r) => {
                if !r.card().exceeds(1) {
                    continue;
                }
                // In so/sp only isotropic quotients carry a gl quotient.
                if selftaut {
                    let first = first_in(f, r)?.expect("nonempty");
                    let hi = f.lower(&first)?.union(r)?;
                    if !sys.is_isotropic(&hi)? {
                        continue;
                    }
                }
                push(r.clone(), format!("block{k}"))?;
            }
            Atom::Columns { region, .. } => {
                for a in 1..=bound {
                    let x = region.inter(&column(a))?;
                    if !x.is_empty() {
                        push(x, format!("column{a}"))?;
                    }
                }
            }
            Atom::Singletons { region, .. } if f.domain == IndexDomain::ColPair => {
                // Whole columns are unions of consecutive pairs, bounded by members.
                for a in 1..=bound {
                    let x = region.inter(&column(a))?;
                    if x == column(a) {
                        push(x, format!("column{a}"))?;
                    }
                }
            }
            Atom::Singletons { .. } => {}
        }
    }
    Ok(out)
}

// ------------------------------------------------------------ solvability

pub fn is_locally_solvable(p: &ParabolicDesc, level: u64) -> Result<Verdict> {
    let w = level_window(&p.system, level);
    let t = stabilizer_truncation(p, &w)?;
    Ok(if t.algebra.is_solvable() {
        Verdict::holds("solvable", level)
    } else {
        let top = t.algebra.derived_series().last().map_or(0, MatSpace::dim);
        Verdict::fails("solvable", level, format!("derived series stabilizes at dimension {top}"))
    })
}

/// The rational Borel: `span{v_q ⊗ w_r : q ≤ r}` in the order kernel.
pub fn example_rational_borel() -> ParabolicDesc {
    let (sys, c) = flags::rational_cut_couple();
    ParabolicDesc::from_couple(sys, c).expect("rational Borel")
}

// ------------------------------------------------------------ so ambiguity

#[derive(Clone, Debug, PartialEq, Eq)]
pub enum Ambiguity {
    Unique,
    Triple(GenFlag, GenFlag, GenFlag),
}

/// For an isotropic member `L` with `dim L^⊥/L = 2` there are three
/// self-taut flags with one stabilizer: the flag of members inside `L` or
/// containing `L^⊥`, and its extensions by the two maximal isotropic
/// subspaces through `L`. `L` is the largest isotropic member of `f`.
pub fn so_flag_ambiguity(sys: &DualSystem, f: &SelfTautFlag) -> Result<Ambiguity> {
    match sys.form_data() {
        Some(form) if form.kind == FormKind::Symmetric => {}
        _ => return Err(Error::MissingForm("symmetric")),
    }
    let members = finite_members(&f.flag)?;
    let mut l: Option<CutSet> = None;
    for m in &members {
        if !m.is_empty() && sys.is_isotropic(m)? && l.as_ref().is_none_or(|x| x.is_subset(m).unwrap_or(false)) {
            l = Some(m.clone());
        }
    }
    let l = l.ok_or_else(|| Error::Invalid("flag has no nonzero isotropic member".into()))?;
    let lp = sys.annihilator(&SubspaceDesc { side: Side::V, set: l.clone() })?.set;
    let gap = lp.diff(&l)?;
    if gap.card() != Card::Finite(2) {
        return Ok(Ambiguity::Unique);
    }
    let pts = gap.finite_elements().expect("finite");
    if sys.partner(&pts[0])? != pts[1] {
        return Err(Error::Unsupported(format!(
            "the isotropic lines in {gap} are not spanned by basis vectors"
        )));
    }
    let mut base: Vec<CutSet> = Vec::new();
    for m in &members {
        if m.is_subset(&l)? || lp.is_subset(m)? {
            base.push(m.clone());
        }
    }
    for extra in [&l, &lp] {
        if !base.contains(extra) {
            base.push(extra.clone());
        }
    }
    base.sort_by_key(|m| m.card());
    let build = |extra: Option<CutSet>| -> Result<GenFlag> {
        let mut ms = base.clone();
        if let Some(e) = extra {
            ms.push(e);
        }
        ms.sort_by_key(|m| m.card());
        GenFlag::from_chain(Side::V, sys.domain, &ms)
    };
    let m1 = l.union(&CutSet::singleton(pts[0].clone())?)?;
    let m2 = l.union(&CutSet::singleton(pts[1].clone())?)?;
    Ok(Ambiguity::Triple(build(None)?, build(Some(m1))?, build(Some(m2))?))
}

/// Members of a flag whose atoms are blocks or finite singleton runs.
pub fn finite_members(f: &GenFlag) -> Result<Vec<CutSet>> {
    let mut out = vec![CutSet::empty(f.domain)];
    let mut base = CutSet::empty(f.domain);
    for a in f.atoms() {
        match a {
            Atom::Block(r) => {
                base = base.union(r)?;
                out.push(base.clone());
            }
            Atom::Singletons { region, order } => {
                let mut pts = region
                    .finite_elements()
                    .ok_or_else(|| Error::Unsupported("infinite singleton run".into()))?;
                if *order == Order::Descending {
                    pts.reverse();
                }
                for x in pts {
                    base = base.union(&CutSet::singleton(x)?)?;
                    out.push(base.clone());
                }
            }
            Atom::Columns { .. } => return Err(Error::Unsupported("column schema has infinitely many members".into())),
        }
    }
    Ok(out)
}

#[cfg(test)]
mod tests {
    use super::*;

    fn nat(s: &str) -> CutSet {
        CutSet::parse(s, IndexDomain::Nat).unwrap()
    }

    fn chain_couple(sys: &DualSystem, members: &[&str]) -> ParabolicDesc {
        let ms: Vec<CutSet> = members.iter().map(|s| nat(s)).collect();
        let v = GenFlag::from_chain(Side::V, IndexDomain::Nat, &ms).unwrap();
        let mut perps: Vec<CutSet> = ms.iter().map(|m| sys.universe().diff(m).unwrap()).collect();
        perps.reverse();
        let w = GenFlag::from_chain(Side::W, IndexDomain::Nat, &perps).unwrap();
        ParabolicDesc::from_couple(sys.clone(), TautCouple::new(v, w).unwrap()).unwrap()
    }

    #[test]
    fn delta_membership() {
        let sys = DualSystem::delta(IndexDomain::Nat);
        let p = chain_couple(&sys, &["(empty)", "(fin 1)", "(full)"]);
        let e = |i, j| sys.unit_op(Index::Nat(i), Index::Nat(j)).unwrap();
        assert!(stabilizer_contains(&e(1, 2), &p).unwrap());
        assert!(!stabilizer_contains(&e(2, 1), &p).unwrap());
        let p = p.with_sl().unwrap();
        assert!(!stabilizer_contains(&e(1, 1), &p).unwrap());
        assert!(stabilizer_contains(&e(1, 1).sub(&e(2, 2)), &p).unwrap());
    }

    #[test]
    fn truncation_dimensions() {
        let sys = DualSystem::delta(IndexDomain::Nat);
        let w = Window::nat(4);
        let full = chain_couple(&sys, &["(empty)", "(fin 1)", "(fin 1 2)", "(fin 1 2 3)", "(full)"]);
        assert_eq!(stabilizer_truncation(&full, &w).unwrap().dim(), 10);
        let two = chain_couple(&sys, &["(empty)", "(fin 1 2)", "(full)"]);
        assert_eq!(stabilizer_truncation(&two, &w).unwrap().dim(), 12);
        let triv = ParabolicDesc::from_couple(sys.clone(), TautCouple::trivial(&sys)).unwrap();
        assert_eq!(stabilizer_truncation(&triv, &w).unwrap().dim(), 16);
        assert!(!is_locally_solvable(&triv, 2).unwrap().holds);
    }

    #[test]
    fn rational_borel() {
        let p = example_rational_borel();
        let sys = &p.system;
        let op = |q: (i64, i64), r: (i64, i64)| sys.unit_op(Index::rat(q.0, q.1), Index::rat(r.0, r.1)).unwrap();
        assert!(stabilizer_contains(&op((1, 3), (1, 2)), &p).unwrap());
        assert!(!stabilizer_contains(&op((1, 2), (1, 3)), &p).unwrap());
        assert!(sys.trace(&op((1, 3), (1, 2))).is_zero());
        for n in 1..=5 {
            let v = is_locally_solvable(&p, n).unwrap();
            assert!(v.holds, "{v}");
            let t = stabilizer_truncation(&p, &level_window(sys, n)).unwrap();
            assert_eq!(t.dim() as u64, n * (n + 1) / 2);
        }
    }

    #[test]
    fn column_functionals() {
        let (sys, c) = flags::example_limit_ordinal_couple();
        let p = ParabolicDesc::from_couple(sys.clone(), c).unwrap();
        let fs = infinite_trace_functionals(&p, 3).unwrap();
        assert_eq!(fs.iter().map(|b| b.id.as_str()).collect::<Vec<_>>(), ["column1", "column2", "column3"]);
        let op = |i, a| sys.unit_op(Index::Col(i, a), Index::Col(i, a)).unwrap();
        assert_eq!(fs[0].eval(&sys, &op(1, 1)).unwrap(), Scalar::one());
        assert!(fs[0].eval(&sys, &op(1, 2)).unwrap().is_zero());
        let p = p.with_trace_row(TraceRow(vec![(fs[1].clone(), Q::one())])).unwrap();
        assert!(!stabilizer_contains(&op(2, 2), &p).unwrap());

        let sys = DualSystem::delta(IndexDomain::Nat);
        let triv = ParabolicDesc::from_couple(sys.clone(), TautCouple::trivial(&sys)).unwrap();
        let fs = infinite_trace_functionals(&triv, 3).unwrap();
        assert_eq!(fs.len(), 1);
        assert_eq!(fs[0].x, sys.universe());
    }

    #[test]
    fn so_triple() {
        let sys = DualSystem::form(FormKind::Symmetric, Some(3), Some(6)).unwrap();
        let f = GenFlag::from_chain(Side::V, IndexDomain::Nat, &[nat("(fin 1)"), nat("(fin 1 3)"), nat("(fin 1 3 5 6)"), nat("(fin 1 3 4 5 6)"), sys.universe()]).unwrap();
        let st = SelfTautFlag::new(&sys, f, 3).unwrap();
        let Ambiguity::Triple(a, b, c) = so_flag_ambiguity(&sys, &st).unwrap() else {
            panic!("expected a triple");
        };
        let w = Window::nat(6);
        let spaces: Vec<MatSpace<Q>> = [a, b, c]
            .into_iter()
            .map(|g| {
                let st = SelfTautFlag::new(&sys, g, 3).unwrap();
                assert!(flags::is_selftaut(&sys, &st, 3).unwrap().holds);
                truncation_space(&ParabolicDesc::from_selftaut(sys.clone(), st).unwrap(), &w).unwrap()
            })
            .collect();
        assert_eq!(spaces[0], spaces[1]);
        assert_eq!(spaces[0], spaces[2]);

        // L = {1} leaves a 4-dimensional quotient.
        let g = GenFlag::from_chain(Side::V, IndexDomain::Nat, &[nat("(fin 1)"), nat("(fin 1 3 4 5 6)"), sys.universe()]).unwrap();
        let st = SelfTautFlag::new(&sys, g, 3).unwrap();
        assert_eq!(so_flag_ambiguity(&sys, &st).unwrap(), Ambiguity::Unique);
    }
}
