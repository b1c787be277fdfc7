//! Generalized flags of basis-aligned subspaces, semiclosedness, taut couples
//! and self-taut flags.
//!
//! A flag is an ordered list of atoms. Each atom contributes the members
//! `base ∪ part`, where `base` is the union of the earlier atoms and `part`
//! runs over the initial segments of the atom in its own order. Every atom
//! therefore carries its own IPS pairs, and the union of all regions is the
//! set of covered basis indices.

use std::fmt;

use crate::cut::{CutSet, Ray};
use crate::error::{Error, Result};
use crate::index::{Index, IndexDomain, Window};
use crate::linear::{DualSystem, Kernel, Side, SubspaceDesc};
use crate::matrix::Mat;
use crate::scalar::Q;

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub enum Order {
    Ascending,
    Descending,
}

#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub enum Atom {
    /// One IPS pair `(base, base ∪ region)`.
    Block(CutSet),
    /// One IPS pair per index of `region`, added one at a time.
    Singletons { region: CutSet, order: Order },
    /// One IPS pair per column of a `ColPair` region, added a column at a time.
    Columns { region: CutSet, order: Order },
}

impl Atom {
    pub fn region(&self) -> &CutSet {
        match self {
            Atom::Block(r) | Atom::Singletons { region: r, .. } | Atom::Columns { region: r, .. } => r,
        }
    }
}

/// How a flag was described; only used for reporting.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub enum Schema {
    FiniteChain,
    ColumnSchema,
    RationalCutSchema,
    Custom,
}

impl fmt::Display for Schema {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            Schema::FiniteChain => "finite-chain",
            Schema::ColumnSchema => "column-schema",
            Schema::RationalCutSchema => "rational-cut-schema",
            Schema::Custom => "custom",
        })
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct GenFlag {
    pub side: Side,
    pub domain: IndexDomain,
    pub schema: Schema,
    atoms: Vec<Atom>,
}

/// Cut set of the columns strictly before (`le = false`) or up to column `a`.
fn columns_below(a: u64, le: bool) -> CutSet {
    CutSet::ray(Ray::Lt, Index::Col(1, if le { a + 1 } else { a }))
}

fn column_of(i: &Index) -> Option<u64> {
    match i {
        Index::Col(_, a) => Some(*a),
        _ => None,
    }
}

pub fn column(a: u64) -> CutSet {
    columns_below(a, true).diff(&columns_below(a, false)).expect("same domain")
}

impl GenFlag {
    pub fn new(side: Side, domain: IndexDomain, atoms: Vec<Atom>, schema: Schema) -> Result<GenFlag> {
        let mut seen = CutSet::empty(domain);
        for a in &atoms {
            let r = a.region();
            if r.domain() != domain {
                return Err(Error::DomainMismatch(format!("atom over {} in a {domain} flag", r.domain())));
            }
            if r.is_empty() {
                return Err(Error::InvalidFlag("empty atom".into()));
            }
            if let Some(x) = r.inter(&seen)?.any_element() {
                return Err(Error::InvalidFlag(format!("members not strictly increasing at index {x}")));
            }
            if matches!(a, Atom::Columns { .. }) && domain != IndexDomain::ColPair {
                return Err(Error::DomainMismatch("column atoms need the ColPair domain".into()));
            }
            seen = seen.union(r)?;
        }
        Ok(GenFlag { side, domain, schema, atoms })
    }

    /// A flag given by an explicit chain of members.
    ///
    /// Consecutive differences become blocks; a nonempty first member is a
    /// block after the zero subspace.
    pub fn from_chain(side: Side, domain: IndexDomain, members: &[CutSet]) -> Result<GenFlag> {
        let mut atoms = Vec::new();
        let mut prev = CutSet::empty(domain);
        for m in members {
            if m.domain() != domain {
                return Err(Error::DomainMismatch(format!("member {m} in a {domain} flag")));
            }
            if let Some(x) = prev.diff(m)?.any_element() {
                return Err(Error::InvalidFlag(format!("members {prev} and {m} are incomparable; witness index {x}")));
            }
            let step = m.diff(&prev)?;
            if step.is_empty() {
                if m.is_empty() && atoms.is_empty() {
                    continue;
                }
                return Err(Error::InvalidFlag(format!("duplicate member {m}")));
            }
            atoms.push(Atom::Block(step));
            prev = m.clone();
        }
        GenFlag::new(side, domain, atoms, Schema::FiniteChain)
    }

    /// `{0, X}` where `X` is the whole given basis.
    pub fn trivial(side: Side, universe: CutSet) -> Result<GenFlag> {
        let d = universe.domain();
        GenFlag::from_chain(side, d, &[CutSet::empty(d), universe])
    }

    pub fn singletons(side: Side, region: CutSet, order: Order) -> Result<GenFlag> {
        let schema = if region.domain() == IndexDomain::Rat { Schema::RationalCutSchema } else { Schema::Custom };
        GenFlag::new(side, region.domain(), vec![Atom::Singletons { region, order }], schema)
    }

    pub fn columns(side: Side, order: Order) -> Result<GenFlag> {
        let region = CutSet::full(IndexDomain::ColPair);
        GenFlag::new(side, IndexDomain::ColPair, vec![Atom::Columns { region, order }], Schema::ColumnSchema)
    }

    pub fn atoms(&self) -> &[Atom] {
        &self.atoms
    }

    pub fn with_side(&self, side: Side) -> GenFlag {
        GenFlag { side, ..self.clone() }
    }

    /// Union of all atom regions.
    pub fn support(&self) -> Result<CutSet> {
        self.base(self.atoms.len())
    }

    fn base(&self, k: usize) -> Result<CutSet> {
        let mut out = CutSet::empty(self.domain);
        for a in &self.atoms[..k] {
            out = out.union(a.region())?;
        }
        Ok(out)
    }

    fn atom_of(&self, i: &Index) -> Result<Option<usize>> {
        for (k, a) in self.atoms.iter().enumerate() {
            if a.region().contains(i)? {
                return Ok(Some(k));
            }
        }
        Ok(None)
    }

    /// The IPS pair `(F', F'')` with `i ∈ F''∖F'`, if `i` is covered.
    pub fn gap(&self, i: &Index) -> Result<Option<(CutSet, CutSet)>> {
        let Some(k) = self.atom_of(i)? else {
            return Ok(None);
        };
        let base = self.base(k)?;
        let (lo, hi) = match &self.atoms[k] {
            Atom::Block(r) => (CutSet::empty(self.domain), r.clone()),
            Atom::Singletons { region, order } => {
                let (strict, weak) = match order {
                    Order::Ascending => (Ray::Lt, Ray::Le),
                    Order::Descending => (Ray::Gt, Ray::Ge),
                };
                (
                    region.inter(&CutSet::ray(strict, i.clone()))?,
                    region.inter(&CutSet::ray(weak, i.clone()))?,
                )
            }
            Atom::Columns { region, order } => {
                let a = column_of(i).expect("ColPair index");
                let (strict, weak) = match order {
                    Order::Ascending => (columns_below(a, false), columns_below(a, true)),
                    Order::Descending => (columns_below(a, true).complement(), columns_below(a, false).complement()),
                };
                (region.inter(&strict)?, region.inter(&weak)?)
            }
        };
        Ok(Some((base.union(&lo)?, base.union(&hi)?)))
    }

    /// Union of the members not containing `i`.
    pub fn lower(&self, i: &Index) -> Result<CutSet> {
        match self.gap(i)? {
            Some((lo, _)) => Ok(lo),
            None => self.support(),
        }
    }

    /// Members that are atom boundaries (finitely many).
    pub fn boundary_members(&self) -> Result<Vec<CutSet>> {
        let mut out = Vec::new();
        for k in 0..=self.atoms.len() {
            let here = |j: usize| {
                j < self.atoms.len()
                    && match &self.atoms[j] {
                        Atom::Block(_) => true,
                        Atom::Singletons { region, order } => has_first(region, *order),
                        Atom::Columns { order, .. } => *order == Order::Ascending,
                    }
            };
            let there = |j: usize| {
                j < self.atoms.len()
                    && match &self.atoms[j] {
                        Atom::Block(_) => true,
                        Atom::Singletons { region, order } => has_first(region, flip(*order)),
                        Atom::Columns { order, .. } => *order == Order::Descending,
                    }
            };
            if here(k) || (k > 0 && there(k - 1)) {
                out.push(self.base(k)?);
            }
        }
        Ok(out)
    }

    /// Members whose IPS pairs meet `w`, together with the boundary members.
    pub fn members_near(&self, w: &Window) -> Result<Vec<CutSet>> {
        let mut out = self.boundary_members()?;
        for i in w.indices() {
            if let Some((lo, hi)) = self.gap(i)? {
                out.push(lo);
                out.push(hi);
            }
        }
        dedup(&mut out);
        Ok(out)
    }

    /// IPS pairs meeting `w`, in window order.
    pub fn ips_pairs_in(&self, w: &Window) -> Result<Vec<(CutSet, CutSet)>> {
        let mut out: Vec<(CutSet, CutSet)> = Vec::new();
        for i in w.indices() {
            if let Some(p) = self.gap(i)? {
                if !out.contains(&p) {
                    out.push(p);
                }
            }
        }
        Ok(out)
    }

    /// Whether `s` is a member of the flag.
    pub fn has_member(&self, s: &CutSet) -> Result<bool> {
        if self.boundary_members()?.contains(s) {
            return Ok(true);
        }
        for x in [s.complement().any_element(), s.any_element()].into_iter().flatten() {
            if let Some((lo, hi)) = self.gap(&x)? {
                if &lo == s || &hi == s {
                    return Ok(true);
                }
            }
        }
        // An index just above or below a boundary point sees `s` as one end of its pair.
        for b in s.boundary_points() {
            let mut probes = vec![b.clone(), b.some_above()];
            probes.extend(b.some_below());
            for x in probes {
                if let Some((lo, hi)) = self.gap(&x)? {
                    if &lo == s || &hi == s {
                        return Ok(true);
                    }
                }
            }
        }
        Ok(false)
    }
}

fn flip(o: Order) -> Order {
    match o {
        Order::Ascending => Order::Descending,
        Order::Descending => Order::Ascending,
    }
}

/// Whether `region` has a first element in the given order.
fn has_first(region: &CutSet, order: Order) -> bool {
    let r = match order {
        Order::Ascending => region.clone(),
        Order::Descending => return region.finite_elements().is_some() || has_max(region),
    };
    match r.domain() {
        IndexDomain::Rat => r.any_element().is_some_and(|x| {
            let below = CutSet::ray(Ray::Lt, x.clone());
            r.inter(&below).map(|b| b.is_empty()).unwrap_or(false)
        }),
        _ => true,
    }
}

fn has_max(region: &CutSet) -> bool {
    let pts = region.boundary_points();
    match pts.last() {
        None => false,
        Some(p) => {
            let above = CutSet::ray(Ray::Gt, p.clone());
            region.inter(&above).map(|s| s.is_empty()).unwrap_or(false) && region.contains(p).unwrap_or(false)
        }
    }
}

fn dedup(v: &mut Vec<CutSet>) {
    let mut out: Vec<CutSet> = Vec::new();
    for s in v.drain(..) {
        if !out.contains(&s) {
            out.push(s);
        }
    }
    *v = out;
}

impl fmt::Display for GenFlag {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{} flag in {} [", self.schema, self.side)?;
        for (k, a) in self.atoms.iter().enumerate() {
            if k > 0 {
                f.write_str(", ")?;
            }
            match a {
                Atom::Block(r) => write!(f, "block {r}")?,
                Atom::Singletons { region, order } => write!(f, "singletons {order:?} {region}")?,
                Atom::Columns { region, order } => write!(f, "columns {order:?} {region}")?,
            }
        }
        f.write_str("]")
    }
}

// ------------------------------------------------------------ validation

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct FlagReport {
    pub ips_pairs: Vec<(CutSet, CutSet)>,
    pub uncovered: Vec<Index>,
}

impl FlagReport {
    pub fn is_valid(&self) -> bool {
        self.uncovered.is_empty()
    }
}

/// Chain order and disjointness are enforced by construction; this reports
/// the IPS pairs meeting `w` and any index of the basis left uncovered.
pub fn validate_genflag(sys: &DualSystem, f: &GenFlag, w: &Window) -> Result<FlagReport> {
    if f.domain != sys.domain {
        return Err(Error::DomainMismatch(format!("{} flag in a {} system", f.domain, sys.domain)));
    }
    let universe = sys.universe();
    if let Some(x) = f.support()?.diff(&universe)?.any_element() {
        return Err(Error::InvalidFlag(format!("index {x} is outside the basis")));
    }
    let mut uncovered = Vec::new();
    for i in universe.elements_in(w)? {
        if f.gap(&i)?.is_none() {
            uncovered.push(i);
        }
    }
    if uncovered.is_empty() {
        if let Some(x) = universe.diff(&f.support()?)?.any_element() {
            uncovered.push(x);
        }
    }
    Ok(FlagReport { ips_pairs: f.ips_pairs_in(w)?, uncovered })
}

/// Outcome of a check run at a finite level.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Verdict {
    pub name: String,
    pub level: u64,
    pub holds: bool,
    pub witness: Option<String>,
}

impl Verdict {
    pub fn holds(name: &str, level: u64) -> Verdict {
        Verdict { name: name.into(), level, holds: true, witness: None }
    }

    pub fn fails(name: &str, level: u64, witness: String) -> Verdict {
        Verdict { name: name.into(), level, holds: false, witness: Some(witness) }
    }
}

impl fmt::Display for Verdict {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.holds {
            write!(f, "{}: holds to level {}", self.name, self.level)
        } else {
            write!(f, "{}: fails at level {}", self.name, self.level)?;
            if let Some(w) = &self.witness {
                write!(f, "; witness {w}")?;
            }
            Ok(())
        }
    }
}

/// Semiclosedness on the members near `w`: each non-closed member must form an
/// IPS pair with its closure. Returns the offending member if any.
pub fn semiclosed_witness(sys: &DualSystem, f: &GenFlag, w: &Window) -> Result<Option<String>> {
    for m in f.members_near(w)? {
        let desc = SubspaceDesc { side: f.side, set: m.clone() };
        let cl = sys.closure(&desc)?.set;
        if cl == m {
            continue;
        }
        let ok = match cl.diff(&m)?.any_element() {
            Some(x) => f.gap(&x)? == Some((m.clone(), cl.clone())),
            None => false,
        };
        if !ok {
            return Ok(Some(format!("member {m} has closure {cl}, which is not its immediate successor")));
        }
    }
    Ok(None)
}

pub fn is_semiclosed(sys: &DualSystem, f: &GenFlag, w: &Window) -> Result<bool> {
    Ok(semiclosed_witness(sys, f, w)?.is_none())
}

/// The window on which a level-`n` check runs.
pub fn level_window(sys: &DualSystem, n: u64) -> Window {
    match sys.domain {
        IndexDomain::Rat => {
            let pts: Vec<Index> = (0..n as i64).map(|k| Index::rat(2 * k - n as i64 + 1, 2)).collect();
            Window::from_indices(IndexDomain::Rat, pts).expect("rational window")
        }
        IndexDomain::ColPair => Window::new(IndexDomain::ColPair, n, &[]).expect("column window"),
        IndexDomain::Nat => {
            let k = match sys.kernel {
                Kernel::Form(_) => 2 * n,
                _ => n,
            };
            Window::nat(sys.rank.map_or(k, |r| k.min(r)))
        }
    }
}

// ------------------------------------------------------------ stabilizers

/// Constraint rows, over coefficient matrices `C` on `w × w` flattened row
/// by row, for `Σ C_ij v_i ⊗ w_j` to preserve every member of `f`.
pub fn stab_rows(sys: &DualSystem, f: &GenFlag, w: &Window) -> Result<Vec<Vec<Q>>> {
    let n = w.len();
    let idx = w.indices();
    let mut rows = Vec::new();
    for (a, i) in idx.iter().enumerate() {
        let s = f.lower(i)?;
        if s.is_empty() {
            continue;
        }
        for r in sys.vanishing_rows(f.side, idx, &s)? {
            rows.push(embed(n, a, f.side, &r));
        }
    }
    Ok(rows)
}

/// Rows expressing that the operator preserves the aligned subspace `s` on `side`.
pub fn preserve_rows(sys: &DualSystem, side: Side, s: &CutSet, w: &Window) -> Result<Vec<Vec<Q>>> {
    let n = w.len();
    let idx = w.indices();
    if s.is_empty() {
        return Ok(Vec::new());
    }
    let van = sys.vanishing_rows(side, idx, s)?;
    let mut rows = Vec::new();
    for (a, i) in idx.iter().enumerate() {
        if s.contains(i)? {
            continue;
        }
        for r in &van {
            rows.push(embed(n, a, side, r));
        }
    }
    Ok(rows)
}

/// Places a row over one index of `w` into coefficient space: side `V` fixes
/// the row index `i = w[a]`, side `W` fixes the column index `j = w[a]`.
fn embed(n: usize, a: usize, side: Side, r: &[Q]) -> Vec<Q> {
    let mut out = vec![Q::zero(); n * n];
    for (b, x) in r.iter().enumerate() {
        let k = match side {
            Side::V => a * n + b,
            Side::W => b * n + a,
        };
        out[k] = x.clone();
    }
    out
}

/// Basis of the coefficient matrices satisfying `rows`.
pub fn solve_coeffs(n: usize, rows: Vec<Vec<Q>>) -> Vec<Mat<Q>> {
    let basis = if rows.is_empty() {
        (0..n * n)
            .map(|k| {
                let mut v = vec![Q::zero(); n * n];
                v[k] = Q::one();
                v
            })
            .collect()
    } else {
        Mat::from_rows(rows).expect("row lengths").nullspace()
    };
    basis.iter().map(|v| Mat::from_fn(n, n, |i, j| v[i * n + j].clone())).collect()
}

fn satisfies(rows: &[Vec<Q>], c: &Mat<Q>) -> bool {
    let e = c.entries();
    // Rows are sparse: one index of the window each.
    rows.iter().all(|r| {
        r.iter().zip(e).filter(|(x, y)| !x.is_zero() && !y.is_zero()).fold(Q::zero(), |acc, (x, y)| &acc + &(x * y)).is_zero()
    })
}

/// Stabilizer of `f` among operators supported in `w × w`, as coefficient matrices.
pub fn flag_stabilizer(sys: &DualSystem, f: &GenFlag, w: &Window) -> Result<Vec<Mat<Q>>> {
    Ok(solve_coeffs(w.len(), stab_rows(sys, f, w)?))
}

// ------------------------------------------------------------ taut couples

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct TautCouple {
    pub v: GenFlag,
    pub w: GenFlag,
    /// Highest level at which tautness has been confirmed.
    pub verified_to: Option<u64>,
}

impl TautCouple {
    pub fn new(v: GenFlag, w: GenFlag) -> Result<TautCouple> {
        if v.side != Side::V || w.side != Side::W {
            return Err(Error::SideMismatch("a couple is a flag in V and a flag in W".into()));
        }
        if v.domain != w.domain {
            return Err(Error::DomainMismatch(format!("{} vs {}", v.domain, w.domain)));
        }
        Ok(TautCouple { v, w, verified_to: None })
    }

    pub fn trivial(sys: &DualSystem) -> TautCouple {
        let u = sys.universe();
        TautCouple {
            v: GenFlag::trivial(Side::V, u.clone()).expect("trivial flag"),
            w: GenFlag::trivial(Side::W, u).expect("trivial flag"),
            verified_to: None,
        }
    }

    /// The couple with the two flags exchanged, read in the swapped system.
    pub fn swapped(&self) -> TautCouple {
        TautCouple { v: self.w.with_side(Side::V), w: self.v.with_side(Side::W), verified_to: self.verified_to }
    }
}

/// One direction of tautness: annihilators of members of `f` must be invariant
/// under the stabilizer of `g` (a flag on the other side).
fn taut_direction(sys: &DualSystem, f: &GenFlag, g: &GenFlag, w: &Window) -> Result<Option<String>> {
    let stab = flag_stabilizer(sys, g, w)?;
    for m in f.members_near(w)? {
        let ann = sys.annihilator(&SubspaceDesc { side: f.side, set: m.clone() })?.set;
        let rows = preserve_rows(sys, g.side, &ann, w)?;
        if rows.is_empty() {
            continue;
        }
        if let Some(c) = stab.iter().find(|c| !satisfies(&rows, c)) {
            let op = sys.op_from_coeffs(w, c)?;
            return Ok(Some(format!("{op:?} stabilizes the {} flag but moves {ann} = ({m})^⊥", g.side)));
        }
    }
    Ok(None)
}

pub fn is_taut_couple(sys: &DualSystem, c: &TautCouple, level: u64) -> Result<Verdict> {
    let w = level_window(sys, level);
    let witness = match taut_direction(sys, &c.v, &c.w, &w)? {
        Some(x) => Some(x),
        None => taut_direction(sys, &c.w, &c.v, &w)?,
    };
    Ok(match witness {
        None => Verdict::holds("taut", level),
        Some(x) => Verdict::fails("taut", level, x),
    })
}

/// Checks levels `1..=level` and records the result in the couple.
pub fn certify_taut(sys: &DualSystem, c: &mut TautCouple, level: u64) -> Result<Verdict> {
    for n in 1..=level {
        let v = is_taut_couple(sys, c, n)?;
        if !v.holds {
            return Ok(v);
        }
    }
    c.verified_to = Some(level);
    Ok(Verdict::holds("taut", level))
}

// ------------------------------------------------------------ self-taut flags

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub enum MemberKind {
    Isotropic,
    Coisotropic,
    /// Both, i.e. Lagrangian.
    Lagrangian,
    Neither,
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct SelfTautFlag {
    pub flag: GenFlag,
    pub classification: Vec<(CutSet, MemberKind)>,
}

impl SelfTautFlag {
    pub fn new(sys: &DualSystem, flag: GenFlag, level: u64) -> Result<SelfTautFlag> {
        let classification = classify_members(sys, &flag, &level_window(sys, level))?;
        Ok(SelfTautFlag { flag, classification })
    }

    /// The partner flag in `W`.
    pub fn as_couple(&self) -> TautCouple {
        TautCouple { v: self.flag.with_side(Side::V), w: self.flag.with_side(Side::W), verified_to: None }
    }
}

pub fn classify_members(sys: &DualSystem, f: &GenFlag, w: &Window) -> Result<Vec<(CutSet, MemberKind)>> {
    sys.form_data().ok_or(Error::MissingForm("bilinear"))?;
    let mut out = Vec::new();
    for m in f.members_near(w)? {
        let iso = sys.is_isotropic(&m)?;
        let co = sys.is_coisotropic(&m)?;
        let kind = match (iso, co) {
            (true, true) => MemberKind::Lagrangian,
            (true, false) => MemberKind::Isotropic,
            (false, true) => MemberKind::Coisotropic,
            (false, false) => MemberKind::Neither,
        };
        out.push((m, kind));
    }
    Ok(out)
}

pub fn is_selftaut(sys: &DualSystem, f: &SelfTautFlag, level: u64) -> Result<Verdict> {
    sys.form_data().ok_or(Error::MissingForm("bilinear"))?;
    if let Some((m, _)) = f.classification.iter().find(|(_, k)| *k == MemberKind::Neither) {
        return Ok(Verdict::fails("self-taut", level, format!("member {m} is neither isotropic nor coisotropic")));
    }
    let v = is_taut_couple(sys, &f.as_couple(), level)?;
    Ok(Verdict { name: "self-taut".into(), ..v })
}

// ------------------------------------------------------------ examples

/// The column couple with limit ordinals: `V` ordered column by column with
/// each column filled one vector at a time, `W` by the reverse order.
pub fn example_limit_ordinal_couple() -> (DualSystem, TautCouple) {
    let sys = DualSystem::delta(IndexDomain::ColPair);
    let full = CutSet::full(IndexDomain::ColPair);
    let v = GenFlag::singletons(Side::V, full.clone(), Order::Ascending).expect("flag");
    let w = GenFlag::singletons(Side::W, full, Order::Descending).expect("flag");
    let v = GenFlag { schema: Schema::ColumnSchema, ..v };
    let w = GenFlag { schema: Schema::ColumnSchema, ..w };
    (sys, TautCouple { v, w, verified_to: None })
}

/// The coarser column couple whose pairs are whole columns.
pub fn column_block_couple() -> (DualSystem, TautCouple) {
    let sys = DualSystem::delta(IndexDomain::ColPair);
    let v = GenFlag::columns(Side::V, Order::Ascending).expect("flag");
    let w = GenFlag::columns(Side::W, Order::Descending).expect("flag");
    (sys, TautCouple { v, w, verified_to: None })
}

/// The rational cut couple of the order kernel: `{v_q : q < r} ⊂ {v_q : q ≤ r}`
/// in `V` and the up-rays in `W`.
pub fn rational_cut_couple() -> (DualSystem, TautCouple) {
    let sys = DualSystem::order_step();
    let full = CutSet::full(IndexDomain::Rat);
    let v = GenFlag::singletons(Side::V, full.clone(), Order::Ascending).expect("flag");
    let w = GenFlag::singletons(Side::W, full, Order::Descending).expect("flag");
    (sys, TautCouple { v, w, verified_to: None })
}
