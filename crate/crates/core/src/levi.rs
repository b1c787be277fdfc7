//! Levi components of parabolics: the `J` set of an IPS chain, the standard
//! blocks `sl(X_j, Y_j)`, the `sp(Z)` or `so(Z)` summand, and the minimal and
//! maximal couples rebuilt from Levi data.

use std::fmt;

use crate::cut::{Card, CutSet};
use crate::error::{Error, Result};
use crate::flags::{Atom, GenFlag, Order, Schema, SelfTautFlag, TautCouple};
use crate::index::{IndexDomain, Window};
use crate::linear::{DualSystem, FormKind, Kernel, Side, SubspaceDesc};
use crate::parabolic::{finite_members, Ambient, Couple, ParabolicDesc};

/// One standard block `sl(X, Y)`.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct LeviBlock {
    pub x: CutSet,
    pub y: CutSet,
}

#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct LeviDatum {
    pub ambient: Ambient,
    /// Blocks in the order induced by the flag.
    pub blocks: Vec<LeviBlock>,
    /// After the finite blocks, one block per column of this `ColPair` region.
    pub column_family: Option<CutSet>,
    /// The `sp(Z)` or `so(Z)` summand.
    pub z: Option<CutSet>,
}

impl fmt::Display for LeviDatum {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let mut parts: Vec<String> = Vec::new();
        if let Some(z) = &self.z {
            parts.push(format!("{}(Z = {z})", self.ambient));
        }
        for b in &self.blocks {
            parts.push(format!("sl(X = {}, Y = {}) [dim X = {}]", b.x, b.y, b.x.card()));
        }
        if let Some(r) = &self.column_family {
            parts.push(format!("sl(column a) for every column of {r}"));
        }
        if parts.is_empty() {
            return f.write_str("0");
        }
        f.write_str(&parts.join(" ⊕ "))
    }
}

impl LeviDatum {
    pub fn gl(blocks: Vec<LeviBlock>) -> LeviDatum {
        LeviDatum { ambient: Ambient::Gl, blocks, column_family: None, z: None }
    }

    /// Window-level checks of the pairing conditions.
    pub fn validate(&self, sys: &DualSystem, w: &Window) -> Result<()> {
        let gram = sys.gram(w)?;
        let idx = w.indices();
        let pick = |s: &CutSet| -> Result<Vec<usize>> {
            Ok(idx.iter().enumerate().filter(|(_, i)| s.contains(i).unwrap_or(false)).map(|(k, _)| k).collect())
        };
        let mut all = CutSet::empty(sys.domain);
        for (k, b) in self.blocks.iter().enumerate() {
            if !b.x.card().exceeds(1) {
                return Err(Error::Invalid(format!("block {} has dimension ≤ 1", b.x)));
            }
            if !b.x.is_disjoint(&all)? {
                return Err(Error::Invalid(format!("block {} overlaps an earlier block", b.x)));
            }
            all = all.union(&b.x)?;
            let (xs, ys) = (pick(&b.x)?, pick(&b.y)?);
            if xs.len() == ys.len() && gram.select(&xs, &ys).rank() < xs.len() {
                return Err(Error::Invalid(format!("pairing degenerate on block {} on {w}", b.x)));
            }
            for (k2, c) in self.blocks.iter().enumerate() {
                if k2 != k && !gram.select(&xs, &pick(&c.y)?).is_zero() {
                    return Err(Error::Invalid(format!("blocks {} and {} are not orthogonal", b.x, c.y)));
                }
            }
            if self.ambient != Ambient::Gl && (!sys.is_isotropic(&b.x)? || !sys.is_isotropic(&b.y)?) {
                return Err(Error::Invalid(format!("block {} is not isotropic", b.x)));
            }
        }
        if let Some(z) = &self.z {
            if self.ambient == Ambient::Gl {
                return Err(Error::Invalid("a Z summand needs so or sp".into()));
            }
            if sys.partner_set(z)? != *z {
                return Err(Error::Invalid(format!("form degenerate on Z = {z}")));
            }
            if self.ambient == Ambient::So && !z.card().exceeds(2) {
                return Err(Error::Invalid("so(Z) with dim Z ≤ 2 is not part of a Levi component".into()));
            }
        }
        Ok(())
    }
}

/// An IPS pair of the `V` flag that contributes to the Levi component.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct JPair {
    pub lo: CutSet,
    pub hi: CutSet,
    pub dim: Card,
}

/// The `J` pairs in flag order: closed `F'`, quotient of dimension > 1, and
/// for so/sp an isotropic `F''`. Column families are returned separately.
pub fn extract_j(p: &ParabolicDesc) -> Result<(Vec<JPair>, Option<CutSet>)> {
    let sys = &p.system;
    let f = p.v_flag();
    let form = p.ambient() != Ambient::Gl;
    let mut out = Vec::new();
    let mut family = None;
    let mut base = CutSet::empty(f.domain);
    for atom in f.atoms() {
        match atom {
            Atom::Block(r) => {
                let hi = base.union(r)?;
                let closed = sys.is_closed(&SubspaceDesc { side: f.side, set: base.clone() })?;
                if closed && r.card().exceeds(1) && (!form || sys.is_isotropic(&hi)?) {
                    out.push(JPair { lo: base.clone(), hi: hi.clone(), dim: r.card() });
                }
            }
            Atom::Columns { region, .. } => {
                if family.is_some() || sys.kernel != Kernel::Delta {
                    return Err(Error::Unsupported("one column family over the delta kernel".into()));
                }
                family = Some(region.clone());
            }
            Atom::Singletons { .. } => {}
        }
        base = base.union(atom.region())?;
    }
    Ok((out, family))
}

/// Reads the Levi component off the flags, with the aligned choice of `X_j`.
pub fn levi_of(p: &ParabolicDesc) -> Result<LeviDatum> {
    let sys = &p.system;
    let (js, family) = extract_j(p)?;
    let side = p.v_flag().side;
    let mut blocks = Vec::new();
    for j in &js {
        let x = j.hi.diff(&j.lo)?;
        let y = match p.ambient() {
            Ambient::Gl => {
                let a = sys.annihilator(&SubspaceDesc { side, set: j.lo.clone() })?.set;
                let b = sys.annihilator(&SubspaceDesc { side, set: j.hi.clone() })?.set;
                a.diff(&b)?
            }
            _ => sys.partner_set(&x)?,
        };
        blocks.push(LeviBlock { x, y });
    }
    let z = match &p.couple {
        Couple::SelfTaut(s) => z_summand(sys, s, p.ambient())?,
        Couple::Taut(_) => None,
    };
    Ok(LeviDatum { ambient: p.ambient(), blocks, column_family: family, z })
}

/// `Z` with `'F̃ = F̃ ⊕ Z`, where `F̃` is the union of the isotropic `F''` and
/// `'F̃` the intersection of the closed coisotropic `F'`.
fn z_summand(sys: &DualSystem, s: &SelfTautFlag, amb: Ambient) -> Result<Option<CutSet>> {
    let members = finite_members(&s.flag)?;
    let u = sys.universe();
    let mut iso_union = CutSet::empty(sys.domain);
    let mut co_inter = u.clone();
    for pair in members.windows(2) {
        let (lo, hi) = (&pair[0], &pair[1]);
        if sys.is_isotropic(hi)? {
            iso_union = iso_union.union(hi)?;
        }
        if sys.is_closed(&SubspaceDesc { side: Side::V, set: lo.clone() })? && sys.is_coisotropic(lo)? {
            co_inter = co_inter.inter(lo)?;
        }
    }
    let z = co_inter.diff(&iso_union)?;
    let trivial = z.is_empty() || (amb == Ambient::So && !z.card().exceeds(2));
    Ok((!trivial).then_some(z))
}

// ------------------------------------------------------------ reconstruction

/// The flag on `W` made of the annihilators of the members of `f`
/// (delta kernel or forms, where annihilators of aligned sets are aligned).
pub fn dual_flag(sys: &DualSystem, f: &GenFlag) -> Result<GenFlag> {
    let mut atoms = Vec::new();
    for a in f.atoms().iter().rev() {
        let image = |r: &CutSet| -> Result<CutSet> {
            match sys.kernel {
                Kernel::Delta => Ok(r.clone()),
                Kernel::Form(_) => sys.partner_set(r),
                Kernel::OrderStep => Err(Error::UnsupportedKernel("dual flags need aligned annihilators".into())),
            }
        };
        atoms.push(match a {
            Atom::Block(r) => Atom::Block(image(r)?),
            Atom::Singletons { region, order } => Atom::Singletons { region: image(region)?, order: flip(*order) },
            Atom::Columns { region, order } => Atom::Columns { region: image(region)?, order: flip(*order) },
        });
    }
    // The residual of the basis not covered by `f` is annihilated by every member.
    let rest = sys.universe().diff(&f.support()?)?;
    if !rest.is_empty() {
        atoms.insert(0, Atom::Block(rest));
    }
    GenFlag::new(f.side.other(), f.domain, atoms, f.schema)
}

fn flip(o: Order) -> Order {
    match o {
        Order::Ascending => Order::Descending,
        Order::Descending => Order::Ascending,
    }
}

/// The couple or self-taut flag, as a parabolic.
fn assemble(sys: &DualSystem, l: &LeviDatum, v: GenFlag) -> Result<ParabolicDesc> {
    match l.ambient {
        Ambient::Gl => {
            let w = dual_flag(sys, &v)?;
            ParabolicDesc::from_couple(sys.clone(), TautCouple::new(v, w)?)
        }
        _ => ParabolicDesc::from_selftaut(sys.clone(), SelfTautFlag::new(sys, v, 3)?),
    }
}

fn check_system(sys: &DualSystem, l: &LeviDatum) -> Result<()> {
    let want = match l.ambient {
        Ambient::Gl => None,
        Ambient::So => Some(FormKind::Symmetric),
        Ambient::Sp => Some(FormKind::Alternating),
    };
    let got = sys.form_data().map(|f| f.kind);
    match (want, sys.kernel) {
        (None, Kernel::Delta) => Ok(()),
        (Some(k), _) if got == Some(k) => Ok(()),
        _ => Err(Error::Invalid(format!("{} Levi data need a matching system", l.ambient))),
    }
}

/// `U_j = ((⊕_{k ≤ j} X_k)^⊥ ⊕ Y_j)^⊥`, computed on cut sets.
pub fn u_sets(sys: &DualSystem, l: &LeviDatum) -> Result<Vec<CutSet>> {
    let mut out = Vec::new();
    let mut acc = CutSet::empty(sys.domain);
    for b in &l.blocks {
        acc = acc.union(&b.x)?;
        let perp = sys.annihilator(&SubspaceDesc { side: Side::V, set: acc.clone() })?.set;
        let u = sys.annihilator(&SubspaceDesc { side: Side::W, set: perp.union(&b.y)? })?.set;
        out.push(u);
    }
    Ok(out)
}

/// The coarsest couple (or self-taut flag) whose IPS pairs include every
/// `U_j ⊂ U_j ⊕ X_j`.
pub fn minimal_taut_couple(sys: &DualSystem, l: &LeviDatum) -> Result<ParabolicDesc> {
    check_system(sys, l)?;
    if l.column_family.is_some() {
        return maximal_taut_couple(sys, l);
    }
    let u = sys.universe();
    let mut members = vec![CutSet::empty(sys.domain), u.clone()];
    for (uj, b) in u_sets(sys, l)?.into_iter().zip(&l.blocks) {
        members.push(uj.union(&b.x)?);
        members.push(uj);
    }
    if l.ambient != Ambient::Gl {
        let perps = members
            .iter()
            .map(|m| Ok(sys.annihilator(&SubspaceDesc { side: Side::V, set: m.clone() })?.set))
            .collect::<Result<Vec<_>>>()?;
        members.extend(perps);
    }
    let chain = sort_chain(members)?;
    assemble(sys, l, GenFlag::from_chain(Side::V, sys.domain, &chain)?)
}

fn sort_chain(mut ms: Vec<CutSet>) -> Result<Vec<CutSet>> {
    let mut out: Vec<CutSet> = Vec::new();
    ms.sort_by(|a, b| {
        if a == b {
            std::cmp::Ordering::Equal
        } else if a.is_subset(b).unwrap_or(false) {
            std::cmp::Ordering::Less
        } else {
            std::cmp::Ordering::Greater
        }
    });
    for m in ms {
        if !out.contains(&m) {
            out.push(m);
        }
    }
    for w in out.windows(2) {
        if !w[0].is_subset(&w[1])? {
            return Err(Error::InvalidFlag(format!("{} and {} are incomparable", w[0], w[1])));
        }
    }
    Ok(out)
}

/// The finest couple with the given Levi component: the blocks in order,
/// and every other index in its own step.
pub fn maximal_taut_couple(sys: &DualSystem, l: &LeviDatum) -> Result<ParabolicDesc> {
    check_system(sys, l)?;
    let u = sys.universe();
    let mut used = CutSet::empty(sys.domain);
    for b in &l.blocks {
        used = used.union(&b.x)?;
    }
    let mut atoms: Vec<Atom> = l.blocks.iter().map(|b| Atom::Block(b.x.clone())).collect();
    let schema = if l.column_family.is_some() { Schema::ColumnSchema } else { Schema::FiniteChain };
    match l.ambient {
        Ambient::Gl => {
            if let Some(r) = &l.column_family {
                atoms.push(Atom::Columns { region: r.clone(), order: Order::Ascending });
                used = used.union(r)?;
            }
            let rest = u.diff(&used)?;
            if !rest.is_empty() {
                atoms.push(Atom::Singletons { region: rest, order: Order::Ascending });
            }
        }
        _ => {
            // V = L ⊕ Z ⊕ L' with L = blocks ∪ isotropic residual.
            let z = l.z.clone().unwrap_or_else(|| CutSet::empty(sys.domain));
            let partners = sys.partner_set(&used)?;
            let rest = u.diff(&used)?.diff(&partners)?.diff(&z)?;
            let residual = isotropic_half(sys, &rest)?;
            if !residual.is_empty() {
                atoms.push(Atom::Singletons { region: residual.clone(), order: Order::Ascending });
            }
            let leftover = z;
            if !leftover.is_empty() {
                atoms.push(Atom::Block(leftover));
            }
            if !residual.is_empty() {
                atoms.push(Atom::Singletons { region: sys.partner_set(&residual)?, order: Order::Descending });
            }
            for b in l.blocks.iter().rev() {
                atoms.push(Atom::Block(b.y.clone()));
            }
        }
    }
    let v = GenFlag::new(Side::V, sys.domain, atoms, schema)?;
    assemble(sys, l, v)
}

/// The odd members of the hyperbolic pairs inside `rest`; errors when `rest`
/// holds infinitely many pairs or definite vectors outside `Z`.
fn isotropic_half(sys: &DualSystem, rest: &CutSet) -> Result<CutSet> {
    let pts = rest
        .finite_elements()
        .ok_or_else(|| Error::Unsupported(format!("residual {rest} is infinite; put it into Z")))?;
    let mut odd = Vec::new();
    for i in pts {
        let p = sys.partner(&i)?;
        if p == i {
            return Err(Error::Invalid(format!("definite index {i} must lie in Z")));
        }
        if i < p {
            odd.push(i);
        }
    }
    CutSet::fin(sys.domain, &odd)
}

/// The `gl` Levi datum with one block per column of the whole `ColPair` domain.
pub fn column_levi() -> LeviDatum {
    LeviDatum {
        ambient: Ambient::Gl,
        blocks: Vec::new(),
        column_family: Some(CutSet::full(IndexDomain::ColPair)),
        z: None,
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::flags::is_taut_couple;
    use crate::parabolic::stabilizer_truncation;

    fn nat(s: &str) -> CutSet {
        CutSet::parse(s, IndexDomain::Nat).unwrap()
    }

    fn gl_blocks(xs: &[&str]) -> LeviDatum {
        LeviDatum::gl(xs.iter().map(|s| LeviBlock { x: nat(s), y: nat(s) }).collect())
    }

    #[test]
    fn j_of_two_step_flag() {
        let sys = DualSystem::delta(IndexDomain::Nat);
        let l = gl_blocks(&["(fin 1 2)"]);
        let p = minimal_taut_couple(&sys, &l).unwrap();
        let (js, _) = extract_j(&p).unwrap();
        assert_eq!(js.len(), 2);
        assert_eq!(js[0].dim, Card::Finite(2));
        assert_eq!(js[1].dim, Card::Infinite);
    }

    #[test]
    fn minimal_chain_from_u_sets() {
        let sys = DualSystem::delta(IndexDomain::Nat);
        let l = gl_blocks(&["(fin 1 2)", "(fin 3 4)"]);
        let p = minimal_taut_couple(&sys, &l).unwrap();
        let members = finite_members(p.v_flag()).unwrap();
        assert_eq!(members, vec![nat("(empty)"), nat("(fin 1 2)"), nat("(fin 1 2 3 4)"), nat("(full)")]);
        let single = gl_blocks(&["(full)"]);
        let p = minimal_taut_couple(&sys, &single).unwrap();
        assert_eq!(finite_members(p.v_flag()).unwrap(), vec![nat("(empty)"), nat("(full)")]);
    }

    #[test]
    fn gl_round_trip_and_borel() {
        let sys = DualSystem::delta(IndexDomain::Nat);
        let l = gl_blocks(&["(fin 2 3)", "(ray ge 6)"]);
        l.validate(&sys, &Window::nat(8)).unwrap();
        let p = maximal_taut_couple(&sys, &l).unwrap();
        if let Couple::Taut(c) = &p.couple {
            assert!(is_taut_couple(&sys, c, 7).unwrap().holds);
        }
        assert_eq!(levi_of(&p).unwrap(), l);

        let empty = LeviDatum::gl(Vec::new());
        let p = maximal_taut_couple(&sys, &empty).unwrap();
        assert_eq!(levi_of(&p).unwrap(), empty);
        let t = stabilizer_truncation(&p, &Window::nat(4)).unwrap();
        assert!(t.algebra.is_solvable());
        assert_eq!(t.dim(), 10);
    }

    #[test]
    fn sp_round_trip_with_z() {
        let sys = DualSystem::form(FormKind::Alternating, None, Some(8)).unwrap();
        let l = LeviDatum {
            ambient: Ambient::Sp,
            blocks: vec![LeviBlock { x: nat("(fin 1 3)"), y: nat("(fin 2 4)") }],
            column_family: None,
            z: Some(nat("(fin 7 8)")),
        };
        l.validate(&sys, &Window::nat(8)).unwrap();
        let p = maximal_taut_couple(&sys, &l).unwrap();
        assert!(p.check_taut(4).unwrap().holds);
        assert_eq!(levi_of(&p).unwrap(), l);
    }

    #[test]
    fn columns_round_trip() {
        let sys = DualSystem::delta(IndexDomain::ColPair);
        let l = column_levi();
        let p = maximal_taut_couple(&sys, &l).unwrap();
        assert!(p.check_taut(3).unwrap().holds);
        assert_eq!(levi_of(&p).unwrap(), l);
    }
}
