//! Scenario files: a versioned s-expression describing a dual system, its
//! flags, optional trace conditions and real form, and the checks to run.
//!
//! ```text
//! (flagpar-scenario 1
//!   (name NAME)
//!   (system (domain nat|rat|colpair) (ring Q|Qi|H)?
//!           (kernel delta | order-step | (form symmetric|alternating|hermitian (pairs N|inf)? (rank N)?)))
//!   (v-flag FLAG) (w-flag FLAG | dual)     ; a couple, or
//!   (flag FLAG)                            ; a self-taut flag of a form
//!   (trace-row (total C) (block CUT C) ...)*
//!   (real-form "NAME")?
//!   (levels LO HI)
//!   (checks CHECK ...))
//!
//! FLAG  = (chain CUT ...) | (atoms ATOM ...)
//! ATOM  = (block CUT) | (singletons CUT ORDER) | (columns CUT ORDER)
//! ORDER = ascending | descending
//! ```

use std::fmt;
use std::time::Instant;

use crate::chevalley::chevalley_truncation;
use crate::cut::CutSet;
use crate::error::{Error, Result};
use crate::flags::{self, level_window, Atom, GenFlag, Order, Schema, SelfTautFlag, TautCouple};
use crate::index::IndexDomain;
use crate::induce::{CharacterSpec, InducedModule};
use crate::levi::{dual_flag, levi_of};
use crate::linear::{DualSystem, Form, FormKind, Kernel, Side};
use crate::parabolic::{is_locally_solvable, stabilizer_contains, stabilizer_truncation, BlockFunctional, ParabolicDesc, TraceRow};
use crate::realform::{construct_dagger, man_decompose, real_parabolic, RealStructure};
use crate::report::{Record, Report};
use crate::scalar::{Q, Ring};
use crate::sexpr::{parse_all, Sexp};

pub const VERSION: u32 = 1;

/// Checks in dependency order; a scenario runs them in this order.
#[derive(Clone, Copy, Debug, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub enum CheckKind {
    Validate,
    Taut,
    Semiclosed,
    Stabilizer,
    Levi,
    Chevalley,
    Solvable,
    TraceZero,
    Real,
    Man,
    Dagger,
    Induce,
}

const CHECKS: [(CheckKind, &str); 12] = [
    (CheckKind::Validate, "validate"),
    (CheckKind::Taut, "taut"),
    (CheckKind::Semiclosed, "semiclosed"),
    (CheckKind::Stabilizer, "stabilizer"),
    (CheckKind::Levi, "levi"),
    (CheckKind::Chevalley, "chevalley"),
    (CheckKind::Solvable, "solvable"),
    (CheckKind::TraceZero, "trace-zero"),
    (CheckKind::Real, "real"),
    (CheckKind::Man, "man"),
    (CheckKind::Dagger, "dagger"),
    (CheckKind::Induce, "induce"),
];

impl CheckKind {
    pub fn name(self) -> &'static str {
        CHECKS.iter().find(|(k, _)| *k == self).map(|(_, n)| *n).expect("listed")
    }

    /// Label of the statement the check exercises.
    pub fn anchor(self) -> &'static str {
        match self {
            CheckKind::Validate => "genflag",
            CheckKind::Taut => "taut",
            CheckKind::Semiclosed | CheckKind::Stabilizer => "self-norm-cpx-parab",
            CheckKind::Levi => "struc-levi",
            CheckKind::Chevalley => "levi",
            CheckKind::Solvable | CheckKind::TraceZero => "sl-in-gl",
            CheckKind::Real => "real-parab",
            CheckKind::Man => "construct-ma",
            CheckKind::Dagger => "construct-p",
            CheckKind::Induce => "sec9",
        }
    }
}

impl std::str::FromStr for CheckKind {
    type Err = Error;
    fn from_str(s: &str) -> Result<Self> {
        CHECKS.iter().find(|(_, n)| *n == s).map(|(k, _)| *k).ok_or_else(|| Error::Parse(format!("unknown check `{s}`")))
    }
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub enum FlagSpec {
    Chain(Vec<CutSet>),
    Atoms(Vec<Atom>),
    /// The `W` flag of annihilators of the `V` flag.
    Dual,
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub enum Flags {
    Couple { v: FlagSpec, w: FlagSpec },
    SelfTaut(FlagSpec),
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub enum TraceTerm {
    Total(Q),
    Block(CutSet, Q),
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Scenario {
    pub name: String,
    pub system: DualSystem,
    pub flags: Flags,
    pub trace_rows: Vec<Vec<TraceTerm>>,
    pub real_form: Option<RealStructure>,
    pub levels: (u64, u64),
    pub checks: Vec<CheckKind>,
}

// ------------------------------------------------------------ parsing

struct Fields<'a> {
    owner: &'a Sexp,
    items: Vec<(&'a str, &'a [Sexp], &'a Sexp)>,
}

impl<'a> Fields<'a> {
    fn new(owner: &'a Sexp, items: &'a [Sexp], allowed: &[&str]) -> Result<Fields<'a>> {
        let mut out = Vec::new();
        for it in items {
            let (h, rest) = it.head()?;
            if !allowed.contains(&h) {
                return Err(it.error(format!("unknown field `{h}`")));
            }
            out.push((h, rest, it));
        }
        Ok(Fields { owner, items: out })
    }

    fn all(&self, key: &str) -> Vec<(&'a [Sexp], &'a Sexp)> {
        self.items.iter().filter(|(h, _, _)| *h == key).map(|(_, r, s)| (*r, *s)).collect()
    }

    fn opt(&self, key: &str) -> Result<Option<(&'a [Sexp], &'a Sexp)>> {
        let mut v = self.all(key);
        if v.len() > 1 {
            return Err(v[1].1.error(format!("duplicate field `{key}`")));
        }
        Ok(v.pop())
    }

    fn req(&self, key: &str) -> Result<(&'a [Sexp], &'a Sexp)> {
        self.opt(key)?.ok_or_else(|| self.owner.error(format!("missing field `{key}`")))
    }
}

fn one<'a>(args: &'a [Sexp], at: &Sexp) -> Result<&'a Sexp> {
    match args {
        [x] => Ok(x),
        _ => Err(at.error(format!("expected one argument, found {}", args.len()))),
    }
}

fn atom_arg<'a>(args: &'a [Sexp], at: &Sexp) -> Result<&'a str> {
    one(args, at)?.as_atom()
}

fn located<T>(r: Result<T>, at: &Sexp) -> Result<T> {
    r.map_err(|e| match e {
        Error::ParseAt { .. } => e,
        other => at.error(other.to_string()),
    })
}

fn parse_u64(s: &Sexp) -> Result<u64> {
    let t = s.as_atom()?;
    t.parse().map_err(|_| s.error(format!("expected a natural number, found `{t}`")))
}

fn parse_q(s: &Sexp) -> Result<Q> {
    located(s.as_atom()?.parse(), s)
}

fn parse_order(s: &Sexp) -> Result<Order> {
    match s.as_atom()? {
        "ascending" => Ok(Order::Ascending),
        "descending" => Ok(Order::Descending),
        t => Err(s.error(format!("unknown order `{t}`"))),
    }
}

fn order_name(o: Order) -> &'static str {
    match o {
        Order::Ascending => "ascending",
        Order::Descending => "descending",
    }
}

fn parse_flag(s: &Sexp, domain: IndexDomain) -> Result<FlagSpec> {
    if let Sexp::Atom { text, .. } = s {
        return match text.as_str() {
            "dual" => Ok(FlagSpec::Dual),
            t => Err(s.error(format!("unknown flag form `{t}`"))),
        };
    }
    let (h, rest) = s.head()?;
    match h {
        "chain" => rest.iter().map(|c| CutSet::from_sexp(c, domain)).collect::<Result<_>>().map(FlagSpec::Chain),
        "atoms" => {
            let mut atoms = Vec::new();
            for a in rest {
                let (k, args) = a.head()?;
                let atom = match (k, args) {
                    ("block", [c]) => Atom::Block(CutSet::from_sexp(c, domain)?),
                    ("singletons", [c, o]) => Atom::Singletons { region: CutSet::from_sexp(c, domain)?, order: parse_order(o)? },
                    ("columns", [c, o]) => Atom::Columns { region: CutSet::from_sexp(c, domain)?, order: parse_order(o)? },
                    _ => return Err(a.error(format!("malformed atom `{a}`"))),
                };
                atoms.push(atom);
            }
            Ok(FlagSpec::Atoms(atoms))
        }
        _ => Err(s.error(format!("unknown flag form `{h}`"))),
    }
}

fn parse_system(args: &[Sexp], at: &Sexp) -> Result<DualSystem> {
    let f = Fields::new(at, args, &["domain", "ring", "kernel"])?;
    let (d, ds) = f.req("domain")?;
    let domain: IndexDomain = located(atom_arg(d, ds)?.parse(), ds)?;
    let (k, ks) = f.req("kernel")?;
    let kernel = one(k, ks)?;
    let mut sys = match kernel {
        Sexp::Atom { text, .. } if text == "delta" => DualSystem::delta(domain),
        Sexp::Atom { text, .. } if text == "order-step" => {
            if domain != IndexDomain::Rat {
                return Err(kernel.error("the order-step kernel lives on rat"));
            }
            DualSystem::order_step()
        }
        Sexp::List { .. } => {
            let (h, rest) = kernel.head()?;
            if h != "form" || rest.is_empty() {
                return Err(kernel.error("expected (form KIND ...)"));
            }
            let kind = match rest[0].as_atom()? {
                "symmetric" => FormKind::Symmetric,
                "alternating" => FormKind::Alternating,
                "hermitian" => FormKind::Hermitian,
                t => return Err(rest[0].error(format!("unknown form kind `{t}`"))),
            };
            let g = Fields::new(kernel, &rest[1..], &["pairs", "rank"])?;
            let pairs = match g.opt("pairs")? {
                Some((a, s)) if atom_arg(a, s)? == "inf" => None,
                Some((a, s)) => Some(parse_u64(one(a, s)?)?),
                None => Some(0),
            };
            let rank = g.opt("rank")?.map(|(a, s)| one(a, s).and_then(parse_u64)).transpose()?;
            if domain != IndexDomain::Nat {
                return Err(ds.error("forms live on nat"));
            }
            located(DualSystem::form(kind, pairs, rank), kernel)?
        }
        _ => return Err(kernel.error(format!("unknown kernel `{kernel}`"))),
    };
    if let Some((r, rs)) = f.opt("ring")? {
        let ring: Ring = located(atom_arg(r, rs)?.parse(), rs)?;
        sys.ring = ring;
    }
    Ok(sys)
}

impl Scenario {
    pub fn parse(src: &str) -> Result<Scenario> {
        let forms = parse_all(src)?;
        let top = match forms.as_slice() {
            [t] => t,
            [] => return Err(Error::ParseAt { line: 1, col: 1, msg: "empty scenario".into() }),
            [_, extra, ..] => return Err(extra.error("trailing input after the scenario")),
        };
        let (h, rest) = top.head()?;
        if h != "flagpar-scenario" {
            return Err(top.error(format!("expected `flagpar-scenario`, found `{h}`")));
        }
        let (ver, body) = rest.split_first().ok_or_else(|| top.error("missing version"))?;
        if parse_u64(ver)? != VERSION as u64 {
            return Err(ver.error(format!("unsupported scenario version {ver}; this build reads version {VERSION}")));
        }
        let f = Fields::new(
            top,
            body,
            &["name", "system", "v-flag", "w-flag", "flag", "trace-row", "real-form", "levels", "checks"],
        )?;
        let (n, ns) = f.req("name")?;
        let name = atom_arg(n, ns)?.to_string();
        let (s, ss) = f.req("system")?;
        let system = parse_system(s, ss)?;
        let domain = system.domain;
        let flags = match (f.opt("v-flag")?, f.opt("w-flag")?, f.opt("flag")?) {
            (Some((v, vs)), Some((w, ws)), None) => {
                let v = parse_flag(one(v, vs)?, domain)?;
                if v == FlagSpec::Dual {
                    return Err(vs.error("the V flag cannot be `dual`"));
                }
                Flags::Couple { v, w: parse_flag(one(w, ws)?, domain)? }
            }
            (None, None, Some((x, xs))) => {
                if system.form_data().is_none() {
                    return Err(xs.error("a single flag needs a form kernel"));
                }
                let fl = parse_flag(one(x, xs)?, domain)?;
                if fl == FlagSpec::Dual {
                    return Err(xs.error("a self-taut flag cannot be `dual`"));
                }
                Flags::SelfTaut(fl)
            }
            _ => return Err(top.error("give either `v-flag` and `w-flag`, or a single `flag`")),
        };
        let mut trace_rows = Vec::new();
        for (terms, at) in f.all("trace-row") {
            if terms.is_empty() {
                return Err(at.error("empty trace row"));
            }
            let mut row = Vec::new();
            for t in terms {
                let (k, args) = t.head()?;
                row.push(match (k, args) {
                    ("total", [c]) => TraceTerm::Total(parse_q(c)?),
                    ("block", [x, c]) => TraceTerm::Block(CutSet::from_sexp(x, domain)?, parse_q(c)?),
                    _ => return Err(t.error(format!("malformed trace term `{t}`"))),
                });
            }
            trace_rows.push(row);
        }
        let real_form = match f.opt("real-form")? {
            Some((r, rs)) => Some(located(atom_arg(r, rs)?.parse::<RealStructure>(), rs)?),
            None => None,
        };
        let (l, ls) = f.req("levels")?;
        let levels = match l {
            [a, b] => (parse_u64(a)?, parse_u64(b)?),
            _ => return Err(ls.error("expected (levels LO HI)")),
        };
        if levels.0 == 0 || levels.0 > levels.1 {
            return Err(ls.error("levels must satisfy 1 ≤ LO ≤ HI"));
        }
        let (c, cs) = f.req("checks")?;
        let mut checks = Vec::new();
        for x in c {
            let k: CheckKind = located(x.as_atom()?.parse(), x)?;
            if checks.contains(&k) {
                return Err(x.error(format!("duplicate check `{}`", k.name())));
            }
            checks.push(k);
        }
        if checks.is_empty() {
            return Err(cs.error("no checks requested"));
        }
        let sc = Scenario { name, system, flags, trace_rows, real_form, levels, checks };
        located(sc.parabolic().map(|_| ()), top)?;
        Ok(sc)
    }

    pub fn from_file(path: &std::path::Path) -> Result<Scenario> {
        let src = std::fs::read_to_string(path).map_err(|e| Error::Parse(format!("{}: {e}", path.display())))?;
        Scenario::parse(&src)
    }

    fn build_flag(&self, spec: &FlagSpec, side: Side) -> Result<GenFlag> {
        let d = self.system.domain;
        match spec {
            FlagSpec::Chain(ms) => GenFlag::from_chain(side, d, ms),
            FlagSpec::Atoms(atoms) => GenFlag::new(side, d, atoms.clone(), Schema::Custom),
            FlagSpec::Dual => Err(Error::InvalidFlag("`dual` is resolved against the V flag".into())),
        }
    }

    /// The parabolic described by the scenario; tautness is not checked here.
    pub fn parabolic(&self) -> Result<ParabolicDesc> {
        let sys = self.system.clone();
        let p = match &self.flags {
            Flags::Couple { v, w } => {
                let v = self.build_flag(v, Side::V)?;
                let w = match w {
                    FlagSpec::Dual => dual_flag(&sys, &v)?,
                    other => self.build_flag(other, Side::W)?,
                };
                ParabolicDesc::from_couple(sys, TautCouple::new(v, w)?)?
            }
            Flags::SelfTaut(f) => {
                let flag = self.build_flag(f, Side::V)?;
                ParabolicDesc::from_selftaut(sys.clone(), SelfTautFlag::new(&sys, flag, 0)?)?
            }
        };
        let mut p = p;
        for row in &self.trace_rows {
            let terms = row
                .iter()
                .map(|t| match t {
                    TraceTerm::Total(c) => (BlockFunctional::total(&p.system), c.clone()),
                    TraceTerm::Block(x, c) => {
                        let y = p.system.partner_set(x).unwrap_or_else(|_| x.clone());
                        (BlockFunctional { id: format!("block {x}"), x: x.clone(), y }, c.clone())
                    }
                })
                .collect();
            p = p.with_trace_row(TraceRow(terms))?;
        }
        Ok(p)
    }

    pub fn to_sexp(&self) -> Sexp {
        fn a(s: impl Into<String>) -> Sexp {
            Sexp::atom(s)
        }
        let l = Sexp::list;
        let kw = |k: &str, v: Vec<Sexp>| {
            let mut items = vec![a(k)];
            items.extend(v);
            l(items)
        };
        let sys = &self.system;
        let kernel = match sys.kernel {
            Kernel::Delta => a("delta"),
            Kernel::OrderStep => a("order-step"),
            Kernel::Form(Form { kind, pairs }) => {
                let mut items = vec![a("form"), a(kind.to_string())];
                items.push(kw("pairs", vec![a(pairs.map_or("inf".to_string(), |p| p.to_string()))]));
                if let Some(r) = sys.rank {
                    items.push(kw("rank", vec![a(r.to_string())]));
                }
                l(items)
            }
        };
        let flag = |f: &FlagSpec| match f {
            FlagSpec::Dual => a("dual"),
            FlagSpec::Chain(ms) => {
                let mut items = vec![a("chain")];
                items.extend(ms.iter().map(CutSet::to_sexp));
                l(items)
            }
            FlagSpec::Atoms(atoms) => {
                let mut items = vec![a("atoms")];
                items.extend(atoms.iter().map(|x| match x {
                    Atom::Block(r) => kw("block", vec![r.to_sexp()]),
                    Atom::Singletons { region, order } => kw("singletons", vec![region.to_sexp(), a(order_name(*order))]),
                    Atom::Columns { region, order } => kw("columns", vec![region.to_sexp(), a(order_name(*order))]),
                }));
                l(items)
            }
        };
        let mut items = vec![
            a("flagpar-scenario"),
            a(VERSION.to_string()),
            kw("name", vec![a(self.name.clone())]),
            kw(
                "system",
                vec![
                    kw("domain", vec![a(sys.domain.to_string())]),
                    kw("ring", vec![a(sys.ring.to_string())]),
                    kw("kernel", vec![kernel]),
                ],
            ),
        ];
        match &self.flags {
            Flags::Couple { v, w } => {
                items.push(kw("v-flag", vec![flag(v)]));
                items.push(kw("w-flag", vec![flag(w)]));
            }
            Flags::SelfTaut(f) => items.push(kw("flag", vec![flag(f)])),
        }
        for row in &self.trace_rows {
            items.push(kw(
                "trace-row",
                row.iter()
                    .map(|t| match t {
                        TraceTerm::Total(c) => kw("total", vec![a(c.to_string())]),
                        TraceTerm::Block(x, c) => kw("block", vec![x.to_sexp(), a(c.to_string())]),
                    })
                    .collect(),
            ));
        }
        if let Some(r) = &self.real_form {
            items.push(kw("real-form", vec![a(r.to_string())]));
        }
        items.push(kw("levels", vec![a(self.levels.0.to_string()), a(self.levels.1.to_string())]));
        items.push(kw("checks", self.checks.iter().map(|c| a(c.name())).collect()));
        l(items)
    }
}

impl fmt::Display for Scenario {
    /// One field per line.
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let Sexp::List { items, .. } = self.to_sexp() else { unreachable!("scenario is a list") };
        write!(f, "({} {}", items[0], items[1])?;
        for it in &items[2..] {
            write!(f, "\n  {it}")?;
        }
        writeln!(f, ")")
    }
}

// ------------------------------------------------------------ running

fn check_once(sc: &Scenario, p: &ParabolicDesc, kind: CheckKind, level: u64) -> Result<(bool, Option<String>)> {
    let sys = &p.system;
    let w = level_window(sys, level);
    let fail = |msg: String| Ok((false, Some(msg)));
    match kind {
        CheckKind::Validate => {
            for f in [p.v_flag().clone(), p.w_flag()] {
                let rep = flags::validate_genflag(sys, &f, &w)?;
                if !rep.is_valid() {
                    return fail(format!("{} flag leaves {} uncovered", f.side, rep.uncovered[0]));
                }
            }
            Ok((true, None))
        }
        CheckKind::Taut => {
            let v = p.check_taut(level)?;
            Ok((v.holds, v.witness))
        }
        CheckKind::Semiclosed => {
            for f in [p.v_flag().clone(), p.w_flag()] {
                if let Some(wit) = flags::semiclosed_witness(sys, &f, &w)? {
                    return fail(format!("{} flag: {wit}", f.side));
                }
            }
            Ok((true, None))
        }
        CheckKind::Stabilizer => {
            let t = stabilizer_truncation(p, &w)?;
            if !t.algebra.is_closed() {
                return fail("truncation is not a subalgebra".into());
            }
            for c in &t.coeffs {
                let op = sys.op_from_coeffs(&t.support, c)?;
                if !stabilizer_contains(&op, p)? {
                    return fail(format!("basis operator {op:?} fails the membership test"));
                }
            }
            Ok((true, Some(format!("dim {}", t.dim()))))
        }
        CheckKind::Levi => {
            let l = levi_of(p)?;
            l.validate(sys, &w)?;
            Ok((true, Some(l.to_string())))
        }
        CheckKind::Chevalley => {
            let c = chevalley_truncation(p, &w)?;
            Ok((true, Some(format!("p_nil {}, l {}, t {}", c.p_nil.dim(), c.l.dim(), c.t.dim()))))
        }
        CheckKind::Solvable => {
            let v = is_locally_solvable(p, level)?;
            Ok((v.holds, v.witness))
        }
        CheckKind::TraceZero => {
            let t = stabilizer_truncation(p, &w)?;
            for m in t.algebra.basis() {
                if !m.trace().is_zero() {
                    return fail(format!("generator with trace {}", m.trace()));
                }
            }
            Ok((true, None))
        }
        CheckKind::Real | CheckKind::Man | CheckKind::Dagger | CheckKind::Induce => {
            let real = sc.real_form.ok_or_else(|| Error::Invalid("no real form given".into()))?;
            let rp = real_parabolic(p, real)?;
            let win = rp.window(level as usize)?;
            match kind {
                CheckKind::Real => {
                    real.verify(level as usize)?;
                    Ok((win.algebra.is_closed(), Some(format!("dim {}", win.algebra.dim()))))
                }
                CheckKind::Man => {
                    let man = man_decompose(&win)?;
                    let bad: Vec<&str> = man.checks.iter().filter(|c| !c.holds).map(|c| c.name).collect();
                    let dims = format!("m {}, a {}, n {}", man.m.dim(), man.a.dim(), man.n.dim());
                    Ok(if bad.is_empty() { (true, Some(dims)) } else { (false, Some(format!("{dims}; failed: {}", bad.join(", ")))) })
                }
                CheckKind::Dagger => {
                    let d = construct_dagger(&win)?;
                    let bad: Vec<&str> = d.checks.iter().filter(|c| !c.holds).map(|c| c.name).collect();
                    Ok(if bad.is_empty() { (true, None) } else { (false, Some(format!("failed: {}", bad.join(", ")))) })
                }
                _ => {
                    let man = man_decompose(&win)?;
                    let spec = CharacterSpec::trivial(vec![Q::zero(); man.a.dim()]);
                    let module = InducedModule::new(&man, &spec, 2)?;
                    let gens = module.generators();
                    for x in &gens {
                        for y in &gens {
                            if !module.check_commutation(x, y)? {
                                return fail("commutation identity fails".into());
                            }
                        }
                    }
                    Ok((true, Some(format!("{} basis vectors", module.basis.len()))))
                }
            }
        }
    }
}

/// Runs every requested check at every level, in dependency order. Errors
/// become failing records and the run continues.
pub fn run_scenario(sc: &Scenario) -> Report {
    run_checks(sc, &sc.checks, sc.levels)
}

/// Runs `kinds` at the levels `lo..=hi`, whatever the scenario requests.
pub fn run_checks(sc: &Scenario, kinds: &[CheckKind], (lo, hi): (u64, u64)) -> Report {
    let mut rep = Report::new(format!("scenario {}", sc.name));
    let p = match sc.parabolic() {
        Ok(p) => p,
        Err(e) => {
            rep.push(Record::new("parabolic", "genflag", None, false, Some(format!("error: {e}"))));
            return rep;
        }
    };
    let mut checks = kinds.to_vec();
    checks.sort();
    checks.dedup();
    for kind in checks {
        for level in lo..=hi {
            let start = Instant::now();
            let (holds, witness) = check_once(sc, &p, kind, level).unwrap_or_else(|e| (false, Some(format!("error: {e}"))));
            let mut r = Record::new(kind.name(), kind.anchor(), Some(level), holds, witness);
            r.millis = start.elapsed().as_millis();
            rep.push(r);
        }
    }
    rep
}

#[cfg(test)]
mod tests {
    use super::*;

    const COUPLE: &str = "(flagpar-scenario 1
  (name borel)
  (system (domain nat) (kernel delta))
  (v-flag (chain (fin 1) (fin 1 2) (full)))
  (w-flag dual)
  (trace-row (total 1))
  (levels 2 3)
  (checks stabilizer taut solvable))";

    #[test]
    fn roundtrip() {
        let s = Scenario::parse(COUPLE).unwrap();
        let printed = s.to_string();
        let again = Scenario::parse(&printed).unwrap();
        assert_eq!(s, again);
        assert_eq!(printed, again.to_string());
    }

    #[test]
    fn parse_errors() {
        let e = Scenario::parse("(flagpar-scenario 1 (name x) (bogus 1))").unwrap_err();
        assert!(matches!(e, Error::ParseAt { line: 1, col: 30, .. }), "{e}");
        let e = Scenario::parse("(flagpar-scenario 2)").unwrap_err();
        assert!(e.to_string().contains("version"));
        let e = Scenario::parse(&COUPLE.replace("(levels 2 3)", "(levels 3 2)")).unwrap_err();
        assert!(matches!(e, Error::ParseAt { line: 7, .. }), "{e}");
        let e = Scenario::parse(&COUPLE.replace("solvable", "solvabel")).unwrap_err();
        assert!(matches!(e, Error::ParseAt { line: 8, .. }), "{e}");
        assert!(Scenario::parse("(flagpar-scenario 1").is_err());
    }

    #[test]
    fn runs_in_dependency_order() {
        let rep = run_scenario(&Scenario::parse(COUPLE).unwrap());
        let names: Vec<&str> = rep.records.iter().map(|r| r.name.as_str()).collect();
        assert_eq!(names, ["taut", "taut", "stabilizer", "stabilizer", "solvable", "solvable"]);
        assert!(rep.passed(), "{}", rep.render(crate::report::Emit::Text));
    }

    #[test]
    fn self_taut_with_real_form() {
        let src = "(flagpar-scenario 1
  (name su)
  (system (domain nat) (kernel (form hermitian (pairs 1))))
  (flag (chain (fin 1) (union (fin 1) (ray gt 2)) (full)))
  (real-form \"su(1,inf)\")
  (levels 3 4)
  (checks real man dagger))";
        let s = Scenario::parse(src).unwrap();
        assert_eq!(Scenario::parse(&s.to_string()).unwrap(), s);
        let rep = run_scenario(&s);
        assert!(rep.passed(), "{}", rep.render(crate::report::Emit::Text));
    }
}
