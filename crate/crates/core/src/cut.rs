//! Cut sets: decidable, finitely described subsets of an index domain.
//!
//! A cut set is stored as a starting membership bit plus a strictly increasing
//! list of boundary positions. Membership flips at each boundary. The
//! representation is canonical, so structural equality is set equality.

use std::cmp::Ordering;
use std::fmt;

use crate::error::{Error, Result};
use crate::index::{Index, IndexDomain, Window};
use crate::sexpr::{self, Sexp};

/// A boundary position: immediately below `at`, or immediately above it.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct Cut {
    pub at: Index,
    pub after: bool,
}

impl Cut {
    fn before(at: Index) -> Cut {
        Cut { at, after: false }
    }

    fn cmp_pos(&self, o: &Cut) -> Ordering {
        self.at.cmp(&o.at).then(self.after.cmp(&o.after))
    }

    /// Whether `x` lies above this boundary.
    fn below(&self, x: &Index) -> bool {
        match x.cmp(&self.at) {
            Ordering::Greater => true,
            Ordering::Equal => !self.after,
            Ordering::Less => false,
        }
    }
}

/// Size of a cut set.
#[derive(Clone, Copy, Debug, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub enum Card {
    Finite(u64),
    Infinite,
}

impl Card {
    pub fn exceeds(self, n: u64) -> bool {
        match self {
            Card::Finite(k) => k > n,
            Card::Infinite => true,
        }
    }
}

impl fmt::Display for Card {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Card::Finite(n) => write!(f, "{n}"),
            Card::Infinite => f.write_str("inf"),
        }
    }
}

#[derive(Clone, PartialEq, Eq, Hash)]
pub struct CutSet {
    domain: IndexDomain,
    start: bool,
    cuts: Vec<Cut>,
}

/// Ray comparison kinds.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Ray {
    Lt,
    Le,
    Gt,
    Ge,
}

impl CutSet {
    pub fn empty(domain: IndexDomain) -> CutSet {
        CutSet { domain, start: false, cuts: Vec::new() }
    }

    pub fn full(domain: IndexDomain) -> CutSet {
        CutSet { domain, start: true, cuts: Vec::new() }
    }

    pub fn domain(&self) -> IndexDomain {
        self.domain
    }

    fn check(&self, i: &Index) -> Result<()> {
        if i.domain() != self.domain {
            return Err(Error::DomainMismatch(format!("{i} not in {}", self.domain)));
        }
        Ok(())
    }

    fn same_domain(&self, o: &CutSet) -> Result<()> {
        if self.domain != o.domain {
            return Err(Error::DomainMismatch(format!("{} vs {}", self.domain, o.domain)));
        }
        Ok(())
    }

    /// Builds a canonical set from raw boundaries (any order, duplicates allowed).
    fn build(domain: IndexDomain, mut start: bool, raw: Vec<Cut>) -> CutSet {
        let mut cuts: Vec<Cut> = Vec::with_capacity(raw.len());
        let mut norm: Vec<Cut> = raw.into_iter().map(|c| normalize(domain, c)).collect();
        norm.sort_by(|a, b| a.cmp_pos(b));
        for c in norm {
            if at_bottom(domain, &c) {
                start = !start;
                continue;
            }
            match cuts.last() {
                Some(l) if l.cmp_pos(&c) == Ordering::Equal => {
                    cuts.pop();
                }
                _ => cuts.push(c),
            }
        }
        CutSet { domain, start, cuts }
    }

    pub fn fin(domain: IndexDomain, items: &[Index]) -> Result<CutSet> {
        let mut out = CutSet::empty(domain);
        for i in items {
            out = out.union(&CutSet::singleton(i.clone())?)?;
        }
        Ok(out)
    }

    pub fn singleton(i: Index) -> Result<CutSet> {
        if matches!(i, Index::Nat(0)) {
            return Err(Error::Invalid("0 is not a positive integer index".into()));
        }
        let domain = i.domain();
        Ok(CutSet::build(
            domain,
            false,
            vec![Cut::before(i.clone()), Cut { at: i, after: true }],
        ))
    }

    pub fn ray(kind: Ray, c: Index) -> CutSet {
        let domain = c.domain();
        let (start, after) = match kind {
            Ray::Lt => (true, false),
            Ray::Le => (true, true),
            Ray::Gt => (false, true),
            Ray::Ge => (false, false),
        };
        CutSet::build(domain, start, vec![Cut { at: c, after }])
    }

    pub fn contains(&self, x: &Index) -> Result<bool> {
        self.check(x)?;
        Ok(self.member(x))
    }

    fn member(&self, x: &Index) -> bool {
        let flips = self.cuts.iter().take_while(|c| c.below(x)).count();
        self.start ^ (flips % 2 == 1)
    }

    fn combine(&self, o: &CutSet, f: impl Fn(bool, bool) -> bool) -> Result<CutSet> {
        self.same_domain(o)?;
        let mut all: Vec<(Cut, u8)> = self
            .cuts
            .iter()
            .map(|c| (c.clone(), 1u8))
            .chain(o.cuts.iter().map(|c| (c.clone(), 2u8)))
            .collect();
        all.sort_by(|a, b| a.0.cmp_pos(&b.0));
        let (mut a, mut b) = (self.start, o.start);
        let start = f(a, b);
        let mut cur = start;
        let mut cuts = Vec::new();
        let mut k = 0;
        while k < all.len() {
            let pos = all[k].0.clone();
            while k < all.len() && all[k].0.cmp_pos(&pos) == Ordering::Equal {
                if all[k].1 == 1 {
                    a = !a;
                } else {
                    b = !b;
                }
                k += 1;
            }
            let next = f(a, b);
            if next != cur {
                cuts.push(pos);
                cur = next;
            }
        }
        Ok(CutSet { domain: self.domain, start, cuts })
    }

    pub fn union(&self, o: &CutSet) -> Result<CutSet> {
        self.combine(o, |a, b| a || b)
    }

    pub fn inter(&self, o: &CutSet) -> Result<CutSet> {
        self.combine(o, |a, b| a && b)
    }

    pub fn diff(&self, o: &CutSet) -> Result<CutSet> {
        self.combine(o, |a, b| a && !b)
    }

    pub fn complement(&self) -> CutSet {
        CutSet { domain: self.domain, start: !self.start, cuts: self.cuts.clone() }
    }

    pub fn is_empty(&self) -> bool {
        !self.start && self.cuts.is_empty()
    }

    pub fn is_full(&self) -> bool {
        self.start && self.cuts.is_empty()
    }

    pub fn is_subset(&self, o: &CutSet) -> Result<bool> {
        Ok(self.diff(o)?.is_empty())
    }

    pub fn is_disjoint(&self, o: &CutSet) -> Result<bool> {
        Ok(self.inter(o)?.is_empty())
    }

    /// Maximal runs of members, each as (lower boundary, upper boundary).
    fn segments(&self) -> Vec<(Option<&Cut>, Option<&Cut>)> {
        let mut out = Vec::new();
        let mut lo: Option<&Cut> = None;
        let mut inside = self.start;
        for c in &self.cuts {
            if inside {
                out.push((lo, Some(c)));
            }
            lo = Some(c);
            inside = !inside;
        }
        if inside {
            out.push((lo, None));
        }
        out
    }

    pub fn card(&self) -> Card {
        let mut total = 0u64;
        for (lo, hi) in self.segments() {
            match segment_card(self.domain, lo, hi) {
                Card::Finite(n) => total += n,
                Card::Infinite => return Card::Infinite,
            }
        }
        Card::Finite(total)
    }

    /// Some member, preferring the smallest one when it exists.
    pub fn any_element(&self) -> Option<Index> {
        let (lo, hi) = self.segments().into_iter().next()?;
        match lo {
            Some(c) if !c.after => Some(c.at.clone()),
            Some(c) => match hi {
                Some(h) => c.at.between(&h.at).or_else(|| Some(h.at.clone())),
                None => Some(c.at.some_above()),
            },
            None => match self.domain {
                IndexDomain::Nat => Some(Index::Nat(1)),
                IndexDomain::ColPair => Some(Index::Col(1, 1)),
                IndexDomain::Rat => match hi {
                    Some(h) => h.at.some_below(),
                    None => Some(Index::rat(0, 1)),
                },
            },
        }
    }

    /// Members of `w`, in window order.
    pub fn elements_in(&self, w: &Window) -> Result<Vec<Index>> {
        if w.domain != self.domain {
            return Err(Error::DomainMismatch(format!("window {} vs {}", w.domain, self.domain)));
        }
        Ok(w.indices().iter().filter(|i| self.member(i)).cloned().collect())
    }

    /// All members, when finite.
    pub fn finite_elements(&self) -> Option<Vec<Index>> {
        if !matches!(self.card(), Card::Finite(_)) {
            return None;
        }
        let mut out = Vec::new();
        for (lo, hi) in self.segments() {
            let mut x = match lo {
                None => match self.domain {
                    IndexDomain::Nat => Index::Nat(1),
                    IndexDomain::ColPair => Index::Col(1, 1),
                    IndexDomain::Rat => unreachable!("finite segment"),
                },
                Some(c) => c.at.clone(),
            };
            let hi = hi.expect("finite segment");
            loop {
                if !Cut::below(hi, &x) {
                    out.push(x.clone());
                } else {
                    break;
                }
                match x.succ() {
                    Some(s) => x = s,
                    None => break,
                }
            }
        }
        Some(out)
    }

    /// Boundary points, useful for choosing windows that see the structure.
    pub fn boundary_points(&self) -> Vec<Index> {
        self.cuts.iter().map(|c| c.at.clone()).collect()
    }

    pub fn to_sexp(&self) -> Sexp {
        if self.cuts.is_empty() {
            return Sexp::list(vec![Sexp::atom(if self.start { "full" } else { "empty" })]);
        }
        let mut parts: Vec<Sexp> = Vec::new();
        let mut singles: Vec<Index> = Vec::new();
        let mut fin_at: Option<usize> = None;
        for (lo, hi) in self.segments() {
            if let Some(items) = small_run(self.domain, lo, hi) {
                if lo.is_some() || items.len() == 1 {
                    fin_at.get_or_insert(parts.len());
                    singles.extend(items);
                    continue;
                }
            }
            let upper = hi.map(|h| upper_ray(self.domain, h));
            let lower = lo.map(|l| {
                let kind = if l.after { "gt" } else { "ge" };
                ray_sexp(kind, &l.at)
            });
            parts.push(match (lower, upper) {
                (Some(l), Some(u)) => Sexp::list(vec![Sexp::atom("inter"), l, u]),
                (Some(l), None) => l,
                (None, Some(u)) => u,
                (None, None) => unreachable!("cuts nonempty"),
            });
        }
        if let Some(at) = fin_at {
            let mut items = vec![Sexp::atom("fin")];
            items.extend(singles.iter().map(|i| Sexp::atom(i.to_string())));
            parts.insert(at, Sexp::list(items));
        }
        if parts.len() == 1 {
            parts.pop().unwrap()
        } else {
            let mut items = vec![Sexp::atom("union")];
            items.extend(parts);
            Sexp::list(items)
        }
    }

    pub fn from_sexp(s: &Sexp, domain: IndexDomain) -> Result<CutSet> {
        let (head, args) = s.head()?;
        let idx = |e: &Sexp| -> Result<Index> {
            let t = e.as_atom()?;
            Index::parse(t, domain).map_err(|err| e.error(err.to_string()))
        };
        let arity = |n: usize| -> Result<()> {
            if args.len() != n {
                return Err(s.error(format!("`{head}` takes {n} argument(s)")));
            }
            Ok(())
        };
        let fold = |f: fn(&CutSet, &CutSet) -> Result<CutSet>, unit: CutSet| -> Result<CutSet> {
            let mut acc = unit;
            for a in args {
                acc = f(&acc, &CutSet::from_sexp(a, domain)?)?;
            }
            Ok(acc)
        };
        match head {
            "empty" => arity(0).map(|_| CutSet::empty(domain)),
            "full" => arity(0).map(|_| CutSet::full(domain)),
            "fin" => {
                let items = args.iter().map(idx).collect::<Result<Vec<_>>>()?;
                CutSet::fin(domain, &items).map_err(|e| s.error(e.to_string()))
            }
            "ray" => {
                arity(2)?;
                let kind = match args[0].as_atom()? {
                    "lt" => Ray::Lt,
                    "le" => Ray::Le,
                    "gt" => Ray::Gt,
                    "ge" => Ray::Ge,
                    k => return Err(args[0].error(format!("unknown ray kind `{k}`"))),
                };
                Ok(CutSet::ray(kind, idx(&args[1])?))
            }
            "union" => fold(CutSet::union, CutSet::empty(domain)),
            "inter" => fold(CutSet::inter, CutSet::full(domain)),
            "compl" => {
                arity(1)?;
                Ok(CutSet::from_sexp(&args[0], domain)?.complement())
            }
            "diff" => {
                arity(2)?;
                CutSet::from_sexp(&args[0], domain)?.diff(&CutSet::from_sexp(&args[1], domain)?)
            }
            other => Err(s.error(format!("unknown cut-set form `{other}`"))),
        }
    }

    pub fn parse(src: &str, domain: IndexDomain) -> Result<CutSet> {
        CutSet::from_sexp(&sexpr::parse_one(src)?, domain)
    }
}

fn normalize(domain: IndexDomain, c: Cut) -> Cut {
    match (domain, c.after) {
        (IndexDomain::Rat, _) | (_, false) => c,
        (_, true) => Cut::before(c.at.succ().expect("discrete domain")),
    }
}

fn at_bottom(domain: IndexDomain, c: &Cut) -> bool {
    match domain {
        IndexDomain::Nat => matches!(c.at, Index::Nat(n) if n <= 1),
        IndexDomain::ColPair => matches!(c.at, Index::Col(1, 1)),
        IndexDomain::Rat => false,
    }
}

fn segment_card(domain: IndexDomain, lo: Option<&Cut>, hi: Option<&Cut>) -> Card {
    let Some(hi) = hi else { return Card::Infinite };
    match domain {
        IndexDomain::Nat => {
            let a = match lo {
                Some(Cut { at: Index::Nat(a), .. }) => *a,
                _ => 1,
            };
            let Index::Nat(b) = hi.at else { unreachable!() };
            Card::Finite(b - a)
        }
        IndexDomain::ColPair => {
            let (i, a) = match lo {
                Some(Cut { at: Index::Col(i, a), .. }) => (*i, *a),
                _ => (1, 1),
            };
            let Index::Col(j, b) = hi.at else { unreachable!() };
            if a == b {
                Card::Finite(j - i)
            } else {
                Card::Infinite
            }
        }
        IndexDomain::Rat => match lo {
            Some(l) if !l.after && hi.after && l.at == hi.at => Card::Finite(1),
            _ => Card::Infinite,
        },
    }
}

/// Bounded runs small enough to print as explicit elements.
fn small_run(domain: IndexDomain, lo: Option<&Cut>, hi: Option<&Cut>) -> Option<Vec<Index>> {
    match segment_card(domain, lo, hi) {
        Card::Finite(n) if n <= 8 => {
            let mut x = match (lo, domain) {
                (Some(c), _) => c.at.clone(),
                (None, IndexDomain::Nat) => Index::Nat(1),
                (None, IndexDomain::ColPair) => Index::Col(1, 1),
                (None, IndexDomain::Rat) => return None,
            };
            let mut out = vec![x.clone()];
            for _ in 1..n {
                x = x.succ()?;
                out.push(x.clone());
            }
            Some(out)
        }
        _ => None,
    }
}

fn upper_ray(domain: IndexDomain, h: &Cut) -> Sexp {
    if h.after {
        return ray_sexp("le", &h.at);
    }
    let pred = match (&h.at, domain) {
        (Index::Nat(n), IndexDomain::Nat) if *n > 1 => Some(Index::Nat(n - 1)),
        (Index::Col(i, a), IndexDomain::ColPair) if *i > 1 => Some(Index::Col(i - 1, *a)),
        _ => None,
    };
    match pred {
        Some(p) => ray_sexp("le", &p),
        None => ray_sexp("lt", &h.at),
    }
}

fn ray_sexp(kind: &str, at: &Index) -> Sexp {
    Sexp::list(vec![Sexp::atom("ray"), Sexp::atom(kind), Sexp::atom(at.to_string())])
}

impl fmt::Display for CutSet {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}", self.to_sexp())
    }
}

impl fmt::Debug for CutSet {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}{}", self.domain, self.to_sexp())
    }
}
