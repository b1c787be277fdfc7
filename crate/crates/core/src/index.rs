//! Countable totally ordered index domains and finite windows.

use std::cmp::Ordering;
use std::fmt;

use crate::error::{Error, Result};
use crate::scalar::Q;

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum IndexDomain {
    /// Positive integers in the usual order. `0` is accepted as a ray endpoint.
    Nat,
    /// Rationals in the usual order.
    Rat,
    /// Pairs `(i1, a)` of positive integers, ordered by column `a`, then `i1`.
    ColPair,
}

impl fmt::Display for IndexDomain {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            IndexDomain::Nat => "nat",
            IndexDomain::Rat => "rat",
            IndexDomain::ColPair => "colpair",
        })
    }
}

impl std::str::FromStr for IndexDomain {
    type Err = Error;
    fn from_str(s: &str) -> Result<Self> {
        match s {
            "nat" => Ok(IndexDomain::Nat),
            "rat" => Ok(IndexDomain::Rat),
            "colpair" => Ok(IndexDomain::ColPair),
            _ => Err(Error::Parse(format!("unknown index domain `{s}`"))),
        }
    }
}

#[derive(Clone, PartialEq, Eq, Hash)]
pub enum Index {
    Nat(u64),
    Rat(Q),
    /// `(i1, a)`: row `i1` of column `a`.
    Col(u64, u64),
}

impl Index {
    pub fn rat(n: i64, d: i64) -> Index {
        Index::Rat(Q::new(n, d))
    }

    pub fn domain(&self) -> IndexDomain {
        match self {
            Index::Nat(_) => IndexDomain::Nat,
            Index::Rat(_) => IndexDomain::Rat,
            Index::Col(..) => IndexDomain::ColPair,
        }
    }

    /// Order comparison within one domain.
    pub fn compare(&self, other: &Index) -> Result<Ordering> {
        match (self, other) {
            (Index::Nat(a), Index::Nat(b)) => Ok(a.cmp(b)),
            (Index::Rat(a), Index::Rat(b)) => Ok(a.cmp(b)),
            (Index::Col(i, a), Index::Col(j, b)) => Ok(a.cmp(b).then(i.cmp(j))),
            _ => Err(Error::DomainMismatch(format!("{self} vs {other}"))),
        }
    }

    /// Immediate successor, for the discrete domains.
    pub fn succ(&self) -> Option<Index> {
        match self {
            Index::Nat(n) => Some(Index::Nat(n + 1)),
            Index::Col(i, a) => Some(Index::Col(i + 1, *a)),
            Index::Rat(_) => None,
        }
    }

    /// Some element strictly below `self`, if any exists.
    pub fn some_below(&self) -> Option<Index> {
        match self {
            Index::Nat(n) if *n > 1 => Some(Index::Nat(n - 1)),
            Index::Nat(_) => None,
            Index::Rat(q) => Some(Index::Rat(q - &Q::one())),
            Index::Col(i, a) if *i > 1 => Some(Index::Col(i - 1, *a)),
            Index::Col(_, a) if *a > 1 => Some(Index::Col(1, a - 1)),
            Index::Col(..) => None,
        }
    }

    /// Some element strictly above `self`.
    pub fn some_above(&self) -> Index {
        match self {
            Index::Rat(q) => Index::Rat(q + &Q::one()),
            other => other.succ().expect("discrete domain"),
        }
    }

    /// An element strictly between `self` and `hi`, if one exists.
    pub fn between(&self, hi: &Index) -> Option<Index> {
        if self.compare(hi).ok()? != Ordering::Less {
            return None;
        }
        match (self, hi) {
            (Index::Rat(a), Index::Rat(b)) => Some(Index::Rat(&(a + b) * &Q::new(1, 2))),
            _ => {
                let s = self.succ()?;
                (s.compare(hi).ok()? == Ordering::Less).then_some(s)
            }
        }
    }

    pub fn parse(s: &str, domain: IndexDomain) -> Result<Index> {
        let s = s.trim();
        let bad = || Error::Parse(format!("invalid {domain} index `{s}`"));
        match domain {
            IndexDomain::Nat => s.parse().map(Index::Nat).map_err(|_| bad()),
            IndexDomain::Rat => s.parse().map(Index::Rat).map_err(|_| bad()),
            IndexDomain::ColPair => {
                let (i, a) = s.split_once(':').ok_or_else(bad)?;
                let i: u64 = i.parse().map_err(|_| bad())?;
                let a: u64 = a.parse().map_err(|_| bad())?;
                if i == 0 || a == 0 {
                    return Err(bad());
                }
                Ok(Index::Col(i, a))
            }
        }
    }
}

impl fmt::Display for Index {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Index::Nat(n) => write!(f, "{n}"),
            Index::Rat(q) => write!(f, "{q}"),
            Index::Col(i, a) => write!(f, "{i}:{a}"),
        }
    }
}

impl fmt::Debug for Index {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        fmt::Display::fmt(self, f)
    }
}

/// Total order used for maps keyed by index: domain first, then the domain order.
impl Ord for Index {
    fn cmp(&self, other: &Self) -> Ordering {
        self.domain()
            .cmp(&other.domain())
            .then_with(|| self.compare(other).unwrap_or(Ordering::Equal))
    }
}

impl PartialOrd for Index {
    fn partial_cmp(&self, other: &Self) -> Option<Ordering> {
        Some(self.cmp(other))
    }
}

/// A finite, strictly increasing list of indices from one domain.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct Window {
    pub domain: IndexDomain,
    indices: Vec<Index>,
}

impl Window {
    /// Standard window: first `n` integers (Nat), the `n×n` block (ColPair), or just
    /// `extra` (Rat); `extra` is merged in.
    pub fn new(domain: IndexDomain, n: u64, extra: &[Index]) -> Result<Window> {
        let mut indices: Vec<Index> = match domain {
            IndexDomain::Nat => (1..=n).map(Index::Nat).collect(),
            IndexDomain::ColPair => (1..=n)
                .flat_map(|a| (1..=n).map(move |i| Index::Col(i, a)))
                .collect(),
            IndexDomain::Rat => Vec::new(),
        };
        for e in extra {
            if e.domain() != domain {
                return Err(Error::DomainMismatch(format!("window index {e} not in {domain}")));
            }
            indices.push(e.clone());
        }
        indices.sort();
        indices.dedup();
        Ok(Window { domain, indices })
    }

    pub fn from_indices(domain: IndexDomain, indices: Vec<Index>) -> Result<Window> {
        Window::new(domain, 0, &indices)
    }

    pub fn nat(n: u64) -> Window {
        Window::new(IndexDomain::Nat, n, &[]).expect("nat window")
    }

    pub fn indices(&self) -> &[Index] {
        &self.indices
    }

    pub fn len(&self) -> usize {
        self.indices.len()
    }

    pub fn is_empty(&self) -> bool {
        self.indices.is_empty()
    }

    pub fn position(&self, i: &Index) -> Option<usize> {
        self.indices.binary_search(i).ok()
    }

    pub fn contains(&self, i: &Index) -> bool {
        self.position(i).is_some()
    }

    pub fn is_subwindow_of(&self, other: &Window) -> bool {
        self.domain == other.domain && self.indices.iter().all(|i| other.contains(i))
    }
}

impl fmt::Display for Window {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "[")?;
        for (k, i) in self.indices.iter().enumerate() {
            if k > 0 {
                write!(f, ",")?;
            }
            write!(f, "{i}")?;
        }
        write!(f, "]")
    }
}
