//! Real forms, real parabolics at windows, Cartan involutions, the MAN
//! decomposition of minimal parabolics and the `p†` construction.
//!
//! A window of `F`-dimension `d` is realized inside `gl(c, C)` with `c = d`
//! for `F = R, C` and `c = 2d` for `F = H` (a quaternion becomes its 2×2
//! complex block). All spaces are real spans ([`MatSpace<Qi>`]). Every Gram
//! matrix in the catalog squares to `±1`, so `θx = −x*` is a Cartan
//! involution of every window algebra.

use std::collections::BTreeSet;
use std::fmt;
use std::str::FromStr;

use crate::chevalley::chevalley_of;
use crate::cut::CutSet;
use crate::error::{Error, Result};
use crate::index::{Index, Window};
use crate::matrix::Mat;
use crate::parabolic::ParabolicDesc;
use crate::scalar::{Field, Q, Qi, Quat};
use crate::space::{flatten, MatSpace};

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub enum Division {
    Real,
    Complex,
    Quaternion,
}

impl fmt::Display for Division {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            Division::Real => "R",
            Division::Complex => "C",
            Division::Quaternion => "H",
        })
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub enum RealFormKind {
    SlR,
    GlR,
    SlH,
    GlH,
    Su,
    U,
    So,
    SoStar,
    SpR,
    Sp,
}

/// A real form from the catalog. `pairs` is the number of hyperbolic pairs
/// of the defining form (`None`: every index is paired); it is only
/// meaningful for `U`, `Su`, `So` and `Sp`.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub struct RealStructure {
    pub kind: RealFormKind,
    pub pairs: Option<u64>,
}

impl fmt::Display for RealStructure {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let p = self.pairs.map_or("inf".to_string(), |p| p.to_string());
        match self.kind {
            RealFormKind::SlR => write!(f, "sl(inf;R)"),
            RealFormKind::GlR => write!(f, "gl(inf;R)"),
            RealFormKind::SlH => write!(f, "sl(inf;H)"),
            RealFormKind::GlH => write!(f, "gl(inf;H)"),
            RealFormKind::Su => write!(f, "su({p},inf)"),
            RealFormKind::U => write!(f, "u({p},inf)"),
            RealFormKind::So => write!(f, "so({p},inf)"),
            RealFormKind::SoStar => write!(f, "so*(2inf)"),
            RealFormKind::SpR => write!(f, "sp(inf;R)"),
            RealFormKind::Sp => write!(f, "sp({p},inf)"),
        }
    }
}

impl FromStr for RealStructure {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        let norm: String = s.chars().filter(|c| !c.is_whitespace()).collect::<String>().to_lowercase().replace('∞', "inf");
        let bad = || Error::UnknownRealForm(s.to_string());
        let (head, rest) = norm.split_once('(').ok_or_else(bad)?;
        let args = rest.strip_suffix(')').ok_or_else(bad)?;
        let form = |kind, pairs| Ok(RealStructure { kind, pairs });
        if let Some((a, b)) = args.split_once(';') {
            if a != "inf" {
                return Err(bad());
            }
            return match (head, b) {
                ("sl", "r") => form(RealFormKind::SlR, None),
                ("gl", "r") => form(RealFormKind::GlR, None),
                ("sl", "h") => form(RealFormKind::SlH, None),
                ("gl", "h") => form(RealFormKind::GlH, None),
                ("sp", "r") => form(RealFormKind::SpR, None),
                _ => Err(bad()),
            };
        }
        if head == "so*" {
            return if args == "2inf" { form(RealFormKind::SoStar, None) } else { Err(bad()) };
        }
        let (a, b) = args.split_once(',').ok_or_else(bad)?;
        if b != "inf" {
            return Err(bad());
        }
        let pairs = if a == "inf" { None } else { Some(a.parse::<u64>().map_err(|_| bad())?) };
        let kind = match head {
            "su" => RealFormKind::Su,
            "u" => RealFormKind::U,
            "so" => RealFormKind::So,
            "sp" => RealFormKind::Sp,
            _ => return Err(bad()),
        };
        form(kind, pairs)
    }
}

fn qi(n: i64) -> Qi {
    Qi::from_i64(n)
}

/// Complex realization of a quaternionic matrix.
pub fn realize(m: &Mat<Quat>) -> Mat<Qi> {
    let mut out = Mat::zeros(2 * m.rows(), 2 * m.cols());
    for i in 0..m.rows() {
        for j in 0..m.cols() {
            let b = m.get(i, j).to_complex_block();
            for (r, row) in b.iter().enumerate() {
                for (c, x) in row.iter().enumerate() {
                    out.set(2 * i + r, 2 * j + c, x.clone());
                }
            }
        }
    }
    out
}

/// `⊕ [[0, 1], [−1, 0]]`: conjugation by it is the quaternionic structure.
fn quaternionic_j(c: usize) -> Mat<Qi> {
    let mut j = Mat::zeros(c, c);
    for k in (0..c).step_by(2) {
        j.set(k, k + 1, qi(1));
        j.set(k + 1, k, qi(-1));
    }
    j
}

impl RealStructure {
    pub fn division(&self) -> Division {
        match self.kind {
            RealFormKind::SlR | RealFormKind::GlR | RealFormKind::So | RealFormKind::SpR => Division::Real,
            RealFormKind::Su | RealFormKind::U => Division::Complex,
            RealFormKind::SlH | RealFormKind::GlH | RealFormKind::SoStar | RealFormKind::Sp => Division::Quaternion,
        }
    }

    /// Defined by a hermitian form over `R`, `C` or `H`.
    pub fn is_hermitian(&self) -> bool {
        matches!(self.kind, RealFormKind::So | RealFormKind::U | RealFormKind::Su | RealFormKind::Sp)
    }

    pub fn has_form(&self) -> bool {
        !matches!(self.kind, RealFormKind::SlR | RealFormKind::GlR | RealFormKind::SlH | RealFormKind::GlH)
    }

    fn is_special(&self) -> bool {
        matches!(self.kind, RealFormKind::SlR | RealFormKind::SlH | RealFormKind::Su)
    }

    /// `u(p,∞)` for `su(p,∞)`, otherwise the form itself.
    pub fn envelope(&self) -> RealStructure {
        match self.kind {
            RealFormKind::Su => RealStructure { kind: RealFormKind::U, pairs: self.pairs },
            RealFormKind::SlR => RealStructure { kind: RealFormKind::GlR, pairs: None },
            RealFormKind::SlH => RealStructure { kind: RealFormKind::GlH, pairs: None },
            _ => *self,
        }
    }

    /// Complex size of the window of `F`-dimension `d`.
    pub fn size(&self, d: usize) -> usize {
        match self.division() {
            Division::Quaternion => 2 * d,
            _ => d,
        }
    }

    /// Complex coordinates of the `F`-coordinate `k` (0-based).
    pub fn coords(&self, k: usize) -> Vec<usize> {
        match self.division() {
            Division::Quaternion => vec![2 * k, 2 * k + 1],
            _ => vec![k],
        }
    }

    /// `F`-coordinate of a complex coordinate.
    pub fn f_coord(&self, c: usize) -> usize {
        match self.division() {
            Division::Quaternion => c / 2,
            _ => c,
        }
    }

    /// Hyperbolic pairs `(2k, 2k+1)` (0-based) of the window form.
    pub fn pairs_at(&self, d: usize) -> usize {
        match self.kind {
            RealFormKind::U | RealFormKind::Su | RealFormKind::So | RealFormKind::Sp => {
                self.pairs.map_or(d / 2, |p| (p as usize).min(d / 2))
            }
            RealFormKind::SoStar | RealFormKind::SpR => d / 2,
            _ => 0,
        }
    }

    /// Window `F`-dimension for a level: `2n` for `sp(∞;R)`, `n` otherwise.
    pub fn level_dim(&self, n: usize) -> usize {
        if self.kind == RealFormKind::SpR {
            2 * n
        } else {
            n
        }
    }

    /// Complex Gram matrix of the defining form on the window, if any.
    pub fn gram(&self, d: usize) -> Result<Option<Mat<Qi>>> {
        if !self.has_form() {
            return Ok(None);
        }
        let pairs = self.pairs_at(d);
        let skew = matches!(self.kind, RealFormKind::SpR | RealFormKind::SoStar);
        if self.kind == RealFormKind::SpR && d % 2 == 1 {
            return Err(Error::Dimension(format!("sp(∞;R) needs an even window, got {d}")));
        }
        let mut g: Mat<Quat> = Mat::zeros(d, d);
        for k in 0..pairs {
            g.set(2 * k, 2 * k + 1, Quat::from_ints(1, 0, 0, 0));
            g.set(2 * k + 1, 2 * k, Quat::from_ints(if skew { -1 } else { 1 }, 0, 0, 0));
        }
        for k in 2 * pairs..d {
            let unit = if skew { Quat::from_ints(0, 0, 1, 0) } else { Quat::from_ints(1, 0, 0, 0) };
            g.set(k, k, unit);
        }
        Ok(Some(match self.division() {
            Division::Quaternion => realize(&g),
            _ => g.map(|q| Qi::real(q.coords()[0].clone())),
        }))
    }

    /// The conjugation `τ` on `gl(c, C)` whose fixed points, inside the
    /// complexified algebra, form the real form.
    pub fn tau(&self, d: usize, x: &Mat<Qi>) -> Result<Mat<Qi>> {
        Ok(match self.division() {
            Division::Real => x.conj(),
            Division::Complex => {
                let g = self.gram(d)?.expect("unitary forms carry a form");
                g.mul(&x.adjoint()).mul(&g).neg()
            }
            Division::Quaternion => {
                let j = quaternionic_j(self.size(d));
                j.neg().mul(&x.conj()).mul(&j)
            }
        })
    }

    fn constraints(&self, d: usize, g: Option<&Mat<Qi>>, x: &Mat<Qi>) -> Vec<Q> {
        let mut out = Vec::new();
        match self.division() {
            Division::Real => out.extend(flatten(&x.conj().sub(x))),
            Division::Complex => {}
            Division::Quaternion => {
                let j = quaternionic_j(self.size(d));
                out.extend(flatten(&j.neg().mul(&x.conj()).mul(&j).sub(x)));
            }
        }
        if let Some(g) = g {
            out.extend(flatten(&x.adjoint().mul(g).add(&g.mul(x))));
        }
        if self.is_special() {
            out.extend(x.trace().coords());
        }
        out
    }

    /// The real window algebra `g_R(d)`.
    pub fn algebra(&self, d: usize) -> Result<MatSpace<Qi>> {
        let g = self.gram(d)?;
        let c = self.size(d);
        Ok(MatSpace::full(c).kernel_of(|x| self.constraints(d, g.as_ref(), x)))
    }

    /// Real dimension of the classical real form at window `d`.
    pub fn classical_dim(&self, d: usize) -> usize {
        let p = self.pairs_at(d);
        match self.kind {
            RealFormKind::SlR => d * d - 1,
            RealFormKind::GlR => d * d,
            RealFormKind::SlH => 4 * d * d - 1,
            RealFormKind::GlH => 4 * d * d,
            RealFormKind::Su => d * d - 1,
            RealFormKind::U => d * d,
            RealFormKind::So => d * (d - 1) / 2,
            RealFormKind::SoStar => d * (2 * d - 1),
            RealFormKind::SpR => p * (2 * p + 1),
            RealFormKind::Sp => d * (2 * d + 1),
        }
    }

    /// Signature `(p, q)` of the hermitian form on the window.
    pub fn signature(&self, d: usize) -> (usize, usize) {
        let p = self.pairs_at(d);
        (d - p, p)
    }

    /// `τ² = 1`, `τ` a homomorphism on a test set, and the fixed dimension.
    pub fn verify(&self, d: usize) -> Result<()> {
        let c = self.size(d);
        let mut test = Vec::new();
        for i in 0..c {
            for j in 0..c {
                test.push(Mat::unit(c, i, j));
                test.push(Mat::unit(c, i, j).scale(&Qi::i()));
            }
        }
        for x in &test {
            if &self.tau(d, &self.tau(d, x)?)? != x {
                return Err(Error::Invalid(format!("{self}: τ² ≠ 1 at window {d}")));
            }
        }
        for x in test.iter().step_by(3) {
            for y in test.iter().step_by(5) {
                let lhs = self.tau(d, &x.commutator(y))?;
                let rhs = self.tau(d, x)?.commutator(&self.tau(d, y)?);
                if lhs != rhs {
                    return Err(Error::Invalid(format!("{self}: τ is not a homomorphism at window {d}")));
                }
            }
        }
        let got = self.algebra(d)?.dim();
        if got != self.classical_dim(d) {
            return Err(Error::Invalid(format!(
                "{self}: window {d} has real dimension {got}, expected {}",
                self.classical_dim(d)
            )));
        }
        Ok(())
    }
}

/// Parses a catalog name and verifies the structure at window 4.
pub fn make_real_form(name: &str) -> Result<RealStructure> {
    let rs: RealStructure = name.parse()?;
    rs.verify(rs.level_dim(4))?;
    Ok(rs)
}

// ------------------------------------------------------------ Cartan

pub fn theta(x: &Mat<Qi>) -> Mat<Qi> {
    x.adjoint().neg()
}

fn fixed_by_theta(s: &MatSpace<Qi>, sign: i64) -> MatSpace<Qi> {
    s.kernel_of(|x| flatten(&theta(x).sub(&x.scale(&qi(sign)))))
}

#[derive(Clone, Debug)]
pub struct CartanData {
    pub real: RealStructure,
    pub dim: usize,
    pub g: MatSpace<Qi>,
    pub k: MatSpace<Qi>,
    pub s: MatSpace<Qi>,
}

impl CartanData {
    pub fn in_k(&self, x: &Mat<Qi>) -> bool {
        self.k.contains(x)
    }

    pub fn in_s(&self, x: &Mat<Qi>) -> bool {
        self.s.contains(x)
    }
}

/// `θ = −x*` on the window `d`, with its bracket rules checked.
pub fn cartan_involution(real: &RealStructure, d: usize) -> Result<CartanData> {
    let g = real.algebra(d)?;
    if !g.image(g.size(), theta).is_subspace_of(&g) {
        return Err(Error::Invalid(format!("θ does not preserve {real} at window {d}")));
    }
    let k = fixed_by_theta(&g, 1);
    let s = fixed_by_theta(&g, -1);
    let ok = k.dim() + s.dim() == g.dim()
        && k.bracket(&k).is_subspace_of(&k)
        && k.bracket(&s).is_subspace_of(&s)
        && s.bracket(&s).is_subspace_of(&k);
    if !ok {
        return Err(Error::Invalid(format!("Cartan bracket rules fail for {real} at window {d}")));
    }
    Ok(CartanData { real: *real, dim: d, g, k, s })
}

fn embed(x: &Mat<Qi>, c: usize) -> Mat<Qi> {
    Mat::from_fn(c, c, |i, j| if i < x.rows() && j < x.cols() { x.get(i, j).clone() } else { Qi::zero() })
}

/// Whether the window `d` sits in the window `e` as its top-left corner.
pub fn windows_nest(real: &RealStructure, d: usize, e: usize) -> Result<bool> {
    if d > e {
        return Ok(false);
    }
    let (gd, ge) = (real.gram(d)?, real.gram(e)?);
    Ok(match (gd, ge) {
        (Some(a), Some(b)) => {
            let c = a.rows();
            let idx: Vec<usize> = (0..c).collect();
            b.select(&idx, &idx) == a && (0..c).all(|i| (c..b.rows()).all(|j| b.get(i, j).is_zero()))
        }
        (None, None) => true,
        _ => false,
    })
}

/// `θ_e` restricted to the image of window `d` equals `θ_d`, and
/// `k`, `s` restrict exactly.
pub fn cartan_coherent(real: &RealStructure, d: usize, e: usize) -> Result<bool> {
    if !windows_nest(real, d, e)? {
        return Err(Error::Dimension(format!("window {d} does not nest in window {e} for {real}")));
    }
    let (small, big) = (cartan_involution(real, d)?, cartan_involution(real, e)?);
    let c = real.size(e);
    let lift = |s: &MatSpace<Qi>| s.image(c, |x| embed(x, c));
    let g = lift(&small.g);
    if !g.is_subspace_of(&big.g) {
        return Ok(false);
    }
    let theta_commutes = small.g.basis().iter().all(|x| embed(&theta(x), c) == theta(&embed(x, c)));
    Ok(theta_commutes && lift(&small.k) == big.k.intersect(&g) && lift(&small.s) == big.s.intersect(&g))
}

// ------------------------------------------------------------ parabolics

/// Coordinate members of a flag inside one window, as `F`-coordinates (0-based).
#[derive(Clone, Debug)]
pub struct RealParabolic {
    pub real: RealStructure,
    pub dim: usize,
    pub members: Vec<Vec<usize>>,
    pub algebra: MatSpace<Qi>,
}

fn stabilizer_in(real: &RealStructure, g: &MatSpace<Qi>, members: &[Vec<usize>]) -> MatSpace<Qi> {
    let sets: Vec<BTreeSet<usize>> =
        members.iter().map(|m| m.iter().flat_map(|&k| real.coords(k)).collect()).collect();
    let c = g.size();
    g.kernel_of(|x| {
        let mut out = Vec::new();
        for s in &sets {
            for j in s {
                for i in (0..c).filter(|i| !s.contains(i)) {
                    out.extend(x.get(i, *j).coords());
                }
            }
        }
        out
    })
}

impl RealParabolic {
    pub fn from_members(real: RealStructure, dim: usize, mut members: Vec<Vec<usize>>) -> Result<RealParabolic> {
        for m in &mut members {
            m.sort_unstable();
            m.dedup();
            if let Some(k) = m.iter().find(|&&k| k >= dim) {
                return Err(Error::OutsideWindow(format!("coordinate {} vs window {dim}", k + 1)));
            }
        }
        let g = real.algebra(dim)?;
        let algebra = stabilizer_in(&real, &g, &members);
        Ok(RealParabolic { real, dim, members, algebra })
    }

    pub fn contains(&self, x: &Mat<Qi>) -> bool {
        self.algebra.contains(x)
    }

    fn window(&self) -> Window {
        Window::nat(self.real.size(self.dim) as u64)
    }
}

/// A complex parabolic together with a real structure stabilizing it.
#[derive(Clone, Debug)]
pub struct RealParabolicDesc {
    pub desc: ParabolicDesc,
    pub real: RealStructure,
}

/// How many indices the `τ`-stability probe scans beyond the boundary points.
const TAU_PROBE: u64 = 16;

fn tau_image(real: &RealStructure, i: u64) -> u64 {
    match real.division() {
        Division::Quaternion if i % 2 == 1 => i + 1,
        Division::Quaternion => i - 1,
        _ => i,
    }
}

/// Checks that `τ` maps every flag member to itself. Quaternionic forms
/// act on complex coordinates `2k−1, 2k` by a swap; the others fix the basis.
pub fn real_parabolic(p: &ParabolicDesc, real: RealStructure) -> Result<RealParabolicDesc> {
    if p.system.domain != crate::index::IndexDomain::Nat {
        return Err(Error::DomainMismatch("real structures act on Nat-indexed systems".into()));
    }
    let flag = p.v_flag();
    let mut reach = TAU_PROBE;
    for m in flag.boundary_members()? {
        for b in m.boundary_points() {
            if let Index::Nat(n) = b {
                reach = reach.max(n + 2);
            }
        }
    }
    let w = Window::nat(reach + reach % 2);
    for m in flag.members_near(&w)? {
        for i in m.elements_in(&w)? {
            let Index::Nat(n) = i else { continue };
            if !m.contains(&Index::Nat(tau_image(&real, n)))? {
                return Err(Error::NotTauStable(format!("{m} (τ moves {n})")));
            }
        }
    }
    Ok(RealParabolicDesc { desc: p.clone(), real })
}

impl RealParabolicDesc {
    /// Real points of the truncation at window `d`.
    pub fn window(&self, d: usize) -> Result<RealParabolic> {
        let c = self.real.size(d);
        let w = Window::nat(c as u64);
        let mut members = Vec::new();
        for m in self.desc.v_flag().members_near(&w)? {
            let coords = member_coords(&m, &w)?;
            let f: Vec<usize> = coords.iter().map(|&x| self.real.f_coord(x)).collect::<BTreeSet<_>>().into_iter().collect();
            if !f.is_empty() && f.len() < d && !members.contains(&f) {
                members.push(f);
            }
        }
        RealParabolic::from_members(self.real, d, members)
    }
}

fn member_coords(m: &CutSet, w: &Window) -> Result<Vec<usize>> {
    Ok(m.elements_in(w)?
        .into_iter()
        .filter_map(|i| match i {
            Index::Nat(n) => Some(n as usize - 1),
            _ => None,
        })
        .collect())
}

// ------------------------------------------------------------ real Levi

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub enum BlockType {
    SlR(usize),
    /// The diagonal of a `τ`-swapped pair of complex blocks.
    SlC(usize),
    SlH(usize),
    Su(usize, usize),
    So(usize, usize),
    Sp(usize, usize),
    SoStar(usize),
    SpR(usize),
}

impl BlockType {
    pub fn is_compact(&self) -> bool {
        match *self {
            BlockType::Su(p, q) | BlockType::So(p, q) | BlockType::Sp(p, q) => p == 0 || q == 0,
            BlockType::SlH(1) => true,
            _ => false,
        }
    }

    /// Real dimension of the block algebra.
    pub fn dim(&self) -> usize {
        match *self {
            BlockType::SlR(n) => n * n - 1,
            BlockType::SlC(n) => 2 * (n * n - 1),
            BlockType::SlH(n) => 4 * n * n - 1,
            BlockType::Su(p, q) => (p + q) * (p + q) - 1,
            BlockType::So(p, q) => (p + q) * (p + q - 1) / 2,
            BlockType::Sp(p, q) => (p + q) * (2 * (p + q) + 1),
            BlockType::SoStar(n) => n * (2 * n - 1),
            BlockType::SpR(n) => n * (2 * n + 1),
        }
    }
}

impl fmt::Display for BlockType {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let pq = |f: &mut fmt::Formatter<'_>, name: &str, p: usize, q: usize| {
            if p == 0 || q == 0 {
                write!(f, "{name}({})", p + q)
            } else {
                write!(f, "{name}({p},{q})")
            }
        };
        match *self {
            BlockType::SlR(n) => write!(f, "sl({n};R)"),
            BlockType::SlC(n) => write!(f, "sl({n};C)"),
            BlockType::SlH(n) => write!(f, "sl({n};H)"),
            BlockType::Su(p, q) => pq(f, "su", p, q),
            BlockType::So(p, q) => pq(f, "so", p, q),
            BlockType::Sp(p, q) => pq(f, "sp", p, q),
            BlockType::SoStar(n) => write!(f, "so*({})", 2 * n),
            BlockType::SpR(n) => write!(f, "sp({n};R)"),
        }
    }
}

/// One simple block of the real Levi component at a window.
#[derive(Clone, Debug)]
pub struct RealLeviBlock {
    pub kind: BlockType,
    /// `F`-coordinates the block acts on.
    pub coords: Vec<usize>,
    /// Whether the block preserves the form on its coordinates (otherwise
    /// it acts on an isotropic `X_j` and dually on its partner `Y_j`).
    pub form_type: bool,
    pub algebra: MatSpace<Qi>,
}

impl fmt::Display for RealLeviBlock {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let cs: Vec<String> = self.coords.iter().map(|k| (k + 1).to_string()).collect();
        write!(f, "{} on {{{}}}", self.kind, cs.join(","))
    }
}

fn find(parent: &mut [usize], x: usize) -> usize {
    let mut r = x;
    while parent[r] != r {
        r = parent[r];
    }
    parent[x] = r;
    r
}

/// Splits `l` into simple blocks along the coordinates it touches.
fn levi_blocks(real: &RealStructure, d: usize, l: &MatSpace<Qi>) -> Result<Vec<RealLeviBlock>> {
    let mut parent: Vec<usize> = (0..d).collect();
    let mut touched = BTreeSet::new();
    for x in l.basis() {
        for i in 0..x.rows() {
            for j in 0..x.cols() {
                if !x.get(i, j).is_zero() {
                    let (a, b) = (real.f_coord(i), real.f_coord(j));
                    touched.insert(a);
                    touched.insert(b);
                    let (ra, rb) = (find(&mut parent, a), find(&mut parent, b));
                    parent[ra] = rb;
                }
            }
        }
    }
    // A block of isotropic type acts on X_j and dually on Y_j without
    // entries between them; partners are joined explicitly.
    let pairs = real.pairs_at(d);
    for &k in touched.iter().filter(|&&k| k < 2 * pairs) {
        if touched.contains(&(k ^ 1)) {
            let (ra, rb) = (find(&mut parent, k), find(&mut parent, k ^ 1));
            parent[ra] = rb;
        }
    }
    let mut groups: std::collections::BTreeMap<usize, Vec<usize>> = Default::default();
    for &k in &touched {
        groups.entry(find(&mut parent, k)).or_default().push(k);
    }
    let comps: Vec<Vec<usize>> = groups.into_values().collect();
    let mut out = Vec::new();
    for s in comps {
        let cs: BTreeSet<usize> = s.iter().flat_map(|&k| real.coords(k)).collect();
        let part = l.kernel_of(|x| {
            let mut v = Vec::new();
            for i in 0..x.rows() {
                for j in 0..x.cols() {
                    if !(cs.contains(&i) && cs.contains(&j)) {
                        v.extend(x.get(i, j).coords());
                    }
                }
            }
            v
        });
        let n = s.len();
        let np = (0..pairs).filter(|k| s.contains(&(2 * k)) && s.contains(&(2 * k + 1))).count();
        let nd = s.iter().filter(|&&k| k >= 2 * pairs).count();
        let (p, q) = (np + nd, np);
        let form_kind = match real.kind {
            RealFormKind::So => Some(BlockType::So(p, q)),
            RealFormKind::U | RealFormKind::Su => Some(BlockType::Su(p, q)),
            RealFormKind::Sp => Some(BlockType::Sp(p, q)),
            RealFormKind::SoStar => Some(BlockType::SoStar(n)),
            RealFormKind::SpR if n % 2 == 0 => Some(BlockType::SpR(n / 2)),
            _ => None,
        };
        let half = if real.has_form() { n / 2 } else { n };
        let gl_kind = match real.division() {
            Division::Real => BlockType::SlR(half),
            Division::Complex => BlockType::SlC(half),
            Division::Quaternion => BlockType::SlH(half),
        };
        let (kind, form_type) = match form_kind {
            Some(k) if k.dim() == part.dim() => (k, true),
            _ if gl_kind.dim() == part.dim() && (!real.has_form() || n % 2 == 0) => (gl_kind, false),
            _ => {
                return Err(Error::Invalid(format!(
                    "Levi block on {s:?} of dimension {} matches no real type for {real}",
                    part.dim()
                )))
            }
        };
        out.push(RealLeviBlock { kind, coords: s, form_type, algebra: part });
    }
    Ok(out)
}

/// Labeled simple blocks of the Levi component `[p_red, p_red]` at the window.
pub fn real_levi(p: &RealParabolic) -> Result<Vec<RealLeviBlock>> {
    let ch = chevalley_of(p.window(), p.algebra.clone())?;
    levi_blocks(&p.real, p.dim, &ch.l)
}

/// Every block is one of the compact algebras `su(n)`, `so(n)`, `sp(n)`.
pub fn is_minimal_levi(blocks: &[RealLeviBlock]) -> bool {
    blocks.iter().all(|b| b.kind.is_compact())
}

// ------------------------------------------------------------ MAN

#[derive(Clone, Debug)]
pub struct Check {
    pub name: &'static str,
    pub holds: bool,
}

fn all_hold(checks: &[Check]) -> bool {
    checks.iter().all(|c| c.holds)
}

#[derive(Clone, Debug)]
pub struct ManDecomp {
    pub real: RealStructure,
    pub dim: usize,
    pub p: MatSpace<Qi>,
    pub m: MatSpace<Qi>,
    pub a: MatSpace<Qi>,
    pub n: MatSpace<Qi>,
    pub l: MatSpace<Qi>,
    pub levi: Vec<RealLeviBlock>,
    pub checks: Vec<Check>,
}

impl ManDecomp {
    pub fn holds(&self) -> bool {
        all_hold(&self.checks)
    }
}

/// `m = p_red ∩ k`, `a = p_red ∩ s`, `n = p_nil` for a minimal real parabolic.
pub fn man_decompose(p: &RealParabolic) -> Result<ManDecomp> {
    let ch = chevalley_of(p.window(), p.algebra.clone())?;
    let levi = levi_blocks(&p.real, p.dim, &ch.l)?;
    if let Some(b) = levi.iter().find(|b| !b.kind.is_compact()) {
        return Err(Error::Invalid(format!("parabolic is not minimal: Levi block {b}")));
    }
    let m = fixed_by_theta(&ch.p_red, 1);
    let a = fixed_by_theta(&ch.p_red, -1);
    let n = ch.p_nil.clone();
    let ma = m.sum(&a);
    let checks = vec![
        Check { name: "a abelian", holds: a.is_abelian() },
        Check { name: "[m,a] = 0", holds: m.bracket(&a).dim() == 0 },
        Check { name: "[m+a,n] in n", holds: ma.bracket(&n).is_subspace_of(&n) },
        Check { name: "dim p = dim m + dim a + dim n", holds: m.dim() + a.dim() + n.dim() == p.algebra.dim() },
        Check { name: "l in m", holds: ch.l.is_subspace_of(&m) },
    ];
    Ok(ManDecomp { real: p.real, dim: p.dim, p: p.algebra.clone(), m, a, n, l: ch.l, levi, checks })
}

// ------------------------------------------------------------ p†

#[derive(Clone, Debug)]
pub struct Dagger {
    /// Members of `F†` (0-based `F`-coordinates).
    pub members: Vec<Vec<usize>>,
    pub parabolic: RealParabolic,
    /// `X_F`: coordinates of the form-type Levi blocks.
    pub x: Vec<usize>,
    /// Paired bases `x′_ℓ`, `x″_ℓ` of `X′`, `X″`.
    pub pairs: Vec<(usize, usize)>,
    pub q: Vec<usize>,
    pub a: MatSpace<Qi>,
    pub l_tilde: MatSpace<Qi>,
    pub t_prime: MatSpace<Qi>,
    pub t_second: MatSpace<Qi>,
    pub m: MatSpace<Qi>,
    /// `a` is a sum of the standard `gl(x′R, x″R)`.
    pub a_standard: bool,
    pub same: bool,
    pub checks: Vec<Check>,
}

impl Dagger {
    pub fn holds(&self) -> bool {
        all_hold(&self.checks)
    }
}

/// Elements supported on `rows × cols` (complex coordinates).
fn supported_on(s: &MatSpace<Qi>, keep: impl Fn(usize, usize) -> bool) -> MatSpace<Qi> {
    s.kernel_of(|x| {
        let mut v = Vec::new();
        for i in 0..x.rows() {
            for j in 0..x.cols() {
                if !keep(i, j) {
                    v.extend(x.get(i, j).coords());
                }
            }
        }
        v
    })
}

fn is_isotropic(real: &RealStructure, d: usize, m: &[usize]) -> bool {
    let pairs = real.pairs_at(d);
    m.iter().all(|&k| k < 2 * pairs && !m.contains(&(k ^ 1)))
}

/// Refines the isotropic part of the flag to single coordinates, lowest
/// first, adding the orthogonals of the new members.
fn interpolate(real: &RealStructure, d: usize, members: &[Vec<usize>]) -> Vec<Vec<usize>> {
    let mut iso: Vec<Vec<usize>> = members.iter().filter(|m| is_isotropic(real, d, m)).cloned().collect();
    iso.sort_by_key(Vec::len);
    let mut out: Vec<Vec<usize>> = members.to_vec();
    let mut prev: Vec<usize> = Vec::new();
    for m in iso {
        let mut cur = prev.clone();
        for &k in m.iter().filter(|k| !prev.contains(k)) {
            cur.push(k);
            cur.sort_unstable();
            let perp: Vec<usize> = (0..d).filter(|x| !(x < &(2 * real.pairs_at(d)) && cur.contains(&(x ^ 1)))).collect();
            for s in [cur.clone(), perp] {
                if s.len() < d && !out.contains(&s) {
                    out.push(s);
                }
            }
        }
        prev = m;
    }
    out
}

/// The `p†` construction for a minimal parabolic of a hermitian real form,
/// certified at the window.
pub fn construct_dagger(p: &RealParabolic) -> Result<Dagger> {
    let real = p.real;
    if !real.is_hermitian() {
        return Err(Error::Unsupported(format!("{real} is not defined by a hermitian form")));
    }
    let d = p.dim;
    let c = real.size(d);
    let man = man_decompose(p)?;
    let g = real.algebra(d)?;
    let env = real.envelope();
    let g_env = env.algebra(d)?;
    let p_env = stabilizer_in(&env, &g_env, &p.members);

    let x: Vec<usize> = man.levi.iter().filter(|b| b.form_type).flat_map(|b| b.coords.clone()).collect();
    let npairs = real.pairs_at(d);
    let iso = p.members.iter().filter(|m| is_isotropic(&real, d, m)).max_by_key(|m| m.len()).cloned().unwrap_or_default();
    let mut pairs = Vec::new();
    for k in 0..npairs {
        let (lo, hi) = (2 * k, 2 * k + 1);
        if x.contains(&lo) || x.contains(&hi) {
            return Err(Error::Invalid(format!("pair ({},{}) meets a form-type Levi block", lo + 1, hi + 1)));
        }
        match (iso.contains(&lo), iso.contains(&hi)) {
            (true, false) => pairs.push((lo, hi)),
            (false, true) => pairs.push((hi, lo)),
            _ => return Err(Error::Invalid(format!("pair ({},{}) is not split by the flag", lo + 1, hi + 1))),
        }
    }
    let q: Vec<usize> = (2 * npairs..d).filter(|k| !x.contains(k)).collect();

    let diag = |k: usize, s: i64| -> Vec<(usize, Qi)> { real.coords(k).into_iter().map(|i| (i, qi(s))).collect() };
    let a_gens: Vec<Mat<Qi>> = pairs
        .iter()
        .map(|&(x1, x2)| {
            let mut h = Mat::zeros(c, c);
            for (i, v) in diag(x1, 1).into_iter().chain(diag(x2, -1)) {
                h.set(i, i, v);
            }
            h
        })
        .collect();
    let a_dag = MatSpace::span(c, &a_gens);

    // l̃: u(X_j) in place of su(X_j) when F = C.
    let mut lt = man.l.clone();
    if real.division() == Division::Complex {
        for b in man.levi.iter().filter(|b| b.form_type) {
            let mut h = Mat::zeros(c, c);
            for &k in &b.coords {
                h.set(k, k, Qi::i());
            }
            lt = lt.sum(&MatSpace::span(c, &[h]));
        }
    }

    let cset = |ks: &[usize]| -> BTreeSet<usize> { ks.iter().flat_map(|&k| real.coords(k)).collect() };
    let qc = cset(&q);
    let t_prime = supported_on(&p_env, |i, j| qc.contains(&i) && qc.contains(&j)).center();
    let blocks: Vec<BTreeSet<usize>> = pairs.iter().map(|&(a, b)| cset(&[a, b])).collect();
    let same_block = |i: usize, j: usize| blocks.iter().any(|s| s.contains(&i) && s.contains(&j));
    let stab = fixed_by_theta(&supported_on(&p_env, same_block), 1).centralizer_of(&a_dag);
    let t_second = stab.center();
    let m_dag = lt.sum(&t_prime).sum(&t_second).intersect(&g);

    let members = interpolate(&real, d, &p.members);
    let dag = RealParabolic::from_members(real, d, members.clone())?;
    let man_dag = man_decompose(&dag)?;
    let a_standard = man.a == a_dag;
    let same = dag.algebra == p.algebra;

    let z = g.centralizer_of(&man.m.sum(&man.a));
    let z_dag = g.centralizer_of(&man.m.sum(&a_dag));
    let lg = lt.sum(&z).intersect(&g);
    let lg_dag = lt.sum(&z_dag).intersect(&g);
    let checks = vec![
        Check { name: "m† = m", holds: m_dag == man.m },
        Check { name: "m(p†) = m", holds: man_dag.m == man.m },
        Check { name: "a† abelian, in s", holds: a_dag.is_abelian() && fixed_by_theta(&a_dag, -1) == a_dag },
        Check { name: "m + a = l~ + z", holds: man.m.sum(&man.a) == lg },
        Check { name: "m + a† = l~ + z†", holds: man.m.sum(&a_dag) == lg_dag },
        Check { name: "t'' = 0 unless F = C", holds: real.division() == Division::Complex || t_second.dim() == 0 },
        Check { name: "a standard implies p† = p", holds: !a_standard || same },
        Check { name: "p† minimal", holds: man_dag.holds() },
    ];
    Ok(Dagger {
        members,
        parabolic: dag,
        x,
        pairs,
        q,
        a: a_dag,
        l_tilde: lt,
        t_prime,
        t_second,
        m: m_dag,
        a_standard,
        same,
        checks,
    })
}

#[cfg(test)]
mod tests {
    use super::*;

    fn rf(s: &str) -> RealStructure {
        s.parse().unwrap()
    }

    #[test]
    fn parse_catalog() {
        for s in ["sl(inf;R)", "sl(∞;H)", "su(1,inf)", "u(inf,inf)", "so(3,inf)", "so*(2inf)", "sp(inf;R)", "sp(2,inf)"] {
            let r = rf(s);
            assert_eq!(r, r.to_string().parse().unwrap());
        }
        assert!(matches!("sl(inf;Q)".parse::<RealStructure>(), Err(Error::UnknownRealForm(_))));
    }

    #[test]
    fn fixed_dimensions() {
        assert_eq!(rf("su(1,inf)").algebra(3).unwrap().dim(), 8);
        assert_eq!(rf("sp(inf;R)").algebra(4).unwrap().dim(), 10);
        assert_eq!(rf("sl(inf;R)").algebra(3).unwrap().dim(), 8);
        for s in ["sl(inf;R)", "gl(inf;H)", "su(2,inf)", "so(1,inf)", "so(inf,inf)", "so*(2inf)", "sp(inf;R)", "sp(1,inf)"] {
            let r = rf(s);
            for d in 2..=3 {
                r.verify(r.level_dim(d)).unwrap();
            }
        }
    }

    #[test]
    fn cartan_windows() {
        let r = rf("sl(inf;R)");
        let c = cartan_involution(&r, 3).unwrap();
        assert_eq!(c.k.dim(), 3);
        let su = rf("su(1,inf)");
        assert_eq!(cartan_involution(&su, 3).unwrap().k.dim(), 4);
        assert!(cartan_coherent(&su, 3, 4).unwrap());
        assert!(cartan_coherent(&r, 3, 4).unwrap());
    }

    #[test]
    fn sl2_upper_triangular() {
        let p = RealParabolic::from_members(rf("sl(inf;R)"), 2, vec![vec![0]]).unwrap();
        let man = man_decompose(&p).unwrap();
        assert!(man.holds());
        assert_eq!((man.m.dim(), man.a.dim(), man.n.dim()), (0, 1, 1));
    }

    #[test]
    fn su_one_n() {
        let r = rf("su(1,inf)");
        let p = RealParabolic::from_members(r, 4, vec![vec![0], vec![0, 2, 3]]).unwrap();
        let man = man_decompose(&p).unwrap();
        assert!(man.holds());
        assert_eq!((man.a.dim(), man.n.dim(), man.m.dim()), (1, 5, 4));
        assert_eq!(man.levi.len(), 1);
        assert_eq!(man.levi[0].kind.to_string(), "su(2)");
    }

    #[test]
    fn non_minimal_rejected() {
        let p = RealParabolic::from_members(rf("sl(inf;R)"), 3, vec![vec![0]]).unwrap();
        let blocks = real_levi(&p).unwrap();
        assert!(!is_minimal_levi(&blocks));
        assert_eq!(blocks[0].kind, BlockType::SlR(2));
        assert!(man_decompose(&p).is_err());
        assert!(is_minimal_levi(&[]));
    }

    #[test]
    fn tau_swapped_member() {
        use crate::flags::GenFlag;
        use crate::flags::TautCouple;
        use crate::index::IndexDomain;
        use crate::linear::{DualSystem, Side};
        let sys = DualSystem::delta(IndexDomain::Nat);
        let chain = |ms: &[&str]| {
            let ms: Vec<CutSet> = ms.iter().map(|s| CutSet::parse(s, IndexDomain::Nat).unwrap()).collect();
            let v = GenFlag::from_chain(Side::V, IndexDomain::Nat, &ms).unwrap();
            let w = crate::levi::dual_flag(&sys, &v).unwrap();
            ParabolicDesc::from_couple(sys.clone(), TautCouple::new(v, w).unwrap()).unwrap()
        };
        let h = rf("sl(inf;H)");
        let err = real_parabolic(&chain(&["(fin 1)", "(full)"]), h).unwrap_err();
        assert!(matches!(err, Error::NotTauStable(_)));
        let ok = real_parabolic(&chain(&["(fin 1 2)", "(full)"]), h).unwrap();
        let w = ok.window(2).unwrap();
        let man = man_decompose(&w).unwrap();
        // sl(2;H) ∩ block upper triangular: m = sp(1)+sp(1), a = 1, n = H.
        assert_eq!((man.m.dim(), man.a.dim(), man.n.dim()), (6, 1, 4));
    }

    #[test]
    fn dagger_su() {
        let p = RealParabolic::from_members(rf("su(1,inf)"), 4, vec![vec![0], vec![0, 2, 3]]).unwrap();
        let dg = construct_dagger(&p).unwrap();
        assert!(dg.holds(), "{:?}", dg.checks);
        assert!(dg.a_standard && dg.same);
        assert_eq!(dg.t_second.dim(), 1);
    }

    #[test]
    fn dagger_quaternionic() {
        let p = RealParabolic::from_members(rf("sp(1,inf)"), 3, vec![vec![0], vec![0, 2]]).unwrap();
        let dg = construct_dagger(&p).unwrap();
        assert!(dg.holds(), "{:?}", dg.checks);
        assert_eq!(dg.t_second.dim(), 0);
    }
}
