//! Verification batteries behind `flagpar suite`. Randomized batteries use
//! fixed seeds, so reports are reproducible up to timing fields.

use std::collections::BTreeMap;
use std::time::Instant;

use rand::seq::SliceRandom;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use crate::chevalley::jordan_decompose;
use crate::cut::CutSet;
use crate::error::{Error, Result};
use crate::flags::{is_selftaut, GenFlag, SelfTautFlag, TautCouple};
use crate::index::{Index, IndexDomain, Window};
use crate::induce::{psi_b, voiculescu_check, CharacterSpec, FactorRepData, InducedModule};
use crate::levi::{column_levi, dual_flag, levi_of, maximal_taut_couple, LeviBlock, LeviDatum};
use crate::linear::{DualSystem, FinOp, FormKind, Side};
use crate::matrix::Mat;
use crate::parabolic::{
    example_rational_borel, so_flag_ambiguity, stabilizer_contains, stabilizer_truncation, truncation_space, Ambient,
    Ambiguity, ParabolicDesc,
};
use crate::realform::{construct_dagger, man_decompose, RealParabolic, RealStructure};
use crate::report::{Record, Report};
use crate::scalar::{Field, Q, Qi, Ring, Scalar};
use crate::space::MatSpace;

/// Seed shared by every randomized battery of this release.
pub const SEED: u64 = 0x666c_6167_7061_7231;

/// Environment variable giving the number of worker threads.
pub const JOBS_VAR: &str = "FLAGPAR_JOBS";

pub const SUITES: [&str; 5] = ["oracle", "classification", "realforms", "induction", "all"];

type Outcome = Result<(bool, Option<String>)>;

pub struct Battery {
    pub name: &'static str,
    pub anchor: &'static str,
    pub suite: &'static str,
    pub run: fn() -> Outcome,
}

pub fn batteries() -> Vec<Battery> {
    vec![
        Battery { name: "stabilizer oracle equivalence", anchor: "taut", suite: "oracle", run: oracle_equivalence },
        Battery { name: "rational Borel solvable and traceless", anchor: "sl-in-gl", suite: "oracle", run: rational_borel },
        Battery { name: "Jordan-Chevalley splitting", anchor: "levi", suite: "oracle", run: jordan_battery },
        Battery { name: "gl(4) parabolics over the Borel", anchor: "self-norm-cpx-parab", suite: "classification", run: gl4_count },
        Battery { name: "so(6) flag triple", anchor: "self-norm-cpx-parab-so", suite: "classification", run: so6_triple },
        Battery { name: "Levi round trip", anchor: "struc-levi", suite: "classification", run: levi_round_trip },
        Battery { name: "MAN certification", anchor: "construct-ma", suite: "realforms", run: man_battery },
        Battery { name: "dagger certificate", anchor: "construct-p", suite: "realforms", run: dagger_battery },
        Battery { name: "induced module fidelity", anchor: "sec9", suite: "induction", run: induction_battery },
        Battery { name: "psi_B and Voiculescu", anchor: "sec8", suite: "induction", run: character_battery },
    ]
}

fn jobs() -> usize {
    std::env::var(JOBS_VAR)
        .ok()
        .and_then(|s| s.parse().ok())
        .filter(|&n: &usize| n > 0)
        .unwrap_or_else(|| std::thread::available_parallelism().map_or(1, |n| n.get()))
}

/// Runs the named suite on a worker pool; records come back in battery order.
pub fn run_suite(name: &str) -> Result<Report> {
    if !SUITES.contains(&name) {
        return Err(Error::Invalid(format!("unknown suite `{name}`; expected one of {}", SUITES.join(", "))));
    }
    let chosen: Vec<Battery> = batteries().into_iter().filter(|b| name == "all" || b.suite == name).collect();
    let slots: Vec<std::sync::Mutex<Option<Record>>> = chosen.iter().map(|_| std::sync::Mutex::new(None)).collect();
    let next = std::sync::atomic::AtomicUsize::new(0);
    std::thread::scope(|s| {
        for _ in 0..jobs().min(chosen.len()) {
            s.spawn(|| loop {
                let k = next.fetch_add(1, std::sync::atomic::Ordering::SeqCst);
                let Some(b) = chosen.get(k) else { break };
                let start = Instant::now();
                let (holds, witness) = (b.run)().unwrap_or_else(|e| (false, Some(format!("error: {e}"))));
                let mut r = Record::new(b.name, b.anchor, None, holds, witness);
                r.millis = start.elapsed().as_millis();
                *slots[k].lock().expect("slot") = Some(r);
            });
        }
    });
    let mut rep = Report::new(format!("suite {name}"));
    for s in slots {
        rep.push(s.into_inner().expect("slot").expect("every battery ran"));
    }
    Ok(rep)
}

fn verdict(failures: Vec<String>, summary: String) -> Outcome {
    Ok(match failures.first() {
        None => (true, Some(summary)),
        Some(_) => (false, Some(format!("{} failures: {}", failures.len(), failures.join("; ")))),
    })
}

fn nat(n: u64) -> Index {
    Index::Nat(n)
}

fn fin(xs: &[u64]) -> CutSet {
    let items: Vec<Index> = xs.iter().map(|&x| nat(x)).collect();
    CutSet::fin(IndexDomain::Nat, &items).expect("nat items")
}

fn gl_parabolic(sys: &DualSystem, members: &[CutSet]) -> Result<ParabolicDesc> {
    let mut ms = members.to_vec();
    ms.push(sys.universe());
    let v = GenFlag::from_chain(Side::V, sys.domain, &ms)?;
    let w = dual_flag(sys, &v)?;
    ParabolicDesc::from_couple(sys.clone(), TautCouple::new(v, w)?)
}

/// Ordered set partitions of `1..=n`, as chains of unions.
pub fn ordered_partitions(n: u64) -> Vec<Vec<Vec<u64>>> {
    fn go(rest: Vec<u64>, acc: &mut Vec<Vec<u64>>, out: &mut Vec<Vec<Vec<u64>>>) {
        if rest.is_empty() {
            out.push(acc.clone());
            return;
        }
        let k = rest.len();
        for mask in 1u32..(1 << k) {
            let block: Vec<u64> = (0..k).filter(|i| mask & (1 << i) != 0).map(|i| rest[i]).collect();
            let left: Vec<u64> = (0..k).filter(|i| mask & (1 << i) == 0).map(|i| rest[i]).collect();
            acc.push(block);
            go(left, acc, out);
            acc.pop();
        }
    }
    let mut out = Vec::new();
    go((1..=n).collect(), &mut Vec::new(), &mut out);
    out
}

// ------------------------------------------------------------ oracle

fn oracle_equivalence() -> Outcome {
    let sys = DualSystem::delta(IndexDomain::Nat);
    let mut rng = ChaCha8Rng::seed_from_u64(SEED);
    let mut failures = Vec::new();
    let mut checked = 0usize;
    for n in 1..=5u64 {
        let mut parts = ordered_partitions(n);
        parts.shuffle(&mut rng);
        parts.truncate(32);
        let w = Window::nat(n);
        for part in parts {
            let mut chain = Vec::new();
            let mut acc = Vec::new();
            for b in &part[..part.len() - 1] {
                acc.extend(b);
                chain.push(fin(&acc));
            }
            let p = gl_parabolic(&sys, &chain)?;
            let t = stabilizer_truncation(&p, &w)?;
            let mut ops: Vec<FinOp> = Vec::new();
            for i in 1..=n {
                for j in 1..=n {
                    ops.push(sys.unit_op(nat(i), nat(j))?);
                }
            }
            for _ in 0..8 {
                let mut op = sys.zero_op();
                for _ in 0..3 {
                    let (i, j) = (rng.gen_range(1..=n), rng.gen_range(1..=n));
                    let c = Scalar::from(rng.gen_range(-3i64..=3));
                    op = op.add(&sys.unit_op(nat(i), nat(j))?.scale(&c));
                }
                ops.push(op);
            }
            for op in ops {
                checked += 1;
                let a = stabilizer_contains(&op, &p)?;
                let b = t.contains(&sys, &op)?;
                if a != b {
                    failures.push(format!("flag {part:?}: {op:?} direct {a}, truncation {b}"));
                }
            }
        }
    }
    verdict(failures, format!("{checked} memberships agree"))
}

fn rational_borel() -> Outcome {
    let p = example_rational_borel();
    let sys = &p.system;
    let mut rng = ChaCha8Rng::seed_from_u64(SEED ^ 3);
    let mut failures = Vec::new();
    for case in 0..20 {
        let size = rng.gen_range(1..=8usize);
        let mut pts = std::collections::BTreeSet::new();
        while pts.len() < size {
            pts.insert((rng.gen_range(-40i64..=40), rng.gen_range(1i64..=9)));
        }
        let idx: Vec<Index> = pts.iter().map(|&(a, b)| Index::rat(a, b)).collect();
        let mut idx = idx;
        idx.sort();
        idx.dedup();
        let w = Window::from_indices(IndexDomain::Rat, idx)?;
        let t = stabilizer_truncation(&p, &w)?;
        if !t.algebra.is_solvable() {
            failures.push(format!("case {case}: window {w} not solvable"));
        }
        for c in &t.coeffs {
            let op = sys.op_from_coeffs(&t.support, c)?;
            if !sys.trace(&op).is_zero() {
                failures.push(format!("case {case}: generator {op:?} has nonzero trace"));
            }
        }
    }
    verdict(failures, "20 windows".into())
}

fn gaussian(rng: &mut ChaCha8Rng, r: i64) -> Qi {
    Qi::new(Q::from(rng.gen_range(-r..=r)), Q::from(rng.gen_range(-r..=r)))
}

fn gaussian_mat(rng: &mut ChaCha8Rng, n: usize, r: i64) -> Mat<Qi> {
    let rows = (0..n).map(|_| (0..n).map(|_| gaussian(rng, r)).collect()).collect();
    Mat::from_rows(rows).expect("square")
}

/// A random matrix with prescribed Jordan structure: `(P J P⁻¹, P D P⁻¹)`.
pub fn random_jordan(rng: &mut ChaCha8Rng, k: usize) -> (Mat<Qi>, Mat<Qi>) {
    let mut j = Mat::zeros(k, k);
    let mut d = Mat::zeros(k, k);
    let mut at = 0;
    let eigs: Vec<Qi> = (0..2).map(|_| gaussian(rng, 2)).collect();
    while at < k {
        let len = rng.gen_range(1..=k - at);
        let lam = eigs[rng.gen_range(0..eigs.len())].clone();
        for t in at..at + len {
            j.set(t, t, lam.clone());
            d.set(t, t, lam.clone());
            if t + 1 < at + len {
                j.set(t, t + 1, Qi::one());
            }
        }
        at += len;
    }
    loop {
        let p = gaussian_mat(rng, k, 2);
        if let Some(pi) = p.inverse() {
            return (p.mul(&j).mul(&pi), p.mul(&d).mul(&pi));
        }
    }
}

fn op_of(sys: &DualSystem, idx: &[u64], m: &Mat<Qi>) -> Result<FinOp> {
    let mut op = sys.zero_op();
    for (a, &i) in idx.iter().enumerate() {
        for (b, &j) in idx.iter().enumerate() {
            let c = m.get(a, b);
            if !c.is_zero() {
                op = op.add(&sys.unit_op(nat(i), nat(j))?.scale(&Scalar::Gaussian(c.clone())));
            }
        }
    }
    Ok(op)
}

fn jordan_battery() -> Outcome {
    let sys = DualSystem { ring: Ring::Gaussian, ..DualSystem::delta(IndexDomain::Nat) };
    let mut rng = ChaCha8Rng::seed_from_u64(SEED ^ 5);
    let mut failures = Vec::new();
    for case in 0..100 {
        let k = rng.gen_range(1..=5usize);
        let mut idx: Vec<u64> = (1..=9).collect();
        idx.shuffle(&mut rng);
        idx.truncate(k);
        idx.sort_unstable();
        let (m, ss_oracle) = random_jordan(&mut rng, k);
        let op = op_of(&sys, &idx, &m)?;
        let (ss, nil) = jordan_decompose(&sys, &op)?;
        let mut bad = Vec::new();
        if ss.add(&nil) != op {
            bad.push("ss + nil ≠ op");
        }
        if !sys.bracket(&ss, &nil).is_zero() {
            bad.push("ss and nil do not commute");
        }
        let mut pw = nil.clone();
        for _ in 0..k {
            pw = sys.compose(&pw, &nil);
        }
        if !pw.is_zero() {
            bad.push("nil is not nilpotent");
        }
        if ss != op_of(&sys, &idx, &ss_oracle)? {
            bad.push("ss differs from the splitting-field oracle");
        }
        if !bad.is_empty() {
            failures.push(format!("case {case}: {}", bad.join(", ")));
        }
    }
    verdict(failures, "100 operators".into())
}

// ------------------------------------------------------------ classification

fn gl4_count() -> Outcome {
    let sys = DualSystem { rank: Some(4), ..DualSystem::delta(IndexDomain::Nat) };
    let w = Window::nat(4);
    let mut spaces: Vec<MatSpace<Q>> = Vec::new();
    let borel: Vec<Mat<Q>> = (0..4).flat_map(|i| (i..4).map(move |j| Mat::unit(4, i, j))).collect();
    for mask in 0u32..8 {
        let chain: Vec<CutSet> = (1..=3u64).filter(|k| mask & (1 << (k - 1)) != 0).map(|k| fin(&(1..=k).collect::<Vec<_>>())).collect();
        let s = truncation_space(&gl_parabolic(&sys, &chain)?, &w)?;
        if !borel.iter().all(|b| s.contains(b)) {
            return Ok((false, Some(format!("refinement {mask:03b} misses the Borel"))));
        }
        if !spaces.contains(&s) {
            spaces.push(s);
        }
    }
    Ok((spaces.len() == 8, Some(format!("{} distinct stabilizers", spaces.len()))))
}

/// Aligned self-taut flags of `so(2k)` in the hyperbolic basis: chains of
/// isotropic coordinate sets closed up by their orthogonals.
pub fn aligned_selftaut_flags(sys: &DualSystem, k: u64) -> Result<Vec<Vec<CutSet>>> {
    let mut iso: Vec<Vec<u64>> = vec![Vec::new()];
    for pair in 0..k {
        let mut next = Vec::new();
        for s in &iso {
            next.push(s.clone());
            for x in [2 * pair + 1, 2 * pair + 2] {
                let mut t = s.clone();
                t.push(x);
                next.push(t);
            }
        }
        iso = next;
    }
    let iso: Vec<CutSet> = iso.iter().filter(|s| !s.is_empty()).map(|s| fin(s)).collect();
    let mut chains: Vec<Vec<CutSet>> = vec![Vec::new()];
    let mut frontier = chains.clone();
    while !frontier.is_empty() {
        let mut next = Vec::new();
        for c in &frontier {
            for s in &iso {
                let ok = match c.last() {
                    None => true,
                    Some(l) => l.is_subset(s)? && l != s,
                };
                if ok {
                    let mut d = c.clone();
                    d.push(s.clone());
                    next.push(d);
                }
            }
        }
        chains.extend(next.iter().cloned());
        frontier = next;
    }
    let mut out = Vec::new();
    for c in chains {
        let mut members = c.clone();
        for s in c.iter().rev() {
            let perp = sys.annihilator(&sys.subspace(Side::V, s.clone())?)?.set;
            if !members.contains(&perp) {
                members.push(perp);
            }
        }
        members.sort_by_key(|m| m.card());
        if !out.contains(&members) {
            out.push(members);
        }
    }
    Ok(out)
}

fn so6_triple() -> Outcome {
    let sys = DualSystem::form(FormKind::Symmetric, Some(3), Some(6))?;
    let w = Window::nat(6);
    let flag = GenFlag::from_chain(Side::V, IndexDomain::Nat, &[fin(&[1, 3]), fin(&[1, 3, 5, 6]), sys.universe()])?;
    let st = SelfTautFlag::new(&sys, flag, 3)?;
    let Ambiguity::Triple(a, b, c) = so_flag_ambiguity(&sys, &st)? else {
        return Ok((false, Some("no triple reported".into())));
    };
    let space = |f: GenFlag| -> Result<MatSpace<Q>> {
        let st = SelfTautFlag::new(&sys, f, 3)?;
        truncation_space(&ParabolicDesc::from_selftaut(sys.clone(), st)?, &w)
    };
    let target = space(a.clone())?;
    if space(b)? != target || space(c)? != target {
        return Ok((false, Some("the three flags have different stabilizers".into())));
    }
    let mut same = 0;
    let mut scanned = 0;
    for ms in aligned_selftaut_flags(&sys, 3)? {
        let f = GenFlag::from_chain(Side::V, IndexDomain::Nat, &ms)?;
        let st = SelfTautFlag::new(&sys, f.clone(), 3)?;
        if !is_selftaut(&sys, &st, 3)?.holds {
            continue;
        }
        scanned += 1;
        if space(f)? == target {
            same += 1;
        }
    }
    Ok((same == 3, Some(format!("{same} of {scanned} aligned self-taut flags share the stabilizer"))))
}

fn nat_set(s: &str) -> CutSet {
    CutSet::parse(s, IndexDomain::Nat).expect("catalog cut set")
}

fn gl_datum(xs: &[&str]) -> LeviDatum {
    LeviDatum::gl(xs.iter().map(|s| LeviBlock { x: nat_set(s), y: nat_set(s) }).collect())
}

fn form_datum(ambient: Ambient, blocks: &[(&str, &str)], z: Option<&str>) -> LeviDatum {
    LeviDatum {
        ambient,
        blocks: blocks.iter().map(|(x, y)| LeviBlock { x: nat_set(x), y: nat_set(y) }).collect(),
        column_family: None,
        z: z.map(nat_set),
    }
}

/// Twelve Levi data across `gl`, `so`, `sp`, finite and schema blocks.
pub fn levi_catalog() -> Result<Vec<(DualSystem, LeviDatum)>> {
    let delta = DualSystem::delta(IndexDomain::Nat);
    let sp8 = DualSystem::form(FormKind::Alternating, None, Some(8))?;
    let sp = DualSystem::form(FormKind::Alternating, None, None)?;
    let so8 = DualSystem::form(FormKind::Symmetric, None, Some(8))?;
    let so = DualSystem::form(FormKind::Symmetric, Some(3), None)?;
    Ok(vec![
        (delta.clone(), gl_datum(&[])),
        (delta.clone(), gl_datum(&["(fin 1 2)"])),
        (delta.clone(), gl_datum(&["(fin 1 2)", "(fin 3 4)"])),
        (delta.clone(), gl_datum(&["(fin 2 3)", "(ray ge 6)"])),
        (delta.clone(), gl_datum(&["(fin 1 3 5)"])),
        (delta, gl_datum(&["(full)"])),
        (DualSystem::delta(IndexDomain::ColPair), column_levi()),
        (sp8.clone(), form_datum(Ambient::Sp, &[("(fin 1 3)", "(fin 2 4)")], Some("(fin 7 8)"))),
        (sp8, form_datum(Ambient::Sp, &[("(fin 1 3)", "(fin 2 4)"), ("(fin 5 7)", "(fin 6 8)")], None)),
        (sp, form_datum(Ambient::Sp, &[("(fin 1 3)", "(fin 2 4)")], Some("(ray ge 5)"))),
        (so8, form_datum(Ambient::So, &[("(fin 1 3)", "(fin 2 4)")], Some("(fin 5 6 7 8)"))),
        (so, form_datum(Ambient::So, &[("(fin 1 3)", "(fin 2 4)")], Some("(ray ge 5)"))),
    ])
}

fn levi_round_trip() -> Outcome {
    let mut failures = Vec::new();
    let cat = levi_catalog()?;
    for (k, (sys, l)) in cat.iter().enumerate() {
        let back = maximal_taut_couple(sys, l).and_then(|p| levi_of(&p));
        match back {
            Ok(b) if &b == l => {}
            Ok(b) => failures.push(format!("entry {k}: {l} came back as {b}")),
            Err(e) => failures.push(format!("entry {k}: {e}")),
        }
    }
    verdict(failures, format!("{} Levi data", cat.len()))
}

// ------------------------------------------------------------ real forms

/// A minimal parabolic of each family at window `d`, by 0-based coordinates.
pub fn minimal_members(real: &RealStructure, d: usize) -> Vec<Vec<usize>> {
    let p = real.pairs_at(d);
    let iso: Vec<Vec<usize>> = (1..=p).map(|k| (0..k).map(|i| 2 * i).collect()).collect();
    if !real.has_form() {
        return (1..d).map(|k| (0..k).collect()).collect();
    }
    let mut out = iso.clone();
    for s in iso.iter().rev() {
        let perp: Vec<usize> = (0..d).filter(|&c| !s.iter().any(|&x| c == x + 1 && x % 2 == 0 && x + 1 < 2 * p)).collect();
        if !out.contains(&perp) && perp.len() < d {
            out.push(perp);
        }
    }
    out
}

/// `(form, window, dim m, dim a, dim n)` from the restricted-root tables.
pub fn man_cases() -> Vec<(String, usize, usize, usize, usize)> {
    let mut out = Vec::new();
    for n in 2..=5 {
        out.push(("sl(inf;R)".to_string(), n, 0, n - 1, n * (n - 1) / 2));
    }
    for n in 1..=4 {
        out.push(("su(1,inf)".to_string(), n + 1, (n - 1) * (n - 1), 1, 2 * n - 1));
    }
    for n in 1..=3 {
        out.push(("sp(inf;R)".to_string(), 2 * n, 0, n, n * n));
    }
    out
}

fn man_battery() -> Outcome {
    let mut failures = Vec::new();
    let cases = man_cases();
    for (form, d, m, a, n) in &cases {
        let real: RealStructure = form.parse()?;
        let p = RealParabolic::from_members(real, *d, minimal_members(&real, *d))?;
        let man = man_decompose(&p)?;
        if let Some(c) = man.checks.iter().find(|c| !c.holds) {
            failures.push(format!("{form} at {d}: {} fails", c.name));
        }
        let got = (man.m.dim(), man.a.dim(), man.n.dim());
        if got != (*m, *a, *n) {
            failures.push(format!("{form} at {d}: (m, a, n) = {got:?}, expected {:?}", (m, a, n)));
        }
    }
    verdict(failures, format!("{} real forms", cases.len()))
}

/// Six hermitian-form parabolics at windows up to 4.
pub fn dagger_cases() -> Vec<(&'static str, usize, Vec<Vec<usize>>)> {
    vec![
        ("su(1,inf)", 3, vec![vec![0], vec![0, 2]]),
        ("su(1,inf)", 4, vec![vec![0], vec![0, 2, 3]]),
        ("u(1,inf)", 3, vec![vec![0], vec![0, 2]]),
        ("so(1,inf)", 3, vec![vec![0], vec![0, 2]]),
        ("sp(1,inf)", 3, vec![vec![0], vec![0, 2]]),
        ("su(2,inf)", 4, vec![vec![0], vec![0, 2], vec![0, 2, 3]]),
    ]
}

fn dagger_battery() -> Outcome {
    let mut failures = Vec::new();
    let mut fixed = 0;
    for (form, d, members) in dagger_cases() {
        let real: RealStructure = form.parse()?;
        let p = RealParabolic::from_members(real, d, members)?;
        let dg = construct_dagger(&p)?;
        if let Some(c) = dg.checks.iter().find(|c| !c.holds) {
            failures.push(format!("{form} at {d}: {} fails", c.name));
        }
        if dg.a_standard {
            fixed += 1;
            if !dg.same {
                failures.push(format!("{form} at {d}: a is diagonal but p† ≠ p"));
            }
        }
    }
    if fixed == 0 {
        failures.push("no case with diagonal a".into());
    }
    verdict(failures, format!("6 parabolics, {fixed} fixed by the construction"))
}

// ------------------------------------------------------------ induction

fn binomial(n: usize, k: usize) -> usize {
    (0..k).fold(1, |acc, i| acc * (n - i) / (i + 1))
}

fn induction_battery() -> Outcome {
    let mut rng = ChaCha8Rng::seed_from_u64(SEED ^ 9);
    let mut failures = Vec::new();
    let mut modules = Vec::new();
    for (d, degree) in [(2usize, 6usize), (3, 4)] {
        let real: RealStructure = "sl(inf;R)".parse()?;
        let p = RealParabolic::from_members(real, d, minimal_members(&real, d))?;
        let man = man_decompose(&p)?;
        let sigma: Vec<Q> = (0..man.a.dim()).map(|_| Q::new(rng.gen_range(-5..=5), rng.gen_range(1..=3))).collect();
        let module = InducedModule::new(&man, &CharacterSpec::trivial(sigma), degree)?;
        let r = module.neg.len();
        let expect: Vec<usize> = (0..=degree).map(|k| binomial(k + r - 1, k)).collect();
        if module.graded_dims() != expect {
            failures.push(format!("sl({d}): graded dims {:?}, expected {expect:?}", module.graded_dims()));
        }
        let gens = module.generators();
        for x in &gens {
            for y in &gens {
                if !module.check_commutation(x, y)? {
                    failures.push(format!("sl({d}): commutation fails"));
                }
            }
        }
        modules.push(module);
    }
    for case in 0..200 {
        let module = &modules[case % 2];
        let xi = module.p.iter().fold(Mat::zeros(module.p[0].rows(), module.p[0].rows()), |acc, b| {
            acc.add(&b.scale(&Qi::from_i64(rng.gen_range(-2..=2))))
        });
        let len = rng.gen_range(0..module.degree);
        let word: Vec<usize> = (0..len).map(|_| rng.gen_range(0..module.neg.len())).collect();
        if !module.check_ad_twist(&xi, &word, 0)? {
            failures.push(format!("case {case}: Ad-twist fails on word {word:?}"));
        }
    }
    verdict(failures, "2 modules, 200 twist cases".into())
}

/// A rational unitary matrix by the Cayley transform of a skew-hermitian one.
pub fn cayley_unitary(rng: &mut ChaCha8Rng, n: usize) -> Mat<Qi> {
    let a = gaussian_mat(rng, n, 2);
    let s = a.sub(&a.adjoint());
    let id = Mat::identity(n);
    id.sub(&s).mul(&id.add(&s).inverse().expect("1 + S is invertible for skew-hermitian S"))
}

fn character_battery() -> Outcome {
    let mut rng = ChaCha8Rng::seed_from_u64(SEED ^ 11);
    let mut failures = Vec::new();
    for case in 0..100 {
        let u = cayley_unitary(&mut rng, 4);
        let diag: Vec<Qi> = (0..4).map(|_| Qi::real(Q::new(rng.gen_range(0..=4), 4))).collect();
        let b = u.mul(&Mat::diag(&diag)).mul(&u.adjoint());
        FactorRepData::operator(b.clone())?;
        let x = gaussian_mat(&mut rng, 4, 3);
        let m = Mat::identity(4).sub(&b).add(&b.mul(&x));
        if psi_b(&b, &x)? != leibniz(&m) {
            failures.push(format!("case {case}: ψ_B disagrees with the determinant"));
        }
    }
    let seq = |xs: &[(i64, i64)]| -> BTreeMap<i64, Q> { xs.iter().map(|&(k, c)| (k, Q::from(c))).collect() };
    if !voiculescu_check(&seq(&[(0, 1)]), 4).accepted() {
        failures.push("δ₀ rejected".into());
    }
    if voiculescu_check(&seq(&[(0, 1), (1, 1)]), 4).accepted() {
        failures.push("Σc = 2 accepted".into());
    }
    if voiculescu_check(&seq(&[(0, 2), (1, -1)]), 4).accepted() {
        failures.push("(2, −1) accepted".into());
    }
    verdict(failures, "100 determinants, 3 sequences".into())
}

/// Determinant by the permutation expansion.
pub fn leibniz<F: Field>(m: &Mat<F>) -> F {
    fn perms(n: usize) -> Vec<(Vec<usize>, bool)> {
        if n == 0 {
            return vec![(Vec::new(), true)];
        }
        let mut out = Vec::new();
        for (p, even) in perms(n - 1) {
            for at in 0..n {
                let mut q = p.clone();
                q.insert(at, n - 1);
                // Inserting at `at` passes over `n − 1 − at` entries.
                out.push((q, even == (n - 1 - at).is_multiple_of(2)));
            }
        }
        out
    }
    let n = m.rows();
    perms(n).into_iter().fold(F::zero(), |acc, (p, even)| {
        let t = (0..n).fold(F::one(), |t, i| t.mul(m.get(i, p[i])));
        if even {
            acc.add(&t)
        } else {
            acc.sub(&t)
        }
    })
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn partitions_counted() {
        assert_eq!(ordered_partitions(3).len(), 13);
        assert_eq!(ordered_partitions(5).len(), 541);
    }

    #[test]
    fn leibniz_small() {
        let m: Mat<Q> = Mat::from_ints(&[&[1, 2, 0], &[3, 4, 1], &[0, 5, 6]]);
        assert_eq!(leibniz(&m), m.det().unwrap());
    }

    #[test]
    fn minimal_members_shapes() {
        let su: RealStructure = "su(1,inf)".parse().unwrap();
        assert_eq!(minimal_members(&su, 4), vec![vec![0], vec![0, 2, 3]]);
        let sp: RealStructure = "sp(inf;R)".parse().unwrap();
        assert_eq!(minimal_members(&sp, 4), vec![vec![0], vec![0, 2], vec![0, 2, 3]]);
        let sl: RealStructure = "sl(inf;R)".parse().unwrap();
        assert_eq!(minimal_members(&sl, 3), vec![vec![0], vec![0, 1]]);
    }

    #[test]
    fn unknown_suite() {
        assert!(run_suite("nope").is_err());
    }
}
