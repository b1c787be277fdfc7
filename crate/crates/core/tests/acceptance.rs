//! The ten acceptance criteria. Each prints one line and counts toward the
//! exit status; oracles are computed here, independently of the library
//! routine under test.

use std::collections::{BTreeMap, BTreeSet};
use std::time::{Duration, Instant};

use flagpar::chevalley::jordan_decompose;
use flagpar::flags::{is_selftaut, GenFlag, SelfTautFlag, TautCouple};
use flagpar::induce::{psi_b, unit, voiculescu_check, CharacterSpec, FactorRepData, InducedModule, Vector};
use flagpar::levi::{column_levi, dual_flag, levi_of, maximal_taut_couple};
use flagpar::parabolic::{
    example_rational_borel, so_flag_ambiguity, stabilizer_contains, stabilizer_truncation, truncation_space, Ambiguity,
};
use flagpar::realform::{construct_dagger, man_decompose, theta, ManDecomp, RealParabolic};
use flagpar::{
    Ambient, CutSet, DualSystem, Field, FinOp, FormKind, Index, IndexDomain, LeviBlock, LeviDatum, Mat, MatSpace,
    ParabolicDesc, Q, Qi, RealStructure, Ring, Scalar, Side, Window,
};
use rand::seq::SliceRandom;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

type Outcome = Result<String, String>;

/// Real form, window, flag members and expected (dim m, dim a, dim n).
type ManCase = (&'static str, usize, Vec<Vec<usize>>, (usize, usize, usize));

/// Name, check and runtime budget in seconds.
type Criterion = (&'static str, fn() -> Outcome, u64);

fn fail<T>(msg: impl Into<String>) -> Result<T, String> {
    Err(msg.into())
}

fn lib<T>(r: flagpar::Result<T>) -> Result<T, String> {
    r.map_err(|e| format!("library error: {e}"))
}

fn nat(n: u64) -> Index {
    Index::Nat(n)
}

fn fin(xs: &[u64]) -> CutSet {
    let items: Vec<Index> = xs.iter().map(|&x| nat(x)).collect();
    CutSet::fin(IndexDomain::Nat, &items).unwrap()
}

fn cut(s: &str) -> CutSet {
    CutSet::parse(s, IndexDomain::Nat).unwrap()
}

fn gl_parabolic(sys: &DualSystem, chain: &[CutSet]) -> ParabolicDesc {
    let mut ms = chain.to_vec();
    ms.push(sys.universe());
    let v = GenFlag::from_chain(Side::V, sys.domain, &ms).unwrap();
    let w = dual_flag(sys, &v).unwrap();
    ParabolicDesc::from_couple(sys.clone(), TautCouple::new(v, w).unwrap()).unwrap()
}

fn q(n: i64) -> Q {
    Q::from(n)
}

fn qi(re: i64, im: i64) -> Qi {
    Qi::new(q(re), q(im))
}

fn gaussian_mat(rng: &mut ChaCha8Rng, n: usize, r: i64) -> Mat<Qi> {
    let rows = (0..n).map(|_| (0..n).map(|_| qi(rng.gen_range(-r..=r), rng.gen_range(-r..=r))).collect()).collect();
    Mat::from_rows(rows).unwrap()
}

/// All ordered set partitions of `items`.
fn ordered_partitions(items: &[u64]) -> Vec<Vec<Vec<u64>>> {
    if items.is_empty() {
        return vec![Vec::new()];
    }
    let mut out = Vec::new();
    let k = items.len();
    for mask in 1u32..(1 << k) {
        let first: Vec<u64> = (0..k).filter(|i| mask >> i & 1 == 1).map(|i| items[i]).collect();
        let rest: Vec<u64> = (0..k).filter(|i| mask >> i & 1 == 0).map(|i| items[i]).collect();
        for mut tail in ordered_partitions(&rest) {
            tail.insert(0, first.clone());
            out.push(tail);
        }
    }
    out
}

// ------------------------------------------------------------ 1

/// `v_i ⊗ w_j` moves `v_j` to `v_i`; it preserves the chain of unions of
/// the blocks iff the block of `i` comes no later than the block of `j`.
/// The last block also holds every index beyond the window.
fn block_oracle(part: &[Vec<u64>], op: &FinOp) -> bool {
    let block = |i: &Index| -> usize {
        let Index::Nat(n) = i else { unreachable!() };
        part[..part.len() - 1].iter().position(|b| b.contains(n)).unwrap_or(part.len() - 1)
    };
    op.coeffs().keys().all(|(i, j)| block(i) <= block(j))
}

fn criterion_1() -> Outcome {
    let sys = DualSystem::delta(IndexDomain::Nat);
    let mut rng = ChaCha8Rng::seed_from_u64(1);
    let mut count = 0;
    for n in 1..=5u64 {
        let mut parts = ordered_partitions(&(1..=n).collect::<Vec<_>>());
        parts.shuffle(&mut rng);
        parts.truncate(32);
        let w = Window::nat(n);
        for part in &parts {
            let mut chain = Vec::new();
            let mut acc = Vec::new();
            for b in &part[..part.len() - 1] {
                acc.extend(b);
                chain.push(fin(&acc));
            }
            let p = gl_parabolic(&sys, &chain);
            let t = lib(stabilizer_truncation(&p, &w))?;
            let mut ops = Vec::new();
            for i in 1..=n {
                for j in 1..=n {
                    ops.push(sys.unit_op(nat(i), nat(j)).unwrap());
                }
            }
            for _ in 0..6 {
                let mut op = sys.zero_op();
                for _ in 0..3 {
                    let u = sys.unit_op(nat(rng.gen_range(1..=n)), nat(rng.gen_range(1..=n))).unwrap();
                    op = op.add(&u.scale(&Scalar::from(rng.gen_range(-2i64..=2))));
                }
                ops.push(op);
            }
            for op in &ops {
                let direct = lib(stabilizer_contains(op, &p))?;
                let span = lib(t.contains(&sys, op))?;
                let oracle = block_oracle(part, op);
                if direct != span || direct != oracle {
                    return fail(format!("flag {part:?}, {op:?}: direct {direct}, span {span}, oracle {oracle}"));
                }
                count += 1;
            }
        }
    }
    Ok(format!("{count} operators over flags on windows 1..5"))
}

// ------------------------------------------------------------ 2

fn criterion_2() -> Outcome {
    let sys = DualSystem { rank: Some(4), ..DualSystem::delta(IndexDomain::Nat) };
    let w = Window::nat(4);
    let mut spaces: Vec<MatSpace<Q>> = Vec::new();
    for mask in 0u32..8 {
        let cuts: Vec<u64> = (1..=3).filter(|k| mask >> (k - 1) & 1 == 1).collect();
        let chain: Vec<CutSet> = cuts.iter().map(|&k| fin(&(1..=k).collect::<Vec<_>>())).collect();
        let s = lib(truncation_space(&gl_parabolic(&sys, &chain), &w))?;
        // Block upper triangular matrices for the composition given by `cuts`.
        let block = |i: usize| cuts.iter().filter(|&&k| (i as u64) >= k).count();
        let mut units = Vec::new();
        for i in 0..4 {
            for j in 0..4 {
                if block(i) <= block(j) {
                    units.push(Mat::unit(4, i, j));
                }
            }
        }
        let oracle = MatSpace::span(4, &units);
        if s != oracle {
            return fail(format!("cuts {cuts:?}: dim {} vs block oracle {}", s.dim(), oracle.dim()));
        }
        let borel_in = (0..4).all(|i| (i..4).all(|j| s.contains(&Mat::unit(4, i, j))));
        if !borel_in {
            return fail(format!("cuts {cuts:?}: Borel not contained"));
        }
        if !spaces.contains(&s) {
            spaces.push(s);
        }
    }
    if spaces.len() != 8 {
        return fail(format!("{} distinct stabilizers", spaces.len()));
    }
    Ok("8 distinct stabilizers, each containing the Borel".into())
}

// ------------------------------------------------------------ 3

fn bracket_span(a: &[Mat<Q>], b: &[Mat<Q>], n: usize) -> Vec<Mat<Q>> {
    let mut rows: Vec<Vec<Q>> = Vec::new();
    for x in a {
        for y in b {
            let c = x.mul(y).sub(&y.mul(x));
            rows.push(c.entries().to_vec());
        }
    }
    if rows.is_empty() {
        return Vec::new();
    }
    let m = Mat::from_rows(rows).unwrap();
    let (r, piv) = m.rref();
    (0..piv.len()).map(|k| Mat::from_fn(n, n, |i, j| r.get(k, i * n + j).clone())).collect()
}

fn criterion_3() -> Outcome {
    let p = example_rational_borel();
    let mut rng = ChaCha8Rng::seed_from_u64(3);
    for case in 0..20 {
        let size = rng.gen_range(1..=8usize);
        let mut pts = BTreeSet::new();
        while pts.len() < size {
            let (a, b) = (rng.gen_range(-30i64..=30), rng.gen_range(1i64..=7));
            pts.insert(Q::new(a, b));
        }
        let qs: Vec<Q> = pts.into_iter().collect();
        let idx: Vec<Index> = qs.iter().map(|x| Index::Rat(x.clone())).collect();
        let w = Window::from_indices(IndexDomain::Rat, idx).unwrap();
        let t = lib(stabilizer_truncation(&p, &w))?;
        let k = qs.len();
        if t.support.len() != k || t.coeffs.len() != k * (k + 1) / 2 {
            return fail(format!("case {case}: dim {} on {k} indices", t.coeffs.len()));
        }
        for c in &t.coeffs {
            let mut trace = Q::zero();
            for a in 0..k {
                for b in 0..k {
                    let x = c.get(a, b);
                    if x.is_zero() {
                        continue;
                    }
                    // tr(v_q ⊗ w_r) = <v_q, w_r> = [q > r].
                    if qs[a] > qs[b] {
                        trace = &trace + x;
                    }
                }
            }
            let outside = (0..k).any(|a| (0..k).any(|b| qs[a] > qs[b] && !c.get(a, b).is_zero()));
            if outside {
                return fail(format!("case {case}: generator outside span{{v_q ⊗ w_r : q ≤ r}}"));
            }
            if !trace.is_zero() {
                return fail(format!("case {case}: nonzero trace"));
            }
        }
        let mut series = t.algebra.basis().into_iter().map(|m| m.map(|x: &Q| x.clone())).collect::<Vec<_>>();
        let n = t.window.len();
        let mut steps = 0;
        while !series.is_empty() {
            steps += 1;
            if steps > 2 * k + 2 {
                return fail(format!("case {case}: derived series does not terminate"));
            }
            series = bracket_span(&series, &series, n);
        }
    }
    Ok("20 rational windows of size at most 8".into())
}

// ------------------------------------------------------------ 4

fn isotropic_chains(k: u64) -> Vec<Vec<Vec<u64>>> {
    // Aligned isotropic sets pick at most one vector of each pair (2i−1, 2i).
    let mut sets: Vec<Vec<u64>> = vec![Vec::new()];
    for i in 1..=k {
        let mut next = Vec::new();
        for s in &sets {
            next.push(s.clone());
            for x in [2 * i - 1, 2 * i] {
                let mut t = s.clone();
                t.push(x);
                next.push(t);
            }
        }
        sets = next;
    }
    sets.retain(|s| !s.is_empty());
    let mut chains: Vec<Vec<Vec<u64>>> = vec![Vec::new()];
    let mut at = 0;
    while at < chains.len() {
        let c = chains[at].clone();
        for s in &sets {
            let grows = c.last().is_none_or(|l| l.len() < s.len() && l.iter().all(|x| s.contains(x)));
            if grows {
                let mut d = c.clone();
                d.push(s.clone());
                chains.push(d);
            }
        }
        at += 1;
    }
    chains
}

fn perp(s: &[u64], n: u64) -> Vec<u64> {
    let partner = |x: u64| if x % 2 == 1 { x + 1 } else { x - 1 };
    (1..=n).filter(|&x| !s.iter().any(|&y| partner(y) == x)).collect()
}

/// `so(6)` for `G = ⊕ [[0,1],[1,0]]`, intersected with the stabilizer of every member.
fn so6_oracle(members: &[Vec<u64>]) -> MatSpace<Q> {
    let n = 6;
    let g = |i: usize, j: usize| -> i64 { i64::from(i / 2 == j / 2 && i != j) };
    let mut rows: Vec<Vec<Q>> = Vec::new();
    for a in 0..n {
        for b in 0..n {
            // (XᵀG + GX)_ab = Σ_k X_ka G_kb + G_ak X_kb
            let mut r = vec![Q::zero(); n * n];
            for k in 0..n {
                r[k * n + a] = &r[k * n + a] + &q(g(k, b));
                r[k * n + b] = &r[k * n + b] + &q(g(a, k));
            }
            rows.push(r);
        }
    }
    for m in members {
        for &j in m {
            for i in 1..=n as u64 {
                if !m.contains(&i) {
                    let mut r = vec![Q::zero(); n * n];
                    r[(i as usize - 1) * n + j as usize - 1] = Q::one();
                    rows.push(r);
                }
            }
        }
    }
    let basis = Mat::from_rows(rows).unwrap().nullspace();
    let mats: Vec<Mat<Q>> = basis.iter().map(|v| Mat::from_fn(n, n, |i, j| v[i * n + j].clone())).collect();
    MatSpace::span(n, &mats)
}

fn criterion_4() -> Outcome {
    let sys = lib(DualSystem::form(FormKind::Symmetric, Some(3), Some(6)))?;
    let w = Window::nat(6);
    let flag = GenFlag::from_chain(Side::V, IndexDomain::Nat, &[fin(&[1, 3]), fin(&[1, 3, 5, 6]), sys.universe()]).unwrap();
    let st = lib(SelfTautFlag::new(&sys, flag, 3))?;
    let Ambiguity::Triple(a, b, c) = lib(so_flag_ambiguity(&sys, &st))? else {
        return fail("so_flag_ambiguity reports a unique flag");
    };
    let lib_space = |f: &GenFlag| -> Result<MatSpace<Q>, String> {
        let st = lib(SelfTautFlag::new(&sys, f.clone(), 3))?;
        lib(truncation_space(&lib(ParabolicDesc::from_selftaut(sys.clone(), st))?, &w))
    };
    let target = lib_space(&a)?;
    if lib_space(&b)? != target || lib_space(&c)? != target {
        return fail("the three flags have different truncated stabilizers");
    }
    let mut triple_members = Vec::new();
    for f in [&a, &b, &c] {
        let ms = flagpar::parabolic::finite_members(f).unwrap();
        let ms: Vec<Vec<u64>> = ms
            .iter()
            .filter(|m| !m.is_empty() && !m.is_full())
            .map(|m| m.elements_in(&w).unwrap().iter().map(|i| if let Index::Nat(n) = i { *n } else { 0 }).collect())
            .collect();
        triple_members.push(ms);
    }
    let oracle_target = so6_oracle(&triple_members[0]);
    if triple_members.iter().any(|m| so6_oracle(m) != oracle_target) {
        return fail("oracle stabilizers of the triple differ");
    }
    let mut flags: BTreeSet<Vec<Vec<u64>>> = BTreeSet::new();
    for chain in isotropic_chains(3) {
        let mut ms: Vec<Vec<u64>> = chain.clone();
        for s in chain.iter().rev() {
            let p = perp(s, 6);
            if !ms.contains(&p) && p.len() < 6 {
                ms.push(p);
            }
        }
        ms.sort_by_key(Vec::len);
        flags.insert(ms);
    }
    let (mut lib_hits, mut oracle_hits) = (0, 0);
    for ms in &flags {
        let mut chain: Vec<CutSet> = ms.iter().map(|m| fin(m)).collect();
        chain.push(sys.universe());
        let f = GenFlag::from_chain(Side::V, IndexDomain::Nat, &chain).unwrap();
        let st = lib(SelfTautFlag::new(&sys, f.clone(), 3))?;
        if !lib(is_selftaut(&sys, &st, 3))?.holds {
            return fail(format!("aligned flag {ms:?} is not self-taut"));
        }
        let s = lib_space(&f)?;
        let o = so6_oracle(ms);
        if s.dim() != o.dim() {
            return fail(format!("flag {ms:?}: dim {} vs oracle {}", s.dim(), o.dim()));
        }
        lib_hits += usize::from(s == target);
        oracle_hits += usize::from(o == oracle_target);
    }
    if lib_hits != 3 || oracle_hits != 3 {
        return fail(format!("{lib_hits} flags (oracle {oracle_hits}) share the stabilizer"));
    }
    Ok(format!("exactly 3 of {} aligned self-taut flags share the stabilizer", flags.len()))
}

// ------------------------------------------------------------ 5

fn criterion_5() -> Outcome {
    let sys = DualSystem { ring: Ring::Gaussian, ..DualSystem::delta(IndexDomain::Nat) };
    let mut rng = ChaCha8Rng::seed_from_u64(5);
    let op_of = |idx: &[u64], m: &Mat<Qi>| -> FinOp {
        let mut op = sys.zero_op();
        for (a, &i) in idx.iter().enumerate() {
            for (b, &j) in idx.iter().enumerate() {
                if !m.get(a, b).is_zero() {
                    op = op.add(&sys.unit_op(nat(i), nat(j)).unwrap().scale(&Scalar::Gaussian(m.get(a, b).clone())));
                }
            }
        }
        op
    };
    let mat_of = |idx: &[u64], op: &FinOp| -> Mat<Qi> {
        Mat::from_fn(idx.len(), idx.len(), |a, b| op.coeff(&nat(idx[a]), &nat(idx[b])).to_qi().unwrap())
    };
    for case in 0..100 {
        let k = rng.gen_range(1..=5usize);
        let mut idx: Vec<u64> = (1..=12).collect();
        idx.shuffle(&mut rng);
        idx.truncate(k);
        idx.sort_unstable();
        // P J P⁻¹ with J in Jordan form over Q(i); the oracle is P D P⁻¹.
        let eigs = [qi(rng.gen_range(-2..=2), rng.gen_range(-2..=2)), qi(rng.gen_range(-2..=2), rng.gen_range(-2..=2))];
        let (mut j, mut d) = (Mat::zeros(k, k), Mat::zeros(k, k));
        let mut at = 0;
        while at < k {
            let len = rng.gen_range(1..=k - at);
            let lam = eigs[rng.gen_range(0..2)].clone();
            for t in at..at + len {
                j.set(t, t, lam.clone());
                d.set(t, t, lam.clone());
                if t + 1 < at + len {
                    j.set(t, t + 1, Qi::one());
                }
            }
            at += len;
        }
        let (p, pinv) = loop {
            let p = gaussian_mat(&mut rng, k, 2);
            if let Some(pi) = p.inverse() {
                break (p, pi);
            }
        };
        let m = p.mul(&j).mul(&pinv);
        let op = op_of(&idx, &m);
        let (ss, nil) = lib(jordan_decompose(&sys, &op))?;
        let (s, n) = (mat_of(&idx, &ss), mat_of(&idx, &nil));
        if ss.support().iter().chain(nil.support().iter()).any(|i| !idx.contains(&if let Index::Nat(x) = i { *x } else { 0 })) {
            return fail(format!("case {case}: parts leave the support"));
        }
        if s.add(&n) != m {
            return fail(format!("case {case}: ss + nil ≠ op"));
        }
        if s.mul(&n) != n.mul(&s) {
            return fail(format!("case {case}: parts do not commute"));
        }
        if !n.pow(k as u32).is_zero() {
            return fail(format!("case {case}: nil is not nilpotent"));
        }
        if s != p.mul(&d).mul(&pinv) {
            return fail(format!("case {case}: ss differs from P D P⁻¹"));
        }
        // Minimal polynomial of ss is squarefree: Π (ss − λ) over distinct λ vanishes.
        let distinct: BTreeSet<(String, String)> = (0..k).map(|t| {
            let c = d.get(t, t).coords();
            (c[0].to_string(), c[1].to_string())
        }).collect();
        let mut prod = Mat::identity(k);
        let mut seen = BTreeSet::new();
        for t in 0..k {
            let c = d.get(t, t).coords();
            if seen.insert((c[0].to_string(), c[1].to_string())) {
                prod = prod.mul(&s.sub(&Mat::identity(k).scale(d.get(t, t))));
            }
        }
        if !prod.is_zero() || seen.len() != distinct.len() {
            return fail(format!("case {case}: minimal polynomial of ss is not squarefree"));
        }
    }
    Ok("100 operators of support at most 5".into())
}

// ------------------------------------------------------------ 6

fn gl(xs: &[&str]) -> LeviDatum {
    LeviDatum::gl(xs.iter().map(|s| LeviBlock { x: cut(s), y: cut(s) }).collect())
}

fn formed(ambient: Ambient, blocks: &[(&str, &str)], z: Option<&str>) -> LeviDatum {
    LeviDatum {
        ambient,
        blocks: blocks.iter().map(|(x, y)| LeviBlock { x: cut(x), y: cut(y) }).collect(),
        column_family: None,
        z: z.map(cut),
    }
}

fn criterion_6() -> Outcome {
    let delta = DualSystem::delta(IndexDomain::Nat);
    let sp8 = lib(DualSystem::form(FormKind::Alternating, None, Some(8)))?;
    let sp = lib(DualSystem::form(FormKind::Alternating, None, None))?;
    let so8 = lib(DualSystem::form(FormKind::Symmetric, None, Some(8)))?;
    let so = lib(DualSystem::form(FormKind::Symmetric, Some(3), None))?;
    let catalog = vec![
        (delta.clone(), gl(&[])),
        (delta.clone(), gl(&["(fin 1 2)"])),
        (delta.clone(), gl(&["(fin 1 2)", "(fin 3 4)"])),
        (delta.clone(), gl(&["(fin 2 3)", "(ray ge 6)"])),
        (delta.clone(), gl(&["(fin 1 3 5)"])),
        (delta.clone(), gl(&["(full)"])),
        (DualSystem::delta(IndexDomain::ColPair), column_levi()),
        (sp8.clone(), formed(Ambient::Sp, &[("(fin 1 3)", "(fin 2 4)")], Some("(fin 7 8)"))),
        (sp8, formed(Ambient::Sp, &[("(fin 1 3)", "(fin 2 4)"), ("(fin 5 7)", "(fin 6 8)")], None)),
        (sp, formed(Ambient::Sp, &[("(fin 1 3)", "(fin 2 4)")], Some("(ray ge 5)"))),
        (so8, formed(Ambient::So, &[("(fin 1 3)", "(fin 2 4)")], Some("(fin 5 6 7 8)"))),
        (so, formed(Ambient::So, &[("(fin 1 3)", "(fin 2 4)")], Some("(ray ge 5)"))),
    ];
    for (k, (sys, l)) in catalog.iter().enumerate() {
        let p = lib(maximal_taut_couple(sys, l))?;
        let back = lib(levi_of(&p))?;
        if &back != l {
            return fail(format!("entry {k}: {l} came back as {back}"));
        }
        if l.ambient == Ambient::Gl && sys.domain == IndexDomain::Nat {
            // Each finite part of a block carries its sl: E_ab for a ≠ b inside X.
            let w = Window::nat(8);
            let t = lib(stabilizer_truncation(&p, &w))?;
            for b in &l.blocks {
                let xs = b.x.elements_in(&w).unwrap();
                for a in &xs {
                    for c in &xs {
                        if a != c && !lib(t.contains(sys, &sys.unit_op(a.clone(), c.clone()).unwrap()))? {
                            return fail(format!("entry {k}: E({a},{c}) missing from the parabolic"));
                        }
                    }
                }
            }
        }
    }
    Ok(format!("{} Levi data round trip block for block", catalog.len()))
}

// ------------------------------------------------------------ 7

fn commutes_into(a: &MatSpace<Qi>, b: &MatSpace<Qi>, target: Option<&MatSpace<Qi>>) -> bool {
    let bb = b.basis();
    a.basis().iter().all(|x| {
        bb.iter().all(|y| {
            let c = x.commutator(y);
            match target {
                None => c.is_zero(),
                Some(t) => t.contains(&c),
            }
        })
    })
}

fn check_man(man: &ManDecomp, dims: (usize, usize, usize), label: &str) -> Result<(), String> {
    if !commutes_into(&man.a, &man.a, None) {
        return fail(format!("{label}: a is not abelian"));
    }
    if !commutes_into(&man.m, &man.a, None) {
        return fail(format!("{label}: [m, a] ≠ 0"));
    }
    let ma = man.m.sum(&man.a);
    if !commutes_into(&ma, &man.n, Some(&man.n)) {
        return fail(format!("{label}: [m + a, n] not inside n"));
    }
    if man.m.dim() + man.a.dim() + man.n.dim() != man.p.dim() {
        return fail(format!("{label}: dimensions do not add up"));
    }
    if man.a.basis().iter().any(|x| theta(x) != x.neg()) || man.m.basis().iter().any(|x| &theta(x) != x) {
        return fail(format!("{label}: θ signs wrong on m or a"));
    }
    let got = (man.m.dim(), man.a.dim(), man.n.dim());
    if got != dims {
        return fail(format!("{label}: (m, a, n) = {got:?}, restricted roots give {dims:?}"));
    }
    Ok(())
}

fn criterion_7() -> Outcome {
    let mut cases: Vec<ManCase> = Vec::new();
    for n in 2..=5 {
        cases.push(("sl(inf;R)", n, (1..n).map(|k| (0..k).collect()).collect(), (0, n - 1, n * (n - 1) / 2)));
    }
    for n in 1..=4 {
        // Isotropic line e₀ of the pair (e₀, e₁) and its orthogonal.
        let perp: Vec<usize> = (0..=n).filter(|&c| c != 1).collect();
        let members = if n == 1 { vec![vec![0]] } else { vec![vec![0], perp] };
        cases.push(("su(1,inf)", n + 1, members, ((n - 1) * (n - 1), 1, 2 * n - 1)));
    }
    for n in 1..=3 {
        // Isotropic flag e₀ ⊂ e₀,e₂ ⊂ … up to a Lagrangian, then the orthogonals.
        let mut members: Vec<Vec<usize>> = (1..=n).map(|k| (0..k).map(|i| 2 * i).collect()).collect();
        for k in (1..n).rev() {
            members.push((0..2 * n).filter(|&c| !(c % 2 == 1 && c < 2 * k)).collect());
        }
        cases.push(("sp(inf;R)", 2 * n, members, (0, n, n * n)));
    }
    for (form, d, members, dims) in &cases {
        let real: RealStructure = lib(form.parse())?;
        let p = lib(RealParabolic::from_members(real, *d, members.clone()))?;
        let man = lib(man_decompose(&p))?;
        check_man(&man, *dims, &format!("{form} at window {d}"))?;
    }
    Ok(format!("{} real forms match the restricted-root dimensions", cases.len()))
}

// ------------------------------------------------------------ 8

fn criterion_8() -> Outcome {
    let cases: Vec<(&str, usize, Vec<Vec<usize>>)> = vec![
        ("su(1,inf)", 3, vec![vec![0], vec![0, 2]]),
        ("su(1,inf)", 4, vec![vec![0], vec![0, 2, 3]]),
        ("u(1,inf)", 3, vec![vec![0], vec![0, 2]]),
        ("so(1,inf)", 3, vec![vec![0], vec![0, 2]]),
        ("sp(1,inf)", 3, vec![vec![0], vec![0, 2]]),
        ("su(2,inf)", 4, vec![vec![0], vec![0, 2], vec![0, 2, 3]]),
    ];
    let mut fixed = 0;
    for (form, d, members) in &cases {
        let label = format!("{form} at window {d}");
        let real: RealStructure = lib(form.parse())?;
        let p = lib(RealParabolic::from_members(real, *d, members.clone()))?;
        let dg = lib(construct_dagger(&p))?;
        let man = lib(man_decompose(&p))?;
        let man_dag = lib(man_decompose(&dg.parabolic))?;
        if dg.m != man.m || man_dag.m != man.m {
            return fail(format!("{label}: m† ≠ m"));
        }
        let g = lib(real.algebra(*d))?;
        let z = g.centralizer_of(&man.m.sum(&man.a));
        if man.m.sum(&man.a) != dg.l_tilde.sum(&z).intersect(&g) {
            return fail(format!("{label}: m + a ≠ l~ + z"));
        }
        // a is diagonal in the standard basis exactly when it is the standard a†.
        let diagonal = man.a.basis().iter().all(|x| {
            (0..x.rows()).all(|i| (0..x.cols()).all(|j| i == j || x.get(i, j).is_zero()))
        });
        if diagonal {
            fixed += 1;
            if dg.parabolic.algebra != p.algebra {
                return fail(format!("{label}: diagonal a but p† ≠ p"));
            }
        }
    }
    if fixed == 0 {
        return fail("no case with diagonal a");
    }
    Ok(format!("6 hermitian parabolics, {fixed} with diagonal a and p† = p"))
}

// ------------------------------------------------------------ 9

fn act_word(module: &InducedModule, word: &[Mat<Qi>], e: usize) -> Result<Vector, String> {
    let mut v = unit(Vec::new(), e);
    for x in word.iter().rev() {
        v = lib(module.act(x, &v))?;
    }
    Ok(v)
}

fn add(a: &Vector, b: &Vector) -> Vector {
    let mut out = a.clone();
    for (t, x) in b {
        let e = out.entry(t.clone()).or_insert_with(Qi::zero);
        *e = e.add(x);
        if e.is_zero() {
            out.remove(t);
        }
    }
    out
}

fn sl_module(d: usize, sigma: Vec<Q>, degree: usize) -> Result<InducedModule, String> {
    let real: RealStructure = lib("sl(inf;R)".parse())?;
    let members = (1..d).map(|k| (0..k).collect()).collect();
    let p = lib(RealParabolic::from_members(real, d, members))?;
    let man = lib(man_decompose(&p))?;
    lib(InducedModule::new(&man, &CharacterSpec::trivial(sigma), degree))
}

fn criterion_9() -> Outcome {
    let mut rng = ChaCha8Rng::seed_from_u64(9);
    // sl(2) Verma pattern: E F^k v = k(λ − k + 1) F^{k−1} v for a normalized triple.
    let m2 = sl_module(2, vec![Q::new(3, 2)], 6)?;
    let f = m2.neg[0].clone();
    // f = c·E₂₁, so e = E₁₂/c and h = [e, f] form a standard triple.
    let c = f.get(1, 0).clone();
    if f != Mat::unit(2, 1, 0).scale(&c) {
        return fail("n⁻ of sl(2) is not spanned by E₂₁");
    }
    let e = Mat::unit(2, 0, 1).scale(&Qi::one().div(&c).unwrap());
    let h = e.commutator(&f);
    if h.commutator(&e) != e.scale(&Qi::from_i64(2)) || h.commutator(&f) != f.scale(&Qi::from_i64(-2)) {
        return fail("could not normalize the sl(2) triple");
    }
    let lam = lib(m2.act(&h, &unit(Vec::new(), 0)))?[&(Vec::new(), 0)].clone();
    for k in 1..=6usize {
        let got = lib(m2.act(&e, &unit(vec![0; k], 0)))?;
        let coef = Qi::from_i64(k as i64).mul(&lam.sub(&Qi::from_i64(k as i64 - 1)));
        let mut expect = Vector::new();
        if !coef.is_zero() {
            expect.insert((vec![0; k - 1], 0), coef);
        }
        if got != expect {
            return fail(format!("sl(2): E F^{k} v does not match the Verma formula"));
        }
    }
    let m3 = sl_module(3, vec![Q::new(1, 3), Q::new(-2, 1)], 5)?;
    for (module, dim) in [(&m2, 2usize), (&m3, 3)] {
        let r = dim * (dim - 1) / 2;
        let monomials: Vec<usize> = (0..=module.degree).map(|k| (1..=k).fold(1, |acc, i| acc * (r - 1 + i) / i)).collect();
        if module.graded_dims() != monomials {
            return fail(format!("sl({dim}): graded dims {:?} vs monomial counts {monomials:?}", module.graded_dims()));
        }
        let gens = module.generators();
        let mats: Vec<_> = gens.iter().map(|x| lib(module.action_matrix(x)).map(|a| a.matrix)).collect::<Result<_, _>>()?;
        let interior: Vec<usize> = (0..module.basis.len()).filter(|&k| module.basis[k].0.len() + 2 <= module.degree).collect();
        for (a, x) in gens.iter().enumerate() {
            for (b, y) in gens.iter().enumerate() {
                let lhs = mats[a].mul(&mats[b]).sub(&mats[b].mul(&mats[a]));
                let rhs = lib(module.action_matrix(&x.commutator(y)))?.matrix;
                if interior.iter().any(|&k| (0..lhs.rows()).any(|i| lhs.get(i, k) != rhs.get(i, k))) {
                    return fail(format!("sl({dim}): commutation identity fails for generators {a}, {b}"));
                }
            }
        }
    }
    // Ad-twist: ξ·(y₁…y_k ⊗ e) = Σ_t y₁…[ξ, y_t]…y_k ⊗ e + y₁…y_k ⊗ dη(ξ)e.
    for case in 0..200 {
        let module = if case % 2 == 0 { &m2 } else { &m3 };
        let n = module.p[0].rows();
        let xi = module.p.iter().fold(Mat::zeros(n, n), |acc, b| acc.add(&b.scale(&Qi::from_i64(rng.gen_range(-3..=3)))));
        let len = rng.gen_range(0..=4usize);
        let mut letters: Vec<usize> = (0..len).map(|_| rng.gen_range(0..module.neg.len())).collect();
        letters.sort_unstable();
        let word: Vec<Mat<Qi>> = letters.iter().map(|&i| module.neg[i].clone()).collect();
        let mut xw = vec![xi.clone()];
        xw.extend(word.iter().cloned());
        let lhs = act_word(module, &xw, 0)?;
        let mut rhs = Vector::new();
        for t in 0..word.len() {
            let mut w2 = word.clone();
            w2[t] = xi.commutator(&word[t]);
            rhs = add(&rhs, &act_word(module, &w2, 0)?);
        }
        let eta = lib(flagpar::induce::p_character(
            &lib(man_decompose(&lib(RealParabolic::from_members(
                lib("sl(inf;R)".parse())?,
                n,
                (1..n).map(|k| (0..k).collect()).collect(),
            ))?))?,
            &CharacterSpec::trivial(if n == 2 { vec![Q::new(3, 2)] } else { vec![Q::new(1, 3), Q::new(-2, 1)] }),
            &xi,
        ))?;
        let base = act_word(module, &word, 0)?;
        let scaled: Vector = base.iter().map(|(t, x)| (t.clone(), x.mul(eta.get(0, 0)))).filter(|(_, x)| !x.is_zero()).collect();
        rhs = add(&rhs, &scaled);
        if lhs != rhs {
            return fail(format!("case {case}: Ad-twist identity fails for word {letters:?}"));
        }
        if !lib(module.check_ad_twist(&xi, &letters, 0))? {
            return fail(format!("case {case}: library twist check disagrees"));
        }
    }
    Ok("Verma pattern, graded dims, commutation and 200 twist cases".into())
}

// ------------------------------------------------------------ 10

fn leibniz(m: &Mat<Qi>) -> Qi {
    let n = m.rows();
    let mut total = Qi::zero();
    let mut perm: Vec<usize> = (0..n).collect();
    // Heap's algorithm, tracking the sign.
    fn heap(k: usize, perm: &mut Vec<usize>, sign: &mut bool, m: &Mat<Qi>, total: &mut Qi) {
        if k <= 1 {
            let t = (0..perm.len()).fold(Qi::one(), |t, i| t.mul(m.get(i, perm[i])));
            *total = if *sign { total.add(&t) } else { total.sub(&t) };
            return;
        }
        for i in 0..k - 1 {
            heap(k - 1, perm, sign, m, total);
            let j = if k.is_multiple_of(2) { i } else { 0 };
            perm.swap(j, k - 1);
            *sign = !*sign;
        }
        heap(k - 1, perm, sign, m, total);
    }
    let mut sign = true;
    heap(n, &mut perm, &mut sign, m, &mut total);
    total
}

fn criterion_10() -> Outcome {
    let mut rng = ChaCha8Rng::seed_from_u64(10);
    for case in 0..100 {
        // B = U diag(b) U* with U a rational unitary (Cayley transform) and 0 ≤ b ≤ 1.
        let a = gaussian_mat(&mut rng, 4, 2);
        let s = a.sub(&a.adjoint());
        let id: Mat<Qi> = Mat::identity(4);
        let u = id.sub(&s).mul(&id.add(&s).inverse().unwrap());
        if u.mul(&u.adjoint()) != id {
            return fail("Cayley transform is not unitary");
        }
        let diag: Vec<Qi> = (0..4).map(|_| Qi::real(Q::new(rng.gen_range(0..=5), 5))).collect();
        let b = u.mul(&Mat::diag(&diag)).mul(&u.adjoint());
        lib(FactorRepData::operator(b.clone()))?;
        let x = gaussian_mat(&mut rng, 4, 3);
        let direct = leibniz(&id.sub(&b).add(&b.mul(&x)));
        if lib(psi_b(&b, &x))? != direct {
            return fail(format!("case {case}: ψ_B differs from the direct determinant"));
        }
    }
    let seq = |xs: &[(i64, i64)]| -> BTreeMap<i64, Q> { xs.iter().map(|&(k, c)| (k, q(c))).collect() };
    if !voiculescu_check(&seq(&[(0, 1)]), 4).accepted() {
        return fail("δ₀ rejected");
    }
    if voiculescu_check(&seq(&[(0, 1), (1, 1)]), 4).accepted() {
        return fail("sequence with Σc = 2 accepted");
    }
    let r = voiculescu_check(&seq(&[(0, 2), (1, -1)]), 4);
    if r.accepted() || r.witness.is_none() {
        return fail("sequence c₀ = 2, c₁ = −1 accepted");
    }
    Ok("100 determinants; δ₀ accepted, both counterexamples rejected".into())
}

fn main() {
    let criteria: [Criterion; 10] = [
        ("oracle equivalence", criterion_1, 60),
        ("gl(4) parabolic count", criterion_2, 10),
        ("rational Borel battery", criterion_3, 30),
        ("so(6) trichotomy", criterion_4, 120),
        ("Jordan-Chevalley", criterion_5, 60),
        ("Levi round trip", criterion_6, 60),
        ("MAN certification", criterion_7, 120),
        ("dagger certificate", criterion_8, 120),
        ("induction fidelity", criterion_9, 120),
        ("psi_B and Voiculescu", criterion_10, 10),
    ];
    let filter: Vec<String> = std::env::args().skip(1).filter(|a| !a.starts_with('-')).collect();
    let mut failed = 0;
    for (k, (name, run, budget)) in criteria.iter().enumerate() {
        if !filter.is_empty() && !filter.iter().any(|f| name.contains(f.as_str())) {
            continue;
        }
        let start = Instant::now();
        let out = run();
        let took = start.elapsed();
        let out = match out {
            Ok(msg) if took > Duration::from_secs(*budget) => Err(format!("{msg}, but took {took:.1?} (budget {budget} s)")),
            other => other,
        };
        match out {
            Ok(msg) => println!("criterion {:>2} PASS {name}: {msg} ({took:.1?})", k + 1),
            Err(msg) => {
                failed += 1;
                println!("criterion {:>2} FAIL {name}: {msg} ({took:.1?})", k + 1);
            }
        }
    }
    if failed > 0 {
        std::process::exit(1);
    }
}
