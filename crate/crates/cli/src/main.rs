use std::collections::BTreeMap;
use std::path::Path;
use std::process::ExitCode;

use anyhow::{anyhow, bail, Context, Result};
use clap::{Args, Parser, Subcommand};

use flagpar::chevalley::chevalley_truncation;
use flagpar::flags::level_window;
use flagpar::induce::{psi_b, voiculescu_check, CharacterSpec, FactorRepData, InducedModule};
use flagpar::levi::levi_of;
use flagpar::parabolic::stabilizer_truncation;
use flagpar::realform::{man_decompose, real_parabolic, RealParabolic};
use flagpar::report::{Emit, Record, Report};
use flagpar::scenario::{run_checks, run_scenario, CheckKind, Scenario};
use flagpar::suite::{minimal_members, run_suite};
use flagpar::{Field, Mat, MatSpace, Q, Qi, RealStructure};

const BUNDLED: [(&str, &str); 3] = [
    ("example_2_4", include_str!("../../../scenarios/example_2_4.scn")),
    ("example_2_7", include_str!("../../../scenarios/example_2_7.scn")),
    ("hermitian_flag", include_str!("../../../scenarios/hermitian_flag.scn")),
];

#[derive(Parser)]
#[command(name = "flagpar", version, about = "Parabolic subalgebras of finitary Lie algebras, checked exactly")]
struct Cli {
    /// Output mode: human-readable text or tab-separated records.
    #[arg(long, global = true, default_value = "text")]
    emit: Emit,
    #[command(subcommand)]
    cmd: Cmd,
}

#[derive(Args)]
struct ScenarioArg {
    /// Scenario file, or the name of a bundled scenario.
    #[arg(long, default_value = "example_2_4")]
    scenario: String,
}

#[derive(Subcommand)]
enum Cmd {
    /// Basis of the stabilizer truncated to a level window.
    Stabilizer {
        #[command(flatten)]
        scenario: ScenarioArg,
        #[arg(long)]
        level: u64,
    },
    /// One structural verdict over the scenario's levels.
    Check {
        #[command(flatten)]
        scenario: ScenarioArg,
        #[arg(long, group = "kind", required = true)]
        taut: bool,
        #[arg(long, group = "kind")]
        semiclosed: bool,
        #[arg(long, group = "kind")]
        solvable: bool,
        /// Check a single level instead of the scenario's range.
        #[arg(long)]
        level: Option<u64>,
    },
    /// Levi component block by block.
    Levi {
        #[command(flatten)]
        scenario: ScenarioArg,
    },
    /// Bases of p_nil, l and t at a level.
    Chevalley {
        #[command(flatten)]
        scenario: ScenarioArg,
        #[arg(long)]
        level: u64,
    },
    /// Langlands decomposition of the real points at each window.
    Man {
        /// Real form such as `su(1,inf)` or `sl(inf;R)`; defaults to the scenario's.
        #[arg(long)]
        form: Option<String>,
        #[command(flatten)]
        scenario: ScenarioArg,
        /// Window range `LO..HI`.
        #[arg(long, default_value = "2..4")]
        levels: String,
    },
    /// Action matrices of an induced module truncated by degree.
    Induce {
        #[arg(long, default_value = "sl")]
        form: String,
        #[arg(long, default_value_t = 3)]
        window: usize,
        #[arg(long, default_value_t = 2)]
        degree: usize,
        /// Comma-separated values of σ on a.
        #[arg(long, value_delimiter = ',', allow_hyphen_values = true)]
        sigma: Vec<String>,
    },
    /// ψ_B(x) = det((1 − B) + Bx) for 0 ≤ B ≤ 1.
    PsiB {
        /// Matrix with rows separated by `;` and entries by `,`, e.g. `1/2,0;0,1`.
        #[arg(long, allow_hyphen_values = true)]
        b: String,
        #[arg(long, allow_hyphen_values = true)]
        x: String,
    },
    /// Positivity test for a character sequence c_n.
    Voiculescu {
        /// Terms `n:c_n`, comma-separated, e.g. `0:1/2,1:1/2`.
        #[arg(long, allow_hyphen_values = true)]
        coeffs: String,
        #[arg(long, default_value_t = 4)]
        max_n: usize,
    },
    /// Every check a scenario requests.
    Run {
        /// Scenario file, or the name of a bundled scenario.
        scenario: String,
    },
    /// A verification battery: oracle, classification, realforms, induction or all.
    Suite { name: String },
}

fn load(arg: &str) -> Result<Scenario> {
    let stem = arg.strip_suffix(".scn").unwrap_or(arg);
    if let Some((_, src)) = BUNDLED.iter().find(|(n, _)| *n == stem) {
        if !Path::new(arg).exists() {
            return Ok(Scenario::parse(src)?);
        }
    }
    let path = Path::new(arg);
    Scenario::from_file(path).with_context(|| format!("loading {}", path.display()))
}

/// A matrix on one line, so every report line keeps its anchor.
fn flat<F: Field>(m: &Mat<F>) -> String {
    m.to_string().lines().collect::<Vec<_>>().join(" ")
}

fn dump<F: Field>(rep: &mut Report, what: &str, anchor: &'static str, level: Option<u64>, s: &MatSpace<F>) {
    let basis = s.basis();
    rep.push(Record::new(format!("{what} dim"), anchor, level, true, Some(basis.len().to_string())));
    for (k, m) in basis.iter().enumerate() {
        rep.push(Record::new(format!("{what} basis {}", k + 1), anchor, level, true, Some(flat(m))));
    }
}

fn parse_levels(s: &str) -> Result<(u64, u64)> {
    let (lo, hi) = s.split_once("..").ok_or_else(|| anyhow!("levels must look like LO..HI, got `{s}`"))?;
    let (lo, hi): (u64, u64) = (lo.trim().parse()?, hi.trim().parse()?);
    if lo > hi {
        bail!("empty level range {s}");
    }
    Ok((lo, hi))
}

fn parse_form(s: &str) -> Result<RealStructure> {
    let full = match s {
        "sl" => "sl(inf;R)",
        "sl-h" => "sl(inf;H)",
        "sp" => "sp(inf;R)",
        other => other,
    };
    Ok(full.parse()?)
}

/// `a`, `bi` or `a+bi` with rational parts.
fn parse_qi(s: &str) -> Result<Qi> {
    let s = s.trim();
    let Some(body) = s.strip_suffix('i') else {
        return Ok(Qi::real(s.parse()?));
    };
    let split = body.char_indices().rev().find(|&(k, c)| k > 0 && (c == '+' || c == '-')).map(|(k, _)| k);
    let (re, im) = match split {
        Some(k) => (&body[..k], &body[k..]),
        None => ("0", body),
    };
    let im = match im.trim_start_matches('+') {
        "" => "1",
        "-" => "-1",
        x => x,
    };
    Ok(Qi::new(re.parse()?, im.parse()?))
}

fn parse_matrix(s: &str) -> Result<Mat<Qi>> {
    let rows: Vec<Vec<Qi>> =
        s.split(';').map(|r| r.split(',').map(parse_qi).collect::<Result<Vec<_>>>()).collect::<Result<_>>()?;
    Ok(Mat::from_rows(rows)?)
}

fn stabilizer(sc: &Scenario, level: u64) -> Result<Report> {
    let p = sc.parabolic()?;
    let w = level_window(&p.system, level);
    let t = stabilizer_truncation(&p, &w)?;
    let mut rep = Report::new(format!("stabilizer of {} at level {level}", sc.name));
    rep.push(Record::new("window", "genflag", Some(level), true, Some(format!("{:?}", t.window))));
    dump(&mut rep, "stabilizer", "self-norm-cpx-parab", Some(level), &t.algebra);
    rep.extend(run_checks(sc, &[CheckKind::Stabilizer], (level, level)));
    Ok(rep)
}

fn levi(sc: &Scenario) -> Result<Report> {
    let l = levi_of(&sc.parabolic()?)?;
    let mut rep = Report::new(format!("Levi component of {}", sc.name));
    rep.push(Record::new("levi component", "struc-levi", None, true, Some(l.to_string())));
    for (k, b) in l.blocks.iter().enumerate() {
        let ty = format!("sl({}) block {}: X = {}, Y = {}, dim X = {}", l.ambient, k + 1, b.x, b.y, b.x.card());
        rep.push(Record::new("levi block", "struc-levi", None, true, Some(ty)));
    }
    if let Some(r) = &l.column_family {
        rep.push(Record::new("levi column family", "struc-levi", None, true, Some(format!("sl(column a) for each column of {r}"))));
    }
    if let Some(z) = &l.z {
        rep.push(Record::new("levi form block", "struc-levi", None, true, Some(format!("{}(Z = {z})", l.ambient))));
    }
    rep.extend(run_checks(sc, &[CheckKind::Levi], sc.levels));
    Ok(rep)
}

fn chevalley(sc: &Scenario, level: u64) -> Result<Report> {
    let p = sc.parabolic()?;
    let c = chevalley_truncation(&p, &level_window(&p.system, level))?;
    let mut rep = Report::new(format!("Chevalley decomposition of {} at level {level}", sc.name));
    dump(&mut rep, "p_nil", "levi", Some(level), &c.p_nil);
    dump(&mut rep, "l", "levi", Some(level), &c.l);
    dump(&mut rep, "t", "levi", Some(level), &c.t);
    rep.timed("decomposition", "levi", Some(level), || c.verify().map(|_| (true, None)));
    Ok(rep)
}

fn man(sc: &Scenario, form: Option<&str>, levels: (u64, u64)) -> Result<Report> {
    let real = match form {
        Some(f) => parse_form(f)?,
        None => sc.real_form.ok_or_else(|| anyhow!("scenario {} has no real form; pass --form", sc.name))?,
    };
    let desc = real_parabolic(&sc.parabolic()?, real)?;
    let mut rep = Report::new(format!("MAN decomposition of {} for {real}", sc.name));
    for d in levels.0..=levels.1 {
        let m = desc.window(d as usize).and_then(|w| man_decompose(&w));
        let m = match m {
            Ok(m) => m,
            Err(e) => {
                rep.push(Record::new("man", "construct-ma", Some(d), false, Some(format!("error: {e}"))));
                continue;
            }
        };
        dump(&mut rep, "m", "construct-ma", Some(d), &m.m);
        dump(&mut rep, "a", "construct-ma", Some(d), &m.a);
        dump(&mut rep, "n", "construct-ma", Some(d), &m.n);
        for c in &m.checks {
            rep.push(Record::new(c.name, "construct-ma", Some(d), c.holds, None));
        }
    }
    Ok(rep)
}

fn induce(form: &str, window: usize, degree: usize, sigma: &[String]) -> Result<Report> {
    let real = parse_form(form)?;
    let p = RealParabolic::from_members(real, window, minimal_members(&real, window))?;
    let man = man_decompose(&p)?;
    let sigma: Vec<Q> = sigma.iter().map(|s| s.parse()).collect::<flagpar::Result<_>>()?;
    let sigma = if sigma.is_empty() { vec![Q::zero(); man.a.dim()] } else { sigma };
    let spec = CharacterSpec::trivial(sigma);
    spec.validate(&man)?;
    let module = InducedModule::new(&man, &spec, degree)?;
    let mut rep = Report::new(format!("induced module for {real} at window {window}, degree {degree}"));
    let level = Some(window as u64);
    rep.push(Record::new("graded dims", "sec9", level, true, Some(format!("{:?}", module.graded_dims()))));
    for (k, x) in module.generators().iter().enumerate() {
        let am = module.action_matrix(x)?;
        let name = if k < module.neg.len() { format!("action of n- generator {}", k + 1) } else {
            format!("action of p generator {}", k + 1 - module.neg.len())
        };
        rep.push(Record::new(name, "sec9", level, true, Some(flat(&am.matrix))));
    }
    let gens = module.generators();
    rep.timed("commutation identity", "sec9", level, || -> flagpar::Result<_> {
        for x in &gens {
            for y in &gens {
                if !module.check_commutation(x, y)? {
                    return Ok((false, Some(format!("fails for\n{x}and\n{y}"))));
                }
            }
        }
        Ok((true, None))
    });
    Ok(rep)
}

fn psi(b: &str, x: &str) -> Result<Report> {
    let (b, x) = (parse_matrix(b)?, parse_matrix(x)?);
    FactorRepData::operator(b.clone())?;
    let mut rep = Report::new("psi_B");
    rep.timed("psi_B(x)", "sec8", None, || psi_b(&b, &x).map(|v| (true, Some(v.to_string()))));
    Ok(rep)
}

fn voiculescu(coeffs: &str, max_n: usize) -> Result<Report> {
    let mut c = BTreeMap::new();
    for term in coeffs.split(',') {
        let (n, v) = term.split_once(':').ok_or_else(|| anyhow!("expected `n:c_n`, got `{term}`"))?;
        c.insert(n.trim().parse::<i64>()?, v.parse::<Q>()?);
    }
    let r = voiculescu_check(&c, max_n);
    let mut rep = Report::new("Voiculescu positivity");
    let witness = match &r.witness {
        Some((ms, det)) => format!("sum {}, det of (c_(m_i+j-i)) at m = {ms:?} is {det}", r.sum),
        None => format!("sum {}, all minors checked are nonnegative", r.sum),
    };
    rep.push(Record::new("voiculescu", "sec8", Some(max_n as u64), r.accepted(), Some(witness)));
    Ok(rep)
}

fn execute(cli: &Cli) -> Result<Report> {
    match &cli.cmd {
        Cmd::Stabilizer { scenario, level } => stabilizer(&load(&scenario.scenario)?, *level),
        Cmd::Check { scenario, taut, semiclosed, solvable, level } => {
            let sc = load(&scenario.scenario)?;
            let kind = match (taut, semiclosed, solvable) {
                (true, _, _) => CheckKind::Taut,
                (_, true, _) => CheckKind::Semiclosed,
                _ => CheckKind::Solvable,
            };
            Ok(run_checks(&sc, &[kind], level.map_or(sc.levels, |l| (l, l))))
        }
        Cmd::Levi { scenario } => levi(&load(&scenario.scenario)?),
        Cmd::Chevalley { scenario, level } => chevalley(&load(&scenario.scenario)?, *level),
        Cmd::Man { form, scenario, levels } => man(&load(&scenario.scenario)?, form.as_deref(), parse_levels(levels)?),
        Cmd::Induce { form, window, degree, sigma } => induce(form, *window, *degree, sigma),
        Cmd::PsiB { b, x } => psi(b, x),
        Cmd::Voiculescu { coeffs, max_n } => voiculescu(coeffs, *max_n),
        Cmd::Run { scenario } => Ok(run_scenario(&load(scenario)?)),
        Cmd::Suite { name } => Ok(run_suite(name)?),
    }
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    match execute(&cli) {
        Ok(rep) => {
            print!("{}", rep.render(cli.emit));
            if rep.passed() {
                ExitCode::SUCCESS
            } else {
                ExitCode::from(1)
            }
        }
        Err(e) => {
            eprintln!("error: {e:#}");
            ExitCode::from(2)
        }
    }
}
