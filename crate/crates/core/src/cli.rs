//! Command-line front end: `build`, `verify` and `export`.
//!
//! Exit codes: 0 success, 1 verification or I/O failure, 2 usage or
//! configuration error.

use std::collections::HashSet;
use std::ffi::OsString;
use std::fs::File;
use std::io::{BufWriter, Write};
use std::path::{Path, PathBuf};

use clap::{Args, Parser, Subcommand, ValueEnum};
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use crate::action::{closure, generator_perm, ordered_pair_orbit, point_orbit, setwise_stabilizer, to_perm, GeneratorSet};
use crate::designs::{
    build_design, verify_2design, verify_claims, verify_ovoid_geometry, Check, ClaimOptions, DesignParams, Family,
    SuzukiSetting, TripleScan,
};
use crate::error::Error;
use crate::export::{write_design, Format};
use crate::gf2m::{order_to_degree, FieldElement};
use crate::suzuki::{enumerate_subgroup, gen_m, gen_s, k_orbits, Generator, SubgroupId};

pub const EXIT_OK: i32 = 0;
pub const EXIT_FAIL: i32 = 1;
pub const EXIT_USAGE: i32 = 2;

const SUPPORTED_Q: [u64; 3] = [8, 32, 128];
const CLOSURE_BUDGET: usize = 1 << 16;
const TRIPLE_SAMPLES: u64 = 1_000_000;
const LAW_SAMPLES: u64 = 10_000;

#[derive(Parser, Debug)]
#[command(name = "sz-ovoid", version, about = "Suzuki–Tits ovoid designs: build, verify, export")]
pub struct Cli {
    #[command(subcommand)]
    pub command: Command,
}

#[derive(Subcommand, Debug)]
pub enum Command {
    /// Build the design(s) and print their parameters.
    Build(RunArgs),
    /// Run every check applicable to q.
    Verify(RunArgs),
    /// Write the design(s) to --out, or stdout.
    Export(RunArgs),
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, ValueEnum)]
pub enum FamilyArg {
    #[value(name = "2")]
    Two,
    #[value(name = "3")]
    Three,
    Both,
}

impl FamilyArg {
    fn families(self) -> Vec<Family> {
        match self {
            FamilyArg::Two => vec![Family::Two],
            FamilyArg::Three => vec![Family::Three],
            FamilyArg::Both => vec![Family::Two, Family::Three],
        }
    }
}

#[derive(Args, Debug, Clone)]
pub struct RunArgs {
    /// Field size, an odd power of 2 (8, 32 or 128).
    #[arg(long)]
    pub q: u64,
    #[arg(long, value_enum, default_value = "both")]
    pub family: FamilyArg,
    /// Irreducible polynomial as hex, bit i = coefficient of x^i (e.g. 0xB).
    #[arg(long, value_parser = parse_hex)]
    pub poly: Option<u64>,
    #[arg(long)]
    pub out: Option<PathBuf>,
    #[arg(long, value_enum, default_value = "json")]
    pub format: Format,
    /// Check every ovoid triple instead of a sample (q > 8).
    #[arg(long)]
    pub exhaustive_triples: bool,
    /// Run the full pair tally for family 3 at q > 8.
    #[arg(long)]
    pub verify_family3_pairs: bool,
    /// Enumerate the whole group (q = 8 only; on by default there).
    #[arg(long)]
    pub full_closure: bool,
    /// Seed for sampled checks.
    #[arg(long, default_value_t = 0)]
    pub seed: u64,
}

fn parse_hex(s: &str) -> Result<u64, String> {
    let digits = s.trim_start_matches("0x").trim_start_matches("0X");
    u64::from_str_radix(digits, 16).map_err(|e| format!("not a hexadecimal integer: {e}"))
}

/// A validated run configuration.
#[derive(Debug, Clone)]
pub struct RunConfig {
    pub args: RunArgs,
    pub setting: SuzukiSetting,
}

impl RunConfig {
    pub fn new(args: RunArgs) -> Result<Self, String> {
        order_to_degree(args.q).map_err(|e| e.to_string())?;
        if !SUPPORTED_Q.contains(&args.q) {
            return Err(format!("unsupported q = {} (supported: 8, 32, 128)", args.q));
        }
        if args.full_closure && args.q != 8 {
            return Err("--full-closure is only available for q = 8".into());
        }
        let setting = SuzukiSetting::new(args.q, args.poly).map_err(|e| e.to_string())?;
        Ok(RunConfig { args, setting })
    }

    fn enumerable(&self) -> bool {
        self.args.q <= 32
    }
}

pub fn run<I, T>(argv: I, out: &mut dyn Write, err: &mut dyn Write) -> i32
where
    I: IntoIterator<Item = T>,
    T: Into<OsString> + Clone,
{
    let cli = match Cli::try_parse_from(argv) {
        Ok(c) => c,
        Err(e) => {
            let _ = write!(err, "{e}");
            return e.exit_code();
        }
    };
    let (Command::Build(args) | Command::Verify(args) | Command::Export(args)) = &cli.command;
    let cfg = match RunConfig::new(args.clone()) {
        Ok(c) => c,
        Err(msg) => {
            let _ = writeln!(err, "error: {msg}");
            return EXIT_USAGE;
        }
    };
    let result = match cli.command {
        Command::Build(_) => cmd_build(&cfg, out, false),
        Command::Export(_) => cmd_build(&cfg, out, true),
        Command::Verify(_) => cmd_verify(&cfg, out),
    };
    match result {
        Ok(code) => code,
        Err(CliError::Usage(msg)) => {
            let _ = writeln!(err, "error: {msg}");
            EXIT_USAGE
        }
        Err(CliError::Failed(msg)) => {
            let _ = writeln!(err, "error: {msg}");
            EXIT_FAIL
        }
    }
}

enum CliError {
    Usage(String),
    Failed(String),
}

impl From<std::io::Error> for CliError {
    fn from(e: std::io::Error) -> Self {
        CliError::Failed(e.to_string())
    }
}

impl From<Error> for CliError {
    fn from(e: Error) -> Self {
        CliError::Failed(e.to_string())
    }
}

/// `out.json` becomes `out.f2.json` when several families share one path.
fn family_path(base: &Path, family: Family, several: bool) -> PathBuf {
    if !several {
        return base.to_path_buf();
    }
    let stem = base.file_stem().map(|s| s.to_string_lossy().into_owned()).unwrap_or_default();
    let name = match base.extension() {
        Some(ext) => format!("{stem}.f{family}.{}", ext.to_string_lossy()),
        None => format!("{stem}.f{family}"),
    };
    base.with_file_name(name)
}

fn cmd_build(cfg: &RunConfig, out: &mut dyn Write, export: bool) -> Result<i32, CliError> {
    if !cfg.enumerable() {
        return Err(CliError::Usage(format!(
            "design enumeration is supported for q = 8 and q = 32, not q = {}",
            cfg.args.q
        )));
    }
    let families = cfg.args.family.families();
    for &fam in &families {
        let d = build_design(&cfg.setting, fam)?;
        match &cfg.args.out {
            Some(base) => {
                let path = family_path(base, fam, families.len() > 1);
                let file = File::create(&path).map_err(|e| CliError::Failed(format!("{}: {e}", path.display())))?;
                write_design(&d, cfg.args.format, BufWriter::new(file))?;
            }
            None if export => write_design(&d, cfg.args.format, &mut *out)?,
            None => {}
        }
        if !export || cfg.args.out.is_some() {
            writeln!(out, "q={} family={} {}", cfg.args.q, fam, d.params())?;
        }
    }
    Ok(EXIT_OK)
}

struct Report<'a> {
    out: &'a mut dyn Write,
    failed: bool,
}

impl Report<'_> {
    fn emit(&mut self, c: Check) -> std::io::Result<()> {
        self.failed |= c.failed();
        writeln!(self.out, "{c}")?;
        self.out.flush()
    }

    fn check(&mut self, name: &str, passed: bool, detail: impl Into<String>) -> std::io::Result<()> {
        self.emit(Check::new(name, passed, detail))
    }
}

fn cmd_verify(cfg: &RunConfig, out: &mut dyn Write) -> Result<i32, CliError> {
    let s = &cfg.setting;
    let ov = s.ovoid();
    let f = ov.field();
    let q = s.q();
    let v = ov.len() as u64;
    let exhaustive = q == 8;
    let mut rng = ChaCha8Rng::seed_from_u64(cfg.args.seed);
    let mut rep = Report { out, failed: false };
    let elem = |r: &mut ChaCha8Rng| FieldElement::from_bits(r.gen_range(0..q));
    let unit = |r: &mut ChaCha8Rng| FieldElement::from_bits(r.gen_range(1..q));

    writeln!(rep.out, "# q={q} poly={:#x} seed={}", f.poly(), cfg.args.seed)?;

    let theta_ok = f.elements().all(|a| {
        f.theta(f.theta(a)) == f.square(a)
            && f.elements().all(|b| f.theta(f.mul(a, b)) == f.mul(f.theta(a), f.theta(b)))
    });
    rep.check("theta automorphism", theta_ok, format!("theta^2 = Frobenius on all {q} elements"))?;

    rep.check("ovoid size", v == q * q + 1, format!("{v} points"))?;

    let scan = if exhaustive || cfg.args.exhaustive_triples {
        TripleScan::Exhaustive
    } else {
        TripleScan::Sampled {
            count: TRIPLE_SAMPLES,
            seed: cfg.args.seed,
        }
    };
    let geo = verify_ovoid_geometry(ov, scan);
    let kind = if scan == TripleScan::Exhaustive { "all" } else { "sampled" };
    let detail = match geo.collinear {
        None => format!("{kind} {} triples non-collinear", geo.triples_checked),
        Some(t) => format!("collinear triple {t:?}"),
    };
    rep.check("ovoid no three collinear", geo.passed(), detail)?;

    // generator consistency: symbolic action vs matrix action
    let gens: Vec<Generator> = if exhaustive {
        let mut g: Vec<Generator> = f.elements().flat_map(|x| f.elements().map(move |y| Generator::S(x, y))).collect();
        g.extend(f.nonzero().map(Generator::M));
        g.push(Generator::Tau);
        g
    } else {
        (0..LAW_SAMPLES / 100)
            .map(|i| match i % 3 {
                0 => Generator::S(elem(&mut rng), elem(&mut rng)),
                1 => Generator::M(unit(&mut rng)),
                _ => Generator::Tau,
            })
            .collect()
    };
    let mut pairs = 0u64;
    let mut mismatch = None;
    for g in &gens {
        let m = g.matrix(f)?;
        let fast = generator_perm(ov, g)?;
        let points: Vec<usize> = if exhaustive {
            (0..ov.len()).collect()
        } else {
            (0..100).map(|_| rng.gen_range(0..ov.len())).collect()
        };
        for i in points {
            pairs += 1;
            if ov.act_matrix(i, &m).ok() != Some(fast.apply(i as u32) as usize) {
                mismatch.get_or_insert((*g, i));
            }
        }
    }
    rep.check(
        "generator action consistency",
        mismatch.is_none(),
        match mismatch {
            None => format!("{pairs} (point, generator) pairs agree"),
            Some((g, i)) => format!("{g} disagrees on point {i}"),
        },
    )?;

    let quads: Vec<[FieldElement; 4]> = if exhaustive {
        let all = f.enumerate_field();
        let mut v = Vec::new();
        for &x in &all {
            for &y in &all {
                for &z in &all {
                    for &t in &all {
                        v.push([x, y, z, t]);
                    }
                }
            }
        }
        v
    } else {
        (0..LAW_SAMPLES).map(|_| [0; 4].map(|_| elem(&mut rng))).collect()
    };
    let q_law = quads.iter().all(|&[x, y, z, t]| {
        gen_s(f, x, y).mul(&gen_s(f, z, t), f) == gen_s(f, f.add(x, z), f.add(f.add(y, t), f.mul(f.theta(x), z)))
    });
    rep.check("s-multiplication law", q_law, format!("{} products", quads.len()))?;

    let triples: Vec<[FieldElement; 3]> = if exhaustive {
        f.nonzero()
            .flat_map(|k| f.elements().flat_map(move |x| f.elements().map(move |y| [k, x, y])))
            .collect()
    } else {
        (0..LAW_SAMPLES).map(|_| [unit(&mut rng), elem(&mut rng), elem(&mut rng)]).collect()
    };
    let m_law = triples.iter().all(|&[k, x, y]| {
        let m = gen_m(f, k).expect("nonzero");
        let lhs = m.inverse(f).expect("diagonal").mul(&gen_s(f, x, y), f).mul(&m, f);
        lhs == gen_s(f, f.mul(x, k), f.mul(y, f.mul(k, f.theta(k))))
    });
    rep.check("m-conjugation law", m_law, format!("{} conjugates", triples.len()))?;

    let mut ids = vec![SubgroupId::Q, SubgroupId::Q0, SubgroupId::M, SubgroupId::K];
    if cfg.enumerable() {
        ids.insert(3, SubgroupId::H);
    }
    for id in ids {
        let els = enumerate_subgroup(f, id);
        let distinct = els.iter().collect::<HashSet<_>>().len() as u64;
        let want = id.expected_order(q);
        rep.check(&format!("order of {id:?}"), distinct == want, format!("{distinct} distinct elements, expected {want}"))?;
    }

    match k_orbits(ov) {
        Ok(orbits) => rep.check(
            "K-orbits",
            true,
            format!("sizes {:?} match Delta1, Delta2, Delta3", orbits.each_ref().map(Vec::len)),
        )?,
        Err(e) => rep.check("K-orbits", false, e.to_string())?,
    }

    let orbit = point_orbit(0, s.gens()).len() as u64;
    rep.check("point orbit", orbit == v, format!("orbit of infinity has {orbit} points"))?;
    if cfg.enumerable() {
        let pairs = ordered_pair_orbit((0, ov.omega()), s.gens())?;
        rep.check("ordered-pair orbit", pairs == v * (v - 1), format!("{pairs} ordered pairs, v(v-1) = {}", v * (v - 1)))?;
    } else {
        let h = GeneratorSet::h(ov)?;
        let h_orbit = point_orbit(ov.omega(), &h).len() as u64;
        let fixes_inf = point_orbit(0, &h).len() == 1;
        rep.check(
            "doubly transitive (H transitive on the rest)",
            fixes_inf && h_orbit == v - 1,
            format!("H fixes infinity, orbit of omega has {h_orbit} points"),
        )?;
    }

    let group_order = s.group_order();
    if q == 8 {
        let group = closure(s.gens(), CLOSURE_BUDGET)?;
        rep.check("closure order", group.len() as u64 == group_order, format!("closure order {}", group.len()))?;
        let k: HashSet<_> = enumerate_subgroup(f, SubgroupId::K)
            .iter()
            .map(|m| to_perm(ov, m))
            .collect::<Result<_, _>>()?;
        let [_, d2, d3] = ov.deltas();
        for (name, d) in [("Delta2", &d2), ("Delta3", &d3)] {
            let stab: HashSet<_> = setwise_stabilizer(d, &group).into_iter().cloned().collect();
            rep.check(
                &format!("setwise stabilizer of {name}"),
                stab == k,
                format!("setwise stabilizer of {name} = K ({} elements)", stab.len()),
            )?;
        }
        let bad = group.iter().filter(|g| !g.is_identity() && g.fixed_points() >= 3).count();
        rep.check("three-point stabilizer trivial", bad == 0, format!("{bad} nonidentity elements fix 3 points"))?;
    } else {
        rep.emit(Check::skip("closure order", format!("|G| = {group_order} is beyond full enumeration")))?;
    }

    for fam in cfg.args.family.families() {
        let want = DesignParams::expected(q, fam);
        if !cfg.enumerable() {
            let b = crate::action::stabilizer_order(SubgroupId::K.expected_order(q), group_order)?;
            let p = DesignParams::from_counts(v, want.k, b)?;
            rep.check(&format!("family {fam} parameters (orbit-stabilizer)"), p == want, format!("{p}"))?;
            rep.emit(Check::skip(format!("family {fam} blocks"), "block enumeration needs q <= 32"))?;
            continue;
        }
        let d = build_design(s, fam)?;
        let p = *d.params();
        rep.check(&format!("family {fam} parameters"), p == want, format!("{p}"))?;
        if fam == Family::Three && q > 8 && !cfg.args.verify_family3_pairs {
            rep.emit(Check::skip("family 3 pair tally", "pass --verify-family3-pairs to run it"))?;
        } else {
            let t = verify_2design(&d);
            rep.check(&format!("family {fam} pair tally"), t.passed() && t.lambda_observed == Some(want.lambda), t.to_string())?;
        }
        for c in verify_claims(s, &d, ClaimOptions { flag_orbit: q == 8 })? {
            rep.emit(c)?;
        }
    }

    Ok(if rep.failed { EXIT_FAIL } else { EXIT_OK })
}
