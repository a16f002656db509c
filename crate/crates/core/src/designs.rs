//! The two block-orbit designs on the Suzuki–Tits ovoid and their checks.
//!
//! Family 2 takes the orbit of Δ2 = {p(0,b)} under Sz(q) as blocks, family 3
//! the orbit of Δ3 = {p(a,b) : a ≠ 0}. Both are 2-designs on the q²+1 ovoid
//! points with b = q(q²+1) blocks.

use std::collections::HashSet;
use std::fmt;
use std::sync::Arc;

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rayon::prelude::*;

use crate::action::{flag_orbit, ordered_pair_orbit, point_orbit, set_orbit, stabilizer_order, GeneratorSet};
use crate::error::{Error, Result};
use crate::gf2m::FieldParams;
use crate::pg3::{collinear, ProjPoint};
use crate::suzuki::{enumerate_subgroup, Ovoid, SubgroupId};

/// Which K-orbit seeds the blocks.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum Family {
    Two,
    Three,
}

impl Family {
    pub fn number(self) -> u8 {
        match self {
            Family::Two => 2,
            Family::Three => 3,
        }
    }

    pub fn from_number(n: u64) -> Option<Self> {
        match n {
            2 => Some(Family::Two),
            3 => Some(Family::Three),
            _ => None,
        }
    }
}

impl fmt::Display for Family {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}", self.number())
    }
}

/// `(v, k, λ)` together with the block count and replication number.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub struct DesignParams {
    pub v: u64,
    pub k: u64,
    pub lambda: u64,
    pub b: u64,
    pub r: u64,
}

impl DesignParams {
    /// Derives `r = bk/v` and `λ = bk(k-1)/(v(v-1))`, both of which must be
    /// integers.
    pub fn from_counts(v: u64, k: u64, b: u64) -> Result<Self> {
        let exact = |num: u64, den: u64, what: &str| {
            if den == 0 || !num.is_multiple_of(den) {
                Err(Error::Verification(format!("{what} = {num}/{den} is not an integer")))
            } else {
                Ok(num / den)
            }
        };
        let r = exact(b * k, v, "r")?;
        let lambda = exact(b * k * k.saturating_sub(1), v * (v - 1), "lambda")?;
        Ok(DesignParams { v, k, lambda, b, r })
    }

    /// Closed-form parameters for the given family at field size `q`.
    pub fn expected(q: u64, family: Family) -> Self {
        let v = q * q + 1;
        let b = q * v;
        match family {
            Family::Two => DesignParams {
                v,
                k: q,
                lambda: q - 1,
                b,
                r: q * q,
            },
            Family::Three => DesignParams {
                v,
                k: q * (q - 1),
                lambda: (q - 1) * (q * q - q - 1),
                b,
                r: q * q * (q - 1),
            },
        }
    }

    pub fn gcd_r_lambda(&self) -> u64 {
        gcd(self.r, self.lambda)
    }

    pub fn is_symmetric(&self) -> bool {
        self.b == self.v
    }
}

impl fmt::Display for DesignParams {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(
            f,
            "v={} k={} lambda={} b={} r={} gcd(r,lambda)={}",
            self.v,
            self.k,
            self.lambda,
            self.b,
            self.r,
            self.gcd_r_lambda()
        )
    }
}

pub fn gcd(mut a: u64, mut b: u64) -> u64 {
    while b != 0 {
        (a, b) = (b, a % b);
    }
    a
}

/// The ovoid with the default generating set of Sz(q).
#[derive(Clone, Debug)]
pub struct SuzukiSetting {
    ovoid: Arc<Ovoid>,
    gens: GeneratorSet,
}

impl SuzukiSetting {
    pub fn new(q: u64, poly: Option<u64>) -> Result<Self> {
        Self::from_field(FieldParams::for_order(q, poly)?)
    }

    pub fn from_field(field: FieldParams) -> Result<Self> {
        let ovoid = Ovoid::build(field)?;
        let gens = GeneratorSet::suzuki(&ovoid)?;
        Ok(SuzukiSetting {
            ovoid: Arc::new(ovoid),
            gens,
        })
    }

    pub fn ovoid(&self) -> &Arc<Ovoid> {
        &self.ovoid
    }

    pub fn gens(&self) -> &GeneratorSet {
        &self.gens
    }

    pub fn q(&self) -> u64 {
        self.ovoid.q()
    }

    /// `|G| = |∞^G| · |G_∞|` with `G_∞ = H` of order q²(q-1).
    pub fn group_order(&self) -> u64 {
        let q = self.q();
        point_orbit(0, &self.gens).len() as u64 * SubgroupId::H.expected_order(q)
    }
}

#[derive(Clone, Debug)]
pub struct Design {
    q: u64,
    family: Family,
    params: DesignParams,
    blocks: Vec<Vec<u32>>,
    ovoid: Arc<Ovoid>,
}

impl Design {
    /// Assembles a design from an explicit block list, sorting each block and
    /// the list itself. Parameters are derived from the counts.
    pub fn from_blocks(ovoid: Arc<Ovoid>, family: Family, mut blocks: Vec<Vec<u32>>) -> Result<Self> {
        for b in &mut blocks {
            b.sort_unstable();
        }
        blocks.sort_unstable();
        let k = blocks.first().map_or(0, Vec::len) as u64;
        let params = DesignParams::from_counts(ovoid.len() as u64, k, blocks.len() as u64)?;
        Ok(Design {
            q: ovoid.q(),
            family,
            params,
            blocks,
            ovoid,
        })
    }

    pub fn q(&self) -> u64 {
        self.q
    }

    pub fn family(&self) -> Family {
        self.family
    }

    pub fn params(&self) -> &DesignParams {
        &self.params
    }

    /// Blocks as ascending index lists, in lexicographic order.
    pub fn blocks(&self) -> &[Vec<u32>] {
        &self.blocks
    }

    pub fn ovoid(&self) -> &Arc<Ovoid> {
        &self.ovoid
    }
}

/// Blocks are the Sz(q)-orbit of Δ2 or Δ3.
pub fn build_design(setting: &SuzukiSetting, family: Family) -> Result<Design> {
    let [_, d2, d3] = setting.ovoid().deltas();
    let base = match family {
        Family::Two => d2,
        Family::Three => d3,
    };
    let blocks = set_orbit(&base, setting.gens());
    if let Some(bad) = blocks.iter().find(|b| b.len() != base.len()) {
        return Err(Error::Verification(format!(
            "block of size {} in the orbit of a {}-set",
            bad.len(),
            base.len()
        )));
    }
    Design::from_blocks(setting.ovoid().clone(), family, blocks)
}

/// Outcome of the brute-force pair and point counts.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct TallyReport {
    pub pairs_checked: u64,
    /// The common pair count, if every pair has the same one.
    pub lambda_observed: Option<u64>,
    /// The common point count, if every point has the same one.
    pub r_observed: Option<u64>,
    /// First pair `(i, j, count)` with `count != λ`.
    pub first_bad_pair: Option<(u32, u32, u64)>,
    /// First point `(i, count)` with `count != r`.
    pub first_bad_point: Option<(u32, u64)>,
    /// First block that is not a set of k distinct points in range.
    pub first_bad_block: Option<usize>,
}

impl TallyReport {
    pub fn passed(&self) -> bool {
        self.first_bad_pair.is_none() && self.first_bad_point.is_none() && self.first_bad_block.is_none()
    }
}

impl fmt::Display for TallyReport {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if let Some(b) = self.first_bad_block {
            return write!(f, "block {b} is malformed");
        }
        if let Some((i, j, c)) = self.first_bad_pair {
            return write!(f, "pair ({i},{j}) lies in {c} blocks");
        }
        if let Some((i, c)) = self.first_bad_point {
            return write!(f, "point {i} lies in {c} blocks");
        }
        write!(
            f,
            "{} pairs each in {} blocks, every point in {} blocks",
            self.pairs_checked,
            self.lambda_observed.unwrap_or(0),
            self.r_observed.unwrap_or(0)
        )
    }
}

fn tally_into(blocks: &[Vec<u32>], v: usize, tally: &mut [u32]) {
    for block in blocks {
        for (i, &a) in block.iter().enumerate() {
            let row = &mut tally[a as usize * v..(a as usize + 1) * v];
            for &b in &block[i + 1..] {
                row[b as usize] += 1;
            }
        }
    }
}

/// Pair counts `t[i*v + j]` for `i < j`, single-threaded.
pub fn pair_tally_serial(blocks: &[Vec<u32>], v: usize) -> Vec<u32> {
    let mut tally = vec![0u32; v * v];
    tally_into(blocks, v, &mut tally);
    tally
}

/// Pair counts sharded across worker threads, each with a private tally,
/// merged by addition.
pub fn pair_tally(blocks: &[Vec<u32>], v: usize) -> Vec<u32> {
    let shards = rayon::current_num_threads().max(1);
    if shards == 1 {
        return pair_tally_serial(blocks, v);
    }
    let chunk = blocks.len().div_ceil(shards).max(1);
    blocks
        .par_chunks(chunk)
        .map(|c| pair_tally_serial(c, v))
        .reduce_with(|mut a, b| {
            a.iter_mut().zip(&b).for_each(|(x, y)| *x += y);
            a
        })
        .unwrap_or_else(|| vec![0; v * v])
}

/// Counts, for every pair of distinct points, the blocks containing it, and
/// for every point the blocks through it.
pub fn verify_2design(d: &Design) -> TallyReport {
    let p = d.params();
    let v = p.v as usize;
    let mut report = TallyReport {
        pairs_checked: 0,
        lambda_observed: None,
        r_observed: None,
        first_bad_pair: None,
        first_bad_point: None,
        first_bad_block: None,
    };
    report.first_bad_block = d.blocks().iter().position(|b| {
        b.len() as u64 != p.k || b.windows(2).any(|w| w[0] >= w[1]) || b.last().is_some_and(|&x| x as usize >= v)
    });
    if report.first_bad_block.is_some() {
        return report;
    }

    let tally = pair_tally(d.blocks(), v);
    let mut counts = HashSet::new();
    'outer: for i in 0..v {
        for j in i + 1..v {
            let c = tally[i * v + j] as u64;
            counts.insert(c);
            report.pairs_checked += 1;
            if c != p.lambda {
                report.first_bad_pair = Some((i as u32, j as u32, c));
                break 'outer;
            }
        }
    }
    if counts.len() == 1 {
        report.lambda_observed = counts.into_iter().next();
    }

    let mut through = vec![0u64; v];
    for &i in d.blocks().iter().flatten() {
        through[i as usize] += 1;
    }
    report.first_bad_point = through
        .iter()
        .enumerate()
        .find(|&(_, &c)| c != p.r)
        .map(|(i, &c)| (i as u32, c));
    if report.first_bad_point.is_none() {
        report.r_observed = Some(p.r);
    }
    report
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum CheckStatus {
    Pass,
    Fail,
    /// Reported for information; never fails.
    Info,
    Skip,
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Check {
    pub name: String,
    pub status: CheckStatus,
    pub detail: String,
}

impl Check {
    pub fn new(name: impl Into<String>, passed: bool, detail: impl Into<String>) -> Self {
        Check {
            name: name.into(),
            status: if passed { CheckStatus::Pass } else { CheckStatus::Fail },
            detail: detail.into(),
        }
    }

    pub fn info(name: impl Into<String>, detail: impl Into<String>) -> Self {
        Check {
            name: name.into(),
            status: CheckStatus::Info,
            detail: detail.into(),
        }
    }

    pub fn skip(name: impl Into<String>, detail: impl Into<String>) -> Self {
        Check {
            name: name.into(),
            status: CheckStatus::Skip,
            detail: detail.into(),
        }
    }

    pub fn failed(&self) -> bool {
        self.status == CheckStatus::Fail
    }
}

impl fmt::Display for Check {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let tag = match self.status {
            CheckStatus::Pass => "PASS",
            CheckStatus::Fail => "FAIL",
            CheckStatus::Info => "INFO",
            CheckStatus::Skip => "SKIP",
        };
        write!(f, "{tag} {}: {}", self.name, self.detail)
    }
}

#[derive(Clone, Copy, Debug, Default)]
pub struct ClaimOptions {
    /// Also run the flag-orbit BFS (size b·k).
    pub flag_orbit: bool,
}

/// Transitivity, symmetry and arithmetic properties of a built design.
pub fn verify_claims(setting: &SuzukiSetting, d: &Design, opts: ClaimOptions) -> Result<Vec<Check>> {
    let ovoid = setting.ovoid();
    let f = ovoid.field();
    let q = setting.q();
    let p = *d.params();
    let fam = d.family();
    let name = |s: &str| format!("family {fam} {s}");
    let mut checks = Vec::new();

    let group = setting.group_order();
    let k_order = SubgroupId::K.expected_order(q);
    let h_order = SubgroupId::H.expected_order(q);
    let stab = stabilizer_order(p.b, group);
    checks.push(Check::new(
        name("block-transitivity"),
        p.b == q * (q * q + 1) && stab == Ok(k_order),
        format!("one orbit of {} blocks, block stabilizer order {:?} (|K| = {k_order})", p.b, stab.ok()),
    ));

    let [_, d2, d3] = ovoid.deltas();
    let delta = if fam == Family::Two { d2 } else { d3 };
    let k_gens = GeneratorSet::k(ovoid)?;
    let k_on_delta = point_orbit(delta[0] as usize, &k_gens) == delta;
    checks.push(Check::new(
        name("flag-transitivity (K transitive on base block)"),
        k_on_delta,
        format!("K-orbit of point {} is the base block of size {}", delta[0], delta.len()),
    ));
    if opts.flag_orbit {
        let flags = flag_orbit(delta[0], &delta, setting.gens());
        checks.push(Check::new(
            name("flag-transitivity (flag orbit)"),
            flags == p.b * p.k && k_on_delta,
            format!("flag orbit {flags}, b*k = {}", p.b * p.k),
        ));
    }

    checks.push(Check::new(
        name("non-symmetric"),
        !p.is_symmetric(),
        format!("b = {} != v = {}", p.b, p.v),
    ));

    let g = p.gcd_r_lambda();
    match fam {
        Family::Two => checks.push(Check::new(
            name("gcd(r,lambda) = 1"),
            g == 1,
            format!("gcd({}, {}) = {g}", p.r, p.lambda),
        )),
        Family::Three => checks.push(Check::info(name("gcd(r,lambda)"), format!("gcd({}, {}) = {g}", p.r, p.lambda))),
    }

    let h: HashSet<_> = enumerate_subgroup(f, SubgroupId::H).into_iter().collect();
    let k = enumerate_subgroup(f, SubgroupId::K);
    let chain = k.iter().all(|m| h.contains(m)) && (k.len() as u64) < h_order && h_order < group && h.len() as u64 == h_order;
    checks.push(Check::new(
        name("subgroup chain K < H < G"),
        chain,
        format!("{} < {} < {group}", k.len(), h.len()),
    ));

    let pairs = ordered_pair_orbit((0, ovoid.omega()), setting.gens())?;
    checks.push(Check::new(
        name("doubly transitive on points"),
        pairs == p.v * (p.v - 1),
        format!("ordered-pair orbit {pairs}, v(v-1) = {}", p.v * (p.v - 1)),
    ));
    Ok(checks)
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum TripleScan {
    Exhaustive,
    Sampled { count: u64, seed: u64 },
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct GeometryReport {
    pub triples_checked: u64,
    pub collinear: Option<[usize; 3]>,
}

impl GeometryReport {
    pub fn passed(&self) -> bool {
        self.collinear.is_none()
    }
}

/// Scans ovoid triples for collinearity.
pub fn verify_ovoid_geometry(ovoid: &Ovoid, scan: TripleScan) -> GeometryReport {
    scan_triples(ovoid.field(), ovoid.proj(), scan)
}

/// Scans triples of a list of distinct points for collinearity.
pub fn scan_triples(f: &FieldParams, pts: &[ProjPoint], scan: TripleScan) -> GeometryReport {
    let v = pts.len();
    let is_col = |i: usize, j: usize, k: usize| collinear(f, &pts[i], &pts[j], &pts[k]).expect("points are distinct");
    match scan {
        TripleScan::Exhaustive => {
            let bad = (0..v).into_par_iter().find_map_first(|i| {
                for j in i + 1..v {
                    for k in j + 1..v {
                        if is_col(i, j, k) {
                            return Some([i, j, k]);
                        }
                    }
                }
                None
            });
            let n = v as u64;
            GeometryReport {
                triples_checked: n * (n - 1) * (n - 2) / 6,
                collinear: bad,
            }
        }
        TripleScan::Sampled { count, seed } => {
            let mut rng = ChaCha8Rng::seed_from_u64(seed);
            let mut checked = 0;
            for _ in 0..count {
                let i = rng.gen_range(0..v);
                let j = rng.gen_range(0..v);
                let k = rng.gen_range(0..v);
                if i == j || j == k || i == k {
                    continue;
                }
                checked += 1;
                if is_col(i, j, k) {
                    return GeometryReport {
                        triples_checked: checked,
                        collinear: Some([i, j, k]),
                    };
                }
            }
            GeometryReport {
                triples_checked: checked,
                collinear: None,
            }
        }
    }
}
