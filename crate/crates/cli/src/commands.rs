use std::fmt::Write as _;
use std::path::PathBuf;
use std::process::ExitCode;
use std::str::FromStr;

use clap::{Args, ValueEnum};
use rayon::prelude::*;
use verlinde::verlinde::{v_vectors, Backend, Evaluator, VerlindeQuery};
use verlinde::weights::{
    enumerate_pk, enumerate_qk, enumerate_wk, enumerate_wk_prime, hecke_basic, hecke_inverse, hecke_m, normalize,
    ParabolicData,
};

use crate::cache::DiskCache;
use crate::document::{self, QueryDocument};
use crate::{CmdResult, Failure};

#[derive(Args, Debug)]
pub struct DimArgs {
    /// Query document (JSON), or `-` for stdin.
    pub input: String,

    #[arg(long, default_value = "exact")]
    pub backend: Backend,

    /// Read and write the on-disk result cache.
    #[arg(long)]
    pub cache: bool,

    /// Cache directory (overrides VERLINDE_CACHE_DIR).
    #[arg(long, requires = "cache")]
    pub cache_dir: Option<PathBuf>,
}

fn yes_no(b: bool) -> &'static str {
    if b {
        "yes"
    } else {
        "no"
    }
}

pub fn dim(args: &DimArgs, machine: bool) -> CmdResult {
    let resolved = document::load(&args.input)?.resolve()?;
    let q = &resolved.query;
    let cache = if args.cache {
        let dir = args.cache_dir.clone().unwrap_or_else(DiskCache::default_dir);
        Some(
            DiskCache::open(&dir)
                .map_err(|e| Failure::internal(format!("cannot open cache {}: {e}", dir.display())))?,
        )
    } else {
        None
    };
    let hit = cache.as_ref().and_then(|c| c.get(q, args.backend));
    let cache_state = match (&cache, &hit) {
        (None, _) => "off",
        (Some(_), Some(_)) => "hit",
        (Some(_), None) => "miss",
    };
    let result = match hit {
        Some(r) => r,
        None => {
            let r = Evaluator::new(args.backend).evaluate(q)?;
            if let Some(c) = &cache {
                c.put(q, &r)
                    .map_err(|e| Failure::internal(format!("cannot write cache entry in {}: {e}", c.dir().display())))?;
            }
            r
        }
    };

    if machine {
        println!("query={}", q.canonical_key());
        println!("value={}", result.value);
        println!("backend={}", result.backend);
        println!("ell_integral={}", result.ell_integral);
        println!("exceptional_case={}", result.exceptional_case);
        if let Some(a) = result.approx {
            println!("approx={a}");
        }
        if let Some(res) = result.float_residual {
            println!("float_residual={res:e}");
        }
        println!("cache={cache_state}");
    } else {
        println!(
            "D_{}(r={}, d={}, k={}, |I|={}) = {}",
            q.genus,
            q.rank(),
            q.degree,
            q.level(),
            q.omega.points().len(),
            result.value
        );
        println!("backend: {}", result.backend);
        println!("ell integral: {}", yes_no(result.ell_integral));
        println!("exceptional case: {}", yes_no(result.exceptional_case));
        if let (Some(a), Some(res)) = (result.approx, result.float_residual) {
            println!("float sum: {a} (distance to nearest integer {res:.3e})");
        }
        println!("cache: {cache_state}");
    }
    Ok(ExitCode::SUCCESS)
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, ValueEnum)]
pub enum SetKind {
    /// P_k: 0 ≤ μ_r ≤ … ≤ μ_1 < k.
    Pk,
    /// W_k: 0 = λ_r ≤ … ≤ λ_1 ≤ k.
    Wk,
    /// W'_k: λ ∈ W_k with offset + |λ| ≡ 0 mod r.
    Wkprime,
    /// Q_k: μ ∈ P_k with integral split degree (needs a document with a split block).
    Qk,
    /// v-vectors 0 = v_r < … < v_1 < r + k.
    Vvec,
}

#[derive(Args, Debug)]
pub struct EnumerateArgs {
    #[arg(value_enum)]
    pub set: SetKind,

    #[arg(long, short)]
    pub rank: Option<usize>,

    #[arg(long, short = 'k')]
    pub level: Option<i64>,

    /// Residue for W'_k (defaults to the document's split, else 0).
    #[arg(long, allow_hyphen_values = true)]
    pub offset: Option<i64>,

    /// Document supplying rank, level and the split.
    #[arg(long)]
    pub input: Option<String>,
}

pub fn enumerate(args: &EnumerateArgs, machine: bool) -> CmdResult {
    let resolved = args
        .input
        .as_deref()
        .map(|s| document::load(s).and_then(|d| d.resolve()))
        .transpose()?;
    let (rank, level) = match &resolved {
        Some(r) => {
            if args.rank.is_some_and(|x| x != r.query.rank()) || args.level.is_some_and(|x| x != r.query.level()) {
                return Err(Failure::input("--rank/--level disagree with the document"));
            }
            (r.query.rank(), r.query.level())
        }
        None => match (args.rank, args.level) {
            (Some(r), Some(k)) => (r, k),
            _ => return Err(Failure::input("--rank and --level are required without --input")),
        },
    };
    ParabolicData::empty(rank, level)?;

    let ctx = resolved.as_ref().and_then(|r| r.split.clone());
    let items: Vec<String> = match args.set {
        SetKind::Pk => enumerate_pk(rank, level).map(|w| w.to_string()).collect(),
        SetKind::Wk => enumerate_wk(rank, level).map(|w| w.to_string()).collect(),
        SetKind::Wkprime => {
            let offset = args.offset.or(ctx.as_ref().map(|c| c.wprime_offset())).unwrap_or(0);
            enumerate_wk_prime(rank, level, offset).map(|w| w.to_string()).collect()
        }
        SetKind::Qk => {
            let ctx = ctx.ok_or_else(|| Failure::input("qk needs --input with a split block"))?;
            enumerate_qk(rank, level, &ctx).map(|w| w.to_string()).collect()
        }
        SetKind::Vvec => v_vectors(rank, level).iter().map(|v| v.to_string()).collect(),
    };
    let mut out = String::new();
    for item in &items {
        writeln!(out, "{item}").unwrap();
    }
    if machine {
        writeln!(out, "count={}", items.len()).unwrap();
    } else {
        writeln!(out, "count: {}", items.len()).unwrap();
    }
    print!("{out}");
    Ok(ExitCode::SUCCESS)
}

/// An inclusive integer range written `a..b`, `a..=b` or `a`.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct Span {
    pub lo: i64,
    pub hi: i64,
}

impl Span {
    fn values(self) -> impl Iterator<Item = i64> {
        self.lo..=self.hi
    }

    fn check_min(self, min: i64, name: &str) -> Result<(), Failure> {
        if self.lo <= self.hi && self.lo < min {
            return Err(Failure::input(format!("--{name} values must be at least {min}")));
        }
        Ok(())
    }
}

impl FromStr for Span {
    type Err = String;
    fn from_str(s: &str) -> Result<Self, String> {
        let num = |t: &str| {
            t.trim()
                .parse::<i64>()
                .map_err(|_| format!("`{s}` is not a range (expected a..b or a single integer)"))
        };
        match s.split_once("..") {
            Some((a, b)) => Ok(Span {
                lo: num(a)?,
                hi: num(b.strip_prefix('=').unwrap_or(b))?,
            }),
            None => {
                let v = num(s)?;
                Ok(Span { lo: v, hi: v })
            }
        }
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, ValueEnum)]
pub enum TableFormat {
    Csv,
    /// One JSON object per line.
    Json,
}

#[derive(Args, Debug)]
pub struct TableArgs {
    #[arg(long, short, default_value = "0..2", allow_hyphen_values = true)]
    pub genus: Span,

    /// Defaults to 1..3; taken from the document with --input.
    #[arg(long, short, allow_hyphen_values = true)]
    pub rank: Option<Span>,

    /// Defaults to 1..3; taken from the document with --input.
    #[arg(long, short = 'k', allow_hyphen_values = true)]
    pub level: Option<Span>,

    #[arg(long, short, default_value = "0", allow_hyphen_values = true)]
    pub degree: Span,

    /// Document whose rank, level and points are used for every row.
    #[arg(long)]
    pub input: Option<String>,

    #[arg(long, value_enum, default_value = "csv")]
    pub format: TableFormat,

    #[arg(long, default_value = "exact")]
    pub backend: Backend,

    /// Largest estimated number of summands accepted without --force.
    #[arg(long, default_value_t = 5_000_000)]
    pub max_terms: u64,

    /// Run even when the estimate exceeds --max-terms.
    #[arg(long)]
    pub force: bool,
}

pub const TABLE_HEADER: &str = "g,r,k,d,points,value,ell_integral";

/// Number of v-vectors for (r, k), C(r + k − 1, r − 1), as a float so that
/// absurd ranges saturate instead of overflowing.
fn v_count(r: i64, k: i64) -> f64 {
    (1..r).fold(1.0, |acc, i| acc * (k + i) as f64 / i as f64)
}

pub fn table(args: &TableArgs) -> CmdResult {
    let base = match &args.input {
        Some(src) => {
            if args.rank.is_some() || args.level.is_some() {
                return Err(Failure::input("--rank and --level come from the document when --input is given"));
            }
            let q = document::load(src)?.resolve()?.query;
            Some(q.omega)
        }
        None => None,
    };
    let (ranks, levels) = match &base {
        Some(o) => {
            let (r, k) = (o.rank() as i64, o.level());
            (Span { lo: r, hi: r }, Span { lo: k, hi: k })
        }
        None => (
            args.rank.unwrap_or(Span { lo: 1, hi: 3 }),
            args.level.unwrap_or(Span { lo: 1, hi: 3 }),
        ),
    };
    args.genus.check_min(0, "genus")?;
    ranks.check_min(1, "rank")?;
    levels.check_min(1, "level")?;

    let len = |s: Span| (s.hi as i128 - s.lo as i128 + 1).max(0) as f64;
    let row_count = len(args.genus) * len(ranks) * len(levels) * len(args.degree);
    if row_count > args.max_terms as f64 && !args.force {
        return Err(Failure::input(format!(
            "{row_count:.0} rows exceed --max-terms {}; pass --force to run anyway",
            args.max_terms
        )));
    }
    let mut cells = Vec::new();
    let mut estimate = 0.0;
    for g in args.genus.values() {
        for r in ranks.values() {
            for k in levels.values() {
                for d in args.degree.values() {
                    estimate += v_count(r, k);
                    cells.push((g as u32, r as usize, k, d));
                }
            }
        }
    }
    if estimate > 1e5 {
        eprintln!("estimated terms: {estimate:.0} over {} rows", cells.len());
    }
    if estimate > args.max_terms as f64 && !args.force {
        return Err(Failure::input(format!(
            "estimated {estimate:.0} terms exceeds --max-terms {}; pass --force to run anyway",
            args.max_terms
        )));
    }

    let evaluator = Evaluator::new(args.backend);
    let rows: Vec<String> = cells
        .par_iter()
        .map(|&(g, r, k, d)| -> Result<String, Failure> {
            let omega = match &base {
                Some(o) => o.clone(),
                None => ParabolicData::empty(r, k)?,
            };
            let q = VerlindeQuery::new(g, d, omega);
            let res = evaluator.evaluate(&q)?;
            let n = q.omega.points().len();
            Ok(match args.format {
                TableFormat::Csv => format!("{g},{r},{k},{d},{n},{},{}", res.value, res.ell_integral),
                TableFormat::Json => format!(
                    "{{\"g\":{g},\"r\":{r},\"k\":{k},\"d\":{d},\"points\":{n},\"value\":{},\"ell_integral\":{}}}",
                    res.value, res.ell_integral
                ),
            })
        })
        .collect::<Result<_, _>>()?;

    let mut out = String::new();
    if args.format == TableFormat::Csv {
        writeln!(out, "{TABLE_HEADER}").unwrap();
    }
    for row in rows {
        writeln!(out, "{row}").unwrap();
    }
    print!("{out}");
    Ok(ExitCode::SUCCESS)
}

#[derive(Args, Debug)]
pub struct HeckeArgs {
    /// Query document (JSON), or `-` for stdin.
    pub input: String,

    /// Label of the marked point to transform.
    #[arg(long)]
    pub point: String,

    /// Use H^m (1 ≤ m < n_1) instead of the basic transformation.
    #[arg(long)]
    pub m: Option<usize>,

    /// Apply the inverse step, moving m entries (default: the whole last block).
    #[arg(long)]
    pub inverse: bool,
}

pub fn hecke(args: &HeckeArgs, machine: bool) -> CmdResult {
    let q = document::load(&args.input)?.resolve()?.query;
    let z = args.point.as_str();
    let (omega, shift) = if args.inverse {
        let m = match args.m {
            Some(m) => m,
            None => *q.omega.point(z)?.flag().last().unwrap(),
        };
        hecke_inverse(&q.omega, z, m)?
    } else {
        match args.m {
            None => hecke_basic(&q.omega, z)?,
            Some(m) => hecke_m(&normalize(&q.omega, z)?, z, m)?,
        }
    };
    let out = VerlindeQuery::new(q.genus, q.degree + shift, omega);
    let doc = QueryDocument::from_query(&out, None);
    if machine {
        println!("shift={shift}");
        println!("degree={}", out.degree);
        println!("document={}", doc.to_compact());
    } else {
        eprintln!("degree shift: {shift} (degree {} -> {})", q.degree, out.degree);
        println!("{}", doc.to_pretty());
    }
    Ok(ExitCode::SUCCESS)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn spans() {
        assert_eq!("0..2".parse::<Span>().unwrap(), Span { lo: 0, hi: 2 });
        assert_eq!("-1..=1".parse::<Span>().unwrap(), Span { lo: -1, hi: 1 });
        assert_eq!("4".parse::<Span>().unwrap(), Span { lo: 4, hi: 4 });
        assert_eq!("3..2".parse::<Span>().unwrap().values().count(), 0);
        assert!("a..b".parse::<Span>().is_err());
    }

    #[test]
    fn v_counts() {
        assert_eq!(v_count(1, 5), 1.0);
        assert_eq!(v_count(2, 1), 2.0);
        assert_eq!(v_count(3, 3) as usize, v_vectors(3, 3).len());
        assert_eq!(v_count(2, 2) as usize, v_vectors(2, 2).len());
    }
}
