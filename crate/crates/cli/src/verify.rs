//! The `verify` subcommand: residual suites over seeded grids.

use std::fmt::Write as _;
use std::process::ExitCode;

use clap::{Args, ValueEnum};
use rayon::prelude::*;
use verlinde::grid::{genus_grid, hecke_moves, split_grid, GridBounds, SplitBounds, DEFAULT_SEED};
use verlinde::schur::{identity_52_check, identity_53_check, identity_54_check};
use verlinde::verlinde::{v_vectors, Backend, Evaluator, VerifyMode, VerlindeQuery};
use verlinde::weights::SplitContext;

use crate::document::{self, QueryDocument};
use crate::{CmdResult, Failure};

#[derive(Clone, Copy, Debug, PartialEq, Eq, ValueEnum)]
pub enum Suite {
    /// Orthogonality identities of Schur polynomials at roots of unity.
    Identities,
    /// Genus recurrence.
    Genus,
    /// Splitting recurrence over P_k.
    Split,
    /// Splitting recurrence over W'_k.
    Wprime,
    /// Invariance under every legal Hecke transformation.
    Hecke,
    /// Exact and float backends agree.
    Backend,
}

#[derive(Args, Debug)]
pub struct VerifyArgs {
    #[arg(long, value_enum)]
    pub suite: Suite,

    /// Check this document instead of the grid (needs a split block for split and wprime).
    #[arg(long)]
    pub input: Option<String>,

    /// Largest rank (default 3; 2 for split and wprime).
    #[arg(long)]
    pub max_rank: Option<usize>,

    #[arg(long, default_value_t = 3)]
    pub max_level: i64,

    /// Comma-separated genera (default 1,2; 2,3 for split and wprime).
    #[arg(long, value_delimiter = ',')]
    pub genera: Option<Vec<u32>>,

    #[arg(long, default_value_t = 1)]
    pub max_points: usize,

    /// Random weight configurations per grid cell.
    #[arg(long, default_value_t = 3)]
    pub configs: usize,

    #[arg(long, default_value_t = DEFAULT_SEED)]
    pub seed: u64,

    /// Perturb the first check so that it fails; exercises the failure path.
    #[arg(long, hide = true)]
    pub inject_fault: bool,
}

/// One check, ready to run.
enum Case {
    Query {
        query: VerlindeQuery,
        mode: VerifyMode,
    },
    Identity {
        label: String,
        run: Box<dyn Fn() -> bool + Send + Sync>,
    },
}

struct Outcome {
    label: String,
    passed: bool,
    detail: String,
    document: Option<String>,
}

fn split_of(mode: &VerifyMode) -> Option<&SplitContext> {
    match mode {
        VerifyMode::Split(c) | VerifyMode::WPrime(c) => Some(c),
        _ => None,
    }
}

fn mode_label(mode: &VerifyMode) -> String {
    match mode {
        VerifyMode::Split(c) | VerifyMode::WPrime(c) => {
            format!("{} g1={} I1=[{}] c=({},{})", mode.name(), c.g1, c.i1.join(","), c.c1, c.c2)
        }
        VerifyMode::Hecke { point, m: None } => format!("hecke at {point}"),
        VerifyMode::Hecke { point, m: Some(m) } => format!("hecke^{m} at {point}"),
        other => other.name().to_string(),
    }
}

fn identity_cases(max_rank: usize, max_level: i64) -> Vec<Case> {
    let mut cases = Vec::new();
    for r in 1..=max_rank {
        for k in 1..=max_level {
            let vs = v_vectors(r, k);
            for v in &vs {
                let w = v.clone();
                cases.push(Case::Identity {
                    label: format!("P_k orthogonality r={r} k={k} v={v}"),
                    run: Box::new(move || identity_52_check(&w, k).is_zero()),
                });
                let w = v.clone();
                cases.push(Case::Identity {
                    label: format!("W_k orthogonality r={r} k={k} v={v}"),
                    run: Box::new(move || identity_53_check(&w, k).is_zero()),
                });
            }
            for (i, v) in vs.iter().enumerate() {
                for v2 in &vs[i + 1..] {
                    let (a, b) = (v.clone(), v2.clone());
                    cases.push(Case::Identity {
                        label: format!("v-vector orthogonality r={r} k={k} v={v} v'={v2}"),
                        run: Box::new(move || identity_54_check(&a, &b, k).is_zero()),
                    });
                }
            }
        }
    }
    cases
}

fn split_cases(
    args: &VerifyArgs,
    single: Option<(VerlindeQuery, Option<SplitContext>)>,
    wprime: bool,
) -> Result<Vec<Case>, Failure> {
    let wrap = |query: VerlindeQuery, ctx: SplitContext| Case::Query {
        query,
        mode: if wprime { VerifyMode::WPrime(ctx) } else { VerifyMode::Split(ctx) },
    };
    if let Some((q, ctx)) = single {
        let ctx = ctx.ok_or_else(|| Failure::input("this suite needs a document with a split block"))?;
        return Ok(vec![wrap(q, ctx)]);
    }
    let mut out = Vec::new();
    for rank in 1..=args.max_rank.unwrap_or(2) {
        let bounds = SplitBounds {
            rank,
            max_level: args.max_level,
            genera: args.genera.clone().unwrap_or_else(|| vec![2, 3]),
            configs: args.configs,
            seed: args.seed,
            ..SplitBounds::default()
        };
        out.extend(split_grid(&bounds).into_iter().map(|c| wrap(c.query, c.ctx)));
    }
    Ok(out)
}

fn build_cases(args: &VerifyArgs) -> Result<Vec<Case>, Failure> {
    let single = match &args.input {
        Some(src) => {
            let r = document::load(src)?.resolve()?;
            Some((r.query, r.split))
        }
        None => None,
    };
    let grid = || -> Vec<VerlindeQuery> {
        match &single {
            Some((q, _)) => vec![q.clone()],
            None => genus_grid(&GridBounds {
                max_rank: args.max_rank.unwrap_or(3),
                max_level: args.max_level,
                genera: args.genera.clone().unwrap_or_else(|| vec![1, 2]),
                max_points: args.max_points,
                configs: args.configs,
                seed: args.seed,
            }),
        }
    };
    let query_cases = |qs: Vec<VerlindeQuery>, mode: VerifyMode| {
        qs.into_iter()
            .map(|query| Case::Query {
                query,
                mode: mode.clone(),
            })
            .collect()
    };
    Ok(match args.suite {
        Suite::Identities => {
            if single.is_some() {
                return Err(Failure::input("the identities suite does not take a document"));
            }
            identity_cases(args.max_rank.unwrap_or(3), args.max_level)
        }
        Suite::Genus => {
            let qs = grid();
            if let Some(q) = qs.iter().find(|q| q.genus == 0) {
                return Err(Failure::input(format!("the genus recurrence needs g >= 1 (got {q})")));
            }
            query_cases(qs, VerifyMode::Genus)
        }
        Suite::Backend => query_cases(grid(), VerifyMode::Backend),
        Suite::Hecke => grid()
            .into_iter()
            .flat_map(|q| {
                hecke_moves(&q)
                    .into_iter()
                    .map(move |(point, m)| Case::Query {
                        query: q.clone(),
                        mode: VerifyMode::Hecke { point, m },
                    })
                    .collect::<Vec<_>>()
            })
            .collect(),
        Suite::Split => split_cases(args, single, false)?,
        Suite::Wprime => split_cases(args, single, true)?,
    })
}

fn run_case(evaluator: &Evaluator, case: &Case, inject: bool) -> Result<Outcome, Failure> {
    match case {
        Case::Identity { label, run } => {
            let passed = run() && !inject;
            Ok(Outcome {
                label: label.clone(),
                passed,
                detail: if passed { "residual 0".into() } else { "nonzero residual".into() },
                document: None,
            })
        }
        Case::Query { query, mode } => {
            let mut report = evaluator.verify(query, mode)?;
            if inject {
                report.lhs += 1;
                report.residual += 1.0;
                report.passed = false;
            }
            Ok(Outcome {
                label: format!("{} {query}", mode_label(mode)),
                passed: report.passed,
                detail: format!("lhs={} rhs={} residual={:e}", report.lhs, report.rhs, report.residual),
                document: Some(QueryDocument::from_query(query, split_of(mode)).to_compact()),
            })
        }
    }
}

pub fn run(args: &VerifyArgs, machine: bool) -> CmdResult {
    let cases = build_cases(args)?;
    let evaluator = Evaluator::new(Backend::Exact);
    let outcomes: Vec<Outcome> = cases
        .par_iter()
        .enumerate()
        .map(|(i, c)| run_case(&evaluator, c, args.inject_fault && i == 0))
        .collect::<Result<_, _>>()?;
    let failed: Vec<&Outcome> = outcomes.iter().filter(|o| !o.passed).collect();
    let name = args.suite.to_possible_value().unwrap().get_name().to_string();

    let mut out = String::new();
    for o in &failed {
        if machine {
            writeln!(out, "fail={} | {}", o.label, o.detail).unwrap();
            if let Some(doc) = &o.document {
                writeln!(out, "counterexample={doc}").unwrap();
            }
        } else {
            writeln!(out, "FAIL {}: {}", o.label, o.detail).unwrap();
            if let Some(doc) = &o.document {
                writeln!(out, "  counterexample: {doc}").unwrap();
            }
        }
    }
    if machine {
        writeln!(out, "suite={name}").unwrap();
        writeln!(out, "checks={}", outcomes.len()).unwrap();
        writeln!(out, "failed={}", failed.len()).unwrap();
    } else {
        let verdict = if failed.is_empty() { "ok" } else { "FAILED" };
        writeln!(out, "{name}: {} checks, {} failed: {verdict}", outcomes.len(), failed.len()).unwrap();
    }
    print!("{out}");
    Ok(if failed.is_empty() {
        ExitCode::SUCCESS
    } else {
        ExitCode::from(1)
    })
}
