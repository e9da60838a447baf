//! Seeded, reproducible families of queries used by the verification
//! suites.

use rand::seq::index::sample;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use crate::verlinde::VerlindeQuery;
use crate::weights::{MarkedPoint, ParabolicData, SplitContext};

pub const DEFAULT_SEED: u64 = 0x5eed_2024;

/// A uniformly chosen flag type and strictly increasing weights below `level`.
pub fn random_point<R: Rng>(rng: &mut R, label: &str, rank: usize, level: i64) -> MarkedPoint {
    let steps = rng.random_range(1..=rank.min(level as usize));
    let mut cuts: Vec<usize> = if steps > 1 {
        sample(rng, rank - 1, steps - 1).into_iter().map(|c| c + 1).collect()
    } else {
        Vec::new()
    };
    cuts.sort_unstable();
    cuts.push(rank);
    let mut prev = 0;
    let flag = cuts
        .iter()
        .map(|&c| {
            let n = c - prev;
            prev = c;
            n
        })
        .collect();
    let mut weights: Vec<i64> = sample(rng, level as usize, steps).into_iter().map(|w| w as i64).collect();
    weights.sort_unstable();
    MarkedPoint::new(label, flag, weights)
}

/// ω with `points` random points labelled p0, p1, …
pub fn random_omega<R: Rng>(rng: &mut R, rank: usize, level: i64, points: usize) -> ParabolicData {
    let pts = (0..points)
        .map(|i| random_point(rng, &format!("p{i}"), rank, level))
        .collect();
    ParabolicData::new(rank, level, pts).expect("random points are valid")
}

/// Ranges for the genus-recurrence grid: every (r, k, g, d, |I|) cell with
/// 1 ≤ r ≤ max_rank, 1 ≤ k ≤ max_level, d ∈ 0..r, and `configs` random
/// weight configurations for each cell with points.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct GridBounds {
    pub max_rank: usize,
    pub max_level: i64,
    pub genera: Vec<u32>,
    pub max_points: usize,
    pub configs: usize,
    pub seed: u64,
}

impl Default for GridBounds {
    fn default() -> Self {
        GridBounds {
            max_rank: 3,
            max_level: 3,
            genera: vec![1, 2],
            max_points: 1,
            configs: 3,
            seed: DEFAULT_SEED,
        }
    }
}

pub fn genus_grid(b: &GridBounds) -> Vec<VerlindeQuery> {
    let mut rng = ChaCha8Rng::seed_from_u64(b.seed);
    let mut out = Vec::new();
    for r in 1..=b.max_rank {
        for k in 1..=b.max_level {
            for &g in &b.genera {
                for d in 0..r as i64 {
                    for points in 0..=b.max_points {
                        let configs = if points == 0 { 1 } else { b.configs };
                        for _ in 0..configs {
                            let omega = random_omega(&mut rng, r, k, points);
                            out.push(VerlindeQuery::new(g, d, omega));
                        }
                    }
                }
            }
        }
    }
    out
}

/// Ranges for the split grid. Each genus g is split as 1 + (g − 1); the
/// point sets are I = ∅ and two random points split one to each side.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct SplitBounds {
    pub rank: usize,
    pub max_level: i64,
    pub genera: Vec<u32>,
    pub polarizations: Vec<(i64, i64)>,
    pub configs: usize,
    pub seed: u64,
}

impl Default for SplitBounds {
    fn default() -> Self {
        SplitBounds {
            rank: 2,
            max_level: 3,
            genera: vec![2, 3],
            polarizations: vec![(1, 1), (1, 2)],
            configs: 3,
            seed: DEFAULT_SEED,
        }
    }
}

#[derive(Clone, Debug)]
pub struct SplitCase {
    pub query: VerlindeQuery,
    pub ctx: SplitContext,
}

/// Every cell whose context is valid (ℓ and both ℓ_j integral).
pub fn split_grid(b: &SplitBounds) -> Vec<SplitCase> {
    let mut rng = ChaCha8Rng::seed_from_u64(b.seed);
    let r = b.rank;
    let mut out = Vec::new();
    for k in 1..=b.max_level {
        let mut omegas = vec![ParabolicData::empty(r, k).expect("valid rank and level")];
        omegas.extend((0..b.configs).map(|_| random_omega(&mut rng, r, k, 2)));
        for &g in &b.genera {
            for d in 0..r as i64 {
                for omega in &omegas {
                    let i1: Vec<String> = omega.points().first().map(|p| p.label().to_string()).into_iter().collect();
                    for &(c1, c2) in &b.polarizations {
                        if let Ok(ctx) = SplitContext::new(omega, g, d, 1, &i1, c1, c2) {
                            out.push(SplitCase {
                                query: VerlindeQuery::new(g, d, omega.clone()),
                                ctx,
                            });
                        }
                    }
                }
            }
        }
    }
    out
}

/// Every legal Hecke transformation of a query: the basic one at points
/// with l ≥ 1, and H^m for 1 ≤ m < n_1 at every point.
pub fn hecke_moves(q: &VerlindeQuery) -> Vec<(String, Option<usize>)> {
    let mut out = Vec::new();
    for p in q.omega.points() {
        if p.jump_count() >= 1 {
            out.push((p.label().to_string(), None));
        }
        for m in 1..p.flag()[0] {
            out.push((p.label().to_string(), Some(m)));
        }
    }
    out
}
