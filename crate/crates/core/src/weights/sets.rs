//! The index sets P_k, W_k, W'_k and Q_k as lexicographically ordered streams.

use super::{SplitContext, WeightVec};

/// Weakly decreasing r-tuples with entries in [0, max], optionally with the
/// last entry pinned to zero, in ascending lexicographic order.
#[derive(Clone, Debug)]
pub struct BoundedPartitions {
    max: i64,
    free: usize,
    current: Option<Vec<i64>>,
}

impl BoundedPartitions {
    pub fn new(rank: usize, max: i64, last_zero: bool) -> Self {
        assert!(rank >= 1, "rank must be positive");
        let free = if last_zero { rank - 1 } else { rank };
        let current = (max >= 0).then(|| vec![0; rank]);
        BoundedPartitions { max, free, current }
    }
}

impl Iterator for BoundedPartitions {
    type Item = WeightVec;

    fn next(&mut self) -> Option<WeightVec> {
        let out = self.current.clone()?;
        let cur = self.current.as_mut().unwrap();
        let mut advanced = false;
        for i in (0..self.free).rev() {
            let cap = if i == 0 { self.max } else { cur[i - 1] };
            if cur[i] < cap {
                cur[i] += 1;
                cur[i + 1..self.free].iter_mut().for_each(|x| *x = 0);
                advanced = true;
                break;
            }
        }
        if !advanced {
            self.current = None;
        }
        Some(WeightVec::from_parts_unchecked(out))
    }
}

/// P_k: 0 ≤ μ_r ≤ … ≤ μ_1 < k.
pub fn enumerate_pk(rank: usize, level: i64) -> BoundedPartitions {
    BoundedPartitions::new(rank, level - 1, false)
}

/// W_k: 0 = λ_r ≤ … ≤ λ_1 ≤ k.
pub fn enumerate_wk(rank: usize, level: i64) -> BoundedPartitions {
    BoundedPartitions::new(rank, level, true)
}

/// W'_k: λ ∈ W_k with offset + |λ| ≡ 0 (mod r).
pub fn enumerate_wk_prime(
    rank: usize,
    level: i64,
    offset: i64,
) -> impl Iterator<Item = WeightVec> {
    let r = rank as i64;
    enumerate_wk(rank, level).filter(move |l| (offset + l.size()).rem_euclid(r) == 0)
}

/// Q_k: μ ∈ P_k whose split degree d_1^μ is an integer.
pub fn enumerate_qk<'a>(
    rank: usize,
    level: i64,
    ctx: &'a SplitContext,
) -> impl Iterator<Item = WeightVec> + 'a {
    enumerate_pk(rank, level).filter(move |mu| ctx.d1(mu).is_integer())
}

/// C(n, k) for small arguments.
pub fn binomial(n: u64, k: u64) -> u64 {
    if k > n {
        return 0;
    }
    let k = k.min(n - k);
    (0..k).fold(1, |acc, i| acc * (n - i) / (i + 1))
}
