//! Exhaustive enumeration of representations over `F_q` and the counts
//! built on it.

pub mod counts;
pub mod endo;
pub mod solutions;

use num_bigint::BigInt;

pub use counts::{count_abs_indec, nil_volume, nil_volume_filtered, stack_volume, AbsIndecCount, Volume};
pub use endo::{
    decompose, end_basis, is_abs_indec, is_indec, jordan_type, nilpotent_count, unit_count, EndRing,
    JordanType, Morphism,
};
pub use solutions::{count_solutions, fold_solutions, iterate_solutions, rank_orbit_size, tuple_exponent};

pub const DEFAULT_CAP: u64 = 100_000_000;
pub const DEFAULT_END_CAP: u64 = 10_000_000;

/// Resource limits and parallelism for enumeration.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct EnumOptions {
    pub workers: usize,
    /// Bound on the number of tuples visited.
    pub cap: u64,
    /// Bound on `q^dim End(M)` for exhaustive scans of an endomorphism ring.
    pub end_cap: u64,
    /// Fix the largest arrow to rank normal form and weight by orbit size.
    pub reduce: bool,
}

impl Default for EnumOptions {
    /// Honors `CANONKAC_WORKERS` and `CANONKAC_CAP`.
    fn default() -> Self {
        let env = |k: &str| std::env::var(k).ok().and_then(|v| v.trim().parse::<u64>().ok());
        let workers = env("CANONKAC_WORKERS")
            .map(|w| w.max(1) as usize)
            .unwrap_or_else(|| std::thread::available_parallelism().map_or(1, |n| n.get()));
        EnumOptions {
            workers,
            cap: env("CANONKAC_CAP").unwrap_or(DEFAULT_CAP),
            end_cap: DEFAULT_END_CAP,
            reduce: true,
        }
    }
}

impl EnumOptions {
    pub fn with_workers(mut self, workers: usize) -> Self {
        self.workers = workers.max(1);
        self
    }

    pub fn with_cap(mut self, cap: u64) -> Self {
        self.cap = cap;
        self
    }
}

/// `|GL_d(F_q)| = ∏_v ∏_{k<d_v} (q^{d_v} − q^k)`.
pub fn gl_order(d: &[usize], q: u64) -> BigInt {
    let q = BigInt::from(q);
    let mut out = BigInt::from(1);
    for &n in d {
        let top = num_traits::pow(q.clone(), n);
        for k in 0..n {
            out *= &top - num_traits::pow(q.clone(), k);
        }
    }
    out
}
