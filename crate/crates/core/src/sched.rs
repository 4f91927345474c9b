//! Deterministic seed schedule and bounded parallel map.
//!
//! Monte-Carlo loops across the crate derive the RNG for sample `i` from
//! `subseed(base, i)`, so any partition of the index range over threads
//! produces the same per-sample draws. Reductions are then performed in index
//! order, making results bit-identical for every thread count.

use rand_chacha::rand_core::SeedableRng;
use rand_chacha::ChaCha12Rng;

/// Sub-seed for sample `i` of a run seeded with `base`: the base passes
/// through a 64-bit finalizer before the XOR so that adjacent user seeds do
/// not alias each other's subseed sets over power-of-two sample ranges.
pub fn subseed(base: u64, i: u64) -> u64 {
    mix64(base) ^ i
}

fn mix64(x: u64) -> u64 {
    let mut z = x.wrapping_add(0x9e37_79b9_7f4a_7c15);
    z = (z ^ (z >> 30)).wrapping_mul(0xbf58_476d_1ce4_e5b9);
    z = (z ^ (z >> 27)).wrapping_mul(0x94d0_49bb_1331_11eb);
    z ^ (z >> 31)
}

/// Seeded RNG for sample `i`.
pub fn rng_for(base: u64, i: u64) -> ChaCha12Rng {
    ChaCha12Rng::seed_from_u64(subseed(base, i))
}

/// Thread cap: `QPROG_THREADS` if set, otherwise available parallelism.
pub fn thread_count() -> usize {
    std::env::var("QPROG_THREADS")
        .ok()
        .and_then(|s| s.parse::<usize>().ok())
        .filter(|&t| t >= 1)
        .unwrap_or_else(|| {
            std::thread::available_parallelism()
                .map(|n| n.get())
                .unwrap_or(1)
        })
}

/// Maps `f` over `0..n` on up to `threads` threads, returning results in
/// index order. `f(i)` must depend only on `i` for determinism.
pub fn parallel_map<T, F>(n: usize, threads: usize, f: F) -> Vec<T>
where
    T: Send,
    F: Fn(usize) -> T + Sync,
{
    let threads = threads.max(1).min(n.max(1));
    if threads <= 1 || n < 2 {
        return (0..n).map(f).collect();
    }
    let chunk = n.div_ceil(threads);
    let mut out: Vec<Option<T>> = (0..n).map(|_| None).collect();
    std::thread::scope(|scope| {
        for (tid, slice) in out.chunks_mut(chunk).enumerate() {
            let f = &f;
            scope.spawn(move || {
                for (j, slot) in slice.iter_mut().enumerate() {
                    *slot = Some(f(tid * chunk + j));
                }
            });
        }
    });
    out.into_iter().map(|o| o.expect("filled")).collect()
}

/// Kahan-compensated accumulator for f64 sums with a fixed summation order.
#[derive(Clone, Copy, Debug, Default)]
pub struct Kahan {
    sum: f64,
    carry: f64,
}

impl Kahan {
    pub fn add(&mut self, x: f64) {
        let y = x - self.carry;
        let t = self.sum + y;
        self.carry = (t - self.sum) - y;
        self.sum = t;
    }

    pub fn value(&self) -> f64 {
        self.sum
    }
}
