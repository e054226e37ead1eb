//! Seedable pseudo-random streams.
//!
//! Every stochastic component owns exactly one [`RngStream`]. A stream is
//! keyed by the run's root seed and a 64-bit stream id; ids are derived from
//! a stable component path such as `"mzi/phi/3/bs2"`, so adding a component
//! never shifts the draws seen by another one.

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

/// Stable 64-bit id for a component path (FNV-1a).
pub fn stream_id(path: &str) -> u64 {
    const OFFSET: u64 = 0xcbf2_9ce4_8422_2325;
    const PRIME: u64 = 0x0000_0100_0000_01b3;
    path.bytes()
        .fold(OFFSET, |h, b| (h ^ u64::from(b)).wrapping_mul(PRIME))
}

/// A deterministic uniform stream. Same `(seed, stream_id)` gives the same
/// sequence on every platform.
#[derive(Debug, Clone)]
pub struct RngStream {
    seed: u64,
    stream_id: u64,
    rng: ChaCha8Rng,
}

impl RngStream {
    pub fn new(seed: u64, stream_id: u64) -> Self {
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        rng.set_stream(stream_id);
        Self {
            seed,
            stream_id,
            rng,
        }
    }

    /// Stream for the component at `path`.
    pub fn for_path(seed: u64, path: &str) -> Self {
        Self::new(seed, stream_id(path))
    }

    pub fn seed(&self) -> u64 {
        self.seed
    }

    pub fn stream_id(&self) -> u64 {
        self.stream_id
    }

    /// Next draw in `[0, 1)`.
    #[inline]
    pub fn next_uniform(&mut self) -> f64 {
        self.rng.gen::<f64>()
    }

    /// Uniform draw in `[lo, hi)`.
    #[inline]
    pub fn uniform_in(&mut self, lo: f64, hi: f64) -> f64 {
        lo + (hi - lo) * self.next_uniform()
    }

    /// Uniform angle in `[0, 2π)`.
    #[inline]
    pub fn angle(&mut self) -> f64 {
        self.uniform_in(0.0, std::f64::consts::TAU)
    }

    /// Fair coin.
    #[inline]
    pub fn bit(&mut self) -> bool {
        self.next_uniform() < 0.5
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn same_key_same_sequence() {
        let mut a = RngStream::new(42, 0);
        let mut b = RngStream::new(42, 0);
        let xs: Vec<f64> = (0..3).map(|_| a.next_uniform()).collect();
        let ys: Vec<f64> = (0..3).map(|_| b.next_uniform()).collect();
        assert_eq!(xs, ys);
    }

    #[test]
    fn draws_in_half_open_unit_interval() {
        let mut s = RngStream::new(7, 3);
        for _ in 0..100_000 {
            let r = s.next_uniform();
            assert!((0.0..1.0).contains(&r));
        }
    }

    #[test]
    fn mean_of_million_draws() {
        let mut s = RngStream::new(2024, 0);
        let n = 1_000_000;
        let mean = (0..n).map(|_| s.next_uniform()).sum::<f64>() / n as f64;
        assert!((mean - 0.5).abs() < 0.002, "mean {mean}");
    }

    #[test]
    fn sibling_streams_are_uncorrelated() {
        let mut a = RngStream::new(99, 0);
        let mut b = RngStream::new(99, 1);
        let n = 100_000;
        let xs: Vec<f64> = (0..n).map(|_| a.next_uniform()).collect();
        let ys: Vec<f64> = (0..n).map(|_| b.next_uniform()).collect();
        assert_ne!(xs[..8], ys[..8]);
        let mx = xs.iter().sum::<f64>() / n as f64;
        let my = ys.iter().sum::<f64>() / n as f64;
        let (mut sxy, mut sxx, mut syy) = (0.0, 0.0, 0.0);
        for (x, y) in xs.iter().zip(&ys) {
            sxy += (x - mx) * (y - my);
            sxx += (x - mx) * (x - mx);
            syy += (y - my) * (y - my);
        }
        let corr = sxy / (sxx * syy).sqrt();
        assert!(corr.abs() < 0.01, "corr {corr}");
    }

    #[test]
    fn path_ids_are_stable_and_distinct() {
        assert_eq!(stream_id("mzi/bs1"), stream_id("mzi/bs1"));
        assert_ne!(stream_id("mzi/bs1"), stream_id("mzi/bs2"));
        // FNV-1a of the empty string is the offset basis.
        assert_eq!(stream_id(""), 0xcbf2_9ce4_8422_2325);
    }
}
