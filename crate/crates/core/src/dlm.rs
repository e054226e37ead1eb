//! Deterministic learning machines.
//!
//! Three adaptive processors that turn a stream of identical (or slowly
//! varying) inputs into a stream of discrete output events whose relative
//! frequencies converge to the input's "intensity":
//!
//! * [`ScalarDlm`] learns a number `u ∈ [0,1]` and emits `±1`.
//! * [`DirectionDlm`] learns a planar unit vector and emits `0`/`1` with
//!   Malus-law frequencies.
//! * [`AverageDlm`] is the exponential moving average used inside beam
//!   splitters and adaptive detectors.

use crate::error::{Error, Result};
use crate::rng::RngStream;

/// Internal state of the scalar event generator.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct ScalarDlm {
    pub v: f64,
    pub gamma: f64,
}

impl ScalarDlm {
    pub fn new(v: f64, gamma: f64) -> Result<Self> {
        check_gamma(gamma, true)?;
        if !(0.0..=1.0).contains(&v) {
            return Err(Error::domain(format!("scalar state {v} outside [0,1]")));
        }
        Ok(Self { v, gamma })
    }

    /// Random initial estimate drawn from `rng`.
    pub fn random(gamma: f64, rng: &mut RngStream) -> Result<Self> {
        Self::new(rng.next_uniform(), gamma)
    }

    /// Process one input and return the output event `±1`.
    ///
    /// The two reachable states are `γv` and `γv + 1 − γ`; the machine moves
    /// to whichever lies closer to `u`. Equidistant candidates resolve to the
    /// upper one.
    pub fn step(&mut self, u: f64) -> Result<i8> {
        if !(0.0..=1.0).contains(&u) {
            return Err(Error::domain(format!("scalar input {u} outside [0,1]")));
        }
        let low = self.gamma * self.v;
        let high = low + (1.0 - self.gamma);
        if (high - u).abs() <= (low - u).abs() {
            self.v = high;
            Ok(1)
        } else {
            self.v = low;
            Ok(-1)
        }
    }
}

/// Probabilistic baseline: `+1` iff `r < p`.
pub fn born_sample(p: f64, r: f64) -> Result<i8> {
    if !(0.0..=1.0).contains(&p) {
        return Err(Error::domain(format!("probability {p} outside [0,1]")));
    }
    Ok(if r < p { 1 } else { -1 })
}

/// Internal unit vector of the Malus-law machine.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct DirectionDlm {
    pub v0: f64,
    pub v1: f64,
    pub gamma: f64,
}

impl DirectionDlm {
    pub fn new(angle: f64, gamma: f64) -> Result<Self> {
        check_gamma(gamma, false)?;
        Ok(Self {
            v0: angle.cos(),
            v1: angle.sin(),
            gamma,
        })
    }

    pub fn random(gamma: f64, rng: &mut RngStream) -> Result<Self> {
        Self::new(rng.angle(), gamma)
    }

    pub fn angle(&self) -> f64 {
        self.v1.atan2(self.v0)
    }

    /// Process one unit input vector and return the event `0` or `1`.
    ///
    /// Four candidate states are enumerated in the fixed order
    /// `(0,+), (0,−), (1,+), (1,−)`; the first one minimising `−v'·u` wins.
    pub fn step(&mut self, u: (f64, f64)) -> Result<u8> {
        let norm = u.0.hypot(u.1);
        if (norm - 1.0).abs() > 1e-9 {
            return Err(Error::domain(format!("input vector norm {norm} is not 1")));
        }
        let g = self.gamma;
        let g2 = g * g;
        let grow0 = (1.0 + g2 * (self.v0 * self.v0 - 1.0)).clamp(0.0, 1.0).sqrt();
        let grow1 = (1.0 + g2 * (self.v1 * self.v1 - 1.0)).clamp(0.0, 1.0).sqrt();
        let candidates = [
            (0u8, grow0, g * self.v1),
            (0u8, -grow0, g * self.v1),
            (1u8, g * self.v0, grow1),
            (1u8, g * self.v0, -grow1),
        ];
        let mut best = candidates[0];
        let mut best_cost = -(best.1 * u.0 + best.2 * u.1);
        for c in &candidates[1..] {
            let cost = -(c.1 * u.0 + c.2 * u.1);
            if cost < best_cost {
                best = *c;
                best_cost = cost;
            }
        }
        self.v0 = best.1;
        self.v1 = best.2;
        Ok(best.0)
    }
}

/// Exponential moving average of two-component vectors.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct AverageDlm {
    pub v: [f64; 2],
    pub gamma: f64,
}

impl AverageDlm {
    pub fn new(v: [f64; 2], gamma: f64) -> Result<Self> {
        check_gamma(gamma, true)?;
        Ok(Self { v, gamma })
    }

    /// Unit vector at a uniformly random angle.
    pub fn random(gamma: f64, rng: &mut RngStream) -> Result<Self> {
        let a = rng.angle();
        Self::new([a.cos(), a.sin()], gamma)
    }

    #[inline]
    pub fn update(&mut self, u: [f64; 2]) {
        let g = self.gamma;
        self.v[0] = g * self.v[0] + (1.0 - g) * u[0];
        self.v[1] = g * self.v[1] + (1.0 - g) * u[1];
    }

    #[inline]
    pub fn norm_sqr(&self) -> f64 {
        self.v[0] * self.v[0] + self.v[1] * self.v[1]
    }
}

pub(crate) fn check_gamma(gamma: f64, allow_zero: bool) -> Result<()> {
    let ok = if allow_zero {
        (0.0..1.0).contains(&gamma)
    } else {
        gamma > 0.0 && gamma < 1.0
    };
    if ok {
        Ok(())
    } else {
        Err(Error::domain(format!("learning parameter {gamma} out of range")))
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn scalar_worked_sequence() {
        let mut m = ScalarDlm::new(4.0 / 8.0, 0.5).unwrap();
        assert_eq!(m.step(5.0 / 8.0).unwrap(), 1);
        assert_eq!(m.v, 6.0 / 8.0);
        // 3/8 and 7/8 are equidistant from 5/8.
        assert_eq!(m.step(5.0 / 8.0).unwrap(), 1);
        assert_eq!(m.v, 7.0 / 8.0);
        assert_eq!(m.step(5.0 / 8.0).unwrap(), -1);
        assert_eq!(m.v, 7.0 / 16.0);
    }

    #[test]
    fn scalar_rejects_out_of_range_input() {
        let mut m = ScalarDlm::new(0.5, 0.5).unwrap();
        assert!(matches!(m.step(1.5), Err(Error::Domain(_))));
        assert!(matches!(m.step(-0.1), Err(Error::Domain(_))));
    }

    #[test]
    fn scalar_mean_tracks_input() {
        for &u in &[0.1, 0.5, 0.8] {
            let mut m = ScalarDlm::new(0.3, 0.999).unwrap();
            let n = 100_000;
            let s: i64 = (0..n).map(|_| i64::from(m.step(u).unwrap())).sum();
            let mean = s as f64 / n as f64;
            assert!((mean - (2.0 * u - 1.0)).abs() < 0.01, "u={u} mean={mean}");
            assert!((0.0..=1.0).contains(&m.v));
        }
    }

    #[test]
    fn born_sample_extremes() {
        let mut rng = RngStream::new(1, 1);
        for _ in 0..1000 {
            let r = rng.next_uniform();
            assert_eq!(born_sample(1.0, r).unwrap(), 1);
            assert_eq!(born_sample(0.0, r).unwrap(), -1);
        }
        assert!(born_sample(1.2, 0.3).is_err());
    }

    #[test]
    fn born_sample_half() {
        let mut rng = RngStream::new(5, 0);
        let n = 100_000;
        let s: i64 = (0..n)
            .map(|_| i64::from(born_sample(0.5, rng.next_uniform()).unwrap()))
            .sum();
        assert!((s as f64 / n as f64).abs() < 0.02);
    }

    fn stationary_zero_fraction(angle_deg: f64, gamma: f64, seed: u64) -> f64 {
        let mut rng = RngStream::new(seed, 0);
        let mut m = DirectionDlm::random(gamma, &mut rng).unwrap();
        let a = angle_deg.to_radians();
        let u = (a.cos(), a.sin());
        for _ in 0..1000 {
            m.step(u).unwrap();
        }
        let n = 10_000;
        let zeros = (0..n).filter(|_| m.step(u).unwrap() == 0).count();
        zeros as f64 / n as f64
    }

    #[test]
    fn direction_follows_malus_law() {
        assert_eq!(stationary_zero_fraction(0.0, 0.99, 3), 1.0);
        let f45 = stationary_zero_fraction(45.0, 0.99, 4);
        assert!((f45 - 0.5).abs() < 0.02, "{f45}");
        let f30 = stationary_zero_fraction(30.0, 0.99, 5);
        assert!((f30 - 0.75).abs() < 0.02, "{f30}");
    }

    #[test]
    fn direction_state_stays_unit() {
        let mut rng = RngStream::new(11, 0);
        let mut m = DirectionDlm::random(0.9, &mut rng).unwrap();
        for _ in 0..10_000 {
            let a = rng.angle();
            m.step((a.cos(), a.sin())).unwrap();
            assert!((m.v0.hypot(m.v1) - 1.0).abs() < 1e-12);
        }
    }

    #[test]
    fn direction_rejects_non_unit_input() {
        let mut m = DirectionDlm::new(0.0, 0.5).unwrap();
        assert!(m.step((1.0, 1.0)).is_err());
    }

    #[test]
    fn average_update_arithmetic() {
        let mut m = AverageDlm::new([0.0, 0.0], 0.5).unwrap();
        m.update([1.0, 0.0]);
        assert_eq!(m.v, [0.5, 0.0]);
        let mut fixed = AverageDlm::new([0.6, 0.8], 0.7).unwrap();
        fixed.update([0.6, 0.8]);
        assert!((fixed.v[0] - 0.6).abs() < 1e-15 && (fixed.v[1] - 0.8).abs() < 1e-15);
    }

    #[test]
    fn average_with_zero_gamma_echoes() {
        let mut m = AverageDlm::new([0.3, -0.2], 0.0).unwrap();
        m.update([0.0, 1.0]);
        assert_eq!(m.v, [0.0, 1.0]);
        m.update([1.0, 0.0]);
        assert_eq!(m.v, [1.0, 0.0]);
    }

    #[test]
    fn gamma_range_is_checked() {
        assert!(ScalarDlm::new(0.5, 1.0).is_err());
        assert!(DirectionDlm::new(0.0, 0.0).is_err());
        assert!(AverageDlm::new([0.0; 2], -0.1).is_err());
    }
}
