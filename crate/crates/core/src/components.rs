//! Optical and neutron-optical processing units.

use std::f64::consts::{FRAC_1_SQRT_2, FRAC_PI_8};

use num_complex::Complex64;
use serde::{Deserialize, Serialize};

use crate::dlm::check_gamma;
use crate::error::{Error, Result};
use crate::messengers::{ScalarMessage, Spinor};
use crate::rng::RngStream;

const I: Complex64 = Complex64::new(0.0, 1.0);

fn re(x: f64) -> Complex64 {
    Complex64::new(x, 0.0)
}

/// Transfer matrix family of a splitter.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum SplitterKind {
    /// Lossless 50/50 beam splitter `(1/√2) [[1, i], [i, 1]]`.
    Photon5050,
    /// Polarizing beam splitter: reflects one polarization, transmits the other.
    Polarizing,
    /// Spin-independent crystal plate with reflectivity `R`.
    Neutron { reflectivity: f64 },
}

/// Adaptive two-input splitter.
///
/// The unit keeps the last message seen on each input and a running estimate
/// `v` of how often each input is used; the output amplitudes are built from
/// these, not from the current message alone.
#[derive(Debug, Clone, PartialEq)]
pub struct Splitter {
    pub kind: SplitterKind,
    pub v: [f64; 2],
    pub registers: [Spinor; 2],
    pub gamma: f64,
}

impl Splitter {
    /// Splitter with `v = (r, 1 − r)` and random unit registers. The 50/50
    /// photon splitter carries scalar messages, so its registers are random
    /// phases in the first component.
    pub fn new(kind: SplitterKind, gamma: f64, rng: &mut RngStream) -> Result<Self> {
        let r = rng.next_uniform();
        let registers = match kind {
            SplitterKind::Photon5050 => [
                Spinor::from_scalar(ScalarMessage::from_phase(rng.angle())),
                Spinor::from_scalar(ScalarMessage::from_phase(rng.angle())),
            ],
            _ => [Spinor::random(rng), Spinor::random(rng)],
        };
        Self::with_state(kind, gamma, [r, 1.0 - r], registers)
    }

    pub fn with_state(
        kind: SplitterKind,
        gamma: f64,
        v: [f64; 2],
        registers: [Spinor; 2],
    ) -> Result<Self> {
        check_gamma(gamma, false)?;
        if let SplitterKind::Neutron { reflectivity } = kind {
            if !(0.0..=1.0).contains(&reflectivity) {
                return Err(Error::config(format!(
                    "reflectivity {reflectivity} outside [0,1]"
                )));
            }
        }
        if v[0] < 0.0 || v[1] < 0.0 || (v[0] + v[1] - 1.0).abs() > 1e-12 {
            return Err(Error::domain(format!("splitter state {v:?} is not a frequency pair")));
        }
        Ok(Self {
            kind,
            v,
            registers,
            gamma,
        })
    }

    /// The two candidate output messages `(channel 0, channel 1)` before
    /// normalization, given the current registers and `v`.
    pub fn amplitudes(&self) -> (Spinor, Spinor) {
        let a0 = self.v[0].sqrt();
        let a1 = self.v[1].sqrt();
        let [r0, r1] = self.registers;
        match self.kind {
            SplitterKind::Photon5050 => {
                let k = re(FRAC_1_SQRT_2);
                let out0 = r0.scale(re(a0) * k) + r1.scale(I * a1 * k);
                let out1 = r0.scale(I * a0 * k) + r1.scale(re(a1) * k);
                (out0, out1)
            }
            SplitterKind::Polarizing => {
                let h0 = r0.0[0] * a0;
                let h1 = r1.0[0] * a1;
                let h2 = I * r1.0[1] * a1;
                let h3 = I * r0.0[1] * a0;
                (Spinor::new(h1, h3), Spinor::new(h0, h2))
            }
            SplitterKind::Neutron { reflectivity } => {
                let t = re((1.0 - reflectivity).sqrt());
                let r = I * reflectivity.sqrt();
                let transmitted = r0.scale(t * a0) + r1.scale(r * a1);
                let reflected = r0.scale(r * a0) + r1.scale(t * a1);
                (reflected, transmitted)
            }
        }
    }

    /// Process one message arriving on `input` and route it using the
    /// uniform draw `r`. Returns the output channel and the outgoing message.
    pub fn process(&mut self, input: u8, msg: Spinor, r: f64) -> Result<(u8, Spinor)> {
        if input > 1 {
            return Err(Error::domain(format!("splitter has no input channel {input}")));
        }
        let k = usize::from(input);
        self.registers[k] = msg;
        let g = self.gamma;
        let q = if k == 0 { [1.0, 0.0] } else { [0.0, 1.0] };
        self.v = [g * self.v[0] + (1.0 - g) * q[0], g * self.v[1] + (1.0 - g) * q[1]];

        let (out0, out1) = self.amplitudes();
        // The photon BS tests channel 0; the PBS family tests channel 1.
        let (tested, tested_channel, other, other_channel) = match self.kind {
            SplitterKind::Photon5050 => (out0, 0u8, out1, 1u8),
            _ => (out1, 1u8, out0, 0u8),
        };
        let first = tested.norm_sqr() > r;
        let (chan, pick, alt) = if first {
            (tested_channel, tested, other)
        } else {
            (other_channel, other, tested)
        };
        match pick.normalized() {
            Some(m) => Ok((chan, m)),
            None => {
                let alt_chan = 1 - chan;
                alt.normalized()
                    .map(|m| (alt_chan, m))
                    .ok_or_else(|| Error::domain("splitter produced two empty outputs"))
            }
        }
    }
}

/// Half-wave plate with optical axis at `theta`.
pub fn hwp_transform(msg: Spinor, theta: f64) -> Spinor {
    let (s, c) = (2.0 * theta).sin_cos();
    let [u0, u1] = msg.0;
    Spinor::new(-I * (u0 * c + u1 * s), -I * (u0 * s - u1 * c))
}

/// Electro-optic modulator: a half-wave plate at π/8 when switched on.
pub fn eom_transform(msg: Spinor, active: bool) -> Spinor {
    if active {
        hwp_transform(msg, FRAC_PI_8)
    } else {
        msg
    }
}

/// Half-wave plate angle whose mixing strength `sin²2θ` equals `reflectivity`.
pub fn eom_angle_for_reflectivity(reflectivity: f64) -> Result<f64> {
    if !(0.0..=1.0).contains(&reflectivity) {
        return Err(Error::config(format!("reflectivity {reflectivity} outside [0,1]")));
    }
    Ok(reflectivity.sqrt().asin() / 2.0)
}

/// Global phase `e^{iχ}`.
pub fn phase_shift(msg: Spinor, chi: f64) -> Spinor {
    msg.advance_phase(chi)
}

/// Spin analyzer: the particle passes iff its spin-up weight exceeds `r`.
pub fn spin_analyzer_select(msg: Spinor, r: f64) -> bool {
    msg.0[0].norm_sqr() > r
}

/// Simplified polarizer for pair experiments: `+1` iff `r ≤ cos²ξ'`.
pub fn malus_pbs_sample(xi_prime: f64, r: f64) -> i8 {
    if r <= xi_prime.cos().powi(2) {
        1
    } else {
        -1
    }
}

/// Polarization-dependent delay, uniform on `[0, T0 sin⁴2ξ']`.
pub fn time_tag_sample(xi_prime: f64, t0: f64, r: f64) -> Result<f64> {
    if !(t0 > 0.0) {
        return Err(Error::config(format!("maximum delay {t0} must be positive")));
    }
    Ok(t0 * (2.0 * xi_prime).sin().powi(4) * r)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::messengers::Axis;
    use approx::assert_abs_diff_eq;
    use std::f64::consts::{FRAC_PI_2, FRAC_PI_4, PI};

    fn c(re: f64, im: f64) -> Complex64 {
        Complex64::new(re, im)
    }

    fn close(a: Spinor, b: Spinor, tol: f64) -> bool {
        (a.0[0] - b.0[0]).norm() < tol && (a.0[1] - b.0[1]).norm() < tol
    }

    #[test]
    fn bs_stationary_split() {
        let mut rng = RngStream::new(3, 0);
        let mut bs = Splitter::new(SplitterKind::Photon5050, 0.98, &mut rng).unwrap();
        let m = Spinor::from_scalar(ScalarMessage([1.0, 0.0]));
        for _ in 0..2000 {
            bs.process(0, m, rng.next_uniform()).unwrap();
        }
        assert!(bs.v[0] > 1.0 - 1e-12);
        let mut counts = [0usize; 2];
        for _ in 0..10_000 {
            let (ch, out) = bs.process(0, m, rng.next_uniform()).unwrap();
            counts[usize::from(ch)] += 1;
            let expect = if ch == 0 { c(1.0, 0.0) } else { c(0.0, 1.0) };
            assert!((out.0[0] - expect).norm() < 1e-6, "{out:?}");
        }
        assert!((counts[0] as f64 / 10_000.0 - 0.5).abs() < 0.02, "{counts:?}");
    }

    #[test]
    fn neutron_without_reflection_transmits() {
        let mut rng = RngStream::new(5, 0);
        let kind = SplitterKind::Neutron { reflectivity: 0.0 };
        let mut bs = Splitter::new(kind, 0.9, &mut rng).unwrap();
        for _ in 0..1000 {
            bs.process(0, Spinor::UP, rng.next_uniform()).unwrap();
        }
        for _ in 0..1000 {
            let (ch, out) = bs.process(0, Spinor::UP, rng.next_uniform()).unwrap();
            assert_eq!(ch, 1);
            assert!(close(out, Spinor::UP, 1e-9));
        }
    }

    #[test]
    fn amplitudes_are_unitary() {
        let mut rng = RngStream::new(12, 0);
        let kinds = [
            SplitterKind::Photon5050,
            SplitterKind::Polarizing,
            SplitterKind::Neutron { reflectivity: 0.2 },
        ];
        for kind in kinds {
            let mut bs = Splitter::new(kind, 0.95, &mut rng).unwrap();
            for _ in 0..2000 {
                let ch = u8::from(rng.bit());
                let (_, out) = bs.process(ch, Spinor::random(&mut rng), rng.next_uniform()).unwrap();
                let (o0, o1) = bs.amplitudes();
                assert_abs_diff_eq!(o0.norm_sqr() + o1.norm_sqr(), 1.0, epsilon = 1e-12);
                assert_abs_diff_eq!(out.norm_sqr(), 1.0, epsilon = 1e-9);
                assert_abs_diff_eq!(bs.v[0] + bs.v[1], 1.0, epsilon = 1e-12);
                assert!(bs.v[0] >= 0.0 && bs.v[1] >= 0.0);
            }
        }
    }

    #[test]
    fn hwp_examples() {
        let u = Spinor::photon(0.4, -0.9, 0.3);
        let [u0, u1] = u.0;
        let w = hwp_transform(u, FRAC_PI_4);
        assert!(close(w, Spinor::new(-I * u1, -I * u0), 1e-15));
        let w0 = hwp_transform(u, 0.0);
        assert!(close(w0, Spinor::new(-I * u0, I * u1), 1e-15));
        let twice = hwp_transform(hwp_transform(u, 0.7), 0.7);
        assert!(close(twice, u.scale(c(-1.0, 0.0)), 1e-15));
    }

    #[test]
    fn eom_examples() {
        let u = Spinor::photon(0.1, 0.2, 0.3);
        assert_eq!(eom_transform(u, false), u);
        let h = FRAC_PI_4.cos();
        let w = eom_transform(Spinor::UP, true);
        assert!(close(w, Spinor::new(c(0.0, -h), c(0.0, -h)), 1e-15));
        let twice = eom_transform(eom_transform(Spinor::UP, true), true);
        assert!(!close(twice, Spinor::UP, 1e-6));
        assert_abs_diff_eq!(eom_angle_for_reflectivity(0.5).unwrap(), FRAC_PI_8, epsilon = 1e-15);
    }

    #[test]
    fn phase_shift_examples() {
        let u = Spinor::photon(0.1, 0.2, 0.3);
        assert_eq!(phase_shift(u, 0.0), u);
        assert!(close(phase_shift(u, PI), u.scale(c(-1.0, 0.0)), 1e-15));
        let w = phase_shift(u, 1.234);
        assert_abs_diff_eq!(w.0[0].norm(), u.0[0].norm(), epsilon = 1e-15);
        assert_abs_diff_eq!(w.0[1].norm(), u.0[1].norm(), epsilon = 1e-15);
    }

    #[test]
    fn spin_analyzer_examples() {
        let mut rng = RngStream::new(2, 0);
        let x_pol = Spinor::UP.su2_rotate(Axis::Y, FRAC_PI_2);
        let mut pass = 0;
        for _ in 0..10_000 {
            let r = rng.next_uniform();
            assert!(spin_analyzer_select(Spinor::UP, r));
            assert!(!spin_analyzer_select(Spinor::DOWN, r));
            pass += usize::from(spin_analyzer_select(x_pol, r));
        }
        assert!((pass as f64 / 10_000.0 - 0.5).abs() < 0.02);
    }

    #[test]
    fn malus_pbs_examples() {
        let mut rng = RngStream::new(6, 0);
        let n = 100_000;
        let mut sum = 0i64;
        for _ in 0..n {
            let r = rng.next_uniform();
            assert_eq!(malus_pbs_sample(0.0, r), 1);
            assert_eq!(malus_pbs_sample(FRAC_PI_2, r), -1);
            sum += i64::from(malus_pbs_sample(FRAC_PI_4, r));
        }
        assert!((sum as f64 / n as f64).abs() < 0.02);
    }

    #[test]
    fn time_tag_examples() {
        let mut rng = RngStream::new(7, 0);
        let mut max_quarter: f64 = 0.0;
        for _ in 0..10_000 {
            let r = rng.next_uniform();
            assert_eq!(time_tag_sample(0.0, 1000.0, r).unwrap(), 0.0);
            let full = time_tag_sample(FRAC_PI_4, 1000.0, r).unwrap();
            assert!((0.0..=1000.0).contains(&full));
            max_quarter = max_quarter.max(time_tag_sample(FRAC_PI_8, 1000.0, r).unwrap());
        }
        assert!(max_quarter <= 250.0 + 1e-9 && max_quarter > 249.0);
        assert!(time_tag_sample(0.3, 0.0, 0.5).is_err());
    }
}
