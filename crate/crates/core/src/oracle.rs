//! Closed-form wave/quantum predictions used as comparison targets.

use std::f64::consts::{FRAC_1_SQRT_2, FRAC_PI_2, TAU};

use num_complex::Complex64;

use crate::error::{Error, Result};
use crate::messengers::{su2_matrix, Axis};

type C = Complex64;
pub type Matrix2 = [[C; 2]; 2];

fn re(x: f64) -> C {
    C::new(x, 0.0)
}

/// Ordinary and extraordinary intensity fractions behind a polarizer.
pub fn malus_intensity(psi: f64, phi: f64) -> (f64, f64) {
    let d = psi - phi;
    (d.sin().powi(2), d.cos().powi(2))
}

/// `sin(x)/x`, evaluated by its series near zero.
pub fn sinc(x: f64) -> f64 {
    if x.abs() < 1e-6 {
        1.0 - x * x / 6.0
    } else {
        x.sin() / x
    }
}

/// Far-field two-slit intensity at screen angle `theta`, normalized to a
/// peak of one. Lengths in units of the wavelength, so `q = 2π`.
pub fn two_beam_intensity(theta: f64, a: f64, d: f64) -> f64 {
    let s = theta.sin();
    let env = sinc(TAU * a * s / 2.0);
    env * env * (TAU * d * s / 2.0).cos().powi(2)
}

/// Single-slit envelope of [`two_beam_intensity`].
pub fn single_slit_intensity(theta: f64, a: f64) -> f64 {
    sinc(TAU * a * theta.sin() / 2.0).powi(2)
}

/// `(1/√2) [[1, i], [i, 1]]`.
pub fn beam_splitter_matrix() -> Matrix2 {
    let h = FRAC_1_SQRT_2;
    [[re(h), C::new(0.0, h)], [C::new(0.0, h), re(h)]]
}

pub fn matmul(a: &Matrix2, b: &Matrix2) -> Matrix2 {
    let mut out = [[re(0.0); 2]; 2];
    for i in 0..2 {
        for j in 0..2 {
            out[i][j] = a[i][0] * b[0][j] + a[i][1] * b[1][j];
        }
    }
    out
}

/// Transfer matrix of a Mach-Zehnder interferometer with arm phases
/// `phi0`, `phi1`.
pub fn mzi_matrix(phi0: f64, phi1: f64) -> Matrix2 {
    let bs = beam_splitter_matrix();
    let ph = [
        [C::from_polar(1.0, phi0), re(0.0)],
        [re(0.0), C::from_polar(1.0, phi1)],
    ];
    matmul(&bs, &matmul(&ph, &bs))
}

/// Output probabilities `(|b0|², |b1|²)` for a particle entering port 0.
pub fn mzi_probabilities(phi0: f64, phi1: f64) -> (f64, f64) {
    let m = mzi_matrix(phi0, phi1);
    (m[0][0].norm_sqr(), m[1][0].norm_sqr())
}

/// `(p_H, p_O)` for the triple-Laue neutron interferometer.
pub fn neutron_mzi_probabilities(chi: f64, reflectivity: f64) -> Result<(f64, f64)> {
    check_reflectivity(reflectivity)?;
    let (r, t) = (reflectivity, 1.0 - reflectivity);
    let p_h = r * (t * t + r * r - 2.0 * r * t * chi.cos());
    let p_o = 2.0 * r * r * t * (1.0 + chi.cos());
    Ok((p_h, p_o))
}

/// Spin-up probability in the O-beam of the neutron Bell interferometer.
pub fn neutron_bell_probability(alpha: f64, chi: f64, reflectivity: f64) -> Result<f64> {
    check_reflectivity(reflectivity)?;
    let t = 1.0 - reflectivity;
    Ok(t * reflectivity * reflectivity * (1.0 + (alpha + chi).cos()))
}

pub fn neutron_bell_e(alpha: f64, chi: f64) -> f64 {
    (alpha + chi).cos()
}

/// Photon singlet correlations `(E1, E2, E)`.
pub fn singlet_correlation(a1: f64, a2: f64) -> (f64, f64, f64) {
    (0.0, 0.0, -(2.0 * (a1 - a2)).cos())
}

/// Spin-½ singlet correlation `−a1·a2` for coplanar unit vectors.
pub fn spin_singlet_correlation(a1: f64, a2: f64) -> f64 {
    -(a1 - a2).cos()
}

fn check_reflectivity(r: f64) -> Result<()> {
    if (0.0..=1.0).contains(&r) {
        Ok(())
    } else {
        Err(Error::config(format!("reflectivity {r} outside [0,1]")))
    }
}

/// Amplitudes over four paths with two spin states each, indexed
/// `(path, spin) → 2·path + spin`.
pub type StateVector8 = [C; 8];

pub fn basis_state(index: usize) -> StateVector8 {
    let mut s = [re(0.0); 8];
    s[index] = re(1.0);
    s
}

pub fn norm_sqr(s: &StateVector8) -> f64 {
    s.iter().map(|c| c.norm_sqr()).sum()
}

/// A 2×2 operation acting on the component pair `(i, j)`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Block {
    pub i: usize,
    pub j: usize,
    pub m: Matrix2,
}

impl Block {
    pub fn new(i: usize, j: usize, m: Matrix2) -> Self {
        Self { i, j, m }
    }

    fn is_unitary(&self) -> bool {
        let m = &self.m;
        let col0 = m[0][0].norm_sqr() + m[1][0].norm_sqr();
        let col1 = m[0][1].norm_sqr() + m[1][1].norm_sqr();
        let dot = m[0][0].conj() * m[0][1] + m[1][0].conj() * m[1][1];
        (col0 - 1.0).abs() < 1e-12 && (col1 - 1.0).abs() < 1e-12 && dot.norm() < 1e-12
    }
}

/// Transmission and reflection amplitudes of a crystal plate.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct PlateCoefficients {
    pub t: C,
    pub r: C,
}

impl PlateCoefficients {
    /// Real coefficients `t = √T`, `r = √R`.
    pub fn real(reflectivity: f64) -> Result<Self> {
        check_reflectivity(reflectivity)?;
        Ok(Self {
            t: re((1.0 - reflectivity).sqrt()),
            r: re(reflectivity.sqrt()),
        })
    }

    /// Coefficients `t = √T`, `r = i√R` used by the event-based splitter.
    pub fn symmetric(reflectivity: f64) -> Result<Self> {
        check_reflectivity(reflectivity)?;
        Ok(Self {
            t: re((1.0 - reflectivity).sqrt()),
            r: C::new(0.0, reflectivity.sqrt()),
        })
    }

    /// `[[t, −r*], [r, t*]]`
    pub fn forward(&self) -> Matrix2 {
        [[self.t, -self.r.conj()], [self.r, self.t.conj()]]
    }

    /// `[[t*, r], [−r*, t]]`
    pub fn backward(&self) -> Matrix2 {
        [[self.t.conj(), self.r], [-self.r.conj(), self.t]]
    }
}

fn phase(phi: f64) -> Matrix2 {
    let p = C::from_polar(1.0, phi);
    [[p, re(0.0)], [re(0.0), p]]
}

/// Interferometer blocks in the order they act: BS0, BS1, BS2, phase
/// shifters, BS3. Optional spin rotations for the mu-metal turner are
/// inserted after BS0 when `mu_metal` is set.
fn interferometer_blocks(c: &PlateCoefficients, chi0: f64, chi1: f64, mu_metal: bool) -> Vec<Block> {
    let f = c.forward();
    let b = c.backward();
    let mut blocks = vec![Block::new(0, 2, f), Block::new(1, 3, f)];
    if mu_metal {
        blocks.push(Block::new(0, 1, su2_matrix(Axis::Y, -FRAC_PI_2)));
        blocks.push(Block::new(2, 3, su2_matrix(Axis::Y, FRAC_PI_2)));
    }
    blocks.extend([
        Block::new(0, 4, f),
        Block::new(1, 5, f),
        Block::new(2, 6, b),
        Block::new(3, 7, b),
        Block::new(4, 5, phase(chi0)),
        Block::new(6, 7, phase(chi1)),
        Block::new(4, 6, b),
        Block::new(5, 7, b),
    ]);
    blocks
}

/// Network of the neutron Mach-Zehnder interferometer.
pub fn neutron_mzi_network(c: &PlateCoefficients, chi0: f64, chi1: f64) -> Vec<Block> {
    interferometer_blocks(c, chi0, chi1, false)
}

/// Network of the neutron Bell interferometer, ending with the spin rotator
/// by `alpha` about x on the O-beam.
pub fn neutron_bell_network(c: &PlateCoefficients, alpha: f64, chi0: f64, chi1: f64) -> Vec<Block> {
    let mut blocks = interferometer_blocks(c, chi0, chi1, true);
    blocks.push(Block::new(6, 7, su2_matrix(Axis::X, alpha)));
    blocks
}

/// Apply `network` in order. Every block must be unitary and the result
/// keeps the input norm.
pub fn propagate_neutron_state(network: &[Block], input: StateVector8) -> Result<StateVector8> {
    let n0 = norm_sqr(&input);
    if (n0 - 1.0).abs() > 1e-12 {
        return Err(Error::domain(format!("input state has norm² {n0}")));
    }
    let mut s = input;
    for blk in network {
        if blk.i >= 8 || blk.j >= 8 || blk.i == blk.j {
            return Err(Error::config(format!("bad block indices ({}, {})", blk.i, blk.j)));
        }
        if !blk.is_unitary() {
            return Err(Error::config(format!(
                "block on ({}, {}) is not unitary",
                blk.i, blk.j
            )));
        }
        let (a, b) = (s[blk.i], s[blk.j]);
        s[blk.i] = blk.m[0][0] * a + blk.m[0][1] * b;
        s[blk.j] = blk.m[1][0] * a + blk.m[1][1] * b;
    }
    debug_assert!((norm_sqr(&s) - 1.0).abs() < 1e-9);
    Ok(s)
}

/// Probability of being on `path` (either spin).
pub fn path_probability(s: &StateVector8, path: usize) -> f64 {
    s[2 * path].norm_sqr() + s[2 * path + 1].norm_sqr()
}
