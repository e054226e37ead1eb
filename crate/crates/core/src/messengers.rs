//! Particle messages and the rules by which they change in flight.
//!
//! Lengths are measured in units of `c/f` and times in units of `1/f`, so a
//! time of flight `t` corresponds to an oscillator phase `2πt`.

use std::f64::consts::{FRAC_PI_2, TAU};

use num_complex::Complex64;

use crate::error::{Error, Result};
use crate::rng::RngStream;

/// Planar unit vector `(cos 2πt, sin 2πt)` carried by a photon without
/// polarization.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct ScalarMessage(pub [f64; 2]);

impl ScalarMessage {
    pub fn from_phase(phase: f64) -> Self {
        Self([phase.cos(), phase.sin()])
    }

    /// Message of a messenger whose clock has run for `t` periods.
    pub fn from_time(t: f64) -> Self {
        Self::from_phase(TAU * t)
    }

    pub fn advance_phase(self, phi: f64) -> Self {
        let (s, c) = phi.sin_cos();
        let [x, y] = self.0;
        Self([c * x - s * y, s * x + c * y])
    }

    /// The same message read as the complex number `c0 + i c1`.
    pub fn to_complex(self) -> Complex64 {
        Complex64::new(self.0[0], self.0[1])
    }

    pub fn norm(self) -> f64 {
        self.0[0].hypot(self.0[1])
    }
}

/// Two complex amplitudes: photon polarization or neutron spin.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Spinor(pub [Complex64; 2]);

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Axis {
    X,
    Y,
    Z,
}

impl Spinor {
    pub const UP: Spinor = Spinor([Complex64::new(1.0, 0.0), Complex64::new(0.0, 0.0)]);
    pub const DOWN: Spinor = Spinor([Complex64::new(0.0, 0.0), Complex64::new(1.0, 0.0)]);

    pub fn new(m0: Complex64, m1: Complex64) -> Self {
        Self([m0, m1])
    }

    /// Polarized photon `(e^{iψ1} sin ξ, e^{iψ2} cos ξ)`.
    pub fn photon(psi1: f64, psi2: f64, xi: f64) -> Self {
        Self([
            Complex64::from_polar(xi.sin(), psi1),
            Complex64::from_polar(xi.cos(), psi2),
        ])
    }

    /// Neutron `(e^{iψ1} cos θ/2, e^{iψ2} sin θ/2)`.
    pub fn neutron(psi1: f64, psi2: f64, theta: f64) -> Self {
        Self([
            Complex64::from_polar((theta / 2.0).cos(), psi1),
            Complex64::from_polar((theta / 2.0).sin(), psi2),
        ])
    }

    /// Scalar message embedded as `(c0 + i c1, 0)`.
    pub fn from_scalar(m: ScalarMessage) -> Self {
        Self([m.to_complex(), Complex64::new(0.0, 0.0)])
    }

    /// Uniformly random point on the unit sphere of `C²`.
    pub fn random(rng: &mut RngStream) -> Self {
        let theta = (1.0 - 2.0 * rng.next_uniform()).acos();
        Self::neutron(rng.angle(), rng.angle(), theta)
    }

    pub fn norm_sqr(&self) -> f64 {
        self.0[0].norm_sqr() + self.0[1].norm_sqr()
    }

    pub fn scale(self, k: Complex64) -> Self {
        Self([self.0[0] * k, self.0[1] * k])
    }


    /// Rescale to unit norm; `None` for the zero vector.
    pub fn normalized(self) -> Option<Self> {
        let n = self.norm_sqr().sqrt();
        (n > 0.0).then(|| self.scale(Complex64::new(1.0 / n, 0.0)))
    }

    /// Multiply both components by `e^{iφ}`.
    pub fn advance_phase(self, phi: f64) -> Self {
        self.scale(Complex64::from_polar(1.0, phi))
    }

    pub fn apply(self, m: &[[Complex64; 2]; 2]) -> Self {
        let [a, b] = self.0;
        Self([m[0][0] * a + m[0][1] * b, m[1][0] * a + m[1][1] * b])
    }

    /// Apply `exp(i (angle/2) σ_axis)`.
    pub fn su2_rotate(self, axis: Axis, angle: f64) -> Self {
        self.apply(&su2_matrix(axis, angle))
    }
}

/// `exp(i (angle/2) σ_axis)` as a 2×2 matrix.
pub fn su2_matrix(axis: Axis, angle: f64) -> [[Complex64; 2]; 2] {
    let (s, c) = (angle / 2.0).sin_cos();
    let re = |x: f64| Complex64::new(x, 0.0);
    let im = |x: f64| Complex64::new(0.0, x);
    match axis {
        Axis::X => [[re(c), im(s)], [im(s), re(c)]],
        Axis::Y => [[re(c), re(s)], [re(-s), re(c)]],
        Axis::Z => [
            [Complex64::from_polar(1.0, angle / 2.0), re(0.0)],
            [re(0.0), Complex64::from_polar(1.0, -angle / 2.0)],
        ],
    }
}

/// A particle in flight.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Messenger<M> {
    pub message: M,
    /// Which arm of an interferometer the particle took; set once.
    pub path_label: Option<u8>,
    pub tof: f64,
}

impl<M> Messenger<M> {
    pub fn new(message: M) -> Self {
        Self {
            message,
            path_label: None,
            tof: 0.0,
        }
    }

    /// Record the path label. Later calls leave the first label in place.
    pub fn label_path(&mut self, label: u8) {
        self.path_label.get_or_insert(label);
    }
}

/// Which of the two slits emits in the two-beam experiment.
#[derive(Debug, Clone, Copy, PartialEq, Eq, serde::Serialize, serde::Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum SourceMode {
    /// Each photon picks a slit at random.
    RandomSource,
    /// Only slit 1 (upper, `y > 0`) or slit 2 (lower) emits.
    FixedSource(u8),
    /// Slits take turns emitting `M` photons each, starting with slit 1.
    Alternating(u64),
}

/// Emitter for the two-beam experiment.
#[derive(Debug, Clone)]
pub struct TwoBeamSource {
    pub a: f64,
    pub d: f64,
    pub mode: SourceMode,
    emitted: u64,
}

impl TwoBeamSource {
    pub fn new(a: f64, d: f64, mode: SourceMode) -> Result<Self> {
        if !(a > 0.0 && d > a) {
            return Err(Error::config(format!(
                "slit width {a} must be positive and smaller than separation {d}"
            )));
        }
        match mode {
            SourceMode::FixedSource(1 | 2) | SourceMode::RandomSource => {}
            SourceMode::FixedSource(s) => {
                return Err(Error::config(format!("no source {s}; expected 1 or 2")))
            }
            SourceMode::Alternating(0) => {
                return Err(Error::config("alternating group size must be positive"))
            }
            SourceMode::Alternating(_) => {}
        }
        Ok(Self {
            a,
            d,
            mode,
            emitted: 0,
        })
    }

    /// Slit (1 or 2) for the next emission, consuming one draw in random mode.
    fn next_slit(&mut self, rng: &mut RngStream) -> u8 {
        match self.mode {
            SourceMode::RandomSource => {
                if rng.bit() {
                    1
                } else {
                    2
                }
            }
            SourceMode::FixedSource(s) => s,
            SourceMode::Alternating(m) => {
                if (self.emitted / m).is_multiple_of(2) {
                    1
                } else {
                    2
                }
            }
        }
    }

    /// Draw `(slit, y, β)` for the next photon.
    pub fn emit(&mut self, rng: &mut RngStream) -> (u8, f64, f64) {
        let slit = self.next_slit(rng);
        self.emitted += 1;
        let centre = if slit == 1 { self.d / 2.0 } else { -self.d / 2.0 };
        let y = centre + self.a * (rng.next_uniform() - 0.5);
        let beta = rng.uniform_in(-FRAC_PI_2, FRAC_PI_2);
        (slit, y, beta)
    }
}

/// Landing angle on a semicircular screen of radius `x` and the flight
/// time, for a photon leaving `(0, y)` in direction `beta`.
pub fn two_beam_geometry(y: f64, beta: f64, x: f64) -> Result<(f64, f64)> {
    if !(y.abs() < x) {
        return Err(Error::Geometry(format!(
            "source offset {y} not inside screen radius {x}"
        )));
    }
    let cb = beta.cos();
    let yc2 = y * cb * cb;
    let sin_theta = ((yc2 + beta.sin() * (x * x - y * yc2).sqrt()) / x).clamp(-1.0, 1.0);
    let t = (x * x - 2.0 * y * x * sin_theta + y * y).sqrt();
    Ok((sin_theta.asin(), t))
}

impl std::ops::Add for Spinor {
    type Output = Self;

    fn add(self, other: Self) -> Self {
        Self([self.0[0] + other.0[0], self.0[1] + other.0[1]])
    }
}
