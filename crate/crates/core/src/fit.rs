//! Small closed-form least-squares fits.

use crate::error::{Error, Result};

/// One-parameter fit `data ≈ A · model`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct AmplitudeFit {
    pub amplitude: f64,
    /// Root-mean-square residual.
    pub rms: f64,
    /// Coefficient of determination against the data mean.
    pub r_squared: f64,
}

pub fn fit_amplitude(model: &[f64], data: &[f64]) -> Result<AmplitudeFit> {
    if model.len() != data.len() {
        return Err(Error::Fit(format!(
            "model has {} points, data has {}",
            model.len(),
            data.len()
        )));
    }
    if data.len() < 2 {
        return Err(Error::Fit("need at least two points".into()));
    }
    let mm: f64 = model.iter().map(|m| m * m).sum();
    if mm == 0.0 {
        return Err(Error::Fit("model is identically zero".into()));
    }
    let md: f64 = model.iter().zip(data).map(|(m, d)| m * d).sum();
    let amplitude = md / mm;
    let n = data.len() as f64;
    let ss_res: f64 = model
        .iter()
        .zip(data)
        .map(|(m, d)| (d - amplitude * m).powi(2))
        .sum();
    let mean = data.iter().sum::<f64>() / n;
    let ss_tot: f64 = data.iter().map(|d| (d - mean).powi(2)).sum();
    let r_squared = if ss_tot > 0.0 { 1.0 - ss_res / ss_tot } else { f64::NAN };
    Ok(AmplitudeFit {
        amplitude,
        rms: (ss_res / n).sqrt(),
        r_squared,
    })
}

/// Fit `y ≈ c0 + c1 cos φ + c2 sin φ`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct SinusoidFit {
    pub offset: f64,
    pub cos: f64,
    pub sin: f64,
}

impl SinusoidFit {
    pub fn amplitude(&self) -> f64 {
        self.cos.hypot(self.sin)
    }

    /// Fringe contrast `(max − min)/(max + min)` of the fitted curve.
    pub fn visibility(&self) -> f64 {
        if self.offset <= 0.0 {
            return 0.0;
        }
        (self.amplitude() / self.offset).min(1.0)
    }

    pub fn eval(&self, phi: f64) -> f64 {
        self.offset + self.cos * phi.cos() + self.sin * phi.sin()
    }
}

pub fn fit_sinusoid(phases: &[f64], values: &[f64]) -> Result<SinusoidFit> {
    if phases.len() != values.len() {
        return Err(Error::Fit("phase and value lengths differ".into()));
    }
    if phases.len() < 4 {
        return Err(Error::Fit(format!(
            "need at least 4 phase points, got {}",
            phases.len()
        )));
    }
    // Normal equations for the basis [1, cos, sin].
    let mut a = [[0.0f64; 3]; 3];
    let mut b = [0.0f64; 3];
    for (&p, &y) in phases.iter().zip(values) {
        let f = [1.0, p.cos(), p.sin()];
        for i in 0..3 {
            b[i] += f[i] * y;
            for j in 0..3 {
                a[i][j] += f[i] * f[j];
            }
        }
    }
    let x = solve3(a, b).ok_or_else(|| Error::Fit("phases do not span a full period".into()))?;
    Ok(SinusoidFit {
        offset: x[0],
        cos: x[1],
        sin: x[2],
    })
}

fn det3(m: &[[f64; 3]; 3]) -> f64 {
    m[0][0] * (m[1][1] * m[2][2] - m[1][2] * m[2][1]) - m[0][1] * (m[1][0] * m[2][2] - m[1][2] * m[2][0])
        + m[0][2] * (m[1][0] * m[2][1] - m[1][1] * m[2][0])
}

fn solve3(a: [[f64; 3]; 3], b: [f64; 3]) -> Option<[f64; 3]> {
    let d = det3(&a);
    let scale: f64 = a.iter().flatten().map(|v| v.abs()).fold(0.0, f64::max);
    if d.abs() <= 1e-12 * scale.powi(3) {
        return None;
    }
    let mut x = [0.0; 3];
    for (k, xk) in x.iter_mut().enumerate() {
        let mut m = a;
        for i in 0..3 {
            m[i][k] = b[i];
        }
        *xk = det3(&m) / d;
    }
    Some(x)
}

#[cfg(test)]
mod tests {
    use super::*;
    use approx::assert_abs_diff_eq;

    #[test]
    fn exact_multiple() {
        let model = [1.0, 2.0, 3.0, 0.5];
        let data: Vec<f64> = model.iter().map(|m| 2.0 * m).collect();
        let fit = fit_amplitude(&model, &data).unwrap();
        assert_eq!(fit.amplitude, 2.0);
        assert_eq!(fit.rms, 0.0);
        assert_eq!(fit.r_squared, 1.0);
    }

    #[test]
    fn symmetric_perturbation_cancels() {
        let model = [1.0, 0.7, 0.7, 0.2];
        let data = [1.0, 0.7 + 0.05, 0.7 - 0.05, 0.2];
        let fit = fit_amplitude(&model, &data).unwrap();
        assert_abs_diff_eq!(fit.amplitude, 1.0, epsilon = 1e-15);
        assert!(fit.rms > 0.0);
    }

    #[test]
    fn amplitude_fit_errors() {
        assert!(fit_amplitude(&[0.0, 0.0], &[1.0, 2.0]).is_err());
        assert!(fit_amplitude(&[1.0], &[1.0]).is_err());
        assert!(fit_amplitude(&[1.0, 2.0], &[1.0]).is_err());
    }

    #[test]
    fn sinusoid_recovers_parameters() {
        let phases: Vec<f64> = (0..36).map(|k| (k as f64 * 10.0).to_radians()).collect();
        let values: Vec<f64> = phases.iter().map(|p| 0.5 + 0.3 * (p - 0.4).cos()).collect();
        let fit = fit_sinusoid(&phases, &values).unwrap();
        assert_abs_diff_eq!(fit.offset, 0.5, epsilon = 1e-12);
        assert_abs_diff_eq!(fit.amplitude(), 0.3, epsilon = 1e-12);
        assert_abs_diff_eq!(fit.visibility(), 0.6, epsilon = 1e-12);
        assert_abs_diff_eq!(fit.eval(0.4), 0.8, epsilon = 1e-12);
    }

    #[test]
    fn sinusoid_needs_four_points() {
        assert!(matches!(
            fit_sinusoid(&[0.0, 1.0, 2.0], &[1.0, 1.0, 1.0]),
            Err(Error::Fit(_))
        ));
        assert!(fit_sinusoid(&[0.0; 5], &[1.0; 5]).is_err());
    }
}
