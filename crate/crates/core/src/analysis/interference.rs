use num_complex::Complex64;

use crate::error::{Error, Result};
use crate::fit::{fit_sinusoid, SinusoidFit};

/// Normalized intensity at one detector over a phase scan.
#[derive(Debug, Clone, PartialEq)]
pub struct FringeScan {
    pub phases: Vec<f64>,
    pub intensity: Vec<f64>,
}

/// Fringe visibility from a sinusoid fit to a full-period scan.
pub fn visibility(scan: &FringeScan) -> Result<(f64, SinusoidFit)> {
    let fit = fit_sinusoid(&scan.phases, &scan.intensity)?;
    Ok((fit.visibility(), fit))
}

/// Which-path distinguishability from the detection probabilities at one
/// detector when only path 0 or only path 1 is open.
pub fn distinguishability(p_path0: f64, p_path1: f64) -> Result<f64> {
    for p in [p_path0, p_path1] {
        if !(0.0..=1.0).contains(&p) {
            return Err(Error::domain(format!("probability {p} outside [0,1]")));
        }
    }
    Ok((p_path0 - p_path1).abs())
}

/// Magnitude of the Fourier component of `counts(θ)` at spatial frequency
/// `k` in the variable `sin θ`, normalized by the total count.
pub fn fringe_component(thetas: &[f64], counts: &[f64], k: f64) -> Result<f64> {
    if thetas.len() != counts.len() {
        return Err(Error::domain("angle and count lengths differ"));
    }
    let total: f64 = counts.iter().sum();
    if total <= 0.0 {
        return Err(Error::domain("no counts"));
    }
    let sum: Complex64 = thetas
        .iter()
        .zip(counts)
        .map(|(th, c)| Complex64::from_polar(*c, k * th.sin()))
        .sum();
    Ok(sum.norm() / total)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn visibility_extremes() {
        let phases: Vec<f64> = (0..36).map(|k| (k as f64 * 10.0).to_radians()).collect();
        let full: Vec<f64> = phases.iter().map(|p| (p / 2.0).sin().powi(2)).collect();
        let flat = vec![0.5; phases.len()];
        let (v, _) = visibility(&FringeScan { phases: phases.clone(), intensity: full }).unwrap();
        assert!((v - 1.0).abs() < 1e-12);
        let (v, _) = visibility(&FringeScan { phases, intensity: flat }).unwrap();
        assert!(v.abs() < 1e-12);
    }

    #[test]
    fn distinguishability_extremes() {
        assert_eq!(distinguishability(1.0, 0.0).unwrap(), 1.0);
        assert_eq!(distinguishability(0.5, 0.5).unwrap(), 0.0);
        assert!(distinguishability(1.5, 0.0).is_err());
    }

    #[test]
    fn fringe_component_detects_fringes() {
        let thetas: Vec<f64> = (0..181).map(|k| (k as f64 - 90.0).to_radians()).collect();
        let k = std::f64::consts::TAU * 5.0;
        let fringes: Vec<f64> = thetas.iter().map(|t| (k * t.sin() / 2.0).cos().powi(2)).collect();
        let flat = vec![1.0; thetas.len()];
        let a = fringe_component(&thetas, &fringes, k).unwrap();
        let b = fringe_component(&thetas, &flat, k).unwrap();
        assert!(a > 5.0 * b, "{a} {b}");
    }
}
