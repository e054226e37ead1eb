use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

/// Single-particle averages `E1`, `E2` and the two-particle correlation `E`
/// computed from coincidence counts.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct Correlations {
    pub e1: f64,
    pub e2: f64,
    pub e: f64,
    pub n: u64,
}

/// `counts` in the order `(+,+), (+,−), (−,+), (−,−)`.
pub fn correlations(counts: [u64; 4]) -> Result<Correlations> {
    let [pp, pm, mp, mm] = counts.map(|c| c as f64);
    let n: u64 = counts.iter().sum();
    if n == 0 {
        return Err(Error::UndefinedCorrelation("no coincidences".into()));
    }
    let nf = n as f64;
    Ok(Correlations {
        e1: (pp - mm + pm - mp) / nf,
        e2: (pp - mm - pm + mp) / nf,
        e: (pp + mm - pm - mp) / nf,
        n,
    })
}

/// `S = E(a1,a2) − E(a1,a2′) + E(a1′,a2) + E(a1′,a2′)`.
pub fn chsh_s(e_a1a2: f64, e_a1a2p: f64, e_a1pa2: f64, e_a1pa2p: f64) -> Result<f64> {
    for e in [e_a1a2, e_a1a2p, e_a1pa2, e_a1pa2p] {
        if !(-1.0..=1.0).contains(&e) {
            return Err(Error::domain(format!("correlation {e} outside [-1,1]")));
        }
    }
    Ok(e_a1a2 - e_a1a2p + e_a1pa2 + e_a1pa2p)
}

/// Pair averages of a set of `±1` triples and whether Boole's inequality
/// `|F_ab ± F_ac| ≤ 1 ± F_bc` holds.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct BooleCheck {
    pub f_ab: f64,
    pub f_ac: f64,
    pub f_bc: f64,
    pub holds: bool,
}

pub fn boole_triple_check(triples: &[[i8; 3]]) -> Result<BooleCheck> {
    if triples.is_empty() {
        return Err(Error::domain("no triples"));
    }
    let (mut ab, mut ac, mut bc) = (0i64, 0i64, 0i64);
    for &[a, b, c] in triples {
        if [a, b, c].iter().any(|v| v.abs() != 1) {
            return Err(Error::domain("triple entries must be +1 or -1"));
        }
        ab += i64::from(a * b);
        ac += i64::from(a * c);
        bc += i64::from(b * c);
    }
    let n = triples.len() as i64;
    // Compare in exact integer arithmetic: |ab ± ac| ≤ n ± bc.
    let holds = (ab + ac).abs() <= n + bc && (ab - ac).abs() <= n - bc;
    let nf = n as f64;
    Ok(BooleCheck {
        f_ab: ab as f64 / nf,
        f_ac: ac as f64 / nf,
        f_bc: bc as f64 / nf,
        holds,
    })
}

/// `E = (N1 + N2 − N3 − N4)/(N1 + N2 + N3 + N4)` with the counts
/// `N(α,χ), N(α+π,χ+π), N(α+π,χ), N(α,χ+π)`.
pub fn neutron_bell_correlation(n1: u64, n2: u64, n3: u64, n4: u64) -> Result<f64> {
    let total = n1 + n2 + n3 + n4;
    if total == 0 {
        return Err(Error::UndefinedCorrelation("all four counts are zero".into()));
    }
    Ok(((n1 + n2) as f64 - (n3 + n4) as f64) / total as f64)
}

/// `S = E(α,χ) + E(α,χ′) − E(α′,χ) + E(α′,χ′)`.
pub fn neutron_bell_s(e_ax: f64, e_axp: f64, e_apx: f64, e_apxp: f64) -> f64 {
    e_ax + e_axp - e_apx + e_apxp
}
