use std::collections::HashMap;

use serde::{Deserialize, Serialize};

use crate::data::StationEvent;
use crate::error::{Error, Result};

/// Coincidence counts `C[s1][s2][k]` for settings `s1`, `s2` and outcome
/// pair `k` in the order `(+,+), (+,−), (−,+), (−,−)`.
#[derive(Debug, Clone, Default, PartialEq, Serialize, Deserialize)]
pub struct CoincidenceTable {
    pub counts: [[[u64; 4]; 2]; 2],
    pub window: f64,
    pub delta_g: f64,
}

impl CoincidenceTable {
    pub fn total(&self) -> u64 {
        self.counts.iter().flatten().flatten().sum()
    }

    /// Counts for one setting pair.
    pub fn cell(&self, s1: u8, s2: u8) -> [u64; 4] {
        self.counts[usize::from(s1)][usize::from(s2)]
    }
}

fn outcome_index(x1: i8, x2: i8) -> usize {
    match (x1 > 0, x2 > 0) {
        (true, true) => 0,
        (true, false) => 1,
        (false, true) => 2,
        (false, false) => 3,
    }
}

fn sorted_order(events: &[StationEvent], shift: f64) -> Vec<(f64, usize)> {
    let mut v: Vec<(f64, usize)> = events.iter().enumerate().map(|(i, e)| (e.t + shift, i)).collect();
    v.sort_by(|a, b| a.0.total_cmp(&b.0).then(a.1.cmp(&b.1)));
    v
}

/// Pair events with `|t1 + ΔG − t2| < W`, each event used at most once.
///
/// Both streams are walked forward in time together: the earlier of the
/// two current events is either paired with the other one or dropped. The
/// result is a maximum matching, so the number of pairs never decreases
/// when `W` grows.
pub fn pair_events(
    s1: &[StationEvent],
    s2: &[StationEvent],
    window: f64,
    delta_g: f64,
) -> Result<Vec<(usize, usize)>> {
    if !(window >= 0.0) {
        return Err(Error::domain(format!("coincidence window {window} is negative")));
    }
    let a = sorted_order(s1, delta_g);
    let b = sorted_order(s2, 0.0);
    let (mut i, mut j) = (0, 0);
    let mut pairs = Vec::new();
    while i < a.len() && j < b.len() {
        let (ta, ia) = a[i];
        let (tb, ib) = b[j];
        if (ta - tb).abs() < window {
            pairs.push((ia, ib));
            i += 1;
            j += 1;
        } else if ta < tb {
            i += 1;
        } else {
            j += 1;
        }
    }
    Ok(pairs)
}

pub fn coincidence_count(
    s1: &[StationEvent],
    s2: &[StationEvent],
    window: f64,
    delta_g: f64,
) -> Result<CoincidenceTable> {
    let mut table = CoincidenceTable {
        window,
        delta_g,
        ..Default::default()
    };
    for (i, j) in pair_events(s1, s2, window, delta_g)? {
        let (e1, e2) = (s1[i], s2[j]);
        if e1.setting > 1 || e2.setting > 1 {
            return Err(Error::domain("setting index must be 0 or 1"));
        }
        table.counts[usize::from(e1.setting)][usize::from(e2.setting)][outcome_index(e1.x, e2.x)] += 1;
    }
    Ok(table)
}

/// Estimated clock offset between the two stations.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct DeltaG {
    /// Offset to add to station-1 time tags.
    pub value: f64,
    /// Set when the difference histogram has no distinct peak.
    pub low_confidence: bool,
}

/// Histogram all differences `t1 − t2` with `|t1 − t2| ≤ max_lag` in bins
/// centred on multiples of `bin_width`, and return minus the centre of the
/// fullest bin.
pub fn delta_g_estimate(
    s1: &[StationEvent],
    s2: &[StationEvent],
    bin_width: f64,
    max_lag: f64,
) -> Result<DeltaG> {
    if s1.is_empty() || s2.is_empty() {
        return Err(Error::domain("offset estimate needs events at both stations"));
    }
    if !(bin_width > 0.0) || !(max_lag >= 0.0) {
        return Err(Error::domain("bin width must be positive and lag non-negative"));
    }
    let mut t1: Vec<f64> = s1.iter().map(|e| e.t).collect();
    let mut t2: Vec<f64> = s2.iter().map(|e| e.t).collect();
    t1.sort_by(f64::total_cmp);
    t2.sort_by(f64::total_cmp);

    let mut hist: HashMap<i64, u64> = HashMap::new();
    let mut lo = 0;
    for &a in &t1 {
        while lo < t2.len() && t2[lo] < a - max_lag {
            lo += 1;
        }
        for &b in t2[lo..].iter().take_while(|&&b| b <= a + max_lag) {
            *hist.entry(((a - b) / bin_width).round() as i64).or_default() += 1;
        }
    }
    let flat = DeltaG {
        value: 0.0,
        low_confidence: true,
    };
    let Some(max) = hist.values().copied().max() else {
        return Ok(flat);
    };
    let n_bins = (2.0 * (max_lag / bin_width).round() + 1.0) as usize;
    let min = if hist.len() < n_bins { 0 } else { hist.values().copied().min().unwrap_or(0) };
    if max == min {
        return Ok(flat);
    }
    // Ties resolve to the bin closest to zero lag.
    let (&bin, _) = hist
        .iter()
        .filter(|(_, &c)| c == max)
        .min_by_key(|(&k, _)| (k.abs(), k))
        .expect("histogram is non-empty");
    Ok(DeltaG {
        value: -(bin as f64) * bin_width,
        low_confidence: false,
    })
}
