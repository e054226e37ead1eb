//! Post-run statistics.

mod coincidence;
mod correlation;
mod interference;

pub use coincidence::{coincidence_count, delta_g_estimate, pair_events, CoincidenceTable, DeltaG};
pub use correlation::{
    boole_triple_check, chsh_s, correlations, neutron_bell_correlation, neutron_bell_s, BooleCheck,
    Correlations,
};
pub use interference::{distinguishability, fringe_component, visibility, FringeScan};
