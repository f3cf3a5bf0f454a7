//! Coupling sweeps of the normalized spectrum `(E_j − E_0)/ω_ph`, Fock-cutoff
//! convergence and gap analysis.

pub mod gaps;
pub mod sweep;
pub mod table;

pub use gaps::{
    adjacent_excited_gaps, gap_analysis, golden_section, refine_minima, CrossingKind, GapAnalysis, GapMinimum,
    DEFAULT_CROSSING_TOL,
};
pub use sweep::{
    asymptotic_gap, level_differences, sweep, CutoffPolicy, SweepConfig, DEFAULT_N_LEVELS, DEFAULT_N_MAX,
    DEFAULT_TOL_REL,
};
pub use table::{format_sig, SpectrumRow, SpectrumTable, CSV_HEADER};
