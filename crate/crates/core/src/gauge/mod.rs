//! Gauge objects and light-matter Hamiltonians.

pub mod beyond_dipole;
pub mod checks;
pub mod hamiltonian;
pub mod params;
pub mod tls;
pub mod transporter;

pub use beyond_dipole::{
    build_beyond_dipole_hamiltonian, cosine_mode, effective_coupling, suppression_factor, uniform_mode, ModeCoupling,
    DEFAULT_DIMENSION_CAP,
};
pub use hamiltonian::{
    build_hamiltonian, minimal_coupling_generator, minimal_coupling_unitary, minimal_coupling_unitary_from_generator,
    BuildOptions, TrigPath,
};
pub use params::{CouplingParams, GaugeFrame, ModeSpec, SpatialProfile, TwoLevelParams, COUPLING_CONSISTENCY};
pub use tls::{basis_change, parity_operator, tls_operator, TlsBasis, TlsOperator};
pub use transporter::{
    gauge_invariant_tls, hopping_operator, line_integral, parallel_transporter, transporter_gauge_law,
    two_site_phase_unitary, ClassicalField, GaugeFunction, Polynomial,
};
