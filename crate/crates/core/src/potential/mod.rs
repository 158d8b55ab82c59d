//! Logarithmic potentials, the dynamical Green's function and the
//! capacity bounds built from them.

mod capacity;
mod green;
mod grid;
mod holder;
mod identity;
mod logpot;

pub use capacity::{
    capacity_leja, capacity_report, capacity_report_with, diameter, f_functional, f_functional_with,
    leja_points, nondense_disc, nondense_witness, orbit_witness, CapacityOptions, CapacityReport,
    ConditionFlags, DIAMETER_SUBSAMPLE,
};
pub use green::{green_partial, green_partial_grid, robin_constant, robin_partial, robin_partial_closed_form, RobinPartial};
pub use grid::{GridField, GridSpec, MAX_GRID_NODES};
pub use holder::{dyadic_radii, holder_mass_estimate, uniform_perfectness_check, HolderEstimate, HOLDER_FLOOR};
pub use identity::{verify_identity, IdentityOptions, IdentityReport, GREEN_SUBSTITUTION_NOTE};
pub use logpot::{energy, log_potential};
