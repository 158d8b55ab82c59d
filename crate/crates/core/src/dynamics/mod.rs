//! Backward dynamics: pulling Dirac masses back through the generators.

mod card;
mod escapes;
mod measure;
mod sampling;

pub use card::{
    calibrate_r0, card_bound_rhs, card_nu, disc_count, CardCheck, CardReport, R0_CANDIDATES,
};
pub use escapes::{escape_depth, escapes};
pub use measure::{Atom, EmpiricalMeasure};
pub use sampling::{
    default_base_point, iterate_pullback, julia_sample, pullback_dirac, pullback_leaves,
    SampleConfig, SampleMode,
};
