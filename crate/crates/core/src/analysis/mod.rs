//! Predicates on subshifts and block maps.

pub mod maps;
pub mod periods;
pub mod relation;
pub mod structure;

pub use maps::{
    injectivity_family, is_injective, is_injective_on_periodic, is_preinjective, is_surjective, resolvingness,
    InjectivityFamily, Resolvingness,
};
pub use periods::{is_peric, period_inclusion, periods, PeriodSet};
pub use relation::{equalizer_set, fiber_product, kernel_set, SubshiftRelation};
pub use structure::{
    constituents, follower_quotient, has_positive_entropy, is_countable, is_finite, is_mixing, is_sft,
    is_transitive, sft_report, shift_period, SftReport,
};
