//! End-to-end checks of the comparison estimates on computed solutions.

mod comparison;
mod distributional;
mod regularity;

pub use comparison::{
    barrier_spec_for, comparison_report, comparison_with_barrier, data_conditions, data_term, effective_measure,
    gradient_estimate_report, phi_energy, polya_szego_check, power_conjugate, symmetrized_energy, DataConditions,
    GVariant, MarginRow, Provenance, RatioReport, VerificationReport,
};
pub use distributional::{
    distributional_exponents_check, validate as validate_distributional, DistributionalReport, DistributionalSetup,
    TruncationRow,
};
pub use regularity::{
    regularity_rhs, regularity_table, rhs_scaling, validate as validate_regularity, DataExponents, RegularityCase,
    RegularityReport,
};
