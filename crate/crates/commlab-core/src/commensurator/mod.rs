//! Quantitative coset geometry: Hausdorff-distance profiles, commensuration
//! witnesses and their closure algebra, displacement inequalities, and the
//! coset packing census.
//!
//! Everything here samples infinite objects through finite Cayley-ball
//! windows, so the outputs are certified lower bounds and evidence verdicts
//! rather than theorems: a profile that plateaus inside the window is
//! *evidence* of boundedness, a verified witness is a genuine certificate
//! over the ball it was checked on, and taint flags mark any place where an
//! undecided membership or a capped sweep weakened the certificate.

pub mod algebra;
pub mod displacement;
pub mod packing;
pub mod profile;
pub mod witness;

pub use algebra::{
    extend_to_finite_index, intersect_witnesses, invert, pullback, pushforward,
    restrict_to_finite_index, transport,
};
pub use displacement::{
    displacement_checks, invariant_set_check, product_defect, stabilization_constant,
    DefectReport, DisplacementCheck, DisplacementReport, InvariantSetReport,
    StabilizationReport,
};
pub use packing::{packing_census, PackingCensus};
pub use profile::{
    conjugate_pred, coset_profile, directed_profile, left_coset_pred, subgroup_pred,
    symmetric_profile, HausdorffProfile, ProfileOptions, SetPred,
};
pub use witness::{
    search_witness, verify_witness, VerifyOutcome, Witness, WitnessOptions,
};

/// Three-way reading of a windowed measurement series.
///
/// `Bounded` requires the last half of the series to be constant *and*
/// exact; `Growing` requires fresh growth inside the tail. Anything the
/// window cannot settle stays `Inconclusive`.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum GrowthVerdict {
    Bounded,
    Growing,
    Inconclusive,
}

impl GrowthVerdict {
    pub fn name(&self) -> &'static str {
        match self {
            GrowthVerdict::Bounded => "bounded",
            GrowthVerdict::Growing => "growing",
            GrowthVerdict::Inconclusive => "inconclusive",
        }
    }
}
