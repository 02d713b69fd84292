//! Checkers that combine the structural and thermodynamic layers.

mod lemma3;
mod rho;
mod separation;
mod similitude;

pub use lemma3::{lemma3_identity, lemma3_terms, Lemma3Report};
pub use rho::{fw_constancy, fw_normalize, log_rho_form, rho_multiplicativity, FwReport, RhoReport};
pub use separation::{
    check_separation, Conclusion, HypothesisStatus, SeparationCase, SeparationOptions, SeparationReport,
    SeparationVerdict,
};
pub use similitude::{
    det_normalized, detect_similitude_structure, form_residual, SimilitudeCertificate, SimilitudeMethod,
    SimilitudeVerdict, DEFAULT_SIMILITUDE_TOL, MAX_CESARO_ITERS,
};
