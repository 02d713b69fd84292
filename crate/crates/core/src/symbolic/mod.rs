//! Words over `{1, …, N}`, pressure and dimension estimates, Lyapunov
//! spectra, level-`n` equilibrium-state approximations and sampling of
//! self-affine measures.

mod enumerate;
mod gibbs;
mod lyapunov;
mod measure;
mod pressure;
mod quasimult;
mod sampler;

pub use enumerate::{log_sum_exp, word_count, LevelTable, LogSumExp, DEFAULT_BUDGET};
pub use gibbs::{gibbs_approx, gibbs_constant_profile, GibbsApprox, GibbsConstantProfile};
pub use lyapunov::{
    lyapunov_exact_diagonal, lyapunov_monte_carlo, lyapunov_spectrum, LyapunovSpectrum,
    SpectrumMethod,
};
pub use measure::BernoulliMeasure;
pub use pressure::{
    affinity_dimension, pressure_bracket, upper_pressure_sequence, AffinityInterval,
    PeriodicCandidates, PressureBracket, PressureOptions,
};
pub use quasimult::{quasimult_diagnostic, QuasimultOptions, QuasimultPair, QuasimultReport};
pub use sampler::{sample_self_affine, AffineIFS, PointCloud};
