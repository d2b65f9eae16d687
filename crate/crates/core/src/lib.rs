//! Sign recovery for real eigenvectors from entrywise magnitudes.
//!
//! Given `A`, an eigenvalue `λ` and `|x_i|` for an eigenvector `x`, the signs
//! `ε_i = sign(x_i)` span the null space of `C = D⁻¹AD − λI` with
//! `D = diag(|x_i|)`. Two randomized solvers are provided: row projections
//! ([`kaczmarz`]) and residual-weighted sign flips ([`flipper`]).

pub mod cli;
pub mod error;
pub mod flipper;
pub mod harness;
pub mod kaczmarz;
pub mod numkit;
pub mod oracle;
pub mod par;
pub mod problems;
pub mod random;
pub mod signsys;
pub mod theory;

pub use error::{Error, Result};
pub use flipper::{run_algorithm2, FlipState};
pub use harness::{monte_carlo_algorithm1, reproduce_figure, EnsembleReport, Figure, RunReport, RunStatus, TracePoint};
pub use kaczmarz::{extract_signs, run_algorithm1, KaczmarzState, RunConfig};
pub use numkit::Matrix;
pub use oracle::{brute_force_signs, nullspace_unique};
pub use par::Execution;
pub use problems::{EigenPhaseProblem, MagnitudeLaw};
pub use random::RandomSource;
pub use signsys::{build_sign_system, SignSystem, SignVector};
pub use theory::{spectral_stats, SpectralStats};
