//! Sketches of turnstile streams built from maximally
//! skewed stable random projections, with estimators of the frequency moment
//! `F_alpha = sum_i A[i]^alpha` and the entropies derived from it. Symmetric
//! stable projections are supported as a baseline.
//!
//! ```
//! use ccsketch::{estimate_oq, ProjectionSketch, Skewness};
//!
//! let mut sketch = ProjectionSketch::new(0.95, Skewness::MaxSkewed, 50, 7, 1 << 16)?;
//! sketch.update(3, 10.0)?;
//! sketch.update(9, 4.0)?;
//! sketch.update(3, -2.0)?;
//! let f = estimate_oq(&sketch)?;
//! assert!(f.value > 0.0);
//! assert_eq!(sketch.f1(), 12.0);
//! # Ok::<(), ccsketch::Error>(())
//! ```

pub mod accumulator;
pub mod entropy;
pub mod error;
pub mod estimators;
pub mod montecarlo;
pub mod sketch;
pub mod stable;
pub mod tape;

pub use entropy::{
    exact_moment, exact_renyi, exact_shannon, exact_tsallis, intrinsic_bias, renyi_from_moment, select_optimal_alpha,
    shannon_via, tsallis_from_moment, AlphaSelection, EntropyEstimate, EntropyTarget, Route, SparseVector,
};
pub use error::{Error, Result};
pub use estimators::{
    estimate, estimate_gm, estimate_gm_sym, estimate_hm, estimate_oq, quantile_index, EstimatorKind, GmNormalizer,
    MomentEstimate, MomentEstimator,
};
pub use montecarlo::{project_vector, ProjectionMode};
pub use sketch::{projection_entry, ProjectionSketch, TurnstileUpdate};
pub use stable::{
    quantile_constants, sample_stable, sample_stable_factored, supported_alphas, variance_factor, CmsSampler,
    QuantileConstants, SkewAngle, Skewness, StableParams, QUANTILE_TABLE,
};
pub use tape::{derive_seed, RandomTape};
