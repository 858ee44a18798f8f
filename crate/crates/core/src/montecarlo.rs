//! Building sketches of a known signal for Monte-Carlo experiments.

use std::fmt;
use std::str::FromStr;

use crate::entropy::{exact_moment, SparseVector};
use crate::error::{Error, Result};
use crate::sketch::ProjectionSketch;
use crate::stable::{CmsSampler, Skewness};
use crate::tape::RandomTape;

/// How [`project_vector`] produces the projected samples.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Default)]
pub enum ProjectionMode {
    /// Feed every nonzero entry through [`ProjectionSketch::update`].
    /// Costs `nnz * k` variates.
    #[default]
    Streamed,
    /// Draw each `x_j` directly as `F_alpha^(1/alpha) Z'_j`, which has the same
    /// law as the streamed sample by stability. Costs `k` variates and does not
    /// reproduce the streamed values bit for bit.
    Distributional,
}

impl ProjectionMode {
    pub fn name(self) -> &'static str {
        match self {
            ProjectionMode::Streamed => "streamed",
            ProjectionMode::Distributional => "distributional",
        }
    }
}

impl fmt::Display for ProjectionMode {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.name())
    }
}

impl FromStr for ProjectionMode {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        match s {
            "streamed" => Ok(ProjectionMode::Streamed),
            "distributional" => Ok(ProjectionMode::Distributional),
            other => Err(Error::param(format!("unknown projection mode {other:?}"))),
        }
    }
}

/// A sketch of `v` with the given parameters.
pub fn project_vector(
    v: &SparseVector,
    alpha: f64,
    skew: Skewness,
    k: usize,
    seed: u64,
    mode: ProjectionMode,
) -> Result<ProjectionSketch> {
    match mode {
        ProjectionMode::Streamed => {
            let mut s = ProjectionSketch::new(alpha, skew, k, seed, v.dimension())?;
            for &(i, a) in v.entries() {
                s.update(i, a)?;
            }
            Ok(s)
        }
        ProjectionMode::Distributional => {
            let sampler = CmsSampler::new(alpha, skew)?;
            let scale = exact_moment(v, alpha).powf(1.0 / alpha);
            let tape = RandomTape::new(seed);
            let x: Vec<f64> = (0..k as u64)
                .map(|j| {
                    let (u, w) = tape.angle_exp_at(j);
                    scale * sampler.factored_from(u, w)
                })
                .collect();
            ProjectionSketch::from_parts(alpha, skew, seed, v.dimension(), &x, v.f1(), v.nnz() as u64)
        }
    }
}
