use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::grid::Grid;
use crate::model::{FourPointParams, Instance, ModelKind};

/// The 5×5 worked example: realized values of every interview the sequential
/// algorithm conducts on it, uniform priors of 0.5, and no values for pairs
/// that never meet.
pub const D1_FIXTURE: &str = include_str!("../../fixtures/d1.json");

pub fn d1_instance() -> Instance {
    Instance::from_json(D1_FIXTURE).expect("bundled fixture is valid")
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct GeneratorParams {
    pub four_point: FourPointParams,
    /// Four-point priors are drawn uniformly within this distance of the
    /// midpoint of the two thresholds.
    pub prior_spread: f64,
    /// Range of the per-pair applicant centers for the positions-equivalent
    /// uniform model.
    pub center_range: (f64, f64),
    /// Source tables for `FixedMatrices`.
    #[serde(skip)]
    pub fixture: Option<Instance>,
}

impl Default for GeneratorParams {
    fn default() -> Self {
        GeneratorParams {
            four_point: FourPointParams::default(),
            prior_spread: 0.002,
            center_range: (0.25, 1.0),
            fixture: None,
        }
    }
}

/// Seeds the generator for instance construction. Runs draw interview
/// values from stream 0 of the same seed; this is stream 1.
pub fn instance_rng(seed: u64) -> ChaCha8Rng {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    rng.set_stream(1);
    rng
}

pub fn run_rng(seed: u64) -> ChaCha8Rng {
    ChaCha8Rng::seed_from_u64(seed)
}

/// Builds an instance of the requested family. Deterministic in all
/// arguments.
pub fn generate_instance(kind: ModelKind, n: usize, m: usize, params: &GeneratorParams, seed: u64) -> Result<Instance> {
    let mut rng = instance_rng(seed);
    match kind {
        ModelKind::BilateralUniform => Instance::bilateral_uniform(n, m),
        ModelKind::TwoPointOrdered => Instance::two_point_ordered(n, m),
        ModelKind::PositionsEquivalentUniform => {
            let (lo, hi) = params.center_range;
            if !(lo > 0.0 && hi >= lo && hi.is_finite()) {
                return Err(Error::InvalidParameters(format!("bad center range ({lo}, {hi})")));
            }
            let centers = Grid::from_fn(n, m, |_, _| lo + (hi - lo) * rng.gen::<f64>());
            Instance::positions_equivalent_uniform(centers)
        }
        ModelKind::AlmostEquivalent4Point => {
            let fp = params.four_point;
            let mid = 0.5 * (fp.high_threshold + fp.low_threshold);
            let spread = params.prior_spread;
            let mut draw = || mid + spread * (2.0 * rng.gen::<f64>() - 1.0);
            let applicant = Grid::from_fn(n, m, |_, _| draw());
            let position = Grid::from_fn(m, n, |_, _| draw());
            Instance::almost_equivalent(fp, applicant, position)
        }
        ModelKind::FixedMatrices => {
            let fixture = params
                .fixture
                .clone()
                .ok_or_else(|| Error::InvalidParameters("fixed matrices need a fixture".into()))?;
            if fixture.n() != n || fixture.m() != m {
                return Err(Error::InvalidParameters(format!(
                    "fixture is {}x{}, requested {n}x{m}",
                    fixture.n(),
                    fixture.m()
                )));
            }
            Ok(fixture)
        }
    }
}
