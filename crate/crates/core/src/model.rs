//! Value models and market instances.
//!
//! Every parametric family here has the median of each value distribution
//! equal to its mean, so an interview is "liked" (realized value above the
//! prior expectation) with probability exactly one half.

use rand::Rng;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::grid::Grid;
use crate::ids::{ApplicantId, PositionId};

pub type Utility = f64;

pub const FORMAT_VERSION: u32 = 1;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize, clap::ValueEnum)]
#[serde(rename_all = "snake_case")]
#[value(rename_all = "snake_case")]
pub enum ModelKind {
    /// Every value drawn from U[0, 1] on both sides.
    BilateralUniform,
    /// Positions draw from U[0, 1]; applicant values for (i, j) are
    /// U[0, 2c] around a per-pair center c.
    PositionsEquivalentUniform,
    /// Two-point distributions whose means fall geometrically in the
    /// partner's index.
    TwoPointOrdered,
    /// Four-point distributions with fixed upper and lower thresholds.
    #[serde(rename = "almost_equivalent_4point")]
    #[value(name = "almost_equivalent_4point")]
    AlmostEquivalent4Point,
    /// Realized values read from tables rather than sampled.
    FixedMatrices,
}

impl ModelKind {
    pub fn name(self) -> &'static str {
        match self {
            ModelKind::BilateralUniform => "bilateral_uniform",
            ModelKind::PositionsEquivalentUniform => "positions_equivalent_uniform",
            ModelKind::TwoPointOrdered => "two_point_ordered",
            ModelKind::AlmostEquivalent4Point => "almost_equivalent_4point",
            ModelKind::FixedMatrices => "fixed_matrices",
        }
    }
}

/// Shared parameters of the four-point family.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct FourPointParams {
    pub phi_upper: f64,
    pub phi_lower: f64,
    pub high_threshold: f64,
    pub low_threshold: f64,
    /// Atom above `high_threshold`, carrying mass `1/2 - phi_upper`.
    pub high_value: f64,
    /// Atom below `low_threshold`, carrying mass `1/2 - phi_lower`.
    pub low_value: f64,
}

impl Default for FourPointParams {
    fn default() -> Self {
        FourPointParams {
            phi_upper: 0.05,
            phi_lower: 0.05,
            high_threshold: 0.6,
            low_threshold: 0.4,
            high_value: 0.9,
            low_value: 0.1,
        }
    }
}

/// A four-atom distribution with mean `expectation`:
///
/// | value      | mass            |
/// |------------|-----------------|
/// | `low`      | 1/2 - phi_lower |
/// | `mid_low`  | phi_lower       |
/// | `mid_high` | phi_upper       |
/// | `high`     | 1/2 - phi_upper |
///
/// `mid_low` sits halfway between the lower threshold and the mean;
/// `mid_high` is whatever makes the mean come out right and must land strictly
/// between the mean and the upper threshold.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct FourPoint {
    pub low: f64,
    pub mid_low: f64,
    pub mid_high: f64,
    pub high: f64,
    phi_upper: f64,
    phi_lower: f64,
}

impl FourPoint {
    pub fn new(params: &FourPointParams, expectation: f64) -> Result<Self> {
        let FourPointParams {
            phi_upper,
            phi_lower,
            high_threshold,
            low_threshold,
            high_value,
            low_value,
        } = *params;
        let bad = |msg: String| Err(Error::InvalidParameters(msg));
        if !(phi_upper > 0.0 && phi_upper < 0.5 && phi_lower > 0.0 && phi_lower < 0.5) {
            return bad(format!("phi_upper={phi_upper}, phi_lower={phi_lower} must lie in (0, 1/2)"));
        }
        if !(low_value >= 0.0 && low_value < low_threshold) {
            return bad(format!("low_value={low_value} must lie in [0, {low_threshold})"));
        }
        if !(high_value > high_threshold && high_value.is_finite()) {
            return bad(format!("high_value={high_value} must exceed {high_threshold}"));
        }
        if !(low_threshold < expectation && expectation < high_threshold) {
            return bad(format!(
                "expectation {expectation} must lie strictly between {low_threshold} and {high_threshold}"
            ));
        }
        let mid_low = 0.5 * (low_threshold + expectation);
        let mid_high = (expectation
            - (0.5 - phi_upper) * high_value
            - phi_lower * mid_low
            - (0.5 - phi_lower) * low_value)
            / phi_upper;
        if !(mid_high > expectation && mid_high < high_threshold) {
            return bad(format!(
                "solved upper-middle atom {mid_high} falls outside ({expectation}, {high_threshold})"
            ));
        }
        Ok(FourPoint {
            low: low_value,
            mid_low,
            mid_high,
            high: high_value,
            phi_upper,
            phi_lower,
        })
    }

    pub fn mean(&self) -> f64 {
        (0.5 - self.phi_lower) * self.low
            + self.phi_lower * self.mid_low
            + self.phi_upper * self.mid_high
            + (0.5 - self.phi_upper) * self.high
    }

    pub fn sample<R: Rng + ?Sized>(&self, rng: &mut R) -> f64 {
        let r: f64 = rng.gen();
        if r < 0.5 - self.phi_lower {
            self.low
        } else if r < 0.5 {
            self.mid_low
        } else if r < 0.5 + self.phi_upper {
            self.mid_high
        } else {
            self.high
        }
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct AlmostEquivalentModel {
    pub params: FourPointParams,
    applicant_dists: Grid<FourPoint>,
    position_dists: Grid<FourPoint>,
}

/// Exact realized values. Cells left `None` must never be interviewed.
#[derive(Debug, Clone, PartialEq)]
pub struct FixedValues {
    /// `v[i][j]`: applicant i's value for position j.
    pub v: Grid<Option<f64>>,
    /// `u[j][i]`: position j's value for applicant i.
    pub u: Grid<Option<f64>>,
}

#[derive(Debug, Clone, PartialEq)]
pub enum ValueModel {
    BilateralUniform,
    PositionsEquivalentUniform { applicant_centers: Grid<f64> },
    TwoPointOrdered,
    AlmostEquivalent4Point(AlmostEquivalentModel),
    FixedMatrices(FixedValues),
}

impl ValueModel {
    pub fn kind(&self) -> ModelKind {
        match self {
            ValueModel::BilateralUniform => ModelKind::BilateralUniform,
            ValueModel::PositionsEquivalentUniform { .. } => ModelKind::PositionsEquivalentUniform,
            ValueModel::TwoPointOrdered => ModelKind::TwoPointOrdered,
            ValueModel::AlmostEquivalent4Point(_) => ModelKind::AlmostEquivalent4Point,
            ValueModel::FixedMatrices(_) => ModelKind::FixedMatrices,
        }
    }
}

/// High and low atoms of the ordered two-point family for the partner at
/// one-based index `idx` on a side of size `size`.
pub(crate) fn two_point_atoms(idx: usize, size: usize) -> (f64, f64) {
    let low = idx as f64 / (size + 1) as f64;
    let high = 2f64.powi((size - idx + 1) as i32) - low;
    (high, low)
}

pub(crate) fn two_point_mean(idx: usize, size: usize) -> f64 {
    2f64.powi((size - idx) as i32)
}

/// A matching-with-interviews market: `n` applicants, `m` positions and the
/// value distributions of every pair.
#[derive(Debug, Clone, PartialEq)]
pub struct Instance {
    n: usize,
    m: usize,
    model: ValueModel,
    /// `V[i][j]`.
    applicant_priors: Grid<f64>,
    /// `U[j][i]`.
    position_priors: Grid<f64>,
}

impl Instance {
    pub fn bilateral_uniform(n: usize, m: usize) -> Result<Self> {
        Self::build(
            n,
            m,
            ValueModel::BilateralUniform,
            Grid::filled(n, m, 0.5),
            Grid::filled(m, n, 0.5),
        )
    }

    pub fn positions_equivalent_uniform(applicant_centers: Grid<f64>) -> Result<Self> {
        let (n, m) = applicant_centers.shape();
        if applicant_centers.iter().any(|c| !(c.is_finite() && *c > 0.0)) {
            return Err(Error::InvalidParameters(
                "applicant centers must be finite and positive".into(),
            ));
        }
        let priors = applicant_centers.clone();
        Self::build(
            n,
            m,
            ValueModel::PositionsEquivalentUniform { applicant_centers },
            priors,
            Grid::filled(m, n, 0.5),
        )
    }

    pub fn two_point_ordered(n: usize, m: usize) -> Result<Self> {
        if n > 1000 || m > 1000 {
            return Err(Error::InvalidParameters(
                "two-point ordered atoms overflow f64 beyond 1000 agents per side".into(),
            ));
        }
        Self::build(
            n,
            m,
            ValueModel::TwoPointOrdered,
            Grid::from_fn(n, m, |_, j| two_point_mean(j + 1, m)),
            Grid::from_fn(m, n, |_, i| two_point_mean(i + 1, n)),
        )
    }

    /// `applicant_priors` is n×m, `position_priors` is m×n.
    pub fn almost_equivalent(
        params: FourPointParams,
        applicant_priors: Grid<f64>,
        position_priors: Grid<f64>,
    ) -> Result<Self> {
        let (n, m) = applicant_priors.shape();
        if position_priors.shape() != (m, n) {
            return Err(Error::InvalidInstance(format!(
                "position priors are {:?}, expected {:?}",
                position_priors.shape(),
                (m, n)
            )));
        }
        let applicant_dists = build_four_point(&params, &applicant_priors)?;
        let position_dists = build_four_point(&params, &position_priors)?;
        Self::build(
            n,
            m,
            ValueModel::AlmostEquivalent4Point(AlmostEquivalentModel {
                params,
                applicant_dists,
                position_dists,
            }),
            applicant_priors,
            position_priors,
        )
    }

    pub fn fixed(
        applicant_priors: Grid<f64>,
        position_priors: Grid<f64>,
        v: Grid<Option<f64>>,
        u: Grid<Option<f64>>,
    ) -> Result<Self> {
        let (n, m) = applicant_priors.shape();
        if v.shape() != (n, m) || u.shape() != (m, n) || position_priors.shape() != (m, n) {
            return Err(Error::InvalidInstance(
                "fixed matrices do not match the market dimensions".into(),
            ));
        }
        if v.iter().chain(u.iter()).flatten().any(|x| !(x.is_finite() && *x >= 0.0)) {
            return Err(Error::InvalidInstance(
                "realized values must be finite and non-negative".into(),
            ));
        }
        Self::build(
            n,
            m,
            ValueModel::FixedMatrices(FixedValues { v, u }),
            applicant_priors,
            position_priors,
        )
    }

    fn build(
        n: usize,
        m: usize,
        model: ValueModel,
        applicant_priors: Grid<f64>,
        position_priors: Grid<f64>,
    ) -> Result<Self> {
        if n < 2 || m < 2 {
            return Err(Error::InvalidInstance(format!(
                "need at least 2 applicants and 2 positions, got n={n}, m={m}"
            )));
        }
        if applicant_priors.shape() != (n, m) || position_priors.shape() != (m, n) {
            return Err(Error::InvalidInstance("prior matrices do not match (n, m)".into()));
        }
        if applicant_priors
            .iter()
            .chain(position_priors.iter())
            .any(|x| !(x.is_finite() && *x >= 0.0))
        {
            return Err(Error::InvalidInstance(
                "prior expectations must be finite and non-negative".into(),
            ));
        }
        Ok(Instance {
            n,
            m,
            model,
            applicant_priors,
            position_priors,
        })
    }

    pub fn n(&self) -> usize {
        self.n
    }

    pub fn m(&self) -> usize {
        self.m
    }

    pub fn model(&self) -> &ValueModel {
        &self.model
    }

    pub fn kind(&self) -> ModelKind {
        self.model.kind()
    }

    #[inline]
    pub fn applicant_prior(&self, a: ApplicantId, p: PositionId) -> Utility {
        *self.applicant_priors.get(a.0, p.0)
    }

    #[inline]
    pub fn position_prior(&self, p: PositionId, a: ApplicantId) -> Utility {
        *self.position_priors.get(p.0, a.0)
    }

    pub fn applicant_priors(&self) -> &Grid<f64> {
        &self.applicant_priors
    }

    pub fn position_priors(&self) -> &Grid<f64> {
        &self.position_priors
    }

    /// Upper threshold of the applicants' almost-equivalence family.
    pub fn applicant_high_threshold(&self) -> Option<f64> {
        match &self.model {
            ValueModel::AlmostEquivalent4Point(model) => Some(model.params.high_threshold),
            _ => None,
        }
    }

    /// True when every applicant prior equals one constant and every
    /// position prior equals another.
    pub fn is_bilaterally_equivalent(&self) -> bool {
        let constant = |g: &Grid<f64>| {
            let first = *g.get(0, 0);
            g.iter().all(|x| *x == first)
        };
        constant(&self.applicant_priors) && constant(&self.position_priors)
    }

    pub fn check_applicant(&self, a: ApplicantId) -> Result<()> {
        if a.0 < self.n {
            Ok(())
        } else {
            Err(Error::OutOfRange {
                agent: a.into(),
                n: self.n,
                m: self.m,
            })
        }
    }

    pub fn check_position(&self, p: PositionId) -> Result<()> {
        if p.0 < self.m {
            Ok(())
        } else {
            Err(Error::OutOfRange {
                agent: p.into(),
                n: self.n,
                m: self.m,
            })
        }
    }

    /// Draws `(v, u)` for an interview of `a` at `p`. The applicant's value is
    /// drawn first.
    pub fn realize<R: Rng + ?Sized>(
        &self,
        a: ApplicantId,
        p: PositionId,
        rng: &mut R,
    ) -> Result<(Utility, Utility)> {
        self.check_applicant(a)?;
        self.check_position(p)?;
        let (i, j) = (a.0, p.0);
        let pair = match &self.model {
            ValueModel::BilateralUniform => (rng.gen::<f64>(), rng.gen::<f64>()),
            ValueModel::PositionsEquivalentUniform { applicant_centers } => {
                let c = *applicant_centers.get(i, j);
                (2.0 * c * rng.gen::<f64>(), rng.gen::<f64>())
            }
            ValueModel::TwoPointOrdered => {
                let (v_hi, v_lo) = two_point_atoms(j + 1, self.m);
                let v = if rng.gen_bool(0.5) { v_hi } else { v_lo };
                let (u_hi, u_lo) = two_point_atoms(i + 1, self.n);
                let u = if rng.gen_bool(0.5) { u_hi } else { u_lo };
                (v, u)
            }
            ValueModel::AlmostEquivalent4Point(model) => (
                model.applicant_dists.get(i, j).sample(rng),
                model.position_dists.get(j, i).sample(rng),
            ),
            ValueModel::FixedMatrices(fixed) => {
                match (*fixed.v.get(i, j), *fixed.u.get(j, i)) {
                    (Some(v), Some(u)) => (v, u),
                    _ => return Err(Error::MissingFixedValue(a, p)),
                }
            }
        };
        Ok(pair)
    }
}

fn build_four_point(params: &FourPointParams, priors: &Grid<f64>) -> Result<Grid<FourPoint>> {
    let mut cells = Vec::with_capacity(priors.rows());
    for r in 0..priors.rows() {
        let row = priors
            .row(r)
            .iter()
            .map(|&e| FourPoint::new(params, e))
            .collect::<Result<Vec<_>>>()?;
        cells.push(row);
    }
    Ok(Grid::from_rows(cells).expect("rows share the prior matrix width"))
}

// ---------------------------------------------------------------------------
// JSON document

#[derive(Debug, Clone, Serialize, Deserialize)]
#[serde(untagged)]
pub enum PriorSpec {
    Constant(f64),
    Matrix(Grid<f64>),
}

impl PriorSpec {
    fn expand(&self, rows: usize, cols: usize) -> Grid<f64> {
        match self {
            PriorSpec::Constant(c) => Grid::filled(rows, cols, *c),
            PriorSpec::Matrix(g) => g.clone(),
        }
    }

    fn compact(g: &Grid<f64>) -> Self {
        let first = *g.get(0, 0);
        if g.iter().all(|x| *x == first) {
            PriorSpec::Constant(first)
        } else {
            PriorSpec::Matrix(g.clone())
        }
    }
}

#[derive(Debug, Clone, Default, Serialize, Deserialize)]
struct DocParams {
    #[serde(default, skip_serializing_if = "Option::is_none")]
    applicant_priors: Option<PriorSpec>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    position_priors: Option<PriorSpec>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    applicant_centers: Option<Grid<f64>>,
    #[serde(default, skip_serializing_if = "Option::is_none", flatten)]
    four_point: Option<FourPointParams>,
}

/// On-disk form of an [`Instance`].
#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct InstanceDoc {
    #[serde(default = "default_version")]
    pub format_version: u32,
    pub n: usize,
    pub m: usize,
    pub kind: ModelKind,
    #[serde(default)]
    params: DocParams,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub v: Option<Grid<Option<f64>>>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub u: Option<Grid<Option<f64>>>,
}

fn default_version() -> u32 {
    FORMAT_VERSION
}

impl Instance {
    pub fn from_json(text: &str) -> Result<Self> {
        let doc: InstanceDoc = serde_json::from_str(text)?;
        Self::from_doc(doc)
    }

    pub fn to_json(&self) -> Result<String> {
        Ok(serde_json::to_string_pretty(&self.to_doc())?)
    }

    pub fn from_doc(doc: InstanceDoc) -> Result<Self> {
        if doc.format_version != FORMAT_VERSION {
            return Err(Error::InvalidInstance(format!(
                "unsupported format_version {}",
                doc.format_version
            )));
        }
        let (n, m) = (doc.n, doc.m);
        let instance = match doc.kind {
            ModelKind::BilateralUniform => Self::bilateral_uniform(n, m)?,
            ModelKind::TwoPointOrdered => Self::two_point_ordered(n, m)?,
            ModelKind::PositionsEquivalentUniform => {
                let centers = doc.params.applicant_centers.ok_or_else(|| {
                    Error::InvalidParameters("missing params.applicant_centers".into())
                })?;
                Self::positions_equivalent_uniform(centers)?
            }
            ModelKind::AlmostEquivalent4Point => {
                let params = doc.params.four_point.ok_or_else(|| {
                    Error::InvalidParameters("missing four-point parameters".into())
                })?;
                let mid = 0.5 * (params.high_threshold + params.low_threshold);
                let ap = doc.params.applicant_priors.map_or(Grid::filled(n, m, mid), |s| s.expand(n, m));
                let pp = doc.params.position_priors.map_or(Grid::filled(m, n, mid), |s| s.expand(m, n));
                Self::almost_equivalent(params, ap, pp)?
            }
            ModelKind::FixedMatrices => {
                let (v, u) = doc.v.zip(doc.u).ok_or_else(|| {
                    Error::InvalidInstance("fixed_matrices requires both v and u".into())
                })?;
                let ap = doc.params.applicant_priors.map_or(Grid::filled(n, m, 0.5), |s| s.expand(n, m));
                let pp = doc.params.position_priors.map_or(Grid::filled(m, n, 0.5), |s| s.expand(m, n));
                Self::fixed(ap, pp, v, u)?
            }
        };
        if instance.n != n || instance.m != m {
            return Err(Error::InvalidInstance(format!(
                "declared n={n}, m={m} but matrices are {}x{}",
                instance.n, instance.m
            )));
        }
        Ok(instance)
    }

    pub fn to_doc(&self) -> InstanceDoc {
        let mut doc = InstanceDoc {
            format_version: FORMAT_VERSION,
            n: self.n,
            m: self.m,
            kind: self.kind(),
            params: DocParams::default(),
            v: None,
            u: None,
        };
        match &self.model {
            ValueModel::BilateralUniform | ValueModel::TwoPointOrdered => {}
            ValueModel::PositionsEquivalentUniform { applicant_centers } => {
                doc.params.applicant_centers = Some(applicant_centers.clone());
            }
            ValueModel::AlmostEquivalent4Point(model) => {
                doc.params.four_point = Some(model.params);
                doc.params.applicant_priors = Some(PriorSpec::compact(&self.applicant_priors));
                doc.params.position_priors = Some(PriorSpec::compact(&self.position_priors));
            }
            ValueModel::FixedMatrices(fixed) => {
                doc.params.applicant_priors = Some(PriorSpec::compact(&self.applicant_priors));
                doc.params.position_priors = Some(PriorSpec::compact(&self.position_priors));
                doc.v = Some(fixed.v.clone());
                doc.u = Some(fixed.u.clone());
            }
        }
        doc
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use rand::SeedableRng;
    use rand_chacha::ChaCha8Rng;

    #[test]
    fn two_point_priors_follow_powers_of_two() {
        let inst = Instance::two_point_ordered(3, 3).unwrap();
        assert_eq!(inst.applicant_prior(ApplicantId(0), PositionId(0)), 4.0);
        assert_eq!(inst.applicant_prior(ApplicantId(2), PositionId(2)), 1.0);
        let u: Vec<f64> = (0..3).map(|i| inst.position_prior(PositionId(1), ApplicantId(i))).collect();
        assert_eq!(u, vec![4.0, 2.0, 1.0]);
    }

    #[test]
    fn two_point_atoms_average_to_prior() {
        for size in 2..12 {
            for idx in 1..=size {
                let (hi, lo) = two_point_atoms(idx, size);
                let mean = two_point_mean(idx, size);
                assert!((0.5 * (hi + lo) - mean).abs() < 1e-12);
                assert!(hi > mean && lo < mean);
            }
        }
        // m = 2, j = 1: atoms 2^2 - 1/3 and 1/3
        let (hi, lo) = two_point_atoms(1, 2);
        assert_eq!(hi, 4.0 - 1.0 / 3.0);
        assert_eq!(lo, 1.0 / 3.0);
    }

    #[test]
    fn four_point_hits_its_mean_and_rejects_bad_atoms() {
        let params = FourPointParams::default();
        let d = FourPoint::new(&params, 0.5).unwrap();
        assert!((d.mean() - 0.5).abs() < 1e-12);
        assert!(d.mid_high > 0.5 && d.mid_high < params.high_threshold);
        assert!(d.mid_low > params.low_threshold && d.mid_low < 0.5);
        assert!(matches!(
            FourPoint::new(&params, 0.52),
            Err(Error::InvalidParameters(_))
        ));
        assert!(FourPoint::new(&params, 0.7).is_err());
        let bad = FourPointParams {
            phi_upper: 0.0,
            ..params
        };
        assert!(FourPoint::new(&bad, 0.5).is_err());
    }

    #[test]
    fn bilateral_uniform_samples_stay_in_unit_interval() {
        let inst = Instance::bilateral_uniform(3, 4).unwrap();
        let mut rng = ChaCha8Rng::seed_from_u64(7);
        for _ in 0..1000 {
            let (v, u) = inst.realize(ApplicantId(0), PositionId(0), &mut rng).unwrap();
            assert!((0.0..=1.0).contains(&v) && (0.0..=1.0).contains(&u));
        }
    }

    #[test]
    fn small_markets_are_rejected() {
        assert!(Instance::bilateral_uniform(1, 5).is_err());
        assert!(Instance::bilateral_uniform(5, 1).is_err());
    }

    #[test]
    fn missing_fixed_cell_is_an_error() {
        let inst = Instance::fixed(
            Grid::filled(2, 2, 0.5),
            Grid::filled(2, 2, 0.5),
            Grid::from_rows(vec![vec![Some(0.7), None], vec![None, None]]).unwrap(),
            Grid::from_rows(vec![vec![Some(0.6), None], vec![None, None]]).unwrap(),
        )
        .unwrap();
        let mut rng = ChaCha8Rng::seed_from_u64(0);
        assert_eq!(
            inst.realize(ApplicantId(0), PositionId(0), &mut rng).unwrap(),
            (0.7, 0.6)
        );
        assert!(matches!(
            inst.realize(ApplicantId(1), PositionId(0), &mut rng),
            Err(Error::MissingFixedValue(..))
        ));
    }

    #[test]
    fn json_round_trip_keeps_the_model() {
        let params = FourPointParams::default();
        let inst = Instance::almost_equivalent(
            params,
            Grid::from_fn(2, 3, |i, j| 0.5 + 0.0005 * (i + j) as f64),
            Grid::filled(3, 2, 0.5),
        )
        .unwrap();
        let back = Instance::from_json(&inst.to_json().unwrap()).unwrap();
        assert_eq!(back, inst);

        let two = Instance::two_point_ordered(4, 5).unwrap();
        assert_eq!(Instance::from_json(&two.to_json().unwrap()).unwrap(), two);
    }

    #[test]
    fn json_rejects_dimension_mismatch() {
        let text = r#"{"n": 3, "m": 2, "kind": "fixed_matrices",
            "v": [[0.1, 0.2], [0.3, 0.4]], "u": [[0.1, 0.2], [0.3, 0.4]]}"#;
        assert!(Instance::from_json(text).is_err());
    }
}
