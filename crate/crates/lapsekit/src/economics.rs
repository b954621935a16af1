//! Customer-lifetime-value machinery and the retention-gain metric.
//!
//! A fitted classifier splits a test portfolio into the four confusion
//! cells, tracked both as policy counts and as summed face amounts. The
//! economic layer values the portfolio with and without a retention
//! campaign (an incentive stream offered to every predicted lapser) and
//! reports the difference as the retention gain. The same cash-flow model
//! also produces per-policy profit targets, turning the classification
//! problem into a gain regression.

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

/// Cash-flow model parameters for one incentive strategy.
///
/// All per-year vectors have length `horizon + 1` (year 0 through year T).
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct EconomicParams {
    /// Deterministic horizon T in years.
    pub horizon: usize,
    /// Constant per-year profitability ratio p applied to the face amount.
    pub profitability: f64,
    /// Constant per-year discount rate d.
    pub discount: f64,
    /// Cost c of contacting one policyholder, in currency.
    pub contact_cost: f64,
    /// Retention probabilities of a lapsing policyholder, years 0..=T.
    pub r_lapse: Vec<f64>,
    /// Incentive stream delta offered to contacted policyholders, as a
    /// per-year ratio of face amount, years 0..=T.
    pub incentive: Vec<f64>,
    /// Probability gamma that a would-lapse policyholder accepts the offer.
    pub acceptance: f64,
}

/// The two incentive strategies shipped as presets.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Strategy {
    Aggressive,
    Moderate,
}

impl Strategy {
    pub fn name(self) -> &'static str {
        match self {
            Strategy::Aggressive => "aggressive",
            Strategy::Moderate => "moderate",
        }
    }
}

impl std::str::FromStr for Strategy {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        match s {
            "aggressive" => Ok(Strategy::Aggressive),
            "moderate" => Ok(Strategy::Moderate),
            other => Err(Error::config(format!(
                "unknown strategy '{other}' (expected 'aggressive' or 'moderate')"
            ))),
        }
    }
}

/// Retention probabilities of a lapser with no intervention, years 0..=12.
const PRESET_R_LAPSE: [f64; 13] = [
    0.96, 0.87, 0.67, 0.37, 0.27, 0.21, 0.15, 0.12, 0.10, 0.08, 0.06, 0.05, 0.04,
];

const PRESET_INCENTIVE_AGGRESSIVE: [f64; 13] = [
    0.0, 0.0, 0.0003, 0.0003, 0.0006, 0.0006, 0.0009, 0.0009, 0.0012, 0.0012, 0.0015, 0.0015,
    0.0018,
];

const PRESET_INCENTIVE_MODERATE: [f64; 13] = [
    0.0, 0.0, 0.00015, 0.00015, 0.0003, 0.0003, 0.00045, 0.00045, 0.0006, 0.0006, 0.0006, 0.0006,
    0.0006,
];

/// Published parameterization of the two incentive strategies:
/// T = 12, p = 0.5%, d = 2%, c = 10, the estimated lapser retention curve,
/// and acceptance 20% (aggressive) or 10% (moderate).
pub fn load_paper_presets(strategy: Strategy) -> EconomicParams {
    let (incentive, acceptance) = match strategy {
        Strategy::Aggressive => (PRESET_INCENTIVE_AGGRESSIVE.to_vec(), 0.20),
        Strategy::Moderate => (PRESET_INCENTIVE_MODERATE.to_vec(), 0.10),
    };
    let ep = EconomicParams {
        horizon: 12,
        profitability: 0.005,
        discount: 0.02,
        contact_cost: 10.0,
        r_lapse: PRESET_R_LAPSE.to_vec(),
        incentive,
        acceptance,
    };
    debug_assert!(ep.validate().is_ok());
    debug_assert_eq!(ep.incentive[0], 0.0);
    debug_assert_eq!(ep.incentive[1], 0.0);
    ep
}

impl EconomicParams {
    /// Retention probabilities of a stayer: identically one.
    pub fn r_stay(&self) -> Vec<f64> {
        vec![1.0; self.horizon + 1]
    }

    /// Constant profitability vector p of length T+1.
    pub fn p_vec(&self) -> Vec<f64> {
        vec![self.profitability; self.horizon + 1]
    }

    /// Elementwise p - delta, the profitability net of the incentive.
    pub fn p_minus_incentive(&self) -> Vec<f64> {
        self.incentive
            .iter()
            .map(|d| self.profitability - d)
            .collect()
    }

    pub fn validate(&self) -> Result<()> {
        let want = self.horizon + 1;
        if self.r_lapse.len() != want {
            return Err(Error::config(format!(
                "r_lapse must have length T+1 = {want}, got {}",
                self.r_lapse.len()
            )));
        }
        if self.incentive.len() != want {
            return Err(Error::config(format!(
                "incentive must have length T+1 = {want}, got {}",
                self.incentive.len()
            )));
        }
        if !(0.0..=1.0).contains(&self.acceptance) {
            return Err(Error::config("acceptance must lie in [0, 1]"));
        }
        if self.r_lapse.iter().any(|r| !(0.0..=1.0).contains(r)) {
            return Err(Error::config("r_lapse entries must lie in [0, 1]"));
        }
        if self.r_lapse.windows(2).any(|w| w[1] > w[0]) {
            return Err(Error::config("r_lapse must be non-increasing"));
        }
        if self.incentive.iter().any(|d| *d < 0.0) {
            return Err(Error::config("incentive entries must be non-negative"));
        }
        if self.contact_cost < 0.0 {
            return Err(Error::config("contact_cost must be non-negative"));
        }
        if self.discount <= -1.0 {
            return Err(Error::config("discount must exceed -1"));
        }
        Ok(())
    }
}

/// Confusion matrix over a test set, in policy counts and in face amounts.
/// Index order is `[actual][predicted]` with 1 = lapse.
#[derive(Debug, Clone, Default, PartialEq, Serialize, Deserialize)]
pub struct ConfusionMatrix {
    pub counts: [[u64; 2]; 2],
    pub face: [[f64; 2]; 2],
}

impl ConfusionMatrix {
    pub fn count(&self, actual: usize, predicted: usize) -> u64 {
        self.counts[actual][predicted]
    }

    pub fn face(&self, actual: usize, predicted: usize) -> f64 {
        self.face[actual][predicted]
    }

    pub fn total_count(&self) -> u64 {
        self.counts.iter().flatten().sum()
    }

    pub fn total_face(&self) -> f64 {
        self.face.iter().flatten().sum()
    }

    /// Build a matrix from counts only, with zero face amounts. Test helper
    /// for count-based metrics.
    pub fn from_counts(counts: [[u64; 2]; 2]) -> Self {
        ConfusionMatrix {
            counts,
            face: [[0.0; 2]; 2],
        }
    }
}

/// Tally labels against predictions into count and face-amount cells.
pub fn confusion(labels: &[u8], predictions: &[u8], face_amounts: &[f64]) -> Result<ConfusionMatrix> {
    if labels.len() != predictions.len() || labels.len() != face_amounts.len() {
        return Err(Error::LengthMismatch(format!(
            "labels {}, predictions {}, face_amounts {}",
            labels.len(),
            predictions.len(),
            face_amounts.len()
        )));
    }
    let mut cm = ConfusionMatrix::default();
    for ((&y, &yhat), &f) in labels.iter().zip(predictions).zip(face_amounts) {
        let j = usize::from(y != 0);
        let k = usize::from(yhat != 0);
        cm.counts[j][k] += 1;
        cm.face[j][k] += f;
    }
    Ok(cm)
}

/// Discounted lifetime value of a face amount `face` under per-year
/// profitability `p_vec`, retention probabilities `r`, and discount rate
/// `d`: the sum over t of `p[t] * face * r[t] / (1+d)^t`.
pub fn clv(p_vec: &[f64], face: f64, r: &[f64], d: f64) -> Result<f64> {
    if p_vec.len() != r.len() {
        return Err(Error::LengthMismatch(format!(
            "profitability vector {} vs retention vector {}",
            p_vec.len(),
            r.len()
        )));
    }
    // Compensated (Neumaier) summation: currency totals over many years
    // must not drift, and the flat undiscounted case stays bit-exact.
    let mut sum = 0.0f64;
    let mut comp = 0.0f64;
    let mut discount = 1.0;
    for (p, rt) in p_vec.iter().zip(r) {
        let term = p * face * rt / discount;
        let t = sum + term;
        if sum.abs() >= term.abs() {
            comp += (sum - t) + term;
        } else {
            comp += (term - t) + sum;
        }
        sum = t;
        discount *= 1.0 + d;
    }
    Ok(sum + comp)
}

/// Portfolio value with no retention action: stayers run at `r_stay`,
/// lapsers at `r_lapse`, regardless of what the classifier said.
pub fn reference_portfolio_value(cm: &ConfusionMatrix, ep: &EconomicParams) -> Result<f64> {
    let p = ep.p_vec();
    let stay = clv(&p, cm.face(0, 0) + cm.face(0, 1), &ep.r_stay(), ep.discount)?;
    let lapse = clv(&p, cm.face(1, 0) + cm.face(1, 1), &ep.r_lapse, ep.discount)?;
    Ok(stay + lapse)
}

/// Portfolio value with the campaign applied to every predicted lapser:
/// contacted stayers take the incentive at probability one, contacted
/// lapsers accept with probability gamma, and every contact costs c.
pub fn lapse_managed_portfolio_value(cm: &ConfusionMatrix, ep: &EconomicParams) -> Result<f64> {
    let p = ep.p_vec();
    let r_stay = ep.r_stay();
    let gamma = ep.acceptance;
    let true_stay = clv(&p, cm.face(0, 0), &r_stay, ep.discount)?;
    let still_lapsing = clv(
        &p,
        cm.face(1, 0) + (1.0 - gamma) * cm.face(1, 1),
        &ep.r_lapse,
        ep.discount,
    )?;
    let incentivized = clv(
        &ep.p_minus_incentive(),
        cm.face(0, 1) + gamma * cm.face(1, 1),
        &r_stay,
        ep.discount,
    )?;
    let contacts = (cm.count(0, 1) + cm.count(1, 1)) as f64;
    Ok(true_stay + still_lapsing + incentivized - ep.contact_cost * contacts)
}

/// Retention gain of the campaign: managed value minus reference value.
///
/// Evaluated along two algebraically equivalent routes; disagreement above
/// 1e-9 relative is an internal-consistency error.
pub fn retention_gain(cm: &ConfusionMatrix, ep: &EconomicParams) -> Result<f64> {
    let direct = lapse_managed_portfolio_value(cm, ep)? - reference_portfolio_value(cm, ep)?;

    let p = ep.p_vec();
    let r_stay = ep.r_stay();
    let gamma = ep.acceptance;
    let saved = clv(&ep.p_minus_incentive(), cm.face(1, 1), &r_stay, ep.discount)?
        - clv(&p, cm.face(1, 1), &ep.r_lapse, ep.discount)?;
    let wasted_incentive = clv(&ep.incentive, cm.face(0, 1), &r_stay, ep.discount)?;
    let contacts = (cm.count(0, 1) + cm.count(1, 1)) as f64;
    let simplified = gamma * saved - wasted_incentive - ep.contact_cost * contacts;

    let scale = direct.abs().max(simplified.abs()).max(1.0);
    if (direct - simplified).abs() > 1e-9 * scale {
        return Err(Error::Inconsistency(format!(
            "retention gain routes disagree: direct {direct} vs simplified {simplified}"
        )));
    }
    Ok(direct)
}

/// Expected gain or loss of contacting one policyholder: the regression
/// target of the profit-trained model. A stayer pays the full incentive
/// stream plus the contact cost; a lapser yields the acceptance-weighted
/// difference between staying on the reduced margin and lapsing untouched.
pub fn profit_target(face_amount: f64, lapsed: bool, ep: &EconomicParams) -> f64 {
    let r_stay = ep.r_stay();
    if lapsed {
        let stay_net = clv(&ep.p_minus_incentive(), face_amount, &r_stay, ep.discount)
            .expect("vector lengths fixed by construction");
        let lapse = clv(&ep.p_vec(), face_amount, &ep.r_lapse, ep.discount)
            .expect("vector lengths fixed by construction");
        ep.acceptance * (stay_net - lapse) - ep.contact_cost
    } else {
        let incentive_cost = clv(&ep.incentive, face_amount, &r_stay, ep.discount)
            .expect("vector lengths fixed by construction");
        -incentive_cost - ep.contact_cost
    }
}

/// Profit targets for a whole portfolio.
pub fn profit_targets(labels: &[u8], face_amounts: &[f64], ep: &EconomicParams) -> Result<Vec<f64>> {
    if labels.len() != face_amounts.len() {
        return Err(Error::LengthMismatch(format!(
            "labels {} vs face_amounts {}",
            labels.len(),
            face_amounts.len()
        )));
    }
    Ok(labels
        .iter()
        .zip(face_amounts)
        .map(|(&y, &f)| profit_target(f, y != 0, ep))
        .collect())
}
