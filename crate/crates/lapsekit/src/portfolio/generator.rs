//! Seeded synthetic portfolio generator.
//!
//! Field marginals are sampled independently to match configured targets;
//! lapse labels are drawn from a logistic transform of a latent propensity
//! score over the sampled fields. The score's intercept is calibrated by
//! bisection so the realized lapse rate hits the configured target, and the
//! whole procedure is a pure function of the config (seed included).
//!
//! Samplers draw from raw 64-bit ChaCha output, so datasets are
//! bit-identical across platforms.

use std::collections::BTreeMap;

use chrono::NaiveDate;
use rand::RngCore;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use serde::{Deserialize, Serialize};

use super::{Channel, Participation, PaymentMethod, Policy, ProductType};
use crate::error::{Error, Result};

/// Target proportions for one categorical field, keyed by level name.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct CategoricalTargets(pub BTreeMap<String, f64>);

impl CategoricalTargets {
    pub fn new(pairs: &[(&str, f64)]) -> Self {
        CategoricalTargets(
            pairs
                .iter()
                .map(|(k, v)| (k.to_string(), *v))
                .collect(),
        )
    }

    /// Probabilities in the given level order; errors unless the keys cover
    /// exactly these levels and sum to one.
    fn probs_for(&self, field: &str, levels: &[&str]) -> Result<Vec<f64>> {
        if self.0.len() != levels.len() {
            return Err(Error::config(format!(
                "{field}: expected {} levels, got {}",
                levels.len(),
                self.0.len()
            )));
        }
        let mut probs = Vec::with_capacity(levels.len());
        for level in levels {
            let p = self.0.get(*level).ok_or_else(|| {
                Error::config(format!("{field}: missing proportion for level '{level}'"))
            })?;
            if !(0.0..=1.0).contains(p) {
                return Err(Error::config(format!(
                    "{field}: proportion {p} for '{level}' outside [0, 1]"
                )));
            }
            probs.push(*p);
        }
        let total: f64 = probs.iter().sum();
        if (total - 1.0).abs() > 1e-9 {
            return Err(Error::config(format!(
                "{field}: proportions sum to {total}, expected 1"
            )));
        }
        Ok(probs)
    }
}

/// Mean/sd with hard bounds; sampled as a truncated rounded normal.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct NumericMarginal {
    pub mean: f64,
    pub sd: f64,
    pub min: f64,
    pub max: f64,
}

/// Log-normal face-amount marginal: the median fixes the log-mean and the
/// mean/median ratio fixes the log-sd.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct FaceMarginal {
    pub median: f64,
    pub mean: f64,
    pub min: f64,
    pub max: f64,
}

/// Inception-date sampling window and target moments.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct DateWindow {
    pub start: NaiveDate,
    pub end: NaiveDate,
    pub mean: NaiveDate,
    pub sd_years: f64,
}

/// Per-field marginal targets.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct Marginals {
    pub female: f64,
    pub occupation_extra_screening: f64,
    pub physical_exam_required: f64,
    pub single_premium: f64,
    pub currency_ntd: f64,
    pub participation: CategoricalTargets,
    pub product_type: CategoricalTargets,
    pub channel: CategoricalTargets,
    pub payment_method: CategoricalTargets,
    pub age: NumericMarginal,
    pub nonlife_policy_count: NumericMarginal,
    pub face_amount: FaceMarginal,
    pub inception: DateWindow,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Default, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Transform {
    #[default]
    Identity,
    Square,
    Sin,
}

/// One term of the latent lapse-propensity score: the transform of a
/// product of named covariates, times a coefficient. A single variable
/// gives a linear (or nonlinear, via the transform) term; two or more give
/// an interaction.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct SignalTerm {
    pub vars: Vec<String>,
    pub coef: f64,
    #[serde(default)]
    pub transform: Transform,
}

/// Latent lapse-propensity score specification.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct SignalSpec {
    pub terms: Vec<SignalTerm>,
}

/// Full generator configuration; `generate` is a pure function of it.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct GeneratorConfig {
    pub n_policies: usize,
    pub seed: u64,
    /// Target lapse rate. 0 and 1 are allowed as degenerate cases.
    pub base_lapse_rate: f64,
    pub marginals: Marginals,
    pub signal: SignalSpec,
}

impl GeneratorConfig {
    /// Defaults matching the published portfolio's descriptive statistics,
    /// with a planted signal containing interaction and quadratic terms so
    /// that tree ensembles have an edge over the linear model.
    pub fn table1_defaults(n_policies: usize, seed: u64) -> GeneratorConfig {
        let term = |vars: &[&str], coef: f64, transform: Transform| SignalTerm {
            vars: vars.iter().map(|s| s.to_string()).collect(),
            coef,
            transform,
        };
        GeneratorConfig {
            n_policies,
            seed,
            base_lapse_rate: 0.386,
            marginals: Marginals {
                female: 0.48,
                occupation_extra_screening: 0.195,
                physical_exam_required: 0.036,
                single_premium: 0.031,
                currency_ntd: 0.881,
                participation: CategoricalTargets::new(&[
                    ("non_participating", 0.372),
                    ("participating", 0.162),
                    ("mandatory_participating", 0.466),
                ]),
                product_type: CategoricalTargets::new(&[
                    ("traditional", 0.971),
                    ("interest_adjustable", 0.017),
                    ("investment_linked", 0.012),
                ]),
                channel: CategoricalTargets::new(&[
                    ("ta", 0.939),
                    ("bk", 0.034),
                    ("dm", 0.024),
                    ("other", 0.003),
                ]),
                payment_method: CategoricalTargets::new(&[
                    ("insurer", 0.188),
                    ("bank_or_card", 0.708),
                    ("post_or_convenience", 0.104),
                ]),
                age: NumericMarginal {
                    mean: 28.3,
                    sd: 16.8,
                    min: 0.0,
                    max: 80.0,
                },
                nonlife_policy_count: NumericMarginal {
                    mean: 1.2,
                    sd: 2.0,
                    min: 0.0,
                    max: 33.0,
                },
                face_amount: FaceMarginal {
                    median: 10_000.0,
                    mean: 17_165.0,
                    min: 333.0,
                    max: 2_000_000.0,
                },
                inception: DateWindow {
                    start: NaiveDate::from_ymd_opt(1998, 1, 1).unwrap(),
                    end: NaiveDate::from_ymd_opt(2013, 7, 31).unwrap(),
                    mean: NaiveDate::from_ymd_opt(2005, 6, 6).unwrap(),
                    sd_years: 4.8,
                },
            },
            signal: SignalSpec {
                terms: vec![
                    term(&["age_z"], -0.30, Transform::Identity),
                    term(&["age_z"], 0.80, Transform::Square),
                    term(&["face_log_z"], 0.35, Transform::Identity),
                    term(&["nonlife_z"], 0.25, Transform::Identity),
                    term(&["gender"], 0.15, Transform::Identity),
                    term(&["single_premium"], -0.60, Transform::Identity),
                    term(&["channel:bk"], 0.50, Transform::Identity),
                    term(&["payment_method:insurer"], 0.45, Transform::Identity),
                    term(&["currency_ntd"], -0.20, Transform::Identity),
                    term(&["days_z"], 0.30, Transform::Identity),
                    term(&["days_z"], -0.35, Transform::Square),
                    term(&["age_z", "face_log_z"], 0.90, Transform::Identity),
                    term(&["gender", "nonlife_z"], -0.70, Transform::Identity),
                ],
            },
        }
    }

    pub fn validate(&self) -> Result<()> {
        if self.n_policies == 0 {
            return Err(Error::config("n_policies must be positive"));
        }
        if !(0.0..=1.0).contains(&self.base_lapse_rate) {
            return Err(Error::config("base_lapse_rate must lie in [0, 1]"));
        }
        let m = &self.marginals;
        for (name, p) in [
            ("female", m.female),
            ("occupation_extra_screening", m.occupation_extra_screening),
            ("physical_exam_required", m.physical_exam_required),
            ("single_premium", m.single_premium),
            ("currency_ntd", m.currency_ntd),
        ] {
            if !(0.0..=1.0).contains(&p) {
                return Err(Error::config(format!("{name} proportion {p} outside [0, 1]")));
            }
        }
        m.participation
            .probs_for("participation", &Participation::ALL.map(|v| v.as_str()))?;
        m.product_type
            .probs_for("product_type", &ProductType::ALL.map(|v| v.as_str()))?;
        m.channel.probs_for("channel", &Channel::ALL.map(|v| v.as_str()))?;
        m.payment_method
            .probs_for("payment_method", &PaymentMethod::ALL.map(|v| v.as_str()))?;
        if m.age.sd <= 0.0 || m.age.min > m.age.max {
            return Err(Error::config("age marginal requires sd > 0 and min <= max"));
        }
        if m.nonlife_policy_count.mean < 0.0 || m.nonlife_policy_count.sd <= 0.0 {
            return Err(Error::config("nonlife_policy_count marginal requires mean >= 0, sd > 0"));
        }
        let f = &m.face_amount;
        if !(f.min > 0.0 && f.min <= f.median && f.median <= f.mean && f.mean <= f.max) {
            return Err(Error::config(
                "face_amount marginal requires 0 < min <= median <= mean <= max",
            ));
        }
        let w = &m.inception;
        if w.start > w.end || w.mean < w.start || w.mean > w.end || w.sd_years <= 0.0 {
            return Err(Error::config("inception window requires start <= mean <= end, sd > 0"));
        }
        // every signal variable must resolve
        let probe = Policy {
            age: 30,
            gender: false,
            occupation_extra_screening: false,
            physical_exam_required: false,
            nonlife_policy_count: 0,
            inception_date: w.mean,
            face_amount: f.median,
            single_premium: false,
            participation: Participation::NonParticipating,
            product_type: ProductType::Traditional,
            currency_ntd: false,
            channel: Channel::Ta,
            payment_method: PaymentMethod::Insurer,
            lapsed: false,
        };
        for t in &self.signal.terms {
            if t.vars.is_empty() {
                return Err(Error::config("signal term with no variables"));
            }
            for var in &t.vars {
                covariate(&probe, var, m)?;
            }
        }
        Ok(())
    }
}

// ---- portable samplers ---------------------------------------------------

/// Uniform in [0, 1) from the top 53 bits of the stream.
fn u01(rng: &mut ChaCha8Rng) -> f64 {
    (rng.next_u64() >> 11) as f64 * (1.0 / 9_007_199_254_740_992.0)
}

/// Standard normal via Box-Muller.
fn std_normal(rng: &mut ChaCha8Rng) -> f64 {
    let u1 = 1.0 - u01(rng); // (0, 1]
    let u2 = u01(rng);
    (-2.0 * u1.ln()).sqrt() * (std::f64::consts::TAU * u2).cos()
}

/// Truncated rounded normal for integer-valued fields.
fn truncated_normal_int(rng: &mut ChaCha8Rng, m: &NumericMarginal) -> i64 {
    loop {
        let x = (m.mean + m.sd * std_normal(rng)).round();
        if x >= m.min && x <= m.max {
            return x as i64;
        }
    }
}

fn categorical(rng: &mut ChaCha8Rng, probs: &[f64]) -> usize {
    let u = u01(rng);
    let mut acc = 0.0;
    for (i, p) in probs.iter().enumerate() {
        acc += p;
        if u < acc {
            return i;
        }
    }
    probs.len() - 1
}

/// Inverse-CDF table for an overdispersed count: negative binomial when
/// sd^2 > mean, Poisson otherwise, truncated at `max` with the tail mass
/// folded into the last cell.
fn count_cdf(m: &NumericMarginal) -> Vec<f64> {
    let mean = m.mean;
    let var = m.sd * m.sd;
    let max = m.max as usize;
    let mut pmf = Vec::with_capacity(max + 1);
    if var > mean && mean > 0.0 {
        // negative binomial: p = mean/var, r = mean·p/(1-p)
        let p = mean / var;
        let q = 1.0 - p;
        let r = mean * p / q;
        let mut prob = p.powf(r);
        for k in 0..=max {
            pmf.push(prob);
            prob *= q * (k as f64 + r) / (k as f64 + 1.0);
        }
    } else {
        let lambda = mean;
        let mut prob = (-lambda).exp();
        for k in 0..=max {
            pmf.push(prob);
            prob *= lambda / (k as f64 + 1.0);
        }
    }
    let mut cdf = Vec::with_capacity(pmf.len());
    let mut acc = 0.0;
    for p in &pmf {
        acc += p;
        cdf.push(acc.min(1.0));
    }
    if let Some(last) = cdf.last_mut() {
        *last = 1.0;
    }
    cdf
}

fn sample_count(rng: &mut ChaCha8Rng, cdf: &[f64]) -> u32 {
    let u = u01(rng);
    cdf.iter().position(|c| u < *c).unwrap_or(cdf.len() - 1) as u32
}

fn sample_face(rng: &mut ChaCha8Rng, f: &FaceMarginal) -> f64 {
    let mu = f.median.ln();
    let sigma = (2.0 * (f.mean / f.median).ln()).max(0.0).sqrt();
    if sigma == 0.0 {
        return f.median;
    }
    loop {
        let x = (mu + sigma * std_normal(rng)).exp();
        if x >= f.min && x <= f.max {
            return x;
        }
    }
}

fn sample_date(rng: &mut ChaCha8Rng, w: &DateWindow) -> NaiveDate {
    let span = (w.end - w.start).num_days();
    let mean_days = (w.mean - w.start).num_days() as f64;
    let sd_days = w.sd_years * 365.25;
    loop {
        let d = (mean_days + sd_days * std_normal(rng)).round();
        if d >= 0.0 && d <= span as f64 {
            return w.start + chrono::Duration::days(d as i64);
        }
    }
}

// ---- latent signal ---------------------------------------------------------

/// Resolve one named covariate for the signal. Numeric fields appear as
/// z-scores against the configured (not realized) marginal moments.
fn covariate(policy: &Policy, name: &str, m: &Marginals) -> Result<f64> {
    let v = match name {
        "age_z" => (policy.age as f64 - m.age.mean) / m.age.sd,
        "nonlife_z" => {
            (policy.nonlife_policy_count as f64 - m.nonlife_policy_count.mean)
                / m.nonlife_policy_count.sd
        }
        "face_log_z" => {
            let sigma = (2.0 * (m.face_amount.mean / m.face_amount.median).ln())
                .max(0.0)
                .sqrt();
            if sigma == 0.0 {
                0.0
            } else {
                (policy.face_amount.ln() - m.face_amount.median.ln()) / sigma
            }
        }
        "days_z" => {
            let days = (policy.inception_date - m.inception.start).num_days() as f64;
            let mean_days = (m.inception.mean - m.inception.start).num_days() as f64;
            (days - mean_days) / (m.inception.sd_years * 365.25)
        }
        "gender" => f64::from(policy.gender),
        "occupation_extra_screening" => f64::from(policy.occupation_extra_screening),
        "physical_exam_required" => f64::from(policy.physical_exam_required),
        "single_premium" => f64::from(policy.single_premium),
        "currency_ntd" => f64::from(policy.currency_ntd),
        other => {
            if let Some(level) = other.strip_prefix("participation:") {
                f64::from(policy.participation.as_str() == level)
            } else if let Some(level) = other.strip_prefix("product_type:") {
                f64::from(policy.product_type.as_str() == level)
            } else if let Some(level) = other.strip_prefix("channel:") {
                f64::from(policy.channel.as_str() == level)
            } else if let Some(level) = other.strip_prefix("payment_method:") {
                f64::from(policy.payment_method.as_str() == level)
            } else {
                return Err(Error::config(format!("unknown signal variable '{other}'")));
            }
        }
    };
    Ok(v)
}

fn latent_score(policy: &Policy, config: &GeneratorConfig) -> Result<f64> {
    let mut score = 0.0;
    for term in &config.signal.terms {
        let mut v = 1.0;
        for var in &term.vars {
            v *= covariate(policy, var, &config.marginals)?;
        }
        let v = match term.transform {
            Transform::Identity => v,
            Transform::Square => v * v,
            Transform::Sin => v.sin(),
        };
        score += term.coef * v;
    }
    Ok(score)
}

fn sigmoid(x: f64) -> f64 {
    1.0 / (1.0 + (-x).exp())
}

/// Intercept such that the mean logistic probability over the sampled
/// scores hits the target rate. Monotone, so plain bisection.
fn calibrate_intercept(scores: &[f64], target: f64) -> f64 {
    let mean_prob = |alpha: f64| {
        scores.iter().map(|s| sigmoid(alpha + s)).sum::<f64>() / scores.len() as f64
    };
    let (mut lo, mut hi) = (-60.0f64, 60.0f64);
    for _ in 0..200 {
        let mid = 0.5 * (lo + hi);
        if mean_prob(mid) < target {
            lo = mid;
        } else {
            hi = mid;
        }
        if hi - lo < 1e-13 {
            break;
        }
    }
    0.5 * (lo + hi)
}

// ---- generation ------------------------------------------------------------

/// Draw a synthetic portfolio. Deterministic for a given config.
pub fn generate(config: &GeneratorConfig) -> Result<Vec<Policy>> {
    config.validate()?;
    let m = &config.marginals;
    let participation_probs =
        m.participation.probs_for("participation", &Participation::ALL.map(|v| v.as_str()))?;
    let product_probs =
        m.product_type.probs_for("product_type", &ProductType::ALL.map(|v| v.as_str()))?;
    let channel_probs = m.channel.probs_for("channel", &Channel::ALL.map(|v| v.as_str()))?;
    let payment_probs =
        m.payment_method.probs_for("payment_method", &PaymentMethod::ALL.map(|v| v.as_str()))?;
    let nonlife_cdf = count_cdf(&m.nonlife_policy_count);

    let mut rng = ChaCha8Rng::seed_from_u64(config.seed);
    let mut policies = Vec::with_capacity(config.n_policies);
    let mut scores = Vec::with_capacity(config.n_policies);

    for _ in 0..config.n_policies {
        let policy = Policy {
            age: truncated_normal_int(&mut rng, &m.age) as u32,
            gender: u01(&mut rng) < m.female,
            occupation_extra_screening: u01(&mut rng) < m.occupation_extra_screening,
            physical_exam_required: u01(&mut rng) < m.physical_exam_required,
            nonlife_policy_count: sample_count(&mut rng, &nonlife_cdf),
            inception_date: sample_date(&mut rng, &m.inception),
            face_amount: sample_face(&mut rng, &m.face_amount),
            single_premium: u01(&mut rng) < m.single_premium,
            participation: Participation::ALL[categorical(&mut rng, &participation_probs)],
            product_type: ProductType::ALL[categorical(&mut rng, &product_probs)],
            currency_ntd: u01(&mut rng) < m.currency_ntd,
            channel: Channel::ALL[categorical(&mut rng, &channel_probs)],
            payment_method: PaymentMethod::ALL[categorical(&mut rng, &payment_probs)],
            lapsed: false,
        };
        scores.push(latent_score(&policy, config)?);
        policies.push(policy);
    }

    if config.base_lapse_rate == 0.0 {
        return Ok(policies);
    }
    if config.base_lapse_rate == 1.0 {
        for p in &mut policies {
            p.lapsed = true;
        }
        return Ok(policies);
    }

    let alpha = calibrate_intercept(&scores, config.base_lapse_rate);
    for (policy, score) in policies.iter_mut().zip(&scores) {
        policy.lapsed = u01(&mut rng) < sigmoid(alpha + score);
    }
    Ok(policies)
}
