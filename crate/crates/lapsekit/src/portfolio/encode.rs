//! Feature encoding: numeric standardization plus one-hot encoding with a
//! dropped reference level.

use chrono::NaiveDate;
use ndarray::Array2;
use serde::{Deserialize, Serialize};

use super::{Channel, Dataset, Labels, Participation, PaymentMethod, Policy, ProductType};
use crate::error::{Error, Result};

/// How one source field maps into feature-matrix columns.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "snake_case")]
pub enum FieldEncoding {
    /// Standardized numeric column: `(x - mean) / sd`. A constant input
    /// column is flagged and encoded as all zeros.
    Numeric {
        field: String,
        column: usize,
        mean: f64,
        sd: f64,
        zero_variance: bool,
    },
    /// 0/1 indicator taken as-is.
    Binary { field: String, column: usize },
    /// One-hot block with the reference level dropped; `levels[i]` maps to
    /// `columns[i]`.
    Categorical {
        field: String,
        reference: String,
        levels: Vec<String>,
        columns: Vec<usize>,
    },
}

impl FieldEncoding {
    pub fn field(&self) -> &str {
        match self {
            FieldEncoding::Numeric { field, .. } => field,
            FieldEncoding::Binary { field, .. } => field,
            FieldEncoding::Categorical { field, .. } => field,
        }
    }
}

/// Reusable encoding recipe: standardization constants, one-hot layout,
/// and the origin used for the inception-days covariate. Applying the same
/// map to held-out data reproduces the training-time encoding.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct EncodingMap {
    /// Origin for "days since window start".
    pub window_start: NaiveDate,
    pub fields: Vec<FieldEncoding>,
    pub n_columns: usize,
}

/// Raw (pre-standardization) numeric view of one policy, in column order.
fn numeric_raw(policy: &Policy, window_start: NaiveDate) -> [f64; 4] {
    [
        policy.age as f64,
        policy.nonlife_policy_count as f64,
        (policy.inception_date - window_start).num_days() as f64,
        policy.face_amount,
    ]
}

const NUMERIC_FIELDS: [&str; 4] = ["age", "nonlife_policy_count", "inception_date", "face_amount"];

impl EncodingMap {
    /// Compute standardization statistics and the column layout from a
    /// training sample.
    pub fn build(policies: &[Policy]) -> Result<EncodingMap> {
        if policies.is_empty() {
            return Err(Error::EmptyInput("encode requires at least one policy"));
        }
        let window_start = policies
            .iter()
            .map(|p| p.inception_date)
            .min()
            .expect("non-empty");

        let n = policies.len() as f64;
        let mut fields = Vec::new();
        let mut col = 0usize;

        // means and population standard deviations per numeric field
        let mut sums = [0.0f64; 4];
        let mut sq_sums = [0.0f64; 4];
        for p in policies {
            for (i, v) in numeric_raw(p, window_start).into_iter().enumerate() {
                sums[i] += v;
                sq_sums[i] += v * v;
            }
        }

        let numeric_stat = |i: usize| {
            let mean = sums[i] / n;
            let var = (sq_sums[i] / n - mean * mean).max(0.0);
            (mean, var.sqrt())
        };

        let push_numeric = |fields: &mut Vec<FieldEncoding>, col: &mut usize, i: usize| {
            let (mean, sd) = numeric_stat(i);
            fields.push(FieldEncoding::Numeric {
                field: NUMERIC_FIELDS[i].to_string(),
                column: *col,
                mean,
                sd,
                zero_variance: sd == 0.0,
            });
            *col += 1;
        };
        let push_binary = |fields: &mut Vec<FieldEncoding>, col: &mut usize, name: &str| {
            fields.push(FieldEncoding::Binary {
                field: name.to_string(),
                column: *col,
            });
            *col += 1;
        };
        let push_categorical =
            |fields: &mut Vec<FieldEncoding>, col: &mut usize, name: &str, levels: &[&str]| {
                // levels[0] is the reference and gets no column
                let kept: Vec<String> = levels[1..].iter().map(|s| s.to_string()).collect();
                let columns: Vec<usize> = (0..kept.len()).map(|i| *col + i).collect();
                *col += kept.len();
                fields.push(FieldEncoding::Categorical {
                    field: name.to_string(),
                    reference: levels[0].to_string(),
                    levels: kept,
                    columns,
                });
            };

        // Policy field order
        push_numeric(&mut fields, &mut col, 0); // age
        push_binary(&mut fields, &mut col, "gender");
        push_binary(&mut fields, &mut col, "occupation_extra_screening");
        push_binary(&mut fields, &mut col, "physical_exam_required");
        push_numeric(&mut fields, &mut col, 1); // nonlife_policy_count
        push_numeric(&mut fields, &mut col, 2); // inception_date (days)
        push_numeric(&mut fields, &mut col, 3); // face_amount
        push_binary(&mut fields, &mut col, "single_premium");
        push_categorical(
            &mut fields,
            &mut col,
            "participation",
            &Participation::ALL.map(|v| v.as_str()),
        );
        push_categorical(
            &mut fields,
            &mut col,
            "product_type",
            &ProductType::ALL.map(|v| v.as_str()),
        );
        push_binary(&mut fields, &mut col, "currency_ntd");
        push_categorical(&mut fields, &mut col, "channel", &Channel::ALL.map(|v| v.as_str()));
        push_categorical(
            &mut fields,
            &mut col,
            "payment_method",
            &PaymentMethod::ALL.map(|v| v.as_str()),
        );

        Ok(EncodingMap {
            window_start,
            fields,
            n_columns: col,
        })
    }

    /// Encode policies into a feature matrix using this map's constants.
    pub fn apply(&self, policies: &[Policy]) -> Result<Array2<f64>> {
        if policies.is_empty() {
            return Err(Error::EmptyInput("encode requires at least one policy"));
        }
        let mut out = Array2::zeros((policies.len(), self.n_columns));
        for (row, policy) in policies.iter().enumerate() {
            let raw = numeric_raw(policy, self.window_start);
            for enc in &self.fields {
                match enc {
                    FieldEncoding::Numeric {
                        field,
                        column,
                        mean,
                        sd,
                        zero_variance,
                    } => {
                        let i = NUMERIC_FIELDS
                            .iter()
                            .position(|f| f == field)
                            .expect("numeric field name fixed at build time");
                        out[[row, *column]] = if *zero_variance {
                            0.0
                        } else {
                            (raw[i] - mean) / sd
                        };
                    }
                    FieldEncoding::Binary { field, column } => {
                        let v = match field.as_str() {
                            "gender" => policy.gender,
                            "occupation_extra_screening" => policy.occupation_extra_screening,
                            "physical_exam_required" => policy.physical_exam_required,
                            "single_premium" => policy.single_premium,
                            "currency_ntd" => policy.currency_ntd,
                            other => {
                                return Err(Error::config(format!(
                                    "unknown binary field '{other}' in encoding map"
                                )))
                            }
                        };
                        out[[row, *column]] = f64::from(v);
                    }
                    FieldEncoding::Categorical {
                        field,
                        levels,
                        columns,
                        ..
                    } => {
                        let level = match field.as_str() {
                            "participation" => policy.participation.as_str(),
                            "product_type" => policy.product_type.as_str(),
                            "channel" => policy.channel.as_str(),
                            "payment_method" => policy.payment_method.as_str(),
                            other => {
                                return Err(Error::config(format!(
                                    "unknown categorical field '{other}' in encoding map"
                                )))
                            }
                        };
                        if let Some(i) = levels.iter().position(|l| l == level) {
                            out[[row, columns[i]]] = 1.0;
                        }
                    }
                }
            }
        }
        Ok(out)
    }
}

/// Encode a policy sample into a [`Dataset`]: standardized numerics,
/// one-hot categoricals with the reference level dropped, lapse labels and
/// face amounts pulled out alongside.
pub fn encode(policies: &[Policy]) -> Result<Dataset> {
    let map = EncodingMap::build(policies)?;
    let features = map.apply(policies)?;
    let labels = policies.iter().map(|p| u8::from(p.lapsed)).collect();
    let face_amounts = policies.iter().map(|p| p.face_amount).collect();
    Ok(Dataset {
        features,
        labels: Labels::Binary(labels),
        face_amounts,
        encoding_map: map,
    })
}
