//! Policy data model, feature encoding, dataset I/O and the synthetic
//! portfolio generator.

use chrono::NaiveDate;
use ndarray::Array2;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

mod encode;
mod generator;
mod io;

pub use encode::{encode, EncodingMap, FieldEncoding};
pub use generator::{
    generate, CategoricalTargets, DateWindow, FaceMarginal, GeneratorConfig, Marginals,
    NumericMarginal, SignalSpec, SignalTerm, Transform,
};
pub use io::{read_csv, write_csv};

/// Participation status of a policy. Contracts issued before 2004 were
/// mandatorily participating.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Participation {
    NonParticipating,
    Participating,
    MandatoryParticipating,
}

impl Participation {
    pub const ALL: [Participation; 3] = [
        Participation::NonParticipating,
        Participation::Participating,
        Participation::MandatoryParticipating,
    ];

    pub fn as_str(self) -> &'static str {
        match self {
            Participation::NonParticipating => "non_participating",
            Participation::Participating => "participating",
            Participation::MandatoryParticipating => "mandatory_participating",
        }
    }

    pub fn parse(s: &str) -> Option<Self> {
        Self::ALL.into_iter().find(|v| v.as_str() == s)
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum ProductType {
    Traditional,
    InterestAdjustable,
    InvestmentLinked,
}

impl ProductType {
    pub const ALL: [ProductType; 3] = [
        ProductType::Traditional,
        ProductType::InterestAdjustable,
        ProductType::InvestmentLinked,
    ];

    pub fn as_str(self) -> &'static str {
        match self {
            ProductType::Traditional => "traditional",
            ProductType::InterestAdjustable => "interest_adjustable",
            ProductType::InvestmentLinked => "investment_linked",
        }
    }

    pub fn parse(s: &str) -> Option<Self> {
        Self::ALL.into_iter().find(|v| v.as_str() == s)
    }
}

/// Distribution channel: tied agents, banks, direct marketing, or the
/// independent agent / broker remainder.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Channel {
    Ta,
    Bk,
    Dm,
    Other,
}

impl Channel {
    pub const ALL: [Channel; 4] = [Channel::Ta, Channel::Bk, Channel::Dm, Channel::Other];

    pub fn as_str(self) -> &'static str {
        match self {
            Channel::Ta => "ta",
            Channel::Bk => "bk",
            Channel::Dm => "dm",
            Channel::Other => "other",
        }
    }

    pub fn parse(s: &str) -> Option<Self> {
        Self::ALL.into_iter().find(|v| v.as_str() == s)
    }
}

/// How premiums are collected.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum PaymentMethod {
    Insurer,
    BankOrCard,
    PostOrConvenience,
}

impl PaymentMethod {
    pub const ALL: [PaymentMethod; 3] = [
        PaymentMethod::Insurer,
        PaymentMethod::BankOrCard,
        PaymentMethod::PostOrConvenience,
    ];

    pub fn as_str(self) -> &'static str {
        match self {
            PaymentMethod::Insurer => "insurer",
            PaymentMethod::BankOrCard => "bank_or_card",
            PaymentMethod::PostOrConvenience => "post_or_convenience",
        }
    }

    pub fn parse(s: &str) -> Option<Self> {
        Self::ALL.into_iter().find(|v| v.as_str() == s)
    }
}

/// One life-insurance contract with its lapse label.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct Policy {
    /// Insured's age at inception, in whole years.
    pub age: u32,
    /// true = female.
    pub gender: bool,
    /// Occupation class requiring extra underwriting screening.
    pub occupation_extra_screening: bool,
    pub physical_exam_required: bool,
    /// Non-life policies (health, long-term care) listing this insured.
    pub nonlife_policy_count: u32,
    pub inception_date: NaiveDate,
    /// Death benefit in USD; the cash-flow base.
    pub face_amount: f64,
    pub single_premium: bool,
    pub participation: Participation,
    pub product_type: ProductType,
    /// Denominated in NTD rather than a foreign currency.
    pub currency_ntd: bool,
    pub channel: Channel,
    pub payment_method: PaymentMethod,
    /// Label: the policy lapsed during the tracking period.
    pub lapsed: bool,
}

impl Policy {
    pub fn validate(&self) -> Result<()> {
        if self.age > 120 {
            return Err(Error::config(format!("age {} out of range [0, 120]", self.age)));
        }
        if !(self.face_amount > 0.0) {
            return Err(Error::config(format!(
                "face_amount {} must be positive",
                self.face_amount
            )));
        }
        Ok(())
    }
}

/// Labels attached to an encoded dataset: lapse indicators for
/// classification, or real-valued profit targets for the gain regression.
#[derive(Debug, Clone, PartialEq)]
pub enum Labels {
    Binary(Vec<u8>),
    Gain(Vec<f64>),
}

impl Labels {
    pub fn len(&self) -> usize {
        match self {
            Labels::Binary(v) => v.len(),
            Labels::Gain(v) => v.len(),
        }
    }

    pub fn is_empty(&self) -> bool {
        self.len() == 0
    }
}

/// Encoded numeric feature matrix with labels, face amounts, and the
/// encoding map that produced it.
#[derive(Debug, Clone)]
pub struct Dataset {
    pub features: Array2<f64>,
    pub labels: Labels,
    pub face_amounts: Vec<f64>,
    pub encoding_map: EncodingMap,
}

impl Dataset {
    pub fn n_rows(&self) -> usize {
        self.features.nrows()
    }

    pub fn n_features(&self) -> usize {
        self.features.ncols()
    }

    pub fn binary_labels(&self) -> Result<&[u8]> {
        match &self.labels {
            Labels::Binary(v) => Ok(v),
            Labels::Gain(_) => Err(Error::config(
                "dataset carries gain targets, expected binary labels",
            )),
        }
    }

    pub fn gain_labels(&self) -> Result<&[f64]> {
        match &self.labels {
            Labels::Gain(v) => Ok(v),
            Labels::Binary(_) => Err(Error::config(
                "dataset carries binary labels, expected gain targets",
            )),
        }
    }
}
