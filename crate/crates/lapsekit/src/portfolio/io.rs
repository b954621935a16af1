//! Portfolio CSV files: one row per policy, columns in `Policy` field
//! order, dates ISO-8601, booleans as 0/1. Floats are written in shortest
//! round-trip form so write-then-read is an identity.

use std::path::Path;

use chrono::NaiveDate;

use super::{Channel, Participation, PaymentMethod, Policy, ProductType};
use crate::error::{Error, Result};

pub(crate) const HEADER: [&str; 14] = [
    "age",
    "gender",
    "occupation_extra_screening",
    "physical_exam_required",
    "nonlife_policy_count",
    "inception_date",
    "face_amount",
    "single_premium",
    "participation",
    "product_type",
    "currency_ntd",
    "channel",
    "payment_method",
    "lapsed",
];

fn bool_str(v: bool) -> &'static str {
    if v {
        "1"
    } else {
        "0"
    }
}

/// Write policies to `path`, creating parent directories as needed.
pub fn write_csv(policies: &[Policy], path: impl AsRef<Path>) -> Result<()> {
    let path = path.as_ref();
    if let Some(parent) = path.parent() {
        if !parent.as_os_str().is_empty() {
            std::fs::create_dir_all(parent)?;
        }
    }
    let mut writer = csv::Writer::from_path(path).map_err(csv_io)?;
    writer.write_record(HEADER).map_err(csv_io)?;
    for p in policies {
        writer
            .write_record([
                p.age.to_string(),
                bool_str(p.gender).to_string(),
                bool_str(p.occupation_extra_screening).to_string(),
                bool_str(p.physical_exam_required).to_string(),
                p.nonlife_policy_count.to_string(),
                p.inception_date.format("%Y-%m-%d").to_string(),
                p.face_amount.to_string(),
                bool_str(p.single_premium).to_string(),
                p.participation.as_str().to_string(),
                p.product_type.as_str().to_string(),
                bool_str(p.currency_ntd).to_string(),
                p.channel.as_str().to_string(),
                p.payment_method.as_str().to_string(),
                bool_str(p.lapsed).to_string(),
            ])
            .map_err(csv_io)?;
    }
    writer.flush()?;
    Ok(())
}

fn csv_io(e: csv::Error) -> Error {
    match e.into_kind() {
        csv::ErrorKind::Io(io) => Error::Io(io),
        other => Error::config(format!("csv: {other:?}")),
    }
}

struct RowParser<'a> {
    record: &'a csv::StringRecord,
    row: usize,
}

impl<'a> RowParser<'a> {
    fn field(&self, idx: usize) -> Result<&'a str> {
        self.record.get(idx).ok_or_else(|| Error::Csv {
            row: self.row,
            column: HEADER[idx].to_string(),
            message: "missing field".to_string(),
        })
    }

    fn err(&self, idx: usize, message: impl Into<String>) -> Error {
        Error::Csv {
            row: self.row,
            column: HEADER[idx].to_string(),
            message: message.into(),
        }
    }

    fn parse_u32(&self, idx: usize) -> Result<u32> {
        let s = self.field(idx)?;
        s.parse()
            .map_err(|_| self.err(idx, format!("expected non-negative integer, got '{s}'")))
    }

    fn parse_bool(&self, idx: usize) -> Result<bool> {
        match self.field(idx)? {
            "0" => Ok(false),
            "1" => Ok(true),
            s => Err(self.err(idx, format!("expected 0 or 1, got '{s}'"))),
        }
    }

    fn parse_f64(&self, idx: usize) -> Result<f64> {
        let s = self.field(idx)?;
        s.parse()
            .map_err(|_| self.err(idx, format!("expected number, got '{s}'")))
    }

    fn parse_date(&self, idx: usize) -> Result<NaiveDate> {
        let s = self.field(idx)?;
        NaiveDate::parse_from_str(s, "%Y-%m-%d")
            .map_err(|_| self.err(idx, format!("expected ISO-8601 date, got '{s}'")))
    }

    fn parse_enum<T: Copy>(&self, idx: usize, parse: fn(&str) -> Option<T>) -> Result<T> {
        let s = self.field(idx)?;
        parse(s).ok_or_else(|| self.err(idx, format!("unknown level '{s}'")))
    }
}

/// Read policies from `path`. Errors name the offending file row (1-based,
/// header = row 1) and column.
pub fn read_csv(path: impl AsRef<Path>) -> Result<Vec<Policy>> {
    let mut reader = csv::ReaderBuilder::new()
        .has_headers(true)
        .from_path(path.as_ref())
        .map_err(csv_io)?;

    {
        let headers = reader.headers().map_err(csv_io)?;
        let got: Vec<&str> = headers.iter().collect();
        if got != HEADER {
            return Err(Error::config(format!(
                "unexpected CSV header {got:?}, expected {HEADER:?}"
            )));
        }
    }

    let mut policies = Vec::new();
    for (i, record) in reader.records().enumerate() {
        let row = i + 2; // header occupies row 1
        let record = record.map_err(|e| Error::Csv {
            row,
            column: String::new(),
            message: e.to_string(),
        })?;
        let p = RowParser { record: &record, row };
        let policy = Policy {
            age: p.parse_u32(0)?,
            gender: p.parse_bool(1)?,
            occupation_extra_screening: p.parse_bool(2)?,
            physical_exam_required: p.parse_bool(3)?,
            nonlife_policy_count: p.parse_u32(4)?,
            inception_date: p.parse_date(5)?,
            face_amount: p.parse_f64(6)?,
            single_premium: p.parse_bool(7)?,
            participation: p.parse_enum(8, Participation::parse)?,
            product_type: p.parse_enum(9, ProductType::parse)?,
            currency_ntd: p.parse_bool(10)?,
            channel: p.parse_enum(11, Channel::parse)?,
            payment_method: p.parse_enum(12, PaymentMethod::parse)?,
            lapsed: p.parse_bool(13)?,
        };
        policy
            .validate()
            .map_err(|e| Error::Csv {
                row,
                column: String::new(),
                message: e.to_string(),
            })?;
        policies.push(policy);
    }
    Ok(policies)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::portfolio::{generate, GeneratorConfig};
    use std::io::Write;

    #[test]
    fn write_then_read_round_trips() {
        let cfg = GeneratorConfig::table1_defaults(1_000, 11);
        let policies = generate(&cfg).unwrap();
        let dir = tempfile::tempdir().unwrap();
        let path = dir.path().join("portfolio.csv");
        write_csv(&policies, &path).unwrap();
        let back = read_csv(&path).unwrap();
        assert_eq!(policies, back);
    }

    #[test]
    fn malformed_age_names_row_and_column() {
        let dir = tempfile::tempdir().unwrap();
        let path = dir.path().join("bad.csv");
        let mut f = std::fs::File::create(&path).unwrap();
        writeln!(f, "{}", HEADER.join(",")).unwrap();
        writeln!(
            f,
            "30,1,0,0,2,2005-06-01,10000,0,non_participating,traditional,1,ta,insurer,0"
        )
        .unwrap();
        writeln!(
            f,
            "abc,1,0,0,2,2005-06-01,10000,0,non_participating,traditional,1,ta,insurer,0"
        )
        .unwrap();
        drop(f);
        match read_csv(&path) {
            Err(Error::Csv { row, column, .. }) => {
                assert_eq!(row, 3);
                assert_eq!(column, "age");
            }
            other => panic!("expected csv error, got {other:?}"),
        }
    }

    #[test]
    fn header_only_file_is_empty_portfolio() {
        let dir = tempfile::tempdir().unwrap();
        let path = dir.path().join("empty.csv");
        std::fs::write(&path, format!("{}\n", HEADER.join(","))).unwrap();
        assert_eq!(read_csv(&path).unwrap(), vec![]);
    }

    #[test]
    fn wrong_header_rejected() {
        let dir = tempfile::tempdir().unwrap();
        let path = dir.path().join("hdr.csv");
        std::fs::write(&path, "a,b,c\n").unwrap();
        assert!(read_csv(&path).is_err());
    }
}
