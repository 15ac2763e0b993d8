//! Report records and their JSON/CSV serialization.
//!
//! Every real number is printed with 17 significant digits so that parsing
//! the output recovers the exact `f64`.

use serde::ser::{Serialize, Serializer};
use serde_json::value::RawValue;

/// A real that serializes as a 17-digit JSON number, or `null`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Num(pub Option<f64>);

impl Num {
    pub fn some(x: f64) -> Self {
        Num(Some(x))
    }

    pub const NONE: Num = Num(None);

    /// CSV cell text; empty when absent.
    pub fn cell(&self) -> String {
        self.0.filter(|x| x.is_finite()).map(format_real).unwrap_or_default()
    }
}

pub fn format_real(x: f64) -> String {
    format!("{x:.16e}")
}

impl Serialize for Num {
    fn serialize<S: Serializer>(&self, s: S) -> Result<S::Ok, S::Error> {
        match self.0 {
            Some(x) if x.is_finite() => {
                let raw = RawValue::from_string(format_real(x)).map_err(serde::ser::Error::custom)?;
                raw.serialize(s)
            }
            _ => s.serialize_none(),
        }
    }
}

fn join(values: &[Num]) -> String {
    values.iter().map(Num::cell).collect::<Vec<_>>().join(";")
}

#[derive(Debug, Clone, serde::Serialize)]
pub struct EstimateReport {
    pub command: &'static str,
    pub d: usize,
    pub n: usize,
    pub betas: Vec<Num>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub a: Option<Num>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub b: Option<Num>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub k: Option<Num>,
    pub closed_form: Num,
    pub quadrature_error: Num,
    pub term_count: usize,
    pub extrapolated: bool,
    pub mc_mean: Num,
    pub mc_se: Num,
    pub z_score: Num,
    pub samples: usize,
    pub resampled: u64,
    pub seed: u64,
    pub wall_time: Num,
}

impl EstimateReport {
    fn columns(&self) -> Vec<(&'static str, String)> {
        let mut cols = vec![
            ("command", self.command.to_string()),
            ("d", self.d.to_string()),
            ("n", self.n.to_string()),
            ("betas", join(&self.betas)),
        ];
        for (name, v) in [("a", self.a), ("b", self.b), ("k", self.k)] {
            if let Some(v) = v {
                cols.push((name, v.cell()));
            }
        }
        cols.extend([
            ("closed_form", self.closed_form.cell()),
            ("quadrature_error", self.quadrature_error.cell()),
            ("term_count", self.term_count.to_string()),
            ("extrapolated", self.extrapolated.to_string()),
            ("mc_mean", self.mc_mean.cell()),
            ("mc_se", self.mc_se.cell()),
            ("z_score", self.z_score.cell()),
            ("samples", self.samples.to_string()),
            ("resampled", self.resampled.to_string()),
            ("seed", self.seed.to_string()),
            ("wall_time", self.wall_time.cell()),
        ]);
        cols
    }
}

/// One row of a parameter sweep.
#[derive(Debug, Clone, serde::Serialize)]
pub struct SweepRow {
    pub parameter: String,
    pub value: Num,
    pub closed_form: Num,
    pub quadrature_error: Num,
    pub term_count: usize,
    pub mc_mean: Num,
    pub mc_se: Num,
    pub z_score: Num,
}

impl SweepRow {
    pub const HEADER: [&'static str; 8] = [
        "parameter",
        "value",
        "closed_form",
        "quadrature_error",
        "term_count",
        "mc_mean",
        "mc_se",
        "z_score",
    ];

    fn cells(&self) -> [String; 8] {
        [
            self.parameter.clone(),
            self.value.cell(),
            self.closed_form.cell(),
            self.quadrature_error.cell(),
            self.term_count.to_string(),
            self.mc_mean.cell(),
            self.mc_se.cell(),
            self.z_score.cell(),
        ]
    }
}

pub fn report_json(r: &EstimateReport) -> String {
    serde_json::to_string_pretty(r).expect("report serializes")
}

pub fn report_csv(r: &EstimateReport) -> Result<String, csv::Error> {
    let cols = r.columns();
    let mut w = csv::Writer::from_writer(Vec::new());
    w.write_record(cols.iter().map(|c| c.0))?;
    w.write_record(cols.iter().map(|c| c.1.as_str()))?;
    Ok(String::from_utf8(w.into_inner().map_err(|e| e.into_error())?).expect("utf-8"))
}

pub fn sweep_csv(rows: &[SweepRow]) -> Result<String, csv::Error> {
    let mut w = csv::Writer::from_writer(Vec::new());
    w.write_record(SweepRow::HEADER)?;
    for r in rows {
        w.write_record(r.cells())?;
    }
    Ok(String::from_utf8(w.into_inner().map_err(|e| e.into_error())?).expect("utf-8"))
}

pub fn sweep_json(rows: &[SweepRow]) -> String {
    serde_json::to_string_pretty(rows).expect("rows serialize")
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn reals_round_trip() {
        for x in [2.0 / 3.0, 1e-300, -123456.789, 0.1 + 0.2, f64::MIN_POSITIVE] {
            let text = serde_json::to_string(&Num::some(x)).unwrap();
            let back: f64 = serde_json::from_str(&text).unwrap();
            assert_eq!(back.to_bits(), x.to_bits(), "{text}");
        }
        assert_eq!(serde_json::to_string(&Num::NONE).unwrap(), "null");
        assert_eq!(serde_json::to_string(&Num::some(f64::NAN)).unwrap(), "null");
        assert_eq!(format_real(2.0 / 3.0), "6.6666666666666663e-1");
    }
}
