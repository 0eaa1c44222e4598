//! Schedule files.
//!
//! A schedule file is JSON of the form
//! `{"kind": .., "params": {..}, "values": ["0x1.6a09e667f3bcdp+0", ..], "join_positions": [..]}`.
//! Values are binary64 hex-float strings, so a write/read cycle is bit-exact.

use std::fs::File;
use std::io::{BufReader, BufWriter, Write};
use std::path::Path;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::schedule::{FiniteSchedule, ScheduleKind};
use crate::Scalar;

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct ScheduleFile {
    pub kind: String,
    pub params: serde_json::Value,
    pub values: Vec<String>,
    pub join_positions: Vec<usize>,
}

impl ScheduleFile {
    pub fn from_schedule<T: Scalar>(s: &FiniteSchedule<T>) -> Result<Self> {
        let mut params = serde_json::to_value(s.kind())?;
        if let Some(obj) = params.as_object_mut() {
            obj.remove("kind");
        }
        Ok(Self {
            kind: s.kind().name().to_string(),
            params,
            values: s.values().iter().map(|v| format_hexf64(v.as_f64())).collect::<Result<_>>()?,
            join_positions: s.join_positions().to_vec(),
        })
    }

    pub fn into_schedule<T: Scalar>(self) -> Result<FiniteSchedule<T>> {
        let mut tagged = match self.params {
            serde_json::Value::Object(map) => map,
            serde_json::Value::Null => serde_json::Map::new(),
            other => return Err(Error::Format(format!("params must be an object, got {other}"))),
        };
        tagged.insert("kind".into(), serde_json::Value::String(self.kind));
        let kind: ScheduleKind = serde_json::from_value(serde_json::Value::Object(tagged))?;
        let values = self
            .values
            .iter()
            .map(|s| parse_hexf64(s).map(T::lit))
            .collect::<Result<Vec<T>>>()?;
        FiniteSchedule::new(values, kind, self.join_positions)
    }
}

pub fn write_schedule_file<T: Scalar>(s: &FiniteSchedule<T>, path: &Path) -> Result<()> {
    let mut w = BufWriter::new(File::create(path)?);
    serde_json::to_writer_pretty(&mut w, &ScheduleFile::from_schedule(s)?)?;
    writeln!(w)?;
    w.flush()?;
    Ok(())
}

pub fn read_schedule_file(path: &Path) -> Result<ScheduleFile> {
    Ok(serde_json::from_reader(BufReader::new(File::open(path)?))?)
}

pub fn read_schedule<T: Scalar>(path: &Path) -> Result<FiniteSchedule<T>> {
    read_schedule_file(path)?.into_schedule()
}

/// Formats a finite binary64 as a C99 hex-float (`0x1.8p+1` for 3).
pub fn format_hexf64(v: f64) -> Result<String> {
    if !v.is_finite() {
        return Err(Error::Format(format!("cannot encode non-finite value {v}")));
    }
    let bits = v.to_bits();
    let sign = if bits >> 63 == 1 { "-" } else { "" };
    let exp_bits = ((bits >> 52) & 0x7ff) as i64;
    let mantissa = bits & ((1u64 << 52) - 1);
    let (lead, exp) = match (exp_bits, mantissa) {
        (0, 0) => return Ok(format!("{sign}0x0p+0")),
        (0, _) => (0, -1022),
        _ => (1, exp_bits - 1023),
    };
    let digits = format!("{mantissa:013x}");
    let digits = digits.trim_end_matches('0');
    let frac = if digits.is_empty() { String::new() } else { format!(".{digits}") };
    Ok(format!("{sign}0x{lead}{frac}p{exp:+}"))
}

pub fn parse_hexf64(s: &str) -> Result<f64> {
    hexf_parse::parse_hexf64(s.trim(), false).map_err(|e| Error::Format(format!("bad hex-float {s:?}: {e}")))
}
