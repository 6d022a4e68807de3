//! Output records shared by the command line and the verification suites.
//!
//! Exact values are carried as rationals until the last moment. JSON emits
//! each one as `{"num", "den", "float"}`; CSV emits a decimal column plus an
//! `_exact` column holding `num/den`. Decimal renderings are for reading only.

use num_bigint::{BigInt, Sign};
use num_integer::Integer;
use num_traits::{Signed, Zero};
use serde_json::{json, Map, Value};

use crate::arith::{pow_u, Scalar};
use crate::error::{Error, Result};

pub const SCHEMA_VERSION: &str = "kwise-report/1";

const SIG_DIGITS: u32 = 12;

/// Round-half-even decimal with 12 significant digits. Plain notation for
/// magnitudes in `[1e-5, 1e12)`, scientific otherwise.
pub fn decimal(x: &Scalar) -> String {
    if x.is_zero() {
        return "0".into();
    }
    let neg = x.is_negative();
    let num = x.numer().abs();
    let den = x.denom().clone();

    // First guess from digit counts, then correct so 10^e <= num/den < 10^(e+1).
    let mut e = num.to_string().len() as i64 - den.to_string().len() as i64;
    while scaled_cmp(&num, &den, e) == std::cmp::Ordering::Less {
        e -= 1;
    }
    while scaled_cmp(&num, &den, e + 1) != std::cmp::Ordering::Less {
        e += 1;
    }

    let shift = SIG_DIGITS as i64 - 1 - e;
    let (n_scaled, d_scaled) = if shift >= 0 {
        (num * pow_u(10, shift as u64), den)
    } else {
        (num, den * pow_u(10, (-shift) as u64))
    };
    let (mut q, r) = n_scaled.div_rem(&d_scaled);
    let twice: BigInt = r * 2;
    if twice > d_scaled || (twice == d_scaled && q.is_odd()) {
        q += 1;
    }
    if q == pow_u(10, SIG_DIGITS as u64) {
        q /= 10;
        e += 1;
    }

    let digits = q.to_string();
    let body = if (-5..12).contains(&e) {
        let s = if e >= 0 {
            let (int, frac) = digits.split_at(e as usize + 1);
            format!("{int}.{frac}")
        } else {
            format!("0.{}{}", "0".repeat((-e - 1) as usize), digits)
        };
        trim_fraction(&s)
    } else {
        let (lead, rest) = digits.split_at(1);
        let mantissa = trim_fraction(&format!("{lead}.{rest}"));
        format!("{mantissa}e{e}")
    };
    if neg {
        format!("-{body}")
    } else {
        body
    }
}

/// Compare `num/den` against `10^e`.
fn scaled_cmp(num: &BigInt, den: &BigInt, e: i64) -> std::cmp::Ordering {
    if e >= 0 {
        num.cmp(&(den * pow_u(10, e as u64)))
    } else {
        (num * pow_u(10, (-e) as u64)).cmp(den)
    }
}

fn trim_fraction(s: &str) -> String {
    if !s.contains('.') {
        return s.to_string();
    }
    s.trim_end_matches('0').trim_end_matches('.').to_string()
}

/// `num/den`, or just `num` for integers.
pub fn exact(x: &Scalar) -> String {
    x.to_string()
}

/// Parse the `num/den` (or integer) form written by [`exact`].
pub fn parse_exact(s: &str) -> Result<Scalar> {
    let bad = || Error::param(format!("not an exact rational: {s:?}"));
    let parse = |t: &str| t.trim().parse::<BigInt>().map_err(|_| bad());
    match s.split_once('/') {
        Some((n, d)) => {
            let d = parse(d)?;
            if d.sign() == Sign::NoSign {
                return Err(Error::DivisionByZero);
            }
            Ok(Scalar::new(parse(n)?, d))
        }
        None => Ok(Scalar::from_integer(parse(s)?)),
    }
}

pub fn rational_json(x: &Scalar) -> Value {
    json!({
        "num": x.numer().to_string(),
        "den": x.denom().to_string(),
        "float": decimal(x),
    })
}

#[derive(Clone, Debug, PartialEq)]
pub enum Cell {
    Int(i64),
    Bool(bool),
    Float(f64),
    Text(String),
    Rat(Scalar),
    Rats(Vec<Scalar>),
    Ints(Vec<i64>),
    Null,
}

impl Cell {
    fn to_json(&self) -> Value {
        match self {
            Cell::Int(v) => json!(v),
            Cell::Bool(v) => json!(v),
            Cell::Float(v) => json!(v),
            Cell::Text(v) => json!(v),
            Cell::Rat(v) => rational_json(v),
            Cell::Rats(v) => Value::Array(v.iter().map(rational_json).collect()),
            Cell::Ints(v) => json!(v),
            Cell::Null => Value::Null,
        }
    }

    /// `(suffix, text)` pairs for the CSV projection.
    fn to_csv(&self) -> Vec<(&'static str, String)> {
        let join = |v: &[Scalar], f: fn(&Scalar) -> String| {
            v.iter().map(f).collect::<Vec<_>>().join(";")
        };
        match self {
            Cell::Rat(v) => vec![("", decimal(v)), ("_exact", exact(v))],
            Cell::Rats(v) => vec![("", join(v, decimal)), ("_exact", join(v, exact))],
            Cell::Ints(v) => vec![(
                "",
                v.iter().map(i64::to_string).collect::<Vec<_>>().join(";"),
            )],
            Cell::Int(v) => vec![("", v.to_string())],
            Cell::Bool(v) => vec![("", v.to_string())],
            Cell::Float(v) => vec![("", v.to_string())],
            Cell::Text(v) => vec![("", v.clone())],
            Cell::Null => vec![("", String::new())],
        }
    }
}

impl From<i64> for Cell {
    fn from(v: i64) -> Self {
        Cell::Int(v)
    }
}

impl From<usize> for Cell {
    fn from(v: usize) -> Self {
        Cell::Int(v as i64)
    }
}

impl From<bool> for Cell {
    fn from(v: bool) -> Self {
        Cell::Bool(v)
    }
}

impl From<f64> for Cell {
    fn from(v: f64) -> Self {
        Cell::Float(v)
    }
}

impl From<&str> for Cell {
    fn from(v: &str) -> Self {
        Cell::Text(v.to_string())
    }
}

impl From<String> for Cell {
    fn from(v: String) -> Self {
        Cell::Text(v)
    }
}

impl From<Scalar> for Cell {
    fn from(v: Scalar) -> Self {
        Cell::Rat(v)
    }
}

impl From<&Scalar> for Cell {
    fn from(v: &Scalar) -> Self {
        Cell::Rat(v.clone())
    }
}

impl From<Vec<Scalar>> for Cell {
    fn from(v: Vec<Scalar>) -> Self {
        Cell::Rats(v)
    }
}

impl From<&[Scalar]> for Cell {
    fn from(v: &[Scalar]) -> Self {
        Cell::Rats(v.to_vec())
    }
}

impl From<Vec<usize>> for Cell {
    fn from(v: Vec<usize>) -> Self {
        Cell::Ints(v.into_iter().map(|x| x as i64).collect())
    }
}

impl<T: Into<Cell>> From<Option<T>> for Cell {
    fn from(v: Option<T>) -> Self {
        v.map_or(Cell::Null, Into::into)
    }
}

/// Ordered list of named cells.
#[derive(Clone, Debug, Default, PartialEq)]
pub struct Row(pub Vec<(String, Cell)>);

impl Row {
    pub fn new() -> Self {
        Row(Vec::new())
    }

    pub fn with(mut self, key: &str, value: impl Into<Cell>) -> Self {
        self.0.push((key.to_string(), value.into()));
        self
    }

    pub fn get(&self, key: &str) -> Option<&Cell> {
        self.0.iter().find(|(k, _)| k == key).map(|(_, v)| v)
    }

    fn to_json(&self) -> Value {
        let mut map = Map::new();
        for (k, v) in &self.0 {
            map.insert(k.clone(), v.to_json());
        }
        Value::Object(map)
    }
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Verdict {
    pub name: String,
    pub passed: bool,
    pub detail: String,
}

impl Verdict {
    pub fn new(name: &str, passed: bool, detail: impl Into<String>) -> Self {
        Verdict {
            name: name.to_string(),
            passed,
            detail: detail.into(),
        }
    }
}

#[derive(Clone, Debug, Default, PartialEq)]
pub struct Report {
    pub command: String,
    pub params: Row,
    pub rows: Vec<Row>,
    pub verdicts: Vec<Verdict>,
}

impl Report {
    pub fn new(command: &str, params: Row) -> Self {
        Report {
            command: command.to_string(),
            params,
            rows: Vec::new(),
            verdicts: Vec::new(),
        }
    }

    pub fn all_passed(&self) -> bool {
        self.verdicts.iter().all(|v| v.passed)
    }

    pub fn verdict(&self, name: &str) -> Option<&Verdict> {
        self.verdicts.iter().find(|v| v.name == name)
    }

    /// Append another report's rows and verdicts, tagging each row with the
    /// source command.
    pub fn absorb(&mut self, other: Report) {
        for row in other.rows {
            let mut tagged = Row::new().with("suite", other.command.as_str());
            tagged.0.extend(row.0);
            self.rows.push(tagged);
        }
        for v in other.verdicts {
            self.verdicts.push(Verdict {
                name: format!("{}.{}", other.command, v.name),
                ..v
            });
        }
    }

    pub fn to_json(&self) -> String {
        let verdicts: Vec<Value> = self
            .verdicts
            .iter()
            .map(|v| json!({"name": v.name, "passed": v.passed, "detail": v.detail}))
            .collect();
        let doc = json!({
            "command": self.command,
            "params": self.params.to_json(),
            "rows": self.rows.iter().map(Row::to_json).collect::<Vec<_>>(),
            "verdicts": verdicts,
            "version": SCHEMA_VERSION,
        });
        let mut out = serde_json::to_string_pretty(&doc).expect("json values always serialize");
        out.push('\n');
        out
    }

    /// Flat projection of `rows`; the header is the union of all columns in
    /// first-seen order.
    pub fn to_csv(&self) -> Result<String> {
        let flat: Vec<Vec<(String, String)>> = self
            .rows
            .iter()
            .map(|row| {
                row.0
                    .iter()
                    .flat_map(|(k, v)| {
                        v.to_csv()
                            .into_iter()
                            .map(move |(suffix, text)| (format!("{k}{suffix}"), text))
                    })
                    .collect()
            })
            .collect();
        let mut header: Vec<String> = Vec::new();
        for row in &flat {
            for (k, _) in row {
                if !header.contains(k) {
                    header.push(k.clone());
                }
            }
        }
        let mut writer = csv::Writer::from_writer(Vec::new());
        let io = |e: csv::Error| Error::Internal(format!("csv: {e}"));
        writer.write_record(&header).map_err(io)?;
        for row in &flat {
            let record = header.iter().map(|h| {
                row.iter()
                    .find(|(k, _)| k == h)
                    .map(|(_, v)| v.as_str())
                    .unwrap_or("")
            });
            writer.write_record(record).map_err(io)?;
        }
        let bytes = writer
            .into_inner()
            .map_err(|e| Error::Internal(format!("csv: {e}")))?;
        String::from_utf8(bytes).map_err(|e| Error::Internal(e.to_string()))
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::arith::{frac, int};

    #[test]
    fn decimal_rendering() {
        assert_eq!(decimal(&frac(2, 3)), "0.666666666667");
        assert_eq!(decimal(&frac(-1, 3)), "-0.333333333333");
        assert_eq!(decimal(&int(0)), "0");
        assert_eq!(decimal(&int(42)), "42");
        assert_eq!(decimal(&frac(27, 64)), "0.421875");
        assert_eq!(decimal(&frac(1, 16)), "0.0625");
        assert_eq!(decimal(&frac(1, 1_000_000_000)), "1e-9");
        assert_eq!(decimal(&Scalar::from_integer(pow_u(10, 15))), "1e15");
        assert_eq!(decimal(&frac(999_999_999_999_9, 10)), "1e12");
    }

    #[test]
    fn round_half_even() {
        // 13 significant digits ending in 5: ties go to the even neighbour.
        assert_eq!(decimal(&frac(1_000_000_000_005, 10)), "100000000000");
        assert_eq!(decimal(&frac(1_000_000_000_015, 10)), "100000000002");
        assert_eq!(decimal(&frac(1_000_000_000_025, 1_000_000_000_000)), "1.00000000002");
    }

    #[test]
    fn exact_round_trip() {
        for x in [frac(2, 3), frac(-7, 5), int(9), int(0)] {
            assert_eq!(parse_exact(&exact(&x)).unwrap(), x);
        }
        assert!(parse_exact("1/0").is_err());
        assert!(parse_exact("x").is_err());
    }

    #[test]
    fn json_and_csv_shapes() {
        let mut r = Report::new("demo", Row::new().with("n", 4usize));
        r.rows.push(Row::new().with("d", 0usize).with("v", frac(1, 3)));
        r.rows.push(Row::new().with("d", 1usize).with("extra", true));
        r.verdicts.push(Verdict::new("ok", true, ""));
        let doc: Value = serde_json::from_str(&r.to_json()).unwrap();
        assert_eq!(doc["version"], SCHEMA_VERSION);
        assert_eq!(doc["rows"][0]["v"]["num"], "1");
        assert_eq!(doc["rows"][0]["v"]["den"], "3");
        let csv = r.to_csv().unwrap();
        assert_eq!(
            csv,
            "d,v,v_exact,extra\n0,0.333333333333,1/3,\n1,,,true\n"
        );
    }
}
