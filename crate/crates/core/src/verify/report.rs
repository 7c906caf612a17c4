use std::collections::BTreeMap;
use std::fmt;
use std::io::{Read, Write};
use std::str::FromStr;

use num_bigint::BigInt;
use serde::{Deserialize, Serialize};

use crate::bigfloat::BigFloat;
use crate::error::{Error, Result};

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub enum Statement {
    #[serde(rename = "thm_1_1")]
    Theorem11,
    #[serde(rename = "thm_1_2")]
    Theorem12,
    #[serde(rename = "lemma_2_1")]
    Lemma21,
    #[serde(rename = "lemma_2_2")]
    Lemma22,
    #[serde(rename = "wxz_upper")]
    WxzUpper,
    #[serde(rename = "wxz_positivity")]
    WxzPositivity,
    #[serde(rename = "corollary_ratio")]
    CorollaryRatio,
}

impl Statement {
    pub const ALL: [Statement; 7] = [
        Statement::Theorem11,
        Statement::Theorem12,
        Statement::Lemma21,
        Statement::Lemma22,
        Statement::WxzUpper,
        Statement::WxzPositivity,
        Statement::CorollaryRatio,
    ];

    pub fn id(self) -> &'static str {
        match self {
            Statement::Theorem11 => "thm_1_1",
            Statement::Theorem12 => "thm_1_2",
            Statement::Lemma21 => "lemma_2_1",
            Statement::Lemma22 => "lemma_2_2",
            Statement::WxzUpper => "wxz_upper",
            Statement::WxzPositivity => "wxz_positivity",
            Statement::CorollaryRatio => "corollary_ratio",
        }
    }
}

impl fmt::Display for Statement {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.id())
    }
}

/// Accepts the ids above and loose spellings such as `thm1.1` or `wxz`.
impl FromStr for Statement {
    type Err = Error;
    fn from_str(s: &str) -> Result<Self> {
        let key: String = s
            .chars()
            .filter(|c| !matches!(c, '_' | '.' | '-'))
            .collect::<String>()
            .to_ascii_lowercase();
        Ok(match key.as_str() {
            "thm11" | "theorem11" => Statement::Theorem11,
            "thm12" | "theorem12" => Statement::Theorem12,
            "lemma21" => Statement::Lemma21,
            "lemma22" => Statement::Lemma22,
            "wxz" | "wxzupper" => Statement::WxzUpper,
            "wxzpositivity" | "positivity" => Statement::WxzPositivity,
            "corollary" | "corollaryratio" => Statement::CorollaryRatio,
            _ => return Err(Error::Parse(format!("unknown statement {s:?}"))),
        })
    }
}

mod opt_bigint {
    use num_bigint::BigInt;
    use serde::{Deserialize, Deserializer, Serializer};

    pub fn serialize<S: Serializer>(v: &Option<BigInt>, s: S) -> Result<S::Ok, S::Error> {
        match v {
            Some(v) => s.serialize_some(&v.to_string()),
            None => s.serialize_none(),
        }
    }

    pub fn deserialize<'de, D: Deserializer<'de>>(d: D) -> Result<Option<BigInt>, D::Error> {
        Option::<String>::deserialize(d)?
            .map(|s| s.parse().map_err(serde::de::Error::custom))
            .transpose()
    }
}

/// One checked point. What `approx`, `remainder` and `bound` hold depends on
/// the statement; see the functions in [`super`].
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct Record {
    pub n: u64,
    #[serde(with = "opt_bigint")]
    pub exact: Option<BigInt>,
    pub approx: BigFloat,
    pub remainder: BigFloat,
    pub bound: BigFloat,
    pub pass: bool,
}

pub const CSV_HEADER: [&str; 6] = ["n", "exact", "approx", "remainder", "bound", "pass"];

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct VerificationReport {
    pub statement: Statement,
    pub parameters: BTreeMap<String, i64>,
    pub records: Vec<Record>,
    pub verdict: bool,
    /// Wall-clock time; not serialized so that emitted reports stay
    /// reproducible.
    #[serde(skip)]
    pub runtime_ms: u64,
}

impl VerificationReport {
    /// Sorts the records by `n` and derives the verdict from them.
    pub fn new(
        statement: Statement,
        parameters: BTreeMap<String, i64>,
        mut records: Vec<Record>,
        runtime_ms: u64,
    ) -> Self {
        records.sort_by_key(|r| r.n);
        let verdict = records.iter().all(|r| r.pass);
        VerificationReport {
            statement,
            parameters,
            records,
            verdict,
            runtime_ms,
        }
    }

    pub fn failures(&self) -> impl Iterator<Item = &Record> {
        self.records.iter().filter(|r| !r.pass)
    }

    pub fn to_json(&self) -> Result<String> {
        Ok(serde_json::to_string_pretty(self)?)
    }

    pub fn from_json(s: &str) -> Result<Self> {
        let r: VerificationReport = serde_json::from_str(s)?;
        if r.verdict != r.records.iter().all(|x| x.pass) {
            return Err(Error::Parse("verdict disagrees with the records".into()));
        }
        Ok(r)
    }

    pub fn write_csv<W: Write>(&self, w: W) -> Result<()> {
        let mut wtr = csv::Writer::from_writer(w);
        wtr.write_record(CSV_HEADER)?;
        for r in &self.records {
            wtr.write_record([
                r.n.to_string(),
                r.exact.as_ref().map(|v| v.to_string()).unwrap_or_default(),
                r.approx.to_string(),
                r.remainder.to_string(),
                r.bound.to_string(),
                r.pass.to_string(),
            ])?;
        }
        wtr.flush()?;
        Ok(())
    }
}

/// Records from a CSV report written by [`VerificationReport::write_csv`].
pub fn read_csv_records<R: Read>(r: R) -> Result<Vec<Record>> {
    let mut rdr = csv::Reader::from_reader(r);
    if rdr.headers()?.iter().collect::<Vec<_>>() != CSV_HEADER {
        return Err(Error::Parse("unexpected report CSV header".into()));
    }
    let bad = |what: &str, v: &str| Error::Parse(format!("bad {what} {v:?}"));
    let mut out = Vec::new();
    for rec in rdr.records() {
        let rec = rec?;
        let exact = match &rec[1] {
            "" => None,
            s => Some(s.parse::<BigInt>().map_err(|_| bad("exact value", s))?),
        };
        out.push(Record {
            n: rec[0].parse().map_err(|_| bad("n", &rec[0]))?,
            exact,
            approx: rec[2].parse()?,
            remainder: rec[3].parse()?,
            bound: rec[4].parse()?,
            pass: rec[5].parse().map_err(|_| bad("pass flag", &rec[5]))?,
        });
    }
    Ok(out)
}
