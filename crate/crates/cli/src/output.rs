//! CSV rows shared by every subcommand, plus the JSON mirror.

use std::fmt::Write as _;
use std::io::{self, Write};

use serde::Serialize;
use sha2::{Digest, Sha256};

pub const HEADER: &str = "topology,scaling,c,n,lambda_e,lambda,source,value,ci_half_width,seed,alpha,note";

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
#[serde(rename_all = "lowercase")]
pub enum Source {
    Theory,
    Simulation,
    Bound,
}

impl Source {
    pub fn as_str(&self) -> &'static str {
        match self {
            Source::Theory => "theory",
            Source::Simulation => "simulation",
            Source::Bound => "bound",
        }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct Row {
    pub topology: String,
    pub scaling: String,
    pub c: Option<f64>,
    pub n: usize,
    pub lambda_e: f64,
    pub lambda: f64,
    pub source: Source,
    pub value: f64,
    pub ci_half_width: Option<f64>,
    pub seed: Option<u64>,
    pub alpha: Option<f64>,
    pub note: String,
}

/// `%.12g`: 12 significant digits, trailing zeros trimmed.
pub fn fmt_g12(x: f64) -> String {
    if x == 0.0 {
        return "0".into();
    }
    if !x.is_finite() {
        return format!("{x}");
    }
    let sci = format!("{:.11e}", x);
    let (mantissa, exp) = sci.split_once('e').expect("exponent");
    let exp: i32 = exp.parse().expect("integer exponent");
    if (-5..12).contains(&exp) {
        let decimals = (11 - exp).max(0) as usize;
        trim_zeros(format!("{:.*}", decimals, x))
    } else {
        format!("{}e{}{:02}", trim_zeros(mantissa.to_string()), if exp < 0 { '-' } else { '+' }, exp.abs())
    }
}

fn trim_zeros(s: String) -> String {
    if s.contains('.') {
        s.trim_end_matches('0').trim_end_matches('.').to_string()
    } else {
        s
    }
}

fn opt<T>(v: Option<T>, f: impl Fn(T) -> String) -> String {
    v.map(f).unwrap_or_default()
}

impl Row {
    pub fn to_csv(&self) -> String {
        let mut line = String::new();
        write!(
            line,
            "{},{},{},{},{},{},{},{},{},{},{},{}",
            self.topology,
            self.scaling,
            opt(self.c, fmt_g12),
            self.n,
            fmt_g12(self.lambda_e),
            fmt_g12(self.lambda),
            self.source.as_str(),
            fmt_g12(self.value),
            opt(self.ci_half_width, fmt_g12),
            opt(self.seed, |s| s.to_string()),
            opt(self.alpha, fmt_g12),
            self.note,
        )
        .expect("writing to a string");
        line
    }
}

/// SHA-256 of the canonical JSON form of a run description.
pub fn spec_hash<S: Serialize>(spec: &S) -> String {
    let json = serde_json::to_vec(spec).expect("spec serializes");
    hex::encode(Sha256::digest(&json))
}

pub fn metadata_line(seed: u64, hash: &str) -> String {
    format!("# vaoi {} seed={seed} rng={} spec_sha256={hash}", env!("CARGO_PKG_VERSION"), vaoi::sim::RNG_NAME)
}

pub fn write_csv<W: Write>(mut out: W, metadata: &str, rows: &[Row]) -> io::Result<()> {
    writeln!(out, "{metadata}")?;
    writeln!(out, "{HEADER}")?;
    for row in rows {
        writeln!(out, "{}", row.to_csv())?;
    }
    out.flush()
}

#[derive(Serialize)]
pub struct JsonMirror<'a, S: Serialize> {
    pub version: &'static str,
    pub rng: &'static str,
    pub spec_sha256: &'a str,
    pub spec: &'a S,
    pub rows: &'a [Row],
}
