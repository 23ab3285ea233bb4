//! Output documents: JSON reports and CSV tables with a provenance header.

use serde::{Serialize, Serializer};

use crate::config::RunConfig;

pub const TOOL: &str = "sumrule";
pub const VERSION: &str = env!("CARGO_PKG_VERSION");

/// A float that serializes non-finite values as the strings `"inf"`, `"-inf"`, `"nan"`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Real(pub f64);

impl Serialize for Real {
    fn serialize<S: Serializer>(&self, s: S) -> Result<S::Ok, S::Error> {
        match self.0 {
            x if x.is_finite() => s.serialize_f64(x),
            x if x.is_nan() => s.serialize_str("nan"),
            x if x > 0.0 => s.serialize_str("inf"),
            _ => s.serialize_str("-inf"),
        }
    }
}

pub fn reals(x: &[f64]) -> Vec<Real> {
    x.iter().copied().map(Real).collect()
}

/// CSV cell of a float: shortest round-trip form, exponent for tiny or huge values, `inf` for infinity.
pub fn cell(x: f64) -> String {
    format!("{x:?}")
}

#[derive(Debug, Clone, Serialize)]
pub struct Header {
    pub tool: &'static str,
    pub version: &'static str,
    pub command: &'static str,
    pub config_hash: String,
    pub seed: u64,
}

impl Header {
    pub fn new(config: &RunConfig) -> Self {
        Self {
            tool: TOOL,
            version: VERSION,
            command: config.command.name(),
            config_hash: config.hash(),
            seed: config.seed,
        }
    }
}

#[derive(Serialize)]
struct Document<'a, T: Serialize> {
    generated_at: &'a str,
    header: &'a Header,
    #[serde(flatten)]
    body: &'a T,
}

/// Pretty JSON whose second line holds the timestamp and nothing else.
pub fn json_document<T: Serialize>(header: &Header, timestamp: &str, body: &T) -> String {
    let doc = Document {
        generated_at: timestamp,
        header,
        body,
    };
    let mut text = serde_json::to_string_pretty(&doc).expect("reports serialize");
    text.push('\n');
    text
}

/// CSV table preceded by `#` comment lines: provenance, timestamp, then `notes`.
pub fn csv_document(
    header: &Header,
    timestamp: &str,
    notes: &[(String, String)],
    columns: &[&str],
    rows: &[Vec<String>],
) -> String {
    let mut text = format!(
        "# {} {} command={} config={} seed={}\n# generated_at={timestamp}\n",
        header.tool, header.version, header.command, header.config_hash, header.seed
    );
    for (k, v) in notes {
        text.push_str(&format!("# {k}={v}\n"));
    }
    let mut writer = csv::Writer::from_writer(Vec::new());
    writer.write_record(columns).expect("in-memory write");
    for row in rows {
        writer.write_record(row).expect("in-memory write");
    }
    text.push_str(
        &String::from_utf8(writer.into_inner().expect("in-memory flush")).expect("utf-8"),
    );
    text
}

/// Drops the timestamp line so two outputs can be compared byte for byte.
pub fn strip_timestamp(text: &str) -> String {
    text.lines()
        .filter(|l| !l.contains("generated_at"))
        .map(|l| format!("{l}\n"))
        .collect()
}
