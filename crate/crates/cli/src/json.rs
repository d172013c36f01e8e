//! JSON input and output. Floats are written with 17 significant digits, so
//! every value read back is bit-identical to the one written.

use std::fs;
use std::io::{self, Read, Write};

use serde::de::DeserializeOwned;
use serde::Serialize;
use serde_json::ser::Formatter;
use spin7_core::Metric8;
use thiserror::Error;

#[derive(Debug, Error)]
pub enum Failure {
    /// A predicate or precondition failed.
    #[error("{0}")]
    Invalid(String),
    /// Input could not be read or parsed.
    #[error("{0}")]
    Input(String),
}

impl Failure {
    pub fn exit_code(&self) -> u8 {
        match self {
            Failure::Invalid(_) => 1,
            Failure::Input(_) => 2,
        }
    }
}

impl From<spin7_core::Error> for Failure {
    fn from(e: spin7_core::Error) -> Self {
        Failure::Invalid(e.to_string())
    }
}

struct Digits17;

impl Formatter for Digits17 {
    fn write_f64<W: ?Sized + Write>(&mut self, w: &mut W, value: f64) -> io::Result<()> {
        write!(w, "{value:.16e}")
    }
}

pub fn to_json<T: Serialize>(value: &T) -> String {
    let mut buf = Vec::new();
    let mut ser = serde_json::Serializer::with_formatter(&mut buf, Digits17);
    value.serialize(&mut ser).expect("in-memory serialization");
    String::from_utf8(buf).expect("serde_json writes UTF-8")
}

pub fn emit<T: Serialize>(out: &mut dyn Write, value: &T) -> Result<(), Failure> {
    writeln!(out, "{}", to_json(value)).map_err(|e| Failure::Input(format!("stdout: {e}")))
}

/// Reads a file, or standard input for `None` and `"-"`.
pub fn read_source(path: Option<&str>) -> Result<String, Failure> {
    match path {
        None | Some("-") => {
            let mut s = String::new();
            io::stdin().read_to_string(&mut s).map_err(|e| Failure::Input(format!("stdin: {e}")))?;
            Ok(s)
        }
        Some(p) => fs::read_to_string(p).map_err(|e| Failure::Input(format!("{p}: {e}"))),
    }
}

/// Parses `text`, naming the offending field on failure.
pub fn parse<T: DeserializeOwned>(text: &str, what: &str) -> Result<T, Failure> {
    let mut de = serde_json::Deserializer::from_str(text);
    let value = serde_path_to_error::deserialize(&mut de).map_err(|e| {
        let path = e.path().to_string();
        let inner = e.into_inner();
        if path == "." {
            Failure::Input(format!("{what}: {inner}"))
        } else {
            Failure::Input(format!("{what}: field `{path}`: {inner}"))
        }
    })?;
    de.end().map_err(|e| Failure::Input(format!("{what}: {e}")))?;
    Ok(value)
}

pub fn load<T: DeserializeOwned>(path: Option<&str>, what: &str) -> Result<T, Failure> {
    parse(&read_source(path)?, what)
}

/// `"identity"` or the path of an 8×8 row-major array.
pub fn load_metric(arg: &str) -> Result<Metric8, Failure> {
    if arg == "identity" {
        return Ok(Metric8::identity());
    }
    load(Some(arg), "metric")
}
