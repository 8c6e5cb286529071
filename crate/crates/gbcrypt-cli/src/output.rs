//! Line-delimited JSON records.
//!
//! Every record is one JSON object per line with keys in sorted order. The
//! common keys are `record` (the record kind), `version`, `seed`, `cipher`,
//! `q` (decimal string), `rounds` and `variant` (`null` where it does not
//! apply); `elapsed_ms` is present only under `--timings`.

use std::fs::File;
use std::io::{BufWriter, Write};
use std::path::Path;
use std::time::Instant;

use serde_json::{Map, Value};

use crate::CliError;

/// Fields shared by all records of one command invocation.
#[derive(Clone, Debug)]
pub struct Context {
    pub seed: String,
    pub cipher: Option<&'static str>,
    pub q: u128,
    pub variant: Option<&'static str>,
}

/// Destination for records or raw text.
pub struct Sink {
    out: Box<dyn Write>,
    timings: bool,
    start: Instant,
}

impl Sink {
    pub fn open(path: Option<&Path>, timings: bool) -> Result<Self, CliError> {
        let out: Box<dyn Write> = match path {
            Some(p) => Box::new(BufWriter::new(File::create(p).map_err(|e| CliError::Io(format!("{}: {e}", p.display())))?)),
            None => Box::new(BufWriter::new(std::io::stdout())),
        };
        Ok(Sink { out, timings, start: Instant::now() })
    }

    /// Writes one record built from the context and `payload`.
    pub fn record(&mut self, kind: &str, ctx: &Context, rounds: Option<usize>, payload: Map<String, Value>) -> Result<(), CliError> {
        let mut m = payload;
        m.insert("record".into(), kind.into());
        m.insert("version".into(), env!("CARGO_PKG_VERSION").into());
        m.insert("seed".into(), ctx.seed.clone().into());
        m.insert("cipher".into(), ctx.cipher.map_or(Value::Null, Value::from));
        m.insert("q".into(), ctx.q.to_string().into());
        m.insert("rounds".into(), rounds.map_or(Value::Null, Value::from));
        m.insert("variant".into(), ctx.variant.map_or(Value::Null, Value::from));
        if self.timings {
            m.insert("elapsed_ms".into(), (self.start.elapsed().as_secs_f64() * 1e3).into());
        }
        let line = serde_json::to_string(&Value::Object(m)).map_err(|e| CliError::Io(e.to_string()))?;
        self.text(&format!("{line}\n"))
    }

    pub fn text(&mut self, s: &str) -> Result<(), CliError> {
        self.out.write_all(s.as_bytes()).map_err(|e| CliError::Io(e.to_string()))?;
        self.out.flush().map_err(|e| CliError::Io(e.to_string()))
    }
}

/// Builds a payload map from `key => value` pairs.
#[macro_export]
macro_rules! payload {
    ($($k:literal => $v:expr),* $(,)?) => {{
        #[allow(unused_mut)]
        let mut m = serde_json::Map::new();
        $(m.insert($k.to_string(), serde_json::json!($v));)*
        m
    }};
}
