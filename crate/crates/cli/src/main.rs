mod args;
mod commands;

use std::fs;
use std::io::Write;
use std::path::{Path, PathBuf};
use std::process::ExitCode;

use clap::Parser;
use serde_json::{json, Map, Value};
use sha2::{Digest, Sha256};

use args::{Cli, Command, RegionSelection, Selector};

/// Contents of every input file, in a fixed order.
#[derive(Debug, Default)]
pub struct Inputs {
    pub net: Option<String>,
    pub strategy: Option<String>,
    pub order: Option<String>,
    pub subnet: Option<String>,
}

#[derive(Debug)]
pub enum CliError {
    Io {
        path: PathBuf,
        source: std::io::Error,
    },
    Domain(tingdof::Error),
}

impl From<tingdof::Error> for CliError {
    fn from(e: tingdof::Error) -> Self {
        CliError::Domain(e)
    }
}

impl CliError {
    fn kind(&self) -> &'static str {
        match self {
            CliError::Io { .. } => "io",
            CliError::Domain(e) => e.kind(),
        }
    }

    fn message(&self) -> String {
        match self {
            CliError::Io { path, source } => format!("cannot read {}: {source}", path.display()),
            CliError::Domain(e) => e.to_string(),
        }
    }
}

/// A finished report. `passed` is false when the command checked a property
/// that turned out not to hold.
pub enum Report {
    Json {
        body: Map<String, Value>,
        passed: bool,
    },
    Csv(String),
}

fn read(path: &Path) -> Result<String, CliError> {
    fs::read_to_string(path).map_err(|source| CliError::Io {
        path: path.to_path_buf(),
        source,
    })
}

fn selector_file(s: &Selector) -> Option<&Path> {
    match s {
        Selector::File(p) => Some(p.as_path()),
        Selector::Default => None,
    }
}

fn selection_files(sel: &RegionSelection) -> [Option<&Path>; 2] {
    [selector_file(&sel.order), selector_file(&sel.subnet)]
}

fn load_inputs(cmd: &Command) -> Result<Inputs, CliError> {
    let (net, strategy, [order, subnet]): (Option<&Path>, Option<&Path>, [Option<&Path>; 2]) =
        match cmd {
            Command::Validate(a) => (Some(&a.net), None, [None, None]),
            Command::Classify(c) | Command::Ia(c) => (Some(&c.net.net), None, [None, None]),
            Command::Region(a) => (Some(&a.common.net.net), None, selection_files(&a.selection)),
            Command::Member(a) => (Some(&a.common.net.net), None, [None, None]),
            Command::Maxsum(a) => (Some(&a.common.net.net), None, selection_files(&a.selection)),
            Command::Bounds(a) => (Some(&a.common.net.net), Some(&a.strategy), [None, None]),
            Command::Rates(a) => (Some(&a.common.net.net), Some(&a.strategy), [None, None]),
            Command::Dualize(a) => (Some(&a.common.net.net), Some(&a.strategy), [None, None]),
            Command::Oracle(a) => (Some(&a.common.net.net), None, [None, None]),
            Command::Adt(_) => (None, None, [None, None]),
        };
    let load = |p: Option<&Path>| p.map(read).transpose();
    Ok(Inputs {
        net: load(net)?,
        strategy: load(strategy)?,
        order: load(order)?,
        subnet: load(subnet)?,
    })
}

/// SHA-256 over the input files, each prefixed by its length.
fn digest(inputs: &Inputs) -> String {
    let mut h = Sha256::new();
    for text in [&inputs.net, &inputs.strategy, &inputs.order, &inputs.subnet]
        .into_iter()
        .flatten()
    {
        h.update((text.len() as u64).to_le_bytes());
        h.update(text.as_bytes());
    }
    hex::encode(h.finalize())
}

fn meta(digest: &str) -> Value {
    json!({
        "tool": "tingdof",
        "version": env!("CARGO_PKG_VERSION"),
        "input_sha256": digest,
    })
}

/// Writes to stdout; a reader that closed the pipe early is not an error.
fn emit(text: &str) {
    let mut out = std::io::stdout().lock();
    match out.write_all(text.as_bytes()).and_then(|_| out.flush()) {
        Err(e) if e.kind() != std::io::ErrorKind::BrokenPipe => {
            eprintln!("tingdof: cannot write report: {e}");
        }
        _ => {}
    }
}

fn emit_json(mut body: Map<String, Value>, digest: &str) {
    body.insert("meta".into(), meta(digest));
    let text = serde_json::to_string_pretty(&Value::Object(body)).expect("report serializes");
    emit(&format!("{text}\n"));
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    let (result, digest) = match load_inputs(&cli.command) {
        Ok(inputs) => {
            let d = digest(&inputs);
            (commands::run(&cli.command, &inputs), d)
        }
        Err(e) => (Err(e), digest(&Inputs::default())),
    };
    match result {
        Ok(Report::Json { body, passed }) => {
            emit_json(body, &digest);
            if passed {
                ExitCode::SUCCESS
            } else {
                ExitCode::from(1)
            }
        }
        Ok(Report::Csv(text)) => {
            emit(&format!(
                "# tingdof {} input_sha256={digest}\n{text}",
                env!("CARGO_PKG_VERSION")
            ));
            ExitCode::SUCCESS
        }
        Err(e) => {
            let mut body = Map::new();
            body.insert(
                "error".into(),
                json!({ "kind": e.kind(), "message": e.message() }),
            );
            emit_json(body, &digest);
            ExitCode::from(1)
        }
    }
}
