//! Writing artifacts to stdout or an output directory.

use std::path::{Path, PathBuf};

use serde::Serialize;
use serde_json::Value;

use crate::error::{CliError, CliResult};

/// Puts the compact JSON config on a leading `# config:` comment line.
pub fn csv_with_config(config: &Value, csv: &str) -> String {
    format!("# config: {config}\n{csv}")
}

pub fn json_with_config<T: Serialize>(config: &Value, result: &T) -> CliResult<String> {
    let doc = serde_json::json!({ "config": config, "result": result });
    serde_json::to_string_pretty(&doc)
        .map(|s| s + "\n")
        .map_err(|e| CliError::Config(format!("cannot serialize output: {e}")))
}

/// Destination of a command's output.
pub struct Sink {
    dir: Option<PathBuf>,
    written: Vec<String>,
}

impl Sink {
    pub fn new(dir: Option<&Path>) -> CliResult<Self> {
        if let Some(d) = dir {
            std::fs::create_dir_all(d).map_err(|e| CliError::io(d.display().to_string(), e))?;
        }
        Ok(Self {
            dir: dir.map(Path::to_path_buf),
            written: Vec::new(),
        })
    }

    /// Writes `name` into the output directory, or prints it when there is none.
    pub fn emit(&mut self, name: &str, contents: &str) -> CliResult<()> {
        match &self.dir {
            Some(d) => {
                let path = d.join(name);
                std::fs::write(&path, contents).map_err(|e| CliError::io(path.display().to_string(), e))?;
                self.written.push(name.to_string());
            }
            None => print!("{contents}"),
        }
        Ok(())
    }

    pub fn written(&self) -> &[String] {
        &self.written
    }
}

#[derive(Serialize)]
pub struct Metadata<'a> {
    pub command: &'a str,
    pub config: &'a Value,
    pub artifacts: Vec<String>,
    pub wall_time_s: f64,
}
