pub mod clean;
pub mod evaluate;
pub mod fit;
pub mod forecast;
pub mod report;
pub mod synth;

use std::fs::File;
use std::io::BufReader;
use std::path::Path;

use crate::{CliError, CliResult};

/// Opens an input file with a named-file error on failure.
pub fn open(path: &Path) -> CliResult<BufReader<File>> {
    File::open(path)
        .map(BufReader::new)
        .map_err(|e| CliError::Data(anyhow::anyhow!("cannot open {}: {e}", path.display())))
}

pub fn read_to_string(path: &Path) -> CliResult<String> {
    std::fs::read_to_string(path)
        .map_err(|e| CliError::Data(anyhow::anyhow!("cannot read {}: {e}", path.display())))
}
