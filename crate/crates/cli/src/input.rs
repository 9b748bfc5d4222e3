use std::fs;
use std::io::Write;
use std::path::{Path, PathBuf};

use serde::de::DeserializeOwned;
use serde_json::Value;
use steerlab::operators::FamilyDocument;
use steerlab::{MeasurementFamily, ParamDocument, Tolerances};

use crate::CliError;

pub fn read_json<T: DeserializeOwned>(path: &Path) -> Result<T, CliError> {
    let text = fs::read_to_string(path).map_err(|e| CliError::Io(format!("cannot read {}: {e}", path.display())))?;
    serde_json::from_str(&text).map_err(|e| CliError::Parse(format!("{}: {e}", path.display())))
}

/// A parameter document or a measurement family, told apart by the `settings` key.
pub enum Input {
    Params(ParamDocument),
    Family(FamilyDocument),
}

pub fn read_input(path: &Path) -> Result<Input, CliError> {
    let value: Value = read_json(path)?;
    let parse_err = |e: serde_json::Error| CliError::Parse(format!("{}: {e}", path.display()));
    if value.get("settings").is_some() {
        Ok(Input::Family(serde_json::from_value(value).map_err(parse_err)?))
    } else {
        Ok(Input::Params(serde_json::from_value(value).map_err(parse_err)?))
    }
}

pub fn read_family(path: &Path, tol: &Tolerances) -> Result<MeasurementFamily, CliError> {
    let doc: FamilyDocument = read_json(path)?;
    Ok(MeasurementFamily::from_document(&doc, tol)?)
}

/// Writes to `path`, or to standard output when there is none.
pub fn emit(path: Option<&PathBuf>, bytes: &[u8]) -> Result<(), CliError> {
    match path {
        Some(p) => fs::write(p, bytes).map_err(|e| CliError::Io(format!("cannot write {}: {e}", p.display()))),
        None => std::io::stdout().write_all(bytes).map_err(|e| CliError::Io(format!("cannot write output: {e}"))),
    }
}

pub fn to_json<T: serde::Serialize>(value: &T) -> Result<Vec<u8>, CliError> {
    let mut bytes = serde_json::to_vec_pretty(value).map_err(|e| CliError::Io(format!("cannot serialize: {e}")))?;
    bytes.push(b'\n');
    Ok(bytes)
}
