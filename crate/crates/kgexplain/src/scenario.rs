//! Domain directories and synthetic scenario output.
//!
//! ```text
//! <dir>/domains/<id>.axioms
//! <dir>/signatures.txt
//! <dir>/transfers.csv
//! <dir>/planted.json
//! ```

use std::path::Path;

use kgexplain_core::axiom::Name;
use kgexplain_core::ontology::{DomainOntology, DomainSignature};
use kgexplain_core::syntax::{
    parse_ontology, parse_signatures, serialize_ontology, serialize_signatures,
};
use kgexplain_core::synth::SynthScenario;
use thiserror::Error;

use crate::fs::{self, FsError};
use crate::report::{ground_truth_json, to_json};
use crate::transfers::serialize_transfer_log;

#[derive(Debug, Error)]
pub enum LoadError {
    #[error(transparent)]
    Fs(#[from] FsError),
    #[error("{path}: {message}")]
    Parse { path: String, message: String },
}

/// Domain id of an axiom file: its file stem.
pub fn domain_id(path: &Path) -> Result<Name, LoadError> {
    let stem = path
        .file_stem()
        .and_then(|s| s.to_str())
        .unwrap_or_default();
    Name::new(stem).map_err(|_| LoadError::Parse {
        path: path.display().to_string(),
        message: format!("`{stem}` is not a valid domain id"),
    })
}

/// Reads one axiom file. Duplicate-line warnings are returned with the
/// file name in front.
pub fn load_ontology(path: &Path) -> Result<(DomainOntology, Vec<String>), LoadError> {
    let text = fs::read_text(path)?;
    let id = domain_id(path)?;
    let (o, warnings) = parse_ontology(id, &text).map_err(|e| LoadError::Parse {
        path: path.display().to_string(),
        message: e.to_string(),
    })?;
    let warnings = warnings
        .into_iter()
        .map(|w| format!("{}: line {}: {}", path.display(), w.line, w.message))
        .collect();
    Ok((o, warnings))
}

/// Every `*.axioms` file of a directory, in file-name order.
pub fn load_domains(dir: &Path) -> Result<(Vec<DomainOntology>, Vec<String>), LoadError> {
    let mut onts = Vec::new();
    let mut warnings = Vec::new();
    for p in fs::files_with_extension(dir, "axioms")? {
        let (o, w) = load_ontology(&p)?;
        onts.push(o);
        warnings.extend(w);
    }
    Ok((onts, warnings))
}

pub fn load_signatures(path: &Path) -> Result<Vec<DomainSignature>, LoadError> {
    let text = fs::read_text(path)?;
    parse_signatures(&text).map_err(|e| LoadError::Parse {
        path: path.display().to_string(),
        message: e.to_string(),
    })
}

/// Writes a scenario under `dir`, creating it if needed. Every file is
/// written atomically.
pub fn write_scenario(dir: &Path, s: &SynthScenario) -> Result<(), FsError> {
    let domains = dir.join("domains");
    fs::create_dir_all(&domains)?;
    for (o, _) in &s.domains {
        let p = domains.join(format!("{}.axioms", o.id()));
        fs::write_atomic(&p, serialize_ontology(o).as_bytes())?;
    }
    let sigs: Vec<DomainSignature> = s.domains.iter().map(|(_, sig)| sig.clone()).collect();
    fs::write_atomic(
        &dir.join("signatures.txt"),
        serialize_signatures(&sigs).as_bytes(),
    )?;
    fs::write_atomic(
        &dir.join("transfers.csv"),
        serialize_transfer_log(&s.transfers).as_bytes(),
    )?;
    fs::write_atomic(
        &dir.join("planted.json"),
        to_json(&ground_truth_json(s)).as_bytes(),
    )?;
    Ok(())
}
