//! Transfer-log CSV: a `src,tgt,feature,score` header, then one transfer
//! per row. The score column takes a decimal or one of the labels
//! `positive` / `negative` (+1 / -1).

use kgexplain_core::axiom::Name;
use kgexplain_core::transfer::TransferRecord;
use thiserror::Error;

const COLUMNS: [&str; 4] = ["src", "tgt", "feature", "score"];

#[derive(Debug, Error)]
pub enum TransferLogError {
    #[error("missing column `{0}` in header")]
    MissingColumn(&'static str),
    #[error("row {row}: {message}")]
    Row { row: usize, message: String },
    #[error(transparent)]
    Csv(#[from] csv::Error),
}

fn parse_score(s: &str) -> Option<f64> {
    match s {
        "positive" => Some(1.0),
        "negative" => Some(-1.0),
        _ => s.parse::<f64>().ok(),
    }
}

/// Parses a transfer log. Row numbers in errors count data rows from 1.
pub fn load_transfer_log(text: &str) -> Result<Vec<TransferRecord>, TransferLogError> {
    let mut rdr = csv::ReaderBuilder::new()
        .trim(csv::Trim::All)
        .comment(Some(b'#'))
        .from_reader(text.as_bytes());
    let headers = rdr.headers()?.clone();
    let mut idx = [0usize; 4];
    for (slot, col) in idx.iter_mut().zip(COLUMNS) {
        *slot = headers
            .iter()
            .position(|h| h == col)
            .ok_or(TransferLogError::MissingColumn(col))?;
    }
    let mut out = Vec::new();
    for (i, rec) in rdr.records().enumerate() {
        let row = i + 1;
        let bad = |message: String| TransferLogError::Row { row, message };
        let rec = rec.map_err(|e| bad(e.to_string()))?;
        let field = |k: usize| {
            rec.get(idx[k])
                .ok_or_else(|| bad(format!("missing `{}`", COLUMNS[k])))
        };
        let name = |k: usize| -> Result<Name, TransferLogError> {
            let v = field(k)?;
            Name::new(v).map_err(|_| bad(format!("bad {} `{v}`", COLUMNS[k])))
        };
        let (src, tgt, feature) = (name(0)?, name(1)?, name(2)?);
        let raw = field(3)?;
        let score = parse_score(raw).ok_or_else(|| bad(format!("unparsable score `{raw}`")))?;
        let t = TransferRecord::new(src, tgt, feature, score).map_err(|e| bad(e.to_string()))?;
        out.push(t);
    }
    Ok(out)
}

/// Writes records with the shortest decimal that reads back to the same
/// score.
pub fn serialize_transfer_log(records: &[TransferRecord]) -> String {
    let mut w = csv::Writer::from_writer(Vec::new());
    w.write_record(COLUMNS).expect("in-memory write");
    for t in records {
        w.write_record([
            t.source.as_str(),
            t.target.as_str(),
            t.feature.as_str(),
            &t.score.to_string(),
        ])
        .expect("in-memory write");
    }
    String::from_utf8(w.into_inner().expect("in-memory flush")).expect("utf-8 input")
}
