use std::collections::HashMap;
use std::io::{BufRead, Write};

use super::{IngestError, PaperRecord};

/// A parsed corpus line with its 1-based line number.
#[derive(Debug)]
pub struct JsonlLine {
    pub line: usize,
    pub result: Result<PaperRecord, IngestError>,
}

/// Parses every nonempty line independently; duplicate ids are not checked.
pub fn parse_jsonl_lines<R: BufRead>(reader: R) -> Result<Vec<JsonlLine>, IngestError> {
    let mut out = Vec::new();
    for (idx, line) in reader.lines().enumerate() {
        let line = line?;
        let number = idx + 1;
        if line.trim().is_empty() {
            continue;
        }
        let result = serde_json::from_str::<PaperRecord>(&line).map_err(|e| {
            IngestError::MalformedLine {
                line: number,
                message: e.to_string(),
            }
        });
        out.push(JsonlLine {
            line: number,
            result,
        });
    }
    Ok(out)
}

/// Strict corpus parse: the first malformed line or duplicate id aborts.
pub fn parse_jsonl_corpus<R: BufRead>(reader: R) -> Result<Vec<PaperRecord>, IngestError> {
    let mut seen: HashMap<String, usize> = HashMap::new();
    let mut records = Vec::new();
    for parsed in parse_jsonl_lines(reader)? {
        let record = parsed.result?;
        if let Some(&first_line) = seen.get(&record.paper_id) {
            return Err(IngestError::DuplicateId {
                paper_id: record.paper_id,
                first_line,
                second_line: parsed.line,
            });
        }
        seen.insert(record.paper_id.clone(), parsed.line);
        records.push(record);
    }
    Ok(records)
}

pub fn write_jsonl_corpus<W: Write>(mut writer: W, records: &[PaperRecord]) -> std::io::Result<()> {
    for record in records {
        serde_json::to_writer(&mut writer, record)?;
        writer.write_all(b"\n")?;
    }
    writer.flush()
}
