use std::collections::HashSet;
use std::io::Read;

use serde::{Deserialize, Serialize};

pub const ITEMS_HEADER: &str = "item_id,source_id,run_id,source_text,simplified_text";

/// One (source, simplification) pair to be annotated.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct Item {
    pub item_id: String,
    pub source_id: String,
    pub run_id: String,
    pub source_text: String,
    pub simplified_text: String,
}

#[derive(Debug, thiserror::Error)]
pub enum ItemsError {
    #[error("i/o error: {0}")]
    Io(#[from] std::io::Error),
    #[error("items file line {line}: {message}")]
    Parse { line: u64, message: String },
}

/// Reads an items file with header [`ITEMS_HEADER`]. Item ids must be
/// unique, non-empty, and must not contain `::`, which is reserved for
/// probe ids.
pub fn parse_items<R: Read>(reader: R) -> Result<Vec<Item>, ItemsError> {
    let mut rdr = csv::ReaderBuilder::new().from_reader(reader);
    let headers = rdr.headers().map_err(|e| ItemsError::Parse {
        line: 1,
        message: e.to_string(),
    })?;
    if headers.iter().collect::<Vec<_>>().join(",") != ITEMS_HEADER {
        return Err(ItemsError::Parse {
            line: 1,
            message: format!("expected header `{ITEMS_HEADER}`"),
        });
    }
    let mut seen = HashSet::new();
    let mut out = Vec::new();
    for row in rdr.deserialize::<Item>() {
        let item = row.map_err(|e| ItemsError::Parse {
            line: e.position().map_or(0, |p| p.line()),
            message: e.to_string(),
        })?;
        let line = out.len() as u64 + 2;
        if item.item_id.is_empty() || item.item_id.contains("::") {
            return Err(ItemsError::Parse {
                line,
                message: format!("invalid item id `{}`", item.item_id),
            });
        }
        if !seen.insert(item.item_id.clone()) {
            return Err(ItemsError::Parse {
                line,
                message: format!("duplicate item id `{}`", item.item_id),
            });
        }
        out.push(item);
    }
    Ok(out)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn parses_items() {
        let text = "item_id,source_id,run_id,source_text,simplified_text\n\
                    a,s1,r1,\"Long, complex text.\",Short text.\n";
        let items = parse_items(text.as_bytes()).unwrap();
        assert_eq!(items.len(), 1);
        assert_eq!(items[0].source_text, "Long, complex text.");
    }

    #[test]
    fn rejects_duplicates_and_reserved_ids() {
        let dup = format!("{ITEMS_HEADER}\na,s,r,x,y\na,s,r,x,y\n");
        assert!(matches!(parse_items(dup.as_bytes()), Err(ItemsError::Parse { line: 3, .. })));
        let reserved = format!("{ITEMS_HEADER}\na::b,s,r,x,y\n");
        assert!(parse_items(reserved.as_bytes()).is_err());
        assert!(parse_items("id,text\n".as_bytes()).is_err());
    }
}
