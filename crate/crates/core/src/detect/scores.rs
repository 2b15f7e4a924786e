use std::collections::BTreeMap;
use std::fmt;
use std::io::Read;
use std::str::FromStr;

use serde::{Deserialize, Serialize};

use crate::collection::PositionedError;

/// Which direction of a detector's score indicates an error.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum Orientation {
    HigherMeansError,
    HigherMeansQuality,
}

impl Orientation {
    pub fn as_str(self) -> &'static str {
        match self {
            Orientation::HigherMeansError => "higher-means-error",
            Orientation::HigherMeansQuality => "higher-means-quality",
        }
    }
}

impl fmt::Display for Orientation {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.as_str())
    }
}

impl FromStr for Orientation {
    type Err = String;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        match s.replace('_', "-").as_str() {
            "higher-means-error" => Ok(Orientation::HigherMeansError),
            "higher-means-quality" => Ok(Orientation::HigherMeansQuality),
            _ => Err(format!(
                "unknown orientation `{s}` (expected higher-means-error or higher-means-quality)"
            )),
        }
    }
}

/// Per-item scores from one detector.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ScoreTable {
    pub detector_name: String,
    pub orientation: Orientation,
    pub scores: BTreeMap<String, f64>,
}

impl ScoreTable {
    /// Scores where larger always means "more likely an error".
    pub fn error_oriented(&self) -> BTreeMap<&str, f64> {
        let sign = match self.orientation {
            Orientation::HigherMeansError => 1.0,
            Orientation::HigherMeansQuality => -1.0,
        };
        self.scores
            .iter()
            .map(|(k, v)| (k.as_str(), sign * v))
            .collect()
    }
}

#[derive(Debug, thiserror::Error)]
pub enum ScoreFileError {
    #[error("i/o error: {0}")]
    Io(#[from] std::io::Error),
    #[error("{}", .0.iter().map(|e| e.to_string()).collect::<Vec<_>>().join("\n"))]
    Parse(Vec<PositionedError>),
}

pub const SCORE_HEADER: &str = "item_id,score";

/// Reads a two-column `item_id,score` file. Scores must be finite and item
/// ids unique.
pub fn parse_score_file<R: Read>(
    reader: R,
    detector_name: &str,
    orientation: Orientation,
) -> Result<ScoreTable, ScoreFileError> {
    let mut rdr = csv::ReaderBuilder::new()
        .has_headers(false)
        .flexible(true)
        .from_reader(reader);
    let mut errors = Vec::new();
    let mut scores = BTreeMap::new();
    let mut raw = csv::StringRecord::new();
    let err = |line: u64, column: Option<&str>, message: String| PositionedError {
        line,
        column: column.map(str::to_string),
        message,
    };

    match rdr.read_record(&mut raw) {
        Ok(true) if raw.iter().collect::<Vec<_>>() == ["item_id", "score"] => {}
        Ok(true) => {
            return Err(ScoreFileError::Parse(vec![err(
                1,
                None,
                format!("expected header `{SCORE_HEADER}`"),
            )]))
        }
        Ok(false) => return Err(ScoreFileError::Parse(vec![err(1, None, "missing header line".into())])),
        Err(e) => return Err(ScoreFileError::Parse(vec![err(1, None, e.to_string())])),
    }

    loop {
        match rdr.read_record(&mut raw) {
            Ok(false) => break,
            Ok(true) => {
                let line = raw.position().map_or(0, |p| p.line());
                if raw.len() != 2 {
                    errors.push(err(line, None, format!("expected 2 fields, found {}", raw.len())));
                    continue;
                }
                let id = &raw[0];
                if id.is_empty() {
                    errors.push(err(line, Some("item_id"), "empty identifier".into()));
                    continue;
                }
                let value = match raw[1].trim().parse::<f64>() {
                    Ok(v) if v.is_finite() => v,
                    Ok(_) => {
                        errors.push(err(line, Some("score"), format!("non-finite score `{}`", &raw[1])));
                        continue;
                    }
                    Err(_) => {
                        errors.push(err(line, Some("score"), format!("not a number: `{}`", &raw[1])));
                        continue;
                    }
                };
                if scores.insert(id.to_string(), value).is_some() {
                    errors.push(err(line, Some("item_id"), format!("duplicate item `{id}`")));
                }
            }
            Err(e) => {
                if let csv::ErrorKind::Io(_) = e.kind() {
                    return Err(ScoreFileError::Io(e.into()));
                }
                let line = e.position().map_or(0, |p| p.line());
                errors.push(err(line, None, e.to_string()));
            }
        }
    }
    if !errors.is_empty() {
        return Err(ScoreFileError::Parse(errors));
    }
    Ok(ScoreTable {
        detector_name: detector_name.to_string(),
        orientation,
        scores,
    })
}

/// Writes `item_id,score` lines using the shortest round-tripping float form.
pub fn score_table_to_string(table: &ScoreTable) -> String {
    let mut out = format!("{SCORE_HEADER}\n");
    for (id, v) in &table.scores {
        if id.contains([',', '"', '\n', '\r']) {
            out.push_str(&format!("\"{}\"", id.replace('"', "\"\"")));
        } else {
            out.push_str(id);
        }
        out.push_str(&format!(",{v}\n"));
    }
    out
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn parses_and_round_trips() {
        let text = "item_id,score\na,0.5\nb,-1.25\n\"c,d\",3\n";
        let t = parse_score_file(text.as_bytes(), "X", Orientation::HigherMeansError).unwrap();
        assert_eq!(t.scores.len(), 3);
        assert_eq!(t.scores["c,d"], 3.0);
        let again = score_table_to_string(&t);
        let t2 = parse_score_file(again.as_bytes(), "X", Orientation::HigherMeansError).unwrap();
        assert_eq!(t, t2);
    }

    #[test]
    fn rejects_bad_rows() {
        let text = "item_id,score\na,NaN\nb,x\na,1\nc\n";
        match parse_score_file(text.as_bytes(), "X", Orientation::HigherMeansError) {
            Err(ScoreFileError::Parse(e)) => {
                let lines: Vec<u64> = e.iter().map(|e| e.line).collect();
                assert_eq!(lines, vec![2, 3, 5]);
            }
            other => panic!("{other:?}"),
        }
        let dup = "item_id,score\na,1\na,2\n";
        match parse_score_file(dup.as_bytes(), "X", Orientation::HigherMeansError) {
            Err(ScoreFileError::Parse(e)) => assert!(e[0].message.contains("duplicate")),
            other => panic!("{other:?}"),
        }
        assert!(parse_score_file("id,s\n".as_bytes(), "X", Orientation::HigherMeansError).is_err());
    }

    #[test]
    fn orientation_parsing_and_negation() {
        assert_eq!(
            "higher_means_quality".parse::<Orientation>().unwrap(),
            Orientation::HigherMeansQuality
        );
        assert!("up".parse::<Orientation>().is_err());
        let t = ScoreTable {
            detector_name: "q".into(),
            orientation: Orientation::HigherMeansQuality,
            scores: [("a".to_string(), 0.25)].into(),
        };
        assert_eq!(t.error_oriented()["a"], -0.25);
    }
}
