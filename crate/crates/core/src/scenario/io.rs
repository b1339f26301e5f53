//! Scenario CSV: header `prob,<asset_1>,...,<asset_a>`, one row per scenario.
//! Without a leading `prob` column every scenario gets probability `1/s`.

use std::fs::File;
use std::io::{Read, Write};
use std::path::Path;

use super::ScenarioSet;
use crate::error::{Error, Result};
use crate::scalar::Scalar;

const PROB_COLUMN: &str = "prob";

impl<T: Scalar> ScenarioSet<T> {
    pub fn read_csv(path: impl AsRef<Path>) -> Result<Self> {
        let path = path.as_ref();
        let file = File::open(path).map_err(|e| Error::io(path, e))?;
        Self::from_csv_reader(file)
    }

    pub fn from_csv_reader<R: Read>(reader: R) -> Result<Self> {
        let mut csv = csv::ReaderBuilder::new()
            .has_headers(false)
            .trim(csv::Trim::All)
            .flexible(true)
            .from_reader(reader);
        let mut records = csv.records();
        let header = match records.next() {
            Some(r) => r.map_err(|e| csv_error(1, e))?,
            None => {
                return Err(Error::Format {
                    row: 1,
                    message: "missing header".into(),
                })
            }
        };
        let has_prob = header.get(0) == Some(PROB_COLUMN);
        let labels: Vec<String> = header
            .iter()
            .skip(usize::from(has_prob))
            .map(str::to_owned)
            .collect();
        if labels.is_empty() {
            return Err(Error::Format {
                row: 1,
                message: "header names no assets".into(),
            });
        }

        let mut rows = Vec::new();
        let mut probabilities = Vec::new();
        for (i, record) in records.enumerate() {
            let line = i + 2;
            let record = record.map_err(|e| csv_error(line, e))?;
            if record.len() != header.len() {
                return Err(Error::Format {
                    row: line,
                    message: format!("expected {} fields, found {}", header.len(), record.len()),
                });
            }
            let mut values = record
                .iter()
                .enumerate()
                .map(|(col, field)| parse_field::<T>(field, line, header.get(col).unwrap_or("")));
            if has_prob {
                probabilities.push(values.next().expect("record is non-empty")?);
            }
            rows.push(values.collect::<Result<Vec<T>>>()?);
        }
        if rows.is_empty() {
            return Err(Error::Format {
                row: 2,
                message: "no scenarios".into(),
            });
        }
        if has_prob {
            Self::new(rows, probabilities, labels)
        } else {
            Self::equiprobable(rows, labels)
        }
    }

    pub fn write_csv(&self, path: impl AsRef<Path>) -> Result<()> {
        let path = path.as_ref();
        let file = File::create(path).map_err(|e| Error::io(path, e))?;
        self.to_csv_writer(file).map_err(|e| Error::io(path, e))
    }

    pub fn to_csv_writer<W: Write>(&self, mut out: W) -> std::io::Result<()> {
        write!(out, "{PROB_COLUMN}")?;
        for label in &self.labels {
            write!(out, ",{label}")?;
        }
        writeln!(out)?;
        for (row, p) in self.scenarios().zip(&self.probabilities) {
            write!(out, "{p}")?;
            for r in row {
                write!(out, ",{r}")?;
            }
            writeln!(out)?;
        }
        out.flush()
    }
}

fn parse_field<T: Scalar>(field: &str, row: usize, column: &str) -> Result<T> {
    field.parse::<T>().map_err(|_| Error::Format {
        row,
        message: format!("column `{column}`: cannot parse `{field}` as a number"),
    })
}

fn csv_error(row: usize, e: csv::Error) -> Error {
    Error::Format {
        row,
        message: e.to_string(),
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn missing_prob_column_means_equiprobable() {
        let set =
            ScenarioSet::<f64>::from_csv_reader("A,B\n0.1,0.2\n0.0,-0.1\n".as_bytes()).unwrap();
        assert_eq!(set.probabilities(), &[0.5, 0.5]);
        assert_eq!(set.labels(), &["A", "B"]);
        assert_eq!(set.scenario(1), &[0.0, -0.1]);
    }

    #[test]
    fn explicit_probabilities_and_write_back() {
        let text = "prob,A,B\n0.5,0.1,-0.05\n0.3,0,0.02\n0.2,-0.1,0.04\n";
        let set = ScenarioSet::<f64>::from_csv_reader(text.as_bytes()).unwrap();
        assert_eq!(set.probabilities(), &[0.5, 0.3, 0.2]);
        let mut buf = Vec::new();
        set.to_csv_writer(&mut buf).unwrap();
        assert_eq!(String::from_utf8(buf).unwrap(), text);
    }

    #[test]
    fn format_errors_carry_row() {
        let err = ScenarioSet::<f64>::from_csv_reader("A\n0.1\nabc\n".as_bytes()).unwrap_err();
        assert!(matches!(err, Error::Format { row: 3, .. }), "{err}");
        let err = ScenarioSet::<f64>::from_csv_reader("".as_bytes()).unwrap_err();
        assert!(matches!(err, Error::Format { row: 1, .. }));
        let err = ScenarioSet::<f64>::from_csv_reader("prob,A\n0.5,0.1\n".as_bytes()).unwrap_err();
        assert!(matches!(err, Error::Validation(_)));
    }
}
