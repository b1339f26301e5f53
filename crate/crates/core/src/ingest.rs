//! Daily price files to weekly-return scenario sets.
//!
//! A "week" is a block of five consecutive trading days. Block `k` spans rows
//! `5k ..= 5k + 5` and its return is the simple return between its endpoints;
//! a trailing partial block is dropped.

use std::fs::File;
use std::io::Read;
use std::path::Path;

use chrono::NaiveDate;

use crate::error::{Error, Result};
use crate::scalar::Scalar;
use crate::scenario::ScenarioSet;

pub const TRADING_DAYS_PER_WEEK: usize = 5;

#[derive(Debug, Clone, PartialEq)]
pub struct PriceSeries<T> {
    dates: Vec<NaiveDate>,
    prices: Vec<T>,
    labels: Vec<String>,
}

impl<T: Scalar> PriceSeries<T> {
    pub fn new(dates: Vec<NaiveDate>, rows: Vec<Vec<T>>, labels: Vec<String>) -> Result<Self> {
        if labels.is_empty() {
            return Err(Error::Format {
                row: 1,
                message: "no asset columns".into(),
            });
        }
        if dates.len() != rows.len() {
            return Err(Error::Dimension(format!(
                "{} dates but {} price rows",
                dates.len(),
                rows.len()
            )));
        }
        let mut prices = Vec::with_capacity(rows.len() * labels.len());
        for (i, row) in rows.into_iter().enumerate() {
            let line = i + 2;
            if i > 0 && dates[i] <= dates[i - 1] {
                return Err(Error::Format {
                    row: line,
                    message: format!(
                        "date {} does not follow {} (dates must be strictly increasing)",
                        dates[i],
                        dates[i - 1]
                    ),
                });
            }
            if row.len() != labels.len() {
                return Err(Error::Format {
                    row: line,
                    message: format!("expected {} prices, found {}", labels.len(), row.len()),
                });
            }
            if let Some(j) = row.iter().position(|p| !(p.is_finite() && *p > T::zero())) {
                return Err(Error::Format {
                    row: line,
                    message: format!(
                        "price of `{}` on {} is {} (must be positive and finite)",
                        labels[j], dates[i], row[j]
                    ),
                });
            }
            prices.extend(row);
        }
        Ok(Self {
            dates,
            prices,
            labels,
        })
    }

    pub fn dates(&self) -> &[NaiveDate] {
        &self.dates
    }

    pub fn labels(&self) -> &[String] {
        &self.labels
    }

    pub fn n_days(&self) -> usize {
        self.dates.len()
    }

    pub fn n_assets(&self) -> usize {
        self.labels.len()
    }

    pub fn day(&self, i: usize) -> &[T] {
        let a = self.n_assets();
        &self.prices[i * a..(i + 1) * a]
    }
}

/// Reads a `date,<ticker_1>,...` CSV with ISO-8601 dates.
pub fn load_prices<T: Scalar>(path: impl AsRef<Path>) -> Result<PriceSeries<T>> {
    let path = path.as_ref();
    let file = File::open(path).map_err(|e| Error::io(path, e))?;
    read_prices(file)
}

pub fn read_prices<T: Scalar, R: Read>(reader: R) -> Result<PriceSeries<T>> {
    let mut csv = csv::ReaderBuilder::new()
        .has_headers(false)
        .flexible(true)
        .trim(csv::Trim::All)
        .from_reader(reader);
    let mut records = csv.records();
    let header = match records.next() {
        Some(r) => r.map_err(|e| format_error(1, e))?,
        None => {
            return Err(Error::Format {
                row: 1,
                message: "empty file".into(),
            })
        }
    };
    if !header
        .get(0)
        .is_some_and(|h| h.eq_ignore_ascii_case("date"))
    {
        return Err(Error::Format {
            row: 1,
            message: "first column must be `date`".into(),
        });
    }
    let labels: Vec<String> = header.iter().skip(1).map(str::to_owned).collect();

    let mut dates = Vec::new();
    let mut rows = Vec::new();
    for (i, record) in records.enumerate() {
        let line = i + 2;
        let record = record.map_err(|e| format_error(line, e))?;
        if record.len() != header.len() {
            return Err(Error::Format {
                row: line,
                message: format!("expected {} fields, found {}", header.len(), record.len()),
            });
        }
        let date =
            NaiveDate::parse_from_str(&record[0], "%Y-%m-%d").map_err(|e| Error::Format {
                row: line,
                message: format!("bad date `{}`: {e}", &record[0]),
            })?;
        let row = record
            .iter()
            .skip(1)
            .zip(&labels)
            .map(|(field, label)| {
                if field.is_empty() {
                    return Err(Error::Format {
                        row: line,
                        message: format!("missing price for `{label}`"),
                    });
                }
                field.parse::<T>().map_err(|_| Error::Format {
                    row: line,
                    message: format!("price `{field}` for `{label}` is not a number"),
                })
            })
            .collect::<Result<Vec<T>>>()?;
        dates.push(date);
        rows.push(row);
    }
    PriceSeries::new(dates, rows, labels)
}

fn format_error(row: usize, e: csv::Error) -> Error {
    Error::Format {
        row,
        message: e.to_string(),
    }
}

/// Number of whole weekly blocks in `n_days` trading days.
pub fn weekly_block_count(n_days: usize) -> usize {
    n_days.saturating_sub(1) / TRADING_DAYS_PER_WEEK
}

/// Equiprobable scenario set of non-overlapping 5-trading-day simple returns.
pub fn weekly_returns<T: Scalar>(series: &PriceSeries<T>) -> Result<ScenarioSet<T>> {
    let blocks = weekly_block_count(series.n_days());
    if blocks == 0 {
        return Err(Error::InsufficientData(format!(
            "{} trading days; need at least {}",
            series.n_days(),
            TRADING_DAYS_PER_WEEK + 1
        )));
    }
    let rows = (0..blocks)
        .map(|k| {
            let start = series.day(k * TRADING_DAYS_PER_WEEK);
            let end = series.day((k + 1) * TRADING_DAYS_PER_WEEK);
            end.iter()
                .zip(start)
                .map(|(&e, &s)| e / s - T::one())
                .collect()
        })
        .collect();
    ScenarioSet::equiprobable(rows, series.labels().to_vec())
}

#[cfg(test)]
mod tests {
    use super::*;

    fn series(prices: &[f64]) -> PriceSeries<f64> {
        let start = NaiveDate::from_ymd_opt(2009, 1, 2).unwrap();
        let dates = (0..prices.len())
            .map(|i| start + chrono::Days::new(i as u64))
            .collect();
        PriceSeries::new(
            dates,
            prices.iter().map(|&p| vec![p]).collect(),
            vec!["AA".into()],
        )
        .unwrap()
    }

    #[test]
    fn minimal_file() {
        let s: PriceSeries<f64> =
            read_prices("date,AA,AXP\n2009-01-02,10.5,20\n2009-01-05,10.7,19.5\n".as_bytes())
                .unwrap();
        assert_eq!(s.n_days(), 2);
        assert_eq!(s.n_assets(), 2);
        assert_eq!(s.day(1), &[10.7, 19.5]);
    }

    #[test]
    fn zero_price_names_cell() {
        let err =
            read_prices::<f64, _>("date,AA,AXP\n2009-01-02,10.5,0.0\n".as_bytes()).unwrap_err();
        match err {
            Error::Format { row, message } => {
                assert_eq!(row, 2);
                assert!(message.contains("AXP"), "{message}");
            }
            other => panic!("{other:?}"),
        }
    }

    #[test]
    fn malformed_rows() {
        let cases = [
            ("", 1),
            ("date,AA\n2009-01-05,1\n2009-01-02,1\n", 3),
            ("date,AA\n2009-01-02,1\n2009-01-02,1\n", 3),
            ("date,AA,BA\n2009-01-02,1\n", 2),
            ("date,AA,BA\n2009-01-02,1,\n", 2),
            ("date,AA\n02/01/2009,1\n", 2),
            ("when,AA\n2009-01-02,1\n", 1),
        ];
        for (text, want) in cases {
            match read_prices::<f64, _>(text.as_bytes()) {
                Err(Error::Format { row, .. }) => assert_eq!(row, want, "{text:?}"),
                other => panic!("{text:?}: {other:?}"),
            }
        }
    }

    #[test]
    fn missing_file_is_io_error() {
        assert!(matches!(
            load_prices::<f64>("/nonexistent/prices.csv"),
            Err(Error::Io { .. })
        ));
    }

    #[test]
    fn one_block() {
        let set = weekly_returns(&series(&[100.0, 101.0, 99.0, 102.0, 103.0, 110.0])).unwrap();
        assert_eq!(set.n_scenarios(), 1);
        assert!((set.scenario(0)[0] - 0.10).abs() < 1e-15);
        assert_eq!(set.probabilities(), &[1.0]);
    }

    #[test]
    fn constant_prices_give_zero_returns() {
        let set = weekly_returns(&series(&[42.0; 16])).unwrap();
        assert_eq!(set.n_scenarios(), 3);
        assert!(set.scenarios().all(|r| r == [0.0]));
    }

    #[test]
    fn block_count() {
        assert_eq!(weekly_block_count(252), 50);
        assert_eq!(weekly_block_count(6), 1);
        assert_eq!(weekly_block_count(5), 0);
        let prices: Vec<f64> = (0..252).map(|i| 100.0 + i as f64).collect();
        let set = weekly_returns(&series(&prices)).unwrap();
        assert_eq!(set.n_scenarios(), 50);
        assert!((set.scenario(49)[0] - (350.0 / 345.0 - 1.0)).abs() < 1e-15);
    }

    #[test]
    fn too_short() {
        assert!(matches!(
            weekly_returns(&series(&[1.0; 5])),
            Err(Error::InsufficientData(_))
        ));
    }
}
