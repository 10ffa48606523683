use std::fs::File;
use std::path::{Path, PathBuf};

use serde::{Deserialize, Serialize};

use super::{EpisodeResult, HarnessError};
use crate::arena::Outcome;

pub const METRICS_HEADER: &str =
    "episode,win_rate_window,mean_steps_to_win_window,mean_return_window,eval_win_rate";

/// One training-curve sample; absent values are blank cells.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct MetricsRow {
    pub episode: u64,
    pub win_rate_window: f64,
    pub mean_steps_to_win_window: Option<f64>,
    pub mean_return_window: f64,
    pub eval_win_rate: Option<f64>,
}

/// Win rate, mean steps over wins, and mean return over the trailing
/// `window` results ending at (and including) index `last`.
pub fn window_stats(results: &[EpisodeResult], last: usize, window: usize) -> (f64, Option<f64>, f64) {
    let start = (last + 1).saturating_sub(window);
    let slice = &results[start..=last];
    let n = slice.len() as f64;
    let wins: Vec<&EpisodeResult> = slice.iter().filter(|r| r.outcome == Outcome::TeamWin).collect();
    let win_rate = wins.len() as f64 / n;
    let mean_steps = (!wins.is_empty()).then(|| wins.iter().map(|r| r.steps as f64).sum::<f64>() / wins.len() as f64);
    let mean_return = slice.iter().map(|r| r.episode_return).sum::<f64>() / n;
    (win_rate, mean_steps, mean_return)
}

pub struct MetricsWriter {
    path: PathBuf,
    inner: csv::Writer<File>,
}

impl MetricsWriter {
    /// Creates (truncating) the metrics file and writes the header.
    pub fn create(path: impl AsRef<Path>) -> Result<Self, HarnessError> {
        let path = path.as_ref().to_path_buf();
        let file = File::create(&path).map_err(|e| HarnessError::io(&path, e))?;
        let mut inner = csv::WriterBuilder::new().has_headers(false).from_writer(file);
        inner
            .write_record(METRICS_HEADER.split(','))
            .map_err(|e| csv_io(&path, e))?;
        inner.flush().map_err(|e| HarnessError::io(&path, e))?;
        Ok(Self { path, inner })
    }

    pub fn append(&mut self, row: &MetricsRow) -> Result<(), HarnessError> {
        self.inner.serialize(row).map_err(|e| csv_io(&self.path, e))?;
        self.inner.flush().map_err(|e| HarnessError::io(&self.path, e))
    }
}

pub fn write_metrics_header(path: impl AsRef<Path>) -> Result<(), HarnessError> {
    MetricsWriter::create(path).map(|_| ())
}

fn csv_io(path: &Path, e: csv::Error) -> HarnessError {
    let line = e.position().map(|p| p.line()).unwrap_or(0);
    match e.into_kind() {
        csv::ErrorKind::Io(io) => HarnessError::io(path, io),
        other => HarnessError::Csv {
            path: path.to_path_buf(),
            line,
            message: format!("{other:?}"),
        },
    }
}

/// Parses a metrics file, checking the exact header.
pub fn read_metrics(path: impl AsRef<Path>) -> Result<Vec<MetricsRow>, HarnessError> {
    let path = path.as_ref();
    let file = File::open(path).map_err(|e| HarnessError::io(path, e))?;
    let mut reader = csv::ReaderBuilder::new().has_headers(true).from_reader(file);
    let header = reader.headers().map_err(|e| csv_io(path, e))?;
    let found: Vec<&str> = header.iter().collect();
    if found.join(",") != METRICS_HEADER {
        return Err(HarnessError::Csv {
            path: path.to_path_buf(),
            line: 1,
            message: format!("unexpected header {:?}, expected {METRICS_HEADER:?}", found.join(",")),
        });
    }
    let mut rows = Vec::new();
    for rec in reader.deserialize::<MetricsRow>() {
        let row = rec.map_err(|e| {
            let line = e.position().map(|p| p.line()).unwrap_or(0);
            HarnessError::Csv {
                path: path.to_path_buf(),
                line,
                message: e.to_string(),
            }
        })?;
        rows.push(row);
    }
    Ok(rows)
}

#[cfg(test)]
mod tests {
    use super::*;

    fn r(outcome: Outcome, steps: u32, ret: f64) -> EpisodeResult {
        EpisodeResult {
            outcome,
            steps,
            episode_return: ret,
        }
    }

    #[test]
    fn trailing_window() {
        let results = vec![
            r(Outcome::TeamWin, 10, 1.0),
            r(Outcome::Draw, 500, -1.0),
            r(Outcome::TeamWin, 30, 3.0),
            r(Outcome::TeamLose, 5, -5.0),
        ];
        assert_eq!(window_stats(&results, 0, 3), (1.0, Some(10.0), 1.0));
        assert_eq!(window_stats(&results, 3, 3), (1.0 / 3.0, Some(30.0), -1.0));
        assert_eq!(window_stats(&results, 3, 100), (0.5, Some(20.0), -0.5));
        let (w, s, _) = window_stats(&results[1..2], 0, 100);
        assert_eq!((w, s), (0.0, None));
    }

    #[test]
    fn write_then_read() {
        let dir = tempfile::tempdir().unwrap();
        let path = dir.path().join("m.csv");
        let mut w = MetricsWriter::create(&path).unwrap();
        let rows = vec![
            MetricsRow {
                episode: 1,
                win_rate_window: 0.0,
                mean_steps_to_win_window: None,
                mean_return_window: -12.5,
                eval_win_rate: None,
            },
            MetricsRow {
                episode: 2,
                win_rate_window: 0.5,
                mean_steps_to_win_window: Some(41.0),
                mean_return_window: 3.25,
                eval_win_rate: Some(0.8),
            },
        ];
        for row in &rows {
            w.append(row).unwrap();
        }
        drop(w);
        let text = std::fs::read_to_string(&path).unwrap();
        let mut lines = text.lines();
        assert_eq!(lines.next(), Some(METRICS_HEADER));
        assert_eq!(lines.next(), Some("1,0.0,,-12.5,"));
        assert_eq!(read_metrics(&path).unwrap(), rows);
    }

    #[test]
    fn malformed_rows_report_line() {
        let dir = tempfile::tempdir().unwrap();
        let path = dir.path().join("m.csv");
        std::fs::write(&path, format!("{METRICS_HEADER}\n1,0.5,,1.0,\n2,abc,,1.0,\n")).unwrap();
        match read_metrics(&path) {
            Err(HarnessError::Csv { line, .. }) => assert_eq!(line, 3),
            other => panic!("{other:?}"),
        }
        std::fs::write(&path, "episode,win\n").unwrap();
        assert!(matches!(read_metrics(&path), Err(HarnessError::Csv { line: 1, .. })));
    }
}
