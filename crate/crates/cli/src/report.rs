//! CSV emission.
//!
//! Every file starts with a `#` comment line naming the units, followed by a
//! header row. Floats are written with 17 significant digits so the text
//! round-trips bit for bit.

use std::fs;
use std::path::{Path, PathBuf};
use std::time::{SystemTime, UNIX_EPOCH};

use galaxy_contagion::risk::LossSample;

use crate::error::CliError;

pub fn fmt_f64(x: f64) -> String {
    if x.is_nan() {
        "NaN".to_string()
    } else {
        format!("{x:.16e}")
    }
}

/// Rows of string cells under a comment line and a header.
pub struct Table {
    comment: String,
    header: Vec<String>,
    rows: Vec<Vec<String>>,
}

impl Table {
    pub fn new(comment: &str, header: &[&str]) -> Self {
        Table { comment: comment.to_string(), header: header.iter().map(|s| s.to_string()).collect(), rows: Vec::new() }
    }

    pub fn push(&mut self, row: Vec<String>) {
        debug_assert_eq!(row.len(), self.header.len());
        self.rows.push(row);
    }

    pub fn to_bytes(&self) -> Vec<u8> {
        let mut out = format!("# {}\n", self.comment).into_bytes();
        let mut writer = csv::Writer::from_writer(&mut out);
        // Writing into memory cannot fail.
        writer.write_record(&self.header).expect("in-memory csv");
        for row in &self.rows {
            writer.write_record(row).expect("in-memory csv");
        }
        writer.flush().expect("in-memory csv");
        drop(writer);
        out
    }

    pub fn write(&self, path: &Path) -> Result<(), CliError> {
        fs::write(path, self.to_bytes()).map_err(|source| CliError::Io { path: path.to_path_buf(), source })
    }
}

/// Picks the directory a command writes into. An empty or missing `base` is
/// used as is, and so is a populated one when `overwrite` is set; otherwise
/// a fresh timestamped subdirectory keeps earlier outputs untouched.
pub fn prepare_output_dir(base: &Path, overwrite: bool) -> Result<PathBuf, CliError> {
    let populated = match fs::read_dir(base) {
        Ok(mut entries) => entries.next().is_some(),
        Err(e) if e.kind() == std::io::ErrorKind::NotFound => false,
        Err(source) => return Err(CliError::Io { path: base.to_path_buf(), source }),
    };
    let dir = if populated && !overwrite {
        let stamp = SystemTime::now().duration_since(UNIX_EPOCH).map(|d| d.as_nanos()).unwrap_or(0);
        base.join(format!("run-{stamp}"))
    } else {
        base.to_path_buf()
    };
    fs::create_dir_all(&dir).map_err(|source| CliError::Io { path: dir.clone(), source })?;
    Ok(dir)
}

pub fn losses_table(samples: &[LossSample]) -> Table {
    let mut table = Table::new(
        "amounts in QUINTILLION dollars (Q); one row per scenario",
        &[
            "scenario_index",
            "real_economy_loss",
            "insurance_payout",
            "n_defaults",
            "central_defaults",
            "massive_defaults",
            "big_defaults",
            "central_shortfall",
        ],
    );
    for s in samples {
        table.push(vec![
            s.scenario_index.to_string(),
            fmt_f64(s.real_economy_loss.0),
            fmt_f64(s.insurance_payout.0),
            s.n_defaults.to_string(),
            s.tier_defaults[0].to_string(),
            s.tier_defaults[1].to_string(),
            s.tier_defaults[2].to_string(),
            fmt_f64(s.central_shortfall.0),
        ]);
    }
    table
}

/// Equal-width bin counts over `[0, upper]`; the last bin is closed.
pub fn histogram(values: &[f64], upper: f64, bins: usize) -> Vec<usize> {
    let mut counts = vec![0; bins];
    let width = if upper > 0.0 { upper / bins as f64 } else { 1.0 };
    for &v in values {
        let i = ((v / width).floor() as usize).min(bins - 1);
        counts[i] += 1;
    }
    counts
}
