//! Repeated generation runs over a grid of cells, reporting code sizes.

use std::fmt::Write as _;
use std::time::{Duration, Instant};

use anyhow::{bail, Context, Result};
use chancode::codegen::{GenParams, RNG_NAME};
use chancode::{make_code, Alphabet};
use rayon::prelude::*;
use serde::Serialize;

use crate::inputs::{load_channels, load_universe};

/// Largest word length and word count run without `--no-caps`.
pub const MAX_LEN: usize = 13;
pub const MAX_COUNT: usize = 500;

/// One experiment configuration: `CHANNEL,LEN,N[,end=SUFFIX][,of]`, where
/// `CHANNEL` may join several channels with `+`.
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct Cell {
    pub channels: Vec<String>,
    pub len: usize,
    pub count: usize,
    pub end: Option<String>,
    pub overlap_free: bool,
}

impl Cell {
    pub fn parse(spec: &str) -> Result<Cell> {
        let parts: Vec<&str> = spec.split(',').map(str::trim).collect();
        if parts.len() < 3 {
            bail!("cell {spec:?} must look like CHANNEL,LEN,N[,end=SUFFIX][,of]");
        }
        let mut cell = Cell {
            channels: parts[0].split('+').map(str::to_string).collect(),
            len: parts[1]
                .parse()
                .with_context(|| format!("bad length in cell {spec:?}"))?,
            count: parts[2]
                .parse()
                .with_context(|| format!("bad N in cell {spec:?}"))?,
            end: None,
            overlap_free: false,
        };
        for opt in &parts[3..] {
            match opt.split_once('=') {
                Some(("end", suffix)) => cell.end = Some(suffix.to_string()),
                None if *opt == "of" => cell.overlap_free = true,
                _ => bail!("unknown cell option {opt:?} in {spec:?}"),
            }
        }
        Ok(cell)
    }

    pub fn label(&self) -> String {
        let mut s = self.channels.join("+");
        if let Some(e) = &self.end {
            write!(s, " end={e}").unwrap();
        }
        if self.overlap_free {
            s.push_str(" of");
        }
        s
    }
}

/// The standard grid: substitution, deletion, insertion-deletion and overlap
/// channels, plus the deletion channel restricted to words ending in `01`.
pub fn preset_table() -> Vec<Cell> {
    [
        "sub:2,7,100",
        "del1,8,100",
        "id:2,8,100",
        "ov,8,100,of",
        "del1,8,100,end=01",
    ]
    .iter()
    .map(|s| Cell::parse(s).expect("valid preset"))
    .collect()
}

#[derive(Debug, Serialize)]
pub struct CellResult {
    pub cell: Cell,
    pub sizes: Vec<u128>,
    pub exhausted: usize,
    pub min: u128,
    pub median: u128,
    pub max: u128,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub seconds: Option<f64>,
}

pub struct Config {
    pub alphabet: Alphabet,
    pub f: chancode::Ratio<u64>,
    pub eps: chancode::Ratio<u64>,
    pub seed: u64,
    pub reps: usize,
    pub caps: bool,
    pub timing: bool,
}

pub fn run(cells: &[Cell], config: &Config) -> Result<Vec<CellResult>> {
    if config.reps == 0 {
        bail!("--reps must be at least 1");
    }
    for cell in cells {
        if cell.len == 0 {
            bail!("cell {}: length must be positive", cell.label());
        }
        if config.caps && (cell.len > MAX_LEN || cell.count > MAX_COUNT) {
            bail!(
                "cell {} exceeds the default caps (length {MAX_LEN}, N {MAX_COUNT}); pass --no-caps",
                cell.label()
            );
        }
    }
    cells.iter().map(|cell| run_cell(cell, config)).collect()
}

fn run_cell(cell: &Cell, config: &Config) -> Result<CellResult> {
    let start = Instant::now();
    let channel = load_channels(&cell.channels, &config.alphabet)?;
    let universe = load_universe(
        cell.overlap_free.then_some("of"),
        cell.end.as_deref(),
        &config.alphabet,
        cell.len,
    )?;
    let outcomes: Vec<(u128, bool)> = (0..config.reps as u64)
        .into_par_iter()
        .map(|rep| {
            let params = GenParams {
                count: cell.count,
                f: config.f,
                eps: config.eps,
                seed: config.seed,
                stream: rep,
            };
            let report = make_code(
                &channel,
                None,
                &config.alphabet,
                cell.len,
                &params,
                universe.as_ref(),
            )?;
            Ok((report.size(), report.exhausted))
        })
        .collect::<chancode::Result<_>>()?;
    let sizes: Vec<u128> = outcomes.iter().map(|o| o.0).collect();
    let mut sorted = sizes.clone();
    sorted.sort_unstable();
    Ok(CellResult {
        cell: cell.clone(),
        exhausted: outcomes.iter().filter(|o| o.1).count(),
        min: sorted[0],
        median: sorted[(sorted.len() - 1) / 2],
        max: sorted[sorted.len() - 1],
        sizes,
        seconds: config.timing.then(|| start.elapsed().as_secs_f64()),
    })
}

pub fn to_text(results: &[CellResult], config: &Config) -> String {
    let mut out = String::new();
    writeln!(
        out,
        "# seed: {}  reps: {}  rng: {RNG_NAME}  f: {}  eps: {}",
        config.seed,
        config.reps,
        chancode::codegen::format_ratio(&config.f),
        chancode::codegen::format_ratio(&config.eps)
    )
    .unwrap();
    writeln!(
        out,
        "{:<20} {:>4} {:>5} {:>6} {:>6} {:>6}",
        "cell", "len", "N", "min", "median", "max"
    )
    .unwrap();
    for r in results {
        write!(
            out,
            "{:<20} {:>4} {:>5} {:>6} {:>6} {:>6}",
            r.cell.label(),
            r.cell.len,
            r.cell.count,
            r.min,
            r.median,
            r.max
        )
        .unwrap();
        if let Some(s) = r.seconds {
            write!(out, "  {}", fmt_duration(Duration::from_secs_f64(s))).unwrap();
        }
        out.push('\n');
    }
    out
}

fn fmt_duration(d: Duration) -> String {
    format!("{:.2}s", d.as_secs_f64())
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn cells() {
        let c = Cell::parse("del1+sub:2, 8, 100, end=01, of").unwrap();
        assert_eq!(c.channels, vec!["del1", "sub:2"]);
        assert_eq!((c.len, c.count), (8, 100));
        assert_eq!(c.end.as_deref(), Some("01"));
        assert!(c.overlap_free);
        assert_eq!(c.label(), "del1+sub:2 end=01 of");
        assert!(Cell::parse("del1,8").is_err());
        assert!(Cell::parse("del1,8,x").is_err());
        assert!(Cell::parse("del1,8,10,foo").is_err());
        assert_eq!(preset_table().len(), 5);
    }
}
