//! CSV, JSON metadata and gnuplot script for a finished sweep.
//!
//! Everything written here is a pure function of the configuration and the
//! computed rows, so reruns produce byte-identical files.

use std::fmt::Write as _;
use std::fs;
use std::path::{Path, PathBuf};

use anyhow::Context;
use serde::Serialize;
use spinpump_core::pump::Normalization;

use crate::config::{Observable, RunConfig};
use crate::sweep::SweepResult;

pub const VERSION: &str = env!("CARGO_PKG_VERSION");

/// Fixed-width scientific notation; NaN for flagged or undefined entries.
pub fn fmt_value(v: f64) -> String {
    if v.is_nan() {
        "nan".to_string()
    } else {
        format!("{v:.12e}")
    }
}

fn normalization_label(n: Normalization) -> &'static str {
    match n {
        Normalization::Absolute => "absolute",
        Normalization::PerI0 => "per-i0",
    }
}

pub fn render_csv(config: &RunConfig, result: &SweepResult) -> String {
    let mut out = String::new();
    writeln!(out, "# spinpump {VERSION}").unwrap();
    for (key, value) in config.echo() {
        writeln!(out, "# {key} = {value}").unwrap();
    }
    writeln!(out, "# normalization = {}", normalization_label(result.normalization)).unwrap();
    writeln!(out, "# flagged = {}", result.flagged()).unwrap();
    let mut header: Vec<&str> = result.columns.to_vec();
    header.push("status");
    writeln!(out, "{}", header.join(",")).unwrap();
    for row in &result.rows {
        let mut fields = vec![fmt_value(row.x)];
        fields.extend(row.values.iter().map(|&v| fmt_value(v)));
        fields.push(match &row.error {
            None => "ok".to_string(),
            Some(e) => format!("\"error: {}\"", e.replace('"', "'")),
        });
        writeln!(out, "{}", fields.join(",")).unwrap();
    }
    out
}

#[derive(Serialize)]
struct Metadata<'a> {
    name: &'a str,
    version: &'a str,
    model: String,
    mode: String,
    observable: String,
    axis: String,
    points: usize,
    flagged: usize,
    normalization: &'static str,
    columns: Vec<&'a str>,
    data: String,
    plot: String,
    parameters: serde_json::Map<String, serde_json::Value>,
    errors: Vec<FlaggedPoint<'a>>,
}

#[derive(Serialize)]
struct FlaggedPoint<'a> {
    x: f64,
    error: &'a str,
}

pub fn render_metadata(config: &RunConfig, result: &SweepResult) -> String {
    let parameters = config
        .params
        .echo()
        .into_iter()
        .filter(|(k, _)| *k != config.axis.as_str())
        .map(|(k, v)| {
            let value = v
                .parse::<u64>()
                .ok()
                .map(serde_json::Value::from)
                .or_else(|| v.parse::<f64>().ok().and_then(serde_json::Number::from_f64).map(serde_json::Value::Number))
                .or_else(|| v.parse::<bool>().ok().map(serde_json::Value::Bool))
                .unwrap_or(serde_json::Value::String(v));
            (k.to_string(), value)
        })
        .collect();
    let meta = Metadata {
        name: &config.name,
        version: VERSION,
        model: config.model.to_string(),
        mode: config.mode.to_string(),
        observable: config.observable.to_string(),
        axis: config.axis.to_string(),
        points: result.rows.len(),
        flagged: result.flagged(),
        normalization: normalization_label(result.normalization),
        columns: result.columns.to_vec(),
        data: format!("{}.csv", config.name),
        plot: format!("{}.gp", config.name),
        parameters,
        errors: result
            .rows
            .iter()
            .filter_map(|r| r.error.as_deref().map(|error| FlaggedPoint { x: r.x, error }))
            .collect(),
    };
    let mut text = serde_json::to_string_pretty(&meta).expect("metadata serializes");
    text.push('\n');
    text
}

pub fn render_gnuplot(config: &RunConfig, result: &SweepResult) -> String {
    let column = |name: &str| result.columns.iter().position(|c| *c == name).expect("known column") + 1;
    let (ylabel, series): (&str, Vec<(&str, &str)>) = match config.observable {
        Observable::Current => (
            match result.normalization {
                Normalization::PerI0 => "I / I0",
                Normalization::Absolute => "I / (e omega)",
            },
            vec![("i_up", "up"), ("i_down", "down"), ("i_spin", "spin"), ("i_charge", "charge")],
        ),
        Observable::Heat => ("heat current", vec![("h", "H"), ("j", "J"), ("n", "N")]),
    };
    let mut out = String::new();
    writeln!(out, "# spinpump {VERSION}: {}", config.name).unwrap();
    writeln!(out, "set datafile separator ','").unwrap();
    writeln!(out, "set datafile commentschars '#'").unwrap();
    writeln!(out, "set key autotitle columnhead").unwrap();
    writeln!(out, "set xlabel '{}'", config.axis).unwrap();
    writeln!(out, "set ylabel '{ylabel}'").unwrap();
    writeln!(out, "set terminal pngcairo size 900,600").unwrap();
    writeln!(out, "set output '{}.png'", config.name).unwrap();
    let plots: Vec<String> = series
        .iter()
        .map(|(name, title)| format!("'{}.csv' using 1:{} with lines title '{title}'", config.name, column(name)))
        .collect();
    writeln!(out, "plot {}", plots.join(", \\\n     ")).unwrap();
    out
}

#[derive(Debug, Clone)]
pub struct WrittenFiles {
    pub csv: PathBuf,
    pub metadata: PathBuf,
    pub plot: PathBuf,
}

pub fn write_all(config: &RunConfig, result: &SweepResult, dir: &Path) -> anyhow::Result<WrittenFiles> {
    fs::create_dir_all(dir).with_context(|| format!("creating {}", dir.display()))?;
    let files = WrittenFiles {
        csv: dir.join(format!("{}.csv", config.name)),
        metadata: dir.join(format!("{}.json", config.name)),
        plot: dir.join(format!("{}.gp", config.name)),
    };
    for (path, text) in [
        (&files.csv, render_csv(config, result)),
        (&files.metadata, render_metadata(config, result)),
        (&files.plot, render_gnuplot(config, result)),
    ] {
        fs::write(path, text).with_context(|| format!("writing {}", path.display()))?;
    }
    Ok(files)
}
