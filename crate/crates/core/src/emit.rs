//! CSV, JSON and gnuplot output.

use std::fmt::Write as _;
use std::fs;
use std::path::{Path, PathBuf};

use serde::Serialize;

use crate::config::EmitSpec;
use crate::error::{Result, WalkError};
use crate::experiment::{PresetResult, RunResult, Series};

const SIGNIFICANT_DIGITS: usize = 12;

/// `%.12g`-style formatting: 12 significant digits, trailing zeros trimmed,
/// scientific notation for very small or large magnitudes.
pub fn format_significant(x: f64) -> String {
    if x == 0.0 {
        return "0".into();
    }
    if !x.is_finite() {
        return x.to_string();
    }
    let sci = format!("{:.*e}", SIGNIFICANT_DIGITS - 1, x);
    let (mantissa, exp) = sci.split_once('e').expect("exponent present");
    let exp: i32 = exp.parse().expect("integer exponent");
    if exp < -5 || exp >= SIGNIFICANT_DIGITS as i32 {
        let mantissa = trim_zeros(mantissa);
        format!(
            "{mantissa}e{}{:02}",
            if exp < 0 { '-' } else { '+' },
            exp.abs()
        )
    } else {
        let decimals = (SIGNIFICANT_DIGITS as i32 - 1 - exp).max(0) as usize;
        trim_zeros(&format!("{x:.decimals$}")).to_string()
    }
}

fn trim_zeros(s: &str) -> &str {
    if s.contains('.') {
        s.trim_end_matches('0').trim_end_matches('.')
    } else {
        s
    }
}

/// One row per site in ascending order. Zero rows are dropped unless
/// `include_zero_rows`.
pub fn csv_string(run: &RunResult, include_zero_rows: bool) -> Option<String> {
    let (header, rows): (&str, Vec<(i64, f64)>) = match run.series()? {
        Series::Distribution(d) => ("position,probability", d.iter().collect()),
        Series::Profile(p) => ("position,n_j", p.iter().collect()),
    };
    let mut out = String::with_capacity(32 * rows.len());
    out.push_str(header);
    out.push('\n');
    for (j, value) in rows {
        if value == 0.0 && !include_zero_rows {
            continue;
        }
        writeln!(out, "{j},{}", format_significant(value)).unwrap();
    }
    Some(out)
}

pub fn json_string<T: Serialize>(value: &T) -> String {
    let mut s = serde_json::to_string_pretty(value).expect("result records serialize");
    s.push('\n');
    s
}

/// One overlay curve in a gnuplot script.
pub struct PlotCurve {
    pub csv: PathBuf,
    pub title: String,
}

pub fn plot_script(title: &str, ylabel: &str, curves: &[PlotCurve]) -> String {
    let mut s = String::new();
    writeln!(
        s,
        "# gnuplot script; run from the directory holding the CSV files"
    )
    .unwrap();
    writeln!(s, "set datafile separator ','").unwrap();
    writeln!(s, "set key autotitle columnhead").unwrap();
    writeln!(s, "set title '{}'", title.replace('\'', "''")).unwrap();
    writeln!(s, "set xlabel 'lattice site j'").unwrap();
    writeln!(s, "set ylabel '{ylabel}'").unwrap();
    let plots: Vec<String> = curves
        .iter()
        .map(|c| {
            format!(
                "'{}' using 1:2 with linespoints title '{}'",
                c.csv.display(),
                c.title.replace('\'', "''")
            )
        })
        .collect();
    writeln!(s, "plot {}", plots.join(", \\\n     ")).unwrap();
    s
}

fn write_file(path: &Path, contents: &str) -> Result<()> {
    if let Some(parent) = path.parent().filter(|p| !p.as_os_str().is_empty()) {
        fs::create_dir_all(parent).map_err(|source| WalkError::Io {
            path: parent.to_path_buf(),
            source,
        })?;
    }
    fs::write(path, contents).map_err(|source| WalkError::Io {
        path: path.to_path_buf(),
        source,
    })
}

fn ylabel(run: &RunResult) -> &'static str {
    if run.profile.is_some() {
        "n_j"
    } else {
        "probability"
    }
}

/// Writes the files named in `spec` for a single run and returns their paths.
pub fn emit(run: &RunResult, spec: &EmitSpec) -> Result<Vec<PathBuf>> {
    let mut written = Vec::new();
    if let Some(path) = &spec.csv_path {
        let csv = csv_string(run, spec.include_zero_rows).ok_or_else(|| {
            WalkError::InvalidParameter(
                "csv output needs a `distribution` or `profile` in outputs".into(),
            )
        })?;
        write_file(path, &csv)?;
        written.push(path.clone());
    }
    if let Some(path) = &spec.json_path {
        write_file(path, &json_string(run))?;
        written.push(path.clone());
    }
    if let Some(path) = &spec.plot_script {
        let csv = spec.csv_path.as_ref().ok_or_else(|| {
            WalkError::InvalidParameter("plot_script needs csv_path to reference".into())
        })?;
        // reference the CSV relative to the script when they share a directory
        let csv_ref = match (csv.parent(), path.parent()) {
            (Some(a), Some(b)) if a == b => PathBuf::from(csv.file_name().unwrap_or_default()),
            _ => csv.clone(),
        };
        let curve = PlotCurve {
            csv: csv_ref,
            title: run.label.clone(),
        };
        write_file(path, &plot_script(&run.label, ylabel(run), &[curve]))?;
        written.push(path.clone());
    }
    Ok(written)
}

fn file_stem(preset: &str, label: &str) -> String {
    let clean: String = label
        .chars()
        .map(|c| {
            if c.is_ascii_alphanumeric() || c == '-' || c == '.' {
                c
            } else {
                '_'
            }
        })
        .collect();
    format!("{preset}_{clean}")
}

/// Writes `<preset>_<label>.csv` per run, `<preset>.json` and an overlay
/// `<preset>.gp` into `out_dir`.
pub fn emit_preset(
    result: &PresetResult,
    out_dir: &Path,
    include_zero_rows: bool,
) -> Result<Vec<PathBuf>> {
    let mut written = Vec::new();
    let mut curves = Vec::new();
    for run in &result.runs {
        if let Some(csv) = csv_string(run, include_zero_rows) {
            let name = format!("{}.csv", file_stem(&result.preset, &run.label));
            let path = out_dir.join(&name);
            write_file(&path, &csv)?;
            written.push(path);
            curves.push(PlotCurve {
                csv: PathBuf::from(name),
                title: run.label.clone(),
            });
        }
    }
    let json = out_dir.join(format!("{}.json", result.preset));
    write_file(&json, &json_string(result))?;
    written.push(json);
    if !curves.is_empty() {
        let ylabel = result.runs.first().map(ylabel).unwrap_or("probability");
        let gp = out_dir.join(format!("{}.gp", result.preset));
        write_file(&gp, &plot_script(&result.preset, ylabel, &curves))?;
        written.push(gp);
    }
    Ok(written)
}
