//! Subcommand bodies. Each returns the text to write.

use std::ops::RangeInclusive;

use findim::approximation::{convergence_table, ConvergenceInput, ConvergenceOptions, CubeOracle, FractalOracle};
use findim::generators::{Family, FamilySpec, Generated};
use findim::transforms::{holder_transform, HolderParams};
use serde::{Deserialize, Serialize};

use crate::io::{self, LoadOptions};
use crate::report::{analyze, report_to_csv, AnalyzeOptions};
use crate::CliError;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub enum Format {
    Json,
    Csv,
}

impl std::str::FromStr for Format {
    type Err = String;
    fn from_str(s: &str) -> Result<Self, String> {
        match s {
            "json" => Ok(Format::Json),
            "csv" => Ok(Format::Csv),
            _ => Err(format!("unknown format '{s}' (expected json or csv)")),
        }
    }
}

pub fn cmd_analyze(text: &str, load: LoadOptions, opts: AnalyzeOptions, format: Format) -> Result<String, CliError> {
    let m = io::load(text, load)?;
    let report = analyze(&m, io::digest(text.as_bytes()), opts)?;
    Ok(match format {
        Format::Json => serde_json::to_string_pretty(&report).expect("report serializes") + "\n",
        Format::Csv => report_to_csv(&report),
    })
}

/// Points as CSV or JSON; distance-matrix families are JSON only.
pub fn cmd_generate(
    family: Family,
    level: u32,
    parameter: Option<f64>,
    format: Option<Format>,
) -> Result<String, CliError> {
    let mut spec = FamilySpec::new(family, level);
    if let Some(p) = parameter {
        spec = spec.with_parameter(p);
    }
    let generated = spec.generate()?;
    match (generated.to_cloud(), format) {
        (Some(pc), Some(Format::Csv) | None) => io::points_to_csv(&pc),
        (Some(pc), Some(Format::Json)) => Ok(io::points_to_json(&pc) + "\n"),
        (None, Some(Format::Csv)) => {
            Err(CliError::Input(format!("family '{family}' yields a distance matrix; use --format json")))
        }
        (None, _) => {
            let Generated::Matrix(m) = generated else { unreachable!("only matrices lack coordinates") };
            Ok(io::matrix_to_json(&m) + "\n")
        }
    }
}

/// Parses `a..b` or `a..=b` (both inclusive) or a single level.
pub fn parse_levels(s: &str) -> Result<RangeInclusive<u32>, CliError> {
    let bad = || CliError::Input(format!("bad level range '{s}' (expected e.g. 2..5)"));
    let (a, b) = match s.split_once("..") {
        Some((a, b)) => (a, b.trim_start_matches('=')),
        None => (s, s),
    };
    let (a, b) = (a.trim().parse().map_err(|_| bad())?, b.trim().parse().map_err(|_| bad())?);
    if a > b {
        return Err(bad());
    }
    Ok(a..=b)
}

pub fn cmd_converge(
    family: Family,
    levels: RangeInclusive<u32>,
    grid: bool,
    opts: ConvergenceOptions,
    format: Format,
) -> Result<String, CliError> {
    let oracle = match grid {
        true => Some(
            FractalOracle::for_family(family)
                .ok_or_else(|| CliError::Input(format!("family '{family}' has no cube oracle")))?,
        ),
        false => None,
    };
    let (input, opts) = match &oracle {
        Some(o) => {
            let base = if matches!(o, FractalOracle::Sierpinski | FractalOracle::Tetra) { 2.0 } else { 3.0 };
            (ConvergenceInput::Oracle(o as &dyn CubeOracle), ConvergenceOptions { ratio: 1.0 / base, ..opts })
        }
        None => (ConvergenceInput::Family(family), opts),
    };
    let table = convergence_table(input, levels, opts)?;
    if !table.gap_strictly_decreasing() {
        log::warn!("gap to the limit is not strictly decreasing at levels {:?}", table.monotone_violations);
    }
    Ok(match format {
        Format::Csv => table.to_csv()?,
        Format::Json => serde_json::to_string_pretty(&table).expect("table serializes") + "\n",
    })
}

/// The transformed space as a distance matrix.
pub fn cmd_transform(text: &str, load: LoadOptions, r: f64, beta: f64, format: Format) -> Result<String, CliError> {
    let m = io::load(text, load)?;
    let image = holder_transform(&m, HolderParams::new(r, beta)?, load.strict_metric)?;
    Ok(match format {
        Format::Json => io::matrix_to_json(&image) + "\n",
        Format::Csv => {
            let mut w = csv::Writer::from_writer(Vec::new());
            for row in image.to_rows() {
                w.write_record(row.iter().map(|x| x.to_string())).map_err(|e| CliError::Output(e.to_string()))?;
            }
            String::from_utf8(w.into_inner().map_err(|e| CliError::Output(e.to_string()))?).expect("utf-8")
        }
    })
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn levels() {
        assert_eq!(parse_levels("2..5").unwrap(), 2..=5);
        assert_eq!(parse_levels("2..=5").unwrap(), 2..=5);
        assert_eq!(parse_levels("3").unwrap(), 3..=3);
        assert!(parse_levels("5..2").is_err());
        assert!(parse_levels("a..b").is_err());
    }

    #[test]
    fn generate_cantor_three() {
        let out = cmd_generate(Family::Cantor, 3, None, None).unwrap();
        assert_eq!(out.lines().count(), 8);
    }

    #[test]
    fn transform_folds_linear_four() {
        let out = cmd_transform("0\n1\n2\n3\n", LoadOptions::default(), 1.0, 0.5, Format::Csv).unwrap();
        let first: Vec<f64> = out.lines().next().unwrap().split(',').map(|x| x.parse().unwrap()).collect();
        assert_eq!(first, vec![0.0, 1.0, 2f64.sqrt(), 3f64.sqrt()]);
    }
}
