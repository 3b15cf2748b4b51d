//! Input and output formats.
//!
//! Inputs are either CSV (one point per line, comma-separated coordinates,
//! `#` comments) or JSON: `{"points": [[...]], "metric": "l2"}` or
//! `{"matrix": [[...]]}`.

use findim::metric::MetricOptions;
use findim::{FiniteMetric, Norm, PointCloud};
use serde::{Deserialize, Serialize};
use sha2::{Digest, Sha256};

use crate::CliError;

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(untagged)]
pub enum JsonInput {
    Points {
        points: Vec<Vec<f64>>,
        #[serde(default)]
        metric: Option<Norm>,
    },
    Matrix {
        matrix: Vec<Vec<f64>>,
    },
}

#[derive(Debug, Clone, PartialEq)]
pub enum Input {
    Points(PointCloud),
    Matrix(Vec<Vec<f64>>),
}

#[derive(Debug, Clone, Copy, Default)]
pub struct LoadOptions {
    /// Overrides the metric named in the file.
    pub metric: Option<Norm>,
    pub tolerance: Option<f64>,
    /// Reject distance matrices that violate the triangle inequality.
    pub strict_metric: bool,
}

pub fn digest(bytes: &[u8]) -> String {
    format!("{:x}", Sha256::digest(bytes))
}

pub fn parse_csv_points(text: &str) -> Result<Vec<Vec<f64>>, CliError> {
    let mut reader = csv::ReaderBuilder::new()
        .has_headers(false)
        .comment(Some(b'#'))
        .trim(csv::Trim::All)
        .flexible(true)
        .from_reader(text.as_bytes());
    let mut points = Vec::new();
    for (line, rec) in reader.records().enumerate() {
        let rec = rec.map_err(|e| CliError::Input(e.to_string()))?;
        if rec.iter().all(str::is_empty) {
            continue;
        }
        let p = rec
            .iter()
            .map(|f| {
                f.parse::<f64>().map_err(|_| CliError::Input(format!("record {}: '{f}' is not a number", line + 1)))
            })
            .collect::<Result<Vec<_>, _>>()?;
        points.push(p);
    }
    Ok(points)
}

pub fn parse_input(text: &str, metric: Option<Norm>) -> Result<Input, CliError> {
    if text.trim_start().starts_with('{') {
        let json: JsonInput =
            serde_json::from_str(text).map_err(|e| CliError::Input(format!("bad JSON input: {e}")))?;
        Ok(match json {
            JsonInput::Points { points, metric: file } => {
                Input::Points(PointCloud::new(points, metric.or(file).unwrap_or(Norm::L2)))
            }
            JsonInput::Matrix { matrix } => {
                if metric.is_some() {
                    log::warn!("--metric is ignored for distance-matrix input");
                }
                Input::Matrix(matrix)
            }
        })
    } else {
        Ok(Input::Points(PointCloud::new(parse_csv_points(text)?, metric.unwrap_or(Norm::L2))))
    }
}

pub fn to_metric(input: &Input, opts: LoadOptions) -> Result<FiniteMetric, CliError> {
    let m = match input {
        Input::Points(pc) => FiniteMetric::from_points(pc, opts.tolerance)?,
        Input::Matrix(rows) => {
            let m = FiniteMetric::from_matrix(
                rows,
                MetricOptions { tolerance: opts.tolerance, check_triangle: opts.strict_metric },
            )?;
            if let Some((i, j, k)) = m.triangle_violation() {
                log::warn!("triangle inequality fails at ({i}, {j}, {k}); results may be meaningless");
            }
            m
        }
    };
    Ok(m)
}

pub fn load(text: &str, opts: LoadOptions) -> Result<FiniteMetric, CliError> {
    to_metric(&parse_input(text, opts.metric)?, opts)
}

pub fn points_to_csv(pc: &PointCloud) -> Result<String, CliError> {
    let mut w = csv::Writer::from_writer(Vec::new());
    for p in &pc.points {
        w.write_record(p.iter().map(|x| x.to_string())).map_err(|e| CliError::Output(e.to_string()))?;
    }
    let bytes = w.into_inner().map_err(|e| CliError::Output(e.to_string()))?;
    Ok(String::from_utf8(bytes).expect("csv output is utf-8"))
}

pub fn points_to_json(pc: &PointCloud) -> String {
    let v = JsonInput::Points { points: pc.points.clone(), metric: Some(pc.norm) };
    serde_json::to_string_pretty(&v).expect("points serialize")
}

pub fn matrix_to_json(m: &FiniteMetric) -> String {
    serde_json::to_string_pretty(&JsonInput::Matrix { matrix: m.to_rows() }).expect("matrix serializes")
}
