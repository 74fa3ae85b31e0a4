use std::path::Path;
use std::sync::Arc;

use viscowave::modal::MediumParams;
use viscowave::solver::ProblemData;

use crate::error::CliError;

/// Piecewise-linear interpolant through sorted samples.
#[derive(Clone, Debug)]
struct Linear {
    xs: Vec<f64>,
    ys: Vec<f64>,
}

impl Linear {
    fn eval(&self, x: f64) -> f64 {
        let i = self.xs.partition_point(|&v| v <= x).clamp(1, self.xs.len() - 1);
        let (x0, x1) = (self.xs[i - 1], self.xs[i]);
        let w = (x - x0) / (x1 - x0);
        self.ys[i - 1] * (1.0 - w) + self.ys[i] * w
    }
}

/// Initial data sampled in a CSV file with columns `x,f0,f1` (any order,
/// other columns ignored). Samples must cover `[0, l]`.
pub fn load_table(path: &Path, params: &MediumParams) -> Result<ProblemData, CliError> {
    let file_error = |e: &dyn std::fmt::Display| CliError::Usage(format!("data table {}: {e}", path.display()));
    let mut reader = csv::ReaderBuilder::new().trim(csv::Trim::All).from_path(path).map_err(|e| file_error(&e))?;
    let headers = reader.headers().map_err(|e| file_error(&e))?.clone();
    let column = |name: &str| {
        headers
            .iter()
            .position(|h| h == name)
            .ok_or_else(|| file_error(&format!("missing column '{name}'")))
    };
    let (ix, i0, i1) = (column("x")?, column("f0")?, column("f1")?);
    let mut rows = Vec::new();
    for (line, record) in reader.records().enumerate() {
        let record = record.map_err(|e| file_error(&e))?;
        let field = |i: usize| -> Result<f64, CliError> {
            record
                .get(i)
                .and_then(|s| s.parse::<f64>().ok())
                .filter(|v| v.is_finite())
                .ok_or_else(|| file_error(&format!("row {}: column {} is not a finite number", line + 2, i + 1)))
        };
        rows.push((field(ix)?, field(i0)?, field(i1)?));
    }
    rows.sort_by(|a, b| a.0.total_cmp(&b.0));
    if rows.len() < 2 {
        return Err(file_error(&"need at least two samples"));
    }
    if rows.windows(2).any(|w| w[0].0 == w[1].0) {
        return Err(file_error(&"repeated x sample"));
    }
    let slack = 1e-12 * params.l;
    if rows[0].0 > slack || rows[rows.len() - 1].0 < params.l - slack {
        return Err(file_error(&format!("samples must cover [0, {}]", params.l)));
    }
    let xs: Vec<f64> = rows.iter().map(|r| r.0).collect();
    let f0 = Linear {
        xs: xs.clone(),
        ys: rows.iter().map(|r| r.1).collect(),
    };
    let f1 = Linear {
        xs,
        ys: rows.iter().map(|r| r.2).collect(),
    };
    let (f0, f1) = (Arc::new(f0), Arc::new(f1));
    Ok(ProblemData::new(move |x| f0.eval(x), move |x| f1.eval(x)))
}
