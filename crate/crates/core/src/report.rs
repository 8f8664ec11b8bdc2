//! Tables, gates and their CSV / JSON / gnuplot renderings.

use serde::Serialize;

use crate::error::{Error, Result};

/// `{:.16e}`: 17 significant digits, round-trips every `f64`.
pub fn format_float(x: f64) -> String {
    format!("{x:.16e}")
}

fn opt(x: Option<f64>) -> String {
    x.map(format_float).unwrap_or_default()
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct SpectrumRow {
    pub n: usize,
    pub k: i64,
    pub parity_or_mode: String,
    pub lambda_closed: Option<f64>,
    pub lambda_grid1: Option<f64>,
    pub lambda_grid2: Option<f64>,
    pub lambda_extrap: Option<f64>,
    pub rel_err: Option<f64>,
}

impl SpectrumRow {
    /// Row with closed form, two grids and the Richardson value; `rel_err`
    /// compares the extrapolation with the closed form.
    pub fn with_grids(
        n: usize,
        k: i64,
        label: impl Into<String>,
        closed: f64,
        grid1: f64,
        grid2: f64,
        extrap: f64,
    ) -> Self {
        Self {
            n,
            k,
            parity_or_mode: label.into(),
            lambda_closed: Some(closed),
            lambda_grid1: Some(grid1),
            lambda_grid2: Some(grid2),
            lambda_extrap: Some(extrap),
            rel_err: Some((extrap - closed).abs() / closed.abs().max(f64::MIN_POSITIVE)),
        }
    }

    fn sort_key(&self) -> f64 {
        self.lambda_closed
            .or(self.lambda_extrap)
            .or(self.lambda_grid1)
            .unwrap_or(f64::INFINITY)
    }
}

pub const SPECTRUM_HEADER: [&str; 8] = [
    "n",
    "k",
    "parity_or_mode",
    "lambda_closed",
    "lambda_grid1",
    "lambda_grid2",
    "lambda_extrap",
    "rel_err",
];

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct SpectrumReport {
    pub rows: Vec<SpectrumRow>,
    pub poincare_mu: Option<f64>,
    pub poincare_constant: Option<f64>,
}

impl SpectrumReport {
    /// Rows are sorted by `λ` (closed form when known), ties by `(n, k)`.
    pub fn new(mut rows: Vec<SpectrumRow>) -> Self {
        rows.sort_by(|a, b| {
            a.sort_key()
                .total_cmp(&b.sort_key())
                .then(a.n.cmp(&b.n))
                .then(a.k.cmp(&b.k))
        });
        Self {
            rows,
            poincare_mu: None,
            poincare_constant: None,
        }
    }

    pub fn with_poincare(mut self, mu: f64) -> Self {
        self.poincare_mu = Some(mu);
        self.poincare_constant = Some(1.0 / mu);
        self
    }

    pub fn max_rel_err(&self) -> f64 {
        self.rows
            .iter()
            .filter_map(|r| r.rel_err)
            .fold(0.0, f64::max)
    }

    pub fn to_csv(&self) -> Result<String> {
        let rows = self
            .rows
            .iter()
            .map(|r| {
                vec![
                    r.n.to_string(),
                    r.k.to_string(),
                    r.parity_or_mode.clone(),
                    opt(r.lambda_closed),
                    opt(r.lambda_grid1),
                    opt(r.lambda_grid2),
                    opt(r.lambda_extrap),
                    opt(r.rel_err),
                ]
            })
            .collect::<Vec<_>>();
        csv_table(&SPECTRUM_HEADER, &rows)
    }
}

/// RFC 4180 table with a mandatory header row.
pub fn csv_table(header: &[&str], rows: &[Vec<String>]) -> Result<String> {
    let mut w = csv::WriterBuilder::new()
        .terminator(csv::Terminator::CRLF)
        .from_writer(Vec::new());
    let io = |e: csv::Error| Error::Io(e.to_string());
    w.write_record(header).map_err(io)?;
    for r in rows {
        if r.len() != header.len() {
            return Err(Error::InvalidArgument(format!(
                "row has {} fields, header has {}",
                r.len(),
                header.len()
            )));
        }
        w.write_record(r).map_err(io)?;
    }
    let bytes = w.into_inner().map_err(|e| Error::Io(e.to_string()))?;
    String::from_utf8(bytes).map_err(|e| Error::Io(e.to_string()))
}

/// A named pass/fail check.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct Gate {
    pub name: String,
    pub value: f64,
    pub threshold: f64,
    pub pass: bool,
}

impl Gate {
    /// Passes when `value ≤ threshold`.
    pub fn at_most(name: impl Into<String>, value: f64, threshold: f64) -> Self {
        Self {
            name: name.into(),
            value,
            threshold,
            pass: value <= threshold,
        }
    }

    /// Passes when `value ≥ threshold`.
    pub fn at_least(name: impl Into<String>, value: f64, threshold: f64) -> Self {
        Self {
            name: name.into(),
            value,
            threshold,
            pass: value >= threshold,
        }
    }
}

pub fn all_pass(gates: &[Gate]) -> bool {
    gates.iter().all(|g| g.pass)
}

pub fn gates_csv(gates: &[Gate]) -> Result<String> {
    let rows: Vec<Vec<String>> = gates
        .iter()
        .map(|g| {
            vec![
                g.name.clone(),
                format_float(g.value),
                format_float(g.threshold),
                g.pass.to_string(),
            ]
        })
        .collect();
    csv_table(&["name", "value", "threshold", "pass"], &rows)
}

#[derive(Serialize)]
struct Document<'a, C: Serialize, R: Serialize> {
    config: &'a C,
    results: &'a R,
    gates: &'a [Gate],
}

/// `{"config": …, "results": …, "gates": […]}`, pretty-printed, trailing newline.
pub fn json_document<C: Serialize, R: Serialize>(
    config: &C,
    results: &R,
    gates: &[Gate],
) -> Result<String> {
    let doc = Document {
        config,
        results,
        gates,
    };
    let mut s = serde_json::to_string_pretty(&doc).map_err(|e| Error::Io(e.to_string()))?;
    s.push('\n');
    Ok(s)
}

/// Whitespace-separated columns for gnuplot; missing values become `NaN`.
pub fn plot_data(header: &[&str], rows: &[Vec<f64>]) -> String {
    let mut out = format!("# {}\n", header.join(" "));
    for r in rows {
        let line: Vec<String> = r.iter().map(|v| format_float(*v)).collect();
        out.push_str(&line.join(" "));
        out.push('\n');
    }
    out
}

/// A series drawn from `data_file`: columns are 1-based.
#[derive(Debug, Clone, PartialEq)]
pub struct PlotSeries {
    pub x: usize,
    pub y: usize,
    pub title: String,
    pub style: &'static str,
}

pub fn gnuplot_script(
    data_file: &str,
    title: &str,
    xlabel: &str,
    ylabel: &str,
    series: &[PlotSeries],
) -> String {
    let mut s = String::new();
    s.push_str(&format!("set title \"{title}\"\n"));
    s.push_str(&format!("set xlabel \"{xlabel}\"\n"));
    s.push_str(&format!("set ylabel \"{ylabel}\"\n"));
    s.push_str("set key left top\n");
    s.push_str("set grid\n");
    let parts: Vec<String> = series
        .iter()
        .enumerate()
        .map(|(i, p)| {
            let file = if i == 0 {
                format!("\"{data_file}\"")
            } else {
                "\"\"".to_string()
            };
            format!(
                "{file} using {}:{} with {} title \"{}\"",
                p.x, p.y, p.style, p.title
            )
        })
        .collect();
    s.push_str(&format!("plot {}\n", parts.join(", \\\n     ")));
    s.push_str("pause mouse close\n");
    s
}
