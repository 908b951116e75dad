use serde::Serialize;
use thiserror::Error;

use super::ErrorTag;

#[derive(Debug, Error, PartialEq)]
pub enum AgreementError {
    #[error("need at least {needed} pairable values, found {found}")]
    TooFewValues { needed: f64, found: f64 },
    #[error("alpha is undefined: expected disagreement is zero")]
    Undefined,
    #[error("need at least two annotators")]
    TooFewAnnotators,
    #[error("coincidence file line {line}: {message}")]
    Format { line: usize, message: String },
}

/// Pairable value counts. Symmetric; every cell is a (possibly fractional)
/// number of coincidences.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct CoincidenceMatrix {
    pub values: Vec<String>,
    pub cells: Vec<Vec<f64>>,
    pub n: f64,
}

impl CoincidenceMatrix {
    pub fn new(values: Vec<String>, cells: Vec<Vec<f64>>) -> Self {
        let n = cells.iter().flatten().sum();
        Self { values, cells, n }
    }

    pub fn marginals(&self) -> Vec<f64> {
        self.cells.iter().map(|row| row.iter().sum()).collect()
    }

    pub fn diagonal(&self) -> f64 {
        (0..self.cells.len()).map(|i| self.cells[i][i]).sum()
    }

    pub fn is_symmetric(&self, tolerance: f64) -> bool {
        let k = self.cells.len();
        (0..k).all(|i| (0..k).all(|j| (self.cells[i][j] - self.cells[j][i]).abs() <= tolerance))
    }

    /// Reads the tab-separated fixture layout: a header with the category
    /// names, then one row per category. A row may start with its label.
    pub fn parse(text: &str) -> Result<Self, AgreementError> {
        let mut lines = text
            .lines()
            .enumerate()
            .map(|(i, l)| (i + 1, l.trim()))
            .filter(|(_, l)| !l.is_empty() && !l.starts_with('#'));
        let (_, header) = lines.next().ok_or(AgreementError::Format { line: 1, message: "empty file".into() })?;
        let values: Vec<String> =
            header.split('\t').map(str::trim).filter(|s| !s.is_empty()).map(String::from).collect();
        let mut cells = Vec::new();
        for (line, row) in lines {
            let mut cols: Vec<&str> = row.split('\t').map(str::trim).collect();
            if cols.len() == values.len() + 1 {
                let label = cols.remove(0);
                if label != values[cells.len().min(values.len() - 1)] {
                    return Err(AgreementError::Format { line, message: format!("unexpected row label '{label}'") });
                }
            }
            if cols.len() != values.len() {
                return Err(AgreementError::Format {
                    line,
                    message: format!("expected {} cells, found {}", values.len(), cols.len()),
                });
            }
            let row: Vec<f64> = cols
                .iter()
                .map(|c| match c.parse::<f64>() {
                    Ok(v) if v >= 0.0 && v.is_finite() => Ok(v),
                    _ => Err(AgreementError::Format { line, message: format!("bad cell '{c}'") }),
                })
                .collect::<Result<_, _>>()?;
            cells.push(row);
        }
        if cells.len() != values.len() {
            return Err(AgreementError::Format {
                line: 1,
                message: format!("{} categories but {} rows", values.len(), cells.len()),
            });
        }
        let cm = Self::new(values, cells);
        if !cm.is_symmetric(1e-9) {
            return Err(AgreementError::Format { line: 1, message: "matrix is not symmetric".into() });
        }
        Ok(cm)
    }

    pub fn to_tsv(&self) -> String {
        let mut out = format!("\t{}\n", self.values.join("\t"));
        for (label, row) in self.values.iter().zip(&self.cells) {
            let cells: Vec<String> = row.iter().map(|v| v.to_string()).collect();
            out.push_str(&format!("{label}\t{}\n", cells.join("\t")));
        }
        out
    }
}

/// Builds the coincidence matrix of a reliability matrix (annotators by
/// units). Within a unit judged by `m >= 2` annotators every ordered pair of
/// judgments from different annotators adds `1/(m-1)` to its cell.
pub fn coincidence(judgments: &[Vec<Option<ErrorTag>>]) -> CoincidenceMatrix {
    let k = ErrorTag::ALL.len();
    let mut cells = vec![vec![0.0; k]; k];
    let units = judgments.iter().map(Vec::len).max().unwrap_or(0);
    for u in 0..units {
        let mut counts = vec![0usize; k];
        for row in judgments {
            if let Some(Some(tag)) = row.get(u) {
                counts[tag.index()] += 1;
            }
        }
        let m: usize = counts.iter().sum();
        if m < 2 {
            continue;
        }
        let weight = 1.0 / (m - 1) as f64;
        for c in 0..k {
            for d in 0..k {
                let pairs = if c == d { counts[c] * counts[c].saturating_sub(1) } else { counts[c] * counts[d] };
                cells[c][d] += pairs as f64 * weight;
            }
        }
    }
    CoincidenceMatrix::new(ErrorTag::ALL.iter().map(|t| t.to_string()).collect(), cells)
}

/// Krippendorff's alpha for nominal data.
pub fn krippendorff_alpha(cm: &CoincidenceMatrix) -> Result<f64, AgreementError> {
    let n = cm.n;
    if n <= 1.0 {
        return Err(AgreementError::TooFewValues { needed: 2.0, found: n });
    }
    let chance: f64 = cm.marginals().iter().map(|nc| nc * (nc - 1.0)).sum();
    let denominator = n * (n - 1.0) - chance;
    if denominator.abs() < 1e-12 {
        return Err(AgreementError::Undefined);
    }
    Ok(((n - 1.0) * cm.diagonal() - chance) / denominator)
}

/// Share of pairable values on the diagonal.
pub fn accuracy(cm: &CoincidenceMatrix) -> Result<f64, AgreementError> {
    if cm.n <= 0.0 {
        return Err(AgreementError::TooFewValues { needed: 1.0, found: cm.n });
    }
    Ok(cm.diagonal() / cm.n)
}

/// Annotator-by-annotator agreement; entries are `None` on the diagonal and
/// where a pair's metric is undefined.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct PairwiseMetrics {
    pub alpha: Vec<Vec<Option<f64>>>,
    pub accuracy: Vec<Vec<Option<f64>>>,
}

impl PairwiseMetrics {
    pub fn render(matrix: &[Vec<Option<f64>>]) -> String {
        let mut out = String::new();
        for (i, row) in matrix.iter().enumerate() {
            let cells: Vec<String> = row.iter().map(|v| v.map_or("-".to_string(), |x| format!("{x:.3}"))).collect();
            out.push_str(&format!("annotator {}\t{}\n", i + 1, cells.join("\t")));
        }
        out
    }
}

pub fn pairwise_metrics(judgments: &[Vec<Option<ErrorTag>>]) -> Result<PairwiseMetrics, AgreementError> {
    let a = judgments.len();
    if a < 2 {
        return Err(AgreementError::TooFewAnnotators);
    }
    let mut alpha = vec![vec![None; a]; a];
    let mut acc = vec![vec![None; a]; a];
    for i in 0..a {
        for j in i + 1..a {
            let cm = coincidence(&[judgments[i].clone(), judgments[j].clone()]);
            let (al, ac) = (krippendorff_alpha(&cm).ok(), accuracy(&cm).ok());
            alpha[i][j] = al;
            alpha[j][i] = al;
            acc[i][j] = ac;
            acc[j][i] = ac;
        }
    }
    Ok(PairwiseMetrics { alpha, accuracy: acc })
}
