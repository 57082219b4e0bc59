//! The JSON interchange format for matrices over `Q_p`.
//!
//! One schema serves both input documents and emitted examples: entries are
//! exact rational strings, so documents are diff-able and round-trip
//! byte-identically modulo whitespace.

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::One;
use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::linalg::PadicMatrix;
use crate::padic::{parse_rational, PadicError, PadicNumber, PrecisionContext};

#[derive(Debug, Error)]
pub enum DocError {
    #[error("invalid JSON: {0}")]
    Json(#[from] serde_json::Error),
    #[error("entry ({row},{col}) is not a rational: {text:?}")]
    BadEntry {
        row: usize,
        col: usize,
        text: String,
    },
    #[error("hint #{0} is not a rational: {1:?}")]
    BadHint(usize, String),
    #[error("document declares size {declared} but row {row} has {found} entries")]
    SizeMismatch {
        declared: usize,
        row: usize,
        found: usize,
    },
    #[error("document declares {rows} rows for size {declared}")]
    RowCountMismatch { declared: usize, rows: usize },
    #[error(transparent)]
    Padic(#[from] PadicError),
}

/// A square matrix over `Q_p` with exact rational entries, plus optional
/// eigenvalue hints. Field order is fixed for byte-stable serialization.
#[derive(Debug, Clone, Serialize, Deserialize, PartialEq, Eq)]
pub struct MatrixDocument {
    pub p: u64,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub precision: Option<i64>,
    pub size: usize,
    pub entries: Vec<Vec<String>>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub hints: Option<Vec<String>>,
}

/// Canonical string form of a rational: `"n"` or `"n/d"` in lowest terms.
pub fn rational_to_string(r: &BigRational) -> String {
    if r.denom().is_one() {
        r.numer().to_string()
    } else {
        format!("{}/{}", r.numer(), r.denom())
    }
}

impl MatrixDocument {
    pub fn from_rational_grid(p: u64, size: usize, grid: &[BigRational]) -> Self {
        assert_eq!(grid.len(), size * size);
        let entries = (0..size)
            .map(|i| {
                (0..size)
                    .map(|j| rational_to_string(&grid[i * size + j]))
                    .collect()
            })
            .collect();
        MatrixDocument {
            p,
            precision: None,
            size,
            entries,
            hints: None,
        }
    }

    pub fn from_integer_grid(p: u64, size: usize, grid: &[i64]) -> Self {
        let rats: Vec<BigRational> = grid
            .iter()
            .map(|&v| BigRational::from_integer(BigInt::from(v)))
            .collect();
        Self::from_rational_grid(p, size, &rats)
    }

    pub fn from_json(text: &str) -> Result<Self, DocError> {
        let doc: MatrixDocument = serde_json::from_str(text)?;
        doc.validate()?;
        Ok(doc)
    }

    pub fn to_json(&self) -> String {
        let mut out = serde_json::to_string_pretty(self).expect("document serializes");
        out.push('\n');
        out
    }

    pub fn validate(&self) -> Result<(), DocError> {
        if self.entries.len() != self.size {
            return Err(DocError::RowCountMismatch {
                declared: self.size,
                rows: self.entries.len(),
            });
        }
        for (row, r) in self.entries.iter().enumerate() {
            if r.len() != self.size {
                return Err(DocError::SizeMismatch {
                    declared: self.size,
                    row,
                    found: r.len(),
                });
            }
            for (col, text) in r.iter().enumerate() {
                if parse_rational(text).is_none() {
                    return Err(DocError::BadEntry {
                        row,
                        col,
                        text: text.clone(),
                    });
                }
            }
        }
        if let Some(hints) = &self.hints {
            for (i, h) in hints.iter().enumerate() {
                if parse_rational(h).is_none() {
                    return Err(DocError::BadHint(i, h.clone()));
                }
            }
        }
        Ok(())
    }

    /// Materialize the entries in the given context. The context's prime
    /// must match the document; precision precedence is handled upstream.
    pub fn to_matrix(&self, ctx: &PrecisionContext) -> Result<PadicMatrix, DocError> {
        let mut out = PadicMatrix::zero(self.size, ctx);
        for (i, row) in self.entries.iter().enumerate() {
            for (j, text) in row.iter().enumerate() {
                let (num, den) = parse_rational(text).ok_or_else(|| DocError::BadEntry {
                    row: i,
                    col: j,
                    text: text.clone(),
                })?;
                out.set(i, j, PadicNumber::from_big_rational(&num, &den, ctx)?);
            }
        }
        Ok(out)
    }

    pub fn hint_numbers(&self, ctx: &PrecisionContext) -> Result<Option<Vec<PadicNumber>>, DocError> {
        let Some(hints) = &self.hints else {
            return Ok(None);
        };
        let mut out = Vec::with_capacity(hints.len());
        for (i, h) in hints.iter().enumerate() {
            let (num, den) =
                parse_rational(h).ok_or_else(|| DocError::BadHint(i, h.clone()))?;
            out.push(PadicNumber::from_big_rational(&num, &den, ctx)?);
        }
        Ok(Some(out))
    }
}
