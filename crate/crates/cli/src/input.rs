use std::path::Path;

use serde::Deserialize;

use selfaffine::symbolic::{AffineIFS, BernoulliMeasure};
use selfaffine::{Error, MatrixTuple, Result};

/// On-disk description of a tuple or IFS.
#[derive(Debug, Clone, Deserialize, serde::Serialize)]
#[serde(deny_unknown_fields)]
pub struct InputFile {
    pub d: usize,
    pub matrices: Vec<Vec<Vec<f64>>>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub labels: Option<Vec<String>>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub translations: Option<Vec<Vec<f64>>>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub weights: Option<Vec<f64>>,
}

pub fn read(path: &Path) -> Result<InputFile> {
    let text = std::fs::read_to_string(path)
        .map_err(|e| Error::Io(format!("cannot read {}: {e}", path.display())))?;
    let input: InputFile = serde_json::from_str(&text)
        .map_err(|e| Error::InvalidInput { field: field_of(&e.to_string()), reason: e.to_string() })?;
    input.validate_shape()?;
    Ok(input)
}

/// Best-effort extraction of the field named in a serde message.
fn field_of(msg: &str) -> String {
    msg.split('`').nth(1).unwrap_or("input").to_string()
}

impl InputFile {
    fn validate_shape(&self) -> Result<()> {
        let d = self.d;
        if d == 0 {
            return Err(Error::InvalidInput { field: "d".into(), reason: "must be at least 1".into() });
        }
        for (i, m) in self.matrices.iter().enumerate() {
            if m.len() != d {
                return Err(Error::InvalidInput {
                    field: format!("matrices[{i}]"),
                    reason: format!("expected {d} rows, got {}", m.len()),
                });
            }
            for (r, row) in m.iter().enumerate() {
                if row.len() != d {
                    return Err(Error::InvalidInput {
                        field: format!("matrices[{i}][{r}]"),
                        reason: format!("expected {d} entries, got {}", row.len()),
                    });
                }
            }
        }
        let n = self.matrices.len();
        if let Some(l) = &self.labels {
            if l.len() != n {
                return Err(Error::InvalidInput {
                    field: "labels".into(),
                    reason: format!("{} labels for {n} matrices", l.len()),
                });
            }
        }
        if let Some(w) = &self.weights {
            if w.len() != n {
                return Err(Error::InvalidInput {
                    field: "weights".into(),
                    reason: format!("{} weights for {n} matrices", w.len()),
                });
            }
        }
        Ok(())
    }

    pub fn tuple(&self) -> Result<MatrixTuple> {
        let rows: Vec<Vec<f64>> = self.matrices.iter().map(|m| m.concat()).collect();
        MatrixTuple::from_rows(self.d, &rows)
    }

    /// Bernoulli measure from `weights`, uniform when absent.
    pub fn measure(&self) -> Result<BernoulliMeasure> {
        match &self.weights {
            Some(w) => BernoulliMeasure::new(w.clone()).map_err(|e| rename(e, "weights")),
            None => BernoulliMeasure::uniform(self.matrices.len()),
        }
    }

    pub fn ifs(&self) -> Result<AffineIFS> {
        let v = self.translations.clone().ok_or_else(|| Error::InvalidInput {
            field: "translations".into(),
            reason: "required by this command".into(),
        })?;
        AffineIFS::new(self.tuple()?, v, true)
    }
}

fn rename(e: Error, field: &str) -> Error {
    match e {
        Error::InvalidInput { reason, .. } => Error::InvalidInput { field: field.into(), reason },
        other => other,
    }
}
