use serde::{Deserialize, Serialize};

/// Named residual norms over a set of sample points.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ResidualReport {
    pub name: String,
    pub max_abs: f64,
    pub rms: f64,
    pub grid: String,
    #[serde(default)]
    pub notes: Vec<String>,
}

impl ResidualReport {
    /// Max and RMS of `values`, reduced in index order so the result does not
    /// depend on how the values were produced.
    pub fn from_values(name: impl Into<String>, grid: impl Into<String>, values: &[f64]) -> Self {
        let max_abs = values.iter().map(|v| v.abs()).fold(0.0, f64::max);
        let rms = if values.is_empty() {
            0.0
        } else {
            (values.iter().map(|v| v * v).sum::<f64>() / values.len() as f64).sqrt()
        };
        Self {
            name: name.into(),
            max_abs,
            rms,
            grid: grid.into(),
            notes: Vec::new(),
        }
    }

    pub fn with_notes(mut self, notes: impl IntoIterator<Item = String>) -> Self {
        self.notes.extend(notes);
        self
    }

    pub fn note(mut self, note: impl Into<String>) -> Self {
        self.notes.push(note.into());
        self
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn max_bounds_rms() {
        let r = ResidualReport::from_values("x", "g", &[1e-3, -4e-3, 2e-3]);
        assert_eq!(r.max_abs, 4e-3);
        assert!(r.rms <= r.max_abs && r.rms > 0.0);
        let empty = ResidualReport::from_values("x", "g", &[]);
        assert_eq!((empty.max_abs, empty.rms), (0.0, 0.0));
    }
}
