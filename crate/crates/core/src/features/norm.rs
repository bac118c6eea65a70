use crate::error::{Error, Result};
use crate::model::FeatureMatrix;

/// Relative spread below which a column counts as constant.
const CONSTANT_REL_TOL: f64 = 1e-12;

/// Per-column z-normalisation with the population standard deviation.
/// Constant columns map to all zeros.
pub fn znormalize(m: &FeatureMatrix) -> Result<FeatureMatrix> {
    let (rows, cols) = (m.rows(), m.cols());
    if rows < 2 {
        return Err(Error::invalid(
            "feature matrix",
            format!("z-normalisation needs at least 2 rows, got {rows}"),
        ));
    }
    let mut out = m.data().to_vec();
    for c in 0..cols {
        let col = || (0..rows).map(|r| m.get(r, c));
        let mean = col().sum::<f64>() / rows as f64;
        let var = col().map(|v| (v - mean) * (v - mean)).sum::<f64>() / rows as f64;
        let sd = var.sqrt();
        let constant = sd <= CONSTANT_REL_TOL * mean.abs().max(1.0);
        for r in 0..rows {
            out[r * cols + c] = if constant { 0.0 } else { (m.get(r, c) - mean) / sd };
        }
    }
    FeatureMatrix::new(m.kind(), m.rate_hz(), cols, out)
}
