use thiserror::Error;

#[derive(Clone, Debug, PartialEq, Error)]
pub enum PpmcError {
    #[error("sequences differ in length ({0} vs {1})")]
    LengthMismatch(usize, usize),
    #[error("only {0} usable pair(s) after dropping sentinels, need 2")]
    InsufficientPairs(usize),
    #[error("a sequence is constant, correlation is undefined")]
    Constant,
}

/// Pearson product-moment correlation.
///
/// Index pairs where either value is NaN are dropped first. The result is
/// clamped to [-1, 1] to absorb rounding.
pub fn ppmc(x: &[f64], y: &[f64]) -> Result<f64, PpmcError> {
    if x.len() != y.len() {
        return Err(PpmcError::LengthMismatch(x.len(), y.len()));
    }
    let pairs: Vec<(f64, f64)> = x
        .iter()
        .zip(y)
        .filter(|(a, b)| !a.is_nan() && !b.is_nan())
        .map(|(&a, &b)| (a, b))
        .collect();
    if pairs.len() < 2 {
        return Err(PpmcError::InsufficientPairs(pairs.len()));
    }
    let n = pairs.len() as f64;
    let mx = pairs.iter().map(|p| p.0).sum::<f64>() / n;
    let my = pairs.iter().map(|p| p.1).sum::<f64>() / n;
    let (mut sxy, mut sxx, mut syy) = (0.0, 0.0, 0.0);
    for &(a, b) in &pairs {
        let (dx, dy) = (a - mx, b - my);
        sxy += dx * dy;
        sxx += dx * dx;
        syy += dy * dy;
    }
    if sxx == 0.0 || syy == 0.0 {
        return Err(PpmcError::Constant);
    }
    Ok((sxy / (sxx.sqrt() * syy.sqrt())).clamp(-1.0, 1.0))
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn perfect_relations() {
        assert!((ppmc(&[1.0, 2.0, 3.0], &[2.0, 4.0, 6.0]).unwrap() - 1.0).abs() < 1e-15);
        assert!((ppmc(&[1.0, 2.0, 3.0], &[6.0, 4.0, 2.0]).unwrap() + 1.0).abs() < 1e-15);
    }

    #[test]
    fn hand_computed_value() {
        // cov = 4, both sums of squares = 5.
        let r = ppmc(&[1.0, 2.0, 3.0, 4.0], &[1.0, 3.0, 2.0, 4.0]).unwrap();
        assert!((r - 0.8).abs() < 1e-12);
    }

    #[test]
    fn sentinels_are_dropped_pairwise() {
        let r = ppmc(&[1.0, f64::NAN, 2.0, 3.0], &[2.0, 100.0, 4.0, f64::NAN]).unwrap();
        assert!((r - 1.0).abs() < 1e-15);
    }

    #[test]
    fn errors() {
        assert_eq!(ppmc(&[1.0, 2.0], &[1.0]), Err(PpmcError::LengthMismatch(2, 1)));
        assert_eq!(ppmc(&[1.0, f64::NAN], &[1.0, 2.0]), Err(PpmcError::InsufficientPairs(1)));
        assert_eq!(ppmc(&[1.0, 1.0, 1.0], &[1.0, 2.0, 3.0]), Err(PpmcError::Constant));
    }
}
