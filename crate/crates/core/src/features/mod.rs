//! Model-ready acoustic inputs: MFCC extraction, utterance z-normalisation,
//! 2-second segmentation, self-supervised embedding checks and TV rate
//! alignment.

mod align;
mod audio;
mod mfcc;
mod norm;
mod segment;

pub use align::align_tv_to_rate;
pub use audio::{read_wav, write_wav, AudioClip, SAMPLE_RATE_HZ};
pub use mfcc::{extract_mfcc, hamming, hz_to_mel, mel_to_hz, Mfcc, MfccConfig};
pub use norm::znormalize;
pub use segment::{
    segment_audio, segment_len, segment_matrix, segment_rows, MatrixSegment, Segment,
    SEGMENT_SECONDS,
};

use crate::error::{Error, Result};
use crate::model::{FeatureKind, FeatureMatrix};

/// Frame rate of the self-supervised embeddings.
pub const SSL_RATE_HZ: f64 = 50.0;

/// Checks an embedding matrix: 1024 columns at 50 Hz, a whole number of
/// 2-second segments, all entries finite.
pub fn validate_ssl_matrix(m: FeatureMatrix) -> Result<FeatureMatrix> {
    if m.kind() != FeatureKind::Ssl1024 {
        return Err(Error::invalid("ssl matrix kind", format!("{} is not ssl1024", m.kind())));
    }
    if m.cols() != FeatureKind::Ssl1024.dim() {
        return Err(Error::invalid("ssl matrix cols", format!("{} columns, expected 1024", m.cols())));
    }
    if m.rate_hz() != SSL_RATE_HZ {
        return Err(Error::invalid("ssl matrix rate_hz", format!("{} Hz, expected 50 Hz", m.rate_hz())));
    }
    let seg = segment_len(SSL_RATE_HZ);
    if m.rows() == 0 || m.rows() % seg != 0 {
        return Err(Error::invalid(
            "ssl matrix rows",
            format!("{} rows is not a positive multiple of {seg}", m.rows()),
        ));
    }
    if m.data().iter().any(|v| !v.is_finite()) {
        return Err(Error::invalid("ssl matrix data", "non-finite entry"));
    }
    Ok(m)
}

#[cfg(test)]
mod tests {
    use super::*;

    fn ssl(rows: usize, rate: f64) -> FeatureMatrix {
        FeatureMatrix::new(FeatureKind::Ssl1024, rate, 1024, vec![0.25; rows * 1024]).unwrap()
    }

    #[test]
    fn accepts_one_segment() {
        assert!(validate_ssl_matrix(ssl(100, 50.0)).is_ok());
        assert!(validate_ssl_matrix(ssl(300, 50.0)).is_ok());
    }

    #[test]
    fn rejects_bad_shape_and_rate() {
        let e = validate_ssl_matrix(ssl(137, 50.0)).unwrap_err();
        assert!(e.to_string().contains("rows"), "{e}");
        let e = validate_ssl_matrix(ssl(100, 100.0)).unwrap_err();
        assert!(e.to_string().contains("rate_hz"), "{e}");
        let mfcc = FeatureMatrix::new(FeatureKind::Mfcc13, 50.0, 13, vec![0.0; 1300]).unwrap();
        assert!(validate_ssl_matrix(mfcc).is_err());
        // A 768-wide embedding cannot even be built as ssl1024.
        assert!(FeatureMatrix::new(FeatureKind::Ssl1024, 50.0, 768, vec![0.0; 76800]).is_err());
    }
}
