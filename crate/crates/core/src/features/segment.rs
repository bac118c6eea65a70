//! Fixed 2-second segmentation with zero padding at the end.

use super::audio::AudioClip;
use crate::error::{Error, Result};
use crate::model::FeatureMatrix;

pub const SEGMENT_SECONDS: f64 = 2.0;

/// Rows per segment at `rate_hz`.
pub fn segment_len(rate_hz: f64) -> usize {
    (SEGMENT_SECONDS * rate_hz).round() as usize
}

/// One fixed-length span of a row-major sequence. Rows past
/// `content_rows` are zero padding.
#[derive(Clone, Debug, PartialEq)]
pub struct Segment {
    pub data: Vec<f64>,
    pub content_rows: usize,
}

/// Splits `data` (rows of `width` values) into consecutive non-overlapping
/// 2-second segments, padding the last one with zero rows.
pub fn segment_rows(data: &[f64], width: usize, rate_hz: f64) -> Result<Vec<Segment>> {
    if width == 0 || data.len() % width != 0 {
        return Err(Error::invalid(
            "segmentation",
            format!("{} values do not form rows of width {width}", data.len()),
        ));
    }
    let seg = segment_len(rate_hz);
    if seg == 0 {
        return Err(Error::invalid(
            "segmentation",
            format!("rate {rate_hz} Hz gives empty segments"),
        ));
    }
    if data.is_empty() {
        return Err(Error::invalid("segmentation", "input has no rows"));
    }
    Ok(data
        .chunks(seg * width)
        .map(|chunk| {
            let mut d = chunk.to_vec();
            d.resize(seg * width, 0.0);
            Segment {
                data: d,
                content_rows: chunk.len() / width,
            }
        })
        .collect())
}

/// A segment of a feature matrix, kept as a matrix of the same kind.
#[derive(Clone, Debug, PartialEq)]
pub struct MatrixSegment {
    pub matrix: FeatureMatrix,
    pub content_rows: usize,
}

pub fn segment_matrix(m: &FeatureMatrix) -> Result<Vec<MatrixSegment>> {
    segment_rows(m.data(), m.cols(), m.rate_hz())?
        .into_iter()
        .map(|s| {
            Ok(MatrixSegment {
                matrix: FeatureMatrix::new(m.kind(), m.rate_hz(), m.cols(), s.data)?,
                content_rows: s.content_rows,
            })
        })
        .collect()
}

pub fn segment_audio(clip: &AudioClip) -> Result<Vec<Segment>> {
    segment_rows(clip.samples(), 1, clip.sample_rate() as f64)
}
