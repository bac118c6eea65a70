use crate::error::{Error, Result};
use crate::model::{check_rate, Tv, TvFrame, TvTrack};

/// Linear interpolation of every TV channel onto a `target_hz` grid that
/// covers the same span as the input.
///
/// Each output frame interpolates between the two input frames bracketing
/// it. A sentinel neighbour is dropped from the support, so the other
/// neighbour's value is used; when both are sentinel the output is too.
pub fn align_tv_to_rate(track: &TvTrack, target_hz: f64) -> Result<TvTrack> {
    check_rate(target_hz)?;
    let n = track.len();
    if n == 0 {
        return Err(Error::invalid(
            "tv track",
            format!("{}/{} has no frames to align", track.speaker_id, track.utterance_id),
        ));
    }
    let src_hz = track.rate_hz();
    let span = (n - 1) as f64 / src_hz;
    let m = (span * target_hz + 1e-9).floor() as usize + 1;
    let src = track.frames();

    let frames = (0..m)
        .map(|j| {
            let pos = j as f64 / target_hz * src_hz;
            let i = (pos.floor() as usize).min(n - 1);
            let frac = (pos - i as f64).clamp(0.0, 1.0);
            let k = (i + 1).min(n - 1);
            let mut out = [f64::NAN; 6];
            for tv in Tv::ALL {
                let (a, b) = (src[i].get(tv), src[k].get(tv));
                out[tv.index()] = match (a.is_nan(), b.is_nan()) {
                    (false, false) => a + (b - a) * frac,
                    (false, true) => a,
                    (true, false) => b,
                    (true, true) => f64::NAN,
                };
            }
            TvFrame::from_array(out)
        })
        .collect();

    TvTrack::new(
        track.speaker_id.clone(),
        track.utterance_id.clone(),
        track.variant,
        target_hz,
        track.start_s(),
        frames,
    )
}
