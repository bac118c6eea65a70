use std::fmt::Write as _;
use std::fs;
use std::path::Path;

use crate::error::{Error, Result};
use crate::model::{Tv, TvTrack};

/// Writes a CSV overlay of truth and prediction per TV for external
/// plotting: `t`, then `<TV>_true` for all six, then `<TV>_pred`. Sentinel
/// values become empty fields.
pub fn emit_plot_data(pred: &TvTrack, truth: &TvTrack, path: &Path) -> Result<()> {
    if pred.len() != truth.len() {
        return Err(Error::invalid(
            "plot data",
            format!("{} predicted vs {} true frames", pred.len(), truth.len()),
        ));
    }
    let mut out = String::from("t");
    for suffix in ["true", "pred"] {
        for tv in Tv::ALL {
            let _ = write!(out, ",{tv}_{suffix}");
        }
    }
    out.push('\n');
    let cell = |v: f64| if v.is_nan() { String::new() } else { v.to_string() };
    for i in 0..truth.len() {
        let _ = write!(out, "{}", truth.time(i));
        for track in [truth, pred] {
            for v in track.frames()[i].to_array() {
                let _ = write!(out, ",{}", cell(v));
            }
        }
        out.push('\n');
    }
    fs::write(path, out).map_err(|e| Error::io(path, e))
}
