//! Speaker-independent splits, PPMC scoring of TV tracks, report files and
//! plot data.

mod plot;
mod ppmc;
mod report;
mod split;
mod tracks;

pub use plot::emit_plot_data;
pub use ppmc::{ppmc, PpmcError};
pub use report::{improvement, render_table, DatasetTag, PpmcReport, TvScores, AVERAGE_TOL};
pub use split::{make_split, Sex, SplitShape, SplitSpec};
pub use tracks::{evaluate_tracks, pair_tracks, score_tracks, EvalLabels, EvalMode};
