//! Tract-variable toolkit for acoustic-to-articulatory speech inversion.
//!
//! Converts midsagittal pellet trajectories into six constriction tract
//! variables, prepares MFCC and self-supervised embedding inputs, and scores
//! predicted TV tracks with Pearson correlation.

pub mod config;
pub mod error;
pub mod eval;
pub mod features;
pub mod geometry;
pub mod io;
pub mod model;
pub mod synth;
pub mod tract;

pub use error::{Error, Result};
pub use geometry::{Circle, DistanceWitness, GeometryError, PalateExtension, Point};
pub use model::{
    FeatureKind, FeatureMatrix, PalatalTrace, PelletFrame, PelletId, PelletTrack, Tv, TvFrame,
    TvTrack, Variant,
};
pub use tract::{CollinearPolicy, TvConfig};
pub use config::PipelineConfig;
pub use eval::{EvalMode, PpmcReport};
pub use features::{AudioClip, MfccConfig};
pub use synth::SynthConfig;
