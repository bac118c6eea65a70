//! Articulatory data model shared by every stage of the pipeline.
//!
//! Mistracked measurements are carried in place as not-a-number sentinels so
//! that downstream stages can decide what to do with them. Nothing in here
//! drops frames.

use std::fmt;
use std::str::FromStr;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::geometry::Point;

/// Tolerance on `t[i] == t[0] + i / rate_hz`.
pub const TIME_GRID_TOL_S: f64 = 1e-6;

/// The eight midsagittal pellets, in file-layout order.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum PelletId {
    UL,
    LL,
    T1,
    T2,
    T3,
    T4,
    MANi,
    MANm,
}

impl PelletId {
    pub const ALL: [PelletId; 8] = [
        PelletId::UL,
        PelletId::LL,
        PelletId::T1,
        PelletId::T2,
        PelletId::T3,
        PelletId::T4,
        PelletId::MANi,
        PelletId::MANm,
    ];

    pub fn index(self) -> usize {
        self as usize
    }

    pub fn name(self) -> &'static str {
        match self {
            PelletId::UL => "UL",
            PelletId::LL => "LL",
            PelletId::T1 => "T1",
            PelletId::T2 => "T2",
            PelletId::T3 => "T3",
            PelletId::T4 => "T4",
            PelletId::MANi => "MANi",
            PelletId::MANm => "MANm",
        }
    }
}

impl fmt::Display for PelletId {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.name())
    }
}

/// One time sample of all eight pellets.
///
/// A pellet is valid exactly when both of its coordinates are finite. A
/// half-finite position is collapsed to the full sentinel pair.
#[derive(Clone, Debug, PartialEq)]
pub struct PelletFrame {
    pub t: f64,
    pos: [Point; 8],
    valid: [bool; 8],
}

impl PelletFrame {
    pub fn new(t: f64, positions: [Point; 8]) -> Self {
        let mut pos = positions;
        let mut valid = [false; 8];
        for (p, v) in pos.iter_mut().zip(valid.iter_mut()) {
            *v = p.is_finite();
            if !*v {
                *p = Point::NAN;
            }
        }
        PelletFrame { t, pos, valid }
    }

    /// Raw position, which is the sentinel pair for an invalid pellet.
    pub fn position(&self, id: PelletId) -> Point {
        self.pos[id.index()]
    }

    pub fn get(&self, id: PelletId) -> Option<Point> {
        self.valid[id.index()].then_some(self.pos[id.index()])
    }

    pub fn is_valid(&self, id: PelletId) -> bool {
        self.valid[id.index()]
    }

    pub fn positions(&self) -> &[Point; 8] {
        &self.pos
    }

    /// Marks a pellet as mistracked.
    pub fn invalidate(&mut self, id: PelletId) {
        self.pos[id.index()] = Point::NAN;
        self.valid[id.index()] = false;
    }
}

/// Checks the strict-monotone, uniform-rate timing discipline. On failure
/// returns the 0-based offending frame index and a message.
pub(crate) fn check_time_grid(
    times: impl IntoIterator<Item = f64>,
    rate_hz: f64,
) -> std::result::Result<(), (usize, String)> {
    let mut t0 = None;
    let mut prev = f64::NEG_INFINITY;
    for (i, t) in times.into_iter().enumerate() {
        if !t.is_finite() || t < 0.0 {
            return Err((i, format!("time {t} is not a finite non-negative value")));
        }
        if t <= prev {
            return Err((i, format!("time {t} does not increase (previous {prev})")));
        }
        let start = *t0.get_or_insert(t);
        let expected = start + i as f64 / rate_hz;
        if (t - expected).abs() > TIME_GRID_TOL_S {
            return Err((
                i,
                format!("time {t} is off the {rate_hz} Hz grid (expected {expected})"),
            ));
        }
        prev = t;
    }
    Ok(())
}

pub(crate) fn check_rate(rate_hz: f64) -> Result<()> {
    if rate_hz.is_finite() && rate_hz > 0.0 {
        Ok(())
    } else {
        Err(Error::invalid("rate", format!("{rate_hz} Hz is not positive")))
    }
}

/// A pellet recording for one utterance.
#[derive(Clone, Debug, PartialEq)]
pub struct PelletTrack {
    pub speaker_id: String,
    pub utterance_id: String,
    rate_hz: f64,
    frames: Vec<PelletFrame>,
}

impl PelletTrack {
    pub fn new(
        speaker_id: impl Into<String>,
        utterance_id: impl Into<String>,
        rate_hz: f64,
        frames: Vec<PelletFrame>,
    ) -> Result<Self> {
        check_rate(rate_hz)?;
        check_time_grid(frames.iter().map(|f| f.t), rate_hz)
            .map_err(|(i, msg)| Error::invalid("pellet track", format!("frame {i}: {msg}")))?;
        Ok(PelletTrack {
            speaker_id: speaker_id.into(),
            utterance_id: utterance_id.into(),
            rate_hz,
            frames,
        })
    }

    pub fn rate_hz(&self) -> f64 {
        self.rate_hz
    }

    pub fn frames(&self) -> &[PelletFrame] {
        &self.frames
    }

    pub fn len(&self) -> usize {
        self.frames.len()
    }

    pub fn is_empty(&self) -> bool {
        self.frames.is_empty()
    }
}

/// Ordered palate outline, anterior point first.
#[derive(Clone, Debug, PartialEq)]
pub struct PalatalTrace {
    pub speaker_id: String,
    points: Vec<Point>,
    extended: bool,
}

impl PalatalTrace {
    pub fn new(speaker_id: impl Into<String>, points: Vec<Point>, extended: bool) -> Result<Self> {
        if points.len() < 2 {
            return Err(Error::invalid(
                "palatal trace",
                format!("{} point(s), need at least 2", points.len()),
            ));
        }
        if let Some(i) = points.iter().position(|p| !p.is_finite()) {
            return Err(Error::invalid(
                "palatal trace",
                format!("point {i} is not finite"),
            ));
        }
        if let Some(i) = points.windows(2).position(|w| w[0] == w[1]) {
            return Err(Error::invalid(
                "palatal trace",
                format!("points {i} and {} coincide", i + 1),
            ));
        }
        Ok(PalatalTrace {
            speaker_id: speaker_id.into(),
            points,
            extended,
        })
    }

    pub fn points(&self) -> &[Point] {
        &self.points
    }

    pub fn is_extended(&self) -> bool {
        self.extended
    }

    /// Applies `f` to every point, keeping the extension flag.
    pub fn map_points(&self, f: impl Fn(Point) -> Point) -> Result<Self> {
        PalatalTrace::new(
            self.speaker_id.clone(),
            self.points.iter().copied().map(f).collect(),
            self.extended,
        )
    }
}

/// The six tract variables, in report and file-column order.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
pub enum Tv {
    LA,
    LP,
    TBCL,
    TBCD,
    TTCL,
    TTCD,
}

impl Tv {
    pub const ALL: [Tv; 6] = [Tv::LA, Tv::LP, Tv::TBCL, Tv::TBCD, Tv::TTCL, Tv::TTCD];

    pub fn index(self) -> usize {
        self as usize
    }

    pub fn name(self) -> &'static str {
        match self {
            Tv::LA => "LA",
            Tv::LP => "LP",
            Tv::TBCL => "TBCL",
            Tv::TBCD => "TBCD",
            Tv::TTCL => "TTCL",
            Tv::TTCD => "TTCD",
        }
    }
}

impl fmt::Display for Tv {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.name())
    }
}

/// Tract variables for one frame, in millimetres. NaN marks a value whose
/// source pellets were invalid.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct TvFrame {
    pub la: f64,
    pub lp: f64,
    pub tbcl: f64,
    pub tbcd: f64,
    pub ttcl: f64,
    pub ttcd: f64,
}

impl TvFrame {
    pub const SENTINEL: TvFrame = TvFrame {
        la: f64::NAN,
        lp: f64::NAN,
        tbcl: f64::NAN,
        tbcd: f64::NAN,
        ttcl: f64::NAN,
        ttcd: f64::NAN,
    };

    pub fn from_array(v: [f64; 6]) -> Self {
        TvFrame {
            la: v[0],
            lp: v[1],
            tbcl: v[2],
            tbcd: v[3],
            ttcl: v[4],
            ttcd: v[5],
        }
    }

    pub fn to_array(&self) -> [f64; 6] {
        [self.la, self.lp, self.tbcl, self.tbcd, self.ttcl, self.ttcd]
    }

    pub fn get(&self, tv: Tv) -> f64 {
        self.to_array()[tv.index()]
    }
}

/// Which geometric transformation produced a TV track.
#[derive(Clone, Copy, Debug, Default, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Variant {
    Baseline,
    #[default]
    Proposed,
}

impl Variant {
    pub fn as_str(self) -> &'static str {
        match self {
            Variant::Baseline => "baseline",
            Variant::Proposed => "proposed",
        }
    }
}

impl fmt::Display for Variant {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.as_str())
    }
}

impl FromStr for Variant {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        match s {
            "baseline" => Ok(Variant::Baseline),
            "proposed" => Ok(Variant::Proposed),
            other => Err(Error::invalid("variant", format!("unknown variant {other:?}"))),
        }
    }
}

/// A rate-stamped sequence of TV frames. Frame `i` sits at
/// `start_s + i / rate_hz`.
#[derive(Clone, Debug, PartialEq)]
pub struct TvTrack {
    pub speaker_id: String,
    pub utterance_id: String,
    pub variant: Variant,
    rate_hz: f64,
    start_s: f64,
    frames: Vec<TvFrame>,
}

impl TvTrack {
    pub fn new(
        speaker_id: impl Into<String>,
        utterance_id: impl Into<String>,
        variant: Variant,
        rate_hz: f64,
        start_s: f64,
        frames: Vec<TvFrame>,
    ) -> Result<Self> {
        check_rate(rate_hz)?;
        if !(start_s.is_finite() && start_s >= 0.0) {
            return Err(Error::invalid(
                "tv track",
                format!("start time {start_s} is not a finite non-negative value"),
            ));
        }
        Ok(TvTrack {
            speaker_id: speaker_id.into(),
            utterance_id: utterance_id.into(),
            variant,
            rate_hz,
            start_s,
            frames,
        })
    }

    pub fn rate_hz(&self) -> f64 {
        self.rate_hz
    }

    pub fn start_s(&self) -> f64 {
        self.start_s
    }

    pub fn time(&self, i: usize) -> f64 {
        self.start_s + i as f64 / self.rate_hz
    }

    pub fn frames(&self) -> &[TvFrame] {
        &self.frames
    }

    pub fn len(&self) -> usize {
        self.frames.len()
    }

    pub fn is_empty(&self) -> bool {
        self.frames.is_empty()
    }

    /// One TV channel as a plain vector.
    pub fn channel(&self, tv: Tv) -> Vec<f64> {
        self.frames.iter().map(|f| f.get(tv)).collect()
    }

    pub fn key(&self) -> (&str, &str) {
        (&self.speaker_id, &self.utterance_id)
    }
}

/// Acoustic feature family.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum FeatureKind {
    Mfcc13,
    Ssl1024,
}

impl FeatureKind {
    pub fn dim(self) -> usize {
        match self {
            FeatureKind::Mfcc13 => 13,
            FeatureKind::Ssl1024 => 1024,
        }
    }

    pub fn code(self) -> u8 {
        match self {
            FeatureKind::Mfcc13 => 0,
            FeatureKind::Ssl1024 => 1,
        }
    }

    pub fn from_code(code: u8) -> Option<Self> {
        match code {
            0 => Some(FeatureKind::Mfcc13),
            1 => Some(FeatureKind::Ssl1024),
            _ => None,
        }
    }

    pub fn as_str(self) -> &'static str {
        match self {
            FeatureKind::Mfcc13 => "mfcc13",
            FeatureKind::Ssl1024 => "ssl1024",
        }
    }
}

impl fmt::Display for FeatureKind {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.as_str())
    }
}

impl FromStr for FeatureKind {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        match s {
            "mfcc13" | "mfcc" => Ok(FeatureKind::Mfcc13),
            "ssl1024" | "ssl" => Ok(FeatureKind::Ssl1024),
            other => Err(Error::invalid(
                "feature kind",
                format!("unknown kind {other:?}"),
            )),
        }
    }
}

/// Frames × dims feature matrix, row-major.
///
/// Values are held as `f64` in memory; the on-disk format stores `f32`.
#[derive(Clone, Debug, PartialEq)]
pub struct FeatureMatrix {
    kind: FeatureKind,
    rate_hz: f64,
    rows: usize,
    cols: usize,
    data: Vec<f64>,
}

impl FeatureMatrix {
    pub fn new(kind: FeatureKind, rate_hz: f64, cols: usize, data: Vec<f64>) -> Result<Self> {
        check_rate(rate_hz)?;
        if cols != kind.dim() {
            return Err(Error::invalid(
                "feature matrix",
                format!("kind {kind} requires {} columns, got {cols}", kind.dim()),
            ));
        }
        if data.len() % cols != 0 {
            return Err(Error::invalid(
                "feature matrix",
                format!("{} values do not fill rows of {cols}", data.len()),
            ));
        }
        if let Some(i) = data.iter().position(|v| !v.is_finite()) {
            return Err(Error::invalid(
                "feature matrix",
                format!("entry ({}, {}) is not finite", i / cols, i % cols),
            ));
        }
        Ok(FeatureMatrix {
            kind,
            rate_hz,
            rows: data.len() / cols,
            cols,
            data,
        })
    }

    pub fn kind(&self) -> FeatureKind {
        self.kind
    }

    pub fn rate_hz(&self) -> f64 {
        self.rate_hz
    }

    pub fn rows(&self) -> usize {
        self.rows
    }

    pub fn cols(&self) -> usize {
        self.cols
    }

    pub fn data(&self) -> &[f64] {
        &self.data
    }

    pub fn row(&self, i: usize) -> &[f64] {
        &self.data[i * self.cols..(i + 1) * self.cols]
    }

    pub fn get(&self, row: usize, col: usize) -> f64 {
        self.data[row * self.cols + col]
    }

    pub fn into_data(self) -> Vec<f64> {
        self.data
    }
}
