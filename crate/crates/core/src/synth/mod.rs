//! Synthetic speakers whose tract variables are known in closed form.
//!
//! Each speaker gets a circular-arc palate sampled with a horizontal chord
//! at the dome top, and a straight soft-palate continuation collinear with
//! the last arc chord. Pellets are placed so that every TV is a prescribed
//! signal:
//!
//! * the lower lip sits `LA` away from the upper lip along a fixed
//!   per-speaker direction, with its x equal to `LP`;
//! * T1 hangs `TTCD` below the dome chord, shifted horizontally so that its
//!   x equals `-TTCL`;
//! * T2..T4 lie on a circle whose nearest approach to the soft-palate line
//!   is `TBCD`, slid along the line so the circle-side witness x equals
//!   `-TBCL`.
//!
//! Slide ranges keep the nearest palate segment fixed, so the geometry
//! reproduces the prescribed values exactly. Signals that leave the valid
//! region are clipped and counted. Audio is a sum of six tones whose
//! instantaneous frequencies are affine in the six TVs.

mod corpus;

use std::f64::consts::PI;

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::eval::Sex;
use crate::features::{AudioClip, SAMPLE_RATE_HZ};
use crate::geometry::{extend_palatal_trace, PalateExtension, Point};
use crate::model::{PalatalTrace, PelletFrame, PelletId, PelletTrack, Tv, TvFrame, TvTrack, Variant};

pub use corpus::{manifest_path, synth_corpus, Manifest, ManifestSpeaker, ManifestUtterance, MANIFEST_FILE};

/// Slack kept between a prescribed point and the edge of its valid region.
const EDGE_MARGIN_MM: f64 = 0.05;

/// Closed interval sampled uniformly per speaker or utterance.
pub type Range = [f64; 2];

fn draw(rng: &mut ChaCha8Rng, r: Range) -> f64 {
    if r[0] == r[1] {
        r[0]
    } else {
        rng.gen_range(r[0]..=r[1])
    }
}

fn check_range(what: &str, r: Range, min: f64) -> Result<()> {
    if r.iter().all(|v| v.is_finite()) && r[0] <= r[1] && r[0] >= min {
        Ok(())
    } else {
        Err(Error::invalid(
            "synth config",
            format!("{what} range [{}, {}] must be ordered and at least {min}", r[0], r[1]),
        ))
    }
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(default)]
pub struct PalateShape {
    /// Chord between the anterior and posterior arc ends.
    pub length_mm: Range,
    /// Dome height above that chord.
    pub height_mm: Range,
    /// Arc samples; must be even so the dome top is a horizontal chord.
    pub n_points: usize,
    /// Horizontal gap from the posterior arc end to the pharyngeal wall.
    pub wall_gap_mm: Range,
}

impl Default for PalateShape {
    fn default() -> Self {
        PalateShape {
            length_mm: [45.0, 55.0],
            height_mm: [10.0, 14.0],
            n_points: 10,
            wall_gap_mm: [20.0, 28.0],
        }
    }
}

/// Sinusoidal excursion of one TV around its speaker rest value.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct TvMotion {
    pub freq_hz: Range,
    pub amp_mm: Range,
    /// Fixed phase in radians; drawn uniformly when absent.
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub phase: Option<f64>,
}

impl TvMotion {
    pub fn new(freq_hz: Range, amp_mm: Range) -> Self {
        TvMotion {
            freq_hz,
            amp_mm,
            phase: None,
        }
    }

    pub fn still() -> Self {
        TvMotion::new([0.0, 0.0], [0.0, 0.0])
    }
}

/// Per-TV motion, in TV order.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(default)]
pub struct MotionParams {
    #[serde(rename = "LA")]
    pub la: TvMotion,
    #[serde(rename = "LP")]
    pub lp: TvMotion,
    #[serde(rename = "TBCL")]
    pub tbcl: TvMotion,
    #[serde(rename = "TBCD")]
    pub tbcd: TvMotion,
    #[serde(rename = "TTCL")]
    pub ttcl: TvMotion,
    #[serde(rename = "TTCD")]
    pub ttcd: TvMotion,
}

impl Default for MotionParams {
    fn default() -> Self {
        MotionParams {
            la: TvMotion::new([1.0, 4.0], [1.0, 4.0]),
            lp: TvMotion::new([0.5, 3.0], [0.5, 2.0]),
            tbcl: TvMotion::new([0.5, 3.0], [1.0, 4.0]),
            tbcd: TvMotion::new([1.0, 4.0], [1.0, 4.0]),
            ttcl: TvMotion::new([1.0, 4.0], [0.3, 1.0]),
            ttcd: TvMotion::new([1.0, 5.0], [1.0, 4.0]),
        }
    }
}

impl MotionParams {
    pub fn still() -> Self {
        MotionParams {
            la: TvMotion::still(),
            lp: TvMotion::still(),
            tbcl: TvMotion::still(),
            tbcd: TvMotion::still(),
            ttcl: TvMotion::still(),
            ttcd: TvMotion::still(),
        }
    }

    pub fn get(&self, tv: Tv) -> &TvMotion {
        match tv {
            Tv::LA => &self.la,
            Tv::LP => &self.lp,
            Tv::TBCL => &self.tbcl,
            Tv::TBCD => &self.tbcd,
            Tv::TTCL => &self.ttcl,
            Tv::TTCD => &self.ttcd,
        }
    }
}

/// Tone for one TV: `center_hz + hz_per_mm * (tv - ref_mm)`.
#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
pub struct ToneMap {
    pub center_hz: f64,
    pub hz_per_mm: f64,
    pub ref_mm: f64,
}

impl ToneMap {
    pub fn frequency(&self, tv: f64) -> f64 {
        self.center_hz + self.hz_per_mm * (tv - self.ref_mm)
    }
}

/// TV-to-tone mapping, in TV order, plus the per-tone amplitude.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(default)]
pub struct AudioMapping {
    pub tones: [ToneMap; 6],
    pub amplitude: f64,
}

impl Default for AudioMapping {
    fn default() -> Self {
        let tone = |center_hz, ref_mm| ToneMap {
            center_hz,
            hz_per_mm: 20.0,
            ref_mm,
        };
        AudioMapping {
            tones: [
                tone(500.0, 11.0),
                tone(1000.0, 13.0),
                tone(1600.0, 65.0),
                tone(2300.0, 6.5),
                tone(3100.0, 25.0),
                tone(4000.0, 6.5),
            ],
            amplitude: 0.12,
        }
    }
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(default)]
pub struct SynthConfig {
    pub seed: u64,
    pub n_speakers: usize,
    pub utterances_per_speaker: usize,
    pub duration_s: f64,
    pub pellet_rate_hz: f64,
    pub palate: PalateShape,
    pub motion: MotionParams,
    pub audio: AudioMapping,
    /// Probability that any one pellet sample is flagged mistracked.
    pub mistrack_rate: f64,
}

impl Default for SynthConfig {
    fn default() -> Self {
        SynthConfig {
            seed: 0,
            n_speakers: 4,
            utterances_per_speaker: 3,
            duration_s: 5.0,
            pellet_rate_hz: 145.0,
            palate: PalateShape::default(),
            motion: MotionParams::default(),
            audio: AudioMapping::default(),
            mistrack_rate: 0.0,
        }
    }
}

impl SynthConfig {
    pub fn validate(&self) -> Result<()> {
        let bad = |msg: String| Err(Error::invalid("synth config", msg));
        if self.n_speakers == 0 || self.utterances_per_speaker == 0 {
            return bad("speaker and utterance counts must be positive".into());
        }
        if !(self.duration_s.is_finite() && self.duration_s > 0.0) {
            return bad(format!("duration {} s must be positive", self.duration_s));
        }
        if !(self.pellet_rate_hz.is_finite() && self.pellet_rate_hz > 0.0) {
            return bad(format!("pellet rate {} Hz must be positive", self.pellet_rate_hz));
        }
        let p = &self.palate;
        check_range("palate length", p.length_mm, 1.0)?;
        check_range("palate height", p.height_mm, 0.5)?;
        check_range("wall gap", p.wall_gap_mm, 1.0)?;
        if p.height_mm[1] * 2.0 >= p.length_mm[0] {
            return bad("palate height must stay below half its length".into());
        }
        if p.n_points < 4 || p.n_points % 2 != 0 {
            return bad(format!("palate needs an even number of at least 4 points, got {}", p.n_points));
        }
        for tv in Tv::ALL {
            let m = self.motion.get(tv);
            check_range(&format!("{tv} frequency"), m.freq_hz, 0.0)?;
            check_range(&format!("{tv} amplitude"), m.amp_mm, 0.0)?;
            if m.phase.is_some_and(|ph| !ph.is_finite()) {
                return bad(format!("{tv} phase must be finite"));
            }
        }
        let a = &self.audio;
        let nyquist = SAMPLE_RATE_HZ as f64 / 2.0;
        if !(a.amplitude > 0.0 && a.amplitude * 6.0 <= 1.0) {
            return bad(format!("tone amplitude {} must be in (0, 1/6]", a.amplitude));
        }
        for t in &a.tones {
            if !(t.center_hz > 0.0 && t.center_hz < nyquist && t.hz_per_mm.is_finite() && t.ref_mm.is_finite()) {
                return bad(format!("tone centre {} Hz must lie in (0, {nyquist})", t.center_hz));
            }
        }
        if !(0.0..1.0).contains(&self.mistrack_rate) {
            return bad(format!("mistrack rate {} must be in [0, 1)", self.mistrack_rate));
        }
        Ok(())
    }

    pub fn speaker_id(&self, index: usize) -> String {
        format!("S{index:02}")
    }

    pub fn utterance_id(&self, index: usize) -> String {
        format!("U{index:02}")
    }

    fn rng(&self, stream: u64) -> ChaCha8Rng {
        let mut rng = ChaCha8Rng::seed_from_u64(self.seed);
        rng.set_stream(stream);
        rng
    }
}

/// Per-speaker rest positions and sizes.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct Anatomy {
    pub palate_length_mm: f64,
    pub palate_height_mm: f64,
    pub wall_gap_mm: f64,
    /// Upper-lip height; the upper lip moves only horizontally.
    pub upper_lip_y: f64,
    /// Angle of the lip-opening direction from straight down, towards +x.
    pub lip_tilt_rad: f64,
    pub tongue_body_radius_mm: f64,
    /// Angle between neighbouring tongue-body pellets on their circle.
    pub tongue_pellet_spread_rad: f64,
    /// Rest value of each TV, in TV order.
    pub rest: [f64; 6],
}

/// Derived palate features the pellet construction relies on.
#[derive(Clone, Copy, Debug, PartialEq)]
struct PalateFrame {
    /// Midpoint and half-length of the horizontal dome chord.
    dome_mid: Point,
    dome_half: f64,
    /// Turning angle between consecutive arc chords.
    arc_turn: f64,
    /// Soft-palate line: start, unit direction, length up to the wall.
    line_start: Point,
    line_dir: Point,
    line_len: f64,
    /// Unit normal pointing from the line into the oral cavity.
    line_normal: Point,
    /// Turning angle from the line into the vertical wall.
    wall_turn: f64,
}

#[derive(Clone, Debug, PartialEq)]
pub struct SynthSpeaker {
    pub index: usize,
    pub id: String,
    pub sex: Sex,
    /// Unextended arc, anterior end first, strictly decreasing x.
    pub palate: PalatalTrace,
    pub extension: PalateExtension,
    pub anatomy: Anatomy,
    frame: PalateFrame,
}

impl SynthSpeaker {
    pub fn extended_palate(&self) -> Result<PalatalTrace> {
        extend_palatal_trace(&self.palate, &self.extension)
    }

    /// Usable slide range along the soft-palate line for a circle at
    /// normal distance `rho` from it.
    fn body_slide_range(&self, rho: f64) -> (f64, f64) {
        let f = &self.frame;
        (
            rho * (f.arc_turn / 2.0).tan() + EDGE_MARGIN_MM,
            f.line_len - rho * (f.wall_turn / 2.0).tan() - EDGE_MARGIN_MM,
        )
    }

    /// Largest TBCD that still leaves 1 mm of slide range.
    fn max_tbcd(&self) -> f64 {
        let f = &self.frame;
        let k = (f.arc_turn / 2.0).tan() + (f.wall_turn / 2.0).tan();
        (f.line_len - 2.0 * EDGE_MARGIN_MM - 1.0) / k - self.anatomy.tongue_body_radius_mm
    }

    /// Largest horizontal tongue-tip shift at depth `d` below the dome.
    fn tip_slide_limit(&self, d: f64) -> f64 {
        self.frame.dome_half - d * (self.frame.arc_turn / 2.0).tan() - EDGE_MARGIN_MM
    }
}

/// Arc and derived frame for a speaker's palate.
fn build_palate(length: f64, height: f64, n: usize, wall_gap: f64) -> (Vec<Point>, f64, PalateFrame) {
    let radius = (length * length / 4.0 + height * height) / (2.0 * height);
    let half_angle = (length / 2.0 / radius).asin();
    let center = Point::new(-length / 2.0, height - radius);
    let step = 2.0 * half_angle / (n - 1) as f64;
    let pts: Vec<Point> = (0..n)
        .map(|k| {
            let phi = PI / 2.0 - half_angle + k as f64 * step;
            center + Point::new(phi.cos(), phi.sin()) * radius
        })
        .collect();

    let (a, b) = (pts[n / 2 - 1], pts[n / 2]);
    let dome_mid = a.lerp(b, 0.5);
    let line_start = pts[n - 2];
    let end = pts[n - 1];
    let line_dir = (end - line_start) * (1.0 / end.dist(line_start));
    let wall_x = end.x - wall_gap;
    let line_len = (wall_x - line_start.x) / line_dir.x;
    let frame = PalateFrame {
        dome_mid,
        dome_half: a.dist(b) / 2.0,
        arc_turn: step,
        line_start,
        line_dir,
        line_len,
        line_normal: Point::new(-line_dir.y, line_dir.x),
        wall_turn: (-line_dir.y).acos(),
    };
    (pts, wall_x, frame)
}

/// Deterministic speaker for `(cfg.seed, index)`.
pub fn synth_speaker(cfg: &SynthConfig, index: usize) -> Result<SynthSpeaker> {
    cfg.validate()?;
    if index >= cfg.n_speakers {
        return Err(Error::invalid(
            "synth speaker",
            format!("index {index} is out of range for {} speakers", cfg.n_speakers),
        ));
    }
    let mut rng = cfg.rng((index as u64) << 32 | 0xFFFF_FFFF);
    let p = &cfg.palate;
    let length = draw(&mut rng, p.length_mm);
    let height = draw(&mut rng, p.height_mm);
    let wall_gap = draw(&mut rng, p.wall_gap_mm);
    let (pts, wall_x, frame) = build_palate(length, height, p.n_points, wall_gap);

    let id = cfg.speaker_id(index);
    let palate = PalatalTrace::new(id.clone(), pts, false)?;
    let mut speaker = SynthSpeaker {
        index,
        id,
        sex: if index % 2 == 0 { Sex::Male } else { Sex::Female },
        palate,
        extension: PalateExtension::new(wall_x),
        anatomy: Anatomy {
            palate_length_mm: length,
            palate_height_mm: height,
            wall_gap_mm: wall_gap,
            upper_lip_y: rng.gen_range(-6.0..=-2.0),
            lip_tilt_rad: rng.gen_range(0.05..=0.35),
            tongue_body_radius_mm: rng.gen_range(18.0..=24.0),
            tongue_pellet_spread_rad: rng.gen_range(0.7..=0.95),
            rest: [0.0; 6],
        },
        frame,
    };

    let la = rng.gen_range(8.0..=14.0);
    let lp = rng.gen_range(10.0..=16.0);
    let tbcd = rng.gen_range(5.0f64..=8.0).min(speaker.max_tbcd());
    let ttcd = rng.gen_range(5.0..=8.0);
    let ttcl = -(frame.dome_mid.x + rng.gen_range(-0.3..=0.3));
    let (lo, hi) = speaker.body_slide_range(speaker.anatomy.tongue_body_radius_mm + tbcd);
    let sigma = lo + (hi - lo) * rng.gen_range(0.4..=0.6);
    let witness = frame.line_start + frame.line_dir * sigma + frame.line_normal * tbcd;
    speaker.anatomy.rest = [la, lp, -witness.x, tbcd, ttcl, ttcd];
    Ok(speaker)
}

/// One TV's sinusoid for a given utterance.
#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
pub struct Sinusoid {
    pub offset: f64,
    pub amp: f64,
    pub freq_hz: f64,
    pub phase: f64,
}

impl Sinusoid {
    pub fn at(&self, t: f64) -> f64 {
        self.offset + self.amp * (2.0 * PI * self.freq_hz * t + self.phase).sin()
    }
}

/// Frames (and audio samples) where a TV had to be clipped, in TV order.
#[derive(Clone, Copy, Debug, Default, PartialEq, Eq, Serialize, Deserialize)]
pub struct ClipReport {
    pub frames: [usize; 6],
}

impl ClipReport {
    pub fn total(&self) -> usize {
        self.frames.iter().sum()
    }
}

#[derive(Clone, Debug, PartialEq)]
pub struct SynthUtterance {
    pub pellets: PelletTrack,
    /// Ground truth at the pellet frame times.
    pub truth: TvTrack,
    pub audio: AudioClip,
    pub signals: [Sinusoid; 6],
    pub clipped: ClipReport,
}

/// Prescribed TVs at time `t` after clipping into the valid region, with a
/// flag per TV that was clipped.
fn clipped_tvs(speaker: &SynthSpeaker, signals: &[Sinusoid; 6], t: f64) -> ([f64; 6], [bool; 6]) {
    let raw: [f64; 6] = std::array::from_fn(|i| signals[i].at(t));
    let mut v = raw;
    let f = &speaker.frame;
    v[Tv::LA.index()] = v[Tv::LA.index()].max(0.0);
    v[Tv::TTCD.index()] = v[Tv::TTCD.index()].max(0.0);
    let limit = speaker.tip_slide_limit(v[Tv::TTCD.index()]).max(0.0);
    let shift = (-v[Tv::TTCL.index()] - f.dome_mid.x).clamp(-limit, limit);
    v[Tv::TTCL.index()] = -(f.dome_mid.x + shift);

    let d = v[Tv::TBCD.index()].clamp(0.0, speaker.max_tbcd());
    v[Tv::TBCD.index()] = d;
    let (lo, hi) = speaker.body_slide_range(speaker.anatomy.tongue_body_radius_mm + d);
    let x_off = f.line_start.x + f.line_normal.x * d;
    let sigma = ((-v[Tv::TBCL.index()] - x_off) / f.line_dir.x).clamp(lo, hi);
    v[Tv::TBCL.index()] = -(x_off + f.line_dir.x * sigma);

    let tol = 1e-9;
    let flags = std::array::from_fn(|i| (v[i] - raw[i]).abs() > tol);
    (v, flags)
}

fn rotate(p: Point, angle: f64) -> Point {
    let (s, c) = angle.sin_cos();
    Point::new(c * p.x - s * p.y, s * p.x + c * p.y)
}

/// Pellet positions realising a set of (already clipped) TVs.
pub fn place_pellets(speaker: &SynthSpeaker, tv: &[f64; 6]) -> [Point; 8] {
    let f = &speaker.frame;
    let a = &speaker.anatomy;
    let [la, lp, tbcl, tbcd, ttcl, ttcd] = *tv;

    let lip_dir = Point::new(a.lip_tilt_rad.sin(), -a.lip_tilt_rad.cos());
    let ll = Point::new(lp, a.upper_lip_y + la * lip_dir.y);
    let ul = Point::new(lp - la * lip_dir.x, a.upper_lip_y);

    let t1 = Point::new(-ttcl, f.dome_mid.y - ttcd);

    let x_off = f.line_start.x + f.line_normal.x * tbcd;
    let sigma = (-tbcl - x_off) / f.line_dir.x;
    let foot = f.line_start + f.line_dir * sigma;
    let rb = a.tongue_body_radius_mm;
    let center = foot + f.line_normal * (rb + tbcd);
    let up = -f.line_normal;
    let body = |k: f64| center + rotate(up, k * a.tongue_pellet_spread_rad) * rb;

    let man_i = Point::new(ul.x - 4.0, ll.y - 12.0);
    let man_m = Point::new(man_i.x - 30.0, man_i.y - 5.0);
    [ul, ll, t1, body(-1.0), body(0.0), body(1.0), man_i, man_m]
}

/// Deterministic utterance for `(cfg.seed, speaker.index, index)`.
pub fn synth_utterance(cfg: &SynthConfig, speaker: &SynthSpeaker, index: usize) -> Result<SynthUtterance> {
    cfg.validate()?;
    let mut rng = cfg.rng((speaker.index as u64) << 32 | index as u64);
    let signals: [Sinusoid; 6] = std::array::from_fn(|i| {
        let m = cfg.motion.get(Tv::ALL[i]);
        let freq_hz = draw(&mut rng, m.freq_hz);
        let amp = draw(&mut rng, m.amp_mm);
        let drawn = rng.gen_range(0.0..2.0 * PI);
        Sinusoid {
            offset: speaker.anatomy.rest[i],
            amp,
            freq_hz,
            phase: m.phase.unwrap_or(drawn),
        }
    });

    let utt = cfg.utterance_id(index);
    let n_frames = (cfg.duration_s * cfg.pellet_rate_hz).floor() as usize + 1;
    let mut clipped = ClipReport::default();
    let mut pellet_frames = Vec::with_capacity(n_frames);
    let mut tv_frames = Vec::with_capacity(n_frames);
    for i in 0..n_frames {
        let t = i as f64 / cfg.pellet_rate_hz;
        let (tv, flags) = clipped_tvs(speaker, &signals, t);
        for (c, hit) in clipped.frames.iter_mut().zip(flags) {
            *c += hit as usize;
        }
        let mut frame = PelletFrame::new(t, place_pellets(speaker, &tv));
        if cfg.mistrack_rate > 0.0 {
            for id in PelletId::ALL {
                if rng.gen_bool(cfg.mistrack_rate) {
                    frame.invalidate(id);
                }
            }
        }
        pellet_frames.push(frame);
        tv_frames.push(TvFrame::from_array(tv));
    }

    let n_samples = (cfg.duration_s * SAMPLE_RATE_HZ as f64).round() as usize;
    let dt = 1.0 / SAMPLE_RATE_HZ as f64;
    let mut phases = [0.0f64; 6];
    let mut samples = Vec::with_capacity(n_samples);
    for j in 0..n_samples {
        let (tv, _) = clipped_tvs(speaker, &signals, j as f64 * dt);
        let mut s = 0.0;
        for (k, phase) in phases.iter_mut().enumerate() {
            s += phase.sin();
            let f = cfg.audio.tones[k].frequency(tv[k]).clamp(0.0, SAMPLE_RATE_HZ as f64 / 2.0);
            *phase = (*phase + 2.0 * PI * f * dt) % (2.0 * PI);
        }
        samples.push(cfg.audio.amplitude * s);
    }

    Ok(SynthUtterance {
        pellets: PelletTrack::new(speaker.id.clone(), utt.clone(), cfg.pellet_rate_hz, pellet_frames)?,
        truth: TvTrack::new(
            speaker.id.clone(),
            utt.clone(),
            Variant::Proposed,
            cfg.pellet_rate_hz,
            0.0,
            tv_frames,
        )?,
        audio: AudioClip::new(speaker.id.clone(), utt, SAMPLE_RATE_HZ, samples)?,
        signals,
        clipped,
    })
}
