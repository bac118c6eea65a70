//! Pellet positions to tract variables.
//!
//! Lip aperture is the UL–LL distance. Lip protrusion is the horizontal
//! coordinate of LL (of UL for the baseline variant). The tongue body is the
//! circle through T2, T3 and T4; its constriction degree is the circle's
//! distance to the extended palate and its location is minus the x of the
//! circle point realising that distance. The tongue tip constriction is T1's
//! distance to the extended palate, located at minus T1's x.

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::geometry::{
    circle_polyline_distance, circumcircle, point_polyline_distance, polyline_polyline_distance,
    DistanceWitness, GeometryError, Point,
};
use crate::model::{PalatalTrace, PelletFrame, PelletId, PelletTrack, TvFrame, TvTrack, Variant};

/// What to do when T2, T3 and T4 are collinear.
#[derive(Clone, Copy, Debug, Default, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum CollinearPolicy {
    EmitSentinel,
    /// Measure from the two-segment polyline T2–T3–T4 instead of a circle.
    #[default]
    PolylineFallback,
}

#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
#[serde(default)]
pub struct TvConfig {
    pub variant: Variant,
    pub resolution_mm: f64,
    pub collinear_policy: CollinearPolicy,
}

impl Default for TvConfig {
    fn default() -> Self {
        TvConfig {
            variant: Variant::Proposed,
            resolution_mm: 0.05,
            collinear_policy: CollinearPolicy::PolylineFallback,
        }
    }
}

impl TvConfig {
    pub fn with_variant(variant: Variant) -> Self {
        TvConfig {
            variant,
            ..TvConfig::default()
        }
    }

    pub fn validate(&self) -> Result<()> {
        if self.resolution_mm.is_finite() && self.resolution_mm > 0.0 {
            Ok(())
        } else {
            Err(Error::invalid(
                "tv config",
                format!("resolution {} mm must be positive", self.resolution_mm),
            ))
        }
    }
}

/// A constriction measured against the palate.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct Constriction {
    pub degree: f64,
    pub location: f64,
}

impl Constriction {
    pub const SENTINEL: Constriction = Constriction {
        degree: f64::NAN,
        location: f64::NAN,
    };
}

pub fn compute_la(ul: Point, ll: Point) -> f64 {
    if ul.is_finite() && ll.is_finite() {
        ul.dist(ll)
    } else {
        f64::NAN
    }
}

pub fn compute_lp(ul: Point, ll: Point, variant: Variant) -> f64 {
    let x = match variant {
        Variant::Proposed => ll.x,
        Variant::Baseline => ul.x,
    };
    if x.is_finite() {
        x
    } else {
        f64::NAN
    }
}

fn require_extended(epal: &PalatalTrace) -> Result<()> {
    if epal.is_extended() {
        Ok(())
    } else {
        Err(Error::invalid(
            "palatal trace",
            format!("trace for speaker {} is not extended", epal.speaker_id),
        ))
    }
}

/// Tongue-body witness against the palate, or `None` when the policy asks
/// for a sentinel.
fn tongue_body_witness(
    t2: Point,
    t3: Point,
    t4: Point,
    epal: &PalatalTrace,
    cfg: &TvConfig,
) -> Result<Option<DistanceWitness>> {
    match circumcircle(t2, t3, t4) {
        Ok(circle) => Ok(Some(circle_polyline_distance(
            &circle,
            epal.points(),
            cfg.resolution_mm,
        )?)),
        Err(GeometryError::Collinear) => match cfg.collinear_policy {
            CollinearPolicy::EmitSentinel => Ok(None),
            CollinearPolicy::PolylineFallback => {
                let mut tongue = vec![t2];
                for p in [t3, t4] {
                    if tongue.last() != Some(&p) {
                        tongue.push(p);
                    }
                }
                let w = if tongue.len() == 1 {
                    point_polyline_distance(t2, epal.points(), cfg.resolution_mm)?
                } else {
                    polyline_polyline_distance(&tongue, epal.points())?
                };
                Ok(Some(w))
            }
        },
        Err(e) => Err(e.into()),
    }
}

/// Tongue-body constriction degree (TBCD) and location (TBCL).
///
/// The baseline variant leaves the location as a sentinel.
pub fn compute_tongue_body(
    t2: Point,
    t3: Point,
    t4: Point,
    epal: &PalatalTrace,
    cfg: &TvConfig,
) -> Result<Constriction> {
    require_extended(epal)?;
    if !(t2.is_finite() && t3.is_finite() && t4.is_finite()) {
        return Ok(Constriction::SENTINEL);
    }
    let Some(w) = tongue_body_witness(t2, t3, t4, epal, cfg)? else {
        return Ok(Constriction::SENTINEL);
    };
    let location = match cfg.variant {
        Variant::Proposed => -w.point_a.x,
        Variant::Baseline => f64::NAN,
    };
    Ok(Constriction {
        degree: w.distance,
        location,
    })
}

/// Tongue-tip constriction degree (TTCD) and location (TTCL).
pub fn compute_tongue_tip(t1: Point, epal: &PalatalTrace, cfg: &TvConfig) -> Result<Constriction> {
    require_extended(epal)?;
    if !t1.is_finite() {
        return Ok(Constriction::SENTINEL);
    }
    let w = point_polyline_distance(t1, epal.points(), cfg.resolution_mm)?;
    Ok(Constriction {
        degree: w.distance,
        location: -t1.x,
    })
}

pub fn compute_tv_frame(frame: &PelletFrame, epal: &PalatalTrace, cfg: &TvConfig) -> Result<TvFrame> {
    let pos = |id| frame.position(id);
    let body = compute_tongue_body(pos(PelletId::T2), pos(PelletId::T3), pos(PelletId::T4), epal, cfg)?;
    let tip = compute_tongue_tip(pos(PelletId::T1), epal, cfg)?;
    Ok(TvFrame {
        la: compute_la(pos(PelletId::UL), pos(PelletId::LL)),
        lp: compute_lp(pos(PelletId::UL), pos(PelletId::LL), cfg.variant),
        tbcl: body.location,
        tbcd: body.degree,
        ttcl: tip.location,
        ttcd: tip.degree,
    })
}

/// Frame-wise transformation of a whole pellet track.
pub fn compute_tv_track(track: &PelletTrack, epal: &PalatalTrace, cfg: &TvConfig) -> Result<TvTrack> {
    cfg.validate()?;
    require_extended(epal)?;
    if track.is_empty() {
        return Err(Error::invalid(
            "pellet track",
            format!("{}/{} has no frames", track.speaker_id, track.utterance_id),
        ));
    }
    let frames = track
        .frames()
        .iter()
        .map(|f| compute_tv_frame(f, epal, cfg))
        .collect::<Result<Vec<_>>>()?;
    TvTrack::new(
        track.speaker_id.clone(),
        track.utterance_id.clone(),
        cfg.variant,
        track.rate_hz(),
        track.frames()[0].t,
        frames,
    )
}
