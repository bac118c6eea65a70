use std::collections::BTreeMap;

use serde::{Deserialize, Serialize};

use super::ppmc::{ppmc, PpmcError};
use super::report::{DatasetTag, PpmcReport};
use crate::error::{Error, Result};
use crate::model::{FeatureKind, Tv, TvTrack};

/// How per-utterance material is pooled into one score per TV.
#[derive(Clone, Copy, Debug, Default, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum EvalMode {
    /// One correlation over all test frames, utterances concatenated in
    /// (speaker, utterance) order.
    #[default]
    Concatenated,
    /// Mean of per-utterance correlations; utterances where a TV's
    /// correlation is undefined are left out of that TV's mean.
    PerUtteranceMean,
}

impl std::str::FromStr for EvalMode {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        match s {
            "concatenated" => Ok(EvalMode::Concatenated),
            "per-utterance-mean" => Ok(EvalMode::PerUtteranceMean),
            _ => Err(Error::invalid("evaluation mode", format!("unknown mode {s:?}"))),
        }
    }
}

impl std::fmt::Display for EvalMode {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        f.write_str(match self {
            EvalMode::Concatenated => "concatenated",
            EvalMode::PerUtteranceMean => "per-utterance-mean",
        })
    }
}

/// Labels stored alongside the scores in a report.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct EvalLabels {
    pub dataset: DatasetTag,
    pub feature_kind: FeatureKind,
}

type Key = (String, String);

fn index<'a>(tracks: &'a [TvTrack], side: &str) -> Result<BTreeMap<Key, &'a TvTrack>> {
    let mut map = BTreeMap::new();
    for t in tracks {
        let key = (t.speaker_id.clone(), t.utterance_id.clone());
        if map.insert(key, t).is_some() {
            return Err(Error::invalid(
                "evaluation",
                format!("duplicate {side} track {}/{}", t.speaker_id, t.utterance_id),
            ));
        }
    }
    Ok(map)
}

/// Matches predictions to ground truth by (speaker, utterance), checking
/// key sets and per-pair lengths. Pairs come back in key order.
pub fn pair_tracks<'a>(
    pred: &'a [TvTrack],
    truth: &'a [TvTrack],
) -> Result<Vec<(&'a TvTrack, &'a TvTrack)>> {
    let p = index(pred, "prediction")?;
    let t = index(truth, "truth")?;
    let mut problems = Vec::new();
    for k in t.keys().filter(|k| !p.contains_key(*k)) {
        problems.push(format!("missing prediction for {}/{}", k.0, k.1));
    }
    for k in p.keys().filter(|k| !t.contains_key(*k)) {
        problems.push(format!("no ground truth for {}/{}", k.0, k.1));
    }
    for (k, tt) in &t {
        if let Some(pp) = p.get(k) {
            if pp.len() != tt.len() {
                problems.push(format!(
                    "length mismatch for {}/{}: {} predicted vs {} true frames",
                    k.0,
                    k.1,
                    pp.len(),
                    tt.len()
                ));
            }
        }
    }
    if !problems.is_empty() {
        return Err(Error::invalid("evaluation", problems.join("; ")));
    }
    if t.is_empty() {
        return Err(Error::invalid("evaluation", "no tracks to evaluate"));
    }
    Ok(t.iter().map(|(k, tt)| (p[k], *tt)).collect())
}

fn ppmc_err(tv: Tv, e: PpmcError) -> Error {
    Error::invalid("evaluation", format!("{tv}: {e}"))
}

/// Per-TV PPMC between predicted and true tracks, in TV order.
pub fn score_tracks(pred: &[TvTrack], truth: &[TvTrack], mode: EvalMode) -> Result<[f64; 6]> {
    let pairs = pair_tracks(pred, truth)?;
    let mut scores = [0.0; 6];
    for tv in Tv::ALL {
        scores[tv.index()] = match mode {
            EvalMode::Concatenated => {
                let (mut x, mut y) = (Vec::new(), Vec::new());
                for (p, t) in &pairs {
                    x.extend(p.channel(tv));
                    y.extend(t.channel(tv));
                }
                ppmc(&x, &y).map_err(|e| ppmc_err(tv, e))?
            }
            EvalMode::PerUtteranceMean => {
                let mut acc = Vec::new();
                let mut last_err = None;
                for (p, t) in &pairs {
                    match ppmc(&p.channel(tv), &t.channel(tv)) {
                        Ok(r) => acc.push(r),
                        Err(e) => last_err = Some(e),
                    }
                }
                if acc.is_empty() {
                    return Err(ppmc_err(tv, last_err.unwrap_or(PpmcError::InsufficientPairs(0))));
                }
                acc.iter().sum::<f64>() / acc.len() as f64
            }
        };
    }
    Ok(scores)
}

/// Scores predictions against ground truth and packages a report. The
/// variant is taken from the ground-truth tracks.
pub fn evaluate_tracks(
    pred: &[TvTrack],
    truth: &[TvTrack],
    mode: EvalMode,
    labels: EvalLabels,
) -> Result<PpmcReport> {
    let scores = score_tracks(pred, truth, mode)?;
    let variant = truth.first().map(|t| t.variant).unwrap_or_default();
    PpmcReport::new(variant, labels.dataset, labels.feature_kind, scores)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::model::{TvFrame, Variant};

    fn track(spk: &str, utt: &str, f: impl Fn(usize) -> [f64; 6], n: usize) -> TvTrack {
        let frames = (0..n).map(|i| TvFrame::from_array(f(i))).collect();
        TvTrack::new(spk, utt, Variant::Proposed, 100.0, 0.0, frames).unwrap()
    }

    fn wave(phase: f64) -> impl Fn(usize) -> [f64; 6] {
        move |i| {
            let mut v = [0.0; 6];
            for (k, x) in v.iter_mut().enumerate() {
                *x = ((i as f64) * 0.1 * (k + 1) as f64 + phase).sin() + k as f64;
            }
            v
        }
    }

    const LABELS: EvalLabels = EvalLabels {
        dataset: DatasetTag::Other,
        feature_kind: FeatureKind::Mfcc13,
    };

    #[test]
    fn self_correlation_is_one() {
        let truth = vec![track("a", "1", wave(0.0), 50), track("b", "1", wave(1.0), 70)];
        for mode in [EvalMode::Concatenated, EvalMode::PerUtteranceMean] {
            let r = evaluate_tracks(&truth, &truth, mode, LABELS).unwrap();
            assert!(r.scores.to_array().iter().all(|s| (s - 1.0).abs() < 1e-12));
            assert!((r.average - 1.0).abs() < 1e-12);
        }
    }

    #[test]
    fn key_and_length_problems_are_listed() {
        let truth = vec![track("a", "1", wave(0.0), 50), track("b", "2", wave(0.0), 50)];
        let pred = vec![track("a", "1", wave(0.0), 49)];
        let msg = score_tracks(&pred, &truth, EvalMode::Concatenated).unwrap_err().to_string();
        assert!(msg.contains("missing prediction for b/2"), "{msg}");
        assert!(msg.contains("length mismatch for a/1"), "{msg}");
    }

    #[test]
    fn modes_differ_on_heterogeneous_material() {
        let truth = vec![track("a", "1", wave(0.0), 40), track("a", "2", |i| wave(0.3)(i).map(|v| v * 10.0), 40)];
        let pred = vec![track("a", "1", wave(0.2), 40), track("a", "2", |i| wave(0.3)(i).map(|v| v * 10.0 + 1.0), 40)];
        let c = score_tracks(&pred, &truth, EvalMode::Concatenated).unwrap();
        let m = score_tracks(&pred, &truth, EvalMode::PerUtteranceMean).unwrap();
        assert!(c.iter().zip(&m).any(|(a, b)| (a - b).abs() > 1e-6));
    }
}
