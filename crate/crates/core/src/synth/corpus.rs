use std::fs;
use std::path::{Path, PathBuf};

use serde::{Deserialize, Serialize};

use super::{synth_speaker, synth_utterance, ClipReport, SynthConfig};
use crate::error::{Error, Result};
use crate::eval::Sex;
use crate::features::write_wav;
use crate::io::{write_palatal_trace, write_pellet_track, write_tv_track};

pub const MANIFEST_FILE: &str = "manifest.json";

/// File paths are relative to the directory holding the manifest.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct ManifestUtterance {
    pub id: String,
    pub pellets: String,
    pub tv: String,
    pub wav: String,
    pub clipped: ClipReport,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct ManifestSpeaker {
    pub id: String,
    pub sex: Sex,
    /// Extended palate trace.
    pub palate: String,
    /// Pharyngeal wall x used for the extension.
    pub wall_x: f64,
    pub utterances: Vec<ManifestUtterance>,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct Manifest {
    pub seed: u64,
    pub pellet_rate_hz: f64,
    pub duration_s: f64,
    pub speakers: Vec<ManifestSpeaker>,
}

impl Manifest {
    pub fn read(path: &Path) -> Result<Self> {
        let text = fs::read_to_string(path).map_err(|e| Error::io(path, e))?;
        serde_json::from_str(&text).map_err(|e| Error::Decode {
            path: path.to_path_buf(),
            msg: e.to_string(),
        })
    }

    pub fn write(&self, path: &Path) -> Result<()> {
        let mut text = serde_json::to_string_pretty(self).expect("manifest serialises");
        text.push('\n');
        fs::write(path, text).map_err(|e| Error::io(path, e))
    }

    pub fn speaker_sexes(&self) -> Vec<(String, Sex)> {
        self.speakers.iter().map(|s| (s.id.clone(), s.sex)).collect()
    }

    pub fn utterance_count(&self) -> usize {
        self.speakers.iter().map(|s| s.utterances.len()).sum()
    }
}

/// Resolves a manifest-relative path.
pub fn manifest_path(manifest_file: &Path, rel: &str) -> PathBuf {
    manifest_file.parent().unwrap_or(Path::new(".")).join(rel)
}

fn create_dir(path: &Path) -> Result<()> {
    fs::create_dir_all(path).map_err(|e| Error::io(path, e))
}

/// Writes a full corpus under `out_dir`: `palate/`, `pellets/`, `tv/`,
/// `wav/` and `manifest.json`. Speakers and utterances are in index order.
pub fn synth_corpus(cfg: &SynthConfig, out_dir: &Path) -> Result<Manifest> {
    cfg.validate()?;
    for sub in ["palate", "pellets", "tv", "wav"] {
        create_dir(&out_dir.join(sub))?;
    }
    let mut speakers = Vec::with_capacity(cfg.n_speakers);
    for si in 0..cfg.n_speakers {
        let speaker = synth_speaker(cfg, si)?;
        let palate_rel = format!("palate/{}.csv", speaker.id);
        write_palatal_trace(&speaker.extended_palate()?, &out_dir.join(&palate_rel))?;

        let mut utterances = Vec::with_capacity(cfg.utterances_per_speaker);
        for ui in 0..cfg.utterances_per_speaker {
            let u = synth_utterance(cfg, &speaker, ui)?;
            let stem = format!("{}_{}", speaker.id, u.truth.utterance_id);
            let entry = ManifestUtterance {
                id: u.truth.utterance_id.clone(),
                pellets: format!("pellets/{stem}.csv"),
                tv: format!("tv/{stem}.csv"),
                wav: format!("wav/{stem}.wav"),
                clipped: u.clipped,
            };
            write_pellet_track(&u.pellets, &out_dir.join(&entry.pellets))?;
            write_tv_track(&u.truth, &out_dir.join(&entry.tv))?;
            write_wav(&u.audio, &out_dir.join(&entry.wav))?;
            utterances.push(entry);
        }
        speakers.push(ManifestSpeaker {
            id: speaker.id.clone(),
            sex: speaker.sex,
            palate: palate_rel,
            wall_x: speaker.extension.wall_x,
            utterances,
        });
    }
    let manifest = Manifest {
        seed: cfg.seed,
        pellet_rate_hz: cfg.pellet_rate_hz,
        duration_s: cfg.duration_s,
        speakers,
    };
    manifest.write(&out_dir.join(MANIFEST_FILE))?;
    Ok(manifest)
}
