use std::collections::BTreeMap;
use std::fs;
use std::path::{Path, PathBuf};

use serde_json::json;
use tvkit::features::{
    align_tv_to_rate, extract_mfcc, read_wav, segment_len, segment_matrix, validate_ssl_matrix,
    znormalize,
};
use tvkit::geometry::{extend_palatal_trace, PalateExtension};
use tvkit::io::{
    read_feature_matrix, read_palatal_trace, read_pellet_track, read_tv_track, write_feature_matrix,
    write_tv_track,
};
use tvkit::synth::synth_corpus;
use tvkit::tract::compute_tv_track;
use tvkit::{Error, FeatureKind, FeatureMatrix, MfccConfig, PalatalTrace, PipelineConfig, Result, SynthConfig, TvConfig};

use crate::{pick, required, AlignArgs, FeaturizeArgs, SynthArgs, TransformArgs};

/// Files in `dir` with extension `ext`, sorted by name.
pub(crate) fn list_files(dir: &Path, ext: &str) -> Result<Vec<PathBuf>> {
    let entries = fs::read_dir(dir).map_err(|e| Error::io(dir, e))?;
    let mut out = Vec::new();
    for entry in entries {
        let path = entry.map_err(|e| Error::io(dir, e))?.path();
        if path.is_file() && path.extension().is_some_and(|x| x == ext) {
            out.push(path);
        }
    }
    out.sort();
    Ok(out)
}

pub(crate) fn create_dir(dir: &Path) -> Result<()> {
    fs::create_dir_all(dir).map_err(|e| Error::io(dir, e))
}

/// Runs `f` over every item, logging per-item failures, and fails once at
/// the end if any item failed.
fn for_each_file<T>(what: &'static str, items: &[T], name: impl Fn(&T) -> String, mut f: impl FnMut(&T) -> Result<()>) -> Result<()> {
    let mut failed = 0;
    for item in items {
        if let Err(e) = f(item) {
            log::error!("{}: {e}", name(item));
            failed += 1;
        }
    }
    if failed > 0 {
        return Err(Error::invalid(what, format!("{failed} of {} files failed", items.len())));
    }
    Ok(())
}

pub fn synth(cfg: &PipelineConfig, a: SynthArgs) -> Result<()> {
    let out = required(cfg.paths.output_root.clone().or(a.out), "out")?;
    let synth_cfg = match &cfg.synth {
        Some(s) => {
            log::info!("using [synth] section from the config file");
            s.clone()
        }
        None => SynthConfig {
            seed: a.seed,
            n_speakers: a.speakers,
            utterances_per_speaker: a.utterances,
            duration_s: a.duration,
            pellet_rate_hz: a.pellet_rate,
            mistrack_rate: a.mistrack_rate,
            ..SynthConfig::default()
        },
    };
    let manifest = synth_corpus(&synth_cfg, &out)?;
    let clipped: usize = manifest
        .speakers
        .iter()
        .flat_map(|s| &s.utterances)
        .map(|u| u.clipped.total())
        .sum();
    if clipped > 0 {
        log::warn!("{clipped} TV samples were clipped into the valid region; see manifest.json");
    }
    log::info!(
        "wrote {} speakers, {} utterances to {}",
        manifest.speakers.len(),
        manifest.utterance_count(),
        out.display()
    );
    Ok(())
}

pub fn transform(cfg: &PipelineConfig, a: TransformArgs) -> Result<()> {
    let root = required(cfg.paths.data_root.clone().or(a.data_root), "data-root")?;
    let out = required(cfg.paths.output_root.clone().or(a.out), "out")?;
    let tv_cfg = pick(
        cfg.tv,
        TvConfig {
            variant: a.variant,
            resolution_mm: a.resolution,
            collinear_policy: a.collinear.into(),
        },
    );
    tv_cfg.validate()?;
    let extension = a.extend_palate.then(|| PalateExtension {
        wall_drop_mm: a.wall_drop,
        ..PalateExtension::new(a.wall_x.expect("clap enforces --wall-x"))
    });

    let files = list_files(&root.join("pellets"), "csv")?;
    if files.is_empty() {
        return Err(Error::invalid("transform", format!("no pellet files under {}", root.join("pellets").display())));
    }
    create_dir(&out)?;
    let mut palates: BTreeMap<String, PalatalTrace> = BTreeMap::new();
    for_each_file("transform", &files, |p| p.display().to_string(), |path| {
        let track = read_pellet_track(path)?;
        let spk = track.speaker_id.clone();
        if !palates.contains_key(&spk) {
            let ppath = root.join("palate").join(format!("{spk}.csv"));
            if !ppath.is_file() {
                return Err(Error::invalid(
                    "palate",
                    format!("no palate file for speaker {spk} (expected {})", ppath.display()),
                ));
            }
            let mut trace = read_palatal_trace(&ppath)?;
            if let Some(ext) = &extension {
                trace = extend_palatal_trace(&trace, ext)?;
            }
            palates.insert(spk.clone(), trace);
        }
        let tvs = compute_tv_track(&track, &palates[&spk], &tv_cfg)?;
        write_tv_track(&tvs, &out.join(format!("{spk}_{}.csv", track.utterance_id)))
    })?;
    log::info!("wrote {} {} TV tracks to {}", files.len(), tv_cfg.variant, out.display());
    Ok(())
}

fn ids_from_stem(path: &Path) -> (String, String) {
    let stem = path.file_stem().map(|s| s.to_string_lossy().into_owned()).unwrap_or_default();
    match stem.split_once('_') {
        Some((s, u)) => (s.to_string(), u.to_string()),
        None => (stem.clone(), stem),
    }
}

fn expand_inputs(inputs: &[PathBuf], ext: &str) -> Result<Vec<PathBuf>> {
    let mut files = Vec::new();
    for p in inputs {
        if p.is_dir() {
            files.extend(list_files(p, ext)?);
        } else {
            files.push(p.clone());
        }
    }
    Ok(files)
}

pub fn featurize(cfg: &PipelineConfig, a: FeaturizeArgs) -> Result<()> {
    let out = required(cfg.paths.output_root.clone().or(a.out), "out")?;
    let mfcc_cfg = cfg.mfcc.clone().unwrap_or_else(MfccConfig::default);
    let ext = match a.kind {
        FeatureKind::Mfcc13 => "wav",
        FeatureKind::Ssl1024 => "ftm",
    };
    let files = expand_inputs(&a.inputs, ext)?;
    if files.is_empty() {
        return Err(Error::invalid("featurize", format!("no .{ext} inputs found")));
    }
    create_dir(&out)?;

    let mut entries = Vec::new();
    let mut rate = 0.0;
    for_each_file("featurize", &files, |p| p.display().to_string(), |path| {
        let (spk, utt) = ids_from_stem(path);
        let m: FeatureMatrix = match a.kind {
            FeatureKind::Mfcc13 => znormalize(&extract_mfcc(&read_wav(path, &spk, &utt)?, &mfcc_cfg)?)?,
            FeatureKind::Ssl1024 => validate_ssl_matrix(read_feature_matrix(path)?)?,
        };
        rate = m.rate_hz();
        for (k, seg) in segment_matrix(&m)?.into_iter().enumerate() {
            let name = format!("{spk}_{utt}_seg{k:03}.ftm");
            write_feature_matrix(&seg.matrix, &out.join(&name))?;
            entries.push(((spk.clone(), utt.clone(), k), json!({
                "speaker": spk,
                "utterance": utt,
                "index": k,
                "file": name,
                "content_rows": seg.content_rows,
                "source_rows": m.rows(),
            })));
        }
        Ok(())
    })?;
    entries.sort_by(|a, b| a.0.cmp(&b.0));
    let doc = json!({
        "kind": a.kind.as_str(),
        "rate_hz": rate,
        "segment_rows": segment_len(rate),
        "segments": entries.into_iter().map(|e| e.1).collect::<Vec<_>>(),
    });
    let path = out.join("segments.json");
    let mut text = serde_json::to_string_pretty(&doc).expect("json serialises");
    text.push('\n');
    fs::write(&path, text).map_err(|e| Error::io(&path, e))?;
    log::info!("featurized {} files into {}", files.len(), out.display());
    Ok(())
}

pub fn align(a: AlignArgs) -> Result<()> {
    let files = list_files(&a.input, "csv")?;
    create_dir(&a.out)?;
    for_each_file("align", &files, |p| p.display().to_string(), |path| {
        let track = align_tv_to_rate(&read_tv_track(path)?, a.rate)?;
        write_tv_track(&track, &a.out.join(path.file_name().expect("listed file has a name")))
    })?;
    log::info!("aligned {} tracks to {} Hz", files.len(), a.rate);
    Ok(())
}
