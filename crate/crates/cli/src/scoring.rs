use std::collections::BTreeSet;
use std::fs;

use tvkit::eval::{
    emit_plot_data, evaluate_tracks, improvement, make_split, render_table, EvalLabels, Sex,
    SplitShape, SplitSpec,
};
use tvkit::io::read_tv_track;
use tvkit::synth::Manifest;
use tvkit::{Error, PipelineConfig, PpmcReport, Result, Tv, TvTrack};

use crate::pipeline::list_files;
use crate::{pick, CompareArgs, EvaluateArgs, Partition, PlotDataArgs, SplitArgs};

fn read_speaker_list(path: &std::path::Path) -> Result<Vec<(String, Sex)>> {
    let text = fs::read_to_string(path).map_err(|e| Error::io(path, e))?;
    let mut out = Vec::new();
    for (i, line) in text.lines().enumerate() {
        let line = line.trim();
        if line.is_empty() || line.starts_with('#') {
            continue;
        }
        let (id, sex) = line.split_once(',').ok_or_else(|| Error::Format {
            path: path.to_path_buf(),
            line: i + 1,
            msg: "expected `speaker,sex`".into(),
        })?;
        out.push((id.trim().to_string(), sex.trim().parse()?));
    }
    Ok(out)
}

pub fn split(cfg: &PipelineConfig, a: SplitArgs) -> Result<()> {
    let speakers = match (&a.manifest, &a.speakers) {
        (Some(m), _) => Manifest::read(m)?.speaker_sexes(),
        (None, Some(s)) => read_speaker_list(s)?,
        (None, None) => return Err(Error::invalid("arguments", "one of --manifest or --speakers is required")),
    };
    let seed = pick(cfg.split.seed, a.seed);
    let shape = pick(
        cfg.split.shape,
        SplitShape {
            dev_male: a.dev_male,
            dev_female: a.dev_female,
            test_male: a.test_male,
            test_female: a.test_female,
        },
    );
    let split = make_split(&speakers, seed, shape)?;
    split.write(&a.out)?;
    log::info!(
        "split {} speakers: {} train, {} dev, {} test",
        speakers.len(),
        split.train.len(),
        split.dev.len(),
        split.test.len()
    );
    Ok(())
}

fn read_tracks(dir: &std::path::Path, keep: Option<&BTreeSet<String>>) -> Result<Vec<TvTrack>> {
    let mut tracks = Vec::new();
    for path in list_files(dir, "csv")? {
        let t = read_tv_track(&path)?;
        if keep.map_or(true, |k| k.contains(&t.speaker_id)) {
            tracks.push(t);
        }
    }
    Ok(tracks)
}

pub fn evaluate(cfg: &PipelineConfig, a: EvaluateArgs) -> Result<()> {
    let split_file = cfg.split.file.clone().or(a.split);
    let keep = match (split_file, a.partition) {
        (Some(f), Some(p)) => {
            let s = SplitSpec::read(&f)?;
            Some(match p {
                Partition::Train => s.train,
                Partition::Dev => s.dev,
                Partition::Test => s.test,
            })
        }
        (Some(_), None) => {
            return Err(Error::invalid("arguments", "a split file needs --partition"));
        }
        _ => None,
    };
    let pred = read_tracks(&a.pred, keep.as_ref())?;
    let truth = read_tracks(&a.truth, keep.as_ref())?;
    let mode = pick(cfg.eval.mode, a.mode);
    let labels = EvalLabels {
        dataset: a.dataset,
        feature_kind: a.feature_kind,
    };
    let report = evaluate_tracks(&pred, &truth, mode, labels)?;
    report.write(&a.out)?;

    let header: Vec<String> = Tv::ALL.iter().map(|tv| format!("{:>7}", tv.name())).collect();
    println!("{}  Average", header.join(" "));
    let values: Vec<String> = report.scores.to_array().iter().map(|s| format!("{s:>7.4}")).collect();
    println!("{}  {:>7.4}", values.join(" "), report.average);
    log::info!("scored {} utterances ({mode} mode)", truth.len());
    Ok(())
}

pub fn compare(a: CompareArgs) -> Result<()> {
    let reports = a
        .reports
        .iter()
        .map(|p| PpmcReport::read(p))
        .collect::<Result<Vec<_>>>()?;
    print!("{}", render_table(&reports));
    let base = &reports[0];
    for (path, r) in a.reports.iter().zip(&reports).skip(1) {
        println!(
            "{} vs {}: {:+.1} percentage points",
            path.display(),
            a.reports[0].display(),
            improvement(base, r)
        );
    }
    Ok(())
}

pub fn plot_data(a: PlotDataArgs) -> Result<()> {
    let pred = read_tv_track(&a.pred)?;
    let truth = read_tv_track(&a.truth)?;
    emit_plot_data(&pred, &truth, &a.out)
}
