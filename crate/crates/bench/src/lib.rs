//! Deterministic inputs shared by the kernel benchmarks.

use tvkit::features::AudioClip;
use tvkit::geometry::Point;
use tvkit::synth::{synth_speaker, synth_utterance, SynthConfig, SynthUtterance};
use tvkit::PalatalTrace;

/// One synthetic speaker's extended palate and a single utterance.
pub fn utterance(duration_s: f64) -> (PalatalTrace, SynthUtterance) {
    let cfg = SynthConfig {
        n_speakers: 1,
        utterances_per_speaker: 1,
        duration_s,
        ..SynthConfig::default()
    };
    let speaker = synth_speaker(&cfg, 0).expect("default config is valid");
    let utt = synth_utterance(&cfg, &speaker, 0).expect("default config is valid");
    (speaker.extended_palate().expect("synthetic palate extends"), utt)
}

/// Two-tone clip at 16 kHz.
pub fn clip(duration_s: f64) -> AudioClip {
    let n = (duration_s * 16_000.0) as usize;
    let samples = (0..n)
        .map(|i| {
            let t = i as f64 / 16_000.0;
            0.3 * (2.0 * std::f64::consts::PI * 440.0 * t).sin()
                + 0.2 * (2.0 * std::f64::consts::PI * 1900.0 * t).sin()
        })
        .collect();
    AudioClip::new("bench", "clip", 16_000, samples).expect("samples are in range")
}

/// Sinusoid pair with a fixed phase offset, `n` samples each.
pub fn signals(n: usize) -> (Vec<f64>, Vec<f64>) {
    let x = (0..n).map(|i| (i as f64 * 0.013).sin()).collect();
    let y = (0..n).map(|i| (i as f64 * 0.013 + 0.4).sin() + 0.1 * (i as f64 * 0.7).cos()).collect();
    (x, y)
}

/// A gently curved open polyline of `n` points.
pub fn polyline(n: usize) -> Vec<Point> {
    (0..n)
        .map(|i| {
            let x = -(i as f64);
            Point::new(x, 10.0 - 0.01 * x * x)
        })
        .collect()
}
