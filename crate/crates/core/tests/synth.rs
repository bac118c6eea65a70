use std::f64::consts::PI;

use rustfft::num_complex::Complex;
use rustfft::FftPlanner;
use tvkit::synth::{synth_speaker, synth_utterance, MotionParams, TvMotion};
use tvkit::tract::compute_tv_track;
use tvkit::{SynthConfig, Tv, TvConfig};

fn config(motion: MotionParams, duration_s: f64) -> SynthConfig {
    SynthConfig {
        seed: 11,
        n_speakers: 3,
        duration_s,
        motion,
        ..SynthConfig::default()
    }
}

#[test]
fn lip_aperture_follows_a_prescribed_sinusoid() {
    let motion = MotionParams {
        la: TvMotion {
            freq_hz: [2.0, 2.0],
            amp_mm: [3.0, 3.0],
            phase: Some(0.0),
        },
        ..MotionParams::still()
    };
    let cfg = config(motion, 2.0);
    for s in 0..cfg.n_speakers {
        let spk = synth_speaker(&cfg, s).unwrap();
        let u = synth_utterance(&cfg, &spk, 0).unwrap();
        let got = compute_tv_track(&u.pellets, &spk.extended_palate().unwrap(), &TvConfig::default()).unwrap();
        let rest = spk.anatomy.rest[Tv::LA.index()];
        for (i, f) in got.frames().iter().enumerate() {
            let t = got.time(i);
            let want = (rest + 3.0 * (2.0 * PI * 2.0 * t).sin()).max(0.0);
            assert!((f.la - want).abs() < 1e-3, "speaker {s} t={t}: {} vs {want}", f.la);
            for tv in [Tv::LP, Tv::TBCD, Tv::TTCD] {
                let r = spk.anatomy.rest[tv.index()];
                assert!((f.get(tv) - r).abs() < 1e-3, "{tv} moved");
            }
        }
    }
}

/// Strongest frequency in `[lo, hi]` Hz over a Hann-windowed, zero-padded
/// stretch of audio, refined by parabolic interpolation.
fn peak_hz(samples: &[f64], rate: f64, lo: f64, hi: f64) -> f64 {
    let n = 1 << 16;
    let len = samples.len();
    let mut buf: Vec<Complex<f64>> = (0..n)
        .map(|i| {
            let v = if i < len {
                let w = 0.5 - 0.5 * (2.0 * PI * i as f64 / (len - 1) as f64).cos();
                samples[i] * w
            } else {
                0.0
            };
            Complex::new(v, 0.0)
        })
        .collect();
    FftPlanner::new().plan_fft_forward(n).process(&mut buf);
    let bin = rate / n as f64;
    let (a, b) = ((lo / bin) as usize, (hi / bin) as usize);
    let k = (a..=b).max_by(|&i, &j| buf[i].norm().total_cmp(&buf[j].norm())).unwrap();
    let (l, c, r) = (buf[k - 1].norm().ln(), buf[k].norm().ln(), buf[k + 1].norm().ln());
    (k as f64 + 0.5 * (l - r) / (l - 2.0 * c + r)) * bin
}

#[test]
fn rising_constriction_degree_raises_its_tone() {
    let duration = 5.0;
    let motion = MotionParams {
        ttcd: TvMotion {
            freq_hz: [1.0 / (2.0 * duration); 2],
            amp_mm: [2.0, 2.0],
            phase: Some(-PI / 2.0),
        },
        ..MotionParams::still()
    };
    let cfg = config(motion, duration);
    let spk = synth_speaker(&cfg, 0).unwrap();
    let u = synth_utterance(&cfg, &spk, 0).unwrap();
    assert_eq!(u.clipped.total(), 0);
    let tone = cfg.audio.tones[Tv::TTCD.index()];
    let rate = u.audio.sample_rate() as f64;
    let win = 4000;
    let mut last = f64::NEG_INFINITY;
    for k in 1..10 {
        let start = k * 8000 - win / 2;
        let mid = (start + win / 2) as f64 / rate;
        let got = peak_hz(&u.audio.samples()[start..start + win], rate, tone.center_hz - 300.0, tone.center_hz + 300.0);
        let want = tone.frequency(u.signals[Tv::TTCD.index()].at(mid));
        assert!((got - want).abs() < 2.0, "t={mid}: {got} vs {want}");
        assert!(got > last);
        last = got;
    }
}

#[test]
fn still_speakers_produce_constant_tracks_and_steady_tones() {
    let cfg = config(MotionParams::still(), 1.0);
    let spk = synth_speaker(&cfg, 1).unwrap();
    let u = synth_utterance(&cfg, &spk, 2).unwrap();
    let got = compute_tv_track(&u.pellets, &spk.extended_palate().unwrap(), &TvConfig::default()).unwrap();
    let first = got.frames()[0].to_array();
    for f in got.frames() {
        for (a, b) in f.to_array().iter().zip(&first) {
            assert!((a - b).abs() < 1e-9);
        }
    }
    let rate = u.audio.sample_rate() as f64;
    for tv in Tv::ALL {
        let tone = cfg.audio.tones[tv.index()];
        let want = tone.frequency(spk.anatomy.rest[tv.index()]);
        let got = peak_hz(&u.audio.samples()[..8000], rate, want - 150.0, want + 150.0);
        assert!((got - want).abs() < 1.0, "{tv}: {got} vs {want}");
    }
}

#[test]
fn mistracked_frames_only_blank_the_affected_tvs() {
    let cfg = SynthConfig {
        mistrack_rate: 0.05,
        ..config(MotionParams::default(), 2.0)
    };
    let spk = synth_speaker(&cfg, 2).unwrap();
    let u = synth_utterance(&cfg, &spk, 1).unwrap();
    let got = compute_tv_track(&u.pellets, &spk.extended_palate().unwrap(), &TvConfig::default()).unwrap();
    let (mut nan, mut total) = (0, 0);
    for (f, t) in got.frames().iter().zip(u.truth.frames()) {
        for (a, b) in f.to_array().iter().zip(t.to_array()) {
            total += 1;
            if a.is_nan() {
                nan += 1;
            } else {
                assert!((a - b).abs() < 1e-6);
            }
        }
    }
    assert!(nan > 0 && nan < total / 2, "{nan} of {total}");
}
