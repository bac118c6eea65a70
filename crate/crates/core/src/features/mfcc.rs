//! 13-coefficient MFCCs over 20 ms Hamming frames with a 10 ms hop.
//!
//! Per frame: Hamming window, zero-padded power spectrum, triangular mel
//! filterbank (HTK mel scale, unit-peak triangles), natural log with a
//! floor, orthonormal DCT-II, first `n_coeffs` coefficients including c0.
//! No pre-emphasis, no liftering, no deltas.

use std::f64::consts::PI;
use std::sync::Arc;

use rustfft::num_complex::Complex;
use rustfft::{Fft, FftPlanner};
use serde::{Deserialize, Serialize};

use super::audio::AudioClip;
use crate::error::{Error, Result};
use crate::model::{FeatureKind, FeatureMatrix};

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(default)]
pub struct MfccConfig {
    pub n_coeffs: usize,
    pub win_ms: f64,
    pub hop_ms: f64,
    pub n_mels: usize,
    pub fft_size: usize,
    pub fmin_hz: f64,
    pub fmax_hz: f64,
    pub log_floor: f64,
}

impl Default for MfccConfig {
    fn default() -> Self {
        MfccConfig {
            n_coeffs: 13,
            win_ms: 20.0,
            hop_ms: 10.0,
            n_mels: 40,
            fft_size: 512,
            fmin_hz: 0.0,
            fmax_hz: 8000.0,
            log_floor: 1e-10,
        }
    }
}

impl MfccConfig {
    pub fn frame_rate_hz(&self) -> f64 {
        1000.0 / self.hop_ms
    }

    fn validate(&self, sample_rate: u32) -> Result<()> {
        let bad = |msg: String| Err(Error::invalid("mfcc config", msg));
        if self.n_coeffs != FeatureKind::Mfcc13.dim() {
            return bad(format!("n_coeffs {} must be 13", self.n_coeffs));
        }
        if !(self.hop_ms > 0.0 && self.win_ms > self.hop_ms) {
            return bad(format!("need win_ms {} > hop_ms {} > 0", self.win_ms, self.hop_ms));
        }
        if self.n_coeffs > self.n_mels {
            return bad(format!("n_coeffs {} exceeds n_mels {}", self.n_coeffs, self.n_mels));
        }
        let nyquist = sample_rate as f64 / 2.0;
        if !(0.0 <= self.fmin_hz && self.fmin_hz < self.fmax_hz && self.fmax_hz <= nyquist) {
            return bad(format!(
                "need 0 <= fmin {} < fmax {} <= {nyquist}",
                self.fmin_hz, self.fmax_hz
            ));
        }
        if !(self.log_floor > 0.0) {
            return bad(format!("log floor {} must be positive", self.log_floor));
        }
        let win = samples_for_ms(self.win_ms, sample_rate);
        if self.fft_size < win {
            return bad(format!("fft_size {} is shorter than the {win}-sample window", self.fft_size));
        }
        Ok(())
    }
}

fn samples_for_ms(ms: f64, sample_rate: u32) -> usize {
    (ms * sample_rate as f64 / 1000.0).round() as usize
}

pub fn hz_to_mel(hz: f64) -> f64 {
    2595.0 * (1.0 + hz / 700.0).log10()
}

pub fn mel_to_hz(mel: f64) -> f64 {
    700.0 * (10f64.powf(mel / 2595.0) - 1.0)
}

/// Symmetric Hamming window.
pub fn hamming(len: usize) -> Vec<f64> {
    if len == 1 {
        return vec![1.0];
    }
    (0..len)
        .map(|n| 0.54 - 0.46 * (2.0 * PI * n as f64 / (len - 1) as f64).cos())
        .collect()
}

/// Precomputed MFCC pipeline for one configuration and sample rate.
pub struct Mfcc {
    cfg: MfccConfig,
    win: usize,
    hop: usize,
    window: Vec<f64>,
    /// `n_mels` rows of `fft_size / 2 + 1` weights.
    filters: Vec<Vec<f64>>,
    centers_hz: Vec<f64>,
    /// `n_coeffs` rows of `n_mels` orthonormal DCT-II weights.
    dct: Vec<Vec<f64>>,
    fft: Arc<dyn Fft<f64>>,
}

impl Mfcc {
    pub fn new(cfg: &MfccConfig, sample_rate: u32) -> Result<Self> {
        cfg.validate(sample_rate)?;
        let win = samples_for_ms(cfg.win_ms, sample_rate);
        let hop = samples_for_ms(cfg.hop_ms, sample_rate);
        let n_bins = cfg.fft_size / 2 + 1;
        let bin_hz = sample_rate as f64 / cfg.fft_size as f64;

        let (mlo, mhi) = (hz_to_mel(cfg.fmin_hz), hz_to_mel(cfg.fmax_hz));
        let edges: Vec<f64> = (0..cfg.n_mels + 2)
            .map(|i| mel_to_hz(mlo + (mhi - mlo) * i as f64 / (cfg.n_mels + 1) as f64))
            .collect();
        let filters = (0..cfg.n_mels)
            .map(|m| {
                let (lo, c, hi) = (edges[m], edges[m + 1], edges[m + 2]);
                (0..n_bins)
                    .map(|k| {
                        let f = k as f64 * bin_hz;
                        if f > lo && f <= c {
                            (f - lo) / (c - lo)
                        } else if f > c && f < hi {
                            (hi - f) / (hi - c)
                        } else {
                            0.0
                        }
                    })
                    .collect()
            })
            .collect();

        let n = cfg.n_mels as f64;
        let dct = (0..cfg.n_coeffs)
            .map(|k| {
                let scale = if k == 0 { (1.0 / n).sqrt() } else { (2.0 / n).sqrt() };
                (0..cfg.n_mels)
                    .map(|i| scale * (PI * k as f64 * (i as f64 + 0.5) / n).cos())
                    .collect()
            })
            .collect();

        Ok(Mfcc {
            cfg: cfg.clone(),
            win,
            hop,
            window: hamming(win),
            filters,
            centers_hz: edges[1..=cfg.n_mels].to_vec(),
            dct,
            fft: FftPlanner::new().plan_fft_forward(cfg.fft_size),
        })
    }

    pub fn window_len(&self) -> usize {
        self.win
    }

    pub fn hop_len(&self) -> usize {
        self.hop
    }

    pub fn filterbank(&self) -> &[Vec<f64>] {
        &self.filters
    }

    pub fn mel_centers_hz(&self) -> &[f64] {
        &self.centers_hz
    }

    pub fn frame_count(&self, n_samples: usize) -> usize {
        if n_samples < self.win {
            0
        } else {
            (n_samples - self.win) / self.hop + 1
        }
    }

    /// Power spectrum of one Hamming-windowed frame of `window_len` samples.
    pub fn power_spectrum(&self, frame: &[f64]) -> Vec<f64> {
        let mut buf: Vec<Complex<f64>> = vec![Complex::new(0.0, 0.0); self.cfg.fft_size];
        for ((b, &s), &w) in buf.iter_mut().zip(frame).zip(&self.window) {
            b.re = s * w;
        }
        self.fft.process(&mut buf);
        buf[..self.cfg.fft_size / 2 + 1].iter().map(|c| c.norm_sqr()).collect()
    }

    /// Mel filterbank energies of one frame, before the log.
    pub fn mel_energies(&self, frame: &[f64]) -> Vec<f64> {
        let spec = self.power_spectrum(frame);
        self.filters
            .iter()
            .map(|f| f.iter().zip(&spec).map(|(w, p)| w * p).sum())
            .collect()
    }

    /// Cepstral coefficients from mel energies.
    pub fn cepstrum(&self, energies: &[f64]) -> Vec<f64> {
        let logs: Vec<f64> = energies
            .iter()
            .map(|e| e.max(self.cfg.log_floor).ln())
            .collect();
        self.dct
            .iter()
            .map(|row| row.iter().zip(&logs).map(|(a, b)| a * b).sum())
            .collect()
    }

    pub fn extract(&self, clip: &AudioClip) -> Result<FeatureMatrix> {
        let samples = clip.samples();
        let frames = self.frame_count(samples.len());
        if frames == 0 {
            return Err(Error::invalid(
                "audio",
                format!(
                    "{} samples is shorter than one {}-sample window",
                    samples.len(),
                    self.win
                ),
            ));
        }
        let mut data = Vec::with_capacity(frames * self.cfg.n_coeffs);
        for i in 0..frames {
            let start = i * self.hop;
            let e = self.mel_energies(&samples[start..start + self.win]);
            data.extend(self.cepstrum(&e));
        }
        FeatureMatrix::new(
            FeatureKind::Mfcc13,
            self.cfg.frame_rate_hz(),
            self.cfg.n_coeffs,
            data,
        )
    }
}

/// MFCC matrix at `1000 / hop_ms` frames per second.
pub fn extract_mfcc(clip: &AudioClip, cfg: &MfccConfig) -> Result<FeatureMatrix> {
    Mfcc::new(cfg, clip.sample_rate())?.extract(clip)
}
