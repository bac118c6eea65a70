use std::path::Path;

use hound::{SampleFormat, WavReader, WavSpec, WavWriter};

use crate::error::{Error, Result};

/// The only audio rate the feature pipeline accepts.
pub const SAMPLE_RATE_HZ: u32 = 16_000;

/// Mono audio at 16 kHz with amplitudes in [-1, 1].
#[derive(Clone, Debug, PartialEq)]
pub struct AudioClip {
    pub speaker_id: String,
    pub utterance_id: String,
    sample_rate: u32,
    samples: Vec<f64>,
}

impl AudioClip {
    pub fn new(
        speaker_id: impl Into<String>,
        utterance_id: impl Into<String>,
        sample_rate: u32,
        samples: Vec<f64>,
    ) -> Result<Self> {
        if sample_rate != SAMPLE_RATE_HZ {
            return Err(Error::invalid(
                "audio",
                format!("sample rate {sample_rate} Hz, expected {SAMPLE_RATE_HZ} Hz"),
            ));
        }
        if let Some(i) = samples.iter().position(|s| !(s.is_finite() && s.abs() <= 1.0)) {
            return Err(Error::invalid(
                "audio",
                format!("sample {i} ({}) is outside [-1, 1]", samples[i]),
            ));
        }
        Ok(AudioClip {
            speaker_id: speaker_id.into(),
            utterance_id: utterance_id.into(),
            sample_rate,
            samples,
        })
    }

    pub fn sample_rate(&self) -> u32 {
        self.sample_rate
    }

    pub fn samples(&self) -> &[f64] {
        &self.samples
    }

    pub fn duration_s(&self) -> f64 {
        self.samples.len() as f64 / self.sample_rate as f64
    }
}

/// Reads a mono 16 kHz WAV holding 16-bit integer or 32-bit float PCM.
pub fn read_wav(path: &Path, speaker_id: &str, utterance_id: &str) -> Result<AudioClip> {
    let decode = |e: hound::Error| match e {
        hound::Error::IoError(io) => Error::io(path, io),
        other => Error::Decode {
            path: path.to_path_buf(),
            msg: other.to_string(),
        },
    };
    let reader = WavReader::open(path).map_err(decode)?;
    let spec = reader.spec();
    if spec.channels != 1 {
        return Err(Error::invalid("audio", format!("{} channels, expected mono", spec.channels)));
    }
    let samples: Vec<f64> = match (spec.sample_format, spec.bits_per_sample) {
        (SampleFormat::Int, 16) => reader
            .into_samples::<i16>()
            .map(|s| s.map(|v| v as f64 / 32768.0))
            .collect::<std::result::Result<_, _>>()
            .map_err(decode)?,
        (SampleFormat::Float, 32) => reader
            .into_samples::<f32>()
            .map(|s| s.map(|v| v as f64))
            .collect::<std::result::Result<_, _>>()
            .map_err(decode)?,
        (fmt, bits) => {
            return Err(Error::invalid(
                "audio",
                format!("unsupported sample format {fmt:?} at {bits} bits"),
            ))
        }
    };
    AudioClip::new(speaker_id, utterance_id, spec.sample_rate, samples)
}

/// Writes 16-bit PCM with the same 1/32768 scale the reader uses.
pub fn write_wav(clip: &AudioClip, path: &Path) -> Result<()> {
    let spec = WavSpec {
        channels: 1,
        sample_rate: clip.sample_rate,
        bits_per_sample: 16,
        sample_format: SampleFormat::Int,
    };
    let wrap = |e: hound::Error| match e {
        hound::Error::IoError(io) => Error::io(path, io),
        other => Error::Decode {
            path: path.to_path_buf(),
            msg: other.to_string(),
        },
    };
    let mut w = WavWriter::create(path, spec).map_err(wrap)?;
    for &s in &clip.samples {
        let v = (s * 32768.0).round().clamp(-32768.0, 32767.0) as i16;
        w.write_sample(v).map_err(wrap)?;
    }
    w.finalize().map_err(wrap)
}
