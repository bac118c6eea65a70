//! Pipeline configuration file (TOML). Every section is optional; values
//! present in the file take precedence over command-line flags.

use std::fs;
use std::path::{Path, PathBuf};

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::eval::{EvalMode, SplitShape};
use crate::features::MfccConfig;
use crate::synth::SynthConfig;
use crate::tract::TvConfig;

#[derive(Clone, Debug, Default, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct PathsSection {
    pub data_root: Option<PathBuf>,
    pub output_root: Option<PathBuf>,
}

#[derive(Clone, Debug, Default, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct SplitSection {
    pub seed: Option<u64>,
    pub shape: Option<SplitShape>,
    /// Existing split file; takes the place of a seeded draw.
    pub file: Option<PathBuf>,
}

#[derive(Clone, Debug, Default, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct EvalSection {
    pub mode: Option<EvalMode>,
}

#[derive(Clone, Debug, Default, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct PipelineConfig {
    #[serde(default)]
    pub paths: PathsSection,
    pub tv: Option<TvConfig>,
    pub mfcc: Option<MfccConfig>,
    #[serde(default)]
    pub split: SplitSection,
    #[serde(default)]
    pub eval: EvalSection,
    pub synth: Option<SynthConfig>,
}

impl PipelineConfig {
    pub fn from_toml(text: &str, path: &Path) -> Result<Self> {
        let cfg: PipelineConfig = toml::from_str(text).map_err(|e| Error::Decode {
            path: path.to_path_buf(),
            msg: e.to_string(),
        })?;
        cfg.validate()?;
        Ok(cfg)
    }

    pub fn to_toml(&self) -> String {
        toml::to_string_pretty(self).expect("config serialises")
    }

    pub fn load(path: &Path) -> Result<Self> {
        let text = fs::read_to_string(path).map_err(|e| Error::io(path, e))?;
        Self::from_toml(&text, path)
    }

    /// Value checks that do not touch the filesystem.
    pub fn validate(&self) -> Result<()> {
        if let Some(tv) = &self.tv {
            tv.validate()?;
        }
        if let Some(synth) = &self.synth {
            synth.validate()?;
        }
        Ok(())
    }

    /// Referenced input paths must exist.
    pub fn check_paths(&self) -> Result<()> {
        let inputs = [&self.paths.data_root, &self.split.file];
        for p in inputs.into_iter().flatten() {
            if !p.exists() {
                return Err(Error::io(
                    p,
                    std::io::Error::new(std::io::ErrorKind::NotFound, "configured path does not exist"),
                ));
            }
        }
        Ok(())
    }
}
