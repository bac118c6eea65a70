use std::collections::{BTreeSet, HashSet};
use std::fs;
use std::path::Path;

use rand::seq::SliceRandom;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub enum Sex {
    #[serde(rename = "M")]
    Male,
    #[serde(rename = "F")]
    Female,
}

impl std::str::FromStr for Sex {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        match s {
            "M" | "m" | "male" => Ok(Sex::Male),
            "F" | "f" | "female" => Ok(Sex::Female),
            _ => Err(Error::invalid("sex label", format!("unknown label {s:?}"))),
        }
    }
}

/// Per-partition sex quotas for the held-out sets.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct SplitShape {
    pub dev_male: usize,
    pub dev_female: usize,
    pub test_male: usize,
    pub test_female: usize,
}

impl Default for SplitShape {
    fn default() -> Self {
        SplitShape {
            dev_male: 3,
            dev_female: 2,
            test_male: 3,
            test_female: 2,
        }
    }
}

/// Speaker-disjoint train/dev/test partition.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct SplitSpec {
    pub train: BTreeSet<String>,
    pub dev: BTreeSet<String>,
    pub test: BTreeSet<String>,
}

impl SplitSpec {
    pub fn write(&self, path: &Path) -> Result<()> {
        let mut text = serde_json::to_string_pretty(self).expect("split serialises");
        text.push('\n');
        fs::write(path, text).map_err(|e| Error::io(path, e))
    }

    pub fn read(path: &Path) -> Result<Self> {
        let text = fs::read_to_string(path).map_err(|e| Error::io(path, e))?;
        let s: SplitSpec = serde_json::from_str(&text).map_err(|e| Error::Decode {
            path: path.to_path_buf(),
            msg: e.to_string(),
        })?;
        s.check()?;
        Ok(s)
    }

    /// Partitions must be non-empty and pairwise disjoint.
    pub fn check(&self) -> Result<()> {
        for (name, set) in [("train", &self.train), ("dev", &self.dev), ("test", &self.test)] {
            if set.is_empty() {
                return Err(Error::invalid("split", format!("{name} partition is empty")));
            }
        }
        let overlap = self
            .train
            .intersection(&self.dev)
            .chain(self.train.intersection(&self.test))
            .chain(self.dev.intersection(&self.test))
            .next();
        if let Some(s) = overlap {
            return Err(Error::invalid("split", format!("speaker {s} is in two partitions")));
        }
        Ok(())
    }
}

/// Seeded speaker-independent split. Speakers are sorted by id, each sex is
/// shuffled with a ChaCha8 stream seeded from `seed`, and the held-out sets
/// take their quotas from the front; train gets the remainder.
pub fn make_split(speakers: &[(String, Sex)], seed: u64, shape: SplitShape) -> Result<SplitSpec> {
    let mut seen = HashSet::new();
    if let Some((dup, _)) = speakers.iter().find(|(id, _)| !seen.insert(id)) {
        return Err(Error::invalid("split", format!("speaker {dup} listed twice")));
    }
    let mut sorted: Vec<&(String, Sex)> = speakers.iter().collect();
    sorted.sort_by(|a, b| a.0.cmp(&b.0));
    let by_sex = |sex| -> Vec<String> {
        sorted
            .iter()
            .filter(|(_, s)| *s == sex)
            .map(|(id, _)| id.clone())
            .collect()
    };
    let (mut males, mut females) = (by_sex(Sex::Male), by_sex(Sex::Female));

    let need_m = shape.dev_male + shape.test_male;
    let need_f = shape.dev_female + shape.test_female;
    if males.len() < need_m || females.len() < need_f {
        return Err(Error::invalid(
            "split",
            format!(
                "need {need_m} male and {need_f} female held-out speakers, have {} and {}",
                males.len(),
                females.len()
            ),
        ));
    }
    if males.len() + females.len() == need_m + need_f {
        return Err(Error::invalid("split", "no speakers left for training"));
    }

    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    males.shuffle(&mut rng);
    females.shuffle(&mut rng);

    let take = |v: &mut Vec<String>, n: usize| -> Vec<String> { v.drain(..n).collect() };
    let mut dev: BTreeSet<String> = take(&mut males, shape.dev_male).into_iter().collect();
    dev.extend(take(&mut females, shape.dev_female));
    let mut test: BTreeSet<String> = take(&mut males, shape.test_male).into_iter().collect();
    test.extend(take(&mut females, shape.test_female));
    let train: BTreeSet<String> = males.into_iter().chain(females).collect();

    let split = SplitSpec { train, dev, test };
    split.check()?;
    Ok(split)
}
