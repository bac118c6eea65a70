use std::fmt::Write as _;
use std::fs;
use std::path::Path;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::model::{FeatureKind, Tv, Variant};

/// Allowed gap between a stored average and the mean of the stored scores.
pub const AVERAGE_TOL: f64 = 1e-6;

#[derive(Clone, Copy, Debug, Default, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum DatasetTag {
    Small,
    Extended,
    #[default]
    Other,
}

impl std::str::FromStr for DatasetTag {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        match s {
            "small" => Ok(DatasetTag::Small),
            "extended" => Ok(DatasetTag::Extended),
            "other" => Ok(DatasetTag::Other),
            _ => Err(Error::invalid("dataset tag", format!("unknown tag {s:?}"))),
        }
    }
}

impl std::fmt::Display for DatasetTag {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        f.write_str(match self {
            DatasetTag::Small => "small",
            DatasetTag::Extended => "extended",
            DatasetTag::Other => "other",
        })
    }
}

/// Per-TV scores, serialised with the TV names as keys.
#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
#[allow(non_snake_case)]
pub struct TvScores {
    pub LA: f64,
    pub LP: f64,
    pub TBCL: f64,
    pub TBCD: f64,
    pub TTCL: f64,
    pub TTCD: f64,
}

impl TvScores {
    pub fn from_array(v: [f64; 6]) -> Self {
        TvScores {
            LA: v[0],
            LP: v[1],
            TBCL: v[2],
            TBCD: v[3],
            TTCL: v[4],
            TTCD: v[5],
        }
    }

    pub fn to_array(&self) -> [f64; 6] {
        [self.LA, self.LP, self.TBCL, self.TBCD, self.TTCL, self.TTCD]
    }

    pub fn get(&self, tv: Tv) -> f64 {
        self.to_array()[tv.index()]
    }

    pub fn mean(&self) -> f64 {
        self.to_array().iter().sum::<f64>() / 6.0
    }
}

/// PPMC scores for one model/dataset condition.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct PpmcReport {
    pub variant: Variant,
    pub dataset: DatasetTag,
    pub feature_kind: FeatureKind,
    pub scores: TvScores,
    pub average: f64,
}

impl PpmcReport {
    pub fn new(
        variant: Variant,
        dataset: DatasetTag,
        feature_kind: FeatureKind,
        scores: [f64; 6],
    ) -> Result<Self> {
        let report = PpmcReport {
            variant,
            dataset,
            feature_kind,
            scores: TvScores::from_array(scores),
            average: TvScores::from_array(scores).mean(),
        };
        report.check()?;
        Ok(report)
    }

    fn check(&self) -> Result<()> {
        for tv in Tv::ALL {
            let s = self.scores.get(tv);
            if !(-1.0..=1.0).contains(&s) {
                return Err(Error::invalid("report", format!("{tv} score {s} is outside [-1, 1]")));
            }
        }
        let mean = self.scores.mean();
        if (self.average - mean).abs() > AVERAGE_TOL {
            return Err(Error::invalid(
                "report",
                format!("average {} differs from the score mean {mean}", self.average),
            ));
        }
        Ok(())
    }

    pub fn to_json(&self) -> String {
        serde_json::to_string_pretty(self).expect("report serialises")
    }

    pub fn write(&self, path: &Path) -> Result<()> {
        let mut text = self.to_json();
        text.push('\n');
        fs::write(path, text).map_err(|e| Error::io(path, e))
    }

    pub fn read(path: &Path) -> Result<Self> {
        let text = fs::read_to_string(path).map_err(|e| Error::io(path, e))?;
        let report: PpmcReport = serde_json::from_str(&text).map_err(|e| Error::Decode {
            path: path.to_path_buf(),
            msg: e.to_string(),
        })?;
        report.check()?;
        Ok(report)
    }
}

/// Change in average PPMC from `a` to `b`, in percentage points.
pub fn improvement(a: &PpmcReport, b: &PpmcReport) -> f64 {
    (b.average - a.average) * 100.0
}

/// Table-style rendering in LA..TTCD, Average column order. The maximum of
/// each column over the given rows is marked with `*`.
pub fn render_table(reports: &[PpmcReport]) -> String {
    let mut cols: Vec<Vec<f64>> = Tv::ALL
        .iter()
        .map(|&tv| reports.iter().map(|r| r.scores.get(tv)).collect())
        .collect();
    cols.push(reports.iter().map(|r| r.average).collect());
    let maxima: Vec<f64> = cols
        .iter()
        .map(|c| c.iter().copied().fold(f64::NEG_INFINITY, f64::max))
        .collect();

    let mut out = format!("{:<10} {:<9} {:<8}", "variant", "dataset", "features");
    for tv in Tv::ALL {
        let _ = write!(out, " {:>8}", tv.name());
    }
    out.push_str("  Average\n");
    for (i, r) in reports.iter().enumerate() {
        let _ = write!(out, "{:<10} {:<9} {:<8}", r.variant, r.dataset, r.feature_kind);
        for (c, col) in cols.iter().enumerate() {
            let mark = if reports.len() > 1 && col[i] == maxima[c] { "*" } else { " " };
            let _ = write!(out, " {:>7.4}{mark}", col[i]);
        }
        out.push('\n');
    }
    out
}
