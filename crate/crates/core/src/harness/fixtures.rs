//! Frozen ratio bands that stand in for the unknown implied constants.

use std::collections::BTreeMap;
use std::path::Path;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

use super::verify::Theorem;

pub const BANDS_SCHEMA: &str = "redpoly.bands";
pub const BANDS_VERSION: u32 = 1;

const DEFAULT_BANDS: &str = include_str!("../../fixtures/bands.json");

/// A closed interval `[lo, hi]`.
#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
pub struct Band(pub f64, pub f64);

impl Band {
    pub fn contains(&self, x: f64) -> bool {
        self.0 <= x && x <= self.1
    }
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct TheoremBands {
    /// Allowed ratio between normalized counts at adjacent grid points.
    pub drift: Band,
    /// Allowed `|R_n \ R_(n-1,n)| / t^(n-1)` (k-factor suite only).
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub complement: Option<Band>,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct Fixtures {
    pub schema: String,
    pub version: u32,
    pub bands: BTreeMap<Theorem, TheoremBands>,
}

impl Fixtures {
    /// The bands shipped with the crate.
    pub fn builtin() -> Self {
        Self::parse(DEFAULT_BANDS).expect("built-in band fixtures are valid")
    }

    pub fn load(path: &Path) -> Result<Self> {
        Self::parse(&std::fs::read_to_string(path)?)
    }

    pub fn parse(text: &str) -> Result<Self> {
        let fixtures: Fixtures = serde_json::from_str(text)?;
        if fixtures.schema != BANDS_SCHEMA || fixtures.version != BANDS_VERSION {
            return Err(Error::Format {
                what: "band fixtures",
                detail: format!("{} v{}", fixtures.schema, fixtures.version),
            });
        }
        for (theorem, bands) in &fixtures.bands {
            for band in std::iter::once(&bands.drift).chain(&bands.complement) {
                if !(band.0 > 0.0 && band.0 <= band.1) {
                    return Err(Error::Format {
                        what: "band fixtures",
                        detail: format!(
                            "{theorem}: band [{}, {}] is not a positive interval",
                            band.0, band.1
                        ),
                    });
                }
            }
        }
        Ok(fixtures)
    }

    pub fn bands(&self, theorem: Theorem) -> Result<&TheoremBands> {
        self.bands.get(&theorem).ok_or_else(|| Error::Format {
            what: "band fixtures",
            detail: format!("no bands for {theorem}"),
        })
    }
}
