//! Scenario configuration files (TOML).
//!
//! ```toml
//! scenario = "kitaev-fig3"
//! output = "fig3"
//!
//! [params]
//! L = { value = 16, unit = "1" }
//!
//! [sweep.F]
//! values = [0.3, 1.2, 3.0]
//! unit = "J"
//!
//! [sweep.mu]
//! start = -4.0
//! stop = 4.0
//! count = 161
//! unit = "J"
//! ```
//!
//! Every quantity carries its unit, and the unit must be the one the
//! scenario expects for that symbol. Unknown keys and symbols are rejected.

use std::collections::BTreeMap;

use serde::{Deserialize, Serialize};

use crate::{Error, Result};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum Scenario {
    SingleQubitQuasienergy,
    Ramsey,
    ResonantPulse,
    TwoQubitCrossing,
    ChainEd,
    KitaevFig3,
    GapScan,
    Disorder,
}

impl Scenario {
    pub fn name(self) -> &'static str {
        match self {
            Self::SingleQubitQuasienergy => "single-qubit-quasienergy",
            Self::Ramsey => "ramsey",
            Self::ResonantPulse => "resonant-pulse",
            Self::TwoQubitCrossing => "two-qubit-crossing",
            Self::ChainEd => "chain-ed",
            Self::KitaevFig3 => "kitaev-fig3",
            Self::GapScan => "gap-scan",
            Self::Disorder => "disorder",
        }
    }

    /// `(symbol, unit, required)` accepted by the scenario.
    pub fn symbols(self) -> &'static [(&'static str, &'static str, bool)] {
        match self {
            Self::SingleQubitQuasienergy => &[
                ("T", "time", true),
                ("theta", "rad", true),
                ("F1", "rad", true),
                ("Omega", "1/T", true),
            ],
            Self::Ramsey => &[
                ("nu1", "rad", true),
                ("k_max", "1", true),
                ("omega0_T", "rad", false),
                ("dt", "1/omega0", false),
            ],
            Self::ResonantPulse => &[
                ("F1", "rad", true),
                ("k_max", "1", true),
                ("omega0_T", "rad", false),
                ("dt", "1/omega0", false),
            ],
            Self::TwoQubitCrossing => &[("J", "energy", true), ("mu", "J", true), ("F", "J", true)],
            Self::ChainEd => &[
                ("L", "1", true),
                ("omega0", "energy", true),
                ("Jxx0", "energy", true),
                ("Jyy", "energy", true),
                ("F", "energy", true),
                ("omegaF", "energy", true),
            ],
            Self::KitaevFig3 => &[("L", "1", true), ("F", "J", true), ("mu", "J", true)],
            Self::GapScan => &[("L", "1", true), ("F", "J", true), ("mu", "J", true)],
            Self::Disorder => &[
                ("L", "1", true),
                ("F", "J", true),
                ("mu", "J", true),
                ("site_sigma", "J", true),
                ("bond_sigma", "J", false),
            ],
        }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct Quantity {
    pub value: f64,
    pub unit: String,
}

/// Either an evenly spaced range (`start`, `stop`, `count`) or explicit `values`.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct Sweep {
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub start: Option<f64>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub stop: Option<f64>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub count: Option<usize>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub values: Option<Vec<f64>>,
    pub unit: String,
}

impl Sweep {
    pub fn points(&self) -> std::result::Result<Vec<f64>, String> {
        match (self.start, self.stop, self.count, &self.values) {
            (None, None, None, Some(v)) if !v.is_empty() => Ok(v.clone()),
            (None, None, None, Some(_)) => Err("values must not be empty".into()),
            (Some(a), Some(b), Some(n), None) => match n {
                0 => Err("count must be at least 1".into()),
                1 => Ok(vec![a]),
                _ => Ok((0..n)
                    .map(|i| a + (b - a) * i as f64 / (n - 1) as f64)
                    .collect()),
            },
            _ => Err("give either start/stop/count or values".into()),
        }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct ScenarioConfig {
    pub scenario: Scenario,
    /// Base name of the output files; defaults to the scenario name.
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub output: Option<String>,
    #[serde(default, skip_serializing_if = "Vec::is_empty")]
    pub seeds: Vec<u64>,
    #[serde(default, skip_serializing_if = "BTreeMap::is_empty")]
    pub params: BTreeMap<String, Quantity>,
    #[serde(default, skip_serializing_if = "BTreeMap::is_empty")]
    pub sweep: BTreeMap<String, Sweep>,
}

fn line_of_offset(text: &str, offset: usize) -> usize {
    text[..offset.min(text.len())].matches('\n').count() + 1
}

/// Line on which `symbol` is introduced, either as a key or a sweep table.
fn line_of_symbol(text: &str, symbol: &str) -> Option<usize> {
    text.lines()
        .position(|l| {
            let t = l.trim_start();
            t.strip_prefix(symbol)
                .is_some_and(|rest| rest.trim_start().starts_with('='))
                || t.starts_with(&format!("[sweep.{symbol}]"))
        })
        .map(|i| i + 1)
}

impl ScenarioConfig {
    /// Parses and validates; errors carry the offending line when known.
    pub fn parse(text: &str) -> Result<Self> {
        let cfg: Self = toml::from_str(text).map_err(|e| Error::Config {
            line: e.span().map(|s| line_of_offset(text, s.start)),
            message: e.message().to_string(),
        })?;
        cfg.validate().map_err(|(sym, message)| Error::Config {
            line: sym.and_then(|s| line_of_symbol(text, &s)),
            message,
        })?;
        Ok(cfg)
    }

    pub fn to_toml(&self) -> String {
        toml::to_string(self).expect("config is always representable")
    }

    fn validate(&self) -> std::result::Result<(), (Option<String>, String)> {
        let known = self.scenario.symbols();
        for sym in self.params.keys().chain(self.sweep.keys()) {
            if self.params.contains_key(sym) && self.sweep.contains_key(sym) {
                return Err((Some(sym.clone()), format!("{sym} is both fixed and swept")));
            }
            if !known.iter().any(|k| k.0 == sym) {
                let names: Vec<_> = known.iter().map(|k| k.0).collect();
                return Err((
                    Some(sym.clone()),
                    format!(
                        "unknown symbol {sym} for scenario {}; expected one of {names:?}",
                        self.scenario.name()
                    ),
                ));
            }
        }
        for &(sym, unit, required) in known {
            let given = self
                .params
                .get(sym)
                .map(|q| (q.unit.as_str(), vec![q.value]))
                .or_else(|| self.sweep.get(sym).map(|s| (s.unit.as_str(), vec![])));
            let Some((u, _)) = given else {
                if required {
                    return Err((None, format!("missing required symbol {sym} [{unit}]")));
                }
                continue;
            };
            if u != unit {
                return Err((
                    Some(sym.into()),
                    format!("{sym} must be given in unit \"{unit}\", got \"{u}\""),
                ));
            }
            if let Some(s) = self.sweep.get(sym) {
                s.points()
                    .map_err(|m| (Some(sym.to_string()), format!("sweep {sym}: {m}")))?;
            }
        }
        let all_values = self.params.values().map(|q| q.value).chain(
            self.sweep
                .values()
                .flat_map(|s| s.points().unwrap_or_default()),
        );
        if all_values.clone().any(|x| !x.is_finite()) {
            return Err((None, "all values must be finite".into()));
        }
        Ok(())
    }

    /// Points of a symbol: one for a fixed value, the sweep otherwise.
    pub fn values(&self, sym: &str) -> Option<Vec<f64>> {
        self.params
            .get(sym)
            .map(|q| vec![q.value])
            .or_else(|| self.sweep.get(sym).map(|s| s.points().unwrap_or_default()))
    }

    pub fn scalar(&self, sym: &str) -> Result<Option<f64>> {
        match self.values(sym) {
            None => Ok(None),
            Some(v) if v.len() == 1 => Ok(Some(v[0])),
            Some(_) => Err(Error::Config {
                line: None,
                message: format!("{sym} cannot be swept in scenario {}", self.scenario.name()),
            }),
        }
    }

    pub fn require(&self, sym: &str) -> Result<f64> {
        self.scalar(sym)?.ok_or_else(|| Error::Config {
            line: None,
            message: format!("missing {sym}"),
        })
    }

    /// A non-negative integer symbol.
    pub fn count(&self, sym: &str) -> Result<usize> {
        let x = self.require(sym)?;
        if x < 0.0 || x.fract() != 0.0 {
            return Err(Error::Config {
                line: None,
                message: format!("{sym} must be a non-negative integer, got {x}"),
            });
        }
        Ok(x as usize)
    }

    pub fn counts(&self, sym: &str) -> Result<Vec<usize>> {
        self.values(sym)
            .unwrap_or_default()
            .into_iter()
            .map(|x| {
                if x < 0.0 || x.fract() != 0.0 {
                    Err(Error::Config {
                        line: None,
                        message: format!("{sym} must hold non-negative integers, got {x}"),
                    })
                } else {
                    Ok(x as usize)
                }
            })
            .collect()
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    const FIG3: &str = r#"
scenario = "kitaev-fig3"
output = "fig3"

[params]
L = { value = 16, unit = "1" }

[sweep.F]
values = [0.3, 1.2, 3.0]
unit = "J"

[sweep.mu]
start = -4.0
stop = 4.0
count = 161
unit = "J"
"#;

    #[test]
    fn parses_and_round_trips() {
        let cfg = ScenarioConfig::parse(FIG3).unwrap();
        assert_eq!(cfg.scenario, Scenario::KitaevFig3);
        assert_eq!(cfg.values("mu").unwrap().len(), 161);
        assert_eq!(cfg.values("mu").unwrap()[80], 0.0);
        let again = ScenarioConfig::parse(&cfg.to_toml()).unwrap();
        assert_eq!(cfg, again);
    }

    #[test]
    fn rejects_unknown_keys_with_line() {
        let bad = FIG3.replace("count = 161", "cout = 161");
        match ScenarioConfig::parse(&bad) {
            Err(Error::Config {
                line: Some(l),
                message,
            }) => {
                assert_eq!(
                    bad.lines().nth(l - 1).unwrap().trim(),
                    "cout = 161",
                    "{message}"
                );
            }
            other => panic!("{other:?}"),
        }
        let bad = FIG3.replace("[sweep.F]", "[sweep.G]");
        match ScenarioConfig::parse(&bad) {
            Err(Error::Config { line: Some(l), .. }) => {
                assert_eq!(bad.lines().nth(l - 1).unwrap(), "[sweep.G]");
            }
            other => panic!("{other:?}"),
        }
    }

    #[test]
    fn rejects_wrong_unit_and_missing_symbol() {
        let bad = FIG3.replace("unit = \"1\"", "unit = \"J\"");
        let err = ScenarioConfig::parse(&bad).unwrap_err();
        assert!(
            matches!(err, Error::Config { line: Some(6), .. }),
            "{err:?}"
        );
        let bad = FIG3.replace("L = { value = 16, unit = \"1\" }", "");
        assert!(ScenarioConfig::parse(&bad)
            .unwrap_err()
            .to_string()
            .contains("missing"));
    }

    #[test]
    fn single_point_sweep() {
        let s = Sweep {
            start: Some(0.25),
            stop: Some(9.0),
            count: Some(1),
            values: None,
            unit: "J".into(),
        };
        assert_eq!(s.points().unwrap(), vec![0.25]);
        let bad = Sweep {
            count: Some(0),
            ..s.clone()
        };
        assert!(bad.points().is_err());
        let mixed = Sweep {
            values: Some(vec![1.0]),
            ..s
        };
        assert!(mixed.points().is_err());
    }
}
