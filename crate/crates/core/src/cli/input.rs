//! Versioned JSON inputs accepted by the command-line front end.

use std::path::Path;

use serde::de::DeserializeOwned;
use serde::Deserialize;

use super::CliError;
use crate::enumerate::{EndConstraint, EnumBounds, TropicalCycle};
use crate::invariants::{scale_constraint, Connectedness, CountRequest, Fan3};
use crate::lattice::IntVec3;
use crate::weights::Mode;

pub const SCHEMA_VERSION: u64 = 1;

/// Parse `text`, requiring a top-level `"schema": 1`. `origin` names the
/// source in diagnostics.
pub fn parse_versioned<T: DeserializeOwned>(text: &str, origin: &str) -> Result<T, CliError> {
    let value: serde_json::Value =
        serde_json::from_str(text).map_err(|e| CliError::parse(format!("{origin}: {e}")))?;
    match value.get("schema").and_then(serde_json::Value::as_u64) {
        Some(SCHEMA_VERSION) => {}
        Some(v) => return Err(CliError::parse(format!("{origin}: unsupported schema version {v}"))),
        None => return Err(CliError::parse(format!("{origin}: missing top-level \"schema\": {SCHEMA_VERSION}"))),
    }
    // Re-parse from text so serde reports line and column on schema errors.
    serde_json::from_str(text).map_err(|e| CliError::parse(format!("{origin}: {e}")))
}

pub fn read_versioned<T: DeserializeOwned>(path: &Path) -> Result<T, CliError> {
    let text = std::fs::read_to_string(path).map_err(|e| CliError::parse(format!("{}: {e}", path.display())))?;
    parse_versioned(&text, &path.display().to_string())
}

fn default_scale() -> bool {
    true
}

fn default_connectedness() -> Connectedness {
    Connectedness::Connected
}

fn default_mode() -> Mode {
    Mode::Lambda
}

/// A count request. Exactly one of `constraints`, `configurations` or
/// `cycle` describes where the ends must go; several configurations are
/// counted separately and compared.
#[derive(Clone, Debug, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct CountInput {
    pub schema: u64,
    #[serde(default)]
    pub name: Option<String>,
    #[serde(default)]
    pub description: Option<String>,
    pub ends: Vec<IntVec3>,
    #[serde(default)]
    pub constraints: Option<Vec<EndConstraint>>,
    #[serde(default)]
    pub configurations: Option<Vec<Vec<EndConstraint>>>,
    #[serde(default)]
    pub cycle: Option<TropicalCycle>,
    #[serde(default = "default_connectedness")]
    pub connectedness: Connectedness,
    #[serde(default = "default_mode")]
    pub mode: Mode,
    /// Multiply constraint multiplicities by `|α_e|` for every constrained
    /// nonzero end.
    #[serde(default = "default_scale")]
    pub scale: bool,
    #[serde(default)]
    pub bounds: Option<EnumBounds>,
}

impl CountInput {
    /// One request per configuration.
    pub fn requests(&self, bounds: &EnumBounds) -> Result<Vec<CountRequest>, CliError> {
        let given = [self.constraints.is_some(), self.configurations.is_some(), self.cycle.is_some()];
        if given.iter().filter(|&&b| b).count() != 1 {
            return Err(CliError::parse("exactly one of \"constraints\", \"configurations\" or \"cycle\" is required"));
        }
        let mut cycles = Vec::new();
        if let Some(c) = &self.cycle {
            cycles.push(c.clone());
        }
        let lists: Vec<&Vec<EndConstraint>> =
            self.constraints.iter().chain(self.configurations.iter().flatten()).collect();
        for list in lists {
            let c = TropicalCycle::from_end_constraints(&self.ends, list).map_err(|e| CliError::parse(e.to_string()))?;
            cycles.push(c);
        }
        if cycles.is_empty() {
            return Err(CliError::parse("\"configurations\" is empty"));
        }
        Ok(cycles
            .into_iter()
            .map(|c| CountRequest {
                ends: self.ends.clone(),
                cycle: if self.scale { scale_constraint(&c, &self.ends) } else { c },
                connectedness: self.connectedness,
                mode: self.mode,
                bounds: bounds.clone(),
            })
            .collect())
    }
}

#[derive(Clone, Debug, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct FanInput {
    pub schema: u64,
    #[serde(default)]
    pub name: Option<String>,
    pub rays: Vec<IntVec3>,
    pub cones: Vec<Vec<usize>>,
    #[serde(default)]
    pub special_rays: Vec<usize>,
}

impl FanInput {
    pub fn fan(&self) -> Result<Fan3, CliError> {
        Fan3::new(self.rays.clone(), self.cones.clone(), self.special_rays.clone()).map_err(|e| CliError::parse(e.to_string()))
    }
}

/// Extra ends and constraints for a relative invariant.
#[derive(Clone, Debug, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct RelativeInput {
    pub schema: u64,
    pub ends: Vec<IntVec3>,
    pub constraints: Vec<EndConstraint>,
}

#[derive(Clone, Debug, Deserialize)]
pub struct EndsInput {
    pub schema: u64,
    pub ends: Vec<IntVec3>,
    #[serde(default = "default_connectedness")]
    pub connectedness: Connectedness,
}

/// Point insertions at fixed, pairwise distinct integer positions. Generic
/// position comes from the seeded perturbation applied by every count.
pub fn point_insertions(n: usize) -> Vec<EndConstraint> {
    (1..=n as i64).map(|i| EndConstraint::Point { point: [i, 2 * i * i - 1, 3 * i * i * i + 2] }).collect()
}

/// Expand a degree list; a single entry applies to every ray.
pub fn expand_degrees(degrees: &[i64], rays: usize) -> Vec<i64> {
    if degrees.len() == 1 && rays > 1 {
        vec![degrees[0]; rays]
    } else {
        degrees.to_vec()
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn malformed_json_reports_location() {
        let e = parse_versioned::<CountInput>("{\"schema\": 1,\n \"ends\": [1,2", "req.json").unwrap_err();
        assert_eq!(e.status, 2);
        assert!(e.message.contains("line 2"), "{}", e.message);
    }

    #[test]
    fn schema_version_is_required() {
        let e = parse_versioned::<EndsInput>("{\"ends\": []}", "x").unwrap_err();
        assert!(e.message.contains("schema"));
        let e = parse_versioned::<EndsInput>("{\"schema\": 2, \"ends\": []}", "x").unwrap_err();
        assert!(e.message.contains("version 2"));
    }

    #[test]
    fn one_constraint_source() {
        let text = r#"{"schema":1,"ends":[[1,0,0],[0,1,0],[-1,-1,0]]}"#;
        let input: CountInput = parse_versioned(text, "x").unwrap();
        assert!(input.requests(&EnumBounds::default()).is_err());
    }

    #[test]
    fn degrees_expand() {
        assert_eq!(expand_degrees(&[1], 4), vec![1, 1, 1, 1]);
        assert_eq!(expand_degrees(&[1, 1, 0], 3), vec![1, 1, 0]);
    }
}
