//! Simulation config files.
//!
//! ```json
//! {
//!   "schema": 1,
//!   "world": { "bounds": { "min_x": -5, "min_y": -5, "max_x": 5, "max_y": 5 },
//!              "lights": [{ "x": 3, "y": 0, "power": 1 }] },
//!   "vehicles": [{ "x": 0, "y": 0, "heading": 0.3, "archetype": "love", "mode": "fuzzy" }],
//!   "dt": 0.02,
//!   "steps": 2000
//! }
//! ```

use std::collections::{BTreeMap, BTreeSet};
use std::path::Path;

use anyhow::{bail, Context};
use eigenlogic::braitenberg::{
    motor_from_formula, Archetype, ControllerMode, CustomMotors, DecisionRule, LightSource, TriConnective, Vehicle,
    DEFAULT_CRISP_THRESHOLD, DEFAULT_SENSOR_DISTANCE, DEFAULT_SENSOR_OFFSET_ANGLE, DEFAULT_TRI_THRESHOLDS,
    DEFAULT_V_MAX, DEFAULT_WHEEL_BASE,
};
use eigenlogic::fuzzy::Decision;
use eigenlogic::world::{Bounds, World, DEFAULT_DT};
use serde::{Deserialize, Serialize};

pub const SCHEMA_VERSION: u32 = 1;

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct SimConfig {
    pub schema: u32,
    pub world: WorldConfig,
    pub vehicles: Vec<VehicleConfig>,
    #[serde(default = "default_dt")]
    pub dt: f64,
    #[serde(default)]
    pub steps: usize,
    #[serde(default = "default_true")]
    pub tri_steering_offset: bool,
    /// Formula per decision over `SL, SR, ML, MR`; unlisted decisions keep
    /// their default rule.
    #[serde(default, skip_serializing_if = "BTreeMap::is_empty")]
    pub decisions: BTreeMap<Decision, String>,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct WorldConfig {
    pub bounds: BoundsConfig,
    #[serde(default)]
    pub lights: Vec<LightConfig>,
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct BoundsConfig {
    pub min_x: f64,
    pub min_y: f64,
    pub max_x: f64,
    pub max_y: f64,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct LightConfig {
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub id: Option<u32>,
    pub x: f64,
    pub y: f64,
    #[serde(default = "default_power")]
    pub power: f64,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct VehicleConfig {
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub id: Option<u32>,
    pub x: f64,
    pub y: f64,
    #[serde(default)]
    pub heading: f64,
    pub archetype: Archetype,
    pub mode: ControllerMode,
    #[serde(default = "default_wheel_base")]
    pub wheel_base: f64,
    #[serde(default = "default_v_max")]
    pub v_max: f64,
    #[serde(default = "default_sensor_offset_angle")]
    pub sensor_offset_angle: f64,
    #[serde(default = "default_sensor_distance")]
    pub sensor_distance: f64,
    #[serde(default = "default_crisp_threshold")]
    pub crisp_threshold: f64,
    #[serde(default = "default_tri_thresholds")]
    pub tri_thresholds: (f64, f64),
    #[serde(default)]
    pub tri_connective: TriConnective,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub motors: Option<MotorFormulas>,
}

/// Custom motor formulas over `SL`, `SR`.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct MotorFormulas {
    pub left: String,
    pub right: String,
}

fn default_dt() -> f64 {
    DEFAULT_DT
}
fn default_true() -> bool {
    true
}
fn default_power() -> f64 {
    1.0
}
fn default_wheel_base() -> f64 {
    DEFAULT_WHEEL_BASE
}
fn default_v_max() -> f64 {
    DEFAULT_V_MAX
}
fn default_sensor_offset_angle() -> f64 {
    DEFAULT_SENSOR_OFFSET_ANGLE
}
fn default_sensor_distance() -> f64 {
    DEFAULT_SENSOR_DISTANCE
}
fn default_crisp_threshold() -> f64 {
    DEFAULT_CRISP_THRESHOLD
}
fn default_tri_thresholds() -> (f64, f64) {
    DEFAULT_TRI_THRESHOLDS
}

impl SimConfig {
    /// Parses and validates; schema errors name the offending field path.
    pub fn from_json(text: &str) -> anyhow::Result<Self> {
        let de = &mut serde_json::Deserializer::from_str(text);
        let config: SimConfig = serde_path_to_error::deserialize(de).map_err(|e| {
            let path = e.path().to_string();
            anyhow::anyhow!("invalid config at `{path}`: {}", e.into_inner())
        })?;
        config.validate()?;
        Ok(config)
    }

    pub fn load(path: &Path) -> anyhow::Result<Self> {
        let text = std::fs::read_to_string(path).with_context(|| format!("reading {}", path.display()))?;
        Self::from_json(&text).with_context(|| format!("loading {}", path.display()))
    }

    pub fn validate(&self) -> anyhow::Result<()> {
        if self.schema != SCHEMA_VERSION {
            bail!("invalid config at `schema`: expected {SCHEMA_VERSION}, found {}", self.schema);
        }
        if !(self.dt > 0.0 && self.dt.is_finite()) {
            bail!("invalid config at `dt`: must be positive, got {}", self.dt);
        }
        self.world().map(|_| ())
    }

    /// The initial world described by this config.
    pub fn world(&self) -> anyhow::Result<World> {
        let bounds = Bounds::new(
            self.world.bounds.min_x,
            self.world.bounds.min_y,
            self.world.bounds.max_x,
            self.world.bounds.max_y,
        )
        .context("invalid config at `world.bounds`")?;

        let light_ids = assign_ids(self.world.lights.iter().map(|l| l.id));
        let mut lights = Vec::with_capacity(self.world.lights.len());
        for (i, (l, id)) in self.world.lights.iter().zip(light_ids).enumerate() {
            lights.push(
                LightSource::new(id, l.x, l.y, l.power)
                    .with_context(|| format!("invalid config at `world.lights[{i}]`"))?,
            );
        }

        let vehicle_ids = assign_ids(self.vehicles.iter().map(|v| v.id));
        let mut vehicles = Vec::with_capacity(self.vehicles.len());
        for (i, (c, id)) in self.vehicles.iter().zip(vehicle_ids).enumerate() {
            let v = c.vehicle(id).with_context(|| format!("invalid config at `vehicles[{i}]`"))?;
            vehicles.push(v);
        }

        let mut world = World::new(bounds, lights, vehicles).context("invalid config at `world`")?;
        world.tri_steering_offset = self.tri_steering_offset;
        for (decision, formula) in &self.decisions {
            let rule = DecisionRule::new(*decision, formula)
                .with_context(|| format!("invalid config at `decisions.{}`", decision.name()))?;
            match world.decision_rules.iter_mut().find(|r| r.decision == *decision) {
                Some(slot) => *slot = rule,
                None => world.decision_rules.push(rule),
            }
        }
        Ok(world)
    }
}

impl VehicleConfig {
    fn vehicle(&self, id: u32) -> anyhow::Result<Vehicle> {
        let mut v = Vehicle::new(id, self.x, self.y, self.heading, self.archetype, self.mode);
        v.wheel_base = self.wheel_base;
        v.v_max = self.v_max;
        v.sensor_offset_angle = self.sensor_offset_angle;
        v.sensor_distance = self.sensor_distance;
        v.crisp_threshold = self.crisp_threshold;
        v.tri_thresholds = self.tri_thresholds;
        v.tri_connective = self.tri_connective;
        if let Some(m) = &self.motors {
            v.custom_motors = Some(CustomMotors {
                left: motor_from_formula(&m.left).context("motors.left")?,
                right: motor_from_formula(&m.right).context("motors.right")?,
            });
        }
        v.validate()?;
        Ok(v)
    }
}

/// Keeps explicit ids and numbers the rest upward from the largest one.
fn assign_ids(ids: impl Iterator<Item = Option<u32>> + Clone) -> Vec<u32> {
    let taken: BTreeSet<u32> = ids.clone().flatten().collect();
    let mut next = taken.iter().next_back().map_or(0, |m| m + 1);
    ids.map(|id| {
        id.unwrap_or_else(|| {
            next += 1;
            next - 1
        })
    })
    .collect()
}

#[cfg(test)]
mod tests {
    use super::*;

    const MINIMAL: &str = r#"{
        "schema": 1,
        "world": { "bounds": { "min_x": -5, "min_y": -5, "max_x": 5, "max_y": 5 },
                   "lights": [{ "x": 3, "y": 0 }, { "id": 4, "x": 0, "y": 3, "power": 0.5 }] },
        "vehicles": [{ "x": 0, "y": 0, "archetype": "love", "mode": "fuzzy" }]
    }"#;

    #[test]
    fn defaults_fill_in() {
        let c = SimConfig::from_json(MINIMAL).unwrap();
        assert_eq!(c.dt, DEFAULT_DT);
        assert_eq!(c.steps, 0);
        let w = c.world().unwrap();
        assert_eq!(w.lights.iter().map(|l| l.id).collect::<Vec<_>>(), [5, 4]);
        assert_eq!(w.vehicles[0], Vehicle::new(0, 0.0, 0.0, 0.0, Archetype::Love, ControllerMode::Fuzzy));
    }

    #[test]
    fn unknown_field_names_its_path() {
        let text = MINIMAL.replace(r#""archetype": "love""#, r#""archetype": "love", "colour": 1"#);
        let err = SimConfig::from_json(&text).unwrap_err().to_string();
        assert!(err.contains("vehicles[0]") && err.contains("colour"), "{err}");
    }

    #[test]
    fn bad_enum_names_its_path() {
        let text = MINIMAL.replace(r#""mode": "fuzzy""#, r#""mode": "quantum""#);
        let err = SimConfig::from_json(&text).unwrap_err().to_string();
        assert!(err.contains("vehicles[0].mode"), "{err}");
    }

    #[test]
    fn wrong_schema_version() {
        let err = SimConfig::from_json(&MINIMAL.replace(r#""schema": 1"#, r#""schema": 2"#)).unwrap_err();
        assert!(err.to_string().contains("schema"));
    }

    #[test]
    fn vehicle_outside_bounds() {
        let err =
            SimConfig::from_json(&MINIMAL.replace(r#""x": 0, "y": 0, "archetype""#, r#""x": 9, "y": 0, "archetype""#))
                .unwrap_err();
        assert!(format!("{err:#}").contains("outside bounds"), "{err:#}");
    }

    #[test]
    fn decision_override() {
        let text = MINIMAL.replace(r#""schema": 1,"#, r#""schema": 1, "decisions": { "left": "SL & !SR" },"#);
        let w = SimConfig::from_json(&text).unwrap().world().unwrap();
        let left = w.decision_rules.iter().find(|r| r.decision == Decision::Left).unwrap();
        assert_eq!(left.formula, "SL & !SR");
        assert_eq!(w.decision_rules.len(), 4);
    }

    #[test]
    fn custom_motor_formula_errors() {
        let text =
            MINIMAL.replace(r#""mode": "fuzzy""#, r#""mode": "fuzzy", "motors": { "left": "SL &", "right": "SR" }"#);
        let err = SimConfig::from_json(&text).unwrap_err();
        assert!(format!("{err:#}").contains("motors.left"), "{err:#}");
    }
}
