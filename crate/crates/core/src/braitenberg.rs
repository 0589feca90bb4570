//! Braitenberg vehicles driven by logical observables.
//!
//! The two sensors `SL`, `SR` are the arguments; the left and right motor
//! commands are `{+1, −1}`-valued observables on the four interpretations
//! (`±Z`, `±Y` depending on the wiring). A motor eigenvalue `λ` maps to wheel
//! speed `v_max·(λ+1)/2`, so `+1` is full excitation and `−1` full inhibition.

use serde::{Deserialize, Serialize};

use crate::binary::{to_isometric, y_dictator, z_dictator};
use crate::error::{Error, Result};
use crate::formula::{compile_with_variables, parse};
use crate::fuzzy::{decide, fuzzify, membership, Decision, Membership};
use crate::linop::{expectation, ComplexVector, NORM_TOL};
use crate::multivalued::{max3, min3};
use crate::observable::LogicalObservable;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Archetype {
    /// Uncrossed excitatory wiring: turns away from light.
    Fear,
    /// Crossed excitatory wiring: charges the light.
    Aggress,
    /// Uncrossed inhibitory wiring: approaches and stops at the light.
    Love,
    /// Crossed inhibitory wiring: visits the light and moves on.
    Explore,
}

impl Archetype {
    pub const ALL: [Archetype; 4] = [Archetype::Fear, Archetype::Aggress, Archetype::Love, Archetype::Explore];

    /// Love and aggress steer toward the brighter side.
    pub fn approaches(self) -> bool {
        matches!(self, Archetype::Aggress | Archetype::Love)
    }

    pub fn name(self) -> &'static str {
        match self {
            Archetype::Fear => "fear",
            Archetype::Aggress => "aggress",
            Archetype::Love => "love",
            Archetype::Explore => "explore",
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum ControllerMode {
    /// Sensors thresholded to bits; eigenstate readout.
    Crisp,
    /// Sensors fuzzified to qubits; Born-rule mean values.
    Fuzzy,
    /// Sensors quantized to `{0,1,2}`; `Min` or `Max` level.
    Trivalued,
}

impl ControllerMode {
    pub const ALL: [ControllerMode; 3] = [ControllerMode::Crisp, ControllerMode::Fuzzy, ControllerMode::Trivalued];

    pub fn name(self) -> &'static str {
        match self {
            ControllerMode::Crisp => "crisp",
            ControllerMode::Fuzzy => "fuzzy",
            ControllerMode::Trivalued => "trivalued",
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize, Default)]
#[serde(rename_all = "lowercase")]
pub enum TriConnective {
    #[default]
    Min,
    Max,
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct LightSource {
    pub id: u32,
    pub x: f64,
    pub y: f64,
    pub power: f64,
}

impl LightSource {
    pub fn new(id: u32, x: f64, y: f64, power: f64) -> Result<Self> {
        let light = Self { id, x, y, power };
        light.validate()?;
        Ok(light)
    }

    pub fn validate(&self) -> Result<()> {
        if !(self.power >= 0.0 && self.power.is_finite()) {
            return Err(Error::InvalidWorld(format!("light {} has power {}", self.id, self.power)));
        }
        if !(self.x.is_finite() && self.y.is_finite()) {
            return Err(Error::InvalidWorld(format!("light {} position is not finite", self.id)));
        }
        Ok(())
    }
}

/// Motor observables installed in place of the archetype's wiring.
#[derive(Debug, Clone, PartialEq)]
pub struct CustomMotors {
    pub left: LogicalObservable,
    pub right: LogicalObservable,
}

/// Variables a motor formula may read, in argument order.
pub const MOTOR_FORMULA_VARS: [&str; 2] = ["SL", "SR"];

/// Compiles a motor formula over `SL`, `SR` into an isometric motor observable.
///
/// The motor is excited exactly when the formula is true, so the installed
/// observable is `2F − I` and the wheel speed is `v_max·μ(F)`.
pub fn motor_from_formula(text: &str) -> Result<LogicalObservable> {
    let ast = parse(text).map_err(crate::formula::FormulaError::from)?;
    let f = compile_with_variables(&ast, 2, &MOTOR_FORMULA_VARS)?;
    if !f.is_projective() {
        return Err(Error::NotProjective);
    }
    Ok(to_isometric(&f)?.negated())
}

#[derive(Debug, Clone, PartialEq)]
pub struct Vehicle {
    pub id: u32,
    pub x: f64,
    pub y: f64,
    /// Radians, counter-clockwise from +x.
    pub heading: f64,
    pub wheel_base: f64,
    pub v_max: f64,
    /// Angle of each sensor off the heading, radians.
    pub sensor_offset_angle: f64,
    pub sensor_distance: f64,
    pub archetype: Archetype,
    pub mode: ControllerMode,
    pub crisp_threshold: f64,
    pub tri_thresholds: (f64, f64),
    pub tri_connective: TriConnective,
    pub custom_motors: Option<CustomMotors>,
}

pub const DEFAULT_WHEEL_BASE: f64 = 0.2;
pub const DEFAULT_V_MAX: f64 = 1.0;
pub const DEFAULT_SENSOR_OFFSET_ANGLE: f64 = std::f64::consts::PI / 6.0;
pub const DEFAULT_SENSOR_DISTANCE: f64 = 0.1;
pub const DEFAULT_CRISP_THRESHOLD: f64 = 0.5;
pub const DEFAULT_TRI_THRESHOLDS: (f64, f64) = (0.3, 0.7);

impl Vehicle {
    /// Vehicle with the default geometry.
    pub fn new(id: u32, x: f64, y: f64, heading: f64, archetype: Archetype, mode: ControllerMode) -> Self {
        Self {
            id,
            x,
            y,
            heading,
            wheel_base: DEFAULT_WHEEL_BASE,
            v_max: DEFAULT_V_MAX,
            sensor_offset_angle: DEFAULT_SENSOR_OFFSET_ANGLE,
            sensor_distance: DEFAULT_SENSOR_DISTANCE,
            archetype,
            mode,
            crisp_threshold: DEFAULT_CRISP_THRESHOLD,
            tri_thresholds: DEFAULT_TRI_THRESHOLDS,
            tri_connective: TriConnective::Min,
            custom_motors: None,
        }
    }

    pub fn validate(&self) -> Result<()> {
        let bad = |msg: String| Err(Error::InvalidVehicle(format!("vehicle {}: {msg}", self.id)));
        if !(self.wheel_base > 0.0 && self.wheel_base.is_finite()) {
            return bad(format!("wheel_base must be positive, got {}", self.wheel_base));
        }
        if !(self.v_max > 0.0 && self.v_max.is_finite()) {
            return bad(format!("v_max must be positive, got {}", self.v_max));
        }
        if !(self.sensor_distance >= 0.0 && self.sensor_distance.is_finite()) {
            return bad(format!("sensor_distance must be nonnegative, got {}", self.sensor_distance));
        }
        if !self.sensor_offset_angle.is_finite() {
            return bad("sensor_offset_angle is not finite".into());
        }
        if !(0.0..=1.0).contains(&self.crisp_threshold) {
            return bad(format!("crisp_threshold must lie in [0, 1], got {}", self.crisp_threshold));
        }
        let (t1, t2) = self.tri_thresholds;
        if !(0.0 < t1 && t1 < t2 && t2 <= 1.0) {
            return bad(format!("tri_thresholds need 0 < t1 < t2 ≤ 1, got ({t1}, {t2})"));
        }
        if ![self.x, self.y, self.heading].iter().all(|v| v.is_finite()) {
            return bad("pose is not finite".into());
        }
        Ok(())
    }

    /// World positions of the left and right sensors.
    pub fn sensor_positions(&self) -> ((f64, f64), (f64, f64)) {
        let at =
            |angle: f64| (self.x + self.sensor_distance * angle.cos(), self.y + self.sensor_distance * angle.sin());
        (at(self.heading + self.sensor_offset_angle), at(self.heading - self.sensor_offset_angle))
    }

    /// `(ML, MR)` in effect: custom motors when installed, else the archetype's.
    pub fn motor_observables(&self) -> (LogicalObservable, LogicalObservable) {
        match &self.custom_motors {
            Some(m) => (m.left.clone(), m.right.clone()),
            None => actuator_observables(self.archetype),
        }
    }
}

/// Normalized light intensity at each sensor.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct SensorReading {
    pub left: f64,
    pub right: f64,
}

impl SensorReading {
    /// Clamps both channels to `[0, 1]`.
    pub fn new(left: f64, right: f64) -> Self {
        Self { left: left.clamp(0.0, 1.0), right: right.clamp(0.0, 1.0) }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct WheelSpeeds {
    pub left: f64,
    pub right: f64,
}

/// `Σ_k power_k / (1 + d_k²)` at a point.
pub fn intensity_at(lights: &[LightSource], x: f64, y: f64) -> f64 {
    lights
        .iter()
        .map(|l| {
            let d2 = (l.x - x).powi(2) + (l.y - y).powi(2);
            l.power / (1.0 + d2)
        })
        .sum()
}

/// Reads both sensors of `v` among `lights`.
pub fn sense(lights: &[LightSource], v: &Vehicle) -> SensorReading {
    let ((lx, ly), (rx, ry)) = v.sensor_positions();
    SensorReading::new(intensity_at(lights, lx, ly), intensity_at(lights, rx, ry))
}

/// Motor observables `(ML, MR)` per wiring, with `Z = diag(1,1,−1,−1)` and
/// `Y = diag(1,−1,1,−1)`.
pub fn actuator_observables(archetype: Archetype) -> (LogicalObservable, LogicalObservable) {
    let z = z_dictator();
    let y = y_dictator();
    match archetype {
        Archetype::Fear => (z.negated(), y.negated()),
        Archetype::Aggress => (y.negated(), z.negated()),
        Archetype::Love => (z, y),
        Archetype::Explore => (y, z),
    }
}

/// `v_max·(λ+1)/2`.
pub fn eigenvalue_to_speed(lambda: f64, v_max: f64) -> Result<f64> {
    if lambda.is_nan() || lambda.abs() > 1.0 + NORM_TOL {
        return Err(Error::OutOfRange { what: "motor eigenvalue", value: lambda, lo: -1.0, hi: 1.0 });
    }
    Ok((v_max * (lambda.clamp(-1.0, 1.0) + 1.0) / 2.0).clamp(0.0, v_max))
}

fn motor_speeds(v: &Vehicle, state: &ComplexVector) -> Result<WheelSpeeds> {
    let (ml, mr) = v.motor_observables();
    Ok(WheelSpeeds {
        left: eigenvalue_to_speed(expectation(state, ml.op())?, v.v_max)?,
        right: eigenvalue_to_speed(expectation(state, mr.op())?, v.v_max)?,
    })
}

/// Thresholds each sensor to a bit and reads the motor eigenvalues on `|left,right⟩`.
pub fn controller_crisp(s: SensorReading, v: &Vehicle) -> Result<WheelSpeeds> {
    let bit = |x: f64| usize::from(x >= v.crisp_threshold);
    let index = 2 * bit(s.left) + bit(s.right);
    motor_speeds(v, &ComplexVector::basis(4, index)?)
}

/// Born-rule motor commands on the product of the fuzzified sensor qubits.
pub fn controller_fuzzy(s: SensorReading, v: &Vehicle) -> Result<WheelSpeeds> {
    let state = fuzzify(s.left)?.kron(&fuzzify(s.right)?);
    motor_speeds(v, &state)
}

/// `0` below `t1`, `1` below `t2`, else `2`.
pub fn quantize(intensity: f64, (t1, t2): (f64, f64)) -> usize {
    if intensity < t1 {
        0
    } else if intensity < t2 {
        1
    } else {
        2
    }
}

/// Quantizes the sensors to `{0,1,2}` and drives both wheels at the `Min` or
/// `Max` level, `level/2 · v_max`.
///
/// With `steering_offset`, a differential term `(u−v)/2 · v_max/2` from the
/// dictator eigenvalues turns the vehicle toward the brighter side for
/// approaching wirings and away from it otherwise. Speeds are clamped to
/// `[0, v_max]`.
pub fn controller_trivalued(
    s: SensorReading,
    v: &Vehicle,
    connective: TriConnective,
    steering_offset: bool,
) -> Result<WheelSpeeds> {
    let u = quantize(s.left, v.tri_thresholds);
    let w = quantize(s.right, v.tri_thresholds);
    let index = 3 * u + w;
    let observable = match connective {
        TriConnective::Min => min3(),
        TriConnective::Max => max3(),
    };
    let level = expectation(&ComplexVector::basis(9, index)?, observable.op())?;
    let base = level / 2.0 * v.v_max;
    let offset = if steering_offset { (u as f64 - w as f64) / 2.0 * v.v_max / 2.0 } else { 0.0 };
    let (left, right) =
        if v.archetype.approaches() { (base - offset, base + offset) } else { (base + offset, base - offset) };
    Ok(WheelSpeeds { left: left.clamp(0.0, v.v_max), right: right.clamp(0.0, v.v_max) })
}

/// Dispatches on the vehicle's mode.
pub fn control(s: SensorReading, v: &Vehicle, steering_offset: bool) -> Result<WheelSpeeds> {
    match v.mode {
        ControllerMode::Crisp => controller_crisp(s, v),
        ControllerMode::Fuzzy => controller_fuzzy(s, v),
        ControllerMode::Trivalued => controller_trivalued(s, v, v.tri_connective, steering_offset),
    }
}

/// Variables a decision rule may read, in argument order: sensor intensities
/// then normalized motor activations.
pub const DECISION_VARS: [&str; 4] = ["SL", "SR", "ML", "MR"];

/// A motion decision with the formula whose fuzzy membership scores it.
#[derive(Debug, Clone, PartialEq)]
pub struct DecisionRule {
    pub decision: Decision,
    pub formula: String,
    observable: LogicalObservable,
}

impl DecisionRule {
    pub fn new(decision: Decision, formula: &str) -> Result<Self> {
        let ast = parse(formula).map_err(crate::formula::FormulaError::from)?;
        let observable = compile_with_variables(&ast, 2, &DECISION_VARS)?;
        if !observable.is_projective() {
            return Err(Error::NotProjective);
        }
        Ok(Self { decision, formula: formula.to_string(), observable })
    }

    pub fn observable(&self) -> &LogicalObservable {
        &self.observable
    }

    /// Default rules read the motor activations as a 2-to-4 demultiplexer.
    pub fn defaults() -> Vec<DecisionRule> {
        [
            (Decision::Forwards, "ML & MR"),
            (Decision::Left, "!ML & MR"),
            (Decision::Right, "ML & !MR"),
            (Decision::Backwards, "!ML & !MR"),
        ]
        .into_iter()
        .map(|(d, f)| DecisionRule::new(d, f).expect("default rules compile"))
        .collect()
    }
}

/// Scores every rule on the fuzzified sensor and motor activations and picks
/// the best.
pub fn decide_motion(
    rules: &[DecisionRule],
    s: SensorReading,
    speeds: WheelSpeeds,
    v_max: f64,
) -> Result<(Decision, Vec<(Decision, Membership)>)> {
    let act = |x: f64| (x / v_max).clamp(0.0, 1.0);
    let state = ComplexVector::kron_all(&[
        fuzzify(s.left)?,
        fuzzify(s.right)?,
        fuzzify(act(speeds.left))?,
        fuzzify(act(speeds.right))?,
    ])?;
    let scored = rules
        .iter()
        .map(|r| Ok((r.decision, membership(std::slice::from_ref(&state), &r.observable)?)))
        .collect::<Result<Vec<_>>>()?;
    Ok((decide(&scored)?, scored))
}
