//! Session protocol. Every text frame is one JSON object
//! `{"kind": ..., "seq": n, "payload": {...}}`; `payload` is omitted for
//! kinds without one.

use eigenlogic::braitenberg::{Archetype, ControllerMode};
use eigenlogic::fuzzy::Decision;
use serde::{Deserialize, Serialize};
use serde_json::Value;

#[derive(Debug, Clone, PartialEq)]
pub struct SessionMessage {
    pub seq: u64,
    pub body: Body,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(tag = "kind", content = "payload", rename_all = "snake_case")]
pub enum Body {
    AddLight(AddLight),
    MoveLight(MoveLight),
    RemoveLight(EntityId),
    SetArchetype(SetArchetype),
    SetMode(SetMode),
    SetFormula(SetFormula),
    Pause,
    Resume,
    StepOnce,
    Reset,
    Snapshot(Snapshot),
    Error(ErrorPayload),
    Ack(AckPayload),
}

impl Body {
    pub fn is_client(&self) -> bool {
        !matches!(self, Body::Snapshot(_) | Body::Error(_) | Body::Ack(_))
    }

    pub fn kind(&self) -> &'static str {
        match self {
            Body::AddLight(_) => "add_light",
            Body::MoveLight(_) => "move_light",
            Body::RemoveLight(_) => "remove_light",
            Body::SetArchetype(_) => "set_archetype",
            Body::SetMode(_) => "set_mode",
            Body::SetFormula(_) => "set_formula",
            Body::Pause => "pause",
            Body::Resume => "resume",
            Body::StepOnce => "step_once",
            Body::Reset => "reset",
            Body::Snapshot(_) => "snapshot",
            Body::Error(_) => "error",
            Body::Ack(_) => "ack",
        }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct AddLight {
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub id: Option<u32>,
    pub x: f64,
    pub y: f64,
    #[serde(default = "unit_power")]
    pub power: f64,
}

fn unit_power() -> f64 {
    1.0
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct MoveLight {
    pub id: u32,
    pub x: f64,
    pub y: f64,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct EntityId {
    pub id: u32,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct SetArchetype {
    pub id: u32,
    pub archetype: Archetype,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct SetMode {
    pub id: u32,
    pub mode: ControllerMode,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Motor {
    Left,
    Right,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct SetFormula {
    pub id: u32,
    pub motor: Motor,
    pub formula: String,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct Snapshot {
    pub time: f64,
    pub vehicles: Vec<VehicleState>,
    pub lights: Vec<LightState>,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct VehicleState {
    pub id: u32,
    pub x: f64,
    pub y: f64,
    pub heading: f64,
    #[serde(rename = "vL")]
    pub v_l: f64,
    #[serde(rename = "vR")]
    pub v_r: f64,
    #[serde(rename = "muL")]
    pub mu_l: f64,
    #[serde(rename = "muR")]
    pub mu_r: f64,
    pub archetype: Archetype,
    pub mode: ControllerMode,
    pub decision: Decision,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct LightState {
    pub id: u32,
    pub x: f64,
    pub y: f64,
    pub power: f64,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ErrorPayload {
    pub message: String,
}

/// `snapshot_seq` is the last snapshot emitted before the command took effect
/// (or the one it produced).
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct AckPayload {
    pub snapshot_seq: u64,
}

#[derive(Debug, thiserror::Error)]
pub enum DecodeError {
    #[error("malformed frame: {0}")]
    Json(#[from] serde_json::Error),
    #[error("unknown message kind `{0}`")]
    UnknownKind(String),
}

#[derive(Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
struct Frame {
    kind: String,
    seq: u64,
    #[serde(default, skip_serializing_if = "Value::is_null")]
    payload: Value,
}

const KINDS: [&str; 13] = [
    "add_light",
    "move_light",
    "remove_light",
    "set_archetype",
    "set_mode",
    "set_formula",
    "pause",
    "resume",
    "step_once",
    "reset",
    "snapshot",
    "error",
    "ack",
];

impl SessionMessage {
    pub fn new(seq: u64, body: Body) -> Self {
        Self { seq, body }
    }

    pub fn to_json(&self) -> String {
        let mut tagged = serde_json::to_value(&self.body).expect("message bodies always serialize");
        let payload = tagged.get_mut("payload").map(Value::take).unwrap_or(Value::Null);
        let frame = Frame { kind: self.body.kind().to_string(), seq: self.seq, payload };
        serde_json::to_string(&frame).expect("frames always serialize")
    }

    pub fn from_json(text: &str) -> Result<Self, DecodeError> {
        let frame: Frame = serde_json::from_str(text)?;
        if !KINDS.contains(&frame.kind.as_str()) {
            return Err(DecodeError::UnknownKind(frame.kind));
        }
        let mut tagged = serde_json::Map::new();
        tagged.insert("kind".into(), Value::String(frame.kind));
        if !frame.payload.is_null() {
            tagged.insert("payload".into(), frame.payload);
        }
        let body = serde_json::from_value(Value::Object(tagged))?;
        Ok(Self { seq: frame.seq, body })
    }
}

/// Best-effort sequence number of a frame that failed to decode.
pub fn salvage_seq(text: &str) -> u64 {
    serde_json::from_str::<Value>(text).ok().and_then(|v| v.get("seq").and_then(Value::as_u64)).unwrap_or(0)
}
