//! Fixed-step differential-drive simulation of a world of vehicles and lights.

use std::io::{self, Write};

use serde::{Deserialize, Serialize};

use crate::braitenberg::{
    control, decide_motion, sense, DecisionRule, LightSource, SensorReading, Vehicle, WheelSpeeds,
};
use crate::error::{Error, Result};
use crate::fuzzy::Decision;

pub const DEFAULT_DT: f64 = 0.02;

/// Axis-aligned rectangle that vehicles are clamped to.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct Bounds {
    pub min_x: f64,
    pub min_y: f64,
    pub max_x: f64,
    pub max_y: f64,
}

impl Bounds {
    pub fn new(min_x: f64, min_y: f64, max_x: f64, max_y: f64) -> Result<Self> {
        let b = Self { min_x, min_y, max_x, max_y };
        if !(min_x < max_x && min_y < max_y) || ![min_x, min_y, max_x, max_y].iter().all(|v| v.is_finite()) {
            return Err(Error::InvalidWorld(format!("degenerate bounds {b:?}")));
        }
        Ok(b)
    }

    pub fn contains(&self, x: f64, y: f64) -> bool {
        (self.min_x..=self.max_x).contains(&x) && (self.min_y..=self.max_y).contains(&y)
    }

    pub fn clamp(&self, x: f64, y: f64) -> (f64, f64) {
        (x.clamp(self.min_x, self.max_x), y.clamp(self.min_y, self.max_y))
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct World {
    pub lights: Vec<LightSource>,
    pub vehicles: Vec<Vehicle>,
    pub bounds: Bounds,
    pub time: f64,
    /// Differential steering term of the tri-valued controller.
    pub tri_steering_offset: bool,
    pub decision_rules: Vec<DecisionRule>,
}

/// What one vehicle's controller sees and commands at an instant.
#[derive(Debug, Clone, PartialEq)]
pub struct Telemetry {
    pub vehicle_id: u32,
    pub reading: SensorReading,
    pub speeds: WheelSpeeds,
    pub decision: Decision,
}

/// One row of a trajectory: the pose reached at `t` and the inputs and
/// wheel speeds applied over the step that reached it.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct StepRecord {
    pub t: f64,
    pub vehicle_id: u32,
    pub x: f64,
    pub y: f64,
    pub heading: f64,
    pub v_l: f64,
    pub v_r: f64,
    pub mu_l: f64,
    pub mu_r: f64,
}

pub type Trajectory = Vec<StepRecord>;

impl World {
    pub fn new(bounds: Bounds, lights: Vec<LightSource>, vehicles: Vec<Vehicle>) -> Result<Self> {
        let world = Self {
            lights,
            vehicles,
            bounds,
            time: 0.0,
            tri_steering_offset: true,
            decision_rules: DecisionRule::defaults(),
        };
        world.validate()?;
        Ok(world)
    }

    pub fn validate(&self) -> Result<()> {
        for l in &self.lights {
            l.validate()?;
        }
        for v in &self.vehicles {
            v.validate()?;
            if !self.bounds.contains(v.x, v.y) {
                return Err(Error::InvalidWorld(format!("vehicle {} starts outside bounds", v.id)));
            }
        }
        if let Some(id) = duplicate(self.lights.iter().map(|l| l.id)) {
            return Err(Error::InvalidWorld(format!("duplicate light id {id}")));
        }
        if let Some(id) = duplicate(self.vehicles.iter().map(|v| v.id)) {
            return Err(Error::InvalidWorld(format!("duplicate vehicle id {id}")));
        }
        if self.decision_rules.is_empty() {
            return Err(Error::NoDecisions);
        }
        Ok(())
    }

    pub fn vehicle(&self, id: u32) -> Option<&Vehicle> {
        self.vehicles.iter().find(|v| v.id == id)
    }

    pub fn vehicle_mut(&mut self, id: u32) -> Option<&mut Vehicle> {
        self.vehicles.iter_mut().find(|v| v.id == id)
    }

    pub fn light_mut(&mut self, id: u32) -> Option<&mut LightSource> {
        self.lights.iter_mut().find(|l| l.id == id)
    }

    /// One past the largest light id.
    pub fn next_light_id(&self) -> u32 {
        self.lights.iter().map(|l| l.id + 1).max().unwrap_or(0)
    }

    /// Sensor reading, wheel speeds and decision of vehicle `v` in this world.
    pub fn telemetry(&self, v: &Vehicle) -> Result<Telemetry> {
        let reading = sense(&self.lights, v);
        let speeds = control(reading, v, self.tri_steering_offset)?;
        let (decision, _) = decide_motion(&self.decision_rules, reading, speeds, v.v_max)?;
        Ok(Telemetry { vehicle_id: v.id, reading, speeds, decision })
    }

    /// Advances every vehicle by `dt` with explicit Euler. Controllers read
    /// only the pre-step world.
    pub fn step(&self, dt: f64) -> Result<(World, Vec<StepRecord>)> {
        if !(dt > 0.0 && dt.is_finite()) {
            return Err(Error::InvalidTimestep(dt));
        }
        let controls = self
            .vehicles
            .iter()
            .map(|v| {
                let reading = sense(&self.lights, v);
                Ok((reading, control(reading, v, self.tri_steering_offset)?))
            })
            .collect::<Result<Vec<_>>>()?;

        let mut next = self.clone();
        next.time = self.time + dt;
        let mut records = Vec::with_capacity(controls.len());
        for (v, (reading, speeds)) in next.vehicles.iter_mut().zip(controls) {
            integrate(v, speeds, dt, &self.bounds);
            records.push(StepRecord {
                t: next.time,
                vehicle_id: v.id,
                x: v.x,
                y: v.y,
                heading: v.heading,
                v_l: speeds.left,
                v_r: speeds.right,
                mu_l: reading.left,
                mu_r: reading.right,
            });
        }
        Ok((next, records))
    }

    /// Runs `steps` fixed steps and returns the final world and every record.
    pub fn run(&self, dt: f64, steps: usize) -> Result<(World, Trajectory)> {
        self.validate()?;
        if !(dt > 0.0 && dt.is_finite()) {
            return Err(Error::InvalidTimestep(dt));
        }
        let mut world = self.clone();
        let mut trajectory = Vec::with_capacity(steps * world.vehicles.len());
        for _ in 0..steps {
            let (next, records) = world.step(dt)?;
            trajectory.extend(records);
            world = next;
        }
        Ok((world, trajectory))
    }
}

fn duplicate(ids: impl Iterator<Item = u32>) -> Option<u32> {
    let mut seen = std::collections::BTreeSet::new();
    ids.into_iter().find(|id| !seen.insert(*id))
}

/// Differential drive: `v = (vL+vR)/2`, `ω = (vR−vL)/wheel_base`.
pub fn integrate(v: &mut Vehicle, speeds: WheelSpeeds, dt: f64, bounds: &Bounds) {
    let linear = (speeds.left + speeds.right) / 2.0;
    let angular = (speeds.right - speeds.left) / v.wheel_base;
    let x = v.x + linear * v.heading.cos() * dt;
    let y = v.y + linear * v.heading.sin() * dt;
    (v.x, v.y) = bounds.clamp(x, y);
    v.heading += angular * dt;
}

pub const CSV_HEADER: &str = "t,vehicle_id,x,y,heading,vL,vR,muL,muR";

/// Writes the trajectory as CSV with LF line endings and 9 significant digits.
pub fn write_csv<W: Write>(records: &[StepRecord], mut out: W) -> io::Result<()> {
    writeln!(out, "{CSV_HEADER}")?;
    for r in records {
        writeln!(
            out,
            "{},{},{},{},{},{},{},{},{}",
            sig9(r.t),
            r.vehicle_id,
            sig9(r.x),
            sig9(r.y),
            sig9(r.heading),
            sig9(r.v_l),
            sig9(r.v_r),
            sig9(r.mu_l),
            sig9(r.mu_r),
        )?;
    }
    Ok(())
}

/// Formats like C's `%.9g`.
pub fn sig9(x: f64) -> String {
    const P: i32 = 9;
    if x == 0.0 {
        return "0".into();
    }
    if !x.is_finite() {
        return x.to_string();
    }
    // exponent after rounding to P significant digits
    let sci = format!("{:.*e}", (P - 1) as usize, x);
    let (mantissa, exp) = sci.split_once('e').expect("scientific format");
    let exp: i32 = exp.parse().expect("integer exponent");
    if !(-4..P).contains(&exp) {
        let mantissa = trim_zeros(mantissa);
        let sign = if exp < 0 { '-' } else { '+' };
        format!("{mantissa}e{sign}{:02}", exp.abs())
    } else {
        let decimals = (P - 1 - exp) as usize;
        trim_zeros(&format!("{x:.decimals$}")).to_string()
    }
}

fn trim_zeros(s: &str) -> &str {
    if s.contains('.') {
        s.trim_end_matches('0').trim_end_matches('.')
    } else {
        s
    }
}
