//! Session state owned by the simulation loop.

use eigenlogic::braitenberg::{motor_from_formula, CustomMotors, LightSource};
use eigenlogic::world::World;

use crate::protocol::{Body, LightState, Motor, Snapshot, VehicleState};

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Effect {
    /// Applied; state changed.
    Mutated,
    /// Applied; nothing to redraw.
    Unchanged,
    /// The world advanced one step.
    Stepped,
}

#[derive(Debug, Clone)]
pub struct Session {
    initial: World,
    world: World,
    dt: f64,
    paused: bool,
}

impl Session {
    pub fn new(world: World, dt: f64) -> Self {
        Self { initial: world.clone(), world, dt, paused: false }
    }

    pub fn world(&self) -> &World {
        &self.world
    }

    pub fn dt(&self) -> f64 {
        self.dt
    }

    pub fn is_paused(&self) -> bool {
        self.paused
    }

    pub fn step(&mut self) -> anyhow::Result<()> {
        let (next, _) = self.world.step(self.dt)?;
        self.world = next;
        Ok(())
    }

    /// Applies one client command atomically: on error the world is untouched.
    pub fn apply(&mut self, body: &Body) -> anyhow::Result<Effect> {
        let mut w = self.world.clone();
        let effect = match body {
            Body::AddLight(a) => {
                let id = a.id.unwrap_or_else(|| w.next_light_id());
                if w.lights.iter().any(|l| l.id == id) {
                    anyhow::bail!("light {id} already exists");
                }
                w.lights.push(LightSource::new(id, a.x, a.y, a.power)?);
                Effect::Mutated
            }
            Body::MoveLight(m) => {
                let l = w.light_mut(m.id).ok_or_else(|| anyhow::anyhow!("no light {}", m.id))?;
                l.x = m.x;
                l.y = m.y;
                l.validate()?;
                Effect::Mutated
            }
            Body::RemoveLight(e) => {
                let before = w.lights.len();
                w.lights.retain(|l| l.id != e.id);
                if w.lights.len() == before {
                    anyhow::bail!("no light {}", e.id);
                }
                Effect::Mutated
            }
            Body::SetArchetype(s) => {
                let v = w.vehicle_mut(s.id).ok_or_else(|| anyhow::anyhow!("no vehicle {}", s.id))?;
                v.archetype = s.archetype;
                v.custom_motors = None;
                Effect::Mutated
            }
            Body::SetMode(s) => {
                let v = w.vehicle_mut(s.id).ok_or_else(|| anyhow::anyhow!("no vehicle {}", s.id))?;
                v.mode = s.mode;
                Effect::Mutated
            }
            Body::SetFormula(s) => {
                let v = w.vehicle_mut(s.id).ok_or_else(|| anyhow::anyhow!("no vehicle {}", s.id))?;
                let observable = motor_from_formula(&s.formula)?;
                let (left, right) = v.motor_observables();
                v.custom_motors = Some(match s.motor {
                    Motor::Left => CustomMotors { left: observable, right },
                    Motor::Right => CustomMotors { left, right: observable },
                });
                Effect::Mutated
            }
            Body::Pause => {
                self.paused = true;
                Effect::Unchanged
            }
            Body::Resume => {
                self.paused = false;
                Effect::Unchanged
            }
            Body::StepOnce => {
                w = w.step(self.dt)?.0;
                Effect::Stepped
            }
            Body::Reset => {
                w = self.initial.clone();
                Effect::Mutated
            }
            other => anyhow::bail!("`{}` is not a client command", other.kind()),
        };
        w.validate()?;
        self.world = w;
        Ok(effect)
    }

    /// Full state with telemetry computed from the current world.
    pub fn snapshot(&self) -> anyhow::Result<Snapshot> {
        let w = &self.world;
        let vehicles = w
            .vehicles
            .iter()
            .map(|v| {
                let t = w.telemetry(v)?;
                Ok(VehicleState {
                    id: v.id,
                    x: v.x,
                    y: v.y,
                    heading: v.heading,
                    v_l: t.speeds.left,
                    v_r: t.speeds.right,
                    mu_l: t.reading.left,
                    mu_r: t.reading.right,
                    archetype: v.archetype,
                    mode: v.mode,
                    decision: t.decision,
                })
            })
            .collect::<anyhow::Result<Vec<_>>>()?;
        let lights = w.lights.iter().map(|l| LightState { id: l.id, x: l.x, y: l.y, power: l.power }).collect();
        Ok(Snapshot { time: w.time, vehicles, lights })
    }
}
