#![allow(dead_code)]

use std::collections::BTreeMap;
use std::net::SocketAddr;
use std::time::Duration;

use eigenlogic::braitenberg::{Archetype, ControllerMode, LightSource, Vehicle};
use eigenlogic::fuzzy::Decision;
use eigenlogic::world::{Bounds, World};
use eigenlogic_shell::protocol::*;
use eigenlogic_shell::server::{serve_on, ServeOptions};
use eigenlogic_shell::session::Session;
use futures::{SinkExt, StreamExt};
use proptest::prelude::*;
use tokio::net::TcpStream;
use tokio_tungstenite::tungstenite::Message;
use tokio_tungstenite::{MaybeTlsStream, WebSocketStream};

fn finite() -> impl Strategy<Value = f64> {
    prop_oneof![-1e6f64..1e6, Just(0.0), Just(-0.0), Just(1e-300), Just(f64::MAX)]
}

fn archetype() -> impl Strategy<Value = Archetype> {
    prop::sample::select(Archetype::ALL.to_vec())
}

fn mode() -> impl Strategy<Value = ControllerMode> {
    prop::sample::select(ControllerMode::ALL.to_vec())
}

fn vehicle_state() -> impl Strategy<Value = VehicleState> {
    (
        any::<u32>(),
        (finite(), finite(), finite()),
        (finite(), finite(), finite(), finite()),
        archetype(),
        mode(),
        prop::sample::select(Decision::ALL.to_vec()),
    )
        .prop_map(|(id, (x, y, heading), (v_l, v_r, mu_l, mu_r), archetype, mode, decision)| VehicleState {
            id,
            x,
            y,
            heading,
            v_l,
            v_r,
            mu_l,
            mu_r,
            archetype,
            mode,
            decision,
        })
}

pub fn body() -> impl Strategy<Value = Body> {
    prop_oneof![
        (prop::option::of(any::<u32>()), finite(), finite(), finite())
            .prop_map(|(id, x, y, power)| Body::AddLight(AddLight { id, x, y, power })),
        (any::<u32>(), finite(), finite()).prop_map(|(id, x, y)| Body::MoveLight(MoveLight { id, x, y })),
        any::<u32>().prop_map(|id| Body::RemoveLight(EntityId { id })),
        (any::<u32>(), archetype()).prop_map(|(id, archetype)| Body::SetArchetype(SetArchetype { id, archetype })),
        (any::<u32>(), mode()).prop_map(|(id, mode)| Body::SetMode(SetMode { id, mode })),
        (any::<u32>(), any::<bool>(), ".*").prop_map(|(id, left, formula)| Body::SetFormula(SetFormula {
            id,
            motor: if left { Motor::Left } else { Motor::Right },
            formula,
        })),
        Just(Body::Pause),
        Just(Body::Resume),
        Just(Body::StepOnce),
        Just(Body::Reset),
        (
            finite(),
            prop::collection::vec(vehicle_state(), 0..4),
            prop::collection::vec(
                (any::<u32>(), finite(), finite(), finite()).prop_map(|(id, x, y, power)| LightState {
                    id,
                    x,
                    y,
                    power
                }),
                0..4
            )
        )
            .prop_map(|(time, vehicles, lights)| Body::Snapshot(Snapshot { time, vehicles, lights })),
        ".*".prop_map(|message| Body::Error(ErrorPayload { message })),
        any::<u64>().prop_map(|snapshot_seq| Body::Ack(AckPayload { snapshot_seq })),
    ]
}

pub fn message() -> impl Strategy<Value = SessionMessage> {
    (any::<u64>(), body()).prop_map(|(seq, body)| SessionMessage::new(seq, body))
}

/// One fear vehicle at the origin facing +x with a light ahead-right.
pub fn fear_world() -> World {
    World::new(
        Bounds::new(-5.0, -5.0, 5.0, 5.0).unwrap(),
        vec![LightSource::new(0, 1.0, -0.6, 1.0).unwrap()],
        vec![Vehicle::new(0, 0.0, 0.0, 0.0, Archetype::Fear, ControllerMode::Fuzzy)],
    )
    .unwrap()
}

pub async fn start(world: World, opts: ServeOptions) -> (SocketAddr, tokio::task::JoinHandle<std::io::Result<()>>) {
    let listener = tokio::net::TcpListener::bind("127.0.0.1:0").await.unwrap();
    let addr = listener.local_addr().unwrap();
    let task = tokio::spawn(serve_on(listener, Session::new(world, 0.02), opts));
    (addr, task)
}

pub struct Client {
    ws: WebSocketStream<MaybeTlsStream<TcpStream>>,
    next_seq: u64,
}

impl Client {
    pub async fn connect(addr: SocketAddr) -> Self {
        let (ws, _) = tokio_tungstenite::connect_async(format!("ws://{addr}/ws")).await.unwrap();
        Self { ws, next_seq: 1 }
    }

    pub async fn send_raw(&mut self, text: &str) {
        self.ws.send(Message::Text(text.to_string())).await.unwrap();
    }

    /// Sends `body` with the next sequence number and returns that number.
    pub async fn send(&mut self, body: Body) -> u64 {
        let seq = self.next_seq;
        self.next_seq += 1;
        self.send_raw(&SessionMessage::new(seq, body).to_json()).await;
        seq
    }

    /// Next text frame, raw and decoded, or `None` after `wait` of silence.
    pub async fn recv(&mut self, wait: Duration) -> Option<(String, SessionMessage)> {
        loop {
            let frame = tokio::time::timeout(wait, self.ws.next()).await.ok()??.unwrap();
            if let Message::Text(text) = frame {
                let msg = SessionMessage::from_json(&text).unwrap();
                return Some((text, msg));
            }
        }
    }

    /// Reads until the reply to `seq` arrives, collecting snapshots on the way.
    pub async fn reply(&mut self, seq: u64, snapshots: &mut Vec<(u64, Snapshot)>) -> Body {
        loop {
            let (_, msg) = self.recv(Duration::from_secs(5)).await.expect("reply timed out");
            match msg.body {
                Body::Snapshot(s) => snapshots.push((msg.seq, s)),
                body if msg.seq == seq => return body,
                other => panic!("unexpected {other:?}"),
            }
        }
    }

    /// Reads snapshots until one with sequence number `seq` has been seen.
    pub async fn until_snapshot(&mut self, seq: u64) -> Snapshot {
        loop {
            let (_, msg) = self.recv(Duration::from_secs(5)).await.expect("snapshot timed out");
            if let Body::Snapshot(s) = msg.body {
                if msg.seq == seq {
                    return s;
                }
                assert!(msg.seq < seq, "skipped past snapshot {seq}");
            }
        }
    }

    /// Raw text of the next `count` snapshots, keyed by sequence number.
    pub async fn snapshots(&mut self, count: usize) -> BTreeMap<u64, String> {
        let mut frames = BTreeMap::new();
        while frames.len() < count {
            let (raw, m) = self.recv(Duration::from_secs(5)).await.expect("snapshot stream stalled");
            if matches!(m.body, Body::Snapshot(_)) {
                frames.insert(m.seq, raw);
            }
        }
        frames
    }
}
