mod common;

use std::time::Duration;

use common::{fear_world, start, Client};
use eigenlogic_shell::protocol::*;
use eigenlogic_shell::server::ServeOptions;

const QUIET: Duration = Duration::from_millis(300);

#[tokio::test]
async fn connect_receives_latest_snapshot() {
    let (addr, server) = start(fear_world(), ServeOptions { start_paused: true, ..Default::default() }).await;
    let mut c = Client::connect(addr).await;
    let (_, first) = c.recv(Duration::from_secs(5)).await.unwrap();
    let Body::Snapshot(s) = first.body else { panic!("expected snapshot") };
    assert_eq!(first.seq, 1);
    assert_eq!(s.time, 0.0);
    assert_eq!(s.vehicles.len(), 1);
    assert_eq!(s.lights.len(), 1);
    assert!(c.recv(QUIET).await.is_none(), "paused session kept streaming");
    server.abort();
}

#[tokio::test]
async fn pause_then_step_once_advances_one_snapshot() {
    let (addr, server) = start(fear_world(), ServeOptions::default()).await;
    let mut c = Client::connect(addr).await;
    let mut seen = Vec::new();

    let seq = c.send(Body::Pause).await;
    let Body::Ack(ack) = c.reply(seq, &mut seen).await else { panic!("pause not acked") };
    let before = match seen.iter().find(|(n, _)| *n == ack.snapshot_seq) {
        Some((_, s)) => s.clone(),
        None => c.until_snapshot(ack.snapshot_seq).await,
    };
    assert!(c.recv(QUIET).await.is_none(), "snapshots continued after pause");

    let seq = c.send(Body::StepOnce).await;
    let mut seen = Vec::new();
    let Body::Ack(ack) = c.reply(seq, &mut seen).await else { panic!("step not acked") };
    if seen.is_empty() {
        seen.push((ack.snapshot_seq, c.until_snapshot(ack.snapshot_seq).await));
    }
    assert!(c.recv(QUIET).await.is_none(), "more than one snapshot after step_once");
    assert_eq!(seen.len(), 1);
    let (n, after) = &seen[0];
    assert_eq!(*n, ack.snapshot_seq);
    assert!((after.time - before.time - 0.02).abs() < 1e-12);
    server.abort();
}

#[tokio::test]
async fn running_session_streams_increasing_sequence() {
    let (addr, server) = start(fear_world(), ServeOptions { cadence_hz: 200.0, start_paused: false }).await;
    let mut c = Client::connect(addr).await;
    let mut last = (0, -1.0);
    for _ in 0..20 {
        let (_, m) = c.recv(Duration::from_secs(5)).await.unwrap();
        let Body::Snapshot(s) = m.body else { continue };
        assert!(m.seq > last.0 && s.time > last.1);
        last = (m.seq, s.time);
    }
    server.abort();
}

#[tokio::test]
async fn two_clients_see_identical_snapshots() {
    let (addr, server) = start(fear_world(), ServeOptions { cadence_hz: 200.0, start_paused: false }).await;
    let mut a = Client::connect(addr).await;
    let mut b = Client::connect(addr).await;
    let (fa, fb) = tokio::join!(a.snapshots(40), b.snapshots(40));
    let common: Vec<_> = fa.keys().filter(|k| fb.contains_key(k)).collect();
    assert!(common.len() >= 20, "only {} shared sequence numbers", common.len());
    for k in common {
        assert_eq!(fa[k], fb[k], "snapshot {k} differs");
    }
    server.abort();
}

#[tokio::test]
async fn malformed_frames_get_errors_and_connection_survives() {
    let (addr, server) = start(fear_world(), ServeOptions { start_paused: true, ..Default::default() }).await;
    let mut c = Client::connect(addr).await;
    c.recv(Duration::from_secs(5)).await.unwrap();
    let mut seen = Vec::new();

    c.send_raw("not json").await;
    let (_, m) = c.recv(Duration::from_secs(5)).await.unwrap();
    assert!(matches!(m.body, Body::Error(_)), "{m:?}");

    c.send_raw(r#"{"kind":"teleport","seq":41,"payload":{}}"#).await;
    let Body::Error(e) = c.reply(41, &mut seen).await else { panic!() };
    assert!(e.message.contains("teleport"));

    c.send_raw(r#"{"kind":"ack","seq":42,"payload":{"snapshot_seq":1}}"#).await;
    assert!(matches!(c.reply(42, &mut seen).await, Body::Error(_)));

    let seq = c.send(Body::MoveLight(MoveLight { id: 99, x: 0.0, y: 0.0 })).await;
    let Body::Error(e) = c.reply(seq, &mut seen).await else { panic!() };
    assert!(e.message.contains("99"));

    let seq = c.send(Body::SetFormula(SetFormula { id: 0, motor: Motor::Left, formula: "SL ^".into() })).await;
    assert!(matches!(c.reply(seq, &mut seen).await, Body::Error(_)));

    let seq = c.send(Body::StepOnce).await;
    assert!(matches!(c.reply(seq, &mut seen).await, Body::Ack(_)));
    assert!(seen.is_empty() || seen.len() == 1);
    server.abort();
}

#[tokio::test]
async fn moving_light_to_the_left_makes_fear_turn_right() {
    let (addr, server) = start(fear_world(), ServeOptions { start_paused: true, ..Default::default() }).await;
    let mut c = Client::connect(addr).await;
    let (_, first) = c.recv(Duration::from_secs(5)).await.unwrap();
    let Body::Snapshot(s) = first.body else { panic!() };
    assert!(s.vehicles[0].v_l < s.vehicles[0].v_r, "light starts on the right");

    let mut seen = Vec::new();
    let seq = c.send(Body::MoveLight(MoveLight { id: 0, x: 1.0, y: 0.6 })).await;
    let Body::Ack(ack) = c.reply(seq, &mut seen).await else { panic!() };
    let s = match seen.pop() {
        Some((_, s)) => s,
        None => c.until_snapshot(ack.snapshot_seq).await,
    };
    assert_eq!((s.lights[0].x, s.lights[0].y), (1.0, 0.6));
    assert!(s.vehicles[0].v_l > s.vehicles[0].v_r);
    assert!(s.vehicles[0].mu_l > s.vehicles[0].mu_r);

    let seq = c.send(Body::Resume).await;
    c.reply(seq, &mut seen).await;
    for _ in 0..3 {
        let (_, m) = c.recv(Duration::from_secs(5)).await.unwrap();
        if let Body::Snapshot(s) = m.body {
            assert!(s.vehicles[0].v_l > s.vehicles[0].v_r);
        }
    }
    server.abort();
}

#[tokio::test]
async fn edits_and_reset() {
    let (addr, server) = start(fear_world(), ServeOptions { start_paused: true, ..Default::default() }).await;
    let mut c = Client::connect(addr).await;
    c.recv(Duration::from_secs(5)).await.unwrap();
    let mut seen = Vec::new();

    for body in [
        Body::AddLight(AddLight { id: None, x: -1.0, y: 1.0, power: 0.5 }),
        Body::SetArchetype(SetArchetype { id: 0, archetype: eigenlogic::braitenberg::Archetype::Love }),
        Body::SetMode(SetMode { id: 0, mode: eigenlogic::braitenberg::ControllerMode::Trivalued }),
        Body::StepOnce,
        Body::SetFormula(SetFormula { id: 0, motor: Motor::Right, formula: "SL | SR".into() }),
    ] {
        let seq = c.send(body).await;
        assert!(matches!(c.reply(seq, &mut seen).await, Body::Ack(_)));
    }
    let seq = c.send(Body::Reset).await;
    let Body::Ack(ack) = c.reply(seq, &mut seen).await else { panic!() };
    let s = match seen.iter().find(|(n, _)| *n == ack.snapshot_seq) {
        Some((_, s)) => s.clone(),
        None => c.until_snapshot(ack.snapshot_seq).await,
    };
    assert_eq!(s.time, 0.0);
    assert_eq!(s.lights.len(), 1);
    assert_eq!(s.vehicles[0].archetype, eigenlogic::braitenberg::Archetype::Fear);
    server.abort();
}
