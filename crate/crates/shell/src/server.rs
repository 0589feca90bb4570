//! Live session endpoint at `GET /ws`.
//!
//! One task owns the [`Session`]. Connections forward decoded commands to it
//! through an ordered queue and receive snapshots from a broadcast channel.
//! Snapshots are serialized once, so every client gets identical bytes.

use std::sync::{Arc, Mutex};
use std::time::Duration;

use axum::extract::ws::{Message, WebSocket, WebSocketUpgrade};
use axum::extract::State;
use axum::response::IntoResponse;
use axum::routing::get;
use axum::Router;
use futures::{SinkExt, StreamExt};
use tokio::net::TcpListener;
use tokio::sync::{broadcast, mpsc};
use tracing::{debug, info, warn};

use crate::protocol::{salvage_seq, AckPayload, Body, ErrorPayload, SessionMessage};
use crate::session::{Effect, Session};

pub const DEFAULT_CADENCE_HZ: f64 = 50.0;

#[derive(Debug, Clone, Copy)]
pub struct ServeOptions {
    /// Simulation steps (and snapshots) per wall-clock second while running.
    pub cadence_hz: f64,
    pub start_paused: bool,
}

impl Default for ServeOptions {
    fn default() -> Self {
        Self { cadence_hz: DEFAULT_CADENCE_HZ, start_paused: false }
    }
}

type Frame = (u64, Arc<str>);

struct Command {
    seq: u64,
    body: Body,
    reply: mpsc::UnboundedSender<String>,
}

#[derive(Clone)]
struct Shared {
    commands: mpsc::Sender<Command>,
    snapshots: broadcast::Sender<Frame>,
    latest: Arc<Mutex<Frame>>,
}

/// Serves the session on `listener` until the task is dropped.
pub async fn serve_on(listener: TcpListener, mut session: Session, opts: ServeOptions) -> std::io::Result<()> {
    if !(opts.cadence_hz > 0.0 && opts.cadence_hz.is_finite()) {
        return Err(std::io::Error::new(std::io::ErrorKind::InvalidInput, "cadence must be positive"));
    }
    if opts.start_paused {
        session.apply(&Body::Pause).expect("pause always applies");
    }
    let first = encode_snapshot(&session, 1).map_err(std::io::Error::other)?;
    let (commands, queue) = mpsc::channel(256);
    let (snapshots, _) = broadcast::channel(1024);
    let shared = Shared { commands, snapshots: snapshots.clone(), latest: Arc::new(Mutex::new((1, first.into()))) };

    let period = Duration::from_secs_f64(1.0 / opts.cadence_hz);
    tokio::spawn(run_loop(session, queue, snapshots, shared.latest.clone(), period));

    let app = Router::new().route("/ws", get(upgrade)).with_state(shared);
    info!(addr = ?listener.local_addr()?, "session endpoint listening");
    axum::serve(listener, app).await
}

fn encode_snapshot(session: &Session, seq: u64) -> anyhow::Result<String> {
    Ok(SessionMessage::new(seq, Body::Snapshot(session.snapshot()?)).to_json())
}

/// Exits once every command sender (server and connections) is gone.
async fn run_loop(
    mut session: Session,
    mut queue: mpsc::Receiver<Command>,
    snapshots: broadcast::Sender<Frame>,
    latest: Arc<Mutex<Frame>>,
    period: Duration,
) {
    let mut seq = latest.lock().unwrap().0;
    let mut ticks = tokio::time::interval(period);
    ticks.set_missed_tick_behavior(tokio::time::MissedTickBehavior::Delay);

    let publish = |session: &Session, seq: &mut u64| match encode_snapshot(session, *seq + 1) {
        Ok(text) => {
            *seq += 1;
            let frame: Frame = (*seq, text.into());
            *latest.lock().unwrap() = frame.clone();
            let _ = snapshots.send(frame);
        }
        Err(e) => warn!("snapshot failed: {e:#}"),
    };

    loop {
        tokio::select! {
            biased;
            cmd = queue.recv() => {
                let Some(cmd) = cmd else { break };
                let reply = match session.apply(&cmd.body) {
                    Ok(effect) => {
                        let emit = effect == Effect::Stepped
                            || (effect == Effect::Mutated && (session.is_paused() || matches!(cmd.body, Body::Reset)));
                        if emit {
                            publish(&session, &mut seq);
                        }
                        SessionMessage::new(cmd.seq, Body::Ack(AckPayload { snapshot_seq: seq }))
                    }
                    Err(e) => SessionMessage::new(cmd.seq, Body::Error(ErrorPayload { message: format!("{e:#}") })),
                };
                let _ = cmd.reply.send(reply.to_json());
            }
            _ = ticks.tick(), if !session.is_paused() => {
                match session.step() {
                    Ok(()) => publish(&session, &mut seq),
                    Err(e) => {
                        warn!("step failed, pausing: {e:#}");
                        let _ = session.apply(&Body::Pause);
                    }
                }
            }
        }
    }
}

async fn upgrade(ws: WebSocketUpgrade, State(shared): State<Shared>) -> impl IntoResponse {
    ws.on_upgrade(move |socket| connection(socket, shared))
}

async fn connection(socket: WebSocket, shared: Shared) {
    let (mut sink, mut stream) = socket.split();
    let (reply_tx, mut replies) = mpsc::unbounded_channel::<String>();
    let mut snapshots = shared.snapshots.subscribe();
    let latest = shared.latest.lock().unwrap().clone();

    let writer = tokio::spawn(async move {
        let mut sent = latest.0;
        if sink.send(Message::Text(latest.1.to_string())).await.is_err() {
            return;
        }
        loop {
            let text = tokio::select! {
                r = replies.recv() => match r {
                    Some(t) => t,
                    None => break,
                },
                s = snapshots.recv() => match s {
                    Ok((seq, text)) if seq > sent => {
                        sent = seq;
                        text.to_string()
                    }
                    Ok(_) => continue,
                    Err(broadcast::error::RecvError::Lagged(n)) => {
                        debug!("client lagged by {n} snapshots");
                        continue;
                    }
                    Err(broadcast::error::RecvError::Closed) => break,
                },
            };
            if sink.send(Message::Text(text)).await.is_err() {
                break;
            }
        }
    });

    while let Some(Ok(msg)) = stream.next().await {
        let text = match msg {
            Message::Text(t) => t,
            Message::Close(_) => break,
            _ => continue,
        };
        match SessionMessage::from_json(&text) {
            Ok(m) if m.body.is_client() => {
                let cmd = Command { seq: m.seq, body: m.body, reply: reply_tx.clone() };
                if shared.commands.send(cmd).await.is_err() {
                    break;
                }
            }
            Ok(m) => reject(&reply_tx, m.seq, format!("`{}` is not a client command", m.body.kind())),
            Err(e) => reject(&reply_tx, salvage_seq(&text), e.to_string()),
        }
    }
    drop(reply_tx);
    writer.abort();
}

fn reject(reply: &mpsc::UnboundedSender<String>, seq: u64, message: String) {
    let _ = reply.send(SessionMessage::new(seq, Body::Error(ErrorPayload { message })).to_json());
}
