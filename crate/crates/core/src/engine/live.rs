//! Button-driven live mode.
//!
//! A press latches the chord for the moisture current at that instant; the
//! chord holds until release while the timbre keeps following the sensor.
//! Timbre targets are taken at block boundaries and ramped linearly across
//! the block.

use std::collections::VecDeque;
use std::sync::mpsc::{self, Receiver, SyncSender, TryRecvError};

use crate::mapping::{normalize_raw, timbre_for_moisture, CalibrationProfile, MoistureValue};
use crate::sensor_io::{validate_events, EventKind, EventValidator, InteractionEvent};
use crate::{Error, Result};

use super::render::{Engine, Render, RenderStats, StereoBuffer};
use super::voice::ChordNote;
use super::SonifierConfig;

/// Moisture assumed before the first sensor event.
pub const DEFAULT_INITIAL_MOISTURE: f64 = 0.5;

/// Bounded queue from an event producer to a [`LiveRenderer`].
pub fn event_channel(
    capacity: usize,
) -> (SyncSender<InteractionEvent>, Receiver<InteractionEvent>) {
    mpsc::sync_channel(capacity)
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum QueueStatus {
    Open,
    /// The producer hung up; no more events will arrive.
    Closed,
}

/// Block-pull renderer for live mode.
#[derive(Debug)]
pub struct LiveRenderer {
    engine: Engine,
    cal: CalibrationProfile,
    pos: u64,
    moisture: MoistureValue,
    notes: Vec<ChordNote>,
    k_prev: Option<f64>,
    pending: VecDeque<(u64, InteractionEvent)>,
    validator: EventValidator,
    stats: RenderStats,
}

impl LiveRenderer {
    pub fn new(engine: Engine, cal: CalibrationProfile) -> Self {
        LiveRenderer {
            engine,
            cal,
            pos: 0,
            moisture: MoistureValue::new(DEFAULT_INITIAL_MOISTURE).expect("constant in range"),
            notes: Vec::new(),
            k_prev: None,
            pending: VecDeque::new(),
            validator: EventValidator::default(),
            stats: RenderStats::default(),
        }
    }

    pub fn with_initial_moisture(mut self, m: MoistureValue) -> Self {
        self.moisture = m;
        self
    }

    pub fn config(&self) -> &SonifierConfig {
        self.engine.config()
    }

    /// Next frame to be rendered.
    pub fn position(&self) -> u64 {
        self.pos
    }

    pub fn stats(&self) -> &RenderStats {
        &self.stats
    }

    /// True while a press has not been released.
    pub fn is_held(&self) -> bool {
        self.validator.is_held()
    }

    /// Nothing sounding and nothing queued.
    pub fn is_idle(&self) -> bool {
        self.notes.is_empty() && self.pending.is_empty()
    }

    fn frame_of(&self, t_ms: u64) -> u64 {
        (t_ms as f64 * self.engine.config().sample_rate_f64() / 1000.0).round() as u64
    }

    /// Queues an event. Events must arrive in time order and alternate
    /// press/release. Events timestamped before the current position take
    /// effect at the start of the next block.
    pub fn push(&mut self, ev: InteractionEvent) -> Result<()> {
        self.validator.check(&ev).map_err(Error::InvalidArgument)?;
        let frame = self.frame_of(ev.t_ms);
        self.pending.push_back((frame, ev));
        Ok(())
    }

    /// Pulls everything currently in the queue without blocking.
    pub fn drain(&mut self, rx: &Receiver<InteractionEvent>) -> Result<QueueStatus> {
        loop {
            match rx.try_recv() {
                Ok(ev) => self.push(ev)?,
                Err(TryRecvError::Empty) => return Ok(QueueStatus::Open),
                Err(TryRecvError::Disconnected) => return Ok(QueueStatus::Closed),
            }
        }
    }

    /// Releases a held chord at the current position.
    pub fn release_held(&mut self) -> Result<()> {
        if self.is_held() {
            let t_ms =
                (self.pos as f64 * 1000.0 / self.engine.config().sample_rate_f64()).ceil() as u64;
            let t_ms = t_ms.max(self.pending.back().map_or(0, |p| p.1.t_ms));
            self.push(InteractionEvent {
                t_ms,
                kind: EventKind::Release,
            })?;
        }
        Ok(())
    }

    fn apply_due(&mut self, frame: u64) -> Result<()> {
        while let Some(&(at, ev)) = self.pending.front() {
            if at > frame {
                break;
            }
            self.pending.pop_front();
            match ev.kind {
                EventKind::Sensor(raw) => {
                    let n = normalize_raw(raw, &self.cal);
                    if n.clamped {
                        self.stats.clamped_readings += 1;
                    }
                    self.moisture = n.moisture;
                }
                EventKind::Press => {
                    let note = self.engine.note(self.moisture, false)?;
                    self.notes.push(note);
                    self.stats.impulses += 1;
                    self.stats.onsets.push(frame);
                }
                EventKind::Release => {
                    let env = self.engine.config().envelope;
                    for n in self.notes.iter_mut().filter(|n| n.is_held()) {
                        n.release(&env);
                    }
                }
            }
        }
        Ok(())
    }

    /// Renders `out.len()` frames.
    pub fn render_block(&mut self, out: &mut [[f64; 2]]) -> Result<()> {
        let n = out.len();
        if n == 0 {
            return Ok(());
        }
        self.apply_due(self.pos)?;
        let k_target = timbre_for_moisture(self.moisture).get();
        let k_from = self.k_prev.unwrap_or(k_target);
        let env = self.engine.config().envelope;
        for (j, slot) in out.iter_mut().enumerate() {
            if j > 0 {
                self.apply_due(self.pos + j as u64)?;
            }
            let k = if k_from == k_target {
                k_target
            } else {
                k_from + (k_target - k_from) * (j + 1) as f64 / n as f64
            };
            let mut raw = [0.0; 2];
            for note in &mut self.notes {
                let f = note.tick(&self.engine.tables, k, &env);
                raw[0] += f[0];
                raw[1] += f[1];
            }
            *slot = self.engine.finish_frame(raw, &mut self.stats.clipped);
        }
        self.k_prev = Some(k_target);
        self.pos += n as u64;
        self.notes.retain(|note| !note.is_finished(&env));
        Ok(())
    }
}

impl Engine {
    /// Offline live-mode render of a complete event list.
    ///
    /// The buffer ends at the last event or at the end of the last decay,
    /// whichever is later. A press left open at the end of the list is
    /// released at the last event time, or at the end of its attack if that
    /// is later.
    pub fn render_live(
        &self,
        events: &[InteractionEvent],
        cal: &CalibrationProfile,
    ) -> Result<Render> {
        validate_events(events)?;
        let config = self.config();
        let mut events = events.to_vec();
        if let Some(press) = open_press(&events) {
            let attack_end = press + (config.envelope.attack_s * 1000.0).ceil() as u64;
            let last = events.last().map_or(0, |e| e.t_ms);
            events.push(InteractionEvent {
                t_ms: last.max(attack_end),
                kind: EventKind::Release,
            });
        }

        let mut live = LiveRenderer::new(self.clone(), cal.clone());
        for ev in &events {
            live.push(*ev)?;
        }
        let decay = config.samples_for(config.envelope.decay_s);
        let end = events
            .iter()
            .map(|ev| {
                let f = live.frame_of(ev.t_ms);
                if ev.kind == EventKind::Release {
                    f + decay
                } else {
                    f
                }
            })
            .max()
            .unwrap_or(0) as usize;

        let mut frames = vec![[0.0; 2]; end];
        for block in frames.chunks_mut(config.block_size) {
            live.render_block(block)?;
        }
        Ok(Render {
            buffer: StereoBuffer {
                sample_rate: config.sample_rate,
                frames,
            },
            stats: live.stats,
        })
    }
}

fn open_press(events: &[InteractionEvent]) -> Option<u64> {
    let mut open = None;
    for ev in events {
        match ev.kind {
            EventKind::Press => open = Some(ev.t_ms),
            EventKind::Release => open = None,
            EventKind::Sensor(_) => {}
        }
    }
    open
}

pub fn render_live(
    events: &[InteractionEvent],
    cal: &CalibrationProfile,
    config: &SonifierConfig,
) -> Result<Render> {
    Engine::new(config.clone())?.render_live(events, cal)
}
