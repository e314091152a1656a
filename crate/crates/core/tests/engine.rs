mod common;

use common::*;
use wavesoil::dsp::{gen_saw_table, gen_sine_table, verify_bandlimit, OscillatorState};
use wavesoil::engine::{
    event_channel, quantize_pcm, render_chord_held, render_chord_impulse, render_historical,
    render_live, Engine, LiveRenderer, QueueStatus, SonifierConfig,
};
use wavesoil::mapping::{normalize_raw, CalibrationProfile, MoistureValue};
use wavesoil::sensor_io::{parse_event_script, EventKind, InteractionEvent, SensorSample};
use wavesoil::Error;

const FS: f64 = 48_000.0;

fn m(x: f64) -> MoistureValue {
    MoistureValue::new(x).unwrap()
}

fn cfg() -> SonifierConfig {
    SonifierConfig::default()
}

#[test]
fn osc_dominant_peak_at_440() {
    let sine = gen_sine_table(512).unwrap();
    let mut osc = OscillatorState::new(440.0, FS, 512).unwrap();
    let out: Vec<f64> = (0..48_000)
        .map(|_| wavesoil::dsp::osc_tick(&mut osc, &sine, &sine, 0.0).unwrap())
        .collect();
    let (bin, bin_hz) = argmax_bin(&out, FS);
    assert!((bin as f64 * bin_hz - 440.0).abs() <= bin_hz);
}

#[test]
fn crossfade_matches_dual_render() {
    let sine = gen_sine_table(512).unwrap();
    let saw = gen_saw_table(512, 17).unwrap();
    for k in [0.0, 0.25, 0.5, 0.75, 1.0] {
        let mut mix = OscillatorState::new(587.33, FS, 512).unwrap();
        let mut only_a = mix;
        let mut only_b = mix;
        for _ in 0..48_000 {
            let got = wavesoil::dsp::osc_tick(&mut mix, &sine, &saw, k).unwrap();
            let a = wavesoil::dsp::osc_tick(&mut only_a, &sine, &sine, 0.0).unwrap();
            let b = wavesoil::dsp::osc_tick(&mut only_b, &saw, &saw, 0.0).unwrap();
            assert!((got - (a * (1.0 - k) + b * k)).abs() < 1e-6);
        }
    }
}

#[test]
fn dry_impulse_has_high_triad_and_full_saw_series() {
    let r = render_chord_impulse(MoistureValue::DRY, &cfg(), 1.0).unwrap();
    let mono = r.buffer.mono();
    for want in [392.00, 493.88, 587.33] {
        let got = peak_near(&mono, FS, want, 8.0);
        assert!((got - want).abs() < 0.5, "{got} vs {want}");
    }
    // partial 17 of the fifth is present, partial 18 is not
    let report = verify_bandlimit(&mono, 587.33, 17, FS).unwrap();
    assert!(report.pass, "{report:?}");
    assert!(
        (report.highest_partial_hz - 9984.61).abs() < report.bin_hz,
        "{report:?}"
    );
    assert_eq!(r.stats.clipped, 0);
}

#[test]
fn wet_impulse_is_pure_sine_triad() {
    let r = render_chord_impulse(MoistureValue::WET, &cfg(), 1.0).unwrap();
    let mono = r.buffer.mono();
    let fundamentals = [196.00, 246.94, 293.66];
    for want in fundamentals {
        let got = peak_near(&mono, FS, want, 8.0);
        assert!((got - want).abs() < 0.5, "{got} vs {want}");
    }
    let reference = fundamentals
        .iter()
        .map(|&f| tone_amplitude(&mono, FS, f))
        .fold(0.0, f64::max);
    let chord = wavesoil::mapping::chord_for_moisture(MoistureValue::WET);
    for f0 in chord.freqs() {
        for h in 2..=17 {
            let level = tone_amplitude(&mono, FS, f0 * h as f64) / reference;
            assert!(20.0 * level.log10() < -40.0, "harmonic {h} of {f0}");
        }
    }
}

#[test]
fn channels_are_balanced() {
    for x in [0.0, 0.3, 0.5, 0.8, 1.0] {
        let r = render_chord_impulse(m(x), &cfg(), 1.0).unwrap();
        let (l, rr) = (rms(&r.buffer.channel(0)), rms(&r.buffer.channel(1)));
        let diff = 20.0 * (l / rr).log10();
        assert!(diff.abs() < 1.0, "m={x}: {diff} dB");
    }
}

#[test]
fn impulse_duration_must_cover_envelope() {
    assert!(matches!(
        render_chord_impulse(MoistureValue::DRY, &cfg(), 0.5),
        Err(Error::InvalidArgument(_))
    ));
    let r = render_chord_impulse(MoistureValue::DRY, &cfg(), 1.5).unwrap();
    assert_eq!(r.buffer.len(), 72_000);
    assert!(r.buffer.frames[48_000..].iter().all(|f| *f == [0.0, 0.0]));
}

#[test]
fn invalid_config_is_rejected() {
    let bad = SonifierConfig {
        n_partials: 60,
        ..cfg()
    };
    assert!(matches!(
        render_chord_impulse(MoistureValue::DRY, &bad, 1.0),
        Err(Error::InvalidConfig(_))
    ));
}

#[test]
fn bandlimit_holds_across_moisture_range() {
    for i in 0..=10 {
        let r = render_chord_impulse(m(i as f64 / 10.0), &cfg(), 1.0).unwrap();
        let report = verify_bandlimit(&r.buffer.mono(), 587.33, 17, FS).unwrap();
        assert!(report.pass, "m={}: {report:?}", i as f64 / 10.0);
    }
}

fn samples(raws: &[u16]) -> Vec<SensorSample> {
    raws.iter()
        .enumerate()
        .map(|(i, &raw)| SensorSample {
            t_ms: i as u64 * 1000,
            raw,
        })
        .collect()
}

#[test]
fn single_sample_history_is_one_impulse() {
    let cal = CalibrationProfile::new(200, 800).unwrap();
    let r = render_historical(&samples(&[200]), &cal, &cfg()).unwrap();
    assert_eq!(r.buffer.len(), 48_000);
    let single = render_chord_impulse(MoistureValue::DRY, &cfg(), 1.0).unwrap();
    assert_eq!(r.buffer, single.buffer);
}

#[test]
fn history_onsets_and_length() {
    let cal = CalibrationProfile::new(0, 1023).unwrap();
    let raws: Vec<u16> = (0..108).map(|i| 1000 - 7 * i).collect();
    let r = render_historical(&samples(&raws), &cal, &cfg()).unwrap();
    assert_eq!(r.stats.impulses, 108);
    assert_eq!(r.stats.onsets.len(), 108);
    for (i, &o) in r.stats.onsets.iter().enumerate() {
        assert_eq!(o, i as u64 * 48_000);
    }
    assert!((r.buffer.duration_s() - 108.0).abs() < 1e-9);
    assert_eq!(r.stats.clipped, 0);
}

#[test]
fn drying_soil_rises_in_pitch() {
    // readings fall (soil dries) so each impulse should be higher than the last
    let cal = CalibrationProfile::new(100, 900).unwrap();
    let raws: Vec<u16> = (0..6).map(|i| 850 - 140 * i).collect();
    let r = render_historical(&samples(&raws), &cal, &cfg()).unwrap();
    let mono = r.buffer.mono();
    let mut last = 0.0;
    for (i, &raw) in raws.iter().enumerate() {
        let chord = wavesoil::mapping::chord_for_moisture(normalize_raw(raw, &cal).moisture);
        let seg = &mono[i * 48_000..(i + 1) * 48_000];
        let f = peak_near(seg, FS, chord.root_hz, 10.0);
        assert!((f - chord.root_hz).abs() < 0.5);
        assert!(f > last, "impulse {i}: {f} <= {last}");
        last = f;
    }
}

#[test]
fn empty_history_rejected() {
    let cal = CalibrationProfile::default();
    assert!(matches!(
        render_historical(&[], &cal, &cfg()),
        Err(Error::InvalidArgument(_))
    ));
}

#[test]
fn out_of_calibration_readings_are_counted() {
    let cal = CalibrationProfile::new(200, 800).unwrap();
    let r = render_historical(&samples(&[100, 500, 900]), &cal, &cfg()).unwrap();
    assert_eq!(r.stats.clamped_readings, 2);
}

fn script(text: &str) -> Vec<InteractionEvent> {
    parse_event_script(text).unwrap()
}

#[test]
fn live_hold_without_sensor_change_equals_held_render() {
    let cal = CalibrationProfile::new(0, 1000).unwrap();
    let live = render_live(
        &script("0 sensor 300\n0 press\n2500 release\n"),
        &cal,
        &cfg(),
    )
    .unwrap();
    let held = render_chord_held(normalize_raw(300, &cal).moisture, &cfg(), 2.5).unwrap();
    assert_eq!(live.buffer.len(), held.buffer.len());
    for (a, b) in live.buffer.frames.iter().zip(&held.buffer.frames) {
        assert!((a[0] - b[0]).abs() < 1e-6 && (a[1] - b[1]).abs() < 1e-6);
    }
}

#[test]
fn live_latches_pitch_while_timbre_follows_sensor() {
    let cal = CalibrationProfile::new(0, 1000).unwrap();
    // m = 0.2 at press, 0.8 from t = 2 s
    let events = script("0 sensor 200\n0 press\n2000 sensor 800\n4000 release\n");
    let r = render_live(&events, &cal, &cfg()).unwrap();
    let mono = r.buffer.mono();
    let early = &mono[24_000..72_000];
    let late = &mono[120_000..168_000];
    assert_eq!(argmax_bin(early, FS).0, argmax_bin(late, FS).0);
    let (pe, pl) = (top_peaks(early, FS, 3), top_peaks(late, FS, 3));
    for (a, b) in pe.iter().zip(&pl) {
        assert!((a - b).abs() < 0.5, "{pe:?} vs {pl:?}");
    }
    let latched = wavesoil::mapping::chord_for_moisture(m(0.2));
    for (got, want) in pe.iter().zip(latched.freqs()) {
        assert!((got - want).abs() < 0.5);
    }
    assert!(centroid(late, FS) < centroid(early, FS));
}

#[test]
fn live_without_presses_is_silent() {
    let cal = CalibrationProfile::default();
    let r = render_live(&[], &cal, &cfg()).unwrap();
    assert!(r.buffer.is_empty());
    let r = render_live(&script("0 sensor 10\n1500 sensor 900\n"), &cal, &cfg()).unwrap();
    assert_eq!(r.buffer.len(), 72_000);
    assert!(r.buffer.frames.iter().all(|f| *f == [0.0, 0.0]));
}

#[test]
fn five_second_hold_length() {
    let cal = CalibrationProfile::default();
    let r = render_live(&script("0 press\n5000 release\n"), &cal, &cfg()).unwrap();
    assert!((r.buffer.duration_s() - 5.8).abs() < 1e-9);
}

#[test]
fn open_press_is_released_at_end() {
    let cal = CalibrationProfile::default();
    let r = render_live(&script("0 press\n3000 sensor 500\n"), &cal, &cfg()).unwrap();
    assert!((r.buffer.duration_s() - 3.8).abs() < 1e-9);
    let r = render_live(&script("0 press\n"), &cal, &cfg()).unwrap();
    assert!((r.buffer.duration_s() - 1.0).abs() < 1e-9);
}

#[test]
fn live_rejects_bad_ordering() {
    let cal = CalibrationProfile::default();
    let bad = [InteractionEvent {
        t_ms: 0,
        kind: EventKind::Release,
    }];
    assert!(matches!(
        render_live(&bad, &cal, &cfg()),
        Err(Error::InvalidArgument(_))
    ));
    let bad = [
        InteractionEvent {
            t_ms: 10,
            kind: EventKind::Press,
        },
        InteractionEvent {
            t_ms: 5,
            kind: EventKind::Release,
        },
    ];
    assert!(render_live(&bad, &cal, &cfg()).is_err());
}

#[test]
fn release_during_attack_has_no_click() {
    let cal = CalibrationProfile::default();
    let r = render_live(&script("0 press\n100 release\n"), &cal, &cfg()).unwrap();
    let mono = r.buffer.mono();
    let at = 4800;
    let jump = (mono[at] - mono[at - 1]).abs();
    let typical = mono[at - 50..at - 1]
        .windows(2)
        .map(|w| (w[1] - w[0]).abs())
        .fold(0.0, f64::max);
    assert!(jump <= typical * 1.5, "{jump} vs {typical}");
    assert!((r.buffer.duration_s() - 0.9).abs() < 1e-9);
}

#[test]
fn streaming_matches_offline() {
    let cal = CalibrationProfile::new(0, 1000).unwrap();
    let events =
        script("0 sensor 200\n0 press\n700 sensor 650\n1300 release\n1500 press\n1800 release\n");
    let config = cfg();
    let offline = render_live(&events, &cal, &config).unwrap();

    let (tx, rx) = event_channel(events.len());
    let producer = {
        let events = events.clone();
        std::thread::spawn(move || {
            for ev in events {
                tx.send(ev).unwrap();
            }
        })
    };
    producer
        .join()
        .unwrap_or_else(|_| panic!("producer panicked"));
    let engine = Engine::new(config.clone()).unwrap();
    let mut live = LiveRenderer::new(engine, cal);
    let mut frames = vec![[0.0; 2]; offline.buffer.len()];
    let mut status = QueueStatus::Open;
    for block in frames.chunks_mut(config.block_size) {
        if status == QueueStatus::Open {
            status = live.drain(&rx).unwrap();
        }
        live.render_block(block).unwrap();
    }
    assert_eq!(status, QueueStatus::Closed);
    assert_eq!(frames, offline.buffer.frames);
}

#[test]
fn consumer_never_blocks_on_empty_queue() {
    let (_tx, rx) = event_channel(1);
    let engine = Engine::new(cfg()).unwrap();
    let mut live = LiveRenderer::new(engine, CalibrationProfile::default());
    assert_eq!(live.drain(&rx).unwrap(), QueueStatus::Open);
    let mut block = vec![[1.0; 2]; 256];
    live.render_block(&mut block).unwrap();
    assert!(block.iter().all(|f| *f == [0.0, 0.0]));
    assert_eq!(live.position(), 256);
}

#[test]
fn renders_are_deterministic() {
    let cal = CalibrationProfile::new(150, 850).unwrap();
    let s = samples(&[150, 400, 600, 850, 300]);
    let a = render_historical(&s, &cal, &cfg()).unwrap();
    let b = render_historical(&s, &cal, &cfg()).unwrap();
    let qa = quantize_pcm(&a.buffer, 16).unwrap();
    let qb = quantize_pcm(&b.buffer, 16).unwrap();
    assert_eq!(qa, qb);
    assert_eq!(qa.clipped, 0);
}
