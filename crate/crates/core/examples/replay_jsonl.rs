//! Replay a JSONL event stream into per-window feature rows, pausing
//! half-way through to snapshot the state and resume from it.

use std::io::Cursor;

use egonet::commands::{feature_record, features_header};
use egonet::ingest::{read_events, replay, sort_rows, Replayer};
use egonet::{snapshot, RunConfig};

const STREAM: &str = r#"
{"ego":"ana","ts":1000,"type":"call","counterpart":"bo"}
{"ego":"ana","ts":5000,"type":"bt","counterpart":"bo","rssi":-50,"device_class":"personal_mobile"}
{"ego":"ana","ts":9000,"type":"wfd","counterpart":"home-tv","rssi":-60,"device_class":"smart_tv"}
{"ego":"ana","ts":30000,"type":"gps","lat":45.4642,"lon":9.19}
{"ego":"cy","ts":2000,"type":"osn_comment","counterpart":"dan"}
{"ego":"ana","ts":65000,"type":"sms","counterpart":"eve"}
{"ego":"cy","ts":70000,"type":"osn_reaction","counterpart":"dan","unknown_field":"ignored"}
{"ego":"ana","ts":125000,"type":"call","counterpart":"bo"}
{"ego":"ana","ts":130000,"type":"gps","lat":45.46421,"lon":9.19002}
"#;

fn main() -> egonet::Result<()> {
    let events = read_events(Cursor::new(STREAM))?;
    let config = RunConfig::default();

    let straight = replay(&events, &config)?;
    println!("{}", features_header(&config).join(","));
    for row in &straight.rows {
        println!("{}", feature_record(row).join(","));
    }
    println!("{:?}", straight.stats);

    // same stream, split across a snapshot
    let (head, tail) = events.split_at(events.len() / 2);
    let mut state = Replayer::new(config)?;
    let mut rows = state.process(head)?;
    let saved = snapshot::to_json(&state);
    println!("snapshot after {} events: {} bytes", head.len(), saved.len());
    let mut resumed = snapshot::from_json(&saved)?;
    rows.extend(resumed.process(tail)?);
    rows.extend(resumed.finish()?);
    sort_rows(&mut rows);
    println!("resumed replay identical: {}", rows == straight.rows);
    Ok(())
}
