//! Versioned JSON snapshots of replay state.
//!
//! ```text
//! {"format": "egonet-snapshot", "version": 1, "state": { ...replayer... }}
//! ```
//!
//! `state` holds the run configuration and, per ego, the social counters,
//! device contact records, geo clusters, the three rankings and networks,
//! and any window still open. Loading validates every ranking and checks
//! that each stored network matches its ranking.

use std::io::Write;
use std::path::Path;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::ingest::Replayer;

pub const SNAPSHOT_FORMAT: &str = "egonet-snapshot";
pub const SNAPSHOT_VERSION: u32 = 1;

#[derive(Serialize)]
struct SnapshotOut<'a> {
    format: &'static str,
    version: u32,
    state: &'a Replayer,
}

#[derive(Deserialize)]
struct Header {
    format: String,
    version: u32,
}

#[derive(Deserialize)]
struct SnapshotIn {
    state: Replayer,
}

pub fn to_json(state: &Replayer) -> String {
    serde_json::to_string(&SnapshotOut {
        format: SNAPSHOT_FORMAT,
        version: SNAPSHOT_VERSION,
        state,
    })
    .expect("state serialises")
}

pub fn from_json(text: &str) -> Result<Replayer> {
    let header: Header = serde_json::from_str(text).map_err(|e| Error::Snapshot(format!("corrupt file: {e}")))?;
    if header.format != SNAPSHOT_FORMAT {
        return Err(Error::Snapshot(format!("unexpected format {:?}", header.format)));
    }
    if header.version != SNAPSHOT_VERSION {
        return Err(Error::Snapshot(format!(
            "version mismatch: file has {}, expected {SNAPSHOT_VERSION}",
            header.version
        )));
    }
    let snap: SnapshotIn = serde_json::from_str(text).map_err(|e| Error::Snapshot(format!("corrupt file: {e}")))?;
    let state = snap.state;
    state.config().validate()?;
    for (ego, st) in state.egos() {
        let e = st.engine();
        for (name, ego_state) in [
            ("social", e.social.ego()),
            ("proximity", e.proximity.ego()),
            ("gps", e.gps.ego()),
        ] {
            ego_state
                .check()
                .map_err(|err| Error::Snapshot(format!("ego {ego}, {name}: {err}")))?;
        }
    }
    Ok(state)
}

/// Writes via a temporary file in the same directory, then renames.
pub fn save(state: &Replayer, path: &Path) -> Result<()> {
    let dir = path
        .parent()
        .filter(|p| !p.as_os_str().is_empty())
        .unwrap_or(Path::new("."));
    let tmp = dir.join(format!(
        ".{}.tmp",
        path.file_name().and_then(|n| n.to_str()).unwrap_or("snapshot")
    ));
    {
        let mut f = std::fs::File::create(&tmp)?;
        f.write_all(to_json(state).as_bytes())?;
        f.sync_all()?;
    }
    std::fs::rename(&tmp, path)?;
    Ok(())
}

pub fn load(path: &Path) -> Result<Replayer> {
    from_json(&std::fs::read_to_string(path)?)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::config::RunConfig;
    use crate::ingest::{EventEnvelope, EventType};

    fn sample_state() -> Replayer {
        let mut r = Replayer::new(RunConfig::default()).unwrap();
        r.process(&[
            EventEnvelope::interaction("u", 1_000, EventType::Call, "a"),
            EventEnvelope::interaction("u", 70_000, EventType::Sms, "b"),
            EventEnvelope::gps("u", 80_000, 45.0, 9.0),
        ])
        .unwrap();
        r
    }

    #[test]
    fn empty_engine_round_trips() {
        let r = Replayer::new(RunConfig::default()).unwrap();
        assert_eq!(from_json(&to_json(&r)).unwrap(), r);
    }

    #[test]
    fn round_trip_is_byte_stable() {
        let r = sample_state();
        let json = to_json(&r);
        let back = from_json(&json).unwrap();
        assert_eq!(back, r);
        assert_eq!(to_json(&back), json);
    }

    #[test]
    fn truncated_and_wrong_version_rejected() {
        let json = to_json(&sample_state());
        assert!(matches!(from_json(&json[..json.len() / 2]), Err(Error::Snapshot(_))));
        let bumped = json.replacen("\"version\":1", "\"version\":2", 1);
        let err = from_json(&bumped).unwrap_err();
        assert!(err.to_string().contains("version mismatch"), "{err}");
    }

    #[test]
    fn stale_network_rejected() {
        let json = to_json(&sample_state());
        // corrupt a stored network weight so it no longer matches the ranking
        let mut v: serde_json::Value = serde_json::from_str(&json).unwrap();
        let net = &mut v["state"]["egos"]["u"]["engine"]["social"]["ego"]["network"]["built_from"][0][1];
        *net = serde_json::json!(123.0);
        assert!(from_json(&v.to_string()).is_err());
    }
}
