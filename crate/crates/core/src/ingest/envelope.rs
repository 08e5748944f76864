//! The canonical JSONL event schema.
//!
//! One JSON object per line:
//!
//! ```text
//! {"ego":"u1","ts":1000,"type":"call","counterpart":"p9"}
//! {"ego":"u1","ts":2000,"type":"bt","counterpart":"aa:bb","rssi":-58,"device_class":"personal_mobile"}
//! {"ego":"u1","ts":3000,"type":"gps","lat":45.46,"lon":9.19}
//! ```
//!
//! Unknown fields are ignored; unknown `type` values are rejected.

use std::io::BufRead;

use serde::{Deserialize, Serialize};

use crate::alter::{AlterId, DeviceClass, Millis};
use crate::error::{Error, Result};
use crate::places::{GpsFix, ProximityEvent};
use crate::social::{Channel, SocialEvent};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum EventType {
    Call,
    Sms,
    OsnComment,
    OsnReaction,
    OsnMention,
    Bt,
    Wfd,
    Gps,
}

impl EventType {
    pub fn is_sighting(self) -> bool {
        matches!(self, EventType::Bt | EventType::Wfd)
    }

    fn channel(self) -> Option<Channel> {
        Some(match self {
            EventType::Call => Channel::Call,
            EventType::Sms => Channel::Sms,
            EventType::OsnComment => Channel::OsnComment,
            EventType::OsnReaction => Channel::OsnReaction,
            EventType::OsnMention => Channel::OsnMention,
            EventType::Bt => Channel::BtSighting,
            EventType::Wfd => Channel::WfdSighting,
            EventType::Gps => return None,
        })
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct EventEnvelope {
    pub ego: String,
    pub ts: Millis,
    #[serde(rename = "type")]
    pub kind: EventType,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub counterpart: Option<String>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub rssi: Option<i32>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub device_class: Option<DeviceClass>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub lat: Option<f64>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub lon: Option<f64>,
}

/// A validated event routed to the model that consumes it.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub enum Observation {
    Social(SocialEvent),
    Proximity(ProximityEvent),
    Gps(GpsFix),
}

impl EventEnvelope {
    pub fn interaction(ego: &str, ts: Millis, kind: EventType, counterpart: &str) -> Self {
        EventEnvelope {
            ego: ego.into(),
            ts,
            kind,
            counterpart: Some(counterpart.into()),
            rssi: None,
            device_class: None,
            lat: None,
            lon: None,
        }
    }

    pub fn sighting(ego: &str, ts: Millis, kind: EventType, counterpart: &str, rssi: i32, class: DeviceClass) -> Self {
        EventEnvelope {
            rssi: Some(rssi),
            device_class: Some(class),
            ..Self::interaction(ego, ts, kind, counterpart)
        }
    }

    pub fn gps(ego: &str, ts: Millis, lat: f64, lon: f64) -> Self {
        EventEnvelope {
            ego: ego.into(),
            ts,
            kind: EventType::Gps,
            counterpart: None,
            rssi: None,
            device_class: None,
            lat: Some(lat),
            lon: Some(lon),
        }
    }

    /// Field-presence and bound rules that depend on the event type.
    pub fn validate(&self) -> Result<()> {
        if self.ego.is_empty() {
            return Err(Error::validation("empty ego"));
        }
        let radio = self.rssi.is_some() || self.device_class.is_some();
        let position = self.lat.is_some() || self.lon.is_some();
        match self.kind {
            EventType::Gps => {
                let (Some(lat), Some(lon)) = (self.lat, self.lon) else {
                    return Err(Error::validation("gps event requires lat and lon"));
                };
                if self.counterpart.is_some() || radio {
                    return Err(Error::validation(
                        "gps event must not carry counterpart, rssi or device_class",
                    ));
                }
                GpsFix::new(self.ts, lat, lon)?;
            }
            kind => {
                match self.counterpart.as_deref() {
                    None | Some("") => return Err(Error::validation(format!("{kind:?} event requires counterpart"))),
                    Some(_) => {}
                }
                if position {
                    return Err(Error::validation(format!("{kind:?} event must not carry lat/lon")));
                }
                if kind.is_sighting() && (self.rssi.is_none() || self.device_class.is_none()) {
                    return Err(Error::validation(format!("{kind:?} event: missing rssi/device_class")));
                }
                if !kind.is_sighting() && radio {
                    return Err(Error::validation(format!(
                        "{kind:?} event must not carry rssi/device_class"
                    )));
                }
            }
        }
        Ok(())
    }

    /// Sightings of phones and wearables (or unclassified devices) go to the
    /// social model, sightings of smart objects to the proximity model.
    pub fn observation(&self) -> Result<Observation> {
        self.validate()?;
        if self.kind == EventType::Gps {
            return Ok(Observation::Gps(GpsFix::new(
                self.ts,
                self.lat.unwrap(),
                self.lon.unwrap(),
            )?));
        }
        let key = self.counterpart.as_deref().unwrap();
        let channel = self.kind.channel().unwrap();
        match self.device_class {
            Some(class) if class.is_smart_object() => Ok(Observation::Proximity(ProximityEvent {
                timestamp: self.ts,
                device: AlterId::device(key)?,
                device_class: class,
            })),
            _ => Ok(Observation::Social(SocialEvent {
                timestamp: self.ts,
                channel,
                counterpart: AlterId::person(key)?,
                rssi: self.rssi,
                device_class: self.device_class,
            })),
        }
    }
}

/// Parses and validates one JSONL line; `line_no` is reported in errors.
pub fn parse_event(line: &str, line_no: usize) -> Result<EventEnvelope> {
    let env: EventEnvelope = serde_json::from_str(line).map_err(|e| Error::Parse {
        line: line_no,
        message: e.to_string(),
    })?;
    env.validate().map_err(|e| Error::Parse {
        line: line_no,
        message: e.to_string(),
    })?;
    Ok(env)
}

pub fn serialize_event(env: &EventEnvelope) -> String {
    serde_json::to_string(env).expect("envelope serialises")
}

/// Reads a whole JSONL stream; blank lines are skipped, line numbers are 1-based.
pub fn read_events(reader: impl BufRead) -> Result<Vec<EventEnvelope>> {
    let mut out = Vec::new();
    for (i, line) in reader.lines().enumerate() {
        let line = line?;
        if line.trim().is_empty() {
            continue;
        }
        out.push(parse_event(&line, i + 1)?);
    }
    Ok(out)
}

pub fn write_events(mut w: impl std::io::Write, events: &[EventEnvelope]) -> Result<()> {
    for e in events {
        writeln!(w, "{}", serialize_event(e))?;
    }
    Ok(())
}
