//! Alter identities and the per-alter state kept by every ego model.

use std::cmp::Ordering;
use std::fmt;
use std::str::FromStr;
use std::sync::Arc;

use serde::{Deserialize, Deserializer, Serialize, Serializer};

use crate::error::{Error, Result};

/// Timestamps are integer milliseconds since the Unix epoch.
pub type Millis = i64;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum AlterKind {
    Person,
    Device,
    GeoCluster,
}

impl AlterKind {
    pub fn as_str(self) -> &'static str {
        match self {
            AlterKind::Person => "person",
            AlterKind::Device => "device",
            AlterKind::GeoCluster => "geo_cluster",
        }
    }
}

/// Identity of anything an ego interacts with. The key is shared, so clones
/// are cheap and snapshots of the top of a ranking do not copy strings.
///
/// Serialised as the string `"<kind>:<key>"`, e.g. `"device:aa:bb:cc"`.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct AlterId {
    kind: AlterKind,
    key: Arc<str>,
}

impl AlterId {
    pub fn new(kind: AlterKind, key: impl AsRef<str>) -> Result<Self> {
        let key = key.as_ref();
        if key.is_empty() {
            return Err(Error::validation("alter key must be non-empty"));
        }
        Ok(AlterId {
            kind,
            key: Arc::from(key),
        })
    }

    pub fn person(key: impl AsRef<str>) -> Result<Self> {
        Self::new(AlterKind::Person, key)
    }

    pub fn device(key: impl AsRef<str>) -> Result<Self> {
        Self::new(AlterKind::Device, key)
    }

    pub fn geo_cluster(key: impl AsRef<str>) -> Result<Self> {
        Self::new(AlterKind::GeoCluster, key)
    }

    pub fn kind(&self) -> AlterKind {
        self.kind
    }

    pub fn key(&self) -> &str {
        &self.key
    }
}

// Key first, then kind: the ranking tie-break is lexicographic on the key.
impl Ord for AlterId {
    fn cmp(&self, other: &Self) -> Ordering {
        self.key.cmp(&other.key).then(self.kind.cmp(&other.kind))
    }
}

impl PartialOrd for AlterId {
    fn partial_cmp(&self, other: &Self) -> Option<Ordering> {
        Some(self.cmp(other))
    }
}

impl FromStr for AlterId {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        let (kind, key) = s
            .split_once(':')
            .ok_or_else(|| Error::validation(format!("alter id {s:?} lacks a kind prefix")))?;
        let kind = match kind {
            "person" => AlterKind::Person,
            "device" => AlterKind::Device,
            "geo_cluster" => AlterKind::GeoCluster,
            other => return Err(Error::validation(format!("unknown alter kind {other:?}"))),
        };
        AlterId::new(kind, key)
    }
}

impl Serialize for AlterId {
    fn serialize<S: Serializer>(&self, s: S) -> std::result::Result<S::Ok, S::Error> {
        s.collect_str(self)
    }
}

impl<'de> Deserialize<'de> for AlterId {
    fn deserialize<D: Deserializer<'de>>(d: D) -> std::result::Result<Self, D::Error> {
        let s = <std::borrow::Cow<'de, str>>::deserialize(d)?;
        s.parse().map_err(serde::de::Error::custom)
    }
}

impl fmt::Display for AlterId {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}:{}", self.kind.as_str(), self.key)
    }
}

/// Device class advertised by a wireless sighting.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum DeviceClass {
    PersonalMobile,
    Wearable,
    AccessPoint,
    SmartTv,
    Printer,
    HomeAssistant,
    SmartBulb,
    Other,
}

impl DeviceClass {
    /// Phones and wearables: devices that stand for a person.
    pub fn is_personal(self) -> bool {
        matches!(self, DeviceClass::PersonalMobile | DeviceClass::Wearable)
    }

    /// Infrastructure and smart objects that characterise a place.
    pub fn is_smart_object(self) -> bool {
        matches!(
            self,
            DeviceClass::AccessPoint
                | DeviceClass::SmartTv
                | DeviceClass::Printer
                | DeviceClass::HomeAssistant
                | DeviceClass::SmartBulb
        )
    }
}

/// One entry of an ego's alter ranking.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct AlterRecord {
    pub id: AlterId,
    pub weight: f64,
    pub n_contacts: u64,
    pub last_seen: Millis,
}

impl AlterRecord {
    /// Ranking order: weight descending, then most recent `last_seen`,
    /// then key ascending.
    pub fn rank_cmp(&self, other: &Self) -> Ordering {
        other
            .weight
            .total_cmp(&self.weight)
            .then(other.last_seen.cmp(&self.last_seen))
            .then_with(|| self.id.cmp(&other.id))
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn string_form_round_trips() {
        let id = AlterId::device("aa:bb:cc").unwrap();
        assert_eq!(serde_json::to_string(&id).unwrap(), r#""device:aa:bb:cc""#);
        assert_eq!("device:aa:bb:cc".parse::<AlterId>().unwrap(), id);
        assert!("robot:x".parse::<AlterId>().is_err());
        assert!("person:".parse::<AlterId>().is_err());
    }

    #[test]
    fn empty_key_rejected() {
        assert!(AlterId::person("").is_err());
        assert!(AlterId::device("aa:bb").is_ok());
    }

    #[test]
    fn rank_order_breaks_ties_by_recency_then_key() {
        let rec = |k: &str, w: f64, t: Millis| AlterRecord {
            id: AlterId::person(k).unwrap(),
            weight: w,
            n_contacts: 1,
            last_seen: t,
        };
        let mut v = [
            rec("a", 5.0, 10),
            rec("b", 5.0, 20),
            rec("c", 7.0, 0),
            rec("0", 5.0, 10),
        ];
        v.sort_by(AlterRecord::rank_cmp);
        let keys: Vec<_> = v.iter().map(|r| r.id.key().to_string()).collect();
        assert_eq!(keys, ["c", "b", "0", "a"]);
    }
}
