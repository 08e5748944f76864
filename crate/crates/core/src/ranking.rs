//! The unbounded, always-sorted ranking of an ego's alters.

use std::cmp::Ordering;
use std::collections::{BTreeSet, HashMap};

use serde::{Deserialize, Deserializer, Serialize, Serializer};

use crate::alter::{AlterId, AlterRecord, Millis};
use crate::error::{Error, Result};

/// New state for one alter that interacted with the ego in the current window.
#[derive(Debug, Clone, PartialEq)]
pub struct ActiveWeight {
    pub id: AlterId,
    pub weight: f64,
    pub n_contacts: u64,
    pub last_seen: Millis,
}

impl ActiveWeight {
    pub fn new(id: AlterId, weight: f64, n_contacts: u64, last_seen: Millis) -> Self {
        ActiveWeight {
            id,
            weight,
            n_contacts,
            last_seen,
        }
    }

    fn into_record(self) -> AlterRecord {
        AlterRecord {
            id: self.id,
            weight: self.weight,
            n_contacts: self.n_contacts,
            last_seen: self.last_seen,
        }
    }
}

#[derive(Debug, Clone)]
struct Ranked(AlterRecord);

impl PartialEq for Ranked {
    fn eq(&self, other: &Self) -> bool {
        self.cmp(other) == Ordering::Equal
    }
}

impl Eq for Ranked {}

impl Ord for Ranked {
    fn cmp(&self, other: &Self) -> Ordering {
        self.0.rank_cmp(&other.0)
    }
}

impl PartialOrd for Ranked {
    fn partial_cmp(&self, other: &Self) -> Option<Ordering> {
        Some(self.cmp(other))
    }
}

/// Every alter an ego has ever interacted with, ordered by weight descending
/// (ties: most recent first, then key). Records are never evicted.
#[derive(Debug, Clone, Default)]
pub struct AlterRanking {
    order: BTreeSet<Ranked>,
    index: HashMap<AlterId, AlterRecord>,
}

impl AlterRanking {
    pub fn new() -> Self {
        Self::default()
    }

    pub fn len(&self) -> usize {
        self.index.len()
    }

    pub fn is_empty(&self) -> bool {
        self.index.is_empty()
    }

    pub fn get(&self, id: &AlterId) -> Option<&AlterRecord> {
        self.index.get(id)
    }

    pub fn iter(&self) -> impl Iterator<Item = &AlterRecord> + '_ {
        self.order.iter().map(|r| &r.0)
    }

    /// The first `eta` records in rank order.
    pub fn top(&self, eta: usize) -> impl Iterator<Item = &AlterRecord> + '_ {
        self.iter().take(eta)
    }

    pub fn top_pairs(&self, eta: usize) -> Vec<(AlterId, f64)> {
        self.top(eta).map(|r| (r.id.clone(), r.weight)).collect()
    }

    /// Merges the active alters' new state into the ranking. All updates are
    /// validated before any is applied.
    pub fn apply(&mut self, active: &[ActiveWeight]) -> Result<()> {
        for a in active {
            if !(a.weight >= 0.0 && a.weight.is_finite()) {
                return Err(Error::InvalidWeight {
                    alter: a.id.to_string(),
                    weight: a.weight,
                });
            }
            if let Some(prev) = self.index.get(&a.id) {
                if a.last_seen < prev.last_seen {
                    return Err(Error::OutOfOrder {
                        subject: a.id.to_string(),
                        ts: a.last_seen,
                        last: prev.last_seen,
                    });
                }
            }
        }
        for a in active {
            self.upsert(a.clone().into_record());
        }
        Ok(())
    }

    fn upsert(&mut self, rec: AlterRecord) {
        if let Some(prev) = self.index.insert(rec.id.clone(), rec.clone()) {
            self.order.remove(&Ranked(prev));
        }
        self.order.insert(Ranked(rec));
    }

    fn from_records(records: Vec<AlterRecord>) -> Result<Self> {
        let mut ranking = AlterRanking::new();
        for rec in records {
            if !(rec.weight >= 0.0 && rec.weight.is_finite()) {
                return Err(Error::InvalidWeight {
                    alter: rec.id.to_string(),
                    weight: rec.weight,
                });
            }
            if ranking.index.contains_key(&rec.id) {
                return Err(Error::validation(format!("duplicate alter {} in ranking", rec.id)));
            }
            ranking.upsert(rec);
        }
        Ok(ranking)
    }
}

impl PartialEq for AlterRanking {
    fn eq(&self, other: &Self) -> bool {
        self.len() == other.len() && self.iter().eq(other.iter())
    }
}

impl Serialize for AlterRanking {
    fn serialize<S: Serializer>(&self, s: S) -> std::result::Result<S::Ok, S::Error> {
        s.collect_seq(self.iter())
    }
}

impl<'de> Deserialize<'de> for AlterRanking {
    fn deserialize<D: Deserializer<'de>>(d: D) -> std::result::Result<Self, D::Error> {
        let records = Vec::<AlterRecord>::deserialize(d)?;
        AlterRanking::from_records(records).map_err(serde::de::Error::custom)
    }
}

/// Functional form of [`AlterRanking::apply`].
pub fn apply_weights(mut ranking: AlterRanking, active: &[ActiveWeight]) -> Result<AlterRanking> {
    ranking.apply(active)?;
    Ok(ranking)
}

/// True iff the ordered `(alter, weight)` pairs in the first `eta` positions
/// differ. A weight change alone counts, since layer boundaries depend on values.
pub fn top_eta_changed(before: &AlterRanking, after: &AlterRanking, eta: usize) -> bool {
    pairs_differ(
        before.top(eta).map(|r| (&r.id, r.weight)),
        after.top(eta).map(|r| (&r.id, r.weight)),
        0.0,
    )
}

pub(crate) fn pairs_differ<'a>(
    mut a: impl Iterator<Item = (&'a AlterId, f64)>,
    mut b: impl Iterator<Item = (&'a AlterId, f64)>,
    tie_epsilon: f64,
) -> bool {
    loop {
        match (a.next(), b.next()) {
            (None, None) => return false,
            (Some((ia, wa)), Some((ib, wb))) => {
                if ia != ib || (wa - wb).abs() > tie_epsilon {
                    return true;
                }
            }
            _ => return true,
        }
    }
}
