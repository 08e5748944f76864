//! Familiar places from two sources: smart objects seen over Bluetooth or
//! Wi-Fi Direct, and single-pass clusters of GPS fixes. Both become ego
//! networks whose layers separate habitual places from occasional ones.

use egonet::places::geo::DEFAULT_RADIUS_MAX_M;
use egonet::places::proximity::DEFAULT_DELTA_MAX_MS;
use egonet::places::{
    place_feature_vectors, proximity_weight_update, GpsFix, GpsModel, ProximityEvent, ProximityModel,
};
use egonet::{AlterId, DeviceClass, EngineConfig};

const MIN: i64 = 60_000;

fn main() -> egonet::Result<()> {
    // contact weight of one device: a contact window grows by elapsed
    // seconds, a new contact after a long gap adds its ordinal
    let s0 = proximity_weight_update(None, 0, DEFAULT_DELTA_MAX_MS)?;
    let s1 = proximity_weight_update(Some(&s0), 120_000, DEFAULT_DELTA_MAX_MS)?;
    let s2 = proximity_weight_update(Some(&s1), 1_000_000, DEFAULT_DELTA_MAX_MS)?;
    println!("contact weight trace: {} -> {} -> {}", s0.weight, s1.weight, s2.weight);

    let mut prox = ProximityModel::new(DEFAULT_DELTA_MAX_MS, EngineConfig::new(500, 3)?)?;
    let mut gps = GpsModel::new(DEFAULT_RADIUS_MAX_M, DEFAULT_DELTA_MAX_MS, EngineConfig::new(15, 3)?)?;
    let home = (45.4642, 9.1900);
    let gym = (45.4700, 9.2000);
    let cafe = (45.4601, 9.1805);
    let dev = |k: &str| AlterId::device(k).unwrap();

    let mut t = 0;
    let mut last = None;
    // a week: evenings at home with the router and TV, gym twice, cafe once
    for day in 0..7 {
        let outing = match day {
            1 | 4 => Some((gym, "gym-ap")),
            5 => Some((cafe, "cafe-ap")),
            _ => None,
        };
        let stays = outing.into_iter().chain([(home, "home-ap")]);
        for (place, ap) in stays {
            for _ in 0..if ap == "home-ap" { 12 } else { 4 } {
                let sightings = [
                    ProximityEvent {
                        timestamp: t,
                        device: dev(ap),
                        device_class: DeviceClass::AccessPoint,
                    },
                    ProximityEvent {
                        timestamp: t,
                        device: dev("home-tv"),
                        device_class: DeviceClass::SmartTv,
                    },
                ];
                let visible = if ap == "home-ap" {
                    &sightings[..]
                } else {
                    &sightings[..1]
                };
                let (in_range, _) = prox.process_window(visible)?;
                let (current, _) = gps.process_window(&[GpsFix::new(t, place.0, place.1)?])?;
                last = Some((in_range, current, t));
                t += 10 * MIN;
            }
            t += 2 * 60 * MIN;
        }
        t += 12 * 60 * MIN;
    }

    let (in_range, current, t) = last.expect("at least one window");
    let features = place_feature_vectors(&prox.network(), &gps.network(), &in_range, current.as_ref(), t + MIN);
    println!("proximity layers: {:?}", prox.network().layer_sizes());
    println!("gps clusters: {}", gps.clusterer().clusters().len());
    for c in gps.clusterer().clusters() {
        println!(
            "  {} at ({:.4}, {:.4}) weight {}",
            c.id.key(),
            c.center.0,
            c.center.1,
            c.weight()
        );
    }
    println!("FPP = {:?}", features.fpp);
    println!("FPG = {:?}", features.fpg);
    Ok(())
}
