//! Social context of one ego: interactions are filtered, turned into tie
//! weights, and each window reports how the active people spread over the
//! layers of the social ego network.

use egonet::social::{Channel, SocialContext, SocialEvent, DEFAULT_LAMBDA, DEFAULT_RSSI_THRESHOLD};
use egonet::{AlterId, DeviceClass, EngineConfig};

fn main() -> egonet::Result<()> {
    let mut ctx = SocialContext::new(DEFAULT_LAMBDA, DEFAULT_RSSI_THRESHOLD, EngineConfig::new(150, 4)?)?;
    let p = |k: &str| AlterId::person(k).unwrap();

    // warm-up: an hour of history, one window per minute
    let history = [
        ("family", 100),
        ("colleague1", 40),
        ("colleague2", 15),
        ("friend", 2),
        ("acq1", 1),
        ("acq2", 2),
    ];
    let mut t = 0;
    for (who, calls) in history {
        for _ in 0..calls {
            ctx.process_window(vec![SocialEvent::interaction(t, Channel::Call, p(who))], t + 60_000)?;
            t += 60_000;
        }
    }

    // now: two colleagues nearby, a message from a rarely contacted friend,
    // and a distant phone that the RSSI filter drops
    let window = vec![
        SocialEvent::sighting(
            t,
            Channel::BtSighting,
            p("colleague1"),
            -52,
            DeviceClass::PersonalMobile,
        ),
        SocialEvent::sighting(
            t + 1_000,
            Channel::WfdSighting,
            p("colleague2"),
            -60,
            DeviceClass::PersonalMobile,
        ),
        SocialEvent::interaction(t + 2_000, Channel::Sms, p("friend")),
        SocialEvent::sighting(
            t + 3_000,
            Channel::BtSighting,
            p("passer-by"),
            -88,
            DeviceClass::PersonalMobile,
        ),
    ];
    let out = ctx.process_window(window, t + 60_000)?;
    println!("filtered out: {}", out.filtered_out);
    println!("layer sizes: {:?}", ctx.network().layer_sizes());
    println!(
        "SC = {:?} over {} active alters",
        out.features.sc, out.features.active_count
    );
    for who in ["family", "colleague1", "friend"] {
        println!("weight({who}) = {}", ctx.weights().social_weight(&p(who)));
    }
    Ok(())
}
