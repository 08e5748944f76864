//! Incremental ego-network maintenance: alters are ranked by weight, the
//! top `eta` are clustered into layers, and re-clustering is skipped when
//! an update leaves the top of the ranking unchanged.

use egonet::{update_ego_network, ActiveWeight, AlterId, EgoState, EngineConfig};

fn main() -> egonet::Result<()> {
    let mut ego = EgoState::new(EngineConfig::new(5, 3)?)?;
    let p = |k: &str| AlterId::person(k);

    let batches = [
        vec![
            ActiveWeight::new(p("mum")?, 40.0, 40, 1),
            ActiveWeight::new(p("partner")?, 55.0, 55, 1),
        ],
        vec![
            ActiveWeight::new(p("ana")?, 12.0, 12, 2),
            ActiveWeight::new(p("bo")?, 10.0, 10, 2),
        ],
        vec![
            ActiveWeight::new(p("carl")?, 2.0, 2, 3),
            ActiveWeight::new(p("dee")?, 1.0, 1, 3),
        ],
        // dee is ranked sixth, outside the top five: no rebuild
        vec![ActiveWeight::new(p("dee")?, 1.5, 2, 4)],
        // dee overtakes carl and enters the top five: rebuild
        vec![ActiveWeight::new(p("dee")?, 3.0, 3, 5)],
    ];

    for (i, batch) in batches.iter().enumerate() {
        let (network, rebuilt) = update_ego_network(&mut ego, batch)?;
        println!("update {i}: rebuilt = {rebuilt}");
        for (l, layer) in network.layers().enumerate() {
            let members: Vec<String> = layer.iter().map(|(id, w)| format!("{}={w}", id.key())).collect();
            println!("  layer {}: {}", l + 1, members.join(" "));
        }
    }
    println!("{} rebuilds for {} updates", ego.rebuilds(), batches.len());
    Ok(())
}
