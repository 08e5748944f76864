//! How many circles does an ego really have? Mean shift over the alter
//! weights counts the modes; the population below plants four.

use std::collections::BTreeMap;

use egonet::analysis::{estimate_bandwidth, mean_shift_modes, optimal_circles};
use egonet::build_layers;
use egonet::ingest::{layered_weight_population, LayeredPopulationSpec};

fn main() -> egonet::Result<()> {
    let population = layered_weight_population(&LayeredPopulationSpec::default())?;

    let first = &population[0];
    let mut sorted = first.clone();
    sorted.sort_by(f64::total_cmp);
    println!(
        "ego 0: {} alters, bandwidth {:.3}",
        first.len(),
        estimate_bandwidth(&sorted)
    );
    let modes: Vec<String> = mean_shift_modes(first)?.iter().map(|m| format!("{m:.1}")).collect();
    println!("ego 0 modes: {}", modes.join(", "));
    let layers = build_layers(first, 4);
    let sizes: Vec<usize> = layers.iter().map(Vec::len).collect();
    println!("ego 0 layer sizes with 4 layers: {sizes:?}");

    let mut histogram = BTreeMap::new();
    for weights in &population {
        *histogram.entry(optimal_circles(weights)?).or_insert(0) += 1;
    }
    println!("optimal circles over {} egos:", population.len());
    for (circles, egos) in histogram {
        println!("  {circles}: {}", "#".repeat(egos));
    }
    Ok(())
}
