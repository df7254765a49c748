//! The walk as a sum over percolation clusters of the random recursive tree.
//!
//! cargo run --release --example percolation_identity

use srwalk::constants::component_frequency;
use srwalk::percolation::grow_and_percolate;
use srwalk::{simulate_walk, stream_rng, RandomnessTape, Stream, StepSource};

fn main() -> srwalk::Result<()> {
    let (n, p, r) = (50_000, 0.5, 0.7);
    let tape = RandomnessTape::sample(n, p, r, &mut stream_rng(3, 0, Stream::Tape))?;
    let walk = simulate_walk(&StepSource::Rademacher, n, &tape, &mut stream_rng(3, 0, Stream::Steps))?;
    let (_, forest) = grow_and_percolate(n, &tape)?;

    let via_clusters = forest.weighted_sum(&walk.step_values)?;
    println!("T_n = {}, sum_k W_nk xi_k = {via_clusters}", walk.last());
    println!("{} clusters", forest.roots().count());

    println!("\n{:>3} {:>10} {:>10}", "k", "nu_k/n", "limit");
    for k in 1..=8 {
        let observed = forest.nu().get(&k).copied().unwrap_or(0) as f64 / n as f64;
        println!("{k:>3} {observed:>10.5} {:>10.5}", component_frequency(p, k)?);
    }
    Ok(())
}
