use guarnet::contagion::{monte_carlo, ContagionParams, SeedScenario};
use guarnet::generator::{generate_snapshot, preset};

fn main() {
    let snapshot = generate_snapshot(&preset("phase3").unwrap(), 42).unwrap();
    let summary = monte_carlo(
        &snapshot,
        SeedScenario::Random,
        0.05,
        500,
        &ContagionParams::default(),
        None,
        42,
    )
    .unwrap();
    println!("mean final default ratio: {:.4}", summary.mean_final_ratio);
}
