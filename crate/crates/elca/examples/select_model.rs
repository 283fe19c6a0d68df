//! Choosing the number of clusters by cross-validated likelihood.
//!
//! Simulates data with a known (G, K) = (2, 2) structure, then runs the
//! greedy search over cluster counts. Each candidate pair is scored by
//! the average held-out log-likelihood over random train/test splits of
//! the hyperedges, so every pair is judged on the same splits.
//!
//! Run with: cargo run --release --example select_model

use elca::model::ElcaParams;
use elca::selection::{greedy_search, CvConfig};
use elca::Result;

fn main() -> Result<()> {
    let truth = ElcaParams {
        pi: vec![0.5, 0.5],
        tau: vec![0.75, 0.25],
        a: vec![0.4, 1.0],
        phi: (0..14)
            .map(|i| {
                if i < 7 {
                    vec![0.85, 0.06]
                } else {
                    vec![0.06, 0.85]
                }
            })
            .collect(),
    };
    let sample = truth.sample(800, 5)?;
    println!(
        "simulated {} hyperedges from a (G, K) = (2, 2) truth",
        sample.matrix.n_edges()
    );

    let cfg = CvConfig {
        n_cv: 10,       // train/test replicates per candidate pair
        q: 0.7,         // each hyperedge lands in training with prob 0.7
        tol: 1e-5,
        max_iter: 300,
        n_restarts: 3,
        seed: 1,
    };
    let selection = greedy_search(&sample.matrix, &cfg)?;

    println!("\nsearch trajectory (in evaluation order):");
    for (g, k) in &selection.trajectory {
        let row = selection.lookup(*g, *k).expect("evaluated pair has a row");
        let marker = if (*g, *k) == (selection.g_opt, selection.k_opt) {
            "  <- selected"
        } else {
            ""
        };
        println!(
            "  (G = {g}, K = {k}): mean held-out loglik = {:.2}{marker}",
            row.mean
        );
    }
    println!(
        "\nselected (G, K) = ({}, {})",
        selection.g_opt, selection.k_opt
    );

    // The full replicate-level table is exportable for plotting.
    println!("\ncv table (first lines):");
    for line in selection.to_csv().lines().take(4) {
        println!("  {line}");
    }
    Ok(())
}
