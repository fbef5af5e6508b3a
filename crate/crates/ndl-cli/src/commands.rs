//! The nine subcommands. Every emitted witness is re-validated against the
//! host graph before it is written; a failed validation is a crash rather
//! than a silent report.

use rayon::prelude::*;
use serde_json::json;

use ndl_core::generators::{construct_low_mu_graph, construct_short_path_graph, random_regular};
use ndl_core::graph::Graph;
use ndl_core::io::{read_graph_file, write_graph_file};
use ndl_core::oracle;
use ndl_core::percolation::{component_stats, site_percolate, PercolationParams};
use ndl_core::search::{
    dfs_with_mask, find_long_induced_cycle, mu_lower_certificate, InducedPath, VertexOrder,
};
use ndl_core::seed_derive;
use ndl_core::spectral::{extremal_eigenvalues, SpectralError};
use ndl_core::{ComponentStatsF64, SpectralReportF64};

use crate::config::{CliError, Params};
use crate::report::{median_usize, write_csv, write_json};

const SPECTRAL_MAX_ITER: usize = 100_000;

fn load_graph(params: &Params) -> Result<Graph, CliError> {
    let path = params.require_graph()?;
    read_graph_file(path).map_err(|e| CliError::Invalid(e.to_string()))
}

fn regular_degree_of(g: &Graph) -> Result<usize, CliError> {
    g.regular_degree()
        .filter(|&d| d > 0)
        .ok_or_else(|| CliError::Invalid("graph must be regular with positive degree".into()))
}

pub fn generate(params: &Params) -> Result<(), CliError> {
    let n = params.require_n()?;
    let d = params.require_d()?;
    let g = random_regular(n, d, params.seed).map_err(|e| CliError::Operation(e.to_string()))?;
    crate::report::ensure_out_dir(&params.out)?;
    let path = params.out.join("graph.txt");
    write_graph_file(&g, &path).map_err(|e| CliError::Operation(e.to_string()))?;
    println!(
        "wrote {} (n={}, m={}, seed={})",
        path.display(),
        g.vertex_count(),
        g.edge_count(),
        params.seed
    );
    Ok(())
}

pub fn construct(params: &Params) -> Result<(), CliError> {
    let d = params.require_d()?;
    let delta = params.require_delta()?;
    let n_target = params.require_n()?;
    let what = params.require_what(&["short-path", "low-mu"])?;
    let (g, cp) = match what {
        "short-path" => construct_short_path_graph::<f64>(d, delta, n_target, params.seed),
        _ => construct_low_mu_graph::<f64>(d, delta, n_target, params.seed),
    }
    .map_err(|e| CliError::Operation(e.to_string()))?;
    crate::report::ensure_out_dir(&params.out)?;
    let graph_path = params.out.join("graph.txt");
    write_graph_file(&g, &graph_path).map_err(|e| CliError::Operation(e.to_string()))?;
    let sidecar = json!({
        "kind": what,
        "d": cp.d,
        "delta": cp.delta,
        "n_target": cp.n_target,
        "n": cp.n,
        "d0": cp.d0,
        "n0": cp.n0,
        "k": cp.k,
        "q": cp.q,
        "r": cp.r,
        "base_lambda": cp.base_lambda,
        "base_samples": cp.base_samples,
        "seed": params.seed,
    });
    let json_path = write_json(&params.out, "params.json", &sidecar)?;
    println!(
        "wrote {} and {} (n={}, d={}, blow-up k={})",
        graph_path.display(),
        json_path.display(),
        cp.n,
        cp.d,
        cp.k
    );
    Ok(())
}

fn spectral_json(report: &SpectralReportF64, converged: bool) -> serde_json::Value {
    json!({
        "lambda1": report.lambda1,
        "lambda2": report.lambda2,
        "lambda_n": report.lambda_n,
        "lambda": report.lambda,
        "ratio": report.ratio,
        "iterations_lambda2": report.iterations[0],
        "iterations_lambda_n": report.iterations[1],
        "residual_lambda2": report.residual[0],
        "residual_lambda_n": report.residual[1],
        "converged": converged,
    })
}

pub fn spectral(params: &Params) -> Result<(), CliError> {
    let g = load_graph(params)?;
    match extremal_eigenvalues::<f64>(&g, params.tol, SPECTRAL_MAX_ITER) {
        Ok(report) => {
            let path = write_json(&params.out, "spectral.json", &spectral_json(&report, true))?;
            println!(
                "wrote {} (lambda2={:.6}, lambdaN={:.6}, ratio={:.6})",
                path.display(),
                report.lambda2,
                report.lambda_n,
                report.ratio
            );
            Ok(())
        }
        Err(SpectralError::NoConvergence(report)) => {
            write_json(&params.out, "spectral.json", &spectral_json(&report, false))?;
            Err(CliError::Operation(format!(
                "no convergence within {SPECTRAL_MAX_ITER} iterations (best residuals {:?}); report written",
                report.residual
            )))
        }
        Err(e) => Err(CliError::Invalid(e.to_string())),
    }
}

fn stats_row(
    seed: u64,
    n: usize,
    d: usize,
    epsilon: f64,
    stats: &ComponentStatsF64,
) -> String {
    let fmt_opt = |v: Option<f64>| v.map(|x| x.to_string()).unwrap_or_default();
    format!(
        "{seed},{n},{d},{epsilon},{},{},{},{},{},{},{}",
        stats.kept,
        stats.l1_order,
        stats.l1_edges,
        stats.total_excess,
        stats.stray_edges,
        fmt_opt(stats.predicted_l1_order),
        fmt_opt(stats.predicted_l1_edges),
    )
}

pub const PERCOLATE_HEADER: &str = "seed,n,d,epsilon,kept,L1_order,L1_edges,excess,stray_edges,predicted_L1_order,predicted_L1_edges";

pub fn percolate(params: &Params) -> Result<(), CliError> {
    let g = load_graph(params)?;
    let d = regular_degree_of(&g)?;
    let epsilon = params.require_epsilon()?;
    let n = g.vertex_count();
    let rows: Vec<String> = (0..params.trials)
        .map(|t| {
            let trial_seed = seed_derive(params.seed, "trial", t as u64);
            let p = PercolationParams::supercritical(epsilon, d, trial_seed)
                .expect("validated epsilon");
            let kept = site_percolate(&g, &p);
            let stats = component_stats(&g, &kept, &p);
            stats_row(trial_seed, n, d, epsilon, &stats)
        })
        .collect();
    let path = write_csv(&params.out, "trials.csv", PERCOLATE_HEADER, &rows)?;
    println!("wrote {} ({} trials)", path.display(), params.trials);
    Ok(())
}

/// Shared path-search pass with optional per-exposure tracing.
fn traced_path_run(
    g: &Graph,
    epsilon: f64,
    seed: u64,
    trace: Option<(&mut Vec<String>, usize)>,
) -> Result<InducedPath, CliError> {
    let d = regular_degree_of(g)?;
    let p = PercolationParams::supercritical(epsilon, d, seed)
        .map_err(|e| CliError::Invalid(e.to_string()))?;
    let retained = ndl_core::percolation::retention_mask(g.vertex_count(), &p);
    let budget = (epsilon * g.vertex_count() as f64) as usize;
    let order = VertexOrder::identity(g.vertex_count());
    let path = match trace {
        None => dfs_with_mask(g, &retained, &order, budget, |_, _| {}).0,
        Some((rows, attempt)) => {
            dfs_with_mask(g, &retained, &order, budget, |state, event| {
                if matches!(event, ndl_core::DfsEvent::Exposed { .. }) {
                    rows.push(format!(
                        "{attempt},{},{},{},{},{},{}",
                        state.exposures(),
                        state.unvisited_count(),
                        state.stack_len(),
                        state.settled_count(),
                        state.culled_count(),
                        state.absent_count(),
                    ));
                }
            })
            .0
        }
    };
    Ok(path)
}

pub const TRACE_HEADER: &str = "attempt,exposure,unvisited,stack,settled,culled,absent";

pub fn find_path(params: &Params) -> Result<(), CliError> {
    let g = load_graph(params)?;
    let d = regular_degree_of(&g)?;
    let epsilon = params.require_epsilon()?;
    let mut trace_rows = Vec::new();
    let path = traced_path_run(
        &g,
        epsilon,
        params.seed,
        params.trace.then_some((&mut trace_rows, 0)),
    )?;
    assert!(
        g.is_induced_path(path.vertices()),
        "emitted path failed re-validation"
    );
    let n = g.vertex_count();
    let target = epsilon * epsilon * n as f64 / (3.0 * d as f64);
    let value = json!({
        "vertices": path.vertices(),
        "length": path.len(),
        "target_length": target,
        "retries_used": 1,
        "invariant_check": "passed",
        "seed": params.seed,
        "epsilon": epsilon,
    });
    let out_path = write_json(&params.out, "path.json", &value)?;
    if params.trace {
        write_csv(&params.out, "trace.csv", TRACE_HEADER, &trace_rows)?;
    }
    println!(
        "wrote {} (length={}, target={:.2})",
        out_path.display(),
        path.len(),
        target
    );
    Ok(())
}

pub fn find_cycle(params: &Params) -> Result<(), CliError> {
    let g = load_graph(params)?;
    let _ = regular_degree_of(&g)?;
    let epsilon = params.require_epsilon()?;
    let outcome = find_long_induced_cycle(&g, epsilon, params.seed, params.retries)
        .map_err(|e| CliError::Operation(e.to_string()))?;
    assert!(
        g.is_induced_cycle(outcome.cycle.vertices()),
        "emitted cycle failed re-validation"
    );
    let value = json!({
        "vertices": outcome.cycle.vertices(),
        "length": outcome.cycle.len(),
        "target_length": outcome.target,
        "retries_used": outcome.attempts,
        "shortfall": outcome.shortfall,
        "invariant_check": "passed",
        "seed": params.seed,
        "epsilon": epsilon,
    });
    let out_path = write_json(&params.out, "cycle.json", &value)?;
    if params.trace {
        // Re-run the winning attempt with the observer wired in.
        let mut rows = Vec::new();
        let attempt = outcome.attempts - 1;
        let run_seed = seed_derive(params.seed, "cycle-attempt", attempt as u64);
        traced_path_run(&g, epsilon, run_seed, Some((&mut rows, attempt)))?;
        write_csv(&params.out, "trace.csv", TRACE_HEADER, &rows)?;
    }
    println!(
        "wrote {} (length={}, target={:.2}, attempts={}{})",
        out_path.display(),
        outcome.cycle.len(),
        outcome.target,
        outcome.attempts,
        if outcome.shortfall { ", shortfall" } else { "" }
    );
    Ok(())
}

pub fn certificate(params: &Params) -> Result<(), CliError> {
    let g = load_graph(params)?;
    let _ = regular_degree_of(&g)?;
    let epsilon = params.require_epsilon()?;
    let path = traced_path_run(&g, epsilon, params.seed, None)?;
    if path.len() < 5 {
        return Err(CliError::Operation(format!(
            "search produced a path on {} vertices; the certificate needs at least 5",
            path.len()
        )));
    }
    let cert = mu_lower_certificate::<f64>(&g, &path);
    for u in cert.unique_neighbors.iter() {
        let contacts = g
            .adjacency(u)
            .iter()
            .filter(|&&w| path.vertices().contains(&w))
            .count();
        assert_eq!(contacts, 1, "unique-neighbour re-validation failed");
    }
    let value = json!({
        "path": cert.path.vertices(),
        "path_length": cert.path.len(),
        "unique_neighbors": cert.unique_neighbors.as_slice(),
        "heavy": cert.heavy,
        "spaced": cert.spaced,
        "log2_bound": cert.log2_bound,
        "seed": params.seed,
        "epsilon": epsilon,
    });
    let out_path = write_json(&params.out, "certificate.json", &value)?;
    println!(
        "wrote {} (path length={}, spaced={}, log2 bound={:.3})",
        out_path.display(),
        cert.path.len(),
        cert.spaced.len(),
        cert.log2_bound
    );
    Ok(())
}

pub fn oracle_cmd(params: &Params) -> Result<(), CliError> {
    let g = load_graph(params)?;
    let what = params.require_what(&["path", "cycle", "mu", "spectrum"])?;
    let value = match what {
        "path" => {
            let witness =
                oracle::longest_induced_path_exact(&g).map_err(|e| CliError::Operation(e.to_string()))?;
            assert!(g.is_induced_path(&witness), "oracle path failed re-validation");
            json!({"what": "path", "length": witness.len(), "vertices": witness})
        }
        "cycle" => {
            let witness =
                oracle::longest_induced_cycle_exact(&g).map_err(|e| CliError::Operation(e.to_string()))?;
            if let Some(w) = &witness {
                assert!(g.is_induced_cycle(w), "oracle cycle failed re-validation");
            }
            json!({
                "what": "cycle",
                "length": witness.as_ref().map(|w| w.len()),
                "vertices": witness,
            })
        }
        "mu" => {
            let classes = oracle::mu_exact(&g).map_err(|e| CliError::Operation(e.to_string()))?;
            json!({"what": "mu", "classes": classes})
        }
        _ => {
            let spectrum =
                oracle::dense_spectrum::<f64>(&g).map_err(|e| CliError::Operation(e.to_string()))?;
            json!({"what": "spectrum", "values": spectrum})
        }
    };
    let out_path = write_json(&params.out, "oracle.json", &value)?;
    println!("wrote {}", out_path.display());
    Ok(())
}

pub const EXPERIMENT_HEADER: &str = "n,d,epsilon,trials,median_path_len,target_path_len,median_L1_order,predicted_L1_order,median_L1_edges,predicted_L1_edges,median_excess,median_stray_edges";

pub fn experiment(params: &Params) -> Result<(), CliError> {
    let epsilons = if !params.epsilon_grid.is_empty() {
        params.epsilon_grid.clone()
    } else {
        vec![params.require_epsilon()?]
    };
    let degrees = if !params.d_grid.is_empty() {
        params.d_grid.clone()
    } else {
        vec![params.require_d()?]
    };
    let sizes = if !params.n_grid.is_empty() {
        params.n_grid.clone()
    } else {
        vec![params.require_n()?]
    };
    for &eps in &epsilons {
        if !(eps > 0.0) {
            return Err(CliError::Invalid("grid epsilon must be positive".into()));
        }
    }

    let mut rows = Vec::new();
    let mut cell_index = 0u64;
    for &n in &sizes {
        for &d in &degrees {
            let cell_seed = seed_derive(params.seed, "cell", cell_index);
            cell_index += 1;
            let g = random_regular(n, d, seed_derive(cell_seed, "graph", 0))
                .map_err(|e| CliError::Operation(format!("cell n={n} d={d}: {e}")))?;
            for &epsilon in &epsilons {
                // Trials are independent given their derived seeds; run them
                // in parallel and order results by trial index.
                let mut outcomes: Vec<(usize, usize, ComponentStatsF64)> = (0..params.trials)
                    .into_par_iter()
                    .map(|t| {
                        let trial_seed = seed_derive(cell_seed, "trial", t as u64);
                        let p = PercolationParams::supercritical(epsilon, d, trial_seed)
                            .expect("validated epsilon");
                        let kept = site_percolate(&g, &p);
                        let stats = component_stats(&g, &kept, &p);
                        let retained =
                            ndl_core::percolation::retention_mask(g.vertex_count(), &p);
                        let order = VertexOrder::identity(g.vertex_count());
                        let budget = (epsilon * g.vertex_count() as f64) as usize;
                        let (path, _) =
                            dfs_with_mask(&g, &retained, &order, budget, |_, _| {});
                        (t, path.len(), stats)
                    })
                    .collect();
                outcomes.sort_by_key(|&(t, _, _)| t);
                let path_lens: Vec<usize> = outcomes.iter().map(|o| o.1).collect();
                let l1_orders: Vec<usize> = outcomes.iter().map(|o| o.2.l1_order).collect();
                let l1_edges: Vec<usize> = outcomes.iter().map(|o| o.2.l1_edges).collect();
                let excesses: Vec<usize> = outcomes.iter().map(|o| o.2.total_excess).collect();
                let strays: Vec<usize> = outcomes.iter().map(|o| o.2.stray_edges).collect();
                let fmt_opt =
                    |v: Option<f64>| v.map(|x| x.to_string()).unwrap_or_default();
                let target = epsilon * epsilon * n as f64 / (3.0 * d as f64);
                rows.push(format!(
                    "{n},{d},{epsilon},{},{},{target},{},{},{},{},{},{}",
                    params.trials,
                    median_usize(&path_lens),
                    median_usize(&l1_orders),
                    fmt_opt(outcomes[0].2.predicted_l1_order),
                    median_usize(&l1_edges),
                    fmt_opt(outcomes[0].2.predicted_l1_edges),
                    median_usize(&excesses),
                    median_usize(&strays),
                ));
            }
        }
    }
    let path = write_csv(&params.out, "experiment.csv", EXPERIMENT_HEADER, &rows)?;
    println!(
        "wrote {} ({} cells x {} trials)",
        path.display(),
        rows.len(),
        params.trials
    );
    Ok(())
}

