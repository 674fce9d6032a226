//! Acceptance gate. Prints one PASS/FAIL line per criterion and exits
//! nonzero if any criterion fails. Exact criteria use zero tolerance; the
//! float criterion uses a relative tolerance of 1e-9. Criteria with a time
//! budget also fail when they run over it.

use std::process::ExitCode;
use std::time::{Duration, Instant};

use rayon::prelude::*;
use twotree::closed_form::{
    bent_resistance_alternating, bent_resistance_product, straight_pair_resistance,
    tail_triple_closed, telescoping_increment, BentParams,
};
use twotree::delta_y::{reduce_bent, reduce_bent_observed, reduce_straight_chain, StepRecord};
use twotree::graph::{bent_2tree, straight_2tree};
use twotree::identities::{run_all, Profile};
use twotree::resistance::{resistance_exact, resistance_float};
use twotree::Rational;

const FLOAT_REL_TOL: f64 = 1e-9;

type Outcome = Result<String, String>;

struct Criterion {
    id: u32,
    name: &'static str,
    budget: Option<Duration>,
    run: fn() -> Outcome,
}

fn ensure(cond: bool, msg: impl FnOnce() -> String) -> Result<(), String> {
    if cond {
        Ok(())
    } else {
        Err(msg())
    }
}

fn bent_grid(lo: usize, hi: usize) -> Vec<(usize, usize)> {
    (lo..=hi)
        .flat_map(|n| (3..=n - 3).map(move |k| (n, k)))
        .collect()
}

fn triple_agreement() -> Outcome {
    let grid = bent_grid(6, 24);
    grid.par_iter().try_for_each(|&(n, k)| {
        let p = BentParams::new(n, k).map_err(|e| e.to_string())?;
        let product = bent_resistance_product(&p);
        let alternating = bent_resistance_alternating(&p);
        let engine = reduce_bent(n, k).map_err(|e| e.to_string())?.r;
        let g = bent_2tree(n, k).map_err(|e| e.to_string())?;
        let oracle = resistance_exact(&g, 1, n).map_err(|e| e.to_string())?;
        ensure(
            product == alternating && alternating == engine && engine == oracle,
            || format!("n={n} k={k}: product {product}, alternating {alternating}, engine {engine}, oracle {oracle}"),
        )
    })?;
    Ok(format!("{} (n, k) pairs", grid.len()))
}

fn form_equivalence() -> Outcome {
    let grid: Vec<(usize, usize)> = (4..=200usize)
        .flat_map(|m| (3..=m - 1).map(move |k| (m, k)))
        .collect();
    grid.par_iter().try_for_each(|&(m, k)| {
        let p = BentParams::from_triangles(m, k).map_err(|e| e.to_string())?;
        let (a, b) = (bent_resistance_product(&p), bent_resistance_alternating(&p));
        ensure(a == b, || format!("m={m} k={k}: product {a} != alternating {b}"))
    })?;
    Ok(format!("{} (m, k) pairs", grid.len()))
}

fn spot_value() -> Outcome {
    let g = bent_2tree(6, 3).map_err(|e| e.to_string())?;
    let r = resistance_exact(&g, 1, 6).map_err(|e| e.to_string())?;
    let want = Rational::ratio(6, 5);
    ensure(r == want, || format!("Laplacian gives {r}, want {want}"))?;
    let p = BentParams::new(6, 3).map_err(|e| e.to_string())?;
    ensure(bent_resistance_alternating(&p) == want, || "closed form disagrees".into())?;
    Ok(format!("r = {r}"))
}

fn straight_pair_formula() -> Outcome {
    let mut cases = 0;
    for m in 1..=12usize {
        let g = straight_2tree(m + 2).map_err(|e| e.to_string())?;
        for j in 1..=m + 1 {
            for k in 1..=m + 2 - j {
                let formula = straight_pair_resistance(m, j, k).map_err(|e| e.to_string())?;
                let oracle = resistance_exact(&g, j, j + k).map_err(|e| e.to_string())?;
                ensure(formula == oracle, || {
                    format!("m={m} j={j} k={k}: formula {formula}, oracle {oracle}")
                })?;
                cases += 1;
            }
        }
    }
    Ok(format!("{cases} (m, j, k) triples"))
}

fn tail_closed_forms() -> Outcome {
    let triples = reduce_straight_chain(50).map_err(|e| e.to_string())?;
    ensure(triples.len() == 50, || format!("engine produced {} triples", triples.len()))?;
    for t in &triples {
        let (ct, cs, cb) = tail_triple_closed(t.j);
        ensure(t.t == ct && t.s == cs && t.b == cb, || {
            format!("j={}: engine ({}, {}, {}), closed ({ct}, {cs}, {cb})", t.j, t.t, t.s, t.b)
        })?;
    }
    Ok("j = 1..50".into())
}

fn identity_suite() -> Outcome {
    let reports = run_all(Profile::Standard);
    let points: u64 = reports.iter().map(|r| r.points).sum();
    if let Some(bad) = reports.iter().find(|r| !r.passed()) {
        return Err(format!("{} failed at {:?}", bad.id, bad.counterexample));
    }
    Ok(format!("{} identities, {points} points", reports.len()))
}

fn step_preservation() -> Outcome {
    let grid = bent_grid(6, 12);
    let steps: usize = grid
        .par_iter()
        .map(|&(n, k)| -> Result<usize, String> {
            let target = resistance_exact(&bent_2tree(n, k).map_err(|e| e.to_string())?, 1, n)
                .map_err(|e| e.to_string())?;
            let mut seen = 0usize;
            let red = reduce_bent_observed(n, k, |state| {
                let (g, a, b) = state.to_weighted_graph()?;
                let r = resistance_exact(&g, a, b)?;
                if r != target {
                    return Err(twotree::Error::InvalidGraph(format!(
                        "n={n} k={k} after step {seen}: r = {r}, want {target}"
                    )));
                }
                seen += 1;
                Ok(())
            })
            .map_err(|e| e.to_string())?;
            for rec in red.state.log() {
                if let StepRecord::DeltaY { rc, side, step, .. } = rec {
                    ensure(*rc == Rational::one(), || {
                        format!("n={n} k={k} {side:?} step {step}: R_C = {rc}")
                    })?;
                }
            }
            Ok(seen)
        })
        .try_reduce(|| 0, |a, b| Ok(a + b))?;
    Ok(format!("{} trees, {steps} circuit states re-solved", grid.len()))
}

fn float_tolerance() -> Outcome {
    let mut graphs: Vec<(usize, Option<usize>)> = (3..=40).map(|n| (n, None)).collect();
    graphs.extend(bent_grid(6, 40).into_iter().map(|(n, k)| (n, Some(k))));
    let worst = graphs
        .par_iter()
        .map(|&(n, k)| -> Result<f64, String> {
            let g = match k {
                None => straight_2tree(n),
                Some(k) => bent_2tree(n, k),
            }
            .map_err(|e| e.to_string())?;
            let exact = resistance_exact(&g, 1, n).map_err(|e| e.to_string())?.to_f64();
            let float = resistance_float(&g, 1, n).map_err(|e| e.to_string())?;
            let rel = (float - exact).abs() / exact;
            ensure(rel <= FLOAT_REL_TOL, || format!("n={n} k={k:?}: relative error {rel:e}"))?;
            Ok(rel)
        })
        .try_reduce(|| 0.0, |a, b| Ok(a.max(b)))?;
    Ok(format!("{} graphs, worst relative error {worst:.2e}", graphs.len()))
}

fn telescoping() -> Outcome {
    let grid: Vec<(usize, usize)> = (5..=100usize)
        .flat_map(|m| (3..=m - 2).map(move |k| (m, k)))
        .collect();
    grid.par_iter().try_for_each(|&(m, k)| {
        let lo = BentParams::from_triangles(m, k).map_err(|e| e.to_string())?;
        let hi = BentParams::from_triangles(m, k + 1).map_err(|e| e.to_string())?;
        let step = telescoping_increment(m, k);
        let by_product = bent_resistance_product(&hi) - bent_resistance_product(&lo);
        let by_alternating = bent_resistance_alternating(&hi) - bent_resistance_alternating(&lo);
        ensure(by_product == step && by_alternating == step, || {
            format!("m={m} k={k}: increment {step}, product diff {by_product}, alternating diff {by_alternating}")
        })
    })?;
    Ok(format!("{} (m, k) pairs", grid.len()))
}

fn main() -> ExitCode {
    let criteria = [
        Criterion { id: 1, name: "bent forms, engine and Laplacian agree (n <= 24)", budget: Some(Duration::from_secs(60)), run: triple_agreement },
        Criterion { id: 2, name: "product and alternating forms agree (m <= 200)", budget: Some(Duration::from_secs(60)), run: form_equivalence },
        Criterion { id: 3, name: "r(1,6) = 6/5 on the bent tree with k = 3", budget: None, run: spot_value },
        Criterion { id: 4, name: "straight pair formula matches Laplacian (m <= 12)", budget: Some(Duration::from_secs(30)), run: straight_pair_formula },
        Criterion { id: 5, name: "engine tail triples match closed forms (j <= 50)", budget: None, run: tail_closed_forms },
        Criterion { id: 6, name: "identity suite, standard profile", budget: Some(Duration::from_secs(120)), run: identity_suite },
        Criterion { id: 7, name: "resistance preserved after every step, R_C = 1 (n <= 12)", budget: None, run: step_preservation },
        Criterion { id: 8, name: "float oracle within 1e-9 relative (n <= 40)", budget: None, run: float_tolerance },
        Criterion { id: 9, name: "telescoping increment (m <= 100)", budget: None, run: telescoping },
    ];

    let mut failed = 0;
    for c in &criteria {
        let start = Instant::now();
        let outcome = (c.run)();
        let elapsed = start.elapsed();
        let outcome = match (outcome, c.budget) {
            (Ok(detail), Some(budget)) if elapsed > budget => Err(format!(
                "{detail}; over time budget of {}s",
                budget.as_secs()
            )),
            (o, _) => o,
        };
        let secs = elapsed.as_secs_f64();
        match outcome {
            Ok(detail) => println!("PASS [{}] {} ({detail}) {secs:.2}s", c.id, c.name),
            Err(why) => {
                failed += 1;
                println!("FAIL [{}] {}: {why} {secs:.2}s", c.id, c.name);
            }
        }
    }
    println!("{} of {} criteria passed", criteria.len() - failed, criteria.len());
    if failed == 0 {
        ExitCode::SUCCESS
    } else {
        ExitCode::FAILURE
    }
}
