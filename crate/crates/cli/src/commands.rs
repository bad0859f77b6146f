//! Subcommand implementations.

use std::path::PathBuf;

use rayon::prelude::*;
use serde::Serialize;
use serde_json::json;

use railyard_core::frozenboundary::{
    default_grid, singular_parameters, tangency_report, trace_double_root, winding_check,
    ParametricCurve,
};
use railyard_core::limitshape::{
    density, moment, support_bounds, AsymptoticModel, ObservationPoint,
};
use railyard_core::piecewise::{
    band_measure, component_grid, component_rank, density_piecewise, group_weights,
    support_piecewise, trace_component, PiecewiseBoundary, WeightGroups,
};
use railyard_core::railyard::DimerCovering;
use railyard_core::sampler::{draw_rng, GrowthSampler, TransferSampler};
use railyard_core::schur_process::{
    pair_product, partition_function_product, partition_function_transfer, BoundaryPair,
    ProductVariant,
};
use railyard_core::{Partition, RailYardSpec};

use crate::config::{BoundaryConfig, ExperimentConfig};
use crate::criteria;
use crate::output::{num, svg, OutDir, Table};
use crate::quad::integrate;
use crate::CliError;

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Command {
    Z,
    Sample,
    Moments,
    Density,
    Frozen,
    FrozenPiecewise,
    Verify,
}

/// Command-line overrides of the config.
#[derive(Debug, Clone, Default)]
pub struct Overrides {
    pub out: Option<PathBuf>,
    pub seed: Option<u64>,
    pub cap: Option<u64>,
}

impl Overrides {
    pub fn apply(&self, cfg: &mut ExperimentConfig) {
        if let Some(s) = self.seed {
            cfg.task.seed = Some(s);
        }
        if let Some(c) = self.cap {
            cfg.task.cap = c;
        }
        if let Some(o) = &self.out {
            cfg.output.dir = Some(o.display().to_string());
        }
    }
}

fn out_dir(cfg: &ExperimentConfig) -> Result<OutDir, CliError> {
    let dir = cfg
        .output
        .dir
        .clone()
        .unwrap_or_else(|| "railyard-out".into());
    let out = OutDir::create(std::path::Path::new(&dir))?;
    out.write("config.json", &(cfg.to_json() + "\n"))?;
    Ok(out)
}

/// Runs `cmd`. `verify` accepts a missing config; every other command
/// needs one.
pub fn run(cmd: Command, cfg: Option<ExperimentConfig>, ov: &Overrides) -> Result<(), CliError> {
    let cfg = cfg.map(|mut c| {
        ov.apply(&mut c);
        c
    });
    if cmd == Command::Verify {
        return verify(cfg.as_ref());
    }
    let cfg =
        cfg.ok_or_else(|| CliError::Config("--config is required for this command".into()))?;
    match cmd {
        Command::Z => z(&cfg),
        Command::Sample => sample(&cfg),
        Command::Moments => moments(&cfg),
        Command::Density => density_grid(&cfg),
        Command::Frozen => frozen(&cfg),
        Command::FrozenPiecewise => frozen_piecewise(&cfg),
        Command::Verify => unreachable!(),
    }
}

fn verify(cfg: Option<&ExperimentConfig>) -> Result<(), CliError> {
    if let Some(c) = cfg {
        c.validate()?;
        println!("config ok");
    }
    let reports = criteria::run_all();
    for r in &reports {
        println!("{r}");
    }
    let failed: Vec<String> = reports
        .iter()
        .filter(|r| !r.passed)
        .map(|r| r.id.to_string())
        .collect();
    if failed.is_empty() {
        Ok(())
    } else {
        Err(CliError::Verify(format!(
            "criteria {} failed",
            failed.join(", ")
        )))
    }
}

/// Product-form value when some closed form applies to the slots.
pub fn product_value(spec: &RailYardSpec, left: &Partition) -> Option<f64> {
    if left.is_empty() {
        return Some(pair_product(spec));
    }
    partition_function_product(spec, left, ProductVariant::LeftMinus)
        .or_else(|_| partition_function_product(spec, left, ProductVariant::RightMinus))
        .ok()
}

fn z(cfg: &ExperimentConfig) -> Result<(), CliError> {
    let spec = cfg.spec()?;
    let left = cfg.left_partition()?;
    let transfer = partition_function_transfer(
        &spec,
        &BoundaryPair::new(left.clone(), Partition::empty()),
        cfg.task.cap,
    );
    println!("transfer (cap {}) = {}", cfg.task.cap, num(transfer));
    match product_value(&spec, &left) {
        Some(p) => {
            println!("product = {}", num(p));
            println!("relative gap = {}", num((transfer - p).abs() / p));
        }
        None => println!("product = unavailable (slot pattern has both (L,-) and (R,-) with a nonempty boundary)"),
    }
    Ok(())
}

#[derive(Serialize)]
struct CoveringLine<'a> {
    draw: usize,
    seed: u64,
    partitions: Vec<&'a [u32]>,
}

fn sample(cfg: &ExperimentConfig) -> Result<(), CliError> {
    let spec = cfg.spec()?;
    let left = cfg.left_partition()?;
    let seed = cfg.seed()?;
    let n = cfg.task.samples;
    let draws: Vec<DimerCovering> = if left.is_empty() {
        let g = GrowthSampler::new(&spec);
        (0..n)
            .into_par_iter()
            .map(|i| g.draw(&mut draw_rng(seed, i as u64)))
            .collect()
    } else {
        let t = TransferSampler::new(&spec, &left, cfg.task.cap)?;
        (0..n)
            .into_par_iter()
            .map(|i| t.draw(&mut draw_rng(seed, i as u64)))
            .collect()
    };
    let out = out_dir(cfg)?;
    let mut lines = String::new();
    for (i, d) in draws.iter().enumerate() {
        let line = CoveringLine {
            draw: i,
            seed,
            partitions: d.partitions().iter().map(|p| p.parts()).collect(),
        };
        lines += &serde_json::to_string(&line)?;
        lines.push('\n');
    }
    out.write("coverings.jsonl", &lines)?;

    // occupancy of positions λ_j − j, j = 1..K, K the longest row count seen
    let mut t = Table::new(&["column", "position", "occupancy"]);
    for c in 0..=spec.len() {
        let k = draws
            .iter()
            .map(|d| d.partitions()[c].len())
            .max()
            .unwrap_or(0);
        let lo = -(k as i64);
        let hi = draws
            .iter()
            .map(|d| d.partitions()[c].part(0) as i64 - 1)
            .max()
            .unwrap_or(-1);
        let mut counts = vec![0usize; (hi - lo + 1).max(0) as usize];
        for d in &draws {
            let p = &d.partitions()[c];
            for j in 1..=k {
                counts[(p.part(j - 1) as i64 - j as i64 - lo) as usize] += 1;
            }
        }
        for (off, &cnt) in counts.iter().enumerate() {
            t.push(vec![
                (spec.l() + c as i64).to_string(),
                (lo + off as i64).to_string(),
                num(cnt as f64 / n as f64),
            ]);
        }
    }
    out.csv("column_measures.csv", &t)?;
    println!(
        "{n} draws (seed {seed}) written to {}",
        out.path("").display()
    );
    Ok(())
}

/// Model, observation point and piecewise data when the boundary is piecewise.
struct Limit {
    model: AsymptoticModel,
    pt: ObservationPoint,
    piecewise: Option<(PiecewiseBoundary, WeightGroups)>,
    slope: u32,
}

fn limit(cfg: &ExperimentConfig) -> Result<Limit, CliError> {
    let (model, pt) = cfg.observation()?;
    let piecewise = match cfg.boundary {
        BoundaryConfig::Piecewise { .. } => {
            let b = cfg.piecewise()?;
            let g = group_weights(&model, &b)?;
            Some((b, g))
        }
        _ => None,
    };
    Ok(Limit {
        model,
        pt,
        piecewise,
        slope: cfg.slope().unwrap_or(1),
    })
}

impl Limit {
    fn density(&self, kappa: f64) -> Result<f64, CliError> {
        Ok(match &self.piecewise {
            Some((b, g)) => density_piecewise(&self.model, self.pt, g, b, kappa)?,
            None => density(&self.model, self.pt, self.slope, kappa)?,
        })
    }

    fn support(&self) -> Result<(f64, f64), CliError> {
        Ok(match &self.piecewise {
            Some((b, g)) => support_piecewise(&self.model, self.pt, g, b)?,
            None => support_bounds(&self.model, self.pt, self.slope)?,
        })
    }
}

fn moments(cfg: &ExperimentConfig) -> Result<(), CliError> {
    let lim = limit(cfg)?;
    let mut t = Table::new(&["k", "value"]);
    for &k in &cfg.task.orders {
        let v = if lim.piecewise.is_some() {
            let (lo, hi) = lim.support()?;
            let failed = std::sync::atomic::AtomicBool::new(false);
            let v = integrate(
                |x| match lim.density(x) {
                    Ok(d) => x.powi(k as i32) * d,
                    Err(_) => {
                        failed.store(true, std::sync::atomic::Ordering::Relaxed);
                        0.0
                    }
                },
                lo,
                hi,
                64,
                1e-8,
            );
            if failed.into_inner() {
                return Err(CliError::Run(format!(
                    "density evaluation failed while integrating order {k}"
                )));
            }
            v
        } else {
            moment(&lim.model, lim.pt, lim.slope, k)?.value
        };
        println!("k = {k}: {}", num(v));
        t.push(vec![k.to_string(), num(v)]);
    }
    out_dir(cfg)?.csv("moments.csv", &t)?;
    Ok(())
}

fn density_grid(cfg: &ExperimentConfig) -> Result<(), CliError> {
    let lim = limit(cfg)?;
    let (lo, hi, n) = match &cfg.task.kappa_grid {
        Some(g) => (g.min, g.max, g.points),
        None => {
            let (a, b) = lim.support()?;
            let pad = 0.05 * (b - a).max(1e-3);
            (a - pad, b + pad, 401)
        }
    };
    let grid: Vec<f64> = (0..n)
        .map(|j| {
            if n == 1 {
                lo
            } else {
                lo + (hi - lo) * j as f64 / (n - 1) as f64
            }
        })
        .collect();
    let values: Vec<Result<f64, CliError>> = grid.par_iter().map(|&k| lim.density(k)).collect();
    let mut t = Table::new(&["kappa", "f"]);
    for (k, v) in grid.iter().zip(values) {
        t.push(vec![num(*k), num(v?)]);
    }
    out_dir(cfg)?.csv("density.csv", &t)?;
    println!("{n} density values written");
    Ok(())
}

fn curve_table(curve: &ParametricCurve) -> Table {
    let mut t = Table::new(&["u", "chi", "kappa", "branch"]);
    for s in &curve.samples {
        t.push(vec![
            num(s.u),
            num(s.chi),
            num(s.kappa),
            s.branch.to_string(),
        ]);
    }
    t
}

fn frozen(cfg: &ExperimentConfig) -> Result<(), CliError> {
    let m = cfg
        .slope()
        .ok_or_else(|| CliError::Config("use frozen-piecewise for a piecewise boundary".into()))?;
    let model = cfg.asymptotic_model()?;
    let sing = singular_parameters(&model, m)?;
    let curve = trace_double_root(
        &model,
        &default_grid(&sing, cfg.task.u_grid_per_interval),
        m,
    )?;
    let out = out_dir(cfg)?;
    out.csv("frozen.csv", &curve_table(&curve))?;
    out.write("frozen.svg", &svg(&[&curve], 600.0, 600.0))?;
    let tangency = if m == 1 {
        tangency_report(&model).ok()
    } else {
        None
    };
    let winding = if m == 1 {
        winding_check(&model, 200, cfg.task.seed.unwrap_or(0)).ok()
    } else {
        None
    };
    let bx = curve.bounding_box();
    let summary = json!({
        "slope": m,
        "samples": curve.samples.len(),
        "branches": curve.branches().len(),
        "singular_parameters": sing,
        "bounding_box": {"chi": [bx.0, bx.1], "kappa": [bx.2, bx.3]},
        "tangency": tangency.map(|t| json!({"chi0": t.chi0, "chi1": t.chi1, "rank": t.rank})),
        "winding": winding.map(|w| json!({"lines": w.lines, "rank": w.rank, "min_finite": w.min_finite, "passed": w.passed})),
    });
    out.json("summary.json", &summary)?;
    if let Some(t) = tangency {
        println!(
            "tangency: {} on chi=0, {} on chi=1, rank {}",
            t.chi0, t.chi1, t.rank
        );
    }
    println!(
        "{} curve samples in {} branches",
        curve.samples.len(),
        curve.branches().len()
    );
    Ok(())
}

/// Smallest distance between samples of two curves.
pub fn curve_distance(a: &ParametricCurve, b: &ParametricCurve) -> f64 {
    a.samples
        .par_iter()
        .map(|p| {
            b.samples
                .iter()
                .map(|q| (p.chi - q.chi).hypot(p.kappa - q.kappa))
                .fold(f64::INFINITY, f64::min)
        })
        .reduce(|| f64::INFINITY, f64::min)
}

fn frozen_piecewise(cfg: &ExperimentConfig) -> Result<(), CliError> {
    let boundary = cfg.piecewise()?;
    let model = cfg.asymptotic_model()?;
    let groups = group_weights(&model, &boundary)?;
    let mut curves = Vec::new();
    let mut t = Table::new(&["t", "chi", "kappa", "component"]);
    let mut comps = Vec::new();
    for i in 0..groups.len() {
        let grid = component_grid(&model, &groups, &boundary, i, cfg.task.u_grid_per_interval)?;
        let c = trace_component(&model, &groups, &boundary, i, &grid)?;
        for s in &c.samples {
            t.push(vec![
                num(s.u),
                num(s.chi),
                num(s.kappa),
                (i + 1).to_string(),
            ]);
        }
        let (predicted, counted) = component_rank(&model, &groups, &boundary, i)?;
        let bx = c.bounding_box();
        comps.push(json!({
            "component": i + 1,
            "weight": groups.weights[i],
            "theta": groups.theta[i],
            "bands": band_measure(&boundary, &groups, i)?.bands,
            "rank": {"predicted": predicted, "counted": counted},
            "bounding_box": {"chi": [bx.0, bx.1], "kappa": [bx.2, bx.3]},
            "samples": c.samples.len(),
        }));
        curves.push(c);
    }
    let mut min_distance = f64::INFINITY;
    for i in 0..curves.len() {
        for j in i + 1..curves.len() {
            min_distance = min_distance.min(curve_distance(&curves[i], &curves[j]));
        }
    }
    let out = out_dir(cfg)?;
    out.csv("frozen_piecewise.csv", &t)?;
    let refs: Vec<&ParametricCurve> = curves.iter().collect();
    out.write("frozen_piecewise.svg", &svg(&refs, 600.0, 600.0))?;
    let summary = json!({
        "rho": groups.rho,
        "groups": comps,
        "min_level_gap": boundary.min_level_gap(),
        "min_component_distance": min_distance.is_finite().then_some(min_distance),
    });
    out.json("summary.json", &summary)?;
    println!(
        "{} components, min distance {}",
        curves.len(),
        num(min_distance)
    );
    Ok(())
}
