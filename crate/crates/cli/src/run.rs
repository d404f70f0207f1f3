//! Command implementations. Grid cells run on the rayon pool and are collected
//! in cell order, so reports do not depend on scheduling.

use std::fmt;
use std::sync::Arc;
use std::time::Instant;

use gtrs_core::constructions::{
    excluded_by_dimension, excluded_by_length, search_cell, self_orthogonality_check,
    witness_space, ConstructionError, ConstructionSpec,
};
use gtrs_core::gf::{Elem, FieldCtx, FieldError};
use gtrs_core::gtrs::{
    gtrs_code, seeded_nonzero, verify_power_sums, verify_rs_duality, verify_square_dual,
    verify_square_span, verify_square_standard, EvalConfig, GtrsError,
};
use gtrs_core::poly::{Poly, PolyError, TwistParams};
use rand::seq::SliceRandom;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rayon::prelude::*;
use serde::Serialize;
use serde_json::{json, Value};

use crate::config::{Grid, RunConfig, Suite, Task};
use crate::report::{Report, ResultRow, Verdict};

#[derive(Debug)]
pub enum CliError {
    Usage(String),
    Construction(ConstructionError),
    Oversize { work: u64, limit: u64 },
    Io(String),
}

impl fmt::Display for CliError {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            CliError::Usage(s) => write!(f, "{s}"),
            CliError::Construction(e) => write!(f, "{e}"),
            CliError::Oversize { work, limit } => {
                write!(
                    f,
                    "grid needs {work} cell evaluations, above the limit of {limit}"
                )
            }
            CliError::Io(s) => write!(f, "i/o: {s}"),
        }
    }
}

impl std::error::Error for CliError {}

impl From<ConstructionError> for CliError {
    fn from(e: ConstructionError) -> Self {
        CliError::Construction(e)
    }
}

impl From<GtrsError> for CliError {
    fn from(e: GtrsError) -> Self {
        CliError::Construction(e.into())
    }
}

impl From<PolyError> for CliError {
    fn from(e: PolyError) -> Self {
        CliError::Construction(e.into())
    }
}

impl From<FieldError> for CliError {
    fn from(e: FieldError) -> Self {
        CliError::Construction(e.into())
    }
}

impl CliError {
    /// Structured form printed on stderr.
    pub fn to_json(&self) -> Value {
        let body = match self {
            CliError::Construction(ConstructionError::Window { inequality, detail }) => {
                json!({"kind": "window", "inequality": inequality, "detail": detail})
            }
            CliError::Construction(ConstructionError::EmptyWindow { q, t, detail }) => {
                json!({"kind": "empty-window", "q": q, "t": t, "detail": detail})
            }
            CliError::Construction(e) => json!({"kind": "invalid", "detail": e.to_string()}),
            CliError::Oversize { work, limit } => {
                json!({"kind": "oversize", "work": work, "limit": limit, "detail": self.to_string()})
            }
            CliError::Usage(s) => json!({"kind": "usage", "detail": s}),
            CliError::Io(s) => json!({"kind": "io", "detail": s}),
        };
        json!({ "error": body })
    }
}

fn value<T: Serialize>(x: &T) -> Value {
    serde_json::to_value(x).expect("report values serialize")
}

fn verdict(ok: bool) -> Verdict {
    if ok {
        Verdict::Pass
    } else {
        Verdict::Fail
    }
}

fn timed<T>(timing: bool, f: impl FnOnce() -> T) -> (T, Option<u64>) {
    let start = Instant::now();
    let out = f();
    (out, timing.then(|| start.elapsed().as_millis() as u64))
}

fn guard(cfg: &RunConfig, work: usize) -> Result<(), CliError> {
    let work = work as u64;
    if work > cfg.max_work {
        return Err(CliError::Oversize {
            work,
            limit: cfg.max_work,
        });
    }
    Ok(())
}

pub fn execute(cfg: &RunConfig, timing: bool) -> Result<Report, CliError> {
    let ctx = FieldCtx::new(cfg.field.clone())?;
    let rows = match &cfg.task {
        Task::Construct { spec, classify } => {
            if spec.field() != &cfg.field {
                return Err(CliError::Usage(
                    "construction field differs from the run field".into(),
                ));
            }
            vec![construct(cfg, spec, *classify, timing)?]
        }
        Task::Verify { suite, grid } => verify(&ctx, cfg, *suite, grid, timing)?,
        Task::Search { grid, keep } => search(&ctx, cfg, grid, *keep, timing)?,
    };
    Ok(Report::new(cfg.clone(), rows))
}

fn construct(
    cfg: &RunConfig,
    spec: &ConstructionSpec,
    classify: bool,
    timing: bool,
) -> Result<ResultRow, CliError> {
    let (out, timing_ms) = timed(timing, || -> Result<(Value, bool, Value), CliError> {
        let c = spec.build()?;
        let n = c.config.len();
        let self_orthogonal = c.gram_is_zero();
        let criterion = if 2 * c.params.k <= n {
            Some(self_orthogonality_check(&c.config, &c.params)?)
        } else {
            None
        };
        let classification = if classify {
            match c.code.classify(&cfg.limits) {
                Ok(cl) => value(&cl),
                Err(e) => json!({ "skipped": e.to_string() }),
            }
        } else {
            Value::Null
        };
        let non_grs = match c.code.non_grs_certificate() {
            Ok(cert) => value(&cert),
            Err(e) => json!({ "skipped": e.to_string() }),
        };
        let params = json!({
            "which": value(spec)["which"],
            "q": c.ctx().order(),
            "n": n,
            "k": c.params.k,
            "t": c.params.t,
            "h": c.params.h,
            "eta": c.params.eta.index(),
        });
        let certificate = json!({
            "self_orthogonal": self_orthogonal,
            "gram_digest": c.generator.gram().digest(),
            "regime": c.regime,
            "witness": c.witness.terms(),
            "criterion": criterion,
            "classification": classification,
            "non_grs": non_grs,
            "evaluation": c.config.record(),
            "code": c.code.record(),
        });
        Ok((params, self_orthogonal, certificate))
    });
    let (params, ok, certificate) = out?;
    Ok(ResultRow {
        params,
        verdict: verdict(ok),
        certificate,
        timing_ms,
    })
}

/// The whole field in canonical order when `n = q`, otherwise a seeded subset, sorted.
pub fn point_set(ctx: &FieldCtx, seed: u64, n: usize) -> Vec<Elem> {
    let mut pts: Vec<Elem> = ctx.elements().collect();
    if n < pts.len() {
        let mut rng = ChaCha8Rng::seed_from_u64(seed ^ n as u64);
        pts.shuffle(&mut rng);
        pts.truncate(n);
        pts.sort();
    }
    pts
}

fn indices(v: &[Elem]) -> Vec<u32> {
    v.iter().map(|e| e.index()).collect()
}

fn verify(
    ctx: &Arc<FieldCtx>,
    cfg: &RunConfig,
    suite: Suite,
    grid: &Grid,
    timing: bool,
) -> Result<Vec<ResultRow>, CliError> {
    let q = ctx.order() as usize;
    match suite {
        Suite::L31 | Suite::L32 | Suite::L34 => {
            let etas = seeded_nonzero(ctx, cfg.seed, grid.etas.max(1));
            let lengths = if suite == Suite::L31 && !grid.n.is_empty() {
                grid.n.clone()
            } else {
                vec![q]
            };
            let mut jobs = Vec::new();
            for &n in &lengths {
                if n > q {
                    return Err(CliError::Usage(format!("length {n} exceeds q = {q}")));
                }
                let points = point_set(ctx, cfg.seed, n);
                for (k, t, h) in grid
                    .twist_cells(q)
                    .into_iter()
                    .filter(|&(k, t, _)| k + t <= n)
                {
                    for &eta in &etas {
                        jobs.push((points.clone(), TwistParams::new(k, t, h, eta)?));
                    }
                }
            }
            guard(cfg, jobs.len())?;
            jobs.par_iter()
                .map(|(points, p)| {
                    let (report, timing_ms) = timed(timing, || match suite {
                        Suite::L31 => verify_square_span(&EvalConfig::unit(ctx, points.clone())?, p),
                        Suite::L32 => verify_square_standard(ctx, p),
                        _ => verify_square_dual(ctx, p),
                    });
                    let report = report?;
                    let mut params = json!({
                        "q": q, "n": points.len(), "k": p.k, "t": p.t, "h": p.h, "eta": p.eta.index(),
                    });
                    if points.len() < q {
                        params["points"] = value(&indices(points));
                    }
                    Ok(ResultRow {
                        params,
                        verdict: verdict(report.verdict),
                        certificate: value(&report),
                        timing_ms,
                    })
                })
                .collect()
        }
        Suite::PowerSum => {
            let ls: Vec<usize> = (1..q - 1).filter(|&l| Grid::allows(&grid.l, l)).collect();
            guard(cfg, ls.len())?;
            ls.par_iter()
                .map(|&l| {
                    let (report, timing_ms) = timed(timing, || verify_power_sums(ctx, l));
                    let report = report?;
                    Ok(ResultRow {
                        params: json!({ "q": q, "l": l }),
                        verdict: verdict(report.verdict),
                        certificate: value(&report),
                        timing_ms,
                    })
                })
                .collect()
        }
        Suite::RsDual => {
            let ks: Vec<usize> = (1..q).filter(|&k| Grid::allows(&grid.k, k)).collect();
            guard(cfg, ks.len())?;
            ks.par_iter()
                .map(|&k| {
                    let (report, timing_ms) = timed(timing, || verify_rs_duality(ctx, k));
                    let report = report?;
                    Ok(ResultRow {
                        params: json!({ "q": q, "k": k }),
                        verdict: verdict(report.verdict),
                        certificate: value(&report),
                        timing_ms,
                    })
                })
                .collect()
        }
        Suite::Oracle => oracle(ctx, cfg, grid, timing),
    }
}

struct Instance {
    config: EvalConfig,
    params: TwistParams,
    source: &'static str,
}

/// Random `(points, v, eta)` instances with `2k <= n`; every other instance takes
/// its multipliers from a sampled witness so both verdicts occur.
fn oracle_instances(
    ctx: &Arc<FieldCtx>,
    cfg: &RunConfig,
    grid: &Grid,
) -> Result<Vec<Instance>, CliError> {
    let q = ctx.order() as usize;
    let cells: Vec<(usize, usize, usize, Vec<usize>)> = grid
        .twist_cells(q)
        .into_iter()
        .filter_map(|(k, t, h)| {
            let ns: Vec<usize> = (2 * k..=q).filter(|&n| Grid::allows(&grid.n, n)).collect();
            (!ns.is_empty()).then_some((k, t, h, ns))
        })
        .collect();
    if cells.is_empty() {
        return Err(CliError::Usage(
            "no admissible (k, t, h, n) cell in the grid".into(),
        ));
    }
    let mut rng = ChaCha8Rng::seed_from_u64(cfg.seed);
    let mut out = Vec::with_capacity(grid.samples);
    for i in 0..grid.samples {
        let (k, t, h, ns) = cells.choose(&mut rng).expect("cells are nonempty");
        let n = *ns.choose(&mut rng).expect("lengths are nonempty");
        let eta = Elem(rng.gen_range(1..q as u32));
        let params = TwistParams::new(*k, *t, *h, eta)?;
        let mut points: Vec<Elem> = ctx.elements().collect();
        points.shuffle(&mut rng);
        points.truncate(n);
        let random = |rng: &mut ChaCha8Rng| -> Vec<Elem> {
            (0..n).map(|_| Elem(rng.gen_range(1..q as u32))).collect()
        };
        let (v, source) = if i % 2 == 0 {
            (random(&mut rng), "random")
        } else {
            let space = witness_space(ctx, &points, &params)?;
            let pick = (0..64).find_map(|_| {
                let g = space.iter().fold(Poly::zero(ctx), |acc, b| {
                    acc.add(&b.scale(Elem(rng.gen_range(0..q as u32))))
                        .expect("same field")
                });
                points
                    .iter()
                    .map(|&a| {
                        Some(g.eval(a))
                            .filter(|y| !y.is_zero())
                            .and_then(|y| ctx.sqrt(y))
                    })
                    .collect::<Option<Vec<Elem>>>()
            });
            match pick {
                Some(v) => (v, "witness"),
                None => (random(&mut rng), "random"),
            }
        };
        out.push(Instance {
            config: EvalConfig::new(ctx, points, v)?,
            params,
            source,
        });
    }
    Ok(out)
}

fn oracle(
    ctx: &Arc<FieldCtx>,
    cfg: &RunConfig,
    grid: &Grid,
    timing: bool,
) -> Result<Vec<ResultRow>, CliError> {
    guard(cfg, grid.samples)?;
    let instances = oracle_instances(ctx, cfg, grid)?;
    let q = ctx.order();
    instances
        .par_iter()
        .map(|inst| {
            let (out, timing_ms) = timed(timing, || -> Result<_, CliError> {
                let w = self_orthogonality_check(&inst.config, &inst.params)?;
                let direct = gtrs_code(&inst.config, &inst.params)?.is_self_orthogonal();
                Ok((w, direct))
            });
            let (w, direct) = out?;
            let p = &inst.params;
            Ok(ResultRow {
                params: json!({
                    "q": q,
                    "n": inst.config.len(),
                    "k": p.k,
                    "t": p.t,
                    "h": p.h,
                    "eta": p.eta.index(),
                    "points": indices(inst.config.points()),
                    "multipliers": indices(inst.config.multipliers()),
                    "source": inst.source,
                }),
                verdict: verdict(w.is_feasible() == direct && w.validated),
                certificate: json!({ "criterion": value(&w), "gram_zero": direct }),
                timing_ms,
            })
        })
        .collect()
}

/// A cell fails only when a length or dimension bound predicts no self-orthogonal code and the
/// search finds one anyway.
fn search(
    ctx: &Arc<FieldCtx>,
    cfg: &RunConfig,
    grid: &Grid,
    keep: usize,
    timing: bool,
) -> Result<Vec<ResultRow>, CliError> {
    let q = ctx.order() as usize;
    let lengths = if grid.n.is_empty() {
        vec![q]
    } else {
        grid.n.clone()
    };
    let mut cells = Vec::new();
    for &n in &lengths {
        if n > q {
            return Err(CliError::Usage(format!("length {n} exceeds q = {q}")));
        }
        for (k, t, h) in grid
            .twist_cells(q)
            .into_iter()
            .filter(|&(k, _, _)| 2 * k <= n)
        {
            cells.push((n, k, t, h));
        }
    }
    guard(cfg, cells.len().saturating_mul(grid.samples.max(1)))?;
    cells
        .par_iter()
        .enumerate()
        .map(|(i, &(n, k, t, h))| {
            let seed = cfg.seed.wrapping_add(i as u64);
            let (out, timing_ms) = timed(timing, || {
                search_cell(ctx, n, k, t, h, grid.samples, seed, keep)
            });
            let out = out?;
            let predicted_none =
                excluded_by_dimension(q as u32, k, t) || excluded_by_length(q as u32, n, k, t, h);
            Ok(ResultRow {
                params: json!({
                    "q": q, "n": n, "k": k, "t": t, "h": h, "samples": grid.samples, "seed": seed,
                }),
                verdict: verdict(!(predicted_none && out.found > 0)),
                certificate: value(&out),
                timing_ms,
            })
        })
        .collect()
}
