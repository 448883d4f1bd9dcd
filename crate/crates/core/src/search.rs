//! Extremal search over generator configurations.
//!
//! Objectives are maxima of finitely many smooth pieces (for the
//! circumradius: one piece `|Σ ε_i p_i|` per sign vector) or a single smooth
//! function. Each iteration collects the pieces within a relative tolerance
//! `δ` of the maximum, steps against the minimum-norm element of the convex
//! hull of their gradients, and renormalizes the constraint. The trial step
//! follows the schedule `a / (1 + iter / b)` and is halved until the exact
//! objective decreases; when no decrease is found `δ` shrinks. Restarts are
//! independent and reduced by `(value, restart index)`.

use std::fmt::Write as _;
use std::fs;
use std::path::Path;

use serde::{Deserialize, Serialize};

use crate::error::{out_of_range, Result, ZonoError};
use crate::functionals::{intrinsic_volume, mean_width_factor};
use crate::geometry::{dot, norm, orthogonal_complement_normal};
use crate::inequalities::power2_ratio;
use crate::par::map_blocks;
use crate::radii::{circumradius, inradius, near_maximal_sign_vectors, support_unchecked, RadiusCertificate, SignVector};
use crate::subsets::for_each_subset;
use crate::rng::{self, gaussian_vector, StreamRng, RNG_VERSION};
use crate::zonotope::{check_unit, make_cube, make_regular_rhombic_dodecahedron, regular_simplex_vertices, GeneratorSet};

pub const CONFIG_SCHEMA_VERSION: u32 = 1;
/// Largest `n` for circumradius objectives (exact inner maximization).
pub const SEARCH_SIGN_N_LIMIT: usize = 20;
const INITIAL_ACTIVE_TOL: f64 = 1e-2;
const MIN_ACTIVE_TOL: f64 = 1e-13;
const MAX_HALVINGS: usize = 50;
const FD_REL_STEP: f64 = 1e-6;
const ARMIJO: f64 = 1e-4;

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "kebab-case", deny_unknown_fields)]
pub enum Objective {
    /// `M^p` polarization of unit generators; only `p = 1` is searched.
    Polarization { p: f64 },
    Circumradius,
    IntrinsicVolume { k: usize },
    /// `V_{k,2}^m / V_{m,2}^k`.
    PowerRatio { k: usize, m: usize },
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum Constraint {
    UnitGenerators,
    FixedMeanWidth,
    FixedVolume,
    FixedInradius,
    /// `Σ p_i = o`; only meaningful for scale-invariant objectives.
    Centered,
    CenteredFixedMeanWidth,
}

#[derive(Debug, Clone, Copy, Default, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum Sense {
    #[default]
    Minimize,
    Maximize,
}

/// Trial step `a / (1 + iter / b)`, relative to the generator scale.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct StepSchedule {
    pub a: f64,
    pub b: f64,
}

impl Default for StepSchedule {
    fn default() -> Self {
        Self { a: 0.1, b: 50.0 }
    }
}

impl StepSchedule {
    pub fn at(&self, iter: usize) -> f64 {
        self.a / (1.0 + iter as f64 / self.b)
    }
}

fn default_restarts() -> usize {
    32
}

fn default_max_iters() -> usize {
    400
}

fn default_schema() -> u32 {
    CONFIG_SCHEMA_VERSION
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct SearchConfig {
    #[serde(default = "default_schema")]
    pub schema_version: u32,
    pub objective: Objective,
    pub constraint: Constraint,
    #[serde(default)]
    pub sense: Sense,
    pub n: usize,
    pub d: usize,
    #[serde(default = "default_restarts")]
    pub restarts: usize,
    #[serde(default = "default_max_iters")]
    pub max_iters: usize,
    #[serde(default)]
    pub step: StepSchedule,
    /// Constrained value (mean width, volume or inradius). Defaults to the
    /// value of the unit-edge cube (`n = d`) or regular rhombic dodecahedron
    /// (`n = d + 1`); otherwise mean width of `n` unit generators, or 1.
    #[serde(default)]
    pub target: Option<f64>,
    #[serde(default)]
    pub seed: Option<u64>,
}

impl SearchConfig {
    pub fn new(objective: Objective, constraint: Constraint, n: usize, d: usize) -> Self {
        Self {
            schema_version: CONFIG_SCHEMA_VERSION,
            objective,
            constraint,
            sense: Sense::Minimize,
            n,
            d,
            restarts: default_restarts(),
            max_iters: default_max_iters(),
            step: StepSchedule::default(),
            target: None,
            seed: None,
        }
    }

    pub fn polarization(n: usize, d: usize) -> Self {
        Self::new(Objective::Polarization { p: 1.0 }, Constraint::UnitGenerators, n, d)
    }

    pub fn with_seed(mut self, seed: u64) -> Self {
        self.seed = Some(seed);
        self
    }

    pub fn validate(&self) -> Result<()> {
        if self.schema_version != CONFIG_SCHEMA_VERSION {
            return Err(ZonoError::InvalidInput(format!(
                "unsupported schema_version {} (expected {CONFIG_SCHEMA_VERSION})",
                self.schema_version
            )));
        }
        let (n, d) = (self.n, self.d);
        if d < 2 {
            return Err(out_of_range("d", d, ">= 2"));
        }
        if n < d {
            return Err(out_of_range("n", n, format!(">= d = {d}")));
        }
        if self.restarts == 0 {
            return Err(out_of_range("restarts", self.restarts, ">= 1"));
        }
        if self.max_iters == 0 {
            return Err(out_of_range("max_iters", self.max_iters, ">= 1"));
        }
        if !(self.step.a > 0.0 && self.step.b > 0.0 && self.step.a.is_finite() && self.step.b.is_finite()) {
            return Err(ZonoError::InvalidInput("step schedule needs a > 0 and b > 0".into()));
        }
        if let Some(t) = self.target {
            if !(t > 0.0 && t.is_finite()) {
                return Err(out_of_range("target", t, "> 0"));
            }
        }
        match self.objective {
            Objective::Polarization { p } => {
                if p != 1.0 {
                    return Err(ZonoError::InvalidInput(format!(
                        "polarization search supports p = 1 only (got {p}); use polarization_value for other p"
                    )));
                }
                if self.constraint != Constraint::UnitGenerators {
                    return Err(ZonoError::InvalidInput("polarization requires constraint unit-generators".into()));
                }
            }
            Objective::IntrinsicVolume { k } if k == 0 || k > d => return Err(out_of_range("k", k, format!("1..={d}"))),
            Objective::PowerRatio { k, m } if k == 0 || k >= m || m > d => {
                return Err(out_of_range("(k, m)", format!("({k}, {m})"), format!("1 <= k < m <= {d}")))
            }
            _ => {}
        }
        if matches!(self.objective, Objective::Polarization { .. } | Objective::Circumradius) && n > SEARCH_SIGN_N_LIMIT {
            return Err(out_of_range("n", n, format!("<= {SEARCH_SIGN_N_LIMIT} for circumradius objectives")));
        }
        let scale_free = matches!(self.objective, Objective::PowerRatio { .. });
        if self.constraint == Constraint::Centered && !scale_free {
            return Err(ZonoError::InvalidInput(
                "constraint centered fixes no scale; combine it with a scale-invariant objective or use centered-fixed-mean-width".into(),
            ));
        }
        Ok(())
    }

    fn resolved_target(&self) -> Result<f64> {
        if let Some(t) = self.target {
            return Ok(t);
        }
        let reference = reference_body(self.n, self.d)?;
        Ok(match self.constraint {
            Constraint::FixedMeanWidth | Constraint::CenteredFixedMeanWidth => mean_width_factor(self.d) * self.n as f64,
            Constraint::FixedVolume => match &reference {
                Some(r) => intrinsic_volume(r, self.d)?,
                None => 1.0,
            },
            Constraint::FixedInradius => match &reference {
                Some(r) => inradius(r)?.value,
                None => 1.0,
            },
            Constraint::UnitGenerators | Constraint::Centered => 1.0,
        })
    }
}

/// Unit-edge cube for `n = d`, unit-edge regular rhombic dodecahedron for
/// `n = d + 1`.
fn reference_body(n: usize, d: usize) -> Result<Option<GeneratorSet>> {
    Ok(if n == d {
        Some(make_cube(d, 1.0)?)
    } else if n == d + 1 {
        Some(make_regular_rhombic_dodecahedron(d, 1.0)?)
    } else {
        None
    })
}

/// Maps a configuration onto the constraint set; `None` when the
/// configuration is degenerate for it.
pub fn normalize(gs: &GeneratorSet, constraint: Constraint, target: f64) -> Option<GeneratorSet> {
    let centered = |gs: &GeneratorSet| {
        let n = gs.len() as f64;
        let mean: Vec<f64> = (0..gs.dim()).map(|j| gs.generators().iter().map(|g| g[j]).sum::<f64>() / n).collect();
        gs.map_generators(|g| g.iter().zip(&mean).map(|(x, m)| x - m).collect())
    };
    let by_width = |gs: &GeneratorSet| {
        let w = mean_width_factor(gs.dim()) * gs.norms().iter().sum::<f64>();
        (w > 1e-300).then(|| gs.scaled(target / w))
    };
    let out = match constraint {
        Constraint::UnitGenerators => {
            if gs.norms().iter().any(|&x| x < 1e-12) {
                return None;
            }
            gs.map_generators(|g| {
                let r = norm(g);
                g.iter().map(|x| x / r).collect()
            })
        }
        Constraint::FixedMeanWidth => by_width(gs)?,
        Constraint::CenteredFixedMeanWidth => by_width(&centered(gs))?,
        Constraint::Centered => centered(gs),
        Constraint::FixedVolume => {
            let d = gs.dim();
            let v = intrinsic_volume(gs, d).ok()?;
            let size = gs.norms().iter().sum::<f64>() / gs.len() as f64;
            if v.is_nan() || v <= 1e-10 * size.powi(d as i32) {
                return None;
            }
            gs.scaled((target / v).powf(1.0 / d as f64))
        }
        Constraint::FixedInradius => {
            let r = inradius(gs).ok()?.value;
            let size = gs.norms().iter().sum::<f64>() / gs.len() as f64;
            if r.is_nan() || r <= 1e-10 * size {
                return None;
            }
            gs.scaled(target / r)
        }
    };
    out.generators().iter().flatten().all(|x| x.is_finite()).then_some(out)
}

/// Exact value of `objective` at `gs` (no normalization).
pub fn evaluate_objective(objective: Objective, gs: &GeneratorSet) -> Result<f64> {
    match objective {
        Objective::Polarization { p } => polarization_value(gs, p).map(|v| v.value),
        Objective::Circumradius => Ok(circumradius(gs)?.value),
        Objective::IntrinsicVolume { k } => intrinsic_volume(gs, k),
        Objective::PowerRatio { k, m } => power2_ratio(gs, k, m),
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct PolarizationValue {
    pub value: f64,
    pub p: f64,
    /// `true` for `p = 1` (exact sign enumeration), `false` for the
    /// grid-and-ascent estimate.
    pub exact: bool,
    pub method: String,
}

/// `max_{u ∈ S^{d-1}} Σ |⟨p_i, u⟩|^p` for unit generators. For `p = 1` this is
/// `2 cirr`. Otherwise a dense direction set (an angular grid for `d = 2`,
/// 20 000 fixed pseudo-random directions for `d ≥ 3`) is refined by
/// projected gradient ascent from its 8 best points.
pub fn polarization_value(gs: &GeneratorSet, p: f64) -> Result<PolarizationValue> {
    let d = gs.dim();
    for g in gs.generators() {
        check_unit(g, d)?;
    }
    if !(p > 0.0 && p.is_finite()) {
        return Err(out_of_range("p", p, "> 0"));
    }
    if p == 1.0 {
        return Ok(PolarizationValue {
            value: 2.0 * circumradius(gs)?.value,
            p,
            exact: true,
            method: "exact:2*circumradius".into(),
        });
    }
    let f = |u: &[f64]| gs.generators().iter().map(|g| dot(g, u).abs().powf(p)).sum::<f64>();
    let dirs: Vec<Vec<f64>> = if d == 2 {
        (0..7200).map(|i| {
            let a = std::f64::consts::PI * i as f64 / 7200.0;
            vec![a.cos(), a.sin()]
        })
        .collect()
    } else {
        let mut r = rng::stream(0, 0);
        (0..20_000).map(|_| rng::unit_vector(&mut r, d)).collect()
    };
    let mut scored: Vec<(f64, usize)> = dirs.iter().enumerate().map(|(i, u)| (f(u), i)).collect();
    scored.sort_by(|a, b| b.0.total_cmp(&a.0).then(a.1.cmp(&b.1)));
    let mut best = scored[0].0;
    for &(_, i) in scored.iter().take(8) {
        let mut u = dirs[i].clone();
        let mut val = f(&u);
        let mut step = 1e-2;
        while step > 1e-12 {
            let grad: Vec<f64> = (0..d)
                .map(|j| {
                    gs.generators()
                        .iter()
                        .map(|g| {
                            let t = dot(g, &u);
                            if t == 0.0 {
                                0.0
                            } else {
                                p * t.abs().powf(p - 1.0) * t.signum() * g[j]
                            }
                        })
                        .sum::<f64>()
                })
                .collect();
            let c = dot(&grad, &u);
            let tangent: Vec<f64> = grad.iter().zip(&u).map(|(g, x)| g - c * x).collect();
            let tn = norm(&tangent);
            if tn < 1e-14 {
                break;
            }
            let cand: Vec<f64> = u.iter().zip(&tangent).map(|(x, t)| x + step * t / tn).collect();
            let cn = norm(&cand);
            let cand: Vec<f64> = cand.iter().map(|x| x / cn).collect();
            let cv = f(&cand);
            if cv > val {
                u = cand;
                val = cv;
                step *= 1.5;
            } else {
                step *= 0.5;
            }
        }
        best = best.max(val);
    }
    Ok(PolarizationValue {
        value: best,
        p,
        exact: false,
        method: "numerical:grid+ascent".into(),
    })
}

/// One iteration of one restart.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct TraceRow {
    pub restart: usize,
    pub iter: usize,
    pub value: f64,
    pub step: f64,
    pub active: usize,
    pub active_tol: f64,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct RestartSummary {
    pub restart: usize,
    pub best_value: f64,
    pub iterations: usize,
    pub accepted_steps: usize,
    pub rejected_initializations: usize,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct SearchOutcome {
    pub config: SearchConfig,
    pub seed: u64,
    pub rng_version: String,
    pub best: GeneratorSet,
    /// Objective at `best`, in the objective's own sign.
    pub objective_value: f64,
    pub best_restart: usize,
    pub target: f64,
    pub certificate: Option<RadiusCertificate>,
    pub restarts: Vec<RestartSummary>,
    #[serde(skip)]
    pub trace: Vec<TraceRow>,
}

impl SearchOutcome {
    pub fn trace_csv(&self) -> String {
        let mut out = String::from("restart,iter,value,step,active,active_tol\n");
        for r in &self.trace {
            let _ = writeln!(out, "{},{},{:e},{:e},{},{:e}", r.restart, r.iter, r.value, r.step, r.active, r.active_tol);
        }
        out
    }

    pub fn to_json(&self) -> String {
        serde_json::to_string_pretty(self).expect("outcome serializes")
    }

    /// Writes `config.json`, `outcome.json` and `trace.csv` into `dir`.
    pub fn write_run_dir(&self, dir: &Path) -> std::io::Result<()> {
        fs::create_dir_all(dir)?;
        let mut config = self.config.clone();
        config.seed = Some(self.seed);
        fs::write(dir.join("config.json"), serde_json::to_string_pretty(&config).expect("config serializes") + "\n")?;
        fs::write(dir.join("outcome.json"), self.to_json() + "\n")?;
        fs::write(dir.join("trace.csv"), self.trace_csv())
    }
}

struct Problem {
    objective: Objective,
    constraint: Constraint,
    target: f64,
    /// `+1` to minimize, `-1` to maximize.
    sign: f64,
}

impl Problem {
    fn normalize(&self, gs: &GeneratorSet) -> Option<GeneratorSet> {
        normalize(gs, self.constraint, self.target)
    }

    fn is_piecewise(&self) -> bool {
        matches!(self.objective, Objective::Polarization { .. } | Objective::Circumradius) || self.facet_pieces()
    }

    /// Minimizing `V_k` at fixed inradius: the normalized objective is
    /// `V_k · (target / h_F)^k` maximized over facet normals `F`.
    fn facet_pieces(&self) -> bool {
        self.constraint == Constraint::FixedInradius
            && self.sign > 0.0
            && matches!(self.objective, Objective::IntrinsicVolume { .. })
    }

    fn piece_scale(&self) -> f64 {
        match self.objective {
            Objective::Polarization { .. } => 1.0,
            _ => 0.5,
        }
    }

    /// Minimized quantity at a feasible point.
    fn value(&self, gs: &GeneratorSet) -> Result<f64> {
        Ok(self.sign * evaluate_objective(self.objective, gs)?)
    }

    /// Minimized quantity after normalization, `None` if infeasible.
    fn composite(&self, x: &[f64], d: usize) -> Option<f64> {
        let gs = self.normalize(&unflatten(x, d))?;
        self.value(&gs).ok()
    }

    fn piece_composite(&self, x: &[f64], d: usize, signs: &SignVector) -> Option<f64> {
        let gs = self.normalize(&unflatten(x, d))?;
        Some(self.sign * self.piece_scale() * norm(&signs.signed_sum(&gs)))
    }

    /// Gradients of the pieces within `tol` of the maximum, at a feasible
    /// point.
    fn active_gradients(&self, gs: &GeneratorSet, tol: f64) -> Result<Vec<Vec<f64>>> {
        let d = gs.dim();
        let x = flatten(gs);
        if !self.is_piecewise() {
            return Ok(vec![fd_gradient(&x, |y| self.composite(y, d))]);
        }
        if self.facet_pieces() {
            return Ok(self.active_facet_gradients(gs, tol));
        }
        let witnesses = near_maximal_sign_vectors(gs, tol)?;
        Ok(witnesses
            .iter()
            .map(|s| {
                if self.constraint == Constraint::UnitGenerators {
                    unit_piece_gradient(gs, s, self.sign * self.piece_scale())
                } else {
                    fd_gradient(&x, |y| self.piece_composite(y, d, s))
                }
            })
            .collect())
    }
}

fn facet_support(gs: &GeneratorSet, subset: &[usize]) -> Option<f64> {
    let vs: Vec<&[f64]> = subset.iter().map(|&i| gs.generator(i)).collect();
    let u = orthogonal_complement_normal(&vs, gs.dim()).ok().flatten()?;
    Some(support_unchecked(gs, &u))
}

impl Problem {
    fn active_facet_gradients(&self, gs: &GeneratorSet, tol: f64) -> Vec<Vec<f64>> {
        let Objective::IntrinsicVolume { k } = self.objective else {
            unreachable!("facet pieces need an intrinsic volume objective")
        };
        let d = gs.dim();
        let mut facets = Vec::new();
        for_each_subset(gs.len(), d - 1, |s| {
            if let Some(h) = facet_support(gs, s) {
                facets.push((h, s.to_vec()));
            }
        });
        let min_h = facets.iter().map(|f| f.0).fold(f64::INFINITY, f64::min);
        let x = flatten(gs);
        facets
            .iter()
            .filter(|(h, _)| *h <= min_h * (1.0 + tol))
            .map(|(_, s)| {
                fd_gradient(&x, |y| {
                    let g = unflatten(y, d);
                    let h = facet_support(&g, s)?;
                    let v = intrinsic_volume(&g, k).ok()?;
                    Some(v * (self.target / h).powi(k as i32))
                })
            })
            .collect()
    }
}

fn flatten(gs: &GeneratorSet) -> Vec<f64> {
    gs.generators().concat()
}

fn unflatten(x: &[f64], d: usize) -> GeneratorSet {
    GeneratorSet::new(d, x.chunks(d).map(<[f64]>::to_vec).collect()).expect("d divides the length")
}

/// Gradient of `c |Σ ε_i x_i|` with each block projected to the tangent
/// space of the unit sphere at `x_i`.
fn unit_piece_gradient(gs: &GeneratorSet, signs: &SignVector, c: f64) -> Vec<f64> {
    let s = signs.signed_sum(gs);
    let sn = norm(&s);
    let mut out = Vec::with_capacity(gs.len() * gs.dim());
    for (x, &e) in gs.generators().iter().zip(&signs.0) {
        let g: Vec<f64> = s.iter().map(|v| c * e as f64 * v / sn.max(1e-300)).collect();
        let t = dot(&g, x);
        out.extend(g.iter().zip(x).map(|(gi, xi)| gi - t * xi));
    }
    out
}

/// Central differences with step `1e-6` relative to the coordinate scale.
/// Coordinates whose perturbation is infeasible get a zero component.
fn fd_gradient(x: &[f64], f: impl Fn(&[f64]) -> Option<f64>) -> Vec<f64> {
    let scale = (x.iter().map(|v| v * v).sum::<f64>() / x.len() as f64).sqrt().max(1e-12);
    let h = FD_REL_STEP * scale;
    let mut y = x.to_vec();
    (0..x.len())
        .map(|i| {
            y[i] = x[i] + h;
            let up = f(&y);
            y[i] = x[i] - h;
            let down = f(&y);
            y[i] = x[i];
            match (up, down) {
                (Some(a), Some(b)) => (a - b) / (2.0 * h),
                _ => 0.0,
            }
        })
        .collect()
}

/// Minimum-norm point of the convex hull of `vs`, by accelerated projected
/// gradient on the simplex of weights.
pub fn min_norm_in_hull(vs: &[Vec<f64>]) -> Vec<f64> {
    let m = vs.len();
    if m == 1 {
        return vs[0].clone();
    }
    let gram: Vec<f64> = (0..m).flat_map(|i| (0..m).map(move |j| (i, j))).map(|(i, j)| dot(&vs[i], &vs[j])).collect();
    let lip = (0..m).map(|i| gram[i * m + i]).sum::<f64>().max(1e-300);
    let mut w = vec![1.0 / m as f64; m];
    let mut z = w.clone();
    let mut t = 1.0f64;
    for _ in 0..2000 {
        let grad: Vec<f64> = (0..m).map(|i| (0..m).map(|j| gram[i * m + j] * z[j]).sum()).collect();
        let step: Vec<f64> = z.iter().zip(&grad).map(|(zi, gi)| zi - gi / lip).collect();
        let next = project_simplex(&step);
        let t_next = 0.5 * (1.0 + (1.0 + 4.0 * t * t).sqrt());
        let mom = (t - 1.0) / t_next;
        z = next.iter().zip(&w).map(|(a, b)| a + mom * (a - b)).collect();
        let change: f64 = next.iter().zip(&w).map(|(a, b)| (a - b).abs()).sum();
        w = next;
        t = t_next;
        if change < 1e-15 {
            break;
        }
    }
    let dim = vs[0].len();
    (0..dim).map(|k| vs.iter().zip(&w).map(|(v, wi)| wi * v[k]).sum()).collect()
}

fn project_simplex(v: &[f64]) -> Vec<f64> {
    let mut u = v.to_vec();
    u.sort_by(|a, b| b.total_cmp(a));
    let mut css = 0.0;
    let mut theta = 0.0;
    for (i, ui) in u.iter().enumerate() {
        css += ui;
        let t = (css - 1.0) / (i + 1) as f64;
        if ui - t > 0.0 {
            theta = t;
        }
    }
    v.iter().map(|x| (x - theta).max(0.0)).collect()
}

struct RestartResult {
    best: GeneratorSet,
    value: f64,
    summary: RestartSummary,
    trace: Vec<TraceRow>,
}

fn initial_point(problem: &Problem, rng: &mut StreamRng, n: usize, d: usize) -> Result<(GeneratorSet, usize)> {
    for rejected in 0..1000 {
        let gs = GeneratorSet::new(d, (0..n).map(|_| gaussian_vector(rng, d)).collect())?;
        if let Some(x) = problem.normalize(&gs) {
            if problem.value(&x).is_ok() {
                return Ok((x, rejected));
            }
        }
    }
    Err(ZonoError::Numerical("could not sample a feasible starting configuration".into()))
}

fn run_restart(problem: &Problem, config: &SearchConfig, seed: u64, restart: usize) -> Result<RestartResult> {
    let (n, d) = (config.n, config.d);
    let mut rng = rng::stream(seed, restart as u64);
    let (mut x, rejected_initializations) = initial_point(problem, &mut rng, n, d)?;
    let mut fx = problem.value(&x)?;
    let mut tol = INITIAL_ACTIVE_TOL;
    let mut trace = Vec::new();
    let mut accepted = 0;
    let mut iterations = 0;
    for iter in 0..config.max_iters {
        iterations = iter + 1;
        let grads = problem.active_gradients(&x, tol)?;
        let dir = min_norm_in_hull(&grads);
        let dn = norm(&dir);
        let scale = (x.norms().iter().map(|v| v * v).sum::<f64>() / n as f64).sqrt();
        let mut step = config.step.at(iter) * scale;
        let mut moved = false;
        if dn > 1e-14 * scale {
            let flat = flatten(&x);
            for _ in 0..MAX_HALVINGS {
                let y: Vec<f64> = flat.iter().zip(&dir).map(|(a, g)| a - step * g / dn).collect();
                if let Some(cand) = problem.normalize(&unflatten(&y, d)) {
                    if let Ok(fy) = problem.value(&cand) {
                        if fy < fx - ARMIJO * step * dn {
                            x = cand;
                            fx = fy;
                            moved = true;
                            break;
                        }
                    }
                }
                step *= 0.5;
            }
        }
        trace.push(TraceRow {
            restart,
            iter,
            value: problem.sign * fx,
            step: if moved { step } else { 0.0 },
            active: grads.len(),
            active_tol: tol,
        });
        if moved {
            accepted += 1;
        } else {
            tol *= 0.1;
            if tol < MIN_ACTIVE_TOL || !problem.is_piecewise() && dn <= 1e-14 * scale {
                break;
            }
        }
    }
    Ok(RestartResult {
        value: fx,
        summary: RestartSummary {
            restart,
            best_value: problem.sign * fx,
            iterations,
            accepted_steps: accepted,
            rejected_initializations,
        },
        best: x,
        trace,
    })
}

/// Multi-restart constrained minimization (or maximization, per
/// `config.sense`). Requires `config.seed`.
pub fn constrained_minimize(config: &SearchConfig) -> Result<SearchOutcome> {
    config.validate()?;
    let seed = config
        .seed
        .ok_or_else(|| ZonoError::InvalidInput("search needs an explicit seed".into()))?;
    let target = config.resolved_target()?;
    let problem = Problem {
        objective: config.objective,
        constraint: config.constraint,
        target,
        sign: match config.sense {
            Sense::Minimize => 1.0,
            Sense::Maximize => -1.0,
        },
    };
    let results = map_blocks(config.restarts, |r| run_restart(&problem, config, seed, r));
    let mut results: Vec<RestartResult> = results.into_iter().collect::<Result<_>>()?;
    let best_idx = (0..results.len())
        .min_by(|&a, &b| results[a].value.total_cmp(&results[b].value).then(a.cmp(&b)))
        .expect("at least one restart");
    let restarts = results.iter().map(|r| r.summary.clone()).collect();
    let trace = results.iter_mut().flat_map(|r| std::mem::take(&mut r.trace)).collect();
    let best = results.swap_remove(best_idx).best;
    let objective_value = evaluate_objective(config.objective, &best)?;
    let certificate = match config.objective {
        Objective::Polarization { .. } | Objective::Circumradius => Some(circumradius(&best)?),
        _ => None,
    };
    Ok(SearchOutcome {
        config: config.clone(),
        seed,
        rng_version: RNG_VERSION.to_string(),
        best: best.with_label(format!("search-best(restart={best_idx})")),
        objective_value,
        best_restart: best_idx,
        target,
        certificate,
        restarts,
        trace,
    })
}

/// Minimizes the `p = 1` polarization `2 cirr` over `n` unit vectors.
pub fn minimize_polarization(config: &SearchConfig) -> Result<SearchOutcome> {
    if !matches!(config.objective, Objective::Polarization { .. }) {
        return Err(ZonoError::InvalidInput("minimize_polarization needs objective polarization".into()));
    }
    if config.sense != Sense::Minimize {
        return Err(ZonoError::InvalidInput("polarization is minimized".into()));
    }
    constrained_minimize(config)
}

/// A rhombic dodecahedron with the mean width of the regular one and a
/// strictly smaller circumradius (odd `d`).
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct CounterexampleRecord {
    pub d: usize,
    pub v_scale: f64,
    pub z_prime: GeneratorSet,
    pub cirr_reg: f64,
    pub cirr_prime: f64,
    pub width_reg: f64,
    pub width_prime: f64,
    /// `|w' - w_reg| / w_reg`.
    pub width_rel_diff: f64,
}

impl CounterexampleRecord {
    pub fn margin(&self) -> f64 {
        self.cirr_reg - self.cirr_prime
    }
}

/// Shifts the unit regular simplex vertices `q_i` by `v = v_scale · q_1`
/// and rescales to the regular mean width.
pub fn thm5_counterexample(d: usize, v_scale: f64) -> Result<CounterexampleRecord> {
    if d < 3 || d.is_multiple_of(2) {
        return Err(out_of_range("d", d, "odd and >= 3"));
    }
    if !(v_scale > 0.0 && v_scale < 1.0) {
        return Err(out_of_range("v_scale", v_scale, "in (0, 1)"));
    }
    let q = regular_simplex_vertices(d, 1.0);
    let reg = GeneratorSet::new(d, q.clone())?;
    let v: Vec<f64> = q[0].iter().map(|x| v_scale * x).collect();
    let shifted = GeneratorSet::new(d, q.iter().map(|p| p.iter().zip(&v).map(|(a, b)| a + b).collect()).collect())?;
    let sum_reg: f64 = reg.norms().iter().sum();
    let sum_shifted: f64 = shifted.norms().iter().sum();
    let z_prime = shifted
        .scaled(sum_reg / sum_shifted)
        .with_label(format!("shifted-regular-rhombic-dodecahedron(d={d}, v_scale={v_scale})"));
    let factor = mean_width_factor(d);
    let width_reg = factor * sum_reg;
    let width_prime = factor * z_prime.norms().iter().sum::<f64>();
    Ok(CounterexampleRecord {
        d,
        v_scale,
        cirr_reg: circumradius(&reg)?.value,
        cirr_prime: circumradius(&z_prime)?.value,
        width_reg,
        width_prime,
        width_rel_diff: (width_prime - width_reg).abs() / width_reg,
        z_prime,
    })
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum Body {
    Cube,
    RegularRd,
}

/// Result of perturbing a regular body under a constraint.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct LocalProbeReport {
    pub body: Body,
    pub constraint: Constraint,
    pub k: usize,
    pub d: usize,
    pub sense: Sense,
    pub trials: usize,
    pub perturbation: f64,
    pub seed: u64,
    pub reference_value: f64,
    pub improving: usize,
    pub improving_fraction: f64,
    /// Largest improvement over the reference (positive means better in
    /// the direction of `sense`); negative when nothing improved.
    pub best_improvement: f64,
    pub rejected: usize,
}

/// Perturbs the generators of the regular body with Gaussian noise of scale
/// `perturbation`, renormalizes the constraint and compares `V_k`. The
/// regular body is expected to minimize `V_k` at fixed volume or inradius
/// and to maximize it at fixed mean width or unit edges.
pub fn local_optimality_probe(
    body: Body,
    constraint: Constraint,
    d: usize,
    k: usize,
    trials: usize,
    perturbation: f64,
    seed: u64,
) -> Result<LocalProbeReport> {
    if k == 0 || k > d {
        return Err(out_of_range("k", k, format!("1..={d}")));
    }
    if trials == 0 {
        return Err(out_of_range("trials", trials, ">= 1"));
    }
    let sense = match constraint {
        Constraint::FixedVolume | Constraint::FixedInradius => Sense::Minimize,
        Constraint::FixedMeanWidth | Constraint::UnitGenerators | Constraint::CenteredFixedMeanWidth => Sense::Maximize,
        Constraint::Centered => {
            return Err(ZonoError::InvalidInput("constraint centered fixes no scale; use centered-fixed-mean-width".into()))
        }
    };
    if body == Body::Cube && constraint == Constraint::CenteredFixedMeanWidth {
        return Err(ZonoError::InvalidInput("the cube has no centered canonical form".into()));
    }
    let reg = match body {
        Body::Cube => make_cube(d, 1.0)?,
        Body::RegularRd => make_regular_rhombic_dodecahedron(d, 1.0)?,
    };
    let target = match constraint {
        Constraint::FixedVolume => intrinsic_volume(&reg, d)?,
        Constraint::FixedInradius => inradius(&reg)?.value,
        _ => mean_width_factor(d) * reg.len() as f64,
    };
    let reference = intrinsic_volume(&reg, k)?;
    let outcomes = map_blocks(trials, |t| -> Result<Option<f64>> {
        let mut r = rng::stream(seed, t as u64);
        let noisy = reg.map_generators(|g| {
            let noise = gaussian_vector(&mut r, g.len());
            g.iter().zip(&noise).map(|(a, b)| a + perturbation * b).collect()
        });
        match normalize(&noisy, constraint, target) {
            Some(x) => {
                let v = intrinsic_volume(&x, k)?;
                Ok(Some(match sense {
                    Sense::Minimize => reference - v,
                    Sense::Maximize => v - reference,
                }))
            }
            None => Ok(None),
        }
    });
    let mut improving = 0;
    let mut best = f64::NEG_INFINITY;
    let mut rejected = 0;
    for o in outcomes {
        match o? {
            Some(gain) => {
                let tol = 1e-9 * reference.abs().max(1.0);
                if gain > tol {
                    improving += 1;
                }
                best = best.max(gain);
            }
            None => rejected += 1,
        }
    }
    Ok(LocalProbeReport {
        body,
        constraint,
        k,
        d,
        sense,
        trials,
        perturbation,
        seed,
        reference_value: reference,
        improving,
        improving_fraction: improving as f64 / trials as f64,
        best_improvement: best,
        rejected,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use approx::assert_relative_eq;

    #[test]
    fn min_norm_examples() {
        let v = min_norm_in_hull(&[vec![1.0, 0.0], vec![-1.0, 0.0]]);
        assert!(norm(&v) < 1e-12);
        let v = min_norm_in_hull(&[vec![1.0, 1.0], vec![1.0, -1.0]]);
        assert_relative_eq!(v[0], 1.0, epsilon = 1e-9);
        assert_relative_eq!(v[1], 0.0, epsilon = 1e-9);
        let v = min_norm_in_hull(&[vec![2.0, 0.0], vec![0.0, 2.0], vec![3.0, 3.0]]);
        assert_relative_eq!(v[0], 1.0, epsilon = 1e-9);
        assert_relative_eq!(v[1], 1.0, epsilon = 1e-9);
    }

    #[test]
    fn polarization_examples() {
        let sq = GeneratorSet::new(2, vec![vec![1.0, 0.0], vec![0.0, 1.0]]).unwrap();
        let v = polarization_value(&sq, 1.0).unwrap();
        assert!(v.exact);
        assert_relative_eq!(v.value, 2f64.sqrt(), epsilon = 1e-12);
        let tri = crate::zonotope::make_regular_zonogon(3, 1.0).unwrap();
        assert_relative_eq!(polarization_value(&tri, 1.0).unwrap().value, 2.0, epsilon = 1e-12);
        // p = 2: Σ ⟨p_i, u⟩² = 1 for an orthonormal pair
        let v = polarization_value(&sq, 2.0).unwrap();
        assert!(!v.exact);
        assert_relative_eq!(v.value, 1.0, epsilon = 1e-9);
        assert!(polarization_value(&sq.scaled(2.0), 1.0).is_err());
    }

    #[test]
    fn counterexample_d3() {
        let r = thm5_counterexample(3, 1e-2).unwrap();
        assert!(r.width_rel_diff <= 1e-12);
        assert!(r.margin() > 1e-8, "{r:?}");
        assert_relative_eq!(r.cirr_reg, 2.0 / 3f64.sqrt(), epsilon = 1e-12);
        assert!(thm5_counterexample(4, 1e-2).is_err());
    }

    #[test]
    fn config_validation() {
        let mut c = SearchConfig::polarization(3, 2);
        assert!(c.validate().is_ok());
        c.constraint = Constraint::FixedMeanWidth;
        assert!(c.validate().is_err());
        let c = SearchConfig::new(Objective::IntrinsicVolume { k: 4 }, Constraint::FixedVolume, 4, 3);
        assert!(c.validate().is_err());
        let c = SearchConfig::new(Objective::Circumradius, Constraint::Centered, 4, 3);
        assert!(c.validate().is_err());
        assert!(constrained_minimize(&SearchConfig::polarization(2, 2)).is_err());
        let json = r#"{"objective":{"kind":"circumradius"},"constraint":"fixed-mean-width","n":3,"d":3,"bogus":1}"#;
        assert!(serde_json::from_str::<SearchConfig>(json).is_err());
    }

    #[test]
    fn normalization_hits_targets() {
        let gs = GeneratorSet::new(3, vec![vec![1.0, 0.2, 0.0], vec![0.0, 2.0, 0.5], vec![0.3, 0.0, 1.5], vec![1.0, 1.0, 1.0]]).unwrap();
        let w = normalize(&gs, Constraint::FixedMeanWidth, 2.0).unwrap();
        assert_relative_eq!(crate::functionals::mean_width(&w), 2.0, epsilon = 1e-12);
        let v = normalize(&gs, Constraint::FixedVolume, 3.0).unwrap();
        assert_relative_eq!(intrinsic_volume(&v, 3).unwrap(), 3.0, epsilon = 1e-12);
        let r = normalize(&gs, Constraint::FixedInradius, 0.5).unwrap();
        assert_relative_eq!(inradius(&r).unwrap().value, 0.5, epsilon = 1e-12);
        let c = normalize(&gs, Constraint::CenteredFixedMeanWidth, 2.0).unwrap();
        let s: f64 = c.generators().iter().map(|g| g[1]).sum();
        assert!(s.abs() < 1e-12);
        let flat = GeneratorSet::new(2, vec![vec![1.0, 0.0], vec![2.0, 0.0]]).unwrap();
        assert!(normalize(&flat, Constraint::FixedVolume, 1.0).is_none());
    }

    #[test]
    fn small_polarization_search() {
        let mut c = SearchConfig::polarization(2, 2).with_seed(3);
        c.restarts = 4;
        let out = minimize_polarization(&c).unwrap();
        assert_relative_eq!(out.objective_value, 2f64.sqrt(), epsilon = 1e-6);
        assert_eq!(out.objective_value, evaluate_objective(c.objective, &out.best).unwrap());
    }
}
