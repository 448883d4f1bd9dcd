//! Monte Carlo estimators for quantities that also have exact formulas, and
//! an asymptotic probe that tabulates radius and intrinsic-volume gaps
//! against the unit ball.
//!
//! Samples are drawn in fixed batches of [`BATCH_SIZE`]; batch `b` uses RNG
//! stream `b`, so every estimate depends only on `(seed, samples)`.

use std::fmt;
use std::str::FromStr;

use rand::Rng;
use serde::{Deserialize, Serialize};

use crate::error::{out_of_range, Result, ZonoError};
use crate::functionals::{intrinsic_volume, intrinsic_volume_with, steiner_polynomial, surface_area, EnumerationLimits};
use crate::geometry::{binomial, dot, kappa, norm, omega, WedgeWorkspace};
use crate::par::map_blocks;
use crate::radii::{circumradius, inradius};
use crate::rng::{self, gaussian_vector, unit_vector, StreamRng, RNG_VERSION};
use crate::zonotope::{make_regular_zonogon, project, project_onto_basis, random_unit_generators, GeneratorSet};

pub const BATCH_SIZE: usize = 1000;

/// Coordinate-descent stopping threshold on the Euclidean norm of one sweep's
/// coefficient update.
pub const PROJECTION_TOL: f64 = 1e-10;

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct MCEstimate {
    pub mean: f64,
    pub std_error: f64,
    pub samples: usize,
    pub seed: u64,
    pub rng_version: String,
    /// Draws discarded and redrawn (non-converged projections).
    #[serde(default)]
    pub rejected: u64,
}

/// An estimate next to the exact value it should reproduce.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct MCCheck {
    pub estimate: MCEstimate,
    pub exact: f64,
}

impl MCCheck {
    /// `(estimate - exact) / std_error`; zero when both coincide exactly.
    pub fn z_score(&self) -> f64 {
        let diff = self.estimate.mean - self.exact;
        if diff == 0.0 {
            0.0
        } else {
            diff / self.estimate.std_error
        }
    }

    pub fn within(&self, sigmas: f64) -> bool {
        self.z_score().abs() <= sigmas
    }
}

/// Outcome of a statistical comparison with one retry.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct StatisticalVerdict {
    pub check: MCCheck,
    pub sigmas: f64,
    pub passed: bool,
    /// The first run missed and `check` comes from the rerun with twice the
    /// samples.
    pub retried: bool,
}

/// Runs `run(samples)` and accepts it within `sigmas` standard errors; a
/// miss is rerun once with `2 * samples` before failing.
pub fn statistical_check(samples: usize, sigmas: f64, run: impl Fn(usize) -> Result<MCCheck>) -> Result<StatisticalVerdict> {
    let first = run(samples)?;
    if first.within(sigmas) {
        return Ok(StatisticalVerdict { check: first, sigmas, passed: true, retried: false });
    }
    let check = run(2 * samples)?;
    Ok(StatisticalVerdict { passed: check.within(sigmas), check, sigmas, retried: true })
}

#[derive(Debug, Clone, Copy, Default)]
struct Moments {
    n: u64,
    mean: f64,
    m2: f64,
    rejected: u64,
}

impl Moments {
    fn push(&mut self, x: f64) {
        self.n += 1;
        let delta = x - self.mean;
        self.mean += delta / self.n as f64;
        self.m2 += delta * (x - self.mean);
    }

    fn merge(self, o: Moments) -> Moments {
        if self.n == 0 {
            return Moments { rejected: self.rejected + o.rejected, ..o };
        }
        if o.n == 0 {
            return Moments { rejected: self.rejected + o.rejected, ..self };
        }
        let n = self.n + o.n;
        let delta = o.mean - self.mean;
        Moments {
            n,
            mean: self.mean + delta * o.n as f64 / n as f64,
            m2: self.m2 + o.m2 + delta * delta * (self.n as f64 * o.n as f64) / n as f64,
            rejected: self.rejected + o.rejected,
        }
    }
}

/// Runs `samples` draws of `draw` in fixed batches. `draw` returns `None`
/// for a rejected draw, which is then repeated.
fn estimate<F>(samples: usize, seed: u64, draw: F) -> Result<MCEstimate>
where
    F: Fn(&mut StreamRng) -> Result<Option<f64>> + Sync + Send,
{
    if samples < 2 {
        return Err(out_of_range("samples", samples, ">= 2"));
    }
    let batches = samples.div_ceil(BATCH_SIZE);
    let parts = map_blocks(batches, |b| -> Result<Moments> {
        let mut rng = rng::stream(seed, b as u64);
        let count = BATCH_SIZE.min(samples - b * BATCH_SIZE);
        let mut m = Moments::default();
        while (m.n as usize) < count {
            match draw(&mut rng)? {
                Some(x) => m.push(x),
                None => {
                    m.rejected += 1;
                    if m.rejected > 100 * count as u64 {
                        return Err(ZonoError::Numerical("too many rejected Monte Carlo draws".into()));
                    }
                }
            }
        }
        Ok(m)
    });
    let mut total = Moments::default();
    for p in parts {
        total = total.merge(p?);
    }
    let var = total.m2 / (total.n - 1) as f64;
    Ok(MCEstimate {
        mean: total.mean,
        std_error: (var / total.n as f64).sqrt(),
        samples,
        seed,
        rng_version: RNG_VERSION.to_string(),
        rejected: total.rejected,
    })
}

/// `E |p_1 ∧ … ∧ p_d| = 2 ω_{d+1}^{d-1} / ω_d^d` for independent uniform unit
/// vectors.
pub fn random_wedge_closed_form(d: usize) -> f64 {
    2.0 * omega(d + 1).powi(d as i32 - 1) / omega(d).powi(d as i32)
}

pub fn expected_random_wedge(d: usize, samples: usize, seed: u64) -> Result<MCCheck> {
    if d < 2 {
        return Err(out_of_range("d", d, ">= 2"));
    }
    let est = estimate(samples, seed, |rng| {
        let vs: Vec<Vec<f64>> = (0..d).map(|_| unit_vector(rng, d)).collect();
        Ok(Some(WedgeWorkspace::new(d, d).wedge(vs.iter().map(Vec::as_slice))))
    })?;
    Ok(MCCheck {
        estimate: est,
        exact: random_wedge_closed_form(d),
    })
}

/// `E V_d(Z)` for `n` independent uniform unit generators, against
/// `C(n,d)` times the single-wedge expectation.
pub fn expected_volume_random_zonotope(n: usize, d: usize, samples: usize, seed: u64) -> Result<MCCheck> {
    if d < 2 || n < d {
        return Err(out_of_range("(n, d)", format!("({n}, {d})"), "2 <= d <= n"));
    }
    let est = estimate(samples, seed, |rng| {
        let gs = GeneratorSet::new(d, (0..n).map(|_| unit_vector(rng, d)).collect())?;
        Ok(Some(intrinsic_volume(&gs, d)?))
    })?;
    Ok(MCCheck {
        estimate: est,
        exact: binomial(n, d) * random_wedge_closed_form(d),
    })
}

/// Surface area as `(ω_d / κ_{d-1}) · E_u V_{d-1}(Z | u^⊥)`.
pub fn cauchy_surface_integral(gs: &GeneratorSet, samples: usize, seed: u64) -> Result<MCCheck> {
    let d = gs.dim();
    if d < 2 {
        return Err(out_of_range("d", d, ">= 2"));
    }
    let exact = surface_area(gs)?;
    let scale = omega(d) / kappa(d - 1);
    let est = estimate(samples, seed, |rng| {
        let u = unit_vector(rng, d);
        let p = project(gs, &u)?;
        Ok(Some(scale * intrinsic_volume_with(&p, d - 1, EnumerationLimits::OVERRIDE)?))
    })?;
    Ok(MCCheck { estimate: est, exact })
}

/// The constant `C(d,i) κ_{k-i} κ_d / (C(k,i) κ_{d-i} κ_k)`.
pub fn kubota_constant(d: usize, i: usize, k: usize) -> f64 {
    binomial(d, i) * kappa(k - i) * kappa(d) / (binomial(k, i) * kappa(d - i) * kappa(k))
}

/// Orthonormal frame of a uniformly random `k`-dimensional subspace.
pub fn random_frame(rng: &mut impl Rng, d: usize, k: usize) -> Vec<Vec<f64>> {
    loop {
        let mut frame: Vec<Vec<f64>> = Vec::with_capacity(k);
        for _ in 0..k {
            let mut v = gaussian_vector(rng, d);
            for _ in 0..2 {
                for b in &frame {
                    let c = dot(b, &v);
                    for (x, y) in v.iter_mut().zip(b) {
                        *x -= c * y;
                    }
                }
            }
            let n = norm(&v);
            if n < 1e-8 {
                break;
            }
            frame.push(v.into_iter().map(|x| x / n).collect());
        }
        if frame.len() == k {
            return frame;
        }
    }
}

/// `V_i(Z)` from the average of `V_i` over projections onto random
/// `k`-subspaces.
pub fn kubota_intrinsic_integral(gs: &GeneratorSet, i: usize, k: usize, samples: usize, seed: u64) -> Result<MCCheck> {
    let d = gs.dim();
    if i == 0 || i > k || k >= d {
        return Err(out_of_range("(i, k)", format!("({i}, {k})"), format!("1 <= i <= k <= {}", d.saturating_sub(1))));
    }
    let exact = intrinsic_volume_with(gs, i, EnumerationLimits::OVERRIDE)?;
    let c = kubota_constant(d, i, k);
    let est = estimate(samples, seed, |rng| {
        let frame = random_frame(rng, d, k);
        let p = project_onto_basis(gs, &frame)?;
        Ok(Some(c * intrinsic_volume_with(&p, i, EnumerationLimits::OVERRIDE)?))
    })?;
    Ok(MCCheck { estimate: est, exact })
}

/// Result of projecting a point onto `Σ [o, p_i]`.
#[derive(Debug, Clone, PartialEq)]
pub struct Projection {
    pub coefficients: Vec<f64>,
    pub distance: f64,
    pub sweeps: usize,
    pub converged: bool,
}

/// Decision of the membership test `dist(x, Z) ≤ t`.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Membership {
    Inside,
    Outside,
    Undecided,
}

/// `min_{c ∈ [0,1]^n} |Σ c_i p_i - x|` by cyclic coordinate descent, stopping
/// when the norm of a sweep's update drops below [`PROJECTION_TOL`] or after
/// `10 n d` sweeps.
pub fn project_onto_zonotope(gs: &GeneratorSet, x: &[f64]) -> Projection {
    let (n, d) = (gs.len(), gs.dim());
    let gens = gs.generators();
    let sq: Vec<f64> = gens.iter().map(|g| dot(g, g)).collect();
    let mut c = vec![0.5; n];
    let mut r: Vec<f64> = (0..d).map(|j| gens.iter().map(|g| 0.5 * g[j]).sum::<f64>() - x[j]).collect();
    let max_sweeps = (10 * n * d).max(1);
    let mut sweeps = 0;
    let mut converged = false;
    while sweeps < max_sweeps {
        sweeps += 1;
        let mut step2 = 0.0;
        for i in 0..n {
            if sq[i] == 0.0 {
                continue;
            }
            let target = (c[i] - dot(&r, &gens[i]) / sq[i]).clamp(0.0, 1.0);
            let delta = target - c[i];
            if delta != 0.0 {
                c[i] = target;
                for (rj, gj) in r.iter_mut().zip(&gens[i]) {
                    *rj += delta * gj;
                }
                step2 += delta * delta;
            }
        }
        if step2.sqrt() < PROJECTION_TOL {
            converged = true;
            break;
        }
    }
    Projection {
        coefficients: c,
        distance: norm(&r),
        sweeps,
        converged,
    }
}

/// Decides `dist(x, Z) ≤ t` with certificates: a feasible point within `t`
/// proves membership, and a separating direction `u` with
/// `⟨u, x⟩ - h_Z(u) > t` proves non-membership.
pub fn zonotope_membership(gs: &GeneratorSet, x: &[f64], t: f64) -> Membership {
    let p = project_onto_zonotope(gs, x);
    if p.distance <= t {
        return Membership::Inside;
    }
    let mut u = x.to_vec();
    for (g, c) in gs.generators().iter().zip(&p.coefficients) {
        for (uj, gj) in u.iter_mut().zip(g) {
            *uj -= c * gj;
        }
    }
    let un = norm(&u);
    let u: Vec<f64> = u.iter().map(|v| v / un).collect();
    let h: f64 = gs.generators().iter().map(|g| dot(&u, g).max(0.0)).sum();
    if dot(&u, x) - h > t {
        Membership::Outside
    } else if p.converged {
        // converged but the certificate is within rounding of the boundary
        if p.distance <= t * (1.0 + 1e-9) + 1e-12 {
            Membership::Inside
        } else {
            Membership::Outside
        }
    } else {
        Membership::Undecided
    }
}

/// Hit-or-miss estimate of `V_d(Z + tB)` in the bounding box of `Z`
/// enlarged by `t`, against the Steiner polynomial.
pub fn steiner_mc_volume(gs: &GeneratorSet, t: f64, samples: usize, seed: u64) -> Result<MCCheck> {
    let d = gs.dim();
    if d > 4 {
        return Err(out_of_range("d", d, "<= 4"));
    }
    if !(t >= 0.0 && t.is_finite()) {
        return Err(out_of_range("t", t, ">= 0"));
    }
    let rank = gs.rank();
    if rank < d {
        return Err(ZonoError::Degenerate { rank, dim: d });
    }
    let exact = steiner_polynomial(gs)?.eval(t);
    let lo: Vec<f64> = (0..d).map(|j| gs.generators().iter().map(|g| g[j].min(0.0)).sum::<f64>() - t).collect();
    let hi: Vec<f64> = (0..d).map(|j| gs.generators().iter().map(|g| g[j].max(0.0)).sum::<f64>() + t).collect();
    let box_volume: f64 = lo.iter().zip(&hi).map(|(a, b)| b - a).product();
    let est = estimate(samples, seed, |rng| {
        let x: Vec<f64> = lo.iter().zip(&hi).map(|(a, b)| rng.random_range(*a..*b)).collect();
        Ok(match zonotope_membership(gs, &x, t) {
            Membership::Inside => Some(box_volume),
            Membership::Outside => Some(0.0),
            Membership::Undecided => None,
        })
    })?;
    Ok(MCCheck { estimate: est, exact })
}

/// Families of zonotopes with a growing number of generators.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum ProbeFamily {
    /// `n` independent uniform unit vectors.
    RandomUniform,
    /// The regular `2n`-gon, `d = 2`.
    PlanarRegular,
    /// `n` spiral points on the upper unit hemisphere, `d = 3`.
    FibonacciSphere,
}

impl ProbeFamily {
    pub const ALL: [ProbeFamily; 3] = [ProbeFamily::RandomUniform, ProbeFamily::PlanarRegular, ProbeFamily::FibonacciSphere];

    pub fn name(self) -> &'static str {
        match self {
            ProbeFamily::RandomUniform => "random-uniform",
            ProbeFamily::PlanarRegular => "planar-regular",
            ProbeFamily::FibonacciSphere => "fibonacci-sphere",
        }
    }
}

impl fmt::Display for ProbeFamily {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.name())
    }
}

impl FromStr for ProbeFamily {
    type Err = ZonoError;

    fn from_str(s: &str) -> Result<Self> {
        ProbeFamily::ALL.iter().copied().find(|f| f.name() == s).ok_or_else(|| ZonoError::Unknown {
            kind: "probe family",
            name: s.to_string(),
            available: ProbeFamily::ALL.map(ProbeFamily::name).join(", "),
        })
    }
}

/// `n` unit vectors on the upper hemisphere of `S^2` along a golden-angle
/// spiral. Antipodal directions give the same segment, so the hemisphere
/// covers every direction once.
pub fn fibonacci_hemisphere(n: usize) -> Result<GeneratorSet> {
    if n == 0 {
        return Err(out_of_range("n", n, ">= 1"));
    }
    let golden = std::f64::consts::PI * (3.0 - 5f64.sqrt());
    let gens = (0..n)
        .map(|i| {
            let z = (i as f64 + 0.5) / n as f64;
            let r = (1.0 - z * z).sqrt();
            let phi = golden * i as f64;
            vec![r * phi.cos(), r * phi.sin(), z]
        })
        .collect();
    Ok(GeneratorSet::new(3, gens)?.with_label(format!("fibonacci-hemisphere(n={n})")))
}

/// `V_i(B^d) = C(d,i) κ_d / κ_{d-i}`.
pub fn ball_intrinsic_volume(d: usize, i: usize) -> f64 {
    binomial(d, i) * kappa(d) / kappa(d - i)
}

/// One row of the asymptotic table.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ProbeRow {
    pub family: ProbeFamily,
    pub d: usize,
    pub n: usize,
    pub circumradius: f64,
    pub inradius: f64,
    pub ratio_minus_one: f64,
    /// `V_i(Z)/V_i(B) - 1` with `Z` scaled to unit inradius, `i = 1..d`.
    pub inradius_gaps: Vec<f64>,
    /// `1 - V_i(Z)/V_i(B)` with `Z` scaled to unit circumradius, `i = 1..d`.
    pub circumradius_gaps: Vec<f64>,
    /// `4i / (5 d n²)`, `i = 1..d`.
    pub inradius_bounds: Vec<f64>,
    /// `2i / (5 n²)`, `i = 1..d`.
    pub circumradius_bounds: Vec<f64>,
    /// `π² / (12 n²)`, bound on the inradius volume gap.
    pub volume_bound: f64,
    /// `π²/(24 n²) - π⁴/(1920 n⁴)`, bound on the circumradius `V_1` gap.
    pub width_bound: f64,
}

/// Below this `n` the "sufficiently large n" bounds are tabulated but not
/// checked.
pub const PROBE_ASSERT_MIN_N: usize = 8;

impl ProbeRow {
    /// Lower bounds that are checked for this row; the volume and width
    /// bounds hold for every `n`, the others from [`PROBE_ASSERT_MIN_N`].
    pub fn bound_checks(&self) -> Vec<(String, f64, f64)> {
        let d = self.d;
        let mut out = vec![
            ("volume".to_string(), self.inradius_gaps[d - 1], self.volume_bound),
            ("width".to_string(), self.circumradius_gaps[0], self.width_bound),
        ];
        if self.n >= PROBE_ASSERT_MIN_N {
            for i in 0..d {
                out.push((format!("inradius V_{}", i + 1), self.inradius_gaps[i], self.inradius_bounds[i]));
                out.push((format!("circumradius V_{}", i + 1), self.circumradius_gaps[i], self.circumradius_bounds[i]));
            }
        }
        out
    }

    pub fn lower_bounds_hold(&self) -> bool {
        self.bound_checks().iter().all(|(_, gap, bound)| gap + 1e-12 >= *bound)
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ProbeTable {
    pub family: ProbeFamily,
    pub d: usize,
    pub seed: u64,
    pub rng_version: String,
    pub rows: Vec<ProbeRow>,
}

impl ProbeTable {
    pub fn to_csv(&self) -> String {
        let mut out = String::from("n,quantity,estimate,std_error,closed_form,bound_expressions\n");
        for r in &self.rows {
            let mut line = |q: String, v: f64, bound: Option<f64>, expr: &str| {
                let b = bound.map(|b| format!("{b:e}")).unwrap_or_default();
                out.push_str(&format!("{},{q},{v:e},,{b},{expr}\n", r.n));
            };
            line("cirr/ir-1".into(), r.ratio_minus_one, None, "");
            for i in 0..r.d {
                line(format!("ir:V_{}/V_{}(B)-1", i + 1, i + 1), r.inradius_gaps[i], Some(r.inradius_bounds[i]), "4i/(5dn^2)");
                line(
                    format!("cirr:1-V_{}/V_{}(B)", i + 1, i + 1),
                    r.circumradius_gaps[i],
                    Some(r.circumradius_bounds[i]),
                    "2i/(5n^2)",
                );
            }
            line("ir:V_d/kappa_d-1".into(), r.inradius_gaps[r.d - 1], Some(r.volume_bound), "pi^2/(12n^2)");
            line("cirr:1-V_1/V_1(B)".into(), r.circumradius_gaps[0], Some(r.width_bound), "pi^2/(24n^2)-pi^4/(1920n^4)");
        }
        out
    }

    /// Least-squares slope of `log(ratio - 1)` against `log n`.
    pub fn fitted_ratio_exponent(&self) -> Option<f64> {
        let pts: Vec<(f64, f64)> = self
            .rows
            .iter()
            .filter(|r| r.ratio_minus_one > 0.0)
            .map(|r| ((r.n as f64).ln(), r.ratio_minus_one.ln()))
            .collect();
        if pts.len() < 2 {
            return None;
        }
        let m = pts.len() as f64;
        let (sx, sy) = pts.iter().fold((0.0, 0.0), |(a, b), (x, y)| (a + x, b + y));
        let (mx, my) = (sx / m, sy / m);
        let num: f64 = pts.iter().map(|(x, y)| (x - mx) * (y - my)).sum();
        let den: f64 = pts.iter().map(|(x, _)| (x - mx) * (x - mx)).sum();
        (den > 0.0).then(|| num / den)
    }
}

fn check_family_dim(family: ProbeFamily, d: usize) -> Result<()> {
    let ok = match family {
        ProbeFamily::RandomUniform => d >= 2,
        ProbeFamily::PlanarRegular => d == 2,
        ProbeFamily::FibonacciSphere => d == 3,
    };
    if ok {
        Ok(())
    } else {
        Err(ZonoError::InvalidInput(format!("family {family} is not defined in dimension {d}")))
    }
}

/// The member of `family` with `n` generators. Random members mix `n` into
/// the seed so that every size gets its own draw.
pub fn family_member(family: ProbeFamily, d: usize, n: usize, seed: u64) -> Result<GeneratorSet> {
    check_family_dim(family, d)?;
    if n < d {
        return Err(out_of_range("n", n, format!(">= {d}")));
    }
    match family {
        ProbeFamily::RandomUniform => random_unit_generators(n, d, seed ^ (n as u64).wrapping_mul(0x9E37_79B9_7F4A_7C15)),
        ProbeFamily::PlanarRegular => make_regular_zonogon(n, 1.0),
        ProbeFamily::FibonacciSphere => fibonacci_hemisphere(n),
    }
}

pub fn probe_row(family: ProbeFamily, gs: &GeneratorSet) -> Result<ProbeRow> {
    let (d, n) = (gs.dim(), gs.len());
    let cirr = circumradius(gs)?.value;
    let ir = inradius(gs)?.value;
    let limits = EnumerationLimits::OVERRIDE;
    let v: Vec<f64> = (1..=d).map(|i| intrinsic_volume_with(gs, i, limits)).collect::<Result<_>>()?;
    let nn = (n * n) as f64;
    let pi2 = std::f64::consts::PI.powi(2);
    Ok(ProbeRow {
        family,
        d,
        n,
        circumradius: cirr,
        inradius: ir,
        ratio_minus_one: cirr / ir - 1.0,
        inradius_gaps: (1..=d).map(|i| v[i - 1] / ir.powi(i as i32) / ball_intrinsic_volume(d, i) - 1.0).collect(),
        circumradius_gaps: (1..=d).map(|i| 1.0 - v[i - 1] / cirr.powi(i as i32) / ball_intrinsic_volume(d, i)).collect(),
        inradius_bounds: (1..=d).map(|i| 4.0 * i as f64 / (5.0 * d as f64 * nn)).collect(),
        circumradius_bounds: (1..=d).map(|i| 2.0 * i as f64 / (5.0 * nn)).collect(),
        volume_bound: pi2 / (12.0 * nn),
        width_bound: pi2 / (24.0 * nn) - pi2 * pi2 / (1920.0 * nn * nn),
    })
}

/// Tabulates radius and intrinsic-volume gaps for each `n` in `n_list`.
pub fn asymptotic_probe(family: ProbeFamily, d: usize, n_list: &[usize], seed: u64) -> Result<ProbeTable> {
    check_family_dim(family, d)?;
    if let Some(&n) = n_list.iter().find(|&&n| n < d) {
        return Err(out_of_range("n", n, format!(">= {d}")));
    }
    let rows = map_blocks(n_list.len(), |j| probe_row(family, &family_member(family, d, n_list[j], seed)?));
    Ok(ProbeTable {
        family,
        d,
        seed,
        rng_version: RNG_VERSION.to_string(),
        rows: rows.into_iter().collect::<Result<_>>()?,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::zonotope::make_cube;
    use approx::assert_relative_eq;
    use std::f64::consts::PI;

    #[test]
    fn closed_forms() {
        assert_relative_eq!(random_wedge_closed_form(2), 2.0 / PI, epsilon = 1e-15);
        assert_relative_eq!(random_wedge_closed_form(3), PI / 8.0, epsilon = 1e-15);
        assert_relative_eq!(ball_intrinsic_volume(2, 1), PI, epsilon = 1e-14);
        assert_relative_eq!(ball_intrinsic_volume(3, 1), 4.0, epsilon = 1e-14);
        assert_relative_eq!(kubota_constant(3, 1, 2), 4.0 / PI, epsilon = 1e-14);
        assert_relative_eq!(kubota_constant(4, 2, 2), 6.0 * kappa(4) / (kappa(2) * kappa(2)), epsilon = 1e-14);
    }

    #[test]
    fn moments_merge_matches_direct() {
        let xs: Vec<f64> = (0..37).map(|i| ((i * 7919) % 101) as f64 / 10.0).collect();
        let mut all = Moments::default();
        xs.iter().for_each(|&x| all.push(x));
        let (mut a, mut b) = (Moments::default(), Moments::default());
        xs[..10].iter().for_each(|&x| a.push(x));
        xs[10..].iter().for_each(|&x| b.push(x));
        let m = a.merge(b);
        assert_relative_eq!(m.mean, all.mean, epsilon = 1e-12);
        assert_relative_eq!(m.m2, all.m2, epsilon = 1e-9);
    }

    #[test]
    fn estimates_are_reproducible() {
        let a = expected_random_wedge(3, 2500, 9).unwrap();
        let b = expected_random_wedge(3, 2500, 9).unwrap();
        assert_eq!(a, b);
        let c = crate::par::sequential(|| expected_random_wedge(3, 2500, 9).unwrap());
        assert_eq!(a.estimate.mean.to_bits(), c.estimate.mean.to_bits());
        assert!(expected_random_wedge(3, 1, 9).is_err());
    }

    #[test]
    fn projection_onto_square() {
        let sq = make_cube(2, 1.0).unwrap();
        let p = project_onto_zonotope(&sq, &[2.0, 0.5]);
        assert!(p.converged);
        assert_relative_eq!(p.distance, 1.0, epsilon = 1e-9);
        assert_eq!(zonotope_membership(&sq, &[0.3, 0.9], 0.0), Membership::Inside);
        assert_eq!(zonotope_membership(&sq, &[1.5, 1.5], 0.5), Membership::Outside);
        assert_eq!(zonotope_membership(&sq, &[1.3, 1.3], 0.5), Membership::Inside);
    }

    #[test]
    fn fibonacci_points_are_unit() {
        let gs = fibonacci_hemisphere(20).unwrap();
        for g in gs.generators() {
            assert_relative_eq!(norm(g), 1.0, epsilon = 1e-14);
            assert!(g[2] > 0.0);
        }
    }

    #[test]
    fn probe_family_dimension_checks() {
        assert!(asymptotic_probe(ProbeFamily::PlanarRegular, 3, &[4], 0).is_err());
        assert!(asymptotic_probe(ProbeFamily::FibonacciSphere, 2, &[4], 0).is_err());
        assert!("hexagon".parse::<ProbeFamily>().is_err());
        let t = asymptotic_probe(ProbeFamily::PlanarRegular, 2, &[3, 8], 0).unwrap();
        assert!(t.rows.iter().all(ProbeRow::lower_bounds_hold));
        assert!(t.to_csv().lines().count() > 2);
    }
}
