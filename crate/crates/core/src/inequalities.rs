//! Scalar and vector Maclaurin inequalities, simplex functionals, and
//! randomized verification suites for the isoperimetric inequalities on
//! parallelotopes (`d` generators) and rhombic dodecahedra (`d+1`
//! generators).
//!
//! A suite never panics or errors on a violated inequality; violations are
//! returned as verdicts with `holds == false`.

use std::fmt;
use std::str::FromStr;

use nalgebra::{DMatrix, DVector};
use rand::Rng;
use serde::{Deserialize, Serialize};

use crate::digest;
use crate::error::{out_of_range, Result, ZonoError};
use crate::functionals::{
    check_enumeration, intrinsic_volume, power_k_volume, EnumerationLimits,
};
use crate::geometry::{
    binomial, elementary_symmetric_all, norm, symmetric_eigenvalues, GramMatrix, WedgeWorkspace,
};
use crate::par::map_blocks;
use crate::radii::{circumradius, inradius};
use crate::rng::{self, gaussian_vector, unit_vector, RNG_VERSION};
use crate::subsets::{for_each_subset, SubsetBlocks};
use crate::zonotope::{make_cube, make_regular_rhombic_dodecahedron, regular_simplex_vertices, GeneratorSet};

pub const EQUALITY_REL_TOL: f64 = 1e-9;
pub const EQUALITY_ABS_TOL: f64 = 1e-12;

/// Direction of an inequality `lhs ⋚ rhs`.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub enum Relation {
    #[serde(rename = "<=")]
    AtMost,
    #[serde(rename = ">=")]
    AtLeast,
}

impl fmt::Display for Relation {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            Relation::AtMost => "<=",
            Relation::AtLeast => ">=",
        })
    }
}

/// Outcome of checking one inequality on one input. `slack` is oriented so
/// that it is nonnegative exactly when the inequality holds.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct InequalityVerdict {
    pub holds: bool,
    pub lhs: f64,
    pub rhs: f64,
    pub relation: Relation,
    pub slack: f64,
    pub equality_within_tol: bool,
    pub tol: f64,
    pub input_digest: String,
}

impl InequalityVerdict {
    pub fn new(lhs: f64, relation: Relation, rhs: f64, input_digest: String) -> Self {
        let slack = match relation {
            Relation::AtMost => rhs - lhs,
            Relation::AtLeast => lhs - rhs,
        };
        let tol = EQUALITY_ABS_TOL.max(EQUALITY_REL_TOL * lhs.abs().max(rhs.abs()));
        Self {
            holds: slack >= -tol,
            lhs,
            rhs,
            relation,
            slack,
            equality_within_tol: slack.abs() <= tol,
            tol,
            input_digest,
        }
    }

    pub fn at_most(lhs: f64, rhs: f64, input_digest: String) -> Self {
        Self::new(lhs, Relation::AtMost, rhs, input_digest)
    }

    pub fn at_least(lhs: f64, rhs: f64, input_digest: String) -> Self {
        Self::new(lhs, Relation::AtLeast, rhs, input_digest)
    }
}

fn chain_of(values: &[f64]) -> Vec<f64> {
    let m = values.len();
    let e = elementary_symmetric_all(values, m);
    (1..=m)
        .map(|k| {
            let mean = (e[k] / binomial(m, k)).max(0.0);
            if mean == 0.0 {
                0.0
            } else {
                mean.powf(1.0 / k as f64)
            }
        })
        .collect()
}

/// `M_k = (σ_k / C(m,k))^{1/k}` for `k = 1..m`; non-increasing by Maclaurin's
/// inequality.
pub fn maclaurin_chain(values: &[f64]) -> Result<Vec<f64>> {
    if values.is_empty() {
        return Err(ZonoError::InvalidInput("maclaurin_chain needs at least one value".into()));
    }
    if let Some(&x) = values.iter().find(|x| !(**x > 0.0 && x.is_finite())) {
        return Err(out_of_range("value", x, "> 0"));
    }
    Ok(chain_of(values))
}

/// Which equality case explains `M_k = M_{k+1}` for nonnegative inputs.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum EqualityBranch {
    AllEqual,
    /// At least `m - k + 1` of the values vanish, so both means are zero.
    ManyZeros,
    /// Equal within tolerance without either structural reason.
    Unexplained,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ChainStep {
    pub k: usize,
    pub verdict: InequalityVerdict,
    pub branch: Option<EqualityBranch>,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct MaclaurinReport {
    pub chain: Vec<f64>,
    /// `steps[k-1]` compares `M_k ≥ M_{k+1}`.
    pub steps: Vec<ChainStep>,
}

impl MaclaurinReport {
    pub fn holds(&self) -> bool {
        self.steps.iter().all(|s| s.verdict.holds)
    }
}

/// Maclaurin chain for nonnegative inputs with an equality diagnosis for
/// each consecutive pair.
pub fn maclaurin_chain_nonneg(values: &[f64]) -> Result<MaclaurinReport> {
    if values.is_empty() {
        return Err(ZonoError::InvalidInput("maclaurin_chain_nonneg needs at least one value".into()));
    }
    if let Some(&x) = values.iter().find(|x| !(**x >= 0.0 && x.is_finite())) {
        return Err(out_of_range("value", x, ">= 0"));
    }
    let m = values.len();
    let chain = chain_of(values);
    let dig = digest::values(values);
    let hi = values.iter().cloned().fold(f64::MIN, f64::max);
    let lo = values.iter().cloned().fold(f64::MAX, f64::min);
    let all_equal = hi - lo <= EQUALITY_ABS_TOL.max(EQUALITY_REL_TOL * hi);
    let zeros = values.iter().filter(|&&x| x == 0.0).count();
    let steps = (1..m)
        .map(|k| {
            let verdict = InequalityVerdict::at_least(chain[k - 1], chain[k], dig.clone());
            let branch = verdict.equality_within_tol.then(|| {
                if all_equal {
                    EqualityBranch::AllEqual
                } else if zeros + k > m {
                    EqualityBranch::ManyZeros
                } else {
                    EqualityBranch::Unexplained
                }
            });
            ChainStep { k, verdict, branch }
        })
        .collect();
    Ok(MaclaurinReport { chain, steps })
}

/// Exponent `p` in the vector Maclaurin inequality.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum Exponent {
    Finite(f64),
    Infinity,
}

impl FromStr for Exponent {
    type Err = ZonoError;

    fn from_str(s: &str) -> Result<Self> {
        let t = s.trim();
        if t.eq_ignore_ascii_case("inf") || t.eq_ignore_ascii_case("infinity") {
            return Ok(Exponent::Infinity);
        }
        match t.parse::<f64>() {
            Ok(p) if p > 0.0 && p.is_finite() => Ok(Exponent::Finite(p)),
            Ok(p) if p == f64::INFINITY => Ok(Exponent::Infinity),
            _ => Err(ZonoError::InvalidInput(format!("exponent must be positive or 'inf', got '{s}'"))),
        }
    }
}

/// `max_{|I|=k} |p_I|` over all generators.
pub fn max_wedge_norm(gs: &GeneratorSet, k: usize) -> Result<f64> {
    let (n, d) = (gs.len(), gs.dim());
    if k == 0 || k > d {
        return Err(out_of_range("k", k, format!("1..={d}")));
    }
    check_enumeration(n, k, d, EnumerationLimits::default())?;
    let gens = gs.as_slices();
    let blocks = SubsetBlocks::new(n, k);
    let maxima = map_blocks(blocks.len(), |b| {
        let mut ws = WedgeWorkspace::new(d, k);
        let mut best = 0.0f64;
        blocks.for_each_in_block(b, |s| best = best.max(ws.wedge(s.iter().map(|&i| gens[i]))));
        best
    });
    Ok(maxima.into_iter().fold(0.0, f64::max))
}

/// The conjectured inequality
/// `(V_{k,p}/C(n,k))^{1/(pk)} ≤ (V_{k-1,p}/C(n,k-1))^{1/(p(k-1))}`;
/// for `p = ∞` the normalized sums become `max |p_I|^{1/|I|}`.
pub fn vector_maclaurin(gs: &GeneratorSet, k: usize, p: Exponent) -> Result<InequalityVerdict> {
    let (n, d) = (gs.len(), gs.dim());
    if d > n {
        return Err(ZonoError::InvalidInput(format!("need n >= d, got n = {n}, d = {d}")));
    }
    if k < 2 || k > d {
        return Err(out_of_range("k", k, format!("2..={d}")));
    }
    let side = |j: usize| -> Result<f64> {
        let jf = j as f64;
        match p {
            Exponent::Infinity => Ok(max_wedge_norm(gs, j)?.powf(1.0 / jf)),
            Exponent::Finite(p) => {
                let v = power_k_volume(gs, j, p)?.value;
                Ok((v / binomial(n, j)).max(0.0).powf(1.0 / (p * jf)))
            }
        }
    };
    Ok(InequalityVerdict::at_most(side(k)?, side(k - 1)?, digest::generators(gs)))
}

/// Maclaurin means of the eigenvalues of the `n × n` Gram matrix; entry
/// `k-1` is `(V_{k,2}/C(n,k))^{1/k}`.
pub fn power2_means(gs: &GeneratorSet) -> Result<MaclaurinReport> {
    let g = GramMatrix::from_vectors(&gs.as_slices())?;
    let eig: Vec<f64> = symmetric_eigenvalues(&g)?.into_iter().map(|x| x.max(0.0)).collect();
    maclaurin_chain_nonneg(&eig)
}

/// `(V_{k,2}/C(n,k))^{1/k} ≥ (V_{k+1,2}/C(n,k+1))^{1/(k+1)}`, from the
/// eigenvalues of the Gram matrix of all `n` generators.
pub fn power2_maclaurin(gs: &GeneratorSet, k: usize) -> Result<InequalityVerdict> {
    let d = gs.dim();
    if gs.len() < d {
        return Err(ZonoError::InvalidInput(format!("need n >= d, got n = {}, d = {d}", gs.len())));
    }
    if k == 0 || k >= d {
        return Err(out_of_range("k", k, format!("1..{d}")));
    }
    let mut report = power2_means(gs)?;
    let mut step = report.steps.swap_remove(k - 1);
    step.verdict.input_digest = digest::generators(gs);
    Ok(step.verdict)
}

/// `V_{k,2}^m / V_{m,2}^k`, invariant under scaling.
pub fn power2_ratio(gs: &GeneratorSet, k: usize, m: usize) -> Result<f64> {
    if k == 0 || k >= m || m > gs.dim() {
        return Err(out_of_range("(k, m)", format!("({k}, {m})"), format!("1 <= k < m <= {}", gs.dim())));
    }
    let vk = power_k_volume(gs, k, 2.0)?.value;
    let vm = power_k_volume(gs, m, 2.0)?.value;
    Ok((m as f64 * vk.ln() - k as f64 * vm.ln()).exp())
}

/// Simplex `conv{p_1, …, p_{d+1}}` in `R^d`.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct Simplex {
    vertices: Vec<Vec<f64>>,
}

impl Simplex {
    pub fn new(vertices: Vec<Vec<f64>>) -> Result<Self> {
        let d = vertices.len().checked_sub(1).filter(|&d| d >= 1).ok_or_else(|| {
            ZonoError::InvalidInput(format!("a simplex needs at least 2 vertices, got {}", vertices.len()))
        })?;
        for v in &vertices {
            if v.len() != d {
                return Err(ZonoError::DimensionMismatch { expected: d, found: v.len() });
            }
            if v.iter().any(|x| !x.is_finite()) {
                return Err(ZonoError::InvalidInput("non-finite vertex coordinate".into()));
            }
        }
        Ok(Self { vertices })
    }

    /// Regular simplex centered at the origin with unit volume.
    pub fn regular_unit_volume(d: usize) -> Result<Self> {
        let s = Self::new(regular_simplex_vertices(d, 1.0))?;
        let v = s.volume();
        Ok(s.scaled(v.powf(-1.0 / d as f64)))
    }

    pub fn dim(&self) -> usize {
        self.vertices.len() - 1
    }

    pub fn vertices(&self) -> &[Vec<f64>] {
        &self.vertices
    }

    pub fn scaled(&self, s: f64) -> Self {
        Self {
            vertices: self.vertices.iter().map(|v| v.iter().map(|x| x * s).collect()).collect(),
        }
    }

    /// `d`-volume, `|det(p_i - p_0)| / d!`.
    pub fn volume(&self) -> f64 {
        let d = self.dim();
        let edges = self.edges_from(0, &(1..=d).collect::<Vec<_>>());
        let refs: Vec<&[f64]> = edges.iter().map(Vec::as_slice).collect();
        WedgeWorkspace::new(d, d).wedge(refs) / factorial(d)
    }

    /// The vertices as generators of the rhombic dodecahedron `Σ [o, p_i]`.
    pub fn generator_set(&self) -> Result<GeneratorSet> {
        GeneratorSet::new(self.dim(), self.vertices.clone())
    }

    fn edges_from(&self, apex: usize, others: &[usize]) -> Vec<Vec<f64>> {
        let a = &self.vertices[apex];
        others
            .iter()
            .map(|&j| self.vertices[j].iter().zip(a).map(|(x, y)| x - y).collect())
            .collect()
    }
}

fn factorial(k: usize) -> f64 {
    (1..=k).map(|i| i as f64).product()
}

fn check_face_k(s: &Simplex, k: usize) -> Result<()> {
    let d = s.dim();
    if k == 0 || k >= d {
        return Err(out_of_range("k", k, format!("1..{d}")));
    }
    Ok(())
}

/// `g_k^m(S)`: sum of the `m`-th powers of the `k`-volumes of the `k`-faces.
pub fn simplex_face_power_sum(s: &Simplex, k: usize, m: f64) -> Result<f64> {
    check_face_k(s, k)?;
    if !(m >= 1.0 && m.is_finite()) {
        return Err(out_of_range("m", m, ">= 1"));
    }
    let d = s.dim();
    let mut ws = WedgeWorkspace::new(d, k);
    let kf = factorial(k);
    let mut total = 0.0;
    for_each_subset(d + 1, k + 1, |face| {
        let edges = s.edges_from(face[0], &face[1..]);
        let vol = ws.wedge(edges.iter().map(Vec::as_slice)) / kf;
        total += vol.powf(m);
    });
    Ok(total)
}

/// `f_k(S)`: sum over the `(k-1)`-faces `F` of the `k`-volume of
/// `conv({o} ∪ F)`.
pub fn simplex_cone_sum(s: &Simplex, k: usize) -> Result<f64> {
    check_face_k(s, k)?;
    let d = s.dim();
    let mut ws = WedgeWorkspace::new(d, k);
    let kf = factorial(k);
    let mut total = 0.0;
    for_each_subset(d + 1, k, |face| {
        total += ws.wedge(face.iter().map(|&i| s.vertices[i].as_slice())) / kf;
    });
    Ok(total)
}

/// `g(S) = max |Σ ε_i p_i|` over all sign vectors, by a plain loop.
pub fn simplex_sign_span(s: &Simplex) -> f64 {
    let m = s.vertices.len();
    let d = s.dim();
    let mut best = 0.0f64;
    // the first sign is fixed to +1; flipping all signs keeps |Σ|
    for mask in 0u64..(1u64 << (m - 1)) {
        let mut sum = s.vertices[0].clone();
        for (i, v) in s.vertices.iter().enumerate().skip(1) {
            let e = if mask >> (i - 1) & 1 == 1 { -1.0 } else { 1.0 };
            for j in 0..d {
                sum[j] += e * v[j];
            }
        }
        best = best.max(norm(&sum));
    }
    best
}

/// Whether the origin lies in `conv(points)` for `d+1` points in `R^d`
/// (barycentric coordinates all nonnegative).
pub fn origin_in_hull(points: &[Vec<f64>]) -> bool {
    let m = points.len();
    let d = m - 1;
    let mut a = DMatrix::zeros(m, m);
    for (j, p) in points.iter().enumerate() {
        for i in 0..d {
            a[(i, j)] = p[i];
        }
        a[(d, j)] = 1.0;
    }
    let mut b = DVector::zeros(m);
    b[d] = 1.0;
    match a.lu().solve(&b) {
        Some(lambda) => lambda.iter().all(|&l| l >= 0.0),
        None => false,
    }
}

/// `d+1` Gaussian points conditioned on `o ∈ conv`, by rejection.
pub fn sample_rhombic_dodecahedron(rng: &mut impl Rng, d: usize) -> GeneratorSet {
    loop {
        let pts: Vec<Vec<f64>> = (0..=d).map(|_| gaussian_vector(rng, d)).collect();
        if origin_in_hull(&pts) {
            return GeneratorSet::new(d, pts).expect("well-formed sample");
        }
    }
}

/// `d+1` Gaussian points with their mean subtracted.
pub fn sample_centered_rhombic_dodecahedron(rng: &mut impl Rng, d: usize) -> GeneratorSet {
    let mut pts: Vec<Vec<f64>> = (0..=d).map(|_| gaussian_vector(rng, d)).collect();
    let mean: Vec<f64> = (0..d).map(|j| pts.iter().map(|p| p[j]).sum::<f64>() / (d + 1) as f64).collect();
    for p in &mut pts {
        for (x, c) in p.iter_mut().zip(&mean) {
            *x -= c;
        }
    }
    GeneratorSet::new(d, pts).expect("well-formed sample")
}

pub fn sample_parallelotope(rng: &mut impl Rng, d: usize) -> GeneratorSet {
    let pts = (0..d).map(|_| gaussian_vector(rng, d)).collect();
    GeneratorSet::new(d, pts).expect("well-formed sample")
}

/// `n` unit generators in `R^d`.
pub fn sample_unit_edge(rng: &mut impl Rng, n: usize, d: usize) -> GeneratorSet {
    let pts = (0..n).map(|_| unit_vector(rng, d)).collect();
    GeneratorSet::new(d, pts).expect("well-formed sample")
}

fn sample_simplex(rng: &mut impl Rng, d: usize) -> Simplex {
    Simplex::new((0..=d).map(|_| gaussian_vector(rng, d)).collect()).expect("well-formed sample")
}

/// Available verification suites.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum Suite {
    /// Rhombic dodecahedra with the inradius of the regular one:
    /// `V_k ≥ V_k(reg)`, `k = 1..d`.
    InradiusIntrinsic,
    /// Fixed volume, rhombic dodecahedra: `V_k ≥ V_k(reg)` and
    /// `cirr ≥ cirr(reg)`.
    VolumeRhombic,
    /// Fixed volume, parallelotopes, compared with the cube.
    VolumeParallelotope,
    /// Fixed inradius, rhombic dodecahedra: `cirr ≥ cirr(reg)`.
    InradiusCircumRhombic,
    /// Fixed inradius, parallelotopes: `cirr ≥ cirr(cube)`.
    InradiusCircumParallelotope,
    /// Fixed mean width, parallelotopes: `cirr ≥ cirr(cube)`.
    WidthCircumParallelotope,
    /// Fixed mean width, centered rhombic dodecahedra: `cirr ≥ cirr(reg)`.
    WidthCircumCentered,
    /// Fixed mean width, parallelotopes: `V_2 ≤ V_2(cube)`.
    WidthSecondParallelotope,
    /// Unit edges, rhombic dodecahedra: `V_2 ≤ ½(d+1)√(d²-1)`.
    UnitEdgeSecond,
    /// `V_{k,2}^m / V_{m,2}^k ≥` regular value for every `k < m`.
    PowerRatio,
    /// Maclaurin chain of power-2 volumes for `n ∈ [d, d+4]` generators.
    PowerMaclaurin,
    /// Scalar Maclaurin chain for `m ≤ 12` positive values.
    Maclaurin,
    /// Simplices of unit volume: `f_k(S) ≥ f_k(S_reg)` and `g(S) ≥ g(S_reg)`.
    SimplexCones,
    /// Simplices of unit volume: `g_k^m(S)` against the regular simplex.
    SimplexFacePowers,
    /// Conjectured vector Maclaurin inequality for `p ∈ {1, 2, 3, ∞}`.
    VectorMaclaurin,
}

impl Suite {
    pub const ALL: [Suite; 15] = [
        Suite::InradiusIntrinsic,
        Suite::VolumeRhombic,
        Suite::VolumeParallelotope,
        Suite::InradiusCircumRhombic,
        Suite::InradiusCircumParallelotope,
        Suite::WidthCircumParallelotope,
        Suite::WidthCircumCentered,
        Suite::WidthSecondParallelotope,
        Suite::UnitEdgeSecond,
        Suite::PowerRatio,
        Suite::PowerMaclaurin,
        Suite::Maclaurin,
        Suite::SimplexCones,
        Suite::SimplexFacePowers,
        Suite::VectorMaclaurin,
    ];

    pub fn name(self) -> &'static str {
        match self {
            Suite::InradiusIntrinsic => "inradius-intrinsic",
            Suite::VolumeRhombic => "volume-rd",
            Suite::VolumeParallelotope => "volume-p",
            Suite::InradiusCircumRhombic => "inradius-cirr-rd",
            Suite::InradiusCircumParallelotope => "inradius-cirr-p",
            Suite::WidthCircumParallelotope => "width-cirr-p",
            Suite::WidthCircumCentered => "width-cirr-centered-rd",
            Suite::WidthSecondParallelotope => "width-v2-p",
            Suite::UnitEdgeSecond => "unit-edge-v2",
            Suite::PowerRatio => "power2-ratio",
            Suite::PowerMaclaurin => "power2-maclaurin",
            Suite::Maclaurin => "maclaurin",
            Suite::SimplexCones => "simplex-cones",
            Suite::SimplexFacePowers => "simplex-face-powers",
            Suite::VectorMaclaurin => "vector-maclaurin",
        }
    }

    fn min_dim(self) -> usize {
        if self == Suite::Maclaurin {
            1
        } else {
            2
        }
    }
}

impl fmt::Display for Suite {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.name())
    }
}

impl FromStr for Suite {
    type Err = ZonoError;

    fn from_str(s: &str) -> Result<Self> {
        Suite::ALL
            .iter()
            .copied()
            .find(|x| x.name() == s)
            .ok_or_else(|| ZonoError::Unknown {
                kind: "suite",
                name: s.to_string(),
                available: Suite::ALL.map(Suite::name).join(", "),
            })
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub struct SuiteParams {
    pub trials: usize,
    pub seed: u64,
    pub d: usize,
}

impl SuiteParams {
    pub fn new(trials: usize, seed: u64, d: usize) -> Self {
        Self { trials, seed, d }
    }
}

/// One checked quantity within one trial.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct TrialVerdict {
    pub trial: usize,
    pub quantity: String,
    pub verdict: InequalityVerdict,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct SuiteSummary {
    pub suite: Suite,
    pub d: usize,
    pub trials: usize,
    pub seed: u64,
    pub rng_version: String,
    pub checks: usize,
    pub violations: usize,
    pub equalities: usize,
    pub min_slack: f64,
    pub argmin_trial: Option<usize>,
    pub argmin_digest: Option<String>,
    pub notes: Vec<String>,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct SuiteReport {
    pub summary: SuiteSummary,
    pub verdicts: Vec<TrialVerdict>,
}

impl SuiteReport {
    pub fn all_hold(&self) -> bool {
        self.summary.violations == 0
    }

    pub fn violations(&self) -> impl Iterator<Item = &TrialVerdict> {
        self.verdicts.iter().filter(|v| !v.verdict.holds)
    }

    pub fn csv_header() -> &'static str {
        "trial,quantity,lhs,relation,rhs,slack,equality,holds"
    }

    pub fn to_csv(&self) -> String {
        let mut out = String::from(Self::csv_header());
        out.push('\n');
        for t in &self.verdicts {
            let v = &t.verdict;
            out.push_str(&format!(
                "{},{},{:e},{},{:e},{:e},{},{}\n",
                t.trial, t.quantity, v.lhs, v.relation, v.rhs, v.slack, v.equality_within_tol, v.holds
            ));
        }
        out
    }

    pub fn summary_json(&self) -> String {
        serde_json::to_string_pretty(&self.summary).expect("summary serializes")
    }
}

fn check(trial: usize, quantity: impl Into<String>, verdict: InequalityVerdict) -> TrialVerdict {
    TrialVerdict {
        trial,
        quantity: quantity.into(),
        verdict,
    }
}

/// Quantities of the extremal body that every trial is compared with.
struct Reference {
    volume: f64,
    intrinsic: Vec<f64>,
    inradius: f64,
    circumradius: f64,
    width_sum: f64,
    power_ratios: Vec<(usize, usize, f64)>,
    cones: Vec<f64>,
    sign_span: f64,
    face_powers: Vec<(usize, f64, f64)>,
}

const FACE_POWER_EXPONENTS: [f64; 3] = [1.0, 2.0, 3.0];

impl Reference {
    fn of(gs: &GeneratorSet) -> Result<Self> {
        let d = gs.dim();
        let intrinsic = (1..=d).map(|k| intrinsic_volume(gs, k)).collect::<Result<Vec<_>>>()?;
        let mut power_ratios = Vec::new();
        for m in 2..=d {
            for k in 1..m {
                power_ratios.push((k, m, power2_ratio(gs, k, m)?));
            }
        }
        let simplex = Simplex::regular_unit_volume(d)?;
        let cones = (1..d).map(|k| simplex_cone_sum(&simplex, k)).collect::<Result<Vec<_>>>()?;
        let mut face_powers = Vec::new();
        for k in 1..d {
            for m in FACE_POWER_EXPONENTS {
                face_powers.push((k, m, simplex_face_power_sum(&simplex, k, m)?));
            }
        }
        Ok(Self {
            volume: intrinsic[d - 1],
            inradius: inradius(gs)?.value,
            circumradius: circumradius(gs)?.value,
            width_sum: gs.norms().iter().sum(),
            intrinsic,
            power_ratios,
            cones,
            sign_span: simplex_sign_span(&simplex),
            face_powers,
        })
    }
}

fn scale_to_volume(gs: &GeneratorSet, target: f64) -> Result<GeneratorSet> {
    let d = gs.dim();
    let v = intrinsic_volume(gs, d)?;
    Ok(gs.scaled((target / v).powf(1.0 / d as f64)))
}

fn scale_to_inradius(gs: &GeneratorSet, target: f64) -> Result<GeneratorSet> {
    Ok(gs.scaled(target / inradius(gs)?.value))
}

fn scale_to_width(gs: &GeneratorSet, target_sum: f64) -> GeneratorSet {
    gs.scaled(target_sum / gs.norms().iter().sum::<f64>())
}

fn intrinsic_checks(trial: usize, gs: &GeneratorSet, reference: &Reference, ks: std::ops::RangeInclusive<usize>) -> Result<Vec<TrialVerdict>> {
    let dig = digest::generators(gs);
    ks.map(|k| {
        let v = intrinsic_volume(gs, k)?;
        Ok(check(trial, format!("V_{k}"), InequalityVerdict::at_least(v, reference.intrinsic[k - 1], dig.clone())))
    })
    .collect()
}

fn circum_check(trial: usize, gs: &GeneratorSet, reference: &Reference) -> Result<TrialVerdict> {
    let c = circumradius(gs)?.value;
    Ok(check(trial, "cirr", InequalityVerdict::at_least(c, reference.circumradius, digest::generators(gs))))
}

fn run_trial(suite: Suite, d: usize, trial: usize, seed: u64, reference: &Reference) -> Result<Vec<TrialVerdict>> {
    let mut rng = rng::stream(seed, trial as u64);
    let rng = &mut rng;
    let mut out = Vec::new();
    match suite {
        Suite::InradiusIntrinsic => {
            let gs = scale_to_inradius(&sample_rhombic_dodecahedron(rng, d), reference.inradius)?;
            out.extend(intrinsic_checks(trial, &gs, reference, 1..=d)?);
        }
        Suite::VolumeRhombic => {
            let gs = scale_to_volume(&sample_rhombic_dodecahedron(rng, d), reference.volume)?;
            out.extend(intrinsic_checks(trial, &gs, reference, 1..=d - 1)?);
            out.push(circum_check(trial, &gs, reference)?);
        }
        Suite::VolumeParallelotope => {
            let gs = scale_to_volume(&sample_parallelotope(rng, d), reference.volume)?;
            out.extend(intrinsic_checks(trial, &gs, reference, 1..=d - 1)?);
            out.push(circum_check(trial, &gs, reference)?);
        }
        Suite::InradiusCircumRhombic => {
            let gs = scale_to_inradius(&sample_rhombic_dodecahedron(rng, d), reference.inradius)?;
            out.push(circum_check(trial, &gs, reference)?);
        }
        Suite::InradiusCircumParallelotope => {
            let gs = scale_to_inradius(&sample_parallelotope(rng, d), reference.inradius)?;
            out.push(circum_check(trial, &gs, reference)?);
        }
        Suite::WidthCircumParallelotope => {
            let gs = scale_to_width(&sample_parallelotope(rng, d), reference.width_sum);
            out.push(circum_check(trial, &gs, reference)?);
        }
        Suite::WidthCircumCentered => {
            let gs = scale_to_width(&sample_centered_rhombic_dodecahedron(rng, d), reference.width_sum);
            out.push(circum_check(trial, &gs, reference)?);
        }
        Suite::WidthSecondParallelotope => {
            let gs = scale_to_width(&sample_parallelotope(rng, d), reference.width_sum);
            let v2 = intrinsic_volume(&gs, 2)?;
            out.push(check(trial, "V_2", InequalityVerdict::at_most(v2, reference.intrinsic[1], digest::generators(&gs))));
        }
        Suite::UnitEdgeSecond => {
            let gs = sample_unit_edge(rng, d + 1, d);
            let v2 = intrinsic_volume(&gs, 2)?;
            out.push(check(trial, "V_2", InequalityVerdict::at_most(v2, reference.intrinsic[1], digest::generators(&gs))));
        }
        Suite::PowerRatio => {
            let gs = sample_rhombic_dodecahedron(rng, d);
            let dig = digest::generators(&gs);
            for &(k, m, r) in &reference.power_ratios {
                let v = power2_ratio(&gs, k, m)?;
                out.push(check(trial, format!("V_{k},2^{m}/V_{m},2^{k}"), InequalityVerdict::at_least(v, r, dig.clone())));
            }
        }
        Suite::PowerMaclaurin => {
            let n = d + rng.random_range(0..=4);
            let pts = (0..n).map(|_| gaussian_vector(rng, d)).collect();
            let gs = GeneratorSet::new(d, pts)?;
            for k in 1..d {
                out.push(check(trial, format!("M_{k}>=M_{}", k + 1), power2_maclaurin(&gs, k)?));
            }
        }
        Suite::Maclaurin => {
            let m = rng.random_range(1..=12);
            let values: Vec<f64> = (0..m).map(|_| (4.0 * rng::gaussian(rng)).exp()).collect();
            for step in maclaurin_chain_nonneg(&values)?.steps {
                out.push(check(trial, format!("M_{}>=M_{}", step.k, step.k + 1), step.verdict));
            }
        }
        Suite::SimplexCones => {
            let s = sample_simplex(rng, d);
            let s = s.scaled(s.volume().powf(-1.0 / d as f64));
            let dig = digest::values(&s.vertices().concat());
            for k in 1..d {
                let f = simplex_cone_sum(&s, k)?;
                out.push(check(trial, format!("f_{k}"), InequalityVerdict::at_least(f, reference.cones[k - 1], dig.clone())));
            }
            out.push(check(trial, "g", InequalityVerdict::at_least(simplex_sign_span(&s), reference.sign_span, dig)));
        }
        Suite::SimplexFacePowers => {
            let s = sample_simplex(rng, d);
            let s = s.scaled(s.volume().powf(-1.0 / d as f64));
            let dig = digest::values(&s.vertices().concat());
            for &(k, m, r) in &reference.face_powers {
                let g = simplex_face_power_sum(&s, k, m)?;
                out.push(check(trial, format!("g_{k}^{m}"), InequalityVerdict::at_least(g, r, dig.clone())));
            }
        }
        Suite::VectorMaclaurin => {
            let n = d + rng.random_range(0..=3);
            let pts = (0..n).map(|_| gaussian_vector(rng, d)).collect();
            let gs = GeneratorSet::new(d, pts)?;
            for p in [Exponent::Finite(1.0), Exponent::Finite(2.0), Exponent::Finite(3.0), Exponent::Infinity] {
                for k in 2..=d {
                    let label = match p {
                        Exponent::Finite(p) => format!("k={k},p={p}"),
                        Exponent::Infinity => format!("k={k},p=inf"),
                    };
                    out.push(check(trial, label, vector_maclaurin(&gs, k, p)?));
                }
            }
        }
    }
    Ok(out)
}

fn suite_notes(suite: Suite) -> Vec<String> {
    match suite {
        Suite::UnitEdgeSecond => vec![
            "the statement reads V_2(Z) >= V_2(reg) but its proof and the surrounding text establish V_2(Z) <= V_2(reg); the suite checks <=".into(),
        ],
        Suite::VolumeRhombic | Suite::VolumeParallelotope => {
            vec!["the circumradius bound has no stated equality case; near-equalities are reported unclassified".into()]
        }
        Suite::SimplexFacePowers => vec![
            "at fixed volume g_k^m is unbounded above; the suite checks that the regular simplex is the minimizer".into(),
        ],
        Suite::VectorMaclaurin => vec!["open conjecture: a violation is a potential counterexample".into()],
        _ => Vec::new(),
    }
}

/// Runs `params.trials` independent random trials of `suite`. Trial `i`
/// draws from RNG stream `i` of `params.seed`; verdicts are ordered by trial.
pub fn verify_theorem_suite(suite: Suite, params: SuiteParams) -> Result<SuiteReport> {
    let d = params.d;
    if params.trials == 0 {
        return Err(out_of_range("trials", params.trials, ">= 1"));
    }
    if d < suite.min_dim() {
        return Err(out_of_range("d", d, format!(">= {}", suite.min_dim())));
    }
    let reference = match suite {
        Suite::Maclaurin | Suite::PowerMaclaurin | Suite::VectorMaclaurin => None,
        Suite::VolumeParallelotope
        | Suite::InradiusCircumParallelotope
        | Suite::WidthCircumParallelotope
        | Suite::WidthSecondParallelotope => Some(Reference::of(&make_cube(d, 1.0)?)?),
        _ => Some(Reference::of(&make_regular_rhombic_dodecahedron(d, 1.0)?)?),
    };
    let empty = Reference {
        volume: 0.0,
        intrinsic: Vec::new(),
        inradius: 0.0,
        circumradius: 0.0,
        width_sum: 0.0,
        power_ratios: Vec::new(),
        cones: Vec::new(),
        sign_span: 0.0,
        face_powers: Vec::new(),
    };
    let reference = reference.as_ref().unwrap_or(&empty);
    let per_trial = map_blocks(params.trials, |t| run_trial(suite, d, t, params.seed, reference));
    let mut verdicts = Vec::new();
    for r in per_trial {
        verdicts.extend(r?);
    }
    let mut min_slack = f64::INFINITY;
    let mut argmin = None;
    for (i, t) in verdicts.iter().enumerate() {
        // scale-free comparison across quantities of different sizes
        let rel = t.verdict.slack / t.verdict.lhs.abs().max(t.verdict.rhs.abs()).max(EQUALITY_ABS_TOL);
        if rel < min_slack {
            min_slack = rel;
            argmin = Some(i);
        }
    }
    let summary = SuiteSummary {
        suite,
        d,
        trials: params.trials,
        seed: params.seed,
        rng_version: RNG_VERSION.to_string(),
        checks: verdicts.len(),
        violations: verdicts.iter().filter(|t| !t.verdict.holds).count(),
        equalities: verdicts.iter().filter(|t| t.verdict.equality_within_tol).count(),
        min_slack,
        argmin_trial: argmin.map(|i| verdicts[i].trial),
        argmin_digest: argmin.map(|i| verdicts[i].verdict.input_digest.clone()),
        notes: suite_notes(suite),
    };
    Ok(SuiteReport { summary, verdicts })
}

/// Closed form `½ (d+1) √(d² - 1)` for `V_2` of the unit-edge regular
/// rhombic dodecahedron.
pub fn regular_unit_edge_v2(d: usize) -> f64 {
    let d = d as f64;
    0.5 * (d + 1.0) * (d * d - 1.0).sqrt()
}
