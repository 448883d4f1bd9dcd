//! The generator-set model of a zonotope `Z = Σ [o, p_i]`, named
//! constructors, projections and projection bodies.

use serde::{Deserialize, Serialize};

use crate::error::{out_of_range, Result, ZonoError};
use crate::geometry::{dot, norm, orthogonal_complement_normal, span_rank, WedgeWorkspace};
use crate::rng;
use crate::subsets::SubsetBlocks;

/// Ordered list of `n` generator vectors in `R^d`.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(try_from = "RawGeneratorSet", into = "RawGeneratorSet")]
pub struct GeneratorSet {
    dim: usize,
    generators: Vec<Vec<f64>>,
    label: Option<String>,
}

#[derive(Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
struct RawGeneratorSet {
    dim: usize,
    label: Option<String>,
    generators: Vec<Vec<f64>>,
}

impl TryFrom<RawGeneratorSet> for GeneratorSet {
    type Error = ZonoError;

    fn try_from(raw: RawGeneratorSet) -> Result<Self> {
        let mut gs = GeneratorSet::new(raw.dim, raw.generators)?;
        gs.label = raw.label;
        Ok(gs)
    }
}

impl From<GeneratorSet> for RawGeneratorSet {
    fn from(gs: GeneratorSet) -> Self {
        RawGeneratorSet {
            dim: gs.dim,
            label: gs.label,
            generators: gs.generators,
        }
    }
}

impl GeneratorSet {
    pub fn new(dim: usize, generators: Vec<Vec<f64>>) -> Result<Self> {
        if dim == 0 {
            return Err(ZonoError::InvalidInput("dim: must be >= 1".into()));
        }
        if generators.is_empty() {
            return Err(ZonoError::InvalidInput("generators: at least one generator is required".into()));
        }
        for (i, g) in generators.iter().enumerate() {
            if g.len() != dim {
                return Err(ZonoError::InvalidInput(format!(
                    "generators[{i}]: expected {dim} coordinates, found {}",
                    g.len()
                )));
            }
            if let Some(j) = g.iter().position(|x| !x.is_finite()) {
                return Err(ZonoError::InvalidInput(format!(
                    "generators[{i}][{j}]: coordinate is not finite"
                )));
            }
        }
        Ok(Self {
            dim,
            generators,
            label: None,
        })
    }

    pub fn with_label(mut self, label: impl Into<String>) -> Self {
        self.label = Some(label.into());
        self
    }

    pub fn dim(&self) -> usize {
        self.dim
    }

    pub fn len(&self) -> usize {
        self.generators.len()
    }

    pub fn is_empty(&self) -> bool {
        self.generators.is_empty()
    }

    pub fn label(&self) -> Option<&str> {
        self.label.as_deref()
    }

    pub fn generators(&self) -> &[Vec<f64>] {
        &self.generators
    }

    pub fn generator(&self, i: usize) -> &[f64] {
        &self.generators[i]
    }

    pub fn as_slices(&self) -> Vec<&[f64]> {
        self.generators.iter().map(|g| g.as_slice()).collect()
    }

    /// Generators that are not exactly zero; every functional ignores zero
    /// generators.
    pub fn nonzero_slices(&self) -> Vec<&[f64]> {
        self.generators
            .iter()
            .filter(|g| g.iter().any(|&x| x != 0.0))
            .map(|g| g.as_slice())
            .collect()
    }

    pub fn zero_generator_indices(&self) -> Vec<usize> {
        self.generators
            .iter()
            .enumerate()
            .filter(|(_, g)| g.iter().all(|&x| x == 0.0))
            .map(|(i, _)| i)
            .collect()
    }

    pub fn norms(&self) -> Vec<f64> {
        self.generators.iter().map(|g| norm(g)).collect()
    }

    /// Dimension of the span of the generators.
    pub fn rank(&self) -> usize {
        span_rank(&self.as_slices(), self.dim).unwrap_or(0)
    }

    pub fn is_full_dimensional(&self) -> bool {
        self.rank() == self.dim
    }

    pub fn scaled(&self, s: f64) -> GeneratorSet {
        self.map_generators(|g| g.iter().map(|x| x * s).collect())
    }

    pub fn map_generators(&self, mut f: impl FnMut(&[f64]) -> Vec<f64>) -> GeneratorSet {
        GeneratorSet {
            dim: self.dim,
            generators: self.generators.iter().map(|g| f(g)).collect(),
            label: self.label.clone(),
        }
    }

    pub fn to_json(&self) -> String {
        serde_json::to_string_pretty(self).expect("generator sets always serialize")
    }

    pub fn from_json(s: &str) -> std::result::Result<Self, serde_json::Error> {
        serde_json::from_str(s)
    }

    pub fn classify(&self) -> ZonotopeClassification {
        classify(self)
    }
}

pub(crate) fn check_unit(u: &[f64], d: usize) -> Result<()> {
    if u.len() != d {
        return Err(ZonoError::DimensionMismatch {
            expected: d,
            found: u.len(),
        });
    }
    let n = norm(u);
    if (n - 1.0).abs() > 1e-9 {
        return Err(ZonoError::NotUnit { norm: n });
    }
    Ok(())
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ZonotopeClassification {
    pub is_equilateral: bool,
    pub common_length: Option<f64>,
    pub is_unit_edge: bool,
    pub is_centered: bool,
    /// `None` when checking every `d`-subset would exceed 10^6 subsets.
    pub is_cubical_candidate: Option<bool>,
    pub full_dimensional: bool,
    pub zero_generators: Vec<usize>,
}

const CLASSIFY_REL_TOL: f64 = 1e-9;

fn classify(gs: &GeneratorSet) -> ZonotopeClassification {
    let norms = gs.norms();
    let max = norms.iter().cloned().fold(0.0, f64::max);
    let min = norms.iter().cloned().fold(f64::INFINITY, f64::min);
    let is_equilateral = max > 0.0 && (max - min) <= CLASSIFY_REL_TOL * max;
    let common_length = is_equilateral.then(|| norms.iter().sum::<f64>() / norms.len() as f64);
    let is_unit_edge = is_equilateral && norms.iter().all(|l| (l - 1.0).abs() <= CLASSIFY_REL_TOL);

    let d = gs.dim();
    let mut sum = vec![0.0; d];
    for g in gs.generators() {
        for (s, x) in sum.iter_mut().zip(g) {
            *s += x;
        }
    }
    let total: f64 = norms.iter().sum();
    let is_centered = norm(&sum) <= CLASSIFY_REL_TOL * total.max(f64::MIN_POSITIVE);

    ZonotopeClassification {
        is_equilateral,
        common_length,
        is_unit_edge,
        is_centered,
        is_cubical_candidate: cubical_candidate(gs),
        full_dimensional: gs.is_full_dimensional(),
        zero_generators: gs.zero_generator_indices(),
    }
}

fn cubical_candidate(gs: &GeneratorSet) -> Option<bool> {
    let n = gs.len();
    let k = gs.dim().min(n);
    if crate::geometry::binomial(n, k) > 1e6 {
        return None;
    }
    let gens = gs.as_slices();
    let norms = gs.norms();
    let mut ws = WedgeWorkspace::new(gs.dim(), k);
    let blocks = SubsetBlocks::new(n, k);
    let mut ok = true;
    for b in 0..blocks.len() {
        blocks.for_each_in_block(b, |s| {
            if ok {
                let w = ws.wedge(s.iter().map(|&i| gens[i]));
                let scale: f64 = s.iter().map(|&i| norms[i]).product();
                if w.is_nan() || w <= 1e-9 * scale {
                    ok = false;
                }
            }
        });
    }
    Some(ok)
}

/// Cube of the given edge length: `edge · e_i`, `i = 1..d`.
pub fn make_cube(d: usize, edge: f64) -> Result<GeneratorSet> {
    if d == 0 {
        return Err(out_of_range("d", d, ">= 1"));
    }
    check_positive("edge", edge)?;
    let gens = (0..d)
        .map(|i| {
            let mut v = vec![0.0; d];
            v[i] = edge;
            v
        })
        .collect();
    Ok(GeneratorSet::new(d, gens)?.with_label(format!("cube(d={d}, edge={edge})")))
}

fn check_positive(what: &'static str, x: f64) -> Result<()> {
    if x > 0.0 && x.is_finite() {
        Ok(())
    } else {
        Err(out_of_range(what, x, "> 0"))
    }
}

/// Vertices of a regular simplex centered at the origin, each of norm
/// `radius`, expressed in the Helmert basis of `{x ∈ R^{d+1} : Σx = 0}`.
pub fn regular_simplex_vertices(d: usize, radius: f64) -> Vec<Vec<f64>> {
    let m = d + 1;
    // basis b_j = (1, …, 1, -j, 0, …) / sqrt(j (j+1)), j = 1..d
    let basis: Vec<Vec<f64>> = (1..=d)
        .map(|j| {
            let s = ((j * (j + 1)) as f64).sqrt();
            (0..m)
                .map(|i| match i.cmp(&j) {
                    std::cmp::Ordering::Less => 1.0 / s,
                    std::cmp::Ordering::Equal => -(j as f64) / s,
                    std::cmp::Ordering::Greater => 0.0,
                })
                .collect()
        })
        .collect();
    let scale = radius / ((m as f64 - 1.0) / m as f64).sqrt();
    (0..m)
        .map(|i| {
            // e_i - centroid, in the basis
            basis
                .iter()
                .map(|b| {
                    let centroid_part: f64 = b.iter().sum::<f64>() / m as f64;
                    (b[i] - centroid_part) * scale
                })
                .collect()
        })
        .collect()
}

/// Regular rhombic dodecahedron: `d+1` generators of length `edge` forming a
/// regular simplex centered at the origin (pairwise inner product
/// `-edge²/d`).
pub fn make_regular_rhombic_dodecahedron(d: usize, edge: f64) -> Result<GeneratorSet> {
    if d < 2 {
        return Err(out_of_range("d", d, ">= 2"));
    }
    check_positive("edge", edge)?;
    let gens = regular_simplex_vertices(d, edge);
    Ok(GeneratorSet::new(d, gens)?.with_label(format!("regular-rhombic-dodecahedron(d={d}, edge={edge})")))
}

/// Planar zonogon with `n` generators of length `edge` at angles `kπ/n`; a
/// regular `2n`-gon.
pub fn make_regular_zonogon(n: usize, edge: f64) -> Result<GeneratorSet> {
    if n < 2 {
        return Err(out_of_range("n", n, ">= 2"));
    }
    check_positive("edge", edge)?;
    let gens = (0..n)
        .map(|k| {
            let a = k as f64 * std::f64::consts::PI / n as f64;
            vec![edge * a.cos(), edge * a.sin()]
        })
        .collect();
    Ok(GeneratorSet::new(2, gens)?.with_label(format!("regular-zonogon(n={n}, edge={edge})")))
}

/// `n` i.i.d. uniform unit vectors in `R^d`, reproducible from `seed`.
pub fn random_unit_generators(n: usize, d: usize, seed: u64) -> Result<GeneratorSet> {
    if n == 0 {
        return Err(out_of_range("n", n, ">= 1"));
    }
    if d < 2 {
        return Err(out_of_range("d", d, ">= 2"));
    }
    let mut r = rng::stream(seed, 0);
    let gens = (0..n).map(|_| rng::unit_vector(&mut r, d)).collect();
    Ok(GeneratorSet::new(d, gens)?.with_label(format!("random-unit(n={n}, d={d}, seed={seed})")))
}

/// A generator set together with the translate `½ Σ p_i` that moves
/// `Σ [o, p_i]` onto the origin-symmetric `½ Σ [-p_i, p_i]`.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct CenteredZonotope {
    pub generators: GeneratorSet,
    pub translate: Vec<f64>,
}

pub fn center(gs: &GeneratorSet) -> CenteredZonotope {
    let mut t = vec![0.0; gs.dim()];
    for g in gs.generators() {
        for (s, x) in t.iter_mut().zip(g) {
            *s += 0.5 * x;
        }
    }
    CenteredZonotope {
        generators: gs.clone(),
        translate: t,
    }
}

/// Orthonormal basis of `u^⊥`: Gram–Schmidt on `u` followed by the standard
/// basis vectors in index order, skipping the coordinate where `|u_j|` is
/// largest (first one on ties).
pub fn orthonormal_complement_basis(u: &[f64]) -> Vec<Vec<f64>> {
    let d = u.len();
    let pivot = (0..d)
        .fold((0, -1.0), |(bi, bv), j| if u[j].abs() > bv { (j, u[j].abs()) } else { (bi, bv) })
        .0;
    let mut basis: Vec<Vec<f64>> = Vec::with_capacity(d - 1);
    for j in (0..d).filter(|&j| j != pivot) {
        let mut v = vec![0.0; d];
        v[j] = 1.0;
        for _ in 0..2 {
            let c = dot(u, &v);
            for (vx, ux) in v.iter_mut().zip(u) {
                *vx -= c * ux;
            }
            for b in &basis {
                let c = dot(b, &v);
                for (vx, bx) in v.iter_mut().zip(b) {
                    *vx -= c * bx;
                }
            }
        }
        let n = norm(&v);
        basis.push(v.into_iter().map(|x| x / n).collect());
    }
    basis
}

/// Orthogonal projection onto `u^⊥`, in the basis of
/// [`orthonormal_complement_basis`]. Keeps all `n` generators.
pub fn project(gs: &GeneratorSet, u: &[f64]) -> Result<GeneratorSet> {
    check_unit(u, gs.dim())?;
    if gs.dim() < 2 {
        return Err(out_of_range("d", gs.dim(), ">= 2"));
    }
    let basis = orthonormal_complement_basis(u);
    project_onto_basis(gs, &basis)
}

/// Coordinates of every generator in the given orthonormal frame.
pub fn project_onto_basis(gs: &GeneratorSet, basis: &[Vec<f64>]) -> Result<GeneratorSet> {
    let gens = gs
        .generators()
        .iter()
        .map(|g| basis.iter().map(|b| dot(b, g)).collect())
        .collect();
    let mut out = GeneratorSet::new(basis.len(), gens)?;
    out.label = gs.label.as_ref().map(|l| format!("{l} | projection"));
    Ok(out)
}

/// Projection body `Π Z` as a zonotope: for each `(d-1)`-subset `I` of
/// generators, the generator `2 |p_I| u_I`. Requires every `(d-1)`-subset of
/// the nonzero generators to be linearly independent.
pub fn projection_body(gs: &GeneratorSet) -> Result<GeneratorSet> {
    let d = gs.dim();
    if d < 2 {
        return Err(out_of_range("d", d, ">= 2"));
    }
    let rank = gs.rank();
    if rank < d {
        return Err(ZonoError::Degenerate { rank, dim: d });
    }
    let gens = gs.nonzero_slices();
    let norms: Vec<f64> = gens.iter().map(|g| norm(g)).collect();
    let mut ws = WedgeWorkspace::new(d, d - 1);
    let mut out = Vec::new();
    let mut failure = None;
    crate::subsets::for_each_subset(gens.len(), d - 1, |s| {
        if failure.is_some() {
            return;
        }
        let vs: Vec<&[f64]> = s.iter().map(|&i| gens[i]).collect();
        let w = ws.wedge(vs.iter().copied());
        let scale: f64 = s.iter().map(|&i| norms[i]).product();
        let normal = orthogonal_complement_normal(&vs, d).ok().flatten();
        match normal {
            Some(u) if w > 1e-9 * scale => out.push(u.iter().map(|x| 2.0 * w * x).collect()),
            _ => failure = Some(s.to_vec()),
        }
    });
    if let Some(subset) = failure {
        return Err(ZonoError::GeneralPosition { subset });
    }
    let mut pb = GeneratorSet::new(d, out)?;
    pb.label = Some(format!("projection-body({})", gs.label().unwrap_or("unnamed")));
    Ok(pb)
}

#[cfg(test)]
mod tests {
    use super::*;
    use approx::assert_relative_eq;

    #[test]
    fn cube_examples() {
        let c = make_cube(3, 1.0).unwrap();
        assert_eq!(c.generators(), &[vec![1., 0., 0.], vec![0., 1., 0.], vec![0., 0., 1.]]);
        let c = make_cube(2, 2.0).unwrap();
        assert_eq!(c.generators(), &[vec![2., 0.], vec![0., 2.]]);
        let k = make_cube(4, 1.0).unwrap().classify();
        assert!(k.is_equilateral && k.is_unit_edge && !k.is_centered);
        assert_eq!(k.is_cubical_candidate, Some(true));
        assert!(k.full_dimensional);
    }

    #[test]
    fn regular_rhombic_dodecahedron_gram() {
        for d in 2..=7 {
            for edge in [1.0, 2.5] {
                let z = make_regular_rhombic_dodecahedron(d, edge).unwrap();
                assert_eq!(z.len(), d + 1);
                for i in 0..=d {
                    for j in 0..=d {
                        let g = dot(z.generator(i), z.generator(j));
                        let want = if i == j { edge * edge } else { -edge * edge / d as f64 };
                        assert!((g - want).abs() < 1e-12 * edge * edge, "d={d} ({i},{j}) {g} vs {want}");
                    }
                }
                let k = z.classify();
                assert!(k.is_centered && k.is_equilateral);
            }
        }
        let z = make_regular_rhombic_dodecahedron(3, 1.0).unwrap();
        assert_relative_eq!(dot(z.generator(0), z.generator(1)), -1.0 / 3.0, epsilon = 1e-12);
        // d = 2: three unit vectors at 120°
        let z = make_regular_rhombic_dodecahedron(2, 1.0).unwrap();
        for i in 0..3 {
            assert_relative_eq!(norm(z.generator(i)), 1.0, epsilon = 1e-14);
            let c = dot(z.generator(i), z.generator((i + 1) % 3));
            assert_relative_eq!(c, (2.0 * std::f64::consts::PI / 3.0).cos(), epsilon = 1e-14);
        }
    }

    #[test]
    fn centering_translates() {
        assert_eq!(center(&make_cube(3, 1.0).unwrap()).translate, vec![0.5, 0.5, 0.5]);
        let rd = center(&make_regular_rhombic_dodecahedron(3, 1.0).unwrap());
        assert!(norm(&rd.translate) < 1e-12);
        let gs = GeneratorSet::new(2, vec![vec![1.0, 0.0], vec![-1.0, 0.0]]).unwrap();
        let c = center(&gs);
        assert_eq!(c.translate, vec![0.0, 0.0]);
        assert_eq!(c.generators, gs);
    }

    #[test]
    fn projection_of_cube() {
        let c = make_cube(3, 1.0).unwrap();
        let p = project(&c, &[0.0, 0.0, 1.0]).unwrap();
        assert_eq!(p.len(), 3);
        assert_eq!(p.dim(), 2);
        assert_eq!(p.generators(), &[vec![1.0, 0.0], vec![0.0, 1.0], vec![0.0, 0.0]]);
        assert_eq!(p.zero_generator_indices(), vec![2]);
        assert!(matches!(project(&c, &[0.0, 0.0, 2.0]), Err(ZonoError::NotUnit { .. })));
    }

    #[test]
    fn complement_basis_is_orthonormal() {
        let u = [0.48, -0.6, 0.64];
        let b = orthonormal_complement_basis(&u);
        assert_eq!(b.len(), 2);
        for (i, bi) in b.iter().enumerate() {
            assert!(dot(bi, &u).abs() < 1e-15);
            for (j, bj) in b.iter().enumerate() {
                let want = if i == j { 1.0 } else { 0.0 };
                assert!((dot(bi, bj) - want).abs() < 1e-15);
            }
        }
    }

    #[test]
    fn projection_body_of_cubes() {
        for d in 2..=4 {
            for a in [1.0, 2.0] {
                let pb = projection_body(&make_cube(d, a).unwrap()).unwrap();
                assert_eq!(pb.len(), d);
                let want = 2.0 * f64::powi(a, d as i32 - 1);
                for g in pb.generators() {
                    let nz: Vec<f64> = g.iter().copied().filter(|x| *x != 0.0).collect();
                    assert_eq!(nz.len(), 1);
                    assert_eq!(nz[0].abs(), want);
                }
            }
        }
    }

    #[test]
    fn projection_body_rejects_dependent_pairs() {
        let gs = GeneratorSet::new(
            3,
            vec![vec![1., 0., 0.], vec![0., 1., 0.], vec![2., 0., 0.], vec![0., 0., 1.]],
        )
        .unwrap();
        assert!(matches!(projection_body(&gs), Err(ZonoError::GeneralPosition { .. })));
    }

    #[test]
    fn random_generators_are_unit_and_frozen() {
        let gs = random_unit_generators(50, 4, 9).unwrap();
        for g in gs.generators() {
            assert!((norm(g) - 1.0).abs() < 1e-12);
        }
        assert_eq!(gs, random_unit_generators(50, 4, 9).unwrap());
    }

    #[test]
    fn json_round_trip_and_errors() {
        let gs = random_unit_generators(5, 3, 1).unwrap();
        let back = GeneratorSet::from_json(&gs.to_json()).unwrap();
        assert_eq!(gs, back);
        for (a, b) in gs.generators().iter().flatten().zip(back.generators().iter().flatten()) {
            assert_eq!(a.to_bits(), b.to_bits());
        }
        let err = GeneratorSet::from_json(r#"{"dim": 2, "label": null, "generators": [[1.0]]}"#)
            .unwrap_err()
            .to_string();
        assert!(err.contains("generators[0]"), "{err}");
        let err = GeneratorSet::from_json(r#"{"label": null, "generators": [[1.0]]}"#)
            .unwrap_err()
            .to_string();
        assert!(err.contains("dim"), "{err}");
    }
}
