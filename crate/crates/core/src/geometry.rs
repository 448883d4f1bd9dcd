//! Small dense linear algebra on generator vectors: wedge norms, Gram
//! matrices and their symmetric sums, generalized cross products, and the
//! unit-ball constants.

use nalgebra::DMatrix;

use crate::error::{out_of_range, Result, ZonoError};

pub fn dot(a: &[f64], b: &[f64]) -> f64 {
    a.iter().zip(b).map(|(x, y)| x * y).sum()
}

pub fn norm(a: &[f64]) -> f64 {
    dot(a, a).sqrt()
}

pub fn scaled(a: &[f64], s: f64) -> Vec<f64> {
    a.iter().map(|x| x * s).collect()
}

/// Reusable scratch space for repeated wedge-norm evaluations of `k`
/// vectors in `R^d`.
#[derive(Debug, Clone)]
pub struct WedgeWorkspace {
    d: usize,
    q: Vec<f64>,
    v: Vec<f64>,
}

impl WedgeWorkspace {
    pub fn new(d: usize, k: usize) -> Self {
        Self {
            d,
            q: vec![0.0; d * k.max(1)],
            v: vec![0.0; d],
        }
    }

    /// `|v_1 ∧ … ∧ v_k|` via Gram–Schmidt with reorthogonalization; equals
    /// `sqrt(det Gram)` but keeps full relative accuracy for nearly
    /// dependent inputs.
    pub fn wedge<'a, I>(&mut self, vectors: I) -> f64
    where
        I: IntoIterator<Item = &'a [f64]>,
    {
        let d = self.d;
        let mut prod = 1.0;
        for (j, a) in vectors.into_iter().enumerate() {
            if self.q.len() < (j + 1) * d {
                self.q.resize((j + 1) * d, 0.0);
            }
            self.v.copy_from_slice(a);
            for _pass in 0..2 {
                for i in 0..j {
                    let qi = &self.q[i * d..(i + 1) * d];
                    let c = dot(qi, &self.v);
                    for (vx, qx) in self.v.iter_mut().zip(qi) {
                        *vx -= c * qx;
                    }
                }
            }
            let r = norm(&self.v);
            if r == 0.0 {
                return 0.0;
            }
            prod *= r;
            let qj = &mut self.q[j * d..(j + 1) * d];
            for (qx, vx) in qj.iter_mut().zip(&self.v) {
                *qx = vx / r;
            }
        }
        prod
    }
}

/// `|v_1 ∧ … ∧ v_k|`, the k-volume of the parallelotope spanned by the inputs.
pub fn wedge_norm(vectors: &[&[f64]]) -> Result<f64> {
    let d = check_vectors(vectors)?;
    if vectors.len() > d {
        return Err(out_of_range("k", vectors.len(), format!("1..={d}")));
    }
    Ok(WedgeWorkspace::new(d, vectors.len()).wedge(vectors.iter().copied()))
}

fn check_vectors(vectors: &[&[f64]]) -> Result<usize> {
    let Some(first) = vectors.first() else {
        return Err(out_of_range("k", 0, ">= 1"));
    };
    let d = first.len();
    if d == 0 {
        return Err(out_of_range("dimension", 0, ">= 1"));
    }
    for v in vectors {
        if v.len() != d {
            return Err(ZonoError::DimensionMismatch {
                expected: d,
                found: v.len(),
            });
        }
        if v.iter().any(|x| !x.is_finite()) {
            return Err(ZonoError::InvalidInput("non-finite coordinate".into()));
        }
    }
    Ok(d)
}

/// Determinant of a square row-major matrix by Gaussian elimination with
/// partial pivoting.
pub fn determinant(mut a: Vec<f64>, n: usize) -> f64 {
    debug_assert_eq!(a.len(), n * n);
    let mut det = 1.0;
    for col in 0..n {
        let mut piv = col;
        let mut best = a[col * n + col].abs();
        for r in col + 1..n {
            let v = a[r * n + col].abs();
            if v > best {
                best = v;
                piv = r;
            }
        }
        if best == 0.0 {
            return 0.0;
        }
        if piv != col {
            for c in 0..n {
                a.swap(col * n + c, piv * n + c);
            }
            det = -det;
        }
        let p = a[col * n + col];
        det *= p;
        for r in col + 1..n {
            let f = a[r * n + col] / p;
            if f != 0.0 {
                for c in col..n {
                    a[r * n + c] -= f * a[col * n + c];
                }
            }
        }
    }
    det
}

/// Symmetric matrix of pairwise inner products.
#[derive(Debug, Clone, PartialEq)]
pub struct GramMatrix {
    n: usize,
    entries: Vec<f64>,
}

impl GramMatrix {
    pub fn from_vectors(vectors: &[&[f64]]) -> Result<Self> {
        check_vectors(vectors)?;
        let n = vectors.len();
        let mut entries = vec![0.0; n * n];
        for i in 0..n {
            for j in i..n {
                let g = dot(vectors[i], vectors[j]);
                entries[i * n + j] = g;
                entries[j * n + i] = g;
            }
        }
        Ok(Self { n, entries })
    }

    /// Builds from a row-major symmetric matrix.
    pub fn from_entries(n: usize, entries: Vec<f64>) -> Result<Self> {
        if entries.len() != n * n {
            return Err(ZonoError::DimensionMismatch {
                expected: n * n,
                found: entries.len(),
            });
        }
        for i in 0..n {
            for j in 0..i {
                let (a, b) = (entries[i * n + j], entries[j * n + i]);
                if (a - b).abs() > 1e-12 * (1.0 + a.abs().max(b.abs())) {
                    return Err(ZonoError::InvalidInput(format!(
                        "matrix is not symmetric at ({i},{j})"
                    )));
                }
            }
        }
        Ok(Self { n, entries })
    }

    pub fn size(&self) -> usize {
        self.n
    }

    pub fn get(&self, i: usize, j: usize) -> f64 {
        self.entries[i * self.n + j]
    }

    pub fn entries(&self) -> &[f64] {
        &self.entries
    }

    /// Determinant of the principal submatrix on `subset`.
    pub fn principal_minor(&self, subset: &[usize]) -> f64 {
        let k = subset.len();
        let mut m = Vec::with_capacity(k * k);
        for &i in subset {
            for &j in subset {
                m.push(self.get(i, j));
            }
        }
        determinant(m, k)
    }
}

/// `det` of the Gram matrix of the inputs (the squared wedge norm). Negative
/// values within `1e-10 * Π|v_i|^2` are clamped to zero; anything more
/// negative is reported as a numerical breakdown.
pub fn gram_determinant(vectors: &[&[f64]]) -> Result<f64> {
    let g = GramMatrix::from_vectors(vectors)?;
    let idx: Vec<usize> = (0..g.size()).collect();
    let det = g.principal_minor(&idx);
    let scale2: f64 = vectors.iter().map(|v| dot(v, v)).product();
    if det >= 0.0 {
        Ok(det)
    } else if det >= -1e-10 * scale2 {
        Ok(0.0)
    } else {
        Err(ZonoError::Numerical(format!(
            "Gram determinant {det:e} is negative beyond tolerance (scale^2 = {scale2:e})"
        )))
    }
}

/// `σ_m^k(values)` by the one-pass recurrence `e_j += x * e_{j-1}`.
pub fn elementary_symmetric(values: &[f64], k: usize) -> Result<f64> {
    if k == 0 || k > values.len() {
        return Err(out_of_range("k", k, format!("1..={}", values.len())));
    }
    Ok(elementary_symmetric_all(values, k)[k])
}

/// `[σ^0, σ^1, …, σ^k_max]` of `values` (with `σ^0 = 1`).
pub fn elementary_symmetric_all(values: &[f64], k_max: usize) -> Vec<f64> {
    let k_max = k_max.min(values.len());
    let mut e = vec![0.0; k_max + 1];
    e[0] = 1.0;
    for (i, &x) in values.iter().enumerate() {
        for j in (1..=k_max.min(i + 1)).rev() {
            e[j] += x * e[j - 1];
        }
    }
    e
}

/// Eigenvalues of a symmetric matrix, descending. Values below
/// `1e-12 * λ_max` in magnitude are set to exactly zero.
pub fn symmetric_eigenvalues(g: &GramMatrix) -> Result<Vec<f64>> {
    let n = g.size();
    if n == 0 {
        return Ok(Vec::new());
    }
    let m = DMatrix::from_row_slice(n, n, g.entries());
    let eig = m
        .try_symmetric_eigen(f64::EPSILON, 10_000)
        .ok_or_else(|| ZonoError::Numerical("symmetric eigensolver did not converge".into()))?;
    let mut vals: Vec<f64> = eig.eigenvalues.iter().copied().collect();
    let lmax = vals.iter().fold(0.0f64, |a, &b| a.max(b.abs()));
    for v in &mut vals {
        if v.abs() <= 1e-12 * lmax {
            *v = 0.0;
        }
    }
    vals.sort_by(|a, b| b.total_cmp(a));
    Ok(vals)
}

/// `(e_1, …, e_n)`, the sums of `k × k` principal minors of `g`, computed as
/// elementary symmetric functions of its eigenvalues.
pub fn char_poly_symmetric_sums(g: &GramMatrix) -> Result<Vec<f64>> {
    let vals = symmetric_eigenvalues(g)?;
    let e = elementary_symmetric_all(&vals, vals.len());
    Ok(e[1..].to_vec())
}

/// Dimension of the linear span of `vectors` in `R^d`.
pub fn span_rank(vectors: &[&[f64]], d: usize) -> Result<usize> {
    let mut scatter = vec![0.0; d * d];
    for v in vectors {
        for i in 0..d {
            for j in 0..d {
                scatter[i * d + j] += v[i] * v[j];
            }
        }
    }
    let g = GramMatrix { n: d, entries: scatter };
    Ok(symmetric_eigenvalues(&g)?.iter().filter(|&&x| x > 0.0).count())
}

/// Unit normal of the hyperplane spanned by `d-1` vectors in `R^d`, from the
/// signed `(d-1)`-minors. The first coordinate whose magnitude exceeds
/// `1e-12` is made positive. `None` when the inputs are dependent, i.e.
/// their wedge norm is at most `1e-9 * Π|v_i|`.
pub fn orthogonal_complement_normal(vectors: &[&[f64]], d: usize) -> Result<Option<Vec<f64>>> {
    if vectors.len() + 1 != d {
        return Err(out_of_range("vector count", vectors.len(), d.saturating_sub(1)));
    }
    for v in vectors {
        if v.len() != d {
            return Err(ZonoError::DimensionMismatch {
                expected: d,
                found: v.len(),
            });
        }
    }
    if d == 1 {
        return Ok(Some(vec![1.0]));
    }
    let m = d - 1;
    let mut u = vec![0.0; d];
    for (row, ux) in u.iter_mut().enumerate() {
        let mut minor = Vec::with_capacity(m * m);
        for r in (0..d).filter(|&r| r != row) {
            for v in vectors {
                minor.push(v[r]);
            }
        }
        let sign = if row % 2 == 0 { 1.0 } else { -1.0 };
        *ux = sign * determinant(minor, m);
    }
    let len = norm(&u);
    let scale: f64 = vectors.iter().map(|v| norm(v)).product();
    if scale == 0.0 || len <= 1e-9 * scale {
        return Ok(None);
    }
    for x in &mut u {
        *x /= len;
    }
    canonicalize_sign(&mut u);
    Ok(Some(u))
}

pub(crate) fn canonicalize_sign(u: &mut [f64]) {
    if let Some(first) = u.iter().find(|x| x.abs() > 1e-12) {
        if *first < 0.0 {
            for x in u.iter_mut() {
                *x = -*x;
            }
        }
    }
    // no negative zeros, so lexicographic comparisons are well defined
    for x in u.iter_mut() {
        *x += 0.0;
    }
}

/// `κ_d`, the volume of the unit ball in `R^d` (`κ_0 = 1`).
pub fn kappa(d: usize) -> f64 {
    use std::f64::consts::PI;
    let m = d / 2;
    let mut fact_m = 1.0;
    for i in 1..=m {
        fact_m *= i as f64;
    }
    if d.is_multiple_of(2) {
        PI.powi(m as i32) / fact_m
    } else {
        // 2^(2m+1) m! π^m / (2m+1)!
        let mut fact = 1.0;
        for i in 1..=d {
            fact *= i as f64;
        }
        2f64.powi(d as i32) * fact_m * PI.powi(m as i32) / fact
    }
}

/// `ω_d = d κ_d`, the surface area of `S^{d-1}`.
pub fn omega(d: usize) -> f64 {
    d as f64 * kappa(d)
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct SphereConstants {
    pub d: usize,
    pub kappa_d: f64,
    pub omega_d: f64,
}

impl SphereConstants {
    pub fn new(d: usize) -> Self {
        Self {
            d,
            kappa_d: kappa(d),
            omega_d: omega(d),
        }
    }
}

/// `C(n, k)` as a float (exact for the sizes used here).
pub fn binomial(n: usize, k: usize) -> f64 {
    if k > n {
        return 0.0;
    }
    let k = k.min(n - k);
    let mut r = 1.0;
    for i in 0..k {
        r = r * (n - i) as f64 / (i + 1) as f64;
    }
    r.round()
}

#[cfg(test)]
mod tests {
    use super::*;
    use approx::assert_relative_eq;

    #[test]
    fn wedge_examples() {
        let e: [&[f64]; 3] = [&[1.0, 0.0, 0.0], &[0.0, 1.0, 0.0], &[0.0, 0.0, 1.0]];
        assert_eq!(wedge_norm(&e).unwrap(), 1.0);
        assert_eq!(wedge_norm(&[&[1.0, 0.0], &[2.0, 0.0]]).unwrap(), 0.0);
        assert_relative_eq!(wedge_norm(&[&[1.0, 0.0], &[1.0, 1.0]]).unwrap(), 1.0, epsilon = 1e-15);
    }

    #[test]
    fn wedge_errors() {
        assert!(matches!(
            wedge_norm(&[&[1.0, 0.0], &[1.0, 0.0, 0.0]]),
            Err(ZonoError::DimensionMismatch { .. })
        ));
        assert!(matches!(
            wedge_norm(&[&[1.0], &[2.0]]),
            Err(ZonoError::OutOfRange { .. })
        ));
    }

    #[test]
    fn gram_determinant_clamps_tiny_negatives() {
        // det is exactly zero analytically; round-off may make it slightly negative.
        let a = [0.1, 0.2, 0.3];
        let b = [0.3, 0.6, 0.9];
        let g = gram_determinant(&[&a, &b]).unwrap();
        assert!((0.0..1e-15).contains(&g));
    }

    #[test]
    fn elementary_symmetric_examples() {
        assert_eq!(elementary_symmetric(&[1.0, 2.0, 3.0], 2).unwrap(), 11.0);
        assert_eq!(elementary_symmetric(&[7.5], 1).unwrap(), 7.5);
        assert_eq!(elementary_symmetric(&[1.0; 4], 3).unwrap(), 4.0);
        assert!(elementary_symmetric(&[1.0, 2.0], 3).is_err());
        assert!(elementary_symmetric(&[1.0, 2.0], 0).is_err());
    }

    #[test]
    fn char_poly_examples() {
        let id = GramMatrix::from_entries(3, vec![1., 0., 0., 0., 1., 0., 0., 0., 1.]).unwrap();
        let e = char_poly_symmetric_sums(&id).unwrap();
        for (x, y) in e.iter().zip([3.0, 3.0, 1.0]) {
            assert_relative_eq!(*x, y, epsilon = 1e-12);
        }
        let g = GramMatrix::from_vectors(&[&[1.0, 0.0], &[0.0, 1.0], &[1.0, 1.0]]).unwrap();
        let e = char_poly_symmetric_sums(&g).unwrap();
        assert_relative_eq!(e[0], 4.0, epsilon = 1e-12);
        assert_relative_eq!(e[1], 3.0, epsilon = 1e-12);
        assert_eq!(e[2], 0.0);
        let r1 = GramMatrix::from_entries(3, vec![2., 0., 0., 0., 0., 0., 0., 0., 0.]).unwrap();
        assert_eq!(char_poly_symmetric_sums(&r1).unwrap(), vec![2.0, 0.0, 0.0]);
    }

    #[test]
    fn complement_normal_examples() {
        let u = orthogonal_complement_normal(&[&[1.0, 0.0, 0.0], &[0.0, 1.0, 0.0]], 3)
            .unwrap()
            .unwrap();
        assert_eq!(u, vec![0.0, 0.0, 1.0]);
        let (a, b) = (3.0, -4.0);
        let u = orthogonal_complement_normal(&[&[a, b]], 2).unwrap().unwrap();
        // (-b, a)/5 = (0.8, 0.6) already has a positive first coordinate
        assert_relative_eq!(u[0], 0.8, epsilon = 1e-15);
        assert_relative_eq!(u[1], 0.6, epsilon = 1e-15);
        let u = orthogonal_complement_normal(&[&[1.0, 1.0]], 2).unwrap().unwrap();
        assert!(u[0] > 0.0 && (u[0] + u[1]).abs() < 1e-15);
        assert!(orthogonal_complement_normal(&[&[1.0, 0.0, 0.0], &[2.0, 0.0, 0.0]], 3)
            .unwrap()
            .is_none());
    }

    #[test]
    fn sphere_constants() {
        use std::f64::consts::PI;
        assert_relative_eq!(kappa(0), 1.0);
        assert_relative_eq!(kappa(1), 2.0);
        assert_relative_eq!(kappa(2), PI, max_relative = 1e-15);
        assert_relative_eq!(kappa(3), 4.0 * PI / 3.0, max_relative = 1e-15);
        for d in 1..20 {
            let c = SphereConstants::new(d);
            assert_relative_eq!(c.omega_d, d as f64 * c.kappa_d, max_relative = 1e-14);
            assert_relative_eq!(
                kappa(d + 1),
                2.0 * PI * kappa(d - 1) / (d as f64 + 1.0),
                max_relative = 1e-14
            );
        }
    }

    #[test]
    fn binomials() {
        assert_eq!(binomial(10, 4), 210.0);
        assert_eq!(binomial(5, 0), 1.0);
        assert_eq!(binomial(3, 5), 0.0);
        assert_eq!(binomial(30, 15), 155117520.0);
    }
}
