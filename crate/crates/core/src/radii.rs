//! Circumradius and inradius of the centered zonotope `½ Σ [-p_i, p_i]`,
//! its support function, and witnesses for both radii.
//!
//! The circumradius is `½ max |Σ ε_i p_i|` over sign vectors with `ε_1 = +1`.
//! Three exact methods are available: a Gray-code sweep of all `2^{n-1}`
//! sign vectors, a branch-and-bound search, and a sweep over the vertices of
//! the central hyperplane arrangement `{p_i^⊥}` (polynomial in `n` for fixed
//! `d`). The inradius is the minimum of the support function over facet
//! normals.

use serde::{Deserialize, Serialize};

use crate::error::{Result, ZonoError};
use crate::geometry::{binomial, dot, norm, orthogonal_complement_normal};
use crate::par::map_blocks;
use crate::subsets::SubsetBlocks;
use crate::zonotope::{check_unit, GeneratorSet};

/// Default largest `n` for sign-vector enumeration.
pub const CIRCUMRADIUS_N_LIMIT: usize = 40;
/// Hard ceiling for sign-vector enumeration (sign vectors are bit masks).
const SIGN_MASK_BITS: usize = 64;
/// Default largest number of facet subsets for the inradius and for the
/// arrangement method.
pub const SUBSET_LIMIT: f64 = 1e7;
/// Relative tolerance under which two candidate values count as tied.
const TIE_REL_TOL: f64 = 1e-12;
/// Number of leading free signs fixed per parallel block.
const PREFIX_BITS: usize = 6;
/// Incremental sums are recomputed from scratch this often.
const RESYNC_PERIOD: u64 = 1 << 14;

/// Element of `{-1, +1}^n`.
#[derive(Debug, Clone, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(transparent)]
pub struct SignVector(pub Vec<i8>);

impl SignVector {
    fn from_mask(mask: u64, n: usize) -> Self {
        SignVector((0..n).map(|i| if mask >> i & 1 == 1 { -1 } else { 1 }).collect())
    }

    pub fn len(&self) -> usize {
        self.0.len()
    }

    pub fn is_empty(&self) -> bool {
        self.0.is_empty()
    }

    pub fn minus_count(&self) -> usize {
        self.0.iter().filter(|&&e| e < 0).count()
    }

    /// `Σ ε_i p_i`.
    pub fn signed_sum(&self, gs: &GeneratorSet) -> Vec<f64> {
        let mut s = vec![0.0; gs.dim()];
        for (g, &e) in gs.generators().iter().zip(&self.0) {
            for (sx, gx) in s.iter_mut().zip(g) {
                *sx += e as f64 * gx;
            }
        }
        s
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "kebab-case")]
pub enum Witness {
    SignVector { signs: SignVector },
    FacetNormal { normal: Vec<f64> },
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct RadiusCertificate {
    pub value: f64,
    pub witness: Witness,
    pub method: String,
}

impl RadiusCertificate {
    pub fn signs(&self) -> Option<&SignVector> {
        match &self.witness {
            Witness::SignVector { signs } => Some(signs),
            Witness::FacetNormal { .. } => None,
        }
    }

    pub fn normal(&self) -> Option<&[f64]> {
        match &self.witness {
            Witness::FacetNormal { normal } => Some(normal),
            Witness::SignVector { .. } => None,
        }
    }
}

/// `h(u) = ½ Σ |⟨u, p_i⟩|` of the centered zonotope.
pub fn support(gs: &GeneratorSet, u: &[f64]) -> Result<f64> {
    check_unit(u, gs.dim())?;
    Ok(support_unchecked(gs, u))
}

pub(crate) fn support_unchecked(gs: &GeneratorSet, u: &[f64]) -> f64 {
    0.5 * gs.generators().iter().map(|g| dot(u, g).abs()).sum::<f64>()
}

#[derive(Debug, Clone, Copy, Default, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum CircumMethod {
    /// Gray code for `n ≤ 20`, otherwise the arrangement sweep when it fits
    /// the subset limit, otherwise branch and bound.
    #[default]
    Auto,
    Gray,
    BranchAndBound,
    Arrangement,
}

#[derive(Debug, Clone, Copy, Default, PartialEq, Eq)]
pub struct CircumOptions {
    pub method: CircumMethod,
    pub allow_large: bool,
}

pub fn circumradius(gs: &GeneratorSet) -> Result<RadiusCertificate> {
    circumradius_with(gs, CircumOptions::default())
}

pub fn circumradius_with(gs: &GeneratorSet, opts: CircumOptions) -> Result<RadiusCertificate> {
    let n = gs.len();
    let method = match opts.method {
        CircumMethod::Auto if n <= 20 => CircumMethod::Gray,
        CircumMethod::Auto => {
            let r = gs.rank().max(1);
            if binomial(n, r - 1) <= SUBSET_LIMIT {
                CircumMethod::Arrangement
            } else {
                CircumMethod::BranchAndBound
            }
        }
        m => m,
    };
    let (candidates, tag) = match method {
        CircumMethod::Gray => {
            check_sign_enumeration(n, opts.allow_large)?;
            (gray_candidates(gs), "exact:gray-code-sign-enumeration")
        }
        CircumMethod::BranchAndBound => {
            check_sign_enumeration(n, opts.allow_large)?;
            (branch_and_bound_candidates(gs), "exact:branch-and-bound")
        }
        CircumMethod::Arrangement => (arrangement_candidates(gs, opts.allow_large)?, "exact:hyperplane-arrangement"),
        CircumMethod::Auto => unreachable!(),
    };
    let signs = select_witness(gs, candidates);
    let value = 0.5 * norm(&signs.signed_sum(gs));
    Ok(RadiusCertificate {
        value,
        witness: Witness::SignVector { signs },
        method: tag.to_string(),
    })
}

fn check_sign_enumeration(n: usize, allow_large: bool) -> Result<()> {
    if n > SIGN_MASK_BITS || (n > CIRCUMRADIUS_N_LIMIT && !allow_large) {
        return Err(ZonoError::EnumerationBound {
            operation: "circumradius sign enumeration",
            required: 2f64.powi(n as i32 - 1),
            limit: 2f64.powi(if allow_large { SIGN_MASK_BITS } else { CIRCUMRADIUS_N_LIMIT } as i32 - 1),
        });
    }
    Ok(())
}

/// Sign vectors whose value is within the tie tolerance of the best seen so
/// far, together with that best squared norm.
#[derive(Debug, Clone, Default)]
struct Candidates {
    best: f64,
    signs: Vec<(f64, SignVector)>,
}

impl Candidates {
    fn floor(best: f64) -> f64 {
        best * (1.0 - 2.0 * TIE_REL_TOL)
    }

    fn is_tie_or_better(&self, sq: f64) -> bool {
        sq >= Self::floor(self.best)
    }

    fn offer(&mut self, sq: f64, make: impl FnOnce() -> SignVector) {
        if !self.is_tie_or_better(sq) {
            return;
        }
        if sq > self.best {
            self.best = sq;
            let floor = Self::floor(sq);
            self.signs.retain(|(v, _)| *v >= floor);
        }
        self.signs.push((sq, make()));
    }

    fn merge(parts: Vec<Candidates>) -> Candidates {
        let best = parts.iter().fold(0.0f64, |a, c| a.max(c.best));
        let floor = Self::floor(best);
        let signs = parts
            .into_iter()
            .flat_map(|c| c.signs)
            .filter(|(v, _)| *v >= floor)
            .collect();
        Candidates { best, signs }
    }
}

/// Lexicographic order on sign vectors with `+1` before `-1`.
fn lex_signs(a: &SignVector, b: &SignVector) -> std::cmp::Ordering {
    a.0.iter().map(|e| -e).cmp(b.0.iter().map(|e| -e))
}

/// Recomputes every candidate from scratch, keeps those tied with the
/// maximum, and returns the lexicographically smallest (`+1` before `-1`).
fn select_witness(gs: &GeneratorSet, cands: Candidates) -> SignVector {
    let mut scored: Vec<(f64, SignVector)> = cands
        .signs
        .into_iter()
        .map(|(_, s)| {
            let v = norm(&s.signed_sum(gs));
            (v, s)
        })
        .collect();
    let best = scored.iter().fold(0.0f64, |a, (v, _)| a.max(*v));
    scored.retain(|(v, _)| *v >= best * (1.0 - TIE_REL_TOL));
    scored
        .into_iter()
        .map(|(_, s)| s)
        .min_by(lex_signs)
        .expect("at least one candidate")
}

fn signed_sum_mask(gens: &[&[f64]], mask: u64, s: &mut [f64]) {
    s.iter_mut().for_each(|x| *x = 0.0);
    for (i, g) in gens.iter().enumerate() {
        let e = if mask >> i & 1 == 1 { -1.0 } else { 1.0 };
        for (sx, gx) in s.iter_mut().zip(g.iter()) {
            *sx += e * gx;
        }
    }
}

/// Visits every canonical sign mask (bit 0 clear) in Gray-code order, block
/// by block, calling `visit(mask, |Σ ε p|²)`. Bits `1..=P` select the block.
fn gray_sweep<T, F>(gens: &[&[f64]], d: usize, init: impl Fn() -> T + Sync + Send, visit: F) -> Vec<T>
where
    T: Send,
    F: Fn(&mut T, u64, f64) + Sync + Send,
{
    let n = gens.len();
    let free = n.saturating_sub(1);
    let prefix = free.min(PREFIX_BITS);
    let suffix = free - prefix;
    map_blocks(1usize << prefix, |b| {
        let mut acc = init();
        let mut mask = (b as u64) << 1;
        let mut s = vec![0.0; d];
        signed_sum_mask(gens, mask, &mut s);
        visit(&mut acc, mask, dot(&s, &s));
        let steps: u64 = if suffix == 0 { 1 } else { 1u64 << suffix };
        for i in 1..steps {
            let bit = 1 + prefix + i.trailing_zeros() as usize;
            let was_negative = mask >> bit & 1 == 1;
            mask ^= 1 << bit;
            if i % RESYNC_PERIOD == 0 {
                signed_sum_mask(gens, mask, &mut s);
            } else {
                let c = if was_negative { 2.0 } else { -2.0 };
                for (sx, gx) in s.iter_mut().zip(gens[bit].iter()) {
                    *sx += c * gx;
                }
            }
            visit(&mut acc, mask, dot(&s, &s));
        }
        acc
    })
}

fn gray_candidates(gs: &GeneratorSet) -> Candidates {
    let gens = gs.as_slices();
    let n = gens.len();
    let parts = gray_sweep(&gens, gs.dim(), Candidates::default, |c, mask, sq| {
        c.offer(sq, || SignVector::from_mask(mask, n))
    });
    Candidates::merge(parts)
}

/// Canonical sign vectors with `|Σ ε_i p_i| ≥ (1 - rel) · 2 cirr`, in
/// lexicographic order (`+1` before `-1`).
pub fn near_maximal_sign_vectors(gs: &GeneratorSet, rel: f64) -> Result<Vec<SignVector>> {
    let n = gs.len();
    check_sign_enumeration(n, false)?;
    let max = 2.0 * circumradius_with(gs, CircumOptions { method: CircumMethod::Gray, allow_large: false })?.value;
    let floor = (max * (1.0 - rel.clamp(0.0, 1.0))).powi(2);
    let gens = gs.as_slices();
    let mut out: Vec<SignVector> = gray_sweep(&gens, gs.dim(), Vec::new, |v: &mut Vec<u64>, mask, sq| {
        if sq >= floor {
            v.push(mask);
        }
    })
    .into_iter()
    .flatten()
    .map(|m| SignVector::from_mask(m, n))
    .collect();
    out.sort_by(lex_signs);
    Ok(out)
}

/// Number of canonical sign vectors attaining the circumradius within
/// `1e-9` relative.
pub fn circumradius_witness_count(gs: &GeneratorSet) -> Result<u64> {
    circumradius_witness_count_with(gs, false)
}

pub fn circumradius_witness_count_with(gs: &GeneratorSet, allow_large: bool) -> Result<u64> {
    check_sign_enumeration(gs.len(), allow_large)?;
    let cirr = circumradius_with(
        gs,
        CircumOptions {
            method: CircumMethod::Gray,
            allow_large,
        },
    )?;
    let max = 2.0 * cirr.value;
    let floor = (max * (1.0 - 1e-9)).powi(2);
    let gens = gs.as_slices();
    let counts = gray_sweep(&gens, gs.dim(), || 0u64, |c, _, sq| {
        if sq >= floor {
            *c += 1;
        }
    });
    Ok(counts.into_iter().sum())
}

fn branch_and_bound_candidates(gs: &GeneratorSet) -> Candidates {
    let d = gs.dim();
    let n = gs.len();
    let norms = gs.norms();
    let mut order: Vec<usize> = (0..n).collect();
    order.sort_by(|&a, &b| norms[b].total_cmp(&norms[a]).then(a.cmp(&b)));
    let sorted: Vec<&[f64]> = order.iter().map(|&i| gs.generator(i)).collect();
    // tail[j] = Σ_{i ≥ j} |p_(i)|
    let mut tail = vec![0.0; n + 1];
    for j in (0..n).rev() {
        tail[j] = tail[j + 1] + norms[order[j]];
    }

    // greedy lower bound shared by every block
    let mut s = vec![0.0; d];
    for g in &sorted {
        let plus: f64 = s.iter().zip(g.iter()).map(|(a, b)| (a + b) * (a + b)).sum();
        let minus: f64 = s.iter().zip(g.iter()).map(|(a, b)| (a - b) * (a - b)).sum();
        let e = if plus >= minus { 1.0 } else { -1.0 };
        for (sx, gx) in s.iter_mut().zip(g.iter()) {
            *sx += e * gx;
        }
    }
    let greedy = norm(&s);

    let to_original = |mask: u64| -> SignVector {
        let mut signs = vec![1i8; n];
        for (j, &i) in order.iter().enumerate() {
            if mask >> j & 1 == 1 {
                signs[i] = -1;
            }
        }
        if signs[0] < 0 {
            signs.iter_mut().for_each(|e| *e = -*e);
        }
        SignVector(signs)
    };

    let free = n.saturating_sub(1);
    let prefix = free.min(PREFIX_BITS);
    let parts = map_blocks(1usize << prefix, |b| {
        let mut cands = Candidates::default();
        let mut bound = greedy;
        let mut partial = vec![0.0; d];
        // sorted position 0 fixed to +1, positions 1..=prefix from the block
        let mask = (b as u64) << 1;
        for (j, g) in sorted.iter().enumerate().take(prefix.min(n.saturating_sub(1)) + 1) {
            let e = if mask >> j & 1 == 1 { -1.0 } else { 1.0 };
            for (px, gx) in partial.iter_mut().zip(g.iter()) {
                *px += e * gx;
            }
        }
        let depth = (prefix + 1).min(n);
        dfs(&sorted, &tail, depth, mask, &mut partial, &mut bound, &mut cands, &to_original);
        cands
    });
    Candidates::merge(parts)
}

#[allow(clippy::too_many_arguments)]
fn dfs(
    gens: &[&[f64]],
    tail: &[f64],
    j: usize,
    mask: u64,
    partial: &mut Vec<f64>,
    bound: &mut f64,
    cands: &mut Candidates,
    to_original: &dyn Fn(u64) -> SignVector,
) {
    let len = norm(partial);
    if len + tail[j] < *bound * (1.0 - TIE_REL_TOL) {
        return;
    }
    if j == gens.len() {
        if len > *bound {
            *bound = len;
        }
        cands.offer(len * len, || to_original(mask));
        return;
    }
    let g = gens[j];
    for (e, bit) in [(1.0, 0u64), (-1.0, 1u64)] {
        for (px, gx) in partial.iter_mut().zip(g.iter()) {
            *px += e * gx;
        }
        dfs(gens, tail, j + 1, mask | bit << j, partial, bound, cands, to_original);
        for (px, gx) in partial.iter_mut().zip(g.iter()) {
            *px -= e * gx;
        }
    }
}

/// Orthonormal basis of the span of `gens` by Gram–Schmidt with
/// reorthogonalization; a vector joins when its residual exceeds `1e-9` of
/// its norm.
fn span_basis(gens: &[&[f64]], d: usize) -> Vec<Vec<f64>> {
    let mut basis: Vec<Vec<f64>> = Vec::new();
    for g in gens {
        if basis.len() == d {
            break;
        }
        let mut v = g.to_vec();
        for _ in 0..2 {
            for b in &basis {
                let c = dot(b, &v);
                for (vx, bx) in v.iter_mut().zip(b) {
                    *vx -= c * bx;
                }
            }
        }
        let r = norm(&v);
        if r > 1e-9 * norm(g) {
            basis.push(v.into_iter().map(|x| x / r).collect());
        }
    }
    basis
}

/// Every vertex of the centered zonotope has the sign vector of an open
/// cell of the arrangement `{p_i^⊥}` in the span of the generators, and
/// every such cell has an extreme ray orthogonal to some `r-1` independent
/// generators. For each such ray the signs of the remaining generators are
/// fixed and the signs of the generators orthogonal to it are enumerated.
fn arrangement_candidates(gs: &GeneratorSet, allow_large: bool) -> Result<Candidates> {
    let n = gs.len();
    let zero: Vec<bool> = gs.generators().iter().map(|g| g.iter().all(|&x| x == 0.0)).collect();
    let nz: Vec<usize> = (0..n).filter(|&i| !zero[i]).collect();
    let nz_gens: Vec<&[f64]> = nz.iter().map(|&i| gs.generator(i)).collect();
    let basis = span_basis(&nz_gens, gs.dim());
    let r = basis.len();

    // Lift a sign assignment of the nonzero generators to a canonical full
    // sign vector: ε_1 = +1, zero generators take +1.
    let lift = |nz_signs: &[i8]| -> Vec<SignVector> {
        let mut full = vec![0i8; n];
        for (&i, &e) in nz.iter().zip(nz_signs) {
            full[i] = e;
        }
        let mut out = Vec::with_capacity(2);
        let orientations: &[i8] = if zero.first() == Some(&true) { &[1, -1] } else { &[1] };
        for &o in orientations {
            let mut v: Vec<i8> = full.iter().map(|&e| e * o).collect();
            if v[0] < 0 {
                v.iter_mut().for_each(|e| *e = -*e);
            }
            for e in v.iter_mut() {
                if *e == 0 {
                    *e = 1;
                }
            }
            out.push(SignVector(v));
        }
        out
    };

    if r == 0 {
        let mut c = Candidates::default();
        for s in lift(&[]) {
            c.offer(0.0, || s);
        }
        return Ok(c);
    }

    let coords: Vec<Vec<f64>> = nz_gens.iter().map(|g| basis.iter().map(|b| dot(b, g)).collect()).collect();
    let coord_slices: Vec<&[f64]> = coords.iter().map(|c| c.as_slice()).collect();
    let coord_norms: Vec<f64> = coords.iter().map(|c| norm(c)).collect();
    let m = coords.len();
    let required = binomial(m, r - 1);
    if required > SUBSET_LIMIT && !allow_large {
        return Err(ZonoError::EnumerationBound {
            operation: "circumradius arrangement sweep",
            required,
            limit: SUBSET_LIMIT,
        });
    }

    let blocks = SubsetBlocks::new(m, r - 1);
    let parts: Vec<Result<Candidates>> = map_blocks(blocks.len(), |b| {
        let mut cands = Candidates::default();
        let mut err = None;
        let mut signs = vec![0i8; m];
        let mut free: Vec<usize> = Vec::new();
        let mut s = vec![0.0; r];
        blocks.for_each_in_block(b, |subset| {
            if err.is_some() {
                return;
            }
            let vs: Vec<&[f64]> = subset.iter().map(|&i| coord_slices[i]).collect();
            let Some(ray) = orthogonal_complement_normal(&vs, r).ok().flatten() else {
                return;
            };
            free.clear();
            s.iter_mut().for_each(|x| *x = 0.0);
            for j in 0..m {
                let t = dot(&ray, &coords[j]);
                if t.abs() <= 1e-12 * coord_norms[j] {
                    free.push(j);
                    signs[j] = 1;
                } else {
                    signs[j] = if t > 0.0 { 1 } else { -1 };
                }
                let e = signs[j] as f64;
                for (sx, cx) in s.iter_mut().zip(&coords[j]) {
                    *sx += e * cx;
                }
            }
            if free.len() > 24 {
                err = Some(ZonoError::Numerical(format!(
                    "{} generators lie on one arrangement ray; the sweep needs at most 24",
                    free.len()
                )));
                return;
            }
            // Gray code over the free signs, starting from all +1
            let total: u64 = 1 << free.len();
            for i in 0..total {
                if i > 0 {
                    let j = free[i.trailing_zeros() as usize];
                    let c = -2.0 * signs[j] as f64;
                    signs[j] = -signs[j];
                    for (sx, cx) in s.iter_mut().zip(&coords[j]) {
                        *sx += c * cx;
                    }
                }
                let sq = dot(&s, &s);
                if cands.is_tie_or_better(sq) {
                    for v in lift(&signs) {
                        cands.offer(sq, || v);
                    }
                }
            }
        });
        match err {
            Some(e) => Err(e),
            None => Ok(cands),
        }
    });
    Ok(Candidates::merge(parts.into_iter().collect::<Result<Vec<_>>>()?))
}

/// `ir(Z) = ½ min Σ |⟨u, p_i⟩|` over the facet normals `u`.
pub fn inradius(gs: &GeneratorSet) -> Result<RadiusCertificate> {
    inradius_with(gs, false)
}

pub fn inradius_with(gs: &GeneratorSet, allow_large: bool) -> Result<RadiusCertificate> {
    let d = gs.dim();
    let rank = gs.rank();
    if rank < d {
        return Err(ZonoError::Degenerate { rank, dim: d });
    }
    let gens = gs.nonzero_slices();
    let required = binomial(gens.len(), d - 1);
    if required > SUBSET_LIMIT && !allow_large {
        return Err(ZonoError::EnumerationBound {
            operation: "inradius facet enumeration",
            required,
            limit: SUBSET_LIMIT,
        });
    }
    let blocks = SubsetBlocks::new(gens.len(), d - 1);
    let parts = map_blocks(blocks.len(), |b| {
        let mut best: Option<(f64, Vec<f64>)> = None;
        blocks.for_each_in_block(b, |subset| {
            let vs: Vec<&[f64]> = subset.iter().map(|&i| gens[i]).collect();
            if let Some(u) = orthogonal_complement_normal(&vs, d).ok().flatten() {
                let v = support_unchecked(gs, &u);
                best = Some(match best.take() {
                    None => (v, u),
                    Some(cur) => better_min(cur, (v, u)),
                });
            }
        });
        best
    });
    let (value, normal) = parts
        .into_iter()
        .flatten()
        .reduce(better_min)
        .ok_or(ZonoError::Degenerate { rank, dim: d })?;
    Ok(RadiusCertificate {
        value,
        witness: Witness::FacetNormal { normal },
        method: "exact:facet-normal-enumeration".into(),
    })
}

fn lex_cmp(a: &[f64], b: &[f64]) -> std::cmp::Ordering {
    a.iter()
        .zip(b)
        .map(|(x, y)| x.total_cmp(y))
        .find(|o| o.is_ne())
        .unwrap_or(std::cmp::Ordering::Equal)
}

fn better_min(a: (f64, Vec<f64>), b: (f64, Vec<f64>)) -> (f64, Vec<f64>) {
    let tie = (a.0 - b.0).abs() <= TIE_REL_TOL * a.0.max(b.0);
    if tie {
        if lex_cmp(&b.1, &a.1).is_lt() {
            b
        } else {
            a
        }
    } else if b.0 < a.0 {
        b
    } else {
        a
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct RatioReport {
    pub circumradius: RadiusCertificate,
    pub inradius: RadiusCertificate,
    pub ratio_minus_one: f64,
}

pub fn ratio_report(gs: &GeneratorSet) -> Result<RatioReport> {
    ratio_report_with(gs, CircumOptions::default())
}

pub fn ratio_report_with(gs: &GeneratorSet, opts: CircumOptions) -> Result<RatioReport> {
    let circumradius = circumradius_with(gs, opts)?;
    let inradius = inradius_with(gs, opts.allow_large)?;
    let ratio_minus_one = circumradius.value / inradius.value - 1.0;
    Ok(RatioReport {
        circumradius,
        inradius,
        ratio_minus_one,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::zonotope::{make_cube, make_regular_rhombic_dodecahedron, make_regular_zonogon, random_unit_generators};
    use approx::assert_relative_eq;

    fn all_methods(gs: &GeneratorSet) -> Vec<RadiusCertificate> {
        [CircumMethod::Gray, CircumMethod::BranchAndBound, CircumMethod::Arrangement]
            .into_iter()
            .map(|method| circumradius_with(gs, CircumOptions { method, allow_large: false }).unwrap())
            .collect()
    }

    #[test]
    fn support_examples() {
        let c = make_cube(3, 1.0).unwrap();
        assert_eq!(support(&c, &[1.0, 0.0, 0.0]).unwrap(), 0.5);
        let s = 1.0 / 3f64.sqrt();
        assert_relative_eq!(support(&c, &[s, s, s]).unwrap(), 3f64.sqrt() / 2.0, max_relative = 1e-15);
        assert_eq!(support(&c, &[-s, -s, -s]).unwrap(), support(&c, &[s, s, s]).unwrap());
        assert!(support(&c, &[1.0, 1.0, 0.0]).is_err());
    }

    #[test]
    fn cube_circumradius() {
        let c = make_cube(3, 1.0).unwrap();
        for cert in all_methods(&c) {
            assert_relative_eq!(cert.value, 3f64.sqrt() / 2.0, max_relative = 1e-15);
            assert_eq!(cert.signs().unwrap().0, vec![1, 1, 1]);
        }
        // every main diagonal of a cube is a maximizer
        for d in 1..=6 {
            assert_eq!(circumradius_witness_count(&make_cube(d, 1.0).unwrap()).unwrap(), 1 << (d - 1));
        }
    }

    #[test]
    fn rhombic_dodecahedron_circumradius() {
        let rd3 = make_regular_rhombic_dodecahedron(3, 1.0).unwrap();
        for cert in all_methods(&rd3) {
            assert_relative_eq!(cert.value, 2.0 / 3f64.sqrt(), max_relative = 1e-13);
            assert_eq!(cert.signs().unwrap().minus_count(), 2);
        }
        assert_eq!(circumradius_witness_count(&rd3).unwrap(), 3);
        let rd4 = make_regular_rhombic_dodecahedron(4, 1.0).unwrap();
        for cert in all_methods(&rd4) {
            assert_relative_eq!(cert.value, 6f64.sqrt() / 2.0, max_relative = 1e-13);
        }
    }

    #[test]
    fn antipodal_pair() {
        let gs = GeneratorSet::new(2, vec![vec![1.0, 0.0], vec![-1.0, 0.0]]).unwrap();
        assert_eq!(circumradius_witness_count(&gs).unwrap(), 1);
        for cert in all_methods(&gs) {
            assert_eq!(cert.value, 1.0);
            assert_eq!(cert.signs().unwrap().0, vec![1, -1]);
        }
    }

    #[test]
    fn methods_agree_on_random_sets() {
        for seed in 0..20 {
            let n = 3 + (seed as usize % 12);
            let d = 2 + (seed as usize % 3);
            let gs = random_unit_generators(n, d, seed).unwrap();
            let certs = all_methods(&gs);
            for c in &certs[1..] {
                assert_relative_eq!(c.value, certs[0].value, max_relative = 1e-12);
                assert_eq!(c.signs(), certs[0].signs(), "seed {seed}");
            }
        }
    }

    #[test]
    fn zero_generators_are_harmless() {
        let gs = GeneratorSet::new(2, vec![vec![0.0, 0.0], vec![1.0, 0.0], vec![0.0, 0.0], vec![0.0, 1.0]]).unwrap();
        for cert in all_methods(&gs) {
            assert_relative_eq!(cert.value, 2f64.sqrt() / 2.0, max_relative = 1e-15);
            assert_eq!(cert.signs().unwrap().0, vec![1, 1, 1, 1]);
        }
    }

    #[test]
    fn inradius_examples() {
        let c = make_cube(3, 1.0).unwrap();
        let ir = inradius(&c).unwrap();
        assert_eq!(ir.value, 0.5);
        assert_eq!(ir.normal().unwrap(), &[0.0, 0.0, 1.0]);
        let h = 0.5f64.sqrt();
        let rot = GeneratorSet::new(2, vec![vec![h, h], vec![-h, h]]).unwrap();
        assert_relative_eq!(inradius(&rot).unwrap().value, 0.5, max_relative = 1e-15);
        let flat = GeneratorSet::new(3, vec![vec![1., 0., 0.], vec![0., 1., 0.]]).unwrap();
        assert!(matches!(inradius(&flat), Err(ZonoError::Degenerate { .. })));
    }

    #[test]
    fn ratio_examples() {
        let r = ratio_report(&make_cube(3, 1.0).unwrap()).unwrap();
        assert_relative_eq!(r.ratio_minus_one, 3f64.sqrt() - 1.0, max_relative = 1e-14);
        let z = ratio_report(&make_regular_zonogon(12, 1.0).unwrap()).unwrap();
        let want = 1.0 / (std::f64::consts::PI / 24.0).cos() - 1.0;
        assert_relative_eq!(z.ratio_minus_one, want, max_relative = 1e-10);
    }

    #[test]
    fn enumeration_bound_is_loud() {
        let gs = random_unit_generators(41, 3, 1).unwrap();
        let err = circumradius_with(&gs, CircumOptions { method: CircumMethod::Gray, allow_large: false }).unwrap_err();
        assert!(matches!(err, ZonoError::EnumerationBound { .. }));
        assert!(circumradius(&gs).is_ok());
    }
}
