//! Brute-force reference implementations shared by the integration tests.
//! They avoid every fast path of the library: no Gray codes, no Gram
//! eigenvalues, no pruning.
#![allow(dead_code)]

use nalgebra::DMatrix;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use zonolab::GeneratorSet;

pub fn combinations(n: usize, k: usize) -> Vec<Vec<usize>> {
    fn go(start: usize, n: usize, k: usize, cur: &mut Vec<usize>, out: &mut Vec<Vec<usize>>) {
        if cur.len() == k {
            out.push(cur.clone());
            return;
        }
        for i in start..n {
            cur.push(i);
            go(i + 1, n, k, cur, out);
            cur.pop();
        }
    }
    let mut out = Vec::new();
    go(0, n, k, &mut Vec::new(), &mut out);
    out
}

/// `sqrt(det(A Aᵀ))` with an LU determinant.
pub fn wedge(vs: &[&[f64]]) -> f64 {
    let k = vs.len();
    let gram = DMatrix::from_fn(k, k, |i, j| vs[i].iter().zip(vs[j]).map(|(a, b)| a * b).sum::<f64>());
    gram.determinant().max(0.0).sqrt()
}

pub fn total_volume(gs: &GeneratorSet, k: usize, alpha: f64) -> f64 {
    combinations(gs.len(), k)
        .iter()
        .map(|c| wedge(&c.iter().map(|&i| gs.generator(i)).collect::<Vec<_>>()).powf(alpha))
        .sum()
}

pub fn esym(values: &[f64], k: usize) -> f64 {
    combinations(values.len(), k).iter().map(|c| c.iter().map(|&i| values[i]).product::<f64>()).sum()
}

/// `½ max_ε |Σ ε_i p_i|` over all `2^n` sign vectors.
pub fn circumradius(gs: &GeneratorSet) -> f64 {
    let (n, d) = (gs.len(), gs.dim());
    let mut best = 0.0f64;
    for mask in 0u64..(1 << n) {
        let mut s = vec![0.0; d];
        for (i, g) in gs.generators().iter().enumerate() {
            let e = if mask >> i & 1 == 1 { -1.0 } else { 1.0 };
            for (a, b) in s.iter_mut().zip(g) {
                *a += e * b;
            }
        }
        best = best.max(s.iter().map(|x| x * x).sum::<f64>().sqrt());
    }
    0.5 * best
}

/// Minimum of `½ Σ |⟨u, p_i⟩|` over normals of hyperplanes spanned by
/// `d-1` generators (computed from cofactors).
pub fn inradius(gs: &GeneratorSet) -> f64 {
    let d = gs.dim();
    let mut best = f64::INFINITY;
    for c in combinations(gs.len(), d - 1) {
        let u: Vec<f64> = (0..d)
            .map(|j| {
                let m = DMatrix::from_fn(d - 1, d - 1, |r, s| gs.generator(c[r])[if s < j { s } else { s + 1 }]);
                let sign = if j % 2 == 0 { 1.0 } else { -1.0 };
                sign * m.determinant()
            })
            .collect();
        let nu = u.iter().map(|x| x * x).sum::<f64>().sqrt();
        if nu < 1e-12 {
            continue;
        }
        let h = 0.5 * gs.generators().iter().map(|g| g.iter().zip(&u).map(|(a, b)| a * b).sum::<f64>().abs()).sum::<f64>() / nu;
        best = best.min(h);
    }
    best
}

pub fn random_set(n: usize, d: usize, seed: u64) -> GeneratorSet {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    GeneratorSet::new(d, (0..n).map(|_| (0..d).map(|_| rng.random_range(-1.0..1.0)).collect()).collect()).unwrap()
}

pub fn rel_diff(a: f64, b: f64) -> f64 {
    (a - b).abs() / a.abs().max(b.abs()).max(1e-300)
}
