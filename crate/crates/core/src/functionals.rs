//! Intrinsic volumes, the Steiner polynomial, mean width, surface area and
//! total k-volumes of power α.

use std::collections::BTreeMap;

use serde::{Deserialize, Serialize};

use crate::error::{out_of_range, Result, ZonoError};
use crate::geometry::{binomial, char_poly_symmetric_sums, kappa, norm, GramMatrix, WedgeWorkspace};
use crate::par::KahanSum;
use crate::radii::RatioReport;
use crate::subsets::subset_sum_with;
use crate::zonotope::GeneratorSet;

pub const REPORT_SCHEMA_VERSION: u32 = 1;

/// Largest `n` for which subset sums with `k ∉ {1, 2, d}` run without an
/// explicit override.
pub const SUBSET_SUM_N_LIMIT: usize = 30;

#[derive(Debug, Clone, Copy, Default, PartialEq, Eq)]
pub struct EnumerationLimits {
    pub allow_large: bool,
}

impl EnumerationLimits {
    pub const OVERRIDE: Self = Self { allow_large: true };
}

/// Rank of the span of the nonzero generators.
fn rank_of(gens: &[&[f64]], d: usize) -> usize {
    if gens.is_empty() {
        0
    } else {
        crate::geometry::span_rank(gens, d).unwrap_or(0)
    }
}

fn check_k(k: usize, lo: usize, d: usize) -> Result<()> {
    if k < lo || k > d {
        return Err(out_of_range("k", k, format!("{lo}..={d}")));
    }
    Ok(())
}

pub(crate) fn check_enumeration(n: usize, k: usize, d: usize, limits: EnumerationLimits) -> Result<()> {
    if n > SUBSET_SUM_N_LIMIT && !(k == 1 || k == 2 || k == d) && !limits.allow_large {
        return Err(ZonoError::EnumerationBound {
            operation: "k-subset sum",
            required: binomial(n, k),
            limit: binomial(SUBSET_SUM_N_LIMIT, k),
        });
    }
    Ok(())
}

/// `Σ_{|I|=k} |p_I|^α` over the nonzero generators by direct enumeration.
fn wedge_power_sum(gens: &[&[f64]], d: usize, k: usize, alpha: f64) -> f64 {
    subset_sum_with(
        gens.len(),
        k,
        || WedgeWorkspace::new(d, k),
        |ws, s| {
            let w = ws.wedge(s.iter().map(|&i| gens[i]));
            if alpha == 1.0 {
                w
            } else {
                w.powf(alpha)
            }
        },
    )
}

/// `V_k(Z) = Σ_{|I| = k} |p_I|`; `V_0 = 1`.
pub fn intrinsic_volume(gs: &GeneratorSet, k: usize) -> Result<f64> {
    intrinsic_volume_with(gs, k, EnumerationLimits::default())
}

pub fn intrinsic_volume_with(gs: &GeneratorSet, k: usize, limits: EnumerationLimits) -> Result<f64> {
    let d = gs.dim();
    check_k(k, 0, d)?;
    if k == 0 {
        return Ok(1.0);
    }
    let gens = gs.nonzero_slices();
    if k == 1 {
        return Ok(gens.iter().map(|g| norm(g)).collect::<KahanSum>().value());
    }
    check_enumeration(gens.len(), k, d, limits)?;
    if rank_of(&gens, d) < k {
        return Ok(0.0);
    }
    Ok(wedge_power_sum(&gens, d, k, 1.0))
}

/// All of `V_0, …, V_d`.
pub fn intrinsic_volumes(gs: &GeneratorSet, limits: EnumerationLimits) -> Result<Vec<f64>> {
    (0..=gs.dim()).map(|k| intrinsic_volume_with(gs, k, limits)).collect()
}

/// `t ↦ V_d(Z + tB^d)` as coefficients of `t^0, …, t^d`.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct SteinerPolynomial {
    pub d: usize,
    pub coeffs: Vec<f64>,
}

impl SteinerPolynomial {
    pub fn eval(&self, t: f64) -> f64 {
        self.coeffs.iter().rev().fold(0.0, |acc, c| acc * t + c)
    }
}

pub fn steiner_polynomial(gs: &GeneratorSet) -> Result<SteinerPolynomial> {
    steiner_polynomial_with(gs, EnumerationLimits::default())
}

pub fn steiner_polynomial_with(gs: &GeneratorSet, limits: EnumerationLimits) -> Result<SteinerPolynomial> {
    let d = gs.dim();
    let v = intrinsic_volumes(gs, limits)?;
    let coeffs = (0..=d).map(|j| kappa(j) * v[d - j]).collect();
    Ok(SteinerPolynomial { d, coeffs })
}

/// `w(Z) = 2κ_{d-1}/(dκ_d) · Σ|p_i|`.
pub fn mean_width(gs: &GeneratorSet) -> f64 {
    let d = gs.dim();
    let total: KahanSum = gs.generators().iter().map(|g| norm(g)).collect();
    mean_width_factor(d) * total.value()
}

/// `2κ_{d-1}/(dκ_d)`, the ratio of mean width to total generator length.
pub fn mean_width_factor(d: usize) -> f64 {
    2.0 * kappa(d - 1) / (d as f64 * kappa(d))
}

/// `surf(Z) = 2 V_{d-1}(Z)` for full-dimensional `Z`.
pub fn surface_area(gs: &GeneratorSet) -> Result<f64> {
    let d = gs.dim();
    let rank = gs.rank();
    if rank < d {
        return Err(ZonoError::Degenerate { rank, dim: d });
    }
    if d == 1 {
        return Ok(2.0);
    }
    Ok(2.0 * intrinsic_volume_with(gs, d - 1, EnumerationLimits::OVERRIDE)?)
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum PowerMethod {
    GramEigenvalues,
    SubsetEnumeration,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct PowerKVolume {
    pub k: usize,
    pub alpha: f64,
    pub value: f64,
    pub method: PowerMethod,
}

/// `V_{k,α}(Z) = Σ_{|I|=k} |p_I|^α`. For `α = 2` this is the k-th sum of
/// principal minors of the Gram matrix and is computed from its eigenvalues.
pub fn power_k_volume(gs: &GeneratorSet, k: usize, alpha: f64) -> Result<PowerKVolume> {
    power_k_volume_with(gs, k, alpha, EnumerationLimits::default())
}

pub fn power_k_volume_with(
    gs: &GeneratorSet,
    k: usize,
    alpha: f64,
    limits: EnumerationLimits,
) -> Result<PowerKVolume> {
    let d = gs.dim();
    check_k(k, 1, d)?;
    if !(alpha > 0.0 && alpha.is_finite()) {
        return Err(out_of_range("alpha", alpha, "> 0"));
    }
    let gens = gs.nonzero_slices();
    if alpha == 2.0 {
        let value = if rank_of(&gens, d) < k {
            0.0
        } else {
            let e = char_poly_symmetric_sums(&GramMatrix::from_vectors(&gens)?)?;
            e[k - 1].max(0.0)
        };
        return Ok(PowerKVolume {
            k,
            alpha,
            value,
            method: PowerMethod::GramEigenvalues,
        });
    }
    let value = power_k_volume_enumerated_inner(&gens, d, k, alpha, limits)?;
    Ok(PowerKVolume {
        k,
        alpha,
        value,
        method: PowerMethod::SubsetEnumeration,
    })
}

/// `V_{k,α}` by subset enumeration for every `α`, including 2.
pub fn power_k_volume_enumerated(gs: &GeneratorSet, k: usize, alpha: f64, limits: EnumerationLimits) -> Result<f64> {
    let d = gs.dim();
    check_k(k, 1, d)?;
    if !(alpha > 0.0 && alpha.is_finite()) {
        return Err(out_of_range("alpha", alpha, "> 0"));
    }
    power_k_volume_enumerated_inner(&gs.nonzero_slices(), d, k, alpha, limits)
}

fn power_k_volume_enumerated_inner(
    gens: &[&[f64]],
    d: usize,
    k: usize,
    alpha: f64,
    limits: EnumerationLimits,
) -> Result<f64> {
    if k == 1 {
        return Ok(gens.iter().map(|g| norm(g).powf(alpha)).collect::<KahanSum>().value());
    }
    check_enumeration(gens.len(), k, d, limits)?;
    if rank_of(gens, d) < k {
        return Ok(0.0);
    }
    Ok(wedge_power_sum(gens, d, k, alpha))
}

/// Every functional of one zonotope, with the method used for each entry.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct FunctionalsReport {
    pub schema_version: u32,
    pub label: Option<String>,
    pub n: usize,
    pub d: usize,
    pub intrinsic_volumes: Vec<f64>,
    pub mean_width: f64,
    /// `None` when the zonotope is not full-dimensional.
    pub surface_area: Option<f64>,
    pub methods: BTreeMap<String, String>,
    #[serde(skip_serializing_if = "Option::is_none", default)]
    pub steiner: Option<SteinerPolynomial>,
    #[serde(skip_serializing_if = "Vec::is_empty", default)]
    pub power_volumes: Vec<PowerKVolume>,
    #[serde(skip_serializing_if = "Option::is_none", default)]
    pub radii: Option<RatioReport>,
    #[serde(skip_serializing_if = "Option::is_none", default)]
    pub projection_body: Option<GeneratorSet>,
    /// Individually requested values, e.g. `"V_2"`.
    #[serde(skip_serializing_if = "BTreeMap::is_empty", default)]
    pub selected: BTreeMap<String, f64>,
}

impl FunctionalsReport {
    /// Intrinsic volumes, mean width and surface area of `gs`.
    pub fn basic(gs: &GeneratorSet, limits: EnumerationLimits) -> Result<Self> {
        let d = gs.dim();
        let intrinsic_volumes = intrinsic_volumes(gs, limits)?;
        let full = gs.is_full_dimensional();
        let mut methods = BTreeMap::new();
        for k in 0..=d {
            let tag = match k {
                0 => "exact:definition",
                1 => "exact:generator-length-sum",
                _ => "exact:wedge-subset-sum",
            };
            methods.insert(format!("V_{k}"), tag.to_string());
        }
        methods.insert("mean_width".into(), "exact:generator-length-sum".into());
        methods.insert(
            "surface_area".into(),
            if full { "exact:twice-V_(d-1)" } else { "undefined:not-full-dimensional" }.into(),
        );
        Ok(Self {
            schema_version: REPORT_SCHEMA_VERSION,
            label: gs.label().map(str::to_string),
            n: gs.len(),
            d,
            surface_area: full.then(|| 2.0 * intrinsic_volumes[d - 1]),
            intrinsic_volumes,
            mean_width: mean_width(gs),
            methods,
            steiner: None,
            power_volumes: Vec::new(),
            radii: None,
            projection_body: None,
            selected: BTreeMap::new(),
        })
    }

    pub fn to_json(&self) -> String {
        serde_json::to_string_pretty(self).expect("reports always serialize")
    }

    pub fn csv_header(&self) -> String {
        let mut cols = vec!["schema_version".to_string(), "label".into(), "n".into(), "d".into()];
        cols.extend((0..=self.d).map(|k| format!("V_{k}")));
        cols.extend(["width", "surf", "cirr", "ir", "methods"].map(String::from));
        cols.join(",")
    }

    pub fn csv_row(&self) -> String {
        let mut cols = vec![
            self.schema_version.to_string(),
            csv_field(self.label.as_deref().unwrap_or("")),
            self.n.to_string(),
            self.d.to_string(),
        ];
        cols.extend(self.intrinsic_volumes.iter().map(|v| format!("{v:?}")));
        cols.push(format!("{:?}", self.mean_width));
        cols.push(self.surface_area.map(|s| format!("{s:?}")).unwrap_or_default());
        cols.push(self.radii.as_ref().map(|r| format!("{:?}", r.circumradius.value)).unwrap_or_default());
        cols.push(self.radii.as_ref().map(|r| format!("{:?}", r.inradius.value)).unwrap_or_default());
        let methods: Vec<String> = self.methods.iter().map(|(k, v)| format!("{k}={v}")).collect();
        cols.push(csv_field(&methods.join(";")));
        cols.join(",")
    }
}

pub(crate) fn csv_field(s: &str) -> String {
    if s.contains([',', '"', '\n']) {
        format!("\"{}\"", s.replace('"', "\"\""))
    } else {
        s.to_string()
    }
}
