//! Input model: the ambient variety, the vector bundle, and the assembled
//! instance data consumed by the decision criteria.
//!
//! The ambient `A` is a `D`-dimensional homogeneous subvariety of
//! `P^{N_1} x ... x P^{N_m}` with canonical class `K_A = a_1 H_1 + ... + a_m H_m`.
//! The bundle is either given as a split direct sum of line-bundle twists
//! (degree matrix `d_{i,j}`) or by explicit Chern data: rank `k`, the first
//! Chern coefficients `d_i`, and the top Chern coefficients `d_alpha`.

use std::collections::BTreeMap;

use num_bigint::BigInt;
use num_traits::{Signed, Zero};
use thiserror::Error;

use crate::chow::{ChowClass, ChowError, MultiIndex};

#[derive(Debug, Error)]
pub enum ModelError {
    #[error("invalid ambient space: {0}")]
    InvalidAmbient(String),
    #[error("invalid bundle: {0}")]
    InvalidBundle(String),
    #[error("rank k = {rank} out of range: need 1 <= k <= {max} (dim A - 1 = {max})")]
    RankOutOfRange { rank: u32, max: u32 },
    #[error(transparent)]
    Chow(#[from] ChowError),
}

/// The ambient variety `A` in `P^{N_1} x ... x P^{N_m}`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct AmbientSpace {
    n: Vec<u32>,
    dim: u32,
    a: Vec<i64>,
    full_product: bool,
    homogeneous_asserted: bool,
}

impl AmbientSpace {
    pub fn new(
        n: Vec<u32>,
        dim: u32,
        a: Vec<i64>,
        full_product: bool,
        homogeneous_asserted: bool,
    ) -> Result<Self, ModelError> {
        if n.is_empty() {
            return Err(ModelError::InvalidAmbient(
                "need at least one projective factor".into(),
            ));
        }
        if n.iter().any(|&ni| ni < 1) {
            return Err(ModelError::InvalidAmbient(
                "every factor dimension N_i must be >= 1".into(),
            ));
        }
        if a.len() != n.len() {
            return Err(ModelError::InvalidAmbient(format!(
                "canonical coefficients have length {}, expected {}",
                a.len(),
                n.len()
            )));
        }
        let total: u32 = n.iter().sum();
        if dim < 1 || dim > total {
            return Err(ModelError::InvalidAmbient(format!(
                "dim A = {dim} must satisfy 1 <= dim <= {total}"
            )));
        }
        if full_product {
            if dim != total {
                return Err(ModelError::InvalidAmbient(format!(
                    "full product has dim {total}, got {dim}"
                )));
            }
            for (i, (&ni, &ai)) in n.iter().zip(&a).enumerate() {
                if ai != -i64::from(ni) - 1 {
                    return Err(ModelError::InvalidAmbient(format!(
                        "full product requires a_{} = -(N_{}+1) = {}, got {ai}",
                        i + 1,
                        i + 1,
                        -i64::from(ni) - 1
                    )));
                }
            }
        }
        Ok(AmbientSpace {
            n,
            dim,
            a,
            full_product,
            homogeneous_asserted,
        })
    }

    /// The full product `P^{N_1} x ... x P^{N_m}`, with the canonical
    /// coefficients `a_i = -(N_i + 1)` filled in.
    pub fn product(n: &[u32]) -> Self {
        let dim = n.iter().sum();
        let a = n.iter().map(|&ni| -i64::from(ni) - 1).collect();
        AmbientSpace::new(n.to_vec(), dim, a, true, true).expect("valid full product")
    }

    /// Projective space `P^n`.
    pub fn projective(n: u32) -> Self {
        Self::product(&[n])
    }

    pub fn factor_count(&self) -> usize {
        self.n.len()
    }

    pub fn bounds(&self) -> &[u32] {
        &self.n
    }

    pub fn dim(&self) -> u32 {
        self.dim
    }

    pub fn canonical_coefficients(&self) -> &[i64] {
        &self.a
    }

    pub fn canonical_coefficient(&self, i: usize) -> i64 {
        self.a[i]
    }

    pub fn is_full_product(&self) -> bool {
        self.full_product
    }

    pub fn homogeneous_asserted(&self) -> bool {
        self.homogeneous_asserted
    }
}

/// A globally generated bundle split as a direct sum of line-bundle twists:
/// row `j` holds the multidegree of the `j`-th summand across the `m`
/// factors, so `d_{i,j} = rows[j][i]`. Every row must be nonzero (no trivial
/// summand) and all entries nonnegative.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct SplitBundleSpec {
    rows: Vec<Vec<i64>>,
}

impl SplitBundleSpec {
    pub fn new(rows: Vec<Vec<i64>>) -> Result<Self, ModelError> {
        if rows.is_empty() {
            return Err(ModelError::InvalidBundle("need at least one summand".into()));
        }
        let m = rows[0].len();
        if m == 0 {
            return Err(ModelError::InvalidBundle("rows must be nonempty".into()));
        }
        for (j, row) in rows.iter().enumerate() {
            if row.len() != m {
                return Err(ModelError::InvalidBundle(format!(
                    "summand {} has {} entries, expected {m}",
                    j + 1,
                    row.len()
                )));
            }
            if row.iter().any(|&d| d < 0) {
                return Err(ModelError::InvalidBundle(format!(
                    "summand {} has a negative degree",
                    j + 1
                )));
            }
            if row.iter().all(|&d| d == 0) {
                return Err(ModelError::InvalidBundle(format!(
                    "summand {} is the trivial line bundle",
                    j + 1
                )));
            }
        }
        Ok(SplitBundleSpec { rows })
    }

    pub fn rank(&self) -> u32 {
        self.rows.len() as u32
    }

    pub fn factor_count(&self) -> usize {
        self.rows[0].len()
    }

    pub fn rows(&self) -> &[Vec<i64>] {
        &self.rows
    }

    /// `d_{i,j}`: degree of summand `j` in factor `i` (both 0-based).
    pub fn degree(&self, i: usize, j: usize) -> i64 {
        self.rows[j][i]
    }

    /// True when every summand has the same degree in every factor
    /// (each row is constant).
    pub fn is_uniform(&self) -> bool {
        self.rows
            .iter()
            .all(|row| row.iter().all(|&d| d == row[0]))
    }

    /// The first Chern coefficients `d_i = sum_j d_{i,j}` (column sums).
    pub fn c1(&self) -> Vec<i64> {
        let m = self.factor_count();
        let mut d = vec![0i64; m];
        for row in &self.rows {
            for (i, &v) in row.iter().enumerate() {
                d[i] += v;
            }
        }
        d
    }
}

/// `c_1` of a split bundle: column sums of the degree matrix.
pub fn c1_split(spec: &SplitBundleSpec) -> Vec<i64> {
    spec.c1()
}

/// Top Chern class of a split bundle as a class on the ambient product:
/// the truncated product of the linear forms `sum_i d_{i,j} H_i`.
///
/// On a full product this is the class of the zero locus; on a proper
/// subvariety it is only the ambient-truncated formal expansion.
pub fn ck_split(spec: &SplitBundleSpec, ambient: &AmbientSpace) -> Result<ChowClass, ModelError> {
    let bounds = ambient.bounds().to_vec();
    let m = bounds.len();
    if spec.factor_count() != m {
        return Err(ModelError::InvalidBundle(format!(
            "bundle has {} factors, ambient has {m}",
            spec.factor_count()
        )));
    }
    let mut acc = ChowClass::one(bounds.clone());
    for row in spec.rows() {
        let linear = ChowClass::from_terms(
            bounds.clone(),
            row.iter()
                .enumerate()
                .map(|(i, &d)| (MultiIndex::unit(m, i), BigInt::from(d))),
        )?;
        acc = acc.mul(&linear)?;
    }
    Ok(acc)
}

/// Sufficient condition for the hyperplane bundles to dominate the sections
/// of a split bundle: the ambient is the full product and every summand has
/// strictly positive degree in every factor. No claim of necessity is made;
/// callers may still assert the property by hand.
pub fn section_domination_auto(spec: &SplitBundleSpec, ambient: &AmbientSpace) -> bool {
    ambient.is_full_product()
        && spec.factor_count() == ambient.factor_count()
        && spec.rows().iter().all(|row| row.iter().all(|&d| d >= 1))
}

/// User-facing flag for the section-domination assumption.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Default)]
pub enum DominationFlag {
    #[default]
    Auto,
    AssertedTrue,
    AssertedFalse,
}

/// Resolved status of the section-domination assumption on an instance.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum SectionDomination {
    /// Verified by the full-product positive-split rule.
    VerifiedAuto,
    /// Asserted true by the user; not verified.
    Asserted,
    /// Asserted false by the user.
    Denied,
    /// Could not be verified and was not asserted.
    Unresolved,
}

impl SectionDomination {
    pub fn holds(&self) -> bool {
        matches!(
            self,
            SectionDomination::VerifiedAuto | SectionDomination::Asserted
        )
    }

    pub fn describe(&self) -> &'static str {
        match self {
            SectionDomination::VerifiedAuto => "verified (full product, positive split degrees)",
            SectionDomination::Asserted => "asserted by the user (not verified)",
            SectionDomination::Denied => "asserted false by the user",
            SectionDomination::Unresolved => "unresolved",
        }
    }
}

/// Explicit Chern data for a rank-`k` bundle: the first Chern coefficients
/// `d_i` and the top Chern coefficients `d_alpha` over multi-indices with
/// `|alpha| = k`. Lookups of absent indices return 0.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct ChernData {
    k: u32,
    d: Vec<i64>,
    d_alpha: BTreeMap<MultiIndex, BigInt>,
    domination: DominationFlag,
}

impl ChernData {
    pub fn new(
        k: u32,
        d: Vec<i64>,
        d_alpha: BTreeMap<MultiIndex, BigInt>,
        domination: DominationFlag,
    ) -> Result<Self, ModelError> {
        if k < 1 {
            return Err(ModelError::InvalidBundle("rank k must be >= 1".into()));
        }
        let m = d.len();
        if m == 0 {
            return Err(ModelError::InvalidBundle(
                "c1 coefficient vector must be nonempty".into(),
            ));
        }
        let mut cleaned = BTreeMap::new();
        for (alpha, c) in d_alpha {
            if alpha.len() != m {
                return Err(ModelError::InvalidBundle(format!(
                    "top Chern exponent {alpha} has {} entries, expected {m}",
                    alpha.len()
                )));
            }
            if alpha.total() != k {
                return Err(ModelError::InvalidBundle(format!(
                    "top Chern exponent {alpha} has degree {}, expected k = {k}",
                    alpha.total()
                )));
            }
            if !c.is_zero() {
                cleaned.insert(alpha, c);
            }
        }
        Ok(ChernData {
            k,
            d,
            d_alpha: cleaned,
            domination,
        })
    }

    pub fn rank(&self) -> u32 {
        self.k
    }

    pub fn factor_count(&self) -> usize {
        self.d.len()
    }

    pub fn c1(&self) -> &[i64] {
        &self.d
    }

    pub fn d_alpha(&self) -> &BTreeMap<MultiIndex, BigInt> {
        &self.d_alpha
    }

    pub fn domination_flag(&self) -> DominationFlag {
        self.domination
    }

    /// Coefficient of `H^alpha` in the top Chern class; 0 when absent.
    pub fn coefficient(&self, alpha: &MultiIndex) -> BigInt {
        self.d_alpha
            .get(alpha)
            .cloned()
            .unwrap_or_else(BigInt::zero)
    }
}

/// Bundle input for instance assembly: either a split degree matrix with a
/// domination flag, or explicit Chern data (which embeds its flag).
#[derive(Debug, Clone)]
pub enum BundleInput {
    Split {
        spec: SplitBundleSpec,
        domination: DominationFlag,
    },
    Chern(ChernData),
}

/// The assembled instance: ambient, resolved Chern numbers, the canonical
/// coefficients of `X` (`KX_i = a_i + d_i`), and the resolved
/// section-domination status.
#[derive(Debug, Clone)]
pub struct VarietyInstance {
    ambient: AmbientSpace,
    chern: ChernData,
    split: Option<SplitBundleSpec>,
    kx: Vec<i64>,
    domination: SectionDomination,
    warnings: Vec<String>,
}

/// Assembles a checkable instance. Requires `1 <= k <= dim A - 1`; the
/// hyperbolicity criteria additionally need `k <= dim A - 2` and enforce
/// that themselves. When the section-domination flag cannot be resolved a
/// warning is recorded and hyperbolicity verdicts degrade to Undetermined.
pub fn build_instance(
    ambient: &AmbientSpace,
    bundle: BundleInput,
) -> Result<VarietyInstance, ModelError> {
    let m = ambient.factor_count();
    let mut warnings = Vec::new();

    let (chern, split, flag) = match bundle {
        BundleInput::Split { spec, domination } => {
            if spec.factor_count() != m {
                return Err(ModelError::InvalidBundle(format!(
                    "bundle has {} factors, ambient has {m}",
                    spec.factor_count()
                )));
            }
            let d = spec.c1();
            let ck = ck_split(&spec, ambient)?;
            if !ambient.is_full_product() {
                warnings.push(
                    "top Chern coefficients computed by formal expansion; relations of the \
                     ambient subvariety are not modeled"
                        .to_string(),
                );
            }
            let d_alpha: BTreeMap<MultiIndex, BigInt> = ck
                .terms()
                .map(|(a, c)| (a.clone(), c.clone()))
                .collect();
            let chern = ChernData::new(spec.rank(), d, d_alpha, domination)?;
            (chern, Some(spec), domination)
        }
        BundleInput::Chern(chern) => {
            if chern.factor_count() != m {
                return Err(ModelError::InvalidBundle(format!(
                    "Chern data has {} factors, ambient has {m}",
                    chern.factor_count()
                )));
            }
            for alpha in chern.d_alpha().keys() {
                if !alpha.within(ambient.bounds()) {
                    return Err(ModelError::InvalidBundle(format!(
                        "top Chern exponent {alpha} exceeds the ambient bounds"
                    )));
                }
            }
            let flag = chern.domination_flag();
            (chern, None, flag)
        }
    };

    let k = chern.rank();
    if k < 1 || k + 1 > ambient.dim() {
        return Err(ModelError::RankOutOfRange {
            rank: k,
            max: ambient.dim().saturating_sub(1),
        });
    }

    let domination = match flag {
        DominationFlag::AssertedTrue => SectionDomination::Asserted,
        DominationFlag::AssertedFalse => SectionDomination::Denied,
        DominationFlag::Auto => match &split {
            Some(spec) if section_domination_auto(spec, ambient) => {
                SectionDomination::VerifiedAuto
            }
            _ => {
                warnings.push(
                    "section domination could not be verified automatically and was not \
                     asserted; hyperbolicity verdicts degrade to Undetermined"
                        .to_string(),
                );
                SectionDomination::Unresolved
            }
        },
    };

    let kx = ambient
        .canonical_coefficients()
        .iter()
        .zip(chern.c1())
        .map(|(a, d)| a + d)
        .collect();

    Ok(VarietyInstance {
        ambient: ambient.clone(),
        chern,
        split,
        kx,
        domination,
        warnings,
    })
}

impl VarietyInstance {
    pub fn ambient(&self) -> &AmbientSpace {
        &self.ambient
    }

    pub fn chern(&self) -> &ChernData {
        &self.chern
    }

    pub fn split(&self) -> Option<&SplitBundleSpec> {
        self.split.as_ref()
    }

    pub fn rank(&self) -> u32 {
        self.chern.rank()
    }

    pub fn dim(&self) -> u32 {
        self.ambient.dim()
    }

    pub fn factor_count(&self) -> usize {
        self.ambient.factor_count()
    }

    pub fn a(&self, i: usize) -> i64 {
        self.ambient.canonical_coefficient(i)
    }

    pub fn d(&self, i: usize) -> i64 {
        self.chern.c1()[i]
    }

    pub fn kx_coefficients(&self) -> &[i64] {
        &self.kx
    }

    pub fn domination(&self) -> SectionDomination {
        self.domination
    }

    pub fn warnings(&self) -> &[String] {
        &self.warnings
    }

    /// Lower threshold `D - k - a_i - 1` for factor `i`: the hyperbolicity
    /// criteria need `d_i` above (strict) or at (boundary) this value.
    pub fn lower_threshold(&self, i: usize) -> i64 {
        i64::from(self.dim()) - i64::from(self.rank()) - self.a(i) - 1
    }

    /// Line threshold `D - k - a_i - 3` for factor `i`: at or below this
    /// value the instance carries lines and is not hyperbolic.
    pub fn line_threshold(&self, i: usize) -> i64 {
        i64::from(self.dim()) - i64::from(self.rank()) - self.a(i) - 3
    }

    /// Coefficient `d_alpha` of the top Chern class; reads 0 for absent or
    /// out-of-bounds exponents.
    pub fn d_alpha_or_zero(&self, alpha: &MultiIndex) -> BigInt {
        if !alpha.within(self.ambient.bounds()) {
            return BigInt::zero();
        }
        self.chern.coefficient(alpha)
    }

    /// `d_alpha` at `lambda + e_r`, reading 0 out of bounds.
    pub fn d_alpha_shifted(&self, lambda: &MultiIndex, r: usize) -> BigInt {
        let m = self.factor_count();
        match lambda.add(&MultiIndex::unit(m, r)) {
            Ok(alpha) => self.d_alpha_or_zero(&alpha),
            Err(_) => BigInt::zero(),
        }
    }

    /// The class of `X` in the ambient ring, assembled from `d_alpha`.
    pub fn class_of_x(&self) -> ChowClass {
        ChowClass::from_terms(
            self.ambient.bounds().to_vec(),
            self.chern
                .d_alpha()
                .iter()
                .map(|(a, c)| (a.clone(), c.clone())),
        )
        .expect("d_alpha validated against bounds at build time")
    }

    /// True when the divisor coefficient used by a shift witness is strictly
    /// positive.
    pub fn divisor_positive(&self, lambda: &MultiIndex, r: usize) -> bool {
        self.d_alpha_shifted(lambda, r).is_positive()
    }
}
