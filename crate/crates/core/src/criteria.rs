//! Decision procedures for algebraic hyperbolicity of the very general zero
//! locus `X` of a rank-`k` bundle on a `D`-dimensional ambient `A`.
//!
//! Writing `T_i = D - k - a_i - 1` for the lower threshold of factor `i`:
//!
//! * if `d_i > T_i` for all `i`, `X` is algebraically hyperbolic (strict path);
//! * if `d_i >= T_i` for all `i` and every factor `r` admits a shift witness
//!   `lambda` with `|lambda| = k - 1`, `d_{lambda+e_r} > 0` and
//!   `a_i + d_i - d_{lambda+e_i}/d_{lambda+e_r} > 0` for `i != r`, `X` is
//!   algebraically hyperbolic (boundary path);
//! * if `d_i <= T_i - 2` for some `i`, `X` carries lines and is not
//!   algebraically hyperbolic.
//!
//! Hyperbolic verdicts come with an explicit rational `eps > 0` such that
//! `2g(C) - 2 >= eps * deg_H(C)` for every integral curve `C` on `X`, where
//! `H = H_1 + ... + H_m`.

use std::collections::BTreeMap;
use std::fmt;

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{One, Signed};
use thiserror::Error;

use crate::chow::{tuples_with_sum, MultiIndex};
use crate::model::{
    build_instance, AmbientSpace, BundleInput, DominationFlag, ModelError, SplitBundleSpec,
    VarietyInstance,
};

#[derive(Debug, Error)]
pub enum CriteriaError {
    #[error("invalid input: {0}")]
    InvalidInput(String),
    #[error("not applicable: {0}")]
    NotApplicable(String),
    #[error("contract violation: {0}")]
    ContractViolation(String),
    #[error("inconsistent input: both the line criterion and a hyperbolicity criterion fired")]
    InputInconsistency,
    #[error(transparent)]
    Model(#[from] ModelError),
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum VerdictKind {
    Hyperbolic,
    NotHyperbolic,
    Undetermined,
}

impl fmt::Display for VerdictKind {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let s = match self {
            VerdictKind::Hyperbolic => "Hyperbolic",
            VerdictKind::NotHyperbolic => "NotHyperbolic",
            VerdictKind::Undetermined => "Undetermined",
        };
        write!(f, "{s}")
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum CertificatePath {
    Strict,
    Boundary,
}

impl fmt::Display for CertificatePath {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let s = match self {
            CertificatePath::Strict => "strict",
            CertificatePath::Boundary => "boundary",
        };
        write!(f, "{s}")
    }
}

/// Which curve-type sub-case a per-factor coefficient list covers.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum CoefficientCase {
    /// Strict path: the single list `a_i + d_i - (D - k - 1)`.
    Strict,
    /// Boundary path, curve types with every `s_i <= D - k - 2`: constant 1.
    NonExtremal,
    /// Boundary path, the extremal type concentrated on `factor` (0-based).
    Extremal { factor: usize },
}

impl fmt::Display for CoefficientCase {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            CoefficientCase::Strict => write!(f, "strict"),
            CoefficientCase::NonExtremal => write!(f, "non-extremal"),
            CoefficientCase::Extremal { factor } => write!(f, "extremal-factor-{}", factor + 1),
        }
    }
}

/// An explicit hyperbolicity certificate: the rational `eps` of the genus
/// inequality together with the per-case coefficient lists whose minimum it
/// is, and (on the boundary path) one shift witness per factor.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct EpsilonCertificate {
    pub eps: BigRational,
    pub path: CertificatePath,
    /// Boundary path only: factor `r` (0-based) to its witness `lambda`.
    pub witnesses: BTreeMap<usize, MultiIndex>,
    pub coefficient_floors: Vec<(CoefficientCase, Vec<BigRational>)>,
}

impl EpsilonCertificate {
    /// Minimum over all recorded coefficient lists; `eps` must equal this.
    pub fn minimum_floor(&self) -> Option<BigRational> {
        self.coefficient_floors
            .iter()
            .flat_map(|(_, vs)| vs.iter())
            .min()
            .cloned()
    }

    /// Internal consistency: `eps > 0` and `eps` is the minimum of the
    /// recorded coefficient lists.
    pub fn is_consistent(&self) -> bool {
        self.eps.is_positive() && self.minimum_floor().as_ref() == Some(&self.eps)
    }
}

#[derive(Debug, Clone)]
pub struct Verdict {
    pub kind: VerdictKind,
    pub certificate: Option<EpsilonCertificate>,
    /// NotHyperbolic only: the factor (0-based) whose lines witness it.
    pub witness_factor: Option<usize>,
    pub reasons: Vec<String>,
}

fn ratio(n: i64) -> BigRational {
    BigRational::from_integer(BigInt::from(n))
}

/// Strict hyperbolicity criterion: every `d_i` strictly above its lower
/// threshold. Requires `k <= D - 2` and a resolved section-domination
/// assumption; otherwise returns false.
pub fn check_strict(inst: &VarietyInstance) -> bool {
    if inst.rank() + 2 > inst.dim() || !inst.domination().holds() {
        return false;
    }
    (0..inst.factor_count()).all(|i| inst.d(i) > inst.lower_threshold(i))
}

/// Whether `lambda` (with `|lambda| = k - 1`) is an admissible shift witness
/// for factor `r`: `lambda + e_r` stays within the ambient exponent bounds,
/// the divisor coefficient `d_{lambda+e_r}` is strictly positive, and
/// `a_i + d_i - d_{lambda+e_i}/d_{lambda+e_r} > 0` for every `i != r`
/// (exact comparison; out-of-bounds coefficients read 0).
pub fn lambda_qualifies(inst: &VarietyInstance, r: usize, lambda: &MultiIndex) -> bool {
    let m = inst.factor_count();
    if lambda.len() != m || r >= m {
        return false;
    }
    if lambda.total() + 1 != inst.rank() {
        return false;
    }
    let shifted = match lambda.add(&MultiIndex::unit(m, r)) {
        Ok(a) => a,
        Err(_) => return false,
    };
    if !shifted.within(inst.ambient().bounds()) {
        return false;
    }
    let den = inst.d_alpha_or_zero(&shifted);
    if !den.is_positive() {
        return false;
    }
    for i in 0..m {
        if i == r {
            continue;
        }
        let num = inst.d_alpha_shifted(lambda, i);
        // a_i + d_i - num/den > 0  <=>  (a_i + d_i) * den - num > 0, den > 0.
        let lhs = BigInt::from(inst.a(i) + inst.d(i)) * &den - num;
        if !lhs.is_positive() {
            return false;
        }
    }
    true
}

fn lambda_search_with_notes(
    inst: &VarietyInstance,
    r: usize,
    notes: &mut Vec<String>,
) -> Option<MultiIndex> {
    let m = inst.factor_count();
    let k = inst.rank();
    // Candidates are enumerated from (k-1, 0, ..., 0) down to (0, ..., 0, k-1);
    // the first admissible one wins.
    for lambda in tuples_with_sum(k - 1, m).into_iter().rev() {
        let shifted = lambda.add(&MultiIndex::unit(m, r)).ok()?;
        if !shifted.within(inst.ambient().bounds()) {
            continue;
        }
        let den = inst.d_alpha_or_zero(&shifted);
        if den.is_negative() {
            notes.push(format!(
                "factor r = {}: candidate lambda = {lambda} skipped, divisor coefficient \
                 d at {shifted} is negative ({den})",
                r + 1
            ));
            continue;
        }
        if lambda_qualifies(inst, r, &lambda) {
            return Some(lambda);
        }
    }
    None
}

/// First admissible shift witness for factor `r` (0-based), enumerating
/// candidates with `|lambda| = k - 1` from `(k-1, 0, ..., 0)` downwards.
pub fn lambda_search(inst: &VarietyInstance, r: usize) -> Option<MultiIndex> {
    let mut notes = Vec::new();
    lambda_search_with_notes(inst, r, &mut notes)
}

fn boundary_with_notes(
    inst: &VarietyInstance,
) -> (Option<BTreeMap<usize, MultiIndex>>, Vec<String>) {
    let mut notes = Vec::new();
    let m = inst.factor_count();
    for i in 0..m {
        if inst.d(i) < inst.lower_threshold(i) {
            notes.push(format!(
                "factor {}: d = {} is below the lower threshold D - k - a_i - 1 = {}",
                i + 1,
                inst.d(i),
                inst.lower_threshold(i)
            ));
            return (None, notes);
        }
    }
    let mut witnesses = BTreeMap::new();
    for r in 0..m {
        match lambda_search_with_notes(inst, r, &mut notes) {
            Some(lambda) => {
                witnesses.insert(r, lambda);
            }
            None => {
                notes.push(format!(
                    "factor r = {}: no admissible shift lambda with |lambda| = k - 1",
                    r + 1
                ));
                return (None, notes);
            }
        }
    }
    (Some(witnesses), notes)
}

/// Boundary hyperbolicity criterion: every `d_i` at or above its lower
/// threshold and every factor admits a shift witness. Returns the witness
/// map on success. Requires `k <= D - 2` and resolved section domination.
pub fn check_boundary(inst: &VarietyInstance) -> Option<BTreeMap<usize, MultiIndex>> {
    if inst.rank() + 2 > inst.dim() || !inst.domination().holds() {
        return None;
    }
    boundary_with_notes(inst).0
}

/// Line criterion: the smallest factor `i` (0-based) with
/// `d_i <= D - k - a_i - 3`, if any. Valid for `1 <= k <= D - 1` and needs
/// no section-domination assumption.
pub fn check_lines(inst: &VarietyInstance) -> Option<usize> {
    (0..inst.factor_count()).find(|&i| inst.d(i) <= inst.line_threshold(i))
}

/// Builds the epsilon certificate for an instance that passed `check_strict`
/// (pass `None`) or `check_boundary` (pass the witness map). Calling it
/// without a passing check is a contract violation.
pub fn epsilon_certificate(
    inst: &VarietyInstance,
    witnesses: Option<&BTreeMap<usize, MultiIndex>>,
) -> Result<EpsilonCertificate, CriteriaError> {
    let m = inst.factor_count();
    let d_minus_k_minus_1 = i64::from(inst.dim()) - i64::from(inst.rank()) - 1;
    match witnesses {
        None => {
            if !check_strict(inst) {
                return Err(CriteriaError::ContractViolation(
                    "strict-path certificate requested but the strict criterion does not hold"
                        .into(),
                ));
            }
            let coeffs: Vec<BigRational> = (0..m)
                .map(|i| ratio(inst.a(i) + inst.d(i) - d_minus_k_minus_1))
                .collect();
            let eps = coeffs.iter().min().cloned().expect("m >= 1");
            Ok(EpsilonCertificate {
                eps,
                path: CertificatePath::Strict,
                witnesses: BTreeMap::new(),
                coefficient_floors: vec![(CoefficientCase::Strict, coeffs)],
            })
        }
        Some(map) => {
            if inst.rank() + 2 > inst.dim() || !inst.domination().holds() {
                return Err(CriteriaError::ContractViolation(
                    "boundary-path certificate requested but the boundary criterion is not \
                     applicable"
                        .into(),
                ));
            }
            for i in 0..m {
                if inst.d(i) < inst.lower_threshold(i) {
                    return Err(CriteriaError::ContractViolation(format!(
                        "boundary-path certificate requested but factor {} is below its lower \
                         threshold",
                        i + 1
                    )));
                }
            }
            let mut floors = vec![(
                CoefficientCase::NonExtremal,
                vec![BigRational::one()],
            )];
            for r in 0..m {
                let lambda = map.get(&r).ok_or_else(|| {
                    CriteriaError::ContractViolation(format!(
                        "missing shift witness for factor r = {}",
                        r + 1
                    ))
                })?;
                if !lambda_qualifies(inst, r, lambda) {
                    return Err(CriteriaError::ContractViolation(format!(
                        "lambda = {lambda} is not an admissible witness for factor r = {}",
                        r + 1
                    )));
                }
                let den = inst.d_alpha_shifted(lambda, r);
                let mut coeffs = Vec::with_capacity(m);
                for i in 0..m {
                    let value = if i == r {
                        ratio(inst.a(r) + inst.d(r) - d_minus_k_minus_1)
                            + BigRational::new(BigInt::one(), den.clone())
                    } else {
                        ratio(inst.a(i) + inst.d(i))
                            - BigRational::new(inst.d_alpha_shifted(lambda, i), den.clone())
                    };
                    coeffs.push(value);
                }
                floors.push((CoefficientCase::Extremal { factor: r }, coeffs));
            }
            let eps = floors
                .iter()
                .flat_map(|(_, vs)| vs.iter())
                .min()
                .cloned()
                .expect("nonempty floors");
            Ok(EpsilonCertificate {
                eps,
                path: CertificatePath::Boundary,
                witnesses: map.clone(),
                coefficient_floors: floors,
            })
        }
    }
}

fn line_notes(inst: &VarietyInstance, i: usize, reasons: &mut Vec<String>) {
    let dim_lines = i64::from(inst.dim()) - inst.a(i) - 3;
    let surplus = dim_lines - inst.d(i) - i64::from(inst.rank());
    reasons.push(format!(
        "factor {}: d = {} <= {} (line threshold D - k - a_i - 3)",
        i + 1,
        inst.d(i),
        inst.line_threshold(i)
    ));
    reasons.push(format!(
        "factor {}: the family of factor-{} lines in the ambient has dimension \
         D - a_i - 3 = {dim_lines}; surplus (D - a_i - 3) - d_i - k = {surplus}",
        i + 1,
        i + 1
    ));
}

/// Runs the full decision cascade and returns a verdict with reasons.
///
/// Priority: the line criterion yields NotHyperbolic; otherwise the strict
/// or boundary criterion yields Hyperbolic with a certificate; otherwise
/// Undetermined. Both sides firing at once is an input inconsistency.
pub fn classify(inst: &VarietyInstance) -> Result<Verdict, CriteriaError> {
    let k = inst.rank();
    let dim = inst.dim();
    if k < 1 || k + 1 > dim {
        return Err(CriteriaError::InvalidInput(format!(
            "rank k = {k} out of range for every criterion (need 1 <= k <= {})",
            dim.saturating_sub(1)
        )));
    }
    let mut reasons = Vec::new();
    let line_witness = check_lines(inst);
    let mut certificate = None;

    if k + 2 <= dim {
        if !inst.domination().holds() {
            reasons.push(format!(
                "section domination {}: hyperbolicity criteria skipped (the line criterion \
                 still applies)",
                inst.domination().describe()
            ));
        } else if check_strict(inst) {
            certificate = Some(epsilon_certificate(inst, None)?);
        } else {
            reasons.push(
                "strict criterion failed: some d_i is not strictly above its lower threshold"
                    .to_string(),
            );
            let (witnesses, notes) = boundary_with_notes(inst);
            reasons.extend(notes);
            if let Some(map) = witnesses {
                certificate = Some(epsilon_certificate(inst, Some(&map))?);
            }
        }
    } else {
        reasons.push(format!(
            "rank k = {k} equals dim A - 1: only the line criterion applies"
        ));
    }

    match (line_witness, certificate) {
        (Some(_), Some(_)) => Err(CriteriaError::InputInconsistency),
        (Some(i), None) => {
            line_notes(inst, i, &mut reasons);
            Ok(Verdict {
                kind: VerdictKind::NotHyperbolic,
                certificate: None,
                witness_factor: Some(i),
                reasons,
            })
        }
        (None, Some(cert)) => Ok(Verdict {
            kind: VerdictKind::Hyperbolic,
            certificate: Some(cert),
            witness_factor: None,
            reasons,
        }),
        (None, None) => {
            reasons.push(
                "line criterion failed: every d_i is above its line threshold".to_string(),
            );
            reasons.push(
                "Undetermined is a statement about the implemented criteria only, not about \
                 the instance itself"
                    .to_string(),
            );
            Ok(Verdict {
                kind: VerdictKind::Undetermined,
                certificate: None,
                witness_factor: None,
                reasons,
            })
        }
    }
}

/// Uniform-degree criterion: for a split bundle whose summand degrees are
/// independent of the factor, `d >= D - k - a_i - 1` for all `i` together
/// with `(D - 1) / 2 > k` implies hyperbolicity. Errors with NotApplicable
/// on non-uniform input; returns false when section domination is
/// unresolved (the entailment needs it).
pub fn check_uniform(inst: &VarietyInstance, uniform: bool) -> Result<bool, CriteriaError> {
    if !uniform {
        return Err(CriteriaError::NotApplicable(
            "summand degrees are not uniform across factors".into(),
        ));
    }
    if let Some(split) = inst.split() {
        if !split.is_uniform() {
            return Err(CriteriaError::NotApplicable(
                "split matrix is not uniform across factors".into(),
            ));
        }
    }
    if !inst.domination().holds() {
        return Ok(false);
    }
    let bounds_ok = (0..inst.factor_count()).all(|i| inst.d(i) >= inst.lower_threshold(i));
    let dim_ok = i64::from(inst.dim()) - 1 > 2 * i64::from(inst.rank());
    Ok(bounds_ok && dim_ok)
}

/// Closed-form verdict for a very general complete intersection of
/// hypersurfaces of degrees `degrees` in `P^n` (so `k = degrees.len()`,
/// `k <= n - 2`): Hyperbolic iff `sum >= 2n - k`, NotHyperbolic iff
/// `sum <= 2n - k - 2`, Undetermined on the single value in between.
///
/// This is an independent route from `classify`; the two must agree on the
/// equivalent split instance.
pub fn classify_pn_ci(n: u32, degrees: &[i64]) -> Result<Verdict, CriteriaError> {
    let k = degrees.len() as u32;
    if k < 1 {
        return Err(CriteriaError::InvalidInput(
            "need at least one hypersurface degree".into(),
        ));
    }
    if k + 2 > n {
        return Err(CriteriaError::InvalidInput(format!(
            "codimension k = {k} must satisfy k <= n - 2 = {}",
            n.saturating_sub(2)
        )));
    }
    if degrees.iter().any(|&d| d < 1) {
        return Err(CriteriaError::InvalidInput(
            "hypersurface degrees must be >= 1".into(),
        ));
    }
    let sum: i64 = degrees.iter().sum();
    let hyper_at = 2 * i64::from(n) - i64::from(k);
    if sum >= hyper_at {
        let mut reasons = vec![format!(
            "sum of degrees {sum} >= 2n - k = {hyper_at}: hyperbolic range"
        )];
        let certificate = if sum > hyper_at {
            EpsilonCertificate {
                eps: ratio(sum - hyper_at),
                path: CertificatePath::Strict,
                witnesses: BTreeMap::new(),
                coefficient_floors: vec![(CoefficientCase::Strict, vec![ratio(sum - hyper_at)])],
            }
        } else {
            // Boundary: eps = min(1, 1 / prod d_j) with witness (k-1).
            let product: BigInt = degrees.iter().map(|&d| BigInt::from(d)).product();
            let inv = BigRational::new(BigInt::one(), product);
            let eps = inv.clone().min(BigRational::one());
            let mut witnesses = BTreeMap::new();
            witnesses.insert(0usize, MultiIndex::new(vec![k - 1]));
            reasons.push("boundary case: sum of degrees equals 2n - k".to_string());
            EpsilonCertificate {
                eps,
                path: CertificatePath::Boundary,
                witnesses,
                coefficient_floors: vec![
                    (CoefficientCase::NonExtremal, vec![BigRational::one()]),
                    (CoefficientCase::Extremal { factor: 0 }, vec![inv]),
                ],
            }
        };
        Ok(Verdict {
            kind: VerdictKind::Hyperbolic,
            certificate: Some(certificate),
            witness_factor: None,
            reasons,
        })
    } else if sum <= hyper_at - 2 {
        Ok(Verdict {
            kind: VerdictKind::NotHyperbolic,
            certificate: None,
            witness_factor: Some(0),
            reasons: vec![format!(
                "sum of degrees {sum} <= 2n - k - 2 = {}: the intersection carries lines",
                hyper_at - 2
            )],
        })
    } else {
        Ok(Verdict {
            kind: VerdictKind::Undetermined,
            certificate: None,
            witness_factor: None,
            reasons: vec![format!(
                "sum of degrees {sum} = 2n - k - 1 = {}: between the two thresholds",
                hyper_at - 1
            )],
        })
    }
}

/// Recorded status of very general degree-`d` hypersurfaces in `P^n`.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum KnownStatus {
    KnownHyperbolic,
    KnownNotHyperbolic,
    Open,
}

impl fmt::Display for KnownStatus {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let s = match self {
            KnownStatus::KnownHyperbolic => "KnownHyperbolic",
            KnownStatus::KnownNotHyperbolic => "KnownNotHyperbolic",
            KnownStatus::Open => "Open",
        };
        write!(f, "{s}")
    }
}

/// The recorded classification of very general degree-`d` hypersurfaces in
/// `P^n` for `n >= 3`: surfaces in `P^3` are settled (`d >= 5` hyperbolic,
/// `d <= 4` not), threefolds in `P^4` are settled except `d = 6`, and for
/// `n >= 5` the split is at `d >= 2n - 2` versus `d <= 2n - 3`.
pub fn known_hypersurface_status(n: u32, d: i64) -> Result<KnownStatus, CriteriaError> {
    if n < 3 {
        return Err(CriteriaError::InvalidInput(format!(
            "hypersurface table starts at n = 3, got n = {n}"
        )));
    }
    if d < 1 {
        return Err(CriteriaError::InvalidInput(format!(
            "degree must be >= 1, got {d}"
        )));
    }
    Ok(match n {
        3 => {
            if d >= 5 {
                KnownStatus::KnownHyperbolic
            } else {
                KnownStatus::KnownNotHyperbolic
            }
        }
        4 => {
            if d >= 7 {
                KnownStatus::KnownHyperbolic
            } else if d <= 5 {
                KnownStatus::KnownNotHyperbolic
            } else {
                KnownStatus::Open
            }
        }
        _ => {
            if d >= 2 * i64::from(n) - 2 {
                KnownStatus::KnownHyperbolic
            } else {
                KnownStatus::KnownNotHyperbolic
            }
        }
    })
}

/// Checks the adjoint-divisor construction: given a rank-(k-1) split bundle
/// `E'` with all degrees positive and an ample twist with exponents `b_i > 0`,
/// form the divisor class `M` with
/// `m_i = (a_i + d'_i) + (3 (D - k + 1) + 1) b_i` (the canonical class of the
/// intermediate zero locus `Y` plus `3 dim Y + 1` copies of the twist), add
/// it to `E'` as a k-th summand, and test the strict criterion on the result.
///
/// Hypothesis gates (each failing with NotApplicable): `a_i >= -D - 1`,
/// `k <= D - 2`, positive `b_i` and `E'` degrees, and `m_i > 0`. On proper
/// subvarieties of the product the section-domination hypothesis of the
/// construction is taken as asserted.
pub fn check_adjoint_instance(
    ambient: &AmbientSpace,
    eprime: &SplitBundleSpec,
    b: &[i64],
) -> Result<bool, CriteriaError> {
    let m = ambient.factor_count();
    if eprime.factor_count() != m {
        return Err(CriteriaError::InvalidInput(format!(
            "E' has {} factors, ambient has {m}",
            eprime.factor_count()
        )));
    }
    if b.len() != m {
        return Err(CriteriaError::InvalidInput(format!(
            "twist exponent vector has length {}, expected {m}",
            b.len()
        )));
    }
    let dim = i64::from(ambient.dim());
    for (i, &ai) in ambient.canonical_coefficients().iter().enumerate() {
        if ai < -dim - 1 {
            return Err(CriteriaError::NotApplicable(format!(
                "a_{} = {ai} is below -D - 1 = {}",
                i + 1,
                -dim - 1
            )));
        }
    }
    let k = eprime.rank() + 1;
    if k + 2 > ambient.dim() {
        return Err(CriteriaError::NotApplicable(format!(
            "rank k = {k} must satisfy k <= D - 2 = {}",
            ambient.dim().saturating_sub(2)
        )));
    }
    if b.iter().any(|&bi| bi < 1) {
        return Err(CriteriaError::NotApplicable(
            "twist exponents b_i must be >= 1".into(),
        ));
    }
    if eprime
        .rows()
        .iter()
        .any(|row| row.iter().any(|&d| d < 1))
    {
        return Err(CriteriaError::NotApplicable(
            "E' degrees must all be >= 1 for the construction".into(),
        ));
    }
    let dprime = eprime.c1();
    let dim_y = dim - i64::from(k) + 1;
    let multiplier = 3 * dim_y + 1;
    let mut twist_row = Vec::with_capacity(m);
    for i in 0..m {
        let mi = ambient.canonical_coefficient(i) + dprime[i] + multiplier * b[i];
        if mi <= 0 {
            return Err(CriteriaError::NotApplicable(format!(
                "adjoint divisor class is not positive in factor {} (m_{} = {mi})",
                i + 1,
                i + 1
            )));
        }
        twist_row.push(mi);
    }
    let mut rows = eprime.rows().to_vec();
    rows.push(twist_row);
    let spec = SplitBundleSpec::new(rows)?;
    let domination = if ambient.is_full_product() {
        DominationFlag::Auto
    } else {
        // The construction is stated under the section-domination hypothesis.
        DominationFlag::AssertedTrue
    };
    let inst = build_instance(ambient, BundleInput::Split { spec, domination })?;
    Ok(check_strict(&inst))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::model::ChernData;

    fn pn_split(n: u32, degrees: &[i64]) -> VarietyInstance {
        let amb = AmbientSpace::projective(n);
        let rows = degrees.iter().map(|&d| vec![d]).collect();
        let spec = SplitBundleSpec::new(rows).unwrap();
        build_instance(
            &amb,
            BundleInput::Split {
                spec,
                domination: DominationFlag::Auto,
            },
        )
        .unwrap()
    }

    fn p2p2_split(d1: i64, d2: i64) -> VarietyInstance {
        let amb = AmbientSpace::product(&[2, 2]);
        let spec = SplitBundleSpec::new(vec![vec![d1, d2]]).unwrap();
        build_instance(
            &amb,
            BundleInput::Split {
                spec,
                domination: DominationFlag::Auto,
            },
        )
        .unwrap()
    }

    #[test]
    fn strict_examples() {
        assert!(check_strict(&pn_split(4, &[8])));
        assert!(!check_strict(&pn_split(4, &[7])));
        // P^2 x P^2, d = (6, 5): factor 2 sits exactly at the threshold 5.
        let amb = AmbientSpace::product(&[2, 2]);
        let spec = SplitBundleSpec::new(vec![vec![6, 5]]).unwrap();
        let inst = build_instance(
            &amb,
            BundleInput::Split {
                spec,
                domination: DominationFlag::Auto,
            },
        )
        .unwrap();
        assert!(!check_strict(&inst));
    }

    #[test]
    fn lambda_search_examples() {
        // m = 1: lambda = (k - 1) and the side condition is vacuous.
        let inst = pn_split(5, &[4, 4]);
        assert_eq!(lambda_search(&inst, 0), Some(MultiIndex::new(vec![1])));

        let inst = p2p2_split(5, 5);
        let lambda = lambda_search(&inst, 0).unwrap();
        assert_eq!(lambda, MultiIndex::new(vec![0, 0]));
        assert!(lambda_qualifies(&inst, 0, &lambda));
    }

    #[test]
    fn lambda_search_enumeration_order() {
        // k = 2, d_alpha = {(2,0): 0, (1,1): 4, (0,2): 1}: for r = 1 the
        // candidate (1,0) is rejected on a zero divisor and (0,1) is taken.
        let amb = AmbientSpace::new(vec![2, 2], 4, vec![-3, -3], true, true).unwrap();
        let mut map = BTreeMap::new();
        map.insert(MultiIndex::new(vec![1, 1]), BigInt::from(4));
        map.insert(MultiIndex::new(vec![0, 2]), BigInt::from(1));
        let chern =
            ChernData::new(2, vec![4, 4], map, DominationFlag::AssertedTrue).unwrap();
        let inst = build_instance(&amb, BundleInput::Chern(chern)).unwrap();
        let lambda = lambda_search(&inst, 0).unwrap();
        assert_eq!(lambda, MultiIndex::new(vec![0, 1]));
        // Divisor used is d_{(1,1)} = 4; side condition -3 + 4 - 1/4 > 0.
        assert_eq!(
            inst.d_alpha_shifted(&lambda, 0),
            BigInt::from(4)
        );
    }

    #[test]
    fn boundary_examples() {
        let map = check_boundary(&pn_split(4, &[7])).unwrap();
        assert_eq!(map[&0], MultiIndex::new(vec![0]));

        let map = check_boundary(&p2p2_split(5, 5)).unwrap();
        assert_eq!(map[&0], MultiIndex::new(vec![0, 0]));
        assert_eq!(map[&1], MultiIndex::new(vec![0, 0]));

        assert!(check_boundary(&pn_split(4, &[6])).is_none());
    }

    #[test]
    fn lines_examples() {
        let inst = pn_split(4, &[5]);
        assert_eq!(check_lines(&inst), Some(0));
        assert_eq!(check_lines(&pn_split(4, &[6])), None);
        // k = D - 1 is allowed for the line criterion.
        let inst = pn_split(4, &[1, 1, 1]);
        assert_eq!(check_lines(&inst), Some(0));
    }

    #[test]
    fn epsilon_examples() {
        let cert = epsilon_certificate(&pn_split(5, &[10]), None).unwrap();
        assert_eq!(cert.eps, ratio(1));
        assert_eq!(cert.path, CertificatePath::Strict);
        assert!(cert.is_consistent());

        let inst = pn_split(4, &[7]);
        let map = check_boundary(&inst).unwrap();
        let cert = epsilon_certificate(&inst, Some(&map)).unwrap();
        assert_eq!(
            cert.eps,
            BigRational::new(BigInt::from(1), BigInt::from(7))
        );
        assert!(cert.is_consistent());

        let inst = p2p2_split(5, 5);
        let map = check_boundary(&inst).unwrap();
        let cert = epsilon_certificate(&inst, Some(&map)).unwrap();
        assert_eq!(
            cert.eps,
            BigRational::new(BigInt::from(1), BigInt::from(5))
        );

        // Contract violation when no check passed.
        assert!(epsilon_certificate(&pn_split(4, &[6]), None).is_err());
    }

    #[test]
    fn classify_examples() {
        let v = classify(&pn_split(4, &[7])).unwrap();
        assert_eq!(v.kind, VerdictKind::Hyperbolic);
        assert_eq!(
            v.certificate.unwrap().eps,
            BigRational::new(BigInt::from(1), BigInt::from(7))
        );

        let v = classify(&pn_split(4, &[6])).unwrap();
        assert_eq!(v.kind, VerdictKind::Undetermined);

        let v = classify(&pn_split(5, &[4, 4])).unwrap();
        assert_eq!(v.kind, VerdictKind::Hyperbolic);
        assert_eq!(v.certificate.unwrap().path, CertificatePath::Boundary);

        let v = classify(&pn_split(4, &[5])).unwrap();
        assert_eq!(v.kind, VerdictKind::NotHyperbolic);
        assert_eq!(v.witness_factor, Some(0));
    }

    #[test]
    fn uniform_examples() {
        // P^3 x P^4, k = 2, uniform degrees summing to 9.
        let amb = AmbientSpace::product(&[3, 4]);
        let spec = SplitBundleSpec::new(vec![vec![4, 4], vec![5, 5]]).unwrap();
        let inst = build_instance(
            &amb,
            BundleInput::Split {
                spec,
                domination: DominationFlag::Auto,
            },
        )
        .unwrap();
        assert!(check_uniform(&inst, true).unwrap());

        let spec = SplitBundleSpec::new(vec![vec![4, 4], vec![4, 4]]).unwrap();
        let inst = build_instance(
            &amb,
            BundleInput::Split {
                spec,
                domination: DominationFlag::Auto,
            },
        )
        .unwrap();
        assert!(!check_uniform(&inst, true).unwrap());

        // D = 5, k = 2: (D - 1) / 2 = 2 is not > 2.
        let amb = AmbientSpace::projective(5);
        let spec = SplitBundleSpec::new(vec![vec![9], vec![9]]).unwrap();
        let inst = build_instance(
            &amb,
            BundleInput::Split {
                spec,
                domination: DominationFlag::Auto,
            },
        )
        .unwrap();
        assert!(!check_uniform(&inst, true).unwrap());

        assert!(matches!(
            check_uniform(&inst, false),
            Err(CriteriaError::NotApplicable(_))
        ));
    }

    #[test]
    fn pn_ci_examples() {
        let v = classify_pn_ci(5, &[4, 4]).unwrap();
        assert_eq!(v.kind, VerdictKind::Hyperbolic);
        let v = classify_pn_ci(5, &[3, 3]).unwrap();
        assert_eq!(v.kind, VerdictKind::NotHyperbolic);
        let v = classify_pn_ci(5, &[3, 4]).unwrap();
        assert_eq!(v.kind, VerdictKind::Undetermined);
        assert!(classify_pn_ci(4, &[2, 2, 2]).is_err());
    }

    #[test]
    fn known_table_examples() {
        assert_eq!(
            known_hypersurface_status(3, 5).unwrap(),
            KnownStatus::KnownHyperbolic
        );
        assert_eq!(known_hypersurface_status(4, 6).unwrap(), KnownStatus::Open);
        assert_eq!(
            known_hypersurface_status(5, 8).unwrap(),
            KnownStatus::KnownHyperbolic
        );
        assert!(known_hypersurface_status(2, 5).is_err());
    }

    #[test]
    fn adjoint_examples() {
        // A = P^5, k = 2, E' of degree 2, b = 1: m = -6 + 2 + 13 = 9.
        let amb = AmbientSpace::projective(5);
        let eprime = SplitBundleSpec::new(vec![vec![2]]).unwrap();
        assert!(check_adjoint_instance(&amb, &eprime, &[1]).unwrap());

        // A = P^4, k = 2, E' of degree 1, b = 1: m = -5 + 1 + 10 = 6.
        let amb = AmbientSpace::projective(4);
        let eprime = SplitBundleSpec::new(vec![vec![1]]).unwrap();
        assert!(check_adjoint_instance(&amb, &eprime, &[1]).unwrap());

        // a = -8 with D = 5 violates a_i >= -D - 1 = -6.
        let amb = AmbientSpace::new(vec![8], 5, vec![-8], false, true).unwrap();
        let eprime = SplitBundleSpec::new(vec![vec![1]]).unwrap();
        assert!(matches!(
            check_adjoint_instance(&amb, &eprime, &[1]),
            Err(CriteriaError::NotApplicable(_))
        ));
    }

    #[test]
    fn negative_divisor_candidates_are_skipped_with_note() {
        // k = 2 Chern data where the first candidate (1,0) has a negative
        // divisor: it must be skipped (not used with a flipped inequality)
        // and the skip recorded in the classify notes.
        let amb = AmbientSpace::product(&[2, 2]);
        let mut map = BTreeMap::new();
        map.insert(MultiIndex::new(vec![2, 0]), BigInt::from(-3));
        map.insert(MultiIndex::new(vec![1, 1]), BigInt::from(4));
        map.insert(MultiIndex::new(vec![0, 2]), BigInt::from(1));
        let chern =
            ChernData::new(2, vec![5, 5], map, DominationFlag::AssertedTrue).unwrap();
        let inst = build_instance(&amb, BundleInput::Chern(chern)).unwrap();
        let lambda = lambda_search(&inst, 0).unwrap();
        assert_eq!(lambda, MultiIndex::new(vec![0, 1]));
        // d = (5, 5) sits above the strict threshold 4 - 2 + 3 - 1 = 4, so
        // the strict path wins; force the boundary route to surface the note.
        let (witnesses, notes) = boundary_with_notes(&inst);
        assert!(witnesses.is_some());
        assert!(
            notes.iter().any(|n| n.contains("negative")),
            "expected a skip note, got {notes:?}"
        );
    }

    #[test]
    fn rank_dim_minus_one_uses_only_the_line_criterion() {
        // k = D - 1 = 3 on P^4: low summand degrees carry lines.
        let v = classify(&pn_split(4, &[1, 1, 1])).unwrap();
        assert_eq!(v.kind, VerdictKind::NotHyperbolic);
        assert_eq!(v.witness_factor, Some(0));

        // Higher degrees clear the line threshold but no hyperbolicity
        // criterion applies at this rank.
        let v = classify(&pn_split(4, &[2, 2, 2])).unwrap();
        assert_eq!(v.kind, VerdictKind::Undetermined);
        assert!(v.certificate.is_none());
        assert!(v
            .reasons
            .iter()
            .any(|r| r.contains("only the line criterion applies")));
        assert!(v
            .reasons
            .iter()
            .any(|r| r.contains("statement about the implemented criteria")));
    }

    #[test]
    fn unresolved_domination_degrades_to_undetermined() {
        // Positive degrees but one zero entry: auto rule fails on the product.
        let amb = AmbientSpace::product(&[3, 3]);
        let spec = SplitBundleSpec::new(vec![vec![9, 0]]).unwrap();
        let inst = build_instance(
            &amb,
            BundleInput::Split {
                spec,
                domination: DominationFlag::Auto,
            },
        )
        .unwrap();
        // d = (9, 0): factor 2 is under the line threshold, so NotHyperbolic
        // still fires even though the hyperbolicity side is suppressed.
        let v = classify(&inst).unwrap();
        assert_eq!(v.kind, VerdictKind::NotHyperbolic);

        let spec = SplitBundleSpec::new(vec![vec![9, 0], vec![0, 9]]).unwrap();
        let inst = build_instance(
            &amb,
            BundleInput::Split {
                spec,
                domination: DominationFlag::Auto,
            },
        )
        .unwrap();
        let v = classify(&inst).unwrap();
        assert_eq!(v.kind, VerdictKind::Undetermined);
        assert!(v
            .reasons
            .iter()
            .any(|r| r.contains("section domination")));
    }
}
