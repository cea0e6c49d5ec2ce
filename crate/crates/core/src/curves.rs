//! Curve-side machinery: admissible curve types, genus lower bounds, scroll
//! classes, and the join-intersection bound that refines the genus estimate
//! at extremal curve types.
//!
//! A curve `C` on `X` has a multidegree profile `e_i = deg c_1(L_i|_C)` and a
//! type `(s_1, ..., s_m)` with `sum s_i <= D - k - 1`. The direct bound is
//! `2g - 2 >= sum_i (a_i + d_i - s_i) e_i`. At an extremal type concentrated
//! on factor `r` the scroll construction gives the sharper
//! `2g - 2 >= sum_i (a_i + d_i) e_i - (D - k - 2) e_r + q`, where `q` is the
//! lower bound on the degree of the quotient bundle cut out by a shift
//! witness `lambda`.

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{One, Signed, Zero};
use thiserror::Error;

use crate::chow::{tuples_with_sum, tuples_with_sum_at_most, ChowClass, ChowError, MultiIndex};
use crate::criteria::{check_boundary, check_strict};
use crate::model::{AmbientSpace, VarietyInstance};

#[derive(Debug, Error)]
pub enum CurvesError {
    #[error("invalid input: {0}")]
    InvalidInput(String),
    #[error("divisor coefficient at {exponent} is {value}, need > 0")]
    NonPositiveDivisor { exponent: MultiIndex, value: BigInt },
    #[error("ring path not comparable: {0}")]
    NotComparable(String),
    #[error("scroll degree q must be an integer, got {0}")]
    NonIntegerScrollDegree(BigRational),
    #[error("contract violation: {0}")]
    ContractViolation(String),
    #[error(transparent)]
    Chow(#[from] ChowError),
}

/// Multidegree of a curve: `e_i = deg c_1(L_i|_C)`. At least one entry must
/// be positive; the H-degree of the curve is the entry sum.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct CurveProfile {
    e: Vec<u32>,
}

impl CurveProfile {
    pub fn new(e: Vec<u32>) -> Result<Self, CurvesError> {
        if e.is_empty() {
            return Err(CurvesError::InvalidInput("empty profile".into()));
        }
        if e.iter().all(|&x| x == 0) {
            return Err(CurvesError::InvalidInput(
                "profile must have at least one positive entry".into(),
            ));
        }
        Ok(CurveProfile { e })
    }

    pub fn entries(&self) -> &[u32] {
        &self.e
    }

    pub fn entry(&self, i: usize) -> u32 {
        self.e[i]
    }

    pub fn len(&self) -> usize {
        self.e.len()
    }

    pub fn is_empty(&self) -> bool {
        self.e.is_empty()
    }

    /// H-degree `sum_i e_i`.
    pub fn h_degree(&self) -> u32 {
        self.e.iter().sum()
    }
}

/// A curve type `(s_1, ..., s_m)`; admissible types satisfy
/// `sum s_i <= D - k - 1`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct CurveType {
    s: Vec<u32>,
}

impl CurveType {
    pub fn new(s: Vec<u32>) -> Self {
        CurveType { s }
    }

    pub fn entries(&self) -> &[u32] {
        &self.s
    }

    pub fn total(&self) -> u32 {
        self.s.iter().sum()
    }

    pub fn max_entry(&self) -> u32 {
        self.s.iter().copied().max().unwrap_or(0)
    }

    /// If the type is `budget * e_r` for some factor `r`, returns `r`.
    pub fn extremal_factor(&self, budget: u32) -> Option<usize> {
        if budget == 0 || self.total() != budget {
            return None;
        }
        let mut factor = None;
        for (i, &si) in self.s.iter().enumerate() {
            if si == budget {
                factor = Some(i);
            } else if si != 0 {
                return None;
            }
        }
        factor
    }
}

/// Scroll data: the distinguished factor `r`, the degree `q` of the quotient
/// line bundle (must be an integer to name an actual scroll class), and the
/// shift `lambda` with `|lambda| = k - 1` used for the join.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct ScrollSpec {
    pub factor: usize,
    pub q: BigRational,
    pub lambda: MultiIndex,
}

impl ScrollSpec {
    pub fn new(factor: usize, q: impl Into<BigRational>, lambda: MultiIndex) -> Self {
        ScrollSpec {
            factor,
            q: q.into(),
            lambda,
        }
    }

    pub fn with_integer_q(factor: usize, q: i64, lambda: MultiIndex) -> Self {
        ScrollSpec {
            factor,
            q: BigRational::from_integer(BigInt::from(q)),
            lambda,
        }
    }
}

/// A lower bound on `2g - 2` together with the implied genus floor
/// `g >= ceil((bound + 2) / 2)`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct GenusBound {
    pub two_g_minus_2_lb: BigRational,
    pub genus_lb: BigInt,
}

impl GenusBound {
    pub fn from_lower_bound(two_g_minus_2_lb: BigRational) -> Self {
        let genus_lb = ((&two_g_minus_2_lb + BigRational::from_integer(BigInt::from(2)))
            / BigRational::from_integer(BigInt::from(2)))
        .ceil()
        .to_integer();
        GenusBound {
            two_g_minus_2_lb,
            genus_lb,
        }
    }
}

/// All admissible curve types for the given dimension and rank: tuples
/// `s` in `Z_{>=0}^m` with `sum s_i <= D - k - 1`, in ascending lexicographic
/// order. Requires `1 <= k <= D - 2`.
pub fn enumerate_curve_types(dim: u32, rank: u32, m: usize) -> Result<Vec<CurveType>, CurvesError> {
    if rank < 1 || rank + 2 > dim {
        return Err(CurvesError::InvalidInput(format!(
            "rank k = {rank} must satisfy 1 <= k <= D - 2 = {}",
            dim.saturating_sub(2)
        )));
    }
    if m == 0 {
        return Err(CurvesError::InvalidInput("need at least one factor".into()));
    }
    let budget = dim - rank - 1;
    Ok(tuples_with_sum_at_most(budget, m)
        .into_iter()
        .map(|t| CurveType::new(t.entries().to_vec()))
        .collect())
}

fn check_arity(inst: &VarietyInstance, prof: &CurveProfile) -> Result<(), CurvesError> {
    if prof.len() != inst.factor_count() {
        return Err(CurvesError::InvalidInput(format!(
            "profile has {} entries, expected {}",
            prof.len(),
            inst.factor_count()
        )));
    }
    Ok(())
}

/// Direct genus bound for a curve of the given profile and type:
/// `2g - 2 >= sum_i (a_i + d_i - s_i) e_i`.
pub fn genus_bound_basic(
    inst: &VarietyInstance,
    prof: &CurveProfile,
    ty: &CurveType,
) -> Result<GenusBound, CurvesError> {
    check_arity(inst, prof)?;
    let m = inst.factor_count();
    if ty.entries().len() != m {
        return Err(CurvesError::InvalidInput(format!(
            "type has {} entries, expected {m}",
            ty.entries().len()
        )));
    }
    let budget = i64::from(inst.dim()) - i64::from(inst.rank()) - 1;
    if i64::from(ty.total()) > budget {
        return Err(CurvesError::InvalidInput(format!(
            "type {:?} exceeds the budget sum s_i <= D - k - 1 = {budget}",
            ty.entries()
        )));
    }
    let mut lb: i128 = 0;
    for i in 0..m {
        let coeff = i128::from(inst.a(i)) + i128::from(inst.d(i)) - i128::from(ty.entries()[i]);
        lb += coeff * i128::from(prof.entry(i));
    }
    Ok(GenusBound::from_lower_bound(BigRational::from_integer(
        BigInt::from(lb),
    )))
}

/// The class of the two-dimensional scroll over a curve of profile `e`
/// concentrated towards factor `r`:
/// `(e_r + q) H^{N - 2 e_r} + sum_{i != r} e_i H^{N - e_r - e_i}`.
/// Defined on a full product with `N_r >= 2` and integer `q`.
pub fn scroll_class(
    ambient: &AmbientSpace,
    spec: &ScrollSpec,
    prof: &CurveProfile,
) -> Result<ChowClass, CurvesError> {
    if !ambient.is_full_product() {
        return Err(CurvesError::InvalidInput(
            "scroll classes are only computed on a full product of projective spaces".into(),
        ));
    }
    let m = ambient.factor_count();
    if prof.len() != m {
        return Err(CurvesError::InvalidInput(format!(
            "profile has {} entries, expected {m}",
            prof.len()
        )));
    }
    let r = spec.factor;
    if r >= m {
        return Err(CurvesError::InvalidInput(format!(
            "factor index {} out of range",
            r + 1
        )));
    }
    if !spec.q.is_integer() {
        return Err(CurvesError::NonIntegerScrollDegree(spec.q.clone()));
    }
    let bounds = ambient.bounds();
    if bounds[r] < 2 {
        return Err(CurvesError::InvalidInput(format!(
            "factor {} has dimension {} < 2, scroll exponent would go negative",
            r + 1,
            bounds[r]
        )));
    }
    let q_int = spec.q.to_integer();
    let mut terms: Vec<(MultiIndex, BigInt)> = Vec::new();

    let mut top = bounds.to_vec();
    top[r] -= 2;
    terms.push((
        MultiIndex::new(top),
        BigInt::from(prof.entry(r)) + q_int,
    ));

    for i in 0..m {
        if i == r || prof.entry(i) == 0 {
            continue;
        }
        if bounds[i] < 1 {
            return Err(CurvesError::InvalidInput(format!(
                "factor {} has dimension 0",
                i + 1
            )));
        }
        let mut cross = bounds.to_vec();
        cross[r] -= 1;
        cross[i] -= 1;
        terms.push((MultiIndex::new(cross), BigInt::from(prof.entry(i))));
    }
    Ok(ChowClass::from_terms(bounds.to_vec(), terms)?)
}

/// Lower bound on the degree of the quotient bundle `Q` cut out by the shift
/// witness `lambda` at factor `r`:
/// `(1/d_{lambda+e_r} - 1) e_r - sum_{i != r} (d_{lambda+e_i}/d_{lambda+e_r}) e_i`.
/// Requires `|lambda| = k - 1` and `d_{lambda+e_r} > 0`.
pub fn quotient_degree_bound(
    inst: &VarietyInstance,
    r: usize,
    lambda: &MultiIndex,
    prof: &CurveProfile,
) -> Result<BigRational, CurvesError> {
    check_arity(inst, prof)?;
    let m = inst.factor_count();
    if r >= m {
        return Err(CurvesError::InvalidInput(format!(
            "factor index {} out of range",
            r + 1
        )));
    }
    if lambda.len() != m || lambda.total() + 1 != inst.rank() {
        return Err(CurvesError::InvalidInput(format!(
            "lambda = {lambda} must have length {m} and |lambda| = k - 1 = {}",
            inst.rank() - 1
        )));
    }
    let den = inst.d_alpha_shifted(lambda, r);
    if !den.is_positive() {
        let exponent = lambda
            .add(&MultiIndex::unit(m, r))
            .expect("length checked above");
        return Err(CurvesError::NonPositiveDivisor {
            exponent,
            value: den,
        });
    }
    let e_r = BigRational::from_integer(BigInt::from(prof.entry(r)));
    let inv = BigRational::new(BigInt::one(), den.clone());
    let mut bound = (inv - BigRational::one()) * e_r;
    for i in 0..m {
        if i == r || prof.entry(i) == 0 {
            continue;
        }
        let num = inst.d_alpha_shifted(lambda, i);
        bound -= BigRational::new(num, den.clone())
            * BigRational::from_integer(BigInt::from(prof.entry(i)));
    }
    Ok(bound)
}

/// Evaluates the intersection `deg(((join_lambda S) . X - C) . H_r)` along two
/// routes and returns `(ring_value, closed_form)`:
///
/// * ring route: shift the scroll class by `lambda`, multiply by the class of
///   `X` and by `H_r` in the truncated ring, take the zero-cycle degree, and
///   subtract `e_r`;
/// * closed form: `d_{lambda+e_r} (e_r + q) + sum_{i != r} d_{lambda+e_i} e_i - e_r`.
///
/// The two agree whenever every intermediate exponent on the ring route stays
/// nonnegative; otherwise the result is reported as not comparable.
pub fn scroll_intersection_check(
    inst: &VarietyInstance,
    spec: &ScrollSpec,
    prof: &CurveProfile,
) -> Result<(BigInt, BigInt), CurvesError> {
    let ambient = inst.ambient();
    if !ambient.is_full_product() {
        return Err(CurvesError::InvalidInput(
            "the scroll intersection is only evaluated on a full product".into(),
        ));
    }
    check_arity(inst, prof)?;
    let m = inst.factor_count();
    let r = spec.factor;
    if spec.lambda.len() != m || spec.lambda.total() + 1 != inst.rank() {
        return Err(CurvesError::InvalidInput(format!(
            "lambda = {} must have length {m} and |lambda| = k - 1 = {}",
            spec.lambda,
            inst.rank() - 1
        )));
    }
    let scroll = scroll_class(ambient, spec, prof)?;
    let q_int = spec.q.to_integer();
    let bounds = ambient.bounds();

    // Comparability: every scroll term with nonzero coefficient must survive
    // the shift (no negative exponent drop). Truncation above the bounds can
    // never remove a contribution to the top coefficient, so only the drops
    // matter.
    let head_coeff = BigInt::from(prof.entry(r)) + &q_int;
    if !head_coeff.is_zero() {
        for (j, &bound) in bounds.iter().enumerate() {
            let used = spec.lambda.entry(j) + if j == r { 2 } else { 0 };
            if used > bound {
                return Err(CurvesError::NotComparable(format!(
                    "shift of the head scroll term goes negative in factor {}",
                    j + 1
                )));
            }
        }
    }
    for i in 0..m {
        if i == r || prof.entry(i) == 0 {
            continue;
        }
        for (j, &bound) in bounds.iter().enumerate() {
            let used = spec.lambda.entry(j) + u32::from(j == r) + u32::from(j == i);
            if used > bound {
                return Err(CurvesError::NotComparable(format!(
                    "shift of the factor-{} scroll term goes negative in factor {}",
                    i + 1,
                    j + 1
                )));
            }
        }
    }

    let shifted = scroll.join_shift(&spec.lambda)?;
    let x_class = inst.class_of_x();
    let h_r = ChowClass::monomial(bounds.to_vec(), MultiIndex::unit(m, r), BigInt::one())?;
    let product = shifted.mul(&x_class)?.mul(&h_r)?;
    let ring_value = product.zero_cycle_degree(true)? - BigInt::from(prof.entry(r));

    let mut closed = inst.d_alpha_shifted(&spec.lambda, r) * &head_coeff;
    for i in 0..m {
        if i == r || prof.entry(i) == 0 {
            continue;
        }
        closed += inst.d_alpha_shifted(&spec.lambda, i) * BigInt::from(prof.entry(i));
    }
    closed -= BigInt::from(prof.entry(r));

    Ok((ring_value, closed))
}

/// Scroll-route genus bound at the extremal type concentrated on factor `r`:
/// `2g - 2 >= sum_i (a_i + d_i) e_i - (D - k - 2) e_r + q_bound`.
/// Requires `k <= D - 2`, `|lambda| = k - 1` and `d_{lambda+e_r} > 0`.
pub fn genus_bound_boundary(
    inst: &VarietyInstance,
    r: usize,
    lambda: &MultiIndex,
    prof: &CurveProfile,
) -> Result<GenusBound, CurvesError> {
    if inst.rank() + 2 > inst.dim() {
        return Err(CurvesError::InvalidInput(format!(
            "rank k = {} must satisfy k <= D - 2 = {}",
            inst.rank(),
            inst.dim().saturating_sub(2)
        )));
    }
    let q_bound = quotient_degree_bound(inst, r, lambda, prof)?;
    let m = inst.factor_count();
    let mut lb: i128 = 0;
    for i in 0..m {
        lb += (i128::from(inst.a(i)) + i128::from(inst.d(i))) * i128::from(prof.entry(i));
    }
    lb -= (i128::from(inst.dim()) - i128::from(inst.rank()) - 2) * i128::from(prof.entry(r));
    let total = BigRational::from_integer(BigInt::from(lb)) + q_bound;
    Ok(GenusBound::from_lower_bound(total))
}

/// The best scroll-route bound at the extremal type of factor `r`, maximized
/// over admissible shifts (in-bounds `lambda + e_r` with positive divisor).
/// `None` when no shift qualifies.
pub fn best_scroll_bound(
    inst: &VarietyInstance,
    r: usize,
    prof: &CurveProfile,
) -> Result<Option<(GenusBound, MultiIndex)>, CurvesError> {
    check_arity(inst, prof)?;
    let m = inst.factor_count();
    let mut best: Option<(GenusBound, MultiIndex)> = None;
    for lambda in tuples_with_sum(inst.rank() - 1, m).into_iter().rev() {
        let shifted = match lambda.add(&MultiIndex::unit(m, r)) {
            Ok(a) => a,
            Err(_) => continue,
        };
        if !shifted.within(inst.ambient().bounds()) {
            continue;
        }
        if !inst.d_alpha_or_zero(&shifted).is_positive() {
            continue;
        }
        let bound = genus_bound_boundary(inst, r, &lambda, prof)?;
        let better = match &best {
            Some((b, _)) => bound.two_g_minus_2_lb > b.two_g_minus_2_lb,
            None => true,
        };
        if better {
            best = Some((bound, lambda));
        }
    }
    Ok(best)
}

/// Result of minimizing the genus bound over all admissible curve types.
#[derive(Debug, Clone)]
pub struct MinGenusBound {
    pub bound: GenusBound,
    pub winning_type: CurveType,
    /// Set when the scroll route beat the direct bound at the winning type.
    pub winning_factor: Option<usize>,
    pub winning_lambda: Option<MultiIndex>,
}

/// Minimum guaranteed `2g - 2` over every admissible curve type for curves of
/// the given profile. Non-extremal types use the direct bound; each extremal
/// type is scored with the better of the direct bound and the best scroll
/// bound (each is individually valid, so the maximum is sound).
///
/// Contract: the instance must already be certified hyperbolic by the strict
/// or boundary criterion.
pub fn min_genus_bound(
    inst: &VarietyInstance,
    prof: &CurveProfile,
) -> Result<MinGenusBound, CurvesError> {
    check_arity(inst, prof)?;
    if !check_strict(inst) && check_boundary(inst).is_none() {
        return Err(CurvesError::ContractViolation(
            "minimum genus bound requested for an instance that is not certified hyperbolic"
                .into(),
        ));
    }
    let m = inst.factor_count();
    let budget = inst.dim() - inst.rank() - 1;
    let mut best: Option<MinGenusBound> = None;
    for ty in enumerate_curve_types(inst.dim(), inst.rank(), m)? {
        let basic = genus_bound_basic(inst, prof, &ty)?;
        let candidate = match ty.extremal_factor(budget) {
            Some(r) => {
                let scroll = best_scroll_bound(inst, r, prof)?;
                match scroll {
                    Some((sb, lambda))
                        if sb.two_g_minus_2_lb > basic.two_g_minus_2_lb =>
                    {
                        MinGenusBound {
                            bound: sb,
                            winning_type: ty,
                            winning_factor: Some(r),
                            winning_lambda: Some(lambda),
                        }
                    }
                    _ => MinGenusBound {
                        bound: basic,
                        winning_type: ty,
                        winning_factor: None,
                        winning_lambda: None,
                    },
                }
            }
            None => MinGenusBound {
                bound: basic,
                winning_type: ty,
                winning_factor: None,
                winning_lambda: None,
            },
        };
        let smaller = match &best {
            Some(b) => candidate.bound.two_g_minus_2_lb < b.bound.two_g_minus_2_lb,
            None => true,
        };
        if smaller {
            best = Some(candidate);
        }
    }
    best.ok_or_else(|| CurvesError::InvalidInput("no admissible curve types".into()))
}
