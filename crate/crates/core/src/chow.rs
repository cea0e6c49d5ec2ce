//! Exact sparse arithmetic in the truncated multigraded ring
//! `Z[H_1, ..., H_m] / (H_1^{N_1+1}, ..., H_m^{N_m+1})`.
//!
//! This is the Chow ring of a product of projective spaces
//! `P^{N_1} x ... x P^{N_m}`: a class is an integer combination of monomials
//! `H^a = H_1^{a_1} * ... * H_m^{a_m}` with `a_i <= N_i`, and any product
//! monomial exceeding a bound in some coordinate is zero. Coefficients are
//! arbitrary-precision integers; no floating point is used anywhere.

use std::collections::BTreeMap;
use std::fmt;

use num_bigint::BigInt;
use num_traits::Zero;
use thiserror::Error;

#[derive(Debug, Error, PartialEq, Eq)]
pub enum ChowError {
    #[error("bounds mismatch: {0:?} vs {1:?}")]
    BoundsMismatch(Vec<u32>, Vec<u32>),
    #[error("exponent {exponent:?} out of bounds {bounds:?}")]
    OutOfBounds { exponent: Vec<u32>, bounds: Vec<u32> },
    #[error("arity mismatch: expected {expected} entries, got {got}")]
    ArityMismatch { expected: usize, got: usize },
    #[error("zero-cycle degree is only defined on a full product of projective spaces")]
    NotFullProduct,
    #[error("parse error: {0}")]
    Parse(String),
}

/// Exponent tuple `a` indexing the monomial `H^a = H_1^{a_1} ... H_m^{a_m}`.
///
/// Ordering is lexicographic on the entries, which is the term order used for
/// serialization and iteration throughout.
#[derive(Debug, Clone, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct MultiIndex(Vec<u32>);

impl MultiIndex {
    pub fn new(entries: Vec<u32>) -> Self {
        MultiIndex(entries)
    }

    /// The all-zero tuple of length `m` (the constant monomial 1).
    pub fn zero(m: usize) -> Self {
        MultiIndex(vec![0; m])
    }

    /// The standard basis vector `e_i` (0-based `i`).
    pub fn unit(m: usize, i: usize) -> Self {
        let mut v = vec![0; m];
        v[i] = 1;
        MultiIndex(v)
    }

    pub fn len(&self) -> usize {
        self.0.len()
    }

    pub fn is_empty(&self) -> bool {
        self.0.is_empty()
    }

    pub fn entries(&self) -> &[u32] {
        &self.0
    }

    pub fn entry(&self, i: usize) -> u32 {
        self.0[i]
    }

    /// `|a| = a_1 + ... + a_m`.
    pub fn total(&self) -> u32 {
        self.0.iter().sum()
    }

    pub fn add(&self, other: &MultiIndex) -> Result<MultiIndex, ChowError> {
        self.check_arity(other)?;
        Ok(MultiIndex(
            self.0.iter().zip(&other.0).map(|(a, b)| a + b).collect(),
        ))
    }

    /// Coordinatewise difference, or `None` if any entry would go negative.
    pub fn checked_sub(&self, other: &MultiIndex) -> Result<Option<MultiIndex>, ChowError> {
        self.check_arity(other)?;
        let mut out = Vec::with_capacity(self.0.len());
        for (a, b) in self.0.iter().zip(&other.0) {
            match a.checked_sub(*b) {
                Some(c) => out.push(c),
                None => return Ok(None),
            }
        }
        Ok(Some(MultiIndex(out)))
    }

    pub fn within(&self, bounds: &[u32]) -> bool {
        self.0.len() == bounds.len() && self.0.iter().zip(bounds).all(|(a, n)| a <= n)
    }

    fn check_arity(&self, other: &MultiIndex) -> Result<(), ChowError> {
        if self.0.len() != other.0.len() {
            return Err(ChowError::ArityMismatch {
                expected: self.0.len(),
                got: other.0.len(),
            });
        }
        Ok(())
    }
}

impl fmt::Display for MultiIndex {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "(")?;
        for (i, e) in self.0.iter().enumerate() {
            if i > 0 {
                write!(f, ", ")?;
            }
            write!(f, "{e}")?;
        }
        write!(f, ")")
    }
}

/// All exponent tuples of length `m` with entry sum exactly `total`,
/// in ascending lexicographic order.
pub fn tuples_with_sum(total: u32, m: usize) -> Vec<MultiIndex> {
    let mut out = Vec::new();
    let mut prefix = Vec::with_capacity(m);
    fill_exact(total, m, &mut prefix, &mut out);
    out
}

fn fill_exact(total: u32, slots: usize, prefix: &mut Vec<u32>, out: &mut Vec<MultiIndex>) {
    if slots == 1 {
        prefix.push(total);
        out.push(MultiIndex(prefix.clone()));
        prefix.pop();
        return;
    }
    for first in 0..=total {
        prefix.push(first);
        fill_exact(total - first, slots - 1, prefix, out);
        prefix.pop();
    }
}

/// All exponent tuples of length `m` with entry sum at most `budget`,
/// in ascending lexicographic order.
pub fn tuples_with_sum_at_most(budget: u32, m: usize) -> Vec<MultiIndex> {
    let mut out = Vec::new();
    let mut prefix = Vec::with_capacity(m);
    fill_at_most(budget, m, &mut prefix, &mut out);
    out
}

fn fill_at_most(budget: u32, slots: usize, prefix: &mut Vec<u32>, out: &mut Vec<MultiIndex>) {
    if slots == 1 {
        for last in 0..=budget {
            prefix.push(last);
            out.push(MultiIndex(prefix.clone()));
            prefix.pop();
        }
        return;
    }
    for first in 0..=budget {
        prefix.push(first);
        fill_at_most(budget - first, slots - 1, prefix, out);
        prefix.pop();
    }
}

/// A class in the truncated ring: a canonical sparse map from exponents to
/// nonzero integer coefficients, together with the exponent bounds `N_i`.
///
/// Two classes are equal iff their bounds and term maps are equal; zero
/// coefficients are never stored.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct ChowClass {
    bounds: Vec<u32>,
    terms: BTreeMap<MultiIndex, BigInt>,
}

impl ChowClass {
    pub fn zero(bounds: Vec<u32>) -> Self {
        ChowClass {
            bounds,
            terms: BTreeMap::new(),
        }
    }

    /// The multiplicative identity (the constant monomial with coefficient 1).
    pub fn one(bounds: Vec<u32>) -> Self {
        let m = bounds.len();
        let mut terms = BTreeMap::new();
        terms.insert(MultiIndex::zero(m), BigInt::from(1));
        ChowClass { bounds, terms }
    }

    pub fn monomial(
        bounds: Vec<u32>,
        exponent: MultiIndex,
        coefficient: BigInt,
    ) -> Result<Self, ChowError> {
        Self::from_terms(bounds, [(exponent, coefficient)])
    }

    /// Builds a class from (exponent, coefficient) pairs, summing duplicates
    /// and dropping zero coefficients. Errors if an exponent is out of bounds.
    pub fn from_terms(
        bounds: Vec<u32>,
        terms: impl IntoIterator<Item = (MultiIndex, BigInt)>,
    ) -> Result<Self, ChowError> {
        let mut map: BTreeMap<MultiIndex, BigInt> = BTreeMap::new();
        for (alpha, c) in terms {
            if !alpha.within(&bounds) {
                return Err(ChowError::OutOfBounds {
                    exponent: alpha.0,
                    bounds,
                });
            }
            *map.entry(alpha).or_insert_with(BigInt::zero) += c;
        }
        map.retain(|_, c| !c.is_zero());
        Ok(ChowClass { bounds, terms: map })
    }

    pub fn bounds(&self) -> &[u32] {
        &self.bounds
    }

    pub fn factor_count(&self) -> usize {
        self.bounds.len()
    }

    pub fn is_zero(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn num_terms(&self) -> usize {
        self.terms.len()
    }

    /// Terms in ascending lexicographic exponent order.
    pub fn terms(&self) -> impl Iterator<Item = (&MultiIndex, &BigInt)> {
        self.terms.iter()
    }

    fn check_bounds(&self, other: &ChowClass) -> Result<(), ChowError> {
        if self.bounds != other.bounds {
            return Err(ChowError::BoundsMismatch(
                self.bounds.clone(),
                other.bounds.clone(),
            ));
        }
        Ok(())
    }

    /// Coefficientwise sum in canonical form.
    pub fn add(&self, other: &ChowClass) -> Result<ChowClass, ChowError> {
        self.check_bounds(other)?;
        let mut terms = self.terms.clone();
        for (alpha, c) in &other.terms {
            *terms.entry(alpha.clone()).or_insert_with(BigInt::zero) += c;
        }
        terms.retain(|_, c| !c.is_zero());
        Ok(ChowClass {
            bounds: self.bounds.clone(),
            terms,
        })
    }

    pub fn neg(&self) -> ChowClass {
        ChowClass {
            bounds: self.bounds.clone(),
            terms: self.terms.iter().map(|(a, c)| (a.clone(), -c)).collect(),
        }
    }

    pub fn sub(&self, other: &ChowClass) -> Result<ChowClass, ChowError> {
        self.add(&other.neg())
    }

    pub fn scale(&self, factor: &BigInt) -> ChowClass {
        if factor.is_zero() {
            return ChowClass::zero(self.bounds.clone());
        }
        ChowClass {
            bounds: self.bounds.clone(),
            terms: self
                .terms
                .iter()
                .map(|(a, c)| (a.clone(), c * factor))
                .collect(),
        }
    }

    /// Distributive product with eager truncation: any product monomial that
    /// exceeds a bound in some coordinate is discarded.
    pub fn mul(&self, other: &ChowClass) -> Result<ChowClass, ChowError> {
        self.check_bounds(other)?;
        let mut terms: BTreeMap<MultiIndex, BigInt> = BTreeMap::new();
        for (alpha, c) in &self.terms {
            for (beta, d) in &other.terms {
                let gamma = alpha.add(beta)?;
                if gamma.within(&self.bounds) {
                    *terms.entry(gamma).or_insert_with(BigInt::zero) += c * d;
                }
            }
        }
        terms.retain(|_, c| !c.is_zero());
        Ok(ChowClass {
            bounds: self.bounds.clone(),
            terms,
        })
    }

    /// The stored coefficient of `H^alpha`, or 0 if the term is absent.
    /// Errors if `alpha` is out of bounds.
    pub fn coefficient(&self, alpha: &MultiIndex) -> Result<BigInt, ChowError> {
        if !alpha.within(&self.bounds) {
            return Err(ChowError::OutOfBounds {
                exponent: alpha.0.clone(),
                bounds: self.bounds.clone(),
            });
        }
        Ok(self.terms.get(alpha).cloned().unwrap_or_else(BigInt::zero))
    }

    /// Shifts every term `b_a H^a` to `b_a H^{a - lambda}`, dropping terms
    /// where any resulting exponent would be negative. This is the class-level
    /// effect of the lambda-join (cone) construction; the single cone in
    /// factor `i` is the special case `lambda = e_i`.
    pub fn join_shift(&self, lambda: &MultiIndex) -> Result<ChowClass, ChowError> {
        if lambda.len() != self.bounds.len() {
            return Err(ChowError::ArityMismatch {
                expected: self.bounds.len(),
                got: lambda.len(),
            });
        }
        let mut terms = BTreeMap::new();
        for (alpha, c) in &self.terms {
            if let Some(shifted) = alpha.checked_sub(lambda)? {
                terms.insert(shifted, c.clone());
            }
        }
        Ok(ChowClass {
            bounds: self.bounds.clone(),
            terms,
        })
    }

    /// The degree of a zero-cycle class: the coefficient of
    /// `H^N = H_1^{N_1} ... H_m^{N_m}`. Only meaningful when the ambient is
    /// the full product, so callers must pass that flag.
    pub fn zero_cycle_degree(&self, full_product: bool) -> Result<BigInt, ChowError> {
        if !full_product {
            return Err(ChowError::NotFullProduct);
        }
        let top = MultiIndex(self.bounds.clone());
        Ok(self.terms.get(&top).cloned().unwrap_or_else(BigInt::zero))
    }

    /// Parses the canonical text form produced by `Display`, relative to the
    /// given bounds. Strict: terms must be within bounds, nonzero, and not
    /// repeated.
    pub fn parse(input: &str, bounds: &[u32]) -> Result<ChowClass, ChowError> {
        let s = input.trim();
        if s == "0" {
            return Ok(ChowClass::zero(bounds.to_vec()));
        }
        let mut terms: BTreeMap<MultiIndex, BigInt> = BTreeMap::new();
        for term in s.split(" + ") {
            let mut parts = term.split('*');
            let coeff_str = parts
                .next()
                .ok_or_else(|| ChowError::Parse(format!("empty term in `{s}`")))?;
            let coefficient: BigInt = coeff_str
                .trim()
                .parse()
                .map_err(|_| ChowError::Parse(format!("invalid coefficient `{coeff_str}`")))?;
            if coefficient.is_zero() {
                return Err(ChowError::Parse(format!("zero coefficient in `{term}`")));
            }
            let mut exponent = vec![0u32; bounds.len()];
            let mut seen = vec![false; bounds.len()];
            for factor in parts {
                let rest = factor.strip_prefix('H').ok_or_else(|| {
                    ChowError::Parse(format!("expected factor `H<i>`, got `{factor}`"))
                })?;
                let (idx_str, exp) = match rest.split_once('^') {
                    Some((i, e)) => {
                        let exp: u32 = e.parse().map_err(|_| {
                            ChowError::Parse(format!("invalid exponent in `{factor}`"))
                        })?;
                        (i, exp)
                    }
                    None => (rest, 1),
                };
                let idx: usize = idx_str
                    .parse()
                    .map_err(|_| ChowError::Parse(format!("invalid factor index in `{factor}`")))?;
                if idx == 0 || idx > bounds.len() {
                    return Err(ChowError::Parse(format!(
                        "factor index {idx} out of range 1..={}",
                        bounds.len()
                    )));
                }
                if seen[idx - 1] {
                    return Err(ChowError::Parse(format!(
                        "duplicate factor H{idx} in `{term}`"
                    )));
                }
                seen[idx - 1] = true;
                exponent[idx - 1] = exp;
            }
            let alpha = MultiIndex(exponent);
            if !alpha.within(bounds) {
                return Err(ChowError::OutOfBounds {
                    exponent: alpha.0,
                    bounds: bounds.to_vec(),
                });
            }
            if terms.insert(alpha, coefficient).is_some() {
                return Err(ChowError::Parse(format!("repeated exponent in `{s}`")));
            }
        }
        Ok(ChowClass {
            bounds: bounds.to_vec(),
            terms,
        })
    }
}

impl fmt::Display for ChowClass {
    /// Canonical form: terms sorted lexicographically by exponent, each
    /// rendered as `c*H1^a1*...*Hm^am` (zero exponents omitted, `^1` omitted),
    /// joined by ` + `; the zero class renders as `0`.
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.terms.is_empty() {
            return write!(f, "0");
        }
        for (pos, (alpha, c)) in self.terms.iter().enumerate() {
            if pos > 0 {
                write!(f, " + ")?;
            }
            write!(f, "{c}")?;
            for (i, e) in alpha.0.iter().enumerate() {
                if *e > 0 {
                    write!(f, "*H{}", i + 1)?;
                    if *e > 1 {
                        write!(f, "^{e}")?;
                    }
                }
            }
        }
        Ok(())
    }
}
