//! Property tests for the ring arithmetic, the bundle model and the
//! criteria, checked against independent brute-force routes.

use std::collections::BTreeMap;

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::Signed;
use proptest::prelude::*;

use alghyp_core::chow::{tuples_with_sum_at_most, ChowClass, MultiIndex};
use alghyp_core::criteria::{
    check_boundary, check_lines, check_strict, classify, epsilon_certificate, VerdictKind,
};
use alghyp_core::curves::{
    enumerate_curve_types, genus_bound_basic, genus_bound_boundary, quotient_degree_bound,
    CurveProfile, CurveType,
};
use alghyp_core::model::{
    build_instance, ck_split, AmbientSpace, BundleInput, ChernData, DominationFlag,
    SplitBundleSpec,
};

/// Dense polynomial on a fixed exponent box, used as an independent oracle
/// for the sparse truncated product: multiply without truncation, then drop
/// everything outside the box.
#[derive(Clone, Debug)]
struct DensePoly {
    /// coefficient of exponent (i_1, ..., i_m) at flat index over the box
    /// (0..=shape_j per coordinate).
    shape: Vec<u32>,
    coeffs: Vec<i64>,
}

impl DensePoly {
    fn zeros(shape: Vec<u32>) -> Self {
        let len: usize = shape.iter().map(|&s| s as usize + 1).product();
        DensePoly {
            shape,
            coeffs: vec![0; len],
        }
    }

    fn flat(&self, exp: &[u32]) -> usize {
        let mut idx = 0usize;
        for (e, s) in exp.iter().zip(&self.shape) {
            idx = idx * (*s as usize + 1) + *e as usize;
        }
        idx
    }

    fn from_sparse(class: &ChowClass, shape: Vec<u32>) -> Self {
        let mut dense = DensePoly::zeros(shape);
        for (alpha, c) in class.terms() {
            let idx = dense.flat(alpha.entries());
            dense.coeffs[idx] = i64::try_from(c.clone()).unwrap();
        }
        dense
    }

    fn unflatten(&self, mut idx: usize) -> Vec<u32> {
        let mut exp = vec![0u32; self.shape.len()];
        for j in (0..self.shape.len()).rev() {
            let base = self.shape[j] as usize + 1;
            exp[j] = (idx % base) as u32;
            idx /= base;
        }
        exp
    }

    /// Full product on a doubled box, then truncation back to `bounds`.
    fn mul_then_truncate(&self, other: &DensePoly, bounds: &[u32]) -> ChowClass {
        let big_shape: Vec<u32> = self
            .shape
            .iter()
            .zip(&other.shape)
            .map(|(a, b)| a + b)
            .collect();
        let mut product = DensePoly::zeros(big_shape);
        for (ia, ca) in self.coeffs.iter().enumerate() {
            if *ca == 0 {
                continue;
            }
            let ea = self.unflatten(ia);
            for (ib, cb) in other.coeffs.iter().enumerate() {
                if *cb == 0 {
                    continue;
                }
                let eb = other.unflatten(ib);
                let sum: Vec<u32> = ea.iter().zip(&eb).map(|(x, y)| x + y).collect();
                let idx = product.flat(&sum);
                product.coeffs[idx] += ca * cb;
            }
        }
        let mut terms = Vec::new();
        for (idx, c) in product.coeffs.iter().enumerate() {
            if *c == 0 {
                continue;
            }
            let exp = product.unflatten(idx);
            if exp.iter().zip(bounds).all(|(e, n)| e <= n) {
                terms.push((MultiIndex::new(exp), BigInt::from(*c)));
            }
        }
        ChowClass::from_terms(bounds.to_vec(), terms).unwrap()
    }
}

fn arb_bounds() -> impl Strategy<Value = Vec<u32>> {
    prop::collection::vec(1u32..=4, 1..=3)
}

fn arb_class_for(bounds: Vec<u32>) -> impl Strategy<Value = ChowClass> {
    let exps: Vec<_> = bounds.iter().map(|&n| 0..=n).collect();
    let term = (exps, -9i64..=9).prop_map(|(e, c)| (MultiIndex::new(e), BigInt::from(c)));
    prop::collection::vec(term, 0..=8).prop_map(move |terms| {
        ChowClass::from_terms(bounds.clone(), terms).unwrap()
    })
}

fn arb_two_classes() -> impl Strategy<Value = (ChowClass, ChowClass)> {
    arb_bounds().prop_flat_map(|b| (arb_class_for(b.clone()), arb_class_for(b)))
}

fn arb_three_classes() -> impl Strategy<Value = (ChowClass, ChowClass, ChowClass)> {
    arb_bounds().prop_flat_map(|b| {
        (
            arb_class_for(b.clone()),
            arb_class_for(b.clone()),
            arb_class_for(b),
        )
    })
}

proptest! {
    #[test]
    fn ring_laws((a, b, c) in arb_three_classes()) {
        prop_assert_eq!(a.add(&b).unwrap(), b.add(&a).unwrap());
        prop_assert_eq!(a.mul(&b).unwrap(), b.mul(&a).unwrap());
        prop_assert_eq!(
            a.add(&b).unwrap().add(&c).unwrap(),
            a.add(&b.add(&c).unwrap()).unwrap()
        );
        prop_assert_eq!(
            a.mul(&b).unwrap().mul(&c).unwrap(),
            a.mul(&b.mul(&c).unwrap()).unwrap()
        );
        prop_assert_eq!(
            a.mul(&b.add(&c).unwrap()).unwrap(),
            a.mul(&b).unwrap().add(&a.mul(&c).unwrap()).unwrap()
        );
        let one = ChowClass::one(a.bounds().to_vec());
        prop_assert_eq!(one.mul(&a).unwrap(), a);
    }

    #[test]
    fn sparse_product_matches_dense_oracle((a, b) in arb_two_classes()) {
        let bounds = a.bounds().to_vec();
        let da = DensePoly::from_sparse(&a, bounds.clone());
        let db = DensePoly::from_sparse(&b, bounds.clone());
        prop_assert_eq!(a.mul(&b).unwrap(), da.mul_then_truncate(&db, &bounds));
    }

    #[test]
    fn join_shift_composes((a, _b) in arb_two_classes(),
                           seed in any::<u64>()) {
        let m = a.bounds().len();
        let mut s = seed;
        let mut next = || { s = s.wrapping_mul(6364136223846793005).wrapping_add(1); (s >> 33) as u32 % 5 };
        let lambda = MultiIndex::new((0..m).map(|_| next()).collect());
        let mu = MultiIndex::new((0..m).map(|_| next()).collect());
        let combined = lambda.add(&mu).unwrap();
        prop_assert_eq!(
            a.join_shift(&lambda).unwrap().join_shift(&mu).unwrap(),
            a.join_shift(&combined).unwrap()
        );
    }

    #[test]
    fn coefficient_is_additive((a, b) in arb_two_classes()) {
        let bounds = a.bounds().to_vec();
        let sum = a.add(&b).unwrap();
        for alpha in tuples_with_sum_at_most(bounds.iter().sum(), bounds.len()) {
            if !alpha.within(&bounds) {
                continue;
            }
            prop_assert_eq!(
                sum.coefficient(&alpha).unwrap(),
                a.coefficient(&alpha).unwrap() + b.coefficient(&alpha).unwrap()
            );
        }
    }

    #[test]
    fn display_parse_round_trip((a, _b) in arb_two_classes()) {
        let text = a.to_string();
        prop_assert_eq!(ChowClass::parse(&text, a.bounds()).unwrap(), a);
    }

    #[test]
    fn shift_arity_checked((a, _b) in arb_two_classes(), extra in 1usize..3) {
        let wrong = MultiIndex::zero(a.bounds().len() + extra);
        prop_assert!(a.join_shift(&wrong).is_err());
    }
}

/// Brute-force multivariate coefficient of `prod_j (sum_i d_{i,j} x_i)`:
/// expand by picking one factor index per summand.
fn brute_force_ck_coefficient(rows: &[Vec<i64>], alpha: &[u32]) -> i64 {
    fn rec(rows: &[Vec<i64>], counts: &mut Vec<u32>, alpha: &[u32], j: usize) -> i64 {
        if j == rows.len() {
            return if counts.iter().zip(alpha).all(|(c, a)| c == a) {
                1
            } else {
                0
            };
        }
        let mut total = 0;
        for (i, &d) in rows[j].iter().enumerate() {
            if d == 0 {
                continue;
            }
            counts[i] += 1;
            if counts[i] <= alpha[i] {
                total += d * rec(rows, counts, alpha, j + 1);
            }
            counts[i] -= 1;
        }
        total
    }
    let mut counts = vec![0u32; rows[0].len()];
    rec(rows, &mut counts, alpha, 0)
}

fn arb_split_rows() -> impl Strategy<Value = (Vec<u32>, Vec<Vec<i64>>)> {
    (1usize..=3, 1usize..=4).prop_flat_map(|(m, k)| {
        let bounds = prop::collection::vec(1u32..=4, m);
        let row = prop::collection::vec(0i64..=3, m)
            .prop_filter("nonzero row", |r| r.iter().any(|&d| d != 0));
        let rows = prop::collection::vec(row, k..=k);
        (bounds, rows)
    })
}

proptest! {
    #[test]
    fn ck_split_matches_brute_force((bounds, rows) in arb_split_rows()) {
        let amb = AmbientSpace::product(&bounds);
        let spec = SplitBundleSpec::new(rows.clone()).unwrap();
        let ck = ck_split(&spec, &amb).unwrap();
        for alpha in tuples_with_sum(rows.len() as u32, bounds.len()) {
            if !alpha.within(&bounds) {
                continue;
            }
            let expected = brute_force_ck_coefficient(&rows, alpha.entries());
            prop_assert_eq!(ck.coefficient(&alpha).unwrap(), BigInt::from(expected));
        }
    }

    #[test]
    fn c1_matches_linear_expansion((bounds, rows) in arb_split_rows()) {
        // For k = 1 the degree-1 coefficients of the expansion are exactly c1.
        let amb = AmbientSpace::product(&bounds);
        let spec = SplitBundleSpec::new(vec![rows[0].clone()]).unwrap();
        let ck = ck_split(&spec, &amb).unwrap();
        let c1 = spec.c1();
        for (i, &d) in c1.iter().enumerate() {
            let alpha = MultiIndex::unit(bounds.len(), i);
            prop_assert_eq!(ck.coefficient(&alpha).unwrap(), BigInt::from(d));
        }
    }
}

use alghyp_core::chow::tuples_with_sum;

#[test]
fn uniform_rows_have_multinomial_ratio_k() {
    // Rows delta_j * (1, ..., 1): the expansion is prod delta_j * (sum H_i)^k,
    // so d_{(k-1)e_r + e_i} / d_{(k-1)e_r + e_r} = k for i != r when the
    // exponents stay within bounds.
    for m in 2usize..=3 {
        for k in 2u32..=4 {
            for delta in 1i64..=3 {
                let bounds = vec![k + 1; m];
                let rows = vec![vec![delta; m]; k as usize];
                let amb = AmbientSpace::product(&bounds);
                let spec = SplitBundleSpec::new(rows).unwrap();
                let ck = ck_split(&spec, &amb).unwrap();
                for r in 0..m {
                    let mut base = vec![0u32; m];
                    base[r] = k - 1;
                    let lambda = MultiIndex::new(base);
                    let at_r = lambda.add(&MultiIndex::unit(m, r)).unwrap();
                    let den = ck.coefficient(&at_r).unwrap();
                    for i in 0..m {
                        if i == r {
                            continue;
                        }
                        let at_i = lambda.add(&MultiIndex::unit(m, i)).unwrap();
                        let num = ck.coefficient(&at_i).unwrap();
                        assert_eq!(num, den.clone() * BigInt::from(k));
                    }
                }
            }
        }
    }
}

#[test]
fn build_instance_is_deterministic() {
    let amb = AmbientSpace::product(&[2, 3]);
    let spec = SplitBundleSpec::new(vec![vec![2, 1], vec![1, 3]]).unwrap();
    let a = build_instance(
        &amb,
        BundleInput::Split {
            spec: spec.clone(),
            domination: DominationFlag::Auto,
        },
    )
    .unwrap();
    let b = build_instance(
        &amb,
        BundleInput::Split {
            spec,
            domination: DominationFlag::Auto,
        },
    )
    .unwrap();
    assert_eq!(a.chern().c1(), b.chern().c1());
    assert_eq!(a.chern().d_alpha(), b.chern().d_alpha());
    assert_eq!(a.kx_coefficients(), b.kx_coefficients());
}

/// N-splits (N_1 <= N_2) of each total dimension in the range.
fn product_shapes(dims: std::ops::RangeInclusive<u32>) -> Vec<Vec<u32>> {
    let mut shapes = Vec::new();
    for total in dims {
        shapes.push(vec![total]);
        for n1 in 1..=total / 2 {
            shapes.push(vec![n1, total - n1]);
        }
    }
    shapes
}

#[test]
fn line_and_hyperbolicity_criteria_are_mutually_exclusive() {
    // Instances over Chern data with every in-bounds top coefficient set to 1
    // so the boundary side is as permissive as possible.
    let mut checked = 0u64;
    for shape in product_shapes(3..=8) {
        let m = shape.len();
        let dim: u32 = shape.iter().sum();
        let amb = AmbientSpace::product(&shape);
        for k in 1..=dim.saturating_sub(2) {
            let d_alpha: BTreeMap<MultiIndex, BigInt> = tuples_with_sum(k, m)
                .into_iter()
                .filter(|a| a.within(&shape))
                .map(|a| (a, BigInt::from(1)))
                .collect();
            let cap = 2 * i64::from(dim);
            let mut d_vectors = vec![vec![]];
            for _ in 0..m {
                let mut next = Vec::new();
                for v in &d_vectors {
                    for d in 0..=cap {
                        let mut w: Vec<i64> = v.clone();
                        w.push(d);
                        next.push(w);
                    }
                }
                d_vectors = next;
            }
            for d in d_vectors {
                let chern = ChernData::new(
                    k,
                    d,
                    d_alpha.clone(),
                    DominationFlag::AssertedTrue,
                )
                .unwrap();
                let inst = build_instance(&amb, BundleInput::Chern(chern)).unwrap();
                let lines = check_lines(&inst).is_some();
                let hyper = check_strict(&inst) || check_boundary(&inst).is_some();
                assert!(
                    !(lines && hyper),
                    "both criteria fired: shape {shape:?}, k {k}"
                );
                // classify never reports the inconsistency error on these.
                assert!(classify(&inst).is_ok());
                checked += 1;
            }
        }
    }
    assert!(checked > 10_000);
}

#[test]
fn enumerate_types_count_is_binomial() {
    fn binomial(n: u64, k: u64) -> u64 {
        let mut num = 1u64;
        let mut den = 1u64;
        for i in 0..k {
            num *= n - i;
            den *= i + 1;
        }
        num / den
    }
    for m in 1usize..=4 {
        for dim in 3u32..=10 {
            for k in 1..=dim - 2 {
                let budget = u64::from(dim - k - 1);
                let types = enumerate_curve_types(dim, k, m).unwrap();
                assert_eq!(
                    types.len() as u64,
                    binomial(budget + m as u64, m as u64),
                    "m={m} dim={dim} k={k}"
                );
            }
        }
    }
}

proptest! {
    #[test]
    fn basic_bound_is_linear_in_profile(
        degrees in prop::collection::vec(1i64..=12, 1..=3),
        e in prop::collection::vec(0u32..=5, 1..=1),
        s in 0u32..=2,
    ) {
        let _ = e;
        let n = 6u32;
        let amb = AmbientSpace::projective(n);
        let spec = SplitBundleSpec::new(degrees.iter().map(|&d| vec![d]).collect()).unwrap();
        let inst = build_instance(&amb, BundleInput::Split { spec, domination: DominationFlag::Auto }).unwrap();
        if inst.rank() + 2 > inst.dim() { return Ok(()); }
        let budget = inst.dim() - inst.rank() - 1;
        prop_assume!(s <= budget);
        let ty = CurveType::new(vec![s]);
        for base in 1u32..=3 {
            let single = genus_bound_basic(&inst, &CurveProfile::new(vec![base]).unwrap(), &ty).unwrap();
            let double = genus_bound_basic(&inst, &CurveProfile::new(vec![2 * base]).unwrap(), &ty).unwrap();
            prop_assert_eq!(
                double.two_g_minus_2_lb,
                single.two_g_minus_2_lb * BigRational::from_integer(BigInt::from(2))
            );
        }
    }

    #[test]
    fn boundary_bound_two_forms_agree(
        d1 in 1i64..=10,
        d2 in 1i64..=10,
        e1 in 0u32..=4,
        e2 in 0u32..=4,
    ) {
        prop_assume!(e1 + e2 > 0);
        let amb = AmbientSpace::product(&[2, 2]);
        let spec = SplitBundleSpec::new(vec![vec![d1, d2]]).unwrap();
        let inst = build_instance(&amb, BundleInput::Split { spec, domination: DominationFlag::Auto }).unwrap();
        let prof = CurveProfile::new(vec![e1, e2]).unwrap();
        for r in 0..2usize {
            let lambda = MultiIndex::zero(2);
            let direct = match genus_bound_boundary(&inst, r, &lambda, &prof) {
                Ok(b) => b.two_g_minus_2_lb,
                Err(_) => continue,
            };
            // Alternative closed form:
            // (a_r + d_r - (D-k-1) + 1/den) e_r + sum_{i != r} (a_i + d_i - num_i/den) e_i.
            let den = inst.d_alpha_shifted(&lambda, r);
            let dk1 = i64::from(inst.dim()) - i64::from(inst.rank()) - 1;
            let mut alt = (BigRational::from_integer(BigInt::from(inst.a(r) + inst.d(r) - dk1))
                + BigRational::new(BigInt::from(1), den.clone()))
                * BigRational::from_integer(BigInt::from(prof.entry(r)));
            for i in 0..2usize {
                if i == r { continue; }
                let num = inst.d_alpha_shifted(&lambda, i);
                alt += (BigRational::from_integer(BigInt::from(inst.a(i) + inst.d(i)))
                    - BigRational::new(num, den.clone()))
                    * BigRational::from_integer(BigInt::from(prof.entry(i)));
            }
            prop_assert_eq!(direct, alt);
            // And the quotient bound itself stays consistent with the pieces.
            prop_assert!(quotient_degree_bound(&inst, r, &lambda, &prof).is_ok());
        }
    }

    #[test]
    fn strict_path_is_monotone_in_degrees(
        n in 5u32..=8,
        d in 1i64..=20,
        bump in 1i64..=6,
    ) {
        let amb = AmbientSpace::projective(n);
        let build = |deg: i64| {
            let spec = SplitBundleSpec::new(vec![vec![deg]]).unwrap();
            build_instance(&amb, BundleInput::Split { spec, domination: DominationFlag::Auto }).unwrap()
        };
        let low = build(d);
        if check_strict(&low) {
            let high = build(d + bump);
            prop_assert!(check_strict(&high));
            let v = classify(&high).unwrap();
            prop_assert_eq!(v.kind, VerdictKind::Hyperbolic);
        }
    }

    #[test]
    fn certificates_are_internally_consistent(
        n in 4u32..=8,
        degrees in prop::collection::vec(1i64..=16, 1..=3),
    ) {
        let k = degrees.len() as u32;
        prop_assume!(k + 2 <= n);
        let amb = AmbientSpace::projective(n);
        let spec = SplitBundleSpec::new(degrees.iter().map(|&d| vec![d]).collect()).unwrap();
        let inst = build_instance(&amb, BundleInput::Split { spec, domination: DominationFlag::Auto }).unwrap();
        let v = classify(&inst).unwrap();
        if let Some(cert) = &v.certificate {
            prop_assert!(cert.is_consistent());
            prop_assert!(cert.eps.is_positive());
            for (r, lambda) in &cert.witnesses {
                prop_assert_eq!(lambda.total() + 1, inst.rank());
                prop_assert!(inst.d_alpha_shifted(lambda, *r).is_positive());
            }
        }
        if v.kind == VerdictKind::NotHyperbolic {
            let i = v.witness_factor.unwrap();
            prop_assert!(inst.d(i) <= inst.line_threshold(i));
        }
    }

    #[test]
    fn strict_certificate_requires_passing_check(
        n in 4u32..=8,
        d in 1i64..=6,
    ) {
        let amb = AmbientSpace::projective(n);
        let spec = SplitBundleSpec::new(vec![vec![d]]).unwrap();
        let inst = build_instance(&amb, BundleInput::Split { spec, domination: DominationFlag::Auto }).unwrap();
        if !check_strict(&inst) {
            prop_assert!(epsilon_certificate(&inst, None).is_err());
        }
    }
}
