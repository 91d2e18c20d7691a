//! Counting critical points in the Chow ring of a product of projective
//! spaces.
//!
//! For blocks of sizes `n_1..n_k` the ring is
//! `A = ℤ[Y_1..Y_k] / (Y_1^{n_1+1}, .., Y_k^{n_k+1})`, which is finite
//! dimensional, so a [`TruncatedSeries`] is exact. With multi-degrees
//! `d_0` (objective) and `d_1..d_m` (constraints), the class of the locus
//! where the objective gradient depends on the constraint gradients is the
//! degree `n - m` part of
//!
//! ```text
//! Σ = ∏_i (1 - Y_i)^{n_i} / ∏_{j=0..m} (1 - Σ_i d_{j,i} Y_i)
//! ```
//!
//! and the generic number of complex critical points is the coefficient of
//! `Y_1^{n_1} ⋯ Y_k^{n_k}` in `Σ_{n-m} · ∏_{j=1..m} (Σ_i d_{j,i} Y_i)`.
//!
//! The constraint factor is the positive product of first Chern classes.
//! Writing it as `∏ (1 - Σ_i d_{j,i} Y_i)` instead, as one may when reading
//! the count off the full product, only flips the sign by `(-1)^m`;
//! [`DegreeReport::signed`] keeps that value.

use std::collections::btree_map::Entry;
use std::collections::BTreeMap;
use std::fmt;

use num_bigint::{BigInt, BigUint, Sign};
use num_traits::{One, Signed, Zero};
use serde::Serialize;
use thiserror::Error;

use crate::polyring::{BlockStructure, MultiDegree};

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum ChowError {
    #[error("series live over different block structures")]
    BlockMismatch,
    #[error("constant term {0} is not a unit in ZZ")]
    NotInvertible(BigInt),
    #[error("multi-degree {degree} of polynomial {index} has an entry < 1")]
    NonPositiveDegree { index: usize, degree: MultiDegree },
    #[error("multi-degree {degree} has {got} entries, expected {expected}")]
    WrongLength {
        degree: MultiDegree,
        expected: usize,
        got: usize,
    },
    #[error("{m} constraints exceed the {n} variables")]
    TooManyConstraints { m: usize, n: usize },
    #[error("degree list must start with the objective's multi-degree")]
    MissingObjective,
    #[error("count came out negative: {0}")]
    NegativeCount(BigInt),
}

/// Element of `ℤ[Y_1..Y_k] / (Y_i^{n_i+1})`; zero coefficients are never
/// stored and no exponent exceeds its bound.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct TruncatedSeries {
    bounds: Vec<u32>,
    coeffs: BTreeMap<Vec<u32>, BigInt>,
}

impl TruncatedSeries {
    pub fn zero(blocks: &BlockStructure) -> Self {
        TruncatedSeries {
            bounds: blocks.sizes().iter().map(|&s| s as u32).collect(),
            coeffs: BTreeMap::new(),
        }
    }

    pub fn constant(blocks: &BlockStructure, c: impl Into<BigInt>) -> Self {
        let mut s = Self::zero(blocks);
        s.insert(vec![0; blocks.k()], c.into());
        s
    }

    pub fn one(blocks: &BlockStructure) -> Self {
        Self::constant(blocks, 1)
    }

    /// `Σ_i c_i Y_i`.
    pub fn linear_form(blocks: &BlockStructure, coeffs: &[i64]) -> Self {
        assert_eq!(coeffs.len(), blocks.k(), "one coefficient per block");
        let mut s = Self::zero(blocks);
        for (i, &c) in coeffs.iter().enumerate() {
            let mut e = vec![0; blocks.k()];
            e[i] = 1;
            s.insert(e, BigInt::from(c));
        }
        s
    }

    /// First Chern class `Σ_i d_i Y_i` of the line bundle of multi-degree `d`.
    pub fn chern_class(blocks: &BlockStructure, d: &MultiDegree) -> Self {
        let c: Vec<i64> = d.entries().iter().map(|&x| x as i64).collect();
        Self::linear_form(blocks, &c)
    }

    /// Builds a series from `(exponents, coefficient)` pairs; terms beyond the
    /// truncation bounds are dropped.
    pub fn from_terms<I>(blocks: &BlockStructure, terms: I) -> Self
    where
        I: IntoIterator<Item = (Vec<u32>, BigInt)>,
    {
        let mut s = Self::zero(blocks);
        for (e, c) in terms {
            assert_eq!(e.len(), blocks.k(), "exponent length");
            s.insert(e, c);
        }
        s
    }

    fn insert(&mut self, exps: Vec<u32>, c: BigInt) {
        if exps.iter().zip(&self.bounds).any(|(e, b)| e > b) || c.is_zero() {
            return;
        }
        match self.coeffs.entry(exps) {
            Entry::Vacant(v) => {
                v.insert(c);
            }
            Entry::Occupied(mut o) => {
                *o.get_mut() += c;
                if o.get().is_zero() {
                    o.remove();
                }
            }
        }
    }

    /// Truncation bounds `n_1..n_k`.
    pub fn bounds(&self) -> &[u32] {
        &self.bounds
    }

    pub fn is_zero(&self) -> bool {
        self.coeffs.is_empty()
    }

    pub fn terms(&self) -> impl Iterator<Item = (&[u32], &BigInt)> {
        self.coeffs.iter().map(|(e, c)| (e.as_slice(), c))
    }

    pub fn coefficient(&self, exps: &[u32]) -> BigInt {
        self.coeffs.get(exps).cloned().unwrap_or_else(BigInt::zero)
    }

    pub fn constant_term(&self) -> BigInt {
        self.coefficient(&vec![0; self.bounds.len()])
    }

    /// Coefficient of the top class `Y_1^{n_1} ⋯ Y_k^{n_k}`.
    pub fn top_coefficient(&self) -> BigInt {
        self.coefficient(&self.bounds)
    }

    fn check_same(&self, other: &Self) -> Result<(), ChowError> {
        if self.bounds == other.bounds {
            Ok(())
        } else {
            Err(ChowError::BlockMismatch)
        }
    }

    pub fn add(&self, other: &Self) -> Result<Self, ChowError> {
        self.check_same(other)?;
        let mut out = self.clone();
        for (e, c) in &other.coeffs {
            out.insert(e.clone(), c.clone());
        }
        Ok(out)
    }

    pub fn neg(&self) -> Self {
        TruncatedSeries {
            bounds: self.bounds.clone(),
            coeffs: self.coeffs.iter().map(|(e, c)| (e.clone(), -c)).collect(),
        }
    }

    pub fn sub(&self, other: &Self) -> Result<Self, ChowError> {
        self.add(&other.neg())
    }

    pub fn scale(&self, c: &BigInt) -> Self {
        if c.is_zero() {
            return TruncatedSeries {
                bounds: self.bounds.clone(),
                coeffs: BTreeMap::new(),
            };
        }
        TruncatedSeries {
            bounds: self.bounds.clone(),
            coeffs: self.coeffs.iter().map(|(e, v)| (e.clone(), v * c)).collect(),
        }
    }

    /// Product in the truncated ring.
    pub fn mul(&self, other: &Self) -> Result<Self, ChowError> {
        self.check_same(other)?;
        let mut acc: BTreeMap<Vec<u32>, BigInt> = BTreeMap::new();
        for (ea, ca) in &self.coeffs {
            for (eb, cb) in &other.coeffs {
                let e: Vec<u32> = ea.iter().zip(eb).map(|(a, b)| a + b).collect();
                if e.iter().zip(&self.bounds).any(|(x, b)| x > b) {
                    continue;
                }
                *acc.entry(e).or_insert_with(BigInt::zero) += ca * cb;
            }
        }
        acc.retain(|_, c| !c.is_zero());
        Ok(TruncatedSeries {
            bounds: self.bounds.clone(),
            coeffs: acc,
        })
    }

    pub fn pow(&self, e: u32) -> Self {
        let mut acc = TruncatedSeries {
            bounds: self.bounds.clone(),
            coeffs: BTreeMap::from([(vec![0; self.bounds.len()], BigInt::one())]),
        };
        for _ in 0..e {
            acc = acc.mul(self).expect("same bounds");
        }
        acc
    }

    /// Multiplicative inverse for a constant term of ±1, via the finite
    /// geometric series `a₀ Σ_t (1 - a₀ a)^t`.
    pub fn invert(&self) -> Result<Self, ChowError> {
        let a0 = self.constant_term();
        if a0.abs() != BigInt::one() {
            return Err(ChowError::NotInvertible(a0));
        }
        let one = TruncatedSeries {
            bounds: self.bounds.clone(),
            coeffs: BTreeMap::from([(vec![0; self.bounds.len()], BigInt::one())]),
        };
        // u has no constant term, so u^(N+1) = 0 with N = Σ n_i
        let u = one.sub(&self.scale(&a0))?;
        let top: u32 = self.bounds.iter().sum();
        let mut sum = one.clone();
        let mut power = one;
        for _ in 0..top {
            power = power.mul(&u)?;
            if power.is_zero() {
                break;
            }
            sum = sum.add(&power)?;
        }
        Ok(sum.scale(&a0))
    }

    /// Homogeneous component of total degree `d`.
    pub fn graded_part(&self, d: u32) -> Self {
        TruncatedSeries {
            bounds: self.bounds.clone(),
            coeffs: self
                .coeffs
                .iter()
                .filter(|(e, _)| e.iter().sum::<u32>() == d)
                .map(|(e, c)| (e.clone(), c.clone()))
                .collect(),
        }
    }
}

/// Terms ordered by decreasing total degree, then lexicographically
/// decreasing exponents, written with `Y_1..Y_k`.
impl fmt::Display for TruncatedSeries {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.coeffs.is_empty() {
            return write!(f, "0");
        }
        let mut terms: Vec<_> = self.coeffs.iter().collect();
        terms.sort_by(|(a, _), (b, _)| {
            let (da, db) = (a.iter().sum::<u32>(), b.iter().sum::<u32>());
            db.cmp(&da).then_with(|| b.cmp(a))
        });
        for (idx, (e, c)) in terms.into_iter().enumerate() {
            let neg = c.sign() == Sign::Minus;
            match (idx, neg) {
                (0, true) => write!(f, "-")?,
                (0, false) => {}
                (_, true) => write!(f, " - ")?,
                (_, false) => write!(f, " + ")?,
            }
            let mut factors = Vec::new();
            let abs = c.abs();
            let constant = e.iter().all(|&x| x == 0);
            if !abs.is_one() || constant {
                factors.push(abs.to_string());
            }
            for (i, &x) in e.iter().enumerate() {
                match x {
                    0 => {}
                    1 => factors.push(format!("Y_{}", i + 1)),
                    _ => factors.push(format!("Y_{}^{}", i + 1, x)),
                }
            }
            write!(f, "{}", factors.join("*"))?;
        }
        Ok(())
    }
}

fn check_degrees(blocks: &BlockStructure, degrees: &[MultiDegree]) -> Result<(), ChowError> {
    for (index, d) in degrees.iter().enumerate() {
        if d.k() != blocks.k() {
            return Err(ChowError::WrongLength {
                degree: d.clone(),
                expected: blocks.k(),
                got: d.k(),
            });
        }
        if !d.is_positive() {
            return Err(ChowError::NonPositiveDegree {
                index,
                degree: d.clone(),
            });
        }
    }
    Ok(())
}

/// Full truncated expansion of `Σ`; `degrees[0]` is the objective.
pub fn sigma_series(
    blocks: &BlockStructure,
    degrees: &[MultiDegree],
) -> Result<TruncatedSeries, ChowError> {
    if degrees.is_empty() {
        return Err(ChowError::MissingObjective);
    }
    check_degrees(blocks, degrees)?;
    let one = TruncatedSeries::one(blocks);
    let mut numerator = one.clone();
    for (i, &size) in blocks.sizes().iter().enumerate() {
        let mut e = vec![0i64; blocks.k()];
        e[i] = 1;
        let factor = one.sub(&TruncatedSeries::linear_form(blocks, &e))?;
        numerator = numerator.mul(&factor.pow(size as u32))?;
    }
    let mut denominator = one.clone();
    for d in degrees {
        denominator = denominator.mul(&one.sub(&TruncatedSeries::chern_class(blocks, d))?)?;
    }
    numerator.mul(&denominator.invert()?)
}

/// `∏_j c₁(O(d_j))` over the constraint multi-degrees (empty product is 1).
pub fn class_of_v(
    blocks: &BlockStructure,
    constraint_degrees: &[MultiDegree],
) -> Result<TruncatedSeries, ChowError> {
    let mut acc = TruncatedSeries::one(blocks);
    for d in constraint_degrees {
        if d.k() != blocks.k() {
            return Err(ChowError::WrongLength {
                degree: d.clone(),
                expected: blocks.k(),
                got: d.k(),
            });
        }
        acc = acc.mul(&TruncatedSeries::chern_class(blocks, d))?;
    }
    Ok(acc)
}

/// Intermediate quantities of the count.
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct DegreeReport {
    /// Number of generic complex critical points.
    #[serde(serialize_with = "crate::serialize_display")]
    pub count: BigUint,
    /// `(-1)^m · count`, the top coefficient when the constraint classes are
    /// entered with the `(1 - Σ d_i Y_i)` factors.
    #[serde(serialize_with = "crate::serialize_display")]
    pub signed: BigInt,
    /// Degree `n - m` part of `Σ`, rendered.
    pub sigma_part: String,
    /// Class of the constraint variety, rendered.
    pub class_of_v: String,
}

pub fn degree_report(
    blocks: &BlockStructure,
    degrees: &[MultiDegree],
) -> Result<DegreeReport, ChowError> {
    if degrees.is_empty() {
        return Err(ChowError::MissingObjective);
    }
    let n = blocks.n();
    let m = degrees.len() - 1;
    if m > n {
        return Err(ChowError::TooManyConstraints { m, n });
    }
    let sigma = sigma_series(blocks, degrees)?;
    let part = sigma.graded_part((n - m) as u32);
    let class = class_of_v(blocks, &degrees[1..])?;
    let top = part.mul(&class)?.top_coefficient();
    let count = top
        .to_biguint()
        .ok_or_else(|| ChowError::NegativeCount(top.clone()))?;
    let signed = if m % 2 == 0 { top.clone() } else { -top };
    Ok(DegreeReport {
        count,
        signed,
        sigma_part: part.to_string(),
        class_of_v: class.to_string(),
    })
}

/// Generic number of complex critical points of an objective of multi-degree
/// `degrees[0]` subject to constraints of multi-degrees `degrees[1..]`.
pub fn algebraic_degree(
    blocks: &BlockStructure,
    degrees: &[MultiDegree],
) -> Result<BigUint, ChowError> {
    degree_report(blocks, degrees).map(|r| r.count)
}

#[cfg(test)]
mod tests {
    use super::*;
    use proptest::prelude::*;

    fn blocks(s: &[usize]) -> BlockStructure {
        BlockStructure::new(s.to_vec()).unwrap()
    }

    fn md(v: &[u32]) -> MultiDegree {
        MultiDegree::new(v.to_vec())
    }

    fn series(b: &BlockStructure, terms: &[(&[u32], i64)]) -> TruncatedSeries {
        TruncatedSeries::from_terms(b, terms.iter().map(|(e, c)| (e.to_vec(), BigInt::from(*c))))
    }

    fn deg(b: &[usize], d: &[&[u32]]) -> u64 {
        let ds: Vec<_> = d.iter().map(|x| md(x)).collect();
        algebraic_degree(&blocks(b), &ds).unwrap().try_into().unwrap()
    }

    #[test]
    fn mul_examples() {
        let b = blocks(&[1]);
        let a = series(&b, &[(&[0], 1), (&[1], 1)]);
        assert_eq!(a.mul(&a).unwrap(), series(&b, &[(&[0], 1), (&[1], 2)]));
        assert_eq!(a.mul(&TruncatedSeries::one(&b)).unwrap(), a);

        let b = blocks(&[2, 2]);
        let one = TruncatedSeries::one(&b);
        let s = TruncatedSeries::linear_form(&b, &[1, 1]);
        let lhs = one.sub(&s).unwrap();
        let rhs = one.add(&s).unwrap().add(&s.pow(2)).unwrap();
        let expected = one.sub(&s.pow(3)).unwrap();
        assert_eq!(lhs.mul(&rhs).unwrap(), expected);
        // (X+Y)^3 keeps only X^2 Y and X Y^2 under the bounds (2,2)
        assert_eq!(
            expected,
            series(&b, &[(&[0, 0], 1), (&[2, 1], -3), (&[1, 2], -3)])
        );
    }

    #[test]
    fn mul_rejects_other_blocks() {
        let a = TruncatedSeries::one(&blocks(&[1]));
        let b = TruncatedSeries::one(&blocks(&[2]));
        assert_eq!(a.mul(&b), Err(ChowError::BlockMismatch));
    }

    #[test]
    fn invert_examples() {
        let b = blocks(&[2]);
        let a = series(&b, &[(&[0], 1), (&[1], -2)]);
        assert_eq!(
            a.invert().unwrap(),
            series(&b, &[(&[0], 1), (&[1], 2), (&[2], 4)])
        );
        let one = TruncatedSeries::one(&b);
        assert_eq!(one.invert().unwrap(), one);

        let b = blocks(&[2, 2]);
        let one = TruncatedSeries::one(&b);
        let s = TruncatedSeries::linear_form(&b, &[2, 2]);
        let inv = one.sub(&s).unwrap().pow(2).invert().unwrap();
        let low: TruncatedSeries = (0..=2)
            .map(|d| inv.graded_part(d))
            .fold(TruncatedSeries::zero(&b), |acc, p| acc.add(&p).unwrap());
        let xy = TruncatedSeries::linear_form(&b, &[1, 1]);
        let expected = one
            .add(&xy.scale(&4.into()))
            .unwrap()
            .add(&xy.pow(2).scale(&12.into()))
            .unwrap();
        assert_eq!(low, expected);

        let bad = series(&b, &[(&[0, 0], 2)]);
        assert_eq!(bad.invert(), Err(ChowError::NotInvertible(2.into())));
        assert!(TruncatedSeries::zero(&b).invert().is_err());
    }

    #[test]
    fn graded_part_examples() {
        let b = blocks(&[2, 2]);
        let a = TruncatedSeries::one(&b)
            .add(&TruncatedSeries::linear_form(&b, &[5, 5]))
            .unwrap();
        assert_eq!(a.graded_part(0), TruncatedSeries::one(&b));
        assert!(a.graded_part(5).is_zero());
    }

    #[test]
    fn sigma_examples() {
        let b = blocks(&[2, 2]);
        let s = sigma_series(&b, &[md(&[1, 1]), md(&[2, 2]), md(&[2, 2])]).unwrap();
        assert_eq!(
            s.graded_part(2),
            series(&b, &[(&[2, 0], 8), (&[1, 1], 18), (&[0, 2], 8)])
        );
        assert_eq!(s.graded_part(2).to_string(), "8*Y_1^2 + 18*Y_1*Y_2 + 8*Y_2^2");

        let b11 = blocks(&[1, 1]);
        let s = sigma_series(&b11, &[md(&[1, 1]), md(&[1, 1])]).unwrap();
        assert_eq!(s.graded_part(1), TruncatedSeries::linear_form(&b11, &[1, 1]));

        let s = sigma_series(&b, &[md(&[1, 1]), md(&[2, 2]), md(&[3, 1])]).unwrap();
        assert_eq!(
            s.graded_part(2),
            series(&b, &[(&[2, 0], 14), (&[1, 1], 16), (&[0, 2], 4)])
        );
    }

    #[test]
    fn sigma_rejects_zero_entries() {
        let b = blocks(&[2, 2]);
        assert!(matches!(
            sigma_series(&b, &[md(&[1, 1]), md(&[2, 0])]),
            Err(ChowError::NonPositiveDegree { index: 1, .. })
        ));
        assert!(matches!(
            sigma_series(&b, &[md(&[1, 1, 1])]),
            Err(ChowError::WrongLength { .. })
        ));
    }

    #[test]
    fn class_of_v_examples() {
        let b = blocks(&[2, 2]);
        assert_eq!(
            class_of_v(&b, &[md(&[2, 2]), md(&[2, 2])]).unwrap(),
            series(&b, &[(&[2, 0], 4), (&[1, 1], 8), (&[0, 2], 4)])
        );
        assert_eq!(class_of_v(&b, &[]).unwrap(), TruncatedSeries::one(&b));
        assert_eq!(
            class_of_v(&b, &[md(&[3, 1]), md(&[1, 3])]).unwrap(),
            series(&b, &[(&[2, 0], 3), (&[1, 1], 10), (&[0, 2], 3)])
        );
    }

    #[test]
    fn algebraic_degree_examples() {
        assert_eq!(deg(&[2, 2], &[&[1, 1], &[2, 2], &[2, 2]]), 208);
        assert_eq!(deg(&[4], &[&[2], &[4], &[4]]), 544);
        assert_eq!(deg(&[2], &[&[2], &[2]]), 4);
        assert_eq!(deg(&[1, 1], &[&[1, 1], &[1, 1]]), 2);
        assert_eq!(deg(&[2, 2], &[&[1, 1], &[2, 2], &[3, 1]]), 180);
        assert_eq!(deg(&[2, 2], &[&[1, 1], &[3, 1], &[3, 1]]), 102);
        assert_eq!(deg(&[2, 2], &[&[1, 1], &[3, 1], &[1, 3]]), 214);
        assert_eq!(deg(&[2, 1], &[&[1, 1], &[2, 1]]), 10);
        assert_eq!(deg(&[2], &[&[2]]), 1);
    }

    #[test]
    fn report_keeps_signed_value() {
        let b = blocks(&[2, 2]);
        let r = degree_report(&b, &[md(&[1, 1]), md(&[2, 2]), md(&[2, 2])]).unwrap();
        assert_eq!(r.signed, BigInt::from(208));
        assert_eq!(r.class_of_v, "4*Y_1^2 + 8*Y_1*Y_2 + 4*Y_2^2");
        let r = degree_report(&blocks(&[2]), &[md(&[2]), md(&[2]), md(&[2]), md(&[2])]);
        assert_eq!(r, Err(ChowError::TooManyConstraints { m: 3, n: 2 }));
        let r = degree_report(&blocks(&[2]), &[md(&[2]), md(&[3])]).unwrap();
        assert_eq!(r.signed, -BigInt::from(r.count));
        assert_eq!(degree_report(&blocks(&[2]), &[]), Err(ChowError::MissingObjective));
    }

    #[test]
    fn unconstrained_closed_form() {
        for n in 1..=5usize {
            for d in 1..=5u32 {
                let got = algebraic_degree(&blocks(&[n]), &[md(&[d])]).unwrap();
                assert_eq!(got, BigUint::from((d - 1).pow(n as u32)), "n={n} d={d}");
            }
        }
    }

    fn arb_unit_series() -> impl Strategy<Value = (Vec<usize>, Vec<(Vec<u32>, i64)>, bool)> {
        prop::collection::vec(1usize..=3, 1..=3).prop_flat_map(|sizes| {
            let exps = sizes
                .iter()
                .map(|&s| 0..=(s as u32))
                .collect::<Vec<_>>();
            (
                Just(sizes),
                prop::collection::vec((exps, -5i64..=5), 0..8),
                any::<bool>(),
            )
                .prop_map(|(s, t, neg)| {
                    let t = t.into_iter().filter(|(e, _)| e.iter().any(|&x| x > 0)).collect();
                    (s, t, neg)
                })
        })
    }

    proptest! {
        #[test]
        fn inverse_is_two_sided((sizes, terms, neg) in arb_unit_series()) {
            let b = blocks(&sizes);
            let mut a = TruncatedSeries::constant(&b, if neg { -1 } else { 1 });
            a = a.add(&TruncatedSeries::from_terms(&b, terms.into_iter().map(|(e, c)| (e, BigInt::from(c))))).unwrap();
            let inv = a.invert().unwrap();
            prop_assert_eq!(a.mul(&inv).unwrap(), TruncatedSeries::one(&b));
            prop_assert_eq!(inv.mul(&a).unwrap(), TruncatedSeries::one(&b));
        }

        #[test]
        fn constraint_order_is_irrelevant(
            d in prop::collection::vec(prop::collection::vec(1u32..=3, 2), 2..=4),
        ) {
            let b = blocks(&[2, 2]);
            let mut ds: Vec<_> = d.into_iter().map(MultiDegree::new).collect();
            let first = algebraic_degree(&b, &ds).unwrap();
            ds[1..].reverse();
            prop_assert_eq!(algebraic_degree(&b, &ds).unwrap(), first);
        }

        #[test]
        fn block_permutation_equivariance(
            sizes in prop::collection::vec(1usize..=2, 2..=3),
            raw in prop::collection::vec(prop::collection::vec(1u32..=3, 3), 1..=3),
        ) {
            let k = sizes.len();
            let ds: Vec<_> = raw.iter().map(|r| MultiDegree::new(r[..k].to_vec())).collect();
            let m = ds.len() - 1;
            prop_assume!(m <= sizes.iter().sum::<usize>());
            let perm: Vec<usize> = (0..k).rev().collect();
            let psizes: Vec<usize> = perm.iter().map(|&p| sizes[p]).collect();
            let pds: Vec<_> = ds.iter().map(|d| d.permuted(&perm)).collect();
            prop_assert_eq!(
                algebraic_degree(&blocks(&sizes), &ds).unwrap(),
                algebraic_degree(&blocks(&psizes), &pds).unwrap()
            );
        }
    }
}
