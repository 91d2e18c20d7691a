//! Independent check of the closed-form count.
//!
//! A random instance with prescribed multi-degrees is drawn over 𝔽_p, its
//! Lagrangian system is handed to Buchberger's algorithm, and the number of
//! standard monomials of the resulting basis (the dimension of the quotient
//! algebra) is compared with [`crate::chow::algebraic_degree`]. Agreement
//! is strong evidence, not a proof: a bad prime or an unlucky draw can make
//! the instance non-generic.

mod groebner;

pub use groebner::{buchberger, GroebnerBasis};

use num_bigint::BigUint;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rayon::prelude::*;
use serde::Serialize;
use thiserror::Error;

use crate::chow::{self, ChowError};
use crate::polyring::{
    BlockStructure, Monomial, MultiDegree, PolyError, Polynomial, PrimeField, Term,
    DEFAULT_PRIME,
};
use crate::systems::{lagrangian_system, ProblemInstance, SystemError};

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum OracleError {
    #[error(transparent)]
    Poly(#[from] PolyError),
    #[error(transparent)]
    System(#[from] SystemError),
    #[error(transparent)]
    Chow(#[from] ChowError),
    #[error("no generators")]
    NoGenerators,
    #[error("generators use different fields or variables")]
    MixedGenerators,
    #[error("ideal is not zero-dimensional: no pure power of {0:?} among the leading terms")]
    NotZeroDimensional(Vec<String>),
    #[error("random polynomial {index} has multi-degree {got}, expected {expected}; reseed")]
    DegenerateDraw {
        index: usize,
        got: MultiDegree,
        expected: MultiDegree,
    },
    #[error("multi-degree {0} has an entry < 1")]
    NonPositiveDegree(MultiDegree),
}

/// Everything needed to reproduce a random instance.
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct InstanceSeed {
    pub seed: u64,
    pub prime: u64,
    pub blocks: Vec<usize>,
    /// Objective first, then the constraints.
    pub degrees: Vec<MultiDegree>,
}

impl InstanceSeed {
    pub fn new(seed: u64, blocks: Vec<usize>, degrees: Vec<MultiDegree>) -> Self {
        InstanceSeed {
            seed,
            prime: DEFAULT_PRIME,
            blocks,
            degrees,
        }
    }
}

/// Exponent vectors of length `len` with total at most `d`, in a fixed order.
fn bounded_exponents(len: usize, d: u32) -> Vec<Vec<u16>> {
    if len == 0 {
        return vec![Vec::new()];
    }
    let mut out = Vec::new();
    for first in 0..=d {
        for mut rest in bounded_exponents(len - 1, d - first) {
            rest.insert(0, first as u16);
            out.push(rest);
        }
    }
    out
}

/// Every monomial whose block-`i` degree is at most `degree[i]`.
pub fn dense_support(blocks: &BlockStructure, degree: &MultiDegree) -> Vec<Monomial> {
    let per_block: Vec<Vec<Vec<u16>>> = blocks
        .sizes()
        .iter()
        .zip(degree.entries())
        .map(|(&s, &d)| bounded_exponents(s, d))
        .collect();
    let mut out: Vec<Vec<u16>> = vec![Vec::new()];
    for choices in &per_block {
        out = out
            .into_iter()
            .flat_map(|prefix| {
                choices.iter().map(move |c| {
                    let mut v = prefix.clone();
                    v.extend_from_slice(c);
                    v
                })
            })
            .collect();
    }
    out.iter().map(|e| Monomial::from_exponents(e)).collect()
}

/// Dense random instance over 𝔽_p, deterministic in the seed.
pub fn random_instance(spec: &InstanceSeed) -> Result<ProblemInstance<PrimeField>, OracleError> {
    let field = PrimeField::new(spec.prime)?;
    let blocks = BlockStructure::new(spec.blocks.clone())?;
    if let Some(bad) = spec.degrees.iter().find(|d| d.k() != blocks.k() || !d.is_positive()) {
        return Err(OracleError::NonPositiveDegree(bad.clone()));
    }
    let mut rng = ChaCha8Rng::seed_from_u64(spec.seed);
    let vars = blocks.affine_variables().clone();
    let mut polys = Vec::with_capacity(spec.degrees.len());
    for (index, d) in spec.degrees.iter().enumerate() {
        let terms = dense_support(&blocks, d)
            .into_iter()
            .map(|monomial| Term {
                coeff: rng.gen_range(0..spec.prime),
                monomial,
            })
            .collect();
        let f = Polynomial::from_raw_terms(field, vars.clone(), terms);
        let got = if f.is_zero() {
            MultiDegree::zeros(blocks.k())
        } else {
            f.multidegree(&blocks)?
        };
        if &got != d {
            return Err(OracleError::DegenerateDraw {
                index,
                got,
                expected: d.clone(),
            });
        }
        polys.push(f);
    }
    let objective = polys.remove(0);
    Ok(ProblemInstance::new(blocks, objective, polys)?)
}

/// Number of standard monomials of a reduced basis, i.e. the number of
/// solutions over the algebraic closure counted with multiplicity.
pub fn solution_count(gb: &GroebnerBasis) -> Result<u64, OracleError> {
    if gb.is_unit() {
        return Ok(0);
    }
    let lms = gb.leading_monomials();
    let vars = gb.generators()[0].variables();
    let nvars = vars.len();
    let mut has_pure_power = vec![false; nvars];
    for lm in &lms {
        if let Some(i) = lm.pure_power_of() {
            has_pure_power[i] = true;
        }
    }
    let missing: Vec<String> = has_pure_power
        .iter()
        .enumerate()
        .filter(|(_, &ok)| !ok)
        .map(|(i, _)| vars.get(i).unwrap().name.clone())
        .collect();
    if !missing.is_empty() {
        return Err(OracleError::NotZeroDimensional(missing));
    }
    // Standard monomials form an order ideal; walk it depth first, raising
    // only variables at or after the last one raised so each monomial is
    // visited once.
    let mut count = 0u64;
    let mut stack = vec![(vec![0u16; nvars], 0usize)];
    while let Some((exps, from)) = stack.pop() {
        let m = Monomial::from_exponents(&exps);
        if lms.iter().any(|lm| lm.divides(&m)) {
            continue;
        }
        count += 1;
        for v in from..nvars {
            let mut next = exps.clone();
            next[v] += 1;
            stack.push((next, v));
        }
    }
    Ok(count)
}

/// Outcome of one oracle run.
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct VerifyReport {
    pub seed: u64,
    #[serde(serialize_with = "crate::serialize_display")]
    pub formula: BigUint,
    pub oracle: u64,
    pub matches: bool,
}

/// Lagrangian ideal of a random instance: Gröbner basis and its count.
pub fn oracle_count(spec: &InstanceSeed) -> Result<(GroebnerBasis, u64), OracleError> {
    let inst = random_instance(spec)?;
    let system = lagrangian_system(&inst)?;
    let gb = buchberger(&system.equations)?;
    let count = solution_count(&gb)?;
    Ok((gb, count))
}

pub fn verify_degree(spec: &InstanceSeed) -> Result<VerifyReport, OracleError> {
    let blocks = BlockStructure::new(spec.blocks.clone())?;
    let formula = chow::algebraic_degree(&blocks, &spec.degrees)?;
    let (_, oracle) = oracle_count(spec)?;
    Ok(VerifyReport {
        seed: spec.seed,
        matches: BigUint::from(oracle) == formula,
        formula,
        oracle,
    })
}

/// Runs [`verify_degree`] for several seeds in parallel, results in input
/// order.
pub fn verify_seeds(specs: &[InstanceSeed]) -> Vec<Result<VerifyReport, OracleError>> {
    specs.par_iter().map(verify_degree).collect()
}
