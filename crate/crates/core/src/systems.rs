//! Critical-point systems of a block-structured optimization problem.
//!
//! Two affine formulations are built from the same instance: the
//! Lagrangian gradient system in `x` and the multipliers, and the system of
//! constraints plus maximal minors of the Jacobian `(∇f_0 | .. | ∇f_m)`.
//! Multi-homogenization adds one coordinate `x_{i,0}` per block so that the
//! same equations define the closures in `P^{n_1} × .. × P^{n_k}`.

use num_bigint::BigUint;
use thiserror::Error;

use crate::chow::{self, ChowError};
use crate::polyring::{
    BlockStructure, CoeffRing, Monomial, MultiDegree, PolyError, PolyMatrix, Polynomial, Term,
    VarKind, Variable, Variables,
};

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum SystemError {
    #[error(transparent)]
    Poly(#[from] PolyError),
    #[error("polynomial {index} does not use the instance's affine variables")]
    WrongVariables { index: usize },
    #[error("polynomial {index} is zero")]
    ZeroPolynomial { index: usize },
    #[error("{m} constraints exceed the {n} variables")]
    TooManyConstraints { m: usize, n: usize },
    #[error("the Lagrangian system needs at least one constraint")]
    NoConstraints,
    #[error("maximal minors need m + 1 <= n, got m = {m}, n = {n}")]
    NoMinors { m: usize, n: usize },
}

/// Objective `f_0` and constraints `f_1..f_m` over the affine variables of a
/// block structure, with their multi-degrees.
#[derive(Clone, Debug, PartialEq)]
pub struct ProblemInstance<R: CoeffRing> {
    blocks: BlockStructure,
    objective: Polynomial<R>,
    constraints: Vec<Polynomial<R>>,
    degrees: Vec<MultiDegree>,
}

impl<R: CoeffRing> ProblemInstance<R> {
    pub fn new(
        blocks: BlockStructure,
        objective: Polynomial<R>,
        constraints: Vec<Polynomial<R>>,
    ) -> Result<Self, SystemError> {
        let (n, m) = (blocks.n(), constraints.len());
        if m > n {
            return Err(SystemError::TooManyConstraints { m, n });
        }
        let mut degrees = Vec::with_capacity(m + 1);
        for (index, f) in std::iter::once(&objective).chain(&constraints).enumerate() {
            if f.variables() != blocks.affine_variables() {
                return Err(SystemError::WrongVariables { index });
            }
            if f.is_zero() {
                return Err(SystemError::ZeroPolynomial { index });
            }
            degrees.push(f.multidegree(&blocks)?);
        }
        Ok(ProblemInstance {
            blocks,
            objective,
            constraints,
            degrees,
        })
    }

    pub fn blocks(&self) -> &BlockStructure {
        &self.blocks
    }

    pub fn objective(&self) -> &Polynomial<R> {
        &self.objective
    }

    pub fn constraints(&self) -> &[Polynomial<R>] {
        &self.constraints
    }

    /// `f_0, f_1, .., f_m`.
    pub fn polynomials(&self) -> impl Iterator<Item = &Polynomial<R>> {
        std::iter::once(&self.objective).chain(&self.constraints)
    }

    /// Multi-degrees of `f_0, f_1, .., f_m`.
    pub fn degrees(&self) -> &[MultiDegree] {
        &self.degrees
    }

    pub fn n(&self) -> usize {
        self.blocks.n()
    }

    pub fn m(&self) -> usize {
        self.constraints.len()
    }

    /// Generic critical-point count for this instance's multi-degrees.
    pub fn algebraic_degree(&self) -> Result<BigUint, ChowError> {
        chow::algebraic_degree(&self.blocks, &self.degrees)
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub enum SystemVariant {
    /// `∇_x L = 0` and `f_1 = .. = f_m = 0`, unknowns `x` then `λ`.
    Lagrangian,
    /// Constraints plus maximal minors of the affine Jacobian.
    Minors,
    /// Multi-homogenized constraints plus maximal minors of the homogenized
    /// Jacobian (rows `x_{i,0}` excluded).
    Homogenized,
}

#[derive(Clone, Debug, PartialEq)]
pub struct CriticalSystem<R: CoeffRing> {
    pub variant: SystemVariant,
    pub equations: Vec<Polynomial<R>>,
    pub unknowns: Variables,
}

impl<R: CoeffRing> CriticalSystem<R> {
    pub fn is_square(&self) -> bool {
        self.equations.len() == self.unknowns.len()
    }
}

/// Which rows and which polynomials the Jacobian is built from.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum JacobianForm {
    /// `M`: partials of `f_j` in the `n` affine variables.
    Affine,
    /// `ℳ`: partials of the multi-homogenizations in the `n` affine
    /// variables, over the homogeneous variable list.
    Homogenized,
    /// Partials of the multi-homogenizations in all `n + k` variables,
    /// homogeneous layout order.
    HomogenizedFull,
}

/// Makes `f` homogeneous of degree `d_i` in block `i` (with its `x_{i,0}`),
/// where `d = multidegree(f)`. The result lives over the homogeneous
/// variables of `blocks`.
pub fn multihomogenize<R: CoeffRing>(
    f: &Polynomial<R>,
    blocks: &BlockStructure,
) -> Result<Polynomial<R>, SystemError> {
    if f.variables() != blocks.affine_variables() {
        return Err(SystemError::WrongVariables { index: 0 });
    }
    let d = f.multidegree(blocks)?;
    let target = blocks.homogeneous_variables();
    let k = blocks.k();
    let mut raw = Vec::with_capacity(f.len());
    for t in f.terms() {
        let mut exps = vec![0u16; target.len()];
        let mut per_block = vec![0u32; k];
        for (idx, &e) in t.monomial.exponents().iter().enumerate() {
            let (block, pos) = blocks.locate(idx).expect("affine variable");
            exps[blocks.homogeneous_index(block, pos)] = e;
            per_block[block] += e as u32;
        }
        for block in 0..k {
            let fill = d[block] - per_block[block];
            exps[blocks.homogeneous_index(block, 0)] =
                u16::try_from(fill).map_err(|_| PolyError::ExponentOverflow(fill))?;
        }
        raw.push(Term {
            coeff: t.coeff.clone(),
            monomial: Monomial::from_exponents(&exps),
        });
    }
    Ok(Polynomial::from_raw_terms(f.ring().clone(), target.clone(), raw))
}

/// Sets every `x_{i,0}` to one, returning a polynomial over the affine
/// variables.
pub fn dehomogenize<R: CoeffRing>(
    f: &Polynomial<R>,
    blocks: &BlockStructure,
) -> Result<Polynomial<R>, SystemError> {
    if f.variables() != blocks.homogeneous_variables() {
        return Err(SystemError::WrongVariables { index: 0 });
    }
    let target = blocks.affine_variables();
    let keep: Vec<Option<usize>> = f
        .variables()
        .iter()
        .map(|v| match v.kind {
            VarKind::Block { block, pos } if pos > 0 => Some(blocks.affine_index(block, pos)),
            _ => None,
        })
        .collect();
    let raw = f
        .terms()
        .iter()
        .map(|t| {
            let mut exps = vec![0u16; target.len()];
            for (e, slot) in t.monomial.exponents().iter().zip(&keep) {
                if let Some(j) = slot {
                    exps[*j] = *e;
                }
            }
            Term {
                coeff: t.coeff.clone(),
                monomial: Monomial::from_exponents(&exps),
            }
        })
        .collect();
    Ok(Polynomial::from_raw_terms(f.ring().clone(), target.clone(), raw))
}

fn lagrangian_unknowns(blocks: &BlockStructure, m: usize) -> Variables {
    blocks
        .affine_variables()
        .extended((1..=m).map(|j| Variable {
            name: format!("l_{j}"),
            kind: VarKind::Multiplier(j),
        }))
}

/// `∂L/∂x_1 .. ∂L/∂x_n` followed by `f_1 .. f_m`, with
/// `L = f_0 - Σ_j λ_j f_j`. The multiplier equations `∂L/∂λ_j = -f_j` are
/// stored as `f_j`.
pub fn lagrangian_system<R: CoeffRing>(
    inst: &ProblemInstance<R>,
) -> Result<CriticalSystem<R>, SystemError> {
    let (n, m) = (inst.n(), inst.m());
    if m == 0 {
        return Err(SystemError::NoConstraints);
    }
    let unknowns = lagrangian_unknowns(inst.blocks(), m);
    let map: Vec<usize> = (0..n).collect();
    let ring = inst.objective().ring().clone();
    let mut lagrangian = inst.objective().embed(&unknowns, &map)?;
    let mut lifted = Vec::with_capacity(m);
    for (j, f) in inst.constraints().iter().enumerate() {
        let f = f.embed(&unknowns, &map)?;
        let lambda = Polynomial::var(ring.clone(), unknowns.clone(), n + j)?;
        lagrangian = &lagrangian - &(&lambda * &f);
        lifted.push(f);
    }
    let mut equations = (0..n)
        .map(|i| lagrangian.partial_derivative(i))
        .collect::<Result<Vec<_>, _>>()?;
    equations.extend(lifted);
    Ok(CriticalSystem {
        variant: SystemVariant::Lagrangian,
        equations,
        unknowns,
    })
}

/// Jacobian with one column per polynomial `f_0..f_m`.
pub fn jacobian_matrix<R: CoeffRing>(
    inst: &ProblemInstance<R>,
    form: JacobianForm,
) -> Result<PolyMatrix<R>, SystemError> {
    let blocks = inst.blocks();
    let (polys, rows): (Vec<Polynomial<R>>, Vec<usize>) = match form {
        JacobianForm::Affine => (inst.polynomials().cloned().collect(), (0..inst.n()).collect()),
        JacobianForm::Homogenized | JacobianForm::HomogenizedFull => {
            let polys = inst
                .polynomials()
                .map(|f| multihomogenize(f, blocks))
                .collect::<Result<Vec<_>, _>>()?;
            let rows = blocks
                .homogeneous_variables()
                .iter()
                .enumerate()
                .filter(|(_, v)| {
                    form == JacobianForm::HomogenizedFull
                        || !matches!(v.kind, VarKind::Block { pos: 0, .. })
                })
                .map(|(i, _)| i)
                .collect();
            (polys, rows)
        }
    };
    let mut entries = Vec::with_capacity(rows.len() * polys.len());
    for &r in &rows {
        for f in &polys {
            entries.push(f.partial_derivative(r)?);
        }
    }
    Ok(PolyMatrix::new(rows.len(), polys.len(), entries)?)
}

/// Constraints plus every `(m+1) x (m+1)` minor of the affine Jacobian,
/// minors in lexicographic order of their row subsets.
pub fn minor_system<R: CoeffRing>(
    inst: &ProblemInstance<R>,
) -> Result<CriticalSystem<R>, SystemError> {
    let (n, m) = (inst.n(), inst.m());
    if m + 1 > n {
        return Err(SystemError::NoMinors { m, n });
    }
    let jac = jacobian_matrix(inst, JacobianForm::Affine)?;
    let mut equations: Vec<_> = inst.constraints().to_vec();
    equations.extend(jac.maximal_minors()?.into_iter().map(|(_, det)| det));
    Ok(CriticalSystem {
        variant: SystemVariant::Minors,
        equations,
        unknowns: inst.blocks().affine_variables().clone(),
    })
}

/// Multi-homogenized constraints plus the maximal minors of `ℳ`.
pub fn homogenized_system<R: CoeffRing>(
    inst: &ProblemInstance<R>,
) -> Result<CriticalSystem<R>, SystemError> {
    let (n, m) = (inst.n(), inst.m());
    if m + 1 > n {
        return Err(SystemError::NoMinors { m, n });
    }
    let blocks = inst.blocks();
    let jac = jacobian_matrix(inst, JacobianForm::Homogenized)?;
    let mut equations = inst
        .constraints()
        .iter()
        .map(|f| multihomogenize(f, blocks))
        .collect::<Result<Vec<_>, _>>()?;
    equations.extend(jac.maximal_minors()?.into_iter().map(|(_, det)| det));
    Ok(CriticalSystem {
        variant: SystemVariant::Homogenized,
        equations,
        unknowns: blocks.homogeneous_variables().clone(),
    })
}

/// `Σ_t x_{i,t} ∂f̃/∂x_{i,t} - d_i f̃` for the multi-homogenization `f̃` of
/// `f`; identically zero by Euler's relation.
pub fn euler_defect<R: CoeffRing>(
    f: &Polynomial<R>,
    blocks: &BlockStructure,
    block: usize,
) -> Result<Polynomial<R>, SystemError> {
    if block >= blocks.k() {
        return Err(PolyError::InvalidBlocks(format!("no block {block}")).into());
    }
    let d = f.multidegree(blocks)?;
    let h = multihomogenize(f, blocks)?;
    let ring = h.ring().clone();
    let vars = h.variables().clone();
    let d_i = i64::from(d[block]);
    let mut acc = h.scale(&ring.neg(&ring.from_i64(d_i)));
    for pos in 0..=blocks.sizes()[block] {
        let idx = blocks.homogeneous_index(block, pos);
        let x = Polynomial::var(ring.clone(), vars.clone(), idx)?;
        acc = &acc + &(&x * &h.partial_derivative(idx)?);
    }
    Ok(acc)
}
