use std::fmt;
use std::ops::{Add, Mul, Neg, Sub};

use super::blocks::{BlockStructure, MultiDegree, VarKind, Variables};
use super::monomial::{Exponent, Monomial};
use super::ring::CoeffRing;
use super::PolyError;

#[derive(Clone, Debug, PartialEq)]
pub struct Term<E> {
    pub coeff: E,
    pub monomial: Monomial,
}

/// Sparse polynomial in canonical form: terms sorted by strictly decreasing
/// degrevlex monomial, no zero coefficients.
#[derive(Clone, Debug, PartialEq)]
pub struct Polynomial<R: CoeffRing> {
    ring: R,
    vars: Variables,
    terms: Vec<Term<R::Elem>>,
}

impl<R: CoeffRing> Polynomial<R> {
    pub fn zero(ring: R, vars: Variables) -> Self {
        Polynomial {
            ring,
            vars,
            terms: Vec::new(),
        }
    }

    pub fn constant(ring: R, vars: Variables, c: R::Elem) -> Self {
        let n = vars.len();
        let mut p = Self::zero(ring, vars);
        if !p.ring.is_zero(&c) {
            p.terms.push(Term {
                coeff: c,
                monomial: Monomial::one(n),
            });
        }
        p
    }

    pub fn one(ring: R, vars: Variables) -> Self {
        let one = ring.one();
        Self::constant(ring, vars, one)
    }

    pub fn var(ring: R, vars: Variables, index: usize) -> Result<Self, PolyError> {
        if index >= vars.len() {
            return Err(PolyError::InvalidVariable {
                index,
                nvars: vars.len(),
            });
        }
        let term = Term {
            coeff: ring.one(),
            monomial: Monomial::var(vars.len(), index),
        };
        Ok(Polynomial {
            ring,
            vars,
            terms: vec![term],
        })
    }

    /// Builds a polynomial from arbitrary `(coefficient, exponents)` pairs,
    /// combining duplicates and dropping zeros.
    pub fn from_terms<I>(ring: R, vars: Variables, terms: I) -> Result<Self, PolyError>
    where
        I: IntoIterator<Item = (R::Elem, Vec<u32>)>,
    {
        let n = vars.len();
        let mut raw = Vec::new();
        for (c, e) in terms {
            if e.len() != n {
                return Err(PolyError::LengthMismatch {
                    expected: n,
                    got: e.len(),
                });
            }
            let exps: Vec<Exponent> = e
                .iter()
                .map(|&x| Exponent::try_from(x).map_err(|_| PolyError::ExponentOverflow(x)))
                .collect::<Result<_, _>>()?;
            raw.push(Term {
                coeff: c,
                monomial: Monomial::from_exponents(&exps),
            });
        }
        Ok(Self::from_raw_terms(ring, vars, raw))
    }

    pub(crate) fn from_raw_terms(ring: R, vars: Variables, mut raw: Vec<Term<R::Elem>>) -> Self {
        raw.sort_by(|a, b| b.monomial.cmp(&a.monomial));
        let mut terms: Vec<Term<R::Elem>> = Vec::with_capacity(raw.len());
        for t in raw {
            match terms.last_mut() {
                Some(last) if last.monomial == t.monomial => {
                    last.coeff = ring.add(&last.coeff, &t.coeff);
                }
                _ => {
                    if let Some(last) = terms.last() {
                        if ring.is_zero(&last.coeff) {
                            terms.pop();
                        }
                    }
                    terms.push(t);
                }
            }
        }
        if terms.last().is_some_and(|t| ring.is_zero(&t.coeff)) {
            terms.pop();
        }
        Polynomial { ring, vars, terms }
    }

    /// Wraps terms that are already sorted, distinct and nonzero.
    pub(crate) fn from_sorted_terms(ring: R, vars: Variables, terms: Vec<Term<R::Elem>>) -> Self {
        debug_assert!(terms.windows(2).all(|w| w[0].monomial > w[1].monomial));
        debug_assert!(terms.iter().all(|t| !ring.is_zero(&t.coeff)));
        Polynomial { ring, vars, terms }
    }

    pub fn ring(&self) -> &R {
        &self.ring
    }

    pub fn variables(&self) -> &Variables {
        &self.vars
    }

    pub fn nvars(&self) -> usize {
        self.vars.len()
    }

    pub fn terms(&self) -> &[Term<R::Elem>] {
        &self.terms
    }

    pub fn len(&self) -> usize {
        self.terms.len()
    }

    pub fn is_zero(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn is_constant(&self) -> bool {
        self.terms.iter().all(|t| t.monomial.is_one())
    }

    pub fn leading_term(&self) -> Option<&Term<R::Elem>> {
        self.terms.first()
    }

    /// Total degree; `None` for the zero polynomial.
    pub fn total_degree(&self) -> Option<u32> {
        self.terms.iter().map(|t| t.monomial.degree()).max()
    }

    /// Coefficient of the monomial with the given exponents (zero if absent).
    pub fn coefficient(&self, exps: &[Exponent]) -> R::Elem {
        let m = Monomial::from_exponents(exps);
        self.terms
            .binary_search_by(|t| m.cmp(&t.monomial))
            .map(|i| self.terms[i].coeff.clone())
            .unwrap_or_else(|_| self.ring.zero())
    }

    fn check_compatible(&self, other: &Self) -> Result<(), PolyError> {
        if self.ring != other.ring {
            return Err(PolyError::DomainMismatch {
                left: self.ring.name(),
                right: other.ring.name(),
            });
        }
        if self.vars != other.vars {
            return Err(PolyError::VariableMismatch);
        }
        Ok(())
    }

    pub fn checked_add(&self, other: &Self) -> Result<Self, PolyError> {
        self.check_compatible(other)?;
        Ok(self.merge(other, |_, c| c.clone(), |_, c| c.clone()))
    }

    pub fn checked_sub(&self, other: &Self) -> Result<Self, PolyError> {
        self.check_compatible(other)?;
        Ok(self.merge(other, |_, c| c.clone(), |r, c| r.neg(c)))
    }

    pub fn checked_mul(&self, other: &Self) -> Result<Self, PolyError> {
        self.check_compatible(other)?;
        let mut raw = Vec::with_capacity(self.len() * other.len());
        for a in &self.terms {
            for b in &other.terms {
                raw.push(Term {
                    coeff: self.ring.mul(&a.coeff, &b.coeff),
                    monomial: a.monomial.mul(&b.monomial),
                });
            }
        }
        Ok(Self::from_raw_terms(self.ring.clone(), self.vars.clone(), raw))
    }

    /// Sorted merge of two canonical term lists.
    fn merge(
        &self,
        other: &Self,
        left: impl Fn(&R, &R::Elem) -> R::Elem,
        right: impl Fn(&R, &R::Elem) -> R::Elem,
    ) -> Self {
        let ring = &self.ring;
        let mut out = Vec::with_capacity(self.len() + other.len());
        let (mut i, mut j) = (0, 0);
        while i < self.terms.len() || j < other.terms.len() {
            let ord = match (self.terms.get(i), other.terms.get(j)) {
                (Some(a), Some(b)) => a.monomial.cmp(&b.monomial),
                (Some(_), None) => std::cmp::Ordering::Greater,
                _ => std::cmp::Ordering::Less,
            };
            match ord {
                std::cmp::Ordering::Greater => {
                    let t = &self.terms[i];
                    out.push(Term {
                        coeff: left(ring, &t.coeff),
                        monomial: t.monomial.clone(),
                    });
                    i += 1;
                }
                std::cmp::Ordering::Less => {
                    let t = &other.terms[j];
                    out.push(Term {
                        coeff: right(ring, &t.coeff),
                        monomial: t.monomial.clone(),
                    });
                    j += 1;
                }
                std::cmp::Ordering::Equal => {
                    let c = ring.add(
                        &left(ring, &self.terms[i].coeff),
                        &right(ring, &other.terms[j].coeff),
                    );
                    if !ring.is_zero(&c) {
                        out.push(Term {
                            coeff: c,
                            monomial: self.terms[i].monomial.clone(),
                        });
                    }
                    i += 1;
                    j += 1;
                }
            }
        }
        Polynomial {
            ring: self.ring.clone(),
            vars: self.vars.clone(),
            terms: out,
        }
    }

    /// `self - c * m * other`, the elementary reduction step.
    pub fn sub_scaled(&self, c: &R::Elem, m: &Monomial, other: &Self) -> Self {
        let ring = &self.ring;
        let mut out = Vec::with_capacity(self.len() + other.len());
        let mut i = 0;
        let mut others = other.terms.iter().map(|t| Term {
            coeff: ring.neg(&ring.mul(c, &t.coeff)),
            monomial: t.monomial.mul(m),
        });
        let mut pending = others.next();
        while let Some(b) = pending.take() {
            while i < self.terms.len() && self.terms[i].monomial > b.monomial {
                out.push(self.terms[i].clone());
                i += 1;
            }
            if i < self.terms.len() && self.terms[i].monomial == b.monomial {
                let s = ring.add(&self.terms[i].coeff, &b.coeff);
                if !ring.is_zero(&s) {
                    out.push(Term {
                        coeff: s,
                        monomial: b.monomial,
                    });
                }
                i += 1;
            } else if !ring.is_zero(&b.coeff) {
                out.push(b);
            }
            pending = others.next();
        }
        out.extend_from_slice(&self.terms[i..]);
        Polynomial {
            ring: self.ring.clone(),
            vars: self.vars.clone(),
            terms: out,
        }
    }

    pub fn scale(&self, c: &R::Elem) -> Self {
        let terms = self
            .terms
            .iter()
            .map(|t| Term {
                coeff: self.ring.mul(c, &t.coeff),
                monomial: t.monomial.clone(),
            })
            .filter(|t| !self.ring.is_zero(&t.coeff))
            .collect();
        Polynomial {
            ring: self.ring.clone(),
            vars: self.vars.clone(),
            terms,
        }
    }

    pub fn mul_monomial(&self, m: &Monomial) -> Self {
        let terms = self
            .terms
            .iter()
            .map(|t| Term {
                coeff: t.coeff.clone(),
                monomial: t.monomial.mul(m),
            })
            .collect();
        Polynomial {
            ring: self.ring.clone(),
            vars: self.vars.clone(),
            terms,
        }
    }

    pub fn pow(&self, e: u32) -> Self {
        let mut acc = Self::one(self.ring.clone(), self.vars.clone());
        for _ in 0..e {
            acc = &acc * self;
        }
        acc
    }

    /// Formal partial derivative with respect to variable `index`.
    pub fn partial_derivative(&self, index: usize) -> Result<Self, PolyError> {
        if index >= self.nvars() {
            return Err(PolyError::InvalidVariable {
                index,
                nvars: self.nvars(),
            });
        }
        let mut raw = Vec::new();
        for t in &self.terms {
            let e = t.monomial.exponents()[index];
            if e == 0 {
                continue;
            }
            let coeff = self.ring.mul(&t.coeff, &self.ring.from_i64(e as i64));
            if self.ring.is_zero(&coeff) {
                continue;
            }
            let mut m = t.monomial.clone();
            m.exps_mut()[index] -= 1;
            m.refresh_degree();
            raw.push(Term { coeff, monomial: m });
        }
        // Lowering one exponent can reorder terms under degrevlex.
        Ok(Self::from_raw_terms(self.ring.clone(), self.vars.clone(), raw))
    }

    /// Per-block degree: entry `i` is the largest total exponent of block-`i`
    /// variables over all terms. Homogenizing variables count toward their
    /// block; multipliers and free variables are ignored.
    pub fn multidegree(&self, blocks: &BlockStructure) -> Result<MultiDegree, PolyError> {
        if self.is_zero() {
            return Err(PolyError::ZeroPolynomial);
        }
        let k = blocks.k();
        let mut owner = Vec::with_capacity(self.nvars());
        for v in self.vars.iter() {
            owner.push(match v.kind {
                VarKind::Block { block, pos } => {
                    if block >= k || pos > blocks.sizes()[block] {
                        return Err(PolyError::IncompatibleBlocks);
                    }
                    Some(block)
                }
                _ => None,
            });
        }
        let mut deg = vec![0u32; k];
        for t in &self.terms {
            let mut per = vec![0u32; k];
            for (e, o) in t.monomial.exponents().iter().zip(&owner) {
                if let Some(b) = o {
                    per[*b] += *e as u32;
                }
            }
            for (d, p) in deg.iter_mut().zip(per) {
                *d = (*d).max(p);
            }
        }
        Ok(MultiDegree::new(deg))
    }

    /// Exact evaluation in the coefficient ring.
    pub fn evaluate(&self, point: &[R::Elem]) -> Result<R::Elem, PolyError> {
        let ring = &self.ring;
        self.evaluate_with(
            point,
            |c| c.clone(),
            ring.zero(),
            ring.one(),
            |a, b| ring.add(&a, &b),
            |a, b| ring.mul(&a, &b),
        )
    }

    /// Evaluation in any commutative scalar type `S`, given a map from
    /// coefficients to `S` and the two ring operations.
    pub fn evaluate_with<S: Clone>(
        &self,
        point: &[S],
        coeff: impl Fn(&R::Elem) -> S,
        zero: S,
        one: S,
        add: impl Fn(S, S) -> S,
        mul: impl Fn(S, S) -> S,
    ) -> Result<S, PolyError> {
        if point.len() != self.nvars() {
            return Err(PolyError::LengthMismatch {
                expected: self.nvars(),
                got: point.len(),
            });
        }
        // Powers x_i^e are cached per variable.
        let mut powers: Vec<Vec<S>> = vec![vec![one.clone()]; point.len()];
        let mut acc = zero;
        for t in &self.terms {
            let mut v = coeff(&t.coeff);
            for (i, &e) in t.monomial.exponents().iter().enumerate() {
                if e == 0 {
                    continue;
                }
                let cache = &mut powers[i];
                while cache.len() <= e as usize {
                    let next = mul(cache.last().unwrap().clone(), point[i].clone());
                    cache.push(next);
                }
                v = mul(v, cache[e as usize].clone());
            }
            acc = add(acc, v);
        }
        Ok(acc)
    }

    /// Re-expresses the polynomial over `target`, sending variable `i` to
    /// variable `map[i]` of the target list.
    pub fn embed(&self, target: &Variables, map: &[usize]) -> Result<Self, PolyError> {
        if map.len() != self.nvars() {
            return Err(PolyError::LengthMismatch {
                expected: self.nvars(),
                got: map.len(),
            });
        }
        if let Some(&bad) = map.iter().find(|&&j| j >= target.len()) {
            return Err(PolyError::InvalidVariable {
                index: bad,
                nvars: target.len(),
            });
        }
        let raw = self
            .terms
            .iter()
            .map(|t| {
                let mut m = Monomial::one(target.len());
                for (i, &e) in t.monomial.exponents().iter().enumerate() {
                    m.exps_mut()[map[i]] += e;
                }
                m.refresh_degree();
                Term {
                    coeff: t.coeff.clone(),
                    monomial: m,
                }
            })
            .collect();
        Ok(Self::from_raw_terms(self.ring.clone(), target.clone(), raw))
    }

    /// Maps every coefficient through `f` into another ring.
    pub fn map_coefficients<S: CoeffRing>(
        &self,
        ring: S,
        f: impl Fn(&R::Elem) -> S::Elem,
    ) -> Polynomial<S> {
        let raw = self
            .terms
            .iter()
            .map(|t| Term {
                coeff: f(&t.coeff),
                monomial: t.monomial.clone(),
            })
            .collect();
        Polynomial::from_raw_terms(ring, self.vars.clone(), raw)
    }

    /// Leading coefficient made one; `None` for the zero polynomial.
    pub fn monic(&self) -> Option<Self>
    where
        R: super::ring::CoeffField,
    {
        let lc = &self.terms.first()?.coeff;
        let inv = self.ring.inv(lc)?;
        Some(self.scale(&inv))
    }
}

impl<R: CoeffRing> Add for &Polynomial<R> {
    type Output = Polynomial<R>;

    /// # Panics
    /// On mismatched rings or variables; use [`Polynomial::checked_add`].
    fn add(self, rhs: &Polynomial<R>) -> Polynomial<R> {
        self.checked_add(rhs).expect("incompatible polynomials")
    }
}

impl<R: CoeffRing> Sub for &Polynomial<R> {
    type Output = Polynomial<R>;

    fn sub(self, rhs: &Polynomial<R>) -> Polynomial<R> {
        self.checked_sub(rhs).expect("incompatible polynomials")
    }
}

impl<R: CoeffRing> Mul for &Polynomial<R> {
    type Output = Polynomial<R>;

    fn mul(self, rhs: &Polynomial<R>) -> Polynomial<R> {
        self.checked_mul(rhs).expect("incompatible polynomials")
    }
}

impl<R: CoeffRing> Neg for &Polynomial<R> {
    type Output = Polynomial<R>;

    fn neg(self) -> Polynomial<R> {
        let terms = self
            .terms
            .iter()
            .map(|t| Term {
                coeff: self.ring.neg(&t.coeff),
                monomial: t.monomial.clone(),
            })
            .collect();
        Polynomial {
            ring: self.ring.clone(),
            vars: self.vars.clone(),
            terms,
        }
    }
}

/// Canonical text: terms in storage order joined by `" + "` / `" - "`,
/// factors joined by `*`, exponents written `^e`, e.g.
/// `2*x_1_1^2*l_1 - 3/2*x_1_2 + 1`.
impl<R: CoeffRing> fmt::Display for Polynomial<R> {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.terms.is_empty() {
            return write!(f, "0");
        }
        for (idx, t) in self.terms.iter().enumerate() {
            let neg = self.ring.is_negative(&t.coeff);
            match (idx, neg) {
                (0, true) => write!(f, "-")?,
                (0, false) => {}
                (_, true) => write!(f, " - ")?,
                (_, false) => write!(f, " + ")?,
            }
            let abs = self.ring.format_abs(&t.coeff);
            let mut factors = Vec::new();
            if abs != "1" || t.monomial.is_one() {
                factors.push(abs);
            }
            for (i, &e) in t.monomial.exponents().iter().enumerate() {
                let name = &self.vars.get(i).expect("variable in range").name;
                match e {
                    0 => {}
                    1 => factors.push(name.clone()),
                    _ => factors.push(format!("{name}^{e}")),
                }
            }
            write!(f, "{}", factors.join("*"))?;
        }
        Ok(())
    }
}
