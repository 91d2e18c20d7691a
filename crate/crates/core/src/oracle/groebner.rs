//! Buchberger's algorithm over a prime field, degrevlex order.
//!
//! Pairs are processed by the normal strategy (smallest lcm first) and
//! pruned with the Gebauer–Möller criteria. Reductions accumulate into a
//! hash map keyed by monomial with a max-heap of pending monomials, so the
//! cost is proportional to the number of terms touched rather than to the
//! length of the intermediate polynomial at every step.

use std::cmp::Reverse;
use std::collections::hash_map::Entry;
use std::collections::{BinaryHeap, HashMap};

use crate::polyring::{CoeffField, CoeffRing, Monomial, Polynomial, PrimeField, Term};

use super::OracleError;

/// Reduced Gröbner basis for degrevlex, generators sorted by decreasing
/// leading monomial, each monic.
#[derive(Clone, Debug, PartialEq)]
pub struct GroebnerBasis {
    generators: Vec<Polynomial<PrimeField>>,
}

impl GroebnerBasis {
    pub fn generators(&self) -> &[Polynomial<PrimeField>] {
        &self.generators
    }

    pub fn leading_monomials(&self) -> Vec<&Monomial> {
        self.generators
            .iter()
            .map(|g| &g.leading_term().expect("nonzero generator").monomial)
            .collect()
    }

    /// True when the ideal is the whole ring.
    pub fn is_unit(&self) -> bool {
        self.generators.len() == 1 && self.generators[0].is_constant()
    }

    /// Normal form of `f` modulo the basis.
    pub fn reduce(&self, f: &Polynomial<PrimeField>) -> Polynomial<PrimeField> {
        let refs: Vec<&Polynomial<PrimeField>> = self.generators.iter().collect();
        normal_form(f, &refs)
    }

    /// Buchberger's criterion: every S-polynomial reduces to zero.
    pub fn is_groebner(&self) -> bool {
        let g = &self.generators;
        let refs: Vec<&Polynomial<PrimeField>> = g.iter().collect();
        (0..g.len()).all(|i| (i + 1..g.len()).all(|j| normal_form(&s_polynomial(&g[i], &g[j]), &refs).is_zero()))
    }

    /// No leading monomial divides any monomial of another generator, and
    /// every leading coefficient is one.
    pub fn is_reduced(&self) -> bool {
        let lms = self.leading_monomials();
        self.generators.iter().enumerate().all(|(i, g)| {
            g.leading_term().is_some_and(|t| t.coeff == 1)
                && lms.iter().enumerate().all(|(j, lm)| {
                    i == j || g.terms().iter().all(|t| !lm.divides(&t.monomial))
                })
        })
    }
}

fn leading(f: &Polynomial<PrimeField>) -> &Monomial {
    &f.leading_term().expect("nonzero polynomial").monomial
}

fn s_polynomial(f: &Polynomial<PrimeField>, g: &Polynomial<PrimeField>) -> Polynomial<PrimeField> {
    let field = *f.ring();
    let (lf, lg) = (f.leading_term().unwrap(), g.leading_term().unwrap());
    let lcm = lf.monomial.lcm(&lg.monomial);
    let mf = lf.monomial.quotient_of(&lcm).unwrap();
    let mg = lg.monomial.quotient_of(&lcm).unwrap();
    let cf = field.inv(&lf.coeff).unwrap();
    let cg = field.inv(&lg.coeff).unwrap();
    f.mul_monomial(&mf).scale(&cf).sub_scaled(&cg, &mg, g)
}

/// Full reduction of `f` by `divisors` (all nonzero).
fn normal_form(
    f: &Polynomial<PrimeField>,
    divisors: &[&Polynomial<PrimeField>],
) -> Polynomial<PrimeField> {
    let field = *f.ring();
    let lead_inv: Vec<u64> = divisors
        .iter()
        .map(|g| field.inv(&g.leading_term().unwrap().coeff).unwrap())
        .collect();
    let mut acc: HashMap<Monomial, u64> = HashMap::with_capacity(f.len() * 4);
    let mut heap: BinaryHeap<Monomial> = BinaryHeap::with_capacity(f.len() * 4);
    for t in f.terms() {
        acc.insert(t.monomial.clone(), t.coeff);
        heap.push(t.monomial.clone());
    }
    let mut remainder: Vec<Term<u64>> = Vec::new();
    while let Some(m) = heap.pop() {
        // duplicates of a monomial may sit in the heap
        while heap.peek() == Some(&m) {
            heap.pop();
        }
        let Some(c) = acc.remove(&m) else { continue };
        if c == 0 {
            continue;
        }
        let found = divisors
            .iter()
            .enumerate()
            .find_map(|(i, g)| leading(g).quotient_of(&m).map(|q| (i, q)));
        match found {
            Some((i, q)) => {
                let factor = field.mul(&c, &lead_inv[i]);
                for t in &divisors[i].terms()[1..] {
                    let mono = t.monomial.mul(&q);
                    let delta = field.neg(&field.mul(&factor, &t.coeff));
                    match acc.entry(mono) {
                        Entry::Occupied(mut o) => {
                            let v = field.add(o.get(), &delta);
                            *o.get_mut() = v;
                        }
                        Entry::Vacant(v) => {
                            heap.push(v.key().clone());
                            v.insert(delta);
                        }
                    }
                }
            }
            None => remainder.push(Term { coeff: c, monomial: m }),
        }
    }
    Polynomial::from_sorted_terms(field, f.variables().clone(), remainder)
}

#[derive(Clone, Debug, PartialEq, Eq)]
struct Pair {
    lcm: Monomial,
    i: usize,
    j: usize,
}

impl Ord for Pair {
    fn cmp(&self, other: &Self) -> std::cmp::Ordering {
        self.lcm
            .cmp(&other.lcm)
            .then(self.i.cmp(&other.i))
            .then(self.j.cmp(&other.j))
    }
}

impl PartialOrd for Pair {
    fn partial_cmp(&self, other: &Self) -> Option<std::cmp::Ordering> {
        Some(self.cmp(other))
    }
}

struct State {
    polys: Vec<Polynomial<PrimeField>>,
    active: Vec<bool>,
    pairs: Vec<Pair>,
}

impl State {
    fn lm(&self, i: usize) -> &Monomial {
        leading(&self.polys[i])
    }

    /// Gebauer–Möller update with the new polynomial at index `h`.
    fn update(&mut self, h: usize) {
        let lm_h = self.lm(h).clone();
        let mut candidates: Vec<(usize, Monomial)> = (0..h)
            .filter(|&g| self.active[g])
            .map(|g| (g, lm_h.lcm(self.lm(g))))
            .collect();

        // Chain criterion among the new pairs: drop (h, g1) if another new
        // pair's lcm properly divides it; keep one representative of equal
        // lcms, preferring a coprime pair (which is then dropped below).
        let mut kept: Vec<(usize, Monomial)> = Vec::new();
        while let Some((g1, lcm1)) = candidates.pop() {
            let coprime = lm_h.is_coprime(self.lm(g1));
            let dominated = candidates
                .iter()
                .chain(kept.iter())
                .any(|(_, l)| l.divides(&lcm1));
            if coprime || !dominated {
                kept.push((g1, lcm1));
            }
        }
        // Among equal lcms keep only one; a coprime one anywhere in the
        // class means the whole class is unnecessary.
        kept.sort_by(|a, b| a.1.cmp(&b.1).then(a.0.cmp(&b.0)));
        let mut new_pairs = Vec::new();
        let mut idx = 0;
        while idx < kept.len() {
            let mut end = idx + 1;
            while end < kept.len() && kept[end].1 == kept[idx].1 {
                end += 1;
            }
            let class = &kept[idx..end];
            if !class.iter().any(|(g, _)| lm_h.is_coprime(self.lm(*g))) {
                let (g, ref lcm) = class[0];
                new_pairs.push(Pair {
                    lcm: lcm.clone(),
                    i: g,
                    j: h,
                });
            }
            idx = end;
        }

        // Old pairs (g1, g2) become redundant when lm(h) divides their lcm
        // and both lcm(g1, h) and lcm(g2, h) differ from it.
        let old = std::mem::take(&mut self.pairs);
        self.pairs = old
            .into_iter()
            .filter(|p| {
                !(lm_h.divides(&p.lcm)
                    && lm_h.lcm(self.lm(p.i)) != p.lcm
                    && lm_h.lcm(self.lm(p.j)) != p.lcm)
            })
            .collect();
        self.pairs.extend(new_pairs);

        for g in 0..h {
            if self.active[g] && lm_h.divides(self.lm(g)) {
                self.active[g] = false;
            }
        }
    }

    fn active_refs(&self) -> Vec<&Polynomial<PrimeField>> {
        self.polys
            .iter()
            .zip(&self.active)
            .filter(|(_, &a)| a)
            .map(|(p, _)| p)
            .collect()
    }

    fn push(&mut self, p: Polynomial<PrimeField>) {
        let p = p.monic().expect("nonzero polynomial");
        self.polys.push(p);
        self.active.push(true);
        self.update(self.polys.len() - 1);
    }
}

/// Reduced degrevlex Gröbner basis of the ideal generated by `gens`.
pub fn buchberger(gens: &[Polynomial<PrimeField>]) -> Result<GroebnerBasis, OracleError> {
    let Some(first) = gens.first() else {
        return Err(OracleError::NoGenerators);
    };
    let field = *first.ring();
    let vars = first.variables().clone();
    if gens.iter().any(|g| g.ring() != &field || g.variables() != &vars) {
        return Err(OracleError::MixedGenerators);
    }
    let mut state = State {
        polys: Vec::new(),
        active: Vec::new(),
        pairs: Vec::new(),
    };
    // inter-reduce the input first so the pair set starts small
    let mut input: Vec<_> = gens.iter().filter(|g| !g.is_zero()).cloned().collect();
    input.sort_by(|a, b| leading(a).cmp(leading(b)));
    for g in input {
        let r = normal_form(&g, &state.active_refs());
        if !r.is_zero() {
            if r.is_constant() {
                return Ok(unit_basis(field, vars));
            }
            state.push(r);
        }
    }

    let mut heap: BinaryHeap<Reverse<Pair>> = BinaryHeap::new();
    loop {
        heap.extend(state.pairs.drain(..).map(Reverse));
        let Some(Reverse(pair)) = heap.pop() else { break };
        let s = s_polynomial(&state.polys[pair.i], &state.polys[pair.j]);
        let r = normal_form(&s, &state.active_refs());
        if r.is_zero() {
            continue;
        }
        if r.is_constant() {
            return Ok(unit_basis(field, vars));
        }
        let h = state.polys.len();
        state.push(r);
        // apply the Gebauer–Möller pruning of old pairs to the heap as well
        let lm_h = state.lm(h).clone();
        let old: Vec<Pair> = heap.drain().map(|Reverse(p)| p).collect();
        heap.extend(
            old.into_iter()
                .filter(|p| {
                    !(lm_h.divides(&p.lcm)
                        && lm_h.lcm(state.lm(p.i)) != p.lcm
                        && lm_h.lcm(state.lm(p.j)) != p.lcm)
                })
                .map(Reverse),
        );
    }

    Ok(interreduce(&state))
}

fn unit_basis(field: PrimeField, vars: crate::polyring::Variables) -> GroebnerBasis {
    GroebnerBasis {
        generators: vec![Polynomial::one(field, vars)],
    }
}

fn interreduce(state: &State) -> GroebnerBasis {
    let minimal: Vec<&Polynomial<PrimeField>> = state.active_refs();
    let mut generators: Vec<Polynomial<PrimeField>> = minimal
        .iter()
        .enumerate()
        .map(|(i, g)| {
            let others: Vec<&Polynomial<PrimeField>> = minimal
                .iter()
                .enumerate()
                .filter(|(j, _)| *j != i)
                .map(|(_, p)| *p)
                .collect();
            let lt = g.leading_term().unwrap().clone();
            let lead = Polynomial::from_sorted_terms(*g.ring(), g.variables().clone(), vec![lt]);
            let tail = &(*g).clone() - &lead;
            let reduced_tail = normal_form(&tail, &others);
            (&lead + &reduced_tail).monic().unwrap()
        })
        .collect();
    generators.sort_by(|a, b| leading(b).cmp(leading(a)));
    GroebnerBasis { generators }
}
