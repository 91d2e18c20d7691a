//! Certification of approximate critical points.
//!
//! Given approximate solutions of the Lagrangian system from an external
//! solver, the Krawczyk operator proves that a small complex box around each
//! one holds exactly one solution. A second, real Krawczyk test on the real
//! parts decides whether that solution is real.

mod interval;

pub use interval::{ComplexBox, ComplexInterval, Interval};

use num_bigint::BigInt;
use num_complex::Complex64;
use num_rational::BigRational;
use num_traits::Zero;
use rayon::prelude::*;
use serde::Serialize;
use thiserror::Error;

use crate::polyring::{CoeffRing, Integers, Polynomial, Rationals};
use crate::systems::{lagrangian_system, CriticalSystem, ProblemInstance, SystemError};

pub const DEFAULT_RADIUS: f64 = 1e-4;
/// Radii tried in turn when the default one is inconclusive: a larger box
/// for rough approximations, then smaller ones for ill-conditioned zeros.
pub const RETRY_RADII: [f64; 3] = [1e-2, 1e-6, 1e-8];
const REFINE_STEPS: usize = 16;

#[derive(Debug, Error, Clone, PartialEq)]
pub enum CertifyError {
    #[error(transparent)]
    System(#[from] SystemError),
    #[error("point has {got} coordinates, system has {expected} unknowns")]
    DimensionMismatch { expected: usize, got: usize },
    #[error("system is not square: {equations} equations in {unknowns} unknowns")]
    NotSquare { equations: usize, unknowns: usize },
    #[error("radius must be positive and finite, got {0}")]
    BadRadius(f64),
    #[error("reality test needs real coefficients")]
    NonRealCoefficients,
    #[error("no certified real critical point")]
    NoRealPoint,
}

/// Coefficient rings that embed in ℝ exactly.
pub trait RealCoefficients: CoeffRing {
    fn to_rational(&self, a: &Self::Elem) -> BigRational;
}

impl RealCoefficients for Integers {
    fn to_rational(&self, a: &BigInt) -> BigRational {
        BigRational::from_integer(a.clone())
    }
}

impl RealCoefficients for Rationals {
    fn to_rational(&self, a: &BigRational) -> BigRational {
        a.clone()
    }
}

/// Polynomial with complex-interval coefficients.
#[derive(Clone, Debug)]
pub struct IntervalPoly {
    terms: Vec<(ComplexInterval, Vec<u32>)>,
}

impl IntervalPoly {
    pub fn from_exact<R: RealCoefficients>(f: &Polynomial<R>) -> Self {
        let ring = f.ring();
        IntervalPoly {
            terms: f
                .terms()
                .iter()
                .map(|t| {
                    let c = Interval::from_rational(&ring.to_rational(&t.coeff));
                    let e = t.monomial.exponents().iter().map(|&e| e as u32).collect();
                    (ComplexInterval::real(c), e)
                })
                .collect(),
        }
    }

    pub fn from_complex(terms: Vec<(Complex64, Vec<u32>)>) -> Self {
        IntervalPoly {
            terms: terms
                .into_iter()
                .map(|(c, e)| (ComplexInterval::point(c), e))
                .collect(),
        }
    }

    fn is_real(&self) -> bool {
        self.terms.iter().all(|(c, _)| c.im.lo() == 0.0 && c.im.hi() == 0.0)
    }

    fn nvars(&self) -> usize {
        self.terms.iter().map(|(_, e)| e.len()).max().unwrap_or(0)
    }

    pub fn partial_derivative(&self, index: usize) -> IntervalPoly {
        let terms = self
            .terms
            .iter()
            .filter(|(_, e)| e.get(index).is_some_and(|&k| k > 0))
            .map(|(c, e)| {
                let mut e = e.clone();
                let k = e[index];
                e[index] -= 1;
                (*c * ComplexInterval::real(Interval::point(k as f64)), e)
            })
            .collect();
        IntervalPoly { terms }
    }

    /// Enclosure of the values over `point`, which may be longer than the
    /// exponent vectors.
    pub fn evaluate(&self, point: &[ComplexInterval]) -> ComplexInterval {
        let mut acc = ComplexInterval::ZERO;
        for (c, e) in &self.terms {
            let mut t = *c;
            for (x, &k) in point.iter().zip(e) {
                for _ in 0..k {
                    t = t * *x;
                }
            }
            acc = acc + t;
        }
        acc
    }

    pub fn evaluate_point(&self, point: &[Complex64]) -> Complex64 {
        let mut acc = Complex64::zero();
        for (c, e) in &self.terms {
            let mut t = c.mid();
            for (x, &k) in point.iter().zip(e) {
                t *= x.powu(k);
            }
            acc += t;
        }
        acc
    }
}

/// Square system together with its Jacobian and the objective, ready for
/// interval evaluation.
#[derive(Clone, Debug)]
pub struct IntervalSystem {
    equations: Vec<IntervalPoly>,
    jacobian: Vec<Vec<IntervalPoly>>,
    objective: IntervalPoly,
    real: bool,
}

impl IntervalSystem {
    pub fn new(equations: Vec<IntervalPoly>, objective: IntervalPoly) -> Result<Self, CertifyError> {
        let unknowns = equations.iter().map(IntervalPoly::nvars).max().unwrap_or(0);
        if equations.len() < unknowns || equations.is_empty() {
            return Err(CertifyError::NotSquare {
                equations: equations.len(),
                unknowns,
            });
        }
        let dim = equations.len();
        let jacobian = equations
            .iter()
            .map(|f| (0..dim).map(|j| f.partial_derivative(j)).collect())
            .collect();
        let real = equations.iter().all(IntervalPoly::is_real) && objective.is_real();
        Ok(IntervalSystem {
            equations,
            jacobian,
            objective,
            real,
        })
    }

    pub fn from_critical<R: RealCoefficients>(
        system: &CriticalSystem<R>,
        objective: &Polynomial<R>,
    ) -> Result<Self, CertifyError> {
        if !system.is_square() {
            return Err(CertifyError::NotSquare {
                equations: system.equations.len(),
                unknowns: system.unknowns.len(),
            });
        }
        Self::new(
            system.equations.iter().map(IntervalPoly::from_exact).collect(),
            IntervalPoly::from_exact(objective),
        )
    }

    /// Lagrangian system of the instance.
    pub fn lagrangian<R: RealCoefficients>(inst: &ProblemInstance<R>) -> Result<Self, CertifyError> {
        Self::from_critical(&lagrangian_system(inst)?, inst.objective())
    }

    pub fn dim(&self) -> usize {
        self.equations.len()
    }

    pub fn has_real_coefficients(&self) -> bool {
        self.real
    }

    pub fn evaluate(&self, b: &ComplexBox) -> Vec<ComplexInterval> {
        self.equations.iter().map(|f| f.evaluate(&b.0)).collect()
    }

    pub fn objective(&self, b: &ComplexBox) -> ComplexInterval {
        self.objective.evaluate(&b.0)
    }

    fn jacobian_over(&self, b: &[ComplexInterval]) -> Vec<Vec<ComplexInterval>> {
        self.jacobian
            .iter()
            .map(|row| row.iter().map(|f| f.evaluate(b)).collect())
            .collect()
    }

    fn jacobian_at(&self, p: &[Complex64]) -> Vec<Vec<Complex64>> {
        self.jacobian
            .iter()
            .map(|row| row.iter().map(|f| f.evaluate_point(p)).collect())
            .collect()
    }

    fn check_dim(&self, got: usize) -> Result<(), CertifyError> {
        if got != self.dim() {
            return Err(CertifyError::DimensionMismatch {
                expected: self.dim(),
                got,
            });
        }
        Ok(())
    }
}

/// Inverse by Gaussian elimination with partial pivoting; `None` when a
/// pivot vanishes or the result is not finite.
fn invert(mut a: Vec<Vec<Complex64>>) -> Option<Vec<Vec<Complex64>>> {
    let n = a.len();
    let mut inv: Vec<Vec<Complex64>> = (0..n)
        .map(|i| {
            (0..n)
                .map(|j| if i == j { Complex64::new(1.0, 0.0) } else { Complex64::zero() })
                .collect()
        })
        .collect();
    for col in 0..n {
        let pivot = (col..n).max_by(|&i, &j| a[i][col].norm().total_cmp(&a[j][col].norm()))?;
        if a[pivot][col].norm() == 0.0 || !a[pivot][col].norm().is_finite() {
            return None;
        }
        a.swap(col, pivot);
        inv.swap(col, pivot);
        let p = a[col][col];
        for j in 0..n {
            a[col][j] /= p;
            inv[col][j] /= p;
        }
        for i in 0..n {
            if i != col {
                let factor = a[i][col];
                if factor != Complex64::zero() {
                    for j in 0..n {
                        let (acj, icj) = (a[col][j], inv[col][j]);
                        a[i][j] -= factor * acj;
                        inv[i][j] -= factor * icj;
                    }
                }
            }
        }
    }
    inv.iter().flatten().all(|z| z.is_finite()).then_some(inv)
}

/// `K(X) = y - Y F(y) + (I - Y J(X)) (X - y)` for the complex system.
fn krawczyk_image(
    system: &IntervalSystem,
    x: &[ComplexInterval],
    y: &[Complex64],
    inv: &[Vec<Complex64>],
) -> Vec<ComplexInterval> {
    let n = y.len();
    let y_iv: Vec<ComplexInterval> = y.iter().map(|&z| ComplexInterval::point(z)).collect();
    let fy: Vec<ComplexInterval> = system.equations.iter().map(|f| f.evaluate(&y_iv)).collect();
    let jx = system.jacobian_over(x);
    let yy: Vec<Vec<ComplexInterval>> = inv
        .iter()
        .map(|row| row.iter().map(|&z| ComplexInterval::point(z)).collect())
        .collect();
    let dx: Vec<ComplexInterval> = x.iter().zip(&y_iv).map(|(a, b)| *a - *b).collect();
    (0..n)
        .map(|i| {
            let mut k = y_iv[i];
            for l in 0..n {
                k = k - yy[i][l] * fy[l];
            }
            for j in 0..n {
                let mut m = if i == j {
                    ComplexInterval::point(Complex64::new(1.0, 0.0))
                } else {
                    ComplexInterval::ZERO
                };
                for l in 0..n {
                    m = m - yy[i][l] * jx[l][j];
                }
                k = k + m * dx[j];
            }
            k
        })
        .collect()
}

/// Real-arithmetic Krawczyk operator; only the real parts of the
/// enclosures are used.
fn real_krawczyk_image(
    system: &IntervalSystem,
    x: &[Interval],
    y: &[f64],
    inv: &[Vec<f64>],
) -> Vec<Interval> {
    let n = y.len();
    let y_iv: Vec<ComplexInterval> = y.iter().map(|&v| ComplexInterval::real(Interval::point(v))).collect();
    let x_iv: Vec<ComplexInterval> = x.iter().map(|&v| ComplexInterval::real(v)).collect();
    let fy: Vec<Interval> = system.equations.iter().map(|f| f.evaluate(&y_iv).re).collect();
    let jx: Vec<Vec<Interval>> = system
        .jacobian_over(&x_iv)
        .into_iter()
        .map(|row| row.into_iter().map(|z| z.re).collect())
        .collect();
    (0..n)
        .map(|i| {
            let mut k = Interval::point(y[i]);
            for l in 0..n {
                k = k - Interval::point(inv[i][l]) * fy[l];
            }
            for j in 0..n {
                let mut m = Interval::point(if i == j { 1.0 } else { 0.0 });
                for l in 0..n {
                    m = m - Interval::point(inv[i][l]) * jx[l][j];
                }
                k = k + m * (x[j] - Interval::point(y[j]));
            }
            k
        })
        .collect()
}

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct CertificateBox {
    /// Box on which the Krawczyk inclusion was checked.
    #[serde(rename = "box")]
    pub region: ComplexBox,
    /// Tighter enclosure of the same zero, from iterating `K(X) ∩ X`.
    pub refined: ComplexBox,
    pub certified_unique: bool,
    pub certified_real: bool,
    #[serde(serialize_with = "serialize_points")]
    pub approximate_point: Vec<Complex64>,
    /// Real part of `f_0` over the box and the approximate point.
    pub objective_enclosure: Interval,
}

fn serialize_points<S: serde::Serializer>(p: &[Complex64], s: S) -> Result<S::Ok, S::Error> {
    s.collect_seq(p.iter().map(|z| [z.re, z.im]))
}

/// Krawczyk test on the box of half-width `radius` around `approx`.
/// Inconclusive outcomes give `certified_unique == false`.
pub fn krawczyk_test(
    system: &IntervalSystem,
    approx: &[Complex64],
    radius: f64,
) -> Result<CertificateBox, CertifyError> {
    system.check_dim(approx.len())?;
    if !(radius > 0.0 && radius.is_finite()) {
        return Err(CertifyError::BadRadius(radius));
    }
    let initial = ComplexBox::around(approx, radius);
    let inv = system.jacobian_at(approx);
    let mut cert = CertificateBox {
        region: initial.clone(),
        refined: initial.clone(),
        certified_unique: false,
        certified_real: false,
        approximate_point: approx.to_vec(),
        objective_enclosure: Interval::ENTIRE,
    };
    let finish = |mut cert: CertificateBox| {
        let hull = ComplexBox(
            cert.refined
                .0
                .iter()
                .zip(&cert.approximate_point)
                .map(|(b, &z)| b.hull_point(z))
                .collect(),
        );
        cert.objective_enclosure = system.objective(&hull).re;
        cert
    };
    let Some(inv) = invert(inv) else {
        return Ok(finish(cert));
    };
    if approx.iter().any(|z| !z.is_finite()) {
        return Ok(finish(cert));
    }
    let k = krawczyk_image(system, &initial.0, approx, &inv);
    if !k.iter().zip(&initial.0).all(|(a, b)| a.strictly_inside(b)) {
        return Ok(finish(cert));
    }
    cert.certified_unique = true;
    // K(X) ∩ X still holds the unique zero; iterate to tighten
    let mut region: Vec<ComplexInterval> = k
        .iter()
        .zip(&initial.0)
        .map(|(a, b)| a.intersection(b).expect("K(X) inside X"))
        .collect();
    for _ in 0..REFINE_STEPS {
        let mid: Vec<Complex64> = region.iter().map(ComplexInterval::mid).collect();
        let next = krawczyk_image(system, &region, &mid, &inv);
        let Some(next): Option<Vec<ComplexInterval>> =
            next.iter().zip(&region).map(|(a, b)| a.intersection(b)).collect()
        else {
            break;
        };
        let shrunk = ComplexBox(next.clone()).width() < 0.5 * ComplexBox(region.clone()).width();
        region = next;
        if !shrunk {
            break;
        }
    }
    cert.refined = ComplexBox(region);
    let mut cert = finish(cert);
    cert.certified_real = system.has_real_coefficients() && reality_test(&cert, system)?;
    Ok(cert)
}

/// Whether the unique zero of a certified box is real. The real parts of
/// the box lie inside it, so a real zero found there is the unique one.
pub fn reality_test(cert: &CertificateBox, system: &IntervalSystem) -> Result<bool, CertifyError> {
    if !system.has_real_coefficients() {
        return Err(CertifyError::NonRealCoefficients);
    }
    system.check_dim(cert.region.dim())?;
    if !cert.certified_unique || !cert.refined.0.iter().all(|z| z.im.contains(0.0)) {
        return Ok(false);
    }
    let x: Vec<Interval> = cert.region.0.iter().map(|z| z.re).collect();
    let y: Vec<f64> = x.iter().map(Interval::mid).collect();
    let yc: Vec<Complex64> = y.iter().map(|&v| Complex64::new(v, 0.0)).collect();
    let Some(inv) = invert(system.jacobian_at(&yc)) else {
        return Ok(false);
    };
    let inv: Vec<Vec<f64>> = inv.iter().map(|row| row.iter().map(|z| z.re).collect()).collect();
    let k = real_krawczyk_image(system, &x, &y, &inv);
    Ok(k.iter().zip(&x).all(|(a, b)| a.strictly_inside(b)))
}

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct PointOutcome {
    pub certificate: CertificateBox,
    /// Radius at which the test was last run.
    pub radius: f64,
    /// Index of an earlier point whose certified box overlaps this one.
    pub duplicate_of: Option<usize>,
}

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct BatchReport {
    pub distinct_certified: usize,
    pub real_certified: usize,
    pub outcomes: Vec<PointOutcome>,
    pub warnings: Vec<String>,
}

impl BatchReport {
    /// Certified points counted once each, in input order.
    pub fn representatives(&self) -> impl Iterator<Item = (usize, &CertificateBox)> {
        self.outcomes
            .iter()
            .enumerate()
            .filter(|(_, o)| o.certificate.certified_unique && o.duplicate_of.is_none())
            .map(|(i, o)| (i, &o.certificate))
    }
}

/// Certifies every point in parallel, trying the `retry` radii in order
/// while the test is inconclusive, then merges overlapping certified boxes.
pub fn certify_batch(
    system: &IntervalSystem,
    points: &[Vec<Complex64>],
    radius: f64,
    retry: &[f64],
) -> Result<BatchReport, CertifyError> {
    for p in points {
        system.check_dim(p.len())?;
    }
    let outcomes: Vec<PointOutcome> = points
        .par_iter()
        .map(|p| {
            let mut used = radius;
            let mut cert = krawczyk_test(system, p, radius)?;
            for &r in retry {
                if cert.certified_unique {
                    break;
                }
                used = r;
                cert = krawczyk_test(system, p, r)?;
            }
            Ok(PointOutcome {
                certificate: cert,
                radius: used,
                duplicate_of: None,
            })
        })
        .collect::<Result<_, CertifyError>>()?;

    let mut parent: Vec<usize> = (0..outcomes.len()).collect();
    fn find(parent: &mut [usize], i: usize) -> usize {
        let mut r = i;
        while parent[r] != r {
            r = parent[r];
        }
        parent[i] = r;
        r
    }
    let certified: Vec<usize> = (0..outcomes.len())
        .filter(|&i| outcomes[i].certificate.certified_unique)
        .collect();
    for (a, &i) in certified.iter().enumerate() {
        for &j in &certified[a + 1..] {
            if outcomes[i].certificate.refined.intersects(&outcomes[j].certificate.refined) {
                let (ri, rj) = (find(&mut parent, i), find(&mut parent, j));
                if ri != rj {
                    parent[ri.max(rj)] = ri.min(rj);
                }
            }
        }
    }
    let mut outcomes = outcomes;
    let mut warnings = Vec::new();
    for &i in &certified {
        let root = find(&mut parent, i);
        if root != i {
            outcomes[i].duplicate_of = Some(root);
            warnings.push(format!("point {i} overlaps the certified box of point {root}; counted once"));
        }
    }
    let mut report = BatchReport {
        distinct_certified: 0,
        real_certified: 0,
        outcomes,
        warnings,
    };
    report.distinct_certified = report.representatives().count();
    report.real_certified = report.representatives().filter(|(_, c)| c.certified_real).count();
    Ok(report)
}

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct MinimumReport {
    pub min_value: Interval,
    pub index: usize,
    pub argmin: CertificateBox,
}

/// Certified-real box with the smallest objective upper bound; ties go to
/// the smaller lower bound, then to the earlier point.
pub fn certified_minimum(report: &BatchReport) -> Result<MinimumReport, CertifyError> {
    report
        .representatives()
        .filter(|(_, c)| c.certified_real)
        .min_by(|(i, a), (j, b)| {
            let (x, y) = (a.objective_enclosure, b.objective_enclosure);
            x.hi().total_cmp(&y.hi()).then(x.lo().total_cmp(&y.lo())).then(i.cmp(j))
        })
        .map(|(index, c)| MinimumReport {
            min_value: c.objective_enclosure,
            index,
            argmin: c.clone(),
        })
        .ok_or(CertifyError::NoRealPoint)
}

#[cfg(test)]
mod tests;
