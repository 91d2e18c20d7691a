#![allow(dead_code)]

use std::path::PathBuf;
use std::process::Command;

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{One, Zero};

pub fn data(name: &str) -> String {
    PathBuf::from(env!("CARGO_MANIFEST_DIR"))
        .join("data")
        .join(name)
        .to_string_lossy()
        .into_owned()
}

pub fn golden(name: &str) -> String {
    let path = PathBuf::from(env!("CARGO_MANIFEST_DIR")).join("tests/golden").join(name);
    std::fs::read_to_string(&path).unwrap_or_else(|e| panic!("{}: {e}", path.display()))
}

/// Runs the binary; returns exit code, stdout and stderr.
pub fn run(args: &[&str]) -> (i32, String, String) {
    let out = Command::new(env!("CARGO_BIN_EXE_multideg"))
        .args(args)
        .output()
        .expect("binary runs");
    (
        out.status.code().unwrap_or(-1),
        String::from_utf8(out.stdout).unwrap(),
        String::from_utf8(out.stderr).unwrap(),
    )
}

/// Dense truncated power series in `k` variables, exponent `i` bounded by
/// `bounds[i]`, stored in mixed radix.
#[derive(Clone)]
struct Dense {
    bounds: Vec<usize>,
    c: Vec<BigRational>,
}

impl Dense {
    fn size(bounds: &[usize]) -> usize {
        bounds.iter().map(|b| b + 1).product()
    }

    fn exps(&self, mut idx: usize) -> Vec<usize> {
        let mut e = vec![0; self.bounds.len()];
        for i in (0..self.bounds.len()).rev() {
            e[i] = idx % (self.bounds[i] + 1);
            idx /= self.bounds[i] + 1;
        }
        e
    }

    fn index(&self, e: &[usize]) -> Option<usize> {
        let mut idx = 0;
        for (i, &x) in e.iter().enumerate() {
            if x > self.bounds[i] {
                return None;
            }
            idx = idx * (self.bounds[i] + 1) + x;
        }
        Some(idx)
    }

    fn one(bounds: &[usize]) -> Self {
        let mut c = vec![BigRational::zero(); Self::size(bounds)];
        c[0] = BigRational::one();
        Dense { bounds: bounds.to_vec(), c }
    }

    /// `a_0 + Σ a_i Y_i`.
    fn affine(bounds: &[usize], a0: i64, a: &[i64]) -> Self {
        let mut s = Dense { bounds: bounds.to_vec(), c: vec![BigRational::zero(); Self::size(bounds)] };
        s.c[0] = BigRational::from_integer(a0.into());
        for (i, &ai) in a.iter().enumerate() {
            let mut e = vec![0; bounds.len()];
            e[i] = 1;
            if let Some(idx) = s.index(&e) {
                s.c[idx] = BigRational::from_integer(ai.into());
            }
        }
        s
    }

    fn mul(&self, o: &Dense) -> Dense {
        let mut out = Dense { bounds: self.bounds.clone(), c: vec![BigRational::zero(); self.c.len()] };
        for (i, a) in self.c.iter().enumerate() {
            if a.is_zero() {
                continue;
            }
            let ea = self.exps(i);
            for (j, b) in o.c.iter().enumerate() {
                if b.is_zero() {
                    continue;
                }
                let e: Vec<usize> = ea.iter().zip(o.exps(j)).map(|(x, y)| x + y).collect();
                if let Some(idx) = out.index(&e) {
                    out.c[idx] += a * b;
                }
            }
        }
        out
    }

    /// `1 / (1 - L)` for `L` without constant term, as `Σ_t L^t`.
    fn geometric(bounds: &[usize], l: &[i64]) -> Dense {
        let lin = Dense::affine(bounds, 0, l);
        let top: usize = bounds.iter().sum();
        let mut acc = Dense::one(bounds);
        let mut power = Dense::one(bounds);
        for _ in 0..top {
            power = power.mul(&lin);
            for (a, b) in acc.c.iter_mut().zip(&power.c) {
                *a += b;
            }
        }
        acc
    }

    fn graded(&self, d: usize) -> Dense {
        let mut out = self.clone();
        for (i, c) in out.c.iter_mut().enumerate() {
            if self.exps(i).iter().sum::<usize>() != d {
                *c = BigRational::zero();
            }
        }
        out
    }
}

/// Count of critical points straight from the series quotient, with dense
/// rational arithmetic and no shared code with the library.
pub fn naive_degree(blocks: &[usize], degrees: &[Vec<u32>]) -> BigInt {
    let n: usize = blocks.iter().sum();
    let m = degrees.len() - 1;
    let mut num = Dense::one(blocks);
    for (i, &ni) in blocks.iter().enumerate() {
        let mut a = vec![0i64; blocks.len()];
        a[i] = -1;
        for _ in 0..ni {
            num = num.mul(&Dense::affine(blocks, 1, &a));
        }
    }
    let mut sigma = num;
    for d in degrees {
        let l: Vec<i64> = d.iter().map(|&x| x as i64).collect();
        sigma = sigma.mul(&Dense::geometric(blocks, &l));
    }
    let mut prod = sigma.graded(n - m);
    for d in &degrees[1..] {
        let l: Vec<i64> = d.iter().map(|&x| x as i64).collect();
        prod = prod.mul(&Dense::affine(blocks, 0, &l));
    }
    let top: Vec<usize> = blocks.to_vec();
    let c = &prod.c[prod.index(&top).unwrap()];
    assert!(c.is_integer());
    c.to_integer()
}

/// Multi-homogeneous Bézout number: assign every constraint to a block so
/// that block `i` receives `n_i` of them, and sum the products of the
/// chosen degrees.
pub fn multi_bezout(blocks: &[usize], constraints: &[Vec<u32>]) -> BigInt {
    fn rec(j: usize, left: &mut Vec<usize>, cons: &[Vec<u32>]) -> BigInt {
        if j == cons.len() {
            return if left.iter().all(|&l| l == 0) { BigInt::one() } else { BigInt::zero() };
        }
        let mut total = BigInt::zero();
        for i in 0..left.len() {
            if left[i] > 0 && cons[j][i] > 0 {
                left[i] -= 1;
                total += BigInt::from(cons[j][i]) * rec(j + 1, left, cons);
                left[i] += 1;
            }
        }
        total
    }
    rec(0, &mut blocks.to_vec(), constraints)
}
