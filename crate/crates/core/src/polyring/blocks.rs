use std::fmt;
use std::ops::Add;
use std::str::FromStr;
use std::sync::Arc;

use serde::{Deserialize, Serialize};

use super::PolyError;

/// What role a variable plays in the ambient variable list.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub enum VarKind {
    /// Variable `x_{block,pos}`; `pos == 0` is the homogenizing coordinate.
    Block { block: usize, pos: usize },
    /// Lagrange multiplier λ_j, 1-based.
    Multiplier(usize),
    Free,
}

#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct Variable {
    pub name: String,
    pub kind: VarKind,
}

/// Shared, immutable ordered list of variables.
#[derive(Clone, Debug)]
pub struct Variables(Arc<[Variable]>);

impl PartialEq for Variables {
    fn eq(&self, other: &Self) -> bool {
        Arc::ptr_eq(&self.0, &other.0) || self.0 == other.0
    }
}

impl Eq for Variables {}

impl Variables {
    pub fn new(vars: Vec<Variable>) -> Self {
        Variables(vars.into())
    }

    /// Variables of kind [`VarKind::Free`] with the given names.
    pub fn free<S: Into<String>>(names: impl IntoIterator<Item = S>) -> Self {
        Variables::new(
            names
                .into_iter()
                .map(|n| Variable {
                    name: n.into(),
                    kind: VarKind::Free,
                })
                .collect(),
        )
    }

    pub fn len(&self) -> usize {
        self.0.len()
    }

    pub fn is_empty(&self) -> bool {
        self.0.is_empty()
    }

    pub fn get(&self, i: usize) -> Option<&Variable> {
        self.0.get(i)
    }

    pub fn iter(&self) -> impl Iterator<Item = &Variable> {
        self.0.iter()
    }

    pub fn names(&self) -> impl Iterator<Item = &str> {
        self.0.iter().map(|v| v.name.as_str())
    }

    pub fn position(&self, kind: VarKind) -> Option<usize> {
        self.0.iter().position(|v| v.kind == kind)
    }

    /// A new list with `extra` appended.
    pub fn extended(&self, extra: impl IntoIterator<Item = Variable>) -> Self {
        let mut v: Vec<Variable> = self.0.to_vec();
        v.extend(extra);
        Variables::new(v)
    }
}

/// Partition of the `n` affine variables into `k` consecutive blocks.
///
/// Affine layout: block 1 variables first, then block 2, ... Homogeneous
/// layout: every block is preceded by its homogenizing variable `x_{i,0}`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct BlockStructure {
    sizes: Vec<usize>,
    affine: Variables,
    homogeneous: Variables,
}

impl BlockStructure {
    /// Blocks with default names `x_i_j` (both indices 1-based).
    pub fn new(sizes: Vec<usize>) -> Result<Self, PolyError> {
        let names = sizes
            .iter()
            .enumerate()
            .map(|(i, &s)| (1..=s).map(|j| format!("x_{}_{}", i + 1, j)).collect())
            .collect();
        Self::with_names(sizes, names)
    }

    pub fn with_names(sizes: Vec<usize>, names: Vec<Vec<String>>) -> Result<Self, PolyError> {
        if sizes.is_empty() || sizes.contains(&0) {
            return Err(PolyError::InvalidBlocks(format!(
                "need at least one block and every block size >= 1, got {sizes:?}"
            )));
        }
        if names.len() != sizes.len() || names.iter().zip(&sizes).any(|(n, &s)| n.len() != s) {
            return Err(PolyError::InvalidBlocks(
                "variable names do not match the block sizes".into(),
            ));
        }
        let mut affine = Vec::new();
        let mut homogeneous = Vec::new();
        for (i, block) in names.iter().enumerate() {
            homogeneous.push(Variable {
                name: format!("x_{}_0", i + 1),
                kind: VarKind::Block { block: i, pos: 0 },
            });
            for (j, name) in block.iter().enumerate() {
                let v = Variable {
                    name: name.clone(),
                    kind: VarKind::Block { block: i, pos: j + 1 },
                };
                affine.push(v.clone());
                homogeneous.push(v);
            }
        }
        let mut seen = std::collections::HashSet::new();
        if let Some(dup) = homogeneous.iter().find(|v| !seen.insert(v.name.as_str())) {
            return Err(PolyError::InvalidBlocks(format!(
                "duplicate variable name {}",
                dup.name
            )));
        }
        Ok(BlockStructure {
            sizes,
            affine: Variables::new(affine),
            homogeneous: Variables::new(homogeneous),
        })
    }

    pub fn sizes(&self) -> &[usize] {
        &self.sizes
    }

    /// Number of blocks.
    pub fn k(&self) -> usize {
        self.sizes.len()
    }

    /// Total number of affine variables.
    pub fn n(&self) -> usize {
        self.sizes.iter().sum()
    }

    pub fn affine_variables(&self) -> &Variables {
        &self.affine
    }

    pub fn homogeneous_variables(&self) -> &Variables {
        &self.homogeneous
    }

    pub fn names(&self) -> Vec<Vec<String>> {
        let mut out = vec![Vec::new(); self.k()];
        for v in self.affine.iter() {
            if let VarKind::Block { block, .. } = v.kind {
                out[block].push(v.name.clone());
            }
        }
        out
    }

    /// Index of `x_{block,pos}` (`pos >= 1`) in the affine layout.
    pub fn affine_index(&self, block: usize, pos: usize) -> usize {
        assert!(block < self.k() && (1..=self.sizes[block]).contains(&pos));
        self.sizes[..block].iter().sum::<usize>() + pos - 1
    }

    /// Index of `x_{block,pos}` (`pos >= 0`) in the homogeneous layout.
    pub fn homogeneous_index(&self, block: usize, pos: usize) -> usize {
        assert!(block < self.k() && pos <= self.sizes[block]);
        self.sizes[..block].iter().map(|s| s + 1).sum::<usize>() + pos
    }

    /// `(block, pos)` of an affine index; inverse of [`Self::affine_index`].
    pub fn locate(&self, index: usize) -> Option<(usize, usize)> {
        match self.affine.get(index)?.kind {
            VarKind::Block { block, pos } => Some((block, pos)),
            _ => None,
        }
    }
}

/// Per-block degree vector.
#[derive(Clone, Debug, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize, Deserialize)]
#[serde(transparent)]
pub struct MultiDegree(Vec<u32>);

impl MultiDegree {
    pub fn new(entries: Vec<u32>) -> Self {
        MultiDegree(entries)
    }

    pub fn zeros(k: usize) -> Self {
        MultiDegree(vec![0; k])
    }

    /// The standard basis vector `e_i`.
    pub fn unit(k: usize, i: usize) -> Self {
        let mut v = vec![0; k];
        v[i] = 1;
        MultiDegree(v)
    }

    pub fn k(&self) -> usize {
        self.0.len()
    }

    pub fn entries(&self) -> &[u32] {
        &self.0
    }

    pub fn total(&self) -> u64 {
        self.0.iter().map(|&d| d as u64).sum()
    }

    pub fn is_positive(&self) -> bool {
        self.0.iter().all(|&d| d >= 1)
    }

    /// The same vector with its entries permuted: slot `i` of the result is
    /// slot `perm[i]` of `self`.
    pub fn permuted(&self, perm: &[usize]) -> Self {
        MultiDegree(perm.iter().map(|&p| self.0[p]).collect())
    }
}

impl Add for &MultiDegree {
    type Output = MultiDegree;

    fn add(self, rhs: &MultiDegree) -> MultiDegree {
        assert_eq!(self.k(), rhs.k(), "multi-degree length mismatch");
        MultiDegree(self.0.iter().zip(&rhs.0).map(|(a, b)| a + b).collect())
    }
}

impl std::ops::Index<usize> for MultiDegree {
    type Output = u32;

    fn index(&self, i: usize) -> &u32 {
        &self.0[i]
    }
}

impl fmt::Display for MultiDegree {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "(")?;
        for (i, d) in self.0.iter().enumerate() {
            if i > 0 {
                write!(f, ",")?;
            }
            write!(f, "{d}")?;
        }
        write!(f, ")")
    }
}

/// Parses comma-separated integers, e.g. `"2,2"`; parentheses are optional.
impl FromStr for MultiDegree {
    type Err = PolyError;

    fn from_str(s: &str) -> Result<Self, PolyError> {
        let body = s.trim().trim_start_matches('(').trim_end_matches(')');
        if body.trim().is_empty() {
            return Err(PolyError::Parse(format!("empty multi-degree {s:?}")));
        }
        body.split(',')
            .map(|t| {
                t.trim()
                    .parse::<u32>()
                    .map_err(|e| PolyError::Parse(format!("bad multi-degree entry {t:?}: {e}")))
            })
            .collect::<Result<Vec<_>, _>>()
            .map(MultiDegree)
    }
}
