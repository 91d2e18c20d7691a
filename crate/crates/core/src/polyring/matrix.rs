use super::poly::Polynomial;
use super::ring::CoeffRing;
use super::PolyError;

/// Dense row-major matrix of polynomials over one ring and variable list.
#[derive(Clone, Debug, PartialEq)]
pub struct PolyMatrix<R: CoeffRing> {
    rows: usize,
    cols: usize,
    entries: Vec<Polynomial<R>>,
}

impl<R: CoeffRing> PolyMatrix<R> {
    pub fn new(rows: usize, cols: usize, entries: Vec<Polynomial<R>>) -> Result<Self, PolyError> {
        if rows == 0 || cols == 0 || entries.len() != rows * cols {
            return Err(PolyError::Shape(format!(
                "{rows}x{cols} matrix with {} entries",
                entries.len()
            )));
        }
        let first = &entries[0];
        for e in &entries[1..] {
            if e.ring() != first.ring() {
                return Err(PolyError::DomainMismatch {
                    left: first.ring().name(),
                    right: e.ring().name(),
                });
            }
            if e.variables() != first.variables() {
                return Err(PolyError::VariableMismatch);
            }
        }
        Ok(PolyMatrix {
            rows,
            cols,
            entries,
        })
    }

    pub fn from_rows(rows: Vec<Vec<Polynomial<R>>>) -> Result<Self, PolyError> {
        let r = rows.len();
        let c = rows.first().map_or(0, Vec::len);
        if rows.iter().any(|row| row.len() != c) {
            return Err(PolyError::Shape("ragged rows".into()));
        }
        Self::new(r, c, rows.into_iter().flatten().collect())
    }

    pub fn rows(&self) -> usize {
        self.rows
    }

    pub fn cols(&self) -> usize {
        self.cols
    }

    pub fn get(&self, r: usize, c: usize) -> &Polynomial<R> {
        &self.entries[r * self.cols + c]
    }

    pub fn row(&self, r: usize) -> &[Polynomial<R>] {
        &self.entries[r * self.cols..(r + 1) * self.cols]
    }

    /// Submatrix on the given row and column indices (in the given order).
    pub fn submatrix(&self, rows: &[usize], cols: &[usize]) -> Result<Self, PolyError> {
        if rows.iter().any(|&r| r >= self.rows) || cols.iter().any(|&c| c >= self.cols) {
            return Err(PolyError::Shape("submatrix index out of range".into()));
        }
        let entries = rows
            .iter()
            .flat_map(|&r| cols.iter().map(move |&c| self.get(r, c).clone()))
            .collect();
        Self::new(rows.len(), cols.len(), entries)
    }

    /// Exact determinant by Laplace expansion, memoized over column subsets
    /// (`O(n 2^n)` polynomial products, division free).
    pub fn determinant(&self) -> Result<Polynomial<R>, PolyError> {
        if self.rows != self.cols {
            return Err(PolyError::NotSquare {
                rows: self.rows,
                cols: self.cols,
            });
        }
        let n = self.rows;
        if n > 20 {
            return Err(PolyError::Shape(format!("{n}x{n} determinant is too large")));
        }
        let proto = &self.entries[0];
        let ring = proto.ring().clone();
        let vars = proto.variables().clone();
        // minors[mask] = det of rows 0..popcount(mask) on the columns in mask
        let mut minors: Vec<Option<Polynomial<R>>> = vec![None; 1 << n];
        minors[0] = Some(Polynomial::one(ring.clone(), vars.clone()));
        for mask in 1usize..(1 << n) {
            let row = mask.count_ones() as usize - 1;
            let mut acc = Polynomial::zero(ring.clone(), vars.clone());
            let mut pos = 0;
            for c in 0..n {
                if mask & (1 << c) == 0 {
                    continue;
                }
                let entry = self.get(row, c);
                if !entry.is_zero() {
                    let rest = minors[mask ^ (1 << c)].as_ref().expect("smaller mask filled");
                    let term = entry * rest;
                    acc = if (row + pos) % 2 == 0 {
                        &acc + &term
                    } else {
                        &acc - &term
                    };
                }
                pos += 1;
            }
            minors[mask] = Some(acc);
        }
        Ok(minors.pop().flatten().expect("full mask filled"))
    }

    /// All `size x size` minors using every column when `size == cols`,
    /// paired with their row subsets in lexicographic order.
    pub fn maximal_minors(&self) -> Result<Vec<(Vec<usize>, Polynomial<R>)>, PolyError> {
        let size = self.cols;
        if size > self.rows {
            return Err(PolyError::Shape(format!(
                "{}x{} matrix has no maximal minors of size {size}",
                self.rows, self.cols
            )));
        }
        let cols: Vec<usize> = (0..size).collect();
        lex_subsets(self.rows, size)
            .into_iter()
            .map(|rows| {
                let det = self.submatrix(&rows, &cols)?.determinant()?;
                Ok((rows, det))
            })
            .collect()
    }
}

/// All `size`-subsets of `0..n`, lexicographically ordered.
pub fn lex_subsets(n: usize, size: usize) -> Vec<Vec<usize>> {
    fn rec(start: usize, n: usize, size: usize, cur: &mut Vec<usize>, out: &mut Vec<Vec<usize>>) {
        if cur.len() == size {
            out.push(cur.clone());
            return;
        }
        for i in start..n {
            if n - i < size - cur.len() {
                break;
            }
            cur.push(i);
            rec(i + 1, n, size, cur, out);
            cur.pop();
        }
    }
    let mut out = Vec::new();
    if size <= n {
        rec(0, n, size, &mut Vec::new(), &mut out);
    }
    out
}
