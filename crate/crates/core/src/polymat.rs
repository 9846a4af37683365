//! Matrices with polynomial entries and their determinants.

use std::collections::HashMap;

use crate::error::{Error, Result};
use crate::linalg::QMat;
use crate::poly::{MultiPoly, Rational};

/// Largest size for which [`PolyMatrix::det`] uses plain cofactor expansion.
pub const COFACTOR_LIMIT: usize = 4;

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct PolyMatrix {
    rows: usize,
    cols: usize,
    nvars: usize,
    entries: Vec<MultiPoly>,
}

impl PolyMatrix {
    pub fn new(rows: usize, cols: usize, entries: Vec<MultiPoly>) -> Result<Self> {
        if rows == 0 || cols == 0 || entries.len() != rows * cols {
            return Err(Error::Dimension(format!(
                "{} entries for a {rows}x{cols} matrix",
                entries.len()
            )));
        }
        let nvars = entries[0].nvars();
        if entries.iter().any(|e| e.nvars() != nvars) {
            return Err(Error::Dimension("entries with differing nvars".into()));
        }
        Ok(PolyMatrix {
            rows,
            cols,
            nvars,
            entries,
        })
    }

    pub fn from_fn(
        rows: usize,
        cols: usize,
        f: impl FnMut(usize, usize) -> MultiPoly,
    ) -> Result<Self> {
        let mut f = f;
        let entries = (0..rows)
            .flat_map(|r| (0..cols).map(move |c| (r, c)))
            .map(|(r, c)| f(r, c))
            .collect();
        Self::new(rows, cols, entries)
    }

    pub fn rows(&self) -> usize {
        self.rows
    }

    pub fn cols(&self) -> usize {
        self.cols
    }

    pub fn nvars(&self) -> usize {
        self.nvars
    }

    pub fn get(&self, r: usize, c: usize) -> &MultiPoly {
        &self.entries[r * self.cols + c]
    }

    pub fn is_symmetric(&self) -> bool {
        self.rows == self.cols
            && (0..self.rows).all(|i| (0..i).all(|j| self.get(i, j) == self.get(j, i)))
    }

    /// Submatrix keeping the listed rows and columns.
    pub fn submatrix(&self, rows: &[usize], cols: &[usize]) -> Result<Self> {
        Self::from_fn(rows.len(), cols.len(), |r, c| {
            self.get(rows[r], cols[c]).clone()
        })
    }

    pub fn eval(&self, point: &[Rational]) -> Result<QMat> {
        let mut out = QMat::zeros(self.rows, self.cols);
        for r in 0..self.rows {
            for c in 0..self.cols {
                out.set(r, c, self.get(r, c).eval(point)?);
            }
        }
        Ok(out)
    }

    fn check_square(&self) -> Result<()> {
        if self.rows != self.cols {
            return Err(Error::Dimension(format!(
                "determinant of a {}x{} matrix",
                self.rows, self.cols
            )));
        }
        Ok(())
    }

    /// Exact determinant. Cofactor expansion up to [`COFACTOR_LIMIT`], minor
    /// expansion with memoised sub-determinants above it.
    pub fn det(&self) -> Result<MultiPoly> {
        self.check_square()?;
        if self.rows <= COFACTOR_LIMIT {
            self.det_cofactor()
        } else {
            self.det_minor_expansion()
        }
    }

    /// Laplace expansion along the first row, recursively.
    pub fn det_cofactor(&self) -> Result<MultiPoly> {
        self.check_square()?;
        let idx: Vec<usize> = (0..self.cols).collect();
        Ok(self.cofactor_rec(0, &idx))
    }

    fn cofactor_rec(&self, row: usize, cols: &[usize]) -> MultiPoly {
        if cols.len() == 1 {
            return self.get(row, cols[0]).clone();
        }
        let mut acc = MultiPoly::zero(self.nvars);
        for (pos, &c) in cols.iter().enumerate() {
            let a = self.get(row, c);
            if a.is_zero() {
                continue;
            }
            let rest: Vec<usize> = cols.iter().copied().filter(|&x| x != c).collect();
            let term = a * &self.cofactor_rec(row + 1, &rest);
            acc = if pos % 2 == 0 { &acc + &term } else { &acc - &term };
        }
        acc
    }

    /// Division-free expansion by minors: the determinants of the top-`k` rows
    /// restricted to every `k`-subset of columns are built bottom-up and cached,
    /// so each minor is computed once.
    pub fn det_minor_expansion(&self) -> Result<MultiPoly> {
        self.check_square()?;
        let n = self.rows;
        // minors of the last `k` rows, keyed by column bitmask
        let mut layer: HashMap<u64, MultiPoly> = HashMap::new();
        layer.insert(0, MultiPoly::one(self.nvars));
        for k in 1..=n {
            let row = n - k;
            let mut next = HashMap::new();
            let mut masks: Vec<u64> = (0u64..(1u64 << n))
                .filter(|m| m.count_ones() as usize == k)
                .collect();
            masks.sort_unstable();
            for mask in masks {
                let mut acc = MultiPoly::zero(self.nvars);
                let mut pos = 0;
                for c in 0..n {
                    if mask & (1 << c) == 0 {
                        continue;
                    }
                    let a = self.get(row, c);
                    let sub = &layer[&(mask & !(1 << c))];
                    if !a.is_zero() && !sub.is_zero() {
                        let term = a * sub;
                        acc = if pos % 2 == 0 { &acc + &term } else { &acc - &term };
                    }
                    pos += 1;
                }
                next.insert(mask, acc);
            }
            layer = next;
        }
        Ok(layer.remove(&((1u64 << n) - 1)).expect("full minor"))
    }

    /// Bareiss fraction-free elimination over ℚ[x]; each division is exact.
    pub fn det_bareiss(&self) -> Result<MultiPoly> {
        self.check_square()?;
        let n = self.rows;
        let mut m: Vec<Vec<MultiPoly>> = (0..n)
            .map(|r| (0..n).map(|c| self.get(r, c).clone()).collect())
            .collect();
        let mut negate = false;
        let mut prev = MultiPoly::one(self.nvars);
        for k in 0..n.saturating_sub(1) {
            if m[k][k].is_zero() {
                let Some(p) = (k + 1..n).find(|&r| !m[r][k].is_zero()) else {
                    return Ok(MultiPoly::zero(self.nvars));
                };
                m.swap(k, p);
                negate = !negate;
            }
            for i in k + 1..n {
                for j in k + 1..n {
                    let num = &(&m[k][k] * &m[i][j]) - &(&m[i][k] * &m[k][j]);
                    m[i][j] = num
                        .div_exact(&prev)?
                        .expect("Bareiss division is exact");
                }
            }
            prev = m[k][k].clone();
        }
        let d = m[n - 1][n - 1].clone();
        Ok(if negate { -&d } else { d })
    }
}

/// `det(Σ x_i A_i)` for symmetric `g×g` rational matrices `A_i`; one variable per matrix.
pub fn pencil_det(mats: &[QMat]) -> Result<MultiPoly> {
    let Some(first) = mats.first() else {
        return Err(Error::Dimension("empty pencil".into()));
    };
    let g = first.rows();
    for m in mats {
        if m.rows() != g || m.cols() != g {
            return Err(Error::Dimension("pencil matrices of differing sizes".into()));
        }
        if !m.is_symmetric() {
            return Err(Error::NotSymmetric);
        }
    }
    let n = mats.len();
    let vars: Vec<MultiPoly> = (0..n).map(|i| MultiPoly::var(n, i)).collect::<Result<_>>()?;
    let pm = PolyMatrix::from_fn(g, g, |r, c| {
        let mut acc = MultiPoly::zero(n);
        for (x, a) in vars.iter().zip(mats) {
            let v = a.get(r, c);
            if num_traits::Zero::is_zero(v) {
                continue;
            }
            acc = &acc + &x.scale(v);
        }
        acc
    })?;
    pm.det()
}
