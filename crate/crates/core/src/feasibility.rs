//! Exact feasibility of `A x = b, x >= 0` over ℚ.
//!
//! Fourier–Motzkin elimination is tried first; when the problem exceeds
//! [`FM_VARIABLE_CAP`] free variables or the constraint set grows past
//! [`FM_CONSTRAINT_CAP`], an exact phase-one simplex decides instead.

use std::collections::HashSet;

use num_traits::{One, Signed, Zero};

use crate::poly::Rational;

pub const FM_VARIABLE_CAP: usize = 24;
pub const FM_CONSTRAINT_CAP: usize = 20_000;

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Method {
    FourierMotzkin,
    Simplex,
}

/// Decides whether `A x = b` has a solution with every `x_i >= 0`.
pub fn nonneg_solution_exists(a: &[Vec<Rational>], b: &[Rational]) -> (bool, Method) {
    match fourier_motzkin(a, b) {
        Some(r) => (r, Method::FourierMotzkin),
        None => (simplex_feasible(a, b), Method::Simplex),
    }
}

/// Reduced row echelon form of `[A | b]`. Returns `None` if inconsistent,
/// else `(pivot columns, reduced rows)`.
fn rref(a: &[Vec<Rational>], b: &[Rational]) -> Option<(Vec<usize>, Vec<Vec<Rational>>)> {
    let n = a.first().map_or(0, Vec::len);
    let mut m: Vec<Vec<Rational>> = a
        .iter()
        .zip(b)
        .map(|(row, rhs)| {
            let mut r = row.clone();
            r.push(rhs.clone());
            r
        })
        .collect();
    let mut pivots = Vec::new();
    let mut r = 0;
    for c in 0..n {
        let Some(p) = (r..m.len()).find(|&i| !m[i][c].is_zero()) else {
            continue;
        };
        m.swap(r, p);
        let inv = Rational::one() / &m[r][c];
        for v in m[r].iter_mut() {
            *v *= &inv;
        }
        for i in 0..m.len() {
            if i == r || m[i][c].is_zero() {
                continue;
            }
            let f = m[i][c].clone();
            for j in 0..=n {
                let v = &m[i][j] - &f * &m[r][j];
                m[i][j] = v;
            }
        }
        pivots.push(c);
        r += 1;
    }
    if m[r..].iter().any(|row| !row[n].is_zero()) {
        return None;
    }
    m.truncate(r);
    Some((pivots, m))
}

/// `coeffs · y <= rhs`
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
struct Ineq {
    coeffs: Vec<Rational>,
    rhs: Rational,
}

impl Ineq {
    fn normalized(mut self) -> Self {
        let scale = self
            .coeffs
            .iter()
            .find(|c| !c.is_zero())
            .map(|c| c.abs())
            .unwrap_or_else(|| if self.rhs.is_zero() { Rational::one() } else { self.rhs.abs() });
        for c in self.coeffs.iter_mut() {
            *c /= &scale;
        }
        self.rhs /= &scale;
        self
    }
}

/// Fourier–Motzkin decision; `None` when a size cap is hit.
pub fn fourier_motzkin(a: &[Vec<Rational>], b: &[Rational]) -> Option<bool> {
    let n = a.first().map_or(0, Vec::len);
    let Some((pivots, rows)) = rref(a, b) else {
        return Some(false);
    };
    let free: Vec<usize> = (0..n).filter(|c| !pivots.contains(c)).collect();
    if free.len() > FM_VARIABLE_CAP {
        return None;
    }
    let m = free.len();

    let mut ineqs: Vec<Ineq> = Vec::new();
    for k in 0..m {
        let mut coeffs = vec![Rational::zero(); m];
        coeffs[k] = -Rational::one();
        ineqs.push(Ineq {
            coeffs,
            rhs: Rational::zero(),
        });
    }
    // pivot variable x_p = rhs - Σ r_pf y_f >= 0
    for row in &rows {
        ineqs.push(Ineq {
            coeffs: free.iter().map(|&f| row[f].clone()).collect(),
            rhs: row[n].clone(),
        });
    }

    for var in 0..m {
        let mut pos = Vec::new();
        let mut neg = Vec::new();
        let mut seen = HashSet::new();
        let mut next = Vec::new();
        for q in ineqs {
            if q.coeffs[var].is_positive() {
                pos.push(q);
            } else if q.coeffs[var].is_negative() {
                neg.push(q);
            } else if seen.insert(q.clone()) {
                next.push(q);
            }
        }
        for p in &pos {
            for q in &neg {
                let (a, b) = (&p.coeffs[var], -&q.coeffs[var]);
                let coeffs: Vec<Rational> = p
                    .coeffs
                    .iter()
                    .zip(&q.coeffs)
                    .map(|(x, y)| x * &b + y * a)
                    .collect();
                let rhs = &p.rhs * &b + &q.rhs * a;
                let c = Ineq { coeffs, rhs }.normalized();
                if c.coeffs.iter().all(Zero::is_zero) {
                    if c.rhs.is_negative() {
                        return Some(false);
                    }
                    continue;
                }
                if seen.insert(c.clone()) {
                    next.push(c);
                }
                if next.len() > FM_CONSTRAINT_CAP {
                    return None;
                }
            }
        }
        ineqs = next;
    }
    Some(ineqs.iter().all(|q| !q.rhs.is_negative()))
}

/// Exact phase-one simplex with Bland's rule.
pub fn simplex_feasible(a: &[Vec<Rational>], b: &[Rational]) -> bool {
    let m = a.len();
    let n = a.first().map_or(0, Vec::len);
    if m == 0 {
        return true;
    }
    let width = n + m + 1;
    let rhs = width - 1;
    let mut t: Vec<Vec<Rational>> = Vec::with_capacity(m);
    for (i, (row, bi)) in a.iter().zip(b).enumerate() {
        let flip = bi.is_negative();
        let mut r = vec![Rational::zero(); width];
        for (j, v) in row.iter().enumerate() {
            r[j] = if flip { -v.clone() } else { v.clone() };
        }
        r[n + i] = Rational::one();
        r[rhs] = if flip { -bi.clone() } else { bi.clone() };
        t.push(r);
    }
    let mut basis: Vec<usize> = (n..n + m).collect();
    let cost = |j: usize| if j >= n && j < n + m { Rational::one() } else { Rational::zero() };

    loop {
        // reduced costs r_j = c_j - Σ_i c_B(i) t[i][j]
        let entering = (0..n + m).find(|&j| {
            if basis.contains(&j) {
                return false;
            }
            let mut r = cost(j);
            for (i, &bi) in basis.iter().enumerate() {
                if bi >= n {
                    r -= &t[i][j];
                }
            }
            r.is_negative()
        });
        let Some(j) = entering else { break };
        let mut leave: Option<(usize, Rational)> = None;
        for i in 0..m {
            if !t[i][j].is_positive() {
                continue;
            }
            let ratio = &t[i][rhs] / &t[i][j];
            let better = match &leave {
                None => true,
                Some((li, lr)) => ratio < *lr || (ratio == *lr && basis[i] < basis[*li]),
            };
            if better {
                leave = Some((i, ratio));
            }
        }
        let Some((p, _)) = leave else { break };
        let inv = Rational::one() / &t[p][j];
        for v in t[p].iter_mut() {
            *v *= &inv;
        }
        for i in 0..m {
            if i == p || t[i][j].is_zero() {
                continue;
            }
            let f = t[i][j].clone();
            for k in 0..width {
                let v = &t[i][k] - &f * &t[p][k];
                t[i][k] = v;
            }
        }
        basis[p] = j;
    }
    basis
        .iter()
        .enumerate()
        .filter(|(_, &bi)| bi >= n)
        .all(|(i, _)| t[i][rhs].is_zero())
}

/// Whether two simplicial cones (given by ray coordinates) share a nonzero
/// point. With linearly independent generators, `Σ λ = 1` forces the common
/// point to be nonzero.
pub fn simplicial_cones_meet(a: &[Vec<Rational>], b: &[Vec<Rational>]) -> bool {
    let mask = vec![true; a.len()];
    cones_meet_weighted(a, b, &mask)
}

/// Feasibility of `Σ λ_i a_i = Σ μ_j b_j`, `λ, μ >= 0`, with the λ's selected
/// by `normalize` summing to one.
pub fn cones_meet_weighted(a: &[Vec<Rational>], b: &[Vec<Rational>], normalize: &[bool]) -> bool {
    if a.is_empty() || b.is_empty() || !normalize.iter().any(|&x| x) {
        return false;
    }
    let dim = a[0].len();
    let nv = a.len() + b.len();
    let mut rows = Vec::with_capacity(dim + 1);
    let mut rhs = Vec::with_capacity(dim + 1);
    for k in 0..dim {
        let mut row = Vec::with_capacity(nv);
        row.extend(a.iter().map(|u| u[k].clone()));
        row.extend(b.iter().map(|v| -v[k].clone()));
        rows.push(row);
        rhs.push(Rational::zero());
    }
    let mut norm = vec![Rational::zero(); nv];
    for (i, &sel) in normalize.iter().enumerate() {
        if sel {
            norm[i] = Rational::one();
        }
    }
    rows.push(norm);
    rhs.push(Rational::one());
    nonneg_solution_exists(&rows, &rhs).0
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::poly::rat;

    fn v(xs: &[i64]) -> Vec<Rational> {
        xs.iter().map(|&x| rat(x)).collect()
    }

    #[test]
    fn trivial_systems() {
        // x + y = 1
        let a = vec![v(&[1, 1])];
        assert_eq!(fourier_motzkin(&a, &v(&[1])), Some(true));
        assert!(simplex_feasible(&a, &v(&[1])));
        // x + y = -1 infeasible with x, y >= 0
        assert_eq!(fourier_motzkin(&a, &v(&[-1])), Some(false));
        assert!(!simplex_feasible(&a, &v(&[-1])));
        // x - y = 3, x + y = 1 -> y = -1
        let a = vec![v(&[1, -1]), v(&[1, 1])];
        assert_eq!(fourier_motzkin(&a, &v(&[3, 1])), Some(false));
        assert!(!simplex_feasible(&a, &v(&[3, 1])));
        // inconsistent equalities
        let a = vec![v(&[1, 1]), v(&[2, 2])];
        assert_eq!(fourier_motzkin(&a, &v(&[1, 3])), Some(false));
        assert!(!simplex_feasible(&a, &v(&[1, 3])));
    }

    #[test]
    fn opposite_orthants_do_not_meet() {
        let a = vec![v(&[1, 0, 0]), v(&[0, 1, 0]), v(&[0, 0, 1])];
        let b: Vec<Vec<Rational>> = a.iter().map(|r| r.iter().map(|x| -x).collect()).collect();
        assert!(!simplicial_cones_meet(&a, &b));
        assert!(simplicial_cones_meet(&a, &a));
    }
}
