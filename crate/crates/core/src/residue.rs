//! Degree identities for volume functions, the residue chain and vanishing
//! criteria for intersections of boundary divisors.

use num_bigint::BigInt;
use num_traits::{One, Zero};
use serde::Serialize;

use crate::cone::{edge_class, sym_dim, EdgeClass, Fan, MarkedCone, SymIntMat};
use crate::error::{Error, Result};
use crate::poly::{MultiPoly, Rational};
use crate::polymat::PolyMatrix;
use crate::volume::{t_matrix, volume_function, VolumeFunction, SYMBOLIC_MAX_N};

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct DegreeEntry {
    pub degree: u32,
    pub rank: usize,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct DegreeProfile {
    pub entries: Vec<DegreeEntry>,
    pub holds: bool,
    /// Variables where `deg_i F != rank A_i`.
    pub violations: Vec<usize>,
}

/// `deg_i F` against `rank A_i` for each variable.
pub fn degree_profile(v: &VolumeFunction) -> DegreeProfile {
    let entries: Vec<DegreeEntry> = v
        .pencil()
        .iter()
        .enumerate()
        .map(|(i, a)| DegreeEntry {
            degree: v.f().degree_in(i).unwrap_or(0),
            rank: a.rank(),
        })
        .collect();
    let violations: Vec<usize> = entries
        .iter()
        .enumerate()
        .filter(|(_, e)| e.degree as usize != e.rank)
        .map(|(i, _)| i)
        .collect();
    DegreeProfile {
        holds: violations.is_empty(),
        entries,
        violations,
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct TDegreeReport {
    pub holds: bool,
    pub failures: Vec<String>,
    /// Whether `det T` was expanded (only up to the symbolic size guard).
    pub det_checked: bool,
}

fn deg(p: &MultiPoly, k: usize) -> Option<i64> {
    p.degree_in(k).map(i64::from)
}

/// Per-entry degree bounds for `T` and the bound on `det T` in each variable.
pub fn t_degree_bounds(v: &VolumeFunction) -> Result<TDegreeReport> {
    let n = v.n();
    let t = t_matrix(v)?;
    let mut failures = Vec::new();
    for k in 0..n {
        let dk = i64::from(v.f().degree_in(k).unwrap_or(0));
        // T_kk has exact degree 2d−2 in x_k (leading coefficient −d·a²)
        match deg(t.get(k, k), k) {
            Some(e) if e == 2 * dk - 2 => {}
            None if dk == 0 => {}
            other => failures.push(format!("deg_{k} T[{k}][{k}] = {other:?}, expected {}", 2 * dk - 2)),
        }
        for i in 0..n {
            for j in i..n {
                if i == k && j == k {
                    continue;
                }
                let bound = if i == k || j == k { 2 * dk - 1 } else { 2 * dk };
                if let Some(e) = deg(t.get(i, j), k) {
                    if e > bound {
                        failures.push(format!("deg_{k} T[{i}][{j}] = {e} > {bound}"));
                    }
                }
            }
        }
    }
    let det_checked = n <= SYMBOLIC_MAX_N;
    if det_checked {
        let det = t.det()?;
        for k in 0..n {
            let dk = i64::from(v.f().degree_in(k).unwrap_or(0));
            let bound = 2 * n as i64 * dk - 2;
            if let Some(e) = deg(&det, k) {
                if e > bound {
                    failures.push(format!("deg_{k} det T = {e} > {bound}"));
                }
            }
        }
    }
    Ok(TDegreeReport {
        holds: failures.is_empty(),
        failures,
        det_checked,
    })
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct ResidueChain {
    pub d: usize,
    pub s: Vec<MultiPoly>,
    pub gd: MultiPoly,
    pub g: usize,
    pub n: usize,
    pub vol: BigInt,
}

/// `P_lm = S ∂_l∂_m S − ∂_l S ∂_m S` over the variables `vars`.
fn p_matrix(s: &MultiPoly, vars: &[usize]) -> Result<PolyMatrix> {
    let m = vars.len();
    let grad: Vec<MultiPoly> = vars.iter().map(|&l| s.partial(l)).collect::<Result<_>>()?;
    let mut entries = vec![MultiPoly::zero(s.nvars()); m * m];
    for a in 0..m {
        for b in a..m {
            let sab = grad[a].partial(vars[b])?;
            let p = &(s * &sab) - &(&grad[a] * &grad[b]);
            entries[b * m + a] = p.clone();
            entries[a * m + b] = p;
        }
    }
    PolyMatrix::new(m, m, entries)
}

/// Iterated leading coefficients `S_k` of `F` in the first `d` marked
/// variables, and the minor determinant `g_d` of `P(S_d)` on the rest.
pub fn residue_chain(v: &VolumeFunction, d: usize) -> Result<ResidueChain> {
    let n = v.n();
    if d < 1 || d + 1 > n {
        return Err(Error::Precondition(format!(
            "residue depth d = {d} outside 1..={}",
            n.saturating_sub(1)
        )));
    }
    let mut s = vec![v.f().clone()];
    for k in 1..=d {
        let prev = &s[k - 1];
        if prev.is_zero() {
            return Err(Error::DegenerateResidue { k: k - 1 });
        }
        let (_, lc) = prev.leading_coeff(k - 1)?;
        s.push(lc);
    }
    let sd = &s[d];
    let gd = if sd.total_degree().unwrap_or(0) < 2 {
        MultiPoly::zero(n)
    } else {
        let rest: Vec<usize> = (d..n).collect();
        p_matrix(sd, &rest)?.det()?
    };
    Ok(ResidueChain {
        d,
        s,
        gd,
        g: v.g(),
        n,
        vol: v.vol().clone(),
    })
}

/// `constant · numerator / denominator_base^denominator_exp`, unevaluated.
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct ChiDescriptor {
    #[serde(serialize_with = "crate::json::serialize_rational")]
    pub constant: Rational,
    pub numerator: MultiPoly,
    pub denominator_base: MultiPoly,
    pub denominator_exp: u32,
}

impl ChiDescriptor {
    pub fn is_zero(&self) -> bool {
        self.numerator.is_zero() || self.constant.is_zero()
    }
}

/// `(−1)^{N−d} ((g+1)/4)^{N−d} (N−d)!`
pub fn chi_constant(g: usize, n: usize, d: usize) -> Rational {
    let m = n - d;
    let base = Rational::new(BigInt::from(g + 1), BigInt::from(4));
    let mut c = num_traits::pow(base, m);
    let fact: BigInt = (1..=m).map(BigInt::from).product();
    c *= Rational::from_integer(fact);
    if m % 2 == 1 {
        c = -c;
    }
    c
}

pub fn chi_descriptor(rc: &ResidueChain) -> ChiDescriptor {
    ChiDescriptor {
        constant: chi_constant(rc.g, rc.n, rc.d),
        numerator: rc.gd.clone(),
        denominator_base: rc.s[rc.d].clone(),
        denominator_exp: 2 * (rc.n - rc.d) as u32,
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
pub enum ZeroReason {
    #[serde(rename = "d_ge_g_minus_1")]
    DGeGMinus1,
    #[serde(rename = "interior_edge")]
    InteriorEdge,
    #[serde(rename = "genus_two_top")]
    GenusTwoTop,
    #[serde(rename = "toric_empty")]
    ToricEmpty,
    #[serde(rename = "toric_common_cone")]
    ToricCommonCone,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
#[serde(tag = "value", rename_all = "snake_case")]
pub enum IntersectionVerdict {
    Zero { reason: ZeroReason },
    One,
    Unknown { chi: Option<ChiDescriptor> },
}

fn check_selection(len: usize, selected: &[usize]) -> Result<()> {
    for (i, &e) in selected.iter().enumerate() {
        if e >= len {
            return Err(Error::IndexOutOfRange { index: e, len });
        }
        if selected[..i].contains(&e) {
            return Err(Error::Duplicate(format!("edge index {e}")));
        }
    }
    Ok(())
}

/// Vanishing criteria for `D_{i_1} ⋯ D_{i_d} · (K + D_∞)^{N−d}` on a top cone.
///
/// Precedence: `d ≥ g−1`, then an interior selected edge, then `g = 2, d = 1`.
/// Otherwise the residue integrand is attached when `N` is within the
/// symbolic size guard.
pub fn intersection_vanishing(c: &MarkedCone, selected: &[usize]) -> Result<IntersectionVerdict> {
    let n = c.full_dim();
    let g = c.g();
    if c.generators().len() != n {
        return Err(Error::GeneratorCount {
            expected: n,
            found: c.generators().len(),
        });
    }
    check_selection(n, selected)?;
    let d = selected.len();
    if d < 1 || d + 1 > n {
        return Err(Error::Precondition(format!(
            "number of selected edges {d} outside 1..={}",
            n.saturating_sub(1)
        )));
    }
    if d + 1 >= g {
        return Ok(IntersectionVerdict::Zero {
            reason: ZeroReason::DGeGMinus1,
        });
    }
    for &e in selected {
        if edge_class(&c.generators()[e])? == EdgeClass::Interior {
            return Ok(IntersectionVerdict::Zero {
                reason: ZeroReason::InteriorEdge,
            });
        }
    }
    if g == 2 && d == 1 {
        return Ok(IntersectionVerdict::Zero {
            reason: ZeroReason::GenusTwoTop,
        });
    }
    if n > SYMBOLIC_MAX_N {
        return Ok(IntersectionVerdict::Unknown { chi: None });
    }
    let mut order: Vec<usize> = selected.to_vec();
    order.extend((0..n).filter(|i| !selected.contains(i)));
    let v = volume_function(&c.reordered(&order)?)?;
    let rc = residue_chain(&v, d)?;
    Ok(IntersectionVerdict::Unknown {
        chi: Some(chi_descriptor(&rc)),
    })
}

/// Top self-intersection of `N` distinct toric boundary divisors on a
/// regular fan: 1 if their rays span a common top cone, else 0.
pub fn toric_full_intersection(fan: &Fan, edges: &[SymIntMat]) -> Result<u8> {
    let Some(first) = fan.cones().first() else {
        return Err(Error::Precondition("empty fan".into()));
    };
    let n = sym_dim(first.g());
    if !fan.is_regular()? {
        return Err(Error::Unsupported("intersection numbers need a regular fan".into()));
    }
    if edges.len() != n {
        return Err(Error::GeneratorCount {
            expected: n,
            found: edges.len(),
        });
    }
    for (i, e) in edges.iter().enumerate() {
        if edges[..i].iter().any(|x| x.same_ray(e)) {
            return Err(Error::Duplicate(format!("edge {i}")));
        }
    }
    let common = fan
        .cones()
        .iter()
        .filter(|c| c.generators().len() == n)
        .any(|c| edges.iter().all(|e| c.has_ray(e)));
    Ok(u8::from(common))
}

/// Verdict form of [`toric_full_intersection`]: `One`, `Zero(toric_empty)` when
/// some edge is not a ray of the fan, `Zero(toric_common_cone)` when the rays
/// span no common top cone.
pub fn toric_verdict(fan: &Fan, edges: &[SymIntMat]) -> Result<IntersectionVerdict> {
    if toric_full_intersection(fan, edges)?.is_one() {
        return Ok(IntersectionVerdict::One);
    }
    // an edge outside the fan contributes an empty divisor
    let all_rays = edges
        .iter()
        .all(|e| fan.cones().iter().any(|c| c.has_ray(e)));
    let reason = if all_rays {
        ZeroReason::ToricCommonCone
    } else {
        ZeroReason::ToricEmpty
    };
    Ok(IntersectionVerdict::Zero { reason })
}

impl IntersectionVerdict {
    pub fn is_zero(&self) -> bool {
        matches!(self, IntersectionVerdict::Zero { .. })
    }
}
