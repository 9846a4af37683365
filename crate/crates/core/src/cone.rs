//! Rational polyhedral cones in `Sym_g(ℝ)` with integral structure `scale · Sym_g(ℤ)`.
//!
//! Coordinates are taken against the δ-basis `δ_ii = E_ii`, `δ_ij = E_ij + E_ji`
//! (i < j) in the order (1,1),(1,2),…,(1,g),(2,2),…,(g,g).

use std::fmt;

use num_bigint::BigInt;
use num_integer::Integer;
use num_traits::{One, Signed, Zero};
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::feasibility;
use crate::linalg::{int_det, smith_invariants, QMat};
use crate::poly::Rational;

/// `g(g+1)/2`, the dimension of `Sym_g`.
pub fn sym_dim(g: usize) -> usize {
    g * (g + 1) / 2
}

/// Symmetric `g×g` integer matrix.
#[derive(Clone, PartialEq, Eq, Hash, Debug)]
pub struct SymIntMat {
    g: usize,
    entries: Vec<BigInt>,
}

impl SymIntMat {
    pub fn new(rows: Vec<Vec<BigInt>>) -> Result<Self> {
        let g = rows.len();
        if g == 0 || rows.iter().any(|r| r.len() != g) {
            return Err(Error::Dimension("symmetric matrix must be square and nonempty".into()));
        }
        let entries: Vec<BigInt> = rows.into_iter().flatten().collect();
        let m = SymIntMat { g, entries };
        for i in 0..g {
            for j in 0..i {
                if m.get(i, j) != m.get(j, i) {
                    return Err(Error::NotSymmetric);
                }
            }
        }
        Ok(m)
    }

    pub fn from_i64(rows: &[&[i64]]) -> Result<Self> {
        Self::new(
            rows.iter()
                .map(|r| r.iter().map(|&v| BigInt::from(v)).collect())
                .collect(),
        )
    }

    pub fn zeros(g: usize) -> Self {
        SymIntMat {
            g,
            entries: vec![BigInt::zero(); g * g],
        }
    }

    /// `E_ii` or `E_ij + E_ji`.
    pub fn delta(g: usize, i: usize, j: usize) -> Self {
        let mut m = Self::zeros(g);
        m.entries[i * g + j] = BigInt::one();
        m.entries[j * g + i] = BigInt::one();
        m
    }

    /// `ζ_ii = E_ii`, `ζ_ij = E_ii + E_jj − E_ij − E_ji`.
    pub fn zeta(g: usize, i: usize, j: usize) -> Self {
        let mut m = Self::zeros(g);
        m.entries[i * g + i] = BigInt::one();
        if i != j {
            m.entries[j * g + j] = BigInt::one();
            m.entries[i * g + j] = -BigInt::one();
            m.entries[j * g + i] = -BigInt::one();
        }
        m
    }

    pub fn g(&self) -> usize {
        self.g
    }

    pub fn get(&self, i: usize, j: usize) -> &BigInt {
        &self.entries[i * self.g + j]
    }

    pub fn rows(&self) -> Vec<Vec<BigInt>> {
        self.entries.chunks(self.g).map(<[BigInt]>::to_vec).collect()
    }

    pub fn is_zero(&self) -> bool {
        self.entries.iter().all(Zero::is_zero)
    }

    pub fn scaled(&self, k: &BigInt) -> Self {
        SymIntMat {
            g: self.g,
            entries: self.entries.iter().map(|e| e * k).collect(),
        }
    }

    pub fn to_qmat(&self) -> QMat {
        QMat::from_int_rows(&self.rows())
    }

    pub fn rank(&self) -> usize {
        self.to_qmat().rank()
    }

    fn principal_minor(&self, idx: &[usize]) -> BigInt {
        let rows: Vec<Vec<BigInt>> = idx
            .iter()
            .map(|&i| idx.iter().map(|&j| self.get(i, j).clone()).collect())
            .collect();
        int_det(&rows)
    }

    /// All principal minors are nonnegative.
    pub fn is_psd(&self) -> bool {
        (1u32..(1 << self.g)).all(|mask| {
            let idx: Vec<usize> = (0..self.g).filter(|i| mask & (1 << i) != 0).collect();
            !self.principal_minor(&idx).is_negative()
        })
    }

    /// Sylvester's criterion: leading principal minors positive.
    pub fn is_positive_definite(&self) -> bool {
        (1..=self.g).all(|k| {
            let idx: Vec<usize> = (0..k).collect();
            self.principal_minor(&idx).is_positive()
        })
    }

    /// Coordinates in the δ-basis, without lattice rescaling.
    pub fn delta_coords(&self) -> Vec<BigInt> {
        let mut out = Vec::with_capacity(sym_dim(self.g));
        for i in 0..self.g {
            for j in i..self.g {
                out.push(self.get(i, j).clone());
            }
        }
        out
    }

    /// Primitive representative of the ray through this matrix.
    pub fn primitive(&self) -> SymIntMat {
        let g = self
            .entries
            .iter()
            .fold(BigInt::zero(), |acc, e| acc.gcd(e));
        if g.is_zero() {
            return self.clone();
        }
        SymIntMat {
            g: self.g,
            entries: self.entries.iter().map(|e| e / &g).collect(),
        }
    }

    pub fn same_ray(&self, other: &SymIntMat) -> bool {
        self.g == other.g && self.primitive() == other.primitive()
    }
}

impl fmt::Display for SymIntMat {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "[")?;
        for (r, row) in self.entries.chunks(self.g).enumerate() {
            if r > 0 {
                write!(f, ", ")?;
            }
            write!(f, "[")?;
            for (c, v) in row.iter().enumerate() {
                if c > 0 {
                    write!(f, ", ")?;
                }
                write!(f, "{v}")?;
            }
            write!(f, "]")?;
        }
        write!(f, "]")
    }
}

/// The δ-basis of `Sym_g(ℤ)`.
pub fn delta_basis(g: usize) -> Vec<SymIntMat> {
    let mut out = Vec::with_capacity(sym_dim(g));
    for i in 0..g {
        for j in i..g {
            out.push(SymIntMat::delta(g, i, j));
        }
    }
    out
}

/// Coordinates of `m` in the basis `scale · δ`.
pub fn coords_in_lattice(m: &SymIntMat, scale: &BigInt) -> Result<Vec<BigInt>> {
    if !scale.is_positive() {
        return Err(Error::Precondition("lattice scale must be positive".into()));
    }
    m.delta_coords()
        .into_iter()
        .map(|c| {
            if (&c % scale).is_zero() {
                Ok(c / scale)
            } else {
                Err(Error::NotInLattice {
                    scale: scale.to_string(),
                })
            }
        })
        .collect()
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(tag = "class", rename_all = "snake_case")]
pub enum EdgeClass {
    Interior,
    /// `flagged` marks a rank strictly between 1 and g.
    Boundary { rank: usize, flagged: bool },
    Invalid,
}

pub fn edge_class(m: &SymIntMat) -> Result<EdgeClass> {
    if m.is_zero() {
        return Err(Error::ZeroMatrix);
    }
    if !m.is_psd() {
        return Ok(EdgeClass::Invalid);
    }
    if m.is_positive_definite() {
        return Ok(EdgeClass::Interior);
    }
    let rank = m.rank();
    Ok(EdgeClass::Boundary {
        rank,
        flagged: rank > 1 && rank < m.g(),
    })
}

/// Unimodular element of `GL(g, ℤ)`, acting on `Sym_g` by `A ↦ γ A γᵀ`.
#[derive(Clone, PartialEq, Eq, Debug)]
pub struct GroupElement {
    g: usize,
    entries: Vec<BigInt>,
}

impl GroupElement {
    pub fn new(rows: Vec<Vec<BigInt>>) -> Result<Self> {
        let g = rows.len();
        if g == 0 || rows.iter().any(|r| r.len() != g) {
            return Err(Error::Dimension("group element must be square".into()));
        }
        let det = int_det(&rows);
        if det.abs() != BigInt::one() {
            return Err(Error::NotUnimodular {
                det: det.to_string(),
            });
        }
        Ok(GroupElement {
            g,
            entries: rows.into_iter().flatten().collect(),
        })
    }

    pub fn from_i64(rows: &[&[i64]]) -> Result<Self> {
        Self::new(
            rows.iter()
                .map(|r| r.iter().map(|&v| BigInt::from(v)).collect())
                .collect(),
        )
    }

    pub fn identity(g: usize) -> Self {
        let mut entries = vec![BigInt::zero(); g * g];
        for i in 0..g {
            entries[i * g + i] = BigInt::one();
        }
        GroupElement { g, entries }
    }

    /// Permutation matrix exchanging basis vectors `i` and `j`.
    pub fn swap(g: usize, i: usize, j: usize) -> Self {
        let mut out = Self::identity(g);
        out.entries[i * g + i] = BigInt::zero();
        out.entries[j * g + j] = BigInt::zero();
        out.entries[i * g + j] = BigInt::one();
        out.entries[j * g + i] = BigInt::one();
        out
    }

    pub fn g(&self) -> usize {
        self.g
    }

    pub fn rows(&self) -> Vec<Vec<BigInt>> {
        self.entries.chunks(self.g).map(<[BigInt]>::to_vec).collect()
    }

    pub fn compose(&self, other: &GroupElement) -> GroupElement {
        let g = self.g;
        let mut entries = vec![BigInt::zero(); g * g];
        for i in 0..g {
            for k in 0..g {
                for j in 0..g {
                    entries[i * g + j] += &self.entries[i * g + k] * &other.entries[k * g + j];
                }
            }
        }
        GroupElement { g, entries }
    }

    pub fn act(&self, m: &SymIntMat) -> Result<SymIntMat> {
        if m.g() != self.g {
            return Err(Error::Dimension(format!(
                "group element of size {} acting on {}x{} matrix",
                self.g,
                m.g(),
                m.g()
            )));
        }
        let g = self.g;
        let mut tmp = vec![BigInt::zero(); g * g];
        for i in 0..g {
            for k in 0..g {
                let a = &self.entries[i * g + k];
                if a.is_zero() {
                    continue;
                }
                for j in 0..g {
                    tmp[i * g + j] += a * m.get(k, j);
                }
            }
        }
        let mut out = vec![BigInt::zero(); g * g];
        for i in 0..g {
            for j in 0..g {
                for k in 0..g {
                    out[i * g + j] += &tmp[i * g + k] * &self.entries[j * g + k];
                }
            }
        }
        Ok(SymIntMat { g, entries: out })
    }
}

/// Simplicial cone with an ordered (marked) list of generators in `scale · Sym_g(ℤ)`.
#[derive(Clone, PartialEq, Eq, Debug)]
pub struct MarkedCone {
    g: usize,
    scale: BigInt,
    generators: Vec<SymIntMat>,
    labels: Option<Vec<String>>,
}

impl MarkedCone {
    pub fn new(
        g: usize,
        scale: BigInt,
        generators: Vec<SymIntMat>,
        labels: Option<Vec<String>>,
    ) -> Result<Self> {
        if g == 0 {
            return Err(Error::Precondition("g must be positive".into()));
        }
        if !scale.is_positive() {
            return Err(Error::Precondition("lattice scale must be positive".into()));
        }
        if generators.len() > sym_dim(g) {
            return Err(Error::GeneratorCount {
                expected: sym_dim(g),
                found: generators.len(),
            });
        }
        if let Some(l) = &labels {
            if l.len() != generators.len() {
                return Err(Error::Dimension(format!(
                    "{} labels for {} generators",
                    l.len(),
                    generators.len()
                )));
            }
        }
        for (i, m) in generators.iter().enumerate() {
            if m.g() != g {
                return Err(Error::Dimension(format!("generator {i} is not {g}x{g}")));
            }
            if m.is_zero() {
                return Err(Error::ZeroMatrix);
            }
            if !m.is_psd() {
                return Err(Error::NotPositiveSemidefinite { index: i });
            }
            coords_in_lattice(m, &scale)?;
        }
        for i in 0..generators.len() {
            for j in 0..i {
                if generators[i].same_ray(&generators[j]) {
                    return Err(Error::ProportionalGenerators(j, i));
                }
            }
        }
        Ok(MarkedCone {
            g,
            scale,
            generators,
            labels,
        })
    }

    pub fn g(&self) -> usize {
        self.g
    }

    /// `N = g(g+1)/2`.
    pub fn full_dim(&self) -> usize {
        sym_dim(self.g)
    }

    pub fn scale(&self) -> &BigInt {
        &self.scale
    }

    pub fn generators(&self) -> &[SymIntMat] {
        &self.generators
    }

    pub fn labels(&self) -> Option<&[String]> {
        self.labels.as_deref()
    }

    pub fn label(&self, i: usize) -> String {
        match &self.labels {
            Some(l) => l[i].clone(),
            None => format!("e{}", i + 1),
        }
    }

    /// Rows are the lattice coordinates of the generators.
    pub fn coordinate_matrix(&self) -> Vec<Vec<BigInt>> {
        self.generators
            .iter()
            .map(|m| coords_in_lattice(m, &self.scale).expect("checked at construction"))
            .collect()
    }

    /// Generators in δ-coordinates over ℚ, for feasibility problems.
    pub(crate) fn ray_coords(&self) -> Vec<Vec<Rational>> {
        self.generators
            .iter()
            .map(|m| m.delta_coords().into_iter().map(Rational::from_integer).collect())
            .collect()
    }

    pub fn is_simplicial(&self) -> bool {
        self.generators.is_empty()
            || QMat::from_int_rows(&self.coordinate_matrix()).rank() == self.generators.len()
    }

    /// Scale-normalised pencil `A_μ = l(μ) / scale`.
    pub fn pencil(&self) -> Vec<QMat> {
        let s = Rational::from_integer(self.scale.clone());
        self.generators
            .iter()
            .map(|m| {
                let q = m.to_qmat();
                let rows = (0..self.g)
                    .map(|r| (0..self.g).map(|c| q.get(r, c) / &s).collect())
                    .collect();
                QMat::from_rows(rows)
            })
            .collect()
    }

    /// Reorders the marking: new generator `k` is old generator `order[k]`.
    pub fn reordered(&self, order: &[usize]) -> Result<Self> {
        crate::poly::check_permutation(order, self.generators.len())?;
        Ok(MarkedCone {
            g: self.g,
            scale: self.scale.clone(),
            generators: order.iter().map(|&i| self.generators[i].clone()).collect(),
            labels: self
                .labels
                .as_ref()
                .map(|l| order.iter().map(|&i| l[i].clone()).collect()),
        })
    }

    pub fn has_ray(&self, m: &SymIntMat) -> bool {
        self.generators.iter().any(|x| x.same_ray(m))
    }
}

pub fn lattice_volume(c: &MarkedCone) -> Result<BigInt> {
    let n = c.full_dim();
    if c.generators().len() != n {
        return Err(Error::GeneratorCount {
            expected: n,
            found: c.generators().len(),
        });
    }
    let det = int_det(&c.coordinate_matrix());
    if det.is_zero() {
        return Err(Error::DegenerateCone);
    }
    Ok(det.abs())
}

/// Generators extend to a ℤ-basis of the lattice: all elementary divisors of
/// the coordinate matrix equal 1.
pub fn is_regular(c: &MarkedCone) -> Result<bool> {
    if !c.is_simplicial() {
        return Err(Error::NotSimplicial);
    }
    let inv = smith_invariants(&c.coordinate_matrix());
    Ok(inv.len() == c.generators().len() && inv.iter().all(One::is_one))
}

pub fn gl_act(gamma: &GroupElement, c: &MarkedCone) -> Result<MarkedCone> {
    let gens = c
        .generators()
        .iter()
        .map(|m| gamma.act(m))
        .collect::<Result<Vec<_>>>()?;
    MarkedCone::new(c.g(), c.scale().clone(), gens, c.labels.clone())
}

/// Exact test for a common nonzero point.
pub fn cones_meet_nontrivially(a: &MarkedCone, b: &MarkedCone) -> Result<bool> {
    if a.g() != b.g() {
        return Err(Error::Dimension("cones in different Sym_g".into()));
    }
    if !a.is_simplicial() || !b.is_simplicial() {
        return Err(Error::NotSimplicial);
    }
    Ok(feasibility::simplicial_cones_meet(&a.ray_coords(), &b.ray_coords()))
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct FanViolation {
    pub first: usize,
    pub second: usize,
    pub detail: String,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct FanReport {
    pub is_fan: bool,
    pub violations: Vec<FanViolation>,
}

/// Checks that every pairwise intersection is the face spanned by the shared rays.
pub fn is_fan(cones: &[MarkedCone]) -> Result<FanReport> {
    if let Some(first) = cones.first() {
        for c in cones {
            if c.g() != first.g() || c.scale() != first.scale() {
                return Err(Error::Dimension("fan cones must share g and scale".into()));
            }
            if !c.is_simplicial() {
                return Err(Error::NotSimplicial);
            }
        }
    }
    let mut violations = Vec::new();
    for i in 0..cones.len() {
        for j in i + 1..cones.len() {
            let (a, b) = (&cones[i], &cones[j]);
            let outside: Vec<bool> = a.generators().iter().map(|m| !b.has_ray(m)).collect();
            if feasibility::cones_meet_weighted(&a.ray_coords(), &b.ray_coords(), &outside) {
                violations.push(FanViolation {
                    first: i,
                    second: j,
                    detail: "intersection is larger than the face spanned by shared rays".into(),
                });
            }
        }
    }
    Ok(FanReport {
        is_fan: violations.is_empty(),
        violations,
    })
}

/// A set of simplicial cones whose pairwise intersections are common faces.
#[derive(Clone, Debug)]
pub struct Fan {
    cones: Vec<MarkedCone>,
}

impl Fan {
    pub fn new(cones: Vec<MarkedCone>) -> Result<Self> {
        let report = is_fan(&cones)?;
        if let Some(v) = report.violations.first() {
            return Err(Error::Precondition(format!(
                "cones {} and {} do not meet in a common face",
                v.first, v.second
            )));
        }
        Ok(Fan { cones })
    }

    pub fn cones(&self) -> &[MarkedCone] {
        &self.cones
    }

    pub fn is_regular(&self) -> Result<bool> {
        for c in &self.cones {
            if !is_regular(c)? {
                return Ok(false);
            }
        }
        Ok(true)
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct SeparabilityViolation {
    pub cone: usize,
    pub element: usize,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct SeparabilityReport {
    pub separable: bool,
    pub violations: Vec<SeparabilityViolation>,
}

/// Finite separability certificate: any listed `γ` whose image of a cone meets
/// the cone must fix each generator of that cone.
pub fn is_separable(cones: &[MarkedCone], group: &[GroupElement]) -> Result<SeparabilityReport> {
    let mut violations = Vec::new();
    for (ci, c) in cones.iter().enumerate() {
        for (gi, gamma) in group.iter().enumerate() {
            let image = gl_act(gamma, c)?;
            if !cones_meet_nontrivially(&image, c)? {
                continue;
            }
            let fixes = image
                .generators()
                .iter()
                .zip(c.generators())
                .all(|(x, y)| x == y);
            if !fixes {
                violations.push(SeparabilityViolation {
                    cone: ci,
                    element: gi,
                });
            }
        }
    }
    Ok(SeparabilityReport {
        separable: violations.is_empty(),
        violations,
    })
}

/// Number of boundary components: `index · (1 + interior_orbits)`.
pub fn component_count(index: &BigInt, interior_orbits: &BigInt) -> BigInt {
    index * (BigInt::one() + interior_orbits)
}

#[cfg(test)]
mod tests {
    use super::*;

    fn s(rows: &[&[i64]]) -> SymIntMat {
        SymIntMat::from_i64(rows).unwrap()
    }

    fn ints(xs: &[i64]) -> Vec<BigInt> {
        xs.iter().map(|&x| BigInt::from(x)).collect()
    }

    fn principal_g2() -> MarkedCone {
        MarkedCone::new(
            2,
            BigInt::one(),
            vec![s(&[&[1, 0], &[0, 0]]), s(&[&[0, 0], &[0, 1]]), s(&[&[1, -1], &[-1, 1]])],
            None,
        )
        .unwrap()
    }

    #[test]
    fn delta_basis_shapes() {
        assert_eq!(delta_basis(1), vec![s(&[&[1]])]);
        assert_eq!(
            delta_basis(2),
            vec![s(&[&[1, 0], &[0, 0]]), s(&[&[0, 1], &[1, 0]]), s(&[&[0, 0], &[0, 1]])]
        );
        assert_eq!(delta_basis(3).len(), 6);
    }

    #[test]
    fn lattice_coordinates() {
        let one = BigInt::one();
        assert_eq!(coords_in_lattice(&s(&[&[1, -1], &[-1, 1]]), &one).unwrap(), ints(&[1, -1, 1]));
        assert_eq!(coords_in_lattice(&s(&[&[1, 0], &[0, 0]]), &one).unwrap(), ints(&[1, 0, 0]));
        assert_eq!(
            coords_in_lattice(&s(&[&[3, 0], &[0, 0]]), &BigInt::from(3)).unwrap(),
            ints(&[1, 0, 0])
        );
        assert!(matches!(
            coords_in_lattice(&s(&[&[2, 0], &[0, 0]]), &BigInt::from(3)),
            Err(Error::NotInLattice { .. })
        ));
    }

    #[test]
    fn volumes() {
        assert_eq!(lattice_volume(&principal_g2()).unwrap(), BigInt::one());
        // 2·δ_k itself is not admissible (δ12 is indefinite); use PSD generators whose
        // coordinate matrix also has |det| = 2³
        assert_eq!(
            int_det(&delta_basis(2).iter().map(|m| m.scaled(&BigInt::from(2)).delta_coords()).collect::<Vec<_>>()),
            BigInt::from(8)
        );
        let c = MarkedCone::new(
            2,
            BigInt::one(),
            vec![s(&[&[2, 0], &[0, 0]]), s(&[&[0, 0], &[0, 2]]), s(&[&[2, 2], &[2, 2]])],
            None,
        )
        .unwrap();
        assert_eq!(lattice_volume(&c).unwrap(), BigInt::from(8));
        let short = MarkedCone::new(2, BigInt::one(), vec![s(&[&[1, 0], &[0, 0]])], None).unwrap();
        assert!(matches!(lattice_volume(&short), Err(Error::GeneratorCount { .. })));
        let flat = MarkedCone::new(
            2,
            BigInt::one(),
            vec![s(&[&[1, 0], &[0, 0]]), s(&[&[0, 0], &[0, 1]]), s(&[&[1, 0], &[0, 1]])],
            None,
        )
        .unwrap();
        assert!(matches!(lattice_volume(&flat), Err(Error::DegenerateCone)));
    }

    #[test]
    fn regularity() {
        assert!(is_regular(&principal_g2()).unwrap());
        let imprimitive = MarkedCone::new(2, BigInt::one(), vec![s(&[&[2, 0], &[0, 0]])], None).unwrap();
        assert!(!is_regular(&imprimitive).unwrap());
        let two = MarkedCone::new(
            2,
            BigInt::one(),
            vec![s(&[&[1, 0], &[0, 0]]), s(&[&[0, 0], &[0, 1]])],
            None,
        )
        .unwrap();
        assert!(is_regular(&two).unwrap());
    }

    #[test]
    fn edge_classes() {
        assert_eq!(edge_class(&s(&[&[1, 0], &[0, 1]])).unwrap(), EdgeClass::Interior);
        assert_eq!(
            edge_class(&s(&[&[1, 0], &[0, 0]])).unwrap(),
            EdgeClass::Boundary { rank: 1, flagged: false }
        );
        assert_eq!(
            edge_class(&s(&[&[1, -1], &[-1, 1]])).unwrap(),
            EdgeClass::Boundary { rank: 1, flagged: false }
        );
        assert_eq!(
            edge_class(&s(&[&[1, 0, 0], &[0, 1, 0], &[0, 0, 0]])).unwrap(),
            EdgeClass::Boundary { rank: 2, flagged: true }
        );
        assert_eq!(edge_class(&s(&[&[-1, 0], &[0, 0]])).unwrap(), EdgeClass::Invalid);
        assert!(matches!(edge_class(&SymIntMat::zeros(2)), Err(Error::ZeroMatrix)));
    }

    #[test]
    fn group_action() {
        let c = principal_g2();
        assert_eq!(gl_act(&GroupElement::identity(2), &c).unwrap(), c);
        let swapped = gl_act(&GroupElement::swap(2, 0, 1), &c).unwrap();
        assert_eq!(
            swapped.generators(),
            &[s(&[&[0, 0], &[0, 1]]), s(&[&[1, 0], &[0, 0]]), s(&[&[1, -1], &[-1, 1]])]
        );
        let shear = GroupElement::from_i64(&[&[1, 0], &[1, 1]]).unwrap();
        assert_eq!(shear.act(&s(&[&[1, 0], &[0, 0]])).unwrap(), s(&[&[1, 1], &[1, 1]]));
        assert!(matches!(
            GroupElement::from_i64(&[&[2, 0], &[0, 1]]),
            Err(Error::NotUnimodular { .. })
        ));
    }

    #[test]
    fn meeting_and_fans() {
        let c = principal_g2();
        assert!(cones_meet_nontrivially(&c, &c).unwrap());
        // the shear maps σ0 to {[[1,1],[1,1]], E22, E11}, sharing the face {E11, E22}
        let shear = GroupElement::from_i64(&[&[1, 0], &[1, 1]]).unwrap();
        let other = gl_act(&shear, &c).unwrap();
        assert!(cones_meet_nontrivially(&c, &other).unwrap());
        assert!(is_fan(&[c.clone(), other]).unwrap().is_fan);
        let swapped = gl_act(&GroupElement::swap(2, 0, 1), &c).unwrap();
        assert!(is_fan(&[c.clone(), swapped]).unwrap().is_fan);

        let overlapping = MarkedCone::new(
            2,
            BigInt::one(),
            vec![s(&[&[1, 0], &[0, 0]]), s(&[&[0, 0], &[0, 1]]), s(&[&[1, 1], &[1, 1]])],
            None,
        )
        .unwrap();
        let bigger = MarkedCone::new(
            2,
            BigInt::one(),
            vec![s(&[&[1, 0], &[0, 0]]), s(&[&[0, 0], &[0, 1]]), s(&[&[2, 1], &[1, 1]])],
            None,
        )
        .unwrap();
        let report = is_fan(&[overlapping, bigger]).unwrap();
        assert!(!report.is_fan);
        assert_eq!(report.violations.len(), 1);
    }

    #[test]
    fn separability() {
        let c = principal_g2();
        let r = is_separable(std::slice::from_ref(&c), &[GroupElement::swap(2, 0, 1)]).unwrap();
        assert!(!r.separable);
        assert_eq!(r.violations, vec![SeparabilityViolation { cone: 0, element: 0 }]);
        let r = is_separable(std::slice::from_ref(&c), &[GroupElement::identity(2)]).unwrap();
        assert!(r.separable);
        let minus = GroupElement::from_i64(&[&[-1, 0], &[0, -1]]).unwrap();
        assert!(is_separable(&[c], &[minus]).unwrap().separable);
    }

    #[test]
    fn component_counts() {
        let n = |x: i64| BigInt::from(x);
        assert_eq!(component_count(&n(7), &n(0)), n(7));
        assert_eq!(component_count(&n(1), &n(0)), n(1));
        assert_eq!(component_count(&n(2), &n(3)), n(8));
    }
}
