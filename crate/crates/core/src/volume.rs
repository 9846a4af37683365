//! Local volume functions `F_σ = det(Σ x_μ A_μ)` and the Monge–Ampère identity
//!
//! ```text
//! det(F·F_ij − F_i·F_j) = (−1)^N · 2^{g(g−1)/2} · vol² · F^{(g+1)(g−1)}
//! ```
//!
//! which the Kähler–Einstein metric imposes on every admissible top cone.
//! `F` is read as a polynomial in the (positive) imaginary-part coordinates;
//! both sides have even total degree `g(g²−1)`, so the identity is insensitive
//! to the sign convention used for the boundary coordinates.

use num_bigint::BigInt;
use num_traits::{One, Signed, Zero};
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde::Serialize;

use crate::cone::{lattice_volume, sym_dim, MarkedCone, SymIntMat};
use crate::error::{Error, Result};
use crate::linalg::{int_det, QMat};
use crate::poly::{MultiPoly, Rational};
use crate::polymat::{pencil_det, PolyMatrix};

/// Largest `N` for which the identity is expanded symbolically.
pub const SYMBOLIC_MAX_N: usize = 6;

/// Bound on numerators and denominators of random evaluation points.
pub const RANDOM_POINT_BOUND: u64 = 1_000_000;

#[derive(Clone, Debug)]
pub struct VolumeFunction {
    g: usize,
    n: usize,
    cone: MarkedCone,
    pencil: Vec<QMat>,
    f: MultiPoly,
    vol: BigInt,
}

impl VolumeFunction {
    pub fn g(&self) -> usize {
        self.g
    }

    pub fn n(&self) -> usize {
        self.n
    }

    pub fn cone(&self) -> &MarkedCone {
        &self.cone
    }

    pub fn pencil(&self) -> &[QMat] {
        &self.pencil
    }

    pub fn f(&self) -> &MultiPoly {
        &self.f
    }

    pub fn vol(&self) -> &BigInt {
        &self.vol
    }
}

pub fn volume_function(c: &MarkedCone) -> Result<VolumeFunction> {
    let g = c.g();
    let n = sym_dim(g);
    let vol = lattice_volume(c)?;
    let pencil = c.pencil();
    let f = pencil_det(&pencil)?;
    if f.is_zero() {
        return Err(Error::DegeneratePencil);
    }
    debug_assert!(f.is_homogeneous(g as u32));
    Ok(VolumeFunction {
        g,
        n,
        cone: c.clone(),
        pencil,
        f,
        vol,
    })
}

/// `T_ij = F·∂_i∂_j F − ∂_i F·∂_j F`.
pub fn t_matrix_of(f: &MultiPoly) -> Result<PolyMatrix> {
    let n = f.nvars();
    let grad: Vec<MultiPoly> = (0..n).map(|i| f.partial(i)).collect::<Result<_>>()?;
    let mut entries = vec![MultiPoly::zero(n); n * n];
    for i in 0..n {
        for j in i..n {
            let fij = grad[i].partial(j)?;
            let t = &(f * &fij) - &(&grad[i] * &grad[j]);
            entries[j * n + i] = t.clone();
            entries[i * n + j] = t;
        }
    }
    PolyMatrix::new(n, n, entries)
}

pub fn t_matrix(v: &VolumeFunction) -> Result<PolyMatrix> {
    t_matrix_of(&v.f)
}

/// `(−1)^N · 2^{g(g−1)/2} · vol²`.
pub fn ma_constant(g: usize, vol: &BigInt) -> Rational {
    let n = sym_dim(g);
    let mut c = BigInt::one() << (g * (g - 1) / 2);
    c *= vol * vol;
    if n % 2 == 1 {
        c = -c;
    }
    Rational::from_integer(c)
}

/// Right-hand side `(−1)^N 2^{g(g−1)/2} vol² F^{(g+1)(g−1)}` as a polynomial.
pub fn ma_rhs(g: usize, f: &MultiPoly, vol: &BigInt) -> MultiPoly {
    f.pow(((g + 1) * (g - 1)) as u32).scale(&ma_constant(g, vol))
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
#[serde(rename_all = "lowercase")]
pub enum MaMode {
    Symbolic,
    Randomized,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct Witness {
    #[serde(serialize_with = "crate::json::serialize_rationals")]
    pub point: Vec<Rational>,
    #[serde(serialize_with = "crate::json::serialize_rational")]
    pub lhs: Rational,
    #[serde(serialize_with = "crate::json::serialize_rational")]
    pub rhs: Rational,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct MaReport {
    pub identity: &'static str,
    pub mode: MaMode,
    pub holds: bool,
    #[serde(serialize_with = "crate::json::serialize_bigint")]
    pub vol: BigInt,
    pub g: usize,
    pub witnesses: Vec<Witness>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub seed: Option<u64>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub trials: Option<usize>,
}

/// Value of `F`, its gradient and Hessian polynomials, for repeated evaluation.
struct Derivatives {
    f: MultiPoly,
    grad: Vec<MultiPoly>,
    hess: Vec<Vec<MultiPoly>>,
}

impl Derivatives {
    fn new(f: &MultiPoly) -> Result<Self> {
        let n = f.nvars();
        let grad: Vec<MultiPoly> = (0..n).map(|i| f.partial(i)).collect::<Result<_>>()?;
        let hess = grad
            .iter()
            .map(|gi| (0..n).map(|j| gi.partial(j)).collect::<Result<Vec<_>>>())
            .collect::<Result<_>>()?;
        Ok(Derivatives {
            f: f.clone(),
            grad,
            hess,
        })
    }

    /// `(det T(p), F(p))` computed numerically at an exact rational point.
    fn det_t_at(&self, p: &[Rational]) -> Result<(Rational, Rational)> {
        let n = self.grad.len();
        let fv = self.f.eval(p)?;
        let gv: Vec<Rational> = self.grad.iter().map(|g| g.eval(p)).collect::<Result<_>>()?;
        let mut t = QMat::zeros(n, n);
        for i in 0..n {
            for j in i..n {
                let v = &fv * self.hess[i][j].eval(p)? - &gv[i] * &gv[j];
                t.set(j, i, v.clone());
                t.set(i, j, v);
            }
        }
        Ok((t.det(), fv))
    }
}

pub fn random_point(rng: &mut impl Rng, n: usize) -> Vec<Rational> {
    (0..n)
        .map(|_| {
            let num = rng.gen_range(1..=RANDOM_POINT_BOUND);
            let den = rng.gen_range(1..=RANDOM_POINT_BOUND);
            Rational::new(BigInt::from(num), BigInt::from(den))
        })
        .collect()
}

/// Identity check for an arbitrary `F` (in `N = g(g+1)/2` variables) and volume.
pub fn check_ma_identity(
    g: usize,
    f: &MultiPoly,
    vol: &BigInt,
    mode: MaMode,
    trials: usize,
    seed: u64,
) -> Result<MaReport> {
    let n = sym_dim(g);
    if f.nvars() != n {
        return Err(Error::Dimension(format!(
            "volume function in {} variables for g = {g}",
            f.nvars()
        )));
    }
    let deriv = Derivatives::new(f)?;
    let c = ma_constant(g, vol);
    let exp = ((g + 1) * (g - 1)) as u32;
    let rhs_at = |fv: &Rational| &c * num_traits::pow(fv.clone(), exp as usize);

    let mut witnesses = Vec::new();
    let holds = match mode {
        MaMode::Symbolic => {
            if n > SYMBOLIC_MAX_N {
                return Err(Error::CostGuard {
                    n,
                    limit: SYMBOLIC_MAX_N,
                });
            }
            let lhs = t_matrix_of(f)?.det()?;
            let rhs = ma_rhs(g, f, vol);
            let holds = lhs == rhs;
            if !holds {
                // replayable witness: first small integer point separating the sides
                let diff = &lhs - &rhs;
                let mut k = 1i64;
                loop {
                    let p: Vec<Rational> = (0..n)
                        .map(|i| Rational::from_integer(BigInt::from(k + i as i64)))
                        .collect();
                    if !diff.eval(&p)?.is_zero() {
                        let (l, fv) = deriv.det_t_at(&p)?;
                        witnesses.push(Witness {
                            point: p,
                            lhs: l,
                            rhs: rhs_at(&fv),
                        });
                        break;
                    }
                    k += 1;
                }
            }
            holds
        }
        MaMode::Randomized => {
            if trials == 0 {
                return Err(Error::Precondition("randomized mode needs trials >= 1".into()));
            }
            let mut rng = ChaCha8Rng::seed_from_u64(seed);
            for _ in 0..trials {
                let p = random_point(&mut rng, n);
                let (l, fv) = deriv.det_t_at(&p)?;
                let r = rhs_at(&fv);
                if l != r {
                    witnesses.push(Witness {
                        point: p,
                        lhs: l,
                        rhs: r,
                    });
                }
            }
            witnesses.is_empty()
        }
    };
    Ok(MaReport {
        identity: "monge-ampere",
        mode,
        holds,
        vol: vol.clone(),
        g,
        witnesses,
        seed: (mode == MaMode::Randomized).then_some(seed),
        trials: (mode == MaMode::Randomized).then_some(trials),
    })
}

pub fn verify_ma_identity(
    v: &VolumeFunction,
    mode: MaMode,
    trials: usize,
    seed: u64,
) -> Result<MaReport> {
    check_ma_identity(v.g, &v.f, &v.vol, mode, trials, seed)
}

/// Pencil data `(g, F, vol)` from `N` independent symmetric integer matrices.
fn pencil_data(mats: &[SymIntMat]) -> Result<(usize, MultiPoly, BigInt)> {
    let Some(first) = mats.first() else {
        return Err(Error::Dimension("empty pencil".into()));
    };
    let g = first.g();
    let n = sym_dim(g);
    if mats.iter().any(|m| m.g() != g) {
        return Err(Error::Dimension("pencil matrices of differing sizes".into()));
    }
    if mats.len() != n {
        return Err(Error::GeneratorCount {
            expected: n,
            found: mats.len(),
        });
    }
    let coords: Vec<Vec<BigInt>> = mats.iter().map(SymIntMat::delta_coords).collect();
    let det = int_det(&coords);
    if det.is_zero() {
        return Err(Error::NotSimplicial);
    }
    let pencil: Vec<QMat> = mats.iter().map(SymIntMat::to_qmat).collect();
    Ok((g, pencil_det(&pencil)?, det.abs()))
}

/// Whether the pencil is an integral point of the KE-characteristic variety,
/// i.e. the Monge–Ampère identity holds identically for its `F` and `vol`.
pub fn is_ke_point(mats: &[SymIntMat]) -> Result<bool> {
    let (g, f, vol) = pencil_data(mats)?;
    Ok(check_ma_identity(g, &f, &vol, MaMode::Symbolic, 1, 0)?.holds)
}

/// Coefficient of `x^index` in `det(F ∂²F − ∇F ∇Fᵀ) − (−1)^N 2^{g(g−1)/2} vol² F^{(g+1)(g−1)}`.
pub fn ke_coefficient(mats: &[SymIntMat], index: &[u32]) -> Result<Rational> {
    let (g, f, vol) = pencil_data(mats)?;
    let n = sym_dim(g);
    if index.len() != n {
        return Err(Error::Dimension(format!("multi-index of length {}", index.len())));
    }
    let want = (g * (g * g - 1)) as u32;
    let got: u32 = index.iter().sum();
    if got != want {
        return Err(Error::Precondition(format!(
            "multi-index sums to {got}, expected g(g²−1) = {want}"
        )));
    }
    if n > SYMBOLIC_MAX_N {
        return Err(Error::CostGuard {
            n,
            limit: SYMBOLIC_MAX_N,
        });
    }
    let lhs = t_matrix_of(&f)?.det()?;
    let defect = &lhs - &ma_rhs(g, &f, &vol);
    Ok(defect.coeff(index))
}

fn pencil_value(mats: &[QMat], x: &[Rational]) -> Rational {
    let g = mats[0].rows();
    let mut m = QMat::zeros(g, g);
    for (a, xi) in mats.iter().zip(x) {
        for r in 0..g {
            for c in 0..g {
                let v = m.get(r, c) + a.get(r, c) * xi;
                m.set(r, c, v);
            }
        }
    }
    m.det()
}

/// Checks `det(Σ x_i Y(ς(i))) = det(Σ x_{ς⁻¹(i)} Y(i))` at random points and
/// that KE membership does not depend on the order of the pencil.
pub fn permutation_check(
    mats: &[SymIntMat],
    perm: &[usize],
    trials: usize,
    seed: u64,
) -> Result<bool> {
    let n = mats.len();
    crate::poly::check_permutation(perm, n)?;
    let mut inv = vec![0; n];
    for (i, &p) in perm.iter().enumerate() {
        inv[p] = i;
    }
    let original: Vec<QMat> = mats.iter().map(SymIntMat::to_qmat).collect();
    let permuted: Vec<QMat> = perm.iter().map(|&p| original[p].clone()).collect();
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    for _ in 0..trials {
        let x = random_point(&mut rng, n);
        let y: Vec<Rational> = (0..n).map(|i| x[inv[i]].clone()).collect();
        if pencil_value(&permuted, &x) != pencil_value(&original, &y) {
            return Ok(false);
        }
    }
    let reordered: Vec<SymIntMat> = perm.iter().map(|&p| mats[p].clone()).collect();
    Ok(is_ke_point(mats)? == is_ke_point(&reordered)?)
}

/// Coefficients of `F = Ax² + By² + Cz² + Lxy + Mxz + Nyz` for the genus-two
/// pencil whose `i`-th generator is `[[a_i1, a_i2], [a_i2, a_i3]]`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct G2Coefficients {
    pub a: Rational,
    pub b: Rational,
    pub c: Rational,
    pub l: Rational,
    pub m: Rational,
    pub n: Rational,
}

pub fn g2_closed_form(rows: &[[BigInt; 3]; 3]) -> G2Coefficients {
    let q = |i: usize, j: usize| &rows[i][j];
    let sq = |i: usize| q(i, 0) * q(i, 2) - q(i, 1) * q(i, 1);
    let mixed = |i: usize, j: usize| {
        q(i, 0) * q(j, 2) + q(j, 0) * q(i, 2) - BigInt::from(2) * q(i, 1) * q(j, 1)
    };
    let r = Rational::from_integer;
    G2Coefficients {
        a: r(sq(0)),
        b: r(sq(1)),
        c: r(sq(2)),
        l: r(mixed(0, 1)),
        m: r(mixed(0, 2)),
        n: r(mixed(1, 2)),
    }
}

/// Genus-two generators `[[a_i1, a_i2], [a_i2, a_i3]]` built from the rows of `a`.
pub fn g2_matrices(rows: &[[BigInt; 3]; 3]) -> Vec<SymIntMat> {
    rows.iter()
        .map(|r| {
            SymIntMat::new(vec![
                vec![r[0].clone(), r[1].clone()],
                vec![r[1].clone(), r[2].clone()],
            ])
            .expect("symmetric by construction")
        })
        .collect()
}

/// `|det|` of the δ-coordinate matrix of a pencil.
pub fn pencil_volume(mats: &[SymIntMat]) -> BigInt {
    int_det(&mats.iter().map(SymIntMat::delta_coords).collect::<Vec<_>>()).abs()
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::poly::rat;

    fn s(rows: &[&[i64]]) -> SymIntMat {
        SymIntMat::from_i64(rows).unwrap()
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

    fn x(n: usize, i: usize) -> MultiPoly {
        MultiPoly::var(n, i).unwrap()
    }

    #[test]
    fn genus_one() {
        let c = MarkedCone::new(1, BigInt::one(), vec![s(&[&[1]])], None).unwrap();
        let v = volume_function(&c).unwrap();
        assert_eq!(v.f(), &x(1, 0));
        assert_eq!(v.vol(), &BigInt::one());
        let t = t_matrix(&v).unwrap();
        assert_eq!(t.get(0, 0), &MultiPoly::constant(1, rat(-1)));
        assert!(verify_ma_identity(&v, MaMode::Symbolic, 1, 0).unwrap().holds);
        assert!(is_ke_point(&[s(&[&[1]])]).unwrap());
        assert_eq!(ke_coefficient(&[s(&[&[1]])], &[0]).unwrap(), rat(0));
    }

    #[test]
    fn principal_g2_volume_and_t() {
        let v = volume_function(&principal_g2()).unwrap();
        let (a, b, c) = (x(3, 0), x(3, 1), x(3, 2));
        assert_eq!(v.f(), &(&(&(&a * &b) + &(&a * &c)) + &(&b * &c)));
        let t = t_matrix(&v).unwrap();
        assert_eq!(t.get(0, 1), &-&(&c * &c));
        assert_eq!(t.get(0, 2), &-&(&b * &b));
        assert_eq!(t.get(2, 0), t.get(0, 2));
        assert!(t.is_symmetric());
        let det = t.det().unwrap();
        assert_eq!(det.eval(&[rat(1), rat(1), rat(1)]).unwrap(), rat(-54));
        assert_eq!(det, v.f().pow(3).scale(&rat(-2)));
    }

    #[test]
    fn degenerate_pencil_is_an_error() {
        let c = MarkedCone::new(
            2,
            BigInt::one(),
            vec![s(&[&[1, 0], &[0, 0]]), s(&[&[0, 0], &[0, 1]]), s(&[&[1, 0], &[0, 1]])],
            None,
        )
        .unwrap();
        assert!(matches!(volume_function(&c), Err(Error::DegenerateCone)));
        let mats = [s(&[&[1, 0], &[0, 0]]), s(&[&[0, 0], &[0, 1]]), s(&[&[1, 0], &[0, 1]])];
        assert!(matches!(is_ke_point(&mats), Err(Error::NotSimplicial)));
    }

    #[test]
    fn randomized_mode_is_seeded() {
        let v = volume_function(&principal_g2()).unwrap();
        let r1 = verify_ma_identity(&v, MaMode::Randomized, 5, 42).unwrap();
        assert!(r1.holds);
        assert_eq!(r1.seed, Some(42));
        assert!(matches!(
            verify_ma_identity(&v, MaMode::Randomized, 0, 42),
            Err(Error::Precondition(_))
        ));
    }

    #[test]
    fn wrong_volume_produces_witness() {
        let v = volume_function(&principal_g2()).unwrap();
        let r = check_ma_identity(2, v.f(), &BigInt::from(2), MaMode::Symbolic, 1, 0).unwrap();
        assert!(!r.holds);
        assert_eq!(r.witnesses.len(), 1);
        let w = &r.witnesses[0];
        assert_ne!(w.lhs, w.rhs);
        let r = check_ma_identity(2, v.f(), &BigInt::from(2), MaMode::Randomized, 3, 9).unwrap();
        assert_eq!(r.witnesses.len(), 3);
    }

    #[test]
    fn closed_form_examples() {
        let b = |rows: [[i64; 3]; 3]| rows.map(|r| r.map(BigInt::from));
        let c = g2_closed_form(&b([[1, 0, 0], [0, 0, 1], [1, -1, 1]]));
        assert_eq!(
            [c.a, c.b, c.c, c.l, c.m, c.n],
            [rat(0), rat(0), rat(0), rat(1), rat(1), rat(1)]
        );
        // rows of I3 give F = xz − y²
        let c = g2_closed_form(&b([[1, 0, 0], [0, 1, 0], [0, 0, 1]]));
        assert_eq!(
            [c.a, c.b, c.c, c.l, c.m, c.n],
            [rat(0), rat(-1), rat(0), rat(0), rat(1), rat(0)]
        );
        let c = g2_closed_form(&b([[0; 3]; 3]));
        assert!([c.a, c.b, c.c, c.l, c.m, c.n].iter().all(Zero::is_zero));
    }

    #[test]
    fn ke_coefficient_index_checks() {
        let mats = [s(&[&[1, 0], &[0, 0]]), s(&[&[0, 0], &[0, 1]]), s(&[&[0, 1], &[1, 0]])];
        assert_eq!(ke_coefficient(&mats, &[2, 2, 2]).unwrap(), rat(0));
        assert!(matches!(
            ke_coefficient(&mats, &[1, 1, 1]),
            Err(Error::Precondition(_))
        ));
    }

    #[test]
    fn permutation_identity() {
        let mats: Vec<SymIntMat> = principal_g2().generators().to_vec();
        assert!(permutation_check(&mats, &[0, 1, 2], 3, 1).unwrap());
        assert!(permutation_check(&mats, &[1, 0, 2], 3, 1).unwrap());
        assert!(permutation_check(&mats, &[1, 1, 2], 3, 1).is_err());
    }

    #[test]
    fn rhs_constant_sign() {
        assert_eq!(ma_constant(1, &BigInt::one()), rat(-1));
        assert_eq!(ma_constant(2, &BigInt::one()), rat(-2));
        assert_eq!(ma_constant(3, &BigInt::one()), rat(8));
        assert_eq!(ma_constant(2, &BigInt::from(3)), rat(-18));
    }

    #[test]
    fn t_determinant_is_even() {
        // parity: identity at x and −x agree for the principal cone
        let v = volume_function(&principal_g2()).unwrap();
        let d = Derivatives::new(v.f()).unwrap();
        let p = vec![rat(2), rat(3), rat(7)];
        let m: Vec<Rational> = p.iter().map(|q| -q.clone()).collect();
        assert_eq!(d.det_t_at(&p).unwrap().0, d.det_t_at(&m).unwrap().0);
        assert!(!d.det_t_at(&p).unwrap().0.is_positive());
    }
}
