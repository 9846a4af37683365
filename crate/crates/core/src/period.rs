//! Numeric checks on the Siegel space `ℌ_g`, its Hodge filtrations and the
//! nilpotent cones attached to cusps. Every predicate takes its tolerance
//! explicitly.
//!
//! Conventions: `V = ℝ^{2g}` with basis `e_1..e_{2g}` and
//! `ψ = [[0, −I], [I, 0]]`. A point `τ` spans `F¹` by the columns of `(τ; I)`,
//! and the polarisation form on `F¹` is `H = i · Fᵀ ψ F̄`, so `τ = iI` gives `H = 2I`.

use nalgebra::DMatrix;
use num_complex::Complex64;
use rand::Rng;
use serde::{Deserialize, Deserializer, Serialize, Serializer};

use crate::error::{Error, Result};

pub type RMat = DMatrix<f64>;
pub type CMat = DMatrix<Complex64>;

const I: Complex64 = Complex64::new(0.0, 1.0);

/// Complex matrix with finite entries.
#[derive(Clone, Debug, PartialEq)]
pub struct ComplexMat(CMat);

impl ComplexMat {
    pub fn new(m: CMat) -> Result<Self> {
        if m.iter().any(|z| !z.re.is_finite() || !z.im.is_finite()) {
            return Err(Error::Numeric("non-finite entry".into()));
        }
        Ok(ComplexMat(m))
    }

    pub fn from_parts(re: &RMat, im: &RMat) -> Result<Self> {
        if re.shape() != im.shape() {
            return Err(Error::Dimension("real and imaginary parts differ in shape".into()));
        }
        Self::new(CMat::from_fn(re.nrows(), re.ncols(), |r, c| {
            Complex64::new(re[(r, c)], im[(r, c)])
        }))
    }

    pub fn identity(g: usize) -> Self {
        ComplexMat(CMat::identity(g, g))
    }

    /// `i · I_g`
    pub fn i_identity(g: usize) -> Self {
        ComplexMat(CMat::identity(g, g) * I)
    }

    pub fn rows(&self) -> usize {
        self.0.nrows()
    }

    pub fn cols(&self) -> usize {
        self.0.ncols()
    }

    pub fn is_square(&self) -> bool {
        self.rows() == self.cols()
    }

    pub fn matrix(&self) -> &CMat {
        &self.0
    }

    pub fn re(&self) -> RMat {
        self.0.map(|z| z.re)
    }

    pub fn im(&self) -> RMat {
        self.0.map(|z| z.im)
    }
}

#[derive(Serialize, Deserialize)]
struct ComplexJson {
    re: Vec<Vec<f64>>,
    im: Vec<Vec<f64>>,
}

fn rows_to_rmat(rows: &[Vec<f64>]) -> Result<RMat> {
    let r = rows.len();
    let c = rows.first().map_or(0, Vec::len);
    if r == 0 || c == 0 || rows.iter().any(|x| x.len() != c) {
        return Err(Error::Malformed("matrix rows must be non-empty and rectangular".into()));
    }
    Ok(RMat::from_fn(r, c, |i, j| rows[i][j]))
}

fn rmat_to_rows(m: &RMat) -> Vec<Vec<f64>> {
    (0..m.nrows())
        .map(|r| (0..m.ncols()).map(|c| m[(r, c)]).collect())
        .collect()
}

pub fn real_matrix(rows: &[Vec<f64>]) -> Result<RMat> {
    let m = rows_to_rmat(rows)?;
    if m.iter().any(|x| !x.is_finite()) {
        return Err(Error::Numeric("non-finite entry".into()));
    }
    Ok(m)
}

impl Serialize for ComplexMat {
    fn serialize<S: Serializer>(&self, s: S) -> std::result::Result<S::Ok, S::Error> {
        ComplexJson {
            re: rmat_to_rows(&self.re()),
            im: rmat_to_rows(&self.im()),
        }
        .serialize(s)
    }
}

impl<'de> Deserialize<'de> for ComplexMat {
    fn deserialize<D: Deserializer<'de>>(d: D) -> std::result::Result<Self, D::Error> {
        use serde::de::Error as _;
        let raw = ComplexJson::deserialize(d)?;
        let re = rows_to_rmat(&raw.re).map_err(D::Error::custom)?;
        let im = rows_to_rmat(&raw.im).map_err(D::Error::custom)?;
        ComplexMat::from_parts(&re, &im).map_err(D::Error::custom)
    }
}

/// `ψ = [[0, −I_g], [I_g, 0]]`.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct SymplecticForm {
    pub g: usize,
}

impl SymplecticForm {
    pub fn new(g: usize) -> Self {
        SymplecticForm { g }
    }

    pub fn matrix(&self) -> RMat {
        let g = self.g;
        RMat::from_fn(2 * g, 2 * g, |r, c| {
            if r < g && c == r + g {
                -1.0
            } else if r >= g && c + g == r {
                1.0
            } else {
                0.0
            }
        })
    }

    pub fn complex_matrix(&self) -> CMat {
        self.matrix().map(|x| Complex64::new(x, 0.0))
    }
}

fn max_abs(m: &CMat) -> f64 {
    m.iter().map(|z| z.norm()).fold(0.0, f64::max)
}

fn max_abs_real(m: &RMat) -> f64 {
    m.iter().map(|x| x.abs()).fold(0.0, f64::max)
}

/// Smallest eigenvalue of the symmetric part of a real square matrix.
pub fn min_sym_eigenvalue(m: &RMat) -> f64 {
    let sym = (m + m.transpose()) * 0.5;
    sym.symmetric_eigen()
        .eigenvalues
        .iter()
        .copied()
        .fold(f64::INFINITY, f64::min)
}

/// Smallest eigenvalue of the Hermitian part of a complex square matrix.
pub fn min_hermitian_eigenvalue(m: &CMat) -> f64 {
    let herm = (m + m.adjoint()) * Complex64::new(0.5, 0.0);
    herm.symmetric_eigen()
        .eigenvalues
        .iter()
        .copied()
        .fold(f64::INFINITY, f64::min)
}

pub fn siegel_membership(tau: &ComplexMat, tol: f64) -> Result<bool> {
    check_tol(tol)?;
    if !tau.is_square() {
        return Err(Error::Dimension(format!(
            "τ is {}x{}",
            tau.rows(),
            tau.cols()
        )));
    }
    let m = tau.matrix();
    if max_abs(&(m - m.transpose())) > tol {
        return Ok(false);
    }
    Ok(min_sym_eigenvalue(&tau.im()) > tol)
}

fn check_tol(tol: f64) -> Result<()> {
    if tol.is_finite() && tol > 0.0 {
        Ok(())
    } else {
        Err(Error::Precondition(format!("tolerance must be positive, got {tol}")))
    }
}

/// Columns of `(τ; I_g)`.
pub fn filtration_from_tau(tau: &ComplexMat, tol: f64) -> Result<ComplexMat> {
    if !siegel_membership(tau, tol)? {
        return Err(Error::Precondition("τ is not in the Siegel space".into()));
    }
    let g = tau.rows();
    let m = tau.matrix();
    ComplexMat::new(CMat::from_fn(2 * g, g, |r, c| {
        if r < g {
            m[(r, c)]
        } else if r - g == c {
            Complex64::new(1.0, 0.0)
        } else {
            Complex64::new(0.0, 0.0)
        }
    }))
}

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct RiemannReport {
    pub holds: bool,
    /// `‖Fᵀ ψ F‖∞`
    pub isotropy_defect: f64,
    /// Smallest eigenvalue of `i · Fᵀ ψ F̄`.
    pub min_eigenvalue: f64,
}

pub fn riemann_report(f: &ComplexMat, tol: f64) -> Result<RiemannReport> {
    check_tol(tol)?;
    let (rows, g) = (f.rows(), f.cols());
    if rows != 2 * g {
        return Err(Error::Dimension(format!("filtration basis is {rows}x{g}, expected 2g x g")));
    }
    let m = f.matrix();
    let smallest = m
        .clone()
        .svd(false, false)
        .singular_values
        .iter()
        .copied()
        .fold(f64::INFINITY, f64::min);
    if smallest <= tol {
        return Err(Error::Numeric(format!(
            "filtration basis is rank deficient (smallest singular value {smallest:e})"
        )));
    }
    let psi = SymplecticForm::new(g).complex_matrix();
    let iso = m.transpose() * &psi * m;
    let h = m.transpose() * &psi * m.map(|z| z.conj()) * I;
    let isotropy_defect = max_abs(&iso);
    let min_eigenvalue = min_hermitian_eigenvalue(&h);
    Ok(RiemannReport {
        holds: isotropy_defect <= tol && min_eigenvalue > tol,
        isotropy_defect,
        min_eigenvalue,
    })
}

pub fn riemann_check(f: &ComplexMat, tol: f64) -> Result<bool> {
    Ok(riemann_report(f, tol)?.holds)
}

/// Nilpotent `N` of the positive cone of the cusp `𝔉_k`: the symmetric block
/// `u` sits at rows `k..g`, columns `g+k..2g`.
#[derive(Clone, Debug, PartialEq)]
pub struct CuspNilpotent {
    g: usize,
    k: usize,
    u: RMat,
}

impl CuspNilpotent {
    pub fn new(g: usize, k: usize, u: RMat) -> Result<Self> {
        if g == 0 || k >= g {
            return Err(Error::Malformed(format!("cusp depth k = {k} for g = {g}")));
        }
        let m = g - k;
        if u.nrows() != m || u.ncols() != m {
            return Err(Error::Malformed(format!(
                "block u is {}x{}, expected {m}x{m}",
                u.nrows(),
                u.ncols()
            )));
        }
        if u.iter().any(|x| !x.is_finite()) {
            return Err(Error::Numeric("non-finite entry".into()));
        }
        if max_abs_real(&(&u - u.transpose())) > 0.0 {
            return Err(Error::NotSymmetric);
        }
        Ok(CuspNilpotent { g, k, u })
    }

    pub fn g(&self) -> usize {
        self.g
    }

    pub fn k(&self) -> usize {
        self.k
    }

    pub fn u(&self) -> &RMat {
        &self.u
    }

    pub fn matrix(&self) -> RMat {
        let (g, k) = (self.g, self.k);
        let mut n = RMat::zeros(2 * g, 2 * g);
        n.view_mut((k, g + k), (g - k, g - k)).copy_from(&self.u);
        n
    }
}

pub fn positive_cone_membership(n: &CuspNilpotent, tol: f64) -> Result<bool> {
    check_tol(tol)?;
    Ok(min_sym_eigenvalue(n.u()) > tol)
}

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct WeightFiltration {
    pub dim_image: usize,
    pub dim_kernel: usize,
    /// Orthonormal basis of `W_{−1} = Im N`, as columns.
    #[serde(serialize_with = "ser_columns")]
    pub image_basis: RMat,
    /// Orthonormal basis of `W_0 = Ker N`, as columns.
    #[serde(serialize_with = "ser_columns")]
    pub kernel_basis: RMat,
    pub image_in_kernel: bool,
}

fn ser_columns<S: Serializer>(m: &RMat, s: S) -> std::result::Result<S::Ok, S::Error> {
    s.collect_seq((0..m.ncols()).map(|c| m.column(c).iter().copied().collect::<Vec<f64>>()))
}

pub fn weight_filtration(n: &CuspNilpotent, tol: f64) -> Result<WeightFiltration> {
    check_tol(tol)?;
    let nm = n.matrix();
    if max_abs_real(&(&nm * &nm)) > tol {
        return Err(Error::Precondition("N² ≠ 0".into()));
    }
    let dim = nm.nrows();
    let svd = nm.clone().svd(true, true);
    let u = svd.u.expect("requested U");
    let vt = svd.v_t.expect("requested Vᵀ");
    let big: Vec<usize> = (0..dim).filter(|&i| svd.singular_values[i] > tol).collect();
    let small: Vec<usize> = (0..dim).filter(|&i| svd.singular_values[i] <= tol).collect();
    let image_basis = RMat::from_fn(dim, big.len(), |r, c| u[(r, big[c])]);
    let kernel_basis = RMat::from_fn(dim, small.len(), |r, c| vt[(small[c], r)]);
    let image_in_kernel = max_abs_real(&(&nm * &image_basis)) <= tol;
    Ok(WeightFiltration {
        dim_image: big.len(),
        dim_kernel: small.len(),
        image_basis,
        kernel_basis,
        image_in_kernel,
    })
}

/// `exp(A)` for nilpotent `A` by its (finite) power series.
pub fn exp_nilpotent(a: &CMat) -> Result<CMat> {
    let n = a.nrows();
    let mut out = CMat::identity(n, n);
    let mut term = CMat::identity(n, n);
    for k in 1..=n {
        term = &term * a / Complex64::new(k as f64, 0.0);
        if term.iter().all(|z| *z == Complex64::new(0.0, 0.0)) {
            return Ok(out);
        }
        out += &term;
    }
    if term.iter().all(|z| *z == Complex64::new(0.0, 0.0)) {
        Ok(out)
    } else {
        Err(Error::Precondition("matrix is not nilpotent".into()))
    }
}

/// `exp(iN)`; equal to `I + iN` since `N² = 0`.
pub fn exp_i_n(n: &CuspNilpotent) -> Result<CMat> {
    exp_nilpotent(&(n.matrix().map(|x| Complex64::new(x, 0.0)) * I))
}

/// Limit filtration `F̌` attached to the cusp `𝔉_k`: the columns of `(τ̌; I)`
/// with `τ̌ = diag(τ_mid, 0)` and `τ_mid ∈ ℌ_k`.
pub fn dual_filtration(g: usize, tau_mid: Option<&ComplexMat>) -> Result<ComplexMat> {
    let k = tau_mid.map_or(0, ComplexMat::rows);
    if k >= g {
        return Err(Error::Malformed(format!("middle block of genus {k} for g = {g}")));
    }
    let mut f = CMat::zeros(2 * g, g);
    for j in 0..g {
        f[(g + j, j)] = Complex64::new(1.0, 0.0);
    }
    if let Some(t) = tau_mid {
        if !t.is_square() {
            return Err(Error::Dimension("middle block must be square".into()));
        }
        f.view_mut((0, 0), (k, k)).copy_from(t.matrix());
    }
    ComplexMat::new(f)
}

/// `exp(iN) F̌` lies in the period domain.
pub fn nilpotent_orbit_check(fdual: &ComplexMat, n: &CuspNilpotent, tol: f64) -> Result<bool> {
    if !positive_cone_membership(n, tol)? {
        return Err(Error::Precondition("N is not in the positive cone".into()));
    }
    if fdual.rows() != 2 * n.g() || fdual.cols() != n.g() {
        return Err(Error::Dimension(format!(
            "filtration basis is {}x{}, expected {}x{}",
            fdual.rows(),
            fdual.cols(),
            2 * n.g(),
            n.g()
        )));
    }
    let moved = ComplexMat::new(exp_i_n(n)? * fdual.matrix())?;
    riemann_check(&moved, tol)
}

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct BlockVolumeReport {
    pub holds: bool,
    pub det_im_tau: f64,
    pub det_im_tau_prime: f64,
    pub det_im_z: f64,
    pub residual: f64,
    pub tau: ComplexMat,
}

/// `τ = [[τ′, A − τ′B], [(A − τ′B)ᵀ, Z + Bᵀτ′B − (AᵀB + BᵀA)/2]]` for `S = A + iB`.
pub fn assemble_tau(tau_p: &ComplexMat, z: &ComplexMat, s: &ComplexMat) -> Result<ComplexMat> {
    let (m, k) = (tau_p.rows(), z.rows());
    if !tau_p.is_square() || !z.is_square() || s.rows() != m || s.cols() != k {
        return Err(Error::Dimension("incompatible block sizes".into()));
    }
    let c = |x: RMat| x.map(|v| Complex64::new(v, 0.0));
    let (a, b) = (c(s.re()), c(s.im()));
    let tp = tau_p.matrix();
    let off = &a - tp * &b;
    let half = Complex64::new(0.5, 0.0);
    let corner = z.matrix() + b.transpose() * tp * &b
        - (a.transpose() * &b + b.transpose() * &a) * half;
    let mut tau = CMat::zeros(m + k, m + k);
    tau.view_mut((0, 0), (m, m)).copy_from(tp);
    tau.view_mut((0, m), (m, k)).copy_from(&off);
    tau.view_mut((m, 0), (k, m)).copy_from(&off.transpose());
    tau.view_mut((m, m), (k, k)).copy_from(&corner);
    ComplexMat::new(tau)
}

pub fn block_volume_report(
    tau_p: &ComplexMat,
    z: &ComplexMat,
    s: &ComplexMat,
    tol: f64,
) -> Result<BlockVolumeReport> {
    if !siegel_membership(tau_p, tol)? || !siegel_membership(z, tol)? {
        return Err(Error::Precondition("blocks must lie in the Siegel space".into()));
    }
    let tau = assemble_tau(tau_p, z, s)?;
    let det_im_tau = tau.im().determinant();
    let det_im_tau_prime = tau_p.im().determinant();
    let det_im_z = z.im().determinant();
    let residual = (det_im_tau - det_im_tau_prime * det_im_z).abs();
    let holds = residual <= tol * (1.0 + det_im_tau.abs()) && siegel_membership(&tau, tol)?;
    Ok(BlockVolumeReport {
        holds,
        det_im_tau,
        det_im_tau_prime,
        det_im_z,
        residual,
        tau,
    })
}

pub fn block_volume_identity(
    tau_p: &ComplexMat,
    z: &ComplexMat,
    s: &ComplexMat,
    tol: f64,
) -> Result<bool> {
    Ok(block_volume_report(tau_p, z, s, tol)?.holds)
}

/// `(Aτ + B)(Cτ + D)⁻¹` for `M = [[A, B], [C, D]]`.
pub fn sp_act(m: &RMat, tau: &ComplexMat) -> Result<ComplexMat> {
    let g = tau.rows();
    if !tau.is_square() || m.nrows() != 2 * g || m.ncols() != 2 * g {
        return Err(Error::Dimension("symplectic matrix must be 2g x 2g".into()));
    }
    let c = |x: RMat| x.map(|v| Complex64::new(v, 0.0));
    let blk = |r: usize, col: usize| c(m.view((r, col), (g, g)).into_owned());
    let t = tau.matrix();
    let num = blk(0, 0) * t + blk(0, g);
    let den = blk(g, 0) * t + blk(g, g);
    let inv = den
        .try_inverse()
        .ok_or_else(|| Error::Numeric("Cτ + D is singular".into()))?;
    ComplexMat::new(num * inv)
}

/// `s_o = [[0, I], [−I, 0]]`, acting by `τ ↦ −τ⁻¹`.
pub fn involution(g: usize) -> RMat {
    -SymplecticForm::new(g).matrix()
}

/// Whether `Mᵀ ψ M = ψ` to `tol`.
pub fn is_symplectic(m: &RMat, tol: f64) -> bool {
    let g = m.nrows() / 2;
    if m.nrows() != 2 * g || m.ncols() != 2 * g {
        return false;
    }
    let psi = SymplecticForm::new(g).matrix();
    max_abs_real(&(m.transpose() * &psi * m - &psi)) <= tol
}

fn random_symmetric(rng: &mut impl Rng, g: usize) -> RMat {
    let a = RMat::from_fn(g, g, |_, _| rng.gen_range(-1.0..1.0));
    (&a + a.transpose()) * 0.5
}

/// `X + i(QQᵀ + 0.1 I)` with `X` symmetric and `Q` entries uniform in `[−1, 1]`.
pub fn random_siegel_point(rng: &mut impl Rng, g: usize) -> ComplexMat {
    let x = random_symmetric(rng, g);
    let q = RMat::from_fn(g, g, |_, _| rng.gen_range(-1.0..1.0));
    let y = &q * q.transpose() + RMat::identity(g, g) * 0.1;
    ComplexMat::from_parts(&x, &y).expect("finite by construction")
}

/// Random point whose imaginary part has eigenvalues in `[lo, hi]`.
pub fn random_conditioned_siegel_point(rng: &mut impl Rng, g: usize, lo: f64, hi: f64) -> ComplexMat {
    let x = random_symmetric(rng, g);
    let a = RMat::from_fn(g, g, |_, _| rng.gen_range(-1.0..1.0));
    let q = a.qr().q();
    let d = RMat::from_diagonal(&nalgebra::DVector::from_fn(g, |_, _| rng.gen_range(lo..=hi)));
    let y = &q * d * q.transpose();
    let y = (&y + y.transpose()) * 0.5;
    ComplexMat::from_parts(&x, &y).expect("finite by construction")
}

/// Symmetric matrix with eigenvalues in `[lo, hi]`.
pub fn random_positive_definite(rng: &mut impl Rng, g: usize, lo: f64, hi: f64) -> RMat {
    random_conditioned_siegel_point(rng, g, lo, hi).im()
}

pub fn random_complex(rng: &mut impl Rng, rows: usize, cols: usize) -> ComplexMat {
    let re = RMat::from_fn(rows, cols, |_, _| rng.gen_range(-1.0..1.0));
    let im = RMat::from_fn(rows, cols, |_, _| rng.gen_range(-1.0..1.0));
    ComplexMat::from_parts(&re, &im).expect("finite by construction")
}
