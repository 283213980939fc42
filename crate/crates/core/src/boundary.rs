//! Boundary-state geometry: construct states with zero signed concurrence
//! from local filters and Bell-diagonal weights, evaluate the gradient-like
//! Z operator in closed form, assemble the boundary normal in both the
//! eigenbasis and Wootters representations, emit entangled rays
//! `rho(x) = sigma + x delta`, and check the extremal conditions and the
//! rank of the linear system pinning the W matrix.

use crate::error::{Error, Result};
use crate::linalg::{eig_hermitian, kron, sqrt_psd, CMat, CVec, C};
use crate::normal_form::{gram_matrices, wootters_decomposition, GramMatrices, WoottersBasis};
use crate::scalar::{fl, Scalar};
use crate::states::{
    concurrence_signed, pauli, relative_entropy, tilde_state, DensityMatrix, MagicBasis,
};
use num_traits::One;

/// A boundary state together with everything the closed-form normal-vector
/// construction needs: Wootters basis, Gram matrices, eigendecomposition
/// (descending), the change-of-representation unitary `U`, the logarithmic
/// mean matrix `G`, and the diagonal `W`.
#[derive(Clone, Debug)]
pub struct BoundaryState<T: Scalar> {
    pub sigma: DensityMatrix<T>,
    pub basis: WoottersBasis<T>,
    pub gram: GramMatrices<T>,
    /// Eigenvalues of sigma, descending.
    pub gamma: [T; 4],
    /// Columns are the eigenvectors of sigma, matching `gamma`.
    pub eigvecs: CMat<T>,
    pub u: CMat<T>,
    /// Logarithmic means of eigenvalue pairs, `g[(i,i)] = gamma_i`.
    pub g: CMat<T>,
    /// Diagonal of W: `{1, -1, -1, -1}`.
    pub w: [T; 4],
    pub sqrt_q: CMat<T>,
    pub sqrt_pi: CMat<T>,
}

/// The boundary normal at sigma: Hermitian traceless `delta` in the
/// computational basis, its coefficient matrices in the sigma eigenbasis
/// (`delta_e`) and the Wootters representation (`delta_l`), and the
/// first-order concurrence growth rate `delta_c > 0`.
#[derive(Clone, Debug)]
pub struct NormalVector<T: Scalar> {
    pub delta: CMat<T>,
    pub delta_e: CMat<T>,
    pub delta_l: CMat<T>,
    pub delta_c: T,
}

/// One point on the entangled ray `rho(x) = sigma + x delta`.
#[derive(Clone, Debug)]
pub struct RayPoint<T: Scalar> {
    pub x: T,
    pub rho: DensityMatrix<T>,
    /// `S(rho(x) || sigma)` in nats.
    pub s_exact: T,
    pub c_signed: T,
}

fn log_mean_matrix<T: Scalar>(gamma: &[T; 4]) -> CMat<T> {
    let zero_tol = fl::<T>(1e-14);
    CMat::from_fn(4, 4, |i, j| {
        let (a, b) = (gamma[i], gamma[j]);
        let v = if i == j {
            a
        } else if a <= zero_tol || b <= zero_tol {
            // Analytic limit: zero when exactly one eigenvalue vanishes,
            // and gamma itself on a degenerate pair (including 0).
            if (a - b).abs() <= zero_tol {
                a.max(b)
            } else {
                T::zero()
            }
        } else {
            crate::linalg::log_mean(a, b).expect("positive eigenvalues")
        };
        C::new(v, T::zero())
    })
}

/// Assemble the geometry shared by every constructor: Gram matrices, the
/// eigendecomposition of sigma (descending), the exact change-of-frame
/// unitary `U = V† Phi sqrt(Pi)`, and the log-mean matrix.
fn assemble<T: Scalar>(sigma: DensityMatrix<T>, basis: WoottersBasis<T>) -> Result<BoundaryState<T>> {
    let gram = gram_matrices(&basis);
    let sqrt_q = sqrt_psd(&gram.q)?;
    let sqrt_pi = sqrt_psd(&gram.pi)?;

    let eig = eig_hermitian(sigma.mat(), fl(1e-10))?;
    let mut gamma = [T::zero(); 4];
    let mut eigvecs = CMat::zeros(4, 4);
    for k in 0..4 {
        gamma[k] = eig.values[3 - k];
        eigvecs.set_col(k, &eig.vectors.col(3 - k));
    }

    let phi = basis.matrix();
    let u = &(&eigvecs.adjoint() * &phi) * &sqrt_pi;
    let g = log_mean_matrix(&gamma);

    let w = [T::one(), -T::one(), -T::one(), -T::one()];
    Ok(BoundaryState { sigma, basis, gram, gamma, eigvecs, u, g, w, sqrt_q, sqrt_pi })
}

/// Build the boundary state `(1/N)(F_A ⊗ F_B) sigma_BD (F_A ⊗ F_B)†` with
/// canonical weights `(1/2, p1, p2, p3)`; the Wootters basis is taken
/// directly as `phi_i = (F_A ⊗ F_B) e_i`, preserving the caller's slot
/// order.
pub fn make_boundary_state<T: Scalar>(
    fa: &CMat<T>,
    fb: &CMat<T>,
    p1: T,
    p2: T,
    p3: T,
) -> Result<BoundaryState<T>> {
    let half = fl::<T>(0.5);
    let ps = [p1, p2, p3];
    if ps.iter().any(|&p| p <= T::zero() || p >= half) {
        return Err(Error::SimplexViolation(format!(
            "p_i must lie strictly inside (0, 1/2); got ({p1}, {p2}, {p3})"
        )));
    }
    if (p1 + p2 + p3 - half).abs() > fl(1e-12) {
        return Err(Error::SimplexViolation(format!(
            "p1 + p2 + p3 must equal 1/2; got {}",
            p1 + p2 + p3
        )));
    }
    let fa = unit_det(fa)?;
    let fb = unit_det(fb)?;

    let mb = MagicBasis::<T>::standard();
    let f = kron(&fa, &fb);
    let weights = [half, p1, p2, p3];
    let phi_raw: Vec<CVec<T>> = mb.e.iter().map(|e| f.mul_vec(e)).collect();

    let mut un = CMat::zeros(4, 4);
    for k in 0..4 {
        un = un.add(&phi_raw[k].outer(&phi_raw[k]).scaled_re(weights[k]));
    }
    let n = un.trace().re;
    let sigma = DensityMatrix::new_unchecked(un.scaled_re(T::one() / n).hermitized());
    let lambda = [half / n, p1 / n, p2 / n, p3 / n];
    let basis = WoottersBasis {
        phi: [
            phi_raw[0].clone(),
            phi_raw[1].clone(),
            phi_raw[2].clone(),
            phi_raw[3].clone(),
        ],
        lambda,
    };
    assemble(sigma, basis)
}

/// Rescale an invertible 2x2 filter to unit determinant (principal branch).
fn unit_det<T: Scalar>(f: &CMat<T>) -> Result<CMat<T>> {
    let d = f.det();
    if d.norm() < fl(1e-12) {
        return Err(Error::SingularFilter(d.norm().to_f64().unwrap_or(0.0)));
    }
    Ok(f.scaled(C::<T>::one() / d.sqrt()))
}

/// Boundary state from an externally supplied density matrix: validates
/// that the signed concurrence vanishes within `c_tol` and derives the
/// Wootters basis by Takagi factorization.
pub fn boundary_state_from_density<T: Scalar>(
    sigma: DensityMatrix<T>,
    c_tol: T,
) -> Result<BoundaryState<T>> {
    let c = concurrence_signed(&sigma).value;
    if c.abs() > c_tol {
        return Err(Error::BoundaryViolation(c.to_f64().unwrap_or(f64::NAN)));
    }
    let basis = wootters_decomposition(&sigma)?;
    assemble(sigma, basis)
}

/// Regularized constructor for rank-deficient boundary subspaces: zero
/// weights are replaced by `epsilon` (the rest rescaled to keep the simplex
/// constraint) and the resulting full-rank state is returned; callers
/// extrapolate `epsilon -> 0`.
pub fn boundary_state_limit<T: Scalar>(
    fa: &CMat<T>,
    fb: &CMat<T>,
    p1: T,
    p2: T,
    p3: T,
    epsilon: T,
) -> Result<BoundaryState<T>> {
    let half = fl::<T>(0.5);
    let ps = [p1, p2, p3];
    if ps.iter().any(|&p| p < T::zero() || p > half) {
        return Err(Error::SimplexViolation(format!(
            "p_i must lie in [0, 1/2]; got ({p1}, {p2}, {p3})"
        )));
    }
    if (p1 + p2 + p3 - half).abs() > fl(1e-12) {
        return Err(Error::SimplexViolation(format!(
            "p1 + p2 + p3 must equal 1/2; got {}",
            p1 + p2 + p3
        )));
    }
    if !ps.iter().any(|&p| p.is_zero()) {
        return Err(Error::SimplexViolation(
            "limit constructor requires at least one zero weight".into(),
        ));
    }
    if epsilon <= T::zero() || epsilon > fl(1e-3) {
        return Err(Error::SimplexViolation(format!(
            "epsilon must lie in (0, 1e-3]; got {epsilon}"
        )));
    }
    let k = fl::<T>(ps.iter().filter(|p| p.is_zero()).count() as f64);
    let scale = (half - k * epsilon) / half;
    let q: Vec<T> = ps.iter().map(|&p| if p.is_zero() { epsilon } else { p * scale }).collect();
    make_boundary_state(fa, fb, q[0], q[1], q[2])
}

/// The operator `Z = ∫ (sigma+z)^{-1} rho (sigma+z)^{-1} dz - I`, evaluated
/// in closed form in sigma's eigenbasis by Hadamard division with the
/// logarithmic-mean matrix.
pub fn z_operator<T: Scalar>(rho: &DensityMatrix<T>, sigma: &DensityMatrix<T>) -> Result<CMat<T>> {
    let eig = eig_hermitian(sigma.mat(), fl(1e-10))?;
    if eig.values[0] < fl(1e-10) {
        return Err(Error::RankDeficientSigma(eig.values[0].to_f64().unwrap_or(f64::NAN)));
    }
    let mut gamma = [T::zero(); 4];
    let mut v = CMat::zeros(4, 4);
    for k in 0..4 {
        gamma[k] = eig.values[3 - k];
        v.set_col(k, &eig.vectors.col(3 - k));
    }
    let g = log_mean_matrix(&gamma);
    let re = &(&v.adjoint() * rho.mat()) * &v;
    let ze = CMat::from_fn(4, 4, |i, j| {
        let d = re[(i, j)] / g[(i, j)];
        if i == j {
            d - C::one()
        } else {
            d
        }
    });
    Ok((&(&v * &ze) * &v.adjoint()).hermitized())
}

/// The nine extremal residuals at (rho, sigma): `|Tr (I ⊗ sigma_i) Z sigma|`
/// and `|Tr (sigma_i ⊗ I) Z sigma|` for i = 1..3, plus the subspace
/// conditions `|<phi_i|Z|phi_i> + <phi_0|Z|phi_0>|` for i = 1..3.
pub fn extremal_residuals<T: Scalar>(
    rho: &DensityMatrix<T>,
    bs: &BoundaryState<T>,
) -> Result<[T; 9]> {
    let z = z_operator(rho, &bs.sigma)?;
    let zs = &z * bs.sigma.mat();
    let mut out = [T::zero(); 9];
    for i in 1..=3 {
        let pb = kron(&CMat::identity(2), &pauli(i));
        out[i - 1] = (&pb * &zs).trace().norm();
        let pa = kron(&pauli(i), &CMat::identity(2));
        out[2 + i] = (&pa * &zs).trace().norm();
    }
    let phi0 = &bs.basis.phi[0];
    let z_phi0 = phi0.dot_h(&z.mul_vec(phi0));
    for i in 1..=3 {
        let phii = &bs.basis.phi[i];
        let z_phii = phii.dot_h(&z.mul_vec(phii));
        out[5 + i] = (z_phii + z_phi0).norm();
    }
    Ok(out)
}

/// The boundary normal: `Delta^E = (U sqrt(Pi) W sqrt(Pi) U†) ∘ G` in the
/// eigenbasis, `Delta^Lambda = sqrt(Pi) U† Delta^E U sqrt(Pi)` in the
/// Wootters representation, and `delta` rotated to the computational basis.
pub fn normal_vector<T: Scalar>(bs: &BoundaryState<T>) -> NormalVector<T> {
    let w = CMat::diag_re(&bs.w);
    let mid = &(&bs.sqrt_pi * &w) * &bs.sqrt_pi;
    let y = &(&bs.u * &mid) * &bs.u.adjoint();
    let delta_e = y.hadamard(&bs.g).hermitized();
    let delta_l = (&(&(&bs.sqrt_pi * &bs.u.adjoint()) * &delta_e) * &(&bs.u * &bs.sqrt_pi))
        .hermitized();
    let delta = (&(&bs.eigvecs * &delta_e) * &bs.eigvecs.adjoint()).hermitized();
    let mut delta_c = T::zero();
    for i in 0..4 {
        delta_c = delta_c + (delta_l[(i, i)] * C::new(bs.w[i], T::zero())).re;
    }
    NormalVector { delta, delta_e, delta_l, delta_c }
}

/// `rho(x) = sigma + x delta`, with the exact relative entropy to sigma and
/// the signed concurrence at that point.
pub fn entangled_ray<T: Scalar>(bs: &BoundaryState<T>, x: T) -> Result<RayPoint<T>> {
    let nv = normal_vector(bs);
    entangled_ray_with(bs, &nv, x)
}

/// Same as [`entangled_ray`] with a precomputed normal vector.
pub fn entangled_ray_with<T: Scalar>(
    bs: &BoundaryState<T>,
    nv: &NormalVector<T>,
    x: T,
) -> Result<RayPoint<T>> {
    let m = bs.sigma.mat().add(&nv.delta.scaled_re(x)).hermitized();
    let eig = eig_hermitian(&m, fl(1e-10))?;
    if eig.values[0] < fl(-1e-10) {
        return Err(Error::NotPositiveRay {
            x: x.to_f64().unwrap_or(f64::NAN),
            eigenvalue: eig.values[0].to_f64().unwrap_or(f64::NAN),
        });
    }
    let rho = DensityMatrix::new_unchecked(m);
    let s_exact = relative_entropy(&rho, &bs.sigma)?;
    let c_signed = concurrence_signed(&rho).value;
    Ok(RayPoint { x, rho, s_exact, c_signed })
}

/// Largest `x >= 0` keeping `sigma + x delta` positive semidefinite, from
/// the spectrum of `sigma^{-1/2} delta sigma^{-1/2}`.
pub fn x_max_psd<T: Scalar>(bs: &BoundaryState<T>) -> T {
    let nv = normal_vector(bs);
    x_max_psd_with(bs, &nv)
}

pub fn x_max_psd_with<T: Scalar>(bs: &BoundaryState<T>, nv: &NormalVector<T>) -> T {
    let eig = eig_hermitian(bs.sigma.mat(), fl(1e-10)).expect("sigma Hermitian");
    let inv_sqrt: Vec<T> = eig.values.iter().map(|&g| T::one() / g.max(fl(1e-300)).sqrt()).collect();
    let d = CMat::diag_re(&inv_sqrt);
    let isq = &(&eig.vectors * &d) * &eig.vectors.adjoint();
    let m = &(&isq * &nv.delta) * &isq;
    let meig = eig_hermitian(&m.hermitized(), fl(1e-8)).expect("congruence is Hermitian");
    let mu_min = meig.values[0];
    if mu_min >= T::zero() {
        // delta is traceless and nonzero, so this cannot happen for valid
        // boundary states; return the PSD-preserving sentinel anyway.
        return T::infinity();
    }
    -T::one() / mu_min
}

/// Build the 12x12 real linear system pinning the off-diagonal elements of
/// the Hermitian W matrix and report its rank (singular values above
/// `1e-10 * max`) and smallest singular value.
///
/// Coefficients are `<phi_l| P |~phi_m> lambda_l` for the six Pauli
/// directions P; the vanishing of every diagonal coefficient is asserted as
/// a self-check before the system is assembled.
pub fn w_uniqueness_rank<T: Scalar>(bs: &BoundaryState<T>) -> (usize, T) {
    let phi = &bs.basis.phi;
    let lambda = &bs.basis.lambda;
    let tphi: Vec<CVec<T>> = phi.iter().map(tilde_state).collect();

    let mut rows: Vec<[T; 12]> = Vec::with_capacity(12);
    for side in 0..2 {
        for i in 1..=3 {
            let p = if side == 0 {
                kron(&CMat::identity(2), &pauli::<T>(i))
            } else {
                kron(&pauli::<T>(i), &CMat::identity(2))
            };
            let mut coef = CMat::zeros(4, 4);
            for l in 0..4 {
                for m in 0..4 {
                    coef[(l, m)] = phi[l].dot_h(&p.mul_vec(&tphi[m])).scale(lambda[l]);
                }
            }
            // Diagonal coefficients vanish identically for det-1 filters.
            for l in 0..4 {
                debug_assert!(
                    coef[(l, l)].norm() <= fl(1e-12),
                    "diagonal W coefficient must vanish"
                );
            }
            let mut row_re = [T::zero(); 12];
            let mut row_im = [T::zero(); 12];
            let pairs = [(0, 1), (0, 2), (0, 3), (1, 2), (1, 3), (2, 3)];
            for (k, &(a, b)) in pairs.iter().enumerate() {
                // W_ab = x + i y, W_ba = x - i y; the equation term is
                // c_ab W_ba + c_ba W_ab.
                let ca = coef[(a, b)] + coef[(b, a)];
                let cb = (coef[(b, a)] - coef[(a, b)]) * C::i();
                row_re[2 * k] = ca.re;
                row_im[2 * k] = ca.im;
                row_re[2 * k + 1] = cb.re;
                row_im[2 * k + 1] = cb.im;
            }
            rows.push(row_re);
            rows.push(row_im);
        }
    }

    let a = CMat::from_fn(12, 12, |i, j| C::new(rows[i][j], T::zero()));
    let gram = &a.transpose() * &a;
    let eig = eig_hermitian(&gram.hermitized(), fl(1e-8)).expect("Gram is symmetric");
    let svs: Vec<T> = eig.values.iter().map(|&v| v.max(T::zero()).sqrt()).collect();
    let sv_max = svs[svs.len() - 1];
    let rank = svs.iter().filter(|&&s| s > fl::<T>(1e-10) * sv_max).count();
    (rank, svs[0])
}
