//! Wootters decomposition, the local-filtering normal form (state to
//! canonical Bell-diagonal weights plus determinant-one filters), and the
//! Gram matrices of the non-orthogonal Wootters basis.

use crate::error::{Error, Result};
use crate::linalg::{eig_hermitian, kron, takagi, CMat, CVec, C};
use crate::scalar::{fl, Scalar};
use crate::states::{
    reduce_a, reduce_b, tilde_state, wootters_tau, DensityMatrix, MagicBasis,
};
use num_traits::{One, Zero};

/// Wootters basis of a state: four vectors with `<phi_i|~phi_j> = delta_ij`
/// and weights reconstructing `rho = sum_i lambda_i |phi_i><phi_i|`.
#[derive(Clone, Debug)]
pub struct WoottersBasis<T: Scalar> {
    pub phi: [CVec<T>; 4],
    pub lambda: [T; 4],
}

impl<T: Scalar> WoottersBasis<T> {
    /// 4x4 matrix whose columns are the basis vectors.
    pub fn matrix(&self) -> CMat<T> {
        CMat::from_cols(&self.phi)
    }

    /// Reconstruct `sum_i lambda_i |phi_i><phi_i|`.
    pub fn reconstruct(&self) -> CMat<T> {
        let mut m = CMat::zeros(4, 4);
        for i in 0..4 {
            m = m.add(&self.phi[i].outer(&self.phi[i]).scaled_re(self.lambda[i]));
        }
        m
    }

    /// Largest deviation of `<phi_i|~phi_j>` from the identity.
    pub fn tilde_orthonormality_residual(&self) -> T {
        let mut worst = T::zero();
        for i in 0..4 {
            for j in 0..4 {
                let d = self.phi[i].dot_h(&tilde_state(&self.phi[j]));
                let target = if i == j { C::one() } else { C::zero() };
                worst = worst.max((d - target).norm());
            }
        }
        worst
    }
}

/// Local-filtering normal form `rho = (1/N)(F_A ⊗ F_B) rho_BD (F_A ⊗ F_B)†`
/// with canonical Bell-diagonal weights `p` (descending, so `p_0` maximal)
/// and `det F_A = det F_B = 1`.
#[derive(Clone, Debug)]
pub struct FilterNormalForm<T: Scalar> {
    pub f_a: CMat<T>,
    pub f_b: CMat<T>,
    pub p: [T; 4],
    pub n: T,
}

impl<T: Scalar> FilterNormalForm<T> {
    /// Rebuild the state this normal form describes.
    pub fn reconstruct(&self) -> CMat<T> {
        let mb = MagicBasis::<T>::standard();
        let mut bd = CMat::zeros(4, 4);
        for k in 0..4 {
            bd = bd.add(&mb.e[k].outer(&mb.e[k]).scaled_re(self.p[k]));
        }
        let f = kron(&self.f_a, &self.f_b);
        (&(&f * &bd) * &f.adjoint()).scaled_re(T::one() / self.n)
    }
}

/// Gram matrices of the Wootters basis: `Q_ij = <phi_i|phi_j>`,
/// `Pi_ij = <~phi_i|~phi_j>`; both Hermitian with `Q Q^T = I`, `Pi = Q*`.
#[derive(Clone, Debug)]
pub struct GramMatrices<T: Scalar> {
    pub q: CMat<T>,
    pub pi: CMat<T>,
}

pub fn gram_matrices<T: Scalar>(basis: &WoottersBasis<T>) -> GramMatrices<T> {
    let q = CMat::from_fn(4, 4, |i, j| basis.phi[i].dot_h(&basis.phi[j]));
    let tl: Vec<CVec<T>> = basis.phi.iter().map(tilde_state).collect();
    let pi = CMat::from_fn(4, 4, |i, j| tl[i].dot_h(&tl[j]));
    GramMatrices { q, pi }
}

/// Wootters decomposition of a full-rank state.
///
/// Route: subnormalized eigenvectors `|v_i> = sqrt(gamma_i)|i>`, the
/// symmetric matrix `tau_ij = <v_i|~v_j>`, Takagi factorization of tau,
/// then a per-vector complex rescale enforcing `<phi_i|~phi_i> = 1`.
/// Weights come out descending.
pub fn wootters_decomposition<T: Scalar>(rho: &DensityMatrix<T>) -> Result<WoottersBasis<T>> {
    let eig = eig_hermitian(rho.mat(), fl(1e-10))?;
    if eig.values[0] < fl(1e-10) {
        return Err(Error::RankDeficient(eig.values[0].to_f64().unwrap_or(f64::NAN)));
    }
    let mut a = CMat::zeros(4, 4);
    for j in 0..4 {
        let g = eig.values[j].max(T::zero()).sqrt();
        a.set_col(j, &eig.vectors.col(j).scaled(C::new(g, T::zero())));
    }
    let tau = wootters_tau(rho);
    let tk = takagi(&tau)?;

    // Subnormalized Wootters vectors |w_i> = A u_i satisfy
    // <w_i|~w_j> = D_ij; rescale each by 1/sqrt(conj(t_i)) so the diagonal
    // becomes exactly one.
    let mut phi: Vec<CVec<T>> = Vec::with_capacity(4);
    let mut lambda = [T::zero(); 4];
    for i in 0..4 {
        let w = a.mul_vec(&tk.unitary.col(i));
        let t = w.dot_h(&tilde_state(&w));
        let tn = t.norm();
        if tn < fl(1e-14) {
            return Err(Error::RankDeficient(tn.to_f64().unwrap_or(0.0)));
        }
        let scale = C::<T>::one() / t.conj().sqrt();
        phi.push(w.scaled(scale));
        lambda[i] = tn;
    }

    let mut idx = [0usize, 1, 2, 3];
    idx.sort_by(|&i, &j| lambda[j].partial_cmp(&lambda[i]).unwrap());
    let basis = WoottersBasis {
        phi: [
            phi[idx[0]].clone(),
            phi[idx[1]].clone(),
            phi[idx[2]].clone(),
            phi[idx[3]].clone(),
        ],
        lambda: [lambda[idx[0]], lambda[idx[1]], lambda[idx[2]], lambda[idx[3]]],
    };

    let ortho = basis.tilde_orthonormality_residual();
    if ortho > fl(1e-10) {
        return Err(Error::TildeOrthonormalityFailure(ortho.to_f64().unwrap_or(f64::NAN)));
    }
    let recon = basis.reconstruct().sub(rho.mat()).fro_norm();
    if recon > fl(1e-10) {
        return Err(Error::TildeOrthonormalityFailure(recon.to_f64().unwrap_or(f64::NAN)));
    }
    Ok(basis)
}

const SINKHORN_CAP: usize = 10_000;

/// Inverse square root of a 2x2 Hermitian positive-definite matrix.
fn inv_sqrt_2x2<T: Scalar>(m: &CMat<T>) -> Result<CMat<T>> {
    let eig = eig_hermitian(m, fl(1e-9))?;
    if eig.values[0] <= fl(1e-14) {
        return Err(Error::RankDeficient(eig.values[0].to_f64().unwrap_or(f64::NAN)));
    }
    let d = CMat::diag_re(&[
        T::one() / eig.values[0].sqrt(),
        T::one() / eig.values[1].sqrt(),
    ]);
    Ok(&(&eig.vectors * &d) * &eig.vectors.adjoint())
}

/// Split a product-form 4x4 unitary `S ~ e^{i theta} (A ⊗ B)` into its 2x2
/// factors via the rank-one reshuffle `R[(ik),(jl)] = S[(ij),(kl)]`.
fn factor_product_unitary<T: Scalar>(s: &CMat<T>) -> Result<(CMat<T>, CMat<T>)> {
    let r = CMat::from_fn(4, 4, |rc, cc| {
        let (i, k) = (rc / 2, rc % 2);
        let (j, l) = (cc / 2, cc % 2);
        s[(2 * i + j, 2 * k + l)]
    });
    let mut best = T::zero();
    let (mut r0, mut c0) = (0, 0);
    for i in 0..4 {
        for j in 0..4 {
            let v = r[(i, j)].norm();
            if v > best {
                best = v;
                r0 = i;
                c0 = j;
            }
        }
    }
    if best < fl(1e-8) {
        return Err(Error::ConvergenceFailure { iterations: 0 });
    }
    let pivot = r[(r0, c0)];
    let a = CMat::from_fn(2, 2, |i, k| r[(2 * i + k, c0)] / pivot);
    let b = CMat::from_fn(2, 2, |j, l| r[(r0, 2 * j + l)]);
    let da = a.det();
    let db = b.det();
    if da.norm() < fl(1e-10) || db.norm() < fl(1e-10) {
        return Err(Error::ConvergenceFailure { iterations: 0 });
    }
    Ok((a.scaled(C::<T>::one() / da.sqrt()), b.scaled(C::<T>::one() / db.sqrt())))
}

/// Local-filtering normal form of a full-rank state by Sinkhorn-style
/// alternating normalization of the single-qubit reductions, followed by the
/// local-unitary rotation into the canonical Bell basis with weights sorted
/// descending.
pub fn filter_normal_form<T: Scalar>(rho: &DensityMatrix<T>) -> Result<FilterNormalForm<T>> {
    let eig = eig_hermitian(rho.mat(), fl(1e-10))?;
    if eig.values[0] < fl(1e-10) {
        return Err(Error::RankDeficient(eig.values[0].to_f64().unwrap_or(f64::NAN)));
    }

    let half = fl::<T>(0.5);
    let id2_half = CMat::identity(2).scaled_re(half);
    let mut cur = rho.mat().clone();
    let mut l_a = CMat::<T>::identity(2);
    let mut l_b = CMat::<T>::identity(2);
    let tol = fl::<T>(1e-10);
    let two = fl::<T>(2.0);
    let mut converged = false;

    for _ in 0..SINKHORN_CAP {
        let ra = reduce_a(&cur);
        let rb = reduce_b(&cur);
        let eps_a = ra.sub(&id2_half).fro_norm();
        let eps_b = rb.sub(&id2_half).fro_norm();
        if eps_a <= tol && eps_b <= tol {
            converged = true;
            break;
        }
        // (2 rho_A)^{-1/2} on the A side makes the A reduction exactly I/2
        // and keeps the total trace at one.
        let ka = inv_sqrt_2x2(&ra.scaled_re(two))?;
        let fa = kron(&ka, &CMat::identity(2));
        cur = (&(&fa * &cur) * &fa.adjoint()).hermitized();
        l_a = &ka * &l_a;

        let rb = reduce_b(&cur);
        let kb = inv_sqrt_2x2(&rb.scaled_re(two))?;
        let fb = kron(&CMat::identity(2), &kb);
        cur = (&(&fb * &cur) * &fb.adjoint()).hermitized();
        l_b = &kb * &l_b;
    }
    if !converged {
        return Err(Error::ConvergenceFailure { iterations: SINKHORN_CAP });
    }

    // Both reductions are I/2, so in the magic basis the state is a real
    // symmetric matrix; its orthogonal eigenbasis is a local rotation.
    let mb = MagicBasis::<T>::standard();
    let e = mb.matrix();
    let m = &(&e.adjoint() * &cur) * &e;
    debug_assert!(m.sub(&m.conjugate()).fro_norm() < fl(1e-7));
    let m_real = m.add(&m.conjugate()).scaled_re(half).hermitized();
    let meig = eig_hermitian(&m_real, fl(1e-9))?;

    // Descending weights; all 24 orderings stay inside SO(4) after a single
    // column sign flip, so a plain sort realizes the canonical order.
    let mut o = CMat::zeros(4, 4);
    let mut p = [T::zero(); 4];
    for k in 0..4 {
        p[k] = meig.values[3 - k];
        o.set_col(k, &meig.vectors.col(3 - k));
    }
    let det_o = o.det();
    if det_o.re < T::zero() {
        let flipped = o.col(3).scaled(-C::one());
        o.set_col(3, &flipped);
    }
    let s = &(&e * &o) * &e.adjoint();
    let (v_a, v_b) = factor_product_unitary(&s)?;

    let g_a = &l_a.inverse2()? * &v_a;
    let g_b = &l_b.inverse2()? * &v_b;
    let f_a = g_a.scaled(C::<T>::one() / g_a.det().sqrt());
    let f_b = g_b.scaled(C::<T>::one() / g_b.det().sqrt());

    let mut bd = CMat::zeros(4, 4);
    for k in 0..4 {
        bd = bd.add(&mb.e[k].outer(&mb.e[k]).scaled_re(p[k]));
    }
    let f = kron(&f_a, &f_b);
    let n = (&(&f * &bd) * &f.adjoint()).trace().re;

    Ok(FilterNormalForm { f_a, f_b, p, n })
}
