//! Two-qubit state objects: density matrices, the fixed tilde-invariant
//! Bell (magic) basis, the spin-flip (tilde) operation, signed concurrence,
//! relative entropy, the PPT separability certificate, and seeded random
//! state / filter generation.

use crate::error::{Error, Result};
use crate::linalg::{eig_hermitian, kron, CMat, CVec, C};
use crate::scalar::{fl, Scalar};
use num_traits::{One, Zero};
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rand_distr::StandardNormal;

/// Pauli matrix `sigma_k` for `k` in `0..=3` (`sigma_0 = I`).
pub fn pauli<T: Scalar>(k: usize) -> CMat<T> {
    let z = C::<T>::zero();
    let one = C::<T>::one();
    let i = C::<T>::i();
    match k {
        0 => CMat::identity(2),
        1 => CMat::from_rows(&[vec![z, one], vec![one, z]]),
        2 => CMat::from_rows(&[vec![z, -i], vec![i, z]]),
        3 => CMat::from_rows(&[vec![one, z], vec![z, -one]]),
        _ => panic!("pauli index out of range"),
    }
}

/// `sigma_2 ⊗ sigma_2`, the spin-flip conjugation operator.
pub fn sigma2_sigma2<T: Scalar>() -> CMat<T> {
    kron(&pauli(2), &pauli(2))
}

/// Validated two-qubit density matrix: Hermitian within 1e-12, unit trace
/// within 1e-12, minimum eigenvalue >= -1e-10.
///
/// The stored matrix is kept exactly as supplied (no clamping rebuild), so a
/// save/load round trip is bit-exact; operations that need a strict PSD or
/// support interpretation clamp at the point of use.
#[derive(Clone, Debug, PartialEq)]
pub struct DensityMatrix<T: Scalar> {
    mat: CMat<T>,
}

impl<T: Scalar> DensityMatrix<T> {
    pub fn new(mat: CMat<T>) -> Result<Self> {
        if mat.rows() != 4 || mat.cols() != 4 {
            return Err(Error::DimensionMismatch(mat.rows(), mat.cols(), 4, 4));
        }
        if !mat.is_finite() {
            return Err(Error::NotHermitian { residual: f64::NAN, tol: 1e-12 });
        }
        let herm = mat.herm_residual();
        let scale = mat.fro_norm().max(T::one());
        if herm > fl::<T>(1e-12) * scale {
            return Err(Error::NotHermitian {
                residual: herm.to_f64().unwrap_or(f64::NAN),
                tol: 1e-12,
            });
        }
        let tr = mat.trace();
        if (tr.re - T::one()).abs() > fl(1e-12) || tr.im.abs() > fl(1e-12) {
            return Err(Error::InvalidTrace(tr.re.to_f64().unwrap_or(f64::NAN)));
        }
        let eig = eig_hermitian(&mat, fl(1e-10))?;
        if eig.values[0] < fl(-1e-10) {
            return Err(Error::NotPositive {
                eigenvalue: eig.values[0].to_f64().unwrap_or(f64::NAN),
            });
        }
        Ok(Self { mat })
    }

    /// Construct without validation; for internal use on matrices that are
    /// valid by construction.
    pub(crate) fn new_unchecked(mat: CMat<T>) -> Self {
        debug_assert_eq!((mat.rows(), mat.cols()), (4, 4));
        Self { mat }
    }

    #[inline]
    pub fn mat(&self) -> &CMat<T> {
        &self.mat
    }

    pub fn min_eigenvalue(&self) -> T {
        eig_hermitian(&self.mat, fl(1e-8)).map(|e| e.values[0]).unwrap_or_else(|_| T::nan())
    }

    /// Maximally mixed state `I/4`.
    pub fn maximally_mixed() -> Self {
        Self::new_unchecked(CMat::identity(4).scaled_re(fl(0.25)))
    }

    /// Projector onto a unit 4-vector.
    pub fn pure(psi: &CVec<T>) -> Self {
        let n = psi.normalized();
        Self::new_unchecked(n.outer(&n))
    }
}

/// The fixed tilde-invariant Bell basis: `e_0 = i|phi+>`,
/// `e_l = (I ⊗ sigma_l)|phi+>` with `|phi+> = (|00> + |11>)/sqrt(2)`.
#[derive(Clone, Debug)]
pub struct MagicBasis<T: Scalar> {
    pub e: [CVec<T>; 4],
}

impl<T: Scalar> MagicBasis<T> {
    pub fn standard() -> Self {
        let s = fl::<T>(std::f64::consts::FRAC_1_SQRT_2);
        let z = C::<T>::zero();
        let e0 = CVec::from_slice(&[C::new(T::zero(), s), z, z, C::new(T::zero(), s)]);
        let e1 = CVec::from_slice(&[z, C::new(s, T::zero()), C::new(s, T::zero()), z]);
        let e2 = CVec::from_slice(&[z, C::new(T::zero(), s), C::new(T::zero(), -s), z]);
        let e3 = CVec::from_slice(&[C::new(s, T::zero()), z, z, C::new(-s, T::zero())]);
        Self { e: [e0, e1, e2, e3] }
    }

    /// 4x4 matrix whose columns are the basis vectors.
    pub fn matrix(&self) -> CMat<T> {
        CMat::from_cols(&self.e)
    }
}

/// `|phi+> = (|00> + |11>)/sqrt(2)`.
pub fn bell_phi_plus<T: Scalar>() -> CVec<T> {
    let s = fl::<T>(std::f64::consts::FRAC_1_SQRT_2);
    CVec::from_slice(&[C::new(s, T::zero()), C::zero(), C::zero(), C::new(s, T::zero())])
}

/// Spin flip of a 4-vector: `(sigma_2 ⊗ sigma_2) v*`.
pub fn tilde_state<T: Scalar>(v: &CVec<T>) -> CVec<T> {
    assert_eq!(v.len(), 4);
    CVec::from_slice(&[-v[3].conj(), v[2].conj(), v[1].conj(), -v[0].conj()])
}

/// Spin flip of an operator: `(sigma_2 ⊗ sigma_2) m* (sigma_2 ⊗ sigma_2)`.
pub fn tilde_op<T: Scalar>(m: &CMat<T>) -> CMat<T> {
    let s = sigma2_sigma2::<T>();
    &(&s * &m.conjugate()) * &s
}

/// Signed concurrence: `lambda_0 - lambda_1 - lambda_2 - lambda_3` from the
/// descending square roots of the eigenvalues of `rho * tilde(rho)`;
/// negative inside the separable set, zero on the boundary.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct SignedConcurrence<T: Scalar> {
    pub value: T,
}

/// Descending square roots of the eigenvalues of `rho * tilde(rho)`.
///
/// Computed from the symmetric matrix `tau_ij = <v_i|~v_j>` built on the
/// subnormalized eigenvectors of rho: the spectrum of `tau tau†` equals the
/// spectrum of `rho * tilde(rho)` with one fewer matrix root.
pub fn concurrence_lambdas<T: Scalar>(rho: &DensityMatrix<T>) -> [T; 4] {
    let tau = wootters_tau(rho);
    let m = &tau * &tau.adjoint();
    let eig = eig_hermitian(&m, fl(1e-8)).expect("tau tau† is Hermitian");
    let mut l = [T::zero(); 4];
    for (k, &v) in eig.values.iter().rev().enumerate() {
        l[k] = v.max(T::zero()).sqrt();
    }
    l
}

/// The symmetric matrix `tau_ij = <v_i|~v_j>` on subnormalized eigenvectors
/// `|v_i> = sqrt(gamma_i)|i>` of rho.
pub(crate) fn wootters_tau<T: Scalar>(rho: &DensityMatrix<T>) -> CMat<T> {
    let eig = eig_hermitian(rho.mat(), fl(1e-10)).expect("density matrix is Hermitian");
    let mut a = CMat::zeros(4, 4);
    for j in 0..4 {
        let g = eig.values[j].max(T::zero()).sqrt();
        a.set_col(j, &eig.vectors.col(j).scaled(C::new(g, T::zero())));
    }
    let s2 = sigma2_sigma2::<T>();
    &(&a.adjoint() * &s2) * &a.conjugate()
}

pub fn concurrence_signed<T: Scalar>(rho: &DensityMatrix<T>) -> SignedConcurrence<T> {
    let l = concurrence_lambdas(rho);
    SignedConcurrence { value: l[0] - l[1] - l[2] - l[3] }
}

/// Quantum relative entropy `S(rho||sigma) = Tr rho ln rho - Tr rho ln sigma`
/// in nats.
///
/// Eigenvalues of sigma below 1e-12 must carry rho-weight at most 1e-10,
/// otherwise the entropy is +infinity and `SupportViolation` is returned.
pub fn relative_entropy<T: Scalar>(
    rho: &DensityMatrix<T>,
    sigma: &DensityMatrix<T>,
) -> Result<T> {
    let er = eig_hermitian(rho.mat(), fl(1e-10))?;
    let es = eig_hermitian(sigma.mat(), fl(1e-10))?;
    let mut s = T::zero();
    for &r in &er.values {
        if r > fl(1e-18) {
            s = s + r * r.ln();
        }
    }
    for j in 0..4 {
        let g = es.values[j];
        let col = es.vectors.col(j);
        let w = col.dot_h(&rho.mat().mul_vec(&col)).re;
        if g < fl(1e-12) {
            if w > fl(1e-10) {
                return Err(Error::SupportViolation {
                    weight: w.to_f64().unwrap_or(f64::NAN),
                    eigenvalue: g.to_f64().unwrap_or(f64::NAN),
                });
            }
            continue;
        }
        s = s - w * g.ln();
    }
    Ok(s.max(T::zero()))
}

/// Minimum eigenvalue of the partial transpose over the second qubit;
/// `>= -1e-10` is the two-qubit separability certificate.
pub fn ppt_min_eigenvalue<T: Scalar>(rho: &DensityMatrix<T>) -> T {
    let m = rho.mat();
    // (i,j),(k,l) -> (i,l),(k,j)
    let pt = CMat::from_fn(4, 4, |r, c| {
        let (i, j) = (r / 2, r % 2);
        let (k, l) = (c / 2, c % 2);
        m[(2 * i + l, 2 * k + j)]
    });
    let eig = eig_hermitian(&pt, fl(1e-10)).expect("partial transpose is Hermitian");
    eig.values[0]
}

fn normal_c<T: Scalar>(rng: &mut ChaCha8Rng) -> C<T> {
    // Sample in f64 and convert so the stream is identical for every scalar.
    let re: f64 = rng.sample(StandardNormal);
    let im: f64 = rng.sample(StandardNormal);
    C::new(fl(re), fl(im))
}

/// Random density matrix of the given rank from the Ginibre construction
/// `G G† / Tr(G G†)`; identical seeds give identical output.
pub fn random_density<T: Scalar>(seed: u64, rank: usize) -> DensityMatrix<T> {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    random_density_rng(&mut rng, rank)
}

pub fn random_density_rng<T: Scalar>(rng: &mut ChaCha8Rng, rank: usize) -> DensityMatrix<T> {
    assert!((1..=4).contains(&rank), "rank must be 1..=4");
    let g = CMat::from_fn(4, rank, |_, _| normal_c(rng));
    let m = &g * &g.adjoint();
    let tr = m.trace().re;
    DensityMatrix::new_unchecked(m.scaled_re(T::one() / tr).hermitized())
}

/// Haar-random 2x2 special unitary.
pub fn random_su2_rng<T: Scalar>(rng: &mut ChaCha8Rng) -> CMat<T> {
    let g = CMat::from_fn(2, 2, |_, _| normal_c::<T>(rng));
    let q0 = g.col(0).normalized();
    let c1 = g.col(1);
    let mut q1 = c1.sub(&q0.scaled(q0.dot_h(&c1)));
    q1 = q1.normalized();
    let u = CMat::from_cols(&[q0, q1]);
    let d = u.det();
    // Divide by the principal square root of the phase: det becomes 1.
    u.scaled(C::from_polar(T::one(), -d.arg() * fl(0.5)))
}

/// Haar-random qubit pure state.
pub fn random_qubit_rng<T: Scalar>(rng: &mut ChaCha8Rng) -> CVec<T> {
    CVec::from_slice(&[normal_c(rng), normal_c(rng)]).normalized()
}

/// Random 2x2 filter with `det = 1` and singular-value ratio at most
/// `max_condition`; identical seeds give identical output.
pub fn random_filter<T: Scalar>(seed: u64, max_condition: T) -> CMat<T> {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    random_filter_rng(&mut rng, max_condition)
}

pub fn random_filter_rng<T: Scalar>(rng: &mut ChaCha8Rng, max_condition: T) -> CMat<T> {
    assert!(max_condition >= T::one(), "max_condition must be >= 1");
    let u = random_su2_rng::<T>(rng);
    let v = random_su2_rng::<T>(rng);
    let c = T::one() + fl::<T>(rng.gen::<f64>()) * (max_condition - T::one());
    let s = c.sqrt();
    let d = CMat::from_rows(&[
        vec![C::new(s, T::zero()), C::zero()],
        vec![C::zero(), C::new(T::one() / s, T::zero())],
    ]);
    let f = &(&u * &d) * &v.adjoint();
    let det = f.det();
    f.scaled(C::from_polar(T::one(), -det.arg() * fl(0.5)))
}

/// Apply `(F_A ⊗ F_B) rho (F_A ⊗ F_B)†` and renormalize the trace.
pub fn filtered_state<T: Scalar>(
    rho: &DensityMatrix<T>,
    fa: &CMat<T>,
    fb: &CMat<T>,
) -> DensityMatrix<T> {
    let f = kron(fa, fb);
    let m = &(&f * rho.mat()) * &f.adjoint();
    let tr = m.trace().re;
    DensityMatrix::new_unchecked(m.scaled_re(T::one() / tr).hermitized())
}

/// Partial trace over the second qubit.
pub fn reduce_a<T: Scalar>(m: &CMat<T>) -> CMat<T> {
    CMat::from_fn(2, 2, |i, k| m[(2 * i, 2 * k)] + m[(2 * i + 1, 2 * k + 1)])
}

/// Partial trace over the first qubit.
pub fn reduce_b<T: Scalar>(m: &CMat<T>) -> CMat<T> {
    CMat::from_fn(2, 2, |j, l| m[(j, l)] + m[(2 + j, 2 + l)])
}

/// Half the trace norm of the difference of two states.
pub fn trace_distance<T: Scalar>(a: &DensityMatrix<T>, b: &DensityMatrix<T>) -> T {
    let d = a.mat().sub(b.mat());
    let eig = eig_hermitian(&d, fl(1e-8)).expect("difference of Hermitians");
    eig.values.iter().fold(T::zero(), |acc, &v| acc + v.abs()) * fl(0.5)
}
