//! Dense complex linear algebra for the small matrices used throughout:
//! Hermitian eigendecomposition (cyclic Jacobi), Takagi factorization of
//! complex symmetric matrices, principal matrix square root and logarithm,
//! Kronecker products, and the logarithmic mean.
//!
//! Everything here is deterministic: fixed sweep orders and fixed phase
//! conventions make repeated runs bit-stable.

use crate::error::{Error, Result};
use crate::scalar::{fl, Scalar};
use num_complex::Complex;
use num_traits::{One, Zero};

pub type C<T> = Complex<T>;

/// Dense complex matrix, row-major.
#[derive(Clone, Debug, PartialEq)]
pub struct CMat<T: Scalar> {
    rows: usize,
    cols: usize,
    data: Vec<C<T>>,
}

/// Dense complex column vector.
#[derive(Clone, Debug, PartialEq)]
pub struct CVec<T: Scalar> {
    data: Vec<C<T>>,
}

impl<T: Scalar> CMat<T> {
    pub fn zeros(rows: usize, cols: usize) -> Self {
        Self { rows, cols, data: vec![C::zero(); rows * cols] }
    }

    pub fn identity(n: usize) -> Self {
        let mut m = Self::zeros(n, n);
        for i in 0..n {
            m[(i, i)] = C::one();
        }
        m
    }

    pub fn from_fn(rows: usize, cols: usize, mut f: impl FnMut(usize, usize) -> C<T>) -> Self {
        let mut m = Self::zeros(rows, cols);
        for i in 0..rows {
            for j in 0..cols {
                m[(i, j)] = f(i, j);
            }
        }
        m
    }

    /// Build from row slices; all rows must have equal length.
    pub fn from_rows(rows: &[Vec<C<T>>]) -> Self {
        let r = rows.len();
        let c = if r == 0 { 0 } else { rows[0].len() };
        assert!(rows.iter().all(|row| row.len() == c), "ragged rows");
        Self { rows: r, cols: c, data: rows.concat() }
    }

    pub fn from_cols(cols: &[CVec<T>]) -> Self {
        let c = cols.len();
        let r = if c == 0 { 0 } else { cols[0].len() };
        let mut m = Self::zeros(r, c);
        for (j, col) in cols.iter().enumerate() {
            assert_eq!(col.len(), r, "ragged columns");
            for i in 0..r {
                m[(i, j)] = col[i];
            }
        }
        m
    }

    /// Real diagonal matrix.
    pub fn diag_re(values: &[T]) -> Self {
        let mut m = Self::zeros(values.len(), values.len());
        for (i, &v) in values.iter().enumerate() {
            m[(i, i)] = C::new(v, T::zero());
        }
        m
    }

    #[inline]
    pub fn rows(&self) -> usize {
        self.rows
    }

    #[inline]
    pub fn cols(&self) -> usize {
        self.cols
    }

    pub fn col(&self, j: usize) -> CVec<T> {
        CVec { data: (0..self.rows).map(|i| self[(i, j)]).collect() }
    }

    pub fn set_col(&mut self, j: usize, v: &CVec<T>) {
        assert_eq!(v.len(), self.rows);
        for i in 0..self.rows {
            self[(i, j)] = v[i];
        }
    }

    pub fn matmul(&self, o: &Self) -> Self {
        assert_eq!(self.cols, o.rows, "matmul dimension mismatch");
        let mut m = Self::zeros(self.rows, o.cols);
        for i in 0..self.rows {
            for k in 0..self.cols {
                let a = self[(i, k)];
                if a.is_zero() {
                    continue;
                }
                for j in 0..o.cols {
                    m[(i, j)] += a * o[(k, j)];
                }
            }
        }
        m
    }

    pub fn add(&self, o: &Self) -> Self {
        assert_eq!((self.rows, self.cols), (o.rows, o.cols));
        let data = self.data.iter().zip(&o.data).map(|(a, b)| a + b).collect();
        Self { rows: self.rows, cols: self.cols, data }
    }

    pub fn sub(&self, o: &Self) -> Self {
        assert_eq!((self.rows, self.cols), (o.rows, o.cols));
        let data = self.data.iter().zip(&o.data).map(|(a, b)| a - b).collect();
        Self { rows: self.rows, cols: self.cols, data }
    }

    pub fn scaled(&self, c: C<T>) -> Self {
        Self { rows: self.rows, cols: self.cols, data: self.data.iter().map(|a| a * c).collect() }
    }

    pub fn scaled_re(&self, t: T) -> Self {
        Self { rows: self.rows, cols: self.cols, data: self.data.iter().map(|a| a.scale(t)).collect() }
    }

    pub fn adjoint(&self) -> Self {
        Self::from_fn(self.cols, self.rows, |i, j| self[(j, i)].conj())
    }

    pub fn transpose(&self) -> Self {
        Self::from_fn(self.cols, self.rows, |i, j| self[(j, i)])
    }

    pub fn conjugate(&self) -> Self {
        Self { rows: self.rows, cols: self.cols, data: self.data.iter().map(|a| a.conj()).collect() }
    }

    pub fn trace(&self) -> C<T> {
        (0..self.rows.min(self.cols)).fold(C::zero(), |acc, i| acc + self[(i, i)])
    }

    pub fn fro_norm(&self) -> T {
        self.data.iter().fold(T::zero(), |acc, z| acc + z.norm_sqr()).sqrt()
    }

    pub fn max_abs(&self) -> T {
        self.data.iter().fold(T::zero(), |acc, z| acc.max(z.norm()))
    }

    /// Frobenius norm of `m - m†`.
    pub fn herm_residual(&self) -> T {
        self.sub(&self.adjoint()).fro_norm()
    }

    /// Frobenius norm of `m - m^T`.
    pub fn sym_residual(&self) -> T {
        self.sub(&self.transpose()).fro_norm()
    }

    pub fn hermitized(&self) -> Self {
        self.add(&self.adjoint()).scaled_re(fl(0.5))
    }

    pub fn is_finite(&self) -> bool {
        self.data.iter().all(|z| z.re.is_finite() && z.im.is_finite())
    }

    pub fn mul_vec(&self, v: &CVec<T>) -> CVec<T> {
        assert_eq!(self.cols, v.len());
        let data = (0..self.rows)
            .map(|i| (0..self.cols).fold(C::zero(), |acc, j| acc + self[(i, j)] * v[j]))
            .collect();
        CVec { data }
    }

    pub fn kron(&self, o: &Self) -> Self {
        let mut m = Self::zeros(self.rows * o.rows, self.cols * o.cols);
        for i in 0..self.rows {
            for j in 0..self.cols {
                let a = self[(i, j)];
                for k in 0..o.rows {
                    for l in 0..o.cols {
                        m[(i * o.rows + k, j * o.cols + l)] = a * o[(k, l)];
                    }
                }
            }
        }
        m
    }

    pub fn hadamard(&self, o: &Self) -> Self {
        assert_eq!((self.rows, self.cols), (o.rows, o.cols));
        let data = self.data.iter().zip(&o.data).map(|(a, b)| a * b).collect();
        Self { rows: self.rows, cols: self.cols, data }
    }

    /// Determinant by Gaussian elimination with partial pivoting.
    pub fn det(&self) -> C<T> {
        assert_eq!(self.rows, self.cols);
        let n = self.rows;
        let mut a = self.clone();
        let mut det = C::one();
        for k in 0..n {
            let mut piv = k;
            let mut best = a[(k, k)].norm();
            for i in k + 1..n {
                let v = a[(i, k)].norm();
                if v > best {
                    best = v;
                    piv = i;
                }
            }
            if best.is_zero() {
                return C::zero();
            }
            if piv != k {
                for j in 0..n {
                    let t = a[(k, j)];
                    a[(k, j)] = a[(piv, j)];
                    a[(piv, j)] = t;
                }
                det = -det;
            }
            let d = a[(k, k)];
            det *= d;
            for i in k + 1..n {
                let f = a[(i, k)] / d;
                if f.is_zero() {
                    continue;
                }
                for j in k..n {
                    let akj = a[(k, j)];
                    a[(i, j)] -= f * akj;
                }
            }
        }
        det
    }

    /// Closed-form inverse of a 2x2 matrix.
    pub fn inverse2(&self) -> Result<Self> {
        assert_eq!((self.rows, self.cols), (2, 2));
        let d = self[(0, 0)] * self[(1, 1)] - self[(0, 1)] * self[(1, 0)];
        if d.norm() < fl(1e-300) {
            return Err(Error::SingularFilter(d.norm().to_f64().unwrap_or(0.0)));
        }
        let inv = C::<T>::one() / d;
        Ok(Self::from_rows(&[
            vec![self[(1, 1)] * inv, -self[(0, 1)] * inv],
            vec![-self[(1, 0)] * inv, self[(0, 0)] * inv],
        ]))
    }

    fn off_diag_fro(&self) -> T {
        let mut s = T::zero();
        for i in 0..self.rows {
            for j in 0..self.cols {
                if i != j {
                    s = s + self[(i, j)].norm_sqr();
                }
            }
        }
        s.sqrt()
    }
}

impl<T: Scalar> std::ops::Index<(usize, usize)> for CMat<T> {
    type Output = C<T>;
    #[inline]
    fn index(&self, (i, j): (usize, usize)) -> &C<T> {
        &self.data[i * self.cols + j]
    }
}

impl<T: Scalar> std::ops::IndexMut<(usize, usize)> for CMat<T> {
    #[inline]
    fn index_mut(&mut self, (i, j): (usize, usize)) -> &mut C<T> {
        &mut self.data[i * self.cols + j]
    }
}

impl<T: Scalar> std::ops::Mul for &CMat<T> {
    type Output = CMat<T>;
    fn mul(self, rhs: &CMat<T>) -> CMat<T> {
        self.matmul(rhs)
    }
}

impl<T: Scalar> std::ops::Add for &CMat<T> {
    type Output = CMat<T>;
    fn add(self, rhs: &CMat<T>) -> CMat<T> {
        CMat::add(self, rhs)
    }
}

impl<T: Scalar> std::ops::Sub for &CMat<T> {
    type Output = CMat<T>;
    fn sub(self, rhs: &CMat<T>) -> CMat<T> {
        CMat::sub(self, rhs)
    }
}

impl<T: Scalar> CVec<T> {
    pub fn zeros(n: usize) -> Self {
        Self { data: vec![C::zero(); n] }
    }

    pub fn from_slice(v: &[C<T>]) -> Self {
        Self { data: v.to_vec() }
    }

    pub fn basis(n: usize, k: usize) -> Self {
        let mut v = Self::zeros(n);
        v.data[k] = C::one();
        v
    }

    #[inline]
    pub fn len(&self) -> usize {
        self.data.len()
    }

    pub fn is_empty(&self) -> bool {
        self.data.is_empty()
    }

    /// Hermitian inner product `<self|other>` (conjugates `self`).
    pub fn dot_h(&self, o: &Self) -> C<T> {
        assert_eq!(self.len(), o.len());
        self.data.iter().zip(&o.data).fold(C::zero(), |acc, (a, b)| acc + a.conj() * b)
    }

    pub fn norm(&self) -> T {
        self.data.iter().fold(T::zero(), |acc, z| acc + z.norm_sqr()).sqrt()
    }

    pub fn normalized(&self) -> Self {
        let n = self.norm();
        self.scaled(C::new(T::one() / n, T::zero()))
    }

    pub fn scaled(&self, c: C<T>) -> Self {
        Self { data: self.data.iter().map(|a| a * c).collect() }
    }

    pub fn add(&self, o: &Self) -> Self {
        assert_eq!(self.len(), o.len());
        Self { data: self.data.iter().zip(&o.data).map(|(a, b)| a + b).collect() }
    }

    pub fn sub(&self, o: &Self) -> Self {
        assert_eq!(self.len(), o.len());
        Self { data: self.data.iter().zip(&o.data).map(|(a, b)| a - b).collect() }
    }

    pub fn conjugate(&self) -> Self {
        Self { data: self.data.iter().map(|a| a.conj()).collect() }
    }

    /// Outer product `|self><other|`.
    pub fn outer(&self, o: &Self) -> CMat<T> {
        CMat::from_fn(self.len(), o.len(), |i, j| self[i] * o[j].conj())
    }

    /// Kronecker product of column vectors.
    pub fn kron(&self, o: &Self) -> Self {
        let mut data = Vec::with_capacity(self.len() * o.len());
        for a in &self.data {
            for b in &o.data {
                data.push(a * b);
            }
        }
        Self { data }
    }
}

impl<T: Scalar> std::ops::Index<usize> for CVec<T> {
    type Output = C<T>;
    #[inline]
    fn index(&self, i: usize) -> &C<T> {
        &self.data[i]
    }
}

impl<T: Scalar> std::ops::IndexMut<usize> for CVec<T> {
    #[inline]
    fn index_mut(&mut self, i: usize) -> &mut C<T> {
        &mut self.data[i]
    }
}

/// Kronecker product `a ⊗ b`.
pub fn kron<T: Scalar>(a: &CMat<T>, b: &CMat<T>) -> CMat<T> {
    a.kron(b)
}

/// Hermitian eigendecomposition result: real eigenvalues in ascending order
/// and the unitary matrix of column eigenvectors.
#[derive(Clone, Debug)]
pub struct HermEig<T: Scalar> {
    pub values: Vec<T>,
    pub vectors: CMat<T>,
}

impl<T: Scalar> HermEig<T> {
    /// Reconstruct `V D V†`.
    pub fn reconstruct(&self) -> CMat<T> {
        let d = CMat::diag_re(&self.values);
        &(&self.vectors * &d) * &self.vectors.adjoint()
    }
}

/// Takagi factorization result: `S = U D U^T` with `U` unitary and `D` the
/// real non-negative singular values in descending order.
#[derive(Clone, Debug)]
pub struct TakagiFactor<T: Scalar> {
    pub unitary: CMat<T>,
    pub singulars: Vec<T>,
}

impl<T: Scalar> TakagiFactor<T> {
    /// Reconstruct `U D U^T`.
    pub fn reconstruct(&self) -> CMat<T> {
        let d = CMat::diag_re(&self.singulars);
        &(&self.unitary * &d) * &self.unitary.transpose()
    }
}

const MAX_JACOBI_SWEEPS: usize = 100;

/// Eigendecomposition of a Hermitian matrix by cyclic complex Jacobi sweeps.
///
/// Eigenvalues come out ascending; each eigenvector has its
/// largest-magnitude component made real positive so identical inputs give
/// identical outputs.
pub fn eig_hermitian<T: Scalar>(h: &CMat<T>, hermiticity_tol: T) -> Result<HermEig<T>> {
    if h.rows() != h.cols() {
        return Err(Error::DimensionMismatch(h.rows(), h.cols(), h.rows(), h.rows()));
    }
    let n = h.rows();
    let hnorm = h.fro_norm();
    let residual = h.herm_residual();
    if residual > hermiticity_tol * hnorm.max(T::min_positive_value()) {
        return Err(Error::NotHermitian {
            residual: residual.to_f64().unwrap_or(f64::NAN),
            tol: hermiticity_tol.to_f64().unwrap_or(f64::NAN),
        });
    }

    let mut a = h.hermitized();
    let mut v = CMat::identity(n);
    let threshold = fl::<T>(1e-14) * hnorm;
    let mut converged = false;

    for _sweep in 0..MAX_JACOBI_SWEEPS {
        if a.off_diag_fro() <= threshold {
            converged = true;
            break;
        }
        for p in 0..n {
            for q in p + 1..n {
                let apq = a[(p, q)];
                let beta = apq.norm();
                if beta.is_zero() {
                    continue;
                }
                let app = a[(p, p)].re;
                let aqq = a[(q, q)].re;
                let phi = apq.arg();
                let e = C::from_polar(T::one(), phi);
                let zeta = (app - aqq) / (beta + beta);
                let t = if zeta.is_zero() {
                    T::one()
                } else {
                    zeta.signum() / (zeta.abs() + (T::one() + zeta * zeta).sqrt())
                };
                let c = T::one() / (T::one() + t * t).sqrt();
                let s = t * c;

                // A <- J† A J with J = I except J[pp]=c, J[pq]=-s e^{i phi},
                // J[qp]=s e^{-i phi}, J[qq]=c.
                for k in 0..n {
                    let akp = a[(k, p)];
                    let akq = a[(k, q)];
                    a[(k, p)] = akp.scale(c) + (e.conj() * akq).scale(s);
                    a[(k, q)] = -(e * akp).scale(s) + akq.scale(c);
                }
                for k in 0..n {
                    let apk = a[(p, k)];
                    let aqk = a[(q, k)];
                    a[(p, k)] = apk.scale(c) + (e * aqk).scale(s);
                    a[(q, k)] = -(e.conj() * apk).scale(s) + aqk.scale(c);
                }
                let two = fl::<T>(2.0);
                a[(p, p)] = C::new(app * c * c + two * beta * c * s + aqq * s * s, T::zero());
                a[(q, q)] = C::new(app * s * s - two * beta * c * s + aqq * c * c, T::zero());
                a[(p, q)] = C::zero();
                a[(q, p)] = C::zero();

                for k in 0..n {
                    let vkp = v[(k, p)];
                    let vkq = v[(k, q)];
                    v[(k, p)] = vkp.scale(c) + (e.conj() * vkq).scale(s);
                    v[(k, q)] = -(e * vkp).scale(s) + vkq.scale(c);
                }
            }
        }
    }
    if !converged && a.off_diag_fro() > threshold {
        return Err(Error::ConvergenceFailure { iterations: MAX_JACOBI_SWEEPS });
    }

    let mut idx: Vec<usize> = (0..n).collect();
    idx.sort_by(|&i, &j| a[(i, i)].re.partial_cmp(&a[(j, j)].re).unwrap());
    let values: Vec<T> = idx.iter().map(|&i| a[(i, i)].re).collect();
    let mut vectors = CMat::zeros(n, n);
    for (jnew, &jold) in idx.iter().enumerate() {
        let col = phase_fixed(&v.col(jold));
        vectors.set_col(jnew, &col);
    }
    Ok(HermEig { values, vectors })
}

/// Multiply a unit vector by the phase that makes its largest-magnitude
/// component real positive.
fn phase_fixed<T: Scalar>(v: &CVec<T>) -> CVec<T> {
    let mut k = 0;
    let mut best = T::zero();
    for i in 0..v.len() {
        let m = v[i].norm();
        if m > best {
            best = m;
            k = i;
        }
    }
    if best.is_zero() {
        return v.clone();
    }
    let z = v[k];
    v.scaled(z.conj().unscale(best))
}

/// Principal square root of a Hermitian positive-semidefinite matrix.
///
/// Eigenvalues in `[-1e-12, 0]` are clamped to zero; anything below that is
/// rejected.
pub fn sqrt_psd<T: Scalar>(h: &CMat<T>) -> Result<CMat<T>> {
    let eig = eig_hermitian(h, fl(1e-10))?;
    let floor = fl::<T>(-1e-12);
    let mut vals = Vec::with_capacity(eig.values.len());
    for &ev in &eig.values {
        if ev < floor {
            return Err(Error::NotPositive { eigenvalue: ev.to_f64().unwrap_or(f64::NAN) });
        }
        vals.push(ev.max(T::zero()).sqrt());
    }
    let d = CMat::diag_re(&vals);
    Ok(&(&eig.vectors * &d) * &eig.vectors.adjoint())
}

/// Principal logarithm of a Hermitian positive-definite matrix.
pub fn ln_pd<T: Scalar>(h: &CMat<T>) -> Result<CMat<T>> {
    let eig = eig_hermitian(h, fl(1e-10))?;
    let floor = fl::<T>(1e-14);
    let mut vals = Vec::with_capacity(eig.values.len());
    for &ev in &eig.values {
        if ev <= floor {
            return Err(Error::NotPositive { eigenvalue: ev.to_f64().unwrap_or(f64::NAN) });
        }
        vals.push(ev.ln());
    }
    let d = CMat::diag_re(&vals);
    Ok(&(&eig.vectors * &d) * &eig.vectors.adjoint())
}

/// Logarithmic mean `(a - b) / (ln a - ln b)`, continuous at `a = b`.
///
/// Near-equal arguments switch to the series
/// `m (1 - u^2/3 - ...)` with `m = (a+b)/2`, `u = (a-b)/(a+b)`, which agrees
/// with the quotient branch to well below 1e-14 at the switch point.
pub fn log_mean<T: Scalar>(a: T, b: T) -> Result<T> {
    if a <= T::zero() || b <= T::zero() {
        return Err(Error::NonPositiveInput(
            a.to_f64().unwrap_or(f64::NAN),
            b.to_f64().unwrap_or(f64::NAN),
        ));
    }
    if (a - b).abs() <= fl::<T>(1e-9) * a.max(b) {
        let m = (a + b) * fl(0.5);
        let u = (a - b) / (a + b);
        Ok(m * (T::one() - u * u / fl(3.0)))
    } else {
        Ok((a - b) / (a.ln() - b.ln()))
    }
}

/// Takagi factorization `S = U D U^T` of a complex symmetric matrix.
///
/// Route: eigendecompose the Hermitian product `S S̄`, fix per-vector phases
/// (`S v̄ = mu v` with `mu = <v|S|v̄>`), resolve degenerate singular-value
/// clusters constructively on the symmetric restriction, then polish with
/// exact 2x2 Takagi rotations until `U† S Ū` is diagonal to machine
/// precision.
pub fn takagi<T: Scalar>(s: &CMat<T>) -> Result<TakagiFactor<T>> {
    if s.rows() != s.cols() {
        return Err(Error::DimensionMismatch(s.rows(), s.cols(), s.rows(), s.rows()));
    }
    let n = s.rows();
    let snorm = s.fro_norm();
    let sym_res = s.sym_residual();
    if sym_res > fl::<T>(1e-12) * snorm.max(T::min_positive_value()) {
        return Err(Error::NotSymmetric { residual: sym_res.to_f64().unwrap_or(f64::NAN) });
    }
    let s_sym = s.add(&s.transpose()).scaled_re(fl(0.5));

    if snorm.is_zero() {
        return Ok(TakagiFactor { unitary: CMat::identity(n), singulars: vec![T::zero(); n] });
    }

    // Hermitian PSD product; its eigenvalues are the squared singular values.
    let m = &s_sym * &s_sym.conjugate();
    let eig = eig_hermitian(&m, fl(1e-8))?;

    // Work in descending singular order.
    let mut order: Vec<usize> = (0..n).collect();
    order.sort_by(|&i, &j| eig.values[j].partial_cmp(&eig.values[i]).unwrap());
    let sigmas: Vec<T> = order.iter().map(|&i| eig.values[i].max(T::zero()).sqrt()).collect();
    let sigma_max = sigmas[0];

    let cluster_tol = fl::<T>(1e-8) * sigma_max;
    let zero_tol = fl::<T>(1e-13) * sigma_max;

    let mut u = CMat::zeros(n, n);
    let mut start = 0;
    while start < n {
        let mut end = start + 1;
        while end < n && sigmas[end - 1] - sigmas[end] <= cluster_tol {
            end += 1;
        }
        let size = end - start;
        let cols: Vec<CVec<T>> = (start..end).map(|k| eig.vectors.col(order[k])).collect();
        if sigmas[start] <= zero_tol {
            // Null cluster: singular direction phases are irrelevant.
            for (off, col) in cols.iter().enumerate() {
                u.set_col(start + off, col);
            }
        } else if size == 1 {
            let v = &cols[0];
            let w = s_sym.mul_vec(&v.conjugate());
            let mu = v.dot_h(&w);
            let alpha = mu.arg() * fl(0.5);
            u.set_col(start, &v.scaled(C::from_polar(T::one(), alpha)));
        } else {
            let vc = CMat::from_cols(&cols);
            // Symmetric restriction of S to the cluster subspace; close to
            // sigma times a symmetric unitary.
            let b = &(&vc.adjoint() * &s_sym) * &vc.conjugate();
            let w = takagi_unitary_cluster(&b, sigmas[start])?;
            let uc = &vc * &w;
            for off in 0..size {
                u.set_col(start + off, &uc.col(off));
            }
        }
        start = end;
    }

    polish_takagi(&s_sym, &mut u, sigma_max);

    // Absorb residual diagonal phases and read off the singular values.
    let mut b = &(&u.adjoint() * &s_sym) * &u.conjugate();
    for j in 0..n {
        let bjj = b[(j, j)];
        if bjj.norm() > T::zero() {
            let theta = bjj.arg();
            u.set_col(j, &u.col(j).scaled(C::from_polar(T::one(), theta * fl(0.5))));
        }
    }
    b = &(&u.adjoint() * &s_sym) * &u.conjugate();
    let mut pairs: Vec<(T, usize)> = (0..n).map(|j| (b[(j, j)].norm(), j)).collect();
    pairs.sort_by(|x, y| y.0.partial_cmp(&x.0).unwrap());
    let singulars: Vec<T> = pairs.iter().map(|p| p.0).collect();
    let mut unitary = CMat::zeros(n, n);
    for (jnew, &(_, jold)) in pairs.iter().enumerate() {
        unitary.set_col(jnew, &sign_fixed(&u.col(jold)));
    }

    let factor = TakagiFactor { unitary, singulars };
    let recon_err = factor.reconstruct().sub(&s_sym).fro_norm();
    if recon_err > fl::<T>(1e-10) * snorm {
        return Err(Error::DegenerateBlockFailure);
    }
    Ok(factor)
}

/// Takagi vectors of a (near) sigma-unitary symmetric block: candidates
/// `a + B ā / sigma` have norm-squared summing to 4 over `{a, ia}`, so one of
/// them always survives.
fn takagi_unitary_cluster<T: Scalar>(b: &CMat<T>, sigma: T) -> Result<CMat<T>> {
    let m = b.rows();
    let b0 = b.scaled_re(T::one() / sigma);
    let mut found: Vec<CVec<T>> = Vec::with_capacity(m);
    for _ in 0..m {
        let mut best: Option<CVec<T>> = None;
        let mut best_norm = T::zero();
        for base in 0..m {
            for im_phase in 0..2 {
                let mut a = CVec::basis(m, base);
                if im_phase == 1 {
                    a = a.scaled(C::i());
                }
                for f in &found {
                    let overlap = f.dot_h(&a);
                    a = a.sub(&f.scaled(overlap));
                }
                let an = a.norm();
                if an < fl(1e-8) {
                    continue;
                }
                a = a.normalized();
                let cand = a.add(&b0.mul_vec(&a.conjugate()));
                let cn = cand.norm();
                if cn > best_norm {
                    best_norm = cn;
                    best = Some(cand.normalized());
                }
            }
        }
        let mut next = best.ok_or(Error::DegenerateBlockFailure)?;
        if best_norm < fl(1e-3) {
            return Err(Error::DegenerateBlockFailure);
        }
        // Re-orthonormalize for safety against rounding drift.
        for f in &found {
            let overlap = f.dot_h(&next);
            next = next.sub(&f.scaled(overlap));
        }
        found.push(next.normalized());
    }
    Ok(CMat::from_cols(&found))
}

/// Drive the off-diagonal of `U† S Ū` to zero with exact 2x2 Takagi
/// rotations; quadratically convergent from the clustered starting point.
fn polish_takagi<T: Scalar>(s: &CMat<T>, u: &mut CMat<T>, sigma_max: T) {
    let n = s.rows();
    let stop = fl::<T>(5e-16) * sigma_max * fl(n as f64);
    for _ in 0..50 {
        let b = &(&u.adjoint() * s) * &u.conjugate();
        if b.off_diag_fro() <= stop {
            break;
        }
        for p in 0..n {
            for q in p + 1..n {
                let b = &(&u.adjoint() * s) * &u.conjugate();
                let off = (b[(p, q)] + b[(q, p)]).scale(fl(0.5));
                if off.norm() <= stop {
                    continue;
                }
                let block =
                    CMat::from_rows(&[vec![b[(p, p)], off], vec![off, b[(q, q)]]]);
                let w = takagi2(&block);
                let up = u.col(p);
                let uq = u.col(q);
                let mut np = up.scaled(w[(0, 0)]);
                np = np.add(&uq.scaled(w[(1, 0)]));
                let mut nq = up.scaled(w[(0, 1)]);
                nq = nq.add(&uq.scaled(w[(1, 1)]));
                u.set_col(p, &np);
                u.set_col(q, &nq);
            }
        }
    }
}

/// Exact Takagi of a 2x2 complex symmetric matrix; returns the unitary `w`
/// with `C = w diag w^T`, singular values descending.
fn takagi2<T: Scalar>(c: &CMat<T>) -> CMat<T> {
    let m = &c.clone() * &c.conjugate();
    let m11 = m[(0, 0)].re;
    let m22 = m[(1, 1)].re;
    let m12 = m[(0, 1)];
    let scale = m11.max(m22).max(fl(1e-300));
    let half = fl::<T>(0.5);
    let disc = ((m11 - m22) * (m11 - m22) * fl(0.25) + m12.norm_sqr()).sqrt();

    if disc <= fl::<T>(1e-12) * scale {
        // Degenerate pair: constructive route on the near-unitary block.
        let sigma = ((m11 + m22) * half).max(T::zero()).sqrt();
        if sigma <= fl::<T>(1e-150) {
            return CMat::identity(2);
        }
        let b0 = c.scaled_re(T::one() / sigma);
        let e0 = CVec::basis(2, 0);
        let cand_a = e0.add(&b0.mul_vec(&e0.conjugate()));
        let e0i = e0.scaled(C::i());
        let cand_b = e0i.add(&b0.mul_vec(&e0i.conjugate()));
        let u1 = if cand_a.norm() >= cand_b.norm() { cand_a } else { cand_b }.normalized();
        let mut u2 = CVec::from_slice(&[-u1[1].conj(), u1[0].conj()]);
        let mu2 = u2.dot_h(&c.mul_vec(&u2.conjugate()));
        if mu2.norm() > T::zero() {
            u2 = u2.scaled(C::from_polar(T::one(), mu2.arg() * half));
        }
        return CMat::from_cols(&[u1, u2]);
    }

    let dplus = (m11 + m22) * half + disc;
    let v1 = CVec::from_slice(&[m12, C::new(dplus - m11, T::zero())]);
    let v2 = CVec::from_slice(&[C::new(dplus - m22, T::zero()), m12.conj()]);
    let v = if v1.norm() >= v2.norm() { v1 } else { v2 }.normalized();
    let mu = v.dot_h(&c.mul_vec(&v.conjugate()));
    let u1 = if mu.norm() > T::zero() {
        v.scaled(C::from_polar(T::one(), mu.arg() * half))
    } else {
        v
    };
    let mut u2 = CVec::from_slice(&[-u1[1].conj(), u1[0].conj()]);
    let mu2 = u2.dot_h(&c.mul_vec(&u2.conjugate()));
    if mu2.norm() > T::zero() {
        u2 = u2.scaled(C::from_polar(T::one(), mu2.arg() * half));
    }
    CMat::from_cols(&[u1, u2])
}

/// Fix the leftover `±1` Takagi ambiguity: make the real part of the
/// largest-magnitude component positive (imaginary part decides ties at
/// zero).
fn sign_fixed<T: Scalar>(v: &CVec<T>) -> CVec<T> {
    let mut k = 0;
    let mut best = T::zero();
    for i in 0..v.len() {
        let m = v[i].norm();
        if m > best {
            best = m;
            k = i;
        }
    }
    let z = v[k];
    let flip = z.re < T::zero() || (z.re.is_zero() && z.im < T::zero());
    if flip {
        v.scaled(-C::one())
    } else {
        v.clone()
    }
}
