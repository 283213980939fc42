//! Shared helpers for the integration suites: independent oracles and
//! seeded samplers. Nothing here may reuse the closed-form code paths it is
//! meant to check.

use entangle_boundary::boundary::{make_boundary_state, BoundaryState};
use entangle_boundary::linalg::{CMat, C};
use entangle_boundary::states::{random_filter_rng, DensityMatrix, MagicBasis};
use num_complex::Complex;
use rand::Rng;
use rand_chacha::ChaCha8Rng;

pub type M = CMat<f64>;

/// Uniform sample on the open boundary simplex {p_i in (1e-3, 1/2 - 1e-3),
/// sum = 1/2}.
pub fn random_simplex(rng: &mut ChaCha8Rng) -> [f64; 3] {
    let delta = 1e-3;
    let mut u = [rng.gen::<f64>(), rng.gen::<f64>()];
    u.sort_by(|a, b| a.partial_cmp(b).unwrap());
    let g = [u[0], u[1] - u[0], 1.0 - u[1]];
    let scale = 0.5 - 3.0 * delta;
    [delta + g[0] * scale, delta + g[1] * scale, delta + g[2] * scale]
}

pub fn random_boundary(rng: &mut ChaCha8Rng, max_condition: f64) -> BoundaryState<f64> {
    let [p1, p2, p3] = random_simplex(rng);
    let fa = random_filter_rng::<f64>(rng, max_condition);
    let fb = random_filter_rng::<f64>(rng, max_condition);
    make_boundary_state(&fa, &fb, p1, p2, p3).expect("valid boundary parameters")
}

pub fn bell_diagonal(p: [f64; 4]) -> DensityMatrix<f64> {
    let mb = MagicBasis::<f64>::standard();
    let mut m = M::zeros(4, 4);
    for k in 0..4 {
        m = m.add(&mb.e[k].outer(&mb.e[k]).scaled_re(p[k]));
    }
    DensityMatrix::new(m.hermitized()).expect("valid Bell-diagonal state")
}

/// Solve `A x = b` for a small complex system by Gaussian elimination with
/// partial pivoting. Deliberately independent of the eigensolver.
fn solve_complex(a: &M, b: &[Complex<f64>]) -> Vec<Complex<f64>> {
    let n = a.rows();
    let mut m: Vec<Vec<Complex<f64>>> =
        (0..n).map(|i| (0..n).map(|j| a[(i, j)]).collect()).collect();
    let mut rhs = b.to_vec();
    for k in 0..n {
        let mut piv = k;
        let mut best = m[k][k].norm();
        for i in k + 1..n {
            if m[i][k].norm() > best {
                best = m[i][k].norm();
                piv = i;
            }
        }
        m.swap(k, piv);
        rhs.swap(k, piv);
        let d = m[k][k];
        for i in k + 1..n {
            let f = m[i][k] / d;
            for j in k..n {
                let mkj = m[k][j];
                m[i][j] -= f * mkj;
            }
            let rk = rhs[k];
            rhs[i] -= f * rk;
        }
    }
    let mut x = vec![Complex::new(0.0, 0.0); n];
    for i in (0..n).rev() {
        let mut acc = rhs[i];
        for j in i + 1..n {
            acc -= m[i][j] * x[j];
        }
        x[i] = acc / m[i][i];
    }
    x
}

/// `(sigma + z I)^{-1}` by column-wise Gaussian elimination.
fn resolvent(sigma: &M, z: f64) -> M {
    let n = sigma.rows();
    let mut shifted = sigma.clone();
    for i in 0..n {
        shifted[(i, i)] += Complex::new(z, 0.0);
    }
    let mut out = M::zeros(n, n);
    for j in 0..n {
        let mut e = vec![Complex::new(0.0, 0.0); n];
        e[j] = Complex::new(1.0, 0.0);
        let col = solve_complex(&shifted, &e);
        for i in 0..n {
            out[(i, j)] = col[i];
        }
    }
    out
}

const GL16: [(f64, f64); 16] = [
    (-0.9894009349916499, 0.0271524594117565),
    (-0.9445750230732326, 0.0622535239386476),
    (-0.8656312023878318, 0.0951585116824923),
    (-0.7554044083550030, 0.1246289712555336),
    (-0.6178762444026438, 0.1495959888165764),
    (-0.4580167776572274, 0.1691565193950021),
    (-0.2816035507792589, 0.1826034150449233),
    (-0.0950125098376375, 0.1894506104550681),
    (0.0950125098376375, 0.1894506104550681),
    (0.2816035507792589, 0.1826034150449233),
    (0.4580167776572274, 0.1691565193950021),
    (0.6178762444026438, 0.1495959888165764),
    (0.7554044083550030, 0.1246289712555336),
    (0.8656312023878318, 0.0951585116824923),
    (0.9445750230732326, 0.0622535239386476),
    (0.9894009349916499, 0.0271524594117565),
];

/// Quadrature oracle for `Z = \int_0^inf (s+z)^{-1} r (s+z)^{-1} dz - I`,
/// substituting `z = tan(theta)` and integrating with 16-point
/// Gauss-Legendre panels, geometrically graded toward theta = 0 so the
/// resolvent's boundary layer at z ~ gamma_min is resolved, and direct
/// matrix inversion at each node.
pub fn z_quadrature(rho: &DensityMatrix<f64>, sigma: &DensityMatrix<f64>) -> M {
    let top = std::f64::consts::FRAC_PI_2;
    let mut breaks = vec![0.0];
    for k in (0..=48).rev() {
        breaks.push(top * 0.5f64.powi(k));
    }
    let mut acc = M::zeros(4, 4);
    for pair in breaks.windows(2) {
        let (a, b) = (pair[0], pair[1]);
        let h = b - a;
        for (xi, wi) in GL16 {
            let theta = a + 0.5 * h * (xi + 1.0);
            let z = theta.tan();
            let sec2 = 1.0 + z * z;
            let r = resolvent(sigma.mat(), z);
            let term = (&(&r * rho.mat()) * &r).scaled_re(wi * 0.5 * h * sec2);
            acc = acc.add(&term);
        }
    }
    let mut out = acc;
    for i in 0..4 {
        out[(i, i)] -= Complex::new(1.0, 0.0);
    }
    out
}
