//! Round trips and Gram identities for the local-filtering normal form.

mod common;

use common::{bell_diagonal, M};
use entangle_boundary::linalg::CMat;
use entangle_boundary::normal_form::{filter_normal_form, gram_matrices, wootters_decomposition};
use entangle_boundary::states::{
    concurrence_lambdas, filtered_state, random_density_rng, random_filter_rng,
};
use rand::Rng;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;

fn random_weights(rng: &mut ChaCha8Rng) -> [f64; 4] {
    let mut p = [0.0f64; 4];
    let mut tot = 0.0;
    for pk in p.iter_mut() {
        *pk = 0.03 + rng.gen::<f64>();
        tot += *pk;
    }
    for pk in p.iter_mut() {
        *pk /= tot;
    }
    p.sort_by(|a, b| b.partial_cmp(a).unwrap());
    p
}

#[test]
fn round_trip_recovers_weights() {
    // Build from (F_A, F_B, p), decompose, compare p (10^3 draws).
    let mut rng = ChaCha8Rng::seed_from_u64(11);
    for _ in 0..1000 {
        let p = random_weights(&mut rng);
        let fa = random_filter_rng::<f64>(&mut rng, 10.0);
        let fb = random_filter_rng::<f64>(&mut rng, 10.0);
        let rho = filtered_state(&bell_diagonal(p), &fa, &fb);
        let nf = filter_normal_form(&rho).unwrap();
        for k in 0..4 {
            assert!((nf.p[k] - p[k]).abs() <= 1e-8, "p = {:?} vs {:?}", nf.p, p);
        }
        assert!(nf.reconstruct().sub(rho.mat()).fro_norm() <= 1e-8);
    }
}

#[test]
fn wootters_lambdas_match_concurrence_route() {
    let mut rng = ChaCha8Rng::seed_from_u64(12);
    for _ in 0..300 {
        let rho = random_density_rng::<f64>(&mut rng, 4);
        let w = wootters_decomposition(&rho).unwrap();
        let l = concurrence_lambdas(&rho);
        for k in 0..4 {
            assert!((w.lambda[k] - l[k]).abs() <= 1e-10);
        }
    }
}

#[test]
fn lambda_equals_p_over_n_sweep() {
    let mut rng = ChaCha8Rng::seed_from_u64(13);
    for _ in 0..1000 {
        let rho = random_density_rng::<f64>(&mut rng, 4);
        let w = wootters_decomposition(&rho).unwrap();
        let nf = filter_normal_form(&rho).unwrap();
        for k in 0..4 {
            assert!(
                (w.lambda[k] - nf.p[k] / nf.n).abs() <= 1e-8,
                "lambda {:?} vs p/N {:?}",
                w.lambda,
                nf.p.map(|x| x / nf.n)
            );
        }
    }
}

#[test]
fn gram_identities_sweep() {
    let mut rng = ChaCha8Rng::seed_from_u64(14);
    let id = M::identity(4);
    for _ in 0..300 {
        let rho = random_density_rng::<f64>(&mut rng, 4);
        let w = wootters_decomposition(&rho).unwrap();
        let g = gram_matrices(&w);
        assert!(g.q.matmul(&g.q.transpose()).sub(&id).fro_norm() <= 1e-10);
        assert!(g.q.matmul(&g.pi).sub(&id).fro_norm() <= 1e-10);
        assert!(g.pi.matmul(&g.q).sub(&id).fro_norm() <= 1e-10);
        // Pi equals the elementwise conjugate of Q exactly as computed.
        assert!(g.pi.sub(&g.q.conjugate()).fro_norm() <= 1e-12);
        // Q is positive definite.
        let eig = entangle_boundary::linalg::eig_hermitian(&g.q, 1e-10).unwrap();
        assert!(eig.values[0] > 0.0);
    }
}

#[test]
fn bell_weights_are_filter_invariant() {
    // Extra filtering moves a state within its subspace; the canonical
    // weights stay put.
    let mut rng = ChaCha8Rng::seed_from_u64(15);
    for _ in 0..200 {
        let rho = random_density_rng::<f64>(&mut rng, 4);
        let nf = filter_normal_form(&rho).unwrap();
        let fa = random_filter_rng::<f64>(&mut rng, 3.0);
        let fb = random_filter_rng::<f64>(&mut rng, 3.0);
        let moved = filtered_state(&rho, &fa, &fb);
        let nf2 = filter_normal_form(&moved).unwrap();
        for k in 0..4 {
            assert!(
                (nf.p[k] - nf2.p[k]).abs() <= 1e-7,
                "weights moved: {:?} vs {:?}",
                nf.p,
                nf2.p
            );
        }
    }
}

#[test]
fn gram_of_t_filter_matches_closed_form() {
    // phi_i = (F x F) e_i with F = diag(t, 1/t): the Gram matrix has the
    // closed form with (t^4 + 1/t^4)/2 corners.
    let t = 1.23f64;
    let f = CMat::diag_re(&[t, 1.0 / t]);
    let bs = entangle_boundary::boundary::make_boundary_state(&f, &f, 0.2, 0.2, 0.1).unwrap();
    let q = &bs.gram.q;
    let t4 = t.powi(4);
    let c = 0.5 * (t4 + 1.0 / t4);
    let s = 0.5 * (t4 - 1.0 / t4);
    assert!((q[(0, 0)].re - c).abs() < 1e-12);
    assert!((q[(3, 3)].re - c).abs() < 1e-12);
    assert!((q[(1, 1)].re - 1.0).abs() < 1e-12);
    assert!((q[(2, 2)].re - 1.0).abs() < 1e-12);
    // Q_03 = (-i t^4 + i/t^4)/2 = -i s.
    assert!(q[(0, 3)].re.abs() < 1e-12 && (q[(0, 3)].im + s).abs() < 1e-12);
    assert!((q[(3, 0)].im - s).abs() < 1e-12);
    for (i, j) in [(0, 1), (0, 2), (1, 2), (1, 3), (2, 3)] {
        assert!(q[(i, j)].norm() < 1e-12, "Q[{i}{j}] should vanish");
    }
}
