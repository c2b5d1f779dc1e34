mod common;

use common::*;
use num_complex::Complex64 as C;
use proptest::prelude::*;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use qmla_core::hamiltonian::{
    build_family_terms, expm_unitary, hubbard_mode, jordan_wigner_ladder, kron, likelihood_p0, ComplexMatrix,
    Family, HermitianEigen, Ladder, LatticeSpec, Spin, StateVector,
};
use qmla_core::modelspace::lattice_to_model;

#[test]
fn expm_matches_taylor_oracle() {
    let mut rng = ChaCha8Rng::seed_from_u64(11);
    let mut worst: f64 = 0.0;
    for case in 0..400 {
        let dim = [2, 4, 8, 16][case % 4];
        let h = random_hermitian(dim, &mut rng);
        let t = rng.random_range(0.0..2.0);
        let got = to_dense(&expm_unitary(&from_dense(&h), t).unwrap());
        worst = worst.max(max_diff(&got, &expm_taylor(&h, t)));
    }
    assert!(worst <= 1e-10, "worst deviation {worst:e}");
}

#[test]
fn eigenvalues_match_jacobi_oracle() {
    let mut rng = ChaCha8Rng::seed_from_u64(12);
    for dim in [2, 4, 8, 16] {
        let h = random_hermitian(dim, &mut rng);
        let eig = HermitianEigen::new(&from_dense(&h)).unwrap();
        let mut got = eig.eigenvalues().to_vec();
        got.sort_by(f64::total_cmp);
        for (a, b) in got.iter().zip(hermitian_eigenvalues(&h)) {
            assert!((a - b).abs() < 1e-10, "dim {dim}: {a} vs {b}");
        }
    }
}

#[test]
fn survival_probability_matches_direct_evolution() {
    let mut rng = ChaCha8Rng::seed_from_u64(13);
    for dim in [2, 4, 8] {
        let h = random_hermitian(dim, &mut rng);
        let psi = StateVector::normalised((0..dim).map(|_| C::new(rng.random(), rng.random())).collect()).unwrap();
        let t = rng.random_range(0.0..5.0);
        let u = expm_taylor(&h, t);
        let amp: C = (0..dim)
            .map(|r| psi.amplitudes()[r].conj() * (0..dim).map(|c| u[r][c] * psi.amplitudes()[c]).sum::<C>())
            .sum();
        let p = likelihood_p0(&from_dense(&h), t, &psi).unwrap();
        assert!((p - amp.norm_sqr()).abs() < 1e-10);
    }
}

#[test]
fn hubbard_two_site_matches_fock_oracle() {
    let lattice = LatticeSpec::chain(2).unwrap();
    let (t_up, t_down, u) = (0.37, -0.81, 1.93);
    let model = lattice_to_model(Family::Hubbard, &lattice)
        .unwrap()
        .with_parameters(vec![t_up, t_down, u])
        .unwrap();
    assert_eq!(model.terms()[0].to_string(), "hop:up:(1,2)");
    assert_eq!(model.terms()[1].to_string(), "hop:down:(1,2)");
    let h = to_dense(&model.hamiltonian().unwrap());
    assert!(max_diff(&h, &hubbard_two_site(t_up, t_down, u)) <= 1e-12);
}

#[test]
fn hubbard_terms_are_hermitian_on_larger_lattices() {
    for lattice in [LatticeSpec::chain(3).unwrap(), LatticeSpec::ring(3).unwrap()] {
        for term in build_family_terms(Family::Hubbard, &lattice).unwrap() {
            let m = term.matrix(6).unwrap();
            assert!(m.hermiticity_defect() < 1e-14);
        }
    }
}

#[test]
fn ladder_operators_match_fock_oracle() {
    for n_modes in 1..=4 {
        let f = Fock { n_modes };
        for mode in 0..n_modes {
            let c = to_dense(&jordan_wigner_ladder(mode, n_modes, Ladder::Annihilate).unwrap());
            let cd = to_dense(&jordan_wigner_ladder(mode, n_modes, Ladder::Create).unwrap());
            assert!(max_diff(&c, &f.annihilation(mode)) < 1e-15);
            assert!(max_diff(&cd, &f.creation(mode)) < 1e-15);
        }
    }
}

#[test]
fn canonical_anticommutation() {
    for n_modes in [2, 4, 6] {
        let dim = 1 << n_modes;
        let ops: Vec<(Dense, Dense)> = (0..n_modes)
            .map(|m| {
                (
                    to_dense(&jordan_wigner_ladder(m, n_modes, Ladder::Annihilate).unwrap()),
                    to_dense(&jordan_wigner_ladder(m, n_modes, Ladder::Create).unwrap()),
                )
            })
            .collect();
        let one = C::new(1.0, 0.0);
        for i in 0..n_modes {
            for j in 0..n_modes {
                let (ci, _) = &ops[i];
                let (cj, cdj) = &ops[j];
                let mixed = add(&mul(ci, cdj), &mul(cdj, ci), one);
                let expected = if i == j { identity(dim) } else { zeros(dim) };
                assert!(max_diff(&mixed, &expected) <= 1e-12, "{{c_{i}, c†_{j}}}");
                let same = add(&mul(ci, cj), &mul(cj, ci), one);
                assert!(max_diff(&same, &zeros(dim)) <= 1e-12, "{{c_{i}, c_{j}}}");
            }
        }
    }
}

#[test]
fn mode_order_is_site_major_up_first() {
    assert_eq!(hubbard_mode(1, Spin::Up), 0);
    assert_eq!(hubbard_mode(1, Spin::Down), 1);
    assert_eq!(hubbard_mode(2, Spin::Up), 2);
    assert_eq!(hubbard_mode(3, Spin::Down), 5);
}

fn small_matrix(dim: usize) -> impl Strategy<Value = ComplexMatrix> {
    prop::collection::vec((-2.0f64..2.0, -2.0f64..2.0), dim * dim).prop_map(move |v| {
        ComplexMatrix::from_row_major(dim, v.into_iter().map(|(re, im)| C::new(re, im)).collect()).unwrap()
    })
}

proptest! {
    #[test]
    fn kron_entries_follow_index_formula(a in small_matrix(2), b in small_matrix(4)) {
        let k = kron(&a, &b);
        for r in 0..8 {
            for c in 0..8 {
                let expected = a.get(r / 4, c / 4) * b.get(r % 4, c % 4);
                prop_assert!((k.get(r, c) - expected).norm() < 1e-15);
            }
        }
    }

    #[test]
    fn evolution_is_unitary(seed in any::<u64>(), dim in prop::sample::select(vec![2usize, 4, 8]), t in 0.0f64..10.0) {
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        let h = random_hermitian(dim, &mut rng);
        let u = to_dense(&expm_unitary(&from_dense(&h), t).unwrap());
        let ud: Dense = (0..dim).map(|r| (0..dim).map(|c| u[c][r].conj()).collect()).collect();
        prop_assert!(max_diff(&mul(&ud, &u), &identity(dim)) < 1e-10);
    }
}
