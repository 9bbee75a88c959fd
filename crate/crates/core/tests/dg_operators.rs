mod common;

use std::sync::Arc;

use nalgebra::DMatrix;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use prion_dg::dg::quadrature::PolygonRule;
use prion_dg::dg::{
    apply_nonlinear_reaction, assemble_linear_reaction, assemble_load, assemble_mass, assemble_nonlinear_reaction,
    assemble_stiffness, face_penalty, DgSpace,
};
use prion_dg::linalg::CsrMatrix;
use prion_dg::mesh::{agglomerate, generate_structured, triangulated_disc, triangulated_rectangle, PolyMesh, RegionRule};
use prion_dg::models::diffusion_field;

fn meshes() -> Vec<(&'static str, PolyMesh)> {
    let two_region = RegionRule::WhiteBelow {
        white_below: 0.5,
        axonal: [1.0, 2.0],
    };
    let disc = triangulated_disc(4, 1.0, [0.3, -0.2], &RegionRule::AllGrey).unwrap();
    vec![
        ("quads", generate_structured(4, 3, 1.0, 1.0, &two_region).unwrap()),
        ("triangles", triangulated_rectangle(3, 3, 2.0, 1.0, &two_region).unwrap()),
        ("polygons", agglomerate(&disc, 12, 5).unwrap()),
    ]
}

fn random_vec(n: usize, seed: u64) -> Vec<f64> {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    (0..n).map(|_| rng.random_range(-1.0..1.0)).collect()
}

fn dense(a: &CsrMatrix) -> DMatrix<f64> {
    let d = a.to_dense();
    DMatrix::from_fn(a.n_rows(), a.n_cols(), |i, j| d[i][j])
}

fn max_diff(a: &CsrMatrix, b: &CsrMatrix) -> f64 {
    (dense(a) - dense(b)).abs().max()
}

fn dot(a: &[f64], b: &[f64]) -> f64 {
    a.iter().zip(b).map(|(x, y)| x * y).sum()
}

#[test]
fn local_dimensions() {
    let one = Arc::new(generate_structured(1, 1, 1.0, 1.0, &RegionRule::AllGrey).unwrap());
    let s = DgSpace::new(one.clone(), 1).unwrap();
    assert_eq!((s.local_dim(), s.num_dofs()), (3, 3));
    let (_, m) = &meshes()[2];
    let s = DgSpace::new(Arc::new(m.clone()), 5).unwrap();
    assert_eq!(s.local_dim(), 21);
    assert_eq!(s.num_dofs(), 21 * m.num_elements());
}

#[test]
fn basis_is_orthonormal_under_a_finer_rule() {
    for (name, m) in meshes() {
        let m = Arc::new(m);
        for degree in 1..=4 {
            let s = DgSpace::new(m.clone(), degree).unwrap();
            let n = s.local_dim();
            for k in 0..m.num_elements() {
                let rule = PolygonRule::new(&m.element_points(k), degree + 4);
                let mut vals = vec![0.0; n];
                let mut gram = vec![0.0; n * n];
                for (p, w) in rule.points.iter().zip(&rule.weights) {
                    s.element(k).basis.eval(*p, &mut vals);
                    for i in 0..n {
                        for j in 0..n {
                            gram[i * n + j] += w * vals[i] * vals[j];
                        }
                    }
                }
                for i in 0..n {
                    for j in 0..n {
                        let e = if i == j { 1.0 } else { 0.0 };
                        assert!((gram[i * n + j] - e).abs() < 1e-10, "{name} l={degree} k={k}");
                    }
                }
            }
        }
    }
}

#[test]
fn mass_matrix() {
    for (name, m) in meshes() {
        let area = m.total_area();
        let s = DgSpace::new(Arc::new(m), 3).unwrap();
        let mass = assemble_mass(&s);
        assert!(max_diff(&mass, &CsrMatrix::identity(s.num_dofs())) < 1e-10, "{name}");
        let one = s.constant(1.0);
        assert!((dot(&one, &mass.mul_vec(&one)) - area).abs() < 1e-12 * area, "{name}");
        let v = random_vec(s.num_dofs(), 1);
        assert!(dot(&v, &mass.mul_vec(&v)) > 0.0);
    }
}

#[test]
fn stiffness_vanishes_without_diffusion_or_reaction() {
    let (_, m) = meshes().remove(0);
    let s = DgSpace::new(Arc::new(m), 2).unwrap();
    let ne = s.num_elements();
    let a = assemble_stiffness(&s, &vec![[[0.0; 2]; 2]; ne], &vec![0.0; ne], 10.0).unwrap();
    assert_eq!(a.max_abs(), 0.0);
}

#[test]
fn stiffness_kernel_symmetry_and_semidefiniteness() {
    for (name, m) in meshes() {
        let s = DgSpace::new(Arc::new(m), 2).unwrap();
        let d = diffusion_field(s.mesh(), 8e-6, 8e-5);
        let k: Vec<f64> = (0..s.num_elements()).map(|i| 0.2 + 0.1 * (i % 3) as f64).collect();
        let a = assemble_stiffness(&s, &d, &k, 10.0).unwrap();
        let norm = a.max_abs();
        let a1 = a.mul_vec(&s.constant(1.0));
        assert!(a1.iter().all(|v| v.abs() < 1e-10 * norm.max(1.0)), "{name}");
        assert!(a.asymmetry() < 1e-12, "{name}");
        let dm = dense(&a);
        let dm = 0.5 * (&dm + dm.transpose());
        let lmin = dm.symmetric_eigenvalues().min();
        let scale = dense(&a).norm();
        assert!(lmin >= -1e-10 * scale, "{name}: min eigenvalue {lmin}");
        let again = assemble_stiffness(&s, &d, &k, 10.0).unwrap();
        assert_eq!(a, again);
    }
}

#[test]
fn stiffness_rejects_bad_input() {
    let (_, m) = meshes().remove(0);
    let s = DgSpace::new(Arc::new(m), 1).unwrap();
    let ne = s.num_elements();
    let id = vec![[[1.0, 0.0], [0.0, 1.0]]; ne];
    assert!(assemble_stiffness(&s, &id, &vec![0.0; ne], 0.0).is_err());
    let skew = vec![[[1.0, 0.5], [0.0, 1.0]]; ne];
    assert!(assemble_stiffness(&s, &skew, &vec![0.0; ne], 10.0).is_err());
    let neg = vec![[[-1.0, 0.0], [0.0, 1.0]]; ne];
    assert!(assemble_stiffness(&s, &neg, &vec![0.0; ne], 10.0).is_err());
}

#[test]
fn penalty_formula() {
    let hm = |a: f64, b: f64| 2.0 * a * b / (a + b);
    let got = face_penalty(10.0, 3, (1e-5, 8e-5), (0.2, 0.4), (0.1, 0.05));
    let expect = 10.0 * hm(1e-5, 8e-5).max(hm(0.2, 0.4)) * 9.0 / hm(0.1, 0.05);
    assert!((got - expect).abs() < 1e-12 * expect);
}

#[test]
fn reaction_matrices() {
    let (_, m) = meshes().remove(2);
    let s = DgSpace::new(Arc::new(m), 2).unwrap();
    let ne = s.num_elements();
    let mass = assemble_mass(&s);
    assert!(max_diff(&assemble_linear_reaction(&s, &vec![1.0; ne]).unwrap(), &mass) < 1e-14);
    assert_eq!(assemble_linear_reaction(&s, &vec![0.0; ne]).unwrap().max_abs(), 0.0);
    let two = assemble_linear_reaction(&s, &vec![2.0; ne]).unwrap();
    assert!(max_diff(&two, &mass.scale(2.0)) < 1e-12);

    let omega: Vec<f64> = (0..ne).map(|k| 0.5 + k as f64 / ne as f64).collect();
    let m_omega = assemble_linear_reaction(&s, &omega).unwrap();
    let at_one = assemble_nonlinear_reaction(&s, &omega, &s.constant(1.0)).unwrap();
    assert!(max_diff(&at_one, &m_omega) < 1e-12);
    let zero = vec![0.0; s.num_dofs()];
    assert!(assemble_nonlinear_reaction(&s, &omega, &zero).unwrap().max_abs() < 1e-300);

    let t1 = random_vec(s.num_dofs(), 2);
    let t2 = random_vec(s.num_dofs(), 3);
    let sum: Vec<f64> = t1.iter().zip(&t2).map(|(a, b)| a + b).collect();
    let lhs = assemble_nonlinear_reaction(&s, &omega, &sum).unwrap();
    let rhs = assemble_nonlinear_reaction(&s, &omega, &t1)
        .unwrap()
        .linear_combination(1.0, &assemble_nonlinear_reaction(&s, &omega, &t2).unwrap(), 1.0)
        .unwrap();
    assert!(max_diff(&lhs, &rhs) < 1e-12);

    let psi = random_vec(s.num_dofs(), 4);
    let mut out = vec![0.0; s.num_dofs()];
    apply_nonlinear_reaction(&s, &omega, &t1, &psi, &mut out);
    let expect = assemble_nonlinear_reaction(&s, &omega, &t1).unwrap().mul_vec(&psi);
    for (a, b) in out.iter().zip(&expect) {
        assert!((a - b).abs() < 1e-13);
    }
}

#[test]
fn load_vector() {
    let (_, m) = meshes().remove(1);
    let area = m.total_area();
    let s = DgSpace::new(Arc::new(m), 2).unwrap();
    let ne = s.num_elements();
    assert!(assemble_load(&s, &vec![0.0; ne]).unwrap().iter().all(|&v| v == 0.0));
    let one = s.constant(1.0);
    let f1 = assemble_load(&s, &vec![1.0; ne]).unwrap();
    let m1 = assemble_mass(&s).mul_vec(&one);
    assert!(f1.iter().zip(&m1).all(|(a, b)| (a - b).abs() < 1e-12));
    let k0 = 1.4509841256220537;
    let f = assemble_load(&s, &vec![k0; ne]).unwrap();
    assert!((dot(&one, &f) - k0 * area).abs() < 1e-12 * k0 * area);
}

#[test]
fn space_averages() {
    let s = common::unit_square_space(7, 2);
    assert!((s.space_average(&s.constant(3.2)).unwrap() - 3.2).abs() < 1e-13);
    assert_eq!(s.space_average(&vec![0.0; s.num_dofs()]).unwrap(), 0.0);
    let half = s.project(|p| if p[0] < 0.5 { 1.0 } else { 0.0 });
    let h = (0..s.num_elements()).map(|k| s.mesh().diameter(k)).fold(0.0, f64::max);
    assert!((s.space_average(&half).unwrap() - 0.5).abs() <= h);
    let avgs = s.cell_averages(&s.constant(2.5)).unwrap();
    assert!(avgs.iter().all(|a| (a - 2.5).abs() < 1e-13));
}
