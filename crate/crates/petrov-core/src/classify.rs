//! Star-Einstein residuals, Petrov Type detection, almost-Einstein pattern
//! checks, and the Lorentzian normal form.

use std::fmt;

use crate::basis::{Lambda2Vector, Mat6, Signature, Vec6};
use crate::curvature::CurvatureTensor;
use crate::error::Error;
use crate::hodge::{complexify, hodge_star, star_l_commutator, StarOperator};
use crate::linalg::{complex_eigenstructure, eig_symmetric, Mat3, C64};
use crate::Result;

/// Count of independent complex eigenvectors: 3, 2, or 1.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum PetrovType {
    I,
    II,
    III,
}

impl fmt::Display for PetrovType {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            PetrovType::I => write!(f, "I"),
            PetrovType::II => write!(f, "II"),
            PetrovType::III => write!(f, "III"),
        }
    }
}

/// Which operator is classified.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum PetrovMode {
    /// The operator itself; requires commutation with the Lorentzian star.
    FullOperator,
    /// The commuting part extracted first; defined for any input.
    SPart,
}

/// Outcome of a Petrov classification.
#[derive(Debug, Clone)]
pub struct PetrovReport {
    pub petrov_type: PetrovType,
    /// Eigenvalue cluster centroids with algebraic multiplicities.
    pub eigenvalues: Vec<(C64, usize)>,
    pub geometric_multiplicities: Vec<usize>,
    /// Commutation defect of the operator that was handed in.
    pub commutation_residual: f64,
    /// Slack of the tightest clustering / rank decision (>= 1 is clean).
    pub tolerance_margin: f64,
    pub mode: PetrovMode,
}

/// Max-abs entry of the commutator of `m` with a deformation star.
pub fn star_einstein_residual(m: &Mat6, star: &StarOperator) -> f64 {
    (m * star.matrix - star.matrix * m).abs().max()
}

/// Classifies a bivector operator by the complex eigenstructure induced by
/// the Lorentzian star.
pub fn petrov_type(m: &Mat6, mode: PetrovMode, tol: f64) -> Result<PetrovReport> {
    let residual = star_l_commutator(m);
    let complexified = match mode {
        PetrovMode::FullOperator => complexify(m, tol)?,
        PetrovMode::SPart => {
            let star = hodge_star(Signature::Lorentzian).matrix;
            let s = (m - star * m * star) * 0.5;
            complexify(&s, tol)?
        }
    };
    let es = complex_eigenstructure(&complexified.matrix)?;
    let petrov_type = match es.total_geometric() {
        3 => PetrovType::I,
        2 => PetrovType::II,
        _ => PetrovType::III,
    };
    Ok(PetrovReport {
        petrov_type,
        eigenvalues: es.clusters.iter().map(|c| (c.value, c.algebraic)).collect(),
        geometric_multiplicities: es.clusters.iter().map(|c| c.geometric).collect(),
        commutation_residual: residual,
        tolerance_margin: es.margin,
        mode,
    })
}

/// Convenience wrapper classifying a curvature tensor's operator.
pub fn petrov_type_of_tensor(
    t: &CurvatureTensor,
    mode: PetrovMode,
    tol: f64,
) -> Result<PetrovReport> {
    petrov_type(&t.curvature_operator().matrix, mode, tol)
}

/// Verdict of the almost-Einstein Ricci pattern: diagonal `lambda`
/// everywhere, arbitrary first row/column, zero elsewhere.
#[derive(Debug, Clone, PartialEq)]
pub struct AlmostEinstein {
    pub matches: bool,
    pub lambda: f64,
    pub psi: [f64; 3],
    pub residual: f64,
    pub tolerance: f64,
}

pub fn almost_einstein_check(t: &CurvatureTensor, tol: f64) -> Result<AlmostEinstein> {
    if t.frame_signature() != Signature::Riemannian {
        return Err(Error::WrongFrameSignature {
            expected: Signature::Riemannian,
            found: t.frame_signature(),
        });
    }
    let ric = t.ricci();
    let lambda = ric.lambda;
    let mut residual: f64 = 0.0;
    for i in 1..4 {
        residual = residual.max((ric.full[(i, i)] - lambda).abs());
        for j in (i + 1)..4 {
            residual = residual.max(ric.full[(i, j)].abs());
        }
    }
    let tolerance = tol * (1.0 + ric.full.abs().max());
    Ok(AlmostEinstein {
        matches: residual < tolerance,
        lambda,
        psi: ric.psi,
        residual,
        tolerance,
    })
}

/// Whether the self-dual and anti-self-dual Weyl blocks agree in the given
/// frame, with the max-abs deviation.
pub fn w_plus_equals_w_minus(t: &CurvatureTensor, tol: f64) -> Result<(bool, f64)> {
    let w = t.weyl_blocks()?;
    let residual = (w.wplus - w.wminus).abs().max();
    let scale = 1.0 + w.wplus.abs().max().max(w.wminus.abs().max()) + w.scal.abs();
    Ok((residual < tol * scale, residual))
}

/// Normal-form data of a Lorentzian-frame tensor: three planes with their
/// duals and the pair `(lambda_i, mu_i)` acting on each.
#[derive(Debug, Clone)]
pub struct NormalForm {
    pub lambdas: [f64; 3],
    pub mus: [f64; 3],
    pub planes: [Lambda2Vector; 3],
    pub dual_planes: [Lambda2Vector; 3],
    /// Max-abs entry of `op - reassembled`.
    pub residual: f64,
}

/// Computes the unique normal form of the adapted operator of a
/// Lorentzian-frame tensor commuting with the Riemannian deformation star.
///
/// The commuting operator block-diagonalizes over the self-dual and
/// anti-self-dual eigenspaces of the star; the two symmetric 3x3 blocks are
/// diagonalized, eigenvectors paired in descending eigenvalue order, and
/// each unit self-dual + anti-self-dual sum is a 2-plane fixed up to the
/// dual direction.
pub fn normal_form_lorentzian(t: &CurvatureTensor, tol: f64) -> Result<NormalForm> {
    let op = t.c_hat_h()?.matrix;
    let star = hodge_star(Signature::Riemannian);
    let residual = star_einstein_residual(&op, &star);
    let tolerance = tol * (1.0 + op.norm());
    if residual >= tolerance {
        return Err(Error::NotStarEinstein {
            residual,
            tolerance,
        });
    }
    let block = |r: usize, c: usize| Mat3::from_fn(|i, j| op[(r + i, c + j)]);
    let m11 = (block(0, 0) + block(3, 3)) * 0.5;
    let m12 = (block(0, 3) + block(3, 0)) * 0.5;
    let m12 = (m12 + m12.transpose()) * 0.5;
    let (a_vals, a_vecs) = eig_symmetric(&(m11 + m12))?;
    let (b_vals, b_vecs) = eig_symmetric(&(m11 - m12))?;

    let mut lambdas = [0.0; 3];
    let mut mus = [0.0; 3];
    let mut planes = [Lambda2Vector::zeros(); 3];
    let mut dual_planes = [Lambda2Vector::zeros(); 3];
    let mut reassembled = Mat6::zeros();
    let half = 0.5;
    for i in 0..3 {
        lambdas[i] = (a_vals[i] + b_vals[i]) * 0.5;
        mus[i] = (a_vals[i] - b_vals[i]) * 0.5;
        let u = a_vecs.column(i);
        let v = b_vecs.column(i);
        // Self-dual (u,u)/sqrt2 plus anti-self-dual (v,-v)/sqrt2, over sqrt2.
        let mut p = Vec6::zeros();
        let mut d = Vec6::zeros();
        for k in 0..3 {
            p[k] = (u[k] + v[k]) * half;
            p[k + 3] = (u[k] - v[k]) * half;
            d[k] = (u[k] - v[k]) * half;
            d[k + 3] = (u[k] + v[k]) * half;
        }
        planes[i] = Lambda2Vector(p);
        dual_planes[i] = Lambda2Vector(d);
        // Rank-one contributions of the two half-spectra.
        for r in 0..3 {
            for c in 0..3 {
                let su = a_vals[i] * u[r] * u[c] * half;
                let sv = b_vals[i] * v[r] * v[c] * half;
                reassembled[(r, c)] += su + sv;
                reassembled[(r + 3, c + 3)] += su + sv;
                reassembled[(r, c + 3)] += su - sv;
                reassembled[(r + 3, c)] += su - sv;
            }
        }
    }
    let rec_residual = (op - reassembled).abs().max();
    Ok(NormalForm {
        lambdas,
        mus,
        planes,
        dual_planes,
        residual: rec_residual,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::catalog;
    use crate::curvature::sa_decompose;
    use crate::hodge::realify;
    use crate::linalg::{cond_complex, CMat3};
    use nalgebra::Vector3;
    use rand::{Rng, SeedableRng};
    use rand_chacha::ChaCha8Rng;

    #[test]
    fn scalar_operators_commute_with_every_star() {
        let t = catalog::gen_constant_curvature(2.0);
        let m = t.curvature_operator().matrix;
        for sig in [
            Signature::Riemannian,
            Signature::Lorentzian,
            Signature::Split,
        ] {
            assert_eq!(star_einstein_residual(&m, &hodge_star(sig)), 0.0);
        }
    }

    #[test]
    fn residual_is_linear_in_perturbation() {
        let t = catalog::gen_star_l_einstein(5);
        let m = t.curvature_operator().matrix;
        let star = hodge_star(Signature::Lorentzian);
        assert!(star_einstein_residual(&m, &star) < 1e-14);
        let mut rng = ChaCha8Rng::seed_from_u64(50);
        let e = Mat6::from_fn(|_, _| rng.random_range(-1.0..1.0));
        let unit = star_einstein_residual(&e, &star);
        for eps in [1e-3, 1e-6, 1e-9] {
            let r = star_einstein_residual(&(m + e * eps), &star);
            assert!((r - eps * unit).abs() < 1e-12 * (1.0 + unit));
        }
    }

    #[test]
    fn constant_curvature_is_type_one() {
        let t = catalog::gen_constant_curvature(1.5);
        let rep = petrov_type_of_tensor(&t, PetrovMode::FullOperator, 1e-8).unwrap();
        assert_eq!(rep.petrov_type, PetrovType::I);
        assert_eq!(rep.eigenvalues.len(), 1);
        let (val, alg) = rep.eigenvalues[0];
        assert_eq!(alg, 3);
        assert!((val - C64::new(1.5, 0.0)).norm() < 1e-12);
        assert_eq!(rep.geometric_multiplicities, vec![3]);
    }

    #[test]
    fn synthesized_jordan_types_detected() {
        let rep = petrov_type(
            &catalog::gen_prescribed_jordan(
                PetrovType::II,
                &[C64::new(1.0, 1.0), C64::new(2.0, -1.0)],
                11,
            )
            .unwrap()
            .matrix,
            PetrovMode::FullOperator,
            1e-8,
        )
        .unwrap();
        assert_eq!(rep.petrov_type, PetrovType::II);
        let double = rep
            .eigenvalues
            .iter()
            .find(|(_, alg)| *alg == 2)
            .expect("double eigenvalue");
        assert!((double.0 - C64::new(2.0, -1.0)).norm() < 1e-5);

        let rep = petrov_type(
            &catalog::gen_prescribed_jordan(PetrovType::III, &[C64::new(5.0, 0.0)], 12)
                .unwrap()
                .matrix,
            PetrovMode::FullOperator,
            1e-8,
        )
        .unwrap();
        assert_eq!(rep.petrov_type, PetrovType::III);
    }

    #[test]
    fn symmetric_block_draws_are_type_one_with_real_eigenvalues() {
        // Zeroing the antisymmetric block leaves a real symmetric
        // complexification: diagonalizable with a real spectrum.
        for seed in 0..20 {
            let t = catalog::gen_star_l_einstein(seed);
            let mut m = *t.sym6();
            for i in 0..3 {
                for j in 0..3 {
                    m[(i, j + 3)] = 0.0;
                    m[(i + 3, j)] = 0.0;
                }
            }
            let t = CurvatureTensor::from_sym6(m, Signature::Riemannian);
            let rep = petrov_type_of_tensor(&t, PetrovMode::FullOperator, 1e-8).unwrap();
            assert_eq!(rep.petrov_type, PetrovType::I);
            for (z, _) in &rep.eigenvalues {
                assert!(z.im.abs() < 1e-10, "imaginary part {}", z.im);
            }
        }
    }

    #[test]
    fn full_mode_requires_commutation() {
        let t = catalog::random_tensor(3, Signature::Riemannian);
        assert!(matches!(
            petrov_type_of_tensor(&t, PetrovMode::FullOperator, 1e-8),
            Err(Error::NotComplexLinear { .. })
        ));
        // The general mode always succeeds.
        let rep = petrov_type_of_tensor(&t, PetrovMode::SPart, 1e-8).unwrap();
        assert!(rep.commutation_residual > 1e-3);
    }

    #[test]
    fn s_part_always_commutes() {
        let star = hodge_star(Signature::Lorentzian);
        for seed in 0..50 {
            let t = catalog::random_tensor(seed, Signature::Riemannian);
            let (s, _) = sa_decompose(&t.curvature_operator(), &star, -1).unwrap();
            assert!(star_l_commutator(&s.matrix) < 1e-14);
        }
    }

    #[test]
    fn classification_is_conjugation_invariant() {
        let mut rng = ChaCha8Rng::seed_from_u64(51);
        let cases: Vec<(CMat3, PetrovType)> = vec![
            (
                CMat3::from_diagonal(&Vector3::new(
                    C64::new(1.0, 0.5),
                    C64::new(-1.0, 0.0),
                    C64::new(2.0, -0.3),
                )),
                PetrovType::I,
            ),
            (
                CMat3::new(
                    C64::new(1.0, 0.0),
                    C64::new(0.0, 0.0),
                    C64::new(0.0, 0.0),
                    C64::new(0.0, 0.0),
                    C64::new(2.0, 1.0),
                    C64::new(1.0, 0.0),
                    C64::new(0.0, 0.0),
                    C64::new(0.0, 0.0),
                    C64::new(2.0, 1.0),
                ),
                PetrovType::II,
            ),
            (
                CMat3::new(
                    C64::new(0.5, -0.2),
                    C64::new(1.0, 0.0),
                    C64::new(0.0, 0.0),
                    C64::new(0.0, 0.0),
                    C64::new(0.5, -0.2),
                    C64::new(1.0, 0.0),
                    C64::new(0.0, 0.0),
                    C64::new(0.0, 0.0),
                    C64::new(0.5, -0.2),
                ),
                PetrovType::III,
            ),
        ];
        for (c, expected) in cases {
            let base = petrov_type(
                &realify(&crate::hodge::ComplexOperator { matrix: c }),
                PetrovMode::FullOperator,
                1e-8,
            )
            .unwrap();
            assert_eq!(base.petrov_type, expected);
            for _ in 0..10 {
                let q = loop {
                    let q = CMat3::from_fn(|_, _| {
                        C64::new(rng.random_range(-1.0..1.0), rng.random_range(-1.0..1.0))
                    });
                    if cond_complex(&q) < 100.0 {
                        break q;
                    }
                };
                let conj = q * c * q.try_inverse().unwrap();
                let rep = petrov_type(
                    &realify(&crate::hodge::ComplexOperator { matrix: conj }),
                    PetrovMode::FullOperator,
                    1e-8,
                )
                .unwrap();
                assert_eq!(rep.petrov_type, expected);
            }
        }
    }

    #[test]
    fn almost_einstein_examples() {
        let t = catalog::gen_star_l_einstein(17);
        let v = almost_einstein_check(&t, 1e-8).unwrap();
        assert!(v.matches, "residual {}", v.residual);
        assert!(v.residual < 1e-10);

        let flat = catalog::gen_constant_curvature(0.0);
        let v = almost_einstein_check(&flat, 1e-8).unwrap();
        assert!(v.matches);
        assert_eq!(v.lambda, 0.0);
        assert_eq!(v.psi, [0.0; 3]);

        let generic = catalog::random_tensor(23, Signature::Riemannian);
        let v = almost_einstein_check(&generic, 1e-8).unwrap();
        assert!(!v.matches);
        assert!(v.residual > 1e-3);
    }

    #[test]
    fn weyl_halves_agree_exactly_when_commuting() {
        for seed in 0..20 {
            let t = catalog::gen_star_l_einstein(seed);
            let (holds, residual) = w_plus_equals_w_minus(&t, 1e-8).unwrap();
            assert!(holds);
            assert!(residual < 1e-13);
        }
        let flat = catalog::gen_constant_curvature(0.0);
        assert!(w_plus_equals_w_minus(&flat, 1e-8).unwrap().0);
    }

    #[test]
    fn product_sphere_in_generic_frame_fails_weyl_equality() {
        // In the product-adapted frame the halves agree; a generic frame
        // rotation separates them.
        let t = catalog::gen_product_s2xs2(1.0, 1.0);
        assert!(w_plus_equals_w_minus(&t, 1e-8).unwrap().0);
        let mut rng = ChaCha8Rng::seed_from_u64(52);
        let q = crate::linalg::random_rotation4(&mut rng);
        let rotated = t.rotate_frame(&q);
        let (holds, residual) = w_plus_equals_w_minus(&rotated, 1e-8).unwrap();
        assert!(!holds, "residual {residual}");
        assert!(residual > 1e-3);
    }

    #[test]
    fn normal_form_of_flat_and_scalar() {
        let flat = CurvatureTensor::from_sym6(Mat6::zeros(), Signature::Lorentzian);
        let nf = normal_form_lorentzian(&flat, 1e-8).unwrap();
        assert_eq!(nf.lambdas, [0.0; 3]);
        assert_eq!(nf.mus, [0.0; 3]);
        assert_eq!(nf.residual, 0.0);

        let k = 0.8;
        let scalar = CurvatureTensor::from_sym6(Mat6::identity() * -k, Signature::Lorentzian);
        let nf = normal_form_lorentzian(&scalar, 1e-8).unwrap();
        for i in 0..3 {
            assert!((nf.lambdas[i] - k).abs() < 1e-12);
            assert!(nf.mus[i].abs() < 1e-12);
        }
    }

    #[test]
    fn normal_form_recovers_planted_data() {
        let mut rng = ChaCha8Rng::seed_from_u64(53);
        let lambdas = [3.0, 2.0, 1.0];
        let mus = [0.5, 0.0, -0.5];
        for _ in 0..20 {
            let op = catalog::random_rotation3(&mut rng);
            let om = catalog::random_rotation3(&mut rng);
            let t = catalog::assemble_lorentzian_normal_form(&lambdas, &mus, &op, &om);
            let nf = normal_form_lorentzian(&t, 1e-8).unwrap();
            for i in 0..3 {
                assert!(
                    (nf.lambdas[i] - lambdas[i]).abs() < 1e-9,
                    "{:?}",
                    nf.lambdas
                );
                assert!((nf.mus[i] - mus[i]).abs() < 1e-9, "{:?}", nf.mus);
            }
            assert!(nf.residual < 1e-9);
            // The defining relation of each plane.
            let c = t.c_hat_h().unwrap().matrix;
            for i in 0..3 {
                let lhs = c * nf.planes[i].0;
                let rhs = nf.planes[i].0 * nf.lambdas[i] + nf.dual_planes[i].0 * nf.mus[i];
                assert!((lhs - rhs).norm() < 1e-9);
                assert!(nf.planes[i].is_decomposable(1e-10));
            }
        }
    }

    #[test]
    fn normal_form_rejects_noncommuting() {
        let t = catalog::random_tensor(29, Signature::Lorentzian);
        assert!(matches!(
            normal_form_lorentzian(&t, 1e-8),
            Err(Error::NotStarEinstein { .. })
        ));
    }

    #[test]
    fn star_h_einstein_lorentzian_generator_reconstructs() {
        for seed in 0..50 {
            let t = catalog::gen_star_h_einstein(seed, catalog::StarHKind::LorentzianG);
            let nf = normal_form_lorentzian(&t, 1e-8).unwrap();
            assert!(nf.residual < 1e-9, "seed {seed}: {}", nf.residual);
        }
    }
}
