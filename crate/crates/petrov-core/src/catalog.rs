//! Built-in curvature instance generators: analytic model spaces and
//! random draws from the structured classes the analyses detect.

use nalgebra::{Matrix3, Vector3};
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use crate::basis::{Mat6, Signature};
use crate::classify::PetrovType;
use crate::curvature::{CurvatureTensor, OperatorKind, OperatorMatrix};
use crate::error::Error;
use crate::hodge::{realify, ComplexOperator};
use crate::linalg::{cond_complex, CMat3, Mat3, C64};
use crate::Result;

/// Space form of sectional curvature `k`: the operator is `k I`.
pub fn gen_constant_curvature(k: f64) -> CurvatureTensor {
    let m = Mat6::from_fn(|i, j| if i == j { -k } else { 0.0 });
    CurvatureTensor::from_sym6(m, Signature::Riemannian)
}

/// Product of two round 2-spheres with curvatures `k1`, `k2` in the frame
/// adapted to the product splitting: the only independent components are
/// `R_1221 = k1` and `R_3443 = k2`.
pub fn gen_product_s2xs2(k1: f64, k2: f64) -> CurvatureTensor {
    let mut m = Mat6::zeros();
    m[(0, 0)] = -k1;
    m[(3, 3)] = -k2;
    CurvatureTensor::from_sym6(m, Signature::Riemannian)
}

/// Random operator commuting with the Lorentzian star: component blocks
/// `[[A, B], [-B, A]]` with `A` symmetric and `B` antisymmetric, entries
/// uniform in `[-1, 1]`. Pair symmetry and the Bianchi identity hold by
/// construction (antisymmetric blocks are traceless).
pub fn gen_star_l_einstein(seed: u64) -> CurvatureTensor {
    gen_star_l_einstein_with(&mut ChaCha8Rng::seed_from_u64(seed))
}

pub fn gen_star_l_einstein_with(rng: &mut ChaCha8Rng) -> CurvatureTensor {
    let a = random_symmetric3(rng);
    let b = random_antisymmetric3(rng);
    CurvatureTensor::from_sym6(star_l_blocks(&a, &b), Signature::Riemannian)
}

fn star_l_blocks(a: &Mat3, b: &Mat3) -> Mat6 {
    let mut m = Mat6::zeros();
    for i in 0..3 {
        for j in 0..3 {
            m[(i, j)] = a[(i, j)];
            m[(i + 3, j + 3)] = a[(i, j)];
            m[(i, j + 3)] = b[(i, j)];
            m[(i + 3, j)] = -b[(i, j)];
        }
    }
    m
}

/// Which star-h-commuting class to draw from.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum StarHKind {
    /// Riemannian base metric, split-signature deformation.
    SplitGRiemannian,
    /// Lorentzian base metric, Riemannian deformation.
    LorentzianG,
}

/// Random tensor whose adapted operator commutes with the requested
/// deformation star. Bianchi is enforced by projecting the trace out of the
/// off-diagonal block, which stays inside the commuting class.
pub fn gen_star_h_einstein(seed: u64, which: StarHKind) -> CurvatureTensor {
    gen_star_h_einstein_with(&mut ChaCha8Rng::seed_from_u64(seed), which)
}

pub fn gen_star_h_einstein_with(rng: &mut ChaCha8Rng, which: StarHKind) -> CurvatureTensor {
    let a = random_symmetric3(rng);
    match which {
        StarHKind::LorentzianG => {
            // Commutation with the crossed involution forces equal diagonal
            // blocks and a symmetric off-diagonal block.
            let mut b = random_symmetric3(rng);
            let shift = b.trace() / 3.0;
            for i in 0..3 {
                b[(i, i)] -= shift;
            }
            let mut m = Mat6::zeros();
            for i in 0..3 {
                for j in 0..3 {
                    m[(i, j)] = a[(i, j)];
                    m[(i + 3, j + 3)] = a[(i, j)];
                    m[(i, j + 3)] = b[(i, j)];
                    m[(i + 3, j)] = b[(i, j)];
                }
            }
            CurvatureTensor::from_sym6(m, Signature::Lorentzian)
        }
        StarHKind::SplitGRiemannian => {
            // Here the conditions are D = D1 A D1 and B D1 symmetric with
            // D1 = diag(1,-1,-1); draw B = S D1 for symmetric S.
            let d1 = Matrix3::from_diagonal(&Vector3::new(1.0, -1.0, -1.0));
            let s = random_symmetric3(rng);
            let mut b = s * d1;
            let shift = b.trace() / 3.0;
            for i in 0..3 {
                b[(i, i)] -= shift;
            }
            let d = d1 * a * d1;
            let mut m = Mat6::zeros();
            for i in 0..3 {
                for j in 0..3 {
                    m[(i, j)] = a[(i, j)];
                    m[(i, j + 3)] = b[(i, j)];
                    m[(i + 3, j)] = b[(j, i)];
                    m[(i + 3, j + 3)] = d[(i, j)];
                }
            }
            CurvatureTensor::from_sym6(m, Signature::Riemannian)
        }
    }
}

/// Operator similar to a prescribed complex Jordan shape, conjugated by a
/// random complex matrix with condition number below 50 and realified, so
/// it commutes with the Lorentzian star exactly.
pub fn gen_prescribed_jordan(
    jtype: PetrovType,
    eigenvalues: &[C64],
    seed: u64,
) -> Result<OperatorMatrix> {
    let expected = match jtype {
        PetrovType::I => 3,
        PetrovType::II => 2,
        PetrovType::III => 1,
    };
    if eigenvalues.len() != expected {
        return Err(Error::BadEigenvalueCount {
            expected,
            got: eigenvalues.len(),
        });
    }
    let zero = C64::new(0.0, 0.0);
    let one = C64::new(1.0, 0.0);
    let j = match jtype {
        PetrovType::I => CMat3::from_diagonal(&Vector3::new(
            eigenvalues[0],
            eigenvalues[1],
            eigenvalues[2],
        )),
        PetrovType::II => CMat3::new(
            eigenvalues[0],
            zero,
            zero,
            zero,
            eigenvalues[1],
            one,
            zero,
            zero,
            eigenvalues[1],
        ),
        PetrovType::III => CMat3::new(
            eigenvalues[0],
            one,
            zero,
            zero,
            eigenvalues[0],
            one,
            zero,
            zero,
            eigenvalues[0],
        ),
    };
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let q = loop {
        let q = CMat3::from_fn(|_, _| {
            C64::new(rng.random_range(-1.0..1.0), rng.random_range(-1.0..1.0))
        });
        if cond_complex(&q) < 50.0 {
            break q;
        }
    };
    let inv = q.try_inverse().ok_or(Error::EigenFailure)?;
    Ok(OperatorMatrix {
        matrix: realify(&ComplexOperator {
            matrix: q * j * inv,
        }),
        kind: OperatorKind::CurvatureOp,
    })
}

/// Star-L-commuting tensor with a planted frame-adapted eigen-plane: the
/// kernel direction of the antisymmetric block is made an eigenvector of the
/// symmetric block, so the complexified operator has a real eigenvector.
/// Returns the tensor, the planted direction, and its eigenvalue.
pub fn gen_star_l_einstein_with_adapted_eigenplane(
    rng: &mut ChaCha8Rng,
) -> (CurvatureTensor, Vector3<f64>, f64) {
    let b = random_antisymmetric3(rng);
    // ker(B) of an antisymmetric 3x3 is the axis vector (B = cross-product).
    let mut axis = Vector3::new(b[(2, 1)], b[(0, 2)], b[(1, 0)]);
    if axis.norm() < 1e-3 {
        axis = Vector3::new(1.0, 0.0, 0.0);
    }
    let axis = axis / axis.norm();
    // Symmetric block with the axis as an eigenvector.
    let eig = rng.random_range(-1.0..1.0);
    let raw = random_symmetric3(rng);
    let proj = Mat3::identity() - axis * axis.transpose();
    let a = proj * raw * proj + axis * axis.transpose() * eig;
    let a = (a + a.transpose()) * 0.5;
    let t = CurvatureTensor::from_sym6(star_l_blocks(&a, &b), Signature::Riemannian);
    // Complexified operator is -(A + iB); the planted eigenvalue is -eig.
    (t, axis, -eig)
}

/// Assembles a Lorentzian-frame tensor whose adapted operator has the given
/// normal-form data against rotated self-dual/anti-self-dual eigenbases.
pub fn assemble_lorentzian_normal_form(
    lambdas: &[f64; 3],
    mus: &[f64; 3],
    o_plus: &Mat3,
    o_minus: &Mat3,
) -> CurvatureTensor {
    let a: Vector3<f64> = Vector3::from_fn(|i, _| lambdas[i] + mus[i]);
    let b: Vector3<f64> = Vector3::from_fn(|i, _| lambdas[i] - mus[i]);
    let x = o_plus * Matrix3::from_diagonal(&a) * o_plus.transpose();
    let y = o_minus * Matrix3::from_diagonal(&b) * o_minus.transpose();
    let m11 = (x + y) * 0.5;
    let m12 = (x - y) * 0.5;
    let mut op = Mat6::zeros();
    for i in 0..3 {
        for j in 0..3 {
            op[(i, j)] = m11[(i, j)];
            op[(i + 3, j + 3)] = m11[(i, j)];
            op[(i, j + 3)] = m12[(i, j)];
            op[(i + 3, j)] = m12[(j, i)];
        }
    }
    let sym = -op;
    CurvatureTensor::from_sym6((sym + sym.transpose()) * 0.5, Signature::Lorentzian)
}

/// Random orthogonal 3x3 with determinant +1.
pub fn random_rotation3(rng: &mut ChaCha8Rng) -> Mat3 {
    loop {
        let a = Mat3::from_fn(|_, _| crate::linalg::standard_normal(rng));
        let qr = a.qr();
        let mut q = qr.q();
        let r = qr.r();
        if (0..3).any(|k| r[(k, k)].abs() < 1e-6) {
            continue;
        }
        if q.determinant() < 0.0 {
            let col = -q.column(2).into_owned();
            q.set_column(2, &col);
        }
        return q;
    }
}

/// Raw random symmetric data, no Bianchi projection. Useful as a generic
/// negative control and for exercising the Bianchi oracle itself.
pub fn random_symmetric_tensor(rng: &mut ChaCha8Rng, sig: Signature) -> CurvatureTensor {
    let mut entries = [0.0; 21];
    for e in entries.iter_mut() {
        *e = rng.random_range(-1.0..1.0);
    }
    CurvatureTensor::from_upper(&entries, sig)
}

/// Random valid tensor: symmetric draw with the Bianchi trace projected out
/// of the off-diagonal block.
pub fn random_tensor_with(rng: &mut ChaCha8Rng, sig: Signature) -> CurvatureTensor {
    let t = random_symmetric_tensor(rng, sig);
    let mut m = *t.sym6();
    let shift = (m[(0, 3)] + m[(1, 4)] + m[(2, 5)]) / 3.0;
    for i in 0..3 {
        m[(i, i + 3)] -= shift;
        m[(i + 3, i)] -= shift;
    }
    CurvatureTensor::from_sym6(m, sig)
}

pub fn random_tensor(seed: u64, sig: Signature) -> CurvatureTensor {
    random_tensor_with(&mut ChaCha8Rng::seed_from_u64(seed), sig)
}

/// Random Riemannian-frame tensor projected onto the subspace where the
/// split-deformation trace is a multiple of the deformation metric (and
/// Bianchi holds). Exercises the converse of the split trace theorem.
pub fn gen_split_trace_condition(rng: &mut ChaCha8Rng) -> CurvatureTensor {
    // Build the constraint matrix once per call: 10 linear conditions on the
    // 21 upper-triangle coordinates.
    let mut constraints = nalgebra::DMatrix::<f64>::zeros(10, 21);
    for col in 0..21 {
        let mut entries = [0.0; 21];
        entries[col] = 1.0;
        let t = CurvatureTensor::from_upper(&entries, Signature::Riemannian);
        let tr = t.trace_h(Signature::Split).unwrap();
        let h = Signature::Split.frame_signs();
        let mut row = 0;
        for p in 0..4 {
            for q in (p + 1)..4 {
                constraints[(row, col)] = tr.full[(p, q)];
                row += 1;
            }
        }
        // Diagonal proportionality: H_pp/h_pp - H_11/h_11 = 0.
        for p in 1..4 {
            constraints[(row, col)] = tr.full[(p, p)] / h[p] - tr.full[(0, 0)] / h[0];
            row += 1;
        }
        // Bianchi.
        constraints[(row, col)] = t.bianchi_residual_signed();
    }
    let x = nalgebra::DVector::<f64>::from_fn(21, |_, _| rng.random_range(-1.0..1.0));
    // Orthogonal projection onto the kernel of the constraints.
    let svd = constraints.clone().svd(false, true);
    let vt = svd.v_t.unwrap();
    let mut projected = x.clone();
    for r in 0..10 {
        if svd.singular_values[r] > 1e-10 {
            let dir = vt.row(r).transpose();
            let c = dir.dot(&x);
            projected -= dir * c;
        }
    }
    let mut entries = [0.0; 21];
    for k in 0..21 {
        entries[k] = projected[k];
    }
    CurvatureTensor::from_upper(&entries, Signature::Riemannian)
}

impl CurvatureTensor {
    /// Signed Bianchi combination, used when building linear constraints.
    pub fn bianchi_residual_signed(&self) -> f64 {
        self.sym6()[(0, 3)] + self.sym6()[(1, 4)] + self.sym6()[(2, 5)]
    }
}

fn random_symmetric3(rng: &mut ChaCha8Rng) -> Mat3 {
    let mut m = Mat3::zeros();
    for i in 0..3 {
        for j in i..3 {
            let v = rng.random_range(-1.0..1.0);
            m[(i, j)] = v;
            m[(j, i)] = v;
        }
    }
    m
}

fn random_antisymmetric3(rng: &mut ChaCha8Rng) -> Mat3 {
    let mut m = Mat3::zeros();
    for i in 0..3 {
        for j in (i + 1)..3 {
            let v = rng.random_range(-1.0..1.0);
            m[(i, j)] = v;
            m[(j, i)] = -v;
        }
    }
    m
}

/// A named generator reachable from the command line.
pub struct CatalogEntry {
    pub name: &'static str,
    pub params: &'static str,
    pub description: &'static str,
    pub build: fn(&[&str]) -> Result<CurvatureTensor>,
}

fn parse_f64(name: &str, s: &str) -> Result<f64> {
    s.parse::<f64>()
        .map_err(|_| Error::NotApplicable(format!("generator {name}: '{s}' is not a number")))
}

fn parse_seed(name: &str, s: &str) -> Result<u64> {
    s.parse::<u64>()
        .map_err(|_| Error::NotApplicable(format!("generator {name}: '{s}' is not a seed")))
}

fn need(name: &str, params: &[&str], n: usize) -> Result<()> {
    if params.len() != n {
        return Err(Error::NotApplicable(format!(
            "generator {name} takes {n} parameter(s), got {}",
            params.len()
        )));
    }
    Ok(())
}

/// The built-in generator table.
pub fn catalog() -> Vec<CatalogEntry> {
    vec![
        CatalogEntry {
            name: "constant-curvature",
            params: "K",
            description: "space form with sectional curvature K",
            build: |p| {
                need("constant-curvature", p, 1)?;
                Ok(gen_constant_curvature(parse_f64("constant-curvature", p[0])?))
            },
        },
        CatalogEntry {
            name: "product-s2xs2",
            params: "K1 K2",
            description: "product of two round 2-spheres with curvatures K1, K2",
            build: |p| {
                need("product-s2xs2", p, 2)?;
                Ok(gen_product_s2xs2(
                    parse_f64("product-s2xs2", p[0])?,
                    parse_f64("product-s2xs2", p[1])?,
                ))
            },
        },
        CatalogEntry {
            name: "star-l-einstein",
            params: "SEED",
            description: "random operator commuting with the Lorentzian deformation star",
            build: |p| {
                need("star-l-einstein", p, 1)?;
                Ok(gen_star_l_einstein(parse_seed("star-l-einstein", p[0])?))
            },
        },
        CatalogEntry {
            name: "star-h-einstein-split",
            params: "SEED",
            description: "random Riemannian-frame operator commuting with the split deformation star",
            build: |p| {
                need("star-h-einstein-split", p, 1)?;
                Ok(gen_star_h_einstein(
                    parse_seed("star-h-einstein-split", p[0])?,
                    StarHKind::SplitGRiemannian,
                ))
            },
        },
        CatalogEntry {
            name: "star-h-einstein-lorentzian",
            params: "SEED",
            description: "random Lorentzian-frame tensor whose adapted operator commutes with the Riemannian deformation star",
            build: |p| {
                need("star-h-einstein-lorentzian", p, 1)?;
                Ok(gen_star_h_einstein(
                    parse_seed("star-h-einstein-lorentzian", p[0])?,
                    StarHKind::LorentzianG,
                ))
            },
        },
    ]
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::hodge::{hodge_star, star_l_commutator};

    #[test]
    fn generators_produce_valid_tensors() {
        for seed in 0..50 {
            let tensors = [
                gen_star_l_einstein(seed),
                gen_star_h_einstein(seed, StarHKind::SplitGRiemannian),
                gen_star_h_einstein(seed, StarHKind::LorentzianG),
                random_tensor(seed, Signature::Riemannian),
            ];
            for t in &tensors {
                assert_eq!(*t.sym6(), t.sym6().transpose());
                assert!(t.bianchi_residual() < 1e-12, "seed {seed}");
            }
        }
    }

    #[test]
    fn star_l_generator_commutes_exactly() {
        for seed in 0..50 {
            let t = gen_star_l_einstein(seed);
            assert_eq!(star_l_commutator(&t.curvature_operator().matrix), 0.0);
        }
    }

    #[test]
    fn star_h_generators_commute() {
        let star_h = hodge_star(Signature::Split).matrix;
        let crossed = hodge_star(Signature::Riemannian).matrix;
        for seed in 0..50 {
            let t = gen_star_h_einstein(seed, StarHKind::SplitGRiemannian);
            let m = t.curvature_operator().matrix;
            assert!((m * star_h - star_h * m).abs().max() < 1e-15);

            let t = gen_star_h_einstein(seed, StarHKind::LorentzianG);
            let c = t.c_hat_h().unwrap().matrix;
            assert!((c * crossed - crossed * c).abs().max() < 1e-15);
        }
    }

    #[test]
    fn jordan_generator_validates_eigenvalue_count() {
        let out = gen_prescribed_jordan(PetrovType::II, &[C64::new(1.0, 0.0)], 3);
        assert!(matches!(
            out,
            Err(Error::BadEigenvalueCount {
                expected: 2,
                got: 1
            })
        ));
    }

    #[test]
    fn jordan_generator_commutes_exactly() {
        let m = gen_prescribed_jordan(PetrovType::III, &[C64::new(5.0, 0.0)], 9).unwrap();
        assert_eq!(star_l_commutator(&m.matrix), 0.0);
    }

    #[test]
    fn planted_eigenplane_generator() {
        let mut rng = ChaCha8Rng::seed_from_u64(77);
        for _ in 0..20 {
            let (t, axis, eig) = gen_star_l_einstein_with_adapted_eigenplane(&mut rng);
            assert_eq!(star_l_commutator(&t.curvature_operator().matrix), 0.0);
            let c = crate::hodge::complexify(&t.curvature_operator().matrix, 1e-8).unwrap();
            let z = axis.map(|x| C64::new(x, 0.0));
            let img = c.matrix * z;
            let expect = z * C64::new(eig, 0.0);
            assert!((img - expect).norm() < 1e-12);
        }
    }

    #[test]
    fn split_trace_condition_instances() {
        let mut rng = ChaCha8Rng::seed_from_u64(78);
        for _ in 0..20 {
            let t = gen_split_trace_condition(&mut rng);
            assert!(t.trace_h(Signature::Split).unwrap().residual < 1e-12);
            assert!(t.bianchi_residual() < 1e-12);
            let star_h = hodge_star(Signature::Split).matrix;
            let m = t.curvature_operator().matrix;
            assert!((m * star_h - star_h * m).abs().max() < 1e-9);
        }
    }

    #[test]
    fn normal_form_assembly_commutes() {
        let mut rng = ChaCha8Rng::seed_from_u64(79);
        let op = random_rotation3(&mut rng);
        let om = random_rotation3(&mut rng);
        let t = assemble_lorentzian_normal_form(&[3.0, 2.0, 1.0], &[0.5, 0.0, -0.5], &op, &om);
        let crossed = hodge_star(Signature::Riemannian).matrix;
        let c = t.c_hat_h().unwrap().matrix;
        assert!((c * crossed - crossed * c).abs().max() < 1e-13);
        assert!(t.bianchi_residual() < 1e-13);
    }
}
