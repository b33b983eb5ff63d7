//! Small dense eigen/singular-value utilities on fixed-size matrices.
//!
//! Everything here is 2x2, 3x3, or 4x4; nalgebra supplies the
//! decompositions and this module adds the conventions the rest of the
//! crate relies on: descending eigenvalue order, deterministic eigenvector
//! signs, eigenvalue clustering, and numerical-rank decisions with reported
//! margins.

use nalgebra::{Complex, Matrix2, Matrix3, Vector2, Vector3};
use rand::Rng;
use rand_chacha::ChaCha8Rng;

use crate::basis::{Mat4, Vec4};
use crate::error::Error;
use crate::Result;

pub type C64 = Complex<f64>;
pub type Mat3 = Matrix3<f64>;
pub type CMat3 = Matrix3<C64>;
pub type CVec3 = Vector3<C64>;

/// Relative tolerance for "is this matrix symmetric" checks.
pub const SYMMETRY_TOL: f64 = 1e-10;
/// Relative eigenvalue clustering tolerance (scaled by `1 + spectral radius`).
pub const CLUSTER_TOL: f64 = 1e-6;
/// Relative numerical-rank tolerance (scaled by the matrix norm).
pub const RANK_TOL: f64 = 1e-8;

/// Eigen-decomposition of a symmetric 3x3 matrix, eigenvalues descending,
/// eigenvector columns orthonormal with the first nonzero entry positive.
pub fn eig_symmetric(m: &Mat3) -> Result<(Vector3<f64>, Mat3)> {
    let scale = 1.0 + m.norm();
    let asym = (m - m.transpose()).norm();
    if asym >= SYMMETRY_TOL * scale {
        return Err(Error::NotSymmetric {
            residual: asym,
            tolerance: SYMMETRY_TOL * scale,
        });
    }
    let sym = (m + m.transpose()) * 0.5;
    let eig = sym.symmetric_eigen();
    let mut order = [0usize, 1, 2];
    order.sort_by(|&a, &b| eig.eigenvalues[b].partial_cmp(&eig.eigenvalues[a]).unwrap());
    let mut values = Vector3::zeros();
    let mut vectors = Mat3::zeros();
    for (slot, &src) in order.iter().enumerate() {
        values[slot] = eig.eigenvalues[src];
        let mut col = eig.eigenvectors.column(src).into_owned();
        fix_sign(&mut col);
        vectors.set_column(slot, &col);
    }
    Ok((values, vectors))
}

/// Eigen-decomposition of a symmetric 2x2, eigenvalues descending.
pub fn eig_symmetric2(m: &Matrix2<f64>) -> (Vector2<f64>, Matrix2<f64>) {
    let sym = (m + m.transpose()) * 0.5;
    let eig = sym.symmetric_eigen();
    let (i, j) = if eig.eigenvalues[0] >= eig.eigenvalues[1] {
        (0, 1)
    } else {
        (1, 0)
    };
    let values = Vector2::new(eig.eigenvalues[i], eig.eigenvalues[j]);
    let mut vectors = Matrix2::zeros();
    vectors.set_column(0, &eig.eigenvectors.column(i).into_owned());
    vectors.set_column(1, &eig.eigenvectors.column(j).into_owned());
    (values, vectors)
}

fn fix_sign(v: &mut Vector3<f64>) {
    for k in 0..3 {
        if v[k].abs() > 1e-12 {
            if v[k] < 0.0 {
                *v = -*v;
            }
            return;
        }
    }
}

/// One eigenvalue cluster of a complex 3x3 operator.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct EigenCluster {
    /// Cluster centroid.
    pub value: C64,
    pub algebraic: usize,
    pub geometric: usize,
}

/// Clustered eigenstructure with the margins the decisions were made at.
#[derive(Debug, Clone)]
pub struct EigenStructure {
    pub clusters: Vec<EigenCluster>,
    /// Smallest ratio by which any threshold decision was clear (>= 1 means
    /// every decision had slack; large is confident).
    pub margin: f64,
    pub cluster_tolerance: f64,
    pub rank_tolerance: f64,
}

impl EigenStructure {
    pub fn total_geometric(&self) -> usize {
        self.clusters.iter().map(|c| c.geometric).sum()
    }
}

/// Clustering tolerance: the relative default with a backward-error floor.
/// A perturbation of size `eps * |M|` splits a defective eigenvalue at the
/// cube-root rate, so anything below the floor is structurally
/// indistinguishable from an exact multiple eigenvalue.
pub fn cluster_tolerance(norm: f64, spectral_radius: f64) -> f64 {
    let base = CLUSTER_TOL * (1.0 + spectral_radius);
    let floor = 25.0 * (f64::EPSILON * (1.0 + norm)).cbrt();
    base.max(floor)
}

/// Eigenvalues with algebraic and geometric multiplicities of a complex 3x3
/// matrix. Eigenvalues are clustered by single linkage, the geometric
/// multiplicity of each cluster is `3 - rank(M - centroid I)` with the rank
/// read off the singular values.
pub fn complex_eigenstructure(m: &CMat3) -> Result<EigenStructure> {
    let norm = m.norm();
    let eigenvalues: Vector3<C64> = match m.eigenvalues() {
        Some(v) => v,
        None => Vector3::from_row_slice(&cubic_eigenvalues(m)),
    };
    let radius = (0..3).map(|k| eigenvalues[k].norm()).fold(0.0, f64::max);
    let tol_c = cluster_tolerance(norm, radius);
    let tol_r = RANK_TOL * (1.0 + norm);

    // Single-linkage clustering of the three values.
    let mut label = [0usize, 1, 2];
    let unite = |a: usize, b: usize, label: &mut [usize; 3]| {
        let (x, y) = (label[a], label[b]);
        if x != y {
            for l in label.iter_mut() {
                if *l == y {
                    *l = x;
                }
            }
        }
    };
    for (a, b) in [(0usize, 1usize), (0, 2), (1, 2)] {
        if (eigenvalues[a] - eigenvalues[b]).norm() <= tol_c {
            unite(a, b, &mut label);
        }
    }

    let mut clusters: Vec<(C64, usize)> = Vec::new();
    let mut cluster_of = [usize::MAX; 3];
    let mut slot = [usize::MAX; 3];
    for k in 0..3 {
        let root = label[k];
        if slot[root] == usize::MAX {
            slot[root] = clusters.len();
            clusters.push((C64::new(0.0, 0.0), 0));
        }
        cluster_of[k] = slot[root];
        let id = slot[root];
        clusters[id].0 += eigenvalues[k];
        clusters[id].1 += 1;
    }

    let mut margin = f64::INFINITY;
    // Separation margin: closest pair of eigenvalues in different clusters.
    for i in 0..3 {
        for j in (i + 1)..3 {
            if cluster_of[i] != cluster_of[j] {
                let sep = (eigenvalues[i] - eigenvalues[j]).norm();
                margin = margin.min(sep / tol_c);
            }
        }
    }
    let centroids: Vec<C64> = clusters
        .iter()
        .map(|(sum, count)| sum / *count as f64)
        .collect();

    let mut out = Vec::new();
    for (id, (_, count)) in clusters.iter().enumerate() {
        let centroid = centroids[id];
        let shifted = m - CMat3::identity() * centroid;
        let svd = shifted.svd(false, false);
        let mut rank = 0usize;
        for k in 0..3 {
            let s = svd.singular_values[k];
            if s > tol_r {
                rank += 1;
                margin = margin.min(s / tol_r);
            } else {
                margin = margin.min(tol_r / s.max(f64::MIN_POSITIVE));
            }
        }
        let geometric = (3 - rank).clamp(1, *count);
        out.push(EigenCluster {
            value: centroid,
            algebraic: *count,
            geometric,
        });
    }
    out.sort_by(|a, b| {
        (b.algebraic, ordered(b.value))
            .partial_cmp(&(a.algebraic, ordered(a.value)))
            .unwrap()
    });
    Ok(EigenStructure {
        clusters: out,
        margin: margin.min(1e12),
        cluster_tolerance: tol_c,
        rank_tolerance: tol_r,
    })
}

fn ordered(z: C64) -> (f64, f64) {
    (z.re, z.im)
}

/// Roots of the characteristic polynomial, Cardano with Newton polish.
/// Fallback path; the QR route above is preferred.
fn cubic_eigenvalues(m: &CMat3) -> [C64; 3] {
    let a = -m.trace();
    let b = minor(m, 0) + minor(m, 1) + minor(m, 2);
    let c = -det3(m);
    let third = C64::new(1.0 / 3.0, 0.0);
    let p = b - a * a * third;
    let q = a * a * a * C64::new(2.0 / 27.0, 0.0) - a * b * third + c;
    let scale = 1.0 + m.norm();
    let mut roots = if p.norm() < 1e-30 * scale && q.norm() < 1e-30 * scale {
        [-a * third; 3]
    } else {
        let disc = (q * q * 0.25 + p * p * p / 27.0).sqrt();
        let u3 = if (-q * 0.5 + disc).norm() >= (-q * 0.5 - disc).norm() {
            -q * 0.5 + disc
        } else {
            -q * 0.5 - disc
        };
        let u = u3.cbrt();
        let v = -p / (u * 3.0);
        let w = C64::new(-0.5, 3.0_f64.sqrt() / 2.0);
        [
            u + v - a * third,
            u * w + v * w.conj() - a * third,
            u * w.conj() + v * w - a * third,
        ]
    };
    // Two polish sweeps on the monic cubic.
    for r in roots.iter_mut() {
        for _ in 0..2 {
            let f = ((*r + a) * *r + b) * *r + c;
            let df = (*r * 3.0 + a * 2.0) * *r + b;
            if df.norm() > 1e-14 * scale {
                *r -= f / df;
            }
        }
    }
    roots
}

fn minor(m: &CMat3, k: usize) -> C64 {
    let (i, j) = match k {
        0 => (1, 2),
        1 => (0, 2),
        _ => (0, 1),
    };
    m[(i, i)] * m[(j, j)] - m[(i, j)] * m[(j, i)]
}

fn det3(m: &CMat3) -> C64 {
    m[(0, 0)] * (m[(1, 1)] * m[(2, 2)] - m[(1, 2)] * m[(2, 1)])
        - m[(0, 1)] * (m[(1, 0)] * m[(2, 2)] - m[(1, 2)] * m[(2, 0)])
        + m[(0, 2)] * (m[(1, 0)] * m[(2, 1)] - m[(1, 1)] * m[(2, 0)])
}

/// 2-norm condition number of a complex 3x3 matrix.
pub fn cond_complex(m: &CMat3) -> f64 {
    let svd = m.svd(false, false);
    let s = svd.singular_values;
    if s[2] <= 0.0 {
        f64::INFINITY
    } else {
        s[0] / s[2]
    }
}

/// Haar-ish random rotation in SO(4) from a seeded stream.
pub fn random_rotation4(rng: &mut ChaCha8Rng) -> Mat4 {
    loop {
        let a = Mat4::from_fn(|_, _| standard_normal(rng));
        let qr = a.qr();
        let mut q = qr.q();
        let r = qr.r();
        if (0..4).any(|k| r[(k, k)].abs() < 1e-6) {
            continue;
        }
        // Make the factorization unique and the determinant +1.
        for k in 0..4 {
            if r[(k, k)] < 0.0 {
                let col = -q.column(k).into_owned();
                q.set_column(k, &col);
            }
        }
        if q.determinant() < 0.0 {
            let col = -q.column(3).into_owned();
            q.set_column(3, &col);
        }
        return q;
    }
}

/// Random oriented frame orthonormal for the Lorentz form `diag(-1,1,1,1)`,
/// first column timelike. Columns are the frame vectors.
pub fn random_lorentz_frame(rng: &mut ChaCha8Rng) -> Mat4 {
    let eta = Mat4::from_diagonal(&Vec4::new(-1.0, 1.0, 1.0, 1.0));
    'outer: loop {
        let mut cols: Vec<Vec4> = Vec::with_capacity(4);
        // Timelike leg first, then Gram-Schmidt the spacelike legs.
        let mut t = Vec4::from_fn(|_, _| standard_normal(rng));
        let q = (t.transpose() * eta * t)[0];
        if q >= -0.1 {
            continue;
        }
        t /= (-q).sqrt();
        cols.push(t);
        while cols.len() < 4 {
            let mut v = Vec4::from_fn(|_, _| standard_normal(rng));
            for u in &cols {
                let uu = (u.transpose() * eta * u)[0];
                let uv = (u.transpose() * eta * v)[0];
                v -= u * (uv / uu);
            }
            let vv = (v.transpose() * eta * v)[0];
            if vv < 1e-6 {
                continue 'outer;
            }
            cols.push(v / vv.sqrt());
        }
        let mut frame = Mat4::from_columns(&cols);
        if frame.determinant() < 0.0 {
            let col = -frame.column(3).into_owned();
            frame.set_column(3, &col);
        }
        return frame;
    }
}

pub fn standard_normal(rng: &mut ChaCha8Rng) -> f64 {
    rng.sample::<f64, _>(rand_distr::StandardNormal)
}

#[cfg(test)]
mod tests {
    use super::*;
    use rand::SeedableRng;

    fn rng(seed: u64) -> ChaCha8Rng {
        ChaCha8Rng::seed_from_u64(seed)
    }

    #[test]
    fn eig_symmetric_identity_and_diag() {
        let (vals, vecs) = eig_symmetric(&Mat3::identity()).unwrap();
        assert_eq!(vals, Vector3::new(1.0, 1.0, 1.0));
        assert!((vecs * vecs.transpose() - Mat3::identity()).norm() < 1e-12);

        let d = Mat3::from_diagonal(&Vector3::new(3.0, 2.0, 1.0));
        let (vals, vecs) = eig_symmetric(&d).unwrap();
        assert_eq!(vals, Vector3::new(3.0, 2.0, 1.0));
        assert_eq!(vecs, Mat3::identity());
    }

    #[test]
    fn eig_symmetric_reconstructs_random_inputs() {
        let mut r = rng(1);
        for _ in 0..1000 {
            let a = Mat3::from_fn(|_, _| r.random_range(-1.0..1.0));
            let m = (a + a.transpose()) * 0.5;
            let (vals, vecs) = eig_symmetric(&m).unwrap();
            let rec = vecs * Mat3::from_diagonal(&vals) * vecs.transpose();
            assert!((rec - m).norm() < 1e-10 * (1.0 + m.norm()));
            assert!((vecs.transpose() * vecs - Mat3::identity()).norm() < 1e-12);
            assert!(vals[0] >= vals[1] && vals[1] >= vals[2]);
        }
    }

    #[test]
    fn eig_symmetric_rejects_asymmetric() {
        let m = Mat3::new(1.0, 2.0, 0.0, 0.0, 1.0, 0.0, 0.0, 0.0, 1.0);
        assert!(matches!(eig_symmetric(&m), Err(Error::NotSymmetric { .. })));
    }

    #[test]
    fn eigenstructure_distinct() {
        let m = CMat3::from_diagonal(&CVec3::new(
            C64::new(1.0, 1.0),
            C64::new(2.0, 0.0),
            C64::new(3.0, 0.0),
        ));
        let es = complex_eigenstructure(&m).unwrap();
        assert_eq!(es.clusters.len(), 3);
        assert!(es
            .clusters
            .iter()
            .all(|c| c.algebraic == 1 && c.geometric == 1));
        assert_eq!(es.total_geometric(), 3);
    }

    #[test]
    fn eigenstructure_exact_jordan_pair() {
        let l = C64::new(2.0, -1.0);
        let l1 = C64::new(-1.0, 0.5);
        let m = CMat3::new(
            l1,
            C64::new(0.0, 0.0),
            C64::new(0.0, 0.0),
            C64::new(0.0, 0.0),
            l,
            C64::new(1.0, 0.0),
            C64::new(0.0, 0.0),
            C64::new(0.0, 0.0),
            l,
        );
        let es = complex_eigenstructure(&m).unwrap();
        assert_eq!(es.total_geometric(), 2);
        let big = es.clusters.iter().find(|c| c.algebraic == 2).unwrap();
        assert!((big.value - l).norm() < 1e-8);
        assert_eq!(big.geometric, 1);
    }

    #[test]
    fn eigenstructure_conjugated_full_jordan_block() {
        let mut r = rng(3);
        for _ in 0..50 {
            let l = C64::new(r.random_range(-2.0..2.0), r.random_range(-2.0..2.0));
            let j = CMat3::new(
                l,
                C64::new(1.0, 0.0),
                C64::new(0.0, 0.0),
                C64::new(0.0, 0.0),
                l,
                C64::new(1.0, 0.0),
                C64::new(0.0, 0.0),
                C64::new(0.0, 0.0),
                l,
            );
            let q = loop {
                let q = CMat3::from_fn(|_, _| {
                    C64::new(r.random_range(-1.0..1.0), r.random_range(-1.0..1.0))
                });
                if cond_complex(&q) < 50.0 {
                    break q;
                }
            };
            let m = q * j * q.try_inverse().unwrap();
            let es = complex_eigenstructure(&m).unwrap();
            assert_eq!(es.clusters.len(), 1, "clusters: {:?}", es.clusters);
            assert_eq!(es.clusters[0].algebraic, 3);
            assert_eq!(es.clusters[0].geometric, 1);
            assert!((es.clusters[0].value - l).norm() < 1e-4);
        }
    }

    #[test]
    fn eigenstructure_reconstructs_trace_and_determinant() {
        let mut r = rng(8);
        for _ in 0..1000 {
            let m = CMat3::from_fn(|_, _| {
                C64::new(r.random_range(-1.0..1.0), r.random_range(-1.0..1.0))
            });
            let es = complex_eigenstructure(&m).unwrap();
            let mut sum = C64::new(0.0, 0.0);
            let mut prod = C64::new(1.0, 0.0);
            for c in &es.clusters {
                for _ in 0..c.algebraic {
                    sum += c.value;
                    prod *= c.value;
                }
            }
            let scale = 1.0 + m.norm();
            assert!((sum - m.trace()).norm() < 1e-10 * scale);
            assert!((prod - det3(&m)).norm() < 1e-10 * scale * scale * scale);
        }
    }

    #[test]
    fn cubic_solver_matches_prescribed_roots() {
        let mut r = rng(4);
        for _ in 0..200 {
            let roots = [
                C64::new(r.random_range(-2.0..2.0), r.random_range(-2.0..2.0)),
                C64::new(r.random_range(-2.0..2.0), r.random_range(-2.0..2.0)),
                C64::new(r.random_range(-2.0..2.0), r.random_range(-2.0..2.0)),
            ];
            // Build an upper-triangular matrix with those eigenvalues.
            let m = CMat3::new(
                roots[0],
                C64::new(0.3, 0.1),
                C64::new(-0.2, 0.4),
                C64::new(0.0, 0.0),
                roots[1],
                C64::new(0.5, -0.3),
                C64::new(0.0, 0.0),
                C64::new(0.0, 0.0),
                roots[2],
            );
            let mut got = cubic_eigenvalues(&m).to_vec();
            for want in roots {
                let (k, _) = got
                    .iter()
                    .enumerate()
                    .min_by(|a, b| {
                        (a.1 - want)
                            .norm()
                            .partial_cmp(&(b.1 - want).norm())
                            .unwrap()
                    })
                    .unwrap();
                assert!((got[k] - want).norm() < 1e-8, "missing root {want}");
                got.remove(k);
            }
        }
    }

    #[test]
    fn random_frames_are_orthonormal() {
        let mut r = rng(5);
        let eta = Mat4::from_diagonal(&Vec4::new(-1.0, 1.0, 1.0, 1.0));
        for _ in 0..50 {
            let q = random_rotation4(&mut r);
            assert!((q.transpose() * q - Mat4::identity()).norm() < 1e-12);
            assert!((q.determinant() - 1.0).abs() < 1e-12);

            let f = random_lorentz_frame(&mut r);
            let gram = f.transpose() * eta * f;
            assert!((gram - eta).norm() < 1e-10);
            assert!(f.determinant() > 0.0);
        }
    }
}
