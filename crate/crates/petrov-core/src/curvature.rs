//! Curvature tensors in an orthonormal frame and everything read off them.
//!
//! The 21 pair-symmetric components live in a symmetric 6x6 matrix indexed
//! by the fixed bivector basis: entry `(a, b)` is `R_{pair(a) pair(b)}`.
//! The curvature operator is the negative of that matrix. Frame index 1 is
//! the distinguished direction `T` wherever a deformation metric needs one.

use nalgebra::Matrix3;

use crate::basis::{
    dual_slot, lambda2_metric, lambda2_pushforward, slot_of, Lambda2Vector, Mat4, Mat6, Signature,
    Vec6,
};
use crate::error::Error;
use crate::hodge::StarOperator;
use crate::Result;

/// Row-major upper-triangle coordinates of the symmetric 6x6 storage, the
/// order used by the file format and the generators.
pub fn upper_indices() -> [(usize, usize); 21] {
    let mut out = [(0usize, 0usize); 21];
    let mut n = 0;
    for i in 0..6 {
        for j in i..6 {
            out[n] = (i, j);
            n += 1;
        }
    }
    out
}

/// What a 6x6 operator on bivectors is.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum OperatorKind {
    CurvatureOp,
    SPart,
    APart,
    CHatH,
}

/// A labeled operator on the bivector space.
#[derive(Debug, Clone, PartialEq)]
pub struct OperatorMatrix {
    pub matrix: Mat6,
    pub kind: OperatorKind,
}

/// Pointwise curvature data of a metric in an orthonormal frame.
#[derive(Debug, Clone, PartialEq)]
pub struct CurvatureTensor {
    sym6: Mat6,
    frame_signature: Signature,
}

impl CurvatureTensor {
    /// Builds from a symmetric component matrix; the strict upper triangle
    /// is mirrored so pair symmetry holds exactly.
    pub fn from_sym6(m: Mat6, frame_signature: Signature) -> CurvatureTensor {
        let mut sym = Mat6::zeros();
        for i in 0..6 {
            for j in i..6 {
                sym[(i, j)] = m[(i, j)];
                sym[(j, i)] = m[(i, j)];
            }
        }
        CurvatureTensor {
            sym6: sym,
            frame_signature,
        }
    }

    /// Builds from the 21 upper-triangle entries in row-major order.
    pub fn from_upper(entries: &[f64; 21], frame_signature: Signature) -> CurvatureTensor {
        let mut m = Mat6::zeros();
        for (n, &(i, j)) in upper_indices().iter().enumerate() {
            m[(i, j)] = entries[n];
            m[(j, i)] = entries[n];
        }
        CurvatureTensor {
            sym6: m,
            frame_signature,
        }
    }

    pub fn sym6(&self) -> &Mat6 {
        &self.sym6
    }

    pub fn frame_signature(&self) -> Signature {
        self.frame_signature
    }

    pub fn upper_entries(&self) -> [f64; 21] {
        let mut out = [0.0; 21];
        for (n, &(i, j)) in upper_indices().iter().enumerate() {
            out[n] = self.sym6[(i, j)];
        }
        out
    }

    /// Component `R_{ijkl}` for 1-based frame indices, via the slot encoding.
    pub fn component(&self, i: usize, j: usize, k: usize, l: usize) -> f64 {
        match (slot_of(i, j), slot_of(k, l)) {
            (Some((a, sa)), Some((b, sb))) => sa * sb * self.sym6[(a, b)],
            _ => 0.0,
        }
    }

    /// First-Bianchi defect. In the fixed slot order the cyclic sum over
    /// distinct indices collapses to the trace of the off-diagonal block:
    /// `R_1234 + R_1342 + R_1423 = M[0][3] + M[1][4] + M[2][5]`.
    pub fn bianchi_residual(&self) -> f64 {
        (self.sym6[(0, 3)] + self.sym6[(1, 4)] + self.sym6[(2, 5)]).abs()
    }

    pub fn bianchi_ok(&self, rel_tol: f64) -> bool {
        self.bianchi_residual() <= rel_tol * (1.0 + self.sym6.norm())
    }

    /// The curvature operator on bivectors (sign convention: minus the
    /// component matrix), self-adjoint for the Riemannian bivector metric.
    pub fn curvature_operator(&self) -> OperatorMatrix {
        OperatorMatrix {
            matrix: -self.sym6,
            kind: OperatorKind::CurvatureOp,
        }
    }

    /// Ricci tensor contracted with the frame signs of the declared metric.
    pub fn ricci(&self) -> RicciForm {
        let eps = self.frame_signature.frame_signs();
        let full = Mat4::from_fn(|i, j| {
            (1..=4)
                .map(|k| eps[k - 1] * self.component(k, i + 1, j + 1, k))
                .sum()
        });
        RicciForm {
            lambda: full[(0, 0)],
            psi: [full[(0, 1)], full[(0, 2)], full[(0, 3)]],
            full,
        }
    }

    /// Scalar curvature: the frame-signed trace of Ricci.
    pub fn scalar_curvature(&self) -> f64 {
        let eps = self.frame_signature.frame_signs();
        let ric = self.ricci().full;
        (0..4).map(|i| eps[i] * ric[(i, i)]).sum()
    }

    /// Self-dual / anti-self-dual blocks of the operator for a Riemannian
    /// frame, with the scalar shift removed from the diagonal blocks.
    pub fn weyl_blocks(&self) -> Result<WeylBlocks> {
        if self.frame_signature != Signature::Riemannian {
            return Err(Error::WrongFrameSignature {
                expected: Signature::Riemannian,
                found: self.frame_signature,
            });
        }
        let op = self.curvature_operator().matrix;
        let u = xi_basis_change();
        let conj = u.transpose() * op * u;
        let scal = self.scalar_curvature();
        let shift = Matrix3::identity() * (scal / 12.0);
        let block = |r: usize, c: usize| Matrix3::from_fn(|i, j| conj[(r + i, c + j)]);
        Ok(WeylBlocks {
            wplus: block(0, 0) - shift,
            wminus: block(3, 3) - shift,
            kblock: block(0, 3),
            scal,
        })
    }

    /// Components `K[a][b] = R[a][b] * eps_L(slot b)`: the operator paired
    /// against the Lorentzian bivector metric. Requires the Riemannian
    /// frame convention with `e1 = T`.
    pub fn k_components(&self) -> Result<Mat6> {
        if self.frame_signature != Signature::Riemannian {
            return Err(Error::WrongFrameSignature {
                expected: Signature::Riemannian,
                found: self.frame_signature,
            });
        }
        let eps = lambda2_metric(Signature::Lorentzian);
        Ok(Mat6::from_fn(|a, b| self.sym6[(a, b)] * eps.sign(b)))
    }

    /// Components of the star-L-commuting part, from the K components:
    /// `S[a][b] = (K[a][b] - eps(a) eps(b) K[a*][b*]) / 2` with plain dual
    /// slots.
    pub fn s_components(&self) -> Result<Mat6> {
        let k = self.k_components()?;
        let eps = lambda2_metric(Signature::Lorentzian);
        Ok(Mat6::from_fn(|a, b| {
            0.5 * (k[(a, b)] - eps.sign(a) * eps.sign(b) * k[(dual_slot(a), dual_slot(b))])
        }))
    }

    /// The operator a Lorentzian-frame tensor pairs against the Riemannian
    /// deformation metric; numerically minus the component matrix, and
    /// symmetric by pair symmetry.
    pub fn c_hat_h(&self) -> Result<OperatorMatrix> {
        if self.frame_signature != Signature::Lorentzian {
            return Err(Error::WrongFrameSignature {
                expected: Signature::Lorentzian,
                found: self.frame_signature,
            });
        }
        Ok(OperatorMatrix {
            matrix: -self.sym6,
            kind: OperatorKind::CHatH,
        })
    }

    /// Trace of the curvature 4-tensor against a deformation metric `h`,
    /// with how far it is from a multiple of `h`.
    pub fn trace_h(&self, deformation: Signature) -> Result<TraceH> {
        let ok = matches!(
            (self.frame_signature, deformation),
            (Signature::Riemannian, Signature::Split)
                | (Signature::Riemannian, Signature::Riemannian)
                | (Signature::Lorentzian, Signature::Riemannian)
        );
        if !ok {
            return Err(Error::InvalidDeformation {
                frame: self.frame_signature,
                deformation,
            });
        }
        let h = deformation.frame_signs();
        let full = Mat4::from_fn(|i, j| {
            (1..=4)
                .map(|k| h[k - 1] * self.component(k, i + 1, j + 1, k))
                .sum()
        });
        let f = full[(0, 0)] / h[0];
        let mut residual: f64 = 0.0;
        for i in 0..4 {
            for j in 0..4 {
                let target = if i == j { f * h[i] } else { 0.0 };
                residual = residual.max((full[(i, j)] - target).abs());
            }
        }
        Ok(TraceH {
            h_diag: h,
            full,
            f,
            residual,
        })
    }

    /// The same curvature expressed in the rotated frame with vectors
    /// `q e_1 .. q e_4` (columns of `q`).
    pub fn rotate_frame(&self, q: &Mat4) -> CurvatureTensor {
        let push = lambda2_pushforward(q);
        let m = push.transpose() * self.sym6 * push;
        CurvatureTensor::from_sym6((m + m.transpose()) * 0.5, self.frame_signature)
    }
}

/// Trace of the curvature tensor against a deformation metric.
#[derive(Debug, Clone, PartialEq)]
pub struct TraceH {
    pub h_diag: [f64; 4],
    pub full: Mat4,
    /// Proportionality factor read off the first diagonal entry.
    pub f: f64,
    /// Max-abs deviation of the trace from `f` times the deformation metric.
    pub residual: f64,
}

/// Ricci tensor with the almost-Einstein reading of its entries.
#[derive(Debug, Clone, PartialEq)]
pub struct RicciForm {
    /// `Ric(T, T)`.
    pub lambda: f64,
    /// The `T`-row off-diagonal entries.
    pub psi: [f64; 3],
    pub full: Mat4,
}

/// Weyl data in the self-dual / anti-self-dual splitting.
#[derive(Debug, Clone, PartialEq)]
pub struct WeylBlocks {
    pub wplus: Matrix3<f64>,
    pub wminus: Matrix3<f64>,
    pub kblock: Matrix3<f64>,
    pub scal: f64,
}

/// Orthogonal change of basis to `(b_i + b_{i+3})/sqrt2, (b_i - b_{i+3})/sqrt2`.
pub fn xi_basis_change() -> Mat6 {
    let s = std::f64::consts::FRAC_1_SQRT_2;
    let mut u = Mat6::zeros();
    for i in 0..3 {
        u[(i, i)] = s;
        u[(i + 3, i)] = s;
        u[(i, i + 3)] = s;
        u[(i + 3, i + 3)] = -s;
    }
    u
}

/// Splits `m` into the parts commuting and anti-commuting with `star`.
///
/// The sign the star squares to decides the formula: involutions average
/// with `star m star`, the Lorentzian complex structure averages against it.
pub fn sa_decompose(
    m: &OperatorMatrix,
    star: &StarOperator,
    involution_sign: i32,
) -> Result<(OperatorMatrix, OperatorMatrix)> {
    let sq = star.matrix * star.matrix;
    let expected = Mat6::identity() * involution_sign as f64;
    if sq != expected {
        let found = if sq == Mat6::identity() {
            1
        } else if sq == -Mat6::identity() {
            -1
        } else {
            0
        };
        return Err(Error::SignMismatch {
            requested: involution_sign,
            found,
        });
    }
    let conj = star.matrix * m.matrix * star.matrix;
    let s = if involution_sign == 1 {
        (m.matrix + conj) * 0.5
    } else {
        (m.matrix - conj) * 0.5
    };
    let a = m.matrix - s;
    Ok((
        OperatorMatrix {
            matrix: s,
            kind: OperatorKind::SPart,
        },
        OperatorMatrix {
            matrix: a,
            kind: OperatorKind::APart,
        },
    ))
}

/// Evaluates `-<op xi, eta>` under the bivector metric of `sig`; the
/// component bilinear form behind the K and S machinery in arbitrary frames.
pub fn component_form(op: &Mat6, sig: Signature, xi: &Lambda2Vector, eta: &Lambda2Vector) -> f64 {
    let g = lambda2_metric(sig);
    let mx = op * xi.0;
    let mut s = 0.0;
    for a in 0..6 {
        s += g.diag[a] * mx[a] * eta.0[a];
    }
    -s
}

/// Frame-sign vector of the Lorentzian bivector metric as a `Vec6`.
pub fn lorentz_diag() -> Vec6 {
    Vec6::from_row_slice(&lambda2_metric(Signature::Lorentzian).diag)
}
