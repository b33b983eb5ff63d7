//! Hodge star operators of the deformation metrics and the complex
//! structure the Lorentzian one induces on bivectors.
//!
//! In the fixed basis the three stars are exact integer matrices. The
//! Riemannian and split stars are involutions; the Lorentzian star squares
//! to `-1` and therefore turns the 6-dimensional real bivector space into a
//! 3-dimensional complex one via `i xi := star_L xi`. Operators commuting
//! with `star_L` become complex-linear 3x3 maps, which is what the Petrov
//! classification consumes.

use nalgebra::Matrix3;

use crate::basis::{lambda2_metric, wedge_matrix, Mat6, Signature};
use crate::error::Error;
use crate::linalg::{CMat3, Mat3, C64};
use crate::Result;

/// A deformation Hodge star as a matrix on bivectors.
#[derive(Debug, Clone, PartialEq)]
pub struct StarOperator {
    pub matrix: Mat6,
    pub sig: Signature,
}

impl StarOperator {
    /// `+1` for involutions, `-1` for the Lorentzian complex structure.
    pub fn involution_sign(&self) -> i32 {
        match self.sig {
            Signature::Lorentzian => -1,
            _ => 1,
        }
    }
}

/// The star of the deformation metric `sig`, defined by pairing each
/// bivector with its metric complement through the orientation form. In the
/// fixed basis this is the dual-slot swap times the diagonal metric, so the
/// entries are exact integers.
pub fn hodge_star(sig: Signature) -> StarOperator {
    let matrix = wedge_matrix() * lambda2_metric(sig).matrix();
    StarOperator { matrix, sig }
}

/// A complex-linear operator on the complexified bivector space, written in
/// the basis of the three `e1`-wedges.
#[derive(Debug, Clone, PartialEq)]
pub struct ComplexOperator {
    pub matrix: CMat3,
}

/// Commutation defect of `m` with the Lorentzian star, max-abs entry.
pub fn star_l_commutator(m: &Mat6) -> f64 {
    let star = hodge_star(Signature::Lorentzian).matrix;
    (m * star - star * m).abs().max()
}

/// Views a star-L-commuting real operator as a complex 3x3 matrix.
///
/// Commutation forces the block form `[[P, Q], [-Q, P]]`; in the complex
/// basis `{e1^e2, e1^e3, e1^e4}` with `i xi = star_L xi` the coordinates of
/// `u_a b_a + v_a b_{a+3}` are `u - i v`, and the operator acts as `P + i Q`.
/// That convention is the one under which `complexify(star_L) = i I`.
pub fn complexify(m: &Mat6, tol: f64) -> Result<ComplexOperator> {
    let residual = star_l_commutator(m);
    let tolerance = tol * (1.0 + m.norm());
    if residual >= tolerance {
        return Err(Error::NotComplexLinear {
            residual,
            tolerance,
        });
    }
    let p = |i: usize, j: usize| 0.5 * (m[(i, j)] + m[(i + 3, j + 3)]);
    let q = |i: usize, j: usize| 0.5 * (m[(i, j + 3)] - m[(i + 3, j)]);
    let matrix = CMat3::from_fn(|i, j| C64::new(p(i, j), q(i, j)));
    Ok(ComplexOperator { matrix })
}

/// Inverse of [`complexify`]: rebuilds the real 6x6 operator, which commutes
/// with the Lorentzian star exactly.
pub fn realify(c: &ComplexOperator) -> Mat6 {
    let x = Mat3::from_fn(|i, j| c.matrix[(i, j)].re);
    let y = Mat3::from_fn(|i, j| c.matrix[(i, j)].im);
    let mut out = Mat6::zeros();
    for i in 0..3 {
        for j in 0..3 {
            out[(i, j)] = x[(i, j)];
            out[(i, j + 3)] = y[(i, j)];
            out[(i + 3, j)] = -y[(i, j)];
            out[(i + 3, j + 3)] = x[(i, j)];
        }
    }
    out
}

/// Complex scalar as an operator, mostly for tests.
pub fn complex_scalar(z: C64) -> ComplexOperator {
    ComplexOperator {
        matrix: Matrix3::from_diagonal_element(z),
    }
}
