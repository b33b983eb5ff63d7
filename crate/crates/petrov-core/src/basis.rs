//! Fixed conventions for the bivector space of an oriented 4-manifold point.
//!
//! Everything in this crate works in one ordered basis of the 6-dimensional
//! space of 2-vectors,
//!
//! ```text
//! e1^e2,  e1^e3,  e1^e4,  e3^e4,  e4^e2,  e2^e3
//! ```
//!
//! chosen so that slot `a` and slot `a+3` hold complementary index pairs and
//! every matrix in the crate is expressed against it. The orientation is
//! fixed by `dV(e1,e2,e3,e4) = +1`; frames are assumed positively ordered.
//!
//! Three deformation metrics share orthonormal frames with the base metric:
//! Riemannian (all frame vectors spacelike), Lorentzian (`e1` timelike), and
//! split signature (`e1`, `e2` timelike). Each induces a diagonal inner
//! product on bivectors via the usual 2x2 Gram determinant.

use nalgebra::{Matrix4, Matrix6, Vector4, Vector6};
use serde::{Deserialize, Serialize};

use crate::error::Error;
use crate::Result;

/// 6-vector of bivector coefficients in the fixed ordering.
pub type Vec6 = Vector6<f64>;
/// Dense operator on the bivector space.
pub type Mat6 = Matrix6<f64>;
/// Tangent vector at the point, in frame coordinates.
pub type Vec4 = Vector4<f64>;
/// 4x4 matrix in frame coordinates.
pub type Mat4 = Matrix4<f64>;

/// The six index pairs of the basis, in order (1-based frame indices).
pub const BASIS_PAIRS: [(usize, usize); 6] = [(1, 2), (1, 3), (1, 4), (3, 4), (4, 2), (2, 3)];

/// Slot holding the complementary index pair of slot `a` (0-based).
#[inline]
pub fn dual_slot(a: usize) -> usize {
    (a + 3) % 6
}

/// Slot and sign of the ordered frame pair `(i, j)`, 1-based indices.
///
/// Returns `None` when `i == j`. The sign is `-1` when `(j, i)` is the
/// listed pair.
pub fn slot_of(i: usize, j: usize) -> Option<(usize, f64)> {
    for (a, &(p, q)) in BASIS_PAIRS.iter().enumerate() {
        if (i, j) == (p, q) {
            return Some((a, 1.0));
        }
        if (j, i) == (p, q) {
            return Some((a, -1.0));
        }
    }
    None
}

/// Which deformation metric induces the structure at hand.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Signature {
    /// Positive definite; every frame vector spacelike.
    Riemannian,
    /// Frame vector `e1` is the timelike direction.
    Lorentzian,
    /// Frame vectors `e1`, `e2` are the timelike directions.
    Split,
}

impl Signature {
    /// Diagonal of the metric on the frame vectors.
    pub fn frame_signs(self) -> [f64; 4] {
        match self {
            Signature::Riemannian => [1.0, 1.0, 1.0, 1.0],
            Signature::Lorentzian => [-1.0, 1.0, 1.0, 1.0],
            Signature::Split => [-1.0, -1.0, 1.0, 1.0],
        }
    }

    pub fn as_str(self) -> &'static str {
        match self {
            Signature::Riemannian => "riemannian",
            Signature::Lorentzian => "lorentzian",
            Signature::Split => "split",
        }
    }

    pub fn parse(tag: &str) -> Option<Signature> {
        match tag {
            "riemannian" => Some(Signature::Riemannian),
            "lorentzian" => Some(Signature::Lorentzian),
            "split" => Some(Signature::Split),
            _ => None,
        }
    }
}

/// Diagonal of the induced inner product on bivectors.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Lambda2Metric {
    pub diag: [f64; 6],
}

impl Lambda2Metric {
    /// As a diagonal 6x6 matrix.
    pub fn matrix(&self) -> Mat6 {
        Mat6::from_diagonal(&Vec6::from_row_slice(&self.diag))
    }

    pub fn sign(&self, slot: usize) -> f64 {
        self.diag[slot]
    }
}

/// Inner product on bivectors induced by the deformation metric.
///
/// On an orthonormal frame the Gram determinant is diagonal with entries
/// `eps_i * eps_j` per basis pair, giving
/// `(+ + + + + +)` Riemannian, `(- - - + + +)` Lorentzian, and
/// `(+ - - + - -)` split.
pub fn lambda2_metric(sig: Signature) -> Lambda2Metric {
    let eps = sig.frame_signs();
    let mut diag = [0.0; 6];
    for (a, &(i, j)) in BASIS_PAIRS.iter().enumerate() {
        diag[a] = eps[i - 1] * eps[j - 1];
    }
    Lambda2Metric { diag }
}

/// The pairing matrix of `xi ^ eta = wedge(xi, eta) dV`: slot `a` pairs only
/// with its dual slot, with coefficient `+1` under the fixed orientation.
pub fn wedge_matrix() -> Mat6 {
    let mut w = Mat6::zeros();
    for a in 0..6 {
        w[(a, dual_slot(a))] = 1.0;
    }
    w
}

/// A bivector in the fixed basis.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Lambda2Vector(pub Vec6);

impl Lambda2Vector {
    pub fn new(coeffs: [f64; 6]) -> Self {
        Lambda2Vector(Vec6::from_row_slice(&coeffs))
    }

    pub fn zeros() -> Self {
        Lambda2Vector(Vec6::zeros())
    }

    /// Basis bivector for `slot` (0-based).
    pub fn basis(slot: usize) -> Self {
        let mut v = Vec6::zeros();
        v[slot] = 1.0;
        Lambda2Vector(v)
    }

    /// The 2-vector `v ^ w` of two tangent vectors.
    pub fn from_wedge(v: &Vec4, w: &Vec4) -> Self {
        let mut out = Vec6::zeros();
        for (a, &(i, j)) in BASIS_PAIRS.iter().enumerate() {
            out[a] = v[i - 1] * w[j - 1] - v[j - 1] * w[i - 1];
        }
        Lambda2Vector(out)
    }

    /// Coefficient of `xi ^ eta` on the orientation form.
    pub fn wedge_pairing(&self, other: &Lambda2Vector) -> f64 {
        let mut s = 0.0;
        for a in 0..6 {
            s += self.0[a] * other.0[a + 3 - 6 * (a / 3)];
        }
        s
    }

    /// Decomposable bivectors are exactly the wedge-null ones.
    pub fn is_decomposable(&self, tol: f64) -> bool {
        let scale = self.0.norm_squared();
        self.wedge_pairing(self).abs() <= tol * (1.0 + scale)
    }

    /// Inner product under the deformation metric `sig`.
    pub fn ip(&self, other: &Lambda2Vector, sig: Signature) -> f64 {
        let m = lambda2_metric(sig);
        let mut s = 0.0;
        for a in 0..6 {
            s += m.diag[a] * self.0[a] * other.0[a];
        }
        s
    }

    /// Euclidean (Riemannian) norm.
    pub fn g_norm(&self) -> f64 {
        self.0.norm()
    }

    /// Sign of `<P,P>` under `sig`; fails when the plane is degenerate.
    pub fn epsilon_sign(&self, sig: Signature, tol: f64) -> Result<f64> {
        let q = self.ip(self, sig);
        let scale = self.0.norm_squared();
        if q.abs() < tol * (1.0 + scale) {
            return Err(Error::DegeneratePlane {
                norm: q.abs(),
                tolerance: tol * (1.0 + scale),
            });
        }
        Ok(q.signum())
    }

    /// Rescales so that `|<P,P>_sig| = 1`; errors when degenerate.
    pub fn normalize_in(&self, sig: Signature, tol: f64) -> Result<Lambda2Vector> {
        let q = self.ip(self, sig);
        let scale = self.0.norm_squared();
        if q.abs() < tol * (1.0 + scale) {
            return Err(Error::DegeneratePlane {
                norm: q.abs(),
                tolerance: tol * (1.0 + scale),
            });
        }
        Ok(Lambda2Vector(self.0 / q.abs().sqrt()))
    }

    /// Distance between planes, blind to overall sign.
    pub fn plane_distance(&self, other: &Lambda2Vector) -> f64 {
        let d1 = (self.0 - other.0).norm();
        let d2 = (self.0 + other.0).norm();
        d1.min(d2)
    }
}

/// The matrix on bivectors induced by a frame change `q` on tangent vectors.
///
/// Column `b` holds the coordinates of `(q e_i) ^ (q e_j)` for the pair of
/// slot `b`, so curvature data transforms by congruence with this matrix.
pub fn lambda2_pushforward(q: &Mat4) -> Mat6 {
    let mut out = Mat6::zeros();
    for (b, &(i, j)) in BASIS_PAIRS.iter().enumerate() {
        let vi = q.column(i - 1).into_owned();
        let vj = q.column(j - 1).into_owned();
        let w = Lambda2Vector::from_wedge(&vi, &vj);
        out.set_column(b, &w.0);
    }
    out
}

/// Recovers an orthonormal spanning pair of the plane of a decomposable
/// bivector, oriented so their wedge is a positive multiple of the input.
///
/// The plane is the kernel of `u -> u ^ xi`; the two smallest right singular
/// directions of that map give the span.
pub fn plane_span(xi: &Lambda2Vector) -> Result<(Vec4, Vec4)> {
    let scale = xi.0.norm();
    if scale == 0.0 || !xi.is_decomposable(1e-7) {
        return Err(Error::NotAPlane {
            wedge: xi.wedge_pairing(xi).abs(),
            norm_defect: (scale - 1.0).abs(),
        });
    }
    let x = xi.0;
    // u ^ xi in the 3-vector basis e234, e134, e124, e123.
    let l = Mat4::new(
        0.0, x[3], x[4], x[5], //
        x[3], 0.0, -x[2], x[1], //
        -x[4], -x[2], 0.0, x[0], //
        x[5], -x[1], x[0], 0.0,
    );
    let svd = l.svd(false, true);
    let vt = svd.v_t.ok_or(Error::EigenFailure)?;
    // Singular values come out sorted descending; the kernel is the last two rows.
    let v = vt.row(2).transpose();
    let w = vt.row(3).transpose();
    let test = Lambda2Vector::from_wedge(&v, &w);
    let dot = test.0.dot(&x);
    if dot >= 0.0 {
        Ok((v, w))
    } else {
        Ok((w, v))
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use rand::rngs::StdRng;
    use rand::{Rng, SeedableRng};

    fn random_vec4(rng: &mut StdRng) -> Vec4 {
        Vec4::from_fn(|_, _| rng.random_range(-1.0..1.0))
    }

    /// Gram-determinant oracle for the induced inner product, evaluated on
    /// every unordered basis pair straight from the definition.
    fn ip_oracle(sig: Signature, a: usize, b: usize) -> f64 {
        let eps = sig.frame_signs();
        let (i, j) = BASIS_PAIRS[a];
        let (k, l) = BASIS_PAIRS[b];
        let g = |p: usize, q: usize| if p == q { eps[p - 1] } else { 0.0 };
        g(i, k) * g(j, l) - g(i, l) * g(j, k)
    }

    #[test]
    fn metric_diagonals_match_gram_oracle() {
        for sig in [
            Signature::Riemannian,
            Signature::Lorentzian,
            Signature::Split,
        ] {
            let m = lambda2_metric(sig);
            for a in 0..6 {
                for b in 0..6 {
                    let expect = if a == b { m.diag[a] } else { 0.0 };
                    assert_eq!(ip_oracle(sig, a, b), expect, "{sig:?} ({a},{b})");
                }
            }
        }
    }

    #[test]
    fn metric_diagonals_expected_values() {
        assert_eq!(
            lambda2_metric(Signature::Riemannian).diag,
            [1.0, 1.0, 1.0, 1.0, 1.0, 1.0]
        );
        assert_eq!(
            lambda2_metric(Signature::Lorentzian).diag,
            [-1.0, -1.0, -1.0, 1.0, 1.0, 1.0]
        );
        assert_eq!(
            lambda2_metric(Signature::Split).diag,
            [1.0, -1.0, -1.0, 1.0, -1.0, -1.0]
        );
    }

    #[test]
    fn wedge_pairing_basis_values() {
        let b = Lambda2Vector::basis;
        assert_eq!(b(0).wedge_pairing(&b(3)), 1.0); // e1^e2 with e3^e4
        assert_eq!(b(0).wedge_pairing(&b(0)), 0.0);
        assert_eq!(b(3).wedge_pairing(&b(0)), 1.0);
        for a in 0..6 {
            assert_eq!(b(a).wedge_pairing(&b(a)), 0.0);
            for c in 0..6 {
                let expect = if c == dual_slot(a) { 1.0 } else { 0.0 };
                assert_eq!(b(a).wedge_pairing(&b(c)), expect);
            }
        }
        // e1^e2 + e3^e4 is not decomposable.
        let s = Lambda2Vector(b(0).0 + b(3).0);
        assert_eq!(s.wedge_pairing(&s), 2.0);
        assert!(!s.is_decomposable(1e-9));
    }

    #[test]
    fn wedges_of_vectors_are_decomposable() {
        let mut rng = StdRng::seed_from_u64(7);
        for _ in 0..200 {
            let v = random_vec4(&mut rng);
            let w = random_vec4(&mut rng);
            let xi = Lambda2Vector::from_wedge(&v, &w);
            assert!(xi.wedge_pairing(&xi).abs() < 1e-12);
        }
    }

    #[test]
    fn epsilon_sign_examples() {
        let tol = 1e-6;
        let b = Lambda2Vector::basis;
        assert_eq!(b(0).epsilon_sign(Signature::Lorentzian, tol).unwrap(), -1.0);
        assert_eq!(b(5).epsilon_sign(Signature::Lorentzian, tol).unwrap(), 1.0);
        let p = Lambda2Vector((b(0).0 + b(1).0) / 2.0_f64.sqrt());
        assert_eq!(p.epsilon_sign(Signature::Lorentzian, tol).unwrap(), -1.0);
        // e1^e2 + e2^e3 = (e1 - e3)^e2 is decomposable but null.
        let n = Lambda2Vector(b(0).0 + b(5).0);
        assert!(n.is_decomposable(1e-12));
        assert!(matches!(
            n.epsilon_sign(Signature::Lorentzian, tol),
            Err(Error::DegeneratePlane { .. })
        ));
    }

    #[test]
    fn star_l_flips_epsilon_sign() {
        let mut rng = StdRng::seed_from_u64(11);
        let star_l = crate::hodge::hodge_star(Signature::Lorentzian);
        let mut checked = 0;
        while checked < 200 {
            let v = random_vec4(&mut rng);
            let w = random_vec4(&mut rng);
            let xi = Lambda2Vector::from_wedge(&v, &w);
            let Ok(e) = xi.epsilon_sign(Signature::Lorentzian, 1e-3) else {
                continue;
            };
            let dual = Lambda2Vector(star_l.matrix * xi.0);
            let ed = dual.epsilon_sign(Signature::Lorentzian, 1e-3).unwrap();
            assert_eq!(ed, -e);
            checked += 1;
        }
    }

    #[test]
    fn plane_span_recovers_plane() {
        let mut rng = StdRng::seed_from_u64(13);
        for _ in 0..100 {
            let v = random_vec4(&mut rng);
            let w = random_vec4(&mut rng);
            let xi = Lambda2Vector::from_wedge(&v, &w);
            if xi.g_norm() < 1e-3 {
                continue;
            }
            let (a, b) = plane_span(&xi).unwrap();
            let back = Lambda2Vector::from_wedge(&a, &b);
            // Same plane, positively oriented, unit because a,b come back orthonormal.
            let unit = Lambda2Vector(xi.0 / xi.g_norm());
            assert!(
                (back.0 - unit.0).norm() < 1e-9,
                "{:?}",
                (back.0 - unit.0).norm()
            );
        }
    }

    #[test]
    fn pushforward_of_identity_is_identity() {
        let id = Mat4::identity();
        assert_eq!(lambda2_pushforward(&id), Mat6::identity());
    }
}
