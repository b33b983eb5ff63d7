//! Sectional-curvature quadratic forms in three flavors, the Grassmannian
//! chart, criticality tests, the multistart critical-plane search, and
//! star-duality sampling.

use nalgebra::Matrix2;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;

use crate::basis::{lambda2_metric, plane_span, Lambda2Vector, Mat4, Mat6, Signature, Vec4, Vec6};
use crate::curvature::{component_form, CurvatureTensor};
use crate::error::Error;
use crate::hodge::hodge_star;
use crate::linalg::{eig_symmetric2, random_lorentz_frame, random_rotation4, standard_normal};
use crate::{batch, Result};

/// Degeneracy threshold for planes (relative to the squared norm).
pub const DEGENERATE_TOL: f64 = 1e-6;

/// Which quadratic form is being studied.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum Flavor {
    /// Sectional curvature of the base metric.
    Gsec,
    /// Deformation-adapted form of the full operator.
    Tsec,
    /// Deformation-adapted form of the commuting part.
    Ssec,
}

impl Flavor {
    pub fn as_str(self) -> &'static str {
        match self {
            Flavor::Gsec => "gsec",
            Flavor::Tsec => "tsec",
            Flavor::Ssec => "ssec",
        }
    }

    pub fn parse(s: &str) -> Option<Flavor> {
        match s {
            "gsec" => Some(Flavor::Gsec),
            "tsec" => Some(Flavor::Tsec),
            "ssec" => Some(Flavor::Ssec),
            _ => None,
        }
    }
}

/// How a plane sits relative to the distinguished frame direction.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum RelationToT {
    ContainsT,
    OrthogonalToT,
    Generic,
}

impl RelationToT {
    pub fn as_str(self) -> &'static str {
        match self {
            RelationToT::ContainsT => "contains_T",
            RelationToT::OrthogonalToT => "orthogonal_to_T",
            RelationToT::Generic => "generic",
        }
    }
}

/// A plane contains `T = e1` exactly when it has no coefficients on the
/// complementary slots, and is orthogonal to `T` in the opposite case.
pub fn relation_to_t(p: &Lambda2Vector) -> RelationToT {
    let head: f64 = (0..3).map(|k| p.0[k] * p.0[k]).sum();
    let tail: f64 = (3..6).map(|k| p.0[k] * p.0[k]).sum();
    let scale = head + tail;
    if tail <= 1e-12 * scale {
        RelationToT::ContainsT
    } else if head <= 1e-12 * scale {
        RelationToT::OrthogonalToT
    } else {
        RelationToT::Generic
    }
}

/// The operator whose quadratic form the flavor evaluates.
pub fn operator_for_flavor(t: &CurvatureTensor, flavor: Flavor) -> Result<Mat6> {
    let op = t.curvature_operator().matrix;
    match (flavor, t.frame_signature()) {
        (Flavor::Gsec, _) => Ok(op),
        (Flavor::Tsec, Signature::Riemannian) => Ok(op),
        (Flavor::Ssec, Signature::Riemannian) => {
            let star = hodge_star(Signature::Lorentzian).matrix;
            Ok((op - star * op * star) * 0.5)
        }
        (_, found) => Err(Error::WrongFrameSignature {
            expected: Signature::Riemannian,
            found,
        }),
    }
}

fn quad_g(op: &Mat6, xi: &Vec6) -> f64 {
    (op * xi).dot(xi)
}

fn quad_l(op: &Mat6, xi: &Vec6) -> f64 {
    let g = lambda2_metric(Signature::Lorentzian);
    let mx = op * xi;
    (0..6).map(|a| g.diag[a] * mx[a] * xi[a]).sum()
}

/// Sectional curvature of a unit decomposable bivector.
pub fn gsec(t: &CurvatureTensor, p: &Lambda2Vector) -> Result<f64> {
    let nsq = p.0.norm_squared();
    if !p.is_decomposable(1e-8) || nsq < 1e-12 {
        return Err(Error::NotAPlane {
            wedge: p.wedge_pairing(p).abs(),
            norm_defect: (nsq - 1.0).abs(),
        });
    }
    let op = t.curvature_operator().matrix;
    Ok(quad_g(&op, &p.0) / nsq)
}

/// Deformation-adapted sectional curvature: the sign of the plane times the
/// Lorentzian pairing of the operator against it.
pub fn tsec(t: &CurvatureTensor, p: &Lambda2Vector) -> Result<f64> {
    adapted_sec(t, p, Flavor::Tsec)
}

/// Same form evaluated on the commuting part of the operator.
pub fn ssec(t: &CurvatureTensor, p: &Lambda2Vector) -> Result<f64> {
    adapted_sec(t, p, Flavor::Ssec)
}

fn adapted_sec(t: &CurvatureTensor, p: &Lambda2Vector, flavor: Flavor) -> Result<f64> {
    if !p.is_decomposable(1e-8) {
        return Err(Error::NotAPlane {
            wedge: p.wedge_pairing(p).abs(),
            norm_defect: 0.0,
        });
    }
    let eps = p.epsilon_sign(Signature::Lorentzian, DEGENERATE_TOL)?;
    let q = p.ip(p, Signature::Lorentzian).abs();
    let op = operator_for_flavor(t, flavor)?;
    Ok(eps * quad_l(&op, &p.0) / q)
}

/// Component of the Grassmannian the chart parametrizes.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum ChartComponent {
    /// Spacelike planes, base `f3 ^ f4`.
    GPlus,
    /// Timelike planes, base `f1 ^ f2`.
    GMinus,
}

/// Local chart on the Grassmannian of nondegenerate planes, built from an
/// orthonormal frame (columns of `frame`) with `f1` the timelike leg.
#[derive(Debug, Clone)]
pub struct GrassmannChart {
    pub frame: Mat4,
    pub component: ChartComponent,
}

impl GrassmannChart {
    pub fn base_plane(&self) -> Lambda2Vector {
        let (a, b) = match self.component {
            ChartComponent::GPlus => (2, 3),
            ChartComponent::GMinus => (0, 1),
        };
        Lambda2Vector::from_wedge(
            &self.frame.column(a).into_owned(),
            &self.frame.column(b).into_owned(),
        )
    }

    /// Unnormalized chart leg wedge at coordinates `x`.
    fn raw(&self, x: [f64; 4]) -> Lambda2Vector {
        let f = |k: usize| self.frame.column(k).into_owned();
        let (u, v) = match self.component {
            ChartComponent::GPlus => (
                f(2) + f(0) * x[2] + f(1) * x[3],
                f(3) + f(0) * x[0] + f(1) * x[1],
            ),
            ChartComponent::GMinus => (
                f(0) + f(2) * x[2] + f(3) * x[3],
                f(1) + f(2) * x[0] + f(3) * x[1],
            ),
        };
        Lambda2Vector::from_wedge(&u, &v)
    }

    /// Chart point normalized against the Lorentzian bivector metric, so
    /// `<phi, phi>` is `+1` on the spacelike component and `-1` on the
    /// timelike one.
    pub fn eval(&self, x: [f64; 4]) -> Result<Lambda2Vector> {
        let xi = self.raw(x);
        let q = xi.ip(&xi, Signature::Lorentzian);
        let radicand = match self.component {
            ChartComponent::GPlus => q,
            ChartComponent::GMinus => -q,
        };
        if radicand <= 1e-12 {
            return Err(Error::ChartDomainExceeded { radicand });
        }
        Ok(Lambda2Vector(xi.0 / radicand.sqrt()))
    }

    /// Chart point normalized in the Euclidean bivector metric, for the
    /// base-metric flavor.
    pub fn eval_euclidean(&self, x: [f64; 4]) -> Result<Lambda2Vector> {
        let xi = self.raw(x);
        let n = xi.g_norm();
        if n <= 1e-12 {
            return Err(Error::ChartDomainExceeded { radicand: n });
        }
        Ok(Lambda2Vector(xi.0 / n))
    }
}

/// Completes a nondegenerate decomposable bivector to an oriented frame
/// orthonormal for `diag(-1,1,1,1)` with the first column timelike and the
/// plane sitting as the chart base of the returned component.
pub fn adapted_lorentz_frame(p: &Lambda2Vector) -> Result<(Mat4, ChartComponent)> {
    let eta = Vec4::new(-1.0, 1.0, 1.0, 1.0);
    let (v, w) = plane_span(p)?;
    let plane = orthonormalize_pair(&eta, &v, &w)?;
    // Orthocomplement of the plane under the Lorentz form.
    let mut rows = Mat4::zeros();
    for c in 0..4 {
        rows[(0, c)] = eta[c] * v[c];
        rows[(1, c)] = eta[c] * w[c];
    }
    let svd = rows.svd(false, true);
    let vt = svd.v_t.ok_or(Error::EigenFailure)?;
    let c1 = vt.row(2).transpose();
    let c2 = vt.row(3).transpose();
    let comp = orthonormalize_pair(&eta, &c1, &c2)?;

    let (mut frame, component) = match (plane.timelike.is_some(), comp.timelike.is_some()) {
        (false, true) => {
            // Spacelike plane: complement carries the timelike leg.
            let t0 = comp.timelike.unwrap();
            let s0 = comp.spacelike[0];
            Ok((
                Mat4::from_columns(&[t0, s0, plane.spacelike[0], plane.spacelike[1]]),
                ChartComponent::GPlus,
            ))
        }
        (true, false) => {
            let t0 = plane.timelike.unwrap();
            let s0 = plane.spacelike[0];
            Ok((
                Mat4::from_columns(&[t0, s0, comp.spacelike[0], comp.spacelike[1]]),
                ChartComponent::GMinus,
            ))
        }
        _ => Err(Error::DegeneratePlane {
            norm: p.ip(p, Signature::Lorentzian).abs(),
            tolerance: DEGENERATE_TOL,
        }),
    }?;

    // Orient the base wedge along the input plane.
    let (a, b) = match component {
        ChartComponent::GPlus => (2, 3),
        ChartComponent::GMinus => (0, 1),
    };
    let base =
        Lambda2Vector::from_wedge(&frame.column(a).into_owned(), &frame.column(b).into_owned());
    if base.0.dot(&p.0) < 0.0 {
        let col = -frame.column(b).into_owned();
        frame.set_column(b, &col);
    }
    if frame.determinant() < 0.0 {
        // Flip a leg outside the base plane.
        let k = match component {
            ChartComponent::GPlus => 1,
            ChartComponent::GMinus => 3,
        };
        let col = -frame.column(k).into_owned();
        frame.set_column(k, &col);
    }
    Ok((frame, component))
}

struct SplitPair {
    timelike: Option<Vec4>,
    spacelike: Vec<Vec4>,
}

/// Diagonalizes the restriction of the Lorentz form to `span(v, w)` and
/// returns unit vectors sorted into timelike/spacelike.
fn orthonormalize_pair(eta: &Vec4, v: &Vec4, w: &Vec4) -> Result<SplitPair> {
    let ip = |a: &Vec4, b: &Vec4| (0..4).map(|k| eta[k] * a[k] * b[k]).sum::<f64>();
    let gram = Matrix2::new(ip(v, v), ip(v, w), ip(v, w), ip(w, w));
    let (vals, vecs) = eig_symmetric2(&gram);
    let mut timelike = None;
    let mut spacelike = Vec::new();
    for k in 0..2 {
        let u = v * vecs[(0, k)] + w * vecs[(1, k)];
        let q = vals[k];
        if q.abs() < DEGENERATE_TOL {
            return Err(Error::DegeneratePlane {
                norm: q.abs(),
                tolerance: DEGENERATE_TOL,
            });
        }
        let unit = u / q.abs().sqrt();
        if q < 0.0 {
            timelike = Some(unit);
        } else {
            spacelike.push(unit);
        }
    }
    Ok(SplitPair {
        timelike,
        spacelike,
    })
}

/// Completes a plane to a Euclidean-orthonormal frame with the plane as
/// `f3 ^ f4`.
pub fn adapted_euclidean_frame(p: &Lambda2Vector) -> Result<Mat4> {
    let (v, w) = plane_span(p)?;
    let mut rows = Mat4::zeros();
    for c in 0..4 {
        rows[(0, c)] = v[c];
        rows[(1, c)] = w[c];
    }
    let svd = rows.svd(false, true);
    let vt = svd.v_t.ok_or(Error::EigenFailure)?;
    let f1 = vt.row(2).transpose();
    let f2 = vt.row(3).transpose();
    let mut frame = Mat4::from_columns(&[f1, f2, v, w]);
    if frame.determinant() < 0.0 {
        let col = -frame.column(1).into_owned();
        frame.set_column(1, &col);
    }
    Ok(frame)
}

/// Criticality verdict with the residual it was judged on.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct CriticalVerdict {
    pub is_critical: bool,
    /// Base-metric flavor: least-squares defect of `op P` against
    /// `span(P, star P)`. Adapted flavors: norm of the four component sign
    /// conditions, which equals the chart gradient norm.
    pub residual: f64,
    pub tolerance: f64,
}

/// Closed-form criticality test at a plane.
pub fn critical_test(
    t: &CurvatureTensor,
    p: &Lambda2Vector,
    flavor: Flavor,
    tol: f64,
) -> Result<CriticalVerdict> {
    let op = operator_for_flavor(t, flavor)?;
    let scale = 1.0 + op.abs().max();
    match flavor {
        Flavor::Gsec => {
            let n = p.g_norm();
            if !p.is_decomposable(1e-8) || n < 1e-9 {
                return Err(Error::NotAPlane {
                    wedge: p.wedge_pairing(p).abs(),
                    norm_defect: (n - 1.0).abs(),
                });
            }
            let unit = p.0 / n;
            let star = hodge_star(Signature::Riemannian).matrix;
            let dual = star * unit;
            let img = op * unit;
            let a = img.dot(&unit);
            let b = img.dot(&dual);
            let residual = (img - unit * a - dual * b).norm();
            Ok(CriticalVerdict {
                is_critical: residual < tol * scale,
                residual,
                tolerance: tol * scale,
            })
        }
        Flavor::Tsec | Flavor::Ssec => {
            let (frame, component) = adapted_lorentz_frame(p)?;
            let grad = adapted_gradient(&op, &frame, component);
            let residual = grad.iter().map(|c| c * c).sum::<f64>().sqrt();
            Ok(CriticalVerdict {
                is_critical: residual < tol * scale,
                residual,
                tolerance: tol * scale,
            })
        }
    }
}

/// The four component sign conditions at the chart base: for each mixed
/// wedge `w` of the frame, `K(P, w) + K(w, P)` with `K` the Lorentzian
/// pairing of the operator. These are exactly the chart partials at 0.
fn adapted_gradient(op: &Mat6, frame: &Mat4, component: ChartComponent) -> [f64; 4] {
    let f = |k: usize| frame.column(k).into_owned();
    let base = match component {
        ChartComponent::GPlus => Lambda2Vector::from_wedge(&f(2), &f(3)),
        ChartComponent::GMinus => Lambda2Vector::from_wedge(&f(0), &f(1)),
    };
    let wedges = match component {
        ChartComponent::GPlus => [
            Lambda2Vector::from_wedge(&f(2), &f(0)),
            Lambda2Vector::from_wedge(&f(2), &f(1)),
            Lambda2Vector::from_wedge(&f(0), &f(3)),
            Lambda2Vector::from_wedge(&f(1), &f(3)),
        ],
        ChartComponent::GMinus => [
            Lambda2Vector::from_wedge(&f(0), &f(2)),
            Lambda2Vector::from_wedge(&f(0), &f(3)),
            Lambda2Vector::from_wedge(&f(2), &f(1)),
            Lambda2Vector::from_wedge(&f(3), &f(1)),
        ],
    };
    let mut out = [0.0; 4];
    for (k, w) in wedges.iter().enumerate() {
        out[k] = component_form(op, Signature::Lorentzian, &base, w)
            + component_form(op, Signature::Lorentzian, w, &base);
    }
    out
}

/// Chart-composed flavor value, the function whose critical points are the
/// critical planes.
pub fn chart_value(
    t: &CurvatureTensor,
    chart: &GrassmannChart,
    flavor: Flavor,
    x: [f64; 4],
) -> Result<f64> {
    let op = operator_for_flavor(t, flavor)?;
    match flavor {
        Flavor::Gsec => {
            let phi = chart.eval_euclidean(x)?;
            Ok(quad_g(&op, &phi.0))
        }
        Flavor::Tsec | Flavor::Ssec => {
            let phi = chart.eval(x)?;
            let eps = match chart.component {
                ChartComponent::GPlus => 1.0,
                ChartComponent::GMinus => -1.0,
            };
            Ok(eps * quad_l(&op, &phi.0))
        }
    }
}

/// Central-difference gradient of the chart-composed flavor at `x = 0`.
pub fn chart_gradient_fd(
    t: &CurvatureTensor,
    chart: &GrassmannChart,
    flavor: Flavor,
    step: f64,
) -> Result<[f64; 4]> {
    let mut grad = [0.0; 4];
    for i in 0..4 {
        let mut xp = [0.0; 4];
        let mut xm = [0.0; 4];
        xp[i] = step;
        xm[i] = -step;
        grad[i] = (chart_value(t, chart, flavor, xp)? - chart_value(t, chart, flavor, xm)?)
            / (2.0 * step);
    }
    Ok(grad)
}

/// One located critical plane.
#[derive(Debug, Clone)]
pub struct CriticalPlaneRecord {
    pub plane: Lambda2Vector,
    pub value: f64,
    pub flavor: Flavor,
    pub relation_to_t: RelationToT,
    /// Chart-gradient norm at the plane.
    pub residual: f64,
}

/// Search outcome; `failed > 0` flags starts that did not converge.
#[derive(Debug, Clone)]
pub struct SearchOutcome {
    pub records: Vec<CriticalPlaneRecord>,
    pub converged: usize,
    pub failed: usize,
}

const DEDUP_DISTANCE: f64 = 1e-4;
const RECORD_RESIDUAL: f64 = 1e-7;

/// Multistart search for critical planes of the flavor's chart-composed
/// function. Each start runs a damped Newton iteration on the chart
/// gradient, re-centering the chart on the current plane every step;
/// converged planes are deduplicated by sign-blind distance.
pub fn find_critical_planes(
    t: &CurvatureTensor,
    flavor: Flavor,
    n_starts: usize,
    seed: u64,
) -> Result<SearchOutcome> {
    let op = operator_for_flavor(t, flavor)?;
    let scale = 1.0 + op.abs().max();
    let starts: Vec<Lambda2Vector> = {
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        (0..n_starts)
            .map(|k| random_start(&mut rng, flavor, k))
            .collect()
    };
    let solved = batch::map(&starts, |p0| refine_plane(t, &op, flavor, p0, scale));

    let mut records: Vec<CriticalPlaneRecord> = Vec::new();
    let mut converged = 0;
    let mut failed = 0;
    for outcome in solved {
        match outcome {
            Some((plane, residual)) => {
                converged += 1;
                if records
                    .iter()
                    .any(|r| r.plane.plane_distance(&plane) < DEDUP_DISTANCE)
                {
                    continue;
                }
                let value = match flavor {
                    Flavor::Gsec => gsec(t, &plane)?,
                    Flavor::Tsec => tsec(t, &plane)?,
                    Flavor::Ssec => ssec(t, &plane)?,
                };
                records.push(CriticalPlaneRecord {
                    plane,
                    value,
                    flavor,
                    relation_to_t: relation_to_t(&plane),
                    residual,
                });
            }
            None => failed += 1,
        }
    }
    Ok(SearchOutcome {
        records,
        converged,
        failed,
    })
}

fn random_start(rng: &mut ChaCha8Rng, flavor: Flavor, k: usize) -> Lambda2Vector {
    match flavor {
        Flavor::Gsec => {
            let q = random_rotation4(rng);
            Lambda2Vector::from_wedge(&q.column(2).into_owned(), &q.column(3).into_owned())
        }
        Flavor::Tsec | Flavor::Ssec => {
            let f = random_lorentz_frame(rng);
            if k % 2 == 0 {
                let xi =
                    Lambda2Vector::from_wedge(&f.column(2).into_owned(), &f.column(3).into_owned());
                xi.normalize_in(Signature::Lorentzian, DEGENERATE_TOL)
                    .unwrap()
            } else {
                let xi =
                    Lambda2Vector::from_wedge(&f.column(0).into_owned(), &f.column(1).into_owned());
                xi.normalize_in(Signature::Lorentzian, DEGENERATE_TOL)
                    .unwrap()
            }
        }
    }
}

fn complete_chart(p: &Lambda2Vector, flavor: Flavor) -> Result<GrassmannChart> {
    match flavor {
        Flavor::Gsec => Ok(GrassmannChart {
            frame: adapted_euclidean_frame(p)?,
            component: ChartComponent::GPlus,
        }),
        Flavor::Tsec | Flavor::Ssec => {
            let (frame, component) = adapted_lorentz_frame(p)?;
            Ok(GrassmannChart { frame, component })
        }
    }
}

fn closed_gradient_norm(op: &Mat6, p: &Lambda2Vector, flavor: Flavor) -> Result<f64> {
    match flavor {
        Flavor::Gsec => {
            let n = p.g_norm();
            let unit = p.0 / n;
            let frame = adapted_euclidean_frame(&Lambda2Vector(unit))?;
            let f = |k: usize| frame.column(k).into_owned();
            // Chart partials of the Rayleigh quotient: twice the component
            // of op P on each mixed wedge.
            let wedges = [
                Lambda2Vector::from_wedge(&f(2), &f(0)),
                Lambda2Vector::from_wedge(&f(2), &f(1)),
                Lambda2Vector::from_wedge(&f(0), &f(3)),
                Lambda2Vector::from_wedge(&f(1), &f(3)),
            ];
            let img = op * unit;
            let sum: f64 = wedges
                .iter()
                .map(|w| {
                    let c = 2.0 * img.dot(&w.0);
                    c * c
                })
                .sum();
            Ok(sum.sqrt())
        }
        Flavor::Tsec | Flavor::Ssec => {
            let (frame, component) = adapted_lorentz_frame(p)?;
            let grad = adapted_gradient(op, &frame, component);
            Ok(grad.iter().map(|c| c * c).sum::<f64>().sqrt())
        }
    }
}

/// Newton refinement of one start; returns the plane and its final
/// chart-gradient norm, or `None` when the start stalls.
fn refine_plane(
    t: &CurvatureTensor,
    op: &Mat6,
    flavor: Flavor,
    p0: &Lambda2Vector,
    scale: f64,
) -> Option<(Lambda2Vector, f64)> {
    let target = 1e-10 * scale;
    let mut plane = *p0;
    let mut merit = closed_gradient_norm(op, &plane, flavor).ok()?;
    for _ in 0..80 {
        if merit < target {
            break;
        }
        let chart = complete_chart(&plane, flavor).ok()?;
        let grad = chart_gradient_fd(t, &chart, flavor, 1e-5).ok()?;
        let hess = chart_hessian_fd(t, &chart, flavor, 1e-4).ok()?;
        let g = Vec4::from_row_slice(&grad);
        let mut reg = 1e-9 * (1.0 + hess.abs().max());
        let mut step = None;
        for _ in 0..8 {
            let h = hess + Mat4::identity() * reg;
            if let Some(d) = h.lu().solve(&-g) {
                step = Some(d);
                break;
            }
            reg *= 100.0;
        }
        let mut d = step?;
        let cap = 0.25;
        if d.norm() > cap {
            d *= cap / d.norm();
        }
        let mut improved = false;
        let mut alpha = 1.0;
        for _ in 0..14 {
            let x = [alpha * d[0], alpha * d[1], alpha * d[2], alpha * d[3]];
            if let Ok(candidate) = chart_plane(&chart, flavor, x) {
                if let Ok(m) = closed_gradient_norm(op, &candidate, flavor) {
                    if m < merit * (1.0 - 1e-4 * alpha) || m < target {
                        plane = candidate;
                        merit = m;
                        improved = true;
                        break;
                    }
                }
            }
            alpha *= 0.5;
        }
        if !improved {
            break;
        }
    }
    if merit < RECORD_RESIDUAL * scale {
        Some((plane, merit))
    } else {
        None
    }
}

fn chart_plane(chart: &GrassmannChart, flavor: Flavor, x: [f64; 4]) -> Result<Lambda2Vector> {
    match flavor {
        Flavor::Gsec => chart.eval_euclidean(x),
        _ => chart.eval(x),
    }
}

fn chart_hessian_fd(
    t: &CurvatureTensor,
    chart: &GrassmannChart,
    flavor: Flavor,
    h: f64,
) -> Result<Mat4> {
    let s0 = chart_value(t, chart, flavor, [0.0; 4])?;
    let at = |x: [f64; 4]| chart_value(t, chart, flavor, x);
    let mut hess = Mat4::zeros();
    for i in 0..4 {
        let mut xp = [0.0; 4];
        let mut xm = [0.0; 4];
        xp[i] = h;
        xm[i] = -h;
        hess[(i, i)] = (at(xp)? - 2.0 * s0 + at(xm)?) / (h * h);
        for j in (i + 1)..4 {
            let mut xpp = [0.0; 4];
            let mut xpm = [0.0; 4];
            let mut xmp = [0.0; 4];
            let mut xmm = [0.0; 4];
            xpp[i] = h;
            xpp[j] = h;
            xpm[i] = h;
            xpm[j] = -h;
            xmp[i] = -h;
            xmp[j] = h;
            xmm[i] = -h;
            xmm[j] = -h;
            let v = (at(xpp)? - at(xpm)? - at(xmp)? + at(xmm)?) / (4.0 * h * h);
            hess[(i, j)] = v;
            hess[(j, i)] = v;
        }
    }
    Ok(hess)
}

/// Samples random planes and reports the worst violation of the flavor
/// pairing of the requested star: the Riemannian and split stars pair the
/// base-metric form with its dual, the Lorentzian star pairs the adapted
/// form.
pub fn duality_check(
    t: &CurvatureTensor,
    star_kind: Signature,
    n_samples: usize,
    seed: u64,
) -> Result<f64> {
    match (t.frame_signature(), star_kind) {
        (Signature::Riemannian, Signature::Riemannian)
        | (Signature::Riemannian, Signature::Split)
        | (Signature::Lorentzian, Signature::Riemannian) => {
            let star = match (t.frame_signature(), star_kind) {
                // For a Lorentzian frame the deformation star of the
                // Riemannian h is the crossed involution.
                (Signature::Lorentzian, _) => hodge_star(Signature::Riemannian).matrix,
                _ => hodge_star(star_kind).matrix,
            };
            let op = t.curvature_operator().matrix;
            let mut rng = ChaCha8Rng::seed_from_u64(seed);
            let mut worst: f64 = 0.0;
            for _ in 0..n_samples {
                let p = random_unit_plane_g(&mut rng);
                let dual = star * p.0;
                let v1 = quad_g(&op, &p.0);
                let v2 = quad_g(&op, &dual);
                worst = worst.max((v1 - v2).abs());
            }
            Ok(worst)
        }
        (Signature::Riemannian, Signature::Lorentzian) => {
            let op = t.curvature_operator().matrix;
            let star = hodge_star(Signature::Lorentzian).matrix;
            let mut rng = ChaCha8Rng::seed_from_u64(seed);
            let mut worst: f64 = 0.0;
            for _ in 0..n_samples {
                let (p, eps) = random_unit_plane_l(&mut rng);
                let dual = Lambda2Vector(star * p.0);
                let v1 = eps * quad_l(&op, &p.0);
                let v2 = -eps * quad_l(&op, &dual.0);
                worst = worst.max((v1 - v2).abs());
            }
            Ok(worst)
        }
        (frame, deformation) => Err(Error::InvalidDeformation { frame, deformation }),
    }
}

/// Random plane with unit Euclidean norm.
pub fn random_unit_plane_g(rng: &mut ChaCha8Rng) -> Lambda2Vector {
    loop {
        let v = Vec4::from_fn(|_, _| standard_normal(rng));
        let w = Vec4::from_fn(|_, _| standard_normal(rng));
        let xi = Lambda2Vector::from_wedge(&v, &w);
        let n = xi.g_norm();
        if n > 1e-3 {
            return Lambda2Vector(xi.0 / n);
        }
    }
}

/// Random nondegenerate plane normalized in the Lorentzian bivector metric,
/// with its sign.
pub fn random_unit_plane_l(rng: &mut ChaCha8Rng) -> (Lambda2Vector, f64) {
    loop {
        let v = Vec4::from_fn(|_, _| standard_normal(rng));
        let w = Vec4::from_fn(|_, _| standard_normal(rng));
        let xi = Lambda2Vector::from_wedge(&v, &w);
        let q = xi.ip(&xi, Signature::Lorentzian);
        if q.abs() > 1e-2 * (1.0 + xi.0.norm_squared()) {
            return (Lambda2Vector(xi.0 / q.abs().sqrt()), q.signum());
        }
    }
}
