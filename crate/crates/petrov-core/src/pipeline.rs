//! End-to-end analyses: a parsed curvature file in, a report out.
//!
//! These are the routines the command line wraps; keeping them here lets
//! the verification suite drive the exact same code paths.

use sha2::{Digest, Sha256};

use crate::basis::Signature;
use crate::classify::{
    almost_einstein_check, normal_form_lorentzian, petrov_type, star_einstein_residual,
    w_plus_equals_w_minus, PetrovMode, PetrovReport,
};
use crate::curvature::{sa_decompose, CurvatureTensor};
use crate::error::Error;
use crate::format::CurvatureFile;
use crate::hodge::hodge_star;
use crate::report::{Report, Value};
use crate::sectional::{duality_check, find_critical_planes, Flavor};
use crate::{Result, Tolerances};

/// Which deformation stars to test.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum StarSelection {
    All,
    One(Signature),
}

impl StarSelection {
    pub fn parse(s: &str) -> Option<StarSelection> {
        if s == "all" {
            return Some(StarSelection::All);
        }
        Signature::parse(s).map(StarSelection::One)
    }
}

/// Hex digest of the canonical serialization.
pub fn digest_of(file: &CurvatureFile) -> String {
    let bytes = file.serialize();
    let hash = Sha256::digest(bytes.as_bytes());
    let mut out = String::with_capacity(71);
    out.push_str("sha256:");
    for b in hash {
        out.push_str(&format!("{b:02x}"));
    }
    out
}

/// Stars that make sense for a frame signature.
pub fn applicable_stars(frame: Signature) -> &'static [Signature] {
    match frame {
        Signature::Riemannian => &[
            Signature::Riemannian,
            Signature::Lorentzian,
            Signature::Split,
        ],
        // A Lorentzian base metric is analyzed against its Riemannian
        // deformation; nothing else is defined for it.
        Signature::Lorentzian => &[Signature::Riemannian],
        Signature::Split => &[],
    }
}

fn check_input(
    report: &mut Report,
    file: &CurvatureFile,
    t: &CurvatureTensor,
    tol: &Tolerances,
    strict: bool,
) -> Result<()> {
    report.push_str("input.digest", &digest_of(file));
    report.push_str("input.signature", t.frame_signature().as_str());
    if let Some(slot) = file.t_slot {
        report.push_int("input.t_slot", slot as i64);
        if slot != 1 {
            return Err(Error::NotApplicable(format!(
                "analyses assume the distinguished direction at frame slot 1, file declares {slot}"
            )));
        }
    }
    if let Some(name) = file.metadata_value("name") {
        report.push_str("input.name", name);
    }
    let scale = 1.0 + t.sym6().norm();
    let bianchi = t.bianchi_residual();
    report.push_judged("input.bianchi_residual", bianchi, tol.bianchi * scale);
    let ok = bianchi <= tol.bianchi * scale;
    report.push_bool("input.bianchi_ok", ok);
    if !ok && strict {
        return Err(Error::BianchiViolation {
            residual: bianchi,
            tolerance: tol.bianchi * scale,
        });
    }
    Ok(())
}

fn push_petrov(report: &mut Report, prefix: &str, rep: &PetrovReport) {
    report.push_str(&format!("{prefix}.type"), &rep.petrov_type.to_string());
    report.push_str(
        &format!("{prefix}.mode"),
        match rep.mode {
            PetrovMode::FullOperator => "full_operator",
            PetrovMode::SPart => "s_part",
        },
    );
    report.push(
        &format!("{prefix}.eigenvalues"),
        Value::ComplexList(rep.eigenvalues.iter().map(|(z, _)| *z).collect()),
    );
    report.push(
        &format!("{prefix}.algebraic_multiplicities"),
        Value::IntList(rep.eigenvalues.iter().map(|(_, a)| *a as i64).collect()),
    );
    report.push(
        &format!("{prefix}.geometric_multiplicities"),
        Value::IntList(
            rep.geometric_multiplicities
                .iter()
                .map(|g| *g as i64)
                .collect(),
        ),
    );
    report.push_real(&format!("{prefix}.tolerance_margin"), rep.tolerance_margin);
}

/// Full classification of one instance against the selected stars.
pub fn classify_report(
    file: &CurvatureFile,
    selection: StarSelection,
    tol: &Tolerances,
    strict: bool,
) -> Result<Report> {
    let t = file.to_tensor();
    let mut report = Report::new();
    check_input(&mut report, file, &t, tol, strict)?;

    let applicable = applicable_stars(t.frame_signature());
    let stars: Vec<Signature> = match selection {
        StarSelection::All => applicable.to_vec(),
        StarSelection::One(s) => {
            if applicable.contains(&s) {
                vec![s]
            } else {
                return Err(Error::InvalidDeformation {
                    frame: t.frame_signature(),
                    deformation: s,
                });
            }
        }
    };
    report.push(
        "input.stars_tested",
        Value::StrList(stars.iter().map(|s| s.as_str().to_string()).collect()),
    );

    for &star_kind in &stars {
        match t.frame_signature() {
            Signature::Riemannian => classify_riemannian_star(&mut report, &t, star_kind, tol)?,
            Signature::Lorentzian => classify_lorentzian_frame(&mut report, &t, tol)?,
            Signature::Split => {
                return Err(Error::NotApplicable(
                    "split-signature base metrics are not analyzed; split enters as a deformation"
                        .to_string(),
                ))
            }
        }
    }
    Ok(report)
}

fn classify_riemannian_star(
    report: &mut Report,
    t: &CurvatureTensor,
    star_kind: Signature,
    tol: &Tolerances,
) -> Result<()> {
    let op = t.curvature_operator().matrix;
    let star = hodge_star(star_kind);
    let scale = 1.0 + op.norm();
    let residual = star_einstein_residual(&op, &star);
    let commutes = residual < tol.identity * scale;
    let prefix = format!("star.{}", star_kind.as_str());
    report.push_judged(
        &format!("{prefix}.commutation_residual"),
        residual,
        tol.identity * scale,
    );
    match star_kind {
        Signature::Riemannian => {
            report.push_bool(&format!("{prefix}.einstein"), commutes);
        }
        Signature::Lorentzian => {
            report.push_bool(&format!("{prefix}.star_einstein"), commutes);
            let mode = if commutes {
                PetrovMode::FullOperator
            } else {
                PetrovMode::SPart
            };
            let rep = petrov_type(&op, mode, tol.identity)?;
            push_petrov(report, &format!("{prefix}.petrov"), &rep);

            let ae = almost_einstein_check(t, tol.identity)?;
            report.push_bool(&format!("{prefix}.almost_einstein.matches"), ae.matches);
            report.push_real(&format!("{prefix}.almost_einstein.lambda"), ae.lambda);
            report.push(
                &format!("{prefix}.almost_einstein.psi"),
                Value::RealList(ae.psi.to_vec()),
            );
            report.push_judged(
                &format!("{prefix}.almost_einstein.residual"),
                ae.residual,
                ae.tolerance,
            );

            let (holds, wres) = w_plus_equals_w_minus(t, tol.identity)?;
            report.push_bool(&format!("{prefix}.weyl_halves_equal"), holds);
            report.push_judged(
                &format!("{prefix}.weyl_halves_residual"),
                wres,
                tol.identity * scale,
            );
        }
        Signature::Split => {
            report.push_bool(&format!("{prefix}.star_einstein"), commutes);
            let tr = t.trace_h(Signature::Split)?;
            report.push_real(&format!("{prefix}.trace_h.f"), tr.f);
            report.push_judged(
                &format!("{prefix}.trace_h.residual"),
                tr.residual,
                tol.identity * scale,
            );
            report.push_bool(
                &format!("{prefix}.trace_h.proportional"),
                tr.residual < tol.identity * scale,
            );
        }
    }
    Ok(())
}

fn classify_lorentzian_frame(
    report: &mut Report,
    t: &CurvatureTensor,
    tol: &Tolerances,
) -> Result<()> {
    let op = t.c_hat_h()?.matrix;
    let star = hodge_star(Signature::Riemannian);
    let scale = 1.0 + op.norm();
    let residual = star_einstein_residual(&op, &star);
    let commutes = residual < tol.identity * scale;
    let prefix = "star.riemannian_h";
    report.push_judged(
        &format!("{prefix}.commutation_residual"),
        residual,
        tol.identity * scale,
    );
    report.push_bool(&format!("{prefix}.star_einstein"), commutes);
    let tr = t.trace_h(Signature::Riemannian)?;
    report.push_real(&format!("{prefix}.trace_h.f"), tr.f);
    report.push_judged(
        &format!("{prefix}.trace_h.residual"),
        tr.residual,
        tol.identity * scale,
    );
    report.push_bool(
        &format!("{prefix}.trace_h.proportional"),
        tr.residual < tol.identity * scale,
    );
    if commutes {
        let nf = normal_form_lorentzian(t, tol.identity)?;
        report.push(
            &format!("{prefix}.normal_form.lambdas"),
            Value::RealList(nf.lambdas.to_vec()),
        );
        report.push(
            &format!("{prefix}.normal_form.mus"),
            Value::RealList(nf.mus.to_vec()),
        );
        report.push_judged(
            &format!("{prefix}.normal_form.residual"),
            nf.residual,
            1e-9 * scale,
        );
        for (i, p) in nf.planes.iter().enumerate() {
            report.push(
                &format!("{prefix}.normal_form.plane{i}"),
                Value::RealList(p.0.as_slice().to_vec()),
            );
        }
    }
    Ok(())
}

/// S/A decompositions against every applicable star plus the Weyl blocks.
pub fn decompose_report(file: &CurvatureFile, tol: &Tolerances, strict: bool) -> Result<Report> {
    let t = file.to_tensor();
    let mut report = Report::new();
    check_input(&mut report, file, &t, tol, strict)?;
    match t.frame_signature() {
        Signature::Riemannian => {
            let op = t.curvature_operator();
            for star_kind in [
                Signature::Riemannian,
                Signature::Lorentzian,
                Signature::Split,
            ] {
                let star = hodge_star(star_kind);
                let sign = star.involution_sign();
                let (s, a) = sa_decompose(&op, &star, sign)?;
                let prefix = format!("sa.{}", star_kind.as_str());
                report.push_matrix(&format!("{prefix}.commuting"), 6, 6, |r, c| {
                    s.matrix[(r, c)]
                });
                report.push_matrix(&format!("{prefix}.anticommuting"), 6, 6, |r, c| {
                    a.matrix[(r, c)]
                });
            }
            let w = t.weyl_blocks()?;
            report.push_matrix("weyl.w_plus", 3, 3, |r, c| w.wplus[(r, c)]);
            report.push_matrix("weyl.w_minus", 3, 3, |r, c| w.wminus[(r, c)]);
            report.push_matrix("weyl.k_block", 3, 3, |r, c| w.kblock[(r, c)]);
            report.push_real("weyl.scal", w.scal);
            let ric = t.ricci();
            report.push_matrix("ricci", 4, 4, |r, c| ric.full[(r, c)]);
            let k = t.k_components()?;
            report.push_matrix("components.k", 6, 6, |r, c| k[(r, c)]);
            let s = t.s_components()?;
            report.push_matrix("components.s", 6, 6, |r, c| s[(r, c)]);
        }
        Signature::Lorentzian => {
            let op = t.c_hat_h()?;
            report.push_matrix("c_hat_h", 6, 6, |r, c| op.matrix[(r, c)]);
            let star = hodge_star(Signature::Riemannian);
            let (s, a) = sa_decompose(&op, &star, 1)?;
            report.push_matrix("sa.riemannian_h.commuting", 6, 6, |r, c| s.matrix[(r, c)]);
            report.push_matrix("sa.riemannian_h.anticommuting", 6, 6, |r, c| {
                a.matrix[(r, c)]
            });
            let ric = t.ricci();
            report.push_matrix("ricci", 4, 4, |r, c| ric.full[(r, c)]);
        }
        Signature::Split => {
            return Err(Error::NotApplicable(
                "split-signature base metrics are not analyzed".to_string(),
            ))
        }
    }
    Ok(report)
}

/// Multistart critical-plane search with the records serialized into the
/// report.
pub fn critical_planes_report(
    file: &CurvatureFile,
    flavor: Flavor,
    n_starts: usize,
    seed: u64,
    tol: &Tolerances,
    strict: bool,
) -> Result<Report> {
    let t = file.to_tensor();
    let mut report = Report::new();
    check_input(&mut report, file, &t, tol, strict)?;
    report.push_str("search.flavor", flavor.as_str());
    report.push_int("search.starts", n_starts as i64);
    report.push_int("search.seed", seed as i64);
    let out = find_critical_planes(&t, flavor, n_starts, seed)?;
    report.push_int("search.converged", out.converged as i64);
    report.push_int("search.failed", out.failed as i64);
    report.push_bool("search.warning_no_convergence", out.failed > 0);
    report.push_int("search.records", out.records.len() as i64);
    for (i, r) in out.records.iter().enumerate() {
        let prefix = format!("critical_plane.{i}");
        report.push(
            &format!("{prefix}.plane"),
            Value::RealList(r.plane.0.as_slice().to_vec()),
        );
        report.push_real(&format!("{prefix}.value"), r.value);
        report.push_str(&format!("{prefix}.relation_to_t"), r.relation_to_t.as_str());
        report.push_judged(&format!("{prefix}.residual"), r.residual, 1e-7);
    }
    Ok(report)
}

/// Worst star-duality violation over sampled planes, as a report.
pub fn duality_report(
    file: &CurvatureFile,
    star_kind: Signature,
    n_samples: usize,
    seed: u64,
    tol: &Tolerances,
) -> Result<Report> {
    let t = file.to_tensor();
    let mut report = Report::new();
    check_input(&mut report, file, &t, tol, false)?;
    let violation = duality_check(&t, star_kind, n_samples, seed)?;
    report.push_str("duality.star", star_kind.as_str());
    report.push_int("duality.samples", n_samples as i64);
    report.push_judged("duality.max_violation", violation, tol.identity);
    Ok(report)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::catalog;

    fn file_for(t: &CurvatureTensor, name: &str) -> CurvatureFile {
        CurvatureFile::from_tensor(t, vec![("name".into(), name.into())])
    }

    #[test]
    fn classify_constant_curvature() {
        let f = file_for(&catalog::gen_constant_curvature(1.0), "k1");
        let tol = Tolerances::default();
        let r = classify_report(&f, StarSelection::All, &tol, true).unwrap();
        assert_eq!(r.get_bool("star.riemannian.einstein"), Some(true));
        assert_eq!(r.get_bool("star.lorentzian.star_einstein"), Some(true));
        assert_eq!(r.get_str("star.lorentzian.petrov.type"), Some("I"));
        assert_eq!(r.get_bool("star.split.star_einstein"), Some(true));
        assert_eq!(
            r.get_bool("star.lorentzian.almost_einstein.matches"),
            Some(true)
        );
        assert!(r.get_str("input.digest").unwrap().starts_with("sha256:"));
    }

    #[test]
    fn classify_lorentzian_frame_instance() {
        let t = catalog::gen_star_h_einstein(4, catalog::StarHKind::LorentzianG);
        let f = file_for(&t, "nf");
        let tol = Tolerances::default();
        let r = classify_report(&f, StarSelection::All, &tol, true).unwrap();
        assert_eq!(r.get_bool("star.riemannian_h.star_einstein"), Some(true));
        assert_eq!(
            r.get_bool("star.riemannian_h.trace_h.proportional"),
            Some(true)
        );
        assert!(
            r.get_real("star.riemannian_h.normal_form.residual")
                .unwrap()
                < 1e-9
        );
        // The Lorentzian star is not defined for this frame.
        assert!(matches!(
            classify_report(&f, StarSelection::One(Signature::Lorentzian), &tol, true),
            Err(Error::InvalidDeformation { .. })
        ));
    }

    #[test]
    fn strict_mode_rejects_bianchi_violations() {
        let mut rng = rand_chacha::ChaCha8Rng::seed_from_u64(5);
        use rand::SeedableRng;
        let t = catalog::random_symmetric_tensor(&mut rng, Signature::Riemannian);
        assert!(t.bianchi_residual() > 1e-3);
        let f = file_for(&t, "bad");
        let tol = Tolerances::default();
        assert!(matches!(
            classify_report(&f, StarSelection::All, &tol, true),
            Err(Error::BianchiViolation { .. })
        ));
        // Non-strict mode flags but proceeds.
        let r = classify_report(&f, StarSelection::All, &tol, false).unwrap();
        assert_eq!(r.get_bool("input.bianchi_ok"), Some(false));
    }

    #[test]
    fn decompose_and_critical_reports() {
        let f = file_for(&catalog::gen_star_l_einstein(8), "d");
        let tol = Tolerances::default();
        let r = decompose_report(&f, &tol, true).unwrap();
        assert!(r.get("sa.lorentzian.commuting.row0").is_some());
        assert!(r.get("weyl.w_plus.row2").is_some());

        let f = file_for(&catalog::gen_constant_curvature(1.0), "c");
        let r = critical_planes_report(&f, Flavor::Gsec, 4, 1, &tol, true).unwrap();
        assert_eq!(r.get_bool("search.warning_no_convergence"), Some(false));
        assert!(r.get_real("critical_plane.0.residual").unwrap() < 1e-8);
    }
}
