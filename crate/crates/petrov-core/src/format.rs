//! Line-oriented text format for curvature instances.
//!
//! ```text
//! petrov-curvature 1
//! # name: constant-curvature
//! # description: space form, K = 1
//! signature riemannian
//! T 1
//! -1 0 0 0 0 0
//! 0 0 0 0 0
//! 0 0 0 0
//! -1 0 0
//! 0 0
//! 0
//! ```
//!
//! The header pins the format version; `#` lines carry free-form metadata
//! whose keys and order are preserved; the six shrinking rows are the
//! upper triangle of the component matrix in the fixed bivector ordering.
//! Numbers serialize through the shortest representation that parses back
//! to the same bits, so canonical files round-trip byte for byte.

use crate::basis::Signature;
use crate::curvature::CurvatureTensor;
use crate::error::Error;
use crate::Result;

pub const FORMAT_VERSION: u32 = 1;
const HEADER_TAG: &str = "petrov-curvature";

/// Parsed form of a curvature file.
#[derive(Debug, Clone, PartialEq)]
pub struct CurvatureFile {
    pub version: u32,
    pub signature: Signature,
    /// Frame index of the distinguished direction, when declared.
    pub t_slot: Option<u8>,
    /// Upper triangle of the component matrix, row-major.
    pub entries: [f64; 21],
    /// Free-form `key: value` pairs, order preserved, unknown keys kept.
    pub metadata: Vec<(String, String)>,
}

impl CurvatureFile {
    pub fn from_tensor(t: &CurvatureTensor, metadata: Vec<(String, String)>) -> CurvatureFile {
        CurvatureFile {
            version: FORMAT_VERSION,
            signature: t.frame_signature(),
            t_slot: match t.frame_signature() {
                Signature::Riemannian => None,
                _ => Some(1),
            },
            entries: t.upper_entries(),
            metadata,
        }
    }

    pub fn to_tensor(&self) -> CurvatureTensor {
        CurvatureTensor::from_upper(&self.entries, self.signature)
    }

    pub fn metadata_value(&self, key: &str) -> Option<&str> {
        self.metadata
            .iter()
            .find(|(k, _)| k == key)
            .map(|(_, v)| v.as_str())
    }

    /// Canonical text form.
    pub fn serialize(&self) -> String {
        let mut out = String::new();
        out.push_str(&format!("{HEADER_TAG} {}\n", self.version));
        for (k, v) in &self.metadata {
            out.push_str(&format!("# {k}: {v}\n"));
        }
        out.push_str(&format!("signature {}\n", self.signature.as_str()));
        if let Some(t) = self.t_slot {
            out.push_str(&format!("T {t}\n"));
        }
        let mut n = 0;
        for row in 0..6 {
            let width = 6 - row;
            let mut cells = Vec::with_capacity(width);
            for _ in 0..width {
                cells.push(format!("{}", self.entries[n]));
                n += 1;
            }
            out.push_str(&cells.join(" "));
            out.push('\n');
        }
        out
    }

    /// Parses the text form; `path` only labels diagnostics.
    pub fn parse(text: &str, path: &str) -> Result<CurvatureFile> {
        let perr = |line: usize, message: String| Error::Parse {
            path: path.to_string(),
            line,
            message,
        };
        let mut version = None;
        let mut signature = None;
        let mut t_slot = None;
        let mut metadata = Vec::new();
        let mut numbers: Vec<f64> = Vec::with_capacity(21);
        let mut extra = 0usize;

        for (idx, raw) in text.lines().enumerate() {
            let lineno = idx + 1;
            let line = raw.trim();
            if line.is_empty() {
                continue;
            }
            if version.is_none() {
                let rest = line.strip_prefix(HEADER_TAG).ok_or_else(|| {
                    perr(
                        lineno,
                        format!("expected header '{HEADER_TAG} <version>', found '{line}'"),
                    )
                })?;
                let v: u32 = rest
                    .trim()
                    .parse()
                    .map_err(|_| perr(lineno, format!("bad version number '{}'", rest.trim())))?;
                if v != FORMAT_VERSION {
                    return Err(Error::VersionMismatch {
                        path: path.to_string(),
                        expected: FORMAT_VERSION,
                        found: v,
                    });
                }
                version = Some(v);
                continue;
            }
            if let Some(rest) = line.strip_prefix('#') {
                if !numbers.is_empty() {
                    return Err(perr(lineno, "metadata after numeric rows".to_string()));
                }
                let rest = rest.trim();
                match rest.split_once(':') {
                    Some((k, v)) => metadata.push((k.trim().to_string(), v.trim().to_string())),
                    None => {
                        if !rest.is_empty() {
                            metadata.push((rest.to_string(), String::new()));
                        }
                    }
                }
                continue;
            }
            if let Some(rest) = line.strip_prefix("signature") {
                if rest.starts_with(char::is_whitespace) {
                    let tag = rest.trim();
                    signature = Some(Signature::parse(tag).ok_or(Error::UnknownSignature {
                        path: path.to_string(),
                        line: lineno,
                        tag: tag.to_string(),
                    })?);
                    continue;
                }
            }
            if let Some(rest) = line.strip_prefix("T ") {
                let t: u8 = rest
                    .trim()
                    .parse()
                    .map_err(|_| perr(lineno, format!("bad T slot '{}'", rest.trim())))?;
                if !(1..=4).contains(&t) {
                    return Err(perr(lineno, format!("T slot {t} out of range 1..=4")));
                }
                t_slot = Some(t);
                continue;
            }
            // Numeric row.
            if signature.is_none() {
                return Err(perr(
                    lineno,
                    format!("expected 'signature <tag>' before data, found '{line}'"),
                ));
            }
            for tok in line.split_whitespace() {
                let v: f64 = tok
                    .parse()
                    .map_err(|_| perr(lineno, format!("bad number '{tok}'")))?;
                if !v.is_finite() {
                    return Err(perr(lineno, format!("non-finite entry '{tok}'")));
                }
                if numbers.len() < 21 {
                    numbers.push(v);
                } else {
                    extra += 1;
                }
            }
        }

        if version.is_none() {
            return Err(perr(0, "empty file".to_string()));
        }
        let signature = signature.ok_or_else(|| perr(0, "missing 'signature' line".to_string()))?;
        if numbers.len() != 21 || extra > 0 {
            return Err(Error::WrongEntryCount {
                path: path.to_string(),
                found: numbers.len() + extra,
            });
        }
        let mut entries = [0.0; 21];
        entries.copy_from_slice(&numbers);
        Ok(CurvatureFile {
            version: FORMAT_VERSION,
            signature,
            t_slot,
            entries,
            metadata,
        })
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::catalog;
    use proptest::prelude::*;

    #[test]
    fn canonical_roundtrip_is_byte_exact() {
        for seed in 0..20 {
            let t = catalog::gen_star_l_einstein(seed);
            let f = CurvatureFile::from_tensor(
                &t,
                vec![
                    ("name".into(), format!("star-l-{seed}")),
                    ("custom-key".into(), "kept".into()),
                ],
            );
            let text = f.serialize();
            let back = CurvatureFile::parse(&text, "mem").unwrap();
            assert_eq!(back, f);
            assert_eq!(back.serialize(), text);
            assert_eq!(back.to_tensor(), t);
            assert_eq!(back.metadata_value("custom-key"), Some("kept"));
        }
    }

    #[test]
    fn wrong_entry_count() {
        let t = catalog::gen_constant_curvature(1.0);
        let f = CurvatureFile::from_tensor(&t, vec![]);
        let mut text = f.serialize();
        // Drop the final row (one number).
        text = text.trim_end().rsplit_once('\n').unwrap().0.to_string() + "\n";
        assert!(matches!(
            CurvatureFile::parse(&text, "mem"),
            Err(Error::WrongEntryCount { found: 20, .. })
        ));
        let extra = f.serialize() + "42\n";
        assert!(matches!(
            CurvatureFile::parse(&extra, "mem"),
            Err(Error::WrongEntryCount { found: 22, .. })
        ));
    }

    #[test]
    fn unknown_signature_and_version_mismatch() {
        let text = "petrov-curvature 1\nsignature euclidean\n";
        assert!(matches!(
            CurvatureFile::parse(text, "mem"),
            Err(Error::UnknownSignature { line: 2, .. })
        ));
        let text = "petrov-curvature 2\nsignature riemannian\n";
        assert!(matches!(
            CurvatureFile::parse(text, "mem"),
            Err(Error::VersionMismatch { found: 2, .. })
        ));
    }

    #[test]
    fn parse_errors_carry_line_numbers() {
        let text = "petrov-curvature 1\nsignature riemannian\n1 2 x\n";
        match CurvatureFile::parse(text, "mem") {
            Err(Error::Parse { line, .. }) => assert_eq!(line, 3),
            other => panic!("unexpected {other:?}"),
        }
    }

    proptest! {
        #[test]
        fn roundtrip_any_entries(raw in proptest::collection::vec(-1.0e3_f64..1.0e3, 21),
                                 sig in 0usize..3,
                                 name in "[a-z]{0,12}") {
            let mut entries = [0.0; 21];
            entries.copy_from_slice(&raw);
            let signature = [Signature::Riemannian, Signature::Lorentzian, Signature::Split][sig];
            let f = CurvatureFile {
                version: FORMAT_VERSION,
                signature,
                t_slot: if sig == 0 { None } else { Some(1) },
                entries,
                metadata: if name.is_empty() { vec![] } else { vec![("name".into(), name)] },
            };
            let text = f.serialize();
            let back = CurvatureFile::parse(&text, "mem").unwrap();
            prop_assert_eq!(back.clone(), f);
            prop_assert_eq!(back.serialize(), text);
        }
    }
}
