use std::fmt;

use super::{ExtractError, Nanopub};
use crate::sign::{verify_signature, SignatureStatus};
use crate::trusty::{verify_trusty, TrustyStatus};

#[derive(Debug, Clone, PartialEq, Eq)]
pub enum Classification {
    ValidPlain,
    ValidTrusty,
    /// Signature verifies; implies a valid trusty URI.
    ValidSigned,
    Invalid(Vec<String>),
}

impl Classification {
    pub fn is_valid(&self) -> bool {
        !matches!(self, Classification::Invalid(_))
    }

    /// Classifies one well-formed nanopublication.
    pub fn of(np: &Nanopub) -> Classification {
        let trusty = verify_trusty(np);
        let signature = verify_signature(np);
        let mut reasons = Vec::new();
        if trusty == TrustyStatus::Invalid {
            reasons.push("trusty URI does not match the content".to_string());
        }
        if let SignatureStatus::Invalid(why) = &signature {
            reasons.push(format!("signature is invalid: {why}"));
        }
        if !reasons.is_empty() {
            return Classification::Invalid(reasons);
        }
        match (trusty, signature) {
            (TrustyStatus::Valid, SignatureStatus::Valid) => Classification::ValidSigned,
            (TrustyStatus::Valid, _) => Classification::ValidTrusty,
            _ => Classification::ValidPlain,
        }
    }
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct CheckEntry {
    /// Nanopublication URI, when one could be determined.
    pub uri: Option<String>,
    pub classification: Classification,
}

#[derive(Debug, Clone, Default, PartialEq, Eq)]
pub struct CheckReport {
    pub entries: Vec<CheckEntry>,
}

#[derive(Debug, Clone, Copy, Default, PartialEq, Eq)]
pub struct CheckCounts {
    pub plain: usize,
    pub trusty: usize,
    pub signed: usize,
    pub invalid: usize,
}

impl CheckCounts {
    pub fn total(&self) -> usize {
        self.plain + self.trusty + self.signed + self.invalid
    }
}

impl CheckReport {
    pub fn counts(&self) -> CheckCounts {
        let mut c = CheckCounts::default();
        for e in &self.entries {
            match e.classification {
                Classification::ValidPlain => c.plain += 1,
                Classification::ValidTrusty => c.trusty += 1,
                Classification::ValidSigned => c.signed += 1,
                Classification::Invalid(_) => c.invalid += 1,
            }
        }
        c
    }

    pub fn all_valid(&self) -> bool {
        self.counts().invalid == 0
    }

    pub fn merge(&mut self, other: CheckReport) {
        self.entries.extend(other.entries);
    }

    /// The one-line summary, e.g. `Summary: 3 valid (not trusty);`.
    pub fn summary(&self) -> String {
        self.to_string()
    }
}

impl fmt::Display for CheckReport {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let c = self.counts();
        let clauses = [
            (c.plain, "valid (not trusty)"),
            (c.trusty, "valid (trusty)"),
            (c.signed, "signed"),
            (c.invalid, "invalid"),
        ];
        f.write_str("Summary:")?;
        let empty = c.total() == 0;
        for (n, label) in clauses {
            if n > 0 || empty {
                write!(f, " {n} {label};")?;
            }
        }
        Ok(())
    }
}

/// Classifies every input. Construction failures count as invalid.
pub fn check<I>(inputs: I) -> CheckReport
where
    I: IntoIterator<Item = Result<Nanopub, ExtractError>>,
{
    let entries = inputs
        .into_iter()
        .map(|input| match input {
            Ok(np) => CheckEntry {
                uri: Some(np.uri().to_string()),
                classification: Classification::of(&np),
            },
            Err(e) => CheckEntry {
                uri: match &e {
                    ExtractError::Malformed(m) => m.uri.clone(),
                    _ => None,
                },
                classification: Classification::Invalid(vec![e.to_string()]),
            },
        })
        .collect();
    CheckReport { entries }
}
