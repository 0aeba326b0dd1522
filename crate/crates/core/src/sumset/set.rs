use std::fmt;

use serde::{Deserialize, Serialize};

use super::form::LinearForm;
use crate::arctan::{canonical_key, ArcTanSumKey, ArcTanTerm, Tangent, DEFAULT_MAX_BITS};
use crate::error::{Error, Result};
use crate::rational::Rational;

/// A finite set of reals with exact identity. Rational and arctangent sets
/// are sorted numerically; symbolic sets (only usable in interval mode) are
/// sorted by form.
#[derive(Clone, PartialEq, Eq, Debug)]
pub enum ExactRealSet {
    Rational(Vec<Rational>),
    ArcTan(Vec<ArcTanSumKey>),
    Symbolic(Vec<LinearForm>),
}

#[derive(Clone, Copy, PartialEq, Eq, Debug, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum SetKind {
    Rational,
    ArcTan,
    Symbolic,
}

impl fmt::Display for SetKind {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            SetKind::Rational => "rational",
            SetKind::ArcTan => "arctan",
            SetKind::Symbolic => "symbolic",
        })
    }
}

fn sorted_dedup<T: Ord>(mut v: Vec<T>) -> Vec<T> {
    v.sort();
    v.dedup();
    v
}

impl ExactRealSet {
    pub fn rationals(values: impl IntoIterator<Item = Rational>) -> Self {
        ExactRealSet::Rational(sorted_dedup(values.into_iter().collect()))
    }

    pub fn ints(values: &[i64]) -> Self {
        Self::rationals(values.iter().map(|&v| Rational::from(v)))
    }

    pub fn keys(values: impl IntoIterator<Item = ArcTanSumKey>) -> Self {
        ExactRealSet::ArcTan(sorted_dedup(values.into_iter().collect()))
    }

    pub fn forms(values: impl IntoIterator<Item = LinearForm>) -> Self {
        ExactRealSet::Symbolic(sorted_dedup(values.into_iter().collect()))
    }

    /// `{arctan t}` for each tangent.
    pub fn arctans(values: impl IntoIterator<Item = Tangent>) -> Self {
        Self::keys(values.into_iter().map(ArcTanSumKey::atan))
    }

    pub fn kind(&self) -> SetKind {
        match self {
            ExactRealSet::Rational(_) => SetKind::Rational,
            ExactRealSet::ArcTan(_) => SetKind::ArcTan,
            ExactRealSet::Symbolic(_) => SetKind::Symbolic,
        }
    }

    pub fn len(&self) -> usize {
        match self {
            ExactRealSet::Rational(v) => v.len(),
            ExactRealSet::ArcTan(v) => v.len(),
            ExactRealSet::Symbolic(v) => v.len(),
        }
    }

    pub fn is_empty(&self) -> bool {
        self.len() == 0
    }

    pub fn as_rationals(&self) -> Result<&[Rational]> {
        match self {
            ExactRealSet::Rational(v) => Ok(v),
            other => Err(Error::KindMismatch(format!(
                "expected a rational set, got {}",
                other.kind()
            ))),
        }
    }

    pub fn as_keys(&self) -> Result<&[ArcTanSumKey]> {
        match self {
            ExactRealSet::ArcTan(v) => Ok(v),
            other => Err(Error::KindMismatch(format!(
                "expected an arctan set, got {}",
                other.kind()
            ))),
        }
    }

    /// Every element as a symbolic form (rationals are not representable).
    pub fn to_forms(&self) -> Result<Vec<LinearForm>> {
        match self {
            ExactRealSet::Rational(_) => Err(Error::KindMismatch(
                "rational sets have no symbolic form".into(),
            )),
            ExactRealSet::ArcTan(v) => Ok(v.iter().map(LinearForm::from_key).collect()),
            ExactRealSet::Symbolic(v) => Ok(v.clone()),
        }
    }

    /// Translation by a rational (rational sets) or by a key (arctan sets).
    pub fn translate_rational(&self, c: &Rational) -> Result<Self> {
        Ok(Self::rationals(self.as_rationals()?.iter().map(|v| v + c)))
    }

    pub fn translate_key(&self, c: &ArcTanSumKey) -> Result<Self> {
        Ok(Self::keys(self.as_keys()?.iter().map(|v| v.add(c))))
    }
}

#[derive(Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "lowercase")]
enum SetDocument {
    Rational { values: Vec<Rational> },
    Arctan { terms: Vec<Vec<(i64, Tangent)>> },
    Symbolic { forms: Vec<LinearForm> },
}

/// Terms of a key: `m pi + arctan t = 4m arctan 1 + arctan t`.
pub fn key_terms(k: &ArcTanSumKey) -> Vec<(i64, Tangent)> {
    let mut out = Vec::new();
    if k.wrap != 0 {
        out.push((4 * k.wrap, Tangent::Finite(Rational::one())));
    }
    out.push((1, k.tangent.clone()));
    out
}

impl Serialize for ExactRealSet {
    fn serialize<S: serde::Serializer>(&self, serializer: S) -> std::result::Result<S::Ok, S::Error> {
        let doc = match self {
            ExactRealSet::Rational(v) => SetDocument::Rational { values: v.clone() },
            ExactRealSet::ArcTan(v) => SetDocument::Arctan {
                terms: v.iter().map(key_terms).collect(),
            },
            ExactRealSet::Symbolic(v) => SetDocument::Symbolic { forms: v.clone() },
        };
        doc.serialize(serializer)
    }
}

impl<'de> Deserialize<'de> for ExactRealSet {
    fn deserialize<D: serde::Deserializer<'de>>(deserializer: D) -> std::result::Result<Self, D::Error> {
        match SetDocument::deserialize(deserializer)? {
            SetDocument::Rational { values } => Ok(ExactRealSet::rationals(values)),
            SetDocument::Arctan { terms } => {
                let mut keys = Vec::with_capacity(terms.len());
                for element in terms {
                    let terms: Vec<ArcTanTerm> = element
                        .into_iter()
                        .map(|(c, t)| ArcTanTerm::new(c, t))
                        .collect();
                    keys.push(
                        canonical_key(&terms, DEFAULT_MAX_BITS).map_err(serde::de::Error::custom)?,
                    );
                }
                Ok(ExactRealSet::keys(keys))
            }
            SetDocument::Symbolic { forms } => Ok(ExactRealSet::forms(forms)),
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn rational_document_round_trip() {
        let s: ExactRealSet =
            serde_json::from_str(r#"{"kind":"rational","values":["3","1/2","0.5","-2"]}"#).unwrap();
        assert_eq!(s, ExactRealSet::rationals([Rational::from(-2), Rational::frac(1, 2), Rational::from(3)]));
        let json = serde_json::to_string(&s).unwrap();
        assert_eq!(json, r#"{"kind":"rational","values":["-2","1/2","3"]}"#);
    }

    #[test]
    fn arctan_document_uses_canonical_keys() {
        let s: ExactRealSet = serde_json::from_str(
            r#"{"kind":"arctan","terms":[[[1,"1"],[1,"2"],[1,"3"]],[[1,"1/2"],[1,"1/3"]],[[1,"1"]]]}"#,
        )
        .unwrap();
        assert_eq!(s.len(), 2);
        let json = serde_json::to_string(&s).unwrap();
        assert_eq!(json, r#"{"kind":"arctan","terms":[[[1,"1"]],[[4,"1"],[1,"0"]]]}"#);
        let back: ExactRealSet = serde_json::from_str(&json).unwrap();
        assert_eq!(back, s);
    }

    #[test]
    fn kind_mismatch_is_reported() {
        let s = ExactRealSet::ints(&[1, 2]);
        assert!(matches!(s.as_keys(), Err(Error::KindMismatch(_))));
    }
}
