//! JSON documents describing a [`DivergenceSpec`].
//!
//! ```json
//! {"family": "composed", "name": "tv", "outer": "name:square"}
//! {"family": "kl_type", "h": "poly:0,0,1"}
//! {"name": "kl"}
//! ```
//!
//! Function-valued fields use the [`ScalarFunction`] text syntax.

use std::path::Path;

use serde::{Deserialize, Serialize};

use super::spec::{catalog, Delta, DivergenceSpec, Family, FamilyTag, CATALOG_NAMES};
use super::Generator;
use crate::error::{Error, Result};
use crate::family::{kl_type_from_h, HGenerator};
use crate::function::ScalarFunction;

#[derive(Clone, Debug, Default, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct SpecDocument {
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub family: Option<FamilyTag>,
    /// Catalog name: the whole spec, or the base of a composed spec.
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub name: Option<String>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub label: Option<String>,
    /// f of an f-divergence, KL-type measure or decomposable f-term.
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub f: Option<String>,
    /// Generator of a separable Bregman divergence, `G = sum g(p_i)`.
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub g: Option<String>,
    /// Binary Bregman generator, `G(p, 1 - p) = g2(p)`.
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub g2: Option<String>,
    /// `h` of a KL-type divergence built from a nondecreasing `h`.
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub h: Option<String>,
    /// Outer function `k` of a composed divergence.
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub outer: Option<String>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub base: Option<Box<SpecDocument>>,
    /// Scale of a decomposable squared-difference term.
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub scale: Option<f64>,
}

fn func(field: &Option<String>, name: &str) -> Result<ScalarFunction> {
    let text = field
        .as_deref()
        .ok_or_else(|| Error::Parse(format!("missing field `{name}`")))?;
    ScalarFunction::parse(text)
}

fn syntax(f: &ScalarFunction) -> Result<String> {
    f.syntax()
        .ok_or_else(|| Error::Unsupported(format!("{f} has no text form")))
}

impl SpecDocument {
    pub fn into_spec(self) -> Result<DivergenceSpec> {
        let spec = self.build()?;
        Ok(match &self.label {
            Some(label) => DivergenceSpec::unchecked(label.clone(), spec.family().clone(), spec.alphabet()),
            None => spec,
        })
    }

    fn build(&self) -> Result<DivergenceSpec> {
        let Some(family) = self.family else {
            let name = self
                .name
                .as_deref()
                .ok_or_else(|| Error::Parse("document needs `family` or `name`".into()))?;
            return catalog(name);
        };
        let label = || self.label.clone().unwrap_or_else(|| format!("{family:?}"));
        match family {
            FamilyTag::FDivergence | FamilyTag::Bregman if self.name.is_some() && self.base.is_none() => {
                let spec = catalog(self.name.as_deref().expect("checked"))?;
                if spec.family().tag() != family {
                    return Err(Error::Parse(format!("catalog entry `{}` is not {family:?}", spec.label())));
                }
                Ok(spec)
            }
            FamilyTag::FDivergence => DivergenceSpec::f_divergence(label(), func(&self.f, "f")?),
            FamilyTag::Bregman => match (&self.g, &self.g2) {
                (Some(_), None) => DivergenceSpec::bregman(label(), Generator::Separable(func(&self.g, "g")?)),
                (None, Some(_)) => DivergenceSpec::bregman(label(), Generator::Binary(func(&self.g2, "g2")?)),
                _ => Err(Error::Parse("bregman document needs exactly one of `g`, `g2`".into())),
            },
            FamilyTag::KlType => match (&self.f, &self.h) {
                (Some(_), None) => DivergenceSpec::kl_type(label(), func(&self.f, "f")?),
                (None, Some(_)) => {
                    let gen = HGenerator::new(func(&self.h, "h")?, HGenerator::DEFAULT_SAMPLES)?;
                    kl_type_from_h(&gen)
                }
                _ => Err(Error::Parse("kl_type document needs exactly one of `f`, `h`".into())),
            },
            FamilyTag::Decomposable => {
                let delta = match (&self.scale, &self.g, &self.f) {
                    (Some(s), None, None) => Delta::SquaredDifference { scale: *s },
                    (None, Some(_), None) => Delta::BregmanTerm(func(&self.g, "g")?),
                    (None, None, Some(_)) => Delta::FTerm(func(&self.f, "f")?),
                    _ => return Err(Error::Parse("decomposable document needs one of `scale`, `g`, `f`".into())),
                };
                Ok(DivergenceSpec::decomposable(label(), delta))
            }
            FamilyTag::Composed => {
                let base = match (&self.base, &self.name) {
                    (Some(doc), None) => doc.as_ref().clone().into_spec()?,
                    (None, Some(name)) => catalog(name)?,
                    _ => return Err(Error::Parse("composed document needs one of `base`, `name`".into())),
                };
                DivergenceSpec::composed(label(), base, func(&self.outer, "outer")?)
            }
        }
    }

    /// Document for a spec whose functions all have a text form.
    pub fn from_spec(spec: &DivergenceSpec) -> Result<Self> {
        if CATALOG_NAMES.contains(&spec.label()) {
            return Ok(Self { name: Some(spec.label().to_string()), ..Self::default() });
        }
        let mut doc = Self {
            family: Some(spec.family().tag()),
            label: Some(spec.label().to_string()),
            ..Self::default()
        };
        match spec.family() {
            Family::FDivergence { f } => doc.f = Some(syntax(f)?),
            Family::Bregman { generator, .. } => match generator {
                Generator::Separable(g) => doc.g = Some(syntax(g)?),
                Generator::Binary(g2) => doc.g2 = Some(syntax(g2)?),
                Generator::Affine { .. } => return Err(Error::Unsupported("affine generators have no text form".into())),
            },
            Family::KlType { f } => match f {
                ScalarFunction::FFromH(table) => doc.h = Some(syntax(table.h())?),
                other => doc.f = Some(syntax(other)?),
            },
            Family::Decomposable { delta } => match delta {
                Delta::SquaredDifference { scale } => doc.scale = Some(*scale),
                Delta::BregmanTerm(g) => doc.g = Some(syntax(g)?),
                Delta::FTerm(f) => doc.f = Some(syntax(f)?),
            },
            Family::Composed { base, outer } => {
                doc.outer = Some(syntax(outer)?);
                let base_doc = Self::from_spec(base)?;
                match (&base_doc.family, &base_doc.name) {
                    (None, Some(name)) => doc.name = Some(name.clone()),
                    _ => doc.base = Some(Box::new(base_doc)),
                }
            }
        }
        Ok(doc)
    }
}

impl DivergenceSpec {
    /// Catalog name, or path to a JSON [`SpecDocument`].
    pub fn resolve(arg: &str) -> Result<Self> {
        if CATALOG_NAMES.contains(&arg) {
            return catalog(arg);
        }
        let path = Path::new(arg);
        if !path.exists() {
            return Err(Error::UnknownName(arg.to_string()));
        }
        Self::from_json(&std::fs::read_to_string(path)?)
    }

    pub fn from_json(text: &str) -> Result<Self> {
        serde_json::from_str::<SpecDocument>(text)?.into_spec()
    }

    pub fn to_json(&self) -> Result<String> {
        Ok(serde_json::to_string(&SpecDocument::from_spec(self)?)?)
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::simplex::Distribution;
    use approx::assert_abs_diff_eq;

    fn binary(p: f64) -> Distribution<f64> {
        Distribution::binary(p).unwrap()
    }

    #[test]
    fn catalog_by_name() {
        let spec = DivergenceSpec::from_json(r#"{"name": "kl"}"#).unwrap();
        assert_eq!(spec.label(), "kl");
        assert_eq!(spec.to_json().unwrap(), r#"{"name":"kl"}"#);
        let spec = DivergenceSpec::from_json(r#"{"family": "bregman", "name": "brier"}"#).unwrap();
        assert_eq!(spec.label(), "brier");
        assert!(DivergenceSpec::from_json(r#"{"family": "bregman", "name": "kl"}"#).is_err());
    }

    #[test]
    fn composed_document() {
        let spec = DivergenceSpec::from_json(r#"{"family":"composed","name":"tv","outer":"name:square"}"#).unwrap();
        assert_abs_diff_eq!(spec.eval(&binary(0.3), &binary(0.5)).unwrap(), 0.16, epsilon = 1e-15);
        let again = DivergenceSpec::from_json(&spec.to_json().unwrap()).unwrap();
        assert_eq!(again.label(), spec.label());
        assert_abs_diff_eq!(again.eval(&binary(0.3), &binary(0.5)).unwrap(), 0.16, epsilon = 1e-15);
    }

    #[test]
    fn kl_type_from_h_document() {
        let spec = DivergenceSpec::from_json(r#"{"family":"kl_type","h":"name:square"}"#).unwrap();
        let v = spec.eval(&binary(0.3), &binary(0.5)).unwrap();
        assert_abs_diff_eq!(v, 0.02, epsilon = 1e-10);
        let doc: serde_json::Value = serde_json::from_str(&spec.to_json().unwrap()).unwrap();
        assert_eq!(doc["h"], "name:square");
        assert_eq!(doc["family"], "kl_type");
    }

    #[test]
    fn generator_documents() {
        let spec = DivergenceSpec::from_json(r#"{"family":"bregman","g":"name:xlogx","label":"kl_bregman"}"#).unwrap();
        let kl = catalog("kl").unwrap();
        let (p, q) = (binary(0.2), binary(0.6));
        assert_abs_diff_eq!(spec.eval(&p, &q).unwrap(), kl.eval(&p, &q).unwrap(), epsilon = 1e-14);
        let spec = DivergenceSpec::from_json(r#"{"family":"decomposable","scale":2.0}"#).unwrap();
        assert_abs_diff_eq!(spec.eval(&p, &q).unwrap(), 4.0 * 0.16, epsilon = 1e-14);
        assert!(DivergenceSpec::from_json(r#"{"family":"bregman","g":"name:square","g2":"name:brier"}"#).is_err());
        assert!(DivergenceSpec::from_json(r#"{"family":"kl_type"}"#).is_err());
        assert!(DivergenceSpec::from_json(r#"{"bogus": 1}"#).is_err());
    }

    #[test]
    fn resolve_paths_and_names() {
        assert_eq!(DivergenceSpec::resolve("hellinger").unwrap().label(), "hellinger");
        let dir = tempfile::tempdir().unwrap();
        let path = dir.path().join("spec.json");
        std::fs::write(&path, r#"{"family":"f_divergence","f":"name:chi2","label":"mychi"}"#).unwrap();
        let spec = DivergenceSpec::resolve(path.to_str().unwrap()).unwrap();
        assert_eq!(spec.label(), "mychi");
        assert!(matches!(DivergenceSpec::resolve("no-such-thing"), Err(Error::UnknownName(_))));
    }
}
