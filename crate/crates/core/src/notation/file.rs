//! JSON file format for presentations.

use serde::{Deserialize, Serialize};

use super::braid::parse_braid;
use super::presentation::{
    LongitudeTemplate, NotationError, PaddingSlot, Presentation, PresentationKind,
};
use super::torus::TorusParams;
use super::two_bridge::TwoBridgeFraction;
use crate::group::Word;

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct SlotFile {
    pub position: usize,
    pub gen: usize,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct PresentationFile {
    pub generators: Vec<String>,
    pub relators: Vec<String>,
    pub padding: usize,
    pub kind: String,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub params: Option<serde_json::Value>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub longitude_fixture: Option<String>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub fixture_k: Option<i64>,
    #[serde(default, skip_serializing_if = "Vec::is_empty")]
    pub padding_slots: Vec<SlotFile>,
}

fn param_i64(v: &serde_json::Value, key: &str) -> Result<i64, NotationError> {
    v.get(key)
        .and_then(|x| x.as_i64())
        .ok_or_else(|| NotationError::File(format!("params.{key} missing or not an integer")))
}

impl PresentationFile {
    pub fn from_presentation(pres: &Presentation) -> PresentationFile {
        let n = pres.generator_count();
        let params = match &pres.kind {
            PresentationKind::Torus(t) => Some(serde_json::json!({"p": t.p(), "q": t.q()})),
            PresentationKind::TwoBridge(f) => {
                Some(serde_json::json!({"p": f.numerator(), "q": f.denominator()}))
            }
            PresentationKind::BraidClosure(b) => Some(serde_json::json!({"braid": b.render()})),
            PresentationKind::Custom => None,
        };
        let t = pres.longitude.as_ref();
        PresentationFile {
            generators: pres.generators.clone(),
            relators: pres.relators.iter().map(|r| r.render(n)).collect(),
            padding: pres.padding,
            kind: pres.kind.name().to_string(),
            params,
            longitude_fixture: t.map(|t| t.fixture.render(n)),
            fixture_k: t.map(|t| t.fixture_k),
            padding_slots: t
                .map(|t| t.slots.iter().map(|s| SlotFile { position: s.position, gen: s.gen }).collect())
                .unwrap_or_default(),
        }
    }

    pub fn to_presentation(&self) -> Result<Presentation, NotationError> {
        let n = self.generators.len();
        let relators = self
            .relators
            .iter()
            .map(|r| Word::parse(r, n))
            .collect::<Result<Vec<_>, _>>()?;
        let params = self.params.as_ref();
        let need = || NotationError::File(format!("kind {} requires params", self.kind));
        let kind = match self.kind.as_str() {
            "torus" => {
                let v = params.ok_or_else(need)?;
                PresentationKind::Torus(TorusParams::new(param_i64(v, "p")?, param_i64(v, "q")?)?)
            }
            "two-bridge" => {
                let v = params.ok_or_else(need)?;
                PresentationKind::TwoBridge(TwoBridgeFraction::new(
                    param_i64(v, "p")?,
                    param_i64(v, "q")?,
                )?)
            }
            "braid-closure" => {
                let v = params.ok_or_else(need)?;
                let text = v
                    .get("braid")
                    .and_then(|x| x.as_str())
                    .ok_or_else(|| NotationError::File("params.braid missing".into()))?;
                PresentationKind::BraidClosure(
                    parse_braid(text).map_err(|e| NotationError::File(e.to_string()))?,
                )
            }
            "custom" => PresentationKind::Custom,
            other => return Err(NotationError::File(format!("unknown kind {other:?}"))),
        };
        let longitude = match (&self.longitude_fixture, self.fixture_k) {
            (Some(f), Some(k)) => Some(LongitudeTemplate {
                fixture: Word::parse(f, n)?,
                fixture_k: k,
                slots: self
                    .padding_slots
                    .iter()
                    .map(|s| PaddingSlot { position: s.position, gen: s.gen })
                    .collect(),
            }),
            (Some(f), None) => {
                let fixture = Word::parse(f, n)?;
                Some(LongitudeTemplate { fixture_k: fixture.exponent_sum(), fixture, slots: Vec::new() })
            }
            (None, Some(_)) => {
                return Err(NotationError::File("fixture_k given without longitude_fixture".into()))
            }
            (None, None) => None,
        };
        let pres = Presentation { generators: self.generators.clone(), relators, padding: self.padding, kind, longitude };
        pres.validate()?;
        Ok(pres)
    }
}

impl Presentation {
    pub fn to_json(&self) -> String {
        serde_json::to_string_pretty(&PresentationFile::from_presentation(self)).expect("serializable")
    }

    pub fn from_json(text: &str) -> Result<Presentation, NotationError> {
        let file: PresentationFile =
            serde_json::from_str(text).map_err(|e| NotationError::File(e.to_string()))?;
        file.to_presentation()
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::notation::{braid_closure_presentation, torus_presentation, two_bridge_presentation, BUILTIN_KNOTS};

    #[test]
    fn round_trip_builtins() {
        let mut all: Vec<Presentation> = BUILTIN_KNOTS.iter().map(|k| k.presentation()).collect();
        all.push(torus_presentation(TorusParams::new(7, 5).unwrap()));
        all.push(two_bridge_presentation(TwoBridgeFraction::new(11, 7).unwrap()));
        all.push(braid_closure_presentation(&parse_braid("s1 s2^-1 s1 s2^-1").unwrap()).unwrap());
        for p in all {
            assert_eq!(Presentation::from_json(&p.to_json()).unwrap(), p);
        }
    }

    #[test]
    fn custom_file_without_fixture() {
        let text = r#"{"generators":["a","b"],"relators":["abAB"],"padding":0,"kind":"custom"}"#;
        let p = Presentation::from_json(text).unwrap();
        assert!(p.longitude.is_none());
        assert_eq!(Presentation::from_json(&p.to_json()).unwrap(), p);
    }

    #[test]
    fn unbalanced_relator_rejected() {
        let text = r#"{"generators":["a"],"relators":["aa"],"padding":0,"kind":"custom"}"#;
        assert_eq!(
            Presentation::from_json(text),
            Err(NotationError::UnbalancedRelator { index: 0, esum: 2 })
        );
    }

    #[test]
    fn fixture_k_defaults_to_exponent_sum() {
        let text = r#"{"generators":["a"],"relators":[],"padding":0,"kind":"custom","longitude_fixture":"aA"}"#;
        let p = Presentation::from_json(text).unwrap();
        assert_eq!(p.template().unwrap().fixture_k, 0);
    }
}
