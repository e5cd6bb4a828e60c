//! JSON form of a frame:
//! `{n, N, norm: {kind, p?}, synthesis: [[...]], analysis: [[...]], construction?}`
//! with one row per frame element. serde_json writes the shortest decimal
//! that round-trips, so a write/read cycle is lossless.

use serde::{Deserialize, Deserializer, Serialize, Serializer};

use super::{Construction, Frame};
use crate::error::{check_dim, Error, Result};
use crate::norm::LpNorm;

#[derive(Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
struct FrameRepr {
    n: usize,
    #[serde(rename = "N")]
    len: usize,
    norm: LpNorm,
    synthesis: Vec<Vec<f64>>,
    analysis: Vec<Vec<f64>>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    construction: Option<Construction>,
}

impl Serialize for Frame {
    fn serialize<S: Serializer>(&self, s: S) -> std::result::Result<S::Ok, S::Error> {
        FrameRepr {
            n: self.dim(),
            len: self.len(),
            norm: self.ambient,
            synthesis: self.vectors(),
            analysis: self.functionals(),
            construction: self.construction.clone(),
        }
        .serialize(s)
    }
}

impl<'de> Deserialize<'de> for Frame {
    fn deserialize<D: Deserializer<'de>>(d: D) -> std::result::Result<Self, D::Error> {
        let repr = FrameRepr::deserialize(d)?;
        from_repr(repr).map_err(serde::de::Error::custom)
    }
}

fn from_repr(r: FrameRepr) -> Result<Frame> {
    check_dim(r.len, r.synthesis.len())?;
    if let Some(v) = r.synthesis.first() {
        check_dim(r.n, v.len())?;
    }
    let frame = Frame::new(&r.synthesis, &r.analysis, r.norm)?;
    Ok(match r.construction {
        Some(c) => frame.with_construction(c),
        None => frame,
    })
}

impl Frame {
    pub fn to_json(&self) -> Result<String> {
        Ok(serde_json::to_string_pretty(self)?)
    }

    pub fn from_json(s: &str) -> Result<Frame> {
        serde_json::from_str(s).map_err(Error::from)
    }
}
