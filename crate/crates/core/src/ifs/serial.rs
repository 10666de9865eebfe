//! JSON form of an IFSp:
//!
//! ```json
//! {"label": "...", "n": 2, "probs": [0.5, 0.5],
//!  "maps": [{"variant": "theorem", "params": {"dist": "exp:1", "n": 2, "i": 1}}, ...]}
//! ```
//!
//! Theorem maps store their distribution as a specifier string. Floats are
//! written in shortest round-trip form, so parameters survive a round trip
//! bit for bit.

use std::collections::HashMap;
use std::sync::Arc;

use serde::{Deserialize, Serialize};

use super::{Ifsp, MonotoneMap};
use crate::distributions::ContinuousDistribution;
use crate::error::{Error, Result};

#[derive(Debug, Serialize, Deserialize)]
struct IfspDoc {
    label: String,
    n: usize,
    probs: Vec<f64>,
    maps: Vec<MapDoc>,
}

#[derive(Debug, Serialize, Deserialize)]
#[serde(tag = "variant", content = "params", rename_all = "snake_case")]
enum MapDoc {
    Theorem { dist: String, n: usize, i: usize },
    Affine { a: f64, b: f64 },
    TriangularClosedForm { branch: u8 },
    Composed { outer: Box<MapDoc>, inner: Box<MapDoc> },
}

impl From<&MonotoneMap> for MapDoc {
    fn from(map: &MonotoneMap) -> Self {
        match map {
            MonotoneMap::Theorem { dist, n, i, .. } => MapDoc::Theorem {
                dist: dist.spec().to_string(),
                n: *n,
                i: *i,
            },
            MonotoneMap::Affine { a, b } => MapDoc::Affine { a: *a, b: *b },
            MonotoneMap::TriangularClosedForm { branch } => {
                MapDoc::TriangularClosedForm { branch: *branch }
            }
            MonotoneMap::Composed { outer, inner } => MapDoc::Composed {
                outer: Box::new(outer.as_ref().into()),
                inner: Box::new(inner.as_ref().into()),
            },
        }
    }
}

impl MapDoc {
    fn into_map(self, dists: &mut HashMap<String, Arc<ContinuousDistribution>>) -> Result<MonotoneMap> {
        match self {
            MapDoc::Theorem { dist, n, i } => {
                let shared = match dists.get(&dist) {
                    Some(d) => d.clone(),
                    None => {
                        let d = Arc::new(ContinuousDistribution::from_spec(&dist)?);
                        dists.insert(dist, d.clone());
                        d
                    }
                };
                MonotoneMap::theorem(shared, n, i)
            }
            MapDoc::Affine { a, b } => MonotoneMap::affine(a, b),
            MapDoc::TriangularClosedForm { branch } => MonotoneMap::triangular(branch),
            MapDoc::Composed { outer, inner } => Ok(MonotoneMap::compose(
                outer.into_map(dists)?,
                inner.into_map(dists)?,
            )),
        }
    }
}

impl Ifsp {
    pub fn to_json(&self) -> Result<String> {
        let doc = IfspDoc {
            label: self.label.clone(),
            n: self.len(),
            probs: self.probs.clone(),
            maps: self.maps.iter().map(MapDoc::from).collect(),
        };
        Ok(serde_json::to_string_pretty(&doc)?)
    }

    /// Parses the JSON form. `tabulated:` and `empirical:` specifiers are
    /// resolved relative to the working directory.
    pub fn from_json(text: &str) -> Result<Self> {
        let doc: IfspDoc = serde_json::from_str(text)?;
        if doc.n != doc.maps.len() {
            return Err(Error::construction(format!(
                "document declares n = {} but lists {} maps",
                doc.n,
                doc.maps.len()
            )));
        }
        let mut dists = HashMap::new();
        let maps = doc
            .maps
            .into_iter()
            .map(|m| m.into_map(&mut dists))
            .collect::<Result<Vec<_>>>()?;
        Ifsp::new(maps, doc.probs, doc.label)
    }
}
