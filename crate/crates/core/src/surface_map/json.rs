//! JSON interchange format for labeled maps.
//!
//! The schema is `{"sigma": [...], "alpha": [...], "labels": [...]}` with
//! one label entry (a string or `null`) per vertex, vertices ordered by
//! their minimum dart.  The vertex count is `labels.len()`, which allows
//! the edgeless one-vertex map: `{"sigma": [], "alpha": [], "labels":
//! [null]}`.

use serde::{Deserialize, Serialize};

use super::{MapError, RotationSystem};

#[derive(Debug, Serialize, Deserialize)]
struct MapJson {
    sigma: Vec<usize>,
    alpha: Vec<usize>,
    labels: Vec<Option<String>>,
}

/// Parsed form of the JSON schema: `map` is `None` for the edgeless
/// one-vertex map.
#[derive(Debug)]
pub struct MapJsonData {
    pub map: Option<RotationSystem>,
    pub labels: Vec<Option<String>>,
}

#[derive(Debug, thiserror::Error)]
pub enum JsonError {
    #[error("malformed JSON: {0}")]
    Parse(#[from] serde_json::Error),
    #[error("invalid map: {0}")]
    Map(#[from] MapError),
    #[error("labels array must have one entry per vertex")]
    LabelCount,
}

/// Serialize a map with per-vertex labels (pass `None` entries for
/// unlabeled vertices).
pub fn map_to_json(map: Option<&RotationSystem>, labels: &[Option<String>]) -> String {
    let (sigma, alpha) = match map {
        Some(rs) => (
            (0..rs.n_darts()).map(|d| rs.sigma(d)).collect(),
            (0..rs.n_darts()).map(|d| rs.alpha(d)).collect(),
        ),
        None => (Vec::new(), Vec::new()),
    };
    let doc = MapJson { sigma, alpha, labels: labels.to_vec() };
    serde_json::to_string_pretty(&doc).expect("serialization cannot fail")
}

pub fn map_from_json(text: &str) -> Result<MapJsonData, JsonError> {
    let doc: MapJson = serde_json::from_str(text)?;
    if doc.sigma.is_empty() && doc.alpha.is_empty() {
        if doc.labels.len() != 1 {
            return Err(JsonError::LabelCount);
        }
        return Ok(MapJsonData { map: None, labels: doc.labels });
    }
    let rs = RotationSystem::new(doc.sigma, doc.alpha)?;
    if doc.labels.len() != rs.n_vertices() {
        return Err(JsonError::LabelCount);
    }
    Ok(MapJsonData { map: Some(rs), labels: doc.labels })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::surface_map::cycle4;

    #[test]
    fn round_trip_is_exact() {
        let m = cycle4();
        let labels: Vec<Option<String>> = ["S", "U", "S", "U"]
            .iter()
            .map(|s| Some(s.to_string()))
            .collect();
        let text = map_to_json(Some(&m), &labels);
        let back = map_from_json(&text).unwrap();
        let back_map = back.map.unwrap();
        assert_eq!(back_map, m);
        assert_eq!(back.labels, labels);
    }

    #[test]
    fn trivial_map_round_trip() {
        let text = map_to_json(None, &[None]);
        let back = map_from_json(&text).unwrap();
        assert!(back.map.is_none());
        assert_eq!(back.labels.len(), 1);
    }

    #[test]
    fn bad_label_count_is_rejected() {
        let text = r#"{"sigma": [0, 1], "alpha": [1, 0], "labels": ["S"]}"#;
        assert!(matches!(map_from_json(text), Err(JsonError::LabelCount)));
    }

    #[test]
    fn invalid_permutation_is_rejected() {
        let text = r#"{"sigma": [0, 0], "alpha": [1, 0], "labels": ["S", "U"]}"#;
        assert!(matches!(map_from_json(text), Err(JsonError::Map(_))));
    }
}
