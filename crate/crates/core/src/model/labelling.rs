use std::path::Path;

use serde::{Deserialize, Serialize};

use super::geometry::Rect;
use crate::error::{Error, Result};
use crate::logic::{Letter, MAX_ATOMS};

/// Interior-overlap tolerance used when validating regions.
pub const DISJOINT_TOL: f64 = 1e-12;

/// Piecewise-constant labelling of the output space by closed rectangles.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(try_from = "LabellingFile", into = "LabellingFile")]
pub struct LabellingMap {
    atoms: Vec<String>,
    dim: usize,
    regions: Vec<(Rect, Letter)>,
    default: Letter,
}

impl LabellingMap {
    /// Regions must have pairwise disjoint interiors. Points on a shared
    /// boundary take the letter of the lower-indexed region.
    pub fn new(atoms: Vec<String>, dim: usize, regions: Vec<(Rect, Letter)>, default: Letter) -> Result<Self> {
        if atoms.len() > MAX_ATOMS {
            return Err(Error::ResourceCap { what: "atomic propositions", limit: MAX_ATOMS });
        }
        let sigma = 1u64 << atoms.len();
        if u64::from(default.0) >= sigma {
            return Err(Error::LetterOutOfAlphabet(default.0));
        }
        for (i, (r, l)) in regions.iter().enumerate() {
            if r.dim() != dim {
                return Err(Error::dim(format!("region {i} has dimension {}, expected {dim}", r.dim())));
            }
            if u64::from(l.0) >= sigma {
                return Err(Error::LetterOutOfAlphabet(l.0));
            }
            for (j, (s, _)) in regions.iter().enumerate().take(i) {
                if r.interiors_overlap(s, DISJOINT_TOL) {
                    return Err(Error::arg(format!("regions {j} and {i} overlap")));
                }
            }
        }
        Ok(LabellingMap { atoms, dim, regions, default })
    }

    pub fn atoms(&self) -> &[String] {
        &self.atoms
    }
    pub fn dim(&self) -> usize {
        self.dim
    }
    pub fn regions(&self) -> &[(Rect, Letter)] {
        &self.regions
    }
    pub fn default_letter(&self) -> Letter {
        self.default
    }

    /// Letter of the first region containing `y`, else the default letter.
    pub fn label_of(&self, y: &[f64]) -> Letter {
        debug_assert_eq!(y.len(), self.dim);
        self.regions.iter().find(|(r, _)| r.contains(y)).map_or(self.default, |(_, l)| *l)
    }

    /// Letters attained within Euclidean distance `eps` of `y`, sorted.
    /// The default letter is added unless the box `y ± eps` lies in one region.
    pub fn relaxed_labels(&self, y: &[f64], eps: f64) -> Result<Vec<Letter>> {
        if !(eps >= 0.0) {
            return Err(Error::arg("relaxation radius must be nonnegative"));
        }
        if y.len() != self.dim {
            return Err(Error::dim(format!("output has length {}, expected {}", y.len(), self.dim)));
        }
        if eps == 0.0 {
            return Ok(vec![self.label_of(y)]);
        }
        let mut out: Vec<Letter> = self.regions.iter().filter(|(r, _)| r.distance(y) <= eps).map(|(_, l)| *l).collect();
        if !self.regions.iter().any(|(r, _)| r.contains_box(y, eps)) {
            out.push(self.default);
        }
        out.sort_unstable();
        out.dedup();
        Ok(out)
    }

    /// Union of the regions whose letter contains `atom`, as a list of rectangles.
    pub fn regions_with_atom(&self, atom: usize) -> Vec<Rect> {
        self.regions.iter().filter(|(_, l)| l.contains(atom)).map(|(r, _)| r.clone()).collect()
    }

    pub fn load(path: &Path) -> Result<Self> {
        Ok(serde_json::from_str(&std::fs::read_to_string(path)?)?)
    }
}

#[derive(Clone, Debug, Serialize, Deserialize)]
pub struct RegionFile {
    pub bounds: Vec<[f64; 2]>,
    pub atoms: Vec<String>,
}

/// JSON form of a labelling map.
#[derive(Clone, Debug, Serialize, Deserialize)]
pub struct LabellingFile {
    pub atoms: Vec<String>,
    pub dim: usize,
    pub regions: Vec<RegionFile>,
    #[serde(default)]
    pub default: Vec<String>,
}

impl TryFrom<LabellingFile> for LabellingMap {
    type Error = Error;
    fn try_from(f: LabellingFile) -> Result<Self> {
        let letter = |names: &[String]| {
            Letter::from_names(names, &f.atoms).ok_or_else(|| Error::arg(format!("unknown atom in {names:?}")))
        };
        let regions = f
            .regions
            .iter()
            .map(|r| Ok((Rect::from_bounds(&r.bounds)?, letter(&r.atoms)?)))
            .collect::<Result<Vec<_>>>()?;
        let default = letter(&f.default)?;
        LabellingMap::new(f.atoms.clone(), f.dim, regions, default)
    }
}

impl From<LabellingMap> for LabellingFile {
    fn from(m: LabellingMap) -> Self {
        LabellingFile {
            regions: m.regions.iter().map(|(r, l)| RegionFile { bounds: r.bounds(), atoms: l.names(&m.atoms) }).collect(),
            default: m.default.names(&m.atoms),
            atoms: m.atoms,
            dim: m.dim,
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn target() -> LabellingMap {
        LabellingMap::new(vec!["k".into()], 1, vec![(Rect::from_bounds(&[[-2.0, 2.0]]).unwrap(), Letter(1))], Letter::EMPTY)
            .unwrap()
    }

    #[test]
    fn label_of_closed_region() {
        let lab = target();
        assert_eq!(lab.label_of(&[0.0]), Letter(1));
        assert_eq!(lab.label_of(&[3.0]), Letter::EMPTY);
        assert_eq!(lab.label_of(&[2.0]), Letter(1));
    }

    #[test]
    fn relaxed_labels_examples() {
        let lab = target();
        assert_eq!(lab.relaxed_labels(&[1.0], 0.0).unwrap(), vec![Letter(1)]);
        assert_eq!(lab.relaxed_labels(&[1.0], 1.2266).unwrap(), vec![Letter::EMPTY, Letter(1)]);
        assert_eq!(lab.relaxed_labels(&[0.0], 0.5).unwrap(), vec![Letter(1)]);
        assert!(lab.relaxed_labels(&[0.0], -1.0).is_err());
    }

    #[test]
    fn overlapping_regions_rejected_touching_allowed() {
        let a = Rect::from_bounds(&[[0.0, 1.0]]).unwrap();
        let b = Rect::from_bounds(&[[0.5, 2.0]]).unwrap();
        let c = Rect::from_bounds(&[[1.0, 2.0]]).unwrap();
        let atoms = vec!["p".to_string(), "q".to_string()];
        assert!(LabellingMap::new(atoms.clone(), 1, vec![(a.clone(), Letter(1)), (b, Letter(2))], Letter::EMPTY).is_err());
        let lab = LabellingMap::new(atoms, 1, vec![(a, Letter(1)), (c, Letter(2))], Letter::EMPTY).unwrap();
        assert_eq!(lab.label_of(&[1.0]), Letter(1));
    }

    #[test]
    fn json_round_trip() {
        let lab = target();
        let s = serde_json::to_string(&lab).unwrap();
        assert_eq!(serde_json::from_str::<LabellingMap>(&s).unwrap(), lab);
    }
}
