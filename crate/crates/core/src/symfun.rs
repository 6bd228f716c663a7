//! Elementary symmetric functions of warped diagrams.
//!
//! A diagram is summarized by the first `k` elementary symmetric functions
//! of its warped cornerpoints, i.e. the coefficients of the monic polynomial
//! whose roots are those points. Each coefficient is then rescaled by taking
//! its `j`-th root and dividing by the cornerpoint count, which keeps
//! diagrams of very different sizes on a comparable scale.

use num_complex::Complex64;
use serde::{Deserialize, Deserializer, Serialize, Serializer};

use crate::diagram::PersistenceDiagram;
use crate::error::{Error, Result};
use crate::warp::{warp_diagram, Transform};

/// Number of components used when none is given.
pub const DEFAULT_K: usize = 10;

/// Renormalized symmetric-function vector of a diagram.
#[derive(Debug, Clone, PartialEq)]
pub struct SymVector {
    components: Vec<Complex64>,
    count: usize,
}

impl SymVector {
    pub fn new(components: Vec<Complex64>, count: usize) -> Result<Self> {
        if components.is_empty() {
            return Err(Error::InvalidArgument("a SymVector needs k >= 1".into()));
        }
        if count == 0 && components.iter().any(|z| *z != Complex64::new(0.0, 0.0)) {
            return Err(Error::InvalidCount);
        }
        Ok(Self { components, count })
    }

    pub fn zero(k: usize) -> Result<Self> {
        Self::new(vec![Complex64::new(0.0, 0.0); k], 0)
    }

    pub fn components(&self) -> &[Complex64] {
        &self.components
    }

    pub fn k(&self) -> usize {
        self.components.len()
    }

    /// Cornerpoint count of the source diagram.
    pub fn count(&self) -> usize {
        self.count
    }

    pub fn to_json(&self) -> Result<String> {
        Ok(serde_json::to_string(self)?)
    }

    pub fn from_json(text: &str) -> Result<Self> {
        Ok(serde_json::from_str(text)?)
    }
}

#[derive(Serialize, Deserialize)]
struct SymVectorRepr {
    #[serde(rename = "N")]
    n: usize,
    k: usize,
    components: Vec<[f64; 2]>,
}

impl Serialize for SymVector {
    fn serialize<S: Serializer>(&self, serializer: S) -> std::result::Result<S::Ok, S::Error> {
        SymVectorRepr {
            n: self.count,
            k: self.k(),
            components: self.components.iter().map(|z| [z.re, z.im]).collect(),
        }
        .serialize(serializer)
    }
}

impl<'de> Deserialize<'de> for SymVector {
    fn deserialize<D: Deserializer<'de>>(deserializer: D) -> std::result::Result<Self, D::Error> {
        use serde::de::Error as _;
        let repr = SymVectorRepr::deserialize(deserializer)?;
        if repr.components.len() != repr.k {
            return Err(D::Error::custom(format!(
                "k = {} but {} components given",
                repr.k,
                repr.components.len()
            )));
        }
        let components = repr
            .components
            .into_iter()
            .map(|[re, im]| Complex64::new(re, im))
            .collect();
        SymVector::new(components, repr.n).map_err(D::Error::custom)
    }
}

/// First `k` elementary symmetric functions of a multiset of complex numbers.
///
/// Entries beyond the multiset size are zero, which is exactly what padding
/// the multiset with zeros would produce. Runs the coefficient recurrence
/// `e_j <- e_j + z * e_{j-1}` once per point copy, in `O(m k)`.
pub fn elementary_symmetric(points: &[(Complex64, u32)], k: usize) -> Result<Vec<Complex64>> {
    if k == 0 {
        return Err(Error::InvalidArgument("k must be at least 1".into()));
    }
    let zero = Complex64::new(0.0, 0.0);
    // e[0] = 1 is the empty product
    let mut e = vec![zero; k + 1];
    e[0] = Complex64::new(1.0, 0.0);
    let mut seen = 0usize;
    for &(z, multiplicity) in points {
        if z == zero {
            continue;
        }
        for _ in 0..multiplicity {
            seen += 1;
            for j in (1..=seen.min(k)).rev() {
                let prev = e[j - 1];
                e[j] += z * prev;
            }
        }
    }
    e.remove(0);
    Ok(e)
}

/// Rescales `a(j)` to modulus `|a(j)|^(1/j) / count`, keeping its argument.
/// Zero stays zero.
pub fn renormalize(a: &[Complex64], count: usize) -> Result<Vec<Complex64>> {
    let zero = Complex64::new(0.0, 0.0);
    if count == 0 {
        return if a.iter().all(|z| *z == zero) {
            Ok(vec![zero; a.len()])
        } else {
            Err(Error::InvalidCount)
        };
    }
    let n = count as f64;
    Ok(a.iter()
        .enumerate()
        .map(|(i, &z)| {
            if z == zero {
                zero
            } else {
                let j = (i + 1) as f64;
                Complex64::from_polar(z.norm().powf(1.0 / j) / n, z.arg())
            }
        })
        .collect())
}

/// Sum over components of the modulus of the difference.
pub fn vector_distance(x: &SymVector, y: &SymVector) -> Result<f64> {
    if x.k() != y.k() {
        return Err(Error::Dimension {
            expected: x.k(),
            found: y.k(),
        });
    }
    Ok(x.components
        .iter()
        .zip(&y.components)
        .map(|(a, b)| (a - b).norm())
        .sum())
}

/// Warps a finitized, normalized diagram and returns its renormalized vector
/// of the first `k` symmetric functions.
pub fn vectorize(diagram: &PersistenceDiagram, transform: Transform, k: usize) -> Result<SymVector> {
    let warped = warp_diagram(diagram, transform)?;
    let raw = elementary_symmetric(warped.points(), k)?;
    let components = renormalize(&raw, warped.source_count())?;
    SymVector::new(components, warped.source_count())
}
