//! Persistence diagrams of degree 0.
//!
//! A diagram is a multiset of cornerpoints `(birth, death)` with `birth < death`.
//! Points with infinite death are cornerlines (essential classes). The diagonal
//! is implicit and never stored.
//!
//! Points are kept in a canonical order (ascending birth, then death) with
//! coincident points merged, so two diagrams holding the same multiset compare
//! equal and every downstream computation is independent of input order.

use std::cmp::Ordering;
use std::fmt::Write as _;
use std::io::{BufRead, Write};

use crate::error::{Error, Result};

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Cornerpoint {
    pub birth: f64,
    /// `f64::INFINITY` for a cornerline.
    pub death: f64,
    pub multiplicity: u32,
}

impl Cornerpoint {
    pub fn new(birth: f64, death: f64, multiplicity: u32) -> Result<Self> {
        let valid = birth.is_finite() && !death.is_nan() && death != f64::NEG_INFINITY;
        if !valid || birth >= death || multiplicity == 0 {
            return Err(Error::InvalidCornerpoint {
                birth,
                death,
                multiplicity,
            });
        }
        Ok(Self {
            birth,
            death,
            multiplicity,
        })
    }

    pub fn is_cornerline(&self) -> bool {
        self.death.is_infinite()
    }

    /// Lifetime `death - birth`; infinite for a cornerline.
    pub fn persistence(&self) -> f64 {
        self.death - self.birth
    }

    fn key_cmp(&self, other: &Self) -> Ordering {
        self.birth
            .total_cmp(&other.birth)
            .then(self.death.total_cmp(&other.death))
    }
}

#[derive(Debug, Clone, Default, PartialEq)]
pub struct PersistenceDiagram {
    points: Vec<Cornerpoint>,
    pub label: Option<String>,
}

impl PersistenceDiagram {
    pub fn empty() -> Self {
        Self::default()
    }

    /// Builds a diagram, merging coincident points by summing multiplicities.
    pub fn new(points: impl IntoIterator<Item = Cornerpoint>) -> Self {
        let mut points: Vec<Cornerpoint> = points.into_iter().collect();
        points.sort_by(Cornerpoint::key_cmp);
        let mut merged: Vec<Cornerpoint> = Vec::with_capacity(points.len());
        for p in points {
            match merged.last_mut() {
                Some(last) if last.birth == p.birth && last.death == p.death => {
                    last.multiplicity += p.multiplicity;
                }
                _ => merged.push(p),
            }
        }
        Self {
            points: merged,
            label: None,
        }
    }

    /// Builds a diagram from `(birth, death)` pairs, each with multiplicity one.
    pub fn from_pairs(pairs: &[(f64, f64)]) -> Result<Self> {
        let points = pairs
            .iter()
            .map(|&(b, d)| Cornerpoint::new(b, d, 1))
            .collect::<Result<Vec<_>>>()?;
        Ok(Self::new(points))
    }

    pub fn with_label(mut self, label: impl Into<String>) -> Self {
        self.label = Some(label.into());
        self
    }

    pub fn points(&self) -> &[Cornerpoint] {
        &self.points
    }

    /// Number of distinct stored points.
    pub fn len(&self) -> usize {
        self.points.len()
    }

    pub fn is_empty(&self) -> bool {
        self.points.is_empty()
    }

    /// Total cornerpoint count, multiplicities included.
    pub fn count(&self) -> usize {
        self.points.iter().map(|p| p.multiplicity as usize).sum()
    }

    pub fn has_cornerlines(&self) -> bool {
        self.points.iter().any(Cornerpoint::is_cornerline)
    }

    /// Iterates over points repeated according to multiplicity.
    pub fn expanded(&self) -> impl Iterator<Item = (f64, f64)> + '_ {
        self.points
            .iter()
            .flat_map(|p| std::iter::repeat_n((p.birth, p.death), p.multiplicity as usize))
    }

    /// Maps every finite coordinate affinely from `[f_min, f_max]` onto `[0, 1]`.
    ///
    /// A point whose two coordinates round to the same value is a diagonal
    /// point after mapping and is dropped.
    pub fn normalize_filtration(&self, f_min: f64, f_max: f64) -> Result<Self> {
        if !(f_min < f_max) || !f_min.is_finite() || !f_max.is_finite() {
            return Err(Error::DegenerateRange { min: f_min, max: f_max });
        }
        let span = f_max - f_min;
        let check = |x: f64| {
            if x < f_min || x > f_max {
                Err(Error::OutOfRange {
                    value: x,
                    min: f_min,
                    max: f_max,
                })
            } else {
                Ok(((x - f_min) / span).clamp(0.0, 1.0))
            }
        };
        let mut out = Vec::with_capacity(self.points.len());
        for p in &self.points {
            let birth = check(p.birth)?;
            let death = if p.is_cornerline() {
                f64::INFINITY
            } else {
                check(p.death)?
            };
            if birth < death {
                out.push(Cornerpoint {
                    birth,
                    death,
                    multiplicity: p.multiplicity,
                });
            }
        }
        Ok(Self {
            label: self.label.clone(),
            ..Self::new(out)
        })
    }

    /// Replaces every cornerline `(w, inf)` by `(w, V)`, with `V` the largest
    /// finite death in this diagram.
    ///
    /// When there is no finite death above `w`, the death becomes `1.0`, the
    /// top of the normalized filtration. A cornerline born at `1.0` or later
    /// would land on the diagonal and is dropped.
    pub fn finitize_cornerlines(&self) -> Self {
        if !self.has_cornerlines() {
            return self.clone();
        }
        let max_death = self
            .points
            .iter()
            .filter(|p| !p.is_cornerline())
            .map(|p| p.death)
            .fold(f64::NEG_INFINITY, f64::max);
        let points = self.points.iter().filter_map(|p| {
            if !p.is_cornerline() {
                return Some(*p);
            }
            let death = if max_death > p.birth { max_death } else { 1.0 };
            (p.birth < death).then_some(Cornerpoint {
                birth: p.birth,
                death,
                multiplicity: p.multiplicity,
            })
        });
        Self {
            label: self.label.clone(),
            ..Self::new(points)
        }
    }

    /// Smallest and largest finite coordinate, if any point is stored.
    pub fn finite_range(&self) -> Option<(f64, f64)> {
        let mut coords = self
            .points
            .iter()
            .flat_map(|p| [p.birth, p.death])
            .filter(|x| x.is_finite())
            .peekable();
        coords.peek()?;
        Some(coords.fold((f64::INFINITY, f64::NEG_INFINITY), |(lo, hi), x| (lo.min(x), hi.max(x))))
    }

    /// Parses the `birth,death,multiplicity` CSV format.
    ///
    /// Lines starting with `#` are comments; a comment of the form
    /// `# label: <text>` sets the diagram label.
    pub fn read_csv<R: BufRead>(reader: R) -> Result<Self> {
        let mut points = Vec::new();
        let mut label = None;
        for (idx, line) in reader.lines().enumerate() {
            let line_no = idx as u64 + 1;
            let line = line?;
            let trimmed = line.trim();
            if trimmed.is_empty() {
                continue;
            }
            if let Some(comment) = trimmed.strip_prefix('#') {
                if let Some(value) = comment.trim().strip_prefix("label:") {
                    label = Some(value.trim().to_string());
                }
                continue;
            }
            let parse_err = |message: String| Error::Parse { line: line_no, message };
            let fields: Vec<&str> = trimmed.split(',').map(str::trim).collect();
            if fields.len() != 3 {
                return Err(parse_err(format!(
                    "expected 3 fields `birth,death,multiplicity`, found {}",
                    fields.len()
                )));
            }
            let birth: f64 = fields[0]
                .parse()
                .map_err(|_| parse_err(format!("invalid birth `{}`", fields[0])))?;
            let death: f64 = fields[1]
                .parse()
                .map_err(|_| parse_err(format!("invalid death `{}`", fields[1])))?;
            let multiplicity: u32 = fields[2]
                .parse()
                .map_err(|_| parse_err(format!("invalid multiplicity `{}`", fields[2])))?;
            let point = Cornerpoint::new(birth, death, multiplicity).map_err(|e| parse_err(e.to_string()))?;
            points.push(point);
        }
        Ok(Self {
            label,
            ..Self::new(points)
        })
    }

    pub fn to_csv_string(&self) -> String {
        let mut out = String::new();
        if let Some(label) = &self.label {
            let _ = writeln!(out, "# label: {label}");
        }
        out.push_str("# birth,death,multiplicity\n");
        for p in &self.points {
            let _ = writeln!(out, "{},{},{}", p.birth, p.death, p.multiplicity);
        }
        out
    }

    pub fn write_csv<W: Write>(&self, mut writer: W) -> Result<()> {
        writer.write_all(self.to_csv_string().as_bytes())?;
        Ok(())
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn pts(d: &PersistenceDiagram) -> Vec<(f64, f64, u32)> {
        d.points().iter().map(|p| (p.birth, p.death, p.multiplicity)).collect()
    }

    #[test]
    fn rejects_invalid_cornerpoints() {
        assert!(Cornerpoint::new(0.5, 0.5, 1).is_err());
        assert!(Cornerpoint::new(0.6, 0.5, 1).is_err());
        assert!(Cornerpoint::new(0.1, 0.5, 0).is_err());
        assert!(Cornerpoint::new(f64::NAN, 0.5, 1).is_err());
        assert!(Cornerpoint::new(f64::NEG_INFINITY, 0.5, 1).is_err());
        assert!(Cornerpoint::new(0.1, f64::INFINITY, 1).is_ok());
    }

    #[test]
    fn coincident_points_merge() {
        let d = PersistenceDiagram::new([
            Cornerpoint::new(0.2, 0.5, 1).unwrap(),
            Cornerpoint::new(0.0, 1.0, 2).unwrap(),
            Cornerpoint::new(0.2, 0.5, 3).unwrap(),
        ]);
        assert_eq!(pts(&d), vec![(0.0, 1.0, 2), (0.2, 0.5, 4)]);
        assert_eq!(d.count(), 6);
    }

    #[test]
    fn normalize_examples() {
        let d = PersistenceDiagram::from_pairs(&[(0.0, 1.0)]).unwrap();
        assert_eq!(pts(&d.normalize_filtration(0.0, 1.0).unwrap()), vec![(0.0, 1.0, 1)]);

        let d = PersistenceDiagram::from_pairs(&[(2.0, 6.0)]).unwrap();
        assert_eq!(pts(&d.normalize_filtration(2.0, 6.0).unwrap()), vec![(0.0, 1.0, 1)]);

        let d = PersistenceDiagram::from_pairs(&[(3.0, f64::INFINITY)]).unwrap();
        assert_eq!(
            pts(&d.normalize_filtration(2.0, 6.0).unwrap()),
            vec![(0.25, f64::INFINITY, 1)]
        );
    }

    #[test]
    fn normalize_errors() {
        let d = PersistenceDiagram::from_pairs(&[(2.0, 6.0)]).unwrap();
        assert!(matches!(
            d.normalize_filtration(1.0, 1.0),
            Err(Error::DegenerateRange { .. })
        ));
        assert!(matches!(
            d.normalize_filtration(3.0, 1.0),
            Err(Error::DegenerateRange { .. })
        ));
        assert!(matches!(
            d.normalize_filtration(2.0, 5.0),
            Err(Error::OutOfRange { .. })
        ));
        assert!(matches!(
            d.normalize_filtration(2.5, 6.0),
            Err(Error::OutOfRange { .. })
        ));
    }

    #[test]
    fn finitize_examples() {
        let inf = f64::INFINITY;
        let d = PersistenceDiagram::from_pairs(&[(0.0, inf), (0.2, 0.5)]).unwrap();
        assert_eq!(pts(&d.finitize_cornerlines()), vec![(0.0, 0.5, 1), (0.2, 0.5, 1)]);

        let d = PersistenceDiagram::from_pairs(&[(0.3, inf)]).unwrap();
        assert_eq!(pts(&d.finitize_cornerlines()), vec![(0.3, 1.0, 1)]);

        let d = PersistenceDiagram::from_pairs(&[(0.0, inf), (0.1, inf), (0.2, 0.9)]).unwrap();
        assert_eq!(
            pts(&d.finitize_cornerlines()),
            vec![(0.0, 0.9, 1), (0.1, 0.9, 1), (0.2, 0.9, 1)]
        );
    }

    #[test]
    fn finitize_merges_with_proper_point() {
        let inf = f64::INFINITY;
        let d = PersistenceDiagram::from_pairs(&[(0.0, inf), (0.0, 0.5)]).unwrap();
        assert_eq!(pts(&d.finitize_cornerlines()), vec![(0.0, 0.5, 2)]);
    }

    #[test]
    fn finitize_falls_back_when_cornerline_is_late() {
        let inf = f64::INFINITY;
        let d = PersistenceDiagram::from_pairs(&[(0.6, inf), (0.1, 0.4)]).unwrap();
        assert_eq!(pts(&d.finitize_cornerlines()), vec![(0.1, 0.4, 1), (0.6, 1.0, 1)]);
        let d = PersistenceDiagram::from_pairs(&[(1.0, inf)]).unwrap();
        assert!(d.finitize_cornerlines().is_empty());
    }

    #[test]
    fn csv_round_trip_with_label() {
        let text = "# label: melanoma\n# comment\n0,inf,1\n0.25,0.5,2\n\n";
        let d = PersistenceDiagram::read_csv(text.as_bytes()).unwrap();
        assert_eq!(d.label.as_deref(), Some("melanoma"));
        assert_eq!(pts(&d), vec![(0.0, f64::INFINITY, 1), (0.25, 0.5, 2)]);
        let again = PersistenceDiagram::read_csv(d.to_csv_string().as_bytes()).unwrap();
        assert_eq!(again, d);
    }

    #[test]
    fn csv_reports_line_numbers() {
        let text = "# header\n0,1,1\n0.5,x,1\n";
        match PersistenceDiagram::read_csv(text.as_bytes()) {
            Err(Error::Parse { line, .. }) => assert_eq!(line, 3),
            other => panic!("unexpected {other:?}"),
        }
        let text = "0.5,0.2,1\n";
        assert!(matches!(
            PersistenceDiagram::read_csv(text.as_bytes()),
            Err(Error::Parse { line: 1, .. })
        ));
    }
}
