//! Distance matrices, weighted fusion and leave-one-out retrieval.

use std::io::{Read, Write};

use serde::Serialize;

use crate::bottleneck::bottleneck_distance;
use crate::diagram::PersistenceDiagram;
use crate::error::{Error, Result};
use crate::exec::Execution;
use crate::symfun::{vector_distance, SymVector};

/// Symmetric matrix of pairwise dissimilarities with a zero diagonal.
#[derive(Debug, Clone, PartialEq)]
pub struct DistanceMatrix {
    size: usize,
    entries: Vec<f64>,
    ids: Vec<String>,
    labels: Option<Vec<String>>,
}

impl DistanceMatrix {
    /// Builds a matrix from row-major entries, checking symmetry, a zero
    /// diagonal and nonnegative finite values.
    pub fn new(size: usize, entries: Vec<f64>) -> Result<Self> {
        if size == 0 {
            return Err(Error::EmptyInput);
        }
        if entries.len() != size * size {
            return Err(Error::Dimension {
                expected: size * size,
                found: entries.len(),
            });
        }
        for i in 0..size {
            if entries[i * size + i] != 0.0 {
                return Err(Error::InvalidArgument(format!("diagonal entry {i} is not zero")));
            }
            for j in i + 1..size {
                let (a, b) = (entries[i * size + j], entries[j * size + i]);
                if a != b || !(a >= 0.0) || !a.is_finite() {
                    return Err(Error::InvalidArgument(format!(
                        "entries ({i}, {j}) = {a} and ({j}, {i}) = {b} must be equal, finite and nonnegative"
                    )));
                }
            }
        }
        Ok(Self {
            size,
            entries,
            ids: (0..size).map(|i| i.to_string()).collect(),
            labels: None,
        })
    }

    fn from_upper(size: usize, upper: &[f64]) -> Self {
        let mut entries = vec![0.0; size * size];
        let mut it = upper.iter();
        for i in 0..size {
            for j in i + 1..size {
                let d = *it.next().expect("one value per pair");
                entries[i * size + j] = d;
                entries[j * size + i] = d;
            }
        }
        Self {
            size,
            entries,
            ids: (0..size).map(|i| i.to_string()).collect(),
            labels: None,
        }
    }

    pub fn with_ids(mut self, ids: Vec<String>) -> Result<Self> {
        if ids.len() != self.size {
            return Err(Error::Dimension {
                expected: self.size,
                found: ids.len(),
            });
        }
        self.ids = ids;
        Ok(self)
    }

    pub fn with_labels(mut self, labels: Vec<String>) -> Result<Self> {
        if labels.len() != self.size {
            return Err(Error::Dimension {
                expected: self.size,
                found: labels.len(),
            });
        }
        self.labels = Some(labels);
        Ok(self)
    }

    pub fn size(&self) -> usize {
        self.size
    }

    pub fn get(&self, i: usize, j: usize) -> f64 {
        self.entries[i * self.size + j]
    }

    pub fn entries(&self) -> &[f64] {
        &self.entries
    }

    pub fn ids(&self) -> &[String] {
        &self.ids
    }

    pub fn labels(&self) -> Option<&[String]> {
        self.labels.as_deref()
    }

    /// Multiplies every entry by `factor > 0`.
    pub fn scaled(&self, factor: f64) -> Result<Self> {
        if !(factor > 0.0) || !factor.is_finite() {
            return Err(Error::InvalidArgument(format!(
                "scale factor {factor} must be positive"
            )));
        }
        Ok(Self {
            entries: self.entries.iter().map(|x| x * factor).collect(),
            ..self.clone()
        })
    }

    /// CSV layout: item ids, then labels (empty when unlabeled), then the
    /// square matrix row by row.
    pub fn write_csv<W: Write>(&self, writer: W) -> Result<()> {
        let mut wtr = csv::WriterBuilder::new().flexible(true).from_writer(writer);
        wtr.write_record(&self.ids)?;
        match &self.labels {
            Some(labels) => wtr.write_record(labels)?,
            None => wtr.write_record(vec![""; self.size])?,
        }
        for i in 0..self.size {
            wtr.write_record(
                self.entries[i * self.size..(i + 1) * self.size]
                    .iter()
                    .map(|x| x.to_string()),
            )?;
        }
        wtr.flush()?;
        Ok(())
    }

    pub fn to_csv_string(&self) -> Result<String> {
        let mut buf = Vec::new();
        self.write_csv(&mut buf)?;
        Ok(String::from_utf8(buf).expect("csv output is utf-8"))
    }

    pub fn read_csv<R: Read>(reader: R) -> Result<Self> {
        let mut rdr = csv::ReaderBuilder::new()
            .has_headers(false)
            .flexible(true)
            .from_reader(reader);
        let mut records = rdr.records();
        let mut next_record = |what: &str| -> Result<csv::StringRecord> {
            records.next().transpose()?.ok_or_else(|| Error::Parse {
                line: 0,
                message: format!("missing {what}"),
            })
        };
        let ids: Vec<String> = next_record("id row")?.iter().map(str::to_string).collect();
        let labels: Vec<String> = next_record("label row")?.iter().map(str::to_string).collect();
        let size = ids.len();
        let mut entries = Vec::with_capacity(size * size);
        for row in 0..size {
            let record = next_record("matrix row")?;
            let line = record.position().map_or(row as u64 + 3, |p| p.line());
            if record.len() != size {
                return Err(Error::Parse {
                    line,
                    message: format!("expected {size} entries, found {}", record.len()),
                });
            }
            for field in record.iter() {
                entries.push(field.trim().parse::<f64>().map_err(|_| Error::Parse {
                    line,
                    message: format!("invalid number `{field}`"),
                })?);
            }
        }
        let matrix = Self::new(size, entries)?.with_ids(ids)?;
        if labels.iter().all(String::is_empty) {
            Ok(matrix)
        } else {
            matrix.with_labels(labels)
        }
    }
}

/// Inputs to [`compute_distance_matrix`].
#[derive(Debug, Clone, Copy)]
pub enum Items<'a> {
    Vectors(&'a [SymVector]),
    Diagrams(&'a [PersistenceDiagram]),
}

impl Items<'_> {
    fn len(&self) -> usize {
        match self {
            Items::Vectors(v) => v.len(),
            Items::Diagrams(d) => d.len(),
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum DistanceMethod {
    /// Sum of component moduli between symmetric-function vectors.
    VectorD,
    Bottleneck,
}

/// All pairwise distances. Only the upper triangle is evaluated.
///
/// For diagrams whose labels are all present, the matrix carries them.
pub fn compute_distance_matrix(items: Items<'_>, method: DistanceMethod, exec: Execution) -> Result<DistanceMatrix> {
    let n = items.len();
    if n == 0 {
        return Err(Error::EmptyInput);
    }
    let pairs: Vec<(usize, usize)> = (0..n).flat_map(|i| (i + 1..n).map(move |j| (i, j))).collect();
    let upper = match (items, method) {
        (Items::Vectors(v), DistanceMethod::VectorD) => {
            exec.try_map(&pairs, |&(i, j)| vector_distance(&v[i], &v[j]))?
        }
        (Items::Diagrams(d), DistanceMethod::Bottleneck) => {
            exec.try_map(&pairs, |&(i, j)| bottleneck_distance(&d[i], &d[j]))?
        }
        (Items::Vectors(_), m) | (Items::Diagrams(_), m) => {
            return Err(Error::Config(format!("method {m:?} does not apply to these items")));
        }
    };
    let matrix = DistanceMatrix::from_upper(n, &upper);
    if let Items::Diagrams(d) = items {
        if let Some(labels) = d.iter().map(|x| x.label.clone()).collect::<Option<Vec<_>>>() {
            return matrix.with_labels(labels);
        }
    }
    Ok(matrix)
}

/// Entry-wise weighted mean `sum(w_i M_i) / sum(w_i)`; ids and labels come
/// from the first matrix.
pub fn combine_matrices(matrices: &[DistanceMatrix], weights: &[f64]) -> Result<DistanceMatrix> {
    let first = matrices.first().ok_or(Error::EmptyInput)?;
    if weights.len() != matrices.len() {
        return Err(Error::Dimension {
            expected: matrices.len(),
            found: weights.len(),
        });
    }
    if let Some(m) = matrices.iter().find(|m| m.size != first.size) {
        return Err(Error::Dimension {
            expected: first.size,
            found: m.size,
        });
    }
    if weights.iter().any(|w| !(*w >= 0.0) || !w.is_finite()) {
        return Err(Error::InvalidWeights);
    }
    let total: f64 = weights.iter().sum();
    if !(total > 0.0) {
        return Err(Error::InvalidWeights);
    }
    let entries = (0..first.entries.len())
        .map(|e| matrices.iter().zip(weights).map(|(m, w)| w * m.entries[e]).sum::<f64>() / total)
        .collect();
    Ok(DistanceMatrix {
        entries,
        ..first.clone()
    })
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct Prediction {
    pub predicted: String,
    /// Index of the nearest item.
    pub neighbor: usize,
}

/// Leave-one-out 1-nearest-neighbor classification. Ties go to the smaller
/// index.
pub fn leave_one_out_nn(matrix: &DistanceMatrix) -> Result<Vec<Prediction>> {
    leave_one_out_knn(matrix, 1)
}

/// Leave-one-out majority vote over the `neighbors` nearest items (distance
/// ties broken by index). A vote tie goes to the label of the nearest item
/// among the tied labels.
pub fn leave_one_out_knn(matrix: &DistanceMatrix, neighbors: usize) -> Result<Vec<Prediction>> {
    let labels = matrix.labels().ok_or(Error::MissingLabels)?;
    let n = matrix.size;
    if n < 2 {
        return Err(Error::InvalidArgument("leave-one-out needs at least two items".into()));
    }
    if neighbors == 0 {
        return Err(Error::InvalidArgument("neighbor count must be at least 1".into()));
    }
    let mut out = Vec::with_capacity(n);
    for j in 0..n {
        let mut order: Vec<usize> = (0..n).filter(|&i| i != j).collect();
        order.sort_by(|&a, &b| matrix.get(a, j).total_cmp(&matrix.get(b, j)).then(a.cmp(&b)));
        order.truncate(neighbors);
        // (label, votes, rank of first occurrence)
        let mut tally: Vec<(&str, usize, usize)> = Vec::new();
        for (rank, &i) in order.iter().enumerate() {
            match tally.iter_mut().find(|t| t.0 == labels[i]) {
                Some(t) => t.1 += 1,
                None => tally.push((&labels[i], 1, rank)),
            }
        }
        let winner = tally
            .iter()
            .max_by(|a, b| a.1.cmp(&b.1).then(b.2.cmp(&a.2)))
            .expect("at least one neighbor");
        out.push(Prediction {
            predicted: winner.0.to_string(),
            neighbor: order[0],
        });
    }
    Ok(out)
}

/// Binary diagnosis metrics, in percent. Every label other than the positive
/// class counts as negative.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct EvaluationReport {
    pub accuracy: f64,
    pub sensitivity: f64,
    pub specificity: f64,
    pub true_positives: usize,
    pub false_negatives: usize,
    pub true_negatives: usize,
    pub false_positives: usize,
    pub predictions: Vec<String>,
}

impl EvaluationReport {
    pub fn total(&self) -> usize {
        self.true_positives + self.false_negatives + self.true_negatives + self.false_positives
    }
}

pub fn evaluate(predictions: &[String], labels: &[String], positive_class: &str) -> Result<EvaluationReport> {
    if predictions.len() != labels.len() {
        return Err(Error::Dimension {
            expected: labels.len(),
            found: predictions.len(),
        });
    }
    let (mut tp, mut fn_, mut tn, mut fp) = (0, 0, 0, 0);
    for (p, l) in predictions.iter().zip(labels) {
        match (l == positive_class, p == positive_class) {
            (true, true) => tp += 1,
            (true, false) => fn_ += 1,
            (false, false) => tn += 1,
            (false, true) => fp += 1,
        }
    }
    if tp + fn_ == 0 {
        return Err(Error::UndefinedMetric("sensitivity"));
    }
    if tn + fp == 0 {
        return Err(Error::UndefinedMetric("specificity"));
    }
    let pct = |a: usize, b: usize| 100.0 * a as f64 / b as f64;
    Ok(EvaluationReport {
        accuracy: pct(tp + tn, labels.len()),
        sensitivity: pct(tp, tp + fn_),
        specificity: pct(tn, tn + fp),
        true_positives: tp,
        false_negatives: fn_,
        true_negatives: tn,
        false_positives: fp,
        predictions: predictions.to_vec(),
    })
}

/// Fraction of items whose leave-one-out 1-NN label matches their own.
pub fn retrieval_accuracy(matrix: &DistanceMatrix) -> Result<f64> {
    let labels = matrix.labels().ok_or(Error::MissingLabels)?;
    let predictions = leave_one_out_nn(matrix)?;
    let correct = predictions
        .iter()
        .zip(labels)
        .filter(|(p, l)| &p.predicted == *l)
        .count();
    Ok(correct as f64 / labels.len() as f64)
}

pub const DEFAULT_GRID_STEP: f64 = 0.05;

/// Coordinate ascent over the weight simplex, maximizing leave-one-out 1-NN
/// accuracy of the combined matrix.
///
/// Weights live on the grid of multiples of `grid_step`. The search starts
/// from the best of the (near-)uniform weights and every single-matrix
/// vertex, then repeatedly moves one grid unit between two coordinates while
/// that strictly improves accuracy.
pub fn optimize_weights(matrices: &[DistanceMatrix], grid_step: f64) -> Result<Vec<f64>> {
    let first = matrices.first().ok_or(Error::EmptyInput)?;
    if !(grid_step > 0.0 && grid_step <= 1.0) {
        return Err(Error::InvalidArgument(format!(
            "grid step {grid_step} must lie in (0, 1]"
        )));
    }
    if matrices.iter().any(|m| m.labels.is_none()) {
        return Err(Error::MissingLabels);
    }
    if let Some(m) = matrices.iter().find(|m| m.size != first.size) {
        return Err(Error::Dimension {
            expected: first.size,
            found: m.size,
        });
    }
    let count = matrices.len();
    let units = ((1.0 / grid_step).round() as usize).max(1);
    let to_weights = |u: &[usize]| u.iter().map(|&x| x as f64 / units as f64).collect::<Vec<_>>();
    let score = |u: &[usize]| -> Result<f64> { retrieval_accuracy(&combine_matrices(matrices, &to_weights(u))?) };

    let mut starts = Vec::with_capacity(count + 1);
    let mut uniform = vec![units / count; count];
    for slot in uniform.iter_mut().take(units % count) {
        *slot += 1;
    }
    if uniform.iter().any(|&u| u > 0) {
        starts.push(uniform);
    }
    for i in 0..count {
        let mut vertex = vec![0; count];
        vertex[i] = units;
        starts.push(vertex);
    }

    let mut best = starts[0].clone();
    let mut best_score = score(&best)?;
    for start in &starts[1..] {
        let s = score(start)?;
        if s > best_score {
            best_score = s;
            best = start.clone();
        }
    }

    loop {
        let mut improved = false;
        for to in 0..count {
            for from in 0..count {
                if from == to || best[from] == 0 {
                    continue;
                }
                let mut candidate = best.clone();
                candidate[from] -= 1;
                candidate[to] += 1;
                let s = score(&candidate)?;
                if s > best_score {
                    best_score = s;
                    best = candidate;
                    improved = true;
                }
            }
        }
        if !improved {
            break;
        }
    }
    Ok(to_weights(&best))
}

#[cfg(test)]
mod tests {
    use super::*;
    use num_complex::Complex64;

    fn labeled(size: usize, entries: Vec<f64>, labels: &[&str]) -> DistanceMatrix {
        DistanceMatrix::new(size, entries)
            .unwrap()
            .with_labels(labels.iter().map(|s| s.to_string()).collect())
            .unwrap()
    }

    fn strings(v: &[&str]) -> Vec<String> {
        v.iter().map(|s| s.to_string()).collect()
    }

    #[test]
    fn matrix_validation() {
        assert!(DistanceMatrix::new(2, vec![0.0, 1.0, 1.0, 0.0]).is_ok());
        assert!(DistanceMatrix::new(2, vec![0.0, 1.0, 2.0, 0.0]).is_err());
        assert!(DistanceMatrix::new(2, vec![0.1, 1.0, 1.0, 0.0]).is_err());
        assert!(DistanceMatrix::new(2, vec![0.0, -1.0, -1.0, 0.0]).is_err());
        assert!(DistanceMatrix::new(2, vec![0.0; 3]).is_err());
        assert!(DistanceMatrix::new(0, vec![]).is_err());
    }

    #[test]
    fn distance_matrix_examples() {
        let v = vec![SymVector::new(vec![Complex64::new(1.0, 0.0)], 1).unwrap()];
        let m = compute_distance_matrix(Items::Vectors(&v), DistanceMethod::VectorD, Execution::Sequential).unwrap();
        assert_eq!(m.entries(), &[0.0]);

        let d = PersistenceDiagram::from_pairs(&[(0.0, 0.5)]).unwrap();
        let ds = vec![d.clone(), d];
        let m = compute_distance_matrix(Items::Diagrams(&ds), DistanceMethod::Bottleneck, Execution::Parallel).unwrap();
        assert_eq!(m.entries(), &[0.0; 4]);

        let v = vec![
            SymVector::new(vec![Complex64::new(1.0, 0.0)], 1).unwrap(),
            SymVector::zero(1).unwrap(),
        ];
        let m = compute_distance_matrix(Items::Vectors(&v), DistanceMethod::VectorD, Execution::Parallel).unwrap();
        assert_eq!(m.entries(), &[0.0, 1.0, 1.0, 0.0]);
    }

    #[test]
    fn method_mismatch_is_a_config_error() {
        let v = vec![SymVector::zero(1).unwrap()];
        assert!(matches!(
            compute_distance_matrix(Items::Vectors(&v), DistanceMethod::Bottleneck, Execution::Sequential),
            Err(Error::Config(_))
        ));
        let d = vec![PersistenceDiagram::empty()];
        assert!(matches!(
            compute_distance_matrix(Items::Diagrams(&d), DistanceMethod::VectorD, Execution::Sequential),
            Err(Error::Config(_))
        ));
        assert!(matches!(
            compute_distance_matrix(Items::Diagrams(&[]), DistanceMethod::Bottleneck, Execution::Sequential),
            Err(Error::EmptyInput)
        ));
    }

    #[test]
    fn diagram_labels_carry_over() {
        let ds = vec![
            PersistenceDiagram::empty().with_label("nevus"),
            PersistenceDiagram::empty().with_label("melanoma"),
        ];
        let m =
            compute_distance_matrix(Items::Diagrams(&ds), DistanceMethod::Bottleneck, Execution::Sequential).unwrap();
        assert_eq!(m.labels().unwrap(), &strings(&["nevus", "melanoma"])[..]);
    }

    #[test]
    fn combine_examples() {
        let a = labeled(2, vec![0.0, 1.0, 1.0, 0.0], &["x", "y"]);
        let b = labeled(2, vec![0.0, 3.0, 3.0, 0.0], &["x", "y"]);
        assert_eq!(combine_matrices(std::slice::from_ref(&a), &[1.0]).unwrap(), a);
        assert_eq!(combine_matrices(&[a.clone(), a.clone()], &[0.5, 0.5]).unwrap(), a);
        assert_eq!(combine_matrices(&[a.clone(), b.clone()], &[1.0, 0.0]).unwrap(), a);
        assert_eq!(
            combine_matrices(&[a.clone(), b.clone()], &[1.0, 1.0])
                .unwrap()
                .get(0, 1),
            2.0
        );
    }

    #[test]
    fn combine_errors() {
        let a = DistanceMatrix::new(1, vec![0.0]).unwrap();
        let b = DistanceMatrix::new(2, vec![0.0, 1.0, 1.0, 0.0]).unwrap();
        assert!(matches!(
            combine_matrices(&[a.clone(), b], &[1.0, 1.0]),
            Err(Error::Dimension { .. })
        ));
        assert!(matches!(
            combine_matrices(std::slice::from_ref(&a), &[0.0]),
            Err(Error::InvalidWeights)
        ));
        assert!(matches!(
            combine_matrices(std::slice::from_ref(&a), &[-1.0]),
            Err(Error::InvalidWeights)
        ));
        assert!(matches!(
            combine_matrices(&[a], &[1.0, 1.0]),
            Err(Error::Dimension { .. })
        ));
    }

    #[test]
    fn nearest_neighbor_examples() {
        let m = labeled(2, vec![0.0, 1.0, 1.0, 0.0], &["a", "b"]);
        let p = leave_one_out_nn(&m).unwrap();
        assert_eq!(p[0].predicted, "b");
        assert_eq!(p[1].predicted, "a");

        // item 2 is equidistant from items 0 and 1
        let m = labeled(3, vec![0.0, 5.0, 1.0, 5.0, 0.0, 1.0, 1.0, 1.0, 0.0], &["a", "b", "c"]);
        let p = leave_one_out_nn(&m).unwrap();
        assert_eq!(p[2].predicted, "a");
        assert_eq!(p[2].neighbor, 0);

        let m = labeled(
            4,
            vec![
                0.0, 1.0, 9.0, 9.0, 1.0, 0.0, 9.0, 9.0, 9.0, 9.0, 0.0, 1.0, 9.0, 9.0, 1.0, 0.0,
            ],
            &["a", "a", "b", "b"],
        );
        let p: Vec<String> = leave_one_out_nn(&m).unwrap().into_iter().map(|p| p.predicted).collect();
        assert_eq!(p, strings(&["a", "a", "b", "b"]));
    }

    #[test]
    fn nearest_neighbor_errors() {
        let m = DistanceMatrix::new(2, vec![0.0, 1.0, 1.0, 0.0]).unwrap();
        assert!(matches!(leave_one_out_nn(&m), Err(Error::MissingLabels)));
        let m = labeled(1, vec![0.0], &["a"]);
        assert!(matches!(leave_one_out_nn(&m), Err(Error::InvalidArgument(_))));
    }

    #[test]
    fn knn_majority_vote() {
        // item 0: neighbors 1 (b, d=1), 2 (a, d=2), 3 (a, d=3)
        let e = vec![
            0.0, 1.0, 2.0, 3.0, //
            1.0, 0.0, 4.0, 4.0, //
            2.0, 4.0, 0.0, 4.0, //
            3.0, 4.0, 4.0, 0.0,
        ];
        let m = labeled(4, e, &["a", "b", "a", "a"]);
        assert_eq!(leave_one_out_knn(&m, 1).unwrap()[0].predicted, "b");
        assert_eq!(leave_one_out_knn(&m, 3).unwrap()[0].predicted, "a");
        // two votes each; the nearest label wins
        assert_eq!(leave_one_out_knn(&m, 2).unwrap()[0].predicted, "b");
    }

    #[test]
    fn evaluate_examples() {
        let labels = strings(&["m", "n", "m", "n"]);
        let r = evaluate(&labels, &labels, "m").unwrap();
        assert_eq!((r.accuracy, r.sensitivity, r.specificity), (100.0, 100.0, 100.0));

        let wrong = strings(&["n", "m", "n", "m"]);
        let r = evaluate(&wrong, &labels, "m").unwrap();
        assert_eq!((r.accuracy, r.sensitivity, r.specificity), (0.0, 0.0, 0.0));

        let mixed = strings(&["m", "n", "n", "m"]);
        let r = evaluate(&mixed, &labels, "m").unwrap();
        assert_eq!(
            (r.true_positives, r.false_negatives, r.true_negatives, r.false_positives),
            (1, 1, 1, 1)
        );
        assert_eq!((r.accuracy, r.sensitivity, r.specificity), (50.0, 50.0, 50.0));
        assert_eq!(r.total(), 4);
    }

    #[test]
    fn evaluate_collapses_negative_classes() {
        let labels = strings(&["melanoma", "common", "atypical"]);
        let predictions = strings(&["melanoma", "atypical", "common"]);
        let r = evaluate(&predictions, &labels, "melanoma").unwrap();
        assert_eq!((r.accuracy, r.sensitivity, r.specificity), (100.0, 100.0, 100.0));
    }

    #[test]
    fn evaluate_errors() {
        let labels = strings(&["n", "n"]);
        assert!(matches!(
            evaluate(&labels, &labels, "m"),
            Err(Error::UndefinedMetric("sensitivity"))
        ));
        let labels = strings(&["m", "m"]);
        assert!(matches!(
            evaluate(&labels, &labels, "m"),
            Err(Error::UndefinedMetric("specificity"))
        ));
        assert!(matches!(
            evaluate(&labels[..1], &labels, "m"),
            Err(Error::Dimension { .. })
        ));
    }

    #[test]
    fn optimize_examples() {
        let sep = labeled(
            4,
            vec![
                0.0, 1.0, 9.0, 9.0, 1.0, 0.0, 9.0, 9.0, 9.0, 9.0, 0.0, 1.0, 9.0, 9.0, 1.0, 0.0,
            ],
            &["a", "a", "b", "b"],
        );
        assert_eq!(optimize_weights(std::slice::from_ref(&sep), 0.05).unwrap(), vec![1.0]);

        // pairs items across classes
        let bad = labeled(
            4,
            vec![
                0.0, 9.0, 1.0, 9.0, 9.0, 0.0, 9.0, 1.0, 1.0, 9.0, 0.0, 9.0, 9.0, 1.0, 9.0, 0.0,
            ],
            &["a", "a", "b", "b"],
        );
        let w = optimize_weights(&[bad.clone(), sep.clone()], 0.05).unwrap();
        let combined = combine_matrices(&[bad, sep.clone()], &w).unwrap();
        assert_eq!(retrieval_accuracy(&combined).unwrap(), 1.0);

        let w = optimize_weights(&[sep.clone(), sep.clone()], 0.05).unwrap();
        let combined = combine_matrices(&[sep.clone(), sep.clone()], &w).unwrap();
        assert_eq!(
            retrieval_accuracy(&combined).unwrap(),
            retrieval_accuracy(&sep).unwrap()
        );
    }

    #[test]
    fn optimize_errors() {
        let m = DistanceMatrix::new(2, vec![0.0, 1.0, 1.0, 0.0]).unwrap();
        assert!(matches!(
            optimize_weights(std::slice::from_ref(&m), 0.05),
            Err(Error::MissingLabels)
        ));
        assert!(matches!(
            optimize_weights(std::slice::from_ref(&m), 0.0),
            Err(Error::InvalidArgument(_))
        ));
        assert!(matches!(optimize_weights(&[m], 1.5), Err(Error::InvalidArgument(_))));
        assert!(matches!(optimize_weights(&[], 0.1), Err(Error::EmptyInput)));
    }

    #[test]
    fn csv_round_trip() {
        let m = labeled(2, vec![0.0, 0.125, 0.125, 0.0], &["nevus", "melanoma"])
            .with_ids(strings(&["img1", "img,2"]))
            .unwrap();
        let text = m.to_csv_string().unwrap();
        assert_eq!(DistanceMatrix::read_csv(text.as_bytes()).unwrap(), m);

        let unlabeled = DistanceMatrix::new(1, vec![0.0]).unwrap();
        let text = unlabeled.to_csv_string().unwrap();
        assert_eq!(DistanceMatrix::read_csv(text.as_bytes()).unwrap(), unlabeled);

        assert!(DistanceMatrix::read_csv("a,b\nx,y\n0,1\n".as_bytes()).is_err());
        assert!(DistanceMatrix::read_csv("a,b\nx,y\n0,1\n1,q\n".as_bytes()).is_err());
    }
}
