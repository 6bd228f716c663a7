//! Exact bottleneck distance between finitized persistence diagrams.
//!
//! The distance is the smallest threshold `t` at which the two diagrams can
//! be matched with every pair costing at most `t`, where a point may also be
//! sent to the diagonal at cost half its persistence. The optimum is always
//! one of the pairwise costs or one of the diagonal costs, so the search runs
//! over those values with a bipartite-matching feasibility test.
//!
//! Feasibility at `t` only has to look at the points that cannot be sent to
//! the diagonal (half-persistence above `t`). Those "big" points must each be
//! matched to a partner within sup-distance `t`. A matching saturating the big
//! points of both sides exists iff one matching saturates the big points of
//! the left diagram and another saturates those of the right diagram
//! (Mendelsohn-Dulmage), so the test reduces to two one-sided maximum
//! matchings over small graphs.

use std::collections::VecDeque;

use crate::diagram::PersistenceDiagram;
use crate::error::{Error, Result};

/// Largest combined expanded size accepted by [`brute_force_bottleneck`].
pub const BRUTE_FORCE_LIMIT: usize = 8;

fn sup_distance(p: (f64, f64), q: (f64, f64)) -> f64 {
    (p.0 - q.0).abs().max((p.1 - q.1).abs())
}

fn diagonal_cost(p: (f64, f64)) -> f64 {
    (p.1 - p.0) / 2.0
}

/// Cost of pairing two cornerpoints: the smaller of moving one onto the other
/// and sending both to the diagonal.
pub fn point_cost(p: (f64, f64), q: (f64, f64)) -> Result<f64> {
    if [p.0, p.1, q.0, q.1].iter().any(|x| !x.is_finite()) {
        return Err(Error::NotFinitized);
    }
    Ok(sup_distance(p, q).min(diagonal_cost(p).max(diagonal_cost(q))))
}

fn expand(diagram: &PersistenceDiagram) -> Result<Vec<(f64, f64)>> {
    if diagram.has_cornerlines() {
        return Err(Error::NotFinitized);
    }
    Ok(diagram.expanded().collect())
}

/// Points of one diagram sorted by birth, for window queries.
struct SortedSide {
    points: Vec<(f64, f64)>,
    births: Vec<f64>,
}

impl SortedSide {
    fn new(mut points: Vec<(f64, f64)>) -> Self {
        points.sort_by(|a, b| a.0.total_cmp(&b.0).then(a.1.total_cmp(&b.1)));
        let births = points.iter().map(|p| p.0).collect();
        Self { points, births }
    }

    /// Indices of points whose birth lies in `[b - radius, b + radius]`.
    fn birth_window(&self, b: f64, radius: f64) -> std::ops::Range<usize> {
        let lo = self.births.partition_point(|&x| x < b - radius);
        let hi = self.births.partition_point(|&x| x <= b + radius);
        lo..hi.max(lo)
    }

    /// Sup-distance from `p` to its nearest point, capped at `cap`.
    fn nearest(&self, p: (f64, f64), cap: f64) -> f64 {
        let mut best = cap;
        let start = self.births.partition_point(|&x| x < p.0);
        for q in self.points[start..].iter() {
            if q.0 - p.0 >= best {
                break;
            }
            best = best.min(sup_distance(p, *q));
        }
        for q in self.points[..start].iter().rev() {
            if p.0 - q.0 >= best {
                break;
            }
            best = best.min(sup_distance(p, *q));
        }
        best
    }

    /// Indices of points within sup-distance `t` of `p`.
    fn neighbors(&self, p: (f64, f64), t: f64) -> impl Iterator<Item = usize> + '_ {
        self.birth_window(p.0, t)
            .filter(move |&j| sup_distance(p, self.points[j]) <= t)
    }
}

/// A pair of expanded diagrams prepared for threshold search.
pub struct MatchingInstance {
    left: SortedSide,
    right: SortedSide,
}

impl MatchingInstance {
    pub fn new(d: &PersistenceDiagram, d_prime: &PersistenceDiagram) -> Result<Self> {
        Ok(Self {
            left: SortedSide::new(expand(d)?),
            right: SortedSide::new(expand(d_prime)?),
        })
    }

    pub fn left(&self) -> &[(f64, f64)] {
        &self.left.points
    }

    pub fn right(&self) -> &[(f64, f64)] {
        &self.right.points
    }

    /// Every pairwise cost together with every diagonal cost, ascending and
    /// deduplicated. Quadratic in size; the search itself never builds it.
    pub fn candidate_thresholds(&self) -> Vec<f64> {
        let mut out: Vec<f64> = self
            .left()
            .iter()
            .chain(self.right())
            .map(|&p| diagonal_cost(p))
            .collect();
        for &p in self.left() {
            for &q in self.right() {
                out.push(sup_distance(p, q).min(diagonal_cost(p).max(diagonal_cost(q))));
            }
        }
        sort_dedup(&mut out);
        out
    }

    /// Whether a matching of cost at most `t` exists.
    pub fn is_feasible(&self, t: f64) -> bool {
        OneSided::new(&self.left, &self.right).saturates(t) && OneSided::new(&self.right, &self.left).saturates(t)
    }

    /// Every point either goes to the diagonal or to some partner, so the
    /// distance is at least `max_p min(diagonal cost, nearest sup-distance)`.
    pub fn lower_bound(&self) -> f64 {
        let side = |from: &SortedSide, to: &SortedSide| {
            from.points
                .iter()
                .map(|&p| to.nearest(p, diagonal_cost(p)))
                .fold(0.0, f64::max)
        };
        side(&self.left, &self.right).max(side(&self.right, &self.left))
    }

    pub fn bottleneck(&self) -> f64 {
        let mut diagonal: Vec<f64> = self
            .left()
            .iter()
            .chain(self.right())
            .map(|&p| diagonal_cost(p))
            .collect();
        sort_dedup(&mut diagonal);
        if diagonal.is_empty() {
            return 0.0;
        }
        let floor = self.lower_bound();
        let mut forward = OneSided::new(&self.left, &self.right);
        let mut backward = OneSided::new(&self.right, &self.left);

        // the largest diagonal cost leaves no big point, so it is feasible
        let start = diagonal.partition_point(|&c| c < floor);
        let first = start
            + first_feasible(&diagonal[start..], true, |t| {
                forward.saturates(t) && backward.saturates(t)
            })
            .unwrap_or(diagonal.len() - 1 - start);
        let hi = diagonal[first];
        let lo = if first == 0 {
            f64::NEG_INFINITY
        } else {
            diagonal[first - 1]
        };

        // Strictly between lo and hi the big points are those with diagonal
        // cost >= hi, and the only remaining candidates are their
        // sup-distances to partners.
        let mut inner = Vec::new();
        forward.cache_neighbors(lo.max(floor), hi, &mut inner);
        backward.cache_neighbors(lo.max(floor), hi, &mut inner);
        sort_dedup(&mut inner);
        match first_feasible(&inner, false, |t| forward.saturates(t) && backward.saturates(t)) {
            Some(i) => inner[i],
            None => hi,
        }
    }
}

fn sort_dedup(values: &mut Vec<f64>) {
    values.sort_by(f64::total_cmp);
    values.dedup();
}

/// Smallest index whose value passes a monotone predicate.
///
/// With `gallop`, probes walk upward from the start in doubling steps before
/// bisecting, so that most probes stay at small thresholds where the
/// matching graphs are sparse.
fn first_feasible(sorted: &[f64], gallop: bool, mut feasible: impl FnMut(f64) -> bool) -> Option<usize> {
    let n = sorted.len();
    // invariant: everything below `lo` is infeasible, `hi` is feasible or n
    let (mut lo, mut hi) = (0, n);
    let mut step = 1;
    let mut probe = 0;
    while gallop && probe < n {
        if feasible(sorted[probe]) {
            hi = probe;
            break;
        }
        lo = probe + 1;
        probe += step;
        step *= 2;
    }
    while lo < hi {
        let mid = lo + (hi - lo) / 2;
        if feasible(sorted[mid]) {
            hi = mid;
        } else {
            lo = mid + 1;
        }
    }
    (lo < n).then_some(lo)
}

const UNMATCHED: usize = usize::MAX;

/// Matches the big points of `from` into `to`, keeping the last matching as a
/// warm start for the next threshold.
struct OneSided<'a> {
    from: &'a SortedSide,
    to: &'a SortedSide,
    partner: Vec<usize>,
    /// Per point of `from`: neighbors in `to` sorted by sup-distance, built
    /// once the big set is fixed.
    cache: Vec<Option<Vec<(f64, usize)>>>,
}

impl<'a> OneSided<'a> {
    fn new(from: &'a SortedSide, to: &'a SortedSide) -> Self {
        Self {
            from,
            to,
            partner: vec![UNMATCHED; from.points.len()],
            cache: vec![None; from.points.len()],
        }
    }

    /// Caches the neighbors of every point with diagonal cost `>= hi` within
    /// sup-distance below `hi`, pushing the distances in `[lo, hi)` to `out`.
    fn cache_neighbors(&mut self, lo: f64, hi: f64, out: &mut Vec<f64>) {
        for (i, &p) in self.from.points.iter().enumerate() {
            if diagonal_cost(p) < hi {
                continue;
            }
            let mut row: Vec<(f64, usize)> = self
                .to
                .birth_window(p.0, hi)
                .map(|j| (sup_distance(p, self.to.points[j]), j))
                .filter(|&(s, _)| s < hi)
                .collect();
            row.sort_by(|a, b| a.0.total_cmp(&b.0).then(a.1.cmp(&b.1)));
            out.extend(row.iter().map(|&(s, _)| s).filter(|&s| s >= lo));
            self.cache[i] = Some(row);
        }
    }

    fn row(&self, i: usize, t: f64) -> Vec<usize> {
        match &self.cache[i] {
            Some(row) => {
                let end = row.partition_point(|&(s, _)| s <= t);
                row[..end].iter().map(|&(_, j)| j).collect()
            }
            None => self.to.neighbors(self.from.points[i], t).collect(),
        }
    }

    /// Whether every point of `from` with diagonal cost above `t` can be
    /// matched to a distinct point of `to` within sup-distance `t`.
    fn saturates(&mut self, t: f64) -> bool {
        let big: Vec<usize> = (0..self.from.points.len())
            .filter(|&i| diagonal_cost(self.from.points[i]) > t)
            .collect();
        if big.len() > self.to.points.len() {
            return false;
        }
        let mut adjacency = Vec::with_capacity(big.len());
        for &i in &big {
            let row = self.row(i, t);
            if row.is_empty() {
                return false;
            }
            adjacency.push(row);
        }
        // carry over the previous partners that are still within reach
        let mut taken = vec![false; self.to.points.len()];
        let mut matching: Vec<usize> = big
            .iter()
            .map(|&i| {
                let j = self.partner[i];
                if j != UNMATCHED && !taken[j] && sup_distance(self.from.points[i], self.to.points[j]) <= t {
                    taken[j] = true;
                    j
                } else {
                    UNMATCHED
                }
            })
            .collect();
        let size = hopcroft_karp(&adjacency, self.to.points.len(), &mut matching);
        self.partner.iter_mut().for_each(|p| *p = UNMATCHED);
        for (&i, &j) in big.iter().zip(&matching) {
            self.partner[i] = j;
        }
        size == big.len()
    }
}

/// Hopcroft-Karp maximum matching size. `adjacency[i]` lists the right
/// vertices adjacent to left vertex `i`.
pub fn max_bipartite_matching(adjacency: &[Vec<usize>], right_size: usize) -> usize {
    let mut matching = vec![UNMATCHED; adjacency.len()];
    hopcroft_karp(adjacency, right_size, &mut matching)
}

/// Grows `match_left` (a valid partial matching) to a maximum matching and
/// returns its size.
fn hopcroft_karp(adjacency: &[Vec<usize>], right_size: usize, match_left: &mut [usize]) -> usize {
    let n = adjacency.len();
    let mut match_right = vec![UNMATCHED; right_size];
    let mut size = 0;
    for (i, &j) in match_left.iter().enumerate() {
        if j != UNMATCHED {
            match_right[j] = i;
            size += 1;
        }
    }

    // greedy start
    for (i, row) in adjacency.iter().enumerate() {
        if match_left[i] != UNMATCHED {
            continue;
        }
        if let Some(&j) = row.iter().find(|&&j| match_right[j] == UNMATCHED) {
            match_left[i] = j;
            match_right[j] = i;
            size += 1;
        }
    }

    let mut dist = vec![0usize; n];
    let mut queue = VecDeque::new();
    let mut next_edge = vec![0usize; n];
    let mut stack: Vec<usize> = Vec::new();
    while size < n {
        // BFS layering from free left vertices
        queue.clear();
        for i in 0..n {
            if match_left[i] == UNMATCHED {
                dist[i] = 0;
                queue.push_back(i);
            } else {
                dist[i] = usize::MAX;
            }
        }
        let mut found = false;
        while let Some(i) = queue.pop_front() {
            for &j in &adjacency[i] {
                let k = match_right[j];
                if k == UNMATCHED {
                    found = true;
                } else if dist[k] == usize::MAX {
                    dist[k] = dist[i] + 1;
                    queue.push_back(k);
                }
            }
        }
        if !found {
            break;
        }

        // iterative DFS along the layers
        next_edge.iter_mut().for_each(|e| *e = 0);
        for root in 0..n {
            if match_left[root] != UNMATCHED {
                continue;
            }
            stack.clear();
            stack.push(root);
            while let Some(&i) = stack.last() {
                if next_edge[i] == adjacency[i].len() {
                    dist[i] = usize::MAX;
                    stack.pop();
                    continue;
                }
                let j = adjacency[i][next_edge[i]];
                next_edge[i] += 1;
                let k = match_right[j];
                if k == UNMATCHED {
                    // flip the path held on the stack
                    let mut right = j;
                    while let Some(left) = stack.pop() {
                        let previous = match_left[left];
                        match_left[left] = right;
                        match_right[right] = left;
                        right = previous;
                    }
                    size += 1;
                    break;
                }
                if dist[k] != usize::MAX && dist[k] == dist[i] + 1 {
                    stack.push(k);
                }
            }
        }
    }
    size
}

/// Exact bottleneck distance. Both diagrams must be finitized.
pub fn bottleneck_distance(d: &PersistenceDiagram, d_prime: &PersistenceDiagram) -> Result<f64> {
    Ok(MatchingInstance::new(d, d_prime)?.bottleneck())
}

/// Exhaustive minimization over all partial matchings; for instances whose
/// expanded sizes sum to at most [`BRUTE_FORCE_LIMIT`].
pub fn brute_force_bottleneck(d: &PersistenceDiagram, d_prime: &PersistenceDiagram) -> Result<f64> {
    let left = expand(d)?;
    let right = expand(d_prime)?;
    let size = left.len() + right.len();
    if size > BRUTE_FORCE_LIMIT {
        return Err(Error::TooLarge {
            size,
            limit: BRUTE_FORCE_LIMIT,
        });
    }

    fn search(i: usize, used: &mut [bool], left: &[(f64, f64)], right: &[(f64, f64)], acc: f64, best: &mut f64) {
        if i == left.len() {
            let rest = right
                .iter()
                .zip(used.iter())
                .filter(|(_, &u)| !u)
                .map(|(&q, _)| diagonal_cost(q))
                .fold(acc, f64::max);
            *best = best.min(rest);
            return;
        }
        let p = left[i];
        search(i + 1, used, left, right, acc.max(diagonal_cost(p)), best);
        for j in 0..right.len() {
            if !used[j] {
                used[j] = true;
                let cost = sup_distance(p, right[j]).min(diagonal_cost(p).max(diagonal_cost(right[j])));
                search(i + 1, used, left, right, acc.max(cost), best);
                used[j] = false;
            }
        }
    }

    let mut best = f64::INFINITY;
    let mut used = vec![false; right.len()];
    search(0, &mut used, &left, &right, 0.0, &mut best);
    Ok(best)
}

#[cfg(test)]
mod tests {
    use super::*;

    fn diagram(pairs: &[(f64, f64)]) -> PersistenceDiagram {
        PersistenceDiagram::from_pairs(pairs).unwrap()
    }

    #[test]
    fn point_cost_examples() {
        assert_eq!(point_cost((0.1, 0.7), (0.1, 0.7)).unwrap(), 0.0);
        assert_eq!(point_cost((0.0, 0.2), (0.5, 0.7)).unwrap(), 0.1);
        let c = point_cost((0.0, 1.0), (0.1, 0.9)).unwrap();
        assert!((c - 0.1).abs() < 1e-15);
        assert!(matches!(
            point_cost((0.0, f64::INFINITY), (0.1, 0.9)),
            Err(Error::NotFinitized)
        ));
    }

    #[test]
    fn bottleneck_examples() {
        let d = diagram(&[(0.0, 1.0), (0.2, 0.3)]);
        assert_eq!(bottleneck_distance(&d, &d).unwrap(), 0.0);
        let single = diagram(&[(0.0, 1.0)]);
        let empty = PersistenceDiagram::empty();
        assert_eq!(bottleneck_distance(&single, &empty).unwrap(), 0.5);
        assert_eq!(bottleneck_distance(&empty, &single).unwrap(), 0.5);
        let other = diagram(&[(0.0, 0.8)]);
        let b = bottleneck_distance(&single, &other).unwrap();
        assert!((b - 0.2).abs() < 1e-15);
        assert_eq!(b, 1.0 - 0.8);
        assert_eq!(bottleneck_distance(&empty, &empty).unwrap(), 0.0);
    }

    #[test]
    fn brute_force_examples() {
        let empty = PersistenceDiagram::empty();
        assert_eq!(brute_force_bottleneck(&empty, &empty).unwrap(), 0.0);
        let single = diagram(&[(0.0, 1.0)]);
        assert_eq!(brute_force_bottleneck(&single, &empty).unwrap(), 0.5);
        let two = diagram(&[(0.0, 0.4), (0.0, 1.0)]);
        assert_eq!(brute_force_bottleneck(&two, &single).unwrap(), 0.2);
        assert_eq!(bottleneck_distance(&two, &single).unwrap(), 0.2);
    }

    #[test]
    fn brute_force_size_limit() {
        let big = PersistenceDiagram::new([crate::Cornerpoint::new(0.0, 1.0, 5).unwrap()]);
        assert!(matches!(
            brute_force_bottleneck(&big, &big),
            Err(Error::TooLarge { size: 10, .. })
        ));
    }

    #[test]
    fn cornerlines_are_rejected() {
        let d = diagram(&[(0.0, f64::INFINITY)]);
        assert!(matches!(bottleneck_distance(&d, &d), Err(Error::NotFinitized)));
        assert!(matches!(brute_force_bottleneck(&d, &d), Err(Error::NotFinitized)));
    }

    #[test]
    fn multiplicities_are_expanded() {
        let d = PersistenceDiagram::new([crate::Cornerpoint::new(0.0, 1.0, 2).unwrap()]);
        let e = diagram(&[(0.0, 1.0)]);
        assert_eq!(bottleneck_distance(&d, &e).unwrap(), 0.5);
        assert_eq!(brute_force_bottleneck(&d, &e).unwrap(), 0.5);
    }

    #[test]
    fn hopcroft_karp_small_graphs() {
        assert_eq!(max_bipartite_matching(&[], 3), 0);
        assert_eq!(max_bipartite_matching(&[vec![0, 1], vec![0], vec![1, 2]], 3), 3);
        assert_eq!(max_bipartite_matching(&[vec![0], vec![0], vec![0]], 1), 1);
        // greedy picks 0-0 first; augmenting path needed for a perfect matching
        assert_eq!(max_bipartite_matching(&[vec![0, 1], vec![0]], 2), 2);
        assert_eq!(
            max_bipartite_matching(&[vec![0, 1], vec![0, 2], vec![1], vec![2, 3]], 4),
            4
        );
    }
}
