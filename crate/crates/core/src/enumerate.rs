//! Lazy nonincreasing enumeration and threshold counting of the scaled
//! product eigenvalues over the admissible index set.
//!
//! Both operations work in log-space. Enumeration is a best-first frontier
//! search: seed with the coordinatewise-minimal admissible index, repeatedly
//! pop the largest product, and push the admissible unit increments of the
//! popped index. Every admissible index is reachable this way, and products
//! only shrink along increments, so the pop order is globally nonincreasing.
//! Counting is a depth-first scan over coordinates that prunes a prefix as
//! soon as even the most optimistic completion falls below the threshold.

use std::collections::{BinaryHeap, HashSet};

use thiserror::Error;

use crate::problem::ProblemSpec;
use crate::spectrum::Spectrum;
use crate::symmetry::{GroupKind, MultiIndex, SymmetrySpec};

/// Two log-values within this absolute distance count as tied; ties are
/// resolved lexicographically on the multi-index. Threshold comparisons
/// treat "within tolerance" as "not above", so borderline eigenvalues are
/// never counted - the conservative direction for error guarantees.
pub const TIE_LOG_TOL: f64 = 1e-12;

/// Hard cap on nodes visited by [`count_above`] before reporting overflow.
const COUNT_NODE_CAP: u64 = 1_000_000_000;

/// Cap on extra boundary items drained while resolving ties at the cut-off
/// rank of [`enumerate_top`].
const TIE_DRAIN_CAP: usize = 10_000;

#[derive(Error, Debug, Clone, PartialEq)]
pub enum EnumError {
    #[error("multi-index length {got} does not match dimension {expected}")]
    IndexLengthMismatch { got: usize, expected: usize },
    #[error("threshold must be positive and finite (got {0})")]
    InvalidThreshold(f64),
    #[error("count exceeded the visited-node cap")]
    Overflow,
}

/// One enumerated eigenvalue: the index, the scaled product value, and its
/// natural logarithm (`-inf` for an exact zero).
#[derive(Debug, Clone, PartialEq)]
pub struct EnumItem {
    pub index: MultiIndex,
    pub value: f64,
    pub logvalue: f64,
}

impl EnumItem {
    /// CSV row: `value,logvalue,index` with the index space-separated.
    pub fn to_csv_row(&self) -> String {
        let idx: Vec<String> = self.index.iter().map(|i| i.to_string()).collect();
        format!("{:.11e},{:.11e},{}", self.value, self.logvalue, idx.join(" "))
    }
}

/// Lazily grown table of `ln λ_m`.
struct LogEigs<'a> {
    spectrum: &'a Spectrum,
    logs: Vec<f64>,
}

impl<'a> LogEigs<'a> {
    fn new(spectrum: &'a Spectrum) -> Self {
        LogEigs { spectrum, logs: Vec::new() }
    }

    fn log(&mut self, m: u32) -> f64 {
        let i = m as usize - 1;
        while self.logs.len() <= i {
            let v = self.spectrum.eigenvalue(self.logs.len() as u32 + 1);
            self.logs.push(if v > 0.0 { v.ln() } else { f64::NEG_INFINITY });
        }
        self.logs[i]
    }
}

/// Scaled product eigenvalue `s · Π_l λ_{k_l}`, as `exp(ln s + Σ ln λ)` with
/// a zero short-circuit.
pub fn product_eigenvalue(problem: &ProblemSpec, index: &[u32]) -> Result<f64, EnumError> {
    if index.len() != problem.d() {
        return Err(EnumError::IndexLengthMismatch { got: index.len(), expected: problem.d() });
    }
    let mut log = problem.scaling().ln();
    for &k in index {
        let v = problem.spectrum().eigenvalue(k);
        if v == 0.0 {
            return Ok(0.0);
        }
        log += v.ln();
    }
    Ok(log.exp())
}

#[derive(Debug)]
struct Node {
    logvalue: f64,
    index: MultiIndex,
}

impl PartialEq for Node {
    fn eq(&self, other: &Self) -> bool {
        self.cmp(other) == std::cmp::Ordering::Equal
    }
}

impl Eq for Node {}

impl Ord for Node {
    fn cmp(&self, other: &Self) -> std::cmp::Ordering {
        // max-heap: larger logvalue first, exact ties lexicographically small
        self.logvalue
            .total_cmp(&other.logvalue)
            .then_with(|| other.index.cmp(&self.index))
    }
}

impl PartialOrd for Node {
    fn partial_cmp(&self, other: &Self) -> Option<std::cmp::Ordering> {
        Some(self.cmp(other))
    }
}

/// Deterministic output ordering: nonincreasing by log-value, with runs that
/// lie within [`TIE_LOG_TOL`] of their leader re-sorted lexicographically.
fn sort_with_tie_rule(items: &mut [(f64, MultiIndex)]) {
    items.sort_by(|a, b| b.0.total_cmp(&a.0).then_with(|| a.1.cmp(&b.1)));
    let mut start = 0;
    while start < items.len() {
        let head = items[start].0;
        let mut end = start + 1;
        while end < items.len() && head - items[end].0 <= TIE_LOG_TOL {
            end += 1;
        }
        items[start..end].sort_by(|a, b| a.1.cmp(&b.1));
        start = end;
    }
}

/// The `k` largest positive product eigenvalues over the admissible index
/// set, nonincreasing, ties broken lexicographically. May return fewer than
/// `k` items when the set holds fewer positive products.
pub fn enumerate_top(problem: &ProblemSpec, k: usize) -> Vec<EnumItem> {
    let mut eigs = LogEigs::new(problem.spectrum());
    let raw = best_first_top(
        problem.symmetry(),
        k,
        problem.scaling().ln(),
        &mut |_coord, m| eigs.log(m),
    );
    raw.into_iter()
        .map(|(logvalue, index)| EnumItem { index, value: logvalue.exp(), logvalue })
        .collect()
}

/// Generic best-first top-`k` over the admissible set of `symmetry`, with
/// per-coordinate log-values supplied by `log_of` (nonincreasing in the
/// index for every coordinate; `-inf` marks a zero that prunes the branch).
pub(crate) fn best_first_top(
    symmetry: &SymmetrySpec,
    k: usize,
    log_scale: f64,
    log_of: &mut dyn FnMut(usize, u32) -> f64,
) -> Vec<(f64, MultiIndex)> {
    if k == 0 {
        return Vec::new();
    }
    let d = symmetry.d();
    let seed = symmetry.minimal_element();
    let seed_log: f64 = log_scale + (0..d).map(|l| log_of(l, seed[l])).sum::<f64>();
    if seed_log == f64::NEG_INFINITY {
        return Vec::new();
    }

    let mut heap = BinaryHeap::new();
    let mut visited: HashSet<MultiIndex> = HashSet::new();
    visited.insert(seed.clone());
    heap.push(Node { logvalue: seed_log, index: seed });

    let mut out: Vec<(f64, MultiIndex)> = Vec::with_capacity(k);
    let mut drained_extra = 0usize;
    while let Some(node) = heap.pop() {
        // once k items are taken, keep draining only while the next value
        // still ties with the k-th, so the lexicographic cut is exact
        if out.len() >= k {
            let boundary = out[k - 1].0;
            if boundary - node.logvalue > TIE_LOG_TOL || drained_extra >= TIE_DRAIN_CAP {
                break;
            }
            drained_extra += 1;
        }
        for l in 0..d {
            let mut next = node.index.clone();
            next[l] += 1;
            if !symmetry.contains(&next).expect("length preserved") {
                continue;
            }
            if visited.contains(&next) {
                continue;
            }
            // recompute from scratch so the value does not depend on the
            // discovery path
            let logvalue = log_scale + (0..d).map(|j| log_of(j, next[j])).sum::<f64>();
            if logvalue == f64::NEG_INFINITY {
                continue;
            }
            visited.insert(next.clone());
            heap.push(Node { logvalue, index: next });
        }
        out.push((node.logvalue, node.index));
    }

    sort_with_tie_rule(&mut out);
    out.truncate(k);
    out
}

/// `#{ k in the admissible set : s · Π λ_{k_l} > threshold }`.
///
/// Counts by coordinate-wise depth-first search with optimistic-completion
/// pruning; aborts with [`EnumError::Overflow`] past 10⁹ visited nodes.
pub fn count_above(problem: &ProblemSpec, threshold: f64) -> Result<u64, EnumError> {
    count_above_capped(problem, threshold, COUNT_NODE_CAP)
}

/// [`count_above`] with a caller-chosen visited-node cap.
pub fn count_above_capped(
    problem: &ProblemSpec,
    threshold: f64,
    node_cap: u64,
) -> Result<u64, EnumError> {
    if !(threshold > 0.0 && threshold.is_finite()) {
        return Err(EnumError::InvalidThreshold(threshold));
    }
    count_above_log(
        problem.spectrum(),
        problem.symmetry(),
        threshold.ln() - problem.scaling().ln(),
        node_cap,
    )
}

/// Count of admissible indices with `Σ_l ln λ_{k_l} > log_threshold`, the
/// scaling already folded into the threshold by the caller.
pub(crate) fn count_above_log(
    spectrum: &Spectrum,
    symmetry: &SymmetrySpec,
    log_threshold: f64,
    node_cap: u64,
) -> Result<u64, EnumError> {
    let d = symmetry.d();
    let (group_of, kinds) = symmetry.coordinate_groups();
    let mut eigs = LogEigs::new(spectrum);

    // remaining[g][l]: members of group g among coordinates l..d
    let n_groups = kinds.len();
    let mut remaining = vec![vec![0u32; d + 1]; n_groups];
    let mut free_after = vec![0u32; d + 1];
    for l in (0..d).rev() {
        for row in remaining.iter_mut() {
            row[l] = row[l + 1];
        }
        free_after[l] = free_after[l + 1];
        match group_of[l] {
            Some(g) => remaining[g][l] += 1,
            None => free_after[l] += 1,
        }
    }

    // mutable table of each group's last assigned value during the descent
    let mut last = vec![0u32; n_groups];

    struct Dfs<'a, 'b> {
        d: usize,
        group_of: &'a [Option<usize>],
        kinds: &'a [GroupKind],
        remaining: &'a [Vec<u32>],
        free_after: &'a [u32],
        eigs: &'a mut LogEigs<'b>,
        log_threshold: f64,
        node_cap: u64,
        visited: u64,
        count: u64,
    }

    impl Dfs<'_, '_> {
        /// Most optimistic log-contribution of coordinates `from..d`, given
        /// the current per-group state: free coordinates take the top value,
        /// symmetric groups repeat their last value, antisymmetric groups
        /// climb one step per remaining member.
        fn suffix_bound(&mut self, from: usize, last: &[u32]) -> f64 {
            let mut bound = self.free_after[from] as f64 * self.eigs.log(1);
            for (g, &last_value) in last.iter().enumerate() {
                let r = self.remaining[g][from];
                if r == 0 {
                    continue;
                }
                match self.kinds[g] {
                    GroupKind::Sym => bound += r as f64 * self.eigs.log(last_value.max(1)),
                    GroupKind::Antisym => {
                        for i in 1..=r {
                            bound += self.eigs.log(last_value + i);
                        }
                    }
                }
                if bound == f64::NEG_INFINITY {
                    return bound;
                }
            }
            bound
        }

        fn descend(&mut self, l: usize, prefix_log: f64, last: &mut [u32]) -> Result<(), EnumError> {
            if l == self.d {
                self.count += 1;
                return Ok(());
            }
            let m_min = match self.group_of[l] {
                None => 1,
                Some(g) => match self.kinds[g] {
                    GroupKind::Sym => last[g].max(1),
                    GroupKind::Antisym => last[g] + 1,
                },
            };
            let mut m = m_min;
            loop {
                self.visited += 1;
                if self.visited > self.node_cap {
                    return Err(EnumError::Overflow);
                }
                let step = self.eigs.log(m);
                if step == f64::NEG_INFINITY {
                    break;
                }
                let with_m = prefix_log + step;
                let saved = self.group_of[l].map(|g| {
                    let old = last[g];
                    last[g] = m;
                    (g, old)
                });
                let optimistic = with_m + self.suffix_bound(l + 1, last);
                // strict ">" with the tie tolerance counted as "not above"
                if optimistic <= self.log_threshold + TIE_LOG_TOL {
                    if let Some((g, old)) = saved {
                        last[g] = old;
                    }
                    break; // values only shrink as m grows
                }
                self.descend(l + 1, with_m, last)?;
                if let Some((g, old)) = saved {
                    last[g] = old;
                }
                m += 1;
            }
            Ok(())
        }
    }

    let mut dfs = Dfs {
        d,
        group_of: &group_of,
        kinds: &kinds,
        remaining: &remaining,
        free_after: &free_after,
        eigs: &mut eigs,
        log_threshold,
        node_cap,
        visited: 0,
        count: 0,
    };
    dfs.descend(0, 0.0, &mut last)?;
    Ok(dfs.count)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::problem::ErrorCriterion;
    use crate::symmetry::SymmetrySpec;

    fn problem(spectrum: Spectrum, d: usize, scaling: f64, symmetry: SymmetrySpec) -> ProblemSpec {
        ProblemSpec::new(spectrum, d, scaling, symmetry, ErrorCriterion::Absolute).unwrap()
    }

    fn geometric_half() -> Spectrum {
        Spectrum::geometric(0.5, 0.5).unwrap()
    }

    #[test]
    fn product_eigenvalue_examples() {
        let p = problem(
            Spectrum::finite(vec![1.0, 0.5, 0.25]).unwrap(),
            2,
            1.0,
            SymmetrySpec::entire(2).unwrap(),
        );
        assert!((product_eigenvalue(&p, &[2, 3]).unwrap() - 0.125).abs() < 1e-15);

        let p = problem(
            Spectrum::finite(vec![1.0, 0.5]).unwrap(),
            3,
            4.0,
            SymmetrySpec::entire(3).unwrap(),
        );
        assert!((product_eigenvalue(&p, &[1, 1, 1]).unwrap() - 4.0).abs() < 1e-12);

        let p = problem(geometric_half(), 2, 1.0, SymmetrySpec::entire(2).unwrap());
        assert!((product_eigenvalue(&p, &[1, 2]).unwrap() - 0.125).abs() < 1e-15);

        assert!(product_eigenvalue(&p, &[1, 2, 3]).is_err());
    }

    #[test]
    fn enumerate_top_geometric_entire() {
        let p = problem(geometric_half(), 2, 1.0, SymmetrySpec::entire(2).unwrap());
        let top = enumerate_top(&p, 4);
        let values: Vec<f64> = top.iter().map(|it| it.value).collect();
        let indices: Vec<MultiIndex> = top.iter().map(|it| it.index.clone()).collect();
        for (got, want) in values.iter().zip([0.25, 0.125, 0.125, 0.0625]) {
            assert!((got - want).abs() < 1e-15, "{values:?}");
        }
        // (1,3), (2,2), (3,1) tie at 1/16; the lexicographic rule ranks
        // (1,3) first
        assert_eq!(indices, vec![vec![1, 1], vec![1, 2], vec![2, 1], vec![1, 3]]);
    }

    #[test]
    fn enumerate_top_exhausts_finite_symmetric_set() {
        let spec = Spectrum::finite(vec![1.0, 1.0]).unwrap();
        let p = problem(spec.clone(), 3, 1.0, SymmetrySpec::full_sym(3).unwrap());
        let top = enumerate_top(&p, 10);
        assert_eq!(top.len(), 4);
        assert!(top.iter().all(|it| (it.value - 1.0).abs() < 1e-15));
        let indices: Vec<MultiIndex> = top.iter().map(|it| it.index.clone()).collect();
        assert_eq!(
            indices,
            vec![vec![1, 1, 1], vec![1, 1, 2], vec![1, 2, 2], vec![2, 2, 2]]
        );

        let p = problem(spec, 3, 1.0, SymmetrySpec::full_antisym(3).unwrap());
        assert!(enumerate_top(&p, 5).is_empty());
    }

    #[test]
    fn count_above_geometric_all_modes() {
        let t = 1.0 / 32.0;
        let entire = problem(geometric_half(), 2, 1.0, SymmetrySpec::entire(2).unwrap());
        assert_eq!(count_above(&entire, t).unwrap(), 6);
        let sym = problem(geometric_half(), 2, 1.0, SymmetrySpec::full_sym(2).unwrap());
        assert_eq!(count_above(&sym, t).unwrap(), 4);
        let asy = problem(geometric_half(), 2, 1.0, SymmetrySpec::full_antisym(2).unwrap());
        assert_eq!(count_above(&asy, t).unwrap(), 2);
    }

    #[test]
    fn count_matches_enumeration_between_values() {
        let p = problem(geometric_half(), 3, 2.0, SymmetrySpec::full_sym(3).unwrap());
        let top = enumerate_top(&p, 40);
        for w in top.windows(2) {
            if w[0].value - w[1].value > 1e-13 {
                let t = 0.5 * (w[0].value + w[1].value);
                let n = count_above(&p, t).unwrap();
                let expected = top.iter().filter(|it| it.value > t).count() as u64;
                assert_eq!(n, expected, "threshold {t}");
            }
        }
    }

    #[test]
    fn domination_chain_under_symmetry() {
        let spec = Spectrum::finite(vec![0.9, 0.7, 0.2, 0.1]).unwrap();
        for d in 2..=4usize {
            for t in [0.5, 0.1, 0.01, 0.001] {
                let ent =
                    count_above(&problem(spec.clone(), d, 1.0, SymmetrySpec::entire(d).unwrap()), t)
                        .unwrap();
                let sym = count_above(
                    &problem(spec.clone(), d, 1.0, SymmetrySpec::full_sym(d).unwrap()),
                    t,
                )
                .unwrap();
                let asy = count_above(
                    &problem(spec.clone(), d, 1.0, SymmetrySpec::full_antisym(d).unwrap()),
                    t,
                )
                .unwrap();
                assert!(asy <= sym && sym <= ent, "d={d} t={t}: {asy} {sym} {ent}");
            }
        }
    }

    #[test]
    fn mixed_groups_count() {
        // {1,2} antisym, {3} free, spectrum with 3 positive values
        let spec = Spectrum::finite(vec![1.0, 1.0, 1.0]).unwrap();
        let sym =
            SymmetrySpec::with_groups(3, vec![(vec![1, 2], GroupKind::Antisym)]).unwrap();
        let p = problem(spec, 3, 1.0, sym);
        // pairs (1,2),(1,3),(2,3) × free 1..3 = 9
        assert_eq!(count_above(&p, 0.5).unwrap(), 9);
        let top = enumerate_top(&p, 100);
        assert_eq!(top.len(), 9);
        assert_eq!(top[0].index, vec![1, 2, 1]);
    }

    #[test]
    fn scaling_shifts_counts() {
        let p = problem(geometric_half(), 2, 8.0, SymmetrySpec::entire(2).unwrap());
        // products scaled by 8: threshold 8/32 = 1/4 leaves the same count
        assert_eq!(count_above(&p, 0.25).unwrap(), 6);
    }
}
