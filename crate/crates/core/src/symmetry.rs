//! Coordinate symmetry structure: (anti)symmetric groups, the admissible
//! multi-index set, multiplicity counts, and symmetrizer expansions.
//!
//! A [`SymmetrySpec`] partitions a subset of the `d` coordinates into
//! disjoint groups, each either symmetric or antisymmetric. The admissible
//! index set it induces contains exactly the multi-indices that are
//! nondecreasing along each symmetric group and strictly increasing along
//! each antisymmetric group; those index the orthonormal basis of the
//! projected subspace.

use serde::{Deserialize, Serialize};
use thiserror::Error;

/// A `d`-variate index with 1-based entries.
pub type MultiIndex = Vec<u32>;

#[derive(Error, Debug, Clone, PartialEq)]
pub enum SymmetryError {
    #[error("dimension must be at least 1")]
    ZeroDimension,
    #[error("group coordinate {0} is outside 1..=d")]
    CoordinateOutOfRange(usize),
    #[error("coordinate {0} appears in more than one group")]
    OverlappingGroups(usize),
    #[error("groups must be nonempty")]
    EmptyGroup,
    #[error("group of size {0} exceeds the supported limit of 8 for symmetrizer expansion")]
    GroupTooLarge(usize),
    #[error("multi-index length {got} does not match dimension {expected}")]
    IndexLengthMismatch { got: usize, expected: usize },
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum GroupKind {
    Sym,
    Antisym,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct Group {
    /// 0-based coordinate positions, sorted ascending.
    pub coords: Vec<usize>,
    pub kind: GroupKind,
}

/// Symmetry structure on `d` coordinates.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
#[serde(try_from = "SymmetryRepr", into = "SymmetryRepr")]
pub struct SymmetrySpec {
    d: usize,
    groups: Vec<Group>,
}

/// Wire format: 1-based coordinates, as in the CLI JSON.
#[derive(Serialize, Deserialize)]
struct SymmetryRepr {
    d: usize,
    groups: Vec<GroupRepr>,
}

#[derive(Serialize, Deserialize)]
struct GroupRepr {
    coords: Vec<usize>,
    kind: GroupKind,
}

impl TryFrom<SymmetryRepr> for SymmetrySpec {
    type Error = SymmetryError;

    fn try_from(repr: SymmetryRepr) -> Result<Self, Self::Error> {
        SymmetrySpec::with_groups(
            repr.d,
            repr.groups.into_iter().map(|g| (g.coords, g.kind)).collect(),
        )
    }
}

impl From<SymmetrySpec> for SymmetryRepr {
    fn from(s: SymmetrySpec) -> Self {
        SymmetryRepr {
            d: s.d,
            groups: s
                .groups
                .into_iter()
                .map(|g| GroupRepr {
                    coords: g.coords.iter().map(|&c| c + 1).collect(),
                    kind: g.kind,
                })
                .collect(),
        }
    }
}

impl SymmetrySpec {
    /// No symmetry constraints at all.
    pub fn entire(d: usize) -> Result<Self, SymmetryError> {
        if d == 0 {
            return Err(SymmetryError::ZeroDimension);
        }
        Ok(SymmetrySpec { d, groups: Vec::new() })
    }

    /// One symmetric group covering all coordinates.
    pub fn full_sym(d: usize) -> Result<Self, SymmetryError> {
        Self::with_groups(d, vec![((1..=d).collect(), GroupKind::Sym)])
    }

    /// One antisymmetric group covering all coordinates.
    pub fn full_antisym(d: usize) -> Result<Self, SymmetryError> {
        Self::with_groups(d, vec![((1..=d).collect(), GroupKind::Antisym)])
    }

    /// Build from 1-based coordinate groups. Groups must be disjoint and
    /// nonempty; a group of size one imposes no constraint and is dropped.
    pub fn with_groups(
        d: usize,
        groups: Vec<(Vec<usize>, GroupKind)>,
    ) -> Result<Self, SymmetryError> {
        if d == 0 {
            return Err(SymmetryError::ZeroDimension);
        }
        let mut seen = vec![false; d];
        let mut normalized = Vec::new();
        for (coords, kind) in groups {
            if coords.is_empty() {
                return Err(SymmetryError::EmptyGroup);
            }
            let mut zero_based = Vec::with_capacity(coords.len());
            for c in coords {
                if c == 0 || c > d {
                    return Err(SymmetryError::CoordinateOutOfRange(c));
                }
                if seen[c - 1] {
                    return Err(SymmetryError::OverlappingGroups(c));
                }
                seen[c - 1] = true;
                zero_based.push(c - 1);
            }
            zero_based.sort_unstable();
            if zero_based.len() > 1 {
                normalized.push(Group { coords: zero_based, kind });
            }
        }
        normalized.sort_by_key(|g| g.coords[0]);
        Ok(SymmetrySpec { d, groups: normalized })
    }

    pub fn d(&self) -> usize {
        self.d
    }

    pub fn groups(&self) -> &[Group] {
        &self.groups
    }

    /// Membership of `index` in the admissible index set: nondecreasing along
    /// symmetric groups, strictly increasing along antisymmetric groups.
    pub fn contains(&self, index: &[u32]) -> Result<bool, SymmetryError> {
        if index.len() != self.d {
            return Err(SymmetryError::IndexLengthMismatch { got: index.len(), expected: self.d });
        }
        Ok(self.groups.iter().all(|g| {
            g.coords.windows(2).all(|w| match g.kind {
                GroupKind::Sym => index[w[0]] <= index[w[1]],
                GroupKind::Antisym => index[w[0]] < index[w[1]],
            })
        }))
    }

    /// The coordinatewise-smallest admissible index: ones everywhere, except
    /// that an antisymmetric group of size `a` carries `1, 2, …, a`.
    pub fn minimal_element(&self) -> MultiIndex {
        let mut index = vec![1u32; self.d];
        for g in &self.groups {
            if g.kind == GroupKind::Antisym {
                for (pos, &coord) in g.coords.iter().enumerate() {
                    index[coord] = pos as u32 + 1;
                }
            }
        }
        index
    }

    /// Group id for each coordinate (`None` = unconstrained), plus the kinds.
    pub(crate) fn coordinate_groups(&self) -> (Vec<Option<usize>>, Vec<GroupKind>) {
        let mut of_coord = vec![None; self.d];
        let mut kinds = Vec::with_capacity(self.groups.len());
        for (gid, g) in self.groups.iter().enumerate() {
            kinds.push(g.kind);
            for &c in &g.coords {
                of_coord[c] = Some(gid);
            }
        }
        (of_coord, kinds)
    }
}

/// Multiplicity data of `index` restricted to the 0-based coordinate set
/// `group_coords`: the product of factorials of the repetition counts, and
/// the normalization `√(#I! / M!)` that makes the symmetrized basis element
/// unit-norm.
pub fn multiplicity_factor(group_coords: &[usize], index: &[u32]) -> (u128, f64) {
    let mut values: Vec<u32> = group_coords.iter().map(|&c| index[c]).collect();
    values.sort_unstable();
    let mut m_factorial: u128 = 1;
    let mut run = 0u128;
    let mut prev = None;
    for v in values {
        if Some(v) == prev {
            run += 1;
        } else {
            run = 1;
            prev = Some(v);
        }
        m_factorial *= run;
    }
    let group_factorial: u128 = (1..=group_coords.len() as u128).product();
    let normalization = ((group_factorial as f64) / (m_factorial as f64)).sqrt();
    (m_factorial, normalization)
}

/// Visit every permutation of `0..n` together with its sign, via Heap's
/// algorithm (each step is one transposition, so the sign just flips).
fn for_each_permutation(n: usize, mut visit: impl FnMut(&[usize], f64)) {
    let mut perm: Vec<usize> = (0..n).collect();
    let mut counters = vec![0usize; n];
    let mut sign = 1.0;
    visit(&perm, sign);
    let mut i = 1;
    while i < n {
        if counters[i] < i {
            if i % 2 == 0 {
                perm.swap(0, i);
            } else {
                perm.swap(counters[i], i);
            }
            sign = -sign;
            visit(&perm, sign);
            counters[i] += 1;
            i = 1;
        } else {
            counters[i] = 0;
            i += 1;
        }
    }
}

/// Expansion of the (anti)symmetrizer applied to the tensor basis element of
/// `index`, in the tensor basis: one term `(±1/#I!, σ(index))` per
/// permutation `σ` of the group coordinates, merged over equal indices.
///
/// For an antisymmetric group with a repeated entry the merged expansion is
/// empty (the projection annihilates the element). Sorted by index.
pub fn symmetrizer_coefficients(
    group_coords: &[usize],
    kind: GroupKind,
    index: &[u32],
) -> Result<Vec<(f64, MultiIndex)>, SymmetryError> {
    let a = group_coords.len();
    if a > 8 {
        return Err(SymmetryError::GroupTooLarge(a));
    }
    for &c in group_coords {
        if c >= index.len() {
            return Err(SymmetryError::CoordinateOutOfRange(c + 1));
        }
    }
    let group_values: Vec<u32> = group_coords.iter().map(|&c| index[c]).collect();
    let order: f64 = (1..=a as u64).product::<u64>() as f64;
    let mut merged: std::collections::BTreeMap<MultiIndex, f64> = std::collections::BTreeMap::new();
    for_each_permutation(a, |perm, sign| {
        let mut permuted = index.to_vec();
        for (slot, &src) in perm.iter().enumerate() {
            permuted[group_coords[slot]] = group_values[src];
        }
        let coeff = match kind {
            GroupKind::Sym => 1.0 / order,
            GroupKind::Antisym => sign / order,
        };
        *merged.entry(permuted).or_insert(0.0) += coeff;
    });
    Ok(merged
        .into_iter()
        .filter(|&(_, c)| c != 0.0)
        .map(|(idx, c)| (c, idx))
        .collect())
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn contains_examples() {
        let asy3 = SymmetrySpec::full_antisym(3).unwrap();
        assert!(asy3.contains(&[1, 2, 5]).unwrap());
        assert!(!asy3.contains(&[1, 1, 5]).unwrap());

        let sym3 = SymmetrySpec::full_sym(3).unwrap();
        assert!(!sym3.contains(&[2, 2, 1]).unwrap());
        assert!(sym3.contains(&[2, 2, 3]).unwrap());

        let mixed =
            SymmetrySpec::with_groups(3, vec![(vec![1, 2], GroupKind::Antisym)]).unwrap();
        assert!(!mixed.contains(&[1, 1, 7]).unwrap());
        assert!(mixed.contains(&[1, 2, 7]).unwrap());

        assert!(asy3.contains(&[1, 2]).is_err());
    }

    #[test]
    fn group_validation() {
        assert!(SymmetrySpec::with_groups(3, vec![(vec![1, 4], GroupKind::Sym)]).is_err());
        assert!(SymmetrySpec::with_groups(
            3,
            vec![(vec![1, 2], GroupKind::Sym), (vec![2, 3], GroupKind::Antisym)]
        )
        .is_err());
        // a singleton group is no constraint at all
        let s = SymmetrySpec::with_groups(3, vec![(vec![2], GroupKind::Antisym)]).unwrap();
        assert_eq!(s, SymmetrySpec::entire(3).unwrap());
    }

    #[test]
    fn minimal_elements() {
        assert_eq!(SymmetrySpec::entire(3).unwrap().minimal_element(), vec![1, 1, 1]);
        assert_eq!(SymmetrySpec::full_sym(3).unwrap().minimal_element(), vec![1, 1, 1]);
        assert_eq!(SymmetrySpec::full_antisym(3).unwrap().minimal_element(), vec![1, 2, 3]);
        let mixed = SymmetrySpec::with_groups(
            4,
            vec![(vec![2, 4], GroupKind::Antisym), (vec![3], GroupKind::Sym)],
        )
        .unwrap();
        assert_eq!(mixed.minimal_element(), vec![1, 1, 1, 2]);
    }

    #[test]
    fn multiplicity_examples() {
        // repetition profile (3, 2, 1) over six coordinates
        let (m, _) = multiplicity_factor(&[0, 1, 2, 3, 4, 5], &[12, 4, 4, 12, 6, 4]);
        assert_eq!(m, 12); // 3!·2!·1!

        let (m, norm) = multiplicity_factor(&[0, 1, 2], &[2, 5, 9]);
        assert_eq!(m, 1);
        assert!((norm - 6.0_f64.sqrt()).abs() < 1e-15);

        let (m, norm) = multiplicity_factor(&[0, 1], &[7, 7]);
        assert_eq!(m, 2);
        assert!((norm - 1.0).abs() < 1e-15);
    }

    #[test]
    fn symmetrizer_examples() {
        let asy = symmetrizer_coefficients(&[0, 1], GroupKind::Antisym, &[1, 2]).unwrap();
        assert_eq!(asy, vec![(0.5, vec![1, 2]), (-0.5, vec![2, 1])]);

        let diag = symmetrizer_coefficients(&[0, 1], GroupKind::Antisym, &[3, 3]).unwrap();
        assert!(diag.is_empty());

        let sym = symmetrizer_coefficients(&[0, 1], GroupKind::Sym, &[1, 2]).unwrap();
        assert_eq!(sym, vec![(0.5, vec![1, 2]), (0.5, vec![2, 1])]);

        assert!(matches!(
            symmetrizer_coefficients(&(0..9).collect::<Vec<_>>(), GroupKind::Sym, &[1; 9]),
            Err(SymmetryError::GroupTooLarge(9))
        ));
    }

    #[test]
    fn symmetrizer_is_idempotent() {
        // P(P e) = P e, expanded through coefficients
        for kind in [GroupKind::Sym, GroupKind::Antisym] {
            let coords = [0usize, 1, 2];
            let index = [2u32, 4, 4, 9];
            let first = symmetrizer_coefficients(&coords, kind, &index).unwrap();
            let mut recombined: std::collections::BTreeMap<MultiIndex, f64> = Default::default();
            for (c, idx) in &first {
                for (c2, idx2) in symmetrizer_coefficients(&coords, kind, idx).unwrap() {
                    *recombined.entry(idx2).or_insert(0.0) += c * c2;
                }
            }
            recombined.retain(|_, c| c.abs() > 1e-15);
            let as_vec: Vec<(f64, MultiIndex)> =
                recombined.into_iter().map(|(i, c)| (c, i)).collect();
            assert_eq!(as_vec.len(), first.len(), "{kind:?}");
            for ((c1, i1), (c2, i2)) in first.iter().zip(&as_vec) {
                assert_eq!(i1, i2);
                assert!((c1 - c2).abs() < 1e-14, "{kind:?}: {c1} vs {c2}");
            }
        }
    }

    #[test]
    fn symmetrized_basis_element_has_unit_norm() {
        // ‖normalization · P e_k‖² = normalization² · Σ coeff² = 1 for
        // admissible k
        let cases: Vec<(Vec<usize>, GroupKind, Vec<u32>)> = vec![
            (vec![0, 1, 2], GroupKind::Sym, vec![1, 1, 2, 5]),
            (vec![0, 1, 2], GroupKind::Sym, vec![3, 3, 3, 1]),
            (vec![0, 1, 2], GroupKind::Antisym, vec![1, 3, 4, 2]),
            (vec![0, 1, 2, 3], GroupKind::Sym, vec![1, 2, 2, 7]),
        ];
        for (coords, kind, index) in cases {
            let (_, norm) = multiplicity_factor(&coords, &index);
            let terms = symmetrizer_coefficients(&coords, kind, &index).unwrap();
            let sq: f64 = terms.iter().map(|(c, _)| c * c).sum();
            assert!(
                (norm * norm * sq - 1.0).abs() < 1e-12,
                "{kind:?} {index:?}: got {}",
                norm * norm * sq
            );
        }
    }

    #[test]
    fn symmetrizer_support_closed_under_group() {
        let coords = [0usize, 1, 2];
        let index = [4u32, 1, 7];
        let terms = symmetrizer_coefficients(&coords, GroupKind::Antisym, &index).unwrap();
        let support: std::collections::BTreeSet<MultiIndex> =
            terms.iter().map(|(_, i)| i.clone()).collect();
        // applying any transposition of the group maps support onto itself
        for (a, b) in [(0usize, 1usize), (1, 2), (0, 2)] {
            for idx in &support {
                let mut swapped = idx.clone();
                swapped.swap(a, b);
                assert!(support.contains(&swapped));
            }
        }
    }
}
