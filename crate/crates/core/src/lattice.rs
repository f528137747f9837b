//! Intersection lattice of a central arrangement up to a requested rank,
//! plus the classification of flats as simple / non-very-generic.
//!
//! Flats are deduplicated by the canonical reduced-echelon basis of the span
//! of their alpha vectors, so geometric coincidences are detected exactly,
//! never inferred from index bookkeeping.

use alloc::collections::{BTreeMap, BTreeSet};
use alloc::vec::Vec;
use core::fmt;

use crate::discriminantal::DiscriminantalArrangement;
use crate::linalg::Matrix;
use crate::subset::{combinations, Subset};

/// An intersection-lattice element: the closed set of hyperplanes containing
/// it, its rank, a minimal spanning witness, and the canonical basis of the
/// span of its alphas.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Flat {
    pub indices: BTreeSet<Subset>,
    pub rank: usize,
    pub witness: Vec<Subset>,
    pub basis: Matrix,
    pivots: Vec<usize>,
}

impl Flat {
    pub fn multiplicity(&self) -> usize {
        self.indices.len()
    }

    /// Does the hyperplane `D_L` contain this flat?
    pub fn contains(&self, subset: Subset) -> bool {
        self.indices.contains(&subset)
    }

    /// If the closed index set is exactly all `(k+1)`-subsets of one support
    /// set `S`, return `S`. These are the flats `D_S` where the `|S|` base
    /// hyperplanes acquire a common point.
    pub fn central_support(&self, k: usize) -> Option<Subset> {
        let mut union = Subset::EMPTY;
        for s in &self.indices {
            union = union.union(*s);
        }
        let all: BTreeSet<Subset> = union
            .to_vec()
            .len()
            .checked_sub(k + 1)
            .map(|_| combinations_of(union, k + 1))
            .unwrap_or_default();
        if !all.is_empty() && all == self.indices {
            Some(union)
        } else {
            None
        }
    }
}

fn combinations_of(support: Subset, size: usize) -> BTreeSet<Subset> {
    let elems = support.to_vec();
    combinations(elems.len(), size)
        .into_iter()
        .map(|c| Subset::from_elements(&c.elements().map(|i| elems[i]).collect::<Vec<_>>()))
        .collect()
}

/// Per-flat simplicity report.
#[derive(Clone, Debug)]
pub struct SimpleIntersectionReport {
    pub flat: Flat,
    pub simple: bool,
    pub non_very_generic: bool,
}

#[derive(Clone, Debug)]
pub struct VeryGenericReport {
    pub very_generic_up_to_rank: bool,
    pub witnesses: Vec<Flat>,
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub enum LatticeError {
    /// The simplicity notions are defined for line arrangements (k = 2).
    RequiresLines {
        k: usize,
    },
    RankOutOfRange {
        requested: usize,
        max: usize,
    },
}

impl fmt::Display for LatticeError {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            LatticeError::RequiresLines { k } => {
                write!(
                    f,
                    "simple-intersection analysis requires k = 2, got k = {k}"
                )
            }
            LatticeError::RankOutOfRange { requested, max } => {
                write!(f, "rank {requested} exceeds the essential rank {max}")
            }
        }
    }
}

/// Closure of a set of hyperplanes: the flat spanned by their alphas.
pub fn closure(disc: &DiscriminantalArrangement, seed: &[Subset]) -> Flat {
    assert!(!seed.is_empty(), "closure of an empty family");
    let span = disc.alpha_matrix(seed.iter().copied());
    flat_from_span(disc, &span)
}

fn flat_from_span(disc: &DiscriminantalArrangement, span: &Matrix) -> Flat {
    let rref = span.row_space_canonical();
    let pivots: Vec<usize> = (0..rref.rows())
        .map(|i| rref.row(i).iter().position(|v| !v.is_zero()).unwrap())
        .collect();
    let rank = rref.rows();
    let mut indices = BTreeSet::new();
    for h in &disc.hyperplanes {
        if rref.rref_contains(&h.alpha, &pivots) {
            indices.insert(h.subset);
        }
    }
    // minimal witness: greedy over the closed set in lexicographic order
    let mut witness = Vec::new();
    let mut wit_mat = Matrix::zero(0, disc.n);
    let mut wit_rank = 0;
    for s in &indices {
        if wit_rank == rank {
            break;
        }
        let mut candidate = wit_mat.clone();
        candidate.push_row(disc.alpha(*s).unwrap().alpha.clone());
        if candidate.rank() > wit_rank {
            wit_rank += 1;
            wit_mat = candidate;
            witness.push(*s);
        }
    }
    Flat {
        indices,
        rank,
        witness,
        basis: rref,
        pivots,
    }
}

/// All flats of rank `1..=r_max`, grouped by rank (index 0 holds rank-1
/// flats), each group ordered lexicographically by index set.
///
/// Construction is breadth-first: every rank-`r` flat is the closure of a
/// rank-`(r-1)` flat plus one hyperplane, deduplicated by canonical span.
pub fn flats_up_to_rank(disc: &DiscriminantalArrangement, r_max: usize) -> Vec<Vec<Flat>> {
    let mut by_rank: Vec<Vec<Flat>> = Vec::new();
    if r_max == 0 {
        return by_rank;
    }
    let mut current: BTreeMap<Matrix, Flat> = BTreeMap::new();
    for h in &disc.hyperplanes {
        let flat = closure(disc, &[h.subset]);
        current.insert(flat.basis.clone(), flat);
    }
    by_rank.push(sorted_flats(&current));
    for _r in 2..=r_max {
        let mut next: BTreeMap<Matrix, Flat> = BTreeMap::new();
        for flat in current.values() {
            for h in &disc.hyperplanes {
                if flat.contains(h.subset) {
                    continue;
                }
                let mut span = flat.basis.clone();
                span.push_row(h.alpha.clone());
                let key = span.row_space_canonical();
                if next.contains_key(&key) {
                    continue;
                }
                let new_flat = flat_from_span(disc, &key);
                next.insert(key, new_flat);
            }
        }
        by_rank.push(sorted_flats(&next));
        current = next;
    }
    by_rank
}

fn sorted_flats(map: &BTreeMap<Matrix, Flat>) -> Vec<Flat> {
    let mut flats: Vec<Flat> = map.values().cloned().collect();
    flats.sort_by(|a, b| a.indices.cmp(&b.indices));
    flats
}

/// The Athanasiadis condition on a family of supports: for every subfamily
/// `I` with at least two members, `|union S_i| > k + sum(|S_i| - k)`.
pub fn athanasiadis_predicate(family: &[Subset], n: usize, k: usize) -> Result<bool, LatticeError> {
    for s in family {
        if s.len() < k + 1 || s.elements().any(|e| e >= n) {
            return Err(LatticeError::RankOutOfRange {
                requested: s.len(),
                max: n,
            });
        }
    }
    let m = family.len();
    if m <= 1 {
        return Ok(true);
    }
    assert!(m < 31, "family too large for exhaustive subfamily check");
    for mask in 1u32..(1 << m) {
        if mask.count_ones() < 2 {
            continue;
        }
        let mut union = Subset::EMPTY;
        let mut excess = 0usize;
        for (i, s) in family.iter().enumerate() {
            if mask & (1 << i) != 0 {
                union = union.union(*s);
                excess += s.len() - k;
            }
        }
        if union.len() <= k + excess {
            return Ok(false);
        }
    }
    Ok(true)
}

/// Is the flat a simple intersection (no subfamily of its hyperplanes closes
/// to a `D_K` with `|K| > k+1`)?
///
/// Because the index set is closed, a subfamily spans the `D_K` subspace
/// exactly when all `(k+1)`-subsets of `K` already lie in the index set, so
/// scanning every candidate `K` decides the quantifier over subfamilies.
pub fn is_simple(disc: &DiscriminantalArrangement, flat: &Flat) -> bool {
    let k = disc.k;
    for ksz in k + 2..=disc.n {
        for big in combinations(disc.n, ksz) {
            let mut all_in = true;
            for l in combinations_of(big, k + 1) {
                if !flat.indices.contains(&l) {
                    all_in = false;
                    break;
                }
            }
            if all_in {
                return false;
            }
        }
    }
    true
}

/// Reports for every rank-`r` flat of `B(n, 2, A)`.
pub fn simple_intersections(
    disc: &DiscriminantalArrangement,
    r: usize,
) -> Result<Vec<SimpleIntersectionReport>, LatticeError> {
    if disc.k != 2 {
        return Err(LatticeError::RequiresLines { k: disc.k });
    }
    if r > disc.n - disc.k {
        return Err(LatticeError::RankOutOfRange {
            requested: r,
            max: disc.n - disc.k,
        });
    }
    let flats = flats_up_to_rank(disc, r);
    Ok(reports_for(disc, flats[r - 1].iter()))
}

fn reports_for<'a>(
    disc: &DiscriminantalArrangement,
    flats: impl Iterator<Item = &'a Flat>,
) -> Vec<SimpleIntersectionReport> {
    flats
        .map(|flat| {
            let simple = is_simple(disc, flat);
            SimpleIntersectionReport {
                simple,
                non_very_generic: simple && flat.multiplicity() > flat.rank,
                flat: flat.clone(),
            }
        })
        .collect()
}

/// Scan all flats of rank `<= r_max` for non-very-generic simple
/// intersections; those witness that the base arrangement lies outside the
/// very generic stratum.
pub fn very_generic_report(
    disc: &DiscriminantalArrangement,
    r_max: usize,
) -> Result<VeryGenericReport, LatticeError> {
    if disc.k != 2 {
        return Err(LatticeError::RequiresLines { k: disc.k });
    }
    if r_max > disc.n - disc.k {
        return Err(LatticeError::RankOutOfRange {
            requested: r_max,
            max: disc.n - disc.k,
        });
    }
    let flats = flats_up_to_rank(disc, r_max);
    let mut witnesses = Vec::new();
    for group in &flats {
        for report in reports_for(disc, group.iter()) {
            if report.non_very_generic {
                witnesses.push(report.flat);
            }
        }
    }
    Ok(VeryGenericReport {
        very_generic_up_to_rank: witnesses.is_empty(),
        witnesses,
    })
}
