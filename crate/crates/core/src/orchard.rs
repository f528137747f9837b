//! Orchard search: enumerate candidate triple systems, evaluate them as
//! simple intersections of `B(n, 2, A)`, and find the maximum number of
//! triple points a translate of the arrangement can realize.

use alloc::vec::Vec;
use core::fmt;

use crate::arrangement::Arrangement;
use crate::discriminantal::{build, DiscriminantalArrangement};
use crate::lattice::{closure, is_simple};
use crate::planar::{realize_translate_with, PlanarError};
use crate::subset::{combinations, Subset};

/// Largest `n` the exhaustive searches accept.
pub const MAX_N: usize = 9;

/// A set of triples of `[n]` in which no two triples share a pair of
/// elements (a pair coincidence would force a `D_K` and kill simplicity).
#[derive(Clone, Debug, PartialEq, Eq, PartialOrd, Ord)]
pub struct TripleSystem {
    pub n: usize,
    pub triples: Vec<Subset>,
}

impl TripleSystem {
    pub fn new(n: usize, mut triples: Vec<Subset>) -> Result<TripleSystem, OrchardError> {
        triples.sort();
        for t in &triples {
            if t.len() != 3 || t.elements().any(|e| e >= n) {
                return Err(OrchardError::BadTriple { triple: *t });
            }
        }
        for i in 0..triples.len() {
            for j in i + 1..triples.len() {
                if triples[i].intersection(triples[j]).len() > 1 {
                    return Err(OrchardError::OverlappingTriples {
                        a: triples[i],
                        b: triples[j],
                    });
                }
            }
        }
        Ok(TripleSystem { n, triples })
    }

    pub fn len(&self) -> usize {
        self.triples.len()
    }

    pub fn is_empty(&self) -> bool {
        self.triples.is_empty()
    }

    /// Lexicographically minimal among all relabelings of `[n]`?
    pub fn is_canonical(&self) -> bool {
        let mut perm: Vec<usize> = (0..self.n).collect();
        let me = &self.triples;
        loop {
            let mut mapped: Vec<Subset> = me.iter().map(|t| t.map(|e| perm[e])).collect();
            mapped.sort();
            if mapped < *me {
                return false;
            }
            if !next_permutation(&mut perm) {
                return true;
            }
        }
    }
}

fn next_permutation(perm: &mut [usize]) -> bool {
    let n = perm.len();
    if n < 2 {
        return false;
    }
    let mut i = n - 1;
    while i > 0 && perm[i - 1] >= perm[i] {
        i -= 1;
    }
    if i == 0 {
        return false;
    }
    let mut j = n - 1;
    while perm[j] <= perm[i - 1] {
        j -= 1;
    }
    perm.swap(i - 1, j);
    perm[i..].reverse();
    true
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub enum OrchardError {
    BadTriple { triple: Subset },
    OverlappingTriples { a: Subset, b: Subset },
    TooLarge { n: usize },
    Planar(PlanarError),
}

impl fmt::Display for OrchardError {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            OrchardError::BadTriple { triple } => write!(f, "not a triple of [n]: {triple}"),
            OrchardError::OverlappingTriples { a, b } => {
                write!(f, "triples {a} and {b} share a pair")
            }
            OrchardError::TooLarge { n } => {
                write!(f, "n = {n} exceeds the search cap {MAX_N}")
            }
            OrchardError::Planar(e) => write!(f, "{e}"),
        }
    }
}

/// All triple systems with `m` triples, optionally capped by element degree.
/// Output is in lexicographic order of the triple lists.
pub fn enumerate_systems(
    n: usize,
    m: usize,
    degree_cap: Option<usize>,
) -> Result<Vec<TripleSystem>, OrchardError> {
    if n > MAX_N {
        return Err(OrchardError::TooLarge { n });
    }
    let all = combinations(n, 3);
    let mut out = Vec::new();
    let mut chosen: Vec<Subset> = Vec::new();
    let mut pair_used = alloc::vec![false; n * n];
    let mut degree = alloc::vec![0usize; n];
    enumerate_rec(
        &all,
        0,
        m,
        n,
        degree_cap,
        &mut chosen,
        &mut pair_used,
        &mut degree,
        &mut out,
    );
    Ok(out)
}

#[allow(clippy::too_many_arguments)]
fn enumerate_rec(
    all: &[Subset],
    start: usize,
    m: usize,
    n: usize,
    degree_cap: Option<usize>,
    chosen: &mut Vec<Subset>,
    pair_used: &mut [bool],
    degree: &mut [usize],
    out: &mut Vec<TripleSystem>,
) {
    if chosen.len() == m {
        out.push(TripleSystem {
            n,
            triples: chosen.clone(),
        });
        return;
    }
    if all.len() - start < m - chosen.len() {
        return;
    }
    for ti in start..all.len() {
        let t = all[ti];
        let elems: Vec<usize> = t.to_vec();
        let pairs = [
            elems[0] * n + elems[1],
            elems[0] * n + elems[2],
            elems[1] * n + elems[2],
        ];
        if pairs.iter().any(|&p| pair_used[p]) {
            continue;
        }
        if let Some(cap) = degree_cap {
            if elems.iter().any(|&e| degree[e] + 1 > cap) {
                continue;
            }
        }
        for &p in &pairs {
            pair_used[p] = true;
        }
        for &e in &elems {
            degree[e] += 1;
        }
        chosen.push(t);
        enumerate_rec(
            all,
            ti + 1,
            m,
            n,
            degree_cap,
            chosen,
            pair_used,
            degree,
            out,
        );
        chosen.pop();
        for &p in &pairs {
            pair_used[p] = false;
        }
        for &e in &elems {
            degree[e] -= 1;
        }
    }
}

/// Canonical representatives only, for counting up to relabeling.
pub fn enumerate_systems_canonical(
    n: usize,
    m: usize,
    degree_cap: Option<usize>,
) -> Result<Vec<TripleSystem>, OrchardError> {
    Ok(enumerate_systems(n, m, degree_cap)?
        .into_iter()
        .filter(TripleSystem::is_canonical)
        .collect())
}

/// Evaluation of a candidate system against a concrete arrangement.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct SystemEvaluation {
    pub rank: usize,
    pub simple: bool,
    pub non_very_generic: bool,
}

pub fn evaluate_system(arr: &Arrangement, system: &TripleSystem) -> SystemEvaluation {
    let disc = build(arr).expect("generic arrangement");
    evaluate_system_with(&disc, system)
}

pub fn evaluate_system_with(
    disc: &DiscriminantalArrangement,
    system: &TripleSystem,
) -> SystemEvaluation {
    assert_eq!(disc.k, 2);
    assert_eq!(disc.n, system.n);
    let flat = closure(disc, &system.triples);
    let simple = is_simple(disc, &flat);
    let exact = flat.indices.len() == system.triples.len()
        && system.triples.iter().all(|t| flat.contains(*t));
    SystemEvaluation {
        rank: flat.rank,
        simple,
        non_very_generic: system.len() > flat.rank && simple && exact,
    }
}

/// Result of the downward orchard search.
#[derive(Clone, Debug)]
pub struct OrchardReport {
    pub m_max: usize,
    pub rank: usize,
    pub witnesses: Vec<(TripleSystem, Arrangement)>,
}

/// Maximum number of triple points over all translates of `arr`, with
/// realized witnesses.
///
/// Searches `m` downward from the pair-count bound `n(n-1)/6`; a system
/// qualifies when its closure is a simple flat of rank `<= n-3` whose index
/// set is exactly the system, which is precisely membership of a
/// triple-point translate.
pub fn orchard_max(arr: &Arrangement, seed: u64) -> Result<OrchardReport, OrchardError> {
    let n = arr.len();
    if n > MAX_N {
        return Err(OrchardError::TooLarge { n });
    }
    let disc = build(arr).expect("generic arrangement");
    let upper = n * (n - 1) / 6;
    for m in (1..=upper).rev() {
        let mut witnesses = Vec::new();
        let mut rank = 0;
        for system in enumerate_systems(n, m, None)? {
            let flat = closure(&disc, &system.triples);
            if flat.rank > n - 3 {
                continue;
            }
            if flat.indices.len() != system.triples.len() {
                continue;
            }
            if !is_simple(&disc, &flat) {
                continue;
            }
            let translate =
                realize_translate_with(arr, &disc, &flat, seed).map_err(OrchardError::Planar)?;
            rank = flat.rank;
            witnesses.push((system, translate));
        }
        if !witnesses.is_empty() {
            return Ok(OrchardReport {
                m_max: m,
                rank,
                witnesses,
            });
        }
    }
    unreachable!("every generic arrangement realizes a single triple point")
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::planar::{incidence_stats, projective_lines};
    use alloc::vec;

    fn tri(spec: &[usize; 3]) -> Subset {
        Subset::from_elements(&[spec[0] - 1, spec[1] - 1, spec[2] - 1])
    }

    #[test]
    fn enumeration_counts() {
        assert_eq!(enumerate_systems(6, 1, None).unwrap().len(), 20);
        assert_eq!(enumerate_systems(6, 4, Some(2)).unwrap().len(), 30);
        assert_eq!(enumerate_systems(6, 4, None).unwrap().len(), 30);
        assert_eq!(enumerate_systems(6, 5, None).unwrap().len(), 0);
        assert_eq!(enumerate_systems(7, 7, None).unwrap().len(), 30);
        assert_eq!(enumerate_systems(7, 6, None).unwrap().len(), 210);
        assert!(enumerate_systems(10, 1, None).is_err());
    }

    #[test]
    fn enumeration_contains_the_seven_line_family() {
        let target = TripleSystem::new(
            7,
            vec![
                tri(&[1, 2, 3]),
                tri(&[1, 4, 6]),
                tri(&[1, 5, 7]),
                tri(&[2, 4, 7]),
                tri(&[2, 5, 6]),
                tri(&[3, 4, 5]),
            ],
        )
        .unwrap();
        let all = enumerate_systems(7, 6, None).unwrap();
        assert!(all.contains(&target));
    }

    #[test]
    fn overlap_invariant_is_enforced() {
        let err = TripleSystem::new(6, vec![tri(&[1, 4, 5]), tri(&[2, 4, 5])]).unwrap_err();
        assert!(matches!(err, OrchardError::OverlappingTriples { .. }));
    }

    #[test]
    fn canonical_pruning_shrinks_output() {
        let all = enumerate_systems(6, 4, None).unwrap();
        let canon = enumerate_systems_canonical(6, 4, None).unwrap();
        assert!(canon.len() < all.len());
        assert!(!canon.is_empty());
        for sys in &canon {
            assert!(sys.is_canonical());
        }
    }

    fn very_generic_six() -> Arrangement {
        Arrangement::from_int_lines(
            2,
            &[
                (vec![1, -5], 0),
                (vec![3, -8], 0),
                (vec![-7, 8], 0),
                (vec![-6, 2], 0),
                (vec![9, -8], 0),
                (vec![7, -3], 0),
            ],
        )
    }

    #[test]
    fn very_generic_six_lines_max_is_three() {
        let report = orchard_max(&very_generic_six(), crate::DEFAULT_SEED).unwrap();
        assert_eq!(report.m_max, 3);
        assert_eq!(report.rank, 3);
        for (system, translate) in &report.witnesses {
            let stats = incidence_stats(&projective_lines(translate).unwrap()).unwrap();
            assert_eq!(stats.t_count(3), system.len());
            assert_eq!(stats.max_multiplicity(), 3);
        }
    }

    #[test]
    fn transversal_system_on_very_generic_has_full_rank() {
        let arr = very_generic_six();
        let sys =
            TripleSystem::new(6, vec![tri(&[1, 2, 3]), tri(&[1, 4, 5]), tri(&[2, 4, 6])]).unwrap();
        let eval = evaluate_system(&arr, &sys);
        assert_eq!(eval.rank, 3);
        assert!(!eval.non_very_generic);
        let four = TripleSystem::new(
            6,
            vec![tri(&[1, 2, 3]), tri(&[1, 4, 5]), tri(&[2, 4, 6]), tri(&[3, 5, 6])],
        )
        .unwrap();
        assert_eq!(evaluate_system(&arr, &four).rank, 4);
    }

    #[test]
    fn example32_orchard_max_is_four() {
        let arr = Arrangement::from_int_lines(
            2,
            &[
                (vec![-2, 2], 0),
                (vec![-2, 4], 0),
                (vec![0, 6], 0),
                (vec![2, 4], 0),
                (vec![2, 2], 0),
                (vec![1, 0], 0),
            ],
        );
        let report = orchard_max(&arr, crate::DEFAULT_SEED).unwrap();
        assert_eq!(report.m_max, 4);
        assert_eq!(report.rank, 3);
        assert_eq!(report.witnesses.len(), 4);
    }
}
