//! Incidence geometry of line arrangements in the real projective plane:
//! the t-census of intersection points, collinearity detection among double
//! points, and exact realization of translates witnessing a flat.

use alloc::collections::{BTreeMap, BTreeSet};
use alloc::vec::Vec;
use core::fmt;

use crate::arrangement::{Arrangement, ProjectiveFlat};
use crate::discriminantal::{build, DiscriminantalArrangement};
use crate::lattice::Flat;
use crate::linalg::dot;
use crate::scalar::Scalar;

/// Census of the intersection points of a line arrangement.
#[derive(Clone, Debug)]
pub struct IncidenceStats {
    /// Number of distinct lines.
    pub s: usize,
    /// Every intersection point with the set of incident line indices.
    pub points: Vec<IncidencePoint>,
    /// Multiplicity -> number of points of that multiplicity.
    pub t: BTreeMap<usize, usize>,
}

#[derive(Clone, Debug)]
pub struct IncidencePoint {
    pub point: ProjectiveFlat,
    pub lines: BTreeSet<usize>,
}

impl IncidenceStats {
    pub fn t_count(&self, m: usize) -> usize {
        self.t.get(&m).copied().unwrap_or(0)
    }

    pub fn max_multiplicity(&self) -> usize {
        self.t.keys().max().copied().unwrap_or(0)
    }

    /// Triple points as sorted line-index triples.
    pub fn triples(&self) -> Vec<crate::subset::Subset> {
        self.points
            .iter()
            .filter(|p| p.lines.len() == 3)
            .map(|p| {
                crate::subset::Subset::from_elements(&p.lines.iter().copied().collect::<Vec<_>>())
            })
            .collect()
    }
}

/// A maximal set of >= 3 double points on a common axis that is not one of
/// the arrangement lines (so the points involve pairwise disjoint line pairs).
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Collinearity {
    pub axis: ProjectiveFlat,
    /// The double points, each labeled by its 0-based line pair.
    pub points: Vec<((usize, usize), ProjectiveFlat)>,
}

impl Collinearity {
    pub fn pairs(&self) -> Vec<(usize, usize)> {
        self.points.iter().map(|(p, _)| *p).collect()
    }
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub enum PlanarError {
    DuplicateLine {
        i: usize,
        j: usize,
    },
    /// Three input lines share a point, so double points are not well defined.
    NotGeneric {
        lines: Vec<usize>,
    },
    UnsupportedDimension {
        dim: usize,
    },
    NotSimpleFlat,
    RealizationExhausted,
}

impl fmt::Display for PlanarError {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            PlanarError::DuplicateLine { i, j } => {
                write!(f, "duplicate line: inputs {} and {} coincide", i + 1, j + 1)
            }
            PlanarError::NotGeneric { lines } => {
                write!(f, "not generic: lines {:?} are concurrent", lines)
            }
            PlanarError::UnsupportedDimension { dim } => {
                write!(f, "planar operations need dimension 2 or 3, got {dim}")
            }
            PlanarError::NotSimpleFlat => write!(f, "flat is not realizable as a planar translate"),
            PlanarError::RealizationExhausted => {
                write!(f, "candidate search for a realizing translate exhausted")
            }
        }
    }
}

/// Cross product of homogeneous coefficient vectors; the meet of two lines
/// and the join of two points are both this.
pub(crate) fn cross(u: &[Scalar], v: &[Scalar]) -> Vec<Scalar> {
    alloc::vec![
        &(&u[1] * &v[2]) - &(&u[2] * &v[1]),
        &(&u[2] * &v[0]) - &(&u[0] * &v[2]),
        &(&u[0] * &v[1]) - &(&u[1] * &v[0]),
    ]
}

pub fn meet(a: &ProjectiveFlat, b: &ProjectiveFlat) -> Option<ProjectiveFlat> {
    let c = cross(a.coeffs(), b.coeffs());
    if c.iter().all(Scalar::is_zero) {
        None
    } else {
        Some(ProjectiveFlat::new(&c))
    }
}

pub fn join(a: &ProjectiveFlat, b: &ProjectiveFlat) -> Option<ProjectiveFlat> {
    meet(a, b)
}

pub fn incident(line: &ProjectiveFlat, point: &ProjectiveFlat) -> bool {
    dot(line.coeffs(), point.coeffs()).is_zero()
}

/// The projective lines of an arrangement: homogenized affine lines for
/// k = 2, or the trace at infinity for k = 3.
pub fn projective_lines(arr: &Arrangement) -> Result<Vec<ProjectiveFlat>, PlanarError> {
    match arr.dim() {
        2 => Ok(arr
            .hyperplanes()
            .iter()
            .map(|h| {
                let coeffs = alloc::vec![h.normal[0].clone(), h.normal[1].clone(), -&h.offset,];
                ProjectiveFlat::new(&coeffs)
            })
            .collect()),
        3 => Ok(arr.trace_at_infinity()),
        dim => Err(PlanarError::UnsupportedDimension { dim }),
    }
}

/// Exact point census of a set of pairwise distinct projective lines.
///
/// The counting identity `sum_m t_m * C(m,2) = C(s,2)` is asserted on every
/// output; it holds because each line pair meets in exactly one point.
pub fn incidence_stats(lines: &[ProjectiveFlat]) -> Result<IncidenceStats, PlanarError> {
    for i in 0..lines.len() {
        for j in i + 1..lines.len() {
            if lines[i] == lines[j] {
                return Err(PlanarError::DuplicateLine { i, j });
            }
        }
    }
    let mut points: BTreeMap<ProjectiveFlat, BTreeSet<usize>> = BTreeMap::new();
    for i in 0..lines.len() {
        for j in i + 1..lines.len() {
            let p = meet(&lines[i], &lines[j]).expect("distinct lines meet");
            points.entry(p).or_default().extend([i, j]);
        }
    }
    let mut t: BTreeMap<usize, usize> = BTreeMap::new();
    for inc in points.values() {
        *t.entry(inc.len()).or_insert(0) += 1;
    }
    let s = lines.len();
    let pairs: usize = t.iter().map(|(m, c)| c * (m * (m - 1) / 2)).sum();
    assert_eq!(pairs, s * (s.saturating_sub(1)) / 2, "census identity");
    Ok(IncidenceStats {
        s,
        points: points
            .into_iter()
            .map(|(point, lines)| IncidencePoint { point, lines })
            .collect(),
        t,
    })
}

/// All maximal collinearities among the double points of a generic line
/// arrangement (only double points, no three lines concurrent).
///
/// Two double points sharing a line index lie on that arrangement line, so
/// axes equal to input lines are exactly the trivial collinearities; they are
/// dropped, which also forces pairwise disjoint pairs on every reported axis.
pub fn collinearity_conditions(lines: &[ProjectiveFlat]) -> Result<Vec<Collinearity>, PlanarError> {
    let stats = incidence_stats(lines)?;
    for p in &stats.points {
        if p.lines.len() > 2 {
            return Err(PlanarError::NotGeneric {
                lines: p.lines.iter().copied().collect(),
            });
        }
    }
    let mut doubles: Vec<((usize, usize), ProjectiveFlat)> = Vec::new();
    for p in &stats.points {
        let idx: Vec<usize> = p.lines.iter().copied().collect();
        doubles.push(((idx[0], idx[1]), p.point.clone()));
    }
    let line_set: BTreeSet<&ProjectiveFlat> = lines.iter().collect();
    let mut axes: BTreeMap<ProjectiveFlat, BTreeSet<usize>> = BTreeMap::new();
    for i in 0..doubles.len() {
        for j in i + 1..doubles.len() {
            let axis = join(&doubles[i].1, &doubles[j].1).expect("distinct points");
            if line_set.contains(&axis) {
                continue;
            }
            axes.entry(axis).or_default().extend([i, j]);
        }
    }
    let mut out = Vec::new();
    for (axis, members) in axes {
        if members.len() < 3 {
            continue;
        }
        let points: Vec<((usize, usize), ProjectiveFlat)> =
            members.iter().map(|&i| doubles[i].clone()).collect();
        out.push(Collinearity { axis, points });
    }
    Ok(out)
}

/// Transpose of a projective change of coordinates sending `infinity` to
/// the line `z = 0`: solve `M^T l' = l` to push lines into the chart.
pub fn chart_matrix_t(infinity: &ProjectiveFlat) -> crate::linalg::Matrix {
    let h = infinity.coeffs();
    let mut cols: Vec<Vec<Scalar>> = Vec::new();
    for e in 0..3 {
        if cols.len() == 2 {
            break;
        }
        let mut row = alloc::vec![Scalar::zero(); 3];
        row[e] = Scalar::one();
        let mut probe: Vec<Vec<Scalar>> = cols.clone();
        probe.push(row.clone());
        probe.push(h.to_vec());
        if crate::linalg::Matrix::from_rows(probe.clone()).rank() == probe.len() {
            cols.push(row);
        }
    }
    cols.push(h.to_vec());
    let mut mt = crate::linalg::Matrix::zero(3, 3);
    for (c, col) in cols.iter().enumerate() {
        for (r, entry) in col.iter().enumerate() {
            mt.set(r, c, entry.clone());
        }
    }
    mt
}

/// Affine normal/offset of a projective line in the chart given by
/// [`chart_matrix_t`]; `None` when the line is the chart's line at infinity.
pub fn line_to_affine(
    mt: &crate::linalg::Matrix,
    line: &ProjectiveFlat,
) -> Option<(Vec<Scalar>, Scalar)> {
    let sol = mt.solution_space(line.coeffs())?;
    let lp = sol.basepoint;
    if lp[0].is_zero() && lp[1].is_zero() {
        return None;
    }
    Some((alloc::vec![lp[0].clone(), lp[1].clone()], -&lp[2]))
}

/// Deterministic candidate stream for integer lattice points, seeded.
struct CandidateStream {
    state: u64,
    count: u64,
}

impl CandidateStream {
    fn new(seed: u64) -> CandidateStream {
        CandidateStream {
            state: seed
                .wrapping_mul(6364136223846793005)
                .wrapping_add(1442695040888963407),
            count: 0,
        }
    }

    fn next_u64(&mut self) -> u64 {
        self.state = self
            .state
            .wrapping_mul(6364136223846793005)
            .wrapping_add(1442695040888963407);
        self.state >> 11
    }

    /// Integer coefficient vector with entries in [-bound, bound]; the bound
    /// doubles every 128 draws.
    fn next_vec(&mut self, dim: usize) -> Vec<i64> {
        let shift = (self.count / 128).min(20);
        let bound = 1i64 << shift;
        self.count += 1;
        (0..dim)
            .map(|_| (self.next_u64() % (2 * bound as u64 + 1)) as i64 - bound)
            .collect()
    }
}

/// Find an exact translate of `arr` lying on the flat `X` and on no other
/// discriminantal hyperplane, so its coincidences are exactly `X`'s family.
pub fn realize_translate(
    arr: &Arrangement,
    flat: &Flat,
    seed: u64,
) -> Result<Arrangement, PlanarError> {
    let disc = build(arr).map_err(|_| PlanarError::NotSimpleFlat)?;
    realize_translate_with(arr, &disc, flat, seed)
}

pub fn realize_translate_with(
    arr: &Arrangement,
    disc: &DiscriminantalArrangement,
    flat: &Flat,
    seed: u64,
) -> Result<Arrangement, PlanarError> {
    let kernel = flat.basis.kernel_basis();
    let excluded: Vec<&Vec<Scalar>> = disc
        .hyperplanes
        .iter()
        .filter(|h| !flat.contains(h.subset))
        .map(|h| &h.alpha)
        .collect();
    let dim = kernel.len();
    let mut stream = CandidateStream::new(seed);
    let mut attempt = 0u64;
    while attempt < 200_000 {
        let coeffs: Vec<i64> = if attempt == 0 {
            alloc::vec![0; dim]
        } else {
            stream.next_vec(dim)
        };
        attempt += 1;
        let mut y = alloc::vec![Scalar::zero(); disc.n];
        for (c, basis_vec) in coeffs.iter().zip(&kernel) {
            if *c == 0 {
                continue;
            }
            let cs = Scalar::from_int(*c);
            for (yi, bi) in y.iter_mut().zip(basis_vec) {
                *yi = &*yi + &(&cs * bi);
            }
        }
        if excluded.iter().any(|alpha| dot(alpha, &y).is_zero()) {
            continue;
        }
        // offsets of the produced translate are exactly y
        let c: Vec<Scalar> = y
            .iter()
            .zip(arr.offsets())
            .map(|(yi, off)| yi - &off)
            .collect();
        let out = arr.translate(&c);
        debug_assert!(disc
            .hyperplanes
            .iter()
            .all(|h| dot(&h.alpha, &y).is_zero() == flat.contains(h.subset)));
        return Ok(out);
    }
    Err(PlanarError::RealizationExhausted)
}

/// One entry per rank-3 multiplicity-4 simple flat of `B(6, 2, A)`, paired
/// with a realized quadrilateral-set translate.
pub fn quadrilateral_translates(
    arr: &Arrangement,
    seed: u64,
) -> Result<Vec<(Flat, Arrangement)>, PlanarError> {
    assert_eq!(arr.dim(), 2, "quadrilateral sets live in the plane");
    assert_eq!(arr.len(), 6, "quadrilateral sets need six lines");
    let disc = build(arr).map_err(|_| PlanarError::NotSimpleFlat)?;
    let flats = crate::lattice::flats_up_to_rank(&disc, 3);
    let mut out = Vec::new();
    for flat in &flats[2] {
        if flat.multiplicity() != 4 || !crate::lattice::is_simple(&disc, flat) {
            continue;
        }
        let translate = realize_translate_with(arr, &disc, flat, seed)?;
        out.push((flat.clone(), translate));
    }
    Ok(out)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::lattice::flats_up_to_rank;
    use alloc::vec;

    fn line(a: i64, b: i64, c: i64) -> ProjectiveFlat {
        ProjectiveFlat::new(&[
            Scalar::from_int(a),
            Scalar::from_int(b),
            Scalar::from_int(c),
        ])
    }

    fn example31_arrangement() -> Arrangement {
        Arrangement::from_int_lines(
            2,
            &[
                (vec![-2, 2], 1),
                (vec![-3, 4], -1),
                (vec![0, 6], 2),
                (vec![2, 4], 3),
                (vec![3, 2], -2),
                (vec![-1, 2], 5),
            ],
        )
    }

    #[test]
    fn three_generic_lines() {
        let stats = incidence_stats(&[line(1, 0, 0), line(0, 1, 0), line(1, 1, 1)]).unwrap();
        assert_eq!(stats.t_count(2), 3);
        assert_eq!(stats.points.len(), 3);
    }

    #[test]
    fn duplicate_lines_rejected() {
        let err = incidence_stats(&[line(1, 0, 0), line(2, 0, 0)]).unwrap_err();
        assert_eq!(err, PlanarError::DuplicateLine { i: 0, j: 1 });
    }

    #[test]
    fn parallel_lines_meet_at_infinity() {
        // x = 0 and x = 1 meet at (0 : 1 : 0)
        let stats = incidence_stats(&[line(1, 0, 0), line(1, 0, -1)]).unwrap();
        assert_eq!(stats.points.len(), 1);
        assert_eq!(
            stats.points[0].point,
            ProjectiveFlat::new(&[Scalar::zero(), Scalar::one(), Scalar::zero()])
        );
    }

    #[test]
    fn central_pencil_census() {
        let stats = incidence_stats(&[line(1, 0, 0), line(0, 1, 0), line(1, 1, 0), line(1, -1, 0)])
            .unwrap();
        assert_eq!(stats.t_count(4), 1);
        assert_eq!(stats.points.len(), 1);
    }

    #[test]
    fn random_generic_six_lines_have_no_collinearity() {
        let arr = Arrangement::from_int_lines(
            2,
            &[
                (vec![1, -5], 0),
                (vec![3, -8], 0),
                (vec![-7, 8], 0),
                (vec![-6, 2], 0),
                (vec![9, -8], 0),
                (vec![7, -3], 0),
            ],
        );
        // offsets 0 are concurrent; translate off the center first
        let c: Vec<Scalar> = (1..=6).map(Scalar::from_int).collect();
        let lines = projective_lines(&arr.translate(&c)).unwrap();
        let cols = collinearity_conditions(&lines).unwrap();
        assert!(cols.is_empty(), "{cols:?}");
    }

    #[test]
    fn concurrent_triple_is_rejected() {
        let err =
            collinearity_conditions(&[line(1, 0, 0), line(0, 1, 0), line(1, 1, 0), line(1, 2, 3)])
                .unwrap_err();
        assert_eq!(
            err,
            PlanarError::NotGeneric {
                lines: vec![0, 1, 2]
            }
        );
    }

    #[test]
    fn realize_quadrilateral_translate() {
        let arr = example31_arrangement();
        let pairs = quadrilateral_translates(&arr, crate::DEFAULT_SEED).unwrap();
        assert_eq!(pairs.len(), 2);
        for (flat, translate) in &pairs {
            let lines = projective_lines(translate).unwrap();
            let stats = incidence_stats(&lines).unwrap();
            assert_eq!(stats.t_count(3), 4);
            assert_eq!(stats.max_multiplicity(), 3);
            let triples: alloc::collections::BTreeSet<_> = stats.triples().into_iter().collect();
            let expected: alloc::collections::BTreeSet<_> = flat.indices.iter().copied().collect();
            assert_eq!(triples, expected);
        }
    }

    #[test]
    fn realize_center_gives_central_arrangement() {
        let arr = example31_arrangement();
        let disc = build(&arr).unwrap();
        let flats = flats_up_to_rank(&disc, 4);
        assert_eq!(flats[3].len(), 1, "rank n-2 is the center alone");
        let center = &flats[3][0];
        assert_eq!(center.multiplicity(), 20);
        let translate = realize_translate(&arr, center, crate::DEFAULT_SEED).unwrap();
        let lines = projective_lines(&translate).unwrap();
        let stats = incidence_stats(&lines).unwrap();
        assert_eq!(stats.t_count(6), 1);
    }

    #[test]
    fn twelve_generic_lines_have_66_doubles() {
        let rows: Vec<(Vec<i64>, i64)> = [
            (1, -5, 1),
            (3, -8, 7),
            (-7, 8, 2),
            (-6, 2, 9),
            (9, -8, 4),
            (7, -3, 11),
            (2, 9, 5),
            (5, 4, -3),
            (-4, 7, 8),
            (8, 1, -6),
            (3, 5, 13),
            (-9, 2, 10),
        ]
        .iter()
        .map(|&(a, b, c)| (alloc::vec![a, b], c))
        .collect();
        let arr = Arrangement::from_int_lines(2, &rows);
        let stats = incidence_stats(&projective_lines(&arr).unwrap()).unwrap();
        assert_eq!(stats.s, 12);
        assert_eq!(stats.t_count(2), 66);
        assert_eq!(stats.max_multiplicity(), 2);
    }

    #[test]
    fn census_identity_holds_everywhere() {
        let arr = example31_arrangement();
        let lines = projective_lines(&arr).unwrap();
        let stats = incidence_stats(&lines).unwrap();
        let total: usize = stats.t.iter().map(|(m, c)| c * m * (m - 1) / 2).sum();
        assert_eq!(total, 15);
    }
}
