//! Strong involutions on the double points of a trace arrangement, the
//! sigma-completion producing six new lines, the Pappus family generator with
//! its exact tuning equations, and the certification of the resulting
//! 12-line unions (maximum triple points / minimum ordinary points).

use alloc::collections::{BTreeMap, BTreeSet};
use alloc::format;
use alloc::string::{String, ToString};
use alloc::vec::Vec;
use core::fmt;

use num_bigint::BigInt;
use num_rational::BigRational;

use crate::arrangement::{Arrangement, Hyperplane, ProjectiveFlat};
use crate::discriminantal::{build, DiscriminantalArrangement};
use crate::lattice::{closure, flats_up_to_rank, is_simple, Flat};
use crate::planar::{
    collinearity_conditions, cross, incidence_stats, incident, Collinearity, IncidenceStats,
    PlanarError,
};
use crate::poly::Poly;
use crate::scalar::Scalar;
use crate::subset::{combinations, Subset};

/// A product of disjoint transpositions of line indices (possibly empty:
/// the identity).
#[derive(Clone, Debug, PartialEq, Eq, PartialOrd, Ord)]
pub struct Involution {
    pairs: Vec<(usize, usize)>,
}

impl Involution {
    pub fn identity() -> Involution {
        Involution { pairs: Vec::new() }
    }

    pub fn new(mut pairs: Vec<(usize, usize)>) -> Result<Involution, CompletionError> {
        for p in pairs.iter_mut() {
            if p.0 > p.1 {
                *p = (p.1, p.0);
            }
            if p.0 == p.1 {
                return Err(CompletionError::BadInvolution {
                    reason: String::from("a transposition needs two distinct indices"),
                });
            }
        }
        pairs.sort();
        let mut seen = BTreeSet::new();
        for &(a, b) in &pairs {
            if !seen.insert(a) || !seen.insert(b) {
                return Err(CompletionError::BadInvolution {
                    reason: String::from("transpositions are not disjoint"),
                });
            }
        }
        Ok(Involution { pairs })
    }

    /// Parse cycle notation like `"(1 6)(2 5)(3 4)"` (1-based indices).
    pub fn parse(input: &str) -> Result<Involution, CompletionError> {
        let mut pairs = Vec::new();
        let mut it = input.chars().peekable();
        loop {
            while it.peek().is_some_and(|c| c.is_whitespace()) {
                it.next();
            }
            match it.next() {
                None => break,
                Some('(') => {
                    let mut nums = Vec::new();
                    let mut cur = String::new();
                    loop {
                        match it.next() {
                            Some(')') => {
                                if !cur.is_empty() {
                                    nums.push(cur.clone());
                                }
                                break;
                            }
                            Some(c) if c.is_ascii_digit() => cur.push(c),
                            Some(c) if c.is_whitespace() || c == ',' => {
                                if !cur.is_empty() {
                                    nums.push(core::mem::take(&mut cur));
                                }
                            }
                            _ => {
                                return Err(CompletionError::BadInvolution {
                                    reason: String::from("malformed cycle"),
                                })
                            }
                        }
                    }
                    if nums.is_empty() {
                        continue; // "()" is the identity
                    }
                    if nums.len() != 2 {
                        return Err(CompletionError::BadInvolution {
                            reason: String::from("cycles must be transpositions"),
                        });
                    }
                    let a: usize = nums[0].parse().unwrap();
                    let b: usize = nums[1].parse().unwrap();
                    if a == 0 || b == 0 {
                        return Err(CompletionError::BadInvolution {
                            reason: String::from("indices are 1-based"),
                        });
                    }
                    pairs.push((a - 1, b - 1));
                }
                Some(_) => {
                    return Err(CompletionError::BadInvolution {
                        reason: String::from("expected '('"),
                    })
                }
            }
        }
        Involution::new(pairs)
    }

    pub fn pairs(&self) -> &[(usize, usize)] {
        &self.pairs
    }

    pub fn is_identity(&self) -> bool {
        self.pairs.is_empty()
    }

    pub fn apply(&self, i: usize) -> usize {
        for &(a, b) in &self.pairs {
            if i == a {
                return b;
            }
            if i == b {
                return a;
            }
        }
        i
    }

    pub fn apply_pair(&self, (i, j): (usize, usize)) -> (usize, usize) {
        let (a, b) = (self.apply(i), self.apply(j));
        if a <= b {
            (a, b)
        } else {
            (b, a)
        }
    }

    pub fn apply_subset(&self, s: Subset) -> Subset {
        s.map(|e| self.apply(e))
    }

    pub fn fixes_flat(&self, flat: &Flat) -> bool {
        let image: BTreeSet<Subset> = flat.indices.iter().map(|s| self.apply_subset(*s)).collect();
        image == flat.indices
    }
}

impl fmt::Display for Involution {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.pairs.is_empty() {
            return write!(f, "()");
        }
        for &(a, b) in &self.pairs {
            write!(f, "({} {})", a + 1, b + 1)?;
        }
        Ok(())
    }
}

/// All products of disjoint transpositions in `S_n`, identity included
/// (76 elements for n = 6).
pub fn enumerate_involutions(n: usize) -> Vec<Involution> {
    let mut out = Vec::new();
    let mut pairs = Vec::new();
    let all: Vec<usize> = (0..n).collect();
    fn rec(remaining: &[usize], pairs: &mut Vec<(usize, usize)>, out: &mut Vec<Involution>) {
        out.push(Involution {
            pairs: {
                let mut p = pairs.clone();
                p.sort();
                p
            },
        });
        if remaining.len() < 2 {
            return;
        }
        let a = remaining[0];
        for bi in 1..remaining.len() {
            let b = remaining[bi];
            let rest: Vec<usize> = remaining[1..].iter().copied().filter(|&x| x != b).collect();
            pairs.push((a, b));
            rec(&rest, pairs, out);
            pairs.pop();
        }
        // or leave `a` fixed
        rec(&remaining[1..], pairs, out);
    }
    rec(&all, &mut pairs, &mut out);
    out.sort();
    out.dedup();
    out
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub enum CompletionError {
    NoCollinearities,
    NotStrong { sigma: String },
    BadInvolution { reason: String },
    UncoverableFixedPoint { pair: (usize, usize) },
    AmbiguousCover { pair: (usize, usize) },
    CollinearityTooLong { len: usize },
    DegenerateParameters { reason: String },
    NoRationalSolution,
    Planar(PlanarError),
}

impl fmt::Display for CompletionError {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            CompletionError::NoCollinearities => {
                write!(
                    f,
                    "the trace has no nontrivial collinearity; strong actions are vacuous"
                )
            }
            CompletionError::NotStrong { sigma } => {
                write!(f, "{sigma} does not act strongly on the trace")
            }
            CompletionError::BadInvolution { reason } => write!(f, "bad involution: {reason}"),
            CompletionError::UncoverableFixedPoint { pair } => write!(
                f,
                "fixed double point P{}{} lies on {{0 or >1}} completion lines",
                pair.0 + 1,
                pair.1 + 1
            ),
            CompletionError::AmbiguousCover { pair } => write!(
                f,
                "double point P{}{} is covered by two completion lines",
                pair.0 + 1,
                pair.1 + 1
            ),
            CompletionError::CollinearityTooLong { len } => {
                write!(
                    f,
                    "collinearity with {len} points has no 3-point flat pattern"
                )
            }
            CompletionError::DegenerateParameters { reason } => {
                write!(f, "degenerate parameters: {reason}")
            }
            CompletionError::NoRationalSolution => {
                write!(f, "no rational solution in family")
            }
            CompletionError::Planar(e) => write!(f, "{e}"),
        }
    }
}

impl From<PlanarError> for CompletionError {
    fn from(e: PlanarError) -> CompletionError {
        CompletionError::Planar(e)
    }
}

fn double_points(
    lines: &[ProjectiveFlat],
) -> Result<BTreeMap<(usize, usize), ProjectiveFlat>, CompletionError> {
    let stats = incidence_stats(lines)?;
    let mut out = BTreeMap::new();
    for p in &stats.points {
        if p.lines.len() > 2 {
            return Err(CompletionError::Planar(PlanarError::NotGeneric {
                lines: p.lines.iter().copied().collect(),
            }));
        }
        let idx: Vec<usize> = p.lines.iter().copied().collect();
        out.insert((idx[0], idx[1]), p.point.clone());
    }
    Ok(out)
}

fn acts_strongly(sigma: &Involution, collinearities: &[Collinearity]) -> bool {
    for c in collinearities {
        let set: BTreeSet<(usize, usize)> = c.pairs().into_iter().collect();
        for pair in &set {
            if !set.contains(&sigma.apply_pair(*pair)) {
                return false;
            }
        }
    }
    true
}

/// Every non-identity involution mapping each nontrivial collinearity of the
/// trace into itself. Fails when there is no collinearity at all: the notion
/// is vacuous there and a completion would be meaningless.
pub fn strong_involutions(lines: &[ProjectiveFlat]) -> Result<Vec<Involution>, CompletionError> {
    let collinearities = collinearity_conditions(lines)?;
    if collinearities.is_empty() {
        return Err(CompletionError::NoCollinearities);
    }
    Ok(enumerate_involutions(lines.len())
        .into_iter()
        .filter(|s| !s.is_identity() && acts_strongly(s, &collinearities))
        .collect())
}

/// The sigma-completion: the joins of the two-point sigma-orbits of the
/// double points, covering every double point exactly once.
#[derive(Clone, Debug)]
pub struct CompletionResult {
    pub sigma: Involution,
    pub lines: Vec<ProjectiveFlat>,
    /// Double point pair -> index into `lines` of its unique cover.
    pub orbit_map: BTreeMap<(usize, usize), usize>,
    /// Indices of completion lines carrying >= 3 double points.
    pub axes: Vec<usize>,
}

pub fn sigma_completion(
    lines: &[ProjectiveFlat],
    sigma: &Involution,
) -> Result<CompletionResult, CompletionError> {
    let collinearities = collinearity_conditions(lines)?;
    if collinearities.is_empty() {
        return Err(CompletionError::NoCollinearities);
    }
    if sigma.is_identity() || !acts_strongly(sigma, &collinearities) {
        return Err(CompletionError::NotStrong {
            sigma: sigma.to_string(),
        });
    }
    let points = double_points(lines)?;
    let mut joined: BTreeMap<ProjectiveFlat, (usize, usize)> = BTreeMap::new();
    for (&pair, point) in &points {
        let image = sigma.apply_pair(pair);
        if image <= pair {
            continue;
        }
        let other = &points[&image];
        let line = ProjectiveFlat::new(&cross(point.coeffs(), other.coeffs()));
        if let Some(prev) = joined.insert(line, pair) {
            return Err(CompletionError::AmbiguousCover { pair: prev });
        }
    }
    let comp_lines: Vec<ProjectiveFlat> = joined.keys().cloned().collect();
    let mut orbit_map = BTreeMap::new();
    let mut counts = alloc::vec![0usize; comp_lines.len()];
    for (&pair, point) in &points {
        let on: Vec<usize> = comp_lines
            .iter()
            .enumerate()
            .filter(|(_, l)| incident(l, point))
            .map(|(i, _)| i)
            .collect();
        match on.len() {
            1 => {
                counts[on[0]] += 1;
                orbit_map.insert(pair, on[0]);
            }
            0 => {
                return Err(CompletionError::UncoverableFixedPoint { pair });
            }
            _ => {
                let e = if sigma.apply_pair(pair) == pair {
                    CompletionError::UncoverableFixedPoint { pair }
                } else {
                    CompletionError::AmbiguousCover { pair }
                };
                return Err(e);
            }
        }
    }
    let axes: Vec<usize> = counts
        .iter()
        .enumerate()
        .filter(|(_, &c)| c >= 3)
        .map(|(i, _)| i)
        .collect();
    Ok(CompletionResult {
        sigma: sigma.clone(),
        lines: comp_lines,
        orbit_map,
        axes,
    })
}

/// Two flats of `B(n, 3, .)` are independent when no hyperplane contains both.
pub fn independent(a: &Flat, b: &Flat) -> bool {
    a.indices.intersection(&b.indices).next().is_none()
}

/// Is `p` the intersection of three hyperplanes, each containing exactly one
/// of the three pairwise independent flats?
pub fn purely_dependent(p: &Flat, basis: [&Flat; 3]) -> bool {
    debug_assert!(independent(basis[0], basis[1]));
    debug_assert!(independent(basis[0], basis[2]));
    debug_assert!(independent(basis[1], basis[2]));
    if p.indices.len() != 3 {
        return false;
    }
    let mut hit = [false; 3];
    for l in &p.indices {
        let containing: Vec<usize> = (0..3).filter(|&i| basis[i].contains(*l)).collect();
        if containing.len() != 1 {
            return false;
        }
        hit[containing[0]] = true;
    }
    hit.iter().all(|&h| h)
}

/// Index family in `B(n, 3, .)` of the 3-point a collinearity corresponds
/// to: each hyperplane is the union of the other two line pairs.
pub fn collinearity_flat(c: &Collinearity) -> Result<[Subset; 3], CompletionError> {
    if c.points.len() != 3 {
        return Err(CompletionError::CollinearityTooLong {
            len: c.points.len(),
        });
    }
    let pairs: Vec<Subset> = c
        .pairs()
        .iter()
        .map(|&(i, j)| Subset::from_elements(&[i, j]))
        .collect();
    let mut out = [
        pairs[1].union(pairs[2]),
        pairs[0].union(pairs[2]),
        pairs[0].union(pairs[1]),
    ];
    out.sort();
    Ok(out)
}

/// The `k = 3` arrangement whose trace at infinity is the given line set
/// (planes through the origin with the line coefficients as normals).
pub fn trace_arrangement(lines: &[ProjectiveFlat]) -> Arrangement {
    let hyperplanes = lines
        .iter()
        .enumerate()
        .map(|(i, l)| Hyperplane {
            normal: l.coeffs().to_vec(),
            offset: Scalar::zero(),
            label: format!("l{}", i + 1),
        })
        .collect();
    Arrangement::new(3, hyperplanes).expect("projective lines have nonzero coefficients")
}

/// `B(n, 3, A_inf)` of a trace given by projective lines.
pub fn b3_of_lines(lines: &[ProjectiveFlat]) -> Result<DiscriminantalArrangement, CompletionError> {
    build(&trace_arrangement(lines))
        .map_err(|_| CompletionError::Planar(PlanarError::NotGeneric { lines: Vec::new() }))
}

/// Multiplicity-3 rank-2 flats of `B(n, 3, A_inf)`; one per collinearity.
pub fn mult3_flats(disc: &DiscriminantalArrangement) -> Vec<Flat> {
    flats_up_to_rank(disc, 2)[1]
        .iter()
        .filter(|f| f.multiplicity() == 3)
        .cloned()
        .collect()
}

fn max_independent_count(flats: &[Flat]) -> usize {
    let n = flats.len();
    assert!(n <= 20, "independent-set search capped at 20 flats");
    let mut best = 0;
    for mask in 0u32..(1 << n) {
        let chosen: Vec<usize> = (0..n).filter(|i| mask & (1 << i) != 0).collect();
        if chosen.len() <= best {
            continue;
        }
        let ok = chosen.iter().enumerate().all(|(ci, &i)| {
            chosen[ci + 1..]
                .iter()
                .all(|&j| independent(&flats[i], &flats[j]))
        });
        if ok {
            best = chosen.len();
        }
    }
    best
}

// ---------------------------------------------------------------------------
// Pappus family
// ---------------------------------------------------------------------------

/// Six rational parameters: three points `(a_i, 0)` on the lower carrier and
/// three points `(b_j, 1)` on the upper carrier of the hexagon.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct PappusParams {
    pub a: [BigRational; 3],
    pub b: [BigRational; 3],
}

impl PappusParams {
    pub fn from_ints(vals: [i64; 6]) -> PappusParams {
        let r = |v: i64| BigRational::from_integer(BigInt::from(v));
        PappusParams {
            a: [r(vals[0]), r(vals[1]), r(vals[2])],
            b: [r(vals[3]), r(vals[4]), r(vals[5])],
        }
    }

    fn with(&self, i: usize, v: BigRational) -> PappusParams {
        let mut out = self.clone();
        if i < 3 {
            out.a[i] = v;
        } else {
            out.b[i - 3] = v;
        }
        out
    }
}

/// The committed maximal instance (three collinearities, concurrent axes).
pub fn pinned_pappus_p() -> PappusParams {
    PappusParams::from_ints([0, 1, 3, 2, 5, 11])
}

/// The committed minimal instance (four collinearities, concurrent axes).
pub fn pinned_pappus_pc() -> PappusParams {
    PappusParams::from_ints([0, 1, 2, 3, 4, 5])
}

fn raw_hexagon_lines(p: &PappusParams) -> [Vec<Scalar>; 6] {
    let pt_a = |i: usize| {
        alloc::vec![
            Scalar::rational(p.a[i].clone()),
            Scalar::zero(),
            Scalar::one(),
        ]
    };
    let pt_b = |j: usize| {
        alloc::vec![
            Scalar::rational(p.b[j].clone()),
            Scalar::one(),
            Scalar::one(),
        ]
    };
    // l1=A1B2 l2=A1B3 l3=A2B1 l4=A2B3 l5=A3B1 l6=A3B2
    [
        cross(&pt_a(0), &pt_b(1)),
        cross(&pt_a(0), &pt_b(2)),
        cross(&pt_a(1), &pt_b(0)),
        cross(&pt_a(1), &pt_b(2)),
        cross(&pt_a(2), &pt_b(0)),
        cross(&pt_a(2), &pt_b(1)),
    ]
}

/// The six hexagon lines joining the carrier points, as a trace in the
/// projective plane. The three classical collinearities (the two carriers
/// and the hexagon axis) are re-detected, not assumed.
pub fn pappus_lines(params: &PappusParams) -> Result<Vec<ProjectiveFlat>, CompletionError> {
    for (x, y) in [(0, 1), (0, 2), (1, 2)] {
        if params.a[x] == params.a[y] {
            return Err(CompletionError::DegenerateParameters {
                reason: format!("carrier points a{} and a{} coincide", x + 1, y + 1),
            });
        }
        if params.b[x] == params.b[y] {
            return Err(CompletionError::DegenerateParameters {
                reason: format!("carrier points b{} and b{} coincide", x + 1, y + 1),
            });
        }
    }
    let lines: Vec<ProjectiveFlat> = raw_hexagon_lines(params)
        .iter()
        .map(|raw| ProjectiveFlat::new(raw))
        .collect();
    let cols = collinearity_conditions(&lines).map_err(|e| match e {
        PlanarError::NotGeneric { lines } => CompletionError::DegenerateParameters {
            reason: format!("hexagon lines {:?} concurrent", lines),
        },
        PlanarError::DuplicateLine { i, j } => CompletionError::DegenerateParameters {
            reason: format!("hexagon lines {} and {} coincide", i + 1, j + 1),
        },
        other => CompletionError::Planar(other),
    })?;
    if cols.len() < 3 {
        return Err(CompletionError::DegenerateParameters {
            reason: String::from("classical collinearities missing"),
        });
    }
    Ok(lines)
}

fn det3(rows: [&[Scalar]; 3]) -> Scalar {
    crate::linalg::Matrix::from_rows(rows.iter().map(|r| r.to_vec()).collect()).det()
}

/// Concurrency of the three classical axes, as an exact polynomial value in
/// the parameters (no canonicalization anywhere, so sampling it interpolates
/// honestly).
pub fn concurrency_det(params: &PappusParams) -> Scalar {
    let l = raw_hexagon_lines(params);
    // X3 = l1 ^ l3, X2 = l2 ^ l5 span the hexagon axis
    let x3 = cross(&l[0], &l[2]);
    let x2 = cross(&l[1], &l[4]);
    let axis = cross(&x2, &x3);
    let carrier_a = [Scalar::zero(), Scalar::one(), Scalar::zero()];
    let carrier_b = [Scalar::zero(), Scalar::one(), -&Scalar::one()];
    det3([&carrier_a, &carrier_b, &axis])
}

/// The additional collinearity A2, B2, X2 that upgrades a tuned family to
/// the four-collinearity configuration.
pub fn fourth_collinearity_det(params: &PappusParams) -> Scalar {
    let l = raw_hexagon_lines(params);
    let p34 = cross(&l[2], &l[3]);
    let p16 = cross(&l[0], &l[5]);
    let p25 = cross(&l[1], &l[4]);
    det3([&p34, &p16, &p25])
}

fn scalar_to_rat(s: &Scalar) -> BigRational {
    match s {
        Scalar::Rational(r) => r.clone(),
        Scalar::Quadratic { .. } => unreachable!("pappus parameters are rational"),
    }
}

fn tune(
    params: &PappusParams,
    free: usize,
    det: impl Fn(&PappusParams) -> Scalar,
    degree_bound: usize,
) -> Result<PappusParams, CompletionError> {
    assert!(free < 6, "free parameter index out of range");
    if det(params).is_zero() && pappus_lines(params).is_ok() {
        return Ok(params.clone());
    }
    let samples: Vec<(BigRational, BigRational)> = (0..=degree_bound as i64)
        .map(|t| {
            let x = BigRational::from_integer(BigInt::from(t));
            let candidate = params.with(free, x.clone());
            (x, scalar_to_rat(&det(&candidate)))
        })
        .collect();
    let f = Poly::interpolate(&samples);
    if f.is_zero() {
        // concurrent for every parameter value; keep the current one if valid
        return if pappus_lines(params).is_ok() {
            Ok(params.clone())
        } else {
            Err(CompletionError::NoRationalSolution)
        };
    }
    for root in f.rational_roots() {
        let candidate = params.with(free, root);
        if pappus_lines(&candidate).is_ok() {
            debug_assert!(det(&candidate).is_zero());
            return Ok(candidate);
        }
    }
    Err(CompletionError::NoRationalSolution)
}

/// Solve the axis-concurrency equation exactly for the designated free
/// parameter (0..2 pick `a_i`, 3..5 pick `b_j`). An already-concurrent
/// family is returned unchanged.
pub fn concurrency_tune(
    params: &PappusParams,
    free: usize,
) -> Result<PappusParams, CompletionError> {
    tune(params, free, concurrency_det, 12)
}

/// Solve the fourth-collinearity equation for the designated free parameter.
/// Combined with `concurrency_tune` this produces the four-collinearity
/// instances.
pub fn fourth_collinearity_tune(
    params: &PappusParams,
    free: usize,
) -> Result<PappusParams, CompletionError> {
    tune(params, free, fourth_collinearity_det, 12)
}

// ---------------------------------------------------------------------------
// Union certification and the clause checks
// ---------------------------------------------------------------------------

#[derive(Clone, Debug)]
pub struct UnionCertificate {
    pub stats: IncidenceStats,
    /// `t(3) = 19 and s = 12`; only asserted for six-line traces.
    pub max_triple: Option<bool>,
    /// `t(2) = 6 and s = 12`; only asserted for six-line traces.
    pub min_ordinary: Option<bool>,
    pub completion_central: bool,
    /// Does `B(n, 3, A_inf)` contain a purely dependent multiplicity-3 flat
    /// fixed by sigma?
    pub purely_dependent_fixed: bool,
}

fn completion_is_central(comp: &CompletionResult) -> bool {
    let rows: Vec<Vec<Scalar>> = comp.lines.iter().map(|l| l.coeffs().to_vec()).collect();
    crate::linalg::Matrix::from_rows(rows).rank() <= 2
}

fn purely_dependent_fixed(
    lines: &[ProjectiveFlat],
    sigma: &Involution,
) -> Result<bool, CompletionError> {
    let disc = b3_of_lines(lines)?;
    let m3 = mult3_flats(&disc);
    for (pi, p) in m3.iter().enumerate() {
        if !sigma.fixes_flat(p) {
            continue;
        }
        let others: Vec<&Flat> = m3
            .iter()
            .enumerate()
            .filter(|(i, _)| *i != pi)
            .map(|(_, f)| f)
            .collect();
        for c in combinations(others.len(), 3) {
            let pick: Vec<&Flat> = c.elements().map(|i| others[i]).collect();
            if independent(pick[0], pick[1])
                && independent(pick[0], pick[2])
                && independent(pick[1], pick[2])
                && purely_dependent(p, [pick[0], pick[1], pick[2]])
            {
                return Ok(true);
            }
        }
    }
    Ok(false)
}

/// Census and verdicts for the union of a trace with its completion.
pub fn union_certify(
    lines: &[ProjectiveFlat],
    comp: &CompletionResult,
) -> Result<UnionCertificate, CompletionError> {
    let mut all = lines.to_vec();
    all.extend(comp.lines.iter().cloned());
    let stats = incidence_stats(&all)?;
    let certified = lines.len() == 6;
    let max_triple = certified.then(|| stats.s == 12 && stats.t_count(3) == 19);
    let min_ordinary = certified.then(|| stats.s == 12 && stats.t_count(2) == 6);
    Ok(UnionCertificate {
        max_triple,
        min_ordinary,
        completion_central: completion_is_central(comp),
        purely_dependent_fixed: purely_dependent_fixed(lines, &comp.sigma)?,
        stats,
    })
}

/// Which affine chart was used to read the completion as a line arrangement.
#[derive(Clone, Debug, PartialEq, Eq)]
pub enum ChartChoice {
    /// No union line at infinity (the standard `z = 0` chart).
    Standard,
    /// A union line (0-based index into trace followed by completion lines).
    UnionLine(usize),
}

impl fmt::Display for ChartChoice {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            ChartChoice::Standard => write!(f, "standard"),
            ChartChoice::UnionLine(i) => write!(f, "union-line-{}", i + 1),
        }
    }
}

/// View the completion as an affine arrangement in the chart that sends
/// `chart_line` to infinity (or the standard chart). `None` when some
/// completion line or intersection point would land at infinity.
fn completion_in_chart(
    comp: &CompletionResult,
    chart_line: Option<&ProjectiveFlat>,
) -> Option<Arrangement> {
    let infinity = match chart_line {
        None => ProjectiveFlat::new(&[Scalar::zero(), Scalar::zero(), Scalar::one()]),
        Some(h) => h.clone(),
    };
    if comp.lines.contains(&infinity) {
        return None;
    }
    // no pairwise meet may sit on the chart line
    for i in 0..comp.lines.len() {
        for j in i + 1..comp.lines.len() {
            let p = crate::planar::meet(&comp.lines[i], &comp.lines[j])?;
            if incident(&infinity, &p) {
                return None;
            }
        }
    }
    let mt = crate::planar::chart_matrix_t(&infinity);
    let mut hyperplanes = Vec::new();
    for (i, l) in comp.lines.iter().enumerate() {
        let (normal, offset) = crate::planar::line_to_affine(&mt, l)?;
        hyperplanes.push(Hyperplane {
            normal,
            offset,
            label: format!("c{}", i + 1),
        });
    }
    Arrangement::new(2, hyperplanes).ok()
}

/// Search the charts (standard first, then every union line) for one in
/// which the completion is an affine arrangement lying in a simple
/// non-very-generic multiplicity-4 rank-3 flat of its own `B(6, 2, .)`.
fn quadrilateral_chart(
    lines: &[ProjectiveFlat],
    comp: &CompletionResult,
) -> Result<Option<ChartChoice>, CompletionError> {
    let stats = incidence_stats(&comp.lines)?;
    if stats.t_count(3) != 4 || stats.max_multiplicity() > 3 {
        return Ok(None);
    }
    let mut charts: Vec<(ChartChoice, Option<ProjectiveFlat>)> =
        alloc::vec![(ChartChoice::Standard, None)];
    for (i, l) in lines.iter().chain(comp.lines.iter()).enumerate() {
        charts.push((ChartChoice::UnionLine(i), Some(l.clone())));
    }
    for (choice, chart_line) in charts {
        let Some(arr) = completion_in_chart(comp, chart_line.as_ref()) else {
            continue;
        };
        if !arr.is_generic() {
            continue;
        }
        let Ok(disc) = build(&arr) else { continue };
        let triples = stats.triples();
        let flat = closure(&disc, &triples);
        let exact =
            flat.indices.len() == triples.len() && triples.iter().all(|t| flat.contains(*t));
        if flat.rank == 3 && exact && is_simple(&disc, &flat) && flat.multiplicity() == 4 {
            // the arrangement itself must lie on the flat
            let offsets = arr.offsets();
            let on_flat = triples
                .iter()
                .all(|t| crate::linalg::dot(&disc.alpha(*t).unwrap().alpha, &offsets).is_zero());
            debug_assert!(on_flat);
            if on_flat {
                return Ok(Some(choice));
            }
        }
    }
    Ok(None)
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct ClauseReport {
    pub lhs: Option<bool>,
    pub rhs: Option<bool>,
    pub agreement: Option<bool>,
}

impl ClauseReport {
    fn of(lhs: Option<bool>, rhs: Option<bool>) -> ClauseReport {
        ClauseReport {
            lhs,
            rhs,
            agreement: lhs.zip(rhs).map(|(l, r)| l == r),
        }
    }

    fn inapplicable() -> ClauseReport {
        ClauseReport {
            lhs: None,
            rhs: None,
            agreement: None,
        }
    }
}

/// Clause-by-clause evaluation of the extremality biconditionals on one
/// instance; nothing is asserted beyond the instance itself.
#[derive(Clone, Debug)]
pub struct ConjectureReport {
    pub n: usize,
    pub sigma: Involution,
    pub independent_count: usize,
    pub expected_independent: Option<usize>,
    pub has_max_independent: Option<bool>,
    /// `Some(reason)` when the completion failed and the clauses are
    /// inapplicable.
    pub completion_error: Option<String>,
    pub union: Option<UnionCertificate>,
    /// minimum-ordinary clause: union minimal <=> purely dependent fixed
    /// flat exists and the completion is central.
    pub clause_min_ordinary: ClauseReport,
    /// maximum-triple clause: union maximal <=> the completion lies in a
    /// maximal simple non-very-generic flat in some chart.
    pub clause_max_triple: ClauseReport,
    pub chart: Option<ChartChoice>,
}

pub fn conjecture_report(
    lines: &[ProjectiveFlat],
    sigma: &Involution,
) -> Result<ConjectureReport, CompletionError> {
    let collinearities = collinearity_conditions(lines)?;
    if collinearities.is_empty() {
        return Err(CompletionError::NoCollinearities);
    }
    if sigma.is_identity() || !acts_strongly(sigma, &collinearities) {
        return Err(CompletionError::NotStrong {
            sigma: sigma.to_string(),
        });
    }
    let n = lines.len();
    let disc3 = b3_of_lines(lines)?;
    let m3 = mult3_flats(&disc3);
    let independent_count = max_independent_count(&m3);
    let expected_independent = (n == 6).then_some(3);
    let has_max_independent = expected_independent.map(|e| independent_count == e);
    match sigma_completion(lines, sigma) {
        Err(e) => Ok(ConjectureReport {
            n,
            sigma: sigma.clone(),
            independent_count,
            expected_independent,
            has_max_independent,
            completion_error: Some(e.to_string()),
            union: None,
            clause_min_ordinary: ClauseReport::inapplicable(),
            clause_max_triple: ClauseReport::inapplicable(),
            chart: None,
        }),
        Ok(comp) => {
            let union = union_certify(lines, &comp)?;
            let clause1 = ClauseReport::of(
                union.min_ordinary,
                Some(union.purely_dependent_fixed && union.completion_central),
            );
            let (rhs2, chart) = if n == 6 {
                let chart = quadrilateral_chart(lines, &comp)?;
                (Some(chart.is_some()), chart)
            } else {
                (None, None)
            };
            let clause2 = ClauseReport::of(union.max_triple, rhs2);
            Ok(ConjectureReport {
                n,
                sigma: sigma.clone(),
                independent_count,
                expected_independent,
                has_max_independent,
                completion_error: None,
                union: Some(union),
                clause_min_ordinary: clause1,
                clause_max_triple: clause2,
                chart,
            })
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::planar::projective_lines;
    use alloc::vec;

    fn p_lines() -> Vec<ProjectiveFlat> {
        pappus_lines(&pinned_pappus_p()).unwrap()
    }

    fn pc_lines() -> Vec<ProjectiveFlat> {
        pappus_lines(&pinned_pappus_pc()).unwrap()
    }

    fn sig(s: &str) -> Involution {
        Involution::parse(s).unwrap()
    }

    #[test]
    fn involution_enumeration_count() {
        assert_eq!(enumerate_involutions(6).len(), 76);
        assert_eq!(enumerate_involutions(4).len(), 10);
    }

    #[test]
    fn involution_parse_and_display() {
        let s = sig("(1 6)(2 5)(3 4)");
        assert_eq!(alloc::format!("{s}"), "(1 6)(2 5)(3 4)");
        assert_eq!(s.apply(0), 5);
        assert_eq!(s.apply_pair((0, 1)), (4, 5));
        assert!(sig("()").is_identity());
        assert!(Involution::parse("(1 1)").is_err());
        assert!(Involution::parse("(1 2)(2 3)").is_err());
        assert!(Involution::parse("(1 2 3)").is_err());
    }

    #[test]
    fn pinned_instances_have_expected_collinearities() {
        let p = collinearity_conditions(&p_lines()).unwrap();
        assert_eq!(p.len(), 3);
        let pc = collinearity_conditions(&pc_lines()).unwrap();
        assert_eq!(pc.len(), 4);
        // tuning determinants vanish on the committed instances
        assert!(concurrency_det(&pinned_pappus_p()).is_zero());
        assert!(concurrency_det(&pinned_pappus_pc()).is_zero());
        assert!(fourth_collinearity_det(&pinned_pappus_pc()).is_zero());
        assert!(!fourth_collinearity_det(&pinned_pappus_p()).is_zero());
    }

    #[test]
    fn classical_pair_pattern() {
        let cols = collinearity_conditions(&p_lines()).unwrap();
        let patterns: BTreeSet<BTreeSet<(usize, usize)>> = cols
            .iter()
            .map(|c| c.pairs().into_iter().collect())
            .collect();
        let expect: BTreeSet<BTreeSet<(usize, usize)>> = [
            [(0, 1), (2, 3), (4, 5)],
            [(1, 3), (0, 5), (2, 4)],
            [(0, 2), (1, 4), (3, 5)],
        ]
        .iter()
        .map(|c| c.iter().copied().collect())
        .collect();
        assert_eq!(patterns, expect);
    }

    #[test]
    fn strong_involutions_on_p() {
        let strong = strong_involutions(&p_lines()).unwrap();
        let expect = vec![
            sig("(1 2)(3 5)(4 6)"),
            sig("(1 3)(2 4)(5 6)"),
            sig("(1 6)(2 5)(3 4)"),
        ];
        assert_eq!(strong, expect);
    }

    #[test]
    fn strong_involution_on_pc_is_unique() {
        let strong = strong_involutions(&pc_lines()).unwrap();
        assert_eq!(strong, vec![sig("(1 6)(2 5)(3 4)")]);
    }

    #[test]
    fn no_collinearities_is_refused() {
        let arr = Arrangement::from_int_lines(
            2,
            &[
                (vec![1, -5], 1),
                (vec![3, -8], 2),
                (vec![-7, 8], 3),
                (vec![-6, 2], 4),
                (vec![9, -8], 5),
                (vec![7, -3], 6),
            ],
        );
        let lines = projective_lines(&arr).unwrap();
        assert_eq!(
            strong_involutions(&lines).unwrap_err(),
            CompletionError::NoCollinearities
        );
    }

    #[test]
    fn completion_of_p_has_axes_and_pairing_lines() {
        let lines = p_lines();
        for sigma in strong_involutions(&lines).unwrap() {
            let comp = sigma_completion(&lines, &sigma).unwrap();
            assert_eq!(comp.lines.len(), 6);
            assert_eq!(comp.axes.len(), 3);
            assert_eq!(comp.orbit_map.len(), 15);
            // each double point covered exactly once, axes carry 3 points,
            // pairing lines carry 2
            let mut counts = vec![0usize; comp.lines.len()];
            for &li in comp.orbit_map.values() {
                counts[li] += 1;
            }
            for (i, c) in counts.iter().enumerate() {
                if comp.axes.contains(&i) {
                    assert_eq!(*c, 3);
                } else {
                    assert_eq!(*c, 2);
                }
            }
        }
    }

    #[test]
    fn non_strong_sigma_is_rejected() {
        let lines = p_lines();
        let err = sigma_completion(&lines, &sig("(1 2)")).unwrap_err();
        assert!(matches!(err, CompletionError::NotStrong { .. }));
    }

    /// Six lines, two through each of three collinear points: exactly one
    /// nontrivial collinearity {P12, P34, P56}.
    fn single_collinearity_lines() -> Vec<ProjectiveFlat> {
        let arr = Arrangement::from_int_lines(
            2,
            &[
                (vec![1, -1], 0),
                (vec![1, 1], 0),
                (vec![2, -1], 2),
                (vec![3, 1], 3),
                (vec![1, 2], 3),
                (vec![4, -1], 12),
            ],
        );
        projective_lines(&arr).unwrap()
    }

    #[test]
    fn single_collinearity_strong_set_by_brute_force() {
        let lines = single_collinearity_lines();
        let cols = collinearity_conditions(&lines).unwrap();
        assert_eq!(cols.len(), 1);
        let set: BTreeSet<(usize, usize)> = cols[0].pairs().into_iter().collect();
        assert_eq!(set, BTreeSet::from([(0, 1), (2, 3), (4, 5)]));
        let strong = strong_involutions(&lines).unwrap();
        assert!(!strong.is_empty());
        // brute force over all 76 involutions agrees with the filter
        for sigma in enumerate_involutions(6) {
            let stabilizes =
                !sigma.is_identity() && set.iter().all(|p| set.contains(&sigma.apply_pair(*p)));
            assert_eq!(strong.contains(&sigma), stabilizes, "{sigma}");
        }
    }

    #[test]
    fn uncoverable_fixed_point_is_an_error() {
        // (1 2) is strong on the single collinearity but leaves six double
        // points fixed off any orbit line
        let lines = single_collinearity_lines();
        let err = sigma_completion(&lines, &sig("(1 2)")).unwrap_err();
        assert!(matches!(
            err,
            CompletionError::UncoverableFixedPoint { .. } | CompletionError::AmbiguousCover { .. }
        ));
    }

    #[test]
    fn conjecture_report_marks_clauses_inapplicable_on_completion_failure() {
        let lines = single_collinearity_lines();
        let rep = conjecture_report(&lines, &sig("(1 2)")).unwrap();
        assert!(rep.completion_error.is_some());
        assert_eq!(rep.clause_min_ordinary.agreement, None);
        assert_eq!(rep.clause_max_triple.agreement, None);
        assert_eq!(rep.independent_count, 1);
        assert_eq!(rep.has_max_independent, Some(false));
    }

    #[test]
    fn union_census_of_p() {
        let lines = p_lines();
        let comp = sigma_completion(&lines, &sig("(1 2)(3 5)(4 6)")).unwrap();
        let cert = union_certify(&lines, &comp).unwrap();
        assert_eq!(cert.stats.t_count(3), 19);
        assert_eq!(cert.stats.t_count(2), 9);
        assert_eq!(cert.max_triple, Some(true));
        assert_eq!(cert.min_ordinary, Some(false));
        assert!(!cert.completion_central);
        assert!(!cert.purely_dependent_fixed);
    }

    #[test]
    fn union_census_of_pc() {
        let lines = pc_lines();
        let comp = sigma_completion(&lines, &sig("(1 6)(2 5)(3 4)")).unwrap();
        let cert = union_certify(&lines, &comp).unwrap();
        assert_eq!(cert.stats.t_count(6), 1);
        assert_eq!(cert.stats.t_count(3), 15);
        assert_eq!(cert.stats.t_count(2), 6);
        assert_eq!(cert.max_triple, Some(false));
        assert_eq!(cert.min_ordinary, Some(true));
        assert!(cert.completion_central);
        assert!(cert.purely_dependent_fixed);
    }

    #[test]
    fn collinearity_flats_are_genuine_mult3_flats() {
        let lines = p_lines();
        let disc = b3_of_lines(&lines).unwrap();
        let cols = collinearity_conditions(&lines).unwrap();
        let m3 = mult3_flats(&disc);
        assert_eq!(m3.len(), 3);
        for c in &cols {
            let fam = collinearity_flat(c).unwrap();
            let flat = closure(&disc, &fam);
            assert_eq!(flat.rank, 2);
            assert_eq!(flat.multiplicity(), 3);
            assert!(m3.iter().any(|f| f.indices == flat.indices));
        }
        // pairwise independent
        assert!(independent(&m3[0], &m3[1]));
        assert!(independent(&m3[0], &m3[2]));
        assert!(independent(&m3[1], &m3[2]));
        assert!(!independent(&m3[0], &m3[0]));
    }

    #[test]
    fn collinearity_flat_is_equivariant() {
        let lines = p_lines();
        let cols = collinearity_conditions(&lines).unwrap();
        let sigma = sig("(1 6)(2 5)(3 4)");
        for c in &cols {
            let fam = collinearity_flat(c).unwrap();
            // sigma permutes the collinearities; find the image collinearity
            let image_pairs: BTreeSet<(usize, usize)> =
                c.pairs().iter().map(|&p| sigma.apply_pair(p)).collect();
            let image = cols
                .iter()
                .find(|c2| c2.pairs().iter().copied().collect::<BTreeSet<_>>() == image_pairs)
                .expect("sigma permutes collinearities");
            let mut mapped = fam.map(|s| sigma.apply_subset(s));
            mapped.sort();
            assert_eq!(mapped, collinearity_flat(image).unwrap());
        }
    }

    #[test]
    fn purely_dependent_fourth_flat_in_pc() {
        let lines = pc_lines();
        let disc = b3_of_lines(&lines).unwrap();
        let m3 = mult3_flats(&disc);
        assert_eq!(m3.len(), 4);
        let mut found = 0;
        for (pi, p) in m3.iter().enumerate() {
            let others: Vec<&Flat> = m3
                .iter()
                .enumerate()
                .filter(|(i, _)| *i != pi)
                .map(|(_, f)| f)
                .collect();
            if independent(others[0], others[1])
                && independent(others[0], others[2])
                && independent(others[1], others[2])
                && purely_dependent(p, [others[0], others[1], others[2]])
            {
                found += 1;
                // a basis flat itself is never purely dependent
                assert!(!purely_dependent(
                    others[0],
                    [others[0], others[1], others[2]]
                ));
            }
        }
        assert_eq!(found, 1);
    }

    #[test]
    fn tune_recovers_pinned_p() {
        // family (0,1,3,2,5,t): the concurrency equation is linear in t
        let family = PappusParams::from_ints([0, 1, 3, 2, 5, 7]);
        let tuned = concurrency_tune(&family, 5).unwrap();
        assert_eq!(tuned, pinned_pappus_p());
        // already concurrent: fixed point
        assert_eq!(concurrency_tune(&tuned, 5).unwrap(), tuned);
    }

    #[test]
    fn fourth_collinearity_tune_recovers_pinned_pc() {
        // on the concurrency locus the extra collinearity forces the middle
        // carrier point to the midpoint, so tuning a3 lands on the pinned
        // instance
        let family = PappusParams::from_ints([0, 1, 9, 3, 4, 5]);
        let tuned = fourth_collinearity_tune(&family, 2).unwrap();
        assert_eq!(tuned, pinned_pappus_pc());
        assert!(concurrency_det(&tuned).is_zero());
    }

    #[test]
    fn tune_fails_when_no_valid_root() {
        // a2 = a3 for every parameter value, so every root is degenerate
        let family = PappusParams::from_ints([0, 1, 1, 3, 4, 7]);
        assert!(pappus_lines(&family).is_err());
        assert!(matches!(
            concurrency_tune(&family, 5),
            Err(CompletionError::NoRationalSolution)
        ));
    }

    #[test]
    fn conjecture_clauses_on_pinned_instances() {
        let lines = p_lines();
        let rep = conjecture_report(&lines, &sig("(1 2)(3 5)(4 6)")).unwrap();
        assert_eq!(rep.independent_count, 3);
        assert_eq!(rep.has_max_independent, Some(true));
        assert_eq!(rep.clause_min_ordinary.lhs, Some(false));
        assert_eq!(rep.clause_min_ordinary.rhs, Some(false));
        assert_eq!(rep.clause_min_ordinary.agreement, Some(true));
        assert_eq!(rep.clause_max_triple.lhs, Some(true));
        assert_eq!(rep.clause_max_triple.rhs, Some(true));
        assert!(rep.chart.is_some());

        let rep = conjecture_report(&pc_lines(), &sig("(1 6)(2 5)(3 4)")).unwrap();
        assert_eq!(rep.clause_min_ordinary.lhs, Some(true));
        assert_eq!(rep.clause_min_ordinary.rhs, Some(true));
        assert_eq!(rep.clause_max_triple.lhs, Some(false));
        assert_eq!(rep.clause_max_triple.rhs, Some(false));
    }
}
