//! Affine hyperplane arrangements, genericity checking, translation and the
//! trace at infinity.

use alloc::format;
use alloc::string::String;
use alloc::vec::Vec;
use core::fmt;

use crate::linalg::{canonicalize_projective, Matrix};
use crate::scalar::Scalar;
use crate::subset::{combinations, Subset};

/// One affine hyperplane `{x : normal . x = offset}` with a display label.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Hyperplane {
    pub normal: Vec<Scalar>,
    pub offset: Scalar,
    pub label: String,
}

/// An ordered list of affine hyperplanes in `k`-space. The ordering is
/// semantically meaningful: it fixes the coordinate system of the translate
/// space every discriminantal computation lives in.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Arrangement {
    dim: usize,
    hyperplanes: Vec<Hyperplane>,
}

/// A projective class of a nonzero coefficient vector, kept canonical so
/// equality is plain vector comparison.
#[derive(Clone, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct ProjectiveFlat {
    coeffs: Vec<Scalar>,
}

impl ProjectiveFlat {
    pub fn new(coeffs: &[Scalar]) -> ProjectiveFlat {
        assert!(
            coeffs.iter().any(|c| !c.is_zero()),
            "projective flat needs a nonzero coefficient vector"
        );
        ProjectiveFlat {
            coeffs: canonicalize_projective(coeffs),
        }
    }

    pub fn coeffs(&self) -> &[Scalar] {
        &self.coeffs
    }

    pub fn dim(&self) -> usize {
        self.coeffs.len()
    }
}

impl fmt::Debug for ProjectiveFlat {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "(")?;
        for (i, c) in self.coeffs.iter().enumerate() {
            if i > 0 {
                write!(f, " : ")?;
            }
            write!(f, "{c}")?;
        }
        write!(f, ")")
    }
}

/// Why an arrangement fails to be generic: a minimal dependent subset.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct NonGeneric {
    /// 0-based indices of a minimal violating subset K.
    pub witness: Subset,
}

impl fmt::Display for NonGeneric {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(
            f,
            "arrangement is not generic; violating subset {}",
            self.witness
        )
    }
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub enum ArrangementError {
    ZeroNormal { index: usize },
    WrongDimension { index: usize },
    DuplicateLabel { label: String },
}

impl fmt::Display for ArrangementError {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            ArrangementError::ZeroNormal { index } => {
                write!(f, "hyperplane {} has a zero normal", index + 1)
            }
            ArrangementError::WrongDimension { index } => {
                write!(
                    f,
                    "hyperplane {} has a normal of the wrong length",
                    index + 1
                )
            }
            ArrangementError::DuplicateLabel { label } => {
                write!(f, "duplicate hyperplane label {label:?}")
            }
        }
    }
}

impl Arrangement {
    pub fn new(dim: usize, hyperplanes: Vec<Hyperplane>) -> Result<Arrangement, ArrangementError> {
        for (i, h) in hyperplanes.iter().enumerate() {
            if h.normal.len() != dim {
                return Err(ArrangementError::WrongDimension { index: i });
            }
            if h.normal.iter().all(Scalar::is_zero) {
                return Err(ArrangementError::ZeroNormal { index: i });
            }
        }
        for (i, h) in hyperplanes.iter().enumerate() {
            if hyperplanes[..i].iter().any(|g| g.label == h.label) {
                return Err(ArrangementError::DuplicateLabel {
                    label: h.label.clone(),
                });
            }
        }
        Ok(Arrangement { dim, hyperplanes })
    }

    /// Build from integer normals and offsets with default labels `l1..ln`.
    pub fn from_int_lines(dim: usize, rows: &[(Vec<i64>, i64)]) -> Arrangement {
        let hyperplanes = rows
            .iter()
            .enumerate()
            .map(|(i, (normal, offset))| Hyperplane {
                normal: normal.iter().map(|&v| Scalar::from_int(v)).collect(),
                offset: Scalar::from_int(*offset),
                label: format!("l{}", i + 1),
            })
            .collect();
        Arrangement::new(dim, hyperplanes).expect("valid integer arrangement")
    }

    pub fn dim(&self) -> usize {
        self.dim
    }

    pub fn len(&self) -> usize {
        self.hyperplanes.len()
    }

    pub fn is_empty(&self) -> bool {
        self.hyperplanes.is_empty()
    }

    pub fn hyperplanes(&self) -> &[Hyperplane] {
        &self.hyperplanes
    }

    pub fn normals(&self) -> Vec<Vec<Scalar>> {
        self.hyperplanes.iter().map(|h| h.normal.clone()).collect()
    }

    pub fn offsets(&self) -> Vec<Scalar> {
        self.hyperplanes.iter().map(|h| h.offset.clone()).collect()
    }

    /// Check the genericity condition: every `p <= k` of the hyperplanes
    /// meet in codimension exactly `p`.
    ///
    /// Rank `p` of the normals forces a consistent system of the right
    /// solution dimension, so a violation is always a dependent subset; the
    /// witness returned is size-minimal (pairs before triples and so on).
    pub fn check_generic(&self) -> Result<(), NonGeneric> {
        let n = self.len();
        for p in 2..=self.dim.min(n) {
            for k_set in combinations(n, p) {
                let rows: Vec<Vec<Scalar>> = k_set
                    .elements()
                    .map(|i| self.hyperplanes[i].normal.clone())
                    .collect();
                let mat = Matrix::from_rows(rows);
                if mat.rank() < p {
                    return Err(NonGeneric { witness: k_set });
                }
                let offsets: Vec<Scalar> = k_set
                    .elements()
                    .map(|i| self.hyperplanes[i].offset.clone())
                    .collect();
                match mat.solution_space(&offsets) {
                    Some(sol) if sol.dim() == self.dim - p => {}
                    _ => return Err(NonGeneric { witness: k_set }),
                }
            }
        }
        Ok(())
    }

    pub fn is_generic(&self) -> bool {
        self.check_generic().is_ok()
    }

    /// Shift hyperplane offsets by `c`; normals are untouched.
    pub fn translate(&self, c: &[Scalar]) -> Arrangement {
        assert_eq!(c.len(), self.len(), "translate vector length must be n");
        let hyperplanes = self
            .hyperplanes
            .iter()
            .zip(c)
            .map(|(h, ci)| Hyperplane {
                normal: h.normal.clone(),
                offset: &h.offset + ci,
                label: h.label.clone(),
            })
            .collect();
        Arrangement {
            dim: self.dim,
            hyperplanes,
        }
    }

    /// The trace at infinity: for each hyperplane the projective class of its
    /// normal, i.e. the `(k-2)`-flat its closure cuts on the hyperplane at
    /// infinity. Parallel hyperplanes map to equal flats.
    pub fn trace_at_infinity(&self) -> Vec<ProjectiveFlat> {
        self.hyperplanes
            .iter()
            .map(|h| ProjectiveFlat::new(&h.normal))
            .collect()
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use alloc::vec;

    fn six_lines() -> Arrangement {
        Arrangement::from_int_lines(
            2,
            &[
                (vec![-2, 2], 1),
                (vec![-3, 4], 2),
                (vec![0, 6], 3),
                (vec![2, 4], 4),
                (vec![3, 2], 5),
                (vec![-1, 2], 6),
            ],
        )
    }

    #[test]
    fn six_line_fixture_is_generic() {
        assert!(six_lines().is_generic());
    }

    #[test]
    fn parallel_lines_are_rejected_with_minimal_witness() {
        let arr = Arrangement::from_int_lines(2, &[(vec![1, 2], 0), (vec![2, 4], 5)]);
        let err = arr.check_generic().unwrap_err();
        assert_eq!(err.witness.to_vec(), vec![0, 1]);
    }

    #[test]
    fn planes_sharing_a_line_are_rejected() {
        // four planes in 3-space, the first three share the z-axis
        let arr = Arrangement::from_int_lines(
            3,
            &[
                (vec![1, 0, 0], 0),
                (vec![0, 1, 0], 0),
                (vec![1, 1, 0], 0),
                (vec![1, 1, 1], 1),
            ],
        );
        let err = arr.check_generic().unwrap_err();
        assert_eq!(err.witness.len(), 3);
        assert_eq!(err.witness.to_vec(), vec![0, 1, 2]);
    }

    #[test]
    fn translate_composes_additively() {
        let arr = six_lines();
        let zeros = vec![Scalar::zero(); 6];
        assert_eq!(arr.translate(&zeros), arr);
        let c1: Vec<Scalar> = (0..6).map(Scalar::from_int).collect();
        let c2: Vec<Scalar> = (0..6).map(|i| Scalar::from_int(2 * i + 1)).collect();
        let sum: Vec<Scalar> = c1.iter().zip(&c2).map(|(a, b)| a + b).collect();
        assert_eq!(arr.translate(&c1).translate(&c2), arr.translate(&sum));
        // only hyperplane 1 moves
        let mut e1 = vec![Scalar::zero(); 6];
        e1[0] = Scalar::one();
        let t = arr.translate(&e1);
        assert_eq!(t.hyperplanes()[0].offset, Scalar::from_int(2));
        assert_eq!(t.hyperplanes()[1], arr.hyperplanes()[1]);
    }

    #[test]
    fn trace_depends_only_on_directions() {
        let a = Arrangement::from_int_lines(3, &[(vec![1, 0, 0], 5)]);
        let b = Arrangement::from_int_lines(3, &[(vec![-3, 0, 0], 7)]);
        assert_eq!(a.trace_at_infinity(), b.trace_at_infinity());
        let generic = six_lines();
        let flats = generic.trace_at_infinity();
        for i in 0..flats.len() {
            for j in i + 1..flats.len() {
                assert_ne!(flats[i], flats[j]);
            }
        }
    }

    #[test]
    fn genericity_is_scale_invariant() {
        let arr = six_lines();
        let mut hs = arr.hyperplanes().to_vec();
        hs[2] = Hyperplane {
            normal: hs[2]
                .normal
                .iter()
                .map(|v| v * &Scalar::from_ratio(-7, 3))
                .collect(),
            offset: &hs[2].offset * &Scalar::from_ratio(-7, 3),
            label: hs[2].label.clone(),
        };
        let scaled = Arrangement::new(2, hs).unwrap();
        assert_eq!(arr.is_generic(), scaled.is_generic());
    }
}
