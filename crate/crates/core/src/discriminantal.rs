//! Construction of the discriminantal arrangement `B(n, k, A)`: one central
//! hyperplane `D_L` in the translate space for each `(k+1)`-subset `L`, with
//! its normal built from signed `k x k` minors of the base normals.

use alloc::collections::BTreeMap;
use alloc::vec::Vec;
use core::fmt;

use crate::arrangement::Arrangement;
use crate::linalg::{canonicalize_projective, Matrix};
use crate::scalar::Scalar;
use crate::subset::{combinations, Subset};

/// A hyperplane `D_L` of the discriminantal arrangement, through the origin
/// of the translate space, with canonicalized normal supported exactly on `L`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct DiscriminantalHyperplane {
    pub subset: Subset,
    pub alpha: Vec<Scalar>,
}

/// The full arrangement `B(n, k, A)`: all `C(n, k+1)` hyperplanes in
/// lexicographic order of their index subsets.
#[derive(Clone, Debug)]
pub struct DiscriminantalArrangement {
    pub n: usize,
    pub k: usize,
    /// Normals of the base arrangement (the trace data `B` depends on).
    pub base_normals: Vec<Vec<Scalar>>,
    pub hyperplanes: Vec<DiscriminantalHyperplane>,
    position: BTreeMap<Subset, usize>,
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub enum DiscriminantalError {
    /// Some `k` of the `k+1` chosen normals are dependent.
    DegenerateSubset {
        subset: Subset,
    },
    NonGeneric(crate::arrangement::NonGeneric),
}

impl fmt::Display for DiscriminantalError {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            DiscriminantalError::DegenerateSubset { subset } => {
                write!(f, "degenerate subset {subset}: dependent normals")
            }
            DiscriminantalError::NonGeneric(e) => write!(f, "{e}"),
        }
    }
}

/// Normal vector of `D_L`: coordinate `i_j` carries the signed minor that
/// omits `alpha_{i_j}`, then the whole vector is canonicalized. Any global
/// sign yields the same central hyperplane, so canonicalization makes the
/// representative stable.
pub fn alpha_normal(
    arr: &Arrangement,
    subset: Subset,
) -> Result<DiscriminantalHyperplane, DiscriminantalError> {
    let k = arr.dim();
    assert_eq!(subset.len(), k + 1, "L must have k+1 elements");
    let members: Vec<usize> = subset.to_vec();
    let mut alpha = alloc::vec![Scalar::zero(); arr.len()];
    for (j, &idx) in members.iter().enumerate() {
        let rows: Vec<Vec<Scalar>> = members
            .iter()
            .filter(|&&m| m != idx)
            .map(|&m| arr.hyperplanes()[m].normal.clone())
            .collect();
        let minor = Matrix::from_rows(rows).det();
        if minor.is_zero() {
            return Err(DiscriminantalError::DegenerateSubset { subset });
        }
        alpha[idx] = if j % 2 == 0 { -&minor } else { minor };
    }
    Ok(DiscriminantalHyperplane {
        subset,
        alpha: canonicalize_projective(&alpha),
    })
}

/// Build `B(n, k, A)` for a generic arrangement.
pub fn build(arr: &Arrangement) -> Result<DiscriminantalArrangement, DiscriminantalError> {
    arr.check_generic()
        .map_err(DiscriminantalError::NonGeneric)?;
    let n = arr.len();
    let k = arr.dim();
    let mut hyperplanes = Vec::new();
    let mut position = BTreeMap::new();
    for subset in combinations(n, k + 1) {
        position.insert(subset, hyperplanes.len());
        hyperplanes.push(alpha_normal(arr, subset)?);
    }
    let disc = DiscriminantalArrangement {
        n,
        k,
        base_normals: arr.normals(),
        hyperplanes,
        position,
    };
    debug_assert_eq!(disc.alpha_matrix_all().rank(), n - k);
    Ok(disc)
}

impl DiscriminantalArrangement {
    pub fn len(&self) -> usize {
        self.hyperplanes.len()
    }

    pub fn is_empty(&self) -> bool {
        self.hyperplanes.is_empty()
    }

    pub fn alpha(&self, subset: Subset) -> Option<&DiscriminantalHyperplane> {
        self.position.get(&subset).map(|&i| &self.hyperplanes[i])
    }

    pub fn position(&self, subset: Subset) -> Option<usize> {
        self.position.get(&subset).copied()
    }

    pub fn subsets(&self) -> impl Iterator<Item = Subset> + '_ {
        self.hyperplanes.iter().map(|h| h.subset)
    }

    /// Matrix whose rows are the alphas of the given subsets.
    pub fn alpha_matrix(&self, subsets: impl IntoIterator<Item = Subset>) -> Matrix {
        let rows: Vec<Vec<Scalar>> = subsets
            .into_iter()
            .map(|s| {
                self.alpha(s)
                    .expect("subset not part of this arrangement")
                    .alpha
                    .clone()
            })
            .collect();
        Matrix::from_rows(rows)
    }

    pub fn alpha_matrix_all(&self) -> Matrix {
        self.alpha_matrix(self.subsets().collect::<Vec<_>>())
    }

    /// Essential rank of the whole arrangement, `n - k` for generic bases.
    pub fn rank(&self) -> usize {
        self.alpha_matrix_all().rank()
    }
}
