//! Weyl elements of split classical groups as exact integer matrices, and the
//! block factorizations used when a segment or a support pair is split off.
//!
//! The form is antidiagonal: all ones for the orthogonal types and
//! `J[i, N+1−i] = (−1)^{i+1}` for `Sp_{2n}`.

use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::rep::GroupType;
use crate::IntMatrix;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum WeylError {
    #[error("{0} has no integral split matrix model here (use B, C or D)")]
    NonSplit(GroupType),
    #[error("rank must be at least 1")]
    InvalidRank,
    #[error("need 1 <= k <= n, got k={k}, n={n}")]
    KOutOfRange { k: usize, n: usize },
    #[error("split size d={d} out of range (allowed 0..={max}) for this decomposition")]
    DimensionMismatch { d: usize, max: usize },
    #[error("no sign makes w_{k} preserve the form of {group} rank {n}")]
    NoValidSign { group: GroupType, n: usize, k: usize },
}

/// Which block factorization of `w_k`.
#[derive(Clone, Copy, PartialEq, Eq, Hash, Debug, Serialize, Deserialize)]
pub enum Way {
    /// `τ_k` split as `τ_{k−d} × τ_d` inside the GL block.
    #[serde(rename = "12")]
    Way12,
    /// A GL block `GL_d` moved past `GL_k`.
    #[serde(rename = "34")]
    Way34,
}

impl std::str::FromStr for Way {
    type Err = String;
    fn from_str(s: &str) -> Result<Self, Self::Err> {
        match s {
            "12" => Ok(Way::Way12),
            "34" => Ok(Way::Way34),
            other => Err(format!("unknown way `{other}` (expected 12 or 34)")),
        }
    }
}

#[derive(Clone, PartialEq, Eq, Debug, Serialize)]
pub struct GroupForm {
    pub group: GroupType,
    pub n: usize,
    pub j: IntMatrix,
}

impl GroupForm {
    pub fn dim(&self) -> usize {
        self.j.rows()
    }

    /// `Mᵀ J M = J`
    pub fn preserves(&self, m: &IntMatrix) -> bool {
        m.rows() == self.dim() && &(&m.transpose() * &self.j) * m == self.j
    }
}

pub fn dimension(group: GroupType, n: usize) -> Result<usize, WeylError> {
    match group {
        GroupType::SoOdd => Ok(2 * n + 1),
        GroupType::Sp | GroupType::SoEven => Ok(2 * n),
        other => Err(WeylError::NonSplit(other)),
    }
}

fn antidiagonal(group: GroupType, dim: usize) -> IntMatrix {
    let mut j = IntMatrix::zeros(dim, dim);
    for i in 0..dim {
        let v = if group == GroupType::Sp && i % 2 == 1 { -1 } else { 1 };
        j.set(i, dim - 1 - i, v);
    }
    j
}

pub fn build_form(group: GroupType, n: usize) -> Result<GroupForm, WeylError> {
    if n == 0 {
        return Err(WeylError::InvalidRank);
    }
    let dim = dimension(group, n)?;
    Ok(GroupForm { group, n, j: antidiagonal(group, dim) })
}

/// `w_k` together with the sign chosen for its lower-left block.
#[derive(Clone, PartialEq, Eq, Debug, Serialize)]
pub struct WeylElement {
    pub matrix: IntMatrix,
    pub epsilon: i64,
}

fn wk_with_sign(dim: usize, k: usize, epsilon: i64) -> IntMatrix {
    let mid = dim - 2 * k;
    let ik = IntMatrix::identity(k);
    let ek = ik.scale(&epsilon);
    let im = IntMatrix::identity(mid);
    let grid = vec![vec![None, None, Some(&ik)], vec![None, Some(&im), None], vec![Some(&ek), None, None]];
    let sign = if k.is_multiple_of(2) { 1 } else { -1 };
    IntMatrix::from_blocks(&grid, &[k, mid, k]).scale(&sign)
}

/// `w_k = (−1)^k [[0,0,I_k],[0,I_{N₀},0],[εI_k,0,0]]`, with `ε` chosen so the
/// form is preserved. `k = 0` gives the identity.
pub fn build_wk(group: GroupType, n: usize, k: usize) -> Result<WeylElement, WeylError> {
    if k > n {
        return Err(WeylError::KOutOfRange { k, n });
    }
    let form = build_form(group, n)?;
    [1, -1]
        .into_iter()
        .map(|epsilon| WeylElement { matrix: wk_with_sign(form.dim(), k, epsilon), epsilon })
        .find(|w| form.preserves(&w.matrix))
        .ok_or(WeylError::NoValidSign { group, n, k })
}

/// `c = diag(I_{n−1}, [[0,1],[1,0]], I_{n−1})` in `O_{2n}`.
pub fn build_c(n: usize) -> Result<IntMatrix, WeylError> {
    if n == 0 {
        return Err(WeylError::InvalidRank);
    }
    let swap = IntMatrix::from_rows(vec![vec![0, 1], vec![1, 0]]);
    Ok(IntMatrix::block_diag(&[&IntMatrix::identity(n - 1), &swap, &IntMatrix::identity(n - 1)]))
}

/// Integer power of a square matrix.
pub fn power(m: &IntMatrix, e: usize) -> IntMatrix {
    (0..e).fold(IntMatrix::identity(m.rows()), |acc, _| &acc * m)
}

/// `[[0, I_p],[I_q, 0]]`: exchanges a block of `q` coordinates with the
/// following block of `p`.
fn block_swap(p: usize, q: usize) -> IntMatrix {
    let mut m = IntMatrix::zeros(p + q, p + q);
    for i in 0..p {
        m.set(i, q + i, 1);
    }
    for i in 0..q {
        m.set(p + i, i, 1);
    }
    m
}

/// Resolves the signs of a signed permutation that respects the pairing
/// `i ↔ N−1−i`: returns `F·D` for the diagonal `D` (ones on the first half)
/// that makes it preserve the form, or `None` if no such `D` exists.
pub fn resolve_signs(form: &GroupForm, f: &IntMatrix) -> Option<IntMatrix> {
    let dim = form.dim();
    let image = |col: usize| -> Option<(usize, i64)> {
        let mut hits = (0..dim).filter(|&r| *f.get(r, col) != 0);
        let r = hits.next()?;
        hits.next().is_none().then(|| (r, *f.get(r, col)))
    };
    let mut d = vec![1i64; dim];
    for i in 0..dim / 2 {
        let p = dim - 1 - i;
        let (ri, vi) = image(i)?;
        let (rp, vp) = image(p)?;
        if rp != dim - 1 - ri {
            return None;
        }
        let current = vi * vp * form.j.get(ri, rp);
        d[p] = form.j.get(i, p) * current;
    }
    let fixed = f * &IntMatrix::diagonal(&d);
    form.preserves(&fixed).then_some(fixed)
}

/// `w_k` in the rank-`rank` group of the same type; `k = 0` is the identity,
/// including on the rank-0 group.
fn inner_wk(group: GroupType, rank: usize, k: usize) -> Result<IntMatrix, WeylError> {
    if k == 0 {
        Ok(IntMatrix::identity(dimension(group, rank)?))
    } else {
        Ok(build_wk(group, rank, k)?.matrix)
    }
}

/// `diag(I_o, M, I_o)` for `M` a group element of smaller rank.
fn embed(m: &IntMatrix, outer: usize) -> IntMatrix {
    IntMatrix::block_diag(&[&IntMatrix::identity(outer), m, &IntMatrix::identity(outer)])
}

/// The three factors of `w_k` along the chosen decomposition, each with its
/// signs resolved so it preserves the form.
///
/// Way 1,2: `diag(I_{k−d}, w_d, I_{k−d}) · B · diag(I_d, w_{k−d}, I_d)` with
/// `B` the block swap of `GL_{k−d} × GL_d`; needs `0 ≤ d ≤ k`.
///
/// Way 3,4: `L · diag(I_d, w_k, I_d) · R` with `L`, `R` the swaps of a
/// `GL_d` block past `GL_k`; needs `0 ≤ d ≤ n−k`.
pub fn decompose(way: Way, group: GroupType, n: usize, k: usize, d: usize) -> Result<[IntMatrix; 3], WeylError> {
    if k == 0 || k > n {
        return Err(WeylError::KOutOfRange { k, n });
    }
    let form = build_form(group, n)?;
    let dim = form.dim();
    let raw = match way {
        Way::Way12 => {
            if d > k {
                return Err(WeylError::DimensionMismatch { d, max: k });
            }
            let mid = dim - 2 * k;
            let first = embed(&inner_wk(group, n - k + d, d)?, k - d);
            let swap = IntMatrix::block_diag(&[
                &block_swap(k - d, d),
                &IntMatrix::identity(mid),
                &block_swap(d, k - d),
            ]);
            let last = embed(&inner_wk(group, n - d, k - d)?, d);
            [first, swap, last]
        }
        Way::Way34 => {
            if d > n - k {
                return Err(WeylError::DimensionMismatch { d, max: n - k });
            }
            let mid = dim - 2 * (k + d);
            let left = IntMatrix::block_diag(&[&block_swap(k, d), &IntMatrix::identity(mid), &block_swap(d, k)]);
            let middle = embed(&inner_wk(group, n - d, k)?, d);
            let right = IntMatrix::block_diag(&[&block_swap(d, k), &IntMatrix::identity(mid), &block_swap(k, d)]);
            [left, middle, right]
        }
    };
    let mut out = Vec::with_capacity(3);
    for f in raw {
        out.push(resolve_signs(&form, &f).ok_or(WeylError::NoValidSign { group, n, k })?);
    }
    Ok(out.try_into().expect("three factors"))
}

/// How a product of factors compares with `w_k`.
#[derive(Clone, PartialEq, Eq, Debug, Serialize)]
#[serde(tag = "status", rename_all = "snake_case")]
pub enum DecompositionOutcome {
    Exact,
    /// `product = D · w_k` with `D` diagonal `±1` in the group.
    TorusCorrected { diagonal: Vec<i64> },
    Fail { difference: IntMatrix },
}

#[derive(Clone, PartialEq, Eq, Debug, Serialize)]
pub struct DecompositionCheck {
    pub group: GroupType,
    pub n: usize,
    pub k: usize,
    pub d: usize,
    pub way: Way,
    pub dim: usize,
    pub epsilon: i64,
    pub factors_preserve_form: [bool; 3],
    pub product_preserves_form: bool,
    pub outcome: DecompositionOutcome,
    pub factors: [IntMatrix; 3],
}

impl DecompositionCheck {
    pub fn passed(&self) -> bool {
        self.factors_preserve_form.iter().all(|&b| b)
            && self.product_preserves_form
            && !matches!(self.outcome, DecompositionOutcome::Fail { .. })
    }
}

/// Compares an explicit product with `w_k`.
pub fn compare_with_wk(form: &GroupForm, wk: &IntMatrix, product: &IntMatrix) -> DecompositionOutcome {
    if product == wk {
        return DecompositionOutcome::Exact;
    }
    // w_k⁻¹ = Jᵀ w_kᵀ J because w_k preserves J and J is a signed permutation.
    let wk_inv = &(&form.j.transpose() * &wk.transpose()) * &form.j;
    let d = product * &wk_inv;
    let signs_ok = d.diagonal_entries().iter().all(|&x| x == 1 || x == -1);
    if d.is_diagonal() && signs_ok && form.preserves(&d) {
        DecompositionOutcome::TorusCorrected { diagonal: d.diagonal_entries() }
    } else {
        DecompositionOutcome::Fail { difference: product.sub(wk) }
    }
}

/// Checks explicit factors against `w_k`.
pub fn check_factors(
    way: Way,
    group: GroupType,
    n: usize,
    k: usize,
    d: usize,
    factors: [IntMatrix; 3],
) -> Result<DecompositionCheck, WeylError> {
    let form = build_form(group, n)?;
    let wk = build_wk(group, n, k)?;
    let product = &(&factors[0] * &factors[1]) * &factors[2];
    Ok(DecompositionCheck {
        group,
        n,
        k,
        d,
        way,
        dim: form.dim(),
        epsilon: wk.epsilon,
        factors_preserve_form: [0, 1, 2].map(|i| form.preserves(&factors[i])),
        product_preserves_form: form.preserves(&product),
        outcome: compare_with_wk(&form, &wk.matrix, &product),
        factors,
    })
}

pub fn check_decomposition(way: Way, group: GroupType, n: usize, k: usize, d: usize) -> Result<DecompositionCheck, WeylError> {
    let factors = decompose(way, group, n, k, d)?;
    check_factors(way, group, n, k, d, factors)
}

/// `c^k w_k` for `SO_{2n}`: form-preserving with determinant 1.
pub fn corrected_so_even_wk(n: usize, k: usize) -> Result<IntMatrix, WeylError> {
    let wk = build_wk(GroupType::SoEven, n, k)?;
    Ok(&power(&build_c(n)?, k) * &wk.matrix)
}
