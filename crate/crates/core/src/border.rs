//! Bordered matrices `[[B, v], [wᵀ, 0]]` and the transfer of orthogonality
//! across one added row and column.

use serde::{Serialize, Serializer};

use crate::error::{Error, Result};
use crate::matrix::{bits, full_mask, NormalMatrix, MAX_ORDER};
use crate::ortho::{is_self_orthogonal, orthogonal_unchecked, VertexSet};

/// A vector over `{0, -1}`, stored as the mask of its zero coordinates.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub struct BorderVector {
    len: u8,
    zeros: u16,
}

impl BorderVector {
    pub fn new(len: usize, zeros: u16) -> Result<BorderVector> {
        if len >= MAX_ORDER {
            return Err(Error::InvalidOrder {
                got: len + 1,
                max: MAX_ORDER,
            });
        }
        Ok(BorderVector {
            len: len as u8,
            zeros: zeros & full_mask(len),
        })
    }

    pub fn all_zero(len: usize) -> Result<BorderVector> {
        BorderVector::new(len, u16::MAX)
    }

    pub fn all_neg(len: usize) -> Result<BorderVector> {
        BorderVector::new(len, 0)
    }

    /// Parses glyphs, e.g. `"0--"`.
    pub fn parse(text: &str) -> Result<BorderVector> {
        let mut zeros = 0u16;
        let chars: Vec<char> = text.trim().chars().collect();
        for (j, &ch) in chars.iter().enumerate() {
            match ch {
                '0' => zeros |= 1 << j,
                '-' => {}
                other => {
                    return Err(Error::ForeignCharacter {
                        line: 1,
                        column: j + 1,
                        ch: other,
                    })
                }
            }
        }
        BorderVector::new(chars.len(), zeros)
    }

    pub fn len(&self) -> usize {
        self.len as usize
    }

    pub fn is_empty(&self) -> bool {
        self.len == 0
    }

    pub fn zeros(&self) -> u16 {
        self.zeros
    }

    pub fn is_all_zero(&self) -> bool {
        self.zeros == full_mask(self.len())
    }
}

impl std::fmt::Display for BorderVector {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        for j in 0..self.len() {
            f.write_str(if self.zeros >> j & 1 == 1 { "0" } else { "-" })?;
        }
        Ok(())
    }
}

impl Serialize for BorderVector {
    fn serialize<S: Serializer>(&self, serializer: S) -> std::result::Result<S::Ok, S::Error> {
        serializer.collect_str(self)
    }
}

/// `(B v) ⊕ u`: coordinate `i` is zero iff row `i` of `B` meets the zeros of
/// `v`, or `u_i = 0`.
fn mat_vec(b: &NormalMatrix, v: BorderVector) -> u16 {
    (0..b.order()).fold(0u16, |acc, i| {
        if b.row(i) & v.zeros != 0 {
            acc | 1 << i
        } else {
            acc
        }
    })
}

/// `wᵀ B`: coordinate `j` is zero iff column `j` of `B` meets the zeros of `w`.
fn vec_mat(w: BorderVector, b: &NormalMatrix) -> u16 {
    (0..b.order()).fold(0u16, |acc, j| {
        if b.col(j) & w.zeros != 0 {
            acc | 1 << j
        } else {
            acc
        }
    })
}

/// An order-`n` normal matrix split as inner block, last column head `v`,
/// and last row head `w`.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
pub struct BorderedBlocks {
    pub inner: NormalMatrix,
    pub v: BorderVector,
    pub w: BorderVector,
}

impl BorderedBlocks {
    pub fn new(inner: NormalMatrix, v: BorderVector, w: BorderVector) -> Result<Self> {
        let k = inner.order();
        for len in [v.len(), w.len()] {
            if len != k {
                return Err(Error::DimensionMismatch {
                    left: k,
                    right: len,
                });
            }
        }
        Ok(BorderedBlocks { inner, v, w })
    }

    /// The bordered matrix; the corner entry is zero.
    pub fn compose(&self) -> Result<NormalMatrix> {
        let k = self.inner.order();
        let n = k + 1;
        if n > MAX_ORDER {
            return Err(Error::InvalidOrder {
                got: n,
                max: MAX_ORDER,
            });
        }
        let mut rows: Vec<u16> = (0..k)
            .map(|i| self.inner.row(i) | ((self.v.zeros >> i & 1) << k))
            .collect();
        rows.push(self.w.zeros | 1 << k);
        NormalMatrix::from_rows(n, &rows)
    }

    pub fn split(a: &NormalMatrix) -> Result<BorderedBlocks> {
        let n = a.order();
        if n < 2 {
            return Err(Error::Precondition(
                "splitting needs order >= 2".to_string(),
            ));
        }
        let k = n - 1;
        let inner = a.principal_block(k);
        let v = bits(a.col(k) & full_mask(k)).fold(0u16, |acc, i| acc | 1 << i);
        let w = a.row(k) & full_mask(k);
        Ok(BorderedBlocks {
            inner,
            v: BorderVector::new(k, v)?,
            w: BorderVector::new(k, w)?,
        })
    }
}

/// For inner blocks with `B₁B₂ = Z = B₂B₁`: the bordered pair is orthogonal
/// iff `B₁v₂ ⊕ v₁`, `B₂v₁ ⊕ v₂`, `w₁ᵀB₂ ⊕ w₂ᵀ` and `w₂ᵀB₁ ⊕ w₁ᵀ` are
/// zero vectors. Errors when the inner blocks are not orthogonal.
pub fn border_orthogonality_condition(b1: &BorderedBlocks, b2: &BorderedBlocks) -> Result<bool> {
    b1.inner.check_same_order(&b2.inner)?;
    if !orthogonal_unchecked(&b1.inner, &b2.inner) {
        return Err(Error::Precondition(
            "inner blocks are not orthogonal".to_string(),
        ));
    }
    let full = full_mask(b1.inner.order());
    Ok(mat_vec(&b1.inner, b2.v) | b1.v.zeros == full
        && mat_vec(&b2.inner, b1.v) | b2.v.zeros == full
        && vec_mat(b1.w, &b2.inner) | b2.w.zeros == full
        && vec_mat(b2.w, &b1.inner) | b1.w.zeros == full)
}

/// For a self-orthogonal inner block: the bordered matrix is self-orthogonal
/// iff `Bv` and `wᵀB` are zero vectors. Errors when `B² != Z`.
pub fn self_ortho_border_condition(blocks: &BorderedBlocks) -> Result<bool> {
    if !is_self_orthogonal(&blocks.inner) {
        return Err(Error::Precondition(
            "inner block is not self-orthogonal".to_string(),
        ));
    }
    let full = full_mask(blocks.inner.order());
    Ok(mat_vec(&blocks.inner, blocks.v) == full && vec_mat(blocks.w, &blocks.inner) == full)
}

/// Moves index `i` last by conjugation and drops it. Row and column `i` must
/// have no off-diagonal zeros; then `|Or(A)| = |Or(result)|`.
pub fn reduce_size(a: &NormalMatrix, i: usize) -> Result<NormalMatrix> {
    a.check_index(i)?;
    let n = a.order();
    if n < 2 {
        return Err(Error::Precondition("reducing needs order >= 2".to_string()));
    }
    if a.row(i) != 1 << i || a.col(i) != 1 << i {
        return Err(Error::Precondition(format!(
            "row or column {} has an off-diagonal zero",
            i + 1
        )));
    }
    let moved = a.conjugate_transposition(n - 1, i)?;
    Ok(moved.principal_block(n - 1))
}

/// `|Or(A)|` over all normal matrices; small orders only.
pub fn orth_count(a: &NormalMatrix) -> Result<usize> {
    Ok(crate::ortho::orth_set(a, VertexSet::AllNormal)?.len())
}
