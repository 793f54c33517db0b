//! Normal matrices over `{0, -1}`, stored as their zero pattern.
//!
//! Row `i` is a bitmask whose bit `t` is set when entry `(i, t)` is zero;
//! columns are kept alongside so both are available in O(1). The diagonal is
//! always set.

use std::fmt;
use std::str::FromStr;

use serde::{Deserialize, Deserializer, Serialize, Serializer};

use crate::error::{Error, Result};
use crate::scalar::Scalar;

/// Largest supported matrix order.
pub const MAX_ORDER: usize = 16;

/// Largest order whose off-diagonal pattern fits a `u64` mask.
pub const MAX_MASK_ORDER: usize = 8;

/// Iterates the set bits of a row or column mask.
pub(crate) fn bits(mut mask: u16) -> impl Iterator<Item = usize> {
    std::iter::from_fn(move || {
        if mask == 0 {
            None
        } else {
            let t = mask.trailing_zeros() as usize;
            mask &= mask - 1;
            Some(t)
        }
    })
}

#[inline]
pub(crate) fn full_mask(n: usize) -> u16 {
    if n >= 16 {
        u16::MAX
    } else {
        (1u16 << n) - 1
    }
}

/// `(A ⊙ B)` on raw row masks: row `i` of the product is the union of the
/// rows of `B` selected by row `i` of `A`.
#[inline]
pub(crate) fn odot_rows(n: usize, a: &[u16], b: &[u16]) -> [u16; MAX_ORDER] {
    let mut out = [0u16; MAX_ORDER];
    for i in 0..n {
        let mut acc = 0u16;
        for t in bits(a[i]) {
            acc |= b[t];
        }
        out[i] = acc;
    }
    out
}

/// True when `A ⊙ B` is the all-zero matrix.
#[inline]
pub(crate) fn product_is_full(n: usize, a: &[u16], b: &[u16]) -> bool {
    let full = full_mask(n);
    (0..n).all(|i| {
        let mut acc = 0u16;
        for t in bits(a[i]) {
            acc |= b[t];
            if acc == full {
                return true;
            }
        }
        acc == full
    })
}

/// The elementary matrices of the paper's notation, as constructor keys.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Elementary {
    /// All zero except `-1` at `(i, j)`.
    E(usize, usize),
    /// Diagonal plus a single zero at `(i, j)`.
    U(usize, usize),
    Identity,
    AllZero,
}

/// A normal matrix: zero diagonal, every entry in `{0, -1}`.
#[derive(Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct NormalMatrix {
    n: u8,
    rows: [u16; MAX_ORDER],
    cols: [u16; MAX_ORDER],
}

fn check_order(n: usize) -> Result<()> {
    if n == 0 || n > MAX_ORDER {
        return Err(Error::InvalidOrder {
            got: n,
            max: MAX_ORDER,
        });
    }
    Ok(())
}

impl NormalMatrix {
    /// Builds a matrix from row masks; the diagonal is forced to zero and
    /// bits beyond the order are dropped.
    pub fn from_rows(n: usize, rows: &[u16]) -> Result<Self> {
        check_order(n)?;
        if rows.len() != n {
            return Err(Error::DimensionMismatch {
                left: n,
                right: rows.len(),
            });
        }
        Ok(Self::from_rows_unchecked(n, rows))
    }

    pub(crate) fn from_rows_unchecked(n: usize, rows: &[u16]) -> Self {
        let full = full_mask(n);
        let mut r = [0u16; MAX_ORDER];
        let mut c = [0u16; MAX_ORDER];
        for i in 0..n {
            r[i] = (rows[i] & full) | (1 << i);
            for j in bits(r[i]) {
                c[j] |= 1 << i;
            }
        }
        NormalMatrix {
            n: n as u8,
            rows: r,
            cols: c,
        }
    }

    /// Builds a matrix from its off-diagonal zero positions (0-based).
    pub fn from_zeros<I>(n: usize, zeros: I) -> Result<Self>
    where
        I: IntoIterator<Item = (usize, usize)>,
    {
        check_order(n)?;
        let mut rows = [0u16; MAX_ORDER];
        for (i, j) in zeros {
            for idx in [i, j] {
                if idx >= n {
                    return Err(Error::IndexOutOfRange { index: idx + 1, n });
                }
            }
            rows[i] |= 1 << j;
        }
        Ok(Self::from_rows_unchecked(n, &rows[..n]))
    }

    pub fn identity(n: usize) -> Result<Self> {
        check_order(n)?;
        Ok(Self::from_rows_unchecked(n, &[0u16; MAX_ORDER][..n]))
    }

    /// `Z_n`, the top element and the absorbing element for `⊙`.
    pub fn all_zero(n: usize) -> Result<Self> {
        check_order(n)?;
        Ok(Self::from_rows_unchecked(
            n,
            &[full_mask(n); MAX_ORDER][..n],
        ))
    }

    pub fn elementary(kind: Elementary, n: usize) -> Result<Self> {
        check_order(n)?;
        let check_pair = |i: usize, j: usize| -> Result<()> {
            for idx in [i, j] {
                if idx >= n {
                    return Err(Error::IndexOutOfRange { index: idx + 1, n });
                }
            }
            if i == j {
                return Err(Error::DiagonalElementary(i + 1));
            }
            Ok(())
        };
        match kind {
            Elementary::Identity => Self::identity(n),
            Elementary::AllZero => Self::all_zero(n),
            Elementary::E(i, j) => {
                check_pair(i, j)?;
                let mut rows = [full_mask(n); MAX_ORDER];
                rows[i] &= !(1 << j);
                Ok(Self::from_rows_unchecked(n, &rows[..n]))
            }
            Elementary::U(i, j) => {
                check_pair(i, j)?;
                Self::from_zeros(n, [(i, j)])
            }
        }
    }

    /// Decodes a matrix from the bitmask of its off-diagonal zeros, taken in
    /// row-major order with the diagonal skipped.
    pub fn from_offdiag_mask(n: usize, mask: u64) -> Self {
        debug_assert!((1..=MAX_MASK_ORDER).contains(&n));
        let mut rows = [0u16; MAX_ORDER];
        let mut bit = 0;
        for (i, row) in rows.iter_mut().enumerate().take(n) {
            for j in 0..n {
                if i != j {
                    if mask >> bit & 1 == 1 {
                        *row |= 1 << j;
                    }
                    bit += 1;
                }
            }
        }
        Self::from_rows_unchecked(n, &rows[..n])
    }

    /// Inverse of [`NormalMatrix::from_offdiag_mask`].
    pub fn offdiag_mask(&self) -> u64 {
        let n = self.order();
        debug_assert!(n <= MAX_MASK_ORDER);
        let mut mask = 0u64;
        let mut bit = 0;
        for i in 0..n {
            for j in 0..n {
                if i != j {
                    if self.rows[i] >> j & 1 == 1 {
                        mask |= 1 << bit;
                    }
                    bit += 1;
                }
            }
        }
        mask
    }

    /// Every normal matrix of order `n`, in increasing off-diagonal mask order.
    pub fn all(n: usize) -> Result<impl Iterator<Item = NormalMatrix>> {
        check_order(n)?;
        if n > 5 {
            return Err(Error::TooLarge {
                what: "enumerating all normal matrices",
                got: n,
                max: 5,
            });
        }
        let count = 1u64 << (n * n - n);
        Ok((0..count).map(move |m| NormalMatrix::from_offdiag_mask(n, m)))
    }

    #[inline]
    pub fn order(&self) -> usize {
        self.n as usize
    }

    /// Zero pattern of row `i`.
    #[inline]
    pub fn row(&self, i: usize) -> u16 {
        self.rows[i]
    }

    /// Zero pattern of column `j`.
    #[inline]
    pub fn col(&self, j: usize) -> u16 {
        self.cols[j]
    }

    #[inline]
    pub fn rows(&self) -> &[u16] {
        &self.rows[..self.order()]
    }

    #[inline]
    pub fn cols(&self) -> &[u16] {
        &self.cols[..self.order()]
    }

    #[inline]
    pub fn is_zero_at(&self, i: usize, j: usize) -> bool {
        self.rows[i] >> j & 1 == 1
    }

    pub fn entry(&self, i: usize, j: usize) -> Scalar {
        if self.is_zero_at(i, j) {
            Scalar::Zero
        } else {
            Scalar::NegOne
        }
    }

    /// All zero positions, diagonal included, in row-major order.
    pub fn zeros(&self) -> impl Iterator<Item = (usize, usize)> + '_ {
        (0..self.order()).flat_map(move |i| bits(self.rows[i]).map(move |j| (i, j)))
    }

    /// Number of zero entries, diagonal included.
    pub fn nu(&self) -> usize {
        self.rows().iter().map(|r| r.count_ones() as usize).sum()
    }

    /// Number of zeros in row `i`, diagonal included.
    pub fn nu_row(&self, i: usize) -> Result<usize> {
        self.check_index(i)?;
        Ok(self.rows[i].count_ones() as usize)
    }

    /// Off-diagonal zeros, i.e. `ν(A) - n`.
    pub fn offdiag_count(&self) -> usize {
        self.nu() - self.order()
    }

    pub fn is_all_zero(&self) -> bool {
        let full = full_mask(self.order());
        self.rows().iter().all(|&r| r == full)
    }

    /// Strictly normal: no off-diagonal zeros. Over `{0,-1}` this is `I_n`.
    pub fn is_identity(&self) -> bool {
        self.offdiag_count() == 0
    }

    pub(crate) fn check_index(&self, i: usize) -> Result<()> {
        if i >= self.order() {
            return Err(Error::IndexOutOfRange {
                index: i + 1,
                n: self.order(),
            });
        }
        Ok(())
    }

    pub(crate) fn check_same_order(&self, other: &NormalMatrix) -> Result<()> {
        if self.n != other.n {
            return Err(Error::DimensionMismatch {
                left: self.order(),
                right: other.order(),
            });
        }
        Ok(())
    }

    /// Tropical sum: zeros of the result are the union of both zero sets.
    pub fn oplus(&self, other: &NormalMatrix) -> Result<NormalMatrix> {
        self.check_same_order(other)?;
        let n = self.order();
        let mut rows = [0u16; MAX_ORDER];
        for (i, r) in rows.iter_mut().enumerate().take(n) {
            *r = self.rows[i] | other.rows[i];
        }
        Ok(Self::from_rows_unchecked(n, &rows[..n]))
    }

    /// Tropical product: `(i,j)` is zero iff some `t` has `a_it = 0 = b_tj`.
    pub fn odot(&self, other: &NormalMatrix) -> Result<NormalMatrix> {
        self.check_same_order(other)?;
        let n = self.order();
        let rows = odot_rows(n, self.rows(), other.rows());
        Ok(Self::from_rows_unchecked(n, &rows[..n]))
    }

    pub fn transpose(&self) -> NormalMatrix {
        let n = self.order();
        Self::from_rows_unchecked(n, &self.cols[..n])
    }

    /// Relabels indices through `perm`: entry `(i,j)` moves to
    /// `(perm[i], perm[j])`. `perm` must be a permutation of `0..n`.
    pub(crate) fn relabel(&self, perm: &[usize]) -> NormalMatrix {
        let n = self.order();
        let mut rows = [0u16; MAX_ORDER];
        for i in 0..n {
            let mut r = 0u16;
            for j in bits(self.rows[i]) {
                r |= 1 << perm[j];
            }
            rows[perm[i]] = r;
        }
        Self::from_rows_unchecked(n, &rows[..n])
    }

    /// `P A P` for the transposition `(i j)`; swaps the labels `i` and `j`.
    pub fn conjugate_transposition(&self, i: usize, j: usize) -> Result<NormalMatrix> {
        self.check_index(i)?;
        self.check_index(j)?;
        let mut perm: Vec<usize> = (0..self.order()).collect();
        perm.swap(i, j);
        Ok(self.relabel(&perm))
    }

    /// Leading principal block of order `k`.
    pub(crate) fn principal_block(&self, k: usize) -> NormalMatrix {
        let mask = full_mask(k);
        let rows: Vec<u16> = self.rows[..k].iter().map(|r| r & mask).collect();
        Self::from_rows_unchecked(k, &rows)
    }

    /// Parses the glyph format: `n` lines of `n` characters from `{'0','-'}`.
    pub fn parse(text: &str) -> Result<NormalMatrix> {
        let mut lines: Vec<&str> = text
            .split('\n')
            .map(|l| l.strip_suffix('\r').unwrap_or(l))
            .collect();
        if lines.last() == Some(&"") {
            lines.pop();
        }
        let n = lines.len();
        if n == 0 {
            return Err(Error::EmptyText);
        }
        if n > MAX_ORDER {
            return Err(Error::InvalidOrder {
                got: n,
                max: MAX_ORDER,
            });
        }
        let mut rows = [0u16; MAX_ORDER];
        for (i, line) in lines.iter().enumerate() {
            let chars: Vec<char> = line.chars().collect();
            if chars.len() != n {
                return Err(Error::RaggedLine {
                    line: i + 1,
                    expected: n,
                    found: chars.len(),
                });
            }
            for (j, ch) in chars.into_iter().enumerate() {
                match ch {
                    '0' => rows[i] |= 1 << j,
                    '-' if i == j => return Err(Error::NonzeroDiagonal(i + 1)),
                    '-' => {}
                    other => {
                        return Err(Error::ForeignCharacter {
                            line: i + 1,
                            column: j + 1,
                            ch: other,
                        })
                    }
                }
            }
        }
        Ok(Self::from_rows_unchecked(n, &rows[..n]))
    }

    /// One string per row, `'0'` and `'-'` glyphs.
    pub fn row_strings(&self) -> Vec<String> {
        let n = self.order();
        (0..n)
            .map(|i| (0..n).map(|j| self.entry(i, j).glyph()).collect())
            .collect()
    }

    /// Text form with a trailing newline, as written to `.mat` files.
    pub fn to_text(&self) -> String {
        let mut s = self.row_strings().join("\n");
        s.push('\n');
        s
    }
}

impl fmt::Display for NormalMatrix {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(&self.row_strings().join("\n"))
    }
}

impl fmt::Debug for NormalMatrix {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "NormalMatrix[{}]", self.row_strings().join("/"))
    }
}

impl FromStr for NormalMatrix {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        NormalMatrix::parse(s)
    }
}

impl Serialize for NormalMatrix {
    fn serialize<S: Serializer>(&self, serializer: S) -> std::result::Result<S::Ok, S::Error> {
        self.row_strings().serialize(serializer)
    }
}

impl<'de> Deserialize<'de> for NormalMatrix {
    fn deserialize<D: Deserializer<'de>>(deserializer: D) -> std::result::Result<Self, D::Error> {
        let rows = Vec::<String>::deserialize(deserializer)?;
        NormalMatrix::parse(&rows.join("\n")).map_err(serde::de::Error::custom)
    }
}

/// `Σ(A,B,i)`: off-diagonal zeros in row `i` of both matrices.
pub fn sigma_row(a: &NormalMatrix, b: &NormalMatrix, i: usize) -> Result<usize> {
    a.check_same_order(b)?;
    Ok(a.nu_row(i)? + b.nu_row(i)? - 2)
}

/// `Σ(A,B) = ν(A) + ν(B) - 2n`.
pub fn sigma(a: &NormalMatrix, b: &NormalMatrix) -> Result<usize> {
    a.check_same_order(b)?;
    Ok(a.offdiag_count() + b.offdiag_count())
}
