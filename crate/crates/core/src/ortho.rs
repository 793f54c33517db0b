//! Orthogonality, indicator matrices and the classification of their zeros.

use rayon::prelude::*;
use serde::ser::SerializeStruct;
use serde::{Serialize, Serializer};

use crate::error::{Error, Result};
use crate::families::{in_v, in_w};
use crate::matrix::{bits, full_mask, odot_rows, product_is_full, NormalMatrix};

/// `A ⊙ B = Z_n = B ⊙ A`.
pub fn is_orthogonal(a: &NormalMatrix, b: &NormalMatrix) -> Result<bool> {
    a.check_same_order(b)?;
    Ok(orthogonal_unchecked(a, b))
}

#[inline]
pub(crate) fn orthogonal_unchecked(a: &NormalMatrix, b: &NormalMatrix) -> bool {
    let n = a.order();
    product_is_full(n, a.rows(), b.rows()) && product_is_full(n, b.rows(), a.rows())
}

/// `A² = Z_n`.
pub fn is_self_orthogonal(a: &NormalMatrix) -> bool {
    product_is_full(a.order(), a.rows(), a.rows())
}

/// How a cell of the indicator matrix came to be zero.
///
/// Witness lists are complete and 0-based: `Cost` holds every `k` with
/// `a_sk = b_kt = b_sk = a_kt = 0`, `Gift` every `(k, m)` with
/// `a_sk = b_kt = b_sm = a_mt = 0`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub enum ZeroClass {
    Diagonal,
    Propagation,
    Cost(Vec<usize>),
    Gift(Vec<(usize, usize)>),
    Nonzero,
}

impl ZeroClass {
    pub fn tag(&self) -> char {
        match self {
            ZeroClass::Diagonal => 'D',
            ZeroClass::Propagation => 'P',
            ZeroClass::Cost(_) => 'C',
            ZeroClass::Gift(_) => 'G',
            ZeroClass::Nonzero => '-',
        }
    }
}

/// Classifies off-diagonal `(s, t)` from the entries of `a` and `b` alone,
/// without consulting the products. Precedence: propagation, cost, gift.
fn classify_cell(a: &NormalMatrix, b: &NormalMatrix, s: usize, t: usize) -> ZeroClass {
    if a.is_zero_at(s, t) || b.is_zero_at(s, t) {
        return ZeroClass::Propagation;
    }
    let outside = !(1u16 << s | 1u16 << t);
    let cost = a.row(s) & b.row(s) & a.col(t) & b.col(t) & outside;
    if cost != 0 {
        return ZeroClass::Cost(bits(cost).collect());
    }
    let ks = a.row(s) & b.col(t) & outside;
    let ms = b.row(s) & a.col(t) & outside;
    let gifts: Vec<(usize, usize)> = bits(ks)
        .flat_map(|k| bits(ms).filter(move |&m| m != k).map(move |m| (k, m)))
        .collect();
    if gifts.is_empty() {
        ZeroClass::Nonzero
    } else {
        ZeroClass::Gift(gifts)
    }
}

/// The indicator matrix of a pair with every zero classified.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct IndicatorReport {
    pub a: NormalMatrix,
    pub b: NormalMatrix,
    /// `A ⊙ B`
    pub left: NormalMatrix,
    /// `B ⊙ A`
    pub right: NormalMatrix,
    /// Zero exactly where both products are zero.
    pub indicator: NormalMatrix,
    classes: Vec<ZeroClass>,
    pub prop_count: usize,
    pub cost_count: usize,
    pub gift_count: usize,
    /// Off-diagonal cells where both `A` and `B` vanish; 0 when `A = B`.
    pub duplicate_count: usize,
}

impl IndicatorReport {
    pub fn n(&self) -> usize {
        self.a.order()
    }

    pub fn class(&self, s: usize, t: usize) -> &ZeroClass {
        &self.classes[s * self.n() + t]
    }

    pub fn is_orthogonal(&self) -> bool {
        self.indicator.is_all_zero()
    }

    /// Cells `(s,t)` of row `s` with their class, diagonal skipped.
    pub fn row_classes(&self, s: usize) -> impl Iterator<Item = (usize, &ZeroClass)> + '_ {
        (0..self.n())
            .filter(move |&t| t != s)
            .map(move |t| (t, self.class(s, t)))
    }

    /// Witness lines in 1-based form: `"(s,t)→(k,m)"` for gifts and
    /// `"(s,t)→(k,k)"` for costs, one per witness.
    pub fn witness_lines(&self) -> Vec<String> {
        let n = self.n();
        let mut out = Vec::new();
        for s in 0..n {
            for t in 0..n {
                match self.class(s, t) {
                    ZeroClass::Cost(ks) => out.extend(
                        ks.iter()
                            .map(|k| format!("({},{})→({},{})", s + 1, t + 1, k + 1, k + 1)),
                    ),
                    ZeroClass::Gift(ps) => out.extend(
                        ps.iter()
                            .map(|(k, m)| format!("({},{})→({},{})", s + 1, t + 1, k + 1, m + 1)),
                    ),
                    _ => {}
                }
            }
        }
        out
    }

    /// One string per row of class tags: `D`, `P`, `C`, `G`, or `-`.
    pub fn class_rows(&self) -> Vec<String> {
        let n = self.n();
        (0..n)
            .map(|s| (0..n).map(|t| self.class(s, t).tag()).collect())
            .collect()
    }
}

impl Serialize for IndicatorReport {
    fn serialize<S: Serializer>(&self, serializer: S) -> std::result::Result<S::Ok, S::Error> {
        let mut s = serializer.serialize_struct("IndicatorReport", 12)?;
        s.serialize_field("n", &self.n())?;
        s.serialize_field("orthogonal", &self.is_orthogonal())?;
        s.serialize_field("left", &self.left)?;
        s.serialize_field("right", &self.right)?;
        s.serialize_field("indicator", &self.indicator)?;
        s.serialize_field("classes", &self.class_rows())?;
        s.serialize_field("prop", &self.prop_count)?;
        s.serialize_field("cost", &self.cost_count)?;
        s.serialize_field("gift", &self.gift_count)?;
        s.serialize_field("duplicates", &self.duplicate_count)?;
        s.serialize_field("witnesses", &self.witness_lines())?;
        s.end()
    }
}

/// Builds the indicator report of `(a, b)`.
pub fn indicator(a: &NormalMatrix, b: &NormalMatrix) -> Result<IndicatorReport> {
    a.check_same_order(b)?;
    let n = a.order();
    let left = NormalMatrix::from_rows_unchecked(n, &odot_rows(n, a.rows(), b.rows())[..n]);
    let right = NormalMatrix::from_rows_unchecked(n, &odot_rows(n, b.rows(), a.rows())[..n]);
    let c_rows: Vec<u16> = (0..n).map(|i| left.row(i) & right.row(i)).collect();
    let indicator = NormalMatrix::from_rows_unchecked(n, &c_rows);

    let mut classes = Vec::with_capacity(n * n);
    let (mut prop, mut cost, mut gift) = (0, 0, 0);
    for s in 0..n {
        for t in 0..n {
            let class = if s == t {
                ZeroClass::Diagonal
            } else {
                classify_cell(a, b, s, t)
            };
            match class {
                ZeroClass::Propagation => prop += 1,
                ZeroClass::Cost(_) => cost += 1,
                ZeroClass::Gift(_) => gift += 1,
                _ => {}
            }
            classes.push(class);
        }
    }
    let duplicate_count = if a == b {
        0
    } else {
        (0..n)
            .map(|i| ((a.row(i) & b.row(i)) & !(1u16 << i)).count_ones() as usize)
            .sum()
    };
    Ok(IndicatorReport {
        a: *a,
        b: *b,
        left,
        right,
        indicator,
        classes,
        prop_count: prop,
        cost_count: cost,
        gift_count: gift,
        duplicate_count,
    })
}

/// Row shapes singled out by the zero taxonomy. Serialized 1-based.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum RowType {
    /// `n-2` cost zeros sharing witness `k`, one propagation zero.
    CostRow(usize),
    /// `n-3` gift zeros sharing witness `(k, m)`, two propagation zeros,
    /// and `Σ(i) = 2`.
    GiftRow(usize, usize),
    Other,
}

impl Serialize for RowType {
    fn serialize<S: Serializer>(&self, serializer: S) -> std::result::Result<S::Ok, S::Error> {
        match *self {
            RowType::CostRow(k) => serializer.serialize_str(&format!("cost({})", k + 1)),
            RowType::GiftRow(k, m) => {
                serializer.serialize_str(&format!("gift({},{})", k + 1, m + 1))
            }
            RowType::Other => serializer.serialize_str("other"),
        }
    }
}

pub fn row_type(report: &IndicatorReport, i: usize) -> Result<RowType> {
    report.a.check_index(i)?;
    let n = report.n();
    let mut props = 0;
    let mut cost_common: Option<u16> = None;
    let mut gift_common: Option<Vec<(usize, usize)>> = None;
    let (mut costs, mut gifts) = (0, 0);
    for (_, class) in report.row_classes(i) {
        match class {
            ZeroClass::Propagation => props += 1,
            ZeroClass::Cost(ks) => {
                costs += 1;
                let mask = ks.iter().fold(0u16, |m, &k| m | 1 << k);
                cost_common = Some(cost_common.map_or(mask, |c| c & mask));
            }
            ZeroClass::Gift(ps) => {
                gifts += 1;
                gift_common = Some(match gift_common {
                    None => ps.clone(),
                    Some(c) => c.into_iter().filter(|p| ps.contains(p)).collect(),
                });
            }
            _ => {}
        }
    }
    if costs > 0 && costs == n - 2 && props == 1 {
        if let Some(c) = cost_common.filter(|c| c.count_ones() == 1) {
            return Ok(RowType::CostRow(c.trailing_zeros() as usize));
        }
    }
    let sigma_i = (report.a.row(i).count_ones() + report.b.row(i).count_ones()) as usize - 2;
    if gifts > 0 && n >= 3 && gifts == n - 3 && props == 2 && sigma_i == 2 {
        if let Some(c) = gift_common.filter(|c| c.len() == 1) {
            return Ok(RowType::GiftRow(c[0].0, c[0].1));
        }
    }
    Ok(RowType::Other)
}

/// Vertex sets and search domains over normal matrices of one order.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize)]
pub enum VertexSet {
    /// Every normal matrix.
    AllNormal,
    /// Every normal matrix except `I_n` and `Z_n`.
    Ortho,
    /// Members of some `V(p;q)`, `p != q`, except `Z_n`.
    Vnl,
    /// Members of some `W(p;q)`, `p != q`, except `Z_n`.
    Wnl,
}

/// Largest order for which vertex sets are enumerated.
pub const MAX_ENUMERATION_ORDER: usize = 5;

impl VertexSet {
    pub fn contains(&self, a: &NormalMatrix) -> bool {
        let n = a.order();
        let off = |f: fn(&NormalMatrix, usize, usize) -> bool| {
            (0..n).any(|p| (0..n).any(|q| p != q && f(a, p, q)))
        };
        match self {
            VertexSet::AllNormal => true,
            VertexSet::Ortho => !a.is_all_zero() && !a.is_identity(),
            VertexSet::Vnl => !a.is_all_zero() && off(in_v),
            VertexSet::Wnl => !a.is_all_zero() && off(in_w),
        }
    }

    /// Members in increasing off-diagonal mask order.
    pub fn members(&self, n: usize) -> Result<Vec<NormalMatrix>> {
        if n > MAX_ENUMERATION_ORDER {
            return Err(Error::TooLarge {
                what: "vertex set enumeration",
                got: n,
                max: MAX_ENUMERATION_ORDER,
            });
        }
        NormalMatrix::identity(n)?;
        let count = 1u64 << (n * n - n);
        Ok((0..count)
            .into_par_iter()
            .map(|m| NormalMatrix::from_offdiag_mask(n, m))
            .filter(|a| self.contains(a))
            .collect())
    }
}

/// `Or(A)_S`: members of `set` orthogonal to `a`, enumerated exactly.
pub fn orth_set(a: &NormalMatrix, set: VertexSet) -> Result<Vec<NormalMatrix>> {
    let members = set.members(a.order())?;
    Ok(members
        .into_par_iter()
        .filter(|b| orthogonal_unchecked(a, b))
        .collect())
}

/// True when every row and every column of both matrices has more than
/// `n/2` zeros, which is enough for orthogonality.
pub fn majority_zeros(a: &NormalMatrix, b: &NormalMatrix) -> Result<bool> {
    a.check_same_order(b)?;
    let n = a.order();
    let ok = |x: &NormalMatrix| {
        x.rows()
            .iter()
            .chain(x.cols())
            .all(|r| 2 * r.count_ones() as usize > n)
    };
    Ok(ok(a) && ok(b))
}

/// The residue-pattern pair: `a_ij = 0` iff `i = j` or `i + j ≡ 2 (mod 3)`,
/// `b_ij = 0` iff `i + j` is even (1-based indices). Needs `n >= 4`. The
/// pair is orthogonal except at `n = 5`, where row 5 of `a` has zeros only in
/// odd columns.
pub fn residue_pair(n: usize) -> Result<(NormalMatrix, NormalMatrix)> {
    if n < 4 {
        return Err(Error::Precondition(format!(
            "residue pair needs n >= 4, got {n}"
        )));
    }
    let cells = |f: &dyn Fn(usize, usize) -> bool| {
        let zeros: Vec<(usize, usize)> = (0..n)
            .flat_map(|i| (0..n).map(move |j| (i, j)))
            .filter(|&(i, j)| f(i + 1, j + 1))
            .collect();
        NormalMatrix::from_zeros(n, zeros)
    };
    let a = cells(&|i, j| (i + j) % 3 == 2)?;
    let b = cells(&|i, j| (i + j) % 2 == 0)?;
    Ok((a, b))
}

/// All zero except column `n` off the diagonal: every row has a zero
/// majority, column `n` does not, and the matrix is not self-orthogonal.
pub fn column_deficient(n: usize) -> Result<NormalMatrix> {
    let mut rows = vec![full_mask(n); n];
    for r in rows.iter_mut().take(n.saturating_sub(1)) {
        *r &= !(1 << (n - 1));
    }
    NormalMatrix::from_rows(n, &rows)
}
