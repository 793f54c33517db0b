//! Required-zero families `V(p;q)`, `W(p;q)`, `Z(p;q)`, their generic
//! matrices, and the four-variant minimal-pair family `𝔐_km`.
//!
//! Indices are 0-based in the API; atoms print and parse 1-based
//! (`"V:1,2&Z:2,1"`).

use std::fmt;
use std::str::FromStr;

use serde::{Serialize, Serializer};

use crate::error::{Error, Result};
use crate::matrix::{full_mask, NormalMatrix, MAX_ORDER};
use crate::ortho::{IndicatorReport, ZeroClass};

/// One generator of a family.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum Atom {
    /// Row `p` and column `q` entirely zero.
    V(usize, usize),
    /// Row `p` and column `q` zero except possibly at `(p,q)`.
    W(usize, usize),
    /// The single cell `(p,q)` zero.
    Z(usize, usize),
}

impl Atom {
    fn indices(self) -> (usize, usize) {
        match self {
            Atom::V(p, q) | Atom::W(p, q) | Atom::Z(p, q) => (p, q),
        }
    }

    /// Adds the zeros this atom requires to `rows`.
    fn apply(self, n: usize, rows: &mut [u16]) {
        let full = full_mask(n);
        match self {
            Atom::V(p, q) => {
                rows[p] = full;
                for r in rows.iter_mut() {
                    *r |= 1 << q;
                }
            }
            Atom::W(p, q) => {
                rows[p] |= full & !(1 << q);
                for (i, r) in rows.iter_mut().enumerate() {
                    if i != p {
                        *r |= 1 << q;
                    }
                }
            }
            Atom::Z(p, q) => rows[p] |= 1 << q,
        }
    }
}

impl fmt::Display for Atom {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let (tag, (p, q)) = match self {
            Atom::V(..) => ('V', self.indices()),
            Atom::W(..) => ('W', self.indices()),
            Atom::Z(..) => ('Z', self.indices()),
        };
        write!(f, "{}:{},{}", tag, p + 1, q + 1)
    }
}

impl FromStr for Atom {
    type Err = Error;

    fn from_str(s: &str) -> Result<Atom> {
        let bad = || Error::BadAtom(s.to_string());
        let (tag, rest) = s.trim().split_once(':').ok_or_else(bad)?;
        let (p, q) = rest.split_once(',').ok_or_else(bad)?;
        let p: usize = p.trim().parse().map_err(|_| bad())?;
        let q: usize = q.trim().parse().map_err(|_| bad())?;
        if p == 0 || q == 0 {
            return Err(bad());
        }
        let (p, q) = (p - 1, q - 1);
        match tag.trim() {
            "V" | "v" => Ok(Atom::V(p, q)),
            "W" | "w" => Ok(Atom::W(p, q)),
            "Z" | "z" => Ok(Atom::Z(p, q)),
            _ => Err(bad()),
        }
    }
}

/// A conjunction of atoms; its generic matrix has exactly the required zeros.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct FamilySpec {
    atoms: Vec<Atom>,
    required: NormalMatrix,
}

impl FamilySpec {
    pub fn new(n: usize, atoms: Vec<Atom>) -> Result<FamilySpec> {
        let mut rows = [0u16; MAX_ORDER];
        NormalMatrix::identity(n)?;
        for atom in &atoms {
            let (p, q) = atom.indices();
            for idx in [p, q] {
                if idx >= n {
                    return Err(Error::IndexOutOfRange { index: idx + 1, n });
                }
            }
            atom.apply(n, &mut rows[..n]);
        }
        Ok(FamilySpec {
            atoms,
            required: NormalMatrix::from_rows_unchecked(n, &rows[..n]),
        })
    }

    /// Parses `"V:p,q&W:p,q&Z:p,q"` (1-based indices).
    pub fn parse(n: usize, text: &str) -> Result<FamilySpec> {
        let atoms = text
            .split('&')
            .map(str::parse)
            .collect::<Result<Vec<Atom>>>()?;
        FamilySpec::new(n, atoms)
    }

    pub fn v(n: usize, p: usize, q: usize) -> Result<FamilySpec> {
        FamilySpec::new(n, vec![Atom::V(p, q)])
    }

    pub fn w(n: usize, p: usize, q: usize) -> Result<FamilySpec> {
        FamilySpec::new(n, vec![Atom::W(p, q)])
    }

    pub fn order(&self) -> usize {
        self.required.order()
    }

    pub fn atoms(&self) -> &[Atom] {
        &self.atoms
    }

    /// The required zeros, diagonal included.
    pub fn required_zeros(&self) -> &NormalMatrix {
        &self.required
    }

    /// The unique member with no zeros beyond those required.
    pub fn generic(&self) -> NormalMatrix {
        self.required
    }

    pub fn contains(&self, a: &NormalMatrix) -> Result<bool> {
        self.required.check_same_order(a)?;
        Ok(self
            .required
            .rows()
            .iter()
            .zip(a.rows())
            .all(|(req, have)| req & !have == 0))
    }
}

impl fmt::Display for FamilySpec {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let parts: Vec<String> = self.atoms.iter().map(Atom::to_string).collect();
        f.write_str(&parts.join("&"))
    }
}

impl Serialize for FamilySpec {
    fn serialize<S: Serializer>(&self, serializer: S) -> std::result::Result<S::Ok, S::Error> {
        serializer.collect_str(self)
    }
}

/// `A ∈ V(p;q)`.
#[inline]
pub fn in_v(a: &NormalMatrix, p: usize, q: usize) -> bool {
    let full = full_mask(a.order());
    a.row(p) == full && a.col(q) == full
}

/// `A ∈ W(p;q)`.
#[inline]
pub fn in_w(a: &NormalMatrix, p: usize, q: usize) -> bool {
    let full = full_mask(a.order());
    a.row(p) | 1 << q == full && a.col(q) | 1 << p == full
}

/// `A ∈ Z(p;q)`.
#[inline]
pub fn in_z(a: &NormalMatrix, p: usize, q: usize) -> bool {
    a.is_zero_at(p, q)
}

/// The four sufficient conditions for orthogonality, numbered 0 to 3.
///
/// 0. `A ∈ V(k;m)`, `B ∈ V(m;k)`
/// 1. `A ∈ W(k;m)∩Z(k;m)∩Z(m;k)`, `B ∈ W(m;k)`
/// 2. `A ∈ W(k;m)∩Z(m;k)`, `B ∈ W(m;k)∩Z(k;m)`
/// 3. `A ∈ W(k;m)`, `B ∈ W(m;k)∩Z(k;m)∩Z(m;k)`
pub fn sufficient_condition(
    condition: u8,
    a: &NormalMatrix,
    b: &NormalMatrix,
    k: usize,
    m: usize,
) -> bool {
    match condition {
        0 => in_v(a, k, m) && in_v(b, m, k),
        1 => in_w(a, k, m) && in_z(a, k, m) && in_z(a, m, k) && in_w(b, m, k),
        2 => in_w(a, k, m) && in_z(a, m, k) && in_w(b, m, k) && in_z(b, k, m),
        3 => in_w(a, k, m) && in_w(b, m, k) && in_z(b, k, m) && in_z(b, m, k),
        _ => false,
    }
}

/// A case of `𝔐_km`: `variant` selects one of the four generic pairs.
#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct MmVariant {
    pub k: usize,
    pub m: usize,
    pub variant: u8,
}

impl Serialize for MmVariant {
    fn serialize<S: Serializer>(&self, serializer: S) -> std::result::Result<S::Ok, S::Error> {
        use serde::ser::SerializeStruct;
        let mut s = serializer.serialize_struct("MmVariant", 3)?;
        s.serialize_field("k", &(self.k + 1))?;
        s.serialize_field("m", &(self.m + 1))?;
        s.serialize_field("variant", &self.variant)?;
        s.end()
    }
}

impl MmVariant {
    /// The two family specs of this case, `(A's family, B's family)`.
    pub fn specs(&self, n: usize) -> Result<(FamilySpec, FamilySpec)> {
        let (k, m) = (self.k, self.m);
        let (a, b) = match self.variant {
            0 => (vec![Atom::V(m, k)], vec![Atom::V(k, m)]),
            1 => (
                vec![Atom::W(m, k), Atom::Z(k, m)],
                vec![Atom::W(k, m), Atom::Z(m, k)],
            ),
            2 => (
                vec![Atom::W(m, k)],
                vec![Atom::W(k, m), Atom::Z(m, k), Atom::Z(k, m)],
            ),
            3 => (
                vec![Atom::W(m, k), Atom::Z(m, k), Atom::Z(k, m)],
                vec![Atom::W(k, m)],
            ),
            v => return Err(Error::Precondition(format!("variant {v} not in 0..=3"))),
        };
        Ok((FamilySpec::new(n, a)?, FamilySpec::new(n, b)?))
    }
}

/// The generic pair of one `𝔐_km` case.
pub fn mm_pair(v: MmVariant, n: usize) -> Result<(NormalMatrix, NormalMatrix)> {
    let (a, b) = v.specs(n)?;
    Ok((a.generic(), b.generic()))
}

/// Finds the `𝔐_km` case whose generic pair equals `(a, b)`.
///
/// Matches are compared directly against generated pairs. Ties resolve to the
/// lexicographically smallest `(k, m)`, then the smallest variant.
pub fn mm_classify(a: &NormalMatrix, b: &NormalMatrix) -> Result<Option<MmVariant>> {
    a.check_same_order(b)?;
    let n = a.order();
    for k in 0..n {
        for m in 0..n {
            for variant in 0..4 {
                let v = MmVariant { k, m, variant };
                let (ga, gb) = mm_pair(v, n)?;
                if ga == *a && gb == *b {
                    return Ok(Some(v));
                }
            }
        }
    }
    Ok(None)
}

/// Recovers `(k, m)`, `k != m`, from an indicator report alone: every
/// off-diagonal cell outside rows and columns `k, m` is a gift zero with
/// witness `(k, m)`, the cells `(k,m)` and `(m,k)` are propagation zeros, and
/// the pair has no duplicates. Returns `None` when `A = B`.
pub fn mm_characterize(report: &IndicatorReport) -> Option<(usize, usize)> {
    if report.a == report.b || report.duplicate_count != 0 {
        return None;
    }
    let n = report.n();
    for k in 0..n {
        for m in 0..n {
            if k == m {
                continue;
            }
            let props = matches!(report.class(k, m), ZeroClass::Propagation)
                && matches!(report.class(m, k), ZeroClass::Propagation);
            if !props {
                continue;
            }
            let gifts = (0..n).filter(|&s| s != k && s != m).all(|s| {
                (0..n).filter(|&t| t != s && t != k && t != m).all(
                    |t| matches!(report.class(s, t), ZeroClass::Gift(w) if w.contains(&(k, m))),
                )
            });
            if gifts {
                return Some((k, m));
            }
        }
    }
    None
}
