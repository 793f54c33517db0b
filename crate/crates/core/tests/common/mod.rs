//! Reference evaluator and fixtures shared by the integration tests.
//!
//! `Dense` is a plain max-plus matrix of `i8` entries. It reads matrices
//! through their text form only and multiplies with a triple loop, so it
//! shares no code with the bitmask kernels it checks.

#![allow(dead_code)]

pub mod laws;

use normortho::NormalMatrix;
use proptest::prelude::*;
use rand::Rng;

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Dense {
    pub n: usize,
    pub e: Vec<Vec<i8>>,
}

impl Dense {
    pub fn parse(text: &str) -> Dense {
        let e: Vec<Vec<i8>> = text
            .lines()
            .filter(|l| !l.is_empty())
            .map(|l| {
                l.chars()
                    .map(|c| match c {
                        '0' => 0,
                        '-' => -1,
                        other => panic!("bad glyph {other:?}"),
                    })
                    .collect()
            })
            .collect();
        let n = e.len();
        assert!(e.iter().all(|r| r.len() == n));
        Dense { n, e }
    }

    pub fn of(m: &NormalMatrix) -> Dense {
        Dense::parse(&m.to_text())
    }

    pub fn text(&self) -> String {
        let mut s = String::new();
        for row in &self.e {
            for &x in row {
                s.push(if x == 0 { '0' } else { '-' });
            }
            s.push('\n');
        }
        s
    }

    /// `max_t (a_it + b_tj)`, clamped back into `{0, -1}`.
    pub fn odot(&self, other: &Dense) -> Dense {
        let n = self.n;
        let mut e = vec![vec![-1i8; n]; n];
        for (i, row) in e.iter_mut().enumerate() {
            for (j, cell) in row.iter_mut().enumerate() {
                let mut best = i8::MIN;
                for t in 0..n {
                    best = best.max(self.e[i][t] + other.e[t][j]);
                }
                *cell = best.max(-1);
            }
        }
        Dense { n, e }
    }

    pub fn oplus(&self, other: &Dense) -> Dense {
        let e = self
            .e
            .iter()
            .zip(&other.e)
            .map(|(r, s)| r.iter().zip(s).map(|(x, y)| *x.max(y)).collect())
            .collect();
        Dense { n: self.n, e }
    }

    pub fn transpose(&self) -> Dense {
        let n = self.n;
        Dense {
            n,
            e: (0..n)
                .map(|i| (0..n).map(|j| self.e[j][i]).collect())
                .collect(),
        }
    }

    pub fn is_all_zero(&self) -> bool {
        self.e.iter().all(|r| r.iter().all(|&x| x == 0))
    }

    pub fn zero(&self, i: usize, j: usize) -> bool {
        self.e[i][j] == 0
    }

    pub fn nu(&self) -> usize {
        self.e.iter().flatten().filter(|&&x| x == 0).count()
    }
}

pub fn orthogonal(a: &Dense, b: &Dense) -> bool {
    a.odot(b).is_all_zero() && b.odot(a).is_all_zero()
}

pub fn sigma(a: &Dense, b: &Dense) -> usize {
    a.nu() + b.nu() - 2 * a.n
}

/// Class tag of an off-diagonal cell straight from the definitions.
pub fn class_tag(a: &Dense, b: &Dense, s: usize, t: usize) -> char {
    let n = a.n;
    if s == t {
        return 'D';
    }
    if a.zero(s, t) || b.zero(s, t) {
        return 'P';
    }
    let cost = (0..n)
        .any(|k| k != s && k != t && a.zero(s, k) && b.zero(k, t) && b.zero(s, k) && a.zero(k, t));
    if cost {
        return 'C';
    }
    let gift = (0..n).any(|k| {
        (0..n).any(|m| {
            let distinct = k != s && k != t && m != s && m != t && k != m;
            distinct && a.zero(s, k) && b.zero(k, t) && b.zero(s, m) && a.zero(m, t)
        })
    });
    if gift {
        'G'
    } else {
        '-'
    }
}

pub fn random_normal<R: Rng>(rng: &mut R, n: usize, density: f64) -> NormalMatrix {
    let zeros: Vec<(usize, usize)> = (0..n)
        .flat_map(|i| (0..n).map(move |j| (i, j)))
        .filter(|&(i, j)| i != j)
        .filter(|_| rng.gen_bool(density))
        .collect();
    NormalMatrix::from_zeros(n, zeros).unwrap()
}

/// Normal matrices of order `n` with independent off-diagonal cells.
pub fn normal(n: usize) -> impl Strategy<Value = NormalMatrix> {
    prop::collection::vec(any::<bool>(), n * n - n).prop_map(move |cells| {
        let mut zeros = Vec::new();
        let mut it = cells.into_iter();
        for i in 0..n {
            for j in 0..n {
                if i != j && it.next().unwrap() {
                    zeros.push((i, j));
                }
            }
        }
        NormalMatrix::from_zeros(n, zeros).unwrap()
    })
}

/// Same-order pairs with `1 <= n <= max_n`.
pub fn pair_upto(max_n: usize) -> impl Strategy<Value = (NormalMatrix, NormalMatrix)> {
    (1..=max_n).prop_flat_map(|n| (normal(n), normal(n)))
}

/// Zero-heavy pairs, which are orthogonal far more often.
pub fn dense_pair_upto(max_n: usize) -> impl Strategy<Value = (NormalMatrix, NormalMatrix)> {
    (1..=max_n).prop_flat_map(|n| {
        let m = n * n - n;
        (
            prop::collection::vec(prop::bool::weighted(0.7), m),
            prop::collection::vec(prop::bool::weighted(0.7), m),
        )
            .prop_map(move |(x, y)| (from_cells(n, &x), from_cells(n, &y)))
    })
}

pub fn from_cells(n: usize, cells: &[bool]) -> NormalMatrix {
    let mut zeros = Vec::new();
    let mut k = 0;
    for i in 0..n {
        for j in 0..n {
            if i != j {
                if cells[k] {
                    zeros.push((i, j));
                }
                k += 1;
            }
        }
    }
    NormalMatrix::from_zeros(n, zeros).unwrap()
}

pub fn m(text: &str) -> NormalMatrix {
    NormalMatrix::parse(text).unwrap()
}

/// Minimal pairs outside every `𝔐_km`, orders 3 to 6.
pub fn counterexample_pair(n: usize) -> (NormalMatrix, NormalMatrix) {
    let (a, b) = match n {
        3 => ("0--\n-0-\n--0", "000\n000\n000"),
        4 => ("0--0\n-00-\n-00-\n0--0", "0-0-\n-0-0\n0-0-\n-0-0"),
        5 => (
            "0--0-\n-00-0\n-00-0\n0--0-\n-00-0",
            "0-0--\n-0-0-\n0-0--\n-0-00\n---00",
        ),
        6 => (
            "0--0--\n-0--0-\n--0--0\n0--0--\n-0--0-\n--0--0",
            "0---00\n-0-0-0\n--000-\n-000--\n0-0-0-\n00---0",
        ),
        _ => panic!("no counterexample pair at n={n}"),
    };
    (m(a), m(b))
}

/// The four `𝔐_km` pairs at `(k, m) = (4, 3)`, `n = 6`, as printed.
/// Row 2 of the first `B` is completed to `-00---`.
pub fn mm_example_pairs() -> [(NormalMatrix, NormalMatrix); 4] {
    [
        (
            "0--0--\n-0-0--\n000000\n---0--\n---00-\n---0-0",
            "0-0---\n-00---\n--0---\n000000\n--0-0-\n--0--0",
        ),
        (
            "0--0--\n-0-0--\n000-00\n--00--\n---00-\n---0-0",
            "0-0---\n-00---\n--00--\n00-000\n--0-0-\n--0--0",
        ),
        (
            "0--0--\n-0-0--\n000-00\n---0--\n---00-\n---0-0",
            "0-0---\n-00---\n--00--\n000000\n--0-0-\n--0--0",
        ),
        (
            "0--0--\n-0-0--\n000000\n--00--\n---00-\n---0-0",
            "0-0---\n-00---\n--0---\n00-000\n--0-0-\n--0--0",
        ),
    ]
    .map(|(a, b)| (m(a), m(b)))
}

/// The 3x3 self-orthogonal circulant.
pub fn circulant() -> NormalMatrix {
    m("0-0\n00-\n-00")
}

/// The pair at distance 3 in WNL at order 3.
pub fn wnl_far_pair() -> (NormalMatrix, NormalMatrix) {
    (m("0-0\n-0-\n-00"), m("00-\n-00\n--0"))
}
