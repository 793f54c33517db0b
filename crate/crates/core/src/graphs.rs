//! The relation graphs ORTHO, VNL and WNL on normal matrices, with
//! distance, diameter, girth and connectivity.
//!
//! Adjacency is stored as one bitset row per vertex. Loops are kept apart
//! and never take part in paths or cycles.

use std::collections::{HashMap, VecDeque};
use std::fmt;
use std::str::FromStr;
use std::sync::OnceLock;

use rayon::prelude::*;
use serde::{Serialize, Serializer};

use crate::error::{Error, Result};
use crate::families::{in_v, sufficient_condition};
use crate::matrix::NormalMatrix;
use crate::ortho::{orthogonal_unchecked, VertexSet};

/// Largest order for which graphs are built.
pub const MAX_GRAPH_ORDER: usize = 4;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum GraphKind {
    Ortho,
    Vnl,
    Wnl,
}

impl GraphKind {
    pub const ALL: [GraphKind; 3] = [GraphKind::Ortho, GraphKind::Vnl, GraphKind::Wnl];

    pub fn vertex_set(self) -> VertexSet {
        match self {
            GraphKind::Ortho => VertexSet::Ortho,
            GraphKind::Vnl => VertexSet::Vnl,
            GraphKind::Wnl => VertexSet::Wnl,
        }
    }

    pub fn name(self) -> &'static str {
        match self {
            GraphKind::Ortho => "ORTHO",
            GraphKind::Vnl => "VNL",
            GraphKind::Wnl => "WNL",
        }
    }
}

impl fmt::Display for GraphKind {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.name())
    }
}

impl FromStr for GraphKind {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        match s.to_ascii_lowercase().as_str() {
            "ortho" => Ok(GraphKind::Ortho),
            "vnl" => Ok(GraphKind::Vnl),
            "wnl" => Ok(GraphKind::Wnl),
            _ => Err(Error::Precondition(format!(
                "unknown graph kind {s:?}; expected ortho, vnl or wnl"
            ))),
        }
    }
}

impl Serialize for GraphKind {
    fn serialize<S: Serializer>(&self, serializer: S) -> std::result::Result<S::Ok, S::Error> {
        serializer.serialize_str(self.name())
    }
}

fn edge_unchecked(kind: GraphKind, a: &NormalMatrix, b: &NormalMatrix) -> bool {
    let n = a.order();
    match kind {
        GraphKind::Ortho => orthogonal_unchecked(a, b),
        GraphKind::Vnl => (0..n).any(|p| (0..n).any(|q| in_v(a, p, q) && in_v(b, q, p))),
        GraphKind::Wnl => {
            (0..n).any(|k| (0..n).any(|m| (1..=3).any(|c| sufficient_condition(c, a, b, k, m))))
        }
    }
}

/// Edge relation of `kind`. Both arguments must be vertices.
pub fn adjacent(kind: GraphKind, a: &NormalMatrix, b: &NormalMatrix) -> Result<bool> {
    a.check_same_order(b)?;
    for x in [a, b] {
        if !kind.vertex_set().contains(x) {
            return Err(Error::Precondition(format!(
                "{x:?} is not a vertex of {kind}"
            )));
        }
    }
    Ok(edge_unchecked(kind, a, b))
}

/// A length that may be infinite; serializes as a number or `"inf"`.
#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct Length(pub Option<u32>);

impl fmt::Display for Length {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self.0 {
            Some(d) => write!(f, "{d}"),
            None => f.write_str("inf"),
        }
    }
}

impl Serialize for Length {
    fn serialize<S: Serializer>(&self, serializer: S) -> std::result::Result<S::Ok, S::Error> {
        match self.0 {
            Some(d) => serializer.serialize_u32(d),
            None => serializer.serialize_str("inf"),
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
pub struct GraphStats {
    pub kind: GraphKind,
    pub n: usize,
    pub vertices: usize,
    pub edges: usize,
    pub loops: usize,
    pub girth: Length,
    pub diameter: Length,
    pub connected: bool,
}

#[derive(Debug, Clone, Serialize)]
pub struct EdgeList {
    /// `(id, matrix)` with 1-based ids.
    pub vertices: Vec<(usize, NormalMatrix)>,
    /// Pairs of ids, smaller id first.
    pub edges: Vec<(usize, usize)>,
    pub loops: Vec<usize>,
}

/// A built relation graph; immutable once constructed.
#[derive(Debug)]
pub struct OrthoGraph {
    kind: GraphKind,
    n: usize,
    vertices: Vec<NormalMatrix>,
    index: HashMap<NormalMatrix, usize>,
    words: usize,
    /// Row `v` holds the neighbours of `v`, loops excluded.
    adjacency: Vec<Vec<u64>>,
    loops: Vec<bool>,
    edges: usize,
    stats: OnceLock<GraphStats>,
}

/// Builds the graph of `kind` on its vertex set at order `n`, with vertices
/// in increasing off-diagonal mask order.
pub fn build(kind: GraphKind, n: usize) -> Result<OrthoGraph> {
    if !(2..=MAX_GRAPH_ORDER).contains(&n) {
        return Err(Error::TooLarge {
            what: "graph construction",
            got: n,
            max: MAX_GRAPH_ORDER,
        });
    }
    let vertices = kind.vertex_set().members(n)?;
    let count = vertices.len();
    let words = count.div_ceil(64);
    let rows: Vec<(Vec<u64>, bool)> = (0..count)
        .into_par_iter()
        .map(|u| {
            let mut row = vec![0u64; words];
            for v in 0..count {
                if v != u && edge_unchecked(kind, &vertices[u], &vertices[v]) {
                    row[v / 64] |= 1 << (v % 64);
                }
            }
            (row, edge_unchecked(kind, &vertices[u], &vertices[u]))
        })
        .collect();
    let (adjacency, loops): (Vec<Vec<u64>>, Vec<bool>) = rows.into_iter().unzip();
    let degree_sum: usize = adjacency
        .iter()
        .map(|r| r.iter().map(|w| w.count_ones() as usize).sum::<usize>())
        .sum();
    let index = vertices.iter().enumerate().map(|(i, v)| (*v, i)).collect();
    Ok(OrthoGraph {
        kind,
        n,
        vertices,
        index,
        words,
        adjacency,
        loops,
        edges: degree_sum / 2,
        stats: OnceLock::new(),
    })
}

fn bit(row: &[u64], v: usize) -> bool {
    row[v / 64] >> (v % 64) & 1 == 1
}

fn members(row: &[u64]) -> impl Iterator<Item = usize> + '_ {
    row.iter().enumerate().flat_map(|(w, &word)| {
        let mut word = word;
        std::iter::from_fn(move || {
            if word == 0 {
                None
            } else {
                let t = word.trailing_zeros() as usize;
                word &= word - 1;
                Some(w * 64 + t)
            }
        })
    })
}

impl OrthoGraph {
    pub fn kind(&self) -> GraphKind {
        self.kind
    }

    pub fn order(&self) -> usize {
        self.n
    }

    pub fn vertices(&self) -> &[NormalMatrix] {
        &self.vertices
    }

    pub fn vertex_count(&self) -> usize {
        self.vertices.len()
    }

    pub fn edge_count(&self) -> usize {
        self.edges
    }

    pub fn loop_count(&self) -> usize {
        self.loops.iter().filter(|&&l| l).count()
    }

    pub fn index_of(&self, a: &NormalMatrix) -> Result<usize> {
        self.index.get(a).copied().ok_or_else(|| {
            Error::Precondition(format!(
                "{a:?} is not a vertex of {} at n={}",
                self.kind, self.n
            ))
        })
    }

    pub fn has_loop(&self, v: usize) -> bool {
        self.loops[v]
    }

    /// Non-loop adjacency between vertex indices.
    pub fn is_adjacent(&self, u: usize, v: usize) -> bool {
        bit(&self.adjacency[u], v)
    }

    pub fn neighbors(&self, v: usize) -> impl Iterator<Item = usize> + '_ {
        members(&self.adjacency[v])
    }

    pub fn degree(&self, v: usize) -> usize {
        self.adjacency[v]
            .iter()
            .map(|w| w.count_ones() as usize)
            .sum()
    }

    /// Distances from `source` to every vertex; `None` when unreachable.
    pub fn distances_from(&self, source: usize) -> Vec<Option<u32>> {
        let mut dist = vec![None; self.vertex_count()];
        let mut seen = vec![0u64; self.words];
        let mut frontier = vec![0u64; self.words];
        seen[source / 64] |= 1 << (source % 64);
        frontier[source / 64] |= 1 << (source % 64);
        dist[source] = Some(0);
        let mut level = 0u32;
        loop {
            let mut next = vec![0u64; self.words];
            for u in members(&frontier) {
                for (n, a) in next.iter_mut().zip(&self.adjacency[u]) {
                    *n |= a;
                }
            }
            let mut any = false;
            for (n, s) in next.iter_mut().zip(seen.iter_mut()) {
                *n &= !*s;
                *s |= *n;
                any |= *n != 0;
            }
            if !any {
                return dist;
            }
            level += 1;
            for v in members(&next) {
                dist[v] = Some(level);
            }
            frontier = next;
        }
    }

    pub fn dist(&self, a: &NormalMatrix, b: &NormalMatrix) -> Result<Length> {
        let u = self.index_of(a)?;
        let v = self.index_of(b)?;
        Ok(Length(self.distances_from(u)[v]))
    }

    /// Largest eccentricity; infinite when the graph is disconnected.
    pub fn diameter(&self) -> Length {
        let ecc: Vec<Option<u32>> = (0..self.vertex_count())
            .into_par_iter()
            .map(|s| {
                self.distances_from(s)
                    .into_iter()
                    .try_fold(0u32, |m, d| d.map(|d| m.max(d)))
            })
            .collect();
        Length(ecc.into_iter().try_fold(0u32, |m, e| e.map(|e| m.max(e))))
    }

    pub fn is_connected(&self) -> bool {
        self.vertex_count() == 0 || self.distances_from(0).iter().all(|d| d.is_some())
    }

    /// Length of the shortest cycle that is not a loop.
    pub fn girth(&self) -> Length {
        let triangle = (0..self.vertex_count()).into_par_iter().any(|u| {
            self.neighbors(u).any(|v| {
                v > u
                    && self.adjacency[u]
                        .iter()
                        .zip(&self.adjacency[v])
                        .any(|(x, y)| x & y != 0)
            })
        });
        if triangle {
            return Length(Some(3));
        }
        let best = (0..self.vertex_count())
            .into_par_iter()
            .filter_map(|s| self.shortest_cycle_through(s))
            .min();
        Length(best)
    }

    /// Shortest cycle found by a breadth-first search from `s`.
    fn shortest_cycle_through(&self, s: usize) -> Option<u32> {
        let count = self.vertex_count();
        let mut dist = vec![u32::MAX; count];
        let mut parent = vec![usize::MAX; count];
        let mut queue = VecDeque::from([s]);
        dist[s] = 0;
        let mut best: Option<u32> = None;
        while let Some(x) = queue.pop_front() {
            if best.is_some_and(|b| 2 * dist[x] + 1 >= b) {
                break;
            }
            for y in self.neighbors(x) {
                if dist[y] == u32::MAX {
                    dist[y] = dist[x] + 1;
                    parent[y] = x;
                    queue.push_back(y);
                } else if parent[x] != y {
                    let len = dist[x] + dist[y] + 1;
                    best = Some(best.map_or(len, |b| b.min(len)));
                }
            }
        }
        best
    }

    pub fn stats(&self) -> GraphStats {
        *self.stats.get_or_init(|| GraphStats {
            kind: self.kind,
            n: self.n,
            vertices: self.vertex_count(),
            edges: self.edge_count(),
            loops: self.loop_count(),
            girth: self.girth(),
            diameter: self.diameter(),
            connected: self.is_connected(),
        })
    }

    pub fn edge_list(&self) -> EdgeList {
        let vertices = self
            .vertices
            .iter()
            .enumerate()
            .map(|(i, v)| (i + 1, *v))
            .collect();
        let edges = (0..self.vertex_count())
            .flat_map(|u| {
                self.neighbors(u)
                    .filter(move |&v| v > u)
                    .map(move |v| (u + 1, v + 1))
            })
            .collect();
        let loops = (0..self.vertex_count())
            .filter(|&v| self.loops[v])
            .map(|v| v + 1)
            .collect();
        EdgeList {
            vertices,
            edges,
            loops,
        }
    }
}
