use std::collections::{BTreeMap, HashMap};

use rayon::prelude::*;
use serde::Serialize;

use super::embed::PairSampling;
use super::set::{OrderedRegularSet, Tick};
use super::word::{End, TailWord, Word};
use crate::error::{Error, Result};

#[derive(Debug, Clone, Serialize)]
pub struct Vertex {
    pub lo: Tick,
    pub hi: Tick,
    /// Number of gaps removed when the vertex appeared.
    pub created: usize,
    pub word: Word,
    pub parent: Option<usize>,
    pub children: Option<[usize; 2]>,
}

impl Vertex {
    pub fn len(&self) -> Tick {
        self.hi - self.lo
    }

    pub fn is_empty(&self) -> bool {
        self.lo == self.hi
    }

    pub fn contains(&self, t: Tick) -> bool {
        self.lo <= t && t <= self.hi
    }
}

/// A point of the set in tick coordinates.
#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize)]
pub struct SetPoint(pub Tick);

/// Binary tree of the intervals `A_k` produced by removing gaps one at a time.
#[derive(Debug, Clone)]
pub struct CantorTree {
    set: OrderedRegularSet,
    vertices: Vec<Vertex>,
    leaves: Vec<usize>,
    by_word: HashMap<Word, usize>,
}

/// Tree after removing the first `k` gaps of the set.
pub fn build_tree(set: &OrderedRegularSet, k: usize) -> Result<CantorTree> {
    if k > set.gaps().len() {
        return Err(Error::InsufficientGaps { needed: k, available: set.gaps().len() });
    }
    let mut vertices = vec![Vertex { lo: 0, hi: set.denominator(), created: 0, word: Word::ROOT, parent: None, children: None }];
    let mut open: BTreeMap<Tick, usize> = BTreeMap::new();
    open.insert(0, 0);
    for (step, gap) in set.gaps()[..k].iter().enumerate() {
        let (_, &idx) = open.range(..=gap.a).next_back().expect("root covers every gap");
        let v = vertices[idx].clone();
        if !(v.lo < gap.a && gap.b < v.hi) {
            return Err(Error::InvalidParameter(format!("gap {step} is not inside a single interval")));
        }
        let left = vertices.len();
        let right = left + 1;
        vertices.push(Vertex { lo: v.lo, hi: gap.a, created: step + 1, word: v.word.child(false), parent: Some(idx), children: None });
        vertices.push(Vertex { lo: gap.b, hi: v.hi, created: step + 1, word: v.word.child(true), parent: Some(idx), children: None });
        vertices[idx].children = Some([left, right]);
        open.remove(&v.lo);
        open.insert(v.lo, left);
        open.insert(gap.b, right);
    }
    let leaves: Vec<usize> = open.values().copied().collect();
    let by_word = vertices.iter().enumerate().map(|(i, v)| (v.word, i)).collect();
    Ok(CantorTree { set: set.clone(), vertices, leaves, by_word })
}

impl CantorTree {
    pub fn set(&self) -> &OrderedRegularSet {
        &self.set
    }

    pub fn vertices(&self) -> &[Vertex] {
        &self.vertices
    }

    pub fn vertex(&self, idx: usize) -> &Vertex {
        &self.vertices[idx]
    }

    /// Leaves from left to right.
    pub fn leaves(&self) -> &[usize] {
        &self.leaves
    }

    pub fn find(&self, word: &Word) -> Option<usize> {
        self.by_word.get(word).copied()
    }

    pub fn depth(&self) -> u32 {
        self.vertices.iter().map(|v| v.word.len()).max().unwrap_or(0)
    }

    pub fn length(&self, idx: usize) -> f64 {
        self.set.to_real(self.vertices[idx].len())
    }

    pub fn interval(&self, idx: usize) -> (f64, f64) {
        let v = &self.vertices[idx];
        (self.set.to_real(v.lo), self.set.to_real(v.hi))
    }

    /// Leaf containing the tick, if any.
    pub fn leaf_of(&self, t: Tick) -> Option<usize> {
        let pos = self.leaves.partition_point(|&i| self.vertices[i].lo <= t);
        let idx = *self.leaves.get(pos.checked_sub(1)?)?;
        self.vertices[idx].contains(t).then_some(idx)
    }

    pub fn point(&self, x: f64) -> Result<SetPoint> {
        let t = self.set.to_ticks(x).ok_or(Error::NotInSet(x))?;
        self.leaf_of(t).map(|_| SetPoint(t)).ok_or(Error::NotInSet(x))
    }

    pub fn to_real(&self, p: SetPoint) -> f64 {
        self.set.to_real(p.0)
    }

    /// Both endpoints of every leaf, from left to right.
    pub fn leaf_endpoints(&self) -> Vec<SetPoint> {
        self.leaves.iter().flat_map(|&i| [SetPoint(self.vertices[i].lo), SetPoint(self.vertices[i].hi)]).collect()
    }

    /// Address of a point: its leaf word with the nearer end as tail.
    pub fn address(&self, p: SetPoint) -> Option<TailWord> {
        let v = &self.vertices[self.leaf_of(p.0)?];
        let tail = if p.0 - v.lo <= v.hi - p.0 { End::Left } else { End::Right };
        Some(TailWord::new(v.word, tail))
    }

    /// Smallest vertex containing both points.
    pub fn common_vertex(&self, x: SetPoint, y: SetPoint) -> usize {
        let mut idx = 0;
        while let Some(children) = self.vertices[idx].children {
            match children.iter().find(|&&c| self.vertices[c].contains(x.0) && self.vertices[c].contains(y.0)) {
                Some(&c) => idx = c,
                None => break,
            }
        }
        idx
    }

    pub fn is_leaf(&self, idx: usize) -> bool {
        self.vertices[idx].children.is_none()
    }

    pub fn dump(&self) -> TreeDump {
        TreeDump {
            vertices: self
                .vertices
                .iter()
                .enumerate()
                .map(|(i, v)| {
                    let (lo, hi) = self.interval(i);
                    VertexDump {
                        word: v.word.to_string(),
                        lo,
                        hi,
                        created: v.created,
                        parent: v.parent.map(|p| self.vertices[p].word.to_string()),
                    }
                })
                .collect(),
        }
    }
}

#[derive(Debug, Clone, Serialize)]
pub struct VertexDump {
    pub word: String,
    pub lo: f64,
    pub hi: f64,
    pub created: usize,
    pub parent: Option<String>,
}

#[derive(Debug, Clone, Serialize)]
pub struct TreeDump {
    pub vertices: Vec<VertexDump>,
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct TreeDistance {
    pub value: f64,
    pub vertex: usize,
    /// Both points lie in one leaf, so the value is the leaf length.
    pub truncation_limited: bool,
}

/// `d_T(x, y)`: length of the smallest vertex containing both points.
pub fn tree_distance(tree: &CantorTree, x: f64, y: f64) -> Result<f64> {
    Ok(tree_distance_detail(tree, tree.point(x)?, tree.point(y)?).value)
}

pub fn tree_distance_detail(tree: &CantorTree, x: SetPoint, y: SetPoint) -> TreeDistance {
    if x == y {
        return TreeDistance { value: 0.0, vertex: tree.leaf_of(x.0).unwrap_or(0), truncation_limited: false };
    }
    let vertex = tree.common_vertex(x, y);
    TreeDistance { value: tree.length(vertex), vertex, truncation_limited: tree.is_leaf(vertex) }
}

fn branch_parts(tree: &CantorTree, idx: usize) -> Option<[Tick; 3]> {
    let [l, r] = tree.vertices[idx].children?;
    let (u, w) = (tree.vertices[l].len(), tree.vertices[r].len());
    Some([u, w, tree.vertices[idx].len() - u - w])
}

/// `max |u|,|w|,|gap| / min` over internal vertices; `None` without internal vertices.
pub fn branch_ratio_check(tree: &CantorTree) -> Option<f64> {
    (0..tree.vertices.len())
        .filter_map(|i| branch_parts(tree, i))
        .map(|parts| {
            let max = *parts.iter().max().unwrap();
            let min = *parts.iter().min().unwrap();
            if min == 0 {
                f64::INFINITY
            } else if max % min == 0 {
                (max / min) as f64
            } else {
                max as f64 / min as f64
            }
        })
        .reduce(f64::max)
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct BilipschitzReport {
    pub pairs: usize,
    /// Largest `|x - y| / d_T`; at most 1.
    pub max_ratio_up: f64,
    /// Largest `d_T / |x - y|`.
    pub max_ratio_down: f64,
    /// `|x - y| ≤ d_T` held for every pair, compared exactly.
    pub dominated: bool,
    pub k_hat: f64,
    /// `2 K_hat + 1`: the children of `v` are separated by at least `|v| / (2K + 1)`.
    pub k_bound: f64,
    pub within_bound: bool,
    /// Pairs inside a single leaf, measured at leaf resolution.
    pub truncation_limited: usize,
}

pub fn bilipschitz_check(tree: &CantorTree, pairs: &[(SetPoint, SetPoint)]) -> Result<BilipschitzReport> {
    if let Some(&(x, _)) = pairs.iter().find(|(x, y)| x == y) {
        return Err(Error::InvalidParameter(format!("pair of equal points at {}", tree.to_real(x))));
    }
    let k_hat = branch_ratio_check(tree).unwrap_or(1.0);
    let k_bound = 2.0 * k_hat + 1.0;
    let id = || (0.0f64, 0.0f64, true, 0usize);
    let (up, down, dominated, limited) = pairs
        .par_iter()
        .fold(id, |(up, down, dom, lim), &(x, y)| {
            let v = tree.common_vertex(x, y);
            let dt = tree.vertices[v].len();
            let d = x.0.abs_diff(y.0);
            let ratio_up = d as f64 / dt as f64;
            let ratio_down = dt as f64 / d as f64;
            (up.max(ratio_up), down.max(ratio_down), dom && d <= dt, lim + tree.is_leaf(v) as usize)
        })
        .reduce(id, |a, b| (a.0.max(b.0), a.1.max(b.1), a.2 && b.2, a.3 + b.3));
    Ok(BilipschitzReport {
        pairs: pairs.len(),
        max_ratio_up: up,
        max_ratio_down: down,
        dominated,
        k_hat,
        k_bound,
        within_bound: down <= k_bound,
        truncation_limited: limited,
    })
}

/// All unordered pairs of distinct points.
pub fn all_pairs(points: &[SetPoint]) -> Vec<(SetPoint, SetPoint)> {
    let mut out = Vec::with_capacity(points.len() * points.len().saturating_sub(1) / 2);
    for (i, &x) in points.iter().enumerate() {
        for &y in &points[i + 1..] {
            if x != y {
                out.push((x, y));
            }
        }
    }
    out
}

/// Pairs of distinct points chosen by `sampling`.
pub fn sample_pairs(points: &[SetPoint], sampling: PairSampling) -> Vec<(SetPoint, SetPoint)> {
    if sampling == PairSampling::Exhaustive {
        return all_pairs(points);
    }
    let mut out = Vec::new();
    sampling.for_each_pair(points.len(), |i, j| {
        if points[i] != points[j] {
            out.push((points[i], points[j]));
        }
    });
    out
}
