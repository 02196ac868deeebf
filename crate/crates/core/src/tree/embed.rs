use std::collections::HashMap;

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde::{Deserialize, Serialize};

use super::cantor_tree::CantorTree;
use super::word::{End, TailWord, Word, MAX_WORD_LEN};
use crate::error::{Error, Result};

/// Distance below which an image counts as an endpoint of a target vertex.
const ADDRESS_TOL: f64 = 1e-13;

/// Target level assigned to a source vertex of `embed_standard`.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize, Default)]
#[serde(rename_all = "snake_case")]
pub enum LevelSchedule {
    /// Depth-`n` digits land on level `⌈c⌉ + ⌈(n-1)c⌉` with `c = log p_src / log p_tgt`;
    /// the root sits one level down and the right child of the root one
    /// level deeper than the left, so `m - n·c` sweeps its whole window
    /// `[⌈c⌉ - c, ⌈c⌉ - c + 1]` already at depth one.
    #[default]
    Window,
    /// Depth-`n` digits land on level `⌈n·c⌉`.
    Ceiling,
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct VertexImage {
    pub source: Word,
    pub target: Word,
}

/// A leaf endpoint of the source tree and its image address.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct PointImage {
    pub x: f64,
    pub source: TailWord,
    pub target: TailWord,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case", tag = "kind")]
pub enum PairSampling {
    Exhaustive,
    Random { count: usize, seed: u64 },
}

impl PairSampling {
    /// Exhaustive up to 1024 points, otherwise `count` seeded random pairs.
    pub fn auto(points: usize, count: usize, seed: u64) -> Self {
        if points <= 1024 {
            PairSampling::Exhaustive
        } else {
            PairSampling::Random { count, seed }
        }
    }

    /// Index pairs `i < j` below `n`; random pairs are drawn with replacement.
    pub fn for_each_pair(self, n: usize, mut f: impl FnMut(usize, usize)) {
        match self {
            PairSampling::Exhaustive => {
                for i in 0..n {
                    for j in i + 1..n {
                        f(i, j);
                    }
                }
            }
            PairSampling::Random { count, seed } => {
                let mut rng = ChaCha8Rng::seed_from_u64(seed);
                if n >= 2 {
                    for _ in 0..count {
                        let i = rng.gen_range(0..n);
                        let j = rng.gen_range(0..n - 1);
                        let j = if j >= i { j + 1 } else { j };
                        f(i.min(j), i.max(j));
                    }
                }
            }
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct Distortion {
    pub pairs: usize,
    /// Largest `d_T(f x, f y) / d_T(x, y)`.
    pub max_up: f64,
    /// Largest `d_T(x, y) / d_T(f x, f y)`.
    pub max_down: f64,
    /// `max_up · max_down`.
    pub distortion: f64,
    /// Pairs sharing a source leaf.
    pub truncation_limited: usize,
}

/// Vertex map from a source tree into a standard target tree `C_p`, with the
/// induced map on leaf endpoints.
#[derive(Debug, Clone, Serialize)]
pub struct OrderedEmbedding {
    pub target_p: f64,
    pub vertices: Vec<VertexImage>,
    pub points: Vec<PointImage>,
    pub flips: Vec<Word>,
    pub order_preserved: bool,
    #[serde(skip)]
    source_lengths: HashMap<Word, f64>,
    #[serde(skip)]
    children: HashMap<Word, [Word; 2]>,
    #[serde(skip)]
    index: HashMap<Word, usize>,
}

/// Source side of an embedding: vertices with lengths, leaves in order.
struct Source {
    /// Vertices in creation order: word, interval, children.
    vertices: Vec<(Word, f64, f64, Option<[Word; 2]>)>,
    leaves: Vec<Word>,
}

impl Source {
    fn standard(p: f64, depth: u32) -> Self {
        let mut vertices = Vec::with_capacity((2usize << depth) - 1);
        let mut level = vec![(Word::ROOT, 0.0f64, 1.0f64)];
        for n in 0..=depth {
            let mut next = Vec::with_capacity(level.len() * 2);
            for &(w, lo, len) in &level {
                let kids = (n < depth).then(|| [w.child(false), w.child(true)]);
                vertices.push((w, lo, lo + len, kids));
                if n < depth {
                    let part = len / p;
                    next.push((w.child(false), lo, part));
                    next.push((w.child(true), lo + len - part, part));
                }
            }
            if n == depth {
                break;
            }
            level = next;
        }
        let leaves = level.iter().map(|l| l.0).collect();
        Source { vertices, leaves }
    }

    fn from_tree(tree: &CantorTree) -> Self {
        let vertices = (0..tree.vertices().len())
            .map(|i| {
                let v = tree.vertex(i);
                let (lo, hi) = tree.interval(i);
                (v.word, lo, hi, v.children.map(|[l, r]| [tree.vertex(l).word, tree.vertex(r).word]))
            })
            .collect();
        let leaves = tree.leaves().iter().map(|&i| tree.vertex(i).word).collect();
        Source { vertices, leaves }
    }

    fn interval(&self) -> HashMap<Word, (f64, f64)> {
        self.vertices.iter().map(|&(w, lo, hi, _)| (w, (lo, hi))).collect()
    }
}

fn ceil_snapped(x: f64) -> i64 {
    let r = x.round();
    if (x - r).abs() < 1e-9 {
        r as i64
    } else {
        x.ceil() as i64
    }
}

/// Order-preserving embedding of the standard set `C_{p_src}` into `C_{p_tgt}`,
/// built level by level on binary addresses up to `depth`.
pub fn embed_standard(p_src: f64, p_tgt: f64, depth: u32, schedule: LevelSchedule) -> Result<OrderedEmbedding> {
    for p in [p_src, p_tgt] {
        if !(p > 2.0 && p.is_finite()) {
            return Err(Error::InvalidParameter(format!("ratio {p} must exceed 2")));
        }
    }
    let s = std::f64::consts::LN_2 / p_src.ln();
    let t = std::f64::consts::LN_2 / p_tgt.ln();
    if s >= t {
        return Err(Error::ExponentOrder { source_dim: s, target_dim: t });
    }
    let c = p_src.ln() / p_tgt.ln();
    let level = |w: &Word| -> i64 {
        let n = w.len() as i64;
        match schedule {
            LevelSchedule::Ceiling => ceil_snapped(n as f64 * c),
            LevelSchedule::Window => {
                let cc = ceil_snapped(c);
                match n {
                    0 => (cc as f64 > c + 1e-9) as i64,
                    1 => cc + w.digit(0) as i64,
                    _ => cc + ceil_snapped((n - 1) as f64 * c),
                }
            }
        }
    };
    let deepest = level(&Word::ROOT.extend(true, depth));
    if deepest >= MAX_WORD_LEN as i64 {
        return Err(Error::InvalidParameter(format!("depth {depth} needs {deepest} target levels")));
    }
    let source = Source::standard(p_src, depth);
    let mut images: HashMap<Word, Word> = HashMap::new();
    images.insert(Word::ROOT, Word::ROOT.extend(false, level(&Word::ROOT) as u32));
    for &(w, _, _, kids) in &source.vertices {
        let Some(kids) = kids else { continue };
        let tw = images[&w];
        for (d, k) in kids.into_iter().enumerate() {
            let jump = level(&k) - tw.len() as i64;
            debug_assert!(jump >= 1);
            images.insert(k, tw.child(d == 1).extend(false, jump as u32 - 1));
        }
    }
    Ok(assemble(&source, images, p_tgt))
}

/// Size-matched embedding of a tree over a general set into `C_{p_tgt}`:
/// each child goes to the first level of the matching branch whose length
/// does not exceed the child's length, descending leftmost in between.
pub fn embed_greedy(src: &CantorTree, p_tgt: f64) -> Result<OrderedEmbedding> {
    if !(p_tgt > 2.0 && p_tgt.is_finite()) {
        return Err(Error::InvalidParameter(format!("ratio {p_tgt} must exceed 2")));
    }
    let source = Source::from_tree(src);
    let lengths: HashMap<Word, f64> = source.vertices.iter().map(|&(w, lo, hi, _)| (w, hi - lo)).collect();
    let mut images: HashMap<Word, Word> = HashMap::new();
    images.insert(Word::ROOT, Word::ROOT);
    for &(w, _, _, kids) in &source.vertices {
        let Some(kids) = kids else { continue };
        let tw = images[&w];
        for (d, k) in kids.into_iter().enumerate() {
            let want = (-lengths[&k].ln() / p_tgt.ln() - 1e-12).ceil().max(0.0) as u32;
            let level = want.max(tw.len() + 1);
            if level >= MAX_WORD_LEN {
                return Err(Error::InvalidParameter("source tree too deep for the target".into()));
            }
            images.insert(k, tw.child(d == 1).extend(false, level - tw.len() - 1));
        }
    }
    Ok(assemble(&source, images, p_tgt))
}

fn assemble(source: &Source, images: HashMap<Word, Word>, p_tgt: f64) -> OrderedEmbedding {
    let intervals = source.interval();
    let mut points = Vec::with_capacity(2 * source.leaves.len());
    for &leaf in &source.leaves {
        let (lo, hi) = intervals[&leaf];
        let tw = images[&leaf];
        points.push(PointImage { x: lo, source: TailWord::new(leaf, End::Left), target: TailWord::new(tw, End::Left) });
        points.push(PointImage { x: hi, source: TailWord::new(leaf, End::Right), target: TailWord::new(tw, End::Right) });
    }
    let vertices = source.vertices.iter().map(|&(w, ..)| VertexImage { source: w, target: images[&w] }).collect();
    finish(source, vertices, points, p_tgt)
}

fn finish(source: &Source, vertices: Vec<VertexImage>, points: Vec<PointImage>, p_tgt: f64) -> OrderedEmbedding {
    let mut e = OrderedEmbedding {
        target_p: p_tgt,
        vertices,
        points,
        flips: Vec::new(),
        order_preserved: false,
        source_lengths: source.vertices.iter().map(|&(w, lo, hi, _)| (w, hi - lo)).collect(),
        children: source.vertices.iter().filter_map(|&(w, _, _, k)| Some((w, k?))).collect(),
        index: HashMap::new(),
    };
    e.index = e.vertices.iter().enumerate().map(|(i, v)| (v.source, i)).collect();
    e.order_preserved = e.check_order();
    e
}

/// Address of `y` in the standard tree `C_p` down to level `depth`.
pub fn standard_address(p: f64, depth: u32, y: f64) -> Result<TailWord> {
    if !(-ADDRESS_TOL..=1.0 + ADDRESS_TOL).contains(&y) {
        return Err(Error::NotInSet(y));
    }
    let (mut lo, mut len, mut word) = (0.0f64, 1.0f64, Word::ROOT);
    for _ in 0..depth.min(MAX_WORD_LEN - 1) {
        if (y - lo).abs() <= ADDRESS_TOL {
            return Ok(TailWord::new(word, End::Left));
        }
        if (y - lo - len).abs() <= ADDRESS_TOL {
            return Ok(TailWord::new(word, End::Right));
        }
        let part = len / p;
        if y <= lo + part + ADDRESS_TOL {
            word = word.child(false);
        } else if y >= lo + len - part - ADDRESS_TOL {
            word = word.child(true);
            lo += len - part;
        } else {
            return Err(Error::NotInSet(y));
        }
        len = part;
    }
    let tail = if y - lo <= lo + len - y { End::Left } else { End::Right };
    Ok(TailWord::new(word, tail))
}

/// Real coordinate of an address in `C_p`.
pub fn standard_point(p: f64, a: &TailWord) -> f64 {
    let (mut lo, mut len) = (0.0f64, 1.0f64);
    for d in a.word.digits() {
        let part = len / p;
        if d {
            lo += len - part;
        }
        len = part;
    }
    if a.tail == End::Right {
        lo + len
    } else {
        lo
    }
}

/// Tree map induced by `base_map`: each source vertex goes to the smallest
/// vertex of `C_{p_tgt}` (down to `target_depth`) containing the images of
/// its endpoints.
pub fn embed_ordered<F>(src: &CantorTree, p_tgt: f64, target_depth: u32, base_map: F) -> Result<OrderedEmbedding>
where
    F: Fn(f64) -> Result<f64>,
{
    if !(p_tgt > 2.0 && p_tgt.is_finite()) {
        return Err(Error::InvalidParameter(format!("ratio {p_tgt} must exceed 2")));
    }
    let source = Source::from_tree(src);
    let intervals = source.interval();
    let mut cache: HashMap<u64, (f64, TailWord)> = HashMap::new();
    let mut image = |x: f64| -> Result<(f64, TailWord)> {
        if let Some(&hit) = cache.get(&x.to_bits()) {
            return Ok(hit);
        }
        let y = base_map(x)?;
        let out = (y, standard_address(p_tgt, target_depth, y)?);
        cache.insert(x.to_bits(), out);
        Ok(out)
    };
    let mut points = Vec::with_capacity(2 * source.leaves.len());
    for &leaf in &source.leaves {
        let (lo, hi) = intervals[&leaf];
        for (x, end) in [(lo, End::Left), (hi, End::Right)] {
            let (_, target) = image(x)?;
            points.push(PointImage { x, source: TailWord::new(leaf, end), target });
        }
    }
    let mut sorted: Vec<(f64, f64)> = Vec::with_capacity(points.len());
    for p in &points {
        sorted.push((image(p.x)?.0, p.x));
    }
    sorted.sort_by(|a, b| a.0.total_cmp(&b.0));
    if let Some(w) = sorted.windows(2).find(|w| w[0].0 == w[1].0 && w[0].1 != w[1].1) {
        return Err(Error::BaseMapNotInjective(w[0].1, w[1].1));
    }
    let mut vertices = Vec::with_capacity(source.vertices.len());
    for &(w, lo, hi, _) in &source.vertices {
        let a = image(lo)?.1;
        let b = image(hi)?.1;
        let k = a.lcp(&b).min(target_depth);
        vertices.push(VertexImage { source: w, target: a.materialize(k).word.prefix(k) });
    }
    Ok(finish(&source, vertices, points, p_tgt))
}

fn flip_word(w: &Word, at: &Word) -> Word {
    if at.is_prefix_of(w) && w.len() > at.len() {
        w.toggle(at.len())
    } else {
        *w
    }
}

fn flip_point(a: &TailWord, at: &Word) -> TailWord {
    let full = a.materialize(at.len() + 1);
    if at.is_prefix_of(&full.word) {
        TailWord::new(full.word.toggle(at.len()), a.tail)
    } else {
        *a
    }
}

impl OrderedEmbedding {
    pub fn target_length(&self, level: u32) -> f64 {
        self.target_p.powi(-(level as i32))
    }

    pub fn image(&self, source: &Word) -> Option<Word> {
        self.index.get(source).map(|&i| self.vertices[i].target)
    }

    /// Images of distinct source leaves appear in source order. Both
    /// endpoints of one leaf are within truncation resolution of each other
    /// and are not compared.
    fn check_order(&self) -> bool {
        let groups: Vec<(TailWord, TailWord)> = self
            .points
            .chunk_by(|a, b| a.source.word == b.source.word)
            .map(|g| {
                let lo = g.iter().map(|p| p.target).min().unwrap();
                let hi = g.iter().map(|p| p.target).max().unwrap();
                (lo, hi)
            })
            .collect();
        groups.windows(2).all(|w| w[0].1 < w[1].0)
    }

    /// Swap the two subtrees below target vertex `at`.
    pub fn apply_flip(&mut self, at: Word) {
        for v in &mut self.vertices {
            v.target = flip_word(&v.target, &at);
        }
        for p in &mut self.points {
            p.target = flip_point(&p.target, &at);
        }
        self.flips.push(at);
        self.order_preserved = self.check_order();
    }

    /// Image of a leaf endpoint as a real number in the target set.
    pub fn map_real(&self, x: f64) -> Result<f64> {
        let i = self.points.partition_point(|p| p.x < x - ADDRESS_TOL);
        match self.points.get(i) {
            Some(p) if (p.x - x).abs() <= ADDRESS_TOL => Ok(standard_point(self.target_p, &p.target)),
            _ => Err(Error::NotInSet(x)),
        }
    }

    /// `(x, f(x))` at every leaf endpoint, in source order.
    pub fn knots(&self) -> Vec<(f64, f64)> {
        self.points.iter().map(|p| (p.x, standard_point(self.target_p, &p.target))).collect()
    }

    fn source_distance(&self, a: &TailWord, b: &TailWord) -> (f64, bool) {
        let k = a.lcp(b);
        let longer = if a.word.len() >= b.word.len() { a } else { b };
        let common = longer.materialize(k).word.prefix(k);
        match self.source_lengths.get(&common) {
            Some(&len) => (len, common == a.word || common == b.word),
            None => (f64::NAN, true),
        }
    }

    /// Ratios of tree distances over pairs of leaf endpoints.
    pub fn distortion(&self, sampling: PairSampling) -> Distortion {
        let n = self.points.len();
        let mut acc = Distortion { pairs: 0, max_up: 0.0, max_down: 0.0, distortion: 0.0, truncation_limited: 0 };
        let mut visit = |i: usize, j: usize| {
            let (a, b) = (&self.points[i], &self.points[j]);
            let (ds, limited) = self.source_distance(&a.source, &b.source);
            let k = a.target.lcp(&b.target);
            let dt = if k >= MAX_WORD_LEN { 0.0 } else { self.target_length(k) };
            acc.pairs += 1;
            acc.truncation_limited += limited as usize;
            acc.max_up = acc.max_up.max(dt / ds);
            acc.max_down = acc.max_down.max(ds / dt);
        };
        sampling.for_each_pair(n, &mut visit);
        acc.distortion = acc.max_up * acc.max_down;
        acc
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct FlipReport {
    pub flips: usize,
    /// Target tree distances among sampled images, compared before and after each flip.
    pub isometry_pairs: usize,
    pub isometry_preserved: bool,
}

/// Cap on the images used for the isometry check of each flip.
const ISOMETRY_SAMPLE: usize = 256;

/// Flip target branches, shortest source words first, until every left
/// child maps to the left of its sibling.
pub fn reorder_flips(embedding: &OrderedEmbedding) -> (OrderedEmbedding, FlipReport) {
    let mut out = embedding.clone();
    let stride = out.points.len().div_ceil(ISOMETRY_SAMPLE).max(1);
    let mut order: Vec<Word> = out.children.keys().copied().collect();
    order.sort_by_key(|w| (w.len(), w.to_string()));
    let mut report = FlipReport { flips: 0, isometry_pairs: 0, isometry_preserved: true };
    for v in order {
        let [l, r] = out.children[&v];
        let (Some(tl), Some(tr)) = (out.image(&l), out.image(&r)) else { continue };
        let k = tl.lcp(&tr);
        if k >= tl.len().min(tr.len()) || !tl.digit(k) {
            continue;
        }
        let at = tl.prefix(k);
        let sample: Vec<TailWord> = out.points.iter().step_by(stride).map(|p| p.target).collect();
        out.apply_flip(at);
        let after: Vec<TailWord> = sample.iter().map(|p| flip_point(p, &at)).collect();
        for i in 0..sample.len() {
            for j in i + 1..sample.len() {
                report.isometry_pairs += 1;
                if sample[i].lcp(&sample[j]) != after[i].lcp(&after[j]) {
                    report.isometry_preserved = false;
                }
            }
        }
        report.flips += 1;
    }
    out.order_preserved = out.check_order();
    (out, report)
}
