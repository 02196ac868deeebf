use clap::{Args, Subcommand, ValueEnum};
use hilbert_lab::tree::{
    bilipschitz_check, branch_ratio_check, build_tree, embed_greedy, embed_ordered, embed_standard, extend_linear,
    reorder_flips, sample_pairs, tree_distance_detail, CantorTree, LevelSchedule, OrderedEmbedding, OrderedRegularSet,
    PairSampling,
};
use hilbert_lab::Result;
use serde::Serialize;
use serde_json::Value;

use crate::output::{Cell, Report};

#[derive(Args, Serialize, Clone, Copy)]
pub struct TreeArgs {
    /// Ratio of the standard set C_p.
    #[arg(long, default_value_t = 3.0)]
    pub p: f64,
    /// Generations of gaps in the set.
    #[arg(long, default_value_t = 6)]
    pub depth: u32,
    /// Gaps removed to build the tree; defaults to all of them.
    #[arg(long)]
    pub gaps: Option<usize>,
}

impl TreeArgs {
    fn tree(&self) -> Result<CantorTree> {
        let set = OrderedRegularSet::standard(self.p, self.depth)?;
        let k = self.gaps.unwrap_or(set.gaps().len());
        build_tree(&set, k)
    }
}

#[derive(Args, Serialize, Clone, Copy)]
pub struct SamplingArgs {
    /// Random pairs to sample; 0 checks every pair.
    #[arg(long, default_value_t = 0)]
    pub pairs: usize,
    #[arg(long, default_value_t = 0)]
    pub seed: u64,
}

impl SamplingArgs {
    fn sampling(&self) -> PairSampling {
        if self.pairs == 0 {
            PairSampling::Exhaustive
        } else {
            PairSampling::Random { count: self.pairs, seed: self.seed }
        }
    }
}

#[derive(ValueEnum, Clone, Copy, Serialize)]
#[serde(rename_all = "lowercase")]
pub enum Method {
    /// Digit blocks with the windowed level schedule.
    Window,
    /// Digit blocks on levels ⌈n·c⌉.
    Ceiling,
    /// Size-matched descent.
    Greedy,
    /// Induced by the identity base map.
    Identity,
    /// Induced by the base map x ↦ 1 - x.
    Reverse,
}

#[derive(Args, Serialize, Clone, Copy)]
pub struct EmbedArgs {
    #[arg(long, default_value_t = 5.0)]
    pub p_src: f64,
    #[arg(long, default_value_t = 3.0)]
    pub p_tgt: f64,
    /// Generations of the source set.
    #[arg(long, default_value_t = 8)]
    pub depth: u32,
    #[arg(long, value_enum, default_value_t = Method::Window)]
    pub method: Method,
    /// Target resolution for base-map methods; defaults to `depth`.
    #[arg(long)]
    pub target_depth: Option<u32>,
    /// Apply branch flips until the embedding preserves order.
    #[arg(long)]
    pub reorder: bool,
}

impl EmbedArgs {
    fn embedding(&self, report: &mut Report) -> Result<OrderedEmbedding> {
        let source_tree = || -> Result<CantorTree> {
            let set = OrderedRegularSet::standard(self.p_src, self.depth)?;
            build_tree(&set, set.gaps().len())
        };
        let target_depth = self.target_depth.unwrap_or(self.depth);
        let emb = match self.method {
            Method::Window => embed_standard(self.p_src, self.p_tgt, self.depth, LevelSchedule::Window)?,
            Method::Ceiling => embed_standard(self.p_src, self.p_tgt, self.depth, LevelSchedule::Ceiling)?,
            Method::Greedy => embed_greedy(&source_tree()?, self.p_tgt)?,
            Method::Identity => embed_ordered(&source_tree()?, self.p_tgt, target_depth, Ok)?,
            Method::Reverse => embed_ordered(&source_tree()?, self.p_tgt, target_depth, |x| Ok(1.0 - x))?,
        };
        report.set("order_preserved_before_flips", emb.order_preserved);
        if !self.reorder {
            return Ok(emb);
        }
        let (fixed, flips) = reorder_flips(&emb);
        report.set("flips", flips);
        Ok(fixed)
    }
}

#[derive(Subcommand, Serialize)]
#[serde(rename_all = "snake_case", tag = "op")]
pub enum TreeCommand {
    /// Vertices of the interval tree.
    Build {
        #[command(flatten)]
        tree: TreeArgs,
    },
    /// Tree distance between two points of the set.
    Dist {
        #[command(flatten)]
        tree: TreeArgs,
        #[arg(long)]
        x: f64,
        #[arg(long)]
        y: f64,
    },
    /// Domination |x - y| ≤ d_T and branch ratio over leaf endpoints.
    Check {
        #[command(flatten)]
        tree: TreeArgs,
        #[command(flatten)]
        sampling: SamplingArgs,
    },
    /// Embedding of C_{p_src} into C_{p_tgt} as vertex-word pairs.
    Embed {
        #[command(flatten)]
        embed: EmbedArgs,
        #[command(flatten)]
        sampling: SamplingArgs,
    },
    /// Piecewise linear extension of an embedding to [0, 1].
    Extend {
        #[command(flatten)]
        embed: EmbedArgs,
        /// Grid points; 0 gives an empty table.
        #[arg(long, default_value_t = 1025)]
        count: usize,
    },
}

pub fn run(cmd: &TreeCommand, config: Value) -> Result<Report> {
    match cmd {
        TreeCommand::Build { tree } => {
            let t = tree.tree()?;
            let mut r = Report::new("tree build", config, &["word", "lo", "hi", "created", "parent"]);
            for v in t.dump().vertices {
                r.row(vec![v.word.into(), v.lo.into(), v.hi.into(), v.created.into(), v.parent.map_or(Cell::Empty, Cell::S)]);
            }
            r.set("vertices", t.vertices().len());
            r.set("leaves", t.leaves().len());
            r.set("depth", t.depth());
            Ok(r)
        }
        TreeCommand::Dist { tree, x, y } => {
            let t = tree.tree()?;
            let d = tree_distance_detail(&t, t.point(*x)?, t.point(*y)?);
            let mut r = Report::new("tree dist", config, &["x", "y", "d_t", "vertex", "truncation_limited"]);
            let word = t.vertex(d.vertex).word.to_string();
            r.row(vec![(*x).into(), (*y).into(), d.value.into(), word.into(), d.truncation_limited.into()]);
            Ok(r)
        }
        TreeCommand::Check { tree, sampling } => {
            let t = tree.tree()?;
            let pairs = sample_pairs(&t.leaf_endpoints(), sampling.sampling());
            let b = bilipschitz_check(&t, &pairs)?;
            let k = branch_ratio_check(&t);
            let mut r = Report::new(
                "tree check",
                config,
                &[
                    "pairs",
                    "dominated",
                    "max_ratio_up",
                    "max_ratio_down",
                    "k_hat",
                    "k_bound",
                    "within_bound",
                    "truncation_limited",
                    "branch_ratio",
                ],
            );
            r.row(vec![
                b.pairs.into(),
                b.dominated.into(),
                b.max_ratio_up.into(),
                b.max_ratio_down.into(),
                b.k_hat.into(),
                b.k_bound.into(),
                b.within_bound.into(),
                b.truncation_limited.into(),
                k.into(),
            ]);
            Ok(r)
        }
        TreeCommand::Embed { embed, sampling } => {
            let mut r = Report::new("tree embed", config, &["source", "target"]);
            let emb = embed.embedding(&mut r)?;
            for v in &emb.vertices {
                r.row(vec![v.source.to_string().into(), v.target.to_string().into()]);
            }
            r.set("order_preserved", emb.order_preserved);
            r.set("distortion", emb.distortion(sampling.sampling()));
            r.set("points", emb.points.len());
            Ok(r)
        }
        TreeCommand::Extend { embed, count } => {
            let mut r = Report::new("tree extend", config, &["x", "f"]);
            let emb = embed.embedding(&mut r)?;
            let knots = emb.knots();
            let gaps: Vec<(f64, f64)> = knots[1..knots.len() - 1].chunks(2).map(|c| (c[0].0, c[1].0)).collect();
            let ext = extend_linear(&knots, &gaps)?;
            for i in 0..*count {
                let x = if *count == 1 { 0.0 } else { i as f64 / (*count - 1) as f64 };
                r.row(vec![x.into(), ext.eval(x)?.into()]);
            }
            let (lo, hi) = ext.slope_range();
            r.set("slope_min", lo);
            r.set("slope_max", hi);
            r.set("knots", ext.knots().len());
            Ok(r)
        }
    }
}
