//! Interval trees over ordered Cantor sets, tree metrics and
//! order-preserving embeddings between standard Cantor sets.

mod cantor_tree;
mod embed;
mod extend;
mod set;
mod word;

pub use cantor_tree::{
    all_pairs, bilipschitz_check, branch_ratio_check, build_tree, sample_pairs, tree_distance, tree_distance_detail,
    BilipschitzReport, CantorTree, SetPoint, TreeDistance, TreeDump, Vertex, VertexDump,
};
pub use embed::{
    embed_greedy, embed_ordered, embed_standard, reorder_flips, standard_address, standard_point, Distortion,
    FlipReport, LevelSchedule, OrderedEmbedding, PairSampling, PointImage, VertexImage,
};
pub use extend::{extend_linear, LinearExtension};
pub use set::{OrderedRegularSet, Tick, TickGap};
pub use word::{End, TailWord, Word, MAX_WORD_LEN};
