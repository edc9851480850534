//! Exact construction of units in integral group rings of finite groups, with
//! bounded certification of the free-product and Hydra structure they generate.
//!
//! The pipeline: build a [`group::GroupTable`], scan it for witnesses `(a, b)`
//! with `⟨a⟩` non-normal and `b ∉ N_G(⟨a⟩)`, form `w = 1 + (a−1)bâ` and
//! `u_k = a^k + (a−1)bâ`, then compare the predicted order of `u_k` with a
//! power-iteration oracle and search bounded word sets for relations.

pub mod error;
pub mod free;
pub mod group;
pub mod poly;
pub mod report;
pub mod ring;
pub mod units;

pub use error::{GroupError, PolyError, ReportError, RingError, UnitError};
pub use free::{
    certify_freeness, certify_hydra, certify_normal_generation, enumerate_words, FreenessReport,
    HydraReport, LetterOrder, WordSpec,
};
pub use group::{find_witnesses, GroupSpec, GroupTable, Permutation, Witness};
pub use poly::Poly;
pub use report::{scan, ClassificationRecord, RunConfig, ScanReport};
pub use ring::{CoeffRing, GroupRing, RingElement};
pub use units::{
    classify_order, make_family, order_oracle, OracleVerdict, OrderClassification, PredictedOrder,
    UnitFamily,
};
