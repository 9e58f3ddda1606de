//! Group engines and the shared handle type.
//!
//! An engine owns an ordered generating alphabet and a computable canonical
//! form on run-encoded words. Everything else in the crate talks to groups
//! through [`GroupHandle`], which adds parsing, canonical keys, equality and
//! word arithmetic on top of the engine, plus optional hooks: exact subgroup
//! membership rules, exact coset-graph neighbor rules, and pinch-free
//! (stable-letter reduced) forms for HNN-backed groups.

use std::sync::Arc;

use crate::error::Result;
use crate::subgroup::{MembershipFn, SubgroupSpec};
use crate::words::{
    runs_concat, runs_inverse, runs_to_word, word_to_runs, Alphabet, Runs, Word,
};

/// A stable-letter reduced form of a word in an HNN-style group: no subword
/// `t^-1 a t` with `a` in the associated subgroup (nor `t b t^-1` with `b` in
/// its image) remains, and the base-letter sections are base-canonical.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct BrittonForm {
    pub word: Runs,
    /// Number of stable-letter occurrences in the reduced form.
    pub t_length: u32,
}

/// Neighbor rule for a coset graph with exact coset identification; engines
/// register these for (group, subgroup) pairs they understand. See
/// [`crate::graph`] for how rules are consumed.
pub trait CosetRule: Send + Sync {
    /// Canonical identifier of the coset `rep·H`, total on group elements.
    fn coset_id(&self, rep: &Runs) -> String;
    /// Candidate suffixes `h·s` (h in the subgroup, s one signed letter);
    /// appending each to a coset representative reaches every neighboring
    /// coset of `rep·H` at least once.
    fn steps(&self, rep: &Runs) -> Vec<Runs>;
}

pub trait GroupEngine: Send + Sync {
    fn alphabet(&self) -> &Alphabet;
    /// The catalog spec string this engine was built from, e.g. `bs:1,2`.
    fn spec(&self) -> &str;
    /// Canonical form on run-encoded words. Two words represent the same
    /// element iff their canonical runs are identical.
    fn nf(&self, r: &Runs) -> Runs;
    /// Defining relations as (left, right) word pairs; empty for free groups.
    fn relations(&self) -> Vec<(Word, Word)>;
    /// Exact membership rule for a subgroup spec this engine understands.
    fn subgroup_rule(&self, spec: &SubgroupSpec) -> Option<Box<MembershipFn>> {
        let _ = spec;
        None
    }
    /// Exact coset-graph neighbor rule for a subgroup spec.
    fn coset_rule(&self, spec: &SubgroupSpec) -> Option<Box<dyn CosetRule>> {
        let _ = spec;
        None
    }
    /// Stable-letter reduced form, for HNN-backed engines.
    fn britton(&self, r: &Runs) -> Option<BrittonForm> {
        let _ = r;
        None
    }
    /// Generator indexes of the distinguished base subgroup, when the group is
    /// an HNN-style extension over one.
    fn base_generator_indexes(&self) -> Option<Vec<usize>> {
        None
    }
    /// For groups that are quotients of Z^m: the generator count and relation
    /// rows, enabling exact invariant-factor computations.
    fn abelian_presentation(&self) -> Option<(usize, Vec<Vec<num_bigint::BigInt>>)> {
        None
    }
}

/// Shared, cloneable handle to a group engine.
#[derive(Clone)]
pub struct GroupHandle {
    engine: Arc<dyn GroupEngine>,
}

impl GroupHandle {
    pub fn from_engine(engine: Arc<dyn GroupEngine>) -> Self {
        GroupHandle { engine }
    }

    pub fn alphabet(&self) -> &Alphabet {
        self.engine.alphabet()
    }

    pub fn spec(&self) -> &str {
        self.engine.spec()
    }

    /// Two handles describe the same catalog group.
    pub fn same_group(&self, other: &GroupHandle) -> bool {
        self.spec() == other.spec()
    }

    pub fn parse(&self, text: &str) -> Result<Word> {
        self.alphabet().parse_word(text)
    }

    pub fn parse_runs(&self, text: &str) -> Result<Runs> {
        self.alphabet().parse_runs(text)
    }

    /// Canonical form on runs.
    pub fn nf(&self, r: &Runs) -> Runs {
        self.engine.nf(r)
    }

    /// Canonical form on flat words.
    pub fn normal_form(&self, w: &Word) -> Word {
        runs_to_word(&self.nf(&word_to_runs(w)))
    }

    /// Canonical key: rendered canonical runs. Equal keys iff equal elements.
    pub fn key(&self, r: &Runs) -> String {
        self.alphabet().runs_text(&self.nf(r))
    }

    pub fn key_of_word(&self, w: &Word) -> String {
        self.key(&word_to_runs(w))
    }

    pub fn equal(&self, u: &Word, v: &Word) -> bool {
        self.nf(&word_to_runs(u)) == self.nf(&word_to_runs(v))
    }

    pub fn equal_runs(&self, u: &Runs, v: &Runs) -> bool {
        self.nf(u) == self.nf(v)
    }

    pub fn is_identity(&self, r: &Runs) -> bool {
        self.nf(r).is_empty()
    }

    /// Canonical form of the product.
    pub fn mul(&self, a: &Runs, b: &Runs) -> Runs {
        self.nf(&runs_concat(a, b))
    }

    /// Canonical form of `a^e` by binary exponentiation.
    pub fn pow(&self, a: &Runs, e: i128) -> Runs {
        if e == 0 {
            return Vec::new();
        }
        let mut base = if e < 0 {
            self.nf(&runs_inverse(a))
        } else {
            self.nf(a)
        };
        let mut exp = e.unsigned_abs();
        let mut acc: Runs = Vec::new();
        while exp > 0 {
            if exp & 1 == 1 {
                acc = self.mul(&acc, &base);
            }
            exp >>= 1;
            if exp > 0 {
                base = self.mul(&base, &base);
            }
        }
        acc
    }

    pub fn relations(&self) -> Vec<(Word, Word)> {
        self.engine.relations()
    }

    pub fn subgroup_rule(&self, spec: &SubgroupSpec) -> Option<Box<MembershipFn>> {
        self.engine.subgroup_rule(spec)
    }

    pub fn coset_rule(&self, spec: &SubgroupSpec) -> Option<Box<dyn CosetRule>> {
        self.engine.coset_rule(spec)
    }

    /// Stable-letter reduced form; `None` for engines without a stable letter.
    pub fn britton(&self, r: &Runs) -> Option<BrittonForm> {
        self.engine.britton(r)
    }

    /// Generator indexes of the distinguished base subgroup, if any.
    pub fn base_generator_indexes(&self) -> Option<Vec<usize>> {
        self.engine.base_generator_indexes()
    }

    /// Abelianized presentation (generator count, relation rows), when exact.
    pub fn abelian_presentation(&self) -> Option<(usize, Vec<Vec<num_bigint::BigInt>>)> {
        self.engine.abelian_presentation()
    }
}

impl std::fmt::Debug for GroupHandle {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        write!(f, "GroupHandle({})", self.spec())
    }
}
