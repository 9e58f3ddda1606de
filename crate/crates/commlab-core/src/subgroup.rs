//! Subgroup handles: spec parsing, membership, and derived subgroups.
//!
//! A subgroup is described by a small spec DSL and bound to an ambient group.
//! Membership is answered three-valued: engines supply exact rules where the
//! pair (group, spec) is understood; coset tables give exact answers for
//! finite-index subgroups of free groups; everything else falls back to a
//! budgeted closure enumeration that answers `Yes`, a certain `No` (when the
//! closure is finite and fully enumerated), or `Unknown` carrying the budget.
//!
//! Spec syntax: `cyclic-span:WORD`, `abelian-span:W1;W2;...`, `gens:W1;...`,
//! `base`, `whole`, `trivial`, `table` (the group's embedded coset table), or
//! `table:PATH` (coset table file).

use std::collections::HashSet;
use std::fmt;
use std::sync::Arc;

use serde::Serialize;

use crate::catalog::hom::HomHandle;
use crate::catalog::table::CosetTable;
use crate::error::{CommError, Result};
use crate::group::GroupHandle;
use crate::words::{runs_inverse, word_to_runs, Runs, Word};

/// Three-valued membership verdict.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
#[serde(rename_all = "camelCase", tag = "verdict")]
pub enum Membership {
    Yes,
    No,
    #[serde(rename_all = "camelCase")]
    Unknown {
        budget: u64,
    },
}

impl Membership {
    pub fn from_bool(b: bool) -> Membership {
        if b {
            Membership::Yes
        } else {
            Membership::No
        }
    }

    pub fn is_yes(self) -> bool {
        self == Membership::Yes
    }

    pub fn is_no(self) -> bool {
        self == Membership::No
    }

    pub fn is_unknown(self) -> bool {
        matches!(self, Membership::Unknown { .. })
    }

    /// Three-valued conjunction: `No` dominates, then `Unknown`.
    pub fn and(self, other: Membership) -> Membership {
        use Membership::*;
        match (self, other) {
            (No, _) | (_, No) => No,
            (Yes, Yes) => Yes,
            (Unknown { budget: a }, Unknown { budget: b }) => Unknown { budget: a.max(b) },
            (Unknown { budget }, Yes) | (Yes, Unknown { budget }) => Unknown { budget },
        }
    }
}

impl fmt::Display for Membership {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Membership::Yes => write!(f, "yes"),
            Membership::No => write!(f, "no"),
            Membership::Unknown { budget } => write!(f, "unknown (budget {budget})"),
        }
    }
}

/// Exact membership rule supplied by an engine. The input is always in the
/// ambient group's canonical form.
pub type MembershipFn = dyn Fn(&Runs) -> Membership + Send + Sync;

/// Parsed subgroup spec; word payloads stay as source text until binding.
#[derive(Clone, Debug)]
pub enum SubgroupSpec {
    CyclicSpan(String),
    AbelianSpan(Vec<String>),
    Gens(Vec<String>),
    Base,
    Whole,
    Trivial,
    /// The coset table embedded in the group spec (`fsub:` groups).
    EmbeddedTable,
    Table(Arc<CosetTable>, String),
}

pub fn parse_subgroup_spec(text: &str) -> Result<SubgroupSpec> {
    let text = text.trim();
    if let Some(rest) = text.strip_prefix("cyclic-span:") {
        return Ok(SubgroupSpec::CyclicSpan(rest.trim().to_string()));
    }
    if let Some(rest) = text.strip_prefix("abelian-span:") {
        return Ok(SubgroupSpec::AbelianSpan(split_words(rest)));
    }
    if let Some(rest) = text.strip_prefix("gens:") {
        return Ok(SubgroupSpec::Gens(split_words(rest)));
    }
    if let Some(path) = text.strip_prefix("table:") {
        let content = std::fs::read_to_string(path.trim())?;
        let table = CosetTable::parse(&content)?;
        return Ok(SubgroupSpec::Table(Arc::new(table), text.to_string()));
    }
    match text {
        "base" => Ok(SubgroupSpec::Base),
        "whole" => Ok(SubgroupSpec::Whole),
        "trivial" => Ok(SubgroupSpec::Trivial),
        "table" => Ok(SubgroupSpec::EmbeddedTable),
        other => Err(CommError::InvalidSpec(format!(
            "unrecognized subgroup spec `{other}`"
        ))),
    }
}

fn split_words(s: &str) -> Vec<String> {
    s.split(';')
        .map(|w| w.trim().to_string())
        .filter(|w| !w.is_empty())
        .collect()
}

/// How membership answers are produced.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
#[serde(rename_all = "kebab-case")]
pub enum SubgroupKind {
    /// Exact rule registered by the group engine.
    ExactCatalog,
    /// Exact walk of a finite coset table.
    CosetTable,
    /// Budgeted closure enumeration; may answer `Unknown`.
    BoundedSearch,
}

struct BoundedSet {
    elements: HashSet<Runs>,
    complete: bool,
    budget: u64,
}

fn enumerate_closure(g: &GroupHandle, gens: &[Runs], budget: u64) -> BoundedSet {
    let mut steps: Vec<Runs> = Vec::new();
    for r in gens {
        let n = g.nf(r);
        if n.is_empty() {
            continue;
        }
        steps.push(g.nf(&runs_inverse(&n)));
        steps.push(n);
    }
    let mut elements = HashSet::new();
    elements.insert(Runs::new());
    let mut frontier: Vec<Runs> = vec![Runs::new()];
    while !frontier.is_empty() {
        let mut next = Vec::new();
        for e in &frontier {
            for s in &steps {
                let p = g.mul(e, s);
                if !elements.contains(&p) {
                    if elements.len() as u64 >= budget {
                        return BoundedSet {
                            elements,
                            complete: false,
                            budget,
                        };
                    }
                    elements.insert(p.clone());
                    next.push(p);
                }
            }
        }
        frontier = next;
    }
    BoundedSet {
        elements,
        complete: true,
        budget,
    }
}

enum Imp {
    Rule(Box<MembershipFn>),
    Table(Arc<CosetTable>),
    Bounded(BoundedSet),
    Intersection(SubgroupHandle, SubgroupHandle),
    Preimage { hom: HomHandle, inner: SubgroupHandle },
    Whole,
    Trivial,
}

struct Inner {
    ambient: GroupHandle,
    spec_text: String,
    kind: SubgroupKind,
    generators: Vec<Word>,
    imp: Imp,
}

/// Shared handle to a subgroup of a catalog group.
#[derive(Clone)]
pub struct SubgroupHandle {
    inner: Arc<Inner>,
}

pub const DEFAULT_SEARCH_BUDGET: u64 = 4096;

/// Binds a subgroup spec to a group. `budget` bounds the fallback closure
/// enumeration (element count) when no exact rule is available.
pub fn subgroup_of(g: &GroupHandle, spec_text: &str, budget: Option<u64>) -> Result<SubgroupHandle> {
    let spec = parse_subgroup_spec(spec_text)?;
    let budget = budget.unwrap_or(DEFAULT_SEARCH_BUDGET);

    // Validate any word payloads against the alphabet up front.
    let parse_all = |ws: &[String]| -> Result<Vec<Word>> {
        ws.iter().map(|w| g.parse(w)).collect()
    };
    let generators: Vec<Word> = match &spec {
        SubgroupSpec::CyclicSpan(w) => vec![g.parse(w)?],
        SubgroupSpec::AbelianSpan(ws) | SubgroupSpec::Gens(ws) => parse_all(ws)?,
        SubgroupSpec::Base => {
            let idx = g.base_generator_indexes().ok_or_else(|| {
                CommError::InvalidSpec(format!(
                    "group {} has no distinguished base subgroup",
                    g.spec()
                ))
            })?;
            idx.into_iter()
                .map(|i| Word(vec![crate::words::GeneratorSymbol::positive(i)]))
                .collect()
        }
        SubgroupSpec::Whole => (0..g.alphabet().len())
            .map(|i| Word(vec![crate::words::GeneratorSymbol::positive(i)]))
            .collect(),
        SubgroupSpec::Trivial => Vec::new(),
        SubgroupSpec::EmbeddedTable | SubgroupSpec::Table(..) => Vec::new(),
    };

    // Exact rule from the engine?
    if let Some(rule) = g.subgroup_rule(&spec) {
        let kind = match &spec {
            SubgroupSpec::EmbeddedTable | SubgroupSpec::Table(..) => SubgroupKind::CosetTable,
            _ => SubgroupKind::ExactCatalog,
        };
        return Ok(SubgroupHandle {
            inner: Arc::new(Inner {
                ambient: g.clone(),
                spec_text: spec_text.to_string(),
                kind,
                generators,
                imp: Imp::Rule(rule),
            }),
        });
    }

    let (kind, imp) = match spec {
        SubgroupSpec::Whole => (SubgroupKind::ExactCatalog, Imp::Whole),
        SubgroupSpec::Trivial => (SubgroupKind::ExactCatalog, Imp::Trivial),
        SubgroupSpec::Table(table, _) => {
            if !g.relations().is_empty() {
                return Err(CommError::InvalidCosetTable(
                    "coset tables require a free ambient group".into(),
                ));
            }
            if table.n_gens != g.alphabet().len() {
                return Err(CommError::InvalidCosetTable(format!(
                    "table has {} generators but the group has {}",
                    table.n_gens,
                    g.alphabet().len()
                )));
            }
            (SubgroupKind::CosetTable, Imp::Table(table))
        }
        SubgroupSpec::EmbeddedTable => {
            return Err(CommError::InvalidSpec(format!(
                "group {} carries no embedded coset table",
                g.spec()
            )))
        }
        SubgroupSpec::Base if generators.is_empty() => {
            return Err(CommError::InvalidSpec(
                "base subgroup has no generators".into(),
            ))
        }
        _ => {
            let gen_runs: Vec<Runs> = generators.iter().map(word_to_runs).collect();
            (
                SubgroupKind::BoundedSearch,
                Imp::Bounded(enumerate_closure(g, &gen_runs, budget)),
            )
        }
    };

    Ok(SubgroupHandle {
        inner: Arc::new(Inner {
            ambient: g.clone(),
            spec_text: spec_text.to_string(),
            kind,
            generators,
            imp,
        }),
    })
}

/// Preimage of a subgroup of the target group under a homomorphism; exact
/// whenever the inner membership is.
pub fn preimage_via(hom: &HomHandle, inner: &SubgroupHandle) -> Result<SubgroupHandle> {
    if !inner.ambient().same_group(hom.target()) {
        return Err(CommError::InvalidSpec(format!(
            "preimage: subgroup lives in {}, but the map lands in {}",
            inner.ambient().spec(),
            hom.target().spec()
        )));
    }
    let kind = match inner.kind() {
        SubgroupKind::BoundedSearch => SubgroupKind::BoundedSearch,
        _ => SubgroupKind::ExactCatalog,
    };
    Ok(SubgroupHandle {
        inner: Arc::new(Inner {
            ambient: hom.source().clone(),
            spec_text: format!("preimage({}) via {}", inner.spec_text(), hom.describe()),
            kind,
            generators: Vec::new(),
            imp: Imp::Preimage {
                hom: hom.clone(),
                inner: inner.clone(),
            },
        }),
    })
}

impl SubgroupHandle {
    pub fn ambient(&self) -> &GroupHandle {
        &self.inner.ambient
    }

    pub fn spec_text(&self) -> &str {
        &self.inner.spec_text
    }

    pub fn kind(&self) -> SubgroupKind {
        self.inner.kind
    }

    /// Generating words, when the spec provides them (empty for tables and
    /// derived handles).
    pub fn generators(&self) -> &[Word] {
        &self.inner.generators
    }

    pub fn membership(&self, w: &Word) -> Membership {
        self.membership_runs(&word_to_runs(w))
    }

    pub fn membership_runs(&self, r: &Runs) -> Membership {
        self.membership_canonical(&self.inner.ambient.nf(r))
    }

    /// Membership for input already in the ambient canonical form; the hot
    /// path for ball sweeps, which store canonical runs.
    pub fn membership_canonical(&self, nf: &Runs) -> Membership {
        match &self.inner.imp {
            Imp::Rule(rule) => rule(nf),
            Imp::Table(t) => Membership::from_bool(t.contains(nf)),
            Imp::Bounded(set) => {
                if set.elements.contains(nf) {
                    Membership::Yes
                } else if set.complete {
                    Membership::No
                } else {
                    Membership::Unknown { budget: set.budget }
                }
            }
            Imp::Intersection(a, b) => a
                .membership_canonical(nf)
                .and(b.membership_canonical(nf)),
            Imp::Preimage { hom, inner } => {
                inner.membership_canonical(&hom.apply_runs(nf))
            }
            Imp::Whole => Membership::Yes,
            Imp::Trivial => Membership::from_bool(nf.is_empty()),
        }
    }

    /// Intersection with another subgroup of the same group; membership is the
    /// three-valued conjunction.
    pub fn intersect(&self, other: &SubgroupHandle) -> Result<SubgroupHandle> {
        if !self.ambient().same_group(other.ambient()) {
            return Err(CommError::InvalidSpec(format!(
                "cannot intersect subgroups of {} and {}",
                self.ambient().spec(),
                other.ambient().spec()
            )));
        }
        let kind = match (self.kind(), other.kind()) {
            (SubgroupKind::BoundedSearch, _) | (_, SubgroupKind::BoundedSearch) => {
                SubgroupKind::BoundedSearch
            }
            _ => SubgroupKind::ExactCatalog,
        };
        Ok(SubgroupHandle {
            inner: Arc::new(Inner {
                ambient: self.ambient().clone(),
                spec_text: format!("intersect({},{})", self.spec_text(), other.spec_text()),
                kind,
                generators: Vec::new(),
                imp: Imp::Intersection(self.clone(), other.clone()),
            }),
        })
    }

    pub fn describe(&self) -> String {
        format!("{} ≤ {}", self.spec_text(), self.ambient().spec())
    }
}

impl fmt::Debug for SubgroupHandle {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "SubgroupHandle({})", self.describe())
    }
}
