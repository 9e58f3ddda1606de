//! Homomorphisms between catalog groups, given by generator images.
//!
//! Construction checks every defining relation of the source group, so a
//! successfully built handle really is a homomorphism. Image text syntax:
//! either positional (`t; x^2`, one image per source generator in order) or
//! named pairs (`t -> t; x0 -> x^2`), entries separated by `;`.

use std::sync::Arc;

use crate::error::{CommError, Result};
use crate::group::GroupHandle;
use crate::words::{word_to_runs, Runs, Word};

struct Inner {
    source: GroupHandle,
    target: GroupHandle,
    /// Canonical image of each source generator.
    images: Vec<Runs>,
    describe: String,
}

#[derive(Clone)]
pub struct HomHandle {
    inner: Arc<Inner>,
}

impl HomHandle {
    /// Builds a homomorphism from generator images (one word in the target
    /// group per source generator, in alphabet order).
    pub fn new(source: &GroupHandle, target: &GroupHandle, images: Vec<Word>) -> Result<HomHandle> {
        if images.len() != source.alphabet().len() {
            return Err(CommError::InvalidSpec(format!(
                "expected {} generator images, got {}",
                source.alphabet().len(),
                images.len()
            )));
        }
        let image_runs: Vec<Runs> = images.iter().map(|w| target.nf(&word_to_runs(w))).collect();
        let describe = {
            let parts: Vec<String> = source
                .alphabet()
                .names()
                .iter()
                .zip(&image_runs)
                .map(|(n, r)| format!("{n}->{}", target.alphabet().runs_text(r)))
                .collect();
            format!("{} -> {} [{}]", source.spec(), target.spec(), parts.join(", "))
        };
        let hom = HomHandle {
            inner: Arc::new(Inner {
                source: source.clone(),
                target: target.clone(),
                images: image_runs,
                describe,
            }),
        };
        for (lhs, rhs) in source.relations() {
            let l = hom.apply_runs(&word_to_runs(&lhs));
            let r = hom.apply_runs(&word_to_runs(&rhs));
            if l != r {
                return Err(CommError::InvalidSpec(format!(
                    "images do not respect the relation {} = {}",
                    source.alphabet().unparse(&lhs),
                    source.alphabet().unparse(&rhs)
                )));
            }
        }
        Ok(hom)
    }

    /// Parses image text (see module docs) and builds the map.
    pub fn parse(source: &GroupHandle, target: &GroupHandle, text: &str) -> Result<HomHandle> {
        let entries: Vec<&str> = text.split(';').map(str::trim).filter(|s| !s.is_empty()).collect();
        let named = entries.iter().any(|e| e.contains("->"));
        let mut images: Vec<Option<Word>> = vec![None; source.alphabet().len()];
        if named {
            for e in &entries {
                let (name, img) = e.split_once("->").ok_or_else(|| {
                    CommError::InvalidSpec(format!("image entry `{e}` is missing `->`"))
                })?;
                let idx = source
                    .alphabet()
                    .lookup(name.trim())
                    .ok_or_else(|| CommError::UnknownGenerator(name.trim().to_string()))?;
                images[idx] = Some(target.parse(img.trim())?);
            }
        } else {
            if entries.len() != images.len() {
                return Err(CommError::InvalidSpec(format!(
                    "expected {} generator images, got {}",
                    images.len(),
                    entries.len()
                )));
            }
            for (i, e) in entries.iter().enumerate() {
                images[i] = Some(target.parse(e)?);
            }
        }
        let images: Vec<Word> = images
            .into_iter()
            .enumerate()
            .map(|(i, w)| {
                w.ok_or_else(|| {
                    CommError::InvalidSpec(format!(
                        "no image given for generator `{}`",
                        source.alphabet().name(i)
                    ))
                })
            })
            .collect::<Result<_>>()?;
        HomHandle::new(source, target, images)
    }

    pub fn source(&self) -> &GroupHandle {
        &self.inner.source
    }

    pub fn target(&self) -> &GroupHandle {
        &self.inner.target
    }

    pub fn describe(&self) -> String {
        self.inner.describe.clone()
    }

    /// Canonical image of a run-encoded source word.
    pub fn apply_runs(&self, r: &Runs) -> Runs {
        let target = &self.inner.target;
        let mut acc: Runs = Vec::new();
        for &(i, e) in r {
            let p = target.pow(&self.inner.images[i], e);
            acc = target.mul(&acc, &p);
        }
        acc
    }

    pub fn apply(&self, w: &Word) -> Word {
        crate::words::runs_to_word(&self.apply_runs(&word_to_runs(w)))
    }

    /// Canonical key of the image in the target group.
    pub fn apply_key(&self, r: &Runs) -> String {
        self.inner
            .target
            .alphabet()
            .runs_text(&self.apply_runs(r))
    }
}

impl std::fmt::Debug for HomHandle {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        write!(f, "HomHandle({})", self.inner.describe)
    }
}
