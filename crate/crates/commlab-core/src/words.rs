//! Words over a finite generating alphabet.
//!
//! A [`Word`] is a flat sequence of signed generator letters. A [`Runs`] value is
//! the same data run-length encoded as `(generator index, signed exponent)` pairs
//! with adjacent indices distinct and exponents nonzero. Runs are the workhorse
//! representation throughout the crate: normal forms, canonical keys and ball
//! search all operate on runs, so an element like `x^4096 t^-3` costs two entries
//! instead of 4099 letters.
//!
//! Letter order for shortlex is fixed by the alphabet: generator 0 positive,
//! generator 0 negative, generator 1 positive, and so on. Words compare by length
//! first, then lexicographically on letters.

use std::cmp::Ordering;
use std::collections::HashMap;
use std::fmt;

use crate::error::{CommError, Result};

/// Largest letter count we are willing to materialize as a flat `Word`.
/// Run-encoded paths never expand, so this only guards explicit conversions.
const MAX_MATERIALIZE: u128 = 4_000_000;

/// One signed generator letter: an index into the owning alphabet and a sign.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub struct GeneratorSymbol {
    pub index: usize,
    /// +1 or -1.
    pub sign: i8,
}

impl GeneratorSymbol {
    pub fn positive(index: usize) -> Self {
        GeneratorSymbol { index, sign: 1 }
    }

    pub fn negative(index: usize) -> Self {
        GeneratorSymbol { index, sign: -1 }
    }

    pub fn inverse(self) -> Self {
        GeneratorSymbol {
            index: self.index,
            sign: -self.sign,
        }
    }

    /// Position in the fixed letter order: `g0, g0^-1, g1, g1^-1, ...`.
    pub fn rank(self) -> usize {
        2 * self.index + usize::from(self.sign < 0)
    }
}

/// A word: flat sequence of signed letters. Not reduced unless stated.
#[derive(Clone, Debug, Default, PartialEq, Eq, Hash)]
pub struct Word(pub Vec<GeneratorSymbol>);

impl Word {
    pub fn empty() -> Self {
        Word(Vec::new())
    }

    pub fn len(&self) -> usize {
        self.0.len()
    }

    pub fn is_empty(&self) -> bool {
        self.0.is_empty()
    }

    pub fn inverse(&self) -> Word {
        Word(self.0.iter().rev().map(|s| s.inverse()).collect())
    }

    pub fn concat(&self, other: &Word) -> Word {
        let mut v = self.0.clone();
        v.extend_from_slice(&other.0);
        Word(v)
    }
}

/// Run-length encoded word: `(generator index, signed exponent)` pairs,
/// exponents nonzero, adjacent indices distinct.
pub type Runs = Vec<(usize, i128)>;

/// Appends one run, merging with (and possibly cancelling into) the tail so the
/// run invariants are preserved.
pub fn push_run(out: &mut Runs, index: usize, exp: i128) {
    if exp == 0 {
        return;
    }
    if let Some(last) = out.last_mut() {
        if last.0 == index {
            last.1 += exp;
            if last.1 == 0 {
                out.pop();
            }
            return;
        }
    }
    out.push((index, exp));
}

/// Converts a word to runs. Adjacent mutually-inverse letters cancel, so for a
/// free group this already computes the reduced form.
pub fn word_to_runs(w: &Word) -> Runs {
    let mut out: Runs = Vec::new();
    for s in &w.0 {
        push_run(&mut out, s.index, s.sign as i128);
    }
    out
}

/// Expands runs back to a flat word. Panics when asked to materialize more than
/// [`MAX_MATERIALIZE`] letters; run-encoded call paths never expand.
pub fn runs_to_word(r: &Runs) -> Word {
    let total = runs_len(r);
    assert!(
        total <= MAX_MATERIALIZE,
        "refusing to materialize a word of {total} letters; keep this element run-encoded"
    );
    let mut v = Vec::with_capacity(total as usize);
    for &(index, exp) in r {
        let s = if exp > 0 {
            GeneratorSymbol::positive(index)
        } else {
            GeneratorSymbol::negative(index)
        };
        for _ in 0..exp.unsigned_abs() {
            v.push(s);
        }
    }
    Word(v)
}

/// Total letter count of a run-encoded word.
pub fn runs_len(r: &Runs) -> u128 {
    r.iter().map(|&(_, e)| e.unsigned_abs()).sum()
}

pub fn runs_inverse(r: &Runs) -> Runs {
    r.iter().rev().map(|&(i, e)| (i, -e)).collect()
}

/// Concatenates two run-encoded words, cancelling across the seam.
pub fn runs_concat(a: &Runs, b: &Runs) -> Runs {
    let mut out = a.clone();
    for &(i, e) in b {
        push_run(&mut out, i, e);
    }
    out
}

/// Runs consisting of a single letter power.
pub fn single_run(index: usize, exp: i128) -> Runs {
    if exp == 0 {
        Vec::new()
    } else {
        vec![(index, exp)]
    }
}

/// Free reduction: cancels adjacent mutually-inverse letters to a fixpoint.
pub fn free_reduce(w: &Word) -> Word {
    runs_to_word(&word_to_runs(w))
}

/// Shortlex on flat words: length first, then letter ranks.
pub fn shortlex_cmp(a: &Word, b: &Word) -> Ordering {
    a.len().cmp(&b.len()).then_with(|| {
        for (x, y) in a.0.iter().zip(&b.0) {
            match x.rank().cmp(&y.rank()) {
                Ordering::Equal => {}
                other => return other,
            }
        }
        Ordering::Equal
    })
}

/// Shortlex on run-encoded words without expansion. Agrees with
/// [`shortlex_cmp`] on the expanded words.
pub fn runs_shortlex_cmp(a: &Runs, b: &Runs) -> Ordering {
    match runs_len(a).cmp(&runs_len(b)) {
        Ordering::Equal => {}
        other => return other,
    }
    let rank = |(i, e): (usize, i128)| 2 * i + usize::from(e < 0);
    let (mut ia, mut ib) = (0usize, 0usize);
    let (mut ca, mut cb) = (0u128, 0u128); // letters already consumed in the current run
    while ia < a.len() && ib < b.len() {
        let (ra, rb) = (rank(a[ia]), rank(b[ib]));
        match ra.cmp(&rb) {
            Ordering::Equal => {}
            other => return other,
        }
        let rem_a = a[ia].1.unsigned_abs() - ca;
        let rem_b = b[ib].1.unsigned_abs() - cb;
        let step = rem_a.min(rem_b);
        ca += step;
        cb += step;
        if ca == a[ia].1.unsigned_abs() {
            ia += 1;
            ca = 0;
        }
        if cb == b[ib].1.unsigned_abs() {
            ib += 1;
            cb = 0;
        }
    }
    Ordering::Equal
}

/// An ordered generating alphabet with name lookup and word (de)serialization.
///
/// The surface syntax is whitespace-separated tokens `name` or `name^k` with a
/// signed integer `k`; the bare token `1` denotes the empty word.
#[derive(Clone, Debug)]
pub struct Alphabet {
    names: Vec<String>,
    index: HashMap<String, usize>,
}

impl Alphabet {
    pub fn new<S: Into<String>>(names: Vec<S>) -> Alphabet {
        let names: Vec<String> = names.into_iter().map(Into::into).collect();
        let mut index = HashMap::new();
        for (i, n) in names.iter().enumerate() {
            let prev = index.insert(n.clone(), i);
            assert!(prev.is_none(), "duplicate generator name `{n}`");
        }
        Alphabet { names, index }
    }

    pub fn len(&self) -> usize {
        self.names.len()
    }

    pub fn is_empty(&self) -> bool {
        self.names.is_empty()
    }

    pub fn name(&self, i: usize) -> &str {
        &self.names[i]
    }

    pub fn names(&self) -> &[String] {
        &self.names
    }

    pub fn lookup(&self, name: &str) -> Option<usize> {
        self.index.get(name).copied()
    }

    /// All signed letters in shortlex rank order.
    pub fn signed_letters(&self) -> Vec<GeneratorSymbol> {
        (0..self.len())
            .flat_map(|i| [GeneratorSymbol::positive(i), GeneratorSymbol::negative(i)])
            .collect()
    }

    fn parse_token(&self, token: &str) -> Result<(usize, i128)> {
        let (name, exp) = match token.find('^') {
            Some(pos) => {
                let (n, e) = token.split_at(pos);
                let exp: i128 = e[1..]
                    .parse()
                    .map_err(|_| CommError::MalformedExponent(token.to_string()))?;
                (n, exp)
            }
            None => (token, 1),
        };
        let index = self
            .lookup(name)
            .ok_or_else(|| CommError::UnknownGenerator(name.to_string()))?;
        Ok((index, exp))
    }

    /// Parses to a flat word, preserving unreduced structure
    /// (`"x x^-1"` parses to two letters, not zero).
    pub fn parse_word(&self, text: &str) -> Result<Word> {
        let mut letters = Vec::new();
        let mut total: u128 = 0;
        for token in text.split_whitespace() {
            if token == "1" {
                continue;
            }
            let (index, exp) = self.parse_token(token)?;
            total += exp.unsigned_abs();
            if total > MAX_MATERIALIZE {
                return Err(CommError::InvalidSpec(format!(
                    "word `{text}` is too long to materialize"
                )));
            }
            let s = if exp >= 0 {
                GeneratorSymbol::positive(index)
            } else {
                GeneratorSymbol::negative(index)
            };
            for _ in 0..exp.unsigned_abs() {
                letters.push(s);
            }
        }
        Ok(Word(letters))
    }

    /// Parses straight to runs without expansion; adjacent same-generator tokens
    /// merge (and may cancel). Use for canonical keys and large exponents.
    pub fn parse_runs(&self, text: &str) -> Result<Runs> {
        let mut out: Runs = Vec::new();
        for token in text.split_whitespace() {
            if token == "1" {
                continue;
            }
            let (index, exp) = self.parse_token(token)?;
            push_run(&mut out, index, exp);
        }
        Ok(out)
    }

    /// Renders a word, compressing maximal runs of one letter (`x x x` → `x^3`,
    /// `x^-1 x^-1` → `x^-2`). The empty word renders as `1`. Round-trips through
    /// [`Alphabet::parse_word`].
    pub fn unparse(&self, w: &Word) -> String {
        if w.is_empty() {
            return "1".to_string();
        }
        let mut pieces: Vec<(GeneratorSymbol, u128)> = Vec::new();
        for &s in &w.0 {
            match pieces.last_mut() {
                Some((t, n)) if *t == s => *n += 1,
                _ => pieces.push((s, 1)),
            }
        }
        let rendered: Vec<String> = pieces
            .into_iter()
            .map(|(s, n)| self.render_run(s.index, s.sign as i128 * n as i128))
            .collect();
        rendered.join(" ")
    }

    /// Renders run-encoded text; identical formatting to [`Alphabet::unparse`]
    /// on the expanded word.
    pub fn runs_text(&self, r: &Runs) -> String {
        if r.is_empty() {
            return "1".to_string();
        }
        let rendered: Vec<String> = r
            .iter()
            .map(|&(i, e)| self.render_run(i, e))
            .collect();
        rendered.join(" ")
    }

    fn render_run(&self, index: usize, exp: i128) -> String {
        if exp == 1 {
            self.names[index].clone()
        } else {
            format!("{}^{}", self.names[index], exp)
        }
    }
}

impl fmt::Display for Alphabet {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}", self.names.join(", "))
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use proptest::prelude::*;

    fn f2() -> Alphabet {
        Alphabet::new(vec!["x", "y"])
    }

    /// Reference free reduction: repeatedly delete one adjacent inverse pair.
    fn reduce_by_single_cancellations(w: &Word) -> Word {
        let mut v = w.0.clone();
        loop {
            let mut cancelled = false;
            let mut i = 0;
            while i + 1 < v.len() {
                if v[i].index == v[i + 1].index && v[i].sign == -v[i + 1].sign {
                    v.drain(i..=i + 1);
                    cancelled = true;
                } else {
                    i += 1;
                }
            }
            if !cancelled {
                return Word(v);
            }
        }
    }

    #[test]
    fn parse_and_unparse_round_trip() {
        let a = f2();
        let w = a.parse_word("x^2 y^-1").unwrap();
        assert_eq!(w.len(), 3);
        assert_eq!(a.unparse(&w), "x^2 y^-1");
        assert_eq!(a.unparse(&Word::empty()), "1");
        assert_eq!(a.parse_word("1").unwrap(), Word::empty());
        // Unreduced structure survives parse/unparse.
        let u = a.parse_word("x x^-1").unwrap();
        assert_eq!(u.len(), 2);
        assert_eq!(a.unparse(&u), "x x^-1");
    }

    #[test]
    fn parse_rejects_bad_tokens() {
        let a = f2();
        assert!(matches!(
            a.parse_word("q"),
            Err(CommError::UnknownGenerator(_))
        ));
        assert!(matches!(
            a.parse_word("x^"),
            Err(CommError::MalformedExponent(_))
        ));
        assert!(matches!(
            a.parse_word("x^one"),
            Err(CommError::MalformedExponent(_))
        ));
    }

    #[test]
    fn free_reduce_examples() {
        let a = f2();
        let w = a.parse_word("x y y^-1 x x^-1").unwrap();
        assert_eq!(a.unparse(&free_reduce(&w)), "x");
        let w = a.parse_word("x y x^-1 x y^-1 x^-1").unwrap();
        assert_eq!(a.unparse(&free_reduce(&w)), "1");
    }

    #[test]
    fn runs_cancel_across_seams() {
        let a = f2();
        let left = a.parse_runs("x y").unwrap();
        let right = a.parse_runs("y^-1 x^-1").unwrap();
        assert!(runs_concat(&left, &right).is_empty());
        let r = a.parse_runs("x^4096 y^-3").unwrap();
        assert_eq!(r, vec![(0, 4096), (1, -3)]);
        assert_eq!(runs_len(&r), 4099);
        assert_eq!(a.runs_text(&r), "x^4096 y^-3");
    }

    #[test]
    fn shortlex_order_examples() {
        let a = f2();
        let cmp = |s: &str, t: &str| {
            shortlex_cmp(&a.parse_word(s).unwrap(), &a.parse_word(t).unwrap())
        };
        assert_eq!(cmp("y", "x^2"), Ordering::Less); // length wins
        assert_eq!(cmp("x", "x^-1"), Ordering::Less); // positive before negative
        assert_eq!(cmp("x^-1", "y"), Ordering::Less);
        assert_eq!(cmp("x y", "x^2"), Ordering::Greater);
    }

    fn arb_word(max_len: usize) -> impl Strategy<Value = Word> {
        proptest::collection::vec((0usize..3, prop_oneof![Just(1i8), Just(-1i8)]), 0..max_len)
            .prop_map(|ls| {
                Word(
                    ls.into_iter()
                        .map(|(index, sign)| GeneratorSymbol { index, sign })
                        .collect(),
                )
            })
    }

    proptest! {
        #[test]
        fn free_reduce_matches_single_cancellation_oracle(w in arb_word(24)) {
            let fast = free_reduce(&w);
            let slow = reduce_by_single_cancellations(&w);
            // Both must be reduced and equal: single-pair cancellation is
            // confluent, so any cancellation order reaches the same word.
            prop_assert_eq!(fast, slow);
        }

        #[test]
        fn reduced_words_have_no_adjacent_inverses(w in arb_word(24)) {
            let r = free_reduce(&w);
            for pair in r.0.windows(2) {
                prop_assert!(!(pair[0].index == pair[1].index && pair[0].sign == -pair[1].sign));
            }
        }

        #[test]
        fn runs_shortlex_agrees_with_word_shortlex(u in arb_word(16), v in arb_word(16)) {
            let (ru, rv) = (word_to_runs(&u), word_to_runs(&v));
            prop_assert_eq!(
                runs_shortlex_cmp(&ru, &rv),
                shortlex_cmp(&runs_to_word(&ru), &runs_to_word(&rv))
            );
        }

        #[test]
        fn parse_unparse_parse_is_identity(w in arb_word(20)) {
            let a = Alphabet::new(vec!["x", "y", "z"]);
            let text = a.unparse(&w);
            prop_assert_eq!(a.parse_word(&text).unwrap(), w);
        }
    }
}
