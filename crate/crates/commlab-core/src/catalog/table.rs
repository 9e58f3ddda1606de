//! Coset tables for finite-index subgroups of free groups.
//!
//! File format: a header line `n k` (coset count, generator count) followed by
//! `k` lines of `n` integers each; line `i` is the permutation describing right
//! multiplication by generator `i` on cosets `0..n`, and coset `0` is the
//! subgroup itself. A word lies in the subgroup iff it returns coset 0 to 0.

use crate::error::{CommError, Result};
use crate::words::Runs;

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct CosetTable {
    pub n_cosets: usize,
    pub n_gens: usize,
    /// `perm[g][c]` = image of coset `c` under right multiplication by generator `g`.
    perm: Vec<Vec<u32>>,
    /// Inverse permutations.
    inv: Vec<Vec<u32>>,
}

impl CosetTable {
    pub fn new(n_cosets: usize, perms: Vec<Vec<u32>>) -> Result<CosetTable> {
        if n_cosets == 0 {
            return Err(CommError::InvalidCosetTable("no cosets".into()));
        }
        let n_gens = perms.len();
        let mut inv = Vec::with_capacity(n_gens);
        for (g, p) in perms.iter().enumerate() {
            if p.len() != n_cosets {
                return Err(CommError::InvalidCosetTable(format!(
                    "generator {g}: expected {n_cosets} entries, got {}",
                    p.len()
                )));
            }
            let mut seen = vec![false; n_cosets];
            let mut ip = vec![0u32; n_cosets];
            for (c, &img) in p.iter().enumerate() {
                let img_us = img as usize;
                if img_us >= n_cosets {
                    return Err(CommError::InvalidCosetTable(format!(
                        "generator {g}: coset {c} maps to out-of-range {img}"
                    )));
                }
                if seen[img_us] {
                    return Err(CommError::InvalidCosetTable(format!(
                        "generator {g} is not a permutation: image {img} repeats"
                    )));
                }
                seen[img_us] = true;
                ip[img_us] = c as u32;
            }
            inv.push(ip);
        }
        Ok(CosetTable {
            n_cosets,
            n_gens,
            perm: perms,
            inv,
        })
    }

    pub fn parse(text: &str) -> Result<CosetTable> {
        let mut lines = text
            .lines()
            .map(str::trim)
            .filter(|l| !l.is_empty() && !l.starts_with('#'));
        let header = lines
            .next()
            .ok_or_else(|| CommError::InvalidCosetTable("empty table".into()))?;
        let mut parts = header.split_whitespace();
        let n: usize = parts
            .next()
            .and_then(|t| t.parse().ok())
            .ok_or_else(|| CommError::InvalidCosetTable("bad header".into()))?;
        let k: usize = parts
            .next()
            .and_then(|t| t.parse().ok())
            .ok_or_else(|| CommError::InvalidCosetTable("bad header".into()))?;
        let mut perms = Vec::with_capacity(k);
        for g in 0..k {
            let line = lines.next().ok_or_else(|| {
                CommError::InvalidCosetTable(format!("missing permutation line {g}"))
            })?;
            let row: Vec<u32> = line
                .split_whitespace()
                .map(|t| {
                    t.parse::<u32>().map_err(|_| {
                        CommError::InvalidCosetTable(format!("bad entry `{t}` on line {g}"))
                    })
                })
                .collect::<Result<_>>()?;
            perms.push(row);
        }
        CosetTable::new(n, perms)
    }

    fn step(&self, state: u32, gen: usize, positive: bool) -> u32 {
        if positive {
            self.perm[gen][state as usize]
        } else {
            self.inv[gen][state as usize]
        }
    }

    /// Applies a run-encoded word starting from `state`. Large exponents are
    /// reduced modulo the cycle length of the current state, so `x^4096` costs
    /// O(cycle) rather than 4096 steps.
    pub fn act(&self, state: u32, word: &Runs) -> u32 {
        let mut s = state;
        for &(gen, exp) in word {
            // Cycle length of s under this generator.
            let mut len = 1u64;
            let mut t = self.perm[gen][s as usize];
            while t != s {
                t = self.perm[gen][t as usize];
                len += 1;
            }
            let steps = exp.rem_euclid(len as i128) as u64;
            for _ in 0..steps {
                s = self.step(s, gen, true);
            }
        }
        s
    }

    /// Membership in the subgroup the table describes (returns to coset 0).
    pub fn contains(&self, word: &Runs) -> bool {
        self.act(0, word) == 0
    }

    /// Index of the subgroup — the coset count.
    pub fn index(&self) -> usize {
        self.n_cosets
    }

    /// Serializes back to the file format.
    pub fn render(&self) -> String {
        let mut out = format!("{} {}\n", self.n_cosets, self.n_gens);
        for p in &self.perm {
            let row: Vec<String> = p.iter().map(u32::to_string).collect();
            out.push_str(&row.join(" "));
            out.push('\n');
        }
        out
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::words::Alphabet;

    /// Index-2 subgroup of F2 of words with even total x-exponent.
    fn even_x() -> CosetTable {
        CosetTable::new(2, vec![vec![1, 0], vec![0, 1]]).unwrap()
    }

    #[test]
    fn parses_and_round_trips() {
        let text = "2 2\n1 0\n0 1\n";
        let t = CosetTable::parse(text).unwrap();
        assert_eq!(t, even_x());
        assert_eq!(t.render(), text);
    }

    #[test]
    fn rejects_malformed_tables() {
        assert!(CosetTable::parse("").is_err());
        assert!(CosetTable::parse("2 2\n1 1\n0 1\n").is_err()); // not a permutation
        assert!(CosetTable::parse("2 2\n1 2\n0 1\n").is_err()); // out of range
        assert!(CosetTable::parse("2 2\n1 0\n").is_err()); // missing line
    }

    #[test]
    fn membership_walk_with_large_exponents() {
        let a = Alphabet::new(vec!["x", "y"]);
        let t = even_x();
        let member = |s: &str| t.contains(&a.parse_runs(s).unwrap());
        assert!(member("x^2"));
        assert!(member("x y x y^-1"));
        assert!(!member("x"));
        assert!(!member("x^4097 y^3"));
        assert!(member("x^4096 y^3"));
    }
}
