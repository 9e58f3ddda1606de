//! Exact integer matrix normal forms for finitely generated abelian quotients.
//!
//! Everything here is BigInt-backed: Smith normal form with both unimodular
//! transforms (`u · m · v = d`), an integer row-echelon lattice with canonical
//! coset residues (the workhorse behind abelian membership rules and the
//! torsion-laddered groups), and the derived quantities the rest of the crate
//! asks for — invariant factors of a quotient and the index of a sublattice.

use num_bigint::{BigInt, BigUint};
use num_integer::Integer;
use num_traits::{One, Signed, Zero};
use serde::Serialize;

/// Dense row-major integer matrix.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct IntMatrix {
    pub rows: usize,
    pub cols: usize,
    data: Vec<BigInt>,
}

impl IntMatrix {
    pub fn zeros(rows: usize, cols: usize) -> IntMatrix {
        IntMatrix {
            rows,
            cols,
            data: vec![BigInt::zero(); rows * cols],
        }
    }

    pub fn identity(n: usize) -> IntMatrix {
        let mut m = IntMatrix::zeros(n, n);
        for i in 0..n {
            m.set(i, i, BigInt::one());
        }
        m
    }

    pub fn from_rows(rows: Vec<Vec<BigInt>>) -> IntMatrix {
        let r = rows.len();
        let c = rows.first().map_or(0, Vec::len);
        assert!(rows.iter().all(|row| row.len() == c), "ragged rows");
        IntMatrix {
            rows: r,
            cols: c,
            data: rows.into_iter().flatten().collect(),
        }
    }

    pub fn from_i64(rows: &[Vec<i64>]) -> IntMatrix {
        IntMatrix::from_rows(
            rows.iter()
                .map(|row| row.iter().map(|&x| BigInt::from(x)).collect())
                .collect(),
        )
    }

    pub fn get(&self, r: usize, c: usize) -> &BigInt {
        &self.data[r * self.cols + c]
    }

    pub fn set(&mut self, r: usize, c: usize, v: BigInt) {
        self.data[r * self.cols + c] = v;
    }

    pub fn row(&self, r: usize) -> &[BigInt] {
        &self.data[r * self.cols..(r + 1) * self.cols]
    }

    pub fn mul(&self, rhs: &IntMatrix) -> IntMatrix {
        assert_eq!(self.cols, rhs.rows);
        let mut out = IntMatrix::zeros(self.rows, rhs.cols);
        for i in 0..self.rows {
            for k in 0..self.cols {
                let a = self.get(i, k);
                if a.is_zero() {
                    continue;
                }
                for j in 0..rhs.cols {
                    let add = a * rhs.get(k, j);
                    let cur = out.get(i, j) + add;
                    out.set(i, j, cur);
                }
            }
        }
        out
    }

    fn swap_rows(&mut self, a: usize, b: usize) {
        if a == b {
            return;
        }
        for c in 0..self.cols {
            self.data.swap(a * self.cols + c, b * self.cols + c);
        }
    }

    fn swap_cols(&mut self, a: usize, b: usize) {
        if a == b {
            return;
        }
        for r in 0..self.rows {
            self.data.swap(r * self.cols + a, r * self.cols + b);
        }
    }

    /// `row[target] -= q * row[source]`.
    fn row_axpy(&mut self, target: usize, source: usize, q: &BigInt) {
        for c in 0..self.cols {
            let delta = q * self.get(source, c);
            let v = self.get(target, c) - delta;
            self.set(target, c, v);
        }
    }

    /// `col[target] -= q * col[source]`.
    fn col_axpy(&mut self, target: usize, source: usize, q: &BigInt) {
        for r in 0..self.rows {
            let delta = q * self.get(r, source);
            let v = self.get(r, target) - delta;
            self.set(r, target, v);
        }
    }

    fn negate_row(&mut self, r: usize) {
        for c in 0..self.cols {
            let v = -self.get(r, c);
            self.set(r, c, v);
        }
    }
}

/// Smith normal form `u · m · v = d` with `u`, `v` unimodular and `d` diagonal
/// with nonnegative entries satisfying `d[0] | d[1] | ...`.
#[derive(Clone, Debug)]
pub struct Snf {
    pub d: IntMatrix,
    pub u: IntMatrix,
    pub v: IntMatrix,
}

impl Snf {
    /// Diagonal entries (length `min(rows, cols)`).
    pub fn diagonal(&self) -> Vec<BigInt> {
        (0..self.d.rows.min(self.d.cols))
            .map(|i| self.d.get(i, i).clone())
            .collect()
    }
}

/// Pivot choice: smallest nonzero absolute value, row-major ties.
fn find_pivot(m: &IntMatrix, t: usize) -> Option<(usize, usize)> {
    let mut best: Option<(usize, usize)> = None;
    for i in t..m.rows {
        for j in t..m.cols {
            let e = m.get(i, j);
            if e.is_zero() {
                continue;
            }
            match best {
                Some((bi, bj)) if m.get(bi, bj).abs() <= e.abs() => {}
                _ => best = Some((i, j)),
            }
        }
    }
    best
}

pub fn smith_normal_form(m: &IntMatrix) -> Snf {
    let mut d = m.clone();
    let mut u = IntMatrix::identity(m.rows);
    let mut v = IntMatrix::identity(m.cols);
    let stages = m.rows.min(m.cols);

    let mut t = 0;
    'stage: while t < stages {
        let Some((pi, pj)) = find_pivot(&d, t) else {
            break;
        };
        d.swap_rows(t, pi);
        u.swap_rows(t, pi);
        d.swap_cols(t, pj);
        v.swap_cols(t, pj);

        // Clear column t and row t; each remainder swap shrinks |pivot|.
        loop {
            let mut again = false;
            for i in t + 1..d.rows {
                if d.get(i, t).is_zero() {
                    continue;
                }
                let (q, r) = d.get(i, t).div_mod_floor(d.get(t, t));
                if !q.is_zero() {
                    d.row_axpy(i, t, &q);
                    u.row_axpy(i, t, &q);
                }
                if !r.is_zero() {
                    d.swap_rows(t, i);
                    u.swap_rows(t, i);
                    again = true;
                }
            }
            if again {
                continue;
            }
            for j in t + 1..d.cols {
                if d.get(t, j).is_zero() {
                    continue;
                }
                let (q, r) = d.get(t, j).div_mod_floor(d.get(t, t));
                if !q.is_zero() {
                    d.col_axpy(j, t, &q);
                    v.col_axpy(j, t, &q);
                }
                if !r.is_zero() {
                    d.swap_cols(t, j);
                    v.swap_cols(t, j);
                    again = true;
                }
            }
            if !again {
                break;
            }
        }

        // The pivot must divide the rest of the submatrix or the invariant
        // factor chain breaks; pull a bad row up and redo this stage.
        for i in t + 1..d.rows {
            for j in t + 1..d.cols {
                if !d.get(i, j).mod_floor(d.get(t, t)).is_zero() {
                    let one = BigInt::from(-1);
                    d.row_axpy(t, i, &one); // row t += row i
                    u.row_axpy(t, i, &one);
                    continue 'stage;
                }
            }
        }
        t += 1;
    }

    for i in 0..stages {
        if d.get(i, i).is_negative() {
            d.negate_row(i);
            u.negate_row(i);
        }
    }
    Snf { d, u, v }
}

///// Invariant factors of the abelian group `Z^n / rowspan(rel)`:
/// torsion orders (each ≥ 2, consecutive entries divide) plus free rank.
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct QuotientInvariants {
    pub torsion: Vec<BigUint>,
    pub free_rank: usize,
}

impl QuotientInvariants {
    pub fn describe(&self) -> String {
        let mut parts: Vec<String> = self.torsion.iter().map(|t| format!("Z/{t}")).collect();
        if self.free_rank > 0 {
            parts.push(format!("Z^{}", self.free_rank));
        }
        if parts.is_empty() {
            "trivial".to_string()
        } else {
            parts.join(" + ")
        }
    }
}

/// Structure of `Z^n / rowspan(rel)` where `rel` is `k × n`.
pub fn quotient_invariants_of(rel: &IntMatrix) -> QuotientInvariants {
    let n = rel.cols;
    if rel.rows == 0 {
        return QuotientInvariants {
            torsion: Vec::new(),
            free_rank: n,
        };
    }
    let snf = smith_normal_form(rel);
    let diag = snf.diagonal();
    let rank = diag.iter().filter(|d| !d.is_zero()).count();
    let torsion = diag
        .iter()
        .filter(|d| d.abs() > BigInt::one())
        .map(|d| d.to_biguint().expect("normalized diagonal is nonnegative"))
        .collect();
    QuotientInvariants {
        torsion,
        free_rank: n - rank,
    }
}

/// Index of a sublattice of `Z^n` (n = `rows.cols`), finite iff full rank.
#[derive(Clone, Debug, PartialEq, Eq)]
pub enum Index {
    Finite(BigUint),
    Infinite,
}

pub fn lattice_index(rows: &IntMatrix) -> Index {
    let n = rows.cols;
    if rows.rows < n {
        return Index::Infinite;
    }
    let diag = smith_normal_form(rows).diagonal();
    if diag.len() < n || diag.iter().take(n).any(Zero::is_zero) {
        return Index::Infinite;
    }
    let mut idx = BigUint::one();
    for d in diag.iter().take(n) {
        idx *= d.to_biguint().expect("normalized diagonal is nonnegative");
    }
    Index::Finite(idx)
}

/// An integer lattice in row-echelon form with positive pivots, supporting
/// canonical coset residues: `reduce(v)` depends only on `v + L`, and is zero
/// iff `v ∈ L`.
#[derive(Clone, Debug)]
pub struct RowLattice {
    pub n: usize,
    rows: Vec<Vec<BigInt>>,
    pivots: Vec<usize>,
}

impl RowLattice {
    pub fn from_rows(n: usize, rows_in: Vec<Vec<BigInt>>) -> RowLattice {
        let mut pool: Vec<Vec<BigInt>> = rows_in
            .into_iter()
            .inspect(|r| assert_eq!(r.len(), n, "row length mismatch"))
            .filter(|r| r.iter().any(|x| !x.is_zero()))
            .collect();
        let mut rows = Vec::new();
        let mut pivots = Vec::new();
        for col in 0..n {
            loop {
                // Indexes of pool rows with a nonzero entry in this column.
                let mut live: Vec<usize> = (0..pool.len())
                    .filter(|&i| !pool[i][col].is_zero())
                    .collect();
                if live.is_empty() {
                    break;
                }
                if live.len() == 1 {
                    let mut row = pool.swap_remove(live[0]);
                    if row[col].is_negative() {
                        for x in row.iter_mut() {
                            *x = -&*x;
                        }
                    }
                    pivots.push(col);
                    rows.push(row);
                    break;
                }
                // Euclidean step: reduce every live row by the one with the
                // smallest |entry| in this column.
                live.sort_by(|&a, &b| pool[a][col].abs().cmp(&pool[b][col].abs()));
                let base = live[0];
                for &i in &live[1..] {
                    let q = pool[i][col].div_floor(&pool[base][col]);
                    if !q.is_zero() {
                        for c in 0..n {
                            let delta = &q * &pool[base][c];
                            pool[i][c] = &pool[i][c] - delta;
                        }
                    }
                }
                pool.retain(|r| r.iter().any(|x| !x.is_zero()));
            }
        }
        RowLattice { n, rows, pivots }
    }

    pub fn rank(&self) -> usize {
        self.rows.len()
    }

    /// Canonical residue of `v` modulo the lattice: each pivot coordinate is
    /// reduced into `[0, pivot)` top-down.
    pub fn reduce(&self, v: &[BigInt]) -> Vec<BigInt> {
        assert_eq!(v.len(), self.n);
        let mut v = v.to_vec();
        for (row, &p) in self.rows.iter().zip(&self.pivots) {
            let q = v[p].div_floor(&row[p]);
            if !q.is_zero() {
                for c in 0..self.n {
                    let delta = &q * &row[c];
                    v[c] = &v[c] - delta;
                }
            }
        }
        v
    }

    pub fn contains(&self, v: &[BigInt]) -> bool {
        self.reduce(v).iter().all(Zero::is_zero)
    }
}

/// Invariant factors of G/⟨⟨H⟩⟩ for groups carrying an exact abelianized
/// presentation: the subgroup generators become fresh relation rows. For
/// abelian G this is literally the structure of G/H.
pub fn quotient_invariants(
    g: &crate::group::GroupHandle,
    h: &crate::subgroup::SubgroupHandle,
) -> crate::error::Result<QuotientInvariants> {
    if !g.same_group(h.ambient()) {
        return Err(crate::error::CommError::InvalidSpec(
            "subgroup belongs to a different group".into(),
        ));
    }
    let (m, mut rows) = g.abelian_presentation().ok_or_else(|| {
        crate::error::CommError::InvalidSpec(format!(
            "group `{}` has no exact abelianized presentation",
            g.spec()
        ))
    })?;
    for w in h.generators() {
        let mut row = vec![BigInt::zero(); m];
        for s in &w.0 {
            row[s.index] += BigInt::from(s.sign);
        }
        rows.push(row);
    }
    if rows.is_empty() {
        return Ok(QuotientInvariants {
            torsion: Vec::new(),
            free_rank: m,
        });
    }
    Ok(quotient_invariants_of(&IntMatrix::from_rows(rows)))
}
