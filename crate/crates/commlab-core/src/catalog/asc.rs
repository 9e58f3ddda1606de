//! Ascending HNN extensions ⟨Z^n, t | t⁻¹ v t = v·M⟩ where the associated
//! subgroup is the whole base and φ is an injective endomorphism given by an
//! integer matrix M (rows are the images of the base generators).

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::Zero;

use crate::catalog::abelian::{encode_big, multiple_of};
use crate::catalog::hnn::{BaseGroup, BaseRule};
use crate::error::{CommError, Result};
use crate::lattice::RowLattice;
use crate::words::Runs;

pub struct AbelianImageBase {
    pub n: usize,
    pub offset: usize,
    rows: Vec<Vec<BigInt>>,
    image: RowLattice,
}

impl AbelianImageBase {
    pub fn new(offset: usize, rows: Vec<Vec<BigInt>>) -> Result<AbelianImageBase> {
        let n = rows.len();
        for r in &rows {
            if r.len() != n {
                return Err(CommError::InvalidSpec(
                    "endomorphism matrix must be square".into(),
                ));
            }
        }
        if det(&rows).is_zero() {
            return Err(CommError::InvalidSpec(
                "endomorphism matrix is singular; the extension needs an injective map".into(),
            ));
        }
        let image = RowLattice::from_rows(n, rows.clone());
        Ok(AbelianImageBase {
            n,
            offset,
            rows,
            image,
        })
    }

    pub fn coords(&self, r: &Runs) -> Vec<BigInt> {
        let mut v = vec![BigInt::zero(); self.n];
        for &(i, e) in r {
            assert!(
                (self.offset..self.offset + self.n).contains(&i),
                "letter index {i} outside the abelian base"
            );
            v[i - self.offset] += BigInt::from(e);
        }
        v
    }

    pub fn encode(&self, v: &[BigInt]) -> Runs {
        encode_big(v)
            .into_iter()
            .map(|(i, e)| (i + self.offset, e))
            .collect()
    }

    fn apply(&self, v: &[BigInt]) -> Vec<BigInt> {
        let mut out = vec![BigInt::zero(); self.n];
        for (c, row) in v.iter().zip(&self.rows) {
            for (o, m) in out.iter_mut().zip(row) {
                *o += c * m;
            }
        }
        out
    }
}

fn det(rows: &[Vec<BigInt>]) -> BigRational {
    let n = rows.len();
    let mut a: Vec<Vec<BigRational>> = rows
        .iter()
        .map(|r| r.iter().map(|c| BigRational::from(c.clone())).collect())
        .collect();
    let mut d = BigRational::from(BigInt::from(1));
    for col in 0..n {
        let piv = match (col..n).find(|&r| !a[r][col].is_zero()) {
            Some(p) => p,
            None => return BigRational::zero(),
        };
        if piv != col {
            a.swap(col, piv);
            d = -d;
        }
        d *= a[col][col].clone();
        for r in (col + 1)..n {
            if !a[r][col].is_zero() {
                let f = &a[r][col] / &a[col][col];
                for c in col..n {
                    let t = &a[col][c] * &f;
                    a[r][c] -= t;
                }
            }
        }
    }
    d
}

/// Solves x · rows = b over the rationals; `None` when b is outside the
/// rational row space or the solution is not integral.
fn solve_integral(rows: &[Vec<BigInt>], b: &[BigInt]) -> Option<Vec<BigInt>> {
    let n = rows.len();
    // As a linear system A x = b with A[i][j] = rows[j][i].
    let mut a: Vec<Vec<BigRational>> = (0..n)
        .map(|i| {
            (0..n)
                .map(|j| BigRational::from(rows[j][i].clone()))
                .collect()
        })
        .collect();
    let mut rhs: Vec<BigRational> = b.iter().map(|c| BigRational::from(c.clone())).collect();
    for col in 0..n {
        let piv = (col..n).find(|&r| !a[r][col].is_zero())?;
        a.swap(col, piv);
        rhs.swap(col, piv);
        for r in 0..n {
            if r != col && !a[r][col].is_zero() {
                let f = &a[r][col] / &a[col][col];
                for c in col..n {
                    let t = &a[col][c] * &f;
                    a[r][c] -= t;
                }
                let t = &rhs[col] * &f;
                rhs[r] -= t;
            }
        }
    }
    let mut x = Vec::with_capacity(n);
    for i in 0..n {
        let v = &rhs[i] / &a[i][i];
        if !v.is_integer() {
            return None;
        }
        x.push(v.to_integer());
    }
    Some(x)
}

impl BaseGroup for AbelianImageBase {
    fn base_indexes(&self) -> Vec<usize> {
        (self.offset..self.offset + self.n).collect()
    }

    fn nf(&self, r: &Runs) -> Runs {
        self.encode(&self.coords(r))
    }

    fn in_assoc(&self, _h: &Runs) -> bool {
        true
    }

    fn in_image(&self, h: &Runs) -> bool {
        self.image.contains(&self.coords(h))
    }

    fn phi(&self, a: &Runs) -> Runs {
        self.encode(&self.apply(&self.coords(a)))
    }

    fn phi_inv(&self, b: &Runs) -> Runs {
        let x = solve_integral(&self.rows, &self.coords(b))
            .expect("phi_inv called outside the image lattice");
        self.encode(&x)
    }

    fn rep_assoc(&self, h: &Runs) -> (Runs, Runs) {
        (Vec::new(), h.clone())
    }

    fn rep_image(&self, h: &Runs) -> (Runs, Runs) {
        let v = self.coords(h);
        let r = self.image.reduce(&v);
        let part: Vec<BigInt> = v.iter().zip(&r).map(|(a, b)| a - b).collect();
        (self.encode(&r), self.encode(&part))
    }

    fn cyclic_rule(&self, w: &Runs) -> Option<BaseRule> {
        let wv = self.coords(w);
        let n = self.n;
        let offset = self.offset;
        Some(Box::new(move |g: &Runs| {
            let mut v = vec![BigInt::zero(); n];
            for &(i, e) in g {
                if !(offset..offset + n).contains(&i) {
                    return false;
                }
                v[i - offset] += BigInt::from(e);
            }
            multiple_of(&wv, &v)
        }))
    }

    fn span_rule(&self, ws: &[Runs]) -> Option<BaseRule> {
        let rows: Vec<Vec<BigInt>> = ws.iter().map(|w| self.coords(w)).collect();
        let span = RowLattice::from_rows(self.n, rows);
        let n = self.n;
        let offset = self.offset;
        Some(Box::new(move |g: &Runs| {
            let mut v = vec![BigInt::zero(); n];
            for &(i, e) in g {
                if !(offset..offset + n).contains(&i) {
                    return false;
                }
                v[i - offset] += BigInt::from(e);
            }
            span.contains(&v)
        }))
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::catalog::build_group;
    use crate::subgroup::subgroup_of;

    #[test]
    fn doubling_map_on_the_line() {
        // ⟨Z, t | t⁻¹ x t = x²⟩ is BS(1,2) in ascending-HNN clothing.
        let g = build_group("asc-hnn:abelian:1:x^2").unwrap();
        assert!(g.equal(&g.parse("t^-1 x t").unwrap(), &g.parse("x^2").unwrap()));
        assert!(g.equal(&g.parse("t x^2 t^-1").unwrap(), &g.parse("x").unwrap()));
        let form = g.britton(&g.parse_runs("t x t^-1").unwrap()).unwrap();
        assert_eq!(form.t_length, 2);
    }

    #[test]
    fn plane_shear_with_doubling() {
        // φ(x) = x y, φ(y) = y²: det 2, image lattice spanned by (1,1),(0,2).
        let g = build_group("asc-hnn:abelian:2:x y; y^2").unwrap();
        assert!(g.equal(&g.parse("t^-1 x t").unwrap(), &g.parse("x y").unwrap()));
        assert!(g.equal(&g.parse("t^-1 y t").unwrap(), &g.parse("y^2").unwrap()));
        // x y³ = φ(x y): conjugating down recovers the preimage.
        assert!(g.equal(&g.parse("t x y^3 t^-1").unwrap(), &g.parse("x y").unwrap()));
        // x y² is outside the image lattice: no pinch.
        let form = g.britton(&g.parse_runs("t x y^2 t^-1").unwrap()).unwrap();
        assert_eq!(form.t_length, 2);
        let base = subgroup_of(&g, "base", None).unwrap();
        assert!(base.membership(&g.parse("t^-1 x^3 y t").unwrap()).is_yes());
        assert!(base.membership(&g.parse("t x t^-1").unwrap()).is_no());
    }

    #[test]
    fn singular_matrices_are_rejected() {
        assert!(build_group("asc-hnn:abelian:2:x y; x y").is_err());
        assert!(build_group("asc-hnn:abelian:2:1; y").is_err());
    }

    #[test]
    fn image_membership_and_inverse() {
        let base = AbelianImageBase::new(
            1,
            vec![
                vec![BigInt::from(1), BigInt::from(1)],
                vec![BigInt::from(0), BigInt::from(2)],
            ],
        )
        .unwrap();
        // (1,3) = (1,1) + (0,2): in the image, preimage (1,1).
        let h: Runs = vec![(1, 1), (2, 3)];
        assert!(base.in_image(&h));
        assert_eq!(base.phi_inv(&h), vec![(1, 1), (2, 1)]);
        // (1,2) = (1,1) + (0,1): not in the image.
        assert!(!base.in_image(&vec![(1, 1), (2, 2)]));
    }
}
