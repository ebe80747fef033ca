//! Exact linear algebra: dense Gaussian elimination over the scalar field
//! and a sparse incremental solver over the rationals for the large
//! recursion systems.

use std::collections::BTreeMap;

use num_traits::Zero;

use crate::scalar::{Rational, Scalar};

/// Reduces `rows` (in place) to reduced row echelon form; returns the pivot
/// column of each nonzero row, in order.
#[allow(clippy::needless_range_loop)] // simultaneous pivot-row reads and target-row writes
pub fn rref(rows: &mut Vec<Vec<Scalar>>) -> Vec<usize> {
    let nrows = rows.len();
    if nrows == 0 {
        return Vec::new();
    }
    let ncols = rows[0].len();
    let mut pivots = Vec::new();
    let mut r = 0;
    for c in 0..ncols {
        let Some(p) = (r..nrows).find(|&i| !rows[i][c].is_zero()) else {
            continue;
        };
        rows.swap(r, p);
        let inv = rows[r][c].inv().expect("pivot nonzero");
        for x in rows[r].iter_mut() {
            *x = &*x * &inv;
        }
        for i in 0..nrows {
            if i != r && !rows[i][c].is_zero() {
                let factor = rows[i][c].clone();
                for j in 0..ncols {
                    let t = &rows[r][j] * &factor;
                    rows[i][j] = &rows[i][j] - &t;
                }
            }
        }
        pivots.push(c);
        r += 1;
        if r == nrows {
            break;
        }
    }
    rows.retain(|row| row.iter().any(|x| !x.is_zero()));
    pivots
}

pub fn rank(rows: Vec<Vec<Scalar>>) -> usize {
    let mut rows = rows;
    rref(&mut rows).len()
}

/// Whether `a x = b` admits a solution (exact feasibility test).
pub fn is_feasible(a: &[Vec<Scalar>], b: &[Scalar]) -> bool {
    let plain = a.to_vec();
    let augmented: Vec<Vec<Scalar>> = a
        .iter()
        .zip(b)
        .map(|(row, rhs)| {
            let mut r = row.clone();
            r.push(rhs.clone());
            r
        })
        .collect();
    rank(plain) == rank(augmented)
}

/// Basis of the nullspace of `a` (columns = unknowns).
pub fn nullspace(a: &[Vec<Scalar>], ncols: usize) -> Vec<Vec<Scalar>> {
    let mut rows = a.to_vec();
    let pivots = rref(&mut rows);
    let free: Vec<usize> = (0..ncols).filter(|c| !pivots.contains(c)).collect();
    let mut out = Vec::new();
    for &f in &free {
        let mut v = vec![Scalar::zero(); ncols];
        v[f] = Scalar::one();
        for (r, &p) in pivots.iter().enumerate() {
            v[p] = -&rows[r][f];
        }
        out.push(v);
    }
    out
}

/// Affine expression `constant + sum coeff * x_free` over free variables.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct AffineExpr {
    pub constant: Rational,
    pub free: BTreeMap<usize, Rational>,
}

impl AffineExpr {
    pub fn is_determined(&self) -> bool {
        self.free.is_empty()
    }
}

/// Incremental exact solver for sparse rational linear systems.
///
/// Each inserted equation is reduced against the pivots found so far; the
/// first remaining variable becomes its pivot.  Queries substitute through
/// the pivot rows (insertion order is strictly increasing along the
/// substitution chain, so recursion terminates).
#[derive(Debug, Default)]
pub struct SparseSolver {
    // pivot var -> (coefficients over non-pivot-at-insertion vars, rhs)
    rows: BTreeMap<usize, (BTreeMap<usize, Rational>, Rational)>,
    inconsistent: bool,
}

impl SparseSolver {
    pub fn new() -> Self {
        Self::default()
    }

    pub fn is_consistent(&self) -> bool {
        !self.inconsistent
    }

    /// Inserts `sum coeffs * x = rhs`.
    pub fn insert(&mut self, coeffs: BTreeMap<usize, Rational>, rhs: Rational) {
        if self.inconsistent {
            return;
        }
        let mut row: BTreeMap<usize, Rational> =
            coeffs.into_iter().filter(|(_, c)| !c.is_zero()).collect();
        let mut rhs = rhs;
        // Reduce against existing pivots until the row only mentions
        // non-pivot variables.
        #[allow(clippy::while_let_loop)] // the find() borrow must end before the body mutates
        loop {
            let Some(&v) = row.keys().find(|v| self.rows.contains_key(v)) else {
                break;
            };
            let c = row.remove(&v).expect("key present");
            let (pivot_coeffs, pivot_rhs) = self.rows.get(&v).expect("pivot present");
            // x_v = pivot_rhs - sum pivot_coeffs * x_j
            rhs -= &c * pivot_rhs;
            for (j, pc) in pivot_coeffs.clone() {
                let entry = row.entry(j).or_insert_with(Rational::zero);
                *entry -= &c * &pc;
                if entry.is_zero() {
                    row.remove(&j);
                }
            }
        }
        match row.pop_first() {
            None => {
                if !rhs.is_zero() {
                    self.inconsistent = true;
                }
            }
            Some((pivot, c)) => {
                let inv = c.recip();
                let coeffs: BTreeMap<usize, Rational> =
                    row.into_iter().map(|(j, cj)| (j, cj * &inv)).collect();
                self.rows.insert(pivot, (coeffs, rhs * inv));
            }
        }
    }

    /// Resolves a variable to an affine expression over free variables.
    pub fn resolve(&self, var: usize) -> AffineExpr {
        let mut memo: BTreeMap<usize, AffineExpr> = BTreeMap::new();
        self.resolve_memo(var, &mut memo)
    }

    fn resolve_memo(&self, var: usize, memo: &mut BTreeMap<usize, AffineExpr>) -> AffineExpr {
        if let Some(e) = memo.get(&var) {
            return e.clone();
        }
        let expr = match self.rows.get(&var) {
            None => {
                let mut free = BTreeMap::new();
                free.insert(var, Rational::from_integer(1.into()));
                AffineExpr { constant: Rational::zero(), free }
            }
            Some((coeffs, rhs)) => {
                // x_var = rhs - sum coeffs * x_j
                let mut constant = rhs.clone();
                let mut free: BTreeMap<usize, Rational> = BTreeMap::new();
                for (j, c) in coeffs.clone() {
                    let sub = self.resolve_memo(j, memo);
                    constant -= &c * &sub.constant;
                    for (fv, fc) in sub.free {
                        let entry = free.entry(fv).or_insert_with(Rational::zero);
                        *entry -= &c * &fc;
                        if entry.is_zero() {
                            free.remove(&fv);
                        }
                    }
                }
                AffineExpr { constant, free }
            }
        };
        memo.insert(var, expr.clone());
        expr
    }

    /// Resolves many variables sharing one memo table.
    pub fn resolve_all(
        &self,
        vars: impl IntoIterator<Item = usize>,
    ) -> BTreeMap<usize, AffineExpr> {
        let mut memo = BTreeMap::new();
        vars.into_iter()
            .map(|v| {
                let e = self.resolve_memo(v, &mut memo);
                (v, e)
            })
            .collect()
    }
}

/// Rank over `Q` of a small dense set of rational rows.
#[allow(clippy::needless_range_loop)]
pub fn rational_rank(mut rows: Vec<Vec<Rational>>) -> usize {
    let nrows = rows.len();
    if nrows == 0 {
        return 0;
    }
    let ncols = rows[0].len();
    let mut rank = 0;
    for c in 0..ncols {
        let Some(p) = (rank..nrows).find(|&i| !rows[i][c].is_zero()) else {
            continue;
        };
        rows.swap(rank, p);
        let inv = rows[rank][c].clone().recip();
        for x in rows[rank].iter_mut() {
            *x *= &inv;
        }
        for i in 0..nrows {
            if i != rank && !rows[i][c].is_zero() {
                let f = rows[i][c].clone();
                for j in 0..ncols {
                    let t = &rows[rank][j] * &f;
                    rows[i][j] -= t;
                }
            }
        }
        rank += 1;
        if rank == nrows {
            break;
        }
    }
    rank
}
