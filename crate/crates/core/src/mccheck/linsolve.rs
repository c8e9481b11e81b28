use crate::scalar::Scalar;

/// Solves `a x = b` by Gaussian elimination with partial pivoting.
///
/// Exact scalars pivot on the first nonzero entry of the column; inexact
/// ones on the entry of largest magnitude. Returns `None` for singular
/// systems.
pub fn solve_dense<C: Scalar>(mut a: Vec<Vec<C>>, mut b: Vec<C>) -> Option<Vec<C>> {
    let n = b.len();
    debug_assert!(a.len() == n && a.iter().all(|row| row.len() == n));
    for col in 0..n {
        let pivot = if C::EXACT {
            (col..n).find(|&r| !a[r][col].is_zero())?
        } else {
            let p = (col..n).max_by(|&r, &s| {
                a[r][col]
                    .abs()
                    .partial_cmp(&a[s][col].abs())
                    .unwrap_or(std::cmp::Ordering::Equal)
            })?;
            if a[p][col].is_negligible() {
                return None;
            }
            p
        };
        a.swap(col, pivot);
        b.swap(col, pivot);
        let inv = C::one() / a[col][col].clone();
        for r in col + 1..n {
            if a[r][col].is_zero() {
                continue;
            }
            let factor = a[r][col].clone() * inv.clone();
            let (upper, lower) = a.split_at_mut(r);
            let pivot_row = &upper[col];
            let row = &mut lower[0];
            for k in col..n {
                if !pivot_row[k].is_zero() {
                    row[k] = row[k].clone() - factor.clone() * pivot_row[k].clone();
                }
            }
            b[r] = b[r].clone() - factor * b[col].clone();
        }
    }
    let mut x = vec![C::zero(); n];
    for r in (0..n).rev() {
        let mut acc = b[r].clone();
        for k in r + 1..n {
            if !a[r][k].is_zero() {
                acc = acc - a[r][k].clone() * x[k].clone();
            }
        }
        x[r] = acc / a[r][r].clone();
    }
    Some(x)
}
