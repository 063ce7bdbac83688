//! Exact Gaussian elimination over a field.

use super::Scalar;

/// Reduces `m` to reduced row echelon form in place and returns the pivot
/// columns.
pub fn rref<T: Scalar>(m: &mut [Vec<T>]) -> Vec<usize> {
    let rows = m.len();
    let cols = m.first().map_or(0, Vec::len);
    let mut pivots = Vec::new();
    let mut r = 0;
    for c in 0..cols {
        if r == rows {
            break;
        }
        let Some(p) = (r..rows).find(|&i| !m[i][c].is_zero()) else {
            continue;
        };
        m.swap(r, p);
        let inv = T::one() / m[r][c].clone();
        for x in m[r].iter_mut() {
            *x = x.clone() * inv.clone();
        }
        for i in 0..rows {
            if i != r && !m[i][c].is_zero() {
                let f = m[i][c].clone();
                for j in 0..cols {
                    let v = m[r][j].clone() * f.clone();
                    m[i][j] = m[i][j].clone() - v;
                }
            }
        }
        pivots.push(c);
        r += 1;
    }
    pivots
}

/// Basis of the right null space of `m`.
pub fn nullspace<T: Scalar>(mut m: Vec<Vec<T>>, cols: usize) -> Vec<Vec<T>> {
    let pivots = rref(&mut m);
    let free: Vec<usize> = (0..cols).filter(|c| !pivots.contains(c)).collect();
    free.iter()
        .map(|&f| {
            let mut v = vec![T::zero(); cols];
            v[f] = T::one();
            for (r, &p) in pivots.iter().enumerate() {
                v[p] = -m[r][f].clone();
            }
            v
        })
        .collect()
}

/// Dimension of the affine span of `pts`, or `-1` when empty.
pub fn affine_dim<T: Scalar>(pts: &[&[T]]) -> isize {
    let Some(first) = pts.first() else {
        return -1;
    };
    let mut m: Vec<Vec<T>> =
        pts[1..].iter().map(|p| p.iter().zip(first.iter()).map(|(a, b)| a.clone() - b.clone()).collect()).collect();
    rref(&mut m).len() as isize
}

/// The affine function `x ↦ g·x + c` taking value `vals[i]` at `pts[i]`.
/// `Err(())` if the points do not affinely span their space, `Ok(None)` if
/// no affine function interpolates the values.
#[allow(clippy::result_unit_err)]
pub fn affine_interpolant<T: Scalar>(pts: &[&[T]], vals: &[T]) -> Result<Option<Vec<T>>, ()> {
    let d = pts.first().map_or(0, |p| p.len());
    let mut m: Vec<Vec<T>> = pts
        .iter()
        .zip(vals)
        .map(|(p, v)| p.iter().cloned().chain([T::one(), v.clone()]).collect())
        .collect();
    let pivots = rref(&mut m);
    if pivots.iter().filter(|&&c| c <= d).count() < d + 1 {
        return Err(());
    }
    if pivots.contains(&(d + 1)) {
        return Ok(None);
    }
    Ok(Some((0..=d).map(|i| m[i][d + 1].clone()).collect()))
}

/// Evaluates `g·x + c` for coefficients `[g.., c]`.
pub fn eval_affine<T: Scalar>(coef: &[T], x: &[T]) -> T {
    let d = x.len();
    x.iter().zip(coef).fold(coef[d].clone(), |acc, (a, b)| acc + a.clone() * b.clone())
}

#[cfg(test)]
mod tests {
    use super::*;
    use num_rational::BigRational;

    fn q(a: i64) -> BigRational {
        BigRational::from_integer(a.into())
    }

    #[test]
    fn interpolation() {
        let pts = [vec![q(0), q(0)], vec![q(1), q(0)], vec![q(0), q(1)], vec![q(1), q(1)]];
        let refs: Vec<&[BigRational]> = pts.iter().map(|p| p.as_slice()).collect();
        let coef = affine_interpolant(&refs, &[q(1), q(3), q(4), q(6)]).unwrap().unwrap();
        assert_eq!(coef, vec![q(2), q(3), q(1)]);
        assert_eq!(affine_interpolant(&refs, &[q(1), q(3), q(4), q(7)]), Ok(None));
        assert_eq!(affine_interpolant(&refs[..2], &[q(0), q(0)]), Err(()));
        assert_eq!(affine_dim(&refs), 2);
        assert_eq!(affine_dim(&refs[..2]), 1);
    }

    #[test]
    fn kernel() {
        let m = vec![vec![q(1), q(2), q(3)], vec![q(2), q(4), q(6)]];
        let ns = nullspace(m.clone(), 3);
        assert_eq!(ns.len(), 2);
        for v in ns {
            for row in &m {
                let s = row.iter().zip(&v).fold(q(0), |a, (x, y)| a + x * y);
                assert_eq!(s, q(0));
            }
        }
    }
}
