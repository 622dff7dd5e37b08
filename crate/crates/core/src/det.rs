//! Exact determinants of polynomial matrices.

use crate::ring::Poly;

/// Matrices up to this size use memoized cofactor expansion; larger ones use
/// fraction-free Bareiss elimination.
pub const COFACTOR_MAX: usize = 12;

/// Determinant of a square matrix of polynomials sharing one variable space.
pub fn determinant(m: &[Vec<Poly>], nvars: usize) -> Poly {
    if m.len() <= COFACTOR_MAX {
        det_cofactor(m, nvars)
    } else {
        det_bareiss(m, nvars)
    }
}

/// Laplace expansion along rows, memoized over column subsets: `minor[mask]`
/// is the determinant of the leading `popcount(mask)` rows restricted to the
/// columns in `mask`.
pub fn det_cofactor(m: &[Vec<Poly>], nvars: usize) -> Poly {
    let n = m.len();
    if n == 0 {
        return Poly::one(nvars);
    }
    assert!(n < usize::BITS as usize, "matrix too large for cofactor expansion");
    assert!(m.iter().all(|r| r.len() == n), "matrix is not square");
    let full = (1usize << n) - 1;
    let mut minor: Vec<Option<Poly>> = vec![None; 1 << n];
    minor[0] = Some(Poly::one(nvars));
    // masks in increasing popcount order are produced naturally by numeric order
    for mask in 1..=full {
        let row = mask.count_ones() as usize - 1;
        let mut acc = Poly::zero(nvars);
        let mut above = 0usize; // columns in mask to the right of c
        for c in (0..n).rev() {
            if mask & (1 << c) == 0 {
                continue;
            }
            let entry = &m[row][c];
            if !entry.is_zero() {
                if let Some(sub) = &minor[mask & !(1 << c)] {
                    let t = entry * sub;
                    acc = if above.is_multiple_of(2) { &acc + &t } else { &acc - &t };
                }
            }
            above += 1;
        }
        if !acc.is_zero() {
            minor[mask] = Some(acc);
        }
    }
    minor[full].take().unwrap_or_else(|| Poly::zero(nvars))
}

/// Fraction-free Bareiss elimination with row pivoting. Every division is
/// exact in the polynomial ring.
pub fn det_bareiss(m: &[Vec<Poly>], nvars: usize) -> Poly {
    let n = m.len();
    if n == 0 {
        return Poly::one(nvars);
    }
    let mut a: Vec<Vec<Poly>> = m.to_vec();
    let mut negate = false;
    let mut prev = Poly::one(nvars);
    for k in 0..n - 1 {
        if a[k][k].is_zero() {
            match (k + 1..n).find(|&r| !a[r][k].is_zero()) {
                Some(r) => {
                    a.swap(k, r);
                    negate = !negate;
                }
                None => return Poly::zero(nvars),
            }
        }
        for i in k + 1..n {
            for j in k + 1..n {
                let num = &(&a[k][k] * &a[i][j]) - &(&a[i][k] * &a[k][j]);
                a[i][j] = num.div_exact(&prev).expect("Bareiss step must divide exactly");
            }
            a[i][k] = Poly::zero(nvars);
        }
        prev = a[k][k].clone();
    }
    let det = a[n - 1][n - 1].clone();
    if negate {
        -det
    } else {
        det
    }
}
