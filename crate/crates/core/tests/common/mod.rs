//! Independent reference routines for the integration tests: plain Gaussian
//! elimination on dense complex and real matrices, written without the
//! library's eigen/SVD-based nullspace code.
#![allow(dead_code)]

use mintwist::{ComplexMatrix, C64};

pub type Row = Vec<C64>;

/// Reduced row echelon form in place; returns pivot columns.
pub fn rref(rows: &mut [Row], ncols: usize, tol: f64) -> Vec<usize> {
    let mut pivots = Vec::new();
    let mut r = 0;
    for col in 0..ncols {
        if r == rows.len() {
            break;
        }
        let (best, mag) = (r..rows.len()).map(|i| (i, rows[i][col].norm())).fold((r, -1.0), |a, b| if b.1 > a.1 { b } else { a });
        if mag <= tol {
            continue;
        }
        rows.swap(r, best);
        let p = rows[r][col];
        for x in rows[r].iter_mut() {
            *x /= p;
        }
        for i in 0..rows.len() {
            if i != r {
                let f = rows[i][col];
                if f.norm() > 0.0 {
                    let pivot_row = rows[r].clone();
                    for (x, v) in rows[i].iter_mut().zip(&pivot_row) {
                        *x -= f * v;
                    }
                }
            }
        }
        pivots.push(col);
        r += 1;
    }
    pivots
}

/// Nullspace basis of the linear map whose matrix has the given rows.
pub fn null_basis(mut rows: Vec<Row>, ncols: usize, tol: f64) -> Vec<Row> {
    let pivots = rref(&mut rows, ncols, tol);
    let free: Vec<usize> = (0..ncols).filter(|c| !pivots.contains(c)).collect();
    free.iter()
        .map(|&f| {
            let mut v = vec![C64::new(0.0, 0.0); ncols];
            v[f] = C64::new(1.0, 0.0);
            for (r, &p) in pivots.iter().enumerate() {
                v[p] = -rows[r][f];
            }
            v
        })
        .collect()
}

/// Rows of the matrix of `X ↦ f(X)` on `n×n` complex matrices, unknowns
/// being the entries of `X` in column-major order, outputs stacked likewise.
pub fn complex_linear_rows(n: usize, maps: &[&dyn Fn(&ComplexMatrix) -> ComplexMatrix]) -> Vec<Row> {
    let cols: Vec<Vec<C64>> = (0..n * n)
        .map(|k| {
            let mut e = ComplexMatrix::zeros(n, n);
            e[(k % n, k / n)] = C64::new(1.0, 0.0);
            maps.iter().flat_map(|f| {
                let y = f(&e);
                (0..n * n).map(move |q| y[(q % n, q / n)])
            }).collect()
        })
        .collect();
    let nrows = cols[0].len();
    (0..nrows).map(|r| cols.iter().map(|c| c[r]).collect()).collect()
}

/// Same for a real-linear map, unknowns `(Re X, Im X)` and outputs split into
/// real and imaginary parts. Entries of the returned rows are real.
pub fn real_linear_rows(n: usize, f: &dyn Fn(&ComplexMatrix) -> ComplexMatrix) -> Vec<Row> {
    let mut cols = Vec::new();
    for part in [C64::new(1.0, 0.0), C64::new(0.0, 1.0)] {
        for k in 0..n * n {
            let mut e = ComplexMatrix::zeros(n, n);
            e[(k % n, k / n)] = part;
            let y = f(&e);
            let mut col: Vec<C64> = (0..n * n).map(|q| C64::new(y[(q % n, q / n)].re, 0.0)).collect();
            col.extend((0..n * n).map(|q| C64::new(y[(q % n, q / n)].im, 0.0)));
            cols.push(col);
        }
    }
    let nrows = cols[0].len();
    (0..nrows).map(|r| cols.iter().map(|c| c[r]).collect()).collect()
}

pub fn unvec(n: usize, v: &[C64]) -> ComplexMatrix {
    ComplexMatrix::from_fn(n, n, |i, j| v[j * n + i])
}

/// Determinant by elimination with partial pivoting.
pub fn det(m: &ComplexMatrix) -> C64 {
    let n = m.rows();
    let mut a: Vec<Row> = (0..n).map(|i| (0..n).map(|j| m[(i, j)]).collect()).collect();
    let mut d = C64::new(1.0, 0.0);
    for col in 0..n {
        let best = (col..n).max_by(|&x, &y| a[x][col].norm().total_cmp(&a[y][col].norm())).unwrap();
        if a[best][col].norm() == 0.0 {
            return C64::new(0.0, 0.0);
        }
        if best != col {
            a.swap(best, col);
            d = -d;
        }
        d *= a[col][col];
        for i in col + 1..n {
            let f = a[i][col] / a[col][col];
            let pivot_row = a[col].clone();
            for (x, v) in a[i][col..].iter_mut().zip(&pivot_row[col..]) {
                *x -= f * v;
            }
        }
    }
    d
}

pub fn seeded_vec(rng: &mut impl rand::Rng, n: usize) -> Vec<C64> {
    (0..n).map(|_| C64::new(rng.random_range(-1.0..1.0), rng.random_range(-1.0..1.0))).collect()
}

pub fn seeded_matrix(rng: &mut impl rand::Rng, n: usize) -> ComplexMatrix {
    ComplexMatrix::from_fn(n, n, |_, _| C64::new(rng.random_range(-1.0..1.0), rng.random_range(-1.0..1.0)))
}

/// Real dimension of `{X : X†R + RX = 0}` by elimination.
pub fn unitary_oracle(r: &ComplexMatrix) -> usize {
    let n = r.rows();
    let f = |x: &ComplexMatrix| &(&x.adjoint() * r) + &(r * x);
    null_basis(real_linear_rows(n, &f), 2 * n * n, 1e-9).len()
}
