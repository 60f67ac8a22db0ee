//! Dense matrices over an exact field: row reduction, rank, kernel, solve.



use super::scalar::{Scalar, Q};

#[derive(Clone, PartialEq, Eq, Debug)]
pub struct Matrix<F: Scalar = Q> {
    rows: usize,
    cols: usize,
    data: Vec<F>,
}

/// Reduced row echelon form together with its pivot columns.
#[derive(Clone, Debug)]
pub struct Echelon<F: Scalar> {
    pub reduced: Matrix<F>,
    pub pivots: Vec<usize>,
}

impl<F: Scalar> Matrix<F> {
    pub fn zeros(rows: usize, cols: usize) -> Self {
        Matrix { rows, cols, data: vec![F::zero(); rows * cols] }
    }

    pub fn identity(n: usize) -> Self {
        let mut m = Matrix::zeros(n, n);
        for i in 0..n {
            m.set(i, i, F::one());
        }
        m
    }

    pub fn from_rows(rows: Vec<Vec<F>>) -> Self {
        let r = rows.len();
        let c = rows.first().map_or(0, |row| row.len());
        assert!(rows.iter().all(|row| row.len() == c), "ragged matrix");
        Matrix { rows: r, cols: c, data: rows.into_iter().flatten().collect() }
    }

    pub fn rows(&self) -> usize {
        self.rows
    }

    pub fn cols(&self) -> usize {
        self.cols
    }

    pub fn get(&self, r: usize, c: usize) -> &F {
        &self.data[r * self.cols + c]
    }

    pub fn set(&mut self, r: usize, c: usize, v: F) {
        self.data[r * self.cols + c] = v;
    }

    pub fn row(&self, r: usize) -> &[F] {
        &self.data[r * self.cols..(r + 1) * self.cols]
    }

    pub fn push_row(&mut self, row: Vec<F>) {
        if self.rows == 0 && self.cols == 0 {
            self.cols = row.len();
        }
        assert_eq!(row.len(), self.cols, "row length mismatch");
        self.data.extend(row);
        self.rows += 1;
    }

    pub fn mul_vec(&self, v: &[F]) -> Vec<F> {
        assert_eq!(v.len(), self.cols);
        (0..self.rows)
            .map(|r| {
                self.row(r)
                    .iter()
                    .zip(v)
                    .fold(F::zero(), |acc, (a, b)| acc + a.clone() * b.clone())
            })
            .collect()
    }

    /// Gauss-Jordan elimination. Pivot rule: for each column left to right,
    /// the first row at or below the current pivot row with a nonzero entry.
    pub fn echelon(&self) -> Echelon<F> {
        let mut m = self.clone();
        let mut pivots = Vec::new();
        let mut pr = 0;
        for c in 0..m.cols {
            if pr == m.rows {
                break;
            }
            let Some(src) = (pr..m.rows).find(|&r| !m.get(r, c).is_zero()) else {
                continue;
            };
            m.swap_rows(pr, src);
            let inv = m.get(pr, c).inv().expect("nonzero pivot");
            for k in c..m.cols {
                let v = m.get(pr, k).clone() * inv.clone();
                m.set(pr, k, v);
            }
            for r in 0..m.rows {
                if r == pr {
                    continue;
                }
                let f = m.get(r, c).clone();
                if f.is_zero() {
                    continue;
                }
                for k in c..m.cols {
                    let v = m.get(r, k).clone() - f.clone() * m.get(pr, k).clone();
                    m.set(r, k, v);
                }
            }
            pivots.push(c);
            pr += 1;
        }
        Echelon { reduced: m, pivots }
    }

    fn swap_rows(&mut self, a: usize, b: usize) {
        if a == b {
            return;
        }
        for k in 0..self.cols {
            self.data.swap(a * self.cols + k, b * self.cols + k);
        }
    }

    pub fn rank(&self) -> usize {
        self.echelon().pivots.len()
    }

    /// Basis of the right null space, one vector per free column, each with
    /// a 1 in its free column. Size is `cols - rank`.
    pub fn kernel_basis(&self) -> Vec<Vec<F>> {
        let Echelon { reduced, pivots } = self.echelon();
        let free: Vec<usize> = (0..self.cols).filter(|c| !pivots.contains(c)).collect();
        free.iter()
            .map(|&f| {
                let mut v = vec![F::zero(); self.cols];
                v[f] = F::one();
                for (r, &p) in pivots.iter().enumerate() {
                    v[p] = -reduced.get(r, f).clone();
                }
                v
            })
            .collect()
    }

    /// A solution of `self · x = b` with every free variable set to zero,
    /// or `None` when the system is inconsistent.
    pub fn solve(&self, b: &[F]) -> Option<Vec<F>> {
        assert_eq!(b.len(), self.rows);
        let mut aug = Matrix::zeros(self.rows, self.cols + 1);
        for r in 0..self.rows {
            for c in 0..self.cols {
                aug.set(r, c, self.get(r, c).clone());
            }
            aug.set(r, self.cols, b[r].clone());
        }
        let Echelon { reduced, pivots } = aug.echelon();
        if pivots.last() == Some(&self.cols) {
            return None;
        }
        let mut x = vec![F::zero(); self.cols];
        for (r, &p) in pivots.iter().enumerate() {
            x[p] = reduced.get(r, self.cols).clone();
        }
        Some(x)
    }

    pub fn transpose(&self) -> Self {
        let mut t = Matrix::zeros(self.cols, self.rows);
        for r in 0..self.rows {
            for c in 0..self.cols {
                t.set(c, r, self.get(r, c).clone());
            }
        }
        t
    }
}

/// Reusable solver for `A x = b` with a fixed `A`: records the row operations
/// of one elimination so each new right-hand side costs a single pass.
#[derive(Clone, Debug)]
pub struct PreparedSolver<F: Scalar> {
    cols: usize,
    /// Row operations bringing `A` to reduced echelon form.
    transform: Matrix<F>,
    pivots: Vec<usize>,
}

impl<F: Scalar> PreparedSolver<F> {
    pub fn new(a: &Matrix<F>) -> Self {
        let mut aug = Matrix::zeros(a.rows, a.cols + a.rows);
        for r in 0..a.rows {
            for c in 0..a.cols {
                aug.set(r, c, a.get(r, c).clone());
            }
            aug.set(r, a.cols + r, F::one());
        }
        // Pivot only inside the original block.
        let mut m = aug;
        let mut pivots = Vec::new();
        let mut pr = 0;
        for c in 0..a.cols {
            if pr == m.rows {
                break;
            }
            let Some(src) = (pr..m.rows).find(|&r| !m.get(r, c).is_zero()) else {
                continue;
            };
            m.swap_rows(pr, src);
            let inv = m.get(pr, c).inv().expect("nonzero pivot");
            for k in 0..m.cols {
                let v = m.get(pr, k).clone() * inv.clone();
                m.set(pr, k, v);
            }
            for r in 0..m.rows {
                if r == pr {
                    continue;
                }
                let f = m.get(r, c).clone();
                if f.is_zero() {
                    continue;
                }
                for k in 0..m.cols {
                    let v = m.get(r, k).clone() - f.clone() * m.get(pr, k).clone();
                    m.set(r, k, v);
                }
            }
            pivots.push(c);
            pr += 1;
        }
        let mut transform = Matrix::zeros(a.rows, a.rows);
        for r in 0..a.rows {
            for c in 0..a.rows {
                transform.set(r, c, m.get(r, a.cols + c).clone());
            }
        }
        PreparedSolver { cols: a.cols, transform, pivots }
    }

    pub fn rank(&self) -> usize {
        self.pivots.len()
    }

    pub fn solve(&self, b: &[F]) -> Option<Vec<F>> {
        let tb = self.transform.mul_vec(b);
        if tb[self.pivots.len()..].iter().any(|v| !v.is_zero()) {
            return None;
        }
        let mut x = vec![F::zero(); self.cols];
        for (r, &p) in self.pivots.iter().enumerate() {
            x[p] = tb[r].clone();
        }
        Some(x)
    }
}

/// Right null space basis; `cols - rank` vectors.
pub fn kernel_basis<F: Scalar>(m: &Matrix<F>) -> Vec<Vec<F>> {
    m.kernel_basis()
}

/// True when `v` is a nonzero scalar multiple of `w`.
pub fn proportional<F: Scalar>(v: &[F], w: &[F]) -> bool {
    assert_eq!(v.len(), w.len());
    let Some(k) = w.iter().position(|c| !c.is_zero()) else {
        return false;
    };
    if v[k].is_zero() {
        return false;
    }
    let ratio = v[k].div(&w[k]).expect("nonzero");
    v.iter().zip(w).all(|(a, b)| *a == ratio.clone() * b.clone())
}
