//! Exact solver for tiny linear programs over the probability simplex.
//!
//! Minimizes `p^T x` subject to `1^T x = 1`, `x >= 0` and `c_m^T x <= b_m`
//! by enumerating basic feasible solutions. A vertex of this polytope has
//! at most `k + 1` nonzero coordinates when `k` inequality rows are tight,
//! so we try every set of `k` tight rows against every support of size
//! `k + 1`, solve the square system, and keep the best feasible point.
//! The cost is combinatorial in the number of actions and rows, which is
//! fine for the handful of routes and budgets a player has.

/// Optimal point of a simplex LP.
#[derive(Debug, Clone, PartialEq)]
pub struct LpSolution {
    pub value: f64,
    pub x: Vec<f64>,
}

/// One inequality row `coefficients^T x <= bound`.
#[derive(Debug, Clone, Copy)]
pub struct LpRow<'a> {
    pub coefficients: &'a [f64],
    pub bound: f64,
}

const PIVOT_TOL: f64 = 1e-12;
const FEAS_TOL: f64 = 1e-11;

/// Returns `None` when no point of the simplex satisfies every row.
pub fn minimize_over_simplex(cost: &[f64], rows: &[LpRow<'_>]) -> Option<LpSolution> {
    let n = cost.len();
    if n == 0 {
        return None;
    }
    let mut best: Option<LpSolution> = None;
    let max_tight = rows.len().min(n - 1);
    for k in 0..=max_tight {
        for tight in Combinations::new(rows.len(), k) {
            for support in Combinations::new(n, k + 1) {
                let Some(x) = basic_solution(n, rows, &tight, &support) else {
                    continue;
                };
                if !feasible(&x, rows) {
                    continue;
                }
                let value = dot(cost, &x);
                if best.as_ref().is_none_or(|b| value < b.value) {
                    best = Some(LpSolution { value, x });
                }
            }
        }
    }
    best
}

fn basic_solution(n: usize, rows: &[LpRow<'_>], tight: &[usize], support: &[usize]) -> Option<Vec<f64>> {
    let size = support.len();
    // Row 0 is the simplex equality, rows 1.. the tight inequalities.
    let mut a = vec![vec![0.0; size + 1]; size];
    for (col, _) in support.iter().enumerate() {
        a[0][col] = 1.0;
    }
    a[0][size] = 1.0;
    for (r, &m) in tight.iter().enumerate() {
        for (col, &j) in support.iter().enumerate() {
            a[r + 1][col] = rows[m].coefficients[j];
        }
        a[r + 1][size] = rows[m].bound;
    }
    let sol = solve_dense(a)?;
    if sol.iter().any(|&v| v < -FEAS_TOL) {
        return None;
    }
    let mut x = vec![0.0; n];
    for (&j, &v) in support.iter().zip(&sol) {
        x[j] = v.max(0.0);
    }
    let total: f64 = x.iter().sum();
    if total <= 0.0 {
        return None;
    }
    x.iter_mut().for_each(|v| *v /= total);
    Some(x)
}

fn feasible(x: &[f64], rows: &[LpRow<'_>]) -> bool {
    rows.iter().all(|r| {
        let scale = 1.0 + r.bound.abs() + r.coefficients.iter().map(|c| c.abs()).sum::<f64>();
        dot(r.coefficients, x) - r.bound <= FEAS_TOL * scale
    })
}

fn dot(a: &[f64], b: &[f64]) -> f64 {
    a.iter().zip(b).map(|(x, y)| x * y).sum()
}

/// Gaussian elimination with partial pivoting on an augmented square system.
fn solve_dense(mut a: Vec<Vec<f64>>) -> Option<Vec<f64>> {
    let n = a.len();
    let scale = a
        .iter()
        .flat_map(|row| row[..n].iter())
        .fold(0.0f64, |m, v| m.max(v.abs()))
        .max(1.0);
    for col in 0..n {
        let pivot = (col..n).max_by(|&i, &j| a[i][col].abs().total_cmp(&a[j][col].abs()))?;
        if a[pivot][col].abs() <= PIVOT_TOL * scale {
            return None;
        }
        a.swap(col, pivot);
        for row in col + 1..n {
            let factor = a[row][col] / a[col][col];
            if factor != 0.0 {
                for k in col..=n {
                    a[row][k] -= factor * a[col][k];
                }
            }
        }
    }
    let mut x = vec![0.0; n];
    for row in (0..n).rev() {
        let tail: f64 = (row + 1..n).map(|k| a[row][k] * x[k]).sum();
        x[row] = (a[row][n] - tail) / a[row][row];
    }
    Some(x)
}

/// Lexicographic `k`-subsets of `0..n`.
struct Combinations {
    n: usize,
    current: Option<Vec<usize>>,
}

impl Combinations {
    fn new(n: usize, k: usize) -> Self {
        let current = (k <= n).then(|| (0..k).collect());
        Self { n, current }
    }
}

impl Iterator for Combinations {
    type Item = Vec<usize>;

    fn next(&mut self) -> Option<Vec<usize>> {
        let out = self.current.clone()?;
        let k = out.len();
        let mut next = out.clone();
        let mut i = k;
        loop {
            if i == 0 {
                self.current = None;
                break;
            }
            i -= 1;
            if next[i] < self.n - k + i {
                next[i] += 1;
                for j in i + 1..k {
                    next[j] = next[j - 1] + 1;
                }
                self.current = Some(next);
                break;
            }
        }
        Some(out)
    }
}
