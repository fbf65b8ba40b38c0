use crate::error::{Error, Result};

/// Euclidean projection onto the probability simplex.
///
/// Sort-and-threshold rule: with `u` sorted descending, `rho` is the largest
/// `k` with `u_k > (sum_{j<=k} u_j - 1) / k`, and the result is
/// `max(v - theta, 0)` for `theta = (sum_{j<=rho} u_j - 1) / rho`. The output
/// is renormalized so it sums to one in floating point.
pub fn project_simplex(v: &[f64]) -> Result<Vec<f64>> {
    if v.is_empty() {
        return Err(Error::InvalidInstance("cannot project an empty vector".into()));
    }
    if v.iter().any(|x| !x.is_finite()) {
        return Err(Error::NonFinite("projection input"));
    }
    let mut sorted = v.to_vec();
    sorted.sort_by(|a, b| b.total_cmp(a));

    let mut cumulative = 0.0;
    let mut theta = 0.0;
    for (k, &u) in sorted.iter().enumerate() {
        cumulative += u;
        let candidate = (cumulative - 1.0) / (k + 1) as f64;
        if u > candidate {
            theta = candidate;
        }
    }

    let mut p: Vec<f64> = v.iter().map(|&x| (x - theta).max(0.0)).collect();
    let total: f64 = p.iter().sum();
    if total > 0.0 {
        p.iter_mut().for_each(|x| *x /= total);
    } else {
        // Only reachable through catastrophic cancellation; fall back to the argmax vertex.
        let top = v
            .iter()
            .enumerate()
            .max_by(|a, b| a.1.total_cmp(b.1))
            .map(|(i, _)| i)
            .unwrap_or(0);
        p.iter_mut().for_each(|x| *x = 0.0);
        p[top] = 1.0;
    }
    Ok(p)
}

#[cfg(test)]
mod tests {
    use super::*;
    use proptest::prelude::*;

    #[test]
    fn examples() {
        assert_eq!(project_simplex(&[0.5, 0.5]).unwrap(), vec![0.5, 0.5]);
        let p = project_simplex(&[2.0, 2.0, 2.0]).unwrap();
        assert!(p.iter().all(|&x| (x - 1.0 / 3.0).abs() < 1e-15));
        assert_eq!(project_simplex(&[1.2, -0.2]).unwrap(), vec![1.0, 0.0]);
        assert!(project_simplex(&[f64::INFINITY, 0.0]).is_err());
        assert!(project_simplex(&[]).is_err());
    }

    #[test]
    fn two_dimensional_projection_matches_grid() {
        // (1.2, -0.2) against a 1e-3 grid on the segment.
        let v = [1.2, -0.2];
        let p = project_simplex(&v).unwrap();
        let dist = |a: f64| (a - v[0]).powi(2) + (1.0 - a - v[1]).powi(2);
        let grid = (0..=1000).map(|k| dist(k as f64 / 1000.0)).fold(f64::INFINITY, f64::min);
        assert!(dist(p[0]) <= grid + 1e-15);
    }

    proptest! {
        #[test]
        fn output_is_on_simplex_and_shift_invariant(
            v in prop::collection::vec(-5.0f64..5.0, 1..8),
            shift in -3.0f64..3.0,
        ) {
            let p = project_simplex(&v).unwrap();
            prop_assert!(p.iter().all(|&x| x >= 0.0));
            prop_assert!((p.iter().sum::<f64>() - 1.0).abs() < 1e-12);
            let shifted: Vec<f64> = v.iter().map(|x| x + shift).collect();
            let q = project_simplex(&shifted).unwrap();
            for (a, b) in p.iter().zip(&q) {
                prop_assert!((a - b).abs() < 1e-9);
            }
        }

        #[test]
        fn projection_is_idempotent(v in prop::collection::vec(-5.0f64..5.0, 1..8)) {
            let p = project_simplex(&v).unwrap();
            let q = project_simplex(&p).unwrap();
            for (a, b) in p.iter().zip(&q) {
                prop_assert!((a - b).abs() < 1e-12);
            }
        }
    }
}
