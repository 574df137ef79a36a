//! A small exact-rational linear program solver (two-phase simplex with
//! Bland's rule). Used to certify alcove walls in degenerate positions;
//! exactness means wall detection never depends on tolerances.

use crate::scalar::Rat;
use num_traits::{One, Signed, Zero};

#[derive(Debug, Clone, PartialEq)]
pub enum LpResult {
    Infeasible,
    Unbounded,
    Optimal { value: Rat, point: Vec<Rat> },
}

/// Maximizes `objective . x` over free `x` subject to `a_i . x <= b_i`.
pub fn maximize(objective: &[Rat], constraints: &[(Vec<Rat>, Rat)]) -> LpResult {
    let n = objective.len();
    let m = constraints.len();
    // Split free variables: x = u - w, u, w >= 0; then slacks.
    let nv = 2 * n + m;
    let mut tab: Vec<Vec<Rat>> = Vec::with_capacity(m);
    let mut basis: Vec<usize> = Vec::with_capacity(m);
    let mut need_artificial = Vec::new();
    for (i, (a, b)) in constraints.iter().enumerate() {
        assert_eq!(a.len(), n);
        let mut row = vec![Rat::zero(); nv + 1];
        for j in 0..n {
            row[j] = a[j].clone();
            row[n + j] = -a[j].clone();
        }
        row[2 * n + i] = Rat::one();
        row[nv] = b.clone();
        if b.is_negative() {
            for v in row.iter_mut() {
                *v = -v.clone();
            }
            need_artificial.push(i);
        }
        tab.push(row);
        basis.push(2 * n + i);
    }

    let total = if need_artificial.is_empty() {
        nv
    } else {
        nv + need_artificial.len()
    };
    if !need_artificial.is_empty() {
        for row in tab.iter_mut() {
            let rhs = row.pop().unwrap();
            row.extend(std::iter::repeat_with(Rat::zero).take(need_artificial.len()));
            row.push(rhs);
        }
        let mut phase1 = vec![Rat::zero(); total];
        for (k, &i) in need_artificial.iter().enumerate() {
            tab[i][nv + k] = Rat::one();
            basis[i] = nv + k;
            phase1[nv + k] = -Rat::one();
        }
        match run_simplex(&mut tab, &mut basis, &phase1, total) {
            SimplexOutcome::Unbounded => unreachable!("phase-1 objective is bounded"),
            SimplexOutcome::Optimal(v) => {
                if v.is_negative() {
                    return LpResult::Infeasible;
                }
            }
        }
        // Pivot any artificial still basic (at value zero) out if possible.
        for r in 0..m {
            if basis[r] >= nv {
                if let Some(e) = (0..nv).find(|&j| !tab[r][j].is_zero()) {
                    pivot(&mut tab, &mut basis, r, e);
                }
            }
        }
    }

    let mut phase2 = vec![Rat::zero(); total];
    for j in 0..n {
        phase2[j] = objective[j].clone();
        phase2[n + j] = -objective[j].clone();
    }
    match run_simplex(&mut tab, &mut basis, &phase2, nv) {
        SimplexOutcome::Unbounded => LpResult::Unbounded,
        SimplexOutcome::Optimal(value) => {
            let rhs = tab[0].len() - 1;
            let mut x = vec![Rat::zero(); n];
            for (r, &b) in basis.iter().enumerate() {
                if b < n {
                    x[b] += tab[r][rhs].clone();
                } else if b < 2 * n {
                    x[b - n] -= tab[r][rhs].clone();
                }
            }
            LpResult::Optimal { value, point: x }
        }
    }
}

enum SimplexOutcome {
    Optimal(Rat),
    Unbounded,
}

/// Bland-rule simplex on an equality tableau with a feasible basis.
/// Only columns `< allowed` may enter.
fn run_simplex(
    tab: &mut Vec<Vec<Rat>>,
    basis: &mut [usize],
    cost: &[Rat],
    allowed: usize,
) -> SimplexOutcome {
    let m = tab.len();
    let rhs = tab[0].len() - 1;
    loop {
        // Reduced costs: c_j - c_B . column_j
        let mut entering = None;
        'cols: for j in 0..allowed {
            if basis.contains(&j) {
                continue;
            }
            let mut red = cost[j].clone();
            for r in 0..m {
                if !cost[basis[r]].is_zero() && !tab[r][j].is_zero() {
                    red -= &cost[basis[r]] * &tab[r][j];
                }
            }
            if red.is_positive() {
                entering = Some(j);
                break 'cols; // Bland: first improving index
            }
        }
        let Some(e) = entering else {
            let mut value = Rat::zero();
            for r in 0..m {
                if !cost[basis[r]].is_zero() {
                    value += &cost[basis[r]] * &tab[r][rhs];
                }
            }
            return SimplexOutcome::Optimal(value);
        };
        // Ratio test, ties broken by smallest basis index (Bland).
        let mut leave: Option<(usize, Rat)> = None;
        for r in 0..m {
            if tab[r][e].is_positive() {
                let ratio = &tab[r][rhs] / &tab[r][e];
                match &leave {
                    None => leave = Some((r, ratio)),
                    Some((lr, lratio)) => {
                        if ratio < *lratio || (ratio == *lratio && basis[r] < basis[*lr]) {
                            leave = Some((r, ratio));
                        }
                    }
                }
            }
        }
        let Some((r, _)) = leave else {
            return SimplexOutcome::Unbounded;
        };
        pivot(tab, basis, r, e);
    }
}

fn pivot(tab: &mut Vec<Vec<Rat>>, basis: &mut [usize], r: usize, e: usize) {
    let m = tab.len();
    let w = tab[0].len();
    let inv = tab[r][e].recip();
    for j in 0..w {
        let v = &tab[r][j] * &inv;
        tab[r][j] = v;
    }
    for i in 0..m {
        if i != r && !tab[i][e].is_zero() {
            let f = tab[i][e].clone();
            for j in 0..w {
                let v = &tab[i][j] - &(&f * &tab[r][j]);
                tab[i][j] = v;
            }
        }
    }
    basis[r] = e;
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::scalar::{rat, ratio};

    #[test]
    fn simple_bounded_max() {
        // max x+y s.t. x <= 2, y <= 3, x+y <= 4
        let res = maximize(
            &[rat(1), rat(1)],
            &[
                (vec![rat(1), rat(0)], rat(2)),
                (vec![rat(0), rat(1)], rat(3)),
                (vec![rat(1), rat(1)], rat(4)),
            ],
        );
        match res {
            LpResult::Optimal { value, .. } => assert_eq!(value, rat(4)),
            other => panic!("unexpected {other:?}"),
        }
    }

    #[test]
    fn free_variables_and_negative_rhs() {
        // max t s.t. -x + t <= -1 (i.e. t <= x - 1), x <= 1/2, t <= 1.
        let res = maximize(
            &[rat(0), rat(1)],
            &[
                (vec![rat(-1), rat(1)], rat(-1)),
                (vec![rat(1), rat(0)], ratio(1, 2)),
                (vec![rat(0), rat(1)], rat(1)),
            ],
        );
        match res {
            LpResult::Optimal { value, point } => {
                assert_eq!(value, ratio(-1, 2));
                assert_eq!(point[0], ratio(1, 2));
            }
            other => panic!("unexpected {other:?}"),
        }
    }

    #[test]
    fn infeasible_detected() {
        // x <= 0 and -x <= -1 cannot both hold.
        let res = maximize(
            &[rat(1)],
            &[(vec![rat(1)], rat(0)), (vec![rat(-1)], rat(-1))],
        );
        assert_eq!(res, LpResult::Infeasible);
    }

    #[test]
    fn unbounded_detected() {
        let res = maximize(&[rat(1)], &[(vec![rat(-1)], rat(0))]);
        assert_eq!(res, LpResult::Unbounded);
    }
}
