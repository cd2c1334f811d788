//! Independent flat-distance oracle: the supremum over 1-Lipschitz test
//! functions with |phi| <= 1 vanishing on the boundary, reduced to a linear
//! program over the values of phi at the atoms and solved by enumerating
//! every vertex of the feasible polytope.

use nclock::{Point, Shape};

/// Charges are merged per position; `atoms` holds `(position, charge)` of
/// `mu - nu`.
pub fn flat_distance_lp(atoms: &[(Point, i64)], domain: &Shape) -> f64 {
    let mut merged: Vec<(Point, f64)> = Vec::new();
    for &(p, c) in atoms {
        match merged.iter_mut().find(|(q, _)| *q == p) {
            Some(e) => e.1 += c as f64,
            None => merged.push((p, c as f64)),
        }
    }
    merged.retain(|(_, c)| *c != 0.0);
    let n = merged.len();
    if n == 0 {
        return 0.0;
    }
    // constraints a . phi <= b
    let mut rows: Vec<(Vec<f64>, f64)> = Vec::new();
    for (i, (p, _)) in merged.iter().enumerate() {
        let cap = domain.boundary_distance(p).min(1.0);
        let mut a = vec![0.0; n];
        a[i] = 1.0;
        rows.push((a.clone(), cap));
        a[i] = -1.0;
        rows.push((a, cap));
    }
    for i in 0..n {
        for j in i + 1..n {
            let d = merged[i].0.dist(&merged[j].0);
            let mut a = vec![0.0; n];
            a[i] = 1.0;
            a[j] = -1.0;
            rows.push((a.clone(), d));
            a[i] = -1.0;
            a[j] = 1.0;
            rows.push((a, d));
        }
    }
    let objective: Vec<f64> = merged.iter().map(|(_, c)| *c).collect();
    let mut best = f64::NEG_INFINITY;
    let mut pick = Vec::with_capacity(n);
    choose(&rows, n, 0, &mut pick, &mut |sel: &[usize]| {
        if let Some(x) = solve(sel.iter().map(|&r| &rows[r]).collect::<Vec<_>>().as_slice(), n) {
            let feasible = rows
                .iter()
                .all(|(a, b)| a.iter().zip(&x).map(|(u, v)| u * v).sum::<f64>() <= b + 1e-9);
            if feasible {
                let val: f64 = objective.iter().zip(&x).map(|(c, v)| c * v).sum();
                best = best.max(val);
            }
        }
    });
    best
}

fn choose(rows: &[(Vec<f64>, f64)], k: usize, from: usize, pick: &mut Vec<usize>, f: &mut dyn FnMut(&[usize])) {
    if pick.len() == k {
        f(pick);
        return;
    }
    for r in from..rows.len() {
        pick.push(r);
        choose(rows, k, r + 1, pick, f);
        pick.pop();
    }
}

/// Gaussian elimination with partial pivoting; `None` if singular.
fn solve(eqs: &[&(Vec<f64>, f64)], n: usize) -> Option<Vec<f64>> {
    let mut m: Vec<Vec<f64>> = eqs
        .iter()
        .map(|(a, b)| {
            let mut r = a.clone();
            r.push(*b);
            r
        })
        .collect();
    for col in 0..n {
        let piv = (col..n).max_by(|&a, &b| m[a][col].abs().total_cmp(&m[b][col].abs()))?;
        if m[piv][col].abs() < 1e-12 {
            return None;
        }
        m.swap(col, piv);
        for r in 0..n {
            if r != col {
                let f = m[r][col] / m[col][col];
                for c in col..=n {
                    m[r][c] -= f * m[col][c];
                }
            }
        }
    }
    Some((0..n).map(|i| m[i][n] / m[i][i]).collect())
}
