//! Small integer lattice routines: row Hermite form, Smith diagonal, kernels.

use num_integer::Integer;

/// Row-style Hermite normal form; zero rows are dropped.
pub fn hnf(rows: &[Vec<i64>], ncols: usize) -> Vec<Vec<i64>> {
    let mut m: Vec<Vec<i64>> = rows.iter().filter(|r| r.iter().any(|&x| x != 0)).cloned().collect();
    let mut r = 0;
    for c in 0..ncols {
        if r == m.len() {
            break;
        }
        loop {
            let piv = (r..m.len()).filter(|&i| m[i][c] != 0).min_by_key(|&i| m[i][c].abs());
            let Some(p) = piv else { break };
            m.swap(r, p);
            let mut done = true;
            for i in r + 1..m.len() {
                let f = m[i][c] / m[r][c];
                if f != 0 {
                    for k in 0..ncols {
                        m[i][k] -= f * m[r][k];
                    }
                }
                if m[i][c] != 0 {
                    done = false;
                }
            }
            if done {
                break;
            }
        }
        if m[r][c] == 0 {
            continue;
        }
        if m[r][c] < 0 {
            m[r].iter_mut().for_each(|x| *x = -*x);
        }
        for i in 0..r {
            let f = Integer::div_floor(&m[i][c], &m[r][c]);
            if f != 0 {
                for k in 0..ncols {
                    m[i][k] -= f * m[r][k];
                }
            }
        }
        r += 1;
    }
    m.truncate(r);
    m
}

/// Nonzero elementary divisors, in divisibility order.
pub fn smith_diagonal(rows: &[Vec<i64>], ncols: usize) -> Vec<i64> {
    let mut m: Vec<Vec<i64>> = rows.to_vec();
    let nrows = m.len();
    let mut out = Vec::new();
    let mut t = 0;
    while t < nrows.min(ncols) {
        let Some((pi, pj)) = (t..nrows)
            .flat_map(|i| (t..ncols).map(move |j| (i, j)))
            .filter(|&(i, j)| m[i][j] != 0)
            .min_by_key(|&(i, j)| m[i][j].abs())
        else {
            break;
        };
        m.swap(t, pi);
        for row in m.iter_mut() {
            row.swap(t, pj);
        }
        let mut clean = true;
        for i in t + 1..nrows {
            let f = m[i][t] / m[t][t];
            for k in t..ncols {
                m[i][k] -= f * m[t][k];
            }
            clean &= m[i][t] == 0;
        }
        for j in t + 1..ncols {
            let f = m[t][j] / m[t][t];
            for row in m.iter_mut() {
                row[j] -= f * row[t];
            }
            clean &= m[t][j] == 0;
        }
        if !clean {
            continue;
        }
        // the pivot must divide the rest
        if let Some(i) = (t + 1..nrows).find(|&i| (t + 1..ncols).any(|j| m[i][j] % m[t][t] != 0)) {
            for k in t..ncols {
                m[t][k] += m[i][k];
            }
            continue;
        }
        out.push(m[t][t].abs());
        t += 1;
    }
    out
}

/// A basis of `{v in Z^ncols : rows . v = 0}`.
pub fn integer_kernel(rows: &[Vec<i64>], ncols: usize) -> Vec<Vec<i64>> {
    // column operations on `rows`, mirrored on an identity matrix
    let mut m: Vec<Vec<i64>> = rows.to_vec();
    let mut v: Vec<Vec<i64>> = (0..ncols).map(|i| (0..ncols).map(|j| i64::from(i == j)).collect()).collect();
    let col_op = |m: &mut Vec<Vec<i64>>, v: &mut Vec<Vec<i64>>, dst: usize, src: usize, f: i64| {
        for row in m.iter_mut().chain(v.iter_mut()) {
            row[dst] -= f * row[src];
        }
    };
    let swap = |m: &mut Vec<Vec<i64>>, v: &mut Vec<Vec<i64>>, a: usize, b: usize| {
        for row in m.iter_mut().chain(v.iter_mut()) {
            row.swap(a, b);
        }
    };
    let mut c = 0;
    for r in 0..m.len() {
        if c == ncols {
            break;
        }
        loop {
            let piv = (c..ncols).filter(|&j| m[r][j] != 0).min_by_key(|&j| m[r][j].abs());
            let Some(p) = piv else { break };
            swap(&mut m, &mut v, c, p);
            let mut done = true;
            for j in c + 1..ncols {
                let f = m[r][j] / m[r][c];
                if f != 0 {
                    col_op(&mut m, &mut v, j, c, f);
                }
                done &= m[r][j] == 0;
            }
            if done {
                break;
            }
        }
        if m[r][c] != 0 {
            c += 1;
        }
    }
    (c..ncols).map(|j| v.iter().map(|row| row[j]).collect()).collect()
}
