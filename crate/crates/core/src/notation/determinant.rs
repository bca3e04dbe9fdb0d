//! Knot determinant from the Fox matrix evaluated at `t = -1`.

use super::presentation::Presentation;

/// Fox derivatives of every relator at `t = -1`, with all generators sent to
/// `t`. Both `∂x/∂x` and `∂x⁻¹/∂x` contribute `(-1)^{esum(prefix)}`.
pub fn fox_matrix_at_minus_one(pres: &Presentation) -> Vec<Vec<i64>> {
    let n = pres.generator_count();
    pres.relators
        .iter()
        .map(|r| {
            let mut row = vec![0i64; n];
            let mut esum = 0i64;
            for l in r.letters() {
                let before = esum;
                esum += l.exponent();
                let prefix = if l.exponent() > 0 { before } else { esum };
                let sign = if prefix.rem_euclid(2) == 0 { 1 } else { -1 };
                let fox = if l.exponent() > 0 { sign } else { -sign };
                row[l.gen()] += fox;
            }
            row
        })
        .collect()
}

fn det_bareiss(mut m: Vec<Vec<i128>>) -> i128 {
    let n = m.len();
    if n == 0 {
        return 1;
    }
    let mut sign = 1i128;
    let mut prev = 1i128;
    for k in 0..n - 1 {
        if m[k][k] == 0 {
            match (k + 1..n).find(|&i| m[i][k] != 0) {
                Some(i) => {
                    m.swap(i, k);
                    sign = -sign;
                }
                None => return 0,
            }
        }
        for i in k + 1..n {
            for j in k + 1..n {
                m[i][j] = (m[i][j] * m[k][k] - m[i][k] * m[k][j]) / prev;
            }
        }
        prev = m[k][k];
    }
    sign * m[n - 1][n - 1]
}

fn gcd(a: i128, b: i128) -> i128 {
    let (mut a, mut b) = (a.abs(), b.abs());
    while b != 0 {
        (a, b) = (b, a % b);
    }
    a
}

fn combinations(m: usize, r: usize, f: &mut impl FnMut(&[usize]) -> bool) {
    fn rec(start: usize, m: usize, r: usize, cur: &mut Vec<usize>, f: &mut impl FnMut(&[usize]) -> bool) -> bool {
        if cur.len() == r {
            return f(cur);
        }
        for i in start..m {
            cur.push(i);
            if !rec(i + 1, m, r, cur, f) {
                return false;
            }
            cur.pop();
        }
        true
    }
    rec(0, m, r, &mut Vec::new(), f);
}

/// `|Δ(-1)|`: the gcd of the `(n-1)`-minors of the Fox matrix at `t = -1`.
pub fn knot_determinant(pres: &Presentation) -> u64 {
    let m = fox_matrix_at_minus_one(pres);
    let n = pres.generator_count();
    if n <= 1 {
        return 1;
    }
    let r = n - 1;
    if m.len() < r {
        return 0;
    }
    let mut g: i128 = 0;
    for drop_col in 0..n {
        let cols: Vec<usize> = (0..n).filter(|&c| c != drop_col).collect();
        combinations(m.len(), r, &mut |rows| {
            let sub = rows
                .iter()
                .map(|&i| cols.iter().map(|&j| m[i][j] as i128).collect())
                .collect();
            g = gcd(g, det_bareiss(sub));
            g != 1
        });
        if g == 1 {
            break;
        }
    }
    g as u64
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::notation::{
        braid_closure_presentation, parse_braid, torus_presentation, two_bridge_presentation,
        TorusParams, TwoBridgeFraction,
    };

    #[test]
    fn trefoil_is_three_in_every_presentation() {
        assert_eq!(knot_determinant(&two_bridge_presentation(TwoBridgeFraction::new(3, 1).unwrap())), 3);
        assert_eq!(knot_determinant(&torus_presentation(TorusParams::new(3, 2).unwrap())), 3);
        let b = braid_closure_presentation(&parse_braid("s1^3").unwrap()).unwrap();
        assert_eq!(knot_determinant(&b), 3);
    }

    #[test]
    fn figure_eight_braid() {
        let b = braid_closure_presentation(&parse_braid("s1 s2^-1 s1 s2^-1").unwrap()).unwrap();
        assert_eq!(knot_determinant(&b), 5);
    }

    #[test]
    fn torus_determinants() {
        // odd p with q = 2 gives p; both odd gives 1
        assert_eq!(knot_determinant(&torus_presentation(TorusParams::new(5, 2).unwrap())), 5);
        assert_eq!(knot_determinant(&torus_presentation(TorusParams::new(5, 3).unwrap())), 1);
        assert_eq!(knot_determinant(&torus_presentation(TorusParams::new(4, 3).unwrap())), 3);
    }

    #[test]
    fn bareiss_small() {
        assert_eq!(det_bareiss(vec![vec![2, 1], vec![1, 3]]), 5);
        assert_eq!(det_bareiss(vec![vec![0, 1], vec![1, 0]]), -1);
    }
}
