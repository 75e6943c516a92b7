//! Exact feasibility of linear systems: Fourier–Motzkin elimination (with
//! strict inequalities) and a phase-one simplex with Bland's rule.

use std::collections::HashMap;

use num_traits::{One, Signed, Zero};

use crate::scalar::{integer_in, Q};

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub enum Relation {
    Le,
    Lt,
    Eq,
}

/// `coeffs · x  rel  rhs`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct LinearConstraint {
    pub coeffs: Vec<Q>,
    pub rel: Relation,
    pub rhs: Q,
}

impl LinearConstraint {
    pub fn le(coeffs: Vec<Q>, rhs: Q) -> Self {
        LinearConstraint { coeffs, rel: Relation::Le, rhs }
    }

    pub fn lt(coeffs: Vec<Q>, rhs: Q) -> Self {
        LinearConstraint { coeffs, rel: Relation::Lt, rhs }
    }

    pub fn eq(coeffs: Vec<Q>, rhs: Q) -> Self {
        LinearConstraint { coeffs, rel: Relation::Eq, rhs }
    }

    pub fn holds_at(&self, x: &[Q]) -> bool {
        let lhs: Q = self
            .coeffs
            .iter()
            .zip(x)
            .map(|(a, b)| a * b)
            .fold(Q::zero(), |s, t| s + t);
        match self.rel {
            Relation::Le => lhs <= self.rhs,
            Relation::Lt => lhs < self.rhs,
            Relation::Eq => lhs == self.rhs,
        }
    }
}

#[derive(Clone, Debug)]
struct Row {
    coeffs: Vec<Q>,
    strict: bool,
    rhs: Q,
}

/// Finds a point satisfying every constraint, or proves there is none.
///
/// Equalities are eliminated by substitution first; inequalities are then
/// projected out one variable at a time. Back-substitution picks, for each
/// variable, the integer of least magnitude in its feasible interval when one
/// exists and the midpoint otherwise.
pub fn fourier_motzkin(nvars: usize, constraints: &[LinearConstraint]) -> Option<Vec<Q>> {
    let mut eqs: Vec<Row> = Vec::new();
    let mut ineqs: Vec<Row> = Vec::new();
    for c in constraints {
        assert_eq!(c.coeffs.len(), nvars, "constraint arity");
        let row = Row {
            coeffs: c.coeffs.clone(),
            strict: c.rel == Relation::Lt,
            rhs: c.rhs.clone(),
        };
        if c.rel == Relation::Eq {
            eqs.push(row);
        } else {
            ineqs.push(row);
        }
    }

    // (variable, defining row with unit coefficient on it)
    let mut solved: Vec<(usize, Row)> = Vec::new();
    while let Some(row) = eqs.pop() {
        let Some(k) = row.coeffs.iter().position(|a| !a.is_zero()) else {
            if !row.rhs.is_zero() {
                return None;
            }
            continue;
        };
        let inv = row.coeffs[k].recip();
        let row = Row {
            coeffs: row.coeffs.iter().map(|a| a * &inv).collect(),
            strict: false,
            rhs: &row.rhs * &inv,
        };
        for other in eqs.iter_mut().chain(ineqs.iter_mut()) {
            substitute(other, k, &row);
        }
        solved.push((k, row));
    }

    let free: Vec<usize> = (0..nvars)
        .filter(|v| solved.iter().all(|(k, _)| k != v))
        .collect();
    let mut stages: Vec<Vec<Row>> = Vec::new();
    let mut current = reduce(ineqs)?;
    for &k in &free {
        stages.push(current.clone());
        current = reduce(eliminate(&current, k))?;
    }

    let mut x = vec![Q::zero(); nvars];
    for (stage, &k) in stages.iter().zip(&free).rev() {
        x[k] = pick_value(stage, k, &x)?;
    }
    for (k, row) in solved.iter().rev() {
        let rest: Q = row
            .coeffs
            .iter()
            .enumerate()
            .filter(|(j, _)| j != k)
            .map(|(j, a)| a * &x[j])
            .fold(Q::zero(), |s, t| s + t);
        x[*k] = &row.rhs - rest;
    }
    constraints.iter().all(|c| c.holds_at(&x)).then_some(x)
}

fn substitute(row: &mut Row, k: usize, def: &Row) {
    let a = row.coeffs[k].clone();
    if a.is_zero() {
        return;
    }
    for (c, d) in row.coeffs.iter_mut().zip(&def.coeffs) {
        *c -= &a * d;
    }
    row.rhs -= &a * &def.rhs;
}

fn eliminate(rows: &[Row], k: usize) -> Vec<Row> {
    let mut out = Vec::new();
    let (mut upper, mut lower) = (Vec::new(), Vec::new());
    for r in rows {
        if r.coeffs[k].is_positive() {
            upper.push(r);
        } else if r.coeffs[k].is_negative() {
            lower.push(r);
        } else {
            out.push(r.clone());
        }
    }
    for u in &upper {
        for l in &lower {
            let (su, sl) = (-&l.coeffs[k], u.coeffs[k].clone());
            out.push(Row {
                coeffs: u
                    .coeffs
                    .iter()
                    .zip(&l.coeffs)
                    .map(|(a, b)| a * &su + b * &sl)
                    .collect(),
                strict: u.strict || l.strict,
                rhs: &u.rhs * &su + &l.rhs * &sl,
            });
        }
    }
    out
}

/// Drops trivial rows (failing on a false one), scales each row so its first
/// nonzero coefficient is ±1, and keeps only the tightest row per direction.
fn reduce(rows: Vec<Row>) -> Option<Vec<Row>> {
    let mut best: HashMap<Vec<Q>, (Q, bool)> = HashMap::new();
    let mut order = Vec::new();
    for r in rows {
        let Some(lead) = r.coeffs.iter().find(|a| !a.is_zero()).map(|a| a.abs()) else {
            let ok = if r.strict { r.rhs.is_positive() } else { !r.rhs.is_negative() };
            if !ok {
                return None;
            }
            continue;
        };
        let inv = lead.recip();
        let coeffs: Vec<Q> = r.coeffs.iter().map(|a| a * &inv).collect();
        let rhs = r.rhs * &inv;
        match best.get_mut(&coeffs) {
            Some(entry) => {
                if rhs < entry.0 || (rhs == entry.0 && r.strict) {
                    *entry = (rhs, r.strict);
                }
            }
            None => {
                order.push(coeffs.clone());
                best.insert(coeffs, (rhs, r.strict));
            }
        }
    }
    Some(
        order
            .into_iter()
            .map(|coeffs| {
                let (rhs, strict) = best.remove(&coeffs).expect("recorded");
                Row { coeffs, strict, rhs }
            })
            .collect(),
    )
}

fn pick_value(rows: &[Row], k: usize, x: &[Q]) -> Option<Q> {
    let mut lower: Option<(Q, bool)> = None;
    let mut upper: Option<(Q, bool)> = None;
    for r in rows {
        let a = &r.coeffs[k];
        if a.is_zero() {
            continue;
        }
        let rest: Q = r
            .coeffs
            .iter()
            .enumerate()
            .filter(|(j, _)| *j != k)
            .map(|(j, c)| c * &x[j])
            .fold(Q::zero(), |s, t| s + t);
        let bound = (&r.rhs - rest) / a;
        if a.is_positive() {
            if upper
                .as_ref()
                .is_none_or(|(u, s)| bound < *u || (bound == *u && r.strict && !s))
            {
                upper = Some((bound, r.strict));
            }
        } else if lower
            .as_ref()
            .is_none_or(|(l, s)| bound > *l || (bound == *l && r.strict && !s))
        {
            lower = Some((bound, r.strict));
        }
    }
    if let Some(z) = integer_in(
        lower.as_ref().map(|(v, s)| (v, *s)),
        upper.as_ref().map(|(v, s)| (v, *s)),
    ) {
        return Some(Q::from_integer(z));
    }
    match (lower, upper) {
        (Some((l, ls)), Some((u, us))) => {
            if l < u || (l == u && !ls && !us) {
                Some((l + u) / Q::from_integer(2.into()))
            } else {
                None
            }
        }
        _ => unreachable!("a half-bounded interval always contains an integer"),
    }
}

/// Feasibility of a system of non-strict inequalities and equalities over
/// free variables by a phase-one simplex with Bland's rule.
///
/// Strict inequalities are not supported here; use [`fourier_motzkin`].
pub fn lp_feasible(nvars: usize, constraints: &[LinearConstraint]) -> Option<Vec<Q>> {
    assert!(
        constraints.iter().all(|c| c.rel != Relation::Lt),
        "lp_feasible takes non-strict constraints only"
    );
    let m = constraints.len();
    let n_slack = constraints.iter().filter(|c| c.rel == Relation::Le).count();
    // Columns: p (nvars), q (nvars), slacks, artificials, rhs. x = p − q.
    let slack0 = 2 * nvars;
    let art0 = slack0 + n_slack;
    let mut tableau: Vec<Vec<Q>> = Vec::with_capacity(m);
    let mut basis = Vec::with_capacity(m);
    let mut artificial_rows = Vec::new();
    let mut slack = slack0;
    let mut n_art = 0;
    let mut raw = Vec::with_capacity(m);
    for c in constraints {
        let mut row = vec![Q::zero(); art0];
        for (j, a) in c.coeffs.iter().enumerate() {
            row[j] = a.clone();
            row[nvars + j] = -a;
        }
        let mut slack_col = None;
        if c.rel == Relation::Le {
            row[slack] = Q::one();
            slack_col = Some(slack);
            slack += 1;
        }
        let mut rhs = c.rhs.clone();
        if rhs.is_negative() {
            for v in row.iter_mut() {
                *v = -v.clone();
            }
            rhs = -rhs;
            slack_col = None;
        }
        raw.push((row, rhs, slack_col));
    }
    for (i, (_, _, slack_col)) in raw.iter().enumerate() {
        if slack_col.is_none() {
            artificial_rows.push(i);
            n_art += 1;
        }
    }
    let width = art0 + n_art + 1;
    let mut next_art = art0;
    for (row, rhs, slack_col) in raw {
        let mut full = row;
        full.resize(width, Q::zero());
        full[width - 1] = rhs;
        match slack_col {
            Some(s) => basis.push(s),
            None => {
                full[next_art] = Q::one();
                basis.push(next_art);
                next_art += 1;
            }
        }
        tableau.push(full);
    }
    // Reduced costs of the phase-one objective Σ artificials.
    let mut obj = vec![Q::zero(); width];
    obj[art0..art0 + n_art].fill(Q::one());
    for &i in &artificial_rows {
        for j in 0..width {
            obj[j] -= &tableau[i][j];
        }
    }
    while let Some(enter) = (0..width - 1).find(|&j| obj[j].is_negative()) {
        let mut leave: Option<(usize, Q)> = None;
        for i in 0..m {
            let a = &tableau[i][enter];
            if a.is_positive() {
                let ratio = &tableau[i][width - 1] / a;
                let better = match &leave {
                    None => true,
                    Some((li, lr)) => ratio < *lr || (ratio == *lr && basis[i] < basis[*li]),
                };
                if better {
                    leave = Some((i, ratio));
                }
            }
        }
        let (r, _) = leave.expect("phase one is bounded below by zero");
        pivot(&mut tableau, &mut obj, r, enter);
        basis[r] = enter;
    }
    if obj[width - 1].is_negative() {
        return None;
    }
    let mut x = vec![Q::zero(); nvars];
    for (i, &b) in basis.iter().enumerate() {
        let v = &tableau[i][width - 1];
        if b < nvars {
            x[b] += v;
        } else if b < 2 * nvars {
            x[b - nvars] -= v;
        }
    }
    constraints.iter().all(|c| c.holds_at(&x)).then_some(x)
}

fn pivot(t: &mut [Vec<Q>], obj: &mut [Q], r: usize, c: usize) {
    let inv = t[r][c].recip();
    for v in t[r].iter_mut() {
        *v *= &inv;
    }
    let pivot_row = t[r].clone();
    for (i, row) in t.iter_mut().enumerate() {
        if i != r && !row[c].is_zero() {
            let f = row[c].clone();
            for (v, p) in row.iter_mut().zip(&pivot_row) {
                *v -= &f * p;
            }
        }
    }
    if !obj[c].is_zero() {
        let f = obj[c].clone();
        for (v, p) in obj.iter_mut().zip(&pivot_row) {
            *v -= &f * p;
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::scalar::{q, q_frac};
    use rand::{Rng, SeedableRng};
    use rand_chacha::ChaCha8Rng;

    fn v(xs: &[i64]) -> Vec<Q> {
        xs.iter().map(|&x| q(x)).collect()
    }

    #[test]
    fn strict_interval() {
        let cs = [
            LinearConstraint::lt(v(&[-1]), q(0)),
            LinearConstraint::lt(v(&[1]), q(2)),
        ];
        assert_eq!(fourier_motzkin(1, &cs), Some(vec![q(1)]));
        let cs = [
            LinearConstraint::lt(v(&[-1]), q(0)),
            LinearConstraint::lt(v(&[1]), q(1)),
        ];
        assert_eq!(fourier_motzkin(1, &cs), Some(vec![q_frac(1, 2)]));
        let cs = [
            LinearConstraint::lt(v(&[-1]), q(0)),
            LinearConstraint::le(v(&[1]), q(0)),
        ];
        assert_eq!(fourier_motzkin(1, &cs), None);
    }

    #[test]
    fn equalities_then_inequalities() {
        // x = y, 0 < x + y < 1
        let cs = [
            LinearConstraint::eq(v(&[1, -1]), q(0)),
            LinearConstraint::lt(v(&[-1, -1]), q(0)),
            LinearConstraint::lt(v(&[1, 1]), q(1)),
        ];
        let x = fourier_motzkin(2, &cs).unwrap();
        assert_eq!(x[0], x[1]);
        let cs = [
            LinearConstraint::eq(v(&[1, 0]), q(1)),
            LinearConstraint::eq(v(&[1, 0]), q(2)),
        ];
        assert_eq!(fourier_motzkin(2, &cs), None);
    }

    #[test]
    fn simplex_examples() {
        let square = [
            LinearConstraint::le(v(&[1, 0]), q(1)),
            LinearConstraint::le(v(&[-1, 0]), q(1)),
            LinearConstraint::le(v(&[0, 1]), q(1)),
            LinearConstraint::le(v(&[0, -1]), q(1)),
        ];
        assert!(lp_feasible(2, &square).is_some());
        let mut shifted = square.to_vec();
        shifted.push(LinearConstraint::le(v(&[-1, -1]), q(-3)));
        assert!(lp_feasible(2, &shifted).is_none());
        let eq = [
            LinearConstraint::eq(v(&[1, 1]), q(-5)),
            LinearConstraint::le(v(&[1, 0]), q(-7)),
        ];
        let x = lp_feasible(2, &eq).unwrap();
        assert_eq!(&x[0] + &x[1], q(-5));
    }

    #[test]
    fn simplex_agrees_with_fourier_motzkin() {
        let mut rng = ChaCha8Rng::seed_from_u64(7);
        for _ in 0..300 {
            let n = rng.random_range(1..=3);
            let m = rng.random_range(1..=7);
            let cs: Vec<_> = (0..m)
                .map(|_| {
                    let coeffs = (0..n).map(|_| q(rng.random_range(-3..=3))).collect();
                    let rhs = q(rng.random_range(-4..=4));
                    if rng.random_bool(0.15) {
                        LinearConstraint::eq(coeffs, rhs)
                    } else {
                        LinearConstraint::le(coeffs, rhs)
                    }
                })
                .collect();
            assert_eq!(
                fourier_motzkin(n, &cs).is_some(),
                lp_feasible(n, &cs).is_some(),
                "{cs:?}"
            );
        }
    }
}
