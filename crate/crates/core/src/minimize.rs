//! Truth table to expression conversion.
//!
//! Small tables (up to [`QM_MAX_VARS`] variables) go through Quine-McCluskey
//! prime implicants with an essential-first greedy cover, which gives short
//! sum-of-products forms such as `x0 | !x1`. Larger tables fall back to a
//! Shannon expansion with constant folding.

use std::collections::{BTreeSet, HashSet};

use crate::expr::Expr;

pub const QM_MAX_VARS: usize = 10;

/// Builds an expression over `x_0..x_{n-1}` whose truth table is `table`
/// (indexed by the integer rendering of configurations).
pub fn expression_from_table(table: &[bool], n: usize) -> Expr {
    assert_eq!(table.len(), 1usize << n, "table size must be 2^n");
    if table.iter().all(|&b| !b) {
        return Expr::Const(false);
    }
    if table.iter().all(|&b| b) {
        return Expr::Const(true);
    }
    if n <= QM_MAX_VARS {
        sum_of_products(table, n)
    } else {
        shannon(table, n)
    }
}

/// (value, care) where `care` bit set means the variable appears as a literal.
type Implicant = (u64, u64);

fn sum_of_products(table: &[bool], n: usize) -> Expr {
    let full = (1u64 << n) - 1;
    let minterms: Vec<u64> = (0..table.len() as u64)
        .filter(|&b| table[b as usize])
        .collect();

    let mut primes: BTreeSet<Implicant> = BTreeSet::new();
    let mut level: HashSet<Implicant> = minterms.iter().map(|&m| (m, full)).collect();
    while !level.is_empty() {
        let mut next = HashSet::new();
        let mut combined = HashSet::new();
        for &(value, care) in &level {
            for i in 0..n {
                let bit = 1u64 << i;
                if care & bit == 0 || value & bit != 0 {
                    continue;
                }
                let partner = (value | bit, care);
                if level.contains(&partner) {
                    next.insert((value, care & !bit));
                    combined.insert((value, care));
                    combined.insert(partner);
                }
            }
        }
        for imp in &level {
            if !combined.contains(imp) {
                primes.insert(*imp);
            }
        }
        level = next;
    }

    let covers = |(value, care): Implicant, m: u64| m & care == value;
    let primes: Vec<Implicant> = primes.into_iter().collect();
    let mut uncovered: BTreeSet<u64> = minterms.iter().copied().collect();
    let mut chosen: Vec<Implicant> = Vec::new();

    // Essential primes: sole cover of some minterm.
    for &m in &minterms {
        let mut covering = primes.iter().filter(|&&p| covers(p, m));
        if let (Some(&p), None) = (covering.next(), covering.next()) {
            if !chosen.contains(&p) {
                chosen.push(p);
            }
        }
    }
    for &p in &chosen {
        uncovered.retain(|&m| !covers(p, m));
    }
    while !uncovered.is_empty() {
        let best = primes
            .iter()
            .filter(|p| !chosen.contains(p))
            .max_by(|a, b| {
                let ca = uncovered.iter().filter(|&&m| covers(**a, m)).count();
                let cb = uncovered.iter().filter(|&&m| covers(**b, m)).count();
                ca.cmp(&cb)
                    .then(b.1.count_ones().cmp(&a.1.count_ones()))
                    .then(b.cmp(a))
            })
            .copied()
            .expect("primes cover every minterm");
        uncovered.retain(|&m| !covers(best, m));
        chosen.push(best);
    }

    let mut terms: Vec<Vec<(usize, bool)>> = chosen
        .into_iter()
        .map(|(value, care)| {
            (0..n)
                .filter(|i| care >> i & 1 == 1)
                .map(|i| (i, value >> i & 1 == 1))
                .collect()
        })
        .collect();
    // Positive literal before negative one on the same variable.
    terms.sort_by_key(|t| t.iter().map(|&(i, pos)| (i, !pos)).collect::<Vec<_>>());

    let mut products: Vec<Expr> = terms
        .into_iter()
        .map(|lits| {
            let mut factors: Vec<Expr> = lits
                .into_iter()
                .map(|(i, pos)| if pos { Expr::Var(i) } else { Expr::not(Expr::Var(i)) })
                .collect();
            if factors.len() == 1 {
                factors.pop().unwrap()
            } else {
                Expr::And(factors)
            }
        })
        .collect();
    if products.len() == 1 {
        products.pop().unwrap()
    } else {
        Expr::Or(products)
    }
}

fn shannon(table: &[bool], n: usize) -> Expr {
    fn rec(table: &[bool], var: usize) -> Expr {
        if table.iter().all(|&b| b) {
            return Expr::Const(true);
        }
        if table.iter().all(|&b| !b) {
            return Expr::Const(false);
        }
        // `var` is the most significant remaining variable: the low half has x_var = 0.
        let half = table.len() / 2;
        let (low, high) = table.split_at(half);
        if low == high {
            return rec(low, var - 1);
        }
        let x = Expr::Var(var);
        let branch = |lit: Expr, sub: &[bool]| -> Option<Expr> {
            match rec(sub, var.wrapping_sub(1)) {
                Expr::Const(false) => None,
                Expr::Const(true) => Some(lit),
                other => Some(Expr::And(vec![lit, other])),
            }
        };
        let parts: Vec<Expr> = [branch(Expr::not(x.clone()), low), branch(x, high)]
            .into_iter()
            .flatten()
            .collect();
        if parts.len() == 1 {
            parts.into_iter().next().unwrap()
        } else {
            Expr::Or(parts)
        }
    }
    rec(table, n - 1)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::expr::parse_expression;

    fn table(text: &str, n: usize) -> Vec<bool> {
        parse_expression(text, n).unwrap().truth_table(n).unwrap()
    }

    #[test]
    fn small_forms() {
        assert_eq!(expression_from_table(&table("x0", 2), 2).to_string(), "x0");
        assert_eq!(expression_from_table(&table("1", 2), 2).to_string(), "1");
        assert_eq!(expression_from_table(&table("0", 2), 2).to_string(), "0");
        assert_eq!(
            expression_from_table(&table("x0 | !x1", 2), 2).to_string(),
            "x0 | !x1"
        );
        assert_eq!(
            expression_from_table(&table("!x1 | x0 & x1", 2), 2).to_string(),
            "x0 | !x1"
        );
        assert_eq!(expression_from_table(&table("!x0", 2), 2).to_string(), "!x0");
    }

    #[test]
    fn every_two_variable_function_round_trips() {
        for code in 0u32..16 {
            let t: Vec<bool> = (0..4).map(|b| code >> b & 1 == 1).collect();
            let e = expression_from_table(&t, 2);
            assert_eq!(e.truth_table(2).unwrap(), t, "function {code:04b} -> {e}");
        }
    }

    #[test]
    fn shannon_path_is_exact() {
        let e = parse_expression("x0 & !x11 | x3 & x7 | !x5 & x10", 12).unwrap();
        let t = e.truth_table(12).unwrap();
        let back = expression_from_table(&t, 12);
        assert_eq!(back.truth_table(12).unwrap(), t);
    }
}
