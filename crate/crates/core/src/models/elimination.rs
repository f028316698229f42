//! Substitution-based elimination for low-degree relation sets.
//!
//! Not a Gröbner basis: relations linear in a symbol with a never-vanishing
//! monomial coefficient are solved and substituted; pure quadratics
//! `c₂x² + c₀` branch on `x = ±√(−c₀/c₂)`; anything left becomes a rewrite
//! rule `x^e → …`. Two relation sets are compared by reducing each against
//! the branches of the other.

use std::collections::BTreeSet;

use serde::Serialize;

use crate::models::constraints::{normalize, NONZERO, POSITIVE};
use crate::scalar::ScalarExpr;

/// One consistent branch of the elimination.
#[derive(Clone, Debug, Default, Serialize)]
pub struct Branch {
    /// `(symbol, value)`, applied in order; later values never mention earlier symbols.
    pub solved: Vec<(String, ScalarExpr)>,
    /// `(symbol, exponent, replacement)` for `symbol^exponent → replacement`.
    pub rules: Vec<(String, i32, ScalarExpr)>,
    /// Relations with no usable leading term; not used for reduction.
    pub unresolved: Vec<ScalarExpr>,
}

fn nonzero_unit(c: &ScalarExpr) -> bool {
    c.is_unit() && c.params().iter().all(|p| NONZERO.contains(&p.as_str()))
}

/// A relation that can never hold on the domain.
fn contradiction(r: &ScalarExpr) -> bool {
    nonzero_unit(r)
}

fn negative_unit(v: &ScalarExpr) -> bool {
    v.is_unit()
        && v.params().iter().all(|p| POSITIVE.contains(&p.as_str()))
        && v.terms().all(|(_, c)| c.signum() < 0)
}

impl Branch {
    fn substitute(&self, r: &ScalarExpr) -> Option<ScalarExpr> {
        let mut out = r.clone();
        for (x, v) in &self.solved {
            out = out.substitute(x, v).ok()?;
        }
        Some(out)
    }

    fn rewrite(&self, r: &ScalarExpr) -> ScalarExpr {
        let mut out = r.clone();
        for _ in 0..64 {
            let mut changed = false;
            for (x, e, rep) in &self.rules {
                let deg = out.degree_in(x);
                if deg < *e {
                    continue;
                }
                for d in (*e..=deg).rev() {
                    let c = out.coeff_of(x, d);
                    if c.is_zero() {
                        continue;
                    }
                    let xd = ScalarExpr::param_pow(x, d);
                    let lower = &(&c * &ScalarExpr::param_pow(x, d - e)) * rep;
                    out = &(&out - &(&c * &xd)) + &lower;
                    changed = true;
                }
            }
            if !changed {
                break;
            }
        }
        out
    }

    /// Normal form of `r` on this branch; zero iff `r` is implied here.
    pub fn reduce(&self, r: &ScalarExpr) -> ScalarExpr {
        match self.substitute(r) {
            Some(s) => normalize(&self.rewrite(&s)),
            None => r.clone(),
        }
    }
}

/// Rank for choosing which symbol to eliminate first.
fn priority(x: &str) -> usize {
    match x {
        _ if x.starts_with('A') => 0,
        "alpha" | "alphadot" => 1,
        "k" => 2,
        "mu" => 3,
        "lambda" => 4,
        _ => 5,
    }
}

fn symbols(rels: &[ScalarExpr]) -> Vec<String> {
    let mut s: Vec<String> = rels.iter().flat_map(|r| r.params()).collect::<BTreeSet<_>>().into_iter().collect();
    s.sort_by_key(|x| (priority(x), x.clone()));
    s
}

fn linear_candidate(rels: &[ScalarExpr]) -> Option<(usize, String, ScalarExpr)> {
    let mut order: Vec<usize> = (0..rels.len()).collect();
    order.sort_by_key(|&i| rels[i].len());
    for i in order {
        let r = &rels[i];
        for x in symbols(std::slice::from_ref(r)) {
            if r.degree_in(&x) != 1 || r.terms().any(|(m, _)| m.param_exp(&x) < 0) {
                continue;
            }
            let c = r.coeff_of(&x, 1);
            if !nonzero_unit(&c) {
                continue;
            }
            let v = (&r.coeff_of(&x, 0) * &c.inverse().ok()?).scale(&crate::scalar::QuadNum::from_int(-1));
            return Some((i, x, v));
        }
    }
    None
}

fn quadratic_candidate(rels: &[ScalarExpr]) -> Option<(usize, String, ScalarExpr)> {
    for (i, r) in rels.iter().enumerate() {
        for x in symbols(std::slice::from_ref(r)) {
            if r.degree_in(&x) != 2 || !r.coeff_of(&x, 1).is_zero() || r.terms().any(|(m, _)| m.param_exp(&x) < 0) {
                continue;
            }
            let c2 = r.coeff_of(&x, 2);
            if !nonzero_unit(&c2) {
                continue;
            }
            let Ok(inv) = c2.inverse() else { continue };
            let sq = (&r.coeff_of(&x, 0) * &inv).scale(&crate::scalar::QuadNum::from_int(-1));
            if let Some(root) = sq.sqrt() {
                return Some((i, x, root));
            }
        }
    }
    None
}

fn tidy(rels: Vec<ScalarExpr>) -> Vec<ScalarExpr> {
    let mut seen = BTreeSet::new();
    rels.into_iter()
        .map(|r| normalize(&r))
        .filter(|r| !r.is_zero() && seen.insert(r.to_string()))
        .collect()
}

/// All consistent branches of a relation set.
pub fn eliminate(relations: &[ScalarExpr]) -> Vec<Branch> {
    let mut done = Vec::new();
    let mut stack = vec![(Branch::default(), tidy(relations.to_vec()))];
    while let Some((mut br, mut rels)) = stack.pop() {
        if rels.iter().any(contradiction) {
            continue;
        }
        if let Some((i, x, v)) = linear_candidate(&rels) {
            if POSITIVE.contains(&x.as_str()) && negative_unit(&v) {
                continue;
            }
            rels.remove(i);
            let Some(next) = rels.iter().map(|r| r.substitute(&x, &v).ok()).collect::<Option<Vec<_>>>() else {
                continue;
            };
            for s in &mut br.solved {
                s.1 = s.1.substitute(&x, &v).unwrap_or_else(|_| s.1.clone());
            }
            br.solved.push((x, v));
            stack.push((br, tidy(next)));
            continue;
        }
        if let Some((i, x, root)) = quadratic_candidate(&rels) {
            for v in [root.clone(), root.scale(&crate::scalar::QuadNum::from_int(-1))] {
                if POSITIVE.contains(&x.as_str()) && negative_unit(&v) {
                    continue;
                }
                let mut b = br.clone();
                let mut rs = rels.clone();
                rs.remove(i);
                let Some(next) = rs.iter().map(|r| r.substitute(&x, &v).ok()).collect::<Option<Vec<_>>>() else {
                    continue;
                };
                for s in &mut b.solved {
                    s.1 = s.1.substitute(&x, &v).unwrap_or_else(|_| s.1.clone());
                }
                b.solved.push((x.clone(), v));
                stack.push((b, tidy(next)));
            }
            continue;
        }
        // leftovers become rewrite rules, inter-reduced in turn
        let mut ok = true;
        rels.sort_by_key(|r| (r.len(), r.to_string()));
        let leftovers = rels.clone();
        for r in rels {
            let r = br.rewrite(&r);
            let r = normalize(&r);
            if r.is_zero() {
                continue;
            }
            if contradiction(&r) {
                ok = false;
                break;
            }
            let heads: BTreeSet<String> = br.rules.iter().map(|x| x.0.clone()).collect();
            let pick = symbols(std::slice::from_ref(&r))
                .into_iter()
                .filter(|x| !heads.contains(x))
                .chain(symbols(std::slice::from_ref(&r)))
                .find_map(|x| {
                    let e = r.degree_in(&x);
                    let lc = r.coeff_of(&x, e);
                    (e > 0 && nonzero_unit(&lc)).then(|| (x, e, lc))
                });
            if let Some((x, e, lc)) = pick {
                let rest = &r - &(&lc * &ScalarExpr::param_pow(&x, e));
                let rep = (&rest * &lc.inverse().expect("unit")).scale(&crate::scalar::QuadNum::from_int(-1));
                br.rules.push((x, e, rep));
            } else {
                br.unresolved.push(r);
            }
        }
        if !ok {
            continue;
        }
        // a rule `x² → c` with an exact root splits the branch
        let split = br.rules.iter().find_map(|(x, e, rep)| {
            let pure = *e == 2 && rep.degree_in(x) == 0 && rep.terms().all(|(m, _)| m.param_exp(x) == 0);
            pure.then(|| rep.sqrt().map(|r| (x.clone(), r))).flatten()
        });
        match split {
            Some((x, root)) => {
                for v in [root.clone(), root.scale(&crate::scalar::QuadNum::from_int(-1))] {
                    if POSITIVE.contains(&x.as_str()) && negative_unit(&v) {
                        continue;
                    }
                    let mut b = Branch { solved: br.solved.clone(), ..Branch::default() };
                    let Some(next) = leftovers.iter().map(|r| r.substitute(&x, &v).ok()).collect::<Option<Vec<_>>>() else {
                        continue;
                    };
                    for s in &mut b.solved {
                        s.1 = s.1.substitute(&x, &v).unwrap_or_else(|_| s.1.clone());
                    }
                    b.solved.push((x.clone(), v));
                    stack.push((b, tidy(next)));
                }
            }
            None => done.push(br),
        }
    }
    done
}

/// Result of reducing one relation set against another.
#[derive(Clone, Debug, Serialize)]
pub struct Implication {
    pub branches: usize,
    /// Relations (with their residue) that failed to reduce to zero on some branch.
    pub failures: Vec<(String, String)>,
}

impl Implication {
    pub fn holds(&self) -> bool {
        self.branches > 0 && self.failures.is_empty()
    }
}

/// Whether every relation in `targets` vanishes on every branch of `premises`.
pub fn implies(premises: &[ScalarExpr], targets: &[ScalarExpr]) -> Implication {
    let branches = eliminate(premises);
    let mut failures = Vec::new();
    for b in &branches {
        for t in targets {
            let r = b.reduce(t);
            if !r.is_zero() {
                failures.push((t.to_string(), r.to_string()));
            }
        }
    }
    Implication { branches: branches.len(), failures }
}
