//! Closed-form members of the invariant ansatz.

use crate::error::{Error, Result};
use crate::exterior::Coframe;
use crate::models::ansatz::InvariantAnsatz;
use crate::models::constraints::{bindings, derive_constraints, violated, Condition};
use crate::models::elimination::{eliminate, Branch};
use crate::models::su2su2::{su2su2_coframe, StandardForms};
use crate::scalar::{QuadNum, ScalarExpr};
use crate::structures::g2_torsion;

fn q(n: i64, d: i64) -> QuadNum {
    QuadNum::from_frac(n, d)
}

fn root3(n: i64, d: i64) -> QuadNum {
    QuadNum::surd_frac(n, d)
}

/// The torsion-free solution with `k = sign/2`, rotated in the `(ω₂, ω₃)`
/// plane by the rational point `(s, c)` of the unit circle.
///
/// `λ = √3/2`, `μ = √3/3`, `A₃₀ = −sign·√3/3`, `(A₃₂, A₃₃) = (2√3/3)(s, c)`,
/// `A₂₂ = λA₃₃`, `A₂₃ = −λA₃₂`; row 0 completes `A` to a Lorentz matrix.
pub fn bryant_salamon(sign: i32, s: QuadNum, c: QuadNum) -> Result<InvariantAnsatz> {
    if sign.abs() != 1 {
        return Err(Error::Invalid("sign must be ±1".into()));
    }
    if !(&(&s * &s) + &(&c * &c)).is_one() {
        return Err(Error::Invalid("(s, c) must lie on the unit circle".into()));
    }
    let sg = QuadNum::from_int(sign as i64);
    let a30 = &root3(-1, 3) * &sg;
    let r = root3(2, 3);
    let a = [
        [r.clone(), q(0, 1), &a30 * &s, &a30 * &c],
        [q(0, 1), q(1, 1), q(0, 1), q(0, 1)],
        [q(0, 1), q(0, 1), c.clone(), -s.clone()],
        [a30, q(0, 1), &r * &s, &r * &c],
    ];
    let ans = InvariantAnsatz {
        lambda: ScalarExpr::constant(root3(1, 2)),
        mu: ScalarExpr::constant(root3(1, 3)),
        a: a.map(|row| row.map(ScalarExpr::constant)),
        alpha: ScalarExpr::zero(),
        k: ScalarExpr::constant(&sg * &q(1, 2)),
    };
    debug_assert!(ans.is_lorentz());
    Ok(ans)
}

/// The standard representative `(s, c) = (0, 1)`.
pub fn bryant_salamon_standard(sign: i32) -> Result<InvariantAnsatz> {
    bryant_salamon(sign, q(0, 1), q(1, 1))
}

/// Relations for `dφ = 0` and `d∗φ = 0` together with the Lorentz rows.
pub fn torsion_free_relations(frame: &Coframe, std: &StandardForms) -> Vec<ScalarExpr> {
    let a = InvariantAnsatz::symbolic();
    let mut out = a.lorentz_relations();
    for cond in [Condition::Closed, Condition::Coclosed] {
        out.extend(derive_constraints(cond, &a, frame, std).into_iter().map(|r| r.expr));
    }
    out
}

/// Branches of the torsion-free system.
pub fn torsion_free_branches(frame: &Coframe, std: &StandardForms) -> Vec<Branch> {
    eliminate(&torsion_free_relations(frame, std))
}

/// Whether a concrete ansatz lies on `branch`.
pub fn on_branch(branch: &Branch, a: &InvariantAnsatz) -> Result<bool> {
    let b = bindings(a);
    for (x, v) in &branch.solved {
        if v.substitute_all(&b)? != b[x] {
            return Ok(false);
        }
    }
    for (x, e, rep) in &branch.rules {
        let lhs = ScalarExpr::param_pow(x, *e).substitute_all(&b)?;
        if lhs != rep.substitute_all(&b)? {
            return Ok(false);
        }
    }
    Ok(violated(&branch.unresolved, a)?.is_empty())
}

/// Both signs of the torsion-free family, each checked against the
/// eliminated system and against `g2_torsion = 0` on the 7-dimensional structure.
pub fn torsion_free_solutions() -> Result<Vec<InvariantAnsatz>> {
    let std = StandardForms::new();
    let frame = InvariantAnsatz::frame(&su2su2_coframe()?);
    let relations = torsion_free_relations(&frame, &std);
    let branches = eliminate(&relations);
    let mut out = Vec::new();
    for sign in [1, -1] {
        let a = bryant_salamon_standard(sign)?;
        let bad = violated(&relations, &a)?;
        if let Some((r, v)) = bad.first() {
            return Err(Error::Invalid(format!("relation {r} evaluates to {v}")));
        }
        let mut hit = false;
        for br in &branches {
            hit |= on_branch(br, &a)?;
        }
        if !hit {
            return Err(Error::Invalid(format!("sign {sign} lies on no branch")));
        }
        if !g2_torsion(&a.g2(&frame, &std)?)?.is_zero() {
            return Err(Error::Invalid(format!("sign {sign} has torsion")));
        }
        out.push(a);
    }
    Ok(out)
}

/// Symbols fixed on every torsion-free branch.
pub const BRANCH_SYMBOLS: [&str; 5] = ["lambda", "mu", "k", "A30", "alpha"];

/// Final value of `name` on `branch`, with later solutions substituted in.
pub fn branch_value(branch: &Branch, name: &str) -> Option<ScalarExpr> {
    let pos = branch.solved.iter().position(|(x, _)| x == name)?;
    let mut v = branch.solved[pos].1.clone();
    for (x, w) in &branch.solved[pos + 1..] {
        v = v.substitute(x, w).ok()?;
    }
    Some(v)
}

/// `BRANCH_SYMBOLS` on each torsion-free branch; `None` where a symbol stays free.
pub fn torsion_free_values() -> Result<Vec<Vec<(&'static str, Option<ScalarExpr>)>>> {
    let std = StandardForms::new();
    let frame = InvariantAnsatz::frame(&su2su2_coframe()?);
    Ok(torsion_free_branches(&frame, &std)
        .iter()
        .map(|b| BRANCH_SYMBOLS.iter().map(|x| (*x, branch_value(b, x))).collect())
        .collect())
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::models::su2su2::{su2su2_coframe, StandardForms};
    use crate::structures::g2_torsion;

    #[test]
    fn bryant_salamon_is_torsion_free() {
        let std = StandardForms::new();
        let frame = InvariantAnsatz::frame(&su2su2_coframe().unwrap());
        for sign in [1, -1] {
            for (s, c) in [(q(0, 1), q(1, 1)), (q(3, 5), q(4, 5)), (q(-12, 13), q(5, 13))] {
                let a = bryant_salamon(sign, s, c).unwrap();
                assert!(a.is_lorentz());
                let g2 = a.g2(&frame, &std).unwrap();
                assert!(g2.dphi().is_zero());
                assert!(g2.dpsi().is_zero());
                assert!(g2_torsion(&g2).unwrap().is_zero());
            }
        }
    }

    #[test]
    fn branches_fix_the_stated_values() {
        let mut ks = Vec::new();
        for vals in torsion_free_values().unwrap() {
            let v = |i: usize| vals[i].1.clone().unwrap();
            assert_eq!(v(0), ScalarExpr::constant(root3(1, 2)));
            assert_eq!(v(1), ScalarExpr::constant(root3(1, 3)));
            assert_eq!(v(4), ScalarExpr::zero());
            // k = −(3/2)μA₃₀
            assert_eq!(v(2), &(&v(1) * &v(3)) * &ScalarExpr::frac(-3, 2));
            ks.push(v(2));
        }
        assert_eq!(ks.len(), 2);
        assert!(ks.contains(&ScalarExpr::frac(1, 2)) && ks.contains(&ScalarExpr::frac(-1, 2)));
    }

    #[test]
    fn perturbed_mu_has_torsion() {
        let std = StandardForms::new();
        let frame = InvariantAnsatz::frame(&su2su2_coframe().unwrap());
        let mut a = bryant_salamon_standard(1).unwrap();
        a.mu = &a.mu + &ScalarExpr::frac(1, 100);
        let tau = g2_torsion(&a.g2(&frame, &std).unwrap()).unwrap();
        assert!(!tau.tau27.is_zero());
    }

    #[test]
    fn gauge_flip_exchanges_the_signs() {
        use crate::models::constraints::gauge_flip;
        let std = StandardForms::new();
        let frame = InvariantAnsatz::frame(&su2su2_coframe().unwrap());
        let sym = InvariantAnsatz::symbolic();
        // the Lorentz rows tie A₃₀ to row 0, which the flip leaves alone
        let flipped: Vec<ScalarExpr> = [Condition::Closed, Condition::Coclosed]
            .into_iter()
            .flat_map(|c| derive_constraints(c, &sym, &frame, &std))
            .map(|r| gauge_flip(&r.expr))
            .collect();
        let (plus, minus) = (bryant_salamon_standard(1).unwrap(), bryant_salamon_standard(-1).unwrap());
        assert!(violated(&flipped, &plus).unwrap().is_empty());
        assert!(violated(&flipped, &minus).unwrap().is_empty());
        let mut moved = minus.clone();
        moved.k = moved.k.scale(&QuadNum::from_int(-1));
        moved.a[3][0] = moved.a[3][0].scale(&QuadNum::from_int(-1));
        assert_eq!((&moved.k, &moved.a[3][0]), (&plus.k, &plus.a[3][0]));
    }
}
