//! Circle bundles over solvable model frames with a sheared, weighted SU(3)
//! coframe. They exercise every term of the invariant torsion formula.
//!
//! Labels: `th`, `e1`..`e6`; `e1` is radial and `th` the fibre direction.

use crate::error::Result;
use crate::exterior::{Coframe, CoframeSpec, FormExpr, MetricExpr};
use crate::scalar::ScalarExpr;
use crate::structures::{CircleBundleData, SU3Structure};

/// Model data: structure equations, the weights `Eᵢ = t^{wᵢ}(eⁱ + Σ sᵢⱼ eʲ)`
/// and the orbit length `t^orbit`.
#[derive(Clone, Debug)]
pub struct ShearedBundle {
    pub d_rules: Vec<(&'static str, String)>,
    pub weights: [i32; 6],
    pub shear: Vec<(usize, usize, i64)>,
    pub orbit: i32,
}

impl ShearedBundle {
    pub fn frame(&self) -> Result<Coframe> {
        let labels = ["th", "e1", "e2", "e3", "e4", "e5", "e6"].map(String::from).to_vec();
        Coframe::from_spec(&CoframeSpec {
            labels,
            d_rules: self.d_rules.iter().map(|(l, r)| (l.to_string(), r.clone())).collect(),
            radial: Some("e1".into()),
            mc_scale: "1".into(),
        })
    }

    pub fn build(&self) -> Result<CircleBundleData> {
        let frame = self.frame()?;
        let n = 7;
        let mut es: Vec<FormExpr> = (1..n).map(|i| FormExpr::basis(n, &[i])).collect();
        for &(i, j, c) in &self.shear {
            es[i - 1] = es[i - 1].add(&FormExpr::basis(n, &[j]).scale_int(c));
        }
        let e = |i: usize| es[i - 1].scale(&ScalarExpr::t_pow(self.weights[i - 1]));
        let omega = e(1).wedge(&e(2)).add(&e(3).wedge(&e(4))).add(&e(5).wedge(&e(6)));
        let e3 = |a: usize, b: usize, c: usize| e(a).wedge(&e(b)).wedge(&e(c));
        let re = e3(1, 3, 5).sub(&e3(1, 4, 6)).sub(&e3(2, 3, 6)).sub(&e3(2, 4, 5));
        let im = e3(1, 3, 6).add(&e3(1, 4, 5)).add(&e3(2, 3, 5)).sub(&e3(2, 4, 6));
        let mut g = vec![vec![ScalarExpr::zero(); n]; n];
        for i in 1..n {
            let c = e(i).one_form_coeffs();
            for a in 0..n {
                for b in 0..n {
                    g[a][b] += &(&c[a] * &c[b]);
                }
            }
        }
        let vol = omega.pow_wedge(3).scale(&ScalarExpr::frac(1, 6)).top_coeff();
        let metric = MetricExpr::with_volume(n, 0b111_1110, g, vol)?;
        let su3 = SU3Structure::new(frame, omega, re, im, metric)?;
        let mut xi = vec![ScalarExpr::zero(); n];
        xi[0] = ScalarExpr::one();
        CircleBundleData::new(su3, FormExpr::basis(n, &[0]), ScalarExpr::t_pow(self.orbit), xi)
    }
}

/// A fixed family of valid models spanning the invariant-formula terms.
pub fn sheared_samples() -> Vec<ShearedBundle> {
    let algebras: [&[(&str, &str)]; 2] = [
        &[("e4", "e[2,3]"), ("e5", "e[2,4]"), ("e6", "e[3,4]")],
        &[("e3", "e[2,3]"), ("e4", "e[2,4]"), ("e5", "e[2,5]"), ("e6", "e[2,6] + e[3,4]")],
    ];
    let curvatures = [
        "e[2,3] + 2*e[2,4] + e[2,6]",
        "e[3,4] + e[2,5] - e[2,3]",
        "3*e[2,6] + e[2,4]",
        "e[2,3]",
        "e[2,4] - 2*e[3,4]",
        "e[2,5] + e[2,3]",
    ];
    let weights = [[0, 1, 1, 2, 1, 0], [0, 2, 1, 1, 3, 1], [1, 0, 2, 1, 0, 2]];
    let shears: [&[(usize, usize, i64)]; 3] = [&[(2, 4, 1), (3, 5, -1)], &[(1, 3, 2), (4, 6, 1)], &[]];
    let mut out = Vec::new();
    for (ai, alg) in algebras.iter().enumerate() {
        for (ci, curv) in curvatures.iter().enumerate() {
            let mut d_rules: Vec<(&'static str, String)> = alg.iter().map(|(l, r)| (*l, r.to_string())).collect();
            d_rules.push(("th", curv.to_string()));
            let b = ShearedBundle {
                d_rules,
                weights: weights[(ai + ci) % 3],
                shear: shears[(ai + 2 * ci) % 3].to_vec(),
                orbit: [1, 2, -1][ci % 3],
            };
            if b.build().is_ok() {
                out.push(b);
            }
        }
    }
    out
}
