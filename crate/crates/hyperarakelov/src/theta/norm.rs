use serde::Serialize;

use super::chars::{CharTable, ThetaChar};
use super::eval::ThetaEvaluator;
use crate::curve::Weierstrass;
use crate::error::{Error, Result};
use crate::periods::{CVec, Periods};

/// Vanishing threshold for the normalized theta in the characteristic scan.
pub const SCAN_TOL: f64 = 1e-6;

#[derive(Clone, Debug, Serialize)]
pub struct CharacteristicScan {
    pub delta: ThetaChar,
    /// Largest normalized value of `theta[delta]` over the scanned divisors.
    pub max_on_divisors: f64,
    /// Smallest such maximum among the rejected characteristics.
    pub runner_up: f64,
    pub matches_eta_u: bool,
}

fn multisets(n: usize, k: usize) -> Vec<Vec<usize>> {
    if k == 0 {
        return vec![vec![]];
    }
    let mut out = Vec::new();
    fn rec(n: usize, k: usize, start: usize, cur: &mut Vec<usize>, out: &mut Vec<Vec<usize>>) {
        if cur.len() == k {
            out.push(cur.clone());
            return;
        }
        for i in start..n {
            cur.push(i);
            rec(n, k, i, cur, out);
            cur.pop();
        }
    }
    rec(n, k, 0, &mut Vec::new(), &mut out);
    out
}

/// The unique characteristic whose theta function vanishes at `u(W_1 + ... + W_{g-1})` for all
/// Weierstrass points `W_i`.
pub fn riemann_characteristic(periods: &Periods, ev: &ThetaEvaluator) -> Result<CharacteristicScan> {
    let g = periods.genus();
    let ws = periods.curve().weierstrass_points();
    let images: Vec<CVec> = ws.iter().map(|&w| periods.branch_image(w)).collect();
    let divisors: Vec<CVec> = multisets(ws.len(), g - 1)
        .iter()
        .map(|d| periods.normalize(&d.iter().fold(CVec::zeros(g), |acc, &i| acc + &images[i])))
        .collect();
    let mut scores: Vec<(f64, ThetaChar)> = ThetaChar::all(g)
        .into_iter()
        .map(|ch| {
            let mut worst: f64 = 0.0;
            for w in &divisors {
                worst = worst.max(ev.normalized(&ch, w).norm());
                if worst > SCAN_TOL {
                    break;
                }
            }
            (worst, ch)
        })
        .collect();
    scores.sort_by(|a, b| a.0.total_cmp(&b.0));
    let hits = scores.iter().filter(|s| s.0 < SCAN_TOL).count();
    if hits != 1 {
        return Err(Error::RiemannCharacteristic(format!("{hits} characteristics vanish on the scanned divisors")));
    }
    let table = CharTable::new(g);
    let delta = scores[0].1.clone();
    Ok(CharacteristicScan {
        matches_eta_u: delta == table.eta_set(&table.u_set()),
        max_on_divisors: scores[0].0,
        runner_up: scores[1].0,
        delta,
    })
}

/// Faltings' norm `||theta||(z) = (det Y)^{1/4} exp(-pi Im(w)^T Y^{-1} Im(w)) |theta[delta](w)|`, `w = mu^{-1} z`.
#[derive(Clone, Debug)]
pub struct FaltingsNorm {
    pub delta: ThetaChar,
    quarter_log_det_y: f64,
}

impl FaltingsNorm {
    pub fn new(periods: &Periods, delta: ThetaChar) -> Self {
        FaltingsNorm { delta, quarter_log_det_y: 0.25 * periods.det_y.ln() }
    }

    pub fn eval(&self, periods: &Periods, ev: &ThetaEvaluator, z: &CVec) -> f64 {
        self.log_eval(periods, ev, z).exp()
    }

    pub fn log_eval(&self, periods: &Periods, ev: &ThetaEvaluator, z: &CVec) -> f64 {
        self.quarter_log_det_y + ev.normalized(&self.delta, &periods.normalize(z)).norm().ln()
    }

    pub fn log_eval_normalized(&self, ev: &ThetaEvaluator, w: &CVec) -> f64 {
        self.quarter_log_det_y + ev.normalized(&self.delta, w).norm().ln()
    }

    pub fn quarter_log_det_y(&self) -> f64 {
        self.quarter_log_det_y
    }

    /// `||theta||` at the sum of Weierstrass images with integer coefficients.
    pub fn at_weierstrass_combination(&self, periods: &Periods, ev: &ThetaEvaluator, terms: &[(i64, Weierstrass)]) -> f64 {
        let g = periods.genus();
        let z = terms.iter().fold(CVec::zeros(g), |acc, &(c, w)| acc + periods.branch_image(w) * num_complex::Complex64::new(c as f64, 0.0));
        self.eval(periods, ev, &z)
    }
}
