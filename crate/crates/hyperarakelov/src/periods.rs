//! Period matrix `(mu | mu')` of the differentials `x^{k-1} dx / 2y` over an explicit
//! symplectic homology basis, and the Abel-Jacobi map based at infinity.
//!
//! The branch points are joined by the polyline `a_1 -> a_2 -> ... -> a_{2g+1}`. The cycle
//! `A_k` encircles `[a_{2k-1}, a_{2k}]`, and `B_k` encircles `a_{2k}, ..., a_{2g+1}`; both are
//! lifted on the left side of the polyline. Loop integrals reduce to twice the segment integrals.

use std::f64::consts::PI;

use nalgebra::{Cholesky, DMatrix, DVector, SymmetricEigen};
use num_complex::Complex64;
use serde::{Deserialize, Serialize};

use crate::curve::{pair, psqrt, Curve, CurveInput, SurfacePoint, Weierstrass};
use crate::error::{Error, Result};
use crate::numeric::quad::{adaptive_gk, gauss_chebyshev_vec};

pub type CMat = DMatrix<Complex64>;
pub type CVec = DVector<Complex64>;

const I: Complex64 = Complex64 { re: 0.0, im: 1.0 };

#[derive(Clone, Copy, Debug, Serialize, Deserialize, PartialEq)]
pub struct PeriodConfig {
    /// Relative change at which node doubling stops.
    pub rtol: f64,
    pub n0: usize,
    pub n_max: usize,
    /// Tolerance for Abel-Jacobi path integrals.
    pub aj_tol: f64,
}

impl Default for PeriodConfig {
    fn default() -> Self {
        PeriodConfig { rtol: 1e-12, n0: 64, n_max: 4096, aj_tol: 1e-13 }
    }
}

#[derive(Clone, Debug, Serialize, Deserialize, PartialEq)]
pub struct PeriodDiagnostics {
    pub symmetry_residual: f64,
    pub min_eigenvalue: f64,
    pub max_nodes: usize,
    pub sheet_sign_residual: f64,
    pub half_period_residual: f64,
    pub b_cycles_reversed: bool,
}

/// Path choice for the Abel-Jacobi map.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum AjRoute {
    Auto,
    FromBranchPoint(usize),
    FromInfinity,
}

#[derive(Clone, Debug)]
pub struct Periods {
    curve: Curve,
    pub mu: CMat,
    pub mu_prime: CMat,
    pub mu_inv: CMat,
    pub tau: CMat,
    pub det_mu: Complex64,
    pub y: DMatrix<f64>,
    pub y_inv: DMatrix<f64>,
    pub det_y: f64,
    pub lambda_min: f64,
    /// Sign-corrected segment integrals `J_j` along the polyline.
    pub segments: Vec<CVec>,
    /// `u(a_j)` for the ordered finite branch points.
    pub branch_images: Vec<CVec>,
    pub center: Complex64,
    pub r_inf: f64,
    pub aj_tol: f64,
    pub diagnostics: PeriodDiagnostics,
}

/// Serializable form used by the period cache.
#[derive(Clone, Debug, Serialize, Deserialize, PartialEq)]
pub struct PeriodRecord {
    pub curve: CurveInput,
    pub config: PeriodConfig,
    pub mu: Vec<Vec<[f64; 2]>>,
    pub mu_prime: Vec<Vec<[f64; 2]>>,
    pub segments: Vec<Vec<[f64; 2]>>,
    pub branch_images: Vec<Vec<[f64; 2]>>,
    pub diagnostics: PeriodDiagnostics,
}

fn mat_rows(m: &CMat) -> Vec<Vec<[f64; 2]>> {
    (0..m.nrows()).map(|i| (0..m.ncols()).map(|j| pair(m[(i, j)])).collect()).collect()
}

fn rows_mat(r: &[Vec<[f64; 2]>]) -> CMat {
    let n = r.len();
    let m = r.first().map_or(0, |x| x.len());
    CMat::from_fn(n, m, |i, j| Complex64::new(r[i][j][0], r[i][j][1]))
}

fn vecs(v: &[CVec]) -> Vec<Vec<[f64; 2]>> {
    v.iter().map(|x| x.iter().map(|&z| pair(z)).collect()).collect()
}

fn unvecs(v: &[Vec<[f64; 2]>]) -> Vec<CVec> {
    v.iter().map(|x| CVec::from_iterator(x.len(), x.iter().map(|p| Complex64::new(p[0], p[1])))).collect()
}

fn powers(x: Complex64, g: usize) -> impl Iterator<Item = Complex64> {
    (0..g).scan(Complex64::new(1.0, 0.0), move |p, _| {
        let cur = *p;
        *p *= x;
        Some(cur)
    })
}

/// Real coordinates `(alpha, beta)` with `w = alpha + tau beta`.
pub fn real_coordinates(tau: &CMat, y_inv: &DMatrix<f64>, w: &CVec) -> (DVector<f64>, DVector<f64>) {
    let im = w.map(|z| z.im);
    let beta = y_inv * im;
    let x = tau.map(|z| z.re);
    let alpha = w.map(|z| z.re) - x * &beta;
    (alpha, beta)
}

impl Periods {
    pub fn compute(curve: &Curve, cfg: &PeriodConfig) -> Result<Self> {
        let g = curve.genus();
        let a = curve.roots();
        let nseg = 2 * g;
        let mut raw = Vec::with_capacity(nseg);
        let mut max_nodes = 0;
        for j in 0..nseg {
            let (v, n) = segment_integral(curve, j, cfg)?;
            max_nodes = max_nodes.max(n);
            raw.push(v);
        }
        // sheet signs of the left-side lift
        let mut eps = vec![1.0f64; nseg];
        let mut sign_res: f64 = 0.0;
        for j in 0..nseg - 1 {
            let v = a[j + 1];
            let (dj, dn) = (a[j + 1] - a[j], a[j + 2] - a[j + 1]);
            let l_in = I * (dj / dj.norm()) * dj.norm().sqrt() * h_factor(curve, j, v);
            let l_out = I * (dn / dn.norm()) * dn.norm().sqrt() * h_factor(curve, j + 1, v);
            let th_in = (a[j] - v).arg();
            let th_out = (a[j + 2] - v).arg();
            let alpha = (th_in - th_out).rem_euclid(2.0 * PI);
            let ratio = l_in * Complex64::from_polar(1.0, -alpha / 2.0) / l_out;
            let s = ratio.re.signum();
            sign_res = sign_res.max((ratio - s).norm());
            eps[j + 1] = eps[j] * s;
        }
        if sign_res > 1e-6 {
            return Err(Error::BadPeriods(format!("sheet sign ratio off by {sign_res:.3e}")));
        }
        let segments: Vec<CVec> = raw.iter().zip(&eps).map(|(v, &e)| v * Complex64::new(e, 0.0)).collect();
        let mut mu = CMat::zeros(g, g);
        let mut mu_prime = CMat::zeros(g, g);
        for k in 0..g {
            mu.set_column(k, &(&segments[2 * k] * Complex64::new(2.0, 0.0)));
            let mut b = CVec::zeros(g);
            for i in k..g {
                b += &segments[2 * i + 1];
            }
            mu_prime.set_column(k, &(b * Complex64::new(2.0, 0.0)));
        }
        let mut per = Self::assemble(curve, mu, mu_prime, segments, Vec::new(), cfg.aj_tol, max_nodes, sign_res)?;
        per.branch_images = per.compute_branch_images()?;
        per.diagnostics.half_period_residual = per.half_period_residual();
        if per.diagnostics.half_period_residual > 1e-8 {
            return Err(Error::BadPeriods(format!(
                "branch point images are not half periods (residual {:.3e})",
                per.diagnostics.half_period_residual
            )));
        }
        Ok(per)
    }

    #[allow(clippy::too_many_arguments)]
    fn assemble(
        curve: &Curve,
        mu: CMat,
        mut mu_prime: CMat,
        segments: Vec<CVec>,
        branch_images: Vec<CVec>,
        aj_tol: f64,
        max_nodes: usize,
        sign_res: f64,
    ) -> Result<Self> {
        let mu_inv = mu.clone().try_inverse().ok_or_else(|| Error::BadPeriods("A-periods are singular".into()))?;
        let mut tau = &mu_inv * &mu_prime;
        let mut reversed = false;
        let eig = SymmetricEigen::new(sym_im(&tau)).eigenvalues;
        if eig.iter().all(|&e| e < 0.0) {
            mu_prime = -mu_prime;
            tau = -tau;
            reversed = true;
        }
        let y = sym_im(&tau);
        let eig = SymmetricEigen::new(y.clone()).eigenvalues;
        let lambda_min = eig.iter().cloned().fold(f64::INFINITY, f64::min);
        if lambda_min <= 0.0 {
            return Err(Error::BadPeriods(format!("Im tau is not positive definite (min eigenvalue {lambda_min:.3e})")));
        }
        let tn = tau.iter().map(|z| z.norm()).fold(0.0, f64::max);
        let symmetry_residual = (&tau - tau.transpose()).iter().map(|z| z.norm()).fold(0.0, f64::max) / tn;
        if symmetry_residual > 1e-8 {
            return Err(Error::BadPeriods(format!("tau is not symmetric (residual {symmetry_residual:.3e})")));
        }
        // symmetrize the tiny quadrature asymmetry away
        let tau = (&tau + tau.transpose()) * Complex64::new(0.5, 0.0);
        let det_y = y.determinant();
        let y_inv = Cholesky::new(y.clone()).expect("positive definite").inverse();
        let det_mu = mu.determinant();
        let center = curve.centroid();
        let r_inf = 2.0 * curve.roots().iter().map(|r| (r - center).norm()).fold(0.0, f64::max);
        Ok(Periods {
            curve: curve.clone(),
            mu,
            mu_prime,
            mu_inv,
            tau,
            det_mu,
            y,
            y_inv,
            det_y,
            lambda_min,
            segments,
            branch_images,
            center,
            r_inf,
            aj_tol,
            diagnostics: PeriodDiagnostics {
                symmetry_residual,
                min_eigenvalue: lambda_min,
                max_nodes,
                sheet_sign_residual: sign_res,
                half_period_residual: 0.0,
                b_cycles_reversed: reversed,
            },
        })
    }

    pub fn to_record(&self, cfg: &PeriodConfig) -> PeriodRecord {
        PeriodRecord {
            curve: self.curve.input(),
            config: *cfg,
            mu: mat_rows(&self.mu),
            mu_prime: mat_rows(&self.mu_prime),
            segments: vecs(&self.segments),
            branch_images: vecs(&self.branch_images),
            diagnostics: self.diagnostics.clone(),
        }
    }

    pub fn from_record(rec: &PeriodRecord) -> Result<Self> {
        let curve = Curve::from_input(&rec.curve)?;
        let g = curve.genus();
        let ok = rec.mu.len() == g && rec.mu_prime.len() == g && rec.segments.len() == 2 * g && rec.branch_images.len() == 2 * g + 1;
        if !ok {
            return Err(Error::BadPeriods("cached record has wrong shape".into()));
        }
        let mut per = Self::assemble(
            &curve,
            rows_mat(&rec.mu),
            rows_mat(&rec.mu_prime),
            unvecs(&rec.segments),
            unvecs(&rec.branch_images),
            rec.config.aj_tol,
            rec.diagnostics.max_nodes,
            rec.diagnostics.sheet_sign_residual,
        )?;
        if per.diagnostics.b_cycles_reversed {
            return Err(Error::BadPeriods("cached record is not normalized".into()));
        }
        per.diagnostics = rec.diagnostics.clone();
        Ok(per)
    }

    pub fn curve(&self) -> &Curve {
        &self.curve
    }

    pub fn genus(&self) -> usize {
        self.curve.genus()
    }

    /// `w = mu^{-1} z`.
    pub fn normalize(&self, z: &CVec) -> CVec {
        &self.mu_inv * z
    }

    pub fn real_coordinates(&self, z: &CVec) -> (DVector<f64>, DVector<f64>) {
        real_coordinates(&self.tau, &self.y_inv, &self.normalize(z))
    }

    /// Distance of `z` from the period lattice, measured in lattice coordinates.
    pub fn lattice_residual(&self, z: &CVec) -> f64 {
        let (a, b) = self.real_coordinates(z);
        a.iter().chain(b.iter()).map(|v| (v - v.round()).abs()).fold(0.0, f64::max)
    }

    /// Characteristic `[2 beta; 2 alpha] mod 2` of a half period `z = mu(alpha + tau beta)`.
    pub fn half_period_characteristic(&self, z: &CVec) -> (Vec<u8>, Vec<u8>) {
        let (a, b) = self.real_coordinates(z);
        let bit = |v: f64| ((2.0 * v).round() as i64).rem_euclid(2) as u8;
        (b.iter().map(|&v| bit(v)).collect(), a.iter().map(|&v| bit(v)).collect())
    }

    fn half_period_residual(&self) -> f64 {
        self.branch_images
            .iter()
            .map(|u| self.lattice_residual(&(u * Complex64::new(2.0, 0.0))))
            .fold(0.0, f64::max)
    }

    pub fn branch_image(&self, w: Weierstrass) -> CVec {
        match w {
            Weierstrass::Finite(k) => self.branch_images[k].clone(),
            Weierstrass::Infinity => CVec::zeros(self.genus()),
        }
    }

    /// `z(t) = int_0^t` of the differentials in the chart `x = c + t^{-2}` at infinity.
    pub fn z_infinity(&self, t: Complex64, c: Complex64) -> Result<CVec> {
        let g = self.genus();
        let roots = self.curve.roots().to_vec();
        let f = |sig: f64| {
            let s = t * sig;
            let s2 = s * s;
            let r: Complex64 = roots.iter().map(|&a| psqrt(1.0 + (c - a) * s2)).product();
            (1..=g)
                .map(|k| (1.0 + c * s2).powi(k as i32 - 1) * s.powi(2 * (g - k) as i32) / r * t)
                .collect::<Vec<_>>()
        };
        let scale = t.norm().max(1e-300);
        let v = adaptive_gk(f, 0.0, 1.0, g, self.aj_tol * scale, self.aj_tol, 400)?;
        Ok(CVec::from_vec(v))
    }

    /// The curve point at parameter `t` of the chart `x = c + t^{-2}`, `y = -t^{-(2g+1)} R(t)`.
    pub fn point_at_t(&self, t: Complex64, c: Complex64) -> SurfacePoint {
        let g = self.genus();
        let r: Complex64 = self.curve.roots().iter().map(|&a| psqrt(1.0 + (c - a) * t * t)).product();
        SurfacePoint::Finite { x: c + 1.0 / (t * t), y: -r / t.powi(2 * g as i32 + 1) }
    }

    /// Chart parameter of `(x, y)`; requires `|x - c|` large enough for the chart.
    pub fn t_of_point(&self, x: Complex64, y: Complex64, c: Complex64) -> Complex64 {
        let t0 = psqrt(1.0 / (x - c));
        match self.point_at_t(t0, c) {
            SurfacePoint::Finite { y: y0, .. } if (y0 - y).norm() <= (y0 + y).norm() => t0,
            _ => -t0,
        }
    }

    /// `int_{a_m}^{(x, y)}` along the straight segment; no other branch point may lie on it.
    pub fn from_branch_point(&self, m: usize, x: Complex64, y: Complex64) -> Result<CVec> {
        let g = self.genus();
        let roots = self.curve.roots().to_vec();
        let am = roots[m];
        let dx = x - am;
        let f = |sig: f64| {
            let xs = am + dx * sig * sig;
            let gs: Complex64 = roots
                .iter()
                .enumerate()
                .filter(|&(k, _)| k != m)
                .map(|(_, &ak)| psqrt((xs - ak) / (x - ak)))
                .product();
            powers(xs, g).map(|p| p / gs).collect::<Vec<_>>()
        };
        let v = adaptive_gk(f, 0.0, 1.0, g, self.aj_tol, self.aj_tol, 400)?;
        let pref = dx / y;
        Ok(CVec::from_iterator(g, v.into_iter().map(|z| z * pref)))
    }

    fn compute_branch_images(&self) -> Result<Vec<CVec>> {
        let g = self.genus();
        let roots = self.curve.roots();
        let last = 2 * g;
        let al = roots[last];
        let c = self.center;
        let radius = 1.5 * self.r_inf.max(1e-3);
        // choose the approach direction keeping the other branch points far from the segment
        let mut best = (f64::NEG_INFINITY, Complex64::new(0.0, 0.0));
        for k in 0..32 {
            let x0 = c + Complex64::from_polar(radius, 2.0 * PI * k as f64 / 32.0);
            let d = roots[..last]
                .iter()
                .map(|&p| crate::curve::dist_point_segment(p, al, x0))
                .fold(f64::INFINITY, f64::min);
            if d > best.0 {
                best = (d, x0);
            }
        }
        let x0 = best.1;
        let t0 = psqrt(1.0 / (x0 - c));
        let SurfacePoint::Finite { y: y0, .. } = self.point_at_t(t0, c) else { unreachable!() };
        let z_far = self.z_infinity(t0, c)?;
        let seg = self.from_branch_point(last, x0, y0)?;
        let u_last = z_far - seg;
        let mut images = vec![CVec::zeros(g); last + 1];
        images[last] = u_last.clone();
        let mut acc = u_last;
        for j in (0..last).rev() {
            acc -= &self.segments[j];
            images[j] = acc.clone();
        }
        Ok(images)
    }

    pub fn abel_jacobi(&self, p: &SurfacePoint) -> Result<CVec> {
        self.abel_jacobi_via(p, AjRoute::Auto)
    }

    /// `u(P) = int_infinity^P (mu_1, ..., mu_g)`.
    pub fn abel_jacobi_via(&self, p: &SurfacePoint, route: AjRoute) -> Result<CVec> {
        let (x, y) = match *p {
            SurfacePoint::Infinity => return Ok(CVec::zeros(self.genus())),
            SurfacePoint::Finite { x, y } => (x, y),
        };
        let (nearest, dist) = self.curve.distance_to_branch_points(x);
        if dist == 0.0 {
            return Ok(self.branch_images[nearest].clone());
        }
        let route = match route {
            AjRoute::Auto if (x - self.center).norm() > self.r_inf => AjRoute::FromInfinity,
            AjRoute::Auto => AjRoute::FromBranchPoint(nearest),
            r => r,
        };
        match route {
            AjRoute::FromInfinity => {
                let t = self.t_of_point(x, y, self.center);
                self.z_infinity(t, self.center)
            }
            AjRoute::FromBranchPoint(m) => {
                let roots = self.curve.roots();
                let scale = 1.0 + self.curve.max_root_norm();
                for (k, &ak) in roots.iter().enumerate() {
                    if k != m && crate::curve::dist_point_segment(ak, roots[m], x) < 1e-9 * scale {
                        return Err(Error::PathThroughBranchPoint { index: k, dist: 0.0 });
                    }
                }
                Ok(&self.branch_images[m] + self.from_branch_point(m, x, y)?)
            }
            AjRoute::Auto => unreachable!(),
        }
    }

    /// `|z_k - z_g^{2(g-k)+1} / (2(g-k)+1)|` for `k = 1..g-1` in the chart `x = t^{-2}`.
    pub fn local_coordinate_residual(&self, t: Complex64) -> Result<Vec<f64>> {
        let g = self.genus();
        if t.norm() == 0.0 {
            return Ok(vec![0.0; g - 1]);
        }
        let z = self.z_infinity(t, Complex64::new(0.0, 0.0))?;
        let zg = z[g - 1];
        Ok((1..g)
            .map(|k| {
                let n = 2 * (g - k) as i32 + 1;
                (z[k - 1] - zg.powi(n) / n as f64).norm()
            })
            .collect())
    }

    pub fn summary_json(&self) -> serde_json::Value {
        serde_json::json!({
            "det_im_tau": self.det_y,
            "det_mu": pair(self.det_mu),
            "diagnostics": self.diagnostics,
            "mu": mat_rows(&self.mu),
            "mu_prime": mat_rows(&self.mu_prime),
            "tau": mat_rows(&self.tau),
        })
    }
}

fn sym_im(tau: &CMat) -> DMatrix<f64> {
    let im = tau.map(|z| z.im);
    (&im + im.transpose()) * 0.5
}

/// `H_j(x) = prod_{k != j, j+1} sqrt(m - a_k) sqrt((x - a_k)/(m - a_k))`, `m` the midpoint of segment `j`.
fn h_factor(curve: &Curve, j: usize, x: Complex64) -> Complex64 {
    let a = curve.roots();
    let m = (a[j] + a[j + 1]) / 2.0;
    a.iter()
        .enumerate()
        .filter(|&(k, _)| k != j && k != j + 1)
        .map(|(_, &ak)| psqrt(m - ak) * psqrt((x - ak) / (m - ak)))
        .product()
}

/// `int_{a_j}^{a_{j+1}} x^{k-1} dx / 2y_j` with `y_j = i (d/2) sqrt(1-s^2) H_j(x)`.
fn segment_integral(curve: &Curve, j: usize, cfg: &PeriodConfig) -> Result<(CVec, usize)> {
    let g = curve.genus();
    let a = curve.roots();
    let m = (a[j] + a[j + 1]) / 2.0;
    let d = a[j + 1] - a[j];
    let h = |s: f64| {
        let x = m + d * (s / 2.0);
        let hx = h_factor(curve, j, x);
        powers(x, g).map(|p| p / hx).collect::<Vec<_>>()
    };
    let (v, n) = gauss_chebyshev_vec(h, g, cfg.n0, cfg.n_max, cfg.rtol)?;
    let f = 1.0 / (2.0 * I);
    Ok((CVec::from_iterator(g, v.into_iter().map(|z| z * f)), n))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::curve::Sheet;

    fn c(re: f64, im: f64) -> Complex64 {
        Complex64::new(re, im)
    }

    pub(crate) fn quintic_minus_x() -> Curve {
        Curve::from_coefficients(&[c(1., 0.), c(0., 0.), c(0., 0.), c(0., 0.), c(-1., 0.), c(0., 0.)], None).unwrap()
    }

    #[test]
    fn period_matrix_is_riemann_matrix() {
        let cv = quintic_minus_x();
        let p = Periods::compute(&cv, &PeriodConfig::default()).unwrap();
        assert!(p.diagnostics.symmetry_residual < 1e-10, "{:?}", p.diagnostics);
        assert!(p.lambda_min > 0.0);
        assert!(p.diagnostics.half_period_residual < 1e-10);
    }

    #[test]
    fn abel_jacobi_routes_agree_mod_lattice() {
        let cv = quintic_minus_x();
        let p = Periods::compute(&cv, &PeriodConfig::default()).unwrap();
        let pt = cv.point(c(0.4, 0.9), Sheet::Upper);
        let u1 = p.abel_jacobi_via(&pt, AjRoute::FromBranchPoint(3)).unwrap();
        let u2 = p.abel_jacobi_via(&pt, AjRoute::FromBranchPoint(4)).unwrap();
        let u3 = p.abel_jacobi_via(&pt, AjRoute::FromInfinity).unwrap();
        assert!(p.lattice_residual(&(&u1 - &u2)) < 1e-10);
        assert!(p.lattice_residual(&(&u1 - &u3)) < 1e-10);
        // involution
        let SurfacePoint::Finite { x, y } = pt else { unreachable!() };
        let v = p.abel_jacobi(&SurfacePoint::Finite { x, y: -y }).unwrap();
        assert!(p.lattice_residual(&(&u1 + &v)) < 1e-10);
    }

    #[test]
    fn local_coordinate_expansion() {
        let cv = Curve::from_roots(vec![c(-1.0, 0.0), c(-0.3, 0.8), c(0.2, -0.5), c(0.7, 0.1), c(1.3, 0.0)], None).unwrap();
        let p = Periods::compute(&cv, &PeriodConfig::default()).unwrap();
        assert_eq!(p.local_coordinate_residual(c(0.0, 0.0)).unwrap(), vec![0.0]);
        let r1 = p.local_coordinate_residual(c(4e-2, 1e-2)).unwrap()[0];
        let r2 = p.local_coordinate_residual(c(2e-2, 5e-3)).unwrap()[0];
        let slope = (r1 / r2).log2();
        // z_1 is odd in t, so the residual decays one order faster than the bound t^4
        assert!(slope > 3.8, "slope {slope}");
        let t = c(1e-3, 0.0);
        let z = p.z_infinity(t, c(0.0, 0.0)).unwrap();
        assert!((z[1] / t - 1.0).norm() < 1e-5);
    }
}
