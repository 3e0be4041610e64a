//! Hyperelliptic curves `y^2 = f(x)` with `f` monic, separable, of odd degree `2g + 1`.

use num_complex::Complex64;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::numeric::roots::{aberth_roots, poly_eval, poly_from_roots};

/// Curve description as read from JSON. Complex numbers are `[re, im]` pairs.
#[derive(Clone, Debug, Default, Serialize, Deserialize, PartialEq)]
#[serde(deny_unknown_fields)]
pub struct CurveInput {
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub genus: Option<usize>,
    /// Coefficients of `f` from the leading one down to the constant term.
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub coefficients: Option<Vec<[f64; 2]>>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub roots: Option<Vec<[f64; 2]>>,
    /// Permutation of the root list (input order for `roots`, canonical order for `coefficients`).
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub ordering: Option<Vec<usize>>,
}

pub fn c64(p: [f64; 2]) -> Complex64 {
    Complex64::new(p[0], p[1])
}

pub fn pair(z: Complex64) -> [f64; 2] {
    [z.re, z.im]
}

/// A Weierstrass point: a finite branch point `a_k` (index into the ordered roots) or infinity.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
pub enum Weierstrass {
    Finite(usize),
    Infinity,
}

/// A point of the curve, with `y` chosen on a definite sheet.
#[derive(Clone, Copy, Debug, PartialEq)]
pub enum SurfacePoint {
    Infinity,
    Finite { x: Complex64, y: Complex64 },
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Sheet {
    Upper,
    Lower,
}

#[derive(Clone, Debug)]
pub struct Curve {
    genus: usize,
    roots: Vec<Complex64>,
    ordering: Vec<usize>,
    source_roots: Vec<Complex64>,
}

/// Principal square root with the cut on the negative real axis.
pub fn psqrt(z: Complex64) -> Complex64 {
    z.sqrt()
}

fn canonical_key(z: Complex64, scale: f64) -> (i64, f64) {
    ((z.re / scale * 1e10).round() as i64, z.im)
}

/// Canonical ordering: lexicographic by real part (snapped to a relative grid), then imaginary part.
pub fn canonical_ordering(roots: &[Complex64]) -> Vec<usize> {
    let scale = 1.0 + roots.iter().map(|r| r.norm()).fold(0.0, f64::max);
    let mut idx: Vec<usize> = (0..roots.len()).collect();
    idx.sort_by(|&i, &j| {
        let (a, b) = (canonical_key(roots[i], scale), canonical_key(roots[j], scale));
        a.0.cmp(&b.0).then(a.1.total_cmp(&b.1))
    });
    idx
}

/// Ordering by angle about the centroid, starting after the widest angular gap. The chain
/// through the roots in this order is part of a star-shaped polygon and hence simple unless
/// two roots are collinear with the centroid.
pub fn angular_ordering(roots: &[Complex64]) -> Vec<usize> {
    let n = roots.len();
    let c = roots.iter().sum::<Complex64>() / n as f64;
    let mut idx: Vec<usize> = (0..n).collect();
    let key = |i: usize| ((roots[i] - c).arg(), (roots[i] - c).norm());
    idx.sort_by(|&i, &j| {
        let (a, b) = (key(i), key(j));
        a.0.total_cmp(&b.0).then(a.1.total_cmp(&b.1))
    });
    let gap = |k: usize| {
        let a = key(idx[k]).0;
        let b = key(idx[(k + 1) % n]).0;
        if k + 1 == n { b + 2.0 * std::f64::consts::PI - a } else { b - a }
    };
    let widest = (0..n).max_by(|&a, &b| gap(a).total_cmp(&gap(b))).unwrap_or(0);
    idx.rotate_left((widest + 1) % n);
    idx
}

pub(crate) fn dist_point_segment(p: Complex64, a: Complex64, b: Complex64) -> f64 {
    let d = b - a;
    let t = ((p - a) * d.conj()).re / d.norm_sqr();
    let t = t.clamp(0.0, 1.0);
    (a + d * t - p).norm()
}

fn segments_intersect(p1: Complex64, p2: Complex64, q1: Complex64, q2: Complex64) -> bool {
    let scale = [p1, p2, q1, q2].iter().map(|z| z.norm()).fold(1.0, f64::max);
    let eps = 1e-12 * scale * scale;
    let orient = |a: Complex64, b: Complex64, c: Complex64| {
        let d = (b - a).re * (c - a).im - (b - a).im * (c - a).re;
        if d > eps {
            1
        } else if d < -eps {
            -1
        } else {
            0
        }
    };
    let within = |a: Complex64, b: Complex64, c: Complex64| dist_point_segment(c, a, b) <= 1e-12 * scale;
    let (o1, o2) = (orient(p1, p2, q1), orient(p1, p2, q2));
    let (o3, o4) = (orient(q1, q2, p1), orient(q1, q2, p2));
    if o1 * o2 < 0 && o3 * o4 < 0 {
        return true;
    }
    (o1 == 0 && within(p1, p2, q1))
        || (o2 == 0 && within(p1, p2, q2))
        || (o3 == 0 && within(q1, q2, p1))
        || (o4 == 0 && within(q1, q2, p2))
}

impl Curve {
    pub fn from_roots(source: Vec<Complex64>, ordering: Option<Vec<usize>>) -> Result<Self> {
        let n = source.len();
        if n.is_multiple_of(2) {
            return Err(Error::EvenDegree(n));
        }
        if n < 5 {
            return Err(Error::GenusTooSmall { min: 2, got: n / 2 });
        }
        if source.iter().any(|r| !r.is_finite()) {
            return Err(Error::CurveInput("non-finite root".into()));
        }
        let scale = 1.0 + source.iter().map(|r| r.norm()).fold(0.0, f64::max);
        let eps = 1e-8 * scale;
        let mut min_dist = f64::INFINITY;
        for i in 0..n {
            for j in i + 1..n {
                min_dist = min_dist.min((source[i] - source[j]).norm());
            }
        }
        if min_dist <= eps {
            return Err(Error::NotSeparable { min_dist, eps });
        }
        let ordering = match ordering {
            Some(o) => {
                let mut seen = vec![false; n];
                if o.len() != n || o.iter().any(|&i| i >= n || std::mem::replace(&mut seen[i], true)) {
                    return Err(Error::Ordering(format!("{:?} is not a permutation of 0..{}", o, n)));
                }
                o
            }
            None => {
                let canonical = canonical_ordering(&source);
                let roots: Vec<Complex64> = canonical.iter().map(|&i| source[i]).collect();
                let probe = Curve { genus: (n - 1) / 2, roots, ordering: canonical.clone(), source_roots: source.clone() };
                if probe.check_chain().is_ok() {
                    return Ok(probe);
                }
                angular_ordering(&source)
            }
        };
        let roots: Vec<Complex64> = ordering.iter().map(|&i| source[i]).collect();
        let curve = Curve { genus: (n - 1) / 2, roots, ordering, source_roots: source };
        curve.check_chain()?;
        Ok(curve)
    }

    /// Coefficients from the leading term down; the leading coefficient must be 1.
    pub fn from_coefficients(coeffs: &[Complex64], ordering: Option<Vec<usize>>) -> Result<Self> {
        if coeffs.is_empty() {
            return Err(Error::CurveInput("empty coefficient list".into()));
        }
        let deg = coeffs.len() - 1;
        if deg.is_multiple_of(2) {
            return Err(Error::EvenDegree(deg));
        }
        if (coeffs[0] - 1.0).norm() > 1e-12 {
            return Err(Error::NonMonic(format!("{}", coeffs[0])));
        }
        if deg < 5 {
            return Err(Error::GenusTooSmall { min: 2, got: deg / 2 });
        }
        let mut c = coeffs.to_vec();
        c[0] = Complex64::new(1.0, 0.0);
        let found = aberth_roots(&c)?;
        let canon = canonical_ordering(&found);
        let sorted: Vec<Complex64> = canon.iter().map(|&i| found[i]).collect();
        Self::from_roots(sorted, ordering)
    }

    pub fn from_input(input: &CurveInput) -> Result<Self> {
        let curve = match (&input.coefficients, &input.roots) {
            (Some(c), None) => Self::from_coefficients(&c.iter().map(|&p| c64(p)).collect::<Vec<_>>(), input.ordering.clone())?,
            (None, Some(r)) => Self::from_roots(r.iter().map(|&p| c64(p)).collect(), input.ordering.clone())?,
            _ => return Err(Error::CurveInput("exactly one of `coefficients` or `roots` is required".into())),
        };
        if let Some(g) = input.genus {
            if g != curve.genus {
                return Err(Error::CurveInput(format!("declared genus {g} but degree gives {}", curve.genus)));
            }
        }
        Ok(curve)
    }

    /// The cycle construction walks the roots in order; the walk must be a simple polyline.
    fn check_chain(&self) -> Result<()> {
        let a = &self.roots;
        let n = a.len();
        let scale = 1.0 + a.iter().map(|r| r.norm()).fold(0.0, f64::max);
        let tol = 1e-9 * scale;
        for j in 0..n - 1 {
            for (k, &p) in a.iter().enumerate() {
                if k != j && k != j + 1 && dist_point_segment(p, a[j], a[j + 1]) < tol {
                    return Err(Error::Ordering(format!("segment {j} passes through branch point {k}")));
                }
            }
            for i in j + 2..n - 1 {
                if segments_intersect(a[j], a[j + 1], a[i], a[i + 1]) {
                    return Err(Error::Ordering(format!("segments {j} and {i} intersect")));
                }
            }
            if j + 2 < n {
                let u = a[j] - a[j + 1];
                let v = a[j + 2] - a[j + 1];
                if (u / v).arg().abs() < 1e-12 {
                    return Err(Error::Ordering(format!("chain folds back at vertex {}", j + 1)));
                }
            }
        }
        Ok(())
    }

    pub fn genus(&self) -> usize {
        self.genus
    }

    /// Ordered branch points `a_1, ..., a_{2g+1}` (0-based here).
    pub fn roots(&self) -> &[Complex64] {
        &self.roots
    }

    pub fn ordering(&self) -> &[usize] {
        &self.ordering
    }

    pub fn source_roots(&self) -> &[Complex64] {
        &self.source_roots
    }

    pub fn input(&self) -> CurveInput {
        CurveInput {
            genus: Some(self.genus),
            coefficients: None,
            roots: Some(self.source_roots.iter().map(|&r| pair(r)).collect()),
            ordering: Some(self.ordering.clone()),
        }
    }

    /// Coefficients of `f` from the leading one down.
    pub fn coefficients(&self) -> Vec<Complex64> {
        poly_from_roots(&self.roots)
    }

    pub fn f(&self, x: Complex64) -> Complex64 {
        self.roots.iter().map(|&a| x - a).product()
    }

    pub fn f_coeffs_eval(&self, x: Complex64) -> Complex64 {
        poly_eval(&self.coefficients(), x)
    }

    /// `D = prod_{k<l} (a_k - a_l)^2`.
    pub fn discriminant(&self) -> Complex64 {
        let mut d = Complex64::new(1.0, 0.0);
        for k in 0..self.roots.len() {
            for l in k + 1..self.roots.len() {
                d *= (self.roots[k] - self.roots[l]).powi(2);
            }
        }
        d
    }

    pub fn centroid(&self) -> Complex64 {
        self.roots.iter().sum::<Complex64>() / self.roots.len() as f64
    }

    pub fn max_root_norm(&self) -> f64 {
        self.roots.iter().map(|r| r.norm()).fold(0.0, f64::max)
    }

    pub fn weierstrass_points(&self) -> Vec<Weierstrass> {
        (0..self.roots.len()).map(Weierstrass::Finite).chain([Weierstrass::Infinity]).collect()
    }

    /// Multiplicity `g(g-1)/2` carried by each Weierstrass point.
    pub fn weierstrass_weight(&self) -> usize {
        self.genus * (self.genus - 1) / 2
    }

    pub fn point_of(&self, w: Weierstrass) -> SurfacePoint {
        match w {
            Weierstrass::Finite(k) => SurfacePoint::Finite { x: self.roots[k], y: Complex64::new(0.0, 0.0) },
            Weierstrass::Infinity => SurfacePoint::Infinity,
        }
    }

    /// Outward direction of the cut from the last branch point to infinity.
    fn last_cut_direction(&self) -> Complex64 {
        let a = self.roots[2 * self.genus];
        let d = a - self.centroid();
        if d.norm() < 1e-12 {
            Complex64::new(1.0, 0.0)
        } else {
            d / d.norm()
        }
    }

    /// The branch of `y` on the plane cut along `[a_1,a_2], ..., [a_{2g-1},a_{2g}]` and the ray
    /// from `a_{2g+1}` away from the root centroid.
    pub fn y_cut(&self, x: Complex64) -> Complex64 {
        let g = self.genus;
        let mut y = Complex64::new(1.0, 0.0);
        for k in 0..g {
            let (a, b) = (self.roots[2 * k], self.roots[2 * k + 1]);
            y *= (x - b) * psqrt((x - a) / (x - b));
        }
        let d = self.last_cut_direction();
        let c = psqrt(-d);
        y * c * psqrt(-(x - self.roots[2 * g]) * d.conj())
    }

    pub fn point(&self, x: Complex64, sheet: Sheet) -> SurfacePoint {
        let y = self.y_cut(x);
        SurfacePoint::Finite { x, y: if sheet == Sheet::Upper { y } else { -y } }
    }

    pub fn distance_to_branch_points(&self, x: Complex64) -> (usize, f64) {
        self.roots
            .iter()
            .enumerate()
            .map(|(k, &a)| (k, (x - a).norm()))
            .fold((0, f64::INFINITY), |acc, v| if v.1 < acc.1 { v } else { acc })
    }

    /// Continue `y` analytically from `(path[0], y0)` along a polyline.
    pub fn continue_y(&self, path: &[Complex64], y0: Complex64) -> Result<Complex64> {
        let scale = 1.0 + self.max_root_norm();
        let mut y = y0;
        for w in path.windows(2) {
            let (x0, x1) = (w[0], w[1]);
            let mut s = 0.0;
            let len = (x1 - x0).norm();
            if len == 0.0 {
                continue;
            }
            while s < 1.0 {
                let x = x0 + (x1 - x0) * s;
                let (k, d) = self.distance_to_branch_points(x);
                if d < 1e-9 * scale {
                    return Err(Error::PathThroughBranchPoint { index: k, dist: d });
                }
                let step = (0.25 * d / len).max(1e-12);
                s = (s + step).min(1.0);
                let xn = x0 + (x1 - x0) * s;
                let r = psqrt(self.f(xn));
                y = if (r - y).norm() <= (r + y).norm() { r } else { -r };
            }
        }
        Ok(y)
    }

    /// Check that `P` satisfies the curve equation to relative accuracy `tol`.
    pub fn on_curve(&self, p: &SurfacePoint, tol: f64) -> Result<()> {
        if let SurfacePoint::Finite { x, y } = p {
            let f = self.f(*x);
            let res = (y * y - f).norm() / (1.0 + f.norm());
            if res > tol {
                return Err(Error::NotOnCurve(res));
            }
        }
        Ok(())
    }

    pub fn translated(&self, c: Complex64) -> Result<Self> {
        Self::from_roots(self.source_roots.iter().map(|r| r + c).collect(), Some(self.ordering.clone()))
    }

    /// The isomorphic model `y'^2 = x' prod_{k != j}(x' - 1/(a_k - a_j))` with `x' = 1/(x - a_j)`,
    /// which moves `a_j` to infinity and infinity to `x' = 0`. Returns the model and, for each
    /// Weierstrass point of the model, the corresponding point of `self`.
    pub fn with_branch_point_at_infinity(&self, j: usize) -> Result<(Curve, Vec<(Weierstrass, Weierstrass)>)> {
        let aj = self.roots[j];
        let mut new_roots = vec![Complex64::new(0.0, 0.0)];
        let mut origin = vec![Weierstrass::Infinity];
        for (k, &a) in self.roots.iter().enumerate() {
            if k != j {
                new_roots.push(1.0 / (a - aj));
                origin.push(Weierstrass::Finite(k));
            }
        }
        let model = Curve::from_roots(new_roots, None)?;
        let mut map: Vec<(Weierstrass, Weierstrass)> = model
            .ordering
            .iter()
            .enumerate()
            .map(|(new_idx, &src)| (Weierstrass::Finite(new_idx), origin[src]))
            .collect();
        map.push((Weierstrass::Infinity, Weierstrass::Finite(j)));
        Ok((model, map))
    }
}
