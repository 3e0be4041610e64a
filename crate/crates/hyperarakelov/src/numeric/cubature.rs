//! Adaptive two-dimensional cubature with the degree 7/5 Genz-Malik pair.

use std::collections::BinaryHeap;

const N: f64 = 2.0;

struct Rule {
    l2: f64,
    l3: f64,
    l4: f64,
    l5: f64,
    w: [f64; 5],
    wp: [f64; 4],
}

fn rule() -> Rule {
    Rule {
        l2: (9.0f64 / 70.0).sqrt(),
        l3: (9.0f64 / 10.0).sqrt(),
        l4: (9.0f64 / 10.0).sqrt(),
        l5: (9.0f64 / 19.0).sqrt(),
        w: [
            (12824.0 - 9120.0 * N + 400.0 * N * N) / 19683.0,
            980.0 / 6561.0,
            (1820.0 - 400.0 * N) / 19683.0,
            200.0 / 19683.0,
            6859.0 / 19683.0 / 4.0,
        ],
        wp: [
            (729.0 - 950.0 * N + 50.0 * N * N) / 729.0,
            245.0 / 486.0,
            (265.0 - 100.0 * N) / 1458.0,
            25.0 / 729.0,
        ],
    }
}

#[derive(Clone, Copy, Debug)]
pub struct Rect {
    pub x0: f64,
    pub x1: f64,
    pub y0: f64,
    pub y1: f64,
}

struct Cell {
    rect: Rect,
    val: f64,
    err: f64,
    split_x: bool,
}

impl PartialEq for Cell {
    fn eq(&self, o: &Self) -> bool {
        self.err == o.err
    }
}
impl Eq for Cell {}
impl PartialOrd for Cell {
    fn partial_cmp(&self, o: &Self) -> Option<std::cmp::Ordering> {
        Some(self.cmp(o))
    }
}
impl Ord for Cell {
    fn cmp(&self, o: &Self) -> std::cmp::Ordering {
        self.err.total_cmp(&o.err)
    }
}

fn apply<F: Fn(f64, f64) -> f64>(f: &F, r: &Rect, rule: &Rule) -> Cell {
    let cx = 0.5 * (r.x0 + r.x1);
    let cy = 0.5 * (r.y0 + r.y1);
    let hx = 0.5 * (r.x1 - r.x0);
    let hy = 0.5 * (r.y1 - r.y0);
    let at = |u: f64, v: f64| f(cx + hx * u, cy + hy * v);
    let f0 = at(0.0, 0.0);
    let (a2x, b2x, a2y, b2y) = (at(rule.l2, 0.0), at(-rule.l2, 0.0), at(0.0, rule.l2), at(0.0, -rule.l2));
    let (a3x, b3x, a3y, b3y) = (at(rule.l3, 0.0), at(-rule.l3, 0.0), at(0.0, rule.l3), at(0.0, -rule.l3));
    let s2 = a2x + b2x + a2y + b2y;
    let s3 = a3x + b3x + a3y + b3y;
    let s4 = at(rule.l4, rule.l4) + at(rule.l4, -rule.l4) + at(-rule.l4, rule.l4) + at(-rule.l4, -rule.l4);
    let s5 = at(rule.l5, rule.l5) + at(rule.l5, -rule.l5) + at(-rule.l5, rule.l5) + at(-rule.l5, -rule.l5);
    let vol = 4.0 * hx * hy;
    let i7 = vol * (rule.w[0] * f0 + rule.w[1] * s2 + rule.w[2] * s3 + rule.w[3] * s4 + rule.w[4] * s5);
    let i5 = vol * (rule.wp[0] * f0 + rule.wp[1] * s2 + rule.wp[2] * s3 + rule.wp[3] * s4);
    let ratio = rule.l2 * rule.l2 / (rule.l3 * rule.l3);
    let dx = (a2x + b2x - 2.0 * f0 - ratio * (a3x + b3x - 2.0 * f0)).abs();
    let dy = (a2y + b2y - 2.0 * f0 - ratio * (a3y + b3y - 2.0 * f0)).abs();
    let err = if i7.is_finite() && i5.is_finite() { (i7 - i5).abs() } else { f64::INFINITY };
    Cell { rect: *r, val: i7, err, split_x: dx >= dy }
}

/// Result of an adaptive cubature run.
#[derive(Clone, Copy, Debug)]
pub struct CubatureResult {
    pub value: f64,
    pub error: f64,
    pub evaluations: usize,
    pub converged: bool,
}

pub const POINTS_PER_CELL: usize = 17;

/// Integrate `f` over `r` until the summed error estimate is below `tol` or `max_evals`
/// integrand evaluations have been spent.
pub fn adaptive_2d<F: Fn(f64, f64) -> f64>(f: F, r: Rect, tol: f64, max_evals: usize) -> CubatureResult {
    adaptive_2d_cells(f, &[r], tol, max_evals)
}

/// Tensor grid of cells with the given (sorted, deduplicated) breakpoints.
pub fn grid(xs: &[f64], ys: &[f64]) -> Vec<Rect> {
    let mut out = Vec::with_capacity(xs.len().saturating_sub(1) * ys.len().saturating_sub(1));
    for x in xs.windows(2) {
        for y in ys.windows(2) {
            out.push(Rect { x0: x[0], x1: x[1], y0: y[0], y1: y[1] });
        }
    }
    out
}

/// As [`adaptive_2d`], starting from an initial partition. Integrable singularities placed on
/// cell corners or edges are seen by the error estimate; interior ones may not be.
pub fn adaptive_2d_cells<F: Fn(f64, f64) -> f64>(f: F, cells: &[Rect], tol: f64, max_evals: usize) -> CubatureResult {
    let rule = rule();
    let mut heap = BinaryHeap::new();
    let mut total_err = 0.0;
    for r in cells {
        let c = apply(&f, r, &rule);
        total_err += c.err;
        heap.push(c);
    }
    let mut evals = POINTS_PER_CELL * cells.len();
    while total_err > tol && evals + 2 * POINTS_PER_CELL <= max_evals {
        let c = heap.pop().expect("non-empty");
        let (r1, r2) = if c.split_x {
            let m = 0.5 * (c.rect.x0 + c.rect.x1);
            (Rect { x1: m, ..c.rect }, Rect { x0: m, ..c.rect })
        } else {
            let m = 0.5 * (c.rect.y0 + c.rect.y1);
            (Rect { y1: m, ..c.rect }, Rect { y0: m, ..c.rect })
        };
        let a = apply(&f, &r1, &rule);
        let b = apply(&f, &r2, &rule);
        evals += 2 * POINTS_PER_CELL;
        total_err += a.err + b.err - c.err;
        heap.push(a);
        heap.push(b);
        if evals % (1 << 14) < 2 * POINTS_PER_CELL {
            // refresh the running sum to limit drift
            total_err = heap.iter().map(|c| c.err).sum();
        }
    }
    let mut cells: Vec<Cell> = heap.into_vec();
    cells.sort_by(|a, b| {
        (a.rect.x0, a.rect.y0).partial_cmp(&(b.rect.x0, b.rect.y0)).unwrap_or(std::cmp::Ordering::Equal)
    });
    let value = cells.iter().map(|c| c.val).sum();
    let error: f64 = cells.iter().map(|c| c.err).sum();
    CubatureResult { value, error, evaluations: evals, converged: error <= tol }
}
