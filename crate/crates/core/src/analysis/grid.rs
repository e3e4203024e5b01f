//! Absorbing-boundary grid solver for the probability that the pair walk
//! reaches an axis before the far edges of an `L x L` box.
//!
//! Cells on the axes (`N^e = 0` or `N^d = 0`) hold 1. Cells on the far edges
//! (`N^e = L` or `N^d = L`, away from the axes) hold 0. Interior cells are
//! updated Jacobi style with the stay probability factored out.

use serde::Serialize;

use super::pair::PairWalkModel;
use super::AnalysisError;
use crate::report::{csv_text, fmt_num};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
#[serde(rename_all = "snake_case")]
pub enum StopReason {
    Tolerance,
    MaxIterations,
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct GridOptions {
    pub l: usize,
    /// Stop once the largest change in a sweep drops below this.
    pub tol: f64,
    pub max_iter: u64,
}

impl Default for GridOptions {
    fn default() -> Self {
        Self {
            l: 60,
            tol: 1e-12,
            max_iter: 1_000_000,
        }
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct GridSolution {
    pub l: usize,
    /// Row-major `(L + 1) x (L + 1)` values indexed by `(N^e, N^d)`.
    pub values: Vec<f64>,
    pub start: (usize, usize),
    pub iterations: u64,
    pub stop: StopReason,
    pub final_delta: f64,
    /// Largest violation of the update equation over solved cells.
    pub residual: f64,
    /// When set, only interior cells with `(N^e + N^d) % 2 == parity` were solved.
    pub parity: Option<usize>,
}

impl GridSolution {
    #[inline]
    pub fn value(&self, ne: usize, nd: usize) -> f64 {
        self.values[ne * (self.l + 1) + nd]
    }

    pub fn at_start(&self) -> f64 {
        self.value(self.start.0, self.start.1)
    }

    /// Matrix CSV: one row per `N^e`, one column per `N^d`.
    pub fn to_csv(&self) -> String {
        let header: Vec<String> = std::iter::once("Ne".to_string())
            .chain((0..=self.l).map(|nd| nd.to_string()))
            .collect();
        let header: Vec<&str> = header.iter().map(String::as_str).collect();
        csv_text(
            &header,
            (0..=self.l).map(|ne| {
                std::iter::once(ne.to_string())
                    .chain((0..=self.l).map(|nd| fmt_num(self.value(ne, nd))))
                    .collect()
            }),
        )
    }
}

struct Stencil {
    n: usize,
    // (flat offset, weight) for each move
    taps: Vec<(isize, f64)>,
    cells: Vec<usize>,
}

impl Stencil {
    fn new(model: &PairWalkModel, l: usize, parity: Option<usize>) -> Self {
        let n = l + 1;
        let norm = 1.0 - model.stay();
        let taps = model
            .moves()
            .into_iter()
            .map(|(x, y, p)| (x as isize * n as isize + y as isize, p / norm))
            .collect();
        let cells = (1..l)
            .flat_map(|ne| (1..l).map(move |nd| (ne, nd)))
            .filter(|&(ne, nd)| parity.is_none_or(|q| (ne + nd) % 2 == q))
            .map(|(ne, nd)| ne * n + nd)
            .collect();
        Self { n, taps, cells }
    }

    #[inline]
    fn apply(&self, v: &[f64], c: usize) -> f64 {
        self.taps.iter().map(|&(off, w)| w * v[(c as isize + off) as usize]).sum()
    }
}

fn boundary_grid(l: usize) -> Vec<f64> {
    let n = l + 1;
    let mut v = vec![0.0; n * n];
    for k in 0..n {
        v[k] = 1.0; // N^e = 0
        v[k * n] = 1.0; // N^d = 0
    }
    v
}

fn check_start(l: usize, start: (usize, usize)) -> Result<(), AnalysisError> {
    let (ne, nd) = start;
    if l < 2 || ne == 0 || nd == 0 || ne >= l || nd >= l {
        return Err(AnalysisError::StartOutsideGrid { ne, nd, l });
    }
    Ok(())
}

pub(crate) fn solve(
    model: &PairWalkModel,
    start: (usize, usize),
    opts: &GridOptions,
    parity: Option<usize>,
    initial: Option<&[f64]>,
) -> Result<GridSolution, AnalysisError> {
    model.validate()?;
    check_start(opts.l, start)?;
    let st = Stencil::new(model, opts.l, parity);
    let mut cur = boundary_grid(opts.l);
    if let Some(init) = initial {
        if init.len() != cur.len() {
            return Err(AnalysisError::LengthMismatch {
                expected: cur.len(),
                got: init.len(),
            });
        }
        // boundary stays fixed; every interior cell starts from the caller's value
        let n = st.n;
        for ne in 1..opts.l {
            for nd in 1..opts.l {
                cur[ne * n + nd] = init[ne * n + nd];
            }
        }
    }
    let mut next = cur.clone();
    let mut iterations = 0;
    let mut delta = f64::INFINITY;
    let mut stop = StopReason::MaxIterations;
    while iterations < opts.max_iter {
        delta = 0.0;
        for &c in &st.cells {
            let v = st.apply(&cur, c);
            delta = delta.max((v - cur[c]).abs());
            next[c] = v;
        }
        std::mem::swap(&mut cur, &mut next);
        iterations += 1;
        if delta < opts.tol {
            stop = StopReason::Tolerance;
            break;
        }
    }
    let residual = st.cells.iter().map(|&c| (st.apply(&cur, c) - cur[c]).abs()).fold(0.0, f64::max);
    Ok(GridSolution {
        l: opts.l,
        values: cur,
        start,
        iterations,
        stop,
        final_delta: delta,
        residual,
        parity,
    })
}

/// Lower bound on the pair recurrence probability from `start`, as the
/// probability of reaching an axis before the far edges of the box.
pub fn grid_lower_bound(
    model: &PairWalkModel,
    start: (usize, usize),
    opts: &GridOptions,
) -> Result<GridSolution, AnalysisError> {
    solve(model, start, opts, None, None)
}

/// Same as [`grid_lower_bound`] for diagonal-only walks, solving only the
/// parity class of `start` (the classes never exchange mass).
pub fn grid_lower_bound_parity(
    model: &PairWalkModel,
    start: (usize, usize),
    opts: &GridOptions,
) -> Result<GridSolution, AnalysisError> {
    if !model.is_four_direction() {
        return Err(AnalysisError::BadModel("parity split needs a diagonal-only walk".into()));
    }
    // each class touches the axes once L >= 2
    solve(model, start, opts, Some((start.0 + start.1) % 2), None)
}

/// Upper bound on the spectral radius of the interior update operator,
/// from Collatz-Wielandt ratios of a lazy power iteration.
pub fn interior_spectral_radius(model: &PairWalkModel, l: usize) -> Result<f64, AnalysisError> {
    model.validate()?;
    if l < 2 {
        return Err(AnalysisError::StartOutsideGrid { ne: 1, nd: 1, l });
    }
    let st = Stencil::new(model, l, None);
    let mut v = vec![0.0; st.n * st.n];
    for &c in &st.cells {
        v[c] = 1.0;
    }
    let mut w = v.clone();
    let mut upper = f64::INFINITY;
    for _ in 0..200_000 {
        let (mut lo, mut hi) = (f64::INFINITY, 0.0f64);
        for &c in &st.cells {
            let lazy = 0.5 * (v[c] + st.apply(&v, c));
            w[c] = lazy;
            let r = lazy / v[c];
            lo = lo.min(r);
            hi = hi.max(r);
        }
        upper = 2.0 * hi - 1.0;
        if hi - lo < 1e-10 {
            break;
        }
        let scale = w.iter().fold(0.0f64, |a, &b| a.max(b));
        for &c in &st.cells {
            v[c] = w[c] / scale;
        }
    }
    Ok(upper)
}
