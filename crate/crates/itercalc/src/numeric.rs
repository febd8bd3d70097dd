//! Floating-point evaluation of the iterated integral L(w) and analytic
//! checks of the shuffle, stuffle, duality and differential relations.
//!
//! L(e_{a_1}...e_{a_n}) is computed level by level as
//! `g_j(t) = int_0^t g_{j-1}(s) ds / (s - a_j)`, returning g_n(1). Each
//! level is represented by its values at Gauss-Legendre nodes on a panel
//! mesh geometrically refined toward t = 0 and t = 1, where intermediate
//! levels have logarithmic behavior; panel values are interpolated
//! barycentrically and integrated with an embedded higher-order rule. The
//! error estimate compares two node counts per panel.

use std::collections::HashMap;
use std::sync::OnceLock;

use num::complex::Complex64;
use num::ToPrimitive;

use crate::derivations::partial_zc;
use crate::error::{Error, Result};
use crate::ncalgebra::{NcPoly, Word};
use crate::products::{shuffle, stuffle};
use crate::transforms::tau_z;

/// Result of one numeric evaluation.
#[derive(Clone, Copy, Debug)]
pub struct NumericResult {
    pub value: Complex64,
    pub est_error: f64,
    pub evaluations: u64,
}

const PATH_TOL: f64 = 1e-9;
/// Geometric refinement depth: smallest panel is 2^-MESH_DEPTH.
const MESH_DEPTH: u32 = 48;
/// Node count of the rule used for partial-panel integrals.
const SUB_RULE: usize = 24;
/// Integrand evaluation budget per word.
const EVAL_BUDGET: u64 = 1_000_000;

/// Gauss-Legendre nodes and weights on [-1, 1], cached per order.
fn gauss_legendre(n: usize) -> &'static (Vec<f64>, Vec<f64>) {
    static CACHE: OnceLock<std::sync::Mutex<HashMap<usize, &'static (Vec<f64>, Vec<f64>)>>> =
        OnceLock::new();
    let cache = CACHE.get_or_init(|| std::sync::Mutex::new(HashMap::new()));
    let mut guard = cache.lock().unwrap();
    if let Some(hit) = guard.get(&n) {
        return hit;
    }
    let mut nodes = vec![0.0; n];
    let mut weights = vec![0.0; n];
    for i in 0..(n + 1) / 2 {
        let mut x = (std::f64::consts::PI * (i as f64 + 0.75) / (n as f64 + 0.5)).cos();
        // Newton iteration on P_n(x)
        for _ in 0..100 {
            let (p, dp) = legendre_and_deriv(n, x);
            let dx = p / dp;
            x -= dx;
            if dx.abs() < 1e-15 {
                break;
            }
        }
        let (_, dp) = legendre_and_deriv(n, x);
        let w = 2.0 / ((1.0 - x * x) * dp * dp);
        nodes[i] = -x;
        nodes[n - 1 - i] = x;
        weights[i] = w;
        weights[n - 1 - i] = w;
    }
    let leaked: &'static (Vec<f64>, Vec<f64>) = Box::leak(Box::new((nodes, weights)));
    guard.insert(n, leaked);
    leaked
}

fn legendre_and_deriv(n: usize, x: f64) -> (f64, f64) {
    let mut p0 = 1.0;
    let mut p1 = x;
    for k in 2..=n {
        let k = k as f64;
        let p2 = ((2.0 * k - 1.0) * x * p1 - (k - 1.0) * p0) / k;
        p0 = p1;
        p1 = p2;
    }
    let dp = n as f64 * (x * p1 - p0) / (x * x - 1.0);
    (p1, dp)
}

/// Barycentric weights for a node set on [-1, 1].
fn barycentric_weights(nodes: &[f64]) -> Vec<f64> {
    let n = nodes.len();
    let mut w = vec![1.0; n];
    for i in 0..n {
        for j in 0..n {
            if i != j {
                w[i] /= nodes[i] - nodes[j];
            }
        }
    }
    w
}

fn barycentric_eval(nodes: &[f64], bary: &[f64], values: &[Complex64], tau: f64) -> Complex64 {
    let mut num = Complex64::new(0.0, 0.0);
    let mut den = 0.0;
    for i in 0..nodes.len() {
        let d = tau - nodes[i];
        if d.abs() < 1e-14 {
            return values[i];
        }
        let c = bary[i] / d;
        num += values[i] * c;
        den += c;
    }
    num / den
}

/// One mesh panel. Panels on the right half store their endpoints in the
/// reflected coordinate u = 1 - s (with lo < hi in u), so that distances to
/// s = 1 stay exactly representable; panels on the left half store s
/// directly. Either way `lo`/`hi` are exact dyadic numbers.
#[derive(Clone, Copy)]
struct Panel {
    lo: f64,
    hi: f64,
    reflected: bool,
}

/// Panel mesh on [0, 1] refined geometrically toward both endpoints, in
/// increasing-s order.
fn panel_mesh() -> &'static Vec<Panel> {
    static MESH: OnceLock<Vec<Panel>> = OnceLock::new();
    MESH.get_or_init(|| {
        let mut panels = Vec::new();
        let mut breaks = vec![0.0];
        for k in (1..=MESH_DEPTH).rev() {
            breaks.push(0.5_f64.powi(k as i32));
        }
        for w in breaks.windows(2) {
            panels.push(Panel {
                lo: w[0],
                hi: w[1],
                reflected: false,
            });
        }
        // right half: u = 1 - s runs down from 1/2 to 0
        for k in 1..MESH_DEPTH {
            panels.push(Panel {
                lo: 0.5_f64.powi(k as i32 + 1),
                hi: 0.5_f64.powi(k as i32),
                reflected: true,
            });
        }
        panels.push(Panel {
            lo: 0.0,
            hi: 0.5_f64.powi(MESH_DEPTH as i32),
            reflected: true,
        });
        panels
    })
}

/// Evaluate L for a fixed list of numeric letters with `p` nodes per panel.
fn eval_levels(letters: &[Complex64], p: usize, evals: &mut u64) -> Complex64 {
    if letters.is_empty() {
        return Complex64::new(1.0, 0.0);
    }
    let panels = panel_mesh();
    let (nodes, _) = gauss_legendre(p);
    let bary_cache = barycentric_weights(nodes);
    let (sub_nodes, sub_weights) = gauss_legendre(SUB_RULE);

    let one = Complex64::new(1.0, 0.0);
    let mut vals: Vec<Vec<Complex64>> = vec![vec![one; p]; panels.len()];

    for (level, &a) in letters.iter().enumerate() {
        let last = level == letters.len() - 1;
        let mut prefix = Complex64::new(0.0, 0.0);
        let mut next: Vec<Vec<Complex64>> = if last {
            Vec::new()
        } else {
            vec![vec![Complex64::new(0.0, 0.0); p]; panels.len()]
        };
        let one_minus_a = Complex64::new(1.0, 0.0) - a;
        for (q, panel) in panels.iter().enumerate() {
            let half = 0.5 * (panel.hi - panel.lo);
            let mid = 0.5 * (panel.lo + panel.hi);
            // s-oriented integral of interp/(s - a) over a coordinate
            // subinterval [lo, hi] of the panel; in reflected panels the
            // substitution u = 1 - s keeps the orientation.
            let mut segment = |lo: f64, hi: f64| -> Complex64 {
                let shalf = 0.5 * (hi - lo);
                let smid = 0.5 * (lo + hi);
                let mut acc = Complex64::new(0.0, 0.0);
                for (&tn, &tw) in sub_nodes.iter().zip(sub_weights) {
                    let c = smid + shalf * tn;
                    let tau = (c - mid) / half;
                    let gv = barycentric_eval(nodes, &bary_cache, &vals[q], tau);
                    let d = if panel.reflected {
                        one_minus_a - c
                    } else {
                        Complex64::new(c, 0.0) - a
                    };
                    acc += gv / d * tw;
                }
                *evals += SUB_RULE as u64;
                acc * shalf
            };
            if !last {
                for i in 0..p {
                    let c_i = mid + half * nodes[i];
                    next[q][i] = prefix
                        + if panel.reflected {
                            segment(c_i, panel.hi)
                        } else {
                            segment(panel.lo, c_i)
                        };
                }
            }
            prefix += segment(panel.lo, panel.hi);
        }
        if last {
            return prefix;
        }
        vals = next;
    }
    unreachable!()
}

/// Numeric letters of a word at z0, with letters snapped to exactly 0 or 1
/// when within the path tolerance. Errors when a pole falls on (0, 1).
pub fn eval_word_letters(w: &Word, z0: Complex64) -> Result<Vec<Complex64>> {
    let mut out = Vec::with_capacity(w.len());
    for letter in w.letters() {
        let mut v = letter.eval(z0)?;
        if v.norm() <= PATH_TOL {
            v = Complex64::new(0.0, 0.0);
        } else if (v - Complex64::new(1.0, 0.0)).norm() <= PATH_TOL {
            v = Complex64::new(1.0, 0.0);
        } else if v.im.abs() <= PATH_TOL && v.re > 0.0 && v.re < 1.0 {
            return Err(Error::PoleOnPath);
        }
        out.push(v);
    }
    Ok(out)
}

fn check_admissible(letters: &[Complex64]) -> Result<()> {
    if let Some(first) = letters.first() {
        if first.norm() == 0.0 {
            return Err(Error::NotAdmissible);
        }
    }
    if let Some(last) = letters.last() {
        if (last - Complex64::new(1.0, 0.0)).norm() == 0.0 {
            return Err(Error::NotAdmissible);
        }
    }
    Ok(())
}

/// Cache of converged evaluations keyed by the letter bit patterns, shared
/// across calls: relation corpora revisit the same words many times.
fn word_cache() -> &'static std::sync::Mutex<HashMap<Vec<(u64, u64)>, NumericResult>> {
    static CACHE: OnceLock<std::sync::Mutex<HashMap<Vec<(u64, u64)>, NumericResult>>> =
        OnceLock::new();
    CACHE.get_or_init(|| std::sync::Mutex::new(HashMap::new()))
}

fn eval_letters_with_tol(letters: &[Complex64], tol: f64) -> Result<NumericResult> {
    let key: Vec<(u64, u64)> = letters
        .iter()
        .map(|c| (c.re.to_bits(), c.im.to_bits()))
        .collect();
    if let Some(hit) = word_cache().lock().unwrap().get(&key) {
        if hit.est_error <= tol {
            return Ok(*hit);
        }
    }
    let result = eval_letters_uncached(letters, tol)?;
    let mut cache = word_cache().lock().unwrap();
    match cache.get(&key) {
        Some(prev) if prev.est_error <= result.est_error => {}
        _ => {
            cache.insert(key, result);
        }
    }
    Ok(result)
}

fn eval_letters_uncached(letters: &[Complex64], tol: f64) -> Result<NumericResult> {
    let mut evals = 0u64;
    let coarse = eval_levels(letters, 12, &mut evals);
    let fine = eval_levels(letters, 16, &mut evals);
    let est = (fine - coarse).norm();
    if est <= tol && fine.is_finite() {
        return Ok(NumericResult {
            value: fine,
            est_error: est,
            evaluations: evals,
        });
    }
    let finest = eval_levels(letters, 24, &mut evals);
    let est = (finest - fine).norm();
    if (est > tol && evals > EVAL_BUDGET) || !finest.is_finite() {
        return Err(Error::ToleranceNotReached(est));
    }
    if est > tol {
        return Err(Error::ToleranceNotReached(est));
    }
    Ok(NumericResult {
        value: finest,
        est_error: est,
        evaluations: evals,
    })
}

/// The iterated integral L(w) at z0.
pub fn eval_l_word(w: &Word, z0: Complex64, tol: f64) -> Result<NumericResult> {
    let letters = eval_word_letters(w, z0)?;
    check_admissible(&letters)?;
    eval_letters_with_tol(&letters, tol)
}

/// Linear extension of L to polynomial inputs.
pub fn eval_l(a: &NcPoly, z0: Complex64, tol: f64) -> Result<NumericResult> {
    let mut value = Complex64::new(0.0, 0.0);
    let mut est = 0.0;
    let mut evals = 0;
    let terms: Vec<_> = a.terms().collect();
    let per_term_tol = if terms.is_empty() {
        tol
    } else {
        tol / terms.len() as f64
    };
    for (w, c) in terms {
        let r = eval_l_word(w, z0, per_term_tol)?;
        let c = c.to_f64().unwrap_or(f64::NAN);
        value += r.value * c;
        est += r.est_error * c.abs();
        evals += r.evaluations;
    }
    Ok(NumericResult {
        value,
        est_error: est,
        evaluations: evals,
    })
}

/// Which of the three analytic relations to check.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum RelationKind {
    Shuffle,
    Stuffle,
    Duality,
}

impl RelationKind {
    pub fn name(self) -> &'static str {
        match self {
            RelationKind::Shuffle => "shuffle",
            RelationKind::Stuffle => "stuffle",
            RelationKind::Duality => "duality",
        }
    }
}

/// Outcome of an analytic identity check.
#[derive(Clone, Copy, Debug)]
pub struct CheckReport {
    pub lhs: Complex64,
    pub rhs: Complex64,
    pub difference: f64,
    pub tol: f64,
    pub pass: bool,
    pub evaluations: u64,
}

fn make_report(lhs: NumericResult, rhs: NumericResult, tol: f64) -> CheckReport {
    let difference = (lhs.value - rhs.value).norm();
    CheckReport {
        lhs: lhs.value,
        rhs: rhs.value,
        difference,
        tol,
        pass: difference <= tol,
        evaluations: lhs.evaluations + rhs.evaluations,
    }
}

/// Check L(u sh v) = L(u)L(v), L(u * v) = L(u)L(v), or L(tau_z u) = L(u)
/// at the given z0.
pub fn check_relation_numeric(
    kind: RelationKind,
    u: &NcPoly,
    v: Option<&NcPoly>,
    z0: Complex64,
    tol: f64,
) -> Result<CheckReport> {
    let inner_tol = (tol * 0.05).max(1e-13);
    match kind {
        RelationKind::Shuffle | RelationKind::Stuffle => {
            let v = v.expect("shuffle/stuffle checks take two arguments");
            let product = match kind {
                RelationKind::Shuffle => shuffle(u, v),
                _ => stuffle(u, v),
            };
            let lhs = eval_l(&product, z0, inner_tol)?;
            let lu = eval_l(u, z0, inner_tol)?;
            let lv = eval_l(v, z0, inner_tol)?;
            let rhs = NumericResult {
                value: lu.value * lv.value,
                est_error: lu.est_error + lv.est_error,
                evaluations: lu.evaluations + lv.evaluations,
            };
            Ok(make_report(lhs, rhs, tol))
        }
        RelationKind::Duality => {
            let lhs = eval_l(&tau_z(u)?, z0, inner_tol)?;
            let rhs = eval_l(u, z0, inner_tol)?;
            Ok(make_report(lhs, rhs, tol))
        }
    }
}

/// Central-difference check of dL(w)/dz against the algebraic derivative:
/// (L(w)(z0+h) - L(w)(z0-h)) / 2h  vs  sum_c (z0-c)^{-1} L(partial_{z,c} w)(z0).
pub fn check_diff_formula(w: &Word, z0: Complex64, h: f64, tol: f64) -> Result<CheckReport> {
    let inner_tol = (tol * 1e-3).max(1e-13);
    let hs = Complex64::new(h, 0.0);
    let plus = eval_l_word(w, z0 + hs, inner_tol)?;
    let minus = eval_l_word(w, z0 - hs, inner_tol)?;
    let lhs = NumericResult {
        value: (plus.value - minus.value) / (2.0 * h),
        est_error: (plus.est_error + minus.est_error) / (2.0 * h),
        evaluations: plus.evaluations + minus.evaluations,
    };
    let wp = NcPoly::from_word(w.clone());
    let mut rhs_value = Complex64::new(0.0, 0.0);
    let mut rhs_err = 0.0;
    let mut rhs_evals = 0;
    for c in [0u8, 1] {
        let dz = partial_zc(c, &wp)?;
        if dz.is_zero() {
            continue;
        }
        let r = eval_l(&dz, z0, inner_tol)?;
        let denom = z0 - Complex64::new(c as f64, 0.0);
        rhs_value += r.value / denom;
        rhs_err += r.est_error / denom.norm();
        rhs_evals += r.evaluations;
    }
    let rhs = NumericResult {
        value: rhs_value,
        est_error: rhs_err,
        evaluations: rhs_evals,
    };
    Ok(make_report(lhs, rhs, tol))
}
