//! Positive root of the characteristic continued fraction and the
//! coefficient tables it generates.
//!
//! For a strictly increasing unbounded weight sequence `p_n`, the equation
//!
//! ```text
//! lambda p_1 = 1 / (lambda p_2 - 1 / (lambda p_3 - ...))
//! ```
//!
//! has a real positive root `lambda_*` strictly between `1/sqrt(p_1 p_2)`
//! and `1/sqrt(p_1 p_2 - p_1^2)`. The solver locates it by bisection after
//! stepping over the largest pole of the partial fraction `F_2`, which is
//! itself found by bisecting the membership predicate of the nested domains
//! `A_j = { 0 < F_{j+1} < lambda p_j }`. Coefficients `c_n` come from the
//! backward (contracting) direction of the `eta` recursion, with the forward
//! direction kept as a cross-check; the forward sweep is the unstable one
//! once the coefficients start to decay.

use alloc::vec::Vec;
use core::fmt;

use crate::multiplier::{PnError, PnSequence};
use crate::scalar;

#[derive(Debug, Clone, Copy)]
pub struct ContFracConfig {
    /// Relative width of the final bisection interval for `lambda_*`.
    pub lambda_rel_tol: f64,
    /// Bound the residual `|lambda p_1 - F_2(lambda)|` must meet at the root.
    pub residual_tol: f64,
    /// Stagnation tolerance for the truncation limit defining `F_n`.
    pub f2_rel_tol: f64,
    /// Hard ceiling on truncation depth.
    pub max_depth: usize,
    /// `|F_2|` beyond this is reported as an asymptote in scans.
    pub divergence_threshold: f64,
    /// A continued-fraction denominator this small (relatively) is a pole.
    pub denom_rel_tol: f64,
    /// Required growth `p_N / p_2` over the probed prefix.
    pub unbounded_ratio: f64,
    /// Prefix length probed for monotonicity and unboundedness.
    pub probe_depth: u32,
}

impl Default for ContFracConfig {
    fn default() -> Self {
        ContFracConfig {
            lambda_rel_tol: 1e-12,
            residual_tol: 1e-10,
            f2_rel_tol: 1e-14,
            max_depth: 100_000,
            divergence_threshold: 1e12,
            denom_rel_tol: 1e-13,
            unbounded_ratio: 8.0,
            probe_depth: 1024,
        }
    }
}

#[derive(Debug, Clone, PartialEq)]
pub enum ContFracError {
    Pn(PnError),
    /// `G_n` evaluated left of its domain `lambda p >= 2`.
    GDomain { lambda: f64, p: f64 },
    /// Truncations failed to stagnate; carries the last two values seen.
    DepthExhausted { lambda: f64, depth: usize, last: f64, prev: f64 },
    /// No sign change of `F_2(lambda) - lambda p_1` over the scanned bracket.
    NoSignChange { lo: f64, hi: f64, h_lo: f64, h_hi: f64 },
    ResidualTooLarge { lambda: f64, residual: f64, tol: f64 },
    /// Root left the certified bracket (numerical failure).
    BracketViolated { lambda: f64, lo: f64, hi: f64, cap: f64 },
    /// A continued-fraction denominator vanished where it must not.
    EtaDegenerate { n: usize, denominator: f64 },
    /// Coefficient overflowed the floating range.
    NotFinite { n: usize },
    /// Scan grid not sorted or below `lambda_0`.
    GridInvalid { index: usize, value: f64, lambda0: f64 },
}

impl fmt::Display for ContFracError {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            ContFracError::Pn(e) => write!(f, "{e}"),
            ContFracError::GDomain { lambda, p } => {
                write!(f, "G undefined: lambda*p = {} < 2", lambda * p)
            }
            ContFracError::DepthExhausted { lambda, depth, last, prev } => write!(
                f,
                "truncations of F at lambda = {lambda} did not converge by depth {depth} \
                 (last two: {prev}, {last})"
            ),
            ContFracError::NoSignChange { lo, hi, h_lo, h_hi } => write!(
                f,
                "no sign change of F_2(lambda) - lambda p_1 on [{lo}, {hi}] \
                 (h = {h_lo} .. {h_hi})"
            ),
            ContFracError::ResidualTooLarge { lambda, residual, tol } => write!(
                f,
                "root residual |lambda p_1 - F_2| = {residual} at lambda = {lambda} \
                 exceeds {tol}"
            ),
            ContFracError::BracketViolated { lambda, lo, hi, cap } => write!(
                f,
                "lambda = {lambda} outside certified bracket ({lo}, {hi}) or cap {cap}"
            ),
            ContFracError::EtaDegenerate { n, denominator } => {
                write!(f, "degenerate continued-fraction denominator {denominator} at level {n}")
            }
            ContFracError::NotFinite { n } => write!(f, "coefficient c_{n} overflowed"),
            ContFracError::GridInvalid { index, value, lambda0 } => write!(
                f,
                "scan grid entry {index} = {value} not sorted or below lambda_0 = {lambda0}"
            ),
        }
    }
}

impl core::error::Error for ContFracError {}

impl From<PnError> for ContFracError {
    fn from(e: PnError) -> Self {
        ContFracError::Pn(e)
    }
}

/// Local dense cache of `p_n` values on top of a sequence.
struct PnCache<'a> {
    seq: &'a PnSequence,
    vals: Vec<f64>,
}

impl<'a> PnCache<'a> {
    fn new(seq: &'a PnSequence) -> Self {
        PnCache { seq, vals: Vec::new() }
    }

    fn get(&mut self, n: usize) -> Result<f64, ContFracError> {
        debug_assert!(n >= 1);
        while self.vals.len() < n {
            let next = self.vals.len() as u32 + 1;
            self.vals.push(self.seq.value(next)?);
        }
        Ok(self.vals[n - 1])
    }
}

/// `G(lambda, p) = (lambda p - sqrt(lambda^2 p^2 - 4)) / 2`, evaluated in the
/// rationalized form `2 / (lambda p + sqrt(...))` which is stable for large
/// `lambda p`. Requires `lambda p >= 2`.
pub fn g_n(lambda: f64, p: f64) -> Result<f64, ContFracError> {
    let lp = lambda * p;
    if lp < 2.0 {
        return Err(ContFracError::GDomain { lambda, p });
    }
    let disc = (lp * lp - 4.0).max(0.0);
    Ok(2.0 / (lp + scalar::sqrt(disc)))
}

/// Outcome of a single truncated evaluation.
#[derive(Debug, Clone, Copy, PartialEq)]
pub enum F2Outcome {
    Value(f64),
    /// An intermediate denominator vanished to tolerance.
    Asymptote { level: usize },
}

/// The depth-`k` truncation `F_{2,k}`, terminated with `G_{2+k+1}`.
pub fn f2_truncated(
    lambda: f64,
    seq: &PnSequence,
    depth: usize,
    cfg: &ContFracConfig,
) -> Result<F2Outcome, ContFracError> {
    let mut cache = PnCache::new(seq);
    truncation_from(lambda, &mut cache, 2, depth, cfg)
}

fn truncation_from(
    lambda: f64,
    cache: &mut PnCache<'_>,
    level: usize,
    depth: usize,
    cfg: &ContFracConfig,
) -> Result<F2Outcome, ContFracError> {
    let mut t = g_n(lambda, cache.get(level + depth + 1)?)?;
    for j in (level..=level + depth).rev() {
        let lp = lambda * cache.get(j)?;
        let den = lp - t;
        if scalar::abs(den) <= cfg.denom_rel_tol * (scalar::abs(lp) + scalar::abs(t)) {
            return Ok(F2Outcome::Asymptote { level: j });
        }
        t = 1.0 / den;
    }
    Ok(F2Outcome::Value(t))
}

/// `F_level(lambda)` by monotone truncations; valid on `D(G_level)`, where
/// the truncations decrease to the limit. Returns `(value, depth_used)`.
fn f_level_limit(
    lambda: f64,
    cache: &mut PnCache<'_>,
    level: usize,
    cfg: &ContFracConfig,
) -> Result<(f64, usize), ContFracError> {
    let mut depth = 32usize;
    let mut prev: Option<f64> = None;
    loop {
        let t = match truncation_from(lambda, cache, level, depth, cfg)? {
            F2Outcome::Value(v) => v,
            // Cannot happen on the certified domain; treat as degeneracy.
            F2Outcome::Asymptote { level } => {
                return Err(ContFracError::EtaDegenerate { n: level, denominator: 0.0 })
            }
        };
        if let Some(p) = prev {
            if scalar::abs(t - p) <= cfg.f2_rel_tol * scalar::abs(t).max(1.0) {
                return Ok((t, depth));
            }
        }
        prev = Some(t);
        if depth >= cfg.max_depth {
            return Err(ContFracError::DepthExhausted {
                lambda,
                depth,
                last: prev.unwrap_or(f64::NAN),
                prev: f64::NAN,
            });
        }
        depth = (depth * 2).min(cfg.max_depth);
    }
}

/// A fully classified evaluation of `F_2`.
#[derive(Debug, Clone, Copy)]
pub struct F2Eval {
    /// `None` when a pole was hit to tolerance.
    pub value: Option<f64>,
    /// Whether `lambda` lies in the principal domain `A_2` (all nested
    /// denominators positive); `F_2` is certified continuous and
    /// non-increasing there.
    pub in_a2: bool,
    /// Number of negative denominators met while descending; changes of this
    /// count along a grid bracket a pole.
    pub neg_denominators: u32,
    pub depth: usize,
}

/// Evaluates `F_2(lambda)` for `lambda >= lambda_0 = 1/sqrt(p_1 p_2)` by the
/// nested-domain construction: compute the limit at the first level whose
/// `G`-domain contains `lambda`, then descend `F_j = 1/(lambda p_j - F_{j+1})`.
pub fn f2(
    lambda: f64,
    seq: &PnSequence,
    cfg: &ContFracConfig,
) -> Result<F2Eval, ContFracError> {
    let mut cache = PnCache::new(seq);
    f2_nested(lambda, &mut cache, cfg)
}

fn f2_nested(
    lambda: f64,
    cache: &mut PnCache<'_>,
    cfg: &ContFracConfig,
) -> Result<F2Eval, ContFracError> {
    // First level with lambda p_m >= 2.
    let mut m = 2usize;
    while lambda * cache.get(m)? < 2.0 {
        m += 1;
        if m > cfg.max_depth {
            return Err(ContFracError::DepthExhausted {
                lambda,
                depth: m,
                last: f64::NAN,
                prev: f64::NAN,
            });
        }
    }
    let (mut f, depth) = f_level_limit(lambda, cache, m, cfg)?;
    let mut in_a2 = true;
    let mut neg = 0u32;
    for j in (2..m).rev() {
        let lp = lambda * cache.get(j)?;
        if !(f > 0.0 && f < lp) {
            in_a2 = false;
        }
        let den = lp - f;
        if scalar::abs(den) <= cfg.denom_rel_tol * (scalar::abs(lp) + scalar::abs(f)) {
            return Ok(F2Eval { value: None, in_a2: false, neg_denominators: neg, depth });
        }
        if den < 0.0 {
            neg += 1;
        }
        f = 1.0 / den;
    }
    Ok(F2Eval { value: Some(f), in_a2, neg_denominators: neg, depth })
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum CaseTag {
    /// `p_2 >= 4 p_1`: `F_2` is continuous on all of `D_0`.
    Direct,
    /// `p_2 < 4 p_1`: `F_2` may have poles above `lambda_0`.
    Asymptote,
}

#[derive(Debug, Clone, Copy)]
pub struct LambdaStarResult {
    pub lambda_star: f64,
    /// `1/sqrt(p_1 p_2)`, strict lower bound.
    pub bracket_lo: f64,
    /// `1/sqrt(p_1 p_2 - p_1^2)`, strict upper bound.
    pub bracket_hi: f64,
    pub case_tag: CaseTag,
    /// Largest pole of `F_2` above `lambda_0`, when one exists (asymptote
    /// case only).
    pub a2: Option<f64>,
    pub iterations: u32,
    /// `|lambda_* p_1 - F_2(lambda_*)|` at the returned root.
    pub residual: f64,
}

/// Locates the positive root of the characteristic equation.
pub fn solve_lambda_star(
    seq: &PnSequence,
    cfg: &ContFracConfig,
) -> Result<LambdaStarResult, ContFracError> {
    seq.validate_for_solver(cfg.probe_depth, cfg.unbounded_ratio)?;
    let mut cache = PnCache::new(seq);
    let p1 = cache.get(1)?;
    let p2 = cache.get(2)?;
    let lambda0 = 1.0 / scalar::sqrt(p1 * p2);
    let bracket_hi = 1.0 / scalar::sqrt(p1 * p2 - p1 * p1);
    let direct = p2 >= 4.0 * p1;
    let case_tag = if direct { CaseTag::Direct } else { CaseTag::Asymptote };

    // Locate a_2 in the asymptote case. A_2 membership is monotone in
    // lambda: it is an interval (a_2, inf) or all of D_0.
    let mut a2 = None;
    let mut left = lambda0 * (1.0 + 1e-14);
    if !direct {
        let lambda1 = 2.0 / p2;
        let probe = f2_nested(left, &mut cache, cfg)?;
        if !probe.in_a2 {
            let mut lo = left;
            let mut hi = lambda1;
            debug_assert!(f2_nested(hi, &mut cache, cfg)?.in_a2);
            for _ in 0..100 {
                let mid = 0.5 * (lo + hi);
                if f2_nested(mid, &mut cache, cfg)?.in_a2 {
                    hi = mid;
                } else {
                    lo = mid;
                }
                if hi - lo <= 1e-13 * hi {
                    break;
                }
            }
            a2 = Some(hi);
            left = hi;
        }
    }

    // h(lambda) = F_2(lambda) - lambda p_1; positive just right of the
    // starting point, negative at bracket_hi where lambda p_1 meets G_2.
    let mut eval_h = |lam: f64, cache: &mut PnCache<'_>| -> Result<f64, ContFracError> {
        let e = f2_nested(lam, cache, cfg)?;
        match e.value {
            Some(v) if e.in_a2 => Ok(v - lam * p1),
            // Left of a_2 (or a pole): treat as the positive side so the
            // bisection moves right.
            _ => Ok(f64::INFINITY),
        }
    };

    let mut lo = left;
    let mut hi = bracket_hi;
    let mut h_lo = eval_h(lo, &mut cache)?;
    let h_hi = eval_h(hi, &mut cache)?;
    if !(h_lo > 0.0 && h_hi < 0.0) {
        // Fall back to a geometric scan for the sign change.
        let mut found = false;
        let mut prev = lo;
        let mut h_prev = h_lo;
        for i in 1..=64 {
            let t = i as f64 / 64.0;
            let lam = lo * scalar::powf(hi / lo, t);
            let h = eval_h(lam, &mut cache)?;
            if h_prev > 0.0 && h < 0.0 {
                lo = prev;
                hi = lam;
                h_lo = h_prev;
                found = true;
                break;
            }
            prev = lam;
            h_prev = h;
        }
        if !found {
            return Err(ContFracError::NoSignChange { lo, hi, h_lo, h_hi });
        }
    }

    let mut iterations = 0u32;
    let mut best = (lo, h_lo);
    for _ in 0..200 {
        let mid = 0.5 * (lo + hi);
        let h = eval_h(mid, &mut cache)?;
        iterations += 1;
        if h.is_finite() && scalar::abs(h) < scalar::abs(best.1) {
            best = (mid, h);
        }
        if h > 0.0 {
            lo = mid;
        } else {
            hi = mid;
        }
        if hi - lo <= cfg.lambda_rel_tol * mid {
            break;
        }
    }
    let (lambda_star, h_star) = best;
    let residual = scalar::abs(h_star);
    if !(residual <= cfg.residual_tol) {
        return Err(ContFracError::ResidualTooLarge {
            lambda: lambda_star,
            residual,
            tol: cfg.residual_tol,
        });
    }
    let cap = (2.0 / p2).max(1.0 / p1) * (1.0 + 1e-12);
    if !(lambda_star > lambda0 && lambda_star < bracket_hi && lambda_star <= cap) {
        return Err(ContFracError::BracketViolated {
            lambda: lambda_star,
            lo: lambda0,
            hi: bracket_hi,
            cap,
        });
    }
    Ok(LambdaStarResult {
        lambda_star,
        bracket_lo: lambda0,
        bracket_hi,
        case_tag,
        a2,
        iterations,
        residual,
    })
}

/// Eigen-coefficients `c_1 .. c_N` with their `eta` ratios and decay
/// certificates.
#[derive(Debug, Clone)]
pub struct CoefficientTable {
    pub lambda: f64,
    pub p1: f64,
    pub p2: f64,
    /// `c[i] = c_{i+1}`; `c[0] = c_1 = p_1`.
    pub c: Vec<f64>,
    /// `eta[i] = eta_{i+2}`.
    pub eta: Vec<f64>,
    /// Largest integer with `p_{n0} <= 4 p_2`.
    pub n0: usize,
    /// Whether `|c_n| <= p_2 2^{3 n0 - n}` held for every computed
    /// `n >= 3 n0` (false when the table is too short to check).
    pub decay_certified: bool,
    /// Length of the prefix on which every `eta_n` sits in its certified
    /// window (`F_n` bounds past the `G`-domain entry, `A`-set bounds
    /// before it).
    pub certified_len: usize,
    /// Length of the prefix on which the forward recursion from
    /// `eta_2 = -lambda p_1` agrees with the table to 1e-6 relative; the
    /// forward direction is unstable once the coefficients decay.
    pub forward_agree_len: usize,
    pub max_residual: f64,
    pub max_rel_residual: f64,
}

impl CoefficientTable {
    pub fn len(&self) -> usize {
        self.c.len()
    }

    pub fn is_empty(&self) -> bool {
        self.c.is_empty()
    }

    /// `||n^s c_n|| / ((n0^s + p2/p1) ||c_n||)`, the measured constant of
    /// the Sobolev estimate.
    pub fn sobolev_constant(&self, s: f64) -> f64 {
        let mut num = 0.0;
        let mut den = 0.0;
        for (i, &cn) in self.c.iter().enumerate() {
            let n = (i + 1) as f64;
            num += scalar::powf(n, 2.0 * s) * cn * cn;
            den += cn * cn;
        }
        scalar::sqrt(num / den) / (scalar::powf(self.n0 as f64, s) + self.p2 / self.p1)
    }
}

/// Builds the coefficient table at a solved root. `n` is the table length;
/// the `eta` values come from the stable backward sweep, so the whole table
/// is usable, with [`CoefficientTable::certified_len`] reporting the window
/// certificate and [`CoefficientTable::forward_agree_len`] the forward
/// cross-check.
pub fn coefficients(
    res: &LambdaStarResult,
    seq: &PnSequence,
    n: usize,
    cfg: &ContFracConfig,
) -> Result<CoefficientTable, ContFracError> {
    assert!(n >= 3, "coefficient table needs at least 3 entries");
    let lambda = res.lambda_star;
    let mut cache = PnCache::new(seq);
    let p1 = cache.get(1)?;
    let p2 = cache.get(2)?;

    // Backward sweep start: deep enough that lambda p >= 2 and the G seed
    // has washed out. Deepen until the topmost recorded level stagnates.
    let mut m_star = n + 1;
    while lambda * cache.get(m_star)? < 2.0 {
        m_star += 1;
        if m_star > cfg.max_depth {
            return Err(ContFracError::DepthExhausted {
                lambda,
                depth: m_star,
                last: f64::NAN,
                prev: f64::NAN,
            });
        }
    }
    let mut start = m_star + 64;
    let mut f_vals = alloc::vec![0.0f64; n + 2]; // f_vals[j] = F_j(lambda), j = 2..=n+1
    let mut prev_top: Option<f64> = None;
    loop {
        let mut t = g_n(lambda, cache.get(start + 1)?)?;
        for j in (2..=start).rev() {
            let lp = lambda * cache.get(j)?;
            let den = lp - t;
            if scalar::abs(den) <= cfg.denom_rel_tol * (scalar::abs(lp) + scalar::abs(t)) {
                return Err(ContFracError::EtaDegenerate { n: j, denominator: den });
            }
            t = 1.0 / den;
            if j <= n + 1 {
                f_vals[j] = t;
            }
        }
        let top = f_vals[n + 1];
        if let Some(p) = prev_top {
            if scalar::abs(top - p) <= 1e-15 * scalar::abs(top).max(f64::MIN_POSITIVE) {
                break;
            }
        }
        prev_top = Some(top);
        start += 256;
        if start > cfg.max_depth {
            return Err(ContFracError::DepthExhausted {
                lambda,
                depth: start,
                last: top,
                prev: prev_top.unwrap_or(f64::NAN),
            });
        }
    }

    // eta_n = -F_n; coefficients c_n = p_n eta_n ... eta_2, c_1 = p_1.
    let mut eta = Vec::with_capacity(n);
    let mut c = Vec::with_capacity(n);
    c.push(p1);
    let mut prod = 1.0f64;
    for j in 2..=n {
        let e = -f_vals[j];
        eta.push(e);
        prod *= e;
        let cj = cache.get(j)? * prod;
        if !cj.is_finite() {
            return Err(ContFracError::NotFinite { n: j });
        }
        c.push(cj);
    }

    // Window certificate: past the G-domain entry eta must sit in
    // (-2/(lambda p), -1/(lambda p)); before it, inside the A-set bound.
    let mut certified_len = n;
    for j in 2..=n {
        let e = eta[j - 2];
        let lp = lambda * cache.get(j)?;
        let ok = if lp >= 2.0 {
            let lo = 1.0 / lp;
            let hi = 2.0 / lp;
            e < 0.0 && -e > lo * (1.0 - 1e-9) && -e < hi * (1.0 + 1e-9)
        } else {
            let cap = lambda * cache.get(j - 1)?;
            e < 0.0 && -e < cap * (1.0 + 1e-9)
        };
        if !ok {
            certified_len = j - 1;
            break;
        }
    }

    // Forward cross-check from eta_2 = -lambda p_1.
    let mut forward_agree_len = 1usize;
    let mut ef = -lambda * p1;
    for j in 2..=n {
        if scalar::abs(ef - eta[j - 2]) <= 1e-6 * scalar::abs(eta[j - 2]) {
            forward_agree_len = j;
        } else {
            break;
        }
        if ef == 0.0 {
            break;
        }
        ef = -lambda * cache.get(j)? - 1.0 / ef;
    }

    // Recursion residual over rows 1 .. n-1.
    let mut max_residual = scalar::abs(lambda * c[0] + c[1] / p2);
    let mut max_abs = c[0].max(scalar::abs(c[1]));
    for j in 2..n {
        let r = lambda * c[j - 1] + c[j] / cache.get(j + 1)? + c[j - 2] / cache.get(j - 1)?;
        max_residual = max_residual.max(scalar::abs(r));
        max_abs = max_abs.max(scalar::abs(c[j]));
    }
    let max_rel_residual = max_residual / max_abs;

    // n0 per the theorem statement: largest n with p_n <= 4 p_2.
    let mut n0 = 1usize;
    loop {
        match cache.get(n0 + 1) {
            Ok(p) if p <= 4.0 * p2 => n0 += 1,
            _ => break,
        }
        if n0 > cfg.max_depth {
            break;
        }
    }

    let mut decay_certified = n >= 3 * n0 + 8;
    if decay_certified {
        for j in 3 * n0..=n {
            let bound = p2 * scalar::powf(2.0, (3 * n0) as f64 - j as f64);
            if scalar::abs(c[j - 1]) > bound * (1.0 + 1e-9) {
                decay_certified = false;
                break;
            }
        }
    }

    Ok(CoefficientTable {
        lambda,
        p1,
        p2,
        c,
        eta,
        n0,
        decay_certified,
        certified_len,
        forward_agree_len,
        max_residual,
        max_rel_residual,
    })
}

const STURM_PIVOT_GUARD: f64 = 1e-300;

/// Largest eigenvalue of the `n x n` symmetric tridiagonal truncation with
/// zero diagonal and off-diagonal `-1/sqrt(p_j p_{j+1})`, by Sturm-count
/// bisection. This is the similarity-symmetrized form of the three-term
/// recursion (weights `sqrt(p_j)`), so it converges to `lambda_*` as `n`
/// grows.
pub fn truncated_matrix_oracle(seq: &PnSequence, n: usize) -> Result<f64, ContFracError> {
    assert!(n >= 2);
    let mut off = Vec::with_capacity(n - 1);
    let mut cache = PnCache::new(seq);
    for j in 1..n {
        let p = cache.get(j)?;
        let q = cache.get(j + 1)?;
        off.push(-1.0 / scalar::sqrt(p * q));
    }
    // Number of eigenvalues strictly below x, via LDL^T pivot signs.
    let count_below = |x: f64| -> usize {
        let mut count = 0usize;
        let mut q = -x;
        if q < 0.0 {
            count += 1;
        }
        for e in &off {
            let safe = if scalar::abs(q) < STURM_PIVOT_GUARD {
                if q >= 0.0 {
                    STURM_PIVOT_GUARD
                } else {
                    -STURM_PIVOT_GUARD
                }
            } else {
                q
            };
            q = -x - e * e / safe;
            if q < 0.0 {
                count += 1;
            }
        }
        count
    };
    let mut radius = 0.0f64;
    for j in 0..n {
        let left = if j > 0 { scalar::abs(off[j - 1]) } else { 0.0 };
        let right = if j < n - 1 { scalar::abs(off[j]) } else { 0.0 };
        radius = radius.max(left + right);
    }
    let mut lo = 0.0;
    let mut hi = radius * (1.0 + 1e-12) + f64::MIN_POSITIVE;
    for _ in 0..200 {
        let mid = 0.5 * (lo + hi);
        if count_below(mid) >= n {
            hi = mid;
        } else {
            lo = mid;
        }
        if hi - lo <= 1e-14 * hi.max(1.0) {
            break;
        }
    }
    Ok(0.5 * (lo + hi))
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum RowStatus {
    Converged,
    Asymptote,
}

#[derive(Debug, Clone, Copy)]
pub struct ScanRow {
    pub lambda: f64,
    /// `None` on asymptote rows.
    pub f2: Option<f64>,
    pub lambda_p1: f64,
    pub status: RowStatus,
    pub depth: usize,
}

#[derive(Debug, Clone)]
pub struct ScanTable {
    pub lambda0: f64,
    pub rows: Vec<ScanRow>,
}

impl ScanTable {
    /// The rightmost adjacent pair of converged rows where
    /// `F_2 - lambda p_1` changes sign with no pole between them.
    pub fn crossing_bracket(&self) -> Option<(f64, f64)> {
        let conv: Vec<&ScanRow> = self
            .rows
            .iter()
            .filter(|r| r.status == RowStatus::Converged && r.f2.is_some())
            .collect();
        for w in conv.windows(2).rev() {
            let (a, b) = (w[0], w[1]);
            let pole_between = self.rows.iter().any(|r| {
                r.status == RowStatus::Asymptote && r.lambda > a.lambda && r.lambda < b.lambda
            });
            if pole_between {
                continue;
            }
            let ha = a.f2.unwrap() - a.lambda_p1;
            let hb = b.f2.unwrap() - b.lambda_p1;
            if ha > 0.0 && hb < 0.0 {
                return Some((a.lambda, b.lambda));
            }
        }
        None
    }
}

/// Evaluates `F_2` over a sorted grid of `lambda >= lambda_0`. Poles between
/// grid points are located by bisecting the negative-denominator count and
/// inserted as asymptote rows flanked by near-pole evaluations, so a scan
/// exhibits each asymptote with its divergence on both sides.
pub fn scan_f2(
    seq: &PnSequence,
    grid: &[f64],
    cfg: &ContFracConfig,
) -> Result<ScanTable, ContFracError> {
    let mut cache = PnCache::new(seq);
    let p1 = cache.get(1)?;
    let p2 = cache.get(2)?;
    let lambda0 = 1.0 / scalar::sqrt(p1 * p2);
    for (i, &l) in grid.iter().enumerate() {
        let sorted = i == 0 || grid[i - 1] <= l;
        if !sorted || l < lambda0 * (1.0 - 1e-12) {
            return Err(ContFracError::GridInvalid { index: i, value: l, lambda0 });
        }
    }

    let mut rows: Vec<ScanRow> = Vec::with_capacity(grid.len());
    let mut prev: Option<(f64, F2Eval)> = None;
    for &lam in grid {
        let e = f2_nested(lam, &mut cache, cfg)?;
        if let Some((lam_prev, e_prev)) = prev {
            if e_prev.neg_denominators != e.neg_denominators {
                // A denominator crossed zero in (lam_prev, lam): bisect it.
                let mut lo = lam_prev;
                let mut hi = lam;
                let base = e_prev.neg_denominators;
                for _ in 0..80 {
                    let mid = 0.5 * (lo + hi);
                    let em = f2_nested(mid, &mut cache, cfg)?;
                    if em.neg_denominators == base {
                        lo = mid;
                    } else {
                        hi = mid;
                    }
                    if hi - lo <= 1e-13 * hi {
                        break;
                    }
                }
                let pole = 0.5 * (lo + hi);
                let delta = (1e-9 * pole).max(f64::EPSILON * 8.0 * pole);
                if pole - delta > lam_prev {
                    rows.push(eval_row(pole - delta, p1, &mut cache, cfg)?);
                }
                rows.push(ScanRow {
                    lambda: pole,
                    f2: None,
                    lambda_p1: pole * p1,
                    status: RowStatus::Asymptote,
                    depth: 0,
                });
                if pole + delta < lam {
                    rows.push(eval_row(pole + delta, p1, &mut cache, cfg)?);
                }
            }
        }
        rows.push(make_row(lam, p1, e, cfg));
        prev = Some((lam, e));
    }
    Ok(ScanTable { lambda0, rows })
}

fn eval_row(
    lambda: f64,
    p1: f64,
    cache: &mut PnCache<'_>,
    cfg: &ContFracConfig,
) -> Result<ScanRow, ContFracError> {
    let e = f2_nested(lambda, cache, cfg)?;
    Ok(make_row(lambda, p1, e, cfg))
}

fn make_row(lambda: f64, p1: f64, e: F2Eval, cfg: &ContFracConfig) -> ScanRow {
    let diverged = match e.value {
        Some(v) => scalar::abs(v) > cfg.divergence_threshold,
        None => true,
    };
    ScanRow {
        lambda,
        f2: if diverged { None } else { e.value },
        lambda_p1: lambda * p1,
        status: if diverged { RowStatus::Asymptote } else { RowStatus::Converged },
        depth: e.depth,
    }
}

/// Refines the root of `F_2(lambda) = lambda p_1` inside a bracket where the
/// sign change is known (used to confirm scan crossings against the solver).
pub fn refine_crossing(
    seq: &PnSequence,
    mut lo: f64,
    mut hi: f64,
    cfg: &ContFracConfig,
) -> Result<f64, ContFracError> {
    let mut cache = PnCache::new(seq);
    let p1 = cache.get(1)?;
    for _ in 0..200 {
        let mid = 0.5 * (lo + hi);
        let e = f2_nested(mid, &mut cache, cfg)?;
        let h = match e.value {
            Some(v) => v - mid * p1,
            None => f64::INFINITY,
        };
        if h > 0.0 {
            lo = mid;
        } else {
            hi = mid;
        }
        if hi - lo <= cfg.lambda_rel_tol * mid {
            break;
        }
    }
    Ok(0.5 * (lo + hi))
}
