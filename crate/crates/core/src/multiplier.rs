//! Weight sequences `p_n` and the even Fourier-multiplier framework.
//!
//! The linearization of an active scalar equation with velocity `u = M rho`
//! around the steady state `sin(a x_d)` couples the sine modes `sin(n a x_d)`
//! through a three-term recursion whose weights are
//! `p_n = (2/a) / m_d(k', n a)`, with `m_d` the distinguished component of
//! the multiplier symbol. For the singular porous media velocity this
//! reduces to the closed form `p_n = 2 (k^2 + n^2 a^2)^{1 - beta/2} / (a k^2)`.
//!
//! Everything downstream (the continued-fraction eigensolver, the spectral
//! slices) consumes these weights through [`PnSequence`].

use alloc::boxed::Box;
use alloc::format;
use alloc::string::String;
use alloc::vec::Vec;
use core::fmt;

use crate::scalar;

/// Parameters of the SIPM linearization: derivative loss `beta`, steady
/// state frequency `a`, horizontal frequency `k`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct SipmParams {
    pub beta: f64,
    pub a: u32,
    pub k: u32,
}

#[derive(Debug, Clone, PartialEq)]
pub enum ParamError {
    BetaOutOfRange(f64),
    ZeroA,
    ZeroK,
}

impl fmt::Display for ParamError {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            ParamError::BetaOutOfRange(b) => {
                write!(f, "beta = {b} outside (0, 2]")
            }
            ParamError::ZeroA => write!(f, "steady state frequency a must be >= 1"),
            ParamError::ZeroK => write!(f, "horizontal frequency k must be >= 1"),
        }
    }
}

impl core::error::Error for ParamError {}

impl SipmParams {
    pub fn new(beta: f64, a: u32, k: u32) -> Result<Self, ParamError> {
        if !(beta > 0.0 && beta <= 2.0) {
            return Err(ParamError::BetaOutOfRange(beta));
        }
        if a == 0 {
            return Err(ParamError::ZeroA);
        }
        if k == 0 {
            return Err(ParamError::ZeroK);
        }
        Ok(SipmParams { beta, a, k })
    }

    /// The recursion weight `p_n = 2 (k^2 + n^2 a^2)^{1 - beta/2} / (a k^2)`,
    /// `n >= 1`. Strictly increasing and unbounded for `beta < 2`, constant
    /// `2/(a k^2)` at `beta = 2`.
    pub fn pn(&self, n: u32) -> f64 {
        debug_assert!(n >= 1);
        let k2 = f64::from(self.k) * f64::from(self.k);
        let na = f64::from(n) * f64::from(self.a);
        let base = k2 + na * na;
        2.0 * scalar::powf(base, 1.0 - 0.5 * self.beta) / (f64::from(self.a) * k2)
    }
}

/// `p_n` evaluated from SIPM parameters.
pub fn sipm_pn(params: &SipmParams, n: u32) -> f64 {
    params.pn(n)
}

/// A Fourier multiplier symbol `m: Z^d \ {0} -> R^d` with the distinguished
/// coordinate fixed to the last one, `j = d`.
pub struct MultiplierSymbol {
    dim: usize,
    eval: Box<dyn Fn(&[i64]) -> Vec<f64> + Send + Sync>,
}

impl fmt::Debug for MultiplierSymbol {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.debug_struct("MultiplierSymbol")
            .field("dim", &self.dim)
            .finish_non_exhaustive()
    }
}

#[derive(Debug, Clone, PartialEq)]
pub enum SymbolError {
    DimensionTooSmall(usize),
    /// `m_d` must be positive where a weight is requested; carries the
    /// offending lattice point and the value found there.
    NonPositive {
        point: Vec<i64>,
        value: f64,
    },
    WrongArity {
        expected: usize,
        got: usize,
    },
}

impl fmt::Display for SymbolError {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            SymbolError::DimensionTooSmall(d) => write!(f, "symbol dimension {d} < 2"),
            SymbolError::NonPositive { point, value } => {
                write!(f, "m_d{point:?} = {value} is not positive")
            }
            SymbolError::WrongArity { expected, got } => {
                write!(f, "lattice point has {got} coordinates, symbol expects {expected}")
            }
        }
    }
}

impl core::error::Error for SymbolError {}

impl MultiplierSymbol {
    pub fn new<F>(dim: usize, eval: F) -> Result<Self, SymbolError>
    where
        F: Fn(&[i64]) -> Vec<f64> + Send + Sync + 'static,
    {
        if dim < 2 {
            return Err(SymbolError::DimensionTooSmall(dim));
        }
        Ok(MultiplierSymbol { dim, eval: Box::new(eval) })
    }

    /// The SIPM symbol in dimension 2, written with `m_d` positive:
    /// `m(k) = (-k1 k2 |k|^{beta-2}, k1^2 |k|^{beta-2})`.
    ///
    /// The velocity symbol of the equation is the negative of this; the sign
    /// is a global convention absorbed by the alternation `c_n -> (-1)^n c_n`
    /// of the eigen-coefficients, see the spectral module.
    pub fn sipm(beta: f64) -> Self {
        MultiplierSymbol {
            dim: 2,
            eval: Box::new(move |k: &[i64]| {
                let k1 = k[0] as f64;
                let k2 = k[1] as f64;
                let norm2 = k1 * k1 + k2 * k2;
                if norm2 == 0.0 {
                    return alloc::vec![0.0, 0.0];
                }
                let w = scalar::powf(norm2, 0.5 * beta - 1.0);
                alloc::vec![-k1 * k2 * w, k1 * k1 * w]
            }),
        }
    }

    pub fn dim(&self) -> usize {
        self.dim
    }

    pub fn eval(&self, k: &[i64]) -> Result<Vec<f64>, SymbolError> {
        if k.len() != self.dim {
            return Err(SymbolError::WrongArity { expected: self.dim, got: k.len() });
        }
        Ok((self.eval)(k))
    }

    /// The distinguished component `m_d(k)`.
    pub fn component_d(&self, k: &[i64]) -> Result<f64, SymbolError> {
        Ok(self.eval(k)?[self.dim - 1])
    }
}

/// `p_n = (2/a) / m_d(k', n a)`. Errors when `m_d` is not positive there.
pub fn pn_from_symbol(
    sym: &MultiplierSymbol,
    a: u32,
    kprime: &[i64],
    n: u32,
) -> Result<f64, SymbolError> {
    if kprime.len() != sym.dim() - 1 {
        return Err(SymbolError::WrongArity { expected: sym.dim() - 1, got: kprime.len() });
    }
    let mut point = Vec::with_capacity(sym.dim());
    point.extend_from_slice(kprime);
    point.push(i64::from(n) * i64::from(a));
    let md = sym.component_d(&point)?;
    if !(md > 0.0) || !md.is_finite() {
        return Err(SymbolError::NonPositive { point, value: md });
    }
    Ok(2.0 / f64::from(a) / md)
}

const CONDITION_NAMES: [&str; 6] = [
    "steady-state (m(0', a) = 0)",
    "evenness and positivity of m_d",
    "growth of m_d in |k'| at fixed n",
    "decay of m_d in n at fixed k'",
    "strict monotone decrease of m_d in n",
    "polynomial growth bound on |m|",
];

/// Lattice box over which [`validate_symbol`] samples: each of the `d - 1`
/// primed coordinates ranges over `kprime_min..=kprime_max`, and `n` over
/// `1..=n_max`.
#[derive(Debug, Clone, Copy)]
pub struct SampleBox {
    pub kprime_min: i64,
    pub kprime_max: i64,
    pub n_max: u32,
    /// Growth factor the last `|k'|` sample must reach over the first (PM3).
    pub growth_factor: f64,
    /// Decay factor the first `n` sample must reach over the last (PM4).
    pub decay_factor: f64,
}

impl Default for SampleBox {
    fn default() -> Self {
        SampleBox {
            kprime_min: 1,
            kprime_max: 64,
            n_max: 64,
            growth_factor: 4.0,
            decay_factor: 1.05,
        }
    }
}

#[derive(Debug, Clone)]
pub struct ConditionCheck {
    pub name: &'static str,
    pub passed: bool,
    /// For a failed condition, one concrete lattice point and the symbol
    /// value observed there.
    pub witness: Option<(Vec<i64>, f64)>,
}

#[derive(Debug, Clone)]
pub struct ValidationReport {
    pub checks: [ConditionCheck; 6],
    /// Exponent fitted to `|m(k)|` against `(1 + |k|)` over the box.
    pub fitted_r0: f64,
    /// Constant of the fitted bound `|m(k)| <= C (1 + |k|)^{r0}`.
    pub fitted_c: f64,
}

impl ValidationReport {
    pub fn all_passed(&self) -> bool {
        self.checks.iter().all(|c| c.passed)
    }

    /// The conditions gating the eigensolver (all but the growth bound).
    pub fn solver_conditions_passed(&self) -> bool {
        self.checks[..5].iter().all(|c| c.passed)
    }
}

impl fmt::Display for ValidationReport {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        for (i, c) in self.checks.iter().enumerate() {
            writeln!(
                f,
                "({}) {}: {}{}",
                i + 1,
                c.name,
                if c.passed { "pass" } else { "FAIL" },
                match &c.witness {
                    Some((p, v)) => format!(" at {p:?} (m_d = {v})"),
                    None => String::new(),
                }
            )?;
        }
        write!(f, "fitted bound: |m(k)| <= {:.3} (1 + |k|)^{:.3}", self.fitted_c, self.fitted_r0)
    }
}

fn lattice_points(dim_prime: usize, range: (i64, i64)) -> Vec<Vec<i64>> {
    let (lo, hi) = range;
    let mut pts: Vec<Vec<i64>> = alloc::vec![Vec::new()];
    for _ in 0..dim_prime {
        let mut next = Vec::new();
        for p in &pts {
            for v in lo..=hi {
                let mut q = p.clone();
                q.push(v);
                next.push(q);
            }
        }
        pts = next;
    }
    pts
}

/// Checks the six structural conditions on an even multiplier symbol by
/// exhaustive sampling over `sample_box`. Failures are reported with a
/// witness point, never raised as errors.
pub fn validate_symbol(
    sym: &MultiplierSymbol,
    a: u32,
    sample_box: &SampleBox,
) -> Result<ValidationReport, SymbolError> {
    let dp = sym.dim() - 1;
    let af = f64::from(a);
    let mut checks: [ConditionCheck; 6] = core::array::from_fn(|i| ConditionCheck {
        name: CONDITION_NAMES[i],
        passed: true,
        witness: None,
    });

    // (1) m(0', a) = 0
    let mut origin = alloc::vec![0i64; dp];
    origin.push(i64::from(a));
    let m0 = sym.eval(&origin)?;
    let m0_norm = m0.iter().map(|x| x * x).sum::<f64>();
    if scalar::sqrt(m0_norm) > 1e-12 {
        checks[0].passed = false;
        checks[0].witness = Some((origin.clone(), m0[dp]));
    }

    let kprimes = lattice_points(dp, (sample_box.kprime_min, sample_box.kprime_max));
    let mut log_pts: Vec<(f64, f64)> = Vec::new();

    for kp in &kprimes {
        let mut prev_md = f64::INFINITY;
        let mut first_md = 0.0;
        let mut last_md = 0.0;
        for n in 1..=sample_box.n_max {
            let mut point = kp.clone();
            point.push(i64::from(n) * i64::from(a));
            let m = sym.eval(&point)?;
            let md = m[dp];

            // (2) positivity and evenness
            if checks[1].passed {
                let neg: Vec<i64> = point.iter().map(|x| -x).collect();
                let md_neg = sym.eval(&neg)?[dp];
                if !(md > 0.0) || scalar::abs(md - md_neg) > 1e-12 * scalar::abs(md) {
                    checks[1].passed = false;
                    checks[1].witness = Some((point.clone(), md));
                }
            }
            // (5) strict decrease in n
            if n > 1 && checks[4].passed && !(md < prev_md) {
                checks[4].passed = false;
                checks[4].witness = Some((point.clone(), md));
            }
            prev_md = md;
            if n == 1 {
                first_md = md;
            }
            if n == sample_box.n_max {
                last_md = md;
            }

            let norm = scalar::sqrt(
                point.iter().map(|&x| (x as f64) * (x as f64)).sum::<f64>(),
            );
            let mnorm = scalar::sqrt(m.iter().map(|x| x * x).sum::<f64>());
            if mnorm > 0.0 {
                log_pts.push((scalar::ln(1.0 + norm), scalar::ln(mnorm)));
            }
        }
        // (4) decay in n at fixed k'
        if checks[3].passed && !(first_md >= sample_box.decay_factor * last_md) {
            let mut point = kp.clone();
            point.push(i64::from(sample_box.n_max) * i64::from(a));
            checks[3].passed = false;
            checks[3].witness = Some((point, last_md));
        }
    }

    // (3) growth in |k'| at fixed n: compare the nearest and farthest corner
    // of the k' box for each sampled n.
    let near = alloc::vec![sample_box.kprime_min; dp];
    let far = alloc::vec![sample_box.kprime_max; dp];
    for n in 1..=sample_box.n_max {
        let na = i64::from(n) * i64::from(a);
        let mut p_near = near.clone();
        p_near.push(na);
        let mut p_far = far.clone();
        p_far.push(na);
        let md_near = sym.eval(&p_near)?[dp];
        let md_far = sym.eval(&p_far)?[dp];
        if !(md_far >= sample_box.growth_factor * md_near) {
            checks[2].passed = false;
            checks[2].witness = Some((p_far, md_far));
            break;
        }
    }

    // (6) least-squares fit of log |m| against log(1 + |k|); the bound
    // constant is then the worst observed ratio.
    let n_pts = log_pts.len() as f64;
    let (mut sx, mut sy, mut sxx, mut sxy) = (0.0, 0.0, 0.0, 0.0);
    for &(x, y) in &log_pts {
        sx += x;
        sy += y;
        sxx += x * x;
        sxy += x * y;
    }
    let denom = n_pts * sxx - sx * sx;
    let r0 = if denom > 0.0 { ((n_pts * sxy - sx * sy) / denom).max(0.0) } else { 0.0 };
    let mut c = 0.0f64;
    for &(x, y) in &log_pts {
        let ratio = scalar::exp(y - r0 * x);
        if ratio > c {
            c = ratio;
        }
    }
    checks[5].passed = r0.is_finite() && c.is_finite();
    if !checks[5].passed {
        checks[5].witness = Some((alloc::vec![], f64::NAN));
    }

    // PM6 is reported, not gated: af kept for symmetry of the interface.
    let _ = af;

    Ok(ValidationReport { checks, fitted_r0: r0, fitted_c: c })
}

/// Where a weight sequence came from.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Provenance {
    Sipm,
    FromSymbol,
    User,
}

#[derive(Debug, Clone, PartialEq)]
pub enum PnError {
    /// Request past the end of a finite user table.
    Exhausted { n: u32, len: usize },
    NonPositive { n: u32, value: f64 },
    NotIncreasing { n: u32 },
    /// The evaluated prefix fails the unboundedness threshold.
    NotUnbounded { ratio: f64, threshold: f64 },
    Symbol(SymbolError),
    Table(TableError),
}

impl fmt::Display for PnError {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            PnError::Exhausted { n, len } => {
                write!(f, "p_{n} requested but the table has only {len} entries")
            }
            PnError::NonPositive { n, value } => write!(f, "p_{n} = {value} is not positive"),
            PnError::NotIncreasing { n } => write!(f, "sequence not increasing at p_{n}"),
            PnError::NotUnbounded { ratio, threshold } => write!(
                f,
                "sequence not unbounded: p_N/p_2 = {ratio:.3} below threshold {threshold}"
            ),
            PnError::Symbol(e) => write!(f, "{e}"),
            PnError::Table(e) => write!(f, "{e}"),
        }
    }
}

impl core::error::Error for PnError {}

impl From<SymbolError> for PnError {
    fn from(e: SymbolError) -> Self {
        PnError::Symbol(e)
    }
}

#[derive(Debug, Clone, PartialEq)]
pub enum TableError {
    Empty,
    /// Indices must be exactly 1, 2, 3, ...
    BadIndex { row: usize, n: u32 },
    NonPositive { n: u32, value: f64 },
}

impl fmt::Display for TableError {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            TableError::Empty => write!(f, "empty weight table"),
            TableError::BadIndex { row, n } => {
                write!(f, "table row {row} has index {n}, expected consecutive from 1")
            }
            TableError::NonPositive { n, value } => {
                write!(f, "table entry p_{n} = {value} is not positive")
            }
        }
    }
}

impl core::error::Error for TableError {}

enum PnSource {
    Generator(Box<dyn Fn(u32) -> Result<f64, PnError> + Send + Sync>),
    Table,
}

/// A positive weight sequence `p_1, p_2, ...` with a cached prefix.
///
/// Reads are pure (`&self`); the cache is extended only through
/// [`PnSequence::prefill`], which takes `&mut self` and is idempotent, so
/// shared references can be used concurrently.
pub struct PnSequence {
    provenance: Provenance,
    cached: Vec<f64>,
    source: PnSource,
}

impl fmt::Debug for PnSequence {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.debug_struct("PnSequence")
            .field("provenance", &self.provenance)
            .field("cached_len", &self.cached.len())
            .finish_non_exhaustive()
    }
}

impl PnSequence {
    pub fn sipm(params: SipmParams) -> Self {
        PnSequence {
            provenance: Provenance::Sipm,
            cached: Vec::new(),
            source: PnSource::Generator(Box::new(move |n| Ok(params.pn(n)))),
        }
    }

    pub fn from_symbol(sym: MultiplierSymbol, a: u32, kprime: Vec<i64>) -> Self {
        PnSequence {
            provenance: Provenance::FromSymbol,
            cached: Vec::new(),
            source: PnSource::Generator(Box::new(move |n| {
                pn_from_symbol(&sym, a, &kprime, n).map_err(PnError::from)
            })),
        }
    }

    /// Builds from `(n, p_n)` pairs; indices must be consecutive from 1 and
    /// values positive. Monotonicity is not required here, only when the
    /// sequence reaches the eigensolver.
    pub fn from_pairs(pairs: &[(u32, f64)]) -> Result<Self, TableError> {
        if pairs.is_empty() {
            return Err(TableError::Empty);
        }
        let mut cached = Vec::with_capacity(pairs.len());
        for (row, &(n, p)) in pairs.iter().enumerate() {
            if n as usize != row + 1 {
                return Err(TableError::BadIndex { row, n });
            }
            if !(p > 0.0) || !p.is_finite() {
                return Err(TableError::NonPositive { n, value: p });
            }
            cached.push(p);
        }
        Ok(PnSequence { provenance: Provenance::User, cached, source: PnSource::Table })
    }

    pub fn from_fn<F>(f: F) -> Self
    where
        F: Fn(u32) -> f64 + Send + Sync + 'static,
    {
        PnSequence {
            provenance: Provenance::User,
            cached: Vec::new(),
            source: PnSource::Generator(Box::new(move |n| Ok(f(n)))),
        }
    }

    pub fn provenance(&self) -> Provenance {
        self.provenance
    }

    /// Length of the finite table, if this sequence is one.
    pub fn table_len(&self) -> Option<usize> {
        match self.source {
            PnSource::Table => Some(self.cached.len()),
            PnSource::Generator(_) => None,
        }
    }

    /// `p_n`, `n >= 1`.
    pub fn value(&self, n: u32) -> Result<f64, PnError> {
        debug_assert!(n >= 1);
        let idx = (n - 1) as usize;
        if idx < self.cached.len() {
            return Ok(self.cached[idx]);
        }
        match &self.source {
            PnSource::Table => Err(PnError::Exhausted { n, len: self.cached.len() }),
            PnSource::Generator(g) => {
                let p = g(n)?;
                if !(p > 0.0) || !p.is_finite() {
                    return Err(PnError::NonPositive { n, value: p });
                }
                Ok(p)
            }
        }
    }

    /// Extends the cached prefix to at least `len` values. Idempotent.
    pub fn prefill(&mut self, len: usize) -> Result<(), PnError> {
        while self.cached.len() < len {
            let n = self.cached.len() as u32 + 1;
            let p = self.value(n)?;
            self.cached.push(p);
        }
        Ok(())
    }

    /// Gate used by the eigensolver: positivity and strict monotonicity over
    /// the first `depth` values, plus the unboundedness heuristic
    /// `p_depth / p_2 >= ratio`.
    pub fn validate_for_solver(&self, depth: u32, ratio: f64) -> Result<(), PnError> {
        let depth = match self.table_len() {
            Some(len) => depth.min(len as u32),
            None => depth,
        }
        .max(3);
        let mut prev = self.value(1)?;
        if !(prev > 0.0) {
            return Err(PnError::NonPositive { n: 1, value: prev });
        }
        let mut p2 = prev;
        for n in 2..=depth {
            let p = self.value(n)?;
            if !(p > prev) {
                return Err(PnError::NotIncreasing { n });
            }
            if n == 2 {
                p2 = p;
            }
            prev = p;
        }
        let observed = prev / p2;
        if observed < ratio {
            return Err(PnError::NotUnbounded { ratio: observed, threshold: ratio });
        }
        Ok(())
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn params(beta: f64, a: u32, k: u32) -> SipmParams {
        SipmParams::new(beta, a, k).unwrap()
    }

    #[test]
    fn pn_hand_values() {
        // beta=1, a=1, k=1, n=1: 2 sqrt(2)
        let p = params(1.0, 1, 1);
        assert!((p.pn(1) - 2.0 * 2.0f64.sqrt()).abs() < 1e-14);
        // beta=2 collapses the bracket: p_n = 2/(a k^2)
        let p = params(2.0, 1, 1);
        assert_eq!(p.pn(7), 2.0);
        // monotone for beta < 2
        let p = params(1.0, 1, 1);
        assert!(p.pn(2) > p.pn(1));
    }

    #[test]
    fn pn_growth_rate() {
        // p_{2n}/p_n -> 2^{2-beta} as n grows; check the near-asymptotic bound
        let delta = 0.05;
        for &beta in &[0.5, 1.0, 1.5] {
            let p = params(beta, 1, 1);
            for n in [64, 256, 1024] {
                let ratio = p.pn(2 * n) / p.pn(n);
                assert!(
                    ratio >= 2.0f64.powf(0.5 * (2.0 - beta)) * (1.0 - delta),
                    "beta={beta} n={n} ratio={ratio}"
                );
            }
        }
    }

    #[test]
    fn param_validation() {
        assert!(SipmParams::new(0.0, 1, 1).is_err());
        assert!(SipmParams::new(2.5, 1, 1).is_err());
        assert!(SipmParams::new(1.0, 0, 1).is_err());
        assert!(SipmParams::new(1.0, 1, 0).is_err());
    }

    #[test]
    fn symbol_matches_closed_form() {
        for &beta in &[0.5, 1.0, 1.5, 2.0] {
            let sym = MultiplierSymbol::sipm(beta);
            for a in [1u32, 2] {
                for kp in [1i64, 2, 5] {
                    for n in [1u32, 2, 9] {
                        let via_symbol = pn_from_symbol(&sym, a, &[kp], n).unwrap();
                        let direct = params(beta, a, kp as u32).pn(n);
                        assert!(
                            (via_symbol - direct).abs() <= 1e-13 * direct,
                            "beta={beta} a={a} k'={kp} n={n}: {via_symbol} vs {direct}"
                        );
                    }
                }
            }
        }
    }

    #[test]
    fn symbol_constant_and_zero() {
        let sym = MultiplierSymbol::new(2, |_| alloc::vec![0.0, 1.0]).unwrap();
        assert_eq!(pn_from_symbol(&sym, 2, &[3], 11).unwrap(), 1.0);
        let zero = MultiplierSymbol::new(2, |_| alloc::vec![0.0, 0.0]).unwrap();
        assert!(matches!(
            pn_from_symbol(&zero, 1, &[1], 1),
            Err(SymbolError::NonPositive { .. })
        ));
    }

    #[test]
    fn validate_sipm_symbol() {
        for &beta in &[0.5, 1.0, 1.5] {
            let sym = MultiplierSymbol::sipm(beta);
            let report = validate_symbol(&sym, 1, &SampleBox::default()).unwrap();
            assert!(report.all_passed(), "beta={beta}:\n{report}");
        }
    }

    #[test]
    fn validate_catches_constructed_failures() {
        // m(0', a) != 0
        let bad_steady = MultiplierSymbol::new(2, |k| {
            alloc::vec![0.0, 1.0 / (1.0 + (k[1] as f64).abs())]
        })
        .unwrap();
        let report = validate_symbol(&bad_steady, 1, &SampleBox::default()).unwrap();
        assert!(!report.checks[0].passed);
        assert_eq!(report.checks[0].witness.as_ref().unwrap().0, alloc::vec![0, 1]);

        // odd m_d
        let odd = MultiplierSymbol::new(2, |k| {
            let s = (k[0] + k[1]).signum() as f64;
            alloc::vec![0.0, s * (1.0 + 1.0 / (1.0 + (k[1] as f64).abs()))]
        })
        .unwrap();
        let report = validate_symbol(&odd, 1, &SampleBox::default()).unwrap();
        assert!(!report.checks[1].passed);
    }

    #[test]
    fn table_sequence() {
        let seq = PnSequence::from_pairs(&[(1, 1.0), (2, 16.0), (3, 81.0)]).unwrap();
        assert_eq!(seq.value(2).unwrap(), 16.0);
        assert!(matches!(seq.value(4), Err(PnError::Exhausted { n: 4, len: 3 })));
        assert!(PnSequence::from_pairs(&[(2, 1.0)]).is_err());
        assert!(PnSequence::from_pairs(&[(1, -1.0)]).is_err());
        assert!(PnSequence::from_pairs(&[]).is_err());
    }

    #[test]
    fn solver_gate() {
        let constant = PnSequence::from_fn(|_| 2.0);
        assert!(matches!(
            constant.validate_for_solver(1024, 8.0),
            Err(PnError::NotUnbounded { .. })
        ));
        let sipm = PnSequence::sipm(params(2.0, 1, 1));
        assert!(sipm.validate_for_solver(1024, 8.0).is_err());
        let good = PnSequence::sipm(params(1.0, 1, 1));
        assert!(good.validate_for_solver(1024, 8.0).is_ok());
        let decreasing = PnSequence::from_fn(|n| 100.0 - f64::from(n));
        assert!(matches!(
            decreasing.validate_for_solver(16, 8.0),
            Err(PnError::NotIncreasing { .. })
        ));
    }

    #[test]
    fn prefill_idempotent() {
        let mut seq = PnSequence::sipm(params(1.0, 1, 1));
        seq.prefill(10).unwrap();
        seq.prefill(10).unwrap();
        seq.prefill(4).unwrap();
        assert_eq!(seq.value(10).unwrap(), params(1.0, 1, 1).pn(10));
    }
}
