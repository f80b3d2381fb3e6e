//! The linearized operator on Fourier slices, certified eigenpairs, linear
//! evolution, and the `beta = 2` construction.
//!
//! At fixed horizontal frequency `k1` the linearized operator acts on the
//! coefficients of `sin(k1 x1) sin(n a x2)` tridiagonally:
//! `(L c)_n = c_{n-1}/p_{n-1} + c_{n+1}/p_{n+1}` with the sign convention
//! fixed to `+1` here. The continued-fraction coefficients solve the
//! opposite-sign recursion; the alternation `c_n -> (-1)^n c_n` maps one
//! convention to the other, so residuals quantify over both.

use alloc::vec::Vec;
use core::fmt;

use crate::contfrac::{self, CoefficientTable, ContFracConfig, ContFracError};
use crate::multiplier::{ParamError, PnSequence, SipmParams};
use crate::scalar;

#[derive(Debug, Clone, PartialEq)]
pub enum SpectralError {
    Param(ParamError),
    ContFrac(ContFracError),
    GridUnderResolved { m1: usize, m2: usize, need1: usize, need2: usize },
    DtTooLarge { dt: f64, bound: f64 },
    /// Shell norm exceeded ten times the Gronwall envelope.
    Instability { t: f64, norm: f64, envelope: f64 },
    ZeroSlice,
}

impl fmt::Display for SpectralError {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            SpectralError::Param(e) => write!(f, "{e}"),
            SpectralError::ContFrac(e) => write!(f, "{e}"),
            SpectralError::GridUnderResolved { m1, m2, need1, need2 } => write!(
                f,
                "grid {m1} x {m2} under-resolves the eigenfunction (need >= {need1} x {need2})"
            ),
            SpectralError::DtTooLarge { dt, bound } => {
                write!(f, "dt = {dt} exceeds the stability bound {bound}")
            }
            SpectralError::Instability { t, norm, envelope } => write!(
                f,
                "shell norm {norm} at t = {t} exceeds 10x the envelope {envelope}"
            ),
            SpectralError::ZeroSlice => write!(f, "slice has zero norm"),
        }
    }
}

impl core::error::Error for SpectralError {}

impl From<ParamError> for SpectralError {
    fn from(e: ParamError) -> Self {
        SpectralError::Param(e)
    }
}

impl From<ContFracError> for SpectralError {
    fn from(e: ContFracError) -> Self {
        SpectralError::ContFrac(e)
    }
}

/// Coefficients over `n = 1..=N` of `sin(k1 x1) sin(n a x2)` at fixed `k1`.
#[derive(Debug, Clone)]
pub struct SpectralSlice {
    pub params: SipmParams,
    pub coeffs: Vec<f64>,
}

impl SpectralSlice {
    pub fn new(params: SipmParams, coeffs: Vec<f64>) -> Self {
        debug_assert!(coeffs.len() >= 3);
        SpectralSlice { params, coeffs }
    }

    pub fn zeros(params: SipmParams, n: usize) -> Self {
        SpectralSlice { params, coeffs: alloc::vec![0.0; n] }
    }

    pub fn norm(&self) -> f64 {
        scalar::sqrt(self.coeffs.iter().map(|c| c * c).sum())
    }
}

/// Applies the linearized operator to a slice: the mode-`n` output collects
/// `1/p` couplings from its two neighbors, with `c_0 = 0` and truncation
/// `c_{N+1} = 0`.
pub fn apply_l(slice: &SpectralSlice) -> SpectralSlice {
    let n = slice.coeffs.len();
    let p = |m: usize| slice.params.pn(m as u32);
    let mut out = alloc::vec![0.0f64; n];
    for (i, o) in out.iter_mut().enumerate() {
        let mode = i + 1;
        let mut acc = 0.0;
        if mode >= 2 {
            acc += slice.coeffs[i - 1] / p(mode - 1);
        }
        if i + 1 < n {
            acc += slice.coeffs[i + 1] / p(mode + 1);
        }
        *o = acc;
    }
    SpectralSlice { params: slice.params, coeffs: out }
}

/// A certified eigenpair: solved eigenvalue, coefficient table, Sobolev
/// index and the normalization making the assembled field unit-norm.
#[derive(Debug, Clone)]
pub struct EigenPair {
    pub params: SipmParams,
    pub s: f64,
    pub lambda: f64,
    pub table: CoefficientTable,
    /// `pi * ||n^s c_n||`, the constant dividing the coefficients.
    pub normalization: f64,
}

/// Solves the characteristic equation for `params`, builds the coefficient
/// table (length `n`), and records the `H^s` normalization.
pub fn build_eigen_pair(
    params: SipmParams,
    s: f64,
    n: usize,
    cfg: &ContFracConfig,
) -> Result<EigenPair, SpectralError> {
    let seq = PnSequence::sipm(params);
    let res = contfrac::solve_lambda_star(&seq, cfg)?;
    let table = contfrac::coefficients(&res, &seq, n, cfg)?;
    let mut sum = 0.0;
    for (i, &c) in table.c.iter().enumerate() {
        let m = (i + 1) as f64;
        sum += scalar::powf(m, 2.0 * s) * c * c;
    }
    let normalization = core::f64::consts::PI * scalar::sqrt(sum);
    Ok(EigenPair { params, s, lambda: res.lambda_star, table, normalization })
}

/// Relative eigen-residual `||L c - lambda c|| / ||c||` over the table,
/// minimized over the two sign conventions and the alternation.
pub fn eigen_residual(pair: &EigenPair) -> Result<f64, SpectralError> {
    let c = &pair.table.c;
    if c.iter().all(|&x| x == 0.0) {
        return Err(SpectralError::ZeroSlice);
    }
    let slice = SpectralSlice::new(pair.params, c.clone());
    Ok(residual_min_conventions(&slice, pair.lambda))
}

fn residual_min_conventions(slice: &SpectralSlice, lambda: f64) -> f64 {
    let n = slice.coeffs.len();
    let mut best = f64::INFINITY;
    for alternate in [false, true] {
        let mut coeffs = slice.coeffs.clone();
        if alternate {
            for (i, c) in coeffs.iter_mut().enumerate() {
                if (i + 1) % 2 == 1 {
                    *c = -*c;
                }
            }
        }
        let v = SpectralSlice::new(slice.params, coeffs);
        let lv = apply_l(&v);
        for sigma in [1.0f64, -1.0] {
            let mut num = 0.0;
            let mut den = 0.0;
            // skip the last row: the truncation boundary drops c_{N+1}
            for i in 0..n - 1 {
                let r = sigma * lv.coeffs[i] - lambda * v.coeffs[i];
                num += r * r;
                den += v.coeffs[i] * v.coeffs[i];
            }
            let r = scalar::sqrt(num / den);
            if r < best {
                best = r;
            }
        }
    }
    best
}

/// Real samples of a field on the uniform `m1 x m2` grid over the torus.
#[derive(Debug, Clone)]
pub struct Field {
    pub m1: usize,
    pub m2: usize,
    /// Row-major: `values[i1 * m2 + i2]` at `x1 = 2 pi i1 / m1`,
    /// `x2 = 2 pi i2 / m2`.
    pub values: Vec<f64>,
}

impl Field {
    pub fn l2_norm(&self) -> f64 {
        let w = (2.0 * core::f64::consts::PI).powi(2) / (self.m1 * self.m2) as f64;
        scalar::sqrt(self.values.iter().map(|v| v * v).sum::<f64>() * w)
    }

    pub fn value(&self, i1: usize, i2: usize) -> f64 {
        self.values[i1 * self.m2 + i2]
    }
}

/// Samples `sin(k x1) sum_n (c_n / C) sin(n a x2)` on the grid. The grid
/// must resolve both the horizontal frequency and the deepest retained mode.
pub fn assemble_eigenfunction(
    pair: &EigenPair,
    m1: usize,
    m2: usize,
) -> Result<Field, SpectralError> {
    let n = pair.table.c.len();
    let need1 = 4 * pair.params.k as usize;
    let need2 = 4 * n * pair.params.a as usize;
    if m1 < need1 || m2 < need2 {
        return Err(SpectralError::GridUnderResolved { m1, m2, need1, need2 });
    }
    let two_pi = 2.0 * core::f64::consts::PI;
    // vertical profile by the sine recurrence
    let a = pair.params.a as f64;
    let mut profile = Vec::with_capacity(m2);
    for i2 in 0..m2 {
        let theta = a * two_pi * i2 as f64 / m2 as f64;
        let (s1, c1) = (scalar::sin(theta), scalar::cos(theta));
        let mut acc = 0.0;
        let mut s_prev = 0.0; // sin(0)
        let mut s_cur = s1; // sin(theta)
        for &cn in &pair.table.c {
            acc += cn * s_cur;
            let s_next = 2.0 * c1 * s_cur - s_prev;
            s_prev = s_cur;
            s_cur = s_next;
        }
        profile.push(acc / pair.normalization);
    }
    let k = pair.params.k as f64;
    let mut values = Vec::with_capacity(m1 * m2);
    for i1 in 0..m1 {
        let s = scalar::sin(k * two_pi * i1 as f64 / m1 as f64);
        for p in &profile {
            values.push(s * p);
        }
    }
    Ok(Field { m1, m2, values })
}

/// Extracts the coefficients of `sin(k1 x1) sin(n a x2)`, `n = 1..=n_max`,
/// from field samples. Exact for fields supported on resolved modes.
pub fn field_sine_coeffs(field: &Field, k1: u32, a: u32, n_max: usize) -> Vec<f64> {
    let two_pi = 2.0 * core::f64::consts::PI;
    // project out sin(k1 x1)
    let mut g = alloc::vec![0.0f64; field.m2];
    for i1 in 0..field.m1 {
        let s = scalar::sin(f64::from(k1) * two_pi * i1 as f64 / field.m1 as f64);
        let row = &field.values[i1 * field.m2..(i1 + 1) * field.m2];
        for (gj, &v) in g.iter_mut().zip(row) {
            *gj += s * v;
        }
    }
    for gj in g.iter_mut() {
        *gj *= 2.0 / field.m1 as f64;
    }
    // project each sin(n a x2)
    (1..=n_max)
        .map(|n| {
            let mut acc = 0.0;
            for (i2, &gj) in g.iter().enumerate() {
                let theta = f64::from(a) * n as f64 * two_pi * i2 as f64 / field.m2 as f64;
                acc += gj * scalar::sin(theta);
            }
            acc * 2.0 / field.m2 as f64
        })
        .collect()
}

/// Sequence-side `H^s` norm of a field supported on the `(k1, n a)` modes:
/// `pi * sqrt(sum_n n^{2s} coef_n^2)`.
pub fn field_hs_norm(field: &Field, k1: u32, a: u32, s: f64, n_max: usize) -> f64 {
    let coeffs = field_sine_coeffs(field, k1, a, n_max);
    let mut sum = 0.0;
    for (i, &c) in coeffs.iter().enumerate() {
        sum += scalar::powf((i + 1) as f64, 2.0 * s) * c * c;
    }
    core::f64::consts::PI * scalar::sqrt(sum)
}

/// Explicit-scheme stability bound for [`evolve_linear`]:
/// `0.5 / (2/p_1 + lambda_estimate)` with the bracket top as the estimate.
pub fn dt_stability_bound(params: &SipmParams) -> f64 {
    let p1 = params.pn(1);
    let p2 = params.pn(2);
    let lambda_est = 1.0 / scalar::sqrt(p1 * p2 - p1 * p1);
    0.5 / (2.0 / p1 + lambda_est)
}

#[derive(Debug, Clone)]
pub struct LinearTrajectory {
    pub times: Vec<f64>,
    /// l2 norm of the slice at each time (the shell norm at this `k1`).
    pub shell_norms: Vec<f64>,
    /// Gronwall envelope `exp(a k1^2 t) * norm(0)`.
    pub envelopes: Vec<f64>,
    pub final_slice: SpectralSlice,
}

/// Integrates `d c / dt = L c` with classical RK4, recording the shell norm
/// against its Gronwall envelope. Aborts when the norm exceeds ten times the
/// envelope.
pub fn evolve_linear(
    slice0: &SpectralSlice,
    t_final: f64,
    dt: f64,
) -> Result<LinearTrajectory, SpectralError> {
    let bound = dt_stability_bound(&slice0.params);
    if dt > bound {
        return Err(SpectralError::DtTooLarge { dt, bound });
    }
    let steps = if t_final > 0.0 { (t_final / dt).ceil() as usize } else { 0 };
    let dt = if steps > 0 { t_final / steps as f64 } else { dt };
    let norm0 = slice0.norm();
    let growth = f64::from(slice0.params.a) * f64::from(slice0.params.k).powi(2);

    let mut c = slice0.clone();
    let mut times = Vec::with_capacity(steps + 1);
    let mut norms = Vec::with_capacity(steps + 1);
    let mut envelopes = Vec::with_capacity(steps + 1);
    let axpy = |base: &SpectralSlice, scale: f64, dir: &SpectralSlice| {
        let coeffs = base
            .coeffs
            .iter()
            .zip(&dir.coeffs)
            .map(|(b, d)| b + scale * d)
            .collect();
        SpectralSlice { params: base.params, coeffs }
    };
    for step in 0..=steps {
        let t = step as f64 * dt;
        let envelope = norm0 * scalar::exp(growth * t);
        let norm = c.norm();
        times.push(t);
        norms.push(norm);
        envelopes.push(envelope);
        if norm > 10.0 * envelope + 1e-300 {
            return Err(SpectralError::Instability { t, norm, envelope });
        }
        if step == steps {
            break;
        }
        let k1 = apply_l(&c);
        let k2 = apply_l(&axpy(&c, 0.5 * dt, &k1));
        let k3 = apply_l(&axpy(&c, 0.5 * dt, &k2));
        let k4 = apply_l(&axpy(&c, dt, &k3));
        for i in 0..c.coeffs.len() {
            c.coeffs[i] += dt / 6.0
                * (k1.coeffs[i] + 2.0 * k2.coeffs[i] + 2.0 * k3.coeffs[i] + k4.coeffs[i]);
        }
    }
    Ok(LinearTrajectory { times, shell_norms: norms, envelopes, final_slice: c })
}

/// The `beta = 2` eigen-identity: from the `beta = 1` pair
/// `(lambda, c~)`, the function with coefficients `d_n = c~_n / |(k, n a)|`
/// satisfies `L_{beta=2} rho = lambda  Lambda rho`.
#[derive(Debug, Clone)]
pub struct Beta2Check {
    pub k: u32,
    pub a: u32,
    pub lambda: f64,
    /// `d_n`, the coefficients of the beta = 2 eigen-identity.
    pub coeffs: Vec<f64>,
    /// Relative residual of `L_{beta=2} rho = lambda Lambda rho` in
    /// coefficient space, minimized over sign conventions.
    pub residual: f64,
}

impl Beta2Check {
    /// `(||exp(t lambda Lambda) rho||, exp(t lambda) ||rho||)` on the
    /// truncated mode set; the first dominates the second since every mode
    /// frequency is at least one.
    pub fn growth_pair(&self, t: f64) -> (f64, f64) {
        let k2 = f64::from(self.k) * f64::from(self.k);
        let a = f64::from(self.a);
        let mut grown = 0.0;
        let mut flat = 0.0;
        for (i, &d) in self.coeffs.iter().enumerate() {
            let n = (i + 1) as f64;
            let freq = scalar::sqrt(k2 + n * n * a * a);
            let g = scalar::exp(t * self.lambda * freq) * d;
            grown += g * g;
            flat += d * d;
        }
        (scalar::sqrt(grown), scalar::exp(t * self.lambda) * scalar::sqrt(flat))
    }
}

pub fn beta2_pair(
    k: u32,
    a: u32,
    n: usize,
    cfg: &ContFracConfig,
) -> Result<Beta2Check, SpectralError> {
    let params = SipmParams::new(1.0, a, k)?;
    let seq = PnSequence::sipm(params);
    let res = contfrac::solve_lambda_star(&seq, cfg)?;
    let table = contfrac::coefficients(&res, &seq, n, cfg)?;
    let lambda = res.lambda_star;
    let k2 = f64::from(k) * f64::from(k);
    let af = f64::from(a);
    let freq = |m: usize| scalar::sqrt(k2 + (m as f64 * af).powi(2));
    let d: Vec<f64> = table
        .c
        .iter()
        .enumerate()
        .map(|(i, &c)| c / freq(i + 1))
        .collect();

    // (L_{beta=2} rho)_m = (a k^2 / 2)(d_{m-1} + d_{m+1});
    // (lambda Lambda rho)_m = lambda |(k, m a)| d_m = lambda c~_m.
    let w = af * k2 / 2.0;
    let mut best = f64::INFINITY;
    for alternate in [false, true] {
        let dv: Vec<f64> = d
            .iter()
            .enumerate()
            .map(|(i, &x)| if alternate && (i + 1) % 2 == 1 { -x } else { x })
            .collect();
        for sigma in [1.0f64, -1.0] {
            let mut num = 0.0;
            let mut den = 0.0;
            for m in 1..d.len() {
                let left = if m >= 2 { dv[m - 2] } else { 0.0 };
                let right = if m < d.len() { dv[m] } else { 0.0 };
                let lhs = sigma * w * (left + right);
                let rhs = lambda * freq(m) * dv[m - 1];
                num += (lhs - rhs) * (lhs - rhs);
                den += rhs * rhs;
            }
            let r = scalar::sqrt(num / den);
            if r < best {
                best = r;
            }
        }
    }
    Ok(Beta2Check { k, a, lambda, coeffs: d, residual: best })
}

#[cfg(test)]
mod tests {
    use super::*;

    fn params(beta: f64, a: u32, k: u32) -> SipmParams {
        SipmParams::new(beta, a, k).unwrap()
    }

    #[test]
    fn apply_l_zero_and_unit_mode() {
        let p = params(1.0, 1, 1);
        let zero = SpectralSlice::zeros(p, 16);
        assert!(apply_l(&zero).coeffs.iter().all(|&c| c == 0.0));

        let mut unit = SpectralSlice::zeros(p, 16);
        unit.coeffs[0] = 1.0;
        let out = apply_l(&unit);
        // mode 1 feeds only mode 2, with weight 1/p_1
        assert!((out.coeffs[1] - 1.0 / p.pn(1)).abs() < 1e-15);
        for (i, &c) in out.coeffs.iter().enumerate() {
            if i != 1 {
                assert_eq!(c, 0.0, "mode {}", i + 1);
            }
        }
    }

    #[test]
    fn apply_l_is_linear() {
        let p = params(0.5, 2, 3);
        let u = SpectralSlice::new(p, (1..=12).map(|i| (i as f64 * 0.7).sin()).collect());
        let v = SpectralSlice::new(p, (1..=12).map(|i| (i as f64 * 1.3).cos()).collect());
        let alpha = 2.75;
        let comb = SpectralSlice::new(
            p,
            u.coeffs.iter().zip(&v.coeffs).map(|(a, b)| alpha * a + b).collect(),
        );
        let lhs = apply_l(&comb);
        let lu = apply_l(&u);
        let lv = apply_l(&v);
        for i in 0..12 {
            let rhs = alpha * lu.coeffs[i] + lv.coeffs[i];
            assert!((lhs.coeffs[i] - rhs).abs() <= 1e-14 * rhs.abs().max(1.0));
        }
    }

    #[test]
    fn eigen_pair_residual_small() {
        let cfg = ContFracConfig::default();
        let pair = build_eigen_pair(params(1.0, 1, 4), 0.0, 256, &cfg).unwrap();
        let r = eigen_residual(&pair).unwrap();
        assert!(r <= 1e-8, "residual {r}");
        // perturbing lambda by 1e-3 relative must push the residual up
        let mut bad = pair.clone();
        bad.lambda *= 1.0 + 1e-3;
        let rb = eigen_residual(&bad).unwrap();
        assert!(rb >= 1e-4, "perturbed residual {rb}");
    }

    #[test]
    fn assembled_field_norm_and_parity() {
        let cfg = ContFracConfig::default();
        let pair = build_eigen_pair(params(1.0, 1, 1), 0.0, 64, &cfg).unwrap();
        let field = assemble_eigenfunction(&pair, 16, 4 * 64 + 4).unwrap();
        let norm = field_hs_norm(&field, 1, 1, 0.0, 64);
        assert!((norm - 1.0).abs() <= 1e-10, "norm {norm}");
        // l2 norm of the sample grid agrees with the projected norm at s=0
        assert!((field.l2_norm() - 1.0).abs() <= 1e-10);
        // odd under x1 -> -x1 and x2 -> -x2
        let m1 = field.m1;
        let m2 = field.m2;
        for i1 in 1..m1 {
            for i2 in 1..m2 {
                let v = field.value(i1, i2);
                assert!((v + field.value(m1 - i1, i22mirror(i2, m2))).abs() < 1e-12);
            }
        }
        fn i2mirror(i2: usize, m2: usize) -> usize {
            (m2 - i2) % m2
        }
    }

    #[test]
    fn single_mode_normalization() {
        // one coefficient, s = 0: the normalized field is sin(x1) sin(a x2) / pi
        let p = params(1.0, 1, 1);
        let table = CoefficientTable {
            lambda: 0.3,
            p1: p.pn(1),
            p2: p.pn(2),
            c: alloc::vec![2.0, 0.0, 0.0],
            eta: alloc::vec![0.0, 0.0],
            n0: 2,
            decay_certified: true,
            certified_len: 3,
            forward_agree_len: 3,
            max_residual: 0.0,
            max_rel_residual: 0.0,
        };
        let pair = EigenPair {
            params: p,
            s: 0.0,
            lambda: 0.3,
            normalization: core::f64::consts::PI * 2.0,
            table,
        };
        let field = assemble_eigenfunction(&pair, 8, 16).unwrap();
        assert!((field.l2_norm() - 1.0).abs() < 1e-12);
    }

    #[test]
    fn evolve_zero_stays_zero() {
        let p = params(1.0, 1, 2);
        let zero = SpectralSlice::zeros(p, 32);
        let dt = 0.5 * dt_stability_bound(&p);
        let traj = evolve_linear(&zero, 1.0, dt).unwrap();
        assert!(traj.shell_norms.iter().all(|&n| n <= 1e-14));
    }

    #[test]
    fn evolve_eigen_data_grows_like_exp() {
        let cfg = ContFracConfig::default();
        let pair = build_eigen_pair(params(1.0, 1, 4), 0.0, 256, &cfg).unwrap();
        // alternate so the coefficients are an eigenvector of the +1 convention
        let coeffs: Vec<f64> = pair
            .table
            .c
            .iter()
            .enumerate()
            .map(|(i, &c)| if (i + 1) % 2 == 1 { -c } else { c })
            .collect();
        let slice = SpectralSlice::new(pair.params, coeffs);
        let lambda = pair.lambda;
        let t_final = 3.0 / lambda;
        let dt = (0.1 / lambda).min(dt_stability_bound(&pair.params));
        let traj = evolve_linear(&slice, t_final, dt).unwrap();
        // fit log norm against t
        let n = traj.times.len() as f64;
        let (mut sx, mut sy, mut sxx, mut sxy) = (0.0, 0.0, 0.0, 0.0);
        for (t, nm) in traj.times.iter().zip(&traj.shell_norms) {
            let y = nm.ln();
            sx += t;
            sy += y;
            sxx += t * t;
            sxy += t * y;
        }
        let slope = (n * sxy - sx * sy) / (n * sxx - sx * sx);
        assert!(
            (slope - lambda).abs() <= 1e-4 * lambda,
            "slope {slope} vs lambda {lambda}"
        );
    }

    #[test]
    fn evolve_respects_envelope_on_random_data() {
        use rand::{Rng, SeedableRng};
        let mut rng = rand_chacha::ChaCha8Rng::seed_from_u64(7);
        let p = params(1.0, 1, 2);
        let coeffs: Vec<f64> = (0..64).map(|_| rng.gen_range(-1.0..1.0)).collect();
        let slice = SpectralSlice::new(p, coeffs);
        let dt = 0.5 * dt_stability_bound(&p);
        let traj = evolve_linear(&slice, 0.5, dt).unwrap();
        for ((t, nm), env) in traj.times.iter().zip(&traj.shell_norms).zip(&traj.envelopes) {
            assert!(nm <= &(env * (1.0 + 1e-9)), "t={t}: {nm} > {env}");
        }
    }

    #[test]
    fn evolve_rejects_large_dt() {
        let p = params(1.0, 1, 2);
        let slice = SpectralSlice::zeros(p, 8);
        let bound = dt_stability_bound(&p);
        assert!(matches!(
            evolve_linear(&slice, 1.0, 2.0 * bound),
            Err(SpectralError::DtTooLarge { .. })
        ));
    }

    #[test]
    fn rk4_order_via_richardson() {
        let cfg = ContFracConfig::default();
        let pair = build_eigen_pair(params(1.0, 1, 2), 0.0, 128, &cfg).unwrap();
        let slice = SpectralSlice::new(pair.params, pair.table.c.clone());
        let t = 0.4;
        let dt = 0.02;
        let a = evolve_linear(&slice, t, dt).unwrap();
        let b = evolve_linear(&slice, t, dt / 2.0).unwrap();
        let c = evolve_linear(&slice, t, dt / 4.0).unwrap();
        let diff = |x: &LinearTrajectory, y: &LinearTrajectory| -> f64 {
            x.final_slice
                .coeffs
                .iter()
                .zip(&y.final_slice.coeffs)
                .map(|(u, v)| (u - v) * (u - v))
                .sum::<f64>()
                .sqrt()
        };
        let e1 = diff(&a, &b);
        let e2 = diff(&b, &c);
        let order = (e1 / e2).log2();
        assert!(order > 3.5, "observed order {order}");
    }

    #[test]
    fn beta2_identity_and_growth() {
        let cfg = ContFracConfig::default();
        for k in [1u32, 2, 4] {
            let check = beta2_pair(k, 1, 192, &cfg).unwrap();
            assert!(check.residual <= 1e-8, "k={k}: residual {}", check.residual);
            for &t_scale in &[0.1, 0.5] {
                let t = t_scale / check.lambda;
                let (grown, flat) = check.growth_pair(t);
                assert!(grown >= flat, "k={k} t={t}");
            }
        }
    }
}
