//! Brute-force reference: the collective-decay master equation on the full
//! `2^N`-dimensional space, with skew information and LQU evaluated
//! literally from dense matrices.
//!
//! Nothing here uses the Dicke-basis reductions of `dicke-core`; only the
//! adaptive integrator is shared.

use std::fmt;

use dicke_core::integrator::Integrator;
use dicke_core::qinfo::Axis;
use dicke_core::{
    build_generator, build_jx, evolve_with, lqu, power_breakdown, wysi_sigma_z_local,
    wysi_symmetric, SystemParams, Tolerances,
};
use nalgebra::{DMatrix, Matrix3, SymmetricEigen};
use num_complex::Complex64;
use thiserror::Error;

/// Largest emitter count the oracle accepts (32-dimensional space).
pub const MAX_EMITTERS: u32 = 5;

const TRACE_TOLERANCE: f64 = 1e-10;
const HERMITIAN_TOLERANCE: f64 = 1e-12;
const POSITIVITY_TOLERANCE: f64 = 1e-10;

#[derive(Debug, Error)]
pub enum OracleError {
    #[error("oracle supports at most {MAX_EMITTERS} emitters, got {0}")]
    TooManyEmitters(u32),
    #[error("observable is {actual}x{actual}, state is {expected}x{expected}")]
    DimensionMismatch { expected: usize, actual: usize },
    #[error("state has eigenvalue {0:e}, not positive semidefinite")]
    NotPositive(f64),
    #[error("state trace is {0}")]
    BadTrace(f64),
    #[error("state is not Hermitian (deviation {0:e})")]
    NotHermitian(f64),
    #[error("emitter index {index} out of range 1..={n}")]
    EmitterIndex { index: usize, n: u32 },
    #[error(transparent)]
    Core(#[from] dicke_core::Error),
    #[error(transparent)]
    Integration(#[from] dicke_core::IntegrationError),
}

type CMatrix = DMatrix<Complex64>;

/// Density matrix of `N` emitters. Basis index bit `N − 1 − l` is emitter
/// `l` (0-based), with bit value 0 = excited.
#[derive(Debug, Clone)]
pub struct FullState {
    n_emitters: u32,
    matrix: CMatrix,
}

impl FullState {
    pub fn new(n_emitters: u32, matrix: CMatrix) -> Result<Self, OracleError> {
        check_n(n_emitters)?;
        let dim = 1usize << n_emitters;
        if matrix.nrows() != dim || matrix.ncols() != dim {
            return Err(OracleError::DimensionMismatch {
                expected: dim,
                actual: matrix.nrows(),
            });
        }
        let state = Self { n_emitters, matrix };
        state.validate()?;
        Ok(state)
    }

    /// `|e…e⟩⟨e…e|`.
    pub fn fully_excited(n_emitters: u32) -> Result<Self, OracleError> {
        check_n(n_emitters)?;
        let dim = 1usize << n_emitters;
        let mut m = CMatrix::zeros(dim, dim);
        m[(0, 0)] = Complex64::new(1.0, 0.0);
        Ok(Self {
            n_emitters,
            matrix: m,
        })
    }

    pub fn n_emitters(&self) -> u32 {
        self.n_emitters
    }

    pub fn matrix(&self) -> &CMatrix {
        &self.matrix
    }

    pub fn dim(&self) -> usize {
        self.matrix.nrows()
    }

    pub fn validate(&self) -> Result<(), OracleError> {
        let tr = self.matrix.trace();
        if (tr.re - 1.0).abs() > TRACE_TOLERANCE || tr.im.abs() > TRACE_TOLERANCE {
            return Err(OracleError::BadTrace(tr.re));
        }
        let herm = (&self.matrix - self.matrix.adjoint()).camax();
        if herm > HERMITIAN_TOLERANCE {
            return Err(OracleError::NotHermitian(herm));
        }
        let min = self.min_eigenvalue();
        if min < -POSITIVITY_TOLERANCE {
            return Err(OracleError::NotPositive(min));
        }
        Ok(())
    }

    pub fn min_eigenvalue(&self) -> f64 {
        SymmetricEigen::new(self.matrix.clone()).eigenvalues.min()
    }

    /// Principal square root through the Hermitian eigendecomposition.
    pub fn sqrt(&self) -> Result<CMatrix, OracleError> {
        let eig = SymmetricEigen::new(self.matrix.clone());
        let min = eig.eigenvalues.min();
        if min < -POSITIVITY_TOLERANCE {
            return Err(OracleError::NotPositive(min));
        }
        let roots = eig
            .eigenvalues
            .map(|l| Complex64::new(l.max(0.0).sqrt(), 0.0));
        let v = &eig.eigenvectors;
        Ok(v * CMatrix::from_diagonal(&roots) * v.adjoint())
    }

    pub fn expectation(&self, op: &CMatrix) -> Complex64 {
        (&self.matrix * op).trace()
    }

    /// `⟨J,M|ρ|J,M⟩` for every Dicke vector, ordered `M = J … −J`.
    pub fn dicke_populations(&self) -> Vec<f64> {
        dicke_vectors(self.n_emitters)
            .iter()
            .map(|v| (v.adjoint() * &self.matrix * v)[(0, 0)].re)
            .collect()
    }
}

fn check_n(n: u32) -> Result<(), OracleError> {
    if n == 0 || n > MAX_EMITTERS {
        return Err(OracleError::TooManyEmitters(n));
    }
    Ok(())
}

fn single_site(n: u32, l: usize, op: [[f64; 2]; 2]) -> CMatrix {
    let local = CMatrix::from_fn(2, 2, |r, c| Complex64::new(op[r][c], 0.0));
    let id = CMatrix::identity(2, 2);
    let mut out = CMatrix::identity(1, 1);
    for site in 0..n as usize {
        out = out.kronecker(if site == l { &local } else { &id });
    }
    out
}

/// `σ₊ = |e⟩⟨g|` on emitter `l` (basis 0 = e, 1 = g).
pub fn sigma_plus(n: u32, l: usize) -> CMatrix {
    single_site(n, l, [[0.0, 1.0], [0.0, 0.0]])
}

pub fn sigma_minus(n: u32, l: usize) -> CMatrix {
    single_site(n, l, [[0.0, 0.0], [1.0, 0.0]])
}

pub fn sigma(n: u32, l: usize, axis: Axis) -> CMatrix {
    let i = Complex64::new(0.0, 1.0);
    match axis {
        Axis::X => sigma_plus(n, l) + sigma_minus(n, l),
        Axis::Y => (sigma_plus(n, l) - sigma_minus(n, l)) * -i,
        Axis::Z => single_site(n, l, [[1.0, 0.0], [0.0, -1.0]]),
    }
}

pub fn collective_lowering(n: u32) -> CMatrix {
    let dim = 1usize << n;
    (0..n as usize).fold(CMatrix::zeros(dim, dim), |acc, l| acc + sigma_minus(n, l))
}

pub fn collective(n: u32, axis: Axis) -> CMatrix {
    let dim = 1usize << n;
    (0..n as usize).fold(CMatrix::zeros(dim, dim), |acc, l| acc + sigma(n, l, axis))
        * Complex64::new(0.5, 0.0)
}

/// Dicke vectors built by repeated application of `J₋` to `|e…e⟩`.
pub fn dicke_vectors(n: u32) -> Vec<CMatrix> {
    let dim = 1usize << n;
    let lower = collective_lowering(n);
    let mut v = CMatrix::zeros(dim, 1);
    v[(0, 0)] = Complex64::new(1.0, 0.0);
    let mut out = vec![v.clone()];
    for _ in 0..n {
        v = &lower * v;
        let norm = v.norm();
        v /= Complex64::new(norm, 0.0);
        out.push(v.clone());
    }
    out
}

/// Samples of the full-space evolution on a uniform `γt` grid.
pub struct FullTrajectory {
    pub times: Vec<f64>,
    pub states: Vec<FullState>,
}

/// Integrates `dρ/dt = γ(2J₋ρJ₊ − J₊J₋ρ − ρJ₊J₋)` from the fully excited
/// projector.
pub fn full_evolve(
    params: &SystemParams,
    t_end: f64,
    n_samples: usize,
    tolerances: Tolerances,
) -> Result<FullTrajectory, OracleError> {
    let n = params.n_emitters();
    check_n(n)?;
    if n_samples < 2 || t_end.is_nan() || t_end <= 0.0 {
        return Err(dicke_core::Error::InvalidParameter {
            name: "n_samples/t_end",
            reason: "need at least 2 samples over a positive window",
        }
        .into());
    }
    let dim = 1usize << n;
    // J₋ is real in this basis, so real and imaginary parts evolve separately
    let lower = collective_lowering(n).map(|c| c.re);
    let raise = lower.transpose();
    let number = &raise * &lower;
    let len = dim * dim;

    // in γt units the overall γ drops out
    let rhs = |_: f64, y: &[f64], dy: &mut [f64]| {
        for part in 0..2 {
            let rho = DMatrix::from_column_slice(dim, dim, &y[part * len..(part + 1) * len]);
            let d = (&lower * &rho * &raise) * 2.0 - &number * &rho - &rho * &number;
            dy[part * len..(part + 1) * len].copy_from_slice(d.as_slice());
        }
    };
    let mut y = vec![0.0; 2 * len];
    y[0] = 1.0;
    let mut integ = Integrator::new(rhs, y.len(), tolerances)?;
    let mut t = 0.0;
    let mut times = Vec::with_capacity(n_samples);
    let mut states = Vec::with_capacity(n_samples);
    let last = (n_samples - 1) as f64;
    for i in 0..n_samples {
        let target = if i + 1 == n_samples {
            t_end
        } else {
            t_end * i as f64 / last
        };
        integ.advance(&mut t, &mut y, target)?;
        let m = CMatrix::from_fn(dim, dim, |r, c| {
            Complex64::new(y[c * dim + r], y[len + c * dim + r])
        });
        times.push(target);
        states.push(FullState::new(n, m)?);
    }
    Ok(FullTrajectory { times, states })
}

/// `I(ρ, K) = −½ Tr([√ρ, K]²)`.
pub fn full_wysi(state: &FullState, observable: &CMatrix) -> Result<f64, OracleError> {
    let root = state.sqrt()?;
    wysi_with_root(&root, observable)
}

fn wysi_with_root(root: &CMatrix, k: &CMatrix) -> Result<f64, OracleError> {
    if k.nrows() != root.nrows() || k.ncols() != root.ncols() {
        return Err(OracleError::DimensionMismatch {
            expected: root.nrows(),
            actual: k.nrows(),
        });
    }
    let c = root * k - k * root;
    Ok(-0.5 * (&c * &c).trace().re)
}

/// `Var(ρ, K) = Tr(ρK²) − (Tr ρK)²`.
pub fn full_variance(state: &FullState, k: &CMatrix) -> f64 {
    let mean = state.expectation(k).re;
    state.expectation(&(k * k)).re - mean * mean
}

/// LQU of emitter `emitter_index` (1-based) from the literal W-matrix.
///
/// Labels are `z` when the top eigenspace of `W` is at least half aligned
/// with `z`, otherwise `x`; the model is symmetric under rotations about
/// `z`, so a transverse direction is reported as `x`.
pub fn full_lqu(state: &FullState, emitter_index: usize) -> Result<(f64, Axis), OracleError> {
    let w = full_w_matrix(state, emitter_index)?;
    let eig = SymmetricEigen::new(w);
    let top = eig.eigenvalues.max();
    let mut z_weight = 0.0;
    for (i, &l) in eig.eigenvalues.iter().enumerate() {
        if top - l <= 1e-9 {
            z_weight += eig.eigenvectors[(2, i)].powi(2);
        }
    }
    let axis = if z_weight >= 0.5 - 1e-9 {
        Axis::Z
    } else {
        Axis::X
    };
    Ok(((1.0 - top).clamp(0.0, 1.0), axis))
}

/// `W_αβ = Re Tr(√ρ σ_α √ρ σ_β)` for one emitter (1-based index).
pub fn full_w_matrix(state: &FullState, emitter_index: usize) -> Result<Matrix3<f64>, OracleError> {
    let n = state.n_emitters;
    if emitter_index == 0 || emitter_index > n as usize {
        return Err(OracleError::EmitterIndex {
            index: emitter_index,
            n,
        });
    }
    let root = state.sqrt()?;
    let l = emitter_index - 1;
    let sandwiched: Vec<CMatrix> = Axis::ALL.iter().map(|&a| &root * sigma(n, l, a)).collect();
    Ok(Matrix3::from_fn(|a, b| {
        (&sandwiched[a] * &sandwiched[b]).trace().re
    }))
}

/// Quantities compared between the two pipelines.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum Quantity {
    Populations,
    PTotal,
    PInd,
    PCorr,
    WysiSigmaZ,
    WysiJx,
    Lqu,
    Minimizer,
}

impl Quantity {
    pub const ALL: [Quantity; 8] = [
        Quantity::Populations,
        Quantity::PTotal,
        Quantity::PInd,
        Quantity::PCorr,
        Quantity::WysiSigmaZ,
        Quantity::WysiJx,
        Quantity::Lqu,
        Quantity::Minimizer,
    ];

    pub fn name(self) -> &'static str {
        match self {
            Quantity::Populations => "populations",
            Quantity::PTotal => "p_total",
            Quantity::PInd => "p_ind",
            Quantity::PCorr => "p_corr",
            Quantity::WysiSigmaZ => "wysi_sigma_z",
            Quantity::WysiJx => "wysi_jx",
            Quantity::Lqu => "lqu",
            Quantity::Minimizer => "lqu_minimizer",
        }
    }
}

impl fmt::Display for Quantity {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.name())
    }
}

/// Maximum deviations of the symmetric-subspace pipeline from the oracle.
#[derive(Debug, Clone)]
pub struct VerificationReport {
    pub n_emitters: u32,
    pub samples: usize,
    pub tol: f64,
    /// Absolute deviation per quantity; for [`Quantity::Minimizer`] the
    /// number of disagreeing samples.
    pub deviations: Vec<(Quantity, f64)>,
    /// Samples where the labels were compared (`|W_xx − W_zz| > tol`).
    pub labels_compared: usize,
    /// Largest population outside the symmetric subspace.
    pub leakage: f64,
}

impl VerificationReport {
    pub fn deviation(&self, q: Quantity) -> f64 {
        self.deviations
            .iter()
            .find(|(k, _)| *k == q)
            .map(|&(_, v)| v)
            .unwrap_or(f64::NAN)
    }

    pub fn failing(&self) -> Vec<Quantity> {
        self.deviations
            .iter()
            .filter(|&&(q, v)| match q {
                Quantity::Minimizer => v != 0.0,
                _ => v.is_nan() || v > self.tol,
            })
            .map(|&(q, _)| q)
            .collect()
    }

    pub fn passed(&self) -> bool {
        self.failing().is_empty()
    }
}

impl fmt::Display for VerificationReport {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        writeln!(
            f,
            "N = {} ({} samples, tol {:e})",
            self.n_emitters, self.samples, self.tol
        )?;
        for &(q, v) in &self.deviations {
            let ok = !self.failing().contains(&q);
            match q {
                Quantity::Minimizer => writeln!(
                    f,
                    "  {:<14} {} mismatches / {} compared  {}",
                    q.name(),
                    v,
                    self.labels_compared,
                    if ok { "ok" } else { "FAIL" }
                )?,
                _ => writeln!(
                    f,
                    "  {:<14} {:.3e}  {}",
                    q.name(),
                    v,
                    if ok { "ok" } else { "FAIL" }
                )?,
            }
        }
        write!(f, "  symmetric-subspace leakage {:.3e}", self.leakage)
    }
}

/// Rate perturbation applied to the symmetric pipeline only; for negative
/// controls.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct RatePerturbation {
    pub level: usize,
    pub factor: f64,
}

/// Runs both pipelines on the same grid and collects maximum deviations.
pub fn compare(
    params: &SystemParams,
    t_end: f64,
    n_samples: usize,
    tol: f64,
    tolerances: Tolerances,
    perturbation: Option<RatePerturbation>,
) -> Result<VerificationReport, OracleError> {
    let n = params.n_emitters();
    check_n(n)?;
    let mut generator = build_generator(params);
    if let Some(p) = perturbation {
        if p.level > n as usize {
            return Err(dicke_core::Error::InvalidParameter {
                name: "level",
                reason: "no such Dicke level",
            }
            .into());
        }
        generator = generator.perturbed(p.level, p.factor);
    }
    let initial = dicke_core::initial_all_excited(params);
    let sym = evolve_with(params, generator, &initial, t_end, n_samples, tolerances)?;
    let full = full_evolve(params, t_end, n_samples, tolerances)?;

    let scale = 2.0 * params.gamma() * params.omega();
    let lower: Vec<CMatrix> = (0..n as usize).map(|l| sigma_minus(n, l)).collect();
    let raise: Vec<CMatrix> = lower.iter().map(|m| m.adjoint()).collect();
    let j_minus = collective_lowering(n);
    let ladder = j_minus.adjoint() * &j_minus;
    let sz1 = sigma(n, 0, Axis::Z);
    let jx_full = collective(n, Axis::X);
    let jx_sym = build_jx(n);
    let dicke = dicke_vectors(n);

    let mut max = [0.0f64; 7];
    let mut mismatches = 0usize;
    let mut labels_compared = 0usize;
    let mut leakage = 0.0f64;
    for (s, f) in sym.states().iter().zip(&full.states) {
        let pops: Vec<f64> = dicke
            .iter()
            .map(|v| (v.adjoint() * f.matrix() * v)[(0, 0)].re)
            .collect();
        leakage = leakage.max((1.0 - pops.iter().sum::<f64>()).abs());
        let dp = s
            .populations()
            .iter()
            .zip(&pops)
            .map(|(a, b)| (a - b).abs())
            .fold(0.0, f64::max);

        let p_total = scale * f.expectation(&ladder).re;
        let mut p_ind = 0.0;
        let mut p_corr = 0.0;
        for l in 0..n as usize {
            for k in 0..n as usize {
                let v = scale * f.expectation(&(&raise[l] * &lower[k])).re;
                if l == k {
                    p_ind += v;
                } else {
                    p_corr += v;
                }
            }
        }
        let pb = power_breakdown(params, s)?;

        let root = f.sqrt()?;
        let i_sz = wysi_with_root(&root, &sz1)?;
        let i_jx = wysi_with_root(&root, &jx_full)?;
        let (lqu_full, label_full) = full_lqu(f, 1)?;
        let w = dicke_core::w_matrix(s)?;
        let (lqu_sym, label_sym) = lqu(s)?;

        let devs = [
            dp,
            (pb.p_total - p_total).abs(),
            (pb.p_ind - p_ind).abs(),
            (pb.p_corr - p_corr).abs(),
            (wysi_sigma_z_local(s) - i_sz).abs(),
            (wysi_symmetric(s, &jx_sym)? - i_jx).abs(),
            (lqu_sym - lqu_full).abs(),
        ];
        for (m, d) in max.iter_mut().zip(devs) {
            *m = if d.is_nan() { f64::NAN } else { m.max(d) };
        }
        // labels are only meaningful away from the W_xx = W_zz switch
        if (w.xx() - w.zz()).abs() > tol {
            labels_compared += 1;
            if label_sym != label_full {
                mismatches += 1;
            }
        }
    }
    let mut deviations: Vec<(Quantity, f64)> =
        Quantity::ALL[..7].iter().copied().zip(max).collect();
    deviations.push((Quantity::Minimizer, mismatches as f64));
    Ok(VerificationReport {
        n_emitters: n,
        samples: n_samples,
        tol,
        deviations,
        labels_compared,
        leakage,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use approx::assert_abs_diff_eq;

    #[test]
    fn dicke_vectors_are_orthonormal_and_symmetric() {
        for n in 1..=4 {
            let v = dicke_vectors(n);
            assert_eq!(v.len(), n as usize + 1);
            for a in 0..v.len() {
                for b in 0..v.len() {
                    let ip = (v[a].adjoint() * &v[b])[(0, 0)];
                    assert_abs_diff_eq!(ip.norm(), if a == b { 1.0 } else { 0.0 }, epsilon = 1e-12);
                }
            }
        }
    }

    #[test]
    fn rejects_too_many_emitters() {
        assert!(matches!(
            FullState::fully_excited(6),
            Err(OracleError::TooManyEmitters(6))
        ));
        let p = SystemParams::unit(6).unwrap();
        assert!(full_evolve(&p, 1.0, 3, Tolerances::default()).is_err());
    }

    #[test]
    fn pauli_algebra() {
        let n = 2;
        let (x, y, z) = (
            sigma(n, 1, Axis::X),
            sigma(n, 1, Axis::Y),
            sigma(n, 1, Axis::Z),
        );
        let i = Complex64::new(0.0, 1.0);
        assert!((&x * &y - &y * &x - z * (i * 2.0)).camax() < 1e-15);
    }

    #[test]
    fn emitter_index_checked() {
        let s = FullState::fully_excited(2).unwrap();
        assert!(full_lqu(&s, 0).is_err());
        assert!(full_lqu(&s, 3).is_err());
    }

    #[test]
    fn observable_dimension_checked() {
        let s = FullState::fully_excited(2).unwrap();
        assert!(matches!(
            full_wysi(&s, &collective(3, Axis::X)),
            Err(OracleError::DimensionMismatch {
                expected: 4,
                actual: 8
            })
        ));
    }

    #[test]
    fn rejects_non_positive_state() {
        let m = CMatrix::from_diagonal(&nalgebra::DVector::from_vec(vec![
            Complex64::new(1.2, 0.0),
            Complex64::new(-0.2, 0.0),
        ]));
        assert!(matches!(
            FullState::new(1, m),
            Err(OracleError::NotPositive(_))
        ));
    }
}
