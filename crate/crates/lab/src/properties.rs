//! Seeded randomized checks of the skew-information inequalities on
//! diagonal Dicke states.

use dicke_core::qinfo::{variance, variance_local, wysi_local, Axis, LocalPaulis};
use dicke_core::{build_jx, build_jz, wysi_symmetric, DickeDistribution, SymmetricOperator};
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

/// Worst violations found for one `N`.
#[derive(Debug, Clone, PartialEq)]
pub struct PropertyReport {
    pub n_emitters: u32,
    pub draws: usize,
    /// `max(−I, I − Var)` over all draws and observables.
    pub bound_violation: f64,
    /// `max(I(Σqρ) − Σ q I(ρ))`.
    pub convexity_violation: f64,
    /// `max I(ρ, Jz)`.
    pub jz_max: f64,
    /// `max I(1_sym/(N+1), K)` over `Jx` and random tridiagonal `K`.
    pub uniform_max: f64,
    /// `max |I − Var|` on single-level (pure) states.
    pub pure_deviation: f64,
}

impl PropertyReport {
    pub fn passed(&self) -> bool {
        self.bound_violation <= 1e-12
            && self.convexity_violation <= 1e-12
            && self.jz_max <= 1e-12
            && self.uniform_max <= 1e-12
            && self.pure_deviation <= 1e-10
    }
}

fn random_distribution(rng: &mut impl Rng, two_j: u32) -> DickeDistribution {
    let n = two_j as usize + 1;
    loop {
        // a third of the draws are sparse so zero populations show up
        let sparse = rng.gen_bool(1.0 / 3.0);
        let w: Vec<f64> = (0..n)
            .map(|_| {
                if sparse && rng.gen_bool(0.5) {
                    0.0
                } else {
                    -rng.gen::<f64>().max(1e-300).ln()
                }
            })
            .collect();
        let s: f64 = w.iter().sum();
        if s > 0.0 {
            return DickeDistribution::new(two_j, w.iter().map(|v| v / s).collect())
                .expect("normalized");
        }
    }
}

enum Observable<'a> {
    Global(&'a SymmetricOperator),
    Local(Axis),
}

pub fn run_wysi_suite(seed: u64, n_emitters: u32, draws: usize) -> PropertyReport {
    let mut rng =
        ChaCha8Rng::seed_from_u64(seed ^ u64::from(n_emitters).wrapping_mul(0x9E37_79B9_7F4A_7C15));
    let two_j = n_emitters;
    let jx = build_jx(two_j);
    let jz = build_jz(two_j);
    let paulis = LocalPaulis::new(two_j).expect("N >= 1");
    let observables = [
        Observable::Global(&jx),
        Observable::Local(Axis::X),
        Observable::Local(Axis::Z),
    ];
    let skew = |d: &DickeDistribution, k: &Observable| match k {
        Observable::Global(op) => wysi_symmetric(d, op).expect("matching dimension"),
        Observable::Local(a) => wysi_local(d, &paulis, *a).expect("matching dimension"),
    };
    let var = |d: &DickeDistribution, k: &Observable| match k {
        Observable::Global(op) => variance(d, op).expect("matching dimension"),
        Observable::Local(a) => variance_local(d, &paulis, *a).expect("matching dimension"),
    };

    let mut report = PropertyReport {
        n_emitters,
        draws,
        bound_violation: f64::NEG_INFINITY,
        convexity_violation: f64::NEG_INFINITY,
        jz_max: 0.0,
        uniform_max: 0.0,
        pure_deviation: 0.0,
    };
    for _ in 0..draws {
        let d = random_distribution(&mut rng, two_j);
        for k in &observables {
            let i = skew(&d, k);
            report.bound_violation = report.bound_violation.max(-i).max(i - var(&d, k));
        }
        report.jz_max = report
            .jz_max
            .max(wysi_symmetric(&d, &jz).expect("matching dimension"));

        let parts: Vec<DickeDistribution> = (0..rng.gen_range(2..=4))
            .map(|_| random_distribution(&mut rng, two_j))
            .collect();
        let mut q: Vec<f64> = parts.iter().map(|_| rng.gen::<f64>()).collect();
        let total: f64 = q.iter().sum();
        q.iter_mut().for_each(|v| *v /= total);
        let weighted: Vec<(f64, &DickeDistribution)> = q.iter().copied().zip(&parts).collect();
        let mix = DickeDistribution::mix(&weighted).expect("same dimension");
        for k in &observables {
            let rhs: f64 = weighted.iter().map(|(w, p)| w * skew(p, k)).sum();
            report.convexity_violation = report.convexity_violation.max(skew(&mix, k) - rhs);
        }

        let level = rng.gen_range(0..=two_j as usize);
        let pure = DickeDistribution::spike(two_j, level);
        for k in &observables {
            report.pure_deviation = report
                .pure_deviation
                .max((skew(&pure, k) - var(&pure, k)).abs());
        }
    }

    let uniform = DickeDistribution::uniform(two_j);
    report.uniform_max = wysi_symmetric(&uniform, &jx).expect("matching dimension");
    for _ in 0..16 {
        let diag: Vec<f64> = (0..=two_j).map(|_| rng.gen_range(-1.0..1.0)).collect();
        let off: Vec<f64> = (0..two_j).map(|_| rng.gen_range(-1.0..1.0)).collect();
        let k = SymmetricOperator::real_tridiagonal(two_j, &diag, &off).expect("valid tridiagonal");
        report.uniform_max = report
            .uniform_max
            .max(wysi_symmetric(&uniform, &k).expect("matching dimension"));
    }
    report
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn seeded_suite_is_deterministic_and_passes() {
        let a = run_wysi_suite(7, 4, 50);
        let b = run_wysi_suite(7, 4, 50);
        assert_eq!(a, b);
        assert!(a.passed(), "{a:?}");
    }
}
