use crate::{DickeDistribution, Result, SymmetricOperator};

use crate::qinfo::{Axis, LocalPaulis, WMatrix};
use crate::Error;

/// `I(ρ, K) = −½ Tr([√ρ, K]²)` for a state diagonal in the Dicke basis.
///
/// With `√ρ = Σ √p_M |M⟩⟨M|` this is
/// `Tr(ρK²) − Tr(√ρ K √ρ K) = ½ Σ_{a,b} (√p_a − √p_b)² |K_ab|²`, which is
/// evaluated in the manifestly non-negative second form.
pub fn wysi_symmetric(dist: &DickeDistribution, op: &SymmetricOperator) -> Result<f64> {
    check(dist, op)?;
    let sq: alloc::vec::Vec<f64> = dist.populations().iter().map(|&p| libm::sqrt(p)).collect();
    let mut acc = 0.0;
    for a in 0..op.dim() {
        for b in op.band(a) {
            if b <= a {
                continue;
            }
            let d = sq[a] - sq[b];
            acc += d * d * op.get(a, b).norm_sqr();
        }
    }
    Ok(acc)
}

/// `Var(ρ, K) = Tr(ρK²) − (Tr ρK)²`.
pub fn variance(dist: &DickeDistribution, op: &SymmetricOperator) -> Result<f64> {
    check(dist, op)?;
    let p = dist.populations();
    let k2 = op.square_diagonal();
    let second: f64 = p.iter().zip(&k2).map(|(p, k)| p * k).sum();
    let first: f64 = p.iter().enumerate().map(|(a, p)| p * op.get(a, a).re).sum();
    Ok(second - first * first)
}

/// Skew information of one emitter's `σz`: `(J² − ⟨Jz²⟩)/J²`.
pub fn wysi_sigma_z_local(dist: &DickeDistribution) -> f64 {
    let j = dist.j();
    dist.iter().map(|(m, p)| p * (j * j - m * m)).sum::<f64>() / (j * j)
}

/// Skew information of `σ_axis ⊗ 1` for one emitter, in the full space.
///
/// `σ² = 1` on the full space while `Tr(√ρ σ √ρ σ) = W_αα`, so the result is
/// `1 − W_αα`. The symmetric-subspace block alone is not enough here: `σ`
/// leaks out of the symmetric subspace and `⟨σ²⟩` must be taken before
/// projecting.
pub fn wysi_local(dist: &DickeDistribution, paulis: &LocalPaulis, axis: Axis) -> Result<f64> {
    let w = WMatrix::compute(dist, paulis)?;
    Ok((1.0 - w.get(axis, axis)).max(0.0))
}

/// `Var(ρ, σ_axis ⊗ 1) = 1 − ⟨σ_axis⟩²`.
pub fn variance_local(dist: &DickeDistribution, paulis: &LocalPaulis, axis: Axis) -> Result<f64> {
    let op = paulis.get(axis);
    check(dist, op)?;
    let mean: f64 = dist
        .populations()
        .iter()
        .enumerate()
        .map(|(a, p)| p * op.get(a, a).re)
        .sum();
    Ok(1.0 - mean * mean)
}

fn check(dist: &DickeDistribution, op: &SymmetricOperator) -> Result<()> {
    if dist.len() != op.dim() {
        return Err(Error::DimensionMismatch {
            expected: op.dim(),
            actual: dist.len(),
        });
    }
    Ok(())
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::qinfo::{build_jx, build_jy, build_jz, local_sigma_matrix_elements, Axis};
    use approx::assert_abs_diff_eq;
    use std::vec;

    #[test]
    fn jz_commutes_with_diagonal_states() {
        let d = DickeDistribution::new(4, vec![0.1, 0.2, 0.3, 0.15, 0.25]).unwrap();
        assert_eq!(wysi_symmetric(&d, &build_jz(4)).unwrap(), 0.0);
    }

    #[test]
    fn fully_excited_jx_is_quarter_n() {
        for n in [1u32, 2, 5, 50] {
            let i = wysi_symmetric(&DickeDistribution::fully_excited(n), &build_jx(n)).unwrap();
            assert_abs_diff_eq!(i, n as f64 / 4.0, epsilon = 1e-12);
        }
    }

    #[test]
    fn uniform_state_is_classical() {
        for n in [1u32, 2, 7, 50] {
            let u = DickeDistribution::uniform(n);
            assert!(wysi_symmetric(&u, &build_jx(n)).unwrap() <= 1e-12);
            assert!(wysi_symmetric(&u, &build_jy(n)).unwrap() <= 1e-12);
        }
    }

    #[test]
    fn local_z_values() {
        assert_eq!(
            wysi_sigma_z_local(&DickeDistribution::fully_excited(6)),
            0.0
        );
        assert_eq!(wysi_sigma_z_local(&DickeDistribution::ground(6)), 0.0);
        assert_abs_diff_eq!(
            wysi_sigma_z_local(&DickeDistribution::uniform(2)),
            1.0 / 3.0,
            epsilon = 1e-15
        );
    }

    #[test]
    fn local_z_via_generic_form() {
        // Dicke-basis form of the local skew information, both expressions
        let d = DickeDistribution::new(3, vec![0.4, 0.3, 0.2, 0.1]).unwrap();
        let sz = local_sigma_matrix_elements(3, Axis::Z).unwrap();
        let direct = 1.0
            - d.iter()
                .map(|(m, p)| p * (m / 1.5) * (m / 1.5))
                .sum::<f64>();
        assert_abs_diff_eq!(wysi_sigma_z_local(&d), direct, epsilon = 1e-14);
        // the local σz block commutes with ρ, so the generic WYSI vanishes there
        assert_eq!(wysi_symmetric(&d, &sz).unwrap(), 0.0);
    }

    #[test]
    fn local_forms_agree() {
        let d = DickeDistribution::new(3, vec![0.4, 0.3, 0.2, 0.1]).unwrap();
        let paulis = LocalPaulis::new(3).unwrap();
        let w = crate::qinfo::w_matrix(&d).unwrap();
        let iz = wysi_local(&d, &paulis, Axis::Z).unwrap();
        assert_abs_diff_eq!(iz, wysi_sigma_z_local(&d), epsilon = 1e-12);
        assert_abs_diff_eq!(iz, 1.0 - w.get(Axis::Z, Axis::Z), epsilon = 1e-12);
        let ix = wysi_local(&d, &paulis, Axis::X).unwrap();
        assert!(ix <= variance_local(&d, &paulis, Axis::X).unwrap());
        assert_eq!(variance_local(&d, &paulis, Axis::X).unwrap(), 1.0);
    }

    #[test]
    fn pure_state_equals_variance() {
        for n in [1u32, 3, 8] {
            let jx = build_jx(n);
            for k in 0..=n as usize {
                let d = DickeDistribution::spike(n, k);
                let i = wysi_symmetric(&d, &jx).unwrap();
                assert_abs_diff_eq!(i, variance(&d, &jx).unwrap(), epsilon = 1e-12);
            }
        }
    }

    #[test]
    fn dimension_checked() {
        let d = DickeDistribution::uniform(3);
        assert!(wysi_symmetric(&d, &build_jx(4)).is_err());
        assert!(variance(&d, &build_jx(2)).is_err());
    }
}
