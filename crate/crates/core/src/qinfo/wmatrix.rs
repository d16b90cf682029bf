use crate::qinfo::{Axis, LocalPaulis};
use crate::{DickeDistribution, Error, Result};

/// Off-diagonal magnitude below which `W` is treated as diagonal.
const DIAGONAL_TOLERANCE: f64 = 1e-12;
/// Diagonal entries this close count as tied; ties go to `z`, then `x`.
const TIE: f64 = 1e-12;

/// `W_αβ = Tr(√ρ σ_α √ρ σ_β)` for one emitter, `α, β ∈ {x, y, z}`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct WMatrix {
    entries: [[f64; 3]; 3],
}

impl WMatrix {
    /// Symmetrizes `entries`.
    pub fn from_entries(entries: [[f64; 3]; 3]) -> Self {
        let mut e = entries;
        for a in 0..3 {
            for b in a + 1..3 {
                let s = 0.5 * (e[a][b] + e[b][a]);
                e[a][b] = s;
                e[b][a] = s;
            }
        }
        Self { entries: e }
    }

    pub fn compute(dist: &DickeDistribution, paulis: &LocalPaulis) -> Result<Self> {
        if dist.two_j() != paulis.two_j() {
            return Err(Error::DimensionMismatch {
                expected: paulis.two_j() as usize + 1,
                actual: dist.len(),
            });
        }
        let sq: alloc::vec::Vec<f64> = dist.populations().iter().map(|&p| libm::sqrt(p)).collect();
        let mut e = [[0.0; 3]; 3];
        for alpha in Axis::ALL {
            for beta in Axis::ALL {
                if beta.index() < alpha.index() {
                    continue;
                }
                let (sa, sb) = (paulis.get(alpha), paulis.get(beta));
                let mut acc = 0.0;
                for a in 0..sa.dim() {
                    if sq[a] == 0.0 {
                        continue;
                    }
                    for b in sa.band(a) {
                        acc += sq[a] * sq[b] * (sa.get(a, b) * sb.get(b, a)).re;
                    }
                }
                e[alpha.index()][beta.index()] = acc;
                e[beta.index()][alpha.index()] = acc;
            }
        }
        Ok(Self::from_entries(e))
    }

    pub fn entries(&self) -> &[[f64; 3]; 3] {
        &self.entries
    }

    pub fn get(&self, a: Axis, b: Axis) -> f64 {
        self.entries[a.index()][b.index()]
    }

    pub fn xx(&self) -> f64 {
        self.get(Axis::X, Axis::X)
    }

    pub fn yy(&self) -> f64 {
        self.get(Axis::Y, Axis::Y)
    }

    pub fn zz(&self) -> f64 {
        self.get(Axis::Z, Axis::Z)
    }

    pub fn max_off_diagonal(&self) -> f64 {
        let e = &self.entries;
        e[0][1].abs().max(e[0][2].abs()).max(e[1][2].abs())
    }

    /// Eigenvalues in descending order.
    pub fn eigenvalues(&self) -> [f64; 3] {
        symmetric_eigenvalues(&self.entries)
    }

    pub fn lambda_max(&self) -> f64 {
        self.eigenvalues()[0]
    }

    /// Unit eigenvector of the largest eigenvalue. Inside a degenerate top
    /// eigenspace the coordinate axis closest to it is chosen, preferring
    /// `z`, then `x`, then `y`.
    pub fn dominant_direction(&self) -> [f64; 3] {
        let lambda = self.lambda_max();
        let mut rows = self.entries;
        for (i, row) in rows.iter_mut().enumerate() {
            row[i] -= lambda;
        }
        let scale = self
            .entries
            .iter()
            .flatten()
            .fold(1.0f64, |m, v| m.max(v.abs()));
        // rank 2: the null vector is the largest cross product of two rows
        let pairs = [(0, 1), (0, 2), (1, 2)];
        let best = pairs
            .iter()
            .map(|&(a, b)| cross(&rows[a], &rows[b]))
            .max_by(|u, v| norm(u).total_cmp(&norm(v)))
            .unwrap();
        if norm(&best) > 1e-9 * scale * scale {
            return normalized(&best);
        }
        // rank ≤ 1: project the preferred axes onto the complement of the row space
        let row = rows
            .iter()
            .copied()
            .max_by(|u, v| norm(u).total_cmp(&norm(v)))
            .unwrap();
        let rn = norm(&row);
        for axis in [Axis::Z, Axis::X, Axis::Y] {
            let mut e = [0.0; 3];
            e[axis.index()] = 1.0;
            if rn > 1e-9 * scale {
                let r = normalized(&row);
                let d = dot(&e, &r);
                for i in 0..3 {
                    e[i] -= d * r[i];
                }
            }
            if norm(&e) > 0.5 {
                return normalized(&e);
            }
        }
        unreachable!("a unit axis keeps norm > 0.5 after removing one direction for some axis")
    }

    /// Local Pauli axis whose observable minimizes the skew information.
    ///
    /// For a diagonal `W` this is the axis with the largest diagonal entry,
    /// ties within `1e-12` resolved to `z`, then `x`.
    pub fn minimizer(&self) -> Axis {
        let priority = [Axis::Z, Axis::X, Axis::Y];
        if self.max_off_diagonal() <= DIAGONAL_TOLERANCE {
            let top = self.xx().max(self.yy()).max(self.zz());
            return priority
                .into_iter()
                .find(|&a| self.get(a, a) >= top - TIE)
                .unwrap_or(Axis::Z);
        }
        let v = self.dominant_direction();
        let top = v.iter().fold(0.0f64, |m, c| m.max(c.abs()));
        priority
            .into_iter()
            .find(|a| v[a.index()].abs() >= top - TIE)
            .unwrap_or(Axis::Z)
    }

    /// `1 − λ_max`, clamped to `[0, 1]`.
    pub fn lqu(&self) -> f64 {
        (1.0 - self.lambda_max()).clamp(0.0, 1.0)
    }
}

pub fn w_matrix(dist: &DickeDistribution) -> Result<WMatrix> {
    WMatrix::compute(dist, &LocalPaulis::new(dist.two_j())?)
}

/// Local quantum uncertainty of one emitter and the local axis attaining it.
pub fn lqu(dist: &DickeDistribution) -> Result<(f64, Axis)> {
    let w = w_matrix(dist)?;
    Ok((w.lqu(), w.minimizer()))
}

/// Closed-form eigenvalues of a real symmetric 3×3 matrix, descending.
pub fn symmetric_eigenvalues(a: &[[f64; 3]; 3]) -> [f64; 3] {
    let p1 = a[0][1] * a[0][1] + a[0][2] * a[0][2] + a[1][2] * a[1][2];
    if p1 == 0.0 {
        let mut d = [a[0][0], a[1][1], a[2][2]];
        d.sort_by(|x, y| y.total_cmp(x));
        return d;
    }
    let q = (a[0][0] + a[1][1] + a[2][2]) / 3.0;
    let (d0, d1, d2) = (a[0][0] - q, a[1][1] - q, a[2][2] - q);
    let p2 = d0 * d0 + d1 * d1 + d2 * d2 + 2.0 * p1;
    let p = libm::sqrt(p2 / 6.0);
    let mut b = *a;
    for (i, row) in b.iter_mut().enumerate() {
        row[i] -= q;
        for v in row.iter_mut() {
            *v /= p;
        }
    }
    let det = b[0][0] * (b[1][1] * b[2][2] - b[1][2] * b[2][1])
        - b[0][1] * (b[1][0] * b[2][2] - b[1][2] * b[2][0])
        + b[0][2] * (b[1][0] * b[2][1] - b[1][1] * b[2][0]);
    let r = (det / 2.0).clamp(-1.0, 1.0);
    let phi = libm::acos(r) / 3.0;
    let e1 = q + 2.0 * p * libm::cos(phi);
    let e3 = q + 2.0 * p * libm::cos(phi + 2.0 * core::f64::consts::PI / 3.0);
    let e2 = 3.0 * q - e1 - e3;
    [e1, e2, e3]
}

fn cross(u: &[f64; 3], v: &[f64; 3]) -> [f64; 3] {
    [
        u[1] * v[2] - u[2] * v[1],
        u[2] * v[0] - u[0] * v[2],
        u[0] * v[1] - u[1] * v[0],
    ]
}

fn dot(u: &[f64; 3], v: &[f64; 3]) -> f64 {
    u[0] * v[0] + u[1] * v[1] + u[2] * v[2]
}

fn norm(u: &[f64; 3]) -> f64 {
    libm::sqrt(dot(u, u))
}

fn normalized(u: &[f64; 3]) -> [f64; 3] {
    let n = norm(u);
    [u[0] / n, u[1] / n, u[2] / n]
}
