use super::{FamilyKind, MeasurementFamily};
use crate::error::{Error, Result};
use crate::linalg::{self, c, CMatrix, CVector};

/// Qubit tetrahedron Bloch vectors.
const TETRAHEDRON: [[f64; 3]; 4] = [
    [0.0, 0.0, 1.0],
    [0.942_809_041_582_063_4, 0.0, -1.0 / 3.0],
    [-0.471_404_520_791_031_7, 0.816_496_580_927_726, -1.0 / 3.0],
    [-0.471_404_520_791_031_7, -0.816_496_580_927_726, -1.0 / 3.0],
];

/// Qutrit fiducial `(0, 1, −1)/√2`; its Weyl–Heisenberg orbit is a SIC.
const QUTRIT_FIDUCIAL: [[f64; 2]; 3] =
    [[0.0, 0.0], [std::f64::consts::FRAC_1_SQRT_2, 0.0], [-std::f64::consts::FRAC_1_SQRT_2, 0.0]];

fn bloch_projector(n: &[f64; 3]) -> CMatrix {
    CMatrix::from_row_slice(
        2,
        2,
        &[c(0.5 * (1.0 + n[2]), 0.0), c(0.5 * n[0], -0.5 * n[1]), c(0.5 * n[0], 0.5 * n[1]), c(0.5 * (1.0 - n[2]), 0.0)],
    )
}

/// `X^j Z^k |ψ⟩` with `X|n⟩ = |n+1⟩`, `Z|n⟩ = ω^n |n⟩`.
fn displaced(psi: &CVector, j: usize, k: usize) -> CVector {
    let d = psi.len();
    let omega = 2.0 * std::f64::consts::PI / d as f64;
    CVector::from_fn(d, |row, _| {
        let n = (row + d - j) % d;
        psi[n] * c(0.0, omega * (k * n) as f64).exp()
    })
}

/// A SIC-POVM in `d ∈ {2, 3}` as a single setting of `d²` subnormalized projectors
/// `P_k = |ψ_k⟩⟨ψ_k| / d` (so `γ = 1`, `a = 1/d`, `b = 1`).
pub fn build_sic(d: usize) -> Result<MeasurementFamily> {
    let projectors: Vec<CMatrix> = match d {
        2 => TETRAHEDRON.iter().map(bloch_projector).collect(),
        3 => {
            let psi = CVector::from_iterator(3, QUTRIT_FIDUCIAL.iter().map(|z| c(z[0], z[1])));
            (0..3)
                .flat_map(|j| (0..3).map(move |k| (j, k)))
                .map(|(j, k)| linalg::projector(&displaced(&psi, j, k)))
                .collect()
        }
        _ => {
            return Err(Error::UnsupportedDimension { d, reason: "SIC fiducials are shipped for d = 2 and d = 3".into() })
        }
    };
    let scale = 1.0 / d as f64;
    let settings = vec![projectors.into_iter().map(|p| p.scale(scale)).collect()];
    MeasurementFamily::new(d, FamilyKind::Sic, vec![1.0], settings)
}
