//! Numeric tolerances shared by every module.

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct ToleranceProfile {
    /// Relative residual for scalar ring laws.
    pub ring: f64,
    /// Exactness of biproduct-induced addition and dagger distribution.
    pub exact: f64,
    /// Orthonormality of Gram–Schmidt output and subobject isometries.
    pub orthonormal: f64,
    /// Relative drop threshold for dependent columns.
    pub gs_drop: f64,
    /// Composite identities such as `A·nullspace(A) = 0` and `f·e = g·e`.
    pub residual: f64,
    /// Reconstruction of sums, factorizations and square roots.
    pub reconstruct: f64,
    /// Unitarity of emitted factors.
    pub unitary: f64,
    /// Equality of subobjects as projections.
    pub lattice_eq: f64,
    /// Negative eigenvalues above `-psd` are clamped to zero.
    pub psd: f64,
    /// Validation of structure operators.
    pub structure: f64,
    /// Commutation `RS = SR` inside the complex decomposition.
    pub commute: f64,
}

impl Default for ToleranceProfile {
    fn default() -> Self {
        ToleranceProfile {
            ring: 1e-12,
            exact: 1e-14,
            orthonormal: 1e-12,
            gs_drop: 1e-10,
            residual: 1e-10,
            reconstruct: 1e-8,
            unitary: 1e-10,
            lattice_eq: 1e-8,
            psd: 1e-10,
            structure: 1e-10,
            commute: 1e-9,
        }
    }
}

impl ToleranceProfile {
    /// Applies `name=value` overrides, comma separated.
    pub fn with_overrides(mut self, spec: &str) -> Result<Self> {
        for item in spec.split(',').map(str::trim).filter(|s| !s.is_empty()) {
            let (name, value) = item
                .split_once('=')
                .ok_or_else(|| Error::Config(format!("tolerance override `{item}` is not name=value")))?;
            let value: f64 = value
                .trim()
                .parse()
                .map_err(|_| Error::Config(format!("tolerance `{name}` has non-numeric value")))?;
            if !(value.is_finite() && value > 0.0) {
                return Err(Error::Config(format!("tolerance `{name}` must be positive")));
            }
            let slot = match name.trim() {
                "ring" => &mut self.ring,
                "exact" => &mut self.exact,
                "orthonormal" => &mut self.orthonormal,
                "gs_drop" => &mut self.gs_drop,
                "residual" => &mut self.residual,
                "reconstruct" => &mut self.reconstruct,
                "unitary" => &mut self.unitary,
                "lattice_eq" => &mut self.lattice_eq,
                "psd" => &mut self.psd,
                "structure" => &mut self.structure,
                "commute" => &mut self.commute,
                other => return Err(Error::Config(format!("unknown tolerance `{other}`"))),
            };
            *slot = value;
        }
        Ok(self)
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn overrides() {
        let t = ToleranceProfile::default().with_overrides("lattice_eq=1e-6, unitary=1e-9").unwrap();
        assert_eq!(t.lattice_eq, 1e-6);
        assert_eq!(t.unitary, 1e-9);
        assert!(ToleranceProfile::default().with_overrides("bogus=1").is_err());
        assert!(ToleranceProfile::default().with_overrides("ring=-1").is_err());
        assert!(ToleranceProfile::default().with_overrides("ring").is_err());
    }
}
