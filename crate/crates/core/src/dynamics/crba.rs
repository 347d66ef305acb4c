use nalgebra::DMatrix;

use crate::dynamics::kinematics::KinematicsCache;
use crate::error::Result;
use crate::model::{Configuration, Model};

/// Composite-rigid-body mass matrix, `M_ji = Sⱼᵀ 𝓘ᵢᶜ Sᵢ` for `j ⪯ i`.
pub fn crba(model: &Model, q: &Configuration<f64>) -> Result<DMatrix<f64>> {
    let cache = KinematicsCache::from_configuration(model, q)?;
    Ok(mass_matrix_from_cache(model, &cache))
}

/// Mass matrix from the configuration part of a cache. The upper triangle
/// is a copy of the lower one, so the result is exactly symmetric.
pub fn mass_matrix_from_cache(model: &Model, cache: &KinematicsCache<f64>) -> DMatrix<f64> {
    let n = model.nv();
    let mut m = DMatrix::zeros(n, n);
    for i in 0..model.num_bodies() {
        for gi in model.dof_range(i) {
            let f = cache.ic[i] * cache.s[gi];
            for j in model.support(i) {
                for gj in model.dof_range(j) {
                    let val = cache.s[gj].dot(&f);
                    m[(gj, gi)] = val;
                    m[(gi, gj)] = val;
                }
            }
        }
    }
    m
}
