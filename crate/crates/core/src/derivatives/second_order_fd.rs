//! Second-order partial derivatives of forward dynamics.
//!
//! Differentiating `ID(q, q̇, FD(q, q̇, τ)) = τ` twice gives, for a column
//! variable `u` and page variable `w`,
//!
//! ```text
//! ∂²FD/∂u∂w = −M⁻¹ [ ∂²ID/∂u∂w + [w = q] (∂M/∂q)·∂FD/∂u + [u = q] ((∂M/∂q)·∂FD/∂w)^R̃ ]
//! ```
//!
//! The bracket is the *inner* term and the pagewise `−M⁻¹` product is the
//! *outer* term. Each has two interchangeable strategies.

use nalgebra::{DMatrix, DVector};

use super::first_order::{fd_fo_context, FdFirstOrder, Idfoza};
use super::second_order_id::{idsva_so_into, stack_blocks, IdSecondOrder, IdsvaSoWorkspace};
use crate::dynamics::{aza, MassFactor};
use crate::error::{shape_err, Result};
use crate::model::{Configuration, Model};
use crate::tensor::Tensor3;

/// How `(∂M/∂q)·∂FD/∂u` is formed.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum InnerStrategy {
    /// Dense tensor-matrix product with the explicit `∂M/∂q`.
    Dtm,
    /// One zero-velocity first-order pass per column of `∂FD/∂u`.
    Idfoza,
}

/// How the pagewise `−M⁻¹` product is applied.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum OuterStrategy {
    /// Factor `M` once and solve all pages together.
    Dtm,
    /// One zero-velocity articulated-body pass per column.
    Aza,
}

/// Strategy selection. `None` picks by model size: the inner term switches
/// to IDFOZA at `inner_threshold` bodies and the outer term to AZA at
/// `outer_threshold` bodies.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct StrategyConfig {
    pub inner: Option<InnerStrategy>,
    pub outer: Option<OuterStrategy>,
    pub inner_threshold: usize,
    pub outer_threshold: usize,
}

impl Default for StrategyConfig {
    fn default() -> Self {
        Self {
            inner: None,
            outer: None,
            inner_threshold: 40,
            outer_threshold: usize::MAX,
        }
    }
}

impl StrategyConfig {
    pub fn fixed(inner: InnerStrategy, outer: OuterStrategy) -> Self {
        Self {
            inner: Some(inner),
            outer: Some(outer),
            ..Self::default()
        }
    }

    pub fn resolve(&self, num_bodies: usize) -> (InnerStrategy, OuterStrategy) {
        let inner = self.inner.unwrap_or(if num_bodies < self.inner_threshold {
            InnerStrategy::Dtm
        } else {
            InnerStrategy::Idfoza
        });
        let outer = self.outer.unwrap_or(if num_bodies < self.outer_threshold {
            OuterStrategy::Dtm
        } else {
            OuterStrategy::Aza
        });
        (inner, outer)
    }
}

/// Second-order FD derivatives at `q̈₀ = FD(q, q̇, τ)`; all `n × n × n`.
#[derive(Clone, Debug, PartialEq)]
pub struct FdSecondOrder {
    pub d2fd_dq2: Tensor3,
    pub d2fd_dqd2: Tensor3,
    /// Columns `q̇`, pages `q`.
    pub d2fd_dq_dqd: Tensor3,
    /// Columns `q`, pages `q̇`; the `R̃` transpose of `d2fd_dq_dqd`.
    pub d2fd_dqd_dq: Tensor3,
    /// `∂M⁻¹/∂q`: columns `τ`, pages `q`.
    pub dminv_dq: Tensor3,
}

impl FdSecondOrder {
    pub fn nv(&self) -> usize {
        self.d2fd_dq2.dims().0
    }

    /// Full Hessian over `x = (q, q̇, τ)` as an `n × 3n × 3n` tensor.
    pub fn stacked(&self) -> Tensor3 {
        stack_blocks(self.nv(), |cb, pb| match (cb, pb) {
            (0, 0) => Some((&self.d2fd_dq2, false)),
            (1, 1) => Some((&self.d2fd_dqd2, false)),
            (1, 0) => Some((&self.d2fd_dq_dqd, false)),
            (0, 1) => Some((&self.d2fd_dqd_dq, false)),
            (2, 0) => Some((&self.dminv_dq, false)),
            (0, 2) => Some((&self.dminv_dq, true)),
            _ => None,
        })
    }
}

/// Variable pair for [`inner_term`]: column variable first, page second.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Pair {
    QQ,
    QdQd,
    /// Columns `q̇`, pages `q`.
    QdQ,
    /// Columns `q`, pages `q̇`.
    QQd,
}

/// Source of `(∂M/∂q)·X` products for the inner term.
pub enum DmProduct<'a> {
    Dense(&'a Tensor3),
    Idfoza(Box<Idfoza<'a>>),
}

impl DmProduct<'_> {
    /// `Z[i, u, k] = Σⱼ ∂M_ij/∂q_k X[j, u]`.
    pub fn apply(&mut self, x: &DMatrix<f64>) -> Result<Tensor3> {
        match self {
            DmProduct::Dense(dm) => dm.tensor_matmul(x),
            DmProduct::Idfoza(z) => {
                let n = x.nrows();
                let mut out = Tensor3::zeros(n, x.ncols(), n);
                let mut page = DMatrix::zeros(n, n);
                for u in 0..x.ncols() {
                    z.apply_into(x.column(u).as_slice(), &mut page);
                    for k in 0..n {
                        for i in 0..n {
                            out[(i, u, k)] = page[(i, k)];
                        }
                    }
                }
                Ok(out)
            }
        }
    }
}

/// Inner term for one variable pair.
pub fn inner_term(pair: Pair, id: &IdSecondOrder, fo: &FdFirstOrder, dm: &mut DmProduct<'_>) -> Result<Tensor3> {
    match pair {
        Pair::QQ => {
            let z = dm.apply(&fo.dfd_dq)?;
            id.d2tau_dq2.add(&z)?.add(&z.transpose_r())
        }
        Pair::QdQd => Ok(id.d2tau_dqd2.clone()),
        Pair::QdQ => id.d2tau_dq_dqd.add(&dm.apply(&fo.dfd_dqd)?),
        Pair::QQd => Ok(inner_term(Pair::QdQ, id, fo, dm)?.transpose_r()),
    }
}

/// Applies `−M⁻¹` to every page of `inner`.
pub fn outer_term(
    inner: &Tensor3,
    model: &Model,
    q: &Configuration<f64>,
    factor: &MassFactor,
    strategy: OuterStrategy,
) -> Result<Tensor3> {
    let (n, d2, d3) = inner.dims();
    if n != model.nv() {
        return Err(shape_err("outer_term", format!("{} rows", model.nv()), format!("{n} rows")));
    }
    match strategy {
        OuterStrategy::Dtm => {
            // Column-major pages are contiguous, so the tensor is one n × (d2·d3) matrix.
            let mut m = DMatrix::from_column_slice(n, d2 * d3, inner.as_slice());
            factor.solve_in_place(&mut m);
            let mut out = Tensor3::zeros(n, d2, d3);
            for (o, v) in out.as_mut_slice().iter_mut().zip(m.iter()) {
                *o = -v;
            }
            Ok(out)
        }
        OuterStrategy::Aza => {
            let mut out = Tensor3::zeros(n, d2, d3);
            let cols = inner.as_slice().chunks_exact(n.max(1));
            for (c, col) in cols.enumerate().take(d2 * d3) {
                let x = aza(model, q, &DVector::from_column_slice(col))?;
                out.as_mut_slice()[c * n..(c + 1) * n]
                    .iter_mut()
                    .zip(x.iter())
                    .for_each(|(o, v)| *o = -v);
            }
            Ok(out)
        }
    }
}

/// `∂M⁻¹/∂q_k = −M⁻¹ (∂M/∂q_k) M⁻¹` for every page `k`.
pub fn dminv_dq(minv: &DMatrix<f64>, dm_dq: &Tensor3) -> Result<Tensor3> {
    let (n, d2, d3) = dm_dq.dims();
    if minv.shape() != (n, n) || d2 != n {
        return Err(shape_err("dminv_dq", format!("{n}x{n}"), format!("{:?}", minv.shape())));
    }
    let mut out = Tensor3::zeros(n, n, d3);
    for k in 0..d3 {
        let page = -(minv * dm_dq.page(k) * minv);
        out.page_mut(k).copy_from(&page);
    }
    Ok(out)
}

/// Second-order FD derivatives, together with the first-order results
/// computed on the way.
pub fn fdsva_so(
    model: &Model,
    q: &Configuration<f64>,
    qd: &DVector<f64>,
    tau: &DVector<f64>,
    cfg: &StrategyConfig,
) -> Result<(FdSecondOrder, FdFirstOrder)> {
    let ctx = fd_fo_context(model, q, qd, tau)?;
    let mut ws = IdsvaSoWorkspace::new(model);
    idsva_so_into(model, &ctx.cache, &mut ws)?;
    let id = ws.into_result();
    let (inner_s, outer_s) = cfg.resolve(model.num_bodies());
    let mut dm = match inner_s {
        InnerStrategy::Dtm => DmProduct::Dense(&id.dm_dq),
        InnerStrategy::Idfoza => DmProduct::Idfoza(Box::new(Idfoza::from_cache(model, ctx.cache.clone()))),
    };
    let outer = |t: &Tensor3| outer_term(t, model, q, &ctx.factor, outer_s);
    let qq = outer(&inner_term(Pair::QQ, &id, &ctx.fo, &mut dm)?)?;
    let vv = outer(&inner_term(Pair::QdQd, &id, &ctx.fo, &mut dm)?)?;
    let mixed = outer(&inner_term(Pair::QdQ, &id, &ctx.fo, &mut dm)?)?;
    let dminv = dminv_dq(&ctx.fo.dfd_dtau, &id.dm_dq)?;
    Ok((
        FdSecondOrder {
            d2fd_dq2: qq,
            d2fd_dqd2: vv,
            d2fd_dqd_dq: mixed.transpose_r(),
            d2fd_dq_dqd: mixed,
            dminv_dq: dminv,
        },
        ctx.fo,
    ))
}
