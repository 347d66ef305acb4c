//! Third-order tensors and spatial-matrix operators.
//!
//! [`Tensor3`] stores its `d1 × d2 × d3` elements page-major with each page
//! laid out column-major, so element `(i, j, k)` lives at
//! `k·d1·d2 + j·d1 + i`. A page is therefore a contiguous column-major
//! matrix: the forward-dynamics outer term solves against whole pages, and the
//! scattered scalar writes of the second-order recursion stay within a few
//! pages at a time. Rows index the differentiated output, columns the first
//! derivative variable and pages the second.

use std::marker::PhantomData;
use std::ops::{Index, IndexMut};

use nalgebra::{DMatrix, DMatrixView, DMatrixViewMut, DVector, Dyn, Matrix6, OMatrix, U6, Vector6};

use crate::error::{shape_err, Result};
use crate::spatial::{body_coriolis_mat, cross_force_mat, cross_motion_mat, crossbar_star_mat};

#[derive(Clone, Debug, PartialEq)]
pub struct Tensor3 {
    d1: usize,
    d2: usize,
    d3: usize,
    data: Vec<f64>,
}

impl Tensor3 {
    pub fn zeros(d1: usize, d2: usize, d3: usize) -> Self {
        Self {
            d1,
            d2,
            d3,
            data: vec![0.0; d1 * d2 * d3],
        }
    }

    pub fn from_fn(d1: usize, d2: usize, d3: usize, mut f: impl FnMut(usize, usize, usize) -> f64) -> Self {
        let mut t = Self::zeros(d1, d2, d3);
        for k in 0..d3 {
            for j in 0..d2 {
                for i in 0..d1 {
                    t.data[(k * d2 + j) * d1 + i] = f(i, j, k);
                }
            }
        }
        t
    }

    /// Stacks equally-shaped matrices as pages.
    pub fn from_pages(pages: &[DMatrix<f64>]) -> Result<Self> {
        let (d1, d2) = pages.first().map_or((0, 0), |p| p.shape());
        let mut t = Self::zeros(d1, d2, pages.len());
        for (k, p) in pages.iter().enumerate() {
            if p.shape() != (d1, d2) {
                return Err(shape_err("from_pages", format!("{d1}x{d2}"), format!("{:?}", p.shape())));
            }
            t.page_mut(k).copy_from(p);
        }
        Ok(t)
    }

    #[inline]
    pub fn dims(&self) -> (usize, usize, usize) {
        (self.d1, self.d2, self.d3)
    }

    pub fn len(&self) -> usize {
        self.data.len()
    }

    pub fn is_empty(&self) -> bool {
        self.data.is_empty()
    }

    pub fn as_slice(&self) -> &[f64] {
        &self.data
    }

    pub fn as_mut_slice(&mut self) -> &mut [f64] {
        &mut self.data
    }

    #[inline]
    fn offset(&self, i: usize, j: usize, k: usize) -> usize {
        (k * self.d2 + j) * self.d1 + i
    }

    #[inline]
    pub fn get(&self, i: usize, j: usize, k: usize) -> Option<f64> {
        (i < self.d1 && j < self.d2 && k < self.d3).then(|| self.data[self.offset(i, j, k)])
    }

    /// Bounds-checked write.
    pub fn set(&mut self, i: usize, j: usize, k: usize, v: f64) -> Result<()> {
        if i >= self.d1 || j >= self.d2 || k >= self.d3 {
            return Err(shape_err(
                "Tensor3::set",
                format!("index below {:?}", self.dims()),
                format!("({i}, {j}, {k})"),
            ));
        }
        let o = self.offset(i, j, k);
        self.data[o] = v;
        Ok(())
    }

    /// Unchecked write for hot loops.
    ///
    /// # Safety
    /// `i < d1`, `j < d2` and `k < d3` must hold.
    #[inline(always)]
    pub unsafe fn set_unchecked(&mut self, i: usize, j: usize, k: usize, v: f64) {
        debug_assert!(i < self.d1 && j < self.d2 && k < self.d3);
        let o = self.offset(i, j, k);
        *self.data.get_unchecked_mut(o) = v;
    }

    /// Unchecked read for hot loops.
    ///
    /// # Safety
    /// `i < d1`, `j < d2` and `k < d3` must hold.
    #[inline(always)]
    pub unsafe fn get_unchecked(&self, i: usize, j: usize, k: usize) -> f64 {
        debug_assert!(i < self.d1 && j < self.d2 && k < self.d3);
        *self.data.get_unchecked(self.offset(i, j, k))
    }

    pub fn page(&self, k: usize) -> DMatrixView<'_, f64> {
        let s = self.d1 * self.d2;
        DMatrixView::from_slice(&self.data[k * s..(k + 1) * s], self.d1, self.d2)
    }

    pub fn page_mut(&mut self, k: usize) -> DMatrixViewMut<'_, f64> {
        let s = self.d1 * self.d2;
        DMatrixViewMut::from_slice(&mut self.data[k * s..(k + 1) * s], self.d1, self.d2)
    }

    pub fn fill(&mut self, v: f64) {
        self.data.fill(v);
    }

    /// `T̃`: `out(j, i, k) = in(i, j, k)`.
    pub fn transpose_t(&self) -> Self {
        let mut out = Self::zeros(self.d2, self.d1, self.d3);
        for k in 0..self.d3 {
            for j in 0..self.d2 {
                for i in 0..self.d1 {
                    let o = out.offset(j, i, k);
                    out.data[o] = self.data[self.offset(i, j, k)];
                }
            }
        }
        out
    }

    /// `R̃`: `out(i, k, j) = in(i, j, k)`.
    pub fn transpose_r(&self) -> Self {
        let mut out = Self::zeros(self.d1, self.d3, self.d2);
        for k in 0..self.d3 {
            for j in 0..self.d2 {
                let src = self.offset(0, j, k);
                let dst = out.offset(0, k, j);
                out.data[dst..dst + self.d1].copy_from_slice(&self.data[src..src + self.d1]);
            }
        }
        out
    }

    /// `R̃` followed by `T̃`: `out(k, i, j) = in(i, j, k)`.
    pub fn transpose_rt(&self) -> Self {
        let mut out = Self::zeros(self.d3, self.d1, self.d2);
        for k in 0..self.d3 {
            for j in 0..self.d2 {
                for i in 0..self.d1 {
                    let o = out.offset(k, i, j);
                    out.data[o] = self.data[self.offset(i, j, k)];
                }
            }
        }
        out
    }

    /// `Z_ijk = Σ_ℓ A_iℓk B_ℓj` with `ℓ` summed in ascending order.
    pub fn tensor_matmul(&self, b: &DMatrix<f64>) -> Result<Self> {
        if b.nrows() != self.d2 {
            return Err(shape_err("tensor_matmul", format!("{} rows", self.d2), b.nrows()));
        }
        let d1 = self.d1;
        let mut z = Self::zeros(d1, b.ncols(), self.d3);
        if d1 == 0 {
            return Ok(z);
        }
        for (zp, ap) in z.data.chunks_exact_mut(d1 * b.ncols()).zip(self.data.chunks_exact(d1 * self.d2)) {
            for (j, zc) in zp.chunks_exact_mut(d1).enumerate() {
                for (l, ac) in ap.chunks_exact(d1).enumerate() {
                    let blj = b[(l, j)];
                    for (zi, ai) in zc.iter_mut().zip(ac) {
                        *zi += ai * blj;
                    }
                }
            }
        }
        Ok(z)
    }

    /// `Y_ijk = Σ_ℓ B_iℓ A_ℓjk` with `ℓ` summed in ascending order.
    pub fn matmul_tensor(b: &DMatrix<f64>, a: &Self) -> Result<Self> {
        if b.ncols() != a.d1 {
            return Err(shape_err("matmul_tensor", format!("{} columns", a.d1), b.ncols()));
        }
        let n1 = b.nrows();
        let mut y = Self::zeros(n1, a.d2, a.d3);
        for k in 0..a.d3 {
            for j in 0..a.d2 {
                let dst = y.offset(0, j, k);
                let src = a.offset(0, j, k);
                for l in 0..a.d1 {
                    let alj = a.data[src + l];
                    for i in 0..n1 {
                        y.data[dst + i] += b[(i, l)] * alj;
                    }
                }
            }
        }
        Ok(y)
    }

    /// `Σ_k v_k A[:, :, k]`.
    pub fn contract_pages(&self, v: &DVector<f64>) -> Result<DMatrix<f64>> {
        if v.len() != self.d3 {
            return Err(shape_err("contract_pages", self.d3, v.len()));
        }
        let mut out = DMatrix::zeros(self.d1, self.d2);
        for k in 0..self.d3 {
            out += self.page(k) * v[k];
        }
        Ok(out)
    }

    /// Elementwise map.
    pub fn map(&self, f: impl Fn(f64) -> f64) -> Self {
        Self {
            d1: self.d1,
            d2: self.d2,
            d3: self.d3,
            data: self.data.iter().map(|&x| f(x)).collect(),
        }
    }

    /// Elementwise combination of two equally-shaped tensors.
    pub fn zip_with(&self, o: &Self, f: impl Fn(f64, f64) -> f64) -> Result<Self> {
        if self.dims() != o.dims() {
            return Err(shape_err("zip_with", format!("{:?}", self.dims()), format!("{:?}", o.dims())));
        }
        Ok(Self {
            d1: self.d1,
            d2: self.d2,
            d3: self.d3,
            data: self.data.iter().zip(&o.data).map(|(&a, &b)| f(a, b)).collect(),
        })
    }

    pub fn add(&self, o: &Self) -> Result<Self> {
        self.zip_with(o, |a, b| a + b)
    }

    pub fn sub(&self, o: &Self) -> Result<Self> {
        self.zip_with(o, |a, b| a - b)
    }

    pub fn scale(&self, s: f64) -> Self {
        self.map(|x| x * s)
    }

    /// Largest absolute element, 0 for an empty tensor.
    pub fn amax(&self) -> f64 {
        self.data.iter().fold(0.0, |m, x| m.max(x.abs()))
    }

    /// Largest absolute elementwise difference.
    pub fn max_abs_diff(&self, o: &Self) -> Result<f64> {
        Ok(self.sub(o)?.amax())
    }
}

impl Index<(usize, usize, usize)> for Tensor3 {
    type Output = f64;
    #[inline]
    fn index(&self, (i, j, k): (usize, usize, usize)) -> &f64 {
        assert!(i < self.d1 && j < self.d2 && k < self.d3, "tensor index out of bounds");
        &self.data[self.offset(i, j, k)]
    }
}

impl IndexMut<(usize, usize, usize)> for Tensor3 {
    #[inline]
    fn index_mut(&mut self, (i, j, k): (usize, usize, usize)) -> &mut f64 {
        assert!(i < self.d1 && j < self.d2 && k < self.d3, "tensor index out of bounds");
        let o = self.offset(i, j, k);
        &mut self.data[o]
    }
}

/// Marker for the column kind of a [`SpatialMatrix`].
pub trait Kind: Clone + Copy + std::fmt::Debug + PartialEq {}

#[derive(Clone, Copy, Debug, PartialEq)]
pub struct MotionKind;
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct ForceKind;
impl Kind for MotionKind {}
impl Kind for ForceKind {}

/// `6 × n` matrix whose columns are spatial vectors of one kind.
#[derive(Clone, Debug, PartialEq)]
pub struct SpatialMatrix<K: Kind> {
    cols: OMatrix<f64, U6, Dyn>,
    _kind: PhantomData<K>,
}

pub type MotionMatrix = SpatialMatrix<MotionKind>;
pub type ForceMatrix = SpatialMatrix<ForceKind>;

impl<K: Kind> SpatialMatrix<K> {
    pub fn new(cols: OMatrix<f64, U6, Dyn>) -> Self {
        Self {
            cols,
            _kind: PhantomData,
        }
    }

    pub fn zeros(n: usize) -> Self {
        Self::new(OMatrix::<f64, U6, Dyn>::zeros(n))
    }

    pub fn from_columns(cols: &[Vector6<f64>]) -> Self {
        let mut m = Self::zeros(cols.len());
        for (j, c) in cols.iter().enumerate() {
            m.cols.set_column(j, c);
        }
        m
    }

    /// Reinterprets a dense `6 × n` matrix.
    pub fn from_dmatrix(m: &DMatrix<f64>) -> Result<Self> {
        if m.nrows() != 6 {
            return Err(shape_err("SpatialMatrix::from_dmatrix", "6 rows", m.nrows()));
        }
        Ok(Self::new(OMatrix::<f64, U6, Dyn>::from_column_slice(m.as_slice())))
    }

    #[inline]
    pub fn ncols(&self) -> usize {
        self.cols.ncols()
    }

    #[inline]
    pub fn column(&self, j: usize) -> Vector6<f64> {
        self.cols.column(j).into_owned()
    }

    pub fn as_matrix(&self) -> &OMatrix<f64, U6, Dyn> {
        &self.cols
    }

    pub fn to_dmatrix(&self) -> DMatrix<f64> {
        DMatrix::from_column_slice(6, self.ncols(), self.cols.as_slice())
    }

    pub fn scale(&self, s: f64) -> Self {
        Self::new(&self.cols * s)
    }

    fn pagewise(&self, op: impl Fn(&Vector6<f64>) -> Matrix6<f64>) -> Tensor3 {
        let mut t = Tensor3::zeros(6, 6, self.ncols());
        for k in 0..self.ncols() {
            t.page_mut(k).copy_from(&op(&self.column(k)));
        }
        t
    }
}

/// `U ×̃`: page `k` is `(u_k ×)`.
pub fn cross_tilde(u: &MotionMatrix) -> Tensor3 {
    u.pagewise(cross_motion_mat)
}

/// `U ×̃*`: page `k` is `(u_k ×*)`.
pub fn cross_tilde_star(u: &MotionMatrix) -> Tensor3 {
    u.pagewise(cross_force_mat)
}

/// `F ×̄̃*`: page `k` is `(f_k ×̄*)`.
pub fn crossbar_tilde_star(f: &ForceMatrix) -> Tensor3 {
    f.pagewise(crossbar_star_mat)
}

/// `B̃(I, V)`: page `k` is the body-Coriolis matrix `B(I, v_k)`.
pub fn body_coriolis_tensor(inertia: &Matrix6<f64>, v: &MotionMatrix) -> Tensor3 {
    v.pagewise(|c| body_coriolis_mat(inertia, c))
}

/// `I V` as a force matrix.
pub fn inertia_times(inertia: &Matrix6<f64>, v: &MotionMatrix) -> ForceMatrix {
    ForceMatrix::new(inertia * v.as_matrix())
}

#[cfg(test)]
mod tests {
    use super::*;
    use rand::{Rng, SeedableRng};
    use rand_chacha::ChaCha8Rng;

    fn rt(rng: &mut ChaCha8Rng, d1: usize, d2: usize, d3: usize) -> Tensor3 {
        Tensor3::from_fn(d1, d2, d3, |_, _, _| rng.gen_range(-1.0..1.0))
    }

    fn rm(rng: &mut ChaCha8Rng, r: usize, c: usize) -> DMatrix<f64> {
        DMatrix::from_fn(r, c, |_, _| rng.gen_range(-1.0..1.0))
    }

    #[test]
    fn layout_is_page_major_column_major() {
        let t = Tensor3::from_fn(2, 3, 2, |i, j, k| (100 * k + 10 * j + i) as f64);
        assert_eq!(t.as_slice()[0..3], [0.0, 1.0, 10.0]);
        assert_eq!(t.as_slice()[6], 100.0);
        assert_eq!(t.page(1)[(1, 2)], 121.0);
    }

    #[test]
    fn transposes_permute_indices() {
        let mut rng = ChaCha8Rng::seed_from_u64(0);
        let a = rt(&mut rng, 3, 4, 2);
        let (t, r, rtt) = (a.transpose_t(), a.transpose_r(), a.transpose_rt());
        assert_eq!(t.dims(), (4, 3, 2));
        assert_eq!(r.dims(), (3, 2, 4));
        assert_eq!(rtt.dims(), (2, 3, 4));
        for i in 0..3 {
            for j in 0..4 {
                for k in 0..2 {
                    assert_eq!(t[(j, i, k)], a[(i, j, k)]);
                    assert_eq!(r[(i, k, j)], a[(i, j, k)]);
                    assert_eq!(rtt[(k, i, j)], a[(i, j, k)]);
                }
            }
        }
        assert_eq!(t.transpose_t(), a);
        assert_eq!(r.transpose_r(), a);
        assert_eq!(rtt.transpose_rt().transpose_rt(), a);
        assert_eq!(a.transpose_r().transpose_t(), rtt);
    }

    #[test]
    fn products_match_naive_loops_exactly() {
        let mut rng = ChaCha8Rng::seed_from_u64(1);
        let a = rt(&mut rng, 6, 6, 3);
        let b = rm(&mut rng, 6, 2);
        let z = a.tensor_matmul(&b).unwrap();
        for i in 0..6 {
            for j in 0..2 {
                for k in 0..3 {
                    let mut s = 0.0;
                    for l in 0..6 {
                        s += a[(i, l, k)] * b[(l, j)];
                    }
                    assert_eq!(z[(i, j, k)], s);
                }
            }
        }
        let bm = rm(&mut rng, 4, 6);
        let a2 = rt(&mut rng, 6, 3, 2);
        let y = Tensor3::matmul_tensor(&bm, &a2).unwrap();
        for i in 0..4 {
            for j in 0..3 {
                for k in 0..2 {
                    let mut s = 0.0;
                    for l in 0..6 {
                        s += bm[(i, l)] * a2[(l, j, k)];
                    }
                    assert_eq!(y[(i, j, k)], s);
                }
            }
        }
    }

    #[test]
    fn identity_and_zero_products() {
        let mut rng = ChaCha8Rng::seed_from_u64(2);
        let a = rt(&mut rng, 3, 4, 2);
        assert_eq!(a.tensor_matmul(&DMatrix::identity(4, 4)).unwrap(), a);
        assert_eq!(Tensor3::matmul_tensor(&DMatrix::identity(3, 3), &a).unwrap(), a);
        assert_eq!(
            Tensor3::matmul_tensor(&DMatrix::zeros(5, 3), &a).unwrap(),
            Tensor3::zeros(5, 4, 2)
        );
        let one = rt(&mut rng, 3, 4, 1);
        let b = rm(&mut rng, 4, 2);
        let z = one.tensor_matmul(&b).unwrap();
        assert!((z.page(0) - one.page(0) * &b).amax() < 1e-15);
    }

    #[test]
    fn shape_errors() {
        let a = Tensor3::zeros(2, 3, 4);
        assert!(a.tensor_matmul(&DMatrix::zeros(2, 2)).is_err());
        assert!(Tensor3::matmul_tensor(&DMatrix::zeros(2, 3), &a).is_err());
        let mut a = a;
        assert!(a.set(2, 0, 0, 1.0).is_err());
        assert!(a.set(1, 2, 3, 1.0).is_ok());
        assert_eq!(a.get(1, 2, 3), Some(1.0));
        assert_eq!(a.get(0, 3, 0), None);
    }

    #[test]
    fn empty_spatial_matrices_give_empty_tensors() {
        let u = MotionMatrix::zeros(0);
        assert_eq!(cross_tilde(&u).dims(), (6, 6, 0));
        assert_eq!(cross_tilde_star(&u).dims(), (6, 6, 0));
        assert_eq!(crossbar_tilde_star(&ForceMatrix::zeros(0)).dims(), (6, 6, 0));
        assert!(cross_tilde(&u).is_empty());
    }

    #[test]
    fn pagewise_operators() {
        let mut rng = ChaCha8Rng::seed_from_u64(3);
        let cols: Vec<Vector6<f64>> =
            (0..3).map(|_| Vector6::from_fn(|_, _| rng.gen_range(-1.0..1.0))).collect();
        let u = MotionMatrix::from_columns(&cols);
        let t = cross_tilde(&u);
        let ts = cross_tilde_star(&u);
        let f = ForceMatrix::from_columns(&cols);
        let tb = crossbar_tilde_star(&f);
        for (k, c) in cols.iter().enumerate() {
            assert_eq!(t.page(k), cross_motion_mat(c));
            assert_eq!(ts.page(k), cross_force_mat(c));
            assert_eq!(tb.page(k), crossbar_star_mat(c));
        }
        assert_eq!(body_coriolis_tensor(&Matrix6::identity(), &MotionMatrix::zeros(2)), Tensor3::zeros(6, 6, 2));
    }
}
