//! Jordan–Chevalley decomposition of finite-rank operators and the
//! window-level Chevalley decomposition `p = p_nil ⋉ p_red`, `p_red = l ⋉ t`.

use crate::error::{Error, Result};
use crate::index::Window;
use crate::linear::{DualSystem, FinOp};
use crate::matrix::Mat;
use crate::parabolic::{faithful_window, stabilizer_truncation, ParabolicDesc};
use crate::poly::Poly;
use crate::scalar::{Field, Q, Qi, Ring, Scalar};
use crate::space::MatSpace;

/// `p` with `p(m) = m_ss` and `p(0) = 0`, by Newton iteration on the
/// squarefree part of the characteristic polynomial of `m ⊕ 0`.
pub fn jordan_poly<F: Field>(m: &Mat<F>) -> Poly<F> {
    let chi = Poly::charpoly(m).mul(&Poly::x());
    let f = chi.squarefree_part();
    let df = f.derivative();
    let mut x = Poly::x();
    loop {
        let fx = f.compose_mod(&x, &chi);
        if fx.is_zero() {
            return x;
        }
        let d = df.compose_mod(&x, &chi).inv_mod(&chi).expect("f' is a unit modulo the characteristic polynomial");
        x = x.sub(&fx.mul(&d)).rem(&chi);
    }
}

/// `(m_ss, m_nil)`.
pub fn jordan_matrix<F: Field>(m: &Mat<F>) -> (Mat<F>, Mat<F>) {
    let ss = jordan_poly(m).eval_mat(m);
    let nil = m.sub(&ss);
    (ss, nil)
}

fn to_scalar<F: Field>(x: &F) -> Scalar {
    let mut c = x.coords();
    c.resize(4, Q::zero());
    Scalar::from_coords(&c)
}

/// Matrix of `op` on the span of `w`: column `x` is the image of `v_x`.
fn op_matrix<F: Field>(sys: &DualSystem, op: &FinOp, w: &Window, conv: impl Fn(&Scalar) -> Option<F>) -> Result<Mat<F>> {
    let ix = w.indices();
    let n = ix.len();
    let mut m: Mat<F> = Mat::zeros(n, n);
    for ((i, j), c) in op.coeffs() {
        let r = w.position(i).ok_or_else(|| Error::OutsideWindow(format!("{i} vs {w}")))?;
        let c = conv(c).ok_or_else(|| Error::RingMismatch(format!("{c}")))?;
        for (x, v) in ix.iter().enumerate() {
            let g = sys.pair_basis(v, j);
            if !g.is_zero() {
                let cur = m.get(r, x).clone();
                m.set(r, x, cur.add(&c.mul(&F::from_q(&g))));
            }
        }
    }
    Ok(m)
}

fn decompose_in<F: Field>(sys: &DualSystem, op: &FinOp, conv: impl Fn(&Scalar) -> Option<F>) -> Result<(FinOp, FinOp)> {
    let support = Window::from_indices(sys.domain, op.support())?;
    let w = faithful_window(sys, &support)?;
    let m = op_matrix(sys, op, &w, conv)?;
    let p = jordan_poly(&m);
    let mut ss = sys.zero_op();
    let mut power = op.clone();
    for (k, a) in p.coeffs().iter().enumerate().skip(1) {
        if k > 1 {
            power = sys.compose(&power, op);
        }
        if !a.is_zero() {
            ss = ss.add(&power.scale(&to_scalar(a).lift(sys.ring)?));
        }
    }
    let nil = op.sub(&ss);
    Ok((ss, nil))
}

/// `op = ss + nil` with `ss` semisimple, `nil` nilpotent, both polynomials in `op`.
pub fn jordan_decompose(sys: &DualSystem, op: &FinOp) -> Result<(FinOp, FinOp)> {
    if op.is_zero() {
        return Ok((sys.zero_op(), sys.zero_op()));
    }
    match sys.ring {
        Ring::Rational => decompose_in::<Q>(sys, op, Scalar::to_q),
        Ring::Gaussian => decompose_in::<Qi>(sys, op, Scalar::to_qi),
        Ring::Quaternion => Err(Error::RingMismatch("Jordan decomposition needs a commutative field".into())),
    }
}

// ------------------------------------------------------------ Chevalley

/// Over `Qi` the spaces are real spans, so `p` is a real Lie algebra.
#[derive(Clone, Debug)]
pub struct ChevalleyData<F: Field = Q> {
    pub window: Window,
    pub p: MatSpace<F>,
    pub radical: MatSpace<F>,
    pub p_nil: MatSpace<F>,
    pub p_red: MatSpace<F>,
    pub l: MatSpace<F>,
    pub t: MatSpace<F>,
}

/// Real part of `tr(xy)`: the trace form of the underlying real representation, up to scale.
pub(crate) fn real_trace<F: Field>(x: &Mat<F>, y: &Mat<F>) -> Q {
    x.mul(y).trace().coords().swap_remove(0)
}

fn trace_rows<F: Field>(x: &Mat<F>, ys: &[Mat<F>]) -> Vec<Q> {
    ys.iter().map(|y| real_trace(x, y)).collect()
}

/// The solvable radical of a linear Lie algebra: the trace-form orthogonal
/// of its derived algebra.
pub fn solvable_radical<F: Field>(p: &MatSpace<F>) -> MatSpace<F> {
    let d = p.derived().basis();
    p.kernel_of(|x| trace_rows(x, &d))
}

/// Chevalley decomposition of the truncated parabolic on `w`.
pub fn chevalley_truncation(par: &ParabolicDesc, w: &Window) -> Result<ChevalleyData> {
    let t = stabilizer_truncation(par, w)?;
    chevalley_of(t.window, t.algebra)
}

/// `p_red = p ∩ θp` for the Cartan involution `θx = −x*`.
pub fn chevalley_of<F: Field>(window: Window, p: MatSpace<F>) -> Result<ChevalleyData<F>> {
    let radical = solvable_radical(&p);
    // Nilpotent elements of the (splittable) radical: its trace-form radical.
    let rb = radical.basis();
    let p_nil = radical.kernel_of(|x| trace_rows(x, &rb));
    let theta = p.image(p.size(), |x| x.adjoint().neg());
    let p_red = p.intersect(&theta);
    let l = p_red.derived();
    let t = p_red.center();
    let data = ChevalleyData { window, p, radical, p_nil, p_red, l, t };
    data.verify()?;
    Ok(data)
}

impl<F: Field> ChevalleyData<F> {
    pub fn verify(&self) -> Result<()> {
        let fail = |m: &str| Err(Error::Invalid(format!("Chevalley decomposition on {}: {m}", self.window)));
        if self.p_nil.dim() + self.p_red.dim() != self.p.dim() || self.p_nil.intersect(&self.p_red).dim() != 0 {
            return fail("p_nil and p_red are not complementary");
        }
        if !self.p_red.bracket(&self.p_red).is_subspace_of(&self.l) {
            return fail("[p_red, p_red] is not inside l");
        }
        if !self.t.is_abelian() || !self.t.bracket(&self.l).is_subspace_of(&self.l) {
            return fail("t is not an abelian algebra normalizing l");
        }
        if self.l.dim() + self.t.dim() != self.p_red.dim() {
            return fail("p_red ≠ l ⊕ t");
        }
        if !self.p_nil.basis().iter().all(Mat::is_nilpotent) {
            return fail("p_nil has a non-nilpotent element");
        }
        if !self.p_nil.bracket(&self.p).is_subspace_of(&self.p_nil) {
            return fail("p_nil is not an ideal");
        }
        let d = self.p.derived();
        if self.p_nil.intersect(&d) != self.radical.intersect(&d) {
            return fail("p_nil ∩ [p,p] ≠ r ∩ [p,p]");
        }
        Ok(())
    }
}
