use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{Signed, ToPrimitive, Zero};

use super::matrix::Mat2Z;
use super::Sl2zError;
use crate::arith::quad::square_free_split;
use crate::arith::QuadVal;

pub type QuadVec = (QuadVal, QuadVal);

/// Exact eigen-data of a hyperbolic element, over `Q(√d)` with `d` the
/// square-free part of `trace² − 4`.
#[derive(Clone, Debug, PartialEq)]
pub struct EigenData {
    /// Eigenvalue with `|λ| > 1`; same sign as the trace.
    pub lambda_exp: QuadVal,
    /// `1 / lambda_exp`.
    pub lambda_con: QuadVal,
    pub v_exp: QuadVec,
    pub v_con: QuadVec,
}

impl EigenData {
    pub fn field(&self) -> u64 {
        self.lambda_exp.d()
    }
}

pub fn eigen_decompose(f: &Mat2Z) -> Result<EigenData, Sl2zError> {
    if !f.is_hyperbolic() {
        return Err(Sl2zError::NotHyperbolic(f.to_string()));
    }
    let tr = f.trace();
    let disc = &tr * &tr - BigInt::from(4);
    let (root_scale, core) = square_free_split(&disc)?;
    let d = core.to_u64().ok_or_else(|| Sl2zError::FieldTooLarge(core.to_string()))?;
    let half = |n: &BigInt| BigRational::new(n.clone(), BigInt::from(2));
    let sign = if tr.is_positive() { BigInt::from(1) } else { BigInt::from(-1) };
    let lambda_exp = QuadVal::new(half(&tr), half(&(&sign * &root_scale)), d)?;
    let lambda_con = lambda_exp.conjugate();
    let vector = |lambda: &QuadVal| -> QuadVec {
        // hyperbolic elements have b ≠ 0, so (1, (λ − a)/b) spans the kernel of f − λ
        let b = BigRational::from_integer(f.b().clone());
        let a = QuadVal::new_unchecked(BigRational::from_integer(f.a().clone()), BigRational::zero(), d);
        let second = (lambda - &a).scale(&(BigRational::from_integer(1.into()) / b));
        (QuadVal::one(d), second)
    };
    let v_exp = vector(&lambda_exp);
    let v_con = vector(&lambda_con);
    Ok(EigenData { lambda_exp, lambda_con, v_exp, v_con })
}

/// Whether `v` is an eigenvector of `f`, i.e. `det[v; f·v] = 0`, decided
/// exactly in the field of `v`.
pub fn eigenvector_test(f: &Mat2Z, v: &QuadVec) -> Result<bool, Sl2zError> {
    if v.0.is_zero() && v.1.is_zero() {
        return Err(Sl2zError::ZeroVector);
    }
    let fv = f.apply_quad(v)?;
    let det = v.0.checked_mul(&fv.1)?.checked_sub(&v.1.checked_mul(&fv.0)?)?;
    Ok(det.is_zero())
}

/// Outcome of the three generic-position conditions on a hyperbolic `f`.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct Conditions {
    /// `rs` is not an eigenvector of `fᵀ`.
    pub rs_not_transpose_eigen: bool,
    /// `rs` is not orthogonal to an eigenvector of `f⁻¹`.
    pub rs_not_orthogonal: bool,
    /// Neither `(1,0)` nor `(0,1)` is an eigenvector of `f`.
    pub axes_not_eigen: bool,
}

impl Conditions {
    pub fn all(&self) -> bool {
        self.rs_not_transpose_eigen && self.rs_not_orthogonal && self.axes_not_eigen
    }
}

pub fn conditions_check(f: &Mat2Z, rs: &QuadVec) -> Result<Conditions, Sl2zError> {
    let (r, s) = rs;
    let rs_not_transpose_eigen = !eigenvector_test(&f.transpose(), rs)?;
    // w·(r,s) = 0 iff w ∥ (s, −r)
    let rs_not_orthogonal = !eigenvector_test(&f.invert(), &(s.clone(), -r))?;
    let axes_not_eigen = !f.b().is_zero() && !f.c().is_zero();
    Ok(Conditions { rs_not_transpose_eigen, rs_not_orthogonal, axes_not_eigen })
}

#[cfg(test)]
mod tests {
    use super::*;
    use proptest::prelude::*;

    fn m(a: i64, b: i64, c: i64, d: i64) -> Mat2Z {
        Mat2Z::new(a, b, c, d).unwrap()
    }

    fn q(s: &str) -> QuadVal {
        s.parse().unwrap()
    }

    fn assert_eigen_exact(f: &Mat2Z, e: &EigenData) {
        for (lambda, v) in [(&e.lambda_exp, &e.v_exp), (&e.lambda_con, &e.v_con)] {
            let fv = f.apply_quad(v).unwrap();
            assert_eq!(fv.0, lambda * &v.0);
            assert_eq!(fv.1, lambda * &v.1);
        }
        assert_eq!(&e.lambda_exp * &e.lambda_con, QuadVal::one(e.field()));
    }

    #[test]
    fn sanov_product_eigenvalue() {
        let f = m(5, 2, 2, 1);
        let e = eigen_decompose(&f).unwrap();
        assert_eq!(e.lambda_exp, q("3+2√2"));
        assert_eq!(e.lambda_con, q("3-2√2"));
        assert_eigen_exact(&f, &e);
    }

    #[test]
    fn inverse_expanding_direction() {
        let e = eigen_decompose(&m(1, -2, -2, 5)).unwrap();
        assert_eq!(e.v_exp, (QuadVal::one(2), q("-1-1√2")));
    }

    #[test]
    fn golden_and_negative_trace() {
        let e = eigen_decompose(&m(2, 1, 1, 1)).unwrap();
        assert_eq!(e.lambda_exp, q("3/2+1/2√5"));
        let f = m(-2, -1, -1, -1);
        let e = eigen_decompose(&f).unwrap();
        assert_eq!(e.lambda_exp, q("-3/2-1/2√5"));
        assert!(e.lambda_con.is_negative());
        assert_eigen_exact(&f, &e);
        assert!(eigen_decompose(&m(1, 1, 0, 1)).is_err());
    }

    #[test]
    fn eigenvector_examples() {
        let v = (q("1").lift_to(2).unwrap(), q("√2"));
        assert!(!eigenvector_test(&m(5, 2, 2, 1).transpose(), &v).unwrap());
        assert!(eigenvector_test(&Mat2Z::identity(), &v).unwrap());
        let e1 = (QuadVal::one(2), QuadVal::zero(2));
        assert!(eigenvector_test(&m(1, 1, 0, 1), &e1).unwrap());
        assert!(matches!(
            eigenvector_test(&Mat2Z::identity(), &(QuadVal::zero(2), QuadVal::zero(2))),
            Err(Sl2zError::ZeroVector)
        ));
    }

    #[test]
    fn conditions_examples() {
        let rs = (QuadVal::one(2), q("√2"));
        let c = conditions_check(&m(5, 2, 2, 1), &rs).unwrap();
        assert_eq!(c, Conditions { rs_not_transpose_eigen: true, rs_not_orthogonal: true, axes_not_eigen: true });
        let c = conditions_check(&m(1, 2, 0, 1), &rs).unwrap();
        assert!(!c.axes_not_eigen);
        // an exact eigenvector of the symmetric f fails both rs conditions
        let bad = (QuadVal::one(2), q("-1-1√2"));
        let c = conditions_check(&m(5, 2, 2, 1), &bad).unwrap();
        assert!(!c.rs_not_transpose_eigen && !c.rs_not_orthogonal && c.axes_not_eigen);
    }

    fn arb_hyperbolic() -> impl Strategy<Value = Mat2Z> {
        prop::collection::vec(0usize..4, 2..8).prop_filter_map("hyperbolic", |ls| {
            let gens = [m(1, 2, 0, 1), m(1, -2, 0, 1), m(1, 0, 2, 1), m(1, 0, -2, 1)];
            let f = ls.iter().fold(Mat2Z::identity(), |acc, &i| acc.compose(&gens[i]));
            f.is_hyperbolic().then_some(f)
        })
    }

    proptest! {
        #[test]
        fn eigen_identities_hold_exactly(f in arb_hyperbolic()) {
            let e = eigen_decompose(&f).unwrap();
            assert_eigen_exact(&f, &e);
            prop_assert!(e.lambda_exp.abs() > QuadVal::one(e.field()));
        }

        #[test]
        fn transpose_inverse_share_eigenvectors(f in arb_hyperbolic(), a in -5i64..5, b in -5i64..5) {
            prop_assume!(a != 0 || b != 0);
            let v = (QuadVal::from_ints(a, 1, 2).unwrap(), QuadVal::from_ints(b, -1, 2).unwrap());
            let ft = f.transpose();
            let fit = f.invert().transpose();
            prop_assert_eq!(eigenvector_test(&ft, &v).unwrap(), eigenvector_test(&fit, &v).unwrap());
        }

        #[test]
        fn transpose_condition_is_power_invariant(f in arb_hyperbolic(), k in 1i64..4, a in -3i64..3) {
            let rs = (QuadVal::from_ints(1, 0, 2).unwrap(), QuadVal::from_ints(a, 1, 2).unwrap());
            let base = conditions_check(&f, &rs).unwrap().rs_not_transpose_eigen;
            prop_assert_eq!(conditions_check(&f.invert(), &rs).unwrap().rs_not_transpose_eigen, base);
            prop_assert_eq!(conditions_check(&f.power(k), &rs).unwrap().rs_not_transpose_eigen, base);
        }
    }
}
