//! Wavefunctions of genus-one branes in the solid torus module: the framed one-leg
//! vertex, the canoe face relation, the inverse Baxter identity and the unknot conormal.

use crate::annulus::{
    act_generator_truncated, apply_baxter_module, apply_kappa, unknot_value, AnnulusError,
    ModuleVector,
};
use crate::coeff::{ScalarQ, Var};
use crate::partitions::{partitions_up_to, principal_specialization, Partition};

fn a_pow(k: i64) -> ScalarQ {
    ScalarQ::var_pow(Var::A, k as i32)
}

fn g() -> ScalarQ {
    ScalarQ::var_pow(Var::G, 1)
}

/// `q^{p kappa/2} s_lambda(q^rho)`.
pub fn topological_vertex(lambda: &Partition, p: i64) -> ScalarQ {
    principal_specialization(lambda).mul_s((p * lambda.kappa()) as i32)
}

/// `Q_{(p,1)}(a^{-p}) . 1` up to `max_boxes` boxes.
pub fn wavefunction_framed(p: i64, max_boxes: u32) -> Result<ModuleVector, AnnulusError> {
    apply_baxter_module(
        (p, 1),
        &a_pow(-p),
        false,
        max_boxes,
        &ModuleVector::vacuum(),
    )
}

/// The expected framed vertex `sum_lambda q^{(p-1) kappa/2} s_lambda(q^rho) W_lambda`.
pub fn vertex_series(p: i64, max_boxes: u32) -> ModuleVector {
    let mut v = ModuleVector::zero();
    for lambda in partitions_up_to(max_boxes) {
        let c = topological_vertex(&lambda, p - 1);
        v.add_term(lambda, c);
    }
    v
}

/// `(c a^{-1} O - a^{-1} P_{(1,0)} + P_{(0,1)}) Psi` with the unknot `O` acting as a scalar.
fn canoe_operator(
    sign: i64,
    psi: &ModuleVector,
    max_boxes: u32,
) -> Result<ModuleVector, AnnulusError> {
    let ainv = a_pow(-1);
    let unknot = psi.scale(&(&ainv * &unknot_value()));
    let p10 = act_generator_truncated(1, 0, psi, max_boxes)?.scale(&ainv);
    let p01 = act_generator_truncated(0, 1, psi, max_boxes)?;
    let mid = if sign < 0 {
        unknot.sub(&p10)
    } else {
        unknot.add(&p10)
    };
    Ok(mid.add(&p01).truncate(max_boxes))
}

/// Canoe face operator applied to the framing-zero wavefunction.
pub fn canoe_face_residual(max_boxes: u32) -> Result<ModuleVector, AnnulusError> {
    let psi = wavefunction_framed(0, max_boxes + 1)?;
    canoe_operator(-1, &psi, max_boxes)
}

/// Same as [`canoe_face_residual`] with `+a^{-1} P_{(1,0)}` in the middle.
pub fn canoe_face_residual_flipped(max_boxes: u32) -> Result<ModuleVector, AnnulusError> {
    let psi = wavefunction_framed(0, max_boxes + 1)?;
    canoe_operator(1, &psi, max_boxes)
}

/// `Q_{(p,1)}(-t)^{-1} . 1 = Q_{(p+1,1)}(t a^{-1}) . 1` with `t = g`.
pub fn inverse_identity_check(p: i64, max_boxes: u32) -> Result<bool, AnnulusError> {
    let vac = ModuleVector::vacuum();
    let left = apply_baxter_module((p, 1), &(-g()), true, max_boxes, &vac)?;
    let right = apply_baxter_module((p + 1, 1), &(&g() * &a_pow(-1)), false, max_boxes, &vac)?;
    Ok(left == right)
}

/// `Q_{(0,1)}(x) Q_{(0,1)}(y)^{-1} . 1` up to `max_boxes` boxes.
pub fn unknot_wavefunction_with(
    x: &ScalarQ,
    y: &ScalarQ,
    max_boxes: u32,
) -> Result<ModuleVector, AnnulusError> {
    let inner = apply_baxter_module((0, 1), y, true, max_boxes, &ModuleVector::vacuum())?;
    apply_baxter_module((0, 1), x, false, max_boxes, &inner)
}

/// The unknot conormal wavefunction `Q_{(0,1)}(-g a_L a^{-2}) Q_{(0,1)}(-g a)^{-1} . 1`.
pub fn unknot_wavefunction(g_order: u32) -> Result<ModuleVector, AnnulusError> {
    let x = -(&(&g() * &ScalarQ::var_pow(Var::AL, 1)) * &a_pow(-2));
    let y = -(&g() * &a_pow(1));
    unknot_wavefunction_with(&x, &y, g_order)
}

/// `(O - P_{(1,0)} - g a_L a^{-1} P_{(0,1)} + g a P_{(1,1)}) psi` truncated at `g_order`.
pub fn unknot_operator(psi: &ModuleVector, g_order: u32) -> Result<ModuleVector, AnnulusError> {
    let unknot = psi.scale(&unknot_value());
    let p10 = act_generator_truncated(1, 0, psi, g_order)?;
    let c01 = &(&g() * &ScalarQ::var_pow(Var::AL, 1)) * &a_pow(-1);
    let p01 = act_generator_truncated(0, 1, psi, g_order)?.scale(&c01);
    let p11 = act_generator_truncated(1, 1, psi, g_order)?.scale(&(&g() * &a_pow(1)));
    Ok(unknot.sub(&p10).sub(&p01).add(&p11).truncate(g_order))
}

/// The unknot equation applied to the conormal wavefunction; vanishes identically.
pub fn unknot_residual(g_order: u32) -> Result<ModuleVector, AnnulusError> {
    let psi = unknot_wavefunction(g_order)?;
    unknot_operator(&psi, g_order)
}

/// The unknot residual with `a_L = 0` in the operator only.
pub fn unknot_residual_al_zero(g_order: u32) -> Result<ModuleVector, AnnulusError> {
    let psi = unknot_wavefunction(g_order)?;
    let unknot = psi.scale(&unknot_value());
    let p10 = act_generator_truncated(1, 0, &psi, g_order)?;
    let p11 = act_generator_truncated(1, 1, &psi, g_order)?.scale(&(&g() * &a_pow(1)));
    Ok(unknot.sub(&p10).add(&p11).truncate(g_order))
}

/// `q^{p kappa/2} P_{(0,n)} q^{-p kappa/2} = a^{-pn} P_{(pn,n)}` on every `W_lambda`, `|lambda| <= max_boxes`.
pub fn ad_kappa_check(p: i64, n: i64, max_boxes: u32) -> Result<bool, AnnulusError> {
    if n < 1 {
        return Err(AnnulusError::NonTruncating(n));
    }
    let bound = max_boxes + n as u32;
    for lambda in partitions_up_to(max_boxes) {
        let w = ModuleVector::basis(lambda);
        let left = apply_kappa(
            p,
            &act_generator_truncated(0, n, &apply_kappa(-p, &w), bound)?,
        );
        let right = act_generator_truncated(p * n, n, &w, bound)?.scale(&a_pow(-p * n));
        if left != right {
            return Ok(false);
        }
    }
    Ok(true)
}

#[cfg(test)]
mod tests {
    use super::*;

    fn part(p: &[u32]) -> Partition {
        Partition::from_slice(p)
    }

    #[test]
    fn vertex_examples() {
        assert_eq!(topological_vertex(&Partition::empty(), 3), ScalarQ::one());
        assert_eq!(
            topological_vertex(&part(&[1]), 0),
            ScalarQ::one().div_brace(1).unwrap()
        );
        let e = ScalarQ::s_pow(-1)
            .div_brace(1)
            .unwrap()
            .div_brace(2)
            .unwrap();
        assert_eq!(topological_vertex(&part(&[2]), -1), e);
    }

    #[test]
    fn framed_examples() {
        assert_eq!(wavefunction_framed(0, 4).unwrap(), vertex_series(0, 4));
        for p in [-1, 1, 2] {
            let w = wavefunction_framed(p, 3).unwrap();
            assert_eq!(w.coeff(&Partition::empty()), ScalarQ::one());
            assert_eq!(w, vertex_series(p, 3));
        }
        let w = wavefunction_framed(1, 1).unwrap();
        assert_eq!(w.coeff(&part(&[1])), ScalarQ::one().div_brace(1).unwrap());
    }

    #[test]
    fn canoe_examples() {
        assert!(canoe_face_residual(0).unwrap().is_zero());
        assert!(canoe_face_residual(1).unwrap().is_zero());
        assert!(canoe_face_residual(4).unwrap().is_zero());
        let f = canoe_face_residual_flipped(1).unwrap();
        assert!(!f.truncate(1).sub(&f.truncate(0)).is_zero());
    }

    #[test]
    fn inverse_examples() {
        assert!(inverse_identity_check(0, 0).unwrap());
        assert!(inverse_identity_check(0, 4).unwrap());
        assert!(inverse_identity_check(1, 4).unwrap());
    }

    #[test]
    fn unknot_examples() {
        assert!(unknot_residual(0).unwrap().is_zero());
        assert!(unknot_residual(3).unwrap().is_zero());
        let r = unknot_residual_al_zero(1).unwrap();
        assert!(!r.is_zero());
        let x = -(&g() * &a_pow(-1));
        let y = -(&g() * &a_pow(1));
        let alt = unknot_wavefunction_with(&x, &y, 2).unwrap();
        assert!(!unknot_operator(&alt, 2).unwrap().is_zero());
    }

    #[test]
    fn ad_kappa_examples() {
        assert!(ad_kappa_check(1, 1, 0).unwrap());
        assert!(ad_kappa_check(1, 2, 4).unwrap());
        assert!(ad_kappa_check(-2, 3, 4).unwrap());
    }
}
