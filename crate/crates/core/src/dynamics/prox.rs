use crate::scalar::Scalar;

/// Entropic prox step `x_j exp(y_j) / sum_k x_k exp(y_k)`.
///
/// `max(y)` is subtracted before exponentiating. Coordinates that underflow
/// are floored at the smallest positive normal value so the result stays in
/// the interior of the simplex.
pub fn prox_map<T: Scalar>(x: &[T], y: &[T]) -> Vec<T> {
    let mut out = x.to_vec();
    prox_map_in_place(&mut out, y);
    out
}

pub fn prox_map_in_place<T: Scalar>(x: &mut [T], y: &[T]) {
    assert_eq!(x.len(), y.len(), "prox dimensions");
    let shift = y.iter().copied().fold(T::neg_infinity(), T::max);
    let mut total = T::zero();
    for (xj, &yj) in x.iter_mut().zip(y) {
        *xj = *xj * (yj - shift).exp();
        total = total + *xj;
    }
    let floor = T::min_positive_value();
    for xj in x.iter_mut() {
        *xj = (*xj / total).max(floor);
    }
}

/// Raise every coordinate to at least `floor`, then renormalize.
pub fn perturb_interior<T: Scalar>(x: &[T], floor: T) -> Vec<T> {
    let raised: Vec<T> = x.iter().map(|&v| v.max(floor)).collect();
    let total: T = raised.iter().copied().sum();
    raised.into_iter().map(|v| v / total).collect()
}
