//! Explicit CPA products on small catalog algebras.

use std::sync::Arc;

use num_traits::{One, Zero};

use super::CpaProduct;
use crate::exact::{Rational, SparseRow};
use crate::liealg::LieAlgebraTable;

fn combo(terms: &[(usize, &Rational)]) -> SparseRow {
    terms
        .iter()
        .filter(|(_, c)| !c.is_zero())
        .map(|(k, c)| (*k, (*c).clone()))
        .collect()
}

/// On the Heisenberg algebra `[e1,e2] = e3`: `e1·e1 = e2`, `e1·e2 = α e3`.
/// Not central.
pub fn heisenberg_noncentral(algebra: Arc<LieAlgebraTable>, alpha: Rational) -> CpaProduct {
    let one = Rational::one();
    CpaProduct::from_products(
        algebra,
        vec![(0, 0, combo(&[(1, &one)])), (0, 1, combo(&[(2, &alpha)]))],
    )
    .expect("three-dimensional algebra")
}

/// On F_{2,3} with `[e1,e2]=e3, [e1,e3]=e4, [e2,e3]=e5`:
/// `e1·e1 = αe4+βe5`, `e1·e2 = γe4+δe5`, `e2·e2 = εe4+κe5`.
pub fn free_2_3_central(algebra: Arc<LieAlgebraTable>, params: &[Rational; 6]) -> CpaProduct {
    let [a, b, c, d, e, k] = params;
    CpaProduct::from_products(
        algebra,
        vec![
            (0, 0, combo(&[(3, a), (4, b)])),
            (0, 1, combo(&[(3, c), (4, d)])),
            (1, 1, combo(&[(3, e), (4, k)])),
        ],
    )
    .expect("five-dimensional algebra")
}

/// On F_{3,2}: `e1·e1 = e2, e1·e2 = -e5, e1·e5 = e6, e2·e3 = -2e6`, all other
/// products zero. Fails the representation identity at (e1, e2, e1).
pub fn free_3_2_listed(algebra: Arc<LieAlgebraTable>) -> CpaProduct {
    let one = Rational::one();
    CpaProduct::from_products(
        algebra,
        vec![
            (0, 0, combo(&[(1, &one)])),
            (0, 1, combo(&[(4, &-one.clone())])),
            (0, 4, combo(&[(5, &one)])),
            (1, 2, combo(&[(5, &Rational::from(-2))])),
        ],
    )
    .expect("six-dimensional algebra")
}
