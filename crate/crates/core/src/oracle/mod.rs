//! Exact finite-field oracle: exponential sums, L-polynomial reconstruction
//! over `Q(ζ_p)`, Newton polygons and complex root moduli.

mod cyclotomic;
mod field;
mod lpoly;
mod roots;
mod sums;

pub use cyclotomic::Cyclotomic;
pub use field::{ExtField, MAX_FIELD_SIZE};
pub use lpoly::{
    derive_l_from_lstar, l_from_power_sums, lower_hull, negate_sums, newton_polygon_of, ord_p, polygon_above,
    zeta_valuation, LPolynomial, NewtonPolygon,
};
pub use roots::{
    complex_roots, complex_weights, verify_bound, weight_histogram, weight_of_modulus, BoundCheck, EmbeddingRoots,
    MAX_ROOT_DEGREE, MODULUS_TOLERANCE,
};
pub use sums::{
    constrained_sum, constrained_sum_fast, exp_sum_bruteforce, instance_sums, kloosterman3_table, s_star_fast,
    InstanceSums, KloostermanTables, PaperInstance, BRUTE_FORCE_BUDGET, FAST_PATH_CAP, G_EXPONENTS,
};
