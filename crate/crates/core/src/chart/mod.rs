//! KAT factors in closed form, composition, the chart domain and samplers.

mod domain;
mod factors;
mod hadamard;
mod params;
mod sampling;

pub use domain::{
    canonical_representative, in_octahedron, octahedron_value, validate_domain,
    validate_domain_with, AngleTriple, Constraint, DomainOptions, DomainReport, DomainViolation,
    OCTAHEDRON_SIGNS,
};
pub use factors::{
    a1_coefficients, a_factor, assemble, assemble_a1, assemble_a2, assemble_product, compose,
    compose_hadamard, compose_k, compose_k_via_expm, compose_via_expm, compose_with, d_matrix,
    k_from_rotation, magic_matrix, product_expansion, su2_rotation, torus_factor, Grouping,
    KATFactors,
};
pub use hadamard::{
    hadamards, int_mul, sylvester4, verify_hadamards, Doubled, HadamardReport, HadamardSet, P1,
    P2, Q1, Q2,
};
pub use params::{ChartParams, RotationForm, PARAM_COUNT};
pub use sampling::{
    haar_su4_from, sample_chart, sample_haar_batch, sample_haar_su4, ChartSampler,
};
