//! Potentials on the free product of cyclic groups that bound torus-knot
//! framing functions from below.

mod angle;
mod standard;
mod step;
mod torus;

pub use angle::{a_prime_of, angle, angle_report, c_potential, internal_angle, AngleReport};
pub use standard::{
    standardize, theta, theta_longitude_closed_form, theta_standard_form, FreeProdError,
    FreeProdParams, StandardForm, Syllable,
};
pub use step::{classify_step, junction, JunctionRule, StepCase, StepKind};
pub use torus::{
    negative_conjugate_product, negative_conjugates, negative_decomposition, torus_certificate,
    torus_framing_function, torus_natural_framing,
};
