//! Reference component formulas, kept as test vectors for the generated
//! currents.

use super::{ConservedCurrent, CurrentOrigin, NoetherError};
use crate::equation::{FSpec, POTENTIAL_FN};
use crate::symcore::{parse, substitute, Bindings, FunBinding};

const TABLE: [(&str, [&str; 3]); 5] = [
    (
        "S0",
        [
            "-sin(x)/2*u_t^2 - sin(x)/2*u_x^2 - 1/(2*sin(x))*u_y^2 - sin(x)*F(u)",
            "sin(x)*u_t*u_x",
            "1/sin(x)*u_t*u_y",
        ],
    ),
    (
        "S1",
        [
            "-sin(x)*u_t*u_y",
            "sin(x)*u_x*u_y",
            "sin(x)/2*u_t^2 - sin(x)/2*u_x^2 + 1/(2*sin(x))*u_y^2 - sin(x)*F(u)",
        ],
    ),
    (
        "S2",
        [
            "-sin(x)*sin(y)*u_t*u_x - cos(x)*cos(y)*u_t*u_y",
            "sin(x)*sin(y)/2*u_t^2 + sin(x)*sin(y)/2*u_x^2 - sin(y)/(2*sin(x))*u_y^2 + cos(x)*cos(y)*u_x*u_y \
             - sin(x)*sin(y)*F(u)",
            "cos(x)*cos(y)/2*u_t^2 - cos(x)*cos(y)/2*u_x^2 + cos(x)*cos(y)/(2*sin(x)^2)*u_y^2 \
             + sin(y)/sin(x)*u_x*u_y - cos(x)*cos(y)*F(u)",
        ],
    ),
    (
        "S3",
        [
            "-sin(x)*cos(y)*u_t*u_x + cos(x)*sin(y)*u_t*u_y",
            "sin(x)*cos(y)/2*u_t^2 + sin(x)*cos(y)/2*u_x^2 - cos(y)/(2*sin(x))*u_y^2 - cos(x)*sin(y)*u_x*u_y \
             - sin(x)*cos(y)*F(u)",
            "-cos(x)*sin(y)/2*u_t^2 + cos(x)*sin(y)/2*u_x^2 - cos(x)*sin(y)/(2*sin(x)^2)*u_y^2 \
             + cos(y)/(2*sin(x))*u_x*u_y + cos(x)*sin(x)*F(u)",
        ],
    ),
    (
        "Sinf",
        ["sin(x)*(b*u_t - b_t*u)", "sin(x)*(b_x*u - b*u_x)", "1/sin(x)*(b*u_t - b_t*u)"],
    ),
];

/// Names with a reference current.
pub fn reference_generators() -> impl Iterator<Item = &'static str> {
    TABLE.iter().map(|(n, _)| *n)
}

/// The reference current for a bundled generator, exactly as stated.
pub fn reference_current(generator: &str) -> Option<ConservedCurrent> {
    let (_, comps) = TABLE.iter().find(|(n, _)| *n == generator)?;
    let c = comps.map(|s| parse(s).expect("reference formulas parse"));
    Some(ConservedCurrent::new(
        generator,
        CurrentOrigin::Reference,
        c,
    ))
}

/// The reference current with `F` replaced by the potential of `spec`.
pub fn reference_current_for(
    generator: &str,
    spec: &FSpec,
) -> Result<Option<ConservedCurrent>, NoetherError> {
    let Some(mut a) = reference_current(generator) else {
        return Ok(None);
    };
    if *spec != FSpec::Arbitrary {
        let b = Bindings::new().bind_function(POTENTIAL_FN, FunBinding::Lambda(spec.potential()?));
        for c in a.components.iter_mut() {
            *c = substitute(c, &b).expect("potential substitution is polynomial");
        }
    }
    Ok(Some(a))
}
