//! Polynomial input, point enumeration over the working field, and the
//! validated equivariant model.

mod model;
mod parse;

pub use model::{
    build_abstract, build_model, exactness_check, spec_hash, verify_completeness, AbstractSpec,
    BaseField, Completeness, EquivariantModel, GeneratorSpec, Limits, ModelError, ModelFile,
    ModelMeta, NamedPerm, VarietySpec, DEFAULT_POINT_CAP,
};
pub use parse::{eval_poly, parse_polynomial, ParseError, PolyExpr};
