//! Derivations and vector fields on subcartesian spaces.
//!
//! A [`Derivation`] is an ambient polynomial field. It restricts to a space
//! when it preserves the vanishing ideal ([`is_admissible`]); whether the
//! restriction is a genuine vector field (open flow domain) is decided on
//! probes by [`classify`].

mod admissible;
mod classify;
mod derivation;
mod flow;
mod orbit;
mod pushforward;

pub use admissible::{is_admissible, AdmissibilityVerdict, Provenance, Verdict};
pub use classify::{classify, Classification, ClassifyParams, ClassifyReport, ProbeOutcome};
pub use derivation::{CompiledField, Derivation};
pub use flow::{flow, FlowParams, FlowResult, FlowStatus};
pub use orbit::{orbit_explore, OrbitApprox, OrbitParams};
pub use pushforward::{
    check_local_completeness, exact_flow_map, pushforward_along_flow, CompletenessReport,
    CompletenessVerdict, CompletenessWitness, Pushforward,
};

pub(crate) use derivation::{format_field, values_at};
pub(crate) use flow::FlowEngine;
