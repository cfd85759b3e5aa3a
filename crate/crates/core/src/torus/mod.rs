//! Exact arithmetic on the circle `T = Q/Z` and the twisted torus.

mod arc;
mod rigidity;
mod stability;
mod sturmian;
mod twisted;

pub use arc::{arc_sumset, arcset_measure, erosion, Arc, ArcSet};
pub use rigidity::{
    rigidity_force_containment, PairSide, RigidityError, RigidityOutcome, RigidityWitness, TorusSet,
};
pub use stability::{is_stable_pair, is_stable_twisted, left_closure, twisted_left_closure, twisted_right_closure};
pub use sturmian::{discretize, make_sturmian, SturmianPair, SturmianSpec, SturmianTarget};
pub use twisted::{twisted_product, TwistedElem, TwistedSet};

#[derive(Debug, Clone, PartialEq, Eq, thiserror::Error)]
pub enum TorusError {
    #[error("invalid arc: {0}")]
    InvalidArc(String),
    #[error("added point {0} lies on an arc")]
    AddedInsideArc(String),
    #[error("removed point {0} lies outside the arcs")]
    RemovedOutsideArc(String),
    #[error("operation needs sets without point corrections")]
    PointCorrections,
    #[error("bad sturmian spec: {0}")]
    BadSpec(String),
    #[error("m(I) + m(J) = {0} is not below 1")]
    MeasureTooLarge(String),
}
