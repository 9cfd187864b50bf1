//! Airy function, Painlevé II and the Tracy–Widom laws.

pub mod airy;
pub(crate) mod ode;
pub mod painleve;
pub mod table;
pub mod tracy_widom;

pub use airy::{airy, airy_pair, AiryValue};
pub use painleve::{solve_painleve_ii, PainlevePoint, PainleveSolution};
pub use table::{DistributionTable, GridSpec, Law};
pub use tracy_widom::{tracy_widom, tracy_widom_default};
