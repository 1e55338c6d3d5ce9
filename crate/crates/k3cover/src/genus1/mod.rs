//! Genus-1 curve models (quartic, plane cubic, Weierstrass), exact model
//! transformations, the elliptic group law over towers, and sound
//! torsion/non-torsion certificates.

pub mod cubic;
pub mod modelmap;
pub mod quartic;
pub mod torsion;
pub mod weierstrass;

pub use cubic::cubic_to_weierstrass;
pub use modelmap::{ModelMap, ModelPoint};
pub use quartic::{pullback_quartic, quartic_to_weierstrass, QuarticGenus1Curve, SingularSexticModel};
pub use torsion::{torsion_certificate, TorsionCertificate};
pub use weierstrass::{ECPoint, WeierstrassCurve};
