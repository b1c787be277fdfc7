//! Exact structure theory for the finitary classical Lie algebras
//! `gl(∞)`, `sl(∞)`, `so(∞)`, `sp(∞)` and their real forms.

pub mod chevalley;
pub mod cut;
pub mod error;
pub mod flags;
pub mod index;
pub mod induce;
pub mod levi;
pub mod linear;
pub mod matrix;
pub mod parabolic;
pub mod poly;
pub mod realform;
pub mod report;
pub mod scenario;
pub mod scalar;
pub mod sexpr;
pub mod space;
pub mod suite;

pub use cut::{Card, CutSet, Ray};
pub use error::{Error, Result};
pub use flags::{Atom, GenFlag, Order, Schema, SelfTautFlag, TautCouple, Verdict};
pub use index::{Index, IndexDomain, Window};
pub use levi::{LeviBlock, LeviDatum};
pub use linear::{DualSystem, FinOp, Form, FormKind, Kernel, SVec, Side, SubspaceDesc};
pub use matrix::Mat;
pub use parabolic::{Ambient, BlockFunctional, Couple, ParabolicDesc, TraceRow, Truncation};
pub use poly::Poly;
pub use realform::{ManDecomp, RealParabolic, RealStructure};
pub use space::{MatSpace, Subspace};
pub use scalar::{Field, Q, Qi, Quat, Ring, Scalar};
