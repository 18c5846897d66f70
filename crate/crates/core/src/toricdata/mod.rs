//! Stacky fans, cone normal forms, structure groups and Picard models.

pub mod fan;
pub mod group;
pub mod normal_form;
pub mod picard;

pub use fan::{parse_fan, EdgeKind, FanEdge, LatticePoint, StackyFan};
pub use group::{structure_group, AbelianGroup, Character, Elem, Phase, StructureGroup};
pub use normal_form::{normalize_cone, ConeNormalForm, NormalFormParams};
pub use picard::{stacky_picard, CokerClass, CokernelModel, RaySubset};
