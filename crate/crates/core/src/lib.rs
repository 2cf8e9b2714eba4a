//! Wiring diagrams of pseudoline arrangements, their cutpaths, and the
//! certified bound on the number of cutpaths.

pub mod arrangement;
pub mod certify;
pub mod complex;
pub mod cutpath;
pub mod error;
pub mod flips;
pub mod generators;
pub mod oracle;
pub mod par;
pub mod rational;
pub mod render;

pub use arrangement::{validate, PseudolineId, ValidationReport, Violation, WiringDiagram};
pub use complex::{CellComplex, Face, FaceId, ZoneReport};
pub use cutpath::{count_cutpaths, enumerate_cutpaths, Analysis, BigCount, Cutpath, CutpathStats, ExitClass};
pub use error::{Error, Result};
pub use generators::{bubblesort_arrangement, build_ai, odd_even_arrangement, stack, stacked_lower_bound, StackSide};
pub use par::Exec;
