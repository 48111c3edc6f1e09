//! Self-similar groupoid actions on finite directed graphs.

pub mod automaton;
pub mod graph;

pub use automaton::{Automaton, AutomatonError, Element, GeneratorSpec, Letter, RuleSpec, Violation};
pub use graph::{EdgeId, Graph, GraphError, Path, StructureReport, VertexId};
pub mod machine;
pub mod nucleus;

pub use machine::{Bounds, ClosureError, StateId, StateMachine};
pub use nucleus::{Nucleus, NucleusError};
pub mod paths;

pub use paths::{AnyPath, BiInfinitePath, LeftInfinitePath, PathError, PathLiteral, RightInfinitePath};
pub mod dynamics;
pub mod schreier;
pub mod ktheory;
pub use ktheory::{AbelianGroup, IntMatrix, KGroups, KTheoryError, Snf};
pub mod spec_file;
pub use spec_file::{format_spec, load_spec, parse_spec, SpecError, SpecFile, SpecOptions};
pub mod sample;
