//! Decision engine for List 3-Colouring on graphs of diameter 2 with
//! forbidden induced cycles.
//!
//! The pieces, bottom up:
//!
//! * [`graph`] — immutable simple graphs with distance, diameter and
//!   bipartiteness queries;
//! * [`patterns`] — detection/enumeration of K4, triangles, diamonds,
//!   bulls and induced cycles;
//! * [`lists`] — palette-`{1,2,3}` list assignments and precolouring
//!   enumeration;
//! * [`twosat`] — the linear-time 2-list solver (implication graph);
//! * [`propagation`] — the list-reduction rule engine with `Yes`/`No`/
//!   `Unknown` outcomes and replayable traces;
//! * [`solver`] — the class-specific polynomial drivers, the dispatcher
//!   and the exact branching fallback;
//! * [`oracle`] — independent brute-force search and counting, the ground
//!   truth for the test suites;
//! * [`hardness`] — the NAE-3SAT gadget builder and verifier;
//! * [`instance`], [`generator`], [`families`] — file formats, seeded
//!   class-instance generation and named example graphs.

pub mod families;
pub mod generator;
pub mod graph;
pub mod hardness;
pub mod instance;
pub mod lists;
pub mod oracle;
pub mod patterns;
pub mod propagation;
pub mod solver;
pub mod twosat;

pub use graph::{AdjMatrix, Bipartition, Diameter, Graph, GraphError, Vertex};
pub use lists::{respects, Colour, ColourMask, Colouring, ListAssignment, ListError, Precolouring};
pub use patterns::{BullSite, CycleLimits, DiamondSite, InducedCycle, PatternError};
pub use propagation::{
    propagate, Propagation, PropagationOutcome, RuleId, RuleSet, RuleTrace, TraceStep,
};
pub use solver::{
    classify, dispatch_solve, solve_c4c7free, solve_c4c8free, solve_c4c9free, solve_c5free,
    solve_c6free, solve_exact, ClassProfile, Route, SolveConfig, SolveReport, SolverError,
};
