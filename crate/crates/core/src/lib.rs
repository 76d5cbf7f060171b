//! Arc-presentations (grid diagrams) of knots and links.
//!
//! The crate covers the grid data model, the elementary move calculus with
//! Reidemeister accounting, conversion from Morse-form event words,
//! monotonic simplification (exchanges and destabilizations only), exact
//! unknotting bounds, and an exhaustive census of small diagrams.

pub mod bounds;
pub mod census;
pub mod grid;
pub mod morse;
pub mod moves;
pub mod simplify;

pub use bounds::{BoundError, BoundReport};
pub use census::{census, CensusConfig, CensusError, CensusRecord, CensusReport, Classifier};
pub use grid::{parse_grid, serialize_grid, GridDiagram, GridError, GridLine, Marker, UnorientedKey, Violation};
pub use morse::{morse_to_grid, parse_morse, MorseError, MorseEvent, MorseStats, MorseWord};
pub use moves::{
    apply_move, apply_sequence, is_legal, legal_moves, reidemeister_cost, Corner, Ledger, Move, MoveClass,
    MoveClasses, MoveError, ReidemeisterCost, Replay, Shift,
};
pub use simplify::{
    simplify, verify_certificate, Certificate, Mode, SearchConfig, SimplificationResult, Target, Verdict,
    VerificationReport,
};
