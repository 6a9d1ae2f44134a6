//! Co-optimisation engine for a local energy community coupled with a data
//! centre.
//!
//! The crate assembles a mixed-integer linear program that dispatches
//! household flexible loads, electric vehicles, building heating/cooling, a
//! shared battery and a data centre able to pause and resume jobs, recovers
//! the data centre's waste heat for the households, and trades with the
//! retailer and reserve markets. On top of the single-window solve it
//! provides long-run chained simulation, scenario comparison metrics and
//! household-count sensitivity sweeps.
//!
//! Modules:
//! * [`case`] — input data model, loading and validation;
//! * [`milp`] — solver-agnostic model store, LP export and solve adapters;
//! * [`dc`] — data-centre flexibility block;
//! * [`lec`] — household, battery and heat-recovery blocks;
//! * [`coordinator`] — whole-window assembly, solve and decoding;
//! * [`sim`] — chained windows, metrics and sensitivity sweeps;
//! * [`output`] — delimited-file export of solved results;
//! * [`synth`] — deterministic synthetic case generation.

pub mod case;
pub mod coordinator;
pub mod dc;
pub mod lec;
pub mod milp;
pub mod output;
pub mod sim;
pub mod synth;
