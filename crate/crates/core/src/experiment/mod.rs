//! Configuration, the five experiments and their artifacts.

mod commands;
mod config;
mod fields;
mod verify;

pub use commands::{
    classify, cmd_classify, cmd_evolve, cmd_ground_state, cmd_sweep, convention, exit_code, initial_field,
    obtain_ground_state, write_artifact, Artifact, Classification, EvolveOutcome, GroundStateOutcome, Prediction,
    SweepOutcome, SweepRow, EXIT_NONCONVERGENCE, EXIT_OK, EXIT_VALIDATION, EXIT_VERIFICATION, SWEEP_COLUMNS,
};
pub use config::{
    Experiment, GridSection, InitialSection, IoSection, PhysicsSection, Profile, RunConfig, SweepSpec, VerifySection,
};
pub use fields::{boosted, random_smooth_field};
pub use verify::{cmd_verify, Check, VerifyReport};
