pub mod analytic;
pub mod config;
pub mod deform;
pub mod eigen;
pub mod error;
pub mod expr;
pub mod figures;
pub mod observables;
pub mod operator;
pub mod pct;
pub mod pipeline;
pub mod quad;
pub mod verify;
