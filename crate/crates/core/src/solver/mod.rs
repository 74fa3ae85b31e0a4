//! Initial–boundary value problem on the strip `0 ≤ x ≤ l`: wall lifting,
//! sine synthesis of the pure-wave and viscous solutions, the slow-time
//! approximation, and a Crank–Nicolson reference.

mod data;
mod fd;
mod synth;

pub use data::{lift_boundary, smooth_p, smooth_r, BoundarySignal, Lift, ProblemData, SourceFn, SpaceFn};
pub use fd::{fd_reference, FdGrid, FdSolution};
pub use synth::{
    approx_viscous, solve, solve_viscous, solve_wave, Field, ModalCoefficients, OutputGrid, Solution, SolveOutput,
    MIN_PROJECTION_POINTS, MIN_SOURCE_STEPS,
};
