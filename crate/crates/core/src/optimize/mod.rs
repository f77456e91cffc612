//! Optimisation engines behind the game values: a revised simplex solver,
//! exhaustive local enumeration, the no-signalling LP and the see-saw.

pub mod local;
pub mod lp;
pub mod ns;
pub mod seesaw;

pub use local::{local_value, top_deterministic, DeterministicStrategy};
pub use ns::{ns_value, NsSolution};
pub use seesaw::{qs_seesaw, seesaw_measurement_update, seesaw_state_update, SeesawState};
