//! Crowell state spaces of reduced alternating knot diagrams.

pub mod crowell;
pub mod knot_io;
pub mod linalg;
pub mod moves;
pub mod poly;
pub mod statespace;
pub mod table;
pub mod torus;
pub mod verify;
