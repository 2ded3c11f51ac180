//! Command-line front end: the interchange format, the seeded generator, the
//! invariant suite and command dispatch.

pub mod dispatch;
pub mod format;
pub mod generate;
pub mod suite;
