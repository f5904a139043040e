//! Placeholder: implemented in a later layer of this crate.
