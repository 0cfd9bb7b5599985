//! Positively folded alcove walks and the multiplicities they count.

pub mod affine_weyl;
pub mod config;
pub mod multiplicity;
pub mod oracle;
pub mod render;
pub mod report;
pub mod root_datum;
pub mod walks;
