//! Report document types shared between the `evostab` binary and its
//! integration tests.

pub mod document;
