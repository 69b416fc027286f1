//! Library half of the `ben` command-line tool: artifact generation and
//! output plumbing shared by the binary and its tests.

pub mod output;
pub mod reproduce;
pub mod table;
