//! Support code for the `qgauss` command-line tool.

pub mod table;
