//! File formats, campaign driver and command-line front end for k-IPCG
//! generation on top of [`ipcg_core`].

pub mod audit;
pub mod campaign;
pub mod graph6;
pub mod newick;
pub mod records;
pub mod schedule;
pub mod targets;

pub use ipcg_core as core;
