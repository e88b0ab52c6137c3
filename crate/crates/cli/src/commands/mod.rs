pub mod ensemble;
pub mod means;
pub mod reproduce;
pub mod sequences;
