pub mod rational;
pub mod error;
pub mod space;
pub mod maps;
pub mod engine;
pub mod catalog;
pub mod oracle;
pub mod factor;
pub mod laws;
pub mod cli;
