pub mod deriv;
pub mod term;
pub mod types;
pub mod stdlib;
pub mod stratify;
pub mod lla;
pub mod infer;
pub mod bench;
pub mod cli;
