pub mod bench;
pub mod cli;
pub mod composer;
pub mod frontend;
pub mod ltl;
pub mod projector;
pub mod propcheck;
pub mod synth;
pub mod verifier;
