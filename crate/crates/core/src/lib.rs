pub mod error;
pub mod real;
pub mod gamma;
pub mod jet;
pub mod ball;
pub mod grid;
pub mod cascade;
pub mod claims;
