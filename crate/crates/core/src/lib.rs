pub mod arith;
pub mod chi;
pub mod cli;
pub mod field;
pub mod gw;
pub mod linalg;
pub mod localindex;
pub mod poly;
pub mod rh;
pub mod transfer;
