//! Erasure decoding of binary linear codes.

pub mod channel;
pub mod codes;
pub mod decoders;
pub mod gf2;
pub mod lt;
pub mod packet;
pub mod sim;
