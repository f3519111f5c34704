pub mod numerics;
pub mod poly;
pub mod geometry;
pub mod counting;
pub mod solver;
