pub mod detcx;
pub mod galedual;
pub mod geometry;
pub mod groebner;
pub mod koszul;
pub mod poly;
pub mod report;
