pub mod cech;
pub mod family;
pub mod linearize;
pub mod majorant;
pub mod multiplier;
pub mod scalar;
pub mod series;
