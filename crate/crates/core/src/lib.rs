pub mod error;
pub mod hmatrix;
pub mod partitions;
pub mod series;
pub mod shelves;
pub mod verify;
pub mod xq;
