pub mod cv;
pub mod eval;
pub mod gradcheck;
pub mod predict;
pub mod scores;
pub mod timeline;
pub mod train;
