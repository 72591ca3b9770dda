pub mod config;
pub mod constants;
pub mod engine;
pub mod grating;
pub mod lifshitz;
pub mod linalg;
pub mod materials;
pub mod quadrature;
pub mod run;
pub mod scene;
