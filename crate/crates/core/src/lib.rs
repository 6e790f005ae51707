pub mod exact_algebra;
pub mod diffgeo;
pub mod coxeter;
pub mod primitive;
pub mod log_modules;
pub mod certify;
