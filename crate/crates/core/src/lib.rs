pub mod check;
pub mod comp;
pub mod conv;
pub mod driver;
pub mod eval;
pub mod interval;
pub mod parser;
pub mod prelude;
pub mod readback;
pub mod syntax;
pub mod value;

#[cfg(test)]
mod testing;
