pub mod arith;
pub mod curves;
pub mod cyclotomic;
pub mod families;
pub mod field;
pub mod galois;
pub mod padic;
pub mod poly;
pub mod quadratic;
pub mod ramification;
pub mod ser;
