pub mod carlitz;
pub mod cli;
pub mod error;
pub mod field;
pub mod laurent;
pub mod polyring;
pub mod primesum;
pub mod ratfun;
pub mod symfun;

pub use error::{Error, Result};
pub use field::{FieldDesc, FqElem};
pub use laurent::USeries;
pub use polyring::Poly;
pub use ratfun::RatFun;
