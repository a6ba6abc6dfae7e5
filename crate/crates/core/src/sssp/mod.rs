pub mod estree;
pub mod hsssp;
