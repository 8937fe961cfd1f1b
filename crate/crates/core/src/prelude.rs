//! Float methods (`exp`, `ln`, `sqrt`, …) for `no_std` builds; with `std`
//! available the inherent methods win and the import is simply unused.
#[allow(unused_imports)]
pub(crate) use num_traits::Float;
