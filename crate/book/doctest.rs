// mdbook cannot run listings that depend on a crate, so every chapter is
// pulled in as the docs of an empty module and `cargo test --doc` runs them.
// One module per chapter keeps failures traceable to their file.

#[doc = include_str!("src/introduction.md")]
pub mod introduction {}
#[doc = include_str!("src/pencils.md")]
pub mod pencils {}
#[doc = include_str!("src/local-fields.md")]
pub mod local_fields {}
#[doc = include_str!("src/brauer.md")]
pub mod brauer {}
#[doc = include_str!("src/obstruction.md")]
pub mod obstruction {}
#[doc = include_str!("src/points.md")]
pub mod points {}
#[doc = include_str!("src/reduction.md")]
pub mod reduction {}
#[doc = include_str!("src/cli.md")]
pub mod cli {}
