pub mod equations;
pub mod error;
pub mod sexpr;
pub mod signature;
pub mod template;
pub mod term;
pub mod validate;
pub mod dsl;
pub mod trace;
pub mod enumerate;
pub mod corpus;
pub mod star_action;
pub mod sample;
pub mod model;
pub mod translate;
pub mod cli;
