pub mod builder;
pub mod corpus;
pub mod eval;
pub mod lexicon;
pub mod prep;
pub mod grammar;
pub mod planner;
pub mod realiser;
pub mod seed;
