pub mod contact;
pub mod corpus;
pub mod frame;
pub mod linalg;
pub mod probe;
pub mod report;
pub mod scalar;
pub mod submanifold;
