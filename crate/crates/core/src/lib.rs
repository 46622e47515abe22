pub mod classification;
pub mod dichotomy;
pub mod exactnum;
pub mod gadget;
pub mod holant;
pub mod matchgate;
pub mod signature;
