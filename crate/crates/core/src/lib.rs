pub mod batch;
pub mod elliptic;
pub mod hodge;
pub mod linalg;
pub mod nc_hodge;
pub mod polarization;
