//! Fredholm-theoretic data: kernel and cokernel dimensions, index,
//! ascent and descent.

pub mod data;
pub mod extnat;
pub mod kernel;

pub use data::{asc_des, fredholm_data, FredholmData};
pub use extnat::ExtNat;
pub use kernel::{
    block_component, joint_kernel_at, kernel_at, recurrence_poly, scalar_kernel_at,
    scalar_solve_at, JointKernelElement,
};
