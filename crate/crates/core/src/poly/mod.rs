//! Exact polynomial arithmetic, real root isolation, winding numbers,
//! and algebraic numbers.

pub mod complexpoly;
pub mod real;
pub mod roots;
pub mod winding;

pub use complexpoly::GPoly;
pub use real::{isolate_real_roots_in, refine_site, RatPoly, RealRootSite, SturmChain};
pub use roots::{isolate_roots, roots_in_unit_disk, AlgebraicNumber, DiskPosition};
pub use winding::{
    circle_winding, count_in_unit_disk, has_root_on_unit_circle, rect_root_count, RealPath,
};
