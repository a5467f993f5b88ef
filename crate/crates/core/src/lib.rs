//! Exact computation of tight closures of powers of parameter ideals in
//! graded Fermat hypersurfaces `𝔽_p[x0..xd]/(x0^r + ... + xd^r)`.
//!
//! The crate is layered bottom-up:
//!
//! * [`ffpoly`]: prime-field polynomials and the text grammar,
//! * [`groebner`]: Buchberger and the ideal calculus built on it,
//! * [`graded_ring`]: the hypersurface ring, Hilbert functions, socles,
//! * [`tight`]: closed-form closures, Frobenius certificates, degree slices,
//! * [`filtration`]: tight Hilbert coefficients, identity checks, reduction
//!   numbers.

pub mod ffpoly;
pub mod filtration;
pub mod graded_ring;
pub mod groebner;
pub mod linalg;
pub mod tight;
