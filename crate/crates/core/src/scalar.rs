use nalgebra as na;
use num_traits as nt;

/// Floating-point scalar used by every geometric and spectral routine.
///
/// Integer lattice data never passes through this trait; only embeddings into
/// the plane and spectral quantities do.
pub trait Real:
    na::RealField
    + Copy
    + nt::FromPrimitive
    + nt::ToPrimitive
    + std::fmt::LowerExp
    + Default
    + serde::Serialize
    + serde::de::DeserializeOwned
    + Send
    + Sync
    + 'static
{
    /// Tolerance for matching lattice points after rotation.
    const MATCH_TOL: f64;
    /// Tolerance for orthogonality and duality identities.
    const ORTHO_TOL: f64;
    /// Magnitude below which a derived Fourier coefficient counts as zero.
    const ZERO_TOL: f64;

    fn lit(x: f64) -> Self;

    fn int(n: i64) -> Self;

    fn as_f64(self) -> f64;
}

macro_rules! impl_real {
    ($t:ty, $matching:expr, $ortho:expr, $zero:expr) => {
        impl Real for $t {
            const MATCH_TOL: f64 = $matching;
            const ORTHO_TOL: f64 = $ortho;
            const ZERO_TOL: f64 = $zero;

            #[inline]
            fn lit(x: f64) -> Self {
                x as $t
            }

            #[inline]
            fn int(n: i64) -> Self {
                n as $t
            }

            #[inline]
            fn as_f64(self) -> f64 {
                self as f64
            }
        }
    };
}

impl_real!(f32, 1e-4, 1e-5, 1e-6);
impl_real!(f64, 1e-9, 1e-12, 1e-14);

/// Modulus of a complex number over any [`Real`].
#[inline]
pub fn cabs<T: Real>(z: num_complex::Complex<T>) -> T {
    z.re.hypot(z.im)
}
