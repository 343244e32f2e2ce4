use std::fmt::{Debug, Display};
use std::iter::Sum;

use num_complex::Complex;
use num_traits::{Float, FloatConst, FromPrimitive, ToPrimitive};

/// Floating-point scalar accepted by the numerical kernels.
pub trait Real:
    Float + FloatConst + FromPrimitive + ToPrimitive + Debug + Display + Default + Send + Sync + Sum + 'static
{
}

impl<T> Real for T where
    T: Float + FloatConst + FromPrimitive + ToPrimitive + Debug + Display + Default + Send + Sync + Sum + 'static
{
}

/// Converts an `f64` literal into `F`.
#[inline]
pub fn c<F: Real>(x: f64) -> F {
    F::from_f64(x).expect("f64 literal representable in scalar type")
}

#[inline]
pub(crate) fn to_f64<F: Real>(x: F) -> f64 {
    x.to_f64().unwrap_or(f64::NAN)
}

/// Neumaier-compensated running sum.
#[derive(Clone, Copy, Debug, Default)]
pub struct CompensatedSum<F> {
    sum: F,
    comp: F,
}

impl<F: Real> CompensatedSum<F> {
    pub fn new() -> Self {
        CompensatedSum { sum: F::zero(), comp: F::zero() }
    }

    #[inline]
    pub fn add(&mut self, x: F) {
        let t = self.sum + x;
        if self.sum.abs() >= x.abs() {
            self.comp = self.comp + ((self.sum - t) + x);
        } else {
            self.comp = self.comp + ((x - t) + self.sum);
        }
        self.sum = t;
    }

    pub fn merge(&mut self, other: &Self) {
        self.add(other.sum);
        self.add(other.comp);
    }

    pub fn value(&self) -> F {
        self.sum + self.comp
    }
}

/// Compensated sum of complex values (componentwise).
#[derive(Clone, Copy, Debug, Default)]
pub struct CompensatedComplexSum<F> {
    re: CompensatedSum<F>,
    im: CompensatedSum<F>,
}

impl<F: Real> CompensatedComplexSum<F> {
    pub fn new() -> Self {
        CompensatedComplexSum { re: CompensatedSum::new(), im: CompensatedSum::new() }
    }

    #[inline]
    pub fn add(&mut self, z: Complex<F>) {
        self.re.add(z.re);
        self.im.add(z.im);
    }

    pub fn merge(&mut self, other: &Self) {
        self.re.merge(&other.re);
        self.im.merge(&other.im);
    }

    pub fn value(&self) -> Complex<F> {
        Complex::new(self.re.value(), self.im.value())
    }
}
