//! Conversions from the exact tower into arbitrary-precision floats.

use crate::bilinear::BilinearForm;
use crate::filtration::Filtration;
use crate::matrix::Matrix;
use crate::numeric::{BigComplex, BigReal};
use crate::scalar::{GaussRational, Rational};
use crate::subspace::Subspace;

pub fn gauss_to_complex(z: &GaussRational, prec: u32) -> BigComplex {
    BigComplex::new(
        BigReal::from_rational(&z.re, prec),
        BigReal::from_rational(&z.im, prec),
    )
}

pub fn rational_to_real(q: &Rational, prec: u32) -> BigReal {
    BigReal::from_rational(q, prec)
}

pub fn matrix_to_complex(m: &Matrix<GaussRational>, prec: u32) -> Matrix<BigComplex> {
    m.map(|z| gauss_to_complex(z, prec))
}

pub fn subspace_to_complex(s: &Subspace<GaussRational>, prec: u32) -> Subspace<BigComplex> {
    Subspace::from_rows_matrix(s.ambient(), matrix_to_complex(s.basis(), prec))
}

pub fn filtration_to_complex(f: &Filtration<GaussRational>, prec: u32) -> Filtration<BigComplex> {
    let pieces = f
        .pieces()
        .iter()
        .map(|(l, s)| (*l, subspace_to_complex(s, prec)))
        .collect();
    Filtration::new(f.direction(), f.ambient(), pieces).expect("valid filtration converts")
}

pub fn form_to_complex(b: &BilinearForm<GaussRational>, prec: u32) -> BilinearForm<BigComplex> {
    BilinearForm::new(matrix_to_complex(b.gram(), prec), b.parity())
        .expect("valid form converts")
}
