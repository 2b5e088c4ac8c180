//! Built-in test problems: `x³ − 1` and `x⁶ + 30x³ − 125x² − 5x + 120`,
//! each with two base initial vectors and an α grid.

use crate::error::{Error, Result};
use crate::numeric::Polynomial;
use crate::C64;

#[derive(Clone, Debug)]
pub struct Example {
    pub id: u32,
    /// Real coefficients, lowest degree first.
    pub coeffs: &'static [f64],
    pub alphas: &'static [f64],
}

impl Example {
    pub fn polynomial(&self) -> Polynomial<f64> {
        Polynomial::from_real(self.coeffs).expect("preset coefficients are valid")
    }

    /// Base vector of case 1 or 2.
    pub fn base(&self, case: u32) -> Result<Vec<C64>> {
        let c = |re: f64| C64::new(re, 0.0);
        match (self.id, case) {
            (1, 1) => Ok(vec![c(70008.0), c(-90005.5), c(17009.5)]),
            (1, 2) => Ok(vec![c(708.0), c(-905.5), C64::new(179.5, -1.0)]),
            (2, 1) => Ok([-15.0, -13.9, 30.8, -30.8, 10.7, 20.7].map(c).to_vec()),
            (2, 2) => Ok([-10.0, -5.9, 15.8, 12.8, 5.7, 13.9].map(c).to_vec()),
            _ => Err(Error::InvalidParams(format!("example {} has no case {case}", self.id))),
        }
    }

    /// Roots to binary64 precision (the sextic's from a 40-digit solve).
    pub fn roots(&self) -> Vec<C64> {
        match self.id {
            1 => {
                let h = 3f64.sqrt() / 2.0;
                vec![C64::new(1.0, 0.0), C64::new(-0.5, h), C64::new(-0.5, -h)]
            }
            _ => vec![
                C64::new(-3.9072910212591636, 0.0),
                C64::new(-0.9065764863241355, 0.0),
                C64::new(1.1306584904722945, 0.0),
                C64::new(2.4154304441056507, 0.0),
                C64::new(0.6338892865026768, 3.4644716882840556),
                C64::new(0.6338892865026768, -3.4644716882840556),
            ],
        }
    }

    /// Default seed for a case: the case number itself.
    pub fn default_seed(case: u32) -> u64 {
        u64::from(case)
    }
}

pub const EXAMPLE_1: Example = Example {
    id: 1,
    coeffs: &[-1.0, 0.0, 0.0, 1.0],
    alphas: &[0.0, 1.0, 2.0, 3.0, 4.0, 5.0],
};

pub const EXAMPLE_2: Example = Example {
    id: 2,
    coeffs: &[120.0, -5.0, -125.0, 30.0, 0.0, 0.0, 1.0],
    alphas: &[0.0, 0.5, 1.0, 2.0, 3.0, 4.0, 5.0],
};

pub fn example(id: u32) -> Result<&'static Example> {
    match id {
        1 => Ok(&EXAMPLE_1),
        2 => Ok(&EXAMPLE_2),
        _ => Err(Error::InvalidParams(format!("unknown example {id}; expected 1 or 2"))),
    }
}
