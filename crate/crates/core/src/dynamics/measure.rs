use num_complex::Complex64;

use crate::error::{Error, Result};

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Atom {
    pub location: Complex64,
    pub weight: f64,
}

/// A finite weighted point cloud. Weights are finite and nonnegative.
#[derive(Debug, Clone, PartialEq, Default)]
pub struct EmpiricalMeasure {
    atoms: Vec<Atom>,
}

impl EmpiricalMeasure {
    pub fn new(atoms: Vec<Atom>) -> Result<Self> {
        for a in &atoms {
            if !(a.weight >= 0.0 && a.weight.is_finite()) {
                return Err(Error::InvalidConfig(format!("atom weight {} is not a finite nonnegative number", a.weight)));
            }
            if !a.location.is_finite() {
                return Err(Error::InfiniteLeaf);
            }
        }
        Ok(Self { atoms })
    }

    pub fn dirac(location: Complex64) -> Self {
        Self { atoms: vec![Atom { location, weight: 1.0 }] }
    }

    /// Equal weights `1/len` on `points`.
    pub fn uniform(points: &[Complex64]) -> Self {
        let weight = 1.0 / points.len() as f64;
        Self { atoms: points.iter().map(|&location| Atom { location, weight }).collect() }
    }

    pub(crate) fn from_atoms_unchecked(atoms: Vec<Atom>) -> Self {
        Self { atoms }
    }

    pub fn atoms(&self) -> &[Atom] {
        &self.atoms
    }

    pub fn len(&self) -> usize {
        self.atoms.len()
    }

    pub fn is_empty(&self) -> bool {
        self.atoms.is_empty()
    }

    pub fn locations(&self) -> impl Iterator<Item = Complex64> + '_ {
        self.atoms.iter().map(|a| a.location)
    }

    /// Compensated sum of the weights.
    pub fn total_mass(&self) -> f64 {
        let mut sum = 0.0;
        let mut carry = 0.0;
        for a in &self.atoms {
            let y = a.weight - carry;
            let t = sum + y;
            carry = (t - sum) - y;
            sum = t;
        }
        sum
    }

    /// The same atoms rescaled to total mass one. A zero measure is
    /// returned unchanged.
    pub fn normalized(&self) -> Self {
        let mass = self.total_mass();
        if mass == 0.0 {
            return self.clone();
        }
        Self {
            atoms: self.atoms.iter().map(|a| Atom { location: a.location, weight: a.weight / mass }).collect(),
        }
    }

    /// Mass of the open disc `D(z, r)`.
    pub fn mass_in_disc(&self, z: Complex64, r: f64) -> f64 {
        self.atoms.iter().filter(|a| (a.location - z).norm() < r).map(|a| a.weight).sum()
    }

    /// Number of atoms in the open disc `D(z, r)`.
    pub fn count_in_disc(&self, z: Complex64, r: f64) -> usize {
        self.atoms.iter().filter(|a| (a.location - z).norm() < r).count()
    }
}
