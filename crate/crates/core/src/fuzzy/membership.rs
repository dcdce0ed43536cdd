use std::collections::BTreeSet;

use super::{check_alpha, tnorm, FuzzyError, GaussianFuzzyNumber, Grade, Grid, TNorm};

/// Number of cells in the key domain `[0, 255]`.
pub const KEY_DOMAIN: usize = 256;

/// Discretized membership function over the key domain.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct MembershipVector {
    cells: Box<[Grade; KEY_DOMAIN]>,
}

impl MembershipVector {
    pub fn constant(g: Grade) -> Self {
        MembershipVector {
            cells: Box::new([g; KEY_DOMAIN]),
        }
    }

    pub fn full() -> Self {
        Self::constant(Grade::ONE)
    }

    pub fn empty() -> Self {
        Self::constant(Grade::ZERO)
    }

    /// Quantizes `f(x)` for every cell.
    pub fn from_fn(grid: &Grid, f: impl Fn(usize) -> f64) -> Self {
        let mut cells = Box::new([Grade::ZERO; KEY_DOMAIN]);
        for (x, c) in cells.iter_mut().enumerate() {
            *c = grid.quantize(f(x));
        }
        MembershipVector { cells }
    }

    pub fn from_gaussian(grid: &Grid, g: &GaussianFuzzyNumber) -> Self {
        Self::from_fn(grid, |x| g.membership(x as f64))
    }

    pub fn get(&self, x: usize) -> Grade {
        self.cells[x]
    }

    pub fn set(&mut self, x: usize, g: Grade) {
        self.cells[x] = g;
    }

    pub fn cells(&self) -> &[Grade] {
        &self.cells[..]
    }

    pub fn is_emptied(&self) -> bool {
        self.cells.iter().all(|g| *g == Grade::ZERO)
    }

    pub fn alpha_cut(&self, alpha: f64) -> Result<AlphaCut, FuzzyError> {
        check_alpha(alpha)?;
        let support = (0..KEY_DOMAIN)
            .filter(|&x| self.cells[x].value() >= alpha)
            .collect();
        Ok(AlphaCut { alpha, support })
    }

    /// Cellwise `a <= b`.
    pub fn le(&self, other: &MembershipVector) -> bool {
        self.cells.iter().zip(other.cells.iter()).all(|(a, b)| a <= b)
    }
}

/// Crisp α-level set of a membership vector.
#[derive(Debug, Clone, PartialEq)]
pub struct AlphaCut {
    pub alpha: f64,
    pub support: BTreeSet<usize>,
}

impl AlphaCut {
    pub fn cardinality(&self) -> usize {
        self.support.len()
    }

    pub fn is_subset(&self, other: &AlphaCut) -> bool {
        self.support.is_subset(&other.support)
    }
}

/// One leak step: `D(T(prior, leak))` in every cell.
pub fn leak_update(
    prior: &MembershipVector,
    leak: &MembershipVector,
    kind: TNorm,
    grid: &Grid,
) -> MembershipVector {
    let mut out = prior.clone();
    for x in 0..KEY_DOMAIN {
        out.cells[x] = grid.quantize(tnorm(prior.cells[x], leak.cells[x], kind));
    }
    out
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn full_leak_is_fixed_point() {
        let grid = Grid::default();
        let v = MembershipVector::full();
        assert_eq!(leak_update(&v, &v, TNorm::Product, &grid), v);
    }

    #[test]
    fn zero_leak_annihilates_cell() {
        let grid = Grid::default();
        let prior = MembershipVector::full();
        let mut leak = MembershipVector::full();
        leak.set(7, Grade::ZERO);
        let out = leak_update(&prior, &leak, TNorm::Product, &grid);
        assert_eq!(out.get(7), Grade::ZERO);
        assert_eq!(out.get(8), Grade::ONE);
    }

    #[test]
    fn product_update_is_quantized() {
        let grid = Grid::default();
        let mut prior = MembershipVector::full();
        let mut leak = MembershipVector::full();
        prior.set(3, grid.quantize(0.6));
        leak.set(3, grid.quantize(0.5));
        let out = leak_update(&prior, &leak, TNorm::Product, &grid);
        assert_eq!(out.get(3).value(), 0.30);
        assert!(out.le(&prior));
    }

    #[test]
    fn alpha_cut_boundary_inclusive() {
        let grid = Grid::default();
        let mut v = MembershipVector::empty();
        v.set(1, grid.quantize(0.4));
        v.set(2, grid.quantize(0.5));
        v.set(3, grid.quantize(0.6));
        let cut = v.alpha_cut(0.5).unwrap();
        assert_eq!(cut.support.into_iter().collect::<Vec<_>>(), vec![2, 3]);
        assert_eq!(MembershipVector::full().alpha_cut(0.5).unwrap().cardinality(), 256);
        assert_eq!(MembershipVector::empty().alpha_cut(0.5).unwrap().cardinality(), 0);
    }

    #[test]
    fn alpha_cut_rejects_out_of_range() {
        let v = MembershipVector::full();
        assert!(v.alpha_cut(0.0).is_err());
        assert!(v.alpha_cut(1.01).is_err());
        assert!(v.alpha_cut(-0.5).is_err());
        assert!(v.alpha_cut(1.0).is_ok());
    }

    #[test]
    fn gaussian_vector_support_matches_closed_form() {
        let grid = Grid::default();
        let g = GaussianFuzzyNumber::new(50.0, 10.0).unwrap();
        let cut = MembershipVector::from_gaussian(&grid, &g).alpha_cut(0.5).unwrap();
        // closed-form cut is [38.23, 61.77]
        assert_eq!(*cut.support.first().unwrap(), 39);
        assert_eq!(*cut.support.last().unwrap(), 61);
    }
}
