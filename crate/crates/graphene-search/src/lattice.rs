//! Honeycomb torus geometry: site indexing, neighbor resolution, adjacency.
//!
//! Cells live on an m x n torus spanned by the lattice vectors a1, a2; each
//! cell holds one A and one B site, so the lattice has N = 2mn sites. An
//! A site in cell (alpha, beta) bonds to the B sites in cells
//!
//!   (alpha, beta), (alpha, beta-1), (alpha+1, beta-1)   (mod m, n)
//!
//! and the B rule is the transpose of this. The resulting graph is
//! 3-regular and bipartite with spectrum symmetric about zero.

use crate::error::{Error, Result};
use crate::matrix::DenseMatrix;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum Sublattice {
    A,
    B,
}

impl Sublattice {
    pub fn other(self) -> Self {
        match self {
            Sublattice::A => Sublattice::B,
            Sublattice::B => Sublattice::A,
        }
    }
}

impl std::fmt::Display for Sublattice {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        match self {
            Sublattice::A => write!(f, "A"),
            Sublattice::B => write!(f, "B"),
        }
    }
}

/// A lattice site: cell coordinates plus sublattice label.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub struct SiteId {
    pub alpha: usize,
    pub beta: usize,
    pub sublattice: Sublattice,
}

impl SiteId {
    pub fn new(alpha: usize, beta: usize, sublattice: Sublattice) -> Self {
        Self {
            alpha,
            beta,
            sublattice,
        }
    }
}

impl std::fmt::Display for SiteId {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        write!(f, "({},{},{})", self.alpha, self.beta, self.sublattice)
    }
}

/// Torus dimensions in unit cells.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct LatticeSpec {
    m: usize,
    n: usize,
}

impl LatticeSpec {
    pub fn new(m: usize, n: usize) -> Result<Self> {
        if m < 2 || n < 2 {
            return Err(Error::LatticeTooSmall { m, n });
        }
        Ok(Self { m, n })
    }

    pub fn m(&self) -> usize {
        self.m
    }

    pub fn n(&self) -> usize {
        self.n
    }

    /// Total number of sites N = 2mn.
    pub fn site_count(&self) -> usize {
        2 * self.m * self.n
    }

    pub fn cell_count(&self) -> usize {
        self.m * self.n
    }

    /// True when momenta exactly on the Dirac points exist, i.e. both cell
    /// counts are multiples of 3. Operations that build exact Dirac states
    /// check this flag.
    pub fn dirac_exact(&self) -> bool {
        self.m % 3 == 0 && self.n % 3 == 0
    }

    pub fn require_dirac_exact(&self) -> Result<()> {
        if self.dirac_exact() {
            Ok(())
        } else {
            Err(Error::DiracUnavailable {
                m: self.m,
                n: self.n,
            })
        }
    }

    pub fn contains(&self, site: SiteId) -> bool {
        site.alpha < self.m && site.beta < self.n
    }

    /// Canonical flat ordering: the whole A block first (row-major in
    /// alpha, beta), then the B block. This makes the bipartite block
    /// structure of the adjacency matrix visible.
    pub fn site_index(&self, site: SiteId) -> Result<usize> {
        if !self.contains(site) {
            return Err(Error::SiteOutOfRange {
                alpha: site.alpha,
                beta: site.beta,
                m: self.m,
                n: self.n,
            });
        }
        let cell = site.alpha * self.n + site.beta;
        Ok(match site.sublattice {
            Sublattice::A => cell,
            Sublattice::B => self.m * self.n + cell,
        })
    }

    pub fn index_site(&self, index: usize) -> Result<SiteId> {
        let cells = self.m * self.n;
        if index >= 2 * cells {
            return Err(Error::IndexOutOfRange {
                index,
                sites: 2 * cells,
            });
        }
        let (sub, cell) = if index < cells {
            (Sublattice::A, index)
        } else {
            (Sublattice::B, index - cells)
        };
        Ok(SiteId::new(cell / self.n, cell % self.n, sub))
    }

    /// The three nearest neighbors, in the fixed bond order of the A rule
    /// (mirror convention for B sites). All are on the opposite sublattice.
    pub fn neighbors_of(&self, site: SiteId) -> Result<[SiteId; 3]> {
        if !self.contains(site) {
            return Err(Error::SiteOutOfRange {
                alpha: site.alpha,
                beta: site.beta,
                m: self.m,
                n: self.n,
            });
        }
        let (m, n) = (self.m, self.n);
        let (a, b) = (site.alpha, site.beta);
        Ok(match site.sublattice {
            Sublattice::A => [
                SiteId::new(a, b, Sublattice::B),
                SiteId::new(a, (b + n - 1) % n, Sublattice::B),
                SiteId::new((a + 1) % m, (b + n - 1) % n, Sublattice::B),
            ],
            Sublattice::B => [
                SiteId::new(a, b, Sublattice::A),
                SiteId::new(a, (b + 1) % n, Sublattice::A),
                SiteId::new((a + m - 1) % m, (b + 1) % n, Sublattice::A),
            ],
        })
    }

    /// Flat indices of the three neighbors.
    pub fn neighbor_indices(&self, site: SiteId) -> Result<[usize; 3]> {
        let nb = self.neighbors_of(site)?;
        Ok([
            self.site_index(nb[0])?,
            self.site_index(nb[1])?,
            self.site_index(nb[2])?,
        ])
    }
}

impl std::fmt::Display for LatticeSpec {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        write!(f, "{}x{}", self.m, self.n)
    }
}

/// Adjacency of the honeycomb torus: dense 0/1 matrix plus a neighbor-list
/// view for O(N) products.
#[derive(Debug, Clone)]
pub struct AdjacencyMatrix {
    spec: LatticeSpec,
    dense: DenseMatrix,
    neighbor_lists: Vec<[usize; 3]>,
}

impl AdjacencyMatrix {
    pub fn spec(&self) -> LatticeSpec {
        self.spec
    }

    pub fn dim(&self) -> usize {
        self.dense.dim()
    }

    pub fn dense(&self) -> &DenseMatrix {
        &self.dense
    }

    pub fn neighbor_lists(&self) -> &[[usize; 3]] {
        &self.neighbor_lists
    }

    /// y = A x through the neighbor lists (no dense traversal).
    pub fn matvec_sparse(&self, x: &[f64], y: &mut [f64]) {
        for (i, nb) in self.neighbor_lists.iter().enumerate() {
            y[i] = x[nb[0]] + x[nb[1]] + x[nb[2]];
        }
    }
}

/// Build the adjacency matrix of the honeycomb torus.
pub fn build_lattice(spec: LatticeSpec) -> AdjacencyMatrix {
    let n_sites = spec.site_count();
    let mut dense = DenseMatrix::zeros(n_sites);
    let mut neighbor_lists = Vec::with_capacity(n_sites);
    for index in 0..n_sites {
        let site = spec.index_site(index).expect("index in range");
        let nb = spec.neighbor_indices(site).expect("site in range");
        for &j in &nb {
            dense.set(index, j, 1.0);
        }
        neighbor_lists.push(nb);
    }
    AdjacencyMatrix {
        spec,
        dense,
        neighbor_lists,
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use proptest::prelude::*;

    fn spec(m: usize, n: usize) -> LatticeSpec {
        LatticeSpec::new(m, n).unwrap()
    }

    #[test]
    fn rejects_degenerate_tori() {
        assert!(LatticeSpec::new(1, 5).is_err());
        assert!(LatticeSpec::new(4, 1).is_err());
        assert!(LatticeSpec::new(2, 2).is_ok());
    }

    #[test]
    fn three_by_three_counts() {
        let s = spec(3, 3);
        assert_eq!(s.site_count(), 18);
        let adj = build_lattice(s);
        assert_eq!(adj.dim(), 18);
        for i in 0..18 {
            let deg: f64 = adj.dense().row(i).iter().sum();
            assert_eq!(deg, 3.0);
        }
    }

    #[test]
    fn twelve_by_twelve_has_288_sites() {
        assert_eq!(spec(12, 12).site_count(), 288);
    }

    #[test]
    fn canonical_index_origin_and_max() {
        let s = spec(3, 3);
        assert_eq!(
            s.site_index(SiteId::new(0, 0, Sublattice::A)).unwrap(),
            0
        );
        assert_eq!(
            s.site_index(SiteId::new(2, 2, Sublattice::B)).unwrap(),
            17
        );
    }

    #[test]
    fn index_round_trip() {
        let s = spec(5, 4);
        for idx in 0..s.site_count() {
            let site = s.index_site(idx).unwrap();
            assert_eq!(s.site_index(site).unwrap(), idx);
        }
        let site = SiteId::new(2, 1, Sublattice::B);
        assert_eq!(
            s.index_site(s.site_index(site).unwrap()).unwrap(),
            site
        );
    }

    #[test]
    fn out_of_range_rejected() {
        let s = spec(3, 3);
        assert!(s.site_index(SiteId::new(3, 0, Sublattice::A)).is_err());
        assert!(s.index_site(18).is_err());
    }

    #[test]
    fn neighbor_rule_with_wrap() {
        let s = spec(3, 3);
        let nb = s.neighbors_of(SiteId::new(0, 0, Sublattice::A)).unwrap();
        assert_eq!(
            nb,
            [
                SiteId::new(0, 0, Sublattice::B),
                SiteId::new(0, 2, Sublattice::B),
                SiteId::new(1, 2, Sublattice::B),
            ]
        );

        let s12 = spec(12, 12);
        let nb12 = s12.neighbors_of(SiteId::new(0, 0, Sublattice::A)).unwrap();
        assert_eq!(
            nb12,
            [
                SiteId::new(0, 0, Sublattice::B),
                SiteId::new(0, 11, Sublattice::B),
                SiteId::new(1, 11, Sublattice::B),
            ]
        );
    }

    #[test]
    fn neighbors_are_opposite_sublattice_and_symmetric() {
        let s = spec(4, 5);
        for idx in 0..s.site_count() {
            let site = s.index_site(idx).unwrap();
            let nb = s.neighbors_of(site).unwrap();
            for other in nb {
                assert_eq!(other.sublattice, site.sublattice.other());
                let back = s.neighbors_of(other).unwrap();
                assert!(back.contains(&site));
            }
        }
    }

    #[test]
    fn dense_matches_neighbor_lists() {
        let s = spec(4, 3);
        let adj = build_lattice(s);
        for i in 0..adj.dim() {
            for j in 0..adj.dim() {
                let listed = adj.neighbor_lists()[i].contains(&j);
                assert_eq!(adj.dense().get(i, j) != 0.0, listed);
            }
        }
    }

    #[test]
    fn translation_relabeling_preserves_adjacency() {
        // (alpha, beta) -> (alpha+1, beta) is a permutation conjugation
        // that leaves the adjacency matrix invariant.
        let s = spec(4, 4);
        let adj = build_lattice(s);
        let shift = |site: SiteId| SiteId::new((site.alpha + 1) % s.m(), site.beta, site.sublattice);
        for i in 0..adj.dim() {
            for j in 0..adj.dim() {
                let si = shift(s.index_site(i).unwrap());
                let sj = shift(s.index_site(j).unwrap());
                let pi = s.site_index(si).unwrap();
                let pj = s.site_index(sj).unwrap();
                assert_eq!(adj.dense().get(i, j), adj.dense().get(pi, pj));
            }
        }
    }

    proptest! {
        #[test]
        fn adjacency_invariants(m in 2usize..12, n in 2usize..12) {
            let s = spec(m, n);
            let adj = build_lattice(s);
            prop_assert_eq!(adj.dim(), 2 * m * n);
            let d = adj.dense();
            prop_assert_eq!(d.max_asymmetry(), 0.0);
            prop_assert_eq!(d.trace(), 0.0);
            let cells = m * n;
            for i in 0..adj.dim() {
                let deg: f64 = d.row(i).iter().sum();
                prop_assert_eq!(deg, 3.0);
                // bipartite: A rows only touch the B block and vice versa
                for j in 0..adj.dim() {
                    if d.get(i, j) != 0.0 {
                        prop_assert!((i < cells) != (j < cells));
                    }
                }
            }
        }
    }
}
