//! Hamiltonians driving the cursor, in the single-excitation sector.
//!
//! Every generator is a sum of directed hop terms
//! `-(1/2) |to><from| ⊗ (register op) + h.c.`; the builders differ only in
//! which hops exist and whether a hop flips the control q-bit. Matrices are
//! stored as the lower triangle of a sparse Hermitian matrix, so
//! hermiticity holds by construction.
//!
//! [`full_spin_oracle`] rebuilds the same generator on the full spin space
//! of the chain (one q-bit per site) from raw raising/lowering action on
//! bit configurations. It shares no assembly code with the sector builders,
//! which makes it an independent cross-check that the sector restriction
//! and the excitation-number symmetry hold.

use std::collections::BTreeMap;
use std::io::Write;

use nalgebra::{DMatrix, DVector};
use num_complex::Complex64;

use crate::basis::{Basis, BasisLabel, Control, ProgramLineSpec, Topology};
use crate::error::{Error, Result};
use crate::fmt_g17;

/// Hop amplitude common to every chain term.
const HOP_AMPLITUDE: f64 = -0.5;

/// Largest chain for which the full spin space is built explicitly.
pub const MAX_ORACLE_SITES: usize = 12;

/// Sparse Hermitian matrix holding its lower triangle; the upper triangle
/// is mirrored by conjugation on access.
#[derive(Debug, Clone, PartialEq)]
pub struct HermitianMatrix {
    dim: usize,
    lower: BTreeMap<(usize, usize), Complex64>,
}

impl HermitianMatrix {
    pub fn zeros(dim: usize) -> Self {
        HermitianMatrix {
            dim,
            lower: BTreeMap::new(),
        }
    }

    pub fn dimension(&self) -> usize {
        self.dim
    }

    /// Number of stored lower-triangle entries.
    pub fn nnz_lower(&self) -> usize {
        self.lower.len()
    }

    /// Add `value` at `(row, col)` and its conjugate at `(col, row)`.
    /// Diagonal contributions must be real.
    pub fn accumulate(&mut self, row: usize, col: usize, value: Complex64) {
        debug_assert!(row < self.dim && col < self.dim);
        debug_assert!(row != col || value.im == 0.0, "diagonal must stay real");
        let (key, value) = if row >= col {
            ((row, col), value)
        } else {
            ((col, row), value.conj())
        };
        let entry = self.lower.entry(key).or_insert(Complex64::new(0.0, 0.0));
        *entry += value;
        if entry.re == 0.0 && entry.im == 0.0 {
            self.lower.remove(&key);
        }
    }

    pub fn entry(&self, row: usize, col: usize) -> Complex64 {
        let stored = if row >= col {
            self.lower.get(&(row, col)).copied()
        } else {
            self.lower.get(&(col, row)).copied().map(|v| v.conj())
        };
        stored.unwrap_or(Complex64::new(0.0, 0.0))
    }

    /// All nonzero entries of the full matrix, sorted by `(row, col)`.
    pub fn entries(&self) -> Vec<(usize, usize, Complex64)> {
        let mut out = Vec::with_capacity(2 * self.lower.len());
        for (&(row, col), &value) in &self.lower {
            out.push((row, col, value));
            if row != col {
                out.push((col, row, value.conj()));
            }
        }
        out.sort_unstable_by_key(|&(row, col, _)| (row, col));
        out
    }

    pub fn to_dense(&self) -> DMatrix<Complex64> {
        let mut dense = DMatrix::from_element(self.dim, self.dim, Complex64::new(0.0, 0.0));
        for (row, col, value) in self.entries() {
            dense[(row, col)] = value;
        }
        dense
    }

    /// Matrix-vector product using only the stored triangle.
    pub fn apply(&self, vector: &DVector<Complex64>) -> Result<DVector<Complex64>> {
        if vector.len() != self.dim {
            return Err(Error::DimensionMismatch {
                left: self.dim,
                right: vector.len(),
            });
        }
        let mut out = DVector::from_element(self.dim, Complex64::new(0.0, 0.0));
        for (&(row, col), &value) in &self.lower {
            out[row] += value * vector[col];
            if row != col {
                out[col] += value.conj() * vector[row];
            }
        }
        Ok(out)
    }

    pub fn scaled(&self, factor: f64) -> Self {
        let lower = self
            .lower
            .iter()
            .map(|(&key, &value)| (key, value * factor))
            .collect();
        HermitianMatrix {
            dim: self.dim,
            lower,
        }
    }

    pub fn sum(&self, other: &Self) -> Result<Self> {
        if self.dim != other.dim {
            return Err(Error::DimensionMismatch {
                left: self.dim,
                right: other.dim,
            });
        }
        let mut out = self.clone();
        for (&(row, col), &value) in &other.lower {
            let entry = out.lower.entry((row, col)).or_insert(Complex64::new(0.0, 0.0));
            *entry += value;
            if entry.re == 0.0 && entry.im == 0.0 {
                out.lower.remove(&(row, col));
            }
        }
        Ok(out)
    }

    /// Write the nonzero entries as `row col re im` lines, sorted by
    /// `(row, col)`, floats carrying 17 significant digits.
    pub fn write_coo<W: Write>(&self, mut writer: W) -> Result<()> {
        for (row, col, value) in self.entries() {
            writeln!(
                writer,
                "{row} {col} {} {}",
                fmt_g17(value.re),
                fmt_g17(value.im)
            )?;
        }
        Ok(())
    }
}

/// Hermitian generator together with the basis enumeration it acts on.
#[derive(Debug, Clone, PartialEq)]
pub struct HermitianOperator {
    basis: Basis,
    matrix: HermitianMatrix,
}

impl HermitianOperator {
    pub fn new(basis: Basis, matrix: HermitianMatrix) -> Result<Self> {
        if matrix.dimension() != basis.dimension() {
            return Err(Error::DimensionMismatch {
                left: basis.dimension(),
                right: matrix.dimension(),
            });
        }
        Ok(HermitianOperator { basis, matrix })
    }

    pub fn basis(&self) -> Basis {
        self.basis
    }

    pub fn dimension(&self) -> usize {
        self.matrix.dimension()
    }

    pub fn matrix(&self) -> &HermitianMatrix {
        &self.matrix
    }

    pub fn entry(&self, row: usize, col: usize) -> Complex64 {
        self.matrix.entry(row, col)
    }

    /// Matrix element `<to| H |from>`.
    pub fn entry_between(&self, to: &BasisLabel, from: &BasisLabel) -> Result<Complex64> {
        Ok(self
            .matrix
            .entry(self.basis.index_of(to)?, self.basis.index_of(from)?))
    }

    pub fn to_dense(&self) -> DMatrix<Complex64> {
        self.matrix.to_dense()
    }

    pub fn apply(&self, vector: &DVector<Complex64>) -> Result<DVector<Complex64>> {
        self.matrix.apply(vector)
    }

    pub fn scaled(&self, factor: f64) -> Self {
        HermitianOperator {
            basis: self.basis,
            matrix: self.matrix.scaled(factor),
        }
    }

    pub fn sum(&self, other: &Self) -> Result<Self> {
        if self.basis != other.basis {
            return Err(Error::BasisMismatch);
        }
        Ok(HermitianOperator {
            basis: self.basis,
            matrix: self.matrix.sum(&other.matrix)?,
        })
    }

    pub fn write_coo<W: Write>(&self, writer: W) -> Result<()> {
        self.matrix.write_coo(writer)
    }
}

/// Add the term `-(1/2) |to_site, ctrl_to> <from_site, ctrl_from| ⊗ A + h.c.`
/// to `matrix`. `control: None` adds the hop once per control value without
/// touching it; `register: None` means the identity instruction.
fn add_hop(
    matrix: &mut HermitianMatrix,
    basis: Basis,
    from_site: usize,
    to_site: usize,
    control: Option<(Control, Control)>,
    register: Option<&DMatrix<Complex64>>,
) {
    let control_pairs: Vec<(usize, usize)> = match (control, basis.has_control()) {
        (Some((from, to)), true) => vec![(from.index(), to.index())],
        (None, true) => vec![(0, 0), (1, 1)],
        (None, false) => vec![(0, 0)],
        (Some(_), false) => unreachable!("control hop on a chain without control"),
    };
    for &(ctrl_from, ctrl_to) in &control_pairs {
        match register {
            None => {
                for r in 0..basis.d_reg() {
                    matrix.accumulate(
                        basis.flat(r, ctrl_to, to_site),
                        basis.flat(r, ctrl_from, from_site),
                        Complex64::new(HOP_AMPLITUDE, 0.0),
                    );
                }
            }
            Some(a) => {
                for r_to in 0..basis.d_reg() {
                    for r_from in 0..basis.d_reg() {
                        let value = a[(r_to, r_from)] * HOP_AMPLITUDE;
                        if value.re == 0.0 && value.im == 0.0 {
                            continue;
                        }
                        matrix.accumulate(
                            basis.flat(r_to, ctrl_to, to_site),
                            basis.flat(r_from, ctrl_from, from_site),
                            value,
                        );
                    }
                }
            }
        }
    }
}

fn expect_topology(spec: &ProgramLineSpec, expected: Topology) -> Result<()> {
    if spec.topology() != expected {
        return Err(Error::TopologyMismatch {
            expected,
            found: spec.topology(),
        });
    }
    Ok(())
}

/// Generator of a free program line: hops `j -> j+1` for `j` in `1..=s-1`,
/// each applying its instruction unitary to the register.
pub fn build_sequential(spec: &ProgramLineSpec) -> Result<HermitianOperator> {
    expect_topology(spec, Topology::Sequential)?;
    let basis = spec.basis();
    let mut matrix = HermitianMatrix::zeros(basis.dimension());
    for j in 1..spec.s() {
        add_hop(&mut matrix, basis, j, j + 1, None, spec.register_unitary(j));
    }
    HermitianOperator::new(basis, matrix)
}

/// Generator of a telomeric line: the program hops, a crossing hop
/// `s -> s+1` that flips the control from plus to minus, and free hops
/// along the telomere. A minus control blocks the crossing, confining the
/// cursor to the program sites.
pub fn build_telomeric(spec: &ProgramLineSpec) -> Result<HermitianOperator> {
    expect_topology(spec, Topology::Telomeric)?;
    let basis = spec.basis();
    let s = spec.s();
    let mut matrix = HermitianMatrix::zeros(basis.dimension());
    for j in 1..s {
        add_hop(&mut matrix, basis, j, j + 1, None, spec.register_unitary(j));
    }
    add_hop(
        &mut matrix,
        basis,
        s,
        s + 1,
        Some((Control::Plus, Control::Minus)),
        None,
    );
    for j in s + 1..s + spec.delta() {
        add_hop(&mut matrix, basis, j, j + 1, None, None);
    }
    HermitianOperator::new(basis, matrix)
}

/// Generator of a double-trap line: two telomere branches behind the last
/// program site. Entering the first branch flips the control plus to minus,
/// entering the second flips minus to plus, so each control component is
/// routed into its own branch and the branches never interconnect.
pub fn build_double_trap(spec: &ProgramLineSpec) -> Result<HermitianOperator> {
    expect_topology(spec, Topology::DoubleTrap)?;
    let basis = spec.basis();
    let (s, delta) = (spec.s(), spec.delta());
    let mut matrix = HermitianMatrix::zeros(basis.dimension());
    for j in 1..s {
        add_hop(&mut matrix, basis, j, j + 1, None, spec.register_unitary(j));
    }
    add_hop(
        &mut matrix,
        basis,
        s,
        s + 1,
        Some((Control::Plus, Control::Minus)),
        None,
    );
    for j in s + 1..s + delta {
        add_hop(&mut matrix, basis, j, j + 1, None, None);
    }
    add_hop(
        &mut matrix,
        basis,
        s,
        s + delta + 1,
        Some((Control::Minus, Control::Plus)),
        None,
    );
    for j in s + delta + 1..s + 2 * delta {
        add_hop(&mut matrix, basis, j, j + 1, None, None);
    }
    HermitianOperator::new(basis, matrix)
}

/// Generator for the line's recorded topology.
pub fn build(spec: &ProgramLineSpec) -> Result<HermitianOperator> {
    match spec.topology() {
        Topology::Sequential => build_sequential(spec),
        Topology::Telomeric => build_telomeric(spec),
        Topology::DoubleTrap => build_double_trap(spec),
    }
}

/// Control-flip operator `|plus><minus| + |minus><plus|`, identity on
/// register and cursor. Scaled by `pi/2` it generates the exchange pulse.
pub fn build_control_flip(basis: Basis) -> Result<HermitianOperator> {
    if !basis.has_control() {
        return Err(Error::NoControl);
    }
    let mut matrix = HermitianMatrix::zeros(basis.dimension());
    for r in 0..basis.d_reg() {
        for site in 1..=basis.n_sites() {
            matrix.accumulate(
                basis.flat(r, Control::Minus.index(), site),
                basis.flat(r, Control::Plus.index(), site),
                Complex64::new(1.0, 0.0),
            );
        }
    }
    HermitianOperator::new(basis, matrix)
}

/// Embedding of the single-excitation sector into the full spin space.
#[derive(Debug, Clone)]
pub struct SectorProjector {
    sector_basis: Basis,
    full_dimension: usize,
    full_indices: Vec<usize>,
}

impl SectorProjector {
    pub fn sector_basis(&self) -> Basis {
        self.sector_basis
    }

    pub fn sector_dimension(&self) -> usize {
        self.full_indices.len()
    }

    pub fn full_dimension(&self) -> usize {
        self.full_dimension
    }

    /// Full-space index of the sector basis vector `sector_index`.
    pub fn full_index_of(&self, sector_index: usize) -> usize {
        self.full_indices[sector_index]
    }

    /// Restriction of a full-space matrix to the sector, entry by entry.
    pub fn restrict(&self, full: &HermitianMatrix) -> Result<HermitianMatrix> {
        if full.dimension() != self.full_dimension {
            return Err(Error::DimensionMismatch {
                left: self.full_dimension,
                right: full.dimension(),
            });
        }
        let dim = self.full_indices.len();
        let mut out = HermitianMatrix::zeros(dim);
        for row in 0..dim {
            for col in 0..=row {
                let value = full.entry(self.full_indices[row], self.full_indices[col]);
                if value.re != 0.0 || value.im != 0.0 {
                    out.accumulate(row, col, value);
                }
            }
        }
        Ok(out)
    }
}

/// The same generator built on the full spin space of the chain, with the
/// excitation-number diagonal and the sector embedding needed to check the
/// single-excitation builders against it.
#[derive(Debug, Clone)]
pub struct FullSpinOracle {
    hamiltonian: HermitianMatrix,
    excitation_number: Vec<f64>,
    projector: SectorProjector,
}

impl FullSpinOracle {
    pub fn hamiltonian(&self) -> &HermitianMatrix {
        &self.hamiltonian
    }

    /// Diagonal of the chain excitation-count operator, full-space indexed.
    pub fn excitation_number(&self) -> &[f64] {
        &self.excitation_number
    }

    pub fn projector(&self) -> &SectorProjector {
        &self.projector
    }

    /// `max |H[i,j] * (n_j - n_i)|`: the largest entry of the commutator
    /// between the generator and the excitation count. Zero exactly when
    /// every hop conserves the number of excited sites.
    pub fn excitation_commutator_max(&self) -> f64 {
        let mut max = 0.0_f64;
        for (row, col, value) in self.hamiltonian.entries() {
            let gap = self.excitation_number[col] - self.excitation_number[row];
            max = max.max((value * gap).norm());
        }
        max
    }

    /// Restriction of the full generator to the single-excitation sector.
    pub fn restricted(&self) -> HermitianMatrix {
        self.projector
            .restrict(&self.hamiltonian)
            .expect("projector built for this matrix")
    }
}

/// Build the generator on the full spin space `register ⊗ control ⊗ (2^sites)`
/// by applying raising and lowering operators to every bit configuration.
/// Limited to [`MAX_ORACLE_SITES`] sites.
pub fn full_spin_oracle(spec: &ProgramLineSpec) -> Result<FullSpinOracle> {
    let n_sites = spec.n_sites();
    if n_sites > MAX_ORACLE_SITES {
        return Err(Error::SpaceTooLarge {
            n_sites,
            max: MAX_ORACLE_SITES,
        });
    }
    let d_reg = spec.d_reg();
    let n_control = if spec.has_control() { 2 } else { 1 };
    let n_configs = 1usize << n_sites;
    let full_dimension = d_reg * n_control * n_configs;
    let full_index =
        |reg: usize, ctrl: usize, config: usize| reg * (n_control * n_configs) + ctrl * n_configs + config;

    // Directed hops of this topology: (from site, to site, control action).
    // Re-derived here rather than shared with the sector builders so the
    // two constructions stay independent.
    type DirectedHop = (usize, usize, Option<(usize, usize)>);
    let s = spec.s();
    let delta = spec.delta();
    let mut hops: Vec<DirectedHop> = Vec::new();
    for j in 1..s {
        hops.push((j, j + 1, None));
    }
    match spec.topology() {
        Topology::Sequential => {}
        Topology::Telomeric => {
            hops.push((s, s + 1, Some((0, 1))));
            for j in s + 1..s + delta {
                hops.push((j, j + 1, None));
            }
        }
        Topology::DoubleTrap => {
            hops.push((s, s + 1, Some((0, 1))));
            for j in s + 1..s + delta {
                hops.push((j, j + 1, None));
            }
            hops.push((s, s + delta + 1, Some((1, 0))));
            for j in s + delta + 1..s + 2 * delta {
                hops.push((j, j + 1, None));
            }
        }
    }

    let mut hamiltonian = HermitianMatrix::zeros(full_dimension);
    for &(from_site, to_site, control) in &hops {
        let from_bit = 1usize << (from_site - 1);
        let to_bit = 1usize << (to_site - 1);
        let register = if from_site < s {
            spec.register_unitary(from_site)
        } else {
            None
        };
        for config in 0..n_configs {
            // tau_minus(from) tau_plus(to): excitation present at the
            // source, absent at the destination.
            if config & from_bit == 0 || config & to_bit != 0 {
                continue;
            }
            let flipped = (config & !from_bit) | to_bit;
            let control_pairs: &[(usize, usize)] = match control {
                Some(ref pair) => std::slice::from_ref(pair),
                None => {
                    if n_control == 2 {
                        &[(0, 0), (1, 1)]
                    } else {
                        &[(0, 0)]
                    }
                }
            };
            for &(ctrl_from, ctrl_to) in control_pairs {
                match register {
                    None => {
                        for r in 0..d_reg {
                            hamiltonian.accumulate(
                                full_index(r, ctrl_to, flipped),
                                full_index(r, ctrl_from, config),
                                Complex64::new(HOP_AMPLITUDE, 0.0),
                            );
                        }
                    }
                    Some(a) => {
                        for r_to in 0..d_reg {
                            for r_from in 0..d_reg {
                                let value = a[(r_to, r_from)] * HOP_AMPLITUDE;
                                if value.re == 0.0 && value.im == 0.0 {
                                    continue;
                                }
                                hamiltonian.accumulate(
                                    full_index(r_to, ctrl_to, flipped),
                                    full_index(r_from, ctrl_from, config),
                                    value,
                                );
                            }
                        }
                    }
                }
            }
        }
    }

    let mut excitation_number = vec![0.0; full_dimension];
    for reg in 0..d_reg {
        for ctrl in 0..n_control {
            for config in 0..n_configs {
                excitation_number[full_index(reg, ctrl, config)] = config.count_ones() as f64;
            }
        }
    }

    let sector_basis = spec.basis();
    let full_indices = (0..sector_basis.dimension())
        .map(|i| {
            let label = sector_basis.label_of(i).expect("index in range");
            let ctrl = label.control.map_or(0, Control::index);
            full_index(label.register_index, ctrl, 1usize << (label.site - 1))
        })
        .collect();

    Ok(FullSpinOracle {
        hamiltonian,
        excitation_number,
        projector: SectorProjector {
            sector_basis,
            full_dimension,
            full_indices,
        },
    })
}
