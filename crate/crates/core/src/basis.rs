//! Computational basis for cursor dynamics on a program line.
//!
//! A state lives in `register ⊗ control ⊗ cursor`, where the cursor factor is
//! the single-excitation sector of the spin chain: exactly one site carries
//! the excitation, so one basis label per site. Plain sequential chains have
//! no control q-bit and the control factor is dropped.

use std::ops::RangeInclusive;

use nalgebra::{DMatrix, DVector};
use num_complex::Complex64;

use crate::error::{Error, Result};

/// Tolerance on the norm of constructed and evolved states.
pub const NORM_TOL: f64 = 1e-10;
/// Tolerance accepted on user-supplied vectors before they are rejected.
pub const INPUT_NORM_TOL: f64 = 1e-8;
/// Tolerance on `max|A†A - I|` for register unitaries.
pub const UNITARY_TOL: f64 = 1e-12;

/// Value of the control q-bit in the x basis.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum Control {
    Plus,
    Minus,
}

impl Control {
    pub(crate) fn index(self) -> usize {
        match self {
            Control::Plus => 0,
            Control::Minus => 1,
        }
    }

    /// The other control value.
    pub fn flipped(self) -> Control {
        match self {
            Control::Plus => Control::Minus,
            Control::Minus => Control::Plus,
        }
    }
}

/// Chain layout of a program line.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Topology {
    /// Free chain of `s` sites, no control q-bit.
    Sequential,
    /// `s` program sites plus a telomere of `delta` sites entered by
    /// flipping the control from plus to minus.
    Telomeric,
    /// `s` program sites plus two telomere branches of `delta` sites each;
    /// the first branch opens on plus, the second on minus.
    DoubleTrap,
}

/// Initial value of the control q-bit.
#[derive(Debug, Clone, Copy, PartialEq)]
pub enum ControlInit {
    Plus,
    Minus,
    /// `a|plus> + b|minus>`; the pair must be normalized within
    /// [`INPUT_NORM_TOL`].
    Superposition(Complex64, Complex64),
    /// For topologies without a control q-bit.
    None,
}

/// Shape of a program line: chain topology, telomere length, and the
/// register acted on by the per-site instructions.
#[derive(Debug, Clone)]
pub struct ProgramLineSpec {
    s: usize,
    delta: usize,
    topology: Topology,
    d_reg: usize,
    /// Instruction unitaries `A_1 .. A_{s-1}`; `None` means every
    /// instruction is the identity (pure clocking).
    register_unitaries: Option<Vec<DMatrix<Complex64>>>,
}

impl ProgramLineSpec {
    /// Free chain of `s` sites.
    pub fn sequential(s: usize) -> Result<Self> {
        if s < 1 {
            return Err(Error::InvalidChainLength { s });
        }
        Ok(ProgramLineSpec {
            s,
            delta: 0,
            topology: Topology::Sequential,
            d_reg: 1,
            register_unitaries: None,
        })
    }

    /// Chain of `s` program sites with a single telomere of `delta` sites.
    pub fn telomeric(s: usize, delta: usize) -> Result<Self> {
        if s < 1 {
            return Err(Error::InvalidChainLength { s });
        }
        if delta < 1 {
            return Err(Error::MissingTelomere {
                topology: Topology::Telomeric,
            });
        }
        Ok(ProgramLineSpec {
            s,
            delta,
            topology: Topology::Telomeric,
            d_reg: 1,
            register_unitaries: None,
        })
    }

    /// Chain of `s` program sites with two telomere branches of `delta`
    /// sites each.
    pub fn double_trap(s: usize, delta: usize) -> Result<Self> {
        if s < 1 {
            return Err(Error::InvalidChainLength { s });
        }
        if delta < 1 {
            return Err(Error::MissingTelomere {
                topology: Topology::DoubleTrap,
            });
        }
        Ok(ProgramLineSpec {
            s,
            delta,
            topology: Topology::DoubleTrap,
            d_reg: 1,
            register_unitaries: None,
        })
    }

    /// Attach a register of dimension `d_reg` with identity instructions.
    pub fn with_register_dimension(mut self, d_reg: usize) -> Result<Self> {
        if d_reg < 1 {
            return Err(Error::InvalidRegisterDimension);
        }
        self.d_reg = d_reg;
        self.register_unitaries = None;
        Ok(self)
    }

    /// Attach a register of dimension `d_reg` and the instruction unitaries
    /// `A_1 .. A_{s-1}` applied on the program hops. Each must be a
    /// `d_reg` x `d_reg` unitary within [`UNITARY_TOL`].
    pub fn with_register(
        mut self,
        d_reg: usize,
        unitaries: Vec<DMatrix<Complex64>>,
    ) -> Result<Self> {
        if d_reg < 1 {
            return Err(Error::InvalidRegisterDimension);
        }
        let expected = self.s - 1;
        if unitaries.len() != expected {
            return Err(Error::UnitaryCount {
                expected,
                found: unitaries.len(),
            });
        }
        for (i, a) in unitaries.iter().enumerate() {
            if a.nrows() != d_reg || a.ncols() != d_reg {
                return Err(Error::UnitaryShape {
                    index: i + 1,
                    rows: a.nrows(),
                    cols: a.ncols(),
                    d_reg,
                });
            }
            let residual = unitarity_residual(a);
            if residual > UNITARY_TOL {
                return Err(Error::NotUnitary {
                    index: i + 1,
                    residual,
                });
            }
        }
        self.d_reg = d_reg;
        self.register_unitaries = Some(unitaries);
        Ok(self)
    }

    pub fn s(&self) -> usize {
        self.s
    }

    pub fn delta(&self) -> usize {
        self.delta
    }

    pub fn topology(&self) -> Topology {
        self.topology
    }

    pub fn d_reg(&self) -> usize {
        self.d_reg
    }

    /// Total number of chain sites, telomeres included.
    pub fn n_sites(&self) -> usize {
        match self.topology {
            Topology::Sequential => self.s,
            Topology::Telomeric => self.s + self.delta,
            Topology::DoubleTrap => self.s + 2 * self.delta,
        }
    }

    pub fn has_control(&self) -> bool {
        self.topology != Topology::Sequential
    }

    /// Basis of the single-excitation sector for this line.
    pub fn basis(&self) -> Basis {
        Basis {
            d_reg: self.d_reg,
            n_control: if self.has_control() { 2 } else { 1 },
            n_sites: self.n_sites(),
        }
    }

    /// Instruction unitary on the hop `j -> j+1` for `j` in `1..=s-1`;
    /// `None` means identity.
    pub fn register_unitary(&self, j: usize) -> Option<&DMatrix<Complex64>> {
        self.register_unitaries.as_ref().map(|u| &u[j - 1])
    }
}

fn unitarity_residual(a: &DMatrix<Complex64>) -> f64 {
    let product = a.adjoint() * a;
    let mut residual = 0.0_f64;
    for i in 0..product.nrows() {
        for j in 0..product.ncols() {
            let expected = if i == j {
                Complex64::new(1.0, 0.0)
            } else {
                Complex64::new(0.0, 0.0)
            };
            residual = residual.max((product[(i, j)] - expected).norm());
        }
    }
    residual
}

/// Enumeration of `register ⊗ control ⊗ site` labels as a flat index range.
///
/// The flat index is `reg * (n_control * n_sites) + ctrl * n_sites + (site - 1)`,
/// with plus before minus and sites counted from 1.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub struct Basis {
    d_reg: usize,
    n_control: usize,
    n_sites: usize,
}

/// One basis vector: register index, control value (when present), and the
/// chain site holding the excitation.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub struct BasisLabel {
    pub register_index: usize,
    pub control: Option<Control>,
    pub site: usize,
}

impl BasisLabel {
    /// Label with a trivial register and no control.
    pub fn site(site: usize) -> Self {
        BasisLabel {
            register_index: 0,
            control: None,
            site,
        }
    }

    /// Label with a trivial register.
    pub fn control_site(control: Control, site: usize) -> Self {
        BasisLabel {
            register_index: 0,
            control: Some(control),
            site,
        }
    }
}

impl Basis {
    pub fn d_reg(&self) -> usize {
        self.d_reg
    }

    pub fn n_sites(&self) -> usize {
        self.n_sites
    }

    pub fn has_control(&self) -> bool {
        self.n_control == 2
    }

    pub fn dimension(&self) -> usize {
        self.d_reg * self.n_control * self.n_sites
    }

    pub(crate) fn flat(&self, register_index: usize, control_index: usize, site: usize) -> usize {
        register_index * (self.n_control * self.n_sites) + control_index * self.n_sites + site - 1
    }

    /// Flat index of a label; errors if the label does not fit this basis.
    pub fn index_of(&self, label: &BasisLabel) -> Result<usize> {
        if label.register_index >= self.d_reg || label.site < 1 || label.site > self.n_sites {
            return Err(Error::LabelOutOfRange {
                register_index: label.register_index,
                site: label.site,
            });
        }
        let control_index = match (self.has_control(), label.control) {
            (true, Some(c)) => c.index(),
            (false, None) => 0,
            (has_control, _) => return Err(Error::ControlMismatch { has_control }),
        };
        Ok(self.flat(label.register_index, control_index, label.site))
    }

    /// Label of a flat index; errors if the index is out of range.
    pub fn label_of(&self, index: usize) -> Result<BasisLabel> {
        if index >= self.dimension() {
            return Err(Error::LabelOutOfRange {
                register_index: index / (self.n_control * self.n_sites),
                site: index % self.n_sites + 1,
            });
        }
        let site = index % self.n_sites + 1;
        let rest = index / self.n_sites;
        let control = if self.has_control() {
            Some(if rest.is_multiple_of(2) {
                Control::Plus
            } else {
                Control::Minus
            })
        } else {
            None
        };
        Ok(BasisLabel {
            register_index: rest / self.n_control,
            control,
            site,
        })
    }

    /// All labels in flat-index order.
    pub fn labels(&self) -> impl Iterator<Item = BasisLabel> + '_ {
        (0..self.dimension()).map(|i| self.label_of(i).expect("index in range"))
    }
}

/// Normalized state over a [`Basis`].
#[derive(Debug, Clone, PartialEq)]
pub struct CursorState {
    basis: Basis,
    amplitudes: DVector<Complex64>,
}

impl CursorState {
    /// Wrap an amplitude vector; it must match the basis dimension and be
    /// normalized within [`NORM_TOL`].
    pub fn new(basis: Basis, amplitudes: DVector<Complex64>) -> Result<Self> {
        if amplitudes.len() != basis.dimension() {
            return Err(Error::RegisterDimension {
                expected: basis.dimension(),
                found: amplitudes.len(),
            });
        }
        let norm = amplitudes.norm();
        if (norm - 1.0).abs() > NORM_TOL {
            return Err(Error::NotNormalized {
                norm,
                tol: NORM_TOL,
            });
        }
        Ok(CursorState { basis, amplitudes })
    }

    /// Product state `register0 ⊗ control0 ⊗ |site 1>`. Inputs are accepted
    /// within [`INPUT_NORM_TOL`] of unit norm and the product is normalized
    /// exactly.
    pub fn initial(
        spec: &ProgramLineSpec,
        register0: &DVector<Complex64>,
        control0: ControlInit,
    ) -> Result<Self> {
        let basis = spec.basis();
        if register0.len() != spec.d_reg() {
            return Err(Error::RegisterDimension {
                expected: spec.d_reg(),
                found: register0.len(),
            });
        }
        let reg_norm = register0.norm();
        if (reg_norm - 1.0).abs() > INPUT_NORM_TOL {
            return Err(Error::NotNormalized {
                norm: reg_norm,
                tol: INPUT_NORM_TOL,
            });
        }
        let control_amplitudes: Vec<Complex64> = match (basis.has_control(), control0) {
            (false, ControlInit::None) => vec![Complex64::new(1.0, 0.0)],
            (true, ControlInit::Plus) => {
                vec![Complex64::new(1.0, 0.0), Complex64::new(0.0, 0.0)]
            }
            (true, ControlInit::Minus) => {
                vec![Complex64::new(0.0, 0.0), Complex64::new(1.0, 0.0)]
            }
            (true, ControlInit::Superposition(a, b)) => {
                let norm = (a.norm_sqr() + b.norm_sqr()).sqrt();
                if (norm - 1.0).abs() > INPUT_NORM_TOL {
                    return Err(Error::NotNormalized {
                        norm,
                        tol: INPUT_NORM_TOL,
                    });
                }
                vec![a, b]
            }
            (has_control, _) => return Err(Error::ControlMismatch { has_control }),
        };
        let mut amplitudes = DVector::zeros(basis.dimension());
        for (r, reg_amp) in register0.iter().enumerate() {
            for (c, ctrl_amp) in control_amplitudes.iter().enumerate() {
                amplitudes[basis.flat(r, c, 1)] = reg_amp * ctrl_amp;
            }
        }
        let norm = amplitudes.norm();
        amplitudes /= Complex64::new(norm, 0.0);
        CursorState::new(basis, amplitudes)
    }

    pub fn basis(&self) -> Basis {
        self.basis
    }

    pub fn amplitudes(&self) -> &DVector<Complex64> {
        &self.amplitudes
    }

    pub fn norm(&self) -> f64 {
        self.amplitudes.norm()
    }

    /// Amplitude on one basis label.
    pub fn amplitude(&self, label: &BasisLabel) -> Result<Complex64> {
        Ok(self.amplitudes[self.basis.index_of(label)?])
    }

    /// Total probability of finding the excitation on `sites`, optionally
    /// restricted to one control value. Sums `|amplitude|^2` over all
    /// matching labels, register traced out.
    pub fn probability(
        &self,
        sites: RangeInclusive<usize>,
        control: Option<Control>,
    ) -> Result<f64> {
        let (start, end) = (*sites.start(), *sites.end());
        if start < 1 || end > self.basis.n_sites() || start > end {
            return Err(Error::InvalidSiteRange {
                start,
                end,
                n_sites: self.basis.n_sites(),
            });
        }
        if control.is_some() && !self.basis.has_control() {
            return Err(Error::NoControl);
        }
        let control_indices: Vec<usize> = match control {
            Some(c) => vec![c.index()],
            None => (0..self.basis.n_control).collect(),
        };
        let mut total = 0.0;
        for r in 0..self.basis.d_reg() {
            for &c in &control_indices {
                for site in start..=end {
                    total += self.amplitudes[self.basis.flat(r, c, site)].norm_sqr();
                }
            }
        }
        Ok(total)
    }
}
