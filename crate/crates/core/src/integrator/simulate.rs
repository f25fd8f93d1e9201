//! Heun predictor–corrector in ζ around RK4 propagation of the atoms in τ.

use ndarray::Array2;
use num_complex::Complex64;

use super::plan::{InitialAtoms, SimulationPlan};
use super::state::{AtomGrid, AtomState, FieldGrid};
use crate::error::{Error, Result};
use crate::medium::MediumParams;

type Amps = [Complex64; 3];

const HALF_I: Complex64 = Complex64::new(0.0, 0.5);

/// One field column: (Ω_a, Ω_b) at every τ node.
#[derive(Clone)]
struct Column {
    a: Vec<Complex64>,
    b: Vec<Complex64>,
}

struct Stepper<'a> {
    medium: &'a MediumParams,
    initial: &'a InitialAtoms,
    dtau: f64,
    scale: f64,
    max_change: f64,
    max_bisections: u32,
}

pub fn simulate(plan: &SimulationPlan) -> Result<(FieldGrid, AtomGrid)> {
    let taus = plan.taus();
    let zetas = plan.zetas();
    let (nz, nt) = (zetas.len(), taus.len());
    let dtau = taus[1] - taus[0];
    let dzeta = zetas[1] - zetas[0];

    let mut boundary = Column {
        a: Vec::with_capacity(nt),
        b: Vec::with_capacity(nt),
    };
    for &tau in &taus {
        let (a, b) = plan.boundary.eval(tau)?;
        boundary.a.push(a);
        boundary.b.push(b);
    }
    for (j, (a, b)) in boundary.a.iter().zip(&boundary.b).enumerate() {
        if !(a.re.is_finite() && a.im.is_finite() && b.re.is_finite() && b.im.is_finite()) {
            return Err(Error::Numeric {
                zeta_index: 0,
                tau_index: j,
            });
        }
    }
    let scale = boundary
        .a
        .iter()
        .chain(&boundary.b)
        .map(|z| z.norm())
        .fold(0.0, f64::max);

    let stepper = Stepper {
        medium: &plan.medium,
        initial: &plan.initial_atoms,
        dtau,
        scale,
        max_change: plan.controls.max_step_change,
        max_bisections: plan.controls.max_bisections,
    };
    let limit = plan.controls.divergence_factor * scale;

    let zero = Complex64::new(0.0, 0.0);
    let mut omega_a = Array2::from_elem((nz, nt), zero);
    let mut omega_b = Array2::from_elem((nz, nt), zero);
    let mut psi1 = Array2::from_elem((nz, nt), zero);
    let mut psi2 = Array2::from_elem((nz, nt), zero);
    let mut psi3 = Array2::from_elem((nz, nt), zero);

    let mut column = boundary;
    let mut atoms = stepper.propagate(&column, stepper.initial.eval(0.0)?);
    store(0, &column, &atoms, &mut omega_a, &mut omega_b, &mut psi1, &mut psi2, &mut psi3);

    for i in 1..nz {
        let (c, at) = stepper.advance(zetas[i - 1], dzeta, &column, &atoms, 0)?;
        column = c;
        atoms = at;
        for (j, state) in atoms.iter().enumerate() {
            let (a, b) = (column.a[j], column.b[j]);
            let finite = a.re.is_finite() && a.im.is_finite() && b.re.is_finite() && b.im.is_finite();
            if !finite || state.iter().any(|z| !(z.re.is_finite() && z.im.is_finite())) {
                return Err(Error::Numeric {
                    zeta_index: i,
                    tau_index: j,
                });
            }
            let magnitude = a.norm().max(b.norm());
            if scale > 0.0 && magnitude > limit {
                return Err(Error::Diverged {
                    zeta_index: i,
                    tau_index: j,
                    magnitude,
                    limit,
                });
            }
        }
        store(i, &column, &atoms, &mut omega_a, &mut omega_b, &mut psi1, &mut psi2, &mut psi3);
    }

    Ok((
        FieldGrid {
            zetas,
            taus,
            omega_a,
            omega_b,
        },
        AtomGrid { psi1, psi2, psi3 },
    ))
}

#[allow(clippy::too_many_arguments)]
fn store(
    i: usize,
    column: &Column,
    atoms: &[Amps],
    omega_a: &mut Array2<Complex64>,
    omega_b: &mut Array2<Complex64>,
    psi1: &mut Array2<Complex64>,
    psi2: &mut Array2<Complex64>,
    psi3: &mut Array2<Complex64>,
) {
    for (j, s) in atoms.iter().enumerate() {
        omega_a[[i, j]] = column.a[j];
        omega_b[[i, j]] = column.b[j];
        psi1[[i, j]] = s[0];
        psi2[[i, j]] = s[1];
        psi3[[i, j]] = s[2];
    }
}

impl Stepper<'_> {
    fn sources(&self, atoms: &[Amps]) -> Column {
        let coupling = Complex64::new(0.0, self.medium.nu0());
        Column {
            a: atoms.iter().map(|s| coupling * s[2] * s[0].conj()).collect(),
            b: atoms.iter().map(|s| coupling * s[2] * s[1].conj()).collect(),
        }
    }

    /// Advances the field column from `zeta` to `zeta + dz`, bisecting when the
    /// change is too large.
    fn advance(
        &self,
        zeta: f64,
        dz: f64,
        column: &Column,
        atoms: &[Amps],
        depth: u32,
    ) -> Result<(Column, Vec<Amps>)> {
        let s0 = self.sources(atoms);
        let predicted = Column {
            a: column.a.iter().zip(&s0.a).map(|(f, s)| f + dz * s).collect(),
            b: column.b.iter().zip(&s0.b).map(|(f, s)| f + dz * s).collect(),
        };
        let next_initial = self.initial.eval(zeta + dz)?;
        let s1 = self.sources(&self.propagate(&predicted, next_initial));
        let corrected = Column {
            a: (0..column.a.len()).map(|j| column.a[j] + 0.5 * dz * (s0.a[j] + s1.a[j])).collect(),
            b: (0..column.b.len()).map(|j| column.b[j] + 0.5 * dz * (s0.b[j] + s1.b[j])).collect(),
        };

        if self.scale > 0.0 && depth < self.max_bisections {
            let change = column
                .a
                .iter()
                .zip(&corrected.a)
                .chain(column.b.iter().zip(&corrected.b))
                .map(|(old, new)| (new - old).norm())
                .fold(0.0, f64::max);
            if change > self.max_change * self.scale {
                let (mid_col, mid_atoms) = self.advance(zeta, 0.5 * dz, column, atoms, depth + 1)?;
                return self.advance(zeta + 0.5 * dz, 0.5 * dz, &mid_col, &mid_atoms, depth + 1);
            }
        }

        let atoms = self.propagate(&corrected, next_initial);
        Ok((corrected, atoms))
    }

    /// RK4 in τ for the atoms of one ζ column; fields between nodes come from
    /// four-point cubic interpolation.
    fn propagate(&self, column: &Column, initial: AtomState) -> Vec<Amps> {
        let n = column.a.len();
        let h = self.dtau;
        let decay = Complex64::new(0.5 * self.medium.gamma(), self.medium.delta());
        let mid_a = midpoints(&column.a);
        let mid_b = midpoints(&column.b);

        let mut out = Vec::with_capacity(n);
        let mut y = initial.to_array();
        out.push(y);
        for j in 0..n - 1 {
            let (a0, b0) = (column.a[j], column.b[j]);
            let (am, bm) = (mid_a[j], mid_b[j]);
            let (a1, b1) = (column.a[j + 1], column.b[j + 1]);
            let k1 = rhs(&y, a0, b0, decay);
            let k2 = rhs(&axpy(&y, 0.5 * h, &k1), am, bm, decay);
            let k3 = rhs(&axpy(&y, 0.5 * h, &k2), am, bm, decay);
            let k4 = rhs(&axpy(&y, h, &k3), a1, b1, decay);
            for c in 0..3 {
                y[c] += h / 6.0 * (k1[c] + 2.0 * k2[c] + 2.0 * k3[c] + k4[c]);
            }
            out.push(y);
        }
        out
    }
}

#[inline]
fn rhs(s: &Amps, oa: Complex64, ob: Complex64, decay: Complex64) -> Amps {
    [
        HALF_I * oa.conj() * s[2],
        HALF_I * ob.conj() * s[2],
        -decay * s[2] + HALF_I * (oa * s[0] + ob * s[1]),
    ]
}

#[inline]
fn axpy(y: &Amps, h: f64, k: &Amps) -> Amps {
    [y[0] + h * k[0], y[1] + h * k[1], y[2] + h * k[2]]
}

/// Values halfway between consecutive nodes from the cubic through the four
/// nearest nodes.
fn midpoints(f: &[Complex64]) -> Vec<Complex64> {
    let n = f.len();
    (0..n - 1)
        .map(|j| {
            if j == 0 {
                0.3125 * f[0] + 0.9375 * f[1] - 0.3125 * f[2] + 0.0625 * f[3]
            } else if j == n - 2 {
                0.3125 * f[n - 1] + 0.9375 * f[n - 2] - 0.3125 * f[n - 3] + 0.0625 * f[n - 4]
            } else {
                (-f[j - 1] + 9.0 * f[j] + 9.0 * f[j + 1] - f[j + 2]) / 16.0
            }
        })
        .collect()
}
