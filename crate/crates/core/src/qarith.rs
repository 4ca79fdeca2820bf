//! Reversible arithmetic in the Fourier basis.
//!
//! Every adder here is a Draper-style construction: transform the target
//! register, apply one layer of phase rotations, transform back. Internally the
//! transform is the swap-free QFT, under which wire `r_j` of a register holding
//! `y` carries the phase `2π·y / 2^(j+1)`; adding `c` is then a rotation of
//! `2π·c / 2^(j+1)` on each `r_j`. The public [`qft`] appends the bit-reversal
//! swaps so that it equals the textbook DFT.

use std::f64::consts::{PI, TAU};

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::statevector::{Circuit, GateOp};

/// Rotations smaller than this are dropped (they are multiples of 2π).
const ANGLE_EPS: f64 = 1e-12;

/// Ordered wires of an unsigned integer register, least-significant first.
#[derive(Clone, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub struct RegisterSpan {
    wires: Vec<usize>,
}

impl RegisterSpan {
    pub fn new(wires: Vec<usize>) -> Result<Self> {
        if wires.is_empty() {
            return Err(Error::Wiring("register needs at least one wire".into()));
        }
        let mut sorted = wires.clone();
        sorted.sort_unstable();
        if sorted.windows(2).any(|p| p[0] == p[1]) {
            return Err(Error::Wiring(format!("register wires not distinct: {wires:?}")));
        }
        Ok(RegisterSpan { wires })
    }

    /// `width` consecutive wires starting at `start`.
    pub fn contiguous(start: usize, width: usize) -> Self {
        assert!(width > 0, "register needs at least one wire");
        RegisterSpan {
            wires: (start..start + width).collect(),
        }
    }

    pub fn width(&self) -> usize {
        self.wires.len()
    }

    pub fn wires(&self) -> &[usize] {
        &self.wires
    }

    pub fn wire(&self, bit: usize) -> usize {
        self.wires[bit]
    }

    pub fn msb(&self) -> usize {
        *self.wires.last().expect("non-empty register")
    }

    /// Number of distinct values the register can hold.
    pub fn capacity(&self) -> usize {
        1 << self.width()
    }

    /// This register with `wire` appended as a new most-significant bit.
    pub fn with_high_wire(&self, wire: usize) -> Result<Self> {
        let mut wires = self.wires.clone();
        wires.push(wire);
        RegisterSpan::new(wires)
    }

    /// The lowest `width` wires.
    pub fn low(&self, width: usize) -> RegisterSpan {
        RegisterSpan {
            wires: self.wires[..width].to_vec(),
        }
    }

    pub fn overlaps(&self, other: &RegisterSpan) -> bool {
        self.wires.iter().any(|w| other.wires.contains(w))
    }

    pub fn contains(&self, wire: usize) -> bool {
        self.wires.contains(&wire)
    }

    /// Value the register holds in basis state `index`.
    pub fn read(&self, index: usize) -> usize {
        self.wires
            .iter()
            .enumerate()
            .fold(0, |v, (j, &w)| v | (((index >> w) & 1) << j))
    }

    /// `index` with this register overwritten by `value` (mod capacity).
    pub fn write(&self, index: usize, value: usize) -> usize {
        self.wires.iter().enumerate().fold(index, |i, (j, &w)| {
            (i & !(1 << w)) | (((value >> j) & 1) << w)
        })
    }

    fn max_wire(&self) -> usize {
        *self.wires.iter().max().expect("non-empty register")
    }
}

/// Whether a constant is added or subtracted.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub enum Direction {
    Add,
    Subtract,
}

impl Direction {
    fn sign(self) -> f64 {
        match self {
            Direction::Add => 1.0,
            Direction::Subtract => -1.0,
        }
    }
}

fn circuit_for(regs: &[&RegisterSpan], extra: &[usize]) -> Circuit {
    let top = regs
        .iter()
        .map(|r| r.max_wire())
        .chain(extra.iter().copied())
        .max()
        .unwrap_or(0);
    Circuit::new(top + 1)
}

fn reduce_angle(angle: f64) -> Option<f64> {
    let a = angle.rem_euclid(TAU);
    if a < ANGLE_EPS || TAU - a < ANGLE_EPS {
        None
    } else {
        Some(a)
    }
}

fn disjoint(what: &str, a: &[usize], b: &[usize]) -> Result<()> {
    if let Some(w) = a.iter().find(|w| b.contains(w)) {
        return Err(Error::Wiring(format!("{what}: wire {w} used twice")));
    }
    Ok(())
}

/// Swap-free QFT on `reg`.
pub(crate) fn push_qft_core(c: &mut Circuit, reg: &RegisterSpan) -> Result<()> {
    for j in (0..reg.width()).rev() {
        c.push(GateOp::h(reg.wire(j)))?;
        for l in (0..j).rev() {
            let angle = PI / (1u64 << (j - l)) as f64;
            c.push(GateOp::rotation(reg.wire(j), angle).controlled_by(&[reg.wire(l)]))?;
        }
    }
    Ok(())
}

/// Inverse of [`push_qft_core`].
pub(crate) fn push_iqft_core(c: &mut Circuit, reg: &RegisterSpan) -> Result<()> {
    for j in 0..reg.width() {
        for l in 0..j {
            let angle = -PI / (1u64 << (j - l)) as f64;
            c.push(GateOp::rotation(reg.wire(j), angle).controlled_by(&[reg.wire(l)]))?;
        }
        c.push(GateOp::h(reg.wire(j)))?;
    }
    Ok(())
}

/// Rotation layer adding `sign·value` to a register in the swap-free Fourier
/// basis, conditioned on `controls`.
pub(crate) fn push_constant_phases(
    c: &mut Circuit,
    reg: &RegisterSpan,
    value: u64,
    sign: f64,
    controls: &[usize],
    anti: &[usize],
) -> Result<()> {
    for j in 0..reg.width() {
        let modulus = 1u64 << (j + 1);
        let v = value % modulus;
        if let Some(a) = reduce_angle(sign * TAU * v as f64 / modulus as f64) {
            c.push(
                GateOp::rotation(reg.wire(j), a)
                    .controlled_by(controls)
                    .anti_controlled_by(anti),
            )?;
        }
    }
    Ok(())
}

/// Rotation layer adding `sign·src` to `dst` in the swap-free Fourier basis.
/// Source bits `l > j` contribute whole turns to `dst` wire `j` and are skipped.
pub(crate) fn push_register_phases(
    c: &mut Circuit,
    src: &RegisterSpan,
    dst: &RegisterSpan,
    sign: f64,
) -> Result<()> {
    for j in 0..dst.width() {
        for l in 0..src.width().min(j + 1) {
            let angle = sign * TAU / (1u64 << (j + 1 - l)) as f64;
            if let Some(a) = reduce_angle(angle) {
                c.push(GateOp::rotation(dst.wire(j), a).controlled_by(&[src.wire(l)]))?;
            }
        }
    }
    Ok(())
}

/// Wraps `body` between the swap-free QFT of `reg` and its inverse.
pub(crate) fn push_fourier_block<F>(c: &mut Circuit, reg: &RegisterSpan, body: F) -> Result<()>
where
    F: FnOnce(&mut Circuit) -> Result<()>,
{
    push_qft_core(c, reg)?;
    body(c)?;
    push_iqft_core(c, reg)
}

/// Quantum Fourier transform `|y⟩ → 2^(-m/2) Σ_z e^{2πi·y·z/2^m} |z⟩`.
pub fn qft(reg: &RegisterSpan) -> Circuit {
    let mut c = circuit_for(&[reg], &[]);
    push_qft_core(&mut c, reg).expect("register wires are distinct");
    let m = reg.width();
    for j in 0..m / 2 {
        c.push(GateOp::swap(reg.wire(j), reg.wire(m - 1 - j)))
            .expect("register wires are distinct");
    }
    c
}

/// `|y⟩ → |y + 1 mod 2^m⟩`.
pub fn plus_one(reg: &RegisterSpan) -> Circuit {
    add_constant(reg, 1, Direction::Add).expect("1 fits any register")
}

/// `|y⟩ → |y ± c mod 2^m⟩` for `0 ≤ c < 2^m`.
pub fn add_constant(reg: &RegisterSpan, c: u64, direction: Direction) -> Result<Circuit> {
    controlled_add_constant_dir(reg, c, direction, &[])
}

/// [`add_constant`] (adding) active only when every control wire is `|1⟩`.
pub fn controlled_add_constant(reg: &RegisterSpan, c: u64, controls: &[usize]) -> Result<Circuit> {
    controlled_add_constant_dir(reg, c, Direction::Add, controls)
}

fn controlled_add_constant_dir(
    reg: &RegisterSpan,
    value: u64,
    direction: Direction,
    controls: &[usize],
) -> Result<Circuit> {
    if reg.width() < 64 && value >= 1u64 << reg.width() {
        return Err(Error::Parameter(format!(
            "constant {value} does not fit a {}-wire register",
            reg.width()
        )));
    }
    disjoint("controlled add", reg.wires(), controls)?;
    let mut c = circuit_for(&[reg], controls);
    if value == 0 {
        return Ok(c);
    }
    push_fourier_block(&mut c, reg, |c| {
        push_constant_phases(c, reg, value, direction.sign(), controls, &[])
    })?;
    Ok(c)
}

/// `|a⟩|b⟩ → |a⟩|b + a mod 2^width(dst)⟩`; the inverse subtracts.
pub fn add_register(src: &RegisterSpan, dst: &RegisterSpan) -> Result<Circuit> {
    if src.overlaps(dst) {
        return Err(Error::Wiring("add_register: source and destination overlap".into()));
    }
    if dst.width() < src.width() {
        return Err(Error::Layout(format!(
            "destination of {} wires narrower than source of {}",
            dst.width(),
            src.width()
        )));
    }
    let mut c = circuit_for(&[src, dst], &[]);
    push_fourier_block(&mut c, dst, |c| push_register_phases(c, src, dst, 1.0))?;
    Ok(c)
}

/// `|y⟩ → |2^m − y mod 2^m⟩`: bit flips followed by `+1`.
pub fn twos_complement(reg: &RegisterSpan) -> Circuit {
    let mut c = circuit_for(&[reg], &[]);
    for &w in reg.wires() {
        c.push(GateOp::x(w)).expect("register wires are distinct");
    }
    c.append(&plus_one(reg)).expect("same register");
    c
}

/// Which half of a range check the sign wire currently answers.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub(crate) enum SignTest {
    /// Sign wire is `|1⟩` iff `x^{k+1} − x^k < 0`.
    Negative,
    /// Sign wire is `|1⟩` iff `x^{k+1} − x^k < bound`.
    BelowBound,
}

/// Shared body of [`range_check`]: subtracts into the working register, lets
/// `emit` read the sign wire twice, then restores both registers.
///
/// With a `guard` wire (set by `emit` to `|1⟩` iff the difference is
/// non-negative) the bound is only subtracted from non-negative differences,
/// so one sign wire suffices. Without a guard the working register must be wide
/// enough to hold `x^{k+1} − x^k − bound` for every input.
pub(crate) fn push_range_check<F>(
    c: &mut Circuit,
    xk: &RegisterSpan,
    work: &RegisterSpan,
    bound: u64,
    guard: Option<usize>,
    mut emit: F,
) -> Result<()>
where
    F: FnMut(&mut Circuit, SignTest, usize) -> Result<()>,
{
    if work.overlaps(xk) {
        return Err(Error::Wiring("range check registers overlap".into()));
    }
    if work.width() < 2 || work.width() - 1 < xk.width() {
        return Err(Error::Layout(format!(
            "working register of {} wires cannot hold the difference with a {}-wire operand",
            work.width(),
            xk.width()
        )));
    }
    let data_width = work.width() - 1;
    let fits = match guard {
        Some(_) => bound >= 1 && bound <= 1 << data_width,
        None => bound >= 1 && (1u64 << xk.width()) - 1 + bound <= 1 << data_width,
    };
    if !fits {
        return Err(Error::Layout(format!(
            "bound {bound} overflows a {}-wire working register",
            work.width()
        )));
    }
    let guard_wires: Vec<usize> = guard.into_iter().collect();
    let sign = work.msb();

    push_fourier_block(c, work, |c| push_register_phases(c, xk, work, -1.0))?;
    emit(c, SignTest::Negative, sign)?;
    push_fourier_block(c, work, |c| {
        push_constant_phases(c, work, bound, -1.0, &guard_wires, &[])
    })?;
    emit(c, SignTest::BelowBound, sign)?;
    push_fourier_block(c, work, |c| {
        push_constant_phases(c, work, bound, 1.0, &guard_wires, &[])?;
        push_register_phases(c, xk, work, 1.0)
    })
}

/// Sets `flag_lo` iff `x^{k+1} − x^k ≥ 0` and `flag_hi` iff
/// `x^{k+1} − x^k ≤ bound − 1`, restoring both registers.
///
/// `xk1` carries one extra most-significant wire used as the sign of the
/// difference; it must start in `|0⟩` and is returned to `|0⟩`.
pub fn range_check(
    xk: &RegisterSpan,
    xk1: &RegisterSpan,
    bound: u64,
    flag_lo: usize,
    flag_hi: usize,
) -> Result<Circuit> {
    let flags = [flag_lo, flag_hi];
    disjoint("range check flags", &flags, xk.wires())?;
    disjoint("range check flags", &flags, xk1.wires())?;
    if flag_lo == flag_hi {
        return Err(Error::Wiring("range check flags must differ".into()));
    }
    let mut c = circuit_for(&[xk, xk1], &flags);
    push_range_check(&mut c, xk, xk1, bound, Some(flag_lo), |c, test, sign| match test {
        SignTest::Negative => c.push(GateOp::x(flag_lo).anti_controlled_by(&[sign])),
        SignTest::BelowBound => c.push(GateOp::cnot(sign, flag_hi)),
    })?;
    Ok(c)
}
