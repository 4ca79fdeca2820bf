use crate::error::{Error, Result};
use crate::problem::{CoinPolicy, Instance, Mode, QubitLayout};
use crate::qarith::{self, push_fourier_block, push_register_phases, Direction};
use crate::statevector::{Circuit, GateOp};

fn require_mode(layout: &QubitLayout, mode: Mode, what: &str) -> Result<()> {
    if layout.mode() != mode {
        return Err(Error::Layout(format!(
            "{what} needs a {mode} layout, got {}",
            layout.mode()
        )));
    }
    Ok(())
}

fn set_offsets(c: &mut Circuit, instance: &Instance, layout: &QubitLayout) -> Result<()> {
    for (i, reg) in layout.offset_registers().iter().enumerate() {
        let o = instance.offset(i) as usize;
        for (b, &w) in reg.wires().iter().enumerate() {
            if (o >> b) & 1 == 1 {
                c.push(GateOp::x(w))?;
            }
        }
    }
    Ok(())
}

/// Hadamard on every data wire; offset registers are loaded with `O_i`.
pub fn build_uniform_prep(instance: &Instance, layout: &QubitLayout) -> Result<Circuit> {
    require_mode(layout, Mode::Full, "uniform preparation")?;
    let mut c = Circuit::new(layout.total_wires());
    for w in 0..layout.data_width() {
        c.push(GateOp::h(w))?;
    }
    set_offsets(&mut c, instance, layout)?;
    Ok(c)
}

/// Quantum-walk preparation of the uniform superposition over feasible paths.
///
/// Per machine: Hadamards on the low `log2 C` wires of the first register and
/// `+O_i`; then for each later job, copy the previous register, flip a fresh
/// coin, add the coin value in one Fourier block and, under
/// [`CoinPolicy::Reuse`], subtract `x^k − x^{k−1}` from the coin to return it
/// to `|0…0⟩`.
pub fn build_walk_prep(instance: &Instance, layout: &QubitLayout) -> Result<Circuit> {
    require_mode(layout, Mode::Reduced, "walk preparation")?;
    if !instance.window().is_power_of_two() {
        return Err(Error::Validation("walk needs a power-of-two window".into()));
    }
    let mut c = Circuit::new(layout.total_wires());
    let coin_width = layout.dimensions().coin_width();
    for i in 0..instance.machines() {
        let first = layout.data_register(i, 0);
        for b in 0..coin_width {
            c.push(GateOp::h(first.wire(b)))?;
        }
        let o = instance.offset(i);
        if o > 0 {
            c.append(&qarith::add_constant(first, o, Direction::Add)?)?;
        }
        for k in 1..instance.jobs() {
            let prev = layout.data_register(i, k - 1);
            let cur = layout.data_register(i, k);
            let coin = layout.coin_for(i, k);
            for b in 0..prev.width() {
                c.push(GateOp::cnot(prev.wire(b), cur.wire(b)))?;
            }
            for &w in coin.wires() {
                c.push(GateOp::h(w))?;
            }
            push_fourier_block(&mut c, cur, |c| push_register_phases(c, coin, cur, 1.0))?;
            if layout.coin_policy() == CoinPolicy::Reuse {
                push_fourier_block(&mut c, coin, |c| {
                    push_register_phases(c, cur, coin, -1.0)?;
                    push_register_phases(c, prev, coin, 1.0)
                })?;
            }
        }
    }
    Ok(c)
}

/// Preparation matching the layout's mode.
pub fn build_prep(instance: &Instance, layout: &QubitLayout) -> Result<Circuit> {
    match layout.mode() {
        Mode::Full => build_uniform_prep(instance, layout),
        Mode::Reduced => build_walk_prep(instance, layout),
    }
}
