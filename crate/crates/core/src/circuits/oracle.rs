use crate::error::{Error, Result};
use crate::problem::{AncillaStrategy, Instance, Mode, OverlapCheck, QubitLayout};
use crate::qarith::{
    self, push_constant_phases, push_iqft_core, push_qft_core, push_range_check, RegisterSpan,
    SignTest,
};
use crate::statevector::{Circuit, GateOp};

/// Wires whose joint pattern decides "marked": all `controls` at `|1⟩` and
/// all `anti` at `|0⟩`.
#[derive(Clone, Debug, PartialEq, Eq, Default)]
pub struct Condition {
    pub controls: Vec<usize>,
    pub anti: Vec<usize>,
}

fn require_flags(layout: &QubitLayout, what: &str) -> Result<()> {
    if layout.strategy() != AncillaStrategy::Flags {
        return Err(Error::Layout(format!("{what} needs a flag-based layout")));
    }
    Ok(())
}

fn work_register(layout: &QubitLayout, upper: &RegisterSpan) -> Result<RegisterSpan> {
    let mut reg = upper.clone();
    for &s in layout.sign_wires() {
        reg = reg.with_high_wire(s)?;
    }
    Ok(reg)
}

/// Range checks of every machine into their flag pairs: the first register
/// against `[O_i, O_i + C − 1]` (when offsets are present) and each
/// consecutive pair against increments `[0, C − 1]`.
pub fn build_path_flags(instance: &Instance, layout: &QubitLayout) -> Result<Circuit> {
    require_flags(layout, "path flags")?;
    if layout.mode() != Mode::Full {
        return Err(Error::Layout("path flags need a full layout".into()));
    }
    let mut c = Circuit::new(layout.total_wires());
    for check in layout.path_checks() {
        let (lo, hi) = check.flags.expect("flag layout");
        let work = work_register(layout, &check.upper)?;
        c.append(&qarith::range_check(&check.lower, &work, instance.window(), lo, hi)?)?;
    }
    Ok(c)
}

fn push_overlap<F>(c: &mut Circuit, layout: &QubitLayout, check: &OverlapCheck, mark: F) -> Result<()>
where
    F: FnOnce(&mut Circuit, &[usize]) -> Result<()>,
{
    let src = layout.data_register(check.a, check.job);
    let dst = layout.data_register(check.b, check.job);
    for (&s, &d) in src.wires().iter().zip(dst.wires()) {
        c.push(GateOp::cnot(s, d))?;
    }
    mark(c, dst.wires())?;
    for (&s, &d) in src.wires().iter().zip(dst.wires()) {
        c.push(GateOp::cnot(s, d))?;
    }
    Ok(())
}

/// Group-A wire per (machine pair, job) set iff the two dates coincide, then
/// group B set iff no A wire is set.
pub fn build_resource_flags(_instance: &Instance, layout: &QubitLayout) -> Result<Circuit> {
    require_flags(layout, "resource flags")?;
    let mut c = Circuit::new(layout.total_wires());
    for check in layout.overlap_checks() {
        let flag = check.flag.expect("flag layout");
        push_overlap(&mut c, layout, check, |c, dst| {
            c.push(GateOp::x(flag).anti_controlled_by(dst))
        })?;
    }
    let b = layout.group_b().expect("flag layout");
    c.push(GateOp::x(b).anti_controlled_by(layout.group_a()))?;
    Ok(c)
}

/// Counts violated constraints into the counter register. Each range check
/// can fail at most one of its two bounds and each overlap at most once, so
/// the counter never wraps.
pub fn build_violation_counter(instance: &Instance, layout: &QubitLayout) -> Result<Circuit> {
    if layout.strategy() != AncillaStrategy::Counter {
        return Err(Error::Layout("violation counter needs a counter layout".into()));
    }
    let counter = layout.counter().expect("counter layout").clone();
    let mut c = Circuit::new(layout.total_wires());
    push_qft_core(&mut c, &counter)?;
    for check in layout.path_checks() {
        let work = work_register(layout, &check.upper)?;
        push_range_check(&mut c, &check.lower, &work, instance.window(), None, |c, test, sign| {
            match test {
                SignTest::Negative => push_constant_phases(c, &counter, 1, 1.0, &[sign], &[]),
                SignTest::BelowBound => push_constant_phases(c, &counter, 1, 1.0, &[], &[sign]),
            }
        })?;
    }
    for check in layout.overlap_checks() {
        push_overlap(&mut c, layout, check, |c, dst| {
            push_constant_phases(c, &counter, 1, 1.0, &[], dst)
        })?;
    }
    push_iqft_core(&mut c, &counter)?;
    Ok(c)
}

/// Circuit computing the marked condition onto ancillas, and the condition.
pub fn build_condition(instance: &Instance, layout: &QubitLayout) -> Result<(Circuit, Condition)> {
    let mut c = Circuit::new(layout.total_wires());
    match layout.strategy() {
        AncillaStrategy::Flags => {
            if layout.mode() == Mode::Full {
                c.append_segment("path flags", &build_path_flags(instance, layout)?)?;
            }
            c.append_segment("resource flags", &build_resource_flags(instance, layout)?)?;
            let mut controls = layout.flag_wires().to_vec();
            controls.push(layout.group_b().expect("flag layout"));
            Ok((
                c,
                Condition {
                    controls,
                    anti: Vec::new(),
                },
            ))
        }
        AncillaStrategy::Counter => {
            c.append_segment("violation counter", &build_violation_counter(instance, layout)?)?;
            let anti = layout.counter().expect("counter layout").wires().to_vec();
            Ok((
                c,
                Condition {
                    controls: Vec::new(),
                    anti,
                },
            ))
        }
        AncillaStrategy::Auto => unreachable!("layouts store a resolved strategy"),
    }
}
