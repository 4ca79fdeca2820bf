use std::f64::consts::PI;

use num_complex::Complex64;
use qsched::qarith::{
    add_constant, add_register, controlled_add_constant, plus_one, qft, range_check,
    twos_complement, Direction, RegisterSpan,
};
use qsched::statevector::{Circuit, GateKind, StateVector};
use qsched::Error;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

const TOL: f64 = 1e-9;

fn reg(start: usize, width: usize) -> RegisterSpan {
    RegisterSpan::contiguous(start, width)
}

/// Runs `circ` (widened to `n`) on basis `input`; returns the unique output
/// index, failing if the result is not a phase-free basis state.
fn classical(circ: &Circuit, n: usize, input: usize) -> usize {
    let mut s = StateVector::basis(n, input).unwrap();
    s.apply_circuit(&circ.widened(n).unwrap()).unwrap();
    let (idx, amp) = s
        .amplitudes()
        .iter()
        .enumerate()
        .max_by(|a, b| a.1.norm_sqr().total_cmp(&b.1.norm_sqr()))
        .unwrap();
    assert!((amp - Complex64::new(1.0, 0.0)).norm() < TOL, "input {input}: amplitude {amp}");
    idx
}

fn random_state(seed: u64, n: usize) -> StateVector {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let mut amps: Vec<Complex64> = (0..1 << n)
        .map(|_| Complex64::new(rng.gen_range(-1.0..1.0), rng.gen_range(-1.0..1.0)))
        .collect();
    let norm = amps.iter().map(|a| a.norm_sqr()).sum::<f64>().sqrt();
    amps.iter_mut().for_each(|a| *a /= norm);
    StateVector::from_amplitudes(amps).unwrap()
}

fn assert_inverse_restores(circ: &Circuit, seed: u64) {
    let n = circ.n_qubits();
    let start = random_state(seed, n);
    let mut s = start.clone();
    s.apply_circuit(circ).unwrap();
    s.apply_circuit(&circ.inverse()).unwrap();
    assert!(s.fidelity(&start) > 1.0 - TOL);
}

#[test]
fn qft_width_one_is_hadamard() {
    let c = qft(&reg(0, 1));
    assert_eq!(c.len(), 1);
    assert_eq!(c.ops()[0].kind, GateKind::Hadamard);
}

#[test]
fn qft_matches_dft_matrix() {
    for width in 1..=4 {
        let c = qft(&reg(0, width));
        let dim = 1usize << width;
        for y in 0..dim {
            let mut s = StateVector::basis(width, y).unwrap();
            s.apply_circuit(&c).unwrap();
            for z in 0..dim {
                let want = Complex64::from_polar(
                    1.0 / (dim as f64).sqrt(),
                    2.0 * PI * (y * z) as f64 / dim as f64,
                );
                assert!((s.amplitude(z) - want).norm() < TOL, "w={width} y={y} z={z}");
            }
        }
        assert_inverse_restores(&c, width as u64);
    }
}

#[test]
fn qft_on_five() {
    let mut s = StateVector::basis(3, 5).unwrap();
    s.apply_circuit(&qft(&reg(0, 3))).unwrap();
    for j in 0..8 {
        let want = Complex64::from_polar(1.0 / 8f64.sqrt(), 2.0 * PI * 5.0 * j as f64 / 8.0);
        assert!((s.amplitude(j) - want).norm() < TOL);
    }
}

#[test]
fn plus_one_examples() {
    let r = reg(0, 5);
    let c = plus_one(&r);
    assert_eq!(classical(&c, 5, 0b01011), 0b01100);
    assert_eq!(classical(&plus_one(&reg(0, 2)), 2, 0b11), 0b00);

    let h = std::f64::consts::FRAC_1_SQRT_2;
    let mut amps = vec![Complex64::new(0.0, 0.0); 32];
    amps[0b01001] = Complex64::new(h, 0.0);
    amps[0b11000] = Complex64::new(h, 0.0);
    let mut s = StateVector::from_amplitudes(amps).unwrap();
    s.apply_circuit(&c).unwrap();
    assert!((s.amplitude(0b01010).re - h).abs() < TOL);
    assert!((s.amplitude(0b11001).re - h).abs() < TOL);
    assert!((s.marked_probability(&[0b01010, 0b11001]).unwrap() - 1.0).abs() < TOL);
}

#[test]
fn plus_one_size_is_quadratic() {
    for w in 1..=10 {
        let len = plus_one(&reg(0, w)).len();
        assert!(len <= w * w + 2 * w, "width {w}: {len} gates");
    }
}

#[test]
fn add_constant_exhaustive() {
    for w in 1..=4 {
        let r = reg(0, w);
        let m = 1usize << w;
        for cst in 0..m {
            for dir in [Direction::Add, Direction::Subtract] {
                let circ = add_constant(&r, cst as u64, dir).unwrap();
                for y in 0..m {
                    let want = match dir {
                        Direction::Add => (y + cst) % m,
                        Direction::Subtract => (y + m - cst) % m,
                    };
                    assert_eq!(classical(&circ, w, y), want, "w={w} c={cst} y={y}");
                }
            }
        }
        let err = add_constant(&r, m as u64, Direction::Add).unwrap_err();
        assert!(matches!(err, Error::Parameter(_)));
    }
    assert!(add_constant(&reg(0, 3), 0, Direction::Add).unwrap().is_empty());
    assert_eq!(classical(&add_constant(&reg(0, 3), 2, Direction::Add).unwrap(), 3, 1), 3);
}

#[test]
fn add_constant_on_scattered_wires() {
    let r = RegisterSpan::new(vec![3, 0, 2]).unwrap();
    let circ = add_constant(&r, 3, Direction::Add).unwrap();
    for idx in 0..16usize {
        let y = r.read(idx);
        let out = classical(&circ, 4, idx);
        assert_eq!(r.read(out), (y + 3) % 8);
        assert_eq!(out & 0b0010, idx & 0b0010);
    }
}

#[test]
fn controlled_add_constant_exhaustive() {
    for w in 1..=3 {
        let r = reg(0, w);
        let ctrl = w;
        let m = 1usize << w;
        for cst in 0..m {
            let circ = controlled_add_constant(&r, cst as u64, &[ctrl]).unwrap();
            for y in 0..m {
                for on in 0..2 {
                    let input = y | on << ctrl;
                    let want = if on == 1 { (y + cst) % m } else { y } | on << ctrl;
                    assert_eq!(classical(&circ, w + 1, input), want);
                }
            }
        }
    }
    let circ = controlled_add_constant(&reg(0, 2), 1, &[2]).unwrap();
    assert_eq!(classical(&circ, 3, 0b101), 0b110);
    let err = controlled_add_constant(&reg(0, 2), 1, &[1]).unwrap_err();
    assert!(matches!(err, Error::Wiring(_)));
}

#[test]
fn add_register_exhaustive() {
    for sw in 1..=2 {
        for dw in sw..=4 {
            let src = reg(0, sw);
            let dst = reg(sw, dw);
            let circ = add_register(&src, &dst).unwrap();
            let n = sw + dw;
            for a in 0..1usize << sw {
                for b in 0..1usize << dw {
                    let out = classical(&circ, n, a | b << sw);
                    assert_eq!(src.read(out), a);
                    assert_eq!(dst.read(out), (a + b) % (1 << dw));
                    let back = classical(&circ.inverse(), n, out);
                    assert_eq!(back, a | b << sw);
                }
            }
        }
    }
    let circ = add_register(&reg(0, 2), &reg(2, 3)).unwrap();
    assert_eq!(reg(2, 3).read(classical(&circ, 5, 3 | 2 << 2)), 5);
    assert!(matches!(add_register(&reg(0, 2), &reg(1, 3)).unwrap_err(), Error::Wiring(_)));
    assert!(matches!(add_register(&reg(0, 3), &reg(3, 2)).unwrap_err(), Error::Layout(_)));
}

#[test]
fn twos_complement_exhaustive() {
    for w in 1..=5 {
        let circ = twos_complement(&reg(0, w));
        let m = 1usize << w;
        for y in 0..m {
            let t = classical(&circ, w, y);
            assert_eq!((y + t) % m, 0, "w={w} y={y}");
        }
        assert_inverse_restores(&circ, w as u64);
    }
    assert_eq!(classical(&twos_complement(&reg(0, 3)), 3, 0), 0);
    assert_eq!(classical(&twos_complement(&reg(0, 3)), 3, 3), 5);
}

#[test]
fn range_check_exhaustive() {
    for wk in 1..=3 {
        for wk1 in wk..=3 {
            for bound in [2u64, 4] {
                if bound > 1 << wk1 {
                    continue;
                }
                let xk = reg(0, wk);
                let xk1 = reg(wk, wk1 + 1);
                let (lo, hi) = (wk + wk1 + 1, wk + wk1 + 2);
                let n = hi + 1;
                let circ = range_check(&xk, &xk1, bound, lo, hi).unwrap();
                for a in 0..1usize << wk {
                    for b in 0..1usize << wk1 {
                        let input = a | b << wk;
                        let out = classical(&circ, n, input);
                        let diff = b as i64 - a as i64;
                        let want_lo = usize::from(diff >= 0);
                        let want_hi = usize::from(diff < bound as i64);
                        assert_eq!(out & ((1 << lo) - 1), input, "data not restored");
                        assert_eq!((out >> lo) & 1, want_lo, "lo a={a} b={b} C={bound}");
                        assert_eq!((out >> hi) & 1, want_hi, "hi a={a} b={b} C={bound}");
                    }
                }
            }
        }
    }
}

#[test]
fn range_check_examples() {
    let xk = reg(0, 2);
    let xk1 = reg(2, 4);
    let circ = range_check(&xk, &xk1, 4, 6, 7).unwrap();
    let out = classical(&circ, 8, 0);
    assert_eq!(out >> 6, 0b11);
    let out = classical(&circ, 8, 4 << 2);
    assert_eq!((out >> 7) & 1, 0);
    assert_eq!((out >> 6) & 1, 1);

    let err = range_check(&reg(0, 3), &reg(3, 3), 4, 6, 7).unwrap_err();
    assert!(matches!(err, Error::Layout(_)));
    let err = range_check(&reg(0, 2), &reg(2, 2), 4, 4, 5).unwrap_err();
    assert!(matches!(err, Error::Layout(_)));
    let err = range_check(&xk, &xk1, 4, 1, 7).unwrap_err();
    assert!(matches!(err, Error::Wiring(_)));
}

#[test]
fn builders_invert_on_random_states() {
    let circuits = [
        plus_one(&reg(0, 4)),
        add_constant(&reg(1, 3), 5, Direction::Subtract).unwrap(),
        controlled_add_constant(&reg(0, 3), 3, &[3, 4]).unwrap(),
        add_register(&reg(0, 2), &reg(2, 3)).unwrap(),
        range_check(&reg(0, 2), &reg(2, 4), 4, 6, 7).unwrap(),
        qft(&reg(0, 5)),
    ];
    for (i, c) in circuits.iter().enumerate() {
        assert_inverse_restores(c, 77 + i as u64);
    }
}

#[test]
fn register_span_validation() {
    assert!(RegisterSpan::new(vec![]).is_err());
    assert!(RegisterSpan::new(vec![1, 2, 1]).is_err());
    let r = RegisterSpan::new(vec![4, 1]).unwrap();
    assert_eq!(r.read(0b10010), 0b11);
    assert_eq!(r.write(0, 0b01), 0b10000);
    assert_eq!(r.write(0b11111, 0b10), 0b01111);
}
