use serde::Serialize;

use crate::bits::BitString;
use crate::exact::Dyadic;

/// Register-machine instructions. Registers hold unbounded naturals (saturating `u64`).
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
pub enum Op {
    /// `r := next input bit`
    Read(usize),
    Inc(usize),
    /// if `r > 0` then `r -= 1` and jump, else fall through
    DecJnz(usize, usize),
    /// stop and emit `r`
    Halt(usize),
}

/// A self-delimiting machine: program `p` halts only if the run stops after reading exactly
/// `|p|` bits, so the halting set is prefix-free.
#[derive(Clone, Debug, Serialize)]
pub struct ToyChaitinMachine {
    name: String,
    ops: Vec<Op>,
    registers: usize,
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub enum Outcome {
    Halted { output: u64, steps: u64 },
    /// Asked for a bit beyond the end of the program.
    NeedsInput,
    /// Halted before reading the whole program.
    Underread,
    OutOfSteps,
}

#[derive(Clone)]
struct State {
    pc: usize,
    regs: Vec<u64>,
    steps: u64,
}

enum Step {
    Continue,
    Read(usize),
    Halt(u64),
    Stuck,
}

struct Asm {
    ops: Vec<Op>,
    labels: Vec<(&'static str, usize)>,
    fixups: Vec<(usize, &'static str)>,
}

const SCRATCH: usize = 7;

impl Asm {
    fn new() -> Self {
        Asm { ops: Vec::new(), labels: Vec::new(), fixups: Vec::new() }
    }
    fn label(&mut self, name: &'static str) {
        self.labels.push((name, self.ops.len()));
    }
    fn op(&mut self, op: Op) {
        self.ops.push(op);
    }
    fn decjnz(&mut self, r: usize, target: &'static str) {
        self.fixups.push((self.ops.len(), target));
        self.ops.push(Op::DecJnz(r, usize::MAX));
    }
    fn jmp(&mut self, target: &'static str) {
        self.op(Op::Inc(SCRATCH));
        self.decjnz(SCRATCH, target);
    }
    fn finish(mut self) -> Vec<Op> {
        for (at, name) in self.fixups {
            let t = self.labels.iter().find(|(l, _)| *l == name).expect("label").1;
            if let Op::DecJnz(r, _) = self.ops[at] {
                self.ops[at] = Op::DecJnz(r, t);
            }
        }
        self.ops
    }
}

impl ToyChaitinMachine {
    pub fn new(name: &str, ops: Vec<Op>) -> Self {
        let registers = ops
            .iter()
            .map(|op| match *op {
                Op::Read(r) | Op::Inc(r) | Op::DecJnz(r, _) | Op::Halt(r) => r + 1,
            })
            .max()
            .unwrap_or(0)
            .max(SCRATCH + 1);
        ToyChaitinMachine { name: name.to_string(), ops, registers }
    }

    /// Program `1` halts at once; every program starting with `0` loops forever.
    pub fn one_bit() -> Self {
        let mut a = Asm::new();
        a.op(Op::Read(0));
        a.decjnz(0, "halt");
        a.label("loop");
        a.jmp("loop");
        a.label("halt");
        a.op(Op::Halt(0));
        Self::new("one-bit", a.finish())
    }

    /// Demo machine. Programs read `1^k 0` then `k` data bits `d`; the value
    /// `v = Σ d_i 2^(k-i)` is built by repeated doubling and then counted down, so running time
    /// grows with `v`. An all-zero data block loops forever.
    pub fn demo() -> Self {
        let mut a = Asm::new();
        a.label("head");
        a.op(Op::Read(0));
        a.decjnz(0, "one");
        a.jmp("data");
        a.label("one");
        a.op(Op::Inc(1));
        a.jmp("head");
        a.label("data");
        a.decjnz(1, "dbl");
        a.jmp("run");
        a.label("dbl");
        a.decjnz(2, "dbl_move");
        a.jmp("dbl_back");
        a.label("dbl_move");
        a.op(Op::Inc(3));
        a.jmp("dbl");
        a.label("dbl_back");
        a.decjnz(3, "dbl_add");
        a.jmp("rd");
        a.label("dbl_add");
        a.op(Op::Inc(2));
        a.op(Op::Inc(2));
        a.jmp("dbl_back");
        a.label("rd");
        a.op(Op::Read(0));
        a.decjnz(0, "set");
        a.jmp("data");
        a.label("set");
        a.op(Op::Inc(2));
        a.op(Op::Inc(5));
        a.jmp("data");
        a.label("run");
        a.decjnz(5, "spin");
        a.label("forever");
        a.jmp("forever");
        a.label("spin");
        a.decjnz(2, "spin");
        a.op(Op::Halt(2));
        Self::new("demo", a.finish())
    }

    pub fn name(&self) -> &str {
        &self.name
    }

    pub fn ops(&self) -> &[Op] {
        &self.ops
    }

    fn start(&self) -> State {
        State { pc: 0, regs: vec![0; self.registers], steps: 0 }
    }

    /// Executes one instruction (reads are reported, not performed).
    fn step(&self, s: &mut State) -> Step {
        let Some(&op) = self.ops.get(s.pc) else {
            return Step::Stuck;
        };
        s.steps += 1;
        match op {
            Op::Read(r) => return Step::Read(r),
            Op::Inc(r) => {
                s.regs[r] = s.regs[r].saturating_add(1);
                s.pc += 1;
            }
            Op::DecJnz(r, t) => {
                if s.regs[r] > 0 {
                    s.regs[r] -= 1;
                    s.pc = t;
                } else {
                    s.pc += 1;
                }
            }
            Op::Halt(r) => return Step::Halt(s.regs[r]),
        }
        Step::Continue
    }

    /// Runs program `p` for at most `max_steps` instructions.
    pub fn run(&self, p: &BitString, max_steps: u64) -> Outcome {
        let mut s = self.start();
        let mut read = 0usize;
        while s.steps < max_steps {
            match self.step(&mut s) {
                Step::Continue => {}
                Step::Read(r) => {
                    if read == p.len() {
                        return Outcome::NeedsInput;
                    }
                    s.regs[r] = p.bits()[read] as u64;
                    read += 1;
                    s.pc += 1;
                }
                Step::Halt(v) => {
                    return if read == p.len() {
                        Outcome::Halted { output: v, steps: s.steps }
                    } else {
                        Outcome::Underread
                    };
                }
                Step::Stuck => return Outcome::OutOfSteps,
            }
        }
        Outcome::OutOfSteps
    }
}

/// `Σ 2^-|p|` over programs with `|p| <= max_len` that halt within `max_steps` steps.
///
/// Depth-first over input bits: each read forks the machine state, so every program prefix is
/// simulated once.
pub fn omega_lower_bound(m: &ToyChaitinMachine, max_len: usize, max_steps: u64) -> Dyadic {
    let mut total = Dyadic::zero();
    let mut stack = vec![(m.start(), 0usize)];
    while let Some((mut s, depth)) = stack.pop() {
        while s.steps < max_steps {
            match m.step(&mut s) {
                Step::Continue => continue,
                Step::Halt(_) => {
                    total = &total + &Dyadic::pow2_neg(depth as u32);
                    break;
                }
                Step::Read(r) => {
                    if depth < max_len {
                        for b in [1u64, 0] {
                            let mut t = s.clone();
                            t.regs[r] = b;
                            t.pc += 1;
                            stack.push((t, depth + 1));
                        }
                    }
                    break;
                }
                Step::Stuck => break,
            }
        }
    }
    total
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::bits::{bs, string_of_index};

    /// Independent oracle: run every word of length <= L as a complete program.
    fn brute_omega(m: &ToyChaitinMachine, max_len: usize, max_steps: u64) -> Dyadic {
        let mut total = Dyadic::zero();
        let count = (1u64 << (max_len + 1)) - 1;
        for n in 0..count {
            let p = string_of_index(n);
            if let Outcome::Halted { .. } = m.run(&p, max_steps) {
                total = &total + &Dyadic::pow2_neg(p.len() as u32);
            }
        }
        total
    }

    #[test]
    fn one_bit_machine() {
        let m = ToyChaitinMachine::one_bit();
        assert!(matches!(m.run(&bs("1"), 10), Outcome::Halted { .. }));
        assert_eq!(m.run(&bs("0"), 1000), Outcome::OutOfSteps);
        assert_eq!(m.run(&bs("10"), 10), Outcome::Underread);
        assert_eq!(m.run(&BitString::empty(), 10), Outcome::NeedsInput);
        assert_eq!(omega_lower_bound(&m, 1, 10).to_string(), "1/2");
        assert_eq!(omega_lower_bound(&m, 8, 1000).to_string(), "1/2");
        assert!(omega_lower_bound(&m, 0, 0).is_zero());
    }

    #[test]
    fn demo_semantics() {
        let m = ToyChaitinMachine::demo();
        // k = 2, data 10 -> value 2
        assert!(matches!(m.run(&bs("11010"), 10_000), Outcome::Halted { output: 0, .. }));
        assert_eq!(m.run(&bs("11000"), 10_000), Outcome::OutOfSteps);
        assert_eq!(m.run(&bs("0"), 10_000), Outcome::OutOfSteps);
        assert_eq!(m.run(&bs("1101"), 10_000), Outcome::NeedsInput);
        let fast = match m.run(&bs("11001"), 10_000) {
            Outcome::Halted { steps, .. } => steps,
            o => panic!("{o:?}"),
        };
        let slow = match m.run(&bs("11011"), 10_000) {
            Outcome::Halted { steps, .. } => steps,
            o => panic!("{o:?}"),
        };
        assert!(slow > fast);
    }

    #[test]
    fn dfs_matches_brute_force() {
        let m = ToyChaitinMachine::demo();
        for (l, t) in [(0, 0), (3, 50), (5, 100), (7, 200), (9, 10_000), (10, 400)] {
            assert_eq!(omega_lower_bound(&m, l, t), brute_omega(&m, l, t), "L={l} T={t}");
        }
        let o = ToyChaitinMachine::one_bit();
        assert_eq!(omega_lower_bound(&o, 6, 100), brute_omega(&o, 6, 100));
    }

    #[test]
    fn demo_closed_form() {
        // halting programs of length 2k+1 number 2^k - 1 once the step budget is ample
        let m = ToyChaitinMachine::demo();
        let got = omega_lower_bound(&m, 11, 1_000_000);
        let mut want = Dyadic::zero();
        for k in 1..=5u32 {
            want = &want + &Dyadic::new((1u64 << k) - 1, 2 * k + 1);
        }
        assert_eq!(got, want);
    }

    #[test]
    fn demo_sweep_regression() {
        let m = ToyChaitinMachine::demo();
        let got = omega_lower_bound(&m, 12, 10_000);
        assert_eq!(got, brute_omega(&m, 12, 10_000));
        assert_eq!(got.to_string(), "651/2048");
    }
}
