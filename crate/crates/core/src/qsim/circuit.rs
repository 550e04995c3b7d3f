use std::fmt::Write as _;

use crate::error::{Error, Result};

/// Native gate set. Rotations follow `RX(θ) = exp(−iθX/2)` and
/// `RZ(θ) = exp(−iθZ/2)`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub enum Gate {
    Rx { qubit: usize, angle: f64 },
    Rz { qubit: usize, angle: f64 },
    Cnot { control: usize, target: usize },
}

/// State a circuit starts from when run on its own.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Default)]
pub enum InitialState {
    /// `|0…0⟩`
    #[default]
    Zero,
    /// `|+⟩^⊗n`, the uniform superposition.
    Plus,
}

#[derive(Debug, Clone, PartialEq)]
pub struct Circuit {
    n_qubits: usize,
    initial: InitialState,
    gates: Vec<Gate>,
}

impl Circuit {
    pub fn new(n_qubits: usize) -> Self {
        Self::with_initial(n_qubits, InitialState::Zero)
    }

    pub fn with_initial(n_qubits: usize, initial: InitialState) -> Self {
        Self {
            n_qubits,
            initial,
            gates: Vec::new(),
        }
    }

    pub fn n_qubits(&self) -> usize {
        self.n_qubits
    }

    pub fn initial(&self) -> InitialState {
        self.initial
    }

    pub fn gates(&self) -> &[Gate] {
        &self.gates
    }

    pub fn len(&self) -> usize {
        self.gates.len()
    }

    pub fn is_empty(&self) -> bool {
        self.gates.is_empty()
    }

    pub fn push(&mut self, gate: Gate) -> Result<()> {
        let check = |q: usize| {
            if q < self.n_qubits {
                Ok(())
            } else {
                Err(Error::InvalidCircuit(format!(
                    "qubit {q} out of range for {} qubits",
                    self.n_qubits
                )))
            }
        };
        match gate {
            Gate::Rx { qubit, angle } | Gate::Rz { qubit, angle } => {
                check(qubit)?;
                if !angle.is_finite() {
                    return Err(Error::InvalidCircuit(format!("non-finite angle {angle}")));
                }
            }
            Gate::Cnot { control, target } => {
                check(control)?;
                check(target)?;
                if control == target {
                    return Err(Error::InvalidCircuit("CNOT control equals target".into()));
                }
            }
        }
        self.gates.push(gate);
        Ok(())
    }

    pub fn rx(&mut self, qubit: usize, angle: f64) -> Result<()> {
        self.push(Gate::Rx { qubit, angle })
    }

    pub fn rz(&mut self, qubit: usize, angle: f64) -> Result<()> {
        self.push(Gate::Rz { qubit, angle })
    }

    pub fn cnot(&mut self, control: usize, target: usize) -> Result<()> {
        self.push(Gate::Cnot { control, target })
    }

    /// One gate per line: `RX q θ`, `RZ q θ`, `CNOT c t`, preceded by a
    /// `# qubits <n> initial <zero|plus>` header. Angles use the shortest
    /// representation that parses back to the same `f64`.
    pub fn to_text(&self) -> String {
        let init = match self.initial {
            InitialState::Zero => "zero",
            InitialState::Plus => "plus",
        };
        let mut s = format!("# qubits {} initial {}\n", self.n_qubits, init);
        for g in &self.gates {
            let _ = match *g {
                Gate::Rx { qubit, angle } => writeln!(s, "RX {qubit} {angle:?}"),
                Gate::Rz { qubit, angle } => writeln!(s, "RZ {qubit} {angle:?}"),
                Gate::Cnot { control, target } => writeln!(s, "CNOT {control} {target}"),
            };
        }
        s
    }

    /// Parses [`to_text`](Self::to_text) output. Without a header the qubit
    /// count is inferred from the largest index and the initial state is
    /// `|0…0⟩`.
    pub fn parse(text: &str) -> Result<Self> {
        let mut header: Option<(usize, InitialState)> = None;
        let mut gates = Vec::new();
        for (i, raw) in text.lines().enumerate() {
            let line = i + 1;
            let l = raw.trim();
            let perr = |m: String| Error::Parse { line, message: m };
            if l.is_empty() {
                continue;
            }
            if let Some(rest) = l.strip_prefix('#') {
                let f: Vec<&str> = rest.split_whitespace().collect();
                if f.len() == 4 && f[0] == "qubits" && f[2] == "initial" {
                    let n = f[1].parse().map_err(|e| perr(format!("{e}")))?;
                    let init = match f[3] {
                        "zero" => InitialState::Zero,
                        "plus" => InitialState::Plus,
                        other => return Err(perr(format!("unknown initial state {other:?}"))),
                    };
                    header = Some((n, init));
                }
                continue;
            }
            let f: Vec<&str> = l.split_whitespace().collect();
            let idx = |s: &str| s.parse::<usize>().map_err(|e| perr(format!("{s:?}: {e}")));
            let ang = |s: &str| s.parse::<f64>().map_err(|e| perr(format!("{s:?}: {e}")));
            let g = match (f.first().copied(), f.len()) {
                (Some("RX"), 3) => Gate::Rx {
                    qubit: idx(f[1])?,
                    angle: ang(f[2])?,
                },
                (Some("RZ"), 3) => Gate::Rz {
                    qubit: idx(f[1])?,
                    angle: ang(f[2])?,
                },
                (Some("CNOT"), 3) => Gate::Cnot {
                    control: idx(f[1])?,
                    target: idx(f[2])?,
                },
                _ => return Err(perr(format!("unrecognized gate line {l:?}"))),
            };
            gates.push(g);
        }
        let (n, init) = header.unwrap_or_else(|| {
            let max = gates
                .iter()
                .map(|g| match *g {
                    Gate::Rx { qubit, .. } | Gate::Rz { qubit, .. } => qubit,
                    Gate::Cnot { control, target } => control.max(target),
                })
                .max()
                .map_or(0, |m| m + 1);
            (max, InitialState::Zero)
        });
        let mut c = Circuit::with_initial(n, init);
        for g in gates {
            c.push(g)?;
        }
        Ok(c)
    }
}
