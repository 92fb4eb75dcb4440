//! Well-formedness and unitarity checks.

use std::collections::HashMap;
use std::fmt;

use num_complex::Complex64;
use thiserror::Error;

use crate::alphabet::{Alphabet, InputError, Symbol, Tape};
use crate::automaton::{
    expand_simple, sign, CounterDelta, GeneralTransitionFunction, HeadDirection, Sign,
    SimpleAutomaton, StateId,
};
use crate::superposition::Configuration;

pub const DEFAULT_TOLERANCE: f64 = 1e-9;

/// Which check a violation belongs to.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum Condition {
    /// One of the thirteen local orthogonality conditions, numbered 1..=13.
    Local(u8),
    /// Orthonormal columns of a simple automaton's matrix.
    ColumnOrthonormality,
    /// 0/1 entries forming a permutation matrix.
    Permutation,
    /// Orthonormality of the materialized evolution operator.
    Dense,
}

impl fmt::Display for Condition {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Condition::Local(k) => write!(f, "{k}"),
            Condition::ColumnOrthonormality => write!(f, "columns"),
            Condition::Permutation => write!(f, "perm"),
            Condition::Dense => write!(f, "dense"),
        }
    }
}

#[derive(Debug, Clone, PartialEq)]
pub enum Witness {
    Local {
        q1: StateId,
        q2: StateId,
        symbols: (Symbol, Symbol),
        signs: (Sign, Sign),
    },
    Columns { symbol: Symbol, sign: Sign, q1: StateId, q2: StateId },
    Entry { symbol: Symbol, sign: Sign, row: StateId, col: StateId, value: Complex64 },
    Row { symbol: Symbol, sign: Sign, row: StateId, ones: usize },
    Column { symbol: Symbol, sign: Sign, col: StateId, ones: usize },
    Configurations { first: Configuration, second: Configuration },
}

impl fmt::Display for Witness {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Witness::Local { q1, q2, symbols, signs } => write!(
                f,
                "q1={} q2={} symbols=({},{}) signs=({},{})",
                q1.0, q2.0, symbols.0, symbols.1, signs.0, signs.1
            ),
            Witness::Columns { symbol, sign, q1, q2 } => {
                write!(f, "V[{symbol}|{sign}] columns {} and {}", q1.0, q2.0)
            }
            Witness::Entry { symbol, sign, row, col, value } => {
                write!(f, "V[{symbol}|{sign}] entry ({}, {}) = {value}", row.0, col.0)
            }
            Witness::Row { symbol, sign, row, ones } => {
                write!(f, "V[{symbol}|{sign}] row {} has {ones} ones", row.0)
            }
            Witness::Column { symbol, sign, col, ones } => {
                write!(f, "V[{symbol}|{sign}] column {} has {ones} ones", col.0)
            }
            Witness::Configurations { first, second } => write!(
                f,
                "columns ({}, {}, {}) and ({}, {}, {})",
                first.state.0, first.counter, first.head, second.state.0, second.counter, second.head
            ),
        }
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct Violation {
    pub condition: Condition,
    pub witness: Witness,
    /// |computed − required|.
    pub residual: f64,
}

impl fmt::Display for Violation {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "condition {}: {} (residual {:.3e})", self.condition, self.witness, self.residual)
    }
}

/// Outcome of a check. It passes exactly when no violation was recorded.
#[derive(Debug, Clone, Default, PartialEq)]
pub struct CheckReport {
    pub violations: Vec<Violation>,
    /// Columns left out of a windowed check because their image leaves the window.
    pub skipped: usize,
    pub notes: Vec<String>,
}

impl CheckReport {
    pub fn passed(&self) -> bool {
        self.violations.is_empty()
    }

    fn push(&mut self, condition: Condition, witness: Witness, residual: f64) {
        self.violations.push(Violation { condition, witness, residual });
    }
}

impl fmt::Display for CheckReport {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        writeln!(f, "{}", if self.passed() { "PASS" } else { "FAIL" })?;
        for v in &self.violations {
            writeln!(f, "  {v}")?;
        }
        if self.skipped > 0 {
            writeln!(f, "  skipped {} boundary columns", self.skipped)?;
        }
        for note in &self.notes {
            writeln!(f, "  note: {note}")?;
        }
        Ok(())
    }
}

#[derive(Debug, Clone, PartialEq, Error)]
pub enum CheckError {
    #[error("counter bound must be at least 1, got {0}")]
    CounterBound(i64),
    #[error("counter window [-{0}, {0}] contains no interior column")]
    DegenerateWindow(i64),
    #[error(transparent)]
    Input(#[from] InputError),
}

/// Offsets `(c1 - c2, μ(d1) - μ(d2))` of the thirteen local conditions, in order.
const LOCAL_OFFSETS: [(i64, i64); 13] = [
    (0, 0),
    (0, -1),
    (0, -2),
    (-1, 0),
    (-1, -1),
    (-1, 1),
    (-1, -2),
    (-1, 2),
    (-2, 0),
    (-2, -1),
    (-2, 1),
    (-2, -2),
    (-2, 2),
];

fn slot(to: usize, counter: CounterDelta, head: HeadDirection) -> usize {
    (to * 3 + (counter.value() + 1) as usize) * 3 + (head.displacement() + 1) as usize
}

/// Evaluates the thirteen local well-formedness conditions on `delta`.
///
/// Symbols are shared between the two sides exactly when the head offset is zero, signs
/// exactly when the counter offset is zero; otherwise every combination is evaluated.
/// Configuration pairs further apart than two in counter or head give no condition.
pub fn check_general(delta: &GeneralTransitionFunction, alphabet: &Alphabet, tol: f64) -> CheckReport {
    let n = delta.state_count();
    let symbols = alphabet.symbols();
    let width = symbols.len();
    let column_index = |q: usize, x: usize, s: Sign| (q * width + x) * 2 + s.bit() as usize;

    // Dense and sparse views of each column (q, σ, s) over (q', c, d).
    let mut dense = vec![vec![Complex64::default(); n * 9]; n * width * 2];
    for (key, &amp) in delta.iter() {
        let x = match alphabet.index_of(key.symbol) {
            Some(x) => x,
            None => continue,
        };
        dense[column_index(key.from.0, x, key.sign)][slot(key.to.0, key.counter, key.head)] = amp;
    }
    let sparse: Vec<Vec<(usize, Complex64)>> = dense
        .iter()
        .map(|col| {
            col.iter()
                .enumerate()
                .filter(|(_, a)| **a != Complex64::default())
                .map(|(i, a)| (i, *a))
                .collect()
        })
        .collect();

    let mut report = CheckReport::default();
    for (k, &(da, db)) in LOCAL_OFFSETS.iter().enumerate() {
        let condition = Condition::Local(k as u8 + 1);
        let symbol_pairs: Vec<(usize, usize)> = if db == 0 {
            (0..width).map(|x| (x, x)).collect()
        } else {
            (0..width).flat_map(|x| (0..width).map(move |y| (x, y))).collect()
        };
        let sign_pairs: Vec<(Sign, Sign)> = if da == 0 {
            Sign::ALL.iter().map(|&s| (s, s)).collect()
        } else {
            Sign::ALL.iter().flat_map(|&s| Sign::ALL.iter().map(move |&t| (s, t))).collect()
        };
        for &(x1, x2) in &symbol_pairs {
            for &(s1, s2) in &sign_pairs {
                for q1 in 0..n {
                    let left = &sparse[column_index(q1, x1, s1)];
                    for q2 in 0..n {
                        let right = &dense[column_index(q2, x2, s2)];
                        let mut sum = Complex64::default();
                        for &(i, amp) in left {
                            let to = i / 9;
                            let c1 = (i / 3 % 3) as i64 - 1;
                            let mu1 = (i % 3) as i64 - 1;
                            let (c2, mu2) = (c1 - da, mu1 - db);
                            if c2.abs() > 1 || mu2.abs() > 1 {
                                continue;
                            }
                            let j = (to * 3 + (c2 + 1) as usize) * 3 + (mu2 + 1) as usize;
                            sum += amp.conj() * right[j];
                        }
                        let required = if k == 0 && q1 == q2 { 1.0 } else { 0.0 };
                        let residual = (sum - Complex64::new(required, 0.0)).norm();
                        if residual > tol {
                            report.push(
                                condition,
                                Witness::Local {
                                    q1: StateId(q1),
                                    q2: StateId(q2),
                                    symbols: (symbols[x1], symbols[x2]),
                                    signs: (s1, s2),
                                },
                                residual,
                            );
                        }
                    }
                }
            }
        }
    }
    report.notes.push(
        "configuration pairs more than 2 apart in counter or head share no image and are not enumerated"
            .to_string(),
    );
    report
}

/// Checks that every matrix `V_{σ,s}` has orthonormal columns.
pub fn check_simple_unitarity(automaton: &SimpleAutomaton, tol: f64) -> CheckReport {
    let mut report = CheckReport::default();
    for (symbol, s, m) in automaton.matrices() {
        let gram = m.adjoint() * m;
        for q1 in 0..m.ncols() {
            for q2 in 0..m.ncols() {
                let required = if q1 == q2 { 1.0 } else { 0.0 };
                let residual = (gram[(q1, q2)] - Complex64::new(required, 0.0)).norm();
                if residual > tol {
                    report.push(
                        Condition::ColumnOrthonormality,
                        Witness::Columns { symbol, sign: s, q1: StateId(q1), q2: StateId(q2) },
                        residual,
                    );
                }
            }
        }
    }
    report
}

/// Passes iff every matrix is a permutation matrix with exact 0/1 entries.
pub fn check_reversible(automaton: &SimpleAutomaton) -> CheckReport {
    let one = Complex64::new(1.0, 0.0);
    let zero = Complex64::default();
    let mut report = CheckReport::default();
    for (symbol, s, m) in automaton.matrices() {
        let n = m.nrows();
        let mut row_ones = vec![0usize; n];
        let mut col_ones = vec![0usize; n];
        for col in 0..n {
            for row in 0..n {
                let value = m[(row, col)];
                if value == one {
                    row_ones[row] += 1;
                    col_ones[col] += 1;
                } else if value != zero {
                    let residual = (value - one).norm().min(value.norm());
                    report.push(
                        Condition::Permutation,
                        Witness::Entry { symbol, sign: s, row: StateId(row), col: StateId(col), value },
                        residual,
                    );
                }
            }
        }
        for (row, &ones) in row_ones.iter().enumerate() {
            if ones != 1 {
                report.push(
                    Condition::Permutation,
                    Witness::Row { symbol, sign: s, row: StateId(row), ones },
                    (ones as f64 - 1.0).abs(),
                );
            }
        }
        for (col, &ones) in col_ones.iter().enumerate() {
            if ones != 1 {
                report.push(
                    Condition::Permutation,
                    Witness::Column { symbol, sign: s, col: StateId(col), ones },
                    (ones as f64 - 1.0).abs(),
                );
            }
        }
    }
    report
}

/// Materializes the one-step evolution operator on `input` over the counter window
/// `[-counter_bound, counter_bound]` and checks that its interior columns are orthonormal.
///
/// A column is interior when its whole image stays inside the window. Other columns are
/// counted in `skipped`.
pub fn check_dense_unitarity(
    automaton: &SimpleAutomaton,
    input: &str,
    counter_bound: i64,
    tol: f64,
) -> Result<CheckReport, CheckError> {
    let tape = Tape::for_alphabet(automaton.alphabet(), input)?;
    check_operator_window(&expand_simple(automaton), &tape, counter_bound, tol)
}

/// [`check_dense_unitarity`] for an arbitrary general transition function.
pub fn check_operator_window(
    delta: &GeneralTransitionFunction,
    tape: &Tape,
    counter_bound: i64,
    tol: f64,
) -> Result<CheckReport, CheckError> {
    if counter_bound < 1 {
        return Err(CheckError::CounterBound(counter_bound));
    }
    let states = delta.state_count();
    let cells = tape.cell_count();
    let span = (2 * counter_bound + 1) as usize;
    let index = |q: usize, a: i64, b: usize| (q * span + (a + counter_bound) as usize) * cells + b;
    let config_at = |i: usize| {
        Configuration::new(StateId(i / (span * cells)), (i / cells % span) as i64 - counter_bound, i % cells)
    };

    // rows[r] lists (column, amplitude) pairs of the interior columns hitting row r.
    let mut rows: HashMap<usize, Vec<(usize, Complex64)>> = HashMap::new();
    let mut interior = Vec::new();
    let mut skipped = 0usize;
    for q in 0..states {
        for a in -counter_bound..=counter_bound {
            for b in 0..cells {
                let mut image: HashMap<usize, Complex64> = HashMap::new();
                let mut escapes = false;
                for (key, &amp) in delta.column(StateId(q), tape.at(b), sign(a)) {
                    let a2 = a + key.counter.value();
                    if a2.abs() > counter_bound {
                        escapes = true;
                        break;
                    }
                    let b2 = tape.wrap(b as i64 + key.head.displacement());
                    *image.entry(index(key.to.0, a2, b2)).or_default() += amp;
                }
                if escapes {
                    skipped += 1;
                    continue;
                }
                let col = index(q, a, b);
                interior.push(col);
                for (row, amp) in image {
                    rows.entry(row).or_default().push((col, amp));
                }
            }
        }
    }
    if interior.is_empty() {
        return Err(CheckError::DegenerateWindow(counter_bound));
    }

    let mut gram: HashMap<(usize, usize), Complex64> = HashMap::new();
    for entries in rows.values() {
        for &(c1, a1) in entries {
            for &(c2, a2) in entries {
                *gram.entry((c1, c2)).or_default() += a1.conj() * a2;
            }
        }
    }
    let mut report = CheckReport { skipped, ..CheckReport::default() };
    for &col in &interior {
        let norm = gram.get(&(col, col)).copied().unwrap_or_default();
        let residual = (norm - Complex64::new(1.0, 0.0)).norm();
        if residual > tol {
            let c = config_at(col);
            report.push(Condition::Dense, Witness::Configurations { first: c, second: c }, residual);
        }
    }
    let mut off: Vec<_> = gram.into_iter().filter(|((c1, c2), _)| c1 < c2).collect();
    off.sort_by_key(|(k, _)| *k);
    for ((c1, c2), value) in off {
        if value.norm() > tol {
            report.push(
                Condition::Dense,
                Witness::Configurations { first: config_at(c1), second: config_at(c2) },
                value.norm(),
            );
        }
    }
    Ok(report)
}
