//! Automaton representations: deterministic counter automata, simple quantum counter
//! automata given by per-symbol matrices, and the general six-argument transition function.

use std::collections::{BTreeMap, BTreeSet, HashMap};
use std::fmt;

use nalgebra::DMatrix;
use num_complex::Complex64;
use thiserror::Error;

use crate::alphabet::{Alphabet, Symbol};

/// Result of the counter zero test.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum Sign {
    Zero,
    NonZero,
}

impl Sign {
    pub const ALL: [Sign; 2] = [Sign::Zero, Sign::NonZero];

    pub fn bit(self) -> u8 {
        match self {
            Sign::Zero => 0,
            Sign::NonZero => 1,
        }
    }

    pub fn from_bit(bit: u8) -> Option<Sign> {
        match bit {
            0 => Some(Sign::Zero),
            1 => Some(Sign::NonZero),
            _ => None,
        }
    }
}

impl fmt::Display for Sign {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}", self.bit())
    }
}

/// 0 for a zero counter, 1 otherwise.
pub fn sign(counter: i64) -> Sign {
    if counter == 0 {
        Sign::Zero
    } else {
        Sign::NonZero
    }
}

/// Head movement after a transition.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum HeadDirection {
    Left,
    Stay,
    Right,
}

impl HeadDirection {
    pub const ALL: [HeadDirection; 3] = [HeadDirection::Left, HeadDirection::Stay, HeadDirection::Right];

    /// Displacement μ(d): −1, 0 or +1.
    pub fn displacement(self) -> i64 {
        match self {
            HeadDirection::Left => -1,
            HeadDirection::Stay => 0,
            HeadDirection::Right => 1,
        }
    }

    pub fn from_displacement(mu: i64) -> Option<HeadDirection> {
        match mu {
            -1 => Some(HeadDirection::Left),
            0 => Some(HeadDirection::Stay),
            1 => Some(HeadDirection::Right),
            _ => None,
        }
    }

    /// Left and right swapped; stay is fixed.
    pub fn reversed(self) -> HeadDirection {
        match self {
            HeadDirection::Left => HeadDirection::Right,
            HeadDirection::Stay => HeadDirection::Stay,
            HeadDirection::Right => HeadDirection::Left,
        }
    }

    pub fn letter(self) -> char {
        match self {
            HeadDirection::Left => 'L',
            HeadDirection::Stay => 'S',
            HeadDirection::Right => 'R',
        }
    }

    pub fn from_letter(letter: &str) -> Option<HeadDirection> {
        match letter {
            "L" => Some(HeadDirection::Left),
            "S" => Some(HeadDirection::Stay),
            "R" => Some(HeadDirection::Right),
            _ => None,
        }
    }
}

impl fmt::Display for HeadDirection {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}", self.letter())
    }
}

/// Counter update of a transition: −1, 0 or +1.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum CounterDelta {
    Dec,
    Keep,
    Inc,
}

impl CounterDelta {
    pub const ALL: [CounterDelta; 3] = [CounterDelta::Dec, CounterDelta::Keep, CounterDelta::Inc];

    pub fn value(self) -> i64 {
        match self {
            CounterDelta::Dec => -1,
            CounterDelta::Keep => 0,
            CounterDelta::Inc => 1,
        }
    }

    pub fn from_value(value: i64) -> Option<CounterDelta> {
        match value {
            -1 => Some(CounterDelta::Dec),
            0 => Some(CounterDelta::Keep),
            1 => Some(CounterDelta::Inc),
            _ => None,
        }
    }

    pub fn negated(self) -> CounterDelta {
        match self {
            CounterDelta::Dec => CounterDelta::Inc,
            CounterDelta::Keep => CounterDelta::Keep,
            CounterDelta::Inc => CounterDelta::Dec,
        }
    }
}

impl fmt::Display for CounterDelta {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{:+}", self.value())
    }
}

/// Index of a state in declaration order.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct StateId(pub usize);

impl StateId {
    pub fn index(self) -> usize {
        self.0
    }
}

#[derive(Debug, Clone, PartialEq, Error)]
pub enum AutomatonError {
    #[error("automaton has no states")]
    NoStates,
    #[error("state name {0:?} is declared twice")]
    DuplicateState(String),
    #[error("unknown state {0:?}")]
    UnknownState(String),
    #[error("state index {0} is out of range")]
    StateOutOfRange(usize),
    #[error("state {0:?} is both accepting and rejecting")]
    OverlappingHaltSets(String),
    #[error("symbol {0} is not in the work alphabet")]
    UnknownSymbol(Symbol),
    #[error("expected {expected} transition matrices, found {found}")]
    MatrixCount { expected: usize, found: usize },
    #[error("matrix for ({symbol}, {sign}) is {rows}x{cols}, expected {expected}x{expected}")]
    MatrixShape { symbol: Symbol, sign: Sign, rows: usize, cols: usize, expected: usize },
    #[error("counter function has {found} entries, expected {expected}")]
    CounterTableSize { expected: usize, found: usize },
    #[error("head function has {found} entries, expected {expected}")]
    HeadTableSize { expected: usize, found: usize },
    #[error("transition function is undefined at ({state:?}, {symbol}, {sign})")]
    MissingTransition { state: String, symbol: Symbol, sign: Sign },
}

/// States, alphabet, initial state and halting sets shared by every automaton kind.
#[derive(Debug, Clone, PartialEq)]
pub struct FiniteControl {
    names: Vec<String>,
    lookup: HashMap<String, StateId>,
    alphabet: Alphabet,
    initial: StateId,
    accepting: BTreeSet<StateId>,
    rejecting: BTreeSet<StateId>,
}

impl FiniteControl {
    pub fn new(
        names: Vec<String>,
        alphabet: Alphabet,
        initial: &str,
        accepting: &[&str],
        rejecting: &[&str],
    ) -> Result<Self, AutomatonError> {
        if names.is_empty() {
            return Err(AutomatonError::NoStates);
        }
        let mut lookup = HashMap::with_capacity(names.len());
        for (i, name) in names.iter().enumerate() {
            if lookup.insert(name.clone(), StateId(i)).is_some() {
                return Err(AutomatonError::DuplicateState(name.clone()));
            }
        }
        let resolve = |name: &str| {
            lookup
                .get(name)
                .copied()
                .ok_or_else(|| AutomatonError::UnknownState(name.to_string()))
        };
        let initial = resolve(initial)?;
        let accepting = accepting.iter().map(|n| resolve(n)).collect::<Result<BTreeSet<_>, _>>()?;
        let rejecting = rejecting.iter().map(|n| resolve(n)).collect::<Result<BTreeSet<_>, _>>()?;
        if let Some(q) = accepting.intersection(&rejecting).next() {
            return Err(AutomatonError::OverlappingHaltSets(names[q.0].clone()));
        }
        Ok(FiniteControl { names, lookup, alphabet, initial, accepting, rejecting })
    }

    pub fn state_count(&self) -> usize {
        self.names.len()
    }

    pub fn states(&self) -> impl Iterator<Item = StateId> + '_ {
        (0..self.names.len()).map(StateId)
    }

    pub fn name(&self, q: StateId) -> &str {
        &self.names[q.0]
    }

    pub fn names(&self) -> &[String] {
        &self.names
    }

    pub fn id(&self, name: &str) -> Option<StateId> {
        self.lookup.get(name).copied()
    }

    pub fn alphabet(&self) -> &Alphabet {
        &self.alphabet
    }

    pub fn initial(&self) -> StateId {
        self.initial
    }

    pub fn accepting(&self) -> &BTreeSet<StateId> {
        &self.accepting
    }

    pub fn rejecting(&self) -> &BTreeSet<StateId> {
        &self.rejecting
    }

    pub fn is_accepting(&self, q: StateId) -> bool {
        self.accepting.contains(&q)
    }

    pub fn is_rejecting(&self, q: StateId) -> bool {
        self.rejecting.contains(&q)
    }

    pub fn is_halting(&self, q: StateId) -> bool {
        self.is_accepting(q) || self.is_rejecting(q)
    }

    fn symbol_index(&self, symbol: Symbol) -> Result<usize, AutomatonError> {
        self.alphabet.index_of(symbol).ok_or(AutomatonError::UnknownSymbol(symbol))
    }
}

/// One deterministic move: next state, counter update, head movement.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub struct Transition {
    pub target: StateId,
    pub counter: CounterDelta,
    pub head: HeadDirection,
}

/// Two-way deterministic one-counter automaton.
///
/// The transition table must be defined on every `(state, symbol, sign)` whose state is
/// not halting. Entries for halting states may be present but are never consulted.
#[derive(Debug, Clone, PartialEq)]
pub struct DeterministicAutomaton {
    control: FiniteControl,
    delta: Vec<Option<Transition>>,
}

impl DeterministicAutomaton {
    pub fn new(
        control: FiniteControl,
        delta: HashMap<(StateId, Symbol, Sign), Transition>,
    ) -> Result<Self, AutomatonError> {
        let n = control.state_count();
        let width = control.alphabet().symbol_count();
        let mut table = vec![None; n * width * 2];
        for (&(q, symbol, s), &t) in &delta {
            if q.0 >= n {
                return Err(AutomatonError::StateOutOfRange(q.0));
            }
            if t.target.0 >= n {
                return Err(AutomatonError::StateOutOfRange(t.target.0));
            }
            let x = control.symbol_index(symbol)?;
            table[(q.0 * width + x) * 2 + s.bit() as usize] = Some(t);
        }
        for q in control.states().filter(|&q| !control.is_halting(q)) {
            for (x, symbol) in control.alphabet().symbols().into_iter().enumerate() {
                for s in Sign::ALL {
                    if table[(q.0 * width + x) * 2 + s.bit() as usize].is_none() {
                        return Err(AutomatonError::MissingTransition {
                            state: control.name(q).to_string(),
                            symbol,
                            sign: s,
                        });
                    }
                }
            }
        }
        Ok(DeterministicAutomaton { control, delta: table })
    }

    pub fn control(&self) -> &FiniteControl {
        &self.control
    }

    /// The move at `(q, symbol, sign)`, if one is defined.
    pub fn transition(&self, q: StateId, symbol: Symbol, s: Sign) -> Option<Transition> {
        let width = self.control.alphabet().symbol_count();
        let x = self.control.alphabet().index_of(symbol)?;
        self.delta.get((q.0 * width + x) * 2 + s.bit() as usize).copied().flatten()
    }
}

/// Simple two-way quantum one-counter automaton.
///
/// Each `(symbol, sign)` owns a square matrix `V` with entry `(row q', column q)` equal to
/// the amplitude of moving from `q` to `q'`. The counter update depends on the new state
/// and the scanned symbol; the head movement depends on the new state only.
#[derive(Debug, Clone, PartialEq)]
pub struct SimpleAutomaton {
    control: FiniteControl,
    matrices: Vec<DMatrix<Complex64>>,
    counter: Vec<CounterDelta>,
    head: Vec<HeadDirection>,
    columns: Vec<Vec<Vec<(StateId, Complex64)>>>,
}

impl SimpleAutomaton {
    /// `matrices` are ordered by work-symbol index then sign; `counter` is row-major over
    /// `(state, symbol)`.
    pub fn new(
        control: FiniteControl,
        matrices: Vec<DMatrix<Complex64>>,
        counter: Vec<CounterDelta>,
        head: Vec<HeadDirection>,
    ) -> Result<Self, AutomatonError> {
        let n = control.state_count();
        let width = control.alphabet().symbol_count();
        if matrices.len() != width * 2 {
            return Err(AutomatonError::MatrixCount { expected: width * 2, found: matrices.len() });
        }
        for (slot, m) in matrices.iter().enumerate() {
            if m.nrows() != n || m.ncols() != n {
                return Err(AutomatonError::MatrixShape {
                    symbol: control.alphabet().symbol_at(slot / 2),
                    sign: Sign::from_bit((slot % 2) as u8).unwrap(),
                    rows: m.nrows(),
                    cols: m.ncols(),
                    expected: n,
                });
            }
        }
        if counter.len() != n * width {
            return Err(AutomatonError::CounterTableSize { expected: n * width, found: counter.len() });
        }
        if head.len() != n {
            return Err(AutomatonError::HeadTableSize { expected: n, found: head.len() });
        }
        let columns = matrices
            .iter()
            .map(|m| {
                (0..n)
                    .map(|col| {
                        (0..n)
                            .filter(|&row| m[(row, col)] != Complex64::new(0.0, 0.0))
                            .map(|row| (StateId(row), m[(row, col)]))
                            .collect()
                    })
                    .collect()
            })
            .collect();
        Ok(SimpleAutomaton { control, matrices, counter, head, columns })
    }

    pub fn control(&self) -> &FiniteControl {
        &self.control
    }

    pub fn alphabet(&self) -> &Alphabet {
        self.control.alphabet()
    }

    pub fn state_count(&self) -> usize {
        self.control.state_count()
    }

    fn slot(&self, symbol: Symbol, s: Sign) -> usize {
        let x = self
            .control
            .alphabet()
            .index_of(symbol)
            .unwrap_or_else(|| panic!("symbol {symbol} is not in the work alphabet"));
        x * 2 + s.bit() as usize
    }

    /// The transition matrix for `(symbol, sign)`.
    ///
    /// Panics when `symbol` is outside the work alphabet.
    pub fn matrix(&self, symbol: Symbol, s: Sign) -> &DMatrix<Complex64> {
        &self.matrices[self.slot(symbol, s)]
    }

    /// ⟨to| V_{symbol,sign} |from⟩.
    pub fn amplitude(&self, symbol: Symbol, s: Sign, from: StateId, to: StateId) -> Complex64 {
        self.matrix(symbol, s)[(to.0, from.0)]
    }

    /// Nonzero entries of column `from` of `V_{symbol,sign}`, in row order.
    pub fn column(&self, symbol: Symbol, s: Sign, from: StateId) -> &[(StateId, Complex64)] {
        &self.columns[self.slot(symbol, s)][from.0]
    }

    pub fn counter_fn(&self, q: StateId, symbol: Symbol) -> CounterDelta {
        let x = self.slot(symbol, Sign::Zero) / 2;
        self.counter[q.0 * self.control.alphabet().symbol_count() + x]
    }

    pub fn head_fn(&self, q: StateId) -> HeadDirection {
        self.head[q.0]
    }

    /// All `(symbol, sign, matrix)` triples in canonical order.
    pub fn matrices(&self) -> impl Iterator<Item = (Symbol, Sign, &DMatrix<Complex64>)> + '_ {
        self.matrices.iter().enumerate().map(move |(slot, m)| {
            (
                self.control.alphabet().symbol_at(slot / 2),
                Sign::from_bit((slot % 2) as u8).unwrap(),
                m,
            )
        })
    }
}

/// Key of the general transition function δ(q, σ, s, q', c, d).
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct GeneralKey {
    pub from: StateId,
    pub symbol: Symbol,
    pub sign: Sign,
    pub to: StateId,
    pub counter: CounterDelta,
    pub head: HeadDirection,
}

/// Sparse six-argument transition function over states `0..state_count`; absent keys
/// have amplitude zero.
#[derive(Debug, Clone, PartialEq)]
pub struct GeneralTransitionFunction {
    state_count: usize,
    entries: BTreeMap<GeneralKey, Complex64>,
}

impl GeneralTransitionFunction {
    pub fn new(state_count: usize) -> Self {
        GeneralTransitionFunction { state_count, entries: BTreeMap::new() }
    }

    pub fn state_count(&self) -> usize {
        self.state_count
    }

    /// Sets an amplitude. Explicit zeros are stored as given.
    ///
    /// Panics when either state is out of range.
    pub fn insert(&mut self, key: GeneralKey, amplitude: Complex64) {
        assert!(
            key.from.0 < self.state_count && key.to.0 < self.state_count,
            "state out of range in {key:?}"
        );
        self.entries.insert(key, amplitude);
    }

    pub fn amplitude(&self, key: &GeneralKey) -> Complex64 {
        self.entries.get(key).copied().unwrap_or_default()
    }

    pub fn iter(&self) -> impl Iterator<Item = (&GeneralKey, &Complex64)> {
        self.entries.iter()
    }

    pub fn len(&self) -> usize {
        self.entries.len()
    }

    pub fn is_empty(&self) -> bool {
        self.entries.is_empty()
    }

    /// Stored entries with the given `(from, symbol, sign)` prefix.
    pub fn column(
        &self,
        from: StateId,
        symbol: Symbol,
        s: Sign,
    ) -> impl Iterator<Item = (&GeneralKey, &Complex64)> {
        let lo = GeneralKey {
            from,
            symbol,
            sign: s,
            to: StateId(0),
            counter: CounterDelta::Dec,
            head: HeadDirection::Left,
        };
        let hi = GeneralKey { to: StateId(usize::MAX), counter: CounterDelta::Inc, head: HeadDirection::Right, ..lo };
        self.entries.range(lo..=hi)
    }
}

/// The general transition function of a simple automaton: each matrix entry lands in the
/// single `(c, d)` slot fixed by the counter and head functions of the new state.
pub fn expand_simple(automaton: &SimpleAutomaton) -> GeneralTransitionFunction {
    let mut delta = GeneralTransitionFunction::new(automaton.state_count());
    for (symbol, s, m) in automaton.matrices() {
        for col in 0..m.ncols() {
            for row in 0..m.nrows() {
                let amp = m[(row, col)];
                if amp == Complex64::new(0.0, 0.0) {
                    continue;
                }
                let to = StateId(row);
                delta.insert(
                    GeneralKey {
                        from: StateId(col),
                        symbol,
                        sign: s,
                        to,
                        counter: automaton.counter_fn(to, symbol),
                        head: automaton.head_fn(to),
                    },
                    amp,
                );
            }
        }
    }
    delta
}

#[cfg(test)]
mod tests {
    use super::*;

    fn one_state(head: HeadDirection) -> SimpleAutomaton {
        let alphabet = Alphabet::new(['a']).unwrap();
        let control = FiniteControl::new(vec!["q".into()], alphabet, "q", &[], &[]).unwrap();
        let one = DMatrix::from_element(1, 1, Complex64::new(1.0, 0.0));
        SimpleAutomaton::new(control, vec![one; 6], vec![CounterDelta::Keep; 3], vec![head]).unwrap()
    }

    #[test]
    fn sign_of_counter() {
        assert_eq!(sign(0), Sign::Zero);
        assert_eq!(sign(5), Sign::NonZero);
        assert_eq!(sign(-3), Sign::NonZero);
    }

    #[test]
    fn head_displacements() {
        let mus: Vec<i64> = HeadDirection::ALL.iter().map(|d| d.displacement()).collect();
        assert_eq!(mus, vec![-1, 0, 1]);
        for d in HeadDirection::ALL {
            assert_eq!(HeadDirection::from_displacement(d.displacement()), Some(d));
            assert_eq!(d.reversed().displacement(), -d.displacement());
        }
    }

    #[test]
    fn identity_expansion_has_single_entry_per_column() {
        let m = one_state(HeadDirection::Stay);
        let delta = expand_simple(&m);
        assert_eq!(delta.len(), 6);
        let q = StateId(0);
        let key = GeneralKey {
            from: q,
            symbol: Symbol::Letter('a'),
            sign: Sign::Zero,
            to: q,
            counter: CounterDelta::Keep,
            head: HeadDirection::Stay,
        };
        assert_eq!(delta.amplitude(&key), Complex64::new(1.0, 0.0));
        for c in CounterDelta::ALL {
            for d in HeadDirection::ALL {
                if (c, d) != (CounterDelta::Keep, HeadDirection::Stay) {
                    assert_eq!(delta.amplitude(&GeneralKey { counter: c, head: d, ..key }), Complex64::default());
                }
            }
        }
        assert_eq!(delta.column(q, Symbol::Letter('a'), Sign::Zero).count(), 1);
    }

    #[test]
    fn control_validation() {
        let ab = Alphabet::new(['a']).unwrap();
        let names = vec!["p".to_string(), "q".to_string()];
        assert!(matches!(
            FiniteControl::new(names.clone(), ab.clone(), "r", &[], &[]),
            Err(AutomatonError::UnknownState(_))
        ));
        assert!(matches!(
            FiniteControl::new(names.clone(), ab.clone(), "p", &["q"], &["q"]),
            Err(AutomatonError::OverlappingHaltSets(_))
        ));
        assert!(matches!(
            FiniteControl::new(vec!["p".into(), "p".into()], ab, "p", &[], &[]),
            Err(AutomatonError::DuplicateState(_))
        ));
    }

    #[test]
    fn deterministic_requires_totality_on_live_states() {
        let ab = Alphabet::new(['a']).unwrap();
        let control = FiniteControl::new(vec!["p".into(), "h".into()], ab, "p", &["h"], &[]).unwrap();
        let p = StateId(0);
        let h = StateId(1);
        let mut delta = HashMap::new();
        for symbol in control.alphabet().symbols() {
            for s in Sign::ALL {
                delta.insert((p, symbol, s), Transition { target: h, counter: CounterDelta::Keep, head: HeadDirection::Stay });
            }
        }
        let ok = DeterministicAutomaton::new(control.clone(), delta.clone()).unwrap();
        assert_eq!(ok.transition(h, Symbol::LeftEnd, Sign::Zero), None);
        delta.remove(&(p, Symbol::RightEnd, Sign::NonZero));
        assert!(matches!(
            DeterministicAutomaton::new(control, delta),
            Err(AutomatonError::MissingTransition { sign: Sign::NonZero, .. })
        ));
    }
}
