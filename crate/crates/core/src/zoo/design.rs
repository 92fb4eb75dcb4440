//! Partial matrix designs completed to unitary simple automata.

use std::collections::{BTreeMap, HashMap};

use nalgebra::{DMatrix, DVector};
use num_complex::Complex64;
use thiserror::Error;

use crate::alphabet::{Alphabet, Symbol};
use crate::automaton::{
    AutomatonError, CounterDelta, FiniteControl, HeadDirection, Sign, SimpleAutomaton, StateId,
};

const ORTHONORMAL_TOL: f64 = 1e-9;
const INDEPENDENCE_TOL: f64 = 1e-6;

#[derive(Debug, Clone, PartialEq, Error)]
pub enum DesignError {
    #[error("column of {state:?} under ({symbol}, {sign}) is defined twice")]
    Redefined { symbol: Symbol, sign: Sign, state: String },
    #[error("columns of {first:?} and {second:?} under ({symbol}, {sign}) are not orthonormal (residual {residual:.3e})")]
    NotOrthonormal { symbol: Symbol, sign: Sign, first: String, second: String, residual: f64 },
    #[error("no initial state was chosen")]
    NoInitial,
    #[error(transparent)]
    Automaton(#[from] AutomatonError),
}

type Column = Vec<(StateId, Complex64)>;

/// Builder for simple automata whose matrices are given column by column.
///
/// Only the columns that matter need to be written. [`Design::build`] checks that the
/// written columns of each matrix are orthonormal and fills every other column by
/// Gram–Schmidt over standard basis vectors, non-halting states first, then halting states,
/// each group in declaration order. When all written columns are basis vectors the
/// completion is a permutation.
///
/// Counter updates default to 0 and head moves to stay.
#[derive(Debug, Clone)]
pub struct Design {
    alphabet: Alphabet,
    names: Vec<String>,
    lookup: HashMap<String, StateId>,
    initial: Option<StateId>,
    accepting: Vec<StateId>,
    rejecting: Vec<StateId>,
    head: Vec<HeadDirection>,
    counter: HashMap<(StateId, Symbol), CounterDelta>,
    columns: BTreeMap<(usize, Sign), BTreeMap<StateId, Column>>,
    error: Option<DesignError>,
}

impl Design {
    pub fn new(alphabet: Alphabet) -> Self {
        Design {
            alphabet,
            names: Vec::new(),
            lookup: HashMap::new(),
            initial: None,
            accepting: Vec::new(),
            rejecting: Vec::new(),
            head: Vec::new(),
            counter: HashMap::new(),
            columns: BTreeMap::new(),
            error: None,
        }
    }

    /// Declares a state. The first declared state is the initial one unless
    /// [`Design::initial`] says otherwise.
    ///
    /// Panics on a duplicate name.
    pub fn state(&mut self, name: impl Into<String>) -> StateId {
        let name = name.into();
        let id = StateId(self.names.len());
        assert!(self.lookup.insert(name.clone(), id).is_none(), "state {name:?} declared twice");
        self.names.push(name);
        self.head.push(HeadDirection::Stay);
        self.initial.get_or_insert(id);
        id
    }

    pub fn initial(&mut self, q: StateId) -> &mut Self {
        self.initial = Some(q);
        self
    }

    pub fn accepting(&mut self, q: StateId) -> &mut Self {
        self.accepting.push(q);
        self
    }

    pub fn rejecting(&mut self, q: StateId) -> &mut Self {
        self.rejecting.push(q);
        self
    }

    pub fn head(&mut self, q: StateId, d: HeadDirection) -> &mut Self {
        self.head[q.0] = d;
        self
    }

    pub fn counter(&mut self, q: StateId, symbol: Symbol, c: CounterDelta) -> &mut Self {
        self.counter.insert((q, symbol), c);
        self
    }

    /// Sets the column of `from` under `(symbol, s)` to `Σ amplitude |to⟩`.
    pub fn superpose(&mut self, symbol: Symbol, s: Sign, from: StateId, terms: Vec<(StateId, Complex64)>) -> &mut Self {
        let x = self.alphabet.index_of(symbol).unwrap_or_else(|| panic!("symbol {symbol} not in alphabet"));
        let column = self.columns.entry((x, s)).or_default();
        if column.insert(from, terms).is_some() && self.error.is_none() {
            self.error = Some(DesignError::Redefined { symbol, sign: s, state: self.names[from.0].clone() });
        }
        self
    }

    /// `from → to` with amplitude 1 under `(symbol, s)`.
    pub fn map(&mut self, symbol: Symbol, s: Sign, from: StateId, to: StateId) -> &mut Self {
        self.superpose(symbol, s, from, vec![(to, Complex64::new(1.0, 0.0))])
    }

    /// `from → to` under `symbol` for both counter signs.
    pub fn map_any(&mut self, symbol: Symbol, from: StateId, to: StateId) -> &mut Self {
        for s in Sign::ALL {
            self.map(symbol, s, from, to);
        }
        self
    }

    pub fn id(&self, name: &str) -> Option<StateId> {
        self.lookup.get(name).copied()
    }

    pub fn build(self) -> Result<SimpleAutomaton, DesignError> {
        if let Some(e) = self.error {
            return Err(e);
        }
        let initial = self.initial.ok_or(DesignError::NoInitial)?;
        let n = self.names.len();
        let halting = |q: usize| self.accepting.contains(&StateId(q)) || self.rejecting.contains(&StateId(q));
        let candidates: Vec<usize> = (0..n).filter(|&q| !halting(q)).chain((0..n).filter(|&q| halting(q))).collect();

        let mut matrices = Vec::with_capacity(self.alphabet.symbol_count() * 2);
        for (x, symbol) in self.alphabet.symbols().into_iter().enumerate() {
            for s in Sign::ALL {
                let empty = BTreeMap::new();
                let written = self.columns.get(&(x, s)).unwrap_or(&empty);
                let mut m = DMatrix::<Complex64>::zeros(n, n);
                let mut basis: Vec<DVector<Complex64>> = Vec::new();
                for (&from, terms) in written {
                    let mut v = DVector::<Complex64>::zeros(n);
                    for &(to, amp) in terms {
                        v[to.0] += amp;
                    }
                    m.set_column(from.0, &v);
                    basis.push(v);
                }
                let froms: Vec<StateId> = written.keys().copied().collect();
                for i in 0..basis.len() {
                    for j in i..basis.len() {
                        let required = if i == j { 1.0 } else { 0.0 };
                        let residual = (basis[i].dotc(&basis[j]) - Complex64::new(required, 0.0)).norm();
                        if residual > ORTHONORMAL_TOL {
                            return Err(DesignError::NotOrthonormal {
                                symbol,
                                sign: s,
                                first: self.names[froms[i].0].clone(),
                                second: self.names[froms[j].0].clone(),
                                residual,
                            });
                        }
                    }
                }
                let mut open = (0..n).filter(|q| !written.contains_key(&StateId(*q)));
                let mut next = open.next();
                for &k in &candidates {
                    let Some(col) = next else { break };
                    let mut v = DVector::<Complex64>::zeros(n);
                    v[k] = Complex64::new(1.0, 0.0);
                    for _ in 0..2 {
                        for u in &basis {
                            let overlap = u.dotc(&v);
                            v -= u * overlap;
                        }
                    }
                    let norm = v.norm();
                    if norm > INDEPENDENCE_TOL {
                        v /= Complex64::new(norm, 0.0);
                        for z in v.iter_mut() {
                            if z.norm() < 1e-15 {
                                *z = Complex64::new(0.0, 0.0);
                            }
                        }
                        m.set_column(col, &v);
                        basis.push(v);
                        next = open.next();
                    }
                }
                matrices.push(m);
            }
        }

        let symbols = self.alphabet.symbols();
        let mut counter = Vec::with_capacity(n * symbols.len());
        for q in 0..n {
            for &symbol in &symbols {
                counter.push(self.counter.get(&(StateId(q), symbol)).copied().unwrap_or(CounterDelta::Keep));
            }
        }
        let accepting: Vec<&str> = self.accepting.iter().map(|q| self.names[q.0].as_str()).collect();
        let rejecting: Vec<&str> = self.rejecting.iter().map(|q| self.names[q.0].as_str()).collect();
        let control = FiniteControl::new(
            self.names.clone(),
            self.alphabet.clone(),
            &self.names[initial.0],
            &accepting,
            &rejecting,
        )?;
        Ok(SimpleAutomaton::new(control, matrices, counter, self.head)?)
    }
}
