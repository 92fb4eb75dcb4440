//! Configurations and sparse superpositions over them.

use std::collections::BTreeMap;

use num_complex::Complex64;

use crate::automaton::StateId;

/// Amplitudes of smaller magnitude are dropped from stored superpositions.
pub const PRUNE_THRESHOLD: f64 = 1e-12;

/// Basis configuration `|q, a, b⟩`: state, counter value and head position.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct Configuration {
    pub state: StateId,
    pub counter: i64,
    pub head: usize,
}

impl Configuration {
    pub fn new(state: StateId, counter: i64, head: usize) -> Self {
        Configuration { state, counter, head }
    }
}

/// Sparse vector of configurations.
///
/// Amplitudes are summed on insertion; [`Superposition::pruned`] drops negligible terms.
#[derive(Debug, Clone, Default, PartialEq)]
pub struct Superposition {
    terms: BTreeMap<Configuration, Complex64>,
}

impl Superposition {
    pub fn new() -> Self {
        Self::default()
    }

    /// The basis vector with amplitude 1 on `config`.
    pub fn basis(config: Configuration) -> Self {
        let mut psi = Self::new();
        psi.terms.insert(config, Complex64::new(1.0, 0.0));
        psi
    }

    /// Adds `amplitude` to the term at `config`.
    pub fn add(&mut self, config: Configuration, amplitude: Complex64) {
        *self.terms.entry(config).or_default() += amplitude;
    }

    /// Drops every term with magnitude below [`PRUNE_THRESHOLD`].
    pub fn pruned(mut self) -> Self {
        self.terms.retain(|_, amp| amp.norm() >= PRUNE_THRESHOLD);
        self
    }

    pub fn amplitude(&self, config: &Configuration) -> Complex64 {
        self.terms.get(config).copied().unwrap_or_default()
    }

    pub fn iter(&self) -> impl Iterator<Item = (&Configuration, &Complex64)> {
        self.terms.iter()
    }

    pub fn len(&self) -> usize {
        self.terms.len()
    }

    pub fn is_empty(&self) -> bool {
        self.terms.is_empty()
    }

    /// Squared l2 norm.
    pub fn norm_sqr(&self) -> f64 {
        self.terms.values().fold(0.0, |acc, a| acc + a.norm_sqr())
    }

    /// Splits off the terms whose configuration satisfies `pred`.
    pub fn split_off(&mut self, mut pred: impl FnMut(&Configuration) -> bool) -> Superposition {
        let (taken, kept): (BTreeMap<_, _>, BTreeMap<_, _>) =
            std::mem::take(&mut self.terms).into_iter().partition(|(c, _)| pred(c));
        self.terms = kept;
        Superposition { terms: taken }
    }
}

impl FromIterator<(Configuration, Complex64)> for Superposition {
    fn from_iter<I: IntoIterator<Item = (Configuration, Complex64)>>(iter: I) -> Self {
        let mut psi = Superposition::new();
        for (c, a) in iter {
            psi.add(c, a);
        }
        psi
    }
}
