//! JSON interchange format.
//!
//! ```json
//! {
//!   "kind": "simple-2q1ca",
//!   "states": ["q0", "q1"],
//!   "input_alphabet": ["a"],
//!   "initial": "q0",
//!   "accepting": ["q1"],
//!   "rejecting": [],
//!   "matrices": {"a|0": [[[0, 0], [1, 0]], [[1, 0], [0, 0]]], "...": "..."},
//!   "counter": {"q0|a": 0, "...": "..."},
//!   "head": {"q0": "R", "q1": "S"}
//! }
//! ```
//!
//! Matrix keys are `<symbol>|<sign>` with `^` and `$` for the end-markers; entry `[r][c]`
//! is the amplitude from state `c` to state `r` as `[re, im]`. Counter keys are
//! `<state>|<symbol>`. Deterministic automata use `"kind": "2d1ca"` and a `delta` object
//! mapping `<state>|<symbol>|<sign>` to `[target, counter, head]`.
//!
//! Serialization is canonical: keys sorted, no whitespace, floats written with 17
//! significant digits.

use std::collections::{BTreeMap, HashMap};
use std::fmt;
use std::io;

use nalgebra::DMatrix;
use num_complex::Complex64;
use serde::Serialize;
use serde_json::{json, Map, Value};
use thiserror::Error;

use crate::alphabet::{Alphabet, AlphabetError, Symbol};
use crate::automaton::{
    AutomatonError, CounterDelta, DeterministicAutomaton, FiniteControl, HeadDirection, Sign,
    SimpleAutomaton, StateId, Transition,
};

pub const SIMPLE_KIND: &str = "simple-2q1ca";
pub const DETERMINISTIC_KIND: &str = "2d1ca";

/// A parse or validation failure at a JSON path such as `$.matrices["a|0"][1]`.
#[derive(Debug, Clone, PartialEq, Eq, Error)]
#[error("{path}: {reason}")]
pub struct DocumentError {
    pub path: String,
    pub reason: String,
}

fn fail<T>(path: impl Into<String>, reason: impl fmt::Display) -> Result<T, DocumentError> {
    Err(DocumentError { path: path.into(), reason: reason.to_string() })
}

/// Either kind of automaton a document can hold.
#[derive(Debug, Clone, PartialEq)]
pub enum AnyAutomaton {
    Simple(SimpleAutomaton),
    Deterministic(DeterministicAutomaton),
}

impl AnyAutomaton {
    pub fn control(&self) -> &FiniteControl {
        match self {
            AnyAutomaton::Simple(m) => m.control(),
            AnyAutomaton::Deterministic(m) => m.control(),
        }
    }
}

fn field<'a>(root: &'a Map<String, Value>, key: &str) -> Result<&'a Value, DocumentError> {
    root.get(key).map_or_else(|| fail("$", format!("missing field {key:?}")), Ok)
}

fn string_list(root: &Map<String, Value>, key: &str) -> Result<Vec<String>, DocumentError> {
    let path = format!("$.{key}");
    let Some(items) = field(root, key)?.as_array() else {
        return fail(path, "expected an array of strings");
    };
    items
        .iter()
        .enumerate()
        .map(|(i, v)| match v.as_str() {
            Some(s) => Ok(s.to_string()),
            None => fail(format!("{path}[{i}]"), "expected a string"),
        })
        .collect()
}

fn object<'a>(root: &'a Map<String, Value>, key: &str) -> Result<&'a Map<String, Value>, DocumentError> {
    field(root, key)?.as_object().map_or_else(|| fail(format!("$.{key}"), "expected an object"), Ok)
}

fn parse_symbol(token: &str, alphabet: &Alphabet, path: &str) -> Result<Symbol, DocumentError> {
    let mut chars = token.chars();
    match (chars.next(), chars.next()) {
        (Some(c), None) => {
            let symbol = Symbol::from_token(c);
            if alphabet.contains(symbol) {
                Ok(symbol)
            } else {
                fail(path, format!("symbol {token:?} is not in the work alphabet"))
            }
        }
        _ => fail(path, format!("expected a single-character symbol, found {token:?}")),
    }
}

fn parse_sign(token: &str, path: &str) -> Result<Sign, DocumentError> {
    match token {
        "0" => Ok(Sign::Zero),
        "1" => Ok(Sign::NonZero),
        _ => fail(path, format!("sign must be \"0\" or \"1\", found {token:?}")),
    }
}

fn state_id(control: &FiniteControl, name: &str, path: &str) -> Result<StateId, DocumentError> {
    control.id(name).map_or_else(|| fail(path, format!("unknown state {name:?}")), Ok)
}

fn parse_control(root: &Map<String, Value>) -> Result<FiniteControl, DocumentError> {
    let states = string_list(root, "states")?;
    let letters = string_list(root, "input_alphabet")?;
    let mut chars = Vec::with_capacity(letters.len());
    for (i, letter) in letters.iter().enumerate() {
        let mut it = letter.chars();
        match (it.next(), it.next()) {
            (Some(c), None) => chars.push(c),
            _ => return fail(format!("$.input_alphabet[{i}]"), "input symbols must be single characters"),
        }
    }
    let alphabet = Alphabet::new(chars).or_else(|e| match e {
        AlphabetError::Reserved(c) => fail("$.input_alphabet", format!("reserved token {c:?} cannot be an input symbol")),
        other => fail("$.input_alphabet", other),
    })?;
    let initial = field(root, "initial")?
        .as_str()
        .map_or_else(|| fail("$.initial", "expected a string"), Ok)?;
    let accepting = string_list(root, "accepting")?;
    let rejecting = string_list(root, "rejecting")?;
    let acc: Vec<&str> = accepting.iter().map(String::as_str).collect();
    let rej: Vec<&str> = rejecting.iter().map(String::as_str).collect();
    FiniteControl::new(states, alphabet, initial, &acc, &rej).or_else(|e| {
        let path = match &e {
            AutomatonError::UnknownState(name) if name == initial => "$.initial",
            AutomatonError::UnknownState(name) if accepting.contains(name) => "$.accepting",
            AutomatonError::UnknownState(_) => "$.rejecting",
            AutomatonError::OverlappingHaltSets(_) => "$.rejecting",
            _ => "$.states",
        };
        fail(path, e)
    })
}

fn parse_complex(v: &Value, path: &str) -> Result<Complex64, DocumentError> {
    match v.as_array().map(|a| a.as_slice()) {
        Some([re, im]) => match (re.as_f64(), im.as_f64()) {
            (Some(re), Some(im)) => Ok(Complex64::new(re, im)),
            _ => fail(path, "complex parts must be numbers"),
        },
        _ => fail(path, "expected a complex number [re, im]"),
    }
}

fn parse_simple(root: &Map<String, Value>) -> Result<SimpleAutomaton, DocumentError> {
    let control = parse_control(root)?;
    let alphabet = control.alphabet().clone();
    let n = control.state_count();
    let matrices = object(root, "matrices")?;
    let mut slots: Vec<Option<DMatrix<Complex64>>> = vec![None; alphabet.symbol_count() * 2];
    for (key, value) in matrices {
        let path = format!("$.matrices[{key:?}]");
        let Some((token, sign)) = key.split_once('|') else {
            return fail(path, "matrix keys have the form <symbol>|<sign>");
        };
        let symbol = parse_symbol(token, &alphabet, &path)?;
        let s = parse_sign(sign, &path)?;
        let Some(rows) = value.as_array() else {
            return fail(path, "expected an array of rows");
        };
        if rows.len() != n {
            return fail(path, format!("matrix has {} rows, expected {n}", rows.len()));
        }
        let mut m = DMatrix::zeros(n, n);
        for (r, row) in rows.iter().enumerate() {
            let row_path = format!("{path}[{r}]");
            let Some(entries) = row.as_array() else {
                return fail(row_path, "expected a row array");
            };
            if entries.len() != n {
                return fail(row_path, format!("row has {} entries, expected {n}", entries.len()));
            }
            for (c, entry) in entries.iter().enumerate() {
                m[(r, c)] = parse_complex(entry, &format!("{row_path}[{c}]"))?;
            }
        }
        slots[alphabet.index_of(symbol).unwrap() * 2 + s.bit() as usize] = Some(m);
    }
    let mut dense = Vec::with_capacity(slots.len());
    for (slot, m) in slots.into_iter().enumerate() {
        match m {
            Some(m) => dense.push(m),
            None => {
                let symbol = alphabet.symbol_at(slot / 2);
                return fail("$.matrices", format!("missing matrix \"{symbol}|{}\"", slot % 2));
            }
        }
    }

    let counter_obj = object(root, "counter")?;
    let symbols = alphabet.symbols();
    let mut counter_map: HashMap<(StateId, Symbol), CounterDelta> = HashMap::new();
    for (key, value) in counter_obj {
        let path = format!("$.counter[{key:?}]");
        let Some((name, token)) = key.rsplit_once('|') else {
            return fail(path, "counter keys have the form <state>|<symbol>");
        };
        let q = state_id(&control, name, &path)?;
        let symbol = parse_symbol(token, &alphabet, &path)?;
        let c = value.as_i64().and_then(CounterDelta::from_value);
        let Some(c) = c else {
            return fail(path, "counter update must be -1, 0 or 1");
        };
        counter_map.insert((q, symbol), c);
    }
    let mut counter = Vec::with_capacity(n * symbols.len());
    for q in control.states() {
        for &symbol in &symbols {
            match counter_map.get(&(q, symbol)) {
                Some(&c) => counter.push(c),
                None => return fail("$.counter", format!("missing entry \"{}|{symbol}\"", control.name(q))),
            }
        }
    }

    let head_obj = object(root, "head")?;
    let mut head = vec![None; n];
    for (name, value) in head_obj {
        let path = format!("$.head[{name:?}]");
        let q = state_id(&control, name, &path)?;
        let d = value.as_str().and_then(HeadDirection::from_letter);
        let Some(d) = d else {
            return fail(path, "head move must be \"L\", \"S\" or \"R\"");
        };
        head[q.0] = Some(d);
    }
    let mut heads = Vec::with_capacity(n);
    for q in control.states() {
        match head[q.0] {
            Some(d) => heads.push(d),
            None => return fail("$.head", format!("missing entry {:?}", control.name(q))),
        }
    }
    SimpleAutomaton::new(control, dense, counter, heads).or_else(|e| fail("$", e))
}

fn parse_deterministic(root: &Map<String, Value>) -> Result<DeterministicAutomaton, DocumentError> {
    let control = parse_control(root)?;
    let alphabet = control.alphabet().clone();
    let mut delta = HashMap::new();
    for (key, value) in object(root, "delta")? {
        let path = format!("$.delta[{key:?}]");
        let parts: Vec<&str> = key.rsplitn(3, '|').collect();
        let [sign, token, name] = parts.as_slice() else {
            return fail(path, "delta keys have the form <state>|<symbol>|<sign>");
        };
        let q = state_id(&control, name, &path)?;
        let symbol = parse_symbol(token, &alphabet, &path)?;
        let s = parse_sign(sign, &path)?;
        let Some([target, counter, head]) = value.as_array().map(|a| a.as_slice()) else {
            return fail(path, "expected [target, counter, head]");
        };
        let target = match target.as_str() {
            Some(t) => state_id(&control, t, &format!("{path}[0]"))?,
            None => return fail(format!("{path}[0]"), "expected a state name"),
        };
        let Some(counter) = counter.as_i64().and_then(CounterDelta::from_value) else {
            return fail(format!("{path}[1]"), "counter update must be -1, 0 or 1");
        };
        let Some(head) = head.as_str().and_then(HeadDirection::from_letter) else {
            return fail(format!("{path}[2]"), "head move must be \"L\", \"S\" or \"R\"");
        };
        delta.insert((q, symbol, s), Transition { target, counter, head });
    }
    DeterministicAutomaton::new(control, delta).or_else(|e| fail("$.delta", e))
}

/// Parses and validates a document of either kind.
pub fn parse_document(text: &str) -> Result<AnyAutomaton, DocumentError> {
    let value: Value = serde_json::from_str(text).or_else(|e| fail("$", format!("invalid JSON: {e}")))?;
    let Some(root) = value.as_object() else {
        return fail("$", "expected a JSON object");
    };
    match field(root, "kind")?.as_str() {
        Some(SIMPLE_KIND) => parse_simple(root).map(AnyAutomaton::Simple),
        Some(DETERMINISTIC_KIND) => parse_deterministic(root).map(AnyAutomaton::Deterministic),
        _ => fail("$.kind", format!("kind must be {SIMPLE_KIND:?} or {DETERMINISTIC_KIND:?}")),
    }
}

fn control_fields(control: &FiniteControl, kind: &str) -> Map<String, Value> {
    let names = |set: &std::collections::BTreeSet<StateId>| -> Value {
        set.iter().map(|q| Value::from(control.name(*q))).collect()
    };
    let mut root = Map::new();
    root.insert("kind".into(), kind.into());
    root.insert("states".into(), control.names().iter().map(|s| Value::from(s.as_str())).collect());
    root.insert(
        "input_alphabet".into(),
        control.alphabet().letters().iter().map(|c| Value::from(c.to_string())).collect(),
    );
    root.insert("initial".into(), control.name(control.initial()).into());
    root.insert("accepting".into(), names(control.accepting()));
    root.insert("rejecting".into(), names(control.rejecting()));
    root
}

fn simple_value(m: &SimpleAutomaton) -> Value {
    let control = m.control();
    let mut root = control_fields(control, SIMPLE_KIND);
    let mut matrices = Map::new();
    for (symbol, s, v) in m.matrices() {
        let rows: Vec<Value> = (0..v.nrows())
            .map(|r| (0..v.ncols()).map(|c| json!([v[(r, c)].re, v[(r, c)].im])).collect())
            .collect();
        matrices.insert(format!("{symbol}|{s}"), rows.into());
    }
    let mut counter = Map::new();
    let mut head = Map::new();
    for q in control.states() {
        for symbol in control.alphabet().symbols() {
            counter.insert(format!("{}|{symbol}", control.name(q)), m.counter_fn(q, symbol).value().into());
        }
        head.insert(control.name(q).to_string(), m.head_fn(q).letter().to_string().into());
    }
    root.insert("matrices".into(), matrices.into());
    root.insert("counter".into(), counter.into());
    root.insert("head".into(), head.into());
    root.into()
}

fn deterministic_value(m: &DeterministicAutomaton) -> Value {
    let control = m.control();
    let mut root = control_fields(control, DETERMINISTIC_KIND);
    let mut delta = BTreeMap::new();
    for q in control.states() {
        for symbol in control.alphabet().symbols() {
            for s in Sign::ALL {
                if let Some(t) = m.transition(q, symbol, s) {
                    delta.insert(
                        format!("{}|{symbol}|{s}", control.name(q)),
                        json!([control.name(t.target), t.counter.value(), t.head.letter().to_string()]),
                    );
                }
            }
        }
    }
    root.insert("delta".into(), delta.into_iter().collect::<Map<_, _>>().into());
    root.into()
}

struct CanonicalFormatter;

impl serde_json::ser::Formatter for CanonicalFormatter {
    fn write_f64<W: ?Sized + io::Write>(&mut self, writer: &mut W, value: f64) -> io::Result<()> {
        write!(writer, "{value:.16e}")
    }
}

fn canonical(value: &Value) -> String {
    let mut out = Vec::new();
    let mut ser = serde_json::Serializer::with_formatter(&mut out, CanonicalFormatter);
    value.serialize(&mut ser).expect("serializing a JSON value cannot fail");
    String::from_utf8(out).expect("JSON output is UTF-8")
}

/// Canonical document text.
pub fn to_document(automaton: &AnyAutomaton) -> String {
    match automaton {
        AnyAutomaton::Simple(m) => canonical(&simple_value(m)),
        AnyAutomaton::Deterministic(m) => canonical(&deterministic_value(m)),
    }
}

pub fn simple_document(m: &SimpleAutomaton) -> String {
    canonical(&simple_value(m))
}

pub fn deterministic_document(m: &DeterministicAutomaton) -> String {
    canonical(&deterministic_value(m))
}
