//! Atoms: the indeterminates of the polynomial layer.
//!
//! Every polynomial is built over a set of atoms: the coordinates `x` and `y`,
//! opaque function symbols carrying a formal derivative index, and elementary
//! function applications (`sin(u)`, `ln(u)`, ...) which are treated as
//! independent indeterminates.
//!
//! Atoms are interned into a process-wide table so that monomials can store a
//! plain `u32` per variable. Interning order is an implementation detail: all
//! user-visible ordering (printing, sign conventions) goes through
//! [`canonical_cmp`], which orders atoms by their [`AtomKey`].

use std::cmp::Ordering;
use std::collections::HashMap;
use std::fmt;
use std::sync::{Arc, OnceLock, RwLock, RwLockReadGuard};

use serde::{Deserialize, Serialize};

use super::ratfunc::RatFunc;

/// Elementary functions admitted by the expression grammar.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
pub enum Func {
    Sin,
    Cos,
    Exp,
    Ln,
}

impl Func {
    pub const ALL: [Func; 4] = [Func::Sin, Func::Cos, Func::Exp, Func::Ln];

    pub fn name(self) -> &'static str {
        match self {
            Func::Sin => "sin",
            Func::Cos => "cos",
            Func::Exp => "exp",
            Func::Ln => "ln",
        }
    }

    pub fn from_name(name: &str) -> Option<Func> {
        Func::ALL.into_iter().find(|f| f.name() == name)
    }

    pub fn apply_f64(self, v: f64) -> f64 {
        match self {
            Func::Sin => v.sin(),
            Func::Cos => v.cos(),
            Func::Exp => v.exp(),
            Func::Ln => v.ln(),
        }
    }
}

impl fmt::Display for Func {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.name())
    }
}

/// An opaque function of `(x, y)` together with a formal partial-derivative
/// index: `B_{p.q}` stands for the mixed partial of `B` taken `p` times in `x`
/// and `q` times in `y`.
#[derive(Clone, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct Symbol {
    name: Arc<str>,
    dx: u32,
    dy: u32,
}

impl Symbol {
    pub fn new(name: &str) -> Symbol {
        Symbol::with_index(name, 0, 0)
    }

    pub fn with_index(name: &str, dx: u32, dy: u32) -> Symbol {
        Symbol {
            name: Arc::from(name),
            dx,
            dy,
        }
    }

    pub fn name(&self) -> &str {
        &self.name
    }

    pub fn index(&self) -> (u32, u32) {
        (self.dx, self.dy)
    }

    /// The symbol differentiated `p` more times in `x` and `q` more in `y`.
    pub fn shifted(&self, p: u32, q: u32) -> Symbol {
        Symbol {
            name: self.name.clone(),
            dx: self.dx + p,
            dy: self.dy + q,
        }
    }

    /// Same function, derivative index reset to `(0, 0)`.
    pub fn base(&self) -> Symbol {
        self.shifted_to(0, 0)
    }

    pub fn shifted_to(&self, dx: u32, dy: u32) -> Symbol {
        Symbol {
            name: self.name.clone(),
            dx,
            dy,
        }
    }

    pub fn order(&self) -> u32 {
        self.dx + self.dy
    }
}

impl fmt::Display for Symbol {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.dx == 0 && self.dy == 0 {
            write!(f, "{}", self.name)
        } else {
            write!(f, "{}_{{{}.{}}}", self.name, self.dx, self.dy)
        }
    }
}

impl Serialize for Symbol {
    fn serialize<S: serde::Serializer>(&self, s: S) -> Result<S::Ok, S::Error> {
        s.collect_str(self)
    }
}

/// Canonical identity of an atom. The derived ordering is the canonical atom
/// order: `x < y < opaque symbols (by name, then index) < function atoms`.
#[derive(Clone, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum AtomKey {
    X,
    Y,
    Sym(Symbol),
    /// Function applied to an argument, keyed by the canonical text of the
    /// normalized argument.
    Func(Func, Arc<str>),
}

impl fmt::Display for AtomKey {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            AtomKey::X => f.write_str("x"),
            AtomKey::Y => f.write_str("y"),
            AtomKey::Sym(s) => write!(f, "{s}"),
            AtomKey::Func(func, arg) => write!(f, "{func}({arg})"),
        }
    }
}

/// Handle to an interned atom.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct AtomId(u32);

struct Entry {
    key: AtomKey,
    func_arg: Option<(Func, RatFunc)>,
}

#[derive(Default)]
struct Interner {
    entries: Vec<Entry>,
    index: HashMap<AtomKey, AtomId>,
}

impl Interner {
    fn insert(&mut self, key: AtomKey, func_arg: Option<(Func, RatFunc)>) -> AtomId {
        if let Some(&id) = self.index.get(&key) {
            return id;
        }
        let id = AtomId(self.entries.len() as u32);
        self.index.insert(key.clone(), id);
        self.entries.push(Entry { key, func_arg });
        id
    }
}

fn interner() -> &'static RwLock<Interner> {
    static INTERNER: OnceLock<RwLock<Interner>> = OnceLock::new();
    INTERNER.get_or_init(|| {
        let mut i = Interner::default();
        i.insert(AtomKey::X, None);
        i.insert(AtomKey::Y, None);
        RwLock::new(i)
    })
}

fn read() -> RwLockReadGuard<'static, Interner> {
    interner().read().unwrap_or_else(|e| e.into_inner())
}

impl AtomId {
    pub const X: AtomId = AtomId(0);
    pub const Y: AtomId = AtomId(1);

    pub fn symbol(sym: &Symbol) -> AtomId {
        let key = AtomKey::Sym(sym.clone());
        if let Some(&id) = read().index.get(&key) {
            return id;
        }
        let mut w = interner().write().unwrap_or_else(|e| e.into_inner());
        w.insert(key, None)
    }

    pub fn func(func: Func, arg: RatFunc) -> AtomId {
        let key = AtomKey::Func(func, Arc::from(arg.to_string()));
        if let Some(&id) = read().index.get(&key) {
            return id;
        }
        let mut w = interner().write().unwrap_or_else(|e| e.into_inner());
        w.insert(key, Some((func, arg)))
    }

    pub fn key(self) -> AtomKey {
        read().entries[self.0 as usize].key.clone()
    }

    pub fn as_symbol(self) -> Option<Symbol> {
        match self.key() {
            AtomKey::Sym(s) => Some(s),
            _ => None,
        }
    }

    pub fn func_arg(self) -> Option<(Func, RatFunc)> {
        read().entries[self.0 as usize].func_arg.clone()
    }

    pub fn is_func(self) -> bool {
        matches!(read().entries[self.0 as usize].key, AtomKey::Func(..))
    }
}

impl fmt::Display for AtomId {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}", self.key())
    }
}

/// Compare two atoms in canonical order.
pub fn canonical_cmp(a: AtomId, b: AtomId) -> Ordering {
    if a == b {
        return Ordering::Equal;
    }
    let g = read();
    g.entries[a.0 as usize].key.cmp(&g.entries[b.0 as usize].key)
}

/// Sort atoms canonically, returning each atom's canonical rank.
pub fn canonical_ranks(atoms: &[AtomId]) -> HashMap<AtomId, usize> {
    let g = read();
    let mut sorted: Vec<AtomId> = atoms.to_vec();
    sorted.sort_by(|a, b| g.entries[a.0 as usize].key.cmp(&g.entries[b.0 as usize].key));
    sorted.dedup();
    sorted.into_iter().enumerate().map(|(i, a)| (a, i)).collect()
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn canonical_order_puts_coordinates_first() {
        let b = AtomId::symbol(&Symbol::new("B"));
        let a01 = AtomId::symbol(&Symbol::with_index("A", 0, 1));
        let a = AtomId::symbol(&Symbol::new("A"));
        assert_eq!(canonical_cmp(AtomId::X, AtomId::Y), Ordering::Less);
        assert_eq!(canonical_cmp(AtomId::Y, a), Ordering::Less);
        assert_eq!(canonical_cmp(a, a01), Ordering::Less);
        assert_eq!(canonical_cmp(a01, b), Ordering::Less);
    }

    #[test]
    fn interning_is_idempotent() {
        let s = Symbol::with_index("Zq", 2, 1);
        assert_eq!(AtomId::symbol(&s), AtomId::symbol(&s.clone()));
        assert_eq!(s.to_string(), "Zq_{2.1}");
        assert_eq!(s.shifted(1, 0).index(), (3, 1));
    }
}
