//! Interned polynomial variables.

use std::collections::HashMap;
use std::fmt;
use std::sync::{Arc, OnceLock, RwLock};

/// A polynomial variable. Names are interned process-wide; the four
/// bracket variables have fixed ids.
#[derive(Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct Var(u32);

struct Interner {
    names: Vec<Arc<str>>,
    ids: HashMap<Arc<str>, u32>,
}

fn interner() -> &'static RwLock<Interner> {
    static INTERNER: OnceLock<RwLock<Interner>> = OnceLock::new();
    INTERNER.get_or_init(|| {
        let mut it = Interner {
            names: Vec::new(),
            ids: HashMap::new(),
        };
        for name in ["d", "l", "m", "n"] {
            let arc: Arc<str> = Arc::from(name);
            it.ids.insert(arc.clone(), it.names.len() as u32);
            it.names.push(arc);
        }
        RwLock::new(it)
    })
}

impl Var {
    /// The derivation `∂`, written `d`.
    pub const D: Var = Var(0);
    /// The bracket variable `λ`, written `l`.
    pub const LAMBDA: Var = Var(1);
    /// The second bracket variable `μ`, written `m`.
    pub const MU: Var = Var(2);
    /// A third bracket variable `ν`, written `n`.
    pub const NU: Var = Var(3);

    /// Interns `name`. The Greek spellings `∂ λ μ ν` map onto `d l m n` and
    /// a trailing `′` onto `'`.
    pub fn new(name: &str) -> Var {
        let canonical = canonical_name(name);
        if let Some(&id) = interner().read().unwrap().ids.get(canonical.as_str()) {
            return Var(id);
        }
        let mut it = interner().write().unwrap();
        if let Some(&id) = it.ids.get(canonical.as_str()) {
            return Var(id);
        }
        let arc: Arc<str> = Arc::from(canonical.as_str());
        let id = it.names.len() as u32;
        it.ids.insert(arc.clone(), id);
        it.names.push(arc);
        Var(id)
    }

    pub fn name(&self) -> Arc<str> {
        interner().read().unwrap().names[self.0 as usize].clone()
    }

    pub fn id(&self) -> u32 {
        self.0
    }

    /// True for `d`, `l`, `m`, `n`.
    pub fn is_bracket_var(&self) -> bool {
        self.0 < 4
    }

    /// Display order key: `d < l < m < n < everything else by name`.
    pub fn order_key(&self) -> (u32, Arc<str>) {
        if self.is_bracket_var() {
            (self.0, self.name())
        } else {
            (4, self.name())
        }
    }
}

fn canonical_name(name: &str) -> String {
    match name {
        "∂" => "d".into(),
        "λ" => "l".into(),
        "μ" => "m".into(),
        "ν" => "n".into(),
        other => other.replace('′', "'"),
    }
}

impl fmt::Display for Var {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(&self.name())
    }
}

impl fmt::Debug for Var {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(&self.name())
    }
}
