//! Global variable registry.
//!
//! Every indeterminate used anywhere in the library (deformation parameters,
//! geometric coordinates, weight variables, ...) is interned once and then
//! referred to by a small integer id. Monomial orders use the id order, so the
//! first-interned variable is the largest in lexicographic comparisons.

use std::fmt;
use std::sync::atomic::{AtomicBool, Ordering};
use std::sync::{Mutex, OnceLock};

const MAX_VARS: usize = 4096;

static IS_COORD: [AtomicBool; MAX_VARS] = [const { AtomicBool::new(false) }; MAX_VARS];

#[derive(Clone, Copy, Debug, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct Var(pub(crate) u16);

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum VarKind {
    /// A coefficient-field parameter (k, lambda_i, q, t, ...).
    Param,
    /// A coordinate on which derivations act.
    Coord,
}

struct Registry {
    names: Vec<String>,
    kinds: Vec<VarKind>,
}

fn registry() -> &'static Mutex<Registry> {
    static REG: OnceLock<Mutex<Registry>> = OnceLock::new();
    REG.get_or_init(|| {
        // Common names are pre-interned so that ids (and therefore orders and
        // renderings) do not depend on call order.
        let mut reg = Registry { names: Vec::new(), kinds: Vec::new() };
        let params = ["k", "l1", "l2", "l3", "p", "q", "t", "alpha", "theta", "z", "c"];
        for p in params {
            reg.names.push(p.to_string());
            reg.kinds.push(VarKind::Param);
        }
        for prefix in ["z", "x", "y"] {
            for i in 1..=8 {
                reg.names.push(format!("{prefix}{i}"));
                reg.kinds.push(VarKind::Coord);
            }
        }
        for prefix in ["lam", "X", "Y", "u", "v"] {
            for i in 1..=8 {
                reg.names.push(format!("{prefix}{i}"));
                reg.kinds.push(VarKind::Param);
            }
        }
        for (i, kind) in reg.kinds.iter().enumerate() {
            IS_COORD[i].store(*kind == VarKind::Coord, Ordering::Relaxed);
        }
        Mutex::new(reg)
    })
}

impl Var {
    /// Interns `name` as a parameter (or returns the existing id).
    pub fn param(name: &str) -> Var {
        Self::intern(name, VarKind::Param)
    }

    /// Interns `name` as a coordinate (or returns the existing id).
    pub fn coord(name: &str) -> Var {
        Self::intern(name, VarKind::Coord)
    }

    fn intern(name: &str, kind: VarKind) -> Var {
        let mut reg = registry().lock().unwrap();
        if let Some(i) = reg.names.iter().position(|n| n == name) {
            return Var(i as u16);
        }
        assert!(reg.names.len() < MAX_VARS, "variable registry exhausted");
        reg.names.push(name.to_string());
        reg.kinds.push(kind);
        let id = reg.names.len() - 1;
        IS_COORD[id].store(kind == VarKind::Coord, Ordering::Relaxed);
        Var(id as u16)
    }

    pub fn name(self) -> String {
        registry().lock().unwrap().names[self.0 as usize].clone()
    }

    pub fn kind(self) -> VarKind {
        registry().lock().unwrap().kinds[self.0 as usize]
    }

    pub fn is_coord(self) -> bool {
        // Force initialisation of the pre-interned names.
        let _ = registry();
        IS_COORD[self.0 as usize].load(Ordering::Relaxed)
    }

    pub fn id(self) -> u16 {
        self.0
    }
}

impl fmt::Display for Var {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(&self.name())
    }
}

/// Convenience: the deformation parameter `k`.
pub fn k() -> Var {
    Var::param("k")
}
