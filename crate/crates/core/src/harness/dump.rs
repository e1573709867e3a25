//! Full serializations of failing instances, so a counterexample can be
//! rebuilt without the seed.

use serde::Serialize;

use crate::extensions::SplitExtension;
use crate::groupcoh::{FiniteGroup, GModule};
use crate::modlin::Mat;
use crate::site::SiteModel;

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct GroupDump {
    pub name: String,
    pub table: Vec<Vec<usize>>,
}

impl GroupDump {
    pub fn new(g: &FiniteGroup) -> Self {
        GroupDump { name: g.name().to_string(), table: g.table() }
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct ModuleDump {
    pub invariants: Vec<i64>,
    /// the matrix of every group element, in table order
    pub action: Vec<Vec<Vec<i64>>>,
}

fn rows(m: &Mat) -> Vec<Vec<i64>> {
    m.to_rows()
}

impl ModuleDump {
    pub fn new(m: &GModule) -> Self {
        ModuleDump {
            invariants: m.module.invariants().to_vec(),
            action: (0..m.group.order()).map(|g| rows(m.action(g))).collect(),
        }
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct ExtensionDump {
    pub group: GroupDump,
    pub a: ModuleDump,
    pub b: ModuleDump,
    pub c: ModuleDump,
    pub iota: Vec<Vec<i64>>,
    pub pi: Vec<Vec<i64>>,
    pub section: Vec<Vec<i64>>,
}

impl ExtensionDump {
    pub fn new(e: &SplitExtension) -> Self {
        ExtensionDump {
            group: GroupDump::new(e.group()),
            a: ModuleDump::new(&e.a),
            b: ModuleDump::new(&e.b),
            c: ModuleDump::new(&e.c),
            iota: rows(&e.iota.matrix),
            pi: rows(&e.pi.matrix),
            section: rows(&e.s.matrix),
        }
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct LocalDump {
    pub name: String,
    pub table: Vec<Vec<usize>>,
    pub embedding: Vec<usize>,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct SiteDump {
    pub group: GroupDump,
    pub modulus: i64,
    pub twist: Vec<i64>,
    pub locals: Vec<LocalDump>,
}

impl SiteDump {
    pub fn new(s: &SiteModel) -> Self {
        SiteDump {
            group: GroupDump::new(&s.group),
            modulus: s.modulus,
            twist: s.twist.clone(),
            locals: s
                .locals
                .iter()
                .map(|l| LocalDump { name: l.name.clone(), table: l.group.table(), embedding: l.embedding.clone() })
                .collect(),
        }
    }
}
