//! Instance documents: JSON files declaring named groups, rings, modules and
//! chains, and one instance of a given kind built from them.

use std::collections::{BTreeMap, BTreeSet};
use std::fmt;
use std::path::Path;

use serde::{Deserialize, Serialize};

use crate::cohomtree::{Tree, TreeAction};
use crate::cosheafside::{CosheafTable, ProSheafSystem};
use crate::error::Error;
use crate::finab::{AbHom, FinAbGroup, IntMatrix};
use crate::ringmod::{
    dual_module, FinGroup, FinModule, FiniteRing, ModHom, ModuleSum, RingKind, Side,
};
use crate::sheafside::{sheaf_of_etale, EtaleSystem, PresheafTable};
use crate::stone::LevelChain;

/// A problem with an input file, located by a dotted field path.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct DocumentError {
    pub path: String,
    pub message: String,
}

impl DocumentError {
    pub fn new(path: impl Into<String>, message: impl Into<String>) -> Self {
        DocumentError {
            path: path.into(),
            message: message.into(),
        }
    }

    fn at(path: &str) -> impl FnOnce(Error) -> DocumentError + '_ {
        move |e| DocumentError::new(path, e.to_string())
    }
}

impl fmt::Display for DocumentError {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.path.is_empty() {
            write!(f, "{}", self.message)
        } else {
            write!(f, "{}: {}", self.path, self.message)
        }
    }
}

impl std::error::Error for DocumentError {}

type DocResult<T> = std::result::Result<T, DocumentError>;

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum Kind {
    Group,
    Ring,
    Module,
    Chain,
    Sheaf,
    Cosheaf,
    Etale,
    Prosheaf,
    TreeAction,
}

impl fmt::Display for Kind {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let s = serde_json::to_value(self).expect("unit variant");
        write!(f, "{}", s.as_str().expect("string"))
    }
}

/// A finite group, given by name or by its multiplication table.
#[derive(Clone, Debug, Deserialize)]
#[serde(rename_all = "snake_case", deny_unknown_fields)]
pub enum GroupDef {
    Trivial,
    KleinFour,
    Cyclic(usize),
    Symmetric(usize),
    /// Direct product of previously named groups.
    Product(Vec<String>),
    Table(Vec<Vec<usize>>),
}

#[derive(Clone, Debug, Deserialize)]
#[serde(rename_all = "snake_case", deny_unknown_fields)]
pub enum RingDef {
    Cyclic(i64),
    GroupRing { modulus: i64, group: String },
}

#[derive(Clone, Debug, Deserialize)]
#[serde(rename_all = "snake_case", deny_unknown_fields)]
pub enum ActionDef {
    Trivial,
    Regular,
    /// One matrix per additive generator of the ring.
    Matrices(Vec<Vec<Vec<i64>>>),
}

fn left() -> Side {
    Side::Left
}

/// A module: an abelian group with an action, a direct sum of named
/// modules, or the character dual of a named module.
#[derive(Clone, Debug, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct ModuleDef {
    pub ring: String,
    #[serde(default = "left")]
    pub side: Side,
    #[serde(default)]
    pub group: Option<Vec<i64>>,
    #[serde(default)]
    pub action: Option<ActionDef>,
    #[serde(default)]
    pub sum: Option<Vec<String>>,
    #[serde(default)]
    pub dual_of: Option<String>,
}

#[derive(Clone, Debug, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct ChainDef {
    pub sizes: Vec<usize>,
    #[serde(default)]
    pub projections: Vec<Vec<usize>>,
}

#[derive(Clone, Copy, Debug, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum NamedMatrix {
    Zero,
    Identity,
}

/// A matrix whose columns are the images of the source generators, or one
/// of the names `"zero"` and `"identity"`.
#[derive(Clone, Debug, Deserialize)]
#[serde(untagged)]
pub enum MatrixDef {
    Named(NamedMatrix),
    Rows(Vec<Vec<i64>>),
}

/// A map between the values on two clopens differing by one point.
#[derive(Clone, Debug, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct ElementaryMap {
    pub from: Vec<usize>,
    pub to: Vec<usize>,
    pub matrix: MatrixDef,
}

#[derive(Clone, Debug, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct GroupInstance {
    pub factors: Vec<i64>,
}

#[derive(Clone, Debug, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct RingInstance {
    pub ring: String,
}

#[derive(Clone, Debug, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct ModuleInstance {
    pub module: String,
}

#[derive(Clone, Debug, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct ChainInstance {
    pub chain: String,
}

/// A table on one level of a chain: either the product (or sum) of named
/// fibres over a discrete space, or values on every clopen, indexed by the
/// bit mask of the clopen, with the maps that drop or add one point.
#[derive(Clone, Debug, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct TableInstance {
    #[serde(default)]
    pub ring: Option<String>,
    #[serde(default)]
    pub chain: Option<String>,
    #[serde(default)]
    pub level: usize,
    #[serde(default)]
    pub fibres: Option<Vec<String>>,
    #[serde(default)]
    pub values: Option<Vec<String>>,
    #[serde(default)]
    pub maps: Vec<ElementaryMap>,
}

#[derive(Clone, Debug, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct SystemInstance {
    pub ring: String,
    pub chain: String,
    pub fibres: Vec<Vec<String>>,
    /// `maps[i][x]` for point `x` of level `i + 1`: from the fibre below
    /// for étale systems, to the fibre below for profinite ones.
    #[serde(default)]
    pub maps: Vec<Vec<MatrixDef>>,
}

#[derive(Clone, Debug, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct TreeInstance {
    pub group: String,
    pub vertices: usize,
    pub edges: Vec<(usize, usize)>,
    /// `action[g][v]`; omitted for the trivial action.
    #[serde(default)]
    pub action: Option<Vec<Vec<usize>>>,
    pub modulus: i64,
    /// A module over `(Z/modulus)[G]`; omitted for `Z/modulus` with the
    /// trivial action.
    #[serde(default)]
    pub coefficients: Option<String>,
}

/// The raw document as read from disk.
#[derive(Clone, Debug, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct InstanceDocument {
    pub kind: Kind,
    #[serde(default)]
    pub description: String,
    #[serde(default)]
    pub groups: BTreeMap<String, GroupDef>,
    #[serde(default)]
    pub rings: BTreeMap<String, RingDef>,
    #[serde(default)]
    pub modules: BTreeMap<String, ModuleDef>,
    #[serde(default)]
    pub chains: BTreeMap<String, ChainDef>,
    pub instance: serde_json::Value,
}

/// A resolved instance.
#[derive(Clone, Debug)]
pub enum Instance {
    Group(FinAbGroup),
    Ring(FiniteRing),
    Module(FinModule),
    /// Sizes and projections, kept unvalidated so that `validate` can
    /// report a non-surjective projection.
    Chain {
        sizes: Vec<usize>,
        projections: Vec<Vec<usize>>,
    },
    Sheaf(PresheafTable),
    Cosheaf(CosheafTable),
    Etale(EtaleSystem),
    Prosheaf(ProSheafSystem),
    Tree(TreeDocument),
}

/// A group acting on a graph, with coefficients. The graph need not be a
/// tree; `tree_error` records why [`Tree::new`] rejected it.
#[derive(Clone, Debug)]
pub struct TreeDocument {
    pub action: TreeAction,
    pub modulus: i64,
    pub coefficients: FinModule,
    pub tree_error: Option<String>,
}

fn from_value<T: serde::de::DeserializeOwned>(
    value: serde_json::Value,
    prefix: &str,
) -> DocResult<T> {
    serde_path_to_error::deserialize(value).map_err(|e| {
        let inner = e.path().to_string();
        let path = if inner == "." {
            prefix.to_string()
        } else {
            format!("{prefix}.{inner}")
        };
        DocumentError::new(path, e.into_inner().to_string())
    })
}

/// Reads and resolves an instance file.
pub fn parse_instance(path: &Path) -> DocResult<(InstanceDocument, Instance)> {
    let text = std::fs::read_to_string(path)
        .map_err(|e| DocumentError::new("", format!("cannot read {}: {e}", path.display())))?;
    parse_instance_str(&text)
}

pub fn parse_instance_str(text: &str) -> DocResult<(InstanceDocument, Instance)> {
    let value: serde_json::Value = serde_json::from_str(text)
        .map_err(|e| DocumentError::new("", format!("invalid JSON: {e}")))?;
    let doc: InstanceDocument = serde_path_to_error::deserialize(value).map_err(|e| {
        let p = e.path().to_string();
        DocumentError::new(
            if p == "." { String::new() } else { p },
            e.into_inner().to_string(),
        )
    })?;
    let instance = Resolver::new(&doc).instance()?;
    Ok((doc, instance))
}

fn build_matrix(
    rows: &[Vec<i64>],
    target: usize,
    source: usize,
    path: &str,
) -> DocResult<IntMatrix> {
    let shape_ok = if target == 0 {
        rows.is_empty() || rows.iter().all(|r| r.is_empty())
    } else {
        rows.len() == target && rows.iter().all(|r| r.len() == source)
    };
    if !shape_ok {
        return Err(DocumentError::new(
            path,
            format!("expected a {target}×{source} matrix"),
        ));
    }
    let mut m = IntMatrix::zeros(target, source);
    for (i, row) in rows.iter().enumerate().take(target) {
        for (j, &v) in row.iter().enumerate() {
            m[(i, j)] = v;
        }
    }
    Ok(m)
}

fn mask_of(points: &[usize], n: usize, path: &str) -> DocResult<u32> {
    let mut mask = 0u32;
    for &x in points {
        if x >= n {
            return Err(DocumentError::new(
                path,
                format!("point {x} is not among the {n} points"),
            ));
        }
        if mask >> x & 1 == 1 {
            return Err(DocumentError::new(
                path,
                format!("point {x} is listed twice"),
            ));
        }
        mask |= 1 << x;
    }
    Ok(mask)
}

/// Resolves names with cycle detection.
struct Resolver<'a> {
    doc: &'a InstanceDocument,
    groups: BTreeMap<String, FinGroup>,
    rings: BTreeMap<String, FiniteRing>,
    modules: BTreeMap<String, FinModule>,
    active: BTreeSet<String>,
}

impl<'a> Resolver<'a> {
    fn new(doc: &'a InstanceDocument) -> Self {
        Resolver {
            doc,
            groups: BTreeMap::new(),
            rings: BTreeMap::new(),
            modules: BTreeMap::new(),
            active: BTreeSet::new(),
        }
    }

    fn enter(&mut self, key: String, path: &str) -> DocResult<()> {
        if !self.active.insert(key.clone()) {
            return Err(DocumentError::new(
                path,
                format!("circular reference through {key}"),
            ));
        }
        Ok(())
    }

    fn group(&mut self, name: &str, path: &str) -> DocResult<FinGroup> {
        if let Some(g) = self.groups.get(name) {
            return Ok(g.clone());
        }
        let def = self
            .doc
            .groups
            .get(name)
            .ok_or_else(|| DocumentError::new(path, format!("undeclared group {name:?}")))?
            .clone();
        let here = format!("groups.{name}");
        self.enter(format!("group {name}"), path)?;
        let g = match def {
            GroupDef::Trivial => FinGroup::trivial(),
            GroupDef::KleinFour => FinGroup::klein_four(),
            GroupDef::Cyclic(n) if (1..=crate::ringmod::MAX_GROUP_ORDER).contains(&n) => {
                FinGroup::cyclic(n)
            }
            GroupDef::Cyclic(n) => {
                return Err(DocumentError::new(
                    here,
                    format!("cyclic order {n} out of range"),
                ))
            }
            GroupDef::Symmetric(k) if (1..=4).contains(&k) => FinGroup::symmetric(k),
            GroupDef::Symmetric(k) => {
                return Err(DocumentError::new(
                    here,
                    format!("symmetric degree {k} out of range 1..=4"),
                ))
            }
            GroupDef::Product(names) => {
                let mut acc = FinGroup::trivial();
                for (i, n) in names.iter().enumerate() {
                    let g = self.group(n, &format!("{here}.product[{i}]"))?;
                    acc = FinGroup::product(&acc, &g);
                }
                acc
            }
            GroupDef::Table(t) => {
                FinGroup::from_table(t).map_err(DocumentError::at(&format!("{here}.table")))?
            }
        };
        self.active.remove(&format!("group {name}"));
        self.groups.insert(name.to_string(), g.clone());
        Ok(g)
    }

    fn ring(&mut self, name: &str, path: &str) -> DocResult<FiniteRing> {
        if let Some(r) = self.rings.get(name) {
            return Ok(r.clone());
        }
        let def = self
            .doc
            .rings
            .get(name)
            .ok_or_else(|| DocumentError::new(path, format!("undeclared ring {name:?}")))?
            .clone();
        let here = format!("rings.{name}");
        let r = match def {
            RingDef::Cyclic(m) => {
                FiniteRing::cyclic(m).map_err(DocumentError::at(&format!("{here}.cyclic")))?
            }
            RingDef::GroupRing { modulus, group } => {
                let g = self.group(&group, &format!("{here}.group_ring.group"))?;
                FiniteRing::group_ring(modulus, &g)
                    .map_err(DocumentError::at(&format!("{here}.group_ring")))?
            }
        };
        self.rings.insert(name.to_string(), r.clone());
        Ok(r)
    }

    fn module(&mut self, name: &str, path: &str) -> DocResult<FinModule> {
        if let Some(m) = self.modules.get(name) {
            return Ok(m.clone());
        }
        let def = self
            .doc
            .modules
            .get(name)
            .ok_or_else(|| DocumentError::new(path, format!("undeclared module {name:?}")))?
            .clone();
        let here = format!("modules.{name}");
        self.enter(format!("module {name}"), path)?;
        let ring = self.ring(&def.ring, &format!("{here}.ring"))?;
        let forms = [
            def.group.is_some() || def.action.is_some(),
            def.sum.is_some(),
            def.dual_of.is_some(),
        ];
        if forms.iter().filter(|&&f| f).count() > 1 {
            return Err(DocumentError::new(
                here,
                "give one of group/action, sum or dual_of",
            ));
        }
        let m = if let Some(names) = &def.sum {
            let parts = names
                .iter()
                .enumerate()
                .map(|(i, n)| self.module(n, &format!("{here}.sum[{i}]")))
                .collect::<DocResult<Vec<_>>>()?;
            if parts
                .iter()
                .any(|p| p.ring() != &ring || p.side() != def.side)
            {
                return Err(DocumentError::new(
                    format!("{here}.sum"),
                    "summands over a different ring or side",
                ));
            }
            ModuleSum::new(&ring, def.side, &parts)
                .map_err(DocumentError::at(&here))?
                .module
        } else if let Some(n) = &def.dual_of {
            let m = self.module(n, &format!("{here}.dual_of"))?;
            let d = dual_module(&m);
            if d.ring() != &ring || d.side() != def.side {
                return Err(DocumentError::new(
                    format!("{here}.side"),
                    format!("the dual of {n:?} is a {} module", side_name(d.side())),
                ));
            }
            d
        } else {
            self.plain_module(&def, &ring, &here)?
        };
        self.active.remove(&format!("module {name}"));
        self.modules.insert(name.to_string(), m.clone());
        Ok(m)
    }

    fn plain_module(
        &mut self,
        def: &ModuleDef,
        ring: &FiniteRing,
        here: &str,
    ) -> DocResult<FinModule> {
        if let Some(ActionDef::Regular) = def.action {
            if def.group.is_some() {
                return Err(DocumentError::new(
                    format!("{here}.group"),
                    "the regular module takes its group from the ring",
                ));
            }
            return Ok(FinModule::regular(ring, def.side));
        }
        let factors = def
            .group
            .clone()
            .ok_or_else(|| DocumentError::new(here, "missing field `group`"))?;
        let group =
            FinAbGroup::new(factors).map_err(DocumentError::at(&format!("{here}.group")))?;
        match &def.action {
            None | Some(ActionDef::Trivial) => {
                if let RingKind::Cyclic(_) = ring.kind() {
                    FinModule::over_cyclic(ring, group, def.side)
                        .map_err(|e| DocumentError::new(format!("{here}.group"), e.to_string()))
                } else if ring.as_group_ring().is_some() {
                    FinModule::trivial_action(ring, group, def.side)
                        .map_err(|e| DocumentError::new(format!("{here}.group"), e.to_string()))
                } else {
                    Err(DocumentError::new(
                        format!("{here}.action"),
                        "this ring needs explicit action matrices",
                    ))
                }
            }
            Some(ActionDef::Matrices(ms)) => {
                let path = format!("{here}.action.matrices");
                if ms.len() != ring.rank() {
                    return Err(DocumentError::new(
                        path,
                        format!("expected {} matrices, one per ring generator", ring.rank()),
                    ));
                }
                let r = group.rank();
                let action = ms
                    .iter()
                    .enumerate()
                    .map(|(k, rows)| {
                        let p = format!("{path}[{k}]");
                        let m = build_matrix(rows, r, r, &p)?;
                        AbHom::new(group.clone(), group.clone(), m).map_err(DocumentError::at(&p))
                    })
                    .collect::<DocResult<Vec<_>>>()?;
                FinModule::new(group, ring.clone(), action, def.side)
                    .map_err(DocumentError::at(&path))
            }
            Some(ActionDef::Regular) => unreachable!("handled above"),
        }
    }

    fn chain(&self, name: &str, path: &str) -> DocResult<LevelChain> {
        let def = self
            .doc
            .chains
            .get(name)
            .ok_or_else(|| DocumentError::new(path, format!("undeclared chain {name:?}")))?;
        let chain = LevelChain::new(def.sizes.clone(), def.projections.clone())
            .map_err(DocumentError::at(&format!("chains.{name}")))?;
        Ok(chain)
    }

    fn map(
        &self,
        def: &MatrixDef,
        source: &FinModule,
        target: &FinModule,
        path: &str,
    ) -> DocResult<ModHom> {
        let f = match def {
            MatrixDef::Named(NamedMatrix::Zero) => {
                AbHom::zero(source.group().clone(), target.group().clone())
            }
            MatrixDef::Named(NamedMatrix::Identity) => {
                if source.group() != target.group() {
                    return Err(DocumentError::new(
                        path,
                        "identity between different groups",
                    ));
                }
                AbHom::identity(source.group().clone())
            }
            MatrixDef::Rows(rows) => {
                let m = build_matrix(rows, target.group().rank(), source.group().rank(), path)?;
                AbHom::new(source.group().clone(), target.group().clone(), m)
                    .map_err(DocumentError::at(path))?
            }
        };
        ModHom::new(source.clone(), target.clone(), f).map_err(DocumentError::at(path))
    }

    fn instance(mut self) -> DocResult<Instance> {
        let v = self.doc.instance.clone();
        Ok(match self.doc.kind {
            Kind::Group => {
                let g: GroupInstance = from_value(v, "instance")?;
                Instance::Group(
                    FinAbGroup::new(g.factors).map_err(DocumentError::at("instance.factors"))?,
                )
            }
            Kind::Ring => {
                let r: RingInstance = from_value(v, "instance")?;
                Instance::Ring(self.ring(&r.ring, "instance.ring")?)
            }
            Kind::Module => {
                let m: ModuleInstance = from_value(v, "instance")?;
                Instance::Module(self.module(&m.module, "instance.module")?)
            }
            Kind::Chain => {
                let c: ChainInstance = from_value(v, "instance")?;
                let def = self.doc.chains.get(&c.chain).ok_or_else(|| {
                    DocumentError::new("instance.chain", format!("undeclared chain {:?}", c.chain))
                })?;
                crate::stone::validate_chain(&def.sizes, &def.projections)
                    .map_err(DocumentError::at(&format!("chains.{}", c.chain)))?;
                Instance::Chain {
                    sizes: def.sizes.clone(),
                    projections: def.projections.clone(),
                }
            }
            Kind::Sheaf | Kind::Cosheaf => {
                let t: TableInstance = from_value(v, "instance")?;
                self.table(t)?
            }
            Kind::Etale | Kind::Prosheaf => {
                let s: SystemInstance = from_value(v, "instance")?;
                self.system(s)?
            }
            Kind::TreeAction => {
                let t: TreeInstance = from_value(v, "instance")?;
                Instance::Tree(self.tree(t)?)
            }
        })
    }

    fn table(&mut self, t: TableInstance) -> DocResult<Instance> {
        let cosheaf = self.doc.kind == Kind::Cosheaf;
        let ring = match &t.ring {
            Some(r) => Some(self.ring(r, "instance.ring")?),
            None => None,
        };
        if let Some(names) = &t.fibres {
            if t.values.is_some() || !t.maps.is_empty() || t.chain.is_some() {
                return Err(DocumentError::new(
                    "instance.fibres",
                    "fibres exclude chain, values and maps",
                ));
            }
            let fibres = names
                .iter()
                .enumerate()
                .map(|(i, n)| self.module(n, &format!("instance.fibres[{i}]")))
                .collect::<DocResult<Vec<_>>>()?;
            let ring = ring
                .or_else(|| fibres.first().map(|m| m.ring().clone()))
                .ok_or_else(|| {
                    DocumentError::new("instance.ring", "an empty product needs a ring")
                })?;
            let side = fibres.first().map(|m| m.side()).unwrap_or(Side::Left);
            let at = DocumentError::at("instance.fibres");
            return if cosheaf {
                let s = ProSheafSystem::single_level(&ring, side, fibres).map_err(at)?;
                crate::cosheafside::coshf_of_prosheaf(&s, 0)
                    .map(Instance::Cosheaf)
                    .map_err(DocumentError::at("instance.fibres"))
            } else {
                let e = EtaleSystem::single_level(&ring, side, fibres).map_err(at)?;
                sheaf_of_etale(&e, 0)
                    .map(Instance::Sheaf)
                    .map_err(DocumentError::at("instance.fibres"))
            };
        }
        let names = t
            .values
            .as_ref()
            .ok_or_else(|| DocumentError::new("instance", "give either fibres or values"))?;
        let values = names
            .iter()
            .enumerate()
            .map(|(i, n)| self.module(n, &format!("instance.values[{i}]")))
            .collect::<DocResult<Vec<_>>>()?;
        let chain = match &t.chain {
            Some(c) => self.chain(c, "instance.chain")?,
            None => {
                let n = values.len().trailing_zeros() as usize;
                if values.len() != 1 << n {
                    return Err(DocumentError::new(
                        "instance.values",
                        "the number of values must be a power of two",
                    ));
                }
                LevelChain::single(n)
            }
        };
        chain
            .check_level(t.level)
            .map_err(DocumentError::at("instance.level"))?;
        let n = chain.size(t.level);
        if values.len() != 1 << n {
            return Err(DocumentError::new(
                "instance.values",
                format!("{n} points need {} values", 1 << n),
            ));
        }
        let mut elementary = BTreeMap::new();
        for (i, m) in t.maps.iter().enumerate() {
            let path = format!("instance.maps[{i}]");
            let from = mask_of(&m.from, n, &format!("{path}.from"))?;
            let to = mask_of(&m.to, n, &format!("{path}.to"))?;
            let (big, small) = if cosheaf { (to, from) } else { (from, to) };
            let dropped = big & !small;
            if small & !big != 0 || dropped.count_ones() != 1 {
                let want = if cosheaf { "add" } else { "drop" };
                return Err(DocumentError::new(
                    path,
                    format!("a map must {want} exactly one point"),
                ));
            }
            let x = dropped.trailing_zeros() as usize;
            let f = self.map(
                &m.matrix,
                &values[from as usize],
                &values[to as usize],
                &format!("{path}.matrix"),
            )?;
            if elementary.insert((big, x), f).is_some() {
                return Err(DocumentError::new(path, "map given twice"));
            }
        }
        let at = DocumentError::at("instance");
        Ok(if cosheaf {
            Instance::Cosheaf(
                CosheafTable::from_elementary(chain, t.level, values, &elementary).map_err(at)?,
            )
        } else {
            Instance::Sheaf(
                PresheafTable::from_elementary(chain, t.level, values, &elementary).map_err(at)?,
            )
        })
    }

    fn system(&mut self, s: SystemInstance) -> DocResult<Instance> {
        let ring = self.ring(&s.ring, "instance.ring")?;
        let chain = self.chain(&s.chain, "instance.chain")?;
        if s.fibres.len() != chain.num_levels() {
            return Err(DocumentError::new(
                "instance.fibres",
                format!("the chain has {} levels", chain.num_levels()),
            ));
        }
        let mut fibres = Vec::new();
        for (l, row) in s.fibres.iter().enumerate() {
            if row.len() != chain.size(l) {
                return Err(DocumentError::new(
                    format!("instance.fibres[{l}]"),
                    format!("level {l} has {} points", chain.size(l)),
                ));
            }
            let mods = row
                .iter()
                .enumerate()
                .map(|(x, n)| self.module(n, &format!("instance.fibres[{l}][{x}]")))
                .collect::<DocResult<Vec<_>>>()?;
            fibres.push(mods);
        }
        let side = fibres
            .iter()
            .flatten()
            .next()
            .map(|m| m.side())
            .unwrap_or(Side::Left);
        if s.maps.len() + 1 != chain.num_levels() {
            return Err(DocumentError::new(
                "instance.maps",
                format!(
                    "{} levels need {} lists of maps",
                    chain.num_levels(),
                    chain.num_levels() - 1
                ),
            ));
        }
        let etale = self.doc.kind == Kind::Etale;
        let mut maps = Vec::new();
        for (i, row) in s.maps.iter().enumerate() {
            if row.len() != chain.size(i + 1) {
                return Err(DocumentError::new(
                    format!("instance.maps[{i}]"),
                    format!("level {} has {} points", i + 1, chain.size(i + 1)),
                ));
            }
            let mut out = Vec::new();
            for (x, m) in row.iter().enumerate() {
                let y = chain.projections()[i][x];
                let (below, above) = (&fibres[i][y], &fibres[i + 1][x]);
                let path = format!("instance.maps[{i}][{x}]");
                out.push(if etale {
                    self.map(m, below, above, &path)?
                } else {
                    self.map(m, above, below, &path)?
                });
            }
            maps.push(out);
        }
        let at = DocumentError::at("instance");
        Ok(if etale {
            Instance::Etale(EtaleSystem::new(chain, ring, side, fibres, maps).map_err(at)?)
        } else {
            Instance::Prosheaf(ProSheafSystem::new(chain, ring, side, fibres, maps).map_err(at)?)
        })
    }

    fn tree(&mut self, t: TreeInstance) -> DocResult<TreeDocument> {
        let group = self.group(&t.group, "instance.group")?;
        let tree_error = Tree::new(t.vertices, t.edges.clone())
            .err()
            .map(|e| e.to_string());
        let graph =
            Tree::from_graph(t.vertices, t.edges).map_err(DocumentError::at("instance.edges"))?;
        let action = match t.action {
            Some(a) => TreeAction::new(group.clone(), graph, a),
            None => TreeAction::trivial(group.clone(), graph),
        }
        .map_err(DocumentError::at("instance.action"))?;
        let ring = FiniteRing::group_ring(t.modulus, &group)
            .map_err(DocumentError::at("instance.modulus"))?;
        let coefficients = match &t.coefficients {
            Some(n) => {
                let m = self.module(n, "instance.coefficients")?;
                if m.ring() != &ring || m.side() != Side::Left {
                    return Err(DocumentError::new(
                        "instance.coefficients",
                        "coefficients must be a left module over (Z/modulus)[G]",
                    ));
                }
                m
            }
            None => FinModule::trivial_action(&ring, FinAbGroup::cyclic(t.modulus), Side::Left)
                .map_err(DocumentError::at("instance.modulus"))?,
        };
        Ok(TreeDocument {
            action,
            modulus: t.modulus,
            coefficients,
            tree_error,
        })
    }
}

pub(crate) fn side_name(s: Side) -> &'static str {
    match s {
        Side::Left => "left",
        Side::Right => "right",
    }
}
