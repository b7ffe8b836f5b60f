//! JSON ingestion: groups, G-sets, maps, spans, complexes and caps.

use std::fmt;
use std::path::Path;
use std::sync::Arc;

use anyhow::Result;
use serde::de::DeserializeOwned;
use serde::Deserialize;
use serde_json::Value;

use mackey_sk::group::DEFAULT_ORDER_CAP;
use mackey_sk::gset::DEFAULT_HOM_CAP;
use mackey_sk::sk::DEFAULT_OBJECT_CAP;
use mackey_sk::{groups, FiniteGroup, GMap, GSet, Span, Subgroup};

/// Marks an error as malformed input (exit code 2).
#[derive(Debug)]
pub struct BadInput(pub String);

impl fmt::Display for BadInput {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(&self.0)
    }
}

impl std::error::Error for BadInput {}

pub fn bad<T>(msg: impl Into<String>) -> Result<T> {
    Err(BadInput(msg.into()).into())
}

#[derive(Clone, Copy, Debug)]
pub struct Caps {
    pub group: usize,
    pub hom: usize,
    pub object: usize,
}

impl Caps {
    /// Defaults overridden by `MACKEY_SK_GROUP_CAP`, `MACKEY_SK_HOM_CAP`
    /// and `MACKEY_SK_OBJECT_CAP`.
    pub fn from_env() -> Result<Self> {
        let read = |var: &str, default: usize| -> Result<usize> {
            match std::env::var(var) {
                Ok(v) => v
                    .trim()
                    .parse()
                    .map_err(|_| BadInput(format!("{var} must be a positive integer, got {v:?}")).into()),
                Err(_) => Ok(default),
            }
        };
        Ok(Caps {
            group: read("MACKEY_SK_GROUP_CAP", DEFAULT_ORDER_CAP)?,
            hom: read("MACKEY_SK_HOM_CAP", DEFAULT_HOM_CAP)?,
            object: read("MACKEY_SK_OBJECT_CAP", DEFAULT_OBJECT_CAP)?,
        })
    }
}

pub fn read_json(path: &Path) -> Result<Value> {
    let text = std::fs::read_to_string(path)
        .map_err(|e| BadInput(format!("cannot read {}: {e}", path.display())))?;
    serde_json::from_str(&text).map_err(|e| BadInput(format!("{}: {e}", path.display())).into())
}

pub fn parse<T: DeserializeOwned>(v: Value, what: &str) -> Result<T> {
    serde_json::from_value(v).map_err(|e| BadInput(format!("malformed {what}: {e}")).into())
}

/// Named groups accepted wherever a group reference is expected.
pub fn fixture(name: &str) -> Option<Arc<FiniteGroup>> {
    let lower = name.to_ascii_lowercase();
    if lower == "e" || lower == "trivial" || lower == "c1" {
        return Some(groups::trivial());
    }
    if let Some(g) = groups::fixtures()
        .into_iter()
        .find(|g| g.name().eq_ignore_ascii_case(name))
    {
        return Some(g);
    }
    let n: usize = lower.get(1..)?.parse().ok()?;
    match lower.as_bytes()[0] {
        b'c' if n >= 1 && n <= 1000 => Some(groups::cyclic(n)),
        b'd' if n >= 2 && n <= 500 => Some(groups::dihedral(n)),
        _ => None,
    }
}

#[derive(Deserialize)]
#[serde(untagged)]
enum GroupJson {
    Fixture {
        fixture: String,
    },
    Table {
        #[serde(default)]
        name: Option<String>,
        #[serde(default)]
        order: Option<usize>,
        table: Vec<Vec<usize>>,
        #[serde(default)]
        labels: Option<Vec<String>>,
    },
    Perms {
        #[serde(default)]
        name: Option<String>,
        degree: usize,
        generators: Vec<Vec<usize>>,
    },
}

/// A group from a fixture name, an inline JSON object, or (for strings that
/// are not fixture names) a path to a group JSON file.
pub fn group_from_value(v: &Value, caps: &Caps) -> Result<Arc<FiniteGroup>> {
    if let Value::String(s) = v {
        if let Some(g) = fixture(s) {
            return Ok(g);
        }
        let path = Path::new(s);
        if path.exists() {
            return group_from_value(&read_json(path)?, caps);
        }
        return bad(format!("unknown group {s:?}"));
    }
    let g = match parse::<GroupJson>(v.clone(), "group")? {
        GroupJson::Fixture { fixture: name } => {
            fixture(&name).ok_or_else(|| BadInput(format!("unknown group {name:?}")))?
        }
        GroupJson::Table { name, order, table, labels } => {
            if order.is_some_and(|n| n != table.len()) {
                return bad(format!("order {} does not match a table with {} rows", order.unwrap(), table.len()));
            }
            if table.len() > caps.group {
                return bad(format!("group order {} exceeds the cap {}", table.len(), caps.group));
            }
            let name = name.unwrap_or_else(|| format!("G{}", table.len()));
            Arc::new(FiniteGroup::from_table(name, table, labels).map_err(|e| BadInput(e.to_string()))?)
        }
        GroupJson::Perms { name, degree, generators } => {
            let name = name.unwrap_or_else(|| "G".into());
            let g = FiniteGroup::from_generators(name, degree, &generators, caps.group)
                .map_err(|e| BadInput(e.to_string()))?;
            Arc::new(g)
        }
    };
    Ok(g)
}

pub fn group_ref(s: &str, caps: &Caps) -> Result<Arc<FiniteGroup>> {
    group_from_value(&Value::String(s.to_string()), caps)
}

/// The explicit group if given, otherwise the document's `"group"` field.
pub fn document_group(doc: &Value, explicit: Option<&Arc<FiniteGroup>>, caps: &Caps) -> Result<Arc<FiniteGroup>> {
    match (explicit, doc.get("group")) {
        (Some(g), _) => Ok(g.clone()),
        (None, Some(v)) => group_from_value(v, caps),
        (None, None) => bad("no group given: pass -g or add a \"group\" field"),
    }
}

#[derive(Deserialize)]
struct GSetJson {
    size: usize,
    action: Vec<Vec<usize>>,
}

pub fn gset(g: &Arc<FiniteGroup>, v: &Value) -> Result<GSet> {
    let d: GSetJson = parse(v.clone(), "G-set")?;
    GSet::new(g.clone(), d.size, d.action).map_err(|e| BadInput(e.to_string()).into())
}

pub fn gset_json(x: &GSet) -> Value {
    serde_json::json!({"size": x.size(), "action": x.action_rows()})
}

#[derive(Deserialize)]
struct GMapJson {
    source: Value,
    target: Value,
    values: Vec<usize>,
}

pub fn gmap(g: &Arc<FiniteGroup>, v: &Value) -> Result<GMap> {
    let d: GMapJson = parse(v.clone(), "map")?;
    let (s, t) = (gset(g, &d.source)?, gset(g, &d.target)?);
    GMap::new(s, t, d.values).map_err(|e| BadInput(e.to_string()).into())
}

pub fn gmap_json(f: &GMap) -> Value {
    serde_json::json!({"source": gset_json(f.source()), "target": gset_json(f.target()), "values": f.values()})
}

pub fn span(g: &Arc<FiniteGroup>, v: &Value) -> Result<Span> {
    let (Some(l), Some(r)) = (v.get("left"), v.get("right")) else {
        return bad("a span needs \"left\" and \"right\" maps");
    };
    Span::new(gmap(g, l)?, gmap(g, r)?).map_err(|e| BadInput(e.to_string()).into())
}

pub fn span_json(s: &Span) -> Value {
    serde_json::json!({"left": gmap_json(&s.left), "right": gmap_json(&s.right)})
}

/// A subgroup by class index (its representative) or by element list.
pub fn subgroup(g: &Arc<FiniteGroup>, class: Option<usize>, elements: Option<&[usize]>) -> Result<Subgroup> {
    match (class, elements) {
        (Some(_), Some(_)) => bad("pass either --class or --subgroup, not both"),
        (Some(i), None) => g
            .subgroup_classes()
            .get(i)
            .map(|c| c.representative.clone())
            .ok_or_else(|| BadInput(format!("{} has {} subgroup classes", g.name(), g.subgroup_classes().len())).into()),
        (None, Some(e)) => g.subgroup(e).map_err(|e| BadInput(e.to_string()).into()),
        (None, None) => bad("no subgroup given: pass --class or --subgroup"),
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use serde_json::json;

    fn caps() -> Caps {
        Caps { group: DEFAULT_ORDER_CAP, hom: DEFAULT_HOM_CAP, object: DEFAULT_OBJECT_CAP }
    }

    #[test]
    fn fixture_names() {
        assert_eq!(fixture("e").unwrap().order(), 1);
        assert_eq!(fixture("s3").unwrap().order(), 6);
        assert_eq!(fixture("C5").unwrap().order(), 5);
        assert_eq!(fixture("D5").unwrap().order(), 10);
        assert!(fixture("X3").is_none());
        assert!(fixture("").is_none());
    }

    #[test]
    fn table_and_generator_groups() {
        let t = group_from_value(&json!({"table": [[0, 1], [1, 0]]}), &caps()).unwrap();
        assert_eq!(t.order(), 2);
        let p = group_from_value(&json!({"degree": 4, "generators": [[1, 2, 3, 0]]}), &caps()).unwrap();
        assert_eq!(p.order(), 4);
        assert!(group_from_value(&json!({"table": [[0, 1]]}), &caps()).is_err());
        let small = Caps { group: 3, ..caps() };
        let err = group_from_value(&json!({"degree": 4, "generators": [[1, 2, 3, 0]]}), &small).unwrap_err();
        assert!(err.downcast_ref::<BadInput>().is_some());
    }

    #[test]
    fn subgroups_by_class_or_elements() {
        let g = groups::symmetric3();
        assert_eq!(subgroup(&g, Some(3), None).unwrap().order(), 6);
        assert!(subgroup(&g, Some(4), None).is_err());
        assert!(subgroup(&g, None, Some(&[0, 1, 2])).is_err());
        assert!(subgroup(&g, None, None).is_err());
    }
}
