//! Plain-text model files.
//!
//! ```text
//! sorbd-model v1
//! # comments start with '#'
//! gravity 0 0 -9.81
//! body name=base parent=root joint=floating mass=10 com=0,0,0 inertia=1,1,1,0,0,0
//! body name=thigh parent=base joint=revolute-y xyz=0.2,0.1,0 rpy=0,0,0 mass=1 com=0,0,-0.2 inertia=0.01,0.01,0.001,0,0,0
//! ```
//!
//! `xyz` and `rpy` give the joint placement in the parent frame (roll, pitch,
//! yaw applied as `Rz(yaw) Ry(pitch) Rx(roll)`); both default to zero.
//! `inertia=ixx,iyy,izz,ixy,ixz,iyz` is taken about the centre of mass
//! `com`, which defaults to the origin. Bodies may appear in any order; they
//! are renumbered so parents precede children.

use std::collections::HashMap;
use std::fmt::Write as _;
use std::path::Path;

use nalgebra::{Matrix3, Rotation3, Vector3};

use crate::error::{Error, Result};
use crate::model::joint::JointKind;
use crate::model::tree::{default_gravity, Body, Model};
use crate::spatial::{skew, Motion, SpatialInertia, SpatialTransform};

pub const HEADER: &str = "sorbd-model v1";

struct Record {
    line: usize,
    name: String,
    parent: Option<String>,
    joint: JointKind,
    placement: SpatialTransform<f64>,
    inertia: SpatialInertia<f64>,
}

fn parse_floats<const N: usize>(line: usize, key: &str, v: &str) -> Result<[f64; N]> {
    let parts: Vec<&str> = v.split(',').collect();
    if parts.len() != N {
        return Err(Error::Parse {
            line,
            msg: format!("'{key}' expects {N} comma-separated numbers, got '{v}'"),
        });
    }
    let mut out = [0.0; N];
    for (o, p) in out.iter_mut().zip(parts) {
        *o = p.trim().parse().map_err(|_| Error::Parse {
            line,
            msg: format!("'{key}': cannot parse '{p}' as a number"),
        })?;
    }
    Ok(out)
}

fn parse_body(line: usize, rest: &str) -> Result<Record> {
    let mut kv = HashMap::new();
    for tok in rest.split_whitespace() {
        let (k, v) = tok.split_once('=').ok_or_else(|| Error::Parse {
            line,
            msg: format!("expected key=value, got '{tok}'"),
        })?;
        if kv.insert(k, v).is_some() {
            return Err(Error::Parse {
                line,
                msg: format!("duplicate key '{k}'"),
            });
        }
    }
    let take = |k: &str| {
        kv.get(k).copied().ok_or_else(|| Error::Parse {
            line,
            msg: format!("missing '{k}'"),
        })
    };
    let name = take("name")?.to_string();
    let parent = match take("parent")? {
        "root" => None,
        p => Some(p.to_string()),
    };
    let joint: JointKind = take("joint")?.parse()?;
    let xyz = kv.get("xyz").map_or(Ok([0.0; 3]), |v| parse_floats::<3>(line, "xyz", v))?;
    let rpy = kv.get("rpy").map_or(Ok([0.0; 3]), |v| parse_floats::<3>(line, "rpy", v))?;
    let [mass] = parse_floats::<1>(line, "mass", take("mass")?)?;
    let com = kv.get("com").map_or(Ok([0.0; 3]), |v| parse_floats::<3>(line, "com", v))?;
    let [ixx, iyy, izz, ixy, ixz, iyz] = parse_floats::<6>(line, "inertia", take("inertia")?)?;
    for k in kv.keys() {
        if !["name", "parent", "joint", "xyz", "rpy", "mass", "com", "inertia"].contains(k) {
            return Err(Error::Parse {
                line,
                msg: format!("unknown key '{k}'"),
            });
        }
    }
    let rot = *Rotation3::from_euler_angles(rpy[0], rpy[1], rpy[2]).matrix();
    let placement = SpatialTransform::new(rot, Vector3::from(xyz))?;
    let ic = Matrix3::new(ixx, ixy, ixz, ixy, iyy, iyz, ixz, iyz, izz);
    let inertia = SpatialInertia::from_com(mass, Vector3::from(com), ic)
        .map_err(|_| Error::NonSpdInertia(name.clone()))?;
    Ok(Record {
        line,
        name,
        parent,
        joint,
        placement,
        inertia,
    })
}

/// Parses a model from text.
pub fn parse_model(text: &str) -> Result<Model> {
    let mut lines = text
        .lines()
        .enumerate()
        .map(|(i, l)| (i + 1, l.trim()))
        .filter(|(_, l)| !l.is_empty() && !l.starts_with('#'));
    match lines.next() {
        Some((_, HEADER)) => {}
        Some((line, other)) => {
            return Err(Error::Parse {
                line,
                msg: format!("expected header '{HEADER}', got '{other}'"),
            })
        }
        None => return Err(Error::Parse { line: 0, msg: "empty model file".into() }),
    }

    let mut gravity = default_gravity();
    let mut records = Vec::new();
    for (line, l) in lines {
        let (kw, rest) = l.split_once(char::is_whitespace).unwrap_or((l, ""));
        match kw {
            "gravity" => {
                let g: Vec<f64> = rest
                    .split_whitespace()
                    .map(|t| t.parse())
                    .collect::<std::result::Result<_, _>>()
                    .map_err(|_| Error::Parse { line, msg: "bad gravity value".into() })?;
                if g.len() != 3 {
                    return Err(Error::Parse { line, msg: "gravity needs 3 numbers".into() });
                }
                gravity = Motion::new(Vector3::zeros(), Vector3::new(g[0], g[1], g[2]));
            }
            "body" => records.push(parse_body(line, rest)?),
            other => {
                return Err(Error::Parse {
                    line,
                    msg: format!("unknown record '{other}'"),
                })
            }
        }
    }
    assemble(records, gravity)
}

/// Orders records parents-first, preserving file order among siblings.
fn assemble(records: Vec<Record>, gravity: Motion<f64>) -> Result<Model> {
    if records.is_empty() {
        return Err(Error::InvalidModel("model file has no bodies".into()));
    }
    let mut index = HashMap::new();
    for (i, r) in records.iter().enumerate() {
        if index.insert(r.name.as_str(), i).is_some() {
            return Err(Error::Parse {
                line: r.line,
                msg: format!("duplicate body name '{}'", r.name),
            });
        }
    }
    let mut parent_idx = Vec::with_capacity(records.len());
    for r in &records {
        parent_idx.push(match &r.parent {
            None => None,
            Some(p) => Some(*index.get(p.as_str()).ok_or_else(|| Error::Parse {
                line: r.line,
                msg: format!("unknown parent '{p}'"),
            })?),
        });
    }
    let mut children = vec![Vec::new(); records.len()];
    let mut order = Vec::with_capacity(records.len());
    for (i, p) in parent_idx.iter().enumerate() {
        match p {
            Some(p) => children[*p].push(i),
            None => order.push(i),
        }
    }
    let mut head = 0;
    while head < order.len() {
        let i = order[head];
        order.extend_from_slice(&children[i]);
        head += 1;
    }
    if order.len() != records.len() {
        let stuck = (0..records.len()).find(|i| !order.contains(i)).unwrap_or(0);
        return Err(Error::CycleDetected(records[stuck].name.clone()));
    }
    let mut new_index = vec![0; records.len()];
    for (new, &old) in order.iter().enumerate() {
        new_index[old] = new;
    }
    let mut slots: Vec<Option<Record>> = records.into_iter().map(Some).collect();
    let bodies = order
        .iter()
        .map(|&old| {
            let r = slots[old].take().expect("each record is placed once");
            Body {
                name: r.name,
                parent: parent_idx[old].map(|p| new_index[p]),
                joint: r.joint,
                placement: r.placement,
                inertia: r.inertia,
            }
        })
        .collect();
    Model::new(bodies, gravity)
}

pub fn load_model(path: impl AsRef<Path>) -> Result<Model> {
    parse_model(&std::fs::read_to_string(path)?)
}

/// Serializes a model in the format read by [`parse_model`].
pub fn write_model(model: &Model) -> String {
    let mut s = String::new();
    let g = model.gravity().linear();
    let _ = writeln!(s, "{HEADER}");
    let _ = writeln!(s, "gravity {:?} {:?} {:?}", g[0], g[1], g[2]);
    for b in model.bodies() {
        let parent = b.parent.map_or("root".to_string(), |p| model.body(p).name.clone());
        let (r, p, y) = Rotation3::from_matrix_unchecked(b.placement.rot).euler_angles();
        let t = b.placement.trans;
        let m = b.inertia.mass;
        let c = b.inertia.com();
        let cx = skew(&c);
        let ic = b.inertia.inertia_o + cx * cx * m;
        let _ = writeln!(
            s,
            "body name={} parent={} joint={} xyz={:?},{:?},{:?} rpy={:?},{:?},{:?} mass={:?} com={:?},{:?},{:?} inertia={:?},{:?},{:?},{:?},{:?},{:?}",
            b.name, parent, b.joint, t[0], t[1], t[2], r, p, y, m, c[0], c[1], c[2],
            ic[(0, 0)], ic[(1, 1)], ic[(2, 2)], ic[(0, 1)], ic[(0, 2)], ic[(1, 2)]
        );
    }
    s
}
