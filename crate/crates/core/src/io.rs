//! JSON documents for groupoids, elements, band operators, symbols, mean
//! sequences and fibre matrices.
//!
//! Labels may be given as strings or integers; integers are read as their
//! decimal string. Complex numbers are `[re, im]` pairs.

use std::collections::BTreeMap;
use std::path::Path;
use std::sync::Arc;

use num_complex::Complex64;
use serde::{Deserialize, Deserializer, Serialize, Serializer};
use serde_json::Value;

use crate::algebra::{AlgebraElement, FibreMatrix};
use crate::band::{BandOperatorZ, CoefficientSequence};
use crate::error::{Error, Result};
use crate::groupoid::{
    pair_groupoid, transformation_groupoid, validate_groupoid, ActionSpec, ArrowId, FiniteGroupoid, GroupSpec,
    RawGroupoid, UnitId,
};
use crate::linalg::CMatrix;
use crate::mean::MeanFamily;

/// A unit, arrow, element or point label.
#[derive(Debug, Clone, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct Label(pub String);

impl Serialize for Label {
    fn serialize<S: Serializer>(&self, s: S) -> std::result::Result<S::Ok, S::Error> {
        s.serialize_str(&self.0)
    }
}

impl<'de> Deserialize<'de> for Label {
    fn deserialize<D: Deserializer<'de>>(d: D) -> std::result::Result<Self, D::Error> {
        #[derive(Deserialize)]
        #[serde(untagged)]
        enum Repr {
            S(String),
            I(i64),
        }
        Ok(Label(match Repr::deserialize(d)? {
            Repr::S(s) => s,
            Repr::I(i) => i.to_string(),
        }))
    }
}

fn labels(v: &[String]) -> Vec<Label> {
    v.iter().cloned().map(Label).collect()
}

fn strings(v: Vec<Label>) -> Vec<String> {
    v.into_iter().map(|l| l.0).collect()
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct ArrowDoc {
    pub id: Label,
    pub s: Label,
    pub r: Label,
}

/// The explicit groupoid form.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct RawDoc {
    pub units: Vec<Label>,
    pub arrows: Vec<ArrowDoc>,
    pub compose: Vec<(Label, Label, Label)>,
    pub invert: Vec<(Label, Label)>,
}

/// A group by Cayley table: `table[i][j]` is the label of
/// `elements[i]·elements[j]`.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct GroupDoc {
    pub elements: Vec<Label>,
    pub identity: Label,
    pub table: Vec<Vec<Label>>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub inverse: Option<Vec<Label>>,
}

/// A group action: `perm[i][x]` is the label of `elements[i]·points[x]`.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct ActionDoc {
    pub group: GroupDoc,
    pub points: Vec<Label>,
    pub perm: Vec<Vec<Label>>,
}

/// Any of the accepted groupoid documents.
#[derive(Debug, Clone, PartialEq)]
pub enum GroupoidDoc {
    Raw(RawDoc),
    Pair(usize),
    Group(GroupDoc),
    Action(ActionDoc),
}

fn fmt_err(e: impl std::fmt::Display) -> Error {
    Error::Format(e.to_string())
}

fn single_key<'a>(v: &'a Value, key: &str) -> Result<Option<&'a Value>> {
    let Some(obj) = v.as_object() else {
        return Err(Error::Format("groupoid document must be a JSON object".into()));
    };
    match obj.get(key) {
        Some(inner) if obj.len() == 1 => Ok(Some(inner)),
        Some(_) => Err(Error::Format(format!("unexpected fields next to \"{key}\""))),
        None => Ok(None),
    }
}

impl GroupoidDoc {
    pub fn from_value(v: &Value) -> Result<Self> {
        if let Some(n) = single_key(v, "pair")? {
            let n = n
                .as_u64()
                .filter(|&n| n >= 1)
                .ok_or_else(|| Error::Format("\"pair\" must be a positive integer".into()))?;
            return Ok(Self::Pair(n as usize));
        }
        if let Some(g) = single_key(v, "group")? {
            return Ok(Self::Group(GroupDoc::deserialize(g).map_err(fmt_err)?));
        }
        if let Some(a) = single_key(v, "action")? {
            return Ok(Self::Action(ActionDoc::deserialize(a).map_err(fmt_err)?));
        }
        Ok(Self::Raw(RawDoc::deserialize(v).map_err(fmt_err)?))
    }

    pub fn to_value(&self) -> Value {
        match self {
            Self::Raw(r) => serde_json::to_value(r),
            Self::Pair(n) => Ok(serde_json::json!({ "pair": n })),
            Self::Group(g) => Ok(serde_json::json!({ "group": g })),
            Self::Action(a) => Ok(serde_json::json!({ "action": a })),
        }
        .expect("serializable")
    }

    /// Raw tables, before validation.
    pub fn to_raw(&self) -> Result<RawGroupoid> {
        Ok(match self {
            Self::Raw(r) => RawGroupoid {
                units: strings(r.units.clone()),
                arrows: r
                    .arrows
                    .iter()
                    .map(|a| (a.id.0.clone(), a.s.0.clone(), a.r.0.clone()))
                    .collect(),
                compose: r
                    .compose
                    .iter()
                    .map(|(a, b, c)| (a.0.clone(), b.0.clone(), c.0.clone()))
                    .collect(),
                invert: r.invert.iter().map(|(a, b)| (a.0.clone(), b.0.clone())).collect(),
            },
            _ => self.build()?.to_raw(),
        })
    }

    /// Validates and builds the groupoid.
    pub fn build(&self) -> Result<FiniteGroupoid> {
        match self {
            Self::Raw(_) => validate_groupoid(&self.to_raw()?),
            Self::Pair(n) => Ok(pair_groupoid(*n)),
            Self::Group(g) => Ok(group_from_doc(g)?.as_groupoid()),
            Self::Action(a) => Ok(transformation_groupoid(&action_from_doc(a)?)),
        }
    }
}

fn index_in(names: &[String], l: &Label, what: &str) -> Result<usize> {
    names
        .iter()
        .position(|n| *n == l.0)
        .ok_or_else(|| Error::Format(format!("unknown {what} \"{}\"", l.0)))
}

pub fn group_from_doc(d: &GroupDoc) -> Result<GroupSpec> {
    let names = strings(d.elements.clone());
    let idx = |l: &Label| index_in(&names, l, "group element");
    let identity = idx(&d.identity)?;
    let table = d
        .table
        .iter()
        .map(|row| row.iter().map(idx).collect::<Result<Vec<_>>>())
        .collect::<Result<Vec<_>>>()?;
    match &d.inverse {
        None => GroupSpec::new(names.clone(), identity, table),
        Some(inv) => {
            let inv = inv.iter().map(idx).collect::<Result<Vec<_>>>()?;
            GroupSpec::with_inverse(names.clone(), identity, table, &inv)
        }
    }
}

pub fn group_to_doc(g: &GroupSpec) -> GroupDoc {
    let l = |i: usize| Label(g.label(i).to_string());
    GroupDoc {
        elements: labels(g.labels()),
        identity: l(g.identity()),
        table: g
            .table()
            .iter()
            .map(|row| row.iter().map(|&i| l(i)).collect())
            .collect(),
        inverse: None,
    }
}

pub fn action_from_doc(d: &ActionDoc) -> Result<ActionSpec> {
    let group = group_from_doc(&d.group)?;
    let points = strings(d.points.clone());
    let perm = d
        .perm
        .iter()
        .map(|row| {
            row.iter()
                .map(|l| index_in(&points, l, "point"))
                .collect::<Result<Vec<_>>>()
        })
        .collect::<Result<Vec<_>>>()?;
    ActionSpec::new(group, points, perm)
}

pub fn action_to_doc(a: &ActionSpec) -> ActionDoc {
    ActionDoc {
        group: group_to_doc(a.group()),
        points: labels(a.points()),
        perm: a
            .permutations()
            .iter()
            .map(|row| row.iter().map(|&x| Label(a.points()[x].clone())).collect())
            .collect(),
    }
}

/// The explicit form of a validated groupoid, in declaration order.
pub fn groupoid_to_doc(g: &FiniteGroupoid) -> GroupoidDoc {
    let raw = g.to_raw();
    GroupoidDoc::Raw(RawDoc {
        units: labels(&raw.units),
        arrows: raw
            .arrows
            .into_iter()
            .map(|(id, s, r)| ArrowDoc {
                id: Label(id),
                s: Label(s),
                r: Label(r),
            })
            .collect(),
        compose: raw
            .compose
            .into_iter()
            .map(|(a, b, c)| (Label(a), Label(b), Label(c)))
            .collect(),
        invert: raw.invert.into_iter().map(|(a, b)| (Label(a), Label(b))).collect(),
    })
}

pub fn parse_groupoid(text: &str) -> Result<FiniteGroupoid> {
    GroupoidDoc::from_value(&serde_json::from_str(text)?)?.build()
}

pub fn groupoid_to_json(g: &FiniteGroupoid) -> String {
    serde_json::to_string_pretty(&groupoid_to_doc(g).to_value()).expect("serializable")
}

/// Builds the groupoid referenced by an element document: a path (relative
/// to `base`) or an inline groupoid document.
pub fn resolve_groupoid(v: &Value, base: &Path) -> Result<FiniteGroupoid> {
    match v {
        Value::String(p) => {
            let path = base.join(p);
            let text = std::fs::read_to_string(&path)
                .map_err(|e| Error::Format(format!("cannot read {}: {e}", path.display())))?;
            parse_groupoid(&text)
        }
        other => GroupoidDoc::from_value(other)?.build(),
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct ElementDoc {
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub groupoid: Option<Value>,
    /// `[arrow, re, im]`
    pub coeffs: Vec<(Label, f64, f64)>,
}

pub fn element_from_doc(d: &ElementDoc, g: &Arc<FiniteGroupoid>) -> Result<AlgebraElement> {
    let pairs = d
        .coeffs
        .iter()
        .map(|(a, re, im)| Ok((g.arrow_by_label(&a.0)?, Complex64::new(*re, *im))))
        .collect::<Result<Vec<_>>>()?;
    if pairs.iter().any(|(_, z)| !z.re.is_finite() || !z.im.is_finite()) {
        return Err(Error::Format("non-finite coefficient".into()));
    }
    AlgebraElement::from_pairs(g, pairs)
}

/// Nonzero coefficients in arrow order, optionally with the groupoid inline.
pub fn element_to_doc(f: &AlgebraElement, inline_groupoid: bool) -> ElementDoc {
    let g = f.groupoid();
    ElementDoc {
        groupoid: inline_groupoid.then(|| groupoid_to_doc(g).to_value()),
        coeffs: f
            .support()
            .into_iter()
            .map(|a| {
                let z = f.coeff(a);
                (Label(g.arrow_label(a).to_string()), z.re, z.im)
            })
            .collect(),
    }
}

/// One diagonal of a band operator document.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct DiagonalDoc {
    pub m: i64,
    #[serde(flatten)]
    pub seq: SequenceDoc,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "lowercase")]
pub enum SequenceDoc {
    /// `[n, re, im]`
    Finite {
        entries: Vec<(i64, f64, f64)>,
    },
    Periodic {
        values: Vec<(f64, f64)>,
    },
    /// `values` lists `[−window, window]`.
    Eventual {
        window: i64,
        values: Vec<(f64, f64)>,
        left: (f64, f64),
        right: (f64, f64),
    },
    /// Callback sequences cannot be stored; present so the kind is
    /// recognised and refused explicitly.
    Sampled {},
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct BandDoc {
    pub width: usize,
    pub diagonals: Vec<DiagonalDoc>,
}

fn cx((re, im): (f64, f64)) -> Complex64 {
    Complex64::new(re, im)
}

fn pair(z: Complex64) -> (f64, f64) {
    (z.re, z.im)
}

pub fn band_from_doc(d: &BandDoc) -> Result<BandOperatorZ> {
    let diagonals = d
        .diagonals
        .iter()
        .map(|diag| {
            let seq = match &diag.seq {
                SequenceDoc::Finite { entries } => {
                    CoefficientSequence::finite(entries.iter().map(|&(n, re, im)| (n, Complex64::new(re, im))))
                }
                SequenceDoc::Periodic { values } => {
                    CoefficientSequence::periodic(values.iter().copied().map(cx).collect())?
                }
                SequenceDoc::Eventual {
                    window,
                    values,
                    left,
                    right,
                } => CoefficientSequence::eventually_constant(
                    *window,
                    values.iter().copied().map(cx).collect(),
                    cx(*left),
                    cx(*right),
                )?,
                SequenceDoc::Sampled {} => {
                    return Err(Error::Format(format!(
                        "diagonal {}: sampled sequences are only available through the library",
                        diag.m
                    )))
                }
            };
            Ok((diag.m, seq))
        })
        .collect::<Result<Vec<_>>>()?;
    BandOperatorZ::new(d.width, diagonals)
}

pub fn band_to_doc(t: &BandOperatorZ) -> Result<BandDoc> {
    let diagonals = t
        .diagonals()
        .iter()
        .map(|(&m, seq)| {
            let seq = match seq {
                CoefficientSequence::FiniteSupport(e) => SequenceDoc::Finite {
                    entries: e.iter().map(|(&n, z)| (n, z.re, z.im)).collect(),
                },
                CoefficientSequence::Periodic(v) => SequenceDoc::Periodic {
                    values: v.iter().copied().map(pair).collect(),
                },
                CoefficientSequence::EventuallyConstant {
                    window,
                    values,
                    left,
                    right,
                } => SequenceDoc::Eventual {
                    window: *window,
                    values: values.iter().copied().map(pair).collect(),
                    left: pair(*left),
                    right: pair(*right),
                },
                CoefficientSequence::Sampled { .. } => {
                    return Err(Error::Format(format!("diagonal {m} is sampled and cannot be written")))
                }
            };
            Ok(DiagonalDoc { m, seq })
        })
        .collect::<Result<Vec<_>>>()?;
    Ok(BandDoc {
        width: t.width(),
        diagonals,
    })
}

pub fn parse_band(text: &str) -> Result<BandOperatorZ> {
    band_from_doc(&serde_json::from_str(text)?)
}

/// A sequence of mean families: each maps a unit label to
/// `[arrow, weight]` pairs on its source fibre.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct MeansDoc {
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub groupoid: Option<Value>,
    pub sequence: Vec<BTreeMap<Label, Vec<(Label, f64)>>>,
}

pub fn means_from_doc(d: &MeansDoc, g: &FiniteGroupoid) -> Result<Vec<MeanFamily>> {
    d.sequence
        .iter()
        .map(|fam| {
            let mut weights = vec![Vec::new(); g.num_units()];
            for (unit, ws) in fam {
                let x = g.unit_by_label(&unit.0)?;
                for (a, w) in ws {
                    weights[x.0].push((g.arrow_by_label(&a.0)?, *w));
                }
            }
            MeanFamily::new(weights)
        })
        .collect()
}

/// A fibre matrix with its fibre listed by arrow label.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct FibreMatrixDoc {
    pub unit: Label,
    pub fibre: Vec<Label>,
    /// Row-major `[re, im]` entries.
    pub matrix: Vec<Vec<(f64, f64)>>,
}

pub fn fibre_matrix_to_doc(g: &FiniteGroupoid, m: &FibreMatrix) -> FibreMatrixDoc {
    FibreMatrixDoc {
        unit: Label(g.unit_label(m.unit).to_string()),
        fibre: m.fibre.iter().map(|&a| Label(g.arrow_label(a).to_string())).collect(),
        matrix: (0..m.dim())
            .map(|i| (0..m.dim()).map(|j| pair(m.matrix[(i, j)])).collect())
            .collect(),
    }
}

pub fn fibre_matrix_from_doc(g: &FiniteGroupoid, d: &FibreMatrixDoc) -> Result<FibreMatrix> {
    let unit: UnitId = g.unit_by_label(&d.unit.0)?;
    let fibre: Vec<ArrowId> = d.fibre.iter().map(|l| g.arrow_by_label(&l.0)).collect::<Result<_>>()?;
    let n = fibre.len();
    if d.matrix.len() != n || d.matrix.iter().any(|r| r.len() != n) {
        return Err(Error::Format("fibre matrix shape does not match its fibre".into()));
    }
    Ok(FibreMatrix {
        unit,
        fibre,
        matrix: CMatrix::from_fn(n, n, |i, j| cx(d.matrix[i][j])),
    })
}
