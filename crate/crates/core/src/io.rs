//! JSON interchange for elements.
//!
//! ```json
//! {"kind":"qpoly","n":2,"q":{"re":0.5,"im":0},"terms":[{"k":[1,1],"c":{"re":1,"im":0}}]}
//! ```

use serde::{Deserialize, Serialize};

use crate::deform::HSeriesElement;
use crate::elements::{Element, FreeElement, LaurentElement, QPolynomial};
use crate::error::{Error, Result};
use crate::qcombinat::{MultiIndex, QParam, Word};
use crate::C64;

#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct ComplexDoc {
    pub re: f64,
    pub im: f64,
}

impl From<C64> for ComplexDoc {
    fn from(c: C64) -> Self {
        ComplexDoc { re: c.re, im: c.im }
    }
}

impl From<ComplexDoc> for C64 {
    fn from(c: ComplexDoc) -> Self {
        C64::new(c.re, c.im)
    }
}

#[derive(Clone, Debug, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct QPolyTerm {
    pub k: Vec<u32>,
    pub c: ComplexDoc,
}

#[derive(Clone, Debug, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct FreeTerm {
    pub alpha: Vec<u32>,
    pub c: ComplexDoc,
}

#[derive(Clone, Debug, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct LaurentTerm {
    pub k: Vec<u32>,
    pub p: i64,
    pub c: ComplexDoc,
}

#[derive(Clone, Debug, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct HSeriesTerm {
    pub p: u32,
    pub k: Vec<u32>,
    pub c: ComplexDoc,
}

/// Wire form of an [`Element`].
#[derive(Clone, Debug, Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "lowercase", deny_unknown_fields)]
pub enum ElementDocument {
    Qpoly {
        n: usize,
        q: ComplexDoc,
        terms: Vec<QPolyTerm>,
    },
    Free {
        n: usize,
        #[serde(default, skip_serializing_if = "Option::is_none")]
        q: Option<ComplexDoc>,
        terms: Vec<FreeTerm>,
    },
    Laurent {
        n: usize,
        terms: Vec<LaurentTerm>,
    },
    Hseries {
        n: usize,
        /// Truncation order in h; defaults to the largest power present.
        #[serde(default, skip_serializing_if = "Option::is_none")]
        order: Option<u32>,
        terms: Vec<HSeriesTerm>,
    },
}

fn schema(path: impl Into<String>, message: impl Into<String>) -> Error {
    Error::Schema {
        path: path.into(),
        message: message.into(),
    }
}

fn coeff(path: &str, c: ComplexDoc) -> Result<C64> {
    if !(c.re.is_finite() && c.im.is_finite()) {
        return Err(schema(path, "coefficient must be finite"));
    }
    Ok(c.into())
}

fn index(path: &str, k: Vec<u32>, n: usize) -> Result<MultiIndex> {
    if k.len() != n {
        return Err(schema(
            path,
            format!("expected length {n}, found {}", k.len()),
        ));
    }
    Ok(MultiIndex::new(k))
}

fn qparam(path: &str, q: ComplexDoc) -> Result<QParam> {
    QParam::new(q.into()).map_err(|e| schema(path, e.to_string()))
}

impl ElementDocument {
    pub fn into_element(self) -> Result<Element> {
        match self {
            ElementDocument::Qpoly { n, q, terms } => {
                let q = qparam("q", q)?;
                let mut a = QPolynomial::zero(n, q);
                for (i, t) in terms.into_iter().enumerate() {
                    let k = index(&format!("terms[{i}].k"), t.k, n)?;
                    a.add_term(k, coeff(&format!("terms[{i}].c"), t.c)?);
                }
                Ok(Element::QPoly(a))
            }
            ElementDocument::Free { n, q, terms } => {
                let q = q.map(|q| qparam("q", q)).transpose()?;
                let mut f = FreeElement::zero(n);
                for (i, t) in terms.into_iter().enumerate() {
                    let w = Word::new(t.alpha);
                    w.check_letters(n)
                        .map_err(|e| schema(format!("terms[{i}].alpha"), e.to_string()))?;
                    f.add_term(w, coeff(&format!("terms[{i}].c"), t.c)?);
                }
                Ok(Element::Free(f, q))
            }
            ElementDocument::Laurent { n, terms } => {
                let mut a = LaurentElement::zero(n);
                for (i, t) in terms.into_iter().enumerate() {
                    let k = index(&format!("terms[{i}].k"), t.k, n)?;
                    a.add_term(k, t.p, coeff(&format!("terms[{i}].c"), t.c)?);
                }
                Ok(Element::Laurent(a))
            }
            ElementDocument::Hseries { n, order, terms } => {
                let top = terms.iter().map(|t| t.p).max().unwrap_or(0);
                let order = order.unwrap_or(top);
                let mut f = HSeriesElement::zero(n, order);
                for (i, t) in terms.into_iter().enumerate() {
                    if t.p > order {
                        return Err(schema(
                            format!("terms[{i}].p"),
                            format!("exceeds order {order}"),
                        ));
                    }
                    let k = index(&format!("terms[{i}].k"), t.k, n)?;
                    f.add_term(t.p, k, coeff(&format!("terms[{i}].c"), t.c)?);
                }
                Ok(Element::HSeries(f))
            }
        }
    }

    pub fn from_element(e: &Element) -> Self {
        match e {
            Element::QPoly(a) => ElementDocument::Qpoly {
                n: a.n(),
                q: a.q().value().into(),
                terms: a
                    .terms()
                    .iter()
                    .map(|(k, c)| QPolyTerm {
                        k: k.entries().to_vec(),
                        c: (*c).into(),
                    })
                    .collect(),
            },
            Element::Free(f, q) => ElementDocument::Free {
                n: f.n(),
                q: q.map(|q| q.value().into()),
                terms: f
                    .terms()
                    .iter()
                    .map(|(w, c)| FreeTerm {
                        alpha: w.letters().to_vec(),
                        c: (*c).into(),
                    })
                    .collect(),
            },
            Element::Laurent(a) => ElementDocument::Laurent {
                n: a.n(),
                terms: a
                    .terms()
                    .iter()
                    .map(|((k, p), c)| LaurentTerm {
                        k: k.entries().to_vec(),
                        p: *p,
                        c: (*c).into(),
                    })
                    .collect(),
            },
            Element::HSeries(f) => ElementDocument::Hseries {
                n: f.n(),
                order: Some(f.order()),
                terms: f
                    .terms()
                    .iter()
                    .map(|((p, k), c)| HSeriesTerm {
                        p: *p,
                        k: k.entries().to_vec(),
                        c: (*c).into(),
                    })
                    .collect(),
            },
        }
    }
}

#[derive(Deserialize)]
#[serde(deny_unknown_fields)]
struct QpolyBody {
    n: usize,
    q: ComplexDoc,
    terms: Vec<QPolyTerm>,
}

#[derive(Deserialize)]
#[serde(deny_unknown_fields)]
struct FreeBody {
    n: usize,
    #[serde(default)]
    q: Option<ComplexDoc>,
    terms: Vec<FreeTerm>,
}

#[derive(Deserialize)]
#[serde(deny_unknown_fields)]
struct LaurentBody {
    n: usize,
    terms: Vec<LaurentTerm>,
}

#[derive(Deserialize)]
#[serde(deny_unknown_fields)]
struct HseriesBody {
    n: usize,
    #[serde(default)]
    order: Option<u32>,
    terms: Vec<HSeriesTerm>,
}

fn body<T: serde::de::DeserializeOwned>(value: serde_json::Value) -> Result<T> {
    serde_path_to_error::deserialize(value).map_err(|e| {
        let path = e.path().to_string();
        schema(
            if path == "." {
                "document".to_string()
            } else {
                path
            },
            e.into_inner().to_string(),
        )
    })
}

/// Parses a JSON element document. Syntax errors carry line and column; schema
/// errors carry the field path, e.g. `terms[2].c.re`.
pub fn parse_element(text: &str) -> Result<Element> {
    let value: serde_json::Value = serde_json::from_str(text).map_err(|e| {
        schema(
            format!("line {} column {}", e.line(), e.column()),
            e.to_string(),
        )
    })?;
    let serde_json::Value::Object(mut map) = value else {
        return Err(schema("document", "expected a JSON object"));
    };
    let kind = match map.remove("kind") {
        Some(serde_json::Value::String(k)) => k,
        Some(_) => return Err(schema("kind", "expected a string")),
        None => return Err(schema("kind", "missing field")),
    };
    let rest = serde_json::Value::Object(map);
    let doc = match kind.as_str() {
        "qpoly" => {
            let b: QpolyBody = body(rest)?;
            ElementDocument::Qpoly {
                n: b.n,
                q: b.q,
                terms: b.terms,
            }
        }
        "free" => {
            let b: FreeBody = body(rest)?;
            ElementDocument::Free {
                n: b.n,
                q: b.q,
                terms: b.terms,
            }
        }
        "laurent" => {
            let b: LaurentBody = body(rest)?;
            ElementDocument::Laurent {
                n: b.n,
                terms: b.terms,
            }
        }
        "hseries" => {
            let b: HseriesBody = body(rest)?;
            ElementDocument::Hseries {
                n: b.n,
                order: b.order,
                terms: b.terms,
            }
        }
        other => {
            return Err(schema(
                "kind",
                format!("unknown kind `{other}`, expected qpoly, free, laurent or hseries"),
            ))
        }
    };
    doc.into_element()
}

pub fn serialize_element(e: &Element) -> String {
    serde_json::to_string_pretty(&ElementDocument::from_element(e))
        .expect("element documents always serialize")
}
