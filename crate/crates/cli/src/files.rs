//! Instance and solution file formats.

use std::fmt::Write as _;

use num_bigint::BigInt;
use num_complex::Complex64;
use num_rational::BigRational;
use num_traits::{One, Zero};
use serde::{Deserialize, Serialize};
use thiserror::Error;

use multideg::{BlockStructure, ProblemInstance, Polynomial, Rationals};

#[derive(Debug, Error)]
pub enum FileError {
    #[error("{path}: {source}")]
    Io {
        path: String,
        source: std::io::Error,
    },
    #[error("{context}: {message}")]
    Json { context: String, message: String },
    #[error("{0}")]
    Invalid(String),
}

impl FileError {
    fn json(context: &str, e: serde_json::Error) -> Self {
        FileError::Json {
            context: context.to_string(),
            message: e.to_string(),
        }
    }
}

/// Coefficient as written in a file: a decimal integer, either as a JSON
/// number or a string, or a `"p/q"` string.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(untagged)]
pub enum Coefficient {
    Text(String),
    Integer(i64),
}

impl Coefficient {
    pub fn parse(&self) -> Result<BigRational, FileError> {
        let text = match self {
            Coefficient::Integer(v) => return Ok(BigRational::from_integer((*v).into())),
            Coefficient::Text(t) => t.trim(),
        };
        let bad = || FileError::Invalid(format!("bad coefficient {text:?}"));
        let int = |s: &str| s.trim().parse::<BigInt>().map_err(|_| bad());
        match text.split_once('/') {
            None => Ok(BigRational::from_integer(int(text)?)),
            Some((p, q)) => {
                let q = int(q)?;
                if q.is_zero() {
                    return Err(bad());
                }
                Ok(BigRational::new(int(p)?, q))
            }
        }
    }

    pub fn canonical(q: &BigRational) -> Self {
        if q.denom().is_one() {
            Coefficient::Text(q.numer().to_string())
        } else {
            Coefficient::Text(format!("{}/{}", q.numer(), q.denom()))
        }
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct TermSpec {
    pub coef: Coefficient,
    pub exp: Vec<u32>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub note: Option<String>,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct InstanceFile {
    pub blocks: Vec<usize>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub variables: Option<Vec<Vec<String>>>,
    pub objective: Vec<TermSpec>,
    #[serde(default)]
    pub constraints: Vec<Vec<TermSpec>>,
}

impl InstanceFile {
    pub fn parse(text: &str) -> Result<Self, FileError> {
        serde_json::from_str(text).map_err(|e| FileError::json("instance", e))
    }

    pub fn read(path: &str) -> Result<Self, FileError> {
        Self::parse(&read_to_string(path)?).map_err(|e| with_path(e, path))
    }

    pub fn block_structure(&self) -> Result<BlockStructure, FileError> {
        let b = match &self.variables {
            Some(names) => BlockStructure::with_names(self.blocks.clone(), names.clone()),
            None => BlockStructure::new(self.blocks.clone()),
        };
        b.map_err(|e| FileError::Invalid(e.to_string()))
    }

    /// Exact instance over ℚ.
    pub fn to_instance(&self) -> Result<ProblemInstance<Rationals>, FileError> {
        let blocks = self.block_structure()?;
        let convert = |terms: &[TermSpec], what: &str| -> Result<Polynomial<Rationals>, FileError> {
            let mut parsed = Vec::with_capacity(terms.len());
            for (i, t) in terms.iter().enumerate() {
                if t.exp.len() != blocks.n() {
                    return Err(FileError::Invalid(format!(
                        "{what}, term {}: exponent list has {} entries, expected {}",
                        i + 1,
                        t.exp.len(),
                        blocks.n()
                    )));
                }
                let c = t
                    .coef
                    .parse()
                    .map_err(|e| FileError::Invalid(format!("{what}, term {}: {e}", i + 1)))?;
                parsed.push((c, t.exp.clone()));
            }
            Polynomial::from_terms(Rationals, blocks.affine_variables().clone(), parsed)
                .map_err(|e| FileError::Invalid(format!("{what}: {e}")))
        };
        let objective = convert(&self.objective, "objective")?;
        let constraints = self
            .constraints
            .iter()
            .enumerate()
            .map(|(j, c)| convert(c, &format!("constraint {}", j + 1)))
            .collect::<Result<Vec<_>, _>>()?;
        ProblemInstance::new(blocks, objective, constraints)
            .map_err(|e| FileError::Invalid(e.to_string()))
    }

    /// Same polynomials with terms combined, sorted in decreasing
    /// degrevlex order and coefficients in lowest terms. Notes stay with
    /// their monomial.
    pub fn canonicalize(&self) -> Result<InstanceFile, FileError> {
        let inst = self.to_instance()?;
        let canon = |p: &Polynomial<Rationals>, src: &[TermSpec]| -> Vec<TermSpec> {
            p.terms()
                .iter()
                .map(|t| {
                    let exp: Vec<u32> = t.monomial.exponents().iter().map(|&e| e as u32).collect();
                    let note = src.iter().find(|s| s.exp == exp).and_then(|s| s.note.clone());
                    TermSpec {
                        coef: Coefficient::canonical(&t.coeff),
                        exp,
                        note,
                    }
                })
                .collect()
        };
        Ok(InstanceFile {
            blocks: self.blocks.clone(),
            variables: self.variables.clone(),
            objective: canon(inst.objective(), &self.objective),
            constraints: inst
                .constraints()
                .iter()
                .zip(&self.constraints)
                .map(|(p, src)| canon(p, src))
                .collect(),
        })
    }

    /// Canonical text: one term per line, two-space indentation.
    pub fn to_canonical_string(&self) -> String {
        let mut out = String::from("{\n");
        let _ = writeln!(out, "  \"blocks\": {},", json(&self.blocks));
        if let Some(v) = &self.variables {
            let _ = writeln!(out, "  \"variables\": {},", json(v));
        }
        let term_line = |t: &TermSpec| {
            let mut s = format!("{{\"coef\": {}, \"exp\": {}", json(&t.coef), json(&t.exp));
            if let Some(n) = &t.note {
                let _ = write!(s, ", \"note\": {}", json(n));
            }
            s.push('}');
            s
        };
        let poly = |terms: &[TermSpec], indent: &str| {
            if terms.is_empty() {
                return "[]".to_string();
            }
            let body: Vec<String> = terms
                .iter()
                .map(|t| format!("{indent}  {}", term_line(t)))
                .collect();
            format!("[\n{}\n{indent}]", body.join(",\n"))
        };
        let _ = writeln!(out, "  \"objective\": {},", poly(&self.objective, "  "));
        if self.constraints.is_empty() {
            out.push_str("  \"constraints\": []\n");
        } else {
            let body: Vec<String> = self
                .constraints
                .iter()
                .map(|c| format!("    {}", poly(c, "    ")))
                .collect();
            let _ = writeln!(out, "  \"constraints\": [\n{}\n  ]", body.join(",\n"));
        }
        out.push_str("}\n");
        out
    }
}

/// Single-line JSON with a space after every `,` and `:`.
struct Spaced;

impl serde_json::ser::Formatter for Spaced {
    fn begin_array_value<W: ?Sized + std::io::Write>(&mut self, w: &mut W, first: bool) -> std::io::Result<()> {
        if first {
            Ok(())
        } else {
            w.write_all(b", ")
        }
    }

    fn begin_object_key<W: ?Sized + std::io::Write>(&mut self, w: &mut W, first: bool) -> std::io::Result<()> {
        if first {
            Ok(())
        } else {
            w.write_all(b", ")
        }
    }

    fn begin_object_value<W: ?Sized + std::io::Write>(&mut self, w: &mut W) -> std::io::Result<()> {
        w.write_all(b": ")
    }
}

fn json<T: Serialize + ?Sized>(value: &T) -> String {
    let mut buf = Vec::new();
    let mut ser = serde_json::Serializer::with_formatter(&mut buf, Spaced);
    value.serialize(&mut ser).expect("plain data serializes");
    String::from_utf8(buf).expect("serde_json writes UTF-8")
}

#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct Coordinate {
    pub re: f64,
    pub im: f64,
}

/// Approximate solutions from an external solver; each point lists the
/// x-variables in declaration order followed by the multipliers.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct SolutionsFile {
    pub points: Vec<Vec<Coordinate>>,
}

impl SolutionsFile {
    pub fn parse(text: &str) -> Result<Self, FileError> {
        let file: SolutionsFile =
            serde_json::from_str(text).map_err(|e| FileError::json("solutions", e))?;
        if let Some(first) = file.points.first() {
            if let Some(i) = file.points.iter().position(|p| p.len() != first.len()) {
                return Err(FileError::Invalid(format!(
                    "point {} has {} coordinates, point 1 has {}",
                    i + 1,
                    file.points[i].len(),
                    first.len()
                )));
            }
        }
        Ok(file)
    }

    pub fn read(path: &str) -> Result<Self, FileError> {
        Self::parse(&read_to_string(path)?).map_err(|e| with_path(e, path))
    }

    pub fn complex_points(&self) -> Vec<Vec<Complex64>> {
        self.points
            .iter()
            .map(|p| p.iter().map(|c| Complex64::new(c.re, c.im)).collect())
            .collect()
    }
}

fn read_to_string(path: &str) -> Result<String, FileError> {
    std::fs::read_to_string(path).map_err(|source| FileError::Io {
        path: path.to_string(),
        source,
    })
}

fn with_path(e: FileError, path: &str) -> FileError {
    match e {
        FileError::Json { message, .. } => FileError::Json {
            context: path.to_string(),
            message,
        },
        FileError::Invalid(m) => FileError::Invalid(format!("{path}: {m}")),
        other => other,
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use proptest::prelude::*;

    const HYPERBOLA: &str = r#"{
  "blocks": [2],
  "variables": [["x", "y"]],
  "objective": [
    {"coef": "1", "exp": [2, 0]},
    {"coef": "1", "exp": [0, 2]}
  ],
  "constraints": [
    [
      {"coef": "-1", "exp": [2, 0]},
      {"coef": "1", "exp": [0, 2]},
      {"coef": "1", "exp": [0, 0], "note": "shift"}
    ]
  ]
}
"#;

    #[test]
    fn canonical_round_trip() {
        let f = InstanceFile::parse(HYPERBOLA).unwrap();
        assert_eq!(f.to_canonical_string(), HYPERBOLA);
        assert_eq!(f.canonicalize().unwrap(), f);
    }

    #[test]
    fn canonicalize_combines_and_sorts() {
        let text = r#"{"blocks": [1], "objective": [
            {"coef": 1, "exp": [0]}, {"coef": "2/4", "exp": [1]}, {"coef": "1/2", "exp": [1]}]}"#;
        let f = InstanceFile::parse(text).unwrap().canonicalize().unwrap();
        assert_eq!(f.objective.len(), 2);
        assert_eq!(f.objective[0].coef, Coefficient::Text("1".into()));
        assert_eq!(f.objective[0].exp, vec![1]);
        let again = InstanceFile::parse(&f.to_canonical_string()).unwrap();
        assert_eq!(again, f);
    }

    #[test]
    fn coefficient_parsing() {
        let q = |s: &str| Coefficient::Text(s.into()).parse();
        assert_eq!(q("-3/6").unwrap(), BigRational::new((-1).into(), 2.into()));
        assert_eq!(q(" 12 ").unwrap(), BigRational::from_integer(12.into()));
        assert!(q("1/0").is_err());
        assert!(q("1.5").is_err());
        assert!(q("").is_err());
    }

    #[test]
    fn errors_carry_positions() {
        let e = InstanceFile::parse("{\n  \"blocks\": [2,\n}").unwrap_err();
        assert!(e.to_string().contains("line 3"), "{e}");
        let wrong_len = r#"{"blocks": [2], "objective": [{"coef": "1", "exp": [1]}]}"#;
        let e = InstanceFile::parse(wrong_len).unwrap().to_instance().unwrap_err();
        assert!(e.to_string().contains("expected 2"), "{e}");
        let unknown = r#"{"blocks": [2], "objective": [], "extra": 1}"#;
        assert!(InstanceFile::parse(unknown).is_err());
    }

    #[test]
    fn solutions_file() {
        let s = SolutionsFile::parse(r#"{"points": [[{"re": 1.0, "im": 0.5}]]}"#).unwrap();
        assert_eq!(s.complex_points(), vec![vec![Complex64::new(1.0, 0.5)]]);
        let ragged = r#"{"points": [[{"re": 1, "im": 0}], []]}"#;
        assert!(SolutionsFile::parse(ragged).is_err());
    }

    fn arb_terms(nvars: usize) -> impl Strategy<Value = Vec<TermSpec>> {
        prop::collection::vec(
            (-9i64..10, 1i64..4, prop::collection::vec(0u32..3, nvars)),
            1..6,
        )
        .prop_map(|ts| {
            ts.into_iter()
                .map(|(n, d, exp)| TermSpec {
                    coef: Coefficient::Text(format!("{n}/{d}")),
                    exp,
                    note: None,
                })
                .collect()
        })
    }

    fn arb_file() -> impl Strategy<Value = InstanceFile> {
        prop::collection::vec(1usize..3, 1..3).prop_flat_map(|blocks| {
            let n: usize = blocks.iter().sum();
            (arb_terms(n), prop::collection::vec(arb_terms(n), 0..3)).prop_map(move |(objective, constraints)| {
                InstanceFile { blocks: blocks.clone(), variables: None, objective, constraints }
            })
        })
    }

    proptest! {
        #[test]
        fn canonical_form_is_a_fixed_point(file in arb_file()) {
            // random terms may cancel to a zero polynomial, which the instance rejects
            if let Ok(canon) = file.canonicalize() {
                let text = canon.to_canonical_string();
                let back = InstanceFile::parse(&text).unwrap();
                prop_assert_eq!(&back, &canon);
                prop_assert_eq!(back.canonicalize().unwrap().to_canonical_string(), text);
                let (a, b) = (back.to_instance().unwrap(), file.to_instance().unwrap());
                prop_assert_eq!(a.objective(), b.objective());
                prop_assert_eq!(a.constraints(), b.constraints());
            }
        }
    }
}
