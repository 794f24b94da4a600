//! JSON input and output documents. Integers are written as decimal strings
//! and read from either strings or JSON numbers.

use std::fmt;
use std::str::FromStr;

use num_bigint::BigInt;
use serde::de::{self, Visitor};
use serde::{Deserialize, Deserializer, Serialize, Serializer};

use toric_ci::fan::Fan;
use toric_ci::laurent::{Coefficient, LaurentPolynomial, LaurentSystem};
use toric_ci::lattice::{AbelianGroup, GroupElement, Rat};

pub const SYSTEM_SCHEMA: &str = "toric-ci/system@1";
pub const HOMOGENIZED_SCHEMA: &str = "toric-ci/homogenized@1";
pub const SIGMA_X_SCHEMA: &str = "toric-ci/sigma-x@1";
pub const ACC_INPUT_SCHEMA: &str = "toric-ci/acc-input@1";
pub const ACC_SCHEMA: &str = "toric-ci/acc@1";
pub const FWPS_SCHEMA: &str = "toric-ci/fwps@1";
pub const INVARIANTS_SCHEMA: &str = "toric-ci/invariants@1";
pub const FAMILY_SCHEMA: &str = "toric-ci/family@1";
pub const MANIFEST_SCHEMA: &str = "toric-ci/manifest@1";

#[derive(Clone, Debug, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct Int(pub BigInt);

impl Serialize for Int {
    fn serialize<S: Serializer>(&self, s: S) -> Result<S::Ok, S::Error> {
        s.serialize_str(&self.0.to_string())
    }
}

impl<'de> Deserialize<'de> for Int {
    fn deserialize<D: Deserializer<'de>>(d: D) -> Result<Self, D::Error> {
        struct IntVisitor;

        impl Visitor<'_> for IntVisitor {
            type Value = Int;

            fn expecting(&self, f: &mut fmt::Formatter) -> fmt::Result {
                f.write_str("an integer or a decimal string")
            }

            fn visit_i64<E: de::Error>(self, v: i64) -> Result<Int, E> {
                Ok(Int(v.into()))
            }

            fn visit_u64<E: de::Error>(self, v: u64) -> Result<Int, E> {
                Ok(Int(v.into()))
            }

            fn visit_str<E: de::Error>(self, v: &str) -> Result<Int, E> {
                BigInt::from_str(v.trim())
                    .map(Int)
                    .map_err(|_| E::custom(format!("not an integer: {v:?}")))
            }
        }

        d.deserialize_any(IntVisitor)
    }
}

impl Int {
    pub fn to_i64(&self) -> Option<i64> {
        i64::try_from(&self.0).ok()
    }
}

pub fn ints(v: &[BigInt]) -> Vec<Int> {
    v.iter().cloned().map(Int).collect()
}

pub fn ints_i64(v: &[i64]) -> Vec<Int> {
    v.iter().map(|&x| Int(x.into())).collect()
}

pub fn bigs(v: &[Int]) -> Vec<BigInt> {
    v.iter().map(|x| x.0.clone()).collect()
}

pub fn rats(v: &[Rat]) -> Vec<String> {
    v.iter().map(ToString::to_string).collect()
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct FanInput {
    pub dim: usize,
    pub rays: Vec<Vec<Int>>,
    pub max_cones: Vec<Vec<usize>>,
}

impl FanInput {
    pub fn to_fan(&self) -> toric_ci::Result<Fan> {
        Fan::new(self.dim, self.rays.iter().map(|r| bigs(r)).collect(), self.max_cones.clone())
    }
}

/// One monomial; a missing coefficient or `"generic"` marks a general one.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct Term {
    pub exponent: Vec<Int>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub coefficient: Option<String>,
}

impl Term {
    fn coefficient(&self) -> Result<Coefficient, String> {
        match self.coefficient.as_deref() {
            None | Some("generic") => Ok(Coefficient::Generic),
            Some(c) => Rat::from_str(c.trim())
                .map(Coefficient::Value)
                .map_err(|_| format!("bad coefficient {c:?}")),
        }
    }

    pub fn from_parts(exponent: &[BigInt], c: &Coefficient) -> Term {
        Term {
            exponent: ints(exponent),
            coefficient: Some(c.to_string()),
        }
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct SystemInput {
    #[serde(default)]
    pub schema: Option<String>,
    pub fan: FanInput,
    /// Polynomials as lists of terms.
    pub system: Vec<Vec<Term>>,
}

impl SystemInput {
    /// With `generic` every coefficient is replaced by a general one.
    pub fn to_system(&self, generic: bool) -> Result<LaurentSystem, InputError> {
        let polys = self
            .system
            .iter()
            .map(|terms| {
                let terms = terms
                    .iter()
                    .map(|t| {
                        let c = if generic { Coefficient::Generic } else { t.coefficient().map_err(InputError::Parse)? };
                        Ok((bigs(&t.exponent), c))
                    })
                    .collect::<Result<Vec<_>, InputError>>()?;
                Ok(LaurentPolynomial::new(self.fan.dim, terms)?)
            })
            .collect::<Result<Vec<_>, InputError>>()?;
        Ok(LaurentSystem::new(polys)?)
    }
}

/// Failure while turning an input document into library objects.
#[derive(Debug)]
pub enum InputError {
    Parse(String),
    Math(toric_ci::Error),
}

impl From<toric_ci::Error> for InputError {
    fn from(e: toric_ci::Error) -> Self {
        InputError::Math(e)
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct GroupOut {
    pub free_rank: usize,
    pub torsion: Vec<Int>,
}

impl GroupOut {
    pub fn new(g: &AbelianGroup) -> Self {
        GroupOut {
            free_rank: g.free_rank(),
            torsion: ints(g.torsion()),
        }
    }
}

/// Free coordinates followed by torsion residues.
pub fn element(g: &GroupElement) -> Vec<Int> {
    ints(&g.coordinates())
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct HomogenizedPoly {
    pub display: String,
    pub degree: Vec<Int>,
    pub shift: Vec<Int>,
    pub terms: Vec<Term>,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct HomogenizeOutput {
    pub schema: String,
    pub class_group: GroupOut,
    pub generator_degrees: Vec<Vec<Int>>,
    pub polynomials: Vec<HomogenizedPoly>,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct SigmaXOutput {
    pub schema: String,
    pub mode: String,
    /// Ray indices start at 0.
    pub cones: Vec<Vec<usize>>,
    pub maximal: Vec<Vec<usize>>,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct AccInput {
    #[serde(default)]
    pub schema: Option<String>,
    pub fan: FanInput,
    /// Cones spanning the complex; the maximal cones of the fan if absent.
    #[serde(default)]
    pub cones: Option<Vec<Vec<usize>>>,
    /// Primitive vectors whose discrepancies are reported.
    #[serde(default)]
    pub query: Vec<Vec<Int>>,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct CellOut {
    pub cone: Vec<usize>,
    pub form: Vec<String>,
    pub vertices: Vec<Vec<String>>,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct DiscrepancyOut {
    pub ray: Vec<Int>,
    pub cone: Vec<usize>,
    pub boundary_point: Vec<String>,
    pub discrepancy: String,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct AccOutput {
    pub schema: String,
    pub verdict: String,
    pub witnesses: Vec<Vec<Int>>,
    pub gorenstein_index: Int,
    pub cells: Vec<CellOut>,
    pub discrepancies: Vec<DiscrepancyOut>,
}

/// Degree data of a fake weighted projective space and the relation
/// degrees of a complete intersection in it.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct FwpsInput {
    #[serde(default)]
    pub schema: Option<String>,
    /// Orders of the cyclic factors of the class group.
    #[serde(default)]
    pub torsion: Vec<Int>,
    /// Columns `(x_i, eta_i1, ..., eta_iq)`.
    pub degrees: Vec<Vec<Int>>,
    /// Columns `(u_j, zeta_j1, ..., zeta_jq)`.
    pub relations: Vec<Vec<Int>>,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct InvariantsOutput {
    pub schema: String,
    pub class_group: GroupOut,
    pub degrees: Vec<Vec<Int>>,
    pub relations: Vec<Vec<Int>>,
    pub minus_k: Vec<Int>,
    pub minus_k_cubed: String,
    pub h0_minus_k: Int,
    pub fano_index: Int,
    pub gorenstein_index: Int,
    pub verdict: String,
}

/// One classified family, as written to the JSON-lines table.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct FamilyRecord {
    pub schema: String,
    pub number: usize,
    pub s: usize,
    pub weights: Vec<Int>,
    pub relation_degrees: Vec<Int>,
    pub torsion: Vec<Int>,
    /// Columns `(x_i, eta_i)` of the degree matrix.
    pub degree_matrix: Vec<Vec<Int>>,
    /// Columns `(u_j, zeta_j)`.
    pub relation_matrix: Vec<Vec<Int>>,
    pub minus_k: Vec<Int>,
    pub minus_k_cubed: String,
    pub h0_minus_k: Int,
    pub fano_index: Int,
    pub gorenstein_index: Int,
    pub smooth: bool,
    pub has_torsion: bool,
}

impl FamilyRecord {
    pub fn new(f: &toric_ci::classification::Family) -> Self {
        let inv = &f.invariants;
        FamilyRecord {
            schema: FAMILY_SCHEMA.into(),
            number: 0,
            s: f.s,
            weights: ints_i64(&f.tuple.weights),
            relation_degrees: ints_i64(&f.tuple.relations),
            torsion: ints_i64(&f.torsion),
            degree_matrix: f.degree_columns().iter().map(|c| ints_i64(c)).collect(),
            relation_matrix: f.relation_columns().iter().map(|c| ints_i64(c)).collect(),
            minus_k: element(&inv.minus_k),
            minus_k_cubed: inv.minus_k_cubed.to_string(),
            h0_minus_k: Int(inv.h0_minus_k.clone()),
            fano_index: Int(inv.fano_index.clone()),
            gorenstein_index: Int(inv.gorenstein_index.clone()),
            smooth: f.smooth,
            has_torsion: f.has_torsion(),
        }
    }

    /// Same order as the library's family sort.
    #[allow(clippy::type_complexity)]
    pub fn sort_key(&self) -> (usize, Vec<&Int>, bool, &[Int], &[Int], &[Vec<Int>], &[Vec<Int>]) {
        (
            self.s,
            self.weights.iter().rev().collect(),
            self.has_torsion,
            &self.relation_degrees,
            &self.torsion,
            &self.degree_matrix,
            &self.relation_matrix,
        )
    }
}

pub fn sort_records(records: &mut [FamilyRecord]) {
    records.sort_by(|a, b| a.sort_key().cmp(&b.sort_key()));
    for (i, r) in records.iter_mut().enumerate() {
        r.number = i + 1;
    }
}

fn column(c: &[Int]) -> String {
    if c.len() == 1 {
        c[0].0.to_string()
    } else {
        format!("({})", c.iter().map(|x| x.0.to_string()).collect::<Vec<_>>().join(","))
    }
}

/// Aligned text table with one row per family.
pub fn table(records: &[FamilyRecord]) -> String {
    let header = ["No.", "s", "Cl", "Q", "mu", "-K", "-K^3", "h0(-K)", "q", "i", "smooth"];
    let rows: Vec<Vec<String>> = records
        .iter()
        .map(|r| {
            let cl = std::iter::once("Z".to_string())
                .chain(r.torsion.iter().map(|t| format!("Z/{}", t.0)))
                .collect::<Vec<_>>()
                .join("+");
            vec![
                r.number.to_string(),
                r.s.to_string(),
                cl,
                r.degree_matrix.iter().map(|c| column(c)).collect::<Vec<_>>().join(" "),
                r.relation_matrix.iter().map(|c| column(c)).collect::<Vec<_>>().join(" "),
                column(&r.minus_k),
                r.minus_k_cubed.clone(),
                r.h0_minus_k.0.to_string(),
                r.fano_index.0.to_string(),
                r.gorenstein_index.0.to_string(),
                if r.smooth { "yes" } else { "no" }.to_string(),
            ]
        })
        .collect();
    let widths: Vec<usize> = (0..header.len())
        .map(|k| rows.iter().map(|r| r[k].len()).chain([header[k].len()]).max().unwrap_or(0))
        .collect();
    let mut out = String::new();
    let mut line = |cells: Vec<&str>| {
        let parts: Vec<String> = cells.iter().zip(&widths).map(|(c, w)| format!("{c:<w$}")).collect();
        out.push_str(parts.join("  ").trim_end());
        out.push('\n');
    };
    line(header.to_vec());
    for r in &rows {
        line(r.iter().map(String::as_str).collect());
    }
    out
}
