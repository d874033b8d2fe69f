//! The problem file schema: named objects and the tasks that refer to them.

use num_bigint::BigInt;
use serde::{Deserialize, Deserializer, Serialize, Serializer};
use std::str::FromStr;

/// An integer written as a JSON number, or as a decimal string when it exceeds 64 bits.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Int(pub BigInt);

impl Serialize for Int {
    fn serialize<S: Serializer>(&self, s: S) -> Result<S::Ok, S::Error> {
        match i64::try_from(&self.0) {
            Ok(v) => s.serialize_i64(v),
            Err(_) => s.serialize_str(&self.0.to_string()),
        }
    }
}

impl<'de> Deserialize<'de> for Int {
    fn deserialize<D: Deserializer<'de>>(d: D) -> Result<Self, D::Error> {
        #[derive(Deserialize)]
        #[serde(untagged)]
        enum Raw {
            Small(i64),
            Text(String),
        }
        match Raw::deserialize(d)? {
            Raw::Small(v) => Ok(Int(v.into())),
            Raw::Text(t) => BigInt::from_str(t.trim())
                .map(Int)
                .map_err(|_| serde::de::Error::custom(format!("invalid integer {t:?}"))),
        }
    }
}

pub fn to_elem(v: &[Int]) -> Vec<BigInt> {
    v.iter().map(|i| i.0.clone()).collect()
}

#[derive(Clone, Debug, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct ProblemFile {
    pub version: u32,
    #[serde(default)]
    pub objects: Vec<Object>,
    #[serde(default)]
    pub tasks: Vec<Task>,
}

#[derive(Clone, Debug, Serialize, Deserialize)]
pub struct Object {
    pub name: String,
    #[serde(flatten)]
    pub spec: ObjectSpec,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum ModuleClass {
    Ideal,
    Embedded,
    Free,
    Localized,
}

#[derive(Clone, Debug, Serialize, Deserialize)]
pub struct LogElemSpec {
    pub chart: Vec<Int>,
    pub unit: String,
}

#[derive(Clone, Debug, Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "snake_case")]
pub enum ObjectSpec {
    /// A submonoid of `ℤ^rank ⊕ ⊕ ℤ/torsionᵢ` given by generators.
    Monoid {
        rank: usize,
        #[serde(default, skip_serializing_if = "Vec::is_empty")]
        torsion: Vec<Int>,
        gens: Vec<Vec<Int>>,
    },
    MonoidHom {
        source: String,
        target: String,
        images: Vec<Vec<Int>>,
    },
    ModuleOverMonoid {
        monoid: String,
        class: ModuleClass,
        #[serde(default, skip_serializing_if = "Vec::is_empty")]
        gens: Vec<Vec<Int>>,
        /// Component of each generator; all zero when absent.
        #[serde(default, skip_serializing_if = "Option::is_none")]
        components: Option<Vec<usize>>,
        /// Number of components, or the rank of a free module.
        #[serde(default, skip_serializing_if = "Option::is_none")]
        rank: Option<usize>,
        #[serde(default, skip_serializing_if = "Vec::is_empty")]
        inverted: Vec<Vec<Int>>,
    },
    Ring {
        vars: Vec<String>,
        #[serde(default, skip_serializing_if = "Vec::is_empty")]
        relations: Vec<String>,
    },
    /// `R^rank / (relations)`, or `R/(ideal)`, or a direct sum of earlier modules.
    Module {
        ring: String,
        #[serde(default, skip_serializing_if = "Option::is_none")]
        rank: Option<usize>,
        #[serde(default, skip_serializing_if = "Vec::is_empty")]
        relations: Vec<Vec<String>>,
        #[serde(default, skip_serializing_if = "Option::is_none")]
        ideal: Option<Vec<String>>,
        #[serde(default, skip_serializing_if = "Option::is_none")]
        direct_sum: Option<Vec<String>>,
    },
    /// A graded ring: a preset, a monoid algebra, or explicit degrees on a ring's variables.
    Grading {
        #[serde(default, skip_serializing_if = "Option::is_none")]
        preset: Option<String>,
        #[serde(default, skip_serializing_if = "Option::is_none")]
        monoid: Option<String>,
        #[serde(default, skip_serializing_if = "Option::is_none")]
        vars: Option<Vec<String>>,
        #[serde(default, skip_serializing_if = "Option::is_none")]
        ring: Option<String>,
        #[serde(default, skip_serializing_if = "Option::is_none")]
        rank: Option<usize>,
        #[serde(default, skip_serializing_if = "Vec::is_empty")]
        torsion: Vec<Int>,
        #[serde(default, skip_serializing_if = "Vec::is_empty")]
        degrees: Vec<Vec<Int>>,
    },
    /// A chart: a preset, optionally extended by units, or explicit data.
    Chart {
        #[serde(default, skip_serializing_if = "Option::is_none")]
        preset: Option<String>,
        #[serde(default, skip_serializing_if = "Option::is_none")]
        n: Option<usize>,
        #[serde(default, skip_serializing_if = "Option::is_none")]
        vars: Option<Vec<String>>,
        #[serde(default, skip_serializing_if = "Option::is_none")]
        unit_extension: Option<usize>,
        #[serde(default, skip_serializing_if = "Option::is_none")]
        hom: Option<String>,
        #[serde(default, skip_serializing_if = "Option::is_none")]
        base: Option<String>,
        #[serde(default, skip_serializing_if = "Option::is_none")]
        target: Option<String>,
        #[serde(default, skip_serializing_if = "Vec::is_empty")]
        f: Vec<String>,
        #[serde(default, skip_serializing_if = "Vec::is_empty")]
        t: Vec<String>,
        #[serde(default, skip_serializing_if = "Vec::is_empty")]
        b: Vec<String>,
        #[serde(default, skip_serializing_if = "Vec::is_empty")]
        spawning: Vec<Vec<Int>>,
    },
    /// `C₁ ×_{C₀} C₂` along surjections given by generator images.
    Gluing {
        #[serde(default, skip_serializing_if = "Option::is_none")]
        preset: Option<String>,
        #[serde(default, skip_serializing_if = "Option::is_none")]
        c1: Option<String>,
        #[serde(default, skip_serializing_if = "Option::is_none")]
        c2: Option<String>,
        #[serde(default, skip_serializing_if = "Option::is_none")]
        c0: Option<String>,
        #[serde(default, skip_serializing_if = "Vec::is_empty")]
        f1: Vec<String>,
        #[serde(default, skip_serializing_if = "Vec::is_empty")]
        f2: Vec<String>,
    },
    /// Either `P(M)` of a module over the glued ring, or explicit branch modules with a clutching.
    DescentDatum {
        gluing: String,
        #[serde(default, skip_serializing_if = "Option::is_none")]
        pullback_of: Option<String>,
        #[serde(default, skip_serializing_if = "Option::is_none")]
        m1: Option<String>,
        #[serde(default, skip_serializing_if = "Option::is_none")]
        m2: Option<String>,
        /// Row-major matrix of `φ: M₁ ⊗ C₀ → M₂ ⊗ C₀`; column `j` is the image of generator `j`.
        #[serde(default, skip_serializing_if = "Vec::is_empty")]
        phi: Vec<Vec<String>>,
        /// Row-major matrix of the inverse; computed when absent.
        #[serde(default, skip_serializing_if = "Option::is_none")]
        phi_inv: Option<Vec<Vec<String>>>,
    },
    /// A lifting problem over `k[e]/(e²) → k` or the trivial extension.
    LiftProblem {
        extension: String,
        hom: String,
        chart_monoid: String,
        a: Vec<LogElemSpec>,
        b: Vec<LogElemSpec>,
        eta: Vec<String>,
    },
}

impl ObjectSpec {
    pub fn kind(&self) -> &'static str {
        match self {
            ObjectSpec::Monoid { .. } => "monoid",
            ObjectSpec::MonoidHom { .. } => "monoid_hom",
            ObjectSpec::ModuleOverMonoid { .. } => "module_over_monoid",
            ObjectSpec::Ring { .. } => "ring",
            ObjectSpec::Module { .. } => "module",
            ObjectSpec::Grading { .. } => "grading",
            ObjectSpec::Chart { .. } => "chart",
            ObjectSpec::Gluing { .. } => "gluing",
            ObjectSpec::DescentDatum { .. } => "descent_datum",
            ObjectSpec::LiftProblem { .. } => "lift_problem",
        }
    }
}

#[derive(Clone, Debug, Serialize, Deserialize)]
pub struct Task {
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub name: Option<String>,
    #[serde(flatten)]
    pub spec: TaskSpec,
}

#[derive(Clone, Debug, Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "snake_case")]
pub enum TaskSpec {
    Classify {
        hom: String,
    },
    Primes {
        monoid: String,
    },
    Flat {
        module: String,
    },
    Basis {
        module: String,
        #[serde(default, skip_serializing_if = "Option::is_none")]
        window: Option<usize>,
    },
    GradedFlat {
        grading: String,
        module: String,
    },
    NodalPanel {
        module: String,
    },
    LogFlatPoint {
        monoid: String,
        module: String,
    },
    ChartCriterion {
        chart: String,
        module: String,
    },
    ChartInvariance {
        chart: String,
        other: String,
        /// Number of adjoined units; absent for identical charts.
        #[serde(default, skip_serializing_if = "Option::is_none")]
        units: Option<usize>,
        module: String,
        #[serde(default, skip_serializing_if = "Option::is_none")]
        window: Option<usize>,
    },
    /// Compares flatness of a module over the nodal family with its special and generic fibers.
    Family {
        module: String,
    },
    Lift {
        problem: String,
    },
    Glue {
        gluing: String,
    },
    Descend {
        datum: String,
    },
    HomExt {
        gluing: String,
        module: String,
        other: String,
    },
    Roundtrip {
        #[serde(default, skip_serializing_if = "Option::is_none")]
        gluing: Option<String>,
        #[serde(default, skip_serializing_if = "Option::is_none")]
        module: Option<String>,
        #[serde(default, skip_serializing_if = "Option::is_none")]
        datum: Option<String>,
    },
}

impl TaskSpec {
    pub fn kind(&self) -> &'static str {
        match self {
            TaskSpec::Classify { .. } => "classify",
            TaskSpec::Primes { .. } => "primes",
            TaskSpec::Flat { .. } => "flat",
            TaskSpec::Basis { .. } => "basis",
            TaskSpec::GradedFlat { .. } => "graded_flat",
            TaskSpec::NodalPanel { .. } => "nodal_panel",
            TaskSpec::LogFlatPoint { .. } => "log_flat_point",
            TaskSpec::ChartCriterion { .. } => "chart_criterion",
            TaskSpec::ChartInvariance { .. } => "chart_invariance",
            TaskSpec::Family { .. } => "family",
            TaskSpec::Lift { .. } => "lift",
            TaskSpec::Glue { .. } => "glue",
            TaskSpec::Descend { .. } => "descend",
            TaskSpec::HomExt { .. } => "hom_ext",
            TaskSpec::Roundtrip { .. } => "roundtrip",
        }
    }

    /// Referenced object names with the kind each must have.
    pub fn references(&self) -> Vec<(&str, &'static [&'static str])> {
        const MODULES: &[&str] = &["module"];
        match self {
            TaskSpec::Classify { hom } => vec![(hom, &["monoid_hom"])],
            TaskSpec::Primes { monoid } => vec![(monoid, &["monoid"])],
            TaskSpec::Flat { module } | TaskSpec::Basis { module, .. } => vec![(module, &["module_over_monoid"])],
            TaskSpec::GradedFlat { grading, module } => vec![(grading, &["grading"]), (module, MODULES)],
            TaskSpec::NodalPanel { module } | TaskSpec::Family { module } => vec![(module, MODULES)],
            TaskSpec::LogFlatPoint { monoid, module } => vec![(monoid, &["monoid"]), (module, MODULES)],
            TaskSpec::ChartCriterion { chart, module } => vec![(chart, &["chart"]), (module, MODULES)],
            TaskSpec::ChartInvariance { chart, other, module, .. } => {
                vec![(chart, &["chart"]), (other, &["chart"]), (module, MODULES)]
            }
            TaskSpec::Lift { problem } => vec![(problem, &["lift_problem"])],
            TaskSpec::Glue { gluing } => vec![(gluing, &["gluing"])],
            TaskSpec::Descend { datum } => vec![(datum, &["descent_datum"])],
            TaskSpec::HomExt { gluing, module, other } => vec![(gluing, &["gluing"]), (module, MODULES), (other, MODULES)],
            TaskSpec::Roundtrip { gluing, module, datum } => {
                let mut out: Vec<(&str, &'static [&'static str])> = vec![];
                if let Some(g) = gluing {
                    out.push((g, &["gluing"]));
                }
                if let Some(m) = module {
                    out.push((m, MODULES));
                }
                if let Some(d) = datum {
                    out.push((d, &["descent_datum"]));
                }
                out
            }
        }
    }
}
