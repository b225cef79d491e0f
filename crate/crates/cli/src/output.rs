//! Report documents and their byte-stable encoding.

use std::collections::BTreeMap;
use std::io::{self, Write};
use std::path::Path;

use rational_toeplitz::{
    AnalysisReport, CircleSplit, Complex64, DeficiencyReport, Dim, Poly, RationalFun, RationalSymbol, RootSet,
    SpectrumReport,
};
use serde::Serialize;
use serde_json::ser::{Formatter, PrettyFormatter};
use serde_json::value::RawValue;

use crate::input::SymbolSpec;

pub const SCHEMA_VERSION: &str = "1.0";

/// Pretty JSON with every float written as `{:.16e}` (17 significant
/// digits, lowercase exponent) and negative zero printed as zero.
pub struct FloatFormatter(PrettyFormatter<'static>);

impl FloatFormatter {
    pub fn new() -> Self {
        FloatFormatter(PrettyFormatter::with_indent(b"  "))
    }
}

impl Default for FloatFormatter {
    fn default() -> Self {
        Self::new()
    }
}

pub fn format_float(x: f64) -> String {
    let x = if x == 0.0 { 0.0 } else { x };
    format!("{x:.16e}")
}

impl Formatter for FloatFormatter {
    fn write_f64<W: ?Sized + Write>(&mut self, w: &mut W, value: f64) -> io::Result<()> {
        w.write_all(format_float(value).as_bytes())
    }
    fn write_f32<W: ?Sized + Write>(&mut self, w: &mut W, value: f32) -> io::Result<()> {
        self.write_f64(w, value as f64)
    }
    fn begin_array<W: ?Sized + Write>(&mut self, w: &mut W) -> io::Result<()> {
        self.0.begin_array(w)
    }
    fn end_array<W: ?Sized + Write>(&mut self, w: &mut W) -> io::Result<()> {
        self.0.end_array(w)
    }
    fn begin_array_value<W: ?Sized + Write>(&mut self, w: &mut W, first: bool) -> io::Result<()> {
        self.0.begin_array_value(w, first)
    }
    fn end_array_value<W: ?Sized + Write>(&mut self, w: &mut W) -> io::Result<()> {
        self.0.end_array_value(w)
    }
    fn begin_object<W: ?Sized + Write>(&mut self, w: &mut W) -> io::Result<()> {
        self.0.begin_object(w)
    }
    fn end_object<W: ?Sized + Write>(&mut self, w: &mut W) -> io::Result<()> {
        self.0.end_object(w)
    }
    fn begin_object_key<W: ?Sized + Write>(&mut self, w: &mut W, first: bool) -> io::Result<()> {
        self.0.begin_object_key(w, first)
    }
    fn begin_object_value<W: ?Sized + Write>(&mut self, w: &mut W) -> io::Result<()> {
        self.0.begin_object_value(w)
    }
    fn end_object_value<W: ?Sized + Write>(&mut self, w: &mut W) -> io::Result<()> {
        self.0.end_object_value(w)
    }
}

pub fn to_json<T: Serialize>(value: &T) -> Vec<u8> {
    let mut out = Vec::new();
    let mut ser = serde_json::Serializer::with_formatter(&mut out, FloatFormatter::new());
    value.serialize(&mut ser).expect("serializing to memory cannot fail");
    out.push(b'\n');
    out
}

/// Writes `bytes` to `path` through a sibling temporary file and a rename,
/// or to stdout when no path is given.
pub fn emit(bytes: &[u8], path: Option<&Path>) -> io::Result<()> {
    let Some(path) = path else {
        let mut out = io::stdout().lock();
        out.write_all(bytes)?;
        return out.flush();
    };
    let dir = match path.parent() {
        Some(d) if !d.as_os_str().is_empty() => d,
        _ => Path::new("."),
    };
    let mut tmp = tempfile::NamedTempFile::new_in(dir)?;
    tmp.write_all(bytes)?;
    tmp.as_file().sync_all()?;
    tmp.persist(path).map_err(|e| e.error)?;
    Ok(())
}

/// A complex number written inline as `[re, im]`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Pair(pub Complex64);

pub fn pair(z: Complex64) -> Pair {
    Pair(z)
}

fn json_float(x: f64) -> String {
    if x.is_finite() {
        format_float(x)
    } else {
        "null".into()
    }
}

impl Serialize for Pair {
    fn serialize<S: serde::Serializer>(&self, s: S) -> Result<S::Ok, S::Error> {
        let text = format!("[{}, {}]", json_float(self.0.re), json_float(self.0.im));
        RawValue::from_string(text).map_err(serde::ser::Error::custom)?.serialize(s)
    }
}

#[derive(Debug, Serialize)]
pub struct RootDoc {
    pub value: Pair,
    pub multiplicity: usize,
}

/// Ascending coefficients plus roots with multiplicities; `roots` is null
/// when the root solver fails.
#[derive(Debug, Serialize)]
pub struct PolyDoc {
    pub coeffs: Vec<Pair>,
    pub roots: Option<Vec<RootDoc>>,
}

fn roots_doc(rs: &RootSet) -> Vec<RootDoc> {
    rs.entries()
        .iter()
        .map(|r| RootDoc {
            value: pair(r.value),
            multiplicity: r.multiplicity,
        })
        .collect()
}

impl PolyDoc {
    pub fn new(p: &Poly, root_tol: f64) -> Self {
        let roots = if p.is_constant() {
            Some(Vec::new())
        } else {
            p.roots(root_tol).ok().map(|rs| roots_doc(&rs))
        };
        PolyDoc {
            coeffs: p.coeffs().iter().map(|&c| pair(c)).collect(),
            roots,
        }
    }
}

#[derive(Debug, Serialize)]
pub struct RationalDoc {
    pub num: PolyDoc,
    pub den: PolyDoc,
}

impl RationalDoc {
    pub fn new(f: &RationalFun, root_tol: f64) -> Self {
        RationalDoc {
            num: PolyDoc::new(&f.num, root_tol),
            den: PolyDoc::new(&f.den, root_tol),
        }
    }
}

fn rationals(fs: &[RationalFun], root_tol: f64) -> Vec<RationalDoc> {
    fs.iter().map(|f| RationalDoc::new(f, root_tol)).collect()
}

/// Roots of one polynomial sorted by position relative to the circle.
#[derive(Debug, Serialize)]
pub struct SplitDoc {
    pub scale: Pair,
    pub on: Vec<RootDoc>,
    pub inside: Vec<RootDoc>,
    pub outside: Vec<RootDoc>,
    pub ill_conditioned: bool,
}

impl SplitDoc {
    pub fn new(s: &CircleSplit) -> Self {
        SplitDoc {
            scale: pair(s.scale),
            on: roots_doc(&s.on_roots),
            inside: roots_doc(&s.inside_roots),
            outside: roots_doc(&s.outside_roots),
            ill_conditioned: s.ill_conditioned,
        }
    }
}

#[derive(Debug, Serialize)]
pub struct FactorizationDoc {
    pub numerator: SplitDoc,
    pub denominator: SplitDoc,
    pub bounded: bool,
    pub real_on_circle: bool,
}

impl FactorizationDoc {
    pub fn new(sym: &RationalSymbol) -> Self {
        FactorizationDoc {
            numerator: SplitDoc::new(sym.numerator_split()),
            denominator: SplitDoc::new(sym.denominator_split()),
            bounded: sym.is_bounded(),
            real_on_circle: sym.is_real_on_circle(),
        }
    }
}

#[derive(Debug, Serialize)]
pub struct AnalysisDoc {
    pub fredholm: bool,
    pub dim_ker: usize,
    pub dim_coker: usize,
    pub index: Option<i64>,
    pub formal_degree_gap: i64,
    pub domain_factor: PolyDoc,
    pub kernel_basis: Vec<RationalDoc>,
    pub cokernel_basis: Vec<RationalDoc>,
    pub range_numerator: PolyDoc,
    pub range_denominator: PolyDoc,
    pub ill_conditioned: bool,
    pub factorization: FactorizationDoc,
}

impl AnalysisDoc {
    pub fn new(sym: &RationalSymbol, a: &AnalysisReport) -> Self {
        let tol = sym.tolerances().root_tol;
        AnalysisDoc {
            fredholm: a.fredholm,
            dim_ker: a.dim_ker,
            dim_coker: a.dim_coker,
            index: a.index,
            formal_degree_gap: a.formal_degree_gap,
            domain_factor: PolyDoc::new(&a.domain_factor, tol),
            kernel_basis: rationals(&a.kernel_basis, tol),
            cokernel_basis: rationals(&a.cokernel_basis, tol),
            range_numerator: PolyDoc::new(&a.range_numerator, tol),
            range_denominator: PolyDoc::new(&a.range_denominator, tol),
            ill_conditioned: a.ill_conditioned,
            factorization: FactorizationDoc::new(sym),
        }
    }
}

/// A dimension: a count, or the string `"infinite"`.
#[derive(Debug, Serialize)]
#[serde(untagged)]
pub enum DimDoc {
    Finite(usize),
    Infinite(&'static str),
}

impl From<Dim> for DimDoc {
    fn from(d: Dim) -> Self {
        match d {
            Dim::Finite(n) => DimDoc::Finite(n),
            Dim::Infinite => DimDoc::Infinite("infinite"),
        }
    }
}

#[derive(Debug, Serialize)]
pub struct DegreesDoc {
    pub s_in: usize,
    pub rl_in: usize,
    pub rl_in_bar: usize,
}

#[derive(Debug, Serialize)]
pub struct SpectrumDoc {
    pub lambda: Pair,
    pub part: &'static str,
    pub on_curve: bool,
    pub fredholm: bool,
    pub regular_value: bool,
    pub dim_ker: DimDoc,
    pub dim_coker: DimDoc,
    pub index: Option<i64>,
    pub degrees: DegreesDoc,
    pub ill_conditioned: bool,
}

impl From<&SpectrumReport> for SpectrumDoc {
    fn from(r: &SpectrumReport) -> Self {
        SpectrumDoc {
            lambda: pair(r.lambda),
            part: r.part.as_str(),
            on_curve: r.on_curve,
            fredholm: r.fredholm,
            regular_value: r.regular_value,
            dim_ker: r.dim_ker.into(),
            dim_coker: r.dim_coker.into(),
            index: r.index,
            degrees: DegreesDoc {
                s_in: r.degrees.s_in,
                rl_in: r.degrees.rl_in,
                rl_in_bar: r.degrees.rl_in_bar,
            },
            ill_conditioned: r.ill_conditioned,
        }
    }
}

#[derive(Debug, Serialize)]
pub struct DeficiencyDoc {
    pub n_plus: usize,
    pub n_minus: usize,
    pub symmetry_class: &'static str,
    pub l: usize,
    pub p: PolyDoc,
    pub q: PolyDoc,
    pub c_scale: Pair,
    pub identity_residual: f64,
    pub basis_plus: Vec<RationalDoc>,
    pub basis_minus: Vec<RationalDoc>,
}

impl DeficiencyDoc {
    pub fn new(sym: &RationalSymbol, d: &DeficiencyReport) -> Self {
        let tol = sym.tolerances().root_tol;
        DeficiencyDoc {
            n_plus: d.n_plus,
            n_minus: d.n_minus,
            symmetry_class: d.symmetry_class.as_str(),
            l: d.l,
            p: PolyDoc::new(&d.p, tol),
            q: PolyDoc::new(&d.q, tol),
            c_scale: pair(d.c_scale),
            identity_residual: d.identity_residual,
            basis_plus: rationals(&d.basis_plus, tol),
            basis_minus: rationals(&d.basis_minus, tol),
        }
    }
}

#[derive(Debug, Serialize)]
pub struct PullbackDoc {
    pub alpha: f64,
    pub p: PolyDoc,
    pub q: PolyDoc,
    pub sample_points: usize,
    pub sampling_residual: f64,
}

/// The invocation as echoed back in every document.
#[derive(Debug, Clone, Serialize)]
pub struct CommandEcho {
    pub name: &'static str,
    pub input: String,
    #[serde(skip_serializing_if = "BTreeMap::is_empty")]
    pub args: BTreeMap<&'static str, String>,
}

#[derive(Debug, Serialize)]
pub struct Document<T: Serialize> {
    pub schema_version: &'static str,
    pub command: CommandEcho,
    pub symbol: SymbolSpec,
    pub report: T,
}

impl<T: Serialize> Document<T> {
    pub fn new(command: CommandEcho, sym: &RationalSymbol, report: T) -> Self {
        Document {
            schema_version: SCHEMA_VERSION,
            command,
            symbol: SymbolSpec::from_symbol(sym),
            report,
        }
    }
}
