//! Command-line front end: one static binary, subcommand dispatch, and the
//! `verify` command that replays the library's verification suites.
//!
//! Every invocation prints a single JSON envelope
//! `{"status": ..., "payload": ..., "elapsed": <ms>}` to stdout. Payloads are
//! byte-identical across runs for identical inputs; `elapsed` is the only
//! field allowed to vary. Counts and polynomial coefficients are serialized
//! as decimal strings so consumers never face 64-bit overflow; vertex
//! coordinates and map entries follow the polytope interchange format and
//! stay plain JSON integers while they fit.
//!
//! Exit codes: 0 ok, 1 verification failure, 2 usage/parse error, 3 domain
//! error.

use std::io::Read as _;
use std::time::Instant;

use clap::error::ErrorKind;
use clap::{Parser, Subcommand, ValueEnum};
use serde_json::{json, Value};

use crate::cactus::{
    count_cacti_table, enumerate_cacti, extract_cactus, realize, RootedCactus,
};
use crate::ehrhart::{
    betti_from_quotient, contact_betti, count_points, count_points_naive, ehrhart,
    root_real_parts, series_product_check, EhrhartPolynomial, HStar,
};
use crate::equiv::{
    canonical_form, identify_dk, is_small_cross, unimodular_equivalent, EquivalenceWitness,
};
use crate::families::{
    cross_polytope, cube, family_dk, family_pk, family_tk, prequantize_polytope,
    small_cross_polytope, BottMatrix,
};
use crate::linalg::{int, seeded_unimodular_map, AffineMap, Int, IntMatrix};
use crate::polytope::Polytope;
use crate::{Error, Result};

#[derive(Parser)]
#[command(
    name = "latpoly",
    version,
    about = "Exact-arithmetic lattice polytopes, Ehrhart theory, and toric diagrams"
)]
struct Cli {
    /// Cap the worker-thread pool (default: one per core).
    #[arg(long, global = true, value_name = "N")]
    threads: Option<usize>,

    #[command(subcommand)]
    command: Cmd,
}

#[derive(Subcommand)]
enum Cmd {
    /// h*-vector, binomial-basis Ehrhart polynomial, and contact Betti table
    /// of a polytope.
    Ehrhart {
        /// Polytope JSON file, or `-` for stdin.
        input: String,
    },
    /// h*-vector with palindromy and Gorenstein data.
    Hstar {
        input: String,
    },
    /// Contact Betti numbers cb_0, cb_2, ..., cb_{2n} and the stable tail.
    Betti {
        input: String,
    },
    /// Polar dual of a reflexive polytope (after centering).
    Dual {
        input: String,
    },
    /// Prequantize a Delzant polytope: toric diagram, height functional, and
    /// cone map.
    Preq {
        input: String,
    },
    /// Emit a member of a built-in family as polytope JSON.
    Family {
        #[arg(long, value_enum, ignore_case = true)]
        kind: FamilyKind,
        /// Ambient dimension (every kind except bott).
        #[arg(long)]
        n: Option<usize>,
        /// Family parameter for pk/tk/dk.
        #[arg(long, allow_hyphen_values = true)]
        k: Option<i64>,
        /// Lower corner for cube.
        #[arg(long, default_value_t = 0, allow_hyphen_values = true)]
        lo: i64,
        /// Upper corner for cube.
        #[arg(long, default_value_t = 1, allow_hyphen_values = true)]
        hi: i64,
        /// JSON file with the lower-triangular twist-matrix rows for bott.
        #[arg(long, value_name = "FILE")]
        bott_matrix: Option<String>,
    },
    /// Enumerate canonical rooted 3-cacti with n triangles.
    EnumerateCacti {
        #[arg(long)]
        n: usize,
        /// Also realize each cactus as a toric diagram.
        #[arg(long, conflicts_with = "count_only")]
        realize: bool,
        /// Report the count only, via the recurrence (no structures built).
        #[arg(long)]
        count_only: bool,
    },
    /// Realize a rooted 3-cactus (nested-array JSON) as a toric diagram.
    Realize {
        input: String,
    },
    /// Recover the rooted 3-cactus underlying a realized diagram.
    Extract {
        input: String,
    },
    /// Decide affine unimodular equivalence of two polytopes.
    Equiv {
        a: String,
        b: String,
    },
    /// Identify a diagram within the classified families (smallcross, Dk).
    Identify {
        input: String,
    },
    /// Real parts of the complex roots of the Ehrhart polynomial.
    Roots {
        input: String,
        /// Expected common real part; enables the all_match verdict.
        #[arg(long, allow_hyphen_values = true)]
        target: Option<f64>,
        #[arg(long, default_value_t = 1e-9)]
        tol: f64,
    },
    /// Replay a named verification suite; exits 1 on any failed check.
    Verify {
        #[arg(long)]
        suite: String,
    },
}

#[derive(Clone, Copy, ValueEnum)]
enum FamilyKind {
    Cube,
    Cross,
    Smallcross,
    Pk,
    Tk,
    Dk,
    Bott,
}

/// Outcome of one invocation: the envelope fields plus the process exit
/// code.
pub struct CommandResult {
    pub status: &'static str,
    pub payload: Value,
    pub elapsed_ms: u64,
    pub exit_code: i32,
}

impl CommandResult {
    /// The JSON envelope printed to stdout.
    pub fn envelope(&self) -> String {
        json!({
            "status": self.status,
            "payload": self.payload,
            "elapsed": self.elapsed_ms,
        })
        .to_string()
    }
}

enum Outcome {
    Plain(Value),
    Verification { payload: Value, ok: bool },
}

/// Parses argv (including the binary name at index 0) and executes one
/// subcommand, without printing anything.
pub fn run(argv: &[String]) -> CommandResult {
    let start = Instant::now();
    let done = |status, payload, exit_code| CommandResult {
        status,
        payload,
        elapsed_ms: start.elapsed().as_millis() as u64,
        exit_code,
    };
    let cli = match Cli::try_parse_from(argv) {
        Ok(cli) => cli,
        Err(e) => {
            // --help and --version surface as clap errors but are successes.
            return if matches!(e.kind(), ErrorKind::DisplayHelp | ErrorKind::DisplayVersion) {
                done("ok", json!({ "help": e.to_string() }), 0)
            } else {
                done("error", json!({ "code": "usage", "message": e.to_string() }), 2)
            };
        }
    };
    if let Some(threads) = cli.threads {
        // The global pool is process-wide and can only be installed once;
        // later invocations in the same process keep the first setting.
        let _ = rayon::ThreadPoolBuilder::new().num_threads(threads).build_global();
    }
    match dispatch(cli.command) {
        Ok(Outcome::Plain(payload)) => done("ok", payload, 0),
        Ok(Outcome::Verification { payload, ok: true }) => done("ok", payload, 0),
        Ok(Outcome::Verification { payload, ok: false }) => done("error", payload, 1),
        Err(e) => {
            let exit = if matches!(e, Error::Parse(_)) { 2 } else { 3 };
            done("error", json!({ "code": error_code(&e), "message": e.to_string() }), exit)
        }
    }
}

/// Executes argv, prints the envelope, and returns the process exit code.
pub fn run_main(argv: Vec<String>) -> i32 {
    let result = run(&argv);
    println!("{}", result.envelope());
    result.exit_code
}

fn error_code(e: &Error) -> &'static str {
    match e {
        Error::Dimension(_) => "dimension",
        Error::Degenerate(_) => "degenerate",
        Error::Precondition(_) => "precondition",
        Error::NotGorenstein(_) => "not-gorenstein",
        Error::InvalidParam(_) => "invalid-param",
        Error::NotInFamily(_) => "not-in-family",
        Error::Domain(_) => "domain",
        Error::Parse(_) => "parse",
    }
}

fn dispatch(cmd: Cmd) -> Result<Outcome> {
    let plain = |v: Result<Value>| v.map(Outcome::Plain);
    match cmd {
        Cmd::Ehrhart { input } => plain(cmd_ehrhart(&input)),
        Cmd::Hstar { input } => plain(cmd_hstar(&input)),
        Cmd::Betti { input } => plain(cmd_betti(&input)),
        Cmd::Dual { input } => plain(cmd_dual(&input)),
        Cmd::Preq { input } => plain(cmd_preq(&input)),
        Cmd::Family { kind, n, k, lo, hi, bott_matrix } => {
            plain(cmd_family(kind, n, k, lo, hi, bott_matrix.as_deref()))
        }
        Cmd::EnumerateCacti { n, realize: with_diagrams, count_only } => {
            plain(cmd_enumerate_cacti(n, with_diagrams, count_only))
        }
        Cmd::Realize { input } => plain(cmd_realize(&input)),
        Cmd::Extract { input } => plain(cmd_extract(&input)),
        Cmd::Equiv { a, b } => plain(cmd_equiv(&a, &b)),
        Cmd::Identify { input } => plain(cmd_identify(&input)),
        Cmd::Roots { input, target, tol } => plain(cmd_roots(&input, target, tol)),
        Cmd::Verify { suite } => {
            let checks = verify_suite(&suite)?;
            let failed = checks.iter().filter(|c| !c.pass).count();
            let payload = json!({
                "suite": suite,
                "total": checks.len(),
                "failed": failed,
                "checks": checks
                    .iter()
                    .map(|c| json!({ "name": c.name, "pass": c.pass, "detail": c.detail }))
                    .collect::<Vec<_>>(),
            });
            Ok(Outcome::Verification { payload, ok: failed == 0 })
        }
    }
}

// ---------------------------------------------------------------------------
// input plumbing

fn read_input(path: &str) -> Result<String> {
    if path == "-" {
        let mut text = String::new();
        std::io::stdin()
            .read_to_string(&mut text)
            .map_err(|e| Error::Parse(format!("stdin: {e}")))?;
        Ok(text)
    } else {
        std::fs::read_to_string(path).map_err(|e| Error::Parse(format!("{path}: {e}")))
    }
}

/// Strips a CLI envelope so commands pipe into each other directly.
fn unwrap_envelope(value: &Value) -> &Value {
    match value.get("payload") {
        Some(payload) if value.get("status").is_some() => payload,
        _ => value,
    }
}

/// Accepts a bare polytope document, an envelope around one, or an envelope
/// whose payload carries a `diagram` (the preq output shape).
pub fn polytope_from_text(text: &str) -> Result<Polytope> {
    let value: Value =
        serde_json::from_str(text).map_err(|e| Error::Parse(format!("polytope JSON: {e}")))?;
    let doc = unwrap_envelope(&value);
    let doc = if doc.get("vertices").is_some() {
        doc
    } else if let Some(diagram) = doc.get("diagram") {
        diagram
    } else {
        return Err(Error::Parse(
            "polytope JSON: expected an object with \"dim\" and \"vertices\"".into(),
        ));
    };
    Polytope::from_json(&doc.to_string())
}

/// Accepts a bare nested-array cactus, an envelope around one, or an
/// envelope whose payload carries a `cactus` key (the extract output shape).
pub fn cactus_from_text(text: &str) -> Result<RootedCactus> {
    let value: Value =
        serde_json::from_str(text).map_err(|e| Error::Parse(format!("cactus JSON: {e}")))?;
    let doc = unwrap_envelope(&value);
    let doc = if let Some(cactus) = doc.get("cactus") { cactus } else { doc };
    RootedCactus::from_json(&doc.to_string())
}

fn load_polytope(path: &str) -> Result<Polytope> {
    polytope_from_text(&read_input(path)?)
}

// ---------------------------------------------------------------------------
// payload builders

fn istr(x: &Int) -> Value {
    Value::String(x.to_string())
}

fn istrs(xs: &[Int]) -> Value {
    Value::Array(xs.iter().map(istr).collect())
}

fn coord(x: &Int) -> Value {
    use num_traits::ToPrimitive;
    match x.to_i64() {
        Some(small) => json!(small),
        None => Value::String(x.to_string()),
    }
}

fn coords(xs: &[Int]) -> Value {
    Value::Array(xs.iter().map(coord).collect())
}

fn matrix_value(m: &IntMatrix) -> Value {
    Value::Array((0..m.rows()).map(|i| coords(m.row(i))).collect())
}

fn polytope_value(p: &Polytope) -> Value {
    serde_json::from_str(&p.to_json()).expect("interchange JSON is valid")
}

fn map_value(m: &AffineMap) -> Value {
    json!({ "linear": matrix_value(m.linear()), "shift": coords(m.shift()) })
}

fn cactus_value(c: &RootedCactus) -> Value {
    serde_json::from_str(&c.to_json()).expect("cactus JSON is valid")
}

// ---------------------------------------------------------------------------
// subcommands

fn cmd_ehrhart(input: &str) -> Result<Value> {
    let p = load_polytope(input)?;
    let l = ehrhart(&p)?;
    let h = l.hstar();
    let n = h.dim();
    let binomial_basis: Vec<Value> = h
        .coeffs()
        .iter()
        .enumerate()
        .map(|(k, c)| {
            let arg = if n == k { "t".to_string() } else { format!("t+{}", n - k) };
            json!({ "coeff": c.to_string(), "binomial": format!("C({arg}, {n})") })
        })
        .collect();
    let betti = contact_betti(h);
    Ok(json!({
        "dim": n,
        "hstar": istrs(h.coeffs()),
        "binomial_basis": binomial_basis,
        "betti": { "cb": istrs(betti.values()), "tail": betti.tail().to_string() },
    }))
}

fn cmd_hstar(input: &str) -> Result<Value> {
    let p = load_polytope(input)?;
    let l = ehrhart(&p)?;
    let h = l.hstar();
    Ok(json!({
        "dim": h.dim(),
        "hstar": istrs(h.coeffs()),
        "palindromic": h.is_palindromic(),
        "gorenstein_index": p.gorenstein_index(),
    }))
}

fn cmd_betti(input: &str) -> Result<Value> {
    let p = load_polytope(input)?;
    let betti = contact_betti(ehrhart(&p)?.hstar());
    Ok(json!({
        "dim": p.dim(),
        "cb": istrs(betti.values()),
        "tail": betti.tail().to_string(),
    }))
}

fn cmd_dual(input: &str) -> Result<Value> {
    let p = load_polytope(input)?;
    let Some(center) = p.offset_one_translation(&int(1)) else {
        return Err(Error::Domain(
            "dual: polytope is not reflexive (no translate has every facet at lattice distance 1)"
                .into(),
        ));
    };
    let shift: Vec<Int> = center.iter().map(|x| -x).collect();
    let dual = p.translate(&shift)?.polar_dual()?.to_lattice()?;
    Ok(polytope_value(&dual))
}

fn cmd_preq(input: &str) -> Result<Value> {
    let p = load_polytope(input)?;
    let preq = prequantize_polytope(&p)?;
    Ok(json!({
        "diagram": polytope_value(&preq.diagram),
        "height_functional": coords(&preq.height_functional),
        "cone_map": matrix_value(&preq.cone_map),
    }))
}

fn cmd_family(
    kind: FamilyKind,
    n: Option<usize>,
    k: Option<i64>,
    lo: i64,
    hi: i64,
    bott_matrix: Option<&str>,
) -> Result<Value> {
    fn need<T>(opt: Option<T>, what: &str) -> Result<T> {
        opt.ok_or_else(|| Error::InvalidParam(format!("family: {what} is required for this kind")))
    }
    let p = match kind {
        FamilyKind::Cube => cube(need(n, "--n")?, lo, hi)?,
        FamilyKind::Cross => cross_polytope(need(n, "--n")?)?,
        FamilyKind::Smallcross => small_cross_polytope(need(n, "--n")?)?,
        FamilyKind::Pk => family_pk(need(n, "--n")?, need(k, "--k")?)?,
        FamilyKind::Tk => family_tk(need(n, "--n")?, need(k, "--k")?)?,
        FamilyKind::Dk => family_dk(need(n, "--n")?, need(k, "--k")?)?,
        FamilyKind::Bott => {
            let text = read_input(need(bott_matrix, "--bott-matrix")?)?;
            let rows: Vec<Vec<i64>> = serde_json::from_str(&text)
                .map_err(|e| Error::Parse(format!("bott matrix JSON: {e}")))?;
            let slices: Vec<&[i64]> = rows.iter().map(|r| r.as_slice()).collect();
            BottMatrix::from_i64(&slices)?.diagram()?
        }
    };
    Ok(polytope_value(&p))
}

fn cmd_enumerate_cacti(n: usize, with_diagrams: bool, count_only: bool) -> Result<Value> {
    if count_only {
        let table = count_cacti_table(n);
        return Ok(json!({ "n": n, "count": table[n].to_string() }));
    }
    let cacti = enumerate_cacti(n);
    let mut payload = json!({
        "n": n,
        "count": cacti.len().to_string(),
        "cacti": cacti.iter().map(cactus_value).collect::<Vec<_>>(),
    });
    if with_diagrams {
        let diagrams = cacti
            .iter()
            .map(|c| realize(c).map(|p| polytope_value(&p)))
            .collect::<Result<Vec<_>>>()?;
        payload["diagrams"] = Value::Array(diagrams);
    }
    Ok(payload)
}

fn cmd_realize(input: &str) -> Result<Value> {
    let cactus = cactus_from_text(&read_input(input)?)?;
    Ok(polytope_value(&realize(&cactus)?))
}

fn cmd_extract(input: &str) -> Result<Value> {
    let p = load_polytope(input)?;
    let cactus = extract_cactus(&p)?;
    Ok(json!({ "cactus": cactus_value(&cactus), "triangles": cactus.size().to_string() }))
}

fn cmd_equiv(a: &str, b: &str) -> Result<Value> {
    let pa = load_polytope(a)?;
    let pb = load_polytope(b)?;
    let w = unimodular_equivalent(&pa, &pb)?;
    let mut payload =
        json!({ "verdict": if w.equivalent { "equivalent" } else { "inequivalent" } });
    if let Some(map) = &w.map {
        payload["map"] = map_value(map);
    }
    if let Some(reason) = &w.reason {
        payload["reason"] = json!(reason);
    }
    Ok(payload)
}

fn cmd_identify(input: &str) -> Result<Value> {
    let p = load_polytope(input)?;
    let sc = is_small_cross(&p)?;
    if sc.equivalent {
        let map = sc.map.as_ref().expect("accepting witness carries its map");
        return Ok(json!({
            "family": "smallcross",
            "n": p.dim(),
            "k": Value::Null,
            "map": map_value(map),
        }));
    }
    match identify_dk(&p) {
        Ok(id) => Ok(json!({ "family": "Dk", "n": p.dim(), "k": id.k, "map": map_value(&id.map) })),
        Err(Error::NotInFamily(_)) => Ok(json!({ "family": "none" })),
        Err(e) => Err(e),
    }
}

fn cmd_roots(input: &str, target: Option<f64>, tol: f64) -> Result<Value> {
    let p = load_polytope(input)?;
    let l = ehrhart(&p)?;
    let check = root_real_parts(&l, target.unwrap_or(0.0), tol)?;
    let mut payload = json!({ "degree": l.degree(), "real_parts": check.real_parts });
    if let Some(target) = target {
        payload["target"] = json!(target);
        payload["tol"] = json!(tol);
        payload["all_match"] = json!(check.all_match);
    }
    Ok(payload)
}

// ---------------------------------------------------------------------------
// verification suites

/// One named pass/fail line of a verification suite.
pub struct Check {
    pub name: String,
    pub pass: bool,
    pub detail: String,
}

fn check(name: impl Into<String>, pass: bool, detail: impl Into<String>) -> Check {
    Check { name: name.into(), pass, detail: detail.into() }
}

/// The named verification suites, in replay order for `all`.
pub const SUITE_NAMES: [&str; 12] = [
    "cactus-counts",
    "cactus-counts-extended",
    "hstar-families",
    "preq",
    "factorization",
    "tk-dk",
    "identify",
    "cactus-bridge",
    "bott",
    "betti",
    "roots",
    "slicing",
];

/// Runs one named verification suite (or `all`) and returns its check lines.
pub fn verify_suite(name: &str) -> Result<Vec<Check>> {
    match name {
        "cactus-counts" => suite_cactus_counts(),
        "cactus-counts-extended" => suite_cactus_counts_extended(),
        "hstar-families" => suite_hstar_families(),
        "preq" => suite_preq(),
        "factorization" => suite_factorization(),
        "tk-dk" => suite_tk_dk(),
        "identify" => suite_identify(),
        "cactus-bridge" => suite_cactus_bridge(),
        "bott" => suite_bott(),
        "betti" => suite_betti(),
        "roots" => suite_roots(),
        "slicing" => suite_slicing(),
        "all" => {
            let mut checks = Vec::new();
            for suite in SUITE_NAMES {
                checks.extend(verify_suite(suite)?);
            }
            Ok(checks)
        }
        _ => Err(Error::InvalidParam(format!(
            "verify: unknown suite {name:?}; known suites: {}, all",
            SUITE_NAMES.join(", ")
        ))),
    }
}

fn choose(n: usize, k: usize) -> Int {
    if k > n {
        return Int::from(0);
    }
    let mut c = Int::from(1);
    for i in 0..k.min(n - k) {
        c = c * int((n - i) as i64) / int((i + 1) as i64);
    }
    c
}

/// Valid D-family parameters in dimension n: 0 <= k < n with k = n (mod 2).
fn dk_params(n: usize) -> Vec<i64> {
    ((n as i64 % 2)..n as i64).step_by(2).collect()
}

fn witness_detail(w: &EquivalenceWitness) -> String {
    match (&w.map, &w.reason) {
        (Some(_), _) => "witness map verified on vertex sets".into(),
        (None, Some(reason)) => format!("no witness: {reason}"),
        (None, None) => "no witness".into(),
    }
}

fn fmt_row(xs: &[Int]) -> String {
    let strs: Vec<String> = xs.iter().map(|x| x.to_string()).collect();
    format!("({})", strs.join(", "))
}

fn suite_cactus_counts() -> Result<Vec<Check>> {
    const EXPECTED: [usize; 10] = [1, 2, 5, 13, 37, 111, 345, 1105, 3624, 12099];
    let mut checks = Vec::new();
    for (i, want) in EXPECTED.iter().enumerate() {
        let n = i + 1;
        let got = enumerate_cacti(n).len();
        checks.push(check(
            format!("enumerate rooted 3-cacti, n = {n}"),
            got == *want,
            format!("{got} classes (expected {want})"),
        ));
    }
    let table = count_cacti_table(10);
    let agree = (1..=10).all(|n| table[n] == int(EXPECTED[n - 1] as i64));
    checks.push(check(
        "counting recurrence agrees with enumeration, n <= 10",
        agree,
        fmt_row(&table[1..]),
    ));
    Ok(checks)
}

fn suite_cactus_counts_extended() -> Result<Vec<Check>> {
    const EXPECTED: [(usize, i64); 5] =
        [(11, 41000), (12, 140647), (13, 487440), (14, 1704115), (15, 6002600)];
    let table = count_cacti_table(15);
    Ok(EXPECTED
        .iter()
        .map(|&(n, want)| {
            check(
                format!("count-only recurrence, n = {n}"),
                table[n] == int(want),
                format!("{} (expected {want})", table[n]),
            )
        })
        .collect())
}

fn suite_hstar_families() -> Result<Vec<Check>> {
    let mut checks = Vec::new();
    for n in 1..=7 {
        let got = ehrhart(&cross_polytope(n)?)?.hstar().coeffs().to_vec();
        let want: Vec<Int> = (0..=n).map(|j| choose(n, j)).collect();
        checks.push(check(
            format!("h*(cross_{n}) is the binomial row"),
            got == want,
            fmt_row(&got),
        ));
        let got = ehrhart(&small_cross_polytope(n)?)?.hstar().coeffs().to_vec();
        let mut want: Vec<Int> = (0..n).map(|j| choose(n - 1, j)).collect();
        want.push(Int::from(0));
        checks.push(check(
            format!("h*(smallcross_{n}) is the n-1 binomial row, then 0"),
            got == want,
            fmt_row(&got),
        ));
    }
    Ok(checks)
}

fn suite_preq() -> Result<Vec<Check>> {
    let mut checks = Vec::new();
    for n in 1..=6 {
        let d = prequantize_polytope(&cube(n, -1, 1)?)?.diagram;
        let w = unimodular_equivalent(&d, &cross_polytope(n)?)?;
        checks.push(check(
            format!("preq([-1,1]^{n}) is cross_{n}"),
            w.equivalent && w.map.is_some(),
            witness_detail(&w),
        ));
        let d = prequantize_polytope(&cube(n, 0, 1)?)?.diagram;
        let w = unimodular_equivalent(&d, &small_cross_polytope(n)?)?;
        checks.push(check(
            format!("preq([0,1]^{n}) is smallcross_{n}"),
            w.equivalent && w.map.is_some(),
            witness_detail(&w),
        ));
    }
    Ok(checks)
}

fn suite_factorization() -> Result<Vec<Check>> {
    let mut checks = Vec::new();
    for n in 1..=6 {
        let hx = ehrhart(&cross_polytope(n)?)?;
        let hs = ehrhart(&small_cross_polytope(n)?)?;
        checks.push(check(
            format!("h*(cross_{n}) = (1+z) h*(smallcross_{n})"),
            series_product_check(hx.hstar(), hs.hstar(), 2, 1),
            format!("{} vs (1+z) {}", fmt_row(hx.hstar().coeffs()), fmt_row(hs.hstar().coeffs())),
        ));
    }
    for n in 2..=6 {
        for k in dk_params(n) {
            let ht = ehrhart(&family_tk(n, k)?)?;
            let hd = ehrhart(&family_dk(n, k)?)?;
            checks.push(check(
                format!("h*(T_{k}) = (1+z) h*(D_{k}) in dim {n}"),
                series_product_check(ht.hstar(), hd.hstar(), 2, 1),
                format!("{} vs (1+z) {}", fmt_row(ht.hstar().coeffs()), fmt_row(hd.hstar().coeffs())),
            ));
        }
    }
    Ok(checks)
}

fn suite_tk_dk() -> Result<Vec<Check>> {
    let mut checks = Vec::new();
    for n in 2..=6usize {
        for k in 0..n as i64 {
            let got = ehrhart(&family_tk(n, k)?)?.hstar().coeffs().to_vec();
            let mut want = vec![Int::from(1)];
            want.extend(std::iter::repeat(int(2)).take(n - 1));
            want.push(Int::from(1));
            checks.push(check(
                format!("h*(T_{k}) = (1, 2, ..., 2, 1) in dim {n}"),
                got == want,
                fmt_row(&got),
            ));
        }
        for k in dk_params(n) {
            let got = ehrhart(&family_dk(n, k)?)?.hstar().coeffs().to_vec();
            let mut want = vec![Int::from(1); n];
            want.push(Int::from(0));
            checks.push(check(
                format!("h*(D_{k}) = (1, 1, ..., 1, 0) in dim {n}"),
                got == want,
                fmt_row(&got),
            ));
        }
        let ts: Vec<Polytope> =
            (0..n as i64).map(|k| family_tk(n, k)).collect::<Result<_>>()?;
        for i in 0..ts.len() {
            for j in i + 1..ts.len() {
                let w = unimodular_equivalent(&ts[i], &ts[j])?;
                checks.push(check(
                    format!("T_{i} and T_{j} inequivalent in dim {n}"),
                    !w.equivalent,
                    witness_detail(&w),
                ));
            }
        }
        let ds: Vec<(i64, Polytope)> = dk_params(n)
            .into_iter()
            .map(|k| family_dk(n, k).map(|p| (k, p)))
            .collect::<Result<_>>()?;
        for i in 0..ds.len() {
            for j in i + 1..ds.len() {
                let w = unimodular_equivalent(&ds[i].1, &ds[j].1)?;
                checks.push(check(
                    format!("D_{} and D_{} inequivalent in dim {n}", ds[i].0, ds[j].0),
                    !w.equivalent,
                    witness_detail(&w),
                ));
            }
        }
    }
    Ok(checks)
}

fn suite_identify() -> Result<Vec<Check>> {
    let mut checks = Vec::new();
    for n in 2..=6usize {
        for k in dk_params(n) {
            let d = family_dk(n, k)?;
            let mut failure = None;
            for seed in 0..100u64 {
                let map = seeded_unimodular_map(n, (n as u64) << 32 | (k as u64) << 16 | seed);
                let image = d.apply(&map)?;
                match identify_dk(&image) {
                    Ok(id) if id.k == k => {}
                    Ok(id) => {
                        failure = Some(format!("seed {seed}: recovered k = {}", id.k));
                        break;
                    }
                    Err(e) => {
                        failure = Some(format!("seed {seed}: {e}"));
                        break;
                    }
                }
            }
            checks.push(check(
                format!("identify_dk recovers k = {k} on 100 images, dim {n}"),
                failure.is_none(),
                failure.unwrap_or_else(|| "100/100 recovered with verified maps".into()),
            ));
        }
    }
    for n in 1..=5usize {
        let s = small_cross_polytope(n)?;
        let mut failure = None;
        for seed in 0..100u64 {
            let map = seeded_unimodular_map(n, 0xACCE97 << 16 | (n as u64) << 8 | seed);
            let image = s.apply(&map)?;
            let w = is_small_cross(&image)?;
            if !w.equivalent {
                failure = Some(format!("seed {seed} rejected: {}", witness_detail(&w)));
                break;
            }
        }
        checks.push(check(
            format!("is_small_cross accepts 100 images of smallcross_{n}"),
            failure.is_none(),
            failure.unwrap_or_else(|| "100/100 accepted with witness maps".into()),
        ));
        let w = is_small_cross(&cross_polytope(n)?)?;
        checks.push(check(
            format!("is_small_cross rejects cross_{n}"),
            !w.equivalent,
            witness_detail(&w),
        ));
        let mut accepted = Vec::new();
        let cacti = enumerate_cacti(n);
        for (i, c) in cacti.iter().enumerate() {
            if is_small_cross(&realize(c)?)?.equivalent {
                accepted.push(i);
            }
        }
        checks.push(check(
            format!("is_small_cross rejects all {} realized cacti, n = {n}", cacti.len()),
            accepted.is_empty(),
            if accepted.is_empty() {
                "all rejected".into()
            } else {
                format!("accepted cacti at indices {accepted:?}")
            },
        ));
    }
    Ok(checks)
}

fn suite_cactus_bridge() -> Result<Vec<Check>> {
    let mut checks = Vec::new();
    for n in 1..=4usize {
        let cacti = enumerate_cacti(n);
        let realized: Vec<Polytope> = cacti.iter().map(realize).collect::<Result<_>>()?;
        let codes: Vec<Vec<Vec<Int>>> =
            realized.iter().map(canonical_form).collect::<Result<_>>()?;
        let mut pairs = 0;
        let mut disagreement = None;
        for i in 0..realized.len() {
            for j in i..realized.len() {
                pairs += 1;
                let verdict = unimodular_equivalent(&realized[i], &realized[j])?.equivalent;
                let by_code = codes[i] == codes[j];
                if verdict != by_code || verdict != (i == j) {
                    disagreement.get_or_insert(format!(
                        "pair ({i}, {j}): search {verdict}, codes {by_code}"
                    ));
                }
            }
        }
        checks.push(check(
            format!("search = canonical code on {pairs} realized pairs, n = {n}"),
            disagreement.is_none(),
            disagreement.unwrap_or_else(|| format!("zero disagreements over {pairs} pairs")),
        ));
    }
    Ok(checks)
}

/// The five monotone twist matrices in dimension 3, as lower-triangular
/// rows.
pub fn bott_examples() -> Result<Vec<BottMatrix>> {
    let rows: [&[&[i64]]; 5] = [
        &[&[-1, 0, 0], &[0, -1, 0], &[0, 0, -1]],
        &[&[-1, 0, 0], &[0, -1, 0], &[0, 1, -1]],
        &[&[-1, 0, 0], &[0, -1, 0], &[1, -1, -1]],
        &[&[-1, 0, 0], &[0, -1, 0], &[1, 1, -1]],
        &[&[-1, 0, 0], &[1, -1, 0], &[0, 1, -1]],
    ];
    rows.iter().map(|r| BottMatrix::from_i64(r)).collect()
}

fn suite_bott() -> Result<Vec<Check>> {
    let mats = bott_examples()?;
    let mut checks = Vec::new();
    for (i, m) in mats.iter().enumerate() {
        checks.push(check(
            format!("twist matrix {} is monotone", i + 1),
            m.is_monotone(),
            "column conditions hold",
        ));
    }
    let diagrams: Vec<Polytope> = mats.iter().map(|m| m.diagram()).collect::<Result<_>>()?;
    for i in 0..diagrams.len() {
        for j in i + 1..diagrams.len() {
            let w = unimodular_equivalent(&diagrams[i], &diagrams[j])?;
            checks.push(check(
                format!("diagrams {} and {} inequivalent", i + 1, j + 1),
                !w.equivalent,
                witness_detail(&w),
            ));
        }
    }
    let cross3 = cross_polytope(3)?;
    for (i, d) in diagrams.iter().enumerate() {
        let same = ehrhart(d)?.hstar() == ehrhart(&cross3)?.hstar();
        checks.push(check(
            format!("diagram {} is Ehrhart-equivalent to cross_3", i + 1),
            same,
            fmt_row(ehrhart(d)?.hstar().coeffs()),
        ));
    }
    let mut bott_codes: Vec<Vec<Vec<Int>>> =
        diagrams.iter().map(canonical_form).collect::<Result<_>>()?;
    let mut cactus_codes: Vec<Vec<Vec<Int>>> = enumerate_cacti(3)
        .iter()
        .map(|c| realize(c).and_then(|p| canonical_form(&p)))
        .collect::<Result<_>>()?;
    bott_codes.sort();
    cactus_codes.sort();
    checks.push(check(
        "the five diagrams match the five realized cacti as a set",
        bott_codes == cactus_codes,
        format!("{} distinct canonical forms", bott_codes.len()),
    ));
    Ok(checks)
}

fn suite_betti() -> Result<Vec<Check>> {
    let mut checks = Vec::new();
    // The cb tables are pure arithmetic on h*; the h* rows themselves are
    // pinned to counted values by the hstar-families and tk-dk suites, so
    // closed forms are used here.
    for n in 1..=7usize {
        let h = HStar::new(n, (0..=n).map(|j| choose(n, j)).collect())?;
        let betti = contact_betti(&h);
        let mut want = Vec::with_capacity(n + 1);
        let mut acc = Int::from(0);
        for j in 0..=n {
            acc += choose(n, j);
            want.push(acc.clone());
        }
        let pass = betti.values() == want.as_slice() && *betti.tail() == int(1i64 << n);
        checks.push(check(
            format!("cb table of cross_{n}: 1, 1+n, ..., 2^{n}"),
            pass,
            fmt_row(betti.values()),
        ));

        let mut coeffs: Vec<Int> = (0..n).map(|j| choose(n - 1, j)).collect();
        coeffs.push(Int::from(0));
        let h = HStar::new(n, coeffs)?;
        let betti = contact_betti(&h);
        let mut want = vec![Int::from(0)];
        let mut acc = Int::from(0);
        for j in 0..n {
            acc += choose(n - 1, j);
            want.push(acc.clone());
        }
        let pass =
            betti.values() == want.as_slice() && *betti.tail() == int(1i64 << (n - 1));
        checks.push(check(
            format!("cb table of smallcross_{n}: 0, 1, n, ..., 2^{}", n - 1),
            pass,
            fmt_row(betti.values()),
        ));

        if n >= 2 {
            let mut coeffs = vec![Int::from(1); n];
            coeffs.push(Int::from(0));
            let h = HStar::new(n, coeffs)?;
            let betti = contact_betti(&h);
            let want: Vec<Int> = (0..=n).map(|j| int(j as i64)).collect();
            let pass = betti.values() == want.as_slice() && *betti.tail() == int(n as i64);
            checks.push(check(
                format!("cb table of the D family in dim {n}: 0, 1, ..., {n}"),
                pass,
                fmt_row(betti.values()),
            ));
        }
    }
    for n in 1..=6usize {
        let hd = ehrhart(&cross_polytope(n)?)?;
        let hs = ehrhart(&small_cross_polytope(n)?)?;
        let quotient_betti = contact_betti(hs.hstar());
        let agree =
            (0..=n).all(|i| betti_from_quotient(hd.hstar(), 2, i as u32) == *quotient_betti.cb(i));
        checks.push(check(
            format!("betti_from_quotient(cross_{n}, r=2) matches smallcross_{n}"),
            agree,
            fmt_row(quotient_betti.values()),
        ));
    }
    for n in 2..=6usize {
        for k in dk_params(n) {
            let ht = ehrhart(&family_tk(n, k)?)?;
            let hd = ehrhart(&family_dk(n, k)?)?;
            let quotient_betti = contact_betti(hd.hstar());
            let agree = (0..=n)
                .all(|i| betti_from_quotient(ht.hstar(), 2, i as u32) == *quotient_betti.cb(i));
            checks.push(check(
                format!("betti_from_quotient(T_{k}, r=2) matches D_{k} in dim {n}"),
                agree,
                fmt_row(quotient_betti.values()),
            ));
        }
    }
    Ok(checks)
}

fn suite_roots() -> Result<Vec<Check>> {
    let mut checks = Vec::new();
    for n in 1..=10usize {
        let (ls, lx) = if n <= 7 {
            (ehrhart(&small_cross_polytope(n)?)?, ehrhart(&cross_polytope(n)?)?)
        } else {
            // Counted through n = 7 above; the closed-form rows extend the
            // same polynomials to the larger degrees.
            let mut coeffs: Vec<Int> = (0..n).map(|j| choose(n - 1, j)).collect();
            coeffs.push(Int::from(0));
            let ls = EhrhartPolynomial::from_hstar(HStar::new(n, coeffs)?);
            let lx = EhrhartPolynomial::from_hstar(HStar::new(
                n,
                (0..=n).map(|j| choose(n, j)).collect(),
            )?);
            (ls, lx)
        };
        let rs = root_real_parts(&ls, -1.0, 1e-9)?;
        checks.push(check(
            format!("roots of L_smallcross_{n} lie on Re = -1"),
            rs.all_match,
            format!("real parts {:?}", rs.real_parts),
        ));
        let rx = root_real_parts(&lx, -0.5, 1e-9)?;
        checks.push(check(
            format!("roots of L_cross_{n} lie on Re = -1/2"),
            rx.all_match,
            format!("real parts {:?}", rx.real_parts),
        ));
    }
    Ok(checks)
}

/// Every built-in construction in ambient dimension <= 4, labeled.
fn builtin_roster() -> Result<Vec<(String, Polytope)>> {
    let mut roster = Vec::new();
    for n in 1..=4usize {
        roster.push((format!("cube [0,1]^{n}"), cube(n, 0, 1)?));
        roster.push((format!("cube [-1,1]^{n}"), cube(n, -1, 1)?));
        roster.push((format!("cross_{n}"), cross_polytope(n)?));
        roster.push((format!("smallcross_{n}"), small_cross_polytope(n)?));
    }
    for n in 2..=4usize {
        for k in 0..n as i64 {
            roster.push((format!("P_{k} dim {n}"), family_pk(n, k)?));
            roster.push((format!("T_{k} dim {n}"), family_tk(n, k)?));
        }
        for k in dk_params(n) {
            roster.push((format!("D_{k} dim {n}"), family_dk(n, k)?));
        }
    }
    for (i, m) in bott_examples()?.iter().enumerate() {
        roster.push((format!("bott diagram {}", i + 1), m.diagram()?));
    }
    for n in 1..=4usize {
        for (i, c) in enumerate_cacti(n).iter().enumerate() {
            roster.push((format!("realized cactus {}/{} size {n}", i + 1, enumerate_cacti(n).len()), realize(c)?));
        }
    }
    Ok(roster)
}

fn suite_slicing() -> Result<Vec<Check>> {
    let mut checks = Vec::new();
    let roster = builtin_roster()?;
    for (name, p) in &roster {
        let mut mismatch = None;
        for t in 1..=3i64 {
            let fast = count_points(p, &int(t))?;
            let slow = count_points_naive(p, &int(t))?;
            if fast != slow {
                mismatch = Some(format!("t = {t}: slicing {fast}, naive {slow}"));
                break;
            }
        }
        checks.push(check(
            format!("slicing = naive counter on {name}, t <= 3"),
            mismatch.is_none(),
            mismatch.unwrap_or_else(|| "counts agree".into()),
        ));
    }
    let mut failed = None;
    for (name, p) in &roster {
        // ehrhart() recounts at t = n+1, n+2 and panics on mismatch, so
        // completing is the self-check.
        if let Err(e) = ehrhart(p) {
            failed = Some(format!("{name}: {e}"));
            break;
        }
    }
    checks.push(check(
        format!("interpolation self-check at t = n+1, n+2 on all {} built-ins", roster.len()),
        failed.is_none(),
        failed.unwrap_or_else(|| "every polynomial re-predicts the counted values".into()),
    ));
    Ok(checks)
}
