//! Verification suites. Each suite expands into independent jobs that may run
//! on the rayon pool; records come back in job order regardless of which job
//! finishes first.

use std::fmt;
use std::path::PathBuf;
use std::str::FromStr;

use num_traits::{One, Zero};
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use rayon::prelude::*;

use crate::combinatorics::{
    compositions, m1, mk, mk_is_covered, stirling1, stirling_node_sum_sides,
    stirling_pair_sum_sides, verify_m2_relation, verify_m_sum_zero, verify_palindrome,
    verify_ratio_identities,
};
use crate::error::AlgebraError;
use crate::golden;
use crate::pi::{pi_closed, pi_definition, pi_family_from_factorizations, PiPolynomial};
use crate::qformula::{
    derive_q_formula, evaluate_q_formula_on_sphere, q_alphabet, verify_paneitz, QFormula,
};
use crate::report::{CheckRecord, Status};
use crate::scalar::{factorial_q, int, ratio, Scalar};
use crate::series::{
    check_w_v_relations, displayed_lambda_examples, random_unit_series, symbolic_volume_series,
    verify_lambda_square_relations,
};
use crate::sphere::{
    constant_term_consistent, q_sphere, recursion_sides_on_sphere, verify_m1_sphere_sum,
    verify_m2_sphere_sum, verify_m3_sphere_sum, SphereContext,
};
use crate::unipoly::falling_factorial;

pub const EVEN_TRUNCATION: &str = "even-dimension truncation";

#[derive(Clone, Copy, Debug, PartialEq, Eq, PartialOrd, Ord)]
pub enum Suite {
    Combinatorics,
    Pi,
    Sphere,
    Series,
    Q,
}

impl Suite {
    pub const ALL: [Suite; 5] = [
        Suite::Combinatorics,
        Suite::Pi,
        Suite::Sphere,
        Suite::Series,
        Suite::Q,
    ];

    pub fn name(self) -> &'static str {
        match self {
            Suite::Combinatorics => "combinatorics",
            Suite::Pi => "pi",
            Suite::Sphere => "sphere",
            Suite::Series => "series",
            Suite::Q => "q",
        }
    }
}

impl fmt::Display for Suite {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.name())
    }
}

/// `all` or a single suite name.
pub fn parse_scope(s: &str) -> Result<Vec<Suite>, AlgebraError> {
    if s == "all" {
        return Ok(Suite::ALL.to_vec());
    }
    Suite::from_str(s).map(|x| vec![x])
}

impl FromStr for Suite {
    type Err = AlgebraError;
    fn from_str(s: &str) -> Result<Self, AlgebraError> {
        Suite::ALL
            .into_iter()
            .find(|x| x.name() == s)
            .ok_or_else(|| AlgebraError::Parse(format!("unknown suite `{s}`")))
    }
}

#[derive(Clone, Debug)]
pub struct VerifyConfig {
    pub nmax: usize,
    pub dims: Vec<Scalar>,
    pub golden_dir: Option<PathBuf>,
    pub seed: u64,
}

impl Default for VerifyConfig {
    fn default() -> Self {
        VerifyConfig {
            nmax: 6,
            dims: (3..=12).map(int).collect(),
            golden_dir: None,
            seed: 20_240_229,
        }
    }
}

type Job<'a> = Box<dyn Fn() -> Vec<CheckRecord> + Send + Sync + 'a>;

fn run_jobs(jobs: Vec<Job<'_>>) -> Vec<CheckRecord> {
    jobs.par_iter()
        .map(|j| j())
        .collect::<Vec<_>>()
        .into_iter()
        .flatten()
        .collect()
}

/// Runs the suites in the given order on the current rayon pool.
pub fn run(suites: &[Suite], cfg: &VerifyConfig) -> Vec<CheckRecord> {
    suites.iter().flat_map(|&s| run_suite(s, cfg)).collect()
}

pub fn run_suite(suite: Suite, cfg: &VerifyConfig) -> Vec<CheckRecord> {
    match suite {
        Suite::Combinatorics => run_jobs(combinatorics_jobs(cfg)),
        Suite::Pi => pi_records(cfg),
        Suite::Sphere => run_jobs(sphere_jobs(cfg)),
        Suite::Series => run_jobs(series_jobs(cfg)),
        Suite::Q => run_jobs(q_jobs(cfg)),
    }
}

fn rec(suite: Suite, id: &str, reference: impl Into<String>) -> CheckRecord {
    CheckRecord::new(suite.name(), id, reference)
}

/// Rational grid for the two-point Stirling sum, integers and non-integers.
pub fn stirling_grid() -> Vec<Scalar> {
    vec![
        int(-3),
        int(-1),
        ratio(-1, 2),
        int(0),
        ratio(1, 3),
        ratio(1, 2),
        int(1),
        int(2),
        ratio(5, 2),
        int(4),
    ]
}

fn combinatorics_jobs(cfg: &VerifyConfig) -> Vec<Job<'_>> {
    use Suite::Combinatorics as S;
    let nmax = cfg.nmax;
    let mut jobs: Vec<Job> = Vec::new();
    for n in 1..=nmax {
        jobs.push(Box::new(move || {
            let mut out = Vec::new();
            if n >= 2 {
                out.push(
                    rec(S, "m-sum-zero", "sum_{|I|=N} m_I = 0")
                        .param("N", n)
                        .passed_if(verify_m_sum_zero(n)),
                );
            }
            out.push(
                rec(S, "m-palindrome", "m_I = m_{reverse(I)}")
                    .param("N", n)
                    .passed_if(verify_palindrome(n)),
            );
            out.push(rec(S, "m-trivial", "m_{(N)} = 1").param("N", n).passed_if(
                m1(&crate::Composition::new(vec![n]).expect("positive")).is_ok_and(|v| v.is_one()),
            ));
            if n >= 2 {
                out.push(
                    rec(
                        S,
                        "m2-from-m1",
                        "m^(2)_{(a,J)} = ((N-a)/(N-1) - N/2) m_{(a,J)}",
                    )
                    .param("N", n)
                    .passed_if(verify_m2_relation(n)),
                );
                out.push(
                    rec(
                        S,
                        "m-ratio",
                        "m_{(j,r,K)}/m_{(r,K)} = -binom(N,j)^2 j(N-j)/((j+r)N)",
                    )
                    .param("N", n)
                    .passed_if(verify_ratio_identities(n)),
                );
                out.push(
                    rec(S, "m2-trivial", "m^(2)_{(N)} = -N/2")
                        .param("N", n)
                        .passed_if(
                            mk(&crate::Composition::new(vec![n]).expect("positive"), 2)
                                .is_ok_and(|v| v == ratio(-(n as i64), 2)),
                        ),
                );
            }
            out.push(zero_extension_record(n));
            out.push(stirling_record(n));
            if n >= 2 {
                out.push(pair_sum_record(n));
                for m in 0..n {
                    out.push(node_sum_record(n, m));
                }
            }
            out
        }));
    }
    jobs
}

/// Lists the `(I, k)` pairs with `2 <= k <= N+1` that neither multiplicity
/// formula covers; these take the value 0.
fn zero_extension_record(n: usize) -> CheckRecord {
    let mut uncovered = Vec::new();
    let mut nonzero = Vec::new();
    for k in 2..=n + 1 {
        for c in compositions(n) {
            if !mk_is_covered(&c, k) {
                match mk(&c, k) {
                    Ok(v) if v.is_zero() => uncovered.push(format!("({c},{k})")),
                    _ => nonzero.push(format!("({c},{k})")),
                }
            }
        }
    }
    rec(
        Suite::Combinatorics,
        "mk-zero-extension",
        "m^(k)_I = 0 outside the ranges of the k >= 2 formulas",
    )
    .param("N", n)
    .passed_if(nonzero.is_empty())
    .detail(format!(
        "{} uncovered pairs set to 0 (k <= N+1): {}",
        uncovered.len(),
        uncovered.join(" ")
    ))
}

fn stirling_record(n: usize) -> CheckRecord {
    let b = falling_factorial("x", n);
    let ok = (0..=n).all(|k| {
        let rec_ok = n == 0
            || k == 0
            || stirling1(n, k) == stirling1(n - 1, k - 1) - stirling1(n - 1, k) * (n - 1);
        rec_ok && b.coeff(k) == Scalar::from_integer(stirling1(n, k))
    });
    rec(
        Suite::Combinatorics,
        "stirling",
        "b_N(x) = x(x-1)...(x-N+1) = sum_k s(N,k) x^k",
    )
    .param("N", n)
    .passed_if(ok)
}

fn pair_sum_record(n: usize) -> CheckRecord {
    let grid = stirling_grid();
    let mut bad = None;
    let mut count = 0;
    'outer: for x in &grid {
        for y in &grid {
            if x == y {
                continue;
            }
            count += 1;
            match stirling_pair_sum_sides(n, x, y) {
                Ok((l, r)) if l == r => {}
                Ok((l, r)) => {
                    bad = Some(format!("x={x}, y={y}: lhs {l}, rhs {r}"));
                    break 'outer;
                }
                Err(e) => {
                    bad = Some(e.to_string());
                    break 'outer;
                }
            }
        }
    }
    rec(
        Suite::Combinatorics,
        "stirling-pair-sum",
        "sum_{a,b>=1} s(N,a+b) x^a y^b = (y b_N(x) - x b_N(y))/(x-y)",
    )
    .param("N", n)
    .param("points", count)
    .passed_if(bad.is_none())
    .detail_if(bad.is_some(), || bad.clone().unwrap_or_default())
}

fn node_sum_record(n: usize, m: usize) -> CheckRecord {
    let base = rec(
        Suite::Combinatorics,
        "stirling-node-sum",
        "sum_{a,b>=1} s(N,a+b) M^{a+b-1} = (-1)^{N-M-1} M! (N-M-1)!",
    )
    .param("N", n)
    .param("M", m);
    match stirling_node_sum_sides(n, m) {
        Ok((l, r)) if l == r => base,
        Ok((l, r)) if m == 0 => base.skipped(format!(
            "degenerate node M=0: with 0^0 = 1 the sum is {l} but the closed form is {r}; range restricted to M >= 1"
        )),
        Ok((l, r)) => base.passed_if(false).detail(format!("lhs {l}, rhs {r}")),
        Err(e) => base.failed_with(e),
    }
}

fn pi_records(cfg: &VerifyConfig) -> Vec<CheckRecord> {
    use Suite::Pi as S;
    let nmax = cfg.nmax;
    let interpolated = pi_family_from_factorizations(nmax);
    let per_order: Vec<Vec<CheckRecord>> = (1..=nmax)
        .into_par_iter()
        .map(|n| {
            let mut out = Vec::new();
            let (def, closed) = match (pi_definition(n), pi_closed(n)) {
                (Ok(d), Ok(c)) => (d, c),
                (Err(e), _) | (_, Err(e)) => {
                    out.push(
                        rec(
                            S,
                            "pi-three-way",
                            "definition = closed form = interpolation",
                        )
                        .param("N", n)
                        .failed_with(e),
                    );
                    return out;
                }
            };
            let interp = &interpolated[n - 1];
            let ok = def == closed && closed == *interp;
            out.push(
                rec(
                    S,
                    "pi-three-way",
                    "definition = closed form = interpolation",
                )
                .param("N", n)
                .passed_if(ok)
                .detail_if(!ok, || pi_difference(&def, &closed, interp)),
            );
            out.push(
                rec(S, "pi-degree", "deg_lambda pi_{2N} = N-1")
                    .param("N", n)
                    .passed_if(
                        def.degree_in_t() == Some(n - 1)
                            || (n == 1 && def.degree_in_t() == Some(0)),
                    ),
            );
            out
        })
        .collect();
    // factorization identities need the whole lower family; check against the
    // definitions
    let defs: Vec<PiPolynomial> = (1..=nmax).filter_map(|n| pi_definition(n).ok()).collect();
    let mut out: Vec<CheckRecord> = per_order.into_iter().flatten().collect();
    if defs.len() == nmax {
        let fact: Vec<Vec<CheckRecord>> = (1..=nmax)
            .into_par_iter()
            .map(|n| {
                let lower = |m: usize| defs[m - 1].clone();
                crate::pi::check_factorizations(&defs[n - 1], &lower)
                    .into_iter()
                    .map(|c| {
                        rec(S, "pi-factorization", c.statement())
                            .param("N", n)
                            .param("j", c.j)
                            .passed_if(c.passed())
                            .detail_if(!c.passed(), || c.mismatch().unwrap_or_default())
                    })
                    .collect()
            })
            .collect();
        out.extend(fact.into_iter().flatten());
    }
    out
}

fn pi_difference(def: &PiPolynomial, closed: &PiPolynomial, interp: &PiPolynomial) -> String {
    let diff = |a: &PiPolynomial, b: &PiPolynomial| {
        a.body()
            .first_difference(b.body())
            .map(|(w, x, y)| format!("word {w}: {x} vs {y}"))
    };
    diff(def, closed)
        .map(|d| format!("definition vs closed form, {d}"))
        .or_else(|| diff(closed, interp).map(|d| format!("closed form vs interpolation, {d}")))
        .unwrap_or_default()
}

fn sphere_jobs(cfg: &VerifyConfig) -> Vec<Job<'_>> {
    use Suite::Sphere as S;
    let nmax = cfg.nmax;
    let mut jobs: Vec<Job> = Vec::new();
    for n in 1..=nmax {
        jobs.push(Box::new(move || {
            let mut out = Vec::new();
            let identity =
                |id: &str, reference: &str, r: crate::Result<crate::sphere::PolyIdentity>| {
                    let base = rec(S, id, reference).param("N", n);
                    match r {
                        Ok(p) => base
                            .passed_if(p.passed())
                            .detail_if(!p.passed(), || format!("lhs {}, rhs {}", p.lhs, p.rhs)),
                        Err(e) => base.failed_with(e),
                    }
                };
            out.push(identity(
                "m1-sphere-sum",
                "sum m_I P_{2I} = N!(N-1)! P_2",
                verify_m1_sphere_sum(n),
            ));
            if n >= 2 {
                out.push(identity(
                    "m2-sphere-sum",
                    "sum m^(2)_I P_{2I} = -N!(N-1)!/2 (P_2^2 + N P_2)",
                    verify_m2_sphere_sum(n),
                ));
            }
            if n >= 3 {
                out.push(identity(
                    "m3-sphere-sum",
                    "sum m^(3)_I P_{2I} = N!(N-1)!/12 (P_2^3 + (3N-1) P_2^2 + N(3N-1)/2 P_2)",
                    verify_m3_sphere_sum(n),
                ));
            }
            out
        }));
    }
    for dim in &cfg.dims {
        for n in 1..=nmax {
            jobs.push(Box::new(move || sphere_dim_records(dim, n)));
        }
    }
    jobs
}

fn sphere_dim_records(dim: &Scalar, n: usize) -> Vec<CheckRecord> {
    use Suite::Sphere as S;
    let base = |id: &str, reference: &str| {
        rec(S, id, reference)
            .param("n", dim.to_string())
            .param("N", n)
    };
    let recursion_ref = "sum_{a+|J|=N} m_{(J,a)} (-1)^a P_{2J}(Q_{2a}) = 2^{2N} N!(N-1)! w_{2N}";
    let ctx = match SphereContext::new(dim.clone()) {
        Ok(c) => c,
        Err(e) => return vec![base("recursion-on-sphere", recursion_ref).failed_with(e)],
    };
    if !ctx.admits_order(n) {
        return vec![
            base("recursion-on-sphere", recursion_ref).skipped(EVEN_TRUNCATION),
            base(
                "q-formula-on-sphere",
                "Q_{2N} from the recursion = product formula",
            )
            .skipped(EVEN_TRUNCATION),
        ];
    }
    let mut out = Vec::new();
    out.push(match recursion_sides_on_sphere(&ctx, n) {
        Ok((l, r)) => base("recursion-on-sphere", recursion_ref)
            .passed_if(l == r)
            .detail(format!("lhs {l}, rhs {r}")),
        Err(e) => base("recursion-on-sphere", recursion_ref).failed_with(e),
    });
    let expected = q_sphere(&ctx, n);
    out.push(
        match derive_q_formula(n).and_then(|f| evaluate_q_formula_on_sphere(&f, &ctx)) {
            Ok(v) => base(
                "q-formula-on-sphere",
                "Q_{2N} from the recursion = product formula",
            )
            .passed_if(v == expected)
            .detail(format!("recursion {v}, product {expected}")),
            Err(e) => base(
                "q-formula-on-sphere",
                "Q_{2N} from the recursion = product formula",
            )
            .failed_with(e),
        },
    );
    out.push(
        base("constant-term", "P_{2N}(1) = (-1)^N (n/2 - N) Q_{2N}")
            .passed_if(constant_term_consistent(&ctx, n)),
    );
    if ctx.is_even_integer() && *dim == int(2 * n as i64) {
        let crit = factorial_q(2 * n as u64 - 1);
        out.push(
            base("critical-continuation", "Q_n = (n-1)! on the round sphere")
                .passed_if(expected == crit)
                .detail(format!("{expected}")),
        );
    }
    out
}

fn series_jobs(cfg: &VerifyConfig) -> Vec<Job<'_>> {
    use Suite::Series as S;
    let nmax = cfg.nmax;
    let seed = cfg.seed;
    let mut jobs: Vec<Job> = Vec::new();
    jobs.push(Box::new(|| match check_w_v_relations() {
        Ok(rows) => rows
            .into_iter()
            .map(|(n, derived, displayed)| {
                let ok = derived == displayed;
                rec(S, "w-v-relation", format!("c w_{} = {displayed}", 2 * n))
                    .param("N", n)
                    .passed_if(ok)
                    .detail_if(!ok, || format!("derived {derived}"))
            })
            .collect(),
        Err(e) => vec![rec(S, "w-v-relation", "w = sqrt(v)").failed_with(e)],
    }));
    jobs.push(Box::new(move || {
        let (_, v) = symbolic_volume_series(nmax);
        let ok = v.sqrt().map(|w| w.square() == v).unwrap_or(false);
        vec![rec(
            S,
            "sqrt-square-symbolic",
            "sqrt(v)^2 = v over formal v_2..v_{2T}",
        )
        .param("T", nmax)
        .passed_if(ok)]
    }));
    jobs.push(Box::new(move || {
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        let mut failures = 0;
        for i in 0..100 {
            let u = random_unit_series(&mut rng, i % 13);
            let ok = u.square().sqrt().map(|r| r == u).unwrap_or(false)
                && u.sqrt().map(|r| r.square() == u).unwrap_or(false);
            if !ok {
                failures += 1;
            }
        }
        vec![rec(
            S,
            "sqrt-square-random",
            "sqrt(u^2) = u and sqrt(u)^2 = u for random unit series",
        )
        .param("samples", 100)
        .param("seed", seed)
        .param("max_order", 12)
        .passed_if(failures == 0)
        .detail_if(failures > 0, || format!("{failures} failures"))]
    }));
    if nmax >= 2 {
        jobs.push(Box::new(move || match verify_lambda_square_relations(nmax) {
            Ok(checks) => checks
                .into_iter()
                .map(|c| {
                    rec(S, "lambda-square", "2 Lambda_{2N} + sum_j j(N-j)/N binom(N,j)^2 Lambda_{2j} Lambda_{2N-2j} = 2^{2N} N!(N-1)! v_{2N}")
                        .param("N", c.n)
                        .passed_if(c.passed())
                        .detail_if(!c.passed(), || format!("from G^2: {}; closed form: {}", c.from_square, c.closed_form))
                })
                .collect(),
            Err(e) => vec![rec(S, "lambda-square", "coefficients of G^2").failed_with(e)],
        }));
        jobs.push(Box::new(lambda_display_records));
    }
    jobs
}

/// The two written-out quadratic relations. The `N = 3` one is printed with
/// the wrong sign on its right-hand side; the corrected form is checked and
/// the printed form is reported as skipped with the refutation.
fn lambda_display_records() -> Vec<CheckRecord> {
    use Suite::Series as S;
    let examples = match displayed_lambda_examples() {
        Ok(e) => e,
        Err(e) => return vec![rec(S, "lambda-display", "written-out relations").failed_with(e)],
    };
    let mut out = Vec::new();
    for (check, rhs) in examples {
        let base = |id: &str, reference: &str| rec(S, id, reference).param("N", check.n);
        match check.n {
            2 => out.push(
                base("lambda-display", "(Q_4 + P_2(Q_2)) + Q_2^2 = 16 v_4")
                    .passed_if(check.matches()),
            ),
            3 => {
                let printed = "(Q_6 + 2P_2(Q_4) - 2P_4(Q_2) + 3P_2^2(Q_2)) + 6(Q_4 + P_2(Q_2))Q_2 = 2!3!2^5 v_6";
                let corrected = "(Q_6 + 2P_2(Q_4) - 2P_4(Q_2) + 3P_2^2(Q_2)) + 6(Q_4 + P_2(Q_2))Q_2 = -2!3!2^5 v_6";
                let flipped = check.matches_with_rhs_sign_flipped(&rhs);
                out.push(base("lambda-display-corrected", corrected).passed_if(flipped));
                let as_printed = base("lambda-display-as-printed", printed);
                out.push(if check.matches() {
                    as_printed
                } else if flipped {
                    as_printed.skipped(
                        "printed sign is inconsistent: the left side equals -(Lambda_6 + 6 Lambda_2 Lambda_4), \
                         so the right side must be -384 v_6; the corrected form is checked instead",
                    )
                } else {
                    as_printed.passed_if(false).detail(format!("displayed {} vs derived {}", check.displayed, check.derived))
                });
            }
            _ => {}
        }
    }
    out
}

fn q_jobs(cfg: &VerifyConfig) -> Vec<Job<'_>> {
    use Suite::Q as S;
    let nmax = cfg.nmax;
    let mut jobs: Vec<Job> = Vec::new();
    for n in 1..=nmax.min(golden::GOLDEN_MAX_ORDER) {
        let dir = cfg.golden_dir.clone();
        jobs.push(Box::new(move || {
            let base = rec(
                S,
                "q-golden",
                format!("derived Q_{} = reference display", 2 * n),
            )
            .param("N", n);
            vec![match golden::check(dir.as_deref(), n) {
                Ok(c) => base
                    .passed_if(c.passed())
                    .detail_if(!c.passed(), || c.mismatch().unwrap_or_default()),
                Err(e) => base.failed_with(e),
            }]
        }));
    }
    for n in 1..=nmax {
        jobs.push(Box::new(move || {
            let base = |id: &str, reference: &str| rec(S, id, reference).param("N", n);
            let f = match derive_q_formula(n) {
                Ok(f) => f,
                Err(e) => return vec![base("q-derive", "derive Q_{2N}").failed_with(e)],
            };
            let terms_ok = f.terms.len() == (1usize << (n - 1)) - 1;
            let latex_ok = QFormula::parse_display(&f.to_latex()).is_ok_and(|g| g == f);
            let json_ok = QFormula::from_json(&f.to_json()).is_ok_and(|g| g == f);
            vec![
                base("q-term-count", "Q_{2N} has 2^{N-1} - 1 operator terms").passed_if(terms_ok),
                base("q-latex-roundtrip", "parse(latex(Q_{2N})) = Q_{2N}").passed_if(latex_ok),
                base("q-json-roundtrip", "parse(json(Q_{2N})) = Q_{2N}").passed_if(json_ok),
                lambda_leading_record(n),
            ]
        }));
    }
    if nmax >= 2 {
        jobs.push(Box::new(|| {
            let base = rec(S, "paneitz", "Q_4 = n/2 J^2 - 2|P|^2 - Delta(J)");
            vec![match verify_paneitz() {
                Ok(c) => base
                    .passed_if(c.passed())
                    .detail(format!("derived {}", c.derived)),
                Err(e) => base.failed_with(e),
            }]
        }));
    }
    jobs
}

/// `Lambda_{2N}` contains `(-1)^N Q_{2N}`.
fn lambda_leading_record(n: usize) -> CheckRecord {
    let alpha = q_alphabet(n, &[]);
    let ok = crate::qformula::lambda_polynomial(&alpha, n)
        .and_then(|l| {
            Ok(l.coeff_of(&[(&format!("Q{}", 2 * n), 1)])? == crate::scalar::sign(n as i64))
        })
        .unwrap_or(false);
    rec(
        Suite::Q,
        "lambda-leading",
        "Lambda_{2N} = (-1)^N Q_{2N} + lower terms",
    )
    .param("N", n)
    .passed_if(ok)
}

/// Whether every record passed or was skipped.
pub fn all_ok(records: &[CheckRecord]) -> bool {
    records.iter().all(|r| r.status != Status::Fail)
}
