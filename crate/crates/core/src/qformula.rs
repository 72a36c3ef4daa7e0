//! Recursive Q-curvature formulas
//! `Q_{2N} = sum c_{(J,a)} P_{2J}(Q_{2a}) + c_w w_{2N}`, derived from the
//! multiplicities, with LaTeX / plain / JSON emitters and a reader for the
//! displayed form.

use std::cmp::Reverse;
use std::collections::HashMap;
use std::fmt;
use std::str::FromStr;

use num_traits::{One, Signed, Zero};
use serde::{Deserialize, Serialize};

use crate::combinatorics::{compositions, m1, Composition};
use crate::error::{AlgebraError, Result};
use crate::free_algebra::sub_latex;
use crate::multipoly::{Alphabet, MultiPoly};
use crate::ring::CoeffRing;
use crate::scalar::{
    factorial, factorial_q, int, latex_scalar, parse_scalar, pow, ratio, sign, Scalar,
};
use crate::series::TruncSeries;
use crate::sphere::{q_sphere, word_eigenvalue, SphereContext};

/// `coeff * P_{2J}(Q_{2a})`; an empty `J` means plain `Q_{2a}`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct QTerm {
    pub operator: Composition,
    pub a: usize,
    pub coeff: Scalar,
}

impl QTerm {
    /// Display order: fewer operator factors first, then smaller absolute
    /// coefficient, then higher `a`, then the operator word.
    fn sort_key(&self) -> (usize, Scalar, Reverse<usize>, Vec<usize>) {
        (
            self.operator.len(),
            self.coeff.abs(),
            Reverse(self.a),
            self.operator.parts().to_vec(),
        )
    }
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct QFormula {
    pub order: usize,
    pub terms: Vec<QTerm>,
    pub w_coeff: Scalar,
}

/// Splits a composition `C = (J, a)` into its last part and the rest.
fn split_last(c: &Composition) -> (Composition, usize) {
    let (init, last) = c.parts().split_at(c.len() - 1);
    (
        Composition::new(init.to_vec()).expect("positive parts"),
        last[0],
    )
}

impl QFormula {
    fn normalize(mut self) -> Self {
        self.terms.retain(|t| !t.coeff.is_zero());
        self.terms.sort_by_cached_key(QTerm::sort_key);
        self
    }

    pub fn coeff_of(&self, operator: &[usize], a: usize) -> Scalar {
        self.terms
            .iter()
            .find(|t| t.operator.parts() == operator && t.a == a)
            .map(|t| t.coeff.clone())
            .unwrap_or_else(Scalar::zero)
    }

    pub fn to_latex(&self) -> String {
        self.render(true)
    }

    pub fn to_plain(&self) -> String {
        self.render(false)
    }

    fn render(&self, latex: bool) -> String {
        let mut out = format!("{} = ", sub_latex("Q", 2 * self.order));
        let mut first = true;
        let mut push = |negative: bool, body: String, out: &mut String| {
            match (first, negative) {
                (true, true) => out.push('-'),
                (true, false) => {}
                (false, true) => out.push_str(" - "),
                (false, false) => out.push_str(" + "),
            }
            out.push_str(&body);
            first = false;
        };
        for t in &self.terms {
            let abs = t.coeff.abs();
            let op = operator_latex(&t.operator);
            let body = format!("{op}({})", sub_latex("Q", 2 * t.a));
            let coeff = match (abs.is_one(), latex) {
                (true, _) => String::new(),
                (false, true) => format!("{} ", latex_scalar(&abs)),
                (false, false) => format!("{abs} "),
            };
            push(t.coeff.is_negative(), format!("{coeff}{body}"), &mut out);
        }
        let w = sub_latex("w", 2 * self.order);
        let wbody = if latex {
            format!("{} {w}", w_factor_latex(self.order))
        } else {
            format!("{} {w}", self.w_coeff.abs())
        };
        push(self.w_coeff.is_negative(), wbody, &mut out);
        out
    }

    pub fn to_json(&self) -> String {
        serde_json::to_string_pretty(&QFormulaJson::from(self)).expect("serializable")
    }

    pub fn from_json(s: &str) -> Result<Self> {
        let j: QFormulaJson =
            serde_json::from_str(s).map_err(|e| AlgebraError::Parse(e.to_string()))?;
        j.try_into()
    }

    /// Reads the displayed form, e.g.
    /// `Q_6 = -2P_2(Q_4) + 2 P_4(Q_2) - 3 P_2^2(Q_2) - 2^6 3! 2! w_6`.
    pub fn parse_display(s: &str) -> Result<Self> {
        parse_display(s)
    }

    /// Evaluates with commuting images for each `P_{2J}(Q_{2a})` and for
    /// `w_{2N}`.
    pub fn evaluate<R: CoeffRing>(
        &self,
        image: impl Fn(&Composition, usize) -> Result<R>,
        w: &R,
    ) -> Result<R> {
        let mut acc = w.scale(&self.w_coeff);
        for t in &self.terms {
            acc = acc.add_ref(&image(&t.operator, t.a)?.scale(&t.coeff));
        }
        Ok(acc)
    }
}

fn operator_latex(op: &Composition) -> String {
    let mut out = String::new();
    let mut runs: Vec<(usize, usize)> = Vec::new();
    for &k in op.parts() {
        match runs.last_mut() {
            Some((last, p)) if *last == k => *p += 1,
            _ => runs.push((k, 1)),
        }
    }
    for (k, p) in runs {
        out.push_str(&sub_latex("P", 2 * k));
        if p > 1 {
            out.push_str(&format!("^{p}"));
        }
    }
    out
}

/// `2^{2N} N! (N-1)!` written the way the recursion is usually displayed:
/// `4` for `N = 1`, unit factorials omitted.
fn w_factor_latex(n: usize) -> String {
    if n == 1 {
        return "4".into();
    }
    let e = 2 * n;
    let mut s = if e < 10 {
        format!("2^{e}")
    } else {
        format!("2^{{{e}}}")
    };
    s.push_str(&format!(" {n}!"));
    if n - 1 > 1 {
        s.push_str(&format!(" {}!", n - 1));
    }
    s
}

impl fmt::Display for QFormula {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(&self.to_plain())
    }
}

#[derive(Serialize, Deserialize)]
struct QTermJson {
    operator: Vec<usize>,
    a: usize,
    coeff: String,
}

#[derive(Serialize, Deserialize)]
struct QFormulaJson {
    order: usize,
    terms: Vec<QTermJson>,
    w_coeff: String,
}

impl From<&QFormula> for QFormulaJson {
    fn from(f: &QFormula) -> Self {
        QFormulaJson {
            order: f.order,
            terms: f
                .terms
                .iter()
                .map(|t| QTermJson {
                    operator: t.operator.parts().to_vec(),
                    a: t.a,
                    coeff: t.coeff.to_string(),
                })
                .collect(),
            w_coeff: f.w_coeff.to_string(),
        }
    }
}

impl TryFrom<QFormulaJson> for QFormula {
    type Error = AlgebraError;
    fn try_from(j: QFormulaJson) -> Result<Self> {
        let terms = j
            .terms
            .into_iter()
            .map(|t| {
                Ok(QTerm {
                    operator: Composition::new(t.operator)?,
                    a: t.a,
                    coeff: parse_scalar(&t.coeff)?,
                })
            })
            .collect::<Result<Vec<_>>>()?;
        Ok(QFormula {
            order: j.order,
            terms,
            w_coeff: parse_scalar(&j.w_coeff)?,
        }
        .normalize())
    }
}

/// Output format for [`emit`].
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Format {
    Latex,
    Json,
    Plain,
}

impl FromStr for Format {
    type Err = AlgebraError;
    fn from_str(s: &str) -> Result<Self> {
        match s {
            "latex" => Ok(Format::Latex),
            "json" => Ok(Format::Json),
            "plain" => Ok(Format::Plain),
            other => Err(AlgebraError::Parse(format!(
                "unknown format `{other}` (expected latex, json or plain)"
            ))),
        }
    }
}

pub fn emit(f: &QFormula, format: Format) -> String {
    match format {
        Format::Latex => f.to_latex(),
        Format::Json => f.to_json(),
        Format::Plain => f.to_plain(),
    }
}

/// Solves `sum_{a+|J|=N} m_{(J,a)} (-1)^a P_{2J}(Q_{2a}) = 2^{2N} N!(N-1)! w_{2N}`
/// for `Q_{2N}`, whose own coefficient on the left is `(-1)^N`.
pub fn derive_q_formula(n: usize) -> Result<QFormula> {
    if n == 0 {
        return Err(AlgebraError::Precondition("need N >= 1".into()));
    }
    let flip = -sign(n as i64);
    let mut terms = Vec::new();
    for c in compositions(n) {
        if c.len() == 1 {
            continue;
        }
        let (operator, a) = split_last(&c);
        let coeff = &flip * m1(&c)? * sign(a as i64);
        terms.push(QTerm { operator, a, coeff });
    }
    let w_coeff =
        sign(n as i64) * pow(&int(4), n as u32) * factorial_q(n as u64) * factorial_q(n as u64 - 1);
    Ok(QFormula {
        order: n,
        terms,
        w_coeff,
    }
    .normalize())
}

/// Identifier for `P_{2J}(Q_{2a})`: `Q4`, `P2Q4`, `P2P4Q2`.
pub fn applied_symbol(operator: &Composition, a: usize) -> String {
    let mut s: String = operator
        .parts()
        .iter()
        .map(|k| format!("P{}", 2 * k))
        .collect();
    s.push_str(&format!("Q{}", 2 * a));
    s
}

/// Alphabet of all `P_{2J}(Q_{2a})` with `a + |J| <= nmax`, followed by `extra`.
pub fn q_alphabet(nmax: usize, extra: &[String]) -> Alphabet {
    let mut names = Vec::new();
    for n in 1..=nmax {
        for c in compositions(n) {
            let (op, a) = split_last(&c);
            names.push(applied_symbol(&op, a));
        }
    }
    names.extend(extra.iter().cloned());
    Alphabet::new(&names)
}

/// `Lambda_{2M} = sum_{a+|J|=M} m_{(J,a)} (-1)^a P_{2J}(Q_{2a})` over the
/// symbols of [`q_alphabet`].
pub fn lambda_polynomial(alpha: &Alphabet, m: usize) -> Result<MultiPoly> {
    let mut out = MultiPoly::zero(alpha);
    for c in compositions(m) {
        let (op, a) = split_last(&c);
        let sym = MultiPoly::var(alpha, &applied_symbol(&op, a))?;
        out = out.checked_add(&sym.scale(&(m1(&c)? * sign(a as i64))))?;
    }
    Ok(out)
}

/// Substitutes sphere values: `Q_{2a}` from the product formula, `P_{2J}` by
/// its eigenvalue on constants and `w_{2N}` from the square root of the
/// volume series.
pub fn evaluate_q_formula_on_sphere(f: &QFormula, ctx: &SphereContext) -> Result<Scalar> {
    if !ctx.admits_order(f.order) {
        return Err(AlgebraError::Precondition(format!(
            "even dimension {} admits only 2N <= n, got N = {}",
            ctx.dim(),
            f.order
        )));
    }
    let w = crate::sphere::v_sphere(ctx, f.order).sqrt()?;
    f.evaluate(
        |op, a| Ok(word_eigenvalue(ctx, op) * q_sphere(ctx, a)),
        w.coeff(f.order),
    )
}

/// Paneitz check: `Q_4` from the recursion against `n/2 J^2 - 2|P|^2 - Delta J`.
#[derive(Clone, Debug)]
pub struct PaneitzCheck {
    pub derived: MultiPoly,
    pub expected: MultiPoly,
}

impl PaneitzCheck {
    pub fn passed(&self) -> bool {
        self.derived == self.expected
    }
}

/// Symbols `n` (dimension), `J`, `S = |P|^2`, `A = Delta J`.
pub fn paneitz_alphabet() -> Alphabet {
    Alphabet::new(&["n", "J", "S", "A"])
}

/// Evaluates the `N = 2` recursion in the scalar ring `Q[n, J, S, A]` using
/// `P_2(J) = A - (n/2 - 1) J^2`, `v_2 = -J/2`, `v_4 = (J^2 - S)/8`.
pub fn verify_paneitz() -> Result<PaneitzCheck> {
    let alpha = paneitz_alphabet();
    let p = |s: &str| MultiPoly::parse(&alpha, s);
    let q2 = p("J")?;
    let p2_on_j = p("A + J^2 - 1/2*n*J^2")?;
    let v = TruncSeries::new(vec![p("1")?, p("-1/2*J")?, p("1/8*J^2 - 1/8*S")?])?;
    let w = v.sqrt()?;
    let f = derive_q_formula(2)?;
    let derived = f.evaluate(
        |op, a| match (op.parts(), a) {
            ([1], 1) => Ok(p2_on_j.clone()),
            ([], 1) => Ok(q2.clone()),
            _ => Err(AlgebraError::Precondition(format!(
                "unexpected term {op} on Q_{}",
                2 * a
            ))),
        },
        w.coeff(2),
    )?;
    Ok(PaneitzCheck {
        derived,
        expected: p("1/2*n*J^2 - 2*S - A")?,
    })
}

/// Substitutes rational values for some symbols of the Paneitz ring.
pub fn specialize(p: &MultiPoly, values: &[(&str, MultiPoly)]) -> Result<MultiPoly> {
    let alpha = p.alphabet().clone();
    let mut images: HashMap<String, MultiPoly> = alpha
        .names()
        .iter()
        .map(|s| (s.clone(), MultiPoly::var(&alpha, s).expect("own symbol")))
        .collect();
    for (name, v) in values {
        images.insert((*name).to_string(), v.clone());
    }
    p.substitute(&alpha, &images)
}

// --- reader for the displayed form -------------------------------------------

struct Cursor<'a> {
    s: &'a [u8],
    pos: usize,
}

impl<'a> Cursor<'a> {
    fn skip_ws(&mut self) {
        while self.pos < self.s.len() && (self.s[self.pos] as char).is_whitespace() {
            self.pos += 1;
        }
    }

    fn peek(&self) -> Option<u8> {
        self.s.get(self.pos).copied()
    }

    fn eat(&mut self, lit: &str) -> bool {
        if self.s[self.pos..].starts_with(lit.as_bytes()) {
            self.pos += lit.len();
            true
        } else {
            false
        }
    }

    fn err(&self, what: &str) -> AlgebraError {
        let rest = String::from_utf8_lossy(&self.s[self.pos..]);
        AlgebraError::Parse(format!("expected {what} at `{rest}`"))
    }

    fn number(&mut self) -> Result<u64> {
        let start = self.pos;
        while self.peek().is_some_and(|c| c.is_ascii_digit()) {
            self.pos += 1;
        }
        if start == self.pos {
            return Err(self.err("a number"));
        }
        std::str::from_utf8(&self.s[start..self.pos])
            .unwrap()
            .parse()
            .map_err(|_| self.err("a number"))
    }

    /// `7` or `{12}`.
    fn index(&mut self) -> Result<u64> {
        if self.eat("{") {
            let n = self.number()?;
            if !self.eat("}") {
                return Err(self.err("`}`"));
            }
            Ok(n)
        } else {
            // single-digit subscript/superscript in TeX style
            let c = self
                .peek()
                .filter(u8::is_ascii_digit)
                .ok_or_else(|| self.err("a digit"))?;
            self.pos += 1;
            Ok((c - b'0') as u64)
        }
    }

    /// Index after `P_`, `Q_`, `w_`; accepts multi-digit plain indices.
    fn subscript(&mut self) -> Result<u64> {
        if self.peek() == Some(b'{') {
            self.index()
        } else {
            self.number()
        }
    }

    fn even_subscript(&mut self) -> Result<usize> {
        let k = self.subscript()?;
        Self::even_half(k)
    }

    fn even_half(k: u64) -> Result<usize> {
        if k == 0 || k % 2 == 1 {
            return Err(AlgebraError::Parse(format!(
                "index {k} is not a positive even number"
            )));
        }
        Ok((k / 2) as usize)
    }
}

/// Coefficient factors: `3`, `2^8`, `2^{10}`, `4!`, `\frac{3}{2}`.
fn parse_coefficient(cur: &mut Cursor) -> Result<Option<Scalar>> {
    let mut coeff: Option<Scalar> = None;
    loop {
        cur.skip_ws();
        let factor = if cur.eat("\\frac{") {
            let num = cur.number()?;
            if !cur.eat("}{") {
                return Err(cur.err("`}{`"));
            }
            let den = cur.number()?;
            if !cur.eat("}") {
                return Err(cur.err("`}`"));
            }
            ratio(num as i64, den as i64)
        } else if cur.peek().is_some_and(|c| c.is_ascii_digit()) {
            let base = cur.number()?;
            if cur.eat("/") {
                let den = cur.number()?;
                ratio(base as i64, den as i64)
            } else if cur.eat("^") {
                let e = cur.index()?;
                pow(&int(base as i64), e as u32)
            } else if cur.eat("!") {
                Scalar::from_integer(factorial(base))
            } else {
                int(base as i64)
            }
        } else {
            return Ok(coeff);
        };
        coeff = Some(coeff.map_or(factor.clone(), |c| c * factor));
    }
}

fn parse_display(src: &str) -> Result<QFormula> {
    let mut cur = Cursor {
        s: src.trim().as_bytes(),
        pos: 0,
    };
    cur.skip_ws();
    if !cur.eat("Q_") {
        return Err(cur.err("`Q_`"));
    }
    let order = cur.even_subscript()?;
    cur.skip_ws();
    if !cur.eat("=") {
        return Err(cur.err("`=`"));
    }
    let mut terms = Vec::new();
    let mut w_coeff: Option<Scalar> = None;
    let mut first = true;
    loop {
        cur.skip_ws();
        if cur.peek().is_none() {
            break;
        }
        let negative = if cur.eat("-") {
            true
        } else if cur.eat("+") || first {
            false
        } else {
            return Err(cur.err("`+` or `-`"));
        };
        first = false;
        let mut coeff = parse_coefficient(&mut cur)?.unwrap_or_else(Scalar::one);
        if negative {
            coeff = -coeff;
        }
        cur.skip_ws();
        if cur.eat("w_") {
            let k = cur.even_subscript()?;
            if k != order {
                return Err(AlgebraError::Parse(format!(
                    "w index {} does not match order {}",
                    2 * k,
                    2 * order
                )));
            }
            if w_coeff.is_some() {
                return Err(AlgebraError::Parse("repeated w term".into()));
            }
            w_coeff = Some(coeff);
            continue;
        }
        let mut parts = Vec::new();
        loop {
            cur.skip_ws();
            if !cur.eat("P_") {
                break;
            }
            let k = cur.even_subscript()?;
            let power = if cur.eat("^") { cur.index()? } else { 1 };
            parts.extend(std::iter::repeat_n(k, power as usize));
        }
        let bare = parts.is_empty();
        if !bare && !cur.eat("(") {
            return Err(cur.err("`(`"));
        }
        if !cur.eat("Q_") {
            return Err(cur.err("`Q_`"));
        }
        let a = cur.even_subscript()?;
        if !bare && !cur.eat(")") {
            return Err(cur.err("`)`"));
        }
        terms.push(QTerm {
            operator: Composition::new(parts)?,
            a,
            coeff,
        });
    }
    let w_coeff = w_coeff.ok_or_else(|| AlgebraError::Parse("missing w term".into()))?;
    Ok(QFormula {
        order,
        terms,
        w_coeff,
    }
    .normalize())
}
