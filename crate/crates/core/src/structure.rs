//! Line-oriented structure files: a strict grammar for declaring algebraic
//! structures consumed by the command line tool.
//!
//! ```text
//! kind lca                     # lie | lca | pva | poisson-fn | va | va-module
//! gen T even free              # name, parity, ∂-kind
//! gen K even torsion
//! boson 2                      # shorthand for u1, u2 (+ K for lca/va kinds)
//! unit vac                     # va only: the unit generator
//! weight T 1                   # optional filtration weight
//! bound degree 2               # optional truncation bounds
//! [T,T] = d(T) + 2*L*T + 1/2*L^3*K      # λ-bracket entry, L is λ
//! I[a,b] = 1 + 1/2*L^2*K               # integral entry (va)
//! a*b = a                               # product entry (lie products unused)
//! module m even free                    # va-module extra generators
//! act[a,m] = L*m                        # module action entry
//! ```
//!
//! Polynomials use `+ - * ^`, rational constants `p/q`, `d(x)` for ∂x and
//! `L` for λ. Every referenced name must be declared before use.

use crate::lambda::{LPoly, Mono, SPoly, Var};
use crate::module::{DElem, DiffPolyAlg, GenKind, Generator, MElem, PdModule, VSpace};
use crate::parity::Parity;
use crate::scalar::Scalar;
use std::collections::BTreeMap;

/// The structure kinds the tool understands.
#[derive(Clone, Copy, PartialEq, Eq, Debug)]
pub enum Kind {
    Lie,
    Lca,
    Pva,
    PoissonFn,
    Va,
    VaModule,
}

impl Kind {
    pub fn parse(s: &str) -> Option<Kind> {
        match s {
            "lie" => Some(Kind::Lie),
            "lca" => Some(Kind::Lca),
            "pva" => Some(Kind::Pva),
            "poisson-fn" => Some(Kind::PoissonFn),
            "va" => Some(Kind::Va),
            "va-module" => Some(Kind::VaModule),
            _ => None,
        }
    }

    pub fn name(&self) -> &'static str {
        match self {
            Kind::Lie => "lie",
            Kind::Lca => "lca",
            Kind::Pva => "pva",
            Kind::PoissonFn => "poisson-fn",
            Kind::Va => "va",
            Kind::VaModule => "va-module",
        }
    }
}

/// A parsed structure file.
#[derive(Clone, Debug)]
pub struct StructureSpec {
    pub kind: Kind,
    pub gens: Vec<Generator>,
    pub module_gens: Vec<Generator>,
    pub unit: Option<String>,
    pub weights: BTreeMap<String, i64>,
    pub bounds: BTreeMap<String, u32>,
    /// `[g,h] = expr` entries.
    pub brackets: Vec<(String, String, Ast)>,
    /// `I[g,h] = expr` entries.
    pub integrals: Vec<(String, String, Ast)>,
    /// `g*h = expr` entries.
    pub products: Vec<(String, String, Ast)>,
    /// `act[g,m] = expr` entries.
    pub actions: Vec<(String, String, Ast)>,
}

/// Expression tree of the polynomial syntax.
#[derive(Clone, Debug)]
pub enum Ast {
    Num(Scalar),
    Name(String),
    Lambda,
    D(Box<Ast>),
    Neg(Box<Ast>),
    Add(Box<Ast>, Box<Ast>),
    Sub(Box<Ast>, Box<Ast>),
    Mul(Box<Ast>, Box<Ast>),
    Pow(Box<Ast>, u32),
}

/// A parse error with its line number (1-based) and column.
#[derive(Clone, Debug)]
pub struct ParseError {
    pub line: usize,
    pub col: usize,
    pub message: String,
}

impl std::fmt::Display for ParseError {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        write!(f, "line {}, column {}: {}", self.line, self.col, self.message)
    }
}

pub fn parse_spec(text: &str) -> Result<StructureSpec, ParseError> {
    let mut kind: Option<Kind> = None;
    let mut gens = Vec::new();
    let mut module_gens = Vec::new();
    let mut unit = None;
    let mut weights = BTreeMap::new();
    let mut bounds = BTreeMap::new();
    let mut brackets = Vec::new();
    let mut integrals = Vec::new();
    let mut products = Vec::new();
    let mut actions = Vec::new();
    let err = |line: usize, col: usize, m: &str| ParseError {
        line,
        col,
        message: m.to_string(),
    };
    for (lineno, raw) in text.lines().enumerate() {
        let line = lineno + 1;
        let content = raw.split('#').next().unwrap_or("").trim();
        if content.is_empty() {
            continue;
        }
        let words: Vec<&str> = content.split_whitespace().collect();
        match words[0] {
            "kind" => {
                let k = words
                    .get(1)
                    .and_then(|w| Kind::parse(w))
                    .ok_or_else(|| err(line, 6, "unknown kind"))?;
                kind = Some(k);
            }
            "gen" | "module" => {
                if words.len() != 4 {
                    return Err(err(line, 1, "expected: gen <name> <even|odd> <free|torsion>"));
                }
                let parity = match words[2] {
                    "even" => Parity::Even,
                    "odd" => Parity::Odd,
                    _ => return Err(err(line, 1, "parity must be even or odd")),
                };
                let gkind = match words[3] {
                    "free" => GenKind::Free,
                    "torsion" => GenKind::Torsion,
                    _ => return Err(err(line, 1, "∂-kind must be free or torsion")),
                };
                let g = Generator { name: words[1].to_string(), parity, kind: gkind };
                if words[0] == "gen" {
                    gens.push(g);
                } else {
                    module_gens.push(g);
                }
            }
            "boson" => {
                let n: usize = words
                    .get(1)
                    .and_then(|w| w.parse().ok())
                    .ok_or_else(|| err(line, 7, "expected a boson count"))?;
                if n == 0 || n > 6 {
                    return Err(err(line, 7, "boson count must be between 1 and 6"));
                }
                for i in 1..=n {
                    gens.push(Generator {
                        name: format!("u{}", i),
                        parity: Parity::Even,
                        kind: GenKind::Free,
                    });
                }
            }
            "unit" => {
                unit = Some(
                    words
                        .get(1)
                        .ok_or_else(|| err(line, 6, "expected a generator name"))?
                        .to_string(),
                );
            }
            "weight" => {
                if words.len() != 3 {
                    return Err(err(line, 1, "expected: weight <name> <integer>"));
                }
                let w: i64 = words[2]
                    .parse()
                    .map_err(|_| err(line, 1, "weight must be an integer"))?;
                weights.insert(words[1].to_string(), w);
            }
            "bound" => {
                if words.len() != 3 {
                    return Err(err(line, 1, "expected: bound <degree|order|lcap> <n>"));
                }
                let v: u32 = words[2]
                    .parse()
                    .map_err(|_| err(line, 1, "bound must be a nonnegative integer"))?;
                bounds.insert(words[1].to_string(), v);
            }
            _ => {
                // entry lines: [g,h] = …, I[g,h] = …, act[g,m] = …, g*h = …
                let (lhs, rhs) = content
                    .split_once('=')
                    .ok_or_else(|| err(line, 1, "expected an '=' entry"))?;
                let lhs = lhs.trim();
                let ast = parse_expr(rhs.trim(), line)?;
                if let Some(inner) = lhs.strip_prefix("I[").and_then(|s| s.strip_suffix(']')) {
                    let (a, b) = split_pair(inner, line)?;
                    integrals.push((a, b, ast));
                } else if let Some(inner) =
                    lhs.strip_prefix("act[").and_then(|s| s.strip_suffix(']'))
                {
                    let (a, b) = split_pair(inner, line)?;
                    actions.push((a, b, ast));
                } else if let Some(inner) = lhs.strip_prefix('[').and_then(|s| s.strip_suffix(']'))
                {
                    let (a, b) = split_pair(inner, line)?;
                    brackets.push((a, b, ast));
                } else if let Some((a, b)) = lhs.split_once('*') {
                    products.push((a.trim().to_string(), b.trim().to_string(), ast));
                } else {
                    return Err(err(line, 1, "unrecognized entry"));
                }
            }
        }
    }
    let kind = kind.ok_or_else(|| err(1, 1, "missing 'kind' declaration"))?;
    let spec = StructureSpec {
        kind,
        gens,
        module_gens,
        unit,
        weights,
        bounds,
        brackets,
        integrals,
        products,
        actions,
    };
    validate_names(&spec)?;
    Ok(spec)
}

fn split_pair(inner: &str, line: usize) -> Result<(String, String), ParseError> {
    let (a, b) = inner.split_once(',').ok_or(ParseError {
        line,
        col: 1,
        message: "expected two comma-separated names".into(),
    })?;
    Ok((a.trim().to_string(), b.trim().to_string()))
}

fn validate_names(spec: &StructureSpec) -> Result<(), ParseError> {
    let known: Vec<&str> = spec
        .gens
        .iter()
        .chain(spec.module_gens.iter())
        .map(|g| g.name.as_str())
        .collect();
    let check = |name: &str| -> Result<(), ParseError> {
        if known.contains(&name) {
            Ok(())
        } else {
            Err(ParseError {
                line: 0,
                col: 0,
                message: format!("undeclared name '{}'", name),
            })
        }
    };
    for (a, b, ast) in spec
        .brackets
        .iter()
        .chain(spec.integrals.iter())
        .chain(spec.products.iter())
        .chain(spec.actions.iter())
    {
        check(a)?;
        check(b)?;
        check_ast_names(ast, &known)?;
    }
    if let Some(u) = &spec.unit {
        check(u)?;
    }
    for name in spec.weights.keys() {
        check(name)?;
    }
    // λ only where the kind allows
    if matches!(spec.kind, Kind::Lie | Kind::PoissonFn) {
        for (_, _, ast) in spec.brackets.iter().chain(spec.products.iter()) {
            if ast_uses_lambda(ast) {
                return Err(ParseError {
                    line: 0,
                    col: 0,
                    message: format!("kind {} does not allow λ", spec.kind.name()),
                });
            }
        }
    }
    Ok(())
}

fn check_ast_names(ast: &Ast, known: &[&str]) -> Result<(), ParseError> {
    match ast {
        Ast::Name(n) => {
            if known.contains(&n.as_str()) {
                Ok(())
            } else {
                Err(ParseError {
                    line: 0,
                    col: 0,
                    message: format!("undeclared name '{}'", n),
                })
            }
        }
        Ast::Num(_) | Ast::Lambda => Ok(()),
        Ast::D(a) | Ast::Neg(a) | Ast::Pow(a, _) => check_ast_names(a, known),
        Ast::Add(a, b) | Ast::Sub(a, b) | Ast::Mul(a, b) => {
            check_ast_names(a, known)?;
            check_ast_names(b, known)
        }
    }
}

fn ast_uses_lambda(ast: &Ast) -> bool {
    match ast {
        Ast::Lambda => true,
        Ast::Num(_) | Ast::Name(_) => false,
        Ast::D(a) | Ast::Neg(a) | Ast::Pow(a, _) => ast_uses_lambda(a),
        Ast::Add(a, b) | Ast::Sub(a, b) | Ast::Mul(a, b) => {
            ast_uses_lambda(a) || ast_uses_lambda(b)
        }
    }
}

// ---- Expression parsing ----

#[derive(Clone, Debug, PartialEq)]
enum Tok {
    Num(Scalar),
    Name(String),
    Plus,
    Minus,
    Star,
    Caret,
    LParen,
    RParen,
}

fn tokenize(s: &str, line: usize) -> Result<Vec<(usize, Tok)>, ParseError> {
    let mut out = Vec::new();
    let chars: Vec<char> = s.chars().collect();
    let mut i = 0;
    while i < chars.len() {
        let c = chars[i];
        let col = i + 1;
        match c {
            ' ' | '\t' => i += 1,
            '+' => {
                out.push((col, Tok::Plus));
                i += 1;
            }
            '-' => {
                out.push((col, Tok::Minus));
                i += 1;
            }
            '*' => {
                out.push((col, Tok::Star));
                i += 1;
            }
            '^' => {
                out.push((col, Tok::Caret));
                i += 1;
            }
            '(' => {
                out.push((col, Tok::LParen));
                i += 1;
            }
            ')' => {
                out.push((col, Tok::RParen));
                i += 1;
            }
            '0'..='9' => {
                let start = i;
                while i < chars.len() && chars[i].is_ascii_digit() {
                    i += 1;
                }
                let num: i64 = chars[start..i].iter().collect::<String>().parse().map_err(
                    |_| ParseError { line, col, message: "number too large".into() },
                )?;
                if i < chars.len() && chars[i] == '/' {
                    i += 1;
                    let dstart = i;
                    while i < chars.len() && chars[i].is_ascii_digit() {
                        i += 1;
                    }
                    if dstart == i {
                        return Err(ParseError {
                            line,
                            col,
                            message: "expected a denominator".into(),
                        });
                    }
                    let den: i64 = chars[dstart..i]
                        .iter()
                        .collect::<String>()
                        .parse()
                        .map_err(|_| ParseError { line, col, message: "number too large".into() })?;
                    if den == 0 {
                        return Err(ParseError { line, col, message: "zero denominator".into() });
                    }
                    out.push((col, Tok::Num(Scalar::ratio(num, den))));
                } else {
                    out.push((col, Tok::Num(Scalar::from_int(num))));
                }
            }
            c if c.is_ascii_alphabetic() || c == '_' => {
                let start = i;
                while i < chars.len() && (chars[i].is_ascii_alphanumeric() || chars[i] == '_') {
                    i += 1;
                }
                out.push((col, Tok::Name(chars[start..i].iter().collect())));
            }
            _ => {
                return Err(ParseError {
                    line,
                    col,
                    message: format!("unexpected character '{}'", c),
                })
            }
        }
    }
    Ok(out)
}

struct Parser {
    toks: Vec<(usize, Tok)>,
    pos: usize,
    line: usize,
}

impl Parser {
    fn peek(&self) -> Option<&Tok> {
        self.toks.get(self.pos).map(|(_, t)| t)
    }

    fn next(&mut self) -> Option<Tok> {
        let t = self.toks.get(self.pos).map(|(_, t)| t.clone());
        self.pos += 1;
        t
    }

    fn error(&self, m: &str) -> ParseError {
        let col = self.toks.get(self.pos).map(|(c, _)| *c).unwrap_or(1);
        ParseError { line: self.line, col, message: m.to_string() }
    }

    fn expr(&mut self) -> Result<Ast, ParseError> {
        let mut lhs = self.term()?;
        loop {
            match self.peek() {
                Some(Tok::Plus) => {
                    self.next();
                    let rhs = self.term()?;
                    lhs = Ast::Add(Box::new(lhs), Box::new(rhs));
                }
                Some(Tok::Minus) => {
                    self.next();
                    let rhs = self.term()?;
                    lhs = Ast::Sub(Box::new(lhs), Box::new(rhs));
                }
                _ => return Ok(lhs),
            }
        }
    }

    fn term(&mut self) -> Result<Ast, ParseError> {
        let mut lhs = self.factor()?;
        while let Some(Tok::Star) = self.peek() {
            self.next();
            let rhs = self.factor()?;
            lhs = Ast::Mul(Box::new(lhs), Box::new(rhs));
        }
        Ok(lhs)
    }

    fn factor(&mut self) -> Result<Ast, ParseError> {
        let base = match self.next() {
            Some(Tok::Minus) => return Ok(Ast::Neg(Box::new(self.factor()?))),
            Some(Tok::Num(s)) => Ast::Num(s),
            Some(Tok::Name(n)) if n == "L" => Ast::Lambda,
            Some(Tok::Name(n)) if n == "d" => {
                if self.next() != Some(Tok::LParen) {
                    return Err(self.error("expected '(' after d"));
                }
                let inner = self.expr()?;
                if self.next() != Some(Tok::RParen) {
                    return Err(self.error("expected ')'"));
                }
                Ast::D(Box::new(inner))
            }
            Some(Tok::Name(n)) => Ast::Name(n),
            Some(Tok::LParen) => {
                let inner = self.expr()?;
                if self.next() != Some(Tok::RParen) {
                    return Err(self.error("expected ')'"));
                }
                inner
            }
            _ => return Err(self.error("expected a factor")),
        };
        if let Some(Tok::Caret) = self.peek() {
            self.next();
            match self.next() {
                Some(Tok::Num(s)) if !s.is_negative() && s.0.is_integer() => {
                    let e: u32 = s
                        .0
                        .to_integer()
                        .try_into()
                        .map_err(|_| self.error("exponent too large"))?;
                    return Ok(Ast::Pow(Box::new(base), e));
                }
                _ => return Err(self.error("expected a nonnegative integer exponent")),
            }
        }
        Ok(base)
    }
}

pub fn parse_expr(s: &str, line: usize) -> Result<Ast, ParseError> {
    let toks = tokenize(s, line)?;
    let mut p = Parser { toks, pos: 0, line };
    let ast = p.expr()?;
    if p.pos != p.toks.len() {
        return Err(p.error("trailing input"));
    }
    Ok(ast)
}

/// Evaluate an expression into a λ-polynomial over a coefficient space;
/// `lam` is the variable `L` maps to, `resolve` maps declared names to
/// elements, and `mul`/`partial` supply the space arithmetic.
pub fn eval_ast<S: VSpace>(
    space: &S,
    ast: &Ast,
    lam: Var,
    resolve: &dyn Fn(&str) -> Option<S::Elem>,
    mul: &dyn Fn(&S::Elem, &S::Elem) -> Option<S::Elem>,
    one: Option<S::Elem>,
) -> Result<LPoly<S::Elem>, String> {
    match ast {
        Ast::Num(c) => {
            let unit = one.clone().ok_or("scalar constants need a unital coefficient space")?;
            Ok(LPoly::constant(space, space.scale_elem(&unit, c)))
        }
        Ast::Lambda => {
            let unit = one.clone().ok_or("λ needs a unital coefficient space")?;
            Ok(LPoly::monomial(space, Mono::var(lam), unit))
        }
        Ast::Name(n) => {
            let e = resolve(n).ok_or_else(|| format!("unknown name '{}'", n))?;
            Ok(LPoly::constant(space, e))
        }
        Ast::D(a) => {
            let inner = eval_ast(space, a, lam, resolve, mul, one)?;
            Ok(inner.map_partial(space))
        }
        Ast::Neg(a) => Ok(eval_ast(space, a, lam, resolve, mul, one)?.neg(space)),
        Ast::Add(a, b) => {
            let x = eval_ast(space, a, lam, resolve, mul, one.clone())?;
            let y = eval_ast(space, b, lam, resolve, mul, one)?;
            Ok(x.add(space, &y))
        }
        Ast::Sub(a, b) => {
            let x = eval_ast(space, a, lam, resolve, mul, one.clone())?;
            let y = eval_ast(space, b, lam, resolve, mul, one)?;
            Ok(x.sub(space, &y))
        }
        Ast::Mul(a, b) => {
            let x = eval_ast(space, a, lam, resolve, mul, one.clone())?;
            let y = eval_ast(space, b, lam, resolve, mul, one)?;
            let mut out = LPoly::zero();
            for (m1, e1) in &x.terms {
                for (m2, e2) in &y.terms {
                    let prod = mul(e1, e2).ok_or("this kind does not allow products of generators")?;
                    out.add_term_in(space, m1.mul(m2), prod);
                }
            }
            Ok(out)
        }
        Ast::Pow(a, e) => {
            let unit = one.clone().ok_or("powers need a unital coefficient space")?;
            let mut acc = LPoly::constant(space, unit);
            for _ in 0..*e {
                let x = eval_ast(space, a, lam, resolve, mul, one.clone())?;
                let mut out = LPoly::zero();
                for (m1, e1) in &acc.terms {
                    for (m2, e2) in &x.terms {
                        let prod =
                            mul(e1, e2).ok_or("this kind does not allow products of generators")?;
                        out.add_term_in(space, m1.mul(m2), prod);
                    }
                }
                acc = out;
            }
            Ok(acc)
        }
    }
}

/// Evaluation of entry expressions over a PdModule: products of generators
/// are rejected, scalars multiply coefficients, `d` is the module ∂.
pub fn eval_melem_poly(
    module: &PdModule,
    ast: &Ast,
    lam: Var,
) -> Result<LPoly<MElem>, String> {
    // treat scalar-only subexpressions through a virtual unit: evaluate with
    // mul defined only when one side is a scalar multiple of the unit marker
    eval_scaled(module, ast, lam)
}

fn eval_scaled(
    module: &PdModule,
    ast: &Ast,
    lam: Var,
) -> Result<LPoly<MElem>, String> {
    // value = polynomial with coefficients (scalar-part, element-part):
    // realized as LPoly<MElem> plus a parallel scalar polynomial for the
    // pure-scalar component
    let (scal, elem) = eval_split(module, ast, lam)?;
    if !scal.is_zero() {
        return Err("a bare scalar term needs a generator factor".into());
    }
    Ok(elem)
}

/// Split evaluation: (pure-scalar polynomial, element polynomial).
fn eval_split(
    module: &PdModule,
    ast: &Ast,
    lam: Var,
) -> Result<(SPoly, LPoly<MElem>), String> {
    match ast {
        Ast::Num(c) => Ok((SPoly::sconst(c.clone()), LPoly::zero())),
        Ast::Lambda => Ok((SPoly::svar(lam), LPoly::zero())),
        Ast::Name(n) => {
            let i = module.gen_index(n).ok_or_else(|| format!("unknown name '{}'", n))?;
            Ok((SPoly::zero(), LPoly::constant(module, module.basis(i, 0))))
        }
        Ast::D(a) => {
            let (s, e) = eval_split(module, a, lam)?;
            if !s.is_zero() {
                return Err("d(…) of a scalar expression".into());
            }
            Ok((SPoly::zero(), e.map_partial(module)))
        }
        Ast::Neg(a) => {
            let (s, e) = eval_split(module, a, lam)?;
            Ok((s.sneg(), e.neg(module)))
        }
        Ast::Add(a, b) => {
            let (s1, e1) = eval_split(module, a, lam)?;
            let (s2, e2) = eval_split(module, b, lam)?;
            Ok((s1.sadd(&s2), e1.add(module, &e2)))
        }
        Ast::Sub(a, b) => {
            let (s1, e1) = eval_split(module, a, lam)?;
            let (s2, e2) = eval_split(module, b, lam)?;
            Ok((s1.ssub(&s2), e1.sub(module, &e2)))
        }
        Ast::Mul(a, b) => {
            let (s1, e1) = eval_split(module, a, lam)?;
            let (s2, e2) = eval_split(module, b, lam)?;
            if !e1.is_zero() && !e2.is_zero() {
                return Err("products of module generators are not allowed here".into());
            }
            if e1.is_zero() {
                Ok((s1.smul(&s2), e2.mul_spoly(module, &s1)))
            } else {
                Ok((s1.smul(&s2), e1.mul_spoly(module, &s2)))
            }
        }
        Ast::Pow(a, e) => {
            let (s, el) = eval_split(module, a, lam)?;
            if !el.is_zero() {
                return Err("powers of module generators are not allowed here".into());
            }
            let mut acc = SPoly::sconst(Scalar::one());
            for _ in 0..*e {
                acc = acc.smul(&s);
            }
            Ok((acc, LPoly::zero()))
        }
    }
}

/// Evaluation over a differential polynomial algebra, where products and
/// powers of generators are the algebra multiplication.
pub fn eval_delem_poly(
    alg: &DiffPolyAlg,
    ast: &Ast,
    lam: Var,
) -> Result<LPoly<DElem>, String> {
    let resolve = |n: &str| alg.var_index(n).map(|i| alg.jet(i, 0));
    let mul = |a: &DElem, b: &DElem| Some(a.mul(b));
    eval_ast(alg, ast, lam, &resolve, &mul, Some(DElem::one()))
}
