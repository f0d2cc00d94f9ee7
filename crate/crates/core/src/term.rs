//! Well-scoped terms over a binding signature.
//!
//! Variables are de Bruijn *levels*: in a context of size `n` the free
//! variables are `0..n`, and an argument that binds `k` variables sees the
//! additional levels `n..n+k`. A term never records its context; every
//! operation that needs it takes the context size explicitly.

use std::cmp::Ordering;
use std::fmt;
use std::sync::Arc;

use crate::error::{Error, Result};
use crate::sexpr::{self, Sexp};

/// Interned-ish identifier for operations, rules and metavariables.
pub type Name = Arc<str>;

pub fn name(s: &str) -> Name {
    Arc::from(s)
}

/// An operation of a binding signature: argument `i` binds
/// `binding_arities[i]` fresh variables.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct OpSpec {
    pub name: Name,
    pub binding_arities: Vec<usize>,
}

impl OpSpec {
    pub fn new(name: &str, binding_arities: &[usize]) -> Self {
        OpSpec {
            name: self::name(name),
            binding_arities: binding_arities.to_vec(),
        }
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub enum Term {
    Var(usize),
    Op(Name, Vec<Arg>),
}

/// An operation argument together with the number of variables it binds.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct Arg {
    pub bound: usize,
    pub body: Term,
}

impl Arg {
    pub fn new(bound: usize, body: Term) -> Self {
        Arg { bound, body }
    }
}

impl Term {
    pub fn var(i: usize) -> Term {
        Term::Var(i)
    }

    pub fn op(op: &str, args: Vec<Arg>) -> Term {
        Term::Op(name(op), args)
    }

    /// Convenience for first-order arguments (no binders).
    pub fn app(op: &str, args: Vec<Term>) -> Term {
        Term::op(op, args.into_iter().map(|t| Arg::new(0, t)).collect())
    }

    /// Height of the syntax tree; variables and constants have depth 1.
    pub fn depth(&self) -> usize {
        match self {
            Term::Var(_) => 1,
            Term::Op(_, args) => 1 + args.iter().map(|a| a.body.depth()).max().unwrap_or(0),
        }
    }

    /// Number of nodes.
    pub fn size(&self) -> usize {
        match self {
            Term::Var(_) => 1,
            Term::Op(_, args) => 1 + args.iter().map(|a| a.body.size()).sum::<usize>(),
        }
    }

    /// Whether the free variable `level` occurs.
    pub fn uses_level(&self, level: usize) -> bool {
        match self {
            Term::Var(i) => *i == level,
            Term::Op(_, args) => args.iter().any(|a| a.body.uses_level(level)),
        }
    }

    pub fn head_name(&self) -> Option<&Name> {
        match self {
            Term::Var(_) => None,
            Term::Op(o, _) => Some(o),
        }
    }
}

impl Ord for Term {
    fn cmp(&self, other: &Self) -> Ordering {
        term_order(self, other)
    }
}

impl PartialOrd for Term {
    fn partial_cmp(&self, other: &Self) -> Option<Ordering> {
        Some(self.cmp(other))
    }
}

/// Deterministic total order: variables before operations, variables by
/// level, operations by name, then arity, then arguments left to right
/// (binder count first, then body).
pub fn term_order(a: &Term, b: &Term) -> Ordering {
    match (a, b) {
        (Term::Var(i), Term::Var(j)) => i.cmp(j),
        (Term::Var(_), Term::Op(..)) => Ordering::Less,
        (Term::Op(..), Term::Var(_)) => Ordering::Greater,
        (Term::Op(f, xs), Term::Op(g, ys)) => f
            .cmp(g)
            .then(xs.len().cmp(&ys.len()))
            .then_with(|| {
                for (x, y) in xs.iter().zip(ys) {
                    let c = x.bound.cmp(&y.bound).then_with(|| term_order(&x.body, &y.body));
                    if c != Ordering::Equal {
                        return c;
                    }
                }
                Ordering::Equal
            }),
    }
}

/// Core traversal: rebuilds `t` (in context `src`) into context `tgt`.
/// Free variables are sent to `on_free(level, binders_crossed)`, whose
/// result must live in context `tgt + binders_crossed`; bound variables are
/// relocated to sit above `tgt`.
fn walk<F>(t: &Term, src: usize, tgt: usize, crossed: usize, on_free: &mut F) -> Result<Term>
where
    F: FnMut(usize, usize) -> Result<Term>,
{
    match t {
        Term::Var(l) => {
            let l = *l;
            if l < src {
                on_free(l, crossed)
            } else if l < src + crossed {
                Ok(Term::Var(l - src + tgt))
            } else {
                Err(Error::Scope(format!(
                    "variable {l} escapes a context of size {}",
                    src + crossed
                )))
            }
        }
        Term::Op(o, args) => {
            let mut out = Vec::with_capacity(args.len());
            for a in args {
                out.push(Arg::new(
                    a.bound,
                    walk(&a.body, src, tgt, crossed + a.bound, on_free)?,
                ));
            }
            Ok(Term::Op(o.clone(), out))
        }
    }
}

/// Checks that every variable of `t` is bound in a context of size `ctx`.
pub fn check_scope(t: &Term, ctx: usize) -> Result<()> {
    walk(t, ctx, ctx, 0, &mut |l, _| Ok(Term::Var(l))).map(|_| ())
}

/// Moves `t` from context `from` to context `from + by` (iterated weakening).
pub fn shift(t: &Term, from: usize, by: usize) -> Term {
    if by == 0 {
        return t.clone();
    }
    walk(t, from, from + by, 0, &mut |l, _| Ok(Term::Var(l)))
        .expect("shift: term not scoped in its context")
}

/// Functorial action: relabels free variable `i` as `ctx_map[i]`.
pub fn rename(t: &Term, ctx_map: &[usize], target: usize) -> Result<Term> {
    if let Some(bad) = ctx_map.iter().find(|&&m| m >= target) {
        return Err(Error::Scope(format!(
            "renaming target {bad} outside a context of size {target}"
        )));
    }
    walk(t, ctx_map.len(), target, 0, &mut |l, _| Ok(Term::Var(ctx_map[l])))
}

/// Partial relabeling from context `src` to context `target`: free variable
/// `l` becomes `f(l)`; `None` for any occurring variable makes the whole
/// relabeling fail.
pub fn rename_partial(t: &Term, src: usize, target: usize, f: impl Fn(usize) -> Option<usize>) -> Option<Term> {
    walk(t, src, target, 0, &mut |l, _| {
        f(l).filter(|&m| m < target)
            .map(Term::Var)
            .ok_or_else(|| Error::Scope(String::new()))
    })
    .ok()
}

/// A simultaneous substitution from context `source` to context `target`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct SubstEnv {
    pub source: usize,
    pub target: usize,
    pub images: Vec<Term>,
}

impl SubstEnv {
    pub fn new(target: usize, images: Vec<Term>) -> Result<Self> {
        for img in &images {
            check_scope(img, target)?;
        }
        Ok(SubstEnv {
            source: images.len(),
            target,
            images,
        })
    }

    pub fn identity(n: usize) -> Self {
        SubstEnv {
            source: n,
            target: n,
            images: (0..n).map(Term::Var).collect(),
        }
    }

    /// The substitution sending variable `i` to variable `map[i]`.
    pub fn from_renaming(map: &[usize], target: usize) -> Result<Self> {
        SubstEnv::new(target, map.iter().map(|&m| Term::Var(m)).collect())
    }

    /// `[top := u]` from context `n + 1` to `n`, identity elsewhere.
    pub fn single(n: usize, u: Term) -> Self {
        let mut images: Vec<Term> = (0..n).map(Term::Var).collect();
        images.push(u);
        SubstEnv {
            source: n + 1,
            target: n,
            images,
        }
    }

    /// Substitutes the `k = us.len()` topmost variables of `n + k`.
    pub fn top(n: usize, us: Vec<Term>) -> Self {
        let k = us.len();
        let mut images: Vec<Term> = (0..n).map(Term::Var).collect();
        images.extend(us);
        SubstEnv {
            source: n + k,
            target: n,
            images,
        }
    }

    /// Extends the environment under `k` binders: the new variables map to
    /// themselves and every image is weakened.
    pub fn lift(&self, k: usize) -> SubstEnv {
        let mut images: Vec<Term> = self.images.iter().map(|t| shift(t, self.target, k)).collect();
        images.extend((0..k).map(|j| Term::Var(self.target + j)));
        SubstEnv {
            source: self.source + k,
            target: self.target + k,
            images,
        }
    }

    /// `self` followed by `then`: `t<self><then> = t<self.compose(then)>`.
    pub fn compose(&self, then: &SubstEnv) -> Result<SubstEnv> {
        let images = self
            .images
            .iter()
            .map(|t| subst(t, then))
            .collect::<Result<Vec<_>>>()?;
        Ok(SubstEnv {
            source: self.source,
            target: then.target,
            images,
        })
    }
}

/// Capture-avoiding simultaneous substitution (monadic bind).
pub fn subst(t: &Term, env: &SubstEnv) -> Result<Term> {
    let tgt = env.target;
    walk(t, env.source, tgt, 0, &mut |l, crossed| {
        Ok(shift(&env.images[l], tgt, crossed))
    })
}

/// The canonical inclusion from context `n` to `n + 1`.
pub fn weaken(t: &Term, n: usize) -> Term {
    shift(t, n, 1)
}

/// Inverse of [`weaken`] on terms (in context `n + 1`) that do not use the
/// top variable `n`.
pub fn strengthen(t: &Term, n: usize) -> Option<Term> {
    walk(t, n + 1, n, 0, &mut |l, _| {
        if l == n {
            Err(Error::Scope(String::new()))
        } else {
            Ok(Term::Var(l))
        }
    })
    .ok()
}

/// Exchanges the two topmost variables of context `n`, which must be ≥ 2.
pub fn swap_top2(t: &Term, n: usize) -> Result<Term> {
    if n < 2 {
        return Err(Error::Scope(format!("swap needs two fresh variables, context has {n}")));
    }
    let mut map: Vec<usize> = (0..n).collect();
    map.swap(n - 2, n - 1);
    rename(t, &map, n)
}

/// Whether `t`, in context `n + 1`, mentions the fresh variable `n`.
pub fn depends_on_top(t: &Term, n: usize) -> bool {
    t.uses_level(n)
}

// ---------------------------------------------------------------------------
// Text syntax
//
//   term := "(var" NAT ")" | "(" IDENT arg* ")"
//   arg  := term | "(bind" NAT term ")"

impl fmt::Display for Term {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Term::Var(i) => write!(f, "(var {i})"),
            Term::Op(o, args) => {
                write!(f, "({o}")?;
                for a in args {
                    if a.bound == 0 {
                        write!(f, " {}", a.body)?;
                    } else {
                        write!(f, " (bind {} {})", a.bound, a.body)?;
                    }
                }
                write!(f, ")")
            }
        }
    }
}

pub fn parse_term(src: &str) -> Result<Term> {
    term_from_sexp(&sexpr::parse_one(src)?)
}

pub fn term_from_sexp(s: &Sexp) -> Result<Term> {
    let items = s
        .as_list()
        .ok_or_else(|| sexpr::error_at(s.pos(), "expected a term `(...)`"))?;
    let head = items
        .first()
        .ok_or_else(|| sexpr::error_at(s.pos(), "empty term"))?;
    let head = sexpr::parse_ident(head)?;
    match head {
        "var" => {
            if items.len() != 2 {
                return Err(sexpr::error_at(s.pos(), "`var` takes exactly one level"));
            }
            Ok(Term::Var(sexpr::parse_nat(&items[1])?))
        }
        "bind" => Err(sexpr::error_at(s.pos(), "`bind` is only allowed as an argument")),
        op => {
            let mut args = Vec::with_capacity(items.len() - 1);
            for a in &items[1..] {
                if a.head() == Some("bind") {
                    let parts = a.as_list().unwrap();
                    if parts.len() != 3 {
                        return Err(sexpr::error_at(a.pos(), "expected `(bind NAT term)`"));
                    }
                    args.push(Arg::new(sexpr::parse_nat(&parts[1])?, term_from_sexp(&parts[2])?));
                } else {
                    args.push(Arg::new(0, term_from_sexp(a)?));
                }
            }
            Ok(Term::op(op, args))
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn t(s: &str) -> Term {
        parse_term(s).unwrap()
    }

    #[test]
    fn rename_examples() {
        assert_eq!(rename(&Term::Var(0), &[1], 2).unwrap(), Term::Var(1));
        // ctx 1 -> ctx 2: the bound variable moves from level 1 to level 2
        assert_eq!(
            rename(&t("(abs (bind 1 (var 1)))"), &[1], 2).unwrap(),
            t("(abs (bind 1 (var 2)))")
        );
        assert_eq!(
            rename(&t("(app (var 0) (var 1))"), &[1, 0], 2).unwrap(),
            t("(app (var 1) (var 0))")
        );
        assert!(rename(&Term::Var(0), &[2], 2).is_err());
    }

    #[test]
    fn subst_examples() {
        let x = t("(app (var 0) (var 1))");
        assert_eq!(subst(&x, &SubstEnv::identity(2)).unwrap(), x);
        let env = SubstEnv::new(1, vec![t("(abs (bind 1 (var 1)))"), Term::Var(0)]).unwrap();
        assert_eq!(subst(&Term::Var(0), &env).unwrap(), env.images[0]);
        // app(abs(x.x), v0)[v0 := y] in ctx 1 -> 2 where y is level 1
        let body = t("(app (abs (bind 1 (var 1))) (var 0))");
        let env = SubstEnv::new(2, vec![Term::Var(1)]).unwrap();
        assert_eq!(
            subst(&body, &env).unwrap(),
            t("(app (abs (bind 1 (var 2))) (var 1))")
        );
    }

    #[test]
    fn substituted_images_are_weakened_under_binders() {
        // abs(x. app(x, v0)) with v0 := abs(z.z), everything closed
        let s = t("(abs (bind 1 (app (var 1) (var 0))))");
        let env = SubstEnv::new(0, vec![t("(abs (bind 1 (var 0)))")]).unwrap();
        assert_eq!(
            subst(&s, &env).unwrap(),
            t("(abs (bind 1 (app (var 0) (abs (bind 1 (var 1))))))")
        );
    }

    #[test]
    fn scope_violations_are_reported() {
        assert!(check_scope(&Term::Var(2), 2).is_err());
        assert!(check_scope(&t("(abs (bind 1 (var 2)))"), 2).is_ok());
        assert!(check_scope(&t("(abs (bind 1 (var 3)))"), 2).is_err());
        assert!(subst(&Term::Var(3), &SubstEnv::identity(2)).is_err());
    }

    #[test]
    fn weaken_and_strengthen() {
        assert_eq!(weaken(&Term::Var(0), 1), Term::Var(0));
        let u = t("(abs (bind 1 (app (var 1) (var 0))))");
        let w = weaken(&u, 1);
        assert_eq!(w, t("(abs (bind 1 (app (var 2) (var 0))))"));
        assert!(!depends_on_top(&w, 1));
        assert_eq!(strengthen(&w, 1), Some(u));
        assert_eq!(strengthen(&Term::Var(3), 3), None);
        assert_eq!(strengthen(&t("(app (var 0) (var 1))"), 1), None);
    }

    #[test]
    fn swap_examples() {
        assert_eq!(swap_top2(&Term::Var(1), 3).unwrap(), Term::Var(2));
        let s = t("(app (var 1) (var 2))");
        assert_eq!(swap_top2(&s, 3).unwrap(), t("(app (var 2) (var 1))"));
        assert_eq!(swap_top2(&swap_top2(&s, 3).unwrap(), 3).unwrap(), s);
        assert!(swap_top2(&Term::Var(0), 1).is_err());
    }

    #[test]
    fn order_examples() {
        assert_eq!(term_order(&Term::Var(0), &Term::Var(1)), Ordering::Less);
        let a = t("(app (var 0) (var 1))");
        assert_eq!(term_order(&a, &a), Ordering::Equal);
        let b = t("(abs (bind 1 (var 0)))");
        // "abs" < "app"
        assert_eq!(term_order(&a, &b), Ordering::Greater);
    }

    #[test]
    fn text_round_trip() {
        for s in [
            "(var 0)",
            "(app (abs (bind 1 (var 1))) (var 0))",
            "(esubst (bind 1 (app (var 0) (var 1))) (var 0))",
            "(c)",
        ] {
            assert_eq!(t(s).to_string(), s);
        }
        assert!(parse_term("(bind 1 (var 0))").is_err());
        assert!(parse_term("(var x)").is_err());
    }

    #[test]
    fn depth_counts_variables_as_one() {
        assert_eq!(Term::Var(0).depth(), 1);
        assert_eq!(t("(abs (bind 1 (var 0)))").depth(), 2);
        assert_eq!(
            t("(app (app (abs (bind 1 (var 1))) (var 0)) (app (abs (bind 1 (var 1))) (var 0)))").depth(),
            4
        );
    }
}
