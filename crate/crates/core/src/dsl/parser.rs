use super::ast::{BinOp, Expr, ExprKind, Pos};
use super::DslError;
use crate::scalar::parse_decimal;

#[derive(Clone, Debug, PartialEq)]
enum Tok {
    Num(String),
    Ident(String),
    Op(char),
    Eof,
}

struct Lexer<'a> {
    chars: std::iter::Peekable<std::str::Chars<'a>>,
    pos: Pos,
}

impl<'a> Lexer<'a> {
    fn new(text: &'a str) -> Self {
        Lexer { chars: text.chars().peekable(), pos: Pos { line: 1, col: 1 } }
    }

    fn bump(&mut self) -> Option<char> {
        let c = self.chars.next()?;
        if c == '\n' {
            self.pos.line += 1;
            self.pos.col = 1;
        } else {
            self.pos.col += 1;
        }
        Some(c)
    }

    fn tokens(mut self) -> Result<Vec<(Tok, Pos)>, DslError> {
        let mut out = Vec::new();
        loop {
            while matches!(self.chars.peek(), Some(c) if c.is_whitespace()) {
                self.bump();
            }
            let start = self.pos;
            let Some(&c) = self.chars.peek() else {
                out.push((Tok::Eof, start));
                return Ok(out);
            };
            if c.is_ascii_digit() || c == '.' {
                let mut s = String::new();
                while let Some(&d) = self.chars.peek() {
                    if d.is_ascii_digit() || d == '.' {
                        s.push(d);
                        self.bump();
                    } else {
                        break;
                    }
                }
                out.push((Tok::Num(s), start));
            } else if c.is_ascii_alphabetic() || c == '_' {
                let mut s = String::new();
                while let Some(&d) = self.chars.peek() {
                    if d.is_ascii_alphanumeric() || d == '_' {
                        s.push(d);
                        self.bump();
                    } else {
                        break;
                    }
                }
                out.push((Tok::Ident(s), start));
            } else if "+-*/^(){},".contains(c) {
                self.bump();
                out.push((Tok::Op(c), start));
            } else {
                return Err(DslError::Syntax { pos: start, msg: format!("unexpected character `{c}`") });
            }
        }
    }
}

struct Parser {
    toks: Vec<(Tok, Pos)>,
    at: usize,
}

impl Parser {
    fn peek(&self) -> &Tok {
        &self.toks[self.at].0
    }

    fn pos(&self) -> Pos {
        self.toks[self.at].1
    }

    fn next(&mut self) -> (Tok, Pos) {
        let t = self.toks[self.at].clone();
        if self.at + 1 < self.toks.len() {
            self.at += 1;
        }
        t
    }

    fn eat(&mut self, op: char) -> bool {
        if *self.peek() == Tok::Op(op) {
            self.next();
            true
        } else {
            false
        }
    }

    fn expect(&mut self, op: char) -> Result<(), DslError> {
        if self.eat(op) {
            Ok(())
        } else {
            Err(self.error(format!("expected `{op}`")))
        }
    }

    fn error(&self, msg: String) -> DslError {
        let found = match self.peek() {
            Tok::Num(n) => format!("number `{n}`"),
            Tok::Ident(s) => format!("`{s}`"),
            Tok::Op(c) => format!("`{c}`"),
            Tok::Eof => "end of input".to_string(),
        };
        DslError::Syntax { pos: self.pos(), msg: format!("{msg}, found {found}") }
    }

    fn expr(&mut self) -> Result<Expr, DslError> {
        let mut lhs = self.term()?;
        loop {
            let pos = self.pos();
            let op = if self.eat('+') {
                BinOp::Add
            } else if self.eat('-') {
                BinOp::Sub
            } else {
                return Ok(lhs);
            };
            let rhs = self.term()?;
            lhs = Expr::new(ExprKind::Binary(op, Box::new(lhs), Box::new(rhs)), pos);
        }
    }

    fn term(&mut self) -> Result<Expr, DslError> {
        let mut lhs = self.unary()?;
        loop {
            let pos = self.pos();
            let op = if self.eat('*') {
                BinOp::Mul
            } else if self.eat('/') {
                BinOp::Div
            } else {
                return Ok(lhs);
            };
            let rhs = self.unary()?;
            lhs = Expr::new(ExprKind::Binary(op, Box::new(lhs), Box::new(rhs)), pos);
        }
    }

    fn unary(&mut self) -> Result<Expr, DslError> {
        let pos = self.pos();
        if self.eat('-') {
            let inner = self.unary()?;
            return Ok(Expr::new(ExprKind::Neg(Box::new(inner)), pos));
        }
        self.power()
    }

    fn power(&mut self) -> Result<Expr, DslError> {
        let base = self.base()?;
        let pos = self.pos();
        if !self.eat('^') {
            return Ok(base);
        }
        let paren = self.eat('(');
        let negative = self.eat('-');
        let n = match self.peek().clone() {
            Tok::Num(s) if s.chars().all(|c| c.is_ascii_digit()) => {
                self.next();
                s.parse::<i64>().map_err(|_| DslError::Syntax { pos, msg: "exponent too large".into() })?
            }
            _ => return Err(self.error("expected an integer exponent".into())),
        };
        if paren {
            self.expect(')')?;
        }
        Ok(Expr::new(ExprKind::Pow(Box::new(base), if negative { -n } else { n }), pos))
    }

    fn base(&mut self) -> Result<Expr, DslError> {
        let pos = self.pos();
        match self.peek().clone() {
            Tok::Num(s) => {
                self.next();
                let q = parse_decimal(&s)
                    .ok_or_else(|| DslError::Syntax { pos, msg: format!("malformed number `{s}`") })?;
                Ok(Expr::new(ExprKind::Num(q), pos))
            }
            Tok::Ident(name) if name == "sqrt" => {
                self.next();
                self.expect('(')?;
                let inner = self.expr()?;
                self.expect(')')?;
                Ok(Expr::new(ExprKind::Sqrt(Box::new(inner)), pos))
            }
            Tok::Ident(name) => {
                self.next();
                Ok(Expr::new(ExprKind::Sym(name), pos))
            }
            Tok::Op('(') => {
                self.next();
                let inner = self.expr()?;
                self.expect(')')?;
                Ok(inner)
            }
            Tok::Op('{') => {
                self.next();
                let a = self.expr()?;
                self.expect(',')?;
                let b = self.expr()?;
                self.expect('}')?;
                Ok(Expr::new(ExprKind::Bracket(Box::new(a), Box::new(b)), pos))
            }
            _ => Err(self.error("expected an operand".into())),
        }
    }
}

/// Parses one expression; trailing input is an error.
pub fn parse(text: &str) -> Result<Expr, DslError> {
    let toks = Lexer::new(text).tokens()?;
    let mut p = Parser { toks, at: 0 };
    let e = p.expr()?;
    if *p.peek() != Tok::Eof {
        return Err(p.error("unexpected trailing input".into()));
    }
    Ok(e)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::scalar::int;

    fn sym(s: &str) -> Box<Expr> {
        Box::new(Expr::new(ExprKind::Sym(s.into()), Pos::default()))
    }

    fn strip(e: &Expr) -> Expr {
        let k = match &e.kind {
            ExprKind::Num(n) => ExprKind::Num(n.clone()),
            ExprKind::Sym(s) => ExprKind::Sym(s.clone()),
            ExprKind::Neg(a) => ExprKind::Neg(Box::new(strip(a))),
            ExprKind::Binary(o, a, b) => ExprKind::Binary(*o, Box::new(strip(a)), Box::new(strip(b))),
            ExprKind::Pow(a, n) => ExprKind::Pow(Box::new(strip(a)), *n),
            ExprKind::Sqrt(a) => ExprKind::Sqrt(Box::new(strip(a))),
            ExprKind::Bracket(a, b) => ExprKind::Bracket(Box::new(strip(a)), Box::new(strip(b))),
        };
        Expr::new(k, Pos::default())
    }

    #[test]
    fn division_node() {
        let e = strip(&parse("k/r").unwrap());
        assert_eq!(e.kind, ExprKind::Binary(BinOp::Div, sym("k"), sym("r")));
    }

    #[test]
    fn power_binds_tighter_than_negation() {
        let e = strip(&parse("-x^2").unwrap());
        let want = ExprKind::Neg(Box::new(Expr::new(ExprKind::Pow(sym("x"), 2), Pos::default())));
        assert_eq!(e.kind, want);
    }

    #[test]
    fn left_associative_division() {
        let e = strip(&parse("a/b/c").unwrap());
        match e.kind {
            ExprKind::Binary(BinOp::Div, l, r) => {
                assert_eq!(*r, *sym("c"));
                assert!(matches!(l.kind, ExprKind::Binary(BinOp::Div, ..)));
            }
            other => panic!("unexpected {other:?}"),
        }
    }

    #[test]
    fn unbalanced_parenthesis_is_reported_with_location() {
        let err = parse("2*(x+").unwrap_err();
        match err {
            DslError::Syntax { pos, .. } => assert_eq!(pos, Pos { line: 1, col: 6 }),
            other => panic!("unexpected {other:?}"),
        }
        assert!(parse("x y").is_err());
        assert!(parse("x^y").is_err());
        assert!(parse("sqrt x").is_err());
    }

    #[test]
    fn brackets_and_numbers() {
        let e = strip(&parse("{A1, {A1, B1}} - 0.5").unwrap());
        match e.kind {
            ExprKind::Binary(BinOp::Sub, l, r) => {
                assert!(matches!(l.kind, ExprKind::Bracket(..)));
                assert_eq!(r.kind, ExprKind::Num(crate::scalar::ratio(1, 2)));
            }
            other => panic!("unexpected {other:?}"),
        }
        assert_eq!(strip(&parse("12").unwrap()).kind, ExprKind::Num(int(12)));
    }

    #[test]
    fn display_reparses_to_the_same_tree() {
        for text in ["-x^2*y/(z+1) - {a, b}^3", "(a - b) - (c + d)", "a/(b*c)", "2^-1", "-(-x)^2", "sqrt(x^2 + y^2 + z^2)"] {
            let e = strip(&parse(text).unwrap());
            let again = strip(&parse(&e.to_string()).unwrap());
            assert_eq!(e, again, "{text} -> {e}");
        }
    }
}
