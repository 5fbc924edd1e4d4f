use super::lexer::{tokenize, Tok, Token};
use super::{BinOp, Func, NamedConst, Node, ParseError};

/// Deepest tree the parser will build. Keeps evaluation, printing and drop
/// recursion bounded for adversarial input.
pub(crate) const MAX_DEPTH: usize = 200;

pub(crate) fn parse_node(text: &str, var: &str) -> Result<Node, ParseError> {
    if text.trim().is_empty() {
        return Err(ParseError::Empty);
    }
    let tokens = tokenize(text)?;
    let mut p = Parser { tokens, pos: 0, var };
    let (node, _) = p.expr(0)?;
    let t = p.peek();
    if t.tok != Tok::End {
        return Err(ParseError::Syntax {
            offset: t.offset,
            message: "unexpected token after end of expression".into(),
        });
    }
    Ok(node)
}

struct Parser<'a> {
    tokens: Vec<Token>,
    pos: usize,
    var: &'a str,
}

type Parsed = (Node, usize);

impl Parser<'_> {
    fn peek(&self) -> &Token {
        &self.tokens[self.pos]
    }

    fn bump(&mut self) -> Token {
        let t = self.tokens[self.pos].clone();
        if t.tok != Tok::End {
            self.pos += 1;
        }
        t
    }

    fn guard(&self, depth: usize) -> Result<(), ParseError> {
        if depth > MAX_DEPTH {
            Err(ParseError::TooDeep {
                offset: self.peek().offset,
            })
        } else {
            Ok(())
        }
    }

    fn binary(&self, op: BinOp, l: Parsed, r: Parsed) -> Result<Parsed, ParseError> {
        let depth = 1 + l.1.max(r.1);
        self.guard(depth)?;
        Ok((Node::Bin(op, Box::new(l.0), Box::new(r.0)), depth))
    }

    // expr := term (('+' | '-') term)*
    fn expr(&mut self, nest: usize) -> Result<Parsed, ParseError> {
        self.guard(nest)?;
        let mut lhs = self.term(nest)?;
        loop {
            let op = match self.peek().tok {
                Tok::Plus => BinOp::Add,
                Tok::Minus => BinOp::Sub,
                _ => return Ok(lhs),
            };
            self.bump();
            let rhs = self.term(nest)?;
            lhs = self.binary(op, lhs, rhs)?;
        }
    }

    // term := unary (('*' | '/') unary)*
    fn term(&mut self, nest: usize) -> Result<Parsed, ParseError> {
        let mut lhs = self.unary(nest)?;
        loop {
            let op = match self.peek().tok {
                Tok::Star => BinOp::Mul,
                Tok::Slash => BinOp::Div,
                _ => return Ok(lhs),
            };
            self.bump();
            let rhs = self.unary(nest)?;
            lhs = self.binary(op, lhs, rhs)?;
        }
    }

    // unary := ('-' | '+') unary | power
    fn unary(&mut self, nest: usize) -> Result<Parsed, ParseError> {
        self.guard(nest)?;
        match self.peek().tok {
            Tok::Minus => {
                self.bump();
                let (inner, d) = self.unary(nest + 1)?;
                self.guard(d + 1)?;
                Ok((Node::Neg(Box::new(inner)), d + 1))
            }
            Tok::Plus => {
                self.bump();
                self.unary(nest + 1)
            }
            _ => self.power(nest),
        }
    }

    // power := primary ('^' unary)?   (right associative through unary)
    fn power(&mut self, nest: usize) -> Result<Parsed, ParseError> {
        let base = self.primary(nest)?;
        if self.peek().tok == Tok::Caret {
            self.bump();
            let exp = self.unary(nest + 1)?;
            return self.binary(BinOp::Pow, base, exp);
        }
        Ok(base)
    }

    fn primary(&mut self, nest: usize) -> Result<Parsed, ParseError> {
        let t = self.bump();
        match t.tok {
            Tok::Num(v) => Ok((Node::Num(v), 1)),
            Tok::LParen => {
                let inner = self.expr(nest + 1)?;
                self.expect_rparen()?;
                Ok(inner)
            }
            Tok::Ident(name) => self.identifier(name, t.offset, nest),
            Tok::End => Err(ParseError::Syntax {
                offset: t.offset,
                message: "unexpected end of input".into(),
            }),
            other => Err(ParseError::Syntax {
                offset: t.offset,
                message: format!("unexpected {}", describe(&other)),
            }),
        }
    }

    fn identifier(&mut self, name: String, offset: usize, nest: usize) -> Result<Parsed, ParseError> {
        if name == self.var {
            return Ok((Node::Var, 1));
        }
        if let Some(c) = NamedConst::from_name(&name) {
            return Ok((Node::Const(c), 1));
        }
        let Some(func) = Func::from_name(&name) else {
            return Err(ParseError::UnknownIdentifier { offset, name });
        };
        let open = self.bump();
        if open.tok != Tok::LParen {
            return Err(ParseError::Syntax {
                offset: open.offset,
                message: format!("expected '(' after function '{name}'"),
            });
        }
        let mut args = Vec::new();
        if self.peek().tok != Tok::RParen {
            loop {
                args.push(self.expr(nest + 1)?);
                if self.peek().tok == Tok::Comma {
                    self.bump();
                    continue;
                }
                break;
            }
        }
        self.expect_rparen()?;
        if args.len() != 1 {
            return Err(ParseError::Arity {
                offset,
                function: name,
                expected: 1,
                found: args.len(),
            });
        }
        let (arg, d) = args.pop().expect("one argument");
        self.guard(d + 1)?;
        Ok((Node::Call(func, Box::new(arg)), d + 1))
    }

    fn expect_rparen(&mut self) -> Result<(), ParseError> {
        let t = self.bump();
        match t.tok {
            Tok::RParen => Ok(()),
            Tok::End => Err(ParseError::Syntax {
                offset: t.offset,
                message: "unexpected end of input, expected ')'".into(),
            }),
            other => Err(ParseError::Syntax {
                offset: t.offset,
                message: format!("expected ')', found {}", describe(&other)),
            }),
        }
    }
}

fn describe(t: &Tok) -> String {
    match t {
        Tok::Num(v) => format!("number {v}"),
        Tok::Ident(s) => format!("identifier '{s}'"),
        Tok::Plus => "'+'".into(),
        Tok::Minus => "'-'".into(),
        Tok::Star => "'*'".into(),
        Tok::Slash => "'/'".into(),
        Tok::Caret => "'^'".into(),
        Tok::LParen => "'('".into(),
        Tok::RParen => "')'".into(),
        Tok::Comma => "','".into(),
        Tok::End => "end of input".into(),
    }
}
