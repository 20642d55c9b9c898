//! Set expressions.
//!
//! ```text
//! expr  := diff ('|' diff)*
//! diff  := inter ('\' inter)*
//! inter := unary ('&' unary)*
//! unary := '~' unary | atom
//! atom  := 'AP' '(' m ',' residues ')' | 'SQUARES' | 'PRIMES' | 'POW2'
//!        | 'FACTORIALS' | 'N' | 'EMPTY' | '{' n (',' n)* '}' | '(' expr ')'
//! residues := r (',' r)* | '{' r (',' r)* '}'
//! ```
//!
//! Complement binds tightest, then `&`, then `\`, then `|`.

use super::oracle::NullOracle;
use super::set::DensitySet;
use super::upset::UPSet;
use super::DensityError;

struct Parser<'a> {
    text: &'a str,
    pos: usize,
}

impl<'a> Parser<'a> {
    fn error(&self, message: impl Into<String>) -> DensityError {
        DensityError::Parse {
            position: self.pos,
            message: message.into(),
        }
    }

    fn skip_ws(&mut self) {
        while let Some(c) = self.text[self.pos..].chars().next() {
            if !c.is_whitespace() {
                break;
            }
            self.pos += c.len_utf8();
        }
    }

    fn peek(&mut self) -> Option<char> {
        self.skip_ws();
        self.text[self.pos..].chars().next()
    }

    fn eat(&mut self, c: char) -> bool {
        if self.peek() == Some(c) {
            self.pos += c.len_utf8();
            true
        } else {
            false
        }
    }

    fn expect(&mut self, c: char) -> Result<(), DensityError> {
        if self.eat(c) {
            Ok(())
        } else {
            Err(self.error(format!("expected {c:?}")))
        }
    }

    fn number(&mut self) -> Result<u64, DensityError> {
        self.skip_ws();
        let start = self.pos;
        while self.text[self.pos..].starts_with(|c: char| c.is_ascii_digit()) {
            self.pos += 1;
        }
        if start == self.pos {
            return Err(self.error("expected a number"));
        }
        self.text[start..self.pos]
            .parse()
            .map_err(|_| DensityError::Parse {
                position: start,
                message: "number out of range".into(),
            })
    }

    fn word(&mut self) -> String {
        self.skip_ws();
        let start = self.pos;
        while self.text[self.pos..].starts_with(|c: char| c.is_ascii_alphanumeric() || c == '_') {
            self.pos += 1;
        }
        self.text[start..self.pos].to_string()
    }

    fn number_list(&mut self, close: char) -> Result<Vec<u64>, DensityError> {
        let mut out = Vec::new();
        if self.eat(close) {
            return Ok(out);
        }
        loop {
            out.push(self.number()?);
            if self.eat(close) {
                return Ok(out);
            }
            self.expect(',')?;
        }
    }

    fn expr(&mut self) -> Result<DensitySet, DensityError> {
        let mut left = self.diff()?;
        while self.eat('|') {
            let right = self.diff()?;
            left = left.union(&right)?;
        }
        Ok(left)
    }

    fn diff(&mut self) -> Result<DensitySet, DensityError> {
        let mut left = self.inter()?;
        while self.eat('\\') {
            let right = self.inter()?;
            left = left.difference(&right)?;
        }
        Ok(left)
    }

    fn inter(&mut self) -> Result<DensitySet, DensityError> {
        let mut left = self.unary()?;
        while self.eat('&') {
            let right = self.unary()?;
            left = left.intersection(&right)?;
        }
        Ok(left)
    }

    fn unary(&mut self) -> Result<DensitySet, DensityError> {
        if self.eat('~') {
            return Ok(self.unary()?.complement());
        }
        self.atom()
    }

    fn atom(&mut self) -> Result<DensitySet, DensityError> {
        if self.eat('(') {
            let inner = self.expr()?;
            self.expect(')')?;
            return Ok(inner);
        }
        if self.eat('{') {
            let items = self.number_list('}')?;
            return Ok(DensitySet::from(UPSet::finite(items)));
        }
        let start = self.pos;
        let word = self.word();
        match word.as_str() {
            "AP" => {
                self.expect('(')?;
                let m = self.number()?;
                self.expect(',')?;
                let residues = if self.eat('{') {
                    let r = self.number_list('}')?;
                    self.expect(')')?;
                    r
                } else {
                    self.number_list_tail()?
                };
                let label = format!(
                    "AP({m},{})",
                    residues
                        .iter()
                        .map(u64::to_string)
                        .collect::<Vec<_>>()
                        .join(",")
                );
                let set = UPSet::progression(m, &residues).map_err(|e| match e {
                    DensityError::InvalidSet(msg) => DensityError::Parse {
                        position: start,
                        message: msg,
                    },
                    other => other,
                })?;
                Ok(DensitySet::from(set).with_label(label))
            }
            "SQUARES" => Ok(DensitySet::null(NullOracle::squares())),
            "PRIMES" => Ok(DensitySet::null(NullOracle::primes())),
            "POW2" => Ok(DensitySet::null(NullOracle::powers_of_2())),
            "FACTORIALS" => Ok(DensitySet::null(NullOracle::factorials())),
            "N" => Ok(DensitySet::from(UPSet::naturals()).with_label("N")),
            "EMPTY" => Ok(DensitySet::from(UPSet::empty()).with_label("EMPTY")),
            "" => Err(self.error("expected a set")),
            other => {
                self.pos = start;
                Err(self.error(format!("unknown set {other:?}")))
            }
        }
    }

    /// Residues written inline: `r, r, … )`. Consumes the closing paren.
    fn number_list_tail(&mut self) -> Result<Vec<u64>, DensityError> {
        let mut out = vec![self.number()?];
        loop {
            if self.eat(')') {
                return Ok(out);
            }
            self.expect(',')?;
            out.push(self.number()?);
        }
    }
}

pub fn parse_set(text: &str) -> Result<DensitySet, DensityError> {
    let mut p = Parser { text, pos: 0 };
    let set = p.expr()?;
    if p.peek().is_some() {
        return Err(p.error("unexpected trailing input"));
    }
    Ok(set.with_label(text.trim()))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::rational::ratio;

    #[test]
    fn basic_densities() {
        assert_eq!(parse_set("AP(2,0)").unwrap().density(), ratio(1, 2));
        assert_eq!(
            parse_set("AP(2,0) & AP(3,0)").unwrap().density(),
            ratio(1, 6)
        );
        assert_eq!(parse_set("AP(6,{0,3})").unwrap().density(), ratio(1, 3));
        assert_eq!(parse_set("AP(6,0,3)").unwrap().density(), ratio(1, 3));
        assert_eq!(parse_set("PRIMES").unwrap().density(), ratio(0, 1));
        assert_eq!(
            parse_set("AP(3,0) \\ SQUARES").unwrap().density(),
            ratio(1, 3)
        );
        assert_eq!(parse_set("~AP(4,1) & N").unwrap().density(), ratio(3, 4));
    }

    #[test]
    fn precedence() {
        // ~ > & > \ > |
        let a = parse_set("AP(2,0) | AP(3,0) & AP(5,0)").unwrap();
        let b = parse_set("AP(2,0) | (AP(3,0) & AP(5,0))").unwrap();
        assert!(a.equiv(&b) && a.core() == b.core());
        let c = parse_set("N \\ AP(2,0) & AP(3,0)").unwrap();
        assert_eq!(c.density(), ratio(5, 6));
        let d = parse_set("~AP(2,0) & AP(3,0)").unwrap();
        assert_eq!(d.density(), ratio(1, 6));
    }

    #[test]
    fn finite_literals() {
        let s = parse_set("{1, 2, 3} | AP(10,0)").unwrap();
        assert!(s.contains(2) && s.contains(20) && !s.contains(4));
    }

    #[test]
    fn errors_have_positions() {
        match parse_set("AP(2,0) | FOO") {
            Err(DensityError::Parse { position, .. }) => assert_eq!(position, 10),
            other => panic!("{other:?}"),
        }
        assert!(matches!(
            parse_set("AP(2,5)"),
            Err(DensityError::Parse { .. })
        ));
        assert!(matches!(
            parse_set("AP(2,0"),
            Err(DensityError::Parse { .. })
        ));
        assert!(matches!(
            parse_set("AP(2,0) AP"),
            Err(DensityError::Parse { .. })
        ));
    }
}
