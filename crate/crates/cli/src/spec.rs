//! Text forms of [`SpaceSpec`].
//!
//! ```text
//! spec  := "lp:" num | "lorentz:" field ("," field)* | "dual(" spec ")"
//!        | "convexify(" spec ",p=" num ")" | "gdual(" spec "," spec ")"
//! field := "G=" ("pow" num | "exp") | "w=" ("harmonic" | "ones" | "geom(" num ")")
//!        | "n=" int
//! ```
//!
//! `num` accepts `inf`. The `Display` impl of `SpaceSpec` prints this form.

use symseq_core::{Exponent, OrliczFn, SpaceSpec, WeightSeq};

use crate::error::SpecError;

pub fn parse_space(text: &str) -> Result<SpaceSpec, SpecError> {
    let mut p = Parser::new(text)?;
    let s = p.spec()?;
    p.finish()?;
    Ok(s)
}

/// Two specs separated by a top-level comma, e.g. `lp:2,dual(lp:3)`.
pub fn parse_pair(text: &str) -> Result<(SpaceSpec, SpaceSpec), SpecError> {
    let mut p = Parser::new(text)?;
    let e = p.spec()?;
    p.expect(",")?;
    let f = p.spec()?;
    p.finish()?;
    Ok((e, f))
}

struct Parser<'a> {
    src: &'a str,
    pos: usize,
}

impl<'a> Parser<'a> {
    fn new(src: &'a str) -> Result<Self, SpecError> {
        if src.trim().is_empty() {
            return Err(SpecError::syntax(0, "", "empty space spec"));
        }
        Ok(Parser { src, pos: 0 })
    }

    fn skip_ws(&mut self) {
        let rest = &self.src[self.pos..];
        self.pos += rest.len() - rest.trim_start().len();
    }

    fn rest(&self) -> &'a str {
        &self.src[self.pos..]
    }

    /// The text up to the next delimiter, for error messages.
    fn token(&self) -> &'a str {
        let rest = self.rest();
        let end = rest.find([',', '(', ')']).unwrap_or(rest.len());
        if end == 0 {
            &rest[..rest.chars().next().map_or(0, char::len_utf8)]
        } else {
            &rest[..end]
        }
    }

    fn eat(&mut self, lit: &str) -> bool {
        self.skip_ws();
        if self.rest().starts_with(lit) {
            self.pos += lit.len();
            true
        } else {
            false
        }
    }

    fn expect(&mut self, lit: &str) -> Result<(), SpecError> {
        if self.eat(lit) {
            Ok(())
        } else {
            Err(self.unexpected(&format!("expected `{lit}`")))
        }
    }

    fn unexpected(&self, msg: &str) -> SpecError {
        SpecError::syntax(self.pos, self.token(), msg)
    }

    fn finish(&mut self) -> Result<(), SpecError> {
        self.skip_ws();
        if self.rest().is_empty() {
            Ok(())
        } else {
            Err(self.unexpected("trailing input"))
        }
    }

    fn number(&mut self) -> Result<(f64, usize), SpecError> {
        self.skip_ws();
        let start = self.pos;
        let tok = self.token();
        if tok.is_empty() || tok == "," || tok == "(" || tok == ")" {
            return Err(self.unexpected("expected a number"));
        }
        let tok = tok.trim_end();
        match tok.parse::<f64>() {
            Ok(v) if !v.is_nan() => {
                self.pos += tok.len();
                Ok((v, start))
            }
            _ => Err(self.unexpected("expected a number")),
        }
    }

    fn exponent(&mut self) -> Result<Exponent, SpecError> {
        let (v, at) = self.number()?;
        Exponent::new(v).map_err(|e| SpecError::range(at, &v.to_string(), e))
    }

    fn spec(&mut self) -> Result<SpaceSpec, SpecError> {
        self.skip_ws();
        if self.eat("lp:") {
            return Ok(SpaceSpec::lp_exp(self.exponent()?));
        }
        if self.eat("lorentz:") {
            return self.lorentz();
        }
        if self.eat("dual(") {
            let base = self.spec()?;
            self.expect(")")?;
            return Ok(SpaceSpec::kothe_dual(base));
        }
        if self.eat("convexify(") {
            let base = self.spec()?;
            self.expect(",")?;
            self.expect("p=")?;
            let p = self.exponent()?;
            self.expect(")")?;
            return SpaceSpec::convexify(base, p.value())
                .map_err(|e| SpecError::range(self.pos, "", e));
        }
        if self.eat("gdual(") {
            let e = self.spec()?;
            self.expect(",")?;
            let f = self.spec()?;
            self.expect(")")?;
            return Ok(SpaceSpec::generalized_dual(e, f));
        }
        Err(self.unexpected("expected `lp:`, `lorentz:`, `dual(`, `convexify(` or `gdual(`"))
    }

    fn lorentz(&mut self) -> Result<SpaceSpec, SpecError> {
        let start = self.pos;
        let mut g = None;
        let mut w: Option<(&str, Option<f64>, usize)> = None;
        let mut n = None;
        loop {
            self.skip_ws();
            let at = self.pos;
            if self.eat("G=") {
                g = Some(if self.eat("exp") {
                    OrliczFn::ExpMinusOne
                } else if self.eat("pow") {
                    let (k, kat) = self.number()?;
                    OrliczFn::power(k).map_err(|e| SpecError::range(kat, &k.to_string(), e))?
                } else {
                    return Err(self.unexpected("expected `pow<k>` or `exp`"));
                });
            } else if self.eat("w=") {
                let wat = self.pos;
                w = Some(if self.eat("harmonic") {
                    ("harmonic", None, wat)
                } else if self.eat("ones") {
                    ("ones", None, wat)
                } else if self.eat("geom(") {
                    let (r, _) = self.number()?;
                    self.expect(")")?;
                    ("geom", Some(r), wat)
                } else {
                    return Err(self.unexpected("expected `harmonic`, `ones` or `geom(r)`"));
                });
            } else if self.eat("n=") {
                let nat = self.pos;
                let tok = self.token().trim_end();
                let v: usize = tok
                    .parse()
                    .map_err(|_| self.unexpected("expected a positive integer"))?;
                self.pos += tok.len();
                n = Some((v, nat));
            } else {
                return Err(SpecError::syntax(
                    at,
                    self.token(),
                    "expected `G=`, `w=` or `n=`",
                ));
            }
            // a comma continues the field list only if a field follows
            let save = self.pos;
            if self.eat(",") {
                self.skip_ws();
                let r = self.rest();
                if r.starts_with("G=") || r.starts_with("w=") || r.starts_with("n=") {
                    continue;
                }
            }
            self.pos = save;
            break;
        }
        let missing =
            |what: &str| SpecError::syntax(start, "", &format!("lorentz spec needs `{what}`"));
        let g = g.ok_or_else(|| missing("G="))?;
        let (family, r, wat) = w.ok_or_else(|| missing("w="))?;
        let (n, nat) = n.ok_or_else(|| missing("n="))?;
        if n == 0 {
            return Err(SpecError::syntax(nat, "0", "dimension must be positive"));
        }
        let weights = match family {
            "harmonic" => WeightSeq::harmonic(n),
            "ones" => WeightSeq::ones(n),
            _ => WeightSeq::geometric(r.unwrap_or(f64::NAN), n),
        }
        .map_err(|e| SpecError::range(wat, family, e))?;
        SpaceSpec::orlicz_lorentz(g, weights).map_err(|e| SpecError::range(start, "lorentz", e))
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn basic_forms() {
        assert_eq!(parse_space("lp:2").unwrap(), SpaceSpec::l2());
        assert_eq!(parse_space(" lp:inf ").unwrap(), SpaceSpec::linf());
        assert_eq!(
            parse_space("dual(lp:1)").unwrap(),
            SpaceSpec::kothe_dual(SpaceSpec::l1())
        );
        let c = parse_space("convexify(lp:1,p=2)").unwrap();
        assert_eq!(c.to_string(), "convexify(lp:1,p=2)");
    }

    #[test]
    fn exponent_below_one_is_a_range_error() {
        let e = parse_space("lp:0.5").unwrap_err();
        assert!(e.is_range());
        assert_eq!(e.pos, 3);
    }

    #[test]
    fn lorentz_and_pairs() {
        let s = parse_space("lorentz:G=pow2,w=harmonic,n=5").unwrap();
        assert_eq!(s.to_string(), "lorentz:G=pow2,w=harmonic,n=5");
        let s = parse_space("lorentz:n=3,w=geom(0.5),G=exp").unwrap();
        assert_eq!(s.to_string(), "lorentz:G=exp,w=geom(0.5),n=3");
        let (e, f) = parse_pair("lorentz:G=pow2,w=ones,n=4,dual(lp:3)").unwrap();
        assert_eq!(e.to_string(), "lorentz:G=pow2,w=ones,n=4");
        assert_eq!(f.to_string(), "dual(lp:3)");
        let (e, f) = parse_pair("gdual(lp:4,lp:2),lp:2").unwrap();
        assert_eq!(e.to_string(), "gdual(lp:4,lp:2)");
        assert_eq!(f, SpaceSpec::l2());
    }

    #[test]
    fn canonical_text_round_trips() {
        for t in [
            "lp:1.5",
            "dual(dual(lp:3))",
            "gdual(lp:inf,lp:2)",
            "convexify(lorentz:G=pow1.5,w=harmonic,n=6,p=3)",
        ] {
            let s = parse_space(t).unwrap();
            assert_eq!(parse_space(&s.to_string()).unwrap(), s, "{t}");
        }
    }

    #[test]
    fn errors_name_token_and_position() {
        let e = parse_space("lq:2").unwrap_err();
        assert_eq!((e.pos, e.token.as_str()), (0, "lq:2"));
        let e = parse_space("dual(lp:2").unwrap_err();
        assert_eq!(e.pos, 9);
        let e = parse_space("lorentz:G=pow2,w=harm,n=3").unwrap_err();
        assert_eq!((e.pos, e.token.as_str()), (17, "harm"));
        let e = parse_space("lp:2)").unwrap_err();
        assert_eq!((e.pos, e.token.as_str()), (4, ")"));
        assert!(parse_space("lorentz:G=pow2,n=3").is_err());
        assert!(parse_space("").is_err());
        assert!(parse_pair("lp:2").is_err());
        assert!(parse_space("lorentz:G=pow0.5,w=ones,n=2")
            .unwrap_err()
            .is_range());
    }
}
