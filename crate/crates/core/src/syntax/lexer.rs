use num_bigint::BigInt;

use crate::error::{Error, Result};

#[derive(Clone, Debug, PartialEq, Eq)]
pub(crate) enum Tok {
    Num(BigInt),
    Ident(String),
    Sym(char),
    Arrow,
    End,
}

#[derive(Clone, Debug)]
pub(crate) struct Token {
    pub tok: Tok,
    pub pos: usize,
}

pub(crate) fn lex(src: &str) -> Result<Vec<Token>> {
    let bytes = src.as_bytes();
    let mut out = Vec::new();
    let mut j = 0;
    while j < bytes.len() {
        let c = bytes[j] as char;
        if c.is_ascii_whitespace() {
            j += 1;
        } else if c.is_ascii_digit() {
            let start = j;
            while j < bytes.len() && bytes[j].is_ascii_digit() {
                j += 1;
            }
            let n: BigInt = src[start..j].parse().expect("digits");
            out.push(Token {
                tok: Tok::Num(n),
                pos: start,
            });
        } else if c.is_ascii_alphabetic() || c == '_' {
            let start = j;
            while j < bytes.len() && (bytes[j].is_ascii_alphanumeric() || bytes[j] == b'_') {
                j += 1;
            }
            out.push(Token {
                tok: Tok::Ident(src[start..j].to_string()),
                pos: start,
            });
        } else if c == '-' && bytes.get(j + 1) == Some(&b'>') {
            out.push(Token {
                tok: Tok::Arrow,
                pos: j,
            });
            j += 2;
        } else if "+-*/(),[].@".contains(c) {
            out.push(Token {
                tok: Tok::Sym(c),
                pos: j,
            });
            j += 1;
        } else {
            return Err(Error::Parse {
                pos: j,
                msg: format!("unexpected character {c:?}"),
            });
        }
    }
    out.push(Token {
        tok: Tok::End,
        pos: src.len(),
    });
    Ok(out)
}
