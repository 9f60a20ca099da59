//! Line-oriented fixture documents. The grammar is described in `FORMAT.md`.

use std::collections::HashMap;
use std::fmt::{self, Write as _};

use cobarkit_core::coalgebra::{CoalgebraLevel, SimplicialCoalgebra};
use cobarkit_core::simplicial::builtins::{by_name, map_by_name};
use cobarkit_core::simplicial::{Extension, Nondegenerate, SSet, SSetMap, SimplexId, SimplexRef};
use cobarkit_core::sparse::SparseMatrix;
use cobarkit_core::{Field, Scalar};

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct ParseError {
    pub line: usize,
    pub column: usize,
    pub message: String,
}

impl fmt::Display for ParseError {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "line {}, column {}: {}", self.line, self.column, self.message)
    }
}

impl std::error::Error for ParseError {}

#[derive(Clone, Debug)]
pub enum Fixture {
    SSet(SSet),
    Map(SSetMap),
    Coalgebra(SimplicialCoalgebra),
}

impl Fixture {
    pub fn kind(&self) -> &'static str {
        match self {
            Fixture::SSet(_) => "sset",
            Fixture::Map(_) => "map",
            Fixture::Coalgebra(_) => "coalgebra",
        }
    }

    pub fn name(&self) -> &str {
        match self {
            Fixture::SSet(x) => &x.name,
            Fixture::Map(f) => &f.name,
            Fixture::Coalgebra(c) => &c.name,
        }
    }

    /// Runs the validator of the owning module.
    pub fn validate(&self) -> cobarkit_core::Result<()> {
        match self {
            Fixture::SSet(x) => x.validate(),
            Fixture::Map(f) => f.validate(),
            Fixture::Coalgebra(c) => c.validate(),
        }
    }
}

/// Parsed document: named objects in order, plus document parameters.
#[derive(Clone, Debug, Default)]
pub struct Document {
    pub objects: Vec<(String, Fixture)>,
    pub field: Option<Field>,
    pub level: Option<usize>,
}

impl Document {
    /// The last object declared.
    pub fn primary(&self) -> Option<&Fixture> {
        self.objects.last().map(|(_, f)| f)
    }

    pub fn get(&self, name: &str) -> Option<&Fixture> {
        self.objects.iter().rev().find(|(n, _)| n == name).map(|(_, f)| f)
    }
}

#[derive(Clone, Debug)]
struct Token {
    text: String,
    column: usize,
}

fn perr(line: usize, column: usize, message: impl Into<String>) -> ParseError {
    ParseError { line, column, message: message.into() }
}

/// Splits on whitespace outside double quotes and drops `#` comments.
fn tokenize(line: &str, lineno: usize) -> Result<Vec<Token>, ParseError> {
    let mut out = Vec::new();
    let mut cur = String::new();
    let mut start = 0;
    let mut quoted = false;
    let mut escape = false;
    for (col, ch) in line.chars().enumerate() {
        if quoted {
            cur.push(ch);
            if escape {
                escape = false;
            } else if ch == '\\' {
                escape = true;
            } else if ch == '"' {
                quoted = false;
            }
            continue;
        }
        if ch == '#' {
            break;
        }
        if ch.is_whitespace() {
            if !cur.is_empty() {
                out.push(Token { text: std::mem::take(&mut cur), column: start + 1 });
            }
            continue;
        }
        if cur.is_empty() {
            start = col;
        }
        if ch == '"' {
            quoted = true;
        }
        cur.push(ch);
    }
    if quoted {
        return Err(perr(lineno, start + 1, "unterminated quoted label"));
    }
    if !cur.is_empty() {
        out.push(Token { text: cur, column: start + 1 });
    }
    Ok(out)
}

fn unquote(s: &str) -> Option<String> {
    if !s.starts_with('"') {
        return Some(s.to_string());
    }
    let inner = s.strip_prefix('"')?.strip_suffix('"')?;
    let mut out = String::new();
    let mut it = inner.chars();
    while let Some(c) = it.next() {
        if c == '\\' {
            out.push(it.next()?);
        } else if c == '"' {
            return None;
        } else {
            out.push(c);
        }
    }
    Some(out)
}

const SPECIAL: &[char] = &['"', '[', ']', ':', ';', '=', '|', '*', '+', '#', '>', '\\'];

/// Label as written in a document, quoted when needed.
pub fn quote(label: &str) -> String {
    let plain = !label.is_empty()
        && !label.chars().any(|c| c.is_whitespace() || SPECIAL.contains(&c))
        && !label.starts_with(|c: char| c.is_ascii_digit() || c == '-')
        && label != "end";
    if plain {
        return label.to_string();
    }
    let mut out = String::from("\"");
    for c in label.chars() {
        if c == '"' || c == '\\' {
            out.push('\\');
        }
        out.push(c);
    }
    out.push('"');
    out
}

/// Position of the first `ch` outside quotes.
fn find_outside(s: &str, ch: char) -> Option<usize> {
    let mut quoted = false;
    let mut escape = false;
    for (i, c) in s.char_indices() {
        if quoted {
            if escape {
                escape = false;
            } else if c == '\\' {
                escape = true;
            } else if c == '"' {
                quoted = false;
            }
        } else if c == '"' {
            quoted = true;
        } else if c == ch {
            return Some(i);
        }
    }
    None
}

pub fn parse_field(s: &str) -> Option<Field> {
    match s {
        "q" | "Q" => Some(Field::Rationals),
        _ => {
            let p = s.strip_prefix("fp:")?.parse::<u64>().ok()?;
            Field::prime(p).ok()
        }
    }
}

pub fn field_name(f: Field) -> String {
    match f {
        Field::Rationals => "q".into(),
        Field::Prime(p) => format!("fp:{p}"),
    }
}

fn parse_scalar(field: Field, s: &str) -> Option<Scalar> {
    let (n, d) = match s.split_once('/') {
        Some((n, d)) => (n.parse::<i64>().ok()?, d.parse::<i64>().ok()?),
        None => (s.parse::<i64>().ok()?, 1),
    };
    field.ratio(n, d).ok()
}

/// `label`, `[;label]` or `[i>j>…;label]`.
fn parse_face_token(s: &str) -> Option<(Vec<usize>, String)> {
    if let Some(inner) = s.strip_prefix('[') {
        let inner = inner.strip_suffix(']')?;
        let semi = find_outside(inner, ';')?;
        let (degs, label) = (&inner[..semi], &inner[semi + 1..]);
        let degs = if degs.trim().is_empty() {
            Vec::new()
        } else {
            degs.split('>').map(|d| d.trim().parse::<usize>().ok()).collect::<Option<Vec<_>>>()?
        };
        Some((degs, unquote(label)?))
    } else {
        Some((Vec::new(), unquote(s)?))
    }
}

fn face_token(x: &SSet, r: &SimplexRef) -> String {
    let label = quote(x.label(r.base));
    if r.degeneracies.is_empty() {
        label
    } else {
        let d: Vec<String> = r.degeneracies.iter().map(|i| i.to_string()).collect();
        format!("[{};{label}]", d.join(">"))
    }
}

type Labels = Vec<HashMap<String, usize>>;

fn resolve_ref(labels: &Labels, dim: usize, tok: &Token, lineno: usize) -> Result<SimplexRef, ParseError> {
    let (degs, label) =
        parse_face_token(&tok.text).ok_or_else(|| perr(lineno, tok.column, format!("malformed simplex reference `{}`", tok.text)))?;
    let base_dim = dim
        .checked_sub(degs.len())
        .ok_or_else(|| perr(lineno, tok.column, format!("`{}` has too many degeneracies for dimension {dim}", tok.text)))?;
    let index = labels
        .get(base_dim)
        .and_then(|m| m.get(&label))
        .ok_or_else(|| perr(lineno, tok.column, format!("unknown {base_dim}-simplex `{label}` in `{}`", tok.text)))?;
    Ok(SimplexRef { degeneracies: degs, base: SimplexId::new(base_dim, *index) })
}

enum Block {
    SSet { name: String, ext: Extension, level: usize, simplices: Vec<Vec<Nondegenerate>>, labels: Labels },
    Map { name: String, source: Option<SSet>, target: Option<SSet>, images: Vec<(usize, Token, usize, Vec<usize>, SimplexRef)> },
    Coalgebra { name: String, field: Option<Field>, levels: Vec<Vec<String>>, eqs: Vec<(usize, Vec<Token>)> },
}

struct Parser {
    doc: Document,
    block: Option<(usize, Block)>,
    defaults: (Field, usize),
}

fn number(tok: &Token, lineno: usize, what: &str) -> Result<usize, ParseError> {
    tok.text.parse::<usize>().map_err(|_| perr(lineno, tok.column, format!("expected {what}, found `{}`", tok.text)))
}

fn builtin_args(toks: &[Token], lineno: usize, default_level: usize) -> Result<(String, usize), ParseError> {
    let name = toks.first().ok_or_else(|| perr(lineno, 1, "builtin needs a name"))?;
    let mut level = default_level;
    for t in &toks[1..] {
        match t.text.strip_prefix("level=") {
            Some(v) => level = v.parse().map_err(|_| perr(lineno, t.column, format!("bad level `{v}`")))?,
            None => return Err(perr(lineno, t.column, format!("unexpected `{}` after builtin name", t.text))),
        }
    }
    Ok((name.text.clone(), level))
}

impl Parser {
    fn resolve_sset(&self, tok: &Token, lineno: usize) -> Result<SSet, ParseError> {
        match self.doc.get(&tok.text) {
            Some(Fixture::SSet(x)) => Ok(x.clone()),
            Some(other) => Err(perr(lineno, tok.column, format!("`{}` is a {}, not a simplicial set", tok.text, other.kind()))),
            None => {
                let level = self.doc.level.unwrap_or(self.defaults.1);
                by_name(&tok.text, level).map_err(|e| perr(lineno, tok.column, e.to_string()))
            }
        }
    }

    fn field(&self) -> Field {
        self.doc.field.unwrap_or(self.defaults.0)
    }

    fn line(&mut self, lineno: usize, toks: Vec<Token>) -> Result<(), ParseError> {
        let head = toks[0].text.as_str();
        if head == "end" {
            return self.finish_block(lineno);
        }
        if self.block.is_none() {
            return self.top_level(lineno, toks);
        }
        let (_, block) = self.block.as_mut().unwrap();
        match block {
            Block::SSet { simplices, labels, .. } => {
                if head != "simplex" {
                    return Err(perr(lineno, toks[0].column, format!("expected `simplex` or `end`, found `{head}`")));
                }
                let dim = number(toks.get(1).ok_or_else(|| perr(lineno, 1, "simplex needs a dimension"))?, lineno, "a dimension")?;
                let lt = toks.get(2).ok_or_else(|| perr(lineno, 1, "simplex needs a label"))?;
                let label = unquote(&lt.text).ok_or_else(|| perr(lineno, lt.column, "malformed label"))?;
                let mut faces = Vec::new();
                if dim > 0 {
                    match toks.get(3) {
                        Some(t) if t.text == ":" => {}
                        _ => return Err(perr(lineno, lt.column, format!("simplex {label} needs `:` and {} faces", dim + 1))),
                    }
                    let ft = &toks[4..];
                    if ft.len() != dim + 1 {
                        return Err(perr(lineno, lt.column, format!("simplex {label} has {} faces, expected {}", ft.len(), dim + 1)));
                    }
                    for t in ft {
                        faces.push(resolve_ref(labels, dim - 1, t, lineno).map_err(|mut e| {
                            e.message = format!("simplex {label}: {}", e.message);
                            e
                        })?);
                    }
                } else if toks.len() > 3 {
                    return Err(perr(lineno, toks[3].column, "vertices have no faces"));
                }
                if simplices.len() <= dim {
                    simplices.resize_with(dim + 1, Vec::new);
                    labels.resize_with(dim + 1, HashMap::new);
                }
                if labels[dim].insert(label.clone(), simplices[dim].len()).is_some() {
                    return Err(perr(lineno, lt.column, format!("duplicate {dim}-simplex `{label}`")));
                }
                simplices[dim].push(Nondegenerate { label, faces });
                Ok(())
            }
            Block::Map { .. } => self.map_line(lineno, toks),
            Block::Coalgebra { field, levels, eqs, .. } => match head {
                "field" => {
                    let t = toks.get(1).ok_or_else(|| perr(lineno, 1, "field needs a value"))?;
                    *field = Some(parse_field(&t.text).ok_or_else(|| perr(lineno, t.column, format!("unknown field `{}`", t.text)))?);
                    Ok(())
                }
                "basis" => {
                    let t = toks.get(1).ok_or_else(|| perr(lineno, 1, "basis needs a dimension"))?;
                    let dim_text = t.text.strip_suffix(':').unwrap_or(&t.text);
                    let dim = dim_text.parse::<usize>().map_err(|_| perr(lineno, t.column, "expected `basis N:`"))?;
                    if dim != levels.len() {
                        return Err(perr(lineno, t.column, format!("basis {dim} out of order, expected {}", levels.len())));
                    }
                    let mut ls = Vec::new();
                    for t in &toks[2..] {
                        ls.push(unquote(&t.text).ok_or_else(|| perr(lineno, t.column, "malformed label"))?);
                    }
                    levels.push(ls);
                    Ok(())
                }
                "counit" | "coproduct" | "face" | "degeneracy" => {
                    eqs.push((lineno, toks));
                    Ok(())
                }
                _ => Err(perr(lineno, toks[0].column, format!("unknown coalgebra line `{head}`"))),
            },
        }
    }

    fn map_line(&mut self, lineno: usize, toks: Vec<Token>) -> Result<(), ParseError> {
        let head = toks[0].text.clone();
        match head.as_str() {
            "source" | "target" => {
                let t = toks.get(1).ok_or_else(|| perr(lineno, 1, format!("{head} needs a fixture")))?;
                let x = self.resolve_sset(t, lineno)?;
                if let Some((_, Block::Map { source, target, .. })) = self.block.as_mut() {
                    *(if head == "source" { source } else { target }) = Some(x);
                }
                Ok(())
            }
            "image" => {
                let Some((_, Block::Map { source, target, images, .. })) = self.block.as_mut() else { unreachable!() };
                let (Some(src), Some(dst)) = (source.as_ref(), target.as_ref()) else {
                    return Err(perr(lineno, toks[0].column, "image before source and target"));
                };
                if toks.len() != 5 || toks[3].text != "->" {
                    return Err(perr(lineno, toks[0].column, "expected `image DIM LABEL -> REF`"));
                }
                let dim = number(&toks[1], lineno, "a dimension")?;
                let label = unquote(&toks[2].text).ok_or_else(|| perr(lineno, toks[2].column, "malformed label"))?;
                let idx = (0..src.count(dim))
                    .find(|i| src.label(SimplexId::new(dim, *i)) == label)
                    .ok_or_else(|| perr(lineno, toks[2].column, format!("source has no {dim}-simplex `{label}`")))?;
                let labels: Labels =
                    (0..=dim).map(|d| (0..dst.count(d)).map(|i| (dst.label(SimplexId::new(d, i)).to_string(), i)).collect()).collect();
                let r = resolve_ref(&labels, dim, &toks[4], lineno)?;
                images.push((lineno, toks[2].clone(), dim, vec![idx], r));
                Ok(())
            }
            _ => Err(perr(lineno, toks[0].column, format!("expected `source`, `target`, `image` or `end`, found `{head}`"))),
        }
    }

    fn top_level(&mut self, lineno: usize, toks: Vec<Token>) -> Result<(), ParseError> {
        let head = toks[0].text.as_str();
        let arg = |i: usize| toks.get(i).ok_or_else(|| perr(lineno, toks[0].column, format!("`{head}` needs an argument")));
        match head {
            "field" => {
                let t = arg(1)?;
                self.doc.field = Some(parse_field(&t.text).ok_or_else(|| perr(lineno, t.column, format!("unknown field `{}`", t.text)))?);
            }
            "level" => self.doc.level = Some(number(arg(1)?, lineno, "a level")?),
            "builtin" | "builtin:" | "builtin-map" | "builtin-map:" => {
                let (name, level) = builtin_args(&toks[1..], lineno, self.doc.level.unwrap_or(self.defaults.1))?;
                let obj = if head.starts_with("builtin-map") {
                    Fixture::Map(map_by_name(&name, level).map_err(|e| perr(lineno, toks[1].column, e.to_string()))?)
                } else {
                    Fixture::SSet(by_name(&name, level).map_err(|e| perr(lineno, toks[1].column, e.to_string()))?)
                };
                self.doc.objects.push((name, obj));
            }
            "sset" => {
                let name = unquote(&arg(1)?.text).ok_or_else(|| perr(lineno, toks[1].column, "malformed name"))?;
                let (mut ext, mut level) = (Extension::Finite, 0);
                for t in &toks[2..] {
                    match t.text.as_str() {
                        "finite" => ext = Extension::Finite,
                        "fixed" => ext = Extension::Fixed,
                        o if o.starts_with("level=") => level = o[6..].parse().map_err(|_| perr(lineno, t.column, "expected level=N"))?,
                        o => return Err(perr(lineno, t.column, format!("unknown option `{o}`"))),
                    }
                }
                self.block = Some((lineno, Block::SSet { name, ext, level, simplices: vec![Vec::new()], labels: vec![HashMap::new()] }));
            }
            "map" => {
                let name = unquote(&arg(1)?.text).ok_or_else(|| perr(lineno, toks[1].column, "malformed name"))?;
                self.block = Some((lineno, Block::Map { name, source: None, target: None, images: Vec::new() }));
            }
            "coalgebra" => {
                let name = unquote(&arg(1)?.text).ok_or_else(|| perr(lineno, toks[1].column, "malformed name"))?;
                self.block = Some((lineno, Block::Coalgebra { name, field: None, levels: Vec::new(), eqs: Vec::new() }));
            }
            _ => return Err(perr(lineno, toks[0].column, format!("unknown declaration `{head}`"))),
        }
        Ok(())
    }

    fn finish_block(&mut self, lineno: usize) -> Result<(), ParseError> {
        let (start, block) = self.block.take().ok_or_else(|| perr(lineno, 1, "`end` outside a block"))?;
        let (name, obj) = match block {
            Block::SSet { name, ext, level, mut simplices, .. } => {
                if simplices[0].is_empty() {
                    return Err(perr(start, 1, format!("{name} has no vertex")));
                }
                while simplices.len() <= level {
                    simplices.push(Vec::new());
                }
                let x = SSet::new(name.clone(), simplices, ext);
                (name, Fixture::SSet(x))
            }
            Block::Map { name, source, target, images } => {
                let (Some(src), Some(dst)) = (source, target) else {
                    return Err(perr(start, 1, format!("map {name} needs a source and a target")));
                };
                let mut slots: Vec<Vec<Option<SimplexRef>>> = (0..=src.truncation()).map(|d| vec![None; src.count(d)]).collect();
                for (ln, tok, dim, idx, r) in images {
                    if slots.len() <= dim {
                        return Err(perr(ln, tok.column, "image beyond the source truncation"));
                    }
                    let slot = &mut slots[dim][idx[0]];
                    if slot.is_some() {
                        return Err(perr(ln, tok.column, format!("second image for `{}`", tok.text)));
                    }
                    *slot = Some(r);
                }
                // the basepoint goes to the basepoint
                if slots[0][0].is_none() {
                    slots[0][0] = Some(SimplexRef::nondegenerate(SimplexId::BASEPOINT));
                }
                let mut out = Vec::new();
                for (d, row) in slots.into_iter().enumerate() {
                    let mut v = Vec::new();
                    for (i, s) in row.into_iter().enumerate() {
                        v.push(s.ok_or_else(|| {
                            perr(start, 1, format!("map {name} gives no image for {d}-simplex `{}`", src.label(SimplexId::new(d, i))))
                        })?);
                    }
                    out.push(v);
                }
                let f = SSetMap { name: name.clone(), source: src, target: dst, images: out, rule: None };
                (name, Fixture::Map(f))
            }
            Block::Coalgebra { name, field, levels, eqs } => {
                let field = field.unwrap_or_else(|| self.field());
                let c = build_coalgebra(&name, field, levels, eqs)?;
                (name, Fixture::Coalgebra(c))
            }
        };
        self.doc.objects.push((name, obj));
        Ok(())
    }
}

fn build_coalgebra(
    name: &str,
    field: Field,
    labels: Vec<Vec<String>>,
    eqs: Vec<(usize, Vec<Token>)>,
) -> Result<SimplicialCoalgebra, ParseError> {
    if labels.is_empty() {
        return Err(perr(1, 1, format!("coalgebra {name} has no basis")));
    }
    let index: Vec<HashMap<&str, usize>> = labels.iter().map(|ls| ls.iter().enumerate().map(|(i, l)| (l.as_str(), i)).collect()).collect();
    let top = labels.len() - 1;
    let dims: Vec<usize> = labels.iter().map(Vec::len).collect();
    let mut counit = dims.iter().map(|d| vec![field.zero(); *d]).collect::<Vec<_>>();
    let mut coproduct: Vec<Vec<Vec<(usize, usize, Scalar)>>> = dims.iter().map(|d| vec![Vec::new(); *d]).collect();
    let mut faces: Vec<Vec<Vec<(usize, usize, Scalar)>>> =
        (0..=top).map(|n| if n == 0 { Vec::new() } else { vec![Vec::new(); n + 1] }).collect();
    let mut degens: Vec<Vec<Vec<(usize, usize, Scalar)>>> = (0..=top).map(|n| vec![Vec::new(); n]).collect();
    let lookup = |dim: usize, t: &Token, ln: usize| -> Result<usize, ParseError> {
        let l = unquote(&t.text).ok_or_else(|| perr(ln, t.column, "malformed label"))?;
        index
            .get(dim)
            .and_then(|m| m.get(l.as_str()))
            .copied()
            .ok_or_else(|| perr(ln, t.column, format!("unknown basis element `{l}` in dimension {dim}")))
    };
    for (ln, toks) in eqs {
        let head = toks[0].text.as_str();
        let nargs = match head {
            "counit" | "coproduct" => 2,
            _ => 3,
        };
        if toks.len() < nargs + 3 || toks[nargs + 1].text != "=" {
            return Err(perr(ln, toks[0].column, format!("expected `{head} …  = …`")));
        }
        let dim = number(&toks[1], ln, "a dimension")?;
        if dim > top {
            return Err(perr(ln, toks[1].column, format!("dimension {dim} has no basis")));
        }
        let op = if nargs == 3 { number(&toks[2], ln, "an operator index")? } else { 0 };
        let src_dim = if head == "degeneracy" {
            dim.checked_sub(1).ok_or_else(|| perr(ln, toks[1].column, "no degeneracies into dimension 0"))?
        } else {
            dim
        };
        let col = lookup(src_dim, &toks[nargs], ln)?;
        let rhs = &toks[nargs + 2..];
        if head == "counit" {
            let t = &rhs[0];
            counit[dim][col] = parse_scalar(field, &t.text).ok_or_else(|| perr(ln, t.column, format!("bad coefficient `{}`", t.text)))?;
            continue;
        }
        let terms = parse_terms(field, rhs, ln)?;
        match head {
            "coproduct" => {
                for (c, a, b, t) in terms {
                    let b = b.ok_or_else(|| perr(ln, t.column, "coproduct terms are written `c*a|b`"))?;
                    coproduct[dim][col].push((lookup(dim, &a, ln)?, lookup(dim, &b, ln)?, c));
                }
            }
            "face" => {
                if dim == 0 || op > dim {
                    return Err(perr(ln, toks[2].column, format!("no face d_{op} in dimension {dim}")));
                }
                for (c, a, b, t) in terms {
                    if b.is_some() {
                        return Err(perr(ln, t.column, "face terms are written `c*a`"));
                    }
                    faces[dim][op].push((lookup(dim - 1, &a, ln)?, col, c));
                }
            }
            _ => {
                if op >= dim {
                    return Err(perr(ln, toks[2].column, format!("no degeneracy s_{op} into dimension {dim}")));
                }
                for (c, a, b, t) in terms {
                    if b.is_some() {
                        return Err(perr(ln, t.column, "degeneracy terms are written `c*a`"));
                    }
                    degens[dim][op].push((lookup(dim, &a, ln)?, col, c));
                }
            }
        }
    }
    let mut levels = Vec::new();
    for n in 0..=top {
        let mat = |rows: usize, cols: usize, e: Vec<(usize, usize, Scalar)>| {
            SparseMatrix::from_entries(field, rows, cols, e).expect("indices come from the basis")
        };
        levels.push(CoalgebraLevel {
            labels: labels[n].clone(),
            coproduct: std::mem::take(&mut coproduct[n]),
            counit: std::mem::take(&mut counit[n]),
            faces: std::mem::take(&mut faces[n]).into_iter().map(|e| mat(dims[n - 1], dims[n], e)).collect(),
            degeneracies: std::mem::take(&mut degens[n]).into_iter().map(|e| mat(dims[n], dims[n - 1], e)).collect(),
        });
    }
    Ok(SimplicialCoalgebra { name: name.to_string(), field, levels, rule: None })
}

type Term = (Scalar, Token, Option<Token>, Token);

/// `c*a|b + c*a - …`, or `0`.
fn parse_terms(field: Field, toks: &[Token], ln: usize) -> Result<Vec<Term>, ParseError> {
    if toks.len() == 1 && toks[0].text == "0" {
        return Ok(Vec::new());
    }
    let mut out = Vec::new();
    let mut sign = 1i64;
    let mut expect_term = true;
    for t in toks {
        if !expect_term {
            sign = match t.text.as_str() {
                "+" => 1,
                "-" => -1,
                _ => return Err(perr(ln, t.column, format!("expected `+` or `-`, found `{}`", t.text))),
            };
            expect_term = true;
            continue;
        }
        let (coef, rest, off) = match find_outside(&t.text, '*') {
            Some(i) => {
                let c = parse_scalar(field, &t.text[..i]).ok_or_else(|| perr(ln, t.column, format!("bad coefficient in `{}`", t.text)))?;
                (c, &t.text[i + 1..], i + 1)
            }
            None => (field.one(), t.text.as_str(), 0),
        };
        let coef = coef * field.from_i64(sign);
        let tok = |s: &str, o: usize| Token { text: s.to_string(), column: t.column + o };
        let (a, b) = match find_outside(rest, '|') {
            Some(i) => (tok(&rest[..i], off), Some(tok(&rest[i + 1..], off + i + 1))),
            None => (tok(rest, off), None),
        };
        out.push((coef, a, b, t.clone()));
        expect_term = false;
    }
    if expect_term {
        return Err(perr(ln, toks.last().map(|t| t.column).unwrap_or(1), "dangling sign"));
    }
    Ok(out)
}

/// Parses a document without running validators. `defaults` supplies the
/// field and level when the document does not declare them.
pub fn parse_document(text: &str, defaults: (Field, usize)) -> Result<Document, ParseError> {
    let mut p = Parser { doc: Document::default(), block: None, defaults };
    let mut last = 0;
    for (i, line) in text.lines().enumerate() {
        let toks = tokenize(line, i + 1)?;
        last = i + 1;
        if toks.is_empty() {
            continue;
        }
        p.line(i + 1, toks)?;
    }
    if let Some((start, _)) = p.block {
        return Err(perr(start, 1, format!("block opened on line {start} is not closed (end of input at line {last})")));
    }
    if p.doc.objects.is_empty() {
        return Err(perr(last.max(1), 1, "document declares no object"));
    }
    Ok(p.doc)
}

/// Parses and validates; returns the primary (last) object.
pub fn parse_fixture(text: &str, defaults: (Field, usize)) -> Result<Fixture, FixtureError> {
    let doc = parse_document(text, defaults)?;
    let obj = doc.primary().cloned().expect("non-empty document");
    obj.validate().map_err(|e| FixtureError::Invalid { name: obj.name().to_string(), error: e })?;
    Ok(obj)
}

#[derive(Debug)]
pub enum FixtureError {
    Parse(ParseError),
    Invalid { name: String, error: cobarkit_core::Error },
}

impl From<ParseError> for FixtureError {
    fn from(e: ParseError) -> FixtureError {
        FixtureError::Parse(e)
    }
}

impl fmt::Display for FixtureError {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            FixtureError::Parse(e) => write!(f, "parse error at {e}"),
            FixtureError::Invalid { name, error } => write!(f, "{name} failed validation: {error}"),
        }
    }
}

impl std::error::Error for FixtureError {}

/// Labels made unique per dimension by suffixing `~k`.
fn unique_labels(x: &SSet) -> Vec<Vec<String>> {
    x.simplices
        .iter()
        .map(|level| {
            let mut seen: HashMap<&str, usize> = HashMap::new();
            level
                .iter()
                .map(|s| {
                    let k = seen.entry(s.label.as_str()).or_insert(0);
                    *k += 1;
                    if *k == 1 {
                        s.label.clone()
                    } else {
                        format!("{}~{}", s.label, *k - 1)
                    }
                })
                .collect()
        })
        .collect()
}

fn relabeled(x: &SSet) -> SSet {
    let labels = unique_labels(x);
    let mut y = x.clone();
    for (level, ls) in y.simplices.iter_mut().zip(labels) {
        for (s, l) in level.iter_mut().zip(ls) {
            s.label = l;
        }
    }
    y
}

fn write_sset(out: &mut String, name: &str, x: &SSet) {
    let x = relabeled(x);
    let ext = match x.extension {
        Extension::Finite => "",
        _ => " fixed",
    };
    let _ = writeln!(out, "sset {}{ext} level={}", quote(name), x.truncation());
    for (n, level) in x.simplices.iter().enumerate() {
        for s in level {
            if n == 0 {
                let _ = writeln!(out, "  simplex 0 {}", quote(&s.label));
            } else {
                let faces: Vec<String> = s.faces.iter().map(|f| face_token(&x, f)).collect();
                let _ = writeln!(out, "  simplex {n} {} : {}", quote(&s.label), faces.join(" "));
            }
        }
    }
    out.push_str("end\n");
}

pub fn serialize_sset(x: &SSet) -> String {
    let mut out = String::new();
    write_sset(&mut out, &x.name, x);
    out
}

/// Source and target are written as blocks ahead of the map.
pub fn serialize_map(f: &SSetMap) -> String {
    let mut out = String::new();
    let (src, dst) = (relabeled(&f.source), relabeled(&f.target));
    write_sset(&mut out, "source", &src);
    write_sset(&mut out, "target", &dst);
    let _ = writeln!(out, "map {}", quote(&f.name));
    out.push_str("  source source\n  target target\n");
    for (n, row) in f.images.iter().enumerate() {
        for (i, r) in row.iter().enumerate() {
            let _ = writeln!(out, "  image {n} {} -> {}", quote(src.label(SimplexId::new(n, i))), face_token(&dst, r));
        }
    }
    out.push_str("end\n");
    out
}

fn terms_text(terms: Vec<String>) -> String {
    if terms.is_empty() {
        "0".into()
    } else {
        terms.join(" + ")
    }
}

fn unique(ls: &[String]) -> Vec<String> {
    let mut seen: HashMap<&str, usize> = HashMap::new();
    ls.iter()
        .map(|l| {
            let k = seen.entry(l.as_str()).or_insert(0);
            *k += 1;
            if *k == 1 {
                l.clone()
            } else {
                format!("{l}~{}", *k - 1)
            }
        })
        .collect()
}

pub fn serialize_coalgebra(c: &SimplicialCoalgebra) -> String {
    let mut out = String::new();
    let _ = writeln!(out, "coalgebra {}", quote(&c.name));
    let _ = writeln!(out, "  field {}", field_name(c.field));
    let labels: Vec<Vec<String>> = c.levels.iter().map(|l| unique(&l.labels).iter().map(|s| quote(s)).collect()).collect();
    for (n, ls) in labels.iter().enumerate() {
        let _ = writeln!(out, "  basis {n}: {}", ls.join(" "));
    }
    for (n, l) in c.levels.iter().enumerate() {
        for (b, e) in l.counit.iter().enumerate() {
            if !e.is_zero() {
                let _ = writeln!(out, "  counit {n} {} = {e}", labels[n][b]);
            }
        }
        for (b, terms) in l.coproduct.iter().enumerate() {
            let t = terms.iter().filter(|t| !t.2.is_zero()).map(|(x, y, s)| format!("{s}*{}|{}", labels[n][*x], labels[n][*y])).collect();
            let _ = writeln!(out, "  coproduct {n} {} = {}", labels[n][b], terms_text(t));
        }
        for (i, m) in l.faces.iter().enumerate() {
            for col in 0..m.cols() {
                if m.column(col).is_empty() {
                    continue;
                }
                let t = m.column(col).iter().map(|(r, s)| format!("{s}*{}", labels[n - 1][*r])).collect();
                let _ = writeln!(out, "  face {n} {i} {} = {}", labels[n][col], terms_text(t));
            }
        }
        for (j, m) in l.degeneracies.iter().enumerate() {
            for col in 0..m.cols() {
                if m.column(col).is_empty() {
                    continue;
                }
                let t = m.column(col).iter().map(|(r, s)| format!("{s}*{}", labels[n][*r])).collect();
                let _ = writeln!(out, "  degeneracy {n} {j} {} = {}", labels[n - 1][col], terms_text(t));
            }
        }
    }
    out.push_str("end\n");
    out
}

pub fn serialize(f: &Fixture) -> String {
    match f {
        Fixture::SSet(x) => serialize_sset(x),
        Fixture::Map(m) => serialize_map(m),
        Fixture::Coalgebra(c) => serialize_coalgebra(c),
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use cobarkit_core::coalgebra::chains_coalgebra;
    use cobarkit_core::simplicial::builtins::{iota_s1, rp2, s1, sphere2_min};

    const Q: (Field, usize) = (Field::Rationals, 4);

    #[test]
    fn builtin_lines() {
        let Fixture::SSet(x) = parse_fixture("builtin: s1", Q).unwrap() else { panic!() };
        assert_eq!(x, s1(4));
        let Fixture::SSet(x) = parse_fixture("builtin: s1_localized level=4", Q).unwrap() else { panic!() };
        assert_eq!(x.truncation(), 4);
        assert!(matches!(parse_fixture("builtin: nope", Q), Err(FixtureError::Parse(_))));
    }

    #[test]
    fn malformed_face_names_the_simplex() {
        let doc = "sset bad\n  simplex 0 v\n  simplex 1 a : v w\nend\n";
        let e = parse_document(doc, Q).unwrap_err();
        assert_eq!(e.line, 3);
        assert!(e.message.contains("simplex a"), "{e}");
        assert!(e.message.contains("`w`"), "{e}");
        let e = parse_document("sset bad\n  simplex 0 v\n  simplex 1 a : [0;v v\nend\n", Q).unwrap_err();
        assert!(e.message.contains("simplex a"));
    }

    #[test]
    fn document_with_degenerate_faces() {
        let doc = "# rp2 by hand\nsset rp\n  simplex 0 *\n  simplex 1 a : * *\n  simplex 2 alpha : a [0;*] a\nend\n";
        let Fixture::SSet(x) = parse_fixture(doc, Q).unwrap() else { panic!() };
        assert_eq!(x.simplices, rp2(2).simplices);
    }

    #[test]
    fn quoting() {
        for l in ["a", "s0 t", "x\"y", "[01]", "3", ""] {
            let q = quote(l);
            let t = tokenize(&q, 1).unwrap();
            assert_eq!(t.len(), 1, "{q}");
            assert_eq!(unquote(&t[0].text).unwrap(), l);
        }
    }

    #[test]
    fn round_trips() {
        for x in [s1(3), rp2(4), sphere2_min(3)] {
            let Fixture::SSet(y) = parse_fixture(&serialize_sset(&x), Q).unwrap() else { panic!() };
            assert_eq!(y.simplices, x.simplices);
        }
        let f = iota_s1(3);
        let Fixture::Map(g) = parse_fixture(&serialize_map(&f), Q).unwrap() else { panic!() };
        assert_eq!(g.images, f.images);
        for field in [Field::Rationals, Field::Prime(3)] {
            let c = chains_coalgebra(&rp2(3), field, 3).unwrap();
            let Fixture::Coalgebra(d) = parse_fixture(&serialize_coalgebra(&c), Q).unwrap() else { panic!() };
            assert_eq!(d.levels, c.levels);
            assert_eq!(d.field, field);
        }
    }

    #[test]
    fn validation_failures_are_reported() {
        // d_0 d_1 T = b but d_0 d_0 T = a
        let doc = "sset x\n  simplex 0 *\n  simplex 1 a : * *\n  simplex 1 b : * *\n  simplex 2 A : a a a\n  simplex 2 B : b b b\n  simplex 3 T : A B A A\nend\n";
        assert!(parse_document(doc, Q).is_ok());
        assert!(matches!(parse_fixture(doc, Q), Err(FixtureError::Invalid { .. })));
        // several vertices parse; reducedness is reported by the validate command
        let doc = "sset x\n  simplex 0 v\n  simplex 0 w\n  simplex 1 e : w v\nend\n";
        assert!(parse_fixture(doc, Q).is_ok());
        assert!(parse_document("sset x\n  simplex 1 e : v v\nend\n", Q).is_err());
        assert!(parse_document("sset x\nend\n", Q).is_err());
    }
}
