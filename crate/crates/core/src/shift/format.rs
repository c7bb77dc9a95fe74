//! The `.shift` and `.bmap` text formats.
//!
//! ```text
//! alphabet: 0 1
//! kind: sft
//! forbidden: 11
//! ```
//!
//! Lines starting with `#` are comments. Comments must take a whole line,
//! since `#` is a legal symbol.

use std::collections::HashMap;
use std::path::{Path, PathBuf};

use super::blockmap::BlockMap;
use super::presentation::{Presentation, Source};
use crate::alphabet::{Alphabet, Sym, Word};
use crate::error::{Error, Result};

fn perr<T>(line: usize, msg: impl Into<String>) -> Result<T> {
    Err(Error::Parse { line, msg: msg.into() })
}

/// Splits `key: value` lines, skipping blanks and comments.
fn fields(text: &str) -> Result<Vec<(usize, String, String)>> {
    let mut out = Vec::new();
    for (i, raw) in text.lines().enumerate() {
        let line = raw.trim();
        if line.is_empty() || line.starts_with('#') {
            continue;
        }
        let Some((k, v)) = line.split_once(':') else {
            return perr(i + 1, format!("expected `key: value`, got {line:?}"));
        };
        out.push((i + 1, k.trim().to_string(), v.trim().to_string()));
    }
    Ok(out)
}

pub fn parse_shift(text: &str) -> Result<Presentation> {
    let mut alphabet: Option<Alphabet> = None;
    let mut kind: Option<String> = None;
    let mut forbidden: Vec<(usize, String)> = Vec::new();
    let mut nodes: Vec<String> = Vec::new();
    let mut edges: Vec<(usize, String, String, String)> = Vec::new();
    let mut point: Option<(usize, String)> = None;
    for (line, key, val) in fields(text)? {
        match key.as_str() {
            "alphabet" => {
                let names: Vec<&str> = val.split_whitespace().collect();
                if names.is_empty() {
                    return perr(line, "empty alphabet");
                }
                alphabet = Some(Alphabet::new(&names).or_else(|e| perr(line, e.to_string()))?);
            }
            "kind" => {
                if val != "sft" && val != "graph" {
                    return perr(line, format!("unknown kind {val:?}"));
                }
                kind = Some(val);
            }
            "forbidden" => forbidden.extend(val.split_whitespace().map(|w| (line, w.to_string()))),
            "node" => nodes.extend(val.split_whitespace().map(str::to_string)),
            "edge" => {
                let parts: Vec<&str> = val.split_whitespace().collect();
                if parts.len() != 3 {
                    return perr(line, "edge needs `from to label`");
                }
                edges.push((line, parts[0].into(), parts[1].into(), parts[2].into()));
            }
            "point" => point = Some((line, val)),
            _ => return perr(line, format!("unknown key {key:?}")),
        }
    }
    let Some(alphabet) = alphabet else {
        return perr(0, "missing `alphabet:` line");
    };
    let kind = kind.unwrap_or_else(|| if nodes.is_empty() && edges.is_empty() { "sft".into() } else { "graph".into() });
    let pres = if kind == "sft" {
        if !nodes.is_empty() || !edges.is_empty() {
            return perr(0, "graph data in an sft file");
        }
        let mut words = Vec::new();
        for (line, w) in forbidden {
            words.push(alphabet.parse_word(&w).or_else(|e| perr(line, e.to_string()))?);
        }
        Presentation::from_forbidden(&alphabet, words)?
    } else {
        if !forbidden.is_empty() {
            return perr(0, "forbidden words in a graph file");
        }
        let index: HashMap<&str, usize> = nodes.iter().enumerate().map(|(i, n)| (n.as_str(), i)).collect();
        if index.len() != nodes.len() {
            return perr(0, "duplicate node names");
        }
        let mut es = Vec::new();
        for (line, u, v, l) in &edges {
            let (Some(&a), Some(&b)) = (index.get(u.as_str()), index.get(v.as_str())) else {
                return perr(*line, "edge between undeclared nodes");
            };
            let Some(s) = alphabet.index(l) else {
                return perr(*line, format!("edge label {l:?} outside the alphabet"));
            };
            es.push((a, b, s));
        }
        Presentation::from_named_graph(&alphabet, nodes.clone(), es)?
    };
    match point {
        Some((line, p)) => {
            let Some(s) = alphabet.index(&p) else {
                return perr(line, format!("point {p:?} outside the alphabet"));
            };
            pres.with_point(s).or_else(|e| perr(line, e.to_string()))
        }
        None => Ok(pres),
    }
}

/// Renders a presentation. Forbidden-word and named-graph inputs keep their
/// form; derived presentations are written as their canonical cover.
pub fn emit_shift(x: &Presentation) -> String {
    let a = x.alphabet();
    let mut s = format!("alphabet: {}\n", a.names().join(" "));
    match x.source() {
        Source::Forbidden(ws) => {
            s.push_str("kind: sft\n");
            if !ws.is_empty() {
                let list: Vec<String> = ws.iter().map(|w| a.render(w)).collect();
                s.push_str(&format!("forbidden: {}\n", list.join(" ")));
            }
        }
        Source::Graph { nodes, edges } => {
            s.push_str("kind: graph\n");
            if !nodes.is_empty() {
                s.push_str(&format!("node: {}\n", nodes.join(" ")));
            }
            for &(u, v, l) in edges {
                s.push_str(&format!("edge: {} {} {}\n", nodes[u], nodes[v], a.name(l)));
            }
        }
        Source::Derived => {
            s.push_str("kind: graph\n");
            let g = x.cover();
            if g.n() > 0 {
                let names: Vec<String> = (0..g.n()).map(|i| format!("s{i}")).collect();
                s.push_str(&format!("node: {}\n", names.join(" ")));
            }
            for (u, l, v) in g.edges() {
                s.push_str(&format!("edge: s{u} s{v} {}\n", a.name(l)));
            }
        }
    }
    if let Some(p) = x.point() {
        s.push_str(&format!("point: {}\n", a.name(p)));
    }
    s
}

/// A parsed `.bmap` before its objects are loaded.
#[derive(Clone, Debug)]
pub struct BmapText {
    pub source: String,
    pub target: String,
    pub memory: usize,
    pub anticipation: usize,
    pub rules: Vec<(usize, String, String)>,
    pub default: Option<String>,
}

pub fn parse_bmap_text(text: &str) -> Result<BmapText> {
    let mut source = None;
    let mut target = None;
    let mut radius = None;
    let mut memory = None;
    let mut anticipation = None;
    let mut rules = Vec::new();
    let mut default = None;
    let num = |line: usize, v: &str| -> Result<usize> { v.parse().or_else(|_| perr(line, format!("bad number {v:?}"))) };
    for (line, key, val) in fields(text)? {
        match key.as_str() {
            "source" => source = Some(val),
            "target" => target = Some(val),
            "radius" => radius = Some(num(line, &val)?),
            "memory" => memory = Some(num(line, &val)?),
            "anticipation" => anticipation = Some(num(line, &val)?),
            "default" => default = Some(val),
            "rule" => {
                let Some((l, r)) = val.split_once("->") else {
                    return perr(line, "rule needs `word -> symbol`");
                };
                rules.push((line, l.trim().to_string(), r.trim().to_string()));
            }
            _ => return perr(line, format!("unknown key {key:?}")),
        }
    }
    let (Some(source), Some(target)) = (source, target) else {
        return perr(0, "missing `source:` or `target:`");
    };
    let r = radius.unwrap_or(0);
    Ok(BmapText {
        source,
        target,
        memory: memory.unwrap_or(r),
        anticipation: anticipation.unwrap_or(r),
        rules,
        default,
    })
}

/// Builds the map once its objects are known.
pub fn build_bmap(t: &BmapText, source: &Presentation, target: &Presentation) -> Result<BlockMap> {
    let mut entries: HashMap<Word, Sym> = HashMap::new();
    for (line, l, r) in &t.rules {
        let w = source.alphabet().parse_word(l).or_else(|e| perr(*line, e.to_string()))?;
        let Some(s) = target.alphabet().index(r) else {
            return perr(*line, format!("rule value {r:?} outside the target alphabet"));
        };
        if entries.insert(w, s).is_some() {
            return perr(*line, format!("duplicate rule for {l:?}"));
        }
    }
    let default = match &t.default {
        Some(d) => Some(target.alphabet().index(d).ok_or_else(|| Error::Parse {
            line: 0,
            msg: format!("default {d:?} outside the target alphabet"),
        })?),
        None => None,
    };
    BlockMap::from_entries(source, target, t.memory, t.anticipation, &entries, default)
}

pub fn emit_bmap(f: &BlockMap, source_path: &str, target_path: &str) -> String {
    let mut s = format!("source: {source_path}\ntarget: {target_path}\n");
    if f.memory() == f.anticipation() {
        s.push_str(&format!("radius: {}\n", f.memory()));
    } else {
        s.push_str(&format!("memory: {}\nanticipation: {}\n", f.memory(), f.anticipation()));
    }
    let sa = f.source().alphabet();
    let ta = f.target().alphabet();
    for (w, v) in f.entries() {
        s.push_str(&format!("rule: {} -> {}\n", sa.render(&w), ta.name(v)));
    }
    s
}

fn read(path: &Path) -> Result<String> {
    std::fs::read_to_string(path).map_err(|e| Error::Io { path: path.display().to_string(), msg: e.to_string() })
}

pub fn load_shift(path: &Path) -> Result<Presentation> {
    parse_shift(&read(path)?)
}

/// Loads a `.bmap` file; object paths are relative to the file's directory.
pub fn load_bmap(path: &Path) -> Result<BlockMap> {
    let t = parse_bmap_text(&read(path)?)?;
    let dir = path.parent().map(Path::to_path_buf).unwrap_or_else(|| PathBuf::from("."));
    let src = load_shift(&dir.join(&t.source))?;
    let tgt = load_shift(&dir.join(&t.target))?;
    build_bmap(&t, &src, &tgt)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn parse_forbidden_and_graph() {
        let a = parse_shift("alphabet: 0 1\nkind: sft\nforbidden: 11\n").unwrap();
        let b = parse_shift("# golden mean\nalphabet: 0 1\nkind: graph\nnode: a b\nedge: a a 0\nedge: a b 1\nedge: b a 0\n")
            .unwrap();
        assert_eq!(a, b);
    }

    #[test]
    fn hash_symbol_is_not_a_comment() {
        let x = parse_shift("alphabet: 0 1 #\nforbidden: 01 10 ##\n").unwrap();
        assert!(x.contains_word(&[0, 2, 1]));
        assert!(!x.contains_word(&[2, 2]));
    }

    #[test]
    fn round_trips() {
        for text in [
            "alphabet: 0 1\nkind: sft\nforbidden: 11\n",
            "alphabet: a b\nkind: graph\nnode: p q\nedge: p q a\nedge: q p b\npoint: a\n",
        ] {
            let parsed = parse_shift(text);
            if text.contains("point: a") {
                // ∞a∞ is not a point of the 2-cycle
                assert!(parsed.is_err());
                continue;
            }
            let x = parsed.unwrap();
            assert_eq!(emit_shift(&x), text);
            assert_eq!(parse_shift(&emit_shift(&x)).unwrap(), x);
        }
        let derived = Presentation::from_graph(&Alphabet::numeric(2), parse_shift("alphabet: 0 1\nforbidden: 11\n").unwrap().cover());
        assert_eq!(parse_shift(&emit_shift(&derived)).unwrap(), derived);
    }

    #[test]
    fn errors_carry_lines() {
        match parse_shift("alphabet: 0 1\nforbidden: 12\n") {
            Err(Error::Parse { line: 2, .. }) => {}
            other => panic!("unexpected {other:?}"),
        }
        assert!(matches!(parse_shift("alphabet: 0\nbogus\n"), Err(Error::Parse { line: 2, .. })));
    }

    #[test]
    fn bmap_with_default() {
        let x = parse_shift("alphabet: 0 1\n").unwrap();
        let t = parse_bmap_text("source: a\ntarget: a\nmemory: 0\nanticipation: 1\nrule: 11 -> 1\ndefault: 0\n").unwrap();
        let f = build_bmap(&t, &x, &x).unwrap();
        assert_eq!(f.rule(&[1, 1]), Some(1));
        assert_eq!(f.rule(&[1, 0]), Some(0));
        let text = emit_bmap(&f, "a", "a");
        let g = build_bmap(&parse_bmap_text(&text).unwrap(), &x, &x).unwrap();
        assert!(BlockMap::maps_equal(&f, &g).unwrap());
    }
}
