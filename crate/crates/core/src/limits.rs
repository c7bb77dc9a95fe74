//! Finite limits, coproducts, images and unions of subobjects, per category.

use crate::alphabet::{Alphabet, Sym};
use crate::analysis::structure::{constituents, is_mixing, is_sft, sft_report};
use crate::analysis::{equalizer_set, fiber_product, is_injective, is_surjective, kernel_set, periods, SubshiftRelation};
use crate::category::{CategoryTag, Restriction};
use crate::error::{invalid, mismatch, Result};
use crate::shift::{BlockMap, Presentation};

#[derive(Clone, Debug, PartialEq, Eq)]
pub enum LimitStatus {
    Exists,
    NotExists(String),
    Undecided(String),
}

#[derive(Clone, Debug)]
pub struct LimitResult {
    pub status: LimitStatus,
    pub object: Option<Presentation>,
    pub legs: Vec<BlockMap>,
    /// Supporting objects for a negative answer (for instance a strictly
    /// decreasing chain of approximations).
    pub witnesses: Vec<Presentation>,
}

impl LimitResult {
    pub fn exists(object: Presentation, legs: Vec<BlockMap>) -> LimitResult {
        LimitResult { status: LimitStatus::Exists, object: Some(object), legs, witnesses: Vec::new() }
    }

    pub fn not_exists(reason: impl Into<String>) -> LimitResult {
        LimitResult { status: LimitStatus::NotExists(reason.into()), object: None, legs: Vec::new(), witnesses: Vec::new() }
    }

    pub fn undecided(reason: impl Into<String>) -> LimitResult {
        LimitResult { status: LimitStatus::Undecided(reason.into()), object: None, legs: Vec::new(), witnesses: Vec::new() }
    }

    pub fn is_exists(&self) -> bool {
        self.status == LimitStatus::Exists
    }

    pub fn object(&self) -> &Presentation {
        self.object.as_ref().expect("limit object present")
    }
}

/// The symbol-identity map from a subshift into a larger one over the same
/// alphabet.
pub fn inclusion(sub: &Presentation, sup: &Presentation) -> Result<BlockMap> {
    if sub.alphabet() != sup.alphabet() {
        return mismatch("inclusion between different alphabets");
    }
    BlockMap::new(sub, sup, 0, 0, |w| w[0])
}

fn with_point_of(x: &Presentation, from: &Presentation) -> Result<Presentation> {
    match from.point() {
        Some(p) if x.contains_periodic(&[p]) => x.with_point(p),
        _ => Ok(x.clone()),
    }
}

/// The trivial subshift `{∞0∞}`, pointed in P categories.
pub fn trivial_object(cat: CategoryTag) -> Presentation {
    let t = Presentation::trivial();
    if cat.pointed() {
        t.with_point(0).expect("trivial shift has its point")
    } else {
        t
    }
}

pub fn terminal(cat: CategoryTag) -> LimitResult {
    if cat.level == 1 {
        return LimitResult::not_exists("level-1 categories only have endomorphisms");
    }
    LimitResult::exists(trivial_object(cat), Vec::new())
}

pub fn initial(cat: CategoryTag) -> LimitResult {
    if cat.level == 1 {
        return LimitResult::not_exists("level-1 categories only have endomorphisms");
    }
    if cat.pointed() {
        // the trivial pointed shift is a zero object
        return LimitResult::exists(trivial_object(cat), Vec::new());
    }
    LimitResult::exists(Presentation::empty(&Alphabet::numeric(1)), Vec::new())
}

/// The map from the trivial shift (or any object) to `y` with constant
/// value `s`.
pub fn constant_map(x: &Presentation, y: &Presentation, s: Sym) -> Result<BlockMap> {
    BlockMap::constant(x, y, s)
}

/// `X × Y` with its projections.
pub fn product(x: &Presentation, y: &Presentation) -> Result<LimitResult> {
    let r = SubshiftRelation::product(x, y)?;
    let mut p = r.presentation().clone();
    if let (Some(a), Some(b)) = (x.point(), y.point()) {
        p = p.with_point(r.pair(a, b))?;
    }
    let r = SubshiftRelation::new(p.clone(), x, y)?;
    let (p1, p2) = r.projections()?;
    Ok(LimitResult::exists(p, vec![p1, p2]))
}

/// Product in a category; level 1 has none.
pub fn product_in(x: &Presentation, y: &Presentation, cat: CategoryTag) -> Result<LimitResult> {
    if cat.level == 1 {
        return Ok(LimitResult::not_exists("level-1 categories only have endomorphisms"));
    }
    product(x, y)
}

/// The pairing `w ↦ (a(w), b(w))` into a relation presentation `target`
/// over the product of the targets' alphabets.
pub fn pairing(a: &BlockMap, b: &BlockMap, target: &Presentation) -> Result<BlockMap> {
    if !a.source().same_shift(b.source()) {
        return mismatch("pairing of maps with different sources");
    }
    let m = a.memory().max(b.memory());
    let an = a.anticipation().max(b.anticipation());
    let (ap, bp) = (a.padded(m, an)?, b.padded(m, an)?);
    let k = b.target().alphabet().len() as Sym;
    BlockMap::new(a.source(), target, m, an, |w| ap.rule(w).unwrap() * k + bp.rule(w).unwrap())
}

fn disjoint_alphabet(a: &Alphabet, b: &Alphabet) -> Result<(Alphabet, Vec<String>)> {
    let mut names: Vec<String> = a.names().to_vec();
    let mut right = Vec::new();
    for n in b.names() {
        let mut m = n.clone();
        while names.contains(&m) || b.names().iter().any(|o| o == &m && o != n) {
            m.push('\'');
        }
        names.push(m.clone());
        right.push(m);
    }
    Ok((Alphabet::new(&names)?, right))
}

/// Symbol-disjoint union `X ∪̇ Y` with its injections.
pub fn coproduct(x: &Presentation, y: &Presentation, cat: CategoryTag) -> Result<LimitResult> {
    if cat.level == 1 {
        return Ok(LimitResult::not_exists("level-1 categories only have endomorphisms"));
    }
    if cat.restriction != Restriction::K && !x.is_empty() && !y.is_empty() {
        return Ok(LimitResult::not_exists(format!(
            "a disjoint union of two nonempty shifts is not transitive, so not an object of {cat}"
        )));
    }
    if cat.pointed() {
        return Ok(LimitResult::not_exists("pointed objects are never empty"));
    }
    let (alpha, _) = disjoint_alphabet(x.alphabet(), y.alphabet())?;
    let off = x.alphabet().len() as Sym;
    let (gx, gy) = (x.cover(), y.cover());
    let mut g = gx.clone();
    let base = g.n();
    for _ in 0..gy.n() {
        g.add_node();
    }
    for (u, s, v) in gy.edges() {
        g.add_edge(base + u, off + s, base + v);
    }
    let u = Presentation::from_graph(&alpha, &g);
    let i1 = BlockMap::new(x, &u, 0, 0, |w| w[0])?;
    let i2 = BlockMap::new(y, &u, 0, 0, |w| off + w[0])?;
    Ok(LimitResult::exists(u, vec![i1, i2]))
}

/// Equalizer of a parallel pair, following the rules of each category.
pub fn equalizer(f: &BlockMap, g: &BlockMap, cat: CategoryTag) -> Result<LimitResult> {
    let x = f.source();
    let e = with_point_of(&equalizer_set(f, g)?, x)?;
    let include = |sub: &Presentation| -> Result<LimitResult> {
        let sub = with_point_of(sub, x)?;
        let i = inclusion(&sub, x)?;
        Ok(LimitResult::exists(sub, vec![i]))
    };
    if cat.level == 1 {
        return Ok(if BlockMap::maps_equal(f, g)? {
            LimitResult::exists(x.clone(), vec![BlockMap::identity(x)])
        } else {
            LimitResult::undecided("equalizers of distinct cellular automata are not handled in level 1")
        });
    }
    match cat.restriction {
        Restriction::K => include(&e),
        Restriction::T if cat.level == 2 => {
            if crate::analysis::is_transitive(&e)? {
                include(&e)
            } else {
                Ok(LimitResult::not_exists("the equalizer set is not transitive"))
            }
        }
        Restriction::T => {
            let c = constituents(&e)?;
            match c.len() {
                0 => include(&e),
                1 => include(&c[0]),
                n => Ok(LimitResult::not_exists(format!("the equalizer set has {n} constituents"))),
            }
        }
        Restriction::M | Restriction::P => {
            let mut c = constituents(&e)?;
            if let (true, Some(p)) = (cat.pointed(), x.point()) {
                // pointed subobjects contain the designated point
                c.retain(|k| k.contains_periodic(&[p]));
            }
            let mut mixing = Vec::new();
            let mut unsure = 0;
            for p in &c {
                if is_mixing(p)? {
                    mixing.push(p.clone());
                } else if !is_sft(p).is_yes() && !contains_no_mixing(p)? {
                    unsure += 1;
                }
            }
            if mixing.len() >= 2 {
                return Ok(LimitResult::not_exists(format!(
                    "the equalizer set has {} mixing constituents",
                    mixing.len()
                )));
            }
            if unsure > 0 {
                return Ok(LimitResult::undecided(
                    "a non-mixing constituent of the equalizer set may contain a mixing subshift",
                ));
            }
            match mixing.pop() {
                Some(m) => include(&m),
                None => include(&Presentation::empty(x.alphabet())),
            }
        }
    }
}

/// A transitive shift whose periods avoid some residue class for every
/// modulus beyond a threshold contains no nonempty mixing subshift, since
/// nonempty mixing sofic shifts have all large periods.
fn contains_no_mixing(p: &Presentation) -> Result<bool> {
    let per = periods(p)?;
    Ok(per.residues().len() < per.modulus())
}

/// Fibre product `{(x, y) : f(x) = g(y)}` with its projections.
pub fn pullback(f: &BlockMap, g: &BlockMap) -> Result<LimitResult> {
    let r = fiber_product(f, g)?;
    let mut p = r.presentation().clone();
    if let (Some(a), Some(b)) = (f.source().point(), g.source().point()) {
        p = p.with_point(r.pair(a, b))?;
    }
    let r = SubshiftRelation::new(p.clone(), f.source(), g.source())?;
    let (p1, p2) = r.projections()?;
    Ok(LimitResult::exists(p, vec![p1, p2]))
}

/// Kernel pair: the pullback of `f` along itself, which is `Ker f`.
pub fn kernel_pair(f: &BlockMap) -> Result<LimitResult> {
    pullback(f, f)
}

/// The relation `{(f(x), g(x))}` over the product of the target alphabets.
pub fn graph_relation(f: &BlockMap, g: &BlockMap) -> Result<Presentation> {
    if !f.source().same_shift(g.source()) {
        return mismatch("maps with different sources");
    }
    let m = f.memory().max(g.memory());
    let a = f.anticipation().max(g.anticipation());
    let (fp, gp) = (f.padded(m, a)?, g.padded(m, a)?);
    let wg = crate::shift::WindowGraph::new(f.source(), fp.width())?;
    let k = g.target().alphabet().len() as Sym;
    let lab = wg.relabel(|w| fp.rule(w).unwrap() * k + gp.rule(w).unwrap());
    Ok(Presentation::from_graph(&Alphabet::product(f.target().alphabet(), g.target().alphabet()), &lab))
}

/// The unique `u: f(X) → g(X)` with `u ∘ f = g`, when `Ker f ⊆ Ker g`.
/// `Ok(None)` when the kernel inclusion fails; an error carrying the cap
/// when no radius up to `radius_cap` determines `u`.
pub fn connecting_map(f: &BlockMap, g: &BlockMap, radius_cap: usize) -> Result<Option<BlockMap>> {
    let (kf, kg) = (kernel_set(f)?, kernel_set(g)?);
    if !kf.is_subrelation_of(&kg)? {
        return Ok(None);
    }
    let rel = graph_relation(f, g)?;
    let fx = f.image()?;
    let gx = g.image()?;
    let k = g.target().alphabet().len() as Sym;
    for r in 0..=radius_cap {
        let mut table: std::collections::HashMap<Vec<Sym>, Sym> = std::collections::HashMap::new();
        let mut ok = true;
        for w in rel.words(2 * r + 1)? {
            let y: Vec<Sym> = w.iter().map(|s| s / k).collect();
            let z = w[r] % k;
            if *table.entry(y).or_insert(z) != z {
                ok = false;
                break;
            }
        }
        if ok {
            let u = BlockMap::new(&fx, &gx, r, r, |w| table[w])?;
            return Ok(Some(u));
        }
    }
    Err(crate::error::Error::Invalid(format!(
        "kernel inclusion holds but no radius up to {radius_cap} determines the connecting map"
    )))
}

/// Codomain restriction `e: X → f(X)` and inclusion `m: f(X) → Y`.
pub fn image_factorization(f: &BlockMap, cat: CategoryTag) -> Result<LimitResult> {
    let y = f.target();
    if cat.level == 1 {
        return Ok(if is_surjective(f)?.is_yes() {
            LimitResult::exists(y.clone(), vec![f.clone(), BlockMap::identity(y)])
        } else {
            LimitResult::not_exists("level-1 categories only have endomorphisms, and the map is not onto")
        });
    }
    let img = with_point_of(&f.image()?, y)?;
    if cat.level == 2 && !is_sft(&img).is_yes() {
        let mut res = LimitResult::not_exists("the image is not of finite type, and its finite-type approximations decrease strictly");
        res.witnesses = sft_approximations(&img, 3)?;
        return Ok(res);
    }
    let e = f.retarget(f.source(), &img)?;
    let m = inclusion(&img, y)?;
    Ok(LimitResult::exists(img, vec![e, m]))
}

/// The first `count` distinct SFT approximations `Y_n ⊋ Y_{n+1} ⊋ …` of a
/// sofic shift, `Y_n` forbidding the length-`n` words missing from it.
pub fn sft_approximations(x: &Presentation, count: usize) -> Result<Vec<Presentation>> {
    let k = x.alphabet().len();
    let mut out: Vec<Presentation> = Vec::new();
    let limit = sft_report(x).window.map_or(usize::MAX, |m| m);
    let mut n = 1;
    while out.len() < count && n < limit && n <= 16 {
        let present: std::collections::HashSet<Vec<Sym>> = x.words(n)?.into_iter().collect();
        let forbidden: Vec<Vec<Sym>> =
            crate::alphabet::all_words(k, n).into_iter().filter(|w| !present.contains(w)).collect();
        let approx = Presentation::from_forbidden(x.alphabet(), forbidden)?;
        if out.last().map_or(true, |p| !p.same_shift(&approx)) {
            out.push(approx);
        }
        n += 1;
    }
    Ok(out)
}

/// Inclusion of `i1(Y) ∪ i2(Z)` into the common codomain.
pub fn subobject_union(i1: &BlockMap, i2: &BlockMap) -> Result<BlockMap> {
    if !i1.target().same_shift(i2.target()) {
        return mismatch("subobjects of different objects");
    }
    if !is_injective(i1)?.is_yes() || !is_injective(i2)?.is_yes() {
        return invalid("subobject union of a map that is not monic");
    }
    let u = i1.image()?.union(&i2.image()?)?;
    inclusion(&u, i1.target())
}
