//! Morphism classification: epic, monic, split epic, split monic, regular
//! epic and regular monic in each of the twelve categories.
//!
//! Exact characterizations are used where they are known. Elsewhere the
//! known implications give partial answers and the rest is UNDECIDED with
//! the note "open".

pub mod search;
pub mod strong;

use std::collections::HashSet;

use crate::alphabet::{all_words, Sym};
use crate::analysis::{
    constituents, is_injective, is_injective_on_periodic, is_mixing, is_peric, is_preinjective, is_sft,
    is_surjective, kernel_set, period_inclusion, SubshiftRelation,
};
use crate::category::{CategoryTag, Restriction};
use crate::colimits::coequalizer_id;
use crate::error::{Error, Result};
use crate::limits::connecting_map;
use crate::shift::{BlockMap, PeriodicPoint, Presentation};
use crate::verdict::{Caps, Evidence, Verdict};

pub use search::{find_retraction, find_section};
pub use strong::{strong_condition, strong_condition_upto, StrongCase, StrongConditionReport, StrongFailure};

const OPEN: &str = "open";

fn budget_to_undecided(r: Result<Verdict>) -> Result<Verdict> {
    match r {
        Err(Error::Budget { needed, budget }) => {
            Ok(Verdict::undecided().bound(format!("budget {budget}")).note(format!("search needed more than {needed} steps")))
        }
        other => other,
    }
}

fn no_because(v: Verdict, why: &str) -> Verdict {
    let mut out = Verdict::no().note(why.to_string());
    out.witness = v.witness;
    out
}

/// Inverse of a bijective map, searched up to `radius_cap`.
fn inverse(f: &BlockMap, radius_cap: usize) -> Result<Option<BlockMap>> {
    let id = BlockMap::identity(f.source());
    Ok(match connecting_map(f, &id, radius_cap)? {
        Some(u) => Some(u.retarget(f.target(), f.source())?.minimal_window()),
        None => None,
    })
}

fn iso_verdict(f: &BlockMap, caps: &Caps) -> Result<Verdict> {
    Ok(match inverse(f, caps.radius_cap)? {
        Some(g) => Verdict::yes().certificate(Evidence::Map(g)).note("bijective"),
        None => Verdict::yes().note("bijective").bound(format!("inverse radius > {}", caps.radius_cap)),
    })
}

fn endo_level(cat: CategoryTag) -> bool {
    cat.level == 1 && cat.restriction != Restriction::K
}

/// Two distinct uniform points with the same image.
fn uniform_collision(f: &BlockMap) -> Option<(Sym, Sym)> {
    let uni = f.source().uniform_points();
    for (i, &a) in uni.iter().enumerate() {
        for &b in &uni[i + 1..] {
            if f.rule(&vec![a; f.width()]) == f.rule(&vec![b; f.width()]) {
                return Some((a, b));
            }
        }
    }
    None
}

/// An off-diagonal periodic pair inside `c`, looked for up to `max_n`.
fn off_diagonal_pair(rel: &SubshiftRelation, c: &Presentation, max_n: usize) -> Result<Option<Evidence>> {
    for n in 1..=max_n {
        for w in c.periodic_words(n)? {
            if w.iter().any(|&s| !rel.is_diagonal_symbol(s)) {
                let (x, y) = rel.unzip(&w);
                return Ok(Some(Evidence::PeriodicPair(
                    rel.left().alphabet().clone(),
                    PeriodicPoint::new(x),
                    PeriodicPoint::new(y),
                )));
            }
        }
    }
    Ok(None)
}

/// Epic is surjective in every category.
pub fn is_epic(f: &BlockMap, cat: CategoryTag) -> Result<Verdict> {
    cat.check_morphism(f)?;
    is_surjective(f)
}

/// Monicness by category.
pub fn is_monic(f: &BlockMap, cat: CategoryTag) -> Result<Verdict> {
    cat.check_morphism(f)?;
    let inj = is_injective(f)?;
    if inj.is_yes() {
        return Ok(Verdict::yes().note("injective"));
    }
    use Restriction::*;
    match (cat.restriction, cat.level) {
        (K, 2) | (K, 3) | (T, 2) => Ok(no_because(inj, "not injective")),
        (T, 3) => {
            let ipp = is_injective_on_periodic(f)?;
            Ok(if ipp.is_yes() { Verdict::yes().note("injective on periodic points") } else { no_because(ipp, "not injective on periodic points") })
        }
        (P, level) => {
            let pre = is_preinjective(f)?;
            if pre.is_yes() {
                return Ok(Verdict::yes().note("preinjective"));
            }
            if level <= 2 {
                return Ok(no_because(pre, "not preinjective"));
            }
            if is_injective_on_periodic(f)?.is_yes() {
                return Ok(Verdict::yes().note("injective on periodic points"));
            }
            Ok(Verdict::undecided().note(OPEN))
        }
        (M, level) => {
            if let Some((a, b)) = uniform_collision(f) {
                return Ok(Verdict::no()
                    .witness(Evidence::PeriodicPair(
                        f.source().alphabet().clone(),
                        PeriodicPoint::new(vec![a]),
                        PeriodicPoint::new(vec![b]),
                    ))
                    .note("not injective on uniform points"));
            }
            match level {
                1 => {
                    let pre = is_preinjective(f)?;
                    Ok(if pre.is_no() { no_because(pre, "not preinjective") } else { Verdict::undecided().note(OPEN) })
                }
                2 => monic_m2(f),
                _ => monic_m3(f),
            }
        }
        (K, 1) | (T, 1) => {
            let pre = is_preinjective(f)?;
            Ok(if pre.is_no() { no_because(pre, "not preinjective") } else { Verdict::undecided().note(OPEN) })
        }
        _ => unreachable!("levels are 1, 2, 3"),
    }
}

fn witness_depth(c: &Presentation) -> usize {
    2 * c.cover().n() + 2
}

/// Not monic iff some mixing constituent of `Ker f` differs from `Δ`.
fn monic_m2(f: &BlockMap) -> Result<Verdict> {
    let k = kernel_set(f)?;
    let diag = SubshiftRelation::diagonal(f.source());
    for c in constituents(k.presentation())? {
        if c.same_shift(diag.presentation()) || !is_mixing(&c)? {
            continue;
        }
        let mut v = Verdict::no().note("the kernel has a mixing constituent other than the diagonal");
        v.witness = off_diagonal_pair(&k, &c, witness_depth(&c))?;
        return Ok(v);
    }
    Ok(Verdict::yes().note("the diagonal is the only mixing constituent of the kernel"))
}

/// Searches the kernel for mixing subshifts off the diagonal among fixed
/// pairs and mixing constituents. Non-mixing SFT constituents contain no
/// mixing subshift, which settles YES when every other constituent is one.
fn monic_m3(f: &BlockMap) -> Result<Verdict> {
    let k = kernel_set(f)?;
    let kp = k.presentation();
    for s in kp.uniform_points() {
        if !k.is_diagonal_symbol(s) {
            let (a, b) = k.split(s);
            return Ok(Verdict::no()
                .witness(Evidence::PeriodicPair(
                    f.source().alphabet().clone(),
                    PeriodicPoint::new(vec![a]),
                    PeriodicPoint::new(vec![b]),
                ))
                .note("the kernel has an off-diagonal fixed pair"));
        }
    }
    let diag = SubshiftRelation::diagonal(f.source());
    let mut unknown = false;
    for c in constituents(kp)? {
        if c.same_shift(diag.presentation()) {
            continue;
        }
        if is_mixing(&c)? {
            let mut v = Verdict::no().note("the kernel has a mixing constituent other than the diagonal");
            v.witness = off_diagonal_pair(&k, &c, witness_depth(&c))?;
            return Ok(v);
        }
        if !is_sft(&c).is_yes() {
            unknown = true;
        }
    }
    Ok(if unknown {
        Verdict::undecided().note("a non-mixing sofic constituent of the kernel may contain a mixing subshift")
    } else {
        Verdict::yes().note("every other constituent of the kernel is a non-mixing SFT")
    })
}

/// Split epicness: surjectivity, the strong periodic point condition up to
/// `p_cap`, then a section search up to `radius_cap`.
pub fn is_split_epic(f: &BlockMap, cat: CategoryTag, caps: &Caps) -> Result<Verdict> {
    cat.check_morphism(f)?;
    let sur = is_surjective(f)?;
    if sur.is_no() {
        return Ok(no_because(sur, "not surjective"));
    }
    let inj = is_injective(f)?;
    if inj.is_yes() {
        return iso_verdict(f, caps);
    }
    if endo_level(cat) {
        return Ok(no_because(inj, "split epics of this category are bijective"));
    }
    let (x, y) = (f.source(), f.target());
    if is_sft(x).is_yes() && is_mixing(x)? && !(is_sft(y).is_yes() && is_mixing(y)?) {
        return Ok(Verdict::no().note("the source is a mixing SFT but the target is not"));
    }
    let mut notes = Vec::new();
    match strong_condition_upto(f, caps.p_cap, caps.budget) {
        Ok(r) => {
            if let Some(fail) = r.failure {
                return Ok(Verdict::no()
                    .witness(Evidence::Strong(Box::new(fail)))
                    .note("the strong periodic point condition fails"));
            }
            notes.push(format!("the strong periodic point condition holds for p ≤ {}", caps.p_cap));
        }
        Err(Error::Budget { .. }) => notes.push("the strong periodic point condition ran out of budget".to_string()),
        Err(e) => return Err(e),
    }
    for r in 0..=caps.radius_cap {
        match find_section(f, r, cat.pointed(), caps.budget) {
            Ok(Some(g)) => return Ok(Verdict::yes().certificate(Evidence::Map(g)).note("section found")),
            Ok(None) => {}
            Err(Error::Budget { .. }) => {
                notes.push(format!("section search ran out of budget at radius {r}"));
                break;
            }
            Err(e) => return Err(e),
        }
    }
    if !is_sft(x).is_yes() {
        notes.push("the source is not of finite type, where the condition is not sufficient".to_string());
    }
    Ok(Verdict::undecided().bound(format!("p ≤ {}, radius ≤ {}", caps.p_cap, caps.radius_cap)).note(notes.join("; ")))
}

/// Split monicness: injectivity and pericity are necessary; exact in
/// (M/P)2; elsewhere a retraction search.
pub fn is_split_monic(f: &BlockMap, cat: CategoryTag, caps: &Caps) -> Result<Verdict> {
    cat.check_morphism(f)?;
    let inj = is_injective(f)?;
    if inj.is_no() {
        return Ok(no_because(inj, "not injective"));
    }
    let sur = is_surjective(f)?;
    if sur.is_yes() {
        return iso_verdict(f, caps);
    }
    if endo_level(cat) {
        return Ok(no_because(sur, "split monics of this category are bijective"));
    }
    let per = is_peric(f)?;
    if per.is_no() {
        return Ok(no_because(per, "not peric"));
    }
    let mut notes = Vec::new();
    for r in 0..=caps.radius_cap {
        match find_retraction(f, r, cat.pointed(), caps.budget) {
            Ok(Some(h)) => return Ok(Verdict::yes().certificate(Evidence::Map(h)).note("retraction found")),
            Ok(None) => {}
            Err(Error::Budget { .. }) => {
                notes.push(format!("retraction search ran out of budget at radius {r}"));
                break;
            }
            Err(e) => return Err(e),
        }
    }
    if cat.level == 2 && matches!(cat.restriction, Restriction::M | Restriction::P) {
        return Ok(Verdict::yes()
            .bound(format!("retraction radius > {}", caps.radius_cap))
            .note("injective and peric; retraction not constructed"));
    }
    notes.push(OPEN.to_string());
    Ok(Verdict::undecided().bound(format!("radius ≤ {}", caps.radius_cap)).note(notes.join("; ")))
}

/// Symbol permutations of `x` that are automorphisms, identity excluded.
fn symbol_automorphisms(x: &Presentation, limit: usize) -> Vec<BlockMap> {
    let k = x.alphabet().len();
    if k > limit {
        return Vec::new();
    }
    let mut perm: Vec<Sym> = (0..k as Sym).collect();
    let mut out = Vec::new();
    // Heap's algorithm
    let mut c = vec![0usize; k];
    let mut i = 0;
    while i < k {
        if c[i] < i {
            if i % 2 == 0 {
                perm.swap(0, i);
            } else {
                perm.swap(c[i], i);
            }
            if let Ok(h) = BlockMap::new(x, x, 0, 0, |w| perm[w[0] as usize]) {
                if h.image().is_ok_and(|img| img.same_shift(x)) {
                    out.push(h);
                }
            }
            c[i] += 1;
            i = 0;
        } else {
            c[i] = 0;
            i += 1;
        }
    }
    out
}

/// Regular epicness: exact in K2/K3 and P1; constructed coequalizers of
/// `(id, h)` certify YES in T1/M1.
pub fn is_regular_epic(f: &BlockMap, cat: CategoryTag, caps: &Caps) -> Result<Verdict> {
    cat.check_morphism(f)?;
    let sur = is_surjective(f)?;
    if sur.is_no() {
        return Ok(no_because(sur, "not surjective"));
    }
    if cat.restriction == Restriction::K && cat.level >= 2 {
        return Ok(Verdict::yes().note("surjective"));
    }
    let inj = is_injective(f)?;
    if inj.is_yes() {
        return iso_verdict(f, caps);
    }
    if cat.is(Restriction::P, 1) {
        return Ok(no_because(inj, "regular epics of this category are bijective"));
    }
    if cat.level == 1 && matches!(cat.restriction, Restriction::T | Restriction::M) {
        let kf = kernel_set(f)?;
        let mut gens = symbol_automorphisms(f.source(), 6);
        gens.push(f.clone());
        for h in gens {
            let Ok(res) = coequalizer_id(&h, cat, caps) else { continue };
            if !res.is_exists() {
                continue;
            }
            let q = &res.legs[0];
            if kernel_set(q)?.same_relation(&kf) {
                return Ok(Verdict::yes()
                    .certificate(Evidence::Map(h))
                    .note("coequalizer of the identity and the certificate, up to an automorphism"));
            }
        }
    }
    Ok(Verdict::undecided().note(OPEN))
}

/// `Z_m`: the points of `y` all of whose `m`-words occur in `w`.
fn window_closure(w: &Presentation, y: &Presentation, m: usize) -> Result<Presentation> {
    let present: HashSet<Vec<Sym>> = w.words(m)?.into_iter().collect();
    let forbidden = all_words(w.alphabet().len(), m).into_iter().filter(|u| !present.contains(u)).collect();
    y.intersect(&Presentation::from_forbidden(w.alphabet(), forbidden)?)
}

/// Regular monicness: injective with an image cut out of the target by an
/// SFT condition, as the category requires.
pub fn is_regular_monic(f: &BlockMap, cat: CategoryTag, caps: &Caps) -> Result<Verdict> {
    cat.check_morphism(f)?;
    let inj = is_injective(f)?;
    if inj.is_no() {
        return Ok(no_because(inj, "not injective"));
    }
    let sur = is_surjective(f)?;
    if sur.is_yes() {
        return iso_verdict(f, caps);
    }
    if cat.level == 1 {
        return Ok(if cat.restriction == Restriction::K {
            Verdict::undecided().note(OPEN)
        } else {
            no_because(sur, "regular monics of this category are bijective")
        });
    }
    let img = f.image()?;
    let img_sft = is_sft(&img);
    if img_sft.is_yes() {
        let mut v = Verdict::yes().note("injective with an image of finite type");
        v.certificate = img_sft.certificate;
        return Ok(v);
    }
    let y = f.target();
    if is_sft(y).is_yes() {
        let mut v = Verdict::no().note("the image is not of finite type inside a target of finite type");
        v.witness = img_sft.witness;
        return Ok(v);
    }
    let restrictive = cat.level == 3 && cat.restriction != Restriction::K;
    for m in 1..=caps.window_cap {
        let z = window_closure(&img, y, m)?;
        let found = if !restrictive {
            z.same_shift(&img)
        } else {
            let cs = constituents(&z)?;
            let mut has_img = false;
            let mut others_ok = true;
            for c in cs {
                if c.same_shift(&img) {
                    has_img = true;
                } else if cat.restriction == Restriction::T || is_mixing(&c)? || !is_sft(&c).is_yes() {
                    others_ok = false;
                }
            }
            has_img && others_ok
        };
        if found {
            return Ok(Verdict::yes()
                .certificate(Evidence::Object(z))
                .note(format!("cut out of the target by its {m}-words")));
        }
    }
    Ok(Verdict::undecided().bound(format!("window ≤ {}", caps.window_cap)))
}

/// One row of the classification table.
#[derive(Clone, Debug)]
pub struct Classification {
    pub category: CategoryTag,
    pub epic: Verdict,
    pub monic: Verdict,
    pub split_epic: Verdict,
    pub split_monic: Verdict,
    pub regular_epic: Verdict,
    pub regular_monic: Verdict,
    pub injective: Verdict,
    pub preinjective: Verdict,
    pub injective_on_periodic: Verdict,
    pub peric: Verdict,
}

impl Classification {
    /// `(name, verdict)` pairs in table order.
    pub fn entries(&self) -> Vec<(&'static str, &Verdict)> {
        vec![
            ("epic", &self.epic),
            ("monic", &self.monic),
            ("split-epic", &self.split_epic),
            ("split-monic", &self.split_monic),
            ("regular-epic", &self.regular_epic),
            ("regular-monic", &self.regular_monic),
            ("injective", &self.injective),
            ("preinjective", &self.preinjective),
            ("injective-on-periodic", &self.injective_on_periodic),
            ("peric", &self.peric),
        ]
    }

    /// Implications that hold in every category: split epic ⇒ regular
    /// epic ⇒ epic, split monic ⇒ monic, regular monic ⇒ monic.
    pub fn lattice_violation(&self) -> Option<&'static str> {
        let a = |v: &Verdict| v.answer;
        let implies = |p: &Verdict, q: &Verdict| !(a(p).is_yes() && a(q).is_no());
        if !implies(&self.split_epic, &self.regular_epic) {
            return Some("split epic but not regular epic");
        }
        if !implies(&self.regular_epic, &self.epic) || !implies(&self.split_epic, &self.epic) {
            return Some("regular epic but not epic");
        }
        if !implies(&self.split_monic, &self.monic) || !implies(&self.split_monic, &self.regular_monic) {
            return Some("split monic but not monic");
        }
        if !implies(&self.regular_monic, &self.monic) {
            return Some("regular monic but not monic");
        }
        None
    }
}

/// Runs all checks for one category; independent checks run in parallel.
pub fn classify(f: &BlockMap, cat: CategoryTag, caps: &Caps) -> Result<Classification> {
    cat.check_morphism(f)?;
    let ((epic, monic), ((split_epic, split_monic), (regular_epic, regular_monic))) = rayon::join(
        || (is_epic(f, cat), is_monic(f, cat)),
        || {
            rayon::join(
                || (budget_to_undecided(is_split_epic(f, cat, caps)), budget_to_undecided(is_split_monic(f, cat, caps))),
                || {
                    (
                        budget_to_undecided(is_regular_epic(f, cat, caps)),
                        budget_to_undecided(is_regular_monic(f, cat, caps)),
                    )
                },
            )
        },
    );
    let mut row = Classification {
        category: cat,
        epic: epic?,
        monic: monic?,
        split_epic: split_epic?,
        split_monic: split_monic?,
        regular_epic: regular_epic?,
        regular_monic: regular_monic?,
        injective: is_injective(f)?,
        preinjective: is_preinjective(f)?,
        injective_on_periodic: is_injective_on_periodic(f)?,
        peric: is_peric(f)?,
    };
    // a split epi is the coequalizer of the identity and g ∘ f
    if row.split_epic.is_yes() && !row.regular_epic.is_yes() {
        row.regular_epic = Verdict::yes().note("split epic");
    }
    // a split mono is the equalizer of the identity and f ∘ h
    if row.split_monic.is_yes() && !row.regular_monic.is_yes() {
        row.regular_monic = Verdict::yes().note("split monic");
    }
    Ok(row)
}

/// Whether some block map `z → y` exists. Exact when `y` is a mixing SFT;
/// otherwise only the period condition is tested.
pub fn exists_morphism(z: &Presentation, y: &Presentation) -> Result<Verdict> {
    if z.is_empty() {
        return Ok(Verdict::yes().note("the empty map"));
    }
    let per = period_inclusion(z, y)?;
    if per.is_no() {
        return Ok(per);
    }
    if is_sft(y).is_yes() && is_mixing(y)? {
        Ok(Verdict::yes().note("the target is a mixing SFT and the periods fit; no map is constructed"))
    } else {
        Ok(Verdict::undecided().note("periods fit, which is only necessary when the target is not a mixing SFT"))
    }
}
