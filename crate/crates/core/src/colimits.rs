//! Coequalizers, local equivalence relations, and kernels and cokernels in
//! the pointed categories.

use std::collections::{BTreeMap, HashMap};

use crate::alphabet::{Alphabet, Sym, Word};
use crate::analysis::structure::{is_mixing, is_sft};
use crate::analysis::{fiber_product, is_injective, is_surjective, kernel_set, SubshiftRelation};
use crate::category::CategoryTag;
use crate::dynamics::{
    chain_transitivity_failure, eventual_periodicity, is_visibly_eventually_periodic, orbit_subshift, power,
    spreading_nilpotent, EventualPeriodicity,
};
use crate::error::{invalid, mismatch, Error, Result};
use crate::limits::{equalizer, graph_relation, trivial_object, LimitResult};
use crate::shift::{BlockMap, PeriodicPoint, Presentation};
use crate::verdict::{Caps, Evidence, Verdict};

/// A window-`n` equivalence `E` on `B_n(X)` and the relation it induces:
/// pairs of points whose aligned `n`-windows are all `E`-related.
#[derive(Clone, Debug)]
pub struct LocalEquivalence {
    pub window: usize,
    class_of: BTreeMap<Word, usize>,
    classes: usize,
    pub relation: SubshiftRelation,
}

impl LocalEquivalence {
    fn from_partition(x: &Presentation, window: usize, class_of: BTreeMap<Word, usize>) -> Result<LocalEquivalence> {
        let classes = class_of.values().max().map_or(0, |m| m + 1);
        let relation = SubshiftRelation::from_window_pairs(x, x, window, |u, v| class_of[u] == class_of[v])?;
        Ok(LocalEquivalence { window, class_of, classes, relation })
    }

    pub fn related(&self, u: &[Sym], v: &[Sym]) -> bool {
        match (self.class_of.get(u), self.class_of.get(v)) {
            (Some(a), Some(b)) => a == b,
            _ => false,
        }
    }

    pub fn class_count(&self) -> usize {
        self.classes
    }

    /// The pairs of `E`, including pairs that never co-occur in the
    /// induced relation.
    pub fn pairs(&self) -> Vec<(Word, Word)> {
        let mut out = Vec::new();
        for (u, a) in &self.class_of {
            for (v, b) in &self.class_of {
                if a == b {
                    out.push((u.clone(), v.clone()));
                }
            }
        }
        out
    }

    /// The block map `x ↦ (class of x_{[i, i+n)})_i` onto its image; its
    /// kernel is the induced relation.
    pub fn quotient_map(&self) -> Result<BlockMap> {
        let x = self.relation.left();
        let labels: Vec<String> = (0..self.classes.max(1)).map(|i| format!("c{i}")).collect();
        let full = Presentation::full(&Alphabet::new(&labels)?);
        let q = BlockMap::unchecked(x, &full, 0, self.window - 1, |w| self.class_of[w] as Sym)?;
        let img = q.image()?;
        q.retarget(x, &img)
    }
}

fn union_find_classes(words: &[Word], pairs: impl IntoIterator<Item = (Word, Word)>) -> BTreeMap<Word, usize> {
    let index: HashMap<&Word, usize> = words.iter().enumerate().map(|(i, w)| (w, i)).collect();
    let mut parent: Vec<usize> = (0..words.len()).collect();
    fn find(p: &mut [usize], mut i: usize) -> usize {
        while p[i] != i {
            p[i] = p[p[i]];
            i = p[i];
        }
        i
    }
    for (u, v) in pairs {
        if let (Some(&a), Some(&b)) = (index.get(&u), index.get(&v)) {
            let (ra, rb) = (find(&mut parent, a), find(&mut parent, b));
            parent[ra.max(rb)] = ra.min(rb);
        }
    }
    let mut ids: HashMap<usize, usize> = HashMap::new();
    let mut out = BTreeMap::new();
    for (i, w) in words.iter().enumerate() {
        let r = find(&mut parent, i);
        let n = ids.len();
        out.insert(w.clone(), *ids.entry(r).or_insert(n));
    }
    out
}

fn cooccurring(r: &SubshiftRelation, n: usize) -> Result<Vec<(Word, Word)>> {
    Ok(r.presentation().words(n)?.iter().map(|w| r.unzip(w)).collect())
}

/// Smallest window-`n` local equivalence on `X` containing `generator`.
pub fn local_closure(generator: &SubshiftRelation, window: usize) -> Result<LocalEquivalence> {
    if window == 0 {
        return invalid("window must be positive");
    }
    let x = generator.left();
    if !x.same_shift(generator.right()) {
        return mismatch("generator is not a relation on a single subshift");
    }
    let words = x.words(window)?;
    let classes = union_find_classes(&words, cooccurring(generator, window)?);
    LocalEquivalence::from_partition(x, window, classes)
}

/// The coarsest window-`n` equivalence compatible with `r`, when it induces
/// exactly `r`.
pub fn local_equivalence_at(r: &SubshiftRelation, n: usize) -> Result<Option<LocalEquivalence>> {
    let le = local_closure(r, n)?;
    Ok(le.relation.same_relation(r).then_some(le))
}

/// Locality of a subshift equivalence relation, searched over windows up to
/// `max_window`. A local relation is induced by the equivalence closure of
/// its co-occurring window pairs, so each window is decided exactly.
pub fn is_local_equivalence(r: &SubshiftRelation, max_window: usize) -> Result<(Verdict, Option<LocalEquivalence>)> {
    if !r.is_reflexive()? {
        return invalid("relation is not reflexive");
    }
    if !r.is_symmetric() {
        return invalid("relation is not symmetric");
    }
    if let Some([a, b, c]) = r.transitivity_failure(3)? {
        let al = r.left().alphabet();
        return Err(Error::Invalid(format!(
            "relation is not transitive: {} ~ {} ~ {}",
            a.render(al),
            b.render(al),
            c.render(al)
        )));
    }
    for n in 1..=max_window {
        if let Some(le) = local_equivalence_at(r, n)? {
            return Ok((Verdict::yes().certificate(Evidence::Window(n)), Some(le)));
        }
    }
    let sft = is_sft(r.presentation());
    if sft.is_no() && is_sft(r.left()).is_yes() {
        return Ok((
            Verdict::no().witness(sft.witness.unwrap()).note("the relation is not a subshift of finite type"),
            None,
        ));
    }
    Ok((Verdict::no().bound(format!("window ≤ {max_window}")), None))
}

/// `{(x, y) : f^i(x) = f^j(y) for some i, j ≤ k}`, contained in every
/// equivalence relation that contains the graph of `f`.
fn orbit_merge_relation(f: &BlockMap, k: usize) -> Result<Presentation> {
    let powers: Vec<BlockMap> = (0..=k).map(|i| power(f, i)).collect::<Result<_>>()?;
    let mut acc: Option<Presentation> = None;
    for a in &powers {
        for b in &powers {
            let r = fiber_product(a, b)?.presentation().clone();
            acc = Some(match acc {
                None => r,
                Some(p) => p.union(&r)?,
            });
        }
    }
    Ok(acc.expect("at least the identity"))
}

/// `f = σ^k` for some `k ≠ 0`.
fn is_shift_power(f: &BlockMap) -> Result<bool> {
    let x = f.source();
    for k in 1..=f.memory().max(f.anticipation()) {
        let left = BlockMap::unchecked(x, x, 0, k, |w| w[k])?;
        let right = BlockMap::unchecked(x, x, k, 0, |w| w[0])?;
        if BlockMap::maps_equal(f, &left)? || BlockMap::maps_equal(f, &right)? {
            return Ok(true);
        }
    }
    Ok(false)
}

fn pointed_image(obj: &Presentation, q: &BlockMap, x: &Presentation) -> Result<Presentation> {
    match x.point() {
        Some(p) => {
            let img = q.apply(&PeriodicPoint::new(vec![p]))?;
            obj.with_point(img.word[0])
        }
        None => Ok(obj.clone()),
    }
}

/// Emits a quotient `q` as the coequalizer when its image is an object of
/// the category.
fn quotient_result(q: BlockMap, cat: CategoryTag, how: &str) -> Result<LimitResult> {
    let x = q.source().clone();
    let obj = pointed_image(q.target(), &q, &x)?;
    if cat.level == 2 && !is_sft(&obj).is_yes() {
        return Ok(LimitResult::undecided(format!(
            "{how}: the sofic quotient is not of finite type, so it is not an object at this level"
        )));
    }
    let q = q.retarget(&x, &obj)?;
    Ok(LimitResult::exists(obj, vec![q]))
}

/// Searches an endomorphism `q` of `X` with `Ker q = r` and `q(X) = X`, on
/// windows up to 3, assigning one output per class of co-occurring windows.
fn endomorphism_with_kernel(x: &Presentation, r: &SubshiftRelation, budget: usize) -> Result<Option<BlockMap>> {
    let k = x.alphabet().len();
    for width in 1..=3usize {
        let words = x.words(width)?;
        let classes = union_find_classes(&words, cooccurring(r, width)?);
        let c = classes.values().max().map_or(0, |m| m + 1);
        let total = (k as f64).powi(c as i32);
        if total > budget as f64 {
            break;
        }
        let total = total as usize;
        for code in 0..total {
            let mut digits = Vec::with_capacity(c);
            let mut rest = code;
            for _ in 0..c {
                digits.push((rest % k) as Sym);
                rest /= k;
            }
            let q = BlockMap::unchecked(x, x, 0, width - 1, |w| digits[classes[w]])?;
            if x.point().is_some() && !q.preserves_point()? {
                continue;
            }
            if !q.image()?.same_shift(x) {
                continue;
            }
            if kernel_set(&q)?.is_subrelation_of(r)? {
                return Ok(Some(q));
            }
        }
    }
    Ok(None)
}

/// The relation that a coequalizer of `(ID, f)` must have as kernel, when
/// one of the exact constructions certifies it.
enum Certified {
    Quotient(BlockMap),
    Absent(String),
    Unknown(String),
}

fn certified_quotient(f: &BlockMap, caps: &Caps) -> Result<Certified> {
    let x = f.source();
    let mixing_sft = is_mixing(x)? && is_sft(x).is_yes();
    if let EventualPeriodicity::Found { preperiod, period } = eventual_periodicity(f, caps.iter_cap, crate::dynamics::POWER_TABLE_LIMIT)? {
        if mixing_sft {
            let v = is_visibly_eventually_periodic(f, preperiod, period)?;
            if v.is_no() {
                let w = v.witness.map(|e| e.describe()).unwrap_or_default();
                return Ok(Certified::Absent(format!(
                    "f^{preperiod} = f^{} but {w} has a smaller eventual period",
                    preperiod + period
                )));
            }
            let oq = orbit_subshift(f, preperiod, period, caps.window_cap)?;
            return Ok(Certified::Quotient(oq.map));
        }
    }
    let generator = SubshiftRelation::new(graph_relation(&BlockMap::identity(x), f)?, x, x)?;
    let merge = orbit_merge_relation(f, caps.iter_cap.min(3))?;
    for n in 1..=caps.window_cap {
        let le = local_closure(&generator, n)?;
        if le.relation.presentation().is_subshift_of(&merge)? {
            return Ok(Certified::Quotient(le.quotient_map()?));
        }
    }
    Ok(Certified::Unknown(format!(
        "no window up to {} gives a local closure inside the orbit relation",
        caps.window_cap
    )))
}

/// Coequalizer of `ID_X` and an endomorphism `f`.
pub fn coequalizer_id(f: &BlockMap, cat: CategoryTag, caps: &Caps) -> Result<LimitResult> {
    if !f.is_endomorphism() {
        return invalid("the map is not an endomorphism");
    }
    cat.check_morphism(f)?;
    let x = f.source();
    let id = BlockMap::identity(x);
    if BlockMap::maps_equal(f, &id)? {
        return Ok(LimitResult::exists(x.clone(), vec![id]));
    }
    let mixing = is_mixing(x)?;
    let collapses = mixing && {
        let r = spreading_nilpotent(f, caps.iter_cap)?;
        r.spreading.is_some() || r.nilpotent.is_some()
    };
    if cat.level == 1 {
        if collapses {
            return Ok(LimitResult::not_exists(
                "every invariant endomorphism is constant, and a constant map factors through both the identity and itself",
            ));
        }
        return Ok(match certified_quotient(f, caps)? {
            Certified::Quotient(q) => {
                let r = kernel_set(&q)?;
                match endomorphism_with_kernel(x, &r, caps.budget.min(1 << 16))? {
                    Some(q) => LimitResult::exists(x.clone(), vec![q]),
                    None => LimitResult::undecided("no surjective endomorphism with the orbit kernel was found"),
                }
            }
            Certified::Absent(_) | Certified::Unknown(_) => {
                LimitResult::undecided("level-1 coequalizers are only built from certified quotients")
            }
        });
    }
    if collapses {
        let t = trivial_object(cat);
        let q = BlockMap::constant(x, &t, 0)?;
        return Ok(LimitResult::exists(t, vec![q]));
    }
    let mut notes = Vec::new();
    if mixing && is_injective(f)?.is_yes() && is_surjective(f)?.is_yes() {
        match chain_transitivity_failure(f, caps.level_cap)? {
            None if is_shift_power(f)? => {
                let t = trivial_object(cat);
                let q = BlockMap::constant(x, &t, 0)?;
                return Ok(LimitResult::exists(t, vec![q]));
            }
            None => notes.push(format!("chain transitive up to level {}", caps.level_cap)),
            Some(n) => notes.push(format!("not chain transitive at level {n}, so the trivial map is not a coequalizer")),
        }
    }
    match certified_quotient(f, caps)? {
        Certified::Quotient(q) => quotient_result(q, cat, "orbit quotient"),
        Certified::Absent(why) => Ok(LimitResult::not_exists(why)),
        Certified::Unknown(why) => {
            notes.push(why);
            Ok(LimitResult::undecided(notes.join("; ")))
        }
    }
}

fn require_pointed(cat: CategoryTag) -> Result<()> {
    if !cat.pointed() {
        return invalid(format!("{cat} has no zero morphisms"));
    }
    Ok(())
}

fn zero_map(x: &Presentation, y: &Presentation) -> Result<BlockMap> {
    let p = y.point().ok_or_else(|| Error::Invalid("target has no designated point".into()))?;
    BlockMap::constant(x, y, p)
}

/// Kernel in a pointed category: the equalizer of `f` and the zero map.
pub fn kernel_p(f: &BlockMap, cat: CategoryTag) -> Result<LimitResult> {
    require_pointed(cat)?;
    cat.check_morphism(f)?;
    equalizer(f, &zero_map(f.source(), f.target())?, cat)
}

/// Cokernel in a pointed category; exists only for zero maps and
/// surjections.
pub fn cokernel_p(f: &BlockMap, cat: CategoryTag) -> Result<LimitResult> {
    require_pointed(cat)?;
    cat.check_morphism(f)?;
    let y = f.target();
    let a = y.point().expect("pointed object");
    let img = f.image()?;
    if img.count_words(1) == 1 && img.contains_periodic(&[a]) {
        return Ok(LimitResult::exists(y.clone(), vec![BlockMap::identity(y)]));
    }
    if is_surjective(f)?.is_yes() {
        let t = trivial_object(cat);
        return Ok(LimitResult::exists(t.clone(), vec![zero_map(y, &t)?]));
    }
    // the points that any candidate must identify
    let al = y.alphabet();
    let outside = (1..=16).find_map(|n| {
        y.periodic_words(n).ok()?.into_iter().find(|w| !img.contains_periodic(w))
    });
    let inside = (1..=16).find_map(|n| img.periodic_words(n).ok()?.into_iter().find(|w| w.iter().any(|&s| s != a)));
    let mut why = String::from("the map is neither surjective nor zero");
    if let (Some(w), Some(v)) = (outside, inside) {
        why.push_str(&format!(
            "; every candidate identifies points built from {} outside the image and {} inside it",
            PeriodicPoint::new(w).render(al),
            PeriodicPoint::new(v).render(al)
        ));
    }
    Ok(LimitResult::not_exists(why))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::limits::LimitStatus;

    fn full(k: usize) -> Presentation {
        Presentation::full(&Alphabet::numeric(k))
    }

    fn ca(x: &Presentation, m: usize, a: usize, rule: impl Fn(&[Sym]) -> Sym) -> BlockMap {
        BlockMap::unchecked(x, x, m, a, rule).unwrap()
    }

    fn carry_relation() -> SubshiftRelation {
        let x = full(2);
        SubshiftRelation::from_window_pairs(&x, &x, 3, |u, v| {
            let (a, b, c) = (u[0], u[1], u[2]);
            let n = |s: Sym| 1 - s;
            u == v
                || (v[0] == a && v[1] == b && v[2] == n(c))
                || (c == n(b) && v[..] == [a, n(b), b])
                || (b == n(a) && c == n(a) && v[..] == [n(a), a, a])
                || (b == a && c == a && v[..] == [n(a), n(a), n(a)])
        })
        .unwrap()
    }

    #[test]
    fn diagonal_is_local_at_window_one() {
        let d = SubshiftRelation::diagonal(&full(2));
        let (v, le) = is_local_equivalence(&d, 3).unwrap();
        assert!(v.is_yes());
        assert_eq!(le.unwrap().window, 1);
    }

    #[test]
    fn six_symbol_relation_needs_an_unused_pair() {
        let allowed = ["00", "01", "02", "03", "14", "24", "25", "35", "40", "50"];
        let x = Presentation::from_graph(&Alphabet::numeric(6), &{
            let mut g = crate::automata::Graph::new(6);
            for a in allowed {
                let b = a.as_bytes();
                let (u, v) = ((b[0] - b'0') as usize, (b[1] - b'0') as usize);
                g.add_edge(u, v as Sym, v);
            }
            g
        });
        let r = SubshiftRelation::from_window_pairs(&x, &x, 1, |u, v| {
            u == v || matches!((u[0], v[0]), (1, 2) | (2, 1) | (2, 3) | (3, 2))
        })
        .unwrap();
        let (v, le) = is_local_equivalence(&r, 2).unwrap();
        assert!(v.is_yes());
        let le = le.unwrap();
        assert_eq!(le.window, 1);
        assert!(le.related(&[1], &[3]));
        assert!(!le.related(&[0], &[1]));
        // (1, 3) is in E but never occurs in the relation
        assert!(!r.presentation().contains_word(&[r.pair(1, 3)]));
    }

    #[test]
    fn carry_relation_is_not_local() {
        let r = carry_relation();
        assert!(r.is_reflexive().unwrap());
        assert!(r.is_symmetric());
        // 0 1^∞ and 1 0^∞ after a common past
        assert!(r.presentation().contains_asymptotic(&[r.pair(0, 0)], &[r.pair(0, 1)], &[r.pair(1, 0)]));
        let (v, le) = is_local_equivalence(&r, 4).unwrap();
        assert!(v.is_no());
        assert!(le.is_none());
        assert!(v.bound_used.is_some());
    }

    #[test]
    fn closures() {
        let x = full(2);
        let flip = ca(&x, 0, 0, |w| 1 - w[0]);
        let gen = SubshiftRelation::new(graph_relation(&BlockMap::identity(&x), &flip).unwrap(), &x, &x).unwrap();
        let le = local_closure(&gen, 1).unwrap();
        assert!(le.relation.same_relation(&SubshiftRelation::product(&x, &x).unwrap()));
        let le2 = local_closure(&gen, 2).unwrap();
        let xor = ca(&x, 0, 1, |w| w[0] ^ w[1]);
        assert!(le2.relation.same_relation(&kernel_set(&xor).unwrap()));
        assert!(le2.relation.is_subrelation_of(&le.relation).unwrap());
        let id = BlockMap::identity(&x);
        let gen = SubshiftRelation::new(graph_relation(&id, &id).unwrap(), &x, &x).unwrap();
        for n in 1..4 {
            assert!(local_closure(&gen, n).unwrap().relation.same_relation(&SubshiftRelation::diagonal(&x)));
        }
    }

    fn cat(s: &str) -> CategoryTag {
        s.parse().unwrap()
    }

    #[test]
    fn coequalizer_of_identity() {
        let x = full(2);
        let r = coequalizer_id(&BlockMap::identity(&x), cat("K2"), &Caps::default()).unwrap();
        assert!(r.is_exists());
        assert!(BlockMap::maps_equal(&r.legs[0], &BlockMap::identity(&x)).unwrap());
    }

    #[test]
    fn coequalizer_of_flip_is_xor_kernel() {
        let x = full(2);
        let flip = ca(&x, 0, 0, |w| 1 - w[0]);
        let xor = ca(&x, 0, 1, |w| w[0] ^ w[1]);
        for c in ["K2", "K3", "M2", "T3"] {
            let r = coequalizer_id(&flip, cat(c), &Caps::default()).unwrap();
            assert!(r.is_exists(), "{c}: {:?}", r.status);
            let q = &r.legs[0];
            assert!(kernel_set(q).unwrap().same_relation(&kernel_set(&xor).unwrap()));
            assert!(BlockMap::maps_equal(&BlockMap::compose(q, &flip).unwrap(), q).unwrap());
        }
        let r = coequalizer_id(&flip, cat("M1"), &Caps::default()).unwrap();
        assert!(r.is_exists());
        assert!(kernel_set(&r.legs[0]).unwrap().same_relation(&kernel_set(&xor).unwrap()));
        assert!(r.legs[0].is_endomorphism());
    }

    #[test]
    fn spreading_state_gives_trivial_coequalizer() {
        let x = full(2);
        let and = ca(&x, 0, 1, |w| w[0] & w[1]);
        let r = coequalizer_id(&and, cat("K2"), &Caps::default()).unwrap();
        assert!(r.is_exists());
        assert_eq!(r.object().count_words(5), 1);
        assert!(matches!(coequalizer_id(&and, cat("M1"), &Caps::default()).unwrap().status, LimitStatus::NotExists(_)));
    }

    #[test]
    fn shift_gives_trivial_coequalizer() {
        let x = full(2);
        let r = coequalizer_id(&BlockMap::shift(&x), cat("M2"), &Caps::default()).unwrap();
        assert!(r.is_exists());
        assert_eq!(r.object().count_words(3), 1);
    }

    #[test]
    fn mixed_eventual_periods_have_no_coequalizer() {
        let two = full(4);
        let f = ca(&two, 0, 0, |w| w[0] ^ ((w[0] & 1) << 1));
        let r = coequalizer_id(&f, cat("K2"), &Caps::default()).unwrap();
        assert!(matches!(r.status, LimitStatus::NotExists(_)), "{:?}", r.status);
    }

    #[test]
    fn pointed_kernels_and_cokernels() {
        let x = full(2).with_point(0).unwrap();
        let p2 = cat("P2");
        let zero = BlockMap::constant(&x, &x, 0).unwrap();
        let r = cokernel_p(&zero, p2).unwrap();
        assert!(r.is_exists());
        assert!(BlockMap::maps_equal(&r.legs[0], &BlockMap::identity(&x)).unwrap());

        let xor = ca(&x, 0, 1, |w| w[0] ^ w[1]);
        let r = cokernel_p(&xor, p2).unwrap();
        assert!(r.is_exists());
        assert_eq!(r.object().count_words(4), 1);

        let y = full(3).with_point(0).unwrap();
        let inc = BlockMap::unchecked(&x, &y, 0, 0, |w| w[0]).unwrap();
        assert!(matches!(cokernel_p(&inc, p2).unwrap().status, LimitStatus::NotExists(_)));

        let k = kernel_p(&xor, p2).unwrap();
        assert!(k.is_exists(), "{:?}", k.status);
        assert_eq!(k.object().count_words(3), 1);
        assert!(k.object().contains_periodic(&[0]));
        assert!(cokernel_p(&xor, cat("K2")).is_err());
    }
}
