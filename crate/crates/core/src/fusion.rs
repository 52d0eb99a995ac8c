//! Label-level fusion for the singlet and triplet module categories.
//!
//! Singlet simples are `M[r,s]` with `1 <= s <= p`; `F`, `Fbar` and `P` are the
//! two length-two extensions and the projective cover. At `s = p` all four
//! coincide and are stored as `M[r,p]`.
//!
//! Products of two simples, or of a simple with `F`/`Fbar`, use the closed
//! formulas. Every product with a projective factor, and every `Fbar x F`, is
//! projective. Classes of indecomposable projectives are linearly independent
//! in the Grothendieck group, so such a product is recovered from its class.

use std::collections::BTreeMap;
use std::fmt;

use num_rational::Rational64;
use serde::{Serialize, Serializer};

use crate::error::{Error, Result};

#[derive(Clone, Copy, Debug, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize)]
pub enum SingletKind {
    M,
    F,
    Fbar,
    P,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize)]
pub enum TripletKind {
    W,
    V,
    Vbar,
    R,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize)]
pub struct SingletLabel {
    pub kind: SingletKind,
    pub r: i64,
    pub s: u32,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize)]
pub struct TripletLabel {
    pub kind: TripletKind,
    pub r: u8,
    pub s: u32,
}

fn check_p(p: u32) -> Result<()> {
    if p < 2 {
        return Err(Error::InvalidLabel(format!("p = {p} must be at least 2")));
    }
    Ok(())
}

fn check_s(s: u32, p: u32) -> Result<()> {
    check_p(p)?;
    if s == 0 || s > p {
        return Err(Error::InvalidLabel(format!("s = {s} outside 1..={p}")));
    }
    Ok(())
}

impl SingletLabel {
    /// Validated label in canonical form.
    pub fn new(kind: SingletKind, r: i64, s: u32, p: u32) -> Result<Self> {
        check_s(s, p)?;
        let kind = if s == p { SingletKind::M } else { kind };
        Ok(SingletLabel { kind, r, s })
    }

    pub fn m(r: i64, s: u32, p: u32) -> Result<Self> {
        Self::new(SingletKind::M, r, s, p)
    }

    pub fn f(r: i64, s: u32, p: u32) -> Result<Self> {
        Self::new(SingletKind::F, r, s, p)
    }

    pub fn fbar(r: i64, s: u32, p: u32) -> Result<Self> {
        Self::new(SingletKind::Fbar, r, s, p)
    }

    pub fn proj(r: i64, s: u32, p: u32) -> Result<Self> {
        Self::new(SingletKind::P, r, s, p)
    }

    pub fn is_projective(&self, p: u32) -> bool {
        self.kind == SingletKind::P || self.s == p
    }

    fn validate(&self, p: u32) -> Result<()> {
        let c = Self::new(self.kind, self.r, self.s, p)?;
        if c != *self {
            return Err(Error::InvalidLabel(format!("{self} is not canonical for p = {p}")));
        }
        Ok(())
    }

    fn shifted(&self, n: i64) -> Self {
        SingletLabel { r: self.r + n, ..*self }
    }
}

impl TripletLabel {
    pub fn new(kind: TripletKind, r: u8, s: u32, p: u32) -> Result<Self> {
        check_s(s, p)?;
        if r != 1 && r != 2 {
            return Err(Error::InvalidLabel(format!("triplet r = {r} must be 1 or 2")));
        }
        let kind = if s == p { TripletKind::W } else { kind };
        Ok(TripletLabel { kind, r, s })
    }

    pub fn is_projective(&self, p: u32) -> bool {
        self.kind == TripletKind::R || self.s == p
    }

    /// Singlet labels inducing to this one, `r = r̄ + 2n` for `|n| <= window`.
    pub fn lifts(&self, window: i64) -> Vec<SingletLabel> {
        let kind = match self.kind {
            TripletKind::W => SingletKind::M,
            TripletKind::V => SingletKind::F,
            TripletKind::Vbar => SingletKind::Fbar,
            TripletKind::R => SingletKind::P,
        };
        (-window..=window)
            .map(|n| SingletLabel { kind, r: self.r as i64 + 2 * n, s: self.s })
            .collect()
    }
}

impl fmt::Display for SingletKind {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            SingletKind::M => "M",
            SingletKind::F => "F",
            SingletKind::Fbar => "Fbar",
            SingletKind::P => "P",
        })
    }
}

impl fmt::Display for TripletKind {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            TripletKind::W => "W",
            TripletKind::V => "V",
            TripletKind::Vbar => "Vbar",
            TripletKind::R => "R",
        })
    }
}

impl fmt::Display for SingletLabel {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}[{},{}]", self.kind, self.r, self.s)
    }
}

impl fmt::Display for TripletLabel {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}[{},{}]", self.kind, self.r, self.s)
    }
}

/// Formal sum of labels with positive multiplicities.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct FusionExpr<L: Ord> {
    terms: BTreeMap<L, u64>,
}

impl<L: Ord> Default for FusionExpr<L> {
    fn default() -> Self {
        FusionExpr { terms: BTreeMap::new() }
    }
}

impl<L: Ord + Clone> FusionExpr<L> {
    pub fn zero() -> Self {
        Self::default()
    }

    pub fn single(label: L) -> Self {
        let mut e = Self::zero();
        e.add_label(label, 1);
        e
    }

    pub fn from_terms(terms: impl IntoIterator<Item = (L, u64)>) -> Self {
        let mut e = Self::zero();
        for (l, n) in terms {
            e.add_label(l, n);
        }
        e
    }

    pub fn add_label(&mut self, label: L, n: u64) {
        if n > 0 {
            *self.terms.entry(label).or_insert(0) += n;
        }
    }

    pub fn add(&mut self, other: &Self) {
        for (l, n) in &other.terms {
            self.add_label(l.clone(), *n);
        }
    }

    pub fn scaled(&self, n: u64) -> Self {
        Self::from_terms(self.terms.iter().map(|(l, m)| (l.clone(), m * n)))
    }

    pub fn is_zero(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn multiplicity(&self, label: &L) -> u64 {
        self.terms.get(label).copied().unwrap_or(0)
    }

    pub fn iter(&self) -> impl Iterator<Item = (&L, u64)> {
        self.terms.iter().map(|(l, n)| (l, *n))
    }

    pub fn map<M: Ord + Clone>(&self, f: impl Fn(&L) -> M) -> FusionExpr<M> {
        FusionExpr::from_terms(self.terms.iter().map(|(l, n)| (f(l), *n)))
    }
}

impl<L: Ord + fmt::Display> fmt::Display for FusionExpr<L> {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.terms.is_empty() {
            return f.write_str("0");
        }
        for (i, (l, n)) in self.terms.iter().enumerate() {
            if i > 0 {
                f.write_str(" + ")?;
            }
            if *n == 1 {
                write!(f, "{l}")?;
            } else {
                write!(f, "{n}{l}")?;
            }
        }
        Ok(())
    }
}

#[derive(Serialize)]
struct TermOut<'a, L> {
    label: String,
    #[serde(flatten)]
    data: &'a L,
    multiplicity: u64,
}

impl<L: Ord + fmt::Display + Serialize> Serialize for FusionExpr<L> {
    fn serialize<S: Serializer>(&self, ser: S) -> std::result::Result<S::Ok, S::Error> {
        let v: Vec<_> = self
            .terms
            .iter()
            .map(|(l, n)| TermOut { label: l.to_string(), data: l, multiplicity: *n })
            .collect();
        v.serialize(ser)
    }
}

pub trait FusionLabel: Ord + Clone + fmt::Display {
    fn fuse(a: &Self, b: &Self, p: u32) -> Result<FusionExpr<Self>>;
}

impl FusionLabel for SingletLabel {
    fn fuse(a: &Self, b: &Self, p: u32) -> Result<FusionExpr<Self>> {
        singlet_fuse(a, b, p)
    }
}

impl FusionLabel for TripletLabel {
    fn fuse(a: &Self, b: &Self, p: u32) -> Result<FusionExpr<Self>> {
        triplet_fuse(a, b, p)
    }
}

/// Bilinear extension of the label product.
pub fn fuse_exprs<L: FusionLabel>(a: &FusionExpr<L>, b: &FusionExpr<L>, p: u32) -> Result<FusionExpr<L>> {
    let mut out = FusionExpr::zero();
    for (x, m) in a.iter() {
        for (y, n) in b.iter() {
            out.add(&L::fuse(x, y, p)?.scaled(m * n));
        }
    }
    Ok(out)
}

fn odd(n: i64) -> bool {
    n.rem_euclid(2) == 1
}

/// `⊕ P[r+r'-1, l]` for `2p+1-s-s' <= l <= p`, `l+s+s'` odd.
fn projective_block(p: u32, r1: i64, s1: u32, r: i64, s: u32) -> Vec<SingletLabel> {
    let (p, s1, s) = (p as i64, s1 as i64, s as i64);
    (2 * p + 1 - s - s1..=p)
        .filter(|l| odd(l + s + s1))
        .map(|l| SingletLabel::proj(r + r1 - 1, l as u32, p as u32).expect("l in range"))
        .collect()
}

/// Levels `l` of the non-projective part of `M[.,s'] x M[.,s]`.
fn simple_levels(p: u32, s1: u32, s: u32) -> Vec<u32> {
    let (p, s1, s) = (p as i64, s1 as i64, s as i64);
    let hi = (s + s1 - 1).min(2 * p - 1 - s - s1);
    ((s - s1).abs() + 1..=hi)
        .filter(|l| odd(l + s + s1))
        .map(|l| l as u32)
        .collect()
}

fn closed_form_product(a: &SingletLabel, b: &SingletLabel, p: u32) -> FusionExpr<SingletLabel> {
    debug_assert_eq!(a.kind, SingletKind::M);
    let mut out = FusionExpr::zero();
    for l in projective_block(p, a.r, a.s, b.r, b.s) {
        out.add_label(l, 1);
    }
    let extra = match b.kind {
        SingletKind::M => None,
        SingletKind::F => Some(b.r + 1),
        SingletKind::Fbar => Some(b.r - 1),
        SingletKind::P => unreachable!("projective products go through classes"),
    };
    if let Some(r2) = extra {
        for l in projective_block(p, a.r, a.s, r2, p - b.s) {
            out.add_label(l, 1);
        }
    }
    for l in simple_levels(p, a.s, b.s) {
        out.add_label(SingletLabel::new(b.kind, a.r + b.r - 1, l, p).expect("l in range"), 1);
    }
    out
}

/// Fusion of two singlet labels.
pub fn singlet_fuse(a: &SingletLabel, b: &SingletLabel, p: u32) -> Result<FusionExpr<SingletLabel>> {
    a.validate(p)?;
    b.validate(p)?;
    let (a, b) = if a <= b { (a, b) } else { (b, a) };
    use SingletKind::*;
    if a.kind == M && a.s == 1 {
        return Ok(FusionExpr::single(b.shifted(a.r - 1)));
    }
    match (a.kind, b.kind) {
        (M, M) | (M, F) | (M, Fbar) => Ok(closed_form_product(a, b, p)),
        (F, F) | (Fbar, Fbar) => Err(Error::UnsupportedPair(format!("{a} * {b}"))),
        _ => {
            let class = k_class_product(&k_class_label(a, p), &k_class_label(b, p), p);
            decompose_projective(&class, p)
        }
    }
}

/// Simple-current shift `M[n+1,1] x X = X[r+n]`.
pub fn simple_current(n: i64, x: &SingletLabel) -> SingletLabel {
    x.shifted(n)
}

/// Closed form for `M[1,2] x P[r,s]`, `s < p`.
///
/// The neighbour `P[r,s-1]` becomes `P[r+1,p] + P[r-1,p]` at `s = 1`, and the
/// neighbour `P[r,s+1]` is doubled when it reaches `s+1 = p`.
pub fn m12_times_projective(r: i64, s: u32, p: u32) -> Result<FusionExpr<SingletLabel>> {
    check_s(s, p)?;
    if s == p {
        return Err(Error::InvalidLabel("s = p is simple projective".into()));
    }
    let mut out = FusionExpr::zero();
    if s == 1 {
        out.add_label(SingletLabel::proj(r + 1, p, p)?, 1);
        out.add_label(SingletLabel::proj(r - 1, p, p)?, 1);
    } else {
        out.add_label(SingletLabel::proj(r, s - 1, p)?, 1);
    }
    let up = if s + 1 == p { 2 } else { 1 };
    out.add_label(SingletLabel::proj(r, s + 1, p)?, up);
    Ok(out)
}

/// `Fbar[r',1] x F[r,1] = ⊕_{l odd} P[r+r'-1, l]`.
pub fn fbar1_times_f1(r1: i64, r: i64, p: u32) -> Result<FusionExpr<SingletLabel>> {
    check_p(p)?;
    (1..=p).step_by(2).map(|l| Ok((SingletLabel::proj(r + r1 - 1, l, p)?, 1))).collect::<Result<Vec<_>>>().map(FusionExpr::from_terms)
}

/// `(Fbar[r',1] x F[r,1]) x M[1,2] = P[r+r',p] + P[r+r'-2,p] + ⊕_{l even} 2P[r+r'-1, l]`.
///
/// Since `M[1,2] x F[r,1] = F[r,2] + P[r+1,p]`, this is `Fbar[r',1] x F[r,2]`
/// plus `Fbar[r',1] x M[r+1,p]`, not `Fbar[r',1] x F[r,2]` alone.
pub fn fbar1_times_f1_m12(r1: i64, r: i64, p: u32) -> Result<FusionExpr<SingletLabel>> {
    check_p(p)?;
    let mut e = FusionExpr::from_terms([(SingletLabel::m(r + r1, p, p)?, 1), (SingletLabel::m(r + r1 - 2, p, p)?, 1)]);
    for l in (2..=p).step_by(2) {
        e.add_label(SingletLabel::proj(r + r1 - 1, l, p)?, 2);
    }
    Ok(e)
}

/// `Fbar[r',1] x F[r,2] = P[r+r'-2,p] + ⊕_{l even} P[r+r'-1, l]`.
pub fn fbar1_times_f2(r1: i64, r: i64, p: u32) -> Result<FusionExpr<SingletLabel>> {
    check_p(p)?;
    let mut e = FusionExpr::single(SingletLabel::m(r + r1 - 2, p, p)?);
    for l in (2..=p).step_by(2) {
        e.add_label(SingletLabel::proj(r + r1 - 1, l, p)?, 1);
    }
    Ok(e)
}

/// Integer combination of simple classes `[M[r,s]]`.
#[derive(Clone, Debug, Default, PartialEq, Eq)]
pub struct KClass {
    terms: BTreeMap<(i64, u32), i64>,
}

impl KClass {
    pub fn add_simple(&mut self, r: i64, s: u32, n: i64) {
        if n == 0 {
            return;
        }
        let e = self.terms.entry((r, s)).or_insert(0);
        *e += n;
        if *e == 0 {
            self.terms.remove(&(r, s));
        }
    }

    pub fn add_scaled(&mut self, other: &KClass, n: i64) {
        for ((r, s), m) in &other.terms {
            self.add_simple(*r, *s, m * n);
        }
    }

    pub fn coefficient(&self, r: i64, s: u32) -> i64 {
        self.terms.get(&(r, s)).copied().unwrap_or(0)
    }

    pub fn is_zero(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn iter(&self) -> impl Iterator<Item = ((i64, u32), i64)> + '_ {
        self.terms.iter().map(|(k, v)| (*k, *v))
    }
}

impl fmt::Display for KClass {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.terms.is_empty() {
            return f.write_str("0");
        }
        for (i, ((r, s), n)) in self.terms.iter().enumerate() {
            if i > 0 {
                f.write_str(" + ")?;
            }
            write!(f, "{n}[M[{r},{s}]]")?;
        }
        Ok(())
    }
}

/// Composition factors of a label.
pub fn k_class_label(l: &SingletLabel, p: u32) -> KClass {
    let mut k = KClass::default();
    let (r, s) = (l.r, l.s);
    k.add_simple(r, s, 1);
    if s != p {
        match l.kind {
            SingletKind::M => {}
            SingletKind::F => k.add_simple(r + 1, p - s, 1),
            SingletKind::Fbar => k.add_simple(r - 1, p - s, 1),
            SingletKind::P => {
                k.add_simple(r, s, 1);
                k.add_simple(r + 1, p - s, 1);
                k.add_simple(r - 1, p - s, 1);
            }
        }
    }
    k
}

pub fn k_class(e: &FusionExpr<SingletLabel>, p: u32) -> KClass {
    let mut k = KClass::default();
    for (l, n) in e.iter() {
        k.add_scaled(&k_class_label(l, p), n as i64);
    }
    k
}

/// Product of classes through the simple-times-simple formula.
pub fn k_class_product(a: &KClass, b: &KClass, p: u32) -> KClass {
    let mut out = KClass::default();
    for ((r1, s1), m) in a.iter() {
        for ((r2, s2), n) in b.iter() {
            let x = SingletLabel { kind: SingletKind::M, r: r1, s: s1 };
            let y = SingletLabel { kind: SingletKind::M, r: r2, s: s2 };
            let prod = if s1 == 1 {
                FusionExpr::single(y.shifted(r1 - 1))
            } else {
                closed_form_product(&x, &y, p)
            };
            out.add_scaled(&k_class(&prod, p), m * n);
        }
    }
    out
}

/// Unique expansion of a class in indecomposable projectives.
///
/// Peels from the lowest `r`: a factor `M[r,t]` with `t < p` at minimal `r`
/// can only come from `P[r+1,p-t]`.
pub fn decompose_projective(class: &KClass, p: u32) -> Result<FusionExpr<SingletLabel>> {
    let fail = || Error::NotProjectiveClass(class.to_string());
    let mut rest = class.clone();
    let mut out = FusionExpr::zero();
    for ((r, s), n) in class.iter().filter(|((_, s), _)| *s == p) {
        if n < 0 {
            return Err(fail());
        }
        out.add_label(SingletLabel::m(r, s, p)?, n as u64);
        rest.add_simple(r, s, -n);
    }
    let rmax = class.iter().map(|((r, _), _)| r).max().unwrap_or(0);
    loop {
        let Some(rmin) = rest.terms.keys().next().map(|k| k.0) else { break };
        if rmin > rmax {
            return Err(fail());
        }
        let low: Vec<_> = rest.iter().take_while(|((r, _), _)| *r == rmin).collect();
        for ((r, t), n) in low {
            if n < 0 {
                return Err(fail());
            }
            let q = SingletLabel::proj(r + 1, p - t, p)?;
            rest.add_scaled(&k_class_label(&q, p), -n);
            out.add_label(q, n as u64);
        }
    }
    Ok(out)
}

/// Induction to the triplet category.
pub fn induce(a: &SingletLabel) -> TripletLabel {
    let kind = match a.kind {
        SingletKind::M => TripletKind::W,
        SingletKind::F => TripletKind::V,
        SingletKind::Fbar => TripletKind::Vbar,
        SingletKind::P => TripletKind::R,
    };
    TripletLabel { kind, r: triplet_r(a.r), s: a.s }
}

pub fn induce_expr(e: &FusionExpr<SingletLabel>) -> FusionExpr<TripletLabel> {
    e.map(induce)
}

fn triplet_r(r: i64) -> u8 {
    if odd(r) {
        1
    } else {
        2
    }
}

/// `Vbar[r,1] x V[1,1] = ⊕_{l odd} R[r,l]`.
pub fn vbar1_times_v11(r: u8, p: u32) -> Result<FusionExpr<TripletLabel>> {
    (1..=p).step_by(2).map(|l| Ok((TripletLabel::new(TripletKind::R, r, l, p)?, 1))).collect::<Result<Vec<_>>>().map(FusionExpr::from_terms)
}

/// `Vbar[r,1] x (V[1,1] x W[1,2]) = 2R[r+1,p] + ⊕_{l even} 2R[r,l]`.
pub fn vbar1_times_v11_w12(r: u8, p: u32) -> Result<FusionExpr<TripletLabel>> {
    let mut e = FusionExpr::zero();
    e.add_label(TripletLabel::new(TripletKind::R, triplet_r(r as i64 + 1), p, p)?, 2);
    for l in (2..=p).step_by(2) {
        e.add_label(TripletLabel::new(TripletKind::R, r, l, p)?, 2);
    }
    Ok(e)
}

/// `Vbar[r,1] x V[1,2] = R[r+1,p] + ⊕_{l even} R[r,l]`.
pub fn vbar1_times_v12(r: u8, p: u32) -> Result<FusionExpr<TripletLabel>> {
    let mut e = FusionExpr::zero();
    e.add_label(TripletLabel::new(TripletKind::R, triplet_r(r as i64 + 1), p, p)?, 1);
    for l in (2..=p).step_by(2) {
        e.add_label(TripletLabel::new(TripletKind::R, r, l, p)?, 1);
    }
    Ok(e)
}

/// Half-width of the lift window checked by [`triplet_fuse`].
pub const LIFT_WINDOW: i64 = 2;

/// Triplet fusion by lifting, fusing and inducing; every lift pair in the
/// window must give the same answer.
pub fn triplet_fuse(a: &TripletLabel, b: &TripletLabel, p: u32) -> Result<FusionExpr<TripletLabel>> {
    let a = TripletLabel::new(a.kind, a.r, a.s, p)?;
    let b = TripletLabel::new(b.kind, b.r, b.s, p)?;
    let mut first: Option<(SingletLabel, SingletLabel, FusionExpr<TripletLabel>)> = None;
    for x in a.lifts(LIFT_WINDOW) {
        for y in b.lifts(LIFT_WINDOW) {
            let got = induce_expr(&singlet_fuse(&x, &y, p)?);
            match &first {
                None => first = Some((x, y, got)),
                Some((x0, y0, want)) => {
                    if *want != got {
                        return Err(Error::LiftInconsistency(format!(
                            "{x0} * {y0} induces {want}, {x} * {y} induces {got}"
                        )));
                    }
                }
            }
        }
    }
    Ok(first.expect("window is nonempty").2)
}

/// Lowest conformal weight `h[r,s]`; always rational since `α₋ = -α₊/p`.
pub fn conformal_weight(r: i64, s: i64, p: u32) -> Result<Rational64> {
    check_p(p)?;
    let p = Rational64::from_integer(p as i64);
    let half = Rational64::new(1, 2);
    // α[r,s] = α₊ x and α₀ = α₊ (1 - 1/p), with α₊² = 2p
    let x = half * (1 - r) - half * (1 - s) / p;
    let a0 = Rational64::from_integer(1) - Rational64::from_integer(1) / p;
    Ok(p * x * (x - a0))
}

/// Outcome of the exhaustive class-compatibility sweep.
#[derive(Clone, Debug, Default, Serialize)]
pub struct KCheckReport {
    pub p: u32,
    pub r_window: i64,
    pub pairs_checked: usize,
    pub unsupported: usize,
    pub failures: Vec<String>,
}

impl KCheckReport {
    pub fn passed(&self) -> bool {
        self.failures.is_empty() && self.pairs_checked > 0
    }
}

/// Every canonical singlet label with `|r| <= r_window`.
pub fn singlet_labels(p: u32, r_window: i64) -> Vec<SingletLabel> {
    let mut out = Vec::new();
    for kind in [SingletKind::M, SingletKind::F, SingletKind::Fbar, SingletKind::P] {
        for r in -r_window..=r_window {
            for s in 1..=p {
                let l = SingletLabel::new(kind, r, s, p).expect("valid");
                if l.kind == kind {
                    out.push(l);
                }
            }
        }
    }
    out
}

/// Checks that taking classes turns fusion into the class product.
pub fn k_homomorphism_check(p: u32, r_window: i64) -> KCheckReport {
    let labels = singlet_labels(p, r_window);
    let mut rep = KCheckReport { p, r_window, ..Default::default() };
    for a in &labels {
        for b in &labels {
            match singlet_fuse(a, b, p) {
                Ok(e) => {
                    rep.pairs_checked += 1;
                    let want = k_class_product(&k_class_label(a, p), &k_class_label(b, p), p);
                    if k_class(&e, p) != want {
                        rep.failures.push(format!("{a} * {b} = {e}"));
                    }
                }
                Err(Error::UnsupportedPair(_)) => rep.unsupported += 1,
                Err(e) => rep.failures.push(format!("{a} * {b}: {e}")),
            }
        }
    }
    rep
}

/// Parsed input of the fusion calculator.
#[derive(Clone, Debug, PartialEq, Eq)]
pub enum Evaluated {
    Singlet(FusionExpr<SingletLabel>),
    Triplet(FusionExpr<TripletLabel>),
}

impl fmt::Display for Evaluated {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Evaluated::Singlet(e) => e.fmt(f),
            Evaluated::Triplet(e) => e.fmt(f),
        }
    }
}

impl Serialize for Evaluated {
    fn serialize<S: Serializer>(&self, ser: S) -> std::result::Result<S::Ok, S::Error> {
        match self {
            Evaluated::Singlet(e) => e.serialize(ser),
            Evaluated::Triplet(e) => e.serialize(ser),
        }
    }
}

struct RawLabel {
    kind: String,
    r: i64,
    s: i64,
}

struct Lexer<'a> {
    src: &'a str,
    pos: usize,
}

impl<'a> Lexer<'a> {
    fn skip_ws(&mut self) {
        while self.src[self.pos..].starts_with(char::is_whitespace) {
            self.pos += self.src[self.pos..].chars().next().map_or(1, char::len_utf8);
        }
    }

    fn peek(&mut self) -> Option<char> {
        self.skip_ws();
        self.src[self.pos..].chars().next()
    }

    fn expect(&mut self, c: char) -> Result<()> {
        if self.peek() == Some(c) {
            self.pos += c.len_utf8();
            Ok(())
        } else {
            Err(Error::Parse(format!("expected '{c}' at offset {}", self.pos)))
        }
    }

    fn take_while(&mut self, f: impl Fn(char) -> bool) -> &'a str {
        self.skip_ws();
        let start = self.pos;
        while let Some(c) = self.src[self.pos..].chars().next() {
            if !f(c) {
                break;
            }
            self.pos += c.len_utf8();
        }
        &self.src[start..self.pos]
    }

    fn int(&mut self) -> Result<i64> {
        self.skip_ws();
        let start = self.pos;
        if self.src[self.pos..].starts_with('-') {
            self.pos += 1;
        }
        self.take_while(|c| c.is_ascii_digit());
        self.src[start..self.pos]
            .parse()
            .map_err(|_| Error::Parse(format!("expected integer at offset {start}")))
    }

    fn label(&mut self) -> Result<RawLabel> {
        let kind = self.take_while(|c| c.is_ascii_alphabetic()).to_string();
        if kind.is_empty() {
            return Err(Error::Parse(format!("expected label at offset {}", self.pos)));
        }
        self.expect('[')?;
        let r = self.int()?;
        self.expect(',')?;
        let s = self.int()?;
        self.expect(']')?;
        Ok(RawLabel { kind, r, s })
    }
}

type RawTerm = (u64, Vec<RawLabel>);

fn parse_raw(src: &str) -> Result<Vec<RawTerm>> {
    let mut lx = Lexer { src, pos: 0 };
    let mut terms = Vec::new();
    loop {
        let coeff = if lx.peek().is_some_and(|c| c.is_ascii_digit()) {
            lx.take_while(|c| c.is_ascii_digit())
                .parse()
                .map_err(|_| Error::Parse("bad multiplicity".into()))?
        } else {
            1
        };
        let mut factors = vec![lx.label()?];
        while lx.peek() == Some('*') {
            lx.expect('*')?;
            factors.push(lx.label()?);
        }
        terms.push((coeff, factors));
        match lx.peek() {
            Some('+') => lx.expect('+')?,
            None => return Ok(terms),
            Some(c) => return Err(Error::Parse(format!("unexpected '{c}' at offset {}", lx.pos))),
        }
    }
}

fn s_of(raw: &RawLabel) -> Result<u32> {
    u32::try_from(raw.s).map_err(|_| Error::InvalidLabel(format!("s = {} out of range", raw.s)))
}

fn evaluate_terms<L: FusionLabel>(
    terms: &[RawTerm],
    p: u32,
    make: impl Fn(&RawLabel) -> Result<L>,
) -> Result<FusionExpr<L>> {
    let mut out = FusionExpr::zero();
    for (coeff, factors) in terms {
        let mut acc = FusionExpr::single(make(&factors[0])?);
        for f in &factors[1..] {
            acc = fuse_exprs(&acc, &FusionExpr::single(make(f)?), p)?;
        }
        out.add(&acc.scaled(*coeff));
    }
    Ok(out)
}

/// Evaluates e.g. `"Fbar[1,1] * F[1,1] + M[1,2]"`: `*` is fusion, `+` direct sum.
pub fn evaluate(src: &str, p: u32) -> Result<Evaluated> {
    check_p(p)?;
    let terms = parse_raw(src)?;
    let singlet = |k: &str| match k {
        "M" => Some(SingletKind::M),
        "F" => Some(SingletKind::F),
        "Fbar" => Some(SingletKind::Fbar),
        "P" => Some(SingletKind::P),
        _ => None,
    };
    let triplet = |k: &str| match k {
        "W" => Some(TripletKind::W),
        "V" => Some(TripletKind::V),
        "Vbar" => Some(TripletKind::Vbar),
        "R" => Some(TripletKind::R),
        _ => None,
    };
    let all = |f: &dyn Fn(&str) -> bool| terms.iter().flat_map(|t| &t.1).all(|l| f(&l.kind));
    if all(&|k| singlet(k).is_some()) {
        evaluate_terms(&terms, p, |l| SingletLabel::new(singlet(&l.kind).unwrap(), l.r, s_of(l)?, p))
            .map(Evaluated::Singlet)
    } else if all(&|k| triplet(k).is_some()) {
        evaluate_terms(&terms, p, |l| {
            let r = u8::try_from(l.r).map_err(|_| Error::InvalidLabel(format!("triplet r = {}", l.r)))?;
            TripletLabel::new(triplet(&l.kind).unwrap(), r, s_of(l)?, p)
        })
        .map(Evaluated::Triplet)
    } else {
        Err(Error::Parse("labels must all be singlet (M, F, Fbar, P) or all triplet (W, V, Vbar, R)".into()))
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn m(r: i64, s: u32, p: u32) -> SingletLabel {
        SingletLabel::m(r, s, p).unwrap()
    }
    fn pr(r: i64, s: u32, p: u32) -> SingletLabel {
        SingletLabel::proj(r, s, p).unwrap()
    }
    fn fb(r: i64, s: u32, p: u32) -> SingletLabel {
        SingletLabel::fbar(r, s, p).unwrap()
    }
    fn f(r: i64, s: u32, p: u32) -> SingletLabel {
        SingletLabel::f(r, s, p).unwrap()
    }

    #[test]
    fn s_equal_p_is_canonically_simple() {
        for kind in [SingletKind::F, SingletKind::Fbar, SingletKind::P] {
            assert_eq!(SingletLabel::new(kind, 3, 2, 2).unwrap(), m(3, 2, 2));
        }
        assert!(SingletLabel::m(0, 0, 2).is_err());
        assert!(SingletLabel::m(0, 3, 2).is_err());
    }

    #[test]
    fn m12_on_simples() {
        for p in 3..7u32 {
            for r in -2..3 {
                let got = singlet_fuse(&m(1, 2, p), &m(r, 1, p), p).unwrap();
                assert_eq!(got, FusionExpr::single(m(r, 2, p)));
                for s in 2..p {
                    let got = singlet_fuse(&m(1, 2, p), &m(r, s, p), p).unwrap();
                    assert_eq!(got, FusionExpr::from_terms([(m(r, s - 1, p), 1), (m(r, s + 1, p), 1)]));
                }
                let got = singlet_fuse(&m(1, 2, p), &m(r, p, p), p).unwrap();
                assert_eq!(got, FusionExpr::single(pr(r, p - 1, p)));
            }
        }
    }

    #[test]
    fn m12_on_f_matches_extension_argument() {
        for p in 3..7u32 {
            for r in -2..3 {
                let got = singlet_fuse(&m(1, 2, p), &f(r, 1, p), p).unwrap();
                assert_eq!(got, FusionExpr::from_terms([(f(r, 2, p), 1), (pr(r + 1, p, p), 1)]));
                let got = singlet_fuse(&m(1, 2, p), &f(r, p - 1, p), p).unwrap();
                assert_eq!(got, FusionExpr::from_terms([(f(r, p - 2, p), 1), (pr(r, p, p), 1)]));
                for s in 2..p - 1 {
                    let got = singlet_fuse(&m(1, 2, p), &f(r, s, p), p).unwrap();
                    assert_eq!(got, FusionExpr::from_terms([(f(r, s - 1, p), 1), (f(r, s + 1, p), 1)]));
                }
            }
        }
    }

    #[test]
    fn m12_on_projectives_matches_closed_form() {
        for p in 2..8u32 {
            for r in -3..4 {
                for s in 1..p {
                    let got = singlet_fuse(&m(1, 2, p), &pr(r, s, p), p).unwrap();
                    assert_eq!(got, m12_times_projective(r, s, p).unwrap(), "p={p} r={r} s={s}");
                }
            }
        }
        // generic p: the three displayed cases
        let p = 6;
        assert_eq!(
            m12_times_projective(0, 1, p).unwrap(),
            FusionExpr::from_terms([(pr(0, 2, p), 1), (pr(1, p, p), 1), (pr(-1, p, p), 1)])
        );
        assert_eq!(
            m12_times_projective(0, 3, p).unwrap(),
            FusionExpr::from_terms([(pr(0, 2, p), 1), (pr(0, 4, p), 1)])
        );
        assert_eq!(
            m12_times_projective(0, p - 1, p).unwrap(),
            FusionExpr::from_terms([(pr(0, p - 2, p), 1), (pr(0, p, p), 2)])
        );
    }

    #[test]
    fn at_p_two_both_boundary_cases_contribute() {
        let got = singlet_fuse(&m(1, 2, 2), &pr(0, 1, 2), 2).unwrap();
        assert_eq!(got, FusionExpr::from_terms([(m(0, 2, 2), 2), (m(1, 2, 2), 1), (m(-1, 2, 2), 1)]));
    }

    #[test]
    fn fbar_times_f_closed_forms() {
        for p in [2u32, 3, 4, 5] {
            let m12 = FusionExpr::single(m(1, 2, p));
            for r1 in -3..4 {
                for r in -3..4 {
                    let f1 = singlet_fuse(&fb(r1, 1, p), &f(r, 1, p), p).unwrap();
                    assert_eq!(f1, fbar1_times_f1(r1, r, p).unwrap());
                    let lhs = fuse_exprs(&f1, &m12, p).unwrap();
                    assert_eq!(lhs, fbar1_times_f1_m12(r1, r, p).unwrap());
                    // M[1,2] x F[r,1] splits off P[r+1,p], which carries the surplus
                    let split = singlet_fuse(&m(1, 2, p), &f(r, 1, p), p).unwrap();
                    assert_eq!(split.multiplicity(&m(r + 1, p, p)), 1);
                    let mut rhs = singlet_fuse(&fb(r1, 1, p), &f(r, 2, p), p).unwrap();
                    assert_eq!(rhs, fbar1_times_f2(r1, r, p).unwrap());
                    rhs.add(&singlet_fuse(&fb(r1, 1, p), &m(r + 1, p, p), p).unwrap());
                    assert_eq!(lhs, rhs);
                }
            }
        }
    }

    #[test]
    fn f_r2_is_not_m12_times_f_r1_by_classes() {
        for p in 3..7u32 {
            let lhs = k_class_label(&f(0, 2, p), p);
            let rhs = k_class(&singlet_fuse(&m(1, 2, p), &f(0, 1, p), p).unwrap(), p);
            let mut diff = rhs.clone();
            diff.add_scaled(&lhs, -1);
            assert_eq!(diff, k_class_label(&m(1, p, p), p));
        }
    }

    #[test]
    fn ff_and_fbar_fbar_are_reported() {
        assert!(matches!(singlet_fuse(&f(0, 1, 3), &f(1, 1, 3), 3), Err(Error::UnsupportedPair(_))));
        assert!(matches!(singlet_fuse(&fb(0, 1, 3), &fb(1, 2, 3), 3), Err(Error::UnsupportedPair(_))));
    }

    #[test]
    fn class_expansions() {
        let p = 3;
        let k = k_class_label(&f(1, 1, p), p);
        assert_eq!(k.coefficient(1, 1), 1);
        assert_eq!(k.coefficient(2, 2), 1);
        let k = k_class_label(&pr(1, 1, p), p);
        assert_eq!(k.coefficient(1, 1), 2);
        assert_eq!(k.coefficient(2, 2), 1);
        assert_eq!(k.coefficient(0, 2), 1);
        assert_eq!(k_class_label(&m(5, 3, p), p).iter().count(), 1);
    }

    #[test]
    fn class_homomorphism_sweep() {
        for p in [2, 3] {
            let rep = k_homomorphism_check(p, 4);
            assert!(rep.passed(), "{:?}", rep.failures);
        }
    }

    #[test]
    fn induction_examples() {
        assert_eq!(induce(&m(3, 1, 3)), TripletLabel::new(TripletKind::W, 1, 1, 3).unwrap());
        assert_eq!(induce(&f(2, 2, 3)), TripletLabel::new(TripletKind::V, 2, 2, 3).unwrap());
        assert_eq!(induce(&pr(4, 2, 3)), TripletLabel::new(TripletKind::R, 2, 2, 3).unwrap());
        assert_eq!(induce(&pr(-3, 1, 3)).r, 1);
    }

    fn t(kind: TripletKind, r: u8, s: u32, p: u32) -> TripletLabel {
        TripletLabel::new(kind, r, s, p).unwrap()
    }

    #[test]
    fn triplet_closed_forms() {
        for p in [2u32, 3, 4] {
            for r in [1u8, 2] {
                let vbar = t(TripletKind::Vbar, r, 1, p);
                let got = triplet_fuse(&vbar, &t(TripletKind::V, 1, 1, p), p).unwrap();
                assert_eq!(got, vbar1_times_v11(r, p).unwrap());
                let v11_w12 = triplet_fuse(&t(TripletKind::V, 1, 1, p), &t(TripletKind::W, 1, 2, p), p).unwrap();
                let got = fuse_exprs(&FusionExpr::single(vbar), &v11_w12, p).unwrap();
                assert_eq!(got, vbar1_times_v11_w12(r, p).unwrap());
                if p > 2 {
                    let got = triplet_fuse(&vbar, &t(TripletKind::V, 1, 2, p), p).unwrap();
                    assert_eq!(got, vbar1_times_v12(r, p).unwrap());
                    assert_ne!(got, vbar1_times_v11_w12(r, p).unwrap());
                }
            }
        }
    }

    #[test]
    fn vacuum_is_unit() {
        let p = 3;
        for kind in [TripletKind::W, TripletKind::V, TripletKind::Vbar, TripletKind::R] {
            for r in [1, 2] {
                for s in 1..=p {
                    let x = t(kind, r, s, p);
                    assert_eq!(triplet_fuse(&t(TripletKind::W, 1, 1, p), &x, p).unwrap(), FusionExpr::single(x));
                }
            }
        }
    }

    #[test]
    fn v_times_vbar_is_projective() {
        for p in [2u32, 3, 4] {
            for (r1, r2) in [(1, 1), (1, 2), (2, 1), (2, 2)] {
                for s1 in 1..=p {
                    for s2 in 1..=p {
                        let e = triplet_fuse(&t(TripletKind::V, r1, s1, p), &t(TripletKind::Vbar, r2, s2, p), p)
                            .unwrap();
                        assert!(e.iter().all(|(l, _)| l.is_projective(p)), "{e}");
                    }
                }
            }
        }
    }

    #[test]
    fn conformal_weights() {
        assert_eq!(conformal_weight(1, 1, 2).unwrap(), Rational64::from_integer(0));
        assert_eq!(conformal_weight(2, 1, 2).unwrap(), Rational64::from_integer(1));
        assert_eq!(conformal_weight(1, 2, 2).unwrap(), Rational64::new(-1, 8));
        assert_eq!(conformal_weight(1, 1, 5).unwrap(), Rational64::from_integer(0));
    }

    #[test]
    fn parser_round_trip() {
        let got = evaluate("Fbar[1,1] * F[1,1]", 2).unwrap();
        assert_eq!(got.to_string(), "P[1,1]");
        let got = evaluate("M[1,2]*M[1,2] + 2W[1,1]", 3);
        assert!(matches!(got, Err(Error::Parse(_))));
        let got = evaluate("2 M[1,2] * M[1,2] + M[0,1]", 3).unwrap();
        assert_eq!(got.to_string(), "M[0,1] + 2M[1,1] + 2M[1,3]");
        let got = evaluate("Vbar[2,1] * V[1,1]", 3).unwrap();
        assert_eq!(got.to_string(), "W[2,3] + R[2,1]");
        assert!(evaluate("M[1,2", 2).is_err());
        assert!(evaluate("Q[1,1]", 2).is_err());
    }
}
