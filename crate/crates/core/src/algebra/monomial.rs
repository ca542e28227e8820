use std::cmp::Ordering;
use std::fmt;

/// Maximum number of generators per tensor slot.
pub const MAX_GENS: usize = 3;
/// Lowest usable slot index.
pub const SLOT_MIN: i8 = -5;
/// Highest usable slot index.
pub const SLOT_MAX: i8 = 5;
/// Number of auxiliary `s` (and `t`) variables.
pub const MAX_AUX: usize = 7;

const SLOT_COUNT: usize = (SLOT_MAX - SLOT_MIN + 1) as usize;
const GEN_VARS: usize = SLOT_COUNT * MAX_GENS;
/// Total variable capacity of a monomial.
pub const NVARS: usize = GEN_VARS + 2 * MAX_AUX;
const WORDS: usize = 6;
const HIGH_BITS: u64 = 0x8080_8080_8080_8080;

/// A variable: a generator in a tensor slot, or an auxiliary `s_a` / `t_b`
/// (1-based) used when extracting coefficients.
#[derive(Clone, Copy, PartialEq, Eq, Hash, Debug)]
pub enum VarId {
    Gen { gen: u8, slot: i8 },
    S(u8),
    T(u8),
}

impl VarId {
    pub fn gen(gen: u8, slot: i8) -> Self {
        VarId::Gen { gen, slot }
    }

    /// Dense index, or `None` if outside capacity.
    pub fn index(self) -> Option<usize> {
        match self {
            VarId::Gen { gen, slot } => {
                if (gen as usize) < MAX_GENS && (SLOT_MIN..=SLOT_MAX).contains(&slot) {
                    Some((slot - SLOT_MIN) as usize * MAX_GENS + gen as usize)
                } else {
                    None
                }
            }
            VarId::S(a) if (1..=MAX_AUX as u8).contains(&a) => Some(GEN_VARS + a as usize - 1),
            VarId::T(b) if (1..=MAX_AUX as u8).contains(&b) => {
                Some(GEN_VARS + MAX_AUX + b as usize - 1)
            }
            _ => None,
        }
    }

    pub fn from_index(idx: usize) -> Self {
        if idx < GEN_VARS {
            VarId::Gen {
                gen: (idx % MAX_GENS) as u8,
                slot: (idx / MAX_GENS) as i8 + SLOT_MIN,
            }
        } else if idx < GEN_VARS + MAX_AUX {
            VarId::S((idx - GEN_VARS + 1) as u8)
        } else {
            VarId::T((idx - GEN_VARS - MAX_AUX + 1) as u8)
        }
    }

    pub fn slot(self) -> Option<i8> {
        match self {
            VarId::Gen { slot, .. } => Some(slot),
            _ => None,
        }
    }
}

impl PartialOrd for VarId {
    fn partial_cmp(&self, other: &Self) -> Option<Ordering> {
        Some(self.cmp(other))
    }
}

impl Ord for VarId {
    fn cmp(&self, other: &Self) -> Ordering {
        self.index().cmp(&other.index())
    }
}

pub(crate) fn slot_index(slot: i8) -> usize {
    (slot - SLOT_MIN) as usize
}

pub(crate) fn gen_index(gen: usize, slot: i8) -> usize {
    slot_index(slot) * MAX_GENS + gen
}

/// Exponent vector packed big-endian into six words, one byte per variable,
/// so that word-wise comparison is lexicographic in variable index.
#[derive(Clone, Copy, PartialEq, Eq, Hash, Default)]
pub struct Monomial([u64; WORDS]);

impl Monomial {
    pub const ONE: Monomial = Monomial([0; WORDS]);

    #[inline]
    pub fn get(&self, idx: usize) -> u32 {
        ((self.0[idx / 8] >> ((7 - idx % 8) * 8)) & 0xff) as u32
    }

    #[inline]
    pub fn set(&mut self, idx: usize, e: u32) {
        assert!(e < 256, "exponent overflow");
        let shift = (7 - idx % 8) * 8;
        let w = &mut self.0[idx / 8];
        *w = (*w & !(0xffu64 << shift)) | ((e as u64) << shift);
    }

    pub fn var(v: VarId, e: u32) -> Option<Self> {
        let mut m = Monomial::ONE;
        m.set(v.index()?, e);
        Some(m)
    }

    pub fn exponent(&self, v: VarId) -> u32 {
        v.index().map_or(0, |i| self.get(i))
    }

    pub fn is_one(&self) -> bool {
        self.0.iter().all(|&w| w == 0)
    }

    #[inline]
    pub fn mul(&self, other: &Monomial) -> Monomial {
        let mut out = [0u64; WORDS];
        let mut fast = true;
        for k in 0..WORDS {
            if (self.0[k] | other.0[k]) & HIGH_BITS != 0 {
                fast = false;
            }
            out[k] = self.0[k].wrapping_add(other.0[k]);
        }
        if fast {
            return Monomial(out);
        }
        let mut m = Monomial::ONE;
        for idx in 0..NVARS {
            m.set(idx, self.get(idx) + other.get(idx));
        }
        m
    }

    /// `self / other` if `other` divides `self`.
    pub fn div(&self, other: &Monomial) -> Option<Monomial> {
        let mut m = Monomial::ONE;
        for idx in 0..NVARS {
            let (a, b) = (self.get(idx), other.get(idx));
            if b > a {
                return None;
            }
            m.set(idx, a - b);
        }
        Some(m)
    }

    pub fn degree(&self) -> u32 {
        const LO: u64 = 0x00ff_00ff_00ff_00ff;
        self.0
            .iter()
            .map(|&w| {
                let pairs = (w & LO) + ((w >> 8) & LO);
                (pairs.wrapping_mul(0x0001_0001_0001_0001) >> 48) as u32
            })
            .sum()
    }

    /// Nonzero exponents in variable order.
    pub fn iter(&self) -> impl Iterator<Item = (VarId, u32)> + '_ {
        (0..NVARS).filter_map(move |i| {
            let e = self.get(i);
            (e > 0).then(|| (VarId::from_index(i), e))
        })
    }

    /// Bitmask of occupied slots, bit `slot - SLOT_MIN`.
    pub fn slot_mask(&self) -> u16 {
        let mut mask = 0u16;
        for s in 0..SLOT_COUNT {
            if (0..MAX_GENS).any(|g| self.get(s * MAX_GENS + g) > 0) {
                mask |= 1 << s;
            }
        }
        mask
    }

    /// First slot in which generator `gen` has exponent at least 2.
    pub(crate) fn slot_with_square(&self, gen: usize) -> Option<i8> {
        (0..SLOT_COUNT)
            .find(|&s| self.get(s * MAX_GENS + gen) >= 2)
            .map(|s| s as i8 + SLOT_MIN)
    }

    pub fn has_aux(&self) -> bool {
        (GEN_VARS..NVARS).any(|i| self.get(i) > 0)
    }

    /// Split into the part inside the given slot mask and the rest.
    pub fn split_slots(&self, mask: u16) -> (Monomial, Monomial) {
        let mut inside = Monomial::ONE;
        let mut outside = *self;
        for s in 0..SLOT_COUNT {
            if mask & (1 << s) != 0 {
                for g in 0..MAX_GENS {
                    let i = s * MAX_GENS + g;
                    let e = self.get(i);
                    if e > 0 {
                        inside.set(i, e);
                        outside.set(i, 0);
                    }
                }
            }
        }
        (inside, outside)
    }

    /// Split into the auxiliary part and the generator part.
    pub fn split_aux(&self) -> (Monomial, Monomial) {
        let mut aux = Monomial::ONE;
        let mut rest = *self;
        for i in GEN_VARS..NVARS {
            let e = self.get(i);
            if e > 0 {
                aux.set(i, e);
                rest.set(i, 0);
            }
        }
        (aux, rest)
    }
}

impl PartialOrd for Monomial {
    fn partial_cmp(&self, other: &Self) -> Option<Ordering> {
        Some(self.cmp(other))
    }
}

/// Graded lexicographic order on the dense variable index, i.e. on
/// `(slot, generator)` followed by the auxiliary variables.
impl Ord for Monomial {
    fn cmp(&self, other: &Self) -> Ordering {
        self.degree().cmp(&other.degree()).then_with(|| self.0.cmp(&other.0))
    }
}

impl fmt::Debug for Monomial {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.is_one() {
            return write!(f, "1");
        }
        let parts: Vec<String> = self
            .iter()
            .map(|(v, e)| {
                let name = match v {
                    VarId::Gen { gen, slot } => format!("g{gen}[{slot}]"),
                    VarId::S(a) => format!("s{a}"),
                    VarId::T(b) => format!("t{b}"),
                };
                if e == 1 {
                    name
                } else {
                    format!("{name}^{e}")
                }
            })
            .collect();
        write!(f, "{}", parts.join("*"))
    }
}
