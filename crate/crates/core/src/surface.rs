//! Combinatorics of the n-punctured sphere: generator words, the curve
//! families `b_i`, `d_i`, `e_i` and pair curves, twist sides and the
//! presentations adapted to non-standard pants curves.
//!
//! Generators are 1-based; a word is a sequence of signed indices read left
//! to right as a product, `-k` standing for `c_k⁻¹`.

use std::fmt;

use crate::error::{Error, Result};

pub type Word = Vec<i32>;

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct SphereTopology {
    n: usize,
}

impl SphereTopology {
    pub fn new(n: usize) -> Result<Self> {
        if n < 4 {
            return Err(Error::TooFewPunctures(n));
        }
        Ok(SphereTopology { n })
    }

    pub fn n(&self) -> usize {
        self.n
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub enum CurveLabel {
    /// `b_i = (c_1⋯c_{i+1})⁻¹`
    B(usize),
    /// `d_i = (c_{i+1}c_{i+2})⁻¹`
    D(usize),
    /// `e_i = (c_1⋯c_i c_{i+2})⁻¹`
    E(usize),
    /// `c_j c_{j+1}`
    Pair(usize),
    Custom,
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct CurveClass {
    label: CurveLabel,
    word: Word,
}

impl CurveClass {
    pub fn b(n: usize, i: usize) -> Result<Self> {
        check_family_index("b", n, i, n.saturating_sub(3))?;
        Ok(CurveClass {
            label: CurveLabel::B(i),
            word: (1..=i as i32 + 1).rev().map(|k| -k).collect(),
        })
    }

    pub fn d(n: usize, i: usize) -> Result<Self> {
        check_family_index("d", n, i, n.saturating_sub(3))?;
        let i = i as i32;
        Ok(CurveClass {
            label: CurveLabel::D(i as usize),
            word: vec![-(i + 2), -(i + 1)],
        })
    }

    pub fn e(n: usize, i: usize) -> Result<Self> {
        check_family_index("e", n, i, n.saturating_sub(3))?;
        let mut word = vec![-(i as i32 + 2)];
        word.extend((1..=i as i32).rev().map(|k| -k));
        Ok(CurveClass {
            label: CurveLabel::E(i),
            word,
        })
    }

    pub fn pair(n: usize, j: usize) -> Result<Self> {
        check_family_index("p", n, j, n.saturating_sub(1))?;
        Ok(CurveClass {
            label: CurveLabel::Pair(j),
            word: vec![j as i32, j as i32 + 1],
        })
    }

    /// A curve given only by its word; it has no twist side.
    pub fn custom(word: Word) -> Result<Self> {
        let word = reduce_word(&word);
        if word.is_empty() || word.contains(&0) {
            return Err(Error::BadLabel(format!("{word:?}")));
        }
        Ok(CurveClass {
            label: CurveLabel::Custom,
            word,
        })
    }

    /// Parses labels such as `"b3"`, `"d1"`, `"e2"`, `"p4"`.
    pub fn parse(label: &str, n: usize) -> Result<Self> {
        let bad = || Error::BadLabel(label.to_string());
        let mut chars = label.chars();
        let family = chars.next().ok_or_else(bad)?;
        let index: usize = chars.as_str().parse().map_err(|_| bad())?;
        match family {
            'b' => CurveClass::b(n, index),
            'd' => CurveClass::d(n, index),
            'e' => CurveClass::e(n, index),
            'p' => CurveClass::pair(n, index),
            _ => Err(bad()),
        }
    }

    pub fn label(&self) -> CurveLabel {
        self.label
    }

    pub fn word(&self) -> &[i32] {
        &self.word
    }
}

fn check_family_index(family: &str, n: usize, i: usize, max: usize) -> Result<()> {
    SphereTopology::new(n)?;
    if i == 0 || i > max {
        return Err(Error::BadLabel(format!("{family}{i} (n = {n})")));
    }
    Ok(())
}

impl fmt::Display for CurveClass {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self.label {
            CurveLabel::B(i) => write!(f, "b{i}"),
            CurveLabel::D(i) => write!(f, "d{i}"),
            CurveLabel::E(i) => write!(f, "e{i}"),
            CurveLabel::Pair(j) => write!(f, "p{j}"),
            CurveLabel::Custom => write!(f, "w{:?}", self.word),
        }
    }
}

/// Free reduction of a word.
pub fn reduce_word(word: &[i32]) -> Word {
    let mut out: Word = Vec::with_capacity(word.len());
    for &g in word {
        if out.last() == Some(&-g) {
            out.pop();
        } else {
            out.push(g);
        }
    }
    out
}

pub fn invert_word(word: &[i32]) -> Word {
    word.iter().rev().map(|g| -g).collect()
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct StandardCurves {
    pub b: Vec<CurveClass>,
    pub d: Vec<CurveClass>,
    pub e: Vec<CurveClass>,
}

impl StandardCurves {
    /// All curves, in the order b, d, e.
    pub fn all(&self) -> Vec<CurveClass> {
        self.b
            .iter()
            .chain(&self.d)
            .chain(&self.e)
            .cloned()
            .collect()
    }
}

pub fn standard_curves(n: usize) -> Result<StandardCurves> {
    SphereTopology::new(n)?;
    let m = n - 3;
    Ok(StandardCurves {
        b: (1..=m).map(|i| CurveClass::b(n, i)).collect::<Result<_>>()?,
        d: (1..=m).map(|i| CurveClass::d(n, i)).collect::<Result<_>>()?,
        e: (1..=m).map(|i| CurveClass::e(n, i)).collect::<Result<_>>()?,
    })
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct TwistSide {
    pub inside: Vec<usize>,
    pub outside: Vec<usize>,
}

/// Which generators the twist along `curve` acts on.
pub fn twist_side(curve: &CurveClass, n: usize) -> Result<TwistSide> {
    let inside: Vec<usize> = match curve.label {
        CurveLabel::B(i) => (1..=i + 1).collect(),
        CurveLabel::D(i) => vec![i + 1, i + 2],
        CurveLabel::E(i) => (1..=i).chain(std::iter::once(i + 2)).collect(),
        CurveLabel::Pair(j) => vec![j, j + 1],
        CurveLabel::Custom => return Err(Error::NoTwistSide(curve.to_string())),
    };
    if inside.iter().any(|&k| k > n) {
        return Err(Error::BadLabel(format!("{curve} (n = {n})")));
    }
    let outside = (1..=n).filter(|k| !inside.contains(k)).collect();
    Ok(TwistSide { inside, outside })
}

/// A presentation `(c'_1, …, c'_n)` with `c'_1⋯c'_n = 1`, each new generator
/// a word in the old ones, in which the standard `b'_k` are the pants curves.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct PantsDecomposition {
    generators: Vec<Word>,
    punctures: Vec<usize>,
    curves: Vec<CurveClass>,
}

impl PantsDecomposition {
    pub fn standard(n: usize) -> Result<Self> {
        let curves = standard_curves(n)?.b;
        Ok(PantsDecomposition {
            generators: (1..=n as i32).map(|k| vec![k]).collect(),
            punctures: (1..=n).collect(),
            curves,
        })
    }

    /// Cyclic relabelling `(c_{i+1}, …, c_n, c_1, …, c_i)`; its first pants curve is `d_i`.
    pub fn through_d(n: usize, i: usize) -> Result<Self> {
        CurveClass::d(n, i)?;
        let punctures: Vec<usize> = (i + 1..=n).chain(1..=i).collect();
        let generators = punctures.iter().map(|&k| vec![k as i32]).collect();
        Ok(PantsDecomposition::from_generators(generators, punctures))
    }

    /// `(c_1, …, c_i, c_{i+2}, …, c_n, Y⁻¹c_{i+1}Y)` with `Y = c_{i+2}⋯c_n`;
    /// its `i`-th pants curve is `e_i`.
    pub fn through_e(n: usize, i: usize) -> Result<Self> {
        CurveClass::e(n, i)?;
        let mut punctures: Vec<usize> = (1..=i).chain(i + 2..=n).collect();
        punctures.push(i + 1);
        let mut generators: Vec<Word> = punctures[..n - 1].iter().map(|&k| vec![k as i32]).collect();
        let y: Word = (i as i32 + 2..=n as i32).collect();
        let mut last = invert_word(&y);
        last.push(i as i32 + 1);
        last.extend(&y);
        generators.push(last);
        Ok(PantsDecomposition::from_generators(generators, punctures))
    }

    fn from_generators(generators: Vec<Word>, punctures: Vec<usize>) -> Self {
        let n = generators.len();
        let curves = (1..=n - 3)
            .map(|k| {
                let prefix: Word = generators[..=k].iter().flatten().copied().collect();
                let word = reduce_word(&invert_word(&prefix));
                CurveClass {
                    label: identify(&word, n),
                    word,
                }
            })
            .collect();
        PantsDecomposition {
            generators,
            punctures,
            curves,
        }
    }

    pub fn n(&self) -> usize {
        self.generators.len()
    }

    pub fn generators(&self) -> &[Word] {
        &self.generators
    }

    /// `punctures()[k]` is the original puncture that new generator `k` encircles.
    pub fn punctures(&self) -> &[usize] {
        &self.punctures
    }

    pub fn curves(&self) -> &[CurveClass] {
        &self.curves
    }
}

fn identify(word: &[i32], n: usize) -> CurveLabel {
    let families = standard_curves(n).map(|s| s.all()).unwrap_or_default();
    families
        .into_iter()
        .find(|c| c.word == word)
        .map(|c| c.label)
        .unwrap_or(CurveLabel::Custom)
}
