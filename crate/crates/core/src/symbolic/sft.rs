use std::collections::HashMap;
use std::fmt;
use std::ops::Deref;

use crate::{Error, Result};

/// A finite word, stored as symbol indices into some [`Sft`] alphabet.
#[derive(Debug, Clone, Default, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct Word(pub Vec<usize>);

impl Word {
    pub fn empty() -> Self {
        Word(Vec::new())
    }

    pub fn concat(&self, other: &Word) -> Word {
        let mut v = self.0.clone();
        v.extend_from_slice(&other.0);
        Word(v)
    }
}

impl Deref for Word {
    type Target = [usize];
    fn deref(&self) -> &[usize] {
        &self.0
    }
}

impl From<Vec<usize>> for Word {
    fn from(v: Vec<usize>) -> Self {
        Word(v)
    }
}

impl From<&[usize]> for Word {
    fn from(v: &[usize]) -> Self {
        Word(v.to_vec())
    }
}

impl fmt::Display for Word {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let parts: Vec<String> = self.0.iter().map(|s| s.to_string()).collect();
        write!(f, "[{}]", parts.join(","))
    }
}

/// Joins symbol names into one name: plain concatenation when every part is a
/// single character, dot-separated otherwise.
pub(crate) fn join_names<S: AsRef<str>>(parts: &[S]) -> String {
    if parts.iter().all(|p| p.as_ref().chars().count() == 1) {
        parts.iter().map(|p| p.as_ref()).collect()
    } else {
        parts.iter().map(|p| p.as_ref()).collect::<Vec<_>>().join(".")
    }
}

/// A one-sided 1-step shift of finite type.
///
/// Construction trims the transition graph to its essential part: symbols
/// without a successor or predecessor are removed until nothing changes.
/// After construction every symbol has both, and the alphabet is nonempty.
#[derive(Debug, Clone, PartialEq)]
pub struct Sft {
    symbols: Vec<String>,
    allowed: Vec<Vec<bool>>,
    succ: Vec<Vec<usize>>,
    pred: Vec<Vec<usize>>,
}

impl Sft {
    /// Builds an SFT from named symbols and allowed 2-words given as index pairs.
    pub fn new<S: Into<String>>(symbols: Vec<S>, transitions: &[(usize, usize)]) -> Result<Self> {
        let symbols: Vec<String> = symbols.into_iter().map(Into::into).collect();
        let k = symbols.len();
        let mut allowed = vec![vec![false; k]; k];
        for &(i, j) in transitions {
            if i >= k || j >= k {
                return Err(Error::Invalid(format!(
                    "transition ({i},{j}) out of range for {k} symbols"
                )));
            }
            allowed[i][j] = true;
        }
        Self::from_matrix(symbols, allowed)
    }

    pub fn from_matrix<S: Into<String>>(symbols: Vec<S>, allowed: Vec<Vec<bool>>) -> Result<Self> {
        let symbols: Vec<String> = symbols.into_iter().map(Into::into).collect();
        let k = symbols.len();
        if allowed.len() != k || allowed.iter().any(|r| r.len() != k) {
            return Err(Error::DimensionMismatch(format!(
                "transition matrix must be {k}x{k}"
            )));
        }
        let mut seen = HashMap::new();
        for (i, s) in symbols.iter().enumerate() {
            if seen.insert(s.as_str(), i).is_some() {
                return Err(Error::Invalid(format!("duplicate symbol {s:?}")));
            }
        }
        let keep = essential_core(&allowed);
        if keep.is_empty() {
            return Err(Error::EmptyShift);
        }
        let symbols: Vec<String> = keep.iter().map(|&i| symbols[i].clone()).collect();
        let allowed: Vec<Vec<bool>> = keep
            .iter()
            .map(|&i| keep.iter().map(|&j| allowed[i][j]).collect())
            .collect();
        Ok(Self::assemble(symbols, allowed))
    }

    fn assemble(symbols: Vec<String>, allowed: Vec<Vec<bool>>) -> Self {
        let k = symbols.len();
        let succ = (0..k)
            .map(|i| (0..k).filter(|&j| allowed[i][j]).collect())
            .collect();
        let pred = (0..k)
            .map(|j| (0..k).filter(|&i| allowed[i][j]).collect())
            .collect();
        Sft {
            symbols,
            allowed,
            succ,
            pred,
        }
    }

    /// Full shift on `k` symbols named `"0"`, `"1"`, ...
    pub fn full(k: usize) -> Result<Self> {
        Self::full_named((0..k).map(|i| i.to_string()).collect())
    }

    pub fn full_named<S: Into<String>>(symbols: Vec<S>) -> Result<Self> {
        let k = symbols.len();
        Self::from_matrix(symbols, vec![vec![true; k]; k])
    }

    /// The golden-mean shift on `{0, 1}` forbidding `11`.
    pub fn golden_mean() -> Self {
        Self::new(vec!["0", "1"], &[(0, 0), (0, 1), (1, 0)]).expect("golden mean is nonempty")
    }

    /// One periodic orbit visiting `symbols` in order.
    pub fn cycle<S: Into<String>>(symbols: Vec<S>) -> Result<Self> {
        let k = symbols.len();
        let t: Vec<(usize, usize)> = (0..k).map(|i| (i, (i + 1) % k)).collect();
        Self::new(symbols, &t)
    }

    /// The one-point system.
    pub fn point() -> Self {
        Self::new(vec!["*"], &[(0, 0)]).expect("point is nonempty")
    }

    pub fn len(&self) -> usize {
        self.symbols.len()
    }

    pub fn is_empty(&self) -> bool {
        self.symbols.is_empty()
    }

    pub fn symbols(&self) -> &[String] {
        &self.symbols
    }

    pub fn symbol(&self, i: usize) -> &str {
        &self.symbols[i]
    }

    pub fn index_of(&self, name: &str) -> Option<usize> {
        self.symbols.iter().position(|s| s == name)
    }

    #[inline]
    pub fn is_allowed(&self, a: usize, b: usize) -> bool {
        self.allowed[a][b]
    }

    #[inline]
    pub fn successors(&self, a: usize) -> &[usize] {
        &self.succ[a]
    }

    #[inline]
    pub fn predecessors(&self, a: usize) -> &[usize] {
        &self.pred[a]
    }

    pub fn transition_matrix(&self) -> &[Vec<bool>] {
        &self.allowed
    }

    /// Allowed 2-words as index pairs, lexicographic.
    pub fn transitions(&self) -> Vec<(usize, usize)> {
        (0..self.len())
            .flat_map(|i| self.succ[i].iter().map(move |&j| (i, j)))
            .collect()
    }

    pub fn is_full(&self) -> bool {
        self.allowed.iter().all(|r| r.iter().all(|&b| b))
    }

    pub fn is_admissible(&self, w: &[usize]) -> bool {
        w.iter().all(|&s| s < self.len()) && w.windows(2).all(|p| self.allowed[p[0]][p[1]])
    }

    pub fn check_word(&self, w: &[usize]) -> Result<()> {
        if let Some(&s) = w.iter().find(|&&s| s >= self.len()) {
            return Err(Error::InadmissibleWord {
                word: w.to_vec(),
                reason: format!("symbol index {s} out of range"),
            });
        }
        if let Some(p) = w.windows(2).find(|p| !self.allowed[p[0]][p[1]]) {
            return Err(Error::InadmissibleWord {
                word: w.to_vec(),
                reason: format!(
                    "forbidden transition {}->{}",
                    self.symbols[p[0]], self.symbols[p[1]]
                ),
            });
        }
        Ok(())
    }

    /// All admissible `n`-words in lexicographic order of symbol indices.
    pub fn enumerate_words(&self, n: usize) -> Vec<Word> {
        let mut out = Vec::new();
        if n == 0 {
            out.push(Word::empty());
            return out;
        }
        let mut stack = Vec::with_capacity(n);
        for a in 0..self.len() {
            stack.push(a);
            self.extend_words(&mut stack, n, &mut out);
            stack.pop();
        }
        out
    }

    fn extend_words(&self, stack: &mut Vec<usize>, n: usize, out: &mut Vec<Word>) {
        if stack.len() == n {
            out.push(Word(stack.clone()));
            return;
        }
        let last = *stack.last().expect("nonempty prefix");
        for &b in &self.succ[last] {
            stack.push(b);
            self.extend_words(stack, n, out);
            stack.pop();
        }
    }

    /// Number of admissible `n`-words, by transfer-matrix counting.
    pub fn count_words(&self, n: usize) -> u128 {
        if n == 0 {
            return 1;
        }
        let mut v = vec![1u128; self.len()];
        for _ in 1..n {
            let mut next = vec![0u128; self.len()];
            for (a, &c) in v.iter().enumerate() {
                for &b in &self.succ[a] {
                    next[b] += c;
                }
            }
            v = next;
        }
        v.iter().sum()
    }

    /// Renders a word with this alphabet's names.
    pub fn format_word(&self, w: &[usize]) -> String {
        let names: Vec<&str> = w.iter().map(|&s| self.symbols[s].as_str()).collect();
        if names.is_empty() {
            return String::new();
        }
        if names.iter().all(|n| n.chars().count() == 1) {
            names.concat()
        } else {
            names.join(",")
        }
    }

    /// Parses a word from symbol names: comma-separated, a single symbol
    /// name, or a run of one-character names.
    pub fn parse_word(&self, text: &str) -> Result<Word> {
        let text = text.trim();
        if text.is_empty() {
            return Ok(Word::empty());
        }
        let lookup = |s: &str| {
            self.index_of(s)
                .ok_or_else(|| Error::UnknownSymbol(s.to_string()))
        };
        if text.contains(',') {
            return text.split(',').map(|s| lookup(s.trim())).collect::<Result<Vec<_>>>().map(Word);
        }
        if let Some(i) = self.index_of(text) {
            return Ok(Word(vec![i]));
        }
        text.chars()
            .map(|c| lookup(&c.to_string()))
            .collect::<Result<Vec<_>>>()
            .map(Word)
    }

    /// The m-block presentation: symbols are admissible m-words, and `u -> v`
    /// is allowed when `u` and `v` overlap in `m - 1` symbols.
    pub fn higher_block(&self, m: usize) -> Result<(Sft, BlockRecoding)> {
        if m == 0 {
            return Err(Error::Invalid("block length must be positive".into()));
        }
        let blocks = self.enumerate_words(m);
        let index: HashMap<Vec<usize>, usize> = blocks
            .iter()
            .enumerate()
            .map(|(i, b)| (b.0.clone(), i))
            .collect();
        let k = blocks.len();
        let mut allowed = vec![vec![false; k]; k];
        for (i, u) in blocks.iter().enumerate() {
            for &s in &self.succ[u[m - 1]] {
                let mut next = u[1..].to_vec();
                next.push(s);
                if let Some(&j) = index.get(&next) {
                    allowed[i][j] = true;
                }
            }
        }
        let names = blocks
            .iter()
            .map(|b| {
                let parts: Vec<&str> = b.iter().map(|&s| self.symbols[s].as_str()).collect();
                join_names(&parts)
            })
            .collect::<Vec<_>>();
        let sft = Sft::from_matrix(names, allowed)?;
        // every block of an essential SFT is itself essential, so no symbol was trimmed
        debug_assert_eq!(sft.len(), k);
        Ok((
            sft,
            BlockRecoding {
                m,
                overlapping: true,
                blocks,
                index,
            },
        ))
    }

    /// The k-th power system: symbols are admissible k-words, and `u -> v` is
    /// allowed when `u` followed by `v` is admissible.
    pub fn power(&self, k: usize) -> Result<(Sft, BlockRecoding)> {
        if k == 0 {
            return Err(Error::Invalid("power must be positive".into()));
        }
        let blocks = self.enumerate_words(k);
        let index: HashMap<Vec<usize>, usize> = blocks
            .iter()
            .enumerate()
            .map(|(i, b)| (b.0.clone(), i))
            .collect();
        let allowed: Vec<Vec<bool>> = blocks
            .iter()
            .map(|u| {
                blocks
                    .iter()
                    .map(|v| self.allowed[u[k - 1]][v[0]])
                    .collect()
            })
            .collect();
        let names = blocks
            .iter()
            .map(|b| {
                let parts: Vec<&str> = b.iter().map(|&s| self.symbols[s].as_str()).collect();
                join_names(&parts)
            })
            .collect::<Vec<_>>();
        let sft = Sft::from_matrix(names, allowed)?;
        debug_assert_eq!(sft.len(), blocks.len());
        Ok((
            sft,
            BlockRecoding {
                m: k,
                overlapping: false,
                blocks,
                index,
            },
        ))
    }

    /// Direct product with componentwise transitions.
    pub fn product(&self, other: &Sft) -> Result<Sft> {
        let (k1, k2) = (self.len(), other.len());
        let mut names = Vec::with_capacity(k1 * k2);
        for a in &self.symbols {
            for b in &other.symbols {
                names.push(join_names(&[a.as_str(), b.as_str()]));
            }
        }
        let allowed = (0..k1 * k2)
            .map(|i| {
                (0..k1 * k2)
                    .map(|j| self.allowed[i / k2][j / k2] && other.allowed[i % k2][j % k2])
                    .collect()
            })
            .collect();
        Sft::from_matrix(names, allowed)
    }

    /// True when the transition graph is strongly connected.
    pub fn is_irreducible(&self) -> bool {
        let reach = |adj: &Vec<Vec<usize>>| {
            let mut seen = vec![false; self.len()];
            let mut stack = vec![0usize];
            seen[0] = true;
            while let Some(a) = stack.pop() {
                for &b in &adj[a] {
                    if !seen[b] {
                        seen[b] = true;
                        stack.push(b);
                    }
                }
            }
            seen.iter().all(|&s| s)
        };
        reach(&self.succ) && reach(&self.pred)
    }
}

/// Keeps only symbols lying on a bi-infinite path: repeatedly drops
/// symbols with no surviving successor or predecessor.
fn essential_core(allowed: &[Vec<bool>]) -> Vec<usize> {
    let k = allowed.len();
    let mut alive = vec![true; k];
    loop {
        let mut changed = false;
        for i in 0..k {
            if !alive[i] {
                continue;
            }
            let has_succ = (0..k).any(|j| alive[j] && allowed[i][j]);
            let has_pred = (0..k).any(|j| alive[j] && allowed[j][i]);
            if !(has_succ && has_pred) {
                alive[i] = false;
                changed = true;
            }
        }
        if !changed {
            break;
        }
    }
    (0..k).filter(|&i| alive[i]).collect()
}

/// Translation between words of a shift and words of a block presentation.
///
/// For an overlapping (higher-block) recoding of block length `m`, an
/// `(n + m - 1)`-word corresponds to an `n`-word of blocks. For a power
/// recoding, a `k n`-word corresponds to an `n`-word of blocks.
#[derive(Debug, Clone, PartialEq)]
pub struct BlockRecoding {
    m: usize,
    overlapping: bool,
    blocks: Vec<Word>,
    index: HashMap<Vec<usize>, usize>,
}

impl BlockRecoding {
    pub fn block_len(&self) -> usize {
        self.m
    }

    pub fn blocks(&self) -> &[Word] {
        &self.blocks
    }

    pub fn block(&self, i: usize) -> &Word {
        &self.blocks[i]
    }

    pub fn block_index(&self, w: &[usize]) -> Option<usize> {
        self.index.get(w).copied()
    }

    pub fn first_symbol(&self, i: usize) -> usize {
        self.blocks[i][0]
    }

    /// Original word to block word.
    pub fn encode(&self, w: &[usize]) -> Result<Word> {
        let m = self.m;
        let bad = || Error::InadmissibleWord {
            word: w.to_vec(),
            reason: "no block translation".into(),
        };
        if self.overlapping {
            if w.len() < m {
                return Err(bad());
            }
            (0..=w.len() - m)
                .map(|s| self.block_index(&w[s..s + m]).ok_or_else(bad))
                .collect::<Result<Vec<_>>>()
                .map(Word)
        } else {
            if !w.len().is_multiple_of(m) {
                return Err(bad());
            }
            w.chunks(m)
                .map(|c| self.block_index(c).ok_or_else(bad))
                .collect::<Result<Vec<_>>>()
                .map(Word)
        }
    }

    /// Block word to original word.
    pub fn decode(&self, w: &[usize]) -> Word {
        if w.is_empty() {
            return Word::empty();
        }
        if self.overlapping {
            let mut out = self.blocks[w[0]].0.clone();
            for &b in &w[1..] {
                out.push(self.blocks[b][self.m - 1]);
            }
            Word(out)
        } else {
            Word(w.iter().flat_map(|&b| self.blocks[b].iter().copied()).collect())
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    /// Brute-force filter over all `k^n` sequences.
    fn brute_words(s: &Sft, n: usize) -> Vec<Word> {
        let k = s.len();
        let total = k.pow(n as u32);
        let mut out = Vec::new();
        for mut code in 0..total {
            let mut w = vec![0; n];
            for i in (0..n).rev() {
                w[i] = code % k;
                code /= k;
            }
            if s.is_admissible(&w) {
                out.push(Word(w));
            }
        }
        out
    }

    #[test]
    fn full_shift_words() {
        let s = Sft::full(2).unwrap();
        assert_eq!(s.enumerate_words(3).len(), 8);
        assert_eq!(s.enumerate_words(0), vec![Word::empty()]);
    }

    #[test]
    fn golden_mean_three_words() {
        let g = Sft::golden_mean();
        let words = g.enumerate_words(3);
        assert_eq!(words, brute_words(&g, 3));
        let rendered: Vec<String> = words.iter().map(|w| g.format_word(w)).collect();
        assert_eq!(rendered, ["000", "001", "010", "100", "101"]);
    }

    #[test]
    fn trimming_removes_dead_ends() {
        // 2 has no successor, 3 has no predecessor
        let s = Sft::new(vec!["a", "b", "c", "d"], &[(0, 1), (1, 0), (1, 2), (3, 0)]).unwrap();
        assert_eq!(s.symbols(), ["a", "b"]);
        let again = Sft::from_matrix(s.symbols().to_vec(), s.transition_matrix().to_vec()).unwrap();
        assert_eq!(again, s);
    }

    #[test]
    fn empty_after_trimming() {
        let r = Sft::new(vec!["a", "b"], &[(0, 1)]);
        assert_eq!(r, Err(Error::EmptyShift));
    }

    #[test]
    fn golden_two_block_recoding() {
        let g = Sft::golden_mean();
        let (r, rec) = g.higher_block(2).unwrap();
        assert_eq!(r.symbols(), ["00", "01", "10"]);
        let t: Vec<(String, String)> = r
            .transitions()
            .into_iter()
            .map(|(a, b)| (r.symbol(a).to_string(), r.symbol(b).to_string()))
            .collect();
        let expect = [("00", "00"), ("00", "01"), ("01", "10"), ("10", "00"), ("10", "01")];
        assert_eq!(t.len(), 5);
        for (a, b) in expect {
            assert!(t.contains(&(a.to_string(), b.to_string())));
        }
        let w = Word(vec![0, 1, 0, 0, 1]);
        let enc = rec.encode(&w).unwrap();
        assert_eq!(enc.len(), 4);
        assert!(r.is_admissible(&enc));
        assert_eq!(rec.decode(&enc), w);
    }

    #[test]
    fn one_block_recoding_is_identity() {
        let g = Sft::golden_mean();
        let (r, _) = g.higher_block(1).unwrap();
        assert_eq!(r, g);
    }

    #[test]
    fn full_shift_two_block_recoding() {
        for k in 2..=4 {
            let (r, _) = Sft::full(k).unwrap().higher_block(2).unwrap();
            assert_eq!(r.len(), k * k);
            assert!((0..r.len()).all(|a| r.successors(a).len() == k));
        }
    }

    #[test]
    fn power_words_match_long_words() {
        let g = Sft::golden_mean();
        let (p, rec) = g.power(3).unwrap();
        for n in 1..=3 {
            let long = g.enumerate_words(3 * n);
            let short = p.enumerate_words(n);
            assert_eq!(long.len(), short.len());
            let decoded: Vec<Word> = short.iter().map(|w| rec.decode(w)).collect();
            assert_eq!(decoded, long);
        }
    }

    #[test]
    fn check_word_errors() {
        let g = Sft::golden_mean();
        assert!(g.check_word(&[0, 1, 1]).is_err());
        assert!(g.check_word(&[0, 5]).is_err());
        assert!(g.check_word(&[1, 0, 1]).is_ok());
    }

    #[test]
    fn parse_and_format() {
        let c = Sft::cycle(vec!["a", "b"]).unwrap();
        assert_eq!(c.parse_word("ab").unwrap(), Word(vec![0, 1]));
        assert_eq!(c.parse_word("b,a").unwrap(), Word(vec![1, 0]));
        assert!(c.parse_word("x").is_err());
    }

    #[test]
    fn irreducibility() {
        assert!(Sft::golden_mean().is_irreducible());
        let two_points = Sft::new(vec!["c", "d"], &[(0, 0), (1, 1)]).unwrap();
        assert!(!two_points.is_irreducible());
    }
}
