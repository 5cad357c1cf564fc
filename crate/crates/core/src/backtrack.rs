//! Depth-first slot filling shared by the Z-family and oracle enumerators.

use crate::btu::Btu;
use crate::perm::{next_lex, Permutation};

pub(crate) type SlotChoices = Box<dyn Iterator<Item = Permutation> + Send>;

/// Fills `depth` slots in order; `choices(level, filled)` yields the options
/// for a level and `accept(level, filled, candidate)` filters them.
pub(crate) struct Backtrack<C, A> {
    depth: usize,
    choices: C,
    accept: A,
    iters: Vec<SlotChoices>,
    filled: Vec<Permutation>,
    done: bool,
}

impl<C, A> Backtrack<C, A>
where
    C: FnMut(usize, &[Permutation]) -> SlotChoices,
    A: FnMut(usize, &[Permutation], &Permutation) -> bool,
{
    pub(crate) fn new(depth: usize, choices: C, accept: A) -> Self {
        Backtrack {
            depth,
            choices,
            accept,
            iters: Vec::new(),
            filled: Vec::new(),
            done: depth == 0,
        }
    }
}

impl<C, A> Iterator for Backtrack<C, A>
where
    C: FnMut(usize, &[Permutation]) -> SlotChoices,
    A: FnMut(usize, &[Permutation], &Permutation) -> bool,
{
    type Item = Btu;

    fn next(&mut self) -> Option<Btu> {
        loop {
            if self.done {
                return None;
            }
            let level = self.filled.len();
            if level == self.depth {
                let out = Btu::new_unchecked(self.filled.clone());
                self.filled.pop();
                return Some(out);
            }
            if self.iters.len() == level {
                let it = (self.choices)(level, &self.filled);
                self.iters.push(it);
            }
            match self.iters[level].next() {
                Some(p) => {
                    if (self.accept)(level, &self.filled, &p) {
                        self.filled.push(p);
                    }
                }
                None => {
                    self.iters.pop();
                    if self.filled.pop().is_none() {
                        self.done = true;
                    }
                }
            }
        }
    }
}

/// All permutations of degree `n` in lexicographic order.
pub(crate) struct LexPermutations {
    current: Vec<usize>,
    exhausted: bool,
}

impl LexPermutations {
    pub(crate) fn new(n: usize) -> Self {
        LexPermutations {
            current: (0..n).collect(),
            exhausted: n == 0,
        }
    }
}

impl Iterator for LexPermutations {
    type Item = Permutation;

    fn next(&mut self) -> Option<Permutation> {
        if self.exhausted {
            return None;
        }
        let out = Permutation::from_zero_based(self.current.clone());
        self.exhausted = !next_lex(&mut self.current);
        Some(out)
    }
}
