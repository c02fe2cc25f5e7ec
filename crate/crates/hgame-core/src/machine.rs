use crate::error::{CoreError, Result};

/// Moore machine: the output is attached to states and read after each update.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct MooreMachine {
    pub input_names: Vec<String>,
    pub output_names: Vec<String>,
    pub initial: usize,
    /// `delta[m][x]`
    pub delta: Vec<Vec<usize>>,
    /// `out[m]`
    pub out: Vec<usize>,
}

impl MooreMachine {
    pub fn new(
        input_names: Vec<String>,
        output_names: Vec<String>,
        initial: usize,
        delta: Vec<Vec<usize>>,
        out: Vec<usize>,
    ) -> Result<Self> {
        let m = MooreMachine { input_names, output_names, initial, delta, out };
        m.check()?;
        Ok(m)
    }

    fn check(&self) -> Result<()> {
        let n = self.delta.len();
        if n == 0 || self.initial >= n || self.out.len() != n {
            return Err(CoreError::MalformedMachine("state count mismatch".into()));
        }
        for row in &self.delta {
            if row.len() != self.input_names.len() || row.iter().any(|&t| t >= n) {
                return Err(CoreError::MalformedMachine("update is not total".into()));
            }
        }
        if self.out.iter().any(|&o| o >= self.output_names.len()) {
            return Err(CoreError::MalformedMachine("output outside alphabet".into()));
        }
        Ok(())
    }

    /// A one-state machine emitting `c` forever.
    pub fn constant(input_names: Vec<String>, output_names: Vec<String>, c: usize) -> Self {
        let k = input_names.len();
        MooreMachine { input_names, output_names, initial: 0, delta: vec![vec![0; k]], out: vec![c] }
    }

    pub fn num_states(&self) -> usize {
        self.delta.len()
    }

    pub fn num_inputs(&self) -> usize {
        self.input_names.len()
    }

    pub fn step(&self, m: usize, x: usize) -> usize {
        self.delta[m][x]
    }

    /// μ(word), starting from the initial state.
    pub fn state_after(&self, word: &[usize]) -> Result<usize> {
        let mut m = self.initial;
        for &x in word {
            if x >= self.num_inputs() {
                return Err(CoreError::UnknownLetter { letter: x, size: self.num_inputs() });
            }
            m = self.delta[m][x];
        }
        Ok(m)
    }

    /// ν(μ(word)); for the empty word this is ν(m0).
    pub fn output_after(&self, word: &[usize]) -> Result<usize> {
        Ok(self.out[self.state_after(word)?])
    }

    /// Output word of equal length: letter `k` is ν(μ(x0…xk)).
    pub fn run(&self, word: &[usize]) -> Result<Vec<usize>> {
        let mut m = self.initial;
        let mut res = Vec::with_capacity(word.len());
        for &x in word {
            if x >= self.num_inputs() {
                return Err(CoreError::UnknownLetter { letter: x, size: self.num_inputs() });
            }
            m = self.delta[m][x];
            res.push(self.out[m]);
        }
        Ok(res)
    }

    /// Machine reading `y` where `f[y]` is the letter fed to `self`.
    pub fn precompose(&self, input_names: Vec<String>, f: &[usize]) -> MooreMachine {
        let delta = self.delta.iter().map(|row| f.iter().map(|&x| row[x]).collect()).collect();
        MooreMachine {
            input_names,
            output_names: self.output_names.clone(),
            initial: self.initial,
            delta,
            out: self.out.clone(),
        }
    }

    /// Restricts to states reachable from the initial state, renumbered in BFS order.
    pub fn reachable(&self) -> MooreMachine {
        let mut id = vec![usize::MAX; self.num_states()];
        let mut order = vec![self.initial];
        id[self.initial] = 0;
        let mut k = 0;
        while k < order.len() {
            let m = order[k];
            k += 1;
            for &t in &self.delta[m] {
                if id[t] == usize::MAX {
                    id[t] = order.len();
                    order.push(t);
                }
            }
        }
        MooreMachine {
            input_names: self.input_names.clone(),
            output_names: self.output_names.clone(),
            initial: 0,
            delta: order.iter().map(|&m| self.delta[m].iter().map(|&t| id[t]).collect()).collect(),
            out: order.iter().map(|&m| self.out[m]).collect(),
        }
    }

    /// Merges output-equivalent states (Moore partition refinement) after dropping unreachable ones.
    pub fn minimize(&self) -> MooreMachine {
        let r = self.reachable();
        let n = r.num_states();
        let mut class: Vec<usize> = r.out.clone();
        loop {
            let mut keys: Vec<(usize, Vec<usize>)> = (0..n)
                .map(|m| (class[m], r.delta[m].iter().map(|&t| class[t]).collect()))
                .collect();
            let mut sorted = keys.clone();
            sorted.sort();
            sorted.dedup();
            let next: Vec<usize> = keys
                .drain(..)
                .map(|k| sorted.binary_search(&k).expect("present"))
                .collect();
            let before = {
                let mut c = class.clone();
                c.sort();
                c.dedup();
                c.len()
            };
            let changed = sorted.len() != before;
            class = next;
            if !changed {
                break;
            }
        }
        // renumber classes in order of first reachable occurrence
        let mut rename = vec![usize::MAX; n];
        let mut count = 0;
        for m in 0..n {
            if rename[class[m]] == usize::MAX {
                rename[class[m]] = count;
                count += 1;
            }
        }
        let mut delta = vec![Vec::new(); count];
        let mut out = vec![0; count];
        for m in 0..n {
            let c = rename[class[m]];
            if delta[c].is_empty() {
                delta[c] = r.delta[m].iter().map(|&t| rename[class[t]]).collect();
                out[c] = r.out[m];
            }
        }
        MooreMachine {
            input_names: r.input_names,
            output_names: r.output_names,
            initial: rename[class[0]],
            delta,
            out,
        }
        .reachable()
    }
}

/// Mealy machine: outputs are attached to transitions.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct MealyMachine {
    pub input_names: Vec<String>,
    pub output_names: Vec<String>,
    pub initial: usize,
    pub delta: Vec<Vec<usize>>,
    /// `out[m][x]`
    pub out: Vec<Vec<usize>>,
}

impl MealyMachine {
    pub fn new(
        input_names: Vec<String>,
        output_names: Vec<String>,
        initial: usize,
        delta: Vec<Vec<usize>>,
        out: Vec<Vec<usize>>,
    ) -> Result<Self> {
        let m = MealyMachine { input_names, output_names, initial, delta, out };
        let n = m.delta.len();
        if n == 0 || m.initial >= n || m.out.len() != n {
            return Err(CoreError::MalformedMachine("state count mismatch".into()));
        }
        for (row, orow) in m.delta.iter().zip(&m.out) {
            if row.len() != m.input_names.len() || orow.len() != m.input_names.len() {
                return Err(CoreError::MalformedMachine("update or output not total".into()));
            }
            if row.iter().any(|&t| t >= n) || orow.iter().any(|&o| o >= m.output_names.len()) {
                return Err(CoreError::MalformedMachine("index out of range".into()));
            }
        }
        Ok(m)
    }

    pub fn num_states(&self) -> usize {
        self.delta.len()
    }

    pub fn num_inputs(&self) -> usize {
        self.input_names.len()
    }

    pub fn run(&self, word: &[usize]) -> Result<Vec<usize>> {
        let mut m = self.initial;
        let mut res = Vec::with_capacity(word.len());
        for &x in word {
            if x >= self.num_inputs() {
                return Err(CoreError::UnknownLetter { letter: x, size: self.num_inputs() });
            }
            res.push(self.out[m][x]);
            m = self.delta[m][x];
        }
        Ok(res)
    }

    /// Equivalent Moore machine over states (m, last output); the machine outputs `initial_out`
    /// before any input.
    pub fn to_moore(&self, initial_out: usize) -> MooreMachine {
        let no = self.output_names.len();
        let code = |m: usize, o: usize| m * no + o;
        let mut delta = Vec::with_capacity(self.num_states() * no);
        let mut out = Vec::with_capacity(self.num_states() * no);
        for m in 0..self.num_states() {
            for o in 0..no {
                delta.push((0..self.num_inputs()).map(|x| code(self.delta[m][x], self.out[m][x])).collect());
                out.push(o);
            }
        }
        MooreMachine {
            input_names: self.input_names.clone(),
            output_names: self.output_names.clone(),
            initial: code(self.initial, initial_out),
            delta,
            out,
        }
        .reachable()
    }
}
