use std::fmt::Write as _;

use crate::error::{AlgebraError, Result};

/// Operation tables of a thin algebra without the unit, as produced by a
/// construction. `compose[u][v]` is `u·v` (`u` above `v`), `act[v][h]` plugs a
/// tree of type `h` into the port, and the injections are indexed by letter.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Tables {
    pub compose: Vec<Vec<usize>>,
    pub act: Vec<Vec<usize>>,
    pub omega: Vec<usize>,
    pub inject_left: Vec<Vec<usize>>,
    pub inject_right: Vec<Vec<usize>>,
    pub accepting: Vec<bool>,
}

/// A finite thin algebra. Tree types are `0..num_tree_types()`, context types
/// are `0..num_context_types()`, and the adjoined unit is the extra context
/// index `unit()`. `omega` is undefined on the unit.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct ThinAlgebra {
    letters: usize,
    h: usize,
    v: usize,
    compose: Vec<usize>,
    act: Vec<usize>,
    omega: Vec<usize>,
    inject_left: Vec<usize>,
    inject_right: Vec<usize>,
    accepting: Vec<bool>,
    sharp: usize,
}

impl ThinAlgebra {
    /// Adjoins the unit, checks that every entry is in range and computes the
    /// idempotent exponent.
    pub fn new(t: Tables) -> Result<ThinAlgebra> {
        let h = t.accepting.len();
        let v = t.omega.len();
        let letters = t.inject_left.len();
        let bad = |what: &str| AlgebraError::Inconsistent(format!("malformed {what} table"));
        if t.compose.len() != v || t.compose.iter().any(|r| r.len() != v || r.iter().any(|&x| x >= v)) {
            return Err(bad("compose"));
        }
        if t.act.len() != v || t.act.iter().any(|r| r.len() != h || r.iter().any(|&x| x >= h)) {
            return Err(bad("act"));
        }
        if t.omega.iter().any(|&x| x >= h) {
            return Err(bad("omega"));
        }
        for inj in [&t.inject_left, &t.inject_right] {
            if inj.len() != letters || inj.iter().any(|r| r.len() != h || r.iter().any(|&x| x >= v)) {
                return Err(bad("injection"));
            }
        }
        let unit = v;
        let mut compose = vec![0; (v + 1) * (v + 1)];
        for x in 0..=v {
            for y in 0..=v {
                compose[x * (v + 1) + y] = match (x == unit, y == unit) {
                    (true, _) => y,
                    (false, true) => x,
                    _ => t.compose[x][y],
                };
            }
        }
        let mut act = t.act.concat();
        act.extend(0..h);
        let mut alg = ThinAlgebra {
            letters,
            h,
            v,
            compose,
            act,
            omega: t.omega,
            inject_left: t.inject_left.concat(),
            inject_right: t.inject_right.concat(),
            accepting: t.accepting,
            sharp: 1,
        };
        alg.sharp = sharp_exponent(&alg);
        Ok(alg)
    }

    pub fn num_letters(&self) -> usize {
        self.letters
    }

    pub fn num_tree_types(&self) -> usize {
        self.h
    }

    pub fn num_context_types(&self) -> usize {
        self.v
    }

    pub fn unit(&self) -> usize {
        self.v
    }

    pub fn compose(&self, u: usize, v: usize) -> usize {
        self.compose[u * (self.v + 1) + v]
    }

    pub fn act(&self, v: usize, h: usize) -> usize {
        self.act[v * self.h + h]
    }

    pub fn omega(&self, v: usize) -> usize {
        assert!(v < self.v, "omega of the unit");
        self.omega[v]
    }

    pub fn inject_left(&self, letter: usize, h: usize) -> usize {
        self.inject_left[letter * self.h + h]
    }

    pub fn inject_right(&self, letter: usize, h: usize) -> usize {
        self.inject_right[letter * self.h + h]
    }

    pub fn is_accepting(&self, h: usize) -> bool {
        self.accepting[h]
    }

    pub fn accepting(&self) -> &[bool] {
        &self.accepting
    }

    pub fn sharp(&self) -> usize {
        self.sharp
    }

    /// `v^n`, with `v^0` the unit.
    pub fn power(&self, v: usize, n: usize) -> usize {
        (0..n).fold(self.unit(), |acc, _| self.compose(acc, v))
    }

    /// `v^♯`.
    pub fn sharp_power(&self, v: usize) -> usize {
        self.power(v, self.sharp)
    }

    /// The tree types `h` with `act(v, h)` accepting, i.e. the quotient
    /// `v⁻¹(L)`. `v` may be the unit.
    pub fn language_quotient(&self, v: usize) -> Vec<bool> {
        (0..self.h).map(|h| self.accepting[self.act(v, h)]).collect()
    }

    /// Every failed axiom instance, described in words; at most `limit` of them.
    pub fn violations(&self, limit: usize) -> Vec<String> {
        let mut out = Vec::new();
        let mut report = |s: String| {
            if out.len() < limit {
                out.push(s);
            }
        };
        let (v, h, unit) = (self.v, self.h, self.unit());
        for x in 0..=v {
            if self.compose(unit, x) != x || self.compose(x, unit) != x {
                report(format!("unit is not neutral for compose at v{x}"));
            }
            for y in 0..=v {
                let xy = self.compose(x, y);
                for z in 0..=v {
                    if self.compose(xy, z) != self.compose(x, self.compose(y, z)) {
                        report(format!("compose not associative at (v{x}, v{y}, v{z})"));
                    }
                }
                for t in 0..h {
                    if self.act(xy, t) != self.act(x, self.act(y, t)) {
                        report(format!("action law fails at (v{x}, v{y}, h{t})"));
                    }
                }
            }
        }
        for t in 0..h {
            if self.act(unit, t) != t {
                report(format!("unit does not act trivially on h{t}"));
            }
        }
        for x in 0..v {
            for n in 1..=3 {
                if self.omega(self.power(x, n)) != self.omega(x) {
                    report(format!("omega(v{x}^{n}) differs from omega(v{x})"));
                }
            }
            for y in 0..v {
                if self.omega(self.compose(x, y)) != self.act(x, self.omega(self.compose(y, x))) {
                    report(format!("omega(uv) != u·omega(vu) at (v{x}, v{y})"));
                }
            }
            let e = self.sharp_power(x);
            if self.compose(e, e) != e {
                report(format!("v{x}^sharp is not idempotent"));
            }
        }
        out
    }

    /// Structured text listing of every table in carrier order.
    pub fn dump(&self, letter_names: &[String]) -> String {
        let mut s = String::new();
        let row = |xs: &mut dyn Iterator<Item = usize>| xs.map(|x| x.to_string()).collect::<Vec<_>>().join(" ");
        writeln!(s, "tree_types {}", self.h).unwrap();
        writeln!(s, "context_types {}", self.v).unwrap();
        writeln!(s, "unit {}", self.unit()).unwrap();
        writeln!(s, "sharp {}", self.sharp).unwrap();
        writeln!(s, "accepting {}", row(&mut (0..self.h).filter(|&t| self.accepting[t]))).unwrap();
        writeln!(s, "compose").unwrap();
        for x in 0..=self.v {
            writeln!(s, "  {x}: {}", row(&mut (0..=self.v).map(|y| self.compose(x, y)))).unwrap();
        }
        writeln!(s, "act").unwrap();
        for x in 0..=self.v {
            writeln!(s, "  {x}: {}", row(&mut (0..self.h).map(|t| self.act(x, t)))).unwrap();
        }
        writeln!(s, "omega {}", row(&mut self.omega.iter().copied())).unwrap();
        for (name, f) in [("inject_left", Self::inject_left as fn(&Self, usize, usize) -> usize), ("inject_right", Self::inject_right)] {
            writeln!(s, "{name}").unwrap();
            for a in 0..self.letters {
                let label = letter_names.get(a).cloned().unwrap_or_else(|| a.to_string());
                writeln!(s, "  {label}: {}", row(&mut (0..self.h).map(|t| f(self, a, t)))).unwrap();
            }
        }
        s
    }
}

/// The least `k ≥ 1` with `v^k = v^{2k}` for every context type `v`.
///
/// Each `v` has a tail `i` and period `p` (`v^{i+p} = v^i`, both minimal);
/// `v^k` is idempotent iff `k ≥ i` and `p` divides `k`.
pub fn sharp_exponent(alg: &ThinAlgebra) -> usize {
    let mut tail = 1;
    let mut period = 1;
    for v in 0..alg.num_context_types() {
        let mut seen = vec![usize::MAX; alg.num_context_types()];
        let (mut x, mut n) = (v, 1);
        while seen[x] == usize::MAX {
            seen[x] = n;
            x = alg.compose(x, v);
            n += 1;
        }
        tail = tail.max(seen[x]);
        period = lcm(period, n - seen[x]);
    }
    tail.div_ceil(period) * period
}

fn lcm(a: usize, b: usize) -> usize {
    let gcd = |mut a: usize, mut b: usize| {
        while b != 0 {
            (a, b) = (b, a % b);
        }
        a
    };
    a / gcd(a, b) * b
}
