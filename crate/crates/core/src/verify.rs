//! Exhaustive consistency suites over all ε-patterns up to a given length.

use std::fmt;

use crate::correlators::{enumerate_pairings, pair_sum_correlator};
use crate::qalgebra::{correlator_recursive, Eps, Mode, Word};
use crate::symbolic::ScalarExpr;
use crate::wick::{limit_of_pair_sum, limit_rewrite_correlator, noncrossing_match, wick_correlator};

pub const MAX_N: usize = 6;
pub const CATALAN: [usize; 6] = [1, 2, 5, 14, 42, 132];

/// All `2^len` creator/annihilator patterns of length `len`, in binary order
/// with `a` as 0 at the leftmost position.
pub fn eps_patterns(len: usize) -> impl Iterator<Item = Vec<Eps>> {
    (0..1u64 << len).map(move |bits| {
        (0..len).map(|i| if bits >> (len - 1 - i) & 1 == 1 { Eps::Create } else { Eps::Annihilate }).collect()
    })
}

pub fn pattern_string(p: &[Eps]) -> String {
    p.iter().map(|e| e.symbol()).collect::<Vec<_>>().join(" ")
}

/// Words built from a pattern: scalar mode gives one word, polarized mode
/// gives an all-equal and a cyclic polarization assignment.
pub fn words_for(p: &[Eps], mode: Mode) -> Vec<Word> {
    match mode {
        Mode::Scalar => vec![Word::from_pattern(p)],
        Mode::Polarized => {
            let uniform = vec![1; p.len()];
            let cyclic: Vec<u8> = (0..p.len()).map(|i| (i % 3) as u8 + 1).collect();
            [uniform, cyclic]
                .iter()
                .map(|pols| Word::from_pattern_with_pols(p, pols).expect("generated labels are valid"))
                .collect()
        }
    }
}

#[derive(Clone, Debug, PartialEq)]
pub struct Failure {
    pub word: String,
    pub detail: String,
}

#[derive(Clone, Debug, PartialEq)]
pub struct SuiteResult {
    pub name: &'static str,
    pub cases: usize,
    pub failures: Vec<Failure>,
    pub note: String,
}

impl SuiteResult {
    fn new(name: &'static str) -> Self {
        SuiteResult { name, cases: 0, failures: Vec::new(), note: String::new() }
    }

    pub fn passed(&self) -> bool {
        self.failures.is_empty()
    }

    fn check(&mut self, ok: bool, word: &Word, detail: impl FnOnce() -> String) {
        self.cases += 1;
        if !ok {
            self.failures.push(Failure { word: word.to_string(), detail: detail() });
        }
    }
}

#[derive(Clone, Debug, PartialEq)]
pub struct Report {
    pub max_n: usize,
    pub suites: Vec<SuiteResult>,
}

impl Report {
    pub fn passed(&self) -> bool {
        self.suites.iter().all(SuiteResult::passed)
    }
}

const SHOWN_FAILURES: usize = 3;

impl fmt::Display for Report {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        writeln!(f, "patterns up to length {}", 2 * self.max_n)?;
        for s in &self.suites {
            let status = if s.passed() { "ok" } else { "FAILED" };
            write!(f, "{:<20} {:>6} cases  {:>4} failures  {status}", s.name, s.cases, s.failures.len())?;
            if !s.note.is_empty() {
                write!(f, "  {}", s.note)?;
            }
            writeln!(f)?;
            for fail in s.failures.iter().take(SHOWN_FAILURES) {
                writeln!(f, "  word: {}", fail.word)?;
                for line in fail.detail.lines() {
                    writeln!(f, "    {line}")?;
                }
            }
            if s.failures.len() > SHOWN_FAILURES {
                writeln!(f, "  ... {} more", s.failures.len() - SHOWN_FAILURES)?;
            }
        }
        write!(f, "{}", if self.passed() { "all suites passed" } else { "verification FAILED" })
    }
}

fn both(lhs: &str, l: &ScalarExpr, rhs: &str, r: &ScalarExpr) -> String {
    format!("{lhs}: {}\n{rhs}: {}", l.to_json(), r.to_json())
}

/// Runs the suites; `closed_form` stands in for the pair-partition formula so
/// a deliberately broken variant can be checked to fail.
pub struct Verifier {
    pub max_n: usize,
    pub closed_form: fn(&Word) -> ScalarExpr,
}

impl Verifier {
    pub fn new(max_n: usize) -> Self {
        assert!(max_n <= MAX_N, "max-n is limited to {MAX_N}");
        Verifier { max_n, closed_form: pair_sum_correlator }
    }

    fn all_words(&self) -> impl Iterator<Item = Word> + '_ {
        (1..=2 * self.max_n).flat_map(|len| {
            eps_patterns(len).flat_map(|p| {
                let mut v = words_for(&p, Mode::Scalar);
                v.extend(words_for(&p, Mode::Polarized));
                v
            })
        })
    }

    pub fn oracle_equivalence(&self) -> SuiteResult {
        let mut s = SuiteResult::new("oracle-equivalence");
        for w in self.all_words() {
            let (closed, rec) = ((self.closed_form)(&w), correlator_recursive(&w));
            s.check(closed == rec, &w, || both("pairing sum", &closed, "recursion", &rec));
        }
        s
    }

    pub fn limit_agreement(&self) -> SuiteResult {
        let mut s = SuiteResult::new("limit-agreement");
        for w in self.all_words() {
            let wick = wick_correlator(&w);
            let rewrite = limit_rewrite_correlator(&w);
            match limit_of_pair_sum(&(self.closed_form)(&w)) {
                Ok(mapped) => s.check(mapped == wick && wick == rewrite, &w, || {
                    format!(
                        "{}\n{}",
                        both("limit map", &mapped, "wick", &wick),
                        both("wick", &wick, "rewrite", &rewrite)
                    )
                }),
                Err(e) => s.check(false, &w, || e.to_string()),
            }
        }
        s
    }

    pub fn catalan(&self) -> SuiteResult {
        let mut s = SuiteResult::new("catalan");
        let mut counts = Vec::new();
        for n in 1..=self.max_n {
            let count = eps_patterns(2 * n).filter(|p| !wick_correlator(&Word::from_pattern(p)).is_zero()).count();
            s.cases += 1;
            if count != CATALAN[n - 1] {
                s.failures.push(Failure {
                    word: format!("length {}", 2 * n),
                    detail: format!("{count} patterns with nonzero limit, expected {}", CATALAN[n - 1]),
                });
            }
            counts.push(count.to_string());
        }
        s.note = format!("counts {}", counts.join(","));
        s
    }

    pub fn uniqueness(&self) -> SuiteResult {
        let mut s = SuiteResult::new("noncrossing-unique");
        for len in (2..=2 * self.max_n).step_by(2) {
            for p in eps_patterns(len) {
                let w = Word::from_pattern(&p);
                let pairings = enumerate_pairings(&w);
                let noncrossing: Vec<_> = pairings.iter().filter(|q| q.is_noncrossing()).collect();
                let matched = noncrossing_match(&w);
                let ok = if pairings.is_empty() {
                    matched.is_none()
                } else {
                    noncrossing.len() == 1 && matched.as_ref() == Some(noncrossing[0])
                };
                s.check(ok, &w, || {
                    format!(
                        "{} pairings, {} non-crossing, stack match {}",
                        pairings.len(),
                        noncrossing.len(),
                        matched.map_or("none".to_string(), |m| m.to_string())
                    )
                });
            }
        }
        s
    }

    pub fn adjoint_symmetry(&self) -> SuiteResult {
        let mut s = SuiteResult::new("adjoint-symmetry");
        for w in self.all_words() {
            let lhs = correlator_recursive(&w.adjoint());
            let rhs = correlator_recursive(&w).conj();
            s.check(lhs == rhs, &w, || both("adjoint", &lhs, "conjugate", &rhs));
        }
        s
    }

    pub fn run(&self) -> Report {
        Report {
            max_n: self.max_n,
            suites: vec![
                self.oracle_equivalence(),
                self.limit_agreement(),
                self.catalan(),
                self.uniqueness(),
                self.adjoint_symmetry(),
            ],
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::correlators::{enumerate_pairings, pair_sum_term};
    use crate::symbolic::{PhaseAtom, ScalarTerm};

    #[test]
    fn small_run_passes() {
        let report = Verifier::new(3).run();
        assert!(report.passed(), "{report}");
        let catalan = report.suites.iter().find(|s| s.name == "catalan").unwrap();
        assert_eq!(catalan.note, "counts 1,2,5");
    }

    #[test]
    fn pattern_order() {
        let ps: Vec<String> = eps_patterns(2).map(|p| pattern_string(&p)).collect();
        assert_eq!(ps, ["a a", "a adag", "adag a", "adag adag"]);
    }

    // Straddle sum with the wrong sign.
    fn flipped_straddle(w: &Word) -> ScalarExpr {
        ScalarExpr::from_terms(enumerate_pairings(w).iter().map(|p| {
            let t = pair_sum_term(w, p);
            let phases = t
                .phases
                .iter()
                .map(|ph| {
                    let mut ph = ph.clone();
                    if ph.weighted {
                        ph.arg = ph
                            .arg
                            .iter()
                            .map(|(a, c)| (a.clone(), if matches!(a, PhaseAtom::Dot(..)) { -c } else { c }))
                            .collect();
                    }
                    ph
                })
                .collect();
            ScalarTerm { phases, ..t }
        }))
    }

    #[test]
    fn injected_fault_is_caught_on_nested_four_point() {
        let v = Verifier { max_n: 2, closed_form: flipped_straddle };
        let report = v.run();
        assert!(!report.passed());
        let oracle = &report.suites[0];
        assert!(oracle.failures.iter().any(|f| f.word == "a(t1,k1) a(t2,k2) a†(t3,k3) a†(t4,k4)"));
        assert!(report.to_string().contains("verification FAILED"));
    }
}
