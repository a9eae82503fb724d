//! Random specifications for property tests and benchmarks.
//!
//! Variables are binary and named `v0, v1, ...`; statement ids are `p0, p1, ...`.

use alloc::format;
use alloc::vec::Vec;
use core::ops::RangeInclusive;

use rand::seq::SliceRandom;
use rand::Rng;

use crate::model::{Language, Outcome, PreferenceSpec, PreferenceStatement, Variable};

/// Largest less-important set the generator draws for each language.
pub fn max_omega(language: Language) -> usize {
    match language {
        Language::CpNet => 0,
        Language::TcpNet => 1,
        Language::CpTheory => 3,
    }
}

pub fn binary_variables(name: &str, count: usize) -> PreferenceSpec {
    (0..count).fold(PreferenceSpec::new(name), |spec, i| {
        spec.with_variable(Variable::binary(format!("v{i}")))
    })
}

/// A statement over the variables of `spec` with id `id`: random target and
/// direction, each other variable conditioned with probability 1/3, and up
/// to `max_omega` of the remaining ones made less important.
pub fn random_statement<R: Rng + ?Sized>(
    rng: &mut R,
    spec: &PreferenceSpec,
    id: &str,
    max_omega: usize,
) -> PreferenceStatement {
    let n = spec.variables.len();
    let target = rng.gen_range(0..n);
    let better = rng.gen_range(0..2u32);
    let var = |i: usize| spec.variables[i].name.clone();
    let mut st = PreferenceStatement::new(id, var(target), format!("{better}"), format!("{}", 1 - better));
    let mut rest = Vec::new();
    for i in (0..n).filter(|&i| i != target) {
        if rng.gen_ratio(1, 3) {
            st = st.when(var(i), format!("{}", rng.gen_range(0..2u32)));
        } else {
            rest.push(i);
        }
    }
    let k = rng.gen_range(0..=max_omega.min(rest.len()));
    rest.shuffle(rng);
    let mut omega: Vec<usize> = rest[..k].to_vec();
    omega.sort_unstable();
    for i in omega {
        st = st.regardless_of(var(i));
    }
    st
}

/// A random specification of the given language over binary variables.
pub fn random_spec<R: Rng + ?Sized>(
    rng: &mut R,
    language: Language,
    variables: RangeInclusive<usize>,
    statements: RangeInclusive<usize>,
) -> PreferenceSpec {
    let mut spec = binary_variables("random", rng.gen_range(variables));
    let count = rng.gen_range(statements);
    for k in 0..count {
        let st = random_statement(rng, &spec, &format!("p{k}"), max_omega(language));
        spec.statements.push(st);
    }
    spec
}

/// A random statement whose id is not yet used in `spec`.
pub fn random_extension<R: Rng + ?Sized>(rng: &mut R, spec: &PreferenceSpec, language: Language) -> PreferenceStatement {
    let mut k = spec.statements.len();
    while spec.statement(&format!("p{k}")).is_some() {
        k += 1;
    }
    random_statement(rng, spec, &format!("p{k}"), max_omega(language))
}

/// A CP-net in which every variable has at most `max_parents` parents, all
/// declared before it, and `per_variable` statements conditioned on random
/// assignments of those parents.
pub fn random_cp_net<R: Rng + ?Sized>(
    rng: &mut R,
    variables: usize,
    max_parents: usize,
    per_variable: RangeInclusive<usize>,
) -> PreferenceSpec {
    let mut spec = binary_variables("cpnet", variables);
    let mut k = 0;
    for i in 0..variables {
        let mut earlier: Vec<usize> = (0..i).collect();
        earlier.shuffle(rng);
        let mut parents: Vec<usize> = earlier[..rng.gen_range(0..=max_parents.min(i))].to_vec();
        parents.sort_unstable();
        for _ in 0..rng.gen_range(per_variable.clone()) {
            let better = rng.gen_range(0..2u32);
            let mut st = PreferenceStatement::new(format!("p{k}"), format!("v{i}"), format!("{better}"), format!("{}", 1 - better));
            for &p in &parents {
                st = st.when(format!("v{p}"), format!("{}", rng.gen_range(0..2u32)));
            }
            spec.statements.push(st);
            k += 1;
        }
    }
    spec
}

pub fn random_outcome<R: Rng + ?Sized>(rng: &mut R, spec: &PreferenceSpec) -> Outcome {
    Outcome::from_indices(
        spec.variables
            .iter()
            .map(|v| rng.gen_range(0..v.domain.len() as u32))
            .collect(),
    )
}
