//! Small specifications shared by the unit tests.

use crate::model::{PreferenceSpec, PreferenceStatement, Variable};

/// The three-variable CP-net behind the SMV listing of the running example.
pub fn p1() -> PreferenceSpec {
    PreferenceSpec::new("P1")
        .with_variable(Variable::binary("a"))
        .with_variable(Variable::binary("b"))
        .with_variable(Variable::binary("c"))
        .with_statement(PreferenceStatement::new("s1", "a", "0", "1"))
        .with_statement(PreferenceStatement::new("s2", "b", "1", "0").when("c", "0"))
        .with_statement(PreferenceStatement::new("s3", "c", "0", "1").when("b", "0"))
}

/// P1 with `a` made more important than `b`, plus `c=0 : b=1 > b=0`.
pub fn p3() -> PreferenceSpec {
    PreferenceSpec::new("P3")
        .with_variable(Variable::binary("a"))
        .with_variable(Variable::binary("b"))
        .with_variable(Variable::binary("c"))
        .with_statement(PreferenceStatement::new("s1", "a", "0", "1").regardless_of("b"))
        .with_statement(PreferenceStatement::new("s_b", "b", "1", "0").when("c", "0"))
        .with_statement(PreferenceStatement::new("s3", "c", "0", "1").when("b", "0"))
}

/// Two binary variables whose conditional preferences chase each other in a 4-cycle.
pub fn d2() -> PreferenceSpec {
    PreferenceSpec::new("D2")
        .with_variable(Variable::binary("a"))
        .with_variable(Variable::binary("b"))
        .with_statement(PreferenceStatement::new("s1", "a", "1", "0").when("b", "0"))
        .with_statement(PreferenceStatement::new("s2", "a", "0", "1").when("b", "1"))
        .with_statement(PreferenceStatement::new("s3", "b", "1", "0").when("a", "1"))
        .with_statement(PreferenceStatement::new("s4", "b", "0", "1").when("a", "0"))
}

pub fn ternary() -> PreferenceSpec {
    PreferenceSpec::new("X3")
        .with_variable(Variable::binary("a"))
        .with_variable(Variable::new("x", ["0", "1", "2"]))
        .with_statement(PreferenceStatement::new("x01", "x", "0", "1"))
        .with_statement(PreferenceStatement::new("x12", "x", "1", "2").when("a", "0"))
        .with_statement(PreferenceStatement::new("a", "a", "0", "1").regardless_of("x"))
}
