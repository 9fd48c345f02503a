import pytest

from spartan.checker import check_module, infer_closed, normalize_closed
from spartan.env import GlobalEnv
from spartan.errors import (
    CheckOnlyTermInInferPosition, DepthExceeded, LevelArityMismatch, NotAFunction, NotAPair,
    NotAUniverse, ParseError, TypeMismatch, UnboundName, UnsafeAssume,
)
from spartan.evaluator import quote_type
from spartan.parser import parse_module, parse_term
from spartan.printer import print_term
from spartan.syntax import as_numeral

PRELUDE = r"""
def id {u} (X : U u) (x : X) : X := x
def plus (n m : Nat) : Nat := natInd {0} (\_ -> Nat) m (\_ r -> succ r) n
def swap {u v} (A : U u) (B : U v) (p : A * B) : B * A := (snd p, fst p)
"""


def load(src: str, genv=None, **kw) -> GlobalEnv:
    return check_module(parse_module(src).declarations, genv, **kw)


@pytest.fixture(scope="module")
def prelude():
    return load(PRELUDE)


def type_of(genv, src):
    _, ty = infer_closed(genv, parse_term(src))
    return print_term(quote_type(0, ty))


def nf(genv, src):
    t, _ = normalize_closed(genv, parse_term(src))
    return t


class TestAccepts:
    def test_identity_is_polymorphic(self, prelude):
        assert type_of(prelude, "id {1} (U 0)") == "U lzero -> U lzero"
        assert as_numeral(nf(prelude, "id {0} Nat 3")) == 3

    def test_arithmetic_computes(self, prelude):
        assert as_numeral(nf(prelude, "plus 3 4")) == 7

    def test_dependent_pairs(self, prelude):
        load("def p : (n : Nat) * Id {0} Nat n n := (2, refl {0} Nat 2)", prelude)

    def test_definitional_unfolding_in_types(self, prelude):
        load("def seven : Id {0} Nat (plus 3 4) 7 := refl {0} Nat 7", prelude)

    def test_pi_eta_is_definitional(self, prelude):
        load(r"def e (f : Nat -> Nat) : Id {0} (Nat -> Nat) f (\x -> f x) := refl {0} (Nat -> Nat) f",
             prelude)

    def test_sigma_eta_is_definitional(self, prelude):
        load("def e (p : Nat * Nat) : Id {0} (Nat * Nat) p (fst p, snd p) := refl {0} (Nat * Nat) p",
             prelude)

    def test_cumulativity_is_by_lift_only(self, prelude):
        load("def l : Lift {0, 1} Nat := lift {0, 1} Nat 3", prelude)
        with pytest.raises(TypeMismatch):
            load("def bad : U 2 := U 0", prelude)

    def test_universe_levels_compute(self, prelude):
        load("def t {u v} : U (lsuc (lmax u v)) := U (lmax v u)", prelude)

    def test_ascription(self, prelude):
        assert as_numeral(nf(prelude, r"((\x -> succ x) : Nat -> Nat) 1")) == 2


@pytest.mark.parametrize("src, error", [
    ("def bad : Id {0} Nat 1 0 := refl {0} Nat 1", TypeMismatch),
    ("def bad : Nat := (succ zero) zero", NotAFunction),
    ("def bad : Nat := id {0, 0} Nat zero", LevelArityMismatch),
    ("def bad : Nat := id Nat zero", LevelArityMismatch),
    ("def bad {u} : U u := U u", TypeMismatch),
    ("def bad : Nat := times 1 1", UnboundName),
    ("def bad : U (lsuc u) := U u", UnboundName),
    ("def id : Nat := 1", UnboundName),
    ("def bad : Nat := fst zero", NotAPair),
    ("def bad (x : zero) : Nat := zero", NotAUniverse),
    (r"def bad : Nat := (\x -> x) zero", CheckOnlyTermInInferPosition),
    ("def bad : Nat := fst (zero, zero)", CheckOnlyTermInInferPosition),
    (r"def bad : Nat := \x -> x", NotAFunction),
    ("def bad (x : Unit) : Id {0} Unit x star := refl {0} Unit x", TypeMismatch),
    ("def bad (n : Nat) : Id {0} Nat (plus n 0) n := refl {0} Nat n", TypeMismatch),
])
def test_errors(prelude, src, error):
    with pytest.raises(error):
        load(src, prelude)


def test_errors_name_their_declaration(prelude):
    with pytest.raises(TypeMismatch) as info:
        load("def fine : Nat := 1\ndef broken : Nat := star", prelude)
    assert info.value.decl == "broken"
    assert info.value.span.line == 2
    assert any("Nat" in line for line in info.value.details())


def test_builtins_cannot_be_redefined():
    with pytest.raises(ParseError):
        load("def Nat : Nat := 1")


def test_safe_mode_rejects_assumptions():
    src = "assume ax : Empty"
    assert load(src).lookup("ax").is_assumption
    with pytest.raises(UnsafeAssume):
        load(src, safe=True)


def test_safe_mode_allows_definitions(prelude):
    load("def two : Nat := 2", prelude, safe=True)


def test_firing_budget(prelude):
    src = "def big : Id {0} Nat (plus 30 30) 60 := refl {0} Nat 60"
    load(src, prelude)
    with pytest.raises(DepthExceeded):
        load(src, prelude, max_depth=5)


def test_environment_is_persistent(prelude):
    extended = load("def three : Nat := 3", prelude)
    assert "three" in extended and "three" not in prelude
