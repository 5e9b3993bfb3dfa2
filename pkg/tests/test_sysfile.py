"""System-file grammar: parsing, validation, diagnostics, round-trips."""

from fractions import Fraction

import pytest

from accesskit import AccessKitError
from accesskit.sysfile import (
    ParseError,
    parse_system,
    pretty,
    to_numeric_step,
    to_system_model,
)
from conftest import SYSTEMS


def read(name):
    return (SYSTEMS / f"{name}.sys").read_text()


ALL_NAMES = [p.stem for p in sorted(SYSTEMS.glob("*.sys"))]


class TestParsing:
    @pytest.mark.parametrize("name", ALL_NAMES)
    def test_corpus_parses(self, name):
        spec = parse_system(read(name))
        assert spec.name
        assert set(spec.updates) == set(spec.states)

    def test_coil_declarations(self):
        spec = parse_system(read("coil"))
        assert spec.name == "coil"
        assert spec.params == ("T", "a", "b")
        assert spec.states == ("x1", "x2")
        assert spec.inputs == ("u",)
        assert not spec.numeric_only

    def test_numeric_flag(self):
        spec = parse_system(read("sinemap"))
        assert spec.numeric_only
        assert spec.free_names() <= {"x", "u"}

    def test_comments_and_blank_lines(self):
        text = "# header\n\nsystem t\nstates x  # trailing\ninputs u\nx' = x + u\n"
        spec = parse_system(text)
        assert spec.name == "t"

    def test_expression_semantics(self):
        spec = parse_system("system t\nstates x\ninputs u\nx' = 1 - 2*x^2/4 + u\n")
        step = to_numeric_step(spec)
        assert step(2.0, 0.0) == pytest.approx(1 - 2 * 4 / 4)

    def test_unary_minus_binds_product(self):
        spec = parse_system("system t\nstates x\ninputs u\nx' = -x^2 + u\n")
        step = to_numeric_step(spec)
        # -x^2 is -(x^2), not (-x)^2
        assert step(3.0, 0.0) == pytest.approx(-9.0)

    def test_division_left_associative(self):
        spec = parse_system("system t\nstates x\ninputs u\nx' = 8/4/2 + 0*x + 0*u\n")
        assert to_numeric_step(spec)(0.0, 0.0) == pytest.approx(1.0)


class TestDiagnostics:
    def err(self, text):
        with pytest.raises(ParseError) as e:
            parse_system(text)
        return e.value

    def test_unexpected_character(self):
        e = self.err("system t\nstates x\ninputs u\nx' = x @ u\n")
        assert e.line == 4
        assert "@" in str(e)

    def test_undeclared_symbol_location(self):
        e = self.err("system t\nstates x\ninputs u\nx' = x + y\n")
        assert e.line == 4
        assert "'y'" in str(e)

    def test_missing_states(self):
        e = self.err("system t\ninputs u\n")
        assert "states" in str(e)

    def test_missing_update(self):
        e = self.err("system t\nstates x1 x2\ninputs u\nx1' = x2\n")
        assert "x2" in str(e)

    def test_duplicate_update(self):
        e = self.err("system t\nstates x\ninputs u\nx' = x\nx' = u\n")
        assert e.line == 5

    def test_duplicate_symbol(self):
        self.err("system t\nstates x\ninputs x\nx' = x\n")

    def test_function_needs_numeric_flag(self):
        e = self.err("system t\nstates x\ninputs u\nx' = sin(x) + u\n")
        assert "numeric" in str(e)

    def test_pi_needs_numeric_flag(self):
        self.err("system t\nstates x\ninputs u\nx' = pi*x + u\n")

    def test_exponent_must_be_integer_literal(self):
        self.err("system t\nstates x\ninputs u\nx' = x^u\n")
        self.err("system t\nstates x\ninputs u\nx' = x^2^3 + u\n")
        self.err("system t\nstates x\ninputs u\nx' = x^-2 + u\n")

    def test_column_reported(self):
        e = self.err("system t\nstates x\ninputs u\nx' = x + + u\n")
        assert e.line == 4
        assert e.column > 5


class TestRoundTrip:
    @pytest.mark.parametrize("name", ALL_NAMES)
    def test_pretty_parse_identity(self, name):
        spec = parse_system(read(name))
        assert parse_system(pretty(spec)) == spec

    def test_pretty_is_canonical(self):
        spec = parse_system("system t\nstates x\ninputs u\nx' = (x + u)*x\n")
        again = parse_system(pretty(spec))
        assert pretty(again) == pretty(spec)


class TestConversions:
    def test_to_system_model_matches_phi(self):
        spec = parse_system(read("coil"))
        sys = to_system_model(spec)
        assert sys.n == 2 and sys.m == 1
        pt = {
            "T": Fraction(1, 10),
            "a": Fraction(2),
            "b": Fraction(3),
            "x1": Fraction(1),
            "x2": Fraction(2),
            "u": Fraction(5),
        }
        # x1 + T*x2 and x2 + T*(a*x1*u - b*x2)
        assert sys.phi[0].evaluate(pt) == Fraction(1) + Fraction(1, 10) * 2
        assert sys.phi[1].evaluate(pt) == 2 + Fraction(1, 10) * (2 * 1 * 5 - 3 * 2)

    def test_numeric_only_refuses_symbolic(self):
        spec = parse_system(read("sinemap"))
        with pytest.raises(AccessKitError):
            to_system_model(spec)

    def test_numeric_step_sinemap(self):
        import math

        spec = parse_system(read("sinemap"))
        step = to_numeric_step(spec)
        x, u = 0.3, 0.7
        assert step(x, u) == pytest.approx(x / 2 + u * math.sin(math.pi * x))

    def test_numeric_step_needs_param_values(self):
        spec = parse_system(read("integrator"))
        step = to_numeric_step(spec)
        assert step(1.0, 2.0) == pytest.approx(3.0)

    def test_numeric_step_dimension_guard(self):
        spec = parse_system(read("coil"))
        with pytest.raises(AccessKitError):
            to_numeric_step(spec, {"T": 0.1, "a": 1, "b": 1})
