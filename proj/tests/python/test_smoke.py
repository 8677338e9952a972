import math

import pytest

import sudler


def test_fibonacci_and_zeckendorf():
    assert sudler.fib(100) == 354224848179261915075
    assert sudler.zeckendorf(100) == [11, 6, 4]


def test_first_product():
    p = sudler.sudler_product(1)
    w = (math.sqrt(5) - 1) / 2
    assert p["value"] == pytest.approx(2 * math.sin(math.pi * w), rel=1e-15)


def test_decomposition_closes():
    d = sudler.decompose(15)
    assert d["relative_residual"] < 1e-9
    assert d["A"]["value"] * d["B"]["value"] * d["C"]["value"] == pytest.approx(d["Q"]["value"], rel=1e-13)


def test_subsequence_near_limit():
    q = sudler.fibonacci_product(25)["value"]
    assert abs(q - 2.407) < 0.05


def test_rational_product():
    assert sudler.rational_sudler_product(1, 97, 96) == pytest.approx(97, rel=1e-12)


def test_context_and_errors():
    ctx = sudler.GoldenCtx(256, workers=2)
    assert ctx.precision == 256
    a = sudler.sudler_product(5000, ctx)["log"]
    b = sudler.sudler_product(5000)["log"]
    assert a == pytest.approx(b, abs=1e-13)
    with pytest.raises(sudler.PrecisionError):
        sudler.GoldenCtx(16)
    with pytest.raises(sudler.DomainError):
        sudler.rational_sudler_product(2, 4, 1)
    assert issubclass(sudler.DomainError, sudler.Error)


def test_cotangent_and_identities():
    assert sudler.cotangent_sum(11)["within"]
    ok, devs = sudler.identity_suite(30, samples=5)
    assert ok and max(devs.values()) < 1e-11


def test_profile_matches_products():
    rows = sudler.profile(10, 5)
    k, value, log_value = rows[-1]
    assert value == pytest.approx(sudler.sudler_product(k)["value"], rel=1e-14)
    assert log_value == pytest.approx(math.log(value), rel=1e-14)


def test_cli_roundtrip():
    code, out, err = sudler.cli(["q", "1"])
    assert code == 0 and out.startswith("n = 1")
    code, _, err = sudler.cli(["q"])
    assert code == 2 and err
