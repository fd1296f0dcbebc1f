import json
import random

import pytest
import sympy

from riglab.cyclo import (
    Inconclusive,
    NonvanishingCertificate,
    RootEntry,
    RootOfUnityMatrix,
    bound_chain_holds,
    bound_report,
    build_root_matrix,
    certify_nonzero,
    check_degree_precondition,
    delta_thm7,
    delta_thm17,
    dfgs_bound,
    dfgs_parameters,
    exact_is_zero,
    lemma11_property_test,
    prime_moduli,
    primes_from,
    random_integer_polynomial,
)
from riglab.errors import ArgumentError
from riglab.polyring import Polynomial, VarRegistry, parse_polynomial

REG2 = VarRegistry(["z1", "z2"])


def sympy_is_zero(g, specs):
    """Oracle: rewrite every root as a power of zeta_N, N = prod p, and reduce mod Phi_N."""
    N = 1
    for p in {s.p for s in specs}:
        N *= p
    w = sympy.Symbol("w")
    expr = 0
    for m, c in g.terms:
        term = sympy.Rational(c.numerator, c.denominator)
        for s, e in zip(specs, m):
            k = s.e * (N // s.p)
            val = w**k + w ** (N - k) if s.real_part else w**k
            term *= val**e
        expr += term
    return sympy.rem(sympy.expand(expr), sympy.cyclotomic_poly(N, w), w) == 0


def test_delta_values():
    assert delta_thm7(3).value == 3**36 == 150094635296999121
    assert delta_thm17(3).value == 774840978
    assert delta_thm17(3).to_json()["factored"] == "2^1 * 3^18"


def test_dfgs_values():
    assert dfgs_parameters(3, 1, "thm17") == (9, 3)
    assert dfgs_parameters(3, 1, "thm7") == (12, 3)
    assert dfgs_bound(3, 1, "thm17") == 19683 * 19684 == 387440172
    assert dfgs_bound(3, 1, "thm7") == 531441 * 531442
    with pytest.raises(ArgumentError):
        dfgs_bound(3, 1, "other")


def test_bound_chain_for_small_n():
    for n in range(3, 9):
        for r in range(1, n):
            assert bound_chain_holds(n, r, "thm7")
            assert bound_chain_holds(n, r, "thm17")
    rep = bound_report(3, 1).to_json()
    assert rep["chain_thm7"] and rep["chain_thm17"]


def test_big_delta_digit_budget():
    out = delta_thm7(8).to_json(digit_budget=50)
    assert out["factored"] == "8^256"
    assert "decimal" not in out or out["decimal"] is None or len(out["decimal"]) <= 50


def test_root_entry_tokens():
    e = RootEntry.parse("rezeta(7)^3")
    assert (e.p, e.e, e.real_part) == (7, 3, True)
    assert RootEntry.parse("zeta(11)") == RootEntry(11)
    for bad in ("zeta(9)", "zeta(7)^7", "eta(7)"):
        with pytest.raises(ArgumentError):
            RootEntry.parse(bad)


def test_root_matrix_json_and_validation():
    M = build_root_matrix(2, [5, 7, 11, 13])
    assert RootOfUnityMatrix.from_json(json.dumps(M.to_json())) == M
    with pytest.raises(ArgumentError):
        build_root_matrix(2, [5, 5, 11, 13])
    with pytest.raises(ArgumentError):
        build_root_matrix(2, [5, 7, 11])
    assert primes_from(7, 9) == [7, 11, 13, 17, 19, 23, 29, 31, 37]


def test_prime_moduli_are_one_mod_product():
    qs = [q for q, _ in zip(prime_moduli([5, 7]), range(5))]
    assert all(sympy.isprime(q) and (q - 1) % 35 == 0 for q in qs)


def test_certificate_for_simple_sum():
    g = parse_polynomial("z1 + z2", REG2)
    specs = [RootEntry(5), RootEntry(7)]
    cert = certify_nonzero(g, specs)
    assert isinstance(cert, NonvanishingCertificate)
    assert cert.verify()
    assert not exact_is_zero(g, specs)


def test_phi5_is_inconclusive_and_zero():
    phi5 = parse_polynomial("1 + z1 + z1^2 + z1^3 + z1^4", REG2)
    specs = [RootEntry(5), RootEntry(7)]
    res = certify_nonzero(phi5, specs)
    assert isinstance(res, Inconclusive) and not res
    assert exact_is_zero(phi5, specs)
    with pytest.raises(ArgumentError):
        check_degree_precondition(phi5, [5, 7])


def test_tampered_certificate_fails_verification():
    g = parse_polynomial("z1 - 2", REG2)
    cert = certify_nonzero(g, [RootEntry(5), RootEntry(7)])
    bad = NonvanishingCertificate(cert.q, {5: 1, 7: cert.root_assignment[7]}, cert.residue, 1)
    assert not bad.verify()
    assert not NonvanishingCertificate(cert.q + 1, cert.root_assignment, cert.residue, 1).verify()


@pytest.mark.parametrize("real_part", [False, True])
def test_exact_zero_test_matches_sympy(real_part):
    rng = random.Random(4)
    primes = [3, 5]
    for trial in range(40):
        specs = [RootEntry(p, rng.randint(1, p - 1), real_part) for p in primes]
        g = random_integer_polynomial(REG2, 4, rng, max_coeff=3)
        assert exact_is_zero(g, specs) == sympy_is_zero(g, specs), str(g)
    # constructed zeros
    specs = [RootEntry(3, 1, real_part), RootEntry(5, 2, real_part)]
    if real_part:
        zero = parse_polynomial("z1 + 1", REG2)          # zeta3 + zeta3^-1 = -1
    else:
        zero = parse_polynomial("z1^2 + z1 + 1", REG2) * parse_polynomial("z2 - 3", REG2)
    assert exact_is_zero(zero, specs) and sympy_is_zero(zero, specs)


def test_certificates_never_contradict_exact_test():
    rng = random.Random(9)
    specs = [RootEntry(5), RootEntry(7)]
    for _ in range(60):
        g = random_integer_polynomial(REG2, 6, rng, max_coeff=2)
        cert = certify_nonzero(g, specs, max_attempts=4, seed=rng.randrange(1000))
        if cert:
            assert cert.verify()
            assert not exact_is_zero(g, specs)


def test_exact_fallback_limited_to_two_primes():
    reg = VarRegistry(["a", "b", "c"])
    g = parse_polynomial("a*b*c", reg)
    with pytest.raises(ArgumentError):
        exact_is_zero(g, [RootEntry(3), RootEntry(5), RootEntry(7)])


def test_low_degree_property_suite():
    rep = lemma11_property_test([5, 7], 3, 100, rng_seed=0)
    assert rep["certified"] == 100
    assert rep["exact_confirmed"] == 100
    assert rep["counterexample_candidates"] == []
    with pytest.raises(ArgumentError):
        lemma11_property_test([5, 7], 4, 10)


def test_certify_rejects_wrong_arity():
    with pytest.raises(ArgumentError):
        certify_nonzero(Polynomial.var(REG2, "z1"), [RootEntry(5)])
