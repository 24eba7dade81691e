import pytest

from tortken.exactnum import Field
from tortken.algebras import (derivation_novikov, derivation_symmetric,
                              divided_power, gametic, integration_product,
                              minus, opposite, osborn, osborn_laurent,
                              p2_product, plus, random_commutative,
                              square_product, standard_derivation, twist)
from tortken.freepoly import FreePoly, catalog, catalog_entry
from tortken.identcheck import (FAILS, HOLDS, INCONCLUSIVE,
                                REFERENCE_DEG4_MATRIX, check_identity,
                                check_identity_windowed, degree3_system,
                                evaluate, identity_space,
                                operator_identity_check, reference_deg4_report,
                                tortken_prime_relation,
                                verify_reference_solutions)

F3 = Field.prime(3)
F5 = Field.prime(5)

TORTKEN = catalog_entry("tortken").poly
COMM = catalog_entry("commutativity").poly


def _dsym(p, m):
    O = divided_power(p, m)
    return derivation_symmetric(O, standard_derivation(O))


def test_evaluate_examples():
    G = gametic(2)
    val = evaluate(COMM.rename_variables({"a": "a", "b": "b"}), G,
                   {"a": G.basis(0), "b": G.basis(1)})
    assert val == {1: 1, 0: -1}  # e1 e2 - e2 e1 = e2 - e1
    O = divided_power(3, 1)
    prod = FreePoly.monomial(("t1", "t2"), ("t1", "t2"))
    assert evaluate(prod, O, {"t1": O.basis(1), "t2": O.basis(1)}) == {2: 2}
    A = square_product(3, 0, 1, 2)
    sigma = {"a": A.basis(0), "b": A.basis(1), "c": A.basis(2),
             "d": A.basis(6)}
    assert evaluate(TORTKEN, A, sigma) == {0: 2}  # -x^(0) over F3


def test_check_identity_verdicts():
    assert check_identity(TORTKEN, plus(osborn(1, 0, 3, 1))).verdict == HOLDS
    out = check_identity(catalog_entry("sokolov").poly, plus(osborn(1, 1, 3, 1)))
    assert out.verdict == FAILS
    # the witness re-evaluates to the stored value
    again = evaluate(out.witness_poly, plus(osborn(1, 1, 3, 1)), out.witness)
    assert again == out.value
    out = check_identity(COMM, gametic(2))
    assert out.verdict == FAILS
    assert out.value == {0: -1, 1: 1}


def test_check_identity_windowed():
    I = integration_product(12)
    out = check_identity_windowed(catalog_entry("leibniz_dual_left").poly, I,
                                  range(0, 4))
    assert out.verdict == HOLDS and out.skipped == 0 and out.checked == 64
    L = osborn_laurent("1/2", 0, -8, 8, "jordan")
    out = check_identity_windowed(TORTKEN, L, range(-2, 3))
    assert out.verdict == HOLDS
    out = check_identity_windowed(TORTKEN, I, [11, 12])
    assert out.verdict == INCONCLUSIVE and out.checked == 0 and out.skipped == 16
    with pytest.raises(ValueError):
        check_identity_windowed(TORTKEN, I, [40])


def test_windowed_rejects_only_escapes():
    I = integration_product(12)
    out = check_identity_windowed(TORTKEN, I, range(0, 4))
    assert out.verdict == HOLDS
    # assignments with total degree sum > 9 escape the window
    escapes = sum(1 for a in range(4) for b in range(4)
                  for c in range(4) for d in range(4) if a + b + c + d > 9)
    assert out.skipped == escapes and out.checked == 256 - escapes


def test_multilinear_reduction_consistency():
    # the exhaustive verdict agrees with dense random sampling
    import random
    for A, expected in ((plus(osborn(1, 0, 3, 1)), True),
                        (random_commutative(3, F5, seed=0), False)):
        exhaustive = check_identity(TORTKEN, A).verdict == HOLDS
        assert exhaustive is expected
        rng = random.Random(7)
        sampled = True
        for _ in range(64):
            sigma = {v: {i: rng.randrange(A.field.char) for i in range(A.dim)}
                     for v in TORTKEN.variables}
            sigma = {v: {i: c for i, c in e.items() if c}
                     for v, e in sigma.items()}
            if evaluate(TORTKEN, A, sigma):
                sampled = False
                break
        assert sampled is expected


def test_polarization_path():
    gj = catalog_entry("gametic_jordan")
    out = check_identity(gj.poly, plus(gametic(3)))
    assert out.verdict == HOLDS
    assert out.caveat is None
    out = check_identity(gj.poly, osborn(1, 0, 5, 1))
    assert out.verdict == FAILS
    # char <= degree records a caveat
    out = check_identity(gj.poly, plus(osborn(0, 0, 3, 1)))
    assert out.caveat is not None


def test_identity_space_reference():
    rep = reference_deg4_report()
    assert [[int(x) for x in row] for row in rep.matrix.data] == \
        [list(r) for r in REFERENCE_DEG4_MATRIX]
    assert rep.rank == 10
    assert rep.nullity == 5
    assert verify_reference_solutions(rep)
    assert rep.flags["tortken"] and rep.flags["alt_right_mult"]
    assert not rep.flags["sokolov"]


def test_identity_space_row_one_sanity():
    # ((x*x)*x)*1 = 4 under the derivation product: column 4 of row 1
    rep = reference_deg4_report()
    assert rep.matrix.data[0][3] == 4


def test_verify_rejects_perturbation():
    rep = reference_deg4_report()
    rep.matrix.data[0][0] += 1
    assert not verify_reference_solutions(rep)


def test_identity_space_nullspace_consistency():
    A = plus(osborn(0, 0, 3, 2))
    subs = [tuple(A.basis(i) for i in t)
            for t in __import__("itertools").product(range(A.dim), repeat=3)]
    rep = identity_space(3, A, subs)
    # degree-3 space of this commutative algebra is only commutativity
    assert rep.rank == 3 and rep.nullity == 0


def test_degree3_system():
    sys3 = degree3_system()
    assert sys3.abs_det == 54
    assert [[int(x) for x in row] for row in sys3.matrix.data] == \
        [[5, 7, 6], [7, 6, 5], [6, 5, 7]]
    assert sys3.char3_nonsingular


def test_tortken_prime():
    assert tortken_prime_relation(1).verdict == HOLDS
    assert tortken_prime_relation(2).verdict == HOLDS
    tp = catalog_entry("tortken_prime").poly
    assert check_identity(tp, _dsym(3, 1)).verdict == HOLDS
    out = check_identity(tp, _dsym(3, 2))
    assert out.verdict == FAILS
    # the witness shows a nonzero third derivative of the fourfold product
    assert evaluate(tp, _dsym(3, 2), out.witness) == out.value


def test_operator_identity_check():
    A = osborn(1, 0, 3, 1)
    assert all(operator_identity_check(A, A.basis(i), A.basis(j), A.basis(k))
               for i in range(3) for j in range(3) for k in range(3))
    B = plus(osborn(0, 0, 3, 2))
    triples = [(0, 1, 2), (1, 2, 3), (2, 5, 8), (0, 4, 7)]
    assert all(operator_identity_check(B, B.basis(i), B.basis(j), B.basis(k))
               for i, j, k in triples)
    R = random_commutative(3, F5, seed=1)
    found_nonzero = any(
        not operator_identity_check(R, R.basis(i), R.basis(j), R.basis(k))
        for i in range(3) for j in range(3) for k in range(3))
    assert found_nonzero


def test_twisted_algebra_satisfies_alternating_sum():
    import random
    A = osborn(1, 0, 5, 1)
    alt = catalog_entry("alt_right_mult").poly
    for seed in (0, 1, 2):
        rng = random.Random(seed)
        images = [{i: rng.randrange(5) for i in range(5)} for _ in range(5)]
        images = [{i: c for i, c in e.items() if c} for e in images]
        T = twist(A, images)
        assert check_identity(alt, T).verdict == HOLDS


def test_lie_functor():
    A = derivation_novikov(divided_power(5, 1),
                           standard_derivation(divided_power(5, 1)))
    L = minus(A)
    assert check_identity(catalog_entry("jacobi").poly, L).verdict == HOLDS
    assert check_identity(catalog_entry("anticommutativity").poly, L).verdict \
        == HOLDS


def test_novikov_constructors_satisfy_defining_identities():
    rs = catalog_entry("right_symmetric").poly
    lc = catalog_entry("left_commutative").poly
    for A in (derivation_novikov(divided_power(3, 1),
                                 standard_derivation(divided_power(3, 1))),
              osborn(1, 1, 3, 1), osborn(1, 0, 5, 1), gametic(3)):
        assert check_identity(rs, A).verdict == HOLDS
        assert check_identity(lc, A).verdict == HOLDS


def test_leibniz_dual_implies_tortken_windowed():
    I = integration_product(12)
    for name in ("leibniz_dual_left", "right_commutative", "tortken"):
        assert check_identity_windowed(catalog_entry(name).poly, I,
                                       range(0, 4)).verdict == HOLDS
    out = check_identity_windowed(COMM, I, range(0, 4))
    assert out.verdict == FAILS
    # opposite of a right tortken algebra is left tortken
    out = check_identity_windowed(catalog_entry("tortken_left").poly,
                                  opposite(I), range(0, 4))
    assert out.verdict == HOLDS


def test_unit_theorem_instances():
    # tortken algebras with a unit are associative and commutative
    zoo = [divided_power(3, 1), divided_power(3, 2), divided_power(5, 1)]
    for A in zoo:
        if check_identity(TORTKEN, A).verdict == HOLDS:
            preds = A.predicates()
            if preds["unit"] is not None:
                assert preds["is_associative"] and preds["is_commutative"]
    # right-unit-only tortken algebra satisfies the right unit law
    G = opposite(gametic(3))
    assert check_identity(TORTKEN, G).verdict == HOLDS
    preds = G.predicates()
    assert preds["has_right_unit"] and not preds["has_left_unit"]
    assert check_identity(catalog_entry("right_unit_law").poly, G).verdict \
        == HOLDS
    # gametic itself fails tortken, so the left-unit clause does not apply
    assert check_identity(TORTKEN, gametic(3)).verdict == FAILS
    assert not gametic(3).is_commutative()


DEG5_ALWAYS = ("alt_right_mult", "cyclic_assoc_middle", "cyclic_assoc_outer",
               "deg5_i", "deg5_iii", "deg5_iv")
DEG5_NOT3 = ("deg5_ii", "cyclic_assoc_nested")


@pytest.mark.parametrize("make,char", [
    (lambda: plus(osborn(0, 0, 3, 1)), 3),
    (lambda: plus(osborn(1, 1, 5, 1)), 5),
    (lambda: square_product(5, 0, 0, 1), 5),
    (lambda: p2_product(1, 3), 2),
    (lambda: plus(gametic(3)), 0),
])
def test_deg5_consequences_small(make, char):
    A = make()
    for name in DEG5_ALWAYS:
        assert check_identity(catalog_entry(name).poly, A).verdict == HOLDS, name
    if char not in (2, 3):
        for name in DEG5_NOT3:
            assert check_identity(catalog_entry(name).poly, A).verdict == \
                HOLDS, name


def test_degree5_identity_space_report():
    # degree-5 space of the smallest derivation jordan product: dimensions are
    # engine-derived regression pins; every holding degree-5 catalog identity
    # must lie in the kernel
    import itertools
    A = plus(osborn(0, 0, 3, 1))
    subs = [tuple(A.basis(i) for i in t)
            for t in itertools.product(range(3), repeat=5)]
    rep = identity_space(5, A, subs)
    assert (rep.matrix.cols, rep.rank, rep.nullity) == (105, 26, 79)
    f = A.field
    for entry in catalog():
        if entry.degree != 5 or len(entry.variables) != 5:
            continue
        if check_identity(entry.poly, A).verdict == HOLDS:
            from tortken.freepoly import mu_vector
            vec = [f.coerce(c) for c in mu_vector(entry.poly, rep.monomials)]
            assert all(f.is_zero(x) for x in rep.matrix.mul_vec(vec)), entry.name


def test_seeded_random_commutative_fails_tortken_with_witness():
    R = random_commutative(3, F5, seed=0)
    out = check_identity(TORTKEN, R)
    assert out.verdict == FAILS
    assert evaluate(TORTKEN, R, out.witness) == out.value


def test_outcome_json():
    out = check_identity(COMM, gametic(2))
    d = out.to_json_dict(gametic(2))
    assert d["verdict"] == FAILS and "witness" in d
