import pytest

from ekor_atlas.coxeter import format_finite_type
from ekor_atlas.rootdata import RootDatum, RootDatumError
from ekor_atlas.siegel import siegel_datum


def test_siegel_cartan_g2():
    datum = siegel_datum(2)
    # long root in the last slot: entries <coroot_i, root_j>
    assert datum.cartan == ((2, -2), (-1, 2))
    assert format_finite_type(datum.finite_coxeter.finite_type(
        frozenset({0, 1}))) == "C2"


def test_siegel_positive_roots():
    for g in (1, 2, 3):
        datum = siegel_datum(g)
        assert len(datum.positive_roots) == g * g


def test_siegel_g2_root_values():
    datum = siegel_datum(2)
    # functionals on the basis (b1, b2, b3): x1-x2, x2-x3, x1-x3, x1-x4
    assert set(datum.positive_roots) == {
        (1, -1, 0), (0, 2, -1), (1, 1, -1), (2, 0, -1)}


def test_theta_is_highest():
    datum = siegel_datum(2)
    assert datum.theta == ((2, 0, -1),)
    # highest coroot is short: e_1 - e_2g
    assert datum.theta_coroot == ((1, 0, 0),)
    assert datum.from_lattice(datum.theta_coroot[0]) == (1, 0, 0, -1)


def test_two_rho_pairs_to_length():
    datum = siegel_datum(1)
    # single positive root x1 - x2
    assert datum.two_rho == (2, -1)


def test_to_lattice_rejects_outside_span():
    datum = siegel_datum(2)
    with pytest.raises(RootDatumError):
        datum.to_lattice((1, 0, 0, 0))  # unequal pair sums
    with pytest.raises(RootDatumError):
        datum.to_lattice((1, 1, 1, 3), integral=True)  # in span over Q only


def test_lattice_round_trip():
    datum = siegel_datum(3)
    for v in [(1, 1, 1, 0, 0, 0), (0, 0, 0, 0, 0, 0), (2, 1, 0, 2, 1, 0)]:
        assert datum.from_lattice(datum.to_lattice(v)) == v


def test_cartan_diagonal_enforced():
    with pytest.raises(RootDatumError):
        RootDatum(dim=2, basis=((1, 0), (0, 1)),
                  simple_roots=((1, -1),), simple_coroots=((2, -2),))


def test_dependent_basis_rejected():
    with pytest.raises(RootDatumError):
        RootDatum(dim=2, basis=((1, 0), (2, 0)),
                  simple_roots=((1, -1),), simple_coroots=((1, -1),))


def test_ambient_weyl_must_restrict():
    d = siegel_datum(1)
    bad = (((0, 1), (1, 0)),)  # swaps coordinates but datum has one reflection
    # swapping coordinates 0,1 does restrict to the reflection on X for g=1,
    # so craft an actually wrong matrix instead
    wrong = (((1, 0), (0, 1)),)
    with pytest.raises(RootDatumError):
        RootDatum(dim=2, basis=d.basis, simple_roots=d.simple_roots,
                  simple_coroots=d.simple_coroots, ambient_weyl=wrong)
    RootDatum(dim=2, basis=d.basis, simple_roots=d.simple_roots,
              simple_coroots=d.simple_coroots, ambient_weyl=bad)


def test_frobenius_must_permute_coroots():
    with pytest.raises(RootDatumError):
        RootDatum(
            dim=3, basis=((1, 0, 0), (0, 1, 0), (0, 0, 1)),
            simple_roots=((1, -1, 0), (0, 1, -1)),
            simple_coroots=((1, -1, 0), (0, 1, -1)),
            frobenius=((0, 0, 1), (0, 1, 0), (1, 0, 0)),  # reversal alone
        )


def test_frobenius_twist_accepted(gl3_twisted):
    datum = gl3_twisted.datum
    assert datum.frobenius_nodes == (1, 0)
    assert datum.frobenius_order == 2
