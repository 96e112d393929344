from fractions import Fraction

import mpmath
import pytest

from aitbench.errors import ConfigError, EmptyDomain, NotIncreasing, PrecisionUnreachable
from aitbench.fixtures import fixture_machines
from aitbench.foundation import Interval, binary_prefix, power_interval
from aitbench.machine import InterpMachine, make_table_machine
from aitbench.thermo import (
    certified_prefix,
    omega_approx,
    phase_sweep,
    t_convergence_partial,
    thermo_suite,
    z_approx,
    z_by_output,
    z_prefix_bits,
    z_restricted,
)

from oracles import census_reference, mp

mpmath.mp.prec = 300

TQ = make_table_machine([("0", "", 1), ("11", "1", 2)])
INTERP = InterpMachine(16)


def encloses(iv: Interval, value) -> bool:
    return mp(iv.lo) <= value <= mp(iv.hi)


def reference_quantities(lengths, T):
    """Z, F, E, S, C straight from the defining sums, in high-precision floats."""
    t = mp(T)
    w = [mpmath.power(2, -mpmath.mpf(l) / t) for l in lengths]
    z = mpmath.fsum(w)
    a = mpmath.fsum(l * x for l, x in zip(lengths, w))
    b = mpmath.fsum(l * l * x for l, x in zip(lengths, w))
    e = a / z
    f = -t * mpmath.log(z, 2)
    s = (e - f) / t
    c = mpmath.log(2) / t ** 2 * (b / z - e * e)
    return {"Z": z, "F": f, "E": e, "S": s, "C": c}


def test_omega_examples():
    om = omega_approx(TQ)
    assert (om.value, om.exact) == (Fraction(3, 4), True)
    assert omega_approx(make_table_machine([])).value == 0
    om = omega_approx(INTERP, 5)
    assert om.value == 2 * Fraction(1, 4) + 4 * Fraction(1, 32) == Fraction(5, 8)
    assert om.exact


def test_omega_incomplete_budget_is_flagged():
    om = omega_approx(INTERP, 5, 6)
    assert not om.exact
    assert om.value < Fraction(5, 8)


def test_interp_requires_a_length_horizon():
    with pytest.raises(ConfigError):
        omega_approx(INTERP)


def test_z_examples():
    assert z_approx(TQ, Fraction(1, 2)) == Interval.point(Fraction(5, 16))
    for m in fixture_machines():
        assert z_approx(m, 1) == Interval.point(omega_approx(m).value)
    iv = z_approx(make_table_machine([("0", "", 1)]), Fraction(2, 3), precision=20)
    assert iv.width <= Fraction(1, 1 << 20)
    assert encloses(iv, mpmath.power(2, mpmath.mpf(-3) / 2))


def test_temperature_must_be_positive():
    with pytest.raises(ConfigError):
        z_approx(TQ, 0)
    with pytest.raises(ConfigError):
        z_approx(TQ, 1, precision=0)


def test_z_restricted_examples():
    assert z_restricted(TQ, 1, "") == Interval.point(Fraction(1, 2))
    assert z_restricted(TQ, 1, "0") == Interval.point(0)
    for m in fixture_machines()[:8]:
        for T in (Fraction(1, 2), 1):
            parts = z_by_output(m, T)
            total = sum((iv.lo for iv in parts.values()), Fraction(0))
            assert total == z_approx(m, T).lo


def test_thermo_suite_single_program():
    report = thermo_suite(make_table_machine([("0", "", 1)]), 1)
    assert report.z == Interval.point(Fraction(1, 2))
    assert report.f.contains(1) and report.e.contains(1) and report.s.contains(0)


def test_thermo_suite_two_programs():
    report = thermo_suite(TQ, 1)
    assert report.z == Interval.point(Fraction(3, 4))
    assert report.e.contains(Fraction(4, 3))
    assert report.within_precision


def test_thermo_suite_empty_domain():
    with pytest.raises(EmptyDomain):
        thermo_suite(make_table_machine([]), 1)


@pytest.mark.parametrize("T", [Fraction(1, 4), Fraction(1, 2), Fraction(3, 4), Fraction(1),
                               Fraction(5, 3)])
def test_thermo_suite_matches_reference(T):
    for m in fixture_machines()[:6] + [INTERP]:
        report = thermo_suite(m, T, max_len=9 if m is INTERP else None)
        lengths = [len(p) for p in m.candidates(9)]
        ref = reference_quantities(lengths, T)
        for name, iv in report.quantities().items():
            assert iv.width <= Fraction(1, 1 << 20), name
            assert encloses(iv, ref[name]), name


def test_heat_capacity_matches_finite_difference():
    h = Fraction(1, 1 << 10)
    for m in fixture_machines()[:5]:
        for T in (Fraction(1, 2), Fraction(1)):
            c = thermo_suite(m, T, precision=30).c
            up = thermo_suite(m, T + h, precision=30).e
            down = thermo_suite(m, T - h, precision=30).e
            diff = (up - down) / (2 * h)
            slack = Fraction(1, 1 << 12)
            assert diff.lo - slack <= c.hi and c.lo <= diff.hi + slack


def test_z_increases_with_temperature():
    temps = [Fraction(1, 4), Fraction(1, 3), Fraction(1, 2), Fraction(1), Fraction(2)]
    for m in fixture_machines()[:8]:
        zs = [z_approx(m, T, precision=40) for T in temps]
        for a, b in zip(zs, zs[1:]):
            assert a.hi < b.lo


def test_z_bounded_by_omega_below_unit_temperature():
    for m in fixture_machines():
        omega = omega_approx(m).value
        for T in (Fraction(1, 4), Fraction(1, 2), Fraction(3, 4), Fraction(1)):
            assert z_approx(m, T).hi <= omega <= 1


def test_lower_bounds_grow_with_truncation():
    previous = Fraction(0)
    for max_len in range(1, 16):
        for steps in (max_len, max_len + 4, 10 ** 6):
            lo = z_approx(INTERP, Fraction(3, 4), max_len, steps).lo
            assert lo >= previous or steps < 10 ** 6
        lo = z_approx(INTERP, Fraction(3, 4), max_len).lo
        assert lo >= previous
        previous = lo


def test_phase_sweep_interp():
    table = phase_sweep(INTERP, [Fraction(1, 2), 1, Fraction(5, 4)], [10, 20, 40])
    for t, L, iv in table.rows():
        assert encloses(iv, census_reference(L, t))
    assert all(iv.hi <= 1 for iv in table.column(1))
    hot = table.column(Fraction(5, 4))
    assert hot[2].lo >= 2 * hot[1].hi
    # frozen from the closed-form census
    assert abs(census_reference(20, Fraction(5, 4)) - mpmath.mpf("2.284587145")) < 1e-9
    assert abs(census_reference(40, Fraction(5, 4)) - mpmath.mpf("6.035310910")) < 1e-9


def test_phase_sweep_table_machine_is_constant_past_its_longest_key():
    m = fixture_machines()[5]
    longest = m.max_program_length
    table = phase_sweep(m, [Fraction(1, 2), Fraction(3, 2)], range(longest, longest + 4))
    for T in table.temperatures:
        col = table.column(T)
        assert all(iv == col[0] for iv in col)


def test_phase_sweep_columns_non_decreasing():
    table = phase_sweep(INTERP, [Fraction(1, 3), Fraction(3, 2)], list(range(0, 30, 3)))
    for T in table.temperatures:
        col = table.column(T)
        assert all(a.lo <= b.lo for a, b in zip(col, col[1:]))


def test_empty_grid():
    table = phase_sweep(TQ, [], [1, 2])
    assert list(table.rows()) == []


def test_t_convergence_partial_examples():
    assert t_convergence_partial([Fraction(1, 3)], 1) == Interval.point(0)
    assert t_convergence_partial([0, Fraction(1, 2), Fraction(3, 4)], 1) == \
        Interval.point(Fraction(3, 4))
    iv = t_convergence_partial([0, Fraction(1, 4), Fraction(1, 2)], Fraction(1, 2))
    assert iv.contains(1)
    iv = t_convergence_partial([0, Fraction(1, 3), Fraction(1, 2)], Fraction(2, 3), precision=40)
    ref = mpmath.power(mpmath.mpf(1) / 3, mpmath.mpf(2) / 3) + \
        mpmath.power(mpmath.mpf(1) / 6, mpmath.mpf(2) / 3)
    assert encloses(iv, ref) and iv.width <= Fraction(1, 1 << 40)
    with pytest.raises(NotIncreasing):
        t_convergence_partial([0, 1, 1], 1)


def test_certified_prefix():
    third = lambda p: Interval(Fraction(1, 3) - Fraction(1, 1 << p), Fraction(1, 3))
    assert certified_prefix(third, 8) == binary_prefix(Fraction(1, 3), 8)
    # an enclosure that never separates from the grid point 1/2
    stuck = lambda p: Interval(Fraction(1, 2) - Fraction(1, 1 << p), Fraction(1, 2))
    with pytest.raises(PrecisionUnreachable):
        certified_prefix(stuck, 4, limit=256)


def test_z_prefix_bits():
    assert z_prefix_bits(TQ, Fraction(1, 2), 6) == "010100"
    bits = z_prefix_bits(TQ, Fraction(2, 3), 20)
    ref = mpmath.power(2, -mpmath.mpf(3) / 2) + mpmath.power(2, -mpmath.mpf(3))
    assert bits == format(int(mpmath.floor(ref * 2 ** 20)), "020b")
    # interval arithmetic agrees with the point case
    assert power_interval(2, -2, 10).is_point
